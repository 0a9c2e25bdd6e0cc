//! Brute-force oracles shared by the integration tests and the acceptance
//! runner. Nothing here calls the reduction algorithms it checks: group
//! elements are integer matrices, distances are inversion counts and
//! projections are found by scanning whole residues.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use ibuild::coxeter::{CoxeterSystem, ProjectionCase, Residue, TypeSet, WeylElement};

pub type IntMat = Vec<Vec<i64>>;

/// Matrix of `s_i` on simple-root coordinates, straight from the Cartan matrix.
pub fn reflection_matrix(sys: &CoxeterSystem, i: usize) -> IntMat {
    let r = sys.rank();
    let a = sys.cartan_matrix();
    let mut m = vec![vec![0; r]; r];
    for j in 0..r {
        m[j][j] = 1;
        m[i][j] -= a[i][j];
    }
    m
}

pub fn mat_mul(a: &IntMat, b: &IntMat) -> IntMat {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum()).collect()).collect()
}

pub fn word_matrix(sys: &CoxeterSystem, word: &[u8]) -> IntMat {
    let r = sys.rank();
    let mut m: IntMat = (0..r).map(|i| (0..r).map(|j| (i == j) as i64).collect()).collect();
    for &i in word {
        m = mat_mul(&m, &reflection_matrix(sys, i as usize));
    }
    m
}

/// Closure of the generators under multiplication, as matrices.
pub fn matrix_closure(sys: &CoxeterSystem, ty: TypeSet) -> HashSet<IntMat> {
    let r = sys.rank();
    let id: IntMat = (0..r).map(|i| (0..r).map(|j| (i == j) as i64).collect()).collect();
    let mut seen = HashSet::new();
    let mut q = VecDeque::new();
    seen.insert(id.clone());
    q.push_back(id);
    while let Some(m) = q.pop_front() {
        for i in ty.iter() {
            let x = mat_mul(&m, &reflection_matrix(sys, i));
            if seen.insert(x.clone()) {
                q.push_back(x);
            }
        }
    }
    seen
}

fn apply(m: &IntMat, v: &[i64]) -> Vec<i64> {
    m.iter().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
}

fn positive(v: &[i64]) -> bool {
    v.iter().all(|&x| x >= 0)
}

/// Length as the number of positive roots made negative.
pub fn inversion_count(sys: &CoxeterSystem, m: &IntMat) -> usize {
    sys.positive_roots().iter().filter(|b| !positive(&apply(m, b))).count()
}

/// All elements as (matrix, inversion count), keyed by matrix.
pub struct Oracle<'a> {
    pub sys: &'a CoxeterSystem,
    pub elements: Vec<WeylElement>,
    pub mats: HashMap<WeylElement, IntMat>,
    pub by_mat: HashMap<IntMat, WeylElement>,
}

impl<'a> Oracle<'a> {
    pub fn new(sys: &'a CoxeterSystem) -> Oracle<'a> {
        let elements = sys.enumerate().unwrap();
        let mats: HashMap<_, _> = elements.iter().map(|w| (w.clone(), word_matrix(sys, w.word()))).collect();
        let by_mat = mats.iter().map(|(w, m)| (m.clone(), w.clone())).collect();
        Oracle { sys, elements, mats, by_mat }
    }

    pub fn mul(&self, a: &WeylElement, b: &WeylElement) -> WeylElement {
        self.by_mat[&mat_mul(&self.mats[a], &self.mats[b])].clone()
    }

    pub fn inv(&self, a: &WeylElement) -> WeylElement {
        self.elements.iter().find(|x| self.mul(a, x).is_identity()).unwrap().clone()
    }

    pub fn len(&self, a: &WeylElement) -> usize {
        inversion_count(self.sys, &self.mats[a])
    }

    pub fn dist(&self, a: &WeylElement, b: &WeylElement) -> usize {
        self.len(&self.mul(&self.inv(a), b))
    }

    pub fn parabolic(&self, ty: TypeSet) -> Vec<WeylElement> {
        matrix_closure(self.sys, ty).into_iter().map(|m| self.by_mat[&m].clone()).collect()
    }

    pub fn coset(&self, rep: &WeylElement, ty: TypeSet) -> BTreeSet<WeylElement> {
        self.parabolic(ty).iter().map(|x| self.mul(rep, x)).collect()
    }

    /// The unique nearest member, or `None` if the minimum is not unique.
    pub fn nearest(&self, members: &BTreeSet<WeylElement>, c: &WeylElement) -> Option<WeylElement> {
        let best = members.iter().map(|x| self.dist(c, x)).min()?;
        let hits: Vec<_> = members.iter().filter(|x| self.dist(c, x) == best).collect();
        (hits.len() == 1).then(|| hits[0].clone())
    }

    /// Distinct residues of type `ty`, each as its member set.
    pub fn residues(&self, ty: TypeSet) -> Vec<BTreeSet<WeylElement>> {
        let mut seen = BTreeSet::new();
        for w in &self.elements {
            seen.insert(self.coset(w, ty));
        }
        seen.into_iter().collect()
    }
}

pub fn proper_types(rank: usize) -> Vec<TypeSet> {
    TypeSet::all(rank).filter(|t| *t != TypeSet::full(rank)).collect()
}

pub struct Tally {
    pub checks: usize,
}

/// Enumeration agrees with matrix closure; word length equals inversion count.
pub fn check_enumeration(o: &Oracle, t: &mut Tally) -> Result<(), String> {
    let closure = matrix_closure(o.sys, TypeSet::full(o.sys.rank()));
    if closure.len() != o.elements.len() {
        return Err(format!("{}: enumeration {} vs closure {}", o.sys.name(), o.elements.len(), closure.len()));
    }
    for w in &o.elements {
        t.checks += 1;
        if o.len(w) != w.length() {
            return Err(format!("{w}: word length {} vs inversions {}", w.length(), o.len(w)));
        }
    }
    Ok(())
}

pub fn check_min_double_coset(o: &Oracle, t: &mut Tally) -> Result<(), String> {
    let r = o.sys.rank();
    for i in TypeSet::all(r) {
        let wi = o.parabolic(i);
        for j in TypeSet::all(r) {
            let wj = o.parabolic(j);
            for w in &o.elements {
                let coset: BTreeSet<WeylElement> =
                    wi.iter().flat_map(|a| wj.iter().map(move |b| (a, b))).map(|(a, b)| o.mul(&o.mul(a, w), b)).collect();
                let best = coset.iter().map(|x| o.len(x)).min().unwrap();
                let mins: Vec<_> = coset.iter().filter(|x| o.len(x) == best).collect();
                let got = o.sys.min_double_coset(i, w, j).map_err(|e| e.to_string())?;
                t.checks += 1;
                if mins.len() != 1 || *mins[0] != got {
                    return Err(format!("{} min(W_{i} {w} W_{j}): got {got}, oracle {:?}", o.sys.name(), mins));
                }
            }
        }
    }
    Ok(())
}

/// Projection type against chamberwise projection of `w1 W_J` onto `W_I`.
pub fn check_projection_type(o: &Oracle, t: &mut Tally) -> Result<(), String> {
    let r = o.sys.rank();
    let e = o.sys.identity();
    for i in proper_types(r) {
        let big_r = o.coset(&e, i);
        for j in proper_types(r) {
            let mut done = BTreeSet::new();
            for w in &o.elements {
                let w1 = o.sys.min_double_coset(i, w, j).unwrap();
                if !done.insert(w1.clone()) {
                    continue;
                }
                let got = o.sys.residue_projection_type(i, j, &w1).map_err(|e| e.to_string())?;
                let s = o.coset(&w1, j);
                let proj: BTreeSet<WeylElement> = s.iter().map(|c| o.nearest(&big_r, c).expect("unique gate")).collect();
                let p0 = proj.iter().min_by_key(|x| o.len(x)).unwrap().clone();
                let k = TypeSet::from_indices(
                    &(0..r).filter(|&s| proj.contains(&o.mul(&p0, &o.sys.generator(s)))).collect::<Vec<_>>(),
                );
                t.checks += 1;
                if o.coset(&p0, k) != proj || k != got.ty {
                    return Err(format!("{} I={i} J={j} w1={w1}: got {}, oracle {k}", o.sys.name(), got.ty));
                }
                let case = if k.is_empty() {
                    ProjectionCase::SingleChamber
                } else if proj == big_r {
                    ProjectionCase::WholeResidue
                } else {
                    ProjectionCase::Proper
                };
                if case != got.case {
                    return Err(format!("{} I={i} J={j} w1={w1}: case {:?} vs {:?}", o.sys.name(), got.case, case));
                }
            }
        }
    }
    Ok(())
}

/// Gate: nearest chamber found by scanning, plus the gate identity.
pub fn check_projection(o: &Oracle, t: &mut Tally) -> Result<(), String> {
    let r = o.sys.rank();
    for i in TypeSet::all(r) {
        for members in o.residues(i) {
            let res = o.sys.residue(i, members.iter().next().unwrap());
            for c in &o.elements {
                let got = o.sys.project_chamber(&res, c);
                let want = o.nearest(&members, c).ok_or("no unique nearest chamber")?;
                t.checks += 1;
                if got != want {
                    return Err(format!("{} proj of {c} on {i}-residue at {}: {got} vs {want}", o.sys.name(), res.rep));
                }
                for x in &members {
                    if o.dist(c, x) != o.dist(c, &got) + o.dist(&got, x) {
                        return Err(format!("gate identity fails for c={c}, x={x}"));
                    }
                }
            }
        }
    }
    Ok(())
}

/// Wall count equals distance, and the separating-walls lemma for disjoint
/// residues.
pub fn check_separating_walls(o: &Oracle, t: &mut Tally) -> Result<(), String> {
    for c in &o.elements {
        for d in &o.elements {
            t.checks += 1;
            if o.sys.separating_walls(c, d).len() != o.dist(c, d) {
                return Err(format!("{} walls({c},{d}) has wrong size", o.sys.name()));
            }
        }
    }
    let r = o.sys.rank();
    for i in proper_types(r) {
        for j in proper_types(r) {
            for rm in o.residues(i) {
                let res = o.sys.residue(i, rm.iter().next().unwrap());
                let rwalls: BTreeSet<_> = o.sys.residue_walls(&res).into_iter().collect();
                for sm in o.residues(j) {
                    if !rm.is_disjoint(&sm) {
                        continue;
                    }
                    for c in &sm {
                        let f = o.nearest(&rm, c).unwrap();
                        t.checks += 1;
                        if o.sys.separating_walls(&f, c).iter().any(|w| rwalls.contains(w)) {
                            return Err(format!("{}: a wall of the {i}-residue separates {f} from {c}", o.sys.name()));
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

/// Hull equals both the union of minimal galleries and the intersection of
/// all roots (half-apartments) containing both chambers.
pub fn check_convex_hull(o: &Oracle, t: &mut Tally) -> Result<(), String> {
    for c in &o.elements {
        for d in &o.elements {
            let got: BTreeSet<_> = o.sys.convex_hull(c, d).map_err(|e| e.to_string())?.into_iter().collect();
            let mut galleries = BTreeSet::new();
            let delta = o.mul(&o.inv(c), d);
            gallery_chambers(o, c, &delta, &mut galleries);
            let side = |x: &WeylElement, b: &[i64]| positive(&apply(&o.mats[&o.inv(x)], b));
            let halves: BTreeSet<_> = o
                .elements
                .iter()
                .filter(|x| o.sys.positive_roots().iter().all(|b| side(c, b) != side(d, b) || side(x, b) == side(c, b)))
                .cloned()
                .collect();
            t.checks += 1;
            if got != galleries || got != halves {
                return Err(format!("{} hull({c},{d}) disagrees", o.sys.name()));
            }
        }
    }
    Ok(())
}

/// Adds every chamber `c * prefix` over all reduced words of `delta`.
fn gallery_chambers(o: &Oracle, c: &WeylElement, delta: &WeylElement, out: &mut BTreeSet<WeylElement>) {
    out.insert(c.clone());
    if delta.is_identity() {
        return;
    }
    for s in 0..o.sys.rank() {
        let g = o.sys.generator(s);
        let rest = o.mul(&g, delta);
        if o.len(&rest) < o.len(delta) {
            gallery_chambers(o, &o.mul(c, &g), &rest, out);
        }
    }
}

/// The whole suite on one system; returns the number of checks.
pub fn coxeter_suite(name: &str) -> Result<usize, String> {
    let sys = CoxeterSystem::parse(name).map_err(|e| e.to_string())?;
    let o = Oracle::new(&sys);
    let mut t = Tally { checks: 0 };
    check_enumeration(&o, &mut t)?;
    check_min_double_coset(&o, &mut t)?;
    check_projection_type(&o, &mut t)?;
    check_projection(&o, &mut t)?;
    check_separating_walls(&o, &mut t)?;
    check_convex_hull(&o, &mut t)?;
    Ok(t.checks)
}

pub fn residue_of(o: &Oracle, ty: TypeSet, w: &WeylElement) -> Residue {
    o.sys.residue(ty, w)
}
