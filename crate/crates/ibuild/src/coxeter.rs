//! Finite crystallographic and affine Coxeter systems.
//!
//! Elements of a finite Weyl group are kept as ShortLex-minimal reduced
//! words; all arithmetic goes through the reflection representation on the
//! root lattice, with roots written in the basis of simple roots. Chambers
//! of the Coxeter complex are identified with group elements, so gallery
//! distance is `length(c^-1 d)` and the residue of type `I` through `w` is
//! the coset `w W_I`.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoxeterError {
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("zero translation is not hyperbolic")]
    NotHyperbolic,
    #[error("type {0} is all of S: no hyperbolic translation has this type")]
    NoRegularTranslation(TypeSet),
    #[error("cannot parse Cartan type {0:?}")]
    Parse(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Finite,
    Affine,
}

/// A subset of the finite generators `s1..sr`, stored as a bitmask
/// (bit `i` is `s_{i+1}`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct TypeSet(pub u32);

impl TypeSet {
    pub const EMPTY: TypeSet = TypeSet(0);

    /// From 0-based generator indices.
    pub fn from_indices(idx: &[usize]) -> TypeSet {
        TypeSet(idx.iter().fold(0, |m, &i| m | (1 << i)))
    }

    pub fn full(rank: usize) -> TypeSet {
        TypeSet((1u32 << rank) - 1)
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn insert(&mut self, i: usize) {
        self.0 |= 1 << i;
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    pub fn len(&self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..32).filter(move |&i| self.contains(i))
    }

    pub fn intersect(&self, other: TypeSet) -> TypeSet {
        TypeSet(self.0 & other.0)
    }

    pub fn is_subset(&self, other: TypeSet) -> bool {
        self.0 & !other.0 == 0
    }

    /// All subsets of `{s1..sr}`, proper ones first in numeric order.
    pub fn all(rank: usize) -> impl Iterator<Item = TypeSet> {
        (0..1u32 << rank).map(TypeSet)
    }

    /// 1-based indices, the form used in reports.
    pub fn to_one_based(&self) -> Vec<usize> {
        self.iter().map(|i| i + 1).collect()
    }
}

impl fmt::Display for TypeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = self.iter().map(|i| format!("s{}", i + 1)).collect();
        write!(f, "{{{}}}", names.join(","))
    }
}

impl Serialize for TypeSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_one_based().serialize(s)
    }
}

impl<'de> Deserialize<'de> for TypeSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = Vec::<usize>::deserialize(d)?;
        if v.iter().any(|&i| i == 0 || i > 31) {
            return Err(serde::de::Error::custom("generator indices are 1-based"));
        }
        Ok(TypeSet::from_indices(&v.iter().map(|i| i - 1).collect::<Vec<_>>()))
    }
}

/// An element of a finite Weyl group as its ShortLex-minimal reduced word
/// (0-based generator indices).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct WeylElement {
    word: Vec<u8>,
}

impl WeylElement {
    pub fn word(&self) -> &[u8] {
        &self.word
    }

    pub fn length(&self) -> usize {
        self.word.len()
    }

    pub fn is_identity(&self) -> bool {
        self.word.is_empty()
    }

    /// 1-based word, the form used in enumeration dumps.
    pub fn to_one_based(&self) -> Vec<usize> {
        self.word.iter().map(|&i| i as usize + 1).collect()
    }
}

impl fmt::Display for WeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_empty() {
            return write!(f, "e");
        }
        let s: Vec<String> = self.word.iter().map(|i| format!("s{}", i + 1)).collect();
        write!(f, "{}", s.join(""))
    }
}

/// An integer coweight written in the basis of fundamental coweights, so
/// that `coords[j] = <v, alpha_j>`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TranslationVector {
    pub coords: Vec<i64>,
}

impl TranslationVector {
    /// For type `A_{n-1}`: the coweight with pairings `a_i - a_{i+1}`.
    pub fn from_eps(a: &[i64]) -> TranslationVector {
        TranslationVector { coords: a.windows(2).map(|w| w[0] - w[1]).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }
}

/// A residue `rep * W_I`, with `rep` the minimal element of the coset.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Residue {
    pub ty: TypeSet,
    pub rep: WeylElement,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProjectionCase {
    /// The projection is all of `R`.
    WholeResidue,
    /// More than one chamber but not all of `R`.
    Proper,
    SingleChamber,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjectionType {
    pub ty: TypeSet,
    pub case: ProjectionCase,
}

pub type Root = Vec<i64>;

#[derive(Debug, Clone)]
pub struct CoxeterSystem {
    kind: Kind,
    family: char,
    rank: usize,
    /// `cartan[i][j] = <alpha_i^vee, alpha_j>` of the finite root system.
    cartan: Vec<Vec<i64>>,
    /// Coxeter matrix on `S` (finite) or `S_aff = S + {s0}` with `s0` last;
    /// 0 encodes infinity.
    coxeter_matrix: Vec<Vec<u32>>,
    positive_roots: Vec<Root>,
    w0: WeylElement,
}

fn m_from_product(prod: i64) -> u32 {
    match prod {
        0 => 2,
        1 => 3,
        2 => 4,
        3 => 6,
        _ => 0,
    }
}

impl CoxeterSystem {
    /// Parses `"A2"`, `"B3"`, `"C2"`, `"G2"`, or an affine `"A~2"`, `"C~2"`.
    pub fn parse(s: &str) -> Result<CoxeterSystem, CoxeterError> {
        let bad = || CoxeterError::Parse(s.to_string());
        let s = s.trim();
        let mut chars = s.chars();
        let family = chars.next().ok_or_else(bad)?.to_ascii_uppercase();
        let rest: String = chars.collect();
        let (kind, digits) = match rest.strip_prefix('~') {
            Some(d) => (Kind::Affine, d.to_string()),
            None => (Kind::Finite, rest),
        };
        let rank: usize = digits.parse().map_err(|_| bad())?;
        CoxeterSystem::new(kind, family, rank)
    }

    pub fn new(kind: Kind, family: char, rank: usize) -> Result<CoxeterSystem, CoxeterError> {
        let ok = match family {
            'A' => (1..=5).contains(&rank),
            'B' | 'C' => (2..=4).contains(&rank),
            'D' => rank == 4,
            'G' => rank == 2,
            _ => false,
        };
        if !ok {
            return Err(CoxeterError::Unsupported(format!("{family}{rank}")));
        }
        let mut cartan = vec![vec![0i64; rank]; rank];
        for i in 0..rank {
            cartan[i][i] = 2;
            if i + 1 < rank {
                cartan[i][i + 1] = -1;
                cartan[i + 1][i] = -1;
            }
        }
        match family {
            'B' => cartan[rank - 1][rank - 2] = -2,
            'C' => cartan[rank - 2][rank - 1] = -2,
            'G' => cartan[0][1] = -3,
            'D' => {
                cartan[2][3] = 0;
                cartan[3][2] = 0;
                cartan[1][3] = -1;
                cartan[3][1] = -1;
            }
            _ => {}
        }
        let mut sys = CoxeterSystem {
            kind,
            family,
            rank,
            cartan,
            coxeter_matrix: vec![],
            positive_roots: vec![],
            w0: WeylElement { word: vec![] },
        };
        sys.positive_roots = sys.compute_positive_roots();
        let mut m = vec![vec![1u32; rank]; rank];
        for i in 0..rank {
            for j in 0..rank {
                if i != j {
                    m[i][j] = m_from_product(sys.cartan[i][j] * sys.cartan[j][i]);
                }
            }
        }
        if kind == Kind::Affine {
            // alpha_0 = delta - theta; its linear part is -theta.
            let theta = sys.highest_root();
            let theta_vee = sys.coroot_pairings(&theta);
            for row in m.iter_mut() {
                row.push(0);
            }
            m.push(vec![0; rank + 1]);
            m[rank][rank] = 1;
            for j in 0..rank {
                let a0j = -theta_vee[j];
                let aj0 = -sys.pair(j, &theta);
                let prod = a0j * aj0;
                let mij = if rank == 1 { 0 } else { m_from_product(prod) };
                m[rank][j] = mij;
                m[j][rank] = mij;
            }
        }
        sys.coxeter_matrix = m;
        sys.w0 = sys.compute_longest();
        Ok(sys)
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    /// Rank of the finite root system.
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn name(&self) -> String {
        match self.kind {
            Kind::Finite => format!("{}{}", self.family, self.rank),
            Kind::Affine => format!("{}~{}", self.family, self.rank),
        }
    }

    /// Generator names; for affine systems `s0` comes last.
    pub fn generators(&self) -> Vec<String> {
        let mut g: Vec<String> = (1..=self.rank).map(|i| format!("s{i}")).collect();
        if self.kind == Kind::Affine {
            g.push("s0".into());
        }
        g
    }

    pub fn coxeter_matrix(&self) -> &[Vec<u32>] {
        &self.coxeter_matrix
    }

    pub fn cartan_matrix(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    /// The finite system underlying an affine one (or a copy of itself).
    pub fn finite_part(&self) -> CoxeterSystem {
        CoxeterSystem::new(Kind::Finite, self.family, self.rank).expect("valid finite type")
    }

    pub fn positive_roots(&self) -> &[Root] {
        &self.positive_roots
    }

    /// `<alpha_i^vee, beta>` for `beta` in simple-root coordinates.
    pub fn pair(&self, i: usize, beta: &[i64]) -> i64 {
        (0..self.rank).map(|j| self.cartan[i][j] * beta[j]).sum()
    }

    /// Pairings `<beta^vee, alpha_j>` for all `j`, via the invariant form
    /// `(alpha_i, alpha_j) = d_i a_ij`.
    fn coroot_pairings(&self, beta: &[i64]) -> Vec<i64> {
        let d = self.symmetrizer();
        let form: Vec<i64> = (0..self.rank).map(|j| (0..self.rank).map(|i| beta[i] * d[i] * self.cartan[i][j]).sum()).collect();
        let norm: i64 = (0..self.rank).map(|j| beta[j] * form[j]).sum();
        form.iter().map(|f| 2 * f / norm).collect()
    }

    /// `d_i` with `(alpha_i, alpha_i) = 2 d_i` up to a common factor, so that
    /// `(alpha_i, alpha_j) = d_i * a_ij`.
    fn symmetrizer(&self) -> Vec<i64> {
        let mut d = vec![0i64; self.rank];
        d[0] = 1;
        let mut changed = true;
        while changed {
            changed = false;
            for i in 0..self.rank {
                for j in 0..self.rank {
                    if d[i] != 0 && d[j] == 0 && self.cartan[i][j] != 0 {
                        // d_i a_ij = d_j a_ji
                        let num = d[i] * self.cartan[i][j];
                        if num % self.cartan[j][i] != 0 {
                            for x in d.iter_mut() {
                                *x *= self.cartan[j][i].abs();
                            }
                            d[j] = d[i] * self.cartan[i][j] / self.cartan[j][i];
                        } else {
                            d[j] = num / self.cartan[j][i];
                        }
                        changed = true;
                    }
                }
            }
        }
        d
    }

    pub fn reflect(&self, i: usize, beta: &[i64]) -> Root {
        let c = self.pair(i, beta);
        let mut out = beta.to_vec();
        out[i] -= c;
        out
    }

    fn compute_positive_roots(&self) -> Vec<Root> {
        let mut seen: BTreeSet<Root> = BTreeSet::new();
        let mut queue: VecDeque<Root> = VecDeque::new();
        for i in 0..self.rank {
            let mut a = vec![0; self.rank];
            a[i] = 1;
            seen.insert(a.clone());
            queue.push_back(a);
        }
        while let Some(b) = queue.pop_front() {
            for i in 0..self.rank {
                let r = self.reflect(i, &b);
                if r.iter().all(|&x| x >= 0) && seen.insert(r.clone()) {
                    queue.push_back(r);
                }
            }
        }
        let mut v: Vec<Root> = seen.into_iter().collect();
        v.sort_by_key(|r| (r.iter().sum::<i64>(), r.clone()));
        v
    }

    pub fn highest_root(&self) -> Root {
        self.positive_roots.last().expect("nonempty").clone()
    }

    fn is_positive(beta: &[i64]) -> bool {
        beta.iter().all(|&x| x >= 0)
    }

    /// `w(beta)`, applying the word right to left.
    pub fn act(&self, w: &WeylElement, beta: &[i64]) -> Root {
        self.act_word(&w.word, beta)
    }

    fn act_word(&self, word: &[u8], beta: &[i64]) -> Root {
        let mut b = beta.to_vec();
        for &i in word.iter().rev() {
            b = self.reflect(i as usize, &b);
        }
        b
    }

    fn act_inverse(&self, w: &WeylElement, beta: &[i64]) -> Root {
        let mut b = beta.to_vec();
        for &i in w.word.iter() {
            b = self.reflect(i as usize, &b);
        }
        b
    }

    fn simple(&self, i: usize) -> Root {
        let mut a = vec![0; self.rank];
        a[i] = 1;
        a
    }

    fn require_finite(&self) -> Result<(), CoxeterError> {
        match self.kind {
            Kind::Finite => Ok(()),
            Kind::Affine => Err(CoxeterError::Unsupported(format!("{} is infinite", self.name()))),
        }
    }

    /// Normal form of an arbitrary word over `S`.
    pub fn element(&self, word: &[u8]) -> WeylElement {
        assert!(word.iter().all(|&i| (i as usize) < self.rank), "generator out of range");
        // Track images of simple roots under w^-1; s_i is a left descent of
        // w iff w^-1(alpha_i) < 0. Peeling the smallest left descent each
        // time yields the lexicographically first reduced word.
        let mut cols: Vec<Root> = (0..self.rank).map(|i| self.act_word(&inverse_word(word), &self.simple(i))).collect();
        let mut out = Vec::new();
        loop {
            let Some(i) = (0..self.rank).find(|&i| !Self::is_positive(&cols[i])) else { break };
            out.push(i as u8);
            // w^-1 <- w^-1 s_i: column j becomes w^-1(s_i alpha_j).
            let old = cols.clone();
            for j in 0..self.rank {
                let c = self.cartan[i][j];
                cols[j] = old[j].iter().zip(&old[i]).map(|(x, y)| x - c * y).collect();
            }
        }
        WeylElement { word: out }
    }

    pub fn identity(&self) -> WeylElement {
        WeylElement { word: vec![] }
    }

    pub fn generator(&self, i: usize) -> WeylElement {
        self.element(&[i as u8])
    }

    pub fn mul(&self, a: &WeylElement, b: &WeylElement) -> WeylElement {
        let mut w = a.word.clone();
        w.extend_from_slice(&b.word);
        self.element(&w)
    }

    pub fn inverse(&self, a: &WeylElement) -> WeylElement {
        self.element(&inverse_word(&a.word))
    }

    pub fn longest(&self) -> &WeylElement {
        &self.w0
    }

    fn compute_longest(&self) -> WeylElement {
        // Walk down to the antidominant chamber: keep multiplying by a
        // generator that increases length.
        let mut w = self.identity();
        loop {
            let next = (0..self.rank).find(|&i| Self::is_positive(&self.act(&w, &self.simple(i))));
            match next {
                Some(i) => w = self.mul(&w, &self.generator(i)),
                None => return w,
            }
        }
    }

    pub fn is_left_descent(&self, w: &WeylElement, i: usize) -> bool {
        !Self::is_positive(&self.act_inverse(w, &self.simple(i)))
    }

    pub fn is_right_descent(&self, w: &WeylElement, i: usize) -> bool {
        !Self::is_positive(&self.act(w, &self.simple(i)))
    }

    /// Every element of a finite group exactly once, ordered by length and
    /// then by word.
    pub fn enumerate(&self) -> Result<Vec<WeylElement>, CoxeterError> {
        self.require_finite()?;
        if self.rank > 4 {
            return Err(CoxeterError::Unsupported("enumeration is limited to rank 4".into()));
        }
        Ok(self.closure(TypeSet::full(self.rank)))
    }

    /// The parabolic subgroup `W_I`.
    pub fn parabolic(&self, ty: TypeSet) -> Vec<WeylElement> {
        self.closure(ty)
    }

    fn closure(&self, ty: TypeSet) -> Vec<WeylElement> {
        let mut seen: HashSet<WeylElement> = HashSet::new();
        let mut queue = VecDeque::new();
        seen.insert(self.identity());
        queue.push_back(self.identity());
        while let Some(w) = queue.pop_front() {
            for i in ty.iter() {
                let x = self.mul(&w, &self.generator(i));
                if seen.insert(x.clone()) {
                    queue.push_back(x);
                }
            }
        }
        let mut v: Vec<WeylElement> = seen.into_iter().collect();
        v.sort_by(|a, b| (a.length(), &a.word).cmp(&(b.length(), &b.word)));
        v
    }

    /// Gallery distance between chambers `c` and `d`.
    pub fn distance(&self, c: &WeylElement, d: &WeylElement) -> usize {
        self.mul(&self.inverse(c), d).length()
    }

    /// The unique element of minimal length in `W_I w W_J`.
    pub fn min_double_coset(&self, i: TypeSet, w: &WeylElement, j: TypeSet) -> Result<WeylElement, CoxeterError> {
        self.require_finite()?;
        let mut w = w.clone();
        loop {
            if let Some(s) = i.iter().find(|&s| self.is_left_descent(&w, s)) {
                w = self.mul(&self.generator(s), &w);
            } else if let Some(t) = j.iter().find(|&t| self.is_right_descent(&w, t)) {
                w = self.mul(&w, &self.generator(t));
            } else {
                return Ok(w);
            }
        }
    }

    /// Type of `proj_R(S)` for residues `R` of type `I` and `S` of type `J`
    /// with `w1 = min delta(R, S)`: the simple reflections of `I` that are
    /// conjugate under `w1` to a reflection of `J`.
    pub fn residue_projection_type(&self, i: TypeSet, j: TypeSet, w1: &WeylElement) -> Result<ProjectionType, CoxeterError> {
        self.require_finite()?;
        if i.iter().any(|s| self.is_left_descent(w1, s)) || j.iter().any(|t| self.is_right_descent(w1, t)) {
            return Err(CoxeterError::InvalidArgument(format!("{w1} is not minimal in W_I {w1} W_J")));
        }
        let mut k = TypeSet::EMPTY;
        for t in j.iter() {
            // w1 t w1^-1 is the reflection in the root w1(alpha_t).
            let r = self.act(w1, &self.simple(t));
            if let Some(s) = (0..self.rank).find(|&s| r == self.simple(s) || neg(&r) == self.simple(s)) {
                if i.contains(s) {
                    k.insert(s);
                }
            }
        }
        let case = if k.is_empty() {
            ProjectionCase::SingleChamber
        } else if k == i {
            ProjectionCase::WholeResidue
        } else {
            ProjectionCase::Proper
        };
        Ok(ProjectionType { ty: k, case })
    }

    /// The residue of type `ty` containing `member`.
    pub fn residue(&self, ty: TypeSet, member: &WeylElement) -> Residue {
        let mut w = member.clone();
        while let Some(t) = ty.iter().find(|&t| self.is_right_descent(&w, t)) {
            w = self.mul(&w, &self.generator(t));
        }
        Residue { ty, rep: w }
    }

    pub fn residue_members(&self, r: &Residue) -> Vec<WeylElement> {
        self.parabolic(r.ty).iter().map(|x| self.mul(&r.rep, x)).collect()
    }

    /// The chamber of `r` nearest to `c` (the gate).
    pub fn project_chamber(&self, r: &Residue, c: &WeylElement) -> WeylElement {
        let mut x = self.mul(&self.inverse(&r.rep), c);
        let mut a = self.identity();
        while let Some(s) = r.ty.iter().find(|&s| self.is_left_descent(&x, s)) {
            x = self.mul(&self.generator(s), &x);
            a = self.mul(&a, &self.generator(s));
        }
        self.mul(&r.rep, &a)
    }

    /// `proj_R(S)` as a residue, its type taken from
    /// [`residue_projection_type`](Self::residue_projection_type).
    pub fn project_residue(&self, r: &Residue, s: &Residue) -> Result<Residue, CoxeterError> {
        let delta = self.mul(&self.inverse(&r.rep), &s.rep);
        let w1 = self.min_double_coset(r.ty, &delta, s.ty)?;
        let k = self.residue_projection_type(r.ty, s.ty, &w1)?;
        let f = self.project_chamber(r, &s.rep);
        Ok(self.residue(k.ty, &f))
    }

    /// Positive roots whose walls separate chambers `c` and `d`.
    pub fn separating_walls(&self, c: &WeylElement, d: &WeylElement) -> Vec<Root> {
        self.positive_roots
            .iter()
            .filter(|b| Self::is_positive(&self.act_inverse(c, b)) != Self::is_positive(&self.act_inverse(d, b)))
            .cloned()
            .collect()
    }

    /// Positive roots of the walls through the simplex of residue `r`.
    pub fn residue_walls(&self, r: &Residue) -> Vec<Root> {
        let mut out: Vec<Root> = self
            .positive_roots
            .iter()
            .filter(|b| b.iter().enumerate().all(|(k, &x)| x == 0 || r.ty.contains(k)))
            .map(|b| {
                let x = self.act(&r.rep, b);
                if Self::is_positive(&x) {
                    x
                } else {
                    neg(&x)
                }
            })
            .collect();
        out.sort();
        out
    }

    /// Chambers on some minimal gallery from `c` to `d`.
    pub fn convex_hull(&self, c: &WeylElement, d: &WeylElement) -> Result<Vec<WeylElement>, CoxeterError> {
        let total = self.distance(c, d);
        Ok(self
            .enumerate()?
            .into_iter()
            .filter(|x| self.distance(c, x) + self.distance(x, d) == total)
            .collect())
    }

    /// `I* = w0 I w0`, the spherical type of a simplex opposite one of type `I`.
    pub fn opposite_type(&self, ty: TypeSet) -> TypeSet {
        let mut out = TypeSet::EMPTY;
        for i in ty.iter() {
            let r = neg(&self.act(&self.w0, &self.simple(i)));
            let j = (0..self.rank).find(|&j| r == self.simple(j)).expect("-w0 permutes simple roots");
            out.insert(j);
        }
        out
    }

    /// `s_i(v) = v - <v, alpha_i> alpha_i^vee` on fundamental-coweight coordinates.
    pub fn reflect_coweight(&self, i: usize, v: &TranslationVector) -> TranslationVector {
        let c = v.coords[i];
        TranslationVector { coords: (0..self.rank).map(|j| v.coords[j] - c * self.cartan[i][j]).collect() }
    }

    pub fn act_coweight(&self, w: &WeylElement, v: &TranslationVector) -> TranslationVector {
        let mut x = v.clone();
        for &i in w.word.iter().rev() {
            x = self.reflect_coweight(i as usize, &x);
        }
        x
    }

    /// The dominant coweight in the orbit of `v`, and an element carrying
    /// `v` to it.
    pub fn dominant(&self, v: &TranslationVector) -> (TranslationVector, WeylElement) {
        let mut x = v.clone();
        let mut w = self.identity();
        while let Some(i) = (0..self.rank).find(|&i| x.coords[i] < 0) {
            x = self.reflect_coweight(i, &x);
            w = self.mul(&self.generator(i), &w);
        }
        (x, w)
    }

    fn check_coweight(&self, v: &TranslationVector) -> Result<(), CoxeterError> {
        if v.coords.len() != self.rank {
            return Err(CoxeterError::InvalidArgument(format!(
                "coweight has {} coordinates, rank is {}",
                v.coords.len(),
                self.rank
            )));
        }
        Ok(())
    }

    /// Type of the ideal simplex containing the direction of `v` in its
    /// interior: the simple roots orthogonal to the dominant representative.
    /// For dominant `v` this is `{s : <v, alpha_s> = 0}`.
    pub fn translation_type(&self, v: &TranslationVector) -> Result<TypeSet, CoxeterError> {
        self.check_coweight(v)?;
        if v.is_zero() {
            return Err(CoxeterError::NotHyperbolic);
        }
        let (d, _) = self.dominant(v);
        Ok(TypeSet::from_indices(&(0..self.rank).filter(|&i| d.coords[i] == 0).collect::<Vec<_>>()))
    }

    /// Positive roots orthogonal to `v`, i.e. the reflections fixing it.
    pub fn fixing_roots(&self, v: &TranslationVector) -> Vec<Root> {
        self.positive_roots
            .iter()
            .filter(|b| b.iter().zip(&v.coords).map(|(x, y)| x * y).sum::<i64>() == 0)
            .cloned()
            .collect()
    }

    /// The lexicographically smallest dominant coweight of type exactly `I`:
    /// pairing 0 with `alpha_i` for `i` in `I` and 1 elsewhere.
    pub fn construct_regular_translation(&self, ty: TypeSet) -> Result<TranslationVector, CoxeterError> {
        if ty.iter().any(|i| i >= self.rank) {
            return Err(CoxeterError::InvalidArgument(format!("{ty} is not a subset of S")));
        }
        if ty == TypeSet::full(self.rank) {
            return Err(CoxeterError::NoRegularTranslation(ty));
        }
        Ok(TranslationVector { coords: (0..self.rank).map(|i| if ty.contains(i) { 0 } else { 1 }).collect() })
    }

    /// Smallest positive multiple of `v` lying in the coroot lattice, i.e. a
    /// translation of the affine Weyl group in the direction of `v`.
    pub fn affine_translation(&self, v: &TranslationVector) -> Result<(i64, TranslationVector), CoxeterError> {
        self.check_coweight(v)?;
        // v = sum m_i alpha_i^vee  <=>  coords = m * cartan.
        let (adj, det) = int_adjugate(&self.cartan);
        let num: Vec<i64> = (0..self.rank).map(|i| (0..self.rank).map(|j| v.coords[j] * adj[j][i]).sum()).collect();
        let g = num.iter().fold(det.abs(), |g, &x| gcd(g, x.abs()));
        let k = det.abs() / g;
        Ok((k, TranslationVector { coords: v.coords.iter().map(|c| c * k).collect() }))
    }
}

fn neg(r: &[i64]) -> Root {
    r.iter().map(|x| -x).collect()
}

fn inverse_word(w: &[u8]) -> Vec<u8> {
    w.iter().rev().copied().collect()
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn int_det(m: &[Vec<i64>]) -> i64 {
    let n = m.len();
    if n == 1 {
        return m[0][0];
    }
    (0..n)
        .map(|j| {
            let sub: Vec<Vec<i64>> = m[1..].iter().map(|r| r.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, &x)| x).collect()).collect();
            let s = if j % 2 == 0 { 1 } else { -1 };
            s * m[0][j] * int_det(&sub)
        })
        .sum()
}

fn int_adjugate(m: &[Vec<i64>]) -> (Vec<Vec<i64>>, i64) {
    let n = m.len();
    let det = int_det(m);
    if n == 1 {
        return (vec![vec![1]], det);
    }
    let mut adj = vec![vec![0; n]; n];
    for i in 0..n {
        for j in 0..n {
            let sub: Vec<Vec<i64>> = m
                .iter()
                .enumerate()
                .filter(|&(r, _)| r != j)
                .map(|(_, row)| row.iter().enumerate().filter(|&(c, _)| c != i).map(|(_, &x)| x).collect())
                .collect();
            adj[i][j] = if (i + j) % 2 == 0 { 1 } else { -1 } * int_det(&sub);
        }
    }
    (adj, det)
}
