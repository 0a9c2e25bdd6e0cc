//! The Euclidean building of `SL_n(Q_p)` seen through cosets.
//!
//! Nothing is materialized: vertices are lattices `g Z_p^n`, ideal
//! simplices of type `I` are cosets `g P_I` (equivalently partial flags
//! spanned by leading column blocks of `g`), and the standard apartment is
//! the one of the diagonal torus. `c+` is the upper Borel `B+` and `c-`
//! the lower one.

pub mod decomp;
pub mod subspace;

use std::ops::Range;

use rand::Rng;
use thiserror::Error;

pub use decomp::{AffineWeylCoset, Bruhat, Cartan, Direction, Iwahori, Iwasawa};

use crate::coxeter::{CoxeterError, CoxeterSystem, TypeSet, WeylElement};
use crate::matrix::Mat;
use crate::padic::{Field, Padic, PadicError, INF};
use subspace::Vector;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BuildingError {
    #[error(transparent)]
    Padic(#[from] PadicError),
    #[error(transparent)]
    Coxeter(#[from] CoxeterError),
    #[error("matrix is singular within precision (known to p^{0})")]
    Singular(i64),
    #[error("simplex types differ: {0} vs {1}")]
    TypeMismatch(TypeSet, TypeSet),
    #[error("expected {expected} parameters, got {got}")]
    ParameterCount { expected: usize, got: usize },
    #[error("chamber does not lie in the apartment")]
    NotInApartment,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl BuildingError {
    /// Singular matrices only arise from entries lost below the precision.
    pub fn is_precision_exhausted(&self) -> bool {
        matches!(self, BuildingError::Padic(PadicError::PrecisionExhausted(_)) | BuildingError::Singular(_))
    }
}

/// An ideal simplex `rep * P_ty` with `rep` in canonical form.
#[derive(Debug, Clone, PartialEq)]
pub struct IdealSimplex {
    ty: TypeSet,
    rep: Mat,
}

impl IdealSimplex {
    pub fn ty(&self) -> TypeSet {
        self.ty
    }

    /// Canonical representative; it lies in `GL_n(Z_p)` with det `+-1`.
    pub fn rep(&self) -> &Mat {
        &self.rep
    }

    /// FNV-1a over the literal form, for trace files.
    pub fn fingerprint(&self) -> u64 {
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        let text = format!("{}|{:?}", self.ty.0, self.rep);
        for b in text.bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(0x0100_0000_01b3);
        }
        h
    }
}

/// Result of a retraction onto an apartment.
#[derive(Debug, Clone)]
pub struct Retraction {
    /// Position `w` of the image chamber `frame * w * c+`.
    pub w: WeylElement,
    pub perm: Vec<usize>,
    pub chamber: IdealSimplex,
}

/// `SL_n(Q_p)` at a fixed working precision, together with its finite Weyl
/// group of type `A_{n-1}`.
#[derive(Debug, Clone)]
pub struct Group {
    field: Field,
    n: usize,
    weyl: CoxeterSystem,
}

fn combinations(pool: &[usize], k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for (i, &x) in pool.iter().enumerate() {
        for mut rest in combinations(&pool[i + 1..], k - 1) {
            rest.insert(0, x);
            out.push(rest);
        }
    }
    out
}

impl Group {
    pub fn new(p: u32, n: usize, precision: u32) -> Result<Group, BuildingError> {
        if !(2..=5).contains(&n) {
            return Err(BuildingError::InvalidArgument(format!("n = {n} outside 2..=5")));
        }
        let field = Field::new(p, precision)?;
        let weyl = CoxeterSystem::parse(&format!("A{}", n - 1))?;
        Ok(Group { field, n, weyl })
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn weyl(&self) -> &CoxeterSystem {
        &self.weyl
    }

    pub fn identity(&self) -> Mat {
        Mat::identity(self.field, self.n)
    }

    // ---- types, flags and the Weyl group ----

    /// Dimensions of the subspaces in a partial flag of type `ty`.
    pub fn dims(&self, ty: TypeSet) -> Vec<usize> {
        (1..self.n).filter(|&k| !ty.contains(k - 1)).collect()
    }

    pub fn type_of_dims(&self, dims: &[usize]) -> TypeSet {
        TypeSet::from_indices(&(0..self.n - 1).filter(|i| !dims.contains(&(i + 1))).collect::<Vec<_>>())
    }

    /// Column blocks of the Levi factor of `P_ty`.
    pub fn blocks(&self, ty: TypeSet) -> Vec<Range<usize>> {
        let mut cuts = vec![0];
        cuts.extend(self.dims(ty));
        cuts.push(self.n);
        cuts.windows(2).map(|w| w[0]..w[1]).collect()
    }

    fn block_index(&self, ty: TypeSet) -> Vec<usize> {
        let mut out = vec![0; self.n];
        for (b, r) in self.blocks(ty).into_iter().enumerate() {
            for i in r {
                out[i] = b;
            }
        }
        out
    }

    pub fn opposite_type(&self, ty: TypeSet) -> TypeSet {
        self.weyl.opposite_type(ty)
    }

    /// The permutation `j -> w(j)` of a Weyl element.
    pub fn perm_of(&self, w: &WeylElement) -> Vec<usize> {
        let mut perm: Vec<usize> = (0..self.n).collect();
        for &a in w.word() {
            perm.swap(a as usize, a as usize + 1);
        }
        perm
    }

    pub fn weyl_of(&self, perm: &[usize]) -> WeylElement {
        let mut perm = perm.to_vec();
        let mut word = Vec::new();
        loop {
            let mut inv = vec![0; self.n];
            for (j, &x) in perm.iter().enumerate() {
                inv[x] = j;
            }
            let Some(i) = (0..self.n - 1).find(|&i| inv[i] > inv[i + 1]) else { break };
            word.push(i as u8);
            for x in perm.iter_mut() {
                if *x == i {
                    *x = i + 1;
                } else if *x == i + 1 {
                    *x = i;
                }
            }
        }
        self.weyl.element(&word)
    }

    /// Determinant-one monomial matrix of a Weyl element.
    pub fn weyl_matrix(&self, w: &WeylElement) -> Mat {
        Mat::monomial(self.field, &self.perm_of(w), &vec![0; self.n])
    }

    pub fn longest_matrix(&self) -> Mat {
        self.weyl_matrix(self.weyl.longest())
    }

    // ---- sampling ----

    fn fix_det(&self, mut m: Mat) -> Option<Mat> {
        let d = m.det();
        if d.is_zero() {
            return None;
        }
        m.scale_col(0, &d.inv().ok()?);
        Some(m)
    }

    /// A random element of `SL_n(Q_p)` with entry valuations in
    /// `vmin..=vmax`. Draws whose determinant lost digits to cancellation
    /// are rejected, so every entry carries full relative precision.
    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R, vmin: i64, vmax: i64) -> Mat {
        loop {
            let mut m = Mat::zeros(self.field, self.n);
            for i in 0..self.n {
                for j in 0..self.n {
                    m.set(i, j, self.field.random(rng, vmin, vmax));
                }
            }
            if m.det().rel_prec() < self.field.cap {
                continue;
            }
            if let Some(m) = self.fix_det(m) {
                return m;
            }
        }
    }

    /// A random element of `K = SL_n(Z_p)`.
    pub fn random_k<R: Rng + ?Sized>(&self, rng: &mut R) -> Mat {
        loop {
            let mut m = Mat::zeros(self.field, self.n);
            for i in 0..self.n {
                for j in 0..self.n {
                    m.set(i, j, self.field.random_integer(rng, 3));
                }
            }
            if m.det().valuation() == Some(0) {
                return self.fix_det(m).unwrap();
            }
        }
    }

    /// A random element of the standard Iwahori subgroup.
    pub fn random_iwahori<R: Rng + ?Sized>(&self, rng: &mut R) -> Mat {
        let f = self.field;
        let mut m = Mat::zeros(f, self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                let x = match i.cmp(&j) {
                    std::cmp::Ordering::Equal => f.random(rng, 0, 0),
                    std::cmp::Ordering::Less => f.random_integer(rng, 3),
                    std::cmp::Ordering::Greater => f.random_integer(rng, 3) * f.pow_p(1),
                };
                m.set(i, j, x);
            }
        }
        self.fix_det(m).expect("Iwahori elements are invertible")
    }

    /// A random element of the standard parabolic `P_ty`, drawn with a
    /// unit determinant before normalization so that it stays well
    /// conditioned.
    pub fn random_parabolic<R: Rng + ?Sized>(&self, rng: &mut R, ty: TypeSet, vmin: i64, vmax: i64) -> Mat {
        let b = self.block_index(ty);
        loop {
            let mut m = Mat::zeros(self.field, self.n);
            for i in 0..self.n {
                for j in 0..self.n {
                    if b[i] <= b[j] {
                        m.set(i, j, self.field.random(rng, vmin, vmax));
                    }
                }
            }
            let d = m.det();
            if d.valuation() != Some(0) || d.rel_prec() < self.field.cap {
                continue;
            }
            if let Some(m) = self.fix_det(m) {
                return m;
            }
        }
    }

    pub fn random_unipotent<R: Rng + ?Sized>(&self, rng: &mut R, ty: TypeSet, plus: bool, vmin: i64, vmax: i64) -> Mat {
        let params: Vec<Padic> = (0..self.radical_dim(ty)).map(|_| self.field.random(rng, vmin, vmax)).collect();
        self.unipotent_radical_element(ty, plus, &params).expect("parameter count matches")
    }

    // ---- decompositions ----

    pub fn cartan_decompose(&self, g: &Mat) -> Result<Cartan, BuildingError> {
        decomp::cartan(g)
    }

    pub fn iwasawa_decompose(&self, g: &Mat, dir: Direction) -> Result<Iwasawa, BuildingError> {
        decomp::iwasawa(g, dir)
    }

    pub fn iwahori_coset(&self, g: &Mat) -> Result<Iwahori, BuildingError> {
        decomp::iwahori(g)
    }

    pub fn bruhat(&self, g: &Mat, dir: Direction) -> Result<Bruhat, BuildingError> {
        decomp::bruhat(g, dir)
    }

    // ---- ideal simplices ----

    /// Canonical form of `g P_ty`: block by block, clear the pivot rows of
    /// earlier blocks, choose the row set whose minor has least valuation
    /// (lexicographically first on ties), and normalize that minor to the
    /// identity.
    pub fn boundary_simplex(&self, g: &Mat, ty: TypeSet) -> Result<IdealSimplex, BuildingError> {
        let f = self.field;
        let n = self.n;
        let mut m = g.clone();
        let mut pivots: Vec<(usize, usize)> = Vec::new();
        for block in self.blocks(ty) {
            for &(r, c) in &pivots {
                for j in block.clone() {
                    if !m.get(r, j).is_exact_zero() {
                        let x = m.get(r, j).clone();
                        m.add_col(j, c, &-x);
                        m.set(r, j, f.zero());
                    }
                }
            }
            let cols: Vec<usize> = block.clone().collect();
            let pool: Vec<usize> = (0..n).filter(|i| pivots.iter().all(|p| p.0 != *i)).collect();
            let mut best: Option<(Vec<usize>, i64)> = None;
            for rows in combinations(&pool, cols.len()) {
                let d = m.minor(&rows, &cols);
                if !d.is_zero() && best.as_ref().is_none_or(|b| d.vmin() < b.1) {
                    best = Some((rows, d.vmin()));
                }
            }
            let (rows, _) = best.ok_or(BuildingError::Singular(m.min_val()))?;
            let k = cols.len();
            let mut sub = Mat::zeros(f, k);
            for (a, &r) in rows.iter().enumerate() {
                for (b, &c) in cols.iter().enumerate() {
                    sub.set(a, b, m.get(r, c).clone());
                }
            }
            let inv = sub.inverse()?;
            for i in 0..n {
                let row: Vec<Padic> = (0..k)
                    .map(|b| (0..k).fold(f.zero(), |acc, a| acc + m.get(i, cols[a]) * inv.get(a, b)))
                    .collect();
                for (b, x) in row.into_iter().enumerate() {
                    m.set(i, cols[b], x);
                }
            }
            for (a, &r) in rows.iter().enumerate() {
                for (b, &c) in cols.iter().enumerate() {
                    m.set(r, c, if a == b { f.one() } else { f.zero() });
                }
                pivots.push((r, cols[a]));
            }
            for &(r, _) in &pivots[..pivots.len() - k] {
                for &c in &cols {
                    m.set(r, c, f.zero());
                }
            }
        }
        Ok(IdealSimplex { ty, rep: m })
    }

    /// The type-`ty` face of the standard chamber `c+`.
    pub fn standard_simplex(&self, ty: TypeSet) -> IdealSimplex {
        IdealSimplex { ty, rep: self.identity() }
    }

    /// The face of `c-` opposite to the standard type-`ty` simplex; its
    /// type is the opposition-twisted `ty*`.
    pub fn standard_opposite(&self, ty: TypeSet) -> IdealSimplex {
        self.boundary_simplex(&self.longest_matrix(), self.opposite_type(ty)).expect("monomial")
    }

    /// The chamber `w c+` of the standard apartment.
    pub fn chamber(&self, w: &WeylElement) -> IdealSimplex {
        self.boundary_simplex(&self.weyl_matrix(w), TypeSet::EMPTY).expect("monomial")
    }

    pub fn act(&self, g: &Mat, s: &IdealSimplex) -> Result<IdealSimplex, BuildingError> {
        self.boundary_simplex(&(g * &s.rep), s.ty)
    }

    /// The face of `s` of type `ty` (a superset of its own type).
    pub fn face(&self, s: &IdealSimplex, ty: TypeSet) -> Result<IdealSimplex, BuildingError> {
        if !s.ty.is_subset(ty) {
            return Err(BuildingError::InvalidArgument(format!("{ty} does not contain {}", s.ty)));
        }
        self.boundary_simplex(&s.rep, ty)
    }

    /// The `k`-dimensional subspace of the partial flag.
    pub fn subspace(&self, s: &IdealSimplex, k: usize) -> Vec<Vector> {
        subspace::leading_columns(&s.rep, k)
    }

    /// Builds the simplex of an increasing chain of subspaces.
    pub fn from_chain(&self, chain: &[Vec<Vector>]) -> Result<IdealSimplex, BuildingError> {
        let f = self.field;
        let mut dims = Vec::new();
        for s in chain {
            let d = subspace::dim(s, f)?;
            if d > 0 && d < self.n && !dims.contains(&d) {
                dims.push(d);
            }
        }
        let m = subspace::adapted_basis(chain, self.n, f)?;
        self.boundary_simplex(&m, self.type_of_dims(&dims))
    }

    pub fn same(&self, a: &IdealSimplex, b: &IdealSimplex) -> bool {
        a.ty == b.ty && a.rep.sub(&b.rep).entries().iter().all(Padic::is_zero)
    }

    /// Depth to which the canonical representatives agree, seen from the
    /// standard vertex; [`INF`] when they agree within precision.
    pub fn gate(&self, a: &IdealSimplex, b: &IdealSimplex) -> Result<i64, BuildingError> {
        if a.ty != b.ty {
            return Err(BuildingError::TypeMismatch(a.ty, b.ty));
        }
        if self.same(a, b) {
            return Ok(INF);
        }
        Ok(a.rep.agreement(&b.rep).max(0))
    }

    /// The gate seen from the vertex `x Z_p^n`.
    pub fn gate_at(&self, x: &Mat, a: &IdealSimplex, b: &IdealSimplex) -> Result<i64, BuildingError> {
        let xi = x.inverse()?;
        self.gate(&self.act(&xi, a)?, &self.act(&xi, b)?)
    }

    pub fn opposite(&self, a: &IdealSimplex, b: &IdealSimplex) -> Result<bool, BuildingError> {
        if b.ty != self.opposite_type(a.ty) {
            return Ok(false);
        }
        for k in self.dims(a.ty) {
            let mut m = Mat::zeros(self.field, self.n);
            for i in 0..self.n {
                for j in 0..k {
                    m.set(i, j, a.rep.get(i, j).clone());
                }
                for j in 0..self.n - k {
                    m.set(i, k + j, b.rep.get(i, j).clone());
                }
            }
            if m.det().is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Weyl distance between the chambers (or the minimal double coset
    /// representative for simplices) `a` and `b`.
    pub fn relative_position(&self, a: &IdealSimplex, b: &IdealSimplex) -> Result<WeylElement, BuildingError> {
        let m = &a.rep.inverse()? * &b.rep;
        let w = self.weyl_of(&decomp::bruhat(&m, Direction::Plus)?.perm);
        Ok(self.weyl.min_double_coset(a.ty, &w, b.ty)?)
    }

    fn position_in_apartment(&self, frame: &Mat, c: &IdealSimplex) -> Result<Vec<usize>, BuildingError> {
        let local = self.boundary_simplex(&(&frame.inverse()? * &c.rep), c.ty)?;
        let coset = AffineWeylCoset::from_monomial(&local.rep).ok_or(BuildingError::NotInApartment)?;
        if coset.exps.iter().any(|&e| e != 0) {
            return Err(BuildingError::NotInApartment);
        }
        Ok(coset.perm)
    }

    /// Retraction onto the apartment with frame `frame` (chambers
    /// `frame * w * c+`) centred at its chamber `center`, using the Bruhat
    /// decomposition relative to `B+` after moving `center` to `c+`.
    pub fn retraction(&self, frame: &Mat, center: &IdealSimplex, x: &IdealSimplex) -> Result<Retraction, BuildingError> {
        if !center.ty.is_empty() || !x.ty.is_empty() {
            return Err(BuildingError::InvalidArgument("retraction acts on chambers".into()));
        }
        let v = self.position_in_apartment(frame, center)?;
        let mv = self.weyl_matrix(&self.weyl_of(&v));
        let local = &(&mv.inverse()? * &frame.inverse()?) * &x.rep;
        let w1 = decomp::bruhat(&local, Direction::Plus)?.perm;
        let perm: Vec<usize> = w1.iter().map(|&j| v[j]).collect();
        self.finish_retraction(frame, perm)
    }

    /// Retraction centred at `frame * c-`, computed independently through
    /// the decomposition `B- w B+`.
    pub fn retraction_from_opposite(&self, frame: &Mat, x: &IdealSimplex) -> Result<Retraction, BuildingError> {
        let local = &frame.inverse()? * &x.rep;
        let perm = decomp::bruhat(&local, Direction::Minus)?.perm;
        self.finish_retraction(frame, perm)
    }

    fn finish_retraction(&self, frame: &Mat, perm: Vec<usize>) -> Result<Retraction, BuildingError> {
        let w = self.weyl_of(&perm);
        let chamber = self.boundary_simplex(&(frame * &self.weyl_matrix(&w)), TypeSet::EMPTY)?;
        Ok(Retraction { w, perm, chamber })
    }

    /// Number of root groups in `U_ty`.
    pub fn radical_dim(&self, ty: TypeSet) -> usize {
        let b = self.block_index(ty);
        (0..self.n).flat_map(|i| (i + 1..self.n).map(move |j| (i, j))).filter(|&(i, j)| b[i] != b[j]).count()
    }

    /// Element of `U_ty^+` (block strictly upper) or `U_ty^-` (block
    /// strictly lower); parameters fill the free entries row by row.
    pub fn unipotent_radical_element(&self, ty: TypeSet, plus: bool, params: &[Padic]) -> Result<Mat, BuildingError> {
        let b = self.block_index(ty);
        let slots: Vec<(usize, usize)> = (0..self.n)
            .flat_map(|i| (0..self.n).map(move |j| (i, j)))
            .filter(|&(i, j)| b[i] != b[j] && (i < j) == plus)
            .collect();
        if slots.len() != params.len() {
            return Err(BuildingError::ParameterCount { expected: slots.len(), got: params.len() });
        }
        let mut m = self.identity();
        for (&(i, j), x) in slots.iter().zip(params) {
            m.set(i, j, x.clone());
        }
        Ok(m)
    }

    /// Element of the unipotent radical of the stabilizer of `s`, i.e. the
    /// conjugate of `U_ty^+` by the representative of `s`.
    pub fn radical_element(&self, s: &IdealSimplex, params: &[Padic]) -> Result<Mat, BuildingError> {
        let u = self.unipotent_radical_element(s.ty, true, params)?;
        Ok(&(&s.rep * &u) * &s.rep.inverse()?)
    }

    /// A basis adapted to the opposite simplices `a` and `b`: block `j`
    /// spans the intersection of `A_(d_j)` with `B_(n - d_(j-1))`, so
    /// block-diagonal matrices in this basis fix both.
    pub fn opposite_frame(&self, a: &IdealSimplex, b: &IdealSimplex) -> Result<Mat, BuildingError> {
        if !self.opposite(a, b)? {
            return Err(BuildingError::InvalidArgument("simplices are not opposite".into()));
        }
        let f = self.field;
        let mut m = Mat::zeros(f, self.n);
        let mut col = 0;
        let mut prev = 0;
        let mut dims = self.dims(a.ty);
        dims.push(self.n);
        for d in dims {
            let block = subspace::intersect(&self.subspace(a, d), &self.subspace(b, self.n - prev), f)?;
            for v in subspace::basis(&block, f)? {
                for (i, x) in v.into_iter().enumerate() {
                    m.set(i, col, x);
                }
                col += 1;
            }
            prev = d;
        }
        if col != self.n {
            return Err(BuildingError::Singular(m.min_val()));
        }
        Ok(m)
    }

    /// Splits `g` as `u * m` relative to `frame`: in that basis `g` is
    /// block upper triangular for `ty`, `m` is its block diagonal and `u`
    /// is block unipotent.
    pub fn levi_decompose(&self, g: &Mat, frame: &Mat, ty: TypeSet) -> Result<(Mat, Mat), BuildingError> {
        let fi = frame.inverse()?;
        let local = &(&fi * g) * frame;
        let b = self.block_index(ty);
        let mut m = local.clone();
        for i in 0..self.n {
            for j in 0..self.n {
                if b[i] != b[j] {
                    m.set(i, j, self.field.zero());
                }
            }
        }
        let u = &local * &m.inverse()?;
        Ok((&(frame * &u) * &fi, &(frame * &m) * &fi))
    }

    pub fn parabolic_membership(&self, g: &Mat, s: &IdealSimplex) -> Result<bool, BuildingError> {
        Ok(self.same(&self.act(g, s)?, s))
    }

    /// Projection of the star of `x` onto the star of `center`: the
    /// simplex obtained by refining the flag of `center` by that of `x`.
    pub fn project(&self, center: &IdealSimplex, x: &IdealSimplex) -> Result<IdealSimplex, BuildingError> {
        let f = self.field;
        let mut cdims = vec![0];
        cdims.extend(self.dims(center.ty));
        cdims.push(self.n);
        let mut xdims = self.dims(x.ty);
        xdims.push(self.n);
        let mut chain: Vec<Vec<Vector>> = Vec::new();
        for w in cdims.windows(2) {
            let va = self.subspace(center, w[0]);
            let vb = self.subspace(center, w[1]);
            for &k in &xdims {
                let meet = subspace::intersect(&vb, &self.subspace(x, k), f)?;
                chain.push(subspace::sum(&va, &meet, f)?);
            }
        }
        self.from_chain(&chain)
    }

    /// Lattice basis in Hermite normal form, a canonical name for the
    /// vertex `g Z_p^n`.
    pub fn vertex(&self, g: &Mat) -> Result<Mat, BuildingError> {
        decomp::hermite(g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g3() -> Group {
        Group::new(3, 3, 20).unwrap()
    }

    #[test]
    fn standard_chambers_are_opposite() {
        let g = g3();
        let cp = g.standard_simplex(TypeSet::EMPTY);
        let cm = g.standard_opposite(TypeSet::EMPTY);
        assert!(g.opposite(&cp, &cm).unwrap());
        assert!(!g.opposite(&cp, &cp).unwrap());
        assert!(g.same(&cm, &g.chamber(g.weyl().longest())));
    }

    #[test]
    fn perm_and_word_round_trip() {
        let g = Group::new(5, 4, 10).unwrap();
        for w in g.weyl().enumerate().unwrap() {
            assert_eq!(g.weyl_of(&g.perm_of(&w)), w);
        }
    }

    #[test]
    fn permutation_action_matches_root_action() {
        // alpha_i = e_i - e_{i+1} is sent to e_{w(i)} - e_{w(i+1)}
        let g = Group::new(5, 4, 10).unwrap();
        for w in g.weyl().enumerate().unwrap() {
            let p = g.perm_of(&w);
            for i in 0..3 {
                let mut simple = vec![0; 3];
                simple[i] = 1;
                let r = g.weyl().act(&w, &simple);
                // coefficients in simple roots of e_a - e_b
                let (a, b) = (p[i], p[i + 1]);
                let mut want = vec![0i64; 3];
                let (lo, hi, s) = if a < b { (a, b, 1) } else { (b, a, -1) };
                for k in lo..hi {
                    want[k] = s;
                }
                assert_eq!(r, want);
            }
        }
    }

    #[test]
    fn unipotent_parameters() {
        let g = Group::new(3, 2, 10).unwrap();
        let f = g.field();
        let u = g.unipotent_radical_element(TypeSet::EMPTY, true, &[f.int(7)]).unwrap();
        assert_eq!(u, Mat::from_ints(f, &[&[1, 7], &[0, 1]]));
        assert!(matches!(
            g.unipotent_radical_element(TypeSet::EMPTY, true, &[]),
            Err(BuildingError::ParameterCount { expected: 1, got: 0 })
        ));
        let g4 = Group::new(3, 4, 10).unwrap();
        assert_eq!(g4.radical_dim(TypeSet::from_indices(&[0])), 5);
    }

    #[test]
    fn lower_unipotent_moves_c_plus() {
        let g = g3();
        let f = g.field();
        let cp = g.standard_simplex(TypeSet::EMPTY);
        let u = g.unipotent_radical_element(TypeSet::EMPTY, false, &[f.int(1), f.zero(), f.zero()]).unwrap();
        assert!(!g.parabolic_membership(&u, &cp).unwrap());
        let b = g.unipotent_radical_element(TypeSet::EMPTY, true, &[f.int(4), f.int(2), f.ratio(1, 3)]).unwrap();
        assert!(g.parabolic_membership(&b, &cp).unwrap());
    }
}
