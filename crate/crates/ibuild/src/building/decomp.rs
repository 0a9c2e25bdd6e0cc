//! Cartan, Iwasawa, Iwahori and Bruhat decompositions by elimination.
//!
//! Every routine keeps `g = left * cur * right` while `cur` is reduced, so
//! the factors come out of the same pass that produces the middle term.

use serde::Serialize;

use super::BuildingError;
use crate::matrix::Mat;
use crate::padic::Padic;

pub(crate) struct Tracker {
    pub cur: Mat,
    pub left: Mat,
    pub right: Mat,
}

impl Tracker {
    pub fn new(g: &Mat) -> Tracker {
        let id = Mat::identity(g.field(), g.n());
        Tracker { cur: g.clone(), left: id.clone(), right: id }
    }

    /// row_i += c * row_k
    pub fn add_row(&mut self, i: usize, k: usize, c: &Padic) {
        self.cur.add_row(i, k, c);
        self.left.add_col(k, i, &-c);
    }

    /// col_j += c * col_k
    pub fn add_col(&mut self, j: usize, k: usize, c: &Padic) {
        self.cur.add_col(j, k, c);
        self.right.add_row(k, j, &-c);
    }

    pub fn swap_rows(&mut self, i: usize, k: usize) {
        self.cur.swap_rows(i, k);
        self.left.swap_cols(i, k);
    }

    pub fn swap_cols(&mut self, j: usize, k: usize) {
        self.cur.swap_cols(j, k);
        self.right.swap_rows(j, k);
    }

    pub fn scale_row(&mut self, i: usize, c: &Padic) -> Result<(), BuildingError> {
        let ci = c.inv()?;
        self.cur.scale_row(i, c);
        self.left.scale_col(i, &ci);
        Ok(())
    }

    pub fn scale_col(&mut self, j: usize, c: &Padic) -> Result<(), BuildingError> {
        let ci = c.inv()?;
        self.cur.scale_col(j, c);
        self.right.scale_row(j, &ci);
        Ok(())
    }

    /// Clears `cur[i][j]` using the pivot at `(r, j)` by a row operation.
    fn clear_by_row(&mut self, i: usize, r: usize, j: usize) -> Result<(), BuildingError> {
        if self.cur.get(i, j).is_exact_zero() {
            return Ok(());
        }
        let c = self.cur.get(i, j).div(self.cur.get(r, j))?;
        self.add_row(i, r, &-c);
        self.cur.set(i, j, self.cur.field().zero());
        Ok(())
    }

    /// Clears `cur[i][j]` using the pivot at `(i, c)` by a column operation.
    fn clear_by_col(&mut self, i: usize, j: usize, c: usize) -> Result<(), BuildingError> {
        if self.cur.get(i, j).is_exact_zero() {
            return Ok(());
        }
        let k = self.cur.get(i, j).div(self.cur.get(i, c))?;
        self.add_col(j, c, &-k);
        self.cur.set(i, j, self.cur.field().zero());
        Ok(())
    }
}

fn require_invertible(g: &Mat) -> Result<(), BuildingError> {
    let d = g.det();
    if d.is_zero() {
        return Err(BuildingError::Singular(d.vmin()));
    }
    Ok(())
}

/// `g = k1 * diag(p^exps) * k2` with `k1, k2` in `SL_n(Z_p)` and `exps`
/// non-increasing.
#[derive(Debug, Clone)]
pub struct Cartan {
    pub k1: Mat,
    pub exps: Vec<i64>,
    pub k2: Mat,
}

impl Cartan {
    pub fn torus(&self) -> Mat {
        Mat::diag_pow(self.k1.field(), &self.exps)
    }

    pub fn recompose(&self) -> Mat {
        &(&self.k1 * &self.torus()) * &self.k2
    }
}

pub fn cartan(g: &Mat) -> Result<Cartan, BuildingError> {
    require_invertible(g)?;
    let n = g.n();
    let f = g.field();
    let mut t = Tracker::new(g);
    for s in 0..n {
        let mut best: Option<(usize, usize, i64)> = None;
        for i in s..n {
            for j in s..n {
                let x = t.cur.get(i, j);
                if !x.is_zero() && best.is_none_or(|b| x.vmin() < b.2) {
                    best = Some((i, j, x.vmin()));
                }
            }
        }
        let (i, j, _) = best.ok_or(BuildingError::Singular(t.cur.min_val()))?;
        t.swap_rows(s, i);
        t.swap_cols(s, j);
        for k in s + 1..n {
            t.clear_by_row(k, s, s)?;
        }
        for k in s + 1..n {
            t.clear_by_col(s, k, s)?;
        }
    }
    let mut exps = Vec::with_capacity(n);
    for i in 0..n {
        let d = t.cur.get(i, i).clone();
        let v = d.valuation().ok_or(BuildingError::Singular(d.vmin()))?;
        let u = d.unit_part().expect("nonzero pivot");
        t.scale_row(i, &u.inv()?)?;
        t.cur.set(i, i, f.pow_p(v));
        exps.push(v);
    }
    // selection sort, descending, permuting rows and columns together
    for i in 0..n {
        let k = (i..n).max_by_key(|&k| (exps[k], std::cmp::Reverse(k))).unwrap();
        if k != i {
            exps.swap(i, k);
            t.swap_rows(i, k);
            t.swap_cols(i, k);
        }
    }
    let mut k1 = t.left;
    let mut k2 = t.right;
    let delta = k1.det();
    k1.scale_col(0, &delta.inv()?);
    k2.scale_row(0, &delta);
    Ok(Cartan { k1, exps, k2 })
}

/// Which opposite Borel the triangular factor belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    /// `g = u t k` with `u` upper unipotent.
    Plus,
    /// `g = u t k` with `u` lower unipotent.
    Minus,
}

#[derive(Debug, Clone)]
pub struct Iwasawa {
    pub u: Mat,
    pub exps: Vec<i64>,
    pub k: Mat,
}

impl Iwasawa {
    pub fn recompose(&self) -> Mat {
        &(&self.u * &Mat::diag_pow(self.u.field(), &self.exps)) * &self.k
    }
}

pub fn iwasawa(g: &Mat, dir: Direction) -> Result<Iwasawa, BuildingError> {
    require_invertible(g)?;
    let n = g.n();
    let f = g.field();
    let mut t = Tracker::new(g);
    let order: Vec<usize> = match dir {
        Direction::Plus => (0..n).rev().collect(),
        Direction::Minus => (0..n).collect(),
    };
    for &r in &order {
        // columns still free for row r
        let cols: Vec<usize> = match dir {
            Direction::Plus => (0..=r).collect(),
            Direction::Minus => (r..n).collect(),
        };
        let mut best: Option<(usize, i64)> = None;
        for &j in &cols {
            let x = t.cur.get(r, j);
            if !x.is_zero() && best.is_none_or(|b| x.vmin() < b.1) {
                best = Some((j, x.vmin()));
            }
        }
        let (j, _) = best.ok_or(BuildingError::Singular(t.cur.min_val()))?;
        t.swap_cols(r, j);
        for &c in &cols {
            if c != r {
                t.clear_by_col(r, c, r)?;
            }
        }
    }
    let mut exps = Vec::with_capacity(n);
    for i in 0..n {
        let d = t.cur.get(i, i).clone();
        let v = d.valuation().ok_or(BuildingError::Singular(d.vmin()))?;
        t.scale_col(i, &d.unit_part().expect("nonzero").inv()?)?;
        t.cur.set(i, i, f.pow_p(v));
        exps.push(v);
    }
    let mut u = t.cur;
    for j in 0..n {
        u.scale_col(j, &f.pow_p(-exps[j]));
        u.set(j, j, f.one());
    }
    Ok(Iwasawa { u, exps, k: t.right })
}

/// An element of the affine Weyl group of `SL_n`: the monomial matrix with
/// `p^exps[j]` in row `perm[j]` of column `j` (sign-corrected to det 1).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct AffineWeylCoset {
    pub perm: Vec<usize>,
    pub exps: Vec<i64>,
}

impl AffineWeylCoset {
    pub fn matrix(&self, field: crate::padic::Field) -> Mat {
        Mat::monomial(field, &self.perm, &self.exps)
    }

    /// Reads off `(perm, exps)` from a matrix known to be monomial.
    pub fn from_monomial(m: &Mat) -> Option<AffineWeylCoset> {
        let n = m.n();
        let mut perm = vec![0; n];
        let mut exps = vec![0; n];
        for j in 0..n {
            let nz: Vec<usize> = (0..n).filter(|&i| !m.get(i, j).is_zero()).collect();
            if nz.len() != 1 {
                return None;
            }
            perm[j] = nz[0];
            exps[j] = m.get(nz[0], j).valuation()?;
        }
        Some(AffineWeylCoset { perm, exps })
    }
}

#[derive(Debug, Clone)]
pub struct Iwahori {
    pub coset: AffineWeylCoset,
    pub left: Mat,
    pub right: Mat,
}

impl Iwahori {
    pub fn recompose(&self) -> Mat {
        &(&self.left * &self.coset.matrix(self.left.field())) * &self.right
    }
}

/// Membership in the standard Iwahori subgroup: integral, strictly lower
/// entries divisible by `p`, unit diagonal.
pub fn in_iwahori(m: &Mat) -> bool {
    let n = m.n();
    (0..n).all(|i| {
        (0..n).all(|j| {
            let v = m.get(i, j).vmin();
            match i.cmp(&j) {
                std::cmp::Ordering::Less => v >= 0,
                std::cmp::Ordering::Equal => v == 0,
                std::cmp::Ordering::Greater => v >= 1,
            }
        })
    })
}

pub fn iwahori(g: &Mat) -> Result<Iwahori, BuildingError> {
    require_invertible(g)?;
    let n = g.n();
    let mut t = Tracker::new(g);
    let mut row_free = vec![true; n];
    let mut col_free = vec![true; n];
    for _ in 0..n {
        let mut m = i64::MAX;
        for i in (0..n).filter(|&i| row_free[i]) {
            for j in (0..n).filter(|&j| col_free[j]) {
                let x = t.cur.get(i, j);
                if !x.is_zero() {
                    m = m.min(x.vmin());
                }
            }
        }
        if m == i64::MAX {
            return Err(BuildingError::Singular(t.cur.min_val()));
        }
        // bottom-most row attaining the minimum, then leftmost column in it
        let r = (0..n)
            .rev()
            .find(|&i| row_free[i] && (0..n).any(|j| col_free[j] && !t.cur.get(i, j).is_zero() && t.cur.get(i, j).vmin() == m))
            .unwrap();
        let c = (0..n)
            .find(|&j| col_free[j] && !t.cur.get(r, j).is_zero() && t.cur.get(r, j).vmin() == m)
            .unwrap();
        for i in (0..n).filter(|&i| row_free[i] && i != r) {
            t.clear_by_row(i, r, c)?;
        }
        for j in (0..n).filter(|&j| col_free[j] && j != c) {
            t.clear_by_col(r, j, c)?;
        }
        row_free[r] = false;
        col_free[c] = false;
    }
    let coset = AffineWeylCoset::from_monomial(&t.cur).ok_or(BuildingError::Singular(t.cur.min_val()))?;
    let target = coset.matrix(g.field());
    for j in 0..n {
        let r = coset.perm[j];
        let lambda = t.cur.get(r, j).div(target.get(r, j))?;
        t.scale_col(j, &lambda.inv()?)?;
        t.cur.set(r, j, target.get(r, j).clone());
    }
    Ok(Iwahori { coset, left: t.left, right: t.right })
}

/// `g = left * w * right` with `right` upper triangular and `left` upper
/// (`Direction::Plus`) or lower (`Direction::Minus`) triangular; `w` is a
/// monomial matrix whose column `j` is supported in row `perm[j]`.
#[derive(Debug, Clone)]
pub struct Bruhat {
    pub left: Mat,
    pub middle: Mat,
    pub right: Mat,
    pub perm: Vec<usize>,
}

pub fn bruhat(g: &Mat, dir: Direction) -> Result<Bruhat, BuildingError> {
    require_invertible(g)?;
    let n = g.n();
    let mut t = Tracker::new(g);
    let mut row_free = vec![true; n];
    let mut perm = vec![0; n];
    for j in 0..n {
        let candidates = (0..n).filter(|&i| row_free[i] && !t.cur.get(i, j).is_zero());
        let r = match dir {
            Direction::Plus => candidates.max(),
            Direction::Minus => candidates.min(),
        }
        .ok_or(BuildingError::Singular(t.cur.min_val()))?;
        for i in (0..n).filter(|&i| row_free[i] && i != r) {
            t.clear_by_row(i, r, j)?;
        }
        for k in j + 1..n {
            t.clear_by_col(r, k, j)?;
        }
        row_free[r] = false;
        perm[j] = r;
    }
    Ok(Bruhat { left: t.left, middle: t.cur, right: t.right, perm })
}

/// Hermite normal form of the lattice spanned by the columns of `g`: an
/// upper triangular basis with diagonal `p^e_i` and entries above the
/// diagonal reduced modulo the diagonal entry of their row.
pub fn hermite(g: &Mat) -> Result<Mat, BuildingError> {
    let iw = iwasawa(g, Direction::Plus)?;
    let f = g.field();
    let n = g.n();
    let mut b = &iw.u * &Mat::diag_pow(f, &iw.exps);
    for i in (0..n).rev() {
        for j in i + 1..n {
            let x = b.get(i, j).clone();
            let r = x.reduce_mod(iw.exps[i])?;
            let c = (&r - &x) * f.pow_p(-iw.exps[i]);
            b.add_col(j, i, &c);
            b.set(i, j, r);
        }
    }
    Ok(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::Field;

    fn f() -> Field {
        Field::new(3, 24).unwrap()
    }

    #[test]
    fn cartan_of_identity_and_torus() {
        let f = f();
        let c = cartan(&Mat::identity(f, 3)).unwrap();
        assert_eq!(c.exps, vec![0, 0, 0]);
        let t = Mat::diag_pow(f, &[1, -1]);
        let c = cartan(&t).unwrap();
        assert_eq!(c.exps, vec![1, -1]);
        assert!(c.k1.agreement(&Mat::identity(f, 2)) >= 24);
        let flipped = Mat::diag_pow(f, &[-2, 2]);
        assert_eq!(cartan(&flipped).unwrap().exps, vec![2, -2]);
    }

    #[test]
    fn iwasawa_of_unipotent_is_trivial() {
        let f = f();
        let u = Mat::from_rows(f, vec![vec![f.one(), f.ratio(1, 3)], vec![f.zero(), f.one()]]);
        let iw = iwasawa(&u, Direction::Plus).unwrap();
        assert!(iw.u.agreement(&u) >= 20);
        assert_eq!(iw.exps, vec![0, 0]);
    }

    #[test]
    fn iwasawa_minus_of_antidiagonal() {
        let f = f();
        let g = Mat::from_ints(f, &[&[0, 1], &[-1, 0]]);
        let iw = iwasawa(&g, Direction::Minus).unwrap();
        assert_eq!(iw.exps, vec![0, 0]);
        assert!(iw.u.get(0, 1).is_exact_zero());
        assert!(iw.recompose().agreement(&g) >= 24);
    }

    #[test]
    fn iwahori_of_torus_is_translation() {
        let f = f();
        let w = iwahori(&Mat::diag_pow(f, &[1, -1])).unwrap();
        assert_eq!(w.coset, AffineWeylCoset { perm: vec![0, 1], exps: vec![1, -1] });
        assert!(in_iwahori(&w.left) && in_iwahori(&w.right));
    }

    #[test]
    fn bruhat_reads_permutation() {
        let f = f();
        let w = Mat::monomial(f, &[2, 0, 1], &[0, 0, 0]);
        assert_eq!(bruhat(&w, Direction::Plus).unwrap().perm, vec![2, 0, 1]);
        assert_eq!(bruhat(&w, Direction::Minus).unwrap().perm, vec![2, 0, 1]);
    }

    #[test]
    fn hermite_of_torus() {
        let f = f();
        let h = hermite(&Mat::diag_pow(f, &[2, -2])).unwrap();
        assert!(h.agreement(&Mat::diag_pow(f, &[2, -2])) >= 20);
    }
}
