//! Small square matrices over [`Padic`].

use std::fmt;
use std::ops::Mul;

use crate::padic::{Field, Padic, PadicError, INF};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mat {
    n: usize,
    field: Field,
    a: Vec<Padic>,
}

impl Mat {
    pub fn zeros(field: Field, n: usize) -> Mat {
        Mat { n, field, a: vec![field.zero(); n * n] }
    }

    pub fn identity(field: Field, n: usize) -> Mat {
        let mut m = Mat::zeros(field, n);
        for i in 0..n {
            m.a[i * n + i] = field.one();
        }
        m
    }

    pub fn from_rows(field: Field, rows: Vec<Vec<Padic>>) -> Mat {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "matrix must be square");
        Mat { n, field, a: rows.into_iter().flatten().collect() }
    }

    pub fn from_ints(field: Field, rows: &[&[i64]]) -> Mat {
        Mat::from_rows(field, rows.iter().map(|r| r.iter().map(|&x| field.int(x)).collect()).collect())
    }

    pub fn diag(field: Field, d: &[Padic]) -> Mat {
        let mut m = Mat::zeros(field, d.len());
        for (i, x) in d.iter().enumerate() {
            m.set(i, i, x.clone());
        }
        m
    }

    /// `diag(p^e_1, ..., p^e_n)`.
    pub fn diag_pow(field: Field, e: &[i64]) -> Mat {
        Mat::diag(field, &e.iter().map(|&k| field.pow_p(k)).collect::<Vec<_>>())
    }

    /// Identity plus `x` at `(i, j)`, `i != j`.
    pub fn elementary(field: Field, n: usize, i: usize, j: usize, x: Padic) -> Mat {
        let mut m = Mat::identity(field, n);
        m.set(i, j, x);
        m
    }

    /// Monomial matrix with `p^e[j]` in row `perm[j]` of column `j`, signs
    /// chosen so that the determinant is 1.
    pub fn monomial(field: Field, perm: &[usize], e: &[i64]) -> Mat {
        let n = perm.len();
        let mut m = Mat::zeros(field, n);
        for j in 0..n {
            m.set(perm[j], j, field.pow_p(e[j]));
        }
        if permutation_sign(perm) < 0 {
            let x = m.get(perm[0], 0).clone();
            m.set(perm[0], 0, -x);
        }
        m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn get(&self, i: usize, j: usize) -> &Padic {
        &self.a[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: Padic) {
        self.a[i * self.n + j] = x;
    }

    pub fn entries(&self) -> &[Padic] {
        &self.a
    }

    pub fn col(&self, j: usize) -> Vec<Padic> {
        (0..self.n).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> Mat {
        let mut m = Mat::zeros(self.field, self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                m.set(j, i, self.get(i, j).clone());
            }
        }
        m
    }

    pub fn scale(&self, x: &Padic) -> Mat {
        Mat { n: self.n, field: self.field, a: self.a.iter().map(|y| y * x).collect() }
    }

    pub fn sub(&self, other: &Mat) -> Mat {
        Mat { n: self.n, field: self.field, a: self.a.iter().zip(&other.a).map(|(x, y)| x - y).collect() }
    }

    /// Smallest guaranteed valuation over all entries.
    pub fn min_val(&self) -> i64 {
        self.a.iter().map(Padic::vmin).min().unwrap_or(INF)
    }

    /// Depth to which two matrices agree entrywise.
    pub fn agreement(&self, other: &Mat) -> i64 {
        self.sub(other).min_val()
    }

    /// Agreement measured relative to the scale of `self`: how many digits
    /// below the largest entry of `self` the two matrices coincide.
    pub fn relative_agreement(&self, other: &Mat) -> i64 {
        let a = self.agreement(other);
        if a == INF {
            INF
        } else {
            a - self.min_val()
        }
    }

    /// Determinant by cofactor expansion (no divisions).
    pub fn det(&self) -> Padic {
        let idx: Vec<usize> = (0..self.n).collect();
        self.minor(&idx, &idx)
    }

    /// Determinant of the submatrix on the given rows and columns.
    pub fn minor(&self, rows: &[usize], cols: &[usize]) -> Padic {
        let k = rows.len();
        if k == 0 {
            return self.field.one();
        }
        if k == 1 {
            return self.get(rows[0], cols[0]).clone();
        }
        let mut acc = self.field.zero();
        for (t, &c) in cols.iter().enumerate() {
            let e = self.get(rows[0], c);
            if e.is_exact_zero() {
                continue;
            }
            let rest: Vec<usize> = cols.iter().enumerate().filter(|&(s, _)| s != t).map(|(_, &x)| x).collect();
            let term = e * self.minor(&rows[1..], &rest);
            acc = if t % 2 == 0 { acc + term } else { acc - term };
        }
        acc
    }

    /// Inverse through the adjugate, so only the determinant is divided by.
    pub fn inverse(&self) -> Result<Mat, PadicError> {
        let d = self.det().inv()?;
        let n = self.n;
        let mut m = Mat::zeros(self.field, n);
        for i in 0..n {
            for j in 0..n {
                let rows: Vec<usize> = (0..n).filter(|&r| r != j).collect();
                let cols: Vec<usize> = (0..n).filter(|&c| c != i).collect();
                let c = self.minor(&rows, &cols);
                let c = if (i + j) % 2 == 0 { c } else { -c };
                m.set(i, j, c * &d);
            }
        }
        Ok(m)
    }

    pub fn mul_ref(&self, other: &Mat) -> Mat {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut m = Mat::zeros(self.field, n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = self.field.zero();
                for k in 0..n {
                    let (x, y) = (self.get(i, k), other.get(k, j));
                    if !x.is_exact_zero() && !y.is_exact_zero() {
                        acc = acc + x * y;
                    }
                }
                m.set(i, j, acc);
            }
        }
        m
    }

    pub fn pow(&self, k: u32) -> Mat {
        let mut r = Mat::identity(self.field, self.n);
        for _ in 0..k {
            r = r.mul_ref(self);
        }
        r
    }

    /// `self * other * self^-1`.
    pub fn conj(&self, other: &Mat) -> Result<Mat, PadicError> {
        Ok(self.mul_ref(other).mul_ref(&self.inverse()?))
    }

    pub fn swap_rows(&mut self, i: usize, k: usize) {
        for j in 0..self.n {
            self.a.swap(i * self.n + j, k * self.n + j);
        }
    }

    pub fn swap_cols(&mut self, j: usize, k: usize) {
        for i in 0..self.n {
            self.a.swap(i * self.n + j, i * self.n + k);
        }
    }

    /// row_i += c * row_k
    pub fn add_row(&mut self, i: usize, k: usize, c: &Padic) {
        for j in 0..self.n {
            let y = self.get(k, j);
            if y.is_exact_zero() {
                continue;
            }
            let v = self.get(i, j) + c * y;
            self.set(i, j, v);
        }
    }

    /// col_j += c * col_k
    pub fn add_col(&mut self, j: usize, k: usize, c: &Padic) {
        for i in 0..self.n {
            let y = self.get(i, k);
            if y.is_exact_zero() {
                continue;
            }
            let v = self.get(i, j) + c * y;
            self.set(i, j, v);
        }
    }

    pub fn scale_row(&mut self, i: usize, c: &Padic) {
        for j in 0..self.n {
            let v = self.get(i, j) * c;
            self.set(i, j, v);
        }
    }

    pub fn scale_col(&mut self, j: usize, c: &Padic) {
        for i in 0..self.n {
            let v = self.get(i, j) * c;
            self.set(i, j, v);
        }
    }

    /// Entries as `"p^v*u"` strings, row by row.
    pub fn to_literals(&self) -> Vec<Vec<String>> {
        (0..self.n)
            .map(|i| {
                (0..self.n)
                    .map(|j| {
                        let x = self.get(i, j);
                        match (x.valuation(), x.centered_unit()) {
                            (Some(v), Some(u)) => format!("{}^{}*{}", self.field.p, v, u),
                            _ => "0".to_string(),
                        }
                    })
                    .collect()
            })
            .collect()
    }

    pub fn from_literals(field: Field, rows: &[Vec<String>]) -> Result<Mat, PadicError> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(PadicError::Parse("matrix literal is not square".into()));
        }
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|s| field.parse(s)).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Mat::from_rows(field, rows))
    }
}

impl Mul for &Mat {
    type Output = Mat;
    fn mul(self, rhs: &Mat) -> Mat {
        self.mul_ref(rhs)
    }
}

impl Mul for Mat {
    type Output = Mat;
    fn mul(self, rhs: Mat) -> Mat {
        self.mul_ref(&rhs)
    }
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows = self.to_literals();
        write!(f, "[")?;
        for (i, r) in rows.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{}", r.join(", "))?;
        }
        write!(f, "]")
    }
}

pub fn permutation_sign(perm: &[usize]) -> i32 {
    let mut s = 1;
    for i in 0..perm.len() {
        for j in i + 1..perm.len() {
            if perm[i] > perm[j] {
                s = -s;
            }
        }
    }
    s
}
