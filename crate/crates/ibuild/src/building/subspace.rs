//! Subspaces of `Q_p^n` given by spanning column vectors.
//!
//! Elimination always pivots on an entry of least valuation, and an entry
//! counts as zero when it is zero within its tracked precision.

use crate::matrix::Mat;
use crate::padic::{Field, Padic, PadicError};

pub type Vector = Vec<Padic>;

fn pick_pivot(rows: &[Vec<Padic>], free_rows: &[bool], free_cols: &[bool]) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, i64)> = None;
    for (i, row) in rows.iter().enumerate() {
        if !free_rows[i] {
            continue;
        }
        for (j, x) in row.iter().enumerate() {
            if free_cols[j] && !x.is_zero() && best.is_none_or(|b| x.vmin() < b.2) {
                best = Some((i, j, x.vmin()));
            }
        }
    }
    best.map(|(i, j, _)| (i, j))
}

/// Basis of the null space of the matrix with the given rows.
pub fn kernel(rows: &[Vec<Padic>], ncols: usize, field: Field) -> Result<Vec<Vector>, PadicError> {
    let mut a = rows.to_vec();
    let mut free_rows = vec![true; a.len()];
    let mut free_cols = vec![true; ncols];
    let mut pivots = Vec::new();
    while let Some((i, j)) = pick_pivot(&a, &free_rows, &free_cols) {
        let inv = a[i][j].inv()?;
        for x in a[i].iter_mut() {
            *x = &*x * &inv;
        }
        a[i][j] = field.one();
        for k in 0..a.len() {
            if k == i || a[k][j].is_exact_zero() {
                continue;
            }
            let c = a[k][j].clone();
            for l in 0..ncols {
                let v = &a[k][l] - &(&c * &a[i][l]);
                a[k][l] = v;
            }
            a[k][j] = field.zero();
        }
        free_rows[i] = false;
        free_cols[j] = false;
        pivots.push((i, j));
    }
    let mut out = Vec::new();
    for f in (0..ncols).filter(|&f| free_cols[f]) {
        let mut x = vec![field.zero(); ncols];
        x[f] = field.one();
        for &(i, j) in &pivots {
            x[j] = -&a[i][f];
        }
        out.push(x);
    }
    Ok(out)
}

/// A basis of the span of `vs`, dropping vectors that are dependent within
/// precision.
pub fn basis(vs: &[Vector], field: Field) -> Result<Vec<Vector>, PadicError> {
    if vs.is_empty() {
        return Ok(Vec::new());
    }
    let n = vs[0].len();
    let mut cols = vs.to_vec();
    let mut free_rows = vec![true; n];
    let mut free_cols = vec![true; cols.len()];
    let mut out = Vec::new();
    loop {
        // rows view of the current columns
        let rows: Vec<Vec<Padic>> = (0..n).map(|i| cols.iter().map(|c| c[i].clone()).collect()).collect();
        let Some((i, j)) = pick_pivot(&rows, &free_rows, &free_cols) else { break };
        let inv = cols[j][i].inv()?;
        let piv: Vector = cols[j].iter().map(|x| x * &inv).collect();
        for k in 0..cols.len() {
            if free_cols[k] && k != j && !cols[k][i].is_exact_zero() {
                let c = cols[k][i].clone();
                cols[k] = cols[k].iter().zip(&piv).map(|(x, y)| x - &(&c * y)).collect();
                cols[k][i] = field.zero();
            }
        }
        free_rows[i] = false;
        free_cols[j] = false;
        out.push(piv);
    }
    Ok(out)
}

pub fn dim(vs: &[Vector], field: Field) -> Result<usize, PadicError> {
    Ok(basis(vs, field)?.len())
}

pub fn sum(a: &[Vector], b: &[Vector], field: Field) -> Result<Vec<Vector>, PadicError> {
    let all: Vec<Vector> = a.iter().chain(b).cloned().collect();
    basis(&all, field)
}

pub fn intersect(a: &[Vector], b: &[Vector], field: Field) -> Result<Vec<Vector>, PadicError> {
    let a = basis(a, field)?;
    let b = basis(b, field)?;
    if a.is_empty() || b.is_empty() {
        return Ok(Vec::new());
    }
    let n = a[0].len();
    let m = a.len() + b.len();
    let rows: Vec<Vec<Padic>> =
        (0..n).map(|i| a.iter().chain(&b).map(|c| c[i].clone()).collect()).collect();
    let ker = kernel(&rows, m, field)?;
    let vs: Vec<Vector> = ker
        .iter()
        .map(|x| {
            (0..n)
                .map(|i| {
                    a.iter().zip(x).fold(field.zero(), |acc, (c, k)| acc + &c[i] * k)
                })
                .collect()
        })
        .collect();
    basis(&vs, field)
}

pub fn contains(space: &[Vector], v: &Vector, field: Field) -> Result<bool, PadicError> {
    let d = dim(space, field)?;
    let mut all = space.to_vec();
    all.push(v.clone());
    Ok(dim(&all, field)? == d)
}

/// The first `k` columns of `m`.
pub fn leading_columns(m: &Mat, k: usize) -> Vec<Vector> {
    (0..k).map(|j| m.col(j)).collect()
}

/// A matrix whose first `dim W_i` columns span `W_i` for each space in the
/// increasing chain, completed by standard basis vectors.
pub fn adapted_basis(chain: &[Vec<Vector>], n: usize, field: Field) -> Result<Mat, PadicError> {
    let mut cols: Vec<Vector> = Vec::new();
    let unit = |i: usize| -> Vector { (0..n).map(|r| if r == i { field.one() } else { field.zero() }).collect() };
    let standard: Vec<Vector> = (0..n).map(unit).collect();
    for space in chain.iter().map(|s| s.as_slice()).chain(std::iter::once(standard.as_slice())) {
        for v in space {
            if cols.len() < n && !contains(&cols, v, field)? {
                cols.push(v.clone());
            }
        }
    }
    let mut m = Mat::zeros(field, n);
    for (j, c) in cols.iter().enumerate() {
        for (i, x) in c.iter().enumerate() {
            m.set(i, j, x.clone());
        }
    }
    Ok(m)
}
