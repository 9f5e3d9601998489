//! Integer lattices: kernels, Hermite and Smith normal forms.
//!
//! All arithmetic is checked; the matrices arising from quiver gradings are
//! tiny, so overflow signals a bug rather than a limitation.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("integer overflow in lattice computation")]
    Overflow,
    #[error("vector is not in the lattice")]
    NotInLattice,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
}

pub type Matrix = Vec<Vec<i64>>;

fn mul_add(a: i64, b: i64, c: i64) -> Result<i64, LatticeError> {
    a.checked_mul(b).and_then(|x| x.checked_add(c)).ok_or(LatticeError::Overflow)
}

/// `row_i -= q * row_j`.
fn row_sub(m: &mut [Vec<i64>], i: usize, j: usize, q: i64) -> Result<(), LatticeError> {
    if q == 0 {
        return Ok(());
    }
    let src = m[j].clone();
    for (x, y) in m[i].iter_mut().zip(&src) {
        *x = mul_add(-q, *y, *x)?;
    }
    Ok(())
}

fn negate_row(m: &mut [Vec<i64>], i: usize) -> Result<(), LatticeError> {
    for x in m[i].iter_mut() {
        *x = x.checked_neg().ok_or(LatticeError::Overflow)?;
    }
    Ok(())
}

pub fn identity(n: usize) -> Matrix {
    (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect()
}

pub fn transpose(m: &[Vec<i64>], cols: usize) -> Matrix {
    (0..cols).map(|j| m.iter().map(|r| r[j]).collect()).collect()
}

pub fn mat_mul(a: &[Vec<i64>], b: &[Vec<i64>], cols: usize) -> Result<Matrix, LatticeError> {
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| row.iter().zip(b).try_fold(0i64, |acc, (x, brow)| mul_add(*x, brow[j], acc)))
                .collect()
        })
        .collect()
}

pub fn vec_mat(v: &[i64], m: &[Vec<i64>], cols: usize) -> Result<Vec<i64>, LatticeError> {
    Ok(mat_mul(&[v.to_vec()], m, cols)?.remove(0))
}

/// Row-style Hermite normal form with transform: returns `(h, t)` with
/// `t * a = h`, `t` unimodular, `h` in echelon form with positive pivots and
/// entries above each pivot reduced into `[0, pivot)`. Zero rows come last.
pub fn hermite_with_transform(a: &[Vec<i64>], cols: usize) -> Result<(Matrix, Matrix), LatticeError> {
    let rows = a.len();
    let mut h: Matrix = a.to_vec();
    let mut t = identity(rows);
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        // Euclid down the column until a single nonzero entry remains at row r.
        loop {
            let nz: Vec<usize> = (r..rows).filter(|&i| h[i][c] != 0).collect();
            let Some(&p) = nz.iter().min_by_key(|&&i| h[i][c].unsigned_abs()) else { break };
            h.swap(r, p);
            t.swap(r, p);
            if nz.len() == 1 {
                break;
            }
            for i in r + 1..rows {
                let q = h[i][c].div_euclid(h[r][c]);
                row_sub(&mut h, i, r, q)?;
                row_sub(&mut t, i, r, q)?;
            }
        }
        if h[r][c] == 0 {
            continue;
        }
        if h[r][c] < 0 {
            negate_row(&mut h, r)?;
            negate_row(&mut t, r)?;
        }
        for i in 0..r {
            let q = h[i][c].div_euclid(h[r][c]);
            row_sub(&mut h, i, r, q)?;
            row_sub(&mut t, i, r, q)?;
        }
        r += 1;
    }
    Ok((h, t))
}

/// The nonzero rows of the Hermite normal form: a canonical basis of the
/// row lattice.
pub fn hermite_basis(a: &[Vec<i64>], cols: usize) -> Result<Matrix, LatticeError> {
    let (h, _) = hermite_with_transform(a, cols)?;
    Ok(h.into_iter().filter(|r| r.iter().any(|&x| x != 0)).collect())
}

/// A basis (in Hermite form) of `{x in Z^n : m x = 0}`.
pub fn integer_kernel(m: &[Vec<i64>], n: usize) -> Result<Matrix, LatticeError> {
    if m.is_empty() {
        return Ok(identity(n));
    }
    let mt = transpose(m, n);
    let (h, t) = hermite_with_transform(&mt, m.len())?;
    let kernel: Matrix =
        h.iter().zip(t).filter(|(row, _)| row.iter().all(|&x| x == 0)).map(|(_, trow)| trow).collect();
    hermite_basis(&kernel, n)
}

/// Pivot columns of an echelon basis.
pub fn pivots(basis: &[Vec<i64>]) -> Vec<usize> {
    basis.iter().map(|r| r.iter().position(|&x| x != 0).expect("basis rows are nonzero")).collect()
}

/// Coordinates of `v` in an echelon basis, if `v` lies in its lattice.
pub fn coordinates(basis: &[Vec<i64>], v: &[i64]) -> Result<Vec<i64>, LatticeError> {
    let mut w = v.to_vec();
    let mut out = Vec::with_capacity(basis.len());
    for (row, p) in basis.iter().zip(pivots(basis)) {
        if w[p] % row[p] != 0 {
            return Err(LatticeError::NotInLattice);
        }
        let q = w[p] / row[p];
        for (x, y) in w.iter_mut().zip(row) {
            *x = mul_add(-q, *y, *x)?;
        }
        out.push(q);
    }
    if w.iter().any(|&x| x != 0) {
        return Err(LatticeError::NotInLattice);
    }
    Ok(out)
}

/// `u * a * v = diag(d)` with `u`, `v` unimodular; `v_inv` is `v^{-1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Smith {
    pub diagonal: Vec<i64>,
    pub u: Matrix,
    pub v: Matrix,
    pub v_inv: Matrix,
}

impl Smith {
    pub fn rank(&self) -> usize {
        self.diagonal.iter().filter(|&&d| d != 0).count()
    }
}

pub fn smith(a: &[Vec<i64>], cols: usize) -> Result<Smith, LatticeError> {
    let rows = a.len();
    let mut m: Matrix = a.to_vec();
    let mut u = identity(rows);
    let mut v = identity(cols);
    let mut v_inv = identity(cols);
    // Column operation `col_i -= q * col_j` on m and v, inverse on v_inv.
    let col_sub = |m: &mut Matrix, v: &mut Matrix, v_inv: &mut Matrix, i: usize, j: usize, q: i64| -> Result<(), LatticeError> {
        if q == 0 {
            return Ok(());
        }
        for row in m.iter_mut().chain(v.iter_mut()) {
            row[i] = mul_add(-q, row[j], row[i])?;
        }
        row_sub(v_inv, j, i, -q)
    };
    let col_swap = |m: &mut Matrix, v: &mut Matrix, v_inv: &mut Matrix, i: usize, j: usize| {
        for row in m.iter_mut().chain(v.iter_mut()) {
            row.swap(i, j);
        }
        v_inv.swap(i, j);
    };
    let mut diagonal = Vec::new();
    for k in 0..rows.min(cols) {
        loop {
            let best = (k..rows)
                .flat_map(|i| (k..cols).map(move |j| (i, j)))
                .filter(|&(i, j)| m[i][j] != 0)
                .min_by_key(|&(i, j)| m[i][j].unsigned_abs());
            let Some((pi, pj)) = best else { break };
            m.swap(k, pi);
            u.swap(k, pi);
            col_swap(&mut m, &mut v, &mut v_inv, k, pj);
            let mut clean = true;
            for i in k + 1..rows {
                let q = m[i][k].div_euclid(m[k][k]);
                row_sub(&mut m, i, k, q)?;
                row_sub(&mut u, i, k, q)?;
                clean &= m[i][k] == 0;
            }
            for j in k + 1..cols {
                let q = m[k][j].div_euclid(m[k][k]);
                col_sub(&mut m, &mut v, &mut v_inv, j, k, q)?;
                clean &= m[k][j] == 0;
            }
            if !clean {
                continue;
            }
            // Enforce divisibility of the remaining block by the pivot.
            let bad = (k + 1..rows).find(|&i| (k + 1..cols).any(|j| m[i][j] % m[k][k] != 0));
            match bad {
                Some(i) => {
                    row_sub(&mut m, k, i, -1)?;
                    row_sub(&mut u, k, i, -1)?;
                }
                None => break,
            }
        }
        if m[k][k] < 0 {
            negate_row(&mut m, k)?;
            negate_row(&mut u, k)?;
        }
        diagonal.push(m[k][k]);
    }
    Ok(Smith { diagonal, u, v, v_inv })
}
