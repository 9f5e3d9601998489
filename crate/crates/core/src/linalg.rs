//! Dense exact linear algebra over GF(2^m).

use crate::field::{Field, Gf};

/// Row-reduced basis of a subspace of `Field^dim`, kept in reduced echelon
/// form so membership and insertion are cheap.
#[derive(Clone, Debug)]
pub struct Subspace {
    field: Field,
    dim: usize,
    rows: Vec<Vec<Gf>>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn new(field: Field, dim: usize) -> Self {
        Subspace { field, dim, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn basis(&self) -> &[Vec<Gf>] {
        &self.rows
    }

    /// Reduces `v` against the current basis.
    pub fn reduce(&self, v: &mut [Gf]) {
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            let c = v[p];
            if !c.is_zero() {
                for (x, y) in v.iter_mut().zip(row) {
                    *x -= c * *y;
                }
            }
        }
    }

    pub fn contains(&self, v: &[Gf]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        w.iter().all(|x| x.is_zero())
    }

    /// Adds `v`; returns true if the rank grew.
    pub fn insert(&mut self, v: &[Gf]) -> bool {
        assert_eq!(v.len(), self.dim);
        let mut w = v.to_vec();
        self.reduce(&mut w);
        let Some(p) = w.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = w[p].inverse().unwrap();
        for x in w.iter_mut() {
            *x *= inv;
        }
        for row in self.rows.iter_mut() {
            let c = row[p];
            if !c.is_zero() {
                for (x, y) in row.iter_mut().zip(&w) {
                    *x -= c * *y;
                }
            }
        }
        let pos = self.pivots.partition_point(|&q| q < p);
        self.rows.insert(pos, w);
        self.pivots.insert(pos, p);
        true
    }

    pub fn field(&self) -> Field {
        self.field
    }
}

/// Rank of the matrix whose rows are `rows`.
pub fn rank(field: Field, dim: usize, rows: &[Vec<Gf>]) -> usize {
    let mut s = Subspace::new(field, dim);
    for r in rows {
        s.insert(r);
    }
    s.rank()
}

/// Basis of `{x : sum_j x_j * columns[j] = 0}`, with `columns[j]` the j-th
/// column of a matrix with `rows` rows.
pub fn kernel(field: Field, rows: usize, columns: &[Vec<Gf>]) -> Vec<Vec<Gf>> {
    let n = columns.len();
    // Gaussian elimination on the transpose-free augmented form [col | e_j].
    let mut mat: Vec<Vec<Gf>> = (0..rows).map(|i| columns.iter().map(|c| c[i]).collect()).collect();
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(p) = (r..rows).find(|&i| !mat[i][c].is_zero()) else {
            continue;
        };
        mat.swap(r, p);
        let inv = mat[r][c].inverse().unwrap();
        for x in mat[r].iter_mut() {
            *x *= inv;
        }
        for i in 0..rows {
            if i != r && !mat[i][c].is_zero() {
                let f = mat[i][c];
                let row_r = mat[r].clone();
                for (x, y) in mat[i].iter_mut().zip(&row_r) {
                    *x -= f * *y;
                }
            }
        }
        pivot_cols.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    let free: Vec<usize> = (0..n).filter(|c| !pivot_cols.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![field.zero(); n];
            v[fc] = field.one();
            for (i, &pc) in pivot_cols.iter().enumerate() {
                v[pc] = -mat[i][fc];
            }
            v
        })
        .collect()
}

/// Solves `sum_j x_j * columns[j] = target` if possible.
pub fn solve(field: Field, rows: usize, columns: &[Vec<Gf>], target: &[Gf]) -> Option<Vec<Gf>> {
    let mut cols = columns.to_vec();
    cols.push(target.to_vec());
    let ker = kernel(field, rows, &cols);
    let last = columns.len();
    let v = ker.into_iter().find(|v| !v[last].is_zero())?;
    let s = -(v[last].inverse().unwrap());
    Some(v[..last].iter().map(|x| *x * s).collect())
}
