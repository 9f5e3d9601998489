//! Arrow-degree gradings: the homogeneity lattice, its quotient by
//! coboundaries, positivity, rescaling and graded Morita shifts.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graded::{DegreeAssignment, DegreeError};
use crate::lattice::{self, LatticeError, Matrix, Smith};
use crate::quiver::Quiver;
use crate::rewrite::{AlgebraPresentation, RewriteError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GradingError {
    #[error("rescaling factor must be nonzero")]
    ZeroRescale,
    #[error("criterion inapplicable: quiver has parallel arrows and is not a catalog block")]
    Inapplicable,
    #[error("offset vector has {got} entries, quiver has {expected} vertices")]
    OffsetLength { expected: usize, got: usize },
    #[error("cocharacter has {got} coordinates, lattice quotient has free rank {expected}")]
    CocharacterLength { expected: usize, got: usize },
    #[error("degree assignment is not homogeneous")]
    NotHomogeneous,
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Degree(#[from] DegreeError),
    #[error(transparent)]
    Rewrite(#[from] RewriteError),
}

/// One row per pair (leading word, other word) of each completed rule:
/// `deg(lead) - deg(other) = 0`. Zero rows and duplicates are dropped.
pub fn homogeneity_system(pres: &AlgebraPresentation) -> Matrix {
    let n = pres.quiver().arrow_count();
    let mut rows = BTreeSet::new();
    for rule in pres.rules() {
        for (p, _) in rule.tail.terms() {
            let mut row = vec![0i64; n];
            for a in rule.lead.arrows() {
                row[a.0] += 1;
            }
            for a in p.arrows() {
                row[a.0] -= 1;
            }
            if row.iter().any(|&x| x != 0) {
                rows.insert(row);
            }
        }
    }
    rows.into_iter().collect()
}

pub fn is_homogeneous(pres: &AlgebraPresentation, deg: &DegreeAssignment) -> bool {
    pres.check_homogeneous(deg).is_ok()
}

/// Coboundary generators: for each vertex `v`, `a -> [src a = v] - [tgt a = v]`.
pub fn coboundaries(quiver: &Quiver) -> Matrix {
    quiver
        .vertex_ids()
        .map(|v| {
            quiver
                .arrows()
                .iter()
                .map(|a| i64::from(a.source == v) - i64::from(a.target == v))
                .collect()
        })
        .collect()
}

/// Class of a grading in `H/B`: free coordinates and torsion residues.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GradingClass {
    pub free: Vec<i64>,
    /// `(residue, modulus)` pairs, residues in `[0, modulus)`.
    pub torsion: Vec<(i64, i64)>,
}

/// The lattice `H` of homogeneous arrow gradings and its sublattice `B` of
/// coboundaries, with a Smith-adapted basis of `H` so that classes in `H/B`
/// are read off coordinatewise.
#[derive(Clone, Debug)]
pub struct GradingLattice {
    arrows: usize,
    system: Matrix,
    h_basis: Matrix,
    b_basis: Matrix,
    smith: Smith,
}

impl GradingLattice {
    pub fn new(pres: &AlgebraPresentation) -> Result<Self, GradingError> {
        let arrows = pres.quiver().arrow_count();
        let system = homogeneity_system(pres);
        let h_basis = lattice::integer_kernel(&system, arrows)?;
        let b_basis = lattice::hermite_basis(&coboundaries(pres.quiver()), arrows)?;
        let b_in_h: Matrix =
            b_basis.iter().map(|b| lattice::coordinates(&h_basis, b)).collect::<Result<_, _>>()?;
        let smith = lattice::smith(&b_in_h, h_basis.len())?;
        Ok(GradingLattice { arrows, system, h_basis, b_basis, smith })
    }

    pub fn system(&self) -> &Matrix {
        &self.system
    }

    /// Hermite basis of `H`.
    pub fn h_basis(&self) -> &Matrix {
        &self.h_basis
    }

    pub fn b_basis(&self) -> &Matrix {
        &self.b_basis
    }

    pub fn h_rank(&self) -> usize {
        self.h_basis.len()
    }

    /// Free rank of `H/B`.
    pub fn rank(&self) -> usize {
        self.h_basis.len() - self.smith.rank()
    }

    /// Nontrivial invariant factors of `H/B`.
    pub fn torsion(&self) -> Vec<i64> {
        self.smith.diagonal.iter().copied().filter(|&d| d > 1).collect()
    }

    pub fn contains(&self, deg: &DegreeAssignment) -> bool {
        deg.len() == self.arrows && lattice::coordinates(&self.h_basis, deg.as_slice()).is_ok()
    }

    pub fn in_coboundaries(&self, deg: &DegreeAssignment) -> bool {
        deg.len() == self.arrows
            && (self.b_basis.is_empty() && deg.is_zero() || lattice::coordinates(&self.b_basis, deg.as_slice()).is_ok())
    }

    /// Coordinates of `deg` in the Smith-adapted basis of `H`.
    fn adapted(&self, deg: &DegreeAssignment) -> Result<Vec<i64>, GradingError> {
        let y = lattice::coordinates(&self.h_basis, deg.as_slice()).map_err(|_| GradingError::NotHomogeneous)?;
        Ok(lattice::vec_mat(&y, &self.smith.v, self.h_basis.len())?)
    }

    pub fn classify(&self, deg: &DegreeAssignment) -> Result<GradingClass, GradingError> {
        if deg.len() != self.arrows {
            return Err(DegreeError::WrongLength { expected: self.arrows, got: deg.len() }.into());
        }
        let z = self.adapted(deg)?;
        let r = self.smith.rank();
        let torsion = self.smith.diagonal[..r]
            .iter()
            .zip(&z)
            .filter(|(d, _)| **d > 1)
            .map(|(d, x)| (x.rem_euclid(*d), *d))
            .collect();
        Ok(GradingClass { free: z[r..].to_vec(), torsion })
    }

    /// A representative grading of the class with free coordinates `chi`
    /// and zero torsion.
    pub fn cocharacter_to_grading(&self, chi: &[i64]) -> Result<DegreeAssignment, GradingError> {
        if chi.len() != self.rank() {
            return Err(GradingError::CocharacterLength { expected: self.rank(), got: chi.len() });
        }
        let k = self.h_basis.len();
        let mut z = vec![0i64; k - chi.len()];
        z.extend_from_slice(chi);
        let y = lattice::vec_mat(&z, &self.smith.v_inv, k)?;
        let x = if k == 0 { vec![0; self.arrows] } else { lattice::vec_mat(&y, &self.h_basis, self.arrows)? };
        Ok(DegreeAssignment::new(x))
    }

    /// Primitive generators of the extreme rays of `{x in H : x >= 0}`, sorted.
    pub fn nonnegative_rays(&self) -> Result<Vec<Vec<i64>>, GradingError> {
        let h = self.h_basis.len();
        let mut rays = BTreeSet::new();
        let mut consider = |w: &[i64]| -> Result<(), GradingError> {
            let x = lattice::vec_mat(w, &self.h_basis, self.arrows)?;
            for s in [1i64, -1] {
                let sx: Vec<i64> = x.iter().map(|v| v * s).collect();
                if sx.iter().all(|&v| v >= 0) && sx.iter().any(|&v| v > 0) {
                    let g = sx.iter().fold(0i64, |g, &v| gcd(g, v));
                    rays.insert(sx.iter().map(|v| v / g).collect::<Vec<_>>());
                }
            }
            Ok(())
        };
        match h {
            0 => {}
            1 => consider(&[1])?,
            _ => {
                // A ray is cut out by h-1 independent tight constraints x_j = 0.
                let cols: Vec<Vec<i64>> = (0..self.arrows).map(|j| self.h_basis.iter().map(|r| r[j]).collect()).collect();
                for subset in combinations(self.arrows, h - 1) {
                    let rows: Matrix = subset.iter().map(|&j| cols[j].clone()).collect();
                    let ker = lattice::integer_kernel(&rows, h)?;
                    if ker.len() == 1 {
                        consider(&ker[0])?;
                    }
                }
            }
        }
        Ok(rays.into_iter().collect())
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

pub fn grading_lattice(pres: &AlgebraPresentation) -> Result<GradingLattice, GradingError> {
    GradingLattice::new(pres)
}

/// A nonzero homogeneous grading with all arrow degrees `>= 0`, if one
/// exists: the primitive sum of all extreme rays of the nonnegative cone.
///
/// The cone is enumerated exactly, so infeasibility is a proof rather than
/// the outcome of a bounded search.
pub fn positive_grading_exists(pres: &AlgebraPresentation) -> Result<Option<DegreeAssignment>, GradingError> {
    if pres.quiver().has_parallel_arrows() && pres.origin().is_none() {
        return Err(GradingError::Inapplicable);
    }
    let lat = GradingLattice::new(pres)?;
    let rays = lat.nonnegative_rays()?;
    if rays.is_empty() {
        return Ok(None);
    }
    let mut sum = vec![0i64; lat.arrows];
    for r in &rays {
        for (s, x) in sum.iter_mut().zip(r) {
            *s += x;
        }
    }
    let g = sum.iter().fold(0, |g, &v| gcd(g, v));
    Ok(Some(DegreeAssignment::new(sum.into_iter().map(|v| v / g).collect())))
}

/// Arrows that vanish in every nonnegative homogeneous grading.
pub fn forced_zero_arrows(pres: &AlgebraPresentation) -> Result<Vec<usize>, GradingError> {
    let lat = GradingLattice::new(pres)?;
    let rays = lat.nonnegative_rays()?;
    Ok((0..lat.arrows).filter(|&j| rays.iter().all(|r| r[j] == 0)).collect())
}

pub fn rescale(deg: &DegreeAssignment, k: i64) -> Result<DegreeAssignment, GradingError> {
    if k == 0 {
        return Err(GradingError::ZeroRescale);
    }
    Ok(DegreeAssignment::new(deg.as_slice().iter().map(|d| d * k).collect()))
}

/// Degrees of the graded quiver of `End(⊕ P_v<n_v>)^op`: an arrow `i -> j`
/// becomes `deg + n_i - n_j`.
pub fn morita_shift(quiver: &Quiver, deg: &DegreeAssignment, offsets: &[i64]) -> Result<DegreeAssignment, GradingError> {
    deg.check_len(quiver)?;
    if offsets.len() != quiver.vertex_count() {
        return Err(GradingError::OffsetLength { expected: quiver.vertex_count(), got: offsets.len() });
    }
    Ok(DegreeAssignment::new(
        quiver
            .arrows()
            .iter()
            .zip(deg.as_slice())
            .map(|(a, d)| d + offsets[a.source.0] - offsets[a.target.0])
            .collect(),
    ))
}
