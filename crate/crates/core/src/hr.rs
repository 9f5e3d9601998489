//! The group H_r of truncated substitutions x -> a_1 x + ... + a_r x^r.
//!
//! `hr_mul(b, a)` has l-th coordinate `sum_i a_i * sum_{k_1+..+k_i=l} b_{k_1}..b_{k_i}`,
//! which is the coefficient of x^l in `A(B(x))`.

use std::fmt;

use rand::Rng;
use thiserror::Error;

use crate::field::{Field, Gf};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HrError {
    #[error("an element of H_r needs at least one coordinate")]
    Empty,
    #[error("leading coordinate must be nonzero")]
    ZeroLeading,
    #[error("mismatched lengths: r = {left} and r = {right}")]
    Mismatch { left: usize, right: usize },
    #[error("coordinates lie in different fields")]
    MixedFields,
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct HrElement {
    coords: Vec<Gf>,
}

impl HrElement {
    pub fn new(coords: Vec<Gf>) -> Result<Self, HrError> {
        let first = coords.first().ok_or(HrError::Empty)?;
        if first.is_zero() {
            return Err(HrError::ZeroLeading);
        }
        if coords.iter().any(|c| c.field() != first.field()) {
            return Err(HrError::MixedFields);
        }
        Ok(HrElement { coords })
    }

    pub fn identity(field: Field, r: usize) -> Self {
        assert!(r > 0, "H_r needs r >= 1");
        let mut coords = vec![field.zero(); r];
        coords[0] = field.one();
        HrElement { coords }
    }

    /// The torus element (a, 0, ..., 0).
    pub fn torus(a: Gf, r: usize) -> Result<Self, HrError> {
        let mut coords = vec![a.field().zero(); r.max(1)];
        coords[0] = a;
        HrElement::new(coords)
    }

    pub fn random<R: Rng + ?Sized>(field: Field, r: usize, rng: &mut R) -> Self {
        let mut coords: Vec<Gf> = (0..r).map(|_| field.random(rng)).collect();
        coords[0] = field.random_nonzero(rng);
        HrElement { coords }
    }

    pub fn r(&self) -> usize {
        self.coords.len()
    }

    pub fn field(&self) -> Field {
        self.coords[0].field()
    }

    pub fn coords(&self) -> &[Gf] {
        &self.coords
    }

    pub fn leading(&self) -> Gf {
        self.coords[0]
    }

    pub fn is_identity(&self) -> bool {
        self.coords[0].is_one() && self.coords[1..].iter().all(|c| c.is_zero())
    }

    /// Membership in the unipotent normal subgroup L.
    pub fn in_unipotent(&self) -> bool {
        self.coords[0].is_one()
    }

    /// Membership in the torus K.
    pub fn in_torus(&self) -> bool {
        self.coords[1..].iter().all(|c| c.is_zero())
    }

    fn compatible(&self, other: &HrElement) -> Result<(), HrError> {
        if self.r() != other.r() {
            return Err(HrError::Mismatch { left: self.r(), right: other.r() });
        }
        if self.field() != other.field() {
            return Err(HrError::MixedFields);
        }
        Ok(())
    }
}

impl fmt::Debug for HrElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for HrElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// `sums[i][l]` = sum over compositions of l into i positive parts of the
/// products of the corresponding coordinates of `b`.
fn composition_sums(b: &[Gf]) -> Vec<Vec<Gf>> {
    let r = b.len();
    let zero = b[0].field().zero();
    let mut sums = vec![vec![zero; r + 1]; r + 1];
    sums[0][0] = b[0].field().one();
    for i in 1..=r {
        for l in i..=r {
            // split off the last part k
            let mut acc = zero;
            for k in 1..=l - (i - 1) {
                acc += sums[i - 1][l - k] * b[k - 1];
            }
            sums[i][l] = acc;
        }
    }
    sums
}

pub fn hr_mul(b: &HrElement, a: &HrElement) -> Result<HrElement, HrError> {
    b.compatible(a)?;
    let r = a.r();
    let sums = composition_sums(&b.coords);
    let coords = (1..=r)
        .map(|l| (1..=l).fold(a.field().zero(), |acc, i| acc + a.coords[i - 1] * sums[i][l]))
        .collect();
    Ok(HrElement { coords })
}

/// The two-sided inverse, solved coordinate by coordinate.
pub fn hr_inverse(a: &HrElement) -> HrElement {
    let r = a.r();
    let field = a.field();
    let sums = composition_sums(&a.coords);
    let mut inv = vec![field.zero(); r];
    for l in 1..=r {
        // (a * inv)_l = sum_i inv_i sums[i][l]; the i = l term is inv_l a_1^l.
        let target = if l == 1 { field.one() } else { field.zero() };
        let rest = (1..l).fold(field.zero(), |acc, i| acc + inv[i - 1] * sums[i][l]);
        inv[l - 1] = (target - rest) / sums[l][l];
    }
    HrElement { coords: inv }
}

/// Splits `a` as `hr_mul(l, k)` with `l` in L and `k` in K.
pub fn hr_decompose(a: &HrElement) -> (HrElement, HrElement) {
    let lead = a.leading();
    let inv = lead.inverse().expect("leading coordinate is nonzero");
    let l = HrElement { coords: a.coords.iter().map(|&c| c * inv).collect() };
    let k = HrElement::torus(lead, a.r()).expect("leading coordinate is nonzero");
    (l, k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn el(f: Field, v: &[u64]) -> HrElement {
        HrElement::new(v.iter().map(|&x| f.element(x).unwrap()).collect()).unwrap()
    }

    /// Oracle: A(B(x)) mod x^{r+1} by Horner's rule on coefficient vectors.
    fn substitute(b: &HrElement, a: &HrElement) -> Vec<Gf> {
        let r = a.r();
        let f = a.field();
        let mulx = |p: &[Gf], q: &[Gf]| -> Vec<Gf> {
            let mut out = vec![f.zero(); r + 1];
            for (i, x) in p.iter().enumerate() {
                for (j, y) in q.iter().enumerate() {
                    if i + j <= r {
                        out[i + j] += *x * *y;
                    }
                }
            }
            out
        };
        let mut bpoly = vec![f.zero(); r + 1];
        bpoly[1..].copy_from_slice(b.coords());
        let mut acc = vec![f.zero(); r + 1];
        for &c in a.coords().iter().rev() {
            acc[0] += c;
            acc = mulx(&acc, &bpoly);
        }
        acc[1..].to_vec()
    }

    #[test]
    fn small_products() {
        let f = Field::GF2;
        let x = el(f, &[1, 1]);
        assert!(hr_mul(&x, &x).unwrap().is_identity());
        let id = HrElement::identity(f, 2);
        assert_eq!(hr_mul(&id, &x).unwrap(), x);
        assert_eq!(hr_mul(&x, &id).unwrap(), x);
    }

    #[test]
    fn third_coordinate() {
        let f = Field::GF4;
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let a = HrElement::random(f, 3, &mut rng);
            let b = HrElement::random(f, 3, &mut rng);
            let (a1, a2, a3) = (a.coords[0], a.coords[1], a.coords[2]);
            let (b1, b2, b3) = (b.coords[0], b.coords[1], b.coords[2]);
            // the cross term b1 b2 + b2 b1 vanishes in characteristic 2
            let expect = a1 * b3 + a2 * (b1 * b2 + b2 * b1) + a3 * b1 * b1 * b1;
            assert_eq!(hr_mul(&b, &a).unwrap().coords[2], expect);
        }
    }

    #[test]
    fn agrees_with_substitution() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for f in [Field::GF2, Field::GF4, Field::new(3).unwrap()] {
            for r in [1, 2, 3, 5, 7] {
                for _ in 0..40 {
                    let a = HrElement::random(f, r, &mut rng);
                    let b = HrElement::random(f, r, &mut rng);
                    assert_eq!(hr_mul(&b, &a).unwrap().coords, substitute(&b, &a));
                }
            }
        }
    }

    #[test]
    fn inverse_and_decomposition() {
        let f = Field::GF4;
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let a = HrElement::random(f, 4, &mut rng);
            let inv = hr_inverse(&a);
            assert!(hr_mul(&a, &inv).unwrap().is_identity());
            assert!(hr_mul(&inv, &a).unwrap().is_identity());
            let (l, k) = hr_decompose(&a);
            assert!(l.in_unipotent() && k.in_torus());
            assert_eq!(hr_mul(&l, &k).unwrap(), a);
        }
        let t = HrElement::torus(f.element(2).unwrap(), 3).unwrap();
        assert_eq!(hr_inverse(&t), HrElement::torus(f.element(2).unwrap().inverse().unwrap(), 3).unwrap());
        let id = HrElement::identity(f, 3);
        assert_eq!(hr_decompose(&id), (id.clone(), id.clone()));
    }

    #[test]
    fn rejects_bad_input() {
        let f = Field::GF2;
        assert_eq!(HrElement::new(vec![]), Err(HrError::Empty));
        assert_eq!(HrElement::new(vec![f.zero(), f.one()]), Err(HrError::ZeroLeading));
        let a = HrElement::identity(f, 2);
        let b = HrElement::identity(f, 3);
        assert_eq!(hr_mul(&a, &b), Err(HrError::Mismatch { left: 2, right: 3 }));
    }
}
