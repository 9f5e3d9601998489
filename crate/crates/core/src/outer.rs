//! Algebra endomorphisms given by generator images, inner automorphisms,
//! and normalized coordinates on the outer automorphism groups of the
//! C, D(2B) and D(1C) families.
//!
//! Conventions: `compose(phi, psi)` applies `psi` first, `inner(u)` sends
//! `x` to `u x u^{-1}`, and `outer_mul(t1, t2)` is the class of
//! `lift(t1) o lift(t2)`.

use std::fmt;

use rand::Rng;
use thiserror::Error;

use crate::catalog::{known_profile, BlockId, Family};
use crate::field::{Field, Gf};
use crate::graded::DegreeAssignment;
use crate::grading::{GradingError, GradingLattice};
use crate::hr::{hr_mul, HrElement, HrError};
use crate::linalg;
use crate::quiver::{AlgebraElement, Path, QuiverError};
use crate::rewrite::AlgebraPresentation;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OuterError {
    #[error("endomorphism does not fix vertex {0}")]
    NotVertexFixing(String),
    #[error("not an automorphism: {0}")]
    NotAutomorphism(String),
    #[error("image of {0} is outside the expected normal form")]
    UnexpectedImage(String),
    #[error("element is not invertible")]
    NonInvertible,
    #[error("outer coordinates are not implemented for {0}")]
    Unsupported(String),
    #[error("presentation has no catalog origin")]
    NoOrigin,
    #[error("tuples belong to different groups")]
    FamilyMismatch,
    #[error("image count mismatch: expected {expected}, got {got}")]
    ImageCount { expected: usize, got: usize },
    #[error("relation check failed: {0}")]
    Relation(String),
    #[error("cocharacter has {got} exponents, torus rank is {expected}")]
    CocharacterLength { expected: usize, got: usize },
    #[error("quotient has torsion; classes are not cocharacters")]
    Torsion,
    #[error(transparent)]
    Hr(#[from] HrError),
    #[error(transparent)]
    Quiver(#[from] QuiverError),
    #[error(transparent)]
    Grading(#[from] GradingError),
}

/// Images of the vertex idempotents and arrows, in normal form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Endomorphism {
    pub vertices: Vec<AlgebraElement>,
    pub arrows: Vec<AlgebraElement>,
}

impl Endomorphism {
    pub fn identity(pres: &AlgebraPresentation) -> Self {
        let q = pres.quiver();
        Endomorphism {
            vertices: q.vertex_ids().map(|v| pres.vertex(v)).collect(),
            arrows: q.arrow_ids().map(|a| pres.arrow(a)).collect(),
        }
    }

    /// Fixes the vertices and sends each arrow to the given image.
    pub fn vertex_fixing(pres: &AlgebraPresentation, arrows: Vec<AlgebraElement>) -> Result<Self, OuterError> {
        let expected = pres.quiver().arrow_count();
        if arrows.len() != expected {
            return Err(OuterError::ImageCount { expected, got: arrows.len() });
        }
        let arrows = arrows.iter().map(|x| pres.normal_form(x)).collect();
        Ok(Endomorphism { arrows, ..Endomorphism::identity(pres) })
    }

    /// Like [`Endomorphism::vertex_fixing`] with images looked up by arrow name;
    /// unnamed arrows are fixed.
    pub fn from_named(pres: &AlgebraPresentation, images: &[(&str, AlgebraElement)]) -> Result<Self, OuterError> {
        let mut phi = Endomorphism::identity(pres);
        for (name, x) in images {
            let a = pres.quiver().arrow_id(name)?;
            phi.arrows[a.0] = pres.normal_form(x);
        }
        Ok(phi)
    }

    pub fn apply_path(&self, pres: &AlgebraPresentation, p: &Path) -> AlgebraElement {
        if p.is_empty() {
            return self.vertices[p.source().0].clone();
        }
        let mut acc = self.arrows[p.arrows()[0].0].clone();
        for a in &p.arrows()[1..] {
            acc = pres.mul(&acc, &self.arrows[a.0]);
        }
        acc
    }

    pub fn apply(&self, pres: &AlgebraPresentation, x: &AlgebraElement) -> AlgebraElement {
        let mut out = AlgebraElement::zero();
        for (p, c) in x.terms() {
            out.add_scaled(&self.apply_path(pres, p), *c);
        }
        pres.normal_form(&out)
    }

    pub fn fixes_vertices(&self, pres: &AlgebraPresentation) -> bool {
        pres.quiver().vertex_ids().all(|v| self.vertices[v.0] == pres.vertex(v))
    }
}

/// `phi o psi`.
pub fn compose(pres: &AlgebraPresentation, phi: &Endomorphism, psi: &Endomorphism) -> Endomorphism {
    Endomorphism {
        vertices: psi.vertices.iter().map(|x| phi.apply(pres, x)).collect(),
        arrows: psi.arrows.iter().map(|x| phi.apply(pres, x)).collect(),
    }
}

/// Checks that `phi` is a well-defined bijective algebra map, with a reason
/// on failure.
pub fn verify_automorphism(pres: &AlgebraPresentation, phi: &Endomorphism) -> Result<(), OuterError> {
    let q = pres.quiver();
    if phi.vertices.len() != q.vertex_count() || phi.arrows.len() != q.arrow_count() {
        return Err(OuterError::ImageCount {
            expected: q.vertex_count() + q.arrow_count(),
            got: phi.vertices.len() + phi.arrows.len(),
        });
    }
    // orthogonal idempotents summing to one
    let mut sum = AlgebraElement::zero();
    for (i, x) in phi.vertices.iter().enumerate() {
        for (j, y) in phi.vertices.iter().enumerate() {
            let prod = pres.mul(x, y);
            let want = if i == j { x.clone() } else { AlgebraElement::zero() };
            if prod != want {
                return Err(OuterError::NotAutomorphism(format!(
                    "vertex images {} and {} are not orthogonal idempotents",
                    q.vertex_name(crate::quiver::VertexId(i)),
                    q.vertex_name(crate::quiver::VertexId(j))
                )));
            }
        }
        sum.add_assign(x);
    }
    if pres.normal_form(&sum) != pres.one() {
        return Err(OuterError::NotAutomorphism("vertex images do not sum to one".into()));
    }
    for a in q.arrow_ids() {
        let arrow = q.arrow(a);
        let x = &phi.arrows[a.0];
        let framed = pres.mul_all(&[&phi.vertices[arrow.source.0], x, &phi.vertices[arrow.target.0]]);
        if &framed != x {
            return Err(OuterError::NotAutomorphism(format!("image of {} has the wrong endpoints", arrow.name)));
        }
    }
    for rel in pres.relations() {
        if !phi.apply(pres, &rel.difference()).is_zero() {
            return Err(OuterError::NotAutomorphism(format!("relation {} is not preserved", rel.format(q))));
        }
    }
    let columns: Vec<Vec<Gf>> =
        pres.basis().iter().map(|p| pres.coordinates(&phi.apply_path(pres, p))).collect();
    if linalg::rank(pres.field(), pres.dimension(), &columns) != pres.dimension() {
        return Err(OuterError::NotAutomorphism("map is not bijective".into()));
    }
    Ok(())
}

pub fn check_automorphism(pres: &AlgebraPresentation, phi: &Endomorphism) -> bool {
    verify_automorphism(pres, phi).is_ok()
}

/// The two-sided inverse of `u`, if it exists.
pub fn unit_inverse(pres: &AlgebraPresentation, u: &AlgebraElement) -> Result<AlgebraElement, OuterError> {
    let u = pres.normal_form(u);
    let columns: Vec<Vec<Gf>> = pres
        .basis()
        .iter()
        .map(|p| pres.coordinates(&pres.mul(&u, &AlgebraElement::from_path(p.clone(), pres.field().one()))))
        .collect();
    let target = pres.coordinates(&pres.one());
    let y = linalg::solve(pres.field(), pres.dimension(), &columns, &target).ok_or(OuterError::NonInvertible)?;
    let inv = pres.from_coordinates(&y);
    if pres.mul(&inv, &u) != pres.one() {
        return Err(OuterError::NonInvertible);
    }
    Ok(inv)
}

/// Conjugation `x -> u x u^{-1}`.
pub fn inner(pres: &AlgebraPresentation, u: &AlgebraElement) -> Result<Endomorphism, OuterError> {
    let inv = unit_inverse(pres, u)?;
    let conj = |x: &AlgebraElement| pres.mul_all(&[u, x, &inv]);
    let id = Endomorphism::identity(pres);
    Ok(Endomorphism { vertices: id.vertices.iter().map(conj).collect(), arrows: id.arrows.iter().map(conj).collect() })
}

/// A random unit commuting with every vertex idempotent: nonzero scalars on
/// the vertices plus random loops in the radical.
pub fn random_vertex_unit<R: Rng + ?Sized>(pres: &AlgebraPresentation, rng: &mut R) -> AlgebraElement {
    let field = pres.field();
    let mut u = AlgebraElement::zero();
    for p in pres.basis() {
        if p.source() != p.target() {
            continue;
        }
        let c = if p.is_empty() { field.random_nonzero(rng) } else { field.random(rng) };
        u.add_term(p.clone(), c);
    }
    u
}

/// Normalized coordinates of a class in the outer automorphism group.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum OuterTuple {
    /// `(alpha_1, alpha_2, alpha_3)` and `gamma`; `alpha_4` is determined.
    C { alpha: [Gf; 3], gamma: HrElement },
    D2B0 { a2: Gf, a3: Gf, v: Gf, d: HrElement },
    D2B1 { a2: Gf, a3: Gf, d: HrElement },
    /// Action on `rad/rad^2`: `alpha -> e0 * alpha, beta -> e1 * beta`, or
    /// with `swap`, `alpha -> e0 * beta, beta -> e1 * alpha`.
    D1C { swap: bool, entries: [Gf; 2] },
}

impl fmt::Debug for OuterTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for OuterTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OuterTuple::C { alpha, gamma } => write!(f, "C(alpha = ({}, {}, {}), gamma = {gamma})", alpha[0], alpha[1], alpha[2]),
            OuterTuple::D2B0 { a2, a3, v, d } => write!(f, "D2B0(a2 = {a2}, a3 = {a3}, v = {v}, d = {d})"),
            OuterTuple::D2B1 { a2, a3, d } => write!(f, "D2B1(a2 = {a2}, a3 = {a3}, d = {d})"),
            OuterTuple::D1C { swap, entries } => {
                write!(f, "D1C({}, {}, {})", if *swap { "antidiagonal" } else { "diagonal" }, entries[0], entries[1])
            }
        }
    }
}

/// Which coordinate system applies to a block.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Kind {
    C(usize),
    D2B(usize, u8),
    D1C,
}

fn kind(id: BlockId) -> Result<Kind, OuterError> {
    match id.family {
        Family::C if id.r >= 2 => Ok(Kind::C(id.r as usize)),
        Family::D2B => Ok(Kind::D2B(id.r as usize, id.c)),
        Family::D1C => Ok(Kind::D1C),
        _ => Err(OuterError::Unsupported(id.to_string())),
    }
}

fn pres_kind(pres: &AlgebraPresentation) -> Result<Kind, OuterError> {
    kind(pres.origin().ok_or(OuterError::NoOrigin)?)
}

impl OuterTuple {
    pub fn identity(id: BlockId, field: Field) -> Result<Self, OuterError> {
        let (one, zero) = (field.one(), field.zero());
        Ok(match kind(id)? {
            Kind::C(r) => OuterTuple::C { alpha: [one; 3], gamma: HrElement::identity(field, r) },
            Kind::D2B(r, 0) => OuterTuple::D2B0 { a2: zero, a3: zero, v: one, d: HrElement::identity(field, r) },
            Kind::D2B(r, _) => OuterTuple::D2B1 { a2: zero, a3: zero, d: HrElement::identity(field, r) },
            Kind::D1C => OuterTuple::D1C { swap: false, entries: [one; 2] },
        })
    }

    pub fn random<R: Rng + ?Sized>(id: BlockId, field: Field, rng: &mut R) -> Result<Self, OuterError> {
        Ok(match kind(id)? {
            Kind::C(r) => OuterTuple::C {
                alpha: [field.random_nonzero(rng), field.random_nonzero(rng), field.random_nonzero(rng)],
                gamma: HrElement::random(field, r, rng),
            }
            .canonical(),
            Kind::D2B(r, 0) => OuterTuple::D2B0 {
                a2: field.random(rng),
                a3: field.random(rng),
                v: field.random_nonzero(rng),
                d: HrElement::random(field, r, rng),
            },
            Kind::D2B(r, _) => {
                OuterTuple::D2B1 { a2: field.random(rng), a3: field.random(rng), d: HrElement::random(field, r, rng) }
            }
            Kind::D1C => {
                OuterTuple::D1C { swap: rng.gen(), entries: [field.random_nonzero(rng), field.random_nonzero(rng)] }
            }
        })
    }

    /// The representative modulo diagonal inner automorphisms. Only the C
    /// coordinates carry such redundancy: `(w a1, v a2, a3 / w)` is one class.
    pub fn canonical(&self) -> OuterTuple {
        match self {
            OuterTuple::C { alpha, gamma } => {
                let one = alpha[0].field().one();
                OuterTuple::C { alpha: [one, one, alpha[0] * alpha[2]], gamma: gamma.clone() }
            }
            other => other.clone(),
        }
    }

    /// Coordinates of the maximal torus.
    pub fn torus_part(&self) -> Vec<Gf> {
        match self {
            OuterTuple::C { alpha, gamma } => vec![alpha[0] * alpha[2], gamma.leading()],
            OuterTuple::D2B0 { v, d, .. } => vec![*v, d.leading()],
            OuterTuple::D2B1 { d, .. } => vec![d.leading()],
            OuterTuple::D1C { entries, .. } => entries.to_vec(),
        }
    }

    /// Validates torus coordinates (gamma_1, d_1 are nonzero by construction).
    pub fn validate(&self) -> Result<(), OuterError> {
        let nonzero = match self {
            OuterTuple::C { alpha, .. } => alpha.iter().all(|a| !a.is_zero()),
            OuterTuple::D2B0 { v, .. } => !v.is_zero(),
            OuterTuple::D2B1 { .. } => true,
            OuterTuple::D1C { entries, .. } => entries.iter().all(|a| !a.is_zero()),
        };
        if nonzero {
            Ok(())
        } else {
            Err(OuterError::NotAutomorphism("torus coordinate is zero".into()))
        }
    }
}

fn words(pres: &AlgebraPresentation, ws: &[&[&str]]) -> Result<Vec<AlgebraElement>, OuterError> {
    ws.iter().map(|w| Ok(pres.word(w)?)).collect()
}

fn powers(pres: &AlgebraPresentation, name: &str, r: usize) -> Result<Vec<AlgebraElement>, OuterError> {
    (1..=r).map(|i| Ok(pres.word(&vec![name; i])?)).collect()
}

/// Coefficients of `x` in the span of `elems`.
fn expand(pres: &AlgebraPresentation, x: &AlgebraElement, elems: &[AlgebraElement], label: &str) -> Result<Vec<Gf>, OuterError> {
    let columns: Vec<Vec<Gf>> = elems.iter().map(|e| pres.coordinates(e)).collect();
    linalg::solve(pres.field(), pres.dimension(), &columns, &pres.coordinates(x))
        .ok_or_else(|| OuterError::UnexpectedImage(label.to_string()))
}

fn image(pres: &AlgebraPresentation, phi: &Endomorphism, name: &str) -> Result<AlgebraElement, OuterError> {
    Ok(phi.arrows[pres.quiver().arrow_id(name)?.0].clone())
}

fn combination(pres: &AlgebraPresentation, coeffs: &[Gf], elems: &[AlgebraElement]) -> AlgebraElement {
    let mut out = AlgebraElement::zero();
    for (c, e) in coeffs.iter().zip(elems) {
        out.add_scaled(e, *c);
    }
    pres.normal_form(&out)
}

fn diagonal_unit(pres: &AlgebraPresentation, scalars: &[Gf]) -> AlgebraElement {
    let mut u = AlgebraElement::zero();
    for (v, c) in pres.quiver().vertex_ids().zip(scalars) {
        u.add_term(Path::vertex(v), *c);
    }
    u
}

const C_ARROWS: [&str; 4] = ["a1", "a2", "b1", "b2"];
const C_CORRECTIONS: [&[&str]; 4] = [&["a1", "a2", "b2"], &["b1", "a1", "a2"], &["a2", "b2", "b1"], &["b2", "b1", "a1"]];

/// `(alphas, betas, gamma)` of a vertex-fixing automorphism of C_r.
fn read_c(pres: &AlgebraPresentation, phi: &Endomorphism, r: usize) -> Result<([Gf; 4], [Gf; 4], Vec<Gf>), OuterError> {
    let zero = pres.field().zero();
    let (mut alpha, mut beta) = ([zero; 4], [zero; 4]);
    for (i, (name, corr)) in C_ARROWS.iter().zip(C_CORRECTIONS).enumerate() {
        let elems = vec![pres.arrow_named(name)?, pres.word(corr)?];
        let k = expand(pres, &image(pres, phi, name)?, &elems, name)?;
        alpha[i] = k[0];
        beta[i] = k[1];
    }
    let gamma = expand(pres, &image(pres, phi, "c")?, &powers(pres, "c", r)?, "c")?;
    Ok((alpha, beta, gamma))
}

fn normalize_c(pres: &AlgebraPresentation, phi: &Endomorphism, r: usize) -> Result<(OuterTuple, Endomorphism), OuterError> {
    let field = pres.field();
    let (alpha, beta, _) = read_c(pres, phi, r)?;
    let inv = |x: Gf| x.inverse().ok_or_else(|| OuterError::NotAutomorphism("arrow coefficient is zero".into()));
    // x = 1 + l4 b1a1 + l5 a2b2 clears every length-3 correction
    let (l4, l5) = (beta[1] * inv(alpha[1])?, beta[2] * inv(alpha[2])?);
    let corr = words(pres, &[&["b1", "a1"], &["a2", "b2"]])?;
    let mut x = pres.one();
    x.add_scaled(&corr[0], l4);
    x.add_scaled(&corr[1], l5);
    let phi1 = compose(pres, &inner(pres, &x)?, phi);
    let (alpha, beta, gamma) = read_c(pres, &phi1, r)?;
    if beta.iter().any(|b| !b.is_zero()) {
        return Err(OuterError::Relation("length-3 corrections survived normalization".into()));
    }
    let gamma = HrElement::new(gamma)?;
    let det = alpha.iter().fold(field.one(), |acc, a| acc * *a);
    if det != gamma.leading().pow(r as u64) {
        return Err(OuterError::Relation("alpha_1 alpha_2 alpha_3 alpha_4 != gamma_1^r".into()));
    }
    // diagonal w = a1^{-1} e1 + e2 + a2 e3 scales a1, a2 to one
    let w = diagonal_unit(pres, &[inv(alpha[0])?, field.one(), alpha[1]]);
    let phi2 = compose(pres, &inner(pres, &w)?, &phi1);
    let (alpha2, beta2, _) = read_c(pres, &phi2, r)?;
    let t = OuterTuple::C { alpha: [alpha2[0], alpha2[1], alpha2[2]], gamma: gamma.clone() };
    if !alpha2[0].is_one() || !alpha2[1].is_one() || beta2.iter().any(|b| !b.is_zero()) || t != t.canonical() {
        return Err(OuterError::Relation("diagonal normalization failed".into()));
    }
    Ok((t, phi2))
}

/// `((a1, a2, a3), (b1, b2), (c1, c2), d)` of a vertex-fixing automorphism of D(2B).
type D2bCoeffs = ([Gf; 3], [Gf; 2], [Gf; 2], Vec<Gf>);

fn read_d2b(pres: &AlgebraPresentation, phi: &Endomorphism, r: usize) -> Result<D2bCoeffs, OuterError> {
    let a = expand(pres, &image(pres, phi, "alpha")?, &words(pres, &[&["alpha"], &["beta", "gamma"], &["alpha", "beta", "gamma"]])?, "alpha")?;
    let b = expand(pres, &image(pres, phi, "beta")?, &words(pres, &[&["beta"], &["alpha", "beta"]])?, "beta")?;
    let c = expand(pres, &image(pres, phi, "gamma")?, &words(pres, &[&["gamma"], &["gamma", "alpha"]])?, "gamma")?;
    let d = expand(pres, &image(pres, phi, "eta")?, &powers(pres, "eta", r)?, "eta")?;
    Ok(([a[0], a[1], a[2]], [b[0], b[1]], [c[0], c[1]], d))
}

fn normalize_d2b(pres: &AlgebraPresentation, phi: &Endomorphism, r: usize, c: u8) -> Result<(OuterTuple, Endomorphism), OuterError> {
    let field = pres.field();
    let (_, _, cc, _) = read_d2b(pres, phi, r)?;
    let c1_inv = cc[0].inverse().ok_or_else(|| OuterError::NotAutomorphism("gamma coefficient is zero".into()))?;
    // y = 1 + (c2 / c1) alpha clears the corrections of beta and gamma
    let mut y = pres.one();
    y.add_scaled(&pres.arrow_named("alpha")?, cc[1] * c1_inv);
    let phi1 = compose(pres, &inner(pres, &y)?, phi);
    let (_, bb, cc, _) = read_d2b(pres, &phi1, r)?;
    if !bb[1].is_zero() || !cc[1].is_zero() {
        return Err(OuterError::Relation("corrections of beta, gamma survived normalization".into()));
    }
    // c1 e0 + e1 moves the gamma scalar onto beta
    let z = diagonal_unit(pres, &[cc[0], field.one()]);
    let phi2 = compose(pres, &inner(pres, &z)?, &phi1);
    let (aa, bb, cc, d) = read_d2b(pres, &phi2, r)?;
    if !cc[0].is_one() || !bb[1].is_zero() || !cc[1].is_zero() {
        return Err(OuterError::Relation("diagonal normalization failed".into()));
    }
    let d = HrElement::new(d)?;
    let v = bb[0];
    let d1r = d.leading().pow(r as u64);
    if aa[0] * v != d1r {
        return Err(OuterError::Relation("a1 b1 c1 != d1^r".into()));
    }
    let t = if c == 0 {
        OuterTuple::D2B0 { a2: aa[1], a3: aa[2], v, d }
    } else {
        if aa[0] != v || v * v != d1r {
            return Err(OuterError::Relation("(b1 c1)^2 != d1^r".into()));
        }
        OuterTuple::D2B1 { a2: aa[1], a3: aa[2], d }
    };
    Ok((t, phi2))
}

fn normalize_d1c(pres: &AlgebraPresentation, phi: &Endomorphism) -> Result<OuterTuple, OuterError> {
    let q = pres.quiver();
    let idx = |name: &str| -> Result<usize, OuterError> {
        let p = q.arrow_path(q.arrow_id(name)?);
        pres.basis_index(&p).ok_or_else(|| OuterError::UnexpectedImage(name.to_string()))
    };
    let (ia, ib) = (idx("alpha")?, idx("beta")?);
    let xa = pres.coordinates(&image(pres, phi, "alpha")?);
    let xb = pres.coordinates(&image(pres, phi, "beta")?);
    let m = [[xa[ia], xa[ib]], [xb[ia], xb[ib]]];
    let nz = |x: Gf| !x.is_zero();
    if nz(m[0][0]) && nz(m[1][1]) && !nz(m[0][1]) && !nz(m[1][0]) {
        Ok(OuterTuple::D1C { swap: false, entries: [m[0][0], m[1][1]] })
    } else if nz(m[0][1]) && nz(m[1][0]) && !nz(m[0][0]) && !nz(m[1][1]) {
        Ok(OuterTuple::D1C { swap: true, entries: [m[0][1], m[1][0]] })
    } else {
        Err(OuterError::NotAutomorphism("action on rad/rad^2 is neither diagonal nor antidiagonal".into()))
    }
}

/// Normalized coordinates of the class of `phi`, together with the
/// normalized representative (for D(1C), `phi` itself).
pub fn normalize_with_representative(
    pres: &AlgebraPresentation,
    phi: &Endomorphism,
) -> Result<(OuterTuple, Endomorphism), OuterError> {
    let k = pres_kind(pres)?;
    if let Some(v) = pres.quiver().vertex_ids().find(|v| phi.vertices[v.0] != pres.vertex(*v)) {
        return Err(OuterError::NotVertexFixing(pres.quiver().vertex_name(v).to_string()));
    }
    verify_automorphism(pres, phi)?;
    match k {
        Kind::C(r) => normalize_c(pres, phi, r),
        Kind::D2B(r, c) => normalize_d2b(pres, phi, r, c),
        Kind::D1C => Ok((normalize_d1c(pres, phi)?, phi.clone())),
    }
}

pub fn normalize_outer(pres: &AlgebraPresentation, phi: &Endomorphism) -> Result<OuterTuple, OuterError> {
    Ok(normalize_with_representative(pres, phi)?.0)
}

fn check_tuple_kind(pres: &AlgebraPresentation, t: &OuterTuple) -> Result<Kind, OuterError> {
    let k = pres_kind(pres)?;
    let ok = match (k, t) {
        (Kind::C(r), OuterTuple::C { gamma, .. }) => gamma.r() == r,
        (Kind::D2B(r, 0), OuterTuple::D2B0 { d, .. }) => d.r() == r,
        (Kind::D2B(r, 1), OuterTuple::D2B1 { d, .. }) => d.r() == r,
        (Kind::D1C, OuterTuple::D1C { .. }) => true,
        _ => false,
    };
    if ok {
        Ok(k)
    } else {
        Err(OuterError::FamilyMismatch)
    }
}

/// The diagonal automorphism with the given coordinates.
pub fn lift(pres: &AlgebraPresentation, t: &OuterTuple) -> Result<Endomorphism, OuterError> {
    check_tuple_kind(pres, t)?;
    t.validate()?;
    let arrow = |n: &str| pres.arrow_named(n);
    Ok(match t {
        OuterTuple::C { alpha, gamma } => {
            let r = gamma.r();
            let a4 = gamma.leading().pow(r as u64) / (alpha[0] * alpha[1] * alpha[2]);
            let scal = [alpha[0], alpha[1], alpha[2], a4];
            let mut images: Vec<(&str, AlgebraElement)> =
                C_ARROWS.iter().zip(scal).map(|(n, s)| Ok((*n, arrow(n)?.scale(s)))).collect::<Result<_, OuterError>>()?;
            images.push(("c", combination(pres, gamma.coords(), &powers(pres, "c", r)?)));
            Endomorphism::from_named(pres, &images)?
        }
        OuterTuple::D2B0 { .. } | OuterTuple::D2B1 { .. } => {
            let (a2, a3, v, d) = match t {
                OuterTuple::D2B0 { a2, a3, v, d } => (*a2, *a3, *v, d),
                OuterTuple::D2B1 { a2, a3, d } => (*a2, *a3, d.leading().pow(d.r() as u64).sqrt(), d),
                _ => unreachable!(),
            };
            let a1 = d.leading().pow(d.r() as u64) / v;
            let alpha_words = words(pres, &[&["alpha"], &["beta", "gamma"], &["alpha", "beta", "gamma"]])?;
            Endomorphism::from_named(
                pres,
                &[
                    ("alpha", combination(pres, &[a1, a2, a3], &alpha_words)),
                    ("beta", arrow("beta")?.scale(v)),
                    ("eta", combination(pres, d.coords(), &powers(pres, "eta", d.r())?)),
                ],
            )?
        }
        OuterTuple::D1C { swap, entries } => {
            let (x, y) = if *swap { ("beta", "alpha") } else { ("alpha", "beta") };
            Endomorphism::from_named(pres, &[("alpha", arrow(x)?.scale(entries[0])), ("beta", arrow(y)?.scale(entries[1]))])?
        }
    })
}

/// The group law in normalized coordinates, `t1 * t2 = [lift(t1) o lift(t2)]`.
pub fn outer_mul(t1: &OuterTuple, t2: &OuterTuple) -> Result<OuterTuple, OuterError> {
    use OuterTuple::*;
    Ok(match (t1, t2) {
        (C { alpha: x, gamma: g1 }, C { alpha: y, gamma: g2 }) => {
            C { alpha: [x[0] * y[0], x[1] * y[1], x[2] * y[2]], gamma: hr_mul(g1, g2)? }.canonical()
        }
        (D2B0 { a2: p2, a3: p3, v: pv, d: pd }, D2B0 { a2, a3, v, d }) => {
            let r = d.r() as u64;
            let k = d.leading().pow(r) / *v;
            D2B0 {
                a2: k * *p2 + *a2 * *pv,
                a3: k * *p3 + *a3 * pd.leading().pow(r),
                v: *v * *pv,
                d: hr_mul(pd, d)?,
            }
        }
        (D2B1 { a2: p2, a3: p3, d: pd }, D2B1 { a2, a3, d }) => {
            let r = d.r() as u64;
            let (s, ps) = (d.leading().pow(r).sqrt(), pd.leading().pow(r).sqrt());
            D2B1 { a2: s * *p2 + *a2 * ps, a3: s * *p3 + *a3 * pd.leading().pow(r), d: hr_mul(pd, d)? }
        }
        (D1C { swap: s1, entries: [a, b] }, D1C { swap: s2, entries: [p, q] }) => {
            let entries = match (s1, s2) {
                (false, false) => [*a * *p, *b * *q],
                (false, true) => [*p * *b, *q * *a],
                (true, false) => [*p * *a, *q * *b],
                (true, true) => [*p * *b, *q * *a],
            };
            D1C { swap: s1 ^ s2, entries }
        }
        _ => return Err(OuterError::FamilyMismatch),
    })
}

/// A random vertex-fixing automorphism with all correction terms present.
pub fn random_automorphism<R: Rng + ?Sized>(pres: &AlgebraPresentation, rng: &mut R) -> Result<Endomorphism, OuterError> {
    let field = pres.field();
    let arrow = |n: &str| pres.arrow_named(n);
    match pres_kind(pres)? {
        Kind::C(r) => {
            let a: Vec<Gf> = (0..3).map(|_| field.random_nonzero(rng)).collect();
            let gamma = HrElement::random(field, r, rng);
            let a4 = gamma.leading().pow(r as u64) / (a[0] * a[1] * a[2]);
            let (b2, b3) = (field.random(rng), field.random(rng));
            // constraints a1 b3 + a3 b1 = 0 and a4 b2 + a2 b4 = 0
            let b1 = a[0] * b3 / a[2];
            let b4 = a4 * b2 / a[1];
            let scal = [(a[0], b1), (a[1], b2), (a[2], b3), (a4, b4)];
            let mut images = Vec::new();
            for ((name, corr), (s, t)) in C_ARROWS.iter().zip(C_CORRECTIONS).zip(scal) {
                images.push((*name, combination(pres, &[s, t], &[arrow(name)?, pres.word(corr)?])));
            }
            images.push(("c", combination(pres, gamma.coords(), &powers(pres, "c", r)?)));
            Endomorphism::from_named(pres, &images)
        }
        Kind::D2B(r, c) => {
            let d = HrElement::random(field, r, rng);
            let d1r = d.leading().pow(r as u64);
            let b1 = field.random_nonzero(rng);
            let c1 = if c == 0 { field.random_nonzero(rng) } else { d1r.sqrt() / b1 };
            let a1 = d1r / (b1 * c1);
            let c2 = field.random(rng);
            // gamma beta = 0 forces b1 c2 = b2 c1
            let b2 = b1 * c2 / c1;
            let (a2, a3) = (field.random(rng), field.random(rng));
            let alpha_words = words(pres, &[&["alpha"], &["beta", "gamma"], &["alpha", "beta", "gamma"]])?;
            Endomorphism::from_named(
                pres,
                &[
                    ("alpha", combination(pres, &[a1, a2, a3], &alpha_words)),
                    ("beta", combination(pres, &[b1, b2], &words(pres, &[&["beta"], &["alpha", "beta"]])?)),
                    ("gamma", combination(pres, &[c1, c2], &words(pres, &[&["gamma"], &["gamma", "alpha"]])?)),
                    ("eta", combination(pres, d.coords(), &powers(pres, "eta", r)?)),
                ],
            )
        }
        Kind::D1C => {
            let bid = pres.origin().ok_or(OuterError::NoOrigin)?;
            let t = OuterTuple::random(bid, field, rng)?;
            let phi = lift(pres, &t)?;
            let u = random_vertex_unit(pres, rng);
            Ok(compose(pres, &inner(pres, &u)?, &phi))
        }
    }
}

/// Integer exponents of a cocharacter of the maximal torus, in the
/// coordinates of the grading lattice quotient.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cocharacter {
    pub block: BlockId,
    pub exponents: Vec<i64>,
}

impl Cocharacter {
    pub fn new(block: BlockId, exponents: Vec<i64>) -> Result<Self, OuterError> {
        let expected = known_profile(block).torus_rank;
        if exponents.len() != expected {
            return Err(OuterError::CocharacterLength { expected, got: exponents.len() });
        }
        Ok(Cocharacter { block, exponents })
    }

    /// For D(1C), conjugation by the antidiagonal class swaps the two
    /// exponents; other families have no such symmetry here.
    pub fn swap_conjugate(&self) -> Option<Cocharacter> {
        (self.block.family == Family::D1C)
            .then(|| Cocharacter { block: self.block, exponents: vec![self.exponents[1], self.exponents[0]] })
    }
}

fn lattice_of(pres: &AlgebraPresentation) -> Result<(BlockId, GradingLattice), OuterError> {
    let block = pres.origin().ok_or(OuterError::NoOrigin)?;
    let lat = GradingLattice::new(pres)?;
    if !lat.torsion().is_empty() {
        return Err(OuterError::Torsion);
    }
    Ok((block, lat))
}

pub fn cocharacter_to_grading(pres: &AlgebraPresentation, chi: &Cocharacter) -> Result<DegreeAssignment, OuterError> {
    let (block, lat) = lattice_of(pres)?;
    if block != chi.block {
        return Err(OuterError::FamilyMismatch);
    }
    Ok(lat.cocharacter_to_grading(&chi.exponents)?)
}

pub fn classify_grading(pres: &AlgebraPresentation, deg: &DegreeAssignment) -> Result<Cocharacter, OuterError> {
    let (block, lat) = lattice_of(pres)?;
    let class = lat.classify(deg)?;
    Cocharacter::new(block, class.free)
}
