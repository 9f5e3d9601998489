//! Deciding tightness: whether an algebra has a grading with semisimple
//! degree-zero part that is generated in degrees 0 and 1.
//!
//! Three certificates are used, in order:
//!
//! * sufficient: the all-ones arrow grading is homogeneous;
//! * obstruction: in a tight grading every arrow `a` admits a degree-one
//!   element `t_a = a + (terms in e_s rad^2 e_t)`. If for every choice of the
//!   correction coefficients the product of the `t`'s along a monomial equals
//!   the monomial itself, that monomial is homogeneous of degree its length.
//!   A relation whose length classes do not vanish separately then equates
//!   homogeneous elements of different degrees;
//! * for catalog blocks, every grading is conjugate to an arrow grading of
//!   the given presentation, and a tight one would be strictly positive on
//!   arrows. No strictly positive vector in `H` rules tightness out.
//!
//! Presentations whose quiver is not the Gabriel quiver (some arrow lies in
//! `rad^2`) are first reduced by eliminating such arrows.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::field::Gf;
use crate::graded::DegreeAssignment;
use crate::grading::{forced_zero_arrows, GradingError, GradingLattice};
use crate::linalg::{self, Subspace};
use crate::quiver::{AlgebraElement, ArrowId, Path, Quiver};
use crate::rewrite::{AlgebraPresentation, Relation};

/// Largest number of (path, monomial) pairs tracked in a symbolic product.
const SYMBOLIC_CAP: usize = 200_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum TightnessVerdict {
    Tight { witness: DegreeAssignment, note: Option<String> },
    NotTight { obstruction: String },
    Unknown { reason: String },
}

impl TightnessVerdict {
    pub fn label(&self) -> &'static str {
        match self {
            TightnessVerdict::Tight { .. } => "TIGHT",
            TightnessVerdict::NotTight { .. } => "NOT-TIGHT",
            TightnessVerdict::Unknown { .. } => "UNKNOWN",
        }
    }

    pub fn as_bool(&self) -> Option<bool> {
        match self {
            TightnessVerdict::Tight { .. } => Some(true),
            TightnessVerdict::NotTight { .. } => Some(false),
            TightnessVerdict::Unknown { .. } => None,
        }
    }
}

/// An arrow removed because it equals an expression in the others.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Elimination {
    pub arrow: String,
    pub expression: String,
    /// Arrows of the expression's first path, by name.
    replacement: Vec<String>,
}

/// Repeatedly eliminates arrows lying in `rad^2`. Returns `None` if the
/// quiver is already the Gabriel quiver.
pub fn gabriel_reduction(
    pres: &AlgebraPresentation,
) -> Result<Option<(AlgebraPresentation, Vec<Elimination>)>, GradingError> {
    let mut current = pres.clone();
    let mut done = Vec::new();
    while let Some((next, elim)) = eliminate_one(&current)? {
        current = next;
        done.push(elim);
    }
    Ok(if done.is_empty() { None } else { Some((current, done)) })
}

fn eliminate_one(pres: &AlgebraPresentation) -> Result<Option<(AlgebraPresentation, Elimination)>, GradingError> {
    let rad2 = pres.radical_power(2);
    let mut span = Subspace::new(pres.field(), pres.dimension());
    for x in &rad2 {
        span.insert(&pres.coordinates(x));
    }
    let q = pres.quiver();
    for a in q.arrow_ids() {
        if !span.contains(&pres.coordinates(&pres.arrow(a))) {
            continue;
        }
        let Some(expr) = express_without(pres, a) else { continue };
        return Ok(Some(substitute(pres, a, &expr)?));
    }
    Ok(None)
}

/// Writes arrow `a` as a combination of paths of length >= 2 avoiding `a`.
fn express_without(pres: &AlgebraPresentation, a: ArrowId) -> Option<AlgebraElement> {
    let q = pres.quiver();
    let (s, t) = (q.arrow(a).source, q.arrow(a).target);
    let one = pres.field().one();
    let mut candidates = Vec::new();
    let mut frontier = vec![Path::vertex(s)];
    for len in 1..=pres.max_len() {
        let mut next = Vec::new();
        for p in &frontier {
            for b in q.arrow_ids().filter(|&b| b != a) {
                let Some(pb) = p.compose(&q.arrow_path(b)) else { continue };
                if pres.normal_form(&AlgebraElement::from_path(pb.clone(), one)).is_zero() {
                    continue;
                }
                if len >= 2 && pb.target() == t {
                    candidates.push(pb.clone());
                }
                next.push(pb);
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    let cols: Vec<Vec<Gf>> =
        candidates.iter().map(|p| pres.coordinates(&AlgebraElement::from_path(p.clone(), one))).collect();
    let target = pres.coordinates(&pres.arrow(a));
    let x = linalg::solve(pres.field(), pres.dimension(), &cols, &target)?;
    let mut out = AlgebraElement::zero();
    for (p, c) in candidates.into_iter().zip(x) {
        out.add_term(p, c);
    }
    Some(out)
}

fn substitute(
    pres: &AlgebraPresentation,
    a: ArrowId,
    expr: &AlgebraElement,
) -> Result<(AlgebraPresentation, Elimination), GradingError> {
    let old = pres.quiver();
    let mut quiver = Quiver::new(old.vertex_names()).expect("vertex names are distinct");
    let mut map: HashMap<ArrowId, ArrowId> = HashMap::new();
    for b in old.arrow_ids().filter(|&b| b != a) {
        let arr = old.arrow(b);
        let id = quiver
            .add_arrow(&arr.name, old.vertex_name(arr.source), old.vertex_name(arr.target))
            .expect("arrow names are distinct");
        map.insert(b, id);
    }
    let field = pres.field();
    let translate_path = |p: &Path| -> Path {
        let arrows: Vec<ArrowId> = p.arrows().iter().map(|b| map[b]).collect();
        if arrows.is_empty() {
            Path::vertex(p.source())
        } else {
            quiver.path(&arrows).expect("translated path composes")
        }
    };
    let mut image = AlgebraElement::zero();
    for (p, c) in expr.terms() {
        image.add_term(translate_path(p), *c);
    }
    let translate = |x: &AlgebraElement| -> AlgebraElement {
        let mut out = AlgebraElement::zero();
        for (p, c) in x.terms() {
            let mut acc = AlgebraElement::from_path(Path::vertex(p.source()), *c);
            for b in p.arrows() {
                let factor = if *b == a {
                    image.clone()
                } else {
                    AlgebraElement::from_path(quiver.arrow_path(map[b]), field.one())
                };
                acc = acc.mul(&factor);
            }
            out.add_assign(&acc);
        }
        out
    };
    let relations: Vec<Relation> =
        pres.relations().iter().map(|r| Relation::new(translate(&r.left), translate(&r.right))).collect();
    let replacement = image
        .terms()
        .next()
        .map(|(p, _)| p.arrows().iter().map(|b| quiver.arrow(*b).name.clone()).collect())
        .unwrap_or_default();
    let elim = Elimination {
        arrow: old.arrow(a).name.clone(),
        expression: quiver.format_element(&image),
        replacement,
    };
    let reduced = AlgebraPresentation::complete(
        &format!("{}/{}", pres.name(), elim.arrow),
        quiver,
        field,
        relations,
        pres.max_len(),
    )?;
    Ok((reduced, elim))
}

pub fn tightness(pres: &AlgebraPresentation) -> Result<TightnessVerdict, GradingError> {
    let Some((reduced, elims)) = gabriel_reduction(pres)? else {
        return admissible_tightness(pres, pres.origin().is_some());
    };
    let notes: Vec<String> = elims.iter().map(|e| format!("{} = {}", e.arrow, e.expression)).collect();
    let note = format!("eliminated redundant arrows: {}", notes.join(", "));
    Ok(match admissible_tightness(&reduced, false)? {
        TightnessVerdict::Tight { witness, .. } => {
            TightnessVerdict::Tight { witness: lift_witness(pres, &reduced, &elims, &witness), note: Some(note) }
        }
        TightnessVerdict::NotTight { obstruction } => {
            TightnessVerdict::NotTight { obstruction: format!("{obstruction} ({note})") }
        }
        TightnessVerdict::Unknown { reason } => TightnessVerdict::Unknown { reason: format!("{reason} ({note})") },
    })
}

/// Extends a grading of the reduced quiver to the original arrows, giving
/// each eliminated arrow the degree of its replacement.
fn lift_witness(
    original: &AlgebraPresentation,
    reduced: &AlgebraPresentation,
    elims: &[Elimination],
    witness: &DegreeAssignment,
) -> DegreeAssignment {
    let rq = reduced.quiver();
    let mut named: BTreeMap<String, i64> =
        witness.named(rq).into_iter().map(|(n, d)| (n.to_string(), d)).collect();
    // Later eliminations act on quivers that already lack earlier arrows,
    // so lift in reverse order.
    for e in elims.iter().rev() {
        let d: i64 = e.replacement.iter().map(|b| named[b]).sum();
        named.insert(e.arrow.clone(), d);
    }
    DegreeAssignment::new(original.quiver().arrows().iter().map(|a| named[&a.name]).collect())
}

fn admissible_tightness(pres: &AlgebraPresentation, catalog: bool) -> Result<TightnessVerdict, GradingError> {
    let q = pres.quiver();
    let ones = DegreeAssignment::constant(q.arrow_count(), 1);
    let lat = GradingLattice::new(pres)?;
    if lat.contains(&ones) {
        return Ok(TightnessVerdict::Tight { witness: ones, note: None });
    }
    if !q.has_parallel_arrows() {
        if let Some(obstruction) = symbolic_obstruction(pres) {
            return Ok(TightnessVerdict::NotTight { obstruction });
        }
    }
    if catalog {
        let zero = forced_zero_arrows(pres)?;
        if !zero.is_empty() {
            let obstruction = if zero.len() == q.arrow_count() {
                "no positive grading exists".to_string()
            } else {
                let names: Vec<&str> = zero.iter().map(|&j| q.arrow(ArrowId(j)).name.as_str()).collect();
                format!("arrows {} forced to degree 0 in every nonnegative grading", names.join(", "))
            };
            return Ok(TightnessVerdict::NotTight { obstruction });
        }
    }
    Ok(TightnessVerdict::Unknown { reason: "no certificate for or against tightness".to_string() })
}

/// Polynomial in commuting correction coefficients: monomial -> coefficient.
type Poly = BTreeMap<Vec<u32>, Gf>;

/// Generic degree-one lift of each arrow: the arrow itself plus one
/// symbolic coefficient per basis element of `e_s rad^2 e_t`.
fn generic_lifts(pres: &AlgebraPresentation) -> Vec<Vec<(AlgebraElement, Option<u32>)>> {
    let q = pres.quiver();
    let rad2 = pres.radical_power(2);
    let mut var = 0u32;
    q.arrow_ids()
        .map(|a| {
            let (s, t) = (q.arrow(a).source, q.arrow(a).target);
            let mut lift = vec![(pres.arrow(a), None)];
            for x in rad2.iter().filter(|x| x.terms().all(|(p, _)| p.source() == s && p.target() == t)) {
                lift.push((x.clone(), Some(var)));
                var += 1;
            }
            lift
        })
        .collect()
}

/// Whether the product of generic lifts along `word` equals `word` for
/// every value of the coefficients. `None` if the expansion is too large.
fn reproduces(
    pres: &AlgebraPresentation,
    word: &Path,
    lifts: &[Vec<(AlgebraElement, Option<u32>)>],
    cache: &mut HashMap<(Path, ArrowId, usize), AlgebraElement>,
) -> Option<bool> {
    let one = pres.field().one();
    let mut elem: BTreeMap<Path, Poly> = BTreeMap::new();
    elem.insert(Path::vertex(word.source()), BTreeMap::from([(Vec::new(), one)]));
    for &a in word.arrows() {
        let mut next: BTreeMap<Path, Poly> = BTreeMap::new();
        let mut size = 0usize;
        for (p, poly) in &elem {
            for (k, (x, var)) in lifts[a.0].iter().enumerate() {
                let prod = cache
                    .entry((p.clone(), a, k))
                    .or_insert_with(|| pres.normal_form(&AlgebraElement::from_path(p.clone(), one).mul(x)))
                    .clone();
                for (qpath, c) in prod.terms() {
                    let slot = next.entry(qpath.clone()).or_default();
                    for (mono, coeff) in poly {
                        let mut m = mono.clone();
                        if let Some(v) = var {
                            let pos = m.partition_point(|u| u <= v);
                            m.insert(pos, *v);
                        }
                        let e = slot.entry(m).or_insert(pres.field().zero());
                        *e += *coeff * *c;
                    }
                }
            }
        }
        for poly in next.values_mut() {
            poly.retain(|_, c| !c.is_zero());
            size += poly.len();
        }
        next.retain(|_, poly| !poly.is_empty());
        if size > SYMBOLIC_CAP {
            return None;
        }
        elem = next;
    }
    Some(elem.values().all(|poly| poly.keys().all(|m| m.is_empty())))
}

/// Monomials of a relation with their coefficients, and a display form.
fn relation_monomials(pres: &AlgebraPresentation) -> Vec<(Vec<(Path, Gf)>, String)> {
    let q = pres.quiver();
    let mut out = Vec::new();
    for r in pres.relations() {
        let terms: Vec<(Path, Gf)> =
            r.left.terms().chain(r.right.terms()).map(|(p, c)| (p.clone(), *c)).collect();
        out.push((terms, r.format(q)));
    }
    for rule in pres.rules() {
        let mut terms = vec![(rule.lead.clone(), pres.field().one())];
        terms.extend(rule.tail.terms().map(|(p, c)| (p.clone(), *c)));
        out.push((terms, format!("{} = {}", q.format_path(&rule.lead), q.format_element(&rule.tail))));
    }
    out
}

fn symbolic_obstruction(pres: &AlgebraPresentation) -> Option<String> {
    let lifts = generic_lifts(pres);
    let mut cache = HashMap::new();
    for (terms, text) in relation_monomials(pres) {
        let mut lengths: Vec<usize> = terms.iter().map(|(p, _)| p.len()).collect();
        lengths.dedup();
        let mut distinct = lengths.clone();
        distinct.sort_unstable();
        distinct.dedup();
        if distinct.len() < 2 {
            continue;
        }
        if !terms.iter().all(|(p, _)| reproduces(pres, p, &lifts, &mut cache) == Some(true)) {
            continue;
        }
        // Homogeneous components of different degrees must vanish separately.
        let mut nonzero = Vec::new();
        for (p, _) in &terms {
            let k = p.len();
            if nonzero.contains(&k) {
                continue;
            }
            let mut group = AlgebraElement::zero();
            for (p2, c) in terms.iter().filter(|(p2, _)| p2.len() == k) {
                group.add_term(p2.clone(), *c);
            }
            if !pres.normal_form(&group).is_zero() {
                nonzero.push(k);
            }
        }
        if nonzero.len() >= 2 {
            return Some(format!("{text} forces degree {} = {}", nonzero[0], nonzero[1]));
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{make_block, BlockId, Family};

    fn verdict(f: Family, r: u32, c: u8) -> TightnessVerdict {
        tightness(&make_block(BlockId::new(f, r, c).unwrap()).unwrap()).unwrap()
    }

    #[test]
    fn a_r_is_tight() {
        for r in 1..=3 {
            assert!(matches!(verdict(Family::A, r, 0), TightnessVerdict::Tight { note: None, .. }));
        }
    }

    #[test]
    fn b2_obstruction_message() {
        match verdict(Family::B, 2, 0) {
            TightnessVerdict::NotTight { obstruction } => {
                assert_eq!(obstruction, "d1*c1 = (c2*d2)^2 forces degree 2 = 4")
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn c_r_cases() {
        assert!(matches!(verdict(Family::C, 4, 0), TightnessVerdict::Tight { .. }));
        match verdict(Family::C, 3, 0) {
            TightnessVerdict::NotTight { obstruction } => {
                assert!(obstruction.starts_with("c^3 = b2*b1*a1*a2"), "{obstruction}")
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn char_two_cancellation_for_d2b_c1() {
        for r in 2..=3 {
            match verdict(Family::D2B, r, 1) {
                TightnessVerdict::NotTight { obstruction } => assert!(obstruction.contains("alpha^2"), "{obstruction}"),
                other => panic!("{other:?}"),
            }
        }
    }

    #[test]
    fn d2a_c1_without_positive_cone() {
        match verdict(Family::D2A, 3, 1) {
            TightnessVerdict::NotTight { obstruction } => assert_eq!(obstruction, "no positive grading exists"),
            other => panic!("{other:?}"),
        }
        match verdict(Family::D2A, 2, 1) {
            TightnessVerdict::NotTight { obstruction } => assert!(obstruction.contains("forced to degree 0")),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn degenerate_d2b_reduces_to_d2a() {
        let p = make_block(BlockId::new(Family::D2B, 1, 0).unwrap()).unwrap();
        let (reduced, elims) = gabriel_reduction(&p).unwrap().unwrap();
        assert_eq!(elims.len(), 1);
        assert_eq!(elims[0].arrow, "eta");
        assert_eq!(elims[0].expression, "gamma*alpha*beta");
        assert_eq!(reduced.dimension(), p.dimension());
        match tightness(&p).unwrap() {
            TightnessVerdict::Tight { witness, note } => {
                assert_eq!(witness.as_slice(), &[1, 1, 1, 3]);
                assert!(crate::grading::is_homogeneous(&p, &witness));
                assert!(note.unwrap().contains("eta = gamma*alpha*beta"));
            }
            other => panic!("{other:?}"),
        }
    }
}
