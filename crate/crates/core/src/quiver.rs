//! Quivers, paths, and linear combinations of paths.
//!
//! Paths compose left to right: `p * q` means "traverse `p`, then `q`", so
//! the product is defined when `target(p) == source(q)`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::{Field, Gf};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct VertexId(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ArrowId(pub usize);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrow {
    pub name: String,
    pub source: VertexId,
    pub target: VertexId,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QuiverError {
    #[error("duplicate vertex `{0}`")]
    DuplicateVertex(String),
    #[error("duplicate arrow `{0}`")]
    DuplicateArrow(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("unknown arrow `{0}`")]
    UnknownArrow(String),
    #[error("element does not live on this quiver: {0}")]
    ForeignElement(String),
    #[error("coefficients from different fields ({0} and {1})")]
    FieldMismatch(Field, Field),
}

/// A finite quiver with named vertices and arrows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quiver {
    vertices: Vec<String>,
    arrows: Vec<Arrow>,
}

impl Quiver {
    pub fn new<S: AsRef<str>>(vertices: &[S]) -> Result<Self, QuiverError> {
        let mut q = Quiver { vertices: Vec::new(), arrows: Vec::new() };
        for v in vertices {
            let v = v.as_ref();
            if q.vertices.iter().any(|w| w == v) {
                return Err(QuiverError::DuplicateVertex(v.to_string()));
            }
            q.vertices.push(v.to_string());
        }
        Ok(q)
    }

    pub fn add_arrow(&mut self, name: &str, source: &str, target: &str) -> Result<ArrowId, QuiverError> {
        if self.arrows.iter().any(|a| a.name == name) {
            return Err(QuiverError::DuplicateArrow(name.to_string()));
        }
        let source = self.vertex(source)?;
        let target = self.vertex(target)?;
        self.arrows.push(Arrow { name: name.to_string(), source, target });
        Ok(ArrowId(self.arrows.len() - 1))
    }

    pub fn vertex(&self, name: &str) -> Result<VertexId, QuiverError> {
        self.vertices
            .iter()
            .position(|v| v == name)
            .map(VertexId)
            .ok_or_else(|| QuiverError::UnknownVertex(name.to_string()))
    }

    pub fn arrow_id(&self, name: &str) -> Result<ArrowId, QuiverError> {
        self.arrows
            .iter()
            .position(|a| a.name == name)
            .map(ArrowId)
            .ok_or_else(|| QuiverError::UnknownArrow(name.to_string()))
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn arrow_count(&self) -> usize {
        self.arrows.len()
    }

    pub fn vertex_ids(&self) -> impl Iterator<Item = VertexId> {
        (0..self.vertices.len()).map(VertexId)
    }

    pub fn arrow_ids(&self) -> impl Iterator<Item = ArrowId> {
        (0..self.arrows.len()).map(ArrowId)
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        &self.vertices[v.0]
    }

    pub fn vertex_names(&self) -> &[String] {
        &self.vertices
    }

    pub fn arrow(&self, a: ArrowId) -> &Arrow {
        &self.arrows[a.0]
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    /// True if two distinct arrows share both source and target.
    pub fn has_parallel_arrows(&self) -> bool {
        self.arrows.iter().enumerate().any(|(i, a)| {
            self.arrows[i + 1..].iter().any(|b| a.source == b.source && a.target == b.target)
        })
    }

    pub fn arrow_path(&self, a: ArrowId) -> Path {
        let arrow = self.arrow(a);
        Path { source: arrow.source, target: arrow.target, arrows: vec![a] }
    }

    /// Builds a path from consecutive arrows, checking composability.
    pub fn path(&self, arrows: &[ArrowId]) -> Option<Path> {
        let first = *arrows.first()?;
        let mut p = self.arrow_path(first);
        for &a in &arrows[1..] {
            p = p.compose(&self.arrow_path(a))?;
        }
        Some(p)
    }

    pub fn path_by_names(&self, names: &[&str]) -> Result<Option<Path>, QuiverError> {
        let ids = names.iter().map(|n| self.arrow_id(n)).collect::<Result<Vec<_>, _>>()?;
        Ok(self.path(&ids))
    }

    /// Checks that every path of `x` is a genuine path of this quiver.
    pub fn validate(&self, x: &AlgebraElement) -> Result<(), QuiverError> {
        for (p, _) in x.terms() {
            let ok = if p.arrows.is_empty() {
                p.source == p.target && p.source.0 < self.vertices.len()
            } else {
                p.arrows.iter().all(|a| a.0 < self.arrows.len())
                    && self.path(&p.arrows).map_or(false, |q| q.source == p.source && q.target == p.target)
            };
            if !ok {
                return Err(QuiverError::ForeignElement(self.format_path(p)));
            }
        }
        Ok(())
    }

    /// Product in the free path algebra, after validating both factors.
    pub fn multiply(&self, x: &AlgebraElement, y: &AlgebraElement) -> Result<AlgebraElement, QuiverError> {
        self.validate(x)?;
        self.validate(y)?;
        if let (Some(a), Some(b)) = (x.field(), y.field()) {
            if a != b {
                return Err(QuiverError::FieldMismatch(a, b));
            }
        }
        Ok(x.mul(y))
    }

    pub fn format_path(&self, p: &Path) -> String {
        if p.arrows.is_empty() {
            return format!("e_{}", self.vertex_name(p.source));
        }
        format_word(&p.arrows.iter().map(|a| self.arrow(*a).name.as_str()).collect::<Vec<_>>())
    }

    pub fn format_element(&self, x: &AlgebraElement) -> String {
        if x.is_zero() {
            return "0".to_string();
        }
        x.terms()
            .rev()
            .map(|(p, c)| {
                if c.is_one() {
                    self.format_path(p)
                } else {
                    format!("{}*{}", c, self.format_path(p))
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// Writes a word of arrow names with `*`, collapsing periodic words into
/// powers: `c2*d2*c2*d2` becomes `(c2*d2)^2`, `a*a` becomes `a^2`.
pub fn format_word(names: &[&str]) -> String {
    let n = names.len();
    for period in 1..n {
        if n % period != 0 || n / period < 2 {
            continue;
        }
        if (period..n).all(|i| names[i] == names[i - period]) {
            let base = names[..period].join("*");
            return if period == 1 {
                format!("{}^{}", base, n / period)
            } else {
                format!("({})^{}", base, n / period)
            };
        }
    }
    names.join("*")
}

/// A path: an arrow sequence, or the trivial path at a vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Path {
    source: VertexId,
    target: VertexId,
    arrows: Vec<ArrowId>,
}

impl Path {
    pub fn vertex(v: VertexId) -> Path {
        Path { source: v, target: v, arrows: Vec::new() }
    }

    pub fn source(&self) -> VertexId {
        self.source
    }

    pub fn target(&self) -> VertexId {
        self.target
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arrows.is_empty()
    }

    pub fn arrows(&self) -> &[ArrowId] {
        &self.arrows
    }

    /// "Traverse self, then q"; `None` if the endpoints do not match.
    pub fn compose(&self, q: &Path) -> Option<Path> {
        if self.target != q.source {
            return None;
        }
        let mut arrows = Vec::with_capacity(self.arrows.len() + q.arrows.len());
        arrows.extend_from_slice(&self.arrows);
        arrows.extend_from_slice(&q.arrows);
        Some(Path { source: self.source, target: q.target, arrows })
    }

    /// Sub-path of arrows `[start, end)`. Endpoints are derived from the
    /// neighbouring arrows, so `quiver` is needed for empty sub-paths.
    pub fn subpath(&self, start: usize, end: usize, quiver: &Quiver) -> Path {
        if start == end {
            let v = if start == 0 {
                self.source
            } else {
                quiver.arrow(self.arrows[start - 1]).target
            };
            return Path::vertex(v);
        }
        Path {
            source: quiver.arrow(self.arrows[start]).source,
            target: quiver.arrow(self.arrows[end - 1]).target,
            arrows: self.arrows[start..end].to_vec(),
        }
    }

    /// Positions where `word` occurs as a contiguous sub-path.
    pub fn occurrences<'a>(&'a self, word: &'a [ArrowId]) -> impl Iterator<Item = usize> + 'a {
        let n = word.len();
        (0..=self.arrows.len().saturating_sub(n))
            .filter(move |&i| n > 0 && i + n <= self.arrows.len() && &self.arrows[i..i + n] == word)
    }
}

/// Length first, then lexicographic on arrow declaration order; trivial
/// paths are ordered by vertex.
impl Ord for Path {
    fn cmp(&self, other: &Self) -> Ordering {
        self.arrows
            .len()
            .cmp(&other.arrows.len())
            .then_with(|| self.arrows.cmp(&other.arrows))
            .then_with(|| self.source.cmp(&other.source))
    }
}

impl PartialOrd for Path {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A finite linear combination of paths with nonzero coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct AlgebraElement {
    terms: BTreeMap<Path, Gf>,
}

impl AlgebraElement {
    pub fn zero() -> Self {
        AlgebraElement { terms: BTreeMap::new() }
    }

    pub fn from_path(p: Path, c: Gf) -> Self {
        let mut x = AlgebraElement::zero();
        x.add_term(p, c);
        x
    }

    pub fn vertex(v: VertexId, field: Field) -> Self {
        Self::from_path(Path::vertex(v), field.one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn field(&self) -> Option<Field> {
        self.terms.values().next().map(|c| c.field())
    }

    /// Terms in increasing path order.
    pub fn terms(&self) -> std::collections::btree_map::Iter<'_, Path, Gf> {
        self.terms.iter()
    }

    pub fn coefficient(&self, p: &Path) -> Option<Gf> {
        self.terms.get(p).copied()
    }

    pub fn leading(&self) -> Option<(&Path, Gf)> {
        self.terms.iter().next_back().map(|(p, c)| (p, *c))
    }

    pub fn add_term(&mut self, p: Path, c: Gf) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(p) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = *e.get() + c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn pop_leading(&mut self) -> Option<(Path, Gf)> {
        self.terms.pop_last()
    }

    pub fn add(&self, other: &AlgebraElement) -> AlgebraElement {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn add_assign(&mut self, other: &AlgebraElement) {
        for (p, c) in other.terms() {
            self.add_term(p.clone(), *c);
        }
    }

    pub fn add_scaled(&mut self, other: &AlgebraElement, s: Gf) {
        for (p, c) in other.terms() {
            self.add_term(p.clone(), *c * s);
        }
    }

    pub fn scale(&self, s: Gf) -> AlgebraElement {
        let mut out = AlgebraElement::zero();
        out.add_scaled(self, s);
        out
    }

    /// Bilinear extension of path composition; incomposable pairs vanish.
    pub fn mul(&self, other: &AlgebraElement) -> AlgebraElement {
        let mut out = AlgebraElement::zero();
        for (p, a) in self.terms() {
            for (q, b) in other.terms() {
                if let Some(pq) = p.compose(q) {
                    out.add_term(pq, *a * *b);
                }
            }
        }
        out
    }

    /// Keeps only terms whose path satisfies `keep`.
    pub fn filter(&self, mut keep: impl FnMut(&Path) -> bool) -> AlgebraElement {
        AlgebraElement { terms: self.terms.iter().filter(|(p, _)| keep(p)).map(|(p, c)| (p.clone(), *c)).collect() }
    }
}

impl fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms()
            .rev()
            .map(|(p, c)| {
                let word = if p.is_empty() {
                    format!("e{}", p.source.0)
                } else {
                    p.arrows.iter().map(|a| format!("#{}", a.0)).collect::<Vec<_>>().join("*")
                };
                format!("{}*{}", c, word)
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a_quiver() -> Quiver {
        let mut q = Quiver::new(&["1", "2", "3"]).unwrap();
        q.add_arrow("a1", "1", "2").unwrap();
        q.add_arrow("a2", "2", "1").unwrap();
        q.add_arrow("b1", "1", "3").unwrap();
        q.add_arrow("b2", "3", "1").unwrap();
        q
    }

    fn el(q: &Quiver, names: &[&str]) -> AlgebraElement {
        AlgebraElement::from_path(q.path_by_names(names).unwrap().unwrap(), Field::GF2.one())
    }

    #[test]
    fn compose_endpoint_checks() {
        let q = a_quiver();
        let a1 = q.arrow_path(q.arrow_id("a1").unwrap());
        let a2 = q.arrow_path(q.arrow_id("a2").unwrap());
        let b2 = q.arrow_path(q.arrow_id("b2").unwrap());
        let loop1 = a1.compose(&a2).unwrap();
        assert_eq!(loop1.source(), VertexId(0));
        assert_eq!(loop1.target(), VertexId(0));
        assert_eq!(loop1.len(), 2);
        assert!(a1.compose(&b2).is_none());
        assert_eq!(Path::vertex(VertexId(0)).compose(&a1).unwrap(), a1);
        assert!(Path::vertex(VertexId(1)).compose(&a1).is_none());
    }

    #[test]
    fn multiply_filters_and_cancels() {
        let q = a_quiver();
        let f = Field::GF2;
        let x = el(&q, &["a1"]).add(&el(&q, &["b1"]));
        let y = el(&q, &["a2"]);
        assert_eq!(q.multiply(&x, &y).unwrap(), el(&q, &["a1", "a2"]));
        let twice = el(&q, &["a1"]).add(&el(&q, &["a1"]));
        assert!(twice.is_zero());
        assert!(q.multiply(&twice, &y).unwrap().is_zero());
        let idem = AlgebraElement::vertex(VertexId(0), f).add(&AlgebraElement::vertex(VertexId(1), f));
        assert_eq!(q.multiply(&idem, &el(&q, &["a1"])).unwrap(), el(&q, &["a1"]));
    }

    #[test]
    fn foreign_elements_are_rejected() {
        let q = a_quiver();
        let mut other = Quiver::new(&["x"]).unwrap();
        other.add_arrow("l", "x", "x").unwrap();
        let l = el(&other, &["l", "l", "l"]);
        assert!(matches!(q.multiply(&l, &l), Err(QuiverError::ForeignElement(_))));
    }

    #[test]
    fn path_order_is_length_then_lex() {
        let q = a_quiver();
        let short = q.path_by_names(&["b1"]).unwrap().unwrap();
        let long = q.path_by_names(&["a1", "a2"]).unwrap().unwrap();
        let long2 = q.path_by_names(&["b1", "b2"]).unwrap().unwrap();
        assert!(short < long);
        assert!(long < long2);
        assert!(Path::vertex(VertexId(2)) < short);
    }

    #[test]
    fn word_formatting() {
        assert_eq!(format_word(&["c2", "d2", "c2", "d2"]), "(c2*d2)^2");
        assert_eq!(format_word(&["a", "a"]), "a^2");
        assert_eq!(format_word(&["d1", "c1"]), "d1*c1");
        assert_eq!(format_word(&["x"]), "x");
    }
}
