//! Integer degree data: arrow-degree assignments and graded vector spaces.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::quiver::{ArrowId, Path, Quiver, QuiverError, VertexId};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DegreeError {
    #[error("degree assignment has {got} entries, quiver has {expected} arrows")]
    WrongLength { expected: usize, got: usize },
    #[error("arrow `{0}` assigned twice")]
    Duplicate(String),
    #[error("arrow `{0}` has no degree")]
    Missing(String),
    #[error(transparent)]
    Quiver(#[from] QuiverError),
}

/// Integer degrees on arrows; vertices sit in degree 0.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DegreeAssignment {
    degrees: Vec<i64>,
}

impl DegreeAssignment {
    pub fn new(degrees: Vec<i64>) -> Self {
        DegreeAssignment { degrees }
    }

    pub fn zero(arrows: usize) -> Self {
        DegreeAssignment { degrees: vec![0; arrows] }
    }

    pub fn constant(arrows: usize, d: i64) -> Self {
        DegreeAssignment { degrees: vec![d; arrows] }
    }

    pub fn from_names(quiver: &Quiver, pairs: &[(&str, i64)]) -> Result<Self, DegreeError> {
        let mut degrees: Vec<Option<i64>> = vec![None; quiver.arrow_count()];
        for (name, d) in pairs {
            let a = quiver.arrow_id(name)?;
            if degrees[a.0].replace(*d).is_some() {
                return Err(DegreeError::Duplicate(name.to_string()));
            }
        }
        let degrees = degrees
            .into_iter()
            .enumerate()
            .map(|(i, d)| d.ok_or_else(|| DegreeError::Missing(quiver.arrow(ArrowId(i)).name.clone())))
            .collect::<Result<_, _>>()?;
        Ok(DegreeAssignment { degrees })
    }

    pub fn check_len(&self, quiver: &Quiver) -> Result<(), DegreeError> {
        if self.degrees.len() != quiver.arrow_count() {
            return Err(DegreeError::WrongLength { expected: quiver.arrow_count(), got: self.degrees.len() });
        }
        Ok(())
    }

    pub fn as_slice(&self) -> &[i64] {
        &self.degrees
    }

    pub fn len(&self) -> usize {
        self.degrees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.degrees.is_empty()
    }

    pub fn arrow(&self, a: ArrowId) -> i64 {
        self.degrees[a.0]
    }

    pub fn of(&self, quiver: &Quiver, name: &str) -> Result<i64, QuiverError> {
        Ok(self.degrees[quiver.arrow_id(name)?.0])
    }

    /// Total degree of a path: the sum of its arrow degrees.
    pub fn path_degree(&self, p: &Path) -> i64 {
        p.arrows().iter().map(|a| self.degrees[a.0]).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.degrees.iter().all(|&d| d == 0)
    }

    pub fn is_nonnegative(&self) -> bool {
        self.degrees.iter().all(|&d| d >= 0)
    }

    pub fn named<'q>(&self, quiver: &'q Quiver) -> Vec<(&'q str, i64)> {
        quiver.arrows().iter().zip(&self.degrees).map(|(a, d)| (a.name.as_str(), *d)).collect()
    }

    pub fn display<'a>(&'a self, quiver: &'a Quiver) -> impl fmt::Display + 'a {
        NamedDegrees { deg: self, quiver }
    }
}

struct NamedDegrees<'a> {
    deg: &'a DegreeAssignment,
    quiver: &'a Quiver,
}

impl fmt::Display for NamedDegrees<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.deg.named(self.quiver).iter().map(|(n, d)| format!("{n}={d}")).collect();
        write!(f, "{}", parts.join(", "))
    }
}

/// A finite-dimensional graded vector space, stored as the multiset of the
/// degrees of a homogeneous basis.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedVectorSpace {
    degrees: Vec<i64>,
}

impl GradedVectorSpace {
    pub fn new(mut degrees: Vec<i64>) -> Self {
        degrees.sort_unstable();
        GradedVectorSpace { degrees }
    }

    /// `k<s>` in shift notation: one basis vector in degree `-s`.
    pub fn shifted_line(shift: i64) -> Self {
        GradedVectorSpace { degrees: vec![-shift] }
    }

    pub fn dim(&self) -> usize {
        self.degrees.len()
    }

    pub fn degrees(&self) -> &[i64] {
        &self.degrees
    }

    pub fn push(&mut self, d: i64) {
        let pos = self.degrees.partition_point(|&x| x < d);
        self.degrees.insert(pos, d);
    }

    pub fn direct_sum(&self, other: &GradedVectorSpace) -> GradedVectorSpace {
        let mut d = self.degrees.clone();
        d.extend_from_slice(&other.degrees);
        GradedVectorSpace::new(d)
    }

    pub fn multiplicities(&self) -> BTreeMap<i64, usize> {
        let mut m = BTreeMap::new();
        for d in &self.degrees {
            *m.entry(*d).or_insert(0) += 1;
        }
        m
    }

    pub fn contains_degree(&self, d: i64) -> bool {
        self.degrees.binary_search(&d).is_ok()
    }
}

impl fmt::Display for GradedVectorSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.degrees.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .multiplicities()
            .into_iter()
            .map(|(d, m)| if m == 1 { format!("k<{}>", -d) } else { format!("k<{}>^{}", -d, m) })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// A composition factor of a radical layer: the simple at `simple`, with its
/// degree under each grading in a family (empty for ungraded tables).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Factor {
    pub simple: VertexId,
    pub degree: Vec<i64>,
}

/// Radical layers of one projective indecomposable.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LayerTable {
    pub vertex: VertexId,
    /// Number of gradings the degree vectors refer to.
    pub gradings: usize,
    pub layers: Vec<Vec<Factor>>,
}

impl LayerTable {
    pub fn dim(&self) -> usize {
        self.layers.iter().map(|l| l.len()).sum()
    }

    pub fn loewy_length(&self) -> usize {
        self.layers.len()
    }

    /// Ungraded view: the simples in each layer, sorted.
    pub fn simples(&self) -> Vec<Vec<VertexId>> {
        self.layers.iter().map(|l| l.iter().map(|f| f.simple).collect()).collect()
    }

    pub fn render(&self, quiver: &Quiver) -> String {
        let mut out = String::new();
        for (i, layer) in self.layers.iter().enumerate() {
            let parts: Vec<String> = layer
                .iter()
                .map(|f| match f.degree.as_slice() {
                    [] => format!("S{}", quiver.vertex_name(f.simple)),
                    [d] => format!("S{}@{}", quiver.vertex_name(f.simple), d),
                    ds => format!("S{}@{:?}", quiver.vertex_name(f.simple), ds),
                })
                .collect();
            out.push_str(&format!("  {i}: {}\n", parts.join(" ")));
        }
        out
    }
}
