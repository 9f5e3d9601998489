//! The tame blocks with dihedral defect group, as quiver presentations.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dsl::{self, DslError, Source};
use crate::field::Field;
use crate::rewrite::AlgebraPresentation;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CatalogError {
    #[error("unknown family `{0}` (expected A, B, C, D2A, D2B, D1C)")]
    UnknownFamily(String),
    #[error("invalid parameters for {family}: {reason}")]
    InvalidParameters { family: Family, reason: String },
    #[error("catalog presentation failed to build: {0}")]
    Build(Box<DslError>),
}

impl From<DslError> for CatalogError {
    fn from(e: DslError) -> Self {
        CatalogError::Build(Box::new(e))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    A,
    B,
    C,
    D2A,
    D2B,
    D1C,
}

impl Family {
    pub const ALL: [Family; 6] = [Family::A, Family::B, Family::C, Family::D2A, Family::D2B, Family::D1C];

    /// Whether the family carries the scalar `c`.
    pub fn has_scalar(self) -> bool {
        matches!(self, Family::D2A | Family::D2B)
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::A => "A",
            Family::B => "B",
            Family::C => "C",
            Family::D2A => "D2A",
            Family::D2B => "D2B",
            Family::D1C => "D1C",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = CatalogError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Family::ALL
            .into_iter()
            .find(|f| f.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| CatalogError::UnknownFamily(s.to_string()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BlockId {
    pub family: Family,
    pub r: u32,
    pub c: u8,
}

impl BlockId {
    pub fn new(family: Family, r: u32, c: u8) -> Result<Self, CatalogError> {
        let bad = |reason: &str| Err(CatalogError::InvalidParameters { family, reason: reason.to_string() });
        if r == 0 {
            return bad("r must be at least 1");
        }
        if c > 1 {
            return bad("c must be 0 or 1");
        }
        if c == 1 && !family.has_scalar() {
            return bad("only D2A and D2B take c");
        }
        Ok(BlockId { family, r, c })
    }

    /// The presentation actually used: `C_1` is `A_1`.
    pub fn canonical(self) -> BlockId {
        if self.family == Family::C && self.r == 1 {
            BlockId { family: Family::A, r: 1, c: 0 }
        } else {
            self
        }
    }
}

impl fmt::Display for BlockId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.family.has_scalar() {
            write!(f, "{}^{{{},{}}}", self.family, self.r, self.c)
        } else {
            write!(f, "{}_{}", self.family, self.r)
        }
    }
}

fn power(word: &str, r: u32) -> String {
    if r == 1 {
        word.to_string()
    } else {
        format!("({word})^{r}")
    }
}

/// The presentation of `id` in the text format.
pub fn block_source(id: BlockId) -> String {
    let id = id.canonical();
    let r = id.r;
    match id.family {
        Family::A => format!(
            "algebra A{r} {{ vertices: 1, 2, 3; arrows: a1:1->2, a2:2->1, b1:1->3, b2:3->1; \
             relations: a2*a1 = 0; b2*b1 = 0; {} = {}; }}",
            power("a1*a2*b1*b2", r),
            power("b1*b2*a1*a2", r)
        ),
        Family::B => format!(
            "algebra B{r} {{ vertices: 1, 2, 3; \
             arrows: c1:1->2, c2:2->3, c3:3->1, d1:2->1, d2:3->2, d3:1->3; \
             relations: c1*c2 = 0; c2*c3 = 0; c3*c1 = 0; d1*d3 = 0; d3*d2 = 0; d2*d1 = 0; \
             c1*d1 = d3*c3; d1*c1 = {}; c3*d3 = {}; }}",
            power("c2*d2", r),
            power("d2*c2", r)
        ),
        Family::C => format!(
            "algebra C{r} {{ vertices: 1, 2, 3; arrows: a1:1->2, a2:2->3, b1:2->1, b2:3->2, c:3->3; \
             relations: a1*b1 = 0; b2*a2 = 0; a2*c = 0; c*b2 = 0; c^{r} = b2*b1*a1*a2; \
             a2*b2*b1*a1 = b1*a1*a2*b2; }}"
        ),
        Family::D2A => {
            let rhs = if id.c == 1 { power("alpha*beta*gamma", r) } else { "0".to_string() };
            format!(
                "algebra D2A_{r}_{c} {{ vertices: 0, 1; arrows: alpha:0->0, beta:0->1, gamma:1->0; \
                 relations: gamma*beta = 0; alpha^2 = {rhs}; {} = {}; }}",
                power("alpha*beta*gamma", r),
                power("beta*gamma*alpha", r),
                c = id.c
            )
        }
        Family::D2B => {
            let rhs = if id.c == 1 { "alpha*beta*gamma" } else { "0" };
            let eta = if r == 1 { "eta".to_string() } else { format!("eta^{r}") };
            format!(
                "algebra D2B_{r}_{c} {{ vertices: 0, 1; \
                 arrows: alpha:0->0, beta:0->1, gamma:1->0, eta:1->1; \
                 relations: beta*eta = 0; eta*gamma = 0; gamma*beta = 0; \
                 alpha*beta*gamma = beta*gamma*alpha; alpha^2 = {rhs}; gamma*alpha*beta = {eta}; }}",
                c = id.c
            )
        }
        Family::D1C => format!(
            "algebra D1C_{r} {{ vertices: 1; arrows: alpha:1->1, beta:1->1; \
             relations: alpha^2 = 0; beta^2 = 0; {} = {}; }}",
            power("alpha*beta", r),
            power("beta*alpha", r)
        ),
    }
}

/// Path-length bound used when completing catalog presentations.
pub fn max_len(id: BlockId) -> usize {
    8 * id.r as usize + 8
}

pub fn make_block(id: BlockId) -> Result<AlgebraPresentation, CatalogError> {
    make_block_over(id, Field::GF2)
}

pub fn make_block_over(id: BlockId, field: Field) -> Result<AlgebraPresentation, CatalogError> {
    let manifest = dsl::parse(&block_source(id))?;
    let Source::Algebra(spec) = manifest.source else { unreachable!("catalog source is an algebra") };
    let mut pres = spec.build(field, max_len(id))?;
    pres.set_origin(id);
    Ok(pres)
}

/// A table entry that may depend on `r`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Condition {
    Always,
    Never,
    OnlyIfREquals(u32),
    OnlyIfRAtMost(u32),
}

impl Condition {
    pub fn holds(self, r: u32) -> bool {
        match self {
            Condition::Always => true,
            Condition::Never => false,
            Condition::OnlyIfREquals(k) => r == k,
            Condition::OnlyIfRAtMost(k) => r <= k,
        }
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Condition::Always => f.write_str("Yes"),
            Condition::Never => f.write_str("No"),
            Condition::OnlyIfREquals(k) => write!(f, "Only if r={k}"),
            Condition::OnlyIfRAtMost(k) => write!(f, "Only if r<={k}"),
        }
    }
}

/// One row of the summary table of known results.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KnownProfile {
    pub nontrivial: Condition,
    pub positive: Condition,
    pub tight: Condition,
    pub torus_rank: usize,
}

impl KnownProfile {
    /// The entries evaluated at the block's `r`. `C_1 = A_1` is tight even
    /// though the C row reads "only if r=4", which concerns `r >= 2`.
    pub fn at(&self, id: BlockId) -> (bool, bool, bool) {
        let tight = if id.family == Family::C && id.r == 1 { true } else { self.tight.holds(id.r) };
        (self.nontrivial.holds(id.r), self.positive.holds(id.r), tight)
    }
}

pub fn known_profile(id: BlockId) -> KnownProfile {
    use Condition::*;
    let (positive, tight, torus_rank) = match (id.family, id.c) {
        (Family::A, _) => (Always, Always, 2),
        (Family::B, _) => (Always, OnlyIfREquals(1), 2),
        (Family::C, _) => (Always, OnlyIfREquals(4), 2),
        (Family::D2A, 0) => (Always, Always, 2),
        (Family::D2B, 0) => (Always, OnlyIfREquals(3), 2),
        (Family::D2A, _) => (OnlyIfRAtMost(2), Never, 1),
        (Family::D2B, _) => (Always, Never, 1),
        (Family::D1C, _) => (Always, Always, 2),
    };
    KnownProfile { nontrivial: Always, positive, tight, torus_rank }
}

/// Cells where the computed profile is known to differ from the table of
/// known results, with the reason. `D2B_1_0` has `eta = gamma*alpha*beta`,
/// so its presentation is not admissible and reduces to `D2A_1_0`, which is
/// tightly graded.
pub fn known_deviation(id: BlockId) -> Option<&'static str> {
    (id.family == Family::D2B && id.r == 1 && id.c == 0)
        .then_some("eta = gamma*alpha*beta lies in rad^2; the reduced presentation is D2A^{1,0}, which is tight")
}

/// Every catalog id with `1 <= r <= r_max`, in table order.
pub fn all_blocks(r_max: u32) -> Vec<BlockId> {
    let rows = [
        (Family::A, 0),
        (Family::B, 0),
        (Family::C, 0),
        (Family::D2A, 0),
        (Family::D2B, 0),
        (Family::D2A, 1),
        (Family::D2B, 1),
        (Family::D1C, 0),
    ];
    rows.iter()
        .flat_map(|&(f, c)| (1..=r_max).map(move |r| BlockId { family: f, r, c }))
        .collect()
}
