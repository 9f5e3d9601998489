//! Graded two-term complexes of shifted projectives, graded Hom in the
//! homotopy category, and transfer of gradings along tilting complexes.
//!
//! Degrees are vectors, one entry per grading in play. Transfers run with
//! a basis of the source grading lattice, so every computed degree is a
//! linear form and arrow matching never depends on accidental coincidences.
//!
//! `P_v = A e_v`; a map `P_i<s> -> P_j<t>` is right multiplication by an
//! element of `e_i A e_j` and has degree `deg(p) + s - t`. Maps compose
//! left to right, so the matrix of "f then g" is `F * G`. Signs are omitted
//! throughout: the field has characteristic 2.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::catalog::{make_block_over, BlockId, CatalogError, Family};
use crate::field::{Field, Gf};
use crate::graded::{DegreeAssignment, GradedVectorSpace};
use crate::grading::{GradingError, GradingLattice};
use crate::lattice::{self, LatticeError};
use crate::linalg;
use crate::quiver::{AlgebraElement, Path, QuiverError, VertexId};
use crate::rewrite::AlgebraPresentation;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ComplexError {
    #[error("unknown transfer edge `{0}` (expected a-b, b-c or d2a-d2b)")]
    UnknownEdge(String),
    #[error("edge {edge} is not available for r = {r}")]
    Unavailable { edge: TransferEdge, r: u32 },
    #[error("invalid complex: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
    #[error("no assignment of target arrow degrees matches the graded Hom spaces")]
    NoAssignment,
    #[error("ambiguous assignment: {}", .0.join(" or "))]
    Ambiguous(Vec<String>),
    #[error("source grading is not homogeneous")]
    NotHomogeneous,
    #[error("transferred grading is not homogeneous on the target: {0}")]
    TargetInhomogeneous(String),
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error(transparent)]
    Grading(#[from] GradingError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Quiver(#[from] QuiverError),
}

/// A shifted indecomposable projective `P_vertex<shift>`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Summand {
    pub vertex: VertexId,
    pub shift: Vec<i64>,
}

/// A bounded complex; `terms[k]` sits in homological position `start + k`
/// and `differentials[k]` maps `terms[k]` to `terms[k + 1]` as a
/// `rows x cols` matrix of elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedComplex {
    pub start: i32,
    pub terms: Vec<Vec<Summand>>,
    pub differentials: Vec<Vec<Vec<AlgebraElement>>>,
}

impl GradedComplex {
    pub fn stalk(vertex: VertexId, shift: Vec<i64>, position: i32) -> Self {
        GradedComplex { start: position, terms: vec![vec![Summand { vertex, shift }]], differentials: vec![] }
    }

    /// `sources -> target` with the source term in `position` and one
    /// differential entry per source summand.
    pub fn two_term(sources: Vec<Summand>, target: Summand, entries: Vec<AlgebraElement>, position: i32) -> Self {
        let d = entries.into_iter().map(|e| vec![e]).collect();
        GradedComplex { start: position, terms: vec![sources, vec![target]], differentials: vec![d] }
    }

    pub fn term(&self, n: i32) -> &[Summand] {
        let k = n - self.start;
        if k < 0 || k as usize >= self.terms.len() {
            return &[];
        }
        &self.terms[k as usize]
    }

    /// The differential leaving position `n`.
    pub fn differential(&self, n: i32) -> Option<&Vec<Vec<AlgebraElement>>> {
        let k = n - self.start;
        if k < 0 {
            return None;
        }
        self.differentials.get(k as usize)
    }

    pub fn positions(&self) -> std::ops::Range<i32> {
        self.start..self.start + self.terms.len() as i32
    }
}

/// A reason a complex fails validation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    Shape { position: i32 },
    SquareNonzero { position: i32 },
    Endpoints { position: i32, row: usize, col: usize },
    Degree { position: i32, row: usize, col: usize, path: String, expected: Vec<i64>, got: Vec<i64> },
    ShiftLength { expected: usize, got: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Shape { position } => write!(f, "differential at position {position} has the wrong shape"),
            Violation::SquareNonzero { position } => write!(f, "d o d is nonzero at position {position}"),
            Violation::Endpoints { position, row, col } => {
                write!(f, "entry ({row}, {col}) at position {position} does not run between the summands")
            }
            Violation::Degree { position, row, col, path, expected, got } => write!(
                f,
                "entry ({row}, {col}) at position {position}: path {path} has degree {got:?}, expected {expected:?}"
            ),
            Violation::ShiftLength { expected, got } => write!(f, "shift has {got} entries, expected {expected}"),
        }
    }
}

fn degree_vec(gradings: &[DegreeAssignment], p: &Path) -> Vec<i64> {
    gradings.iter().map(|g| g.path_degree(p)).collect()
}

fn vsub(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn vadd(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn mat_mul(
    pres: &AlgebraPresentation,
    a: &[Vec<AlgebraElement>],
    b: &[Vec<AlgebraElement>],
    cols: usize,
) -> Vec<Vec<AlgebraElement>> {
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    let mut acc = AlgebraElement::zero();
                    for (x, brow) in row.iter().zip(b) {
                        acc.add_assign(&x.mul(&brow[j]));
                    }
                    pres.normal_form(&acc)
                })
                .collect()
        })
        .collect()
}

/// Checks differential shapes, `d o d = 0`, endpoints, and that every
/// differential entry has degree 0 as a map of shifted projectives.
pub fn validate(x: &GradedComplex, pres: &AlgebraPresentation, gradings: &[DegreeAssignment]) -> Result<(), Vec<Violation>> {
    let mut out = Vec::new();
    for s in x.terms.iter().flatten() {
        if s.shift.len() != gradings.len() {
            out.push(Violation::ShiftLength { expected: gradings.len(), got: s.shift.len() });
        }
    }
    if !out.is_empty() {
        return Err(out);
    }
    for n in x.positions() {
        let Some(d) = x.differential(n) else { continue };
        let (src, tgt) = (x.term(n), x.term(n + 1));
        if d.len() != src.len() || d.iter().any(|row| row.len() != tgt.len()) {
            out.push(Violation::Shape { position: n });
            continue;
        }
        for (i, row) in d.iter().enumerate() {
            for (j, entry) in row.iter().enumerate() {
                let expected = vsub(&tgt[j].shift, &src[i].shift);
                for p in pres.normal_form(entry).terms().map(|(p, _)| p) {
                    if p.source() != src[i].vertex || p.target() != tgt[j].vertex {
                        out.push(Violation::Endpoints { position: n, row: i, col: j });
                        break;
                    }
                    let got = degree_vec(gradings, p);
                    if got != expected {
                        out.push(Violation::Degree {
                            position: n,
                            row: i,
                            col: j,
                            path: pres.quiver().format_path(p),
                            expected: expected.clone(),
                            got,
                        });
                    }
                }
            }
        }
        if let Some(d2) = x.differential(n + 1) {
            if d2.len() == tgt.len() {
                let sq = mat_mul(pres, d, d2, x.term(n + 2).len());
                if sq.iter().flatten().any(|e| !e.is_zero()) {
                    out.push(Violation::SquareNonzero { position: n });
                }
            }
        }
    }
    if out.is_empty() {
        Ok(())
    } else {
        Err(out)
    }
}

/// Graded Hom in the homotopy category, homological degree 0: the degree
/// vector of each basis element of chain maps modulo null-homotopic maps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainMapSpace {
    pub degrees: Vec<Vec<i64>>,
}

impl ChainMapSpace {
    pub fn dim(&self) -> usize {
        self.degrees.len()
    }

    /// The graded vector space for grading `k`.
    pub fn graded(&self, k: usize) -> GradedVectorSpace {
        GradedVectorSpace::new(self.degrees.iter().map(|d| d[k]).collect())
    }
}

/// Block `(n, i, j)` of a map `X -> Y[shift]`: position, source summand, target summand.
type Block = (i32, usize, usize);

struct MapLayout {
    blocks: Vec<Block>,
    index: BTreeMap<Block, usize>,
    dim: usize,
}

impl MapLayout {
    /// Blocks of maps `X_n -> Y_{n + offset}`.
    fn new(x: &GradedComplex, y: &GradedComplex, offset: i32, dim: usize) -> Self {
        let mut blocks = Vec::new();
        for n in x.positions() {
            for i in 0..x.term(n).len() {
                for j in 0..y.term(n + offset).len() {
                    blocks.push((n, i, j));
                }
            }
        }
        let index = blocks.iter().enumerate().map(|(k, b)| (*b, k)).collect();
        MapLayout { blocks, index, dim }
    }

    fn len(&self) -> usize {
        self.blocks.len() * self.dim
    }

    fn slot(&self, block: Block, basis_index: usize) -> usize {
        self.index[&block] * self.dim + basis_index
    }
}

fn entry_paths<'a>(
    pres: &'a AlgebraPresentation,
    gradings: &'a [DegreeAssignment],
    from: &'a Summand,
    to: &'a Summand,
    e: &'a [i64],
) -> impl Iterator<Item = &'a Path> + 'a {
    // deg(p) + s - t = e
    let want = vadd(&vsub(e, &from.shift), &to.shift);
    pres.paths_between(from.vertex, to.vertex).filter(move |p| degree_vec(gradings, p) == want)
}

/// Every degree in which a map `X_n -> Y_{n + offset}` can have a nonzero block.
fn candidate_degrees(
    pres: &AlgebraPresentation,
    gradings: &[DegreeAssignment],
    x: &GradedComplex,
    y: &GradedComplex,
    offset: i32,
) -> BTreeSet<Vec<i64>> {
    let mut out = BTreeSet::new();
    for n in x.positions() {
        for s in x.term(n) {
            for t in y.term(n + offset) {
                for p in pres.paths_between(s.vertex, t.vertex) {
                    out.insert(vsub(&vadd(&degree_vec(gradings, p), &s.shift), &t.shift));
                }
            }
        }
    }
    out
}

/// The matrix of a map as element blocks, from a coordinate vector.
fn blocks_of(pres: &AlgebraPresentation, layout: &MapLayout, v: &[Gf]) -> BTreeMap<Block, AlgebraElement> {
    layout
        .blocks
        .iter()
        .enumerate()
        .map(|(k, b)| (*b, pres.from_coordinates(&v[k * layout.dim..(k + 1) * layout.dim])))
        .collect()
}

fn get(m: &BTreeMap<Block, AlgebraElement>, b: Block) -> AlgebraElement {
    m.get(&b).cloned().unwrap_or_default()
}

pub fn homgr(
    x: &GradedComplex,
    y: &GradedComplex,
    pres: &AlgebraPresentation,
    gradings: &[DegreeAssignment],
) -> Result<ChainMapSpace, ComplexError> {
    for c in [x, y] {
        validate(c, pres, gradings).map_err(ComplexError::Invalid)?;
    }
    let field = pres.field();
    let dim = pres.dimension();
    let maps = MapLayout::new(x, y, 0, dim);
    let homotopies = MapLayout::new(x, y, -1, dim);
    // chain condition blocks: X_n -> Y_{n+1}
    let cond = MapLayout::new(x, y, 1, dim);
    let mut degrees = Vec::new();
    for e in candidate_degrees(pres, gradings, x, y, 0) {
        let mut unknowns = Vec::new();
        for &(n, i, j) in &maps.blocks {
            for p in entry_paths(pres, gradings, &x.term(n)[i], &y.term(n)[j], &e) {
                unknowns.push(((n, i, j), pres.basis_index(p).expect("basis path")));
            }
        }
        if unknowns.is_empty() {
            continue;
        }
        let columns: Vec<Vec<Gf>> = unknowns
            .iter()
            .map(|&(b, idx)| {
                let mut v = vec![field.zero(); maps.len()];
                v[maps.slot(b, idx)] = field.one();
                chain_defect(pres, x, y, &maps, &cond, &v)
            })
            .collect();
        let kernel = linalg::kernel(field, cond.len(), &columns);
        let cycles: Vec<Vec<Gf>> = kernel
            .iter()
            .map(|k| {
                let mut v = vec![field.zero(); maps.len()];
                for (c, &(b, idx)) in k.iter().zip(&unknowns) {
                    v[maps.slot(b, idx)] += *c;
                }
                v
            })
            .collect();
        let mut boundaries = Vec::new();
        for &(n, i, j) in &homotopies.blocks {
            for p in entry_paths(pres, gradings, &x.term(n)[i], &y.term(n - 1)[j], &e) {
                let mut h = vec![field.zero(); homotopies.len()];
                h[homotopies.slot((n, i, j), pres.basis_index(p).expect("basis path"))] = field.one();
                boundaries.push(null_homotopic(pres, x, y, &homotopies, &maps, &h));
            }
        }
        let b = linalg::rank(field, maps.len(), &boundaries);
        let mut all = cycles.clone();
        all.extend(boundaries);
        let total = linalg::rank(field, maps.len(), &all);
        debug_assert_eq!(total, cycles.len(), "null-homotopic maps are chain maps");
        for _ in b..total {
            degrees.push(e.clone());
        }
    }
    degrees.sort();
    Ok(ChainMapSpace { degrees })
}

/// `d_X f - f d_Y` as coordinates on the blocks `X_n -> Y_{n+1}`.
fn chain_defect(
    pres: &AlgebraPresentation,
    x: &GradedComplex,
    y: &GradedComplex,
    maps: &MapLayout,
    cond: &MapLayout,
    v: &[Gf],
) -> Vec<Gf> {
    let f = blocks_of(pres, maps, v);
    let mut out = vec![pres.field().zero(); cond.len()];
    for &(n, i, k) in &cond.blocks {
        let mut acc = AlgebraElement::zero();
        if let Some(dx) = x.differential(n) {
            for (j, e) in dx[i].iter().enumerate() {
                acc.add_assign(&e.mul(&get(&f, (n + 1, j, k))));
            }
        }
        if let Some(dy) = y.differential(n) {
            for (j, row) in dy.iter().enumerate() {
                acc.add_assign(&get(&f, (n, i, j)).mul(&row[k]));
            }
        }
        let c = pres.coordinates(&acc);
        let base = cond.index[&(n, i, k)] * cond.dim;
        out[base..base + cond.dim].copy_from_slice(&c);
    }
    out
}

/// `d_X h + h d_Y` as coordinates on the blocks `X_n -> Y_n`.
fn null_homotopic(
    pres: &AlgebraPresentation,
    x: &GradedComplex,
    y: &GradedComplex,
    homotopies: &MapLayout,
    maps: &MapLayout,
    v: &[Gf],
) -> Vec<Gf> {
    let h = blocks_of(pres, homotopies, v);
    let mut out = vec![pres.field().zero(); maps.len()];
    for &(n, i, k) in &maps.blocks {
        let mut acc = AlgebraElement::zero();
        if let Some(dx) = x.differential(n) {
            for (j, e) in dx[i].iter().enumerate() {
                acc.add_assign(&e.mul(&get(&h, (n + 1, j, k))));
            }
        }
        if let Some(dy) = y.differential(n - 1) {
            for (j, row) in dy.iter().enumerate() {
                acc.add_assign(&get(&h, (n, i, j)).mul(&row[k]));
            }
        }
        let c = pres.coordinates(&acc);
        let base = maps.index[&(n, i, k)] * maps.dim;
        out[base..base + maps.dim].copy_from_slice(&c);
    }
    out
}

/// The three derived equivalences along which gradings are transferred.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TransferEdge {
    AB,
    BC,
    D2aD2b,
}

impl TransferEdge {
    pub const ALL: [TransferEdge; 3] = [TransferEdge::AB, TransferEdge::BC, TransferEdge::D2aD2b];

    pub fn name(self) -> &'static str {
        match self {
            TransferEdge::AB => "a-b",
            TransferEdge::BC => "b-c",
            TransferEdge::D2aD2b => "d2a-d2b",
        }
    }

    pub fn families(self) -> (Family, Family) {
        match self {
            TransferEdge::AB => (Family::A, Family::B),
            TransferEdge::BC => (Family::B, Family::C),
            TransferEdge::D2aD2b => (Family::D2A, Family::D2B),
        }
    }

    /// Source and target blocks. The B-C edge needs `r >= 2`, since `C_1`
    /// collapses onto `A_1`.
    pub fn blocks(self, r: u32, c: u8) -> Result<(BlockId, BlockId), ComplexError> {
        let (s, t) = self.families();
        let c = if s.has_scalar() { c } else { 0 };
        if self == TransferEdge::BC && r < 2 {
            return Err(ComplexError::Unavailable { edge: self, r });
        }
        Ok((BlockId::new(s, r, c)?, BlockId::new(t, r, c)?))
    }
}

impl fmt::Display for TransferEdge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TransferEdge {
    type Err = ComplexError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.to_ascii_lowercase().replace(['_', '>'], "-").replace("--", "-");
        TransferEdge::ALL.into_iter().find(|e| e.name() == t).ok_or_else(|| ComplexError::UnknownEdge(s.to_string()))
    }
}

fn arrow_degree(pres: &AlgebraPresentation, gradings: &[DegreeAssignment], name: &str) -> Result<Vec<i64>, ComplexError> {
    let a = pres.quiver().arrow_id(name)?;
    Ok(gradings.iter().map(|g| g.arrow(a)).collect())
}

fn neg(v: &[i64]) -> Vec<i64> {
    v.iter().map(|x| -x).collect()
}

/// The summands `T_i` of the tilting complex along `edge`, indexed by the
/// target vertices.
pub fn tilting_complex(
    edge: TransferEdge,
    pres: &AlgebraPresentation,
    gradings: &[DegreeAssignment],
) -> Result<Vec<GradedComplex>, ComplexError> {
    let q = pres.quiver();
    let zero = vec![0; gradings.len()];
    let v = |name: &str| q.vertex(name);
    let deg = |name: &str| arrow_degree(pres, gradings, name);
    let summand = |name: &str, shift: Vec<i64>| -> Result<Summand, ComplexError> { Ok(Summand { vertex: v(name)?, shift }) };
    let out = match edge {
        TransferEdge::AB => vec![
            GradedComplex::two_term(
                vec![summand("2", neg(&deg("a2")?))?, summand("3", neg(&deg("b2")?))?],
                summand("1", zero.clone())?,
                vec![pres.word(&["a2"])?, pres.word(&["b2"])?],
                0,
            ),
            GradedComplex::stalk(v("2")?, zero.clone(), 0),
            GradedComplex::stalk(v("3")?, zero.clone(), 0),
        ],
        TransferEdge::BC => vec![
            GradedComplex::stalk(v("1")?, zero.clone(), 0),
            GradedComplex::two_term(
                vec![summand("1", neg(&deg("c1")?))?, summand("3", neg(&deg("d2")?))?],
                summand("2", zero.clone())?,
                vec![pres.word(&["c1"])?, pres.word(&["d2"])?],
                0,
            ),
            GradedComplex::stalk(v("3")?, zero.clone(), 0),
        ],
        TransferEdge::D2aD2b => {
            let d3 = deg("gamma")?;
            let d13 = vadd(&deg("alpha")?, &d3);
            vec![
                GradedComplex::two_term(
                    vec![summand("1", neg(&d3))?, summand("1", neg(&d13))?],
                    summand("0", zero.clone())?,
                    vec![pres.word(&["gamma"])?, pres.word(&["gamma", "alpha"])?],
                    0,
                ),
                GradedComplex::stalk(v("1")?, zero.clone(), 0),
            ]
        }
    };
    Ok(out)
}

/// Target arrow degrees as linear forms in the coordinates of the source
/// grading lattice `H` (its Hermite basis).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransferFormula {
    pub edge: TransferEdge,
    pub source: BlockId,
    pub target: BlockId,
    pub h_basis: Vec<Vec<i64>>,
    /// One linear form per target arrow.
    pub forms: Vec<Vec<i64>>,
    /// Other assignments consistent with every Hom space and the target
    /// relations; empty when the matching is unique.
    pub alternatives: Vec<Vec<Vec<i64>>>,
    /// `homgr(T_i, T_j)` degree vectors.
    pub homs: BTreeMap<(usize, usize), Vec<Vec<i64>>>,
}

impl TransferFormula {
    pub fn compute(edge: TransferEdge, r: u32, c: u8, field: Field) -> Result<Self, ComplexError> {
        let (sid, tid) = edge.blocks(r, c)?;
        let source = make_block_over(sid, field)?;
        let target = make_block_over(tid, field)?;
        let lat = GradingLattice::new(&source)?;
        let h_basis = lat.h_basis().clone();
        let gradings: Vec<DegreeAssignment> = h_basis.iter().map(|h| DegreeAssignment::new(h.clone())).collect();
        let ts = tilting_complex(edge, &source, &gradings)?;
        let mut homs = BTreeMap::new();
        for (i, ti) in ts.iter().enumerate() {
            for (j, tj) in ts.iter().enumerate() {
                homs.insert((i, j), homgr(ti, tj, &source, &gradings)?.degrees);
            }
        }
        let mut solutions = match_arrows(&target, &homs, gradings.len())?;
        let forms = pick(edge, &source, &target, &mut solutions, &gradings)?;
        Ok(TransferFormula { edge, source: sid, target: tid, h_basis, forms, alternatives: solutions, homs })
    }

    fn coords(&self, deg: &DegreeAssignment) -> Result<Vec<i64>, ComplexError> {
        if self.h_basis.is_empty() {
            return if deg.is_zero() { Ok(vec![]) } else { Err(ComplexError::NotHomogeneous) };
        }
        lattice::coordinates(&self.h_basis, deg.as_slice()).map_err(|_| ComplexError::NotHomogeneous)
    }

    fn eval(forms: &[Vec<i64>], y: &[i64]) -> DegreeAssignment {
        DegreeAssignment::new(forms.iter().map(|f| f.iter().zip(y).map(|(a, b)| a * b).sum()).collect())
    }

    pub fn evaluate(&self, deg: &DegreeAssignment) -> Result<DegreeAssignment, ComplexError> {
        Ok(Self::eval(&self.forms, &self.coords(deg)?))
    }

    pub fn evaluate_alternatives(&self, deg: &DegreeAssignment) -> Result<Vec<DegreeAssignment>, ComplexError> {
        let y = self.coords(deg)?;
        Ok(self.alternatives.iter().map(|f| Self::eval(f, &y)).collect())
    }
}

/// Occurrence counts of each arrow in a path.
fn arrow_counts(p: &Path, arrows: usize) -> Vec<i64> {
    let mut c = vec![0; arrows];
    for a in p.arrows() {
        c[a.0] += 1;
    }
    c
}

fn path_degree(counts: &[i64], forms: &[Vec<i64>], k: usize) -> Vec<i64> {
    let mut out = vec![0; k];
    for (n, f) in counts.iter().zip(forms) {
        for (o, x) in out.iter_mut().zip(f) {
            *o += n * x;
        }
    }
    out
}

fn forms_homogeneous(target: &AlgebraPresentation, forms: &[Vec<i64>], k: usize) -> Result<(), String> {
    for slot in 0..k {
        let d = DegreeAssignment::new(forms.iter().map(|f| f[slot]).collect());
        target.check_homogeneous(&d).map_err(|e| e.to_string())?;
    }
    Ok(())
}

/// Every assignment of linear forms to target arrows whose path degrees
/// reproduce each Hom multiset and which is homogeneous on the target.
fn match_arrows(
    target: &AlgebraPresentation,
    homs: &BTreeMap<(usize, usize), Vec<Vec<i64>>>,
    k: usize,
) -> Result<Vec<Vec<Vec<i64>>>, ComplexError> {
    let q = target.quiver();
    let n = q.arrow_count();
    let mut candidates = Vec::with_capacity(n);
    for a in q.arrow_ids() {
        let arr = q.arrow(a);
        let set: BTreeSet<Vec<i64>> = homs.get(&(arr.source.0, arr.target.0)).into_iter().flatten().cloned().collect();
        if set.is_empty() {
            return Err(ComplexError::NoAssignment);
        }
        candidates.push(set.into_iter().collect::<Vec<_>>());
    }
    let paths: Vec<(usize, usize, Vec<i64>)> =
        target.basis().iter().map(|p| (p.source().0, p.target().0, arrow_counts(p, n))).collect();
    let mut solutions = BTreeSet::new();
    let mut choice = vec![0usize; n];
    loop {
        let forms: Vec<Vec<i64>> = choice.iter().zip(&candidates).map(|(&c, cs)| cs[c].clone()).collect();
        let mut got: BTreeMap<(usize, usize), Vec<Vec<i64>>> = BTreeMap::new();
        for (s, t, counts) in &paths {
            got.entry((*s, *t)).or_default().push(path_degree(counts, &forms, k));
        }
        for v in got.values_mut() {
            v.sort();
        }
        let matches = homs.iter().all(|(key, want)| got.get(key).map_or(want.is_empty(), |g| g == want));
        if matches && forms_homogeneous(target, &forms, k).is_ok() {
            solutions.insert(forms);
        }
        // odometer
        let mut i = 0;
        loop {
            if i == n {
                return Ok(solutions.into_iter().collect());
            }
            choice[i] += 1;
            if choice[i] < candidates[i].len() {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}

/// Resolves several consistent matchings. Only the D(2A) edge has a
/// documented tie-break: the target loop keeps the source loop's degree.
fn pick(
    edge: TransferEdge,
    source: &AlgebraPresentation,
    target: &AlgebraPresentation,
    solutions: &mut Vec<Vec<Vec<i64>>>,
    gradings: &[DegreeAssignment],
) -> Result<Vec<Vec<i64>>, ComplexError> {
    match solutions.len() {
        0 => Err(ComplexError::NoAssignment),
        1 => Ok(solutions.remove(0)),
        _ if edge == TransferEdge::D2aD2b => {
            let want = arrow_degree(source, gradings, "alpha")?;
            let a = target.quiver().arrow_id("alpha")?.0;
            let pos = solutions.iter().position(|f| f[a] == want).ok_or_else(|| ambiguous(target, solutions))?;
            Ok(solutions.remove(pos))
        }
        _ => Err(ambiguous(target, solutions)),
    }
}

fn ambiguous(target: &AlgebraPresentation, solutions: &[Vec<Vec<i64>>]) -> ComplexError {
    let q = target.quiver();
    ComplexError::Ambiguous(
        solutions
            .iter()
            .map(|f| {
                let parts: Vec<String> = q.arrows().iter().zip(f).map(|(a, v)| format!("{} = {v:?}", a.name)).collect();
                format!("[{}]", parts.join(", "))
            })
            .collect(),
    )
}

/// The result of transferring one concrete grading.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transfer {
    pub source: BlockId,
    pub target: BlockId,
    pub degrees: DegreeAssignment,
    pub alternatives: Vec<DegreeAssignment>,
}

/// Transfers `deg` on the source block of `edge` to its target block.
pub fn transfer_grading(edge: TransferEdge, r: u32, c: u8, deg: &DegreeAssignment) -> Result<Transfer, ComplexError> {
    let formula = TransferFormula::compute(edge, r, c, Field::GF2)?;
    transfer_with(&formula, deg)
}

pub fn transfer_with(formula: &TransferFormula, deg: &DegreeAssignment) -> Result<Transfer, ComplexError> {
    let degrees = formula.evaluate(deg)?;
    let target = make_block_over(formula.target, Field::GF2)?;
    target.check_homogeneous(&degrees).map_err(|e| ComplexError::TargetInhomogeneous(e.to_string()))?;
    Ok(Transfer {
        source: formula.source,
        target: formula.target,
        degrees,
        alternatives: formula.evaluate_alternatives(deg)?,
    })
}
