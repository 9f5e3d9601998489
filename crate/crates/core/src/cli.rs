//! Command-line front end: argument parsing, dispatch and text/JSON output.
//!
//! Exit codes: 0 on success, 1 on a mathematical mismatch, 2 on usage or
//! input errors. Every JSON object carries `"schema_version": 1`.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::catalog::{all_blocks, known_deviation, known_profile, make_block_over, BlockId, CatalogError, Family, KnownProfile};
use crate::complex::{transfer_grading, ComplexError, TransferEdge};
use crate::dsl::{self, DslError};
use crate::field::{Field, FieldError, Gf};
use crate::graded::{DegreeAssignment, DegreeError, LayerTable};
use crate::grading::{positive_grading_exists, GradingError, GradingLattice};
use crate::hr::{hr_decompose, hr_inverse, hr_mul, HrElement, HrError};
use crate::outer::{self, OuterError, OuterTuple};
use crate::quiver::Quiver;
use crate::rewrite::{AlgebraPresentation, RewriteError};
use crate::tightness::{tightness, TightnessVerdict};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error(transparent)]
    Dsl(Box<DslError>),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error(transparent)]
    Rewrite(#[from] RewriteError),
    #[error(transparent)]
    Grading(#[from] GradingError),
    #[error(transparent)]
    Degree(#[from] DegreeError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Outer(#[from] OuterError),
    #[error(transparent)]
    Hr(#[from] HrError),
}

impl From<DslError> for CliError {
    fn from(e: DslError) -> Self {
        CliError::Dsl(Box::new(e))
    }
}

#[derive(Parser, Debug)]
#[command(name = "gqa", version, about = "Gradings on bound quiver algebras of dihedral type")]
pub struct Cli {
    /// Coefficient field, `gf2`, `gf4`, ... or `gf2^m`.
    #[arg(long, global = true, env = "GQA_FIELD", default_value = "gf2")]
    pub field: String,
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

/// An algebra: a manifest file or a catalog block.
#[derive(Args, Debug, Clone)]
pub struct Input {
    /// Path to a `.gqa` manifest.
    #[arg(long, short)]
    pub file: Option<PathBuf>,
    /// Catalog family (A, B, C, D2A, D2B, D1C).
    #[arg(long, conflicts_with = "file")]
    pub block: Option<Family>,
    #[arg(long, default_value_t = 1)]
    pub r: u32,
    #[arg(long, default_value_t = 0)]
    pub c: u8,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// List the normal-form path basis.
    Basis(Input),
    /// Dimension of the algebra and of each projective.
    Dim(Input),
    /// Radical layers of the projective indecomposables.
    Layers {
        #[command(flatten)]
        input: Input,
        /// `tight`, `zero`, or `name=degree,...`; defaults to the manifest grading.
        #[arg(long)]
        grading: Option<String>,
    },
    /// Grading lattice, homogeneity, positivity and tightness.
    Grade {
        #[command(subcommand)]
        command: GradeCommand,
    },
    /// Transfer a grading along a derived equivalence.
    Transfer {
        #[arg(long)]
        edge: TransferEdge,
        #[arg(long, default_value_t = 1)]
        r: u32,
        #[arg(long, default_value_t = 0)]
        c: u8,
        /// Grading on the source block: `tight`, `zero`, or `name=degree,...`.
        #[arg(long, default_value = "tight")]
        grading: String,
    },
    /// Arithmetic in H_r; elements are comma-separated field elements.
    Hr {
        op: HrOp,
        #[arg(long)]
        r: usize,
        values: Vec<String>,
    },
    /// Normalized outer automorphism coordinates.
    Out {
        op: OutOp,
        #[arg(long)]
        family: Family,
        #[arg(long, default_value_t = 2)]
        r: u32,
        #[arg(long, default_value_t = 0)]
        c: u8,
        /// Seed for the random automorphism used by `normalize`.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Tuples for `mul`, as comma-separated field elements.
        tuples: Vec<String>,
    },
    /// Recompute the summary table of known results and diff it.
    Table {
        #[arg(long, default_value_t = 5)]
        r_max: u32,
    },
}

#[derive(Subcommand, Debug)]
pub enum GradeCommand {
    /// Bases of the homogeneous lattice H and the coboundaries B.
    Lattice(Input),
    /// Check a grading for homogeneity and classify it in H/B.
    Check {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        grading: Option<String>,
    },
    /// Decide whether a positive grading exists.
    Positive(Input),
    /// Decide whether a tight grading exists.
    Tight(Input),
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum HrOp {
    Mul,
    Inv,
    Decompose,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum OutOp {
    Normalize,
    Mul,
}

/// Rendered output and exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub text: String,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run_args<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli),
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            Outcome { code, text: e.to_string() }
        }
    }
}

pub fn run(cli: &Cli) -> Outcome {
    match dispatch(cli) {
        Ok(o) => o,
        Err(e) => {
            let text = if cli.json {
                with_schema(json!({ "error": e.to_string() })).to_string()
            } else {
                format!("error: {e}")
            };
            Outcome { code: 2, text }
        }
    }
}

fn with_schema(v: Value) -> Value {
    let mut m = Map::new();
    m.insert("schema_version".into(), json!(SCHEMA_VERSION));
    if let Value::Object(o) = v {
        m.extend(o);
    }
    Value::Object(m)
}

struct Emit {
    json: bool,
}

impl Emit {
    fn out(&self, text: String, value: Value) -> Outcome {
        self.code(0, text, value)
    }

    fn code(&self, code: i32, text: String, value: Value) -> Outcome {
        let text = if self.json { with_schema(value).to_string() } else { text };
        Outcome { code, text }
    }
}

fn dispatch(cli: &Cli) -> Result<Outcome, CliError> {
    let field = Field::parse(&cli.field)?;
    let emit = Emit { json: cli.json };
    match &cli.command {
        Command::Basis(input) => basis(&emit, &load(input, field)?.0),
        Command::Dim(input) => dim(&emit, &load(input, field)?.0),
        Command::Layers { input, grading } => {
            let (pres, manifest_grading) = load(input, field)?;
            let g = match grading {
                Some(s) => Some(parse_grading(pres.quiver(), s)?),
                None => manifest_grading,
            };
            layers(&emit, &pres, g.as_ref())
        }
        Command::Grade { command } => match command {
            GradeCommand::Lattice(input) => grade_lattice(&emit, &load(input, field)?.0),
            GradeCommand::Check { input, grading } => {
                let (pres, manifest_grading) = load(input, field)?;
                let g = match grading {
                    Some(s) => parse_grading(pres.quiver(), s)?,
                    None => manifest_grading.ok_or_else(|| CliError::Usage("no grading given".into()))?,
                };
                grade_check(&emit, &pres, &g)
            }
            GradeCommand::Positive(input) => grade_positive(&emit, &load(input, field)?.0),
            GradeCommand::Tight(input) => grade_tight(&emit, &load(input, field)?.0),
        },
        Command::Transfer { edge, r, c, grading } => transfer(&emit, *edge, *r, *c, grading),
        Command::Hr { op, r, values } => hr(&emit, field, *op, *r, values),
        Command::Out { op, family, r, c, seed, tuples } => out(&emit, field, *op, *family, *r, *c, *seed, tuples),
        Command::Table { r_max } => table(&emit, *r_max),
    }
}

fn load(input: &Input, field: Field) -> Result<(AlgebraPresentation, Option<DegreeAssignment>), CliError> {
    let manifest = match (&input.file, input.block) {
        (Some(path), _) => {
            let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.clone(), source })?;
            dsl::parse(&text)?
        }
        (None, Some(family)) => {
            dsl::Manifest { source: dsl::Source::Block(BlockId::new(family, input.r, input.c)?), grading: None }
        }
        (None, None) => return Err(CliError::Usage("give --file or --block".into())),
    };
    Ok(manifest.build(field)?)
}

/// `tight` (all ones), `zero`, or `name=degree,...`.
pub fn parse_grading(quiver: &Quiver, spec: &str) -> Result<DegreeAssignment, CliError> {
    match spec.trim() {
        "tight" | "ones" => return Ok(DegreeAssignment::constant(quiver.arrow_count(), 1)),
        "zero" => return Ok(DegreeAssignment::zero(quiver.arrow_count())),
        _ => {}
    }
    let mut pairs = Vec::new();
    for part in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (name, d) = part.split_once('=').ok_or_else(|| CliError::Usage(format!("expected name=degree, got `{part}`")))?;
        let d: i64 = d.trim().parse().map_err(|_| CliError::Usage(format!("bad degree in `{part}`")))?;
        pairs.push((name.trim(), d));
    }
    Ok(DegreeAssignment::from_names(quiver, &pairs)?)
}

fn named(quiver: &Quiver, deg: &DegreeAssignment) -> Value {
    Value::Object(deg.named(quiver).into_iter().map(|(n, d)| (n.to_string(), json!(d))).collect())
}

fn basis(emit: &Emit, pres: &AlgebraPresentation) -> Result<Outcome, CliError> {
    let q = pres.quiver();
    let paths: Vec<String> = pres.basis().iter().map(|p| q.format_path(p)).collect();
    let text = format!("{}: dimension {}\n{}", pres.name(), paths.len(), paths.join("\n"));
    Ok(emit.out(text, json!({ "algebra": pres.name(), "dimension": paths.len(), "basis": paths })))
}

fn dim(emit: &Emit, pres: &AlgebraPresentation) -> Result<Outcome, CliError> {
    let q = pres.quiver();
    let proj: Vec<(String, usize)> =
        q.vertex_ids().map(|v| (q.vertex_name(v).to_string(), pres.basis().iter().filter(|p| p.target() == v).count())).collect();
    let mut text = format!("{}: dimension {}", pres.name(), pres.dimension());
    for (v, d) in &proj {
        text.push_str(&format!("\n  P_{v}: {d}"));
    }
    let pj: Map<String, Value> = proj.into_iter().map(|(v, d)| (v, json!(d))).collect();
    Ok(emit.out(text, json!({ "algebra": pres.name(), "dimension": pres.dimension(), "projectives": pj })))
}

fn layer_json(q: &Quiver, t: &LayerTable) -> Value {
    let layers: Vec<Value> = t
        .layers
        .iter()
        .map(|l| {
            Value::Array(
                l.iter()
                    .map(|f| {
                        let mut o = json!({ "simple": q.vertex_name(f.simple) });
                        if let Some(d) = f.degree.first() {
                            o["degree"] = json!(d);
                        }
                        o
                    })
                    .collect(),
            )
        })
        .collect();
    json!({ "vertex": q.vertex_name(t.vertex), "layers": layers })
}

fn layers(emit: &Emit, pres: &AlgebraPresentation, g: Option<&DegreeAssignment>) -> Result<Outcome, CliError> {
    let q = pres.quiver();
    let gradings: Vec<DegreeAssignment> = g.into_iter().cloned().collect();
    let mut text = String::new();
    let mut tables = Vec::new();
    for v in q.vertex_ids() {
        let t = pres.radical_layers(v, &gradings)?;
        text.push_str(&format!("P_{}:\n{}", q.vertex_name(v), t.render(q)));
        tables.push(layer_json(q, &t));
    }
    Ok(emit.out(text.trim_end().to_string(), json!({ "algebra": pres.name(), "projectives": tables })))
}

fn grade_lattice(emit: &Emit, pres: &AlgebraPresentation) -> Result<Outcome, CliError> {
    let q = pres.quiver();
    let lat = GradingLattice::new(pres)?;
    let names: Vec<&str> = q.arrows().iter().map(|a| a.name.as_str()).collect();
    let rows = |m: &[Vec<i64>]| -> String { m.iter().map(|r| format!("  {r:?}")).collect::<Vec<_>>().join("\n") };
    let text = format!(
        "{}: arrows {:?}\nrank H = {}, rank H/B = {}, torsion = {:?}\nH basis:\n{}\nB basis:\n{}",
        pres.name(),
        names,
        lat.h_rank(),
        lat.rank(),
        lat.torsion(),
        rows(lat.h_basis()),
        rows(lat.b_basis())
    );
    Ok(emit.out(
        text,
        json!({
            "algebra": pres.name(),
            "arrows": names,
            "h_rank": lat.h_rank(),
            "rank": lat.rank(),
            "torsion": lat.torsion(),
            "h_basis": lat.h_basis(),
            "b_basis": lat.b_basis(),
        }),
    ))
}

fn grade_check(emit: &Emit, pres: &AlgebraPresentation, g: &DegreeAssignment) -> Result<Outcome, CliError> {
    let q = pres.quiver();
    match pres.check_homogeneous(g) {
        Err(e) => Ok(emit.code(
            1,
            format!("not homogeneous: {e}"),
            json!({ "homogeneous": false, "grading": named(q, g), "reason": e.to_string() }),
        )),
        Ok(()) => {
            let lat = GradingLattice::new(pres)?;
            let class = lat.classify(g)?;
            let trivial = lat.in_coboundaries(g);
            let text = format!(
                "homogeneous: {}\nclass in H/B: free {:?}, torsion {:?}{}",
                g.display(q),
                class.free,
                class.torsion,
                if trivial { " (Morita-trivial)" } else { "" }
            );
            Ok(emit.out(
                text,
                json!({ "homogeneous": true, "grading": named(q, g), "class": class, "coboundary": trivial }),
            ))
        }
    }
}

fn grade_positive(emit: &Emit, pres: &AlgebraPresentation) -> Result<Outcome, CliError> {
    let q = pres.quiver();
    Ok(match positive_grading_exists(pres)? {
        Some(w) => emit.out(format!("positive grading exists: {}", w.display(q)), json!({ "positive": true, "witness": named(q, &w) })),
        None => emit.out("no positive grading exists".into(), json!({ "positive": false })),
    })
}

fn verdict_json(q: &Quiver, v: &TightnessVerdict) -> Value {
    match v {
        TightnessVerdict::Tight { witness, note } => {
            json!({ "verdict": "tight", "witness": named(q, witness), "note": note })
        }
        TightnessVerdict::NotTight { obstruction } => json!({ "verdict": "not-tight", "obstruction": obstruction }),
        TightnessVerdict::Unknown { reason } => json!({ "verdict": "unknown", "reason": reason }),
    }
}

fn verdict_text(q: &Quiver, v: &TightnessVerdict) -> String {
    match v {
        TightnessVerdict::Tight { witness, note } => {
            let mut s = format!("verdict: TIGHT\nwitness: {}", witness.display(q));
            if let Some(n) = note {
                s.push_str(&format!("\nnote: {n}"));
            }
            s
        }
        TightnessVerdict::NotTight { obstruction } => format!("verdict: NOT-TIGHT\nobstruction: {obstruction}"),
        TightnessVerdict::Unknown { reason } => format!("verdict: UNKNOWN\nreason: {reason}"),
    }
}

fn grade_tight(emit: &Emit, pres: &AlgebraPresentation) -> Result<Outcome, CliError> {
    let v = tightness(pres)?;
    let q = pres.quiver();
    Ok(emit.out(verdict_text(q, &v), verdict_json(q, &v)))
}

fn transfer(emit: &Emit, edge: TransferEdge, r: u32, c: u8, grading: &str) -> Result<Outcome, CliError> {
    let (sid, tid) = edge.blocks(r, c)?;
    let source = make_block_over(sid, Field::GF2)?;
    let target = make_block_over(tid, Field::GF2)?;
    let deg = parse_grading(source.quiver(), grading)?;
    let t = transfer_grading(edge, r, c, &deg)?;
    let tq = target.quiver();
    let mut obj = match named(tq, &t.degrees) {
        Value::Object(o) => o,
        _ => unreachable!(),
    };
    let mut text = format!("{} -> {}: {}", sid, tid, t.degrees.display(tq));
    if !t.alternatives.is_empty() {
        let alts: Vec<Value> = t.alternatives.iter().map(|a| named(tq, a)).collect();
        for a in &t.alternatives {
            text.push_str(&format!("\nalternative: {}", a.display(tq)));
        }
        obj.insert("alternatives".into(), Value::Array(alts));
    }
    Ok(emit.out(text, Value::Object(obj)))
}

fn parse_elements(field: Field, s: &str) -> Result<Vec<Gf>, CliError> {
    s.split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| {
            let v: u64 = p.parse().map_err(|_| CliError::Usage(format!("bad field element `{p}`")))?;
            Ok(field.element(v)?)
        })
        .collect()
}

fn hr_element(field: Field, r: usize, s: &str) -> Result<HrElement, CliError> {
    let coords = parse_elements(field, s)?;
    if coords.len() != r {
        return Err(CliError::Usage(format!("expected {r} coordinates, got {}", coords.len())));
    }
    Ok(HrElement::new(coords)?)
}

fn bits(x: &[Gf]) -> Value {
    json!(x.iter().map(|g| g.bits()).collect::<Vec<_>>())
}

fn hr(emit: &Emit, field: Field, op: HrOp, r: usize, values: &[String]) -> Result<Outcome, CliError> {
    let need = if matches!(op, HrOp::Mul) { 2 } else { 1 };
    if values.len() != need {
        return Err(CliError::Usage(format!("expected {need} element(s), got {}", values.len())));
    }
    let xs: Vec<HrElement> = values.iter().map(|v| hr_element(field, r, v)).collect::<Result<_, _>>()?;
    Ok(match op {
        HrOp::Mul => {
            let p = hr_mul(&xs[0], &xs[1])?;
            emit.out(format!("{} * {} = {p}", xs[0], xs[1]), json!({ "op": "mul", "result": bits(p.coords()) }))
        }
        HrOp::Inv => {
            let p = hr_inverse(&xs[0]);
            emit.out(format!("{}^-1 = {p}", xs[0]), json!({ "op": "inv", "result": bits(p.coords()) }))
        }
        HrOp::Decompose => {
            let (l, k) = hr_decompose(&xs[0]);
            emit.out(
                format!("{} = {l} * {k}", xs[0]),
                json!({ "op": "decompose", "unipotent": bits(l.coords()), "torus": bits(k.coords()) }),
            )
        }
    })
}

fn parse_tuple(id: BlockId, field: Field, s: &str) -> Result<OuterTuple, CliError> {
    let v = parse_elements(field, s)?;
    let r = id.r as usize;
    let want = |n: usize| -> Result<(), CliError> {
        if v.len() == n {
            Ok(())
        } else {
            Err(CliError::Usage(format!("{id} tuples have {n} coordinates, got {}", v.len())))
        }
    };
    let t = match (id.family, id.c) {
        (Family::C, _) => {
            want(3 + r)?;
            OuterTuple::C { alpha: [v[0], v[1], v[2]], gamma: HrElement::new(v[3..].to_vec())? }
        }
        (Family::D2B, 0) => {
            want(3 + r)?;
            OuterTuple::D2B0 { a2: v[0], a3: v[1], v: v[2], d: HrElement::new(v[3..].to_vec())? }
        }
        (Family::D2B, _) => {
            want(2 + r)?;
            OuterTuple::D2B1 { a2: v[0], a3: v[1], d: HrElement::new(v[2..].to_vec())? }
        }
        (Family::D1C, _) => {
            want(3)?;
            if v[0].bits() > 1 {
                return Err(CliError::Usage("D1C flag must be 0 (diagonal) or 1 (antidiagonal)".into()));
            }
            OuterTuple::D1C { swap: v[0].is_one(), entries: [v[1], v[2]] }
        }
        _ => return Err(OuterError::Unsupported(id.to_string()).into()),
    };
    t.validate()?;
    Ok(t)
}

fn tuple_json(t: &OuterTuple) -> Value {
    match t {
        OuterTuple::C { alpha, gamma } => json!({ "family": "C", "alpha": bits(alpha), "gamma": bits(gamma.coords()) }),
        OuterTuple::D2B0 { a2, a3, v, d } => {
            json!({ "family": "D2B", "c": 0, "a2": a2.bits(), "a3": a3.bits(), "v": v.bits(), "d": bits(d.coords()) })
        }
        OuterTuple::D2B1 { a2, a3, d } => json!({ "family": "D2B", "c": 1, "a2": a2.bits(), "a3": a3.bits(), "d": bits(d.coords()) }),
        OuterTuple::D1C { swap, entries } => json!({ "family": "D1C", "antidiagonal": swap, "entries": bits(entries) }),
    }
}

#[allow(clippy::too_many_arguments)]
fn out(emit: &Emit, field: Field, op: OutOp, family: Family, r: u32, c: u8, seed: u64, tuples: &[String]) -> Result<Outcome, CliError> {
    let id = BlockId::new(family, r, c)?;
    let pres = make_block_over(id, field)?;
    match op {
        OutOp::Normalize => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let phi = outer::random_automorphism(&pres, &mut rng)?;
            let u = outer::random_vertex_unit(&pres, &mut rng);
            let psi = outer::compose(&pres, &outer::inner(&pres, &u)?, &phi);
            let t = outer::normalize_outer(&pres, &phi)?;
            let t2 = outer::normalize_outer(&pres, &psi)?;
            let q = pres.quiver();
            let mut text = format!("random automorphism of {id} over {field} (seed {seed}):");
            for a in q.arrow_ids() {
                text.push_str(&format!("\n  {} -> {}", q.arrow(a).name, q.format_element(&phi.arrows[a.0])));
            }
            text.push_str(&format!("\nnormalized: {t}\ninner perturbation gives the same class: {}", t == t2));
            let code = if t == t2 { 0 } else { 1 };
            Ok(emit.code(code, text, json!({ "block": id.to_string(), "tuple": tuple_json(&t), "coset_invariant": t == t2 })))
        }
        OutOp::Mul => {
            if tuples.len() != 2 {
                return Err(CliError::Usage(format!("expected 2 tuples, got {}", tuples.len())));
            }
            let t1 = parse_tuple(id, field, &tuples[0])?;
            let t2 = parse_tuple(id, field, &tuples[1])?;
            let p = outer::outer_mul(&t1, &t2)?;
            let composed = outer::compose(&pres, &outer::lift(&pres, &t1)?, &outer::lift(&pres, &t2)?);
            let check = outer::normalize_outer(&pres, &composed)?;
            let agree = check == p;
            let text = format!("{t1} * {t2} = {p}\nagrees with composing lifted automorphisms: {agree}");
            Ok(emit.code(i32::from(!agree), text, json!({ "result": tuple_json(&p), "agrees": agree })))
        }
    }
}

/// How a recomputed table cell compares with the known results.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CellStatus {
    Match,
    /// A documented difference, with its reason.
    Deviation(String),
    Mismatch(Vec<&'static str>),
}

/// One recomputed row of the summary table.
#[derive(Clone, Debug)]
pub struct Cell {
    pub block: BlockId,
    pub dimension: usize,
    pub rank: usize,
    pub torsion: Vec<i64>,
    pub positive: bool,
    pub tight: TightnessVerdict,
    pub known: KnownProfile,
    pub status: CellStatus,
}

pub fn compute_cell(id: BlockId) -> Result<Cell, CliError> {
    let pres = make_block_over(id, Field::GF2)?;
    let lat = GradingLattice::new(&pres)?;
    let positive = positive_grading_exists(&pres)?.is_some();
    let tight = tightness(&pres)?;
    let known = known_profile(id);
    let (k_nontrivial, k_positive, k_tight) = known.at(id);
    let mut diffs = Vec::new();
    if (lat.rank() > 0) != k_nontrivial {
        diffs.push("nontrivial");
    }
    if positive != k_positive {
        diffs.push("positive");
    }
    if tight.as_bool() != Some(k_tight) {
        diffs.push("tight");
    }
    if lat.rank() != known.torus_rank {
        diffs.push("torus");
    }
    let status = match (diffs.is_empty(), known_deviation(id)) {
        (true, _) => CellStatus::Match,
        (false, Some(reason)) if diffs == ["tight"] => CellStatus::Deviation(reason.to_string()),
        _ => CellStatus::Mismatch(diffs),
    };
    Ok(Cell {
        block: id,
        dimension: pres.dimension(),
        rank: lat.rank(),
        torsion: lat.torsion(),
        positive,
        tight,
        known,
        status,
    })
}

fn yn(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn table(emit: &Emit, r_max: u32) -> Result<Outcome, CliError> {
    if r_max == 0 {
        return Err(CliError::Usage("--r-max must be at least 1".into()));
    }
    let cells: Vec<Cell> = all_blocks(r_max).into_par_iter().map(compute_cell).collect::<Result<_, _>>()?;
    let mut text = format!(
        "{:<10} {:>4} {:>10} {:>9} {:>10} {:>6}  status\n",
        "block", "dim", "nontrivial", "positive", "tight", "torus"
    );
    let mut rows = Vec::new();
    let mut mismatches = 0;
    for c in &cells {
        let status = match &c.status {
            CellStatus::Match => "ok".to_string(),
            CellStatus::Deviation(reason) => format!("documented deviation: {reason}"),
            CellStatus::Mismatch(d) => {
                mismatches += 1;
                format!("MISMATCH in {}", d.join(", "))
            }
        };
        text.push_str(&format!(
            "{:<10} {:>4} {:>10} {:>9} {:>10} {:>6}  {status}\n",
            c.block.to_string(),
            c.dimension,
            yn(c.rank > 0),
            yn(c.positive),
            c.tight.label(),
            c.rank,
        ));
        let (kn, kp, kt) = c.known.at(c.block);
        rows.push(json!({
            "block": c.block.to_string(),
            "dimension": c.dimension,
            "computed": { "nontrivial": c.rank > 0, "positive": c.positive, "tight": c.tight.as_bool(), "torus_rank": c.rank },
            "known": { "nontrivial": kn, "positive": kp, "tight": kt, "torus_rank": c.known.torus_rank },
            "status": status,
        }));
    }
    text.push_str(&format!("{} cells, {mismatches} mismatches", cells.len()));
    let code = i32::from(mismatches > 0);
    Ok(emit.code(code, text, json!({ "cells": rows, "mismatches": mismatches })))
}
