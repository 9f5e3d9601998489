//! Text format for algebra presentations.
//!
//! ```text
//! algebra D1C {
//!   vertices: 1;
//!   arrows: a:1->1, b:1->1;
//!   relations: a^2 = 0; b^2 = 0; (a*b)^3 = (b*a)^3;
//! }
//! grading { a=1; b=1; }
//! ```
//!
//! A catalog block may be referenced instead: `block D2A(r=3, c=1);`.
//! Paths are written left to right, `^N` repeats a single arrow or a
//! parenthesized word, and integer scalars are read as bit patterns in
//! GF(2^m). `#` starts a comment.

// Parse errors carry source positions and names; they are built only on the error path.
#![allow(clippy::result_large_err)]

use std::fmt;

use thiserror::Error;

use crate::catalog::{self, BlockId, CatalogError, Family};
use crate::field::Field;
use crate::graded::{DegreeAssignment, DegreeError};
use crate::quiver::{format_word, AlgebraElement, Quiver, QuiverError};
use crate::rewrite::{AlgebraPresentation, Relation, RewriteError};

/// Default bound on path lengths for non-catalog presentations.
pub const DEFAULT_MAX_LEN: usize = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DslError {
    #[error("{line}:{col}: {message}; expected one of: {}", expected.join(", "))]
    Syntax { line: usize, col: usize, message: String, expected: Vec<String> },
    #[error("{line}:{col}: unknown arrow {name}")]
    UnknownArrow { line: usize, col: usize, name: String },
    #[error("{line}:{col}: exponent 0 is not allowed")]
    ZeroExponent { line: usize, col: usize },
    #[error("{line}:{col}: `{word}` is not a path: `{left}` ends at {end} but `{right}` starts at {start}")]
    NotComposable { line: usize, col: usize, word: String, left: String, end: String, right: String, start: String },
    #[error("{line}:{col}: non-parallel relation: `{first}` runs {first_source}->{first_target}, `{second}` runs {second_source}->{second_target}")]
    NonParallel {
        line: usize,
        col: usize,
        first: String,
        first_source: String,
        first_target: String,
        second: String,
        second_source: String,
        second_target: String,
    },
    #[error("{line}:{col}: {message}")]
    Semantic { line: usize, col: usize, message: String },
    #[error(transparent)]
    Quiver(#[from] QuiverError),
    #[error(transparent)]
    Rewrite(#[from] RewriteError),
    #[error(transparent)]
    Degree(#[from] DegreeError),
    #[error(transparent)]
    Catalog(#[from] Box<CatalogError>),
}

/// One term of a relation side: an integer scalar times a word of arrows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub scalar: u64,
    pub word: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationSpec {
    pub left: Vec<Term>,
    pub right: Vec<Term>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraSpec {
    pub name: String,
    pub vertices: Vec<String>,
    pub arrows: Vec<(String, String, String)>,
    pub relations: Vec<RelationSpec>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Source {
    Algebra(AlgebraSpec),
    Block(BlockId),
}

/// A parsed input file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Manifest {
    pub source: Source,
    pub grading: Option<Vec<(String, i64)>>,
}

impl Manifest {
    /// Builds the presentation and the attached grading, if any.
    pub fn build(&self, field: Field) -> Result<(AlgebraPresentation, Option<DegreeAssignment>), DslError> {
        let pres = match &self.source {
            Source::Block(id) => catalog::make_block_over(*id, field).map_err(Box::new)?,
            Source::Algebra(spec) => spec.build(field, DEFAULT_MAX_LEN)?,
        };
        let grading = match &self.grading {
            None => None,
            Some(pairs) => {
                let pairs: Vec<(&str, i64)> = pairs.iter().map(|(n, d)| (n.as_str(), *d)).collect();
                Some(DegreeAssignment::from_names(pres.quiver(), &pairs)?)
            }
        };
        Ok((pres, grading))
    }

    pub fn block(&self) -> Option<BlockId> {
        match self.source {
            Source::Block(id) => Some(id),
            Source::Algebra(_) => None,
        }
    }
}

impl AlgebraSpec {
    pub fn quiver(&self) -> Result<Quiver, QuiverError> {
        let mut q = Quiver::new(&self.vertices)?;
        for (name, s, t) in &self.arrows {
            q.add_arrow(name, s, t)?;
        }
        Ok(q)
    }

    pub fn build(&self, field: Field, max_len: usize) -> Result<AlgebraPresentation, DslError> {
        let quiver = self.quiver()?;
        let side = |terms: &[Term]| -> Result<AlgebraElement, DslError> {
            let mut x = AlgebraElement::zero();
            for t in terms {
                let names: Vec<&str> = t.word.iter().map(String::as_str).collect();
                let p = quiver.path_by_names(&names)?.ok_or_else(|| DslError::Semantic {
                    line: 0,
                    col: 0,
                    message: format!("`{}` is not a path", names.join("*")),
                })?;
                x.add_term(p, field.from_bits_truncated(t.scalar));
            }
            Ok(x)
        };
        let mut relations = Vec::new();
        for r in &self.relations {
            relations.push(Relation::new(side(&r.left)?, side(&r.right)?));
        }
        Ok(AlgebraPresentation::complete(&self.name, quiver, field, relations, max_len)?)
    }
}

fn print_side(terms: &[Term]) -> String {
    if terms.is_empty() {
        return "0".to_string();
    }
    let parts: Vec<String> = terms
        .iter()
        .map(|t| {
            let names: Vec<&str> = t.word.iter().map(String::as_str).collect();
            let w = format_word(&names);
            if t.scalar == 1 {
                w
            } else {
                format!("{}*{}", t.scalar, w)
            }
        })
        .collect();
    parts.join(" + ")
}

impl fmt::Display for Manifest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.source {
            Source::Block(id) => {
                write!(f, "block {}(r={}", id.family, id.r)?;
                if id.family.has_scalar() {
                    write!(f, ", c={}", id.c)?;
                }
                writeln!(f, ");")?;
            }
            Source::Algebra(spec) => {
                writeln!(f, "algebra {} {{", spec.name)?;
                writeln!(f, "  vertices: {};", spec.vertices.join(", "))?;
                let arrows: Vec<String> = spec.arrows.iter().map(|(n, s, t)| format!("{n}:{s}->{t}")).collect();
                writeln!(f, "  arrows: {};", arrows.join(", "))?;
                write!(f, "  relations:")?;
                for r in &spec.relations {
                    write!(f, " {} = {};", print_side(&r.left), print_side(&r.right))?;
                }
                writeln!(f)?;
                writeln!(f, "}}")?;
            }
        }
        if let Some(g) = &self.grading {
            let parts: Vec<String> = g.iter().map(|(n, d)| format!("{n}={d};")).collect();
            writeln!(f, "grading {{ {} }}", parts.join(" "))?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Word(String),
    Punct(&'static str),
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Word(w) => format!("`{w}`"),
            Tok::Punct(p) => format!("`{p}`"),
            Tok::Eof => "end of input".to_string(),
        }
    }
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

const PUNCT: [&str; 13] = ["->", "{", "}", ":", ";", ",", "=", "+", "*", "^", "(", ")", "-"];

fn lex(text: &str) -> Result<Vec<Spanned>, DslError> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        if c.is_ascii_alphanumeric() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let w: String = chars[start..i].iter().collect();
            out.push(Spanned { tok: Tok::Word(w), line, col });
            col += i - start;
            continue;
        }
        let rest: String = chars[i..chars.len().min(i + 2)].iter().collect();
        let Some(p) = PUNCT.iter().find(|p| rest.starts_with(**p)) else {
            return Err(DslError::Syntax {
                line,
                col,
                message: format!("unexpected character `{c}`"),
                expected: vec!["identifier".into(), "punctuation".into()],
            });
        };
        out.push(Spanned { tok: Tok::Punct(p), line, col });
        i += p.len();
        col += p.len();
    }
    out.push(Spanned { tok: Tok::Eof, line, col });
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

/// A word under construction, with the position of each arrow for messages.
type Word = Vec<(String, usize, usize)>;

impl Parser {
    fn peek(&self) -> &Spanned {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> Spanned {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn fail<T>(&self, expected: &[&str]) -> Result<T, DslError> {
        let t = self.peek();
        Err(DslError::Syntax {
            line: t.line,
            col: t.col,
            message: format!("unexpected {}", t.tok.describe()),
            expected: expected.iter().map(|s| s.to_string()).collect(),
        })
    }

    fn at(&self, p: &str) -> bool {
        matches!(&self.peek().tok, Tok::Punct(q) if *q == p)
    }

    fn at_word(&self, w: &str) -> bool {
        matches!(&self.peek().tok, Tok::Word(x) if x == w)
    }

    fn expect(&mut self, p: &'static str) -> Result<Spanned, DslError> {
        if self.at(p) {
            Ok(self.bump())
        } else {
            self.fail(&[p])
        }
    }

    fn keyword(&mut self, w: &str) -> Result<(), DslError> {
        if self.at_word(w) {
            self.bump();
            Ok(())
        } else {
            self.fail(&[w])
        }
    }

    fn ident(&mut self, what: &str) -> Result<Spanned, DslError> {
        match &self.peek().tok {
            Tok::Word(_) => Ok(self.bump()),
            _ => self.fail(&[what]),
        }
    }

    fn word_text(t: &Spanned) -> String {
        match &t.tok {
            Tok::Word(w) => w.clone(),
            other => other.describe(),
        }
    }

    fn integer(&mut self) -> Result<(u64, usize, usize), DslError> {
        let t = self.peek().clone();
        if let Tok::Word(w) = &t.tok {
            if let Ok(n) = w.parse::<u64>() {
                self.bump();
                return Ok((n, t.line, t.col));
            }
        }
        self.fail(&["integer"])
    }

    fn signed(&mut self) -> Result<i64, DslError> {
        let neg = if self.at("-") {
            self.bump();
            true
        } else {
            false
        };
        let (n, line, col) = self.integer()?;
        let n = i64::try_from(n).map_err(|_| DslError::Semantic { line, col, message: "integer too large".into() })?;
        Ok(if neg { -n } else { n })
    }

    fn manifest(&mut self) -> Result<Manifest, DslError> {
        let source = if self.at_word("algebra") {
            Source::Algebra(self.algebra()?)
        } else if self.at_word("block") {
            Source::Block(self.block()?)
        } else {
            return self.fail(&["algebra", "block"]);
        };
        let grading = if self.at_word("grading") { Some(self.grading()?) } else { None };
        if self.peek().tok != Tok::Eof {
            return self.fail(if grading.is_some() { &["end of input"] } else { &["grading", "end of input"] });
        }
        Ok(Manifest { source, grading })
    }

    fn block(&mut self) -> Result<BlockId, DslError> {
        self.keyword("block")?;
        let name = self.ident("family name")?;
        let family: Family = Self::word_text(&name).parse().map_err(|_| DslError::Semantic {
            line: name.line,
            col: name.col,
            message: format!("unknown family `{}` (expected A, B, C, D2A, D2B, D1C)", Self::word_text(&name)),
        })?;
        self.expect("(")?;
        let (mut r, mut c) = (None, 0u8);
        loop {
            let key = self.ident("parameter")?;
            self.expect("=")?;
            let (v, line, col) = self.integer()?;
            match Self::word_text(&key).as_str() {
                "r" => r = Some(v),
                "c" => c = u8::try_from(v).map_err(|_| DslError::Semantic { line, col, message: "c must be 0 or 1".into() })?,
                other => {
                    return Err(DslError::Semantic {
                        line: key.line,
                        col: key.col,
                        message: format!("unknown parameter `{other}` (expected r, c)"),
                    })
                }
            }
            if self.at(",") {
                self.bump();
                continue;
            }
            break;
        }
        let close = self.expect(")")?;
        if self.at(";") {
            self.bump();
        }
        let r = r.ok_or_else(|| DslError::Semantic { line: close.line, col: close.col, message: "missing parameter r".into() })?;
        let r = u32::try_from(r).map_err(|_| DslError::Semantic { line: close.line, col: close.col, message: "r too large".into() })?;
        BlockId::new(family, r, c).map_err(|e| DslError::Semantic { line: name.line, col: name.col, message: e.to_string() })
    }

    fn grading(&mut self) -> Result<Vec<(String, i64)>, DslError> {
        self.keyword("grading")?;
        self.expect("{")?;
        let mut out = Vec::new();
        while !self.at("}") {
            let name = self.ident("arrow name")?;
            self.expect("=")?;
            let d = self.signed()?;
            out.push((Self::word_text(&name), d));
            if !self.at("}") {
                self.expect(";")?;
            }
        }
        self.expect("}")?;
        Ok(out)
    }

    fn section(&mut self, name: &str) -> Result<(), DslError> {
        self.keyword(name)?;
        self.expect(":")?;
        Ok(())
    }

    fn algebra(&mut self) -> Result<AlgebraSpec, DslError> {
        self.keyword("algebra")?;
        let name = Self::word_text(&self.ident("algebra name")?);
        self.expect("{")?;
        self.section("vertices")?;
        let mut vertices = vec![Self::word_text(&self.ident("vertex id")?)];
        while self.at(",") {
            self.bump();
            vertices.push(Self::word_text(&self.ident("vertex id")?));
        }
        self.expect(";")?;
        self.section("arrows")?;
        let mut arrows = Vec::new();
        let mut positions = Vec::new();
        loop {
            let a = self.ident("arrow name")?;
            let an = Self::word_text(&a);
            if !an.starts_with(|c: char| c.is_ascii_alphabetic()) {
                return Err(DslError::Semantic { line: a.line, col: a.col, message: format!("arrow name `{an}` must start with a letter") });
            }
            self.expect(":")?;
            let s = self.ident("vertex id")?;
            self.expect("->")?;
            let t = self.ident("vertex id")?;
            for v in [&s, &t] {
                let vn = Self::word_text(v);
                if !vertices.contains(&vn) {
                    return Err(DslError::Semantic { line: v.line, col: v.col, message: format!("unknown vertex {vn}") });
                }
            }
            if arrows.iter().any(|(n, _, _)| *n == an) {
                return Err(DslError::Semantic { line: a.line, col: a.col, message: format!("duplicate arrow {an}") });
            }
            positions.push((a.line, a.col));
            arrows.push((an, Self::word_text(&s), Self::word_text(&t)));
            if self.at(",") {
                self.bump();
                continue;
            }
            break;
        }
        self.expect(";")?;
        let mut spec = AlgebraSpec { name, vertices, arrows, relations: Vec::new() };
        self.section("relations")?;
        while !self.at("}") {
            let start = self.peek().clone();
            let left = self.expr(&spec)?;
            self.expect("=")?;
            let right = self.expr(&spec)?;
            if !self.at("}") {
                self.expect(";")?;
            }
            let rel = RelationSpec {
                left: left.iter().map(|(s, w)| Term { scalar: *s, word: w.iter().map(|x| x.0.clone()).collect() }).collect(),
                right: right.iter().map(|(s, w)| Term { scalar: *s, word: w.iter().map(|x| x.0.clone()).collect() }).collect(),
            };
            check_parallel(&spec, &rel, start.line, start.col)?;
            spec.relations.push(rel);
        }
        self.expect("}")?;
        Ok(spec)
    }

    fn expr(&mut self, spec: &AlgebraSpec) -> Result<Vec<(u64, Word)>, DslError> {
        let mut terms = Vec::new();
        loop {
            if let Some(t) = self.term(spec)? {
                terms.push(t);
            }
            if self.at("+") {
                self.bump();
                continue;
            }
            break;
        }
        Ok(terms)
    }

    /// `[scalar *] factor (* factor)*`, or a bare scalar (only 0 is useful).
    fn term(&mut self, spec: &AlgebraSpec) -> Result<Option<(u64, Word)>, DslError> {
        let mut scalar = 1u64;
        if let Tok::Word(w) = &self.peek().tok {
            if w.starts_with(|c: char| c.is_ascii_digit()) {
                scalar = self.integer()?.0;
                if !self.at("*") {
                    if scalar == 0 {
                        return Ok(None);
                    }
                    let t = self.peek();
                    return Err(DslError::Semantic {
                        line: t.line,
                        col: t.col,
                        message: "a nonzero scalar must multiply a path".into(),
                    });
                }
                self.bump();
            }
        }
        let mut word = self.factor(spec)?;
        while self.at("*") {
            self.bump();
            word.extend(self.factor(spec)?);
        }
        check_word(spec, &word)?;
        Ok(if scalar == 0 { None } else { Some((scalar, word)) })
    }

    fn factor(&mut self, spec: &AlgebraSpec) -> Result<Word, DslError> {
        let base: Word = if self.at("(") {
            self.bump();
            let mut w = self.factor(spec)?;
            while self.at("*") {
                self.bump();
                w.extend(self.factor(spec)?);
            }
            self.expect(")")?;
            w
        } else {
            let t = self.peek().clone();
            match &t.tok {
                Tok::Word(name) if name.starts_with(|c: char| c.is_ascii_alphabetic()) => {
                    if !spec.arrows.iter().any(|(n, _, _)| n == name) {
                        return Err(DslError::UnknownArrow { line: t.line, col: t.col, name: name.clone() });
                    }
                    self.bump();
                    vec![(name.clone(), t.line, t.col)]
                }
                _ => return self.fail(&["arrow name", "("]),
            }
        };
        if self.at("^") {
            self.bump();
            let (n, line, col) = self.integer()?;
            if n == 0 {
                return Err(DslError::ZeroExponent { line, col });
            }
            let mut w = Vec::new();
            for _ in 0..n {
                w.extend(base.iter().cloned());
            }
            return Ok(w);
        }
        Ok(base)
    }
}

fn endpoints<'a>(spec: &'a AlgebraSpec, word: &[String]) -> (&'a str, &'a str) {
    let find = |n: &String| spec.arrows.iter().find(|(a, _, _)| a == n).unwrap();
    (find(&word[0]).1.as_str(), find(word.last().unwrap()).2.as_str())
}

fn check_word(spec: &AlgebraSpec, word: &Word) -> Result<(), DslError> {
    for pair in word.windows(2) {
        let (l, r) = (&pair[0], &pair[1]);
        let left = spec.arrows.iter().find(|(a, _, _)| *a == l.0).unwrap();
        let right = spec.arrows.iter().find(|(a, _, _)| *a == r.0).unwrap();
        if left.2 != right.1 {
            let names: Vec<&str> = word.iter().map(|x| x.0.as_str()).collect();
            return Err(DslError::NotComposable {
                line: r.1,
                col: r.2,
                word: names.join("*"),
                left: l.0.clone(),
                end: left.2.clone(),
                right: r.0.clone(),
                start: right.1.clone(),
            });
        }
    }
    Ok(())
}

fn check_parallel(spec: &AlgebraSpec, rel: &RelationSpec, line: usize, col: usize) -> Result<(), DslError> {
    let terms: Vec<&Term> = rel.left.iter().chain(&rel.right).collect();
    let Some(first) = terms.first() else { return Ok(()) };
    let (s0, t0) = endpoints(spec, &first.word);
    for t in &terms[1..] {
        let (s, e) = endpoints(spec, &t.word);
        if (s, e) != (s0, t0) {
            let fmtw = |w: &[String]| format_word(&w.iter().map(String::as_str).collect::<Vec<_>>());
            return Err(DslError::NonParallel {
                line,
                col,
                first: fmtw(&first.word),
                first_source: s0.into(),
                first_target: t0.into(),
                second: fmtw(&t.word),
                second_source: s.into(),
                second_target: e.into(),
            });
        }
    }
    Ok(())
}

pub fn parse(text: &str) -> Result<Manifest, DslError> {
    let toks = lex(text)?;
    Parser { toks, pos: 0 }.manifest()
}
