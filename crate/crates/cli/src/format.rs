//! The TOML configuration format.
//!
//! ```toml
//! name = "example"
//! curves = ["A", "B", "C"]
//! edges = [["A", "B", 1], ["B", "C", 2]]
//! reference = "H"                # optional
//!
//! [[generators]]                 # extra lattice generators
//! name = "half"
//! terms = [["A", 1, 2], ["C", 1, 2]]
//!
//! [[classes]]                    # named classes, no effect on the lattice
//! name = "F"
//! null_vector = ["A", "B"]       # primitive null vector of a sub-diagram
//! scale = [1, 2]                 # optional rational factor
//!
//! [[sequences]]
//! name = "main"
//! blocks = [{ half_fiber = "F", tail = ["C"] }]
//! ```
//!
//! Coefficients are `[name, numerator, denominator]` triples. `[[golden]]`
//! tables hold expected coefficient lists for the scenario runner.

use std::collections::BTreeMap;
use std::fmt;

use enriques_core::{build_ambient, AmbientModel, BigInt, BigRational, CurveConfig, SequenceBlock};
use num_traits::{One, Zero};
use serde::Deserialize;
use toml::Spanned;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: Option<usize>,
    pub field: String,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(l) => write!(f, "line {l}, {}: {}", self.field, self.message),
            None => write!(f, "{}: {}", self.field, self.message),
        }
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFile {
    name: Option<String>,
    #[serde(default)]
    curves: Vec<Spanned<String>>,
    #[serde(default)]
    edges: Vec<Spanned<(String, String, u32)>>,
    #[serde(default)]
    generators: Vec<Spanned<RawClass>>,
    #[serde(default)]
    classes: Vec<Spanned<RawClass>>,
    #[serde(default)]
    sequences: Vec<Spanned<RawSequence>>,
    reference: Option<Spanned<String>>,
    #[serde(default)]
    golden: Vec<Spanned<Golden>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawClass {
    name: String,
    #[serde(default)]
    terms: Vec<(String, i64, i64)>,
    null_vector: Option<Vec<String>>,
    scale: Option<(i64, i64)>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSequence {
    name: String,
    blocks: Vec<RawBlock>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBlock {
    half_fiber: String,
    #[serde(default)]
    tail: Vec<String>,
}

/// Expected integer coefficients over curves, with their provenance.
#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Golden {
    pub id: String,
    pub origin: String,
    pub anchor: String,
    pub half_fiber: Option<String>,
    #[serde(default)]
    pub values: BTreeMap<String, i64>,
    /// Curves whose value is computed and reported, not asserted.
    #[serde(default)]
    pub unlabeled: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SequenceSpec {
    pub name: String,
    pub blocks: Vec<SequenceBlock>,
}

#[derive(Debug, Clone)]
pub struct Document {
    pub name: String,
    pub config: CurveConfig,
    pub sequences: Vec<SequenceSpec>,
    pub reference: Option<String>,
    pub goldens: Vec<Golden>,
}

impl Document {
    pub fn model(&self) -> enriques_core::Result<AmbientModel> {
        build_ambient(&self.config)
    }

    pub fn sequence(&self, name: &str) -> Option<&SequenceSpec> {
        self.sequences.iter().find(|s| s.name == name)
    }

    pub fn golden(&self, id: &str) -> Option<&Golden> {
        self.goldens.iter().find(|g| g.id == id)
    }
}

struct Ctx<'a> {
    src: &'a str,
}

impl Ctx<'_> {
    fn line(&self, offset: usize) -> usize {
        self.src[..offset.min(self.src.len())].matches('\n').count() + 1
    }

    fn err<T>(
        &self,
        span: Option<std::ops::Range<usize>>,
        field: impl Into<String>,
        message: impl fmt::Display,
    ) -> Result<T, ParseError> {
        Err(ParseError { line: span.map(|s| self.line(s.start)), field: field.into(), message: message.to_string() })
    }
}

fn fraction(num: i64, den: i64) -> Option<BigRational> {
    (den > 0).then(|| BigRational::new(BigInt::from(num), BigInt::from(den)))
}

pub fn parse_document(src: &str) -> Result<Document, ParseError> {
    let ctx = Ctx { src };
    let raw: RawFile = toml::from_str(src).map_err(|e| ParseError {
        line: e.span().map(|s| ctx.line(s.start)),
        field: "document".into(),
        message: e.message().trim().to_string(),
    })?;

    if raw.curves.is_empty() {
        return ctx.err(None, "curves", "no curves");
    }
    let mut names: Vec<String> = Vec::new();
    for (i, c) in raw.curves.iter().enumerate() {
        if names.contains(c.get_ref()) {
            return ctx.err(Some(c.span()), format!("curves[{i}]"), format!("duplicate name `{}`", c.get_ref()));
        }
        names.push(c.get_ref().clone());
    }
    let mut config = CurveConfig::new(names).expect("names checked for duplicates");

    for (i, e) in raw.edges.iter().enumerate() {
        let (a, b, m) = e.get_ref();
        if let Err(err) = config.add_edge(a, b, *m) {
            return ctx.err(Some(e.span()), format!("edges[{i}] [{a}, {b}, {m}]"), err);
        }
    }

    for (section, list, is_generator) in [("generators", &raw.generators, true), ("classes", &raw.classes, false)] {
        for (i, c) in list.iter().enumerate() {
            let field = format!("{section}[{i}] `{}`", c.get_ref().name);
            let coeffs = match resolve_class(&config, c.get_ref()) {
                Ok(v) => v,
                Err(msg) => return ctx.err(Some(c.span()), field, msg),
            };
            let added = if is_generator {
                config.add_generator(&c.get_ref().name, coeffs)
            } else {
                config.add_class(&c.get_ref().name, coeffs)
            };
            if let Err(err) = added {
                return ctx.err(Some(c.span()), field, err);
            }
        }
    }

    let mut sequences = Vec::new();
    for (i, s) in raw.sequences.iter().enumerate() {
        let field = format!("sequences[{i}] `{}`", s.get_ref().name);
        let mut blocks = Vec::new();
        for b in &s.get_ref().blocks {
            if !config.is_declared(&b.half_fiber) {
                return ctx.err(Some(s.span()), field, format!("unknown half-fiber `{}`", b.half_fiber));
            }
            if let Some(t) = b.tail.iter().find(|t| config.curve_index(t).is_none()) {
                return ctx.err(Some(s.span()), field, format!("tail entry `{t}` is not a curve"));
            }
            blocks.push(SequenceBlock { half_fiber: b.half_fiber.clone(), tail: b.tail.clone() });
        }
        sequences.push(SequenceSpec { name: s.get_ref().name.clone(), blocks });
    }

    if let Some(r) = &raw.reference {
        if !config.is_declared(r.get_ref()) {
            return ctx.err(Some(r.span()), "reference", format!("unknown name `{}`", r.get_ref()));
        }
    }

    for (i, g) in raw.golden.iter().enumerate() {
        let unknown = g.get_ref().values.keys().chain(&g.get_ref().unlabeled).find(|k| config.curve_index(k).is_none());
        if let Some(k) = unknown {
            return ctx.err(Some(g.span()), format!("golden[{i}]"), format!("`{k}` is not a curve"));
        }
    }

    Ok(Document {
        name: raw.name.unwrap_or_default(),
        config,
        sequences,
        reference: raw.reference.map(Spanned::into_inner),
        goldens: raw.golden.into_iter().map(Spanned::into_inner).collect(),
    })
}

fn resolve_class(config: &CurveConfig, raw: &RawClass) -> Result<Vec<BigRational>, String> {
    let n = config.curves().len();
    let mut acc = vec![BigRational::zero(); n];
    if raw.terms.is_empty() && raw.null_vector.is_none() {
        return Err("needs `terms` or `null_vector`".into());
    }
    if let Some(sub) = &raw.null_vector {
        let refs: Vec<&str> = sub.iter().map(String::as_str).collect();
        let v = config.null_vector(&refs).map_err(|e| e.to_string())?;
        acc.iter_mut().zip(v).for_each(|(a, b)| *a += b);
    }
    for (name, num, den) in &raw.terms {
        let q = fraction(*num, *den).ok_or_else(|| format!("term `{name}`: denominator must be positive"))?;
        let v = config.coefficients_of(name).ok_or_else(|| format!("unknown name `{name}`"))?;
        acc.iter_mut().zip(v).for_each(|(a, b)| *a += &q * b);
    }
    if let Some((num, den)) = raw.scale {
        let q = fraction(num, den).ok_or("scale: denominator must be positive")?;
        if !q.is_one() {
            acc.iter_mut().for_each(|a| *a *= &q);
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_document() {
        let doc = parse_document("curves = [\"A\", \"B\"]\nedges = [[\"A\", \"B\", 1]]\n").unwrap();
        assert_eq!(doc.config.curves().len(), 2);
        assert_eq!(doc.model().unwrap().rank(), 2);
    }

    #[test]
    fn self_loop_names_the_edge() {
        let err = parse_document("curves = [\"A\"]\n\nedges = [\n  [\"A\", \"A\", 1],\n]\n").unwrap_err();
        assert_eq!(err.line, Some(4));
        assert!(err.field.contains("[A, A, 1]"), "{err}");
        assert!(err.message.contains("self-loop"), "{err}");
    }

    #[test]
    fn empty_curve_list() {
        let err = parse_document("name = \"x\"\ncurves = []\n").unwrap_err();
        assert_eq!(err.message, "no curves");
    }

    #[test]
    fn syntax_error_has_a_line() {
        let err = parse_document("curves = [\"A\"]\nedges = [[\"A\", \"B\" 1]]\n").unwrap_err();
        assert_eq!(err.line, Some(2));
    }

    #[test]
    fn non_positive_denominator() {
        let src = "curves = [\"A\"]\n[[classes]]\nname = \"x\"\nterms = [[\"A\", 1, 0]]\n";
        let err = parse_document(src).unwrap_err();
        assert!(err.message.contains("denominator"), "{err}");
        assert_eq!(err.line, Some(2));
    }
}
