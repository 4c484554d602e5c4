//! One function per subcommand. Each returns an [`Outcome`] holding the exit
//! code and both renderings; errors map to exit code 2 in the binary.

use std::fmt::Write as _;
use std::path::Path;

use enriques_core::linalg;
use enriques_core::{
    fano_from_sequence, is_negative_definite_divisor, is_negative_definite_exhaustive, phi, reye_criterion,
    validate_sequence, weyl_reduce, weyl_reduce_with, AmbientModel, BigInt, BigRational, DivClass, IsotropicSequence,
    NegDefOutcome,
};
use num_traits::{Signed, Zero};
use serde_json::{json, Value};

use crate::expr::{curve_coefficients, evaluate, parse_expression};
use crate::format::{parse_document, Document, SequenceSpec};
use crate::json;
use crate::scenarios::{self, DataSource, ScenarioReport};
use crate::CliError;

pub const EXIT_TRUE: i32 = 0;
pub const EXIT_FALSE: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub code: i32,
    pub text: String,
    pub json: Value,
}

impl Outcome {
    fn new(holds: bool, text: String, json: Value) -> Self {
        Outcome { code: if holds { EXIT_TRUE } else { EXIT_FALSE }, text, json }
    }
}

/// Reads a configuration file. `bundled:NAME` selects one of the shipped
/// data files, e.g. `bundled:type_vii`.
pub fn load_document(path: &Path) -> Result<Document, CliError> {
    let text = match path.to_str().and_then(|s| s.strip_prefix("bundled:")) {
        Some(name) => scenarios::bundled(&format!("{name}.toml"))
            .ok_or_else(|| CliError::Usage(format!("no bundled file `{name}`")))?
            .to_string(),
        None => std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })?,
    };
    Ok(parse_document(&text)?)
}

/// Coefficients over the curves, when the class is a rational combination of them.
pub fn as_curve_combination(model: &AmbientModel, d: &DivClass) -> Option<Vec<BigRational>> {
    linalg::solve(model.embed(), d.coords())
}

fn curve_terms(model: &AmbientModel, coeffs: &[BigRational]) -> String {
    let parts: Vec<String> = model
        .curve_names()
        .iter()
        .zip(coeffs)
        .filter(|(_, c)| !c.is_zero())
        .map(|(n, c)| format!("{n}: {c}"))
        .collect();
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(", ")
    }
}

fn named_ratios(model: &AmbientModel, coeffs: &[BigRational]) -> Value {
    Value::Object(
        model
            .curve_names()
            .iter()
            .zip(coeffs)
            .filter(|(_, c)| !c.is_zero())
            .map(|(n, c)| (n.clone(), json::ratio(c)))
            .collect(),
    )
}

fn describe_class(model: &AmbientModel, d: &DivClass) -> (String, Value) {
    match as_curve_combination(model, d) {
        Some(c) => {
            let mut text = curve_terms(model, &c);
            if model.curve_count() > model.rank() {
                text.push_str(" (one of several curve representations)");
            }
            (text, json!({"ambient": json::class(d), "curves": named_ratios(model, &c)}))
        }
        None => (d.to_string(), json!({"ambient": json::class(d), "curves": null})),
    }
}

pub fn cmd_check(doc: &Document) -> Result<Outcome, CliError> {
    let model = doc.model()?;
    let profile = model.profile();
    let mut text = String::new();
    let _ = writeln!(text, "configuration: {}", if doc.name.is_empty() { "(unnamed)" } else { &doc.name });
    let _ = writeln!(
        text,
        "curves: {}, edges: {}, extra generators: {}",
        model.curve_count(),
        doc.config.edges().len(),
        doc.config.generators().len()
    );
    let _ = writeln!(
        text,
        "lattice: rank {}, determinant {}, signature {}, {}{}",
        profile.rank,
        profile.determinant,
        profile.signature,
        if profile.is_even { "even" } else { "odd" },
        if profile.is_e10() { " (E10)" } else { "" }
    );
    let mut all_valid = true;
    let mut seqs = Vec::new();
    for spec in &doc.sequences {
        let seq = IsotropicSequence::from_blocks(&spec.name, spec.blocks.clone(), &model)?;
        let report = validate_sequence(&seq, &model)?;
        all_valid &= report.is_valid();
        let _ = writeln!(
            text,
            "sequence {}: {} (degeneracy {})",
            spec.name,
            if report.is_valid() { "valid" } else { "invalid" },
            report.degeneracy
        );
        for v in &report.violations {
            let _ = writeln!(text, "  {v}");
        }
        seqs.push(json!({
            "name": spec.name,
            "valid": report.is_valid(),
            "degeneracy": report.degeneracy,
            "violations": report.violations,
            "sum_square": json::ratio(&report.sum_square),
        }));
    }
    let value = json!({
        "name": doc.name,
        "curves": model.curve_count(),
        "edges": doc.config.edges().len(),
        "generators": doc.config.generators().len(),
        "profile": json::profile(&profile),
        "e10": profile.is_e10(),
        "sequences": seqs,
    });
    Ok(Outcome::new(all_valid, text, value))
}

pub fn cmd_phi(doc: &Document, class: &str) -> Result<Outcome, CliError> {
    let model = doc.model()?;
    let h = evaluate(&parse_expression(class)?, &model)?;
    let result = phi(&h, &model)?;
    let (witness_text, witness_json) = describe_class(&model, &result.witness);
    let text = format!(
        "class: {class}\nΦ = {}\nwitness: {witness_text}\nslice sizes for t = 1..{}: {:?}\n",
        result.value, result.bound, result.slice_sizes
    );
    let value = json!({
        "class": class,
        "h": json::class(&h),
        "phi": result.value,
        "witness": witness_json,
        "bound": result.bound,
        "slice_sizes": result.slice_sizes,
    });
    Ok(Outcome::new(true, text, value))
}

pub fn cmd_reduce(doc: &Document, class: &str) -> Result<Outcome, CliError> {
    let model = doc.model()?;
    let d = evaluate(&parse_expression(class)?, &model)?;
    let trace = match &doc.reference {
        Some(r) => weyl_reduce_with(&d, &model, &model.class_of(r)?)?,
        None => weyl_reduce(&d, &model)?,
    };
    let (result_text, result_json) = describe_class(&model, &trace.result);
    let mut text = format!("reduced {class} in {} reflections\nresult: {result_text}\n", trace.steps.len());
    let moved: Vec<&(String, BigInt)> = trace.multiplicities.iter().filter(|(_, m)| !m.is_zero()).collect();
    if !moved.is_empty() {
        let list: Vec<String> = moved.iter().map(|(n, m)| format!("{n}: {m}")).collect();
        let _ = writeln!(text, "subtracted: {}", list.join(", "));
    }
    let value = json!({
        "class": class,
        "steps": trace.steps.iter().map(|s| json!({"curve": s.curve, "pairing": json::int(&s.pairing)})).collect::<Vec<_>>(),
        "multiplicities": Value::Object(moved.iter().map(|(n, m)| (n.clone(), json::int(m))).collect()),
        "result": result_json,
    });
    Ok(Outcome::new(true, text, value))
}

pub fn cmd_negdef(doc: &Document, class: &str, exhaustive: bool) -> Result<Outcome, CliError> {
    let model = doc.model()?;
    let coeffs = curve_coefficients(&parse_expression(class)?, &doc.config)?;
    let mut ints = Vec::with_capacity(coeffs.len());
    for (q, name) in coeffs.iter().zip(model.curve_names()) {
        if !q.is_integer() || q.is_negative() {
            return Err(CliError::Usage(format!("coefficient of {name} must be a non-negative integer, got {q}")));
        }
        ints.push(q.to_integer());
    }
    let outcome = if exhaustive {
        is_negative_definite_exhaustive(&ints, &model)?
    } else {
        is_negative_definite_divisor(&ints, &model)?
    };
    let (text, value) = match &outcome {
        NegDefOutcome::NegativeDefinite { fast_path } => (
            format!(
                "true (negative definite{})\n",
                if *fast_path { ", support Gram is negative definite" } else { "" }
            ),
            json!({"class": class, "negative_definite": true, "fast_path": fast_path}),
        ),
        NegDefOutcome::Witness { coefficients, square } => (
            format!(
                "false (witness subdivisor with square {square})\nwitness: {}\n",
                curve_terms(&model, &coefficients.iter().cloned().map(BigRational::from_integer).collect::<Vec<_>>())
            ),
            json!({
                "class": class,
                "negative_definite": false,
                "witness": json::named_ints(model.curve_names(), coefficients),
                "square": json::int(square),
            }),
        ),
    };
    Ok(Outcome::new(outcome.is_negative_definite(), text, value))
}

fn pick_sequence<'a>(doc: &'a Document, name: Option<&str>) -> Result<&'a SequenceSpec, CliError> {
    match name {
        Some(n) => doc.sequence(n).ok_or_else(|| CliError::Usage(format!("no sequence named `{n}`"))),
        None => match doc.sequences.as_slice() {
            [only] => Ok(only),
            [] => Err(CliError::Usage("the configuration declares no sequences".into())),
            _ => Err(CliError::Usage("several sequences declared; pass --sequence".into())),
        },
    }
}

pub fn cmd_fano(doc: &Document, sequence: Option<&str>) -> Result<Outcome, CliError> {
    let model = doc.model()?;
    let spec = pick_sequence(doc, sequence)?;
    let seq = IsotropicSequence::from_blocks(&spec.name, spec.blocks.clone(), &model)?;
    let report = fano_from_sequence(&seq, &model)?;
    let (h_text, h_json) = describe_class(&model, &report.h);
    let mut text = format!("H = {h_text}\nH^2 = {}\nnef: {}\n", report.h_square, report.nef);
    if let Some(p) = &report.phi {
        let _ = writeln!(text, "phi(H) = {}", p.value);
    }
    let _ = writeln!(text, "Fano polarization: {}", if report.is_fano { "yes" } else { "no" });
    for (f, tail) in &report.tails {
        let _ = writeln!(text, "tail of {f}: [{}]", tail.join(", "));
    }
    let _ = writeln!(text, "tails match the sequence: {}", report.tails_match);
    if let Some((f, w)) = &report.reye_witness {
        let q: Vec<BigRational> = w[..model.curve_count()].iter().cloned().map(BigRational::from_integer).collect();
        let _ = writeln!(text, "H - 2(F + T) is effective for the block of {f}: {}", curve_terms(&model, &q));
    }
    let value = json!({
        "sequence": spec.name,
        "h": h_json,
        "h_square": json::ratio(&report.h_square),
        "nef": report.nef,
        "phi": report.phi.as_ref().map(|p| p.value),
        "is_fano": report.is_fano,
        "tails": report.tails,
        "tails_match": report.tails_match,
        "orthogonal_curves": report.orthogonal_curves,
        "reye_witness": report.reye_witness.as_ref().map(|(f, w)| json!({
            "half_fiber": f,
            "coefficients": json::named_ints(model.curve_names(), &w[..model.curve_count()]),
        })),
    });
    Ok(Outcome::new(report.is_fano, text, value))
}

pub fn cmd_reye(doc: &Document, sequence: Option<&str>, half_fiber: &str) -> Result<Outcome, CliError> {
    let model = doc.model()?;
    let spec = pick_sequence(doc, sequence)?;
    let seq = IsotropicSequence::from_blocks(&spec.name, spec.blocks.clone(), &model)?;
    let b = seq
        .block_index(half_fiber)
        .ok_or_else(|| CliError::Usage(format!("`{half_fiber}` is not a half-fiber of sequence `{}`", spec.name)))?;
    let report = validate_sequence(&seq, &model)?;
    if !report.is_valid() {
        return Err(enriques_core::Error::MalformedSequence(report.violations.join("; ")).into());
    }
    let h = match divide_by_three(&model, &seq.sum())? {
        Some(h) => h,
        None => return Err(enriques_core::Error::NotThreeDivisible.into()),
    };
    let tail = seq.blocks[b].tail.iter().map(|r| model.class_of(r)).collect::<Result<Vec<_>, _>>()?;
    let reye = reye_criterion(&h, &model.class_of(half_fiber)?, &tail, &model, &[])?;
    let (d_text, d_json) = describe_class(&model, &reye.divisor);
    let mut text = format!("H - 2(F + T) for {half_fiber} = {d_text}\n");
    let value = match &reye.witness {
        Some(w) => {
            let q: Vec<BigRational> = w.iter().cloned().map(BigRational::from_integer).collect();
            let _ = writeln!(text, "effective: {}", curve_terms(&model, &q));
            if let Some(o) = &reye.negative_definite {
                let _ = writeln!(text, "negative definite: {}", o.is_negative_definite());
            }
            json!({
                "half_fiber": half_fiber,
                "divisor": d_json,
                "effective": true,
                "witness": json::named_ints(model.curve_names(), w),
                "negative_definite": reye.negative_definite.as_ref().map(NegDefOutcome::is_negative_definite),
            })
        }
        None => {
            let _ = writeln!(text, "not a non-negative combination of curves");
            json!({"half_fiber": half_fiber, "divisor": d_json, "effective": false, "witness": null})
        }
    };
    Ok(Outcome::new(reye.witness.is_some(), text, value))
}

fn divide_by_three(model: &AmbientModel, x: &DivClass) -> Result<Option<DivClass>, CliError> {
    Ok(enriques_core::divide_in_lattice(model.lattice(), x, 3)?)
}

pub fn render_report(r: &ScenarioReport) -> String {
    let mut text = String::new();
    let _ = writeln!(text, "== {} ({}) {}", r.scenario, r.file, if r.passed() { "PASS" } else { "FAIL" });
    if let Some(e) = &r.error {
        let _ = writeln!(text, "  error: {e}");
    }
    for a in r.structural.iter().chain(&r.assertions) {
        let mark = if a.pass { "ok  " } else { "FAIL" };
        let origin = serde_json::to_value(a.origin).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default();
        let _ = write!(text, "  [{mark}] {} ({origin}; {})", a.id, a.anchor);
        if a.expected.is_null() {
            let _ = writeln!(text, ": {}", json::render(&a.computed));
        } else {
            let _ = writeln!(text, ": expected {}, computed {}", json::render(&a.expected), json::render(&a.computed));
        }
    }
    text
}

pub fn cmd_paper_verify(source: &DataSource, only: Option<&str>) -> Result<Outcome, CliError> {
    let reports = match only {
        Some(name) => vec![scenarios::run_scenario(name, source)?],
        None => scenarios::run_all(source),
    };
    let mut text = String::new();
    for r in &reports {
        text.push_str(&render_report(r));
    }
    let _ = writeln!(text, "\n{:<26} {:<6} {:>7} {:>9}", "scenario", "result", "checks", "time");
    for r in &reports {
        let total = r.structural.len() + r.assertions.len();
        let passing = r.structural.iter().chain(&r.assertions).filter(|a| a.pass).count();
        let _ = writeln!(
            text,
            "{:<26} {:<6} {:>7} {:>7}ms",
            r.scenario,
            if r.passed() { "pass" } else { "FAIL" },
            format!("{passing}/{total}"),
            r.elapsed_ms
        );
    }
    let passed = reports.iter().filter(|r| r.passed()).count();
    let _ = writeln!(text, "{passed}/{} scenarios pass", reports.len());
    let value = json!({"scenarios": reports, "passed": passed, "total": reports.len()});
    Ok(Outcome::new(passed == reports.len(), text, value))
}
