//! One line per acceptance criterion. Exits nonzero if any criterion fails.

use std::time::{Duration, Instant};

use enriques::format::{parse_document, Document};
use enriques::scenarios::{self, run_scenario, DataSource, ScenarioReport};
use enriques_core::linalg::rat;
use enriques_core::{
    fano_from_sequence, hat_transform, is_nef_against, is_negative_definite_divisor, is_negative_definite_exhaustive,
    is_primitive, reye_criterion, validate_sequence, weyl_reduce_with, AmbientModel, BigInt, BigRational, DivClass,
    GramLattice, IsotropicSequence, NegDefOutcome, SequenceBlock, SliceEnumerator,
};
use num_traits::{Signed, ToPrimitive, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde_json::json;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: Duration, what: &str) -> Result<(), String> {
    ensure(elapsed <= limit, || format!("{what} took {elapsed:?}, limit {limit:?}"))
}

fn bundled_doc(file: &str) -> Document {
    parse_document(scenarios::bundled(file).expect("bundled file")).expect("bundled file parses")
}

fn scenario(name: &str, limit: Duration) -> Result<ScenarioReport, String> {
    let start = Instant::now();
    let r = run_scenario(name, &DataSource::Bundled).map_err(|e| e.to_string())?;
    within(start.elapsed(), limit, name)?;
    if let Some(e) = &r.error {
        return Err(format!("{name}: {e}"));
    }
    let failed: Vec<&str> =
        r.structural.iter().chain(&r.assertions).filter(|a| !a.pass).map(|a| a.id.as_str()).collect();
    ensure(failed.is_empty(), || format!("{name}: failing assertions {failed:?}"))?;
    Ok(r)
}

fn require(r: &ScenarioReport, ids: &[&str]) -> Result<(), String> {
    for id in ids {
        let a = r.find(id).ok_or_else(|| format!("{}: assertion `{id}` missing", r.scenario))?;
        ensure(a.pass, || format!("{}: `{id}` failed", r.scenario))?;
    }
    Ok(())
}

fn c1_profiles() -> Check {
    for (file, _) in scenarios::BUNDLED {
        let start = Instant::now();
        let model = bundled_doc(file).model().map_err(|e| format!("{file}: {e}"))?;
        let p = model.profile();
        within(start.elapsed(), Duration::from_secs(1), file)?;
        ensure(p.is_e10(), || format!("{file}: profile {p:?}"))?;
    }
    Ok("4 configurations give rank 10, det -1, signature (1,0,9), even".into())
}

fn c2_e8() -> Check {
    let r = scenario("E8_tilde", Duration::from_secs(10))?;
    require(&r, &["sequence-valid", "three-divisible", "phi", "reye-witness", "witness-negative-definite"])?;
    let w = &r.find("reye-witness").expect("present").computed;
    let expected = json!({
        "R1_7": 7, "B1": 4, "R1_6": 6, "R1_5": 5, "R1_4": 4, "R1_3": 3, "R1_2": 2, "R1_1": 1, "R1_8": 4, "R1_9": 1
    });
    ensure(w == &expected, || format!("witness {w}"))?;
    Ok(format!("c = 1, phi = 3, witness {} ({} ms)", enriques::json::render(w), r.elapsed_ms))
}

fn c3_d8_e7() -> Check {
    let mut notes = Vec::new();
    for (name, expected) in [
        (
            "D8_tilde",
            json!({"R1_1": 1, "U1": 4, "R2_6": 6, "R2_7": 3, "R2_5": 5, "R2_4": 4, "R2_3": 3, "R2_2": 2, "R2_1": 1}),
        ),
        (
            "E7_tilde",
            json!({"U1": 1, "R1_7": 1, "R1_6": 1, "R1_5": 1, "R1_4": 1, "R1_3": 1, "R1_2": 1, "R1_1": 1, "U3": 1}),
        ),
    ] {
        let r = scenario(name, Duration::from_secs(10))?;
        require(&r, &["sequence-valid", "reye-witness", "reye-unlabeled"])?;
        let degeneracy = &r.find("sequence-valid").expect("present").computed["degeneracy"];
        ensure(degeneracy == &json!(2), || format!("{name}: degeneracy {degeneracy}"))?;
        let w = &r.find("reye-witness").expect("present").computed;
        ensure(w == &expected, || format!("{name}: witness {w}"))?;
        let unlabeled = &r.find("reye-unlabeled").expect("present").computed;
        notes.push(format!("{name} unlabeled {}", enriques::json::render(unlabeled)));
    }
    Ok(format!("c = 2 and labeled coefficients match; {}", notes.join("; ")))
}

fn c4_type_vii_fano() -> Check {
    let r = scenario("typeVII_fano", Duration::from_secs(60))?;
    for n in 1..=5 {
        require(
            &r,
            &[&format!("H{n}-integral"), &format!("H{n}-square"), &format!("H{n}-ample"), &format!("H{n}-phi")],
        )?;
    }
    Ok(format!("H1..H5 integral, square 10, ample, phi = 3 ({} ms)", r.elapsed_ms))
}

fn c5_counterexample() -> Check {
    let r = scenario("typeVII_counterexample", Duration::from_secs(10))?;
    require(&r, &["F-integral", "F-primitive", "H1.F", "D-negative", "Dp.Gp", "H1-2F-not-effective"])?;
    Ok(format!("signs confirmed, H1 - 2F not effective ({} ms)", r.elapsed_ms))
}

fn reference(doc: &Document, model: &AmbientModel) -> DivClass {
    match &doc.reference {
        Some(n) => model.class_of(n).expect("declared reference"),
        None => model.reference_class().expect("reference class"),
    }
}

fn nef_classes(doc: &Document, model: &AmbientModel) -> Vec<DivClass> {
    if doc.sequences.is_empty() {
        return (1..=5).map(|n| model.class_of(&format!("H{n}")).expect("declared")).collect();
    }
    doc.sequences
        .iter()
        .map(|s| {
            let seq = IsotropicSequence::from_blocks(&s.name, s.blocks.clone(), model).expect("sequence");
            fano_from_sequence(&seq, model).expect("fano").h
        })
        .collect()
}

fn c6_weyl() -> Check {
    let mut rng = StdRng::seed_from_u64(6);
    let mut total_steps = 0;
    for (file, _) in scenarios::BUNDLED {
        let doc = bundled_doc(file);
        let model = doc.model().map_err(|e| e.to_string())?;
        let a = reference(&doc, &model);
        let nefs = nef_classes(&doc, &model);
        for case in 0..50 {
            let nef = &nefs[rng.gen_range(0..nefs.len())];
            let mut effective = DivClass::zero(model.rank());
            for r in model.curve_classes() {
                if rng.gen_bool(0.3) {
                    effective = effective.add_scaled(&rat(rng.gen_range(1..=4)), r);
                }
            }
            let mut k = rng.gen_range(1..=3);
            let d = loop {
                let d = &nef.scale_int(k) + &effective;
                if !model.pair(&d, &d).map_err(|e| e.to_string())?.is_negative() {
                    break d;
                }
                k += 1;
            };
            let trace = weyl_reduce_with(&d, &model, &a).map_err(|e| format!("{file} case {case}: {e}"))?;
            total_steps += trace.steps.len();
            let sq = |x: &DivClass| model.pair(x, x).expect("pairing");
            ensure(sq(&trace.result) == sq(&d), || format!("{file} case {case}: square changed"))?;
            ensure(is_nef_against(&trace.result, &model).expect("nef"), || format!("{file} case {case}: not nef"))?;
            let again = weyl_reduce_with(&trace.result, &model, &a).map_err(|e| e.to_string())?;
            ensure(again.steps.is_empty(), || format!("{file} case {case}: not a fixed point"))?;
            let mut rebuilt = trace.result.clone();
            for (i, (_, m)) in trace.multiplicities.iter().enumerate() {
                ensure(!m.is_negative(), || format!("{file} case {case}: negative multiplicity"))?;
                rebuilt = rebuilt.add_scaled(&BigRational::from_integer(m.clone()), model.curve_class(i));
            }
            ensure(rebuilt == d, || format!("{file} case {case}: multiplicities do not reconstruct the input"))?;
        }
    }
    Ok(format!("200 reductions, {total_steps} reflections in total"))
}

/// Ten isotropic classes of `U + E8(-1)` meeting pairwise once: `e`, `f` and
/// `e + f + b_k` with `b_k` partial sums along a path of the extended E8 diagram.
fn synthetic_entries() -> Vec<DivClass> {
    let theta = [2, 3, 4, 6, 5, 4, 3, 2];
    let mut path: Vec<[i64; 8]> = vec![theta.map(|x| -x)];
    for a in [8, 7, 6, 5, 4, 3, 1] {
        let mut v = [0; 8];
        v[a - 1] = 1;
        path.push(v);
    }
    let mut entries =
        vec![DivClass::from_i64(&[1, 0, 0, 0, 0, 0, 0, 0, 0, 0]), DivClass::from_i64(&[0, 1, 0, 0, 0, 0, 0, 0, 0, 0])];
    let mut beta = [0i64; 8];
    for step in path {
        for i in 0..8 {
            beta[i] += step[i];
        }
        let mut c = vec![1, 1];
        c.extend_from_slice(&beta);
        entries.push(DivClass::from_i64(&c));
    }
    entries
}

/// All primitive isotropic `F` with `F.H = t`, found by scanning the pairings
/// `y_i = F.f_i` over the box `0..=12`. `F.f_i >= 0` holds because `F`, `f_i`
/// and `H` lie in one half of the light cone.
fn oracle_slice(lattice: &GramLattice, basis: &[DivClass], c: &[i64], t: i64) -> Vec<Vec<BigInt>> {
    fn walk(i: usize, c: &[i64], left: i64, sq_left: i64, y: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if i == c.len() {
            if left == 0 {
                out.push(y.clone());
            }
            return;
        }
        for v in 0..=12 {
            if c[i] * v > left || v * v > sq_left {
                break;
            }
            y.push(v);
            walk(i + 1, c, left - c[i] * v, sq_left - v * v, y, out);
            y.pop();
        }
    }
    let mut candidates = Vec::new();
    // sum y_i <= t and sum y_i^2 = (sum y_i)^2 / 9 bound the squares by t^2 / 9.
    walk(0, c, t, t * t / 9, &mut Vec::new(), &mut candidates);
    let mut out = Vec::new();
    for y in candidates {
        let s: i64 = y.iter().sum();
        if 9 * y.iter().map(|v| v * v).sum::<i64>() != s * s {
            continue;
        }
        let mut f = DivClass::zero(lattice.rank());
        for (yi, b) in y.iter().zip(basis) {
            f = f.add_scaled(&(BigRational::new(s.into(), 9.into()) - rat(*yi)), b);
        }
        if !f.is_integral() || f.is_zero() || !lattice.square(&f).expect("pairing").is_zero() {
            continue;
        }
        if is_primitive(lattice, &f).expect("primitive") {
            out.push(f.to_integers().expect("integral"));
        }
    }
    out.sort();
    out
}

fn c7_phi_oracle() -> Check {
    let lattice = GramLattice::e10();
    let basis = synthetic_entries();
    let mut rng = StdRng::seed_from_u64(7);
    let mut compared = 0usize;
    let mut found = 0usize;
    let basis_ints: Vec<Vec<BigInt>> = basis.iter().map(|b| b.to_integers().expect("integral")).collect();
    let mut outside = 0usize;
    for case in 0..50 {
        let c: Vec<i64> = (0..10).map(|_| rng.gen_range(1..=3)).collect();
        let h = basis.iter().zip(&c).fold(DivClass::zero(10), |acc, (b, k)| acc.add_scaled(&rat(*k), b));
        let slicer = SliceEnumerator::new(&lattice, &h).map_err(|e| e.to_string())?;
        let bound = slicer.h_square().sqrt().to_u64().expect("small");
        // Degrees past the bound are extra coverage; t <= 36 keeps y_i <= 12.
        for t in 1..=(bound + 6).min(36) {
            let fast = slicer.slice(t).map_err(|e| e.to_string())?;
            let mut fast: Vec<Vec<BigInt>> = fast.classes.iter().map(|f| f.to_integers().expect("integral")).collect();
            fast.sort();
            let slow = oracle_slice(&lattice, &basis, &c, t as i64);
            ensure(fast == slow, || {
                format!("case {case} c = {c:?} t = {t}: enumerator {} classes, oracle {}", fast.len(), slow.len())
            })?;
            compared += 1;
            found += fast.len();
            outside += fast.iter().filter(|f| !basis_ints.contains(f)).count();
        }
    }
    Ok(format!("50 classes, {compared} slices up to floor(sqrt(H^2)) + 6, {found} isotropic classes agree ({outside} outside the basis)"))
}

fn agree(c: &[BigInt], model: &AmbientModel, what: &str) -> Result<NegDefOutcome, String> {
    let pruned = is_negative_definite_divisor(c, model).map_err(|e| format!("{what}: {e}"))?;
    let full = is_negative_definite_exhaustive(c, model).map_err(|e| format!("{what}: {e}"))?;
    ensure(pruned.is_negative_definite() == full.is_negative_definite(), || format!("{what}: {pruned:?} vs {full:?}"))?;
    if let NegDefOutcome::Witness { coefficients, square } = &pruned {
        ensure(coefficients.iter().zip(c).all(|(a, b)| !a.is_negative() && a <= b), || {
            format!("{what}: witness not a subdivisor")
        })?;
        ensure(!square.is_negative() && coefficients.iter().any(|a| !a.is_zero()), || format!("{what}: bad witness"))?;
    }
    Ok(pruned)
}

fn c8_negdef() -> Check {
    let mut witnesses = 0;
    let mut models = Vec::new();
    for file in ["e8_tilde.toml", "d8_tilde.toml", "e7_tilde.toml"] {
        let doc = bundled_doc(file);
        let model = doc.model().map_err(|e| e.to_string())?;
        let spec = &doc.sequences[0];
        let seq = IsotropicSequence::from_blocks(&spec.name, spec.blocks.clone(), &model).map_err(|e| e.to_string())?;
        let h = fano_from_sequence(&seq, &model).map_err(|e| e.to_string())?.h;
        for b in &seq.blocks {
            let tail: Vec<DivClass> = b.tail.iter().map(|r| model.class_of(r).expect("curve")).collect();
            let f = model.class_of(&b.half_fiber).expect("declared");
            let report = reye_criterion(&h, &f, &tail, &model, &[]).map_err(|e| e.to_string())?;
            if let Some(w) = report.witness {
                let outcome = agree(&w, &model, file)?;
                ensure(outcome.is_negative_definite(), || {
                    format!("{file}: witness for {} not negative definite", b.half_fiber)
                })?;
                witnesses += 1;
            }
        }
        models.push(model);
    }
    ensure(witnesses >= 3, || format!("only {witnesses} witness divisors"))?;
    models.push(bundled_doc("type_vii.toml").model().map_err(|e| e.to_string())?);

    let mut rng = StdRng::seed_from_u64(8);
    let mut definite = 0;
    for case in 0..50 {
        let model = &models[case % models.len()];
        let n = model.curve_count();
        let mut c = vec![BigInt::zero(); n];
        let mut support = vec![rng.gen_range(0..n)];
        for _ in 1..rng.gen_range(2..=9) {
            let from = support[rng.gen_range(0..support.len())];
            let fresh: Vec<usize> =
                model.config().neighbors(from).into_iter().map(|(j, _)| j).filter(|j| !support.contains(j)).collect();
            if !fresh.is_empty() {
                support.push(fresh[rng.gen_range(0..fresh.len())]);
            }
        }
        for &i in &support {
            c[i] = BigInt::from(rng.gen_range(1..=3));
        }
        if agree(&c, model, &format!("random case {case}"))?.is_negative_definite() {
            definite += 1;
        }
    }

    let doc = bundled_doc("e8_tilde.toml");
    let model = doc.model().map_err(|e| e.to_string())?;
    let null: Vec<BigInt> =
        doc.config.coefficients_of("F1").expect("declared").iter().map(|q| q.to_integer()).collect();
    match agree(&null, &model, "affine null class")? {
        NegDefOutcome::Witness { square, .. } if square.is_zero() => {}
        other => return Err(format!("affine null class: {other:?}")),
    }
    Ok(format!("{witnesses} witness divisors, 50 random ({definite} definite), null class gives a square-0 witness"))
}

fn c9_identities() -> Check {
    let mut sequences = 0;
    for file in ["e8_tilde.toml", "d8_tilde.toml", "e7_tilde.toml"] {
        let doc = bundled_doc(file);
        let model = doc.model().map_err(|e| e.to_string())?;
        for s in &doc.sequences {
            let seq = IsotropicSequence::from_blocks(&s.name, s.blocks.clone(), &model).map_err(|e| e.to_string())?;
            let report = validate_sequence(&seq, &model).map_err(|e| e.to_string())?;
            ensure(report.is_valid(), || format!("{file}: {:?}", report.violations))?;
            ensure(report.sum_square == rat(90), || format!("{file}: sum square {}", report.sum_square))?;
            sequences += 1;
        }
    }

    let mut model = AmbientModel::from_lattice(GramLattice::e10());
    let entries = synthetic_entries();
    for (i, e) in entries.iter().enumerate() {
        model = model.with_named_class(&format!("S{i}"), e.clone()).map_err(|e| e.to_string())?;
    }
    let blocks = (0..10).map(|i| SequenceBlock { half_fiber: format!("S{i}"), tail: vec![] }).collect();
    let seq = IsotropicSequence::from_blocks("synthetic", blocks, &model).map_err(|e| e.to_string())?;
    let report = validate_sequence(&seq, &model).map_err(|e| e.to_string())?;
    ensure(report.is_valid() && report.sum_square == rat(90), || format!("synthetic: {report:?}"))?;
    sequences += 1;
    let h = fano_from_sequence(&seq, &model).map_err(|e| e.to_string())?.h;

    let mut runs = 0;
    let mut fano = 0;
    for i in 0..10 {
        for j in i + 1..10 {
            for k in j + 1..10 {
                let t = [&entries[i], &entries[j], &entries[k]];
                let r = hat_transform(&h, t, t, &model).map_err(|e| format!("hat ({i},{j},{k}): {e}"))?;
                ensure(r.h_hat_square == rat(10) && r.h_dot_h_hat == rat(11), || format!("hat ({i},{j},{k}): {r:?}"))?;
                runs += 1;
                fano += usize::from(r.is_fano);
            }
        }
    }
    Ok(format!("{sequences} sequences square to 90; {runs} hat transforms give 10 and 11 ({fano} Fano)"))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("E10 profiles of the bundled configurations", c1_profiles),
        ("E8-tilde sequence, phi and witness", c2_e8),
        ("D8-tilde and E7-tilde sequences and witnesses", c3_d8_e7),
        ("type VII Fano polarizations", c4_type_vii_fano),
        ("type VII counterexample", c5_counterexample),
        ("Weyl reduction properties", c6_weyl),
        ("phi slices against the coordinate-box oracle", c7_phi_oracle),
        ("pruned and exhaustive negative definiteness", c8_negdef),
        ("algebraic identities", c9_identities),
    ];
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = run();
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("PASS {} {name} [{secs:.2} s]: {detail}", i + 1),
            Err(why) => {
                failures += 1;
                println!("FAIL {} {name} [{secs:.2} s]: {why}", i + 1);
            }
        }
    }
    println!("{}/{} criteria pass", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}
