//! Acceptance suite: one line per criterion, nonzero exit if any fails.
//!
//! Criteria 2 to 8 read the records of one run of the shipped configuration
//! and re-check them against independent oracles; criterion 8 also re-runs
//! the configuration sequentially and compares the records byte for byte.

mod oracle;

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_integer::Integer;
use rand::Rng;
use serde_json::Value;

use tdlc::arith::{Perm3, Rational};
use tdlc::battery::{self, CheckKind};
use tdlc::config::ExperimentConfig;
use tdlc::families::{AffineGroup, AffineSubgroup, LampElement, LampGroup, Sym3Group, Sym3Subgroup};
use tdlc::group::{Family, IndexValue};
use tdlc::lattice::divisible_root;
use tdlc::report::{Record, RunReport, Verdict};
use tdlc::sampling::seeded;
use tdlc::scale::{scale, EngineOptions};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn select<'a>(run: &'a RunReport, family: &str, check: CheckKind) -> Vec<&'a Record> {
    run.records.iter().filter(|r| r.family == family && r.check == check.name()).collect()
}

fn all_pass(recs: &[&Record], what: &str) -> Result<(), String> {
    match recs.iter().find(|r| r.verdict != Verdict::Pass) {
        Some(r) => Err(format!("{what}: {}", r.to_line())),
        None => Ok(()),
    }
}

fn big(v: &Value) -> BigUint {
    v.as_str().and_then(|s| s.parse().ok()).expect("finite index")
}

fn timing(run: &RunReport, check: CheckKind) -> Duration {
    run.timings[check.name()]
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let opts = EngineOptions::default();
    let mut checked = 0;
    for p in [2u64, 3, 5] {
        let g = AffineGroup::new(p).unwrap();
        let s = |shift: i64| scale(&g, &g.element(Rational::zero(), shift), &opts).unwrap().scale;
        let mut g_values = BTreeSet::new();
        for k in 0..=6u32 {
            let up = s(-(k as i64));
            ensure(up == IndexValue::Finite(BigUint::from(p).pow(k)), || format!("p={p}: s((0,-{k})) = {up}"))?;
            ensure(s(k as i64).is_one(), || format!("p={p}: s((0,{k})) != 1"))?;
            g_values.insert(up.finite().cloned().expect("finite scale"));
            checked += 2;
        }
        let powers: BTreeSet<BigUint> = (0..=6).map(|k| BigUint::from(p).pow(k)).collect();
        ensure(g_values == powers, || format!("p={p}: values {g_values:?}"))?;
        for m in [2u32, 3, 4] {
            let attained: BTreeSet<BigUint> = (0..=4)
                .map(|k| {
                    let h = g.element(Rational::zero(), -((m * k) as i64));
                    assert_eq!(h.shift.rem_euclid(m as i64), 0);
                    s(h.shift).finite().cloned().expect("finite scale")
                })
                .collect();
            let expected: BTreeSet<BigUint> = (0..=4).map(|k| BigUint::from(p).pow(m * k)).collect();
            checked += 5;
            ensure(attained == expected, || format!("p={p}, m={m}: attained {attained:?}"))?;
        }
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(5), || format!("took {elapsed:?}"))?;
    Ok(format!("{checked} exact scale values, {elapsed:.2?}"))
}

fn criterion_2(run: &RunReport) -> Outcome {
    let mut total = 0;
    for fam in ["affine", "sym3", "lamp"] {
        let recs = select(run, fam, CheckKind::Witness);
        ensure(recs.len() == 200, || format!("{fam}: {} witnesses", recs.len()))?;
        all_pass(&recs, fam)?;
        for r in &recs {
            let o = &r.outputs;
            let n = o["n"].as_u64().unwrap() as u32;
            ensure(n as u64 <= r.inputs["n_max"].as_u64().unwrap(), || format!("n > n_max: {}", r.to_line()))?;
            ensure(big(&o["scale_x"]).pow(n) == big(&o["scale_h"]), || format!("scale law: {}", r.to_line()))?;
            ensure(o["conjugacy"]["holds"] == Value::Bool(true) && o["conjugacy"]["samples"] == 20, || {
                format!("conjugacy: {}", r.to_line())
            })?;
            if fam == "affine" {
                // least n with m | n s
                let g = AffineGroup::new(r.inputs["params"].as_str().unwrap()[2..].parse().unwrap()).unwrap();
                let x = g.parse_element(r.inputs["x"].as_str().unwrap()).unwrap();
                let sub = r.inputs["subgroup"].as_str().unwrap();
                let m: i64 = sub.trim_start_matches("Q_p x ").trim_end_matches('Z').parse().unwrap();
                let expect = if x.shift == 0 { 1 } else { m / m.gcd(&x.shift.abs()) };
                ensure(n as i64 == expect, || format!("minimal n {expect}: {}", r.to_line()))?;
            }
        }
        total += recs.len();
    }
    let t = timing(run, CheckKind::Witness);
    ensure(t < Duration::from_secs(60), || format!("took {t:?}"))?;
    Ok(format!("{total} witnesses, zero failures, {t:.2?}"))
}

fn criterion_3(run: &RunReport) -> Outcome {
    let mut total = 0;
    for fam in ["affine", "sym3", "lamp"] {
        let recs = select(run, fam, CheckKind::DoubleCoset);
        all_pass(&recs, fam)?;
        for r in &recs {
            let rep = &r.outputs["report"];
            let n = r.inputs["n"].as_u64().unwrap() as u32;
            ensure((1..=4).contains(&n), || format!("n out of range: {}", r.to_line()))?;
            ensure(rep["in_normal_form"] == Value::Bool(true), || r.to_line())?;
            ensure(big(&rep["scale_x"]).pow(n) == big(&rep["scale_y"]), || r.to_line())?;
        }
        total += recs.len();
    }
    ensure(total >= 500, || format!("only {total} samples"))?;
    let t = timing(run, CheckKind::DoubleCoset);
    ensure(t < Duration::from_secs(60), || format!("took {t:?}"))?;
    Ok(format!("{total} samples of (VxV)^n, n <= 4, all in V_- x^n V_+ with s(y) = s(x)^n, {t:.2?}"))
}

fn criterion_4(run: &RunReport) -> Outcome {
    let mut summary = Vec::new();
    for fam in ["affine", "sym3", "lamp"] {
        let recs = select(run, fam, CheckKind::TidyCriterion);
        all_pass(&recs, fam)?;
        let random: Vec<_> = recs.iter().filter(|r| r.inputs.get("fixed").is_none()).collect();
        ensure(random.len() == 200, || format!("{fam}: {} pairs", random.len()))?;
        for r in &random {
            let o = &r.outputs;
            let tidy = o["tidy"].as_bool().unwrap();
            ensure(tidy == (o["index"] == o["scale"]), || r.to_line())?;
        }
        let negatives = random.iter().filter(|r| r.outputs["tidy"] == Value::Bool(false)).count();
        summary.push(format!("{fam} {negatives} non-tidy"));
    }
    let neg = select(run, "sym3", CheckKind::TidyCriterion)
        .into_iter()
        .find(|r| r.inputs.get("fixed").is_some())
        .ok_or("negative instance missing")?;
    let o = &neg.outputs;
    ensure(o["tidy"] == Value::Bool(false) && o["index"] == "2" && o["scale"] == "1", || {
        format!("negative instance: {}", neg.to_line())
    })?;
    Ok(format!("600 pairs ({}), (123) with default V: index 2 > scale 1", summary.join(", ")))
}

/// `t^-1 y^k t x^-k ∈ V` for `k = 0..=16`, recomputed from the record.
fn recheck_conjugator<F: Family>(fam: &F, r: &Record, v: &str) -> Result<(), String> {
    let p = |s: &Value| fam.parse_element(s.as_str().unwrap()).unwrap();
    let (x, y, t) = (p(&r.inputs["x"]), p(&r.outputs["y"]), p(&r.outputs["conjugator"]["t"]));
    let v = fam.parse_subgroup(v).unwrap();
    for k in 0..=16 {
        let w = fam.mul(&fam.mul(&fam.mul(&fam.inv(&t), &fam.pow(&y, k)), &t), &fam.pow(&x, -k));
        ensure(fam.member(&w, &v), || format!("k = {k}: {}", r.to_line()))?;
    }
    Ok(())
}

fn criterion_5(run: &RunReport) -> Outcome {
    let mut total = 0;
    for fam in ["affine", "sym3", "lamp"] {
        let recs: Vec<_> =
            select(run, fam, CheckKind::Conjugator).into_iter().filter(|r| r.inputs.get("fixed").is_none()).collect();
        ensure(recs.len() == 100, || format!("{fam}: {} samples", recs.len()))?;
        all_pass(&recs, fam)?;
        for r in &recs {
            ensure(r.inputs["k"] == 16 && r.outputs["conjugator"]["verified_through"] == 16, || r.to_line())?;
            let v = r.outputs["tidy_v"].as_str().unwrap();
            match fam {
                "affine" => {
                    let g = AffineGroup::new(r.inputs["params"].as_str().unwrap()[2..].parse().unwrap()).unwrap();
                    recheck_conjugator(&g, r, v)?
                }
                "sym3" => recheck_conjugator(&Sym3Group, r, v)?,
                _ => recheck_conjugator(&LampGroup, r, v)?,
            }
        }
        total += recs.len();
    }
    let fixed = select(run, "affine", CheckKind::Conjugator)
        .into_iter()
        .find(|r| r.inputs.get("fixed").is_some() && r.inputs["params"] == "p=2")
        .ok_or("closed-form case missing")?;
    ensure(fixed.verdict == Verdict::Pass, || fixed.to_line())?;
    let t = fixed.outputs["conjugator"]["t"].as_str().unwrap();
    ensure(t == "(2/1, 0)@2", || format!("closed form gave {t}"))?;
    Ok(format!("{total} conjugators re-verified for k = 0..16, closed form t = {t}"))
}

fn criterion_6(run: &RunReport) -> Outcome {
    let prop = |fam: &str| -> Result<Value, String> {
        let recs = select(run, fam, CheckKind::Propagation);
        ensure(recs.len() == 1, || format!("{fam}: propagation missing"))?;
        ensure(!recs[0].verdict.is_failure(), || recs[0].to_line())?;
        Ok(recs[0].outputs.clone())
    };
    let sym3 = prop("sym3")?;
    ensure(sym3["uniscalar"] == "confirmed" && sym3["anisotropic"] == "confirmed", || sym3.to_string())?;
    let lamp = prop("lamp")?;
    ensure(lamp["uniscalar"] == "confirmed", || lamp.to_string())?;
    let nontrivial = lamp["con_classes"]["finite-support-lamps"].as_u64().unwrap_or(0);
    ensure(lamp["not_closed"] == nontrivial && nontrivial > 0, || lamp.to_string())?;
    let certs = select(run, "lamp", CheckKind::NotClosed);
    ensure(certs.len() == 100, || format!("{} certificates", certs.len()))?;
    all_pass(&certs, "not-closed")?;
    for r in &certs {
        let c = &r.certificate;
        ensure(
            c["limit"] == "{}cofinite|shift:0/1"
                && c["limit_outside_con"] == true
                && c["density"].as_array().unwrap().len() == 3,
            || r.to_line(),
        )?;
    }
    // con((f, q)) ∋ δ_0 exactly when q != 0
    let mut rng = seeded(6);
    let delta0 = LampElement::lamps_at([Rational::zero()]);
    for _ in 0..200 {
        let x = LampGroup.random_element(&mut rng, 4);
        ensure(LampGroup.in_contraction(&delta0, &x).verdict == !x.shift.is_zero(), || x.to_string())?;
    }
    let affine = prop("affine")?;
    ensure(affine["not_closed"] == 0, || affine.to_string())?;
    Ok(format!(
        "sym3 anisotropic + uniscalar; lamp uniscalar, {nontrivial} non-closed con(x) with certificates; affine con closed on {} samples",
        affine["con_classes"].as_object().unwrap().values().map(|v| v.as_u64().unwrap()).sum::<u64>()
    ))
}

fn criterion_7(run: &RunReport) -> Outcome {
    let periodic = select(run, "sym3", CheckKind::Periodic);
    ensure(periodic.len() == 1, || "periodic record missing".into())?;
    all_pass(&periodic, "periodic")?;
    ensure(periodic[0].outputs["x_checked"] == 1000, || periodic[0].to_line())?;
    // x^6 = e coordinate by coordinate, composing six times
    let mut rng = seeded(7);
    for _ in 0..1000 {
        let x = Sym3Group.random_element(&mut rng, 8);
        for n in 0..=x.cutoff() {
            let g = x.coord(n);
            let six = (0..6).fold(Perm3::E, |acc, _| acc.compose(g));
            ensure(six == Perm3::E, || format!("{x} at {n}"))?;
        }
    }
    let div = select(run, "lamp", CheckKind::Divisible);
    ensure(div.len() == 1, || "divisible record missing".into())?;
    all_pass(&div, "divisible")?;
    ensure(div[0].inputs["k_max"] == 8, || div[0].to_line())?;
    let (root, fact) = divisible_root(&"3/2".parse().unwrap(), 4);
    ensure(root == LampElement::translation(Rational::new(1, 16)) && fact == 24, || root.to_string())?;
    Ok(format!(
        "x^6 = e on 1000 samples, x^n = h v for 1000 x; {} roots x_k = q/k! (k <= 8), scale 1",
        div[0].outputs["roots_checked"]
    ))
}

fn index_oracle_cases() -> Result<[usize; 3], String> {
    let mut rng = seeded(8);
    let mut counts = [0; 3];
    let check = |lib: IndexValue, brute: usize, what: String| {
        ensure(lib == IndexValue::Finite(BigUint::from(brute)), || {
            format!("{what}: library {lib}, brute force {brute}")
        })
    };
    while counts[0] < 120 {
        let g = AffineGroup::new([2, 3, 5][rng.random_range(0..3)]).unwrap();
        let x = g.random_element(&mut rng, 2);
        let v = AffineSubgroup::Level(rng.random_range(-2..=2));
        let moved = g.conj_subgroup(&x, &v);
        for (outer, inner) in [(moved, g.intersect(&moved, &v)), (v, g.intersect(&v, &moved))] {
            let brute = oracle::affine_index(&g, &outer, &inner).unwrap();
            check(g.index(&outer, &inner).unwrap(), brute, format!("[{outer}:{inner}]"))?;
            counts[0] += 1;
        }
    }
    while counts[1] < 120 {
        let x = Sym3Group.random_element(&mut rng, 5);
        let cands = Sym3Group.candidates(&x, 2);
        let v: Sym3Subgroup = cands[rng.random_range(0..cands.len())].clone();
        let moved = Sym3Group.conj_subgroup(&x, &v);
        for (outer, inner) in
            [(moved.clone(), Sym3Group.intersect(&moved, &v)), (v.clone(), Sym3Group.intersect(&v, &moved))]
        {
            let brute = oracle::sym3_index(&outer, &inner);
            check(Sym3Group.index(&outer, &inner).unwrap(), brute, format!("[{outer}:{inner}]"))?;
            counts[1] += 1;
        }
    }
    while counts[2] < 120 {
        let x = LampGroup.random_element(&mut rng, 3);
        let cands = LampGroup.candidates(&x, 3);
        let v = cands[rng.random_range(0..cands.len())].clone();
        let moved = LampGroup.conj_subgroup(&x, &v);
        let extra = [oracle::random_point(&mut rng), oracle::random_point(&mut rng)];
        for (outer, inner) in
            [(moved.clone(), LampGroup.intersect(&moved, &v)), (v.clone(), LampGroup.intersect(&v, &moved))]
        {
            let brute = oracle::lamp_index(&outer, &inner, &extra);
            check(LampGroup.index(&outer, &inner).unwrap(), brute, format!("[{outer}:{inner}]"))?;
            counts[2] += 1;
        }
    }
    Ok(counts)
}

fn criterion_8(run: &RunReport, cfg: &ExperimentConfig) -> Outcome {
    for fam in ["affine", "sym3", "lamp"] {
        let power = select(run, fam, CheckKind::PowerLaw);
        ensure(power.len() == 500, || format!("{fam}: {} power-law samples", power.len()))?;
        all_pass(&power, fam)?;
        for r in &power {
            let n = r.inputs["n"].as_u64().unwrap() as u32;
            ensure(big(&r.outputs["scale_x"]).pow(n) == big(&r.outputs["scale_xn"]), || r.to_line())?;
            ensure(
                r.outputs["con_x"] == r.outputs["con_xn"] && r.certificate["membership_mismatch"].is_null(),
                || r.to_line(),
            )?;
        }
        let modular = select(run, fam, CheckKind::Modular);
        all_pass(&modular, fam)?;
        ensure(modular.iter().all(|r| r.outputs["product"] == "1/1"), || format!("{fam}: modular product"))?;
    }
    let counts = index_oracle_cases()?;
    let mut sequential = cfg.clone();
    sequential.parallel = !cfg.parallel;
    let again = battery::run(&sequential);
    let lines = |r: &RunReport| r.records.iter().map(Record::to_line).collect::<Vec<_>>().join("\n");
    ensure(lines(run) == lines(&again), || "records differ between runs".into())?;
    Ok(format!(
        "power law + con(x^n) = con(x) on 1500 samples, modular products 1, index oracle {counts:?} cases, {} records byte-identical across runs",
        run.records.len()
    ))
}

fn main() -> ExitCode {
    let cfg = ExperimentConfig::paper_examples();
    let run = battery::run(&cfg);
    let results: Vec<(usize, &str, Outcome)> = vec![
        (1, "scale value sets", criterion_1()),
        (2, "lattice witnesses", criterion_2(&run)),
        (3, "double-coset normal form", criterion_3(&run)),
        (4, "tidy criterion", criterion_4(&run)),
        (5, "conjugator", criterion_5(&run)),
        (6, "propagation", criterion_6(&run)),
        (7, "periodic and divisible", criterion_7(&run)),
        (8, "properties and oracles", criterion_8(&run, &cfg)),
    ];
    let mut failed = false;
    for (i, name, res) in results {
        match res {
            Ok(detail) => println!("criterion {i} ({name}): PASS: {detail}"),
            Err(why) => {
                failed = true;
                println!("criterion {i} ({name}): FAIL: {why}");
            }
        }
    }
    if failed {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
