//! The full experiment battery: every check of every configured family,
//! driven by one seed.
//!
//! Each task draws from its own generator, seeded from the run seed and the
//! task's id, so records do not depend on scheduling; with `parallel = true`
//! tasks run on the rayon pool and are reassembled in id order.

use std::time::Instant;

use num_bigint::BigUint;
use rand::Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::arith::Rational;
use crate::config::{ExperimentConfig, FamilyKind, SampleCounts};
use crate::families::{AffineGroup, LampElement, LampGroup, Sym3Element, Sym3Group, Sym3Subgroup};
use crate::group::{Family, IndexValue};
use crate::lattice::{
    find_witness, lamp_not_closed_certificate, verify_anisotropic_propagation, verify_divisible, verify_periodic,
    verify_uniscalar_propagation, AffineCovolume, CovolumeSubgroup, Propagation, RationalLattice, Sym3Lattice,
    WitnessOptions,
};
use crate::report::{Record, RunReport, Verdict};
use crate::sampling::{seeded, task_seed, SampleRng};
use crate::scale::{
    contraction_samples, displacement_index, double_coset_check, find_conjugator, is_tidy, modular,
    sample_double_coset_power, scale, ConjugatorMethod, EngineOptions,
};

/// The checks making up a battery, in run order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CheckKind {
    ScaleValue,
    Witness,
    DoubleCoset,
    TidyCriterion,
    Conjugator,
    Propagation,
    NotClosed,
    Periodic,
    Divisible,
    PowerLaw,
    Modular,
}

impl CheckKind {
    pub const ALL: [CheckKind; 11] = [
        CheckKind::ScaleValue,
        CheckKind::Witness,
        CheckKind::DoubleCoset,
        CheckKind::TidyCriterion,
        CheckKind::Conjugator,
        CheckKind::Propagation,
        CheckKind::NotClosed,
        CheckKind::Periodic,
        CheckKind::Divisible,
        CheckKind::PowerLaw,
        CheckKind::Modular,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CheckKind::ScaleValue => "scale-value",
            CheckKind::Witness => "witness",
            CheckKind::DoubleCoset => "double-coset",
            CheckKind::TidyCriterion => "tidy-criterion",
            CheckKind::Conjugator => "conjugator",
            CheckKind::Propagation => "propagation",
            CheckKind::NotClosed => "not-closed",
            CheckKind::Periodic => "periodic",
            CheckKind::Divisible => "divisible",
            CheckKind::PowerLaw => "power-law",
            CheckKind::Modular => "modular",
        }
    }

    fn tag(self) -> u64 {
        CheckKind::ALL.iter().position(|&k| k == self).expect("listed") as u64
    }
}

/// Settings shared by every task of a run.
#[derive(Clone, Debug)]
struct Ctx {
    seed: u64,
    opts: EngineOptions,
    bound: u32,
    conjugator_k: u32,
    samples: SampleCounts,
}

impl Ctx {
    fn rng(&self, check: CheckKind, family: FamilyKind, i: usize) -> (u64, SampleRng) {
        let fam_tag = FamilyKind::ALL.iter().position(|&k| k == family).expect("listed") as u64;
        let s = task_seed(self.seed, &[check.tag(), fam_tag, i as u64]);
        (s, seeded(s))
    }
}

/// A check body, generic over the family and its finite-covolume subgroup.
trait CaseFn: Sync {
    const KIND: CheckKind;

    fn call<H: CovolumeSubgroup>(&self, fam: &H::Family, lattice: &H, n_max: u32, i: usize, ctx: &Ctx) -> Record;
}

fn base_record<F: Family>(fam: &F, check: CheckKind, seed: u64, extra: Value) -> Record {
    let mut inputs = json!({ "params": fam.params(), "seed": seed });
    if let (Value::Object(m), Value::Object(e)) = (&mut inputs, extra) {
        m.extend(e);
    }
    Record::new(fam.name(), check.name(), inputs)
}

fn run_tasks<T: Sync>(parallel: bool, tasks: &[T], f: impl Fn(&T) -> Record + Sync + Send) -> Vec<Record> {
    if parallel {
        tasks.par_iter().map(f).collect()
    } else {
        tasks.iter().map(f).collect()
    }
}

/// The affine case for task `i`: primes cycle fastest, then moduli.
fn affine_case(cfg: &ExperimentConfig, i: usize) -> (AffineGroup, AffineCovolume) {
    let a = cfg.affine.as_ref().expect("affine configured");
    let p = a.primes[i % a.primes.len()];
    let m = a.moduli[(i / a.primes.len()) % a.moduli.len()];
    (AffineGroup::new(p).expect("validated prime"), AffineCovolume::new(m).expect("validated modulus"))
}

fn dispatch<C: CaseFn>(cfg: &ExperimentConfig, ctx: &Ctx, c: &C, count: usize) -> Vec<Record> {
    let tasks: Vec<(FamilyKind, usize)> =
        cfg.families().into_iter().flat_map(|k| (0..count).map(move |i| (k, i))).collect();
    run_tasks(cfg.parallel, &tasks, |&(kind, i)| match kind {
        FamilyKind::Affine => {
            let (fam, lat) = affine_case(cfg, i);
            let n_max = cfg.affine.as_ref().and_then(|a| a.n_max).unwrap_or(lat.default_n_max());
            c.call(&fam, &lat, n_max, i, ctx)
        }
        FamilyKind::Sym3 => {
            let n_max = cfg.sym3.as_ref().and_then(|s| s.n_max).unwrap_or(Sym3Lattice.default_n_max());
            c.call(&Sym3Group, &Sym3Lattice, n_max, i, ctx)
        }
        FamilyKind::Lamp => {
            let n_max = cfg.lamp.as_ref().and_then(|l| l.n_max).unwrap_or(RationalLattice.default_n_max());
            c.call(&LampGroup, &RationalLattice, n_max, i, ctx)
        }
    })
}

fn family_kind<F: Family>(fam: &F) -> FamilyKind {
    fam.name().parse().expect("family names match FamilyKind")
}

struct WitnessCase;

impl CaseFn for WitnessCase {
    const KIND: CheckKind = CheckKind::Witness;

    fn call<H: CovolumeSubgroup>(&self, fam: &H::Family, lattice: &H, n_max: u32, i: usize, ctx: &Ctx) -> Record {
        let (seed, mut rng) = ctx.rng(Self::KIND, family_kind(fam), i);
        let x = fam.random_element(&mut rng, ctx.bound);
        let rec = base_record(
            fam,
            Self::KIND,
            seed,
            json!({ "x": x.to_string(), "subgroup": lattice.describe(), "n_max": n_max }),
        );
        let wopts = WitnessOptions {
            n_max,
            conjugator_k: ctx.conjugator_k,
            contraction_samples: ctx.samples.witness_contraction,
            sample_bound: ctx.bound,
            seed: rng.random(),
        };
        match find_witness(fam, lattice, &x, &wopts, &ctx.opts) {
            Ok(w) => rec.outcome(w.to_json(), Verdict::from_bool(w.holds()), w.scale_x.to_json()),
            Err(e) => rec.error(&e),
        }
    }
}

struct DoubleCosetCase;

impl CaseFn for DoubleCosetCase {
    const KIND: CheckKind = CheckKind::DoubleCoset;

    fn call<H: CovolumeSubgroup>(&self, fam: &H::Family, _lattice: &H, _n_max: u32, i: usize, ctx: &Ctx) -> Record {
        let (seed, mut rng) = ctx.rng(Self::KIND, family_kind(fam), i);
        let x = fam.random_element(&mut rng, ctx.bound);
        let n = rng.random_range(1..=ctx.samples.double_coset_n_max);
        let rec = base_record(fam, Self::KIND, seed, json!({ "x": x.to_string(), "n": n }));
        let mut run = || -> crate::Result<Record> {
            let v = scale(fam, &x, &ctx.opts)?.tidy_v;
            let y = sample_double_coset_power(fam, &x, &v, n, &mut rng, ctx.bound);
            let report = double_coset_check(fam, &y, &x, &v, n, &ctx.opts)?;
            Ok(rec.clone().outcome(
                json!({ "y": y.to_string(), "tidy_v": v.to_string(), "report": report }),
                Verdict::from_bool(report.holds()),
                Value::Null,
            ))
        };
        run().unwrap_or_else(|e| rec.error(&e))
    }
}

struct TidyCase;

impl CaseFn for TidyCase {
    const KIND: CheckKind = CheckKind::TidyCriterion;

    fn call<H: CovolumeSubgroup>(&self, fam: &H::Family, _lattice: &H, _n_max: u32, i: usize, ctx: &Ctx) -> Record {
        let (seed, mut rng) = ctx.rng(Self::KIND, family_kind(fam), i);
        let x = fam.random_element(&mut rng, ctx.bound);
        let cands = fam.candidates(&x, ctx.opts.candidate_radius + 1);
        let v = cands[rng.random_range(0..cands.len())].clone();
        let rec = base_record(fam, Self::KIND, seed, json!({ "x": x.to_string(), "v": v.to_string() }));
        match tidy_criterion(fam, &x, &v, &ctx.opts) {
            Ok((out, ok, cert)) => rec.outcome(out, Verdict::from_bool(ok), cert),
            Err(e) => rec.error(&e),
        }
    }
}

/// `is_tidy(x, V)` agrees with `displacement_index(x, V) = s(x)`.
fn tidy_criterion<F: Family>(
    fam: &F,
    x: &F::Element,
    v: &F::Subgroup,
    opts: &EngineOptions,
) -> crate::Result<(Value, bool, Value)> {
    let report = is_tidy(fam, x, v, opts)?;
    let index = displacement_index(fam, x, v)?;
    let s = scale(fam, x, opts)?.scale;
    let ok = report.tidy == (index == s);
    Ok((json!({ "tidy": report.tidy, "index": index.to_string(), "scale": s.to_string() }), ok, report.to_json()))
}

struct ConjugatorCase;

impl CaseFn for ConjugatorCase {
    const KIND: CheckKind = CheckKind::Conjugator;

    fn call<H: CovolumeSubgroup>(&self, fam: &H::Family, _lattice: &H, _n_max: u32, i: usize, ctx: &Ctx) -> Record {
        let (seed, mut rng) = ctx.rng(Self::KIND, family_kind(fam), i);
        let x = fam.random_element(&mut rng, ctx.bound);
        let rec = base_record(fam, Self::KIND, seed, json!({ "x": x.to_string(), "k": ctx.conjugator_k }));
        let mut run = || -> crate::Result<Record> {
            let v = scale(fam, &x, &ctx.opts)?.tidy_v;
            let y = sample_double_coset_power(fam, &x, &v, 1, &mut rng, ctx.bound);
            let found = find_conjugator(fam, &y, &x, &v, ctx.conjugator_k, &ctx.opts)?;
            Ok(rec.clone().outcome(
                json!({ "y": y.to_string(), "tidy_v": v.to_string(), "conjugator": found.to_json() }),
                Verdict::Pass,
                Value::Null,
            ))
        };
        run().unwrap_or_else(|e| rec.error(&e))
    }
}

struct PropagationCase;

impl CaseFn for PropagationCase {
    const KIND: CheckKind = CheckKind::Propagation;

    fn call<H: CovolumeSubgroup>(&self, fam: &H::Family, lattice: &H, _n_max: u32, i: usize, ctx: &Ctx) -> Record {
        let (seed, mut rng) = ctx.rng(Self::KIND, family_kind(fam), i);
        let count = ctx.samples.propagation;
        let g: Vec<_> = (0..count).map(|_| fam.random_element(&mut rng, ctx.bound)).collect();
        let h: Vec<_> = (0..count).map(|_| lattice.sample(fam, &mut rng, ctx.bound)).collect();
        let probes = contraction_samples(fam, &mut rng, ctx.samples.probes, ctx.bound);
        let rec = base_record(fam, Self::KIND, seed, json!({ "subgroup": lattice.describe(), "samples": count }));
        let uni = match verify_uniscalar_propagation(fam, &g, &h, &ctx.opts) {
            Ok(u) => u,
            Err(e) => return rec.error(&e),
        };
        let aniso = verify_anisotropic_propagation(fam, &g, &h, &probes);
        let falsified = uni.outcome == Propagation::Falsified
            || aniso.outcome == Propagation::Falsified
            || !aniso.inconsistencies.is_empty();
        let verdict = if falsified {
            Verdict::Fail
        } else if uni.outcome == Propagation::Vacuous && aniso.outcome == Propagation::Vacuous {
            Verdict::Vacuous
        } else {
            Verdict::Pass
        };
        rec.outcome(
            json!({
                "uniscalar": uni.outcome,
                "anisotropic": aniso.outcome,
                "con_classes": aniso.con_classes,
                "not_closed": aniso.not_closed.len(),
            }),
            verdict,
            json!({ "uniscalar": uni, "anisotropic": aniso }),
        )
    }
}

struct PowerLawCase;

impl CaseFn for PowerLawCase {
    const KIND: CheckKind = CheckKind::PowerLaw;

    fn call<H: CovolumeSubgroup>(&self, fam: &H::Family, _lattice: &H, _n_max: u32, i: usize, ctx: &Ctx) -> Record {
        let (seed, mut rng) = ctx.rng(Self::KIND, family_kind(fam), i);
        let x = fam.random_element(&mut rng, ctx.bound);
        let n = rng.random_range(1..=4u32);
        let rec = base_record(fam, Self::KIND, seed, json!({ "x": x.to_string(), "n": n }));
        let xn = fam.pow(&x, n as i64);
        let probes = contraction_samples(fam, &mut rng, ctx.samples.probes, ctx.bound);
        let run = || -> crate::Result<Record> {
            let sx = scale(fam, &x, &ctx.opts)?.scale;
            let sxn = scale(fam, &xn, &ctx.opts)?.scale;
            let mismatch = probes
                .iter()
                .find(|g| fam.in_contraction(g, &x).verdict != fam.in_contraction(g, &xn).verdict)
                .map(|g| g.to_string());
            let same_con = fam.contraction_group(&x) == fam.contraction_group(&xn);
            let ok = sxn == sx.pow(n) && mismatch.is_none() && same_con;
            Ok(rec.clone().outcome(
                json!({
                    "scale_x": sx.to_string(),
                    "scale_xn": sxn.to_string(),
                    "con_x": fam.contraction_group(&x),
                    "con_xn": fam.contraction_group(&xn),
                    "probes": probes.len(),
                }),
                Verdict::from_bool(ok),
                json!({ "membership_mismatch": mismatch }),
            ))
        };
        run().unwrap_or_else(|e| rec.error(&e))
    }
}

struct ModularCase;

impl CaseFn for ModularCase {
    const KIND: CheckKind = CheckKind::Modular;

    fn call<H: CovolumeSubgroup>(&self, fam: &H::Family, _lattice: &H, _n_max: u32, i: usize, ctx: &Ctx) -> Record {
        let (seed, mut rng) = ctx.rng(Self::KIND, family_kind(fam), i);
        let x = fam.random_element(&mut rng, ctx.bound);
        let rec = base_record(fam, Self::KIND, seed, json!({ "x": x.to_string() }));
        let run = || -> crate::Result<Record> {
            let a = modular(fam, &x, &ctx.opts)?;
            let b = modular(fam, &fam.inv(&x), &ctx.opts)?;
            let product = &a * &b;
            Ok(rec.clone().outcome(
                json!({ "modular_x": a.to_string(), "modular_x_inv": b.to_string(), "product": product.to_string() }),
                Verdict::from_bool(product == Rational::one()),
                Value::Null,
            ))
        };
        run().unwrap_or_else(|e| rec.error(&e))
    }
}

fn expected_power(p: u64, e: u64) -> IndexValue {
    IndexValue::Finite(BigUint::from(p).pow(e as u32))
}

/// `s((0, -k)) = p^k`, `s((0, k)) = 1`, and the values on `H = Q_p ⋊ mZ`.
fn scale_value_records(cfg: &ExperimentConfig, ctx: &Ctx) -> Vec<Record> {
    let Some(a) = &cfg.affine else {
        return Vec::new();
    };
    let mut tasks = Vec::new();
    for &p in &a.primes {
        for k in 0..=a.scale_k_max.map_or(-1, |k| k as i64) {
            tasks.push((p, None, -k, expected_power(p, k as u64)));
            tasks.push((p, None, k, IndexValue::one()));
        }
        for &m in &a.moduli {
            for k in 0..=a.lattice_k_max.map_or(-1, |k| k as i64) {
                let e = m as i64 * k;
                tasks.push((p, Some(m), -e, expected_power(p, e as u64)));
            }
        }
    }
    run_tasks(cfg.parallel, &tasks, |(p, m, shift, expected)| {
        let fam = AffineGroup::new(*p).expect("validated prime");
        let x = fam.element(Rational::zero(), *shift);
        let mut inputs = json!({ "params": fam.params(), "x": x.to_string(), "expected": expected.to_string() });
        let in_h = m.map(|m| AffineCovolume { m }.contains(&x));
        if let Some(m) = m {
            inputs["subgroup"] = json!(AffineCovolume { m: *m }.describe());
        }
        let rec = Record::new(fam.name(), CheckKind::ScaleValue.name(), inputs);
        match scale(&fam, &x, &ctx.opts) {
            Ok(cert) => {
                let ok = cert.scale == *expected && in_h != Some(false);
                rec.outcome(
                    json!({ "scale": cert.scale.to_string(), "in_subgroup": in_h }),
                    Verdict::from_bool(ok),
                    cert.to_json(),
                )
            }
            Err(e) => rec.error(&e),
        }
    })
}

/// `(123)` at coordinate 0 with the default pattern subgroup: index 2, scale 1.
fn sym3_negative_instance(ctx: &Ctx) -> Record {
    let fam = Sym3Group;
    let x = Sym3Element::from_parts(&[crate::arith::Perm3::C123], crate::arith::Perm3::E).expect("valid");
    let v = Sym3Subgroup::with_floor(0);
    let rec = Record::new(
        fam.name(),
        CheckKind::TidyCriterion.name(),
        json!({ "x": x.to_string(), "v": v.to_string(), "fixed": "negative-instance" }),
    );
    match tidy_criterion(&fam, &x, &v, &ctx.opts) {
        Ok((out, ok, cert)) => {
            let negative = out["tidy"] == json!(false) && out["index"] == json!("2") && out["scale"] == json!("1");
            rec.outcome(out, Verdict::from_bool(ok && negative), cert)
        }
        Err(e) => rec.error(&e),
    }
}

/// `x = (0, -1)`, `y = (1, -1)`, `V = level 0`: the closed form gives
/// `t = (p/(p-1), 0)`.
fn affine_closed_form_conjugator(p: u64, ctx: &Ctx) -> Record {
    let fam = AffineGroup::new(p).expect("validated prime");
    let x = fam.element(Rational::zero(), -1);
    let y = fam.element(Rational::one(), -1);
    let v = crate::families::AffineSubgroup::Level(0);
    let expected = fam.element(Rational::new(p as i64, p as i64 - 1), 0);
    let rec = Record::new(
        fam.name(),
        CheckKind::Conjugator.name(),
        json!({ "params": fam.params(), "x": x.to_string(), "y": y.to_string(), "v": v.to_string(),
                "k": ctx.conjugator_k, "fixed": "closed-form" }),
    );
    match find_conjugator(&fam, &y, &x, &v, ctx.conjugator_k, &ctx.opts) {
        Ok(found) => {
            let ok = found.t == expected && found.method == ConjugatorMethod::ClosedForm;
            rec.outcome(
                json!({ "conjugator": found.to_json(), "expected_t": expected.to_string() }),
                Verdict::from_bool(ok),
                Value::Null,
            )
        }
        Err(e) => rec.error(&e),
    }
}

fn periodic_record(cfg: &ExperimentConfig, ctx: &Ctx) -> Vec<Record> {
    if cfg.sym3.is_none() || ctx.samples.periodic == 0 {
        return Vec::new();
    }
    let (seed, mut rng) = ctx.rng(CheckKind::Periodic, FamilyKind::Sym3, 0);
    let count = ctx.samples.periodic;
    let h: Vec<Sym3Element> = (0..count).map(|_| Sym3Lattice.sample(&Sym3Group, &mut rng, ctx.bound)).collect();
    let x: Vec<Sym3Element> = (0..count).map(|_| Sym3Group.random_element(&mut rng, ctx.bound)).collect();
    let rec = base_record(&Sym3Group, CheckKind::Periodic, seed, json!({ "samples": count }));
    vec![match verify_periodic(&Sym3Group, &Sym3Lattice, &h, &x, &ctx.opts) {
        Ok(r) => rec.outcome(
            json!({ "max_lattice_order": r.max_lattice_order, "exponents": r.exponents, "x_checked": r.x_checked }),
            Verdict::from_bool(r.holds()),
            json!({ "failures": r.failures }),
        ),
        Err(e) => rec.error(&e),
    }]
}

fn divisible_record(cfg: &ExperimentConfig, ctx: &Ctx) -> Vec<Record> {
    let Some(l) = &cfg.lamp else {
        return Vec::new();
    };
    let qs = cfg.divisible_q();
    if qs.is_empty() {
        return Vec::new();
    }
    let (seed, mut rng) = ctx.rng(CheckKind::Divisible, FamilyKind::Lamp, 0);
    let g: Vec<LampElement> =
        (0..ctx.samples.propagation).map(|_| LampGroup.random_element(&mut rng, ctx.bound)).collect();
    let rec = base_record(
        &LampGroup,
        CheckKind::Divisible,
        seed,
        json!({ "q": l.divisible_q, "k_max": l.divisible_k_max, "samples": g.len() }),
    );
    vec![match verify_divisible(&LampGroup, &qs, l.divisible_k_max, &g, &ctx.opts) {
        Ok(r) => rec.outcome(
            json!({ "roots_checked": r.roots_checked, "scales_checked": r.scales_checked,
                    "contracting_lamps": r.contracting_lamps }),
            Verdict::from_bool(r.holds()),
            json!({ "failures": r.failures }),
        ),
        Err(e) => rec.error(&e),
    }]
}

/// One record per lamp sample with nonzero shift: the all-on configuration
/// is a limit of `con(x)` outside `con(x)`.
fn not_closed_records(cfg: &ExperimentConfig, ctx: &Ctx) -> Vec<Record> {
    if cfg.lamp.is_none() {
        return Vec::new();
    }
    let tasks: Vec<usize> = (0..ctx.samples.propagation).collect();
    run_tasks(cfg.parallel, &tasks, |&i| {
        let (seed, mut rng) = ctx.rng(CheckKind::NotClosed, FamilyKind::Lamp, i);
        let mut x = LampGroup.random_element(&mut rng, ctx.bound);
        if x.shift.is_zero() {
            x.shift = Rational::one();
        }
        let windows: Vec<Vec<Rational>> = (0..3)
            .map(|_| LampGroup.sample_member(&crate::families::LampSubgroup::full(), &mut rng, ctx.bound))
            .map(|g| match g.lamps {
                crate::families::Support::Finite(s) | crate::families::Support::Cofinite(s) => s.into_iter().collect(),
            })
            .collect();
        let rec = base_record(&LampGroup, CheckKind::NotClosed, seed, json!({ "x": x.to_string() }));
        match lamp_not_closed_certificate(&LampGroup, &x, &windows) {
            Some(c) => {
                let nontrivial = !LampGroup.contraction_group(&x).is_trivial();
                rec.outcome(
                    json!({ "con": LampGroup.contraction_group(&x), "closed": false }),
                    Verdict::from_bool(c.holds() && nontrivial),
                    serde_json::to_value(&c).expect("serializable"),
                )
            }
            None => rec.outcome(Value::Null, Verdict::Fail, Value::Null),
        }
    })
}

fn ctx_of(cfg: &ExperimentConfig) -> Ctx {
    Ctx {
        seed: cfg.seed,
        opts: cfg.engine.options(),
        bound: cfg.engine.sample_bound,
        conjugator_k: cfg.engine.conjugator_k,
        samples: cfg.samples.clone(),
    }
}

/// Runs one check over every configured family.
pub fn run_check(cfg: &ExperimentConfig, kind: CheckKind) -> Vec<Record> {
    let ctx = ctx_of(cfg);
    let s = &cfg.samples;
    match kind {
        CheckKind::ScaleValue => scale_value_records(cfg, &ctx),
        CheckKind::Witness => dispatch(cfg, &ctx, &WitnessCase, s.witness),
        CheckKind::DoubleCoset => dispatch(cfg, &ctx, &DoubleCosetCase, s.double_coset),
        CheckKind::TidyCriterion => {
            let mut out = dispatch(cfg, &ctx, &TidyCase, s.tidy);
            if cfg.sym3.as_ref().is_some_and(|c| c.negative_instance) {
                out.push(sym3_negative_instance(&ctx));
            }
            out
        }
        CheckKind::Conjugator => {
            let mut out = Vec::new();
            if let Some(a) = &cfg.affine {
                if s.conjugator > 0 {
                    out.extend(a.primes.iter().map(|&p| affine_closed_form_conjugator(p, &ctx)));
                }
            }
            out.extend(dispatch(cfg, &ctx, &ConjugatorCase, s.conjugator));
            out
        }
        CheckKind::Propagation => dispatch(cfg, &ctx, &PropagationCase, usize::from(s.propagation > 0)),
        CheckKind::NotClosed => not_closed_records(cfg, &ctx),
        CheckKind::Periodic => periodic_record(cfg, &ctx),
        CheckKind::Divisible => divisible_record(cfg, &ctx),
        CheckKind::PowerLaw => dispatch(cfg, &ctx, &PowerLawCase, s.power_law),
        CheckKind::Modular => dispatch(cfg, &ctx, &ModularCase, s.modular),
    }
}

/// Runs every check, in [`CheckKind::ALL`] order.
pub fn run(cfg: &ExperimentConfig) -> RunReport {
    let mut report = RunReport::default();
    for kind in CheckKind::ALL {
        let start = Instant::now();
        let records = run_check(cfg, kind);
        report.timings.insert(kind.name().to_string(), start.elapsed());
        report.records.extend(records);
    }
    report
}
