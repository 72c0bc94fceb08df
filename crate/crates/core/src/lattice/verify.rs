//! Checks that try to falsify propagation from `H` to `G`, periodicity of
//! the `sym3` lattice and divisibility of the lamplighter one.

use std::collections::BTreeMap;

use serde::Serialize;

use super::{divisible_root, CovolumeSubgroup, Sym3Lattice};
use crate::arith::Rational;
use crate::error::Result;
use crate::families::lamp::Support;
use crate::families::{LampElement, LampGroup, LampSubgroup, Sym3Element, Sym3Group};
use crate::group::Family;
use crate::scale::{scale, EngineOptions};

/// Outcome of a propagation check whose premise is a statement about `H`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Propagation {
    /// Premise and conclusion both hold on the samples.
    Confirmed,
    /// Some sample of `H` violates the premise.
    Vacuous,
    /// Premise holds, conclusion fails: an implementation bug.
    Falsified,
}

#[derive(Clone, Debug, Serialize)]
pub struct UniscalarReport {
    pub outcome: Propagation,
    pub h_checked: usize,
    pub g_checked: usize,
    /// An `h` with `s(h) > 1`, with its scale.
    pub premise_counterexample: Option<(String, String)>,
    pub falsifications: Vec<String>,
}

/// If `s(h) = 1` on every `H`-sample, checks `s(x) = 1` on every `G`-sample.
pub fn verify_uniscalar_propagation<F: Family>(
    fam: &F,
    g_samples: &[F::Element],
    h_samples: &[F::Element],
    opts: &EngineOptions,
) -> Result<UniscalarReport> {
    for h in h_samples {
        let s = scale(fam, h, opts)?.scale;
        if !s.is_one() {
            return Ok(UniscalarReport {
                outcome: Propagation::Vacuous,
                h_checked: h_samples.len(),
                g_checked: 0,
                premise_counterexample: Some((h.to_string(), s.to_string())),
                falsifications: Vec::new(),
            });
        }
    }
    let mut falsifications = Vec::new();
    for x in g_samples {
        let s = scale(fam, x, opts)?.scale;
        if !s.is_one() {
            falsifications.push(format!("{x}: scale {s}"));
        }
    }
    Ok(UniscalarReport {
        outcome: if falsifications.is_empty() { Propagation::Confirmed } else { Propagation::Falsified },
        h_checked: h_samples.len(),
        g_checked: g_samples.len(),
        premise_counterexample: None,
        falsifications,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct AnisotropicReport {
    pub outcome: Propagation,
    pub h_checked: usize,
    pub g_checked: usize,
    pub premise_counterexample: Option<String>,
    pub falsifications: Vec<String>,
    /// `con(x)` class of each `G`-sample, counted.
    pub con_classes: BTreeMap<String, usize>,
    /// `G`-samples whose contraction group is not closed.
    pub not_closed: Vec<String>,
    /// Samples where the structural class and the pointwise decisions disagree.
    pub inconsistencies: Vec<String>,
}

/// If `con(h)` is trivial for every `H`-sample, checks the same on every
/// `G`-sample. Also classifies `con(x)` of each `G`-sample as closed or not.
pub fn verify_anisotropic_propagation<F: Family>(
    fam: &F,
    g_samples: &[F::Element],
    h_samples: &[F::Element],
    probes: &[F::Element],
) -> AnisotropicReport {
    let e = fam.identity();
    let mut inconsistencies = Vec::new();
    let mut trivial_con = |x: &F::Element| {
        let structural = fam.contraction_group(x).is_trivial();
        let pointwise = probes.iter().all(|g| *g == e || !fam.in_contraction(g, x).verdict);
        if structural && !pointwise {
            inconsistencies.push(x.to_string());
        }
        structural && pointwise
    };
    let premise_counterexample = h_samples.iter().find(|h| !trivial_con(h)).map(|h| h.to_string());
    let falsifications: Vec<String> = if premise_counterexample.is_none() {
        g_samples.iter().filter(|x| !trivial_con(x)).map(|x| x.to_string()).collect()
    } else {
        Vec::new()
    };
    let mut con_classes = BTreeMap::new();
    let mut not_closed = Vec::new();
    for x in g_samples {
        let class = fam.contraction_group(x);
        *con_classes.entry(class.to_string()).or_insert(0) += 1;
        if !class.is_closed() {
            not_closed.push(x.to_string());
        }
    }
    let outcome = match (&premise_counterexample, falsifications.is_empty()) {
        (Some(_), _) => Propagation::Vacuous,
        (None, true) => Propagation::Confirmed,
        (None, false) => Propagation::Falsified,
    };
    AnisotropicReport {
        outcome,
        h_checked: h_samples.len(),
        g_checked: g_samples.len(),
        premise_counterexample,
        falsifications,
        con_classes,
        not_closed,
        inconsistencies,
    }
}

/// `con(x)` is not closed: the all-on configuration lies outside `con(x)`
/// but every basic neighbourhood of it, given by a finite window, meets
/// `con(x)`.
#[derive(Clone, Debug, Serialize)]
pub struct NotClosedCertificate {
    pub x: String,
    pub limit: String,
    pub limit_outside_con: bool,
    /// `(window, element of con(x) agreeing with the limit on the window)`.
    pub density: Vec<(String, String)>,
    pub density_ok: bool,
}

impl NotClosedCertificate {
    pub fn holds(&self) -> bool {
        self.limit_outside_con && self.density_ok
    }
}

/// Certificate that `con(x)` is not closed, for `x` with nonzero shift.
pub fn lamp_not_closed_certificate(
    fam: &LampGroup,
    x: &LampElement,
    windows: &[Vec<Rational>],
) -> Option<NotClosedCertificate> {
    if x.shift.is_zero() {
        return None;
    }
    let limit = LampElement::new(Support::all_on(), Rational::zero());
    let mut density_ok = true;
    let density = windows
        .iter()
        .map(|w| {
            let near = LampElement::lamps_at(w.iter().cloned());
            let nbhd = LampSubgroup::window(w.iter().cloned());
            // near ∈ limit · V_W and near ∈ con(x)
            let ok = fam.member(&fam.mul(&fam.inv(&limit), &near), &nbhd) && fam.in_contraction(&near, x).verdict;
            density_ok &= ok;
            (nbhd.to_string(), near.to_string())
        })
        .collect();
    Some(NotClosedCertificate {
        x: x.to_string(),
        limit: limit.to_string(),
        limit_outside_con: !fam.in_contraction(&limit, x).verdict,
        density,
        density_ok,
    })
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct PeriodicReport {
    pub lattice_checked: usize,
    pub max_lattice_order: u32,
    pub x_checked: usize,
    /// Exponents `n` used for `x^n = h v`, counted.
    pub exponents: BTreeMap<u32, usize>,
    pub failures: Vec<String>,
}

impl PeriodicReport {
    pub fn holds(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks that lattice elements have finite order, that each `x` has a tidy
/// subgroup `V` it normalises with `x^n = h v` for some `h ∈ H`, `v ∈ V`,
/// and that `x^6 = e`.
pub fn verify_periodic(
    fam: &Sym3Group,
    lattice: &Sym3Lattice,
    h_samples: &[Sym3Element],
    x_samples: &[Sym3Element],
    opts: &EngineOptions,
) -> Result<PeriodicReport> {
    let e = fam.identity();
    let mut report =
        PeriodicReport { lattice_checked: h_samples.len(), x_checked: x_samples.len(), ..PeriodicReport::default() };
    for h in h_samples {
        let ord = h.order();
        report.max_lattice_order = report.max_lattice_order.max(ord);
        if fam.pow(h, ord as i64) != e || !lattice.contains(h) {
            report.failures.push(format!("{h}: order {ord} not confirmed"));
        }
    }
    for x in x_samples {
        if fam.pow(x, 6) != e {
            report.failures.push(format!("{x}: x^6 != e"));
        }
        let v = scale(fam, x, opts)?.tidy_v;
        if fam.conj_subgroup(x, &v) != v {
            report.failures.push(format!("{x}: tidy {v} not normalised"));
            continue;
        }
        let found = (1..=lattice.default_n_max()).find_map(|n| lattice.coset_meets(fam, x, n, &v).map(|h| (n, h)));
        let Some((n, h)) = found else {
            report.failures.push(format!("{x}: no h within the search bound"));
            continue;
        };
        let xn = fam.pow(x, n as i64);
        let rest = fam.mul(&fam.inv(&h), &xn);
        if !(lattice.contains(&h) && fam.member(&rest, &v) && fam.mul(&h, &rest) == xn) {
            report.failures.push(format!("{x}: x^{n} = h v fails for h = {h}"));
            continue;
        }
        *report.exponents.entry(n).or_insert(0) += 1;
    }
    Ok(report)
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct DivisibleReport {
    pub roots_checked: usize,
    pub scales_checked: usize,
    pub contracting_lamps: usize,
    pub failures: Vec<String>,
}

impl DivisibleReport {
    pub fn holds(&self) -> bool {
        self.failures.is_empty()
    }
}

/// For each `q` and `k ≤ k_max`, checks `(0, q/k!)^{k!} = (0, q)`; checks
/// `s ≡ 1` on the translations, their roots and `g_samples`; and checks that
/// the lamp at `0` lies in `con((0, q))` for `q ≠ 0`.
pub fn verify_divisible(
    fam: &LampGroup,
    qs: &[Rational],
    k_max: u32,
    g_samples: &[LampElement],
    opts: &EngineOptions,
) -> Result<DivisibleReport> {
    let mut report = DivisibleReport::default();
    let delta0 = LampElement::lamps_at([Rational::zero()]);
    let unit_scale = |g: &LampElement, report: &mut DivisibleReport| -> Result<()> {
        let s = scale(fam, g, opts)?.scale;
        report.scales_checked += 1;
        if !s.is_one() {
            report.failures.push(format!("{g}: scale {s}"));
        }
        Ok(())
    };
    for q in qs {
        let target = LampElement::translation(q.clone());
        unit_scale(&target, &mut report)?;
        for k in 1..=k_max {
            let (root, fact) = divisible_root(q, k);
            report.roots_checked += 1;
            if fam.pow(&root, fact as i64) != target {
                report.failures.push(format!("{root}^{fact} != {target}"));
            }
            unit_scale(&root, &mut report)?;
        }
        if !q.is_zero() {
            if fam.in_contraction(&delta0, &target).verdict {
                report.contracting_lamps += 1;
            } else {
                report.failures.push(format!("{delta0} not in con({target})"));
            }
        }
    }
    for g in g_samples {
        unit_scale(g, &mut report)?;
    }
    Ok(report)
}
