use std::fmt;

use rand::Rng;
use serde::Serialize;

use crate::group::Family;

/// Why an element does or does not contract to the identity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ContractionCertificate {
    /// `g = e`.
    Identity,
    /// Affine: conjugation multiplies the lamp coordinate by `p^growth_per_step`,
    /// so its valuation tends to infinity iff the growth is positive.
    ValuationGrowth { valuation: String, growth_per_step: i64 },
    /// Lamplighter: conjugation translates the support by `step`; a finite
    /// support leaves every finite window when `step != 0`, a co-finite
    /// support never does.
    SupportEscape { cofinite: bool, step: String },
    /// Sym3: `x` has finite order `period`, so the conjugates of `g` cycle.
    CoordinatePeriodicity { period: u32 },
    /// The discrete coordinate of `g` is preserved by conjugation.
    ShiftObstruction { shift: String },
}

/// Exact answer to `x^n g x^-n -> e`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ContractionDecision {
    pub verdict: bool,
    pub certificate: ContractionCertificate,
}

impl ContractionDecision {
    pub fn identity() -> Self {
        ContractionDecision { verdict: true, certificate: ContractionCertificate::Identity }
    }
}

/// Structural description of a contraction group `con(x)`, as far as it is
/// visible on representable elements.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ContractionGroup {
    Trivial,
    /// Affine `Q_p × {0}`; closed.
    LampLine,
    /// Finitely supported lamps at shift zero; dense in the lamp group, not closed.
    FiniteSupportLamps,
}

impl ContractionGroup {
    pub fn is_trivial(&self) -> bool {
        matches!(self, ContractionGroup::Trivial)
    }

    pub fn is_closed(&self) -> bool {
        !matches!(self, ContractionGroup::FiniteSupportLamps)
    }
}

impl fmt::Display for ContractionGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ContractionGroup::Trivial => "trivial",
            ContractionGroup::LampLine => "lamp-line",
            ContractionGroup::FiniteSupportLamps => "finite-support-lamps",
        })
    }
}

/// `g ∈ con(x)`.
pub fn in_contraction<F: Family>(fam: &F, g: &F::Element, x: &F::Element) -> ContractionDecision {
    fam.in_contraction(g, x)
}

/// Outcome of comparing `t con(x) t^-1` with `con(y)`.
#[derive(Clone, Debug, Serialize)]
pub struct ConjugacyReport {
    pub holds: bool,
    pub samples: usize,
    /// First sample on which membership disagreed.
    pub counterexample: Option<String>,
    pub structural: Option<bool>,
    pub con_x: ContractionGroup,
    pub con_y: ContractionGroup,
}

/// Checks `t con(x) t^-1 = con(y)`: pointwise on `samples` and, since every
/// contraction group here has a structural description, on the structure.
pub fn contraction_conjugate_equal<F: Family>(
    fam: &F,
    x: &F::Element,
    y: &F::Element,
    t: &F::Element,
    samples: &[F::Element],
) -> ConjugacyReport {
    let counterexample = samples
        .iter()
        .find(|g| fam.in_contraction(g, x).verdict != fam.in_contraction(&fam.conj_element(t, g), y).verdict)
        .map(|g| g.to_string());
    let con_x = fam.contraction_group(x);
    let con_y = fam.contraction_group(y);
    let structural = fam.conjugate_contraction_group(t, &con_x) == con_y;
    ConjugacyReport {
        holds: counterexample.is_none() && structural,
        samples: samples.len(),
        counterexample,
        structural: Some(structural),
        con_x,
        con_y,
    }
}

/// Samples for contraction checks: the identity, `count - 1` probes.
pub fn contraction_samples<F: Family, R: Rng>(fam: &F, rng: &mut R, count: usize, bound: u32) -> Vec<F::Element> {
    let mut out = Vec::with_capacity(count);
    if count > 0 {
        out.push(fam.identity());
    }
    while out.len() < count {
        out.push(fam.contraction_probe(rng, bound));
    }
    out
}
