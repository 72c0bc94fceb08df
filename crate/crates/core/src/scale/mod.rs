//! Scale function, tidy subgroups, contraction groups, and the double-coset
//! and conjugator lemmas.

mod contraction;
mod lemmas;
mod tidy;

pub use contraction::{
    contraction_conjugate_equal, contraction_samples, in_contraction, ConjugacyReport, ContractionCertificate,
    ContractionDecision, ContractionGroup,
};
pub use lemmas::{
    double_coset_check, find_conjugator, sample_double_coset_power, ConjugatorMethod, ConjugatorResult,
    DoubleCosetReport,
};
pub use tidy::{displacement_index, is_tidy, limit_subgroup, EngineOptions, TidyReport};

use serde_json::json;

use crate::arith::Rational;
use crate::error::{Error, Result};
use crate::group::{Family, IndexValue};

/// The scale of an element together with the tidy subgroup attaining it.
#[derive(Clone, Debug)]
pub struct ScaleCertificate<F: Family> {
    pub scale: IndexValue,
    pub tidy_v: F::Subgroup,
    pub v_plus: F::Subgroup,
    pub v_minus: F::Subgroup,
    /// Every candidate with its displacement index, in examination order.
    pub candidates_examined: Vec<(F::Subgroup, IndexValue)>,
}

impl<F: Family> ScaleCertificate<F> {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "scale": self.scale.to_string(),
            "tidy_v": self.tidy_v.to_string(),
            "v_plus": self.v_plus.to_string(),
            "v_minus": self.v_minus.to_string(),
            "candidates": self
                .candidates_examined
                .iter()
                .map(|(v, i)| json!([v.to_string(), i.to_string()]))
                .collect::<Vec<_>>(),
        })
    }
}

/// `s(x)`: the least displacement index over the family's candidates, with
/// the minimiser certified tidy.
///
/// A tidy subgroup attains the global minimum over all compact open
/// subgroups, so a tidy minimiser among the candidates certifies the value.
/// If no minimiser is tidy the result is [`Error::Uncertified`].
pub fn scale<F: Family>(fam: &F, x: &F::Element, opts: &EngineOptions) -> Result<ScaleCertificate<F>> {
    let mut examined = Vec::new();
    for v in fam.candidates(x, opts.candidate_radius) {
        let idx = displacement_index(fam, x, &v)?;
        examined.push((v, idx));
    }
    let min = examined
        .iter()
        .map(|(_, i)| i.clone())
        .min()
        .ok_or_else(|| Error::Precondition(format!("no candidate subgroups for {x}")))?;
    for (v, idx) in &examined {
        if *idx != min {
            continue;
        }
        let report = is_tidy(fam, x, v, opts)?;
        if report.tidy {
            return Ok(ScaleCertificate {
                scale: min,
                tidy_v: v.clone(),
                v_plus: report.v_plus,
                v_minus: report.v_minus,
                candidates_examined: examined,
            });
        }
    }
    Err(Error::Uncertified { element: x.to_string(), raw_min: min.to_string() })
}

/// `Δ(x) = s(x) / s(x^-1)`.
pub fn modular<F: Family>(fam: &F, x: &F::Element, opts: &EngineOptions) -> Result<Rational> {
    let up = scale(fam, x, opts)?.scale;
    let down = scale(fam, &fam.inv(x), opts)?.scale;
    match (up, down) {
        (IndexValue::Finite(a), IndexValue::Finite(b)) => Ok(Rational::from(a) / Rational::from(b)),
        _ => Err(Error::Inconsistent(format!("infinite scale for {x}"))),
    }
}
