use rand::Rng;
use serde::Serialize;
use serde_json::json;

use super::{is_tidy, scale, EngineOptions, TidyReport};
use crate::error::{Error, Result};
use crate::group::{Family, IndexValue};

fn require_tidy<F: Family>(fam: &F, x: &F::Element, v: &F::Subgroup, opts: &EngineOptions) -> Result<TidyReport<F>> {
    let report = is_tidy(fam, x, v, opts)?;
    if !report.tidy {
        return Err(Error::Precondition(format!("{v} is not tidy for {x}")));
    }
    Ok(report)
}

/// A random element of `(V x V)^n`: `v_1 x v_1' · v_2 x v_2' ⋯ v_n x v_n'`.
pub fn sample_double_coset_power<F: Family, R: Rng>(
    fam: &F,
    x: &F::Element,
    v: &F::Subgroup,
    n: u32,
    rng: &mut R,
    bound: u32,
) -> F::Element {
    (0..n).fold(fam.identity(), |acc, _| {
        let left = fam.sample_member(v, rng, bound);
        let right = fam.sample_member(v, rng, bound);
        fam.mul(&acc, &fam.mul(&fam.mul(&left, x), &right))
    })
}

/// Result of checking `y ∈ V_- x^n V_+` and `s(y) = s(x)^n`.
#[derive(Clone, Debug, Serialize)]
pub struct DoubleCosetReport {
    pub in_normal_form: bool,
    pub scale_x: IndexValue,
    pub scale_y: IndexValue,
    pub power_law: bool,
}

impl DoubleCosetReport {
    pub fn holds(&self) -> bool {
        self.in_normal_form && self.power_law
    }
}

/// For `V` tidy for `x` and `y ∈ (V x V)^n`, checks `y ∈ V_- x^n V_+`
/// symbolically and compares the certified scales.
pub fn double_coset_check<F: Family>(
    fam: &F,
    y: &F::Element,
    x: &F::Element,
    v: &F::Subgroup,
    n: u32,
    opts: &EngineOptions,
) -> Result<DoubleCosetReport> {
    let tidy = require_tidy(fam, x, v, opts)?;
    let xn = fam.pow(x, n as i64);
    let in_normal_form = fam.in_double_coset(y, &tidy.v_minus, &xn, &tidy.v_plus);
    let scale_x = scale(fam, x, opts)?.scale;
    let scale_y = scale(fam, y, opts)?.scale;
    Ok(DoubleCosetReport { in_normal_form, power_law: scale_y == scale_x.pow(n), scale_x, scale_y })
}

/// How a conjugator was obtained.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ConjugatorMethod {
    ClosedForm,
    /// `con(x^-1)` is trivial, so `t = e` and `y^k x^-k ∈ V` is checked directly.
    TrivialContraction,
    NetSearch {
        tried: usize,
    },
}

#[derive(Clone, Debug)]
pub struct ConjugatorResult<F: Family> {
    pub t: F::Element,
    pub method: ConjugatorMethod,
    /// The defining condition was verified for `k = 0..=verified_through`.
    pub verified_through: u32,
}

impl<F: Family> ConjugatorResult<F> {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "t": self.t.to_string(),
            "method": self.method,
            "verified_through": self.verified_through,
        })
    }
}

/// `t^-1 y^k t x^-k ∈ V` for every `k` in `0..=max_k`.
fn conjugates_into<F: Family>(
    fam: &F,
    t: &F::Element,
    y: &F::Element,
    x: &F::Element,
    v: &F::Subgroup,
    max_k: u32,
) -> bool {
    let t_inv = fam.inv(t);
    let x_inv = fam.inv(x);
    let mut yk = fam.identity();
    let mut xk_inv = fam.identity();
    for k in 0..=max_k {
        if k > 0 {
            yk = fam.mul(&yk, y);
            xk_inv = fam.mul(&xk_inv, &x_inv);
        }
        let w = fam.mul(&fam.mul(&fam.mul(&t_inv, &yk), t), &xk_inv);
        if !fam.member(&w, v) {
            return false;
        }
    }
    true
}

/// For `V` tidy for `x` and `y ∈ V x V`, finds `t ∈ V_+ ∩ con(x^-1)` with
/// `t^-1 y^k t x^-k ∈ V` for `k = 0..=max_k`.
///
/// Tries the family's closed form first, then `t = e` when `con(x^-1)` is
/// trivial, then the family's conjugator net in order.
pub fn find_conjugator<F: Family>(
    fam: &F,
    y: &F::Element,
    x: &F::Element,
    v: &F::Subgroup,
    max_k: u32,
    opts: &EngineOptions,
) -> Result<ConjugatorResult<F>> {
    if !fam.in_double_coset(y, v, x, v) {
        return Err(Error::Precondition(format!("{y} is not in V x V for x = {x}, V = {v}")));
    }
    let tidy = require_tidy(fam, x, v, opts)?;
    let x_inv = fam.inv(x);
    let admissible = |t: &F::Element| {
        fam.member(t, &tidy.v_plus) && fam.in_contraction(t, &x_inv).verdict && conjugates_into(fam, t, y, x, v, max_k)
    };
    let found = |t: F::Element, method| ConjugatorResult { t, method, verified_through: max_k };

    if let Some(t) = fam.closed_form_conjugator(y, x, v) {
        if admissible(&t) {
            return Ok(found(t, ConjugatorMethod::ClosedForm));
        }
    }
    if fam.contraction_group(&x_inv).is_trivial() {
        let e = fam.identity();
        if conjugates_into(fam, &e, y, x, v, max_k) {
            return Ok(found(e, ConjugatorMethod::TrivialContraction));
        }
    } else {
        for (tried, t) in fam.conjugator_net(y, x, &tidy.v_plus).into_iter().enumerate() {
            if admissible(&t) {
                return Ok(found(t, ConjugatorMethod::NetSearch { tried: tried + 1 }));
            }
        }
    }
    Err(Error::NoConjugator { y: y.to_string(), x: x.to_string() })
}
