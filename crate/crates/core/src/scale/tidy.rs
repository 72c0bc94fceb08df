use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{Direction, Family, IndexValue};

/// Knobs shared by the scale engine.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct EngineOptions {
    /// Conjugation steps allowed before a limit subgroup is declared undetermined.
    pub max_steps: usize,
    /// Members of `V` factored explicitly when checking `V = V_+ V_-`.
    pub spot_checks: usize,
    /// Radius of the per-family candidate set.
    pub candidate_radius: u32,
}

impl Default for EngineOptions {
    fn default() -> Self {
        EngineOptions { max_steps: 64, spot_checks: 100, candidate_radius: 3 }
    }
}

fn require_compact_open<F: Family>(fam: &F, v: &F::Subgroup) -> Result<()> {
    let flags = fam.flags(v);
    if flags.is_compact && flags.is_open {
        Ok(())
    } else {
        Err(Error::NotCompactOpen(v.to_string()))
    }
}

/// `[x V x^-1 : x V x^-1 ∩ V]`.
pub fn displacement_index<F: Family>(fam: &F, x: &F::Element, v: &F::Subgroup) -> Result<IndexValue> {
    require_compact_open(fam, v)?;
    let moved = fam.conj_subgroup(x, v);
    let meet = fam.intersect(&moved, v);
    fam.index(&moved, &meet)
}

/// `V_+ = ⋂_{n>=0} x^n V x^-n` or `V_- = ⋂_{n>=0} x^-n V x^n`.
///
/// Uses the family's closed form when it has one. Otherwise iterates the
/// conjugates and stops when the orbit of `V` closes up (the intersection is
/// then over finitely many subgroups) or when the first conjugate contains
/// `V` (all later ones do too). Anything else within `max_steps` is an
/// error.
pub fn limit_subgroup<F: Family>(
    fam: &F,
    x: &F::Element,
    v: &F::Subgroup,
    dir: Direction,
    max_steps: usize,
) -> Result<F::Subgroup> {
    require_compact_open(fam, v)?;
    if let Some(limit) = fam.closed_form_limit(x, v, dir) {
        return Ok(limit);
    }
    let step = match dir {
        Direction::Plus => x.clone(),
        Direction::Minus => fam.inv(x),
    };
    let first = fam.conj_subgroup(&step, v);
    if fam.is_subgroup_of(v, &first) {
        return Ok(v.clone());
    }
    let mut acc = fam.intersect(v, &first);
    let mut current = first;
    for _ in 1..max_steps {
        if current == *v {
            return Ok(acc);
        }
        current = fam.conj_subgroup(&step, &current);
        acc = fam.intersect(&acc, &current);
    }
    if current == *v {
        return Ok(acc);
    }
    Err(Error::Undetermined { element: x.to_string(), subgroup: v.to_string(), steps: max_steps })
}

/// Outcome of the tidiness test for a pair `(x, V)`.
#[derive(Clone, Debug)]
pub struct TidyReport<F: Family> {
    pub tidy: bool,
    pub v_plus: F::Subgroup,
    pub v_minus: F::Subgroup,
    /// `V = V_+ V_-`, decided on descriptors.
    pub factorization: bool,
    /// `V_++` closed.
    pub plus_plus_closed: bool,
    /// Members of `V` factored explicitly.
    pub spot_checked: usize,
}

impl<F: Family> TidyReport<F> {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "tidy": self.tidy,
            "v_plus": self.v_plus.to_string(),
            "v_minus": self.v_minus.to_string(),
            "factorization": self.factorization,
            "plus_plus_closed": self.plus_plus_closed,
            "spot_checked": self.spot_checked,
        })
    }
}

/// Tests whether `V` is tidy for `x`: `V = V_+ V_-` and `V_++` closed.
///
/// When the descriptor test reports a factorization, sampled members of `V`
/// are also factored element by element; a member that fails to factor is
/// reported as [`Error::Inconsistent`].
pub fn is_tidy<F: Family>(fam: &F, x: &F::Element, v: &F::Subgroup, opts: &EngineOptions) -> Result<TidyReport<F>> {
    let v_plus = limit_subgroup(fam, x, v, Direction::Plus, opts.max_steps)?;
    let v_minus = limit_subgroup(fam, x, v, Direction::Minus, opts.max_steps)?;
    let factorization = fam.factorization_holds(v, &v_plus, &v_minus);
    let mut spot_checked = 0;
    if factorization {
        let mut rng = ChaCha8Rng::seed_from_u64(0x7469_6479);
        for _ in 0..opts.spot_checks {
            let g = fam.sample_member(v, &mut rng, 4);
            let ok = fam
                .factor_member(&g, &v_plus, &v_minus)
                .is_some_and(|(a, b)| fam.member(&a, &v_plus) && fam.member(&b, &v_minus) && fam.mul(&a, &b) == g);
            if !ok {
                return Err(Error::Inconsistent(format!(
                    "{g} in {v} does not factor through V_+ = {v_plus}, V_- = {v_minus}"
                )));
            }
            spot_checked += 1;
        }
    }
    let plus_plus_closed = fam.plus_plus_closed(x, &v_plus);
    Ok(TidyReport {
        tidy: factorization && plus_plus_closed,
        v_plus,
        v_minus,
        factorization,
        plus_plus_closed,
        spot_checked,
    })
}
