//! Finite-covolume subgroups `H` and the witnesses `(n, h, t)` tying scales
//! and contraction groups of `G` to those of `H`.
//!
//! The three shipped subgroups have finite covolume by construction:
//! `Q_p ⋊ mZ` has finite index, the even finitely supported sequences meet
//! the compact pattern group trivially with compact quotient, and the
//! translations `Q` in the lamplighter have the compact lamp group as a
//! complement.

mod verify;

pub use verify::{
    lamp_not_closed_certificate, verify_anisotropic_propagation, verify_divisible, verify_periodic,
    verify_uniscalar_propagation, AnisotropicReport, DivisibleReport, NotClosedCertificate, PeriodicReport,
    Propagation, UniscalarReport,
};

use rand::Rng;
use serde_json::json;

use crate::arith::{Perm3, Rational};
use crate::error::{Error, Result};
use crate::families::sym3::even_in_double_coset;
use crate::families::{AffineGroup, LampElement, LampGroup, Sym3Element, Sym3Group};
use crate::group::Family;
use crate::scale::{
    contraction_conjugate_equal, contraction_samples, find_conjugator, is_tidy, scale, ConjugacyReport,
    ConjugatorResult, EngineOptions, ScaleCertificate,
};

/// A closed subgroup of finite covolume with decidable membership.
pub trait CovolumeSubgroup: Send + Sync {
    type Family: Family;

    fn describe(&self) -> String;

    fn contains(&self, g: &<Self::Family as Family>::Element) -> bool;

    fn sample<R: Rng>(&self, fam: &Self::Family, rng: &mut R, bound: u32) -> <Self::Family as Family>::Element;

    /// Some `h ∈ H ∩ V x^n V`, or `None` when the intersection is empty.
    /// `x^n` itself is returned whenever it lies in `H`.
    fn coset_meets(
        &self,
        fam: &Self::Family,
        x: &<Self::Family as Family>::Element,
        n: u32,
        v: &<Self::Family as Family>::Subgroup,
    ) -> Option<<Self::Family as Family>::Element>;

    /// Search bound for the witness exponent.
    fn default_n_max(&self) -> u32;
}

/// `Q_p ⋊ mZ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AffineCovolume {
    pub m: u32,
}

impl AffineCovolume {
    pub fn new(m: u32) -> Result<Self> {
        if m == 0 {
            return Err(Error::Precondition("modulus must be positive".into()));
        }
        Ok(AffineCovolume { m })
    }
}

impl CovolumeSubgroup for AffineCovolume {
    type Family = AffineGroup;

    fn describe(&self) -> String {
        format!("Q_p x {}Z", self.m)
    }

    fn contains(&self, g: &crate::families::AffineElement) -> bool {
        g.shift.rem_euclid(self.m as i64) == 0
    }

    fn sample<R: Rng>(&self, fam: &AffineGroup, rng: &mut R, bound: u32) -> crate::families::AffineElement {
        let g = fam.random_element(rng, bound);
        let k = rng.random_range(-(bound as i64)..=bound as i64);
        fam.element(g.lamp, k * self.m as i64)
    }

    fn coset_meets(
        &self,
        fam: &AffineGroup,
        x: &crate::families::AffineElement,
        n: u32,
        _v: &crate::families::AffineSubgroup,
    ) -> Option<crate::families::AffineElement> {
        // V x^n V only contains elements of shift n s, and H contains every lamp
        let xn = fam.pow(x, n as i64);
        self.contains(&xn).then_some(xn)
    }

    fn default_n_max(&self) -> u32 {
        12 * self.m
    }
}

/// Finitely supported sequences with every coordinate in `Alt(3)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Sym3Lattice;

impl CovolumeSubgroup for Sym3Lattice {
    type Family = Sym3Group;

    fn describe(&self) -> String {
        "finitely supported Alt(3) sequences".into()
    }

    fn contains(&self, g: &Sym3Element) -> bool {
        g.tail().is_identity() && (0..g.cutoff()).all(|n| g.coord(n).is_even())
    }

    fn sample<R: Rng>(&self, _fam: &Sym3Group, rng: &mut R, bound: u32) -> Sym3Element {
        let len = rng.random_range(0..=bound as usize);
        let coords: Vec<Perm3> = (0..len).map(|_| Perm3::ALTERNATING[rng.random_range(0..3)]).collect();
        Sym3Element::from_parts(&coords, Perm3::E).expect("even coordinates with trivial tail")
    }

    fn coset_meets(
        &self,
        fam: &Sym3Group,
        x: &Sym3Element,
        n: u32,
        v: &crate::families::Sym3Subgroup,
    ) -> Option<Sym3Element> {
        let xn = fam.pow(x, n as i64);
        if self.contains(&xn) {
            return Some(xn);
        }
        // coordinate-wise; past the horizon V_i x_i V_i ⊇ {e, (12)} ∋ e
        let end = v.horizon().max(xn.cutoff()) + 1;
        let coords = (0..end).map(|i| even_in_double_coset(v, &xn, v, i)).collect::<Option<Vec<_>>>()?;
        Sym3Element::from_parts(&coords, Perm3::E)
    }

    fn default_n_max(&self) -> u32 {
        12
    }
}

/// The translations `{(0, q) : q ∈ Q}` of the lamplighter.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RationalLattice;

impl CovolumeSubgroup for RationalLattice {
    type Family = LampGroup;

    fn describe(&self) -> String {
        "translations Q".into()
    }

    fn contains(&self, g: &LampElement) -> bool {
        g.lamps.is_empty()
    }

    fn sample<R: Rng>(&self, fam: &LampGroup, rng: &mut R, bound: u32) -> LampElement {
        LampElement::translation(fam.random_element(rng, bound).shift)
    }

    fn coset_meets(
        &self,
        fam: &LampGroup,
        x: &LampElement,
        n: u32,
        v: &crate::families::LampSubgroup,
    ) -> Option<LampElement> {
        // the only candidate in H with the right shift
        let xn = fam.pow(x, n as i64);
        let h = LampElement::translation(xn.shift.clone());
        fam.in_double_coset(&h, v, &xn, v).then_some(h)
    }

    fn default_n_max(&self) -> u32 {
        12
    }
}

/// Equalities checked while assembling a witness.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct WitnessChecks {
    pub h_in_subgroup: bool,
    pub h_in_double_coset: bool,
    pub v_tidy_for_power: bool,
    pub scale_power_law: bool,
    /// No smaller exponent admits an `h`.
    pub minimal: bool,
}

impl WitnessChecks {
    pub fn all(&self) -> bool {
        self.h_in_subgroup && self.h_in_double_coset && self.v_tidy_for_power && self.scale_power_law && self.minimal
    }
}

/// `(n, h, t)` with `s(x)^n = s(h)`, `h ∈ H ∩ V x^n V` and `t` conjugating
/// `con(x)` onto `con(h)`.
#[derive(Clone, Debug)]
pub struct LatticeWitness<F: Family> {
    pub n: u32,
    pub h: F::Element,
    pub conjugator: ConjugatorResult<F>,
    pub scale_x: ScaleCertificate<F>,
    pub scale_h: ScaleCertificate<F>,
    pub checks: WitnessChecks,
    pub conjugacy: ConjugacyReport,
}

impl<F: Family> LatticeWitness<F> {
    pub fn t(&self) -> &F::Element {
        &self.conjugator.t
    }

    pub fn holds(&self) -> bool {
        self.checks.all() && self.conjugacy.holds
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "n": self.n,
            "h": self.h.to_string(),
            "t": self.conjugator.t.to_string(),
            "conjugator": self.conjugator.to_json(),
            "scale_x": self.scale_x.scale.to_string(),
            "scale_h": self.scale_h.scale.to_string(),
            "tidy_v": self.scale_x.tidy_v.to_string(),
            "checks": self.checks,
            "conjugacy": self.conjugacy,
        })
    }
}

/// Knobs for [`find_witness`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WitnessOptions {
    pub n_max: u32,
    /// Powers checked in the conjugator condition.
    pub conjugator_k: u32,
    pub contraction_samples: usize,
    pub sample_bound: u32,
    pub seed: u64,
}

/// Finds the least `n ≤ n_max` with `H ∩ V x^n V` nonempty, for `V` the
/// certified tidy subgroup of `x`, and verifies the resulting witness.
pub fn find_witness<H: CovolumeSubgroup>(
    fam: &H::Family,
    lattice: &H,
    x: &<H::Family as Family>::Element,
    wopts: &WitnessOptions,
    opts: &EngineOptions,
) -> Result<LatticeWitness<H::Family>> {
    let scale_x = scale(fam, x, opts)?;
    let v = &scale_x.tidy_v;
    let (n, h) = (1..=wopts.n_max)
        .find_map(|n| lattice.coset_meets(fam, x, n, v).map(|h| (n, h)))
        .ok_or_else(|| Error::NoWitness { element: x.to_string(), n_max: wopts.n_max })?;
    let xn = fam.pow(x, n as i64);
    let scale_h = scale(fam, &h, opts)?;
    let checks = WitnessChecks {
        h_in_subgroup: lattice.contains(&h),
        h_in_double_coset: fam.in_double_coset(&h, v, &xn, v),
        v_tidy_for_power: is_tidy(fam, &xn, v, opts)?.tidy,
        scale_power_law: scale_x.scale.pow(n) == scale_h.scale,
        minimal: (1..n).all(|k| lattice.coset_meets(fam, x, k, v).is_none()),
    };
    let conjugator = find_conjugator(fam, &h, &xn, v, wopts.conjugator_k, opts)?;
    let mut rng = crate::sampling::seeded(wopts.seed);
    let samples = contraction_samples(fam, &mut rng, wopts.contraction_samples, wopts.sample_bound);
    let conjugacy = contraction_conjugate_equal(fam, x, &h, &conjugator.t, &samples);
    Ok(LatticeWitness { n, h, conjugator, scale_x, scale_h, checks, conjugacy })
}

/// `x_k = (0, q / k!)`, a `k!`-th root of the translation `(0, q)`.
pub fn divisible_root(q: &Rational, k: u32) -> (LampElement, u64) {
    let fact: u64 = (1..=k as u64).product();
    (LampElement::translation(q / &Rational::from(fact as i64)), fact)
}
