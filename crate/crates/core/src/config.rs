//! Experiment configuration, read from TOML.
//!
//! ```
//! let cfg = tdlc::config::ExperimentConfig::from_toml_str(r#"
//!     name = "tiny"
//!     seed = 7
//!     [affine]
//!     primes = [2]
//!     moduli = [3]
//!     [samples]
//!     witness = 2
//! "#)?;
//! assert_eq!(cfg.samples.witness, 2);
//! assert!(cfg.sym3.is_none());
//! # Ok::<(), tdlc::Error>(())
//! ```

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::arith::{Prime, Rational};
use crate::error::{Error, Result};
use crate::scale::EngineOptions;

/// Family selector shared by the config and the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyKind {
    Affine,
    Sym3,
    Lamp,
}

impl FamilyKind {
    pub const ALL: [FamilyKind; 3] = [FamilyKind::Affine, FamilyKind::Sym3, FamilyKind::Lamp];

    pub fn name(self) -> &'static str {
        match self {
            FamilyKind::Affine => "affine",
            FamilyKind::Sym3 => "sym3",
            FamilyKind::Lamp => "lamp",
        }
    }
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FamilyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FamilyKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown family '{s}' (expected affine, sym3 or lamp)")))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EngineSection {
    pub max_steps: usize,
    pub spot_checks: usize,
    pub candidate_radius: u32,
    /// Powers `k = 0..=K` checked for each conjugator.
    pub conjugator_k: u32,
    /// Bound passed to the random element generators.
    pub sample_bound: u32,
}

impl Default for EngineSection {
    fn default() -> Self {
        let e = EngineOptions::default();
        EngineSection {
            max_steps: e.max_steps,
            spot_checks: e.spot_checks,
            candidate_radius: e.candidate_radius,
            conjugator_k: 16,
            sample_bound: 4,
        }
    }
}

impl EngineSection {
    pub fn options(&self) -> EngineOptions {
        EngineOptions {
            max_steps: self.max_steps,
            spot_checks: self.spot_checks,
            candidate_radius: self.candidate_radius,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AffineSection {
    pub primes: Vec<u64>,
    /// `H = Q_p ⋊ mZ` for each listed `m`.
    pub moduli: Vec<u32>,
    /// Check `s((0, -k)) = p^k` and `s((0, k)) = 1` for `k = 0..=scale_k_max`.
    pub scale_k_max: Option<u32>,
    /// Check `s((0, -mk)) = p^{mk}` on `H` for `k = 0..=lattice_k_max`.
    pub lattice_k_max: Option<u32>,
    pub n_max: Option<u32>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Sym3Section {
    pub n_max: Option<u32>,
    /// Run the fixed non-tidy instance `x = (123)` at coordinate 0.
    pub negative_instance: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LampSection {
    pub n_max: Option<u32>,
    /// Translations checked for divisibility, as `num/den` strings.
    pub divisible_q: Vec<String>,
    pub divisible_k_max: u32,
}

/// Samples per family for each check.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SampleCounts {
    pub witness: usize,
    /// Contraction samples per witness.
    pub witness_contraction: usize,
    pub double_coset: usize,
    /// Largest `n` in `(V x V)^n`.
    pub double_coset_n_max: u32,
    pub tidy: usize,
    pub conjugator: usize,
    /// `G`- and `H`-samples for each propagation check.
    pub propagation: usize,
    /// Elements probing contraction groups.
    pub probes: usize,
    pub periodic: usize,
    pub power_law: usize,
    pub modular: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputSection {
    pub records: Option<PathBuf>,
    pub summary: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub name: String,
    pub seed: u64,
    #[serde(default)]
    pub parallel: bool,
    #[serde(default)]
    pub engine: EngineSection,
    pub affine: Option<AffineSection>,
    pub sym3: Option<Sym3Section>,
    pub lamp: Option<LampSection>,
    #[serde(default)]
    pub samples: SampleCounts,
    #[serde(default)]
    pub output: OutputSection,
}

impl ExperimentConfig {
    pub fn from_toml_str(s: &str) -> Result<Self> {
        let cfg: ExperimentConfig = toml::from_str(s).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_toml_str(&text)
    }

    /// The configuration shipped as `configs/paper-examples.toml`.
    pub fn paper_examples() -> Self {
        Self::from_toml_str(include_str!("../../../configs/paper-examples.toml")).expect("shipped config is valid")
    }

    pub fn families(&self) -> Vec<FamilyKind> {
        let mut out = Vec::new();
        if self.affine.is_some() {
            out.push(FamilyKind::Affine);
        }
        if self.sym3.is_some() {
            out.push(FamilyKind::Sym3);
        }
        if self.lamp.is_some() {
            out.push(FamilyKind::Lamp);
        }
        out
    }

    /// Parsed divisibility targets.
    pub fn divisible_q(&self) -> Vec<Rational> {
        self.lamp
            .as_ref()
            .map(|l| l.divisible_q.iter().map(|q| q.parse().expect("validated")).collect())
            .unwrap_or_default()
    }

    /// Rejects inconsistent parameters before anything is computed.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        if self.engine.max_steps == 0 {
            return bad("engine.max_steps must be positive".into());
        }
        if let Some(a) = &self.affine {
            if a.primes.is_empty() {
                return bad("affine.primes must not be empty".into());
            }
            for &p in &a.primes {
                Prime::new(p).map_err(|_| Error::Config(format!("affine.primes: {p} is not a prime")))?;
            }
            if a.moduli.is_empty() {
                return bad("affine.moduli must not be empty".into());
            }
            if a.moduli.contains(&0) {
                return bad("affine.moduli entries must be positive".into());
            }
            if a.scale_k_max.is_some_and(|k| k > 60) || a.lattice_k_max.is_some_and(|k| k > 60) {
                return bad("affine scale ranges are limited to 60".into());
            }
        }
        for (name, n) in [
            ("affine.n_max", self.affine.as_ref().and_then(|a| a.n_max)),
            ("sym3.n_max", self.sym3.as_ref().and_then(|s| s.n_max)),
            ("lamp.n_max", self.lamp.as_ref().and_then(|l| l.n_max)),
        ] {
            if n == Some(0) {
                return bad(format!("{name} must be positive"));
            }
        }
        if let Some(l) = &self.lamp {
            for q in &l.divisible_q {
                q.parse::<Rational>().map_err(|e| Error::Config(format!("lamp.divisible_q: '{q}': {e}")))?;
            }
            if l.divisible_k_max > 12 {
                return bad("lamp.divisible_k_max is limited to 12".into());
            }
        }
        if self.samples.double_coset > 0 && self.samples.double_coset_n_max == 0 {
            return bad("samples.double_coset_n_max must be positive".into());
        }
        Ok(())
    }
}
