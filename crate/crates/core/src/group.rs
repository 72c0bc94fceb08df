//! The contract shared by every concrete group family: element algebra and a
//! symbolic algebra of closed subgroups with exact indices.

use std::fmt::{self, Debug, Display};
use std::ops::Mul;

use num_bigint::BigUint;
use num_traits::{One, Pow};
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::scale::{ContractionDecision, ContractionGroup};

/// An index `[A : B]`: a positive integer or infinity.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IndexValue {
    Finite(BigUint),
    Infinite,
}

impl IndexValue {
    pub fn one() -> IndexValue {
        IndexValue::Finite(BigUint::one())
    }

    pub fn from_u64(n: u64) -> IndexValue {
        IndexValue::Finite(BigUint::from(n))
    }

    /// `base^exp`.
    pub fn power(base: u64, exp: u64) -> IndexValue {
        IndexValue::Finite(BigUint::from(base).pow(exp))
    }

    pub fn pow(&self, n: u32) -> IndexValue {
        match self {
            IndexValue::Finite(v) => IndexValue::Finite(v.pow(n)),
            IndexValue::Infinite => IndexValue::Infinite,
        }
    }

    pub fn finite(&self) -> Option<&BigUint> {
        match self {
            IndexValue::Finite(v) => Some(v),
            IndexValue::Infinite => None,
        }
    }

    pub fn is_one(&self) -> bool {
        matches!(self, IndexValue::Finite(v) if v.is_one())
    }
}

impl Mul for IndexValue {
    type Output = IndexValue;

    fn mul(self, rhs: IndexValue) -> IndexValue {
        match (self, rhs) {
            (IndexValue::Finite(a), IndexValue::Finite(b)) => IndexValue::Finite(a * b),
            _ => IndexValue::Infinite,
        }
    }
}

impl Display for IndexValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IndexValue::Finite(v) => write!(f, "{v}"),
            IndexValue::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for IndexValue {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Topological flags carried by a subgroup descriptor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SubgroupFlags {
    pub is_compact: bool,
    pub is_open: bool,
    pub is_trivial: bool,
}

/// Direction of a limit subgroup: `Plus` intersects `x^n V x^-n`, `Minus`
/// intersects `x^-n V x^n`, over `n >= 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Plus,
    Minus,
}

/// A concrete totally disconnected, locally compact group together with a
/// symbolic family of closed subgroups.
///
/// Implementations fix every parameter (a prime, say) at construction, so a
/// family value is the group itself. All methods are pure.
pub trait Family: Send + Sync {
    type Element: Clone + PartialEq + Debug + Display + Send + Sync;
    type Subgroup: Clone + PartialEq + Debug + Display + Send + Sync;

    /// Short family tag, e.g. `affine`.
    fn name(&self) -> &'static str;

    /// Family parameters as text, e.g. `p=2`.
    fn params(&self) -> String;

    fn identity(&self) -> Self::Element;

    fn mul(&self, a: &Self::Element, b: &Self::Element) -> Self::Element;

    fn inv(&self, a: &Self::Element) -> Self::Element;

    /// `a^n` for any integer `n`, by repeated squaring.
    fn pow(&self, a: &Self::Element, n: i64) -> Self::Element {
        let mut base = if n < 0 { self.inv(a) } else { a.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = self.identity();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// `x g x^-1`.
    fn conj_element(&self, x: &Self::Element, g: &Self::Element) -> Self::Element {
        self.mul(&self.mul(x, g), &self.inv(x))
    }

    fn parse_element(&self, s: &str) -> Result<Self::Element>;

    fn parse_subgroup(&self, s: &str) -> Result<Self::Subgroup>;

    /// Checks the representation invariants of an element.
    fn is_valid(&self, g: &Self::Element) -> bool;

    // ---- subgroup algebra ----

    /// `x V x^-1`.
    fn conj_subgroup(&self, x: &Self::Element, v: &Self::Subgroup) -> Self::Subgroup;

    fn intersect(&self, a: &Self::Subgroup, b: &Self::Subgroup) -> Self::Subgroup;

    /// `inner <= outer`.
    fn is_subgroup_of(&self, inner: &Self::Subgroup, outer: &Self::Subgroup) -> bool;

    fn flags(&self, v: &Self::Subgroup) -> SubgroupFlags;

    fn member(&self, g: &Self::Element, v: &Self::Subgroup) -> bool;

    /// The family's index formula; callers go through [`Family::index`],
    /// which checks containment and compactness first.
    fn index_formula(&self, outer: &Self::Subgroup, inner: &Self::Subgroup) -> IndexValue;

    /// Exact index `[outer : inner]`.
    fn index(&self, outer: &Self::Subgroup, inner: &Self::Subgroup) -> Result<IndexValue> {
        if !self.is_subgroup_of(inner, outer) {
            return Err(Error::NotContained { outer: outer.to_string(), inner: inner.to_string() });
        }
        if !self.flags(outer).is_compact {
            return Err(Error::NotCompactOpen(outer.to_string()));
        }
        Ok(self.index_formula(outer, inner))
    }

    /// A member of `v` chosen at random; used for element-level spot checks
    /// of descriptor algebra.
    fn sample_member<R: Rng>(&self, v: &Self::Subgroup, rng: &mut R, bound: u32) -> Self::Element;

    fn random_element<R: Rng>(&self, rng: &mut R, bound: u32) -> Self::Element;

    // ---- tidy machinery ----

    /// A closed form for `V_+` or `V_-`, when the family has one.
    fn closed_form_limit(&self, _x: &Self::Element, _v: &Self::Subgroup, _dir: Direction) -> Option<Self::Subgroup> {
        None
    }

    /// Decides `V = V_+ V_-` on descriptors.
    fn factorization_holds(&self, v: &Self::Subgroup, plus: &Self::Subgroup, minus: &Self::Subgroup) -> bool;

    /// Splits `g` as `a * b` with `a` in `plus` and `b` in `minus`.
    fn factor_member(
        &self,
        g: &Self::Element,
        plus: &Self::Subgroup,
        minus: &Self::Subgroup,
    ) -> Option<(Self::Element, Self::Element)>;

    /// Whether `V_++ = union of x^n V_+ x^-n` is closed.
    fn plus_plus_closed(&self, x: &Self::Element, plus: &Self::Subgroup) -> bool;

    /// Compact open subgroups examined when computing the scale of `x`.
    /// The list must contain a subgroup tidy for `x`.
    fn candidates(&self, x: &Self::Element, radius: u32) -> Vec<Self::Subgroup>;

    /// Decides `y ∈ left · g · right`.
    fn in_double_coset(
        &self,
        y: &Self::Element,
        left: &Self::Subgroup,
        g: &Self::Element,
        right: &Self::Subgroup,
    ) -> bool;

    // ---- contraction ----

    /// Exact decision of `x^n g x^-n -> e`.
    fn in_contraction(&self, g: &Self::Element, x: &Self::Element) -> ContractionDecision;

    /// Structural description of `con(x)`.
    fn contraction_group(&self, x: &Self::Element) -> ContractionGroup;

    /// Structural description of `t C t^-1`. Every contraction group that
    /// occurs in the shipped families is normal, hence the default.
    fn conjugate_contraction_group(&self, _t: &Self::Element, c: &ContractionGroup) -> ContractionGroup {
        c.clone()
    }

    /// Elements probing contraction behaviour, biased toward the interesting
    /// part of the group (for instance the normal lamp subgroup).
    fn contraction_probe<R: Rng>(&self, rng: &mut R, bound: u32) -> Self::Element {
        self.random_element(rng, bound)
    }

    // ---- conjugator search ----

    /// Closed-form `t` for the conjugator lemma, when one exists.
    fn closed_form_conjugator(
        &self,
        _y: &Self::Element,
        _x: &Self::Element,
        _v: &Self::Subgroup,
    ) -> Option<Self::Element> {
        None
    }

    /// Candidate conjugators, smallest representation first.
    fn conjugator_net(&self, _y: &Self::Element, _x: &Self::Element, _plus: &Self::Subgroup) -> Vec<Self::Element> {
        vec![self.identity()]
    }
}
