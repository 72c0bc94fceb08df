//! `G = Q_p ⋊ Z`, with `n ∈ Z` acting on `Q_p` by multiplication by `p^n`.
//!
//! Elements are pairs `(a, n)` with `a` a rational (the dense subfield
//! `Q ⊂ Q_p`) and product `(a, n)(b, m) = (a + p^n b, n + m)`. A compact
//! subgroup projects to a compact, hence trivial, subgroup of `Z`, so the
//! compact open subgroups are exactly the levels `p^k Z_p × {0}`. Every
//! level is tidy for every element: one of `V_+`, `V_-` is `V` itself and
//! the other is trivial, and `V_++` is either trivial or all of `Q_p × {0}`.

use std::fmt;

use rand::Rng;

use crate::arith::{Prime, Rational, Valuation};
use crate::error::{Error, Result};
use crate::group::{Direction, Family, IndexValue, SubgroupFlags};
use crate::parse::Cursor;
use crate::scale::{ContractionCertificate, ContractionDecision, ContractionGroup};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AffineElement {
    pub lamp: Rational,
    pub shift: i64,
    pub p: Prime,
}

impl fmt::Display for AffineElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})@{}", self.lamp, self.shift, self.p)
    }
}

/// A level `p^k Z_p × {0}`, or the trivial group obtained as a decreasing
/// limit of levels.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AffineSubgroup {
    Level(i64),
    Trivial,
}

impl AffineSubgroup {
    /// Level as an extended integer; the trivial group sits at infinity.
    fn depth(self) -> Valuation {
        match self {
            AffineSubgroup::Level(k) => Valuation::Finite(k),
            AffineSubgroup::Trivial => Valuation::Infinite,
        }
    }

    fn from_depth(d: Valuation) -> Self {
        match d {
            Valuation::Finite(k) => AffineSubgroup::Level(k),
            Valuation::Infinite => AffineSubgroup::Trivial,
        }
    }
}

impl fmt::Display for AffineSubgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AffineSubgroup::Level(k) => write!(f, "level:{k}"),
            AffineSubgroup::Trivial => f.write_str("level:trivial"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AffineGroup {
    p: Prime,
}

impl AffineGroup {
    pub fn new(p: u64) -> Result<Self> {
        Ok(AffineGroup { p: Prime::new(p)? })
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn element(&self, lamp: Rational, shift: i64) -> AffineElement {
        AffineElement { lamp, shift, p: self.p }
    }

    fn p_pow(&self, e: i64) -> Rational {
        Rational::prime_power(self.p, e)
    }

    fn random_unit<R: Rng>(&self, rng: &mut R, max: i64) -> Rational {
        let p = self.p.get() as i64;
        let draw = |rng: &mut R| loop {
            let c = rng.random_range(1..=max.max(2));
            if c % p != 0 {
                return c;
            }
        };
        let (n, d) = (draw(rng), draw(rng));
        let sign = if rng.random_bool(0.5) { 1 } else { -1 };
        Rational::new(sign * n, d)
    }
}

impl Family for AffineGroup {
    type Element = AffineElement;
    type Subgroup = AffineSubgroup;

    fn name(&self) -> &'static str {
        "affine"
    }

    fn params(&self) -> String {
        format!("p={}", self.p)
    }

    fn identity(&self) -> AffineElement {
        self.element(Rational::zero(), 0)
    }

    fn mul(&self, a: &AffineElement, b: &AffineElement) -> AffineElement {
        debug_assert!(a.p == self.p && b.p == self.p);
        self.element(&a.lamp + &(&self.p_pow(a.shift) * &b.lamp), a.shift + b.shift)
    }

    fn inv(&self, a: &AffineElement) -> AffineElement {
        self.element(-(&self.p_pow(-a.shift) * &a.lamp), -a.shift)
    }

    fn pow(&self, a: &AffineElement, n: i64) -> AffineElement {
        // (a, s)^n = (a (p^{ns} - 1) / (p^s - 1), ns), or (n a, 0) when s = 0
        if a.shift == 0 {
            return self.element(&a.lamp * &Rational::from(n), 0);
        }
        let ratio = (self.p_pow(n * a.shift) - Rational::one()) / (self.p_pow(a.shift) - Rational::one());
        self.element(&a.lamp * &ratio, n * a.shift)
    }

    fn parse_element(&self, s: &str) -> Result<AffineElement> {
        let mut cur = Cursor::new(s);
        cur.expect('(')?;
        let lamp = Rational::parse_cursor(&mut cur)?;
        cur.expect(',')?;
        let shift = cur.integer::<i64>()?;
        cur.expect(')')?;
        if cur.eat('@') {
            let (start, tok) = cur.take_while(|c| c.is_ascii_digit());
            let p: u64 = tok.parse().map_err(|_| Error::parse(start + 1, format!("invalid prime '{tok}'")))?;
            if p != self.p.get() {
                return Err(Error::FamilyMismatch {
                    expected: format!("affine p={}", self.p),
                    found: format!("affine p={p}"),
                });
            }
        }
        cur.finish()?;
        Ok(self.element(lamp, shift))
    }

    fn parse_subgroup(&self, s: &str) -> Result<AffineSubgroup> {
        let mut cur = Cursor::new(s);
        cur.expect_str("level:")?;
        let v = if cur.eat_str("trivial") { AffineSubgroup::Trivial } else { AffineSubgroup::Level(cur.integer()?) };
        cur.finish()?;
        Ok(v)
    }

    fn is_valid(&self, g: &AffineElement) -> bool {
        g.p == self.p
    }

    fn conj_subgroup(&self, x: &AffineElement, v: &AffineSubgroup) -> AffineSubgroup {
        match *v {
            AffineSubgroup::Level(k) => AffineSubgroup::Level(k + x.shift),
            AffineSubgroup::Trivial => AffineSubgroup::Trivial,
        }
    }

    fn intersect(&self, a: &AffineSubgroup, b: &AffineSubgroup) -> AffineSubgroup {
        AffineSubgroup::from_depth(a.depth().max(b.depth()))
    }

    fn is_subgroup_of(&self, inner: &AffineSubgroup, outer: &AffineSubgroup) -> bool {
        inner.depth() >= outer.depth()
    }

    fn flags(&self, v: &AffineSubgroup) -> SubgroupFlags {
        let trivial = *v == AffineSubgroup::Trivial;
        SubgroupFlags { is_compact: true, is_open: !trivial, is_trivial: trivial }
    }

    fn member(&self, g: &AffineElement, v: &AffineSubgroup) -> bool {
        g.shift == 0 && g.lamp.val(self.p) >= v.depth()
    }

    fn index_formula(&self, outer: &AffineSubgroup, inner: &AffineSubgroup) -> IndexValue {
        match (outer.depth(), inner.depth()) {
            (Valuation::Finite(j), Valuation::Finite(k)) => IndexValue::power(self.p.get(), (k - j) as u64),
            (Valuation::Infinite, Valuation::Infinite) => IndexValue::one(),
            _ => IndexValue::Infinite,
        }
    }

    fn sample_member<R: Rng>(&self, v: &AffineSubgroup, rng: &mut R, bound: u32) -> AffineElement {
        let k = match v {
            AffineSubgroup::Trivial => return self.identity(),
            AffineSubgroup::Level(k) => *k,
        };
        if rng.random_ratio(1, 8) {
            return self.identity();
        }
        let extra = rng.random_range(0..=bound as i64);
        let lamp = self.random_unit(rng, 4 * bound as i64 + 4) * self.p_pow(k + extra);
        self.element(lamp, 0)
    }

    fn random_element<R: Rng>(&self, rng: &mut R, bound: u32) -> AffineElement {
        let b = bound as i64;
        let shift = rng.random_range(-b..=b);
        let lamp = if rng.random_ratio(1, 6) {
            Rational::zero()
        } else {
            let v = rng.random_range(-b..=b);
            self.random_unit(rng, 4 * b + 4) * self.p_pow(v)
        };
        self.element(lamp, shift)
    }

    fn closed_form_limit(&self, x: &AffineElement, v: &AffineSubgroup, dir: Direction) -> Option<AffineSubgroup> {
        let s = match dir {
            Direction::Plus => x.shift,
            Direction::Minus => -x.shift,
        };
        // the levels k + j s increase without bound when s > 0
        Some(if s > 0 { AffineSubgroup::Trivial } else { *v })
    }

    fn factorization_holds(&self, v: &AffineSubgroup, plus: &AffineSubgroup, minus: &AffineSubgroup) -> bool {
        // levels form a chain, so V_+ V_- is the larger of the two
        plus.depth().min(minus.depth()) == v.depth()
    }

    fn factor_member(
        &self,
        g: &AffineElement,
        plus: &AffineSubgroup,
        minus: &AffineSubgroup,
    ) -> Option<(AffineElement, AffineElement)> {
        if self.member(g, plus) {
            Some((g.clone(), self.identity()))
        } else if self.member(g, minus) {
            Some((self.identity(), g.clone()))
        } else {
            None
        }
    }

    fn plus_plus_closed(&self, _x: &AffineElement, _plus: &AffineSubgroup) -> bool {
        // a union of a chain of levels is trivial, a level, or Q_p × {0}
        true
    }

    fn candidates(&self, _x: &AffineElement, radius: u32) -> Vec<AffineSubgroup> {
        let r = radius as i64;
        std::iter::once(0).chain((1..=r).flat_map(|k| [-k, k])).map(AffineSubgroup::Level).collect()
    }

    fn in_double_coset(
        &self,
        y: &AffineElement,
        left: &AffineSubgroup,
        g: &AffineElement,
        right: &AffineSubgroup,
    ) -> bool {
        // (a, 0)(c, n)(b, 0) = (a + c + p^n b, n)
        if y.shift != g.shift {
            return false;
        }
        let right_depth = right.depth() + Valuation::Finite(g.shift);
        (&y.lamp - &g.lamp).val(self.p) >= left.depth().min(right_depth)
    }

    fn in_contraction(&self, g: &AffineElement, x: &AffineElement) -> ContractionDecision {
        if *g == self.identity() {
            return ContractionDecision::identity();
        }
        if g.shift != 0 {
            return ContractionDecision {
                verdict: false,
                certificate: ContractionCertificate::ShiftObstruction { shift: g.shift.to_string() },
            };
        }
        // x^n (b, 0) x^-n = (p^{n s} b, 0)
        ContractionDecision {
            verdict: x.shift > 0,
            certificate: ContractionCertificate::ValuationGrowth {
                valuation: g.lamp.val(self.p).to_string(),
                growth_per_step: x.shift,
            },
        }
    }

    fn contraction_group(&self, x: &AffineElement) -> ContractionGroup {
        if x.shift > 0 {
            ContractionGroup::LampLine
        } else {
            ContractionGroup::Trivial
        }
    }

    fn contraction_probe<R: Rng>(&self, rng: &mut R, bound: u32) -> AffineElement {
        let g = self.random_element(rng, bound);
        if rng.random_bool(0.5) {
            self.element(g.lamp, 0)
        } else {
            g
        }
    }

    fn closed_form_conjugator(
        &self,
        y: &AffineElement,
        x: &AffineElement,
        _v: &AffineSubgroup,
    ) -> Option<AffineElement> {
        // con(x^-1) is the lamp line only when x has negative shift; then
        // t = (τ, 0) with τ (1 - p^s) = b - a gives t^-1 y t = x exactly.
        if y.shift != x.shift || x.shift >= 0 {
            return None;
        }
        let tau = (&y.lamp - &x.lamp) / (Rational::one() - self.p_pow(x.shift));
        Some(self.element(tau, 0))
    }
}
