//! The lamplighter group `G = C_2^Q ⋊ Q`, with `q ∈ Q` translating lamp
//! configurations by `q`.
//!
//! A lamp configuration is represented by a finite or co-finite support.
//! That class is closed under the group operations, contains elements of
//! every contraction group met here, and contains the all-on configuration,
//! which lies in the closure of `con(x)` but not in `con(x)` for `x ∉ C_2^Q`.
//!
//! Compact open subgroups are windows: `window(S) = {(f, 0) : f|_S = 0}` for
//! finite `S`, the full lamp group when `S` is empty. Limits of windows
//! under translation are windows over infinite sets built from rays. For
//! `x = (f, q)` with `q ≠ 0` the only tidy window is the full lamp group,
//! which `x` normalises.

use std::collections::BTreeSet;
use std::fmt;

use rand::Rng;

use crate::arith::{QSet, Rational, Ray};
use crate::error::{Error, Result};
use crate::group::{Direction, Family, IndexValue, SubgroupFlags};
use crate::parse::Cursor;
use crate::scale::{ContractionCertificate, ContractionDecision, ContractionGroup};

/// A lamp configuration: the set of lit lamps, or the set of unlit ones.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Support {
    Finite(BTreeSet<Rational>),
    /// All lamps lit except the listed ones.
    Cofinite(BTreeSet<Rational>),
}

impl Support {
    pub fn empty() -> Self {
        Support::Finite(BTreeSet::new())
    }

    pub fn all_on() -> Self {
        Support::Cofinite(BTreeSet::new())
    }

    pub fn is_lit(&self, q: &Rational) -> bool {
        match self {
            Support::Finite(s) => s.contains(q),
            Support::Cofinite(c) => !c.contains(q),
        }
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, Support::Finite(s) if s.is_empty())
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Support::Finite(_))
    }

    fn listed(&self) -> &BTreeSet<Rational> {
        match self {
            Support::Finite(s) | Support::Cofinite(s) => s,
        }
    }

    /// Translate every lamp by `q`.
    pub fn shift(&self, q: &Rational) -> Support {
        let moved = self.listed().iter().map(|p| p + q).collect();
        match self {
            Support::Finite(_) => Support::Finite(moved),
            Support::Cofinite(_) => Support::Cofinite(moved),
        }
    }

    /// Pointwise sum in `C_2`.
    pub fn sum(&self, other: &Support) -> Support {
        let diff: BTreeSet<Rational> = self.listed().symmetric_difference(other.listed()).cloned().collect();
        if self.is_finite() == other.is_finite() {
            Support::Finite(diff)
        } else {
            Support::Cofinite(diff)
        }
    }

    /// Whether every lamp in `window` is off.
    pub fn vanishes_on(&self, window: &QSet) -> bool {
        match self {
            Support::Finite(s) => s.iter().all(|p| !window.contains(p)),
            Support::Cofinite(c) => window.is_finite() && window.points().is_subset(c),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LampElement {
    pub lamps: Support,
    pub shift: Rational,
}

impl LampElement {
    pub fn new(lamps: Support, shift: Rational) -> Self {
        LampElement { lamps, shift }
    }

    /// The configuration lit exactly at `points`, with zero shift.
    pub fn lamps_at(points: impl IntoIterator<Item = Rational>) -> Self {
        LampElement::new(Support::Finite(points.into_iter().collect()), Rational::zero())
    }

    pub fn translation(q: Rational) -> Self {
        LampElement::new(Support::empty(), q)
    }
}

fn write_set<'a>(f: &mut fmt::Formatter<'_>, items: impl Iterator<Item = &'a Rational>) -> fmt::Result {
    f.write_str("{")?;
    for (i, q) in items.enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{q}")?;
    }
    f.write_str("}")
}

impl fmt::Display for LampElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_set(f, self.lamps.listed().iter())?;
        if !self.lamps.is_finite() {
            f.write_str("cofinite")?;
        }
        write!(f, "|shift:{}", self.shift)
    }
}

/// `window(W)`: lamp configurations at shift zero vanishing on `W`.
#[derive(Clone, Debug, PartialEq)]
pub struct LampSubgroup {
    window: QSet,
}

impl LampSubgroup {
    pub fn full() -> Self {
        LampSubgroup { window: QSet::empty() }
    }

    pub fn window(points: impl IntoIterator<Item = Rational>) -> Self {
        LampSubgroup { window: QSet::from_points(points) }
    }

    pub fn from_set(window: QSet) -> Self {
        LampSubgroup { window }
    }

    pub fn window_set(&self) -> &QSet {
        &self.window
    }
}

impl fmt::Display for LampSubgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("window:")?;
        write_set(f, self.window.points().iter())?;
        if !self.window.rays().is_empty() {
            f.write_str(";rays:{")?;
            for (i, r) in self.window.rays().iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{}@{}", r.start, r.step)?;
            }
            f.write_str("}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct LampGroup;

impl LampGroup {
    pub fn new() -> Self {
        LampGroup
    }

    fn parse_set(cur: &mut Cursor<'_>) -> Result<BTreeSet<Rational>> {
        cur.expect('{')?;
        let mut set = BTreeSet::new();
        if cur.eat('}') {
            return Ok(set);
        }
        loop {
            set.insert(Rational::parse_cursor(cur)?);
            if cur.eat('}') {
                return Ok(set);
            }
            cur.expect(',')?;
        }
    }

    fn random_point<R: Rng>(rng: &mut R, bound: u32) -> Rational {
        let b = 3 * bound.max(1) as i64;
        Rational::new(rng.random_range(-b..=b), rng.random_range(1..=3i64))
    }

    fn random_points<R: Rng>(rng: &mut R, bound: u32) -> BTreeSet<Rational> {
        let n = rng.random_range(0..=bound as usize);
        (0..n).map(|_| Self::random_point(rng, bound)).collect()
    }

    /// Points on or next to the orbit of the lamps of `x` under its shift.
    fn orbit_points(x: &LampElement) -> Vec<Rational> {
        let mut base: BTreeSet<Rational> = x.lamps.listed().clone();
        base.insert(Rational::zero());
        let mut out = BTreeSet::new();
        for b in &base {
            out.insert(b.clone());
            if !x.shift.is_zero() {
                out.insert(b + &x.shift);
                out.insert(b - &x.shift);
            }
        }
        out.into_iter().collect()
    }
}

impl Family for LampGroup {
    type Element = LampElement;
    type Subgroup = LampSubgroup;

    fn name(&self) -> &'static str {
        "lamp"
    }

    fn params(&self) -> String {
        String::new()
    }

    fn identity(&self) -> LampElement {
        LampElement::new(Support::empty(), Rational::zero())
    }

    fn mul(&self, a: &LampElement, b: &LampElement) -> LampElement {
        LampElement::new(a.lamps.sum(&b.lamps.shift(&a.shift)), &a.shift + &b.shift)
    }

    fn inv(&self, a: &LampElement) -> LampElement {
        LampElement::new(a.lamps.shift(&-&a.shift), -&a.shift)
    }

    fn parse_element(&self, s: &str) -> Result<LampElement> {
        let mut cur = Cursor::new(s);
        let listed = Self::parse_set(&mut cur)?;
        let lamps = if cur.eat_str("cofinite") { Support::Cofinite(listed) } else { Support::Finite(listed) };
        cur.expect('|')?;
        cur.expect_str("shift:")?;
        let shift = Rational::parse_cursor(&mut cur)?;
        cur.finish()?;
        Ok(LampElement::new(lamps, shift))
    }

    fn parse_subgroup(&self, s: &str) -> Result<LampSubgroup> {
        let mut cur = Cursor::new(s);
        cur.expect_str("window:")?;
        let mut window = QSet::from_points(Self::parse_set(&mut cur)?);
        if cur.eat(';') {
            cur.expect_str("rays:")?;
            cur.expect('{')?;
            if !cur.eat('}') {
                loop {
                    let start = Rational::parse_cursor(&mut cur)?;
                    cur.expect('@')?;
                    cur.skip_ws();
                    let pos = s.len() - cur.rest().len();
                    let step = Rational::parse_cursor(&mut cur)?;
                    if step.is_zero() {
                        return Err(Error::parse(pos + 1, "ray step must be nonzero"));
                    }
                    window = window.union(&QSet::from_ray(Ray::new(start, step)));
                    if cur.eat('}') {
                        break;
                    }
                    cur.expect(',')?;
                }
            }
        }
        cur.finish()?;
        Ok(LampSubgroup { window })
    }

    fn is_valid(&self, _g: &LampElement) -> bool {
        true
    }

    fn conj_subgroup(&self, x: &LampElement, v: &LampSubgroup) -> LampSubgroup {
        LampSubgroup { window: v.window.shift(&x.shift) }
    }

    fn intersect(&self, a: &LampSubgroup, b: &LampSubgroup) -> LampSubgroup {
        LampSubgroup { window: a.window.union(&b.window) }
    }

    fn is_subgroup_of(&self, inner: &LampSubgroup, outer: &LampSubgroup) -> bool {
        outer.window.is_subset(&inner.window)
    }

    fn flags(&self, v: &LampSubgroup) -> SubgroupFlags {
        SubgroupFlags { is_compact: true, is_open: v.window.is_finite(), is_trivial: false }
    }

    fn member(&self, g: &LampElement, v: &LampSubgroup) -> bool {
        g.shift.is_zero() && g.lamps.vanishes_on(&v.window)
    }

    fn index_formula(&self, outer: &LampSubgroup, inner: &LampSubgroup) -> IndexValue {
        if !inner.window.is_finite() {
            return IndexValue::Infinite;
        }
        let extra = inner.window.points().iter().filter(|p| !outer.window.contains(p)).count();
        IndexValue::power(2, extra as u64)
    }

    fn sample_member<R: Rng>(&self, v: &LampSubgroup, rng: &mut R, bound: u32) -> LampElement {
        // finitely supported members are dense in every window
        let pts = Self::random_points(rng, bound).into_iter().filter(|p| !v.window.contains(p));
        LampElement::lamps_at(pts)
    }

    fn random_element<R: Rng>(&self, rng: &mut R, bound: u32) -> LampElement {
        let listed = Self::random_points(rng, bound);
        let lamps = if rng.random_ratio(1, 4) { Support::Cofinite(listed) } else { Support::Finite(listed) };
        let shift = if rng.random_ratio(1, 5) {
            Rational::zero()
        } else {
            let b = bound.max(1) as i64;
            let n = loop {
                let n = rng.random_range(-b..=b);
                if n != 0 {
                    break n;
                }
            };
            Rational::new(n, rng.random_range(1..=3i64))
        };
        LampElement::new(lamps, shift)
    }

    fn closed_form_limit(&self, x: &LampElement, v: &LampSubgroup, dir: Direction) -> Option<LampSubgroup> {
        if x.shift.is_zero() {
            return Some(v.clone());
        }
        if !v.window.is_finite() {
            return None;
        }
        let step = match dir {
            Direction::Plus => x.shift.clone(),
            Direction::Minus => -&x.shift,
        };
        // ⋂_j window(S + j step) = window(⋃_j (S + j step))
        let window = v
            .window
            .points()
            .iter()
            .fold(QSet::empty(), |acc, s| acc.union(&QSet::from_ray(Ray::new(s.clone(), step.clone()))));
        Some(LampSubgroup { window })
    }

    fn factorization_holds(&self, v: &LampSubgroup, plus: &LampSubgroup, minus: &LampSubgroup) -> bool {
        // V_+ V_- = window(W_+ ∩ W_-)
        plus.window.intersect(&minus.window).same_set(&v.window)
    }

    fn factor_member(
        &self,
        g: &LampElement,
        plus: &LampSubgroup,
        minus: &LampSubgroup,
    ) -> Option<(LampElement, LampElement)> {
        if !g.shift.is_zero() {
            return None;
        }
        // the `minus` factor carries the lamps of g lying in W_+
        let (a, b) = match &g.lamps {
            Support::Finite(s) => {
                let (inside, outside): (BTreeSet<_>, BTreeSet<_>) =
                    s.iter().cloned().partition(|p| plus.window.contains(p));
                (Support::Finite(outside), Support::Finite(inside))
            }
            Support::Cofinite(_) if plus.window.is_finite() => {
                let inside: BTreeSet<_> = plus.window.points().iter().filter(|p| g.lamps.is_lit(p)).cloned().collect();
                let b = Support::Finite(inside);
                (g.lamps.sum(&b), b)
            }
            Support::Cofinite(_) if minus.window.is_finite() => {
                let inside: BTreeSet<_> = minus.window.points().iter().filter(|p| g.lamps.is_lit(p)).cloned().collect();
                let a = Support::Finite(inside);
                let b = g.lamps.sum(&a);
                (a, b)
            }
            Support::Cofinite(_) => return None,
        };
        let (a, b) = (LampElement::new(a, Rational::zero()), LampElement::new(b, Rational::zero()));
        (self.member(&a, plus) && self.member(&b, minus)).then_some((a, b))
    }

    fn plus_plus_closed(&self, x: &LampElement, plus: &LampSubgroup) -> bool {
        // x^j V_+ x^-j = window(W + j q). When W + q ⊇ W these shrink and the
        // union is V_+ itself. Otherwise, for W nonempty, the windows move off
        // every point, so the union is a proper dense subgroup.
        if x.shift.is_zero() || plus.window.is_empty() {
            return true;
        }
        plus.window.is_subset(&plus.window.shift(&x.shift))
    }

    fn candidates(&self, x: &LampElement, radius: u32) -> Vec<LampSubgroup> {
        let orbit = Self::orbit_points(x);
        let take = (radius as usize + 1).min(orbit.len());
        let mut out = vec![LampSubgroup::full()];
        out.extend(orbit[..take].iter().map(|p| LampSubgroup::window([p.clone()])));
        out.extend(orbit[..take].windows(2).map(|w| LampSubgroup::window(w.iter().cloned())));
        out
    }

    fn in_double_coset(&self, y: &LampElement, left: &LampSubgroup, g: &LampElement, right: &LampSubgroup) -> bool {
        // (a, 0)(f, q)(b, 0) = (a + f + shift_q b, q)
        if y.shift != g.shift {
            return false;
        }
        let forced = left.window.intersect(&right.window.shift(&g.shift));
        y.lamps.sum(&g.lamps).vanishes_on(&forced)
    }

    fn in_contraction(&self, g: &LampElement, x: &LampElement) -> ContractionDecision {
        if *g == self.identity() {
            return ContractionDecision::identity();
        }
        if !g.shift.is_zero() {
            return ContractionDecision {
                verdict: false,
                certificate: ContractionCertificate::ShiftObstruction { shift: g.shift.to_string() },
            };
        }
        // x^n (h, 0) x^-n = (shift_{nq} h, 0)
        ContractionDecision {
            verdict: !x.shift.is_zero() && g.lamps.is_finite(),
            certificate: ContractionCertificate::SupportEscape {
                cofinite: !g.lamps.is_finite(),
                step: x.shift.to_string(),
            },
        }
    }

    fn contraction_group(&self, x: &LampElement) -> ContractionGroup {
        if x.shift.is_zero() {
            ContractionGroup::Trivial
        } else {
            ContractionGroup::FiniteSupportLamps
        }
    }

    fn contraction_probe<R: Rng>(&self, rng: &mut R, bound: u32) -> LampElement {
        match rng.random_range(0..8) {
            0..=3 => LampElement::lamps_at(Self::random_points(rng, bound)),
            4 => LampElement::new(Support::Cofinite(Self::random_points(rng, bound)), Rational::zero()),
            _ => self.random_element(rng, bound),
        }
    }

    fn conjugator_net(&self, y: &LampElement, x: &LampElement, plus: &LampSubgroup) -> Vec<LampElement> {
        let mut pts: BTreeSet<Rational> = Self::orbit_points(x).into_iter().collect();
        pts.extend(Self::orbit_points(y));
        let mut out = vec![self.identity()];
        out.extend(pts.into_iter().map(|p| LampElement::lamps_at([p])).filter(|t| self.member(t, plus)));
        out
    }
}
