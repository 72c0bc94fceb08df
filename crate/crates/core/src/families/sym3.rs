//! The restricted product `G = {x ∈ Sym(3)^N : x_n ∈ {e, (12)} for almost all n}`.
//!
//! `G` carries the topology in which `∏ {e, (12)}` is a compact open
//! subgroup. Its compact open subgroups used here are pattern subgroups: a
//! floor `k` below which coordinates are forced to `e`, and above it a
//! transposition `t_n` per coordinate (all but finitely many equal to
//! `(12)`), the coordinate ranging over `{e, t_n}`; finitely many further
//! coordinates may also be forced to `e`.
//!
//! Every element has order dividing 6, so conjugation orbits of subgroups
//! are finite and contraction groups are trivial. For each element the
//! adapted pattern subgroup (coordinate `n` follows `x_n` when `x_n` is a
//! transposition and is forced to `e` when `x_n` is a 3-cycle) is
//! normalised by `x`, hence tidy with displacement index 1.

use std::collections::BTreeMap;
use std::fmt;

use rand::seq::IndexedRandom;
use rand::Rng;

use crate::arith::Perm3;
use crate::error::{Error, Result};
use crate::group::{Family, IndexValue, SubgroupFlags};
use crate::parse::Cursor;
use crate::scale::{ContractionCertificate, ContractionDecision, ContractionGroup};

/// An element of the restricted product: coordinates below `cutoff` are
/// stored explicitly (identity entries omitted), every coordinate from
/// `cutoff` on equals `tail ∈ {e, (12)}`. The cutoff is kept minimal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Sym3Element {
    coords: BTreeMap<u64, Perm3>,
    tail: Perm3,
    cutoff: u64,
}

impl Sym3Element {
    pub fn identity() -> Self {
        Sym3Element { coords: BTreeMap::new(), tail: Perm3::E, cutoff: 0 }
    }

    /// Builds `x` from explicit coordinates `0..coords.len()` followed by a
    /// constant tail. Returns `None` when the tail lies outside `{e, (12)}`.
    pub fn from_parts(coords: &[Perm3], tail: Perm3) -> Option<Self> {
        if tail != Perm3::E && tail != Perm3::T12 {
            return None;
        }
        let map = coords.iter().enumerate().map(|(i, &g)| (i as u64, g)).collect();
        Some(Self::normalize(map, tail, coords.len() as u64))
    }

    fn normalize(mut coords: BTreeMap<u64, Perm3>, tail: Perm3, mut cutoff: u64) -> Self {
        coords.retain(|&n, g| n < cutoff && !g.is_identity());
        while cutoff > 0 && coords.get(&(cutoff - 1)).copied().unwrap_or(Perm3::E) == tail {
            cutoff -= 1;
            coords.remove(&cutoff);
        }
        Sym3Element { coords, tail, cutoff }
    }

    pub fn coord(&self, n: u64) -> Perm3 {
        if n >= self.cutoff {
            self.tail
        } else {
            self.coords.get(&n).copied().unwrap_or(Perm3::E)
        }
    }

    pub fn tail(&self) -> Perm3 {
        self.tail
    }

    pub fn cutoff(&self) -> u64 {
        self.cutoff
    }

    /// Least `m >= 1` with `x^m = e`: the lcm of the coordinate orders.
    pub fn order(&self) -> u32 {
        self.coords.values().chain(std::iter::once(&self.tail)).map(|g| g.order()).fold(1, num_integer::lcm)
    }

    fn map_coords(&self, other: Option<&Sym3Element>, f: impl Fn(Perm3, Perm3) -> Perm3) -> Self {
        let other_cut = other.map_or(0, |o| o.cutoff);
        let cutoff = self.cutoff.max(other_cut);
        let pick = |n| other.map_or(Perm3::E, |o| o.coord(n));
        let coords = (0..cutoff).map(|n| (n, f(self.coord(n), pick(n)))).collect();
        let tail = f(self.tail, other.map_or(Perm3::E, |o| o.tail));
        Self::normalize(coords, tail, cutoff)
    }
}

impl fmt::Display for Sym3Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (n, g)) in self.coords.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{n}:{g}")?;
        }
        write!(f, "}}|tail:{}@{}", self.tail, self.cutoff)
    }
}

/// A pattern subgroup. `slots` holds the coordinates `>= floor` whose
/// factor differs from the default `{e, (12)}`: `Perm3::E` marks a
/// coordinate forced to the identity, a transposition `t` the factor
/// `{e, t}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Sym3Subgroup {
    floor: u64,
    slots: BTreeMap<u64, Perm3>,
}

impl Sym3Subgroup {
    /// Floor `k`, default pattern `(12)` everywhere above it.
    pub fn with_floor(floor: u64) -> Self {
        Sym3Subgroup { floor, slots: BTreeMap::new() }
    }

    /// Builds a pattern subgroup from `(coordinate, slot)` exceptions.
    /// Returns `None` if a slot is a 3-cycle.
    pub fn new(floor: u64, exceptions: impl IntoIterator<Item = (u64, Perm3)>) -> Option<Self> {
        let slots: BTreeMap<u64, Perm3> = exceptions.into_iter().collect();
        if slots.values().any(|g| !g.is_identity() && !g.is_transposition()) {
            return None;
        }
        Some(Self::normalize(floor, slots))
    }

    fn normalize(mut floor: u64, mut slots: BTreeMap<u64, Perm3>) -> Self {
        slots.retain(|&n, g| n >= floor && *g != Perm3::T12);
        while slots.get(&floor) == Some(&Perm3::E) {
            slots.remove(&floor);
            floor += 1;
        }
        Sym3Subgroup { floor, slots }
    }

    pub fn floor(&self) -> u64 {
        self.floor
    }

    /// The factor at coordinate `n`: `E` for `{e}`, else the transposition `t`
    /// with factor `{e, t}`.
    pub fn slot(&self, n: u64) -> Perm3 {
        if n < self.floor {
            Perm3::E
        } else {
            self.slots.get(&n).copied().unwrap_or(Perm3::T12)
        }
    }

    /// One past the last coordinate that differs from the default.
    pub fn horizon(&self) -> u64 {
        self.slots.keys().next_back().map_or(self.floor, |&n| (n + 1).max(self.floor))
    }

    fn factor(&self, n: u64) -> PermSet {
        PermSet::subgroup(self.slot(n))
    }

    fn from_slots(floor: u64, end: u64, slot: impl Fn(u64) -> Perm3) -> Self {
        Self::normalize(floor, (floor..end).map(|n| (n, slot(n))).collect())
    }
}

impl fmt::Display for Sym3Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "floor:{};pat:{{", self.floor)?;
        for (i, (n, g)) in self.slots.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{n}:{g}")?;
        }
        f.write_str("};default:(12)")
    }
}

/// A subset of Sym(3) as a bitmask over `Perm3::ALL`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct PermSet(u8);

impl PermSet {
    fn bit(g: Perm3) -> u8 {
        1 << Perm3::ALL.iter().position(|&h| h == g).expect("Perm3::ALL is complete")
    }

    fn single(g: Perm3) -> Self {
        PermSet(Self::bit(g))
    }

    fn subgroup(slot: Perm3) -> Self {
        PermSet(Self::bit(Perm3::E) | Self::bit(slot))
    }

    fn contains(self, g: Perm3) -> bool {
        self.0 & Self::bit(g) != 0
    }

    fn iter(self) -> impl Iterator<Item = Perm3> {
        Perm3::ALL.into_iter().filter(move |&g| self.contains(g))
    }

    fn product(self, other: PermSet) -> PermSet {
        let mut out = 0;
        for a in self.iter() {
            for b in other.iter() {
                out |= Self::bit(a.compose(b));
            }
        }
        PermSet(out)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Sym3Group;

impl Sym3Group {
    pub fn new() -> Self {
        Sym3Group
    }

    /// The pattern subgroup with the given floor adapted to `x`, normalised by `x`.
    pub fn adapted_subgroup(&self, x: &Sym3Element, floor: u64) -> Sym3Subgroup {
        Sym3Subgroup::from_slots(floor, x.cutoff.max(floor), |n| {
            let g = x.coord(n);
            if g.is_identity() {
                Perm3::T12
            } else if g.is_transposition() {
                g
            } else {
                Perm3::E
            }
        })
    }

    fn parse_index_map(cur: &mut Cursor<'_>) -> Result<BTreeMap<u64, Perm3>> {
        cur.expect('{')?;
        let mut map = BTreeMap::new();
        if cur.eat('}') {
            return Ok(map);
        }
        loop {
            cur.skip_ws();
            let (start, tok) = cur.take_while(|c| c.is_ascii_digit());
            let n: u64 = tok.parse().map_err(|_| Error::parse(start + 1, format!("invalid coordinate '{tok}'")))?;
            cur.expect(':')?;
            let g = Perm3::parse_cursor(cur)?;
            if map.insert(n, g).is_some() {
                return Err(Error::parse(start + 1, format!("duplicate coordinate {n}")));
            }
            if cur.eat('}') {
                return Ok(map);
            }
            cur.expect(',')?;
        }
    }
}

impl Family for Sym3Group {
    type Element = Sym3Element;
    type Subgroup = Sym3Subgroup;

    fn name(&self) -> &'static str {
        "sym3"
    }

    fn params(&self) -> String {
        String::new()
    }

    fn identity(&self) -> Sym3Element {
        Sym3Element::identity()
    }

    fn mul(&self, a: &Sym3Element, b: &Sym3Element) -> Sym3Element {
        a.map_coords(Some(b), Perm3::compose)
    }

    fn inv(&self, a: &Sym3Element) -> Sym3Element {
        a.map_coords(None, |g, _| g.inverse())
    }

    fn pow(&self, a: &Sym3Element, n: i64) -> Sym3Element {
        a.map_coords(None, |g, _| g.pow(n))
    }

    fn parse_element(&self, s: &str) -> Result<Sym3Element> {
        let mut cur = Cursor::new(s);
        let coords = Self::parse_index_map(&mut cur)?;
        cur.expect('|')?;
        cur.expect_str("tail:")?;
        cur.skip_ws();
        let tail_pos = cur.rest().as_ptr() as usize - s.as_ptr() as usize;
        let tail = Perm3::parse_cursor(&mut cur)?;
        if tail != Perm3::E && tail != Perm3::T12 {
            return Err(Error::parse(tail_pos + 1, "tail must be e or (12)"));
        }
        cur.expect('@')?;
        cur.skip_ws();
        let cut_pos = cur.rest().as_ptr() as usize - s.as_ptr() as usize;
        let cutoff: u64 = cur.integer()?;
        cur.finish()?;
        if let Some((&n, _)) = coords.iter().find(|(&n, _)| n >= cutoff) {
            return Err(Error::parse(cut_pos + 1, format!("coordinate {n} lies at or beyond the cutoff {cutoff}")));
        }
        Ok(Sym3Element::normalize(coords, tail, cutoff))
    }

    fn parse_subgroup(&self, s: &str) -> Result<Sym3Subgroup> {
        let mut cur = Cursor::new(s);
        cur.expect_str("floor:")?;
        let floor: u64 = cur.integer()?;
        cur.expect(';')?;
        cur.expect_str("pat:")?;
        cur.skip_ws();
        let pat_pos = cur.rest().as_ptr() as usize - s.as_ptr() as usize;
        let slots = Self::parse_index_map(&mut cur)?;
        cur.expect(';')?;
        cur.expect_str("default:")?;
        cur.skip_ws();
        let def_pos = cur.rest().as_ptr() as usize - s.as_ptr() as usize;
        if Perm3::parse_cursor(&mut cur)? != Perm3::T12 {
            return Err(Error::parse(def_pos + 1, "default pattern must be (12)"));
        }
        cur.finish()?;
        Sym3Subgroup::new(floor, slots)
            .ok_or_else(|| Error::parse(pat_pos + 1, "pattern entries must be e or transpositions"))
    }

    fn is_valid(&self, g: &Sym3Element) -> bool {
        (g.tail == Perm3::E || g.tail == Perm3::T12)
            && g.coords.iter().all(|(&n, h)| n < g.cutoff && !h.is_identity())
            && (g.cutoff == 0 || g.coord(g.cutoff - 1) != g.tail)
    }

    fn conj_subgroup(&self, x: &Sym3Element, v: &Sym3Subgroup) -> Sym3Subgroup {
        let end = v.horizon().max(x.cutoff);
        Sym3Subgroup::from_slots(v.floor, end, |n| {
            let s = v.slot(n);
            if s.is_identity() {
                s
            } else {
                x.coord(n).conjugate(s)
            }
        })
    }

    fn intersect(&self, a: &Sym3Subgroup, b: &Sym3Subgroup) -> Sym3Subgroup {
        let floor = a.floor.max(b.floor);
        let end = a.horizon().max(b.horizon());
        Sym3Subgroup::from_slots(floor, end, |n| if a.slot(n) == b.slot(n) { a.slot(n) } else { Perm3::E })
    }

    fn is_subgroup_of(&self, inner: &Sym3Subgroup, outer: &Sym3Subgroup) -> bool {
        let end = inner.horizon().max(outer.horizon());
        (0..end).all(|n| {
            let s = inner.slot(n);
            s.is_identity() || s == outer.slot(n)
        })
    }

    fn flags(&self, _v: &Sym3Subgroup) -> SubgroupFlags {
        SubgroupFlags { is_compact: true, is_open: true, is_trivial: false }
    }

    fn member(&self, g: &Sym3Element, v: &Sym3Subgroup) -> bool {
        let end = v.horizon().max(g.cutoff + 1);
        (0..end).all(|n| v.factor(n).contains(g.coord(n)))
    }

    fn index_formula(&self, outer: &Sym3Subgroup, inner: &Sym3Subgroup) -> IndexValue {
        let end = inner.horizon().max(outer.horizon());
        let shrunk = (0..end).filter(|&n| !outer.slot(n).is_identity() && inner.slot(n).is_identity()).count();
        IndexValue::power(2, shrunk as u64)
    }

    fn sample_member<R: Rng>(&self, v: &Sym3Subgroup, rng: &mut R, bound: u32) -> Sym3Element {
        let end = v.horizon() + bound as u64;
        let coords = (0..end)
            .map(|n| {
                let s = v.slot(n);
                (n, if rng.random_bool(0.5) { s } else { Perm3::E })
            })
            .collect();
        let tail = if rng.random_bool(0.5) { Perm3::T12 } else { Perm3::E };
        Sym3Element::normalize(coords, tail, end)
    }

    fn random_element<R: Rng>(&self, rng: &mut R, bound: u32) -> Sym3Element {
        let cutoff = rng.random_range(0..=bound as u64);
        let coords = (0..cutoff).map(|n| (n, *Perm3::ALL.choose(rng).expect("nonempty"))).collect();
        let tail = if rng.random_bool(0.5) { Perm3::T12 } else { Perm3::E };
        Sym3Element::normalize(coords, tail, cutoff)
    }

    fn factorization_holds(&self, v: &Sym3Subgroup, plus: &Sym3Subgroup, minus: &Sym3Subgroup) -> bool {
        let end = v.horizon().max(plus.horizon()).max(minus.horizon());
        (0..end).all(|n| plus.factor(n).product(minus.factor(n)) == v.factor(n))
    }

    fn factor_member(
        &self,
        g: &Sym3Element,
        plus: &Sym3Subgroup,
        minus: &Sym3Subgroup,
    ) -> Option<(Sym3Element, Sym3Element)> {
        let end = plus.horizon().max(minus.horizon()).max(g.cutoff);
        let mut left = BTreeMap::new();
        let mut right = BTreeMap::new();
        for n in 0..end {
            let target = g.coord(n);
            let (a, b) = plus
                .factor(n)
                .iter()
                .flat_map(|a| minus.factor(n).iter().map(move |b| (a, b)))
                .find(|(a, b)| a.compose(*b) == target)?;
            left.insert(n, a);
            right.insert(n, b);
        }
        // beyond `end` both factors are {e, (12)} and g has its tail
        Some((Sym3Element::normalize(left, g.tail, end), Sym3Element::normalize(right, Perm3::E, end)))
    }

    fn plus_plus_closed(&self, _x: &Sym3Element, _plus: &Sym3Subgroup) -> bool {
        // x has finite order, so the union is over finitely many compact groups
        true
    }

    fn candidates(&self, x: &Sym3Element, radius: u32) -> Vec<Sym3Subgroup> {
        let mut out: Vec<Sym3Subgroup> = Vec::new();
        for floor in 0..=radius as u64 {
            for v in [Sym3Subgroup::with_floor(floor), self.adapted_subgroup(x, floor)] {
                if !out.contains(&v) {
                    out.push(v);
                }
            }
        }
        out
    }

    fn in_double_coset(&self, y: &Sym3Element, left: &Sym3Subgroup, g: &Sym3Element, right: &Sym3Subgroup) -> bool {
        // a product of subgroups over coordinates: decide coordinate-wise
        let end = left.horizon().max(right.horizon()).max(y.cutoff).max(g.cutoff) + 1;
        (0..end)
            .all(|n| left.factor(n).product(PermSet::single(g.coord(n))).product(right.factor(n)).contains(y.coord(n)))
    }

    fn in_contraction(&self, g: &Sym3Element, x: &Sym3Element) -> ContractionDecision {
        if *g == Sym3Element::identity() {
            return ContractionDecision::identity();
        }
        ContractionDecision {
            verdict: false,
            certificate: ContractionCertificate::CoordinatePeriodicity { period: x.order() },
        }
    }

    fn contraction_group(&self, _x: &Sym3Element) -> ContractionGroup {
        ContractionGroup::Trivial
    }
}

/// The first of `e, (123), (132)` in `left_n · g_n · right_n`.
pub(crate) fn even_in_double_coset(
    left: &Sym3Subgroup,
    g: &Sym3Element,
    right: &Sym3Subgroup,
    n: u64,
) -> Option<Perm3> {
    let set = left.factor(n).product(PermSet::single(g.coord(n))).product(right.factor(n));
    Perm3::ALTERNATING.into_iter().find(|&h| set.contains(h))
}
