//! Brute-force index computation by enumerating cosets in finite quotient
//! models. Shares nothing with the library's index formulas beyond group
//! multiplication and membership.

#![allow(dead_code)]

use std::collections::BTreeSet;

use rand::Rng;

use tdlc::arith::{Perm3, Rational};
use tdlc::families::{
    AffineElement, AffineGroup, AffineSubgroup, LampElement, LampGroup, LampSubgroup, Sym3Element, Sym3Group,
    Sym3Subgroup,
};
use tdlc::group::Family;

/// Classes of `reps` under `g ~ h` iff `g^-1 h ∈ inner`.
pub fn count_cosets<F: Family>(fam: &F, reps: &[F::Element], inner: &F::Subgroup) -> usize {
    let mut classes: Vec<F::Element> = Vec::new();
    for g in reps {
        if !classes.iter().any(|c| fam.member(&fam.mul(&fam.inv(c), g), inner)) {
            classes.push(g.clone());
        }
    }
    classes.len()
}

/// Representatives of `p^j Z_p / p^depth Z_p`.
pub fn affine_reps(fam: &AffineGroup, j: i64, depth: i64) -> Vec<AffineElement> {
    let p = fam.prime().get() as i64;
    let base = Rational::prime_power(fam.prime(), j);
    (0..p.pow((depth - j) as u32)).map(|r| fam.element(&base * &Rational::from(r), 0)).collect()
}

pub fn affine_index(fam: &AffineGroup, outer: &AffineSubgroup, inner: &AffineSubgroup) -> Option<usize> {
    let (AffineSubgroup::Level(j), AffineSubgroup::Level(k)) = (*outer, *inner) else {
        return None;
    };
    // inner ⊇ p^{k+1} Z_p, so classes of the finite model are cosets of inner
    Some(count_cosets(fam, &affine_reps(fam, j, k.max(j) + 1), inner))
}

/// Every member of `outer` supported below `end`, with trivial tail.
pub fn sym3_reps(outer: &Sym3Subgroup, end: u64) -> Vec<Sym3Element> {
    let mut out = vec![Vec::new()];
    for n in 0..end {
        let slot = outer.slot(n);
        let choices: &[Perm3] = if slot.is_identity() { &[Perm3::E] } else { &[Perm3::E, slot] };
        out = out
            .into_iter()
            .flat_map(|prefix: Vec<Perm3>| {
                choices.iter().map(move |&g| {
                    let mut v = prefix.clone();
                    v.push(g);
                    v
                })
            })
            .collect();
    }
    out.into_iter().map(|c| Sym3Element::from_parts(&c, Perm3::E).unwrap()).collect()
}

pub fn sym3_index(outer: &Sym3Subgroup, inner: &Sym3Subgroup) -> usize {
    // past both horizons the factors agree, so they contribute no cosets
    let end = outer.horizon().max(inner.horizon());
    count_cosets(&Sym3Group, &sym3_reps(outer, end), inner)
}

/// Every configuration on `support` that vanishes on the window of `outer`.
pub fn lamp_reps(outer: &LampSubgroup, support: &BTreeSet<Rational>) -> Vec<LampElement> {
    let free: Vec<&Rational> = support.iter().filter(|p| !outer.window_set().contains(p)).collect();
    (0u32..1 << free.len())
        .map(|mask| {
            LampElement::lamps_at(
                free.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, p)| (*p).clone()),
            )
        })
        .collect()
}

pub fn lamp_index(outer: &LampSubgroup, inner: &LampSubgroup, extra: &[Rational]) -> usize {
    let mut support: BTreeSet<Rational> = outer.window_set().points().clone();
    support.extend(inner.window_set().points().iter().cloned());
    support.extend(extra.iter().cloned());
    count_cosets(&LampGroup, &lamp_reps(outer, &support), inner)
}

pub fn random_point<R: Rng>(rng: &mut R) -> Rational {
    Rational::new(rng.random_range(-6..=6i64), rng.random_range(1..=3i64))
}
