//! Worked examples with frozen values. Each `DERIVED` value is recomputed
//! here by a small independent calculation before it is compared.

mod oracle;

use num_bigint::BigUint;
use tdlc::arith::{Perm3, Prime, Rational, Valuation};
use tdlc::families::{AffineGroup, LampElement, LampGroup, LampSubgroup, Sym3Group};
use tdlc::group::{Direction, Family, IndexValue};
use tdlc::lattice::{
    divisible_root, find_witness, AffineCovolume, CovolumeSubgroup, RationalLattice, Sym3Lattice, WitnessOptions,
};
use tdlc::scale::{
    displacement_index, double_coset_check, find_conjugator, in_contraction, is_tidy, limit_subgroup, modular, scale,
    ConjugatorMethod, EngineOptions,
};

fn q(s: &str) -> Rational {
    s.parse().unwrap()
}

fn idx(n: u64) -> IndexValue {
    IndexValue::Finite(BigUint::from(n))
}

fn opts() -> EngineOptions {
    EngineOptions::default()
}

fn wopts() -> WitnessOptions {
    WitnessOptions { n_max: 36, conjugator_k: 16, contraction_samples: 20, sample_bound: 4, seed: 1 }
}

/// Valuation by repeated exact division.
fn val_by_division(x: &Rational, p: i64) -> Option<i64> {
    if x.is_zero() {
        return None;
    }
    let (mut n, mut d) = (x.numer().clone(), x.denom().clone());
    let mut v = 0;
    while &n % p == 0.into() {
        n /= p;
        v += 1;
    }
    while &d % p == 0.into() {
        d /= p;
        v -= 1;
    }
    Some(v)
}

#[test]
fn valuations() {
    let two = Prime::new(2).unwrap();
    let three = Prime::new(3).unwrap();
    assert_eq!(q("1").val(two), Valuation::Finite(0));
    assert_eq!(q("0").val(two), Valuation::Infinite);
    for (x, p, prime, want) in [("12", 2, two, 2), ("2/9", 3, three, -2)] {
        assert_eq!(val_by_division(&q(x), p), Some(want));
        assert_eq!(q(x).val(prime), Valuation::Finite(want));
    }
}

#[test]
fn permutations() {
    let p = |s: &str| s.parse::<Perm3>().unwrap();
    // Image tables on {1,2,3}, composed right to left.
    let table = |g: Perm3| [1u8, 2, 3].map(|i| g.apply(i));
    let (c, t) = (p("(123)"), p("(12)"));
    assert_eq!(p("e").compose(t), t);
    assert_eq!(t.compose(t), p("e"));
    let conj = c.compose(t).compose(c.inverse());
    let by_table = [1u8, 2, 3].map(|i| {
        let inv = table(c.inverse())[i as usize - 1];
        let mid = table(t)[inv as usize - 1];
        table(c)[mid as usize - 1]
    });
    assert_eq!(table(conj), by_table);
    assert_eq!(conj, p("(23)"));
    assert_eq!(c.conjugate(t), conj);
    let order = |g: Perm3| (1..=6).find(|&k| g.pow(k).is_identity()).unwrap() as u32;
    for (g, want) in [(p("e"), 1), (t, 2), (c, 3)] {
        assert_eq!(order(g), want);
        assert_eq!(g.order(), want);
    }
}

#[test]
fn affine_group_core() {
    let g = AffineGroup::new(2).unwrap();
    let x = g.element(q("1/3"), 2);
    let y = g.element(q("5"), -1);
    // (a + 2^n b, n + m)
    assert_eq!(g.mul(&x, &y), g.element(q("1/3") + q("20"), 1));
    assert_eq!(g.mul(&x, &g.inv(&x)), g.identity());
    for b in ["3/7", "-5", "0"] {
        let bb = g.element(q(b), 0);
        let by_hand = g.mul(&g.mul(&g.element(q("0"), 1), &bb), &g.element(q("0"), -1));
        assert_eq!(g.conj_element(&g.element(q("0"), 1), &bb), by_hand);
        assert_eq!(by_hand, g.element(q(b) * q("2"), 0));
    }
    let v = g.parse_subgroup("level:0").unwrap();
    assert!(!g.member(&g.element(q("3/4"), 0), &v));
    assert!(g.member(&g.element(q("6"), 0), &g.parse_subgroup("level:1").unwrap()));
    assert_eq!(g.conj_subgroup(&g.element(q("7"), 0), &g.parse_subgroup("level:3").unwrap()).to_string(), "level:3");
    let down = g.conj_subgroup(&g.element(q("0"), -1), &v);
    assert_eq!(down.to_string(), "level:-1");
    assert_eq!(oracle::affine_index(&g, &down, &v), Some(2));
    assert_eq!(g.index(&down, &v).unwrap(), idx(2));
    for p in [3u64, 5] {
        let f = AffineGroup::new(p).unwrap();
        let (a, b) = (f.parse_subgroup("level:0").unwrap(), f.parse_subgroup("level:2").unwrap());
        assert_eq!(oracle::affine_index(&f, &a, &b), Some((p * p) as usize));
        assert_eq!(f.index(&a, &b).unwrap(), idx(p * p));
        assert_eq!(f.intersect(&a, &b), b);
    }
}

#[test]
fn lamp_group_core() {
    let g = LampGroup;
    let win = |s: &str| g.parse_subgroup(s).unwrap();
    let x = g.parse_element("{}|shift:1/2").unwrap();
    assert_eq!(g.conj_subgroup(&x, &win("window:{0/1}")), win("window:{1/2}"));
    let lit = g.parse_element("{5/1}|shift:0/1").unwrap();
    assert_eq!(g.conj_subgroup(&lit, &win("window:{0/1}")), win("window:{0/1}"));
    assert_eq!(g.intersect(&win("window:{0/1}"), &win("window:{1/3}")), win("window:{0/1, 1/3}"));
    let empty = LampSubgroup::window([]);
    for (pts, want) in [(vec![q("0"), q("1/2")], 4u64), (vec![q("0"), q("1/3"), q("2")], 8)] {
        let inner = LampSubgroup::window(pts.clone());
        assert_eq!(oracle::lamp_index(&empty, &inner, &[]) as u64, want);
        assert_eq!(g.index(&empty, &inner).unwrap(), idx(want));
    }
}

#[test]
fn sym3_group_core() {
    let g = Sym3Group;
    let x = g.parse_element("{0:(123)}|tail:e@1").unwrap();
    let v = g.parse_subgroup("floor:0;pat:{};default:(12)").unwrap();
    let moved = g.conj_subgroup(&x, &v);
    assert_eq!(moved, g.parse_subgroup("floor:0;pat:{0:(23)};default:(12)").unwrap());
    let meet = g.intersect(&moved, &v);
    assert_eq!(oracle::sym3_index(&moved, &meet), 2);
    assert_eq!(g.index(&moved, &meet).unwrap(), idx(2));
    assert_eq!(g.conj_subgroup(&g.identity(), &v), v);
    let h = g.parse_element("{0:(123),1:(123),2:(123)}|tail:e@3").unwrap();
    let order = (1..=6).find(|&k| g.pow(&h, k) == g.identity()).unwrap();
    assert_eq!(order, 3);
    assert_eq!(h.order(), 3);
}

#[test]
fn random_elements_are_seeded() {
    use tdlc::sampling::seeded;
    let g = AffineGroup::new(2).unwrap();
    let a = g.random_element(&mut seeded(0), 3);
    let b = g.random_element(&mut seeded(0), 3);
    assert_eq!(a, b);
    assert!(a.shift.abs() <= 3);
    assert!(a.lamp.val(g.prime()).finite().is_none_or(|v| v.abs() <= 3));
}

#[test]
fn displacement_and_limits() {
    let g2 = AffineGroup::new(2).unwrap();
    let v = g2.parse_subgroup("level:0").unwrap();
    assert!(displacement_index(&g2, &g2.identity(), &v).unwrap().is_one());
    assert_eq!(displacement_index(&g2, &g2.element(q("0"), -1), &v).unwrap(), idx(2));
    assert!(displacement_index(&g2, &g2.element(q("0"), 2), &v).unwrap().is_one());

    let g3 = AffineGroup::new(3).unwrap();
    let x = g3.element(q("0"), 1);
    let v3 = g3.parse_subgroup("level:0").unwrap();
    assert_eq!(limit_subgroup(&g3, &x, &v3, Direction::Plus, 64).unwrap().to_string(), "level:trivial");
    assert_eq!(limit_subgroup(&g3, &x, &v3, Direction::Minus, 64).unwrap(), v3);
    // Only (0, 0) survives deep levels among small-height rationals.
    for n in 1..40i64 {
        for num in -20..=20i64 {
            for den in [1i64, 2, 3, 9, 27] {
                let a = Rational::new(num, den);
                if g3.member(&g3.element(a.clone(), 0), &g3.parse_subgroup(&format!("level:{n}")).unwrap()) && n > 3 {
                    assert!(a.is_zero(), "{a} at level {n}");
                }
            }
        }
    }
    assert_eq!(limit_subgroup(&g3, &g3.identity(), &v3, Direction::Plus, 64).unwrap(), v3);

    let s = Sym3Group;
    let sx = s.parse_element("{0:(123)}|tail:e@1").unwrap();
    let sv = s.parse_subgroup("floor:0;pat:{};default:(12)").unwrap();
    let forced = s.parse_subgroup("floor:0;pat:{0:e};default:(12)").unwrap();
    assert_eq!(limit_subgroup(&s, &sx, &sv, Direction::Plus, 64).unwrap(), forced);
    assert_eq!(limit_subgroup(&s, &sx, &sv, Direction::Minus, 64).unwrap(), forced);
}

#[test]
fn tidiness() {
    let g = AffineGroup::new(2).unwrap();
    let v = g.parse_subgroup("level:0").unwrap();
    assert!(is_tidy(&g, &g.identity(), &v, &opts()).unwrap().tidy);
    let r = is_tidy(&g, &g.element(q("0"), 1), &v, &opts()).unwrap();
    assert!(r.tidy);
    assert_eq!((r.v_plus.to_string(), r.v_minus.to_string()), ("level:trivial".into(), "level:0".into()));

    let s = Sym3Group;
    let x = s.parse_element("{0:(123)}|tail:e@1").unwrap();
    let sv = s.parse_subgroup("floor:0;pat:{};default:(12)").unwrap();
    assert!(!is_tidy(&s, &x, &sv, &opts()).unwrap().tidy);
    assert_eq!(displacement_index(&s, &x, &sv).unwrap(), idx(2));
    assert!(scale(&s, &x, &opts()).unwrap().scale.is_one());
}

#[test]
fn scales_and_modular() {
    let g = AffineGroup::new(2).unwrap();
    assert!(scale(&g, &g.identity(), &opts()).unwrap().scale.is_one());
    assert_eq!(scale(&g, &g.element(q("0"), -3), &opts()).unwrap().scale, idx(8));
    assert!(scale(&g, &g.element(q("0"), 3), &opts()).unwrap().scale.is_one());
    assert_eq!(modular(&g, &g.identity(), &opts()).unwrap(), q("1"));
    // s(x) = 1 and s(x^-1) = 2.
    let x = g.element(q("0"), 1);
    let ratio = Rational::from(1) / Rational::from(2);
    assert!(scale(&g, &x, &opts()).unwrap().scale.is_one());
    assert_eq!(scale(&g, &g.inv(&x), &opts()).unwrap().scale, idx(2));
    assert_eq!(modular(&g, &x, &opts()).unwrap(), ratio);
}

#[test]
fn contraction_membership() {
    let g = AffineGroup::new(2).unwrap();
    let x = g.element(q("0"), 1);
    assert!(in_contraction(&g, &g.identity(), &x).verdict);
    for b in ["1", "-3/8", "5/7"] {
        assert!(in_contraction(&g, &g.element(q(b), 0), &x).verdict);
        assert!(!in_contraction(&g, &g.element(q(b), 2), &x).verdict);
    }
    let l = LampGroup;
    let x = l.parse_element("{}|shift:1/1").unwrap();
    assert!(in_contraction(&l, &l.parse_element("{0/1}|shift:0/1").unwrap(), &x).verdict);
    assert!(!in_contraction(&l, &l.parse_element("{}cofinite|shift:0/1").unwrap(), &x).verdict);
}

#[test]
fn conjugator_closed_form() {
    let g = AffineGroup::new(2).unwrap();
    let (x, y) = (g.element(q("0"), -1), g.element(q("1"), -1));
    let v = g.parse_subgroup("level:0").unwrap();
    let same = find_conjugator(&g, &x, &x, &v, 16, &opts()).unwrap();
    assert_eq!(same.t, g.identity());
    let found = find_conjugator(&g, &y, &x, &v, 16, &opts()).unwrap();
    // tau = p / (p - 1) = 2.
    assert_eq!(found.t, g.element(q("2"), 0));
    assert_eq!(found.method, ConjugatorMethod::ClosedForm);
    let t_inv = g.inv(&found.t);
    for k in 0..=16i64 {
        let w = g.mul(&g.mul(&g.mul(&t_inv, &g.pow(&y, k)), &found.t), &g.pow(&x, -k));
        assert_eq!(w, g.identity(), "k = {k}");
    }
    assert!(double_coset_check(&g, &x, &x, &v, 1, &opts()).unwrap().holds());
}

#[test]
fn affine_witnesses() {
    let g = AffineGroup::new(2).unwrap();
    let h3 = AffineCovolume::new(3).unwrap();
    let v = g.parse_subgroup("level:0").unwrap();
    assert_eq!(h3.coset_meets(&g, &g.element(q("0"), 1), 3, &v), Some(g.element(q("0"), 3)));
    assert_eq!(h3.coset_meets(&g, &g.element(q("0"), 1), 2, &v), None);
    let inside = g.element(q("1/4"), 3);
    assert_eq!(h3.coset_meets(&g, &inside, 1, &v), Some(inside.clone()));
    let w = find_witness(&g, &h3, &inside, &wopts(), &opts()).unwrap();
    assert_eq!((w.n, &w.h, w.t()), (1, &inside, &g.identity()));

    let w = find_witness(&g, &h3, &g.element(q("0"), -1), &wopts(), &opts()).unwrap();
    assert!(w.holds());
    assert_eq!((w.n, w.h.clone()), (3, g.element(q("0"), -3)));
    assert_eq!(w.scale_x.scale.pow(3), idx(8));
    assert_eq!(w.scale_h.scale, idx(8));
    assert!(AffineCovolume::new(0).is_err());
}

#[test]
fn lamp_and_sym3_witnesses() {
    let l = LampGroup;
    let x = l.parse_element("{0/1}|shift:1/2").unwrap();
    let v = LampSubgroup::window([]);
    assert_eq!(RationalLattice.coset_meets(&l, &x, 1, &v), Some(LampElement::translation(q("1/2"))));
    let w = find_witness(&l, &RationalLattice, &x, &wopts(), &opts()).unwrap();
    assert!(w.holds());
    assert_eq!((w.n, w.h.clone()), (1, LampElement::translation(q("1/2"))));

    let s = Sym3Group;
    let inside = s.parse_element("{1:(123),4:(132)}|tail:e@5").unwrap();
    assert!(Sym3Lattice.contains(&inside));
    let w = find_witness(&s, &Sym3Lattice, &inside, &wopts(), &opts()).unwrap();
    assert!(w.holds());
    assert_eq!((w.n, &w.h), (1, &inside));
}

#[test]
fn divisible_roots() {
    let (root, fact) = divisible_root(&q("3/2"), 4);
    assert_eq!(fact, 24);
    assert_eq!(root, LampElement::translation(q("1/16")));
    assert_eq!(LampGroup.pow(&root, 24), LampElement::translation(q("3/2")));
    let (root, _) = divisible_root(&q("0"), 5);
    assert_eq!(root, LampGroup.identity());
    let l = LampGroup;
    let delta = l.parse_element("{0/1}|shift:0/1").unwrap();
    assert!(in_contraction(&l, &delta, &LampElement::translation(q("1"))).verdict);
}
