use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::parse::Cursor;

/// A prime number, validated on construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Prime(u64);

impl Prime {
    pub fn new(p: u64) -> Result<Self> {
        if p < 2 || (2..).take_while(|d| d * d <= p).any(|d| p.is_multiple_of(d)) {
            return Err(Error::NotPrime(p));
        }
        Ok(Prime(p))
    }

    pub fn get(self) -> u64 {
        self.0
    }

    pub fn big(self) -> BigInt {
        BigInt::from(self.0)
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// The exponent of a prime in a rational number; zero has valuation
/// `Infinite`, which compares above every finite value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }

    /// `self >= k`, the membership test for `p^k Z_p`.
    pub fn at_least(self, k: i64) -> bool {
        self >= Valuation::Finite(k)
    }
}

impl Add for Valuation {
    type Output = Valuation;

    fn add(self, rhs: Valuation) -> Valuation {
        match (self, rhs) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a + b),
            _ => Valuation::Infinite,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => f.write_str("inf"),
        }
    }
}

/// An exact rational number in lowest terms with positive denominator.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rational(BigRational);

impl Rational {
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Self {
        Rational(BigRational::new(num.into(), den.into()))
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        Rational(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn recip(&self) -> Self {
        Rational(self.0.recip())
    }

    /// `p^e` for any integer exponent.
    pub fn prime_power(p: Prime, e: i64) -> Self {
        let mag = num_traits::pow(p.big(), e.unsigned_abs() as usize);
        if e >= 0 {
            Rational::from_int(mag)
        } else {
            Rational::new(BigInt::one(), mag)
        }
    }

    pub fn pow(&self, e: i64) -> Self {
        let mag = Rational(num_traits::pow(self.0.clone(), e.unsigned_abs() as usize));
        if e >= 0 {
            mag
        } else {
            mag.recip()
        }
    }

    /// The p-adic valuation.
    pub fn val(&self, p: Prime) -> Valuation {
        if self.is_zero() {
            return Valuation::Infinite;
        }
        let p = p.big();
        Valuation::Finite(multiplicity(self.numer(), &p) - multiplicity(self.denom(), &p))
    }

    /// The p-adic fractional part: the unique `A / p^e` with `0 <= A < p^e`
    /// such that `self - A / p^e` lies in `Z_p`.
    pub fn frac_p(&self, p: Prime) -> Rational {
        let e = match self.val(p) {
            Valuation::Finite(v) if v < 0 => -v,
            _ => return Rational::zero(),
        };
        let pe = num_traits::pow(p.big(), e as usize);
        // self = N / (p^e D) with gcd(D, p) = 1
        let d = self.denom() / &pe;
        let n = self.numer();
        let d_inv = mod_inverse(&d.mod_floor(&pe), &pe);
        let a = (n * d_inv).mod_floor(&pe);
        Rational::new(a, pe)
    }

    pub fn to_i64(&self) -> Option<i64> {
        if self.is_integer() {
            self.numer().to_i64()
        } else {
            None
        }
    }

    pub fn floor(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    pub fn as_big(&self) -> &BigRational {
        &self.0
    }

    pub(crate) fn parse_cursor(cur: &mut Cursor<'_>) -> Result<Self> {
        let (start, tok) = cur.rational_token()?;
        parse_token(tok).ok_or_else(|| Error::parse(start + 1, format!("invalid rational '{tok}'")))
    }
}

fn parse_token(tok: &str) -> Option<Rational> {
    let (num, den) = match tok.split_once('/') {
        Some((n, d)) => (n.parse::<BigInt>().ok()?, d.parse::<BigInt>().ok()?),
        None => (tok.parse::<BigInt>().ok()?, BigInt::one()),
    };
    if den.is_zero() {
        return None;
    }
    Some(Rational::new(num, den))
}

fn multiplicity(n: &BigInt, p: &BigInt) -> i64 {
    let mut n = n.abs();
    let mut k = 0;
    loop {
        let (q, r) = n.div_rem(p);
        if !r.is_zero() {
            return k;
        }
        n = q;
        k += 1;
    }
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> BigInt {
    if m.is_one() {
        return BigInt::zero();
    }
    let eg = a.extended_gcd(m);
    debug_assert!(eg.gcd.is_one());
    eg.x.mod_floor(m)
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut cur = Cursor::new(s);
        let q = Rational::parse_cursor(&mut cur)?;
        cur.finish()?;
        Ok(q)
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_int(n)
    }
}

impl From<BigUint> for Rational {
    fn from(n: BigUint) -> Self {
        Rational::from_int(BigInt::from(n))
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident) => {
        impl $tr for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0.$method(rhs.0))
            }
        }
        impl<'a> $tr<&'a Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl Neg for Rational {
    type Output = Rational;

    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;

    fn neg(self) -> Rational {
        Rational(-self.0.clone())
    }
}

impl PartialEq<i64> for Rational {
    fn eq(&self, other: &i64) -> bool {
        self.0 == BigRational::from_integer(BigInt::from(*other))
    }
}

impl PartialOrd<i64> for Rational {
    fn partial_cmp(&self, other: &i64) -> Option<Ordering> {
        self.0.partial_cmp(&BigRational::from_integer(BigInt::from(*other)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    // Oracle: strip factors of p by repeated exact division of the reduced
    // numerator and denominator.
    fn val_by_division(x: &Rational, p: u64) -> Option<i64> {
        if x.is_zero() {
            return None;
        }
        let strip = |mut n: i64| {
            let mut k = 0;
            while n % p as i64 == 0 {
                n /= p as i64;
                k += 1;
            }
            k
        };
        Some(strip(x.numer().to_i64()?) - strip(x.denom().to_i64()?))
    }

    #[test]
    fn valuation_examples() {
        let two = Prime::new(2).unwrap();
        let three = Prime::new(3).unwrap();
        assert_eq!(Rational::one().val(two), Valuation::Finite(0));
        assert_eq!(Rational::zero().val(two), Valuation::Infinite);
        assert_eq!(q("12").val(two), Valuation::Finite(2));
        assert_eq!(q("2/9").val(three), Valuation::Finite(-2));
        assert_eq!(val_by_division(&q("12"), 2), Some(2));
        assert_eq!(val_by_division(&q("2/9"), 3), Some(-2));
    }

    #[test]
    fn non_primes_rejected() {
        for n in [0, 1, 4, 9, 15, 1001] {
            assert!(matches!(Prime::new(n), Err(Error::NotPrime(_))));
        }
        for n in [2, 3, 5, 7, 101] {
            assert!(Prime::new(n).is_ok());
        }
    }

    #[test]
    fn parse_and_print() {
        assert_eq!(q("6/-4").to_string(), "-3/2");
        assert_eq!(q("0/7").to_string(), "0/1");
        assert_eq!(q("5").to_string(), "5/1");
        assert!(matches!("1/0".parse::<Rational>(), Err(Error::Parse { pos: 1, .. })));
        assert!(matches!("1/2x".parse::<Rational>(), Err(Error::Parse { pos: 4, .. })));
    }

    #[test]
    fn p_adic_fractional_part() {
        let two = Prime::new(2).unwrap();
        let five = Prime::new(5).unwrap();
        assert_eq!(q("3/4").frac_p(two), q("3/4"));
        assert_eq!(q("7/4").frac_p(two), q("3/4"));
        assert_eq!(q("1/3").frac_p(two), Rational::zero());
        // 1/10 = 1/(2*5); mod 5: 2^{-1} = 3, so frac = 3/5
        assert_eq!(q("1/10").frac_p(five), q("3/5"));
    }

    fn arb_rational() -> impl Strategy<Value = Rational> {
        (-500i64..500, 1i64..200).prop_map(|(n, d)| Rational::new(n, d))
    }

    proptest! {
        #[test]
        fn valuation_is_multiplicative(a in arb_rational(), b in arb_rational(), pi in 0usize..4) {
            let p = Prime::new([2, 3, 5, 7][pi]).unwrap();
            prop_assert_eq!((&a * &b).val(p), a.val(p) + b.val(p));
        }

        #[test]
        fn valuation_is_ultrametric(a in arb_rational(), b in arb_rational(), pi in 0usize..4) {
            let p = Prime::new([2, 3, 5, 7][pi]).unwrap();
            prop_assert!((&a + &b).val(p) >= a.val(p).min(b.val(p)));
        }

        #[test]
        fn valuation_matches_division_oracle(a in arb_rational(), pi in 0usize..4) {
            let pv = [2u64, 3, 5, 7][pi];
            let p = Prime::new(pv).unwrap();
            prop_assert_eq!(a.val(p).finite(), val_by_division(&a, pv));
        }

        #[test]
        fn text_round_trip(a in arb_rational()) {
            let s = a.to_string();
            prop_assert_eq!(s.parse::<Rational>().unwrap().to_string(), s);
        }

        #[test]
        fn fractional_part_is_p_integral_remainder(a in arb_rational(), pi in 0usize..3) {
            let p = Prime::new([2, 3, 5][pi]).unwrap();
            let f = a.frac_p(p);
            prop_assert!((&a - &f).val(p).at_least(0));
            prop_assert!(!f.is_negative() && f < 1);
        }
    }
}
