use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::parse::Cursor;

/// An element of Sym(3), stored as its image table on `{1, 2, 3}`
/// (zero-based internally).
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm3([u8; 3]);

impl Perm3 {
    pub const E: Perm3 = Perm3([0, 1, 2]);
    pub const T12: Perm3 = Perm3([1, 0, 2]);
    pub const T13: Perm3 = Perm3([2, 1, 0]);
    pub const T23: Perm3 = Perm3([0, 2, 1]);
    pub const C123: Perm3 = Perm3([1, 2, 0]);
    pub const C132: Perm3 = Perm3([2, 0, 1]);

    pub const ALL: [Perm3; 6] = [Perm3::E, Perm3::T12, Perm3::T13, Perm3::T23, Perm3::C123, Perm3::C132];

    pub const TRANSPOSITIONS: [Perm3; 3] = [Perm3::T12, Perm3::T13, Perm3::T23];

    /// The alternating subgroup `{e, (123), (132)}`.
    pub const ALTERNATING: [Perm3; 3] = [Perm3::E, Perm3::C123, Perm3::C132];

    /// Builds a permutation from its image table on `{1, 2, 3}`.
    pub fn from_images(images: [u8; 3]) -> Option<Perm3> {
        let mut seen = [false; 3];
        let mut table = [0u8; 3];
        for (i, &v) in images.iter().enumerate() {
            if !(1..=3).contains(&v) || seen[(v - 1) as usize] {
                return None;
            }
            seen[(v - 1) as usize] = true;
            table[i] = v - 1;
        }
        Some(Perm3(table))
    }

    /// Image of `i` in `{1, 2, 3}`.
    pub fn apply(self, i: u8) -> u8 {
        self.0[(i - 1) as usize] + 1
    }

    /// Function composition: `(a.compose(b))(i) = a(b(i))`.
    pub fn compose(self, other: Perm3) -> Perm3 {
        Perm3([self.0[other.0[0] as usize], self.0[other.0[1] as usize], self.0[other.0[2] as usize]])
    }

    pub fn inverse(self) -> Perm3 {
        let mut t = [0u8; 3];
        for (i, &v) in self.0.iter().enumerate() {
            t[v as usize] = i as u8;
        }
        Perm3(t)
    }

    /// `self * g * self^-1`.
    pub fn conjugate(self, g: Perm3) -> Perm3 {
        self.compose(g).compose(self.inverse())
    }

    pub fn pow(self, n: i64) -> Perm3 {
        let base = if n < 0 { self.inverse() } else { self };
        (0..n.unsigned_abs() % 6).fold(Perm3::E, |acc, _| acc.compose(base))
    }

    pub fn order(self) -> u32 {
        let mut acc = self;
        let mut m = 1;
        while acc != Perm3::E {
            acc = acc.compose(self);
            m += 1;
        }
        m
    }

    pub fn is_identity(self) -> bool {
        self == Perm3::E
    }

    pub fn is_transposition(self) -> bool {
        self.order() == 2
    }

    pub fn is_even(self) -> bool {
        self.order() != 2
    }

    pub(crate) fn parse_cursor(cur: &mut Cursor<'_>) -> Result<Perm3> {
        cur.skip_ws();
        if cur.eat('e') {
            return Ok(Perm3::E);
        }
        cur.expect('(')?;
        let (start, digits) = cur.take_while(|c| c.is_ascii_digit());
        cur.expect(')')?;
        let pts: Vec<u8> = digits.bytes().map(|b| b - b'0').collect();
        let bad = || Error::parse(start + 1, format!("invalid cycle '({digits})'"));
        if !(2..=3).contains(&pts.len())
            || pts.iter().any(|p| !(1..=3).contains(p))
            || pts[1..].contains(&pts[0])
            || pts.get(2).is_some_and(|c| *c == pts[1])
        {
            return Err(bad());
        }
        let mut images = [1u8, 2, 3];
        for (i, &p) in pts.iter().enumerate() {
            let next = pts[(i + 1) % pts.len()];
            if images[(p - 1) as usize] != p {
                return Err(bad());
            }
            images[(p - 1) as usize] = next;
        }
        Perm3::from_images(images).ok_or_else(bad)
    }
}

impl fmt::Display for Perm3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match *self {
            Perm3::E => "e",
            Perm3::T12 => "(12)",
            Perm3::T13 => "(13)",
            Perm3::T23 => "(23)",
            Perm3::C123 => "(123)",
            _ => "(132)",
        };
        f.write_str(s)
    }
}

impl fmt::Debug for Perm3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Perm3 {
    type Err = Error;

    fn from_str(s: &str) -> Result<Perm3> {
        let mut cur = Cursor::new(s);
        let p = Perm3::parse_cursor(&mut cur)?;
        cur.finish()?;
        Ok(p)
    }
}
