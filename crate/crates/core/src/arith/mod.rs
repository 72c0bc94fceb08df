//! Exact arithmetic substrates: rationals with p-adic valuation, the
//! symmetric group on three letters, and subsets of Q built from points and
//! arithmetic rays.

mod perm3;
mod qset;
mod rational;

pub use perm3::Perm3;
pub use qset::{QSet, Ray};
pub use rational::{Prime, Rational, Valuation};
