//! Exact computation of the scale function, tidy subgroups and contraction
//! groups on three concrete totally disconnected, locally compact groups,
//! together with a harness that builds explicit witnesses showing how a
//! finite-covolume subgroup controls scales and contraction groups of the
//! ambient group.
//!
//! ```
//! use tdlc::families::AffineGroup;
//! use tdlc::group::Family;
//! use tdlc::scale::{scale, EngineOptions};
//!
//! let g = AffineGroup::new(2)?;
//! let x = g.parse_element("(0/1, -3)")?;
//! let cert = scale(&g, &x, &EngineOptions::default())?;
//! assert_eq!(cert.scale.to_string(), "8");
//! # Ok::<(), tdlc::Error>(())
//! ```

pub mod arith;
pub mod battery;
pub mod config;
mod error;
pub mod families;
pub mod group;
pub mod lattice;
mod parse;
pub mod report;
pub mod sampling;
pub mod scale;

pub use error::{Error, Result};
