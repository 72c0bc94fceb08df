//! The three concrete groups: `Q_p ⋊ Z`, the restricted product of copies of
//! Sym(3), and the lamplighter `C_2^Q ⋊ Q`.

pub mod affine;
pub mod lamp;
pub mod sym3;

pub use affine::{AffineElement, AffineGroup, AffineSubgroup};
pub use lamp::{LampElement, LampGroup, LampSubgroup, Support};
pub use sym3::{Sym3Element, Sym3Group, Sym3Subgroup};
