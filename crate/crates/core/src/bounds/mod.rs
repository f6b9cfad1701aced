//! Effective constants: Cayley-graph displacement bounds, the compression of
//! the twist onto the Perron direction, the shrinkage function and the
//! resulting certified decay schedules.

mod certify;
mod compression;
mod kazhdan;
mod rate;
mod shrink;

pub use certify::*;
pub use compression::*;
pub use kazhdan::*;
pub use rate::*;
pub use shrink::*;
