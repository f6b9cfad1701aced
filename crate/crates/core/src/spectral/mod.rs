//! Norms and spectral radii, the twisted operator `U_rho A_rho` and the
//! regular-representation transfer operator.

mod operator;
mod regular;
mod twisted;

pub use operator::*;
pub use regular::*;
pub use twisted::*;
