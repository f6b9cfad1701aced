//! Irreducibility of characteristic polynomials along random products in
//! `SL(n, Z)` and `Sp(2n, Z)`: generator sets, polynomial arithmetic over
//! `F_p`, sampling experiments and the predicted bounds.

mod experiment;
mod generators;
mod poly;
mod predict;

pub use experiment::*;
pub use generators::*;
pub use poly::*;
pub use predict::*;
