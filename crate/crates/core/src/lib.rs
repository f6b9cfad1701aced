//! Equidistribution of group-valued products along walks on decorated graphs.
//!
//! A decorated graph attaches an element of a finite group to every vertex;
//! each walk multiplies the decorations it visits, left to right. This crate
//! computes the induced distributions exactly, measures and bounds their
//! convergence to uniform through twisted transfer operators, derives
//! effective rates from Kazhdan-type constants, and runs the characteristic
//! polynomial irreducibility experiments for integer matrix groups.

pub mod arith;
pub mod bounds;
pub mod error;
pub mod fourier;
pub mod graphwalk;
pub mod groups;
pub mod matapp;
pub mod seed;
pub mod spectral;

pub use error::{Error, Result};
