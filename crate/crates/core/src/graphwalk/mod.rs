//! Decorated graphs, exact walk-product distributions and walk sampling.

mod dp;
mod graph;
mod perron;
mod sample;

pub use dp::*;
pub use graph::*;
pub use perron::*;
pub use sample::*;
