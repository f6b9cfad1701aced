//! Subcommand implementations. Each returns its report and the files it
//! would write; nothing here touches the filesystem except generator paths.

pub mod irreducibility;
pub mod kazhdan;
pub mod shrink;
pub mod spectral_gap;
pub mod tau;
pub mod walks;

use crate::output::Artifact;

/// Files to write plus a short human-readable summary for stdout.
#[derive(Debug, Clone, PartialEq)]
pub struct Output {
    pub artifacts: Vec<Artifact>,
    pub summary: String,
}
