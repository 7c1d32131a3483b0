//! Whitehead posets of right-angled Artin groups and the cohomology of
//! their pure symmetric automorphism groups.
//!
//! Given a finite simplicial graph Γ, the crate enumerates the
//! Γ-Whitehead poset of vertex types (families of pairwise compatible
//! based partitions), decides which types are essential, and derives from
//! the counts:
//!
//! * the Betti vectors of ΣPOut(A_Γ) and ΣPAut(A_Γ),
//! * the first page of the equivariant spectral sequence for the action
//!   on the McCullough-Miller complex, with exact integer differentials
//!   and Smith-normal-form homology,
//! * the degree-2 ring data of the Brownstein-Lee presentation (the
//!   bases B₁ and B₂ and the injection φ between them),
//! * the Koban-Piggott presentation of ΣPAut(A_Γ) by partial
//!   conjugations, with free-group homomorphism verification.
//!
//! Start with [`graph::Graph::parse`] and [`poset::WhiteheadPoset::enumerate`],
//! or run one of the examples: each major capability has a runnable
//! example under `examples/`.

pub mod checks;
pub mod cli;
pub mod error;
pub mod essential;
pub mod graph;
pub mod homology;
pub mod matrix;
pub mod partition;
pub mod poset;
pub mod report;
pub mod ring;
mod vset;

pub use error::{Error, Result};
pub use vset::{VertexSet, MAX_VERTICES};

/// Default ceiling on the number of poset elements; enumeration fails
/// loudly beyond it instead of hanging on Bell-number blowup.
pub const DEFAULT_CAP: usize = 500_000;
