//! Hard-intervention causal equivalence over acyclic directed mixed graphs.
//!
//! The crate is `no_std` and needs only `alloc`.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod augmentation;
pub mod enumeration;
pub mod equivalence;
pub mod error;
pub mod graph;
pub mod learner;
pub mod nodeset;
pub mod oracle;
pub mod projection;
pub mod separation;

pub use augmentation::{
    augmented_pair_graph, i_augmented_mag, i_augmented_tuple, i_essential_graph, soft_augmented_mag,
    twin_augmented_mag, AugmentedGraph, Construction, DomainNode,
};
pub use enumeration::{admg_count, enumerate_admgs, enumerate_admgs_labeled, mec_size_exhaustive, EnumerationSpace};
pub use equivalence::{i_markov_equivalent, mag_equivalent, twin_equivalent, EquivalenceReport, Regime, Signature};
pub use error::{Error, Result};
pub use graph::{Admg, InterventionPair, InterventionSet, NodeId};
pub use learner::{learn, orient_fixpoint, LearnOutput, Pag, SepSetTable};
pub use nodeset::NodeSet;
pub use oracle::SeparationOracle;
pub use projection::{latent_project, validate_mag, Mark, MixedGraph};
pub use separation::{has_inducing_path, m_separated, LatentPolicy};
