//! Sparse possibilistic c-means clustering.
//!
//! [`algorithms::Registry`] maps names (`pcm`, `spcm`, `sapcm`, `apcm`,
//! `fcm`, `kmeans`) to clusterers sharing the [`algorithms::Clusterer`]
//! trait. [`solver`] holds the per-entry sparse membership solve,
//! [`datagen`] the seeded mixtures, and [`experiment`] the artifact-writing
//! runner behind the CLI.

// `!(x > 0.0)` style checks are meant to reject NaN as well
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod algorithms;
pub mod datagen;
pub mod error;
pub mod experiment;
pub mod fcm;
pub mod io;
pub mod metrics;
pub mod plot;
pub mod solver;
pub mod types;

pub use algorithms::{run, run_pcm, run_sapcm, run_spcm, AlgoConfig, Clusterer, Fit, Registry};
pub use error::{Error, Result};
pub use types::{ClusterModel, DataSet, IterationState, MembershipMatrix, MembershipSolution, RunReport};
