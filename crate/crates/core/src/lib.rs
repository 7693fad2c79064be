//! Regenerative block bootstrap (RBB) and regeneration-based bootstrap (RGB)
//! for atomic, null recurrent Markov chains.
//!
//! The pipeline for one chain is
//!
//! 1. simulate a [`Trajectory`] ([`chain`]),
//! 2. split it at visits to an atom into regeneration blocks and reduce each
//!    block to its functional sum and length ([`regeneration`]),
//! 3. estimate `∫ f dπ` from the complete blocks ([`estimators`]),
//! 4. resample the blocks to approximate the law of the studentized
//!    estimator ([`bootstrap`]).
//!
//! [`experiments`] wires these together into the simple symmetric random walk
//! simulation study (true-distribution comparison, coverage, Mittag-Leffler
//! moments). Every random draw comes from a stream derived by [`rng`] from a
//! master seed, so results do not depend on thread scheduling.

pub mod bootstrap;
pub mod chain;
pub mod ecdf;
pub mod error;
pub mod estimators;
pub mod experiments;
pub mod regeneration;
pub mod rng;

pub use bootstrap::{
    bootstrap_distribution, bootstrap_statistic, confidence_interval, quantile, rbb_draw, rgb_draw,
    BootstrapDistribution, BootstrapSample, ConfidenceInterval, Method, Studentization,
};
pub use chain::{simulate_chain, simulate_ssrw, ChainModel, SimpleRandomWalk, Trajectory};
pub use ecdf::{ks_distance, ks_distance_to_cdf, normal_cdf, Ecdf};
pub use error::{Error, Result};
pub use estimators::{
    normalized_visit_count, point_estimate, studentized_statistic, variance_estimate,
    EstimateSummary,
};
pub use regeneration::{
    block_functional, decompose, occupation_processes, partial_sum, Atom, BlockDecomposition,
    BlockStatistics, Normalization, OccupationPaths, Singleton,
};
pub use rng::{derive_seed, derive_stream, StreamRng};
