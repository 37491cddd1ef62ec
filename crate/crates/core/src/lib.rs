//! Infection-curve flattening on small-world networks.
//!
//! Generate Watts-Strogatz graphs, quarantine the top-ranked nodes under a
//! centrality measure, spread an infection one hop per iteration from a
//! random seed, and summarize the resulting distance distributions with a
//! fitted Gamma density alongside clustering, path length and
//! small-worldness.
//!
//! Numeric routines are generic over [`Scalar`] (`f32` or `f64`); the
//! aliases below fix them to `f64`, which is what the experiment harness
//! uses.

pub mod centrality;
pub mod distfit;
pub mod epidemic;
pub mod error;
pub mod experiment;
pub mod generators;
pub mod graph;
pub mod metrics;
pub mod plot;
pub mod report;
pub mod rng;
pub mod scalar;

pub use centrality::{Measure, Ranking};
pub use epidemic::{DistanceHistogram, Isolation};
pub use error::{Error, Result};
pub use experiment::{ExperimentConfig, ExperimentResult};
pub use generators::WsParams;
pub use graph::{DistanceVector, Graph, NodeId};
pub use scalar::Scalar;

pub type CentralityScores = centrality::CentralityScores<f64>;
pub type CentralityParams = centrality::CentralityParams<f64>;
pub type GammaParams = distfit::GammaParams<f64>;
pub type ReferenceValues = metrics::ReferenceValues<f64>;
pub type SmallWorldness = metrics::SmallWorldness<f64>;
pub type StructuralMetrics = metrics::StructuralMetrics<f64>;
pub type PathLength = metrics::PathLength<f64>;

pub type CentralityScores32 = centrality::CentralityScores<f32>;
pub type GammaParams32 = distfit::GammaParams<f32>;
