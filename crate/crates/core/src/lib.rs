//! Estimators of a finite-population median that borrow strength from an
//! auxiliary variable with a known population median.
//!
//! The crate is organised bottom-up:
//!
//! - [`population`]: data ingestion, finite-population medians, the
//!   concordance proportion matrix, densities at the medians and the
//!   [`MedianParams`] vector every analytic formula consumes.
//! - [`expansion`]: first-order error expansion in the relative errors
//!   `e0 = (M̂y - My)/My`, `e1 = (M̂x - Mx)/Mx` and generic bias/MSE evaluation.
//! - [`estimators`]: the estimator catalogue, point evaluation from sample
//!   statistics, expansion coefficients and named presets.
//! - [`mse`]: closed-form minimum MSEs, optimal weights and dominance checks.
//! - [`montecarlo`]: SRSWOR replication engine (parallel with the `parallel`
//!   feature, sequential otherwise).
//! - [`cli`]: command-line front end and table rendering.

pub mod cli;
pub mod error;
pub mod estimators;
pub mod expansion;
pub mod montecarlo;
pub mod mse;
pub mod population;

pub use error::{Error, Result};
pub use estimators::{EstimatorSpec, Family, SampleStats};
pub use expansion::{ErrorMoments, ExpansionCoeffs};
pub use montecarlo::{SimulationConfig, SimulationReport, SyntheticSpec, WeightPolicy};
pub use population::{DensityMethod, MedianParams, PopulationFrame, ProportionMatrix};
