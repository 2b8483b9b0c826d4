//! Activeness quotient of a distributed component library.
//!
//! The quotient rewards a library that can find a component quickly
//! (search-time term) and penalizes slow delivery (access time) and
//! fragmentation into many sublibraries:
//!
//! ```text
//! dcaq = (available · T_s[ns]) / (T[s] · n_s)
//! ```
//!
//! [`metric::evaluate`] runs the whole pipeline on a [`model::Scenario`];
//! [`simulator`] holds the empirical oracle that cross-checks the analytic
//! pieces, and [`validation`] drives it.
//!
//! ```
//! use dcaq::document::load;
//! use dcaq::{evaluate, ClassificationThresholds};
//!
//! let loaded = load("illustration1")?;
//! let result = evaluate(&loaded.scenario, &ClassificationThresholds::default(), None)?;
//! assert!((result.access_time_ns() - 83230.0).abs() < 1e-6);
//! assert_eq!(result.classification.to_string(), "good organizedness, high responsiveness");
//! # Ok::<(), Box<dyn std::error::Error>>(())
//! ```

pub mod access_time;
pub mod cli;
pub mod document;
pub mod error;
pub mod metric;
pub mod model;
pub mod organizedness;
pub mod report;
pub mod simulator;
pub mod validation;

pub use error::{Error, Result};
pub use metric::{evaluate, ClassificationThresholds, DcaqResult};
pub use model::Scenario;
