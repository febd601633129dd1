//! Enriched fixed-point toolkit.
//!
//! Finite-dimensional machinery for averaged-map (Krasnoselskii/Schaefer)
//! iteration, Jungck-Schaefer iteration for commuting pairs, sampled
//! certificates for enriched Hardy-Rogers contractions and their C-class
//! generalizations, and validators for C-class functions, altering distances
//! and monotone triples.
//!
//! The crate is `no_std` and only needs `alloc`. File formats and the CLI
//! live in the companion `fixpt` crate.
//!
//! ```
//! use fixpt_core::problems::problem_by_name;
//! use fixpt_core::solver::{run_schaefer, Scheme, SolverConfig, Status};
//!
//! let reflection = problem_by_name("reflection").unwrap();
//! let cfg = SolverConfig::new(Scheme::Schaefer, reflection.default_start.clone())
//!     .with_delta(1.0)
//!     .unwrap();
//! let trace = run_schaefer(&reflection.f, &cfg).unwrap();
//! assert!(matches!(trace.status, Status::Converged(_)));
//! ```

#![no_std]

extern crate alloc;

pub mod cclass;
pub mod contraction;
mod error;
pub mod linalg;
pub mod problems;
pub mod solver;
pub mod space;

pub use error::{Error, Result};
pub use space::{AveragedMap, Mapping, NormKind, Point};
