//! # qbound-core
//!
//! Numerics for classical information carried by quantum ensembles and read out
//! by generalized measurements.
//!
//! - [`matrixcore`]: dense complex matrices, Hermitian eigensystems, PSD square
//!   roots, polar decomposition, support projectors.
//! - [`qobjects`]: density operators, ensembles, Kraus measurements, and the
//!   outcome tables produced by applying a measurement to an ensemble.
//! - [`infomeasures`]: Shannon/von Neumann entropies, subentropy, mutual
//!   information, the purification gain, Holevo's χ.
//! - [`bounds`]: right-hand sides of the Holevo, dual-Holevo,
//!   Schumacher–Westmoreland–Wootters and subentropy bounds, plus the
//!   support-proportionality condition for full information extraction.
//! - [`haarmc`]: Haar sampling and Monte Carlo over the uniform pure-state
//!   ensemble and its distortions.
//! - [`accinfo`]: derivative-free lower bounds on accessible information.
//!
//! All information quantities are in nats.

#![forbid(unsafe_code)]

pub mod accinfo;
pub mod bounds;
mod error;
pub mod haarmc;
pub mod infomeasures;
pub mod matrixcore;
pub mod qobjects;
pub mod random;

pub use error::{Error, Result};
pub use infomeasures::Nats;
pub use matrixcore::{ComplexMatrix, HermitianEigensystem, C64};
pub use qobjects::{DensityOperator, Ensemble, Measurement, OutcomeAnalysis};
