//! Higher Criticism detection of rare and weak genetic signals in SNP-sets.
//!
//! The crate covers marginal association statistics ([`stats`]), set-level
//! detectors ([`detectors`]), the detection-boundary calculus
//! ([`boundary`]), seeded genotype and trait simulation ([`simgen`]) and
//! permutation-calibrated power, FDR and ranking experiments ([`bench`]).

// `!(x > 0.0)` style guards are deliberate: they also reject NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bench;
pub mod boundary;
pub mod detectors;
pub mod error;
pub mod linalg;
pub mod normal;
pub mod seed;
pub mod simgen;
pub mod stats;

pub use error::{Error, ErrorClass, Result};
