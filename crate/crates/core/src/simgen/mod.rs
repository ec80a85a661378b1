//! Seeded simulation of correlated genotypes, signal patterns and traits.

pub mod genotype;
pub mod latent;
pub mod ld;
pub mod signal;
pub mod traits;

pub use genotype::{latent_matrix, simulate_genotypes, GenotypeSampler, LatentModel};
pub use latent::{bvn_cdf, solve_latent_correlation};
pub use ld::{build_ld, LdSpec, SignPattern, STUDY_DESIGNS};
pub use signal::{draw_signal_config, CoefScheme, SignalConfig};
pub use traits::{simulate_case_control, simulate_case_control_with, simulate_quantitative, DEFAULT_BETA0};
