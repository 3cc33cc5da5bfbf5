//! Spectral analysis of adjacency matrices of non-uniform random hypergraphs.
//!
//! The library is generic over the scalar type through [`Real`]; the aliases at the
//! crate root fix it to `f64`.

// Negated comparisons reject NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod gaussian;
pub mod hypergraph;
pub mod matrix;
pub mod oracle;
pub mod scalar;
pub mod special;
pub mod spectral;
pub mod theory;

pub use error::{Error, Result};
pub use gaussian::{sample_surrogate, sample_surrogate_with_rng, surrogate_coefficients};
pub use hypergraph::{
    adjacency, center_scale, degree_count, sample_hypergraph, sample_hypergraph_with_rng, CountLaw, EdgeClass,
    Hypergraph, SamplerBudget,
};
pub use oracle::{exact_covariances, exact_eesd_moments};
pub use scalar::Real;
pub use spectral::{
    average_esd, eigenvalues, empirical_stieltjes, esd, ks_distance, pool, symmetric_eigen, Cdf,
};
pub use theory::{
    chatterjee_bound, classify_regime_k2, covariance_profile, derive_stats, entry_covariances, limit_variance,
    nonsparsity_ratio, pastur_lhs_bernoulli, pastur_lhs_gaussian, plugin_semicircle_variance, Regime, SizeClass,
};

pub type ModelParams = theory::ModelParams<f64>;
pub type DerivedStats = theory::DerivedStats<f64>;
pub type CovarianceProfile = theory::CovarianceProfile<f64>;
pub type EntryCovariances = theory::EntryCovariances<f64>;
pub type NonsparsityRatio = theory::NonsparsityRatio<f64>;
pub type RegimeClassification = theory::RegimeClassification<f64>;
pub type TailDiagnostic = theory::TailDiagnostic<f64>;
pub type ChatterjeeBound = theory::ChatterjeeBound<f64>;
pub type SurrogateCoefficients = gaussian::SurrogateCoefficients<f64>;
pub type ExactCovariances = oracle::ExactCovariances<f64>;
pub type Matrix = matrix::DenseMatrix<f64>;
pub type AdjacencyMatrix = matrix::DenseMatrix<u32>;
pub type EmpiricalMeasure = spectral::EmpiricalMeasure<f64>;
pub type SemicircleLaw = spectral::SemicircleLaw<f64>;
pub type SymmetricEigen = spectral::SymmetricEigen<f64>;
pub type Complex = num_complex::Complex<f64>;

/// Independent stream `stream` of the ChaCha8 generator seeded by `seed`; used for
/// per-trial randomness that does not depend on scheduling.
pub fn stream_rng(seed: u64, stream: u64) -> rand_chacha::ChaCha8Rng {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
