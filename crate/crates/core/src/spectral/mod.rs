//! Spectra of symmetric matrices and the measures built from them.

mod eigen;
mod measure;
mod semicircle;

pub use eigen::{eigenvalues, residual_norm, symmetric_eigen, SymmetricEigen, SYMMETRY_TOL};
pub use measure::{
    average_esd, empirical_stieltjes, esd, ks_distance, pool, EmpiricalMeasure, Moment, DEFAULT_BINS, MIN_BINS,
};
pub use semicircle::{semicircle_cdf, semicircle_pdf, semicircle_stieltjes, SemicircleLaw};

use crate::scalar::Real;

/// A distribution function on the line.
pub trait Cdf<T: Real> {
    fn cdf(&self, x: T) -> T;

    /// Left limit `F(x-)`; equal to `cdf` for continuous laws.
    fn cdf_left(&self, x: T) -> T {
        self.cdf(x)
    }

    /// Points where the distribution function may jump or change slope.
    fn breakpoints(&self) -> Vec<T> {
        Vec::new()
    }
}
