//! Direct sampler for the Gaussianized ensemble.
//!
//! Off-diagonal entries are `X_uv = θ W_uv + α (g_u + g_v) + β g`, scaled by
//! `1/sqrt(n)`, which has unit variance, covariance `γ` between entries sharing a
//! vertex and `ρ` between disjoint entries.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;
use crate::scalar::Real;
use crate::theory::CovarianceProfile;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurrogateCoefficients<T> {
    pub theta: T,
    pub alpha: T,
    pub beta: T,
}

impl<T: Real> SurrogateCoefficients<T> {
    /// `θ² + 2α² + β²`, which is 1 for coefficients built from a profile.
    pub fn entry_variance(&self) -> T {
        self.theta * self.theta + T::lit(2.0) * self.alpha * self.alpha + self.beta * self.beta
    }
}

pub fn surrogate_coefficients<T: Real>(profile: &CovarianceProfile<T>) -> Result<SurrogateCoefficients<T>> {
    let CovarianceProfile { rho, gamma, theta_sq } = *profile;
    let slack = T::lit(1e-12);
    if !(rho >= -slack && gamma >= rho - slack && theta_sq >= -slack) {
        return Err(Error::Domain(format!(
            "covariance profile needs 0 <= rho <= gamma and theta^2 >= 0 (rho = {rho}, gamma = {gamma}, theta^2 = {theta_sq})"
        )));
    }
    Ok(SurrogateCoefficients {
        theta: theta_sq.max(T::zero()).sqrt(),
        alpha: (gamma - rho).max(T::zero()).sqrt(),
        beta: rho.max(T::zero()).sqrt(),
    })
}

/// One draw of the surrogate matrix, deterministic in `seed`.
pub fn sample_surrogate<T: Real>(n: usize, coeffs: &SurrogateCoefficients<T>, seed: u64) -> Result<DenseMatrix<T>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sample_surrogate_with_rng(n, coeffs, &mut rng)
}

pub fn sample_surrogate_with_rng<T: Real, R: Rng + ?Sized>(
    n: usize,
    coeffs: &SurrogateCoefficients<T>,
    rng: &mut R,
) -> Result<DenseMatrix<T>> {
    if n < 2 {
        return Err(Error::InvalidParams(format!("surrogate needs n >= 2, got {n}")));
    }
    let mut normal = || T::lit(rng.sample::<f64, _>(StandardNormal));
    let global = coeffs.beta * normal();
    let vertex: Vec<T> = (0..n).map(|_| coeffs.alpha * normal()).collect();
    let scale = T::from_count(n as u64).sqrt().recip();
    let mut h = DenseMatrix::zeros(n);
    for u in 0..n {
        for v in u + 1..n {
            let x = coeffs.theta * normal() + vertex[u] + vertex[v] + global;
            h.set_sym(u, v, x * scale);
        }
    }
    Ok(h)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn profile(rho: f64, gamma: f64) -> CovarianceProfile<f64> {
        CovarianceProfile { rho, gamma, theta_sq: 1.0 - 2.0 * gamma + rho }
    }

    #[test]
    fn graph_case_is_pure_wigner() {
        let c = surrogate_coefficients(&profile(0.0, 0.0)).unwrap();
        assert_eq!((c.theta, c.alpha, c.beta), (1.0, 0.0, 0.0));
    }

    #[test]
    fn r4_n6_profile() {
        let c = surrogate_coefficients(&profile(1.0 / 6.0, 0.5)).unwrap();
        assert!((c.theta - (1.0_f64 / 6.0).sqrt()).abs() < 1e-15);
        assert!((c.alpha - (1.0_f64 / 3.0).sqrt()).abs() < 1e-15);
        assert!((c.beta - (1.0_f64 / 6.0).sqrt()).abs() < 1e-15);
        assert!((c.entry_variance() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn invalid_profiles() {
        assert!(surrogate_coefficients(&profile(0.3, 0.2)).is_err());
        assert!(surrogate_coefficients(&CovarianceProfile { rho: 0.0, gamma: 0.6, theta_sq: -0.2 }).is_err());
    }

    #[test]
    fn structure_and_determinism() {
        let c = surrogate_coefficients(&profile(0.1, 0.3)).unwrap();
        let a = sample_surrogate(30, &c, 8).unwrap();
        let b = sample_surrogate(30, &c, 8).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, sample_surrogate(30, &c, 9).unwrap());
        assert_eq!(a.trace(), 0.0);
        assert_eq!(a.asymmetry().0, 0.0);
        assert!(sample_surrogate(1, &c, 0).is_err());
    }

    #[test]
    fn unit_entry_variance_for_wigner() {
        let c = surrogate_coefficients(&profile(0.0, 0.0)).unwrap();
        let n = 2000;
        let h = sample_surrogate(n, &c, 1).unwrap();
        let mut xs = Vec::with_capacity(n * (n - 1) / 2);
        for u in 0..n {
            xs.extend_from_slice(&h.row(u)[u + 1..]);
        }
        let m = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / m;
        let sq: Vec<f64> = xs.iter().map(|x| (x - mean).powi(2)).collect();
        let var = sq.iter().sum::<f64>() / (m - 1.0);
        let se = (sq.iter().map(|s| (s - var).powi(2)).sum::<f64>() / (m - 1.0)).sqrt() / m.sqrt();
        assert!((var - 1.0 / n as f64).abs() < 3.0 * se, "var {var} vs {} (se {se})", 1.0 / n as f64);
    }

    #[test]
    fn f32_sampler() {
        let c = SurrogateCoefficients { theta: 1.0_f32, alpha: 0.0, beta: 0.0 };
        let h = sample_surrogate(10, &c, 2).unwrap();
        assert_eq!(h.trace(), 0.0);
    }
}
