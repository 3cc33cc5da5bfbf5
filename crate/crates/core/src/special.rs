//! Special functions: overflow-safe log binomials and Gaussian tail integrals.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Below this `min(k, n-k)` the log binomial is a direct sum of logs.
const DIRECT_SUM_CUTOFF: u64 = 64;

/// `ln C(n, k)`.
///
/// Both regimes avoid the catastrophic cancellation of `lnΓ(n+1) - lnΓ(k+1) - lnΓ(n-k+1)`
/// at large `n`: small `min(k, n-k)` sums `ln((n-m+j)/j)`, larger ones use the Stirling
/// split of the three log-gammas into an entropy term (all positive) and the
/// Stirling remainders.
pub fn log_binomial<T: Real>(n: u64, k: u64) -> Result<T> {
    if k > n {
        return Err(Error::Domain(format!("C({n}, {k}) with k > n")));
    }
    let m = k.min(n - k);
    if m == 0 {
        return Ok(T::zero());
    }
    if m <= DIRECT_SUM_CUTOFF {
        let base = T::from_count(n - m);
        let mut acc = T::zero();
        for j in 1..=m {
            let jf = T::from_count(j);
            acc = acc + (base / jf).ln_1p();
        }
        return Ok(acc);
    }
    let nf = T::from_count(n);
    let kf = T::from_count(m);
    let rest = T::from_count(n - m);
    let frac = kf / nf;
    let entropy = kf * (nf / kf).ln() - rest * (-frac).ln_1p();
    let half = T::lit(0.5);
    let prefactor = half * (nf / (T::lit(2.0) * T::PI() * kf * rest)).ln();
    Ok(entropy + prefactor + stirling_remainder(nf) - stirling_remainder(kf) - stirling_remainder(rest))
}

/// `ln C(n - s, r - s)`, or `None` when `r < s` (the coefficient is absent, i.e. zero).
pub fn log_binomial_shifted<T: Real>(n: u64, r: u64, shift: u64) -> Option<T> {
    if r < shift || n < r {
        return None;
    }
    log_binomial(n - shift, r - shift).ok()
}

/// `lnΓ(x+1) - [(x + 1/2) ln x - x + ln(2π)/2]` for `x > 64`.
fn stirling_remainder<T: Real>(x: T) -> T {
    let inv = x.recip();
    let inv2 = inv * inv;
    // 1/12x - 1/360x^3 + 1/1260x^5 - 1/1680x^7 + 1/1188x^9
    let series = T::lit(1.0 / 1188.0);
    let series = T::lit(-1.0 / 1680.0) + inv2 * series;
    let series = T::lit(1.0 / 1260.0) + inv2 * series;
    let series = T::lit(-1.0 / 360.0) + inv2 * series;
    let series = T::lit(1.0 / 12.0) + inv2 * series;
    series * inv
}

/// Standard normal density.
pub fn normal_pdf<T: Real>(x: T) -> T {
    (-(x * x) / T::lit(2.0)).exp() / (T::lit(2.0) * T::PI()).sqrt()
}

/// Standard normal upper tail `Q(x) = P(N(0,1) > x)`.
pub fn normal_sf<T: Real>(x: T) -> T {
    T::lit(0.5 * libm::erfc(x.to_f64_lossy() / std::f64::consts::SQRT_2))
}

/// `E[Y² 1(|Y| > t)]` for the centered two-point variable `Y ∈ {-p, 1-p}` of a
/// Bernoulli(p) indicator.
pub fn bernoulli_tail_second_moment<T: Real>(p: T, t: T) -> T {
    let q = T::one() - p;
    let mut acc = T::zero();
    if q > t {
        acc = acc + p * q * q;
    }
    if p > t {
        acc = acc + q * p * p;
    }
    acc
}

/// `E[|Y|³ 1(|Y| ≤ t)]` for the same centered Bernoulli variable.
pub fn bernoulli_truncated_third_moment<T: Real>(p: T, t: T) -> T {
    let q = T::one() - p;
    let mut acc = T::zero();
    if q <= t {
        acc = acc + p * q * q * q;
    }
    if p <= t {
        acc = acc + q * p * p * p;
    }
    acc
}

/// `E[Z² 1(|Z| > t)]` for `Z ~ N(0, σ²)`: `σ² · 2[uφ(u) + Q(u)]`, `u = t/σ`.
pub fn gaussian_tail_second_moment<T: Real>(sigma: T, t: T) -> T {
    if sigma <= T::zero() {
        return T::zero();
    }
    let u = t / sigma;
    sigma * sigma * T::lit(2.0) * (u * normal_pdf(u) + normal_sf(u))
}

/// `E[|Z|³ 1(|Z| ≤ t)]` for `Z ~ N(0, σ²)`: `σ³ · 2[2φ(0) - (u² + 2)φ(u)]`, `u = t/σ`.
pub fn gaussian_truncated_third_moment<T: Real>(sigma: T, t: T) -> T {
    if sigma <= T::zero() || t <= T::zero() {
        return T::zero();
    }
    let u = t / sigma;
    let two = T::lit(2.0);
    let inner = two * normal_pdf(T::zero()) - (u * u + two) * normal_pdf(u);
    (sigma * sigma * sigma * two * inner).max(T::zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use hyperspectra_testkit::exact;

    #[test]
    fn small_binomials() {
        assert!((log_binomial::<f64>(5, 2).unwrap() - 10f64.ln()).abs() < 1e-15);
        assert_eq!(log_binomial::<f64>(7, 0).unwrap(), 0.0);
        assert!((log_binomial::<f64>(4, 3).unwrap() - 4f64.ln()).abs() < 1e-15);
        assert_eq!(log_binomial::<f64>(9, 9).unwrap(), 0.0);
    }

    #[test]
    fn rejects_k_above_n() {
        assert!(matches!(log_binomial::<f64>(3, 4), Err(Error::Domain(_))));
    }

    #[test]
    fn absent_terms() {
        assert!(log_binomial_shifted::<f64>(10, 2, 3).is_none());
        assert_eq!(log_binomial_shifted::<f64>(10, 3, 3), Some(0.0));
        let v: f64 = log_binomial_shifted(6, 4, 2).unwrap();
        assert!((v - 6f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn matches_big_integer_oracle_in_both_regimes() {
        let cases: &[(u64, u64)] = &[
            (100, 3),
            (2000, 600),
            (1_000_000, 1),
            (1_000_000, 64),
            (1_000_000, 65),
            (1_000_000, 500_000),
            (1_000_000, 999_990),
            (130, 65),
            (12_345, 2_000),
        ];
        for &(n, k) in cases {
            let got: f64 = log_binomial(n, k).unwrap();
            let want = exact::ln_binomial(n, k);
            let rel = ((got - want) / want).abs();
            assert!(rel <= 1e-12, "C({n},{k}): got {got}, want {want}, rel {rel:e}");
        }
    }

    #[test]
    fn gaussian_tail_examples() {
        assert!((gaussian_tail_second_moment(1.0_f64, 0.0) - 1.0).abs() < 1e-15);
        assert!((gaussian_tail_second_moment(1.0_f64, 1.0) - 0.801_251_7).abs() < 1e-6);
        assert_eq!(gaussian_tail_second_moment(1.0_f64, 41.0), 0.0);
        // full third absolute moment is 2·sqrt(2/π)
        let full = gaussian_truncated_third_moment(1.0_f64, 60.0);
        assert!((full - 2.0 * (2.0 / std::f64::consts::PI).sqrt()).abs() < 1e-14);
    }

    #[test]
    fn bernoulli_tail_examples() {
        assert!((bernoulli_tail_second_moment(0.5_f64, 0.4) - 0.25).abs() < 1e-15);
        assert!((bernoulli_tail_second_moment(0.1_f64, 0.5) - 0.081).abs() < 1e-15);
        assert_eq!(bernoulli_tail_second_moment(0.3_f64, 0.7), 0.0);
        let third = bernoulli_truncated_third_moment(0.1_f64, 1.0);
        assert!((third - (0.1 * 0.729 + 0.9 * 0.001)).abs() < 1e-15);
    }
}
