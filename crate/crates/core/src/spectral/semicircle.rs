use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::spectral::Cdf;

/// Semicircle law with variance `s²`, supported on `[-2s, 2s]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SemicircleLaw<T> {
    s_sq: T,
}

impl<T: Real> SemicircleLaw<T> {
    pub fn new(s_sq: T) -> Result<Self> {
        if !(s_sq > T::zero() && s_sq.is_finite()) {
            return Err(Error::Domain(format!("semicircle variance {s_sq} must be positive")));
        }
        Ok(Self { s_sq })
    }

    pub fn variance(&self) -> T {
        self.s_sq
    }

    /// Edge of the support, `2s`.
    pub fn radius(&self) -> T {
        T::lit(2.0) * self.s_sq.sqrt()
    }

    pub fn pdf(&self, x: T) -> T {
        let r2 = T::lit(4.0) * self.s_sq - x * x;
        if r2 <= T::zero() {
            return T::zero();
        }
        r2.sqrt() / (T::lit(2.0) * T::PI() * self.s_sq)
    }

    /// `1/2 + x sqrt(4s² - x²) / (4πs²) + arcsin(x / 2s) / π` on the support.
    pub fn cdf(&self, x: T) -> T {
        let radius = self.radius();
        if x <= -radius {
            return T::zero();
        }
        if x >= radius {
            return T::one();
        }
        let root = (T::lit(4.0) * self.s_sq - x * x).max(T::zero()).sqrt();
        let v = T::lit(0.5) + x * root / (T::lit(4.0) * T::PI() * self.s_sq) + (x / radius).asin() / T::PI();
        v.max(T::zero()).min(T::one())
    }

    /// Stieltjes transform `∫ (x - z)⁻¹ dν(x)` for `Im z > 0`.
    pub fn stieltjes(&self, z: Complex<T>) -> Result<Complex<T>> {
        if !(z.im > T::zero()) {
            return Err(Error::Domain(format!("Im z = {} must be positive", z.im)));
        }
        let two_s2 = T::lit(2.0) * self.s_sq;
        let root = (z * z - Complex::new(T::lit(4.0) * self.s_sq, T::zero())).sqrt();
        let plus = (-z + root) / two_s2;
        let minus = (-z - root) / two_s2;
        // Exactly one branch maps the upper half-plane into itself.
        Ok(if plus.im > minus.im { plus } else { minus })
    }

    /// `k`-th moment: zero for odd `k`, `s^k · Catalan(k/2)` for even `k`.
    pub fn moment(&self, k: u32) -> T {
        if k % 2 == 1 {
            return T::zero();
        }
        let half = u64::from(k / 2);
        // Catalan(m) = C(2m, m) / (m + 1), accumulated as a float product.
        let mut catalan = T::one();
        for j in 1..=half {
            catalan = catalan * T::from_count(half + j) / T::from_count(j);
        }
        catalan = catalan / T::from_count(half + 1);
        catalan * self.s_sq.powi(half as i32)
    }

    /// Quantile function by bisection on the closed-form cdf.
    pub fn quantile(&self, u: T) -> T {
        let radius = self.radius();
        if u <= T::zero() {
            return -radius;
        }
        if u >= T::one() {
            return radius;
        }
        let (mut lo, mut hi) = (-radius, radius);
        for _ in 0..200 {
            let mid = T::lit(0.5) * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.cdf(mid) < u {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        T::lit(0.5) * (lo + hi)
    }
}

impl<T: Real> Cdf<T> for SemicircleLaw<T> {
    fn cdf(&self, x: T) -> T {
        SemicircleLaw::cdf(self, x)
    }
}

/// Density of `ν_{s²}` at `x`.
pub fn semicircle_pdf<T: Real>(s_sq: T, x: T) -> Result<T> {
    Ok(SemicircleLaw::new(s_sq)?.pdf(x))
}

pub fn semicircle_cdf<T: Real>(s_sq: T, x: T) -> Result<T> {
    Ok(SemicircleLaw::new(s_sq)?.cdf(x))
}

pub fn semicircle_stieltjes<T: Real>(s_sq: T, z: Complex<T>) -> Result<Complex<T>> {
    SemicircleLaw::new(s_sq)?.stieltjes(z)
}
