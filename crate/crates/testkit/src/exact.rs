//! Exact arithmetic: big-integer binomials and rational evaluation of the closed forms.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    range_product(n - k + 1, n + 1) / range_product(1, k + 1)
}

/// `lo · (lo+1) ⋯ (hi-1)` by binary splitting.
fn range_product(lo: u64, hi: u64) -> BigUint {
    if hi <= lo {
        return BigUint::one();
    }
    if hi - lo <= 16 {
        return (lo..hi).fold(BigUint::one(), |acc, x| acc * x);
    }
    let mid = lo + (hi - lo) / 2;
    range_product(lo, mid) * range_product(mid, hi)
}

/// Natural log of a positive big integer, accurate to a few ulps.
pub fn ln_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().unwrap().ln();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_f64().unwrap();
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

pub fn ln_binomial(n: u64, k: u64) -> f64 {
    ln_big(&binomial(n, k))
}

/// `C(n, k)` as a rational, zero when `k < 0` or `k > n`.
pub fn binom_q(n: i64, k: i64) -> BigRational {
    if k < 0 || n < 0 || k > n {
        return BigRational::zero();
    }
    BigRational::from_integer(BigInt::from(binomial(n as u64, k as u64)))
}

pub fn q(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn to_f64(x: &BigRational) -> f64 {
    // Scale to keep both parts representable.
    let n = x.numer().to_f64().unwrap_or(f64::NAN);
    let d = x.denom().to_f64().unwrap_or(f64::NAN);
    if n.is_finite() && d.is_finite() && d != 0.0 {
        return n / d;
    }
    let (ns, nmag) = (x.numer().sign(), x.numer().magnitude());
    let lnv = ln_big(nmag) - ln_big(x.denom().magnitude());
    let v = lnv.exp();
    if ns == num_bigint::Sign::Minus {
        -v
    } else {
        v
    }
}

/// Every closed-form scalar of the model, evaluated exactly.
#[derive(Debug, Clone)]
pub struct RationalStats {
    pub mu: BigRational,
    pub sigma_sq: BigRational,
    pub b: Vec<BigRational>,
    pub w: Vec<BigRational>,
    pub xi: BigRational,
    pub d: Vec<BigRational>,
    pub gamma: BigRational,
    pub rho: BigRational,
    /// Unnormalized covariance of two entries sharing one vertex.
    pub cov_share1: BigRational,
    /// Unnormalized covariance of two vertex-disjoint entries.
    pub cov_disjoint: BigRational,
}

/// `classes` are `(r_i, p_i)` with `p_i` rational.
pub fn rational_stats(n: i64, classes: &[(i64, BigRational)]) -> RationalStats {
    let one = BigRational::one();
    let mut mu = BigRational::zero();
    let mut sigma_sq = BigRational::zero();
    let mut b = Vec::new();
    let mut d = Vec::new();
    let mut c3 = BigRational::zero();
    let mut c4 = BigRational::zero();
    for (r, p) in classes {
        let var = p * (&one - p);
        mu += binom_q(n - 2, r - 2) * p;
        let bi = binom_q(n - 2, r - 2) * &var;
        sigma_sq += &bi;
        b.push(bi);
        d.push(binom_q(n - 1, r - 1) * p);
        c3 += binom_q(n - 3, r - 3) * &var;
        c4 += binom_q(n - 4, r - 4) * &var;
    }
    let w: Vec<BigRational> = b.iter().map(|bi| bi / &sigma_sq).collect();
    let xi = classes
        .iter()
        .zip(&w)
        .map(|((r, _), wi)| wi / BigRational::from_integer(BigInt::from(r * r)))
        .fold(BigRational::zero(), |a, x| a + x);
    let gamma = &c3 / &sigma_sq;
    let rho = &c4 / &sigma_sq;
    RationalStats { mu, sigma_sq, b, w, xi, d, gamma, rho, cov_share1: c3, cov_disjoint: c4 }
}
