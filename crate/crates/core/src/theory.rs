//! Closed-form quantities of the `(n, r, p)` hypergraph model.
//!
//! Everything here is a pure function of the parameter tuple. Binomial coefficients
//! are handled in log space throughout, so hyperedge sizes that grow with `n` (where
//! `C(n, r)` overflows any float) are fine; linear values are exposed where they are
//! representable.
//!
//! The asymptotic class weights `w_i` are replaced by their finite-`n` values
//! `B_i / Σ B_j` with `B_i = C(n-2, r_i-2) p_i (1-p_i)`; the same surrogate is used
//! inside `ξ`, `K_n` and the non-sparsity ratio.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{log_sum_exp, Real};
use crate::special::{
    bernoulli_tail_second_moment, bernoulli_truncated_third_moment, gaussian_tail_second_moment,
    gaussian_truncated_third_moment, log_binomial, log_binomial_shifted,
};

/// One hyperedge size class: every `size`-subset is present independently with
/// probability `prob`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SizeClass<T> {
    pub size: u64,
    pub prob: T,
}

/// The tuple `(n, r_1..r_k, p_1..p_k)`.
///
/// Sizes must be non-decreasing; repeated sizes with different probabilities are
/// allowed (superposition of independent layers). A tuple whose probabilities are
/// all 0 or 1 is accepted here, since it is still a valid sampling target, but every
/// quantity that divides by the entry variance rejects it with [`Error::Degenerate`].
#[derive(Debug, Clone, PartialEq)]
pub struct ModelParams<T> {
    n: u64,
    classes: Vec<SizeClass<T>>,
}

impl<T: Real> ModelParams<T> {
    pub fn new(n: u64, classes: Vec<SizeClass<T>>) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParams(format!("n = {n} must be at least 2")));
        }
        if classes.is_empty() {
            return Err(Error::InvalidParams("at least one size class is required".into()));
        }
        for (i, c) in classes.iter().enumerate() {
            if c.size < 2 || c.size > n {
                return Err(Error::InvalidParams(format!(
                    "class {i}: size {} outside [2, {n}]",
                    c.size
                )));
            }
            if !(c.prob >= T::zero() && c.prob <= T::one()) {
                return Err(Error::InvalidParams(format!(
                    "class {i}: probability {} outside [0, 1]",
                    c.prob
                )));
            }
        }
        if classes.windows(2).any(|w| w[1].size < w[0].size) {
            return Err(Error::InvalidParams("class sizes must be non-decreasing".into()));
        }
        Ok(Self { n, classes })
    }

    /// Convenience constructor from parallel size/probability slices.
    pub fn from_slices(n: u64, sizes: &[u64], probs: &[T]) -> Result<Self> {
        if sizes.len() != probs.len() {
            return Err(Error::InvalidParams(format!(
                "{} sizes but {} probabilities",
                sizes.len(),
                probs.len()
            )));
        }
        let classes = sizes
            .iter()
            .zip(probs)
            .map(|(&size, &prob)| SizeClass { size, prob })
            .collect();
        Self::new(n, classes)
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn classes(&self) -> &[SizeClass<T>] {
        &self.classes
    }

    pub fn k(&self) -> usize {
        self.classes.len()
    }

    pub fn r_max(&self) -> u64 {
        self.classes.iter().map(|c| c.size).max().unwrap_or(2)
    }

    /// True when every class is deterministic (`p ∈ {0, 1}`).
    pub fn is_degenerate(&self) -> bool {
        self.classes.iter().all(|c| c.prob == T::zero() || c.prob == T::one())
    }

    /// `ln Σ_i C(n, r_i) p_i`, the log expected number of hyperedges.
    pub fn log_expected_edges(&self) -> T {
        log_sum_exp(self.classes.iter().map(|c| {
            log_binomial::<T>(self.n, c.size).expect("validated size") + c.prob.ln()
        }))
    }
}

/// Scalars derived from the parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct DerivedStats<T> {
    /// `p_i (1 - p_i)` per class.
    pub sigma_i_sq: Vec<T>,
    /// `ln B_i`, `B_i = C(n-2, r_i-2) σ_i²`; `-inf` for deterministic classes.
    pub log_b: Vec<T>,
    pub log_mu: T,
    /// Entry mean, `None` if it overflows the scalar type.
    pub mu: Option<T>,
    pub log_sigma_sq: T,
    /// Entry variance, `None` if it overflows the scalar type.
    pub sigma_sq: Option<T>,
    /// Finite-`n` class weights `B_i / Σ B_j`.
    pub w_fin: Vec<T>,
    /// `Σ w_i / r_i²`.
    pub xi: T,
    /// `ln d_i`, `d_i = C(n-1, r_i-1) p_i`.
    pub log_d: Vec<T>,
    /// `ln K_n`, `K_n = sqrt(n σ²) / (r_max⁶ ξ)`.
    pub log_k_n: T,
    pub log_nonsparsity_ratio: T,
    pub r_max: u64,
    /// `ln C(n, r_i)`; the number of hyperedge slots is `M = Σ C(n, r_i)`.
    pub log_class_count: Vec<T>,
}

impl<T: Real> DerivedStats<T> {
    pub fn k_n(&self) -> T {
        self.log_k_n.exp()
    }

    /// `ln M`.
    pub fn log_slot_count(&self) -> T {
        log_sum_exp(self.log_class_count.iter().copied())
    }

    pub fn d(&self) -> Vec<T> {
        self.log_d.iter().map(|x| x.exp()).collect()
    }
}

fn finite<T: Real>(x: T) -> Option<T> {
    x.is_finite().then_some(x)
}

fn ln_of<T: Real>(k: u64) -> T {
    T::from_count(k).ln()
}

pub fn derive_stats<T: Real>(params: &ModelParams<T>) -> Result<DerivedStats<T>> {
    if params.is_degenerate() {
        return Err(Error::Degenerate);
    }
    let n = params.n();
    let cls = params.classes();
    let sigma_i_sq: Vec<T> = cls.iter().map(|c| c.prob * (T::one() - c.prob)).collect();
    let log_c2: Vec<T> = cls
        .iter()
        .map(|c| log_binomial_shifted(n, c.size, 2).expect("size >= 2"))
        .collect();
    let log_b: Vec<T> = log_c2.iter().zip(&sigma_i_sq).map(|(&l, &s)| l + s.ln()).collect();
    let log_mu = log_sum_exp(log_c2.iter().zip(cls).map(|(&l, c)| l + c.prob.ln()));
    let log_sigma_sq = log_sum_exp(log_b.iter().copied());
    let w_fin: Vec<T> = log_b.iter().map(|&lb| (lb - log_sigma_sq).exp()).collect();
    let xi = w_fin
        .iter()
        .zip(cls)
        .map(|(&w, c)| w / T::from_count(c.size * c.size))
        .sum::<T>();
    let log_d: Vec<T> = cls
        .iter()
        .map(|c| log_binomial_shifted::<T>(n, c.size, 1).expect("size >= 1") + c.prob.ln())
        .collect();
    let r_max = params.r_max();
    let half = T::lit(0.5);
    let log_k_n = half * (ln_of::<T>(n) + log_sigma_sq) - T::lit(6.0) * ln_of::<T>(r_max) - xi.ln();
    let log_class_count = cls
        .iter()
        .map(|c| log_binomial::<T>(n, c.size).expect("size <= n"))
        .collect();
    let log_nonsparsity_ratio = nonsparsity_from_parts(cls, &log_d, xi, r_max);
    Ok(DerivedStats {
        sigma_i_sq,
        log_b,
        log_mu,
        mu: finite(log_mu.exp()),
        log_sigma_sq,
        sigma_sq: finite(log_sigma_sq.exp()),
        w_fin,
        xi,
        log_d,
        log_k_n,
        log_nonsparsity_ratio,
        r_max,
        log_class_count,
    })
}

/// `ln(a_n / (b_n c_n))` with `a_n = (Σ r_i d_i)²`, `b_n = r_max¹⁶ ξ²`, `c_n = Σ d_i / r_i`.
fn nonsparsity_from_parts<T: Real>(cls: &[SizeClass<T>], log_d: &[T], xi: T, r_max: u64) -> T {
    let log_a = T::lit(2.0) * log_sum_exp(cls.iter().zip(log_d).map(|(c, &ld)| ln_of::<T>(c.size) + ld));
    let log_b = T::lit(16.0) * ln_of::<T>(r_max) + T::lit(2.0) * xi.ln();
    let log_c = log_sum_exp(cls.iter().zip(log_d).map(|(c, &ld)| ld - ln_of::<T>(c.size)));
    log_a - log_b - log_c
}

/// Log of the non-sparsity ratio; `degenerate` is set (and the value is `-inf`) when
/// every average degree vanishes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NonsparsityRatio<T> {
    pub log_ratio: T,
    pub degenerate: bool,
}

pub fn nonsparsity_ratio<T: Real>(params: &ModelParams<T>) -> Result<NonsparsityRatio<T>> {
    if params.classes().iter().all(|c| c.prob == T::zero()) {
        return Ok(NonsparsityRatio { log_ratio: T::neg_infinity(), degenerate: true });
    }
    let stats = derive_stats(params)?;
    Ok(NonsparsityRatio { log_ratio: stats.log_nonsparsity_ratio, degenerate: false })
}

/// Covariances of the normalized entries: `rho` for vertex-disjoint pairs, `gamma`
/// for pairs sharing one vertex, and `theta_sq = 1 - 2γ + ρ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CovarianceProfile<T> {
    pub rho: T,
    pub gamma: T,
    pub theta_sq: T,
}

pub fn covariance_profile<T: Real>(params: &ModelParams<T>) -> Result<CovarianceProfile<T>> {
    let stats = derive_stats(params)?;
    let n = params.n();
    // C(n-3, r-3) / C(n-2, r-2) = (r-2)/(n-2) and
    // C(n-4, r-4) / C(n-2, r-2) = (r-2)(r-3)/((n-2)(n-3)); absent binomials give 0.
    let mut gamma = T::zero();
    let mut rho = T::zero();
    for (c, &w) in params.classes().iter().zip(&stats.w_fin) {
        if c.size >= 3 {
            gamma = gamma + w * T::from_count(c.size - 2) / T::from_count(n - 2);
        }
        if c.size >= 4 {
            rho = rho
                + w * T::from_count(c.size - 2) * T::from_count(c.size - 3)
                    / (T::from_count(n - 2) * T::from_count(n - 3));
        }
    }
    let theta_sq = (T::one() - T::lit(2.0) * gamma + rho).max(T::zero());
    Ok(CovarianceProfile { rho, gamma, theta_sq })
}

/// Unnormalized covariances of adjacency entries.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntryCovariances<T> {
    /// `Cov(A_uv, A_uw)`: `Σ C(n-3, r_i-3) σ_i²`.
    pub share_one: T,
    /// `Cov(A_uv, A_xy)` with four distinct vertices: `Σ C(n-4, r_i-4) σ_i²`.
    pub disjoint: T,
}

pub fn entry_covariances<T: Real>(params: &ModelParams<T>) -> EntryCovariances<T> {
    let n = params.n();
    let term = |shift: u64| {
        params
            .classes()
            .iter()
            .filter_map(|c| {
                let s = c.prob * (T::one() - c.prob);
                log_binomial_shifted::<T>(n, c.size, shift).map(|l| l.exp() * s)
            })
            .sum::<T>()
    };
    EntryCovariances { share_one: term(3), disjoint: term(4) }
}

/// `s² = Σ w_i (1 - c_i)²`.
pub fn limit_variance<T: Real>(weights: &[T], c: &[T]) -> Result<T> {
    if weights.len() != c.len() || weights.is_empty() {
        return Err(Error::InvalidParams(format!(
            "{} weights and {} size ratios",
            weights.len(),
            c.len()
        )));
    }
    let total: T = weights.iter().copied().sum();
    if (total - T::one()).abs() > T::lit(1e-9) {
        return Err(Error::InvalidParams(format!("weights sum to {total}, not 1")));
    }
    for (&w, &ci) in weights.iter().zip(c) {
        if !(w >= T::zero() && w <= T::one()) {
            return Err(Error::InvalidParams(format!("weight {w} outside [0, 1]")));
        }
        if !(ci >= T::zero() && ci < T::one()) {
            return Err(Error::InvalidParams(format!("size ratio {ci} outside [0, 1)")));
        }
    }
    Ok(weights.iter().zip(c).map(|(&w, &ci)| w * (T::one() - ci) * (T::one() - ci)).sum())
}

/// Finite-`n` plug-in for the semicircle variance: `Σ w_fin,i (1 - r_i/n)²`.
pub fn plugin_semicircle_variance<T: Real>(params: &ModelParams<T>) -> Result<T> {
    let stats = derive_stats(params)?;
    let n = T::from_count(params.n());
    let c: Vec<T> = params.classes().iter().map(|cl| T::from_count(cl.size) / n).collect();
    // size == n would give c = 1; clamp just below so the plug-in stays defined.
    let c: Vec<T> = c.into_iter().map(|x| x.min(T::one() - T::epsilon())).collect();
    limit_variance(&stats.w_fin, &c)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    R1Dominant,
    Balanced,
    R2Dominant,
}

impl Regime {
    pub fn as_str(self) -> &'static str {
        match self {
            Regime::R1Dominant => "r1-dominant",
            Regime::Balanced => "balanced",
            Regime::R2Dominant => "r2-dominant",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegimeClassification<T> {
    pub regime: Regime,
    pub w_fin: [T; 2],
    pub delta: T,
}

pub const DEFAULT_REGIME_DELTA: f64 = 0.01;

/// Two-class dominance regime from the finite-`n` weight of the first class.
pub fn classify_regime_k2<T: Real>(params: &ModelParams<T>, delta: T) -> Result<RegimeClassification<T>> {
    if params.k() != 2 {
        return Err(Error::UnsupportedArity { expected: 2, got: params.k() });
    }
    if !(delta > T::zero() && delta < T::lit(0.5)) {
        return Err(Error::Domain(format!("delta = {delta} outside (0, 0.5)")));
    }
    let stats = derive_stats(params)?;
    let w1 = stats.w_fin[0];
    let regime = if w1 > T::one() - delta {
        Regime::R1Dominant
    } else if w1 < delta {
        Regime::R2Dominant
    } else {
        Regime::Balanced
    };
    Ok(RegimeClassification { regime, w_fin: [w1, stats.w_fin[1]], delta })
}

/// Truncated-second-moment sums of the Pastur-type condition at threshold `εK_n`,
/// with the scale `n²σ²/r_max⁴` they are compared against. All sums are in log space.
#[derive(Debug, Clone, PartialEq)]
pub struct TailDiagnostic<T> {
    pub eps: T,
    /// `εK_n`.
    pub threshold: T,
    /// `ln(C(n, r_i) · E[Y_i² 1(|Y_i| > εK_n)])` per class.
    pub log_per_class: Vec<T>,
    pub log_total: T,
    pub log_rhs_scale: T,
    /// `ln(total / rhs_scale)`.
    pub log_ratio: T,
}

impl<T: Real> TailDiagnostic<T> {
    pub fn total(&self) -> T {
        self.log_total.exp()
    }

    pub fn ratio(&self) -> T {
        self.log_ratio.exp()
    }
}

fn tail_diagnostic<T: Real>(
    params: &ModelParams<T>,
    eps: T,
    per_variable: impl Fn(&SizeClass<T>, T) -> T,
) -> Result<TailDiagnostic<T>> {
    if !(eps > T::zero()) {
        return Err(Error::Domain(format!("eps = {eps} must be positive")));
    }
    let stats = derive_stats(params)?;
    let threshold = eps * stats.k_n();
    let log_per_class: Vec<T> = params
        .classes()
        .iter()
        .zip(&stats.log_class_count)
        .map(|(c, &lc)| lc + per_variable(c, threshold).ln())
        .collect();
    let log_total = log_sum_exp(log_per_class.iter().copied());
    let log_rhs_scale =
        T::lit(2.0) * ln_of::<T>(params.n()) + stats.log_sigma_sq - T::lit(4.0) * ln_of::<T>(stats.r_max);
    Ok(TailDiagnostic {
        eps,
        threshold,
        log_per_class,
        log_total,
        log_rhs_scale,
        log_ratio: log_total - log_rhs_scale,
    })
}

/// Left-hand side of the Pastur-type condition for the centered Bernoulli indicators.
pub fn pastur_lhs_bernoulli<T: Real>(params: &ModelParams<T>, eps: T) -> Result<TailDiagnostic<T>> {
    tail_diagnostic(params, eps, |c, t| bernoulli_tail_second_moment(c.prob, t))
}

/// Same, for the matched Gaussians `N(0, σ_i²)`.
pub fn pastur_lhs_gaussian<T: Real>(params: &ModelParams<T>, eps: T) -> Result<TailDiagnostic<T>> {
    tail_diagnostic(params, eps, |c, t| {
        gaussian_tail_second_moment((c.prob * (T::one() - c.prob)).sqrt(), t)
    })
}

/// Explicit upper bound on `|S_X(z) - S_Z(z)|` between the Stieltjes transforms of
/// the Bernoulli and Gaussianized ensembles, at truncation level `K = εK_n`.
/// Every quantity is carried in log space; linear accessors may overflow to `inf`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChatterjeeBound<T> {
    pub z: Complex<T>,
    pub eps: T,
    /// `K = εK_n`.
    pub truncation: T,
    pub log_lambda2: T,
    pub log_lambda3: T,
    /// `ln Σ_l E[X_l² 1(|X_l| > K)]`.
    pub log_tail_bernoulli: T,
    /// `ln Σ_l E[Z_l² 1(|Z_l| > K)]`.
    pub log_tail_gaussian: T,
    /// `ln Σ_l (E[|X_l|³ 1(|X_l| ≤ K)] + E[|Z_l|³ 1(|Z_l| ≤ K)])`.
    pub log_trunc3: T,
    /// `ln(K · Σ_l (E[X_l²] + E[Z_l²]))`, the second-moment majorant of `trunc3`.
    pub log_trunc3_majorant: T,
    /// `ln(2 λ₂ (tails) + λ₃/3 · trunc3)`.
    pub log_total: T,
}

impl<T: Real> ChatterjeeBound<T> {
    pub fn lambda2(&self) -> T {
        self.log_lambda2.exp()
    }
    pub fn lambda3(&self) -> T {
        self.log_lambda3.exp()
    }
    pub fn tail_bernoulli(&self) -> T {
        self.log_tail_bernoulli.exp()
    }
    pub fn tail_gaussian(&self) -> T {
        self.log_tail_gaussian.exp()
    }
    pub fn trunc3(&self) -> T {
        self.log_trunc3.exp()
    }
    pub fn total(&self) -> T {
        self.log_total.exp()
    }
}

pub fn chatterjee_bound<T: Real>(params: &ModelParams<T>, z: Complex<T>, eps: T) -> Result<ChatterjeeBound<T>> {
    if !(z.im > T::zero()) {
        return Err(Error::Domain(format!("Im z = {} must be positive", z.im)));
    }
    if !(eps > T::zero()) {
        return Err(Error::Domain(format!("eps = {eps} must be positive")));
    }
    let stats = derive_stats(params)?;
    let n = params.n();
    let truncation = eps * stats.k_n();
    let ln_b = z.im.ln();
    let r = T::from_count(stats.r_max);
    let r1 = r - T::one();
    let ln_n = ln_of::<T>(n);

    // λ₂ ≤ 2 max(b⁻³, b⁻⁴) r²(r-1)² / (n²σ²)
    let log_lambda2 = T::lit(2.0).ln() + (-T::lit(3.0) * ln_b).max(-T::lit(4.0) * ln_b)
        + T::lit(2.0) * (r.ln() + r1.ln())
        - T::lit(2.0) * ln_n
        - stats.log_sigma_sq;
    // λ₃ ≤ 6 max(b⁻⁶, b^{-9/2}, b⁻⁴) r³(r-1)³ / (n^{5/2} σ³)
    let log_lambda3 = T::lit(6.0).ln()
        + (-T::lit(6.0) * ln_b).max(-T::lit(4.5) * ln_b).max(-T::lit(4.0) * ln_b)
        + T::lit(3.0) * (r.ln() + r1.ln())
        - T::lit(2.5) * ln_n
        - T::lit(1.5) * stats.log_sigma_sq;

    let per_class = |f: &dyn Fn(&SizeClass<T>) -> T| {
        log_sum_exp(
            params
                .classes()
                .iter()
                .zip(&stats.log_class_count)
                .map(|(c, &lc)| lc + f(c).ln())
                .collect::<Vec<_>>(),
        )
    };
    let sd = |c: &SizeClass<T>| (c.prob * (T::one() - c.prob)).sqrt();
    let log_tail_bernoulli = per_class(&|c| bernoulli_tail_second_moment(c.prob, truncation));
    let log_tail_gaussian = per_class(&|c| gaussian_tail_second_moment(sd(c), truncation));
    let log_trunc3 = per_class(&|c| {
        bernoulli_truncated_third_moment(c.prob, truncation) + gaussian_truncated_third_moment(sd(c), truncation)
    });
    let log_trunc3_majorant =
        truncation.ln() + per_class(&|c| T::lit(2.0) * c.prob * (T::one() - c.prob));

    let log_tails = log_sum_exp([log_tail_bernoulli, log_tail_gaussian]);
    let log_total = log_sum_exp([
        T::lit(2.0).ln() + log_lambda2 + log_tails,
        log_lambda3 - T::lit(3.0).ln() + log_trunc3,
    ]);
    Ok(ChatterjeeBound {
        z,
        eps,
        truncation,
        log_lambda2,
        log_lambda3,
        log_tail_bernoulli,
        log_tail_gaussian,
        log_trunc3,
        log_trunc3_majorant,
        log_total,
    })
}
