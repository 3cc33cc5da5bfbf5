use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::spectral::Cdf;

#[derive(Debug, Clone, PartialEq)]
enum Repr<T> {
    /// Sorted atoms, each of mass `1/len`.
    Atoms(Vec<T>),
    /// `edges.len() == masses.len() + 1`; mass is spread uniformly within a bin.
    Histogram { edges: Vec<T>, masses: Vec<T> },
}

/// Finite probability measure on the line: an empirical spectral distribution
/// (uniform atoms) or an aggregated histogram.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalMeasure<T> {
    repr: Repr<T>,
}

/// A moment estimate; `approximate` is set when it comes from bin midpoints.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Moment<T> {
    pub value: T,
    pub approximate: bool,
}

pub const DEFAULT_BINS: usize = 100;
pub const MIN_BINS: usize = 10;

fn sorted<T: Real>(mut xs: Vec<T>) -> Vec<T> {
    xs.sort_by(|a, b| a.partial_cmp(b).expect("atoms must not be NaN"));
    xs
}

impl<T: Real> EmpiricalMeasure<T> {
    /// Uniform atoms at the given points (sorted on construction).
    pub fn from_atoms(atoms: Vec<T>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::Empty("empirical measure needs at least one atom"));
        }
        if atoms.iter().any(|x| !x.is_finite()) {
            return Err(Error::Domain("atoms must be finite".into()));
        }
        Ok(Self { repr: Repr::Atoms(sorted(atoms)) })
    }

    pub fn histogram(edges: Vec<T>, masses: Vec<T>) -> Result<Self> {
        if masses.is_empty() || edges.len() != masses.len() + 1 {
            return Err(Error::InvalidParams(format!(
                "{} edges for {} bins",
                edges.len(),
                masses.len()
            )));
        }
        if edges.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidParams("bin edges must be strictly increasing".into()));
        }
        let total: T = masses.iter().copied().sum();
        if masses.iter().any(|&m| m < T::zero()) || (total - T::one()).abs() > T::lit(1e-9) {
            return Err(Error::InvalidParams(format!("bin masses must be non-negative and sum to 1, got {total}")));
        }
        Ok(Self { repr: Repr::Histogram { edges, masses } })
    }

    pub fn atoms(&self) -> Option<&[T]> {
        match &self.repr {
            Repr::Atoms(a) => Some(a),
            Repr::Histogram { .. } => None,
        }
    }

    /// `(edges, masses)` when this is a histogram.
    pub fn bins(&self) -> Option<(&[T], &[T])> {
        match &self.repr {
            Repr::Histogram { edges, masses } => Some((edges, masses)),
            Repr::Atoms(_) => None,
        }
    }

    pub fn is_histogram(&self) -> bool {
        matches!(self.repr, Repr::Histogram { .. })
    }

    /// Smallest and largest point carrying mass (bin hull for histograms).
    pub fn support_hull(&self) -> (T, T) {
        match &self.repr {
            Repr::Atoms(a) => (a[0], a[a.len() - 1]),
            Repr::Histogram { edges, .. } => (edges[0], edges[edges.len() - 1]),
        }
    }

    pub fn total_mass(&self) -> T {
        match &self.repr {
            Repr::Atoms(_) => T::one(),
            Repr::Histogram { masses, .. } => masses.iter().copied().sum(),
        }
    }

    /// `F(x) = μ((-∞, x])`.
    pub fn cdf(&self, x: T) -> T {
        match &self.repr {
            Repr::Atoms(a) => T::from_count(a.partition_point(|&v| v <= x) as u64) / T::from_count(a.len() as u64),
            Repr::Histogram { edges, masses } => hist_cdf(edges, masses, x),
        }
    }

    /// `F(x-) = μ((-∞, x))`.
    pub fn cdf_left(&self, x: T) -> T {
        match &self.repr {
            Repr::Atoms(a) => T::from_count(a.partition_point(|&v| v < x) as u64) / T::from_count(a.len() as u64),
            Repr::Histogram { .. } => self.cdf(x),
        }
    }

    /// `∫ x^k dμ`; histograms use bin midpoints and are flagged approximate.
    pub fn moment(&self, k: u32) -> Moment<T> {
        match &self.repr {
            Repr::Atoms(a) => {
                let s: T = a.iter().map(|&x| x.powi(k as i32)).sum();
                Moment { value: s / T::from_count(a.len() as u64), approximate: false }
            }
            Repr::Histogram { edges, masses } => {
                let value = edges
                    .windows(2)
                    .zip(masses)
                    .map(|(w, &m)| m * (T::lit(0.5) * (w[0] + w[1])).powi(k as i32))
                    .sum();
                Moment { value, approximate: true }
            }
        }
    }
}

fn hist_cdf<T: Real>(edges: &[T], masses: &[T], x: T) -> T {
    if x < edges[0] {
        return T::zero();
    }
    let last = edges.len() - 1;
    if x >= edges[last] {
        return T::one();
    }
    // bin index b with edges[b] <= x < edges[b+1]
    let b = edges.partition_point(|&e| e <= x) - 1;
    let before: T = masses[..b].iter().copied().sum();
    let frac = (x - edges[b]) / (edges[b + 1] - edges[b]);
    (before + masses[b] * frac).min(T::one())
}

impl<T: Real> Cdf<T> for EmpiricalMeasure<T> {
    fn cdf(&self, x: T) -> T {
        EmpiricalMeasure::cdf(self, x)
    }

    fn cdf_left(&self, x: T) -> T {
        EmpiricalMeasure::cdf_left(self, x)
    }

    fn breakpoints(&self) -> Vec<T> {
        match &self.repr {
            Repr::Atoms(a) => a.clone(),
            Repr::Histogram { edges, .. } => edges.clone(),
        }
    }
}

/// Empirical spectral distribution of a list of eigenvalues.
pub fn esd<T: Real>(eigs: &[T]) -> Result<EmpiricalMeasure<T>> {
    EmpiricalMeasure::from_atoms(eigs.to_vec())
}

/// Equal-weight mixture of atom measures of equal size, as a single atom measure.
/// This is the exact Monte Carlo estimate of the expected ESD.
pub fn pool<T: Real>(measures: &[EmpiricalMeasure<T>]) -> Result<EmpiricalMeasure<T>> {
    let first = measures.first().ok_or(Error::Empty("no measures to pool"))?;
    let len = first.atoms().map(<[T]>::len);
    let mut all = Vec::new();
    for m in measures {
        match m.atoms() {
            Some(a) if Some(a.len()) == len => all.extend_from_slice(a),
            _ => {
                return Err(Error::InvalidParams(
                    "pooling needs atom measures with equal atom counts".into(),
                ))
            }
        }
    }
    EmpiricalMeasure::from_atoms(all)
}

/// Equal-weight mixture of measures, binned into `bins` equal bins over the hull of
/// their supports. A degenerate hull is widened to unit length around its point.
pub fn average_esd<T: Real>(measures: &[EmpiricalMeasure<T>], bins: usize) -> Result<EmpiricalMeasure<T>> {
    if measures.is_empty() {
        return Err(Error::Empty("no measures to average"));
    }
    if bins < MIN_BINS {
        return Err(Error::InvalidParams(format!("bins = {bins} below minimum {MIN_BINS}")));
    }
    let (mut lo, mut hi) = measures
        .iter()
        .map(EmpiricalMeasure::support_hull)
        .fold((T::infinity(), T::neg_infinity()), |(l, h), (a, b)| (l.min(a), h.max(b)));
    if hi <= lo {
        lo = lo - T::lit(0.5);
        hi = hi + T::lit(0.5);
    }
    let nb = T::from_count(bins as u64);
    let width = (hi - lo) / nb;
    let edges: Vec<T> = (0..=bins)
        .map(|i| if i == bins { hi } else { lo + width * T::from_count(i as u64) })
        .collect();
    let locate = |x: T| -> usize {
        let idx = ((x - lo) / width).floor().to_usize().unwrap_or(0);
        idx.min(bins - 1)
    };
    let share = T::one() / T::from_count(measures.len() as u64);
    let mut masses = vec![T::zero(); bins];
    for m in measures {
        match &m.repr {
            Repr::Atoms(a) => {
                let w = share / T::from_count(a.len() as u64);
                for &x in a {
                    masses[locate(x)] = masses[locate(x)] + w;
                }
            }
            Repr::Histogram { edges: e, masses: ms } => {
                for (win, &mass) in e.windows(2).zip(ms) {
                    let mid = T::lit(0.5) * (win[0] + win[1]);
                    masses[locate(mid)] = masses[locate(mid)] + share * mass;
                }
            }
        }
    }
    // Renormalize away the rounding drift so the invariant holds to the last ulp.
    let total: T = masses.iter().copied().sum();
    masses.iter_mut().for_each(|m| *m = *m / total);
    EmpiricalMeasure::histogram(edges, masses)
}

/// `(1/n) Σ (λ_j - z)⁻¹`.
pub fn empirical_stieltjes<T: Real>(eigs: &[T], z: Complex<T>) -> Result<Complex<T>> {
    if !(z.im > T::zero()) {
        return Err(Error::Domain(format!("Im z = {} must be positive", z.im)));
    }
    if eigs.is_empty() {
        return Err(Error::Empty("no eigenvalues"));
    }
    let sum = eigs
        .iter()
        .fold(Complex::new(T::zero(), T::zero()), |acc, &l| acc + (Complex::new(l, T::zero()) - z).inv());
    Ok(sum / T::from_count(eigs.len() as u64))
}

/// Kolmogorov–Smirnov distance `sup_x |F_m(x) - F_law(x)|`, evaluated at every
/// breakpoint of either distribution with both one-sided limits.
pub fn ks_distance<T: Real>(m: &EmpiricalMeasure<T>, law: &impl Cdf<T>) -> T {
    let mut points = m.breakpoints();
    points.extend(law.breakpoints());
    let mut worst = T::zero();
    for x in points {
        let right = (m.cdf(x) - law.cdf(x)).abs();
        let left = (m.cdf_left(x) - law.cdf_left(x)).abs();
        worst = worst.max(right).max(left);
    }
    worst
}
