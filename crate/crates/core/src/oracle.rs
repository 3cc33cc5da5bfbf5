//! Brute-force ground truth on tiny instances by enumerating every configuration
//! of the `M = Σ C(n, r_i)` hyperedge indicators.

use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;
use crate::scalar::Real;
use crate::theory::{derive_stats, ModelParams};

pub const MAX_SLOTS: u64 = 20;
pub const MAX_MOMENT: usize = 8;
pub const MAX_COVARIANCE_N: u64 = 8;

/// All potential hyperedges as `(class, sorted vertices)`, in class then
/// lexicographic order, keeping those accepted by `keep`.
fn slots<T: Real>(params: &ModelParams<T>, keep: impl Fn(&[u32]) -> bool) -> Vec<(usize, Vec<u32>)> {
    let n = params.n() as u32;
    let mut out = Vec::new();
    for (ci, c) in params.classes().iter().enumerate() {
        let r = c.size as usize;
        let mut comb: Vec<u32> = (0..r as u32).collect();
        loop {
            if keep(&comb) {
                out.push((ci, comb.clone()));
            }
            let Some(i) = (0..r).rev().find(|&i| comb[i] < n - (r - i) as u32) else {
                break;
            };
            comb[i] += 1;
            for j in i + 1..r {
                comb[j] = comb[j - 1] + 1;
            }
        }
    }
    out
}

fn check_slot_count<T: Real>(params: &ModelParams<T>) -> Result<()> {
    let m = params
        .classes()
        .iter()
        .fold(0u64, |acc, c| acc.saturating_add(binomial_small(params.n(), c.size)));
    if m > MAX_SLOTS {
        return Err(Error::TooLarge { m, limit: MAX_SLOTS });
    }
    Ok(())
}

fn binomial_small(n: u64, k: u64) -> u64 {
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for j in 0..k {
        acc = acc * u128::from(n - j) / u128::from(j + 1);
        if acc > u128::from(u64::MAX) {
            return u64::MAX;
        }
    }
    acc as u64
}

/// Visits every on/off configuration of `slots` in index order with its probability
/// and the mask of present slots.
fn for_each_config<T: Real>(params: &ModelParams<T>, slots: &[(usize, Vec<u32>)], mut visit: impl FnMut(T, u32)) {
    let probs: Vec<T> = params.classes().iter().map(|c| c.prob).collect();
    for mask in 0u32..(1u32 << slots.len()) {
        let weight = slots.iter().enumerate().fold(T::one(), |w, (bit, (ci, _))| {
            let p = probs[*ci];
            if mask >> bit & 1 == 1 {
                w * p
            } else {
                w * (T::one() - p)
            }
        });
        if weight != T::zero() {
            visit(weight, mask);
        }
    }
}

/// Exact EESD moments `m_1 .. m_max_k`, `m_k = E[(1/n) Tr H_n^k]`.
pub fn exact_eesd_moments<T: Real>(params: &ModelParams<T>, max_k: usize) -> Result<Vec<T>> {
    if max_k == 0 || max_k > MAX_MOMENT {
        return Err(Error::InvalidParams(format!("max_k must be in 1..={MAX_MOMENT}, got {max_k}")));
    }
    check_slot_count(params)?;
    let stats = derive_stats(params)?;
    let (mu, sigma_sq) = match (stats.mu, stats.sigma_sq) {
        (Some(m), Some(s)) => (m, s),
        _ => return Err(Error::Domain("entry moments overflow".into())),
    };
    let n = params.n() as usize;
    let nf = T::from_count(n as u64);
    let scale = (nf * sigma_sq).sqrt().recip();
    let slots = slots(params, |_| true);
    let half = max_k.div_ceil(2);
    // Neumaier-compensated sums; up to 2^20 configurations contribute.
    let mut moments = vec![(T::zero(), T::zero()); max_k];
    for_each_config(params, &slots, |weight, mask| {
        let mut counts = DenseMatrix::<u32>::zeros(n);
        for (bit, (_, e)) in slots.iter().enumerate() {
            if mask >> bit & 1 == 1 {
                for (i, &u) in e.iter().enumerate() {
                    for &v in &e[i + 1..] {
                        let c = counts.get(u as usize, v as usize) + 1;
                        counts.set_sym(u as usize, v as usize, c);
                    }
                }
            }
        }
        let h = DenseMatrix::from_fn(n, |i, j| {
            if i == j {
                T::zero()
            } else {
                (T::from_count(u64::from(counts.get(i, j))) - mu) * scale
            }
        });
        // powers[j] = H^(j+1); Tr H^k = <H^a, H^(k-a)> for symmetric H.
        let mut powers = vec![h.clone()];
        while powers.len() < half {
            let next = powers.last().expect("nonempty").matmul(&h);
            powers.push(next);
        }
        for (idx, m) in moments.iter_mut().enumerate() {
            let k = idx + 1;
            let a = k / 2;
            let trace = if a == 0 {
                h.trace()
            } else {
                let (x, y) = (&powers[a - 1], &powers[k - a - 1]);
                x.as_slice().iter().zip(y.as_slice()).map(|(&p, &q)| p * q).sum::<T>()
            };
            let term = weight * trace / nf;
            let t = m.0 + term;
            m.1 = m.1 + if m.0.abs() >= term.abs() { (m.0 - t) + term } else { (term - t) + m.0 };
            m.0 = t;
        }
    });
    Ok(moments.into_iter().map(|(s, c)| s + c).collect())
}

/// Exact covariances of adjacency entries by enumeration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExactCovariances<T> {
    /// `Cov(A_12, A_13)`.
    pub share_one: T,
    /// `Cov(A_12, A_34)`; zero when `n < 4`.
    pub disjoint: T,
}

/// Enumerates only the slots covering one of the pairs `{1,2}`, `{1,3}`, `{3,4}`;
/// the remaining slots are independent of those entries and marginalize out.
pub fn exact_covariances<T: Real>(params: &ModelParams<T>) -> Result<ExactCovariances<T>> {
    if params.n() > MAX_COVARIANCE_N {
        return Err(Error::InvalidParams(format!(
            "exact covariances need n <= {MAX_COVARIANCE_N}, got {}",
            params.n()
        )));
    }
    let four = params.n() >= 4;
    let pairs: &[(u32, u32)] = if four { &[(0, 1), (0, 2), (2, 3)] } else { &[(0, 1), (0, 2)] };
    let covers = |e: &[u32], (u, v): (u32, u32)| e.contains(&u) && e.contains(&v);
    let slots = slots(params, |e| pairs.iter().any(|&p| covers(e, p)));
    if slots.len() as u64 > MAX_SLOTS {
        return Err(Error::TooLarge { m: slots.len() as u64, limit: MAX_SLOTS });
    }
    let masks: Vec<u32> = pairs
        .iter()
        .map(|&p| {
            slots
                .iter()
                .enumerate()
                .filter(|(_, (_, e))| covers(e, p))
                .fold(0u32, |m, (bit, _)| m | 1 << bit)
        })
        .collect();
    let (mut e12, mut e13, mut e34) = (T::zero(), T::zero(), T::zero());
    let (mut e12_13, mut e12_34) = (T::zero(), T::zero());
    for_each_config(params, &slots, |w, mask| {
        let count = |i: usize| T::from_count(u64::from((mask & masks[i]).count_ones()));
        let (x12, x13) = (count(0), count(1));
        e12 = e12 + w * x12;
        e13 = e13 + w * x13;
        e12_13 = e12_13 + w * x12 * x13;
        if four {
            let x34 = count(2);
            e34 = e34 + w * x34;
            e12_34 = e12_34 + w * x12 * x34;
        }
    });
    Ok(ExactCovariances {
        share_one: e12_13 - e12 * e13,
        disjoint: if four { e12_34 - e12 * e34 } else { T::zero() },
    })
}
