use hyperspectra::{covariance_profile, sample_surrogate, surrogate_coefficients, ModelParams, SurrogateCoefficients};
use hyperspectra_testkit::stats::covariance_with_se;
use nalgebra::DMatrix;
use proptest::prelude::*;

fn coeffs_for(n: u64, r: &[u64], p: &[f64]) -> SurrogateCoefficients {
    let params = ModelParams::from_slices(n, r, p).unwrap();
    surrogate_coefficients(&covariance_profile(&params).unwrap()).unwrap()
}

#[test]
fn entry_covariances_follow_profile() {
    let n = 200u64;
    let params = ModelParams::from_slices(n, &[5], &[0.3]).unwrap();
    let profile = covariance_profile(&params).unwrap();
    let c = surrogate_coefficients(&profile).unwrap();
    let (mut h12, mut h13, mut h34) = (Vec::new(), Vec::new(), Vec::new());
    for seed in 0..2000 {
        let h = sample_surrogate(n as usize, &c, seed).unwrap();
        let s = (n as f64).sqrt();
        h12.push(h.get(0, 1) * s);
        h13.push(h.get(0, 2) * s);
        h34.push(h.get(2, 3) * s);
    }
    let (share, se1) = covariance_with_se(&h12, &h13);
    let (disjoint, se2) = covariance_with_se(&h12, &h34);
    assert!((share - profile.gamma).abs() < 4.0 * se1, "{share} vs γ = {} (se {se1})", profile.gamma);
    assert!((disjoint - profile.rho).abs() < 4.0 * se2, "{disjoint} vs ρ = {} (se {se2})", profile.rho);
}

#[test]
fn perturbation_has_rank_at_most_three() {
    let n = 100;
    let full = coeffs_for(100, &[5], &[0.3]);
    assert!(full.alpha > 0.0 && full.beta > 0.0);
    let c = SurrogateCoefficients { theta: 0.0, ..full };
    for seed in 0..5 {
        let h = sample_surrogate(n, &c, seed).unwrap();
        // Restore the removed diagonal: X_uv + X_uw - X_vw = 2 α g_u + β g.
        let mut m = DMatrix::from_row_slice(n, n, h.as_slice());
        for u in 0..n {
            let (v, w) = ((u + 1) % n, (u + 2) % n);
            m[(u, u)] = h.get(u, v) + h.get(u, w) - h.get(v, w);
        }
        let sv = m.singular_values();
        let mut sv: Vec<f64> = sv.iter().copied().collect();
        sv.sort_by(|a, b| b.total_cmp(a));
        assert!(sv[3] < 1e-8 * sv[0], "σ₄/σ₁ = {}", sv[3] / sv[0]);
    }
}

#[test]
fn entries_are_gaussian() {
    let n = 50;
    let c = coeffs_for(50, &[5], &[0.3]);
    let xs: Vec<f64> = (0..10_000).map(|s| sample_surrogate(n, &c, s).unwrap().get(0, 1)).collect();
    let m = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / m;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / m;
    let skew = xs.iter().map(|x| (x - mean).powi(3)).sum::<f64>() / m / var.powf(1.5);
    let kurt = xs.iter().map(|x| (x - mean).powi(4)).sum::<f64>() / m / (var * var) - 3.0;
    assert!(skew.abs() < 0.1, "skew {skew}");
    assert!(kurt.abs() < 0.2, "excess kurtosis {kurt}");
    assert!((var * n as f64 - 1.0).abs() < 0.05);
}

proptest! {
    #[test]
    fn coefficients_have_unit_variance(n in 4u64..5000, r1 in 2u64..40, r2 in 2u64..40, p1 in 0.001f64..0.999, p2 in 0.001f64..0.999) {
        let (a, b) = (r1.min(r2).min(n), r1.max(r2).min(n));
        let c = coeffs_for(n, &[a, b], &[p1, p2]);
        prop_assert!((c.entry_variance() - 1.0).abs() < 1e-12);
        prop_assert!(c.theta >= 0.0 && c.alpha >= 0.0 && c.beta >= 0.0);
    }
}
