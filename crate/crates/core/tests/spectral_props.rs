use hyperspectra::matrix::DenseMatrix;
use hyperspectra::spectral::{residual_norm, semicircle_stieltjes, Cdf, SemicircleLaw};
use hyperspectra::{
    adjacency, average_esd, center_scale, eigenvalues, empirical_stieltjes, esd, ks_distance, pool,
    sample_hypergraph, sample_surrogate, surrogate_coefficients, symmetric_eigen, Complex, CovarianceProfile,
    ModelParams, SamplerBudget,
};
use hyperspectra_testkit::quad::integrate;
use nalgebra::DMatrix;
use proptest::prelude::*;

fn symmetric(n: usize, vals: &[f64]) -> DenseMatrix<f64> {
    let mut m = DenseMatrix::zeros(n);
    let mut it = vals.iter().copied().cycle();
    for i in 0..n {
        for j in i..n {
            m.set_sym(i, j, it.next().unwrap());
        }
    }
    m
}

fn spectral_norm(eigs: &[f64]) -> f64 {
    eigs.iter().fold(0.0_f64, |a, x| a.max(x.abs()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn eigenvalues_match_nalgebra(n in 1usize..40, vals in prop::collection::vec(-5.0f64..5.0, 1..200)) {
        let m = symmetric(n, &vals);
        let ours = eigenvalues(&m).unwrap();
        let mut theirs: Vec<f64> = DMatrix::from_row_slice(n, n, m.as_slice()).symmetric_eigenvalues().iter().copied().collect();
        theirs.sort_by(f64::total_cmp);
        let scale = spectral_norm(&theirs).max(1.0);
        for (a, b) in ours.iter().zip(&theirs) {
            prop_assert!((a - b).abs() <= 1e-10 * scale, "{a} vs {b}");
        }
        prop_assert!(ours.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn trace_and_frobenius_preserved(n in 1usize..60, vals in prop::collection::vec(-3.0f64..3.0, 1..300)) {
        let m = symmetric(n, &vals);
        let eigs = eigenvalues(&m).unwrap();
        let sum: f64 = eigs.iter().sum();
        prop_assert!((sum - m.trace()).abs() <= 1e-8 * n as f64 * m.max_abs().max(1.0));
        let sq: f64 = eigs.iter().map(|x| x * x).sum();
        prop_assert!((sq - m.frobenius_sq()).abs() <= 1e-10 * m.frobenius_sq().max(1.0));
    }

    #[test]
    fn eigenpair_residuals(n in 2usize..50, vals in prop::collection::vec(-2.0f64..2.0, 1..300)) {
        let m = symmetric(n, &vals);
        let e = symmetric_eigen(&m).unwrap();
        let norm = spectral_norm(&e.values).max(f64::MIN_POSITIVE);
        for (idx, v) in e.vectors.iter().enumerate() {
            let len: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            prop_assert!((len - 1.0).abs() < 1e-10);
            prop_assert!(residual_norm(&m, e.values[idx], v) <= 1e-8 * norm.max(1e-300) + 1e-14);
        }
    }

    #[test]
    fn herglotz(s_sq in 0.01f64..10.0, re in -20.0f64..20.0, im in 1e-3f64..50.0, eigs in prop::collection::vec(-10.0f64..10.0, 1..50)) {
        let z = Complex::new(re, im);
        prop_assert!(semicircle_stieltjes(s_sq, z).unwrap().im > 0.0);
        prop_assert!(empirical_stieltjes(&eigs, z).unwrap().im > 0.0);
    }

    #[test]
    fn ks_is_a_distance_in_unit_interval(atoms in prop::collection::vec(-4.0f64..4.0, 1..200), s_sq in 0.1f64..4.0) {
        let m = esd(&atoms).unwrap();
        let d = ks_distance(&m, &SemicircleLaw::new(s_sq).unwrap());
        prop_assert!((0.0..=1.0).contains(&d));
        prop_assert!(ks_distance(&m, &m) < 1e-12);
    }
}

#[test]
fn residuals_on_sampled_matrix() {
    let params = ModelParams::from_slices(150, &[2, 3], &[0.1, 0.01]).unwrap();
    let h = sample_hypergraph(&params, 5, SamplerBudget::default()).unwrap();
    let m = center_scale(&adjacency(&h).unwrap(), &params).unwrap();
    let e = symmetric_eigen(&m).unwrap();
    let norm = spectral_norm(&e.values);
    for idx in [0, 17, 75, 120, 149] {
        assert!(residual_norm(&m, e.values[idx], &e.vectors[idx]) <= 1e-8 * norm);
    }
    let sum: f64 = e.values.iter().sum();
    assert!(sum.abs() <= 1e-8 * 150.0 * m.max_abs());
}

#[test]
fn density_integrates_to_one() {
    for s_sq in [0.25_f64, 0.49, 1.0] {
        let law = SemicircleLaw::new(s_sq).unwrap();
        let r = law.radius();
        let total = integrate(|x| law.pdf(x), -r, r, 1e-13);
        assert!((total - 1.0).abs() < 1e-9, "s²={s_sq}: {total}");
        let second = integrate(|x| x * x * law.pdf(x), -r, r, 1e-13);
        assert!((second - s_sq).abs() < 1e-9);
        for x in [-0.9 * r, -0.2 * r, 0.4 * r] {
            let cdf = integrate(|t| law.pdf(t), -r, x, 1e-13);
            assert!((cdf - law.cdf(x)).abs() < 1e-9);
        }
    }
}

/// `∫ pdf(x)/(x - z) dx` with `x = 2s sin θ`, which removes the square-root edges.
fn stieltjes_by_quadrature(s_sq: f64, z: Complex) -> Complex {
    let law = SemicircleLaw::new(s_sq).unwrap();
    let r = law.radius();
    let half = std::f64::consts::FRAC_PI_2;
    let f = |theta: f64, part: fn(Complex) -> f64| {
        let x = r * theta.sin();
        let jac = r * theta.cos();
        part(Complex::new(1.0, 0.0) / (Complex::new(x, 0.0) - z)) * law.pdf(x) * jac
    };
    Complex::new(
        integrate(|t| f(t, |c| c.re), -half, half, 1e-13),
        integrate(|t| f(t, |c| c.im), -half, half, 1e-13),
    )
}

#[test]
fn stieltjes_matches_quadrature() {
    for z in [Complex::new(0.0, 1.0), Complex::new(1.0, 1.0), Complex::new(-0.5, 2.0)] {
        let closed = semicircle_stieltjes(1.0, z).unwrap();
        let quad = stieltjes_by_quadrature(1.0, z);
        assert!((closed - quad).norm() < 1e-8, "z={z}: {closed} vs {quad}");
        assert!(closed.im > 0.0);
    }
    let z = Complex::new(0.0, 100.0);
    assert!((z * stieltjes_by_quadrature(1.0, z) + 1.0).norm() < 1e-3);
}

#[test]
fn wigner_like_sample_is_symmetric_about_zero() {
    let c = surrogate_coefficients(&CovarianceProfile { rho: 0.0, gamma: 0.0, theta_sq: 1.0 }).unwrap();
    let h = sample_surrogate(2000, &c, 77).unwrap();
    let m = esd(&eigenvalues(&h).unwrap()).unwrap();
    let f0 = m.cdf(0.0);
    assert!((0.45..=0.55).contains(&f0), "{f0}");
    assert!(ks_distance(&m, &SemicircleLaw::new(1.0).unwrap()) < 0.03);
}

#[test]
fn empirical_stieltjes_of_superposition_is_close_to_semicircle() {
    let params = ModelParams::from_slices(2000, &[2, 2], &[0.3, 0.5]).unwrap();
    let mut measures = Vec::new();
    let mut eig_sets = Vec::new();
    for seed in 0..2 {
        let h = sample_hypergraph(&params, seed, SamplerBudget::default()).unwrap();
        let eigs = eigenvalues(&center_scale(&adjacency(&h).unwrap(), &params).unwrap()).unwrap();
        measures.push(esd(&eigs).unwrap());
        eig_sets.push(eigs);
    }
    for z in [Complex::new(0.0, 1.0), Complex::new(1.0, 1.0), Complex::new(-1.0, 1.0)] {
        let avg = eig_sets.iter().map(|e| empirical_stieltjes(e, z).unwrap()).sum::<Complex>() / 2.0;
        assert!((avg - semicircle_stieltjes(1.0, z).unwrap()).norm() <= 0.05);
    }
    let pooled = pool(&measures).unwrap();
    assert!(ks_distance(&pooled, &SemicircleLaw::new(1.0).unwrap()) < 0.02);
    let hist = average_esd(&measures, 100).unwrap();
    assert!((hist.total_mass() - 1.0).abs() < 1e-12);
    assert!(ks_distance(&hist, &SemicircleLaw::new(1.0).unwrap()) < 0.03);
    assert!(!hist.breakpoints().is_empty());
}
