//! Dense symmetric eigensolver: Householder reduction to tridiagonal form followed by
//! implicit QL iterations with Wilkinson-type shifts.
//!
//! The reduction works on the lower triangle of a row-major copy, so both the
//! symmetric matrix-vector product and the rank-2 update stream contiguous rows.

use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;
use crate::scalar::Real;

/// Maximum QL sweeps per eigenvalue before giving up.
const MAX_SWEEPS: usize = 60;

/// Input asymmetry tolerated, relative to `max(1, max|h_ij|)`.
pub const SYMMETRY_TOL: f64 = 1e-12;

/// Eigenvalues and orthonormal eigenvectors, ascending.
#[derive(Debug, Clone)]
pub struct SymmetricEigen<T> {
    pub values: Vec<T>,
    /// `vectors[j]` is the unit eigenvector of `values[j]`.
    pub vectors: Vec<Vec<T>>,
}

/// Tridiagonal form `Q^T A Q = T`. `diag` has length `n`, `sub[k] = T[k+1][k]` for
/// `k < n-1` and `sub[n-1] = 0`.
struct Tridiagonal<T> {
    diag: Vec<T>,
    sub: Vec<T>,
    /// Householder scalars; the vectors themselves are left below the subdiagonal
    /// of the work matrix (with an implicit leading 1).
    tau: Vec<T>,
}

/// Full ascending spectrum of a symmetric matrix.
pub fn eigenvalues<T: Real>(h: &DenseMatrix<T>) -> Result<Vec<T>> {
    h.check_symmetric(T::lit(SYMMETRY_TOL))?;
    let n = h.n();
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut work = h.as_slice().to_vec();
    let mut tri = tridiagonalize(&mut work, n);
    tridiagonal_ql(&mut tri.diag, &mut tri.sub, None)?;
    let mut values = tri.diag;
    values.sort_by(|a, b| a.partial_cmp(b).expect("finite eigenvalues"));
    Ok(values)
}

/// Eigenvalues with eigenvectors. `O(n³)` with a larger constant than
/// [`eigenvalues`]; intended for moderate `n`.
pub fn symmetric_eigen<T: Real>(h: &DenseMatrix<T>) -> Result<SymmetricEigen<T>> {
    h.check_symmetric(T::lit(SYMMETRY_TOL))?;
    let n = h.n();
    if n == 0 {
        return Ok(SymmetricEigen { values: Vec::new(), vectors: Vec::new() });
    }
    let mut work = h.as_slice().to_vec();
    let mut tri = tridiagonalize(&mut work, n);
    // Rows of `zt` are the columns of Q.
    let mut zt = accumulate_q(&work, &tri.tau, n);
    transpose_in_place(&mut zt, n);
    tridiagonal_ql(&mut tri.diag, &mut tri.sub, Some(&mut zt))?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| tri.diag[a].partial_cmp(&tri.diag[b]).expect("finite eigenvalues"));
    let values = order.iter().map(|&j| tri.diag[j]).collect();
    let vectors = order.iter().map(|&j| zt[j * n..(j + 1) * n].to_vec()).collect();
    Ok(SymmetricEigen { values, vectors })
}

/// `‖H v - λ v‖₂`.
pub fn residual_norm<T: Real>(h: &DenseMatrix<T>, value: T, vector: &[T]) -> T {
    h.matvec(vector)
        .iter()
        .zip(vector)
        .map(|(&hv, &v)| {
            let r = hv - value * v;
            r * r
        })
        .sum::<T>()
        .sqrt()
}

fn tridiagonalize<T: Real>(a: &mut [T], n: usize) -> Tridiagonal<T> {
    let mut diag = vec![T::zero(); n];
    let mut sub = vec![T::zero(); n];
    let mut tau = vec![T::zero(); n.saturating_sub(1)];
    let mut v = vec![T::zero(); n];
    let mut p = vec![T::zero(); n];
    let half = T::lit(0.5);

    for k in 0..n.saturating_sub(1) {
        diag[k] = a[k * n + k];
        let s = k + 1;
        let m = n - s;
        let alpha = a[s * n + k];
        let xnorm = (s + 1..n)
            .map(|i| a[i * n + k])
            .fold(T::zero(), |acc, x| acc.hypot(x));
        if xnorm == T::zero() {
            sub[k] = alpha;
            continue;
        }
        let mut beta = alpha.hypot(xnorm);
        if alpha >= T::zero() {
            beta = -beta;
        }
        let t = (beta - alpha) / beta;
        let scale = (alpha - beta).recip();
        tau[k] = t;
        sub[k] = beta;

        let v = &mut v[..m];
        v[0] = T::one();
        for i in 1..m {
            let x = a[(s + i) * n + k] * scale;
            v[i] = x;
            a[(s + i) * n + k] = x;
        }
        a[s * n + k] = T::one();

        // p = τ A22 v over the lower triangle.
        let p = &mut p[..m];
        p.iter_mut().for_each(|x| *x = T::zero());
        for i in 0..m {
            let row = &a[(s + i) * n + s..(s + i) * n + s + i + 1];
            let (off, d) = row.split_at(i);
            let vi = v[i];
            let mut dot = d[0] * vi;
            for ((pj, &aij), &vj) in p[..i].iter_mut().zip(off).zip(&v[..i]) {
                dot = dot + aij * vj;
                *pj = *pj + aij * vi;
            }
            p[i] = p[i] + dot;
        }
        let mut pv = T::zero();
        for (pi, &vi) in p.iter_mut().zip(v.iter()) {
            *pi = *pi * t;
            pv = pv + *pi * vi;
        }
        // w = p - (τ/2)(pᵀv) v, stored back into p.
        let c = half * t * pv;
        for (pi, &vi) in p.iter_mut().zip(v.iter()) {
            *pi = *pi - c * vi;
        }
        // A22 -= v wᵀ + w vᵀ (lower triangle).
        for i in 0..m {
            let vi = v[i];
            let wi = p[i];
            let row = &mut a[(s + i) * n + s..(s + i) * n + s + i + 1];
            for ((aij, &vj), &wj) in row.iter_mut().zip(&v[..=i]).zip(&p[..=i]) {
                *aij = *aij - vi * wj - wi * vj;
            }
        }
    }
    diag[n - 1] = a[(n - 1) * n + n - 1];
    Tridiagonal { diag, sub, tau }
}

/// Forms `Q = H_0 H_1 ⋯ H_{n-2}` (row-major) from the stored reflectors.
fn accumulate_q<T: Real>(a: &[T], tau: &[T], n: usize) -> Vec<T> {
    let mut q = vec![T::zero(); n * n];
    for i in 0..n {
        q[i * n + i] = T::one();
    }
    let mut w = vec![T::zero(); n];
    for k in (0..n.saturating_sub(1)).rev() {
        let t = tau[k];
        if t == T::zero() {
            continue;
        }
        let s = k + 1;
        let v: Vec<T> = (s..n).map(|i| if i == s { T::one() } else { a[i * n + k] }).collect();
        // wᵀ = vᵀ Q[s.., s..]
        let w = &mut w[s..n];
        w.iter_mut().for_each(|x| *x = T::zero());
        for (vi, i) in v.iter().zip(s..n) {
            for (wj, &qij) in w.iter_mut().zip(&q[i * n + s..(i + 1) * n]) {
                *wj = *wj + *vi * qij;
            }
        }
        for (vi, i) in v.iter().zip(s..n) {
            let f = t * *vi;
            for (qij, &wj) in q[i * n + s..(i + 1) * n].iter_mut().zip(w.iter()) {
                *qij = *qij - f * wj;
            }
        }
    }
    q
}

fn transpose_in_place<T: Copy>(m: &mut [T], n: usize) {
    for i in 0..n {
        for j in 0..i {
            m.swap(i * n + j, j * n + i);
        }
    }
}

/// Implicit QL on a symmetric tridiagonal matrix. On return `diag` holds the
/// (unsorted) eigenvalues. If `zt` is given, its rows are rotated along with the
/// iteration, so rows of `Qᵀ` on input become eigenvector rows on output.
fn tridiagonal_ql<T: Real>(diag: &mut [T], sub: &mut [T], mut zt: Option<&mut [T]>) -> Result<()> {
    let n = diag.len();
    let eps = T::epsilon();
    let mut shift_acc = T::zero();
    let mut tst1 = T::zero();
    for l in 0..n {
        tst1 = tst1.max(diag[l].abs() + sub[l].abs());
        let mut m = l;
        while m < n - 1 && sub[m].abs() > eps * tst1 {
            m += 1;
        }
        if m > l {
            let mut sweeps = 0;
            loop {
                sweeps += 1;
                if sweeps > MAX_SWEEPS {
                    return Err(Error::NoConvergence);
                }
                let g = diag[l];
                let mut p = (diag[l + 1] - g) / (T::lit(2.0) * sub[l]);
                let mut r = p.hypot(T::one());
                if p < T::zero() {
                    r = -r;
                }
                diag[l] = sub[l] / (p + r);
                diag[l + 1] = sub[l] * (p + r);
                let dl1 = diag[l + 1];
                let mut h = g - diag[l];
                for d in diag.iter_mut().skip(l + 2) {
                    *d = *d - h;
                }
                shift_acc = shift_acc + h;

                p = diag[m];
                let mut c = T::one();
                let mut c2 = c;
                let mut c3 = c;
                let el1 = sub[l + 1];
                let mut s = T::zero();
                let mut s2 = T::zero();
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    let g = c * sub[i];
                    h = c * p;
                    r = p.hypot(sub[i]);
                    sub[i + 1] = s * r;
                    s = sub[i] / r;
                    c = p / r;
                    p = c * diag[i] - s * g;
                    diag[i + 1] = h + s * (c * g + s * diag[i]);
                    if let Some(z) = zt.as_deref_mut() {
                        let (lo, hi) = z.split_at_mut((i + 1) * n);
                        let zi = &mut lo[i * n..];
                        let zi1 = &mut hi[..n];
                        for (a, b) in zi.iter_mut().zip(zi1.iter_mut()) {
                            let hb = *b;
                            *b = s * *a + c * hb;
                            *a = c * *a - s * hb;
                        }
                    }
                }
                p = -s * s2 * c3 * el1 * sub[l] / dl1;
                sub[l] = s * p;
                diag[l] = c * p;
                if sub[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        diag[l] = diag[l] + shift_acc;
        sub[l] = T::zero();
    }
    Ok(())
}
