//! Symmetric eigen solvers.
//!
//! Dimensions in this crate stay small (at most `2L`), so a cyclic Jacobi
//! sweep is used for full decompositions and a shifted power iteration for
//! the dominant eigenpair, with Jacobi as the fallback.

use num_complex::Complex64;

use super::{ComplexMatrix, RealMatrix};
use crate::error::{Error, Result};

pub const POWER_TOL: f64 = 1e-12;
pub const POWER_MAX_ITER: usize = 10_000;
pub const RESIDUAL_TOL: f64 = 1e-8;

const JACOBI_MAX_SWEEPS: usize = 100;

/// Entries within this relative distance of the largest magnitude count as
/// tied when choosing the entry that fixes the sign or phase.
const CANON_TIE_RTOL: f64 = 1e-9;

/// Full decomposition of a real symmetric matrix, eigenvalues descending.
#[derive(Debug, Clone)]
pub struct SymmetricEigen {
    pub values: Vec<f64>,
    /// Eigenvectors stored as columns, in the order of `values`.
    pub vectors: RealMatrix,
}

impl SymmetricEigen {
    pub fn vector(&self, k: usize) -> Vec<f64> {
        (0..self.vectors.rows()).map(|i| self.vectors[(i, k)]).collect()
    }
}

/// Cyclic Jacobi eigendecomposition.
pub fn jacobi_eigen(a: &RealMatrix) -> Result<SymmetricEigen> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "eigen decomposition of a {}x{} matrix",
            a.rows(),
            a.cols()
        )));
    }
    let n = a.rows();
    let mut m = a.clone();
    let mut v = RealMatrix::identity(n);
    let scale = a.frobenius_norm().max(1e-300);

    let mut converged = false;
    for _ in 0..JACOBI_MAX_SWEEPS {
        let mut off = 0.0;
        for p in 0..n {
            for q in p + 1..n {
                off += 2.0 * m[(p, q)] * m[(p, q)];
            }
        }
        if off.sqrt() <= 1e-15 * scale {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[(p, q)];
                if apq.abs() < 1e-300 {
                    continue;
                }
                let theta = (m[(q, q)] - m[(p, p)]) / (2.0 * apq);
                let sign = if theta >= 0.0 { 1.0 } else { -1.0 };
                let t = sign / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (m[(k, p)], m[(k, q)]);
                    m[(k, p)] = c * akp - s * akq;
                    m[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (m[(p, k)], m[(q, k)]);
                    m[(p, k)] = c * apk - s * aqk;
                    m[(q, k)] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let (vkp, vkq) = (v[(k, p)], v[(k, q)]);
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }
    if !converged {
        return Err(Error::NoConvergence {
            iterations: JACOBI_MAX_SWEEPS,
        });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(j, j)].total_cmp(&m[(i, i)]));
    let values = order.iter().map(|&i| m[(i, i)]).collect();
    let mut vectors = RealMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        for k in 0..n {
            vectors[(k, dst)] = v[(k, src)];
        }
    }
    Ok(SymmetricEigen { values, vectors })
}

/// Flips `v` so that its largest-magnitude entry (first one on ties) is positive.
pub fn canonicalize_sign(v: &mut [f64]) {
    let max = v.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    if max == 0.0 {
        return;
    }
    let pivot = v
        .iter()
        .position(|x| x.abs() >= max * (1.0 - CANON_TIE_RTOL))
        .expect("max exists");
    if v[pivot] < 0.0 {
        v.iter_mut().for_each(|x| *x = -*x);
    }
}

/// Rotates `v` so that its largest-magnitude entry (first one on ties) is
/// real and positive.
pub fn canonicalize_phase(v: &mut [Complex64]) {
    let max = v.iter().fold(0.0_f64, |m, z| m.max(z.norm()));
    if max == 0.0 {
        return;
    }
    let pivot = v
        .iter()
        .position(|z| z.norm() >= max * (1.0 - CANON_TIE_RTOL))
        .expect("max exists");
    let rot = v[pivot].conj() / v[pivot].norm();
    v.iter_mut().for_each(|z| *z *= rot);
    v[pivot].im = 0.0;
}

fn residual(a: &RealMatrix, lambda: f64, v: &[f64]) -> f64 {
    a.matvec(v)
        .iter()
        .zip(v)
        .map(|(av, x)| (av - lambda * x).powi(2))
        .sum::<f64>()
        .sqrt()
}

/// Deterministic, irregular start vector; unlikely to be orthogonal to
/// any eigenvector of interest.
fn start_vector(n: usize) -> Vec<f64> {
    let golden = 0.618_033_988_749_894_9_f64;
    let mut v: Vec<f64> = (0..n).map(|i| 1.0 + ((i + 1) as f64 * golden).fract()).collect();
    let norm = super::norm2(&v);
    v.iter_mut().for_each(|x| *x /= norm);
    v
}

/// Shifted power iteration. Returns `None` when the iteration cap is hit
/// or the final residual misses [`RESIDUAL_TOL`].
fn power_iteration(a: &RealMatrix) -> Option<(f64, Vec<f64>)> {
    let n = a.rows();
    // Gershgorin shift so that A + shift·I is positive semidefinite and the
    // dominant eigenvalue in magnitude is the algebraically largest one.
    let shift = (0..n)
        .map(|i| {
            let radius: f64 = (0..n).filter(|&j| j != i).map(|j| a[(i, j)].abs()).sum();
            radius - a[(i, i)]
        })
        .fold(0.0_f64, f64::max);

    let mut v = start_vector(n);
    for _ in 0..POWER_MAX_ITER {
        let w = a.matvec(&v);
        let lambda = super::dot(&v, &w);
        let res = w
            .iter()
            .zip(&v)
            .map(|(wi, vi)| (wi - lambda * vi).powi(2))
            .sum::<f64>()
            .sqrt();
        if res <= POWER_TOL * 1f64.max(lambda.abs() + shift) {
            return (res <= RESIDUAL_TOL * 1f64.max(lambda.abs())).then_some((lambda, v));
        }
        let mut next: Vec<f64> = w.iter().zip(&v).map(|(wi, vi)| wi + shift * vi).collect();
        let norm = super::norm2(&next);
        if norm == 0.0 || !norm.is_finite() {
            return None;
        }
        next.iter_mut().for_each(|x| *x /= norm);
        v = next;
    }
    None
}

/// Largest eigenvalue of a symmetric matrix and its unit eigenvector, sign
/// canonicalized so the largest-magnitude entry is positive.
pub fn max_eigenpair(a: &RealMatrix) -> Result<(f64, Vec<f64>)> {
    if !a.is_square() || a.rows() == 0 {
        return Err(Error::DimensionMismatch(format!(
            "max eigenpair of a {}x{} matrix",
            a.rows(),
            a.cols()
        )));
    }
    let (lambda, mut v) = match power_iteration(a) {
        Some(pair) => pair,
        None => {
            let eig = jacobi_eigen(a)?;
            let v = eig.vector(0);
            let lambda = eig.values[0];
            if residual(a, lambda, &v) > RESIDUAL_TOL * 1f64.max(lambda.abs()) {
                return Err(Error::NoConvergence {
                    iterations: POWER_MAX_ITER,
                });
            }
            (lambda, v)
        }
    };
    canonicalize_sign(&mut v);
    Ok((lambda, v))
}

/// Largest eigenvalue of a Hermitian matrix and its unit eigenvector, phase
/// canonicalized so the largest-magnitude entry is real positive.
///
/// Works on the real embedding `[[Re A, -Im A], [Im A, Re A]]`, whose
/// spectrum is that of `A` with every eigenvalue doubled.
pub fn hermitian_max_eigenpair(a: &ComplexMatrix) -> Result<(f64, Vec<Complex64>)> {
    let n = a.rows();
    let (lambda, xy) = max_eigenpair(&a.real_embedding())?;
    let mut v: Vec<Complex64> = (0..n).map(|i| Complex64::new(xy[i], xy[i + n])).collect();
    let norm = super::cnorm2(&v);
    v.iter_mut().for_each(|z| *z /= norm);
    canonicalize_phase(&mut v);
    Ok((lambda, v))
}
