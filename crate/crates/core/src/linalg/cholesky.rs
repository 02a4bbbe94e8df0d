use num_complex::Complex64;

use super::{ComplexMatrix, RealMatrix};
use crate::error::{Error, Result};

/// Pivots at or below this fraction of the largest diagonal entry are
/// treated as singular.
pub const PIVOT_RTOL: f64 = 1e-14;

/// Asymmetry allowed on input, relative to the largest entry.
const SYMMETRY_RTOL: f64 = 1e-10;

fn pivot_floor(max_diag: f64) -> f64 {
    PIVOT_RTOL * max_diag.max(0.0)
}

/// Upper-triangular `B` with `A = Bᵀ B`.
pub fn cholesky_upper(a: &RealMatrix) -> Result<RealMatrix> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "cholesky of a {}x{} matrix",
            a.rows(),
            a.cols()
        )));
    }
    if a.relative_asymmetry() > SYMMETRY_RTOL {
        return Err(Error::InvalidConfig("cholesky input is not symmetric".into()));
    }
    let n = a.rows();
    let max_diag = (0..n).map(|i| a[(i, i)]).fold(f64::NEG_INFINITY, f64::max);
    let floor = pivot_floor(max_diag);
    let mut b = RealMatrix::zeros(n, n);
    for j in 0..n {
        let mut d = a[(j, j)];
        for k in 0..j {
            d -= b[(k, j)] * b[(k, j)];
        }
        if d.is_nan() || d <= floor || max_diag <= 0.0 {
            return Err(Error::NotPositiveDefinite { index: j, pivot: d });
        }
        let bjj = d.sqrt();
        b[(j, j)] = bjj;
        for i in j + 1..n {
            let mut s = a[(j, i)];
            for k in 0..j {
                s -= b[(k, j)] * b[(k, i)];
            }
            b[(j, i)] = s / bjj;
        }
    }
    Ok(b)
}

/// Upper-triangular `U` with `A = Uᴴ U`. Only the upper triangle and the
/// real part of the diagonal of `A` are read.
pub fn cholesky_upper_hermitian(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "cholesky of a {}x{} matrix",
            a.rows(),
            a.cols()
        )));
    }
    if a.relative_asymmetry() > SYMMETRY_RTOL {
        return Err(Error::NotHermitian {
            asymmetry: a.relative_asymmetry(),
        });
    }
    let n = a.rows();
    let max_diag = (0..n).map(|i| a[(i, i)].re).fold(f64::NEG_INFINITY, f64::max);
    let floor = pivot_floor(max_diag);
    let mut u = ComplexMatrix::zeros(n, n);
    for j in 0..n {
        let mut d = a[(j, j)].re;
        for k in 0..j {
            d -= u[(k, j)].norm_sqr();
        }
        if d.is_nan() || d <= floor || max_diag <= 0.0 {
            return Err(Error::NotPositiveDefinite { index: j, pivot: d });
        }
        let ujj = d.sqrt();
        u[(j, j)] = Complex64::new(ujj, 0.0);
        for i in j + 1..n {
            let mut s = a[(j, i)];
            for k in 0..j {
                s -= u[(k, j)].conj() * u[(k, i)];
            }
            u[(j, i)] = s / ujj;
        }
    }
    Ok(u)
}

/// Solves `A · Y = X` for Hermitian positive definite `A`.
pub fn hermitian_solve(a: &ComplexMatrix, x: &ComplexMatrix) -> Result<ComplexMatrix> {
    if a.rows() != x.rows() {
        return Err(Error::DimensionMismatch(format!(
            "solve with a {}x{} system and {} right-hand rows",
            a.rows(),
            a.cols(),
            x.rows()
        )));
    }
    let u = cholesky_upper_hermitian(a)?;
    let n = a.rows();
    let mut y = x.clone();
    for col in 0..x.cols() {
        // Uᴴ z = x (forward; Uᴴ is lower triangular)
        for i in 0..n {
            let mut s = y[(i, col)];
            for k in 0..i {
                s -= u[(k, i)].conj() * y[(k, col)];
            }
            y[(i, col)] = s / u[(i, i)].re;
        }
        // U y = z (backward)
        for i in (0..n).rev() {
            let mut s = y[(i, col)];
            for k in i + 1..n {
                s -= u[(i, k)] * y[(k, col)];
            }
            y[(i, col)] = s / u[(i, i)].re;
        }
    }
    Ok(y)
}

/// Vector form of [`hermitian_solve`].
pub fn hermitian_solve_vec(a: &ComplexMatrix, b: &[Complex64]) -> Result<Vec<Complex64>> {
    let rhs = ComplexMatrix::from_vec(b.len(), 1, b.to_vec())?;
    Ok(hermitian_solve(a, &rhs)?.column(0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn identity_factor_is_identity() {
        assert_eq!(
            cholesky_upper(&RealMatrix::identity(3)).unwrap(),
            RealMatrix::identity(3)
        );
        assert_eq!(
            cholesky_upper_hermitian(&ComplexMatrix::identity(2)).unwrap(),
            ComplexMatrix::identity(2)
        );
    }

    #[test]
    fn two_by_two_by_hand() {
        let a = RealMatrix::from_rows(&[vec![4.0, 2.0], vec![2.0, 5.0]]);
        let b = cholesky_upper(&a).unwrap();
        assert_eq!(b, RealMatrix::from_rows(&[vec![2.0, 1.0], vec![0.0, 2.0]]));
    }

    #[test]
    fn diagonal_hermitian() {
        let a = ComplexMatrix::from_rows(&[vec![c(4.0, 0.0), c(0.0, 0.0)], vec![c(0.0, 0.0), c(9.0, 0.0)]]);
        let u = cholesky_upper_hermitian(&a).unwrap();
        assert_eq!(u[(0, 0)], c(2.0, 0.0));
        assert_eq!(u[(1, 1)], c(3.0, 0.0));
        assert_eq!(u[(0, 1)], c(0.0, 0.0));
    }

    #[test]
    fn complex_two_by_two_reconstructs() {
        let a = ComplexMatrix::from_rows(&[vec![c(2.0, 0.0), c(1.0, -1.0)], vec![c(1.0, 1.0), c(2.0, 0.0)]]);
        let u = cholesky_upper_hermitian(&a).unwrap();
        let back = u.conj_transpose().matmul(&u);
        assert!(back.sub(&a).frobenius_norm() < 1e-12);
        assert_eq!(u[(1, 0)], c(0.0, 0.0));
    }

    #[test]
    fn singular_is_rejected() {
        let a = RealMatrix::from_rows(&[vec![1.0, 1.0], vec![1.0, 1.0]]);
        assert!(matches!(
            cholesky_upper(&a),
            Err(Error::NotPositiveDefinite { index: 1, .. })
        ));
        let neg = RealMatrix::from_diag(&[1.0, -1.0]);
        assert!(matches!(cholesky_upper(&neg), Err(Error::NotPositiveDefinite { .. })));
        let zero = RealMatrix::zeros(2, 2);
        assert!(matches!(
            cholesky_upper(&zero),
            Err(Error::NotPositiveDefinite { index: 0, .. })
        ));
    }

    #[test]
    fn asymmetric_is_rejected() {
        let a = RealMatrix::from_rows(&[vec![2.0, 1.0], vec![0.0, 2.0]]);
        assert!(cholesky_upper(&a).is_err());
    }

    #[test]
    fn solve_trivial_cases() {
        let two = ComplexMatrix::identity(3).scaled(2.0);
        let half = hermitian_solve(&two, &ComplexMatrix::identity(3)).unwrap();
        assert!(half.sub(&ComplexMatrix::identity(3).scaled(0.5)).frobenius_norm() < 1e-15);

        let x = ComplexMatrix::from_rows(&[vec![c(1.0, 2.0), c(-3.0, 0.5)], vec![c(0.0, -1.0), c(4.0, 4.0)]]);
        let y = hermitian_solve(&ComplexMatrix::identity(2), &x).unwrap();
        assert_eq!(y, x);
    }

    #[test]
    fn solve_dimension_mismatch() {
        let r = hermitian_solve(&ComplexMatrix::identity(3), &ComplexMatrix::identity(2));
        assert!(matches!(r, Err(Error::DimensionMismatch(_))));
    }
}
