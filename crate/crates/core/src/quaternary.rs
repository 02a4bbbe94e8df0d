//! Quaternary signatures via the quaternary-to-binary reduction.
//!
//! Writing `s = ½(1 - j)c` maps `{±1, ±j}^L` one-to-one onto
//! `c ∈ {±1 ± j}^L`, so `c̄ = [Re c; Im c]` is a binary vector of length
//! `2L`. With `Q = Uᴴ U` and `M = [[U_R, -U_I], [U_I, U_R]]`,
//! `sᴴ Q s = c̄ᵀ Q̄ c̄` for `Q̄ = ½ Mᵀ M`, and the binary search runs on `Q̄`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fpsearch::{fp_search_real, FpConfig, SearchStats};
use crate::linalg::{cholesky_upper_hermitian, hermitian_max_eigenpair, ComplexMatrix, RealMatrix};
use crate::model::SinrForm;
use crate::signature::BinarySignature;
pub use crate::signature::{QuadUnit, QuaternarySignature};

/// Largest `L` accepted by the quaternary brute force.
pub const EXHAUSTIVE_QUATERNARY_MAX_LEN: usize = 12;

const JITTER_RELATIVE: f64 = 1e-10;
const JITTER_ESCALATIONS: usize = 3;

/// The real `2L × 2L` matrix `Q̄` whose binary quadratic form reproduces
/// `sᴴ Q s`.
#[derive(Debug, Clone)]
pub struct EquivalentBinaryProblem {
    pub q_bar: RealMatrix,
}

/// `c = (1 + j) s`, split into real and imaginary sign vectors.
pub fn quaternary_to_c(s: &QuaternarySignature) -> (BinarySignature, BinarySignature) {
    let (re, im): (Vec<i8>, Vec<i8>) = s
        .entries()
        .iter()
        .map(|u| match u {
            QuadUnit::One => (1, 1),
            QuadUnit::J => (-1, 1),
            QuadUnit::MinusOne => (-1, -1),
            QuadUnit::MinusJ => (1, -1),
        })
        .unzip();
    (
        BinarySignature::new(re).expect("signs"),
        BinarySignature::new(im).expect("signs"),
    )
}

/// `s = ½(1 - j)(c_R + j c_I)`.
pub fn c_to_quaternary(c_re: &BinarySignature, c_im: &BinarySignature) -> Result<QuaternarySignature> {
    if c_re.len() != c_im.len() {
        return Err(Error::DimensionMismatch(format!(
            "real part of length {} with imaginary part of length {}",
            c_re.len(),
            c_im.len()
        )));
    }
    Ok(QuaternarySignature::new(
        c_re.entries()
            .iter()
            .zip(c_im.entries())
            .map(|(&r, &i)| match (r, i) {
                (1, 1) => QuadUnit::One,
                (-1, 1) => QuadUnit::J,
                (-1, -1) => QuadUnit::MinusOne,
                _ => QuadUnit::MinusJ,
            })
            .collect(),
    ))
}

/// Stacked `c̄ = [c_R; c_I]`.
pub fn stacked_c(s: &QuaternarySignature) -> BinarySignature {
    let (re, im) = quaternary_to_c(s);
    re.concat(&im)
}

/// Inverse of [`stacked_c`].
pub fn from_stacked_c(c_bar: &BinarySignature) -> Result<QuaternarySignature> {
    if !c_bar.len().is_multiple_of(2) {
        return Err(Error::DimensionMismatch(format!(
            "stacked vector of odd length {}",
            c_bar.len()
        )));
    }
    let (re, im) = c_bar.split_at(c_bar.len() / 2);
    c_to_quaternary(&re, &im)
}

/// Cholesky of `Q` with relative diagonal jitter escalated ×10 up to three
/// times when `Q` is numerically semidefinite.
fn jittered_factor(q: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = q.rows();
    let scale = if q.trace_re() > 0.0 {
        q.trace_re() / n as f64
    } else {
        q.max_abs().max(1e-300)
    };
    let mut result = cholesky_upper_hermitian(q);
    let mut jitter = JITTER_RELATIVE * scale;
    for _ in 0..=JITTER_ESCALATIONS {
        match result {
            Ok(u) => return Ok(u),
            Err(Error::NotPositiveDefinite { .. }) => {
                let mut shifted = q.clone();
                shifted.add_diagonal(jitter);
                result = cholesky_upper_hermitian(&shifted);
                jitter *= 10.0;
            }
            Err(e) => return Err(e),
        }
    }
    result
}

/// `Q̄ = ½ Mᵀ M` from the Cholesky factor of `Q`.
pub fn build_equivalent_binary(form: &SinrForm) -> Result<EquivalentBinaryProblem> {
    let u = jittered_factor(&form.q)?;
    let m = u.real_embedding();
    let q_bar = m.transpose().matmul(&m).scaled(0.5);
    // exact symmetry for the downstream Cholesky
    let n = q_bar.rows();
    let mut sym = q_bar.clone();
    for i in 0..n {
        for j in i + 1..n {
            let avg = 0.5 * (q_bar[(i, j)] + q_bar[(j, i)]);
            sym[(i, j)] = avg;
            sym[(j, i)] = avg;
        }
    }
    Ok(EquivalentBinaryProblem { q_bar: sym })
}

pub fn quaternary_objective(form: &SinrForm, s: &QuaternarySignature) -> f64 {
    form.q.quad_form(&s.to_complex())
}

/// Optimal quaternary signature, canonicalized so the first entry is `1`.
/// Stats are those of the length-`2L` binary search.
pub fn fp_search_quaternary(form: &SinrForm, cfg: &FpConfig) -> Result<(QuaternarySignature, SearchStats)> {
    let problem = build_equivalent_binary(form)?;
    let (c_bar, stats) = fp_search_real(&problem.q_bar, cfg)?;
    let s = from_stacked_c(&c_bar)?.canonicalized();
    Ok((s, stats))
}

struct Walk<'a> {
    q: &'a ComplexMatrix,
    s: Vec<QuadUnit>,
    best_value: f64,
    best: Vec<QuadUnit>,
}

impl Walk<'_> {
    /// `partial` is `Re Σ_{i,j<depth} conj(s_i) q_ij s_j`.
    fn visit(&mut self, depth: usize, partial: f64) {
        let n = self.s.len();
        if depth == n {
            if partial > self.best_value {
                self.best_value = partial;
                self.best.copy_from_slice(&self.s);
            }
            return;
        }
        let mut cross = Complex64::new(0.0, 0.0);
        for j in 0..depth {
            cross += self.q[(depth, j)] * self.s[j].to_complex();
        }
        let diag = self.q[(depth, depth)].re;
        for unit in QuadUnit::ALL {
            self.s[depth] = unit;
            let add = diag + 2.0 * (unit.to_complex().conj() * cross).re;
            self.visit(depth + 1, partial + add);
        }
    }
}

/// Brute-force `argmax sᴴ Q s` over `{±1, ±j}^L`, visiting only signatures
/// whose first entry is `1`; ties go to the lexicographically smallest in
/// the unit order `1 < j < -1 < -j`.
pub fn exhaustive_quaternary(form: &SinrForm) -> Result<(QuaternarySignature, f64)> {
    let n = form.len();
    if n == 0 {
        return Err(Error::DimensionMismatch("empty SINR form".into()));
    }
    if n > EXHAUSTIVE_QUATERNARY_MAX_LEN {
        return Err(Error::TooLarge {
            len: n,
            max: EXHAUSTIVE_QUATERNARY_MAX_LEN,
        });
    }
    let mut walk = Walk {
        q: &form.q,
        s: vec![QuadUnit::One; n],
        best_value: f64::NEG_INFINITY,
        best: vec![QuadUnit::One; n],
    };
    walk.visit(1, form.q[(0, 0)].re);
    let s = QuaternarySignature::new(walk.best);
    let value = quaternary_objective(form, &s);
    Ok((s, value))
}

/// Unit of `{1, j, -1, -j}` closest in angle to `z`; exact ties go to the
/// earlier unit in that order.
fn nearest_unit(z: Complex64) -> QuadUnit {
    let mut best = QuadUnit::One;
    let mut score = f64::NEG_INFINITY;
    for unit in QuadUnit::ALL {
        let proj = (unit.to_complex().conj() * z).re;
        if proj > score {
            score = proj;
            best = unit;
        }
    }
    best
}

/// Entrywise quantization of the canonical dominant complex eigenvector of
/// `Q` onto the quaternary alphabet.
///
/// Quantizing each entry to its angle-nearest unit is the same as taking
/// the signs of the real and imaginary parts of `e^{jπ/4} v` and mapping
/// back through `s = ½(1 - j)c`.
pub fn quantize_quaternary(form: &SinrForm) -> Result<QuaternarySignature> {
    let (_, v) = hermitian_max_eigenpair(&form.q)?;
    Ok(QuaternarySignature::new(v.into_iter().map(nearest_unit).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bs(v: &[i8]) -> BinarySignature {
        BinarySignature::new(v.to_vec()).unwrap()
    }

    fn qs(units: &[QuadUnit]) -> QuaternarySignature {
        QuaternarySignature::new(units.to_vec())
    }

    use QuadUnit::{MinusJ, MinusOne, One, J};

    #[test]
    fn transform_examples() {
        assert_eq!(quaternary_to_c(&qs(&[One])), (bs(&[1]), bs(&[1])));
        assert_eq!(quaternary_to_c(&qs(&[J])), (bs(&[-1]), bs(&[1])));
        assert_eq!(quaternary_to_c(&qs(&[MinusOne, MinusJ])), (bs(&[-1, 1]), bs(&[-1, -1])));
    }

    #[test]
    fn transform_matches_complex_multiply() {
        let one_plus_j = Complex64::new(1.0, 1.0);
        for u in QuadUnit::ALL {
            let c = one_plus_j * u.to_complex();
            let (re, im) = quaternary_to_c(&qs(&[u]));
            assert_eq!(f64::from(re.entries()[0]), c.re);
            assert_eq!(f64::from(im.entries()[0]), c.im);
        }
    }

    #[test]
    fn transform_round_trip() {
        let s = qs(&[One, J, MinusOne, MinusJ, J]);
        let (re, im) = quaternary_to_c(&s);
        assert_eq!(c_to_quaternary(&re, &im).unwrap(), s);
        assert_eq!(from_stacked_c(&stacked_c(&s)).unwrap(), s);
    }

    #[test]
    fn identity_equivalent() {
        let form = SinrForm::from_hermitian(ComplexMatrix::identity(3)).unwrap();
        let p = build_equivalent_binary(&form).unwrap();
        assert!(p.q_bar.sub(&RealMatrix::identity(6).scaled(0.5)).max_abs() < 1e-14);
    }

    #[test]
    fn one_by_one_equivalent() {
        let form = SinrForm::from_real(RealMatrix::from_diag(&[2.0])).unwrap();
        let p = build_equivalent_binary(&form).unwrap();
        assert!(p.q_bar.sub(&RealMatrix::identity(2)).max_abs() < 1e-14);
        let s = qs(&[J]);
        let c_bar = stacked_c(&s);
        assert_eq!(c_bar, bs(&[-1, 1]));
        assert!((quaternary_objective(&form, &s) - 2.0).abs() < 1e-14);
        assert!((p.q_bar.quad_form(&c_bar.to_f64()) - 2.0).abs() < 1e-14);
    }

    #[test]
    fn semidefinite_gets_jitter() {
        let v = [Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0)];
        let form = SinrForm::from_hermitian(ComplexMatrix::outer(&v)).unwrap();
        let p = build_equivalent_binary(&form).unwrap();
        let s = qs(&[One, J]);
        let lhs = quaternary_objective(&form, &s);
        let rhs = p.q_bar.quad_form(&stacked_c(&s).to_f64());
        assert!((lhs - rhs).abs() <= 1e-9 * lhs.abs().max(1.0));
    }

    #[test]
    fn rank_one_quaternary_optimum() {
        let v = qs(&[One, MinusJ, J, MinusOne]);
        let form = SinrForm::from_hermitian(ComplexMatrix::outer(&v.to_complex())).unwrap();
        let (s, stats) = fp_search_quaternary(&form, &FpConfig::default()).unwrap();
        assert_eq!(s, v);
        assert!((quaternary_objective(&form, &s) - 16.0).abs() < 1e-9);
        assert!(stats.candidates_found >= 1);
    }

    #[test]
    fn constant_objective_quaternary() {
        let form = SinrForm::from_hermitian(ComplexMatrix::identity(3)).unwrap();
        let (s, _) = fp_search_quaternary(&form, &FpConfig::default()).unwrap();
        assert_eq!(s.entries()[0], One);
        assert!((quaternary_objective(&form, &s) - 3.0).abs() < 1e-9);
        let (e, v) = exhaustive_quaternary(&form).unwrap();
        assert_eq!(e, qs(&[One, One, One]));
        assert!((v - 3.0).abs() < 1e-12);
    }

    #[test]
    fn exhaustive_guard() {
        let form = SinrForm::from_hermitian(ComplexMatrix::identity(EXHAUSTIVE_QUATERNARY_MAX_LEN + 1)).unwrap();
        assert!(matches!(exhaustive_quaternary(&form), Err(Error::TooLarge { .. })));
    }

    #[test]
    fn quantize_real_positive_vector() {
        let v = [1.0, 2.0, 0.5];
        let form = SinrForm::from_real(RealMatrix::outer(&v)).unwrap();
        assert_eq!(quantize_quaternary(&form).unwrap(), qs(&[One, One, One]));
    }

    #[test]
    fn quantize_recovers_quaternary_orbit() {
        let v = qs(&[J, One, MinusJ, MinusOne, J]);
        let form = SinrForm::from_hermitian(ComplexMatrix::outer(&v.to_complex())).unwrap();
        let q = quantize_quaternary(&form).unwrap();
        assert_eq!(q.canonicalized(), v.canonicalized());
    }

    #[test]
    fn nearest_unit_ties() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert_eq!(nearest_unit(Complex64::new(h, h)), One);
        assert_eq!(nearest_unit(Complex64::new(-h, h)), J);
        assert_eq!(nearest_unit(Complex64::new(0.9, -0.1)), One);
        assert_eq!(nearest_unit(Complex64::new(-0.1, -0.9)), MinusJ);
    }
}
