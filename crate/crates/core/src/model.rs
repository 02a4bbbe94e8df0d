//! Synchronous multiuser multipath link: channel matrices, disturbance
//! covariance, the SINR quadratic form and its evaluation.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::linalg::{hermitian_solve, hermitian_solve_vec, ComplexMatrix, RealMatrix};
use crate::signature::Signature;

/// Relative asymmetry tolerated when wrapping a user-supplied matrix as a
/// [`SinrForm`].
pub const HERMITIAN_RTOL: f64 = 1e-8;

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(x: f64) -> f64 {
    10.0 * x.log10()
}

/// `count` energies evenly spaced over `[lo, hi]` dB, endpoints included.
/// A single interferer sits at `lo`.
pub fn spaced_energies_db(count: usize, lo: f64, hi: f64) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![lo],
        n => (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect(),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SystemConfig {
    /// Signature length `L` in chips.
    pub signature_len: usize,
    /// Resolvable paths `N`.
    pub paths: usize,
    /// Users `K`, including the user of interest.
    pub users: usize,
    /// Per-user transmit energy in dB; index 0 is the user of interest.
    pub energies_db: Vec<f64>,
    /// Linear noise power `σ²`.
    pub noise_variance: f64,
}

impl SystemConfig {
    /// User of interest at `user_db`, the other `users - 1` spaced over
    /// `interferer_db`.
    pub fn with_spaced_energies(
        signature_len: usize,
        paths: usize,
        users: usize,
        user_db: f64,
        interferer_db: (f64, f64),
        noise_variance: f64,
    ) -> Self {
        let mut energies_db = vec![user_db];
        energies_db.extend(spaced_energies_db(
            users.saturating_sub(1),
            interferer_db.0,
            interferer_db.1,
        ));
        Self {
            signature_len,
            paths,
            users,
            energies_db,
            noise_variance,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.signature_len == 0 || self.paths == 0 || self.users == 0 {
            return Err(Error::InvalidConfig("L, N and K must all be at least 1".into()));
        }
        if self.energies_db.len() != self.users {
            return Err(Error::InvalidConfig(format!(
                "{} energies for {} users",
                self.energies_db.len(),
                self.users
            )));
        }
        if self.noise_variance.is_nan() || self.noise_variance <= 0.0 {
            return Err(Error::InvalidConfig("noise variance must be positive".into()));
        }
        Ok(())
    }

    /// Received window length `L + N - 1`.
    pub fn window_len(&self) -> usize {
        self.signature_len + self.paths - 1
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChannelTaps(pub Vec<Complex64>);

impl ChannelTaps {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct UserState {
    pub taps: ChannelTaps,
    pub energy_db: f64,
    pub signature: Signature,
}

/// The SINR matrix `Q = Hᴴ R⁻¹ H` and its real part.
#[derive(Debug, Clone)]
pub struct SinrForm {
    pub q: ComplexMatrix,
    pub q_real: RealMatrix,
}

impl SinrForm {
    /// Wraps a Hermitian matrix, symmetrizing away round-off.
    pub fn from_hermitian(q: ComplexMatrix) -> Result<Self> {
        if !q.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} SINR matrix",
                q.rows(),
                q.cols()
            )));
        }
        let asymmetry = q.relative_asymmetry();
        if asymmetry > HERMITIAN_RTOL {
            return Err(Error::NotHermitian { asymmetry });
        }
        let q = q.hermitianized();
        let q_real = q.real_part();
        Ok(Self { q, q_real })
    }

    /// Real symmetric form with no imaginary part.
    pub fn from_real(q_real: RealMatrix) -> Result<Self> {
        Self::from_hermitian(ComplexMatrix::from_real(&q_real))
    }

    pub fn len(&self) -> usize {
        self.q.rows()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `sᴴ Q s` without the energy factor.
    pub fn objective(&self, s: &Signature) -> Result<f64> {
        if s.len() != self.len() {
            return Err(Error::DimensionMismatch(format!(
                "signature of length {} against a {}x{} form",
                s.len(),
                self.len(),
                self.len()
            )));
        }
        Ok(match s {
            Signature::Binary(b) => {
                let v = self.q_real.quad_form(&b.to_f64());
                debug_assert!((v - self.q.quad_form(&b.to_complex())).abs() <= 1e-9 * (1.0 + v.abs()));
                v
            }
            Signature::Quaternary(q) => self.q.quad_form(&q.to_complex()),
            Signature::Continuous(v) => self.q.quad_form(v),
        })
    }
}

/// Banded `(L + N - 1) × L` convolution matrix: column `j` holds the taps in
/// rows `j..j + N`.
pub fn build_channel_matrix(taps: &ChannelTaps, len: usize) -> ComplexMatrix {
    let n = taps.len();
    let mut h = ComplexMatrix::zeros(len + n - 1, len);
    for j in 0..len {
        for (p, &tap) in taps.0.iter().enumerate() {
            h[(j + p, j)] = tap;
        }
    }
    h
}

fn received_image(user: &UserState, len: usize) -> Result<Vec<Complex64>> {
    if user.signature.len() != len {
        return Err(Error::DimensionMismatch(format!(
            "signature of length {} in a length-{len} system",
            user.signature.len()
        )));
    }
    Ok(build_channel_matrix(&user.taps, len).matvec(&user.signature.to_complex()))
}

/// `σ² I + Σ E_i (H_i s_i)(H_i s_i)ᴴ` over the interferers.
pub fn disturbance_covariance(
    interferers: &[UserState],
    noise_variance: f64,
    len: usize,
    paths: usize,
) -> Result<ComplexMatrix> {
    let dim = len + paths - 1;
    let mut r = ComplexMatrix::identity(dim).scaled(noise_variance);
    for user in interferers {
        if user.taps.len() != paths {
            return Err(Error::DimensionMismatch(format!(
                "interferer with {} taps in an N={paths} system",
                user.taps.len()
            )));
        }
        let image = received_image(user, len)?;
        r.add_outer(&image, db_to_linear(user.energy_db));
    }
    Ok(r)
}

/// Covariance of one user's own inter-symbol interference: the tail of the
/// previous symbol spilling into the first `N - 1` chips of the window and
/// the head of the next symbol entering its last `N - 1` chips.
pub fn isi_covariance(user: &UserState, len: usize) -> Result<ComplexMatrix> {
    let image = received_image(user, len)?;
    let dim = image.len();
    let spill = dim - len;
    let mut prev = vec![Complex64::new(0.0, 0.0); dim];
    let mut next = vec![Complex64::new(0.0, 0.0); dim];
    prev[..spill].copy_from_slice(&image[len..]);
    next[len..].copy_from_slice(&image[..spill]);
    let energy = db_to_linear(user.energy_db);
    let mut c = ComplexMatrix::zeros(dim, dim);
    c.add_outer(&prev, energy);
    c.add_outer(&next, energy);
    Ok(c)
}

/// `Q = Hᴴ R⁻¹ H`, Hermitianized.
pub fn sinr_form(h: &ComplexMatrix, r: &ComplexMatrix) -> Result<SinrForm> {
    if h.rows() != r.rows() {
        return Err(Error::DimensionMismatch(format!(
            "channel with {} rows against a {}x{} covariance",
            h.rows(),
            r.rows(),
            r.cols()
        )));
    }
    let rinv_h = hermitian_solve(r, h)?;
    let q = h.conj_transpose().matmul(&rinv_h).hermitianized();
    let q_real = q.real_part();
    Ok(SinrForm { q, q_real })
}

/// Linear output SINR `E · sᴴ Q s`.
pub fn sinr(s: &Signature, form: &SinrForm, energy_db: f64) -> Result<f64> {
    Ok(db_to_linear(energy_db) * form.objective(s)?)
}

/// Max-SINR receive filter `R⁻¹ H s` (unit scale).
pub fn mmse_filter(r: &ComplexMatrix, h: &ComplexMatrix, s: &Signature) -> Result<Vec<Complex64>> {
    if h.cols() != s.len() {
        return Err(Error::DimensionMismatch(format!(
            "signature of length {} for a channel with {} columns",
            s.len(),
            h.cols()
        )));
    }
    hermitian_solve_vec(r, &h.matvec(&s.to_complex()))
}

/// Hard decision `sgn(Re{wᴴ r})`.
pub fn detect_bit(w: &[Complex64], received: &[Complex64]) -> i8 {
    let stat: f64 = w.iter().zip(received).map(|(a, b)| (a.conj() * b).re).sum();
    if stat < 0.0 {
        -1
    } else {
        1
    }
}

/// `N` i.i.d. circular complex Gaussian taps of variance `1/N` each.
pub fn sample_taps<R: Rng + ?Sized>(rng: &mut R, paths: usize) -> ChannelTaps {
    let sd = (0.5 / paths as f64).sqrt();
    ChannelTaps(
        (0..paths)
            .map(|_| {
                let re: f64 = StandardNormal.sample(rng);
                let im: f64 = StandardNormal.sample(rng);
                Complex64::new(sd * re, sd * im)
            })
            .collect(),
    )
}
