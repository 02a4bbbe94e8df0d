#![allow(dead_code)]

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use sigforge::linalg::{ComplexMatrix, RealMatrix};
use sigforge::model::{
    build_channel_matrix, disturbance_covariance, sample_taps, sinr_form, spaced_energies_db, SinrForm, UserState,
};
use sigforge::signature::{BinarySignature, QuaternarySignature, Signature};
use sigforge::sim::Alphabet;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gauss<R: Rng>(rng: &mut R) -> f64 {
    StandardNormal.sample(rng)
}

pub fn cgauss<R: Rng>(rng: &mut R) -> Complex64 {
    Complex64::new(gauss(rng), gauss(rng))
}

/// SINR form of user 1 in a random system with `interferers` interferers.
pub fn model_form<R: Rng>(rng: &mut R, len: usize, paths: usize, interferers: usize, alphabet: Alphabet) -> SinrForm {
    let taps = sample_taps(rng, paths);
    let others: Vec<UserState> = spaced_energies_db(interferers, 8.0, 11.0)
        .into_iter()
        .map(|energy_db| {
            let taps = sample_taps(rng, paths);
            let signature = match alphabet {
                Alphabet::Binary => Signature::Binary(BinarySignature::random(rng, len)),
                Alphabet::Quaternary => Signature::Quaternary(QuaternarySignature::random(rng, len)),
            };
            UserState {
                taps,
                energy_db,
                signature,
            }
        })
        .collect();
    let h = build_channel_matrix(&taps, len);
    let r = disturbance_covariance(&others, 1.0, len, paths).unwrap();
    sinr_form(&h, &r).unwrap()
}

/// Dense random real symmetric matrix.
pub fn random_symmetric<R: Rng>(rng: &mut R, n: usize) -> RealMatrix {
    let a: Vec<f64> = (0..n * n).map(|_| gauss(rng)).collect();
    let mut data = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            data[i * n + j] = 0.5 * (a[i * n + j] + a[j * n + i]);
        }
    }
    RealMatrix::from_vec(n, n, data).unwrap()
}

/// `AᵀA + n·I` for a Gaussian `A`.
pub fn random_spd<R: Rng>(rng: &mut R, n: usize) -> RealMatrix {
    let data: Vec<f64> = (0..n * n).map(|_| gauss(rng)).collect();
    let a = RealMatrix::from_vec(n, n, data).unwrap();
    let mut out = a.transpose().matmul(&a).as_slice().to_vec();
    for i in 0..n {
        out[i * n + i] += n as f64;
    }
    RealMatrix::from_vec(n, n, out).unwrap()
}

/// `AᴴA + n·I` for a complex Gaussian `A`.
pub fn random_hpd<R: Rng>(rng: &mut R, n: usize) -> ComplexMatrix {
    let data: Vec<Complex64> = (0..n * n).map(|_| cgauss(rng)).collect();
    let a = ComplexMatrix::from_vec(n, n, data).unwrap();
    let mut m = a.conj_transpose().matmul(&a);
    m.add_diagonal(n as f64);
    m.hermitianized()
}

/// Random Hermitian, possibly indefinite.
pub fn random_hermitian<R: Rng>(rng: &mut R, n: usize) -> ComplexMatrix {
    let data: Vec<Complex64> = (0..n * n).map(|_| cgauss(rng)).collect();
    ComplexMatrix::from_vec(n, n, data).unwrap().hermitianized()
}

/// All objective values of `sᵀ Q s` over sign vectors with `s_0 = +1`,
/// visited in binary-reflected Gray-code order with O(L) updates.
pub fn gray_code_values(q: &RealMatrix) -> Vec<(Vec<i8>, f64)> {
    let n = q.rows();
    let mut s = vec![1i8; n];
    let mut qs: Vec<f64> = (0..n).map(|i| (0..n).map(|j| q[(i, j)]).sum()).collect();
    let mut value: f64 = qs.iter().sum();
    let mut out = vec![(s.clone(), value)];
    if n == 1 {
        return out;
    }
    let free = n - 1;
    for step in 1u64..(1u64 << free) {
        let bit = step.trailing_zeros() as usize;
        let k = 1 + bit;
        let old = s[k] as f64;
        // flipping s_k changes value by -4 s_k (Qs)_k + 4 q_kk
        value += -4.0 * old * qs[k] + 4.0 * q[(k, k)];
        for (i, v) in qs.iter_mut().enumerate() {
            *v -= 2.0 * old * q[(i, k)];
        }
        s[k] = -s[k];
        out.push((s.clone(), value));
    }
    out
}

/// Brute-force maximum over `{±1}^L` and whether it is unique up to sign,
/// using a relative gap of `gap`.
pub fn brute_binary(q: &RealMatrix, gap: f64) -> (Vec<i8>, f64, bool) {
    let mut all = gray_code_values(q);
    all.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap());
    let best = all[0].clone();
    let unique = all.len() == 1 || best.1 - all[1].1 > gap * best.1.abs().max(1.0);
    (best.0, best.1, unique)
}

/// All `4^(L-1)` quaternary vectors with first entry `1`, by base-4 counting.
pub fn brute_quaternary(q: &ComplexMatrix) -> (Vec<Complex64>, f64) {
    let n = q.rows();
    let units = [
        Complex64::new(1.0, 0.0),
        Complex64::new(0.0, 1.0),
        Complex64::new(-1.0, 0.0),
        Complex64::new(0.0, -1.0),
    ];
    let mut best = (Vec::new(), f64::NEG_INFINITY);
    for code in 0u64..4u64.pow((n - 1) as u32) {
        let mut c = code;
        let mut s = vec![units[0]; n];
        for e in s.iter_mut().skip(1) {
            *e = units[(c % 4) as usize];
            c /= 4;
        }
        let v = naive_cquad(q, &s);
        if v > best.1 {
            best = (s, v);
        }
    }
    best
}

pub fn naive_quad(q: &RealMatrix, x: &[f64]) -> f64 {
    let mut acc = 0.0;
    for i in 0..x.len() {
        for j in 0..x.len() {
            acc += x[i] * q[(i, j)] * x[j];
        }
    }
    acc
}

pub fn naive_cquad(q: &ComplexMatrix, x: &[Complex64]) -> f64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..x.len() {
        for j in 0..x.len() {
            acc += x[i].conj() * q[(i, j)] * x[j];
        }
    }
    acc.re
}
