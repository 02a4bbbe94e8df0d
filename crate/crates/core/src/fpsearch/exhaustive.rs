use crate::error::{Error, Result};
use crate::linalg::RealMatrix;
use crate::signature::BinarySignature;

/// Largest `L` accepted by the binary brute force.
pub const EXHAUSTIVE_BINARY_MAX_LEN: usize = 24;

struct Walk<'a> {
    q: &'a RealMatrix,
    s: Vec<f64>,
    best_value: f64,
    best: Vec<f64>,
}

impl Walk<'_> {
    /// `partial` is `Σ_{i,j<depth} q_ij s_i s_j`.
    fn visit(&mut self, depth: usize, partial: f64) {
        let n = self.s.len();
        if depth == n {
            if partial > self.best_value {
                self.best_value = partial;
                self.best.copy_from_slice(&self.s);
            }
            return;
        }
        let cross: f64 = (0..depth).map(|j| self.q[(depth, j)] * self.s[j]).sum();
        for sign in [-1.0, 1.0] {
            self.s[depth] = sign;
            self.visit(depth + 1, partial + self.q[(depth, depth)] + 2.0 * sign * cross);
        }
    }
}

/// Brute-force `argmax sᵀ Q s` over `{±1}^n`. Only signatures with a
/// leading `+1` are visited, in lexicographic order with `-1 < +1`, so ties
/// resolve to the lexicographically smallest canonical signature.
pub fn exhaustive_real(q: &RealMatrix) -> Result<(BinarySignature, f64)> {
    let n = q.rows();
    if !q.is_square() || n == 0 {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} objective matrix",
            q.rows(),
            q.cols()
        )));
    }
    if n > EXHAUSTIVE_BINARY_MAX_LEN {
        return Err(Error::TooLarge {
            len: n,
            max: EXHAUSTIVE_BINARY_MAX_LEN,
        });
    }
    let mut walk = Walk {
        q,
        s: vec![1.0; n],
        best_value: f64::NEG_INFINITY,
        best: vec![1.0; n],
    };
    walk.visit(1, q[(0, 0)]);
    let winner = BinarySignature::from_signs(&walk.best);
    let value = super::objective_real(q, &winner);
    Ok((winner, value))
}
