use crate::error::{Error, Result};
use crate::linalg::RealMatrix;
use crate::signature::BinarySignature;

use super::{SearchObserver, SearchStats};

/// Sentinels clamp the integer bounds so an empty interval never overflows.
const LOWER_SENTINEL: f64 = -2.0;
const UPPER_SENTINEL: f64 = 2.0;

/// Per-level quantities of the depth-first walk. Level `k` is filled after
/// levels `k+1..n`, so `delta[k]` and `residual[k]` only depend on entries
/// already fixed.
struct Levels {
    /// `g_kk = b_kk²`
    g_diag: Vec<f64>,
    /// `g_kj = b_kj / b_kk` for `j > k`, row-major upper triangle.
    g: RealMatrix,
    s: Vec<i32>,
    upper: Vec<i32>,
    delta: Vec<f64>,
    residual: Vec<f64>,
}

impl Levels {
    fn new(factor: &RealMatrix) -> Self {
        let n = factor.rows();
        let mut g = RealMatrix::zeros(n, n);
        let mut g_diag = vec![0.0; n];
        for i in 0..n {
            let bii = factor[(i, i)];
            g_diag[i] = bii * bii;
            for j in i + 1..n {
                g[(i, j)] = factor[(i, j)] / bii;
            }
        }
        Self {
            g_diag,
            g,
            s: vec![0; n],
            upper: vec![0; n],
            delta: vec![0.0; n],
            residual: vec![0.0; n],
        }
    }

    /// Sets `UB_k`, `LB_k` and parks `s_k` one below the lower bound.
    fn open(&mut self, k: usize) {
        let half_width = (self.residual[k].max(0.0) / self.g_diag[k]).sqrt();
        let ub = (half_width - self.delta[k]).floor().clamp(LOWER_SENTINEL, 1.0);
        let lb = (-half_width - self.delta[k]).ceil().clamp(-1.0, UPPER_SENTINEL);
        self.upper[k] = ub as i32;
        self.s[k] = lb as i32 - 1;
    }

    /// Moves from level `k + 1` down to `k`.
    fn descend(&mut self, k: usize) {
        let n = self.s.len();
        let mut delta = 0.0;
        for j in k + 1..n {
            delta += self.g[(k, j)] * f64::from(self.s[j]);
        }
        self.delta[k] = delta;
        let above = self.delta[k + 1] + f64::from(self.s[k + 1]);
        self.residual[k] = self.residual[k + 1] - self.g_diag[k + 1] * above * above;
    }
}

/// Fixed-radius enumeration of every `s ∈ {±1}^n` with `‖B s‖² ≤ radius`,
/// keeping the one with the smallest `sᵀ W s`.
///
/// Levels are visited from `n - 1` down to `0`; at each level the candidate
/// values run upward from the lower bound, skipping zero. The incumbent
/// starts at `init` with metric `radius` and is replaced whenever a
/// candidate's metric is `<=` the incumbent's, so among equal metrics the
/// last one found wins.
pub(super) fn enumerate<O: SearchObserver>(
    w: &RealMatrix,
    factor: &RealMatrix,
    radius: f64,
    init: &BinarySignature,
    observer: &mut O,
) -> Result<(BinarySignature, SearchStats)> {
    let n = w.rows();
    let mut lv = Levels::new(factor);
    let mut best: Vec<f64> = init.to_f64();
    let mut metric = radius;
    let mut stats = SearchStats {
        radius,
        ..SearchStats::default()
    };

    let top = n - 1;
    let mut k = top;
    lv.delta[k] = 0.0;
    lv.residual[k] = radius;
    lv.open(k);

    let mut point = vec![0.0; n];
    loop {
        lv.s[k] += 1;
        if lv.s[k] == 0 {
            lv.s[k] = 1;
        }
        if lv.s[k] > lv.upper[k] {
            if k == top {
                break;
            }
            k += 1;
            continue;
        }
        stats.nodes_visited += 1;
        if k == 0 {
            for (p, &v) in point.iter_mut().zip(&lv.s) {
                *p = f64::from(v);
            }
            let m = w.quad_form(&point);
            stats.candidates_found += 1;
            observer.on_candidate(&lv.s, m, radius);
            if m <= metric {
                metric = m;
                best.copy_from_slice(&point);
            }
            continue;
        }
        k -= 1;
        lv.descend(k);
        observer.on_descend(k, lv.residual[k], lv.residual[k + 1]);
        lv.open(k);
    }

    if stats.candidates_found == 0 {
        return Err(Error::InternalInvariantViolation(format!(
            "no candidate inside radius {radius:e} (n = {n})"
        )));
    }
    let winner = BinarySignature::from_signs(&best).canonicalized();
    stats.best_metric = w.quad_form(&winner.to_f64());
    Ok((winner, stats))
}
