//! Monte Carlo experiments: SINR loss against the number of interferers,
//! sequential multiuser adaptation, and search complexity.
//!
//! Every trial draws from its own ChaCha stream keyed by
//! `(master seed, sweep point, trial)`, so trials are independent jobs and
//! results do not depend on scheduling. Records are always reduced in trial
//! index order.

mod aggregate;
mod config;

pub use aggregate::{aggregate, AggregateRecord};
pub use config::{Algorithm, Alphabet, ExperimentConfig, Scenario, INTERFERER_ENERGY_DB, USER_ENERGY_DB};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fpsearch::{exhaustive_binary, fp_search_binary, quantize_rank1, SearchStats};
use crate::linalg::{hermitian_max_eigenpair, max_eigenpair, ComplexMatrix};
use crate::model::{
    build_channel_matrix, db_to_linear, disturbance_covariance, isi_covariance, linear_to_db, sample_taps, sinr_form,
    spaced_energies_db, ChannelTaps, SinrForm, UserState,
};
use crate::quaternary::{exhaustive_quaternary, fp_search_quaternary, quantize_quaternary};
use crate::signature::{BinarySignature, QuaternarySignature, Signature};

/// One algorithm's outcome in one trial.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialRecord {
    pub scenario: Scenario,
    pub alphabet: Alphabet,
    pub algorithm: Algorithm,
    /// Interferer count, adaptation cycle, or user count, by scenario.
    pub sweep_point: usize,
    pub trial: usize,
    pub sinr: f64,
    pub sinr_db: f64,
    pub loss_db: f64,
    pub candidates: Option<u64>,
    pub nodes: Option<u64>,
}

/// Average search effort for one user count.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexityRow {
    pub users: usize,
    pub mean_candidates: f64,
    pub mean_nodes: f64,
    pub max_candidates: u64,
    /// `2^L`
    pub exhaustive_candidates: u64,
}

#[derive(Debug, Clone, Default)]
pub struct ExperimentResult {
    pub records: Vec<TrialRecord>,
    pub aggregates: Vec<AggregateRecord>,
    /// Filled by the complexity scenario only.
    pub complexity: Vec<ComplexityRow>,
}

/// RNG for one trial at one sweep point.
pub fn trial_rng(seed: u64, point: usize, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((point as u64) << 32) | trial as u64);
    rng
}

pub fn random_signature<R: Rng + ?Sized>(rng: &mut R, alphabet: Alphabet, len: usize) -> Signature {
    match alphabet {
        Alphabet::Binary => Signature::Binary(BinarySignature::random(rng, len)),
        Alphabet::Quaternary => Signature::Quaternary(QuaternarySignature::random(rng, len)),
    }
}

/// A designed signature plus search statistics where applicable.
#[derive(Debug, Clone)]
pub struct Design {
    pub signature: Signature,
    pub stats: Option<SearchStats>,
}

/// Runs one design algorithm on `form`. Eigenvector designs are scaled by
/// `√L` so their energy matches a unit-modulus signature.
pub fn design(
    algorithm: Algorithm,
    alphabet: Alphabet,
    form: &SinrForm,
    fp: &crate::fpsearch::FpConfig,
) -> Result<Design> {
    let len = form.len();
    let scale = (len as f64).sqrt();
    let (signature, stats) = match (algorithm, alphabet) {
        (Algorithm::RealMaxEv, _) => {
            let (_, v) = max_eigenpair(&form.q_real)?;
            let v = v.iter().map(|&x| num_complex::Complex64::new(scale * x, 0.0)).collect();
            (Signature::Continuous(v), None)
        }
        (Algorithm::ComplexMaxEv, _) => {
            let (_, v) = hermitian_max_eigenpair(&form.q)?;
            (Signature::Continuous(v.iter().map(|z| z * scale).collect()), None)
        }
        (Algorithm::Exhaustive, Alphabet::Binary) => (Signature::Binary(exhaustive_binary(form)?.0), None),
        (Algorithm::Exhaustive, Alphabet::Quaternary) => (Signature::Quaternary(exhaustive_quaternary(form)?.0), None),
        (Algorithm::Quantized, Alphabet::Binary) => (Signature::Binary(quantize_rank1(form)?), None),
        (Algorithm::Quantized, Alphabet::Quaternary) => (Signature::Quaternary(quantize_quaternary(form)?), None),
        (Algorithm::FpSearch, Alphabet::Binary) => {
            let (s, stats) = fp_search_binary(form, fp)?;
            (Signature::Binary(s), Some(stats))
        }
        (Algorithm::FpSearch, Alphabet::Quaternary) => {
            let (s, stats) = fp_search_quaternary(form, fp)?;
            (Signature::Quaternary(s), Some(stats))
        }
    };
    Ok(Design { signature, stats })
}

/// One user's view of the system: its channel, its energy and the
/// disturbance covariance built from everybody else.
struct Link {
    channel: ComplexMatrix,
    taps: ChannelTaps,
    energy_db: f64,
    covariance: ComplexMatrix,
    form: SinrForm,
}

impl Link {
    fn new(taps: &ChannelTaps, energy_db: f64, others: &[UserState], cfg: &ExperimentConfig) -> Result<Self> {
        let sys = &cfg.system;
        let channel = build_channel_matrix(taps, sys.signature_len);
        let covariance = disturbance_covariance(others, sys.noise_variance, sys.signature_len, sys.paths)?;
        let form = sinr_form(&channel, &covariance)?;
        Ok(Self {
            channel,
            taps: taps.clone(),
            energy_db,
            covariance,
            form,
        })
    }

    /// Linear SINR of `s`, optionally against a covariance that includes the
    /// user's own inter-symbol interference.
    fn evaluate(&self, s: &Signature, include_isi: bool) -> Result<f64> {
        if !include_isi {
            return crate::model::sinr(s, &self.form, self.energy_db);
        }
        let me = UserState {
            taps: self.taps.clone(),
            energy_db: self.energy_db,
            signature: s.clone(),
        };
        let with_isi = self.covariance.add(&isi_covariance(&me, s.len())?);
        let form = sinr_form(&self.channel, &with_isi)?;
        Ok(db_to_linear(self.energy_db) * form.objective(s)?)
    }
}

fn record(
    cfg: &ExperimentConfig,
    algorithm: Algorithm,
    point: usize,
    trial: usize,
    sinr: f64,
    benchmark: f64,
    stats: Option<SearchStats>,
) -> TrialRecord {
    let sinr_db = linear_to_db(sinr);
    TrialRecord {
        scenario: cfg.scenario,
        alphabet: cfg.alphabet,
        algorithm,
        sweep_point: point,
        trial,
        sinr,
        sinr_db,
        loss_db: linear_to_db(benchmark) - sinr_db,
        candidates: stats.map(|s| s.candidates_found),
        nodes: stats.map(|s| s.nodes_visited),
    }
}

fn in_pool<T: Send>(threads: Option<usize>, job: impl FnOnce() -> T + Send) -> Result<T> {
    match threads {
        None => Ok(job()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::InvalidConfig(format!("thread pool: {e}")))?;
            Ok(pool.install(job))
        }
    }
}

/// One single-user trial with `interferers` random interferers: every
/// selected algorithm designs user 1's signature against the same draw.
pub fn single_user_trial(
    cfg: &ExperimentConfig,
    point_index: usize,
    interferers: usize,
    trial: usize,
) -> Result<Vec<TrialRecord>> {
    let sys = &cfg.system;
    let len = sys.signature_len;
    let mut rng = trial_rng(cfg.seed, point_index, trial);
    let own_taps = sample_taps(&mut rng, sys.paths);
    let energies = spaced_energies_db(interferers, cfg.interferer_energy_db.0, cfg.interferer_energy_db.1);
    let others: Vec<UserState> = energies
        .into_iter()
        .map(|energy_db| {
            let taps = sample_taps(&mut rng, sys.paths);
            let signature = random_signature(&mut rng, cfg.alphabet, len);
            UserState {
                taps,
                energy_db,
                signature,
            }
        })
        .collect();
    let link = Link::new(&own_taps, cfg.user_energy_db, &others, cfg)?;

    let bench = design(
        Algorithm::benchmark_for(cfg.alphabet),
        cfg.alphabet,
        &link.form,
        &cfg.fp,
    )?;
    let bench_sinr = link.evaluate(&bench.signature, cfg.include_isi)?;
    let point = match cfg.scenario {
        Scenario::ComplexityTable => interferers + 1,
        _ => interferers,
    };
    cfg.algorithms
        .iter()
        .map(|&alg| {
            let d = design(alg, cfg.alphabet, &link.form, &cfg.fp)?;
            let s = link.evaluate(&d.signature, cfg.include_isi)?;
            Ok(record(cfg, alg, point, trial, s, bench_sinr, d.stats))
        })
        .collect()
}

fn run_points(cfg: &ExperimentConfig, interferer_counts: &[usize]) -> Result<Vec<TrialRecord>> {
    let jobs: Vec<(usize, usize, usize)> = interferer_counts
        .iter()
        .enumerate()
        .flat_map(|(p, &m)| (0..cfg.trials).map(move |t| (p, m, t)))
        .collect();
    let chunks = in_pool(cfg.threads, || {
        jobs.par_iter()
            .map(|&(p, m, t)| single_user_trial(cfg, p, m, t))
            .collect::<Result<Vec<_>>>()
    })??;
    Ok(chunks.into_iter().flatten().collect())
}

/// SINR loss against the interferer count.
pub fn run_single_user_sweep(cfg: &ExperimentConfig) -> Result<ExperimentResult> {
    cfg.validate()?;
    if cfg.scenario != Scenario::SingleUserSweep {
        return Err(Error::InvalidConfig("not a single-user sweep".into()));
    }
    let records = run_points(cfg, &cfg.sweep)?;
    let aggregates = aggregate(&records);
    Ok(ExperimentResult {
        records,
        aggregates,
        complexity: Vec::new(),
    })
}

/// One SINR evaluation around a user's own update.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UpdateStep {
    pub cycle: usize,
    pub user: usize,
    /// SINR of the previous signature under the covariance seen at update time.
    pub sinr_before: f64,
    /// SINR of the new signature under the same covariance.
    pub sinr_after: f64,
}

#[derive(Debug, Clone)]
pub struct AdaptationTrace {
    pub algorithm: Algorithm,
    /// User 1's record after each full cycle.
    pub cycle_records: Vec<TrialRecord>,
    pub steps: Vec<UpdateStep>,
    pub final_signatures: Vec<Signature>,
}

/// One adaptation trial: fixed channels, shared random initial signatures,
/// then `cycles` user-after-user update passes for each algorithm.
pub fn adaptation_trial(cfg: &ExperimentConfig, trial: usize) -> Result<Vec<AdaptationTrace>> {
    let sys = &cfg.system;
    let len = sys.signature_len;
    let users = sys.users;
    let mut rng = trial_rng(cfg.seed, 0, trial);
    let taps: Vec<ChannelTaps> = (0..users).map(|_| sample_taps(&mut rng, sys.paths)).collect();
    let initial: Vec<Signature> = (0..users)
        .map(|_| random_signature(&mut rng, cfg.alphabet, len))
        .collect();

    let others_of = |k: usize, sigs: &[Signature]| -> Vec<UserState> {
        (0..users)
            .filter(|&i| i != k)
            .map(|i| UserState {
                taps: taps[i].clone(),
                energy_db: sys.energies_db[i],
                signature: sigs[i].clone(),
            })
            .collect()
    };

    cfg.algorithms
        .iter()
        .map(|&alg| {
            let mut sigs = initial.clone();
            let mut steps = Vec::with_capacity(cfg.cycles * users);
            let mut cycle_records = Vec::with_capacity(cfg.cycles);
            for cycle in 1..=cfg.cycles {
                let mut own_stats = None;
                for k in 0..users {
                    let link = Link::new(&taps[k], sys.energies_db[k], &others_of(k, &sigs), cfg)?;
                    let before = link.evaluate(&sigs[k], false)?;
                    let d = design(alg, cfg.alphabet, &link.form, &cfg.fp)?;
                    let after = link.evaluate(&d.signature, false)?;
                    steps.push(UpdateStep {
                        cycle,
                        user: k,
                        sinr_before: before,
                        sinr_after: after,
                    });
                    if k == 0 {
                        own_stats = d.stats;
                    }
                    sigs[k] = d.signature;
                }
                let link = Link::new(&taps[0], sys.energies_db[0], &others_of(0, &sigs), cfg)?;
                let bench = design(
                    Algorithm::benchmark_for(cfg.alphabet),
                    cfg.alphabet,
                    &link.form,
                    &cfg.fp,
                )?;
                let bench_sinr = link.evaluate(&bench.signature, cfg.include_isi)?;
                let own = link.evaluate(&sigs[0], cfg.include_isi)?;
                cycle_records.push(record(cfg, alg, cycle, trial, own, bench_sinr, own_stats));
            }
            Ok(AdaptationTrace {
                algorithm: alg,
                cycle_records,
                steps,
                final_signatures: sigs,
            })
        })
        .collect()
}

/// User 1's SINR loss after each sequential adaptation cycle.
pub fn run_multiuser_adaptation(cfg: &ExperimentConfig) -> Result<ExperimentResult> {
    cfg.validate()?;
    if cfg.scenario != Scenario::MultiuserAdaptation {
        return Err(Error::InvalidConfig("not an adaptation scenario".into()));
    }
    let traces = in_pool(cfg.threads, || {
        (0..cfg.trials)
            .into_par_iter()
            .map(|t| adaptation_trial(cfg, t))
            .collect::<Result<Vec<_>>>()
    })??;
    // cycle-major, then algorithm, then trial
    let mut records = Vec::with_capacity(cfg.trials * cfg.cycles * cfg.algorithms.len());
    for cycle in 0..cfg.cycles {
        for a in 0..cfg.algorithms.len() {
            for trial in &traces {
                records.push(trial[a].cycle_records[cycle].clone());
            }
        }
    }
    let aggregates = aggregate(&records);
    Ok(ExperimentResult {
        records,
        aggregates,
        complexity: Vec::new(),
    })
}

/// Average number of candidates visited by the binary search per user count.
pub fn run_complexity_table(cfg: &ExperimentConfig) -> Result<ExperimentResult> {
    cfg.validate()?;
    if cfg.scenario != Scenario::ComplexityTable {
        return Err(Error::InvalidConfig("not a complexity scenario".into()));
    }
    let interferers: Vec<usize> = cfg.sweep.iter().map(|k| k - 1).collect();
    let records = run_points(cfg, &interferers)?;
    let aggregates = aggregate(&records);
    let exhaustive = 1u64 << cfg.system.signature_len.min(63);
    let complexity = cfg
        .sweep
        .iter()
        .map(|&users| {
            let fp: Vec<&TrialRecord> = records
                .iter()
                .filter(|r| r.sweep_point == users && r.algorithm == Algorithm::FpSearch)
                .collect();
            let n = fp.len().max(1) as f64;
            ComplexityRow {
                users,
                mean_candidates: fp.iter().map(|r| r.candidates.unwrap_or(0) as f64).sum::<f64>() / n,
                mean_nodes: fp.iter().map(|r| r.nodes.unwrap_or(0) as f64).sum::<f64>() / n,
                max_candidates: fp.iter().map(|r| r.candidates.unwrap_or(0)).max().unwrap_or(0),
                exhaustive_candidates: exhaustive,
            }
        })
        .collect();
    Ok(ExperimentResult {
        records,
        aggregates,
        complexity,
    })
}

pub fn run(cfg: &ExperimentConfig) -> Result<ExperimentResult> {
    match cfg.scenario {
        Scenario::SingleUserSweep => run_single_user_sweep(cfg),
        Scenario::MultiuserAdaptation => run_multiuser_adaptation(cfg),
        Scenario::ComplexityTable => run_complexity_table(cfg),
    }
}
