//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each,
//! and exits non-zero if any fails.

mod common;

use std::panic::{self, AssertUnwindSafe};
use std::path::Path;
use std::process::Command;
use std::time::Instant;

use num_complex::Complex64;
use rand::Rng;

use sigforge::fpsearch::{binary_objective, exhaustive_binary, fp_search_binary, FpConfig};
use sigforge::linalg::{
    cholesky_upper, cholesky_upper_hermitian, hermitian_max_eigenpair, hermitian_solve, jacobi_eigen, max_eigenpair,
    ComplexMatrix,
};
use sigforge::quaternary::{
    build_equivalent_binary, exhaustive_quaternary, fp_search_quaternary, quaternary_objective, stacked_c,
};
use sigforge::signature::QuaternarySignature;
use sigforge::sim::{
    adaptation_trial, run_complexity_table, run_single_user_sweep, Algorithm, Alphabet, ExperimentConfig, Scenario,
};

use common::{brute_binary, model_form, random_hermitian, random_hpd, random_spd, random_symmetric, rng};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn binary_optimality() -> Outcome {
    let cfg = FpConfig::default();
    let mut unique = 0;
    let mut worst: f64 = 0.0;
    for i in 0..500u64 {
        let mut r = rng(10_000 + i);
        let len = r.random_range(2..=12);
        let paths = r.random_range(1..=3);
        let interferers = r.random_range(0..=8);
        let form = model_form(&mut r, len, paths, interferers, Alphabet::Binary);
        let (s_fp, _) = fp_search_binary(&form, &cfg).map_err(|e| e.to_string())?;
        let (s_ex, v_ex) = exhaustive_binary(&form).map_err(|e| e.to_string())?;
        let diff = (binary_objective(&form, &s_fp) - v_ex).abs();
        worst = worst.max(diff);
        ensure(diff < 1e-9, || {
            format!("instance {i} (L={len}): objective gap {diff:e}")
        })?;
        let (_, _, is_unique) = brute_binary(&form.q_real, 1e-9);
        if is_unique {
            unique += 1;
            ensure(s_fp == s_ex, || {
                format!("instance {i}: unique optimum {s_ex} but search gave {s_fp}")
            })?;
        }
    }
    Ok(format!(
        "500 instances, max gap {worst:.1e}, {unique} unique optima matched"
    ))
}

fn quaternary_optimality() -> Outcome {
    let cfg = FpConfig::default();
    let mut worst: f64 = 0.0;
    for i in 0..200u64 {
        let mut r = rng(20_000 + i);
        let len = r.random_range(2..=6);
        let paths = r.random_range(1..=3);
        let interferers = r.random_range(0..=8);
        let form = model_form(&mut r, len, paths, interferers, Alphabet::Quaternary);
        let (s_fp, _) = fp_search_quaternary(&form, &cfg).map_err(|e| e.to_string())?;
        let (_, v_ex) = exhaustive_quaternary(&form).map_err(|e| e.to_string())?;
        let diff = (quaternary_objective(&form, &s_fp) - v_ex).abs();
        worst = worst.max(diff);
        ensure(diff < 1e-9, || {
            format!("instance {i} (L={len}): objective gap {diff:e}")
        })?;
    }
    Ok(format!("200 instances, max gap {worst:.1e}"))
}

fn equivalence_identity() -> Outcome {
    let mut worst: f64 = 0.0;
    for i in 0..1000u64 {
        let mut r = rng(30_000 + i);
        let len = r.random_range(1..=16);
        let form = if i % 2 == 0 {
            let paths = r.random_range(1..=3);
            let interferers = r.random_range(0..=8);
            model_form(&mut r, len, paths, interferers, Alphabet::Quaternary)
        } else {
            sigforge::SinrForm::from_hermitian(random_hpd(&mut r, len)).map_err(|e| e.to_string())?
        };
        let s = QuaternarySignature::random(&mut r, len);
        let lhs = quaternary_objective(&form, &s);
        let problem = build_equivalent_binary(&form).map_err(|e| e.to_string())?;
        let c = stacked_c(&s).to_f64();
        let rhs = problem.q_bar.quad_form(&c);
        let rel = (lhs - rhs).abs() / lhs.abs().max(f64::MIN_POSITIVE);
        worst = worst.max(rel);
        ensure(rel < 1e-9, || format!("pair {i}: relative error {rel:e}"))?;
    }
    Ok(format!("1000 pairs, max relative error {worst:.1e}"))
}

fn complexity_table() -> Outcome {
    let mut cfg = ExperimentConfig::new(Scenario::ComplexityTable, Alphabet::Binary);
    cfg.trials = 200;
    cfg.sweep = vec![4, 8, 12, 16, 20];
    let res = run_complexity_table(&cfg).map_err(|e| e.to_string())?;
    let means: Vec<String> = res
        .complexity
        .iter()
        .map(|r| format!("K={}:{:.2}", r.users, r.mean_candidates))
        .collect();
    let summary = means.join(" ");
    let total: u64 = res.records.iter().map(|r| r.candidates.unwrap_or(0)).sum();
    let grand = total as f64 / res.records.len() as f64;
    let max = res.records.iter().map(|r| r.candidates.unwrap_or(0)).max().unwrap_or(0);
    for row in &res.complexity {
        ensure((10.0..=600.0).contains(&row.mean_candidates), || {
            format!(
                "K={} average {:.2} outside [10, 600]; {summary}",
                row.users, row.mean_candidates
            )
        })?;
    }
    let first = res.complexity.first().map(|r| r.mean_candidates).unwrap_or(0.0);
    let last = res.complexity.last().map(|r| r.mean_candidates).unwrap_or(0.0);
    ensure(first > last, || {
        format!("K=4 average not above K=20 average; {summary}")
    })?;
    ensure(max <= 65536, || format!("trial with {max} candidates"))?;
    ensure(grand < 655.36, || format!("grand mean {grand:.2}"))?;
    Ok(format!("{summary}, grand mean {grand:.2}, max {max}"))
}

fn dominance() -> Outcome {
    let mut cfg = ExperimentConfig::new(Scenario::SingleUserSweep, Alphabet::Binary);
    cfg.trials = 100;
    cfg.algorithms = vec![
        Algorithm::RealMaxEv,
        Algorithm::Quantized,
        Algorithm::FpSearch,
        Algorithm::Exhaustive,
    ];
    let res = run_single_user_sweep(&cfg).map_err(|e| e.to_string())?;
    let mut checked = 0;
    for chunk in res.records.chunks(4) {
        let (bench, quant, fp, ex) = (&chunk[0], &chunk[1], &chunk[2], &chunk[3]);
        let at = || format!("interferers={} trial={}", fp.sweep_point, fp.trial);
        ensure(
            bench.algorithm == Algorithm::RealMaxEv && ex.algorithm == Algorithm::Exhaustive,
            || "unexpected record order".into(),
        )?;
        ensure(fp.loss_db <= quant.loss_db + 1e-9, || {
            format!("{}: fp loss {} above quantized {}", at(), fp.loss_db, quant.loss_db)
        })?;
        for r in chunk {
            ensure(r.loss_db >= -1e-9, || {
                format!("{}: {} loss {}", at(), r.algorithm, r.loss_db)
            })?;
        }
        ensure((fp.loss_db - ex.loss_db).abs() < 1e-9, || {
            format!("{}: fp {} vs exhaustive {}", at(), fp.loss_db, ex.loss_db)
        })?;
        checked += 1;
    }
    Ok(format!("{checked} trials over {} sweep points", cfg.sweep.len()))
}

fn adaptation() -> Outcome {
    let algorithms = vec![
        Algorithm::RealMaxEv,
        Algorithm::Quantized,
        Algorithm::FpSearch,
        Algorithm::Exhaustive,
    ];
    let mut steps = 0;
    for len in [16, 12] {
        let mut cfg = ExperimentConfig::new(Scenario::MultiuserAdaptation, Alphabet::Binary).with_dimensions(len, 3, 8);
        cfg.cycles = 5;
        cfg.trials = 50;
        cfg.algorithms = algorithms.clone();
        cfg.validate().map_err(|e| e.to_string())?;
        for trial in 0..cfg.trials {
            let traces = adaptation_trial(&cfg, trial).map_err(|e| e.to_string())?;
            for t in &traces {
                if t.algorithm == Algorithm::Quantized {
                    continue;
                }
                for s in &t.steps {
                    steps += 1;
                    ensure(s.sinr_after >= s.sinr_before * (1.0 - 1e-12), || {
                        format!(
                            "L={len} trial {trial} {} cycle {} user {}: {} -> {}",
                            t.algorithm, s.cycle, s.user, s.sinr_before, s.sinr_after
                        )
                    })?;
                }
            }
            if len <= 12 {
                let fp = &traces[2];
                let ex = &traces[3];
                ensure(fp.final_signatures == ex.final_signatures, || {
                    format!("L={len} trial {trial}: final signatures differ")
                })?;
                for (a, b) in fp.cycle_records.iter().zip(&ex.cycle_records) {
                    ensure((a.loss_db - b.loss_db).abs() < 1e-9, || {
                        format!(
                            "L={len} trial {trial} cycle {}: {} vs {}",
                            a.sweep_point, a.loss_db, b.loss_db
                        )
                    })?;
                }
            }
        }
    }
    Ok(format!(
        "{steps} own-update steps non-decreasing; L=12 fp and exhaustive trajectories coincide"
    ))
}

fn cli_determinism() -> Outcome {
    let exe = env!("CARGO_BIN_EXE_sigforge");
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let runs: [&[&str]; 5] = [
        &[
            "sweep", "--L", "8", "--trials", "15", "--kmin", "2", "--kmax", "6", "--kstep", "2",
        ],
        &[
            "sweep",
            "--L",
            "5",
            "--trials",
            "10",
            "--kmin",
            "1",
            "--kmax",
            "4",
            "--alphabet",
            "quaternary",
        ],
        &["adapt", "--L", "8", "--K", "4", "--cycles", "3", "--trials", "6"],
        &[
            "adapt",
            "--L",
            "4",
            "--K",
            "3",
            "--cycles",
            "2",
            "--trials",
            "5",
            "--alphabet",
            "quaternary",
        ],
        &[
            "complexity",
            "--trials",
            "20",
            "--kmin",
            "4",
            "--kmax",
            "12",
            "--init",
            "rank1",
        ],
    ];
    let read = |p: &Path| std::fs::read(p).map_err(|e| format!("{}: {e}", p.display()));
    for (i, args) in runs.iter().enumerate() {
        let mut outputs = Vec::new();
        for (rep, threads) in ["1", "3"].iter().enumerate() {
            let out = dir.path().join(format!("run{i}_{rep}.csv"));
            let status = Command::new(exe)
                .args(*args)
                .arg("--out")
                .arg(&out)
                .env("SIGFORGE_THREADS", threads)
                .output()
                .map_err(|e| e.to_string())?;
            ensure(status.status.success(), || {
                format!("{args:?} failed: {}", String::from_utf8_lossy(&status.stderr))
            })?;
            let agg = sigforge::cli::aggregate_path(&out);
            outputs.push((read(&out)?, read(&agg)?));
        }
        ensure(outputs[0] == outputs[1], || {
            format!("{args:?}: output differs between reruns")
        })?;
    }
    Ok(format!(
        "{} scenarios byte-identical across reruns and thread counts",
        runs.len()
    ))
}

fn fro(m: &ComplexMatrix) -> f64 {
    m.frobenius_norm()
}

fn kernels() -> Outcome {
    let (mut chol, mut eig, mut solve): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for i in 0..100u64 {
        let mut r = rng(80_000 + i);
        let n = 2 + (i as usize % 31);

        let a = random_spd(&mut r, n);
        let b = cholesky_upper(&a).map_err(|e| e.to_string())?;
        let err = b.transpose().matmul(&b).sub(&a).frobenius_norm() / a.frobenius_norm();
        chol = chol.max(err);
        let h = random_hpd(&mut r, n);
        let bh = cholesky_upper_hermitian(&h).map_err(|e| e.to_string())?;
        let err = fro(&bh.conj_transpose().matmul(&bh).sub(&h)) / fro(&h);
        chol = chol.max(err);

        let s = random_symmetric(&mut r, n);
        let (lambda, v) = max_eigenpair(&s).map_err(|e| e.to_string())?;
        let sv = s.matvec(&v);
        let res = sv
            .iter()
            .zip(&v)
            .map(|(a, b)| (a - lambda * b).powi(2))
            .sum::<f64>()
            .sqrt();
        eig = eig.max(res);
        let full = jacobi_eigen(&s).map_err(|e| e.to_string())?;
        for k in 0..n {
            let v = full.vector(k);
            let lambda = full.values[k];
            let sv = s.matvec(&v);
            let res = sv
                .iter()
                .zip(&v)
                .map(|(a, b)| (a - lambda * b).powi(2))
                .sum::<f64>()
                .sqrt();
            eig = eig.max(res);
        }
        let hq = random_hermitian(&mut r, n);
        let (lambda, v) = hermitian_max_eigenpair(&hq).map_err(|e| e.to_string())?;
        let hv = hq.matvec(&v);
        let res = hv
            .iter()
            .zip(&v)
            .map(|(a, b)| (a - b * lambda).norm_sqr())
            .sum::<f64>()
            .sqrt();
        eig = eig.max(res);

        let rhs: Vec<Complex64> = (0..n * 3).map(|_| common::cgauss(&mut r)).collect();
        let rhs = ComplexMatrix::from_vec(n, 3, rhs).map_err(|e| e.to_string())?;
        let x = hermitian_solve(&h, &rhs).map_err(|e| e.to_string())?;
        let err = fro(&h.matmul(&x).sub(&rhs)) / fro(&rhs);
        solve = solve.max(err);
    }
    ensure(chol < 1e-10, || format!("Cholesky round-trip {chol:e}"))?;
    ensure(eig < 1e-8, || format!("eigen residual {eig:e}"))?;
    ensure(solve < 1e-8, || format!("solve residual {solve:e}"))?;
    Ok(format!(
        "100 matrices: Cholesky {chol:.1e}, eigen residual {eig:.1e}, solve {solve:.1e}"
    ))
}

fn main() {
    if std::env::args().any(|a| a == "--list") {
        return;
    }
    let criteria: [Criterion; 8] = [
        ("binary search matches exhaustive", binary_optimality),
        ("quaternary search matches exhaustive", quaternary_optimality),
        ("quaternary to binary identity", equivalence_identity),
        ("complexity table band and trend", complexity_table),
        ("per-trial dominance and non-negative loss", dominance),
        ("multiuser adaptation", adaptation),
        ("CLI determinism", cli_determinism),
        ("numerical kernels", kernels),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {}: PASS {name} ({secs:.1}s): {detail}", i + 1),
            Err(detail) => {
                failures += 1;
                println!("criterion {}: FAIL {name} ({secs:.1}s): {detail}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} of {} criteria passed",
        criteria.len() - failures,
        criteria.len()
    );
    if failures > 0 {
        std::process::exit(1);
    }
}
