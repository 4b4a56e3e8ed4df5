//! Acceptance suite: one PASS/FAIL line per criterion, each at its stated
//! tolerance and runtime budget.
//!
//! The process exits 0 regardless so the workspace test run stays usable;
//! set `ACCEPTANCE_STRICT=1` to make any FAIL line fail the process.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use hankel_harness::phase::PhaseGridSpec;
use hankel_harness::recover::RecoverSpec;
use hankel_harness::{run_norm_scan, run_phase_transition, run_recover};
use hankel_recover::linalg::{
    inner, inner_mat, nuclear_norm, random_matrix, random_vector, singular_values,
};
use hankel_recover::{
    hankel_map, matrix_pencil, random_instance, svt, synthesize, toeplitz_map, CMatrix, Complex64,
    Family, HankelLift, Mode, SolverConfig,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;

struct Outcome {
    id: usize,
    name: &'static str,
    passed: bool,
    detail: String,
    elapsed: Duration,
    budget: Option<Duration>,
}

fn run(
    id: usize,
    name: &'static str,
    budget: Option<Duration>,
    f: impl FnOnce() -> Check,
) -> Outcome {
    let start = Instant::now();
    let result = f();
    let elapsed = start.elapsed();
    let (mut passed, mut detail) = match result {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    if let Some(limit) = budget {
        if elapsed > limit {
            passed = false;
            detail.push_str(&format!("; over budget {limit:?}"));
        }
    }
    let out = Outcome {
        id,
        name,
        passed,
        detail,
        elapsed,
        budget,
    };
    let budget = out
        .budget
        .map(|b| format!(" / {:.0} s", b.as_secs_f64()))
        .unwrap_or_default();
    println!(
        "{} [{:>2}] {:<28} {:>7.2} s{}  {}",
        if out.passed { "PASS" } else { "FAIL" },
        out.id,
        out.name,
        out.elapsed.as_secs_f64(),
        budget,
        out.detail
    );
    out
}

fn ensure(cond: bool, detail: String) -> Check {
    if cond {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn operator_identities() -> Check {
    const TOL: f64 = 1e-11;
    let mut worst = [0.0f64; 3];
    let mut rng = rng(1);
    for n in [4, 16, 64] {
        let lift = HankelLift::new(n).map_err(|e| e.to_string())?;
        for _ in 0..100 {
            let y = random_vector(2 * n - 1, &mut rng);
            let x = random_matrix(n, n, &mut rng);
            let gy = lift.lift(&y).unwrap();
            let gsx = lift.lift_adjoint(&x).unwrap();

            let lhs = inner_mat(&gy, &x);
            let rhs = inner(&y, &gsx);
            worst[0] = worst[0].max((lhs - rhs).norm() / (y.norm() * x.norm()));

            let back = lift.lift_adjoint(&gy).unwrap();
            worst[1] = worst[1].max((back - &y).norm() / y.norm());

            let p = lift.project_hankel(&x).unwrap();
            let pp = lift.project_hankel(&p).unwrap();
            worst[2] = worst[2].max((pp - &p).norm() / x.norm());
        }
    }
    ensure(
        worst.iter().all(|w| *w <= TOL),
        format!(
            "adjoint {:.1e}, isometry {:.1e}, idempotence {:.1e} (tol {TOL:.0e})",
            worst[0], worst[1], worst[2]
        ),
    )
}

fn rank_structure() -> Check {
    let n = 16;
    let mut worst = 0.0f64;
    let mut seen = Vec::new();
    for i in 0..50u64 {
        let r = 1 + (i as usize % 6);
        let family = if i % 2 == 0 {
            Family::Sinusoid
        } else {
            Family::Damped
        };
        let sig = random_instance(n, r, family, 100 + i).map_err(|e| e.to_string())?;
        let s = singular_values(&hankel_map(&synthesize(&sig), n).unwrap()).unwrap();
        let ratio = s[r] / s[0];
        if ratio >= 1e-9 {
            seen.push(format!("R={r} seed={}: {ratio:.1e}", 100 + i));
        }
        worst = worst.max(ratio);
    }
    ensure(
        seen.is_empty(),
        format!("max sigma_(R+1)/sigma_1 = {worst:.1e} over 50 signals {seen:?}"),
    )
}

fn prox_objective(x: &CMatrix, z: &CMatrix, tau: f64) -> f64 {
    tau * nuclear_norm(z).unwrap() + 0.5 * (z - x).norm_squared()
}

fn svt_oracle() -> Check {
    let mut rng = rng(3);
    let mut worst_sv = 0.0f64;
    let mut beaten = 0usize;
    for _ in 0..20 {
        let x = random_matrix(6, 6, &mut rng);
        let s = singular_values(&x).unwrap();
        let tau = rng.random_range(0.0..s[0]);
        let out = svt(&x, tau).map_err(|e| e.to_string())?;
        let got = singular_values(&out).unwrap();
        for (g, orig) in got.iter().zip(&s) {
            worst_sv = worst_sv.max((g - (orig - tau).max(0.0)).abs());
        }
        let best = prox_objective(&x, &out, tau);
        for k in 0..10_000i32 {
            let scale = 10f64.powi(-(k % 6));
            let dz = random_matrix(6, 6, &mut rng) * Complex64::new(scale, 0.0);
            if prox_objective(&x, &(&out + dz), tau) < best - 1e-12 * best.max(1.0) {
                beaten += 1;
            }
        }
    }
    ensure(
        worst_sv <= 1e-10 && beaten == 0,
        format!(
            "singular value error {worst_sv:.1e}; {beaten} of 200000 perturbations beat the output"
        ),
    )
}

fn grid(n: usize, r: usize, m: &[usize], trials: usize) -> PhaseGridSpec {
    PhaseGridSpec {
        n,
        r_values: vec![r],
        m_values: m.to_vec(),
        trials,
        ..PhaseGridSpec::desk()
    }
}

fn exact_recovery() -> Check {
    let small = run_phase_transition(&grid(16, 2, &[24], 20)).map_err(|e| e.to_string())?;
    let large = run_phase_transition(&grid(64, 4, &[40], 20)).map_err(|e| e.to_string())?;
    let a = small.rate(2, 24).unwrap();
    let b = large.rate(4, 40).unwrap();
    ensure(
        a >= 0.9 && b >= 0.9,
        format!("N=16 R=2 M=24 rate {a}; N=64 R=4 M=40 rate {b} (need >= 0.9)"),
    )
}

fn phase_shape() -> Check {
    let g = run_phase_transition(&grid(16, 2, &[8, 28, 31], 50)).map_err(|e| e.to_string())?;
    let (low, high, square) = (
        g.rate(2, 8).unwrap(),
        g.rate(2, 28).unwrap(),
        g.rate(2, 31).unwrap(),
    );
    ensure(
        low <= 0.1 && high >= 0.9 && square == 1.0,
        format!(
            "rate M=8 {low} (need <= 0.1), M=28 {high} (need >= 0.9), M=31 {square} (need 1.0)"
        ),
    )
}

fn noisy_stability() -> Check {
    let mut ratios = Vec::new();
    let mut unconverged = 0;
    for delta in [1e-3, 1e-2, 1e-1] {
        let spec = RecoverSpec {
            n: Some(16),
            r: Some(2),
            m: 28,
            delta,
            seed: 1,
            family: Family::Sinusoid,
            threshold: 1e-3,
            solver: SolverConfig::default(),
            input: None,
            pencil: false,
        };
        let report = run_recover(&spec).map_err(|e| e.to_string())?;
        if !report.converged {
            unconverged += 1;
        }
        ratios.push(report.weighted_error / delta);
    }
    let max = ratios.iter().cloned().fold(f64::MIN, f64::max);
    let min = ratios.iter().cloned().fold(f64::MAX, f64::min);
    ensure(
        min > 0.0 && max / min <= 5.0,
        format!(
            "error/delta = {:.3e}, {:.3e}, {:.3e}; spread {:.2} (need <= 5); {unconverged} unconverged",
            ratios[0],
            ratios[1],
            ratios[2],
            max / min
        ),
    )
}

fn norm_growth() -> Check {
    let scan = run_norm_scan(&[1, 16, 64, 256], 200, 0).map_err(|e| e.to_string())?;
    let big: Vec<_> = [16, 64, 256]
        .iter()
        .map(|n| scan.estimate(*n).unwrap())
        .collect();
    let monotone = big.windows(2).all(|w| w[1].mean >= w[0].mean);
    let per_log: Vec<f64> = big.iter().map(|e| e.mean / (e.n as f64).ln()).collect();
    let band = per_log.iter().cloned().fold(f64::MIN, f64::max)
        / per_log.iter().cloned().fold(f64::MAX, f64::min);
    let one = scan.estimate(1).unwrap();
    let rayleigh = (std::f64::consts::PI / 2.0).sqrt();
    let z = (one.mean - rayleigh).abs() / one.stderr;
    ensure(
        monotone && band < 2.0 && z <= 3.0,
        format!(
            "means {:.3} {:.3} {:.3}; mean/ln N band {band:.2} (need < 2); N=1 off by {z:.2} stderr",
            big[0].mean, big[1].mean, big[2].mean
        ),
    )
}

fn toeplitz_equivalence() -> Check {
    let mut rng = rng(8);
    let n = 16;
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let x = random_vector(2 * n - 1, &mut rng);
        let t = nuclear_norm(&toeplitz_map(&x, n).unwrap()).unwrap();
        let h = nuclear_norm(&hankel_map(&x, n).unwrap()).unwrap();
        worst = worst.max((t - h).abs() / h);
    }
    ensure(
        worst <= 1e-10,
        format!("max relative nuclear-norm gap {worst:.1e}"),
    )
}

fn worst_pole_error(truth: &[Mode], found: &[Mode]) -> f64 {
    let mut left: Vec<Complex64> = found.iter().map(|m| m.z).collect();
    let mut worst = 0.0f64;
    for t in truth {
        let (idx, err) = left
            .iter()
            .enumerate()
            .map(|(i, z)| (i, (z - t.z).norm()))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .expect("same number of poles");
        left.swap_remove(idx);
        worst = worst.max(err);
    }
    worst
}

fn mode_round_trip() -> Check {
    let mut worst = 0.0f64;
    let mut failures = Vec::new();
    for family in [Family::Sinusoid, Family::Damped] {
        for i in 0..20u64 {
            let r = 1 + (i as usize % 4);
            let sig = random_instance(16, r, family, 900 + i).map_err(|e| e.to_string())?;
            match matrix_pencil(&synthesize(&sig), r) {
                Ok(modes) if modes.len() == r => {
                    worst = worst.max(worst_pole_error(sig.modes(), &modes))
                }
                Ok(modes) => failures.push(format!(
                    "{family:?} seed {}: {} poles",
                    900 + i,
                    modes.len()
                )),
                Err(e) => failures.push(format!("{family:?} seed {}: {e}", 900 + i)),
            }
        }
    }
    ensure(
        failures.is_empty() && worst <= 1e-8,
        format!("max pole error {worst:.1e} over 40 instances {failures:?}"),
    )
}

fn determinism() -> Check {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut bytes = Vec::new();
    for run in 0..2 {
        let path = dir.path().join(format!("grid{run}.csv"));
        let status = Command::new(env!("CARGO_BIN_EXE_hankel-recover"))
            .args(["phase-transition", "--seed", "2024", "--out"])
            .arg(&path)
            .output()
            .map_err(|e| e.to_string())?;
        if !status.status.success() {
            return Err(format!("CLI exited with {}", status.status));
        }
        bytes.push(std::fs::read(&path).map_err(|e| e.to_string())?);
    }
    let rows = bytes[0].iter().filter(|b| **b == b'\n').count() - 1;
    let same = bytes[0] == bytes[1];
    ensure(
        same,
        format!(
            "two CLI runs of the desk grid, {rows} rows, {} bytes; identical: {same}",
            bytes[0].len()
        ),
    )
}

fn main() -> ExitCode {
    let secs = |s: u64| Some(Duration::from_secs(s));
    let outcomes = [
        run(1, "operator identities", secs(5), operator_identities),
        run(2, "rank structure", secs(5), rank_structure),
        run(3, "svt oracle", secs(10), svt_oracle),
        run(4, "exact recovery", secs(180), exact_recovery),
        run(5, "phase-transition shape", secs(300), phase_shape),
        run(6, "noisy stability", secs(60), noisy_stability),
        run(7, "spectral-norm growth", secs(120), norm_growth),
        run(8, "toeplitz equivalence", secs(5), toeplitz_equivalence),
        run(9, "mode round trip", secs(10), mode_round_trip),
        run(10, "determinism", None, determinism),
    ];
    let passed = outcomes.iter().filter(|o| o.passed).count();
    println!("acceptance: {passed}/{} criteria passed", outcomes.len());

    let strict = std::env::var("ACCEPTANCE_STRICT").is_ok_and(|v| v == "1");
    if strict && passed != outcomes.len() {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
