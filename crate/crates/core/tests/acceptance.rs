//! Acceptance suite: one line per criterion, nonzero exit if any fails.

use std::process::Command;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::Rng;
use serde_json::{json, Value};

use prelog::bounds::{self, Rational};
use prelog::index_sets::{self, IndexSelection};
use prelog::jacobian::{self, TrialColoring, TrialSetup};
use prelog::model::{ChannelInput, ColoringMatrix, FadingRealization};
use prelog::montecarlo::{self, SnrGrid};
use prelog::{rng, Dims};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome, Duration);

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_prelog"))
}

fn run_bin(args: &[&str]) -> Result<Vec<u8>, String> {
    let out = bin().args(args).output().map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!("{args:?} exited {:?}: {}", out.status.code(), String::from_utf8_lossy(&out.stderr)));
    }
    Ok(out.stdout)
}

fn d(t: usize, r: usize, l: usize, q: usize) -> Dims {
    Dims::new(t, r, l, q).unwrap()
}

fn index_set_reproduction() -> Outcome {
    let out = run_bin(&["index-sets", "--T", "3", "--R", "3", "--L", "6", "--Q", "1"])?;
    let v: Value = serde_json::from_slice(&out).map_err(|e| e.to_string())?;
    let fill = json!([[1, 4, 3], [2, 5, 1], [3, 6, 2]]);
    let sorted = json!([[1, 3, 4], [1, 2, 5], [2, 3, 6]]);
    if v["P_fill_order"] != fill || v["P"] != sorted || v["theta"] != 9 {
        return Err(format!("P_fill_order={} P={} theta={}", v["P_fill_order"], v["P"], v["theta"]));
    }
    Ok("P_1={1,4,3} P_2={2,5,1} P_3={3,6,2}, theta=9".into())
}

fn set_size_identities() -> Outcome {
    let grid = Dims::sweep_grid();
    for &dims in &grid {
        let sel = IndexSelection::canonical(dims).map_err(|e| format!("{dims:?}: {e}"))?;
        let (t, r, l, q) = (dims.t, dims.r, dims.l, dims.q);
        let theta = t.max((t * q * r).saturating_sub((r - t) * l));
        let sum_i: usize = sel.i_sets.iter().map(Vec::len).sum();
        let sum_p: usize = sel.p_sets.iter().map(Vec::len).sum();
        let sum_d: usize = sel.d_sets.iter().map(Vec::len).sum();
        let complement = (0..t).all(|k| {
            sel.p_sets[k].len() + sel.d_sets[k].len() == l
                && sel.p_sets[k].iter().all(|p| !sel.d_sets[k].contains(p))
        });
        let ok = sel.theta == theta
            && sum_p == theta
            && sum_d == t * l - theta
            && sum_i == t * q * r + sum_d
            && sel.i_sets.iter().all(|s| s.len() >= t * q && s.len() <= l)
            && complement
            && index_sets::validate_selection(dims, &sel).all_passed();
        if !ok {
            return Err(format!("{dims:?}: theta={} sum_I={sum_i} sum_P={sum_p} sum_D={sum_d}", sel.theta));
        }
    }
    Ok(format!("{} dims", grid.len()))
}

fn induction_sets() -> Outcome {
    let mut count = 0;
    for dims in Dims::sweep_grid().into_iter().filter(|d| d.r > d.t) {
        let sets = index_sets::lemma5_sets(dims).map_err(|e| format!("{dims:?}: {e}"))?;
        if let Some(bad) = index_sets::check_lemma5(dims, &sets).iter().find(|c| !c.passed) {
            return Err(format!("{dims:?}: {} {}", bad.name, bad.detail));
        }
        count += 1;
    }
    Ok(format!("{count} dims with R > T"))
}

fn witness_certificates() -> Outcome {
    let grid = Dims::sweep_grid();
    let results: Vec<(Dims, Result<f64, String>)> = grid
        .iter()
        .map(|&dims| {
            let r = jacobian::witness(dims, 1, jacobian::WITNESS_TOL)
                .map(|w| w.certificate.sv_ratio)
                .map_err(|e| e.to_string());
            (dims, r)
        })
        .collect();
    let mut worst = f64::INFINITY;
    for (dims, r) in results {
        let ratio = r.map_err(|e| format!("{dims:?}: {e}"))?;
        if ratio <= 1e-6 {
            return Err(format!("{dims:?}: ratio {ratio:e}"));
        }
        worst = worst.min(ratio);
    }
    Ok(format!("{} dims, smallest ratio {worst:.3e}", grid.len()))
}

fn genericity() -> Outcome {
    let grid = Dims::sweep_grid();
    let mut fewest = usize::MAX;
    for &dims in &grid {
        let sel = IndexSelection::canonical(dims).unwrap();
        let rep = jacobian::genericity_trial(dims, &sel, 1000, 2024, jacobian::DEFAULT_TOL, &TrialSetup::default())
            .map_err(|e| format!("{dims:?}: {e}"))?;
        if rep.nonsingular < 999 {
            return Err(format!("{dims:?}: {}/1000 nonsingular", rep.nonsingular));
        }
        fewest = fewest.min(rep.nonsingular);
    }
    let dims = d(2, 4, 3, 1);
    let sel = IndexSelection::canonical(dims).unwrap();
    let setup = TrialSetup { coloring: TrialColoring::ConstantFading, zero_input: false };
    let rep = jacobian::genericity_trial(dims, &sel, 100, 2024, jacobian::DEFAULT_TOL, &setup).map_err(|e| e.to_string())?;
    let singular = rep.trials - rep.nonsingular;
    if singular < 99 {
        return Err(format!("constant fading: only {singular}/100 singular"));
    }
    Ok(format!("{} dims, worst {fewest}/1000 nonsingular; constant fading {singular}/100 singular", grid.len()))
}

fn bound_table() -> Outcome {
    for l in 2..=8usize {
        let dims = d(l - 1, (l - 1) * (l - 1), l, 1);
        let cs = bounds::chi_star(dims);
        let expected = Rational::from_integer(l as i64 - 2) + Rational::new(1, l as i64);
        if cs != expected {
            return Err(format!("L={l}: chi_star {cs} != {expected}"));
        }
        let (_, zt) = bounds::zheng_tse(dims);
        if l >= 3 && cs <= zt {
            return Err(format!("L={l}: chi_star {cs} <= Zheng-Tse {zt}"));
        }
    }
    let grid = Dims::sweep_grid();
    for &dims in &grid {
        let (_, best) = bounds::best_t(dims);
        if best != bounds::chi_star(dims) {
            return Err(format!("{dims:?}: best_T scan {best} != chi_star {}", bounds::chi_star(dims)));
        }
    }
    Ok(format!("family T=L-1, R=(L-1)^2, L=2..8 exact, best_T scan equal on {} dims", grid.len()))
}

fn homogeneity() -> Outcome {
    let grid = Dims::sweep_grid();
    let lambdas = [Complex64::new(2.0, 0.0), Complex64::new(0.0, 1.0), Complex64::new(0.5, 0.0)];
    let mut worst = 0.0f64;
    let mut pick = rng::stream(77, 0);
    for k in 0..50u64 {
        let dims = grid[pick.gen_range(0..grid.len())];
        let sel = IndexSelection::canonical(dims).unwrap();
        let mut r = rng::stream(78, k);
        let z = ColoringMatrix::gaussian(dims, &mut r);
        let x = ChannelInput::new(dims, rng::complex_gaussian_vec(&mut r, dims.input_len())).unwrap();
        let s = FadingRealization::new(dims, rng::complex_gaussian_vec(&mut r, dims.fading_len())).unwrap();
        let base = jacobian::log_abs_det(&jacobian::assemble(dims, &sel, &z, &x, &s).unwrap());
        let power = sel.data_columns() as i32;
        for &lambda in &lambdas {
            let j = jacobian::assemble(dims, &sel, &z, &x, &s.scaled(lambda)).unwrap();
            let scaled = jacobian::log_abs_det(&j);
            // det(lambda s) / (lambda^D det(s)) should be exactly one
            let unit = lambda / lambda.norm();
            let ratio = scaled.phase / (base.phase * unit.powi(power))
                * (scaled.log_abs - base.log_abs - power as f64 * lambda.norm().ln()).exp();
            let err = (ratio - 1.0).norm();
            if err.is_nan() || err >= 1e-8 {
                return Err(format!("{dims:?} lambda={lambda}: relative error {err:e}"));
            }
            worst = worst.max(err);
        }
    }
    Ok(format!("50 instances x 3 lambdas, max relative error {worst:.2e}"))
}

fn logdet_integrability() -> Outcome {
    let dims = d(1, 1, 2, 1);
    let sel = IndexSelection::canonical(dims).unwrap();
    let z = ColoringMatrix::ones(dims);
    let est = montecarlo::mc_logdet(dims, &z, &sel, 100_000, 8).map_err(|e| e.to_string())?;
    let target = -2.0 * EULER_GAMMA;
    let dev = (est.estimate.mean - target).abs();
    let detail = format!(
        "mean {:.5} vs {target:.5}, {:.2} std_err, floored {:.4}%",
        est.estimate.mean,
        dev / est.estimate.std_err,
        100.0 * est.floored_fraction
    );
    if dev < 3.0 * est.estimate.std_err && est.floored_fraction < 1e-3 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn hyx_growth() -> Outcome {
    let grid = SnrGrid::log_spaced_db(30.0, 50.0, 5).unwrap();
    let mut parts = Vec::new();
    for dims in [d(1, 1, 2, 1), d(2, 2, 5, 1)] {
        let z = ColoringMatrix::from_seed(dims, 9);
        let rep = montecarlo::hyx_growth_check(dims, &z, &grid, 2000, 9).map_err(|e| e.to_string())?;
        let target = (dims.t * dims.q * dims.r) as f64;
        let msg = format!("T={} R={} L={}: slope {:.4} vs {target}", dims.t, dims.r, dims.l, rep.slope);
        if (rep.slope - target).abs() > 0.05 * target {
            return Err(msg);
        }
        parts.push(msg);
    }
    Ok(parts.join("; "))
}

fn prelog_slope() -> Outcome {
    let dims = d(1, 1, 2, 1);
    let z = ColoringMatrix::from_seed(dims, 10);
    let grid = SnrGrid::log_spaced_db(20.0, 40.0, 5).unwrap();
    let rep = montecarlo::mc_mi_slope(dims, &z, &grid, 200_000, montecarlo::DEFAULT_KNN_K, 10).map_err(|e| e.to_string())?;
    let msg = format!("slope {:.4} +- {:.4} (target 1/2)", rep.slope, rep.slope_std_err);
    if (0.3..=0.7).contains(&rep.slope) {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn reproducibility() -> Outcome {
    let runs: [&[&str]; 6] = [
        &["jacobian-check", "--T", "2", "--R", "3", "--L", "4", "--seed", "11", "--trials", "500"],
        &["witness", "--T", "2", "--R", "5", "--L", "7", "--Q", "2", "--seed", "11"],
        &["mc-logdet", "--T", "1", "--R", "2", "--L", "3", "--seed", "11", "--samples", "20000"],
        &["mc-mi", "--T", "1", "--R", "1", "--L", "2", "--seed", "11", "--samples", "20000"],
        &["mc-mi", "--T", "1", "--R", "1", "--L", "2", "--seed", "11", "--samples", "20000", "--format", "csv"],
        &["hyx-growth", "--T", "2", "--R", "2", "--L", "5", "--seed", "11", "--samples", "500"],
    ];
    for args in runs {
        let a = run_bin(args)?;
        let b = run_bin(args)?;
        if a != b {
            return Err(format!("{} differs between runs", args[0]));
        }
    }
    Ok(format!("{} stochastic invocations byte-identical", runs.len()))
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("index-set reproduction", index_set_reproduction, Duration::from_secs(1)),
        ("set-size identities", set_size_identities, Duration::from_secs(10)),
        ("induction sets", induction_sets, Duration::from_secs(60)),
        ("witness certificates", witness_certificates, Duration::from_secs(120)),
        ("genericity", genericity, Duration::from_secs(300)),
        ("bound table", bound_table, Duration::from_secs(1)),
        ("homogeneity", homogeneity, Duration::from_secs(10)),
        ("log-det integrability", logdet_integrability, Duration::from_secs(30)),
        ("h(y|x) growth", hyx_growth, Duration::from_secs(60)),
        ("pre-log slope", prelog_slope, Duration::from_secs(600)),
        ("reproducibility", reproducibility, Duration::from_secs(600)),
    ];
    let mut failed = 0;
    for (k, (name, check, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let (status, detail) = match outcome {
            Ok(detail) if elapsed <= *budget => ("PASS", detail),
            Ok(detail) => ("FAIL", format!("{detail}; over the {}s budget", budget.as_secs())),
            Err(detail) => ("FAIL", detail),
        };
        if status == "FAIL" {
            failed += 1;
        }
        println!("{status} [{:>2}] {name}: {detail} ({:.2}s)", k + 1, elapsed.as_secs_f64());
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
