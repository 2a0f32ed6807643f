//! Acceptance suite. Run with
//! `cargo test -p dspg-cli --test acceptance -- --nocapture`
//! to see one PASS/FAIL line per criterion.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::time::{Duration, Instant};

use dspg_core::generators::{
    build_zero_constraints, gen_precision, sample_covariance, Family, GenSpec,
};
use dspg_core::io::{write_manifest, write_matrix, InstanceManifest, RhoSpec, SCHEMA_VERSION};
use dspg_core::linalg::norms::inf_elem;
use dspg_core::linalg::{cholesky, inverse_from_factor};
use dspg_core::metrics::{entropy_loss, quadratic_loss, support_scores};
use dspg_core::model::{
    dual_gradient, dual_objective, make_iterate, ConstraintMap, ProblemInstance, SparseSym,
};
use dspg_core::rng::Stream;
use dspg_core::solver::{solve, solve_observed, SolveStatus, SolverConfig};
use dspg_core::SymMat;
use nalgebra::DMatrix;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(cond: bool, what: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what.into())
    }
}

fn dspg() -> Command {
    Command::new(env!("CARGO_BIN_EXE_dspg"))
}

fn run_cli(args: &[&str]) -> Output {
    dspg().args(args).output().expect("spawn dspg")
}

fn generated(n: usize, density: f64, fraction: f64, rho: f64, seed: u64) -> ProblemInstance {
    let spec = GenSpec {
        density,
        seed,
        ..GenSpec::new(Family::Random, n)
    };
    let p = gen_precision(&spec).unwrap();
    let c = sample_covariance(&p, spec.samples(), seed).unwrap();
    let (_, pattern) = build_zero_constraints(&p, fraction, seed).unwrap();
    let mut b = ProblemInstance::builder(c).uniform_rho(rho).unwrap();
    if !pattern.is_empty() {
        b = b.zero_pattern(pattern).unwrap();
    }
    b.build().unwrap()
}

// 1. C = I_50, rho = 0.1 E: X* = I / 1.1.
fn analytic_optimum() -> Outcome {
    let n = 50;
    let inst = ProblemInstance::builder(SymMat::identity(n))
        .uniform_rho(0.1)
        .unwrap()
        .build()
        .unwrap();
    let start = Instant::now();
    let r = solve(&inst, None, &SolverConfig::default()).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let err = inf_elem(&r.x.sub(&SymMat::identity(n).scale(1.0 / 1.1)));
    check(r.status == SolveStatus::Converged, format!("status {:?}", r.status))?;
    check(err <= 1e-5, format!("|X - I/1.1|_inf = {err:e}"))?;
    check(r.gap.abs() <= 1e-8, format!("|gap| = {:e}", r.gap))?;
    check(elapsed < Duration::from_secs(1), format!("took {elapsed:?}"))?;
    check(r.iterations < 100, format!("{} iterations", r.iterations))?;
    Ok(format!(
        "{} iterations, {:?}, |X - X*|_inf = {err:.1e}, gap = {:.1e}",
        r.iterations, elapsed, r.gap
    ))
}

/// Fixed-step projected gradient ascent on the dual of an unconstrained
/// instance, written against nalgebra only. Returns `f(X)` at the stopping
/// point and the number of steps.
fn projected_gradient_oracle(c: &DMatrix<f64>, rho: f64, mu: f64) -> Result<(f64, usize), String> {
    let n = c.nrows();
    let clamp = |m: DMatrix<f64>| m.map(|v| v.clamp(-rho, rho));
    let x_of = |w: &DMatrix<f64>| -> Option<DMatrix<f64>> {
        (c + w).cholesky().map(|ch| ch.inverse() * mu)
    };
    let mut w = DMatrix::zeros(n, n);
    let mut x = x_of(&w).ok_or("C is not positive definite")?;
    let mut steps = 0;
    while (clamp(&w + &x) - &w).norm() > 1e-8 {
        let mut t = 1e-4;
        loop {
            let trial = clamp(&w + &x * t);
            if let Some(xt) = x_of(&trial) {
                w = trial;
                x = xt;
                break;
            }
            t *= 0.5;
        }
        steps += 1;
        if steps > 20_000_000 {
            return Err("oracle did not reach direction norm 1e-8".into());
        }
    }
    let logdet = 2.0 * x.clone().cholesky().unwrap().l().diagonal().map(f64::ln).sum();
    let f = (c * &x).trace() - mu * logdet + rho * x.iter().map(|v| v.abs()).sum::<f64>();
    Ok((f, steps))
}

// 2. DSPG against the plain projected gradient oracle on 20 random n = 3 instances.
fn oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let cfg = SolverConfig {
        eps: 1e-9,
        ..SolverConfig::default()
    };
    let mut worst: f64 = 0.0;
    let mut oracle_steps = 0;
    for seed in 0..20u64 {
        let inst = generated(3, 0.5, 0.0, 0.1, 1000 + seed);
        let r = solve(&inst, None, &cfg).map_err(|e| e.to_string())?;
        check(r.status == SolveStatus::Converged, format!("seed {seed}: {:?}", r.status))?;
        let c = DMatrix::from_fn(3, 3, |i, j| inst.c().get(i, j));
        let (f, steps) = projected_gradient_oracle(&c, 0.1, 1.0)?;
        oracle_steps += steps;
        let diff = (f - r.primal_obj).abs();
        worst = worst.max(diff);
        check(diff <= 1e-6, format!("seed {seed}: dspg {} vs oracle {f}", r.primal_obj))?;
    }
    let elapsed = start.elapsed();
    check(elapsed < Duration::from_secs(30), format!("took {elapsed:?}"))?;
    Ok(format!(
        "max |f_dspg - f_oracle| = {worst:.1e}, {oracle_steps} oracle steps, {elapsed:?}"
    ))
}

// 3. Dual gradient against central differences, n = 8, two general constraints.
fn gradient_check() -> Outcome {
    let n = 8;
    let mut s = Stream::new(77, 0);
    let mut coeff = || {
        let mut entries = Vec::new();
        for i in 0..n {
            for j in i..n {
                if s.uniform() < 0.3 {
                    entries.push((i, j, s.uniform_in(-1.0, 1.0)));
                }
            }
        }
        SparseSym::new(n, entries).unwrap()
    };
    let coeffs = vec![coeff(), coeff()];
    let map = ConstraintMap::new(n, coeffs, vec![0.3, -0.7]).unwrap();
    let spec = GenSpec {
        density: 0.3,
        seed: 77,
        ..GenSpec::new(Family::Random, n)
    };
    let c = sample_covariance(&gen_precision(&spec).unwrap(), 4 * n, 77).unwrap();
    let inst = ProblemInstance::builder(c.add(&SymMat::identity(n).scale(0.5)))
        .uniform_rho(0.2)
        .unwrap()
        .constraints(map)
        .build()
        .map_err(|e| e.to_string())?;
    let mut s = Stream::new(78, 0);
    let y = vec![s.uniform_in(-0.1, 0.1), s.uniform_in(-0.1, 0.1)];
    let w = SymMat::from_upper_fn(n, |_, _| s.uniform_in(-0.1, 0.1)).unwrap();
    let it = make_iterate(&inst, y.clone(), w.clone()).map_err(|e| e.to_string())?;
    let (gy, gw) = dual_gradient(&inst, &it);
    let g = |y: Vec<f64>, w: SymMat| dual_objective(&inst, &make_iterate(&inst, y, w).unwrap());
    let h = 1e-6;
    let mut worst: f64 = 0.0;
    let mut rel = |fd: f64, an: f64| {
        let e = (fd - an).abs() / an.abs().max(1.0);
        worst = worst.max(e);
        e
    };
    for p in 0..2 {
        let (mut yp, mut ym) = (y.clone(), y.clone());
        yp[p] += h;
        ym[p] -= h;
        let fd = (g(yp, w.clone()) - g(ym, w.clone())) / (2.0 * h);
        check(rel(fd, gy[p]) <= 1e-6, format!("y[{p}]: {fd} vs {}", gy[p]))?;
    }
    for i in 0..n {
        for j in i..n {
            let (mut wp, mut wm) = (w.clone(), w.clone());
            wp.add_to(i, j, h);
            wm.add_to(i, j, -h);
            let fd = (g(y.clone(), wp) - g(y.clone(), wm)) / (2.0 * h);
            let an = if i == j { gw.get(i, i) } else { 2.0 * gw.get(i, j) };
            check(rel(fd, an) <= 1e-6, format!("W[{i},{j}]: {fd} vs {an}"))?;
        }
    }
    Ok(format!("{} components, max relative error {worst:.1e}", 2 + n * (n + 1) / 2))
}

// 4. Per-iteration invariants over a full constrained solve.
fn invariant_suite() -> Outcome {
    let inst = generated(30, 0.2, 0.5, 0.1, 4);
    let cfg = SolverConfig::default();
    let mut g0 = None;
    let mut violations: Vec<String> = Vec::new();
    let r = solve_observed(&inst, None, &cfg, |k, it| {
        for (i, j, v) in it.w().upper_entries() {
            if v.abs() > inst.rho().get(i, j) {
                violations.push(format!("k={k}: |W[{i},{j}]| = {v} > rho"));
            }
        }
        let z = inst.c().add(it.w()).sub(&inst.map().apply_adjoint(it.y()));
        if cholesky(&z).is_err() {
            violations.push(format!("k={k}: Z not positive definite"));
        }
        let g = it.g_val();
        let g0 = *g0.get_or_insert(g);
        if g < g0 - 1e-9 * (1.0 + g0.abs()) {
            violations.push(format!("k={k}: g = {g} dropped below g0 = {g0}"));
        }
    })
    .map_err(|e| e.to_string())?;
    for rec in &r.trace {
        let k = rec.k;
        let d2 = rec.direction_norm * rec.direction_norm;
        if rec.ascent_lhs < d2 / rec.alpha - 1e-10 {
            violations.push(format!("k={k}: ascent {} < |d|^2/alpha {}", rec.ascent_lhs, d2 / rec.alpha));
        }
        // min(1, alpha) |d1| <= |d| <= max(1, alpha) |d1|, which implies the
        // same bounds with alpha_min and alpha_max
        let lo = rec.alpha.min(1.0) * rec.direction1_norm;
        let hi = rec.alpha.max(1.0) * rec.direction1_norm;
        let slack = 1e-12 * (1.0 + rec.direction1_norm * rec.alpha.max(1.0));
        if rec.direction_norm < lo - slack || rec.direction_norm > hi + slack {
            violations.push(format!("k={k}: |d| = {} outside [{lo}, {hi}]", rec.direction_norm));
        }
        if rec.g_next < rec.g_ref + cfg.gamma * rec.lambda * rec.ascent_lhs {
            violations.push(format!("k={k}: nonmonotone test fails"));
        }
        if !(rec.lambda <= rec.lambda_bar && rec.lambda_bar <= 1.0) {
            violations.push(format!("k={k}: lambda {} lambda_bar {}", rec.lambda, rec.lambda_bar));
        }
        if !(cfg.alpha_min..=cfg.alpha_max).contains(&rec.alpha) {
            violations.push(format!("k={k}: alpha {} out of range", rec.alpha));
        }
    }
    check(r.status == SolveStatus::Converged, format!("status {:?}", r.status))?;
    check(violations.is_empty(), violations.join("; "))?;
    Ok(format!(
        "{} iterations, m = {}, all per-iteration invariants hold",
        r.iterations,
        inst.map().len()
    ))
}

// 5. KKT quality at termination, n = 100 constrained.
fn termination_quality() -> Outcome {
    let inst = generated(100, 0.1, 1.0, 0.05, 5);
    let start = Instant::now();
    let r = solve(&inst, None, &SolverConfig::default()).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let f = r.primal_obj;
    check(r.status == SolveStatus::Converged, format!("status {:?}", r.status))?;
    check(r.kkt.direction_inf <= 1e-5, format!("direction {:e}", r.kkt.direction_inf))?;
    check(r.kkt.primal_feas <= 1e-4, format!("|A(X) - b|_inf = {:e}", r.kkt.primal_feas))?;
    check(
        (r.dual_obj - f).abs() <= 1e-3 * (1.0 + f.abs()),
        format!("|g - f| = {:e}", (r.dual_obj - f).abs()),
    )?;
    check(r.gap <= 1e-8, format!("gap {:e} is positive", r.gap))?;
    check(elapsed < Duration::from_secs(60), format!("took {elapsed:?}"))?;
    Ok(format!(
        "m = {}, {} iterations, {:?}, |A(X)-b| = {:.1e}, gap = {:.3e}",
        inst.map().len(),
        r.iterations,
        elapsed,
        r.kkt.primal_feas,
        r.gap
    ))
}

// 6. Loss functions vanish at the exact inverse; confusion counts partition.
fn metrics_exactness() -> Outcome {
    let mut worst: f64 = 0.0;
    for k in 0..10u64 {
        let n = 5 + 5 * k as usize;
        let mut s = Stream::new(600 + k, 0);
        let b = DMatrix::from_fn(n, n, |_, _| s.uniform_in(-1.0, 1.0));
        let m = b.transpose() * &b / n as f64 + DMatrix::identity(n, n) * 0.5;
        let sigma = SymMat::from_upper_fn(n, |i, j| m[(i, j)]).unwrap();
        let inv = inverse_from_factor(&cholesky(&sigma).unwrap());
        let le = entropy_loss(&sigma, &inv).map_err(|e| e.to_string())?;
        let lq = quadratic_loss(&sigma, &inv).map_err(|e| e.to_string())?;
        worst = worst.max(le.abs()).max(lq);
        check(le.abs() <= 1e-10 && lq <= 1e-10, format!("n={n}: loss_e {le:e}, loss_q {lq:e}"))?;
        let truth = gen_precision(&GenSpec {
            density: 0.2,
            seed: k,
            ..GenSpec::new(Family::Random, n)
        })
        .unwrap();
        let sc = support_scores(&truth, &inv, 0.05).map_err(|e| e.to_string())?;
        check(
            sc.tp + sc.tn + sc.fp + sc.fn_ == n * (n - 1) / 2,
            format!("n={n}: counts do not partition"),
        )?;
    }
    Ok(format!("10 matrices, n = 5..50, max loss {worst:.1e}"))
}

fn read_dir_bytes(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<_> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let p = e.unwrap().path();
            (p.file_name().unwrap().to_string_lossy().into_owned(), std::fs::read(&p).unwrap())
        })
        .collect();
    files.sort();
    files
}

// 7. Byte-identical generator output and sweep CSVs.
fn determinism() -> Outcome {
    let tmp = tempfile::tempdir().unwrap();
    let dirs: Vec<PathBuf> = (0..2).map(|k| tmp.path().join(format!("gen{k}"))).collect();
    for d in &dirs {
        let out = run_cli(&[
            "generate", "--family", "random", "--n", "50", "--density", "0.1", "--seed", "42",
            "--constraint-fraction", "0.5", "--out-dir", d.to_str().unwrap(),
        ]);
        check(out.status.code() == Some(0), format!("generate exited {:?}", out.status))?;
    }
    let (a, b) = (read_dir_bytes(&dirs[0]), read_dir_bytes(&dirs[1]));
    check(a == b, "generator outputs differ")?;

    let manifest = dirs[0].join("instance.json");
    let mut csv = Vec::new();
    for workers in ["1", "4"] {
        let out_path = tmp.path().join(format!("sweep{workers}.csv"));
        let out = run_cli(&[
            "sweep", "--instance", manifest.to_str().unwrap(), "--rho-grid", "0.2,0.1,0.05,0.02",
            "--out", out_path.to_str().unwrap(), "--parallel", workers,
        ]);
        check(out.status.code() == Some(0), format!("sweep exited {:?}", out.status))?;
        csv.push(std::fs::read(&out_path).unwrap());
    }
    check(csv[0] == csv[1], "sweep CSV differs between --parallel 1 and 4")?;
    Ok(format!("{} generated files identical, sweep CSV identical ({} bytes)", a.len(), csv[0].len()))
}

// 8. n = 500 unconstrained at desk scale.
fn desk_scale_performance() -> Outcome {
    let inst = generated(500, 0.1, 0.0, 0.01, 8);
    let start = Instant::now();
    let r = solve(&inst, None, &SolverConfig::default()).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    check(r.status == SolveStatus::Converged, format!("status {:?}", r.status))?;
    check(r.iterations <= 200, format!("{} iterations", r.iterations))?;
    check(elapsed <= Duration::from_secs(60), format!("took {elapsed:?}"))?;
    Ok(format!("{} iterations in {elapsed:.2?}", r.iterations))
}

fn write_instance(dir: &Path, c: &SymMat) -> PathBuf {
    write_matrix(&dir.join("c.sym"), c).unwrap();
    let manifest = InstanceManifest {
        schema_version: SCHEMA_VERSION,
        n: c.dim(),
        mu: 1.0,
        rho: RhoSpec::Uniform(0.1),
        c_path: "c.sym".into(),
        constraints: None,
        metadata: Default::default(),
    };
    let path = dir.join("instance.json");
    write_manifest(&path, &manifest).unwrap();
    path
}

// 9. Exit codes of the error paths.
fn error_paths() -> Outcome {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("report.json");
    let out = out.to_str().unwrap();

    let bad = tmp.path().join("indefinite");
    std::fs::create_dir(&bad).unwrap();
    let c = SymMat::from_rows(&[vec![1.0, 2.0], vec![2.0, 1.0]]).unwrap();
    let m = write_instance(&bad, &c);
    let code = run_cli(&["solve", "--instance", m.to_str().unwrap(), "--out", out]).status.code();
    check(code == Some(2), format!("non-PD C exited {code:?}"))?;

    let good = tmp.path().join("good");
    std::fs::create_dir(&good).unwrap();
    let inst = generated(20, 0.2, 0.0, 0.1, 9);
    let m = write_instance(&good, inst.c());
    let args = ["solve", "--instance", m.to_str().unwrap(), "--out", out, "--max-iter", "1"];
    let code = run_cli(&args).status.code();
    check(code == Some(3), format!("--max-iter 1 exited {code:?}"))?;

    std::fs::write(good.join("c.sym"), "%%SymCoord 20 2\n1 1 1.0\n1 1 2.0\n").unwrap();
    let o = run_cli(&["solve", "--instance", m.to_str().unwrap(), "--out", out]);
    let stderr = String::from_utf8_lossy(&o.stderr);
    check(o.status.code() == Some(4), format!("malformed file exited {:?}", o.status.code()))?;
    check(stderr.contains("c.sym:3:"), format!("no line diagnostic in '{}'", stderr.trim()))?;
    Ok(format!("exit 2 / 3 / 4; diagnostic: {}", stderr.trim()))
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 9] = [
        ("analytic optimum", analytic_optimum),
        ("oracle equivalence", oracle_equivalence),
        ("gradient check", gradient_check),
        ("invariant suite", invariant_suite),
        ("termination KKT quality", termination_quality),
        ("metrics exactness", metrics_exactness),
        ("determinism", determinism),
        ("desk-scale performance", desk_scale_performance),
        ("error-path contract", error_paths),
    ];
    let mut failed = Vec::new();
    for (k, (name, f)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        match outcome {
            Ok(detail) => println!("criterion {}: PASS  {name}: {detail}", k + 1),
            Err(why) => {
                println!("criterion {}: FAIL  {name}: {why}", k + 1);
                failed.push(k + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
