//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any
//! failure. Runs without the libtest harness so the lines always print.

mod common;

use std::path::Path;
use std::process::Command;
use std::time::Instant;

use common::{class_member, homogeneous_spec, model_spec, pucci_plus_oracle, to_na};
use degenfb::barrier::{growth_check, select_params, verify_supersolution, BarrierInput, SupersolutionData};
use degenfb::geometry::GeometryOptions;
use degenfb::oned::{integrate_profile, slope_from_law, SlopeLaw, TwoPoint};
use degenfb::operators::{acp_check, pucci_minus, pucci_plus, recession};
use degenfb::solver::{comparison_check, cutting_check, eps_sweep, solve_peps, supersolution_init, SweepOptions};
use degenfb::{Grid, OperatorKind, ReactionParams, ScalarField, SolveConfig, SymMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 20_240_601;

struct Outcome {
    passed: bool,
    detail: String,
}

impl Outcome {
    fn new(passed: bool, detail: impl Into<String>) -> Self {
        Outcome { passed, detail: detail.into() }
    }
}

fn random_sym(rng: &mut ChaCha8Rng, bound: f64) -> SymMatrix {
    SymMatrix::new_2d(rng.gen_range(-bound..bound), rng.gen_range(-bound..bound), rng.gen_range(-bound..bound))
}

/// Barrier margins for `count` random admissible tuples, as a printable report.
fn barrier_report(count: usize) -> (bool, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let pairs = [(0.5, 0.5), (0.5, 1.0), (0.5, 2.0), (1.0, 1.0), (1.0, 2.0), (2.0, 2.0)];
    let mut ok = true;
    let mut worst = f64::NEG_INFINITY;
    let mut worst_growth = f64::INFINITY;
    for _ in 0..count {
        let (p, q) = pairs[rng.gen_range(0..pairs.len())];
        let inp = BarrierInput {
            dim: 2,
            lambda: 1.0,
            big_lambda: [1.0, 2.0, 4.0][rng.gen_range(0..3)],
            l1: 1.0,
            l2: 1.0,
            p,
            q,
            a_sup: [0.0, 1.0][rng.gen_range(0..2)],
            t0: rng.gen_range(0.05..0.45),
            t_big: rng.gen_range(0.55..0.95),
            j_star: [0.1, 1.0, 10.0][rng.gen_range(0..3)],
        };
        let Ok(bp) = select_params(&inp) else {
            ok = false;
            continue;
        };
        let s = verify_supersolution(&bp, &SupersolutionData::from(&inp), 1000).unwrap();
        let g = growth_check(&bp).unwrap();
        let m = s.annulus_margin.max(s.outer_margin).max(s.core_margin);
        worst = worst.max(m);
        worst_growth = worst_growth.min(g.worst_margin);
        ok &= s.passed && g.passed && m <= 1e-10;
    }
    (ok, format!("{count} tuples, worst supersolution margin {worst:.3e}, worst growth margin {worst_growth:.3e}"))
}

fn criterion_1() -> Outcome {
    let (ok, detail) = barrier_report(20);
    Outcome::new(ok, detail)
}

fn operator_report(samples: usize) -> (bool, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 1);
    let ells = [(1.0, 1.0), (1.0, 2.0), (1.0, 4.0)];
    let (mut homog, mut dual, mut sandwich, mut sup_rep, mut class_gap, mut rec) = (0f64, 0f64, 0f64, 0f64, 0f64, 0f64);
    for _ in 0..samples {
        let (l, big) = ells[rng.gen_range(0..ells.len())];
        let x = random_sym(&mut rng, 10.0);
        let y = random_sym(&mut rng, 10.0);
        let t = rng.gen_range(0.0..5.0);
        let tx = x.scale(t);
        homog = homog.max((pucci_plus(l, big, &tx) - t * pucci_plus(l, big, &x)).abs());
        homog = homog.max((pucci_minus(l, big, &tx) - t * pucci_minus(l, big, &x)).abs());
        dual = dual.max((pucci_plus(l, big, &(-x)) + pucci_minus(l, big, &x)).abs());
        let d = x - y;
        for op in [
            OperatorKind::PucciPlus { lambda: l, big_lambda: big },
            OperatorKind::PucciMinus { lambda: l, big_lambda: big },
            OperatorKind::Laplacian,
        ] {
            let (ol, ob) = op.ellipticity();
            let diff = op.eval(&x) - op.eval(&y);
            sandwich = sandwich.max(pucci_minus(ol, ob, &d) - diff).max(diff - pucci_plus(ol, ob, &d));
        }
        sup_rep = sup_rep.max((pucci_plus(l, big, &x) - pucci_plus_oracle(l, big, &x)).abs());
        let a = class_member(l, big, rng.gen_range(0.0..6.3), rng.gen(), rng.gen());
        class_gap = class_gap.max((a * to_na(&x)).trace() - pucci_plus(l, big, &x));
        let f3 = OperatorKind::HessianFm { m: 3, lambda: 1.0, big_lambda: 1.0 };
        rec = rec.max((recession(&f3, &x, 1e-4).unwrap() - x.trace()).abs());
    }
    let mut acp = f64::NEG_INFINITY;
    for m in [1, 3, 5] {
        let kind = OperatorKind::HessianFm { m, lambda: 1.0, big_lambda: 1.0 };
        acp = acp.max(acp_check(&kind, 2, samples, SEED + u64::from(m)).unwrap().worst_margin);
    }
    let ok = homog <= 1e-12
        && dual <= 1e-12
        && sandwich <= 1e-12
        && sup_rep <= 1e-10
        && class_gap <= 1e-10
        && acp <= 1e-12
        && rec <= 1e-3;
    (
        ok,
        format!(
            "{samples} matrices: homogeneity {homog:.1e}, duality {dual:.1e}, sandwich {sandwich:.1e}, \
             sup oracle {sup_rep:.1e}, class gap {class_gap:.1e}, ACP margin {acp:.1e}, F3 recession {rec:.1e}"
        ),
    )
}

fn criterion_2() -> Outcome {
    let (ok, detail) = operator_report(100_000);
    Outcome::new(ok, detail)
}

fn law_report() -> (bool, String) {
    let s0 = slope_from_law(&SlopeLaw::new(0.0, 0.0, 0.0, 1.0).unwrap()).unwrap();
    let s1 = slope_from_law(&SlopeLaw::new(1.0, 2.0, 0.0, 1.0).unwrap()).unwrap();
    let closed = (s0 - 2f64.sqrt()).abs().max((s1 - 3f64.cbrt()).abs());
    let line = Grid::new_1d(0.0, 1.0, 3).unwrap();
    let react = ReactionParams::new(0.01, ScalarField::constant(line, 1.0), ScalarField::constant(line, 0.0)).unwrap();
    let mut identity = 0f64;
    for (p, q, k) in [(0.5, 1.0, 0.0), (1.0, 2.0, 1.0), (2.0, 2.0, 4.0), (0.5, 3.0, 0.3)] {
        let r = integrate_profile(p, q, k, &react, 64).unwrap();
        identity = identity.max(r.identity_residual).max((r.slope_top - r.law_slope).abs());
    }
    (closed <= 1e-12 && identity <= 1e-10, format!("closed forms {closed:.1e}, profile identity {identity:.1e}"))
}

fn criterion_3() -> Outcome {
    let (law_ok, law_detail) = law_report();
    let cfg = SolveConfig { cfl: 0.9, tol: 1e-8, ..SolveConfig::default() };
    let coarse = TwoPoint::default();
    let h_ok = (coarse.length / (coarse.nodes - 1) as f64 - coarse.eps / 8.0).abs() < 1e-15;
    let a = coarse.cross_validate(&cfg);
    let b = coarse.refined().cross_validate(&cfg);
    match (a, b) {
        (Ok(a), Ok(b)) => Outcome::new(
            law_ok && h_ok && a.discrepancy <= 0.05 && b.discrepancy < a.discrepancy,
            format!(
                "{law_detail}; slope discrepancy {:.3}% at h = eps/8, {:.4}% at h = eps/16",
                100.0 * a.discrepancy,
                100.0 * b.discrepancy
            ),
        ),
        (a, b) => Outcome::new(false, format!("cross-validation failed: {:?} / {:?}", a.err(), b.err())),
    }
}

fn criterion_4() -> Outcome {
    let n = 65;
    let grid = Grid::new_2d([0.0, 0.0], [1.0, 1.0], [n, n]).unwrap();
    let tol = 1e-9;
    let cfg = SolveConfig { cfl: 0.9, tol, ..SolveConfig::default() };
    let data: [fn([f64; 2]) -> f64; 2] = [|x| 0.6 + x[0] - 0.5 * x[1], |x| 1.0 + x[0].exp() * x[1].sin()];
    let mut ok = true;
    let mut worst_cut = 0f64;
    let mut worst_max = f64::NEG_INFINITY;
    for op in [OperatorKind::Laplacian, OperatorKind::PucciMinus { lambda: 1.0, big_lambda: 2.0 }] {
        for g in data {
            let spec = homogeneous_spec(grid, op, g);
            let (rep, deg, pure) = cutting_check(&spec, &cfg).unwrap();
            ok &= rep.passed && rep.worst <= 10.0 * tol;
            worst_cut = worst_cut.max(rep.worst);
            for u in [&deg, &pure] {
                worst_max = worst_max.max(u.max() - spec.g().boundary_max());
            }
        }
    }
    let small = Grid::new_2d([0.0, 0.0], [1.0, 1.0], [33, 33]).unwrap();
    let smooth = homogeneous_spec(small, OperatorKind::Laplacian, data[1]);
    let c = SolveConfig { project_nonneg: false, ..cfg };
    let (u0, _) = supersolution_init(&smooth, &c).unwrap();
    let forced = smooth
        .with_reaction(
            ReactionParams::new(1.0, ScalarField::constant(small, 0.0), ScalarField::constant(small, 1.0)).unwrap(),
        )
        .unwrap();
    let (u1, _) = supersolution_init(&forced, &c).unwrap();
    let cmp = comparison_check(&u1, &u0, 10.0 * tol).unwrap();
    ok &= cmp.passed;
    worst_max = worst_max.max(u0.max() - smooth.g().boundary_max()).max(u1.max() - forced.g().boundary_max());
    ok &= worst_max <= tol;
    Outcome::new(
        ok,
        format!(
            "{n}x{n} cutting discrepancy {worst_cut:.1e} (limit {:.0e}), 33x33 ordering violation {:.1e}, \
             max principle excess {worst_max:.1e}",
            10.0 * tol,
            cmp.worst
        ),
    )
}

fn factor_two(values: &[f64]) -> bool {
    values.windows(2).all(|w| {
        let (lo, hi) = if w[0] <= w[1] { (w[0], w[1]) } else { (w[1], w[0]) };
        lo > 0.0 && hi <= 2.0 * lo
    })
}

fn criteria_5_and_6() -> (Outcome, Outcome) {
    let spec = model_spec(129, 0.75, 0.1);
    let cfg = SolveConfig { cfl: 0.9, tol: 1e-6, init_tol: Some(1e-3), ..SolveConfig::default() };
    let opts = SweepOptions {
        geometry: GeometryOptions { growth_threshold: 2.0, ..GeometryOptions::default() },
        ..SweepOptions::default()
    };
    let sweep = match eps_sweep(&spec, &cfg, &[0.1, 0.05, 0.025], &opts) {
        Ok(s) => s,
        Err(e) => {
            let o = || Outcome::new(false, format!("sweep failed: {e}"));
            return (o(), o());
        }
    };
    let reports: Vec<_> = sweep.entries.iter().filter_map(|e| e.geometry.as_ref().ok()).collect();
    if reports.len() != sweep.entries.len() {
        let o = || Outcome::new(false, "geometry failed on some entry");
        return (o(), o());
    }
    let mut ok5 = true;
    let mut unstable = Vec::new();
    let names: Vec<String> = reports[0].uniform_scalars().into_iter().map(|(n, _)| n).collect();
    for (i, name) in names.iter().enumerate() {
        let series: Vec<f64> = reports.iter().map(|r| r.uniform_scalars()[i].1).collect();
        if !factor_two(&series) {
            ok5 = false;
            unstable.push(name.clone());
        }
    }
    let growth = reports.iter().map(|r| r.growth_min).fold(f64::INFINITY, f64::min);
    let density = reports.iter().map(|r| r.density_min).fold(f64::INFINITY, f64::min);
    let harnack = reports.iter().map(|r| r.harnack_max).fold(0.0, f64::max);
    let violations: usize = sweep.entries.iter().map(|e| e.result.monotone_violations).sum();
    let excess =
        sweep.entries.iter().map(|e| e.result.u.max() - spec.g().boundary_max()).fold(f64::NEG_INFINITY, f64::max);
    ok5 &= growth > 0.0 && density > 0.02 && harnack < 100.0 && violations == 0 && excess <= cfg.tol;
    let d5 = format!(
        "129x129, eps 0.1/0.05/0.025: {} of {} scalars within factor 2{}; growthMin {growth:.3}, densityMin {density:.3}, \
         harnackMax {harnack:.3}, monotone violations {violations}, max principle excess {excess:.1e}",
        names.len() - unstable.len(),
        names.len(),
        if unstable.is_empty() { String::new() } else { format!(" (unstable: {})", unstable.join(", ")) },
    );

    let sups = &sweep.successive_sup;
    let hd: Vec<f64> = sweep.successive_hausdorff.iter().map(|d| d.unwrap_or(f64::INFINITY)).collect();
    let porosity = reports.iter().map(|r| r.porosity).fold(f64::INFINITY, f64::min);
    let ok6 = sups.windows(2).all(|w| w[1] <= w[0])
        && hd.iter().all(|d| d.is_finite())
        && hd.windows(2).all(|w| w[1] <= w[0])
        && porosity >= 0.05;
    let d6 = format!("successive sup {sups:.4?}, successive Hausdorff {hd:.4?}, min porosity {porosity:.2}");
    (Outcome::new(ok5, d5), Outcome::new(ok6, d6))
}

fn write(path: &Path, text: &str) {
    std::fs::write(path, text).unwrap();
}

fn run_cli(dir: &Path, config: &str, out: &str, threads: usize, args: &[&str]) -> bool {
    let status = Command::new(env!("CARGO_BIN_EXE_degenfb"))
        .current_dir(dir)
        .args(["--config", config, "--out", out, "--seed", "7", "--threads", &threads.to_string()])
        .args(args)
        .env("DEGENFB_LOG", "quiet")
        .status()
        .unwrap();
    status.success()
}

fn tree_bytes(root: &Path) -> Vec<(String, Vec<u8>)> {
    let mut out = Vec::new();
    let mut stack = vec![root.to_path_buf()];
    while let Some(dir) = stack.pop() {
        for entry in std::fs::read_dir(&dir).unwrap() {
            let path = entry.unwrap().path();
            if path.is_dir() {
                stack.push(path);
            } else {
                let rel = path.strip_prefix(root).unwrap().to_string_lossy().into_owned();
                out.push((rel, std::fs::read(&path).unwrap()));
            }
        }
    }
    out.sort();
    out
}

fn criterion_7() -> Outcome {
    let barrier = barrier_report(20) == barrier_report(20);
    let operators = operator_report(10_000) == operator_report(10_000);
    let law = law_report() == law_report();
    let in_process = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| {
            let cfg = SolveConfig { cfl: 0.9, tol: 1e-6, init_tol: Some(1e-3), ..SolveConfig::default() };
            let r = solve_peps(&model_spec(65, 0.75, 0.1), &cfg).unwrap();
            format!("{:?}", (r.u.values(), r.iterations, r.final_residual))
        })
    };
    let solve_threads = in_process(1) == in_process(3);

    let dir = tempfile::tempdir().unwrap();
    let model = r#"{
  "grid": { "lo": [0, 0], "hi": [0.75, 0.75], "n": [33, 33] },
  "degeneracy": { "p": 1, "q": 2, "a": { "preset": "constant", "value": 1 } },
  "reaction": { "eps": 0.1, "Q": { "preset": "constant", "value": 1 } },
  "g": { "preset": "ramp", "axis": 0, "start": 0.5, "end": 0 },
  "solve": { "cfl": 0.9, "tol": 1e-6, "initTol": 1e-3 },
  "sweep": { "epsList": [0.2, 0.1] },
  "geometry": { "growthThreshold": 2, "hausdorffDeltaFractions": [0.5], "centers": { "mode": "random", "count": 50 } },
  "barrier": { "t0": 0.25, "T0": 0.75 },
  "oned": { "eps": 0.05, "nodes": 41, "profileSamples": 16 }
}"#;
    write(&dir.path().join("model.json"), model);
    let commands: [&[&str]; 5] =
        [&["solve"], &["geometry", "--field", "solve/u.csv"], &["sweep"], &["barrier"], &["oned"]];
    let mut cli_ok = true;
    for (tag, threads) in [("a", 1), ("b", 1), ("c", 2)] {
        for cmd in commands {
            let out = if cmd[0] == "geometry" { format!("{tag}/geometry") } else { format!("{tag}/{}", cmd[0]) };
            let mut args: Vec<String> = cmd.iter().map(|s| s.to_string()).collect();
            if cmd[0] == "geometry" {
                args[2] = format!("{tag}/solve/u.csv");
            }
            let args: Vec<&str> = args.iter().map(String::as_str).collect();
            cli_ok &= run_cli(dir.path(), "model.json", &out, threads, &args);
        }
    }
    let trees: Vec<_> = ["a", "b", "c"].iter().map(|t| tree_bytes(&dir.path().join(t))).collect();
    let files = trees[0].len();
    let cli_same = cli_ok && files > 0 && trees[0] == trees[1] && trees[0] == trees[2];
    Outcome::new(
        barrier && operators && law && solve_threads && cli_same,
        format!(
            "reruns identical: barrier {barrier}, operators {operators}, law {law}; solve across 1/3 threads {solve_threads}; \
             CLI ({files} files, seed 7, threads 1/1/2) {cli_same}"
        ),
    )
}

fn main() {
    let start = Instant::now();
    let mut all = true;
    let mut report = |label: &str, o: Outcome, t: Instant| {
        all &= o.passed;
        println!(
            "{} criterion {label}: {} [{:.1} s]",
            if o.passed { "PASS" } else { "FAIL" },
            o.detail,
            t.elapsed().as_secs_f64()
        );
    };
    let t = Instant::now();
    report("1 (barrier suite)", criterion_1(), t);
    let t = Instant::now();
    report("2 (operator algebra)", criterion_2(), t);
    let t = Instant::now();
    report("3 (1D slope law)", criterion_3(), t);
    let t = Instant::now();
    report("4 (cutting, comparison, max principle)", criterion_4(), t);
    let t = Instant::now();
    let (c5, c6) = criteria_5_and_6();
    report("5 (eps-uniform estimates)", c5, t);
    report("6 (limit behavior)", c6, t);
    let t = Instant::now();
    report("7 (reproducibility)", criterion_7(), t);
    println!("acceptance total {:.1} s", start.elapsed().as_secs_f64());
    if !all {
        std::process::exit(1);
    }
}
