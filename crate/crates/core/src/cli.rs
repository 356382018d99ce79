//! Run orchestration behind the `degenfb` binary.
//!
//! Exit codes: 0 on success, 1 on validation errors, 2 on numerical failures.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{json, Value};

use crate::barrier::{growth_check, select_params, verify_supersolution, SupersolutionData};
use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::geometry::analyze;
use crate::grid::{read_csv, write_csv, ScalarField};
use crate::oned::{integrate_profile, slope_from_law, SlopeLaw};
use crate::solver::{eps_sweep, solve_peps, ProblemSpec, SolveResult, SweepOptions};

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Command {
    Solve,
    Sweep,
    Barrier,
    Oned,
    /// Analyzes a stored field; defaults to `u.csv` in the output directory.
    Geometry {
        field: Option<PathBuf>,
    },
    Validate,
}

#[derive(Debug, Clone)]
pub struct Invocation {
    pub command: Command,
    pub config: PathBuf,
    pub out: PathBuf,
    /// Overrides the config seed.
    pub seed: Option<u64>,
}

/// Exit code for an error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidParameter { .. } | Error::Precondition(_) | Error::Io(_) | Error::Csv(_) | Error::Json(_) => 1,
        Error::NotConverged { .. }
        | Error::NonFinite { .. }
        | Error::CheckFailed { .. }
        | Error::Quadrature(_)
        | Error::EmptySet(_) => 2,
    }
}

/// Runs an invocation and maps the outcome to an exit code, printing errors
/// to stderr. A non-converged solve leaves `residual_trace.csv` behind.
pub fn run(inv: &Invocation) -> i32 {
    match execute(inv) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            if let Error::NotConverged { trace, .. } = &e {
                if let Err(io) = write_trace(&inv.out, trace) {
                    eprintln!("error: could not write residual trace: {io}");
                }
            }
            exit_code(&e)
        }
    }
}

fn write_trace(out: &Path, trace: &[(usize, f64)]) -> Result<()> {
    fs::create_dir_all(out)?;
    let mut w = csv::Writer::from_path(out.join("residual_trace.csv"))?;
    w.write_record(["iteration", "residual"])?;
    for (it, r) in trace {
        w.write_record([it.to_string(), format!("{r:.16e}")])?;
    }
    w.flush()?;
    Ok(())
}

fn base_dir(config: &Path) -> PathBuf {
    config.parent().map(Path::to_path_buf).unwrap_or_default()
}

fn load(inv: &Invocation) -> Result<RunConfig> {
    let mut cfg = RunConfig::from_path(&inv.config)?;
    if inv.seed.is_some() {
        cfg.seed = inv.seed;
    }
    Ok(cfg)
}

/// Executes an invocation. Every run validates first and refuses to start
/// on any violation.
pub fn execute(inv: &Invocation) -> Result<()> {
    let cfg = load(inv)?;
    let base = base_dir(&inv.config);
    let report = validate(&cfg, &base);
    if inv.command == Command::Validate {
        println!("{}", serde_json::to_string_pretty(&report)?);
        return match report.errors.first() {
            None => Ok(()),
            Some(_) => Err(Error::invalid("config", format!("{} violation(s)", report.errors.len()))),
        };
    }
    if !report.errors.is_empty() {
        return Err(Error::invalid("config", report.errors.join("; ")));
    }
    fs::create_dir_all(&inv.out)?;
    match &inv.command {
        Command::Solve => run_solve(&cfg, &base, &inv.out),
        Command::Sweep => run_sweep(&cfg, &base, &inv.out),
        Command::Barrier => run_barrier(&cfg, &base, &inv.out),
        Command::Oned => run_oned(&cfg, &inv.out),
        Command::Geometry { field } => {
            let path = field.clone().unwrap_or_else(|| inv.out.join("u.csv"));
            run_geometry(&cfg, &path, &inv.out)
        }
        Command::Validate => unreachable!(),
    }
}

/// Outcome of a dry run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub schema_version: &'static str,
    /// Checks that ran and passed.
    pub checked: Vec<String>,
    pub errors: Vec<String>,
}

/// Checks every section present in the config without solving anything.
pub fn validate(cfg: &RunConfig, base: &Path) -> ValidationReport {
    let mut rep = ValidationReport { schema_version: SCHEMA_VERSION, checked: Vec::new(), errors: Vec::new() };
    let mut note = |name: &str, r: Result<()>| match r {
        Ok(()) => rep.checked.push(name.to_string()),
        Err(e) => rep.errors.push(format!("{name}: {e}")),
    };

    note("operator", cfg.op().map(|_| ()));
    note("solve", cfg.solve.validate());

    let grid = cfg.grid.as_ref().map(|_| cfg.grid());
    if let Some(g) = &grid {
        note("grid", g.as_ref().map(|_| ()).map_err(clone_err));
    }
    let grid = grid.and_then(|g| g.ok());

    if let Some(grid) = grid {
        if cfg.degeneracy.is_some() {
            note("degeneracy", cfg.degeneracy(grid, base).map(|_| ()));
        }
        if cfg.reaction.is_some() {
            note("reaction", cfg.reaction(grid, base).map(|_| ()));
        }
        if cfg.g.is_some() {
            let spec = cfg.problem(base);
            note("g", spec.as_ref().map(|_| ()).map_err(clone_err));
            if let Ok(spec) = spec {
                note("resolvability", spec.check_resolvable());
                if let Some(sw) = &cfg.sweep {
                    note("sweep", check_sweep(&spec, &sw.eps_list));
                }
            }
        }
    }
    let mut orphans = Vec::new();
    if grid.is_none() {
        for (name, present) in [
            ("degeneracy", cfg.degeneracy.is_some()),
            ("reaction", cfg.reaction.is_some() && cfg.barrier.as_ref().is_none_or(|b| b.j_star.is_none())),
            ("g", cfg.g.is_some()),
            ("sweep", cfg.sweep.is_some()),
        ] {
            if present {
                orphans.push(format!("{name}: needs a `grid` section"));
            }
        }
    }
    if let Some(b) = &cfg.barrier {
        let r = cfg.barrier_input(base).and_then(|(input, _)| {
            let bp = select_params(&input)?;
            if let Some(l) = b.l {
                bp.with_l(l)?;
            }
            if b.samples < 3 {
                return Err(Error::invalid("samples", "need at least 3 radii"));
            }
            Ok(())
        });
        note("barrier", r);
    }
    if let Some(o) = &cfg.oned {
        let r = o.problem.spec(1.0).and_then(|spec| {
            spec.check_resolvable()?;
            SlopeLaw::new(o.problem.p, o.problem.q, o.problem.kappa, 1.0)?;
            if o.profile_samples == 0 {
                return Err(Error::invalid("profileSamples", "need at least one sample"));
            }
            Ok(())
        });
        note("oned", r);
    }
    rep.errors.extend(orphans);
    rep
}

fn clone_err(e: &Error) -> Error {
    Error::invalid("config", e.to_string())
}

fn check_sweep(spec: &ProblemSpec, eps_list: &[f64]) -> Result<()> {
    if eps_list.is_empty() {
        return Err(Error::invalid("epsList", "need at least one eps"));
    }
    if eps_list.windows(2).any(|w| w[1] > w[0]) {
        return Err(Error::invalid("epsList", "eps values must be non-increasing"));
    }
    for &eps in eps_list {
        spec.with_eps(eps)?.check_resolvable()?;
    }
    Ok(())
}

fn write_json(path: &Path, value: &impl Serialize) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

fn with_schema(value: Value) -> Value {
    let mut obj = match value {
        Value::Object(m) => m,
        other => {
            let mut m = serde_json::Map::new();
            m.insert("report".into(), other);
            m
        }
    };
    obj.insert("schema_version".into(), Value::String(SCHEMA_VERSION.into()));
    Value::Object(obj)
}

fn solve_summary(spec: &ProblemSpec, res: &SolveResult) -> Value {
    let sup_u = res.u.max();
    let sup_g = spec.g().boundary_max();
    json!({
        "eps": spec.reaction().eps(),
        "iterations": res.iterations,
        "initIterations": res.init_iterations,
        "finalResidual": res.final_residual,
        "monotoneViolations": res.monotone_violations,
        "supU": sup_u,
        "supG": sup_g,
        "maxPrinciple": sup_u <= sup_g.max(0.0) + 1e-12,
    })
}

fn run_solve(cfg: &RunConfig, base: &Path, out: &Path) -> Result<()> {
    let spec = cfg.problem(base)?;
    let res = solve_peps(&spec, &cfg.solve)?;
    log::info!("solved in {} iterations", res.iterations);
    write_csv(&res.u, fs::File::create(out.join("u.csv"))?)?;
    write_json(&out.join("result.json"), &with_schema(solve_summary(&spec, &res)))
}

fn run_sweep(cfg: &RunConfig, base: &Path, out: &Path) -> Result<()> {
    let spec = cfg.problem(base)?;
    let sw = cfg.sweep()?;
    let opts = SweepOptions { geometry: cfg.geometry_options(), start: sw.start };
    let sweep = eps_sweep(&spec, &cfg.solve, &sw.eps_list, &opts)?;
    let mut runs = Vec::new();
    for (k, entry) in sweep.entries.iter().enumerate() {
        let dir = out.join(format!("eps_{k}"));
        fs::create_dir_all(&dir)?;
        let spec_k = spec.with_eps(entry.eps)?;
        write_csv(&entry.result.u, fs::File::create(dir.join("u.csv"))?)?;
        write_json(&dir.join("result.json"), &with_schema(solve_summary(&spec_k, &entry.result)))?;
        let geometry = match &entry.geometry {
            Ok(g) => serde_json::to_value(g)?,
            Err(msg) => json!({ "error": msg }),
        };
        write_json(&dir.join("geometry.json"), &with_schema(geometry))?;
        runs.push(json!({ "eps": entry.eps, "dir": format!("eps_{k}") }));
    }
    let summary = json!({ "runs": runs, "summary": sweep.summary() });
    write_json(&out.join("sweep.json"), &with_schema(summary))
}

fn run_barrier(cfg: &RunConfig, base: &Path, out: &Path) -> Result<()> {
    let (input, b) = cfg.barrier_input(base)?;
    let mut bp = select_params(&input)?;
    if let Some(l) = b.l {
        bp = bp.with_l(l)?;
    }
    let sup = verify_supersolution(&bp, &SupersolutionData::from(&input), b.samples)?;
    let growth = growth_check(&bp)?;
    let report = json!({
        "input": {
            "dim": input.dim, "lambda": input.lambda, "Lambda": input.big_lambda,
            "L1": input.l1, "L2": input.l2, "p": input.p, "q": input.q,
            "aSup": input.a_sup, "t0": input.t0, "T0": input.t_big, "jStar": input.j_star,
        },
        "params": bp.report(),
        "supersolution": sup,
        "growth": growth,
    });
    write_json(&out.join("barrier.json"), &with_schema(report))?;
    if !sup.passed || !growth.passed {
        return Err(Error::CheckFailed {
            check: "barrier",
            detail: format!("supersolution passed = {}, growth passed = {}", sup.passed, growth.passed),
        });
    }
    Ok(())
}

fn run_oned(cfg: &RunConfig, out: &Path) -> Result<()> {
    let o = cfg.oned()?;
    let tp = o.problem;
    let law = SlopeLaw::new(tp.p, tp.q, tp.kappa, tp.profile.integral())?;
    let law_slope = slope_from_law(&law)?;
    let spec = tp.spec(1.0)?;
    let profile = integrate_profile(tp.p, tp.q, tp.kappa, spec.reaction(), o.profile_samples)?;
    let coarse = tp.cross_validate(&cfg.solve)?;
    let fine = tp.refined().cross_validate(&cfg.solve)?;
    let report = json!({
        "law": law,
        "lawSlope": law_slope,
        "profile": profile,
        "crossValidation": [coarse, fine],
    });
    write_json(&out.join("oned.json"), &with_schema(report))
}

fn run_geometry(cfg: &RunConfig, field: &Path, out: &Path) -> Result<()> {
    let u: ScalarField = read_csv(fs::File::open(field)?)?;
    let eps = match &cfg.reaction {
        Some(r) => r.eps,
        None => return Err(Error::invalid("reaction", "geometry needs `reaction.eps`")),
    };
    if let Ok(grid) = cfg.grid() {
        if &grid != u.grid() {
            return Err(Error::invalid("field", "field lives on another grid than the config"));
        }
    }
    let report = analyze(&u, eps, &cfg.geometry_options())?;
    write_json(&out.join("geometry.json"), &with_schema(serde_json::to_value(report)?))
}
