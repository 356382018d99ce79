//! JSON run configuration and named field presets.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::barrier::BarrierInput;
use crate::error::{Error, Result};
use crate::geometry::GeometryOptions;
use crate::grid::{read_csv, Grid, GridSpec, ScalarField};
use crate::oned::TwoPoint;
use crate::operators::{DegeneracyParams, OperatorKind};
use crate::reaction::{Profile, ReactionParams};
use crate::solver::{ProblemSpec, SolveConfig, SweepStart};

/// A scalar field described by name.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "preset", rename_all = "snake_case", deny_unknown_fields)]
pub enum FieldSpec {
    Constant {
        value: f64,
    },
    /// Linear along `axis`, from `start` at the low end to `end` at the high end.
    Ramp {
        #[serde(default)]
        axis: usize,
        start: f64,
        end: f64,
    },
    /// `base + amplitude exp(-|x - center|^2 / (2 width^2))`.
    Gaussian {
        center: Vec<f64>,
        width: f64,
        amplitude: f64,
        #[serde(default)]
        base: f64,
    },
    /// `cells` squares per axis alternating between `low` and `high`.
    Checkerboard {
        cells: usize,
        low: f64,
        high: f64,
    },
    Csv {
        path: PathBuf,
    },
}

impl FieldSpec {
    /// Evaluates the preset; relative CSV paths resolve against `base_dir`.
    pub fn build(&self, grid: Grid, base_dir: &Path) -> Result<ScalarField> {
        let lo = grid.lo();
        let hi = grid.hi();
        match self {
            FieldSpec::Constant { value } => {
                finite("value", *value)?;
                Ok(ScalarField::constant(grid, *value))
            }
            FieldSpec::Ramp { axis, start, end } => {
                if *axis >= grid.dim() {
                    return Err(Error::invalid("axis", format!("grid has {} axes, got axis {axis}", grid.dim())));
                }
                finite("start", *start)?;
                finite("end", *end)?;
                let (a, s, e) = (*axis, *start, *end);
                ScalarField::from_fn(grid, |x| s + (e - s) * (x[a] - lo[a]) / (hi[a] - lo[a]))
            }
            FieldSpec::Gaussian { center, width, amplitude, base } => {
                if center.len() != grid.dim() {
                    return Err(Error::invalid("center", format!("need {} coordinates", grid.dim())));
                }
                if !(*width > 0.0 && width.is_finite()) {
                    return Err(Error::invalid("width", format!("need width > 0, got {width}")));
                }
                finite("amplitude", *amplitude)?;
                finite("base", *base)?;
                let c = [center[0], center.get(1).copied().unwrap_or(0.0)];
                let (w, amp, b) = (*width, *amplitude, *base);
                ScalarField::from_fn(grid, |x| {
                    let r2 = (x[0] - c[0]).powi(2) + (x[1] - c[1]).powi(2);
                    b + amp * (-r2 / (2.0 * w * w)).exp()
                })
            }
            FieldSpec::Checkerboard { cells, low, high } => {
                if *cells == 0 {
                    return Err(Error::invalid("cells", "need at least one cell"));
                }
                finite("low", *low)?;
                finite("high", *high)?;
                let (c, l, h) = (*cells, *low, *high);
                let cell = |x: f64, a: usize| {
                    let t = (x - lo[a]) / (hi[a] - lo[a]);
                    ((t * c as f64).floor() as usize).min(c - 1)
                };
                ScalarField::from_fn(grid, |x| {
                    let k = cell(x[0], 0) + if grid.dim() == 2 { cell(x[1], 1) } else { 0 };
                    if k % 2 == 0 {
                        l
                    } else {
                        h
                    }
                })
            }
            FieldSpec::Csv { path } => {
                let full = if path.is_absolute() { path.clone() } else { base_dir.join(path) };
                let field = read_csv(std::fs::File::open(&full)?)?;
                if field.grid() != &grid {
                    return Err(Error::invalid("path", format!("{} lives on another grid", full.display())));
                }
                Ok(field)
            }
        }
    }
}

fn finite(name: &'static str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(name, format!("must be finite, got {v}")))
    }
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DegeneracyConfig {
    pub p: f64,
    pub q: f64,
    pub a: FieldSpec,
    #[serde(rename = "L1", default = "one")]
    pub l1: f64,
    #[serde(rename = "L2", default = "one")]
    pub l2: f64,
}

fn zero_field() -> FieldSpec {
    FieldSpec::Constant { value: 0.0 }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReactionConfig {
    pub eps: f64,
    #[serde(rename = "Q")]
    pub q: FieldSpec,
    #[serde(rename = "fEps", default = "zero_field")]
    pub f_eps: FieldSpec,
    #[serde(default)]
    pub profile: Profile,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
pub struct SweepConfig {
    pub eps_list: Vec<f64>,
    #[serde(default)]
    pub start: SweepStart,
}

fn default_samples() -> usize {
    1000
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BarrierConfig {
    pub t0: f64,
    #[serde(rename = "T0")]
    pub t_big: f64,
    /// Core radius; defaults to the smallest admissible one.
    #[serde(rename = "L", default)]
    pub l: Option<f64>,
    #[serde(default = "default_samples")]
    pub samples: usize,
    /// Reaction floor; computed from the reaction when absent.
    #[serde(rename = "jStar", default)]
    pub j_star: Option<f64>,
}

fn default_profile_samples() -> usize {
    64
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct OnedConfig {
    #[serde(flatten)]
    pub problem: TwoPoint,
    #[serde(default = "default_profile_samples")]
    pub profile_samples: usize,
}

/// Everything a run can read. Sections not needed by a subcommand may be absent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub grid: Option<GridSpec>,
    #[serde(default)]
    pub degeneracy: Option<DegeneracyConfig>,
    #[serde(default = "laplacian")]
    pub operator: OperatorKind,
    #[serde(default)]
    pub reaction: Option<ReactionConfig>,
    #[serde(default)]
    pub g: Option<FieldSpec>,
    #[serde(default)]
    pub solve: SolveConfig,
    #[serde(default)]
    pub sweep: Option<SweepConfig>,
    #[serde(default)]
    pub geometry: GeometryOptions,
    #[serde(default)]
    pub barrier: Option<BarrierConfig>,
    #[serde(default)]
    pub oned: Option<OnedConfig>,
    #[serde(default)]
    pub seed: Option<u64>,
}

fn laplacian() -> OperatorKind {
    OperatorKind::Laplacian
}

fn missing(section: &'static str) -> Error {
    Error::invalid(section, format!("section `{section}` is required here"))
}

impl RunConfig {
    /// Parses JSON, reporting the failing field path.
    pub fn from_json(text: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            Error::InvalidParameter { name: "config", reason: format!("at `{path}`: {}", e.inner()) }
        })
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn grid(&self) -> Result<Grid> {
        Grid::try_from(self.grid.clone().ok_or_else(|| missing("grid"))?)
    }

    pub fn degeneracy(&self, grid: Grid, base: &Path) -> Result<Option<DegeneracyParams>> {
        let Some(d) = &self.degeneracy else {
            return Ok(None);
        };
        let a = d.a.build(grid, base)?;
        DegeneracyParams::with_bounds(d.p, d.q, a, d.l1, d.l2).map(Some)
    }

    pub fn reaction(&self, grid: Grid, base: &Path) -> Result<ReactionParams> {
        let r = self.reaction.as_ref().ok_or_else(|| missing("reaction"))?;
        let q = r.q.build(grid, base)?;
        let f = r.f_eps.build(grid, base)?;
        ReactionParams::with_profile(r.eps, q, f, r.profile)
    }

    pub fn problem(&self, base: &Path) -> Result<ProblemSpec> {
        let grid = self.grid()?;
        let g = self.g.as_ref().ok_or_else(|| missing("g"))?.build(grid, base)?;
        ProblemSpec::new(self.degeneracy(grid, base)?, self.op()?, self.reaction(grid, base)?, g)
    }

    pub fn op(&self) -> Result<OperatorKind> {
        self.operator.validate()?;
        Ok(self.operator)
    }

    pub fn sweep(&self) -> Result<&SweepConfig> {
        self.sweep.as_ref().ok_or_else(|| missing("sweep"))
    }

    /// Barrier inputs from the operator, degeneracy and reaction sections.
    /// `J*` comes from the reaction certificate unless given explicitly.
    pub fn barrier_input(&self, base: &Path) -> Result<(BarrierInput, &BarrierConfig)> {
        let b = self.barrier.as_ref().ok_or_else(|| missing("barrier"))?;
        let d = self.degeneracy.as_ref().ok_or_else(|| missing("degeneracy"))?;
        let (lambda, big_lambda) = self.op()?.ellipticity();
        let j_star = match b.j_star {
            Some(j) => j,
            None => {
                let grid = self.grid()?;
                self.reaction(grid, base)?.certify(b.t0, b.t_big)?.j_star
            }
        };
        let a_sup = match self.grid() {
            Ok(grid) => d.a.build(grid, base)?.max(),
            Err(_) => match &d.a {
                FieldSpec::Constant { value } => *value,
                _ => return Err(missing("grid")),
            },
        };
        let input = BarrierInput {
            dim: self.grid().map(|g| g.dim()).unwrap_or(2),
            lambda,
            big_lambda,
            l1: d.l1,
            l2: d.l2,
            p: d.p,
            q: d.q,
            a_sup,
            t0: b.t0,
            t_big: b.t_big,
            j_star,
        };
        input.validate()?;
        Ok((input, b))
    }

    pub fn oned(&self) -> Result<&OnedConfig> {
        self.oned.as_ref().ok_or_else(|| missing("oned"))
    }

    /// The geometry options with the run seed applied.
    pub fn geometry_options(&self) -> GeometryOptions {
        let mut g = self.geometry.clone();
        if let Some(s) = self.seed {
            g.seed = s;
        }
        g
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square() -> Grid {
        Grid::new_2d([0.0, 0.0], [1.0, 2.0], [5, 9]).unwrap()
    }

    fn parse_field(json: &str) -> FieldSpec {
        serde_json::from_str(json).unwrap()
    }

    #[test]
    fn presets_evaluate() {
        let g = square();
        let here = Path::new(".");
        let r = parse_field(r#"{"preset":"ramp","axis":1,"start":2,"end":0}"#).build(g, here).unwrap();
        assert_eq!(r.get(g.index(3, 0)), 2.0);
        assert_eq!(r.get(g.index(3, 8)), 0.0);
        assert!((r.get(g.index(0, 4)) - 1.0).abs() < 1e-15);
        let c = parse_field(r#"{"preset":"checkerboard","cells":2,"low":0,"high":1}"#).build(g, here).unwrap();
        assert_eq!(c.get(g.index(0, 0)), 0.0);
        assert_eq!(c.get(g.index(4, 0)), 1.0);
        assert_eq!(c.get(g.index(4, 8)), 0.0);
        let b =
            parse_field(r#"{"preset":"gaussian","center":[0.5,1],"width":0.25,"amplitude":3}"#).build(g, here).unwrap();
        assert_eq!(b.max(), 3.0);
        assert!(b.min() > 0.0);
    }

    #[test]
    fn presets_reject_bad_values() {
        let g = square();
        let here = Path::new(".");
        assert!(parse_field(r#"{"preset":"ramp","axis":2,"start":0,"end":1}"#).build(g, here).is_err());
        assert!(parse_field(r#"{"preset":"gaussian","center":[0],"width":1,"amplitude":1}"#).build(g, here).is_err());
        assert!(serde_json::from_str::<FieldSpec>(r#"{"preset":"spiral"}"#).is_err());
        assert!(serde_json::from_str::<FieldSpec>(r#"{"preset":"constant","value":1,"extra":2}"#).is_err());
    }

    #[test]
    fn parse_errors_carry_the_path() {
        let err = RunConfig::from_json(r#"{"solve":{"tol":"small"}}"#).unwrap_err();
        assert!(err.to_string().contains("solve.tol"), "{err}");
        let err = RunConfig::from_json(r#"{"reaction":{"eps":0.1,"Q":{"preset":"constant"}}}"#).unwrap_err();
        assert!(err.to_string().contains("reaction.Q"), "{err}");
    }

    #[test]
    fn full_problem_builds() {
        let json = r#"{
            "grid": {"lo": [0, 0], "hi": [1, 1], "n": [17, 17]},
            "degeneracy": {"p": 1, "q": 2, "a": {"preset": "constant", "value": 1}},
            "operator": {"kind": "pucci_minus", "lambda": 1, "Lambda": 2},
            "reaction": {"eps": 0.3, "Q": {"preset": "constant", "value": 1}},
            "g": {"preset": "ramp", "start": 1, "end": 0},
            "solve": {"tol": 1e-6},
            "seed": 9
        }"#;
        let cfg = RunConfig::from_json(json).unwrap();
        let spec = cfg.problem(Path::new(".")).unwrap();
        assert!(spec.is_singular());
        assert_eq!(cfg.solve.tol, 1e-6);
        assert_eq!(cfg.geometry_options().seed, 9);
    }

    #[test]
    fn oned_section_flattens() {
        let cfg = RunConfig::from_json(r#"{"oned":{"p":2,"kappa":0.5,"profileSamples":8}}"#).unwrap();
        let o = cfg.oned().unwrap();
        assert_eq!(o.problem.p, 2.0);
        assert_eq!(o.problem.kappa, 0.5);
        assert_eq!(o.problem.nodes, TwoPoint::default().nodes);
        assert_eq!(o.profile_samples, 8);
    }
}
