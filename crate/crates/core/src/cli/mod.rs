//! Command-line front end: argument definitions, command dispatch and the
//! `RunReport` envelope shared by every subcommand.

mod format;

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::algebra::matrix::{SquareMatrixC, C64};
use crate::diagram::{braid_closure, parse_braid, parse_pd, parse_traversal, traversal, PDCode, TraversalCode};
use crate::error::{Error, Result};
use crate::holonomy::{
    chiral_convergence, chiral_residual, gauge_transform, wilson_line, CurveSpec, FieldConfig, GaugeFieldSample,
    HolonomySample, ProperTimeGrid, RandomField,
};
use crate::jones::{jones, make_skein_triple, skein_residual};
use crate::kz::{
    conformal_data, monodromy_report, p_eigenvalues, pq_matrices, r_matrix, two_sided_check, two_sided_convergence,
    Center, KZParams, TwoSidedPoints, DEFAULT_RADIUS,
};
use crate::wcalc::{encode, invariant_value, normalize, open_reduce, SearchOptions, DEFAULT_BUDGET};

pub use format::{fmt_float, render_text, round_floats};

/// Environment variable overriding the rewrite budget.
pub const BUDGET_ENV: &str = "KNOTFORGE_BUDGET";

pub const EXIT_OK: i32 = 0;
pub const EXIT_BUDGET: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "knotforge",
    version,
    about = "Knot invariants, KZ monodromy and Wilson lines"
)]
pub struct Cli {
    /// Print the full RunReport as JSON.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Jones polynomial of a braid or PD file.
    Jones(JonesArgs),
    /// Normal form of the W-word of a traversal or PD file.
    Wnorm(WnormArgs),
    /// Four-point KZ system.
    #[command(subcommand)]
    Kz(KzCommand),
    /// Wilson lines and gauge covariance.
    #[command(subcommand)]
    Holonomy(HolonomyCommand),
}

#[derive(Debug, Args)]
pub struct JonesArgs {
    pub input: PathBuf,
    /// Evaluate the skein relation at every crossing.
    #[arg(long)]
    pub skein_check: bool,
}

#[derive(Debug, Args)]
pub struct WnormArgs {
    pub input: PathBuf,
    /// Level k for Tr Rⁿ.
    #[arg(long)]
    pub level: Option<i64>,
    /// Include the rewrite trace.
    #[arg(long)]
    pub trace: bool,
}

#[derive(Debug, Clone, Copy, Args)]
pub struct KzArgs {
    #[arg(short = 'N', default_value_t = 2)]
    pub n: u32,
    #[arg(short = 'k', default_value_t = 1)]
    pub k: u32,
}

#[derive(Debug, Subcommand)]
pub enum KzCommand {
    /// Conformal weight and central charge.
    Conformal(KzArgs),
    /// Coefficient matrices P and Q.
    Pq(KzArgs),
    /// Loop transport around x = 0 or x = 1.
    Monodromy {
        #[command(flatten)]
        params: KzArgs,
        #[arg(long, default_value = "0")]
        center: Center,
        #[arg(long, default_value_t = DEFAULT_RADIUS)]
        radius: f64,
    },
    /// R = exp(iπ t̂) at level k.
    Rmatrix {
        #[arg(short = 'k', default_value_t = 1)]
        k: u32,
    },
    /// Finite-difference check of the two-sided closed-form solution.
    TwoSided {
        #[arg(short = 'k', default_value_t = 1)]
        k: u32,
    },
}

#[derive(Debug, Subcommand)]
pub enum HolonomyCommand {
    /// Wilson line of a sample file.
    Line {
        input: Option<PathBuf>,
        /// Use A = 0 on a straight curve instead of a file.
        #[arg(long)]
        zero_field: bool,
        #[arg(long, default_value_t = 100)]
        steps: usize,
    },
    /// Gauge-transform a sample with the seeded random ω.
    Gauge {
        input: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short = 'o')]
        output: Option<PathBuf>,
    },
    /// Chiral covariance residual and its convergence order.
    ChiralCheck {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 400)]
        steps: usize,
    },
    /// Write a seeded random sample.
    Gen {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        steps: usize,
        /// Periodic r(s), giving a closed curve.
        #[arg(long)]
        closed: bool,
        #[arg(short = 'o')]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub command: String,
    pub inputs: Value,
    pub result: Value,
    pub diagnostics: Vec<String>,
}

impl RunReport {
    fn new(command: &str, inputs: Value, result: Value) -> Self {
        Self {
            command: command.into(),
            inputs,
            result,
            diagnostics: vec![],
        }
    }

    pub fn to_json(&self) -> String {
        let mut v = serde_json::to_value(self).expect("report serializes");
        round_floats(&mut v);
        serde_json::to_string_pretty(&v).expect("report serializes")
    }
}

/// A finished command: the report and the process exit code.
pub struct Outcome {
    pub report: RunReport,
    pub exit_code: i32,
}

impl Outcome {
    fn ok(report: RunReport) -> Self {
        Self {
            report,
            exit_code: EXIT_OK,
        }
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn first_content_line(text: &str) -> &str {
    text.lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('#'))
        .unwrap_or("")
}

fn is_braid(text: &str) -> bool {
    let l = first_content_line(text);
    l.starts_with('B') && l[1..].starts_with(|c: char| c.is_ascii_digit())
}

fn is_traversal(text: &str) -> bool {
    let w = first_content_line(text).split_whitespace().next().unwrap_or("");
    matches!(w, "basepoint" | "strand" | "visit" | "end")
}

fn load_diagram(text: &str) -> Result<(PDCode, &'static str)> {
    if is_braid(text) {
        Ok((braid_closure(&parse_braid(text)?), "braid"))
    } else {
        Ok((parse_pd(text)?, "pd"))
    }
}

fn load_traversal(text: &str) -> Result<(TraversalCode, &'static str)> {
    if is_traversal(text) {
        Ok((parse_traversal(text)?, "traversal"))
    } else if is_braid(text) {
        Ok((traversal(&braid_closure(&parse_braid(text)?), None)?, "braid"))
    } else {
        Ok((traversal(&parse_pd(text)?, None)?, "pd"))
    }
}

/// Rewrite budget from `KNOTFORGE_BUDGET`, or the default.
pub fn budget_from_env() -> Result<usize> {
    match std::env::var(BUDGET_ENV) {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|b| *b > 0)
            .ok_or_else(|| Error::InvalidParameter(format!("{BUDGET_ENV} must be a positive integer, got {v:?}"))),
        Err(_) => Ok(DEFAULT_BUDGET),
    }
}

fn complex(z: C64) -> Value {
    json!([z.re, z.im])
}

fn unitarity_error(m: &SquareMatrixC) -> f64 {
    (m * &m.adjoint()).dist(&SquareMatrixC::identity(m.dim()))
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Jones(a) => cmd_jones(a),
        Command::Wnorm(a) => cmd_wnorm(a),
        Command::Kz(c) => cmd_kz(c),
        Command::Holonomy(c) => cmd_holonomy(c),
    }
}

pub fn cmd_jones(a: &JonesArgs) -> Result<Outcome> {
    let text = read(&a.input)?;
    let (d, format) = load_diagram(&text)?;
    let v = jones(&d)?;
    let mut result = json!({
        "polynomial": v.to_term_strings("t"),
        "text": v.to_string(),
        "crossings": d.crossing_count(),
        "components": d.component_count(),
        "writhe": d.writhe()?,
    });
    if a.skein_check {
        let mut nonzero = vec![];
        for c in 0..d.crossing_count() {
            if !skein_residual(&make_skein_triple(&d, c)?)?.is_zero() {
                nonzero.push(c);
            }
        }
        let summary = if nonzero.is_empty() {
            "residuals: all zero".to_string()
        } else {
            format!("residuals: nonzero at crossings {nonzero:?}")
        };
        result["skein"] = json!({
            "checked": d.crossing_count(),
            "all_zero": nonzero.is_empty(),
            "nonzero_sites": nonzero,
            "summary": summary,
        });
    }
    let inputs = json!({"file": a.input.display().to_string(), "format": format, "skein_check": a.skein_check});
    Ok(Outcome::ok(RunReport::new("jones", inputs, result)))
}

pub fn cmd_wnorm(a: &WnormArgs) -> Result<Outcome> {
    let text = read(&a.input)?;
    let (t, format) = load_traversal(&text)?;
    let budget = budget_from_env()?;
    let w = encode(&t)?;
    let opts = SearchOptions {
        budget,
        ..SearchOptions::default()
    };
    let norm = if w.is_closed() {
        normalize(&w, &opts)?
    } else {
        open_reduce(&w, &opts)?
    };
    let nf = &norm.normal_form;
    let mut result = json!({
        "word": w.to_string(),
        "closed": w.is_closed(),
        "normalized": nf.is_normalized(),
        "n": nf.n,
        "normal_form": norm.word.to_string(),
        "residual": nf.residual,
        "visited": norm.stats.visited,
        "depth": norm.stats.depth,
    });
    let mut diagnostics = vec![];
    if let Some(k) = a.level {
        if !w.is_closed() {
            diagnostics.push("open fragment; Tr Rⁿ not evaluated".to_string());
        } else if nf.is_normalized() {
            result["trace_value"] = complex(invariant_value(nf, k)?);
        } else {
            diagnostics.push("no normal form within budget; Tr Rⁿ not evaluated".to_string());
        }
    }
    if a.trace {
        result["trace"] = serde_json::to_value(&norm.trace).expect("trace serializes");
    }
    if !nf.is_normalized() {
        diagnostics.push(format!("budget of {budget} visited words exhausted; residual reported"));
    }
    let inputs = json!({
        "file": a.input.display().to_string(),
        "format": format,
        "basepoint": t.basepoint(),
        "level": a.level,
        "budget": budget,
        "trace": a.trace,
    });
    let mut report = RunReport::new("wnorm", inputs, result);
    report.diagnostics = diagnostics;
    let exit_code = if nf.is_normalized() { EXIT_OK } else { EXIT_BUDGET };
    Ok(Outcome { report, exit_code })
}

fn rational(r: num_rational::Rational64) -> Value {
    Value::String(r.to_string())
}

pub fn cmd_kz(c: &KzCommand) -> Result<Outcome> {
    let report = match *c {
        KzCommand::Conformal(a) => {
            let p = KZParams::new(a.n, a.k)?;
            let d = conformal_data(p);
            let result = json!({"delta": rational(d.delta), "c": rational(d.c), "g": p.g(), "d": p.d()});
            RunReport::new("kz conformal", json!({"N": a.n, "k": a.k}), result)
        }
        KzCommand::Pq(a) => {
            let p = KZParams::new(a.n, a.k)?;
            let (pm, qm) = pq_matrices(p);
            let ev = p_eigenvalues(p);
            let result = json!({"P": pm, "Q": qm, "eigenvalues_P": [rational(ev[0]), rational(ev[1])]});
            RunReport::new("kz pq", json!({"N": a.n, "k": a.k}), result)
        }
        KzCommand::Monodromy { params, center, radius } => {
            let p = KZParams::new(params.n, params.k)?;
            let r = monodromy_report(p, center, radius)?;
            let result = json!({
                "M": r.matrix,
                "eigenvalues": r.eigenvalues.iter().map(|z| complex(*z)).collect::<Vec<_>>(),
                "expected": r.expected.iter().map(|z| complex(*z)).collect::<Vec<_>>(),
                "eigenvalue_error": r.eigenvalue_error,
                "det_error": r.det_error,
                "refinement_diff": r.refinement_diff,
            });
            let c = match center {
                Center::Zero => 0,
                Center::One => 1,
            };
            RunReport::new(
                "kz monodromy",
                json!({"N": params.n, "k": params.k, "center": c, "radius": radius}),
                result,
            )
        }
        KzCommand::Rmatrix { k } => {
            let r = r_matrix(k as i64)?;
            let result = json!({
                "R": r,
                "eigenvalues": r.eigenvalues().iter().map(|z| complex(*z)).collect::<Vec<_>>(),
                "unitarity_error": unitarity_error(&r),
            });
            RunReport::new("kz rmatrix", json!({"k": k}), result)
        }
        KzCommand::TwoSided { k } => {
            let a = SquareMatrixC::identity(4);
            let pts = TwoSidedPoints::default();
            let at = two_sided_check(k as i64, &a, &pts, 1e-5)?;
            let study = two_sided_convergence(k as i64, &a, &pts, &crate::kz::TWO_SIDED_STEPS)?;
            let result = json!({
                "kz_residual": at.kz,
                "dual_residual": at.dual,
                "kz_z3_residual": at.kz_z3,
                "kz_hermitian_reading": at.kz_hermitian_reading,
                "kz_order": study.kz_order,
                "dual_order": study.dual_order,
                "steps": study.residuals.iter().map(|r| r.step).collect::<Vec<_>>(),
            });
            let inputs = json!({"k": k, "A": "identity", "points": pts.z.iter().map(|z| complex(*z)).collect::<Vec<_>>(), "step": 1e-5});
            RunReport::new("kz two-sided", inputs, result)
        }
    };
    Ok(Outcome::ok(report))
}

fn zero_sample(steps: usize) -> Result<(GaugeFieldSample, CurveSpec)> {
    let grid = ProperTimeGrid::new(0.0, 1.0, steps)?;
    let nodes = grid.nodes();
    let curve = CurveSpec {
        r: nodes.clone(),
        x1: nodes,
        x2: vec![0.0; steps + 1],
    };
    Ok((GaugeFieldSample::zero(grid), curve))
}

fn load_sample(path: &Path) -> Result<(GaugeFieldSample, CurveSpec)> {
    let s = HolonomySample::from_json(&read(path)?)?;
    Ok((s.field()?, s.curve))
}

pub fn cmd_holonomy(c: &HolonomyCommand) -> Result<Outcome> {
    let report = match c {
        HolonomyCommand::Line {
            input,
            zero_field,
            steps,
        } => {
            let ((a, curve), source) = match (input, zero_field) {
                (_, true) => (zero_sample(*steps)?, "zero-field".to_string()),
                (Some(p), false) => (load_sample(p)?, p.display().to_string()),
                (None, false) => return Err(Error::Input("holonomy line needs a sample file or --zero-field".into())),
            };
            let w = wilson_line(&a, &curve)?;
            let result = json!({
                "W": w,
                "trace": complex(w.trace()),
                "unitarity_error": unitarity_error(&w),
                "closed": curve.is_closed(),
            });
            RunReport::new(
                "holonomy line",
                json!({"source": source, "steps": a.grid.steps}),
                result,
            )
        }
        HolonomyCommand::Gauge { input, seed, output } => {
            let (a, curve) = load_sample(input)?;
            let f = RandomField::new(*seed, &FieldConfig::default())?;
            let omega: Vec<_> = curve.r.iter().map(|&r| f.omega(r)).collect();
            let t = gauge_transform(&a, &omega)?;
            let sample = HolonomySample::new(&t, curve.clone())?;
            let residual = chiral_residual(&a, &curve, &|r| f.omega(r))?;
            let mut result = json!({"chiral_residual": residual});
            match output {
                Some(p) => {
                    write(p, &sample.to_json())?;
                    result["output"] = json!(p.display().to_string());
                }
                None => result["sample"] = serde_json::to_value(&sample).expect("sample serializes"),
            }
            RunReport::new(
                "holonomy gauge",
                json!({"file": input.display().to_string(), "seed": seed}),
                result,
            )
        }
        HolonomyCommand::ChiralCheck { seed, steps } => {
            if *steps < 4 {
                return Err(Error::InvalidParameter("--steps must be at least 4".into()));
            }
            let grids = [steps / 4, steps / 2, *steps, 2 * steps];
            let cfg = FieldConfig::default();
            let study = chiral_convergence(*seed, &cfg, &grids)?;
            let f = RandomField::new(*seed, &cfg)?;
            let (a, curve) = f.sample(*steps)?;
            let k = f.omega(0.0);
            let constant = chiral_residual(&a, &curve, &|_| k)?;
            let at = study.residuals[2];
            let result = json!({
                "residual": at,
                "order": study.order,
                "constant_omega_residual": constant,
                "grids": grids,
                "residuals": study.residuals,
                "covariant_residuals": study.covariant_residuals,
                "covariant_order": study.covariant_order,
            });
            let mut r = RunReport::new("holonomy chiral-check", json!({"seed": seed, "steps": steps}), result);
            if study.order < 0.9 {
                r.diagnostics.push(format!(
                    "transformation law as printed does not converge (order {}); covariant form order {}",
                    fmt_float(study.order),
                    fmt_float(study.covariant_order)
                ));
            }
            r
        }
        HolonomyCommand::Gen {
            seed,
            steps,
            closed,
            output,
        } => {
            let cfg = FieldConfig {
                closed: *closed,
                ..FieldConfig::default()
            };
            let (a, curve) = RandomField::new(*seed, &cfg)?.sample(*steps)?;
            let sample = HolonomySample::new(&a, curve)?;
            let mut result = json!({"steps": steps, "closed": closed});
            match output {
                Some(p) => {
                    write(p, &sample.to_json())?;
                    result["output"] = json!(p.display().to_string());
                }
                None => result["sample"] = serde_json::to_value(&sample).expect("sample serializes"),
            }
            RunReport::new(
                "holonomy gen",
                json!({"seed": seed, "steps": steps, "closed": closed, "modes": cfg.modes}),
                result,
            )
        }
    };
    Ok(Outcome::ok(report))
}
