//! Oracle suite: dual-path g, isotropic reduction, analytic limits and the
//! ε-regulated rr oracle.

use std::fmt::Write as _;

use accelshift::oracle::{
    analytic_limit_checks, dual_path_check, isotropic_reduction_check, reference_grid, rr_epsilon_regulated,
    OracleConfig, Verdict, EPSILON_POINTS, ISOTROPIC_CHECK_POINT, ISOTROPIC_PASS_TOL,
};
use accelshift::shift::CROSS_MULTIPLICITY;
use accelshift::{Component, QuadratureSettings};
use clap::{Args, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use crate::common::{value_enum_from_str, Format, Units};
use crate::config::{merge, ConfigFile};
use crate::error::CliError;

/// Relative agreement required between the two g evaluations.
pub const DUAL_PATH_TOL: f64 = 1e-7;
/// Relative tolerance on the small-distance limits.
pub const LIMIT_TOL: f64 = 1e-4;
/// Relative tolerance of the ε-regulated rr oracle.
pub const EPSILON_TOL: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[value(rename_all = "kebab-case")]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    DualPath,
    Isotropic,
    Limits,
    Epsilon,
}

value_enum_from_str!(Suite);

impl Suite {
    pub fn name(&self) -> &'static str {
        match self {
            Suite::DualPath => "dual-path",
            Suite::Isotropic => "isotropic",
            Suite::Limits => "limits",
            Suite::Epsilon => "epsilon",
        }
    }
}

#[derive(Args, Debug, Clone)]
pub struct SelftestArgs {
    /// Suites to skip; repeatable.
    #[arg(long, value_enum)]
    pub skip: Vec<Suite>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long)]
    pub config: Option<std::path::PathBuf>,
    #[arg(long, env = "ACCELSHIFT_THREADS")]
    pub threads: Option<usize>,
    #[arg(long)]
    pub rel_tol: Option<f64>,
    #[arg(long)]
    pub max_subdivisions: Option<usize>,
    /// Multiplicity of the xz term in the contraction (mutation testing).
    #[arg(long, hide = true)]
    pub cross_multiplicity: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub suite: Suite,
    pub name: String,
    /// Relative error, or `NaN` when the check errored.
    pub metric: f64,
    pub tol: f64,
    pub passed: bool,
    pub note: String,
}

impl Check {
    fn errored(suite: Suite, name: String, tol: f64, e: impl std::fmt::Display) -> Check {
        Check {
            suite,
            name,
            metric: f64::NAN,
            tol,
            passed: false,
            note: e.to_string(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SelftestReport {
    pub checks: Vec<Check>,
    pub skipped: Vec<Suite>,
    pub failed: usize,
}

pub fn run(settings: &QuadratureSettings, skip: &[Suite], cross_multiplicity: f64) -> SelftestReport {
    let mut checks = Vec::new();
    let on = |s: Suite| !skip.contains(&s);
    if on(Suite::DualPath) {
        checks.extend(dual_path(settings));
    }
    if on(Suite::Isotropic) {
        checks.push(isotropic(settings, cross_multiplicity));
    }
    if on(Suite::Limits) {
        checks.extend(limits(settings));
    }
    if on(Suite::Epsilon) {
        checks.extend(epsilon());
    }
    let failed = checks.iter().filter(|c| !c.passed).count();
    let mut skipped = skip.to_vec();
    skipped.sort_by_key(|s| *s as u8);
    skipped.dedup();
    SelftestReport {
        checks,
        skipped,
        failed,
    }
}

fn dual_path(settings: &QuadratureSettings) -> Vec<Check> {
    let cases: Vec<_> = reference_grid()
        .into_iter()
        .flat_map(|p| Component::ALL.into_iter().map(move |c| (p, c)))
        .collect();
    cases
        .par_iter()
        .map(|&((w0, z, a), c)| {
            let name = format!("g_{c} w0={w0:e} z={z:e} a={a:e}");
            match dual_path_check(c, w0, z, a, settings, &OracleConfig::default()) {
                Ok(r) => Check {
                    suite: Suite::DualPath,
                    name,
                    metric: r.rel_diff,
                    tol: DUAL_PATH_TOL,
                    passed: r.rel_diff <= DUAL_PATH_TOL,
                    note: String::new(),
                },
                Err(e) => Check::errored(Suite::DualPath, name, DUAL_PATH_TOL, e),
            }
        })
        .collect()
}

fn isotropic(settings: &QuadratureSettings, mult: f64) -> Check {
    let (w0, z, a) = ISOTROPIC_CHECK_POINT;
    let name = format!("isotropic reduction (xz multiplicity {mult})");
    match isotropic_reduction_check(w0, z, a, mult, settings) {
        Ok(r) => Check {
            suite: Suite::Isotropic,
            name,
            metric: (r.leading_ratio - 1.0).abs().max((r.correction_ratio - 1.0).abs()),
            tol: ISOTROPIC_PASS_TOL,
            passed: r.passed,
            note: format!("leading {:.6} correction {:.6}", r.leading_ratio, r.correction_ratio),
        },
        Err(e) => Check::errored(Suite::Isotropic, name, ISOTROPIC_PASS_TOL, e),
    }
}

fn limits(settings: &QuadratureSettings) -> Vec<Check> {
    match analytic_limit_checks(settings, LIMIT_TOL) {
        Ok(v) => v
            .into_iter()
            .map(|l| Check {
                suite: Suite::Limits,
                name: l.name.to_string(),
                metric: l.rel_error,
                tol: LIMIT_TOL,
                passed: l.passed,
                note: format!("{:.10e} vs {:.10e}", l.value, l.expected),
            })
            .collect(),
        Err(e) => vec![Check::errored(Suite::Limits, "analytic limits".into(), LIMIT_TOL, e)],
    }
}

fn epsilon() -> Vec<Check> {
    EPSILON_POINTS
        .par_iter()
        .map(|&(w0, z, a, c)| {
            let name = format!("rr_{c} eps-regulated w0={w0:e} z={z:e} a={a:e}");
            match rr_epsilon_regulated(c, w0, z, a, &OracleConfig::default()) {
                Ok(r) => Check {
                    suite: Suite::Epsilon,
                    name,
                    metric: r.rel_error,
                    tol: EPSILON_TOL,
                    passed: r.verdict == Verdict::Pass,
                    note: format!("{:?}", r.verdict).to_lowercase(),
                },
                Err(e) => Check::errored(Suite::Epsilon, name, EPSILON_TOL, e),
            }
        })
        .collect()
}

pub fn render_text(r: &SelftestReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{:<6}{:<11}{:<56}{:>12}{:>10}  note", "", "suite", "check", "metric", "tol");
    for c in &r.checks {
        let _ = writeln!(
            out,
            "{:<6}{:<11}{:<56}{:>12.3e}{:>10.1e}  {}",
            if c.passed { "PASS" } else { "FAIL" },
            c.suite.name(),
            c.name,
            c.metric,
            c.tol,
            c.note
        );
    }
    for s in &r.skipped {
        let _ = writeln!(out, "SKIP  {}", s.name());
    }
    let _ = writeln!(out, "{} checks, {} failed", r.checks.len(), r.failed);
    out
}

pub fn cmd_selftest(args: SelftestArgs) -> Result<String, CliError> {
    let mut cfg = match &args.config {
        Some(p) => ConfigFile::load(p)?,
        None => ConfigFile::default(),
    };
    let format = merge(args.format, &mut cfg, "format")?.unwrap_or(Format::Text);
    let threads = merge(args.threads, &mut cfg, "threads")?;
    let mut settings = QuadratureSettings::default();
    if let Some(t) = merge(args.rel_tol, &mut cfg, "rel_tol")? {
        settings.rel_tol = t;
    }
    if let Some(n) = merge(args.max_subdivisions, &mut cfg, "max_subdivisions")? {
        settings.max_subdivisions = n;
    }
    // Keys of point commands are tolerated so one recipe can drive both.
    for k in ["omega0", "accel", "z", "pol", "strictness"] {
        cfg.take::<String>(k)?;
    }
    cfg.take::<Units>("units")?;
    cfg.finish()?;
    settings.validate()?;
    let mult = args.cross_multiplicity.unwrap_or(CROSS_MULTIPLICITY);

    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        b = b.num_threads(n);
    }
    let pool = b.build().map_err(|e| CliError::Usage(format!("thread pool: {e}")))?;
    let report = pool.install(|| run(&settings, &args.skip, mult));
    let text = match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&report).expect("report serializes");
            s.push('\n');
            s
        }
        Format::Csv => {
            let mut s = String::from("suite,check,metric,tol,passed\n");
            for c in &report.checks {
                let _ = writeln!(s, "{},{},{:.16e},{:.16e},{}", c.suite.name(), c.name, c.metric, c.tol, c.passed);
            }
            s
        }
        Format::Text => render_text(&report),
    };
    if report.failed > 0 {
        print!("{text}");
        return Err(CliError::SelfTest(report.failed));
    }
    Ok(text)
}
