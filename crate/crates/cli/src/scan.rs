//! Parameter sweeps and the frozen CSV row schema.

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use accelshift::asymptotic::{classify_full, Regime};
use accelshift::shift::{comparators, shift_static_with_err, shift_total};
use accelshift::{AtomSpec, Kinematics, QuadratureSettings, Ratio};
use clap::{Args, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use crate::common::{missing, value_enum_from_str, CommonArgs, Resolved, Units};
use crate::config::{merge, ConfigFile};
use crate::error::CliError;

/// Output columns in header order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[value(rename_all = "snake_case")]
#[serde(rename_all = "snake_case")]
pub enum Column {
    ZSi,
    ASi,
    Omega0,
    Az,
    W0z,
    TotalReduced,
    VfReduced,
    RrReduced,
    Bracket,
    Regime,
    RatioToStatic,
    ErrEst,
    Error,
}

impl Column {
    pub const ALL: [Column; 13] = [
        Column::ZSi,
        Column::ASi,
        Column::Omega0,
        Column::Az,
        Column::W0z,
        Column::TotalReduced,
        Column::VfReduced,
        Column::RrReduced,
        Column::Bracket,
        Column::Regime,
        Column::RatioToStatic,
        Column::ErrEst,
        Column::Error,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Column::ZSi => "z_si",
            Column::ASi => "a_si",
            Column::Omega0 => "omega0",
            Column::Az => "az",
            Column::W0z => "w0z",
            Column::TotalReduced => "total_reduced",
            Column::VfReduced => "vf_reduced",
            Column::RrReduced => "rr_reduced",
            Column::Bracket => "bracket",
            Column::Regime => "regime",
            Column::RatioToStatic => "ratio_to_static",
            Column::ErrEst => "err_est",
            Column::Error => "error",
        }
    }
}

/// The full header line, without terminator.
#[cfg(test)]
pub fn header() -> String {
    header_for(&Column::ALL)
}

fn header_for(cols: &[Column]) -> String {
    cols.iter().map(Column::name).collect::<Vec<_>>().join(",")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Variable {
    Z,
    A,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    Linear,
    Log,
}

value_enum_from_str!(Variable, Spacing);

/// Comma-separated column selectors.
#[derive(Debug, Clone, PartialEq)]
pub struct ColumnList(pub Vec<Column>);

impl FromStr for ColumnList {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let cols = s
            .split(',')
            .map(|c| <Column as ValueEnum>::from_str(c.trim(), false).map_err(|_| format!("unknown column `{}`", c.trim())))
            .collect::<Result<Vec<_>, _>>()?;
        if cols.is_empty() {
            return Err("no columns selected".into());
        }
        Ok(ColumnList(cols))
    }
}

#[derive(Args, Debug, Clone)]
pub struct ScanArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Swept variable; the other one comes from --accel or --z.
    #[arg(long, value_enum)]
    pub var: Option<Variable>,
    #[arg(long, allow_negative_numbers = true)]
    pub from: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub to: Option<f64>,
    #[arg(long)]
    pub points: Option<usize>,
    #[arg(long, value_enum)]
    pub spacing: Option<Spacing>,
    /// CSV destination; stdout when absent. Metadata goes to `<out>.meta.json`.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Subset of columns, in the given order.
    #[arg(long, value_name = "COL,...")]
    pub columns: Option<ColumnList>,
}

/// Invariants: `from < to`, `points ≥ 2`, `from > 0` for log spacing.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepConfig {
    pub variable: Variable,
    pub from: f64,
    pub to: f64,
    pub points: usize,
    pub spacing: Spacing,
    /// The non-swept kinematic variable, in the chosen units.
    pub fixed: f64,
    #[serde(serialize_with = "ser_columns")]
    pub columns: Vec<Column>,
}

fn ser_columns<S: serde::Serializer>(cols: &[Column], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(cols.iter().map(Column::name))
}

impl SweepConfig {
    pub fn new(
        variable: Variable,
        from: f64,
        to: f64,
        points: usize,
        spacing: Spacing,
        fixed: f64,
        columns: Vec<Column>,
    ) -> Result<Self, CliError> {
        if !(from.is_finite() && to.is_finite() && from < to) {
            return Err(CliError::Usage(format!("sweep range needs from < to, got {from} .. {to}")));
        }
        if points < 2 {
            return Err(CliError::Usage(format!("--points must be at least 2, got {points}")));
        }
        if spacing == Spacing::Log && from <= 0.0 {
            return Err(CliError::Usage(format!("log spacing needs from > 0, got {from}")));
        }
        Ok(SweepConfig {
            variable,
            from,
            to,
            points,
            spacing,
            fixed,
            columns,
        })
    }

    /// Grid values with both endpoints exact.
    pub fn grid(&self) -> Vec<f64> {
        let last = (self.points - 1) as f64;
        (0..self.points)
            .map(|i| {
                if i == self.points - 1 {
                    return self.to;
                }
                let t = i as f64 / last;
                match self.spacing {
                    Spacing::Linear => self.from + (self.to - self.from) * t,
                    Spacing::Log => self.from * (self.to / self.from).powf(t),
                }
            })
            .collect()
    }

    /// `(accel, z)` in the chosen units for each grid value.
    pub fn points(&self) -> Vec<(f64, f64)> {
        self.grid()
            .into_iter()
            .map(|v| match self.variable {
                Variable::Z => (self.fixed, v),
                Variable::A => (v, self.fixed),
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Computed {
    pub total_reduced: f64,
    pub vf_reduced: f64,
    pub rr_reduced: f64,
    pub bracket: f64,
    pub ratio_to_static: Ratio,
    pub err_est: f64,
}

/// One evaluated grid point. Input columns are always filled.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Row {
    pub z_si: f64,
    pub a_si: f64,
    pub omega0: f64,
    pub az: f64,
    pub w0z: f64,
    pub regime: Regime,
    #[serde(flatten)]
    pub computed: Option<Computed>,
    pub error: Option<String>,
}

impl Row {
    /// Evaluates the breakdown and the static comparator at one point.
    pub fn evaluate(atom: &AtomSpec, kin: &Kinematics, settings: &QuadratureSettings, strictness: f64) -> Row {
        let (a_si, z_si) = kin.to_si();
        let regime = classify_full(atom.omega0, kin.a, kin.z, strictness).regime;
        let computed = (|| -> accelshift::Result<Computed> {
            let b = shift_total(atom, kin, settings)?;
            let (stat, stat_err) = shift_static_with_err(atom, kin.z, settings)?;
            let cmp = comparators(atom, kin, &b, stat, stat_err, strictness);
            Ok(Computed {
                total_reduced: b.total_reduced,
                vf_reduced: b.vf_reduced,
                rr_reduced: b.rr_reduced,
                bracket: b.bracket,
                ratio_to_static: cmp.ratio_to_static,
                err_est: b.err_est,
            })
        })();
        let (computed, error) = match computed {
            Ok(c) => (Some(c), None),
            Err(e) => (None, Some(e.to_string())),
        };
        Row {
            z_si,
            a_si,
            omega0: atom.omega0,
            az: kin.az(),
            w0z: kin.w0z(atom.omega0),
            regime,
            computed,
            error,
        }
    }

    /// Replaces the round-tripped SI inputs with the values as given.
    pub fn with_si_inputs(mut self, a_si: f64, z_si: f64) -> Row {
        self.a_si = a_si;
        self.z_si = z_si;
        self
    }

    /// A row for a point whose inputs were rejected before evaluation.
    fn rejected(omega0: f64, a_raw: f64, z_raw: f64, units: Units, msg: String) -> Row {
        let (a_si, z_si) = match units {
            Units::Si => (a_raw, z_raw),
            Units::Natural => (a_raw * accelshift::SPEED_OF_LIGHT, z_raw * accelshift::SPEED_OF_LIGHT),
        };
        Row {
            z_si,
            a_si,
            omega0,
            az: f64::NAN,
            w0z: f64::NAN,
            regime: Regime::Ambiguous,
            computed: None,
            error: Some(msg),
        }
    }

    fn cell(&self, col: Column) -> String {
        let num = |v: f64| format!("{v:.16e}");
        let comp = |f: fn(&Computed) -> String| self.computed.as_ref().map(f).unwrap_or_default();
        match col {
            Column::ZSi => num(self.z_si),
            Column::ASi => num(self.a_si),
            Column::Omega0 => num(self.omega0),
            Column::Az => num(self.az),
            Column::W0z => num(self.w0z),
            Column::TotalReduced => comp(|c| format!("{:.16e}", c.total_reduced)),
            Column::VfReduced => comp(|c| format!("{:.16e}", c.vf_reduced)),
            Column::RrReduced => comp(|c| format!("{:.16e}", c.rr_reduced)),
            Column::Bracket => comp(|c| format!("{:.16e}", c.bracket)),
            Column::Regime => self.regime.as_str().to_string(),
            Column::RatioToStatic => comp(|c| match c.ratio_to_static {
                Ratio::Value(v) => format!("{v:.16e}"),
                _ => "NA".to_string(),
            }),
            Column::ErrEst => comp(|c| format!("{:.16e}", c.err_est)),
            Column::Error => self.error.as_deref().map(sanitize).unwrap_or_default(),
        }
    }

    /// The CSV line for `cols`, LF-terminated.
    pub fn csv_line(&self, cols: &[Column]) -> String {
        let mut s = cols.iter().map(|c| self.cell(*c)).collect::<Vec<_>>().join(",");
        s.push('\n');
        s
    }
}

/// Error text safe inside an unquoted CSV field.
fn sanitize(msg: &str) -> String {
    msg.chars()
        .map(|c| match c {
            ',' => ';',
            '\n' | '\r' => ' ',
            '"' => '\'',
            c => c,
        })
        .collect()
}

/// Header plus rows as one CSV document.
pub fn render_csv(rows: &[Row], cols: &[Column]) -> String {
    let mut out = header_for(cols);
    out.push('\n');
    for r in rows {
        out.push_str(&r.csv_line(cols));
    }
    out
}

/// Rows in grid order; evaluation may be parallel.
pub fn run_sweep(common: &Resolved, sweep: &SweepConfig) -> Result<Vec<Row>, CliError> {
    let atom = common.atom();
    let pts = sweep.points();
    let eval = |&(a, z): &(f64, f64)| match common.kinematics(a, z) {
        Ok(kin) => {
            let row = Row::evaluate(&atom, &kin, &common.settings, common.strictness);
            match common.units {
                Units::Si => row.with_si_inputs(a, z),
                Units::Natural => row,
            }
        }
        Err(e) => Row::rejected(common.omega0, a, z, common.units, e.to_string()),
    };
    let pool = common.pool()?;
    Ok(pool.install(|| pts.par_iter().map(eval).collect()))
}

#[derive(Debug, Serialize)]
struct Meta<'a> {
    command_line: Vec<String>,
    version: &'static str,
    cli_version: &'static str,
    settings: &'a Resolved,
    sweep: &'a SweepConfig,
    rows: usize,
    failed_rows: usize,
    wall_time_s: f64,
}

pub fn sidecar_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".meta.json");
    PathBuf::from(s)
}

pub fn cmd_scan(args: ScanArgs) -> Result<(), CliError> {
    let start = Instant::now();
    let mut cfg = args.common.config_file()?;
    let common = args.common.clone().resolve(&mut cfg)?;
    let sweep = sweep_config(&args, &common, &mut cfg)?;
    let out_path = merge(args.out.clone(), &mut cfg, "out")?;
    cfg.finish()?;

    // The destination must be writable before any work is done.
    let mut sink: Box<dyn Write> = match &out_path {
        Some(p) => Box::new(
            std::fs::File::create(p).map_err(|e| CliError::Output(format!("{}: {e}", p.display())))?,
        ),
        None => Box::new(std::io::stdout().lock()),
    };

    let rows = run_sweep(&common, &sweep)?;
    let io = |e: std::io::Error| CliError::Output(e.to_string());
    sink.write_all(render_csv(&rows, &sweep.columns).as_bytes()).map_err(io)?;
    sink.flush().map_err(io)?;
    drop(sink);

    let failed = rows.iter().filter(|r| r.error.is_some()).count();
    if let Some(p) = &out_path {
        let meta = Meta {
            command_line: std::env::args().collect(),
            version: accelshift::VERSION,
            cli_version: env!("CARGO_PKG_VERSION"),
            settings: &common,
            sweep: &sweep,
            rows: rows.len(),
            failed_rows: failed,
            wall_time_s: start.elapsed().as_secs_f64(),
        };
        let mut text = serde_json::to_string_pretty(&meta).expect("metadata serializes");
        let _ = writeln!(text);
        let side = sidecar_path(p);
        std::fs::write(&side, text).map_err(|e| CliError::Output(format!("{}: {e}", side.display())))?;
    }
    if failed > 0 {
        return Err(CliError::RowFailures(failed));
    }
    Ok(())
}

fn sweep_config(args: &ScanArgs, common: &Resolved, cfg: &mut ConfigFile) -> Result<SweepConfig, CliError> {
    let variable = merge(args.var, cfg, "var")?.unwrap_or(Variable::Z);
    let from = merge(args.from, cfg, "from")?.ok_or_else(|| missing("from"))?;
    let to = merge(args.to, cfg, "to")?.ok_or_else(|| missing("to"))?;
    let points = merge(args.points, cfg, "points")?.unwrap_or(200);
    let spacing = merge(args.spacing, cfg, "spacing")?.unwrap_or(Spacing::Log);
    let columns = merge(args.columns.clone(), cfg, "columns")?
        .map(|c| c.0)
        .unwrap_or_else(|| Column::ALL.to_vec());
    let fixed = match variable {
        Variable::Z => common.accel.ok_or_else(|| missing("accel"))?,
        Variable::A => common.z.ok_or_else(|| missing("z"))?,
    };
    SweepConfig::new(variable, from, to, points, spacing, fixed, columns)
}
