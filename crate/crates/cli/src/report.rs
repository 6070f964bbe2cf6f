//! Point commands: `shift`, `regime` and `ratio`.

use std::fmt::Write as _;

use accelshift::asymptotic::{asymptote, classify_full, AsymptoteReport, Classification, Regime};
use accelshift::shift::{comparators, shift_static_with_err, shift_total};
use accelshift::{AtomSpec, Component, ComparatorResult, Kinematics, Polarization, ShiftBreakdown};
use clap::Args;
use serde::Serialize;

use crate::common::{CommonArgs, Format, Resolved, Units};
use crate::config::merge;
use crate::error::CliError;
use crate::scan::{render_csv, Column, Row};

#[derive(Args, Debug, Clone)]
pub struct PointArgs {
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Args, Debug, Clone)]
pub struct RegimeArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Evaluate this regime's expansion instead of the classified one.
    #[arg(long, value_name = "NAME")]
    pub regime: Option<String>,
}

/// The evaluated point in both unit systems.
#[derive(Debug, Clone, Serialize)]
pub struct Point {
    pub omega0: f64,
    pub a: f64,
    pub z: f64,
    pub a_si: f64,
    pub z_si: f64,
    pub az: f64,
    pub w0z: f64,
    pub polarization: Polarization,
}

impl Point {
    fn new(atom: &AtomSpec, kin: &Kinematics, common: &Resolved) -> Point {
        let (a_si, z_si) = match (common.units, common.accel, common.z) {
            (Units::Si, Some(a), Some(z)) => (a, z),
            _ => kin.to_si(),
        };
        Point {
            omega0: atom.omega0,
            a: kin.a,
            z: kin.z,
            a_si,
            z_si,
            az: kin.az(),
            w0z: kin.w0z(atom.omega0),
            polarization: atom.pol,
        }
    }

    fn text(&self, out: &mut String) {
        kv(out, "omega0", sci(self.omega0));
        kv(out, "a (natural)", sci(self.a));
        kv(out, "z (natural)", sci(self.z));
        kv(out, "a_si", sci(self.a_si));
        kv(out, "z_si", sci(self.z_si));
        kv(out, "az", sci(self.az));
        kv(out, "w0z", sci(self.w0z));
        let p = &self.polarization;
        kv(out, "polarization", format!("{} {} {}", p.px(), p.py(), p.pz()));
    }
}

fn sci(v: f64) -> String {
    format!("{v:.16e}")
}

fn opt(v: Option<f64>) -> String {
    v.map(sci).unwrap_or_else(|| "-".into())
}

fn kv(out: &mut String, key: &str, value: impl std::fmt::Display) {
    let _ = writeln!(out, "{key:<24}{value}");
}

fn classification_text(c: &Classification, out: &mut String) {
    kv(out, "regime", c.regime);
    kv(out, "band", c.band.as_str());
    kv(out, "a/omega0", sci(c.margins.a_over_omega0));
    kv(out, "depth", sci(c.margins.depth));
}

fn json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report serializes");
    s.push('\n');
    s
}

struct Ctx {
    common: Resolved,
    atom: AtomSpec,
    kin: Kinematics,
    class: Classification,
}

fn setup(common: CommonArgs, extra: impl FnOnce(&mut crate::config::ConfigFile) -> Result<(), CliError>) -> Result<Ctx, CliError> {
    let mut cfg = common.config_file()?;
    let common = common.resolve(&mut cfg)?;
    extra(&mut cfg)?;
    cfg.finish()?;
    let atom = common.atom();
    let kin = common.point()?;
    let class = classify_full(atom.omega0, kin.a, kin.z, common.strictness);
    Ok(Ctx {
        common,
        atom,
        kin,
        class,
    })
}

#[derive(Serialize)]
struct ShiftRecord<'a> {
    point: &'a Point,
    classification: &'a Classification,
    breakdown: &'a ShiftBreakdown,
}

pub fn cmd_shift(args: PointArgs) -> Result<String, CliError> {
    let ctx = setup(args.common, |_| Ok(()))?;
    let b = shift_total(&ctx.atom, &ctx.kin, &ctx.common.settings)?;
    if ctx.common.format == Format::Csv {
        let mut row = Row::evaluate(&ctx.atom, &ctx.kin, &ctx.common.settings, ctx.common.strictness);
        if let (Units::Si, Some(a), Some(z)) = (ctx.common.units, ctx.common.accel, ctx.common.z) {
            row = row.with_si_inputs(a, z);
        }
        return match row.error {
            None => Ok(render_csv(&[row], &Column::ALL)),
            Some(_) => shift_static_with_err(&ctx.atom, ctx.kin.z, &ctx.common.settings)
                .map_err(CliError::from)
                .map(|_| render_csv(&[row], &Column::ALL)),
        };
    }
    let point = Point::new(&ctx.atom, &ctx.kin, &ctx.common);
    Ok(match ctx.common.format {
        Format::Json => json(&ShiftRecord {
            point: &point,
            classification: &ctx.class,
            breakdown: &b,
        }),
        _ => {
            let mut out = String::new();
            point.text(&mut out);
            classification_text(&ctx.class, &mut out);
            kv(&mut out, "total_reduced", sci(b.total_reduced));
            kv(&mut out, "vf_reduced", sci(b.vf_reduced));
            kv(&mut out, "rr_reduced", sci(b.rr_reduced));
            kv(&mut out, "bracket", sci(b.bracket));
            kv(&mut out, "err_est", sci(b.err_est));
            kv(&mut out, "nbar2", sci(b.stat.nbar2));
            let _ = writeln!(
                out,
                "{:<6}{:>24}{:>24}{:>24}{:>24}{:>24}{:>24}",
                "comp", "weight", "f", "g", "g_err", "vf", "rr"
            );
            for c in Component::ALL {
                let pc = b.per_component.get(c);
                let _ = writeln!(
                    out,
                    "{:<6}{:>24.16e}{:>24.16e}{:>24.16e}{:>24.16e}{:>24.16e}{:>24.16e}",
                    c.as_str(),
                    pc.weight,
                    b.stat.f.get(c),
                    b.stat.g.get(c),
                    b.stat.tol_achieved.get(c),
                    pc.vf,
                    pc.rr
                );
            }
            out
        }
    })
}

#[derive(Serialize)]
struct RegimeRecord<'a> {
    point: &'a Point,
    classification: &'a Classification,
    expansion: Regime,
    report: Option<&'a AsymptoteReport>,
}

pub fn cmd_regime(args: RegimeArgs) -> Result<String, CliError> {
    let mut forced = None;
    let ctx = setup(args.common, |cfg| {
        forced = merge(args.regime, cfg, "regime")?;
        Ok(())
    })?;
    let expansion = match forced {
        Some(name) => Regime::parse(&name).ok_or_else(|| CliError::Usage(format!("unknown regime `{name}`")))?,
        None => ctx.class.regime,
    };
    let report = match expansion {
        Regime::Ambiguous => None,
        r => Some(asymptote(r, &ctx.atom, &ctx.kin, &ctx.common.settings, ctx.common.strictness)?),
    };
    let point = Point::new(&ctx.atom, &ctx.kin, &ctx.common);
    if ctx.common.format == Format::Json {
        return Ok(json(&RegimeRecord {
            point: &point,
            classification: &ctx.class,
            expansion,
            report: report.as_ref(),
        }));
    }
    let mut out = String::new();
    if ctx.common.format == Format::Csv {
        out.push_str("regime,band,depth,expansion,asymptote_total,exact_total,rel_deviation\n");
        let (asym, exact, dev) = report
            .as_ref()
            .map(|r| (sci(r.asymptote_total), sci(r.exact_total), sci(r.rel_deviation)))
            .unwrap_or_default();
        let _ = writeln!(
            out,
            "{},{},{},{},{asym},{exact},{dev}",
            ctx.class.regime,
            ctx.class.band.as_str(),
            sci(ctx.class.margins.depth),
            expansion
        );
        return Ok(out);
    }
    point.text(&mut out);
    classification_text(&ctx.class, &mut out);
    kv(&mut out, "expansion", expansion);
    match report {
        None => out.push_str("no expansion\n"),
        Some(r) => {
            kv(&mut out, "expansion depth", sci(r.margins.depth));
            kv(&mut out, "asymptote_total", sci(r.asymptote_total));
            kv(&mut out, "asymptote_vf", opt(r.asymptote_vf));
            kv(&mut out, "asymptote_rr", opt(r.asymptote_rr));
            kv(&mut out, "exact_total", sci(r.exact_total));
            kv(&mut out, "exact_vf", sci(r.exact_vf));
            kv(&mut out, "exact_rr", sci(r.exact_rr));
            kv(&mut out, "err_est", sci(r.err_est));
            kv(&mut out, "rel_deviation", sci(r.rel_deviation));
            for v in &r.variants {
                kv(&mut out, &format!("variant {}", v.name), sci(v.total));
            }
            for f in &r.flags {
                kv(&mut out, "flag", f);
            }
        }
    }
    Ok(out)
}

#[derive(Serialize)]
struct RatioRecord<'a> {
    point: &'a Point,
    classification: &'a Classification,
    total_reduced: f64,
    static_reduced: f64,
    comparators: &'a ComparatorResult,
}

pub fn cmd_ratio(args: PointArgs) -> Result<String, CliError> {
    let ctx = setup(args.common, |_| Ok(()))?;
    let b = shift_total(&ctx.atom, &ctx.kin, &ctx.common.settings)?;
    let (stat, stat_err) = shift_static_with_err(&ctx.atom, ctx.kin.z, &ctx.common.settings)?;
    let cmp = comparators(&ctx.atom, &ctx.kin, &b, stat, stat_err, ctx.common.strictness);
    let point = Point::new(&ctx.atom, &ctx.kin, &ctx.common);
    Ok(match ctx.common.format {
        Format::Json => json(&RatioRecord {
            point: &point,
            classification: &ctx.class,
            total_reduced: b.total_reduced,
            static_reduced: stat,
            comparators: &cmp,
        }),
        Format::Csv => format!(
            "z_si,a_si,omega0,total_reduced,static_reduced,ratio_to_static,ratio_thermal_to_accel,thermal_asymptote,thermal_valid\n\
             {},{},{},{},{},{},{},{},{}\n",
            sci(point.z_si),
            sci(point.a_si),
            sci(point.omega0),
            sci(b.total_reduced),
            sci(stat),
            ratio_cell(&cmp.ratio_to_static),
            ratio_cell(&cmp.ratio_thermal_to_accel),
            sci(cmp.thermal_asymptote.value),
            cmp.thermal_asymptote.valid
        ),
        Format::Text => {
            let mut out = String::new();
            point.text(&mut out);
            classification_text(&ctx.class, &mut out);
            kv(&mut out, "total_reduced", sci(b.total_reduced));
            kv(&mut out, "static_reduced", sci(stat));
            kv(&mut out, "ratio_to_static", cmp.ratio_to_static);
            kv(&mut out, "ratio_thermal_to_accel", cmp.ratio_thermal_to_accel);
            kv(&mut out, "thermal_asymptote", sci(cmp.thermal_asymptote.value));
            kv(&mut out, "thermal_valid", cmp.thermal_asymptote.valid);
            out
        }
    })
}

fn ratio_cell(r: &accelshift::Ratio) -> String {
    match r.value() {
        Some(v) => sci(v),
        None => "NA".into(),
    }
}
