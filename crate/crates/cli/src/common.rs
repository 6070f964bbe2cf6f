//! Flags shared by every subcommand and their resolution against a config file.

use std::path::PathBuf;
use std::str::FromStr;

use accelshift::asymptotic::DEFAULT_STRICTNESS;
use accelshift::{AtomSpec, Kinematics, Polarization, QuadratureSettings, UnitSystem};
use clap::{Args, ValueEnum};
use serde::Serialize;

use crate::config::{merge, ConfigFile};
use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Units {
    Si,
    Natural,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Text,
    Json,
    Csv,
}

macro_rules! value_enum_from_str {
    ($($t:ty),*) => {$(
        impl std::str::FromStr for $t {
            type Err = String;
            fn from_str(s: &str) -> Result<Self, String> {
                <$t as ValueEnum>::from_str(s, true)
            }
        }
    )*};
}
pub(crate) use value_enum_from_str;

value_enum_from_str!(Units, Format);

/// Comma-separated `px,py,pz`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolArg(pub f64, pub f64, pub f64);

impl FromStr for PolArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<f64> = s
            .split(',')
            .map(|p| p.trim().parse::<f64>().map_err(|e| format!("`{p}`: {e}")))
            .collect::<Result<_, _>>()?;
        match parts[..] {
            [x, y, z] => Ok(PolArg(x, y, z)),
            _ => Err(format!("expected three comma-separated weights, got {}", parts.len())),
        }
    }
}

#[derive(Args, Debug, Clone, Default)]
pub struct CommonArgs {
    /// Transition frequency ω₀ (rad/s in SI, inverse time in natural units).
    #[arg(long, allow_negative_numbers = true)]
    pub omega0: Option<f64>,
    /// Proper acceleration (m/s² in SI).
    #[arg(long, allow_negative_numbers = true)]
    pub accel: Option<f64>,
    /// Distance to the plate (m in SI).
    #[arg(long, allow_negative_numbers = true)]
    pub z: Option<f64>,
    #[arg(long, value_enum)]
    pub units: Option<Units>,
    /// Polarization weights `px,py,pz`, summing to 1.
    #[arg(long, value_name = "PX,PY,PZ")]
    pub pol: Option<PolArg>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Flat `key = value` file; flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, env = "ACCELSHIFT_THREADS")]
    pub threads: Option<usize>,
    #[arg(long, allow_negative_numbers = true)]
    pub rel_tol: Option<f64>,
    #[arg(long)]
    pub max_subdivisions: Option<usize>,
    /// Factor by which regime inequalities must hold.
    #[arg(long, allow_negative_numbers = true)]
    pub strictness: Option<f64>,
}

/// Common flags after merging with the config file. `accel` and `z` stay
/// raw (in `units`) because a sweep overrides one of them.
#[derive(Debug, Clone, Serialize)]
pub struct Resolved {
    pub omega0: f64,
    pub accel: Option<f64>,
    pub z: Option<f64>,
    pub units: Units,
    pub pol: Polarization,
    pub format: Format,
    pub threads: Option<usize>,
    pub settings: QuadratureSettings,
    pub strictness: f64,
}

impl CommonArgs {
    pub fn config_file(&self) -> Result<ConfigFile, CliError> {
        match &self.config {
            Some(p) => ConfigFile::load(p),
            None => Ok(ConfigFile::default()),
        }
    }

    /// Consumes the common keys of `cfg`; subcommand keys stay behind.
    pub fn resolve(self, cfg: &mut ConfigFile) -> Result<Resolved, CliError> {
        let omega0 = merge(self.omega0, cfg, "omega0")?.ok_or_else(|| missing("omega0"))?;
        let accel = merge(self.accel, cfg, "accel")?;
        let z = merge(self.z, cfg, "z")?;
        let units = merge(self.units, cfg, "units")?.unwrap_or(Units::Si);
        let pol = match merge(self.pol, cfg, "pol")? {
            Some(PolArg(x, y, z)) => Polarization::new(x, y, z)?,
            None => Polarization::ISOTROPIC,
        };
        let format = merge(self.format, cfg, "format")?.unwrap_or(Format::Text);
        let threads = merge(self.threads, cfg, "threads")?;
        if threads == Some(0) {
            return Err(CliError::Usage("--threads must be at least 1".into()));
        }
        let mut settings = QuadratureSettings::default();
        if let Some(t) = merge(self.rel_tol, cfg, "rel_tol")? {
            settings.rel_tol = t;
        }
        if let Some(n) = merge(self.max_subdivisions, cfg, "max_subdivisions")? {
            settings.max_subdivisions = n;
        }
        settings.validate()?;
        let strictness = merge(self.strictness, cfg, "strictness")?.unwrap_or(DEFAULT_STRICTNESS);
        if !(strictness.is_finite() && strictness > 1.0) {
            return Err(CliError::Usage(format!("--strictness must exceed 1, got {strictness}")));
        }
        AtomSpec::new(omega0, pol)?;
        Ok(Resolved {
            omega0,
            accel,
            z,
            units,
            pol,
            format,
            threads,
            settings,
            strictness,
        })
    }
}

pub fn missing(flag: &str) -> CliError {
    CliError::Usage(format!("--{} is required", flag.replace('_', "-")))
}

impl Resolved {
    pub fn unit_system(&self) -> UnitSystem {
        match self.units {
            Units::Si => UnitSystem::SI,
            Units::Natural => UnitSystem::NATURAL,
        }
    }

    pub fn atom(&self) -> AtomSpec {
        AtomSpec::new(self.omega0, self.pol).expect("validated in resolve")
    }

    /// Natural-unit kinematics from `accel` and `z` in the chosen units.
    pub fn kinematics(&self, accel: f64, z: f64) -> Result<Kinematics, CliError> {
        Ok(self.unit_system().kinematics(accel, z)?)
    }

    /// The single point named by `--accel` and `--z`.
    pub fn point(&self) -> Result<Kinematics, CliError> {
        let a = self.accel.ok_or_else(|| missing("accel"))?;
        let z = self.z.ok_or_else(|| missing("z"))?;
        self.kinematics(a, z)
    }

    /// A pool of `threads` workers, or the rayon default.
    pub fn pool(&self) -> Result<rayon::ThreadPool, CliError> {
        let mut b = rayon::ThreadPoolBuilder::new();
        if let Some(n) = self.threads {
            b = b.num_threads(n);
        }
        b.build().map_err(|e| CliError::Usage(format!("thread pool: {e}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pol_arg_parses_three_weights() {
        assert_eq!("1,0,0".parse::<PolArg>().unwrap(), PolArg(1.0, 0.0, 0.0));
        assert!("1,0".parse::<PolArg>().is_err());
        assert!("a,b,c".parse::<PolArg>().is_err());
    }

    #[test]
    fn config_fills_missing_flags() {
        let mut cfg = ConfigFile::parse("omega0 = 2\nunits = natural\npol = 0,1,0").unwrap();
        let r = CommonArgs::default().resolve(&mut cfg).unwrap();
        assert_eq!(r.omega0, 2.0);
        assert_eq!(r.units, Units::Natural);
        assert_eq!(r.pol.py(), 1.0);
        cfg.finish().unwrap();
    }

    #[test]
    fn bad_polarization_is_usage() {
        let args = CommonArgs {
            omega0: Some(1.0),
            pol: Some(PolArg(0.5, 0.5, 0.5)),
            ..Default::default()
        };
        let e = args.resolve(&mut ConfigFile::default()).unwrap_err();
        assert_eq!(e.exit_code(), 2);
    }
}
