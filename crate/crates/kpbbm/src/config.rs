//! Run configuration: defaults, JSON config files, and flag precedence.
//!
//! A run is fully described by a [`RunConfig`]. Values resolve in three
//! layers: built-in defaults, then an optional JSON config file, then
//! command-line flags; later layers win field by field.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::melnikov::MelnikovVariant;
use crate::model::ModelParams;

/// Output document format.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

impl std::str::FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(Error::Config(format!(
                "unknown format '{other}'; expected csv or json"
            ))),
        }
    }
}

/// Inclusive uniform grid min, min+step, …, max.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Grid {
    pub min: f64,
    pub max: f64,
    pub step: f64,
}

impl Grid {
    pub fn values(&self) -> Vec<f64> {
        let n = ((self.max - self.min) / self.step).round() as usize;
        (0..=n)
            .map(|i| self.min + self.step * i as f64)
            .filter(|v| *v <= self.max + 0.5 * self.step)
            .collect()
    }

    fn validate(&self, name: &str) -> Result<()> {
        if !(self.step > 0.0 && self.min.is_finite() && self.max >= self.min) {
            return Err(Error::Config(format!(
                "{name} grid needs min <= max and step > 0; got [{}, {}] step {}",
                self.min, self.max, self.step
            )));
        }
        Ok(())
    }
}

/// Numerical tolerances shared across the pipeline.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Tolerances {
    /// Absolute tolerance of the adaptive quadrature.
    pub quad: f64,
    /// Root location tolerance for speed solves.
    pub root: f64,
    /// Relative tolerance of trajectory integration.
    pub ode_rtol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            quad: 1e-10,
            root: 1e-12,
            ode_rtol: 1e-11,
        }
    }
}

/// Fully resolved configuration of one command invocation.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub params: ModelParams,
    pub variant: MelnikovVariant,
    /// Speed grid for Melnikov sweeps.
    pub c_grid: Grid,
    /// ξ grid for profile sampling.
    pub xi_grid: Grid,
    /// τ ladder for the persistence experiment, largest first.
    pub tau_ladder: Vec<f64>,
    pub tolerances: Tolerances,
    /// None lets each command pick its natural format.
    pub format: Option<OutputFormat>,
    pub out: Option<PathBuf>,
}

/// One layer of partial settings: a JSON config file or the CLI flags.
///
/// Every field is optional; unset fields fall through to the layer below.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigLayer {
    pub a: Option<f64>,
    pub b: Option<f64>,
    pub k: Option<f64>,
    pub c: Option<f64>,
    pub tau: Option<f64>,
    /// `local`, `nonlocal` or `none`, with optional `:noviscous` suffix.
    pub variant: Option<String>,
    pub c_min: Option<f64>,
    pub c_max: Option<f64>,
    pub c_step: Option<f64>,
    pub xi_min: Option<f64>,
    pub xi_max: Option<f64>,
    pub xi_step: Option<f64>,
    pub tau_ladder: Option<Vec<f64>>,
    pub quad_tol: Option<f64>,
    pub root_tol: Option<f64>,
    pub ode_rtol: Option<f64>,
    pub format: Option<String>,
    pub out: Option<PathBuf>,
}

impl ConfigLayer {
    /// Reads a layer from a JSON file.
    pub fn from_file(path: &Path) -> Result<ConfigLayer> {
        let text = std::fs::read_to_string(path)?;
        let layer = serde_json::from_str(&text)?;
        Ok(layer)
    }

    /// Field-wise overlay; fields set in `top` win.
    pub fn overlay(mut self, top: ConfigLayer) -> ConfigLayer {
        macro_rules! take {
            ($($f:ident),*) => { $( if top.$f.is_some() { self.$f = top.$f; } )* };
        }
        take!(
            a, b, k, c, tau, variant, c_min, c_max, c_step, xi_min, xi_max, xi_step, tau_ladder,
            quad_tol, root_tol, ode_rtol, format, out
        );
        self
    }
}

impl RunConfig {
    /// Built-in defaults: the reference triple at c = 1, τ = 1e-3, local
    /// full variant, c ∈ [0.05, 3] step 0.05, ξ ∈ [−20, 20] step 0.05,
    /// τ ladder {4e-3, 2e-3, 1e-3}.
    pub fn resolve(file: Option<ConfigLayer>, flags: ConfigLayer) -> Result<RunConfig> {
        let layer = file.unwrap_or_default().overlay(flags);

        let params = ModelParams::new(
            layer.a.unwrap_or(-1.0),
            layer.b.unwrap_or(1.0),
            layer.k.unwrap_or(-1.0),
            layer.c.unwrap_or(1.0),
            layer.tau.unwrap_or(1e-3),
        )?;
        let variant: MelnikovVariant = layer.variant.as_deref().unwrap_or("local").parse()?;

        let c_grid = Grid {
            min: layer.c_min.unwrap_or(0.05),
            max: layer.c_max.unwrap_or(3.0),
            step: layer.c_step.unwrap_or(0.05),
        };
        c_grid.validate("c")?;
        let xi_grid = Grid {
            min: layer.xi_min.unwrap_or(-20.0),
            max: layer.xi_max.unwrap_or(20.0),
            step: layer.xi_step.unwrap_or(0.05),
        };
        xi_grid.validate("xi")?;

        let tau_ladder = layer.tau_ladder.unwrap_or_else(|| vec![4e-3, 2e-3, 1e-3]);
        if tau_ladder.is_empty() || tau_ladder.iter().any(|t| !(*t > 0.0)) {
            return Err(Error::Config(
                "tau_ladder must be non-empty with positive entries".into(),
            ));
        }

        let tolerances = Tolerances {
            quad: layer.quad_tol.unwrap_or(1e-10),
            root: layer.root_tol.unwrap_or(1e-12),
            ode_rtol: layer.ode_rtol.unwrap_or(1e-11),
        };
        if !(tolerances.quad > 0.0 && tolerances.root > 0.0 && tolerances.ode_rtol > 0.0) {
            return Err(Error::Config("tolerances must be positive".into()));
        }

        let format = match layer.format.as_deref() {
            Some(s) => Some(s.parse()?),
            None => None,
        };

        Ok(RunConfig {
            params,
            variant,
            c_grid,
            xi_grid,
            tau_ladder,
            tolerances,
            format,
            out: layer.out,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::melnikov::DelayKind;

    #[test]
    fn defaults_resolve_to_the_reference_setup() {
        let cfg = RunConfig::resolve(None, ConfigLayer::default()).unwrap();
        assert_eq!(cfg.params.a, -1.0);
        assert_eq!(cfg.params.c, 1.0);
        assert_eq!(cfg.params.tau, 1e-3);
        assert_eq!(cfg.variant.delay, DelayKind::Local);
        assert!(cfg.variant.viscous);
        assert_eq!(cfg.tau_ladder, vec![4e-3, 2e-3, 1e-3]);
        assert_eq!(cfg.c_grid.values().len(), 60);
        assert!(cfg.format.is_none());
    }

    #[test]
    fn flags_override_file_which_overrides_defaults() {
        let file = ConfigLayer {
            c: Some(0.8),
            tau: Some(5e-3),
            variant: Some("nonlocal".into()),
            ..Default::default()
        };
        let flags = ConfigLayer {
            c: Some(1.4),
            ..Default::default()
        };
        let cfg = RunConfig::resolve(Some(file), flags).unwrap();
        assert_eq!(cfg.params.c, 1.4);
        assert_eq!(cfg.params.tau, 5e-3);
        assert_eq!(cfg.variant.delay, DelayKind::Nonlocal);
    }

    #[test]
    fn grid_values_hit_both_ends() {
        let g = Grid {
            min: 0.05,
            max: 3.0,
            step: 0.05,
        };
        let v = g.values();
        assert_eq!(v.len(), 60);
        assert!((v[0] - 0.05).abs() < 1e-15);
        assert!((v[59] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn bad_layers_are_rejected() {
        let bad = ConfigLayer {
            c_step: Some(-0.1),
            ..Default::default()
        };
        assert!(matches!(
            RunConfig::resolve(None, bad),
            Err(Error::Config(_))
        ));
        let bad = ConfigLayer {
            variant: Some("weird".into()),
            ..Default::default()
        };
        assert!(RunConfig::resolve(None, bad).is_err());
        let bad = ConfigLayer {
            tau_ladder: Some(vec![]),
            ..Default::default()
        };
        assert!(RunConfig::resolve(None, bad).is_err());
        let bad = ConfigLayer {
            format: Some("xml".into()),
            ..Default::default()
        };
        assert!(RunConfig::resolve(None, bad).is_err());
        let degenerate = ConfigLayer {
            c: Some(0.0),
            ..Default::default()
        };
        assert!(matches!(
            RunConfig::resolve(None, degenerate),
            Err(Error::DegenerateParameters(_))
        ));
    }

    #[test]
    fn config_file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.json");
        std::fs::write(
            &path,
            r#"{ "c": 0.9, "tau_ladder": [2e-3, 1e-3], "format": "json" }"#,
        )
        .unwrap();
        let layer = ConfigLayer::from_file(&path).unwrap();
        let cfg = RunConfig::resolve(Some(layer), ConfigLayer::default()).unwrap();
        assert_eq!(cfg.params.c, 0.9);
        assert_eq!(cfg.tau_ladder, vec![2e-3, 1e-3]);
        assert_eq!(cfg.format, Some(OutputFormat::Json));
    }

    #[test]
    fn unknown_config_keys_are_errors() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.json");
        std::fs::write(&path, r#"{ "speed": 1.0 }"#).unwrap();
        assert!(matches!(ConfigLayer::from_file(&path), Err(Error::Json(_))));
    }
}
