//! TOML scenario files.

use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::Deserialize;
use twobath::{validate_scenario, FlatBathInput, InitialAmplitudes, Scenario};

use crate::error::CliError;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub system: SystemSection,
    pub bath1: BathSection,
    pub bath2: BathSection,
    pub discretization: DiscretizationSection,
    pub time: TimeSection,
    pub initial: InitialSection,
    #[serde(default)]
    pub output: OutputSection,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemSection {
    pub omega: f64,
    pub lambda: f64,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BathSection {
    pub temperature: f64,
    pub j0: f64,
    pub omega_min: f64,
    pub omega_max: f64,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiscretizationSection {
    pub modes: usize,
}

/// `steps` counts intervals, so a sweep has `steps + 1` rows.
#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeSection {
    pub t_start: f64,
    pub t_end: f64,
    pub steps: usize,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialSection {
    pub alpha1_re: f64,
    pub alpha1_im: f64,
    pub alpha2_re: f64,
    pub alpha2_im: f64,
}

/// Default output paths per subcommand; stdout when absent.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    pub evolve: Option<PathBuf>,
    pub equilibrium: Option<PathBuf>,
    pub wigner: Option<PathBuf>,
    pub kernel: Option<PathBuf>,
    pub compare_ww: Option<PathBuf>,
}

impl BathSection {
    fn input(&self) -> FlatBathInput {
        FlatBathInput {
            temperature: self.temperature,
            j0: self.j0,
            omega_min: self.omega_min,
            omega_max: self.omega_max,
        }
    }
}

impl ScenarioConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let cfg: Self = toml::from_str(text).map_err(|e| CliError::Config(e.message().to_string()))?;
        cfg.check_time()?;
        Ok(cfg)
    }

    fn check_time(&self) -> Result<(), CliError> {
        let t = &self.time;
        if self.discretization.modes == 0 {
            return Err(CliError::Config("discretization.modes must be >= 1".into()));
        }
        if t.steps == 0 {
            return Err(CliError::Config("time.steps must be >= 1".into()));
        }
        if !(t.t_start.is_finite() && t.t_end.is_finite() && t.t_start >= 0.0 && t.t_end > t.t_start) {
            return Err(CliError::Config(format!(
                "time grid needs t_end > t_start >= 0, got [{}, {}]",
                t.t_start, t.t_end
            )));
        }
        Ok(())
    }

    pub fn scenario(&self) -> Result<Scenario, CliError> {
        validate_scenario(self.system.omega, self.system.lambda, [self.bath1.input(), self.bath2.input()])
            .map_err(|e| CliError::Precondition(e.to_string()))
    }

    pub fn initial(&self) -> Result<InitialAmplitudes, CliError> {
        let i = &self.initial;
        Ok(InitialAmplitudes::new(
            Complex64::new(i.alpha1_re, i.alpha1_im),
            Complex64::new(i.alpha2_re, i.alpha2_im),
        )?)
    }

    pub fn temperatures(&self) -> (f64, f64) {
        (self.bath1.temperature, self.bath2.temperature)
    }

    pub fn times(&self) -> Vec<f64> {
        let t = &self.time;
        let n = t.steps;
        (0..=n)
            .map(|i| if i == n { t.t_end } else { t.t_start + (t.t_end - t.t_start) * i as f64 / n as f64 })
            .collect()
    }
}
