//! Declarative run configuration, read from a JSON file.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use rossby_core::resonance::SweepParameter;
use rossby_core::*;
use serde::{Deserialize, Serialize};

/// Relative mismatch allowed between a declared mode wavenumber and the family's.
const KAPPA_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub physical: PhysicalParams,
    pub family: FamilySpec,
    #[serde(default)]
    pub modes: Vec<ModeConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridSpec>,
    #[serde(default)]
    pub sampling: SamplingPlan,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepConfig>,
    #[serde(default)]
    pub outputs: Outputs,
}

/// One horizontal mode. `kappa` may be left out; it is then taken from the family.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ModeConfig {
    PlaneWave {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        kappa: Option<f64>,
        amplitude: f64,
        #[serde(default)]
        phase: f64,
        #[serde(default)]
        direction: f64,
    },
    Vortex {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        kappa: Option<f64>,
        order: u32,
        amplitude: f64,
        #[serde(default)]
        phase: f64,
        #[serde(default)]
        center: [f64; 2],
    },
}

impl ModeConfig {
    fn kappa_mut(&mut self) -> &mut Option<f64> {
        match self {
            ModeConfig::PlaneWave { kappa, .. } | ModeConfig::Vortex { kappa, .. } => kappa,
        }
    }

    fn build(&self, kappa: f64) -> Result<HorizontalMode> {
        match *self {
            ModeConfig::PlaneWave { amplitude, phase, direction, .. } => plane_wave(kappa, amplitude, phase, direction),
            ModeConfig::Vortex { order, amplitude, phase, center, .. } => {
                bessel_vortex(kappa, order, amplitude, phase, center)
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub parameter: SweepParameter,
    pub range: [f64; 2],
    #[serde(default = "default_sweep_samples")]
    pub samples: usize,
}

fn default_sweep_samples() -> usize {
    400
}

/// Output paths; relative paths are taken from the config file's directory.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Outputs {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub report: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub csv: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vtk: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep_csv: Option<PathBuf>,
}

/// A parsed config together with the directory its relative paths refer to.
#[derive(Debug)]
pub struct Loaded {
    pub config: RunConfig,
    pub base: PathBuf,
}

impl Loaded {
    pub fn read(path: &Path) -> anyhow::Result<Self> {
        let text = fs::read_to_string(path).with_context(|| format!("cannot read config {}", path.display()))?;
        let config = parse(&text).with_context(|| format!("invalid config {}", path.display()))?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Ok(Loaded { config, base })
    }

    pub fn output(&self, path: &Option<PathBuf>) -> Option<PathBuf> {
        path.as_ref().map(|p| if p.is_absolute() { p.clone() } else { self.base.join(p) })
    }
}

/// Parses a config, naming the offending field and line on failure.
pub fn parse(text: &str) -> anyhow::Result<RunConfig> {
    let de = &mut serde_json::Deserializer::from_str(text);
    match serde_path_to_error::deserialize(de) {
        Ok(config) => Ok(config),
        Err(err) => {
            // serde_json's message already carries the line and column
            let path = err.path().to_string();
            bail!("at `{path}`: {}", err.into_inner())
        }
    }
}

/// Everything a command needs, checked for consistency.
pub struct Resolved {
    pub solution: Option<Solution>,
    /// The config with every default and inferred value written out.
    pub config: RunConfig,
}

pub fn resolve(config: &RunConfig, need_modes: bool) -> Result<Resolved> {
    let spec = validate(&config.family, &config.physical)?;
    let kappa = spec.kappa();
    let mut echo = config.clone();
    let mut modes = Vec::with_capacity(config.modes.len());
    for mode in &mut echo.modes {
        let declared = mode.kappa_mut();
        if let Some(k) = *declared {
            if (k - kappa).abs() > KAPPA_TOLERANCE * kappa {
                return Err(Error::WavenumberMismatch { mode: k, family: kappa });
            }
        }
        *declared = Some(kappa);
        modes.push(mode.build(kappa)?);
    }
    if need_modes && modes.is_empty() {
        return Err(Error::BadParameter("config declares no modes".into()));
    }
    let solution = if modes.is_empty() {
        None
    } else {
        Some(build_solution(&spec, &config.physical, superpose(modes)?)?)
    };
    if let Some(grid) = &config.grid {
        grid.check(&config.physical)?;
    }
    config.sampling.check()?;
    Ok(Resolved { solution, config: echo })
}
