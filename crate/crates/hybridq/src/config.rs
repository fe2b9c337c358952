//! Versioned TOML experiment configuration. Unknown keys are rejected at every level.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use hybridq_core::ghz::GhzSetpoints;
use hybridq_core::grape::{GradientMode, GrapeOptions, InitPulse};
use hybridq_core::hamiltonians::hybrid::HybridParams;
use hybridq_core::hamiltonians::{FluxParams, ModelParams, RydbergParams};

use crate::error::{Error, Result};
use crate::params::ParamsFile;

pub const CONFIG_VERSION: u32 = 1;

pub const DESK_NTS: [usize; 3] = [50, 125, 200];
pub const DESK_ITERS: [usize; 3] = [100, 450, 800];

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    version: u32,
    #[serde(default)]
    experiment: RawExperiment,
    #[serde(default)]
    flux: RawFlux,
    #[serde(default)]
    sweep: RawSweep,
    #[serde(default)]
    grape: RawGrape,
    #[serde(default)]
    ghz: RawGhz,
    #[serde(default)]
    params: RawParams,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawExperiment {
    phase: Option<f64>,
    counting_qubits: Option<usize>,
    shots: Option<usize>,
    seed: Option<u64>,
    output: Option<PathBuf>,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFlux {
    zeta: Option<f64>,
    alpha: Option<f64>,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSweep {
    nts: Option<Vec<usize>>,
    iters: Option<Vec<usize>>,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGrape {
    evo_time: Option<f64>,
    fid_err_targ: Option<f64>,
    init_pulse: Option<String>,
    init_amplitude: Option<f64>,
    amplitude_bound: Option<f64>,
    gradient: Option<String>,
    noise: Option<bool>,
    time_unit_ns: Option<f64>,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGhz {
    setpoints: Option<String>,
    grid_density: Option<usize>,
    window_factor: Option<f64>,
    noise: Option<bool>,
    fidelity_floor: Option<f64>,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawParams {
    rydberg: Option<PathBuf>,
    flux: Option<PathBuf>,
    hybrid: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SetpointMode {
    Resonant,
    Bare,
    Table,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GhzConfig {
    pub setpoints: SetpointMode,
    pub grid_density: usize,
    pub window_factor: f64,
    pub noise: bool,
    pub fidelity_floor: Option<f64>,
}

impl GhzConfig {
    pub fn setpoints(&self, hp: &HybridParams) -> Result<GhzSetpoints> {
        Ok(match self.setpoints {
            SetpointMode::Resonant => GhzSetpoints::resonant(hp)?,
            SetpointMode::Bare => GhzSetpoints::bare(hp)?,
            SetpointMode::Table => GhzSetpoints::table(),
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub phase: f64,
    pub counting_qubits: usize,
    pub shots: usize,
    pub zeta: f64,
    pub alpha_flux: f64,
    pub nts_list: Vec<usize>,
    pub iters_list: Vec<usize>,
    pub seed: u64,
    pub output: PathBuf,
    pub grape: GrapeOptions,
    pub model: ModelParams,
    pub hybrid: HybridParams,
    pub ghz: GhzConfig,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        let model = ModelParams::default();
        Self {
            phase: 3.0 / 16.0,
            counting_qubits: 4,
            shots: 10,
            zeta: model.flux.zeta,
            alpha_flux: model.flux.alpha,
            nts_list: DESK_NTS.to_vec(),
            iters_list: DESK_ITERS.to_vec(),
            seed: 0,
            output: PathBuf::from("sweep.csv"),
            grape: GrapeOptions { max_wall_time: f64::INFINITY, ..GrapeOptions::default() },
            model,
            hybrid: HybridParams::default(),
            ghz: GhzConfig { setpoints: SetpointMode::Resonant, grid_density: 10_000, window_factor: 2.0, noise: true, fidelity_floor: None },
        }
    }
}

/// Full grid: 50…200 slices in steps of 10 and 100…800 iterations in steps of 50.
pub fn full_grid() -> (Vec<usize>, Vec<usize>) {
    ((50..=200).step_by(10).collect(), (100..=800).step_by(50).collect())
}

fn resolve(base: Option<&Path>, p: &Path) -> PathBuf {
    match base {
        Some(b) if p.is_relative() => b.join(p),
        _ => p.to_path_buf(),
    }
}

impl ExperimentConfig {
    /// Parses TOML text. Relative parameter-file paths resolve against `base`.
    pub fn parse(text: &str, base: Option<&Path>) -> Result<Self> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        if raw.version != CONFIG_VERSION {
            return Err(Error::Config(format!("unsupported version {}", raw.version)));
        }
        let mut c = Self::default();
        let e = raw.experiment;
        c.phase = e.phase.unwrap_or(c.phase);
        c.counting_qubits = e.counting_qubits.unwrap_or(c.counting_qubits);
        c.shots = e.shots.unwrap_or(c.shots);
        c.seed = e.seed.unwrap_or(c.seed);
        c.output = e.output.unwrap_or(c.output);

        let rydberg = match &raw.params.rydberg {
            Some(p) => ParamsFile::read(&resolve(base, p))?.rydberg()?,
            None => RydbergParams::default(),
        };
        let mut flux = match &raw.params.flux {
            Some(p) => ParamsFile::read(&resolve(base, p))?.flux()?,
            None => FluxParams::default(),
        };
        flux.zeta = raw.flux.zeta.unwrap_or(flux.zeta);
        flux.alpha = raw.flux.alpha.unwrap_or(flux.alpha);
        flux.validate()?;
        c.zeta = flux.zeta;
        c.alpha_flux = flux.alpha;
        if let Some(p) = &raw.params.hybrid {
            c.hybrid = ParamsFile::read(&resolve(base, p))?.hybrid()?;
        }

        c.nts_list = raw.sweep.nts.unwrap_or(c.nts_list);
        c.iters_list = raw.sweep.iters.unwrap_or(c.iters_list);

        let g = raw.grape;
        c.grape.evo_time = g.evo_time.unwrap_or(c.grape.evo_time);
        c.grape.fid_err_targ = g.fid_err_targ.unwrap_or(c.grape.fid_err_targ);
        if let Some(s) = g.init_pulse {
            c.grape.init_pulse = s.parse::<InitPulse>()?;
        }
        c.grape.init_amplitude = g.init_amplitude.unwrap_or(c.grape.init_amplitude);
        c.grape.amplitude_bound = g.amplitude_bound.or(c.grape.amplitude_bound);
        if let Some(s) = g.gradient {
            c.grape.gradient = match s.as_str() {
                "exact" => GradientMode::Exact,
                "first-order" => GradientMode::FirstOrder,
                _ => return Err(Error::Config(format!("unknown gradient mode `{s}`"))),
            };
        }
        c.model = ModelParams {
            rydberg,
            flux,
            time_unit_ns: g.time_unit_ns.unwrap_or(c.model.time_unit_ns),
            noise: g.noise.unwrap_or(c.model.noise),
        };

        let h = raw.ghz;
        if let Some(s) = h.setpoints {
            c.ghz.setpoints = match s.as_str() {
                "resonant" => SetpointMode::Resonant,
                "bare" => SetpointMode::Bare,
                "table" => SetpointMode::Table,
                _ => return Err(Error::Config(format!("unknown setpoint mode `{s}`"))),
            };
        }
        c.ghz.grid_density = h.grid_density.unwrap_or(c.ghz.grid_density);
        c.ghz.window_factor = h.window_factor.unwrap_or(c.ghz.window_factor);
        c.ghz.noise = h.noise.unwrap_or(c.ghz.noise);
        c.ghz.fidelity_floor = h.fidelity_floor.or(c.ghz.fidelity_floor);

        c.validate()?;
        Ok(c)
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text, path.parent())
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..1.0).contains(&self.phase) {
            return Err(Error::Config(format!("phase {} outside [0, 1)", self.phase)));
        }
        if self.counting_qubits < 2 {
            return Err(Error::Config("at least two counting qubits are needed".into()));
        }
        if self.shots == 0 {
            return Err(Error::Config("shots must be at least 1".into()));
        }
        if self.nts_list.is_empty() || self.iters_list.is_empty() {
            return Err(Error::Config("sweep lists must be nonempty".into()));
        }
        self.grape.validate()?;
        self.model.flux.validate()?;
        self.model.rydberg.validate()?;
        self.hybrid.validate()?;
        Ok(())
    }

    pub fn set_zeta(&mut self, zeta: f64) {
        self.zeta = zeta;
        self.model.flux.zeta = zeta;
    }

    /// Outcome integer closest to φ·2ᵗ.
    pub fn target_outcome(&self) -> usize {
        let size = 1usize << self.counting_qubits;
        ((self.phase * size as f64).round() as usize) % size
    }
}
