//! Parameter files: one `name = value unit` entry per line, `#` comments, and a leading
//! `version = 1` line.
//!
//! Angular quantities accept `rad/ns` or a frequency unit (GHz, MHz, kHz), which is
//! multiplied by 2π. Plain frequencies convert between frequency units. Every other
//! quantity requires its exact unit.

use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::path::Path;

use hybridq_core::hamiltonians::hybrid::{DephasingScale, LevelSlopes};
use hybridq_core::hamiltonians::{FluxParams, HybridParams, RydbergParams};

use crate::error::{Error, Result};

pub const PARAMS_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq)]
enum Kind {
    /// Stored in rad/ns.
    Angular,
    /// Stored in the given frequency unit.
    Frequency(&'static str),
    Exact(&'static str),
    Dimensionless,
    Word,
}

#[derive(Clone, Debug, PartialEq)]
struct Entry {
    value: String,
    unit: String,
    line: usize,
}

fn frequency_in_ghz(unit: &str) -> Option<f64> {
    match unit {
        "GHz" => Some(1.0),
        "MHz" => Some(1e-3),
        "kHz" => Some(1e-6),
        _ => None,
    }
}

fn convert(key: &str, e: &Entry, kind: Kind) -> Result<f64> {
    let v: f64 = e.value.parse().map_err(|_| Error::Params { line: e.line, msg: format!("`{key}`: `{}` is not a number", e.value) })?;
    let bad_unit = || Error::Params { line: e.line, msg: format!("`{key}`: unit `{}` not accepted", e.unit) };
    let out = match kind {
        Kind::Angular => match e.unit.as_str() {
            "rad/ns" => v,
            u => TAU * v * frequency_in_ghz(u).ok_or_else(bad_unit)?,
        },
        Kind::Frequency(stored) => {
            let f = frequency_in_ghz(&e.unit).ok_or_else(bad_unit)?;
            v * f / frequency_in_ghz(stored).expect("stored unit is a frequency")
        }
        Kind::Exact(u) => {
            if e.unit != u {
                return Err(bad_unit());
            }
            v
        }
        Kind::Dimensionless => {
            if !e.unit.is_empty() && e.unit != "1" {
                return Err(bad_unit());
            }
            v
        }
        Kind::Word => unreachable!("words are not numeric"),
    };
    if !out.is_finite() {
        return Err(Error::Params { line: e.line, msg: format!("`{key}` is not finite") });
    }
    Ok(out)
}

/// Parsed but not yet interpreted entries of one file.
#[derive(Clone, Debug, Default)]
pub struct ParamsFile {
    entries: BTreeMap<String, Entry>,
}

impl ParamsFile {
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        let mut version = None;
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (name, rest) = content
                .split_once('=')
                .ok_or_else(|| Error::Params { line, msg: "expected `name = value unit`".into() })?;
            let name = name.trim();
            let mut parts = rest.split_whitespace();
            let value = parts.next().ok_or_else(|| Error::Params { line, msg: format!("`{name}` has no value") })?;
            let unit = parts.next().unwrap_or("");
            if parts.next().is_some() {
                return Err(Error::Params { line, msg: format!("`{name}` has trailing tokens") });
            }
            if name == "version" {
                let v: u32 = value.parse().map_err(|_| Error::Params { line, msg: "version must be an integer".into() })?;
                if v != PARAMS_VERSION {
                    return Err(Error::Params { line, msg: format!("unsupported version {v}") });
                }
                version = Some(v);
                continue;
            }
            if version.is_none() {
                return Err(Error::Params { line, msg: "the first entry must be `version`".into() });
            }
            let entry = Entry { value: value.to_string(), unit: unit.to_string(), line };
            if entries.insert(name.to_string(), entry).is_some() {
                return Err(Error::Params { line, msg: format!("duplicate key `{name}`") });
            }
        }
        if version.is_none() {
            return Err(Error::Params { line: 0, msg: "missing `version`".into() });
        }
        Ok(Self { entries })
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text)
    }

    fn check_known(&self, known: &[(&str, Kind)]) -> Result<()> {
        for (k, e) in &self.entries {
            if !known.iter().any(|(n, _)| n == k) {
                return Err(Error::Params { line: e.line, msg: format!("unknown key `{k}`") });
            }
        }
        Ok(())
    }

    fn apply(&self, known: &[(&str, Kind)], mut set: impl FnMut(&str, Option<f64>, &str) -> Result<()>) -> Result<()> {
        self.check_known(known)?;
        for &(k, kind) in known {
            if let Some(e) = self.entries.get(k) {
                match kind {
                    Kind::Word => set(k, None, &e.value)?,
                    _ => set(k, Some(convert(k, e, kind)?), "")?,
                }
            }
        }
        Ok(())
    }

    pub fn rydberg(&self) -> Result<RydbergParams> {
        use Kind::*;
        let known = [
            ("rabi", Angular),
            ("detuning", Angular),
            ("phase", Exact("rad")),
            ("c3", Exact("GHz*um^3")),
            ("c6", Exact("GHz*um^6")),
            ("distance", Exact("um")),
            ("dephasing", Angular),
            ("decay", Exact("1/ns")),
            ("langevin_gamma", Exact("1/ns")),
            ("langevin_diffusion", Exact("rad^2/ns")),
        ];
        let mut p = RydbergParams::default();
        self.apply(&known, |k, v, _| {
            let v = v.expect("numeric");
            match k {
                "rabi" => p.rabi = v,
                "detuning" => p.detuning = v,
                "phase" => p.phase = v,
                "c3" => p.c3 = v,
                "c6" => p.c6 = v,
                "distance" => p.distance = v,
                "dephasing" => p.dephasing = v,
                "decay" => p.decay = v,
                "langevin_gamma" => p.langevin_gamma = Some(v),
                _ => p.langevin_diffusion = Some(v),
            }
            Ok(())
        })?;
        p.validate()?;
        Ok(p)
    }

    pub fn flux(&self) -> Result<FluxParams> {
        use Kind::*;
        let known = [
            ("e_j", Frequency("GHz")),
            ("e_c", Frequency("GHz")),
            ("alpha", Dimensionless),
            ("f_eps", Dimensionless),
            ("zeta", Dimensionless),
            ("delta_tunnel", Frequency("GHz")),
            ("eps_bias", Frequency("GHz")),
            ("g_res", Frequency("GHz")),
            ("omega_res", Frequency("GHz")),
            ("purcell_rate", Frequency("MHz")),
            ("delta_f", Dimensionless),
            ("delta_n", Dimensionless),
        ];
        let mut p = FluxParams::default();
        self.apply(&known, |k, v, _| {
            let v = v.expect("numeric");
            match k {
                "e_j" => p.e_j = v,
                "e_c" => p.e_c = v,
                "alpha" => p.alpha = v,
                "f_eps" => p.f_eps = v,
                "zeta" => p.zeta = v,
                "delta_tunnel" => p.delta_tunnel = v,
                "eps_bias" => p.eps_bias = v,
                "g_res" => p.g_res = v,
                "omega_res" => p.omega_res = v,
                "purcell_rate" => p.purcell_rate = v,
                "delta_f" => p.delta_f = v,
                _ => p.delta_n = v,
            }
            Ok(())
        })?;
        p.validate()?;
        Ok(p)
    }

    pub fn hybrid(&self) -> Result<HybridParams> {
        use Kind::*;
        let known = [
            ("omega0", Angular),
            ("rabi_a1", Angular),
            ("rabi_a2", Angular),
            ("g_a", Angular),
            ("g_a_prime", Angular),
            ("delta_tunnel", Angular),
            ("gamma_q", Dimensionless),
            ("e_field", Exact("V/cm")),
            ("slopes", Word),
            ("mutual_inductance", Exact("pH")),
            ("inductance", Exact("nH")),
            ("capacitance", Exact("aF")),
            ("persistent_current", Exact("A")),
            ("quality_factor", Dimensionless),
            ("gamma_ryd", Angular),
            ("gamma_relax", Angular),
            ("gamma_phi", Dimensionless),
            ("dephasing_scale", Word),
        ];
        let mut p = HybridParams::default();
        self.apply(&known, |k, v, word| {
            let bad = |line_key: &str| Error::Params { line: 0, msg: format!("`{line_key}`: unknown value `{word}`") };
            match (k, v) {
                ("slopes", _) => {
                    p.slopes = match word {
                        "fine" => LevelSlopes::Fine,
                        "coarse" => LevelSlopes::Coarse,
                        _ => return Err(bad(k)),
                    }
                }
                ("dephasing_scale", _) => {
                    p.dephasing_scale = match word {
                        "mhz" => DephasingScale::Mhz,
                        "ghz" => DephasingScale::Ghz,
                        _ => return Err(bad(k)),
                    }
                }
                (_, Some(v)) => match k {
                    "omega0" => p.omega0 = v,
                    "rabi_a1" => p.rabi_a1 = v,
                    "rabi_a2" => p.rabi_a2 = v,
                    "g_a" => p.g_a = v,
                    "g_a_prime" => p.g_a_prime = v,
                    "delta_tunnel" => p.delta_tunnel = v,
                    "gamma_q" => p.gamma_q = v,
                    "e_field" => p.e_field = v,
                    "mutual_inductance" => p.mutual_inductance = v,
                    "inductance" => p.inductance = v,
                    "capacitance" => p.capacitance = v,
                    "persistent_current" => p.persistent_current = v,
                    "quality_factor" => p.quality_factor = v,
                    "gamma_ryd" => p.gamma_ryd = v,
                    "gamma_relax" => p.gamma_relax = v,
                    _ => p.gamma_phi_table = v,
                },
                _ => unreachable!("numeric keys carry a value"),
            }
            Ok(())
        })?;
        p.validate()?;
        Ok(p)
    }
}

/// Shipped defaults, identical to the `Default` impls of the core parameter types.
pub const RYDBERG_DEFAULTS: &str = include_str!("../params/rydberg.params");
pub const FLUX_DEFAULTS: &str = include_str!("../params/flux.params");
pub const HYBRID_DEFAULTS: &str = include_str!("../params/hybrid.params");
