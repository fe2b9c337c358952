//! Piecewise-constant control pulses and their initial shapes.

use alloc::string::String;
use alloc::vec::Vec;
use core::str::FromStr;

use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// N × M amplitudes stored slice-major, `amplitudes[l * M + k]` is control k in slice l.
#[derive(Clone, Debug, PartialEq)]
pub struct ControlPulse {
    pub n_slices: usize,
    pub n_controls: usize,
    pub dt: f64,
    pub amplitudes: Vec<f64>,
}

impl ControlPulse {
    pub fn new(n_slices: usize, n_controls: usize, dt: f64, amplitudes: Vec<f64>) -> Result<Self> {
        if amplitudes.len() != n_slices * n_controls {
            return Err(Error::Dimension("pulse amplitude count"));
        }
        if !(dt > 0.0) || amplitudes.iter().any(|a| !a.is_finite()) {
            return Err(Error::NonFinite("pulse"));
        }
        Ok(Self { n_slices, n_controls, dt, amplitudes })
    }

    pub fn zeros(n_slices: usize, n_controls: usize, dt: f64) -> Self {
        Self { n_slices, n_controls, dt, amplitudes: alloc::vec![0.0; n_slices * n_controls] }
    }

    pub fn get(&self, slice: usize, control: usize) -> f64 {
        self.amplitudes[slice * self.n_controls + control]
    }

    pub fn slice(&self, l: usize) -> &[f64] {
        &self.amplitudes[l * self.n_controls..(l + 1) * self.n_controls]
    }

    pub fn evolution_time(&self) -> f64 {
        self.dt * self.n_slices as f64
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InitPulse {
    Rnd,
    Zero,
    Lin,
    Sine,
    Square,
    Saw,
    Triangle,
}

impl FromStr for InitPulse {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.to_ascii_uppercase().as_str() {
            "RND" => Self::Rnd,
            "ZERO" => Self::Zero,
            "LIN" => Self::Lin,
            "SINE" => Self::Sine,
            "SQUARE" => Self::Square,
            "SAW" => Self::Saw,
            "TRIANGLE" => Self::Triangle,
            _ => return Err(Error::InvalidArgument(String::from("unknown initial pulse type ") + s)),
        })
    }
}

impl InitPulse {
    pub fn name(self) -> &'static str {
        match self {
            Self::Rnd => "RND",
            Self::Zero => "ZERO",
            Self::Lin => "LIN",
            Self::Sine => "SINE",
            Self::Square => "SQUARE",
            Self::Saw => "SAW",
            Self::Triangle => "TRIANGLE",
        }
    }
}

/// Initial amplitudes in [−scale, scale]. Periodic shapes span one period over the pulse.
pub fn initial_pulse(kind: InitPulse, n_slices: usize, n_controls: usize, dt: f64, scale: f64, seed: u64) -> ControlPulse {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let tau = core::f64::consts::TAU;
    let mut amps = Vec::with_capacity(n_slices * n_controls);
    for l in 0..n_slices {
        let x = (l as f64 + 0.5) / n_slices as f64;
        for _ in 0..n_controls {
            let v = match kind {
                InitPulse::Rnd => rng.gen_range(-1.0..=1.0),
                InitPulse::Zero => 0.0,
                InitPulse::Lin => 2.0 * x - 1.0,
                InitPulse::Sine => (tau * x).sin(),
                InitPulse::Square => {
                    if x < 0.5 {
                        1.0
                    } else {
                        -1.0
                    }
                }
                InitPulse::Saw => 2.0 * (2.0 * x).fract() - 1.0,
                InitPulse::Triangle => 1.0 - 4.0 * (x - 0.5).abs(),
            };
            amps.push(scale * v);
        }
    }
    ControlPulse { n_slices, n_controls, dt, amplitudes: amps }
}
