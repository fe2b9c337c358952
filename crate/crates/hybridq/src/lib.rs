//! Experiment harness for `hybridq-core`: parameter files, configuration, sweeps and
//! result files.

pub mod config;
pub mod error;
pub mod gatefile;
pub mod params;
pub mod sweep;
pub mod validate;

use std::path::Path;

pub use error::{Error, Result};

/// Writes `contents` to `path`, creating parent directories.
pub fn write_output(path: &Path, contents: &str) -> Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
        }
    }
    std::fs::write(path, contents).map_err(|e| Error::io(path, e))
}

/// Ideal gate names accepted on the command line, mapped to core gate names.
pub fn ideal_gate_name(name: &str) -> Option<&'static str> {
    Some(match name.to_ascii_lowercase().as_str() {
        "hadamard" | "h" | "snot" => "H",
        "x" | "not" => "X",
        "y" => "Y",
        "z" => "Z",
        "cnot" => "CNOT",
        "cz" => "CZ",
        "swap" => "SWAP",
        _ => return None,
    })
}
