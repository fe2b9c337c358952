//! Line-oriented circuit format.
//!
//! ```text
//! QUBITS 2
//! GATE H targets=[0] controls=[]
//! GATE CPHASE targets=[1] controls=[0] param=0.7853981633974483 system=flux
//! GATE U targets=[0] controls=[] param=0.1,0.2,0.3
//! MEASURE 0
//! COND 0 GATE X targets=[1] controls=[]
//! ```
//!
//! Blank lines and lines starting with `#` are ignored. `QUBITS` must come first.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt::Write;

use super::circuit::{CircuitItem, QubitCircuit};
use super::gate::Gate;
use crate::error::{Error, Result};

fn list(xs: &[usize]) -> String {
    let inner: Vec<String> = xs.iter().map(|x| x.to_string()).collect();
    format!("[{}]", inner.join(","))
}

fn gate_line(g: &Gate) -> String {
    let mut s = format!("GATE {} targets={} controls={}", g.name, list(&g.targets), list(&g.controls));
    if !g.params.is_empty() {
        let ps: Vec<String> = g.params.iter().map(|p| format!("{p:?}")).collect();
        let _ = write!(s, " param={}", ps.join(","));
    }
    if let Some(sys) = &g.system {
        let _ = write!(s, " system={sys}");
    }
    s
}

pub fn to_text(c: &QubitCircuit) -> String {
    let mut out = format!("QUBITS {}\n", c.n_qubits);
    for item in c.items() {
        match item {
            CircuitItem::Gate(g) => out.push_str(&gate_line(g)),
            CircuitItem::Measure(q) => out.push_str(&format!("MEASURE {q}")),
            CircuitItem::Conditional { bit, gate } => out.push_str(&format!("COND {bit} {}", gate_line(gate))),
        }
        out.push('\n');
    }
    out
}

fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn parse_list(s: &str, line: usize) -> Result<Vec<usize>> {
    let inner = s
        .strip_prefix('[')
        .and_then(|x| x.strip_suffix(']'))
        .ok_or_else(|| perr(line, format!("expected [..] list, got `{s}`")))?;
    if inner.trim().is_empty() {
        return Ok(Vec::new());
    }
    inner
        .split(',')
        .map(|t| t.trim().parse::<usize>().map_err(|_| perr(line, format!("bad index `{t}`"))))
        .collect()
}

fn parse_gate(tokens: &[&str], line: usize) -> Result<Gate> {
    let name = tokens.first().ok_or_else(|| perr(line, "missing gate name"))?;
    let mut targets = None;
    let mut controls = Vec::new();
    let mut params = Vec::new();
    let mut system = None;
    for tok in &tokens[1..] {
        let (k, v) = tok.split_once('=').ok_or_else(|| perr(line, format!("expected key=value, got `{tok}`")))?;
        match k {
            "targets" => targets = Some(parse_list(v, line)?),
            "controls" => controls = parse_list(v, line)?,
            "param" => {
                params = v
                    .split(',')
                    .map(|t| t.parse::<f64>().map_err(|_| perr(line, format!("bad parameter `{t}`"))))
                    .collect::<Result<_>>()?
            }
            "system" => system = Some(v.to_string()),
            other => return Err(perr(line, format!("unknown field `{other}`"))),
        }
    }
    let targets = targets.ok_or_else(|| perr(line, "missing targets"))?;
    let g = Gate::new(name, &targets, &controls, &params).map_err(|e| perr(line, format!("{e}")))?;
    Ok(match system {
        Some(s) => g.with_system(&s),
        None => g,
    })
}

pub fn from_text(text: &str) -> Result<QubitCircuit> {
    let mut circuit: Option<QubitCircuit> = None;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let l = raw.trim();
        if l.is_empty() || l.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = l.split_whitespace().collect();
        if tokens[0] == "QUBITS" {
            if circuit.is_some() {
                return Err(perr(line, "duplicate QUBITS header"));
            }
            let n = tokens
                .get(1)
                .and_then(|t| t.parse::<usize>().ok())
                .filter(|&n| n > 0)
                .ok_or_else(|| perr(line, "QUBITS needs a positive count"))?;
            circuit = Some(QubitCircuit::new(n));
            continue;
        }
        let c = circuit.as_mut().ok_or_else(|| perr(line, "QUBITS header must come first"))?;
        let item = match tokens[0] {
            "GATE" => CircuitItem::Gate(parse_gate(&tokens[1..], line)?),
            "MEASURE" => CircuitItem::Measure(
                tokens.get(1).and_then(|t| t.parse().ok()).ok_or_else(|| perr(line, "MEASURE needs a qubit"))?,
            ),
            "COND" => {
                let bit = tokens.get(1).and_then(|t| t.parse().ok()).ok_or_else(|| perr(line, "COND needs a bit"))?;
                if tokens.get(2) != Some(&"GATE") {
                    return Err(perr(line, "COND must be followed by GATE"));
                }
                CircuitItem::Conditional { bit, gate: parse_gate(&tokens[3..], line)? }
            }
            other => return Err(perr(line, format!("unknown statement `{other}`"))),
        };
        c.push(item).map_err(|e| perr(line, format!("{e}")))?;
    }
    circuit.ok_or_else(|| perr(0, "empty circuit text"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuits::gate::{cnot, h, x};

    #[test]
    fn roundtrip() {
        let mut c = QubitCircuit::new(3);
        c.gate(h(0)).gate(cnot(0, 1).with_system("flux"));
        c.gate(Gate::new("U", &[2], &[], &[0.1, -2.5, 1e-17]).unwrap());
        c.measure(1);
        c.push(CircuitItem::Conditional { bit: 0, gate: x(2) }).unwrap();
        let t = to_text(&c);
        assert_eq!(from_text(&t).unwrap(), c);
    }

    #[test]
    fn rejects_forward_condition() {
        assert!(from_text("QUBITS 2\nCOND 0 GATE X targets=[1] controls=[]\n").is_err());
    }
}
