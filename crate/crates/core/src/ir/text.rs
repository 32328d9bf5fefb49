//! Line-based text formats for qubit and qudit circuits.
//!
//! Qubit circuits:
//!
//! ```text
//! qubits 3
//! r 0 0 pi/2      # r <q> <phi> <theta>
//! ph 1 0.25       # ph <q> <theta>
//! x 2
//! cz 0 1
//! icz 1 2
//! cnx 0 1 2       # controls..., target
//! measure 2
//! ```
//!
//! Qudit circuits:
//!
//! ```text
//! qudits 2 d=3 gphase=0
//! map 0 0 whole           # optional qubit placement: map <qubit> <qudit> <slot>
//! rot 0 1 2 0 -3.141592653589793
//! phg 1 2 0.5
//! ms 0 1 01 01 0 1.5707963267948966
//! zz 0 1 01 02 3.141592653589793
//! physms 0 1 0 0.25
//! pmeas 0
//! ndproj 1
//! ```
//!
//! Angles accept plain floats or `pi` forms such as `-pi/2` and `3*pi/4`.
//! Serialized angles use the shortest representation that parses back to the
//! same `f64`.

use std::fmt::Write;

use crate::error::{Error, Result};

use super::embedding::{EmbeddingMap, Slot};
use super::qubit::{QubitCircuit, QubitGate};
use super::qudit::{QuditCircuit, QuditGate};

/// A qudit circuit plus the qubit placement it was compiled for, if recorded.
#[derive(Debug, Clone, PartialEq)]
pub struct QuditProgram {
    pub circuit: QuditCircuit,
    pub embedding: Option<EmbeddingMap>,
}

struct Line<'a> {
    number: usize,
    tokens: Vec<&'a str>,
}

impl<'a> Line<'a> {
    fn err(&self, message: impl Into<String>) -> Error {
        Error::Syntax { line: self.number, message: message.into() }
    }

    fn expect_args(&self, n: usize) -> Result<()> {
        if self.tokens.len() != n + 1 {
            return Err(self.err(format!("`{}` takes {n} arguments, found {}", self.tokens[0], self.tokens.len() - 1)));
        }
        Ok(())
    }

    fn index(&self, pos: usize) -> Result<usize> {
        let tok = self.tokens[pos];
        tok.parse().map_err(|_| self.err(format!("expected an index, found `{tok}`")))
    }

    fn angle(&self, pos: usize) -> Result<f64> {
        let tok = self.tokens[pos];
        parse_angle(tok).ok_or_else(|| self.err(format!("expected an angle, found `{tok}`")))
    }

    fn level_pair(&self, pos: usize) -> Result<(usize, usize)> {
        let tok = self.tokens[pos];
        let pair = if let Some((a, b)) = tok.split_once(',') {
            a.parse().ok().zip(b.parse().ok())
        } else if tok.len() == 2 && tok.bytes().all(|b| b.is_ascii_digit()) {
            let b = tok.as_bytes();
            Some(((b[0] - b'0') as usize, (b[1] - b'0') as usize))
        } else {
            None
        };
        pair.ok_or_else(|| self.err(format!("expected a level pair like `01`, found `{tok}`")))
    }

    /// Attach the line number to errors raised by IR validation.
    fn wrap(&self, e: Error) -> Error {
        match e {
            Error::Syntax { .. } | Error::UnknownMnemonic { .. } => e,
            other => self.err(other.to_string()),
        }
    }
}

fn lines(text: &str) -> impl Iterator<Item = Line<'_>> {
    text.lines().enumerate().filter_map(|(n, raw)| {
        let body = raw.split('#').next().unwrap_or("");
        let tokens: Vec<&str> = body.split_whitespace().collect();
        (!tokens.is_empty()).then_some(Line { number: n + 1, tokens })
    })
}

/// Parses `1.5`, `pi`, `-pi/2`, `3*pi/4`, `0.5*pi`.
pub fn parse_angle(tok: &str) -> Option<f64> {
    if let Ok(v) = tok.parse::<f64>() {
        return Some(v);
    }
    let (sign, body) = match tok.strip_prefix('-') {
        Some(rest) => (-1.0, rest),
        None => (1.0, tok),
    };
    let (num, den) = match body.split_once('/') {
        Some((n, d)) => (n, d.parse::<f64>().ok()?),
        None => (body, 1.0),
    };
    let coef = match num.split_once('*') {
        Some((c, "pi")) => c.parse::<f64>().ok()?,
        None if num == "pi" => 1.0,
        _ => return None,
    };
    Some(sign * coef * std::f64::consts::PI / den)
}

fn fmt_angle(x: f64) -> String {
    format!("{x}")
}

fn fmt_pair(i: usize, j: usize) -> String {
    if i < 10 && j < 10 {
        format!("{i}{j}")
    } else {
        format!("{i},{j}")
    }
}

pub fn parse_qubit_circuit(text: &str) -> Result<QubitCircuit> {
    let mut iter = lines(text);
    let header = iter.next().ok_or(Error::Syntax { line: 1, message: "missing `qubits` header".into() })?;
    if header.tokens[0] != "qubits" {
        return Err(header.err("expected `qubits <n>` header"));
    }
    header.expect_args(1)?;
    let mut circuit = QubitCircuit::new(header.index(1)?);

    for line in iter {
        let gate = match line.tokens[0] {
            "r" => {
                line.expect_args(3)?;
                QubitGate::Rot { target: line.index(1)?, phi: line.angle(2)?, theta: line.angle(3)? }
            }
            "ph" => {
                line.expect_args(2)?;
                QubitGate::Phase { target: line.index(1)?, theta: line.angle(2)? }
            }
            "x" => {
                line.expect_args(1)?;
                QubitGate::X { target: line.index(1)? }
            }
            "cz" => {
                line.expect_args(2)?;
                QubitGate::Cz { a: line.index(1)?, b: line.index(2)? }
            }
            "icz" => {
                line.expect_args(2)?;
                QubitGate::InvCz { a: line.index(1)?, b: line.index(2)? }
            }
            "cnx" => {
                if line.tokens.len() < 3 {
                    return Err(line.err("`cnx` needs at least one control and a target"));
                }
                let mut idx = (1..line.tokens.len()).map(|p| line.index(p)).collect::<Result<Vec<_>>>()?;
                let target = idx.pop().expect("at least two operands");
                QubitGate::Cnx { controls: idx, target }
            }
            "measure" => {
                line.expect_args(1)?;
                QubitGate::Measure { target: line.index(1)? }
            }
            "qubits" => return Err(line.err("duplicate `qubits` header")),
            other => return Err(Error::UnknownMnemonic { line: line.number, mnemonic: other.to_string() }),
        };
        circuit.push(gate).map_err(|e| line.wrap(e))?;
    }
    Ok(circuit)
}

pub fn serialize_qubit_circuit(c: &QubitCircuit) -> String {
    let mut out = format!("qubits {}\n", c.num_qubits());
    for g in c.gates() {
        let _ = match g {
            QubitGate::Rot { target, phi, theta } => {
                writeln!(out, "r {target} {} {}", fmt_angle(*phi), fmt_angle(*theta))
            }
            QubitGate::Phase { target, theta } => writeln!(out, "ph {target} {}", fmt_angle(*theta)),
            QubitGate::X { target } => writeln!(out, "x {target}"),
            QubitGate::Cz { a, b } => writeln!(out, "cz {a} {b}"),
            QubitGate::InvCz { a, b } => writeln!(out, "icz {a} {b}"),
            QubitGate::Cnx { controls, target } => {
                let ops: Vec<String> = controls.iter().chain([target]).map(|q| q.to_string()).collect();
                writeln!(out, "cnx {}", ops.join(" "))
            }
            QubitGate::Measure { target } => writeln!(out, "measure {target}"),
        };
    }
    out
}

fn parse_header(line: &Line<'_>) -> Result<QuditCircuit> {
    if line.tokens[0] != "qudits" || !(3..=4).contains(&line.tokens.len()) {
        return Err(line.err("expected `qudits <m> d=<d> gphase=<radians>` header"));
    }
    let m = line.index(1)?;
    let d = line.tokens[2]
        .strip_prefix("d=")
        .and_then(|v| v.parse::<usize>().ok())
        .ok_or_else(|| line.err("expected `d=<d>`"))?;
    let mut circuit = QuditCircuit::new(m, d).map_err(|e| line.wrap(e))?;
    if let Some(tok) = line.tokens.get(3) {
        let phase =
            tok.strip_prefix("gphase=").and_then(parse_angle).ok_or_else(|| line.err("expected `gphase=<radians>`"))?;
        circuit.set_global_phase(phase);
    }
    Ok(circuit)
}

pub fn parse_qudit_program(text: &str) -> Result<QuditProgram> {
    let mut iter = lines(text);
    let header = iter.next().ok_or(Error::Syntax { line: 1, message: "missing `qudits` header".into() })?;
    let mut circuit = parse_header(&header)?;
    let mut placements: Vec<(usize, usize, Slot, usize)> = Vec::new();

    for line in iter {
        let gate = match line.tokens[0] {
            "rot" => {
                line.expect_args(5)?;
                QuditGate::Rot {
                    qudit: line.index(1)?,
                    i: line.index(2)?,
                    j: line.index(3)?,
                    phi: line.angle(4)?,
                    theta: line.angle(5)?,
                }
            }
            "phg" => {
                line.expect_args(3)?;
                QuditGate::Ph { qudit: line.index(1)?, level: line.index(2)?, theta: line.angle(3)? }
            }
            "ms" => {
                line.expect_args(6)?;
                let (i, j) = line.level_pair(3)?;
                let (k, l) = line.level_pair(4)?;
                QuditGate::Ms {
                    a: line.index(1)?,
                    b: line.index(2)?,
                    i,
                    j,
                    k,
                    l,
                    phi: line.angle(5)?,
                    chi: line.angle(6)?,
                }
            }
            "zz" => {
                line.expect_args(5)?;
                let (i, j) = line.level_pair(3)?;
                let (k, l) = line.level_pair(4)?;
                QuditGate::Zz { a: line.index(1)?, b: line.index(2)?, i, j, k, l, chi: line.angle(5)? }
            }
            "physms" => {
                line.expect_args(4)?;
                QuditGate::PhysMs { a: line.index(1)?, b: line.index(2)?, phi: line.angle(3)?, chi: line.angle(4)? }
            }
            "pmeas" => {
                line.expect_args(1)?;
                QuditGate::ProjMeasure { qudit: line.index(1)? }
            }
            "ndproj" => {
                line.expect_args(1)?;
                QuditGate::NdProject { qudit: line.index(1)? }
            }
            "map" => {
                line.expect_args(3)?;
                let slot = line.tokens[3].parse::<Slot>().map_err(|e| line.wrap(e))?;
                placements.push((line.index(1)?, line.index(2)?, slot, line.number));
                continue;
            }
            "qudits" => return Err(line.err("duplicate `qudits` header")),
            other => return Err(Error::UnknownMnemonic { line: line.number, mnemonic: other.to_string() }),
        };
        circuit.push(gate).map_err(|e| line.wrap(e))?;
    }

    let embedding = if placements.is_empty() {
        None
    } else {
        placements.sort_by_key(|p| p.0);
        let mut positions = Vec::with_capacity(placements.len());
        for (expected, &(qubit, qudit, slot, number)) in placements.iter().enumerate() {
            if qubit != expected {
                return Err(Error::Syntax {
                    line: number,
                    message: format!("map entries must cover qubits 0..n, missing {expected}"),
                });
            }
            if qudit >= circuit.num_qudits() {
                return Err(Error::Syntax {
                    line: number,
                    message: Error::IndexOutOfRange { index: qudit, size: circuit.num_qudits() }.to_string(),
                });
            }
            positions.push((qudit, slot));
        }
        Some(EmbeddingMap::new(circuit.dim(), positions)?)
    };
    Ok(QuditProgram { circuit, embedding })
}

/// Parses a qudit circuit, ignoring any `map` lines.
pub fn parse_qudit_circuit(text: &str) -> Result<QuditCircuit> {
    parse_qudit_program(text).map(|p| p.circuit)
}

pub fn serialize_qudit_circuit(c: &QuditCircuit) -> String {
    serialize_qudit_program(c, None)
}

pub fn serialize_qudit_program(c: &QuditCircuit, embedding: Option<&EmbeddingMap>) -> String {
    let mut out = format!("qudits {} d={} gphase={}\n", c.num_qudits(), c.dim(), fmt_angle(c.global_phase()));
    if let Some(map) = embedding {
        for (q, (qudit, slot)) in map.positions().iter().enumerate() {
            let _ = writeln!(out, "map {q} {qudit} {slot}");
        }
    }
    for g in c.gates() {
        let _ = match *g {
            QuditGate::Rot { qudit, i, j, phi, theta } => {
                writeln!(out, "rot {qudit} {i} {j} {} {}", fmt_angle(phi), fmt_angle(theta))
            }
            QuditGate::Ph { qudit, level, theta } => {
                writeln!(out, "phg {qudit} {level} {}", fmt_angle(theta))
            }
            QuditGate::Ms { a, b, i, j, k, l, phi, chi } => {
                writeln!(out, "ms {a} {b} {} {} {} {}", fmt_pair(i, j), fmt_pair(k, l), fmt_angle(phi), fmt_angle(chi))
            }
            QuditGate::Zz { a, b, i, j, k, l, chi } => {
                writeln!(out, "zz {a} {b} {} {} {}", fmt_pair(i, j), fmt_pair(k, l), fmt_angle(chi))
            }
            QuditGate::PhysMs { a, b, phi, chi } => {
                writeln!(out, "physms {a} {b} {} {}", fmt_angle(phi), fmt_angle(chi))
            }
            QuditGate::ProjMeasure { qudit } => writeln!(out, "pmeas {qudit}"),
            QuditGate::NdProject { qudit } => writeln!(out, "ndproj {qudit}"),
        };
    }
    out
}
