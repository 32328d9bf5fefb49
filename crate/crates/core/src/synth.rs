//! Qubit-level synthesis of multi-controlled X from `{Rot, Phase, CZ}`.
//!
//! `C^{N-1}Z` is the diagonal phase `exp(i pi x_1 x_2 ... x_N)`. Expanding the
//! product into parities,
//!
//! ```text
//! x_1 ... x_N = 2^{1-N} * sum over non-empty S of (-1)^{|S|+1} parity_S(x),
//! ```
//!
//! each parity term is a `Phase` gate applied while its parity sits on the
//! highest qubit of `S`. Parities are accumulated with CNOTs while walking the
//! lower qubits in Gray-code order, so consecutive terms differ by one CNOT.
//! Conjugating the target by `Ry(-+pi/2)` turns `C^{N-1}Z` into `C^{N-1}X`
//! without any leftover phase.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};
use crate::ir::{QubitCircuit, QubitGate};

fn ry(target: usize, theta: f64) -> QubitGate {
    QubitGate::Rot { target, phi: FRAC_PI_2, theta }
}

/// `CX = (1 (x) Ry(pi/2)) CZ (1 (x) Ry(-pi/2))`.
fn cx(control: usize, target: usize) -> [QubitGate; 3] {
    [ry(target, -FRAC_PI_2), QubitGate::Cz { a: control, b: target }, ry(target, FRAC_PI_2)]
}

/// Multi-controlled Z over `operands` (symmetric in all of them).
pub fn multi_controlled_z(operands: &[usize]) -> Vec<QubitGate> {
    let n = operands.len();
    match n {
        0 => return Vec::new(),
        1 => return vec![QubitGate::Phase { target: operands[0], theta: PI }],
        2 => return vec![QubitGate::Cz { a: operands[0], b: operands[1] }],
        _ => {}
    }
    let unit = PI / f64::from(1u32 << (n - 1));
    let angle = |size: u32| if size % 2 == 1 { unit } else { -unit };
    let mut gates = Vec::new();
    for h in 0..n {
        let high = operands[h];
        gates.push(QubitGate::Phase { target: high, theta: angle(1) });
        for k in 1usize..1 << h {
            let flipped = k.trailing_zeros() as usize;
            gates.extend(cx(operands[flipped], high));
            let gray = k ^ (k >> 1);
            gates.push(QubitGate::Phase { target: high, theta: angle(gray.count_ones() + 1) });
        }
        if h > 0 {
            // the Gray walk ends on the single top bit; undo it
            gates.extend(cx(operands[h - 1], high));
        }
    }
    gates
}

/// `C^{N-1}X` as an ancilla-free qubit circuit over `{Rot, Phase, CZ}`, exact
/// including global phase.
pub fn decompose_cnx_to_qubit_gates(num_qubits: usize, controls: &[usize], target: usize) -> Result<QubitCircuit> {
    if controls.is_empty() {
        return Err(Error::InvalidArgument("C^{N-1}X needs N >= 2".into()));
    }
    let operands: Vec<usize> = controls.iter().copied().chain([target]).collect();
    let mut gates = vec![ry(target, -FRAC_PI_2)];
    gates.extend(multi_controlled_z(&operands));
    gates.push(ry(target, FRAC_PI_2));
    QubitCircuit::from_gates(num_qubits, gates)
}

/// Copy of `c` with every `Cnx` replaced by its decomposition.
pub fn expand_cnx(c: &QubitCircuit) -> Result<QubitCircuit> {
    let mut out = QubitCircuit::new(c.num_qubits());
    for g in c.gates() {
        match g {
            QubitGate::Cnx { controls, target } => {
                for sub in decompose_cnx_to_qubit_gates(c.num_qubits(), controls, *target)?.gates() {
                    out.push(sub.clone())?;
                }
            }
            other => out.push(other.clone())?,
        }
    }
    Ok(out)
}
