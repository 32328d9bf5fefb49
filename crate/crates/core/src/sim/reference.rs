//! Qubit-level reference simulator for source circuits.

use crate::error::{Error, Result};
use crate::ir::{QubitCircuit, QubitGate};

use super::gates::{phase_matrix, rot_matrix};
use super::matrix::{Matrix, C64};
use super::state::LocalOp;

/// Matrix of a one- or two-qubit gate; `None` for `Cnx` and `Measure`.
pub fn qubit_gate_matrix(g: &QubitGate) -> Option<Matrix> {
    let one = C64::new(1.0, 0.0);
    match *g {
        QubitGate::Rot { phi, theta, .. } => rot_matrix(2, 0, 1, phi, theta).ok(),
        QubitGate::Phase { theta, .. } => phase_matrix(2, 1, theta).ok(),
        QubitGate::X { .. } => Some(Matrix::from_fn(2, |r, c| if r != c { one } else { 0.0 * one })),
        QubitGate::Cz { .. } => Some(Matrix::diagonal(&[one, one, one, -one])),
        QubitGate::InvCz { .. } => Some(Matrix::diagonal(&[-one, one, one, one])),
        QubitGate::Cnx { .. } | QubitGate::Measure { .. } => None,
    }
}

enum QubitOp {
    /// Swap target pairs where every control bit is set.
    Flip {
        mask: usize,
        target: usize,
    },
    Local(LocalOp),
}

fn qubit_ops(c: &QubitCircuit) -> Result<Vec<QubitOp>> {
    let n = c.num_qubits();
    c.gates()
        .iter()
        .map(|g| match g {
            QubitGate::Measure { .. } => Err(Error::Measurement),
            QubitGate::Cnx { controls, target } => Ok(QubitOp::Flip {
                mask: controls.iter().fold(0usize, |m, &q| m | 1 << (n - 1 - q)),
                target: 1usize << (n - 1 - target),
            }),
            other => {
                let m = qubit_gate_matrix(other).expect("unitary qubit gate");
                Ok(QubitOp::Local(LocalOp::new(n, 2, &other.qubits(), &m)))
            }
        })
        .collect()
}

fn run_ops(ops: &[QubitOp], amps: &mut [C64]) {
    for op in ops {
        match op {
            QubitOp::Flip { mask, target } => {
                for idx in 0..amps.len() {
                    if idx & mask == *mask && idx & target == 0 {
                        amps.swap(idx, idx | target);
                    }
                }
            }
            QubitOp::Local(op) => op.apply(amps, 2),
        }
    }
}

/// Applies a measurement-free qubit circuit to `amps` (qubit 0 most significant).
pub fn apply_qubit_circuit(c: &QubitCircuit, amps: &mut [C64]) -> Result<()> {
    let n = c.num_qubits();
    if amps.len() != 1usize << n {
        return Err(Error::DimensionMismatch { expected: 1 << n, found: amps.len() });
    }
    run_ops(&qubit_ops(c)?, amps);
    Ok(())
}

pub fn qubit_circuit_unitary(c: &QubitCircuit, max_dim: usize) -> Result<Matrix> {
    let size = 1usize << c.num_qubits();
    if size > max_dim {
        return Err(Error::BudgetExceeded { dim: size, cap: max_dim });
    }
    let ops = qubit_ops(c)?;
    let columns: Vec<Vec<C64>> = (0..size)
        .map(|col| {
            let mut v = vec![C64::new(0.0, 0.0); size];
            v[col] = C64::new(1.0, 0.0);
            run_ops(&ops, &mut v);
            v
        })
        .collect();
    Ok(Matrix::from_columns(&columns))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn toffoli_permutation() {
        let c = QubitCircuit::from_gates(3, [QubitGate::Cnx { controls: vec![0, 1], target: 2 }]).unwrap();
        let u = qubit_circuit_unitary(&c, 64).unwrap();
        for col in 0..8 {
            let row = if col >= 6 { col ^ 1 } else { col };
            assert_eq!(u[(row, col)], C64::new(1.0, 0.0));
        }
    }

    #[test]
    fn cnx_with_unordered_operands() {
        // control 2, target 0: |001> -> |101>
        let c = QubitCircuit::from_gates(3, [QubitGate::Cnx { controls: vec![2], target: 0 }]).unwrap();
        let u = qubit_circuit_unitary(&c, 64).unwrap();
        assert_eq!(u[(0b101, 0b001)], C64::new(1.0, 0.0));
        assert_eq!(u[(0b010, 0b010)], C64::new(1.0, 0.0));
    }

    #[test]
    fn measurement_rejected() {
        let c = QubitCircuit::from_gates(1, [QubitGate::Measure { target: 0 }]).unwrap();
        assert_eq!(qubit_circuit_unitary(&c, 64), Err(Error::Measurement));
    }
}
