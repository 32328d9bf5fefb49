use crate::error::{Error, Result};

/// One instruction of the source circuit.
#[derive(Debug, Clone, PartialEq)]
pub enum QubitGate {
    /// `exp(-i theta/2 (cos(phi) X + sin(phi) Y))`.
    Rot {
        target: usize,
        phi: f64,
        theta: f64,
    },
    /// `diag(1, e^{i theta})`.
    Phase {
        target: usize,
        theta: f64,
    },
    X {
        target: usize,
    },
    Cz {
        a: usize,
        b: usize,
    },
    /// Phase of -1 iff both qubits are `|0>`.
    InvCz {
        a: usize,
        b: usize,
    },
    /// Flips `target` iff every control is `|1>`.
    Cnx {
        controls: Vec<usize>,
        target: usize,
    },
    Measure {
        target: usize,
    },
}

impl QubitGate {
    pub fn qubits(&self) -> Vec<usize> {
        match self {
            QubitGate::Rot { target, .. }
            | QubitGate::Phase { target, .. }
            | QubitGate::X { target }
            | QubitGate::Measure { target } => vec![*target],
            QubitGate::Cz { a, b } | QubitGate::InvCz { a, b } => vec![*a, *b],
            QubitGate::Cnx { controls, target } => {
                let mut q = controls.clone();
                q.push(*target);
                q
            }
        }
    }

    pub fn mnemonic(&self) -> &'static str {
        match self {
            QubitGate::Rot { .. } => "r",
            QubitGate::Phase { .. } => "ph",
            QubitGate::X { .. } => "x",
            QubitGate::Cz { .. } => "cz",
            QubitGate::InvCz { .. } => "icz",
            QubitGate::Cnx { .. } => "cnx",
            QubitGate::Measure { .. } => "measure",
        }
    }

    fn validate(&self, num_qubits: usize) -> Result<()> {
        if let QubitGate::Cnx { controls, .. } = self {
            if controls.is_empty() {
                return Err(Error::InvalidArgument("cnx needs at least one control".into()));
            }
        }
        let qubits = self.qubits();
        for (n, &q) in qubits.iter().enumerate() {
            if q >= num_qubits {
                return Err(Error::IndexOutOfRange { index: q, size: num_qubits });
            }
            if qubits[..n].contains(&q) {
                return Err(Error::DuplicateIndex(q));
            }
        }
        Ok(())
    }
}

/// Qubit circuit; gate 0 is applied first.
#[derive(Debug, Clone, PartialEq)]
pub struct QubitCircuit {
    num_qubits: usize,
    gates: Vec<QubitGate>,
}

impl QubitCircuit {
    pub fn new(num_qubits: usize) -> Self {
        QubitCircuit { num_qubits, gates: Vec::new() }
    }

    pub fn from_gates(num_qubits: usize, gates: impl IntoIterator<Item = QubitGate>) -> Result<Self> {
        let mut c = QubitCircuit::new(num_qubits);
        for g in gates {
            c.push(g)?;
        }
        Ok(c)
    }

    pub fn push(&mut self, gate: QubitGate) -> Result<()> {
        gate.validate(self.num_qubits)?;
        self.gates.push(gate);
        Ok(())
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn gates(&self) -> &[QubitGate] {
        &self.gates
    }

    pub fn has_measurement(&self) -> bool {
        self.gates.iter().any(|g| matches!(g, QubitGate::Measure { .. }))
    }
}
