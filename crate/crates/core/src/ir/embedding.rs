use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Position of a logical qubit inside its qudit.
///
/// `First` is the high bit and `Second` the low bit of a ququart level:
/// qubits `(q, q')` sit at level `2q + q'`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Slot {
    Whole,
    First,
    Second,
}

impl Slot {
    /// Level offset contributed by a qubit in state `|1>`.
    pub fn weight(self) -> usize {
        match self {
            Slot::Whole | Slot::Second => 1,
            Slot::First => 2,
        }
    }
}

impl fmt::Display for Slot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Slot::Whole => "whole",
            Slot::First => "first",
            Slot::Second => "second",
        })
    }
}

impl FromStr for Slot {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "whole" => Ok(Slot::Whole),
            "first" => Ok(Slot::First),
            "second" => Ok(Slot::Second),
            _ => Err(Error::InvalidEmbedding(format!("unknown slot `{s}`"))),
        }
    }
}

/// Assignment of logical qubits to `(qudit, slot)` positions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmbeddingMap {
    dim: usize,
    positions: Vec<(usize, Slot)>,
}

impl EmbeddingMap {
    /// `positions[q]` is where qubit `q` lives.
    pub fn new(dim: usize, positions: Vec<(usize, Slot)>) -> Result<Self> {
        let bad = |msg: String| Err(Error::InvalidEmbedding(msg));
        if dim < 2 {
            return bad(format!("dimension {dim} < 2"));
        }
        for (q, &(qudit, slot)) in positions.iter().enumerate() {
            if slot != Slot::Whole && dim < 4 {
                return bad(format!("qubit {q}: slot {slot} requires d >= 4"));
            }
            for (p, &(other, other_slot)) in positions[..q].iter().enumerate() {
                if other != qudit {
                    continue;
                }
                if slot == Slot::Whole || other_slot == Slot::Whole {
                    return bad(format!("qubits {p} and {q} share qudit {qudit} with a whole slot"));
                }
                if slot == other_slot {
                    return bad(format!("qubits {p} and {q} share slot {slot} of qudit {qudit}"));
                }
            }
        }
        Ok(EmbeddingMap { dim, positions })
    }

    /// Qubit `q` alone in qudit `q`.
    pub fn one_per_qudit(dim: usize, num_qubits: usize) -> Result<Self> {
        EmbeddingMap::new(dim, (0..num_qubits).map(|q| (q, Slot::Whole)).collect())
    }

    /// Qubits `(2i, 2i+1)` in ququart `i`.
    pub fn sequential_pairs(num_qubits: usize) -> Self {
        let positions = (0..num_qubits).map(|q| (q / 2, if q % 2 == 0 { Slot::First } else { Slot::Second })).collect();
        EmbeddingMap { dim: 4, positions }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn num_qubits(&self) -> usize {
        self.positions.len()
    }

    pub fn position(&self, qubit: usize) -> (usize, Slot) {
        self.positions[qubit]
    }

    pub fn positions(&self) -> &[(usize, Slot)] {
        &self.positions
    }

    /// Smallest register that holds every embedded qubit.
    pub fn min_qudits(&self) -> usize {
        self.positions.iter().map(|&(q, _)| q + 1).max().unwrap_or(0)
    }

    pub fn check_register(&self, num_qudits: usize, dim: usize) -> Result<()> {
        if dim != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: dim });
        }
        if self.min_qudits() > num_qudits {
            return Err(Error::InvalidEmbedding(format!(
                "map uses {} qudits but the register has {num_qudits}",
                self.min_qudits()
            )));
        }
        Ok(())
    }

    /// Qudit levels encoding qubit basis state `bits` (qubit 0 is the most
    /// significant bit). Unoccupied qudits and slots stay at level 0.
    pub fn levels(&self, bits: usize, num_qudits: usize) -> Vec<usize> {
        let n = self.positions.len();
        let mut levels = vec![0; num_qudits];
        for (q, &(qudit, slot)) in self.positions.iter().enumerate() {
            if (bits >> (n - 1 - q)) & 1 == 1 {
                levels[qudit] += slot.weight();
            }
        }
        levels
    }

    /// Register basis index of the embedded qubit basis state `bits`.
    pub fn register_index(&self, bits: usize, num_qudits: usize) -> usize {
        self.levels(bits, num_qudits).iter().fold(0, |acc, &lv| acc * self.dim + lv)
    }

    /// Inverse of [`register_index`](Self::register_index) on its image.
    pub fn decode(&self, index: usize, num_qudits: usize) -> Option<usize> {
        let mut levels = vec![0; num_qudits];
        let mut rest = index;
        for q in (0..num_qudits).rev() {
            levels[q] = rest % self.dim;
            rest /= self.dim;
        }
        let n = self.positions.len();
        let mut bits = 0;
        for (q, &(qudit, slot)) in self.positions.iter().enumerate() {
            let w = slot.weight();
            if levels[qudit] & w != 0 {
                bits |= 1 << (n - 1 - q);
                levels[qudit] -= w;
            }
        }
        levels.iter().all(|&lv| lv == 0).then_some(bits)
    }
}
