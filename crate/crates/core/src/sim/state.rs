use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::ir::{QuditCircuit, QuditGate};

use super::gates::gate_matrix;
use super::matrix::{Matrix, C64};

/// Default cap on `d^m` when forming a full circuit unitary.
pub const DEFAULT_MAX_UNITARY_DIM: usize = 4096;

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    num_qudits: usize,
    dim: usize,
    amps: Vec<C64>,
}

fn register_size(num_qudits: usize, dim: usize) -> Result<usize> {
    (dim as u64)
        .checked_pow(num_qudits as u32)
        .and_then(|v| usize::try_from(v).ok())
        .ok_or(Error::BudgetExceeded { dim: usize::MAX, cap: usize::MAX })
}

impl StateVector {
    pub fn basis(num_qudits: usize, dim: usize, index: usize) -> Result<Self> {
        let size = register_size(num_qudits, dim)?;
        if index >= size {
            return Err(Error::IndexOutOfRange { index, size });
        }
        let mut amps = vec![C64::new(0.0, 0.0); size];
        amps[index] = C64::new(1.0, 0.0);
        Ok(StateVector { num_qudits, dim, amps })
    }

    /// Basis state from per-qudit levels.
    pub fn from_levels(dim: usize, levels: &[usize]) -> Result<Self> {
        if let Some(&bad) = levels.iter().find(|&&lv| lv >= dim) {
            return Err(Error::InvalidLevels(format!("level {bad} for d={dim}")));
        }
        let index = levels.iter().fold(0, |acc, &lv| acc * dim + lv);
        StateVector::basis(levels.len(), dim, index)
    }

    pub fn from_amplitudes(num_qudits: usize, dim: usize, amps: Vec<C64>) -> Result<Self> {
        let size = register_size(num_qudits, dim)?;
        if amps.len() != size {
            return Err(Error::DimensionMismatch { expected: size, found: amps.len() });
        }
        Ok(StateVector { num_qudits, dim, amps })
    }

    pub fn num_qudits(&self) -> usize {
        self.num_qudits
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn amplitudes_mut(&mut self) -> &mut [C64] {
        &mut self.amps
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Digits of a register index, qudit 0 first.
    pub fn levels_of(&self, index: usize) -> Vec<usize> {
        let mut levels = vec![0; self.num_qudits];
        let mut rest = index;
        for q in (0..self.num_qudits).rev() {
            levels[q] = rest % self.dim;
            rest /= self.dim;
        }
        levels
    }

    /// Applies a unitary gate in place.
    pub fn apply_gate(&mut self, gate: &QuditGate) -> Result<()> {
        let qudits = gate.qudits();
        if let Some(&q) = qudits.iter().find(|&&q| q >= self.num_qudits) {
            return Err(Error::IndexOutOfRange { index: q, size: self.num_qudits });
        }
        let m = gate_matrix(gate, self.dim)?;
        apply_local(&mut self.amps, self.num_qudits, self.dim, &qudits, &m);
        Ok(())
    }
}

/// A gate matrix bound to register positions, keeping only the rows that
/// differ from the identity.
#[derive(Debug, Clone)]
pub struct LocalOp {
    offsets: Vec<usize>,
    /// Strides of the untouched qudits, most significant first.
    spectator_strides: Vec<usize>,
    rows: Vec<(usize, Vec<(usize, C64)>)>,
}

impl LocalOp {
    /// `mat` acts on `qudits`, the first listed most significant.
    pub fn new(num_qudits: usize, dim: usize, qudits: &[usize], mat: &Matrix) -> Self {
        let stride = |q: usize| dim.pow((num_qudits - 1 - q) as u32);
        let local = mat.dim();
        debug_assert_eq!(local, dim.pow(qudits.len() as u32));
        let offsets = (0..local)
            .map(|li| {
                let mut rest = li;
                let mut off = 0;
                for &q in qudits.iter().rev() {
                    off += (rest % dim) * stride(q);
                    rest /= dim;
                }
                off
            })
            .collect();
        let spectator_strides = (0..num_qudits).filter(|q| !qudits.contains(q)).map(stride).collect();
        let zero = C64::new(0.0, 0.0);
        let one = C64::new(1.0, 0.0);
        let rows = (0..local)
            .filter_map(|r| {
                let entries: Vec<(usize, C64)> = (0..local).map(|c| (c, mat[(r, c)])).filter(|e| e.1 != zero).collect();
                let trivial = entries.len() == 1 && entries[0] == (r, one);
                (!trivial).then_some((r, entries))
            })
            .collect();
        LocalOp { offsets, spectator_strides, rows }
    }

    pub fn apply(&self, amps: &mut [C64], dim: usize) {
        if self.rows.is_empty() {
            return;
        }
        let mut buf = vec![C64::new(0.0, 0.0); self.offsets.len()];
        let mut out = vec![C64::new(0.0, 0.0); self.rows.len()];
        let mut digits = vec![0usize; self.spectator_strides.len()];
        let mut base = 0usize;
        loop {
            for (b, &off) in buf.iter_mut().zip(&self.offsets) {
                *b = amps[base + off];
            }
            for (o, (_, entries)) in out.iter_mut().zip(&self.rows) {
                *o = entries.iter().map(|&(c, v)| v * buf[c]).sum();
            }
            for (&o, (r, _)) in out.iter().zip(&self.rows) {
                amps[base + self.offsets[*r]] = o;
            }
            // Odometer over the spectator digits, least significant last.
            let mut k = digits.len();
            loop {
                if k == 0 {
                    return;
                }
                k -= 1;
                digits[k] += 1;
                base += self.spectator_strides[k];
                if digits[k] < dim {
                    break;
                }
                base -= dim * self.spectator_strides[k];
                digits[k] = 0;
            }
        }
    }
}

/// Applies `mat` (acting on `qudits`, first listed most significant) to a
/// register amplitude vector.
pub fn apply_local(amps: &mut [C64], num_qudits: usize, dim: usize, qudits: &[usize], mat: &Matrix) {
    LocalOp::new(num_qudits, dim, qudits, mat).apply(amps, dim);
}

/// Gate matrices of a measurement-free circuit, built once for repeated runs.
#[derive(Debug, Clone)]
pub struct Evolution {
    num_qudits: usize,
    dim: usize,
    ops: Vec<LocalOp>,
    phase: C64,
}

impl Evolution {
    pub fn new(c: &QuditCircuit) -> Result<Self> {
        if c.has_measurement() {
            return Err(Error::Measurement);
        }
        let ops = c
            .gates()
            .iter()
            .map(|g| Ok(LocalOp::new(c.num_qudits(), c.dim(), &g.qudits(), &gate_matrix(g, c.dim())?)))
            .collect::<Result<_>>()?;
        Ok(Evolution { num_qudits: c.num_qudits(), dim: c.dim(), ops, phase: C64::from_polar(1.0, c.global_phase()) })
    }

    pub fn apply(&self, amps: &mut [C64]) {
        debug_assert_eq!(amps.len(), self.dim.pow(self.num_qudits as u32));
        for op in &self.ops {
            op.apply(amps, self.dim);
        }
        amps.iter_mut().for_each(|a| *a *= self.phase);
    }

    /// Output state for register basis input `index`.
    pub fn run_basis(&self, index: usize) -> Result<StateVector> {
        let mut s = StateVector::basis(self.num_qudits, self.dim, index)?;
        self.apply(&mut s.amps);
        Ok(s)
    }
}

fn check_state(c: &QuditCircuit, s: &StateVector) -> Result<()> {
    if s.dim != c.dim() {
        return Err(Error::DimensionMismatch { expected: c.dim(), found: s.dim });
    }
    if s.num_qudits != c.num_qudits() {
        return Err(Error::DimensionMismatch { expected: c.num_qudits(), found: s.num_qudits });
    }
    Ok(())
}

/// Evolves `s` gate by gate, then applies the circuit's global phase.
pub fn apply_circuit(c: &QuditCircuit, s: &StateVector) -> Result<StateVector> {
    check_state(c, s)?;
    let mut out = s.clone();
    Evolution::new(c)?.apply(&mut out.amps);
    Ok(out)
}

/// Full register unitary, later gates on the left. Fails if `d^m > max_dim`.
pub fn circuit_unitary(c: &QuditCircuit, max_dim: usize) -> Result<Matrix> {
    let size = register_size(c.num_qudits(), c.dim())?;
    if size > max_dim {
        return Err(Error::BudgetExceeded { dim: size, cap: max_dim });
    }
    let evolution = Evolution::new(c)?;
    let columns =
        (0..size).into_par_iter().map(|col| Ok(evolution.run_basis(col)?.amps)).collect::<Result<Vec<_>>>()?;
    Ok(Matrix::from_columns(&columns))
}
