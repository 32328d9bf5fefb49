use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::ir::{normalize_angle, EmbeddingMap, QuditCircuit};

use super::matrix::{Matrix, C64};
use super::state::Evolution;

/// Isometry from `N` qubits into an `m`-qudit register: qubit basis state `x`
/// maps to the single register basis state whose levels encode it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubspaceIsometry {
    num_qudits: usize,
    dim: usize,
    columns: Vec<usize>,
}

impl SubspaceIsometry {
    pub fn source_dim(&self) -> usize {
        self.columns.len()
    }

    pub fn target_dim(&self) -> usize {
        self.dim.pow(self.num_qudits as u32)
    }

    pub fn num_qudits(&self) -> usize {
        self.num_qudits
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Register index that column `x` maps to.
    pub fn column(&self, x: usize) -> usize {
        self.columns[x]
    }

    pub fn columns(&self) -> &[usize] {
        &self.columns
    }

    /// Columns are basis vectors, so orthonormality reduces to distinctness.
    pub fn is_orthonormal(&self) -> bool {
        let mut seen = self.columns.clone();
        seen.sort_unstable();
        seen.windows(2).all(|w| w[0] != w[1]) && seen.last().is_none_or(|&c| c < self.target_dim())
    }
}

pub fn embedding_isometry(map: &EmbeddingMap, num_qudits: usize) -> Result<SubspaceIsometry> {
    map.check_register(num_qudits, map.dim())?;
    let n = map.num_qubits();
    if n >= usize::BITS as usize {
        return Err(Error::BudgetExceeded { dim: usize::MAX, cap: usize::MAX });
    }
    let columns = (0..1usize << n).map(|x| map.register_index(x, num_qudits)).collect();
    Ok(SubspaceIsometry { num_qudits, dim: map.dim(), columns })
}

/// `V^dagger U V` for a compiled circuit, plus per-input leakage.
#[derive(Debug, Clone)]
pub struct ReducedUnitary {
    pub matrix: Matrix,
    /// `leakage[x] = 1 - ||P_sub U V |x>||^2`.
    pub leakage: Vec<f64>,
}

/// Probes the circuit on every embedded basis input.
pub fn reduced_unitary(c: &QuditCircuit, iso: &SubspaceIsometry) -> Result<ReducedUnitary> {
    if iso.dim != c.dim() || iso.num_qudits != c.num_qudits() {
        return Err(Error::DimensionMismatch { expected: iso.target_dim(), found: c.register_dim().unwrap_or(0) });
    }
    let evolution = Evolution::new(c)?;
    let columns = iso
        .columns
        .par_iter()
        .map(|&col| {
            let out = evolution.run_basis(col)?;
            let amps = out.amplitudes();
            Ok(iso.columns.iter().map(|&r| amps[r]).collect::<Vec<C64>>())
        })
        .collect::<Result<Vec<_>>>()?;
    let leakage = columns.iter().map(|col| (1.0 - col.iter().map(|a| a.norm_sqr()).sum::<f64>()).max(0.0)).collect();
    Ok(ReducedUnitary { matrix: Matrix::from_columns(&columns), leakage })
}

/// Deviation of a reduced unitary from a reference, with and without the
/// global phase taken out.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Comparison {
    pub raw_deviation: f64,
    /// Phase of `reduced / reference` at the reference's largest entry.
    pub phase: f64,
    pub phased_deviation: f64,
}

impl Comparison {
    pub fn new(reduced: &Matrix, reference: &Matrix) -> Result<Self> {
        if reduced.dim() != reference.dim() {
            return Err(Error::DimensionMismatch { expected: reference.dim(), found: reduced.dim() });
        }
        let (pivot, _) = reference.as_slice().iter().enumerate().fold((0, -1.0), |best, (i, v)| {
            if v.norm() > best.1 {
                (i, v.norm())
            } else {
                best
            }
        });
        let ratio = reduced.as_slice()[pivot] / reference.as_slice()[pivot];
        let phase = if ratio.norm() > 0.0 { ratio.arg() } else { 0.0 };
        let rot = C64::from_polar(1.0, phase);
        let phased_deviation =
            reduced.as_slice().iter().zip(reference.as_slice()).map(|(a, b)| (a - rot * b).norm()).fold(0.0, f64::max);
        Ok(Comparison {
            raw_deviation: reduced.max_abs_diff(reference),
            phase: normalize_angle(phase),
            phased_deviation,
        })
    }

    pub fn classify(&self, tol: f64) -> Equivalence {
        if self.raw_deviation <= tol {
            Equivalence::EqualExact
        } else if self.phased_deviation <= tol {
            Equivalence::EqualUpToGlobalPhase(self.phase)
        } else {
            Equivalence::Different(self.phased_deviation.min(self.raw_deviation))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Equivalence {
    EqualExact,
    EqualUpToGlobalPhase(f64),
    Different(f64),
}

impl Equivalence {
    pub fn is_equal(&self) -> bool {
        !matches!(self, Equivalence::Different(_))
    }
}

/// Compares `V^dagger U_c V` against `ref_u` entrywise.
pub fn equivalent_on_subspace(
    c: &QuditCircuit,
    ref_u: &Matrix,
    iso: &SubspaceIsometry,
    tol: f64,
) -> Result<Equivalence> {
    if ref_u.dim() != iso.source_dim() {
        return Err(Error::DimensionMismatch { expected: iso.source_dim(), found: ref_u.dim() });
    }
    let reduced = reduced_unitary(c, iso)?;
    Ok(Comparison::new(&reduced.matrix, ref_u)?.classify(tol))
}

/// Population that leaves the embedded subspace for basis input `input`.
pub fn leakage(c: &QuditCircuit, iso: &SubspaceIsometry, input: usize) -> Result<f64> {
    if input >= iso.source_dim() {
        return Err(Error::IndexOutOfRange { index: input, size: iso.source_dim() });
    }
    let out = Evolution::new(c)?.run_basis(iso.column(input))?;
    let kept: f64 = iso.columns.iter().map(|&r| out.amplitudes()[r].norm_sqr()).sum();
    Ok((1.0 - kept).max(0.0))
}
