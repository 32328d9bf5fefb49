//! End-to-end checks of compiled circuits and gate-count reporting.

use std::fmt;
use std::ops::RangeInclusive;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ir::{CompilationReport, EmbeddingMap, QubitCircuit, QubitGate, QuditCircuit};
use crate::qutrit::compile_circuit_qutrit;
use crate::sim::{
    embedding_isometry, qubit_circuit_unitary, reduced_unitary, Comparison, Equivalence, DEFAULT_MAX_UNITARY_DIM,
    EQUIV_TOL,
};
use crate::synth::decompose_cnx_to_qubit_gates;

/// Largest register a verification will simulate.
pub const DEFAULT_MAX_STATE_DIM: usize = 1 << 22;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Equal,
    EqualUpToGlobalPhase,
    Different,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Equal => "equal",
            Status::EqualUpToGlobalPhase => "equal_up_to_global_phase",
            Status::Different => "different",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub status: Status,
    pub global_phase: f64,
    pub max_deviation: f64,
    pub leakage_max: f64,
    pub counts: CompilationReport,
}

impl Verdict {
    pub fn is_equal(&self) -> bool {
        self.status != Status::Different
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyOptions {
    pub tol: f64,
    /// Cap on the `2^N x 2^N` reference unitary.
    pub max_unitary_dim: usize,
    /// Cap on the `d^m` register probed by statevector simulation.
    pub max_state_dim: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { tol: EQUIV_TOL, max_unitary_dim: DEFAULT_MAX_UNITARY_DIM, max_state_dim: DEFAULT_MAX_STATE_DIM }
    }
}

/// Compares `out` restricted to the embedded qubit subspace with the unitary
/// of `src`, probing every embedded basis input.
pub fn verify_compilation(
    src: &QubitCircuit,
    out: &QuditCircuit,
    map: &EmbeddingMap,
    opts: &VerifyOptions,
) -> Result<Verdict> {
    if opts.tol.is_nan() || opts.tol <= 0.0 {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {}", opts.tol)));
    }
    if src.has_measurement() || out.has_measurement() {
        return Err(Error::Measurement);
    }
    if map.num_qubits() != src.num_qubits() {
        return Err(Error::DimensionMismatch { expected: src.num_qubits(), found: map.num_qubits() });
    }
    if map.dim() != out.dim() {
        return Err(Error::DimensionMismatch { expected: out.dim(), found: map.dim() });
    }
    let state_dim = out.register_dim().unwrap_or(usize::MAX);
    if state_dim > opts.max_state_dim {
        return Err(Error::BudgetExceeded { dim: state_dim, cap: opts.max_state_dim });
    }
    let reference = qubit_circuit_unitary(src, opts.max_unitary_dim)?;
    let iso = embedding_isometry(map, out.num_qudits())?;
    let reduced = reduced_unitary(out, &iso)?;
    let cmp = Comparison::new(&reduced.matrix, &reference)?;
    let (status, global_phase, max_deviation) = match cmp.classify(opts.tol) {
        Equivalence::EqualExact => (Status::Equal, 0.0, cmp.raw_deviation),
        Equivalence::EqualUpToGlobalPhase(phase) => (Status::EqualUpToGlobalPhase, phase, cmp.phased_deviation),
        Equivalence::Different(_) => (Status::Different, cmp.phase, cmp.phased_deviation),
    };
    Ok(Verdict {
        status,
        global_phase,
        max_deviation,
        leakage_max: reduced.leakage.iter().copied().fold(0.0, f64::max).min(1.0),
        counts: out.count_gates(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ToffoliRow {
    /// Qubits touched by `C^{N-1}X`.
    pub n: usize,
    /// Two-qutrit gates in the compiled ladder.
    pub qutrit_two_qudit: usize,
    /// `2N - 3`.
    pub ladder_formula: usize,
    /// Ancilla-assisted qubit baseline `12N - 23`; absent below `N = 3`.
    pub qubit_baseline: Option<usize>,
    /// CZ count of this crate's ancilla-free Gray-code synthesis.
    pub gray_code_cz: usize,
    pub note: String,
}

pub const QUADRATIC_NOTE: &str = "ancilla-free qubit decompositions need O(N^2) two-qubit gates";

/// Measured qutrit ladder counts against the qubit baselines.
pub fn report_toffoli_scaling(range: RangeInclusive<usize>) -> Result<Vec<ToffoliRow>> {
    range
        .map(|n| {
            if n < 2 {
                return Err(Error::InvalidArgument(format!("N must be at least 2, got {n}")));
            }
            let controls: Vec<usize> = (0..n - 1).collect();
            let src = QubitCircuit::from_gates(n, [QubitGate::Cnx { controls: controls.clone(), target: n - 1 }])?;
            let (out, _) = compile_circuit_qutrit(&src)?;
            let gray = decompose_cnx_to_qubit_gates(n, &controls, n - 1)?;
            let gray_code_cz = gray.gates().iter().filter(|g| matches!(g, QubitGate::Cz { .. })).count();
            let qubit_baseline = (n >= 3).then(|| 12 * n - 23);
            let note = if n < 3 {
                format!("12N-23 not meaningful below N=3; {QUADRATIC_NOTE}")
            } else {
                QUADRATIC_NOTE.to_string()
            };
            Ok(ToffoliRow {
                n,
                qutrit_two_qudit: out.count_gates().two_qudit,
                ladder_formula: 2 * n - 3,
                qubit_baseline,
                gray_code_cz,
                note,
            })
        })
        .collect()
}

/// Fixed-width text rendering of [`report_toffoli_scaling`] rows.
pub fn format_toffoli_table(rows: &[ToffoliRow]) -> String {
    let mut s = format!("{:>3}  {:>12}  {:>6}  {:>12}  {:>9}\n", "N", "qutrit_2q", "2N-3", "qubit_12N-23", "gray_cz");
    for r in rows {
        let baseline = r.qubit_baseline.map_or_else(|| "n/a".to_string(), |b| b.to_string());
        s.push_str(&format!(
            "{:>3}  {:>12}  {:>6}  {:>12}  {:>9}\n",
            r.n, r.qutrit_two_qudit, r.ladder_formula, baseline, r.gray_code_cz
        ));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ir::QuditGate;
    use crate::ququart::{compile_circuit_ququart, PairingStrategy};

    fn toffoli(n: usize) -> QubitCircuit {
        QubitCircuit::from_gates(n, [QubitGate::Cnx { controls: (0..n - 1).collect(), target: n - 1 }]).unwrap()
    }

    #[test]
    fn empty_circuits_are_equal() {
        let src = QubitCircuit::new(2);
        let out = QuditCircuit::new(2, 3).unwrap();
        let map = EmbeddingMap::one_per_qudit(3, 2).unwrap();
        let v = verify_compilation(&src, &out, &map, &VerifyOptions::default()).unwrap();
        assert_eq!(v.status, Status::Equal);
        assert_eq!(v.max_deviation, 0.0);
        assert_eq!(v.leakage_max, 0.0);
    }

    #[test]
    fn qutrit_c3x_is_equal_up_to_phase() {
        let src = toffoli(4);
        let (out, map) = compile_circuit_qutrit(&src).unwrap();
        let v = verify_compilation(&src, &out, &map, &VerifyOptions::default()).unwrap();
        assert_eq!(v.status, Status::EqualUpToGlobalPhase);
        assert!(v.max_deviation < 1e-9);
        assert!(v.leakage_max < 1e-12);
        assert_eq!(v.counts.two_qudit, 5);
    }

    #[test]
    fn dropped_gate_is_detected() {
        let src = toffoli(3);
        let (out, map) = compile_circuit_qutrit(&src).unwrap();
        for skip in 0..out.gates().len() {
            let mut tampered = QuditCircuit::new(out.num_qudits(), out.dim()).unwrap();
            tampered.set_global_phase(out.global_phase());
            tampered
                .extend(out.gates().iter().enumerate().filter(|(i, _)| *i != skip).map(|(_, g)| g.clone()))
                .unwrap();
            let v = verify_compilation(&src, &tampered, &map, &VerifyOptions::default()).unwrap();
            assert_eq!(v.status, Status::Different, "dropping gate {skip}");
        }
    }

    #[test]
    fn ququart_output_is_exact() {
        let src = toffoli(3);
        let (out, map, _) = compile_circuit_ququart(&src, PairingStrategy::Greedy).unwrap();
        let v = verify_compilation(&src, &out, &map, &VerifyOptions::default()).unwrap();
        assert_eq!(v.status, Status::Equal);
        assert_eq!(v.global_phase, 0.0);
    }

    #[test]
    fn tightening_tolerance_never_helps() {
        let src = QubitCircuit::from_gates(1, [QubitGate::Rot { target: 0, phi: 0.0, theta: 0.5 }]).unwrap();
        let mut out = QuditCircuit::new(1, 3).unwrap();
        out.push(QuditGate::Rot { qudit: 0, i: 0, j: 1, phi: 0.0, theta: 0.5 + 1e-6 }).unwrap();
        let map = EmbeddingMap::one_per_qudit(3, 1).unwrap();
        let mut last = Status::Equal;
        for tol in [1e-3, 1e-5, 1e-7, 1e-9] {
            let v = verify_compilation(&src, &out, &map, &VerifyOptions { tol, ..Default::default() }).unwrap();
            if last == Status::Different {
                assert_eq!(v.status, Status::Different);
            }
            last = v.status;
        }
        assert_eq!(last, Status::Different);
    }

    #[test]
    fn budget_and_measurement_errors() {
        let src = toffoli(3);
        let (out, map) = compile_circuit_qutrit(&src).unwrap();
        let tight = VerifyOptions { max_unitary_dim: 4, ..Default::default() };
        assert!(matches!(verify_compilation(&src, &out, &map, &tight), Err(Error::BudgetExceeded { .. })));
        let tight = VerifyOptions { max_state_dim: 26, ..Default::default() };
        assert!(matches!(verify_compilation(&src, &out, &map, &tight), Err(Error::BudgetExceeded { .. })));
        let mut measured = out.clone();
        measured.push(QuditGate::ProjMeasure { qudit: 0 }).unwrap();
        assert_eq!(verify_compilation(&src, &measured, &map, &VerifyOptions::default()), Err(Error::Measurement));
    }

    #[test]
    fn verdict_json_shape() {
        let v = Verdict {
            status: Status::EqualUpToGlobalPhase,
            global_phase: 1.5,
            max_deviation: 0.0,
            leakage_max: 0.0,
            counts: CompilationReport::default(),
        };
        let json = serde_json::to_value(&v).unwrap();
        assert_eq!(json["status"], "equal_up_to_global_phase");
        assert_eq!(serde_json::from_value::<Verdict>(json).unwrap(), v);
    }

    #[test]
    fn scaling_rows_match_formulas() {
        let rows = report_toffoli_scaling(2..=7).unwrap();
        let pick = |n: usize| rows.iter().find(|r| r.n == n).unwrap();
        assert_eq!((pick(3).qutrit_two_qudit, pick(3).qubit_baseline), (3, Some(13)));
        assert_eq!((pick(5).qutrit_two_qudit, pick(5).qubit_baseline), (7, Some(37)));
        assert_eq!((pick(7).qutrit_two_qudit, pick(7).qubit_baseline), (11, Some(61)));
        assert_eq!((pick(2).qutrit_two_qudit, pick(2).qubit_baseline), (1, None));
        assert!(pick(2).note.contains("not meaningful"));
        assert_eq!(pick(4).gray_code_cz, 14);
        let (from, to) = (3, 2);
        assert!(report_toffoli_scaling(from..=to).unwrap().is_empty());
        assert!(report_toffoli_scaling(1..=3).is_err());
        assert_eq!(format_toffoli_table(&rows).lines().count(), 7);
    }
}
