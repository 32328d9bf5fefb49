use crate::error::{Error, Result};

use super::normalize_angle;
use super::report::CompilationReport;

/// One native instruction of the qudit processor.
///
/// Level pairs are stored with `i < j` and `k < l`; [`QuditCircuit::push`]
/// rewrites reversed pairs into that form without changing the gate's matrix.
#[derive(Debug, Clone, PartialEq)]
pub enum QuditGate {
    /// `exp(-i sigma_phi^{ij} theta / 2)` on one qudit.
    Rot { qudit: usize, i: usize, j: usize, phi: f64, theta: f64 },
    /// Phase `e^{i theta}` on a single level.
    Ph { qudit: usize, level: usize, theta: f64 },
    /// Phase-corrected MS gate `exp(-i sigma_phi^{ij} (x) sigma_phi^{kl} chi)`.
    Ms { a: usize, b: usize, i: usize, j: usize, k: usize, l: usize, phi: f64, chi: f64 },
    /// `exp(-i sigma_z^{ij} (x) sigma_z^{kl} chi)`, an XX gate conjugated by
    /// `Ry(+-pi/2)` rotations on both qudits.
    Zz { a: usize, b: usize, i: usize, j: usize, k: usize, l: usize, chi: f64 },
    /// Physical MS interaction on the `{0,1}` transition of both qudits.
    PhysMs { a: usize, b: usize, phi: f64, chi: f64 },
    /// Computational-basis readout of a whole qudit.
    ProjMeasure { qudit: usize },
    /// Binary non-demolition projection onto `|0>` versus its complement.
    NdProject { qudit: usize },
}

impl QuditGate {
    pub fn qudits(&self) -> Vec<usize> {
        match *self {
            QuditGate::Rot { qudit, .. }
            | QuditGate::Ph { qudit, .. }
            | QuditGate::ProjMeasure { qudit }
            | QuditGate::NdProject { qudit } => vec![qudit],
            QuditGate::Ms { a, b, .. } | QuditGate::Zz { a, b, .. } | QuditGate::PhysMs { a, b, .. } => {
                vec![a, b]
            }
        }
    }

    pub fn is_two_qudit(&self) -> bool {
        matches!(self, QuditGate::Ms { .. } | QuditGate::Zz { .. } | QuditGate::PhysMs { .. })
    }

    pub fn is_measurement(&self) -> bool {
        matches!(self, QuditGate::ProjMeasure { .. } | QuditGate::NdProject { .. })
    }

    /// Text-format mnemonic, also used as the report's variant key.
    pub fn mnemonic(&self) -> &'static str {
        match self {
            QuditGate::Rot { .. } => "rot",
            QuditGate::Ph { .. } => "phg",
            QuditGate::Ms { .. } => "ms",
            QuditGate::Zz { .. } => "zz",
            QuditGate::PhysMs { .. } => "physms",
            QuditGate::ProjMeasure { .. } => "pmeas",
            QuditGate::NdProject { .. } => "ndproj",
        }
    }

    /// Canonical form with ascending level pairs.
    ///
    /// `sigma_phi^{ji} = sigma_{-phi}^{ij}` and `sigma_z^{ji} = -sigma_z^{ij}`,
    /// so a swapped pair flips `phi` (rotations, MS) or `chi` (ZZ). An MS gate
    /// with exactly one reversed pair has no single-`phi` canonical form.
    pub fn normalized(self) -> Result<Self> {
        Ok(match self {
            QuditGate::Rot { qudit, i, j, phi, theta } if i > j => {
                QuditGate::Rot { qudit, i: j, j: i, phi: -phi, theta }
            }
            QuditGate::Ms { a, b, i, j, k, l, phi, chi } if i > j || k > l => {
                if (i > j) != (k > l) {
                    return Err(Error::InvalidLevels(format!(
                        "ms pairs ({i},{j}) and ({k},{l}) have mixed orientation"
                    )));
                }
                QuditGate::Ms { a, b, i: j, j: i, k: l, l: k, phi: -phi, chi }
            }
            QuditGate::Zz { a, b, i, j, k, l, chi } if i > j || k > l => {
                let flips = (i > j) as u8 + (k > l) as u8;
                let chi = if flips == 1 { -chi } else { chi };
                QuditGate::Zz { a, b, i: i.min(j), j: i.max(j), k: k.min(l), l: k.max(l), chi }
            }
            g => g,
        })
    }

    fn validate(&self, num_qudits: usize, dim: usize) -> Result<()> {
        let qudits = self.qudits();
        for &q in &qudits {
            if q >= num_qudits {
                return Err(Error::IndexOutOfRange { index: q, size: num_qudits });
            }
        }
        if qudits.len() == 2 && qudits[0] == qudits[1] {
            return Err(Error::DuplicateIndex(qudits[0]));
        }
        let pair_ok = |i: usize, j: usize| i < j && j < dim;
        let ok = match *self {
            QuditGate::Rot { i, j, .. } => pair_ok(i, j),
            QuditGate::Ph { level, .. } => level < dim,
            QuditGate::Ms { i, j, k, l, .. } | QuditGate::Zz { i, j, k, l, .. } => pair_ok(i, j) && pair_ok(k, l),
            QuditGate::PhysMs { .. } | QuditGate::ProjMeasure { .. } | QuditGate::NdProject { .. } => true,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidLevels(format!("{self:?} for d={dim}")))
        }
    }

    /// Inverse gate; `None` for measurements.
    pub fn inverse(&self) -> Option<QuditGate> {
        let mut g = self.clone();
        match &mut g {
            QuditGate::Rot { theta, .. } | QuditGate::Ph { theta, .. } => *theta = -*theta,
            QuditGate::Ms { chi, .. } | QuditGate::Zz { chi, .. } | QuditGate::PhysMs { chi, .. } => *chi = -*chi,
            QuditGate::ProjMeasure { .. } | QuditGate::NdProject { .. } => return None,
        }
        Some(g)
    }
}

/// Native gates emitted by a lowering rule together with the scalar phase
/// they owe the circuit.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Lowered {
    pub gates: Vec<QuditGate>,
    pub phase: f64,
}

impl Lowered {
    pub fn new(gates: Vec<QuditGate>) -> Self {
        Lowered { gates, phase: 0.0 }
    }

    pub fn with_phase(gates: Vec<QuditGate>, phase: f64) -> Self {
        Lowered { gates, phase }
    }
}

/// Ordered native gates over `num_qudits` qudits of dimension `dim`, with an
/// explicit scalar phase `e^{i global_phase}`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuditCircuit {
    num_qudits: usize,
    dim: usize,
    gates: Vec<QuditGate>,
    global_phase: f64,
}

impl QuditCircuit {
    pub fn new(num_qudits: usize, dim: usize) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidArgument(format!("qudit dimension {dim} < 2")));
        }
        Ok(QuditCircuit { num_qudits, dim, gates: Vec::new(), global_phase: 0.0 })
    }

    pub fn num_qudits(&self) -> usize {
        self.num_qudits
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn gates(&self) -> &[QuditGate] {
        &self.gates
    }

    pub fn global_phase(&self) -> f64 {
        self.global_phase
    }

    /// Register size `d^m`, or `None` on overflow.
    pub fn register_dim(&self) -> Option<usize> {
        (self.dim as u64).checked_pow(self.num_qudits as u32).and_then(|v| usize::try_from(v).ok())
    }

    pub fn set_global_phase(&mut self, theta: f64) {
        self.global_phase = normalize_angle(theta);
    }

    pub fn add_global_phase(&mut self, theta: f64) {
        self.set_global_phase(self.global_phase + theta);
    }

    /// Appends a gate after normalizing its level pairs.
    pub fn push(&mut self, gate: QuditGate) -> Result<()> {
        let gate = gate.normalized()?;
        gate.validate(self.num_qudits, self.dim)?;
        self.gates.push(gate);
        Ok(())
    }

    pub fn extend(&mut self, gates: impl IntoIterator<Item = QuditGate>) -> Result<()> {
        for g in gates {
            self.push(g)?;
        }
        Ok(())
    }

    pub fn append_lowered(&mut self, lowered: Lowered) -> Result<()> {
        self.extend(lowered.gates)?;
        self.add_global_phase(lowered.phase);
        Ok(())
    }

    /// Appends `other` (same register) after this circuit.
    pub fn append(&mut self, other: &QuditCircuit) -> Result<()> {
        if other.dim != self.dim || other.num_qudits != self.num_qudits {
            return Err(Error::DimensionMismatch { expected: self.num_qudits, found: other.num_qudits });
        }
        self.extend(other.gates.iter().cloned())?;
        self.add_global_phase(other.global_phase);
        Ok(())
    }

    pub fn has_measurement(&self) -> bool {
        self.gates.iter().any(QuditGate::is_measurement)
    }

    /// Inverse circuit: reversed order, negated angles, negated phase.
    pub fn dagger(&self) -> Result<QuditCircuit> {
        let gates =
            self.gates.iter().rev().map(|g| g.inverse().ok_or(Error::Measurement)).collect::<Result<Vec<_>>>()?;
        let mut out = QuditCircuit { gates, ..self.clone() };
        out.set_global_phase(-self.global_phase);
        Ok(out)
    }

    pub fn count_gates(&self) -> CompilationReport {
        CompilationReport::from_circuit(self)
    }
}
