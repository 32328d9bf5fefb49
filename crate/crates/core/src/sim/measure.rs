use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::ir::{QuditCircuit, QuditGate};

use super::matrix::C64;
use super::state::StateVector;

/// Outcome records (one entry per measurement, in circuit order) and their
/// probabilities. `pmeas` records the observed level; `ndproj` records 0 for
/// the `|0>` projector and 1 for its complement.
pub type Outcomes = BTreeMap<Vec<usize>, f64>;

const PRUNE: f64 = 1e-14;

/// Runs a circuit with measurements by exact branching over outcomes.
pub fn measurement_distribution(c: &QuditCircuit, s: &StateVector) -> Result<Outcomes> {
    if s.dim() != c.dim() || s.num_qudits() != c.num_qudits() {
        return Err(Error::DimensionMismatch { expected: c.num_qudits(), found: s.num_qudits() });
    }
    let d = c.dim();
    let m = c.num_qudits();
    let mut branches: Vec<(Vec<usize>, StateVector)> = vec![(Vec::new(), s.clone())];
    for g in c.gates() {
        match *g {
            QuditGate::ProjMeasure { qudit } | QuditGate::NdProject { qudit } => {
                let stride = d.pow((m - 1 - qudit) as u32);
                let outcome_of = |idx: usize| {
                    let level = (idx / stride) % d;
                    match g {
                        QuditGate::ProjMeasure { .. } => level,
                        _ => (level != 0) as usize,
                    }
                };
                let count = if matches!(g, QuditGate::ProjMeasure { .. }) { d } else { 2 };
                let mut next = Vec::with_capacity(branches.len() * count);
                for (record, state) in branches {
                    for outcome in 0..count {
                        let mut projected = state.clone();
                        for (idx, a) in projected.amplitudes_mut().iter_mut().enumerate() {
                            if outcome_of(idx) != outcome {
                                *a = C64::new(0.0, 0.0);
                            }
                        }
                        if projected.norm().powi(2) > PRUNE {
                            let mut r = record.clone();
                            r.push(outcome);
                            next.push((r, projected));
                        }
                    }
                }
                branches = next;
            }
            _ => {
                for (_, state) in &mut branches {
                    state.apply_gate(g)?;
                }
            }
        }
    }
    let mut out = Outcomes::new();
    for (record, state) in branches {
        *out.entry(record).or_default() += state.norm().powi(2);
    }
    Ok(out)
}
