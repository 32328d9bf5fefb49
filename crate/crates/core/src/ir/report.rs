use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::qudit::QuditCircuit;

/// Gate accounting for a compiled circuit.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompilationReport {
    pub total: usize,
    pub two_qudit: usize,
    pub by_variant: BTreeMap<String, usize>,
    /// Number of layers when each gate is placed right after the latest
    /// earlier gate sharing a qudit with it.
    pub depth: usize,
}

impl CompilationReport {
    pub fn from_circuit(c: &QuditCircuit) -> Self {
        let mut report = CompilationReport::default();
        let mut frontier = vec![0usize; c.num_qudits()];
        for g in c.gates() {
            report.total += 1;
            if g.is_two_qudit() {
                report.two_qudit += 1;
            }
            *report.by_variant.entry(g.mnemonic().to_string()).or_default() += 1;
            let qudits = g.qudits();
            let layer = qudits.iter().map(|&q| frontier[q]).max().unwrap_or(0) + 1;
            for q in qudits {
                frontier[q] = layer;
            }
            report.depth = report.depth.max(layer);
        }
        report
    }

    pub fn count(&self, variant: &str) -> usize {
        self.by_variant.get(variant).copied().unwrap_or(0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ir::QuditGate;

    #[test]
    fn empty_circuit_counts_zero() {
        let c = QuditCircuit::new(3, 3).unwrap();
        assert_eq!(c.count_gates(), CompilationReport::default());
    }

    #[test]
    fn depth_layers_disjoint_gates() {
        let mut c = QuditCircuit::new(3, 3).unwrap();
        c.push(QuditGate::Rot { qudit: 0, i: 0, j: 1, phi: 0.0, theta: 1.0 }).unwrap();
        c.push(QuditGate::Rot { qudit: 2, i: 0, j: 1, phi: 0.0, theta: 1.0 }).unwrap();
        c.push(QuditGate::Ms { a: 0, b: 1, i: 0, j: 1, k: 0, l: 1, phi: 0.0, chi: 1.0 }).unwrap();
        c.push(QuditGate::Ph { qudit: 2, level: 1, theta: 1.0 }).unwrap();
        c.push(QuditGate::Zz { a: 1, b: 2, i: 0, j: 1, k: 0, l: 1, chi: 1.0 }).unwrap();
        let r = c.count_gates();
        assert_eq!(r.total, 5);
        assert_eq!(r.two_qudit, 2);
        assert_eq!(r.count("rot"), 2);
        assert_eq!(r.count("ms"), 1);
        assert_eq!(r.depth, 3);
        assert_eq!(r.by_variant.values().sum::<usize>(), r.total);
    }

    #[test]
    fn serializes_to_expected_keys() {
        let c = QuditCircuit::new(1, 3).unwrap();
        let json = serde_json::to_value(c.count_gates()).unwrap();
        for key in ["total", "two_qudit", "by_variant", "depth"] {
            assert!(json.get(key).is_some(), "missing {key}");
        }
    }
}
