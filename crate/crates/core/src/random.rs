//! Seeded random circuit generators for property tests and benchmarks.

use std::f64::consts::PI;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::ir::{QubitCircuit, QubitGate, QuditCircuit, QuditGate};

#[derive(Debug, Clone, Copy)]
pub struct QuditGateMix {
    pub ms: bool,
    pub zz: bool,
    pub physms: bool,
}

impl Default for QuditGateMix {
    fn default() -> Self {
        QuditGateMix { ms: true, zz: true, physms: true }
    }
}

fn level_pair(rng: &mut impl Rng, d: usize) -> (usize, usize) {
    let i = rng.gen_range(0..d - 1);
    (i, rng.gen_range(i + 1..d))
}

/// `count` random unitary gates over `m` qudits of dimension `d`.
pub fn random_qudit_circuit(rng: &mut impl Rng, m: usize, d: usize, count: usize, mix: QuditGateMix) -> QuditCircuit {
    let mut c = QuditCircuit::new(m, d).expect("d >= 2");
    let mut kinds = vec![0u8, 1];
    if m >= 2 {
        kinds.extend(mix.ms.then_some(2));
        kinds.extend(mix.zz.then_some(3));
        kinds.extend(mix.physms.then_some(4));
    }
    for _ in 0..count {
        let q = rng.gen_range(0..m);
        let angle = |rng: &mut dyn rand::RngCore| rng.gen_range(-PI..PI);
        let gate = match *kinds.choose(rng).expect("non-empty") {
            0 => {
                let (i, j) = level_pair(rng, d);
                QuditGate::Rot { qudit: q, i, j, phi: angle(rng), theta: angle(rng) }
            }
            1 => QuditGate::Ph { qudit: q, level: rng.gen_range(0..d), theta: angle(rng) },
            kind => {
                let b = (q + rng.gen_range(1..m)) % m;
                let (i, j) = level_pair(rng, d);
                let (k, l) = level_pair(rng, d);
                match kind {
                    2 => QuditGate::Ms { a: q, b, i, j, k, l, phi: angle(rng), chi: angle(rng) },
                    3 => QuditGate::Zz { a: q, b, i, j, k, l, chi: angle(rng) },
                    _ => QuditGate::PhysMs { a: q, b, phi: angle(rng), chi: angle(rng) },
                }
            }
        };
        c.push(gate).expect("generated gate is valid");
    }
    if rng.gen_bool(0.5) {
        c.set_global_phase(rng.gen_range(0.0..2.0 * PI));
    }
    c
}

#[derive(Debug, Clone, Copy)]
pub struct QubitGateMix {
    /// Chance that a free qubit starts a two-qubit gate.
    pub two_qubit_prob: f64,
    /// Chance that a free qubit starts a multi-controlled X.
    pub cnx_prob: f64,
    pub inv_cz: bool,
}

impl Default for QubitGateMix {
    fn default() -> Self {
        QubitGateMix { two_qubit_prob: 0.3, cnx_prob: 0.0, inv_cz: false }
    }
}

/// `layers` layers of gates on disjoint qubits; every qubit is touched in
/// every layer, so the circuit depth equals `layers`.
pub fn random_qubit_circuit(rng: &mut impl Rng, n: usize, layers: usize, mix: QubitGateMix) -> QubitCircuit {
    let mut c = QubitCircuit::new(n);
    let mut order: Vec<usize> = (0..n).collect();
    for _ in 0..layers {
        order.shuffle(rng);
        let mut rest = &order[..];
        while let Some(&q) = rest.first() {
            let gate = if rest.len() >= 3 && rng.gen_bool(mix.cnx_prob) {
                let width = rng.gen_range(3..=rest.len().min(4));
                let (ops, tail) = rest.split_at(width);
                rest = tail;
                QubitGate::Cnx { controls: ops[..width - 1].to_vec(), target: ops[width - 1] }
            } else if rest.len() >= 2 && rng.gen_bool(mix.two_qubit_prob) {
                let (a, b) = (rest[0], rest[1]);
                rest = &rest[2..];
                if mix.inv_cz && rng.gen_bool(0.5) {
                    QubitGate::InvCz { a, b }
                } else {
                    QubitGate::Cz { a, b }
                }
            } else {
                rest = &rest[1..];
                match rng.gen_range(0..3) {
                    0 => QubitGate::Rot { target: q, phi: rng.gen_range(-PI..PI), theta: rng.gen_range(-PI..PI) },
                    1 => QubitGate::Phase { target: q, theta: rng.gen_range(-PI..PI) },
                    _ => QubitGate::X { target: q },
                }
            };
            c.push(gate).expect("generated gate is valid");
        }
    }
    c
}
