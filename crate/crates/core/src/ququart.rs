//! Ququart backend: two qubits per ququart, qubit pair `(q, q')` at level
//! `2q + q'`.
//!
//! One-qubit gates become a pair of rotations (or phases) on the level pairs
//! that differ only in the addressed bit. CZ inside an ion is `Ph_3(pi)`.
//! Between ions, `ZZ(pi)` on the level pairs where the addressed qubits read
//! `0` yields an inverted CZ on those qubits and identity on their neighbours;
//! `Z` on both qubits plus a scalar `-1` turns it into CZ.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};
use crate::ir::{EmbeddingMap, Lowered, QubitCircuit, QubitGate, QuditCircuit, QuditGate, Slot};

use crate::synth::expand_cnx;

pub const DIM: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PairingStrategy {
    Sequential,
    Greedy,
}

/// Qubits hosted by each ququart (`First` slot, then `Second`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairingPlan {
    pub ququarts: Vec<(usize, Option<usize>)>,
    /// Number of CZ / inverted-CZ gates whose qubits share a ququart.
    pub score: usize,
}

impl PairingPlan {
    pub fn embedding(&self, num_qubits: usize) -> EmbeddingMap {
        let mut positions = vec![(0, Slot::Whole); num_qubits];
        for (qudit, &(first, second)) in self.ququarts.iter().enumerate() {
            positions[first] = (qudit, Slot::First);
            if let Some(s) = second {
                positions[s] = (qudit, Slot::Second);
            }
        }
        EmbeddingMap::new(DIM, positions).expect("pairing places each qubit once")
    }
}

fn interaction_counts(c: &QubitCircuit) -> BTreeMap<(usize, usize), usize> {
    let mut counts = BTreeMap::new();
    for g in c.gates() {
        if let QubitGate::Cz { a, b } | QubitGate::InvCz { a, b } = *g {
            *counts.entry((a.min(b), a.max(b))).or_insert(0) += 1;
        }
    }
    counts
}

fn score(pairs: &[(usize, Option<usize>)], counts: &BTreeMap<(usize, usize), usize>) -> usize {
    pairs.iter().filter_map(|&(a, b)| b.map(|b| counts.get(&(a.min(b), a.max(b))).copied().unwrap_or(0))).sum()
}

/// Orders each pair and the list itself by lowest qubit index.
fn canonical(mut pairs: Vec<(usize, Option<usize>)>) -> Vec<(usize, Option<usize>)> {
    for p in &mut pairs {
        if let Some(b) = p.1 {
            if b < p.0 {
                *p = (b, Some(p.0));
            }
        }
    }
    pairs.sort();
    pairs
}

fn sequential_pairs(n: usize) -> Vec<(usize, Option<usize>)> {
    (0..n).step_by(2).map(|q| (q, (q + 1 < n).then_some(q + 1))).collect()
}

fn greedy_pairs(n: usize, counts: &BTreeMap<(usize, usize), usize>) -> Vec<(usize, Option<usize>)> {
    let mut ranked: Vec<_> = counts.iter().map(|(&pair, &cnt)| (pair, cnt)).collect();
    ranked.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
    let mut placed = vec![false; n];
    let mut pairs = Vec::new();
    for ((a, b), _) in ranked {
        if !placed[a] && !placed[b] {
            placed[a] = true;
            placed[b] = true;
            pairs.push((a, Some(b)));
        }
    }
    let free: Vec<usize> = (0..n).filter(|&q| !placed[q]).collect();
    pairs.extend(free.chunks(2).map(|ch| (ch[0], ch.get(1).copied())));

    // Exchange partners between two ions while that strictly raises the score.
    let mut improved = true;
    while improved {
        improved = false;
        'search: for x in 0..pairs.len() {
            for y in x + 1..pairs.len() {
                let slots = [Some(pairs[x].0), pairs[x].1, Some(pairs[y].0), pairs[y].1];
                let current = score(&[pairs[x], pairs[y]], counts);
                for (p, q) in [((0, 2), (1, 3)), ((0, 3), (1, 2))] {
                    let (Some(p), Some(q)) = (ion(slots[p.0], slots[p.1]), ion(slots[q.0], slots[q.1])) else {
                        continue;
                    };
                    if score(&[p, q], counts) > current {
                        pairs[x] = p;
                        pairs[y] = q;
                        improved = true;
                        break 'search;
                    }
                }
            }
        }
    }
    pairs
}

fn ion(a: Option<usize>, b: Option<usize>) -> Option<(usize, Option<usize>)> {
    match (a, b) {
        (Some(a), b) => Some((a, b)),
        (None, Some(b)) => Some((b, None)),
        (None, None) => None,
    }
}

/// Places qubits two per ququart.
///
/// `Greedy` pairs qubits by descending CZ interaction count (ties to the lowest
/// qubit indices), refines by partner swaps, and never scores below
/// `Sequential`.
pub fn assign_pairs(c: &QubitCircuit, strategy: PairingStrategy) -> (EmbeddingMap, PairingPlan) {
    let n = c.num_qubits();
    let counts = interaction_counts(c);
    let sequential = sequential_pairs(n);
    let pairs = match strategy {
        PairingStrategy::Sequential => sequential,
        PairingStrategy::Greedy => {
            let greedy = canonical(greedy_pairs(n, &counts));
            if score(&greedy, &counts) >= score(&sequential, &counts) {
                greedy
            } else {
                sequential
            }
        }
    };
    let plan = PairingPlan { score: score(&pairs, &counts), ququarts: pairs };
    (plan.embedding(n), plan)
}

fn bit_pairs(slot: Slot) -> Result<[(usize, usize); 2]> {
    match slot {
        Slot::First => Ok([(0, 2), (1, 3)]),
        Slot::Second => Ok([(0, 1), (2, 3)]),
        Slot::Whole => Err(Error::InvalidEmbedding("ququart qubits need slot first or second".into())),
    }
}

/// Levels where the qubit in `slot` reads 1.
fn one_levels(slot: Slot) -> Result<[usize; 2]> {
    bit_pairs(slot).map(|[(_, a), (_, b)]| [a, b])
}

/// Level pair on which the qubit in `slot` reads 0.
fn zero_pair(slot: Slot) -> Result<(usize, usize)> {
    match slot {
        Slot::First => Ok((0, 1)),
        Slot::Second => Ok((0, 2)),
        Slot::Whole => Err(Error::InvalidEmbedding("ququart qubits need slot first or second".into())),
    }
}

/// One-qubit gate on the qubit at `(qudit, slot)`.
pub fn lower_1q_ququart(g: &QubitGate, qudit: usize, slot: Slot) -> Result<Lowered> {
    let pairs = bit_pairs(slot)?;
    let rot = |phi: f64, theta: f64| {
        pairs.iter().map(|&(i, j)| QuditGate::Rot { qudit, i, j, phi, theta }).collect::<Vec<_>>()
    };
    Ok(match *g {
        QubitGate::Rot { phi, theta, .. } => Lowered::new(rot(phi, theta)),
        QubitGate::Phase { theta, .. } => {
            Lowered::new(one_levels(slot)?.iter().map(|&level| QuditGate::Ph { qudit, level, theta }).collect())
        }
        // X = i Rx(pi)
        QubitGate::X { .. } => Lowered::with_phase(rot(0.0, PI), FRAC_PI_2),
        _ => return Err(Error::Unsupported(format!("`{}` is not a one-qubit gate", g.mnemonic()))),
    })
}

fn check_intra(slot_a: Slot, slot_b: Slot) -> Result<()> {
    match (slot_a, slot_b) {
        (Slot::First, Slot::Second) | (Slot::Second, Slot::First) => Ok(()),
        _ => Err(Error::InvalidEmbedding(format!("slots {slot_a} and {slot_b} cannot share a ququart"))),
    }
}

/// CZ between the two qubits of one ququart: `Ph_3(pi)`.
pub fn lower_cz_intra(qudit: usize, slot_a: Slot, slot_b: Slot) -> Result<Vec<QuditGate>> {
    check_intra(slot_a, slot_b)?;
    Ok(vec![QuditGate::Ph { qudit, level: 3, theta: PI }])
}

/// Inverted CZ inside one ququart: `Ph_0(pi)`.
pub fn lower_inv_cz_intra(qudit: usize, slot_a: Slot, slot_b: Slot) -> Result<Vec<QuditGate>> {
    check_intra(slot_a, slot_b)?;
    Ok(vec![QuditGate::Ph { qudit, level: 0, theta: PI }])
}

/// Inverted CZ between qubits in different ququarts: a single `ZZ(pi)`.
pub fn lower_inv_cz_inter(a: (usize, Slot), b: (usize, Slot)) -> Result<Vec<QuditGate>> {
    if a.0 == b.0 {
        return Err(Error::InvalidArgument(format!("qubits share ququart {}; use the intra-ion lowering", a.0)));
    }
    let (i, j) = zero_pair(a.1)?;
    let (k, l) = zero_pair(b.1)?;
    Ok(vec![QuditGate::Zz { a: a.0, b: b.0, i, j, k, l, chi: PI }])
}

/// CZ between qubits in different ququarts: `ZZ(pi)`, `Z` on both qubits and a
/// scalar `-1`, since `(Z (x) Z) invCZ = -CZ`.
pub fn lower_cz_inter(a: (usize, Slot), b: (usize, Slot)) -> Result<Lowered> {
    let mut gates = lower_inv_cz_inter(a, b)?;
    for (qudit, slot) in [a, b] {
        gates.extend(lower_1q_ququart(&QubitGate::Phase { target: 0, theta: PI }, qudit, slot)?.gates);
    }
    Ok(Lowered::with_phase(gates, PI))
}

fn lower_gate(g: &QubitGate, map: &EmbeddingMap) -> Result<Lowered> {
    let two = |a: usize, b: usize, inverted: bool| -> Result<Lowered> {
        let (pa, pb) = (map.position(a), map.position(b));
        if pa.0 == pb.0 {
            let gates =
                if inverted { lower_inv_cz_intra(pa.0, pa.1, pb.1)? } else { lower_cz_intra(pa.0, pa.1, pb.1)? };
            Ok(Lowered::new(gates))
        } else if inverted {
            Ok(Lowered::new(lower_inv_cz_inter(pa, pb)?))
        } else {
            lower_cz_inter(pa, pb)
        }
    };
    match *g {
        QubitGate::Rot { target, .. } | QubitGate::Phase { target, .. } | QubitGate::X { target } => {
            let (qudit, slot) = map.position(target);
            lower_1q_ququart(g, qudit, slot)
        }
        QubitGate::Cz { a, b } => two(a, b, false),
        QubitGate::InvCz { a, b } => two(a, b, true),
        QubitGate::Measure { target } => {
            Ok(Lowered::new(vec![QuditGate::ProjMeasure { qudit: map.position(target).0 }]))
        }
        QubitGate::Cnx { .. } => unreachable!("expanded before lowering"),
    }
}

/// Compiles onto `ceil(n/2)` ququarts. Multi-controlled X gates are first
/// expanded into `{Rot, Phase, CZ}`; the result matches the source exactly,
/// global phase included. A measurement reads out the whole ququart.
pub fn compile_circuit_ququart(
    c: &QubitCircuit,
    strategy: PairingStrategy,
) -> Result<(QuditCircuit, EmbeddingMap, PairingPlan)> {
    let expanded = expand_cnx(c)?;
    let (map, plan) = assign_pairs(&expanded, strategy);
    let mut out = QuditCircuit::new(plan.ququarts.len(), DIM)?;
    for g in expanded.gates() {
        out.append_lowered(lower_gate(g, &map)?)?;
    }
    Ok((out, map, plan))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{random_qubit_circuit, QubitGateMix};
    use crate::sim::{circuit_unitary, embedding_isometry, qubit_circuit_unitary, reduced_unitary, Comparison};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::FRAC_PI_4;

    fn compare(src: &QubitCircuit, out: &QuditCircuit, map: &EmbeddingMap) -> (Comparison, f64) {
        let iso = embedding_isometry(map, out.num_qudits()).unwrap();
        let reduced = reduced_unitary(out, &iso).unwrap();
        let reference = qubit_circuit_unitary(src, 1 << 12).unwrap();
        let leak = reduced.leakage.iter().copied().fold(0.0, f64::max);
        (Comparison::new(&reduced.matrix, &reference).unwrap(), leak)
    }

    fn lowered_circuit(m: usize, l: Lowered) -> QuditCircuit {
        let mut c = QuditCircuit::new(m, DIM).unwrap();
        c.append_lowered(l).unwrap();
        c
    }

    fn one_qubit_gates() -> Vec<QubitGate> {
        vec![
            QubitGate::Rot { target: 0, phi: 0.3, theta: 1.1 },
            QubitGate::Rot { target: 0, phi: -FRAC_PI_2, theta: PI },
            QubitGate::Phase { target: 0, theta: 0.7 },
            QubitGate::X { target: 0 },
        ]
    }

    #[test]
    fn one_qubit_gate_acts_on_its_slot_only() {
        let one_ion = EmbeddingMap::sequential_pairs(2);
        for g in one_qubit_gates() {
            for (target, slot) in [(0, Slot::First), (1, Slot::Second)] {
                let mut moved = g.clone();
                match &mut moved {
                    QubitGate::Rot { target: t, .. }
                    | QubitGate::Phase { target: t, .. }
                    | QubitGate::X { target: t } => *t = target,
                    _ => unreachable!(),
                }
                let src = QubitCircuit::from_gates(2, [moved]).unwrap();
                let out = lowered_circuit(1, lower_1q_ququart(&g, 0, slot).unwrap());
                // The ququart unitary itself is u (x) 1 or 1 (x) u.
                let full = circuit_unitary(&out, 16).unwrap();
                let reference = qubit_circuit_unitary(&src, 16).unwrap();
                assert!(full.max_abs_diff(&reference) < 1e-12, "{g:?} {slot}");
                let (cmp, leak) = compare(&src, &out, &one_ion);
                assert!(cmp.raw_deviation < 1e-12 && leak < 1e-12);
            }
        }
    }

    #[test]
    fn whole_slot_is_rejected() {
        assert!(lower_1q_ququart(&QubitGate::X { target: 0 }, 0, Slot::Whole).is_err());
        assert!(lower_cz_intra(0, Slot::First, Slot::First).is_err());
        assert!(lower_inv_cz_inter((0, Slot::First), (0, Slot::Second)).is_err());
    }

    #[test]
    fn intra_ion_two_qubit_gates_are_exact() {
        let map = EmbeddingMap::sequential_pairs(2);
        for (a, b) in [(0, 1), (1, 0)] {
            let (sa, sb) = (map.position(a).1, map.position(b).1);
            let cz = QubitCircuit::from_gates(2, [QubitGate::Cz { a, b }]).unwrap();
            let out = lowered_circuit(1, Lowered::new(lower_cz_intra(0, sa, sb).unwrap()));
            assert!(compare(&cz, &out, &map).0.raw_deviation < 1e-12);
            let inv = QubitCircuit::from_gates(2, [QubitGate::InvCz { a, b }]).unwrap();
            let out = lowered_circuit(1, Lowered::new(lower_inv_cz_intra(0, sa, sb).unwrap()));
            assert!(compare(&inv, &out, &map).0.raw_deviation < 1e-12);
        }
    }

    /// Inverted CZ on the addressed qubits and identity on the spectators,
    /// across all slot combinations, with a single two-ququart gate.
    #[test]
    fn inter_ion_gates_for_all_slot_combinations() {
        let slots = [Slot::First, Slot::Second];
        for sa in slots {
            for sb in slots {
                let a = if sa == Slot::First { 0 } else { 1 };
                let b = if sb == Slot::First { 2 } else { 3 };
                let map = EmbeddingMap::sequential_pairs(4);

                let gates = lower_inv_cz_inter((0, sa), (1, sb)).unwrap();
                assert_eq!(gates.len(), 1);
                let out = lowered_circuit(2, Lowered::new(gates));
                let src = QubitCircuit::from_gates(4, [QubitGate::InvCz { a, b }]).unwrap();
                let (cmp, leak) = compare(&src, &out, &map);
                assert!(cmp.raw_deviation < 1e-12, "invcz {sa} {sb}: {cmp:?}");
                assert!(leak < 1e-12);

                let lowered = lower_cz_inter((0, sa), (1, sb)).unwrap();
                let out = lowered_circuit(2, lowered);
                assert_eq!(out.count_gates().two_qudit, 1);
                let src = QubitCircuit::from_gates(4, [QubitGate::Cz { a, b }]).unwrap();
                assert!(compare(&src, &out, &map).0.raw_deviation < 1e-12, "cz {sa} {sb}");
            }
        }
    }

    #[test]
    fn two_qubit_circuit_fits_one_ion() {
        let src = QubitCircuit::from_gates(
            2,
            [
                QubitGate::Rot { target: 0, phi: 0.0, theta: FRAC_PI_4 },
                QubitGate::Cz { a: 0, b: 1 },
                QubitGate::X { target: 1 },
                QubitGate::Cnx { controls: vec![1], target: 0 },
            ],
        )
        .unwrap();
        for strategy in [PairingStrategy::Sequential, PairingStrategy::Greedy] {
            let (out, map, _) = compile_circuit_ququart(&src, strategy).unwrap();
            assert_eq!(out.num_qudits(), 1);
            assert_eq!(out.count_gates().two_qudit, 0);
            assert!(compare(&src, &out, &map).0.raw_deviation < 1e-9);
        }
    }

    #[test]
    fn cross_ion_cz_uses_one_zz() {
        let src = QubitCircuit::from_gates(4, [QubitGate::Cz { a: 0, b: 2 }]).unwrap();
        let (out, map, plan) = compile_circuit_ququart(&src, PairingStrategy::Sequential).unwrap();
        assert_eq!(plan.ququarts, vec![(0, Some(1)), (2, Some(3))]);
        let r = out.count_gates();
        assert_eq!((r.two_qudit, r.count("zz")), (1, 1));
        assert!(compare(&src, &out, &map).0.raw_deviation < 1e-12);
    }

    #[test]
    fn odd_qubit_count_leaves_one_slot_empty() {
        let src = QubitCircuit::new(5);
        let (map, plan) = assign_pairs(&src, PairingStrategy::Sequential);
        assert_eq!(plan.ququarts, vec![(0, Some(1)), (2, Some(3)), (4, None)]);
        assert_eq!(map.position(4), (2, Slot::First));
        assert_eq!(map.min_qudits(), 3);
    }

    #[test]
    fn greedy_colocates_interacting_qubits() {
        let src = QubitCircuit::from_gates(
            4,
            [QubitGate::Cz { a: 0, b: 2 }, QubitGate::Cz { a: 2, b: 0 }, QubitGate::Cz { a: 1, b: 3 }],
        )
        .unwrap();
        let (map, plan) = assign_pairs(&src, PairingStrategy::Greedy);
        assert_eq!(plan.ququarts, vec![(0, Some(2)), (1, Some(3))]);
        assert_eq!(plan.score, 3);
        assert_eq!(map.position(2), (0, Slot::Second));
        let (out, _, _) = compile_circuit_ququart(&src, PairingStrategy::Greedy).unwrap();
        assert_eq!(out.count_gates().two_qudit, 0);
    }

    #[test]
    fn greedy_never_loses_to_sequential() {
        // Plain max-count matching takes (1,2) and strands 0 with 3.
        let mut gates = vec![QubitGate::Cz { a: 1, b: 2 }; 3];
        gates.extend(vec![QubitGate::Cz { a: 0, b: 1 }; 2]);
        gates.extend(vec![QubitGate::Cz { a: 2, b: 3 }; 2]);
        let src = QubitCircuit::from_gates(4, gates).unwrap();
        let (_, greedy) = assign_pairs(&src, PairingStrategy::Greedy);
        let (_, sequential) = assign_pairs(&src, PairingStrategy::Sequential);
        assert!(greedy.score >= sequential.score);
        assert_eq!(greedy.score, 4);
    }

    #[test]
    fn random_six_qubit_circuits() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mix = QubitGateMix { two_qubit_prob: 0.4, cnx_prob: 0.1, inv_cz: true };
        for _ in 0..8 {
            let src = random_qubit_circuit(&mut rng, 6, 10, mix);
            let (seq, seq_map, _) = compile_circuit_ququart(&src, PairingStrategy::Sequential).unwrap();
            let (gr, gr_map, _) = compile_circuit_ququart(&src, PairingStrategy::Greedy).unwrap();
            for (out, map) in [(&seq, &seq_map), (&gr, &gr_map)] {
                let (cmp, leak) = compare(&src, out, map);
                assert!(cmp.raw_deviation < 1e-9, "{cmp:?}");
                assert!(leak < 1e-12);
            }
            assert!(gr.count_gates().two_qudit <= seq.count_gates().two_qudit);
        }
    }
}
