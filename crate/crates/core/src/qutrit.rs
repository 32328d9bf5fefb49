//! Qutrit backend: one qubit per qutrit on levels `{0, 1}`, with level `|2>`
//! as an ancilla for multi-controlled X gates.
//!
//! `C^{N-1}X` is built as a V-shaped ladder: `V1` blocks walk down the
//! controls, parking the AND of each pair on the lower qutrit (the upper one
//! is moved into the ancilla level), `V2` flips the target, and the `V1^dagger`
//! blocks walk back up. Each block holds one `XX(pi/2)` gate, for `2N - 3`
//! two-qutrit gates between operand-order neighbours.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use crate::error::{Error, Result};
use crate::ir::{EmbeddingMap, Lowered, QubitCircuit, QubitGate, QuditCircuit, QuditGate, Slot};

pub const DIM: usize = 3;

/// ZZ angle used for CZ and inverted CZ. `ZZ(-pi/4)` restricted to two qubits is
/// `diag(w, w*, w*, w)` with `w = e^{i pi/4}`; two `Ph_1` gates and a scalar
/// phase turn it into either gate exactly.
pub const CZ_ZZ_ANGLE: f64 = -FRAC_PI_4;
const CZ_LOCAL_PHASE: f64 = FRAC_PI_2;
const CZ_GLOBAL_PHASE: f64 = -FRAC_PI_4;
const INV_CZ_LOCAL_PHASE: f64 = -FRAC_PI_2;
const INV_CZ_GLOBAL_PHASE: f64 = 3.0 * FRAC_PI_4;

fn rx(qudit: usize, i: usize, j: usize, theta: f64) -> QuditGate {
    QuditGate::Rot { qudit, i, j, phi: 0.0, theta }
}

fn ry(qudit: usize, i: usize, j: usize, theta: f64) -> QuditGate {
    QuditGate::Rot { qudit, i, j, phi: FRAC_PI_2, theta }
}

fn xx(a: usize, b: usize, chi: f64) -> QuditGate {
    QuditGate::Ms { a, b, i: 0, j: 1, k: 0, l: 1, phi: 0.0, chi }
}

fn v1_gates(top: usize, bottom: usize) -> Vec<QuditGate> {
    vec![rx(top, 1, 2, -PI), ry(bottom, 0, 2, -PI), ry(top, 0, 1, FRAC_PI_2), xx(top, bottom, FRAC_PI_2)]
}

fn v2_gates(top: usize, bottom: usize) -> Vec<QuditGate> {
    vec![
        rx(top, 1, 2, -PI),
        ry(top, 0, 1, FRAC_PI_2),
        xx(top, bottom, FRAC_PI_2),
        rx(top, 0, 1, -PI),
        rx(bottom, 0, 1, -PI),
        ry(top, 0, 1, -FRAC_PI_2),
        rx(top, 1, 2, PI),
    ]
}

fn inverse_gates(gates: Vec<QuditGate>) -> Vec<QuditGate> {
    gates.iter().rev().map(|g| g.inverse().expect("ladder blocks are unitary")).collect()
}

fn block_circuit(
    num_qudits: usize,
    dim: usize,
    top: usize,
    bottom: usize,
    gates: Vec<QuditGate>,
) -> Result<QuditCircuit> {
    if dim != DIM {
        return Err(Error::DimensionMismatch { expected: DIM, found: dim });
    }
    if top == bottom {
        return Err(Error::DuplicateIndex(top));
    }
    let mut c = QuditCircuit::new(num_qudits, dim)?;
    c.extend(gates)?;
    Ok(c)
}

/// `V1` on `(top, bottom)`: for qubit-subspace inputs the bottom qutrit ends
/// on level 1 iff both inputs were `|1>`.
pub fn build_v1(num_qudits: usize, dim: usize, top: usize, bottom: usize) -> Result<QuditCircuit> {
    block_circuit(num_qudits, dim, top, bottom, v1_gates(top, bottom))
}

/// `V2` on `(top, bottom)`: flips the bottom qubit iff the top is `|1>`.
pub fn build_v2(num_qudits: usize, dim: usize, top: usize, bottom: usize) -> Result<QuditCircuit> {
    block_circuit(num_qudits, dim, top, bottom, v2_gates(top, bottom))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LadderBlock {
    V1,
    V2,
    V1Dagger,
}

/// Block schedule of the ladder over qudits in operand order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LadderPlan {
    pub blocks: Vec<(LadderBlock, (usize, usize))>,
}

impl LadderPlan {
    /// `operands` lists the control qudits followed by the target qudit.
    pub fn new(operands: &[usize]) -> Result<Self> {
        let n = operands.len();
        if n < 2 {
            return Err(Error::InvalidArgument(format!("ladder needs N >= 2 operands, got {n}")));
        }
        let pair = |t: usize| (operands[t], operands[t + 1]);
        let mut blocks: Vec<_> = (0..n - 2).map(|t| (LadderBlock::V1, pair(t))).collect();
        blocks.push((LadderBlock::V2, pair(n - 2)));
        blocks.extend((0..n - 2).rev().map(|t| (LadderBlock::V1Dagger, pair(t))));
        Ok(LadderPlan { blocks })
    }

    pub fn gates(&self) -> Vec<QuditGate> {
        self.blocks
            .iter()
            .flat_map(|&(block, (top, bottom))| match block {
                LadderBlock::V1 => v1_gates(top, bottom),
                LadderBlock::V2 => v2_gates(top, bottom),
                LadderBlock::V1Dagger => inverse_gates(v1_gates(top, bottom)),
            })
            .collect()
    }
}

fn whole_qudit(map: &EmbeddingMap, qubit: usize) -> Result<usize> {
    if qubit >= map.num_qubits() {
        return Err(Error::IndexOutOfRange { index: qubit, size: map.num_qubits() });
    }
    match map.position(qubit) {
        (qudit, Slot::Whole) => Ok(qudit),
        (_, slot) => Err(Error::InvalidEmbedding(format!("qubit {qubit} is in slot {slot}, expected whole"))),
    }
}

fn check_map(map: &EmbeddingMap) -> Result<()> {
    if map.dim() != DIM {
        return Err(Error::DimensionMismatch { expected: DIM, found: map.dim() });
    }
    Ok(())
}

/// `C^{N-1}X` as a ladder over the operands' qutrits; equals the gate on the
/// qubit subspace up to a global phase.
pub fn compile_cnx_qutrit(
    controls: &[usize],
    target: usize,
    map: &EmbeddingMap,
    num_qudits: usize,
) -> Result<QuditCircuit> {
    check_map(map)?;
    let operands = controls.iter().chain([&target]).map(|&q| whole_qudit(map, q)).collect::<Result<Vec<_>>>()?;
    let plan = LadderPlan::new(&operands)?;
    let mut c = QuditCircuit::new(num_qudits, DIM)?;
    c.extend(plan.gates())?;
    Ok(c)
}

/// Lowers a one- or two-qubit gate onto levels `{0, 1}`.
pub fn lower_qubit_gate_qutrit(g: &QubitGate, map: &EmbeddingMap) -> Result<Lowered> {
    check_map(map)?;
    let q = |qubit: usize| whole_qudit(map, qubit);
    let cz_like = |a: usize, b: usize, local: f64, global: f64| -> Result<Lowered> {
        let (qa, qb) = (q(a)?, q(b)?);
        Ok(Lowered::with_phase(
            vec![
                QuditGate::Zz { a: qa, b: qb, i: 0, j: 1, k: 0, l: 1, chi: CZ_ZZ_ANGLE },
                QuditGate::Ph { qudit: qa, level: 1, theta: local },
                QuditGate::Ph { qudit: qb, level: 1, theta: local },
            ],
            global,
        ))
    };
    Ok(match *g {
        QubitGate::Rot { target, phi, theta } => {
            Lowered::new(vec![QuditGate::Rot { qudit: q(target)?, i: 0, j: 1, phi, theta }])
        }
        QubitGate::Phase { target, theta } => Lowered::new(vec![QuditGate::Ph { qudit: q(target)?, level: 1, theta }]),
        // X = i Rx(pi)
        QubitGate::X { target } => Lowered::with_phase(vec![rx(q(target)?, 0, 1, PI)], FRAC_PI_2),
        QubitGate::Cz { a, b } => cz_like(a, b, CZ_LOCAL_PHASE, CZ_GLOBAL_PHASE)?,
        QubitGate::InvCz { a, b } => cz_like(a, b, INV_CZ_LOCAL_PHASE, INV_CZ_GLOBAL_PHASE)?,
        QubitGate::Measure { target } => Lowered::new(vec![QuditGate::ProjMeasure { qudit: q(target)? }]),
        QubitGate::Cnx { .. } => {
            return Err(Error::Unsupported("multi-controlled X must be compiled with compile_cnx_qutrit".into()))
        }
    })
}

/// Compiles a qubit circuit with qubit `q` in qutrit `q`.
pub fn compile_circuit_qutrit(c: &QubitCircuit) -> Result<(QuditCircuit, EmbeddingMap)> {
    let n = c.num_qubits();
    let map = EmbeddingMap::one_per_qudit(DIM, n)?;
    let mut out = QuditCircuit::new(n, DIM)?;
    for g in c.gates() {
        match g {
            QubitGate::Cnx { controls, target } => {
                out.append(&compile_cnx_qutrit(controls, *target, &map, n)?)?;
            }
            other => out.append_lowered(lower_qubit_gate_qutrit(other, &map)?)?,
        }
    }
    Ok((out, map))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{random_qubit_circuit, QubitGateMix};
    use crate::sim::{
        apply_circuit, circuit_unitary, embedding_isometry, qubit_circuit_unitary, reduced_unitary, Comparison,
        Equivalence, Matrix, StateVector,
    };
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn population(c: &QuditCircuit, levels: &[usize], qudit: usize, level: usize) -> f64 {
        let out = apply_circuit(c, &StateVector::from_levels(3, levels).unwrap()).unwrap();
        out.amplitudes()
            .iter()
            .enumerate()
            .filter(|(idx, _)| out.levels_of(*idx)[qudit] == level)
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }

    fn compare_on_subspace(src: &QubitCircuit, out: &QuditCircuit, map: &EmbeddingMap) -> (Comparison, f64) {
        let iso = embedding_isometry(map, out.num_qudits()).unwrap();
        let reduced = reduced_unitary(out, &iso).unwrap();
        let reference = qubit_circuit_unitary(src, 1 << 12).unwrap();
        let leak = reduced.leakage.iter().copied().fold(0.0, f64::max);
        (Comparison::new(&reduced.matrix, &reference).unwrap(), leak)
    }

    #[test]
    fn v1_structure_and_inverse() {
        let v1 = build_v1(2, 3, 0, 1).unwrap();
        let r = v1.count_gates();
        assert_eq!(r.two_qudit, 1);
        assert_eq!(r.count("rot"), 3);
        let mut both = v1.clone();
        both.append(&v1.dagger().unwrap()).unwrap();
        assert!(circuit_unitary(&both, 81).unwrap().max_abs_diff(&Matrix::identity(9)) < 1e-12);
        assert!(build_v1(2, 4, 0, 1).is_err());
        assert!(build_v1(2, 3, 1, 1).is_err());
    }

    #[test]
    fn v1_marks_bottom_iff_both_set() {
        let v1 = build_v1(2, 3, 0, 1).unwrap();
        for (a, b) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
            let p = population(&v1, &[a, b], 1, 1);
            let expected = if a == 1 && b == 1 { 1.0 } else { 0.0 };
            assert!((p - expected).abs() < 1e-12, "input |{a}{b}>: {p}");
        }
    }

    #[test]
    fn v2_flips_bottom_iff_top_set() {
        let v2 = build_v2(2, 3, 0, 1).unwrap();
        let r = v2.count_gates();
        assert_eq!((r.two_qudit, r.count("rot")), (1, 6));
        assert!((population(&v2, &[1, 0], 1, 1) - 1.0).abs() < 1e-12);
        assert!((population(&v2, &[1, 1], 1, 0) - 1.0).abs() < 1e-12);
        for b in [0, 1] {
            assert!((population(&v2, &[0, b], 1, b) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn ladder_plan_shape() {
        let plan = LadderPlan::new(&[0, 1, 2, 3]).unwrap();
        let expected = vec![
            (LadderBlock::V1, (0, 1)),
            (LadderBlock::V1, (1, 2)),
            (LadderBlock::V2, (2, 3)),
            (LadderBlock::V1Dagger, (1, 2)),
            (LadderBlock::V1Dagger, (0, 1)),
        ];
        assert_eq!(plan.blocks, expected);
        assert_eq!(LadderPlan::new(&[4, 2]).unwrap().blocks, vec![(LadderBlock::V2, (4, 2))]);
        assert!(LadderPlan::new(&[1]).is_err());
    }

    #[test]
    fn ladder_two_qudit_count_is_2n_minus_3() {
        for n in 2..=8 {
            let map = EmbeddingMap::one_per_qudit(3, n).unwrap();
            let controls: Vec<usize> = (0..n - 1).collect();
            let c = compile_cnx_qutrit(&controls, n - 1, &map, n).unwrap();
            assert_eq!(c.count_gates().two_qudit, 2 * n - 3, "N={n}");
            for g in c.gates().iter().filter(|g| g.is_two_qudit()) {
                let q = g.qudits();
                assert_eq!(q[0] + 1, q[1], "non-neighbour pair {q:?}");
            }
        }
    }

    #[test]
    fn cx_and_toffoli_up_to_global_phase() {
        for n in 2..=4 {
            let src = QubitCircuit::from_gates(n, [QubitGate::Cnx { controls: (0..n - 1).collect(), target: n - 1 }])
                .unwrap();
            let (out, map) = compile_circuit_qutrit(&src).unwrap();
            let (cmp, leak) = compare_on_subspace(&src, &out, &map);
            assert!(matches!(cmp.classify(1e-9), Equivalence::EqualUpToGlobalPhase(_)), "N={n}: {cmp:?}");
            assert!(leak < 1e-12);
        }
    }

    #[test]
    fn permuted_operands() {
        let src = QubitCircuit::from_gates(4, [QubitGate::Cnx { controls: vec![3, 0, 2], target: 1 }]).unwrap();
        let (out, map) = compile_circuit_qutrit(&src).unwrap();
        let (cmp, leak) = compare_on_subspace(&src, &out, &map);
        assert!(cmp.classify(1e-9).is_equal(), "{cmp:?}");
        assert!(leak < 1e-12);
    }

    #[test]
    fn two_qubit_lowerings_are_exact() {
        let cases = [
            QubitGate::Cz { a: 0, b: 1 },
            QubitGate::InvCz { a: 0, b: 1 },
            QubitGate::InvCz { a: 1, b: 0 },
            QubitGate::X { target: 1 },
            QubitGate::Rot { target: 0, phi: 0.3, theta: 1.9 },
            QubitGate::Phase { target: 1, theta: -0.8 },
        ];
        for g in cases {
            let src = QubitCircuit::from_gates(2, [g.clone()]).unwrap();
            let (out, map) = compile_circuit_qutrit(&src).unwrap();
            let (cmp, leak) = compare_on_subspace(&src, &out, &map);
            assert!(cmp.raw_deviation < 1e-12, "{g:?}: {cmp:?}");
            assert!(leak < 1e-12);
        }
    }

    #[test]
    fn cz_block_uses_one_two_qudit_gate() {
        let map = EmbeddingMap::one_per_qudit(3, 2).unwrap();
        let lowered = lower_qubit_gate_qutrit(&QubitGate::Cz { a: 0, b: 1 }, &map).unwrap();
        assert_eq!(lowered.gates.iter().filter(|g| g.is_two_qudit()).count(), 1);
        assert!(lower_qubit_gate_qutrit(&QubitGate::Cnx { controls: vec![0], target: 1 }, &map).is_err());
        let wrong = EmbeddingMap::sequential_pairs(2);
        assert!(lower_qubit_gate_qutrit(&QubitGate::X { target: 0 }, &wrong).is_err());
    }

    #[test]
    fn single_qubit_only_circuit() {
        let src = QubitCircuit::from_gates(
            2,
            [QubitGate::Rot { target: 0, phi: 0.1, theta: 0.2 }, QubitGate::Phase { target: 1, theta: 0.3 }],
        )
        .unwrap();
        let (out, _) = compile_circuit_qutrit(&src).unwrap();
        let r = out.count_gates();
        assert_eq!((r.count("rot"), r.count("phg"), r.two_qudit), (1, 1, 0));
    }

    #[test]
    fn random_four_qubit_circuits() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let mix = QubitGateMix { two_qubit_prob: 0.35, cnx_prob: 0.2, inv_cz: true };
        for _ in 0..10 {
            let src = random_qubit_circuit(&mut rng, 4, 8, mix);
            let (out, map) = compile_circuit_qutrit(&src).unwrap();
            let (cmp, leak) = compare_on_subspace(&src, &out, &map);
            assert!(cmp.classify(1e-9).is_equal(), "{cmp:?}");
            assert!(leak < 1e-12);
        }
    }
}
