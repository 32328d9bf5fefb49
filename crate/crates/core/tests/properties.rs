use std::f64::consts::PI;

use proptest::prelude::*;
use quditcc::ir::text::{parse_qubit_circuit, parse_qudit_program, serialize_qubit_circuit, serialize_qudit_program};
use quditcc::physical::{route_rotation, TransitionGraph};
use quditcc::ququart::{compile_circuit_ququart, PairingStrategy};
use quditcc::qutrit::compile_circuit_qutrit;
use quditcc::random::{random_qubit_circuit, random_qudit_circuit, QubitGateMix, QuditGateMix};
use quditcc::sim::{circuit_unitary, gate_matrix, ms_matrix, rot_matrix, zz_matrix, Matrix};
use quditcc::verify::{verify_compilation, Status, VerifyOptions};
use quditcc::QuditGate;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn distinct_pair(d: usize) -> impl Strategy<Value = (usize, usize)> {
    (0..d, 1..d).prop_map(move |(i, shift)| (i, (i + shift) % d))
}

fn angle() -> impl Strategy<Value = f64> {
    -2.0 * PI..2.0 * PI
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn qudit_text_round_trips(seed in any::<u64>(), m in 1usize..4, d in 2usize..7, count in 0usize..25) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = random_qudit_circuit(&mut rng, m, d, count, QuditGateMix::default());
        let text = serialize_qudit_program(&c, None);
        let back = parse_qudit_program(&text).unwrap();
        prop_assert_eq!(back.circuit, c);
        prop_assert!(back.embedding.is_none());
    }

    #[test]
    fn qubit_text_round_trips(seed in any::<u64>(), n in 1usize..6, layers in 0usize..8) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mix = QubitGateMix { two_qubit_prob: 0.4, cnx_prob: 0.2, inv_cz: true };
        let c = random_qubit_circuit(&mut rng, n, layers, mix);
        prop_assert_eq!(parse_qubit_circuit(&serialize_qubit_circuit(&c)).unwrap(), c);
    }

    #[test]
    fn dagger_inverts(seed in any::<u64>(), m in 1usize..3, d in 2usize..5, count in 0usize..15) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = random_qudit_circuit(&mut rng, m, d, count, QuditGateMix::default());
        let mut both = c.clone();
        both.append(&c.dagger().unwrap()).unwrap();
        let u = circuit_unitary(&both, 64).unwrap();
        prop_assert!(u.max_abs_diff(&Matrix::identity(u.dim())) < 1e-10);
        let twice = c.dagger().unwrap().dagger().unwrap();
        prop_assert_eq!(twice.gates(), c.gates());
        let phase_gap = (twice.global_phase() - c.global_phase()).rem_euclid(2.0 * PI);
        prop_assert!(phase_gap.min(2.0 * PI - phase_gap) < 1e-12);
    }

    #[test]
    fn rotation_normalization_preserves_matrix(d in 2usize..6, seed in any::<u64>(), phi in angle(), theta in angle()) {
        let i = seed as usize % d;
        let j = (i + 1 + (seed as usize / d) % (d - 1)) % d;
        let g = QuditGate::Rot { qudit: 0, i, j, phi, theta }.normalized().unwrap();
        prop_assert!(gate_matrix(&g, d).unwrap().max_abs_diff(&rot_matrix(d, i, j, phi, theta).unwrap()) < 1e-12);
    }

    #[test]
    fn two_qudit_normalization_preserves_matrix(
        ij in distinct_pair(5),
        kl in distinct_pair(5),
        phi in angle(),
        chi in angle(),
    ) {
        let d = 5;
        let ((i, j), (k, l)) = (ij, kl);
        let zz = QuditGate::Zz { a: 0, b: 1, i, j, k, l, chi }.normalized().unwrap();
        prop_assert!(gate_matrix(&zz, d).unwrap().max_abs_diff(&zz_matrix(d, i, j, k, l, chi).unwrap()) < 1e-12);
        let ms = QuditGate::Ms { a: 0, b: 1, i, j, k, l, phi, chi }.normalized();
        if (i > j) == (k > l) {
            let ms = ms.unwrap();
            prop_assert!(gate_matrix(&ms, d).unwrap().max_abs_diff(&ms_matrix(d, i, j, k, l, phi, chi).unwrap()) < 1e-12);
        } else {
            prop_assert!(ms.is_err());
        }
    }

    #[test]
    fn routing_on_random_connected_graphs(
        d in 3usize..7,
        parents in proptest::collection::vec(any::<usize>(), 6),
        extra in proptest::collection::vec((0usize..7, 0usize..7), 0..4),
        (i, j) in (0usize..7, 0usize..7),
        phi in angle(),
        theta in angle(),
    ) {
        let (i, j) = (i % d, j % d);
        prop_assume!(i != j);
        // A random spanning tree keeps the graph connected.
        let mut edges: Vec<(usize, usize)> = (1..d).map(|v| (parents[v - 1] % v, v)).collect();
        edges.extend(extra.into_iter().map(|(a, b)| (a % d, b % d)).filter(|(a, b)| a != b));
        let graph = TransitionGraph::new(d, edges).unwrap();
        let g = QuditGate::Rot { qudit: 0, i, j, phi, theta }.normalized().unwrap();
        let routed = route_rotation(&g, &graph).unwrap();
        for r in &routed {
            if let QuditGate::Rot { i, j, .. } = *r {
                prop_assert!(graph.has_edge(i, j));
            }
        }
        let mut c = quditcc::QuditCircuit::new(1, d).unwrap();
        c.extend(routed).unwrap();
        let u = circuit_unitary(&c, 64).unwrap();
        prop_assert!(u.max_abs_diff(&rot_matrix(d, i, j, phi, theta).unwrap()) < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn compiled_circuits_verify(seed in any::<u64>(), n in 2usize..6, layers in 1usize..10) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mix = QubitGateMix { two_qubit_prob: 0.4, cnx_prob: 0.2, inv_cz: true };
        let src = random_qubit_circuit(&mut rng, n, layers, mix);
        let opts = VerifyOptions::default();
        let (out, map) = compile_circuit_qutrit(&src).unwrap();
        prop_assert!(verify_compilation(&src, &out, &map, &opts).unwrap().is_equal());
        for strategy in [PairingStrategy::Sequential, PairingStrategy::Greedy] {
            let (out, map, _) = compile_circuit_ququart(&src, strategy).unwrap();
            prop_assert_eq!(verify_compilation(&src, &out, &map, &opts).unwrap().status, Status::Equal);
        }
    }
}
