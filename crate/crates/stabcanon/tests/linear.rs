use proptest::prelude::*;
use stabcanon::circuit::{two_qubit_depth, validate_layout};
use stabcanon::linear::{compose, synth_cnot_gauss, synth_cnot_lnn, LinearBackend};
use stabcanon::oracle::{bfs_optimal, unpack_matrix, GateSet, TargetGroup};
use stabcanon::{Error, Layout, LinearMatrix};

/// Random invertible matrix as a product of random row operations.
fn invertible_strategy(max_n: usize) -> impl Strategy<Value = LinearMatrix> {
    (1..=max_n).prop_flat_map(|n| {
        prop::collection::vec((0..n, 0..n), 0..4 * n * n).prop_map(move |ops| {
            let mut m = LinearMatrix::identity(n);
            for (a, b) in ops {
                if a != b {
                    m.apply_cnot(a, b);
                }
            }
            m
        })
    })
}

proptest! {
    #[test]
    fn gauss_round_trip(g in invertible_strategy(16)) {
        let c = synth_cnot_gauss(&g).unwrap();
        prop_assert_eq!(LinearMatrix::from_circuit(&c).unwrap(), g.clone());
        prop_assert!(c.len() <= g.n * g.n);
    }

    #[test]
    fn lnn_round_trip_and_depth(g in invertible_strategy(32)) {
        let c = synth_cnot_lnn(&g).unwrap();
        prop_assert_eq!(LinearMatrix::from_circuit(&c).unwrap(), g.clone());
        prop_assert!(validate_layout(&c, Layout::Lnn));
        prop_assert!(two_qubit_depth(&c) <= 5 * g.n);
    }

    #[test]
    fn inverse_and_compose(g in invertible_strategy(12)) {
        let inv = g.inverse().unwrap();
        prop_assert!(compose(&g, &inv).unwrap().is_identity());
        prop_assert!(compose(&inv, &g).unwrap().is_identity());
        for x in 0..(1u64 << g.n).min(256) {
            prop_assert_eq!(inv.apply_vec(g.apply_vec(x)), x);
        }
    }

    #[test]
    fn text_round_trip(g in invertible_strategy(10)) {
        let back: LinearMatrix = g.to_string().parse().unwrap();
        prop_assert_eq!(back, g);
    }
}

#[test]
fn all_of_gl3_within_bounds() {
    let bfs = bfs_optimal(3, GateSet::CnotOnly, TargetGroup::Linear).unwrap();
    let mut seen = 0;
    for key in 0..1usize << 9 {
        let g = unpack_matrix(3, key);
        assert_eq!(g.is_invertible(), bfs.cost(key).is_some(), "{key:#b}");
        if !g.is_invertible() {
            continue;
        }
        seen += 1;
        for backend in [LinearBackend::Gauss, LinearBackend::Lnn] {
            let c = backend.synth(&g).unwrap();
            assert_eq!(LinearMatrix::from_circuit(&c).unwrap(), g);
            assert!(c.len() >= bfs.cost(key).unwrap() as usize);
        }
        assert!(two_qubit_depth(&synth_cnot_lnn(&g).unwrap()) <= 15);
    }
    assert_eq!(seen, 168);
}

#[test]
fn singular_is_rejected() {
    assert_eq!(LinearMatrix::from_rows(3, vec![0b011, 0b110, 0b101]), Err(Error::Singular));
    let g = LinearMatrix { n: 3, rows: vec![0b011, 0b110, 0b101] };
    assert!(!g.is_invertible());
    assert_eq!(synth_cnot_gauss(&g), Err(Error::Singular));
    assert_eq!(synth_cnot_lnn(&g), Err(Error::Singular));
}

#[test]
fn identity_and_reversal() {
    for n in 1..=16 {
        assert!(synth_cnot_lnn(&LinearMatrix::identity(n)).unwrap().is_empty());
        let c = synth_cnot_lnn(&LinearMatrix::reversal(n)).unwrap();
        assert_eq!(LinearMatrix::from_circuit(&c).unwrap(), LinearMatrix::reversal(n));
        assert!(two_qubit_depth(&c) <= 2 * n + 2);
    }
}

#[test]
fn parse_errors() {
    assert!("2\n10\n".parse::<LinearMatrix>().is_err());
    assert!("2\n10\n0x\n".parse::<LinearMatrix>().is_err());
    assert!("2\n101\n01\n".parse::<LinearMatrix>().is_err());
}
