use proptest::prelude::*;
use stabcanon::circuit::{invert_circuit, two_qubit_depth, validate_layout};
use stabcanon::tableau::circuit_to_tableau;
use stabcanon::{Circuit, Error, Gate, Layout};

fn gate_strategy(n: usize) -> impl Strategy<Value = Gate> {
    let pair = (0..n, 1..n).prop_map(move |(a, d)| (a, (a + d) % n));
    prop_oneof![
        (0..n).prop_map(Gate::H),
        (0..n, 1u8..4).prop_map(|(q, k)| Gate::P(q, k)),
        pair.clone().prop_map(|(a, b)| Gate::Cnot(a, b)),
        pair.prop_map(|(a, b)| Gate::Cz(a, b)),
    ]
}

fn circuit_strategy() -> impl Strategy<Value = Circuit> {
    (2usize..7).prop_flat_map(|n| {
        prop::collection::vec(gate_strategy(n), 0..40).prop_map(move |gates| Circuit::from_gates(n, gates).unwrap())
    })
}

proptest! {
    #[test]
    fn text_round_trip(c in circuit_strategy()) {
        let back: Circuit = c.to_string().parse().unwrap();
        prop_assert_eq!(back, c);
    }

    #[test]
    fn inverse_cancels(c in circuit_strategy()) {
        let mut both = c.clone();
        both.extend(&invert_circuit(&c)).unwrap();
        prop_assert!(circuit_to_tableau(&both).unwrap().is_identity());
    }

    #[test]
    fn lowering_cz_keeps_the_tableau(c in circuit_strategy()) {
        let low = c.lower_cz();
        prop_assert!(low.gates.iter().all(|g| !matches!(g, Gate::Cz(..))));
        prop_assert_eq!(circuit_to_tableau(&low).unwrap(), circuit_to_tableau(&c).unwrap());
        prop_assert_eq!(two_qubit_depth(&low), two_qubit_depth(&c));
    }

    #[test]
    fn depth_is_at_most_count(c in circuit_strategy()) {
        prop_assert!(two_qubit_depth(&c) <= c.two_qubit_count());
    }
}

#[test]
fn aliases_and_comments() {
    let c: Circuit = "# header comment\nQUBITS 3\nS 0\nSDG 1   # trailing\nZ 2\nCNOT 0 1\ncz 1 2\n".parse().unwrap();
    assert_eq!(c.gates, vec![Gate::P(0, 1), Gate::P(1, 3), Gate::P(2, 2), Gate::Cnot(0, 1), Gate::Cz(1, 2)]);
    assert_eq!(c.to_string(), "QUBITS 3\nP 0\nPDG 1\nZ 2\nCX 0 1\nCZ 1 2\n");
}

#[test]
fn parse_errors_carry_line_numbers() {
    let cases = [
        ("H 0\n", 1),
        ("QUBITS 2\nH 0\nFOO 1\n", 3),
        ("QUBITS 2\nCX 0 0\n", 2),
        ("QUBITS 2\n\nCX 0 5\n", 3),
        ("QUBITS 2\nH 0 1\n", 2),
        ("QUBITS 2\nQUBITS 2\n", 2),
    ];
    for (text, line) in cases {
        match text.parse::<Circuit>() {
            Err(Error::Parse { line: l, .. }) => assert_eq!(l, line, "{text:?}"),
            other => panic!("{text:?}: {other:?}"),
        }
    }
    assert!("".parse::<Circuit>().is_err());
}

#[test]
fn empty_circuit_has_depth_zero() {
    let c: Circuit = "QUBITS 4\n".parse().unwrap();
    assert!(c.is_empty());
    assert_eq!(two_qubit_depth(&c), 0);
}

#[test]
fn layout_checks() {
    let c = Circuit::from_gates(3, [Gate::Cnot(0, 2)]).unwrap();
    assert!(!validate_layout(&c, Layout::Lnn));
    assert!(validate_layout(&c, Layout::AllToAll));
    let c = Circuit::from_gates(3, [Gate::Cnot(2, 1), Gate::H(0), Gate::Cz(0, 1)]).unwrap();
    assert!(validate_layout(&c, Layout::Lnn));
    assert_eq!(two_qubit_depth(&c), 2);
}

#[test]
fn push_rejects_bad_gates() {
    let mut c = Circuit::new(2);
    assert!(matches!(c.push(Gate::H(2)), Err(Error::QubitOutOfRange { qubit: 2, n: 2 })));
    assert!(matches!(c.push(Gate::Cz(1, 1)), Err(Error::RepeatedQubit(1))));
    assert!(c.is_empty());
}
