use proptest::prelude::*;
use stabcanon::circuit::{two_qubit_depth, validate_layout};
use stabcanon::generate::{random_clifford_word, random_pc_circuit};
use stabcanon::linear::LinearBackend;
use stabcanon::oracle::{dense_unitary, unitary_equal, PhaseMode};
use stabcanon::pipeline::{
    canonicalize, compile_lnn, decompose_11, fold_to_8, lnn_depth_bound, Stage, StagedForm, Template,
};
use stabcanon::tableau::{circuit_to_tableau, random_clifford};
use stabcanon::{Circuit, Error, Gate, Layout, LinearMatrix, Tableau};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn every_form_is_tableau_equal(n in 1usize..10, seed in any::<u64>()) {
        let t = random_clifford(n, seed).unwrap();
        let f11 = decompose_11(&t).unwrap();
        prop_assert_eq!(f11.template(), Some(Template::Eleven));
        prop_assert_eq!(&f11.tableau().unwrap(), &t);
        let f8 = fold_to_8(&f11).unwrap();
        prop_assert_eq!(f8.template(), Some(Template::Eight));
        prop_assert!(f8.non_identity_stages() <= 8);
        prop_assert_eq!(&f8.tableau().unwrap(), &t);
        let c = compile_lnn(&f8).unwrap();
        prop_assert!(validate_layout(&c, Layout::Lnn));
        prop_assert!(two_qubit_depth(&c) <= lnn_depth_bound(n));
        prop_assert_eq!(&circuit_to_tableau(&c).unwrap(), &t);
    }

    #[test]
    fn dense_equal_up_to_global_phase(n in 1usize..7, seed in any::<u64>()) {
        let c = random_clifford_word(n, 12 * n, seed).unwrap();
        let (_, line) = canonicalize(&c).unwrap();
        let eq = unitary_equal(&dense_unitary(&c).unwrap(), &dense_unitary(&line).unwrap(), PhaseMode::UpToGlobalPhase);
        prop_assert!(eq.unwrap());
    }

    #[test]
    fn hadamard_free_input_keeps_the_h_layers_empty(n in 1usize..8, rounds in 1usize..5, seed in any::<u64>()) {
        let c = random_pc_circuit(n, rounds, seed).unwrap();
        let (f8, _) = canonicalize(&c).unwrap();
        prop_assert_eq!(&f8.stages[0], &Stage::H(0));
        prop_assert_eq!(&f8.stages[4], &Stage::H(0));
    }
}

#[test]
fn identity_gives_empty_output() {
    for n in 1..6 {
        let (f8, line) = canonicalize(&Circuit::new(n)).unwrap();
        assert_eq!(f8.non_identity_stages(), 0);
        assert!(line.is_empty());
        assert_eq!(two_qubit_depth(&line), 0);
    }
}

#[test]
fn single_cnot_is_only_linear() {
    let t = circuit_to_tableau(&Circuit::from_gates(3, [Gate::Cnot(0, 2)]).unwrap()).unwrap();
    let f = decompose_11(&t).unwrap();
    assert!(f.stages.iter().all(|s| s.is_identity() || matches!(s, Stage::C(_))));
    assert_eq!(f.tableau().unwrap(), t);
    let f8 = fold_to_8(&f).unwrap();
    assert!(f8.stages.iter().all(|s| s.is_identity() || matches!(s, Stage::C(_))));
}

#[test]
fn only_first_linear_stage() {
    let g = LinearMatrix::from_rows(3, vec![0b011, 0b010, 0b111]).unwrap();
    let mut stages = vec![Stage::H(0), Stage::C(g.clone())];
    for tag in ["P", "C", "P", "C", "H", "P", "C", "P", "C"] {
        stages.push(match tag {
            "P" => Stage::P(vec![0; 3]),
            "C" => Stage::C(LinearMatrix::identity(3)),
            _ => Stage::H(0),
        });
    }
    let f8 = fold_to_8(&StagedForm { n: 3, stages }).unwrap();
    assert_eq!(f8.stages[1], Stage::C(g));
    assert_eq!(f8.non_identity_stages(), 1);
}

#[test]
fn random_eight_qubit_circuit() {
    let c = random_clifford_word(8, 200, 17).unwrap();
    let (f8, line) = canonicalize(&c).unwrap();
    assert!(two_qubit_depth(&line) <= 108);
    assert!(validate_layout(&line, Layout::Lnn));
    let t = circuit_to_tableau(&c).unwrap();
    assert_eq!(circuit_to_tableau(&line).unwrap(), t);
    assert_eq!(f8.tableau().unwrap(), t);
}

#[test]
fn depth_bound_for_seven_qubits() {
    for seed in 0..100 {
        let t = random_clifford(7, seed).unwrap();
        let c = compile_lnn(&fold_to_8(&decompose_11(&t).unwrap()).unwrap()).unwrap();
        assert!(two_qubit_depth(&c) <= 94);
    }
}

#[test]
fn template_mismatch() {
    let f8 = fold_to_8(&decompose_11(&Tableau::identity(2)).unwrap()).unwrap();
    assert!(matches!(fold_to_8(&f8), Err(Error::Template(_))));
    let f11 = decompose_11(&Tableau::identity(2)).unwrap();
    assert!(matches!(compile_lnn(&f11), Err(Error::Template(_))));
    let odd = StagedForm { n: 2, stages: vec![Stage::H(0)] };
    assert_eq!(odd.template(), None);
}

#[test]
fn invalid_tableau_rejected() {
    let mut t = Tableau::identity(2);
    t.xs[0] = t.zs[0];
    assert!(decompose_11(&t).is_err());
}

#[test]
fn payload_size_is_three_n_squared_plus_linear() {
    for n in 1..12 {
        let f8 = fold_to_8(&decompose_11(&random_clifford(n, 1).unwrap()).unwrap()).unwrap();
        assert_eq!(f8.payload_bits(), 3 * n * n + 5 * n);
    }
}

#[test]
fn dump_and_parse() {
    let c = random_clifford_word(5, 60, 4).unwrap();
    let (f8, _) = canonicalize(&c).unwrap();
    let text = f8.dump();
    assert!(text.starts_with("N: 5\nH:"));
    let back: StagedForm = text.parse().unwrap();
    assert_eq!(back, f8);
    assert!("H: 0\n".parse::<StagedForm>().is_err());
    assert!("N: 2\nQ: 1\n".parse::<StagedForm>().is_err());
}

#[test]
fn stage_circuits_concatenate() {
    let t = random_clifford(4, 3).unwrap();
    let f8 = fold_to_8(&decompose_11(&t).unwrap()).unwrap();
    let parts = f8.stage_circuits(LinearBackend::Lnn).unwrap();
    assert_eq!(parts.len(), 8);
    let mut all = Circuit::new(4);
    for p in &parts {
        all.extend(p).unwrap();
    }
    assert_eq!(circuit_to_tableau(&all).unwrap(), t);
}

#[test]
fn czhat_stage_lowers_with_reversal() {
    let p = stabcanon::czsynth::CzLayer::complete(4).phase_poly();
    let hat = Stage::CzHat { poly: p.clone(), reversed: true }.to_circuit(4, LinearBackend::Gauss).unwrap();
    let mut want = Stage::Cz(p).to_circuit(4, LinearBackend::Gauss).unwrap();
    want.extend(&stabcanon::linear::synth_cnot_gauss(&LinearMatrix::reversal(4)).unwrap()).unwrap();
    assert_eq!(circuit_to_tableau(&hat).unwrap(), circuit_to_tableau(&want).unwrap());
}
