mod support;

use cdsclear::instances::{
    acyclic_cds_chain, irrational_cycle, multiple_equilibria, weakly_switched_cycle,
};
use cdsclear::io::{
    circuit_to_json, instance_to_json, parse_circuit, parse_instance, parse_vector, vector_to_json,
    InstanceDocument,
};
use cdsclear::model::RecoveryVector;
use cdsclear::numeric::rat;
use cdsclear::Error;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn instance_round_trip_is_identical() {
    let systems = [
        acyclic_cds_chain(),
        irrational_cycle(),
        multiple_equilibria(&rat(1, 100)),
        weakly_switched_cycle(),
    ];
    for sys in systems {
        let text = instance_to_json(&sys);
        let doc = InstanceDocument::from_json(&text).unwrap();
        let again = InstanceDocument::from_json(&doc.to_json()).unwrap();
        assert_eq!(doc, again);
        assert_eq!(
            doc,
            InstanceDocument::from_system(&parse_instance(&text).unwrap())
        );
    }
}

#[test]
fn random_instances_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..50 {
        let sys = support::random_system(&mut rng, 6, 10, false);
        let doc = InstanceDocument::from_system(&sys);
        let back = parse_instance(&doc.to_json()).unwrap();
        assert_eq!(InstanceDocument::from_system(&back), doc);
    }
}

#[test]
fn decimal_and_integer_values_parse_exactly() {
    let text = r#"{
        "banks": [
            {"id": "a", "external_assets": "0.25"},
            {"id": "b", "external_assets": 3}
        ],
        "contracts": [{"debtor": "a", "creditor": "b", "notional": "1/3"}]
    }"#;
    let sys = parse_instance(text).unwrap();
    assert_eq!(sys.external_assets(0), &rat(1, 4));
    assert_eq!(sys.external_assets(1), &rat(3, 1));
    assert_eq!(sys.contracts()[0].notional, rat(1, 3));
}

#[test]
fn parse_errors_report_line_numbers() {
    let text = "{\n  \"banks\": [\n    {\"id\": \"a\", \"external_assets\": \"1/0\"}\n  ]\n}";
    let err = parse_instance(text).unwrap_err();
    assert!(matches!(err, Error::Parse(_)), "{err:?}");
    assert!(err.to_string().contains("line 3"), "{err}");
}

#[test]
fn unknown_banks_and_fields_are_rejected() {
    let unknown_bank = r#"{"banks": [{"id": "a", "external_assets": "1"}],
        "contracts": [{"debtor": "a", "creditor": "z", "notional": "1"}]}"#;
    assert!(matches!(
        parse_instance(unknown_bank),
        Err(Error::UnknownBank(_))
    ));
    let extra_field = r#"{"banks": [], "colour": "blue"}"#;
    assert!(parse_instance(extra_field).is_err());
}

#[test]
fn vectors_round_trip_and_need_every_bank() {
    let sys = acyclic_cds_chain();
    let r = RecoveryVector::rational(vec![
        rat(2, 3),
        rat(1, 1),
        rat(2, 3),
        rat(1, 1),
        rat(1, 1),
        rat(1, 1),
    ])
    .unwrap();
    let text = vector_to_json(&sys, &r);
    assert_eq!(parse_vector(&text, &sys).unwrap(), r);
    let partial = r#"{"1": "2/3"}"#;
    assert!(matches!(
        parse_vector(partial, &sys),
        Err(Error::InvalidVector(_))
    ));
}

#[test]
fn circuits_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..20 {
        let c = support::random_source_circuit(&mut rng, 2, 6);
        let text = circuit_to_json(&c);
        let back = parse_circuit(&text).unwrap();
        assert_eq!(circuit_to_json(&back), text);
    }
}

#[test]
fn circuit_gates_must_be_defined_before_use() {
    let text = r#"{"inputs": [], "outputs": ["s"], "gates": [
        {"id": "s", "kind": "add", "operands": ["a", "a"]},
        {"id": "a", "kind": "const", "operands": [], "constant": "1/2"}
    ]}"#;
    assert!(matches!(parse_circuit(text), Err(Error::InvalidCircuit(_))));
}
