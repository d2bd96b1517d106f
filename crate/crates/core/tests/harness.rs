use jost_forge::harness::{corpus, corpus_report, run_suite, RoundtripTolerances};

#[test]
fn corpus_round_trips() {
    let t = RoundtripTolerances::default();
    for e in corpus() {
        let rep = corpus_report(&e, &t);
        println!("{}", rep.to_text());
        assert!(rep.passed(), "{}", rep.to_text());
    }
}

#[test]
fn identities_suite() {
    let rep = run_suite("identities", 1e-10).unwrap();
    println!("{}", rep.to_text());
    assert!(rep.passed());
}

/// Frozen after the determinant oracle confirmed it; guards against silent
/// changes in the synthesis output.
#[test]
fn two_state_potential_matches_frozen_form() {
    use jost_forge::synthesis::{render, synthesize, Style};
    let e = corpus().into_iter().find(|e| e.name == "two-state").unwrap();
    let s = synthesize(&e.data).unwrap();
    let frozen = include_str!("../../../fixtures/two_state_u.txt");
    assert_eq!(render(&s.potential, Style::Text), frozen.trim());
}

#[test]
fn empty_data_trivially_passes() {
    let rep = jost_forge::harness::roundtrip("empty", &Default::default(), &RoundtripTolerances::default());
    assert!(rep.passed());
    assert_eq!(rep.checks.len(), 1);
}

#[test]
fn report_is_deterministic() {
    let a = run_suite("identities", 1e-10).unwrap();
    let b = run_suite("identities", 1e-10).unwrap();
    assert_eq!(a.to_json().to_string(), b.to_json().to_string());
    assert!(run_suite("nonsense", 1e-10).is_err());
}
