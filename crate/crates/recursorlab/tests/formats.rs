//! Interchange-format properties: fuzzed parser totality, TRS round trips
//! over random systems, and the typed-record round-trip property over 1000
//! generated records.

use proptest::prelude::*;
use recursorlab::json::{emit_report, parse_report, Json};
use recursorlab::orient::{CertificateKind, FailureCertificate, PumpEvidence};
use recursorlab::supervisor::{
    record_from_json, supervise_loop, Obligation, Residual, SupervisorCatalog, T3Record, T4Record,
    TypedOutputRecord,
};
use recursorlab::term::{Substitution, Symbol, Term};
use recursorlab::trs::{emit_trs_text, parse_trs, Rule, Trs};
use std::collections::BTreeMap;

fn xorshift(state: &mut u64) -> u64 {
    *state ^= *state << 13;
    *state ^= *state >> 7;
    *state ^= *state << 17;
    *state
}

proptest! {
    // fuzzed input either parses or produces a positioned error; no panic
    #[test]
    fn trs_parsing_is_total_on_garbage(text in "\\PC{0,200}") {
        let _ = parse_trs(&text);
    }

    #[test]
    fn trs_parsing_is_total_on_grammar_shaped_input(
        text in "\\(VAR( [a-z]{1,3}){0,3}\\) \\(RULES( [A-Za-z(),> -]{0,40})*\\)"
    ) {
        let _ = parse_trs(&text);
    }
}

fn random_rule_system(state: &mut u64) -> Trs {
    // small random systems over fresh lowercase symbols and x/y variables
    let n_rules = 1 + xorshift(state) % 3;
    let mut rules = Vec::new();
    for idx in 0..n_rules {
        let head = Symbol::new(&format!("f{}", xorshift(state) % 3), 2);
        let lhs = Term::app(head, vec![Term::var("x"), Term::var("y")]).unwrap();
        let rhs = match xorshift(state) % 4 {
            0 => Term::var("x"),
            1 => Term::var("y"),
            2 => Term::constant(&format!("c{}", xorshift(state) % 2)),
            _ => {
                let g = Symbol::new("g", 1);
                Term::app(g, vec![Term::var("x")]).unwrap()
            }
        };
        rules.push(Rule::new(&format!("r{}", idx), lhs, rhs).unwrap());
    }
    Trs::new("random", rules).unwrap()
}

#[test]
fn random_systems_round_trip_through_the_text_format() {
    let mut state = 0x6a09e667bb67ae85u64;
    for _ in 0..500 {
        let trs = random_rule_system(&mut state);
        let text = emit_trs_text(&trs);
        let reparsed = parse_trs(&text).unwrap();
        assert!(trs.same_rules(&reparsed), "{}", text);
        assert_eq!(emit_trs_text(&reparsed), text);
    }
}

fn random_certificate(state: &mut u64, id: u64) -> FailureCertificate {
    let pump = if xorshift(state).is_multiple_of(2) {
        Some(PumpEvidence {
            rule: "step".to_string(),
            substitution: Substitution::from([
                ("x", Term::z()),
                ("y", Term::tower(xorshift(state) % 5)),
            ]),
            lhs_value: (xorshift(state) % 1000).into(),
            rhs_value: (xorshift(state) % 1000 + 1000).into(),
            tower_height: Some(xorshift(state) % 9),
        })
    } else {
        None
    };
    FailureCertificate {
        entry_name: format!("entry-{}", id),
        level: (xorshift(state) % 3) as u8,
        kind: if pump.is_some() {
            CertificateKind::ConstructivePump
        } else {
            CertificateKind::Declared
        },
        pump,
        boundary_condition: format!("reason {}", xorshift(state) % 50),
    }
}

fn random_record(state: &mut u64) -> TypedOutputRecord {
    let certs: Vec<FailureCertificate> = (0..xorshift(state) % 6)
        .map(|i| random_certificate(state, i))
        .collect();
    let obligation = Json::obj([
        ("trs", Json::from("recursor")),
        ("k", Json::from(xorshift(state) % 100)),
    ]);
    if xorshift(state).is_multiple_of(2) {
        let licenses = [
            "ArtsGiesl2000",
            "SubtermCriterion",
            "LeeJonesBenAmram2001",
            "ArgumentFilteringDP",
            "construction-witness",
        ];
        TypedOutputRecord::T3(T3Record {
            obligation,
            steps_consumed: xorshift(state) % 40,
            license_name: licenses[(xorshift(state) % 5) as usize].to_string(),
            framework: "dependency-pair framework".to_string(),
            dimension: "pi_y".to_string(),
            claimed_level: (xorshift(state) % 3) as u8,
            residual: Residual::Construction {
                witness: Json::obj([
                    ("kind", Json::from("mpo")),
                    ("precedence", Json::arr([Json::from("F>G")])),
                ]),
            },
            certificates: certs,
            certificate_length: Some(xorshift(state) % 600),
            six_step_profile: if xorshift(state).is_multiple_of(2) {
                Some(recursorlab::supervisor::SIX_STEP_PROFILE.to_string())
            } else {
                None
            },
        })
    } else {
        let mut tried = BTreeMap::new();
        for level in 0..(xorshift(state) % 4) as u8 {
            tried.insert(level, vec![format!("name-{}", xorshift(state) % 7)]);
        }
        TypedOutputRecord::T4(T4Record {
            obligation,
            steps_consumed: xorshift(state) % 40,
            tried_languages: tried,
            boundary_condition: "kappaStar > 0".to_string(),
            unresolved_declaration: xorshift(state).is_multiple_of(2),
            certificates: certs,
            richer_language_ref: if xorshift(state).is_multiple_of(3) {
                Some("companion".to_string())
            } else {
                None
            },
        })
    }
}

#[test]
fn thousand_random_typed_records_round_trip() {
    // parse . emit . parse = parse, and re-emission is byte-identical
    let mut state = 0x510e527fade682d1u64;
    for i in 0..1000 {
        let record = random_record(&mut state);
        let emitted = emit_report(&record.to_json());
        let parsed_json = parse_report(&emitted).unwrap();
        let reparsed = record_from_json(&parsed_json).unwrap();
        let re_emitted = emit_report(&reparsed.to_json());
        assert_eq!(re_emitted, emitted, "record {}", i);
        let parsed_again = parse_report(&re_emitted).unwrap();
        assert_eq!(parsed_again, parsed_json, "record {}", i);
    }
}

#[test]
fn emitted_supervisor_records_reparse_structurally() {
    let obligation = Obligation::recursor(3);
    for catalog in [
        SupervisorCatalog::barrier_confined(),
        SupervisorCatalog::full(),
    ] {
        let record = supervise_loop(&obligation, &catalog).unwrap();
        let text = emit_report(&record.to_json());
        let parsed = record_from_json(&parse_report(&text).unwrap()).unwrap();
        assert_eq!(parsed.kind(), record.kind());
        assert_eq!(parsed.steps_consumed(), record.steps_consumed());
        assert_eq!(parsed.certificates().len(), record.certificates().len());
    }
}
