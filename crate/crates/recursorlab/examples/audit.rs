//! Auditing typed records: emitted records pass their own audit; deleting
//! exhaustion work or smuggling an untyped verdict string breaks it.
//!
//! Run with: cargo run --example audit

use recursorlab::emit_report;
use recursorlab::supervisor::{
    audit_record, exhaustion_gap, supervise_loop, Obligation, SupervisorCatalog, TypedOutputRecord,
};
use recursorlab::witness::Kappa;

fn main() {
    let obligation = Obligation::recursor(3);
    let catalog = SupervisorCatalog::barrier_confined().truncated_below(2);
    let record = supervise_loop(&obligation, &catalog).unwrap();
    let kappa = Kappa::UndefinedAboveTop; // nothing succeeds in the truncation

    let verdict = audit_record(&record, &catalog, kappa);
    println!(
        "self-audit: valid = {} against E = {}",
        verdict.valid,
        exhaustion_gap(&catalog, kappa)
    );

    if let TypedOutputRecord::T4(r) = record {
        // drop one certificate: insufficient exhaustion
        let mut mutated = r.clone();
        mutated.certificates.remove(0);
        let verdict = audit_record(&TypedOutputRecord::T4(mutated), &catalog, kappa);
        println!("\nafter deleting one certificate:");
        println!("{}", emit_report(&verdict.to_json()));

        // smuggle an unlicensed terminal verdict: internal META-HALT claim
        let mut mutated = r;
        mutated.boundary_condition = "this obligation is impossible".to_string();
        let verdict = audit_record(&TypedOutputRecord::T4(mutated), &catalog, kappa);
        println!("\nafter rewording the boundary condition:");
        println!("{}", emit_report(&verdict.to_json()));
    }
}
