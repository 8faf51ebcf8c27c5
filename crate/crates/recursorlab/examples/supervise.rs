//! The supervisory loop: a confession T3 with the full exhaustion record
//! on the barrier-confined catalog, and a typed T4 abstention when the
//! catalog is confined below the required witness order.
//!
//! Run with: cargo run --example supervise

use recursorlab::emit_report;
use recursorlab::supervisor::{supervise_loop, Obligation, SupervisorCatalog, TypedOutputRecord};

fn main() {
    let obligation = Obligation::recursor(5);

    let catalog = SupervisorCatalog::barrier_confined();
    let record = supervise_loop(&obligation, &catalog).unwrap();
    println!(
        "barrier-confined run: {} in {} steps (bound {})",
        record.kind(),
        record.steps_consumed(),
        catalog.step_bound()
    );
    if let TypedOutputRecord::T3(r) = &record {
        println!(
            "  license {}, dimension {}, {} accumulated certificates, certificate length {:?}",
            r.license_name,
            r.dimension,
            r.certificates.len(),
            r.certificate_length
        );
    }

    // confined below the required order: the only honest output is T4
    let truncated = catalog.truncated_below(2);
    let record = supervise_loop(&obligation, &truncated).unwrap();
    println!(
        "\ntruncated run: {} with {} certificates",
        record.kind(),
        record.certificates().len()
    );
    println!("{}", emit_report(&record.to_json()));
}
