//! Minimal witness order is catalog-relative: the barrier-confined catalog
//! lands at kappa = 2, the full catalog at kappa = 1, and the
//! non-duplicating variant at kappa = 0 with the boundary predicate off.
//!
//! Run with: cargo run --example kappa

use recursorlab::emit_report;
use recursorlab::orient::MeasureSpec;
use recursorlab::trs::Trs;
use recursorlab::witness::{
    barrier_confined_catalog, compute_kappa, full_catalog, AttemptSpec, CatalogEntry, Level,
};

fn main() {
    let recursor = Trs::recursor();

    let result = compute_kappa(&recursor, &barrier_confined_catalog()).unwrap();
    println!(
        "barrier-confined: kappa* = {}, OB = {}",
        result.kappa.as_string(),
        result.ob
    );

    let result = compute_kappa(&recursor, &full_catalog()).unwrap();
    println!(
        "full:             kappa* = {}, OB = {}",
        result.kappa.as_string(),
        result.ob
    );

    let linear = Trs::linear_recursor();
    let catalog = vec![CatalogEntry {
        level: Level::W0,
        name: "additive-all-ones".to_string(),
        attempt: AttemptSpec::Additive(MeasureSpec::uniform_additive(&linear)),
        expected_fail: false,
    }];
    let result = compute_kappa(&linear, &catalog).unwrap();
    println!(
        "linear variant:   kappa* = {}, OB = {}",
        result.kappa.as_string(),
        result.ob
    );

    println!("\nfull outcome table for the barrier-confined run:");
    let result = compute_kappa(&recursor, &barrier_confined_catalog()).unwrap();
    println!("{}", emit_report(&result.to_json()));
}
