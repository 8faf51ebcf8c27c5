//! The six-member recursion family: among the two structurally complete
//! members, blocked for direct measures is exactly duplicating.
//!
//! Run with: cargo run --example family

use recursorlab::emit_report;
use recursorlab::family::{classification_to_json, classify_family};

fn main() {
    let verdicts = classify_family();
    for v in &verdicts {
        println!(
            "{:28} base={:5} step={:12} -> {}",
            v.member.name,
            v.member.has_base,
            v.member.step_kind.as_str(),
            v.class.as_str()
        );
    }
    println!("\nfull report:");
    println!("{}", emit_report(&classification_to_json(&verdicts)));
}
