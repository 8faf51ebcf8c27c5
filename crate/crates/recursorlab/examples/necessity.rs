//! The record-emission oracle: every right-hand side in the minimal
//! positional syntax that both emits a frame and keeps an active site
//! duplicates the generator.
//!
//! Run with: cargo run --example necessity

use recursorlab::emit_report;
use recursorlab::necessity::{analyze_rhs, enumerate_and_verify, RhsTerm};

fn main() {
    // the duplicator's right-hand side: frame around an active site
    let rho = RhsTerm::Frame(Box::new(RhsTerm::Active));
    println!(
        "analyze G(y, F(x,y,n)):\n{}",
        emit_report(&analyze_rhs(&rho).to_json())
    );

    for depth in 1..=8 {
        let outcome = enumerate_and_verify(depth).unwrap();
        println!(
            "depth {}: {} terms enumerated, {} counterexamples",
            outcome.max_depth, outcome.enumerated, outcome.counterexamples
        );
    }
}
