//! The canonical trace of the duplicator and its closed-form laws.
//!
//! Run with: cargo run --example trace

use recursorlab::emit_report;
use recursorlab::rewrite::{canonical_trace, rewrite_once, verify_trace_law};
use recursorlab::term::Term;
use recursorlab::trs::Trs;

fn main() {
    let recursor = Trs::recursor();
    println!("the system:\n{}", recursor);

    // single steps: the unique redex is always the inner F
    let t0 = Term::f(Term::z(), Term::tower(1), Term::tower(2));
    let (t1, rule, pos) = rewrite_once(&recursor, &t0).unwrap();
    println!("{} --{}@{:?}--> {}\n", t0, rule, pos, t1);

    // the full trace for k = 4 with payload S(Z): counter down, payload up
    let trace = canonical_trace(&Term::z(), &Term::tower(1), 4).unwrap();
    println!("canonical trace, k = 4, payload S(Z):");
    for step in &trace.steps {
        println!(
            "  t{} = {}  (ctr {:?}, pay {}, #G {}, via {})",
            step.index, step.term, step.ctr, step.pay, step.g_frames, step.fired_rule
        );
    }
    println!("firings: {} (= k + 1)\n", trace.firings);

    // the trace law at scale: every index checked against the closed form
    let outcome = verify_trace_law(&Term::z(), &Term::tower(5), 500).unwrap();
    println!(
        "k = 500 with payload S^5(Z): {} firings, terminal #G = {}",
        outcome.firings, outcome.terminal_g
    );

    // one step as the CLI reports it
    let report = recursorlab::cli::run(&[
        "recursorlab".into(),
        "trace".into(),
        "--k".into(),
        "2".into(),
        "--payload".into(),
        "S(Z)".into(),
    ]);
    println!("\nCLI `trace --k 2 --payload S(Z)`:\n{}", report.stdout);
    let _ = emit_report;
}
