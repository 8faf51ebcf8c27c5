//! The dependency-pair confession: one marked pair, four routes under four
//! licenses, and the constant-overhead cost account.
//!
//! Run with: cargo run --example confess

use recursorlab::confess::{
    ag_account, build_forgetting_witness, check_base_order, extract_dependency_pairs, rank_of,
    RankRoute,
};
use recursorlab::emit_report;
use recursorlab::rewrite::canonical_trace;
use recursorlab::term::Term;
use recursorlab::trs::Trs;

fn main() {
    let recursor = Trs::recursor();
    let problem = extract_dependency_pairs(&recursor);
    println!("dependency pairs:\n{}", emit_report(&problem.to_json()));

    let base_order = check_base_order(&problem);
    println!("\nbase order:\n{}", emit_report(&base_order.to_json()));

    // the four routes agree on the primitive fragment
    let trace = canonical_trace(&Term::z(), &Term::tower(1), 6).unwrap();
    println!("\nranks along the k = 6 trace:");
    for step in &trace.steps {
        let ranks: Vec<u64> = RankRoute::ALL
            .iter()
            .map(|&r| rank_of(r, &step.term))
            .collect();
        println!("  t{}: {:?}", step.index, ranks);
    }

    // four distinct licenses over the shared projection
    println!("\nforgetting witnesses:");
    for route in RankRoute::ALL {
        let w = build_forgetting_witness(route);
        println!("  {:20} -> {}", w.route.as_str(), w.license.name);
    }

    // license overhead is constant in the input counter height
    for k in [0u64, 5, 50, 500] {
        let account = ag_account(&recursor, k).unwrap();
        println!(
            "K = {:3}: bound {} + residual {} = certificate length {}",
            k, account.total_bound, account.residual, account.certificate_length
        );
    }
}
