//! The quantitative laws: dominance, proof entropy, gauge entropy, the
//! inefficiency coefficient, norms, description gaps, channel costs, and
//! the seed-carrier factorization criterion.
//!
//! Run with: cargo run --example diagnose

use recursorlab::diagnostics::{
    classify_observable, diagnose, inefficiency, rational_string, Classification,
};
use recursorlab::emit_report;
use recursorlab::term::Term;

fn main() {
    // the full report for k = 8, payload S(Z)
    let report = diagnose(8, 2, 5).unwrap();
    println!("{}", emit_report(&report.to_json()));

    // dominance: quadratic confession against linear residual work
    for k in [10u64, 100, 1000] {
        let r = diagnose(k, 1, 4).unwrap();
        println!(
            "k = {:4}: Con = {:>8}, Res = {:4}, Con/Res = {}",
            k,
            rational_string(&r.con),
            r.res,
            rational_string(&r.con_over_res.unwrap())
        );
    }

    // the inefficiency coefficient diverges along odd k
    for n in [1u64, 10, 100] {
        let k = 2 * n + 1;
        let ineff = inefficiency(k, 1).unwrap();
        println!("eta({}, 1) = {:.3} >= {}", k, ineff.eta, n);
    }

    // seed-only observables factor through the collapse; additive mass
    // does not
    let seeds = vec![Term::z(), Term::tower(1), Term::tower(3)];
    let seed_size = |b: &Term, _m: u64| b.size() as i64;
    let additive = |b: &Term, m: u64| (m * b.size()) as i64;
    for (name, obs) in [
        ("seed-size", &seed_size as &dyn Fn(&Term, u64) -> i64),
        ("additive-mass", &additive),
    ] {
        match classify_observable(obs, &seeds, 5).unwrap() {
            Classification::Factors { .. } => println!("{}: factors", name),
            Classification::DoesNotFactor { seed, i, j } => {
                println!(
                    "{}: does not factor (seed {}, multiplicities {} vs {})",
                    name, seed, i, j
                )
            }
        }
    }
}
