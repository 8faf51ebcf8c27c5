//! Direct measures fail by pump; the polynomial and MPO escapes succeed.
//!
//! Run with: cargo run --example orient

use recursorlab::emit_report;
use recursorlab::orient::{
    default_poly_witness, orient_mpo, orient_poly, refute_additive, refute_affine, run_barrier,
    BarrierCatalog, MeasureSpec, PrecedenceSpec,
};
use recursorlab::trs::Trs;
use std::collections::BTreeMap;

fn main() {
    let recursor = Trs::recursor();

    // the additive pump: independent of the weights
    let pump = refute_additive(&MeasureSpec::uniform_additive(&recursor)).unwrap();
    println!(
        "additive all-ones pump: mu(lhs) = {} <= {} = mu(rhs)",
        pump.lhs_value, pump.rhs_value
    );

    // the affine pump grows a tower until the extra copy wins
    let mut entries = match MeasureSpec::uniform_affine(&recursor) {
        MeasureSpec::Affine(e) => e,
        _ => unreachable!(),
    };
    entries.get_mut("S").unwrap().constant = 50;
    let pump = refute_affine(&MeasureSpec::Affine(entries)).unwrap();
    println!(
        "affine with c_S = 50: tower height {} closes the gap",
        pump.tower_height.unwrap()
    );

    // the twelve-class barrier: 3 constructive pumps, 9 declared
    let certs = run_barrier(&BarrierCatalog::default(), &BTreeMap::new()).unwrap();
    println!("\nbarrier catalog ({} certificates):", certs.len());
    for cert in &certs {
        println!("  {:28} {}", cert.entry_name, cert.kind.as_str());
    }

    // the two escapes
    let poly = orient_poly(&recursor, &default_poly_witness()).unwrap();
    println!(
        "\npolynomial witness verdict:\n{}",
        emit_report(&poly.to_json())
    );
    let mpo = orient_mpo(&recursor, &PrecedenceSpec::parse("F>G").unwrap());
    println!("\nMPO (F > G) verdict:\n{}", emit_report(&mpo.to_json()));
}
