//! Classify the motive of the generic member of the family through C_d,
//! with and without a witness.
//!
//! `cargo run --example classify_motive -- 20`

use hassett_lab::{build_witness, classify, profile, DEFAULT_A_BOUND};

fn main() {
    let d: u64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(20);
    let p = profile(d, DEFAULT_A_BOUND).unwrap();
    let (status, _) = classify(&p, None).unwrap();
    println!("without witness: {status:?}");

    let w = build_witness(d, 14).unwrap();
    let (status, trace) = classify(&p, Some(&w)).unwrap();
    println!("with witness:    {status:?}");
    for step in &trace.steps {
        println!("  - {} [{}]", step.statement, step.anchor.tag());
    }
    let rho2 = w.lattice_rank() as u32;
    let cubic = hassett_lab::motive::chow_kunneth_cubic(rho2).unwrap();
    let after = hassett_lab::motive::substitute_k3(&cubic, rho2, rho2 - 1).unwrap();
    println!("h(X) = {cubic}");
    println!("     = {after}");
}
