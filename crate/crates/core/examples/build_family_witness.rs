//! Build and re-verify the 19-divisor witness for a discriminant.
//!
//! `cargo run --example build_family_witness -- 38`

use hassett_lab::family;

fn main() {
    let d: u64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(8);
    let w = match family::build_witness(d, family::DEFAULT_K3_DISC) {
        Ok(w) => w,
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(1);
        }
    };
    println!("target C_{}, K3 link C_{}", w.target_d, w.k3_disc);
    println!("discriminants: {:?}", w.all_discs);
    for (t, c) in &w.certificates.tails {
        println!("  {t:>4} = 6*{}^2 + {}", c.m, c.offset);
    }
    println!("lattice rank {}, generic K3 Picard rank {}", w.lattice_rank(), w.generic_k3_picard_rank());
    let trace = family::verify_witness(&w).expect("freshly built witness verifies");
    for (i, step) in trace.steps.iter().enumerate() {
        println!("{}. [{}] {}", i + 1, step.anchor.tag(), step.statement);
    }
}
