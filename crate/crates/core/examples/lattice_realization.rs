//! Realize several labellings in one positive definite lattice.
//!
//! `cargo run --example lattice_realization -- 12 14 24`

use hassett_lab::lattice;

fn main() {
    let mut discs: Vec<u64> = std::env::args().skip(1).map(|s| s.parse().expect("integer")).collect();
    if discs.is_empty() {
        discs = vec![12, 14, 24];
    }
    let g = match lattice::simultaneous_gram(&discs) {
        Ok(g) => g,
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(1);
        }
    };
    println!("{g}");
    println!("det = {}", lattice::det(&g));
    let minors: Vec<String> = lattice::leading_minors(&g).iter().map(|m| m.to_string()).collect();
    println!("leading minors: {}", minors.join(", "));
    for (i, d) in discs.iter().enumerate() {
        let disc = lattice::sublattice_discriminant(&g, i + 1).unwrap();
        println!("  <h^2, T_{}> has discriminant {disc} (wanted {d})", i + 1);
    }

    // Nine copies of d = 8 already break positivity.
    let err = lattice::simultaneous_gram(&[8; 9]).unwrap_err();
    println!("[8; 9]: {err}");
}
