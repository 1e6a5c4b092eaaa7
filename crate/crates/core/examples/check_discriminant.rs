//! Evaluate every condition on one discriminant.
//!
//! `cargo run --example check_discriminant -- 182`

use hassett_lab::conditions::{self, DEFAULT_A_BOUND};

fn main() {
    let d: u64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(14);
    let p = match conditions::profile(d, DEFAULT_A_BOUND) {
        Ok(p) => p,
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(2);
        }
    };
    println!("d = {d} (d mod 6 = {})", p.residue_mod_6);
    println!("  admissible             {}", p.admissible);
    println!("  associated K3          {}", p.has_associated_k3);
    match p.fano_hilb2 {
        Some(c) => println!("  F(X) = Hilb2           n = {}", c.n),
        None => println!("  F(X) = Hilb2           no"),
    }
    match p.bulles {
        Some(c) => println!("  Bülles                 f = {}, g = {}, n = {}", c.f, c.g, c.n),
        None => println!("  Bülles                 no"),
    }
    for (name, search) in [("Addington", &p.addington), ("LLSvS", &p.llsvs)] {
        match search.as_ref().and_then(|s| s.certificate()) {
            Some(c) => println!("  {name:<22} n = {}, a = {}", c.n, c.a),
            None => println!("  {name:<22} none with a <= {DEFAULT_A_BOUND}"),
        }
    }
    if let Some(t) = &p.tail {
        println!("  tail                   6*{}^2 + {}", t.m, t.offset);
    }
    assert!(p.certificates_verify());
}
