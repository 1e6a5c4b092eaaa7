//! How the Fano variety of lines and the LLSvS eightfold relate to Hilbert
//! schemes of K3 surfaces, for the first few admissible discriminants.

use hassett_lab::conditions::{self, DEFAULT_A_BOUND};
use hassett_lab::motive::{self, MotiveStatus};

fn main() {
    for d in (8..=110u64).filter(|d| d % 6 == 0 || d % 6 == 2) {
        let p = conditions::profile(d, DEFAULT_A_BOUND).unwrap();
        let w = hassett_lab::family::build_witness_both(d).unwrap();
        let status = motive::classify(&p, Some(&w)).map(|r| r.0).unwrap_or(MotiveStatus::UNKNOWN);
        let fano = motive::fano_status(&p, status);
        let llsvs = motive::llsvs_status(&p, status);
        println!("{d:>4}  F(X): {:<24} L(X): {}", fano.relation.name(), llsvs.relation.name());
    }
}
