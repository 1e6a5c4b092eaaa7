//! List the discriminants in a range that have an associated K3 surface and
//! mark the ones also satisfying the LLSvS condition.
//!
//! `cargo run --example enumerate_range -- 8 400`

use hassett_lab::conditions::{self, ProfileFilter, DEFAULT_A_BOUND};

fn main() {
    let mut args = std::env::args().skip(1).map(|s| s.parse::<u64>().expect("integer bound"));
    let min = args.next().unwrap_or(8);
    let max = args.next().unwrap_or(400);
    let filter = ProfileFilter { has_associated_k3: true, ..Default::default() };
    let hits = conditions::enumerate_profiles(min, max, &filter, DEFAULT_A_BOUND).unwrap();
    for p in &hits {
        let llsvs = p.llsvs.as_ref().and_then(|s| s.certificate()).is_some();
        println!("{:>6}{}", p.d, if llsvs { "  llsvs" } else { "" });
    }
    println!("{} discriminants with an associated K3 in [{min}, {max}]", hits.len());
}
