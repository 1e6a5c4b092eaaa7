//! C_182 carries both a Bülles certificate and an LLSvS certificate, so
//! witnesses routed through it prove the motive statements for F(X) and
//! L(X) at the same time.

use hassett_lab::conditions::{self, DEFAULT_A_BOUND};
use hassett_lab::family;
use hassett_lab::motive;

fn main() {
    let p182 = conditions::profile(family::DUAL_K3_DISC, DEFAULT_A_BOUND).unwrap();
    println!("C_182: bulles {:?}", p182.bulles);
    println!("       llsvs  {:?}", p182.llsvs.as_ref().and_then(|s| s.certificate()));

    for d in [8, 20, 38, 74] {
        let p = conditions::profile(d, DEFAULT_A_BOUND).unwrap();
        let w = family::build_witness_both(d).unwrap();
        let (status, _) = motive::classify(&p, Some(&w)).unwrap();
        println!("C_{d}: {:?} via {:?}", status, w.all_discs);
        println!("  {}", serde_json::to_string(&motive::fano_status(&p, status)).unwrap());
        println!("  {}", serde_json::to_string(&motive::llsvs_status(&p, status)).unwrap());
    }
}
