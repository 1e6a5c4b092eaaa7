//! Nineteen-discriminant witnesses for one-dimensional families inside a
//! Hassett divisor.
//!
//! A witness pairs the target divisor `C_d` with a divisor whose cubics have
//! an associated K3 surface and satisfy the Bülles condition (14 by default),
//! then fills up with the smallest tail discriminants `6m^2`, `6m^2 + 2`.
//! The nonemptiness of the corresponding intersection of divisors is a
//! theorem imported as-is; the witness only certifies its arithmetic
//! hypotheses.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::conditions::{self, BullesCertificate, ConditionError, TailCertificate};
use crate::lattice::{self, LatticeError};
use crate::motive::{Anchor, DerivationTrace};

/// Number of distinct labellings a witness carries.
pub const WITNESS_SIZE: usize = 19;
/// Largest intersection covered by the divisor-intersection theorem.
pub const MAX_INTERSECTION: usize = 20;
pub const DEFAULT_K3_DISC: u64 = 14;
/// Discriminant satisfying both the Bülles and the LLSvS conditions.
pub const DUAL_K3_DISC: u64 = 182;

/// Machine-readable name of the first invariant a witness violates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Violation {
    Inconsistent,
    Admissibility,
    K3Criterion,
    Bulles,
    Tail,
    Count,
    Positivity,
}

impl Violation {
    pub fn code(self) -> &'static str {
        match self {
            Violation::Inconsistent => "inconsistent",
            Violation::Admissibility => "admissibility",
            Violation::K3Criterion => "k3_criterion",
            Violation::Bulles => "bulles",
            Violation::Tail => "tail",
            Violation::Count => "count",
            Violation::Positivity => "positivity",
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error("d = {0} is not admissible")]
    NotAdmissible(u64),
    #[error("invalid K3 discriminant {disc}: {reason}")]
    InvalidK3Disc { disc: u64, reason: String },
    #[error("witness invalid ({violation}): {message}")]
    WitnessInvalid { violation: Violation, message: String },
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, FamilyError>;

impl From<ConditionError> for FamilyError {
    fn from(e: ConditionError) -> Self {
        match e {
            ConditionError::NotAdmissible(d) => FamilyError::NotAdmissible(d),
            other => FamilyError::InvalidInput(other.to_string()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct WitnessCertificates {
    pub k3: Option<BullesCertificate>,
    pub tails: BTreeMap<u64, TailCertificate>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyWitness {
    pub target_d: u64,
    pub k3_disc: u64,
    pub tail_discs: Vec<u64>,
    /// Sorted, deduplicated union of the target, the K3 disc and the tails.
    pub all_discs: Vec<u64>,
    pub certificates: WitnessCertificates,
}

fn union_of(target_d: u64, k3_disc: u64, tails: &[u64]) -> Vec<u64> {
    let set: BTreeSet<u64> = [target_d, k3_disc].into_iter().chain(tails.iter().copied()).collect();
    set.into_iter().collect()
}

impl FamilyWitness {
    /// Assembles a witness, deriving `all_discs` and whatever certificates
    /// can be found. No validation happens here; see [`verify_witness`].
    pub fn new(target_d: u64, k3_disc: u64, tail_discs: Vec<u64>) -> Self {
        let all_discs = union_of(target_d, k3_disc, &tail_discs);
        let k3 = conditions::bulles_search(k3_disc).ok().flatten();
        let tails = tail_discs
            .iter()
            .filter_map(|&t| Some((t, conditions::tail_certificate(t).ok().flatten()?)))
            .collect();
        FamilyWitness {
            target_d,
            k3_disc,
            tail_discs,
            all_discs,
            certificates: WitnessCertificates { k3, tails },
        }
    }

    /// Rank of the algebraic lattice of the generic member: `h^2` plus one
    /// class per labelling.
    pub fn lattice_rank(&self) -> usize {
        self.all_discs.len() + 1
    }

    /// Picard rank of the associated K3 surface of the generic member.
    pub fn generic_k3_picard_rank(&self) -> usize {
        self.all_discs.len()
    }

    pub fn gram(&self) -> std::result::Result<lattice::GramMatrix, LatticeError> {
        lattice::simultaneous_gram(&self.all_discs)
    }
}

/// Ascending stream `24, 26, 54, 56, 96, 98, ...` of tail discriminants.
pub fn tail_stream() -> impl Iterator<Item = u64> {
    (2u64..).flat_map(|m| [6 * m * m, 6 * m * m + 2])
}

fn check_k3_disc(k3_disc: u64) -> Result<BullesCertificate> {
    let invalid = |reason: &str| FamilyError::InvalidK3Disc {
        disc: k3_disc,
        reason: reason.to_string(),
    };
    if !conditions::is_admissible(k3_disc).map_err(|e| invalid(&e.to_string()))? {
        return Err(invalid("not admissible"));
    }
    if !conditions::has_associated_k3(k3_disc)? {
        return Err(invalid("no associated K3 surface (divisible by 4, 9 or an odd prime = 2 mod 3)"));
    }
    conditions::bulles_certificate(k3_disc)?
        .ok_or_else(|| invalid("fails the Bülles condition d = f^2 g, g dividing 2n^2 + 2n + 2"))
}

/// Builds the default witness: `d`, `k3_disc` and the smallest tails not
/// already present, until 19 distinct discriminants are collected.
pub fn build_witness(d: u64, k3_disc: u64) -> Result<FamilyWitness> {
    if !conditions::is_admissible(d)? {
        return Err(FamilyError::NotAdmissible(d));
    }
    check_k3_disc(k3_disc)?;
    let mut seen: BTreeSet<u64> = [d, k3_disc].into_iter().collect();
    let mut tails = Vec::new();
    for t in tail_stream() {
        if seen.len() == WITNESS_SIZE {
            break;
        }
        if seen.insert(t) {
            tails.push(t);
        }
    }
    let w = FamilyWitness::new(d, k3_disc, tails);
    verify_witness(&w)?;
    Ok(w)
}

/// Witness through `C_182`, which also unlocks the Fano and LLSvS transfers.
pub fn build_witness_both(d: u64) -> Result<FamilyWitness> {
    build_witness(d, DUAL_K3_DISC)
}

fn fail(violation: Violation, message: impl Into<String>) -> FamilyError {
    FamilyError::WitnessInvalid {
        violation,
        message: message.into(),
    }
}

fn list(ds: &[u64]) -> String {
    ds.iter().map(u64::to_string).collect::<Vec<_>>().join(", ")
}

/// Re-checks every witness invariant from scratch and returns the six-step
/// trace, or the first violation.
pub fn verify_witness(w: &FamilyWitness) -> Result<DerivationTrace> {
    let mut trace = DerivationTrace::default();

    let derived = union_of(w.target_d, w.k3_disc, &w.tail_discs);
    if derived != w.all_discs {
        return Err(fail(
            Violation::Inconsistent,
            format!("all_discs [{}] differs from the derived union [{}]", list(&w.all_discs), list(&derived)),
        ));
    }

    for &d in &w.all_discs {
        let ok = conditions::is_admissible(d).unwrap_or(false);
        if !ok {
            return Err(fail(Violation::Admissibility, format!("d = {d} is not admissible")));
        }
    }
    trace.push(
        format!(
            "all {} discriminants [{}] are admissible (d >= 8, d = 0 or 2 mod 6), so each C_d is a nonempty divisor",
            w.all_discs.len(),
            list(&w.all_discs)
        ),
        Anchor::HassettCriteria,
    );

    if !conditions::has_associated_k3(w.k3_disc).unwrap_or(false) {
        return Err(fail(
            Violation::K3Criterion,
            format!("d = {} is divisible by 4, 9 or an odd prime = 2 mod 3", w.k3_disc),
        ));
    }
    trace.push(
        format!("cubics in C_{} have an associated K3 surface", w.k3_disc),
        Anchor::HassettCriteria,
    );

    let Some(cert) = conditions::bulles_search(w.k3_disc).ok().flatten() else {
        return Err(fail(
            Violation::Bulles,
            format!("d = {} admits no f, g, n with d = f^2 g and g dividing 2n^2 + 2n + 2", w.k3_disc),
        ));
    };
    if let Some(stored) = &w.certificates.k3 {
        if !stored.verify(w.k3_disc) {
            return Err(fail(Violation::Bulles, format!("stored certificate {stored:?} does not verify")));
        }
    }
    trace.push(
        format!(
            "d = {} satisfies the Bülles condition with f = {}, g = {}, n = {}",
            w.k3_disc, cert.f, cert.g, cert.n
        ),
        Anchor::BullesCondition,
    );

    for &t in &w.tail_discs {
        let fresh = conditions::tail_certificate(t).ok().flatten();
        let stored_ok = w.certificates.tails.get(&t).map_or(true, |c| c.verify(t));
        if fresh.is_none() || !stored_ok {
            return Err(fail(Violation::Tail, format!("tail d = {t} is not of the form 6m^2 or 6m^2 + 2 with m >= 2")));
        }
    }
    trace.push(
        format!("each of the {} tail discriminants has the form 6m^2 or 6m^2 + 2 with m >= 2", w.tail_discs.len()),
        Anchor::DivisorIntersection,
    );

    let count = w.all_discs.len();
    if !(WITNESS_SIZE..=MAX_INTERSECTION).contains(&count) {
        return Err(fail(
            Violation::Count,
            format!("{count} distinct discriminants, need between {WITNESS_SIZE} and {MAX_INTERSECTION}"),
        ));
    }
    trace.push(
        format!(
            "{count} distinct divisors intersect nontrivially; the generic member has rk CH_2 = {}",
            count + 1
        ),
        Anchor::DivisorIntersection,
    );

    let gram = match lattice::simultaneous_gram(&w.all_discs) {
        Ok(g) => g,
        Err(e) => return Err(fail(Violation::Positivity, e.to_string())),
    };
    for (i, &d) in w.all_discs.iter().enumerate() {
        let sub = lattice::sublattice_discriminant(&gram, i + 1)
            .map_err(|e| fail(Violation::Positivity, e.to_string()))?;
        if sub != BigInt::from(d) {
            return Err(fail(Violation::Positivity, format!("labelling {i} has discriminant {sub}, expected {d}")));
        }
    }
    trace.push(
        format!(
            "rank {} Gram matrix realizing every labelling discriminant is positive definite (det = {})",
            gram.rank(),
            lattice::det(&gram)
        ),
        Anchor::DivisorIntersection,
    );

    Ok(trace)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn witness_for_plane_divisor() {
        let w = build_witness(8, DEFAULT_K3_DISC).unwrap();
        assert_eq!(
            w.all_discs,
            vec![8, 14, 24, 26, 54, 56, 96, 98, 150, 152, 216, 218, 294, 296, 384, 386, 486, 488, 600]
        );
        assert_eq!(w.tail_discs.len(), 17);
        let trace = verify_witness(&w).unwrap();
        assert_eq!(trace.steps.len(), 6);
        assert_eq!(w.lattice_rank(), 20);
    }

    #[test]
    fn coincidences_draw_extra_tails() {
        let w = build_witness(14, 14).unwrap();
        assert_eq!(w.all_discs.len(), 19);
        assert_eq!(w.tail_discs.len(), 18);
        assert_eq!(w.tail_discs[..2], [24, 26]);

        let w = build_witness(26, 26).unwrap();
        assert_eq!(w.all_discs.len(), 19);
        assert!(!w.tail_discs.contains(&26));
        assert_eq!(w.tail_discs.len(), 18);

        let w = build_witness(24, 14).unwrap();
        assert!(!w.tail_discs.contains(&24));
        assert_eq!(w.all_discs.len(), 19);
    }

    #[test]
    fn dual_construction() {
        let w = build_witness_both(8).unwrap();
        assert!(w.all_discs.contains(&182));
        let w = build_witness_both(182).unwrap();
        assert_eq!(w.all_discs.len(), 19);
        assert_eq!(w.tail_discs.len(), 18);
        assert_eq!(build_witness_both(7), Err(FamilyError::NotAdmissible(7)));
    }

    #[test]
    fn invalid_k3_discs() {
        assert!(matches!(build_witness(8, 8), Err(FamilyError::InvalidK3Disc { disc: 8, .. })));
        assert!(matches!(build_witness(8, 10), Err(FamilyError::InvalidK3Disc { disc: 10, .. })));
        assert!(matches!(build_witness(8, 30), Err(FamilyError::InvalidK3Disc { disc: 30, .. })));
        assert!(build_witness(8, 38).is_ok());
    }

    fn violation(w: &FamilyWitness) -> Violation {
        match verify_witness(w) {
            Err(FamilyError::WitnessInvalid { violation, .. }) => violation,
            other => panic!("expected a violation, got {other:?}"),
        }
    }

    #[test]
    fn tampered_witnesses() {
        let w = build_witness(8, 14).unwrap();

        let short = FamilyWitness::new(8, 14, w.tail_discs[..10].to_vec());
        assert_eq!(violation(&short), Violation::Count);

        let bad_k3 = FamilyWitness::new(8, 8, w.tail_discs.clone());
        assert_eq!(violation(&bad_k3), Violation::K3Criterion);

        let mut stale = w.clone();
        stale.tail_discs.pop();
        assert_eq!(violation(&stale), Violation::Inconsistent);

        let mut not_tail = w.tail_discs.clone();
        not_tail[0] = 20;
        assert_eq!(violation(&FamilyWitness::new(8, 14, not_tail)), Violation::Tail);

        let mut inadmissible = w.tail_discs.clone();
        inadmissible[0] = 10;
        assert_eq!(violation(&FamilyWitness::new(8, 14, inadmissible)), Violation::Admissibility);

        let mut too_many = w.tail_discs.clone();
        too_many.extend([726, 728]);
        assert_eq!(violation(&FamilyWitness::new(8, 14, too_many)), Violation::Count);
    }

    #[test]
    fn tail_stream_prefix() {
        let first: Vec<u64> = tail_stream().take(6).collect();
        assert_eq!(first, vec![24, 26, 54, 56, 96, 98]);
    }

    #[test]
    fn deterministic() {
        assert_eq!(build_witness(50, 14).unwrap(), build_witness(50, 14).unwrap());
    }

    #[test]
    fn json_round_trip() {
        let w = build_witness(8, 14).unwrap();
        let s = serde_json::to_string(&w).unwrap();
        let back: FamilyWitness = serde_json::from_str(&s).unwrap();
        assert_eq!(back, w);
        let v: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert!(v["certificates"]["tails"]["24"].is_object());
    }
}
