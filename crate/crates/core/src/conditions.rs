//! Discriminant conditions for Hassett divisors `C_d`.
//!
//! Each predicate returns a certificate that can be re-checked by plain
//! substitution, and [`profile`] bundles all of them for one `d`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{self, ArithError, PrimeFactorization};

/// Default search bound on `a` for the Pell-type conditions.
pub const DEFAULT_A_BOUND: u64 = 100;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConditionError {
    #[error(transparent)]
    InvalidInput(#[from] ArithError),
    #[error("d = {0} is not admissible (need d >= 8 and d = 0, 2 mod 6)")]
    NotAdmissible(u64),
    #[error("invalid range [{min}, {max}]")]
    InvalidRange { min: u64, max: u64 },
    #[error("a_bound must be at least 1")]
    InvalidBound,
    #[error("arithmetic overflow while searching d = {0}")]
    Overflow(u64),
}

pub type Result<T> = std::result::Result<T, ConditionError>;

/// `d = 2(n^2 + n + 1)`: the Fano variety of lines is a Hilbert square.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FanoCertificate {
    pub n: u64,
}

impl FanoCertificate {
    pub fn verify(&self, d: u64) -> bool {
        let n = self.n as u128;
        self.n >= 2 && 2 * (n * n + n + 1) == d as u128
    }
}

/// `d = f^2 g` with `g | 2n^2 + 2n + 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BullesCertificate {
    pub f: u64,
    pub g: u64,
    pub n: u64,
}

impl BullesCertificate {
    pub fn verify(&self, d: u64) -> bool {
        let (f, g, n) = (self.f as u128, self.g as u128, self.n as u128);
        f >= 1 && g >= 1 && n < g && f * f * g == d as u128 && (2 * n * n + 2 * n + 2) % g == 0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PellKind {
    /// `d a^2 = 2n^2 + 2n + 2`
    Addington,
    /// `d a^2 = 6n^2 + 6n + 2`
    Llsvs,
}

impl PellKind {
    fn value(self, n: u128) -> u128 {
        match self {
            PellKind::Addington => 2 * n * n + 2 * n + 2,
            PellKind::Llsvs => 6 * n * n + 6 * n + 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PellCertificate {
    pub kind: PellKind,
    pub n: u64,
    pub a: u64,
}

impl PellCertificate {
    pub fn verify(&self, d: u64) -> bool {
        let a = self.a as u128;
        self.n >= 1
            && self.a >= 1
            && (d as u128)
                .checked_mul(a * a)
                .is_some_and(|lhs| lhs == self.kind.value(self.n as u128))
    }
}

/// Result of a bounded Pell-type search. Exhausting the bound is not a proof
/// that no solution exists.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum PellSearch {
    Found(PellCertificate),
    BoundExhausted { a_bound: u64 },
}

impl PellSearch {
    pub fn certificate(&self) -> Option<&PellCertificate> {
        match self {
            PellSearch::Found(c) => Some(c),
            PellSearch::BoundExhausted { .. } => None,
        }
    }
}

/// `d = 6 m^2 + offset`, `m ≥ 2`, `offset ∈ {0, 2}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TailCertificate {
    pub m: u64,
    pub offset: u64,
    pub prime_factorization_of_m: PrimeFactorization,
}

impl TailCertificate {
    pub fn verify(&self, d: u64) -> bool {
        let m = self.m as u128;
        self.m >= 2
            && matches!(self.offset, 0 | 2)
            && self.prime_factorization_of_m.value == self.m
            && self.prime_factorization_of_m.is_valid()
            && 6 * m * m + self.offset as u128 == d as u128
    }
}

/// Every condition evaluated for a single discriminant.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiscriminantProfile {
    pub d: u64,
    pub residue_mod_6: u64,
    pub admissible: bool,
    pub has_associated_k3: bool,
    pub fano_hilb2: Option<FanoCertificate>,
    /// Raw condition, without the associated-K3 requirement.
    pub bulles: Option<BullesCertificate>,
    /// Bülles condition together with an associated K3 surface; this is
    /// what the transcendental motive transfer actually needs.
    pub bulles_with_k3: bool,
    pub addington: Option<PellSearch>,
    pub llsvs: Option<PellSearch>,
    pub tail: Option<TailCertificate>,
    pub contains_plane_divisor: bool,
    pub c14_member_rational: bool,
}

impl DiscriminantProfile {
    /// Re-checks every stored certificate against `d`.
    pub fn certificates_verify(&self) -> bool {
        let d = self.d;
        self.fano_hilb2.as_ref().map_or(true, |c| c.verify(d))
            && self.bulles.as_ref().map_or(true, |c| c.verify(d))
            && [&self.addington, &self.llsvs]
                .into_iter()
                .flatten()
                .filter_map(PellSearch::certificate)
                .all(|c| c.verify(d))
            && self.tail.as_ref().map_or(true, |c| c.verify(d))
    }
}

fn check_d(d: u64) -> Result<u64> {
    Ok(arith::check_range(d)?)
}

fn require_admissible(d: u64) -> Result<()> {
    if is_admissible(d)? {
        Ok(())
    } else {
        Err(ConditionError::NotAdmissible(d))
    }
}

/// `C_d` is nonempty exactly when `d ≥ 8` and `d ≡ 0, 2 (mod 6)`.
pub fn is_admissible(d: u64) -> Result<bool> {
    check_d(d)?;
    Ok(d >= 8 && matches!(d % 6, 0 | 2))
}

/// Admissible and divisible by neither 4, 9, nor an odd prime `p ≡ 2 (mod 3)`.
pub fn has_associated_k3(d: u64) -> Result<bool> {
    if !is_admissible(d)? {
        return Ok(false);
    }
    Ok(k3_criterion(&arith::factorize(d)?))
}

fn k3_criterion(fac: &PrimeFactorization) -> bool {
    fac.exponent_of(2) < 2
        && fac.exponent_of(3) < 2
        && fac.primes().all(|p| p == 2 || p % 3 != 2)
}

pub fn fano_hilb2(d: u64) -> Result<Option<FanoCertificate>> {
    check_d(d)?;
    // 2d - 3 = (2n + 1)^2
    let Some(disc) = (2 * d as u128).checked_sub(3) else {
        return Ok(None);
    };
    Ok(arith::exact_sqrt(disc)
        .map(|r| ((r - 1) / 2) as u64)
        .map(|n| FanoCertificate { n })
        .filter(|c| c.n >= 2 && c.verify(d)))
}

/// Finds the Bülles certificate with smallest `f`, then smallest `n`.
///
/// The search is exact: `2(n^2 + n + 1)` is twice an odd number, so `g`
/// must not be divisible by 4 and the condition reduces to
/// `h | n^2 + n + 1` with `h` the odd part of `g`. Roots of that congruence
/// are assembled by CRT, so the answer equals a full scan of `n ∈ [0, g)`.
pub fn bulles_certificate(d: u64) -> Result<Option<BullesCertificate>> {
    require_admissible(d)?;
    bulles_search(d)
}

/// [`bulles_certificate`] without the admissibility precondition.
pub fn bulles_search(d: u64) -> Result<Option<BullesCertificate>> {
    let fac = arith::factorize(d)?;
    // square divisors f^2 | d, enumerated through f | sqrt of the square part
    let square_root_part = PrimeFactorization {
        value: fac
            .factors
            .iter()
            .map(|pp| pp.prime.pow(pp.exponent / 2))
            .product(),
        factors: fac
            .factors
            .iter()
            .filter(|pp| pp.exponent >= 2)
            .map(|pp| arith::PrimePower {
                prime: pp.prime,
                exponent: pp.exponent / 2,
            })
            .collect(),
    };
    for f in arith::divisors_of(&square_root_part) {
        let g = d / (f * f);
        if g % 4 == 0 {
            continue;
        }
        let h = if g % 2 == 0 { g / 2 } else { g };
        let Some(n) = arith::smallest_norm_form_root(&arith::factorize(h)?) else {
            continue;
        };
        let cert = BullesCertificate { f, g, n };
        debug_assert!(cert.verify(d));
        return Ok(Some(cert));
    }
    Ok(None)
}

fn pell_search(kind: PellKind, d: u64, a_bound: u64) -> Result<PellSearch> {
    require_admissible(d)?;
    if a_bound == 0 {
        return Err(ConditionError::InvalidBound);
    }
    let overflow = || ConditionError::Overflow(d);
    for a in 1..=a_bound {
        let a2 = (a as u128).checked_mul(a as u128).ok_or_else(overflow)?;
        let da2 = (d as u128).checked_mul(a2).ok_or_else(overflow)?;
        // addington: 2 d a^2 - 3 = (2n + 1)^2
        // llsvs:     6 d a^2 - 3 = (6n + 3)^2
        let (scale, shift, step) = match kind {
            PellKind::Addington => (2u128, 1u128, 2u128),
            PellKind::Llsvs => (6, 3, 6),
        };
        let Some(rhs) = da2.checked_mul(scale).and_then(|v| v.checked_sub(3)) else {
            return Err(overflow());
        };
        if let Some(s) = arith::exact_sqrt(rhs) {
            if s > shift && (s - shift) % step == 0 {
                let n = u64::try_from((s - shift) / step).map_err(|_| overflow())?;
                let cert = PellCertificate { kind, n, a };
                if cert.verify(d) {
                    return Ok(PellSearch::Found(cert));
                }
            }
        }
    }
    Ok(PellSearch::BoundExhausted { a_bound })
}

/// Searches `d a^2 = 2n^2 + 2n + 2` for `a = 1..=a_bound`.
pub fn addington_certificate(d: u64, a_bound: u64) -> Result<PellSearch> {
    pell_search(PellKind::Addington, d, a_bound)
}

/// Searches `d a^2 = 6n^2 + 6n + 2` for `a = 1..=a_bound`.
pub fn llsvs_certificate(d: u64, a_bound: u64) -> Result<PellSearch> {
    pell_search(PellKind::Llsvs, d, a_bound)
}

pub fn tail_certificate(d: u64) -> Result<Option<TailCertificate>> {
    check_d(d)?;
    for offset in [0u64, 2] {
        if d < offset || (d - offset) % 6 != 0 {
            continue;
        }
        if let Some(m) = arith::exact_sqrt(((d - offset) / 6) as u128) {
            let m = m as u64;
            if m >= 2 {
                return Ok(Some(TailCertificate {
                    m,
                    offset,
                    prime_factorization_of_m: arith::factorize(m)?,
                }));
            }
        }
    }
    Ok(None)
}

/// Runs every predicate on `d` and assembles a profile. Non-admissible `d`
/// yield a profile with every flag false and every certificate absent.
pub fn profile(d: u64, a_bound: u64) -> Result<DiscriminantProfile> {
    check_d(d)?;
    if a_bound == 0 {
        return Err(ConditionError::InvalidBound);
    }
    let admissible = is_admissible(d)?;
    let mut p = DiscriminantProfile {
        d,
        residue_mod_6: d % 6,
        admissible,
        has_associated_k3: false,
        fano_hilb2: None,
        bulles: None,
        bulles_with_k3: false,
        addington: None,
        llsvs: None,
        tail: None,
        contains_plane_divisor: d == 8,
        c14_member_rational: d == 14,
    };
    if !admissible {
        return Ok(p);
    }
    p.has_associated_k3 = k3_criterion(&arith::factorize(d)?);
    p.fano_hilb2 = fano_hilb2(d)?.filter(|c| c.verify(d));
    p.bulles = bulles_certificate(d)?.filter(|c| c.verify(d));
    p.bulles_with_k3 = p.has_associated_k3 && p.bulles.is_some();
    p.addington = Some(addington_certificate(d, a_bound)?)
        .filter(|s| s.certificate().map_or(true, |c| c.verify(d)));
    p.llsvs = Some(llsvs_certificate(d, a_bound)?)
        .filter(|s| s.certificate().map_or(true, |c| c.verify(d)));
    p.tail = tail_certificate(d)?.filter(|c| c.verify(d));
    Ok(p)
}

/// Flag requirements for [`enumerate_profiles`]; every set flag must hold.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProfileFilter {
    pub has_associated_k3: bool,
    pub fano: bool,
    pub bulles: bool,
    pub bulles_with_k3: bool,
    pub addington: bool,
    pub llsvs: bool,
    pub tail: bool,
}

impl ProfileFilter {
    pub fn matches(&self, p: &DiscriminantProfile) -> bool {
        let found = |s: &Option<PellSearch>| s.as_ref().and_then(PellSearch::certificate).is_some();
        (!self.has_associated_k3 || p.has_associated_k3)
            && (!self.fano || p.fano_hilb2.is_some())
            && (!self.bulles || p.bulles.is_some())
            && (!self.bulles_with_k3 || p.bulles_with_k3)
            && (!self.addington || found(&p.addington))
            && (!self.llsvs || found(&p.llsvs))
            && (!self.tail || p.tail.is_some())
    }
}

/// Profiles of every admissible `d ∈ [min, max]` passing `filter`,
/// ascending in `d`.
pub fn enumerate_profiles(
    min: u64,
    max: u64,
    filter: &ProfileFilter,
    a_bound: u64,
) -> Result<Vec<DiscriminantProfile>> {
    if min == 0 || min > max || max >= arith::MAX_INPUT {
        return Err(ConditionError::InvalidRange { min, max });
    }
    let first = min.max(8);
    if first > max {
        return Ok(Vec::new());
    }
    let found: Result<Vec<Option<DiscriminantProfile>>> = (first..=max)
        .into_par_iter()
        .filter(|d| matches!(d % 6, 0 | 2))
        .map(|d| profile(d, a_bound).map(|p| filter.matches(&p).then_some(p)))
        .collect();
    Ok(found?.into_iter().flatten().collect())
}
