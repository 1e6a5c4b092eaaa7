//! Chow–Künneth bookkeeping and the classification engine.
//!
//! Motives are tracked symbolically as direct sums of the unit motive,
//! Lefschetz powers and one transcendental summand. The classifier walks
//! the chain witness → Picard rank of the associated K3 → finite
//! dimensionality of `h(S)` → transfer to `h(X)` through
//! `t(X) ≅ t₂(S)(1)`, recording every inference with an anchor tag.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::conditions::{DiscriminantProfile, PellSearch};
use crate::family::{self, FamilyError, FamilyWitness};

/// `dim H⁴(X)` for a cubic fourfold.
pub const CUBIC_MIDDLE_BETTI: u32 = 23;
/// Sum of all Betti numbers of a cubic fourfold.
pub const CUBIC_TOTAL_BETTI: u32 = 27;
/// `dim H²(S)` for a K3 surface.
pub const K3_MIDDLE_BETTI: u32 = 22;
pub const K3_TOTAL_BETTI: u32 = 24;
/// Picard ranks for which the motive of a K3 surface is known to be finite
/// dimensional and of abelian type.
pub const HIGH_PICARD_RANKS: [u32; 2] = [19, 20];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MotiveError {
    #[error("{what} = {value} outside [{min}, {max}]")]
    OutOfRange {
        what: &'static str,
        value: u32,
        min: u32,
        max: u32,
    },
    #[error("rank mismatch: rho2 = {rho2} but rho(S) = {rho_s}; need rho2 = rho(S) + 1")]
    DimensionMismatch { rho2: u32, rho_s: u32 },
    #[error("expression is not a cubic fourfold decomposition with a transcendental cubic summand")]
    NotCubicExpression,
    #[error("d = {0} is not admissible")]
    NotAdmissible(u64),
    #[error(transparent)]
    WitnessInvalid(FamilyError),
}

pub type Result<T> = std::result::Result<T, MotiveError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MotiveKind {
    CubicFourfold,
    K3Surface,
}

impl MotiveKind {
    pub fn total_dimension(self) -> u32 {
        match self {
            MotiveKind::CubicFourfold => CUBIC_TOTAL_BETTI,
            MotiveKind::K3Surface => K3_TOTAL_BETTI,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Summand {
    Unit,
    /// `multiplicity` copies of `L^power`.
    Lefschetz { power: u32, multiplicity: u32 },
    TranscendentalCubic { dimension: u32 },
    TranscendentalK3 { dimension: u32, twist: i32 },
}

impl Summand {
    pub fn dimension(&self) -> u32 {
        match *self {
            Summand::Unit => 1,
            Summand::Lefschetz { multiplicity, .. } => multiplicity,
            Summand::TranscendentalCubic { dimension } => dimension,
            Summand::TranscendentalK3 { dimension, .. } => dimension,
        }
    }

    fn is_transcendental(&self) -> bool {
        matches!(
            self,
            Summand::TranscendentalCubic { .. } | Summand::TranscendentalK3 { .. }
        )
    }
}

fn superscript(n: u32) -> String {
    const DIGITS: [char; 10] = ['⁰', '¹', '²', '³', '⁴', '⁵', '⁶', '⁷', '⁸', '⁹'];
    n.to_string()
        .chars()
        .map(|c| DIGITS[c.to_digit(10).unwrap() as usize])
        .collect()
}

impl fmt::Display for Summand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Summand::Unit => write!(f, "1"),
            Summand::Lefschetz { power, multiplicity } => {
                let base = if power == 1 {
                    "L".to_string()
                } else {
                    format!("L{}", superscript(power))
                };
                if multiplicity == 1 {
                    write!(f, "{base}")
                } else {
                    write!(f, "{base}^{{⊕{multiplicity}}}")
                }
            }
            Summand::TranscendentalCubic { .. } => write!(f, "t(X)"),
            Summand::TranscendentalK3 { twist: 0, .. } => write!(f, "t₂(S)"),
            Summand::TranscendentalK3 { twist, .. } => write!(f, "t₂(S)({twist})"),
        }
    }
}

/// A direct sum of motives, in Chow–Künneth order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MotiveExpression {
    pub kind: MotiveKind,
    pub summands: Vec<Summand>,
}

impl MotiveExpression {
    pub fn total_dimension(&self) -> u32 {
        self.summands.iter().map(Summand::dimension).sum()
    }

    pub fn transcendental(&self) -> Option<&Summand> {
        self.summands.iter().find(|s| s.is_transcendental())
    }

    /// At most one transcendental summand and the Betti total of the kind.
    pub fn is_valid(&self) -> bool {
        self.summands.iter().filter(|s| s.is_transcendental()).count() <= 1
            && self.total_dimension() == self.kind.total_dimension()
    }
}

impl fmt::Display for MotiveExpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.summands.iter().enumerate() {
            if i > 0 {
                write!(f, " ⊕ ")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

fn in_range(what: &'static str, value: u32, min: u32, max: u32) -> Result<()> {
    if (min..=max).contains(&value) {
        Ok(())
    } else {
        Err(MotiveError::OutOfRange {
            what,
            value,
            min,
            max,
        })
    }
}

/// `h(X) = 1 ⊕ L ⊕ (L²)^{⊕ρ₂} ⊕ t(X) ⊕ L³ ⊕ L⁴`.
///
/// The algebraic part of `H⁴` contributes `rho2` copies of `L²`, which is
/// what makes the total come out to 27.
pub fn chow_kunneth_cubic(rho2: u32) -> Result<MotiveExpression> {
    in_range("rho2", rho2, 1, CUBIC_MIDDLE_BETTI)?;
    let expr = MotiveExpression {
        kind: MotiveKind::CubicFourfold,
        summands: vec![
            Summand::Unit,
            Summand::Lefschetz { power: 1, multiplicity: 1 },
            Summand::Lefschetz { power: 2, multiplicity: rho2 },
            Summand::TranscendentalCubic { dimension: CUBIC_MIDDLE_BETTI - rho2 },
            Summand::Lefschetz { power: 3, multiplicity: 1 },
            Summand::Lefschetz { power: 4, multiplicity: 1 },
        ],
    };
    debug_assert!(expr.is_valid());
    Ok(expr)
}

/// `h(S) = 1 ⊕ L^{⊕ρ} ⊕ t₂(S) ⊕ L²`.
pub fn chow_kunneth_k3(rho: u32) -> Result<MotiveExpression> {
    in_range("rho", rho, 1, K3_MIDDLE_BETTI)?;
    Ok(MotiveExpression {
        kind: MotiveKind::K3Surface,
        summands: vec![
            Summand::Unit,
            Summand::Lefschetz { power: 1, multiplicity: rho },
            Summand::TranscendentalK3 { dimension: K3_MIDDLE_BETTI - rho, twist: 0 },
            Summand::Lefschetz { power: 2, multiplicity: 1 },
        ],
    })
}

/// Replaces `t(X)` by `t₂(S)(1)`. Requires `rho2 = rho_s + 1`, which is
/// exactly the condition for the transcendental dimensions to agree.
pub fn substitute_k3(x_expr: &MotiveExpression, rho2: u32, rho_s: u32) -> Result<MotiveExpression> {
    if x_expr.kind != MotiveKind::CubicFourfold {
        return Err(MotiveError::NotCubicExpression);
    }
    if rho2 != rho_s + 1 {
        return Err(MotiveError::DimensionMismatch { rho2, rho_s });
    }
    in_range("rho2", rho2, 1, CUBIC_MIDDLE_BETTI)?;
    let expected = CUBIC_MIDDLE_BETTI - rho2;
    let mut replaced = false;
    let summands = x_expr
        .summands
        .iter()
        .map(|s| match *s {
            Summand::TranscendentalCubic { dimension } => {
                replaced = true;
                if dimension == expected {
                    Ok(Summand::TranscendentalK3 { dimension, twist: 1 })
                } else {
                    Err(MotiveError::DimensionMismatch { rho2, rho_s })
                }
            }
            other => Ok(other),
        })
        .collect::<Result<Vec<_>>>()?;
    if !replaced {
        return Err(MotiveError::NotCubicExpression);
    }
    Ok(MotiveExpression {
        kind: MotiveKind::CubicFourfold,
        summands,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Proof {
    Proven,
    Unknown,
}

/// There is no negative criterion, so a status is never "disproven".
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MotiveStatus {
    pub finite_dimensional: Proof,
    pub abelian_type: Proof,
}

impl MotiveStatus {
    pub const PROVEN: MotiveStatus = MotiveStatus {
        finite_dimensional: Proof::Proven,
        abelian_type: Proof::Proven,
    };
    pub const UNKNOWN: MotiveStatus = MotiveStatus {
        finite_dimensional: Proof::Unknown,
        abelian_type: Proof::Unknown,
    };

    pub fn is_proven(&self) -> bool {
        *self == Self::PROVEN
    }
}

/// Fixed catalogue of results a derivation step may cite.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Anchor {
    /// Nonemptiness of `C_d`, the associated-K3 criterion, Fano values.
    HassettCriteria,
    /// Nonempty intersections of up to 20 Hassett divisors.
    DivisorIntersection,
    /// Chow–Künneth decomposition of a cubic fourfold.
    ChowKunnethCubic,
    /// `t(X) ≅ t₂(S)(1)`.
    TranscendentalTransfer,
    /// `d = f²g` with `g | 2n² + 2n + 2`.
    BullesCondition,
    /// K3 surfaces of Picard rank 19 or 20.
    K3HighPicard,
    /// Families with finite dimensional abelian motive in every `C_d`.
    AbelianFamily,
    FanoLines,
    LlsvsEightfold,
}

impl Anchor {
    pub fn tag(self) -> &'static str {
        match self {
            Anchor::HassettCriteria => "hassett-criteria",
            Anchor::DivisorIntersection => "divisor-intersection",
            Anchor::ChowKunnethCubic => "chow-kunneth-cubic",
            Anchor::TranscendentalTransfer => "transcendental-transfer",
            Anchor::BullesCondition => "bulles-condition",
            Anchor::K3HighPicard => "k3-high-picard",
            Anchor::AbelianFamily => "abelian-family",
            Anchor::FanoLines => "fano-lines",
            Anchor::LlsvsEightfold => "llsvs-eightfold",
        }
    }
}

impl fmt::Display for Anchor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    pub statement: String,
    pub anchor: Anchor,
}

/// Ordered chain of cited inferences. Serializes as a plain list.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DerivationTrace {
    pub steps: Vec<TraceStep>,
}

impl DerivationTrace {
    pub fn push(&mut self, statement: impl Into<String>, anchor: Anchor) {
        self.steps.push(TraceStep {
            statement: statement.into(),
            anchor,
        });
    }

    pub fn anchors(&self) -> impl Iterator<Item = Anchor> + '_ {
        self.steps.iter().map(|s| s.anchor)
    }

    pub fn position(&self, anchor: Anchor) -> Option<usize> {
        self.anchors().position(|a| a == anchor)
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}

/// Decides whether the members of the family through `profile.d` have a
/// finite dimensional motive of abelian type.
pub fn classify(
    profile: &DiscriminantProfile,
    witness: Option<&FamilyWitness>,
) -> Result<(MotiveStatus, DerivationTrace)> {
    if !profile.admissible {
        return Err(MotiveError::NotAdmissible(profile.d));
    }
    let mut trace = DerivationTrace::default();
    trace.push(
        format!("C_{} is a nonempty Hassett divisor (d >= 8, d = {} mod 6)", profile.d, profile.residue_mod_6),
        Anchor::HassettCriteria,
    );
    let unknown = |mut trace: DerivationTrace, why: String, anchor: Anchor| {
        trace.push(format!("{why}; status stays unknown"), anchor);
        Ok((MotiveStatus::UNKNOWN, trace))
    };

    let Some(w) = witness else {
        return unknown(
            trace,
            "no family witness supplied, so there is no evidence that an associated K3 surface has Picard rank 19 or more".into(),
            Anchor::DivisorIntersection,
        );
    };
    if w.target_d != profile.d {
        return unknown(
            trace,
            format!("the witness is built for C_{}, not C_{}", w.target_d, profile.d),
            Anchor::DivisorIntersection,
        );
    }
    family::verify_witness(w).map_err(MotiveError::WitnessInvalid)?;

    let count = w.all_discs.len();
    if count < family::WITNESS_SIZE {
        return unknown(
            trace,
            format!("only {count} distinct labellings, fewer than {}", family::WITNESS_SIZE),
            Anchor::DivisorIntersection,
        );
    }
    let rho2 = w.lattice_rank() as u32;
    let rho_s = w.generic_k3_picard_rank() as u32;
    trace.push(
        format!(
            "the {count} divisors [{}] meet in a one-dimensional family whose generic member has rk CH_2(X) = {rho2}; \
             its associated K3 surface has rho(S) = {rho_s}, and special points of the family have rho(S) = 20",
            w.all_discs.iter().map(u64::to_string).collect::<Vec<_>>().join(", ")
        ),
        Anchor::DivisorIntersection,
    );

    let k3_link = w.all_discs.iter().copied().find_map(|d| {
        let has_k3 = crate::conditions::has_associated_k3(d).ok()?;
        let cert = crate::conditions::bulles_search(d).ok().flatten()?;
        has_k3.then_some((d, cert))
    });
    let Some((k3_d, cert)) = k3_link else {
        return unknown(
            trace,
            "no discriminant in the witness has both an associated K3 surface and a Bülles certificate".into(),
            Anchor::BullesCondition,
        );
    };
    trace.push(
        format!(
            "the family lies in C_{k3_d}, whose cubics have an associated K3 surface S, and d = {k3_d} satisfies the \
             Bülles condition (f = {}, g = {}, n = {})",
            cert.f, cert.g, cert.n
        ),
        Anchor::BullesCondition,
    );

    if !HIGH_PICARD_RANKS.contains(&rho_s) {
        return unknown(
            trace,
            format!("rho(S) = {rho_s} is outside the ranks 19, 20 with known finite dimensional K3 motive"),
            Anchor::K3HighPicard,
        );
    }
    let k3 = chow_kunneth_k3(rho_s)?;
    trace.push(
        format!("rho(S) in {{19, 20}}, so h(S) = {k3} is finite dimensional and of abelian type"),
        Anchor::K3HighPicard,
    );

    let cubic = chow_kunneth_cubic(rho2)?;
    let transferred = substitute_k3(&cubic, rho2, rho_s)?;
    trace.push(
        format!(
            "h(X) = {cubic} with t(X) ≅ t₂(S)(1) gives h(X) = {transferred}, a sum of Lefschetz motives and a twist \
             of a summand of h(S)"
        ),
        Anchor::TranscendentalTransfer,
    );
    trace.push(
        format!("every cubic fourfold in the family inside C_{} has finite dimensional motive of abelian type", profile.d),
        Anchor::AbelianFamily,
    );
    Ok((MotiveStatus::PROVEN, trace))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Hyperkahler {
    /// Fano variety of lines `F(X)`.
    FanoVariety,
    /// LLSvS eightfold `L(X)`.
    LlsvsEightfold,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "relation", rename_all = "snake_case")]
pub enum Relation {
    IsomorphicHilb2 { n: u64 },
    BirationalHilb2 { n: u64, a: u64 },
    BirationalHilb4 { n: u64, a: u64 },
    UndefinedContainsPlane,
    /// Nothing found within the search bound; not a negative result.
    NoneKnown,
}

impl Relation {
    fn transfers_motive(&self) -> bool {
        matches!(
            self,
            Relation::IsomorphicHilb2 { .. } | Relation::BirationalHilb2 { .. } | Relation::BirationalHilb4 { .. }
        )
    }

    pub fn name(&self) -> &'static str {
        match self {
            Relation::IsomorphicHilb2 { .. } => "isomorphic_hilb2",
            Relation::BirationalHilb2 { .. } => "birational_hilb2",
            Relation::BirationalHilb4 { .. } => "birational_hilb4",
            Relation::UndefinedContainsPlane => "undefined_contains_plane",
            Relation::NoneKnown => "none_known",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct HyperkahlerReport {
    pub variety: Hyperkahler,
    #[serde(flatten)]
    pub relation: Relation,
    pub motive_status: MotiveStatus,
    pub anchor: Anchor,
}

fn found(search: &Option<PellSearch>) -> Option<(u64, u64)> {
    search.as_ref().and_then(PellSearch::certificate).map(|c| (c.n, c.a))
}

/// Motive of `F(X)`: it inherits `status` whenever `F(X)` is isomorphic or
/// birational to the Hilbert square of the associated K3.
pub fn fano_status(profile: &DiscriminantProfile, status: MotiveStatus) -> HyperkahlerReport {
    let relation = if let Some(c) = profile.fano_hilb2 {
        Relation::IsomorphicHilb2 { n: c.n }
    } else if let Some((n, a)) = found(&profile.addington) {
        Relation::BirationalHilb2 { n, a }
    } else {
        Relation::NoneKnown
    };
    HyperkahlerReport {
        variety: Hyperkahler::FanoVariety,
        relation,
        motive_status: if relation.transfers_motive() { status } else { MotiveStatus::UNKNOWN },
        anchor: Anchor::FanoLines,
    }
}

/// Motive of `L(X)`, which is only defined when `X` contains no plane.
pub fn llsvs_status(profile: &DiscriminantProfile, status: MotiveStatus) -> HyperkahlerReport {
    let relation = if profile.contains_plane_divisor {
        Relation::UndefinedContainsPlane
    } else if let Some((n, a)) = found(&profile.llsvs) {
        Relation::BirationalHilb4 { n, a }
    } else {
        Relation::NoneKnown
    };
    HyperkahlerReport {
        variety: Hyperkahler::LlsvsEightfold,
        relation,
        motive_status: if relation.transfers_motive() { status } else { MotiveStatus::UNKNOWN },
        anchor: Anchor::LlsvsEightfold,
    }
}
