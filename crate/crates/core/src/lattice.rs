//! Integer Gram matrices for labellings and for the algebraic lattice `A(X)`.
//!
//! A labelling is a rank-2 lattice spanned by `h^2` (self-intersection 3)
//! and one more class; its discriminant is the determinant of the form.
//! Several labellings are realized at once by an "arrow" matrix whose only
//! nonzero off-diagonal entries sit in row and column 0.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::conditions::{self, ConditionError};

/// Self-intersection of the square of the hyperplane class.
pub const H2_SELF_INTERSECTION: i64 = 3;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("d = {0} is not admissible")]
    NotAdmissible(u64),
    #[error("index {index} out of range for rank {rank}")]
    IndexOutOfRange { index: usize, rank: usize },
    #[error("arrow-shaped Gram matrix for {discs:?} is not positive definite")]
    PositivityFailure { discs: Vec<u64> },
}

pub type Result<T> = std::result::Result<T, LatticeError>;

impl From<ConditionError> for LatticeError {
    fn from(e: ConditionError) -> Self {
        match e {
            ConditionError::NotAdmissible(d) => LatticeError::NotAdmissible(d),
            other => LatticeError::InvalidInput(other.to_string()),
        }
    }
}

/// A symmetric square integer matrix. Serializes as a row-major array of
/// arrays.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<i64>>", into = "Vec<Vec<i64>>")]
pub struct GramMatrix {
    rows: Vec<Vec<i64>>,
}

impl GramMatrix {
    pub fn new(rows: Vec<Vec<i64>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(LatticeError::InvalidInput("empty matrix".into()));
        }
        if let Some(i) = rows.iter().position(|r| r.len() != n) {
            return Err(LatticeError::InvalidInput(format!(
                "row {i} has length {}, expected {n}",
                rows[i].len()
            )));
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if rows[i][j] != rows[j][i] {
                    return Err(LatticeError::InvalidInput(format!(
                        "asymmetric entries at ({i},{j}): {} != {}",
                        rows[i][j], rows[j][i]
                    )));
                }
            }
        }
        Ok(GramMatrix { rows })
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.rows[i][j]
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.rows
    }

    /// Principal submatrix on the given indices.
    pub fn principal_submatrix(&self, idx: &[usize]) -> GramMatrix {
        GramMatrix {
            rows: idx
                .iter()
                .map(|&i| idx.iter().map(|&j| self.rows[i][j]).collect())
                .collect(),
        }
    }

    /// Block-diagonal sum of two Gram matrices.
    pub fn direct_sum(&self, other: &GramMatrix) -> GramMatrix {
        let (a, b) = (self.rank(), other.rank());
        let mut rows = vec![vec![0i64; a + b]; a + b];
        for i in 0..a {
            rows[i][..a].copy_from_slice(&self.rows[i]);
        }
        for i in 0..b {
            rows[a + i][a..].copy_from_slice(&other.rows[i]);
        }
        GramMatrix { rows }
    }
}

impl TryFrom<Vec<Vec<i64>>> for GramMatrix {
    type Error = LatticeError;

    fn try_from(rows: Vec<Vec<i64>>) -> Result<Self> {
        GramMatrix::new(rows)
    }
}

impl From<GramMatrix> for Vec<Vec<i64>> {
    fn from(g: GramMatrix) -> Self {
        g.rows
    }
}

impl fmt::Display for GramMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, row) in self.rows.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "[")?;
            for (j, v) in row.iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{v}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// Fraction-free Gaussian elimination. Returns the successive pivots
/// without row exchanges; the k-th pivot is the k-th leading principal
/// minor. Stops early at the first zero pivot.
fn bareiss_pivots(g: &GramMatrix) -> Vec<BigInt> {
    let n = g.rank();
    let mut a: Vec<Vec<BigInt>> = g
        .rows
        .iter()
        .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
        .collect();
    let mut pivots = Vec::with_capacity(n);
    let mut prev = BigInt::from(1);
    for k in 0..n {
        let pivot = a[k][k].clone();
        pivots.push(pivot.clone());
        if pivot.is_zero() {
            break;
        }
        for i in (k + 1)..n {
            for j in (k + 1)..n {
                let v = (&a[i][j] * &pivot - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = pivot;
    }
    pivots
}

/// Exact determinant (Bareiss elimination with row pivoting).
pub fn det(g: &GramMatrix) -> BigInt {
    let n = g.rank();
    let mut a: Vec<Vec<BigInt>> = g
        .rows
        .iter()
        .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
        .collect();
    let mut sign = 1i32;
    let mut prev = BigInt::from(1);
    for k in 0..n {
        if a[k][k].is_zero() {
            match ((k + 1)..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in (k + 1)..n {
            for j in (k + 1)..n {
                a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    if sign < 0 {
        -prev
    } else {
        prev
    }
}

/// Sylvester's criterion: every leading principal minor is positive.
pub fn is_positive_definite(g: &GramMatrix) -> bool {
    let pivots = bareiss_pivots(g);
    pivots.len() == g.rank() && pivots.iter().all(|m| m.is_positive())
}

/// Leading principal minors, for reporting.
pub fn leading_minors(g: &GramMatrix) -> Vec<BigInt> {
    bareiss_pivots(g)
}

/// A rank-2 sublattice containing `h^2`, together with its discriminant.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Labelling {
    pub gram: GramMatrix,
    pub discriminant: u64,
}

impl Labelling {
    pub fn is_valid(&self) -> bool {
        self.gram.rank() == 2
            && self.gram.get(0, 0) == H2_SELF_INTERSECTION
            && self.discriminant > 0
            && det(&self.gram) == BigInt::from(self.discriminant)
            && is_positive_definite(&self.gram)
    }
}

/// Row 0 entry and diagonal entry realizing discriminant `d` against `h^2`.
fn arrow_entries(d: u64) -> Result<(i64, i64)> {
    if !conditions::is_admissible(d)? {
        return Err(LatticeError::NotAdmissible(d));
    }
    let to_i64 = |v: u64| {
        i64::try_from(v).map_err(|_| LatticeError::InvalidInput(format!("d = {d} too large")))
    };
    Ok(if d % 6 == 0 {
        (0, to_i64(d / 3)?)
    } else {
        (1, to_i64((d + 1) / 3)?)
    })
}

/// Standard representative: `[[3,0],[0,d/3]]` or `[[3,1],[1,(d+1)/3]]`.
pub fn labelling_for(d: u64) -> Result<Labelling> {
    let (off, diag) = arrow_entries(d)?;
    let gram = GramMatrix::new(vec![vec![H2_SELF_INTERSECTION, off], vec![off, diag]])?;
    let labelling = Labelling {
        gram,
        discriminant: d,
    };
    debug_assert!(labelling.is_valid());
    Ok(labelling)
}

/// Discriminant of the labelling `<h^2, v_i>`: the 2x2 minor on `{0, i}`.
pub fn sublattice_discriminant(g: &GramMatrix, i: usize) -> Result<BigInt> {
    let rank = g.rank();
    if rank < 2 || i == 0 || i >= rank {
        return Err(LatticeError::IndexOutOfRange { index: i, rank });
    }
    Ok(det(&g.principal_submatrix(&[0, i])))
}

/// Arrow-shaped Gram matrix of rank `len + 1` realizing every discriminant in
/// `discs` as a labelling with `h^2`.
pub fn simultaneous_gram(discs: &[u64]) -> Result<GramMatrix> {
    if discs.is_empty() {
        return Err(LatticeError::InvalidInput("empty discriminant list".into()));
    }
    let n = discs.len() + 1;
    let mut rows = vec![vec![0i64; n]; n];
    rows[0][0] = H2_SELF_INTERSECTION;
    for (k, &d) in discs.iter().enumerate() {
        let (off, diag) = arrow_entries(d)?;
        rows[0][k + 1] = off;
        rows[k + 1][0] = off;
        rows[k + 1][k + 1] = diag;
    }
    let g = GramMatrix::new(rows)?;
    if !is_positive_definite(&g) {
        return Err(LatticeError::PositivityFailure {
            discs: discs.to_vec(),
        });
    }
    Ok(g)
}
