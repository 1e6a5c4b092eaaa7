//! Arithmetic and lattice conditions on Hassett divisors of special cubic
//! fourfolds, with certificates, Gram-matrix realizations and derivation
//! traces for families whose Chow motive is finite dimensional and of
//! abelian type.
//!
//! The modules build on each other bottom-up:
//!
//! - [`arith`]: primality, factorization, divisors, modular roots
//! - [`conditions`]: per-discriminant predicates and [`DiscriminantProfile`]
//! - [`lattice`]: Gram matrices of labellings and of `A(X)`
//! - [`family`]: nineteen-discriminant witnesses
//! - [`motive`]: Chow–Künneth bookkeeping and the classifier
//! - [`cli`]: the `hassett-lab` command line front end
//!
//! Runnable walkthroughs live in `examples/`; start with
//! `cargo run --example check_discriminant`.

pub mod arith;
pub mod cli;
pub mod conditions;
pub mod family;
pub mod lattice;
pub mod motive;

pub use conditions::{profile, DiscriminantProfile, DEFAULT_A_BOUND};
pub use family::{build_witness, build_witness_both, verify_witness, FamilyWitness};
pub use lattice::GramMatrix;
pub use motive::{classify, DerivationTrace, MotiveExpression, MotiveStatus};
