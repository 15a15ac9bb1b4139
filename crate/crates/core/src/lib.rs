//! Exact arithmetic for derangement polynomials and the umbra `D` with
//! moments `D^n -> D_n`, together with Lacasse's `xi(n)` and `xi_2(n)`.
//!
//! Everything is computed with arbitrary-precision integers and reduced
//! rationals. The [`identities`] module checks each derangement-polynomial
//! identity deterministically by evaluating both sides on an integer grid
//! whose size per variable exceeds the degree in that variable, and
//! recomputes every line of the umbral derivation of `xi_2(n) = xi(n) + n`.
//!
//! All derangement numbers come from a [`Sequences`] cache. The process-wide
//! cache is [`Sequences::global`]; [`Sequences::fork`] makes a private copy,
//! which can have a single value corrupted to check that the verifiers
//! actually detect bad input.

pub mod error;
pub mod identities;
pub mod lacasse;
pub mod polynomial;
pub mod sequences;
pub mod umbra;

pub use error::{Error, Result};
pub use identities::{IdentityId, ProofTrace, VerifyReport, Witness};
pub use lacasse::XiValue;
pub use polynomial::{IntPoly, Rat};
pub use sequences::{Int, Sequences};
pub use umbra::UmbralExpr;
