// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

/// Errors surfaced by the library.
///
/// Variants are split by cause so callers (the CLI in particular) can tell a
/// violated mathematical hypothesis apart from malformed input data.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("valuation undefined at zero")]
    ZeroValuation,

    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),

    #[error("{value} is divisible by {p}")]
    NotUnit { value: u64, p: u64 },

    #[error("{0} is not squarefree (or is 0 or 1)")]
    NotSquarefree(i64),

    #[error("{0} is not a fundamental discriminant")]
    NotFundamental(i64),

    #[error("zeta_neg restricted to totally real fields")]
    NotTotallyReal,

    #[error("zeta value vanishes; valuation undefined")]
    ZetaVanishes,

    #[error("hypothesis on m violated: m = {m} is ±1 or (-1)^((p-1)/2)·p for p = {p}")]
    ExcludedField { m: i64, p: u64 },

    #[error("{d} does not divide p - 1 = {}", p - 1)]
    BadDeltaOrder { d: u64, p: u64 },

    #[error("insufficient precision: group exponent {exponent} exceeds p^m = {modulus}")]
    InsufficientPrecision { exponent: u64, modulus: u64 },

    #[error("group is not a {0}-group")]
    NotPGroup(u64),

    #[error("invalid group action: {0}")]
    InvalidAction(String),

    #[error("ill-defined twist: character known mod p^{level}, v_p(i) = {vp_i}, need mod p^{n}")]
    IllDefinedTwist { level: u32, vp_i: u32, n: u32 },

    #[error("norm isomorphism not expected: acting group order {order} is divisible by {p}")]
    NormIsoNotExpected { order: u64, p: u64 },

    #[error("wrong regime: n = {n}, a + b = {ab}")]
    WrongRegime { n: u32, ab: u32 },

    #[error("external class data required: {0}")]
    ExternalDataRequired(String),

    #[error("malformed class data: {0}")]
    ClassData(String),

    #[error("hypothesis check failed: {0}")]
    Hypothesis(String),

    #[error("precondition violated: {0}")]
    Precondition(String),
}

impl Error {
    /// True for errors caused by an unmet mathematical hypothesis or precondition,
    /// as opposed to malformed data.
    pub fn is_precondition(&self) -> bool {
        !matches!(self, Error::ClassData(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
