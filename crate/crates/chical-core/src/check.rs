//! Shared result type for the identity checkers.

use std::fmt;

/// A failed check: which identity broke and a witness describing the first
/// counterexample (inputs and both sides, canonically rendered).
#[derive(Clone, Debug)]
pub struct CheckFailure {
    pub check: String,
    pub witness: String,
}

impl fmt::Display for CheckFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.check, self.witness)
    }
}

impl std::error::Error for CheckFailure {}

pub type CheckResult = Result<(), CheckFailure>;

pub fn fail(check: impl Into<String>, witness: String) -> CheckResult {
    Err(CheckFailure {
        check: check.into(),
        witness,
    })
}

/// Asserts exact equality of two rendered values, producing a witness with
/// both sides on failure.
pub fn expect_eq<T: PartialEq + fmt::Display>(
    check: &str,
    context: &str,
    lhs: T,
    rhs: T,
) -> CheckResult {
    if lhs == rhs {
        Ok(())
    } else {
        fail(check, format!("{context}: lhs = {lhs}, rhs = {rhs}"))
    }
}
