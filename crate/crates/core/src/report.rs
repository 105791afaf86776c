//! Named pass/fail checks shared by the validator, the identity suite and the
//! factorization checks.

use serde::{Deserialize, Serialize};

use crate::ring::PolyMatrix;

/// One named validation outcome.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub checks: Vec<Check>,
    pub notes: Vec<String>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// Records a check that failed iff `failure` is `Some`.
    pub fn push(&mut self, name: impl Into<String>, failure: Option<String>) {
        self.checks.push(Check {
            name: name.into(),
            passed: failure.is_none(),
            detail: failure.unwrap_or_default(),
        });
    }

    /// Records an exact matrix equality.
    pub fn expect_eq(&mut self, name: impl Into<String>, lhs: &PolyMatrix, rhs: &PolyMatrix) -> bool {
        let failure = matrix_mismatch(lhs, rhs);
        let ok = failure.is_none();
        self.push(name, failure);
        ok
    }

    pub fn expect_zero(&mut self, name: impl Into<String>, m: &PolyMatrix) -> bool {
        let z = PolyMatrix::zero(m.ring(), m.rows(), m.cols());
        self.expect_eq(name, m, &z)
    }

    pub fn extend(&mut self, other: Report) {
        self.checks.extend(other.checks);
        self.notes.extend(other.notes);
    }
}

/// None when equal; otherwise a description of the first difference.
pub fn matrix_mismatch(lhs: &PolyMatrix, rhs: &PolyMatrix) -> Option<String> {
    if lhs.shape() != rhs.shape() {
        return Some(format!("shape {:?} vs {:?}", lhs.shape(), rhs.shape()));
    }
    lhs.first_diff(rhs)
        .map(|(i, j)| format!("entry ({i},{j}): {} vs {}", lhs.get(i, j), rhs.get(i, j)))
}
