//! Structured check outcomes.

use std::fmt;
use std::time::Instant;

use serde::Serialize;

use crate::exterior::{FormField, LinearOperator, Multivector, VectorValuedForm};
use crate::linalg::Matrix;
use crate::scalar::Scalar;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    DiscrepancyNoted,
    Error,
}

impl Status {
    /// `discrepancy_noted` counts as passing.
    pub fn is_ok(self) -> bool {
        matches!(self, Status::Pass | Status::DiscrepancyNoted)
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::DiscrepancyNoted => "discrepancy_noted",
            Status::Error => "error",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub check_id: String,
    pub status: Status,
    pub lhs: String,
    pub rhs: String,
    pub witness: Option<String>,
    /// Milliseconds.
    pub elapsed: f64,
}

/// Values that can be compared exactly and report a nonzero difference.
pub trait Witness: fmt::Display {
    /// `None` when equal, otherwise a printed nonzero piece of `self − other`.
    fn difference(&self, other: &Self) -> Option<String>;
}

impl Witness for Scalar {
    fn difference(&self, other: &Self) -> Option<String> {
        let d = self - other;
        (!d.is_zero()).then(|| d.to_string())
    }
}

impl Witness for Multivector {
    fn difference(&self, other: &Self) -> Option<String> {
        self.sub(other).leading_term().map(|t| t.to_string())
    }
}

impl Witness for FormField {
    fn difference(&self, other: &Self) -> Option<String> {
        self.sub(other).leading_term().map(|t| t.to_string())
    }
}

impl Witness for VectorValuedForm {
    fn difference(&self, other: &Self) -> Option<String> {
        self.sub(other).leading_term().map(|t| t.to_string())
    }
}

impl Witness for Matrix {
    fn difference(&self, other: &Self) -> Option<String> {
        let d = self.sub(other);
        for i in 0..d.rows() {
            for j in 0..d.cols() {
                if !d.get(i, j).is_zero() {
                    return Some(format!("entry ({i}, {j}) differs by {}", d.get(i, j)));
                }
            }
        }
        None
    }
}

impl Witness for LinearOperator {
    fn difference(&self, other: &Self) -> Option<String> {
        self.matrix().difference(other.matrix())
    }
}

impl Report {
    pub fn new(check_id: &str, status: Status, lhs: String, rhs: String, witness: Option<String>) -> Report {
        Report { check_id: check_id.to_string(), status, lhs, rhs, witness, elapsed: 0.0 }
    }

    /// Exact identity check `lhs = rhs`.
    pub fn identity<T: Witness>(check_id: &str, lhs: &T, rhs: &T) -> Report {
        match lhs.difference(rhs) {
            None => Report::new(check_id, Status::Pass, lhs.to_string(), rhs.to_string(), None),
            Some(w) => Report::new(check_id, Status::Fail, lhs.to_string(), rhs.to_string(), Some(w)),
        }
    }

    /// Compares the printed form of an identity with the computed value.
    /// A mismatch is recorded as `discrepancy_noted` with the difference.
    pub fn printed<T: Witness>(check_id: &str, computed: &T, printed: &T) -> Report {
        match computed.difference(printed) {
            None => Report::new(check_id, Status::Pass, computed.to_string(), printed.to_string(), None),
            Some(w) => Report::new(
                check_id,
                Status::DiscrepancyNoted,
                computed.to_string(),
                printed.to_string(),
                Some(format!("computed minus printed has term {w}")),
            ),
        }
    }

    /// Boolean check with printed sides.
    pub fn holds(check_id: &str, ok: bool, lhs: String, rhs: String, witness: impl FnOnce() -> String) -> Report {
        if ok {
            Report::new(check_id, Status::Pass, lhs, rhs, None)
        } else {
            Report::new(check_id, Status::Fail, lhs, rhs, Some(witness()))
        }
    }

    pub fn error(check_id: &str, err: impl fmt::Display) -> Report {
        Report::new(check_id, Status::Error, String::new(), String::new(), Some(err.to_string()))
    }

    pub fn passed(&self) -> bool {
        self.status.is_ok()
    }

    pub fn with_elapsed(mut self, ms: f64) -> Report {
        self.elapsed = ms;
        self
    }
}

/// Runs a check, converting errors into `error` reports and recording time.
pub fn timed(check_id: &str, f: impl FnOnce() -> crate::Result<Vec<Report>>) -> Vec<Report> {
    let start = Instant::now();
    let mut out = match f() {
        Ok(r) => r,
        Err(e) => vec![Report::error(check_id, e)],
    };
    let ms = start.elapsed().as_secs_f64() * 1000.0;
    for r in &mut out {
        r.elapsed = ms;
    }
    out
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {}", self.status, self.check_id)?;
        if let Some(w) = &self.witness {
            write!(f, " -- {w}")?;
        }
        Ok(())
    }
}
