//! Machine-readable results of randomized verification runs.

use std::collections::BTreeMap;
use std::fmt::Display;

use serde::{Deserialize, Serialize};

use crate::exactnum::Field;

/// Failures kept verbatim in a report; later ones are only counted.
pub const MAX_RECORDED_FAILURES: usize = 50;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub triple: Option<[usize; 3]>,
    pub specialization: BTreeMap<String, String>,
    pub expected: String,
    pub got: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub check: String,
    pub field: Field,
    pub trials: usize,
    /// Number of exact comparisons performed.
    pub assertions: u64,
    pub failure_count: u64,
    pub failures: Vec<Failure>,
    pub elapsed_ms: u128,
}

impl Report {
    pub fn new(check: impl Into<String>, field: Field, trials: usize) -> Self {
        Report {
            check: check.into(),
            field,
            trials,
            assertions: 0,
            failure_count: 0,
            failures: Vec::new(),
            elapsed_ms: 0,
        }
    }

    pub fn passed(&self) -> bool {
        self.failure_count == 0
    }

    pub fn fail(&mut self, failure: Failure) {
        self.failure_count += 1;
        if self.failures.len() < MAX_RECORDED_FAILURES {
            self.failures.push(failure);
        }
    }

    /// Record one exact comparison.
    pub fn check_eq<T: PartialEq + Display>(
        &mut self,
        triple: Option<[usize; 3]>,
        specialization: &BTreeMap<String, String>,
        expected: &T,
        got: &T,
    ) -> bool {
        self.assertions += 1;
        if expected == got {
            return true;
        }
        self.fail(Failure {
            triple,
            specialization: specialization.clone(),
            expected: expected.to_string(),
            got: got.to_string(),
        });
        false
    }

    /// Record a boolean check described by `what`.
    pub fn check(&mut self, ok: bool, what: &str, specialization: &BTreeMap<String, String>) -> bool {
        self.assertions += 1;
        if !ok {
            self.fail(Failure {
                triple: None,
                specialization: specialization.clone(),
                expected: what.to_string(),
                got: "false".into(),
            });
        }
        ok
    }

    /// Record an error that aborted a trial.
    pub fn error(&mut self, what: impl Display, specialization: &BTreeMap<String, String>) {
        self.assertions += 1;
        self.fail(Failure {
            triple: None,
            specialization: specialization.clone(),
            expected: "no error".into(),
            got: what.to_string(),
        });
    }

    pub fn merge(&mut self, other: Report) {
        self.assertions += other.assertions;
        self.failure_count += other.failure_count;
        for f in other.failures {
            if self.failures.len() < MAX_RECORDED_FAILURES {
                self.failures.push(f);
            }
        }
        self.elapsed_ms += other.elapsed_ms;
    }
}
