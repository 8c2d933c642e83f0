//! Named pass/fail checks recorded by the generating-function pipelines.

use serde::Serialize;
use thiserror::Error;

use crate::series::{MultiSeries, SeriesError};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum SolveError {
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error("check {name} failed{}: {detail}", .z_degree.map(|n| format!(" at z^{n}")).unwrap_or_default())]
    CheckFailed {
        name: String,
        z_degree: Option<usize>,
        detail: String,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    /// Lowest z-degree where the compared series differ.
    pub first_difference: Option<usize>,
    pub detail: String,
}

/// Collects checks; in strict mode the first failure aborts with an error.
#[derive(Clone, Debug, Default)]
pub struct CheckLog {
    strict: bool,
    checks: Vec<Check>,
}

impl CheckLog {
    pub fn new(strict: bool) -> CheckLog {
        CheckLog {
            strict,
            checks: Vec::new(),
        }
    }

    pub fn checks(&self) -> &[Check] {
        &self.checks
    }

    pub fn into_checks(self) -> Vec<Check> {
        self.checks
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn push(&mut self, check: Check) -> Result<(), SolveError> {
        let failed = !check.passed;
        self.checks.push(check.clone());
        if failed && self.strict {
            return Err(SolveError::CheckFailed {
                name: check.name,
                z_degree: check.first_difference,
                detail: check.detail,
            });
        }
        Ok(())
    }

    /// `a` and `b` agree up to `order`.
    pub fn agree(
        &mut self,
        name: &str,
        a: &MultiSeries,
        b: &MultiSeries,
        order: usize,
    ) -> Result<(), SolveError> {
        let diff = a.truncate(order).first_difference(&b.truncate(order));
        self.push(Check {
            name: name.to_string(),
            passed: diff.is_none(),
            first_difference: diff,
            detail: match diff {
                None => format!("agree to order {order}"),
                Some(n) => format!("{} vs {}", a.coeff(n), b.coeff(n)),
            },
        })
    }

    /// `residual` vanishes up to its order.
    pub fn vanishes(&mut self, name: &str, residual: &MultiSeries) -> Result<(), SolveError> {
        let zero = MultiSeries::zero(residual.order());
        self.agree(name, residual, &zero, residual.order())
    }

    /// Records a computation that may fail; the error becomes a failed check.
    pub fn attempt<T>(
        &mut self,
        name: &str,
        result: Result<T, SeriesError>,
    ) -> Result<Option<T>, SolveError> {
        match result {
            Ok(v) => Ok(Some(v)),
            Err(e) => {
                let z_degree = match &e {
                    SeriesError::InexactDivision { z_degree, .. } => Some(*z_degree),
                    _ => None,
                };
                self.push(Check {
                    name: name.to_string(),
                    passed: false,
                    first_difference: z_degree,
                    detail: e.to_string(),
                })?;
                Ok(None)
            }
        }
    }

    pub fn extend(&mut self, other: CheckLog) {
        self.checks.extend(other.checks);
    }
}
