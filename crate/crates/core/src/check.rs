//! Check results with witnesses.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::matrix::Matrix;
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

/// A matrix rendered entrywise, in the JSON matrix-literal shape.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NamedMatrix {
    pub name: String,
    pub dim: usize,
    pub entries: Vec<Vec<String>>,
}

impl NamedMatrix {
    pub fn new<S: Scalar>(name: impl Into<String>, m: &Matrix<S>) -> Self {
        NamedMatrix {
            name: name.into(),
            dim: m.dim(),
            entries: m
                .rows()
                .iter()
                .map(|r| r.iter().map(|x| x.to_string()).collect())
                .collect(),
        }
    }

    /// A coordinate vector shown as a 1-row block.
    pub fn vector<S: Scalar>(name: impl Into<String>, v: &[S]) -> Self {
        NamedMatrix {
            name: name.into(),
            dim: v.len(),
            entries: vec![v.iter().map(|x| x.to_string()).collect()],
        }
    }
}

pub fn witness<S: Scalar>(items: &[(&str, &Matrix<S>)]) -> Vec<NamedMatrix> {
    items.iter().map(|(n, m)| NamedMatrix::new(*n, m)).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    /// The claim this check exercises.
    #[serde(skip_serializing_if = "String::is_empty", default)]
    pub anchor: String,
    pub status: Status,
    pub cases: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<NamedMatrix>>,
    #[serde(skip_serializing_if = "String::is_empty", default)]
    pub detail: String,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub parts: Vec<CheckResult>,
}

impl CheckResult {
    pub fn pass(name: impl Into<String>, cases: usize) -> Self {
        CheckResult {
            name: name.into(),
            anchor: String::new(),
            status: Status::Pass,
            cases,
            witness: None,
            detail: String::new(),
            parts: Vec::new(),
        }
    }

    pub fn fail(name: impl Into<String>, cases: usize, witness: Vec<NamedMatrix>) -> Self {
        CheckResult {
            status: Status::Fail,
            witness: Some(witness),
            ..CheckResult::pass(name, cases)
        }
    }

    pub fn error(name: impl Into<String>, detail: impl Into<String>) -> Self {
        CheckResult {
            status: Status::Error,
            detail: detail.into(),
            ..CheckResult::pass(name, 0)
        }
    }

    /// Worst status among the parts; case count is the sum.
    pub fn group(name: impl Into<String>, parts: Vec<CheckResult>) -> Self {
        let status = parts.iter().map(|p| p.status).max().unwrap_or(Status::Pass);
        let cases = parts.iter().map(|p| p.cases).sum();
        CheckResult {
            name: name.into(),
            anchor: String::new(),
            status,
            cases,
            witness: None,
            detail: String::new(),
            parts,
        }
    }

    pub fn with_anchor(mut self, anchor: impl Into<String>) -> Self {
        self.anchor = anchor.into();
        self
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = detail.into();
        self
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    /// Depth-first search for a part by name.
    pub fn find(&self, name: &str) -> Option<&CheckResult> {
        if self.name == name {
            return Some(self);
        }
        self.parts.iter().find_map(|p| p.find(name))
    }

    /// First failing leaf, for diagnostics.
    pub fn first_failure(&self) -> Option<&CheckResult> {
        if self.status == Status::Pass {
            return None;
        }
        if self.parts.is_empty() {
            return Some(self);
        }
        self.parts.iter().find_map(|p| p.first_failure())
    }
}

/// Runs `f` on every case in order. `Ok(None)` is a pass, `Ok(Some(w))` a
/// failure with witness `w`, `Err` an evaluation error. The first failure or
/// error is reported; later cases still count.
pub fn run_cases<T>(
    name: &str,
    cases: &[T],
    f: impl Fn(&T) -> Result<Option<Vec<NamedMatrix>>>,
) -> CheckResult {
    let mut first_fail: Option<Vec<NamedMatrix>> = None;
    let mut first_err: Option<String> = None;
    let mut failures = 0usize;
    for (k, c) in cases.iter().enumerate() {
        match f(c) {
            Ok(None) => {}
            Ok(Some(w)) => {
                failures += 1;
                if first_fail.is_none() {
                    first_fail = Some(w);
                }
            }
            Err(e) => {
                failures += 1;
                if first_err.is_none() {
                    first_err = Some(format!("case {k}: {e}"));
                }
            }
        }
    }
    let n = cases.len();
    match (first_err, first_fail) {
        (Some(e), w) => CheckResult {
            witness: w,
            cases: n,
            ..CheckResult::error(name, e)
        },
        (None, Some(w)) => {
            CheckResult::fail(name, n, w).with_detail(format!("{failures} of {n} cases failed"))
        }
        (None, None) => CheckResult::pass(name, n),
    }
}

/// Compares two matrices; on mismatch returns a witness naming both sides and the inputs.
pub fn compare<S: Scalar>(
    lhs: &Matrix<S>,
    rhs: &Matrix<S>,
    inputs: &[(&str, &Matrix<S>)],
) -> Option<Vec<NamedMatrix>> {
    if lhs == rhs {
        return None;
    }
    let mut w = witness(inputs);
    w.push(NamedMatrix::new("lhs", lhs));
    w.push(NamedMatrix::new("rhs", rhs));
    Some(w)
}

/// Vector analogue of [`compare`].
pub fn compare_vec<S: Scalar>(
    lhs: &[S],
    rhs: &[S],
    inputs: &[(&str, &[S])],
) -> Option<Vec<NamedMatrix>> {
    if lhs == rhs {
        return None;
    }
    let mut w: Vec<NamedMatrix> = inputs
        .iter()
        .map(|(n, v)| NamedMatrix::vector(*n, v))
        .collect();
    w.push(NamedMatrix::vector("lhs", lhs));
    w.push(NamedMatrix::vector("rhs", rhs));
    Some(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::matrix::ExactMatrix;

    #[test]
    fn first_failure_is_kept() {
        let cases = [1, 2, 3, 4];
        let r = run_cases("odd", &cases, |&k| {
            Ok((k % 2 == 0).then(|| vec![NamedMatrix::vector("k", &[crate::scalar::int(k)])]))
        });
        assert_eq!(r.status, Status::Fail);
        assert_eq!(r.cases, 4);
        assert_eq!(r.witness.unwrap()[0].entries, vec![vec!["2".to_string()]]);
    }

    #[test]
    fn errors_dominate() {
        let r = run_cases("e", &[0], |_| Err(Error::Precondition("x".into())));
        assert_eq!(r.status, Status::Error);
        let g = CheckResult::group("g", vec![CheckResult::pass("a", 2), r]);
        assert_eq!(g.status, Status::Error);
        assert_eq!(g.cases, 3);
        assert_eq!(g.first_failure().unwrap().name, "e");
    }

    #[test]
    fn compare_reports_sides() {
        let a = ExactMatrix::identity(2);
        let b = ExactMatrix::zero(2);
        assert!(compare(&a, &a, &[]).is_none());
        let w = compare(&a, &b, &[("a", &a)]).unwrap();
        assert_eq!(w.len(), 3);
        assert_eq!(w[2].entries, vec![vec!["0", "0"], vec!["0", "0"]]);
    }
}
