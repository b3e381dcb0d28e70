//! JSON codecs: matrix literals, ε-matrices and fixture descriptors.
//!
//! A matrix literal is `{"dim": k, "entries": [["p/q", ...], ...]}`. An
//! ε-matrix has the same shape with each entry a map `degree → fraction`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::fixture::{GroupFixture, GroupOperator, LieFixture};
use crate::laurent::EpsSeries;
use crate::lie::{Bilinear, LieAction, LieAlgebra, LinearMap, ScalarPair};
use crate::matrix::{EpsMatrix, ExactMatrix, Matrix};
use crate::nilpotent::UpperBasis;
use crate::pair::{GroupAction, MapPair, PairKind};
use crate::scalar::{format_rational, parse_rational, Rational, Scalar};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixLiteral {
    pub dim: usize,
    pub entries: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EpsMatrixLiteral {
    pub dim: usize,
    pub entries: Vec<Vec<BTreeMap<String, String>>>,
}

fn check_square<T>(dim: usize, rows: &[Vec<T>]) -> Result<()> {
    if rows.len() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: rows.len(),
        });
    }
    for r in rows {
        if r.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: r.len(),
            });
        }
    }
    Ok(())
}

pub fn matrix_literal(m: &ExactMatrix) -> MatrixLiteral {
    MatrixLiteral {
        dim: m.dim(),
        entries: m
            .rows()
            .iter()
            .map(|r| r.iter().map(format_rational).collect())
            .collect(),
    }
}

impl MatrixLiteral {
    pub fn to_matrix(&self) -> Result<ExactMatrix> {
        check_square(self.dim, &self.entries)?;
        let rows = self
            .entries
            .iter()
            .map(|r| {
                r.iter()
                    .map(|s| parse_rational(s))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Matrix::from_rows(rows))
    }
}

pub fn series_to_map(s: &EpsSeries) -> BTreeMap<String, String> {
    s.terms()
        .map(|(d, c)| (d.to_string(), format_rational(c)))
        .collect()
}

pub fn series_from_map(m: &BTreeMap<String, String>) -> Result<EpsSeries> {
    let mut s = EpsSeries::zero();
    for (d, c) in m {
        let d: i32 = d
            .trim()
            .parse()
            .map_err(|e| Error::Parse(format!("degree `{d}`: {e}")))?;
        s = s.plus(&EpsSeries::monomial(d, parse_rational(c)?));
    }
    Ok(s)
}

pub fn eps_matrix_literal(m: &EpsMatrix) -> EpsMatrixLiteral {
    EpsMatrixLiteral {
        dim: m.dim(),
        entries: m
            .rows()
            .iter()
            .map(|r| r.iter().map(series_to_map).collect())
            .collect(),
    }
}

impl EpsMatrixLiteral {
    pub fn to_matrix(&self) -> Result<EpsMatrix> {
        check_square(self.dim, &self.entries)?;
        let rows = self
            .entries
            .iter()
            .map(|r| r.iter().map(series_from_map).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Ok(Matrix::from_rows(rows))
    }
}

pub fn matrix_to_json(m: &ExactMatrix) -> Value {
    serde_json::to_value(matrix_literal(m)).expect("plain data")
}

pub fn matrix_from_json(v: &Value) -> Result<ExactMatrix> {
    let lit: MatrixLiteral = serde_json::from_value(v.clone())
        .map_err(|e| Error::Parse(format!("matrix literal: {e}")))?;
    lit.to_matrix()
}

pub fn eps_matrix_to_json(m: &EpsMatrix) -> Value {
    serde_json::to_value(eps_matrix_literal(m)).expect("plain data")
}

pub fn eps_matrix_from_json(v: &Value) -> Result<EpsMatrix> {
    let lit: EpsMatrixLiteral = serde_json::from_value(v.clone())
        .map_err(|e| Error::Parse(format!("ε-matrix literal: {e}")))?;
    lit.to_matrix()
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidFixture(msg.into())
}

fn series_field(v: &Value, key: &str) -> Result<EpsSeries> {
    let m: BTreeMap<String, String> = serde_json::from_value(
        v.get(key)
            .cloned()
            .ok_or_else(|| invalid(format!("pair: missing `{key}`")))?,
    )
    .map_err(|e| Error::Parse(format!("pair `{key}`: {e}")))?;
    series_from_map(&m)
}

/// `"power"`, `"identity"` or `{"lower": {deg: frac}, "raise": {deg: frac}}`
/// for `𝔏 = exp(λ log ·)`, `𝔥 = exp(μ log ·)`.
pub fn pair_from_json(v: &Value) -> Result<MapPair> {
    match v {
        Value::String(s) if s == "power" => Ok(MapPair::power()),
        Value::String(s) if s == "identity" => Ok(MapPair::identity()),
        Value::Object(_) => Ok(MapPair::custom(
            series_field(v, "lower")?,
            series_field(v, "raise")?,
        )),
        _ => Err(invalid(format!("unsupported pair {v}"))),
    }
}

pub fn pair_to_json(p: &MapPair) -> Value {
    match p.kind {
        PairKind::Power => json!("power"),
        PairKind::Identity => json!("identity"),
        PairKind::Custom => json!({
            "lower": series_to_map(&p.lower_scale),
            "raise": series_to_map(&p.raise_scale),
        }),
    }
}

fn scalar_pair_from_json(v: &Value) -> Result<ScalarPair> {
    let p = pair_from_json(v)?;
    Ok(ScalarPair::new(p.lower_scale, p.raise_scale))
}

/// A linear map on an `n`-dimensional algebra: either a matrix literal
/// (column `j` is the image of `eⱼ`) or a map `basis index → coordinate vector`.
pub fn linear_map_from_json(v: &Value, n: usize) -> Result<LinearMap> {
    let m = if v.get("entries").is_some() {
        matrix_from_json(v)?
    } else {
        let images: BTreeMap<String, Vec<String>> = serde_json::from_value(v.clone())
            .map_err(|e| Error::Parse(format!("linear map: {e}")))?;
        let mut m = LinearMap::zero(n);
        for (k, img) in &images {
            let j: usize = k
                .trim()
                .parse()
                .map_err(|e| Error::Parse(format!("basis index `{k}`: {e}")))?;
            if j >= n {
                return Err(invalid(format!(
                    "basis index {j} out of range for dimension {n}"
                )));
            }
            if img.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: img.len(),
                });
            }
            for (i, c) in img.iter().enumerate() {
                m.set(i, j, parse_rational(c)?);
            }
        }
        m
    };
    if m.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: m.dim(),
        });
    }
    Ok(m)
}

fn operator_from_json(v: &Value, dim: usize) -> Result<GroupOperator> {
    let kind = match v {
        Value::String(s) => s.as_str(),
        _ => v
            .get("kind")
            .and_then(Value::as_str)
            .ok_or_else(|| invalid("operator: missing `kind`"))?,
    };
    let algebra_dim = UpperBasis::new(dim).len();
    let map = |key: &str| -> Result<LinearMap> {
        let m = v
            .get(key)
            .ok_or_else(|| invalid(format!("operator `{kind}`: missing `{key}`")))?;
        linear_map_from_json(m, algebra_dim)
    };
    match kind {
        "trivial" => Ok(GroupOperator::Trivial),
        "identity" => Ok(GroupOperator::Identity),
        "inverse" => Ok(GroupOperator::Inverse),
        "split-inverse" => Ok(GroupOperator::SplitInverse),
        "exp-conjugate-linear" => Ok(GroupOperator::ExpConjugateLinear(map("B")?)),
        "exp-derivation" => Ok(GroupOperator::ExpDerivation(map("D")?)),
        other => Err(invalid(format!("unsupported operator kind `{other}`"))),
    }
}

fn operator_to_json(op: &GroupOperator) -> Result<Value> {
    Ok(match op {
        GroupOperator::ExpConjugateLinear(b) => {
            json!({"kind": op.describe(), "B": matrix_to_json(b)})
        }
        GroupOperator::ExpDerivation(d) => json!({"kind": op.describe(), "D": matrix_to_json(d)}),
        GroupOperator::FromNovikov(_) => {
            return Err(invalid(
                "operators built from a Novikov product have no JSON form",
            ))
        }
        _ => json!({"kind": op.describe()}),
    })
}

/// `{"carrier": "unipotent", "dim": k, "pair": ..., "action": ..., "operator": ...}`.
pub fn group_fixture_from_json(v: &Value) -> Result<GroupFixture> {
    let carrier = v
        .get("carrier")
        .and_then(Value::as_str)
        .unwrap_or("unipotent");
    if carrier != "unipotent" {
        return Err(invalid(format!("unsupported carrier `{carrier}`")));
    }
    let dim = v
        .get("dim")
        .and_then(Value::as_u64)
        .ok_or_else(|| invalid("missing `dim`"))? as usize;
    if dim < 2 {
        return Err(invalid(format!("dimension {dim} is too small")));
    }
    let name = v.get("name").and_then(Value::as_str).unwrap_or("custom");
    let pair = pair_from_json(v.get("pair").unwrap_or(&json!("power")))?;
    let action = match v.get("action") {
        None => GroupAction::Conjugation,
        Some(Value::String(s)) if s == "conjugation" => GroupAction::Conjugation,
        Some(Value::String(s)) if s == "trivial" => GroupAction::Trivial,
        Some(other) => return Err(invalid(format!("unsupported action {other}"))),
    };
    let operator = operator_from_json(
        v.get("operator")
            .ok_or_else(|| invalid("missing `operator`"))?,
        dim,
    )?;
    Ok(GroupFixture::new(name, dim, pair, action, operator))
}

pub fn group_fixture_to_json(f: &GroupFixture) -> Result<Value> {
    Ok(json!({
        "name": f.name,
        "carrier": "unipotent",
        "dim": f.dim,
        "pair": pair_to_json(&f.pair),
        "action": match f.action {
            GroupAction::Conjugation => "conjugation",
            GroupAction::Trivial => "trivial",
        },
        "operator": operator_to_json(&f.operator)?,
    }))
}

/// `{"structure": [[[frac; n]; n]; n], "pair": ..., "action": "adjoint" | "trivial",
/// "operator": {index: vector} | matrix literal}`.
pub fn lie_fixture_from_json(v: &Value) -> Result<LieFixture> {
    let raw: Vec<Vec<Vec<String>>> = serde_json::from_value(
        v.get("structure")
            .cloned()
            .ok_or_else(|| invalid("missing `structure`"))?,
    )
    .map_err(|e| Error::Parse(format!("structure: {e}")))?;
    let parsed = raw
        .iter()
        .map(|m| {
            m.iter()
                .map(|r| {
                    r.iter()
                        .map(|s| parse_rational(s))
                        .collect::<Result<Vec<Rational>>>()
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let algebra = LieAlgebra::new(Bilinear::from_nested(parsed)?);
    if let Some((i, j)) = algebra.antisymmetry_violation() {
        return Err(invalid(format!(
            "bracket not antisymmetric on (e{i}, e{j})"
        )));
    }
    if let Some((i, j, k)) = algebra.jacobi_violation() {
        return Err(invalid(format!(
            "Jacobi identity fails on (e{i}, e{j}, e{k})"
        )));
    }
    let n = algebra.dim();
    let name = v.get("name").and_then(Value::as_str).unwrap_or("custom");
    let pair = scalar_pair_from_json(v.get("pair").unwrap_or(&json!("power")))?;
    let action = match v.get("action") {
        None => LieAction::Adjoint,
        Some(Value::String(s)) if s == "adjoint" => LieAction::Adjoint,
        Some(Value::String(s)) if s == "trivial" => LieAction::Trivial,
        Some(other) => return Err(invalid(format!("unsupported action {other}"))),
    };
    let operator = linear_map_from_json(
        v.get("operator")
            .ok_or_else(|| invalid("missing `operator`"))?,
        n,
    )?;
    Ok(LieFixture::scalar(name, algebra, &pair, action, operator))
}

pub fn lie_structure_to_json(g: &LieAlgebra) -> Value {
    let nested: Vec<Vec<Vec<String>>> = g
        .structure()
        .to_nested()
        .iter()
        .map(|m| {
            m.iter()
                .map(|r| r.iter().map(format_rational).collect())
                .collect()
        })
        .collect();
    json!(nested)
}

pub fn parse_json(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixture::{
        heisenberg_diff, heisenberg_rb, identity_pair_weight_one, scalar_pair_algebra,
    };
    use crate::nilpotent::heisenberg_q;
    use crate::scalar::{frac, int};

    #[test]
    fn matrix_round_trip() {
        let m = heisenberg_q(frac(-3, 4), int(2), frac(5, 6));
        let v = matrix_to_json(&m);
        assert_eq!(v["dim"], 3);
        assert_eq!(v["entries"][0][0], "1");
        assert_eq!(matrix_from_json(&v).unwrap(), m);
    }

    #[test]
    fn fractions_are_reduced() {
        let v = json!({"dim": 2, "entries": [["2/4", "0"], ["0", "-6/3"]]});
        let m = matrix_from_json(&v).unwrap();
        assert_eq!(
            matrix_to_json(&m)["entries"],
            json!([["1/2", "0"], ["0", "-2"]])
        );
    }

    #[test]
    fn bad_literals_rejected() {
        assert!(matrix_from_json(&json!({"dim": 2, "entries": [["1"]]})).is_err());
        assert!(matrix_from_json(&json!({"dim": 1, "entries": [["1/0"]]})).is_err());
        assert!(matrix_from_json(&json!([1, 2])).is_err());
    }

    #[test]
    fn eps_round_trip() {
        let mut m = EpsMatrix::identity(2);
        m.set(
            0,
            1,
            EpsSeries::monomial(-1, frac(1, 2)).plus(&EpsSeries::monomial(2, int(3))),
        );
        let v = eps_matrix_to_json(&m);
        assert_eq!(v["entries"][0][1]["-1"], "1/2");
        assert_eq!(eps_matrix_from_json(&v).unwrap(), m);
    }

    #[test]
    fn group_fixtures_round_trip() {
        for f in [
            heisenberg_rb(),
            heisenberg_diff(),
            identity_pair_weight_one(),
        ] {
            let v = group_fixture_to_json(&f).unwrap();
            assert_eq!(group_fixture_from_json(&v).unwrap(), f);
        }
    }

    #[test]
    fn basis_map_operator() {
        let v = json!({
            "dim": 3,
            "pair": "power",
            "action": "conjugation",
            "operator": {"kind": "exp-conjugate-linear", "B": {"1": ["1", "0", "0"]}},
        });
        let f = group_fixture_from_json(&v).unwrap();
        assert_eq!(f.operator, heisenberg_rb().operator);
    }

    #[test]
    fn custom_pair() {
        let v = json!({"lower": {"1": "2"}, "raise": {"-1": "1/2"}});
        let p = pair_from_json(&v).unwrap();
        assert_eq!(p.lower_scale, EpsSeries::monomial(1, int(2)));
        assert_eq!(pair_from_json(&pair_to_json(&p)).unwrap(), p);
    }

    #[test]
    fn linear_action_unsupported() {
        let v = json!({
            "dim": 3,
            "action": {"linear": [[1]]},
            "operator": "identity",
        });
        assert!(matches!(
            group_fixture_from_json(&v),
            Err(Error::InvalidFixture(_))
        ));
    }

    #[test]
    fn lie_fixture_from_structure() {
        let g = scalar_pair_algebra();
        let v = json!({
            "name": "scalar-pair-algebra",
            "structure": lie_structure_to_json(&g.algebra),
            "pair": "power",
            "action": "adjoint",
            "operator": {"1": ["1", "0", "0"]},
        });
        assert_eq!(lie_fixture_from_json(&v).unwrap(), g);
    }

    #[test]
    fn non_lie_structure_rejected() {
        let v = json!({
            "structure": [[["0", "0"], ["1", "0"]], [["0", "0"], ["0", "0"]]],
            "operator": {},
        });
        assert!(matches!(
            lie_fixture_from_json(&v),
            Err(Error::InvalidFixture(_))
        ));
    }
}
