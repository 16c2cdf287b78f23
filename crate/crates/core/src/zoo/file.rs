//! JSON interchange format.
//!
//! ```json
//! { "field": "Q" | {"Fp": 3}, "dim": 2, "basis": ["1", "x"], "unit": [1, 0],
//!   "mul": [[0, 0, 0, 1], [0, 1, 1, 1], [1, 0, 1, 1]],
//!   "frobenius_eps": [0, 1], "automorphisms": {"nu": [[1, 0], [0, 1]]},
//!   "gradings": {"x": [0, 1]} }
//! ```
//! Scalars are integers or reduced `"a/b"` strings; residues are integers in `[0, p)`.
//! Unknown keys are rejected.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::algebra::{Algebra, Automorphism, Grading};
use crate::error::{Error, Result};
use crate::frobenius::FrobeniusData;
use crate::scalar::{Field, Scalar};
use crate::zoo::Bundle;

#[derive(Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum FieldSpec {
    Named(String),
    Prime {
        #[serde(rename = "Fp")]
        fp: u32,
    },
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AlgebraFile {
    field: FieldSpec,
    dim: usize,
    basis: Vec<String>,
    unit: Vec<Value>,
    mul: Vec<(usize, usize, usize, Value)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    frobenius_eps: Option<Vec<Value>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    automorphisms: BTreeMap<String, Vec<Vec<Value>>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    gradings: BTreeMap<String, Vec<i64>>,
}

fn scalar(field: Field, v: &Value, what: &str) -> Result<Scalar> {
    let text = match v {
        Value::Number(n) if n.is_i64() => n.to_string(),
        Value::String(s) => s.clone(),
        _ => return Err(Error::Parse(format!("{what}: expected an integer or \"a/b\" string, found {v}"))),
    };
    field.parse(&text).map_err(|e| Error::Parse(format!("{what}: {e}")))
}

fn field_of(spec: &FieldSpec) -> Result<Field> {
    match spec {
        FieldSpec::Named(s) => s.parse::<Field>().map_err(|e| Error::Parse(format!("field: {e}"))),
        FieldSpec::Prime { fp } => Field::prime(*fp).map_err(|e| Error::Parse(format!("field: {e}"))),
    }
}

/// Parses and validates an algebra file's contents.
pub fn parse_algebra(text: &str) -> Result<Bundle> {
    let file: AlgebraFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let field = field_of(&file.field)?;
    let d = file.dim;
    if file.basis.len() != d {
        return Err(Error::Parse(format!("basis: {} labels for dim {d}", file.basis.len())));
    }
    if file.unit.len() != d {
        return Err(Error::Parse(format!("unit: {} entries for dim {d}", file.unit.len())));
    }
    let unit = file
        .unit
        .iter()
        .enumerate()
        .map(|(i, v)| Ok((i, scalar(field, v, &format!("unit[{i}]"))?)))
        .collect::<Result<Vec<_>>>()?;
    let mul = file
        .mul
        .iter()
        .enumerate()
        .map(|(n, (i, j, k, v))| Ok((*i, *j, *k, scalar(field, v, &format!("mul[{n}]"))?)))
        .collect::<Result<Vec<_>>>()?;
    let alg = Algebra::new_validated(field, file.basis, unit, mul)?;
    let mut bundle = Bundle::bare(alg.clone());
    if let Some(eps) = &file.frobenius_eps {
        if eps.len() != d {
            return Err(Error::Parse(format!("frobenius_eps: {} entries for dim {d}", eps.len())));
        }
        let eps = eps
            .iter()
            .enumerate()
            .map(|(i, v)| scalar(field, v, &format!("frobenius_eps[{i}]")))
            .collect::<Result<Vec<_>>>()?;
        bundle.frobenius = Some(FrobeniusData::new(alg.clone(), eps)?);
    }
    for (name, rows) in &file.automorphisms {
        let rows = rows
            .iter()
            .enumerate()
            .map(|(r, row)| {
                row.iter()
                    .enumerate()
                    .map(|(c, v)| scalar(field, v, &format!("automorphisms.{name}[{r}][{c}]")))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let sigma = Automorphism::from_matrix(&alg, &rows).map_err(|e| Error::Parse(format!("automorphisms.{name}: {e}")))?;
        bundle.automorphisms.insert(name.clone(), sigma);
    }
    for (name, degrees) in &file.gradings {
        if degrees.len() != d {
            return Err(Error::Parse(format!("gradings.{name}: {} entries for dim {d}", degrees.len())));
        }
        let g = Grading::new(degrees.clone());
        let bad = alg.check_grading(&g);
        if let Some((i, j)) = bad.first() {
            return Err(Error::InvalidGrading(format!("gradings.{name}: product ({i}, {j}) is inhomogeneous")));
        }
        bundle.gradings.insert(name.clone(), g);
    }
    Ok(bundle)
}

pub fn load_algebra(path: &Path) -> Result<Bundle> {
    parse_algebra(&std::fs::read_to_string(path)?)
}

/// Serializes a bundle to the interchange format.
pub fn to_json(bundle: &Bundle) -> Value {
    let alg = &bundle.alg;
    let field = alg.field();
    let d = alg.dim();
    let file = AlgebraFile {
        field: match field {
            Field::Rational => FieldSpec::Named("Q".into()),
            Field::Prime(p) => FieldSpec::Prime { fp: p },
        },
        dim: d,
        basis: alg.labels().to_vec(),
        unit: alg.unit().to_dense(field, d).iter().map(Scalar::to_json).collect(),
        mul: alg.structure_constants().into_iter().map(|(i, j, k, c)| (i, j, k, c.to_json())).collect(),
        frobenius_eps: bundle.frobenius.as_ref().map(|f| f.eps().iter().map(Scalar::to_json).collect()),
        automorphisms: bundle
            .automorphisms
            .iter()
            .map(|(n, s)| (n.clone(), s.matrix(field).iter().map(|r| r.iter().map(Scalar::to_json).collect()).collect()))
            .collect(),
        gradings: bundle.gradings.iter().map(|(n, g)| (n.clone(), g.degrees.clone())).collect(),
    };
    serde_json::to_value(file).expect("serializable")
}

pub fn save_algebra(bundle: &Bundle, path: &Path) -> Result<()> {
    let text = serde_json::to_string_pretty(&to_json(bundle)).expect("serializable");
    std::fs::write(path, text)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zoo::small::{nakayama_cycle, truncated_poly};

    #[test]
    fn round_trip_is_identity() {
        for b in [truncated_poly(3, Field::Rational).unwrap(), nakayama_cycle(3, Field::Prime(5)).unwrap()] {
            let json = to_json(&b);
            let back = parse_algebra(&json.to_string()).unwrap();
            assert_eq!(back.alg.structure_constants(), b.alg.structure_constants());
            assert_eq!(back.alg.labels(), b.alg.labels());
            assert_eq!(to_json(&back), json);
        }
    }

    #[test]
    fn rejects_bad_input() {
        let good = to_json(&truncated_poly(2, Field::Rational).unwrap());
        let mut bad_prime = good.clone();
        bad_prime["field"] = serde_json::json!({"Fp": 4});
        assert!(parse_algebra(&bad_prime.to_string()).is_err());
        let mut unknown = good.clone();
        unknown["extra"] = serde_json::json!(1);
        assert!(parse_algebra(&unknown.to_string()).is_err());
        let mut bad_residue = good.clone();
        bad_residue["field"] = serde_json::json!({"Fp": 3});
        bad_residue["unit"] = serde_json::json!([3, 0]);
        assert!(parse_algebra(&bad_residue.to_string()).is_err());
        let mut inhomogeneous = good.clone();
        inhomogeneous["mul"] = serde_json::json!([[0, 0, 0, 1], [0, 1, 1, 1], [1, 0, 1, 1], [1, 1, 0, 1]]);
        assert!(matches!(parse_algebra(&inhomogeneous.to_string()), Err(Error::InvalidGrading(_))));
        let mut no_unit = good;
        no_unit["mul"] = serde_json::json!([[0, 0, 0, 1], [1, 0, 1, 1]]);
        assert!(matches!(parse_algebra(&no_unit.to_string()), Err(Error::InvalidAlgebra(_))));
        assert!(parse_algebra("{ not json").is_err());
    }
}
