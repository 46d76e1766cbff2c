use serde_json::Value;
use thiserror::Error;

use super::data::{type_name, DataPath, DataRecordSet};
use super::{Condition, Literal};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EvalError {
    #[error("missing data path `{0}`")]
    MissingPath(DataPath),
    #[error("type mismatch at `{path}`: expected {expected}, found {found}")]
    TypeMismatch {
        path: DataPath,
        expected: &'static str,
        found: &'static str,
    },
}

fn lookup<'a>(data: &'a DataRecordSet, path: &DataPath) -> Result<&'a Value, EvalError> {
    data.resolve(path)
        .ok_or_else(|| EvalError::MissingPath(path.clone()))
}

fn number_at(data: &DataRecordSet, path: &DataPath) -> Result<f64, EvalError> {
    let v = lookup(data, path)?;
    v.as_f64().ok_or(EvalError::TypeMismatch {
        path: path.clone(),
        expected: "number",
        found: type_name(v),
    })
}

/// Evaluates an arc guard. Only `exists` tolerates a missing path; `and`/`or`
/// short-circuit left to right so `and(exists(p), gt(p, 1))` is safe.
pub fn eval_condition(c: &Condition, data: &DataRecordSet) -> Result<bool, EvalError> {
    match c {
        Condition::Exists(p) => Ok(data.resolve(p).is_some()),
        Condition::Eq(p, lit) => {
            let v = lookup(data, p)?;
            let mismatch = |expected| EvalError::TypeMismatch {
                path: p.clone(),
                expected,
                found: type_name(v),
            };
            match lit {
                Literal::Str(s) => v.as_str().map(|x| x == s).ok_or_else(|| mismatch("string")),
                Literal::Num(n) => v
                    .as_f64()
                    .map(|x| x == *n)
                    .ok_or_else(|| mismatch("number")),
                Literal::Bool(b) => v
                    .as_bool()
                    .map(|x| x == *b)
                    .ok_or_else(|| mismatch("boolean")),
            }
        }
        Condition::Gt(p, n) => Ok(number_at(data, p)? > *n),
        Condition::Lt(p, n) => Ok(number_at(data, p)? < *n),
        Condition::And(items) => {
            for c in items {
                if !eval_condition(c, data)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        Condition::Or(items) => {
            for c in items {
                if eval_condition(c, data)? {
                    return Ok(true);
                }
            }
            Ok(false)
        }
        Condition::Not(c) => Ok(!eval_condition(c, data)?),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn data() -> DataRecordSet {
        DataRecordSet::from_json(
            r#"{"entities": [], "records": {"patient": {"name": "Sam", "bp": {"systolic": 160}, "stable": false}}}"#,
        )
        .unwrap()
    }

    fn p(s: &str) -> DataPath {
        DataPath::parse(s).unwrap()
    }

    #[test]
    fn exists_tolerates_missing_paths() {
        assert!(eval_condition(&Condition::Exists(p("patient.bp")), &data()).unwrap());
        assert!(!eval_condition(&Condition::Exists(p("patient.xyz")), &data()).unwrap());
    }

    #[test]
    fn numeric_comparisons() {
        assert!(eval_condition(&Condition::Gt(p("patient.bp.systolic"), 140.0), &data()).unwrap());
        assert!(!eval_condition(&Condition::Lt(p("patient.bp.systolic"), 140.0), &data()).unwrap());
    }

    #[test]
    fn eq_type_mismatch_is_an_error() {
        let err = eval_condition(
            &Condition::Eq(p("patient.name"), Literal::Num(3.0)),
            &data(),
        )
        .unwrap_err();
        assert_eq!(
            err,
            EvalError::TypeMismatch {
                path: p("patient.name"),
                expected: "number",
                found: "string"
            }
        );
        assert!(eval_condition(&Condition::Gt(p("patient.name"), 1.0), &data()).is_err());
    }

    #[test]
    fn comparisons_require_the_path() {
        assert_eq!(
            eval_condition(&Condition::Eq(p("patient.age"), Literal::Num(3.0)), &data()),
            Err(EvalError::MissingPath(p("patient.age")))
        );
    }

    #[test]
    fn connectives_short_circuit() {
        let guarded = Condition::And(vec![
            Condition::Exists(p("patient.age")),
            Condition::Gt(p("patient.age"), 60.0),
        ]);
        assert!(!eval_condition(&guarded, &data()).unwrap());
        let either = Condition::Or(vec![
            Condition::Eq(p("patient.stable"), Literal::Bool(false)),
            Condition::Gt(p("patient.age"), 60.0),
        ]);
        assert!(eval_condition(&either, &data()).unwrap());
        assert!(!eval_condition(&Condition::Not(Box::new(either)), &data()).unwrap());
    }
}
