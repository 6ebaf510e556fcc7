//! JSON tuple documents.

use serde::{Deserialize, Serialize};

use nullcone::{Field, Matrix, MatrixTuple, Scalar};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldKind {
    Rational,
    Gfp,
}

/// An entry written either as a JSON integer or as a string `"n"` / `"p/q"`.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
enum Entry {
    Int(i64),
    Text(String),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TupleDocument {
    pub field: FieldKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prime: Option<u64>,
    pub n: usize,
    pub m: usize,
    #[serde(deserialize_with = "de_matrices")]
    pub matrices: Vec<Vec<Vec<String>>>,
}

fn de_matrices<'de, D: serde::Deserializer<'de>>(d: D) -> Result<Vec<Vec<Vec<String>>>, D::Error> {
    let raw: Vec<Vec<Vec<Entry>>> = Vec::deserialize(d)?;
    Ok(raw
        .into_iter()
        .map(|m| {
            m.into_iter()
                .map(|r| {
                    r.into_iter()
                        .map(|e| match e {
                            Entry::Int(v) => v.to_string(),
                            Entry::Text(t) => t,
                        })
                        .collect()
                })
                .collect()
        })
        .collect())
}

impl TupleDocument {
    pub fn from_tuple(a: &MatrixTuple) -> TupleDocument {
        let (field, prime) = match a.field() {
            Field::Rational => (FieldKind::Rational, None),
            Field::Prime(p) => (FieldKind::Gfp, Some(p)),
        };
        let matrices = a
            .components()
            .iter()
            .map(|c| {
                (0..c.rows())
                    .map(|i| (0..c.cols()).map(|j| c.get(i, j).to_string()).collect())
                    .collect()
            })
            .collect();
        TupleDocument {
            field,
            prime,
            n: a.n(),
            m: a.m(),
            matrices,
        }
    }

    pub fn field(&self) -> Result<Field, String> {
        match (&self.field, self.prime) {
            (FieldKind::Rational, None) => Ok(Field::Rational),
            (FieldKind::Rational, Some(_)) => Err("a rational document takes no prime".into()),
            (FieldKind::Gfp, Some(p)) => Field::prime(p).map_err(|e| e.to_string()),
            (FieldKind::Gfp, None) => Err("field gfp needs a prime".into()),
        }
    }

    /// The tuple, after checking that shapes agree with `n` and `m`.
    pub fn to_tuple(&self) -> Result<MatrixTuple, String> {
        let field = self.field()?;
        if self.matrices.len() != self.m {
            return Err(format!("m = {} but {} matrices given", self.m, self.matrices.len()));
        }
        if self.m == 0 {
            return Err("a tuple needs at least one matrix".into());
        }
        let mut comps = Vec::with_capacity(self.m);
        for (k, mat) in self.matrices.iter().enumerate() {
            if mat.len() != self.n || mat.iter().any(|r| r.len() != self.n) {
                return Err(format!("matrix {} is not {}x{}", k + 1, self.n, self.n));
            }
            let rows = mat
                .iter()
                .map(|r| {
                    r.iter()
                        .map(|e| {
                            e.parse::<Scalar>()
                                .and_then(|s| s.to_field(field))
                                .map_err(|err| format!("matrix {}: entry `{e}`: {err}", k + 1))
                        })
                        .collect::<Result<Vec<_>, _>>()
                })
                .collect::<Result<Vec<_>, _>>()?;
            comps.push(Matrix::from_rows(field, rows).map_err(|e| e.to_string())?);
        }
        MatrixTuple::new(comps).map_err(|e| e.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let text = r#"{"field":"rational","n":3,"m":2,
            "matrices":[[[0,0,0],[0,0,0],[1,0,0]],[["0","0","0"],["2","0","0"],["0","1/2","0"]]]}"#;
        let doc: TupleDocument = serde_json::from_str(text).unwrap();
        let t = doc.to_tuple().unwrap();
        let again = TupleDocument::from_tuple(&t);
        let json = serde_json::to_string(&again).unwrap();
        let back: TupleDocument = serde_json::from_str(&json).unwrap();
        assert_eq!(back.to_tuple().unwrap(), t);
        assert_eq!(again.matrices[1][2][1], "1/2");
    }

    #[test]
    fn shape_errors() {
        let text = r#"{"field":"rational","n":3,"m":2,"matrices":[[[0,0,0],[0,0,0],[1,0,0]]]}"#;
        let doc: TupleDocument = serde_json::from_str(text).unwrap();
        assert!(doc.to_tuple().is_err());
        let text = r#"{"field":"gfp","prime":4,"n":1,"m":1,"matrices":[[[1]]]}"#;
        let doc: TupleDocument = serde_json::from_str(text).unwrap();
        assert!(doc.to_tuple().is_err());
    }
}
