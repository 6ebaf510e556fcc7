//! Names of the conjugacy classes of nilpotent 3x3 pairs and their
//! representatives.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::{Field, Scalar};
use crate::tuple::MatrixTuple;

/// A parameter in `K ∪ {∞}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExtParam {
    Fin(Scalar),
    Inf,
}

impl ExtParam {
    pub fn int(v: i64) -> ExtParam {
        ExtParam::Fin(Scalar::from_i64(v))
    }

    pub fn is_inf(&self) -> bool {
        matches!(self, ExtParam::Inf)
    }

    pub fn finite(&self) -> Option<&Scalar> {
        match self {
            ExtParam::Fin(s) => Some(s),
            ExtParam::Inf => None,
        }
    }

    fn is_zero(&self) -> bool {
        self.finite().is_some_and(Scalar::is_zero)
    }
}

impl fmt::Display for ExtParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtParam::Fin(s) => write!(f, "{s}"),
            ExtParam::Inf => write!(f, "inf"),
        }
    }
}

impl FromStr for ExtParam {
    type Err = Error;

    fn from_str(s: &str) -> Result<ExtParam> {
        let t = s.trim();
        if t == "inf" || t == "∞" {
            Ok(ExtParam::Inf)
        } else {
            t.parse().map(ExtParam::Fin)
        }
    }
}

/// The six letters of the classification.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    A,
    B,
    C,
    D,
    E,
    O,
}

/// A conjugacy class of nilpotent 3x3 pairs.
///
/// `A(λ, μ)` with both finite needs `μ ≠ 0`; at most one parameter of `A`
/// is infinite, and only the first parameter of `B` may be.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OrbitLabel {
    A(ExtParam, ExtParam),
    B(ExtParam, ExtParam),
    C,
    D,
    E(ExtParam),
    O,
}

impl OrbitLabel {
    pub fn a(l: i64, m: i64) -> OrbitLabel {
        OrbitLabel::A(ExtParam::int(l), ExtParam::int(m))
    }

    pub fn a_inf(l: i64) -> OrbitLabel {
        OrbitLabel::A(ExtParam::int(l), ExtParam::Inf)
    }

    pub fn inf_a(l: i64) -> OrbitLabel {
        OrbitLabel::A(ExtParam::Inf, ExtParam::int(l))
    }

    pub fn b(l: i64, m: i64) -> OrbitLabel {
        OrbitLabel::B(ExtParam::int(l), ExtParam::int(m))
    }

    pub fn inf_b(l: i64) -> OrbitLabel {
        OrbitLabel::B(ExtParam::Inf, ExtParam::int(l))
    }

    pub fn e(l: i64) -> OrbitLabel {
        OrbitLabel::E(ExtParam::int(l))
    }

    pub fn e_inf() -> OrbitLabel {
        OrbitLabel::E(ExtParam::Inf)
    }

    pub fn letter(&self) -> Letter {
        match self {
            OrbitLabel::A(..) => Letter::A,
            OrbitLabel::B(..) => Letter::B,
            OrbitLabel::C => Letter::C,
            OrbitLabel::D => Letter::D,
            OrbitLabel::E(_) => Letter::E,
            OrbitLabel::O => Letter::O,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |why: &str| Err(Error::InvalidLabel(format!("{self}: {why}")));
        match self {
            OrbitLabel::A(p, q) => {
                if p.is_inf() && q.is_inf() {
                    return bad("at most one parameter may be inf");
                }
                if !p.is_inf() && q.is_zero() {
                    return bad("the second parameter must be nonzero");
                }
                Ok(())
            }
            OrbitLabel::B(_, q) if q.is_inf() => bad("the second parameter must be finite"),
            _ => Ok(()),
        }
    }

    /// The same label with parameters mapped into `field`.
    pub fn to_field(&self, field: Field) -> Result<OrbitLabel> {
        let conv = |p: &ExtParam| -> Result<ExtParam> {
            Ok(match p {
                ExtParam::Fin(s) => ExtParam::Fin(s.to_field(field)?),
                ExtParam::Inf => ExtParam::Inf,
            })
        };
        Ok(match self {
            OrbitLabel::A(p, q) => OrbitLabel::A(conv(p)?, conv(q)?),
            OrbitLabel::B(p, q) => OrbitLabel::B(conv(p)?, conv(q)?),
            OrbitLabel::E(p) => OrbitLabel::E(conv(p)?),
            other => other.clone(),
        })
    }

    /// Every label whose finite parameters are drawn from `values`.
    pub fn grid(values: &[i64]) -> Vec<OrbitLabel> {
        let mut out = Vec::new();
        for &l in values {
            for &m in values {
                if m != 0 {
                    out.push(OrbitLabel::a(l, m));
                }
            }
        }
        for &l in values {
            out.push(OrbitLabel::a_inf(l));
            out.push(OrbitLabel::inf_a(l));
        }
        for &l in values {
            for &m in values {
                out.push(OrbitLabel::b(l, m));
            }
            out.push(OrbitLabel::inf_b(l));
        }
        out.push(OrbitLabel::C);
        out.push(OrbitLabel::D);
        for &l in values {
            out.push(OrbitLabel::e(l));
        }
        out.push(OrbitLabel::e_inf());
        out.push(OrbitLabel::O);
        out
    }
}

impl fmt::Display for OrbitLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrbitLabel::A(p, q) => write!(f, "A[{p},{q}]"),
            OrbitLabel::B(p, q) => write!(f, "B[{p},{q}]"),
            OrbitLabel::C => write!(f, "C"),
            OrbitLabel::D => write!(f, "D"),
            OrbitLabel::E(p) => write!(f, "E[{p}]"),
            OrbitLabel::O => write!(f, "O"),
        }
    }
}

impl FromStr for OrbitLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<OrbitLabel> {
        let invalid = || Error::InvalidLabel(s.to_string());
        let t = s.trim();
        let (head, params) = match t.find('[') {
            Some(open) => {
                let inner = t[open + 1..].strip_suffix(']').ok_or_else(invalid)?;
                let ps = inner
                    .split(',')
                    .map(|p| p.parse::<ExtParam>().map_err(|_| invalid()))
                    .collect::<Result<Vec<_>>>()?;
                (&t[..open], ps)
            }
            None => (t, Vec::new()),
        };
        let label = match (head, params.as_slice()) {
            ("A", [p, q]) => OrbitLabel::A(p.clone(), q.clone()),
            ("B", [p, q]) => OrbitLabel::B(p.clone(), q.clone()),
            ("C", []) => OrbitLabel::C,
            ("D", []) => OrbitLabel::D,
            ("E", [p]) => OrbitLabel::E(p.clone()),
            ("O", []) => OrbitLabel::O,
            _ => return Err(invalid()),
        };
        label.validate()?;
        Ok(label)
    }
}

impl Serialize for OrbitLabel {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for OrbitLabel {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

fn unit(field: Field, i: usize, j: usize) -> Matrix {
    Matrix::unit(field, 3, i, j)
}

/// The canonical pair of a class, over the given field.
pub fn representative(label: &OrbitLabel, field: Field) -> Result<MatrixTuple> {
    label.validate()?;
    let label = label.to_field(field)?;
    let e21 = unit(field, 2, 1);
    let e31 = unit(field, 3, 1);
    let e32 = unit(field, 3, 2);
    let n = &e21 + &e32;
    let zero = Matrix::zeros(field, 3, 3);
    let fin = |p: &ExtParam| p.finite().cloned().expect("finite parameter");
    let pair = match &label {
        OrbitLabel::A(ExtParam::Inf, l) => (e32.clone(), &e21 + &e32.scale(&fin(l))),
        OrbitLabel::A(l, ExtParam::Inf) => (e21.clone(), &e21.scale(&fin(l)) + &e32),
        OrbitLabel::A(l, m) => (n.clone(), &n.scale(&fin(l)) + &e32.scale(&fin(m))),
        OrbitLabel::B(ExtParam::Inf, l) => (e31.scale(&fin(l)), n.clone()),
        OrbitLabel::B(l, m) => (n.clone(), &n.scale(&fin(l)) + &e31.scale(&fin(m))),
        OrbitLabel::C => (e21, e31),
        OrbitLabel::D => (e31, e32),
        OrbitLabel::E(ExtParam::Inf) => (zero, e21),
        OrbitLabel::E(l) => (e21.clone(), e21.scale(&fin(l))),
        OrbitLabel::O => (zero.clone(), zero),
    };
    MatrixTuple::pair(pair.0, pair.1)
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: Field = Field::Rational;

    #[test]
    fn representative_examples() {
        let e21 = unit(Q, 2, 1);
        assert_eq!(
            representative(&OrbitLabel::e_inf(), Q).unwrap(),
            MatrixTuple::pair(Matrix::zeros(Q, 3, 3), e21.clone()).unwrap()
        );
        assert!(representative(&OrbitLabel::O, Q).unwrap().is_zero());
        assert_eq!(
            representative(&OrbitLabel::inf_b(1), Q).unwrap(),
            MatrixTuple::pair(unit(Q, 3, 1), &e21 + &unit(Q, 3, 2)).unwrap()
        );
    }

    #[test]
    fn invalid_labels_are_rejected() {
        assert!(OrbitLabel::a(1, 0).validate().is_err());
        assert!(OrbitLabel::A(ExtParam::Inf, ExtParam::Inf).validate().is_err());
        assert!(OrbitLabel::B(ExtParam::int(0), ExtParam::Inf).validate().is_err());
        assert!(representative(&OrbitLabel::a(1, 0), Q).is_err());
        assert!("A[1,0]".parse::<OrbitLabel>().is_err());
        assert!("C[1]".parse::<OrbitLabel>().is_err());
        assert!("F".parse::<OrbitLabel>().is_err());
    }

    #[test]
    fn text_round_trip() {
        for text in [
            "A[2,-1/3]",
            "A[inf,0]",
            "A[0,inf]",
            "B[inf,1/4]",
            "B[0,0]",
            "C",
            "D",
            "E[inf]",
            "E[5]",
            "O",
        ] {
            let label: OrbitLabel = text.parse().unwrap();
            assert_eq!(label.to_string(), text);
        }
        assert_eq!(
            "B[ inf , 1/4 ]".parse::<OrbitLabel>().unwrap(),
            OrbitLabel::B(ExtParam::Inf, ExtParam::Fin(Scalar::ratio(1, 4)))
        );
    }

    #[test]
    fn grid_respects_invariants() {
        let grid = OrbitLabel::grid(&[-1, 0, 1]);
        assert!(grid.iter().all(|l| l.validate().is_ok()));
        // 6 + 3 + 3 A-labels, 9 + 3 B-labels, C, D, 3 + 1 E-labels, O
        assert_eq!(grid.len(), 12 + 12 + 2 + 4 + 1);
    }
}
