use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::{Field, Scalar};

/// An ordered tuple `(A_1, …, A_m)` of square matrices of one size over one
/// field. Components are indexed from 0 in the API; generator names
/// `x1, x2, …` are 1-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixTuple {
    n: usize,
    field: Field,
    components: Vec<Matrix>,
}

impl MatrixTuple {
    pub fn new(components: Vec<Matrix>) -> Result<MatrixTuple> {
        let first = components
            .first()
            .ok_or_else(|| Error::ShapeMismatch("a tuple needs at least one component".into()))?;
        let n = first.rows();
        let field = first.field();
        for (k, c) in components.iter().enumerate() {
            if c.shape() != (n, n) {
                return Err(Error::ShapeMismatch(format!(
                    "component {} is {}x{}, expected {n}x{n}",
                    k + 1,
                    c.rows(),
                    c.cols()
                )));
            }
            if c.field() != field {
                return Err(Error::ShapeMismatch(format!(
                    "component {} is over {}, expected {field}",
                    k + 1,
                    c.field()
                )));
            }
        }
        Ok(MatrixTuple { n, field, components })
    }

    pub fn pair(a: Matrix, b: Matrix) -> Result<MatrixTuple> {
        MatrixTuple::new(vec![a, b])
    }

    pub fn zeros(field: Field, n: usize, m: usize) -> MatrixTuple {
        MatrixTuple {
            n,
            field,
            components: vec![Matrix::zeros(field, n, n); m],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.components.len()
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn components(&self) -> &[Matrix] {
        &self.components
    }

    pub fn component(&self, k: usize) -> &Matrix {
        &self.components[k]
    }

    pub fn into_components(self) -> Vec<Matrix> {
        self.components
    }

    pub fn to_field(&self, field: Field) -> Result<MatrixTuple> {
        Ok(MatrixTuple {
            n: self.n,
            field,
            components: self
                .components
                .iter()
                .map(|c| c.to_field(field))
                .collect::<Result<_>>()?,
        })
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(Matrix::is_zero)
    }

    /// `g · A = (g A_1 g⁻¹, …, g A_m g⁻¹)`.
    pub fn conjugate(&self, g: &Matrix) -> Result<MatrixTuple> {
        let g_inv = g.inverse()?;
        Ok(self.conjugate_with(g, &g_inv))
    }

    /// Conjugation when the inverse is already known.
    pub fn conjugate_with(&self, g: &Matrix, g_inv: &Matrix) -> MatrixTuple {
        MatrixTuple {
            n: self.n,
            field: self.field,
            components: self.components.iter().map(|c| &(g * c) * g_inv).collect(),
        }
    }

    /// The linear action on components: the k-th output is `Σ_l h_kl A_l`.
    /// Commutes with simultaneous conjugation.
    pub fn apply_linear(&self, h: &Matrix) -> Result<MatrixTuple> {
        if h.shape() != (self.m(), self.m()) {
            return Err(Error::ShapeMismatch(format!(
                "a {}x{} matrix cannot act on a {}-tuple",
                h.rows(),
                h.cols(),
                self.m()
            )));
        }
        if h.determinant().is_zero() {
            return Err(Error::DivisionByZero);
        }
        let components = (0..self.m())
            .map(|k| {
                (0..self.m()).fold(Matrix::zeros(self.field, self.n, self.n), |acc, l| {
                    &acc + &self.components[l].scale(h.get(k, l))
                })
            })
            .collect();
        Ok(MatrixTuple {
            n: self.n,
            field: self.field,
            components,
        })
    }

    /// The GL₂ action `g · A = (g11 A1 + g12 A2, g21 A1 + g22 A2)` on pairs.
    pub fn apply_gl2(&self, g: &Matrix) -> Result<MatrixTuple> {
        if self.m() != 2 || g.shape() != (2, 2) {
            return Err(Error::ShapeMismatch(
                "the GL2 action needs a pair and a 2x2 matrix".into(),
            ));
        }
        self.apply_linear(g)
    }

    /// Scalar multiple of every component.
    pub fn scale(&self, c: &Scalar) -> MatrixTuple {
        MatrixTuple {
            n: self.n,
            field: self.field,
            components: self.components.iter().map(|m| m.scale(c)).collect(),
        }
    }
}

/// Components in inline syntax, separated by `;`.
impl fmt::Display for MatrixTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, c) in self.components.iter().enumerate() {
            if k > 0 {
                write!(f, ";")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl FromStr for MatrixTuple {
    type Err = Error;

    fn from_str(s: &str) -> Result<MatrixTuple> {
        let mut offset = 0;
        let mut components = Vec::new();
        for part in s.split(';') {
            let m: Matrix = part.parse().map_err(|e| match e {
                Error::Parse { pos, msg } => Error::Parse { pos: pos + offset, msg },
                other => other,
            })?;
            components.push(m);
            offset += part.len() + 1;
        }
        MatrixTuple::new(components)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(i: usize, j: usize) -> Matrix {
        Matrix::unit(Field::Rational, 3, i, j)
    }

    #[test]
    fn gl2_examples() {
        let n = &e(2, 1) + &e(3, 2);
        let a01 = MatrixTuple::pair(n.clone(), e(3, 2)).unwrap();
        let id = Matrix::identity(Field::Rational, 2);
        assert_eq!(a01.apply_gl2(&id).unwrap(), a01);

        // (1 0; λ μ) sends A_{0,1} to A_{λ,μ}
        let h = Matrix::from_ints(&[[1, 0], [2, 3]]);
        let expected = MatrixTuple::pair(
            n.clone(),
            &n.scale(&Scalar::from_i64(2)) + &e(3, 2).scale(&Scalar::from_i64(3)),
        )
        .unwrap();
        assert_eq!(a01.apply_gl2(&h).unwrap(), expected);

        let swap = Matrix::from_ints(&[[0, 1], [1, 0]]);
        let p = MatrixTuple::pair(e(2, 1), e(3, 2)).unwrap();
        assert_eq!(
            p.apply_gl2(&swap).unwrap(),
            MatrixTuple::pair(e(3, 2), e(2, 1)).unwrap()
        );

        let singular = Matrix::from_ints(&[[1, 1], [1, 1]]);
        assert!(p.apply_gl2(&singular).is_err());
    }

    #[test]
    fn gl2_action_commutes_with_conjugation() {
        let p = MatrixTuple::pair(e(2, 1), &e(3, 2) + &e(3, 1)).unwrap();
        let g = Matrix::from_ints(&[[1, 2, 0], [0, 1, 1], [1, 0, 1]]);
        let h = Matrix::from_ints(&[[2, 1], [1, 1]]);
        let lhs = p.conjugate(&g).unwrap().apply_gl2(&h).unwrap();
        let rhs = p.apply_gl2(&h).unwrap().conjugate(&g).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn inline_round_trip() {
        let p = MatrixTuple::pair(e(2, 1), e(3, 1).scale(&Scalar::ratio(-1, 2))).unwrap();
        let text = p.to_string();
        assert_eq!(text.parse::<MatrixTuple>().unwrap(), p);
        assert!("[[0,0],[0,0]];[[1]]".parse::<MatrixTuple>().is_err());
    }
}
