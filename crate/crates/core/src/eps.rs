//! Univariate polynomials and rational functions in a formal parameter ε,
//! and square matrices over them (one-parameter curves in the general linear
//! group).

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::{Field, Scalar};

/// Coefficients in increasing degree, without trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    field: Field,
    coeffs: Vec<Scalar>,
}

impl Poly {
    pub fn zero(field: Field) -> Poly {
        Poly {
            field,
            coeffs: Vec::new(),
        }
    }

    pub fn constant(c: Scalar) -> Poly {
        Poly::new(c.field(), vec![c])
    }

    /// The monomial ε^k.
    pub fn monomial(field: Field, k: usize) -> Poly {
        let mut coeffs = vec![field.zero(); k + 1];
        coeffs[k] = field.one();
        Poly { field, coeffs }
    }

    pub fn new(field: Field, coeffs: Vec<Scalar>) -> Poly {
        let mut p = Poly {
            field,
            coeffs: coeffs
                .into_iter()
                .map(|c| c.to_field(field).expect("coefficient in field"))
                .collect(),
        };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(Scalar::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, k: usize) -> Scalar {
        self.coeffs.get(k).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn leading(&self) -> Option<&Scalar> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &Scalar) -> Scalar {
        self.coeffs
            .iter()
            .rev()
            .fold(self.field.zero(), |acc, c| &(&acc * x) + c)
    }

    pub fn scale(&self, c: &Scalar) -> Poly {
        Poly::new(self.field, self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn monic(&self) -> Poly {
        match self.leading() {
            None => self.clone(),
            Some(l) => self.scale(&l.inv().expect("nonzero leading coefficient")),
        }
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        let dd = d.degree().expect("division by the zero polynomial");
        let lead_inv = d.leading().unwrap().inv().unwrap();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![self.field.zero(); self.coeffs.len().saturating_sub(dd)];
        while rem.len() > dd {
            let k = rem.len() - 1 - dd;
            let c = rem.last().unwrap() * &lead_inv;
            for (i, dc) in d.coeffs.iter().enumerate() {
                rem[k + i] = &rem[k + i] - &(&c * dc);
            }
            quot[k] = c;
            rem.pop();
            while rem.last().is_some_and(Scalar::is_zero) {
                rem.pop();
            }
        }
        (Poly::new(self.field, quot), Poly::new(self.field, rem))
    }

    /// Monic greatest common divisor (zero if both are zero).
    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, rhs: &'a Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new(self.field, (0..n).map(|k| &self.coeff(k) + &rhs.coeff(k)).collect())
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, rhs: &'a Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new(self.field, (0..n).map(|k| &self.coeff(k) - &rhs.coeff(k)).collect())
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, rhs: &'a Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero(self.field);
        }
        let mut out = vec![self.field.zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        Poly::new(self.field, out)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 if c.is_one() => write!(f, "eps")?,
                1 => write!(f, "({c})*eps")?,
                _ if c.is_one() => write!(f, "eps^{k}")?,
                _ => write!(f, "({c})*eps^{k}")?,
            }
        }
        Ok(())
    }
}

/// A reduced quotient of polynomials in ε: monic denominator, coprime parts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    pub fn new(num: Poly, den: Poly) -> Result<RatFunc> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let field = num.field();
        if num.is_zero() {
            return Ok(RatFunc::zero(field));
        }
        let g = num.gcd(&den);
        let (num, _) = num.div_rem(&g);
        let (den, _) = den.div_rem(&g);
        let lead_inv = den.leading().unwrap().inv().unwrap();
        Ok(RatFunc {
            num: num.scale(&lead_inv),
            den: den.scale(&lead_inv),
        })
    }

    pub fn zero(field: Field) -> RatFunc {
        RatFunc {
            num: Poly::zero(field),
            den: Poly::constant(field.one()),
        }
    }

    pub fn one(field: Field) -> RatFunc {
        RatFunc::constant(field.one())
    }

    pub fn constant(c: Scalar) -> RatFunc {
        let field = c.field();
        RatFunc {
            num: Poly::constant(c),
            den: Poly::constant(field.one()),
        }
    }

    /// ε itself.
    pub fn eps(field: Field) -> RatFunc {
        RatFunc {
            num: Poly::monomial(field, 1),
            den: Poly::constant(field.one()),
        }
    }

    /// ε^k for any integer k.
    pub fn eps_pow(field: Field, k: i64) -> RatFunc {
        let m = Poly::monomial(field, k.unsigned_abs() as usize);
        let one = Poly::constant(field.one());
        if k >= 0 {
            RatFunc { num: m, den: one }
        } else {
            RatFunc { num: one, den: m }
        }
    }

    pub fn field(&self) -> Field {
        self.num.field()
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// The constant value, if this function does not depend on ε.
    pub fn as_constant(&self) -> Option<Scalar> {
        (self.num.degree().unwrap_or(0) == 0 && self.den.degree() == Some(0)).then(|| self.num.coeff(0))
    }

    pub fn inv(&self) -> Result<RatFunc> {
        RatFunc::new(self.den.clone(), self.num.clone())
    }

    pub fn pow(&self, k: i64) -> Result<RatFunc> {
        let base = if k < 0 { self.inv()? } else { self.clone() };
        let mut acc = RatFunc::one(self.field());
        for _ in 0..k.unsigned_abs() {
            acc = &acc * &base;
        }
        Ok(acc)
    }

    /// Value at ε = 0. Fails when the reduced denominator vanishes there,
    /// i.e. when the function does not extend to ε = 0.
    pub fn eval_at_zero(&self) -> Result<Scalar> {
        let d0 = self.den.coeff(0);
        if d0.is_zero() {
            return Err(Error::PoleAtZero);
        }
        Ok(&self.num.coeff(0) / &d0)
    }

    /// Value at ε = c, or `None` at a pole.
    pub fn eval(&self, c: &Scalar) -> Option<Scalar> {
        let d = self.den.eval(c);
        (!d.is_zero()).then(|| &self.num.eval(c) / &d)
    }

    pub fn checked_div(&self, rhs: &RatFunc) -> Result<RatFunc> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self * &rhs.inv()?)
    }
}

impl<'a> Add<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: &'a RatFunc) -> RatFunc {
        if self.den == rhs.den {
            return RatFunc::new(&self.num + &rhs.num, self.den.clone()).unwrap();
        }
        RatFunc::new(&(&self.num * &rhs.den) + &(&rhs.num * &self.den), &self.den * &rhs.den).unwrap()
    }
}

impl<'a> Sub<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: &'a RatFunc) -> RatFunc {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: &'a RatFunc) -> RatFunc {
        if self.is_zero() || rhs.is_zero() {
            return RatFunc::zero(self.field());
        }
        RatFunc::new(&self.num * &rhs.num, &self.den * &rhs.den).unwrap()
    }
}

impl<'a> Div<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn div(self, rhs: &'a RatFunc) -> RatFunc {
        self.checked_div(rhs).expect("division by the zero rational function")
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc {
            num: self.num.scale(&-self.field().one()),
            den: self.den.clone(),
        }
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.degree() == Some(0) {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

/// A square matrix of rational functions in ε.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EpsMatrix {
    n: usize,
    field: Field,
    entries: Vec<RatFunc>,
}

impl EpsMatrix {
    pub fn zeros(field: Field, n: usize) -> EpsMatrix {
        EpsMatrix {
            n,
            field,
            entries: vec![RatFunc::zero(field); n * n],
        }
    }

    pub fn identity(field: Field, n: usize) -> EpsMatrix {
        let mut m = EpsMatrix::zeros(field, n);
        for i in 0..n {
            m.entries[i * n + i] = RatFunc::one(field);
        }
        m
    }

    pub fn from_entries(field: Field, n: usize, entries: Vec<RatFunc>) -> Result<EpsMatrix> {
        if entries.len() != n * n {
            return Err(Error::ShapeMismatch(format!(
                "{} entries for a {n}x{n} curve matrix",
                entries.len()
            )));
        }
        Ok(EpsMatrix { n, field, entries })
    }

    pub fn from_matrix(m: &Matrix) -> EpsMatrix {
        assert!(m.is_square());
        EpsMatrix {
            n: m.rows(),
            field: m.field(),
            entries: m.entries().iter().cloned().map(RatFunc::constant).collect(),
        }
    }

    pub fn diag(field: Field, diagonal: Vec<RatFunc>) -> EpsMatrix {
        let n = diagonal.len();
        let mut m = EpsMatrix::zeros(field, n);
        for (i, d) in diagonal.into_iter().enumerate() {
            m.entries[i * n + i] = d;
        }
        m
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn get(&self, i: usize, j: usize) -> &RatFunc {
        &self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: RatFunc) {
        self.entries[i * self.n + j] = v;
    }

    pub fn entries(&self) -> &[RatFunc] {
        &self.entries
    }

    pub fn scale(&self, c: &RatFunc) -> EpsMatrix {
        EpsMatrix {
            n: self.n,
            field: self.field,
            entries: self.entries.iter().map(|e| e * c).collect(),
        }
    }

    fn minor(&self, row: usize, col: usize) -> EpsMatrix {
        let n = self.n - 1;
        let mut entries = Vec::with_capacity(n * n);
        for i in (0..self.n).filter(|&i| i != row) {
            for j in (0..self.n).filter(|&j| j != col) {
                entries.push(self.get(i, j).clone());
            }
        }
        EpsMatrix {
            n,
            field: self.field,
            entries,
        }
    }

    /// Determinant by cofactor expansion along the first row.
    pub fn determinant(&self) -> RatFunc {
        match self.n {
            0 => RatFunc::one(self.field),
            1 => self.entries[0].clone(),
            _ => (0..self.n).fold(RatFunc::zero(self.field), |acc, j| {
                let a = self.get(0, j);
                if a.is_zero() {
                    return acc;
                }
                let term = a * &self.minor(0, j).determinant();
                if j % 2 == 0 {
                    &acc + &term
                } else {
                    &acc - &term
                }
            }),
        }
    }

    /// Adjugate divided by the determinant.
    pub fn inverse(&self) -> Result<EpsMatrix> {
        let det = self.determinant();
        if det.is_zero() {
            return Err(Error::SingularCurveMatrix);
        }
        let det_inv = det.inv()?;
        let mut inv = EpsMatrix::zeros(self.field, self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                let cof = self.minor(j, i).determinant();
                let cof = if (i + j) % 2 == 0 { cof } else { -&cof };
                inv.set(i, j, &cof * &det_inv);
            }
        }
        Ok(inv)
    }

    /// Entrywise value at ε = 0.
    pub fn eval_at_zero(&self) -> Result<Matrix> {
        let data = self
            .entries
            .iter()
            .map(RatFunc::eval_at_zero)
            .collect::<Result<Vec<_>>>()?;
        Matrix::from_vec(self.field, self.n, self.n, data)
    }

    /// Entrywise value at ε = c, or `None` if some entry has a pole there.
    pub fn eval(&self, c: &Scalar) -> Option<Matrix> {
        let data = self.entries.iter().map(|e| e.eval(c)).collect::<Option<Vec<_>>>()?;
        Matrix::from_vec(self.field, self.n, self.n, data).ok()
    }

    pub fn is_identity(&self) -> bool {
        *self == EpsMatrix::identity(self.field, self.n)
    }
}

impl<'a> Mul<&'a EpsMatrix> for &'a EpsMatrix {
    type Output = EpsMatrix;
    fn mul(self, rhs: &'a EpsMatrix) -> EpsMatrix {
        assert_eq!(self.n, rhs.n, "curve matrix size mismatch");
        let n = self.n;
        let mut out = EpsMatrix::zeros(self.field, n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = rhs.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let v = out.get(i, j) + &(a * b);
                    out.set(i, j, v);
                }
            }
        }
        out
    }
}

impl<'a> Add<&'a EpsMatrix> for &'a EpsMatrix {
    type Output = EpsMatrix;
    fn add(self, rhs: &'a EpsMatrix) -> EpsMatrix {
        assert_eq!(self.n, rhs.n, "curve matrix size mismatch");
        EpsMatrix {
            n: self.n,
            field: self.field,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a + b).collect(),
        }
    }
}

impl<'a> Sub<&'a EpsMatrix> for &'a EpsMatrix {
    type Output = EpsMatrix;
    fn sub(self, rhs: &'a EpsMatrix) -> EpsMatrix {
        assert_eq!(self.n, rhs.n, "curve matrix size mismatch");
        EpsMatrix {
            n: self.n,
            field: self.field,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a - b).collect(),
        }
    }
}

impl fmt::Display for EpsMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.n {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.n {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const Q: Field = Field::Rational;

    fn c(v: i64) -> RatFunc {
        RatFunc::constant(Scalar::from_i64(v))
    }

    fn eps() -> RatFunc {
        RatFunc::eps(Q)
    }

    #[test]
    fn eval_at_zero_examples() {
        assert_eq!(eps().pow(2).unwrap().eval_at_zero().unwrap(), Scalar::from_i64(0));
        assert_eq!((&c(1) + &eps()).eval_at_zero().unwrap(), Scalar::from_i64(1));
        assert_eq!(eps().inv().unwrap().eval_at_zero(), Err(Error::PoleAtZero));
        // ε / ε reduces to 1, so no pole
        let q = &eps() / &eps();
        assert_eq!(q.eval_at_zero().unwrap(), Scalar::from_i64(1));
    }

    #[test]
    fn normalization_is_canonical() {
        // (2ε + 2) / (4ε^2 - 4) = (1/2) / (ε - 1)
        let num = Poly::new(Q, vec![Scalar::from_i64(2), Scalar::from_i64(2)]);
        let den = Poly::new(Q, vec![Scalar::from_i64(-4), Scalar::from_i64(0), Scalar::from_i64(4)]);
        let f = RatFunc::new(num, den).unwrap();
        assert_eq!(f.numerator(), &Poly::constant(Scalar::ratio(1, 2)));
        assert_eq!(
            f.denominator(),
            &Poly::new(Q, vec![Scalar::from_i64(-1), Scalar::from_i64(1)])
        );
        assert!(RatFunc::new(Poly::constant(Scalar::from_i64(1)), Poly::zero(Q)).is_err());
    }

    #[test]
    fn diagonal_inverse() {
        let g = EpsMatrix::diag(Q, vec![c(1), c(1), eps()]);
        let expected = EpsMatrix::diag(Q, vec![c(1), c(1), eps().inv().unwrap()]);
        assert_eq!(g.inverse().unwrap(), expected);
        let id = EpsMatrix::identity(Q, 3);
        assert_eq!(id.inverse().unwrap(), id);
    }

    #[test]
    fn curve_row_one_inverse_multiplies_back() {
        // diag(1, ε(λ+μ), ε) + εE12 + λE21 + E32 at λ = 0, μ = 1
        let mut g = EpsMatrix::diag(Q, vec![c(1), eps(), eps()]);
        g.set(0, 1, eps());
        g.set(2, 1, c(1));
        let gi = g.inverse().unwrap();
        assert!((&g * &gi).is_identity());
        assert!((&gi * &g).is_identity());
        // upper-left block is triangular with diagonal 1, ε; the last column is ε·e3
        assert_eq!(g.determinant(), &eps() * &eps());
    }

    #[test]
    fn singular_curve_matrix_is_rejected() {
        let mut g = EpsMatrix::zeros(Q, 2);
        g.set(0, 0, eps());
        g.set(0, 1, eps());
        g.set(1, 0, c(1));
        g.set(1, 1, c(1));
        assert_eq!(g.inverse(), Err(Error::SingularCurveMatrix));
    }

    fn small_ratfunc() -> impl Strategy<Value = RatFunc> {
        (
            proptest::collection::vec(-3i64..=3, 0..3),
            proptest::collection::vec(-3i64..=3, 1..3),
        )
            .prop_filter_map("nonzero denominator", |(n, d)| {
                let num = Poly::new(Q, n.into_iter().map(Scalar::from_i64).collect());
                let den = Poly::new(Q, d.into_iter().map(Scalar::from_i64).collect());
                RatFunc::new(num, den).ok()
            })
    }

    proptest! {
        #[test]
        fn eval_at_zero_is_a_homomorphism(f in small_ratfunc(), g in small_ratfunc()) {
            if let (Ok(f0), Ok(g0)) = (f.eval_at_zero(), g.eval_at_zero()) {
                prop_assert_eq!((&f + &g).eval_at_zero().unwrap(), &f0 + &g0);
                prop_assert_eq!((&f * &g).eval_at_zero().unwrap(), &f0 * &g0);
                prop_assert_eq!((&f - &g).eval_at_zero().unwrap(), &f0 - &g0);
            }
        }

        #[test]
        fn inverse_is_exact(entries in proptest::collection::vec(small_ratfunc(), 4)) {
            let g = EpsMatrix::from_entries(Q, 2, entries).unwrap();
            match g.inverse() {
                Ok(gi) => prop_assert!((&g * &gi).is_identity()),
                Err(e) => {
                    prop_assert_eq!(e, Error::SingularCurveMatrix);
                    prop_assert!(g.determinant().is_zero());
                }
            }
        }
    }
}
