//! The free associative algebra `K⟨x_1, …, x_m⟩`, matrices over it, and
//! evaluation at matrix tuples.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::{Field, Scalar};
use crate::tuple::MatrixTuple;

/// A monomial, as 1-based generator indices; the empty word is 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Word(Vec<usize>);

impl Word {
    pub fn new(indices: Vec<usize>) -> Word {
        assert!(indices.iter().all(|&i| i >= 1), "generator indices start at 1");
        Word(indices)
    }

    pub fn empty() -> Word {
        Word(Vec::new())
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        Word(self.0.iter().chain(&other.0).copied().collect())
    }

    /// All words of the given length in `m` generators, in word order.
    pub fn all_of_length(m: usize, len: usize) -> Vec<Word> {
        let mut out = vec![Word::empty()];
        for _ in 0..len {
            out = out
                .iter()
                .flat_map(|w| (1..=m).map(move |i| Word(w.0.iter().copied().chain([i]).collect())))
                .collect();
        }
        out
    }

    pub fn eval(&self, a: &MatrixTuple) -> Result<Matrix> {
        let mut acc = Matrix::identity(a.field(), a.n());
        for &i in &self.0 {
            if i > a.m() {
                return Err(Error::GeneratorOutOfRange { index: i, arity: a.m() });
            }
            acc = &acc * a.component(i - 1);
        }
        Ok(acc)
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Word) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Word) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let mut k = 0;
        let mut first = true;
        while k < self.0.len() {
            let g = self.0[k];
            let run = self.0[k..].iter().take_while(|&&h| h == g).count();
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if run == 1 {
                write!(f, "x{g}")?;
            } else {
                write!(f, "x{g}^{run}")?;
            }
            k += run;
        }
        Ok(())
    }
}

/// A noncommutative polynomial; zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct NCPoly {
    terms: BTreeMap<Word, Scalar>,
}

impl NCPoly {
    pub fn zero() -> NCPoly {
        NCPoly::default()
    }

    pub fn one() -> NCPoly {
        NCPoly::constant(Scalar::from_i64(1))
    }

    pub fn constant(c: Scalar) -> NCPoly {
        NCPoly::monomial(Word::empty(), c)
    }

    /// The generator `x_i` (1-based).
    pub fn var(i: usize) -> NCPoly {
        NCPoly::monomial(Word::new(vec![i]), Scalar::from_i64(1))
    }

    pub fn monomial(w: Word, c: Scalar) -> NCPoly {
        let mut p = NCPoly::zero();
        p.add_term(w, c);
        p
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Word, Scalar)>) -> NCPoly {
        let mut p = NCPoly::zero();
        for (w, c) in terms {
            p.add_term(w, c);
        }
        p
    }

    fn add_term(&mut self, w: Word, c: Scalar) {
        let sum = match self.terms.remove(&w) {
            Some(old) => &old + &c,
            None => c,
        };
        if !sum.is_zero() {
            self.terms.insert(w, sum);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Scalar)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, w: &Word) -> Option<&Scalar> {
        self.terms.get(w)
    }

    /// The constant value, if no word of positive length occurs.
    pub fn as_constant(&self) -> Option<Scalar> {
        match self.terms.len() {
            0 => Some(Scalar::from_i64(0)),
            1 => self.terms.get(&Word::empty()).cloned(),
            _ => None,
        }
    }

    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().map(Word::len).max()
    }

    /// Largest generator index used, 0 for constants.
    pub fn max_generator(&self) -> usize {
        self.terms.keys().flat_map(|w| w.0.iter().copied()).max().unwrap_or(0)
    }

    pub fn scale(&self, c: &Scalar) -> NCPoly {
        NCPoly::from_terms(self.terms.iter().map(|(w, a)| (w.clone(), a * c)))
    }

    pub fn pow(&self, k: u32) -> NCPoly {
        (0..k).fold(NCPoly::one(), |acc, _| &acc * self)
    }

    /// Substitute matrices for the generators.
    pub fn eval(&self, a: &MatrixTuple) -> Result<Matrix> {
        let max = self.max_generator();
        if max > a.m() {
            return Err(Error::GeneratorOutOfRange {
                index: max,
                arity: a.m(),
            });
        }
        let mut acc = Matrix::zeros(a.field(), a.n(), a.n());
        for (w, c) in &self.terms {
            let c = c.to_field(a.field())?;
            acc = &acc + &w.eval(a)?.scale(&c);
        }
        Ok(acc)
    }

    /// Substitute other polynomials for the generators.
    pub fn compose(&self, images: &[NCPoly]) -> Result<NCPoly> {
        let mut acc = NCPoly::zero();
        for (w, c) in &self.terms {
            let mut term = NCPoly::constant(c.clone());
            for &i in &w.0 {
                let img = images.get(i - 1).ok_or(Error::GeneratorOutOfRange {
                    index: i,
                    arity: images.len(),
                })?;
                term = &term * img;
            }
            acc = &acc + &term;
        }
        Ok(acc)
    }
}

impl<'a> Add<&'a NCPoly> for &'a NCPoly {
    type Output = NCPoly;
    fn add(self, rhs: &'a NCPoly) -> NCPoly {
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a NCPoly> for &'a NCPoly {
    type Output = NCPoly;
    fn sub(self, rhs: &'a NCPoly) -> NCPoly {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a NCPoly> for &'a NCPoly {
    type Output = NCPoly;
    fn mul(self, rhs: &'a NCPoly) -> NCPoly {
        let mut out = NCPoly::zero();
        for (u, a) in &self.terms {
            for (v, b) in &rhs.terms {
                out.add_term(u.concat(v), a * b);
            }
        }
        out
    }
}

impl Neg for &NCPoly {
    type Output = NCPoly;
    fn neg(self) -> NCPoly {
        NCPoly {
            terms: self.terms.iter().map(|(w, c)| (w.clone(), -c)).collect(),
        }
    }
}

impl fmt::Display for NCPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (w, c)) in self.terms.iter().enumerate() {
            let negative = c
                .as_rational()
                .is_some_and(|r| r < &num_rational::BigRational::default());
            let mag = if negative { -c } else { c.clone() };
            match (k, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if w.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{w}")?;
            } else {
                write!(f, "{mag}*{w}")?;
            }
        }
        Ok(())
    }
}

/// A `k × l` matrix over the free algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NCMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<NCPoly>,
}

impl NCMatrix {
    pub fn from_rows(rows: Vec<Vec<NCPoly>>) -> Result<NCMatrix> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if r == 0 || c == 0 || rows.iter().any(|row| row.len() != c) {
            return Err(Error::ShapeMismatch("ragged or empty polynomial matrix".into()));
        }
        Ok(NCMatrix {
            rows: r,
            cols: c,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn scalar(f: NCPoly) -> NCMatrix {
        NCMatrix {
            rows: 1,
            cols: 1,
            entries: vec![f],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &NCPoly {
        &self.entries[i * self.cols + j]
    }

    /// The single entry of a 1×1 matrix.
    pub fn as_poly(&self) -> Option<&NCPoly> {
        (self.rows == 1 && self.cols == 1).then(|| &self.entries[0])
    }

    /// The `kn × ln` block matrix `φ(A)`.
    pub fn eval(&self, a: &MatrixTuple) -> Result<Matrix> {
        let n = a.n();
        let mut out = Matrix::zeros(a.field(), self.rows * n, self.cols * n);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set_block(i * n, j * n, &self.get(i, j).eval(a)?);
            }
        }
        Ok(out)
    }

    pub fn rank_at(&self, a: &MatrixTuple) -> Result<usize> {
        Ok(self.eval(a)?.rank())
    }
}

impl From<NCPoly> for NCMatrix {
    fn from(f: NCPoly) -> NCMatrix {
        NCMatrix::scalar(f)
    }
}

impl fmt::Display for NCMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(p) = self.as_poly() {
            return write!(f, "{p}");
        }
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
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

pub fn eval_poly(f: &NCPoly, a: &MatrixTuple) -> Result<Matrix> {
    f.eval(a)
}

pub fn eval_ncmatrix_rank(phi: &NCMatrix, a: &MatrixTuple) -> Result<usize> {
    phi.rank_at(a)
}

/// Rank of `I ⊗ T_0 + Σ A_i ⊗ T_i`.
pub fn kron_rank(a: &MatrixTuple, t: &[Matrix]) -> Result<usize> {
    if t.len() != a.m() + 1 {
        return Err(Error::ShapeMismatch(format!(
            "expected {} coefficient matrices, got {}",
            a.m() + 1,
            t.len()
        )));
    }
    let shape = t[0].shape();
    if t.iter().any(|ti| ti.shape() != shape) {
        return Err(Error::ShapeMismatch("coefficient matrices differ in shape".into()));
    }
    let field: Field = a.field();
    let t: Vec<Matrix> = t.iter().map(|ti| ti.to_field(field)).collect::<Result<_>>()?;
    let mut acc = Matrix::identity(field, a.n()).kron(&t[0]);
    for (ai, ti) in a.components().iter().zip(&t[1..]) {
        acc = &acc + &ai.kron(ti);
    }
    Ok(acc.rank())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const Q: Field = Field::Rational;

    fn e(i: usize, j: usize) -> Matrix {
        Matrix::unit(Q, 3, i, j)
    }

    fn x(i: usize) -> NCPoly {
        NCPoly::var(i)
    }

    #[test]
    fn word_order_is_length_then_lexicographic() {
        let mut ws = [
            Word::new(vec![2, 1]),
            Word::new(vec![2]),
            Word::empty(),
            Word::new(vec![1, 2]),
            Word::new(vec![1]),
        ];
        ws.sort();
        let printed: Vec<String> = ws.iter().map(ToString::to_string).collect();
        assert_eq!(printed, ["1", "x1", "x2", "x1*x2", "x2*x1"]);
        assert_eq!(Word::all_of_length(2, 2).len(), 4);
    }

    #[test]
    fn empty_word_is_identity() {
        let a = MatrixTuple::pair(e(2, 1), e(3, 2)).unwrap();
        assert_eq!(NCPoly::one().eval(&a).unwrap(), Matrix::identity(Q, 3));
    }

    #[test]
    fn out_of_range_generator() {
        let a = MatrixTuple::pair(e(2, 1), e(3, 2)).unwrap();
        assert_eq!(x(3).eval(&a), Err(Error::GeneratorOutOfRange { index: 3, arity: 2 }));
    }

    #[test]
    fn product_of_two_generators() {
        let p = &x(1) * &x(2);
        let a = MatrixTuple::pair(e(2, 1), e(3, 2)).unwrap();
        let b = MatrixTuple::pair(e(3, 2), e(2, 1)).unwrap();
        assert!(p.eval(&a).unwrap().is_zero());
        assert_eq!(p.eval(&b).unwrap(), e(3, 1));
    }

    #[test]
    fn display_is_deterministic() {
        let p = &(&x(2) - &x(1)) - &x(1).pow(2).scale(&Scalar::from_i64(2));
        assert_eq!(p.to_string(), "-x1 + x2 - 2*x1^2");
        assert_eq!(NCPoly::zero().to_string(), "0");
        let m = NCMatrix::from_rows(vec![vec![x(1), x(2)]]).unwrap();
        assert_eq!(m.to_string(), "[[x1, x2]]");
    }

    #[test]
    fn block_matrix_rank() {
        // [x1 x2] at (E21, E31) has image span{e2, e3}
        let row = NCMatrix::from_rows(vec![vec![x(1), x(2)]]).unwrap();
        let c = MatrixTuple::pair(e(2, 1), e(3, 1)).unwrap();
        assert_eq!(row.rank_at(&c).unwrap(), 2);
        let d = MatrixTuple::pair(e(3, 1), e(3, 2)).unwrap();
        assert_eq!(row.rank_at(&d).unwrap(), 1);
    }

    #[test]
    fn kron_rank_examples() {
        let j = Matrix::from_ints(&[[0, 1], [0, 0]]);
        let z = Matrix::zeros(Q, 2, 2);
        let a = MatrixTuple::pair(j.clone(), z.clone()).unwrap();
        assert_eq!(kron_rank(&a, &[z.clone(), z.clone(), z.clone()]).unwrap(), 0);
        let id = Matrix::identity(Q, 2);
        assert_eq!(kron_rank(&a, &[id, z.clone(), z.clone()]).unwrap(), 4);
        // explicit 4x4 expansion of J ⊗ J has a single nonzero entry at (1,4)
        let mut expanded = Matrix::zeros(Q, 4, 4);
        expanded.set(0, 3, Scalar::from_i64(1));
        assert_eq!(j.kron(&j), expanded);
        assert_eq!(kron_rank(&a, &[z.clone(), j, z]).unwrap(), 1);
    }

    fn small_poly() -> impl Strategy<Value = NCPoly> {
        proptest::collection::vec((proptest::collection::vec(1usize..=2, 0..3), -3i64..=3), 0..4)
            .prop_map(|terms| NCPoly::from_terms(terms.into_iter().map(|(w, c)| (Word::new(w), Scalar::from_i64(c)))))
    }

    fn small_pair() -> impl Strategy<Value = MatrixTuple> {
        proptest::collection::vec(-2i64..=2, 18).prop_map(|v| {
            let a = Matrix::from_ints(&[[v[0], v[1], v[2]], [v[3], v[4], v[5]], [v[6], v[7], v[8]]]);
            let b = Matrix::from_ints(&[[v[9], v[10], v[11]], [v[12], v[13], v[14]], [v[15], v[16], v[17]]]);
            MatrixTuple::pair(a, b).unwrap()
        })
    }

    fn invertible() -> impl Strategy<Value = Matrix> {
        proptest::collection::vec(-2i64..=2, 9).prop_filter_map("singular", |v| {
            let g = Matrix::from_ints(&[[v[0], v[1], v[2]], [v[3], v[4], v[5]], [v[6], v[7], v[8]]]);
            (!g.determinant().is_zero()).then_some(g)
        })
    }

    proptest! {
        #[test]
        fn evaluation_is_a_ring_homomorphism(f in small_poly(), g in small_poly(), a in small_pair()) {
            let fa = f.eval(&a).unwrap();
            let ga = g.eval(&a).unwrap();
            prop_assert_eq!((&f * &g).eval(&a).unwrap(), &fa * &ga);
            prop_assert_eq!((&f + &g).eval(&a).unwrap(), &fa + &ga);
        }

        #[test]
        fn rank_is_conjugation_invariant(f in small_poly(), h in small_poly(), a in small_pair(), g in invertible()) {
            let phi = NCMatrix::from_rows(vec![vec![f, h]]).unwrap();
            let b = a.conjugate(&g).unwrap();
            prop_assert_eq!(phi.rank_at(&a).unwrap(), phi.rank_at(&b).unwrap());
        }

        #[test]
        fn kron_rank_is_conjugation_invariant(a in small_pair(), g in invertible(), v in proptest::collection::vec(-1i64..=1, 12)) {
            let t: Vec<Matrix> = v
                .chunks(4)
                .map(|c| Matrix::from_ints(&[[c[0], c[1]], [c[2], c[3]]]))
                .collect();
            let b = a.conjugate(&g).unwrap();
            prop_assert_eq!(kron_rank(&a, &t).unwrap(), kron_rank(&b, &t).unwrap());
        }
    }
}
