//! Nullcone membership, simultaneous strict triangularization and the
//! normal-form classifier for nilpotent 3x3 pairs.

use crate::error::{Error, Result};
use crate::hom::isomorphism;
use crate::label::{representative, ExtParam, OrbitLabel};
use crate::matrix::{membership_coords, span_basis, span_dim, Matrix};
use crate::scalar::{Field, Scalar};
use crate::tuple::MatrixTuple;

fn require_3x3(a: &MatrixTuple) -> Result<()> {
    if a.n() == 3 {
        Ok(())
    } else {
        Err(Error::Unsupported(format!("expected 3x3 matrices, got {0}x{0}", a.n())))
    }
}

/// All products `A_i A_j` in word order.
fn length_two_words(a: &MatrixTuple) -> Vec<Matrix> {
    let cs = a.components();
    cs.iter().flat_map(|x| cs.iter().map(move |y| x * y)).collect()
}

/// True iff every product of three components vanishes, which for 3x3
/// matrices is equivalent to the generated algebra being nilpotent.
pub fn is_nilpotent(a: &MatrixTuple) -> Result<bool> {
    require_3x3(a)?;
    let words = length_two_words(a);
    Ok(a.components().iter().all(|x| words.iter().all(|w| (x * w).is_zero())))
}

fn require_nilpotent(a: &MatrixTuple) -> Result<()> {
    if is_nilpotent(a)? {
        Ok(())
    } else {
        Err(Error::NotNilpotent)
    }
}

/// A basis of the (non-unital) algebra generated by the components.
pub fn algebra_basis(a: &MatrixTuple) -> Result<Vec<Matrix>> {
    require_nilpotent(a)?;
    let mut gens: Vec<Matrix> = a.components().to_vec();
    gens.extend(length_two_words(a));
    span_basis(&gens)
}

/// A basis `(e1', e2', e3')` in which every component is strictly lower
/// triangular.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlagBasis {
    /// Columns are `e1', e2', e3'`.
    pub basis: Matrix,
    /// `g = basis⁻¹`, so that `g·A` is strictly lower triangular.
    pub g: Matrix,
}

fn standard(field: Field, n: usize, k: usize) -> Vec<Scalar> {
    (0..n)
        .map(|i| if i == k { field.one() } else { field.zero() })
        .collect()
}

fn vectors_rank(field: Field, vs: &[Vec<Scalar>]) -> usize {
    if vs.is_empty() {
        0
    } else {
        Matrix::from_rows(field, vs.to_vec()).expect("equal lengths").rank()
    }
}

/// Append vectors from `candidates` that enlarge the span of `basis`.
fn extend(field: Field, basis: &mut Vec<Vec<Scalar>>, candidates: impl IntoIterator<Item = Vec<Scalar>>) {
    for v in candidates {
        let before = basis.len();
        basis.push(v);
        if vectors_rank(field, basis) == before {
            basis.pop();
        }
    }
}

fn column_span(field: Field, mats: &[Matrix]) -> Vec<Vec<Scalar>> {
    let mut out = Vec::new();
    extend(
        field,
        &mut out,
        mats.iter().flat_map(|m| (0..m.cols()).map(move |j| m.column(j))),
    );
    out
}

/// Refine `K³ ⊇ S·K³ ⊇ S²·K³ ⊇ 0` into a complete flag. Each step of the
/// chain is mapped by `S` into the next, so listing a basis of `S²K³`, then
/// extending to `SK³` and to `K³`, and reversing, gives strictly lower
/// triangular components.
pub fn triangularize(a: &MatrixTuple) -> Result<FlagBasis> {
    require_nilpotent(a)?;
    let field = a.field();
    let l = column_span(field, &length_two_words(a));
    let mut chain = l;
    extend(field, &mut chain, column_span(field, a.components()));
    extend(field, &mut chain, (0..3).map(|k| standard(field, 3, k)));
    chain.reverse();
    let basis = Matrix::from_columns(field, &chain)?;
    let g = basis.inverse()?;
    let flag = FlagBasis { basis, g };
    let lowered = a.conjugate_with(&flag.g, &flag.basis);
    if !lowered.components().iter().all(Matrix::is_strictly_lower) {
        return Err(Error::Internal(format!("triangularization failed for {a}")));
    }
    Ok(flag)
}

fn ratio(num: &Scalar, den: &Scalar) -> Scalar {
    num / den
}

fn classify_three_dim(a: &MatrixTuple) -> Result<OrbitLabel> {
    let field = a.field();
    let z = length_two_words(a)
        .into_iter()
        .find(|w| !w.is_zero())
        .ok_or_else(|| Error::Internal("three-dimensional algebra with S² = 0".into()))?;
    let e3 = z.column_space().remove(0);
    let kernel = z.nullspace();
    let mut flag = vec![e3.clone()];
    extend(field, &mut flag, kernel);
    let e2 = flag
        .get(1)
        .cloned()
        .ok_or_else(|| Error::Internal("kernel of S² too small".into()))?;
    let mut full = flag.clone();
    extend(field, &mut full, (0..3).map(|k| standard(field, 3, k)));
    let e1 = full[2].clone();
    let p = Matrix::from_columns(field, &[e1, e2, e3])?;
    let lowered = a.conjugate_with(&p.inverse()?, &p);
    let (a1, b1) = (
        lowered.component(0).get(1, 0).clone(),
        lowered.component(0).get(2, 1).clone(),
    );
    let (a2, b2) = (
        lowered.component(1).get(1, 0).clone(),
        lowered.component(1).get(2, 1).clone(),
    );
    if !lowered.components().iter().all(Matrix::is_strictly_lower) {
        return Err(Error::Internal(format!("canonical flag does not lower {a}")));
    }
    let det = &(&a1 * &b2) - &(&a2 * &b1);
    if (a1.is_zero() && b1.is_zero()) || (a2.is_zero() && b2.is_zero()) || det.is_zero() {
        return Err(Error::Internal(format!("degenerate graded parts for {a}")));
    }
    let label = if b1.is_zero() {
        OrbitLabel::A(ExtParam::Fin(ratio(&a2, &a1)), ExtParam::Inf)
    } else if a1.is_zero() {
        OrbitLabel::A(ExtParam::Inf, ExtParam::Fin(ratio(&b2, &b1)))
    } else {
        let lambda = ratio(&a2, &a1);
        let mu = &ratio(&b2, &b1) - &lambda;
        OrbitLabel::A(ExtParam::Fin(lambda), ExtParam::Fin(mu))
    };
    Ok(label)
}

fn classify_b(a: &MatrixTuple) -> Result<OrbitLabel> {
    let (x, y) = (a.component(0), a.component(1));
    let inconsistent = || Error::Internal(format!("B-type relation not solvable for {a}"));
    if x.rank() == 2 {
        let coords = membership_coords(&[x.clone(), x * x], y)?.ok_or_else(inconsistent)?;
        Ok(OrbitLabel::B(
            ExtParam::Fin(coords[0].clone()),
            ExtParam::Fin(coords[1].clone()),
        ))
    } else {
        if y.rank() != 2 {
            return Err(inconsistent());
        }
        let coords = membership_coords(&[y * y], x)?.ok_or_else(inconsistent)?;
        Ok(OrbitLabel::B(ExtParam::Inf, ExtParam::Fin(coords[0].clone())))
    }
}

fn image_line(m: &Matrix) -> Vec<Vec<Scalar>> {
    m.column_space()
}

fn classify_square_zero(a: &MatrixTuple) -> Result<OrbitLabel> {
    let field = a.field();
    let (x, y) = (a.component(0), a.component(1));
    let mut images = image_line(x);
    images.extend(image_line(y));
    let kernels_equal = {
        let (kx, ky) = (x.nullspace(), y.nullspace());
        let mut both = kx.clone();
        both.extend(ky);
        vectors_rank(field, &both) == kx.len()
    };
    match vectors_rank(field, &images) {
        2 if kernels_equal => Ok(OrbitLabel::C),
        1 if !kernels_equal => Ok(OrbitLabel::D),
        _ => Err(Error::Internal(format!("mixed image/kernel configuration for {a}"))),
    }
}

/// The class of a nilpotent 3x3 pair.
pub fn classify_pair(a: &MatrixTuple) -> Result<OrbitLabel> {
    if a.m() != 2 {
        return Err(Error::Unsupported(format!("expected a pair, got a {}-tuple", a.m())));
    }
    let basis = algebra_basis(a)?;
    let square_zero = length_two_words(a).iter().all(Matrix::is_zero);
    match (basis.len(), square_zero) {
        (0, _) => Ok(OrbitLabel::O),
        (1, _) => {
            let (x, y) = (a.component(0), a.component(1));
            if x.is_zero() {
                return Ok(OrbitLabel::E(ExtParam::Inf));
            }
            let c = membership_coords(std::slice::from_ref(x), y)?
                .ok_or_else(|| Error::Internal(format!("one-dimensional algebra not spanned by A1 for {a}")))?;
            Ok(OrbitLabel::E(ExtParam::Fin(c[0].clone())))
        }
        (2, false) => classify_b(a),
        (2, true) => classify_square_zero(a),
        (3, _) => classify_three_dim(a),
        (d, _) => Err(Error::Internal(format!("nilpotent algebra of dimension {d}"))),
    }
}

/// Whether the two tuples are conjugate over the base field.
pub fn orbit_equal(a: &MatrixTuple, b: &MatrixTuple, seed: u64) -> Result<bool> {
    if a.n() != b.n() || a.m() != b.m() {
        return Err(Error::ShapeMismatch("tuples of different shapes".into()));
    }
    Ok(isomorphism(a, b, seed)?.is_some())
}

/// The class of `A` together with an invertible `g` such that
/// `g·A·g⁻¹` is the representative of that class.
pub fn conjugation_witness(a: &MatrixTuple, seed: u64) -> Result<(OrbitLabel, Matrix)> {
    let label = classify_pair(a)?;
    let rep = representative(&label, a.field())?;
    let g = isomorphism(a, &rep, seed)?.ok_or_else(|| Error::NoWitnessFound(label.to_string()))?;
    if a.conjugate(&g)? != rep {
        return Err(Error::Internal(format!("witness for {label} fails verification")));
    }
    Ok((label, g))
}

/// `dim` of the algebra generated by the components (at most 3 for
/// nilpotent 3x3 tuples).
pub fn algebra_dim(a: &MatrixTuple) -> Result<usize> {
    Ok(algebra_basis(a)?.len())
}

/// Dimension of the algebra generated by `mats`, assuming products of three vanish.
pub(crate) fn generated_algebra_dim(mats: &[Matrix]) -> Result<usize> {
    let mut gens = mats.to_vec();
    for x in mats {
        for y in mats {
            gens.push(x * y);
        }
    }
    span_dim(&gens)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hom::DEFAULT_SEED;

    const Q: Field = Field::Rational;

    fn e(i: usize, j: usize) -> Matrix {
        Matrix::unit(Q, 3, i, j)
    }

    fn s(v: i64) -> Scalar {
        Scalar::from_i64(v)
    }

    fn pair(x: Matrix, y: Matrix) -> MatrixTuple {
        MatrixTuple::pair(x, y).unwrap()
    }

    #[test]
    fn nilpotency_examples() {
        assert!(is_nilpotent(&MatrixTuple::zeros(Q, 3, 2)).unwrap());
        assert!(is_nilpotent(&pair(&e(2, 1) + &e(3, 2), e(3, 1))).unwrap());
        assert!(!is_nilpotent(&pair(e(2, 1), e(1, 2))).unwrap());
        assert!(is_nilpotent(&MatrixTuple::zeros(Q, 2, 2)).is_err());
    }

    #[test]
    fn algebra_basis_examples() {
        assert_eq!(algebra_basis(&MatrixTuple::zeros(Q, 3, 2)).unwrap().len(), 0);
        assert_eq!(algebra_basis(&pair(e(2, 1), e(3, 1))).unwrap().len(), 2);
        let n = &e(2, 1) + &e(3, 2);
        assert_eq!(algebra_basis(&pair(n, Matrix::zeros(Q, 3, 3))).unwrap().len(), 2);
    }

    #[test]
    fn triangularize_restores_lower_form() {
        let a = pair(&e(2, 1) + &e(3, 2), e(3, 2));
        let reverse = Matrix::from_ints(&[[0, 0, 1], [0, 1, 0], [1, 0, 0]]);
        let b = a.conjugate(&reverse).unwrap();
        assert!(!b.components().iter().all(Matrix::is_strictly_lower));
        let flag = triangularize(&b).unwrap();
        let lowered = b.conjugate_with(&flag.g, &flag.basis);
        assert!(lowered.components().iter().all(Matrix::is_strictly_lower));

        let zero = MatrixTuple::zeros(Q, 3, 2);
        let flag = triangularize(&zero).unwrap();
        assert!(!flag.basis.determinant().is_zero());
    }

    #[test]
    fn classify_examples() {
        let n = &e(2, 1) + &e(3, 2);
        let a23 = pair(n.clone(), &n.scale(&s(2)) + &e(3, 2).scale(&s(3)));
        assert_eq!(classify_pair(&a23).unwrap(), OrbitLabel::a(2, 3));

        let b = pair(e(3, 1), n.scale(&s(2)));
        assert_eq!(
            classify_pair(&b).unwrap(),
            OrbitLabel::B(ExtParam::Inf, ExtParam::Fin(Scalar::ratio(1, 4)))
        );
        assert_eq!(classify_pair(&MatrixTuple::zeros(Q, 3, 2)).unwrap(), OrbitLabel::O);

        let g = Matrix::from_ints(&[[1, 0, 0], [1, 1, 0], [0, 1, 1]]);
        assert_eq!(classify_pair(&a23.conjugate(&g).unwrap()).unwrap(), OrbitLabel::a(2, 3));
        assert!(orbit_equal(&a23, &a23.conjugate(&g).unwrap(), DEFAULT_SEED).unwrap());
    }

    #[test]
    fn non_nilpotent_is_rejected() {
        assert_eq!(classify_pair(&pair(e(2, 1), e(1, 2))), Err(Error::NotNilpotent));
    }

    #[test]
    fn c_and_d_are_distinct_orbits() {
        let c = representative(&OrbitLabel::C, Q).unwrap();
        let d = representative(&OrbitLabel::D, Q).unwrap();
        assert!(!orbit_equal(&c, &d, DEFAULT_SEED).unwrap());
        assert!(orbit_equal(&c, &c, DEFAULT_SEED).unwrap());
    }

    #[test]
    fn witness_examples() {
        let d = representative(&OrbitLabel::D, Q).unwrap();
        let (label, g) = conjugation_witness(&d, DEFAULT_SEED).unwrap();
        assert_eq!(label, OrbitLabel::D);
        assert_eq!(d.conjugate(&g).unwrap(), d);

        let e5 = representative(&OrbitLabel::e(5), Q).unwrap();
        let diag = Matrix::from_ints(&[[1, 0, 0], [0, 2, 0], [0, 0, 3]]);
        let moved = e5.conjugate(&diag).unwrap();
        let (label, g) = conjugation_witness(&moved, DEFAULT_SEED).unwrap();
        assert_eq!(label, OrbitLabel::e(5));
        assert_eq!(moved.conjugate(&g).unwrap(), pair(e(2, 1), e(2, 1).scale(&s(5))));

        let n = &e(2, 1) + &e(3, 2);
        let b = pair(e(3, 1), n.scale(&s(2)));
        let (label, g) = conjugation_witness(&b, DEFAULT_SEED).unwrap();
        let quarter = Scalar::ratio(1, 4);
        assert_eq!(label, OrbitLabel::B(ExtParam::Inf, ExtParam::Fin(quarter.clone())));
        assert_eq!(b.conjugate(&g).unwrap(), pair(e(3, 1).scale(&quarter), n));
    }

    #[test]
    fn representatives_classify_to_their_labels() {
        let g = Matrix::from_ints(&[[2, 1, 0], [1, 1, 1], [0, 3, 1]]);
        for label in OrbitLabel::grid(&[-2, -1, 0, 1, 2, 3]) {
            let rep = representative(&label, Q).unwrap();
            assert_eq!(classify_pair(&rep).unwrap(), label);
            assert_eq!(
                classify_pair(&rep.conjugate(&g).unwrap()).unwrap(),
                label,
                "conjugate of {label}"
            );
            let flag = triangularize(&rep.conjugate(&g).unwrap()).unwrap();
            assert!(!flag.basis.determinant().is_zero());
        }
    }

    #[test]
    fn prime_field_classification() {
        let f = Field::prime(101).unwrap();
        let g = Matrix::from_ints(&[[2, 1, 0], [1, 1, 1], [0, 3, 1]])
            .to_field(f)
            .unwrap();
        for label in OrbitLabel::grid(&[-1, 0, 2]) {
            let rep = representative(&label, f).unwrap();
            let got = classify_pair(&rep.conjugate(&g).unwrap()).unwrap();
            assert_eq!(got, label.to_field(f).unwrap());
        }
    }
}
