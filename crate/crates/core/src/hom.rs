//! Intertwiner spaces, hom and orbit dimensions, and the 2x2 degeneration
//! oracle.
//!
//! Direction convention: `Hom(A, B) = {T : T·A_i = B_i·T for all i}`, so `T`
//! maps the space of `A` to the space of `B`.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::free_algebra::NCMatrix;
use crate::matrix::{span_dim, Matrix};
use crate::scalar::{Field, Scalar};
use crate::tuple::MatrixTuple;

/// Default seed for the randomized steps.
pub const DEFAULT_SEED: u64 = 0x5eed_3a2b;

const RANDOM_TRIALS: usize = 6;

/// A basis of `Hom(A, B)`.
pub fn intertwiners(a: &MatrixTuple, b: &MatrixTuple) -> Result<Vec<Matrix>> {
    if a.m() != b.m() {
        return Err(Error::ShapeMismatch(format!(
            "cannot intertwine a {}-tuple with a {}-tuple",
            a.m(),
            b.m()
        )));
    }
    if a.field() != b.field() {
        return Err(Error::ShapeMismatch("tuples over different fields".into()));
    }
    let field = a.field();
    let (n, q) = (a.n(), b.n());
    // unknown T is q×n, entry (r, c) at index r*n + c
    let unknowns = q * n;
    let mut rows = Vec::with_capacity(a.m() * unknowns);
    for (ai, bi) in a.components().iter().zip(b.components()) {
        for r in 0..q {
            for c in 0..n {
                let mut eq = vec![field.zero(); unknowns];
                for k in 0..n {
                    eq[r * n + k] = &eq[r * n + k] + ai.get(k, c);
                }
                for k in 0..q {
                    eq[k * n + c] = &eq[k * n + c] - bi.get(r, k);
                }
                rows.push(eq);
            }
        }
    }
    let system = Matrix::from_rows(field, rows)?;
    system
        .nullspace()
        .into_iter()
        .map(|v| Matrix::from_vec(field, q, n, v))
        .collect()
}

pub fn hom_dim(a: &MatrixTuple, b: &MatrixTuple) -> Result<usize> {
    Ok(intertwiners(a, b)?.len())
}

/// `n² − dim End(A)`.
pub fn orbit_dim(a: &MatrixTuple) -> Result<usize> {
    Ok(a.n() * a.n() - hom_dim(a, a)?)
}

/// The first witness whose rank at `A` is smaller than at `B`.
pub fn hom_le_check<'w>(a: &MatrixTuple, b: &MatrixTuple, witnesses: &'w [NCMatrix]) -> Result<Option<&'w NCMatrix>> {
    for phi in witnesses {
        if phi.rank_at(a)? < phi.rank_at(b)? {
            return Ok(Some(phi));
        }
    }
    Ok(None)
}

/// Multivariate polynomial, keyed by sorted variable multisets.
type MPoly = BTreeMap<Vec<usize>, Scalar>;

fn mpoly_mul(p: &MPoly, q: &MPoly) -> MPoly {
    let mut out = MPoly::new();
    for (u, a) in p {
        for (v, b) in q {
            let mut key: Vec<usize> = u.iter().chain(v).copied().collect();
            key.sort_unstable();
            let c = a * b;
            let entry = out.remove(&key).map_or(c.clone(), |old| &old + &c);
            if !entry.is_zero() {
                out.insert(key, entry);
            }
        }
    }
    out
}

fn mpoly_eval(p: &MPoly, point: &[Scalar], field: Field) -> Scalar {
    p.iter().fold(field.zero(), |acc, (key, c)| {
        let term = key.iter().fold(c.clone(), |t, &i| &t * &point[i]);
        &acc + &term
    })
}

/// `det(Σ c_k T_k)` as a polynomial in the coefficients `c_k`.
fn det_polynomial(basis: &[Matrix]) -> MPoly {
    let n = basis[0].rows();
    let field = basis[0].field();
    // entry (i, j) of the generic combination is a linear form
    let linear = |i: usize, j: usize| -> MPoly {
        basis
            .iter()
            .enumerate()
            .filter(|(_, t)| !t.get(i, j).is_zero())
            .map(|(k, t)| (vec![k], t.get(i, j).clone()))
            .collect()
    };
    let mut total = MPoly::new();
    for perm in permutations(n) {
        let mut term: MPoly = [(Vec::new(), field.one())].into_iter().collect();
        for (i, &j) in perm.iter().enumerate() {
            term = mpoly_mul(&term, &linear(i, j));
            if term.is_empty() {
                break;
            }
        }
        let sign = if parity(&perm) { -field.one() } else { field.one() };
        for (key, c) in term {
            let c = &c * &sign;
            let entry = total.remove(&key).map_or(c.clone(), |old| &old + &c);
            if !entry.is_zero() {
                total.insert(key, entry);
            }
        }
    }
    total
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// True for odd permutations.
fn parity(p: &[usize]) -> bool {
    let mut odd = false;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                odd = !odd;
            }
        }
    }
    odd
}

fn combine(basis: &[Matrix], coeffs: &[Scalar]) -> Matrix {
    let (r, c) = basis[0].shape();
    basis
        .iter()
        .zip(coeffs)
        .fold(Matrix::zeros(basis[0].field(), r, c), |acc, (t, x)| &acc + &t.scale(x))
}

/// An invertible element of the span of `basis` (square matrices), if the
/// span has one over the base field.
///
/// A few seeded random combinations are tried first. Otherwise the
/// determinant, a polynomial of degree `n` in the coefficients, is
/// evaluated on the grid `{0, …, n}^d` (or all of `GF(p)^d` when `p ≤ n`),
/// which finds a nonzero value whenever one exists.
pub fn find_invertible(basis: &[Matrix], seed: u64) -> Option<Matrix> {
    let first = basis.first()?;
    if !first.is_square() {
        return None;
    }
    let field = first.field();
    let n = first.rows();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..RANDOM_TRIALS {
        let coeffs: Vec<Scalar> = basis.iter().map(|_| field.from_i64(rng.gen_range(-50..=50))).collect();
        let t = combine(basis, &coeffs);
        if !t.determinant().is_zero() {
            return Some(t);
        }
    }
    let det = det_polynomial(basis);
    if det.is_empty() {
        return None;
    }
    let values: Vec<Scalar> = match field {
        Field::Prime(p) if p <= n as u64 => (0..p as i64).map(|v| field.from_i64(v)).collect(),
        _ => (0..=n as i64).map(|v| field.from_i64(v)).collect(),
    };
    let d = basis.len();
    let mut idx = vec![0usize; d];
    loop {
        let point: Vec<Scalar> = idx.iter().map(|&i| values[i].clone()).collect();
        if !mpoly_eval(&det, &point, field).is_zero() {
            let t = combine(basis, &point);
            debug_assert!(!t.determinant().is_zero());
            return Some(t);
        }
        let mut k = 0;
        loop {
            if k == d {
                return None;
            }
            idx[k] += 1;
            if idx[k] < values.len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

/// An invertible `T` with `T·A_i = B_i·T`, so that `B = T·A·T⁻¹`.
pub fn isomorphism(a: &MatrixTuple, b: &MatrixTuple, seed: u64) -> Result<Option<Matrix>> {
    if a.n() != b.n() {
        return Ok(None);
    }
    let end_a = hom_dim(a, a)?;
    if end_a != hom_dim(b, b)? {
        return Ok(None);
    }
    let basis = intertwiners(a, b)?;
    if basis.len() != end_a {
        return Ok(None);
    }
    Ok(find_invertible(&basis, seed))
}

/// Dimension of the unital algebra generated by the components.
fn unital_algebra_dim(a: &MatrixTuple) -> Result<usize> {
    let mut span = vec![Matrix::identity(a.field(), a.n())];
    let mut frontier = span.clone();
    let mut dim = 1;
    loop {
        let mut next = Vec::new();
        for w in &frontier {
            for c in a.components() {
                next.push(w * c);
            }
        }
        span.extend(next.iter().cloned());
        let new_dim = span_dim(&span)?;
        if new_dim == dim {
            return Ok(dim);
        }
        dim = new_dim;
        frontier = next;
    }
}

fn eigenvalues_2x2(m: &Matrix) -> Result<Vec<Scalar>> {
    let tr = m.get(0, 0) + m.get(1, 1);
    let det = m.determinant();
    let two = m.field().from_i64(2);
    let four = m.field().from_i64(4);
    if m.field() == Field::Prime(2) {
        // x² + tr·x + det over GF(2): test both elements
        let roots: Vec<Scalar> = (0..2)
            .map(|v| m.field().from_i64(v))
            .filter(|x| (&(&(x * x) - &(&tr * x)) + &det).is_zero())
            .collect();
        return if roots.is_empty() {
            Err(Error::NeedsFieldExtension)
        } else {
            Ok(roots)
        };
    }
    let disc = &(&tr * &tr) - &(&four * &det);
    let root = disc.sqrt().ok_or(Error::NeedsFieldExtension)?;
    Ok(vec![&(&tr + &root) / &two, &(&tr - &root) / &two])
}

/// The semisimplification of a 2-dimensional module: if the components
/// share an eigenvector over the base field, the diagonal tuple of the two
/// characters; if the module is simple, `A` itself.
pub fn semisimplify_2x2(a: &MatrixTuple) -> Result<MatrixTuple> {
    if a.n() != 2 {
        return Err(Error::Unsupported(format!(
            "semisimplification needs 2x2 matrices, got {}x{}",
            a.n(),
            a.n()
        )));
    }
    let diagonal = a
        .components()
        .iter()
        .all(|c| c.get(0, 1).is_zero() && c.get(1, 0).is_zero());
    if diagonal || unital_algebra_dim(a)? == 4 {
        return Ok(a.clone());
    }
    let field = a.field();
    let line = match a.components().iter().find(|c| !is_scalar(c)) {
        None => vec![field.one(), field.zero()],
        Some(c) => {
            let mut found = None;
            for lambda in eigenvalues_2x2(c)? {
                let shifted = c - &Matrix::identity(field, 2).scale(&lambda);
                for v in shifted.nullspace() {
                    if a.components().iter().all(|x| is_eigenvector(x, &v)) {
                        found = Some(v);
                        break;
                    }
                }
                if found.is_some() {
                    break;
                }
            }
            // a proper invariant subspace exists because the algebra is proper
            found.ok_or_else(|| Error::Internal("no common eigenvector in a reducible 2x2 module".into()))?
        }
    };
    let components = a
        .components()
        .iter()
        .map(|x| {
            let alpha = eigen_value_on(x, &line);
            let beta = &(x.get(0, 0) + x.get(1, 1)) - &alpha;
            let mut d = Matrix::zeros(field, 2, 2);
            d.set(0, 0, alpha);
            d.set(1, 1, beta);
            d
        })
        .collect();
    MatrixTuple::new(components)
}

fn is_scalar(m: &Matrix) -> bool {
    m.get(0, 1).is_zero() && m.get(1, 0).is_zero() && m.get(0, 0) == m.get(1, 1)
}

fn apply(m: &Matrix, v: &[Scalar]) -> Vec<Scalar> {
    (0..m.rows())
        .map(|i| (0..m.cols()).fold(m.field().zero(), |acc, j| &acc + &(m.get(i, j) * &v[j])))
        .collect()
}

fn is_eigenvector(m: &Matrix, v: &[Scalar]) -> bool {
    let w = apply(m, v);
    // w ∥ v  ⇔  the 2×2 determinant [v w] vanishes
    (&(&v[0] * &w[1]) - &(&v[1] * &w[0])).is_zero()
}

fn eigen_value_on(m: &Matrix, v: &[Scalar]) -> Scalar {
    let w = apply(m, v);
    let k = v.iter().position(|x| !x.is_zero()).expect("nonzero eigenvector");
    &w[k] / &v[k]
}

/// `A ≤deg B` for 2x2 tuples: `B ≅ A`, or `B ≅` the semisimplification of `A`.
pub fn deg2_compare(a: &MatrixTuple, b: &MatrixTuple, seed: u64) -> Result<bool> {
    if a.n() != 2 || b.n() != 2 {
        return Err(Error::Unsupported("the 2x2 oracle needs 2x2 tuples".into()));
    }
    if isomorphism(a, b, seed)?.is_some() {
        return Ok(true);
    }
    let ss = semisimplify_2x2(a)?;
    Ok(isomorphism(b, &ss, seed)?.is_some())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::label::{representative, OrbitLabel};

    const Q: Field = Field::Rational;

    fn rep(l: &OrbitLabel) -> MatrixTuple {
        representative(l, Q).unwrap()
    }

    fn m2(rows: [[i64; 2]; 2]) -> Matrix {
        Matrix::from_ints(&rows)
    }

    #[test]
    fn hom_dim_examples() {
        let o = rep(&OrbitLabel::O);
        assert_eq!(hom_dim(&o, &o).unwrap(), 9);
        let a01 = rep(&OrbitLabel::a(0, 1));
        assert_eq!(hom_dim(&a01, &a01).unwrap(), 2);
        let c = rep(&OrbitLabel::C);
        assert_eq!(hom_dim(&c, &c).unwrap(), 3);
    }

    #[test]
    fn orbit_dim_examples() {
        assert_eq!(orbit_dim(&rep(&OrbitLabel::O)).unwrap(), 0);
        assert_eq!(orbit_dim(&rep(&OrbitLabel::e(0))).unwrap(), 4);
        assert_eq!(orbit_dim(&rep(&OrbitLabel::b(1, 1))).unwrap(), 6);
        assert_eq!(orbit_dim(&rep(&OrbitLabel::a(1, 1))).unwrap(), 7);
    }

    #[test]
    fn intertwiners_satisfy_the_equations() {
        let a = rep(&OrbitLabel::b(2, 5));
        let b = rep(&OrbitLabel::e(2));
        for t in intertwiners(&a, &b).unwrap() {
            for (ai, bi) in a.components().iter().zip(b.components()) {
                assert_eq!(&t * ai, bi * &t);
            }
        }
    }

    #[test]
    fn rectangular_hom_spaces() {
        // Hom from the 1-dimensional zero module into a pair of 3x3 matrices:
        // vectors killed by both components
        let zero1 = MatrixTuple::zeros(Q, 1, 2);
        let c = rep(&OrbitLabel::C);
        assert_eq!(hom_dim(&zero1, &c).unwrap(), 2);
        assert_eq!(hom_dim(&c, &zero1).unwrap(), 1);
        let triple = MatrixTuple::zeros(Q, 3, 3);
        assert!(hom_dim(&c, &triple).is_err());
    }

    #[test]
    fn hom_le_check_examples() {
        use crate::expr::parse_ncpoly;
        use std::collections::HashMap;
        let w = NCMatrix::scalar(parse_ncpoly("x2 - x1", &HashMap::new()).unwrap());
        let a = rep(&OrbitLabel::a(1, 2));
        let b = rep(&OrbitLabel::b(0, 0));
        assert_eq!(hom_le_check(&a, &b, std::slice::from_ref(&w)).unwrap(), Some(&w));
        assert_eq!(hom_le_check(&a, &a, std::slice::from_ref(&w)).unwrap(), None);
    }

    #[test]
    fn grid_fallback_decides_invertibility() {
        // span{E11, E22}: det = c1·c2 is nonzero only off the axes
        let basis = vec![m2([[1, 0], [0, 0]]), m2([[0, 0], [0, 1]])];
        let t = find_invertible(&basis, 1).unwrap();
        assert!(!t.determinant().is_zero());
        // span{E12, E11}: every element is singular
        let singular = vec![m2([[0, 1], [0, 0]]), m2([[1, 0], [0, 0]])];
        assert_eq!(find_invertible(&singular, 1), None);
        // over GF(2), span{E11 + E22, E12 + E21} gives det c1² − c2², nonzero at (1, 0)
        let f2 = Field::prime(2).unwrap();
        let basis2 = vec![
            m2([[1, 0], [0, 1]]).to_field(f2).unwrap(),
            m2([[0, 1], [1, 0]]).to_field(f2).unwrap(),
        ];
        assert!(find_invertible(&basis2, 1).is_some());
    }

    #[test]
    fn det_polynomial_matches_direct_determinant() {
        let basis = vec![
            Matrix::from_ints(&[[1, 2, 0], [0, 1, 0], [3, 0, 1]]),
            Matrix::from_ints(&[[0, 1, 1], [1, 0, 2], [0, 0, 1]]),
        ];
        let det = det_polynomial(&basis);
        for (x, y) in [(1, 0), (0, 1), (2, -3), (5, 7)] {
            let point = [Scalar::from_i64(x), Scalar::from_i64(y)];
            let direct = combine(&basis, &point).determinant();
            assert_eq!(mpoly_eval(&det, &point, Q), direct);
        }
    }

    #[test]
    fn semisimplification_examples() {
        let j = m2([[0, 1], [0, 0]]);
        let z = Matrix::zeros(Q, 2, 2);
        let a = MatrixTuple::pair(j.clone(), z.clone()).unwrap();
        assert_eq!(
            semisimplify_2x2(&a).unwrap(),
            MatrixTuple::pair(z.clone(), z.clone()).unwrap()
        );

        let d = MatrixTuple::pair(m2([[1, 0], [0, 2]]), m2([[3, 0], [0, 4]])).unwrap();
        assert_eq!(semisimplify_2x2(&d).unwrap(), d);

        // rotation and identity span a copy of Q(i): reducible only over an extension
        let rot = MatrixTuple::pair(m2([[0, 1], [-1, 0]]), Matrix::identity(Q, 2)).unwrap();
        assert_eq!(semisimplify_2x2(&rot), Err(Error::NeedsFieldExtension));

        // an upper triangular pair keeps its diagonal characters
        let t = MatrixTuple::pair(m2([[1, 1], [0, 2]]), m2([[0, 5], [0, 3]])).unwrap();
        let ss = semisimplify_2x2(&t).unwrap();
        assert_eq!(
            ss,
            MatrixTuple::pair(m2([[1, 0], [0, 2]]), m2([[0, 0], [0, 3]])).unwrap()
        );
    }

    #[test]
    fn simple_module_is_its_own_semisimplification() {
        let a = MatrixTuple::pair(m2([[0, 1], [0, 0]]), m2([[0, 0], [1, 0]])).unwrap();
        assert_eq!(semisimplify_2x2(&a).unwrap(), a);
    }

    #[test]
    fn deg2_examples() {
        let j = m2([[0, 1], [0, 0]]);
        let z = Matrix::zeros(Q, 2, 2);
        let a = MatrixTuple::pair(j, z.clone()).unwrap();
        let o = MatrixTuple::pair(z.clone(), z).unwrap();
        assert!(deg2_compare(&a, &o, DEFAULT_SEED).unwrap());
        assert!(!deg2_compare(&o, &a, DEFAULT_SEED).unwrap());
        assert!(deg2_compare(&a, &a, DEFAULT_SEED).unwrap());
    }
}
