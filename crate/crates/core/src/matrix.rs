//! Dense matrices over an exact [`Field`] and the small amount of linear
//! algebra the rest of the crate needs: rank, reduced echelon form, kernels,
//! determinants and span membership.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{Field, Scalar};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    field: Field,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Matrix {
        Matrix {
            rows,
            cols,
            field,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: Field, n: usize) -> Matrix {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = field.one();
        }
        m
    }

    /// The matrix unit `E_ij` of size `n`, with 1-based indices.
    pub fn unit(field: Field, n: usize, i: usize, j: usize) -> Matrix {
        assert!(
            (1..=n).contains(&i) && (1..=n).contains(&j),
            "E_{i}{j} out of range for n = {n}"
        );
        let mut m = Matrix::zeros(field, n, n);
        m.data[(i - 1) * n + (j - 1)] = field.one();
        m
    }

    pub fn from_rows(field: Field, rows: Vec<Vec<Scalar>>) -> Result<Matrix> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::ShapeMismatch("ragged rows".into()));
        }
        let data = rows
            .into_iter()
            .flatten()
            .map(|s| s.to_field(field))
            .collect::<Result<Vec<_>>>()?;
        Ok(Matrix {
            rows: r,
            cols: c,
            field,
            data,
        })
    }

    /// Builds a rational matrix from integer rows.
    pub fn from_ints<R: AsRef<[i64]>>(rows: &[R]) -> Matrix {
        let rows = rows
            .iter()
            .map(|r| r.as_ref().iter().map(|&v| Scalar::from_i64(v)).collect())
            .collect();
        Matrix::from_rows(Field::Rational, rows).expect("rectangular integer rows")
    }

    pub fn from_vec(field: Field, rows: usize, cols: usize, data: Vec<Scalar>) -> Result<Matrix> {
        if data.len() != rows * cols {
            return Err(Error::ShapeMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        let data = data
            .into_iter()
            .map(|s| s.to_field(field))
            .collect::<Result<Vec<_>>>()?;
        Ok(Matrix {
            rows,
            cols,
            field,
            data,
        })
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(field: Field, columns: &[Vec<Scalar>]) -> Result<Matrix> {
        let rows = columns.first().map_or(0, Vec::len);
        let mut m = Matrix::zeros(field, rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            if col.len() != rows {
                return Err(Error::ShapeMismatch("columns of different length".into()));
            }
            for (i, v) in col.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Zero-based entry access.
    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        let v = v.to_field(self.field).expect("entry belongs to the matrix field");
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    /// Row-major entries.
    pub fn entries(&self) -> &[Scalar] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    /// Zero on and above the diagonal.
    pub fn is_strictly_lower(&self) -> bool {
        (0..self.rows).all(|i| (i..self.cols).all(|j| self.get(i, j).is_zero()))
    }

    pub fn to_field(&self, field: Field) -> Result<Matrix> {
        Matrix::from_vec(field, self.rows, self.cols, self.data.clone())
    }

    pub fn scale(&self, c: &Scalar) -> Matrix {
        self.map(|v| v * c)
    }

    fn map(&self, f: impl Fn(&Scalar) -> Scalar) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            field: self.field,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    pub fn pow(&self, k: u32) -> Matrix {
        assert!(self.is_square());
        (0..k).fold(Matrix::identity(self.field, self.rows), |acc, _| &acc * self)
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &Matrix) -> Matrix {
        let (r, c) = (self.rows * other.rows, self.cols * other.cols);
        let mut out = Matrix::zeros(self.field, r, c);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        out.data[(i * other.rows + k) * c + j * other.cols + l] = a * other.get(k, l);
                    }
                }
            }
        }
        out
    }

    /// Places `block` with its top-left corner at `(r0, c0)`.
    pub fn set_block(&mut self, r0: usize, c0: usize, block: &Matrix) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self.set(r0 + i, c0 + j, block.get(i, j).clone());
            }
        }
    }

    /// Rank over the matrix field. Rational matrices are cleared of
    /// denominators row by row and reduced with Bareiss' fraction-free
    /// elimination; prime-field matrices use plain Gaussian elimination.
    pub fn rank(&self) -> usize {
        match self.field {
            Field::Rational => bareiss_rank(self),
            Field::Prime(_) => self.rref().1.len(),
        }
    }

    /// Reduced row echelon form together with the pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            m.swap_rows(p, r);
            let inv = m.get(r, c).inv().expect("nonzero pivot");
            for j in c..m.cols {
                let v = m.get(r, j) * &inv;
                m.data[r * m.cols + j] = v;
            }
            for i in 0..m.rows {
                if i == r || m.get(i, c).is_zero() {
                    continue;
                }
                let factor = m.get(i, c).clone();
                for j in c..m.cols {
                    let v = m.get(i, j) - &(&factor * m.get(r, j));
                    m.data[i * m.cols + j] = v;
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// A basis of `{x : self · x = 0}`.
    pub fn nullspace(&self) -> Vec<Vec<Scalar>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![self.field.zero(); self.cols];
                v[f] = self.field.one();
                for (row, &pc) in pivots.iter().enumerate() {
                    v[pc] = -r.get(row, f);
                }
                v
            })
            .collect()
    }

    /// A solution of `self · x = b` (free variables set to zero), if any.
    pub fn solve(&self, b: &[Scalar]) -> Option<Vec<Scalar>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = Matrix::zeros(self.field, self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.data[i * (self.cols + 1) + j] = self.get(i, j).clone();
            }
            aug.set(i, self.cols, b[i].clone());
        }
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![self.field.zero(); self.cols];
        for (row, &pc) in pivots.iter().enumerate() {
            x[pc] = r.get(row, self.cols).clone();
        }
        Some(x)
    }

    /// A basis of the column space, taken from the pivot columns.
    pub fn column_space(&self) -> Vec<Vec<Scalar>> {
        let (_, pivots) = self.rref();
        pivots.iter().map(|&c| self.column(c)).collect()
    }

    pub fn determinant(&self) -> Scalar {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        let mut m = self.clone();
        let mut det = self.field.one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m.get(i, c).is_zero()) else {
                return self.field.zero();
            };
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            let pivot = m.get(c, c).clone();
            det = &det * &pivot;
            let inv = pivot.inv().expect("nonzero pivot");
            for i in c + 1..n {
                if m.get(i, c).is_zero() {
                    continue;
                }
                let factor = m.get(i, c) * &inv;
                for j in c..n {
                    let v = m.get(i, j) - &(&factor * m.get(c, j));
                    m.data[i * n + j] = v;
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::ShapeMismatch("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut aug = Matrix::zeros(self.field, n, 2 * n);
        aug.set_block(0, 0, self);
        aug.set_block(0, n, &Matrix::identity(self.field, n));
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(Error::DivisionByZero);
        }
        let mut inv = Matrix::zeros(self.field, n, n);
        for i in 0..n {
            for j in 0..n {
                inv.data[i * n + j] = r.get(i, n + j).clone();
            }
        }
        Ok(inv)
    }
}

fn bareiss_rank(m: &Matrix) -> usize {
    let mut rows: Vec<Vec<BigInt>> = (0..m.rows)
        .map(|i| {
            let row = m.row(i);
            let lcm = row
                .iter()
                .map(|s| s.as_rational().expect("rational entry").denom().clone())
                .fold(BigInt::one(), |acc, d| acc.lcm(&d));
            row.iter()
                .map(|s| {
                    let r = s.as_rational().expect("rational entry");
                    r.numer() * (&lcm / r.denom())
                })
                .collect()
        })
        .collect();
    let cols = m.cols;
    let mut prev = BigInt::one();
    let mut rank = 0;
    for c in 0..cols {
        if rank == rows.len() {
            break;
        }
        let Some(p) = (rank..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(p, rank);
        let (head, tail) = rows.split_at_mut(rank + 1);
        let pivot_row = &head[rank];
        for row in tail.iter_mut() {
            for j in c + 1..cols {
                let num = &row[j] * &pivot_row[c] - &row[c] * &pivot_row[j];
                let (q, r) = num.div_rem(&prev);
                debug_assert!(r.is_zero(), "Bareiss division must be exact");
                row[j] = q;
            }
            row[c] = BigInt::zero();
        }
        prev = pivot_row[c].clone();
        rank += 1;
    }
    rank
}

/// Row-major flattening of each matrix, one vector per matrix.
fn flatten(mats: &[Matrix]) -> Result<Vec<Vec<Scalar>>> {
    let Some(first) = mats.first() else {
        return Ok(Vec::new());
    };
    if mats.iter().any(|m| m.shape() != first.shape()) {
        return Err(Error::ShapeMismatch("matrices of different shapes".into()));
    }
    Ok(mats.iter().map(|m| m.data.clone()).collect())
}

/// Dimension of the linear span of `mats`.
pub fn span_dim(mats: &[Matrix]) -> Result<usize> {
    let vecs = flatten(mats)?;
    if vecs.is_empty() {
        return Ok(0);
    }
    Ok(Matrix::from_rows(mats[0].field, vecs)?.rank())
}

/// A linearly independent subset of `mats` spanning the same space.
pub fn span_basis(mats: &[Matrix]) -> Result<Vec<Matrix>> {
    let vecs = flatten(mats)?;
    if vecs.is_empty() {
        return Ok(Vec::new());
    }
    let field = mats[0].field;
    let (_, pivots) = Matrix::from_columns(field, &vecs)?.rref();
    Ok(pivots.into_iter().map(|i| mats[i].clone()).collect())
}

/// Coefficients expressing `m` in `basis`, or `None` when `m` lies outside
/// the span. The basis must be linearly independent.
pub fn membership_coords(basis: &[Matrix], m: &Matrix) -> Result<Option<Vec<Scalar>>> {
    if basis.iter().any(|b| b.shape() != m.shape()) {
        return Err(Error::ShapeMismatch("basis and target shapes differ".into()));
    }
    if basis.is_empty() {
        return Ok(m.is_zero().then(Vec::new));
    }
    let columns = flatten(basis)?;
    let a = Matrix::from_columns(m.field, &columns)?;
    if a.rank() < basis.len() {
        return Err(Error::DependentBasis);
    }
    Ok(a.solve(&m.data))
}

fn assert_same_shape(a: &Matrix, b: &Matrix, op: &str) {
    assert_eq!(a.shape(), b.shape(), "shape mismatch in matrix {op}");
}

impl<'a> Add<&'a Matrix> for &'a Matrix {
    type Output = Matrix;
    fn add(self, rhs: &'a Matrix) -> Matrix {
        assert_same_shape(self, rhs, "addition");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            field: self.field,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl<'a> Sub<&'a Matrix> for &'a Matrix {
    type Output = Matrix;
    fn sub(self, rhs: &'a Matrix) -> Matrix {
        assert_same_shape(self, rhs, "subtraction");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            field: self.field,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl<'a> Mul<&'a Matrix> for &'a Matrix {
    type Output = Matrix;
    fn mul(self, rhs: &'a Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.rows, "shape mismatch in matrix product");
        let mut out = Matrix::zeros(self.field, self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * rhs.cols + j;
                    out.data[idx] = &out.data[idx] + &(a * b);
                }
            }
        }
        out
    }
}

impl Add for Matrix {
    type Output = Matrix;
    fn add(self, rhs: Matrix) -> Matrix {
        &self + &rhs
    }
}

impl Sub for Matrix {
    type Output = Matrix;
    fn sub(self, rhs: Matrix) -> Matrix {
        &self - &rhs
    }
}

impl Mul for Matrix {
    type Output = Matrix;
    fn mul(self, rhs: Matrix) -> Matrix {
        &self * &rhs
    }
}

impl Neg for &Matrix {
    type Output = Matrix;
    fn neg(self) -> Matrix {
        self.map(|v| -v)
    }
}

impl fmt::Display for Matrix {
    /// Inline syntax, e.g. `[[0,0,0],[1,0,0],[0,1,0]]`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "[")?;
            for (j, v) in self.row(i).iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{v}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl FromStr for Matrix {
    type Err = Error;

    /// Parses the inline syntax into a rational matrix. Entries are integers
    /// or fractions `p/q`.
    fn from_str(s: &str) -> Result<Matrix> {
        let bytes = s.as_bytes();
        let mut pos = 0;
        let skip_ws = |pos: &mut usize| {
            while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
                *pos += 1;
            }
        };
        let expect = |pos: &mut usize, c: u8| -> Result<()> {
            skip_ws(pos);
            if bytes.get(*pos) == Some(&c) {
                *pos += 1;
                Ok(())
            } else {
                Err(Error::parse(*pos, format!("expected `{}`", c as char)))
            }
        };
        expect(&mut pos, b'[')?;
        let mut rows: Vec<Vec<Scalar>> = Vec::new();
        loop {
            expect(&mut pos, b'[')?;
            let mut row = Vec::new();
            loop {
                skip_ws(&mut pos);
                let start = pos;
                while pos < bytes.len() && !matches!(bytes[pos], b',' | b']') {
                    pos += 1;
                }
                let entry: Scalar = s[start..pos].parse().map_err(|e| match e {
                    Error::Parse { pos: p, msg } => Error::parse(start + p, msg),
                    other => other,
                })?;
                row.push(entry);
                skip_ws(&mut pos);
                match bytes.get(pos) {
                    Some(b',') => pos += 1,
                    Some(b']') => {
                        pos += 1;
                        break;
                    }
                    _ => return Err(Error::parse(pos, "unterminated row")),
                }
            }
            rows.push(row);
            skip_ws(&mut pos);
            match bytes.get(pos) {
                Some(b',') => pos += 1,
                Some(b']') => {
                    pos += 1;
                    break;
                }
                _ => return Err(Error::parse(pos, "unterminated matrix")),
            }
        }
        skip_ws(&mut pos);
        if pos != bytes.len() {
            return Err(Error::parse(pos, "trailing input"));
        }
        Matrix::from_rows(Field::Rational, rows)
    }
}
