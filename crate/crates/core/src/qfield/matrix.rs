use std::fmt;
use std::ops::{Index, IndexMut};

use num_traits::{Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{QElem, QuadField, Rational};
use crate::error::{Error, Result};

/// Dense row-major matrix over Q(sqrt(D)).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QMatrix {
    field: QuadField,
    rows: usize,
    cols: usize,
    data: Vec<QElem>,
}

impl QMatrix {
    pub fn zeros(field: QuadField, rows: usize, cols: usize) -> Self {
        QMatrix {
            field,
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: QuadField, n: usize) -> Self {
        let mut m = QMatrix::zeros(field, n, n);
        for i in 0..n {
            m[(i, i)] = field.one();
        }
        m
    }

    pub fn from_fn(
        field: QuadField,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> QElem,
    ) -> Result<Self> {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                let x = f(i, j);
                if x.field() != field {
                    return Err(Error::FieldMismatch(field.d(), x.field().d()));
                }
                data.push(x);
            }
        }
        Ok(QMatrix { field, rows, cols, data })
    }

    pub fn from_rows(field: QuadField, rows: Vec<Vec<QElem>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        QMatrix::from_fn(field, r, c, |i, j| rows[i][j].clone())
    }

    pub fn column(field: QuadField, entries: Vec<QElem>) -> Result<Self> {
        let n = entries.len();
        QMatrix::from_fn(field, n, 1, |i, _| entries[i].clone())
    }

    pub fn row(field: QuadField, entries: Vec<QElem>) -> Result<Self> {
        let n = entries.len();
        QMatrix::from_fn(field, 1, n, |_, j| entries[j].clone())
    }

    #[inline]
    pub fn field(&self) -> QuadField {
        self.field
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[QElem] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> Option<&QElem> {
        (i < self.rows && j < self.cols).then(|| &self.data[i * self.cols + j])
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(QElem::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let x = &self[(i, j)];
                    if i == j {
                        x.is_one()
                    } else {
                        x.is_zero()
                    }
                })
            })
    }

    /// Conjugate transpose `A^H`.
    pub fn adjoint(&self) -> QMatrix {
        let mut out = QMatrix::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn transpose(&self) -> QMatrix {
        let mut out = QMatrix::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].clone();
            }
        }
        out
    }

    pub fn is_hermitian(&self) -> bool {
        self.is_square() && *self == self.adjoint()
    }

    fn check_field(&self, other: &QMatrix) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(Error::FieldMismatch(self.field.d(), other.field.d()))
        }
    }

    pub fn mul(&self, other: &QMatrix) -> Result<QMatrix> {
        self.check_field(other)?;
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = QMatrix::zeros(self.field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += &(a * b);
                    }
                }
            }
        }
        Ok(out)
    }

    fn zip_with(&self, other: &QMatrix, f: impl Fn(&QElem, &QElem) -> QElem) -> Result<QMatrix> {
        self.check_field(other)?;
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let data = self.data.iter().zip(&other.data).map(|(a, b)| f(a, b)).collect();
        Ok(QMatrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn add(&self, other: &QMatrix) -> Result<QMatrix> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &QMatrix) -> Result<QMatrix> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn neg(&self) -> QMatrix {
        self.map(|x| -x)
    }

    pub fn scale(&self, s: &QElem) -> QMatrix {
        self.map(|x| x * s)
    }

    pub fn map(&self, f: impl Fn(&QElem) -> QElem) -> QMatrix {
        QMatrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    /// Copy of the block starting at `(r0, c0)` with the given shape.
    pub fn submatrix(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Result<QMatrix> {
        if r0 + rows > self.rows || c0 + cols > self.cols {
            return Err(Error::DimensionMismatch(format!(
                "block {rows}x{cols} at ({r0},{c0}) outside {}x{}",
                self.rows, self.cols
            )));
        }
        QMatrix::from_fn(self.field, rows, cols, |i, j| self[(r0 + i, c0 + j)].clone())
    }

    /// Writes `block` into `self` with its top-left corner at `(r0, c0)`.
    pub fn set_block(&mut self, r0: usize, c0: usize, block: &QMatrix) -> Result<()> {
        self.check_field(block)?;
        if r0 + block.rows > self.rows || c0 + block.cols > self.cols {
            return Err(Error::DimensionMismatch("block does not fit".into()));
        }
        for i in 0..block.rows {
            for j in 0..block.cols {
                self[(r0 + i, c0 + j)] = block[(i, j)].clone();
            }
        }
        Ok(())
    }

    /// Row-reduces a copy of `self`; returns `(rank, determinant-if-square)`.
    fn eliminate(&self) -> (usize, QElem) {
        let mut m = self.clone();
        let mut det = self.field.one();
        let mut rank = 0;
        for col in 0..m.cols {
            let Some(p) = (rank..m.rows).find(|&r| !m[(r, col)].is_zero()) else {
                det = self.field.zero();
                continue;
            };
            if p != rank {
                m.swap_rows(p, rank);
                det = -det;
            }
            let pivot = m[(rank, col)].clone();
            det = &det * &pivot;
            let pinv = pivot.inv().expect("nonzero pivot");
            for r in rank + 1..m.rows {
                if m[(r, col)].is_zero() {
                    continue;
                }
                let factor = &m[(r, col)] * &pinv;
                for c in col..m.cols {
                    let t = &factor * &m[(rank, c)];
                    m[(r, c)] -= &t;
                }
            }
            rank += 1;
            if rank == m.rows {
                break;
            }
        }
        if rank < self.rows.min(self.cols) || !self.is_square() {
            det = self.field.zero();
        }
        (rank, det)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.eliminate().0
    }

    pub fn determinant(&self) -> Result<QElem> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("determinant of non-square matrix".into()));
        }
        if self.rows == 0 {
            return Ok(self.field.one());
        }
        Ok(self.eliminate().1)
    }

    /// Gauss-Jordan inverse.
    pub fn inverse(&self) -> Result<QMatrix> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("inverse of non-square matrix".into()));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = QMatrix::identity(self.field, n);
        for col in 0..n {
            let p = (col..n)
                .find(|&r| !a[(r, col)].is_zero())
                .ok_or_else(|| Error::SingularMatrix(format!("no pivot in column {col}")))?;
            a.swap_rows(p, col);
            inv.swap_rows(p, col);
            let pinv = a[(col, col)].inv()?;
            for j in 0..n {
                a[(col, j)] = &a[(col, j)] * &pinv;
                inv[(col, j)] = &inv[(col, j)] * &pinv;
            }
            for r in 0..n {
                if r == col || a[(r, col)].is_zero() {
                    continue;
                }
                let factor = a[(r, col)].clone();
                for j in 0..n {
                    let t = &factor * &a[(col, j)];
                    a[(r, j)] -= &t;
                    let t = &factor * &inv[(col, j)];
                    inv[(r, j)] -= &t;
                }
            }
        }
        Ok(inv)
    }

    /// Leading principal minors `det(A[..k, ..k])` for `k = 1..=n`.
    pub fn leading_principal_minors(&self) -> Result<Vec<QElem>> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("minors of non-square matrix".into()));
        }
        (1..=self.rows)
            .map(|k| self.submatrix(0, 0, k, k)?.determinant())
            .collect()
    }

    /// Hermitian positive definiteness via Sylvester's criterion.
    pub fn is_positive_definite(&self) -> bool {
        if !self.is_hermitian() {
            return false;
        }
        match self.leading_principal_minors() {
            Ok(minors) => minors.iter().all(|m| m.is_rational() && m.re().is_positive()),
            Err(_) => false,
        }
    }

    /// `x^H · self · x` for a column vector `x`.
    pub fn quadratic_form(&self, x: &QMatrix) -> Result<QElem> {
        let v = x.adjoint().mul(self)?.mul(x)?;
        Ok(v[(0, 0)].clone())
    }

    pub fn trace(&self) -> Result<QElem> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("trace of non-square matrix".into()));
        }
        let mut t = self.field.zero();
        for i in 0..self.rows {
            t += &self[(i, i)];
        }
        Ok(t)
    }

    /// Largest absolute numerator or denominator among entry coordinates.
    pub fn height(&self) -> num_bigint::BigInt {
        let mut h = num_bigint::BigInt::zero();
        let mut bump = |q: &Rational| {
            for v in [q.numer().abs(), q.denom().clone()] {
                if v > h {
                    h = v;
                }
            }
        };
        for x in &self.data {
            bump(x.re());
            bump(x.rt());
        }
        h
    }
}

impl Index<(usize, usize)> for QMatrix {
    type Output = QElem;
    fn index(&self, (i, j): (usize, usize)) -> &QElem {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of bounds");
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for QMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut QElem {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of bounds");
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Display for QMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self[(i, j)].to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct QMatrixRepr {
    d: i64,
    rows: usize,
    cols: usize,
    entries: Vec<[String; 2]>,
}

impl Serialize for QMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        QMatrixRepr {
            d: self.field.d(),
            rows: self.rows,
            cols: self.cols,
            entries: self
                .data
                .iter()
                .map(|x| [x.re().to_string(), x.rt().to_string()])
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for QMatrix {
    fn deserialize<De: Deserializer<'de>>(de: De) -> std::result::Result<Self, De::Error> {
        use serde::de::Error as _;
        let r = QMatrixRepr::deserialize(de)?;
        let field = QuadField::new(r.d).map_err(De::Error::custom)?;
        if r.entries.len() != r.rows * r.cols {
            return Err(De::Error::custom("entry count does not match shape"));
        }
        let mut data = Vec::with_capacity(r.entries.len());
        for [re, rt] in &r.entries {
            let re = super::parse_rational(re).map_err(De::Error::custom)?;
            let rt = super::parse_rational(rt).map_err(De::Error::custom)?;
            data.push(QElem::new(field, re, rt));
        }
        Ok(QMatrix {
            field,
            rows: r.rows,
            cols: r.cols,
            data,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qfield::{int, rat};

    fn k(d: i64) -> QuadField {
        QuadField::new(d).unwrap()
    }

    #[test]
    fn adjoint_examples() {
        let f = k(-1);
        let id = QMatrix::identity(f, 3);
        assert_eq!(id.adjoint(), id);

        let row = QMatrix::row(f, vec![f.sqrt_d(), f.one()]).unwrap();
        let col = row.adjoint();
        assert_eq!(col.rows(), 2);
        assert_eq!(col.cols(), 1);
        assert_eq!(col[(0, 0)], -f.sqrt_d());
        assert_eq!(col[(1, 0)], f.one());
        assert_eq!(col.adjoint(), row);
    }

    #[test]
    fn inverse_and_determinant() {
        let f = k(-5);
        let m = QMatrix::from_rows(
            f,
            vec![
                vec![f.from_int(2), f.sqrt_d()],
                vec![-f.sqrt_d(), f.from_int(3)],
            ],
        )
        .unwrap();
        // det = 6 - (sqrt(-5))(-sqrt(-5)) = 6 + (-5) = 1
        assert_eq!(m.determinant().unwrap(), f.one());
        let inv = m.inverse().unwrap();
        assert!(m.mul(&inv).unwrap().is_identity());
        assert!(inv.mul(&m).unwrap().is_identity());
    }

    #[test]
    fn singular_inverse_fails() {
        let f = k(-7);
        let m = QMatrix::from_rows(
            f,
            vec![vec![f.from_int(1), f.from_int(2)], vec![f.from_int(2), f.from_int(4)]],
        )
        .unwrap();
        assert!(matches!(m.inverse(), Err(Error::SingularMatrix(_))));
        assert!(m.determinant().unwrap().is_zero());
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn positive_definite() {
        let f = k(-3);
        let b = QMatrix::from_rows(
            f,
            vec![
                vec![f.from_int(2), f.elem(rat(1, 2), rat(1, 2))],
                vec![f.elem(rat(1, 2), rat(-1, 2)), f.from_int(1)],
            ],
        )
        .unwrap();
        assert!(b.is_hermitian());
        // minors: 2 and 2 - |(1+sqrt(-3))/2|^2 = 2 - 1 = 1
        let minors = b.leading_principal_minors().unwrap();
        assert_eq!(minors, vec![f.from_int(2), f.from_int(1)]);
        assert!(b.is_positive_definite());
        assert!(!b.neg().is_positive_definite());
    }

    #[test]
    fn mixed_field_product_errors() {
        let a = QMatrix::identity(k(-5), 2);
        let b = QMatrix::identity(k(-6), 2);
        assert_eq!(a.mul(&b), Err(Error::FieldMismatch(-5, -6)));
        let c = QMatrix::identity(k(-5), 3);
        assert!(matches!(a.mul(&c), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn hermitian_form_value_is_real() {
        let f = k(-5);
        let b = QMatrix::from_rows(
            f,
            vec![
                vec![f.from_int(3), f.elem(int(1), int(1))],
                vec![f.elem(int(1), int(-1)), f.from_int(4)],
            ],
        )
        .unwrap();
        let x = QMatrix::column(f, vec![f.elem(rat(2, 3), int(1)), f.elem(int(-1), rat(1, 2))]).unwrap();
        assert!(b.quadratic_form(&x).unwrap().is_rational());
    }

    #[test]
    fn serde_round_trip() {
        let f = k(-2);
        let m = QMatrix::from_rows(f, vec![vec![f.elem(rat(1, 3), int(2)), f.zero()]]).unwrap();
        let s = serde_json::to_string(&m).unwrap();
        let back: QMatrix = serde_json::from_str(&s).unwrap();
        assert_eq!(m, back);
    }
}
