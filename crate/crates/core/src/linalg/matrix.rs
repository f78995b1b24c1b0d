use std::fmt;

use num_complex::Complex64;

use super::scalar::{Mode, Qi, Scalar};
use crate::error::{Error, Result};

/// Dense row-major matrix over a [`Scalar`] field.
///
/// Zero rows or zero columns are allowed; such matrices have rank 0.
#[derive(Clone, PartialEq)]
pub struct Matrix<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

pub type ExactMatrix = Matrix<Qi>;
pub type FloatMatrix = Matrix<Complex64>;

impl<F: Scalar> Matrix<F> {
    pub fn from_vec(rows: usize, cols: usize, data: Vec<F>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::shape(
                "from_vec",
                format!("{} entries for a {rows}x{cols} matrix", data.len()),
            ));
        }
        if data.iter().any(|x| !x.to_c64().is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn from_rows(rows: Vec<Vec<F>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::shape("from_rows", "ragged rows"));
        }
        Self::from_vec(r, c, rows.into_iter().flatten().collect())
    }

    /// Builds a matrix from small Gaussian integers given as `(re, im)` pairs.
    pub fn from_int_rows(rows: &[&[(i64, i64)]]) -> Self {
        let data = rows
            .iter()
            .map(|row| row.iter().map(|&(a, b)| F::from_parts(a, b)).collect())
            .collect();
        Self::from_rows(data).expect("well-formed integer rows")
    }

    /// Real integer entries.
    pub fn from_reals(rows: &[&[i64]]) -> Self {
        let data = rows
            .iter()
            .map(|row| row.iter().map(|&a| F::from_parts(a, 0)).collect())
            .collect();
        Self::from_rows(data).expect("well-formed integer rows")
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![F::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = F::one();
        }
        m
    }

    pub fn scalar(n: usize, c: F) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = c.clone();
        }
        m
    }

    pub fn diagonal(diag: &[F]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for (i, d) in diag.iter().enumerate() {
            m.data[i * n + i] = d.clone();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &F {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: F) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[F] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn data(&self) -> &[F] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<F>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn diag(&self) -> Vec<F> {
        (0..self.rows.min(self.cols))
            .map(|i| self.get(i, i).clone())
            .collect()
    }

    pub fn is_upper_triangular(&self) -> bool {
        (0..self.rows).all(|i| (0..i.min(self.cols)).all(|j| self.get(i, j).is_zero()))
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.get(i, j).clone());
            }
        }
        Matrix {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let mut t = self.transpose();
        for x in &mut t.data {
            *x = x.conj();
        }
        t
    }

    pub fn map(&self, f: impl Fn(&F) -> F) -> Self {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn scale(&self, c: &F) -> Self {
        self.map(|x| x.clone() * c.clone())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip(other, "add", |a, b| a.clone() + b.clone())
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip(other, "sub", |a, b| a.clone() - b.clone())
    }

    fn zip(&self, other: &Self, op: &'static str, f: impl Fn(&F, &F) -> F) -> Result<Self> {
        if self.shape() != other.shape() {
            return Err(Error::shape(
                op,
                format!("{:?} vs {:?}", self.shape(), other.shape()),
            ));
        }
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| f(a, b)).collect(),
        })
    }

    /// `self - c·I`.
    pub fn shift_diag(&self, c: &F) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::shape("shift_diag", "matrix is not square"));
        }
        let mut m = self.clone();
        if c.is_zero() {
            return Ok(m);
        }
        for i in 0..self.rows {
            let v = m.get(i, i).clone() - c.clone();
            m.set(i, i, v);
        }
        Ok(m)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::shape(
                "mul",
                format!("{:?} times {:?}", self.shape(), other.shape()),
            ));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * other.cols + j;
                    out.data[idx] = out.data[idx].clone() + a.clone() * b.clone();
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[F]) -> Result<Vec<F>> {
        if v.len() != self.cols {
            return Err(Error::shape("mul_vec", "length mismatch"));
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(F::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
            })
            .collect())
    }

    /// `self^k` by repeated squaring; `k = 0` gives the identity.
    pub fn pow(&self, k: u32) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::shape("pow", "matrix is not square"));
        }
        let mut result = Self::identity(self.rows);
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(result)
    }

    /// Solves `self · X = rhs` for square nonsingular `self` by Gauss–Jordan
    /// elimination (partial pivoting in float mode).
    pub fn solve(&self, rhs: &Self) -> Result<Self> {
        if !self.is_square() || rhs.rows != self.rows {
            return Err(Error::shape(
                "solve",
                format!("{:?} against {:?}", self.shape(), rhs.shape()),
            ));
        }
        let n = self.rows;
        let w = n + rhs.cols;
        let mut a: Vec<Vec<F>> = (0..n)
            .map(|i| {
                let mut row = self.row(i).to_vec();
                row.extend_from_slice(rhs.row(i));
                row
            })
            .collect();
        for c in 0..n {
            let p = match F::MODE {
                Mode::Exact => (c..n).find(|&i| !a[i][c].is_zero()),
                Mode::Float => (c..n)
                    .max_by(|&i, &j| a[i][c].modulus().total_cmp(&a[j][c].modulus()))
                    .filter(|&i| a[i][c].modulus() > 0.0),
            };
            let p = p.ok_or_else(|| Error::Invariant("singular system in solve".into()))?;
            a.swap(c, p);
            let inv = F::one() / a[c][c].clone();
            for j in c..w {
                a[c][j] = a[c][j].clone() * inv.clone();
            }
            let prow = a[c].clone();
            for (i, row) in a.iter_mut().enumerate() {
                if i != c && !row[c].is_zero() {
                    let f = row[c].clone();
                    for j in c..w {
                        row[j] = row[j].clone() - f.clone() * prow[j].clone();
                    }
                }
            }
        }
        let data = a.into_iter().flat_map(|row| row.into_iter().skip(n)).collect();
        Ok(Matrix {
            rows: n,
            cols: rhs.cols,
            data,
        })
    }

    /// `self·other - other·self`.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.mul(other)?.sub(&other.mul(self)?)
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(Scalar::modulus).fold(0.0, f64::max)
    }

    /// Frobenius norm, evaluated in floating point.
    pub fn frobenius(&self) -> f64 {
        self.data
            .iter()
            .map(|x| x.to_c64().norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn submatrix(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols.len());
        for i in rows.clone() {
            for j in cols.clone() {
                data.push(self.get(i, j).clone());
            }
        }
        Matrix {
            rows: rows.len(),
            cols: cols.len(),
            data,
        }
    }

    /// Copies `block` into `self` with its top-left corner at `(r0, c0)`.
    pub fn set_block(&mut self, r0: usize, c0: usize, block: &Self) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self.set(r0 + i, c0 + j, block.get(i, j).clone());
            }
        }
    }

    pub fn to_float(&self) -> FloatMatrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(Scalar::to_c64).collect(),
        }
    }
}

/// Block concatenation `[A₁ | A₂ | …]`. The column space of the result is the
/// sum of the column spaces.
pub fn hstack<F: Scalar>(ms: &[Matrix<F>]) -> Result<Matrix<F>> {
    let Some(first) = ms.first() else {
        return Err(Error::shape("hstack", "no blocks"));
    };
    let rows = first.rows;
    if let Some(bad) = ms.iter().find(|m| m.rows != rows) {
        return Err(Error::shape(
            "hstack",
            format!("row counts {rows} and {}", bad.rows),
        ));
    }
    let cols = ms.iter().map(|m| m.cols).sum();
    let mut out = Matrix::zeros(rows, cols);
    let mut c0 = 0;
    for m in ms {
        out.set_block(0, c0, m);
        c0 += m.cols;
    }
    Ok(out)
}

/// Block concatenation top to bottom. The kernel of the result is the
/// intersection of the kernels.
pub fn vstack<F: Scalar>(ms: &[Matrix<F>]) -> Result<Matrix<F>> {
    let Some(first) = ms.first() else {
        return Err(Error::shape("vstack", "no blocks"));
    };
    let cols = first.cols;
    if let Some(bad) = ms.iter().find(|m| m.cols != cols) {
        return Err(Error::shape(
            "vstack",
            format!("column counts {cols} and {}", bad.cols),
        ));
    }
    let rows = ms.iter().map(|m| m.rows).sum();
    let mut out = Matrix::zeros(rows, cols);
    let mut r0 = 0;
    for m in ms {
        out.set_block(r0, 0, m);
        r0 += m.rows;
    }
    Ok(out)
}

/// Kronecker product: block `(i, j)` of the result is `a[i][j]·b`.
pub fn kron<F: Scalar>(a: &Matrix<F>, b: &Matrix<F>) -> Matrix<F> {
    let rows = a.rows * b.rows;
    let cols = a.cols * b.cols;
    let mut out = Matrix::zeros(rows, cols);
    for i in 0..a.rows {
        for j in 0..a.cols {
            let x = a.get(i, j);
            if x.is_zero() {
                continue;
            }
            for k in 0..b.rows {
                for l in 0..b.cols {
                    let y = b.get(k, l);
                    if y.is_zero() {
                        continue;
                    }
                    out.set(i * b.rows + k, j * b.cols + l, x.clone() * y.clone());
                }
            }
        }
    }
    out
}

impl<F: fmt::Debug> fmt::Debug for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", &self.data[i * self.cols..(i + 1) * self.cols])?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type M = ExactMatrix;

    #[test]
    fn kron_identities() {
        assert_eq!(kron(&M::identity(2), &M::identity(3)), M::identity(6));
        let a = M::from_reals(&[&[1, 2], &[3, 4]]);
        assert!(kron(&a, &M::zeros(2, 2)).is_zero());
        let d = kron(
            &M::diagonal(&[Qi::from_parts(0, 0), Qi::from_parts(1, 0)]),
            &M::diagonal(&[Qi::from_parts(2, 0), Qi::from_parts(3, 0)]),
        );
        assert_eq!(d, M::from_reals(&[&[0, 0, 0, 0], &[0, 0, 0, 0], &[0, 0, 2, 0], &[0, 0, 0, 3]]));
    }

    #[test]
    fn stacking_shapes() {
        let h = hstack(&[M::identity(2), M::identity(2)]).unwrap();
        assert_eq!(h.shape(), (2, 4));
        let v = vstack(&[M::identity(2), M::zeros(3, 2)]).unwrap();
        assert_eq!(v.shape(), (5, 2));
        assert!(hstack(&[M::identity(2), M::identity(3)]).is_err());
        assert!(vstack::<Qi>(&[]).is_err());
    }

    #[test]
    fn powers_and_products() {
        let j = M::from_reals(&[&[0, 1], &[0, 0]]);
        assert!(j.pow(2).unwrap().is_zero());
        assert_eq!(j.pow(0).unwrap(), M::identity(2));
        let a = M::from_int_rows(&[&[(1, 1), (2, 0)], &[(0, 0), (3, -1)]]);
        assert_eq!(a.pow(3).unwrap(), a.mul(&a).unwrap().mul(&a).unwrap());
        assert_eq!(a.adjoint().adjoint(), a);
    }

    #[test]
    fn rejects_bad_shapes() {
        assert!(M::from_vec(2, 2, vec![Qi::zero(); 3]).is_err());
        assert!(FloatMatrix::from_vec(1, 1, vec![Complex64::new(f64::NAN, 0.0)]).is_err());
    }
}
