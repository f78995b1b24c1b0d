use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{Matrix, Mode, Scalar};

/// Relative residual allowed for float commutators, scaled by the largest
/// squared operator norm.
pub const FLOAT_COMMUTE_TOL: f64 = 1e-8;

/// `n` commuting operators on `ℂ^dim`.
///
/// Construction checks shapes only; use [`FiniteTuple::commuting`] or
/// [`FiniteTuple::validate_commuting`] to check the commutation relations.
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteTuple<F> {
    dim: usize,
    ops: Vec<Matrix<F>>,
}

/// Outcome of [`FiniteTuple::validate_commuting`]. Indices are zero-based.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum CommuteVerdict {
    Commuting,
    Fails { i: usize, j: usize, residual: f64 },
}

impl CommuteVerdict {
    pub fn passed(&self) -> bool {
        matches!(self, CommuteVerdict::Commuting)
    }
}

impl<F: Scalar> FiniteTuple<F> {
    pub fn new(ops: Vec<Matrix<F>>) -> Result<Self> {
        let first = ops
            .first()
            .ok_or_else(|| Error::InvalidSpec("a tuple needs at least one operator".into()))?;
        let dim = first.rows();
        if dim == 0 {
            return Err(Error::InvalidSpec("operators act on a zero space".into()));
        }
        for (i, op) in ops.iter().enumerate() {
            if op.shape() != (dim, dim) {
                return Err(Error::shape(
                    "tuple",
                    format!("operator {i} is {:?}, expected {dim}x{dim}", op.shape()),
                ));
            }
        }
        Ok(FiniteTuple { dim, ops })
    }

    /// Builds the tuple and rejects it unless it commutes.
    pub fn commuting(ops: Vec<Matrix<F>>) -> Result<Self> {
        let t = Self::new(ops)?;
        t.require_commuting()?;
        Ok(t)
    }

    pub fn single(op: Matrix<F>) -> Result<Self> {
        Self::new(vec![op])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn ops(&self) -> &[Matrix<F>] {
        &self.ops
    }

    pub fn op(&self, i: usize) -> &Matrix<F> {
        &self.ops[i]
    }

    pub fn into_ops(self) -> Vec<Matrix<F>> {
        self.ops
    }

    pub fn validate_commuting(&self) -> CommuteVerdict {
        let scale = match F::MODE {
            Mode::Exact => 0.0,
            Mode::Float => {
                let m = self.ops.iter().map(Matrix::frobenius).fold(1.0, f64::max);
                FLOAT_COMMUTE_TOL * m * m
            }
        };
        for i in 0..self.ops.len() {
            for j in i + 1..self.ops.len() {
                // Shapes were checked at construction.
                let c = self.ops[i].commutator(&self.ops[j]).expect("square operators");
                let failed = match F::MODE {
                    Mode::Exact => !c.is_zero(),
                    Mode::Float => c.frobenius() > scale,
                };
                if failed {
                    return CommuteVerdict::Fails {
                        i,
                        j,
                        residual: c.frobenius(),
                    };
                }
            }
        }
        CommuteVerdict::Commuting
    }

    pub fn require_commuting(&self) -> Result<()> {
        match self.validate_commuting() {
            CommuteVerdict::Commuting => Ok(()),
            CommuteVerdict::Fails { i, j, residual } => Err(Error::NonCommuting { i, j, residual }),
        }
    }

    /// `T − λ`.
    pub fn translate(&self, lambda: &[F]) -> Result<Self> {
        self.check_point(lambda)?;
        let ops = self
            .ops
            .iter()
            .zip(lambda)
            .map(|(t, l)| t.shift_diag(l))
            .collect::<Result<_>>()?;
        Ok(FiniteTuple { dim: self.dim, ops })
    }

    /// Coordinate-wise `k`-th powers.
    pub fn power(&self, k: u32) -> Result<Self> {
        if k == 0 {
            return Err(Error::Input("tuple powers start at k = 1".into()));
        }
        let ops = self.ops.iter().map(|t| t.pow(k)).collect::<Result<_>>()?;
        Ok(FiniteTuple { dim: self.dim, ops })
    }

    /// Conjugate transposes of every coordinate.
    pub fn adjoint(&self) -> Self {
        FiniteTuple {
            dim: self.dim,
            ops: self.ops.iter().map(Matrix::adjoint).collect(),
        }
    }

    /// The first `n` coordinates.
    pub fn prefix(&self, n: usize) -> Result<Self> {
        if n == 0 || n > self.ops.len() {
            return Err(Error::Input(format!(
                "cannot take {n} coordinates of a {}-tuple",
                self.ops.len()
            )));
        }
        Ok(FiniteTuple {
            dim: self.dim,
            ops: self.ops[..n].to_vec(),
        })
    }

    /// Similarity transform `P⁻¹ T P` given `P` and its inverse.
    pub fn conjugate_by(&self, p: &Matrix<F>, p_inv: &Matrix<F>) -> Result<Self> {
        let ops = self
            .ops
            .iter()
            .map(|t| p_inv.mul(t)?.mul(p))
            .collect::<Result<_>>()?;
        Ok(FiniteTuple { dim: self.dim, ops })
    }

    pub fn to_float(&self) -> FiniteTuple<Complex64> {
        FiniteTuple {
            dim: self.dim,
            ops: self.ops.iter().map(Matrix::to_float).collect(),
        }
    }

    /// Largest Frobenius norm over the coordinates; bounds every joint eigenvalue.
    pub fn norm_bound(&self) -> f64 {
        self.ops.iter().map(Matrix::frobenius).fold(0.0, f64::max)
    }

    pub(crate) fn check_point(&self, lambda: &[F]) -> Result<()> {
        if lambda.len() != self.ops.len() {
            return Err(Error::Length {
                expected: self.ops.len(),
                found: lambda.len(),
            });
        }
        Ok(())
    }
}
