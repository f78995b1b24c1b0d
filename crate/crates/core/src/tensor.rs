//! Tuples derived from two factor tuples: `(S ⊗ I, I ⊗ T)` and `(L_S, R_T)`.
//!
//! Matrices act on column-major vectorizations: `vec(X)` stacks the columns
//! of a `p × q` matrix, so `vec(SX) = (I_q ⊗ S) vec(X)` and
//! `vec(XT) = (Tᵀ ⊗ I_p) vec(X)`.

use crate::error::Result;
use crate::linalg::{kron, Matrix, Scalar};
use crate::model::FiniteTuple;

/// `(S₁⊗I, …, S_n⊗I, I⊗T₁, …, I⊗T_m)` on `ℂᵖ ⊗ ℂ^q`.
#[derive(Clone, Debug)]
pub struct TensorTuple<F: Scalar> {
    pub tuple: FiniteTuple<F>,
    pub left: FiniteTuple<F>,
    pub right: FiniteTuple<F>,
}

/// `(L_{S₁}, …, L_{S_n}, R_{T₁}, …, R_{T_m})` on vectorized `p × q` matrices.
#[derive(Clone, Debug)]
pub struct MultTuple<F: Scalar> {
    pub tuple: FiniteTuple<F>,
    pub left: FiniteTuple<F>,
    pub right: FiniteTuple<F>,
}

pub fn tensor_tuple<F: Scalar>(s: &FiniteTuple<F>, t: &FiniteTuple<F>) -> Result<TensorTuple<F>> {
    s.require_commuting()?;
    t.require_commuting()?;
    let (ip, iq) = (Matrix::identity(s.dim()), Matrix::identity(t.dim()));
    let mut ops: Vec<Matrix<F>> = s.ops().iter().map(|a| kron(a, &iq)).collect();
    ops.extend(t.ops().iter().map(|b| kron(&ip, b)));
    Ok(TensorTuple {
        tuple: FiniteTuple::commuting(ops)?,
        left: s.clone(),
        right: t.clone(),
    })
}

pub fn mult_tuple<F: Scalar>(s: &FiniteTuple<F>, t: &FiniteTuple<F>) -> Result<MultTuple<F>> {
    s.require_commuting()?;
    t.require_commuting()?;
    let (ip, iq) = (Matrix::identity(s.dim()), Matrix::identity(t.dim()));
    let mut ops: Vec<Matrix<F>> = s.ops().iter().map(|a| left_mult(a, &iq)).collect();
    ops.extend(t.ops().iter().map(|b| right_mult(b, &ip)));
    Ok(MultTuple {
        tuple: FiniteTuple::commuting(ops)?,
        left: s.clone(),
        right: t.clone(),
    })
}

fn left_mult<F: Scalar>(a: &Matrix<F>, iq: &Matrix<F>) -> Matrix<F> {
    kron(iq, a)
}

fn right_mult<F: Scalar>(b: &Matrix<F>, ip: &Matrix<F>) -> Matrix<F> {
    kron(&b.transpose(), ip)
}

/// Column-major `vec`.
pub fn vec_of<F: Scalar>(x: &Matrix<F>) -> Matrix<F> {
    let mut data = Vec::with_capacity(x.rows() * x.cols());
    for j in 0..x.cols() {
        for i in 0..x.rows() {
            data.push(x.get(i, j).clone());
        }
    }
    Matrix::from_vec(data.len(), 1, data).expect("shape")
}
