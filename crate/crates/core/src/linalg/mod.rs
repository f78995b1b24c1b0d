//! Dense exact and floating-point linear algebra.

mod matrix;
mod rank;
mod scalar;

pub use matrix::{hstack, kron, vstack, ExactMatrix, FloatMatrix, Matrix};
pub use rank::{cokernel_dim, kernel_dim, nullspace, rank};
pub use scalar::{
    point_lex_cmp, point_to_c64, points_same, Mode, Point, Qi, RankConfig, Scalar,
    FLOAT_POINT_TOL,
};

pub(crate) use rank::float_singular_values;
