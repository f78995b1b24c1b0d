//! Commuting tuples: dense finite-dimensional ones, and finitely described
//! diagonal / weighted-shift tuples on `ℓ²`.

mod finite;
mod structured;

pub use finite::{CommuteVerdict, FiniteTuple, FLOAT_COMMUTE_TOL};
pub use structured::{
    Atom, CPoint, DiagonalTupleSpec, Direction, Multiplicity, ShiftSpec, StructuredPart,
    StructuredTuple, DESCRIPTOR_TOL,
};
#[allow(unused_imports)]
pub(crate) use structured::dist;
