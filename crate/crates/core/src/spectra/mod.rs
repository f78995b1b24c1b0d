//! Spectra of finite-dimensional tuples.

pub mod fd;
pub mod polynomial;

pub use fd::{candidate_points, dedup_points, full_spectrum, same_point_set, CandidateSet, FiniteSpectrum, Provenance};
pub use polynomial::{polynomial_image, Polynomial, PolynomialMap};
