//! Seeded random instances.
//!
//! Finite tuples are polynomials in one or two upper-triangular Gaussian
//! integer matrices (so they commute by construction), optionally conjugated
//! by a unimodular matrix so that the triangular shortcut does not apply.

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::linalg::{Matrix, Qi, Scalar};
use crate::model::{Atom, DiagonalTupleSpec, Direction, FiniteTuple, Multiplicity, ShiftSpec};
use crate::spectra::{Polynomial, PolynomialMap};

/// Independent stream for instance `index` of a run with `seed`.
pub fn instance_rng(seed: u64, salt: u64, index: usize) -> ChaCha8Rng {
    let mix = seed
        .wrapping_mul(0x9E37_79B9_7F4A_7C15)
        .wrapping_add(salt.wrapping_mul(0xD1B5_4A32_D192_ED03))
        .wrapping_add(index as u64);
    ChaCha8Rng::seed_from_u64(mix)
}

const EIGS: [(i64, i64); 6] = [(0, 0), (1, 0), (-1, 0), (2, 0), (0, 1), (1, 1)];

fn gauss(rng: &mut ChaCha8Rng, re: i64, im: i64) -> Qi {
    Qi::from_parts(rng.gen_range(-re..=re), rng.gen_range(-im..=im))
}

fn triangular(rng: &mut ChaCha8Rng, d: usize) -> Matrix<Qi> {
    let mut a = Matrix::zeros(d, d);
    for i in 0..d {
        let (re, im) = *EIGS.choose(rng).unwrap();
        a.set(i, i, Qi::from_parts(re, im));
        for j in i + 1..d {
            if rng.gen_bool(0.5) {
                a.set(i, j, gauss(rng, 2, 1));
            }
        }
    }
    a
}

/// `c₀ + c₁A + c₂A²` with small Gaussian integer coefficients.
fn poly_in(rng: &mut ChaCha8Rng, a: &Matrix<Qi>) -> Matrix<Qi> {
    let d = a.rows();
    let mut out = Matrix::scalar(d, gauss(rng, 2, 1));
    let mut pow = Matrix::identity(d);
    for _ in 0..2 {
        pow = pow.mul(a).expect("square");
        let c = gauss(rng, 2, 0);
        if !c.is_zero() {
            out = out.add(&pow.scale(&c)).expect("same shape");
        }
    }
    out
}

fn block_diag(a: &Matrix<Qi>, b: &Matrix<Qi>) -> Matrix<Qi> {
    let (p, q) = (a.rows(), b.rows());
    let mut m = Matrix::zeros(p + q, p + q);
    m.set_block(0, 0, a);
    m.set_block(p, p, b);
    m
}

/// Unit lower × unit upper triangular with small entries, and its inverse.
fn unimodular(rng: &mut ChaCha8Rng, d: usize) -> (Matrix<Qi>, Matrix<Qi>) {
    let mut l = Matrix::identity(d);
    let mut u = Matrix::identity(d);
    for i in 0..d {
        for j in 0..i {
            if rng.gen_bool(0.4) {
                l.set(i, j, Qi::from_parts(rng.gen_range(-1..=1), 0));
            }
            if rng.gen_bool(0.4) {
                u.set(j, i, Qi::from_parts(rng.gen_range(-1..=1), 0));
            }
        }
    }
    let p = l.mul(&u).expect("square");
    let p_inv = p.solve(&Matrix::identity(d)).expect("unimodular matrices are invertible");
    (p, p_inv)
}

/// `n` commuting operators on `ℂᵈ`, `1 ≤ d ≤ max_dim`.
pub fn random_tuple(rng: &mut ChaCha8Rng, n: usize, max_dim: usize) -> FiniteTuple<Qi> {
    let d = rng.gen_range(1..=max_dim);
    let split = if d >= 2 && rng.gen_bool(0.3) { Some(rng.gen_range(1..d)) } else { None };
    let ops: Vec<Matrix<Qi>> = match split {
        None => {
            let a = triangular(rng, d);
            (0..n).map(|_| poly_in(rng, &a)).collect()
        }
        Some(p) => {
            let (a, b) = (triangular(rng, p), triangular(rng, d - p));
            (0..n).map(|_| block_diag(&poly_in(rng, &a), &poly_in(rng, &b))).collect()
        }
    };
    let t = FiniteTuple::new(ops).expect("square operators");
    if d >= 2 && rng.gen_bool(0.35) {
        let (p, p_inv) = unimodular(rng, d);
        return t.conjugate_by(&p, &p_inv).expect("shapes agree");
    }
    t
}

/// A map `ℂⁿ → ℂᵐ` with `1 ≤ m ≤ 2` components of degree at most `max_degree`.
pub fn random_polynomial_map(rng: &mut ChaCha8Rng, n: usize, max_degree: u32) -> PolynomialMap<Qi> {
    let m = rng.gen_range(1..=2);
    let comps = (0..m)
        .map(|_| {
            let terms = (0..rng.gen_range(1..=3))
                .map(|_| {
                    let mut exps = vec![0u32; n];
                    let mut budget = rng.gen_range(0..=max_degree);
                    while budget > 0 {
                        exps[rng.gen_range(0..n)] += 1;
                        budget -= 1;
                    }
                    let mut c = gauss(rng, 2, 1);
                    if c.is_zero() {
                        c = Qi::one();
                    }
                    (c, exps)
                })
                .collect();
            Polynomial::new(n, terms).expect("exponent vectors have length n")
        })
        .collect();
    PolynomialMap::new(comps).expect("components share n")
}

fn half_grid(rng: &mut ChaCha8Rng, r: i64) -> f64 {
    rng.gen_range(-r..=r) as f64 / 2.0
}

/// One-coordinate diagonal spec with atoms and accumulation points on the
/// half-integer lattice.
pub fn random_diagonal(rng: &mut ChaCha8Rng) -> DiagonalTupleSpec {
    loop {
        let mut atoms: Vec<Atom> = Vec::new();
        for _ in 0..rng.gen_range(1..=3) {
            let p = vec![Complex64::new(half_grid(rng, 4), half_grid(rng, 2))];
            if atoms.iter().any(|a| a.point == p) {
                continue;
            }
            let mult = if rng.gen_bool(0.35) {
                Multiplicity::Infinite
            } else {
                Multiplicity::Finite(rng.gen_range(1..=3))
            };
            atoms.push(Atom { point: p, mult });
        }
        let acc: Vec<_> = (0..rng.gen_range(0..=1))
            .map(|_| vec![Complex64::new(half_grid(rng, 4), half_grid(rng, 2))])
            .collect();
        if let Ok(d) = DiagonalTupleSpec::new(1, atoms, acc) {
            return d;
        }
    }
}

/// Weighted shift with a short random prefix and tail in `{0.5, 1, 1.5, 2}`.
pub fn random_shift(rng: &mut ChaCha8Rng) -> ShiftSpec {
    let direction = if rng.gen_bool(0.5) { Direction::Forward } else { Direction::Backward };
    let prefix = (0..rng.gen_range(0..=2))
        .map(|_| Complex64::new(rng.gen_range(1..=6) as f64 / 2.0, 0.0))
        .collect();
    let tail = rng.gen_range(1..=4) as f64 / 2.0;
    ShiftSpec::new(direction, prefix, tail).expect("positive weights")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tuples_commute_and_are_reproducible() {
        for i in 0..50 {
            let t = random_tuple(&mut instance_rng(3, 1, i), 2, 5);
            assert!(t.validate_commuting().passed());
            assert_eq!(t, random_tuple(&mut instance_rng(3, 1, i), 2, 5));
        }
        assert_ne!(random_tuple(&mut instance_rng(3, 1, 0), 2, 5), random_tuple(&mut instance_rng(4, 1, 0), 2, 5));
    }

    #[test]
    fn some_tuples_are_not_triangular() {
        let hit = (0..40)
            .map(|i| random_tuple(&mut instance_rng(9, 0, i), 1, 5))
            .any(|t| !t.op(0).is_upper_triangular());
        assert!(hit);
    }
}
