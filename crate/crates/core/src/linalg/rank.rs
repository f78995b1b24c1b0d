//! Rank and kernel computations.
//!
//! Exact mode clears denominators row by row and runs fraction-free
//! (Bareiss) elimination over the Gaussian integers. Intermediate entries are
//! minors of the input, so they stay exact; an `i128` pass is tried first and
//! the computation restarts on `BigInt` if any product overflows.
//!
//! Float mode counts singular values above `rel_tolerance · σ_max`.

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use super::matrix::Matrix;
use super::scalar::{Qi, RankConfig, Scalar};
use crate::error::Result;

pub fn rank<F: Scalar>(m: &Matrix<F>, cfg: &RankConfig) -> Result<usize> {
    cfg.check::<F>()?;
    if m.rows() == 0 || m.cols() == 0 {
        return Ok(0);
    }
    Ok(F::rank_of(m, cfg.rel_tolerance))
}

pub fn kernel_dim<F: Scalar>(m: &Matrix<F>, cfg: &RankConfig) -> Result<usize> {
    Ok(m.cols() - rank(m, cfg)?)
}

pub fn cokernel_dim<F: Scalar>(m: &Matrix<F>, cfg: &RankConfig) -> Result<usize> {
    Ok(m.rows() - rank(m, cfg)?)
}

/// Basis of the right kernel, one vector per entry.
pub fn nullspace<F: Scalar>(m: &Matrix<F>, cfg: &RankConfig) -> Result<Vec<Vec<F>>> {
    cfg.check::<F>()?;
    if m.cols() == 0 {
        return Ok(Vec::new());
    }
    if m.rows() == 0 {
        return Ok(Matrix::<F>::identity(m.cols()).to_rows());
    }
    Ok(F::nullspace_of(m, cfg.rel_tolerance))
}

/// Rows scaled to Gaussian integers; the row space, hence the rank, is unchanged.
fn integer_rows(m: &Matrix<Qi>) -> Vec<Vec<(BigInt, BigInt)>> {
    (0..m.rows())
        .map(|i| {
            let row = m.row(i);
            let l = row
                .iter()
                .fold(BigInt::from(1), |acc, x| acc.lcm(&x.denom_lcm()));
            row.iter()
                .map(|x| {
                    let re = (&x.re * &l).to_integer();
                    let im = (&x.im * &l).to_integer();
                    (re, im)
                })
                .collect()
        })
        .collect()
}

pub(crate) fn exact_rank(m: &Matrix<Qi>) -> usize {
    let rows = integer_rows(m);
    let small: Option<Vec<Vec<(i128, i128)>>> = rows
        .iter()
        .map(|r| {
            r.iter()
                .map(|(a, b)| Some((a.to_i128()?, b.to_i128()?)))
                .collect()
        })
        .collect();
    if let Some(small) = small {
        if let Some(r) = bareiss_small(small, m.cols()) {
            return r;
        }
    }
    bareiss_big(rows, m.cols())
}

type Gi = (i128, i128);

fn gi_mul(a: Gi, b: Gi) -> Option<Gi> {
    let re = a.0.checked_mul(b.0)?.checked_sub(a.1.checked_mul(b.1)?)?;
    let im = a.0.checked_mul(b.1)?.checked_add(a.1.checked_mul(b.0)?)?;
    Some((re, im))
}

fn gi_sub(a: Gi, b: Gi) -> Option<Gi> {
    Some((a.0.checked_sub(b.0)?, a.1.checked_sub(b.1)?))
}

fn gi_exact_div(a: Gi, b: Gi) -> Option<Gi> {
    let n = b.0.checked_mul(b.0)?.checked_add(b.1.checked_mul(b.1)?)?;
    let p = gi_mul(a, (b.0, -b.1))?;
    debug_assert!(p.0 % n == 0 && p.1 % n == 0, "inexact Bareiss division");
    Some((p.0 / n, p.1 / n))
}

fn bareiss_small(mut a: Vec<Vec<Gi>>, cols: usize) -> Option<usize> {
    let m = a.len();
    let mut prev: Gi = (1, 0);
    let mut r = 0;
    for c in 0..cols {
        if r == m {
            break;
        }
        let Some(p) = (r..m).find(|&i| a[i][c] != (0, 0)) else {
            continue;
        };
        a.swap(r, p);
        let piv = a[r][c];
        let (top, rest) = a.split_at_mut(r + 1);
        let prow = &top[r];
        for row in rest.iter_mut() {
            let lead = row[c];
            for j in c + 1..cols {
                let x = gi_sub(gi_mul(piv, row[j])?, gi_mul(lead, prow[j])?)?;
                row[j] = gi_exact_div(x, prev)?;
            }
            row[c] = (0, 0);
        }
        prev = piv;
        r += 1;
    }
    Some(r)
}

fn big_mul(a: &(BigInt, BigInt), b: &(BigInt, BigInt)) -> (BigInt, BigInt) {
    (&a.0 * &b.0 - &a.1 * &b.1, &a.0 * &b.1 + &a.1 * &b.0)
}

fn bareiss_big(mut a: Vec<Vec<(BigInt, BigInt)>>, cols: usize) -> usize {
    let m = a.len();
    let mut prev = (BigInt::from(1), BigInt::zero());
    let mut r = 0;
    for c in 0..cols {
        if r == m {
            break;
        }
        let Some(p) = (r..m).find(|&i| !(a[i][c].0.is_zero() && a[i][c].1.is_zero())) else {
            continue;
        };
        a.swap(r, p);
        let piv = a[r][c].clone();
        let norm = &prev.0 * &prev.0 + &prev.1 * &prev.1;
        let prev_conj = (prev.0.clone(), -&prev.1);
        let (top, rest) = a.split_at_mut(r + 1);
        let prow = &top[r];
        for row in rest.iter_mut() {
            let lead = row[c].clone();
            for j in c + 1..cols {
                let x = big_mul(&piv, &row[j]);
                let y = big_mul(&lead, &prow[j]);
                let diff = (x.0 - y.0, x.1 - y.1);
                let q = big_mul(&diff, &prev_conj);
                debug_assert!((&q.0 % &norm).is_zero() && (&q.1 % &norm).is_zero());
                row[j] = (q.0 / &norm, q.1 / &norm);
            }
            row[c] = (BigInt::zero(), BigInt::zero());
        }
        prev = piv;
        r += 1;
    }
    r
}

/// Reduced row echelon form over the Gaussian rationals; returns pivot columns.
pub(crate) fn exact_rref(m: &Matrix<Qi>) -> (Matrix<Qi>, Vec<usize>) {
    let mut a = m.to_rows();
    let rows = m.rows();
    let cols = m.cols();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = Qi::one() / a[r][c].clone();
        for j in c..cols {
            a[r][j] = a[r][j].clone() * inv.clone();
        }
        let prow = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for j in c..cols {
                if !prow[j].is_zero() {
                    row[j] = row[j].clone() - f.clone() * prow[j].clone();
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (Matrix::from_rows(a).expect("same shape"), pivots)
}

pub(crate) fn exact_nullspace(m: &Matrix<Qi>) -> Vec<Vec<Qi>> {
    let (r, pivots) = exact_rref(m);
    let cols = m.cols();
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Qi::zero(); cols];
            v[f] = Qi::one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = -r.get(i, f).clone();
            }
            v
        })
        .collect()
}

fn to_nalgebra(m: &Matrix<Complex64>) -> DMatrix<Complex64> {
    DMatrix::from_row_slice(m.rows(), m.cols(), m.data())
}

pub(crate) fn float_singular_values(m: &Matrix<Complex64>) -> Vec<f64> {
    if m.rows() == 0 || m.cols() == 0 {
        return Vec::new();
    }
    let mut sv: Vec<f64> = to_nalgebra(m).singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

pub(crate) fn float_rank(m: &Matrix<Complex64>, tol: f64) -> usize {
    let sv = float_singular_values(m);
    let Some(&max) = sv.first() else { return 0 };
    if max == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > tol * max).count()
}

pub(crate) fn float_nullspace(m: &Matrix<Complex64>, tol: f64) -> Vec<Vec<Complex64>> {
    let n = m.cols();
    // Pad with zero rows so the thin SVD returns a full right basis.
    let mut a = to_nalgebra(m);
    if a.nrows() < n {
        a = a.resize_vertically(n, Complex64::new(0.0, 0.0));
    }
    let svd = a.svd(false, true);
    let v_t = svd.v_t.expect("requested V");
    let max = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let cutoff = if max == 0.0 { f64::INFINITY } else { tol * max };
    (0..svd.singular_values.len())
        .filter(|&i| !(svd.singular_values[i] > cutoff))
        .map(|i| (0..n).map(|j| v_t[(i, j)].conj()).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::matrix::{hstack, kron, vstack};

    type M = Matrix<Qi>;
    type C = Matrix<Complex64>;

    fn ex() -> RankConfig {
        RankConfig::exact()
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&M::zeros(2, 2), &ex()).unwrap(), 0);
        assert_eq!(rank(&M::identity(2), &ex()).unwrap(), 2);
        let j = M::from_reals(&[&[0, 1], &[0, 0]]);
        assert_eq!(rank(&j, &ex()).unwrap(), 1);
        assert_eq!(rank(&M::zeros(0, 3), &ex()).unwrap(), 0);
        assert_eq!(rank(&M::zeros(3, 0), &ex()).unwrap(), 0);
    }

    #[test]
    fn kernel_and_cokernel_examples() {
        let j = M::from_reals(&[&[0, 1], &[0, 0]]);
        assert_eq!(kernel_dim(&M::identity(2), &ex()).unwrap(), 0);
        assert_eq!(kernel_dim(&M::zeros(2, 2), &ex()).unwrap(), 2);
        assert_eq!(kernel_dim(&j, &ex()).unwrap(), 1);
        assert_eq!(cokernel_dim(&M::zeros(3, 1), &ex()).unwrap(), 3);
        assert_eq!(cokernel_dim(&M::identity(2), &ex()).unwrap(), 0);
        let j2 = j.pow(2).unwrap();
        assert_eq!(cokernel_dim(&hstack(&[j.clone(), j2]).unwrap(), &ex()).unwrap(), 1);
        assert_eq!(rank(&hstack(&[M::identity(2), M::identity(2)]).unwrap(), &ex()).unwrap(), 2);
        assert_eq!(rank(&hstack(&[j.clone(), M::zeros(2, 2)]).unwrap(), &ex()).unwrap(), 1);
        let v = vstack(&[j.clone(), M::zeros(2, 2)]).unwrap();
        assert_eq!(kernel_dim(&v, &ex()).unwrap(), kernel_dim(&j, &ex()).unwrap());
    }

    #[test]
    fn mode_mismatch_is_an_error() {
        assert!(rank(&M::identity(2), &RankConfig::float()).is_err());
        assert!(rank(&C::identity(2), &RankConfig::exact()).is_err());
    }

    #[test]
    fn gaussian_entries_and_fractions() {
        // rows (1, i) and (i, -1) are dependent: second = i · first
        let m = M::from_int_rows(&[&[(1, 0), (0, 1)], &[(0, 1), (-1, 0)]]);
        assert_eq!(rank(&m, &ex()).unwrap(), 1);
        let h = M::from_rows(vec![
            vec![Qi::from_ratio((1, 2), (0, 1)), Qi::from_ratio((1, 3), (0, 1))],
            vec![Qi::from_ratio((3, 2), (0, 1)), Qi::from_ratio((1, 1), (0, 1))],
        ])
        .unwrap();
        assert_eq!(rank(&h, &ex()).unwrap(), 1);
    }

    #[test]
    fn overflow_falls_back_to_bigint() {
        // Entries near 2^61 overflow i128 products during elimination.
        let big = 1i64 << 61;
        let m = M::from_reals(&[&[big, big - 1, 3], &[big - 5, big, 7], &[2 * (big - 5), 2 * big, 14]]);
        assert_eq!(rank(&m, &ex()).unwrap(), 2);
        assert_eq!(exact_rank(&m), 2);
    }

    #[test]
    fn float_rank_and_nullspace() {
        let j = C::from_reals(&[&[0, 1], &[0, 0]]);
        assert_eq!(rank(&j, &RankConfig::float()).unwrap(), 1);
        assert_eq!(rank(&C::zeros(3, 3), &RankConfig::float()).unwrap(), 0);
        let ns = nullspace(&j, &RankConfig::float()).unwrap();
        assert_eq!(ns.len(), 1);
        assert!(ns[0][1].norm() < 1e-12 && (ns[0][0].norm() - 1.0).abs() < 1e-12);
        let wide = C::from_reals(&[&[1, 1, 0]]);
        assert_eq!(nullspace(&wide, &RankConfig::float()).unwrap().len(), 2);
    }

    #[test]
    fn exact_nullspace_is_annihilated() {
        let m = M::from_int_rows(&[&[(1, 1), (2, 0), (0, -1)], &[(2, 2), (4, 0), (0, -2)]]);
        let ns = nullspace(&m, &ex()).unwrap();
        assert_eq!(ns.len(), 2);
        for v in ns {
            assert!(m.mul_vec(&v).unwrap().iter().all(Scalar::is_zero));
        }
    }

    #[test]
    fn kron_rank_multiplies() {
        let a = M::from_reals(&[&[1, 2, 3], &[2, 4, 6], &[0, 1, 1]]);
        let b = M::from_int_rows(&[&[(0, 1), (1, 0)], &[(0, 0), (0, 0)]]);
        let ra = rank(&a, &ex()).unwrap();
        let rb = rank(&b, &ex()).unwrap();
        assert_eq!(rank(&kron(&a, &b), &ex()).unwrap(), ra * rb);
    }
}
