//! Koszul complexes of translated tuples and tensor-product total complexes.
//!
//! Chains of degree `p` live in `X ⊗ Λᵖℂⁿ`; the basis is one block of
//! `dim X` coordinates per index set `i₁ < … < i_p`, index sets in
//! lexicographic order.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{kron, rank, Matrix, Mode, RankConfig, Scalar};
use crate::model::FiniteTuple;

/// A finite chain complex `C_top → … → C_1 → C_0`.
///
/// `boundaries[p - 1]` is `d_p : C_p → C_{p-1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct KoszulComplex<F> {
    dims: Vec<usize>,
    boundaries: Vec<Matrix<F>>,
}

/// Homology dimensions `h_0, …, h_top`.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct HomologyProfile {
    pub dims: Vec<usize>,
}

impl HomologyProfile {
    pub fn euler(&self) -> i64 {
        self.dims
            .iter()
            .enumerate()
            .map(|(p, &h)| if p % 2 == 0 { h as i64 } else { -(h as i64) })
            .sum()
    }

    pub fn is_zero(&self) -> bool {
        self.dims.iter().all(|&h| h == 0)
    }
}

impl<F: Scalar> KoszulComplex<F> {
    /// Assembles a complex, checking shapes and `d ∘ d = 0`.
    pub fn from_boundaries(dims: Vec<usize>, boundaries: Vec<Matrix<F>>) -> Result<Self> {
        if boundaries.len() + 1 != dims.len() {
            return Err(Error::shape(
                "complex",
                format!("{} boundaries for {} degrees", boundaries.len(), dims.len()),
            ));
        }
        for (i, d) in boundaries.iter().enumerate() {
            if d.shape() != (dims[i], dims[i + 1]) {
                return Err(Error::shape(
                    "complex",
                    format!("d_{} is {:?}, expected {:?}", i + 1, d.shape(), (dims[i], dims[i + 1])),
                ));
            }
        }
        let c = KoszulComplex { dims, boundaries };
        c.check_square_zero()?;
        Ok(c)
    }

    /// Top degree.
    pub fn top(&self) -> usize {
        self.boundaries.len()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// `d_p` for `1 ≤ p ≤ top`.
    pub fn boundary(&self, p: usize) -> &Matrix<F> {
        &self.boundaries[p - 1]
    }

    pub fn boundaries(&self) -> &[Matrix<F>] {
        &self.boundaries
    }

    fn check_square_zero(&self) -> Result<()> {
        for p in 1..self.boundaries.len() {
            let dd = self.boundaries[p - 1].mul(&self.boundaries[p])?;
            let ok = match F::MODE {
                Mode::Exact => dd.is_zero(),
                Mode::Float => {
                    let scale = self.boundaries[p - 1].max_abs() * self.boundaries[p].max_abs();
                    dd.max_abs() <= 1e-9 * scale.max(1.0)
                }
            };
            if !ok {
                return Err(Error::Invariant(format!("d_{p} ∘ d_{} ≠ 0", p + 1)));
            }
        }
        Ok(())
    }
}

/// Index sets of size `p` in `{0, …, n-1}`, lexicographic, as bit masks.
pub(crate) fn index_sets(n: usize, p: usize) -> Vec<u32> {
    fn rec(start: usize, n: usize, left: usize, cur: u32, out: &mut Vec<u32>) {
        if left == 0 {
            out.push(cur);
            return;
        }
        for i in start..=n - left {
            rec(i + 1, n, left - 1, cur | (1 << i), out);
        }
    }
    let mut out = Vec::new();
    if p <= n {
        rec(0, n, p, 0, &mut out);
    }
    out
}

/// Koszul complex of `T − λ`.
pub fn build_koszul<F: Scalar>(t: &FiniteTuple<F>, lambda: &[F]) -> Result<KoszulComplex<F>> {
    t.require_commuting()?;
    let shifted = t.translate(lambda)?;
    let n = t.len();
    if n > 16 {
        return Err(Error::Unsupported(format!("Koszul complex of a {n}-tuple")));
    }
    let dim = t.dim();
    let sets: Vec<Vec<u32>> = (0..=n).map(|p| index_sets(n, p)).collect();
    let mut position = vec![usize::MAX; 1 << n];
    for layer in &sets {
        for (i, &s) in layer.iter().enumerate() {
            position[s as usize] = i;
        }
    }
    let dims: Vec<usize> = sets.iter().map(|l| l.len() * dim).collect();
    let mut boundaries = Vec::with_capacity(n);
    for p in 1..=n {
        let mut d = Matrix::zeros(dims[p - 1], dims[p]);
        for (col, &set) in sets[p].iter().enumerate() {
            let members = (0..n).filter(|i| set & (1 << i) != 0);
            for (j, i) in members.enumerate() {
                let row = position[(set & !(1 << i)) as usize];
                let block = if j % 2 == 0 {
                    shifted.op(i).clone()
                } else {
                    shifted.op(i).scale(&-F::one())
                };
                d.set_block(row * dim, col * dim, &block);
            }
        }
        boundaries.push(d);
    }
    KoszulComplex::from_boundaries(dims, boundaries)
}

/// `h_p = dim ker d_p − rank d_{p+1}`, with `d_0 = d_{top+1} = 0`.
pub fn homology_dims<F: Scalar>(k: &KoszulComplex<F>, cfg: &RankConfig) -> Result<HomologyProfile> {
    let ranks: Vec<usize> = k
        .boundaries
        .par_iter()
        .map(|d| rank(d, cfg))
        .collect::<Result<_>>()?;
    let top = k.top();
    let mut dims = Vec::with_capacity(top + 1);
    for p in 0..=top {
        let r_in = if p == 0 { 0 } else { ranks[p - 1] };
        let r_out = if p == top { 0 } else { ranks[p] };
        let h = k.dims[p] as i64 - r_in as i64 - r_out as i64;
        if h < 0 {
            return Err(Error::Invariant(format!("negative homology h_{p} = {h}")));
        }
        dims.push(h as usize);
    }
    Ok(HomologyProfile { dims })
}

/// Total complex of `K₁ ⊗ K₂`, boundary `∂(a⊗b) = ∂₁a ⊗ b + (−1)ᵖ a ⊗ ∂₂b`
/// for `a` of degree `p`. Degree-`r` blocks are ordered by `p` descending.
pub fn tensor_total_complex<F: Scalar>(
    k1: &KoszulComplex<F>,
    k2: &KoszulComplex<F>,
) -> Result<KoszulComplex<F>> {
    let (t1, t2) = (k1.top(), k2.top());
    let top = t1 + t2;
    // (p, offset) pairs per degree.
    let layout: Vec<Vec<(usize, usize)>> = (0..=top)
        .map(|r| {
            let mut off = 0;
            (r.saturating_sub(t2)..=r.min(t1))
                .rev()
                .map(|p| {
                    let here = off;
                    off += k1.dims[p] * k2.dims[r - p];
                    (p, here)
                })
                .collect()
        })
        .collect();
    let dims: Vec<usize> = (0..=top)
        .map(|r| (r.saturating_sub(t2)..=r.min(t1)).map(|p| k1.dims[p] * k2.dims[r - p]).sum())
        .collect();
    let offset = |r: usize, p: usize| layout[r].iter().find(|e| e.0 == p).map(|e| e.1);
    let mut boundaries = Vec::with_capacity(top);
    for r in 1..=top {
        let mut d = Matrix::zeros(dims[r - 1], dims[r]);
        for &(p, col) in &layout[r] {
            let q = r - p;
            if p >= 1 {
                if let Some(row) = offset(r - 1, p - 1) {
                    let block = kron(k1.boundary(p), &Matrix::identity(k2.dims[q]));
                    d.set_block(row, col, &block);
                }
            }
            if q >= 1 {
                if let Some(row) = offset(r - 1, p) {
                    let mut block = kron(&Matrix::identity(k1.dims[p]), k2.boundary(q));
                    if p % 2 == 1 {
                        block = block.scale(&-F::one());
                    }
                    d.set_block(row, col, &block);
                }
            }
        }
        boundaries.push(d);
    }
    KoszulComplex::from_boundaries(dims, boundaries)
}

/// Künneth convolution `h_r = Σ_{p+q=r} a_p·b_q`.
pub fn kunneth(a: &HomologyProfile, b: &HomologyProfile) -> HomologyProfile {
    let mut dims = vec![0; a.dims.len() + b.dims.len() - 1];
    for (p, x) in a.dims.iter().enumerate() {
        for (q, y) in b.dims.iter().enumerate() {
            dims[p + q] += x * y;
        }
    }
    HomologyProfile { dims }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{ExactMatrix as M, Qi};

    fn q(x: i64) -> Qi {
        Qi::from_parts(x, 0)
    }

    fn hom(t: &FiniteTuple<Qi>, l: &[Qi]) -> Vec<usize> {
        homology_dims(&build_koszul(t, l).unwrap(), &RankConfig::exact()).unwrap().dims
    }

    #[test]
    fn index_sets_are_lexicographic() {
        assert_eq!(index_sets(3, 2), vec![0b011, 0b101, 0b110]);
        assert_eq!(index_sets(3, 0), vec![0]);
        assert_eq!(index_sets(2, 3), Vec::<u32>::new());
    }

    #[test]
    fn single_operator_complex_is_the_operator() {
        let a = M::from_reals(&[&[1, 2], &[3, 4]]);
        let k = build_koszul(&FiniteTuple::single(a.clone()).unwrap(), &[q(0)]).unwrap();
        assert_eq!(k.boundary(1), &a);
    }

    #[test]
    fn zero_pair_on_a_line() {
        let z = M::zeros(1, 1);
        let t = FiniteTuple::new(vec![z.clone(), z]).unwrap();
        let k = build_koszul(&t, &[q(0), q(0)]).unwrap();
        assert_eq!(k.boundary(1).shape(), (1, 2));
        assert_eq!(k.boundary(2).shape(), (2, 1));
        assert!(k.boundary(1).is_zero() && k.boundary(2).is_zero());
        let z3 = M::zeros(3, 3);
        let t3 = FiniteTuple::new(vec![z3.clone(), z3]).unwrap();
        assert_eq!(hom(&t3, &[q(0), q(0)]), vec![3, 6, 3]);
    }

    #[test]
    fn homology_examples() {
        let t = FiniteTuple::single(M::zeros(2, 2)).unwrap();
        assert_eq!(hom(&t, &[q(0)]), vec![2, 2]);
        let j = FiniteTuple::single(M::from_reals(&[&[0, 1], &[0, 0]])).unwrap();
        assert_eq!(hom(&j, &[q(0)]), vec![1, 1]);
        let pair = FiniteTuple::new(vec![M::diagonal(&[q(0), q(1)]), M::diagonal(&[q(2), q(3)])])
            .unwrap();
        let k = build_koszul(&pair, &[q(0), q(2)]).unwrap();
        assert_eq!(crate::linalg::kernel_dim(k.boundary(2), &RankConfig::exact()).unwrap(), 1);
        assert_eq!(hom(&pair, &[q(0), q(2)]), vec![1, 2, 1]);
        assert_eq!(hom(&pair, &[q(0), q(3)]), vec![0, 0, 0]);
    }

    #[test]
    fn total_complex_examples() {
        let z = FiniteTuple::single(M::zeros(1, 1)).unwrap();
        let k = build_koszul(&z, &[q(0)]).unwrap();
        let tot = tensor_total_complex(&k, &k).unwrap();
        assert_eq!(homology_dims(&tot, &RankConfig::exact()).unwrap().dims, vec![1, 2, 1]);

        let a = FiniteTuple::new(vec![
            M::from_reals(&[&[0, 1, 0], &[0, 0, 0], &[0, 0, 2]]),
            M::from_reals(&[&[0, 0, 0], &[0, 0, 0], &[0, 0, 1]]),
        ])
        .unwrap();
        let ka = build_koszul(&a, &[q(0), q(0)]).unwrap();
        let inv = build_koszul(&FiniteTuple::single(M::from_reals(&[&[2, 1], &[0, 3]])).unwrap(), &[q(0)])
            .unwrap();
        let tot = tensor_total_complex(&ka, &inv).unwrap();
        assert!(homology_dims(&tot, &RankConfig::exact()).unwrap().is_zero());
    }

    #[test]
    fn kunneth_convolution() {
        let a = HomologyProfile { dims: vec![1, 1] };
        let b = HomologyProfile { dims: vec![1, 2, 1] };
        assert_eq!(kunneth(&a, &b).dims, vec![1, 3, 3, 1]);
    }

    #[test]
    fn non_commuting_is_rejected() {
        let j = M::from_reals(&[&[0, 1], &[0, 0]]);
        let t = FiniteTuple::new(vec![j.clone(), j.transpose()]).unwrap();
        assert!(matches!(build_koszul(&t, &[q(0), q(0)]), Err(Error::NonCommuting { .. })));
    }

    #[test]
    fn shape_checks() {
        let bad = KoszulComplex::from_boundaries(vec![1, 2], vec![M::zeros(2, 1)]);
        assert!(bad.is_err());
        let nonzero = KoszulComplex::from_boundaries(
            vec![1, 1, 1],
            vec![M::identity(1), M::identity(1)],
        );
        assert!(matches!(nonzero, Err(Error::Invariant(_))));
    }
}
