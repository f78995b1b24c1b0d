//! Shift ⊗ diagonal tuples, decomposed over the diagonal index.
//!
//! On `ℓ²(ℕ) ⊗ ℓ²(J) = ⊕_j ℓ²(ℕ)` the pair `((S − z) ⊗ I, I ⊗ (D − w))`
//! acts on column `j` as `(S − z, d_j − w)`. Columns with `d_j = w` carry the
//! shift's own chains; columns with `d_j → w` decide uniformity.

use num_complex::Complex64;

use super::diagonal::{DiagonalLocal, DiagonalModel};
use super::shift::OpLocal;
use crate::chains::{ChainKind, ChainTrace, Dim, LocalChains, Tail};
use crate::model::ShiftSpec;
use crate::region::REGION_TOL;

/// Chains of `(S ⊗ I, I ⊗ D)` at `(z, w)`.
pub fn fibered_chains(s: &ShiftSpec, d: &DiagonalModel, z: Complex64, w: &[Complex64], k_max: usize) -> crate::Result<LocalChains> {
    let op = OpLocal::at(s, z);
    let loc = d.local(w, REGION_TOL)?;
    Ok(chains_from(op, loc, k_max))
}

pub(crate) fn chains_from(op: OpLocal, loc: DiagonalLocal, k_max: usize) -> LocalChains {
    let ks = 1..=k_max.max(3);
    let DiagonalLocal { count: mu, limit } = loc;
    let lower: Vec<Dim> = ks
        .clone()
        .map(|k| {
            if !loc.in_closure() || op.surjective() {
                Dim::ZERO
            } else if op == OpLocal::NonClosed || limit {
                // Matched non-closed columns, or columns whose solutions blow
                // up as d_j → w: the range sum is not closed.
                Dim::Infinite
            } else {
                mu.mul(op.codim(k))
            }
        })
        .collect();
    let upper: Vec<Dim> = ks.map(|k| mu.mul(op.nullity(k))).collect();
    let range_closed = !loc.in_closure()
        || ((mu.is_zero() || op.range_closed()) && (!limit || op.bounded_below()));
    let tail = |v: &[Dim]| {
        if v.windows(2).any(|w| w[0] < w[1]) {
            Tail::Unbounded
        } else {
            Tail::Stable
        }
    };
    let (lt, ut) = (tail(&lower), tail(&upper));
    LocalChains {
        lower: ChainTrace::new(ChainKind::Lower, lower, lt),
        upper: ChainTrace::new(ChainKind::Upper, upper, ut),
        range_closed,
        kernel_complemented: true,
        range_complemented: true,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chains::classify_local;
    use crate::model::{DiagonalTupleSpec, Multiplicity::*};

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn classify(s: &ShiftSpec, atoms: &[(f64, crate::model::Multiplicity)], acc: &[f64], z: f64, w: f64) -> crate::chains::Flags {
        let d = DiagonalModel::from_spec(&DiagonalTupleSpec::scalar(atoms, acc).unwrap());
        classify_local(vec![c(z), c(w)], fibered_chains(s, &d, c(z), &[c(w)], 6).unwrap())
            .unwrap()
            .flags
    }

    #[test]
    fn matched_columns() {
        let s = ShiftSpec::forward(1.0).unwrap();
        let f = classify(&s, &[(2.0, Infinite)], &[], 0.5, 2.0);
        assert!(f.fredholm_lower && f.browder_lower && !f.a);
        let f = classify(&s, &[(2.0, Finite(1))], &[], 0.5, 2.0);
        assert!(f.a && f.browder_lower && !f.fredholm_lower);
        let f = classify(&s, &[(2.0, Finite(1))], &[], 3.0, 2.0);
        assert!(!f.any());
        let f = classify(&s, &[(2.0, Finite(1))], &[], 0.5, 1.0);
        assert!(!f.any());
    }

    #[test]
    fn accumulating_columns() {
        let fwd = ShiftSpec::forward(1.0).unwrap();
        let f = classify(&fwd, &[], &[0.0], 0.5, 0.0);
        assert!(f.fredholm_lower && !f.approx_point);
        let bwd = ShiftSpec::backward(1.0).unwrap();
        let f = classify(&bwd, &[], &[0.0], 0.5, 0.0);
        assert!(!f.defect && f.fredholm_upper);
    }
}
