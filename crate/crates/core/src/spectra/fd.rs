//! Whole-spectrum computation for finite-dimensional tuples.
//!
//! Only joint eigenvalues can carry a flag, so every spectrum is obtained by
//! classifying a finite candidate set.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::chains::{classify_point, PointClassification};
use crate::error::{Error, Result};
use crate::kinds::SpectrumKind;
use crate::linalg::{
    float_singular_values, kernel_dim, nullspace, point_lex_cmp, points_same, vstack, Matrix, Mode, RankConfig, Scalar,
};
use crate::model::FiniteTuple;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    /// Aligned diagonal entries of an upper-triangular tuple.
    TriangularDiagonal,
    /// Generalized-eigenspace deflation of a general tuple.
    Deflation,
    /// Verified eigenvalues of each operator, combined coordinate by
    /// coordinate through joint-kernel tests.
    EigenSearch,
}

/// Finite superset of the joint spectrum, sorted lexicographically.
#[derive(Clone, Debug, PartialEq)]
pub struct CandidateSet<F> {
    pub points: Vec<Vec<F>>,
    pub provenance: Provenance,
}

pub fn candidate_points<F: Scalar>(t: &FiniteTuple<F>, cfg: &RankConfig) -> Result<CandidateSet<F>> {
    cfg.check::<F>()?;
    t.require_commuting()?;
    if t.ops().iter().all(Matrix::is_upper_triangular) {
        let pts = (0..t.dim())
            .map(|i| t.ops().iter().map(|op| op.get(i, i).clone()).collect())
            .collect();
        return Ok(CandidateSet {
            points: dedup_points(pts),
            provenance: Provenance::TriangularDiagonal,
        });
    }
    match F::MODE {
        // Restricting to eigenspaces makes exact entries explode; searching
        // on the original matrices keeps them small.
        Mode::Exact => Ok(CandidateSet {
            points: dedup_points(eigen_search(t.ops(), cfg)?),
            provenance: Provenance::EigenSearch,
        }),
        Mode::Float => Ok(CandidateSet {
            points: dedup_points(deflate(t.ops(), cfg)?),
            provenance: Provenance::Deflation,
        }),
    }
}

/// Eigenvalues of `m` whose generalized eigenspaces together fill the
/// space (so none is missing).
fn verified_eigenvalues<F: Scalar>(m: &Matrix<F>, cfg: &RankConfig) -> Result<Vec<F>> {
    let dim = m.rows();
    let mut found = Vec::new();
    let mut covered = 0;
    for mu in eigen_candidates(m)? {
        let a = m.shift_diag(&mu)?;
        let mut nullity = kernel_dim(&a, cfg)?;
        if nullity == 0 {
            continue;
        }
        let mut p = a.clone();
        loop {
            p = p.mul(&a)?;
            let next = kernel_dim(&p, cfg)?;
            if next == nullity {
                break;
            }
            nullity = next;
        }
        covered += nullity;
        found.push(mu);
    }
    if covered != dim {
        return Err(Error::Deflation(format!(
            "generalized eigenspaces cover {covered} of {dim} dimensions (eigenvalues may not be Gaussian rationals)"
        )));
    }
    Ok(found)
}

/// Joint eigenvalues: extend points of `σ(T₁, …, T_i)` by eigenvalues of
/// `T_{i+1}` and keep those with a common eigenvector.
fn eigen_search<F: Scalar>(ops: &[Matrix<F>], cfg: &RankConfig) -> Result<Vec<Vec<F>>> {
    let eig = ops
        .par_iter()
        .map(|m| verified_eigenvalues(m, cfg))
        .collect::<Result<Vec<_>>>()?;
    let mut partial: Vec<Vec<F>> = vec![vec![]];
    for i in 0..ops.len() {
        let mut next = Vec::new();
        for p in &partial {
            for mu in &eig[i] {
                let mut q = p.clone();
                q.push(mu.clone());
                let blocks = ops[..=i]
                    .iter()
                    .zip(&q)
                    .map(|(m, l)| m.shift_diag(l))
                    .collect::<Result<Vec<_>>>()?;
                if kernel_dim(&vstack(&blocks)?, cfg)? > 0 {
                    next.push(q);
                }
            }
        }
        partial = next;
    }
    Ok(partial)
}

/// Sorts lexicographically and removes duplicates (exact equality, or
/// distance below the float point tolerance).
pub fn dedup_points<F: Scalar>(mut pts: Vec<Vec<F>>) -> Vec<Vec<F>> {
    pts.sort_by(|a, b| point_lex_cmp(a, b));
    let mut out: Vec<Vec<F>> = Vec::with_capacity(pts.len());
    for p in pts {
        if !out.iter().any(|q| points_same(q, &p)) {
            out.push(p);
        }
    }
    out
}

/// Set equality of finite point sets under [`points_same`].
pub fn same_point_set<F: Scalar>(a: &[Vec<F>], b: &[Vec<F>]) -> bool {
    a.iter().all(|p| b.iter().any(|q| points_same(p, q)))
        && b.iter().all(|p| a.iter().any(|q| points_same(p, q)))
}

/// Joint spectrum by recursion: split `X` into generalized eigenspaces of
/// `T₁` (eigenvalues in lexicographic order), restrict the remaining
/// operators to each, recurse.
fn deflate<F: Scalar>(ops: &[Matrix<F>], cfg: &RankConfig) -> Result<Vec<Vec<F>>> {
    let Some((t1, rest)) = ops.split_first() else {
        return Ok(vec![vec![]]);
    };
    let dim = t1.rows();
    let mut covered = 0;
    let mut out = Vec::new();
    for mu in eigen_candidates(t1)? {
        let basis = generalized_eigenspace(t1, &mu, cfg)?;
        if basis.cols() == 0 {
            continue;
        }
        covered += basis.cols();
        let restricted = rest
            .iter()
            .map(|ti| restrict(ti, &basis))
            .collect::<Result<Vec<_>>>()?;
        for tail in deflate(&restricted, cfg)? {
            let mut p = Vec::with_capacity(ops.len());
            p.push(mu.clone());
            p.extend(tail);
            out.push(p);
        }
    }
    if covered != dim {
        return Err(Error::Deflation(format!(
            "generalized eigenspaces cover {covered} of {dim} dimensions{}",
            match F::MODE {
                Mode::Exact => " (eigenvalues may not be Gaussian rationals)",
                Mode::Float => " (ill-conditioned eigenvalue clusters)",
            }
        )));
    }
    Ok(out)
}

fn float_eigenvalues<F: Scalar>(m: &Matrix<F>) -> Result<Vec<Complex64>> {
    let n = m.rows();
    let f = m.to_float();
    let dm = DMatrix::from_row_slice(n, n, f.data());
    // The QR iteration can stall on exactly repeated eigenvalues; a diagonal
    // shift changes the iterates without changing the answer.
    let scale = f.frobenius().max(1.0);
    for shift in [(0.0, 0.0), (0.37, 0.21), (-0.53, 0.17), (0.11, -0.61)] {
        let c = Complex64::new(shift.0, shift.1) * scale;
        let shifted = &dm + DMatrix::from_diagonal_element(n, n, c);
        if let Some(schur) = shifted.try_schur(f64::EPSILON, 1000 * n.max(1)) {
            if let Some(ev) = schur.eigenvalues() {
                return Ok(ev.iter().map(|z| z - c).collect());
            }
        }
    }
    Err(Error::Deflation("Schur form did not converge".into()))
}

/// Candidate eigenvalues of `m` in the working field, before verification.
fn eigen_candidates<F: Scalar>(m: &Matrix<F>) -> Result<Vec<F>> {
    let mut ev = float_eigenvalues(m)?;
    ev.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    let scale = m.frobenius().max(1.0);
    let mut raw: Vec<Complex64> = Vec::new();
    let levels: &[f64] = match F::MODE {
        // Several cluster radii: a Jordan block of size s spreads its
        // eigenvalue by about ε^{1/s}; cluster means are far more accurate.
        Mode::Exact => {
            raw.extend(&ev);
            &[1e-8, 1e-5, 1e-3, 1e-1]
        }
        Mode::Float => &[1e-6],
    };
    for &tol in levels {
        raw.extend(cluster_means(&ev, tol * scale));
    }
    let mut out: Vec<F> = Vec::new();
    for z in raw {
        let Some(mu) = F::snap(z) else { continue };
        if !out.iter().any(|x| x.same(&mu)) {
            out.push(mu);
        }
    }
    if out.is_empty() && !ev.is_empty() {
        return Err(Error::Deflation(format!(
            "no Gaussian-rational eigenvalue near {:?}",
            ev
        )));
    }
    out.sort_by(|a, b| a.lex_cmp(b));
    Ok(out)
}

/// Single-linkage clusters of eigenvalues, returned as means.
fn cluster_means(ev: &[Complex64], tol: f64) -> Vec<Complex64> {
    let mut label: Vec<usize> = (0..ev.len()).collect();
    fn find(l: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while l[r] != r {
            r = l[r];
        }
        l[i] = r;
        r
    }
    for i in 0..ev.len() {
        for j in 0..i {
            if (ev[i] - ev[j]).norm() <= tol {
                let (a, b) = (find(&mut label, i), find(&mut label, j));
                label[a] = b;
            }
        }
    }
    let mut groups: BTreeMap<usize, (Complex64, usize)> = BTreeMap::new();
    for (i, z) in ev.iter().enumerate() {
        let e = groups.entry(find(&mut label, i)).or_insert((Complex64::new(0.0, 0.0), 0));
        e.0 += z;
        e.1 += 1;
    }
    groups.values().map(|(s, c)| s / *c as f64).collect()
}

/// Float deflation judges singular values against the operator's own scale
/// rather than the (possibly tiny) largest singular value of `(T − μ)ᵏ`.
const FLOAT_DEFLATION_TOL: f64 = 1e-8;

/// Nullspace of `p = (m − μ)ᵏ`, where `scale` bounds `‖p‖`.
fn scaled_nullspace<F: Scalar>(p: &Matrix<F>, scale: f64, cfg: &RankConfig) -> Result<Vec<Vec<F>>> {
    match F::MODE {
        Mode::Exact => nullspace(p, cfg),
        Mode::Float => {
            let sv = float_singular_values(&p.to_float());
            let top = sv.first().copied().unwrap_or(0.0);
            let thr = FLOAT_DEFLATION_TOL * scale.max(f64::MIN_POSITIVE);
            if top <= thr {
                // Numerically zero: everything is kernel.
                return Ok((0..p.cols())
                    .map(|j| (0..p.cols()).map(|i| if i == j { F::one() } else { F::zero() }).collect())
                    .collect());
            }
            Ok(F::nullspace_of(p, thr / top))
        }
    }
}

/// Basis (as columns) of `ker (m − μ)^∞`; empty when `μ` is not an eigenvalue.
fn generalized_eigenspace<F: Scalar>(m: &Matrix<F>, mu: &F, cfg: &RankConfig) -> Result<Matrix<F>> {
    let a = m.shift_diag(mu)?;
    let s = m.frobenius().max(mu.modulus()).max(1e-300);
    let mut p = a.clone();
    let mut k = 1;
    let mut vecs = scaled_nullspace(&p, s, cfg)?;
    if vecs.is_empty() {
        return Ok(Matrix::zeros(m.rows(), 0));
    }
    // Nullities of powers strictly increase until they stabilize.
    loop {
        let next = p.mul(&a)?;
        let nv = scaled_nullspace(&next, s.powi(k + 1), cfg)?;
        if nv.len() == vecs.len() {
            break;
        }
        p = next;
        k += 1;
        vecs = nv;
    }
    let mut basis = Matrix::zeros(m.rows(), vecs.len());
    for (j, v) in vecs.iter().enumerate() {
        for (i, x) in v.iter().enumerate() {
            basis.set(i, j, x.clone());
        }
    }
    Ok(basis)
}

/// Matrix of `t` restricted to the invariant column space of `basis`.
fn restrict<F: Scalar>(t: &Matrix<F>, basis: &Matrix<F>) -> Result<Matrix<F>> {
    let bh = basis.adjoint();
    let gram = bh.mul(basis)?;
    gram.solve(&bh.mul(&t.mul(basis)?)?)
}

/// Per-kind point sets of a finite tuple, plus the classifications behind them.
#[derive(Clone, Debug)]
pub struct FiniteSpectrum<F> {
    pub candidates: CandidateSet<F>,
    pub classifications: Vec<PointClassification<F>>,
}

impl<F: Scalar> FiniteSpectrum<F> {
    /// Points of the given spectrum, in candidate order.
    pub fn set(&self, kind: SpectrumKind) -> Vec<Vec<F>> {
        self.classifications
            .iter()
            .filter(|c| c.flags.get(kind))
            .map(|c| c.point.clone())
            .collect()
    }

    /// Checks the inclusion chains as set inclusions and that every
    /// split set equals its unsplit counterpart.
    pub fn check_inclusions(&self) -> Result<()> {
        use SpectrumKind::*;
        let chains = [
            (FredholmLower, BrowderLower),
            (BrowderLower, Defect),
            (FredholmUpper, BrowderUpper),
            (BrowderUpper, ApproxPoint),
            (SplitDefectEssential, SplitBrowderLower),
            (SplitBrowderLower, SplitDefect),
            (SplitApproxPointEssential, SplitBrowderUpper),
            (SplitBrowderUpper, SplitApproxPoint),
        ];
        for (small, big) in chains {
            let (s, b) = (self.set(small), self.set(big));
            if !s.iter().all(|p| b.iter().any(|q| points_same(p, q))) {
                return Err(Error::Invariant(format!("{small} ⊄ {big}")));
            }
        }
        for k in SpectrumKind::ALL.into_iter().filter(|k| k.is_split()) {
            if !same_point_set(&self.set(k), &self.set(k.unsplit())) {
                return Err(Error::Invariant(format!("{k} differs from {}", k.unsplit())));
            }
        }
        Ok(())
    }
}

/// Classifies every candidate (in parallel).
pub fn full_spectrum<F: Scalar>(t: &FiniteTuple<F>, cfg: &RankConfig) -> Result<FiniteSpectrum<F>> {
    let candidates = candidate_points(t, cfg)?;
    let classifications = candidates
        .points
        .par_iter()
        .map(|p| classify_point(t, p, cfg, None))
        .collect::<Result<Vec<_>>>()?;
    Ok(FiniteSpectrum {
        candidates,
        classifications,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{ExactMatrix as M, Qi};

    fn q(x: i64) -> Qi {
        Qi::from_parts(x, 0)
    }

    fn pts(v: &[&[i64]]) -> Vec<Vec<Qi>> {
        v.iter().map(|p| p.iter().map(|&x| q(x)).collect()).collect()
    }

    #[test]
    fn triangular_candidates() {
        let t = FiniteTuple::new(vec![M::diagonal(&[q(0), q(1)]), M::diagonal(&[q(2), q(3)])]).unwrap();
        let c = candidate_points(&t, &RankConfig::exact()).unwrap();
        assert_eq!(c.provenance, Provenance::TriangularDiagonal);
        assert_eq!(c.points, pts(&[&[0, 2], &[1, 3]]));
        let j = FiniteTuple::single(M::from_reals(&[&[0, 1], &[0, 0]])).unwrap();
        assert_eq!(candidate_points(&j, &RankConfig::exact()).unwrap().points, pts(&[&[0]]));
        let a = M::from_reals(&[&[1, 1, 0], &[0, 1, 1], &[0, 0, 2]]);
        let b = M::from_reals(&[&[4, 0, 0], &[0, 5, 0], &[0, 0, 6]]);
        // a and b need not commute for candidate reading, but the engine insists.
        let bb = a.mul(&a).unwrap();
        let t = FiniteTuple::new(vec![a.clone(), bb]).unwrap();
        assert_eq!(candidate_points(&t, &RankConfig::exact()).unwrap().points, pts(&[&[1, 1], &[2, 4]]));
        assert!(candidate_points(&FiniteTuple::new(vec![a, b]).unwrap(), &RankConfig::exact()).is_err());
    }

    #[test]
    fn deflation_matches_triangular_reading() {
        // Conjugate an upper-triangular commuting pair by a unimodular matrix.
        let a = M::from_reals(&[&[1, 2, 0], &[0, 1, 3], &[0, 0, -2]]);
        let b = a.mul(&a).unwrap().sub(&a.scale(&q(2))).unwrap();
        let p = M::from_reals(&[&[1, 1, 0], &[0, 1, 2], &[1, 1, 1]]);
        let p_inv = p.solve(&M::identity(3)).unwrap();
        let t = FiniteTuple::new(vec![a.clone(), b.clone()]).unwrap();
        let c = t.conjugate_by(&p, &p_inv).unwrap();
        assert!(!c.op(0).is_upper_triangular());
        let direct = candidate_points(&t, &RankConfig::exact()).unwrap().points;
        let defl = candidate_points(&c, &RankConfig::exact()).unwrap();
        assert_eq!(defl.provenance, Provenance::EigenSearch);
        assert_eq!(deflate(c.ops(), &RankConfig::exact()).map(dedup_points).unwrap(), direct);
        assert_eq!(defl.points, direct);
        let float = candidate_points(&c.to_float(), &RankConfig::float()).unwrap();
        assert!(same_point_set(
            &float.points,
            &direct.iter().map(|p| crate::linalg::point_to_c64(p)).collect::<Vec<_>>()
        ));
    }

    #[test]
    fn deflation_with_gaussian_eigenvalues() {
        let a = M::from_int_rows(&[&[(0, 1), (1, 0)], &[(0, 0), (1, -1)]]);
        let p = M::from_reals(&[&[2, 1], &[1, 1]]);
        let p_inv = p.solve(&M::identity(2)).unwrap();
        let t = FiniteTuple::single(a).unwrap().conjugate_by(&p, &p_inv).unwrap();
        let c = candidate_points(&t, &RankConfig::exact()).unwrap();
        assert_eq!(c.points, vec![vec![Qi::from_parts(0, 1)], vec![Qi::from_parts(1, -1)]]);
    }

    #[test]
    fn irrational_eigenvalues_are_an_explicit_error() {
        let t = FiniteTuple::single(M::from_reals(&[&[0, 2], &[1, 0]])).unwrap();
        assert!(matches!(candidate_points(&t, &RankConfig::exact()), Err(Error::Deflation(_))));
    }

    #[test]
    fn full_spectrum_examples() {
        let d = FiniteTuple::single(M::diagonal(&[q(0), q(1)])).unwrap();
        let s = full_spectrum(&d, &RankConfig::exact()).unwrap();
        assert_eq!(s.set(SpectrumKind::Defect), pts(&[&[0], &[1]]));
        assert_eq!(s.set(SpectrumKind::ApproxPoint), pts(&[&[0], &[1]]));
        for k in [
            SpectrumKind::FredholmLower,
            SpectrumKind::FredholmUpper,
            SpectrumKind::BrowderLower,
            SpectrumKind::BrowderUpper,
        ] {
            assert!(s.set(k).is_empty());
        }
        s.check_inclusions().unwrap();
        let t = FiniteTuple::new(vec![M::diagonal(&[q(0), q(1)]), M::diagonal(&[q(2), q(3)])]).unwrap();
        let s = full_spectrum(&t, &RankConfig::exact()).unwrap();
        assert_eq!(s.set(SpectrumKind::Defect), pts(&[&[0, 2], &[1, 3]]));
        for k in SpectrumKind::ALL.into_iter().filter(|k| k.is_split()) {
            assert_eq!(s.set(k), s.set(k.unsplit()));
        }
    }
}
