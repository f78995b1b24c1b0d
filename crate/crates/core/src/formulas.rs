//! Product rules: each spectrum of a tensor or multiplication tuple is a
//! union of Cartesian products of spectra of the factors.

use crate::kinds::SpectrumKind;
use crate::linalg::Scalar;
use crate::region::Region;
use crate::spectra::dedup_points;

/// How the combined tuple is built from `(S, T)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Construction {
    /// `(S ⊗ I, I ⊗ T)`.
    Tensor,
    /// `(L_S, R_T)`: left multiplication by `S`, right by `T`.
    Multiplication,
}

/// Pairs `(a, b)` with `σ_kind(combined) = ⋃ σ_a(S) × σ_b(T)`.
pub fn rule(construction: Construction, kind: SpectrumKind) -> &'static [(SpectrumKind, SpectrumKind)] {
    use SpectrumKind::*;
    match construction {
        Construction::Tensor => match kind {
            Defect => &[(Defect, Defect)],
            ApproxPoint => &[(ApproxPoint, ApproxPoint)],
            FredholmLower => &[(FredholmLower, Defect), (Defect, FredholmLower)],
            FredholmUpper => &[(FredholmUpper, ApproxPoint), (ApproxPoint, FredholmUpper)],
            BrowderLower => &[(BrowderLower, Defect), (Defect, BrowderLower)],
            BrowderUpper => &[(BrowderUpper, ApproxPoint), (ApproxPoint, BrowderUpper)],
            SplitDefect => &[(SplitDefect, SplitDefect)],
            SplitApproxPoint => &[(SplitApproxPoint, SplitApproxPoint)],
            SplitDefectEssential => &[(SplitDefectEssential, SplitDefect), (SplitDefect, SplitDefectEssential)],
            SplitApproxPointEssential => &[
                (SplitApproxPointEssential, SplitApproxPoint),
                (SplitApproxPoint, SplitApproxPointEssential),
            ],
            SplitBrowderLower => &[(SplitBrowderLower, SplitDefect), (SplitDefect, SplitBrowderLower)],
            SplitBrowderUpper => &[
                (SplitBrowderUpper, SplitApproxPoint),
                (SplitApproxPoint, SplitBrowderUpper),
            ],
        },
        Construction::Multiplication => match kind {
            Defect => &[(Defect, ApproxPoint)],
            ApproxPoint => &[(ApproxPoint, Defect)],
            FredholmLower => &[(FredholmLower, ApproxPoint), (Defect, FredholmUpper)],
            FredholmUpper => &[(FredholmUpper, Defect), (ApproxPoint, FredholmLower)],
            BrowderLower => &[(BrowderLower, ApproxPoint), (Defect, BrowderUpper)],
            BrowderUpper => &[(BrowderUpper, Defect), (ApproxPoint, BrowderLower)],
            SplitDefect => &[(SplitDefect, SplitApproxPoint)],
            SplitApproxPoint => &[(SplitApproxPoint, SplitDefect)],
            SplitDefectEssential => &[
                (SplitDefectEssential, SplitApproxPoint),
                (SplitDefect, SplitApproxPointEssential),
            ],
            SplitApproxPointEssential => &[
                (SplitApproxPointEssential, SplitDefect),
                (SplitApproxPoint, SplitDefectEssential),
            ],
            SplitBrowderLower => &[(SplitBrowderLower, SplitApproxPoint), (SplitDefect, SplitBrowderUpper)],
            SplitBrowderUpper => &[(SplitBrowderUpper, SplitDefect), (SplitApproxPoint, SplitBrowderLower)],
        },
    }
}

/// `⋃ left(a) × right(b)` over `pairs` (usually [`rule`]), for finite point
/// sets.
pub fn combine_points<F: Scalar>(
    pairs: &[(SpectrumKind, SpectrumKind)],
    left: impl Fn(SpectrumKind) -> Vec<Vec<F>>,
    right: impl Fn(SpectrumKind) -> Vec<Vec<F>>,
) -> Vec<Vec<F>> {
    let mut out = Vec::new();
    for &(a, b) in pairs {
        let (la, rb) = (left(a), right(b));
        for p in &la {
            for q in &rb {
                let mut z = p.clone();
                z.extend(q.iter().cloned());
                out.push(z);
            }
        }
    }
    dedup_points(out)
}

/// The same union for regions of dimensions `n` and `m`.
pub fn combine_regions(
    pairs: &[(SpectrumKind, SpectrumKind)],
    n: usize,
    m: usize,
    left: impl Fn(SpectrumKind) -> Region,
    right: impl Fn(SpectrumKind) -> Region,
) -> Region {
    let parts = pairs
        .iter()
        .map(|&(a, b)| Region::product(vec![left(a), right(b)]))
        .collect();
    Region::union(n + m, parts)
}
