//! Unilateral weighted shifts with eventually constant weights.
//!
//! Such a shift is similar to `r·S` (forward) or its adjoint (backward) via
//! a bounded diagonal with bounded inverse, so every spectrum depends only on
//! the direction and the tail weight `r`.

use num_complex::Complex64;

use crate::chains::{ChainKind, ChainTrace, Dim, LocalChains, Tail};
use crate::kinds::SpectrumKind;
use crate::model::{Direction, ShiftSpec};
use crate::region::{Region, REGION_TOL};

/// Behaviour of the single operator `A − z` for a shift `A`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OpLocal {
    /// `|z| > r`.
    Invertible,
    /// Forward shift, `|z| < r`: injective, closed range, `codim R(Aᵏ) = k`.
    LowerFinite,
    /// Backward shift, `|z| < r`: surjective, `dim N(Aᵏ) = k`.
    UpperFinite,
    /// `|z| = r`: injective with dense, non-closed range.
    NonClosed,
}

impl OpLocal {
    pub fn at(s: &ShiftSpec, z: Complex64) -> OpLocal {
        let m = z.norm();
        if (m - s.tail()).abs() <= REGION_TOL {
            OpLocal::NonClosed
        } else if m > s.tail() {
            OpLocal::Invertible
        } else {
            match s.direction() {
                Direction::Forward => OpLocal::LowerFinite,
                Direction::Backward => OpLocal::UpperFinite,
            }
        }
    }

    pub fn range_closed(self) -> bool {
        self != OpLocal::NonClosed
    }

    /// Injective with closed range.
    pub fn bounded_below(self) -> bool {
        matches!(self, OpLocal::Invertible | OpLocal::LowerFinite)
    }

    pub fn surjective(self) -> bool {
        matches!(self, OpLocal::Invertible | OpLocal::UpperFinite)
    }

    /// `codim R((A − z)ᵏ)`.
    pub fn codim(self, k: usize) -> Dim {
        match self {
            OpLocal::Invertible | OpLocal::UpperFinite => Dim::ZERO,
            OpLocal::LowerFinite => Dim::Finite(k),
            OpLocal::NonClosed => Dim::Infinite,
        }
    }

    /// `dim N((A − z)ᵏ)`.
    pub fn nullity(self, k: usize) -> Dim {
        match self {
            OpLocal::UpperFinite => Dim::Finite(k),
            _ => Dim::ZERO,
        }
    }
}

pub fn shift_chains(s: &ShiftSpec, z: Complex64, k_max: usize) -> LocalChains {
    let op = OpLocal::at(s, z);
    let ks = 1..=k_max.max(3);
    let tail = |v: &[Dim]| {
        if v.windows(2).any(|w| w[0] < w[1]) {
            Tail::Unbounded
        } else {
            Tail::Stable
        }
    };
    let lower: Vec<Dim> = ks.clone().map(|k| op.codim(k)).collect();
    let upper: Vec<Dim> = ks.map(|k| op.nullity(k)).collect();
    let (lt, ut) = (tail(&lower), tail(&upper));
    LocalChains {
        lower: ChainTrace::new(ChainKind::Lower, lower, lt),
        upper: ChainTrace::new(ChainKind::Upper, upper, ut),
        range_closed: op.range_closed(),
        kernel_complemented: true,
        range_complemented: true,
    }
}

/// Closed-form spectra: the closed disk of radius `r` for the side where the
/// shift is one-sided Fredholm with growing chains, the circle elsewhere.
pub fn shift_spectrum(s: &ShiftSpec, kind: SpectrumKind) -> Region {
    use SpectrumKind::*;
    let origin = Complex64::new(0.0, 0.0);
    let disk = Region::disk(origin, s.tail());
    let circle = Region::circle(origin, s.tail());
    match (s.direction(), kind.unsplit()) {
        (Direction::Forward, Defect | BrowderLower) => disk,
        (Direction::Backward, ApproxPoint | BrowderUpper) => disk,
        _ => circle,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chains::classify_local;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn forward_shift_gap() {
        let s = ShiftSpec::forward(1.0).unwrap();
        let bl = shift_spectrum(&s, SpectrumKind::BrowderLower);
        let fl = shift_spectrum(&s, SpectrumKind::FredholmLower);
        assert!(bl.contains(&[c(0.5)], REGION_TOL) && !fl.contains(&[c(0.5)], REGION_TOL));
        assert!(fl.contains(&[c(1.0)], REGION_TOL));
        let v = classify_local(vec![c(0.5)], shift_chains(&s, c(0.5), 6)).unwrap();
        assert!(v.flags.a && v.flags.browder_lower && !v.flags.fredholm_lower);
        assert!(!v.flags.approx_point && !v.flags.browder_upper);
        let v = classify_local(vec![c(1.5)], shift_chains(&s, c(1.5), 6)).unwrap();
        assert!(!v.flags.any());
    }

    #[test]
    fn backward_shift_swaps_sides() {
        let s = ShiftSpec::backward(2.0).unwrap();
        assert_eq!(shift_spectrum(&s, SpectrumKind::BrowderUpper), Region::disk(c(0.0), 2.0));
        assert_eq!(shift_spectrum(&s, SpectrumKind::BrowderLower), Region::circle(c(0.0), 2.0));
        let v = classify_local(vec![c(1.0)], shift_chains(&s, c(1.0), 6)).unwrap();
        assert!(v.flags.d && v.flags.browder_upper && v.flags.approx_point && !v.flags.defect);
        let v = classify_local(vec![c(0.0)], shift_chains(&s, Complex64::new(0.0, 2.0), 6)).unwrap();
        assert!(v.flags.fredholm_lower && v.flags.fredholm_upper);
    }

    #[test]
    fn prefix_weights_do_not_matter() {
        let s = ShiftSpec::new(Direction::Forward, vec![c(5.0), Complex64::new(0.0, 0.1)], 0.5).unwrap();
        assert_eq!(OpLocal::at(&s, c(0.4)), OpLocal::LowerFinite);
        assert_eq!(OpLocal::at(&s, c(0.5)), OpLocal::NonClosed);
        assert_eq!(OpLocal::at(&s, c(0.6)), OpLocal::Invertible);
    }
}
