//! Closed-form engines for diagonal, shift and shift ⊗ diagonal tuples.

pub mod diagonal;
pub mod fibered;
pub mod shift;
pub mod truncation;

use num_complex::Complex64;

pub use diagonal::{DiagonalLocal, DiagonalModel, FactorPiece, ProductPiece};
pub use fibered::fibered_chains;
use fibered::chains_from;
pub use shift::{shift_chains, shift_spectrum, OpLocal};
pub use truncation::{shift_section, truncated_chains};

use crate::chains::{classify_local, LocalChains, PointClassification};
use crate::error::{Error, Result};
use crate::formulas::{combine_regions, rule, Construction};
use crate::kinds::SpectrumKind;
use crate::model::{CPoint, DiagonalTupleSpec, ShiftSpec, StructuredPart, StructuredTuple};
use crate::region::{Region, REGION_TOL};

/// Everything the local chains depend on; points sharing a state share
/// their classification.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LocalState {
    Diagonal(DiagonalLocal),
    Fibered(OpLocal, DiagonalLocal),
}

/// A structured tuple reduced to something with local chains.
#[derive(Clone, Debug, PartialEq)]
pub enum Engine {
    Diagonal(DiagonalModel),
    Shift(ShiftSpec),
    /// The shift sits at coordinate `pos`; the diagonal model carries the
    /// other coordinates in order.
    ShiftDiagonal {
        shift: ShiftSpec,
        diag: DiagonalModel,
        pos: usize,
    },
}

impl Engine {
    pub fn from_tuple(t: &StructuredTuple) -> Result<Engine> {
        let mut diag: Option<DiagonalModel> = None;
        let mut shift = None;
        for part in t.parts() {
            match part {
                StructuredPart::Diagonal(d) => {
                    let m = DiagonalModel::from_spec(d);
                    diag = Some(match diag {
                        Some(acc) => acc.tensor(&m),
                        None => m,
                    });
                }
                StructuredPart::Shift(s) => {
                    let pos = diag.as_ref().map_or(0, DiagonalModel::n);
                    shift = Some((s.clone(), pos));
                }
            }
        }
        Ok(match (shift, diag) {
            (None, Some(d)) => Engine::Diagonal(d),
            (Some((s, _)), None) => Engine::Shift(s),
            (Some((shift, pos)), Some(diag)) => Engine::ShiftDiagonal { shift, diag, pos },
            (None, None) => return Err(Error::InvalidSpec("empty structured tuple".into())),
        })
    }

    pub fn n(&self) -> usize {
        match self {
            Engine::Diagonal(d) => d.n(),
            Engine::Shift(_) => 1,
            Engine::ShiftDiagonal { diag, .. } => diag.n() + 1,
        }
    }

    fn split(&self, z: &[Complex64]) -> Result<(Complex64, Vec<Complex64>)> {
        if z.len() != self.n() {
            return Err(Error::Length { expected: self.n(), found: z.len() });
        }
        let Engine::ShiftDiagonal { pos, .. } = self else {
            unreachable!("only used for shift ⊗ diagonal")
        };
        let mut w = z.to_vec();
        let s = w.remove(*pos);
        Ok((s, w))
    }

    pub fn chains(&self, z: &[Complex64], k_max: usize) -> Result<LocalChains> {
        match self {
            Engine::Diagonal(d) => d.chains(z, k_max),
            Engine::Shift(s) => {
                if z.len() != 1 {
                    return Err(Error::Length { expected: 1, found: z.len() });
                }
                Ok(shift_chains(s, z[0], k_max))
            }
            Engine::ShiftDiagonal { shift, diag, .. } => {
                let (s, w) = self.split(z)?;
                fibered_chains(shift, diag, s, &w, k_max)
            }
        }
    }

    /// `None` for a lone shift, whose chains are cheap anyway.
    pub fn state(&self, z: &[Complex64]) -> Result<Option<LocalState>> {
        match self {
            Engine::Diagonal(d) => Ok(Some(LocalState::Diagonal(d.local(z, REGION_TOL)?))),
            Engine::Shift(_) => Ok(None),
            Engine::ShiftDiagonal { shift, diag, pos } => {
                if z.len() != self.n() {
                    return Err(Error::Length { expected: self.n(), found: z.len() });
                }
                let w: Vec<Complex64> = z.iter().enumerate().filter(|&(i, _)| i != *pos).map(|(_, &c)| c).collect();
                Ok(Some(LocalState::Fibered(OpLocal::at(shift, z[*pos]), diag.local(&w, REGION_TOL)?)))
            }
        }
    }

    pub fn chains_of(state: LocalState, k_max: usize) -> LocalChains {
        match state {
            LocalState::Diagonal(loc) => DiagonalModel::chains_of(loc, k_max),
            LocalState::Fibered(op, loc) => chains_from(op, loc, k_max),
        }
    }

    pub fn classify(&self, z: &[Complex64]) -> Result<PointClassification<Complex64>> {
        classify_local(z.to_vec(), self.chains(z, 6)?)
    }

    pub fn radius(&self) -> f64 {
        match self {
            Engine::Diagonal(d) => d.radius(),
            Engine::Shift(s) => s.tail(),
            Engine::ShiftDiagonal { shift, diag, .. } => shift.tail().max(diag.radius()),
        }
    }
}

/// Spectrum of a structured tuple from the closed forms of its parts,
/// combined left to right with the tensor product rules.
pub fn structured_spectrum(t: &StructuredTuple, kind: SpectrumKind) -> Region {
    structured_spectrum_with(t, kind, &|k| rule(Construction::Tensor, k))
}

/// [`structured_spectrum`] with a caller-supplied product rule.
pub fn structured_spectrum_with(
    t: &StructuredTuple,
    kind: SpectrumKind,
    rules: &dyn Fn(SpectrumKind) -> &'static [(SpectrumKind, SpectrumKind)],
) -> Region {
    let mut parts = t.parts().iter();
    let first = parts.next().expect("structured tuples are non-empty");
    let mut acc: Box<dyn Fn(SpectrumKind) -> Region> = part_regions(first);
    let mut n = first.n();
    for p in parts {
        let m = p.n();
        let right = part_regions(p);
        let left = acc;
        let table: Vec<(SpectrumKind, Region)> = SpectrumKind::ALL
            .iter()
            .map(|&k| (k, combine_regions(rules(k), n, m, &left, &right)))
            .collect();
        acc = Box::new(move |k| table.iter().find(|(j, _)| *j == k).unwrap().1.clone());
        n += m;
    }
    acc(kind)
}

fn part_regions(p: &StructuredPart) -> Box<dyn Fn(SpectrumKind) -> Region> {
    match p {
        StructuredPart::Diagonal(d) => {
            let m = DiagonalModel::from_spec(d);
            Box::new(move |k| m.region(k))
        }
        StructuredPart::Shift(s) => {
            let s = s.clone();
            Box::new(move |k| shift_spectrum(&s, k))
        }
    }
}

pub fn diagonal_spectrum(d: &DiagonalTupleSpec, kind: SpectrumKind) -> Region {
    DiagonalModel::from_spec(d).region(kind)
}

/// Oracle chains for a structured tuple containing a shift, at `z`.
pub fn oracle_chains(t: &StructuredTuple, z: &[Complex64], k_max: usize) -> Result<LocalChains> {
    let engine = Engine::from_tuple(t)?;
    let diags: Vec<&DiagonalTupleSpec> = t
        .parts()
        .iter()
        .filter_map(|p| match p {
            StructuredPart::Diagonal(d) => Some(d),
            _ => None,
        })
        .collect();
    match &engine {
        Engine::Shift(s) => truncated_chains(s, None, z[0], &[], k_max),
        Engine::ShiftDiagonal { shift, .. } if diags.len() == 1 => {
            let (s, w) = engine.split(z)?;
            truncated_chains(shift, Some(diags[0]), s, &w, k_max)
        }
        _ => Err(Error::Unsupported(
            "truncation oracle needs a shift and at most one diagonal part".into(),
        )),
    }
}

/// Anchor points of every spectrum of the tuple.
pub fn all_anchors(t: &StructuredTuple) -> Vec<CPoint> {
    let mut pts: Vec<CPoint> = SpectrumKind::BASIC
        .iter()
        .flat_map(|&k| structured_spectrum(t, k).anchors())
        .collect();
    pts.dedup();
    pts
}
