use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Points of structured models are always complex floats.
pub type CPoint = Vec<Complex64>;

/// Distinctness threshold between descriptor points.
pub const DESCRIPTOR_TOL: f64 = 1e-9;

/// Multiplicity of an attained symbol value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Multiplicity {
    Finite(usize),
    Infinite,
}

impl Multiplicity {
    pub fn is_infinite(self) -> bool {
        matches!(self, Multiplicity::Infinite)
    }
}

impl fmt::Display for Multiplicity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Multiplicity::Finite(m) => write!(f, "{m}"),
            Multiplicity::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for Multiplicity {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Multiplicity::Finite(m) => s.serialize_u64(*m as u64),
            Multiplicity::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Multiplicity {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            N(u64),
            S(String),
        }
        match Raw::deserialize(d)? {
            Raw::N(0) => Err(serde::de::Error::custom("multiplicity must be positive")),
            Raw::N(m) => Ok(Multiplicity::Finite(m as usize)),
            Raw::S(s) if s.eq_ignore_ascii_case("inf") => Ok(Multiplicity::Infinite),
            Raw::S(s) => Err(serde::de::Error::custom(format!("bad multiplicity {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Atom {
    pub point: CPoint,
    pub mult: Multiplicity,
}

/// A commuting tuple of diagonal operators on `ℓ²`, described by the values
/// its joint symbol attains (atoms) and the limits it accumulates at.
///
/// Each accumulation point `a` is realized by the symbols `a + 2⁻ᵏ·e₁` for
/// `k ≥ k₀`, one index each, with `k₀` chosen so the approach points stay
/// clear of every other descriptor point.
#[derive(Clone, Debug, PartialEq)]
pub struct DiagonalTupleSpec {
    n: usize,
    atoms: Vec<Atom>,
    accumulations: Vec<CPoint>,
}

impl DiagonalTupleSpec {
    pub fn new(n: usize, atoms: Vec<Atom>, accumulations: Vec<CPoint>) -> Result<Self> {
        let bad = |m: String| Err(Error::InvalidSpec(m));
        if n == 0 {
            return bad("diagonal tuple needs n >= 1".into());
        }
        if atoms.is_empty() && accumulations.is_empty() {
            return bad("diagonal tuple needs at least one atom or accumulation".into());
        }
        for p in atoms.iter().map(|a| &a.point).chain(&accumulations) {
            if p.len() != n {
                return bad(format!("point of length {} in a {n}-tuple", p.len()));
            }
            if p.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                return Err(Error::NonFinite);
            }
        }
        for a in &atoms {
            if a.mult == Multiplicity::Finite(0) {
                return bad("atom multiplicity must be positive".into());
            }
        }
        for (i, a) in atoms.iter().enumerate() {
            if atoms[..i].iter().any(|b| dist(&a.point, &b.point) <= DESCRIPTOR_TOL) {
                return bad(format!("duplicate atom {:?}", a.point));
            }
        }
        for (i, a) in accumulations.iter().enumerate() {
            if accumulations[..i].iter().any(|b| dist(a, b) <= DESCRIPTOR_TOL) {
                return bad(format!("duplicate accumulation point {a:?}"));
            }
        }
        Ok(DiagonalTupleSpec {
            n,
            atoms,
            accumulations,
        })
    }

    /// Single-coordinate convenience constructor from real atoms.
    pub fn scalar(atoms: &[(f64, Multiplicity)], accumulations: &[f64]) -> Result<Self> {
        Self::new(
            1,
            atoms
                .iter()
                .map(|&(x, mult)| Atom {
                    point: vec![Complex64::new(x, 0.0)],
                    mult,
                })
                .collect(),
            accumulations
                .iter()
                .map(|&x| vec![Complex64::new(x, 0.0)])
                .collect(),
        )
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn accumulations(&self) -> &[CPoint] {
        &self.accumulations
    }

    /// First exponent of the canonical approach sequences.
    pub fn approach_start(&self) -> u32 {
        let pts: Vec<&CPoint> = self
            .atoms
            .iter()
            .map(|a| &a.point)
            .chain(&self.accumulations)
            .collect();
        let mut min = f64::INFINITY;
        for i in 0..pts.len() {
            for j in 0..i {
                let d = dist(pts[i], pts[j]);
                if d > DESCRIPTOR_TOL {
                    min = min.min(d);
                }
            }
        }
        let mut k = 1;
        while min.is_finite() && 0.5f64.powi(k as i32) >= min / 2.0 {
            k += 1;
        }
        k
    }

    pub fn adjoint(&self) -> Self {
        DiagonalTupleSpec {
            n: self.n,
            atoms: self
                .atoms
                .iter()
                .map(|a| Atom {
                    point: conj(&a.point),
                    mult: a.mult,
                })
                .collect(),
            accumulations: self.accumulations.iter().map(|p| conj(p)).collect(),
        }
    }

    /// Largest modulus of any descriptor coordinate, including approach offsets.
    pub fn radius(&self) -> f64 {
        let r = self
            .atoms
            .iter()
            .map(|a| &a.point)
            .chain(&self.accumulations)
            .flat_map(|p| p.iter().map(|z| z.norm()))
            .fold(0.0, f64::max);
        if self.accumulations.is_empty() {
            r
        } else {
            r + 0.5f64.powi(self.approach_start() as i32)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Forward,
    Backward,
}

/// Unilateral weighted shift with eventually constant weights.
#[derive(Clone, Debug, PartialEq)]
pub struct ShiftSpec {
    direction: Direction,
    prefix: Vec<Complex64>,
    tail: f64,
}

impl ShiftSpec {
    pub fn new(direction: Direction, prefix: Vec<Complex64>, tail: f64) -> Result<Self> {
        if !(tail > 0.0) || !tail.is_finite() {
            return Err(Error::InvalidSpec(format!("tail weight must be positive, got {tail}")));
        }
        if prefix.iter().any(|w| w.norm() == 0.0 || !w.re.is_finite() || !w.im.is_finite()) {
            return Err(Error::InvalidSpec("prefix weights must be finite and nonzero".into()));
        }
        Ok(ShiftSpec {
            direction,
            prefix,
            tail,
        })
    }

    pub fn forward(tail: f64) -> Result<Self> {
        Self::new(Direction::Forward, vec![], tail)
    }

    pub fn backward(tail: f64) -> Result<Self> {
        Self::new(Direction::Backward, vec![], tail)
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn prefix(&self) -> &[Complex64] {
        &self.prefix
    }

    pub fn tail(&self) -> f64 {
        self.tail
    }

    /// Weight `w_k`, zero-based.
    pub fn weight(&self, k: usize) -> Complex64 {
        self.prefix
            .get(k)
            .copied()
            .unwrap_or(Complex64::new(self.tail, 0.0))
    }

    pub fn adjoint(&self) -> Self {
        ShiftSpec {
            direction: match self.direction {
                Direction::Forward => Direction::Backward,
                Direction::Backward => Direction::Forward,
            },
            prefix: self.prefix.iter().map(|w| w.conj()).collect(),
            tail: self.tail,
        }
    }
}

/// One block of a [`StructuredTuple`].
#[derive(Clone, Debug, PartialEq)]
pub enum StructuredPart {
    Diagonal(DiagonalTupleSpec),
    Shift(ShiftSpec),
}

impl StructuredPart {
    pub fn n(&self) -> usize {
        match self {
            StructuredPart::Diagonal(d) => d.n(),
            StructuredPart::Shift(_) => 1,
        }
    }

    pub fn adjoint(&self) -> Self {
        match self {
            StructuredPart::Diagonal(d) => StructuredPart::Diagonal(d.adjoint()),
            StructuredPart::Shift(s) => StructuredPart::Shift(s.adjoint()),
        }
    }
}

impl From<DiagonalTupleSpec> for StructuredPart {
    fn from(d: DiagonalTupleSpec) -> Self {
        StructuredPart::Diagonal(d)
    }
}

impl From<ShiftSpec> for StructuredPart {
    fn from(s: ShiftSpec) -> Self {
        StructuredPart::Shift(s)
    }
}

/// Coordinate-wise composition of blocks, each acting on its own tensor
/// factor of `ℓ²(ℕ^parts)`.
#[derive(Clone, Debug, PartialEq)]
pub struct StructuredTuple {
    parts: Vec<StructuredPart>,
}

impl StructuredTuple {
    pub fn new(parts: Vec<StructuredPart>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::InvalidSpec("structured tuple has no parts".into()));
        }
        let shifts = parts
            .iter()
            .filter(|p| matches!(p, StructuredPart::Shift(_)))
            .count();
        if shifts > 1 {
            return Err(Error::Unsupported(
                "at most one shift block per structured tuple".into(),
            ));
        }
        Ok(StructuredTuple { parts })
    }

    pub fn parts(&self) -> &[StructuredPart] {
        &self.parts
    }

    /// Total number of coordinates.
    pub fn n(&self) -> usize {
        self.parts.iter().map(StructuredPart::n).sum()
    }

    pub fn adjoint(&self) -> Self {
        StructuredTuple {
            parts: self.parts.iter().map(StructuredPart::adjoint).collect(),
        }
    }
}

impl From<DiagonalTupleSpec> for StructuredTuple {
    fn from(d: DiagonalTupleSpec) -> Self {
        StructuredTuple {
            parts: vec![StructuredPart::Diagonal(d)],
        }
    }
}

impl From<ShiftSpec> for StructuredTuple {
    fn from(s: ShiftSpec) -> Self {
        StructuredTuple {
            parts: vec![StructuredPart::Shift(s)],
        }
    }
}

pub(crate) fn dist(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

fn conj(p: &[Complex64]) -> CPoint {
    p.iter().map(|z| z.conj()).collect()
}
