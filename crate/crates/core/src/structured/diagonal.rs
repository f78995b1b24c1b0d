//! Diagonal tuples as finite unions of product families of symbols.
//!
//! A single [`DiagonalTupleSpec`] is one family per atom and per
//! accumulation point. Tensor products multiply families, projections cut
//! them, so both stay inside this description.

use num_complex::Complex64;

use crate::chains::{ChainKind, ChainTrace, Dim, LocalChains, Tail};
use crate::error::{Error, Result};
use crate::kinds::SpectrumKind;
use crate::model::{dist, CPoint, DiagonalTupleSpec, Multiplicity};
use crate::region::{approach_contains, Region, REGION_TOL};

/// Symbols of one tensor factor.
#[derive(Clone, Debug, PartialEq)]
pub enum FactorPiece {
    /// One value, attained `mult` times.
    Atom { point: CPoint, mult: Multiplicity },
    /// The values `limit + 2⁻ᵏ·e₁`, `k ≥ start`, each attained once.
    Approach { limit: CPoint, start: u32 },
}

impl FactorPiece {
    pub fn dim(&self) -> usize {
        match self {
            FactorPiece::Atom { point, .. } => point.len(),
            FactorPiece::Approach { limit, .. } => limit.len(),
        }
    }

    /// How many symbols of this piece equal `z`.
    pub fn count_at(&self, z: &[Complex64], tol: f64) -> Dim {
        match self {
            FactorPiece::Atom { point, mult } => {
                if dist(point, z) <= tol {
                    mult_dim(*mult)
                } else {
                    Dim::ZERO
                }
            }
            FactorPiece::Approach { limit, start } => {
                let attained = dist(limit, z) > tol && approach_contains(limit, *start, z, tol);
                Dim::Finite(attained as usize)
            }
        }
    }

    /// `z` lies in the closure of the symbol set.
    pub fn in_closure(&self, z: &[Complex64], tol: f64) -> bool {
        match self {
            FactorPiece::Atom { point, .. } => dist(point, z) <= tol,
            FactorPiece::Approach { limit, start } => approach_contains(limit, *start, z, tol),
        }
    }

    /// `z` is a limit of symbols different from `z`.
    pub fn limit_at(&self, z: &[Complex64], tol: f64) -> bool {
        matches!(self, FactorPiece::Approach { limit, .. } if dist(limit, z) <= tol)
    }

    pub fn closure(&self) -> Region {
        match self {
            FactorPiece::Atom { point, .. } => Region::point(point.clone()),
            FactorPiece::Approach { limit, start } => Region::ApproachSequence {
                limit: limit.clone(),
                start: *start,
            },
        }
    }

    /// Points where this piece alone forces an infinite kernel or a
    /// non-closed range.
    pub fn essential(&self) -> Option<Region> {
        match self {
            FactorPiece::Atom {
                point,
                mult: Multiplicity::Infinite,
            } => Some(Region::point(point.clone())),
            FactorPiece::Atom { .. } => None,
            FactorPiece::Approach { limit, .. } => Some(Region::point(limit.clone())),
        }
    }

    /// Number of symbols in the piece.
    pub fn size(&self) -> Multiplicity {
        match self {
            FactorPiece::Atom { mult, .. } => *mult,
            FactorPiece::Approach { .. } => Multiplicity::Infinite,
        }
    }

    fn project(&self, r: usize) -> FactorPiece {
        match self {
            FactorPiece::Atom { point, mult } => FactorPiece::Atom {
                point: point[..r].to_vec(),
                mult: *mult,
            },
            FactorPiece::Approach { limit, start } => FactorPiece::Approach {
                limit: limit[..r].to_vec(),
                start: *start,
            },
        }
    }
}

fn mult_dim(m: Multiplicity) -> Dim {
    match m {
        Multiplicity::Finite(m) => Dim::Finite(m),
        Multiplicity::Infinite => Dim::Infinite,
    }
}

fn mult_mul(a: Multiplicity, b: Multiplicity) -> Multiplicity {
    match (a, b) {
        (Multiplicity::Finite(x), Multiplicity::Finite(y)) => Multiplicity::Finite(x * y),
        _ => Multiplicity::Infinite,
    }
}

/// Product of factor families, repeated `weight` times.
#[derive(Clone, Debug, PartialEq)]
pub struct ProductPiece {
    pub factors: Vec<FactorPiece>,
    pub weight: Multiplicity,
}

impl ProductPiece {
    fn split<'a>(&self, z: &'a [Complex64]) -> Vec<&'a [Complex64]> {
        let mut off = 0;
        self.factors
            .iter()
            .map(|f| {
                let s = &z[off..off + f.dim()];
                off += f.dim();
                s
            })
            .collect()
    }

    fn closures(&self) -> Vec<Region> {
        self.factors.iter().map(FactorPiece::closure).collect()
    }
}

/// Kernel count and closedness of a diagonal tuple at one point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct DiagonalLocal {
    /// Number of symbols equal to the point.
    pub count: Dim,
    /// The point is a limit of other symbols (range of `T̃ − λ` not closed).
    pub limit: bool,
}

impl DiagonalLocal {
    pub fn in_closure(&self) -> bool {
        !self.count.is_zero() || self.limit
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DiagonalModel {
    n: usize,
    pieces: Vec<ProductPiece>,
}

impl DiagonalModel {
    pub fn from_spec(d: &DiagonalTupleSpec) -> Self {
        let start = d.approach_start();
        let mut pieces: Vec<ProductPiece> = d
            .atoms()
            .iter()
            .map(|a| ProductPiece {
                factors: vec![FactorPiece::Atom {
                    point: a.point.clone(),
                    mult: a.mult,
                }],
                weight: Multiplicity::Finite(1),
            })
            .collect();
        pieces.extend(d.accumulations().iter().map(|a| ProductPiece {
            factors: vec![FactorPiece::Approach {
                limit: a.clone(),
                start,
            }],
            weight: Multiplicity::Finite(1),
        }));
        DiagonalModel { n: d.n(), pieces }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn pieces(&self) -> &[ProductPiece] {
        &self.pieces
    }

    /// Symbols of `D₁ ⊗ I, I ⊗ D₂`: all pairs.
    pub fn tensor(&self, other: &DiagonalModel) -> DiagonalModel {
        let mut pieces = Vec::with_capacity(self.pieces.len() * other.pieces.len());
        for a in &self.pieces {
            for b in &other.pieces {
                let mut factors = a.factors.clone();
                factors.extend(b.factors.iter().cloned());
                pieces.push(ProductPiece {
                    factors,
                    weight: mult_mul(a.weight, b.weight),
                });
            }
        }
        DiagonalModel {
            n: self.n + other.n,
            pieces,
        }
    }

    /// The diagonal tuple formed by the first `m` coordinates.
    pub fn project(&self, m: usize) -> Result<DiagonalModel> {
        if m == 0 || m > self.n {
            return Err(Error::Input(format!("cannot keep {m} of {} coordinates", self.n)));
        }
        let pieces = self
            .pieces
            .iter()
            .map(|p| {
                let mut factors = Vec::new();
                let mut weight = p.weight;
                let mut off = 0;
                for f in &p.factors {
                    let d = f.dim();
                    if off >= m {
                        // Dropped factor: each kept symbol now repeats.
                        weight = mult_mul(weight, f.size());
                    } else if off + d <= m {
                        factors.push(f.clone());
                    } else {
                        factors.push(f.project(m - off));
                    }
                    off += d;
                }
                ProductPiece { factors, weight }
            })
            .collect();
        Ok(DiagonalModel { n: m, pieces })
    }

    pub fn adjoint(&self) -> DiagonalModel {
        let conj = |p: &CPoint| p.iter().map(|z| z.conj()).collect::<CPoint>();
        DiagonalModel {
            n: self.n,
            pieces: self
                .pieces
                .iter()
                .map(|p| ProductPiece {
                    factors: p
                        .factors
                        .iter()
                        .map(|f| match f {
                            FactorPiece::Atom { point, mult } => FactorPiece::Atom {
                                point: conj(point),
                                mult: *mult,
                            },
                            FactorPiece::Approach { limit, start } => FactorPiece::Approach {
                                limit: conj(limit),
                                start: *start,
                            },
                        })
                        .collect(),
                    weight: p.weight,
                })
                .collect(),
        }
    }

    pub fn local(&self, z: &[Complex64], tol: f64) -> Result<DiagonalLocal> {
        if z.len() != self.n {
            return Err(Error::Length {
                expected: self.n,
                found: z.len(),
            });
        }
        let mut count = Dim::ZERO;
        let mut limit = false;
        for p in &self.pieces {
            let parts = p.split(z);
            let c = p
                .factors
                .iter()
                .zip(&parts)
                .fold(mult_dim(p.weight), |acc, (f, s)| acc.mul(f.count_at(s, tol)));
            count = count.add(c);
            let all_close = p.factors.iter().zip(&parts).all(|(f, s)| f.in_closure(s, tol));
            limit |= all_close && p.factors.iter().zip(&parts).any(|(f, s)| f.limit_at(s, tol));
        }
        Ok(DiagonalLocal { count, limit })
    }

    /// Chains at `z`: both traces are constant in `k` for diagonal tuples.
    pub fn chains(&self, z: &[Complex64], k_max: usize) -> Result<LocalChains> {
        Ok(Self::chains_of(self.local(z, REGION_TOL)?, k_max))
    }

    pub fn chains_of(loc: DiagonalLocal, k_max: usize) -> LocalChains {
        let lower = if loc.limit { Dim::Infinite } else { loc.count };
        LocalChains {
            lower: ChainTrace::new(ChainKind::Lower, vec![lower; k_max.max(3)], Tail::Stable),
            upper: ChainTrace::new(ChainKind::Upper, vec![loc.count; k_max.max(3)], Tail::Stable),
            range_closed: !loc.limit,
            kernel_complemented: true,
            range_complemented: true,
        }
    }

    /// Closure of the symbol set.
    pub fn support(&self) -> Region {
        Region::union(
            self.n,
            self.pieces.iter().map(|p| Region::product(p.closures())).collect(),
        )
    }

    /// Points with infinite kernel count or non-closed range.
    pub fn essential(&self) -> Region {
        let mut parts = Vec::new();
        for p in &self.pieces {
            let closures = p.closures();
            if p.weight.is_infinite() {
                parts.push(Region::product(closures.clone()));
            }
            for (i, f) in p.factors.iter().enumerate() {
                if let Some(e) = f.essential() {
                    let mut fs = closures.clone();
                    fs[i] = e;
                    parts.push(Region::product(fs));
                }
            }
        }
        Region::union(self.n, parts)
    }

    /// Closed-form spectrum. Traces are constant, so the Browder sets equal
    /// the Fredholm ones; on `ℓ²` every split set equals its unsplit twin.
    pub fn region(&self, kind: SpectrumKind) -> Region {
        use SpectrumKind::*;
        match kind.unsplit() {
            Defect | ApproxPoint => self.support(),
            _ => self.essential(),
        }
    }

    pub fn radius(&self) -> f64 {
        self.support().bounding_radius()
    }

    #[cfg(test)]
    pub(crate) fn classify_flags(&self, z: &[Complex64]) -> crate::chains::Flags {
        crate::chains::classify_local(z.to_vec(), self.chains(z, 6).unwrap()).unwrap().flags
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use Multiplicity::*;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn model(atoms: &[(f64, Multiplicity)], acc: &[f64]) -> DiagonalModel {
        DiagonalModel::from_spec(&DiagonalTupleSpec::scalar(atoms, acc).unwrap())
    }

    #[test]
    fn single_coordinate_examples() {
        let inf = model(&[(0.0, Infinite)], &[]);
        assert!(inf.region(SpectrumKind::FredholmUpper).contains(&[c(0.0)], REGION_TOL));
        assert!(inf.region(SpectrumKind::ApproxPoint).contains(&[c(0.0)], REGION_TOL));

        let three = model(&[(2.0, Finite(3))], &[]);
        assert!(three.region(SpectrumKind::ApproxPoint).contains(&[c(2.0)], REGION_TOL));
        assert!(three.region(SpectrumKind::FredholmUpper).is_empty());
        assert!(three.region(SpectrumKind::BrowderUpper).is_empty());
        assert_eq!(three.local(&[c(2.0)], REGION_TOL).unwrap().count, Dim::Finite(3));

        let acc = model(&[], &[0.0]);
        let ap = acc.region(SpectrumKind::ApproxPoint);
        assert!(ap.contains(&[c(0.0)], REGION_TOL));
        assert!(acc.region(SpectrumKind::FredholmUpper).contains(&[c(0.0)], REGION_TOL));
        let l = acc.local(&[c(0.0)], REGION_TOL).unwrap();
        assert!(l.limit && l.count.is_zero());
        // The approach points themselves are eigenvalues.
        let k0 = DiagonalTupleSpec::scalar(&[], &[0.0]).unwrap().approach_start();
        let p = [c(0.5f64.powi(k0 as i32))];
        assert!(ap.contains(&p, REGION_TOL));
        assert_eq!(acc.local(&p, REGION_TOL).unwrap().count, Dim::Finite(1));
        assert!(!acc.region(SpectrumKind::FredholmUpper).contains(&p, REGION_TOL));
    }

    #[test]
    fn tensor_counts_and_limits() {
        let a = model(&[(0.0, Infinite), (1.0, Finite(2))], &[]);
        let b = model(&[(3.0, Finite(2))], &[1.0]);
        let t = a.tensor(&b);
        assert_eq!(t.local(&[c(1.0), c(3.0)], REGION_TOL).unwrap().count, Dim::Finite(4));
        assert_eq!(t.local(&[c(0.0), c(3.0)], REGION_TOL).unwrap().count, Dim::Infinite);
        let at_acc = t.local(&[c(1.0), c(1.0)], REGION_TOL).unwrap();
        assert!(at_acc.limit && at_acc.count.is_zero());
        assert!(!t.local(&[c(1.0), c(2.0)], REGION_TOL).unwrap().in_closure());
        // atom × approach point: attained once per atom multiplicity
        let k0 = DiagonalTupleSpec::scalar(&[(3.0, Finite(2))], &[1.0]).unwrap().approach_start();
        let q = 1.0 + 0.5f64.powi(k0 as i32);
        assert_eq!(t.local(&[c(1.0), c(q)], REGION_TOL).unwrap().count, Dim::Finite(2));
        assert_eq!(t.local(&[c(0.0), c(q)], REGION_TOL).unwrap().count, Dim::Infinite);
    }

    #[test]
    fn projection_merges_counts() {
        let d = DiagonalTupleSpec::new(
            2,
            vec![
                crate::model::Atom {
                    point: vec![c(0.0), c(1.0)],
                    mult: Finite(1),
                },
                crate::model::Atom {
                    point: vec![c(0.0), c(2.0)],
                    mult: Finite(2),
                },
            ],
            vec![vec![c(5.0), c(5.0)]],
        )
        .unwrap();
        let p = DiagonalModel::from_spec(&d).project(1).unwrap();
        assert_eq!(p.local(&[c(0.0)], REGION_TOL).unwrap().count, Dim::Finite(3));
        assert!(p.local(&[c(5.0)], REGION_TOL).unwrap().limit);
        let a = model(&[(1.0, Finite(2))], &[]);
        let t = a.tensor(&model(&[(7.0, Finite(3))], &[0.0]));
        // dropping a factor with an approach family repeats each symbol infinitely
        assert_eq!(t.project(1).unwrap().local(&[c(1.0)], REGION_TOL).unwrap().count, Dim::Infinite);
    }
}
