//! Closed bounded subsets of `ℂⁿ` built from a few primitives.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{dist, CPoint};

/// Default membership tolerance for circle/disk boundaries and points.
pub const REGION_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum Region {
    Empty { dim: usize },
    FinitePoints { dim: usize, points: Vec<CPoint> },
    /// One coordinate.
    Circle { center: Complex64, radius: f64 },
    /// One coordinate.
    ClosedDisk { center: Complex64, radius: f64 },
    /// `{a} ∪ {a + 2⁻ᵏ·e₁ : k ≥ start}`: a convergent sequence with its limit.
    ApproachSequence { limit: CPoint, start: u32 },
    /// Cartesian product; coordinates are concatenated in factor order.
    Product { factors: Vec<Region> },
    Union { dim: usize, parts: Vec<Region> },
}

impl Region {
    pub fn empty(dim: usize) -> Region {
        Region::Empty { dim }
    }

    pub fn points(dim: usize, pts: Vec<CPoint>) -> Region {
        let mut out: Vec<CPoint> = Vec::with_capacity(pts.len());
        for p in pts {
            debug_assert_eq!(p.len(), dim);
            if !out.iter().any(|q| dist(q, &p) <= REGION_TOL) {
                out.push(p);
            }
        }
        if out.is_empty() {
            return Region::Empty { dim };
        }
        out.sort_by(|a, b| {
            a.iter()
                .zip(b)
                .map(|(x, y)| x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im)))
                .find(|o| o.is_ne())
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        Region::FinitePoints { dim, points: out }
    }

    pub fn point(p: CPoint) -> Region {
        Region::points(p.len(), vec![p])
    }

    pub fn circle(center: Complex64, radius: f64) -> Region {
        Region::Circle { center, radius }
    }

    pub fn disk(center: Complex64, radius: f64) -> Region {
        Region::ClosedDisk { center, radius }
    }

    /// Flattens nested unions and drops empty parts.
    pub fn union(dim: usize, parts: Vec<Region>) -> Region {
        let mut flat = Vec::new();
        for p in parts {
            debug_assert_eq!(p.dim(), dim);
            match p {
                Region::Union { parts, .. } => flat.extend(parts),
                p if p.is_empty() => {}
                p => flat.push(p),
            }
        }
        match flat.len() {
            0 => Region::Empty { dim },
            1 => flat.pop().unwrap(),
            _ => Region::Union { dim, parts: flat },
        }
    }

    /// Empty if any factor is empty; nested products are flattened.
    pub fn product(factors: Vec<Region>) -> Region {
        let dim = factors.iter().map(Region::dim).sum();
        if factors.iter().any(Region::is_empty) {
            return Region::Empty { dim };
        }
        let mut flat = Vec::new();
        for f in factors {
            match f {
                Region::Product { factors } => flat.extend(factors),
                f => flat.push(f),
            }
        }
        if flat.len() == 1 {
            return flat.pop().unwrap();
        }
        Region::Product { factors: flat }
    }

    pub fn dim(&self) -> usize {
        match self {
            Region::Empty { dim } | Region::FinitePoints { dim, .. } | Region::Union { dim, .. } => *dim,
            Region::Circle { .. } | Region::ClosedDisk { .. } => 1,
            Region::ApproachSequence { limit, .. } => limit.len(),
            Region::Product { factors } => factors.iter().map(Region::dim).sum(),
        }
    }

    pub fn is_empty(&self) -> bool {
        match self {
            Region::Empty { .. } => true,
            Region::FinitePoints { points, .. } => points.is_empty(),
            Region::Circle { .. } | Region::ClosedDisk { .. } | Region::ApproachSequence { .. } => false,
            Region::Product { factors } => factors.iter().any(Region::is_empty),
            Region::Union { parts, .. } => parts.iter().all(Region::is_empty),
        }
    }

    pub fn contains(&self, z: &[Complex64], tol: f64) -> bool {
        if z.len() != self.dim() {
            return false;
        }
        match self {
            Region::Empty { .. } => false,
            Region::FinitePoints { points, .. } => points.iter().any(|p| dist(p, z) <= tol),
            Region::Circle { center, radius } => ((z[0] - center).norm() - radius).abs() <= tol,
            Region::ClosedDisk { center, radius } => (z[0] - center).norm() <= radius + tol,
            Region::ApproachSequence { limit, start } => approach_contains(limit, *start, z, tol),
            Region::Product { factors } => {
                let mut off = 0;
                factors.iter().all(|f| {
                    let d = f.dim();
                    let hit = f.contains(&z[off..off + d], tol);
                    off += d;
                    hit
                })
            }
            Region::Union { parts, .. } => parts.iter().any(|p| p.contains(z, tol)),
        }
    }

    /// Image under the projection onto the first `n` coordinates.
    pub fn project(&self, n: usize) -> Result<Region> {
        let dim = self.dim();
        if n == 0 || n > dim {
            return Err(Error::Input(format!("cannot project a {dim}-dimensional region onto {n} coordinates")));
        }
        if n == dim {
            return Ok(self.clone());
        }
        Ok(match self {
            Region::Empty { .. } => Region::Empty { dim: n },
            Region::FinitePoints { points, .. } => {
                Region::points(n, points.iter().map(|p| p[..n].to_vec()).collect())
            }
            Region::Circle { .. } | Region::ClosedDisk { .. } => unreachable!("one-dimensional"),
            Region::ApproachSequence { limit, start } => Region::ApproachSequence {
                limit: limit[..n].to_vec(),
                start: *start,
            },
            Region::Product { factors } => {
                if self.is_empty() {
                    return Ok(Region::Empty { dim: n });
                }
                let mut kept = Vec::new();
                let mut off = 0;
                for f in factors {
                    if off >= n {
                        break;
                    }
                    let d = f.dim();
                    kept.push(if off + d <= n { f.clone() } else { f.project(n - off)? });
                    off += d;
                }
                Region::product(kept)
            }
            Region::Union { parts, .. } => {
                Region::union(n, parts.iter().map(|p| p.project(n)).collect::<Result<_>>()?)
            }
        })
    }

    /// Structural compactness: every primitive is a closed bounded set with
    /// finite parameters.
    pub fn check_compact(&self) -> Result<()> {
        let finite = |z: &Complex64| z.re.is_finite() && z.im.is_finite();
        let ok = match self {
            Region::Empty { .. } => true,
            Region::FinitePoints { dim, points } => points.iter().all(|p| p.len() == *dim && p.iter().all(finite)),
            Region::Circle { center, radius } | Region::ClosedDisk { center, radius } => {
                finite(center) && radius.is_finite() && *radius >= 0.0
            }
            Region::ApproachSequence { limit, .. } => !limit.is_empty() && limit.iter().all(finite),
            Region::Product { factors } => {
                for f in factors {
                    f.check_compact()?;
                }
                true
            }
            Region::Union { dim, parts } => {
                for p in parts {
                    if p.dim() != *dim {
                        return Err(Error::Invariant("union parts of different dimension".into()));
                    }
                    p.check_compact()?;
                }
                true
            }
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Invariant(format!("region is not a compact descriptor: {self:?}")))
        }
    }

    /// Largest modulus of any coordinate of any point.
    pub fn bounding_radius(&self) -> f64 {
        match self {
            Region::Empty { .. } => 0.0,
            Region::FinitePoints { points, .. } => points
                .iter()
                .flat_map(|p| p.iter().map(|z| z.norm()))
                .fold(0.0, f64::max),
            Region::Circle { center, radius } | Region::ClosedDisk { center, radius } => center.norm() + radius,
            Region::ApproachSequence { limit, start } => {
                limit.iter().map(|z| z.norm()).fold(0.0, f64::max) + 0.5f64.powi(*start as i32)
            }
            Region::Product { factors } => factors.iter().map(Region::bounding_radius).fold(0.0, f64::max),
            Region::Union { parts, .. } => parts.iter().map(Region::bounding_radius).fold(0.0, f64::max),
        }
    }

    /// Representative points of the region (and of its boundary), used to
    /// seed grid checks where uniform grids would miss thin sets.
    pub fn anchors(&self) -> Vec<CPoint> {
        const CAP: usize = 4096;
        let c = |re: f64, im: f64| Complex64::new(re, im);
        let ring = |center: Complex64, r: f64, n: usize| -> Vec<CPoint> {
            (0..n)
                .map(|j| {
                    let th = std::f64::consts::TAU * (j as f64 + 0.125) / n as f64;
                    vec![center + c(r * th.cos(), r * th.sin())]
                })
                .collect()
        };
        match self {
            Region::Empty { .. } => vec![],
            Region::FinitePoints { points, .. } => points.clone(),
            Region::Circle { center, radius } => ring(*center, *radius, 8),
            Region::ClosedDisk { center, radius } => {
                let mut v = vec![vec![*center]];
                v.extend(ring(*center, radius / 2.0, 4));
                v.extend(ring(*center, *radius, 4));
                v
            }
            Region::ApproachSequence { limit, start } => {
                let mut v = vec![limit.clone()];
                for k in *start..*start + 3 {
                    let mut p = limit.clone();
                    p[0] += 0.5f64.powi(k as i32);
                    v.push(p);
                }
                v
            }
            Region::Product { factors } => {
                let mut acc: Vec<CPoint> = vec![vec![]];
                for f in factors {
                    let fa = f.anchors();
                    let mut next = Vec::with_capacity(acc.len() * fa.len());
                    'outer: for a in &acc {
                        for b in &fa {
                            if next.len() >= CAP {
                                break 'outer;
                            }
                            let mut p = a.clone();
                            p.extend_from_slice(b);
                            next.push(p);
                        }
                    }
                    acc = next;
                }
                acc
            }
            Region::Union { parts, .. } => parts.iter().flat_map(Region::anchors).take(CAP).collect(),
        }
    }
}

pub(crate) fn approach_contains(limit: &[Complex64], start: u32, z: &[Complex64], tol: f64) -> bool {
    if dist(limit, z) <= tol {
        return true;
    }
    if dist(&limit[1..], &z[1..]) > tol {
        return false;
    }
    let d = z[0] - limit[0];
    if d.re <= 0.0 {
        return false;
    }
    let k = (-d.re.log2()).round() as i64;
    (k - 1..=k + 1)
        .filter(|&k| k >= start as i64 && k < 1100)
        .any(|k| (d - 0.5f64.powi(k as i32)).norm() <= tol)
}
