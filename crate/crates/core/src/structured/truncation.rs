//! Finite-section oracles for shift and shift ⊗ diagonal tuples.
//!
//! Nothing here uses the closed forms. Chains are read off singular values
//! of truncated matrices at two section sizes: a count that is stable is the
//! answer, a count that grows means ∞, and a smallest non-negligible
//! singular value that keeps shrinking means the range is not closed.
//!
//! `ℓ²(ℕ) ⊗ ℓ²(J)` splits into one copy of `ℓ²(ℕ)` per diagonal symbol and
//! the truncated matrices are block diagonal accordingly, so the singular
//! values are collected block by block (same values, far less work).

use num_complex::Complex64;

use crate::chains::{ChainKind, ChainTrace, Dim, LocalChains, Tail};
use crate::error::{Error, Result};
use crate::linalg::{float_singular_values, FloatMatrix, Matrix};
use crate::model::{CPoint, DiagonalTupleSpec, Direction, Multiplicity, ShiftSpec};

const TINY: f64 = 1e-12;
/// `s_min(N₂) / s_min(N₁)` below this counts as decay.
const DECAY_RATIO: f64 = 0.75;
/// Copies of an infinite-multiplicity atom, and approach terms, per level.
const COPIES: [usize; 2] = [2, 4];
const APPROACH_TERMS: [u32; 2] = [4, 8];

/// `N × N` section of the shift: subdiagonal (forward) or superdiagonal
/// (backward) weights.
pub fn shift_section(s: &ShiftSpec, n: usize) -> FloatMatrix {
    let mut m = Matrix::zeros(n, n);
    for k in 0..n.saturating_sub(1) {
        match s.direction() {
            Direction::Forward => m.set(k + 1, k, s.weight(k)),
            Direction::Backward => m.set(k, k + 1, s.weight(k)),
        }
    }
    m
}

fn section_size(s: &ShiftSpec, z: Complex64, k: usize) -> usize {
    let rho = z.norm() / s.tail();
    let need = if rho > 1e-12 && rho < 1.0 - 1e-6 {
        (34.0 / -rho.ln()).ceil() as usize + 3 * k
    } else {
        0
    };
    need.clamp(64.max(8 * k), 400)
}

/// Diagonal symbols kept at a truncation level, with their copy counts.
fn symbols(d: &DiagonalTupleSpec, level: usize) -> Vec<(CPoint, usize)> {
    let mut out: Vec<(CPoint, usize)> = d
        .atoms()
        .iter()
        .map(|a| {
            let copies = match a.mult {
                Multiplicity::Finite(m) => m,
                Multiplicity::Infinite => COPIES[level],
            };
            (a.point.clone(), copies)
        })
        .collect();
    let start = d.approach_start();
    for lim in d.accumulations() {
        for j in start..start + APPROACH_TERMS[level] {
            let mut p = lim.clone();
            p[0] += 0.5f64.powi(j as i32);
            out.push((p, 1));
        }
    }
    out
}

#[derive(Clone, Copy, Debug, Default)]
struct Probe {
    tiny: usize,
    s_min: f64,
}

impl Probe {
    fn merge(self, other: Probe, copies: usize) -> Probe {
        Probe {
            tiny: self.tiny + copies * other.tiny,
            s_min: if copies == 0 { self.s_min } else { self.s_min.min(other.s_min) },
        }
    }
}

/// Singular values of `[P, c₁I, …, c_mI]` (or the stacked version) are
/// `√(σ(P)² + Σ|cᵢ|²)`, since `MM* = PP* + Σ|cᵢ|² I`; so one SVD of the
/// section serves every symbol block.
fn probe(sv: &[f64], c2: f64, side_len: usize) -> Probe {
    let vals: Vec<f64> = sv.iter().map(|s| (s * s + c2).sqrt()).collect();
    let scale = vals.first().copied().unwrap_or(0.0).max(1.0);
    let big: Vec<f64> = vals.into_iter().filter(|&s| s > TINY * scale).collect();
    Probe {
        tiny: side_len - big.len(),
        s_min: big.last().copied().unwrap_or(f64::INFINITY),
    }
}

struct Sides {
    lower: Probe,
    upper: Probe,
}

fn level_probe(s: &ShiftSpec, d: Option<&DiagonalTupleSpec>, z: Complex64, w: &[Complex64], k: usize, n: usize, level: usize) -> Result<Sides> {
    let p = shift_section(s, n).shift_diag(&z)?.pow(k as u32)?;
    // rows 0..n−k over all columns: exact compression for the lower side;
    // columns 0..n−k over all rows: exact restriction for the kernel side.
    let sv_lo = float_singular_values(&p.submatrix(0..n - k, 0..n));
    let sv_up = float_singular_values(&p.submatrix(0..n, 0..n - k));
    let syms = match d {
        Some(d) => symbols(d, level),
        None => vec![(vec![], 1)],
    };
    let mut acc = Sides {
        lower: Probe { tiny: 0, s_min: f64::INFINITY },
        upper: Probe { tiny: 0, s_min: f64::INFINITY },
    };
    for (sym, copies) in syms {
        let c2: f64 = sym.iter().zip(w).map(|(a, b)| (a - b).norm().powi(2 * k as i32)).sum();
        acc.lower = acc.lower.merge(probe(&sv_lo, c2, n - k), copies);
        acc.upper = acc.upper.merge(probe(&sv_up, c2, n - k), copies);
    }
    Ok(acc)
}

/// Oracle chains of `(S, D₁, …, D_m)` at `(z, w)`; `d = None` is the shift
/// alone.
pub fn truncated_chains(s: &ShiftSpec, d: Option<&DiagonalTupleSpec>, z: Complex64, w: &[Complex64], k_max: usize) -> Result<LocalChains> {
    let m = d.map_or(0, DiagonalTupleSpec::n);
    if w.len() != m {
        return Err(Error::Length { expected: m, found: w.len() });
    }
    let mut lower = Vec::new();
    let mut upper = Vec::new();
    let mut closed = true;
    for k in 1..=k_max.max(3) {
        let n1 = section_size(s, z, k);
        let a = level_probe(s, d, z, w, k, n1, 0)?;
        let b = level_probe(s, d, z, w, k, 2 * n1, 1)?;
        let decays = |x: Probe, y: Probe| y.s_min.is_finite() && y.s_min < DECAY_RATIO * x.s_min;
        let read = |x: Probe, y: Probe| if y.tiny > x.tiny { Dim::Infinite } else { Dim::Finite(y.tiny) };
        lower.push(if decays(a.lower, b.lower) { Dim::Infinite } else { read(a.lower, b.lower) });
        upper.push(read(a.upper, b.upper));
        if k == 1 {
            closed = !decays(a.upper, b.upper);
        }
    }
    let tail = |v: &[Dim]| {
        if v.windows(2).any(|p| p[0] < p[1]) {
            Tail::Unbounded
        } else {
            Tail::Stable
        }
    };
    let (lt, ut) = (tail(&lower), tail(&upper));
    Ok(LocalChains {
        lower: ChainTrace::new(ChainKind::Lower, lower, lt),
        upper: ChainTrace::new(ChainKind::Upper, upper, ut),
        range_closed: closed,
        kernel_complemented: true,
        range_complemented: true,
    })
}
