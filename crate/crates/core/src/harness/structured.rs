//! Grid checks for structured composites: closed-form local classification
//! against the product-rule regions, plus the truncation oracle at anchors.

use std::collections::HashMap;
use std::sync::RwLock;

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::gen::{random_diagonal, random_shift};
use super::{flag_map, traces_of, CheckConfig, Counterexample, InstanceReport, Mutation, MAX_COUNTEREXAMPLES};
use crate::chains::{classify_local, Flags};
use crate::error::{Error, Result};
use crate::formulas::{rule, Construction};
use crate::io::Axis;
use crate::kinds::SpectrumKind;
use crate::model::{CPoint, StructuredPart, StructuredTuple};
use crate::region::{Region, REGION_TOL};
use crate::structured::{all_anchors, oracle_chains, structured_spectrum_with, Engine, LocalState};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum StructuredFamily {
    DiagonalDiagonal,
    ShiftDiagonal,
    /// Alternates the two.
    Mixed,
}

pub(super) fn random(cfg: &CheckConfig, i: usize, rng: &mut ChaCha8Rng) -> InstanceReport {
    let shift = match cfg.family {
        StructuredFamily::DiagonalDiagonal => false,
        StructuredFamily::ShiftDiagonal => true,
        StructuredFamily::Mixed => i % 2 == 1,
    };
    let parts: Vec<StructuredPart> = if shift {
        let (s, d) = (random_shift(rng), random_diagonal(rng));
        if rng.gen_bool(0.75) {
            vec![s.into(), d.into()]
        } else {
            vec![d.into(), s.into()]
        }
    } else {
        vec![random_diagonal(rng).into(), random_diagonal(rng).into()]
    };
    let t = StructuredTuple::new(parts).expect("one shift at most");
    let desc = format!("#{i} {}", describe(&t));
    run(cfg, desc, &t)
}

pub(super) fn explicit(cfg: &CheckConfig, a: &StructuredTuple, b: &StructuredTuple) -> Result<InstanceReport> {
    let mut parts = a.parts().to_vec();
    parts.extend(b.parts().iter().cloned());
    let t = StructuredTuple::new(parts)?;
    if t.parts().len() != 2 {
        return Err(Error::Unsupported("structured checks take one part per side".into()));
    }
    Ok(run(cfg, format!("input {}", describe(&t)), &t))
}

fn describe(t: &StructuredTuple) -> String {
    let names: Vec<String> = t
        .parts()
        .iter()
        .map(|p| match p {
            StructuredPart::Diagonal(d) => format!("diagonal({} atoms, {} accumulations)", d.atoms().len(), d.accumulations().len()),
            StructuredPart::Shift(s) => format!("{:?} shift(r={})", s.direction(), s.tail()).to_lowercase(),
        })
        .collect();
    names.join(" ⊗ ")
}

/// A lazily enumerated set of points: the full product grid, then every
/// anchor with one coordinate replaced by a grid plane.
pub struct PointSet {
    planes: Vec<Vec<Complex64>>,
    anchors: Vec<CPoint>,
    grid_len: usize,
}

impl PointSet {
    pub fn len(&self) -> usize {
        self.grid_len + self.anchors.len() * (1 + self.planes.iter().map(Vec::len).sum::<usize>())
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get(&self, mut idx: usize) -> CPoint {
        if idx < self.grid_len {
            let mut p = Vec::with_capacity(self.planes.len());
            for plane in &self.planes {
                p.push(plane[idx % plane.len()]);
                idx /= plane.len();
            }
            return p;
        }
        idx -= self.grid_len;
        let per = 1 + self.planes.iter().map(Vec::len).sum::<usize>();
        let (a, mut r) = (idx / per, idx % per);
        let mut p = self.anchors[a].clone();
        if r == 0 {
            return p;
        }
        r -= 1;
        for (i, plane) in self.planes.iter().enumerate() {
            if r < plane.len() {
                p[i] = plane[r];
                return p;
            }
            r -= plane.len();
        }
        unreachable!("index in range")
    }
}

/// Grid planes over `1.5 ×` the spectral radius (or the configured axes),
/// plus the anchors of every spectrum.
pub fn grid_for(t: &StructuredTuple, cfg: &CheckConfig) -> Result<PointSet> {
    let n = t.n();
    let engine = Engine::from_tuple(t)?;
    let axes = match &cfg.grid {
        Some(g) if !g.is_empty() => g.clone(),
        _ => vec![Axis::symmetric((1.5 * engine.radius()).max(1.0), cfg.grid_steps)],
    };
    let planes: Vec<Vec<Complex64>> = (0..n)
        .map(|i| {
            let s = axes[i.min(axes.len() - 1)].samples();
            s.iter().flat_map(|&y| s.iter().map(move |&x| Complex64::new(x, y))).collect()
        })
        .collect();
    let grid_len = planes.iter().map(Vec::len).product();
    Ok(PointSet {
        planes,
        anchors: all_anchors(t),
        grid_len,
    })
}

fn run(cfg: &CheckConfig, desc: String, t: &StructuredTuple) -> InstanceReport {
    match evaluate(cfg, t) {
        Ok((checked, cx)) => InstanceReport::new(desc, checked, cx),
        Err(e) => InstanceReport::error(desc, t.n(), &e),
    }
}

fn rules(mutation: Option<Mutation>) -> impl Fn(SpectrumKind) -> &'static [(SpectrumKind, SpectrumKind)] {
    move |k| match (mutation, k) {
        (Some(Mutation::SwapRule), SpectrumKind::BrowderLower) => rule(Construction::Tensor, SpectrumKind::FredholmLower),
        (Some(Mutation::SwapRule), SpectrumKind::BrowderUpper) => rule(Construction::Tensor, SpectrumKind::FredholmUpper),
        _ => rule(Construction::Tensor, k),
    }
}

fn evaluate(cfg: &CheckConfig, t: &StructuredTuple) -> Result<(usize, Vec<Counterexample>)> {
    let engine = Engine::from_tuple(t)?;
    let rules = rules(cfg.mutation);
    let regions: Vec<Region> = SpectrumKind::ALL
        .iter()
        .map(|&k| structured_spectrum_with(t, k, &rules))
        .collect();
    for r in &regions {
        r.check_compact()?;
    }
    let points = grid_for(t, cfg)?;
    // Several kinds often share a region; test each distinct one once.
    let mut distinct: Vec<&Region> = Vec::new();
    let slot: Vec<usize> = regions
        .iter()
        .map(|r| match distinct.iter().position(|d| *d == r) {
            Some(i) => i,
            None => {
                distinct.push(r);
                distinct.len() - 1
            }
        })
        .collect();
    let cache: RwLock<HashMap<LocalState, Option<Flags>>> = RwLock::new(HashMap::new());
    let flags_at = |p: &CPoint| -> Option<Flags> {
        let Some(state) = engine.state(p).ok()? else {
            return engine.classify(p).ok().map(|c| c.flags);
        };
        if let Some(f) = cache.read().expect("cache lock").get(&state) {
            return *f;
        }
        let f = classify_local(p.clone(), Engine::chains_of(state, 6)).ok().map(|c| c.flags);
        cache.write().expect("cache lock").insert(state, f);
        f
    };
    let mut bad: Vec<usize> = (0..points.len())
        .into_par_iter()
        .filter(|&i| {
            let p = points.get(i);
            let Some(flags) = flags_at(&p) else {
                return true;
            };
            let inside: Vec<bool> = distinct.iter().map(|r| r.contains(&p, REGION_TOL)).collect();
            SpectrumKind::ALL.iter().zip(&slot).any(|(&k, &j)| flags.get(k) != inside[j])
        })
        .collect();
    bad.sort_unstable();
    let mut cx = Vec::new();
    for &i in bad.iter().take(MAX_COUNTEREXAMPLES) {
        let p = points.get(i);
        let mut e = Counterexample::at(&p);
        e.rhs_flags = flag_map(SpectrumKind::ALL.iter().zip(&regions).map(|(&k, r)| (k, r.contains(&p, REGION_TOL))));
        match engine.classify(&p) {
            Ok(c) => {
                e.lhs_flags = flag_map(c.flags.by_kind());
                e.traces = Some(traces_of(&c));
            }
            Err(err) => e = e.note(err.to_string()),
        }
        cx.push(e);
    }
    let mut checked = points.len();
    if let Engine::ShiftDiagonal { .. } | Engine::Shift(_) = engine {
        let anchors = all_anchors(t);
        checked += anchors.len();
        cx.extend(oracle_disagreements(&engine, t, &anchors)?);
    }
    Ok((checked, cx))
}

/// Anchors where the truncation oracle and the closed form disagree.
pub(crate) fn oracle_disagreements(engine: &Engine, t: &StructuredTuple, anchors: &[CPoint]) -> Result<Vec<Counterexample>> {
    let found: Vec<Option<Counterexample>> = anchors
        .par_iter()
        .map(|p| -> Result<Option<Counterexample>> {
            let model = engine.chains(p, 3)?;
            let oracle = oracle_chains(t, p, 3)?;
            let agree = model.lower.values == oracle.lower.values
                && model.upper.values == oracle.upper.values
                && model.range_closed == oracle.range_closed;
            if agree {
                return Ok(None);
            }
            let mut e = Counterexample::at(p);
            e.lhs_flags = serde_json::json!({"lower": oracle.lower, "upper": oracle.upper, "range_closed": oracle.range_closed});
            e.rhs_flags = serde_json::json!({"lower": model.lower, "upper": model.upper, "range_closed": model.range_closed});
            Ok(Some(e.note("truncation oracle (lhs) disagrees with the closed form (rhs)")))
        })
        .collect::<Result<_>>()?;
    Ok(found.into_iter().flatten().collect())
}
