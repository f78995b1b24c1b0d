//! Checks on single tuples: projection, polynomial mapping, inclusion
//! chains and compactness.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use super::gen::{random_diagonal, random_polynomial_map, random_shift, random_tuple};
use super::{flag_map, traces_of, CheckConfig, CheckName, Counterexample, InstanceReport};
use crate::error::Result;
use crate::io::Instance;
use crate::kinds::SpectrumKind;
use crate::linalg::{point_to_c64, points_same, Mode, Qi, RankConfig, Scalar};
use crate::model::{FiniteTuple, StructuredPart, StructuredTuple};
use crate::region::{Region, REGION_TOL};
use crate::spectra::{dedup_points, full_spectrum, polynomial_image, Polynomial, PolynomialMap};
use crate::structured::{all_anchors, structured_spectrum, Engine};

use SpectrumKind::*;

pub(super) fn random(check: CheckName, cfg: &CheckConfig, i: usize, rng: &mut ChaCha8Rng) -> InstanceReport {
    match check {
        CheckName::Projection => {
            let n = rng.gen_range(1..=2);
            let t = random_tuple(rng, n + 1, cfg.max_dim);
            finite(check, cfg, format!("#{i} {} on C^{}", n + 1, t.dim()), &t, rng)
        }
        CheckName::Mapping => {
            let n = rng.gen_range(1..=2);
            let t = random_tuple(rng, n, cfg.max_dim.min(4));
            finite(check, cfg, format!("#{i} {n} on C^{}", t.dim()), &t, rng)
        }
        CheckName::InclusionChains | CheckName::Compactness => {
            if i % 2 == 0 {
                let n = rng.gen_range(1..=3);
                let t = random_tuple(rng, n, cfg.max_dim.max(6));
                finite(check, cfg, format!("#{i} {n} on C^{}", t.dim()), &t, rng)
            } else {
                let t = random_structured(rng);
                structured(check, format!("#{i} l2 tuple with {} parts", t.parts().len()), &t)
            }
        }
        _ => unreachable!("pair checks are dispatched elsewhere"),
    }
}

pub(super) fn explicit(check: CheckName, cfg: &CheckConfig, a: &Instance) -> Result<InstanceReport> {
    use rand::SeedableRng;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    Ok(match a {
        Instance::Finite(t) => finite(check, cfg, "input tuple".into(), t, &mut rng),
        Instance::Structured(t) => match check {
            CheckName::InclusionChains | CheckName::Compactness => structured(check, "input l2 tuple".into(), t),
            _ => {
                return Err(crate::Error::Input(format!("{check} needs a finite operator file")));
            }
        },
    })
}

fn random_structured(rng: &mut ChaCha8Rng) -> StructuredTuple {
    let parts: Vec<StructuredPart> = match rng.gen_range(0..4) {
        0 => vec![random_diagonal(rng).into()],
        1 => vec![random_shift(rng).into()],
        2 => vec![random_shift(rng).into(), random_diagonal(rng).into()],
        _ => vec![random_diagonal(rng).into(), random_diagonal(rng).into()],
    };
    StructuredTuple::new(parts).expect("at most one shift")
}

fn finite(check: CheckName, cfg: &CheckConfig, desc: String, t: &FiniteTuple<Qi>, rng: &mut ChaCha8Rng) -> InstanceReport {
    let poly = random_polynomial_map(rng, t.len(), 3);
    let out = cfg.rank_config().and_then(|rc| match cfg.mode {
        Mode::Exact => finite_eval(check, &rc, t.clone(), poly),
        Mode::Float => finite_eval(check, &rc, t.to_float(), float_map(&poly)),
    });
    let desc = if check == CheckName::Mapping { format!("{desc}, map of degree {}", 3) } else { desc };
    match out {
        Ok((checked, cx)) => InstanceReport::new(desc, checked, cx),
        Err(e) => InstanceReport::error(desc, t.len(), &e),
    }
}

fn float_map(p: &PolynomialMap<Qi>) -> PolynomialMap<num_complex::Complex64> {
    let comps = p
        .components()
        .iter()
        .map(|c| {
            let terms = c.terms().iter().map(|(a, e)| (a.to_c64(), e.clone())).collect();
            Polynomial::new(c.n(), terms).expect("same exponents")
        })
        .collect();
    PolynomialMap::new(comps).expect("same arity")
}

fn contains<F: Scalar>(set: &[Vec<F>], p: &[F]) -> bool {
    set.iter().any(|q| points_same(q, p))
}

/// Points in exactly one of the two sets.
fn sym_diff<F: Scalar>(a: &[Vec<F>], b: &[Vec<F>]) -> Vec<Vec<F>> {
    let mut out: Vec<Vec<F>> = a.iter().filter(|p| !contains(b, p)).cloned().collect();
    out.extend(b.iter().filter(|p| !contains(a, p)).cloned());
    out
}

fn finite_eval<F: Scalar>(
    check: CheckName,
    rc: &RankConfig,
    t: FiniteTuple<F>,
    poly: PolynomialMap<F>,
) -> Result<(usize, Vec<Counterexample>)> {
    t.require_commuting()?;
    let sp = full_spectrum(&t, rc)?;
    let mut cx = Vec::new();
    let checked;
    match check {
        CheckName::Projection => {
            let n = t.len() - 1;
            let lower = full_spectrum(&t.prefix(n)?, rc)?;
            checked = SpectrumKind::ALL.len();
            for k in SpectrumKind::ALL {
                let projected = dedup_points(sp.set(k).iter().map(|p| p[..n].to_vec()).collect());
                for p in sym_diff(&projected, &lower.set(k)) {
                    let mut e = Counterexample::at(&p);
                    e.lhs_flags = flag_map([(k, contains(&lower.set(k), &p))]);
                    e.rhs_flags = flag_map([(k, contains(&projected, &p))]);
                    cx.push(e);
                }
            }
        }
        CheckName::Mapping => {
            let image = full_spectrum(&polynomial_image(&t, &poly)?, rc)?;
            checked = 4;
            for k in [Defect, ApproxPoint, SplitDefect, SplitApproxPoint] {
                let mapped = dedup_points(sp.set(k).iter().map(|p| poly.eval(p)).collect::<Result<_>>()?);
                for p in sym_diff(&mapped, &image.set(k)) {
                    let mut e = Counterexample::at(&p);
                    e.lhs_flags = flag_map([(k, contains(&image.set(k), &p))]);
                    e.rhs_flags = flag_map([(k, contains(&mapped, &p))]);
                    cx.push(e);
                }
            }
        }
        CheckName::InclusionChains => {
            // Every classification already asserts monotone traces that
            // stabilize by k = dim X; here we add the set inclusions.
            sp.check_inclusions()?;
            checked = sp.classifications.len();
            for c in &sp.classifications {
                let stab = [c.lower.stabilized_at, c.upper.stabilized_at];
                if stab.iter().any(|s| s.is_none_or(|k| k > t.dim())) || !c.lower.is_monotone() || !c.upper.is_monotone() {
                    let mut e = Counterexample::at(&c.point);
                    e.lhs_flags = json!(c.flags);
                    e.traces = Some(traces_of(c));
                    cx.push(e.note("chain trace not monotone or not stable by dim X"));
                }
            }
        }
        CheckName::Compactness => {
            checked = SpectrumKind::ALL.len();
            for k in SpectrumKind::ALL {
                let pts: Vec<_> = sp.set(k).iter().map(|p| point_to_c64(p)).collect();
                let r = Region::points(t.len(), pts);
                if let Err(e) = r.check_compact() {
                    cx.push(Counterexample::at(&vec![num_complex::Complex64::new(0.0, 0.0); t.len()]).note(e.to_string()));
                }
            }
        }
        _ => unreachable!(),
    }
    Ok((checked, cx))
}

fn structured(check: CheckName, desc: String, t: &StructuredTuple) -> InstanceReport {
    let eval = || -> Result<(usize, Vec<Counterexample>)> {
        let mut cx = Vec::new();
        let mut checked = 0;
        match check {
            CheckName::Compactness => {
                for k in SpectrumKind::ALL {
                    let r = structured_spectrum(t, k);
                    checked += 1;
                    let mut results = vec![r.check_compact()];
                    for m in 1..t.n() {
                        results.push(r.project(m).and_then(|p| p.check_compact()));
                    }
                    for res in results {
                        if let Err(e) = res {
                            let origin = vec![num_complex::Complex64::new(0.0, 0.0); t.n()];
                            cx.push(Counterexample::at(&origin).note(format!("{k}: {e}")));
                        }
                    }
                }
            }
            CheckName::InclusionChains => {
                let engine = Engine::from_tuple(t)?;
                let chains = [
                    (FredholmLower, BrowderLower),
                    (BrowderLower, Defect),
                    (FredholmUpper, BrowderUpper),
                    (BrowderUpper, ApproxPoint),
                ];
                let regions: Vec<(SpectrumKind, Region)> =
                    SpectrumKind::ALL.iter().map(|&k| (k, structured_spectrum(t, k))).collect();
                let get = |k: SpectrumKind| &regions.iter().find(|(j, _)| *j == k).unwrap().1;
                for p in all_anchors(t) {
                    checked += 1;
                    // classify_local asserts the flag chains and decompositions
                    let c = engine.classify(&p)?;
                    let mut broken = Vec::new();
                    for (small, big) in chains {
                        if get(small).contains(&p, REGION_TOL) && !get(big).contains(&p, REGION_TOL) {
                            broken.push(format!("{small} ⊄ {big}"));
                        }
                    }
                    if !c.lower.is_monotone() || !c.upper.is_monotone() {
                        broken.push("non-monotone trace".into());
                    }
                    if !broken.is_empty() {
                        let mut e = Counterexample::at(&p);
                        e.lhs_flags = json!(c.flags);
                        e.traces = Some(traces_of(&c));
                        cx.push(e.note(broken.join("; ")));
                    }
                }
            }
            _ => unreachable!(),
        }
        Ok((checked, cx))
    };
    match eval() {
        Ok((checked, cx)) => InstanceReport::new(desc, checked, cx),
        Err(e) => InstanceReport::error(desc, t.n(), &e),
    }
}
