//! Checks on pairs of finite tuples.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use super::{flag_map, traces_of, CheckConfig, CheckName, Counterexample, InstanceReport, Mutation};
use crate::chains::{classify_point, PointClassification};
use crate::error::Result;
use crate::formulas::{combine_points, rule, Construction};
use crate::kinds::SpectrumKind;
use crate::koszul::{build_koszul, homology_dims, kunneth, tensor_total_complex};
use crate::linalg::{points_same, Mode, Qi, RankConfig, Scalar};
use crate::model::FiniteTuple;
use crate::spectra::{full_spectrum, FiniteSpectrum};
use crate::tensor::{mult_tuple, tensor_tuple};

use SpectrumKind::*;

fn kinds(check: CheckName) -> &'static [SpectrumKind] {
    match check {
        CheckName::TensorSpectra | CheckName::MultSpectra => &[Defect, ApproxPoint, SplitDefect, SplitApproxPoint],
        CheckName::TensorEssential | CheckName::MultEssential => &[
            FredholmLower,
            FredholmUpper,
            SplitDefectEssential,
            SplitApproxPointEssential,
        ],
        CheckName::TensorBrowder | CheckName::MultBrowder => {
            &[BrowderLower, BrowderUpper, SplitBrowderLower, SplitBrowderUpper]
        }
        _ => &[],
    }
}

/// Finite dimensions: semi-Fredholm and semi-Browder sets must come out
/// empty on both sides, not merely equal.
fn expects_empty(check: CheckName) -> bool {
    matches!(
        check,
        CheckName::TensorEssential | CheckName::TensorBrowder | CheckName::MultEssential | CheckName::MultBrowder
    )
}

fn construction(check: CheckName) -> Construction {
    match check {
        CheckName::MultSpectra | CheckName::MultEssential | CheckName::MultBrowder => Construction::Multiplication,
        _ => Construction::Tensor,
    }
}

pub(super) fn run_pair(
    check: CheckName,
    cfg: &CheckConfig,
    desc: String,
    s: &FiniteTuple<Qi>,
    t: &FiniteTuple<Qi>,
    rng: &mut ChaCha8Rng,
) -> InstanceReport {
    let n = s.len() + t.len();
    let out = match cfg.rank_config() {
        Err(e) => Err(e),
        Ok(rc) => match cfg.mode {
            Mode::Exact => evaluate(check, cfg, &rc, s.clone(), t.clone(), rng),
            Mode::Float => evaluate(check, cfg, &rc, s.to_float(), t.to_float(), rng),
        },
    };
    match out {
        Ok((checked, cx)) => InstanceReport::new(desc, checked, cx),
        Err(e) => InstanceReport::error(desc, n, &e),
    }
}

fn mutate<F: Scalar>(t: FiniteTuple<F>) -> Result<FiniteTuple<F>> {
    let mut ops = t.into_ops();
    let d = ops[0].cols();
    let v = ops[0].get(0, d - 1).clone() + F::one();
    ops[0].set(0, d - 1, v);
    FiniteTuple::new(ops)
}

fn evaluate<F: Scalar>(
    check: CheckName,
    cfg: &CheckConfig,
    rc: &RankConfig,
    s: FiniteTuple<F>,
    t: FiniteTuple<F>,
    rng: &mut ChaCha8Rng,
) -> Result<(usize, Vec<Counterexample>)> {
    let combined = match construction(check) {
        Construction::Tensor => tensor_tuple(&s, &t)?.tuple,
        Construction::Multiplication => mult_tuple(&s, &t)?.tuple,
    };
    let combined = match cfg.mutation {
        Some(Mutation::FlipEntry) => mutate(combined)?,
        _ => combined,
    };
    let ls = full_spectrum(&s, rc)?;
    let rs = full_spectrum(&t, rc)?;
    if let crate::model::CommuteVerdict::Fails { i, j, residual } = combined.validate_commuting() {
        let p = first_point(&ls, &rs);
        let cx = Counterexample::at(&p).note(format!("operators {i} and {j} of the combined tuple do not commute (residual {residual:e})"));
        return Ok((0, vec![cx]));
    }
    if check == CheckName::Kunneth {
        return kunneth_points(&s, &t, &combined, &ls, &rs, rc, rng);
    }
    let lhs = full_spectrum(&combined, rc)?;
    lhs.check_inclusions()?;
    let c = construction(check);
    let mut cx = Vec::new();
    let mut bad: Vec<Vec<F>> = Vec::new();
    let mut checked = 0;
    for &k in kinds(check) {
        let l = lhs.set(k);
        let r = combine_points(rule(c, k), |a| ls.set(a), |b| rs.set(b));
        checked += l.len().max(r.len());
        let diff = l.iter().chain(&r).filter(|p| {
            let (in_l, in_r) = (contains(&l, p), contains(&r, p));
            in_l != in_r || (expects_empty(check) && (in_l || in_r))
        });
        for p in diff {
            if !contains(&bad, p) {
                bad.push(p.clone());
            }
        }
    }
    for p in bad {
        let lc = lookup(&lhs, &combined, &p, rc)?;
        let rhs = kinds(check).iter().map(|&k| {
            let r = combine_points(rule(c, k), |a| ls.set(a), |b| rs.set(b));
            (k, contains(&r, &p))
        });
        let mut e = Counterexample::at(&p);
        e.lhs_flags = flag_map(kinds(check).iter().map(|&k| (k, lc.flags.get(k))));
        e.rhs_flags = flag_map(rhs);
        e.traces = Some(traces_of(&lc));
        cx.push(e);
    }
    Ok((checked, cx))
}

fn contains<F: Scalar>(set: &[Vec<F>], p: &[F]) -> bool {
    set.iter().any(|q| points_same(q, p))
}

fn first_point<F: Scalar>(a: &FiniteSpectrum<F>, b: &FiniteSpectrum<F>) -> Vec<F> {
    let mut p = a.candidates.points[0].clone();
    p.extend(b.candidates.points[0].iter().cloned());
    p
}

fn lookup<F: Scalar>(sp: &FiniteSpectrum<F>, t: &FiniteTuple<F>, p: &[F], rc: &RankConfig) -> Result<PointClassification<F>> {
    match sp.classifications.iter().find(|c| points_same(&c.point, p)) {
        Some(c) => Ok(c.clone()),
        None => classify_point(t, p, rc, None),
    }
}

/// Homology at a few points: joint eigenvalue pairs and one generic point.
fn kunneth_points<F: Scalar>(
    s: &FiniteTuple<F>,
    t: &FiniteTuple<F>,
    combined: &FiniteTuple<F>,
    ls: &FiniteSpectrum<F>,
    rs: &FiniteSpectrum<F>,
    rc: &RankConfig,
    rng: &mut ChaCha8Rng,
) -> Result<(usize, Vec<Counterexample>)> {
    let (a, b) = (&ls.candidates.points, &rs.candidates.points);
    let generic = |n: usize, rng: &mut ChaCha8Rng| -> Vec<F> {
        (0..n).map(|_| F::from_parts(rng.gen_range(-3..=3), rng.gen_range(-3..=3))).collect()
    };
    let pairs = vec![
        (a[0].clone(), b[0].clone()),
        (a[rng.gen_range(0..a.len())].clone(), b[rng.gen_range(0..b.len())].clone()),
        (a[rng.gen_range(0..a.len())].clone(), generic(t.len(), rng)),
        (generic(s.len(), rng), generic(t.len(), rng)),
    ];
    let mut cx = Vec::new();
    for (mu, nu) in &pairs {
        let mut lambda = mu.clone();
        lambda.extend(nu.iter().cloned());
        let ks = build_koszul(s, mu)?;
        let kt = build_koszul(t, nu)?;
        let want = kunneth(&homology_dims(&ks, rc)?, &homology_dims(&kt, rc)?);
        let direct = homology_dims(&build_koszul(combined, &lambda)?, rc)?;
        let total = homology_dims(&tensor_total_complex(&ks, &kt)?, rc)?;
        if direct != want || total != want {
            let mut e = Counterexample::at(&lambda);
            e.lhs_flags = json!({"homology": direct.dims, "total_complex": total.dims});
            e.rhs_flags = json!({"convolution": want.dims});
            cx.push(e);
        }
    }
    Ok((pairs.len(), cx))
}

