//! Range-sum and joint-kernel chains `codim M_k(T−λ)`, `dim N_k(T−λ)`, and
//! the point classification built on them.
//!
//! [`classify_local`] holds the single flag semantics shared by every
//! engine: it only sees chain traces and two closedness/complementation
//! facts, never which model produced them.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::kinds::SpectrumKind;
use crate::linalg::{cokernel_dim, hstack, kernel_dim, point_to_c64, vstack, Matrix, RankConfig, Scalar};
use crate::model::FiniteTuple;

/// A dimension or codimension, possibly infinite.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Dim {
    Finite(usize),
    Infinite,
}

impl Dim {
    pub const ZERO: Dim = Dim::Finite(0);

    pub fn is_finite(self) -> bool {
        matches!(self, Dim::Finite(_))
    }

    pub fn is_zero(self) -> bool {
        self == Dim::ZERO
    }

    /// Product with `0·∞ = 0`.
    pub fn mul(self, other: Dim) -> Dim {
        match (self, other) {
            (Dim::Finite(0), _) | (_, Dim::Finite(0)) => Dim::ZERO,
            (Dim::Finite(a), Dim::Finite(b)) => Dim::Finite(a * b),
            _ => Dim::Infinite,
        }
    }

    pub fn add(self, other: Dim) -> Dim {
        match (self, other) {
            (Dim::Finite(a), Dim::Finite(b)) => Dim::Finite(a + b),
            _ => Dim::Infinite,
        }
    }
}

impl fmt::Display for Dim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Dim::Finite(d) => write!(f, "{d}"),
            Dim::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for Dim {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Dim::Finite(d) => s.serialize_u64(*d as u64),
            Dim::Infinite => s.serialize_str("inf"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ChainKind {
    /// `codim M_k`
    Lower,
    /// `dim N_k`
    Upper,
}

/// Behaviour of a trace beyond its recorded values.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Tail {
    /// Constant from the last recorded value on.
    Stable,
    /// Tends to infinity.
    Unbounded,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChainTrace {
    pub kind: ChainKind,
    /// Values for `k = 1, 2, …`.
    pub values: Vec<Dim>,
    /// First `k` starting three consecutive equal values.
    pub stabilized_at: Option<usize>,
    pub tail: Tail,
}

impl ChainTrace {
    pub fn new(kind: ChainKind, values: Vec<Dim>, tail: Tail) -> Self {
        let stabilized_at = first_plateau(&values);
        ChainTrace {
            kind,
            values,
            stabilized_at,
            tail,
        }
    }

    pub fn first(&self) -> Dim {
        self.values[0]
    }

    pub fn is_monotone(&self) -> bool {
        self.values.windows(2).all(|w| w[0] <= w[1])
    }

    fn all_finite_nonzero(&self) -> bool {
        self.values.iter().all(|v| v.is_finite() && !v.is_zero())
    }
}

fn first_plateau(values: &[Dim]) -> Option<usize> {
    values
        .windows(3)
        .position(|w| w[0] == w[1] && w[1] == w[2])
        .map(|i| i + 1)
}

/// Everything the flag logic needs at one point.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalChains {
    pub lower: ChainTrace,
    pub upper: ChainTrace,
    /// `R(T̃ − λ)` is closed.
    pub range_closed: bool,
    /// `N(T̂ − λ)` has a direct complement in `Xⁿ`.
    pub kernel_complemented: bool,
    /// `R(T̃ − λ)` has a direct complement in `Xⁿ`.
    pub range_complemented: bool,
}

/// Membership flags at one point.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize)]
pub struct Flags {
    pub defect: bool,
    pub approx_point: bool,
    pub fredholm_lower: bool,
    pub fredholm_upper: bool,
    pub browder_lower: bool,
    pub browder_upper: bool,
    /// Finite nonzero `codim M_k` tending to infinity.
    pub a: bool,
    /// Closed range, finite nonzero `dim N_k` tending to infinity.
    pub d: bool,
    pub c_lower: bool,
    pub c_upper: bool,
    pub a_split: bool,
    pub d_split: bool,
    pub split_defect: bool,
    pub split_approx_point: bool,
    pub split_defect_essential: bool,
    pub split_approx_point_essential: bool,
    pub split_browder_lower: bool,
    pub split_browder_upper: bool,
}

impl Flags {
    pub fn get(&self, kind: SpectrumKind) -> bool {
        use SpectrumKind::*;
        match kind {
            Defect => self.defect,
            ApproxPoint => self.approx_point,
            FredholmLower => self.fredholm_lower,
            FredholmUpper => self.fredholm_upper,
            BrowderLower => self.browder_lower,
            BrowderUpper => self.browder_upper,
            SplitDefect => self.split_defect,
            SplitApproxPoint => self.split_approx_point,
            SplitDefectEssential => self.split_defect_essential,
            SplitApproxPointEssential => self.split_approx_point_essential,
            SplitBrowderLower => self.split_browder_lower,
            SplitBrowderUpper => self.split_browder_upper,
        }
    }

    pub fn any(&self) -> bool {
        SpectrumKind::ALL.iter().any(|&k| self.get(k))
    }

    /// The twelve spectrum flags keyed by kind name.
    pub fn by_kind(&self) -> Vec<(SpectrumKind, bool)> {
        SpectrumKind::ALL.iter().map(|&k| (k, self.get(k))).collect()
    }

    /// Checks the inclusion chains and disjoint decompositions.
    pub fn check(&self) -> Result<()> {
        let imp = |a: bool, b: bool| !a || b;
        let rules = [
            (imp(self.fredholm_lower, self.browder_lower), "σ_Φ− ⊆ σ_B−"),
            (imp(self.browder_lower, self.defect), "σ_B− ⊆ σ_δ"),
            (imp(self.fredholm_upper, self.browder_upper), "σ_Φ+ ⊆ σ_B+"),
            (imp(self.browder_upper, self.approx_point), "σ_B+ ⊆ σ_π"),
            (self.browder_lower == (self.fredholm_lower || self.a), "σ_B− = σ_Φ− ∪ A"),
            (!(self.fredholm_lower && self.a), "σ_Φ− ∩ A = ∅"),
            (self.browder_upper == (self.fredholm_upper || self.d), "σ_B+ = σ_Φ+ ∪ D"),
            (!(self.fredholm_upper && self.d), "σ_Φ+ ∩ D = ∅"),
            (
                self.split_browder_lower == (self.split_defect_essential || self.a_split),
                "sp_B− = sp_δe ∪ Ã",
            ),
            (
                self.split_browder_upper == (self.split_approx_point_essential || self.d_split),
                "sp_B+ = sp_πe ∪ D̃",
            ),
            (imp(self.split_defect_essential, self.split_browder_lower), "sp_δe ⊆ sp_B−"),
            (imp(self.split_browder_lower, self.split_defect), "sp_B− ⊆ sp_δ"),
            (imp(self.split_approx_point_essential, self.split_browder_upper), "sp_πe ⊆ sp_B+"),
            (imp(self.split_browder_upper, self.split_approx_point), "sp_B+ ⊆ sp_π"),
        ];
        match rules.iter().find(|(ok, _)| !ok) {
            None => Ok(()),
            Some((_, rule)) => Err(Error::Invariant(format!("flag rule {rule} fails: {self:?}"))),
        }
    }
}

/// Full verdict at one point.
#[derive(Clone, Debug, PartialEq)]
pub struct PointClassification<F> {
    pub point: Vec<F>,
    pub flags: Flags,
    pub lower: ChainTrace,
    pub upper: ChainTrace,
}

impl<F: Scalar> Serialize for PointClassification<F> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let pt: Vec<[f64; 2]> = point_to_c64(&self.point).iter().map(|z| [z.re, z.im]).collect();
        let named: std::collections::BTreeMap<&str, bool> =
            self.flags.by_kind().into_iter().map(|(k, b)| (k.name(), b)).collect();
        let mut st = s.serialize_struct("PointClassification", 5)?;
        st.serialize_field("point", &pt)?;
        st.serialize_field("spectra", &named)?;
        st.serialize_field("flags", &self.flags)?;
        st.serialize_field("lower", &self.lower)?;
        st.serialize_field("upper", &self.upper)?;
        st.end()
    }
}

/// Derives every flag from the chain data.
pub fn classify_local<F>(point: Vec<F>, chains: LocalChains) -> Result<PointClassification<F>> {
    let LocalChains {
        lower,
        upper,
        range_closed,
        kernel_complemented,
        range_complemented,
    } = chains;
    if lower.values.is_empty() || upper.values.is_empty() {
        return Err(Error::Invariant("empty chain trace".into()));
    }
    for t in [&lower, &upper] {
        if !t.is_monotone() {
            return Err(Error::Invariant(format!("{:?} trace not monotone: {:?}", t.kind, t.values)));
        }
    }
    let mut f = Flags {
        defect: !lower.first().is_zero(),
        approx_point: !upper.first().is_zero() || !range_closed,
        fredholm_lower: !lower.first().is_finite(),
        fredholm_upper: !upper.first().is_finite() || !range_closed,
        a: lower.all_finite_nonzero() && lower.tail == Tail::Unbounded,
        d: range_closed && upper.all_finite_nonzero() && upper.tail == Tail::Unbounded,
        c_lower: !kernel_complemented,
        c_upper: !range_complemented,
        ..Flags::default()
    };
    f.browder_lower = f.fredholm_lower || f.a;
    f.browder_upper = f.fredholm_upper || f.d;
    f.split_defect = f.defect || f.c_lower;
    f.split_approx_point = f.approx_point || f.c_upper;
    f.split_defect_essential = f.fredholm_lower || f.c_lower;
    f.split_approx_point_essential = f.fredholm_upper || f.c_upper;
    f.a_split = f.a && !f.split_defect_essential;
    f.d_split = f.d && !f.split_approx_point_essential;
    f.split_browder_lower = f.browder_lower || f.c_lower;
    f.split_browder_upper = f.browder_upper || f.c_upper;
    f.check()?;
    Ok(PointClassification {
        point,
        flags: f,
        lower,
        upper,
    })
}

fn shifted_power<F: Scalar>(t: &FiniteTuple<F>, lambda: &[F], k: usize) -> Result<FiniteTuple<F>> {
    if k == 0 {
        return Err(Error::Input("chain index k starts at 1".into()));
    }
    t.translate(lambda)?.power(k as u32)
}

/// `codim M_k(T − λ)`: corank of `[(T₁−λ₁)ᵏ | … | (T_n−λ_n)ᵏ]`.
pub fn mk_codim<F: Scalar>(t: &FiniteTuple<F>, lambda: &[F], k: usize, cfg: &RankConfig) -> Result<usize> {
    cokernel_dim(&hstack(shifted_power(t, lambda, k)?.ops())?, cfg)
}

/// `dim N_k(T − λ)`: nullity of the vertical stack of the `k`-th powers.
pub fn nk_dim<F: Scalar>(t: &FiniteTuple<F>, lambda: &[F], k: usize, cfg: &RankConfig) -> Result<usize> {
    kernel_dim(&vstack(shifted_power(t, lambda, k)?.ops())?, cfg)
}

/// Chain traces of a finite tuple at `λ`, computed until both plateau
/// (three equal values) or `k_max` is reached.
pub fn finite_chains<F: Scalar>(
    t: &FiniteTuple<F>,
    lambda: &[F],
    cfg: &RankConfig,
    k_max: usize,
) -> Result<LocalChains> {
    t.require_commuting()?;
    let shifted = t.translate(lambda)?;
    let k_max = k_max.max(3);
    let mut power: Vec<Matrix<F>> = shifted.ops().to_vec();
    let (mut lower, mut upper) = (Vec::new(), Vec::new());
    for k in 1..=k_max {
        if k > 1 {
            power = power
                .iter()
                .zip(shifted.ops())
                .map(|(p, s)| p.mul(s))
                .collect::<Result<_>>()?;
        }
        lower.push(Dim::Finite(cokernel_dim(&hstack(&power)?, cfg)?));
        upper.push(Dim::Finite(kernel_dim(&vstack(&power)?, cfg)?));
        if first_plateau(&lower).is_some() && first_plateau(&upper).is_some() {
            break;
        }
    }
    let lower = ChainTrace::new(ChainKind::Lower, lower, Tail::Stable);
    let upper = ChainTrace::new(ChainKind::Upper, upper, Tail::Stable);
    for tr in [&lower, &upper] {
        if !tr.is_monotone() {
            return Err(Error::Invariant(format!("{:?} chain not monotone: {:?}", tr.kind, tr.values)));
        }
        match tr.stabilized_at {
            None => {
                return Err(Error::Invariant(format!(
                    "{:?} chain did not stabilize by k = {k_max}: {:?}",
                    tr.kind, tr.values
                )))
            }
            Some(k) if k > t.dim() => {
                return Err(Error::Invariant(format!(
                    "{:?} chain stabilized at k = {k} > dim X = {}",
                    tr.kind,
                    t.dim()
                )))
            }
            _ => {}
        }
    }
    // Finite-dimensional ranges are closed and every subspace is complemented.
    Ok(LocalChains {
        lower,
        upper,
        range_closed: true,
        kernel_complemented: true,
        range_complemented: true,
    })
}

/// Classifies `λ` for a finite tuple; `k_max` defaults to `dim X + 2`.
pub fn classify_point<F: Scalar>(
    t: &FiniteTuple<F>,
    lambda: &[F],
    cfg: &RankConfig,
    k_max: Option<usize>,
) -> Result<PointClassification<F>> {
    let chains = finite_chains(t, lambda, cfg, k_max.unwrap_or(t.dim() + 2))?;
    classify_local(lambda.to_vec(), chains)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{ExactMatrix as M, Qi};

    fn q(x: i64) -> Qi {
        Qi::from_parts(x, 0)
    }

    fn ex() -> RankConfig {
        RankConfig::exact()
    }

    fn fin(v: &[usize]) -> Vec<Dim> {
        v.iter().map(|&d| Dim::Finite(d)).collect()
    }

    fn jordan() -> FiniteTuple<Qi> {
        FiniteTuple::single(M::from_reals(&[&[0, 1], &[0, 0]])).unwrap()
    }

    #[test]
    fn chain_examples() {
        let d = FiniteTuple::single(M::diagonal(&[q(0), q(1)])).unwrap();
        assert_eq!(mk_codim(&d, &[q(0)], 1, &ex()).unwrap(), 1);
        assert_eq!(nk_dim(&d, &[q(0)], 1, &ex()).unwrap(), 1);
        assert_eq!(mk_codim(&jordan(), &[q(0)], 2, &ex()).unwrap(), 2);
        assert_eq!(nk_dim(&jordan(), &[q(0)], 2, &ex()).unwrap(), 2);
        let pair = FiniteTuple::new(vec![M::diagonal(&[q(0), q(1)]), M::diagonal(&[q(2), q(3)])]).unwrap();
        assert_eq!(nk_dim(&pair, &[q(0), q(3)], 1, &ex()).unwrap(), 0);
        for k in 1..4 {
            assert_eq!(mk_codim(&pair, &[q(7), q(7)], k, &ex()).unwrap(), 0);
        }
        assert!(mk_codim(&pair, &[q(0), q(3)], 0, &ex()).is_err());
    }

    #[test]
    fn classify_examples() {
        let d = FiniteTuple::single(M::diagonal(&[q(0), q(1)])).unwrap();
        let c = classify_point(&d, &[q(0)], &ex(), None).unwrap();
        assert!(c.flags.defect && c.flags.approx_point);
        assert!(!c.flags.browder_lower && !c.flags.browder_upper);
        assert_eq!(c.lower.values, fin(&[1, 1, 1]));
        assert_eq!(c.lower.stabilized_at, Some(1));

        let j = classify_point(&jordan(), &[q(0)], &ex(), None).unwrap();
        assert_eq!(j.lower.values, fin(&[1, 2, 2, 2]));
        assert_eq!(j.lower.stabilized_at, Some(2));

        let far = classify_point(&jordan(), &[q(100)], &ex(), None).unwrap();
        assert!(!far.flags.any());
    }

    #[test]
    fn generic_flag_logic_sees_infinite_data() {
        let tr = |kind, v: Vec<Dim>, tail| ChainTrace::new(kind, v, tail);
        // codim M_k = k: A-point, hence lower Browder but not lower Fredholm.
        let c = classify_local(
            vec![0.5],
            LocalChains {
                lower: tr(ChainKind::Lower, fin(&[1, 2, 3, 4]), Tail::Unbounded),
                upper: tr(ChainKind::Upper, fin(&[0, 0, 0]), Tail::Stable),
                range_closed: true,
                kernel_complemented: true,
                range_complemented: true,
            },
        )
        .unwrap();
        assert!(c.flags.a && c.flags.browder_lower && !c.flags.fredholm_lower);
        assert!(c.flags.a_split && c.flags.split_browder_lower);
        assert!(c.flags.defect && !c.flags.approx_point);

        let inf = vec![Dim::Infinite; 3];
        let c = classify_local(
            vec![1.0],
            LocalChains {
                lower: tr(ChainKind::Lower, inf.clone(), Tail::Stable),
                upper: tr(ChainKind::Upper, fin(&[0, 0, 0]), Tail::Stable),
                range_closed: false,
                kernel_complemented: true,
                range_complemented: true,
            },
        )
        .unwrap();
        assert!(c.flags.fredholm_lower && c.flags.fredholm_upper && !c.flags.a);

        // A non-complemented kernel would separate sp from σ.
        let c = classify_local(
            vec![2.0],
            LocalChains {
                lower: tr(ChainKind::Lower, fin(&[0, 0, 0]), Tail::Stable),
                upper: tr(ChainKind::Upper, fin(&[0, 0, 0]), Tail::Stable),
                range_closed: true,
                kernel_complemented: false,
                range_complemented: true,
            },
        )
        .unwrap();
        assert!(!c.flags.defect && c.flags.split_defect && c.flags.split_browder_lower);

        let bad = classify_local(
            vec![0.0],
            LocalChains {
                lower: tr(ChainKind::Lower, fin(&[2, 1, 1]), Tail::Stable),
                upper: tr(ChainKind::Upper, fin(&[0, 0, 0]), Tail::Stable),
                range_closed: true,
                kernel_complemented: true,
                range_complemented: true,
            },
        );
        assert!(matches!(bad, Err(Error::Invariant(_))));
    }

    #[test]
    fn duality_with_adjoint() {
        let a = M::from_int_rows(&[&[(1, 1), (2, 0)], &[(0, 0), (3, 0)]]);
        let t = FiniteTuple::single(a).unwrap();
        let adj = t.adjoint();
        for l in [Qi::from_parts(1, 1), Qi::from_parts(3, 0), Qi::from_parts(0, 0)] {
            let c = classify_point(&t, &[l.clone()], &ex(), None).unwrap();
            let d = classify_point(&adj, &[l.conj()], &ex(), None).unwrap();
            assert_eq!(c.flags.defect, d.flags.approx_point);
        }
    }

    #[test]
    fn dim_arithmetic() {
        assert_eq!(Dim::ZERO.mul(Dim::Infinite), Dim::ZERO);
        assert_eq!(Dim::Finite(2).mul(Dim::Infinite), Dim::Infinite);
        assert_eq!(Dim::Finite(2).add(Dim::Finite(3)), Dim::Finite(5));
        assert!(Dim::Finite(usize::MAX) < Dim::Infinite);
        assert_eq!(serde_json::to_string(&Dim::Infinite).unwrap(), "\"inf\"");
    }
}
