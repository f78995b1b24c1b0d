use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// The twelve spectra computed by every engine.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpectrumKind {
    Defect,
    ApproxPoint,
    FredholmLower,
    FredholmUpper,
    BrowderLower,
    BrowderUpper,
    SplitDefect,
    SplitApproxPoint,
    SplitDefectEssential,
    SplitApproxPointEssential,
    SplitBrowderLower,
    SplitBrowderUpper,
}

impl SpectrumKind {
    pub const ALL: [SpectrumKind; 12] = [
        SpectrumKind::Defect,
        SpectrumKind::ApproxPoint,
        SpectrumKind::FredholmLower,
        SpectrumKind::FredholmUpper,
        SpectrumKind::BrowderLower,
        SpectrumKind::BrowderUpper,
        SpectrumKind::SplitDefect,
        SpectrumKind::SplitApproxPoint,
        SpectrumKind::SplitDefectEssential,
        SpectrumKind::SplitApproxPointEssential,
        SpectrumKind::SplitBrowderLower,
        SpectrumKind::SplitBrowderUpper,
    ];

    /// The non-split kinds.
    pub const BASIC: [SpectrumKind; 6] = [
        SpectrumKind::Defect,
        SpectrumKind::ApproxPoint,
        SpectrumKind::FredholmLower,
        SpectrumKind::FredholmUpper,
        SpectrumKind::BrowderLower,
        SpectrumKind::BrowderUpper,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SpectrumKind::Defect => "defect",
            SpectrumKind::ApproxPoint => "approx-point",
            SpectrumKind::FredholmLower => "fredholm-lower",
            SpectrumKind::FredholmUpper => "fredholm-upper",
            SpectrumKind::BrowderLower => "browder-lower",
            SpectrumKind::BrowderUpper => "browder-upper",
            SpectrumKind::SplitDefect => "split-defect",
            SpectrumKind::SplitApproxPoint => "split-approx-point",
            SpectrumKind::SplitDefectEssential => "split-defect-essential",
            SpectrumKind::SplitApproxPointEssential => "split-approx-point-essential",
            SpectrumKind::SplitBrowderLower => "split-browder-lower",
            SpectrumKind::SplitBrowderUpper => "split-browder-upper",
        }
    }

    pub fn is_split(self) -> bool {
        !Self::BASIC.contains(&self)
    }

    /// The kind whose complement-free part this kind extends
    /// (`sp_δe ↦ σ_Φ−`, `sp_B+ ↦ σ_B+`, …). Basic kinds map to themselves.
    pub fn unsplit(self) -> SpectrumKind {
        use SpectrumKind::*;
        match self {
            SplitDefect => Defect,
            SplitApproxPoint => ApproxPoint,
            SplitDefectEssential => FredholmLower,
            SplitApproxPointEssential => FredholmUpper,
            SplitBrowderLower => BrowderLower,
            SplitBrowderUpper => BrowderUpper,
            k => k,
        }
    }
}

impl fmt::Display for SpectrumKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SpectrumKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        SpectrumKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = SpectrumKind::ALL.iter().map(|k| k.name()).collect();
                Error::Input(format!("unknown spectrum kind {s:?}; expected one of {}", names.join(", ")))
            })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for k in SpectrumKind::ALL {
            assert_eq!(k.name().parse::<SpectrumKind>().unwrap(), k);
            assert_eq!(serde_json::to_string(&k).unwrap(), format!("\"{}\"", k.name()));
        }
        assert!("browder".parse::<SpectrumKind>().is_err());
        assert_eq!(SpectrumKind::ALL.iter().filter(|k| k.is_split()).count(), 6);
    }
}
