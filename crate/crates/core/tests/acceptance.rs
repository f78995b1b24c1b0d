//! End-to-end acceptance: one line per criterion, all must pass.

use std::io::Write;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use jspec_core::chains::classify_local;
use jspec_core::harness::{run_check, CheckConfig, CheckName, Mutation, Report, Source, StructuredFamily};
use jspec_core::io::{parse_instance, Instance};
use jspec_core::kinds::SpectrumKind;
use jspec_core::model::{ShiftSpec, StructuredPart, StructuredTuple};
use jspec_core::region::Region;
use jspec_core::structured::{oracle_chains, shift_spectrum, Engine};
use num_complex::Complex64;
use serde_json::json;

type Outcome = Result<String, String>;

fn cfg(trials: usize, seed: u64) -> CheckConfig {
    CheckConfig {
        trials,
        seed,
        stable: true,
        ..CheckConfig::default()
    }
}

fn run(check: CheckName, cfg: &CheckConfig) -> Result<Report, String> {
    run_check(check, cfg, &Source::Random).map_err(|e| format!("{check}: {e}"))
}

/// Zero failures, and every failing instance would have named a point.
fn all_pass(r: &Report, min_instances: usize) -> Result<(), String> {
    if r.instances.len() < min_instances {
        return Err(format!("{}: only {} instances", r.check, r.instances.len()));
    }
    if let Some(bad) = r.instances.iter().find(|i| !i.pass) {
        return Err(format!(
            "{}: {} failing, first {} at {:?} ({:?})",
            r.check,
            r.failures(),
            bad.desc,
            bad.counterexamples.first().map(|c| &c.point),
            bad.counterexamples.first().and_then(|c| c.note.as_deref())
        ));
    }
    Ok(())
}

fn kunneth() -> Outcome {
    let started = Instant::now();
    let r = run(CheckName::Kunneth, &cfg(200, 101))?;
    all_pass(&r, 200)?;
    let took = started.elapsed();
    if took > Duration::from_secs(300) {
        return Err(format!("took {took:?}"));
    }
    Ok(format!("{} pairs, {} homology comparisons, {:.1}s", r.instances.len(), r.checked(), took.as_secs_f64()))
}

fn tensor_spectra() -> Outcome {
    let r = run(CheckName::TensorSpectra, &cfg(200, 102))?;
    all_pass(&r, 200)?;
    Ok(format!("{} pairs, {} point comparisons", r.instances.len(), r.checked()))
}

fn mult_spectra() -> Outcome {
    let r = run(CheckName::MultSpectra, &cfg(200, 103))?;
    all_pass(&r, 200)?;
    Ok(format!("{} pairs, {} point comparisons", r.instances.len(), r.checked()))
}

fn shift_diag_pair() -> Source {
    let shift = json!({"space": {"kind": "l2"}, "operators": [{"kind": "shift", "direction": "forward", "prefix": [], "tail": 1}]});
    let diag = json!({"space": {"kind": "l2"}, "operators": [{"kind": "diagonal", "n": 1,
        "atoms": [{"point": [[2, 0]], "mult": 1}, {"point": [[0, 0]], "mult": "inf"}], "accumulations": []}]});
    Source::Pair(parse_instance(&shift).unwrap(), parse_instance(&diag).unwrap())
}

fn fd_fredholm_browder() -> Outcome {
    let mut total = 0;
    for (check, seed) in [
        (CheckName::TensorEssential, 104),
        (CheckName::TensorBrowder, 105),
        (CheckName::MultEssential, 106),
        (CheckName::MultBrowder, 107),
    ] {
        let r = run(check, &cfg(200, seed))?;
        all_pass(&r, 200)?;
        total += r.instances.len();
    }
    // The same grid code path sees the semi-Browder product rule swapped
    // for the semi-Fredholm one on an l2 case and must go red.
    let c = CheckConfig {
        grid_steps: 21,
        ..cfg(1, 0)
    };
    let clean = run_check(CheckName::StructuredBrowder, &c, &shift_diag_pair()).map_err(|e| e.to_string())?;
    all_pass(&clean, 1)?;
    let swapped = CheckConfig {
        mutation: Some(Mutation::SwapRule),
        ..c
    };
    let bad = run_check(CheckName::StructuredBrowder, &swapped, &shift_diag_pair()).map_err(|e| e.to_string())?;
    if bad.passed() || bad.instances[0].counterexamples.is_empty() {
        return Err("swapped product rule was not detected".into());
    }
    // A finite pair that stops commuting must go red too.
    let flipped = CheckConfig {
        mutation: Some(Mutation::FlipEntry),
        ..cfg(20, 108)
    };
    let r = run(CheckName::TensorBrowder, &flipped)?;
    if r.passed() {
        return Err("flipped entry was not detected".into());
    }
    Ok(format!(
        "{total} pairs empty = empty; swapped rule caught at {} points, flipped entry in {}/20 pairs",
        bad.instances[0].counterexamples.len(),
        r.failures()
    ))
}

fn browder_gap() -> Outcome {
    let s = ShiftSpec::forward(1.0).map_err(|e| e.to_string())?;
    let browder = shift_spectrum(&s, SpectrumKind::BrowderLower);
    let fredholm = shift_spectrum(&s, SpectrumKind::FredholmLower);
    let origin = Complex64::new(0.0, 0.0);
    if browder != Region::disk(origin, 1.0) || fredholm != Region::circle(origin, 1.0) {
        return Err(format!("regions {browder:?}, {fredholm:?}"));
    }
    let t = StructuredTuple::new(vec![StructuredPart::Shift(s)]).map_err(|e| e.to_string())?;
    let engine = Engine::from_tuple(&t).map_err(|e| e.to_string())?;
    let tol = 1e-9;
    let polar = |m: f64, a: f64| Complex64::from_polar(m, a);
    // The first four are also checked against the truncation oracle.
    let samples = [
        (polar(0.0, 0.0), true),
        (polar(0.5, 0.7), true),
        (polar(1.0, 0.7), true),
        (polar(1.5, 0.7), true),
        (polar(1.0, 0.0), false),
        (polar(1.0 + 0.5e-9, 2.0), false),
        (polar(1.0 - 0.5e-9, -1.0), false),
        (polar(1.0 + 1e-6, 3.0), false),
        (polar(1.0 - 1e-6, 0.3), false),
        (polar(0.999, 1.5), false),
        (Complex64::new(0.3, -0.4), false),
        (Complex64::new(0.0, 2.0), false),
    ];
    for &(z, with_oracle) in &samples {
        let m = z.norm();
        let want_b = m <= 1.0 + tol;
        let want_f = (m - 1.0).abs() <= tol;
        let c = engine.classify(&[z]).map_err(|e| e.to_string())?;
        let got = (c.flags.get(SpectrumKind::BrowderLower), c.flags.get(SpectrumKind::FredholmLower));
        let region = (browder.contains(&[z], tol), fredholm.contains(&[z], tol));
        if got != (want_b, want_f) || region != got {
            return Err(format!("at {z}: engine {got:?}, regions {region:?}, expected {:?}", (want_b, want_f)));
        }
        if with_oracle {
            let o = classify_local(vec![z], oracle_chains(&t, &[z], 3).map_err(|e| e.to_string())?)
                .map_err(|e| e.to_string())?;
            let o = (o.flags.get(SpectrumKind::BrowderLower), o.flags.get(SpectrumKind::FredholmLower));
            if o != got {
                return Err(format!("truncation oracle at {z}: {o:?} vs {got:?}"));
            }
        }
    }
    Ok("σ_B− = closed unit disk ⊋ σ_Φ− = unit circle; 12 points, 4 oracle-confirmed".into())
}

fn structured_grid() -> Outcome {
    let dd = CheckConfig {
        family: StructuredFamily::DiagonalDiagonal,
        ..cfg(20, 109)
    };
    let sd = CheckConfig {
        family: StructuredFamily::ShiftDiagonal,
        ..cfg(5, 110)
    };
    let mut points = 0;
    for (c, min) in [(dd, 20), (sd, 5)] {
        let r = run(CheckName::StructuredBrowder, &c)?;
        all_pass(&r, min)?;
        // Two complex coordinates, 41 × 41 per coordinate.
        if let Some(i) = r.instances.iter().find(|i| i.checked < 41usize.pow(4)) {
            return Err(format!("{} checked only {} points", i.desc, i.checked));
        }
        points += r.checked();
    }
    Ok(format!("20 diagonal⊗diagonal + 5 shift⊗diagonal pairs, {points} points, all twelve kinds"))
}

fn properties() -> Outcome {
    let mut out = Vec::new();
    for (check, trials, seed) in [
        (CheckName::Compactness, 100, 111),
        (CheckName::Projection, 100, 112),
        (CheckName::Mapping, 100, 113),
    ] {
        let r = run(check, &cfg(trials, seed))?;
        all_pass(&r, trials)?;
        out.push(format!("{check} {}", r.instances.len()));
    }
    Ok(out.join(", "))
}

fn chain_invariants() -> Outcome {
    let r = run(CheckName::InclusionChains, &cfg(100, 114))?;
    all_pass(&r, 100)?;
    Ok(format!("{} tuples, {} points; every finite classification also asserts this", r.instances.len(), r.checked()))
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("1 kunneth", kunneth),
        ("2 tensor spectra", tensor_spectra),
        ("3 multiplication spectra", mult_spectra),
        ("4 finite-dimensional fredholm/browder", fd_fredholm_browder),
        ("5 shift browder gap", browder_gap),
        ("6 structured grid equality", structured_grid),
        ("7 compactness, projection, mapping", properties),
        ("8 chain invariants", chain_invariants),
    ];
    let mut failed = Vec::new();
    for (name, f) in criteria {
        let started = Instant::now();
        let res = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = started.elapsed().as_secs_f64();
        let line = match res {
            Ok(msg) => format!("PASS criterion {name} ({secs:.1}s): {msg}"),
            Err(msg) => {
                failed.push(name);
                format!("FAIL criterion {name} ({secs:.1}s): {msg}")
            }
        };
        // Straight to the process stdout, so the lines show without --nocapture.
        let _ = writeln!(std::io::stdout().lock(), "{line}");
    }
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}

#[test]
fn explicit_instances_parse() {
    // Sanity for the fixtures used above.
    let Source::Pair(Instance::Structured(a), Instance::Structured(b)) = shift_diag_pair() else {
        panic!("expected two l2 instances");
    };
    assert_eq!(a.n() + b.n(), 2);
}
