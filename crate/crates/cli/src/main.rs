use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use jspec_core::chains::classify_point;
use jspec_core::harness::{run_check, CheckConfig, CheckName, Mutation, Report, Source, StructuredFamily};
use jspec_core::io::{grid_points, parse_grid, parse_instance, parse_pair, parse_point, Axis, Instance};
use jspec_core::kinds::SpectrumKind;
use jspec_core::koszul::{build_koszul, homology_dims};
use jspec_core::linalg::{point_to_c64, Mode, Qi, RankConfig, Scalar};
use jspec_core::model::FiniteTuple;
use jspec_core::region::{Region, REGION_TOL};
use jspec_core::spectra::full_spectrum;
use jspec_core::structured::{structured_spectrum, Engine};
use num_complex::Complex64;
use serde_json::{json, Value};

mod output;

use output::{emit, Format};

#[derive(Parser)]
#[command(name = "jspec", version, about = "Joint spectra of commuting operator tuples")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run seeded random checks, or one check on an input file.
    Verify(VerifyArgs),
    /// Membership of grid points in the spectra of an operator file.
    Region(RegionArgs),
    /// Classify one point: flags for every spectrum plus chain traces.
    Classify(ClassifyArgs),
    /// Koszul complex dimensions and homology at one point.
    Koszul(KoszulArgs),
}

#[derive(Args)]
struct Common {
    /// Output file (stdout if absent).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Exact rational arithmetic (the default).
    #[arg(long, conflicts_with = "float")]
    exact: bool,
    /// Floating point with SVD ranks.
    #[arg(long)]
    float: bool,
    /// Relative rank tolerance (float mode only).
    #[arg(long)]
    tolerance: Option<f64>,
}

impl Common {
    fn mode(&self) -> Mode {
        if self.float {
            Mode::Float
        } else {
            Mode::Exact
        }
    }

    fn rank_config(&self) -> anyhow::Result<RankConfig> {
        match (self.mode(), self.tolerance) {
            (Mode::Exact, Some(_)) => bail!("--tolerance needs --float"),
            (Mode::Exact, None) => Ok(RankConfig::exact()),
            (Mode::Float, None) => Ok(RankConfig::float()),
            (Mode::Float, Some(t)) => Ok(RankConfig::float_with(t)?),
        }
    }
}

#[derive(Args)]
struct VerifyArgs {
    /// Checks to run, comma separated; all of them by default.
    #[arg(long, value_delimiter = ',')]
    check: Vec<String>,
    /// Operator file, or a `{"left", "right"}` pair file.
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long, default_value_t = 20)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// `re_min:re_max:steps[,...]`, one axis per complex coordinate.
    #[arg(long, allow_hyphen_values = true)]
    grid: Option<String>,
    /// Largest factor dimension of random finite tuples.
    #[arg(long, default_value_t = 5)]
    max_dim: usize,
    #[arg(long, value_enum, default_value_t = Family::Mixed)]
    family: Family,
    /// Inject a fault to see a check fail.
    #[arg(long, value_enum)]
    mutate: Option<Mutate>,
    /// Report zero timing so repeated runs are byte-identical.
    #[arg(long)]
    stable: bool,
    #[command(flatten)]
    common: Common,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    DiagonalDiagonal,
    ShiftDiagonal,
    Mixed,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mutate {
    FlipEntry,
    SwapRule,
}

#[derive(Args)]
struct RegionArgs {
    #[arg(long)]
    input: PathBuf,
    /// Spectra to report, comma separated; all of them by default.
    #[arg(long, value_delimiter = ',')]
    kind: Vec<String>,
    /// `re_min:re_max:steps[,...]`; defaults to 1.5 × the spectral radius.
    #[arg(long, allow_hyphen_values = true)]
    grid: Option<String>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct ClassifyArgs {
    #[arg(long)]
    input: PathBuf,
    /// `re,im;re,im;...`, one pair per coordinate.
    #[arg(long, allow_hyphen_values = true)]
    point: String,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct KoszulArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, allow_hyphen_values = true)]
    point: String,
    #[command(flatten)]
    common: Common,
}

/// Invalid input and failing checks leave by different doors.
enum Outcome {
    Pass,
    Fail,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    if let Err(e) = init_threads() {
        eprintln!("error: {e:#}");
        return ExitCode::from(2);
    }
    let res = match cli.cmd {
        Cmd::Verify(a) => verify(a),
        Cmd::Region(a) => region(a),
        Cmd::Classify(a) => classify(a),
        Cmd::Koszul(a) => koszul(a),
    };
    match res {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Fail) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn init_threads() -> anyhow::Result<()> {
    let Ok(v) = std::env::var("JSPEC_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .with_context(|| format!("JSPEC_THREADS must be a positive integer, got {v:?}"))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    Ok(())
}

fn read_json(path: &Path) -> anyhow::Result<Value> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn read_instance(path: &Path) -> anyhow::Result<Instance> {
    Ok(parse_instance(&read_json(path)?).with_context(|| format!("in {}", path.display()))?)
}

fn verify(a: VerifyArgs) -> anyhow::Result<Outcome> {
    let checks: Vec<CheckName> = if a.check.is_empty() || a.check.iter().any(|c| c == "all") {
        CheckName::ALL.to_vec()
    } else {
        a.check.iter().map(|c| c.parse()).collect::<Result<_, _>>()?
    };
    if a.trials == 0 {
        bail!("--trials must be positive");
    }
    let cfg = CheckConfig {
        trials: a.trials,
        seed: a.seed,
        mode: a.common.mode(),
        tolerance: a.common.tolerance,
        grid: a.grid.as_deref().map(parse_grid).transpose()?,
        max_dim: a.max_dim,
        family: match a.family {
            Family::DiagonalDiagonal => StructuredFamily::DiagonalDiagonal,
            Family::ShiftDiagonal => StructuredFamily::ShiftDiagonal,
            Family::Mixed => StructuredFamily::Mixed,
        },
        mutation: a.mutate.map(|m| match m {
            Mutate::FlipEntry => Mutation::FlipEntry,
            Mutate::SwapRule => Mutation::SwapRule,
        }),
        stable: a.stable,
        ..CheckConfig::default()
    };
    cfg.rank_config()?;
    let source = match &a.input {
        None => Source::Random,
        Some(p) => {
            let v = read_json(p)?;
            if v.get("left").is_some() || v.get("right").is_some() {
                let (l, r) = parse_pair(&v)?;
                Source::Pair(l, r)
            } else {
                Source::Single(parse_instance(&v)?)
            }
        }
    };
    let mut reports: Vec<Report> = Vec::new();
    for c in checks {
        let r = run_check(c, &cfg, &source)?;
        eprintln!(
            "{}: {} ({}/{} instances pass, {} ms)",
            c,
            if r.passed() { "pass" } else { "FAIL" },
            r.instances.len() - r.failures(),
            r.instances.len(),
            r.timing_ms
        );
        reports.push(r);
    }
    let ok = reports.iter().all(Report::passed);
    let doc = if reports.len() == 1 {
        serde_json::to_value(&reports[0])?
    } else {
        serde_json::to_value(&reports)?
    };
    let rows = output::report_rows(&reports);
    emit(a.common.out.as_deref(), a.common.format, &doc, &rows)?;
    Ok(if ok { Outcome::Pass } else { Outcome::Fail })
}

fn kinds_of(names: &[String]) -> anyhow::Result<Vec<SpectrumKind>> {
    if names.is_empty() {
        return Ok(SpectrumKind::ALL.to_vec());
    }
    Ok(names.iter().map(|k| k.parse()).collect::<Result<_, _>>()?)
}

fn region(a: RegionArgs) -> anyhow::Result<Outcome> {
    let inst = read_instance(&a.input)?;
    let kinds = kinds_of(&a.kind)?;
    let n = inst.n();
    let regions: Vec<Region> = match &inst {
        Instance::Structured(t) => kinds.iter().map(|&k| structured_spectrum(t, k)).collect(),
        Instance::Finite(t) => {
            let sets = finite_sets(t, &a.common)?;
            kinds.iter().map(|&k| Region::points(n, sets(k))).collect()
        }
    };
    for r in &regions {
        r.check_compact()?;
    }
    let axes = match &a.grid {
        Some(g) => parse_grid(g)?,
        None => {
            let radius = match &inst {
                Instance::Structured(t) => Engine::from_tuple(t)?.radius(),
                Instance::Finite(t) => t.norm_bound(),
            };
            vec![Axis::symmetric((1.5 * radius).max(1.0), jspec_core::harness::DEFAULT_GRID_STEPS)]
        }
    };
    let points = grid_points(&axes, n);
    let members: Vec<Vec<bool>> = points
        .iter()
        .map(|p| regions.iter().map(|r| r.contains(p, REGION_TOL)).collect())
        .collect();
    let names: Vec<&str> = kinds.iter().map(|k| k.name()).collect();
    let doc = json!({
        "n": n,
        "grid": axes.iter().map(|a| format!("{}:{}:{}", a.min, a.max, a.steps)).collect::<Vec<_>>(),
        "regions": names.iter().zip(&regions).map(|(k, r)| (k.to_string(), json!(r))).collect::<serde_json::Map<_, _>>(),
        "points": points.iter().zip(&members).map(|(p, m)| json!({
            "point": pairs(p),
            "member": names.iter().zip(m).map(|(k, &b)| (k.to_string(), json!(b))).collect::<serde_json::Map<_, _>>(),
        })).collect::<Vec<_>>(),
    });
    let mut header: Vec<String> = (0..n).flat_map(|i| [format!("re{i}"), format!("im{i}")]).collect();
    header.extend(names.iter().map(|s| s.to_string()));
    let mut rows = vec![header];
    for (p, m) in points.iter().zip(&members) {
        let mut row: Vec<String> = p.iter().flat_map(|z| [z.re.to_string(), z.im.to_string()]).collect();
        row.extend(m.iter().map(|&b| u8::from(b).to_string()));
        rows.push(row);
    }
    emit(a.common.out.as_deref(), a.common.format, &doc, &rows)?;
    Ok(Outcome::Pass)
}

/// Spectra of a finite tuple as float point sets, per kind.
fn finite_sets(t: &FiniteTuple<Qi>, common: &Common) -> anyhow::Result<impl Fn(SpectrumKind) -> Vec<Vec<Complex64>>> {
    let cfg = common.rank_config()?;
    let sets: Vec<(SpectrumKind, Vec<Vec<Complex64>>)> = match cfg.mode {
        Mode::Exact => {
            let s = full_spectrum(t, &cfg)?;
            SpectrumKind::ALL.iter().map(|&k| (k, s.set(k).iter().map(|p| point_to_c64(p)).collect())).collect()
        }
        Mode::Float => {
            let s = full_spectrum(&t.to_float(), &cfg)?;
            SpectrumKind::ALL.iter().map(|&k| (k, s.set(k))).collect()
        }
    };
    Ok(move |k| sets.iter().find(|(j, _)| *j == k).map(|(_, v)| v.clone()).unwrap_or_default())
}

fn pairs(p: &[Complex64]) -> Vec<[f64; 2]> {
    p.iter().map(|z| [z.re, z.im]).collect()
}

fn classify(a: ClassifyArgs) -> anyhow::Result<Outcome> {
    let inst = read_instance(&a.input)?;
    let doc = match &inst {
        Instance::Structured(t) => {
            let z: Vec<Complex64> = parse_point(&a.point)?;
            check_len(z.len(), t.n())?;
            serde_json::to_value(Engine::from_tuple(t)?.classify(&z)?)?
        }
        Instance::Finite(t) => {
            let cfg = a.common.rank_config()?;
            match cfg.mode {
                Mode::Exact => {
                    let z: Vec<Qi> = parse_point(&a.point)?;
                    check_len(z.len(), t.len())?;
                    serde_json::to_value(classify_point(t, &z, &cfg, None)?)?
                }
                Mode::Float => {
                    let z: Vec<Complex64> = parse_point(&a.point)?;
                    check_len(z.len(), t.len())?;
                    serde_json::to_value(classify_point(&t.to_float(), &z, &cfg, None)?)?
                }
            }
        }
    };
    let mut rows = vec![vec!["kind".to_string(), "member".to_string()]];
    if let Some(flags) = doc.get("spectra").and_then(Value::as_object) {
        for (k, v) in flags {
            rows.push(vec![k.clone(), u8::from(v.as_bool() == Some(true)).to_string()]);
        }
    }
    emit(a.common.out.as_deref(), a.common.format, &doc, &rows)?;
    Ok(Outcome::Pass)
}

fn check_len(found: usize, expected: usize) -> anyhow::Result<()> {
    if found != expected {
        bail!("point has {found} coordinates, the tuple has {expected} operators");
    }
    Ok(())
}

fn koszul(a: KoszulArgs) -> anyhow::Result<Outcome> {
    let Instance::Finite(t) = read_instance(&a.input)? else {
        bail!("koszul needs a finite operator file");
    };
    let cfg = a.common.rank_config()?;
    let (dims, homology) = match cfg.mode {
        Mode::Exact => koszul_at(&t, &parse_point::<Qi>(&a.point)?, &cfg)?,
        Mode::Float => koszul_at(&t.to_float(), &parse_point::<Complex64>(&a.point)?, &cfg)?,
    };
    let euler: i64 = homology.iter().enumerate().map(|(p, &h)| if p % 2 == 0 { h as i64 } else { -(h as i64) }).sum();
    let doc = json!({"point": a.point, "chain_dims": dims, "homology": homology, "euler": euler});
    let mut rows = vec![vec!["p".to_string(), "chain_dim".to_string(), "homology".to_string()]];
    for (p, (d, h)) in dims.iter().zip(&homology).enumerate() {
        rows.push(vec![p.to_string(), d.to_string(), h.to_string()]);
    }
    emit(a.common.out.as_deref(), a.common.format, &doc, &rows)?;
    Ok(Outcome::Pass)
}

fn koszul_at<F: Scalar>(t: &FiniteTuple<F>, z: &[F], cfg: &RankConfig) -> anyhow::Result<(Vec<usize>, Vec<usize>)> {
    check_len(z.len(), t.len())?;
    let k = build_koszul(t, z)?;
    let h = homology_dims(&k, cfg)?;
    Ok((k.dims().to_vec(), h.dims))
}
