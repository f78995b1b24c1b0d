use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use anyhow::Context;
use clap::ValueEnum;
use jspec_core::harness::Report;
use serde_json::Value;

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// Writes the JSON document or the CSV rows (first row is the header).
pub fn emit(out: Option<&Path>, format: Format, doc: &Value, rows: &[Vec<String>]) -> anyhow::Result<()> {
    let sink: Box<dyn Write> = match out {
        Some(p) => Box::new(File::create(p).with_context(|| format!("creating {}", p.display()))?),
        None => Box::new(io::stdout().lock()),
    };
    let mut w = BufWriter::new(sink);
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut w, doc)?;
            writeln!(w)?;
        }
        Format::Csv => {
            let mut c = csv::Writer::from_writer(&mut w);
            for r in rows {
                c.write_record(r)?;
            }
            c.flush()?;
        }
    }
    w.flush()?;
    Ok(())
}

/// One row per instance; the first counterexample point, if any, as `re,im;…`.
pub fn report_rows(reports: &[Report]) -> Vec<Vec<String>> {
    let mut rows = vec![["check", "seed", "instance", "pass", "checked", "counterexamples", "first_point"]
        .map(String::from)
        .to_vec()];
    for r in reports {
        for i in &r.instances {
            let first = i
                .counterexamples
                .first()
                .map(|c| c.point.iter().map(|[re, im]| format!("{re},{im}")).collect::<Vec<_>>().join(";"))
                .unwrap_or_default();
            rows.push(vec![
                r.check.to_string(),
                r.seed.to_string(),
                i.desc.clone(),
                i.pass.to_string(),
                i.checked.to_string(),
                i.counterexamples.len().to_string(),
                first,
            ]);
        }
    }
    rows
}
