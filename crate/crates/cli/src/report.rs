use std::io::Write;

use clap::ValueEnum;
use hilbert_interp::verify::ReportRecord;
use serde::Deserialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    #[default]
    JsonLines,
    Csv,
}

/// CSV row; optional fields become empty cells.
#[derive(serde::Serialize)]
struct CsvRow<'a> {
    suite: &'a str,
    check: &'a str,
    anchor: &'a str,
    instance: &'a str,
    lhs: f64,
    rhs: f64,
    tolerance: f64,
    relation: String,
    verdict: String,
    error: &'a str,
    wall_time_ms: Option<f64>,
}

fn tag<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_value(v)
        .ok()
        .and_then(|x| x.as_str().map(str::to_owned))
        .unwrap_or_default()
}

pub fn write_records<W: Write>(
    out: W,
    records: &[ReportRecord],
    format: Format,
) -> std::io::Result<()> {
    match format {
        Format::JsonLines => {
            let mut out = std::io::BufWriter::new(out);
            for r in records {
                serde_json::to_writer(&mut out, r)?;
                out.write_all(b"\n")?;
            }
            out.flush()
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            for r in records {
                w.serialize(CsvRow {
                    suite: r.suite.name(),
                    check: &r.check,
                    anchor: &r.anchor,
                    instance: &r.instance,
                    lhs: r.lhs,
                    rhs: r.rhs,
                    tolerance: r.tolerance,
                    relation: tag(&r.relation),
                    verdict: tag(&r.verdict),
                    error: r.error.as_deref().unwrap_or(""),
                    wall_time_ms: r.wall_time_ms,
                })
                .map_err(std::io::Error::other)?;
            }
            w.flush()
        }
    }
}
