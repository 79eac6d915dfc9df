//! JSON and CSV renderings of command results.

use serde::Serialize;

use sbt_core::rational::to_fraction_string;
use sbt_core::verify::Report;
use sbt_core::{Poly, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// `{"num": "...", "den": "..."}`.
#[derive(Serialize)]
pub struct JsonRational {
    num: String,
    den: String,
}

impl From<&Rational> for JsonRational {
    fn from(r: &Rational) -> Self {
        JsonRational {
            num: r.numer().to_string(),
            den: r.denom().to_string(),
        }
    }
}

fn csv_writer() -> csv::Writer<Vec<u8>> {
    csv::WriterBuilder::new()
        .quote_style(csv::QuoteStyle::NonNumeric)
        .from_writer(Vec::new())
}

fn finish(w: csv::Writer<Vec<u8>>) -> String {
    let bytes = w.into_inner().expect("writing to memory");
    String::from_utf8(bytes).expect("csv output is utf-8")
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

#[derive(Serialize)]
struct CoeffRow {
    n: usize,
    coeffs: Vec<JsonRational>,
}

#[derive(Serialize)]
struct CoeffTable<'a> {
    family: &'a str,
    alpha: JsonRational,
    sigma: JsonRational,
    degree: usize,
    rows: Vec<CoeffRow>,
}

/// Row `n` lists the coefficients of `z^0..z^n`.
pub fn coeff_table(
    family: &str,
    alpha: &Rational,
    sigma: &Rational,
    polys: &[Poly],
    format: Format,
) -> String {
    let degree = polys.len().saturating_sub(1);
    match format {
        Format::Json => json(&CoeffTable {
            family,
            alpha: alpha.into(),
            sigma: sigma.into(),
            degree,
            rows: polys
                .iter()
                .enumerate()
                .map(|(n, p)| CoeffRow {
                    n,
                    coeffs: (0..=n).map(|k| (&p.coeff(k)).into()).collect(),
                })
                .collect(),
        }),
        Format::Csv => {
            let mut w = csv_writer();
            let mut header = vec!["n".to_string()];
            header.extend((0..=degree).map(|k| format!("z^{k}")));
            w.write_record(&header).expect("in-memory write");
            for (n, p) in polys.iter().enumerate() {
                let mut record = vec![n.to_string()];
                record.extend((0..=degree).map(|k| to_fraction_string(&p.coeff(k))));
                w.write_record(&record).expect("in-memory write");
            }
            finish(w)
        }
    }
}

pub fn verify_report(report: &Report, format: Format) -> String {
    match format {
        Format::Json => json(report),
        Format::Csv => {
            let mut w = csv_writer();
            w.write_record(["suite", "name", "anchor", "status", "mode", "elapsed_ms", "detail"])
                .expect("in-memory write");
            for c in &report.checks {
                let status = serde_json::to_value(c.status).expect("serializable");
                let mode = serde_json::to_value(c.mode).expect("serializable");
                w.write_record([
                    c.suite.as_str(),
                    c.name.as_str(),
                    c.anchor.as_str(),
                    status.as_str().unwrap_or_default(),
                    mode.as_str().unwrap_or_default(),
                    &format!("{:.3}", c.elapsed_ms),
                    c.detail.as_str(),
                ])
                .expect("in-memory write");
            }
            finish(w)
        }
    }
}

#[derive(Serialize)]
pub struct TransformRow {
    pub z: [f64; 2],
    pub value: [f64; 2],
    pub tail_bound: f64,
    pub rounding_bound: f64,
}

#[derive(Serialize)]
struct TransformTable<'a> {
    alpha: JsonRational,
    sigma: JsonRational,
    support: usize,
    rows: &'a [TransformRow],
}

pub fn transform_table(
    alpha: &Rational,
    sigma: &Rational,
    support: usize,
    rows: &[TransformRow],
    format: Format,
) -> String {
    match format {
        Format::Json => json(&TransformTable {
            alpha: alpha.into(),
            sigma: sigma.into(),
            support,
            rows,
        }),
        Format::Csv => {
            let mut w = csv_writer();
            w.write_record(["z_re", "z_im", "re", "im", "tail_bound", "rounding_bound"])
                .expect("in-memory write");
            for r in rows {
                w.serialize((r.z[0], r.z[1], r.value[0], r.value[1], r.tail_bound, r.rounding_bound))
                    .expect("in-memory write");
            }
            finish(w)
        }
    }
}

pub struct ConvergeRow {
    pub alpha: Rational,
    pub y: f64,
    pub phi_modulus: f64,
    pub gaussian: f64,
    /// `| |phi| - gaussian |`.
    pub modulus_gap: f64,
    /// `|phi - gaussian|`.
    pub gap: f64,
}

pub struct ConvergeSummary {
    pub alpha: Rational,
    pub max_modulus_gap: f64,
    pub max_gap: f64,
}

/// CSV output holds the row table, a blank line, then the per-alpha summary.
pub fn converge_table(
    sigma: &Rational,
    rows: &[ConvergeRow],
    summary: &[ConvergeSummary],
    format: Format,
) -> String {
    match format {
        Format::Json => {
            let rows: Vec<_> = rows
                .iter()
                .map(|r| {
                    serde_json::json!({
                        "alpha": JsonRational::from(&r.alpha),
                        "y": r.y,
                        "phi_modulus": r.phi_modulus,
                        "gaussian": r.gaussian,
                        "modulus_gap": r.modulus_gap,
                        "gap": r.gap,
                    })
                })
                .collect();
            let summary: Vec<_> = summary
                .iter()
                .map(|r| {
                    serde_json::json!({
                        "alpha": JsonRational::from(&r.alpha),
                        "max_modulus_gap": r.max_modulus_gap,
                        "max_gap": r.max_gap,
                    })
                })
                .collect();
            json(&serde_json::json!({
                "sigma": JsonRational::from(sigma),
                "rows": rows,
                "summary": summary,
            }))
        }
        Format::Csv => {
            let mut w = csv_writer();
            w.write_record(["alpha", "y", "phi_modulus", "gaussian", "modulus_gap", "gap"])
                .expect("in-memory write");
            for r in rows {
                w.serialize((
                    to_fraction_string(&r.alpha),
                    r.y,
                    r.phi_modulus,
                    r.gaussian,
                    r.modulus_gap,
                    r.gap,
                ))
                .expect("in-memory write");
            }
            let mut s = finish(w);
            let mut w = csv_writer();
            w.write_record(["alpha", "max_modulus_gap", "max_gap"]).expect("in-memory write");
            for r in summary {
                w.serialize((to_fraction_string(&r.alpha), r.max_modulus_gap, r.max_gap))
                    .expect("in-memory write");
            }
            s.push('\n');
            s.push_str(&finish(w));
            s
        }
    }
}
