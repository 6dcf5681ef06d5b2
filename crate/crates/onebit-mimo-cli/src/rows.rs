//! Result row schema shared by every subcommand, with CSV and JSON
//! emission. One row per (scenario × sweep point); columns not applicable
//! to a subcommand stay empty (CSV) or null (JSON).

use serde::{Deserialize, Serialize};

/// Column order is the wire contract: the CSV header lists exactly these
/// fields, and JSON objects carry the same keys.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct ResultRow {
    pub scheme: String,
    pub decoder: String,
    pub m: Option<u64>,
    pub n: Option<u64>,
    pub p: Option<f64>,
    pub pp: Option<f64>,
    pub k: Option<u64>,
    pub trials: Option<u64>,
    pub seed: Option<u64>,
    pub block_errors: Option<u64>,
    pub block_error_rate: Option<f64>,
    pub bit_error_rate: Option<f64>,
    pub ci95_halfwidth: Option<f64>,
    pub bound_union: Option<f64>,
    pub bound_chernoff: Option<f64>,
    pub bound_asymptotic: Option<f64>,
    pub p_eps: Option<f64>,
    pub mi_bits_per_use: Option<f64>,
}

pub const CSV_HEADER: &str = "scheme,decoder,m,n,p,pp,k,trials,seed,block_errors,\
block_error_rate,bit_error_rate,ci95_halfwidth,bound_union,bound_chernoff,\
bound_asymptotic,p_eps,mi_bits_per_use";

/// 17 significant digits: enough to reproduce any f64 exactly on parse.
fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn opt_u64(v: Option<u64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn opt_f64(v: Option<f64>) -> String {
    v.map(fmt_f64).unwrap_or_default()
}

impl ResultRow {
    pub fn to_csv_record(&self) -> String {
        [
            self.scheme.clone(),
            self.decoder.clone(),
            opt_u64(self.m),
            opt_u64(self.n),
            opt_f64(self.p),
            opt_f64(self.pp),
            opt_u64(self.k),
            opt_u64(self.trials),
            opt_u64(self.seed),
            opt_u64(self.block_errors),
            opt_f64(self.block_error_rate),
            opt_f64(self.bit_error_rate),
            opt_f64(self.ci95_halfwidth),
            opt_f64(self.bound_union),
            opt_f64(self.bound_chernoff),
            opt_f64(self.bound_asymptotic),
            opt_f64(self.p_eps),
            opt_f64(self.mi_bits_per_use),
        ]
        .join(",")
    }

    pub fn from_csv_record(line: &str) -> Result<ResultRow, String> {
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 18 {
            return Err(format!("expected 18 fields, got {}", fields.len()));
        }
        let u = |i: usize| -> Result<Option<u64>, String> {
            if fields[i].is_empty() {
                Ok(None)
            } else {
                fields[i].parse().map(Some).map_err(|e| format!("field {i}: {e}"))
            }
        };
        let f = |i: usize| -> Result<Option<f64>, String> {
            if fields[i].is_empty() {
                Ok(None)
            } else {
                fields[i].parse().map(Some).map_err(|e| format!("field {i}: {e}"))
            }
        };
        Ok(ResultRow {
            scheme: fields[0].to_string(),
            decoder: fields[1].to_string(),
            m: u(2)?,
            n: u(3)?,
            p: f(4)?,
            pp: f(5)?,
            k: u(6)?,
            trials: u(7)?,
            seed: u(8)?,
            block_errors: u(9)?,
            block_error_rate: f(10)?,
            bit_error_rate: f(11)?,
            ci95_halfwidth: f(12)?,
            bound_union: f(13)?,
            bound_chernoff: f(14)?,
            bound_asymptotic: f(15)?,
            p_eps: f(16)?,
            mi_bits_per_use: f(17)?,
        })
    }
}

pub fn to_csv(rows: &[ResultRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for row in rows {
        out.push_str(&row.to_csv_record());
        out.push('\n');
    }
    out
}

pub fn parse_csv(text: &str) -> Result<Vec<ResultRow>, String> {
    let mut lines = text.lines();
    match lines.next() {
        Some(header) if header == CSV_HEADER => {}
        other => return Err(format!("bad CSV header: {other:?}")),
    }
    lines.map(ResultRow::from_csv_record).collect()
}

pub fn to_json(rows: &[ResultRow]) -> String {
    let mut out = serde_json::to_string_pretty(rows).expect("rows are plain data");
    out.push('\n');
    out
}
