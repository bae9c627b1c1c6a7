//! CSV plot data and the summaries golden-filed in tests.
//!
//! Schemas (header row first, one record per line):
//!
//! | kind       | columns                                              |
//! |------------|------------------------------------------------------|
//! | `eigvec`   | `index,component,log2_component`                     |
//! | `singvec`  | `index,abs_u,log2_abs_u`                             |
//! | `spectrum` | `re,im`                                              |
//! | `svals`    | `n,index,log2_index,sigma`                           |
//! | `homotopy` | `stage,path_id,t,abs_lambda,lambda_squared,bound`    |

use std::collections::BTreeMap;
use std::fmt::Write as _;

use nalgebra::Complex;
use serde::{Deserialize, Serialize};

use crate::homotopy::ChainedData;
use crate::perronvec::EigvecResult;
use crate::spectra::{SingularSpectrum, SingularTriple};

pub const EIGVEC_COLUMNS: &str = "index,component,log2_component";
pub const SINGVEC_COLUMNS: &str = "index,abs_u,log2_abs_u";
pub const SPECTRUM_COLUMNS: &str = "re,im";
pub const SVALS_COLUMNS: &str = "n,index,log2_index,sigma";
pub const HOMOTOPY_COLUMNS: &str = "stage,path_id,t,abs_lambda,lambda_squared,bound";

fn csv(header: &str, rows: impl Iterator<Item = String>) -> String {
    let mut out = String::from(header);
    out.push('\n');
    for r in rows {
        out.push_str(&r);
        out.push('\n');
    }
    out
}

pub fn eigvec_csv(v: &EigvecResult) -> String {
    csv(
        EIGVEC_COLUMNS,
        v.components
            .iter()
            .enumerate()
            .map(|(i, c)| format!("{},{:e},{:e}", i + 1, c, c.log2())),
    )
}

pub fn singvec_csv(t: &SingularTriple) -> String {
    csv(
        SINGVEC_COLUMNS,
        t.u.iter().enumerate().map(|(i, u)| {
            let a = u.abs();
            format!("{},{:e},{:e}", i + 1, a, a.log2())
        }),
    )
}

pub fn spectrum_csv(eigs: &[Complex<f64>]) -> String {
    csv(SPECTRUM_COLUMNS, eigs.iter().map(|z| format!("{:e},{:e}", z.re, z.im)))
}

pub fn svals_csv(spectra: &[SingularSpectrum]) -> String {
    csv(
        SVALS_COLUMNS,
        spectra.iter().flat_map(|s| {
            s.sigmas.iter().enumerate().map(move |(i, sg)| {
                let k = i + 1;
                format!("{},{},{:e},{:e}", s.n, k, (k as f64).log2(), sg)
            })
        }),
    )
}

pub fn homotopy_csv(data: &ChainedData) -> String {
    csv(
        HOMOTOPY_COLUMNS,
        data.rows.iter().map(|r| {
            format!(
                "{},{},{:e},{:e},{:e},{:e}",
                r.stage, r.path_id, r.t, r.abs_lambda, r.lambda_squared, r.bound
            )
        }),
    )
}

/// Count, extremes and `⌊log₂|x|⌋` histogram of one column.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColumnSummary {
    pub column: String,
    pub count: usize,
    /// Nine significant digits, so the summary is stable under last-bit noise.
    pub min: String,
    pub max: String,
    /// Band `k` counts nonzero values with `2^k ≤ |x| < 2^{k+1}`.
    pub log2_bands: BTreeMap<i32, usize>,
    pub zeros: usize,
}

fn sig9(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    format!("{x:.8e}")
}

impl ColumnSummary {
    pub fn of(column: &str, values: &[f64]) -> Self {
        let mut bands = BTreeMap::new();
        let mut zeros = 0;
        for &v in values {
            // Values within 1e-12 of zero count as zero so that rounding
            // noise (e.g. the imaginary part of a real eigenvalue) is stable.
            if v.abs() <= 1e-12 {
                zeros += 1;
            } else {
                *bands.entry(v.abs().log2().floor() as i32).or_insert(0) += 1;
            }
        }
        let min = values.iter().copied().fold(f64::INFINITY, f64::min);
        let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Self {
            column: column.to_string(),
            count: values.len(),
            min: sig9(min),
            max: sig9(max),
            log2_bands: bands,
            zeros,
        }
    }
}

/// Summaries of selected columns of a CSV produced by this module.
pub fn summarize_csv(text: &str, columns: &[&str]) -> Vec<ColumnSummary> {
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap_or("").split(',').collect();
    let rows: Vec<Vec<f64>> = lines
        .map(|l| l.split(',').map(|f| f.parse().unwrap_or(f64::NAN)).collect())
        .collect();
    columns
        .iter()
        .filter_map(|&c| {
            let k = header.iter().position(|h| *h == c)?;
            let values: Vec<f64> = rows.iter().map(|r| r[k]).collect();
            Some(ColumnSummary::of(c, &values))
        })
        .collect()
}

/// A summary rendered as stable, line-oriented text for golden files.
pub fn render_summaries(title: &str, summaries: &[ColumnSummary]) -> String {
    let mut out = format!("# {title}\n");
    for s in summaries {
        let _ = writeln!(out, "{}: count={} min={} max={} zeros={}", s.column, s.count, s.min, s.max, s.zeros);
        let bands: Vec<String> = s.log2_bands.iter().map(|(k, c)| format!("{k}:{c}")).collect();
        let _ = writeln!(out, "  bands {}", bands.join(" "));
    }
    out
}
