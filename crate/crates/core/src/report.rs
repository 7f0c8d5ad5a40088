//! Summaries of existing sweep CSVs: merged rows, breakeven points and
//! thresholds between consecutive members. Nothing is re-simulated.

use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::sim::{parse_csv, threshold_estimate, to_csv, Crossing, LerPoint};

/// Where a member's LER curve meets the diagonal `LER = p`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Breakeven {
    /// Interpolated crossing.
    At { p: f64 },
    /// `LER < p` at every grid point.
    BelowEverywhere,
    /// `LER >= p` at every grid point.
    AboveEverywhere,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ThresholdLine {
    pub smaller: String,
    pub larger: String,
    pub crossing: Option<Crossing>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    #[serde(skip)]
    pub points: Vec<LerPoint>,
    pub labels: Vec<String>,
    pub breakeven: Vec<(String, Breakeven)>,
    pub thresholds: Vec<ThresholdLine>,
}

/// Concatenates CSV texts, dropping rows identical to an earlier one.
pub fn merge_csvs<S: AsRef<str>>(texts: &[S]) -> Result<Vec<LerPoint>> {
    if texts.is_empty() {
        return Err(Error::Artifact("no sweep CSV given".into()));
    }
    let mut out: Vec<LerPoint> = Vec::new();
    for t in texts {
        for p in parse_csv(t.as_ref()).map_err(|e| Error::Artifact(e.to_string()))? {
            if !out.contains(&p) {
                out.push(p);
            }
        }
    }
    Ok(out)
}

fn curve<'a>(points: &'a [LerPoint], label: &str) -> Vec<&'a LerPoint> {
    let mut c: Vec<&LerPoint> = points.iter().filter(|p| p.code_label == label).collect();
    c.sort_by(|x, y| x.p.total_cmp(&y.p));
    c.dedup_by(|x, y| x.p == y.p);
    c
}

pub fn breakeven(points: &[LerPoint], label: &str) -> Breakeven {
    let c = curve(points, label);
    let gap: Vec<f64> = c.iter().map(|p| p.ler - p.p).collect();
    for i in 0..c.len().saturating_sub(1) {
        let (g0, g1) = (gap[i], gap[i + 1]);
        if g0 < 0.0 && g1 >= 0.0 {
            let t = g0 / (g0 - g1);
            return Breakeven::At { p: c[i].p + t * (c[i + 1].p - c[i].p) };
        }
    }
    if gap.iter().all(|&g| g < 0.0) {
        Breakeven::BelowEverywhere
    } else {
        Breakeven::AboveEverywhere
    }
}

pub fn build_report(points: Vec<LerPoint>) -> Result<Report> {
    if points.is_empty() {
        return Err(Error::Artifact("sweep CSVs contain no rows".into()));
    }
    let mut labels: Vec<String> = Vec::new();
    for p in &points {
        if !labels.contains(&p.code_label) {
            labels.push(p.code_label.clone());
        }
    }
    let breakeven = labels.iter().map(|l| (l.clone(), breakeven(&points, l))).collect();
    let thresholds = labels
        .windows(2)
        .map(|w| ThresholdLine {
            smaller: w[0].clone(),
            larger: w[1].clone(),
            crossing: threshold_estimate(&points, &w[0], &w[1]).ok(),
        })
        .collect();
    Ok(Report { points, labels, breakeven, thresholds })
}

impl Report {
    pub fn to_csv(&self) -> String {
        to_csv(&self.points)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{} rows, {} codes", self.points.len(), self.labels.len());
        for (label, b) in &self.breakeven {
            let text = match b {
                Breakeven::At { p } => format!("breakeven at p = {p:.4}"),
                Breakeven::BelowEverywhere => "LER < p over the whole grid".to_string(),
                Breakeven::AboveEverywhere => "LER >= p over the whole grid".to_string(),
            };
            let _ = writeln!(s, "{label}: {text}");
        }
        for t in &self.thresholds {
            match t.crossing {
                Some(c) => {
                    let _ = writeln!(s, "{} vs {}: crossing at p = {:.4} +/- {:.4}", t.smaller, t.larger, c.p, c.sigma);
                }
                None => {
                    let _ = writeln!(s, "{} vs {}: no crossing on the shared grid", t.smaller, t.larger);
                }
            }
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const CSV: &str = "code_label,n,k,p,trials,failures,ler,ci_low,ci_high,seed
ell5-m1,10,2,0.01,1000,3,0.003,0.001,0.008,1
ell5-m1,10,2,0.1,1000,200,0.2,0.18,0.22,1
ell5-m2,20,2,0.01,1000,1,0.001,0.0002,0.005,1
ell5-m2,20,2,0.1,1000,250,0.25,0.22,0.28,1
";

    #[test]
    fn merge_is_idempotent() {
        let one = merge_csvs(&[CSV]).unwrap();
        let two = merge_csvs(&[CSV, CSV]).unwrap();
        assert_eq!(one, two);
        assert_eq!(one.len(), 4);
        assert!(merge_csvs::<&str>(&[]).is_err());
        assert!(merge_csvs(&["garbage"]).is_err());
    }

    #[test]
    fn annotations() {
        let r = build_report(merge_csvs(&[CSV]).unwrap()).unwrap();
        assert_eq!(r.labels, vec!["ell5-m1", "ell5-m2"]);
        assert!(matches!(r.breakeven[0].1, Breakeven::At { .. }));
        let c = r.thresholds[0].crossing.unwrap();
        assert!(c.p > 0.01 && c.p < 0.1);
        assert!(r.to_text().contains("breakeven"));
        assert_eq!(parse_csv(&r.to_csv()).unwrap(), r.points);
    }
}
