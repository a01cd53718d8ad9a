//! CSV rendering of run records, summaries and timings.
//!
//! Numbers are written with Rust's shortest round-trip formatting, so a
//! record read back from its CSV row is equal to the original.

use crate::error::{parse_err, Error, Result};
use crate::metrics::MetricBundle;
use crate::samplers::Quota;

use super::run::{AggregateRow, RunRecord};

pub const RECORD_HEADER: [&str; 18] = [
    "instance",
    "size",
    "k",
    "rule",
    "iteration",
    "seed",
    "committee",
    "average_satisfaction",
    "exclusion_ratio",
    "bottom_quartile_mean",
    "gini",
    "nash_welfare",
    "jr",
    "ejr_plus_share",
    "ejr_plus_shortfall",
    "ejr_plus_witnesses",
    "quota_deserved",
    "quota_received",
];

fn finish(w: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
}

fn io(e: csv::Error) -> Error {
    Error::Io(e.to_string())
}

fn opt<T: ToString>(x: Option<T>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

/// Committee members as 1-indexed labels, e.g. `c1 c4`.
pub fn committee_label(members: &[usize]) -> String {
    members.iter().map(|c| format!("c{}", c + 1)).collect::<Vec<_>>().join(" ")
}

pub fn records_csv(records: &[RunRecord]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(RECORD_HEADER).map_err(io)?;
    for r in records {
        let m = r.metrics;
        w.write_record([
            r.instance.clone(),
            r.size_label.clone(),
            r.k.to_string(),
            r.rule.clone(),
            r.iteration.to_string(),
            r.seed.to_string(),
            committee_label(&r.committee),
            m.average_satisfaction.to_string(),
            m.exclusion_ratio.to_string(),
            m.bottom_quartile_mean.to_string(),
            m.gini.to_string(),
            m.nash_welfare.to_string(),
            r.jr.to_string(),
            opt(r.ejr_plus.map(|e| e.0)),
            opt(r.ejr_plus.map(|e| e.1)),
            opt(r.ejr_plus.map(|e| e.2)),
            opt(r.quota.map(|q| q.deserved)),
            opt(r.quota.map(|q| q.received)),
        ])
        .map_err(io)?;
    }
    finish(w)
}

/// Inverse of [`records_csv`]; durations are not part of the format and
/// come back as zero.
pub fn parse_records_csv(text: &str) -> Result<Vec<RunRecord>> {
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let mut out = Vec::new();
    for (i, row) in rdr.records().enumerate() {
        let ln = i + 2;
        let row = row.map_err(|e| parse_err(ln, e.to_string()))?;
        if row.len() != RECORD_HEADER.len() {
            return Err(parse_err(ln, format!("expected {} fields", RECORD_HEADER.len())));
        }
        let f = |j: usize| &row[j];
        fn num<T: std::str::FromStr>(s: &str, ln: usize) -> Result<T> {
            s.parse().map_err(|_| parse_err(ln, format!("bad number '{s}'")))
        }
        let optnum = |j: usize| -> Result<Option<f64>> {
            if f(j).is_empty() { Ok(None) } else { num(f(j), ln).map(Some) }
        };
        let committee = f(6)
            .split_whitespace()
            .map(|c| {
                c.strip_prefix('c')
                    .and_then(|x| x.parse::<usize>().ok())
                    .filter(|&x| x >= 1)
                    .map(|x| x - 1)
                    .ok_or_else(|| parse_err(ln, format!("bad candidate label '{c}'")))
            })
            .collect::<Result<Vec<_>>>()?;
        let ejr_plus = match (optnum(13)?, optnum(14)?, optnum(15)?) {
            (Some(a), Some(b), Some(c)) => Some((a, b, c as usize)),
            _ => None,
        };
        let quota = match (optnum(16)?, optnum(17)?) {
            (Some(d), Some(r)) => Some(Quota { deserved: d as usize, received: r as usize }),
            _ => None,
        };
        out.push(RunRecord {
            instance: f(0).to_string(),
            size_label: f(1).to_string(),
            k: num(f(2), ln)?,
            rule: f(3).to_string(),
            iteration: num(f(4), ln)?,
            seed: num(f(5), ln)?,
            committee,
            metrics: MetricBundle {
                average_satisfaction: num(f(7), ln)?,
                exclusion_ratio: num(f(8), ln)?,
                bottom_quartile_mean: num(f(9), ln)?,
                gini: num(f(10), ln)?,
                nash_welfare: num(f(11), ln)?,
            },
            jr: num(f(12), ln)?,
            ejr_plus,
            quota,
            seconds: 0.0,
        });
    }
    Ok(out)
}

pub fn aggregates_csv(rows: &[AggregateRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["table", "rule", "size", "statistic", "value"]).map_err(io)?;
    for r in rows {
        w.write_record([&r.table, &r.rule, &r.size, &r.statistic, &r.value.to_string()])
            .map_err(io)?;
    }
    finish(w)
}

/// Per-run wall-clock durations. Kept apart from the record CSV so that the
/// latter is identical across reruns.
pub fn timing_csv(records: &[RunRecord]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["instance", "size", "rule", "iteration", "seconds"]).map_err(io)?;
    for r in records {
        w.write_record([
            r.instance.as_str(),
            &r.size_label,
            &r.rule,
            &r.iteration.to_string(),
            &format!("{:.6}", r.seconds),
        ])
        .map_err(io)?;
    }
    finish(w)
}
