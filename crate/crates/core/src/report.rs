//! Check records (JSON lines) and their CSV summary.

use std::collections::BTreeMap;
use std::fmt;
use std::io::{BufRead, Write};
use std::time::Duration;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    /// The check's premise does not hold on the samples; nothing to confirm.
    Vacuous,
    /// A computation could not be certified within its step bounds.
    Uncertified,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Verdict {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn is_failure(self) -> bool {
        matches!(self, Verdict::Fail | Verdict::Uncertified)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Vacuous => "vacuous",
            Verdict::Uncertified => "uncertified",
        })
    }
}

/// One check, one line of output.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub family: String,
    pub check: String,
    pub inputs: Value,
    pub outputs: Value,
    pub verdict: Verdict,
    pub certificate: Value,
}

impl Record {
    pub fn new(family: impl Into<String>, check: impl Into<String>, inputs: Value) -> Self {
        Record {
            family: family.into(),
            check: check.into(),
            inputs,
            outputs: Value::Null,
            verdict: Verdict::Pass,
            certificate: Value::Null,
        }
    }

    pub fn outcome(mut self, outputs: Value, verdict: Verdict, certificate: Value) -> Self {
        self.outputs = outputs;
        self.verdict = verdict;
        self.certificate = certificate;
        self
    }

    /// Records an error raised by the computation under test.
    pub fn error(self, err: &Error) -> Self {
        let verdict = match err {
            Error::Undetermined { .. } | Error::Uncertified { .. } => Verdict::Uncertified,
            _ => Verdict::Fail,
        };
        self.outcome(serde_json::json!({ "error": err.to_string() }), verdict, Value::Null)
    }

    pub fn to_line(&self) -> String {
        serde_json::to_string(self).expect("records serialize")
    }
}

pub fn write_jsonl<W: Write>(mut out: W, records: &[Record]) -> Result<()> {
    for r in records {
        writeln!(out, "{}", r.to_line())?;
    }
    Ok(())
}

pub fn read_jsonl<R: BufRead>(input: R) -> Result<Vec<Record>> {
    let mut out = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let rec = serde_json::from_str(&line).map_err(|e| Error::Config(format!("record on line {}: {e}", i + 1)))?;
        out.push(rec);
    }
    Ok(out)
}

/// Counts per `(family, check)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SummaryRow {
    pub family: String,
    pub check: String,
    pub total: usize,
    pub pass: usize,
    pub fail: usize,
    pub vacuous: usize,
    pub uncertified: usize,
    pub elapsed_ms: Option<u128>,
}

pub fn summarize(records: &[Record], timings: &BTreeMap<String, Duration>) -> Vec<SummaryRow> {
    let mut rows: BTreeMap<(String, String), SummaryRow> = BTreeMap::new();
    for r in records {
        let row = rows.entry((r.family.clone(), r.check.clone())).or_insert_with(|| SummaryRow {
            family: r.family.clone(),
            check: r.check.clone(),
            elapsed_ms: timings.get(&r.check).map(Duration::as_millis),
            ..SummaryRow::default()
        });
        row.total += 1;
        match r.verdict {
            Verdict::Pass => row.pass += 1,
            Verdict::Fail => row.fail += 1,
            Verdict::Vacuous => row.vacuous += 1,
            Verdict::Uncertified => row.uncertified += 1,
        }
    }
    rows.into_values().collect()
}

pub fn write_summary_csv<W: Write>(out: W, rows: &[SummaryRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row).map_err(|e| Error::Io(std::io::Error::other(e)))?;
    }
    w.flush()?;
    Ok(())
}

/// All records of one battery run plus wall-clock timings per check.
#[derive(Clone, Debug, Default)]
pub struct RunReport {
    pub records: Vec<Record>,
    pub timings: BTreeMap<String, Duration>,
}

impl RunReport {
    pub fn passed(&self) -> bool {
        self.records.iter().all(|r| !r.verdict.is_failure())
    }

    pub fn failures(&self) -> impl Iterator<Item = &Record> {
        self.records.iter().filter(|r| r.verdict.is_failure())
    }

    pub fn summary(&self) -> Vec<SummaryRow> {
        summarize(&self.records, &self.timings)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn records_round_trip_through_jsonl() {
        let recs = vec![
            Record::new("affine", "scale-value", json!({"x": "(0, -3)@2"})).outcome(
                json!({"scale": "8"}),
                Verdict::Pass,
                json!({"tidy_v": "level:0"}),
            ),
            Record::new("sym3", "tidy-criterion", json!({})).outcome(Value::Null, Verdict::Fail, Value::Null),
        ];
        let mut buf = Vec::new();
        write_jsonl(&mut buf, &recs).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("{\"family\":\"affine\",\"check\":\"scale-value\",\"inputs\""));
        assert_eq!(read_jsonl(&buf[..]).unwrap(), recs);
    }

    #[test]
    fn summary_counts() {
        let recs = vec![
            Record::new("lamp", "witness", Value::Null),
            Record::new("lamp", "witness", Value::Null).outcome(Value::Null, Verdict::Uncertified, Value::Null),
        ];
        let rows = summarize(&recs, &BTreeMap::new());
        assert_eq!(rows.len(), 1);
        assert_eq!((rows[0].pass, rows[0].uncertified), (1, 1));
        let mut buf = Vec::new();
        write_summary_csv(&mut buf, &rows).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().next().unwrap(), "family,check,total,pass,fail,vacuous,uncertified,elapsed_ms");
    }
}
