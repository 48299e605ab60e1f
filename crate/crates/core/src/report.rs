//! Check records and their table, CSV and JSON renderings.

use std::collections::BTreeMap;
use std::fmt::Display;
use std::io;

use serde::{Deserialize, Serialize, Serializer};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    StatisticalPass,
    StatisticalFail,
}

impl Status {
    pub fn exact(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    pub fn statistical(ok: bool) -> Self {
        if ok {
            Status::StatisticalPass
        } else {
            Status::StatisticalFail
        }
    }

    pub fn is_pass(self) -> bool {
        matches!(self, Status::Pass | Status::StatisticalPass)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::StatisticalPass => "statistical-pass",
            Status::StatisticalFail => "statistical-fail",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportRecord {
    pub check_name: String,
    pub parameters: BTreeMap<String, String>,
    pub expected: String,
    pub observed: String,
    pub status: Status,
    pub runtime_ms: u64,
}

impl ReportRecord {
    pub fn new(check_name: impl Into<String>, status: Status) -> Self {
        ReportRecord {
            check_name: check_name.into(),
            parameters: BTreeMap::new(),
            expected: String::new(),
            observed: String::new(),
            status,
            runtime_ms: 0,
        }
    }

    pub fn param(mut self, key: &str, value: impl Display) -> Self {
        self.parameters.insert(key.to_string(), value.to_string());
        self
    }

    pub fn expected(mut self, value: impl Into<String>) -> Self {
        self.expected = value.into();
        self
    }

    pub fn observed(mut self, value: impl Into<String>) -> Self {
        self.observed = value.into();
        self
    }

    /// `key=value` pairs in key order, `;`-separated.
    pub fn param_string(&self) -> String {
        self.parameters.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(";")
    }

    /// Order used for output: by name, then parameters.
    pub fn sort_key(&self) -> (String, String) {
        (self.check_name.clone(), self.param_string())
    }
}

pub(crate) fn ser_display<T: Display, S: Serializer>(value: &T, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(value)
}

/// Decimal with 15 significant digits; scientific notation outside
/// `[1e-5, 1e15)`.
pub fn fmt_decimal(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return format!("{:.14}", 0.0);
    }
    let exponent = x.abs().log10().floor() as i32;
    if (-5..15).contains(&exponent) {
        let decimals = (14 - exponent).max(0) as usize;
        format!("{x:.decimals$}")
    } else {
        format!("{x:.14e}")
    }
}

pub fn all_pass(records: &[ReportRecord]) -> bool {
    records.iter().all(|r| r.status.is_pass())
}

/// CSV with header `check_name,param_string,expected,observed,status,runtime_ms`
/// and LF line endings. With `timings == false` the runtime column is 0 in
/// every row, so repeated runs produce identical bytes.
pub fn write_csv(records: &[ReportRecord], timings: bool, out: impl io::Write) -> io::Result<()> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    w.write_record(["check_name", "param_string", "expected", "observed", "status", "runtime_ms"])?;
    for r in records {
        let runtime = if timings { r.runtime_ms } else { 0 };
        w.write_record([
            r.check_name.as_str(),
            r.param_string().as_str(),
            r.expected.as_str(),
            r.observed.as_str(),
            r.status.as_str(),
            runtime.to_string().as_str(),
        ])?;
    }
    w.flush()
}

pub fn to_json(records: &[ReportRecord]) -> String {
    serde_json::to_string_pretty(records).expect("records serialize") + "\n"
}

pub fn from_json(text: &str) -> serde_json::Result<Vec<ReportRecord>> {
    serde_json::from_str(text)
}

pub fn to_table(records: &[ReportRecord]) -> String {
    let header = ["check", "parameters", "expected", "observed", "status", "ms"];
    let rows: Vec<[String; 6]> = records
        .iter()
        .map(|r| {
            [
                r.check_name.clone(),
                r.param_string(),
                r.expected.clone(),
                r.observed.clone(),
                r.status.as_str().to_string(),
                r.runtime_ms.to_string(),
            ]
        })
        .collect();
    let mut widths = header.map(str::len);
    for row in &rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let mut out = String::new();
    let mut push_row = |cells: &[&str]| {
        let line: Vec<String> = cells.iter().zip(widths).map(|(c, w)| format!("{c:<w$}")).collect();
        out.push_str(line.join("  ").trim_end());
        out.push('\n');
    };
    push_row(&header);
    let rule: Vec<String> = widths.iter().map(|&w| "-".repeat(w)).collect();
    push_row(&rule.iter().map(String::as_str).collect::<Vec<_>>());
    for row in &rows {
        push_row(&row.iter().map(String::as_str).collect::<Vec<_>>());
    }
    let passed = records.iter().filter(|r| r.status.is_pass()).count();
    out.push_str(&format!("{passed}/{} checks passed\n", records.len()));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sample() -> Vec<ReportRecord> {
        vec![
            ReportRecord::new("lemma22", Status::Pass).param("m", 2).param("n", 2).expected("12").observed("12"),
            ReportRecord::new("gw", Status::StatisticalFail)
                .param("c", "2")
                .expected(fmt_decimal(0.203188))
                .observed("0.2, \"quoted\""),
        ]
    }

    #[test]
    fn decimal_format() {
        assert_eq!(fmt_decimal(0.203187869010980), "0.203187869010980");
        assert_eq!(fmt_decimal(1.0), "1.00000000000000");
        assert_eq!(fmt_decimal(12.5), "12.5000000000000");
        assert_eq!(fmt_decimal(1.5e-12), "1.50000000000000e-12");
        assert_eq!(fmt_decimal(0.0), "0.00000000000000");
    }

    #[test]
    fn csv_header_and_escaping() {
        let mut buf = Vec::new();
        write_csv(&sample(), false, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("check_name,param_string,expected,observed,status,runtime_ms"));
        assert_eq!(lines.next(), Some("lemma22,m=2;n=2,12,12,pass,0"));
        assert!(!text.contains('\r'));
        let mut rdr = csv::Reader::from_reader(text.as_bytes());
        let rows: Vec<csv::StringRecord> = rdr.records().map(|r| r.unwrap()).collect();
        assert_eq!(&rows[1][3], "0.2, \"quoted\"");
        assert_eq!(&rows[1][4], "statistical-fail");
    }

    #[test]
    fn json_field_names() {
        let json = to_json(&sample()[..1]);
        for field in ["check_name", "parameters", "expected", "observed", "status", "runtime_ms"] {
            assert!(json.contains(&format!("\"{field}\"")));
        }
        assert!(json.contains("\"pass\""));
    }

    #[test]
    fn table_lists_every_record() {
        let t = to_table(&sample());
        assert!(t.contains("lemma22") && t.contains("statistical-fail"));
        assert!(t.ends_with("1/2 checks passed\n"));
    }

    fn arb_status() -> impl Strategy<Value = Status> {
        prop_oneof![
            Just(Status::Pass),
            Just(Status::Fail),
            Just(Status::StatisticalPass),
            Just(Status::StatisticalFail)
        ]
    }

    proptest! {
        #[test]
        fn json_round_trips_bytewise(
            name in "[a-z_]{1,12}",
            params in proptest::collection::btree_map("[a-z]{1,4}", "\\PC{0,8}", 0..4),
            expected in "\\PC{0,16}",
            observed in "\\PC{0,16}",
            status in arb_status(),
            runtime in any::<u64>(),
        ) {
            let rec = ReportRecord { check_name: name, parameters: params, expected, observed, status, runtime_ms: runtime };
            let text = to_json(std::slice::from_ref(&rec));
            let parsed = from_json(&text).unwrap();
            prop_assert_eq!(&parsed[0], &rec);
            prop_assert_eq!(to_json(&parsed), text);
        }
    }
}
