use std::collections::BTreeMap;
use std::io::Write;

use anyhow::Result;
use serde::ser::{SerializeMap, SerializeSeq};
use serde::{Serialize, Serializer};

use poisson_approx::report::{format_sig, BoundReport, ContextValue, HUMAN_DIGITS, REPORT_DIGITS};

use crate::tables::Table;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Human,
    Json,
    Csv,
}

fn cell(v: &ContextValue, digits: usize) -> String {
    match v {
        ContextValue::Real(x) => format_sig(x.get(), digits),
        other => other.to_string(),
    }
}

/// Context entries that every report shares, in key order.
fn shared_context(reports: &[BoundReport]) -> BTreeMap<String, ContextValue> {
    let Some(first) = reports.first() else {
        return BTreeMap::new();
    };
    first
        .context
        .iter()
        .filter(|(k, v)| reports.iter().all(|r| r.context.get(*k) == Some(v)))
        .map(|(k, v)| (k.clone(), v.clone()))
        .collect()
}

pub fn reports(out: &mut impl Write, reports: &[BoundReport], format: Format) -> Result<()> {
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut *out, reports)?;
            writeln!(out)?;
        }
        Format::Csv => reports_csv(out, reports)?,
        Format::Human => reports_human(out, reports)?,
    }
    Ok(())
}

/// Columns: case parameters, λ, bound name, value, kind, provenance.
fn reports_csv(out: &mut impl Write, reports: &[BoundReport]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["case", "lambda", "name", "value", "kind", "provenance"])?;
    for r in reports {
        let case = r
            .context
            .iter()
            .filter(|(k, _)| k.as_str() != "lambda")
            .map(|(k, v)| format!("{k}={}", cell(v, REPORT_DIGITS)))
            .collect::<Vec<_>>()
            .join(";");
        let lambda = r
            .context
            .get("lambda")
            .map(|v| cell(v, REPORT_DIGITS))
            .unwrap_or_default();
        w.write_record([
            case,
            lambda,
            r.name.clone(),
            format_sig(r.value.get(), REPORT_DIGITS),
            r.kind.to_string(),
            r.provenance.clone(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

fn reports_human(out: &mut impl Write, reports: &[BoundReport]) -> Result<()> {
    let shared = shared_context(reports);
    for (k, v) in &shared {
        writeln!(out, "{k} = {}", cell(v, HUMAN_DIGITS))?;
    }
    if !shared.is_empty() {
        writeln!(out)?;
    }
    let rows: Vec<Vec<String>> = reports
        .iter()
        .map(|r| {
            let extra = r
                .context
                .iter()
                .filter(|(k, _)| !shared.contains_key(*k))
                .map(|(k, v)| format!("{k}={}", cell(v, HUMAN_DIGITS)))
                .collect::<Vec<_>>()
                .join(" ");
            vec![
                r.name.clone(),
                r.kind.to_string(),
                format_sig(r.value.get(), HUMAN_DIGITS),
                r.provenance.clone(),
                extra,
            ]
        })
        .collect();
    aligned(out, &rows, false)
}

/// Left-aligned rows leave the last column unpadded; `right` suits numeric tables.
fn aligned(out: &mut impl Write, rows: &[Vec<String>], right: bool) -> Result<()> {
    let mut widths = Vec::new();
    for row in rows {
        widths.resize(widths.len().max(row.len()), 0);
        for (w, c) in widths.iter_mut().zip(row) {
            *w = (*w).max(c.chars().count());
        }
    }
    for row in rows {
        let last = row.len().saturating_sub(1);
        let cells: Vec<String> = row
            .iter()
            .zip(&widths)
            .enumerate()
            .map(|(i, (c, &w))| match (right, i == last) {
                (true, _) => format!("{c:>w$}"),
                (false, true) => c.clone(),
                (false, false) => format!("{c:<w$}"),
            })
            .collect();
        writeln!(out, "{}", cells.join("  ").trim_end())?;
    }
    Ok(())
}

/// Rows as JSON objects with keys in column order.
struct JsonTable<'a>(&'a Table);

struct JsonRow<'a>(&'a [&'static str], &'a [ContextValue]);

impl Serialize for JsonTable<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.0.rows.len()))?;
        for row in &self.0.rows {
            seq.serialize_element(&JsonRow(&self.0.columns, row))?;
        }
        seq.end()
    }
}

impl Serialize for JsonRow<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in self.0.iter().zip(self.1) {
            map.serialize_entry(k, v)?;
        }
        map.end()
    }
}

pub fn table(out: &mut impl Write, table: &Table, format: Format) -> Result<()> {
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut *out, &JsonTable(table))?;
            writeln!(out)?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(&table.columns)?;
            for row in &table.rows {
                w.write_record(row.iter().map(|v| cell(v, REPORT_DIGITS)))?;
            }
            w.flush()?;
        }
        Format::Human => {
            let mut rows = vec![table
                .columns
                .iter()
                .map(|c| c.to_string())
                .collect::<Vec<_>>()];
            rows.extend(
                table
                    .rows
                    .iter()
                    .map(|r| r.iter().map(|v| cell(v, HUMAN_DIGITS)).collect()),
            );
            aligned(out, &rows, true)?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use poisson_approx::report::BoundKind;

    fn sample() -> Vec<BoundReport> {
        vec![
            BoundReport::new("tv_upper", 0.123456789, BoundKind::Upper, "le-cam")
                .unwrap()
                .with("lambda", 2.0),
            BoundReport::new("kl", f64::INFINITY, BoundKind::Exact, "oracle")
                .unwrap()
                .with("lambda", 2.0),
        ]
    }

    #[test]
    fn human_output_uses_four_digits() {
        let mut buf = Vec::new();
        reports(&mut buf, &sample(), Format::Human).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("lambda = 2\n"));
        assert!(text.contains("0.1235"));
        assert!(text.contains("inf"));
    }

    #[test]
    fn csv_output_uses_twelve_digits() {
        let mut buf = Vec::new();
        reports(&mut buf, &sample(), Format::Csv).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "case,lambda,name,value,kind,provenance");
        assert_eq!(lines[1], ",2,tv_upper,0.123456789,upper,le-cam");
        assert_eq!(lines[2], ",2,kl,inf,exact,oracle");
    }

    #[test]
    fn json_table_keeps_column_order() {
        let t = Table {
            columns: vec!["z", "a"],
            rows: vec![vec![1usize.into(), 0.5.into()]],
        };
        let mut buf = Vec::new();
        table(&mut buf, &t, Format::Json).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.find("\"z\"").unwrap() < text.find("\"a\"").unwrap());
    }
}
