use std::io::Write;

use serde_json::{json, Map, Value};

use crate::args::Format;

/// One command's output: a table, summary fields, and optionally a richer
/// JSON body or a raw text body (diagram files).
#[derive(Debug, Default)]
pub struct Report {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
    pub summary: Vec<(&'static str, String)>,
    pub body: Option<Value>,
    pub text: Option<String>,
}

impl Report {
    pub fn table(columns: Vec<&'static str>) -> Self {
        Report { columns, ..Report::default() }
    }

    pub fn row(&mut self, cells: Vec<String>) {
        debug_assert_eq!(cells.len(), self.columns.len());
        self.rows.push(cells);
    }

    pub fn note(&mut self, key: &'static str, value: impl ToString) {
        self.summary.push((key, value.to_string()));
    }
}

pub struct Header {
    pub command: String,
    pub config: Value,
    pub thresholds: Value,
}

fn rows_as_json(r: &Report) -> Value {
    Value::Array(
        r.rows
            .iter()
            .map(|row| {
                let obj: Map<String, Value> =
                    r.columns.iter().zip(row).map(|(c, v)| (c.to_string(), Value::String(v.clone()))).collect();
                Value::Object(obj)
            })
            .collect(),
    )
}

pub fn render(header: &Header, report: &Report, format: Format) -> Result<Vec<u8>, String> {
    let version = env!("CARGO_PKG_VERSION");
    match format {
        Format::Json => {
            let summary: Map<String, Value> =
                report.summary.iter().map(|(k, v)| (k.to_string(), Value::String(v.clone()))).collect();
            let mut doc = json!({
                "tool": "adicscope",
                "version": version,
                "command": header.command,
                "config": header.config,
                "thresholds": header.thresholds,
                "summary": summary,
            });
            let obj = doc.as_object_mut().unwrap();
            if let Some(body) = &report.body {
                obj.insert("result".into(), body.clone());
            }
            if !report.columns.is_empty() {
                obj.insert("rows".into(), rows_as_json(report));
            }
            if let Some(text) = &report.text {
                obj.insert("text".into(), Value::String(text.clone()));
            }
            let mut out = serde_json::to_vec_pretty(&doc).map_err(|e| e.to_string())?;
            out.push(b'\n');
            Ok(out)
        }
        Format::Csv => {
            let mut out = Vec::new();
            writeln!(out, "# adicscope {version}").unwrap();
            writeln!(out, "# command: {}", header.command).unwrap();
            writeln!(out, "# config: {}", header.config).unwrap();
            writeln!(out, "# thresholds: {}", header.thresholds).unwrap();
            for (k, v) in &report.summary {
                for (i, line) in v.lines().enumerate() {
                    if i == 0 {
                        writeln!(out, "# {k}: {line}").unwrap();
                    } else {
                        writeln!(out, "#   {line}").unwrap();
                    }
                }
            }
            if let Some(text) = &report.text {
                out.extend_from_slice(text.as_bytes());
            }
            if !report.columns.is_empty() {
                let mut w = csv::Writer::from_writer(&mut out);
                w.write_record(&report.columns).map_err(|e| e.to_string())?;
                for row in &report.rows {
                    w.write_record(row).map_err(|e| e.to_string())?;
                }
                w.flush().map_err(|e| e.to_string())?;
            }
            Ok(out)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn header() -> Header {
        Header { command: "demo".into(), config: json!({"b": 6}), thresholds: json!({"tau": 0.05}) }
    }

    #[test]
    fn csv_quotes_cells_with_commas() {
        let mut r = Report::table(vec!["set", "value"]);
        r.row(vec!["1,2,3".into(), "0.5".into()]);
        r.note("status", "ok");
        let text = String::from_utf8(render(&header(), &r, Format::Csv).unwrap()).unwrap();
        assert!(text.contains("# thresholds: {\"tau\":0.05}"));
        assert!(text.contains("# status: ok"));
        assert!(text.ends_with("set,value\n\"1,2,3\",0.5\n"));
    }

    #[test]
    fn json_rows_are_keyed_by_column() {
        let mut r = Report::table(vec!["a"]);
        r.row(vec!["x".into()]);
        let v: Value = serde_json::from_slice(&render(&header(), &r, Format::Json).unwrap()).unwrap();
        assert_eq!(v["rows"][0]["a"], "x");
        assert_eq!(v["command"], "demo");
    }
}
