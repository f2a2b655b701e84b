//! JSON-lines and CSV rendering of result records.

use std::io::{self, Write};

use serde::Serialize;
use serde_json::{Map, Value};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
}

/// Writes records one at a time. In CSV mode a header is printed whenever
/// the set of keys changes, preceded by a blank line after the first block.
pub struct Sink<'a> {
    format: OutputFormat,
    out: &'a mut (dyn Write + Send),
    header: Option<Vec<String>>,
}

impl<'a> Sink<'a> {
    pub fn new(format: OutputFormat, out: &'a mut (dyn Write + Send)) -> Self {
        Self { format, out, header: None }
    }

    pub fn format(&self) -> OutputFormat {
        self.format
    }

    pub fn emit<T: Serialize + ?Sized>(&mut self, record: &T) -> io::Result<()> {
        let value = serde_json::to_value(record).map_err(io::Error::other)?;
        match self.format {
            OutputFormat::Json => {
                serde_json::to_writer(&mut *self.out, &value).map_err(io::Error::other)?;
                self.out.write_all(b"\n")
            }
            OutputFormat::Csv => self.emit_csv(value),
        }
    }

    fn emit_csv(&mut self, value: Value) -> io::Result<()> {
        let map = match value {
            Value::Object(m) => m,
            other => {
                let mut m = Map::new();
                m.insert("value".into(), other);
                m
            }
        };
        let keys: Vec<String> = map.keys().cloned().collect();
        let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
        if self.header.as_ref() != Some(&keys) {
            if self.header.is_some() {
                self.out.write_all(b"\n")?;
            }
            w.write_record(&keys)?;
            self.header = Some(keys);
        }
        w.write_record(map.values().map(cell))?;
        let bytes = w.into_inner().map_err(|e| io::Error::other(e.to_string()))?;
        self.out.write_all(&bytes)
    }

    pub fn flush(&mut self) -> io::Result<()> {
        self.out.flush()
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        Value::Bool(b) => b.to_string(),
        Value::Number(n) => n.to_string(),
        other => other.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn csv_blocks() {
        let mut buf = Vec::new();
        let mut s = Sink::new(OutputFormat::Csv, &mut buf);
        s.emit(&json!({"a": 1, "b": "x,y"})).unwrap();
        s.emit(&json!({"a": 2, "b": [1, 2]})).unwrap();
        s.emit(&json!({"c": null})).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "a,b\n1,\"x,y\"\n2,\"[1,2]\"\n\nc\n\"\"\n");
    }

    #[test]
    fn json_lines_keep_key_order() {
        let mut buf = Vec::new();
        let mut s = Sink::new(OutputFormat::Json, &mut buf);
        s.emit(&json!({"op": "x", "b": 1, "a": 2})).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "{\"op\":\"x\",\"b\":1,\"a\":2}\n");
    }
}
