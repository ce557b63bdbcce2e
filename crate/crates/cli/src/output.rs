//! Output with a metadata header, written to stdout or a file.

use std::fmt;
use std::path::Path;

use serde_json::{json, Value};

/// An error carrying a specific exit code (anything else exits 2).
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    msg: String,
}

impl Failure {
    pub fn new(code: u8, msg: impl Into<String>) -> Self {
        Self { code, msg: msg.into() }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.msg)
    }
}

impl std::error::Error for Failure {}

pub struct Emitter {
    meta: Value,
}

impl Emitter {
    pub fn new(command: &str, params: Value) -> Self {
        Self {
            meta: json!({
                "tool": "monopath",
                "version": env!("CARGO_PKG_VERSION"),
                "command": command,
                "params": params,
            }),
        }
    }

    fn header_line(&self) -> String {
        format!("# {}\n", serde_json::to_string(&self.meta).expect("plain json"))
    }

    fn write(text: &str, out: Option<&Path>) -> anyhow::Result<()> {
        match out {
            Some(p) => std::fs::write(p, text).map_err(|e| anyhow::anyhow!("writing {}: {e}", p.display())),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }

    /// Objects get a `meta` member; anything else is wrapped as `result`.
    pub fn json(&self, body: Value, out: Option<&Path>) -> anyhow::Result<()> {
        let doc = match body {
            Value::Object(mut m) => {
                m.insert("meta".into(), self.meta.clone());
                Value::Object(m)
            }
            other => json!({ "meta": self.meta, "result": other }),
        };
        Self::write(&(serde_json::to_string_pretty(&doc)? + "\n"), out)
    }

    /// Comment lines (`# ...`) followed by the table.
    pub fn csv(&self, notes: &[String], table: &str, out: Option<&Path>) -> anyhow::Result<()> {
        let mut text = self.header_line();
        for n in notes {
            text.push_str(&format!("# {n}\n"));
        }
        text.push_str(table);
        Self::write(&text, out)
    }

    pub fn text(&self, body: &str, out: Option<&Path>) -> anyhow::Result<()> {
        Self::write(&(self.header_line() + body), out)
    }
}
