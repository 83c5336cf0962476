//! Provenance-stamped CSV output.

use std::fmt::Write as _;
use std::path::Path;

use quasifree::ModelSpec;

/// Floats at 12 significant digits.
pub fn num(x: f64) -> String {
    format!("{x:.11e}")
}

pub struct Report {
    text: String,
}

impl Report {
    pub fn new(verb: &str, model: Option<&ModelSpec>, tol: f64, extra: &[(&str, String)]) -> Self {
        let mut text = String::new();
        writeln!(text, "# qfree {}", env!("CARGO_PKG_VERSION")).unwrap();
        writeln!(text, "# verb: {verb}").unwrap();
        if let Some(m) = model {
            writeln!(text, "# model-hash: {}", m.hash()).unwrap();
            for line in m.canonical().lines() {
                writeln!(text, "# model: {line}").unwrap();
            }
        }
        writeln!(text, "# tol: {tol:e}").unwrap();
        for (k, v) in extra {
            writeln!(text, "# {k}: {v}").unwrap();
        }
        Self { text }
    }

    pub fn line(&mut self, s: impl AsRef<str>) {
        self.text.push_str(s.as_ref());
        self.text.push('\n');
    }

    pub fn row(&mut self, cells: &[String]) {
        self.line(cells.join(","));
    }

    pub fn emit(&self, out: Option<&Path>) -> std::io::Result<()> {
        match out {
            Some(p) => std::fs::write(p, &self.text),
            None => {
                use std::io::Write;
                std::io::stdout().lock().write_all(self.text.as_bytes())
            }
        }
    }
}
