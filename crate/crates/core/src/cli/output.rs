//! CSV/JSON rendering and the single collector that writes a run's files.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::spectra::BranchEigenvalue;
use crate::TOOL_VERSION;

pub const SPECTRUM_COLUMNS: [&str; 9] = [
    "q", "p0", "g", "s", "re_lambda", "im_lambda", "abs_mu", "residual", "method",
];
pub const PSEUDOSPECTRA_COLUMNS: [&str; 4] = ["re_z", "im_z", "resolvent_norm", "converged"];
pub const ASYMPTOTICS_COLUMNS: [&str; 7] = [
    "g",
    "re_lambda_min",
    "im_lambda_min",
    "re_scaled",
    "im_scaled",
    "target_re",
    "target_im",
];

/// 17 significant digits, enough to round-trip every `f64`.
pub fn num(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        format!("{x:.16e}")
    }
}

/// Provenance lines written as `#` comments above the column header.
#[derive(Debug, Clone)]
pub struct Provenance {
    pub config_json: String,
    pub caveat: Option<String>,
}

impl Provenance {
    pub fn new<C: Serialize>(config: &C, caveat: Option<&str>) -> Self {
        Self {
            config_json: serde_json::to_string(config).expect("config serializes"),
            caveat: caveat.map(str::to_string),
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn render(&self, prov: &Provenance) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "# tool: {TOOL_VERSION}");
        let _ = writeln!(s, "# config: {}", prov.config_json);
        if let Some(c) = &prov.caveat {
            let _ = writeln!(s, "# caveat: {c}");
        }
        let _ = writeln!(s, "{}", self.columns.join(","));
        for r in &self.rows {
            let _ = writeln!(s, "{}", r.join(","));
        }
        s
    }
}

pub fn spectrum_table(branches: &[BranchEigenvalue]) -> Table {
    let mut t = Table::new(&SPECTRUM_COLUMNS);
    for b in branches {
        t.push(vec![
            num(b.q),
            num(b.p0),
            num(b.g),
            b.s.to_string(),
            num(b.lambda.re),
            num(b.lambda.im),
            num(b.mu.norm()),
            num(b.residual),
            b.method.as_str().to_string(),
        ]);
    }
    t
}

/// Files of one run, held in memory until [`RunOutputs::flush`].
#[derive(Debug)]
pub struct RunOutputs {
    dir: PathBuf,
    files: Vec<(String, String)>,
}

impl RunOutputs {
    pub fn new(dir: &Path) -> Self {
        Self {
            dir: dir.to_path_buf(),
            files: Vec::new(),
        }
    }

    pub fn add(&mut self, name: &str, contents: String) {
        self.files.push((name.to_string(), contents));
    }

    pub fn add_csv(&mut self, name: &str, table: &Table, prov: &Provenance) {
        self.add(name, table.render(prov));
    }

    pub fn add_json<T: Serialize>(&mut self, name: &str, value: &T) {
        let mut text = serde_json::to_string_pretty(value).expect("summary serializes");
        text.push('\n');
        self.add(name, text);
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.files.iter().map(|(n, _)| n.as_str())
    }

    pub fn flush(self) -> std::io::Result<Vec<PathBuf>> {
        std::fs::create_dir_all(&self.dir)?;
        let mut written = Vec::with_capacity(self.files.len());
        for (name, contents) in self.files {
            let path = self.dir.join(name);
            std::fs::write(&path, contents)?;
            written.push(path);
        }
        Ok(written)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_round_trip() {
        for x in [0.1, -1.0 / 3.0, 1e-300, 6.02214076e23, std::f64::consts::PI] {
            let s = num(x);
            assert_eq!(s.parse::<f64>().unwrap(), x);
        }
        assert_eq!(num(1.5), "1.5000000000000000e0");
        assert_eq!(num(f64::NAN), "nan");
    }

    #[test]
    fn header_precedes_columns() {
        let mut t = Table::new(&["a", "b"]);
        t.push(vec!["1".into(), "2".into()]);
        let prov = Provenance::new(&serde_json::json!({"g": 1.0}), Some("subset"));
        let text = t.render(&prov);
        let lines: Vec<&str> = text.lines().collect();
        assert!(lines[0].starts_with("# tool: btfloquet"));
        assert_eq!(lines[1], "# config: {\"g\":1.0}");
        assert_eq!(lines[2], "# caveat: subset");
        assert_eq!(&lines[3..], ["a,b", "1,2"]);
    }
}
