//! Report assembly and atomic output.

use std::fmt::Write as _;
use std::io::{self, Write};
use std::path::Path;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Text,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Text => "txt",
        }
    }
}

/// A header, summary lines, one table, and the invariants that failed.
/// The first column of every row names the check it records.
#[derive(Debug, Default)]
pub struct Report {
    pub summary: Vec<(String, String)>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
    pub violations: Vec<String>,
}

impl Report {
    pub fn new(columns: &[&'static str]) -> Self {
        Report { columns: columns.to_vec(), ..Report::default() }
    }

    pub fn note(&mut self, key: &str, value: impl ToString) {
        self.summary.push((key.to_string(), value.to_string()));
    }

    pub fn row(&mut self, cells: Vec<String>) {
        debug_assert_eq!(cells.len(), self.columns.len());
        self.rows.push(cells);
    }

    /// Records `name` as violated unless `ok`.
    pub fn require(&mut self, ok: bool, name: impl Into<String>) {
        let name = name.into();
        if !ok && !self.violations.contains(&name) {
            self.violations.push(name);
        }
    }

    pub fn render(&self, header: &str, format: Format) -> String {
        let mut out = String::new();
        writeln!(out, "{header}").unwrap();
        let status = if self.violations.is_empty() { "ok".to_string() } else { self.violations.join("; ") };
        match format {
            Format::Csv => {
                for (k, v) in &self.summary {
                    writeln!(out, "# {k}: {v}").unwrap();
                }
                writeln!(out, "# invariants: {status}").unwrap();
                writeln!(out, "{}", self.columns.join(",")).unwrap();
                for r in &self.rows {
                    writeln!(out, "{}", r.join(",")).unwrap();
                }
            }
            Format::Text => {
                for (k, v) in &self.summary {
                    writeln!(out, "{k}: {v}").unwrap();
                }
                writeln!(out, "invariants: {status}").unwrap();
                for r in &self.rows {
                    let cells: Vec<String> = self.columns.iter().zip(r).map(|(c, v)| format!("{c}={v}")).collect();
                    writeln!(out, "{}", cells.join(" ")).unwrap();
                }
            }
        }
        out
    }
}

/// Writes through a temporary file in the target directory, then renames.
pub fn write_atomic(path: &Path, contents: &str) -> io::Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    std::fs::create_dir_all(dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

/// Fixed-precision float so reports compare bytewise.
pub fn f(x: f64) -> String {
    format!("{x:.6}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn render_and_violations() {
        let mut r = Report::new(&["check", "value"]);
        r.note("instances", 3);
        r.row(vec!["demo".into(), f(0.5)]);
        r.require(true, "fine");
        r.require(false, "broken");
        r.require(false, "broken");
        let csv = r.render("# h", Format::Csv);
        assert_eq!(csv, "# h\n# instances: 3\n# invariants: broken\ncheck,value\ndemo,0.500000\n");
        let text = r.render("# h", Format::Text);
        assert!(text.ends_with("check=demo value=0.500000\n"));
    }

    #[test]
    fn atomic_write_replaces() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("sub/out.csv");
        write_atomic(&p, "a").unwrap();
        write_atomic(&p, "b").unwrap();
        assert_eq!(std::fs::read_to_string(&p).unwrap(), "b");
        assert_eq!(std::fs::read_dir(p.parent().unwrap()).unwrap().count(), 1);
    }
}
