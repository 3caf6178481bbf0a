//! Fixed-format CSV and text rendering, and all-or-nothing file writes.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use symmv_core::verify::CheckReport;
use symmv_core::Verdict;
use tempfile::NamedTempFile;

/// Twelve significant digits in scientific notation.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.11e}")
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_float).unwrap_or_default()
}

/// Builds CSV text in memory with a fixed header.
pub struct CsvTable {
    writer: csv::Writer<Vec<u8>>,
}

impl CsvTable {
    pub fn new(header: &[&str]) -> Result<Self> {
        let mut writer = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        writer.write_record(header)?;
        Ok(CsvTable { writer })
    }

    pub fn row<I, S>(&mut self, fields: I) -> Result<()>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[u8]>,
    {
        self.writer.write_record(fields)?;
        Ok(())
    }

    pub fn float_row(&mut self, values: &[f64]) -> Result<()> {
        self.row(values.iter().map(|v| fmt_float(*v)))
    }

    pub fn into_bytes(self) -> Result<Vec<u8>> {
        self.writer.into_inner().map_err(|e| anyhow::anyhow!("csv buffer: {}", e.error()))
    }
}

pub const REPORT_HEADER: [&str; 9] = ["name", "domain", "q", "k", "lhs", "rhs", "margin", "tolerance", "verdict"];

/// One row per report, in the given order.
pub fn reports_csv(reports: &[CheckReport]) -> Result<Vec<u8>> {
    let mut t = CsvTable::new(&REPORT_HEADER)?;
    for r in reports {
        t.row([
            r.name.clone(),
            r.context.domain.clone().unwrap_or_default(),
            fmt_opt(r.context.q),
            fmt_opt(r.context.k),
            fmt_float(r.lhs),
            fmt_float(r.rhs),
            fmt_float(r.margin),
            fmt_float(r.tolerance),
            r.verdict.as_str().to_string(),
        ])?;
    }
    t.into_bytes()
}

#[derive(Debug, Default, Clone, Copy, PartialEq, Eq)]
pub struct Tally {
    pub pass: usize,
    pub equality: usize,
    pub fail: usize,
    pub skipped: usize,
}

impl Tally {
    pub fn of(reports: &[CheckReport]) -> Self {
        let mut t = Tally::default();
        for r in reports {
            match r.verdict {
                Verdict::Pass => t.pass += 1,
                Verdict::EqualityCase => t.equality += 1,
                Verdict::Fail => t.fail += 1,
                Verdict::Skipped => t.skipped += 1,
            }
        }
        t
    }

    pub fn total(&self) -> usize {
        self.pass + self.equality + self.fail + self.skipped
    }
}

impl std::fmt::Display for Tally {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{} checks: {} pass, {} equality_case, {} fail, {} skipped",
            self.total(),
            self.pass,
            self.equality,
            self.fail,
            self.skipped
        )
    }
}

fn severity(v: Verdict) -> u8 {
    match v {
        Verdict::Pass => 0,
        Verdict::EqualityCase => 1,
        Verdict::Fail => 2,
        Verdict::Skipped => 3,
    }
}

/// Per-domain table with the smallest margin of each check, then every
/// fail or skipped report in full.
pub fn summary_text(reports: &[CheckReport]) -> String {
    let mut out = String::new();
    let mut domains: Vec<String> = Vec::new();
    let mut worst: BTreeMap<(usize, String), (f64, Verdict, usize)> = BTreeMap::new();
    for r in reports {
        let d = r.context.domain.clone().unwrap_or_default();
        let di = match domains.iter().position(|x| *x == d) {
            Some(i) => i,
            None => {
                domains.push(d);
                domains.len() - 1
            }
        };
        let e = worst.entry((di, r.name.clone())).or_insert((f64::INFINITY, Verdict::Pass, 0));
        e.2 += 1;
        if r.verdict != Verdict::Skipped && !(r.margin >= e.0) {
            e.0 = r.margin;
        }
        if severity(r.verdict) > severity(e.1) {
            e.1 = r.verdict;
        }
    }
    for (i, d) in domains.iter().enumerate() {
        let _ = writeln!(out, "{d}");
        for ((di, name), (m, v, n)) in &worst {
            if *di == i {
                let _ = writeln!(out, "  {name:<26} n={n:<3} min margin {:>19}  {v}", fmt_float(*m));
            }
        }
    }
    let bad: Vec<&CheckReport> =
        reports.iter().filter(|r| matches!(r.verdict, Verdict::Fail | Verdict::Skipped)).collect();
    if !bad.is_empty() {
        let _ = writeln!(out, "\nnot holding:");
        for r in bad {
            let _ = writeln!(
                out,
                "  {} {} q={} k={}: lhs {} rhs {} margin {} ({}){}",
                r.name,
                r.context.domain.as_deref().unwrap_or("-"),
                fmt_opt(r.context.q),
                fmt_opt(r.context.k),
                fmt_float(r.lhs),
                fmt_float(r.rhs),
                fmt_float(r.margin),
                r.verdict,
                r.note.as_deref().map(|n| format!(" {n}")).unwrap_or_default()
            );
        }
    }
    let _ = writeln!(out, "\n{}", Tally::of(reports));
    out
}

/// `foo.csv` → `foo.<suffix>`; `foo` → `foo.<suffix>`.
pub fn sidecar_path(path: &Path, suffix: &str) -> PathBuf {
    let stem = match path.extension() {
        Some(_) => path.with_extension(""),
        None => path.to_path_buf(),
    };
    let mut s = stem.into_os_string();
    s.push(".");
    s.push(suffix);
    PathBuf::from(s)
}

/// Files staged next to their targets and renamed into place together, so a
/// failed run leaves nothing behind.
#[derive(Default)]
pub struct AtomicWrites {
    staged: Vec<(NamedTempFile, PathBuf)>,
}

impl AtomicWrites {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn stage(&mut self, path: &Path, bytes: &[u8]) -> Result<()> {
        let dir = match path.parent() {
            Some(p) if !p.as_os_str().is_empty() => p,
            _ => Path::new("."),
        };
        let mut tmp = tempfile::Builder::new()
            .prefix(".symmv-")
            .tempfile_in(dir)
            .with_context(|| format!("cannot create a temporary file in {}", dir.display()))?;
        tmp.write_all(bytes)?;
        tmp.flush()?;
        self.staged.push((tmp, path.to_path_buf()));
        Ok(())
    }

    pub fn commit(self) -> Result<()> {
        for (tmp, path) in self.staged {
            tmp.persist(&path).with_context(|| format!("cannot write {}", path.display()))?;
        }
        Ok(())
    }
}

/// Writes `bytes` to `path` atomically, or to stdout when `path` is `None`.
pub fn emit(path: Option<&Path>, bytes: &[u8]) -> Result<()> {
    match path {
        Some(p) => {
            let mut w = AtomicWrites::new();
            w.stage(p, bytes)?;
            w.commit()
        }
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(bytes)?;
            out.flush()?;
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use symmv_core::verify::CheckContext;

    #[test]
    fn float_format_is_fixed() {
        assert_eq!(fmt_float(0.0625), "6.25000000000e-2");
        assert_eq!(fmt_float(-1.0), "-1.00000000000e0");
        assert_eq!(fmt_float(f64::NAN), "NaN");
    }

    #[test]
    fn report_rows() {
        let mut r = CheckReport::compare("max_bound", 1.0, 2.0, 0.03);
        r.context = CheckContext { domain: Some("disk:1".into()), q: Some(0.5), k: None, resolution: Some(64) };
        let text = String::from_utf8(reports_csv(&[r]).unwrap()).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "name,domain,q,k,lhs,rhs,margin,tolerance,verdict");
        assert_eq!(
            lines.next().unwrap(),
            "max_bound,disk:1,5.00000000000e-1,,1.00000000000e0,2.00000000000e0,1.00000000000e0,3.00000000000e-2,pass"
        );
    }

    #[test]
    fn sidecars() {
        assert_eq!(sidecar_path(Path::new("a/u.csv"), "meta"), PathBuf::from("a/u.meta"));
        assert_eq!(sidecar_path(Path::new("u"), "schwarz.csv"), PathBuf::from("u.schwarz.csv"));
    }

    #[test]
    fn staged_files_appear_only_on_commit() {
        let dir = tempfile::tempdir().unwrap();
        let a = dir.path().join("a.csv");
        let b = dir.path().join("b.csv");
        let mut w = AtomicWrites::new();
        w.stage(&a, b"1\n").unwrap();
        w.stage(&b, b"2\n").unwrap();
        assert!(!a.exists() && !b.exists());
        w.commit().unwrap();
        assert_eq!(std::fs::read(&a).unwrap(), b"1\n");
        assert_eq!(std::fs::read(&b).unwrap(), b"2\n");

        let c = dir.path().join("c.csv");
        let mut w = AtomicWrites::new();
        w.stage(&c, b"x").unwrap();
        drop(w);
        assert!(!c.exists());
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 2);
    }

    #[test]
    fn tally_and_summary() {
        let reports = vec![
            CheckReport::compare("a", 1.0, 2.0, 0.1),
            CheckReport::compare("a", 2.0, 1.0, 0.1),
            CheckReport::skipped("b", "no grid"),
        ];
        let t = Tally::of(&reports);
        assert_eq!((t.pass, t.fail, t.skipped), (1, 1, 1));
        let s = summary_text(&reports);
        assert!(s.contains("not holding"));
        assert!(s.contains("3 checks"));
    }
}
