//! TOML run configuration.
//!
//! ```toml
//! resolution = 128
//! q_values = [0.2, 0.5, 0.8]
//! k_values = ["q+1", 2, 3]
//! checks = ["moment_bound", "faber_krahn"]   # default: all
//!
//! [tolerances]
//! grid = 0.03
//!
//! [[domain]]
//! kind = "disk"
//! params = [1.0]
//!
//! [[domain]]
//! kind = "lshape"
//! name = "L"
//! ```
//!
//! Omitted keys keep the defaults of [`SuiteConfig`]. Every semantic error is
//! reported with the line and column of the offending value.

use std::fmt;
use std::ops::Range;
use std::path::{Path, PathBuf};

use serde::Deserialize;
use symmv_core::domain::{DomainKind, DomainSpec, MIN_RESOLUTION};
use symmv_core::verify::{CheckKind, Exponent, SuiteConfig};
use toml::Spanned;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError {
    pub path: PathBuf,
    /// 1-based; 0 when the error has no location.
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line == 0 {
            write!(f, "{}: {}", self.path.display(), self.message)
        } else {
            write!(f, "{}:{}:{}: {}", self.path.display(), self.line, self.column, self.message)
        }
    }
}

impl std::error::Error for ConfigError {}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    resolution: Option<Spanned<i64>>,
    q_values: Option<Spanned<Vec<f64>>>,
    k_values: Option<Spanned<Vec<RawExponent>>>,
    checks: Option<Spanned<Vec<String>>>,
    tolerances: Option<RawTolerances>,
    solver: Option<RawSolver>,
    inject_lhs_scale: Option<Spanned<f64>>,
    #[serde(default)]
    domain: Vec<Spanned<RawDomain>>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum RawExponent {
    Number(f64),
    Text(String),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDomain {
    kind: String,
    #[serde(default)]
    params: Vec<f64>,
    name: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTolerances {
    grid: Option<Spanned<f64>>,
    formula: Option<Spanned<f64>>,
    crossing_band: Option<Spanned<f64>>,
    ode: Option<Spanned<f64>>,
    polya_szego: Option<Spanned<f64>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSolver {
    tol: Option<Spanned<f64>>,
    linear_tol: Option<Spanned<f64>>,
    max_iter: Option<Spanned<i64>>,
}

/// Byte offset to 1-based line and column.
fn locate(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rfind('\n').map_or(before.len(), |i| before.len() - i - 1) + 1;
    (line, column)
}

struct Ctx<'a> {
    path: &'a Path,
    text: &'a str,
}

impl Ctx<'_> {
    fn error(&self, span: Option<Range<usize>>, message: impl Into<String>) -> ConfigError {
        let (line, column) = span.map_or((0, 0), |s| locate(self.text, s.start));
        ConfigError { path: self.path.to_path_buf(), line, column, message: message.into() }
    }

    fn nonnegative(&self, v: &Spanned<f64>, what: &str) -> Result<f64, ConfigError> {
        let x = *v.get_ref();
        if x.is_finite() && x >= 0.0 {
            Ok(x)
        } else {
            Err(self.error(Some(v.span()), format!("{what} must be a nonnegative number, got {x}")))
        }
    }
}

/// Parses configuration text; `path` is only used in messages.
pub fn parse_config(text: &str, path: &Path) -> Result<SuiteConfig, ConfigError> {
    let ctx = Ctx { path, text };
    let raw: RawConfig = toml::from_str(text).map_err(|e| ctx.error(e.span(), e.message().to_string()))?;
    let mut cfg = SuiteConfig::default();

    if let Some(r) = &raw.resolution {
        let v = *r.get_ref();
        if v < MIN_RESOLUTION as i64 {
            return Err(ctx.error(Some(r.span()), format!("resolution must be at least {MIN_RESOLUTION}, got {v}")));
        }
        cfg.resolution = v as usize;
    }
    if let Some(qs) = &raw.q_values {
        if qs.get_ref().is_empty() {
            return Err(ctx.error(Some(qs.span()), "q_values must not be empty"));
        }
        for &q in qs.get_ref() {
            symmv_core::check_exponent(q).map_err(|e| ctx.error(Some(qs.span()), e.to_string()))?;
        }
        cfg.q_values = qs.get_ref().clone();
    }
    if let Some(ks) = &raw.k_values {
        if ks.get_ref().is_empty() {
            return Err(ctx.error(Some(ks.span()), "k_values must not be empty"));
        }
        let mut out = Vec::new();
        for k in ks.get_ref() {
            let e = match k {
                RawExponent::Number(v) if v.is_finite() => Exponent::Value(*v),
                RawExponent::Number(v) => return Err(ctx.error(Some(ks.span()), format!("k = {v} is not finite"))),
                RawExponent::Text(s) => s
                    .parse()
                    .map_err(|_| ctx.error(Some(ks.span()), format!("k = {s:?} is neither a number nor \"q+1\"")))?,
            };
            out.push(e);
        }
        cfg.k_values = out;
    }
    for &q in &cfg.q_values {
        for k in &cfg.k_values {
            if k.resolve(q) < q + 1.0 {
                let span = raw.k_values.as_ref().map(|s| s.span());
                return Err(ctx.error(span, format!("k = {k} is below q + 1 for q = {q}")));
            }
        }
    }
    if let Some(cs) = &raw.checks {
        if cs.get_ref().is_empty() {
            return Err(ctx.error(Some(cs.span()), "checks must not be empty"));
        }
        let mut out = Vec::new();
        for name in cs.get_ref() {
            let c: CheckKind = name.parse().map_err(|_| {
                let known: Vec<&str> = CheckKind::ALL.iter().map(|c| c.name()).collect();
                ctx.error(Some(cs.span()), format!("unknown check {name:?}; expected one of {}", known.join(", ")))
            })?;
            if !out.contains(&c) {
                out.push(c);
            }
        }
        cfg.checks = out;
    }
    if let Some(t) = &raw.tolerances {
        let tol = &mut cfg.tolerances;
        for (slot, value, what) in [
            (&mut tol.grid, &t.grid, "tolerances.grid"),
            (&mut tol.formula, &t.formula, "tolerances.formula"),
            (&mut tol.crossing_band, &t.crossing_band, "tolerances.crossing_band"),
            (&mut tol.ode, &t.ode, "tolerances.ode"),
            (&mut tol.polya_szego, &t.polya_szego, "tolerances.polya_szego"),
        ] {
            if let Some(v) = value {
                *slot = ctx.nonnegative(v, what)?;
            }
        }
    }
    if let Some(s) = &raw.solver {
        for (slot, value, what) in
            [(&mut cfg.solver.tol, &s.tol, "solver.tol"), (&mut cfg.solver.linear_tol, &s.linear_tol, "solver.linear_tol")]
        {
            if let Some(v) = value {
                let x = ctx.nonnegative(v, what)?;
                if x == 0.0 {
                    return Err(ctx.error(Some(v.span()), format!("{what} must be positive")));
                }
                *slot = x;
            }
        }
        if let Some(m) = &s.max_iter {
            if *m.get_ref() < 1 {
                return Err(ctx.error(Some(m.span()), "solver.max_iter must be at least 1"));
            }
            cfg.solver.max_iter = *m.get_ref() as usize;
        }
    }
    if let Some(s) = &raw.inject_lhs_scale {
        let x = *s.get_ref();
        if !(x.is_finite() && x > 0.0) {
            return Err(ctx.error(Some(s.span()), "inject_lhs_scale must be a positive number"));
        }
        cfg.inject_lhs_scale = Some(x);
    }
    if !raw.domain.is_empty() {
        let mut out = Vec::new();
        for d in &raw.domain {
            let span = Some(d.span());
            let rd = d.get_ref();
            let kind: DomainKind = rd.kind.parse().map_err(|e: symmv_core::Error| ctx.error(span.clone(), e.to_string()))?;
            let mut spec = DomainSpec::from_params(kind, &rd.params).map_err(|e| ctx.error(span.clone(), e.to_string()))?;
            if let Some(n) = &rd.name {
                spec = spec.with_name(n.clone());
            }
            out.push(spec);
        }
        cfg.domains = out;
    }
    cfg.validate().map_err(|e| ctx.error(None, e.to_string()))?;
    Ok(cfg)
}

/// Reads and parses a configuration file.
pub fn load_config(path: &Path) -> Result<SuiteConfig, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|e| ConfigError {
        path: path.to_path_buf(),
        line: 0,
        column: 0,
        message: format!("cannot read config: {e}"),
    })?;
    parse_config(&text, path)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<SuiteConfig, ConfigError> {
        parse_config(text, Path::new("test.toml"))
    }

    #[test]
    fn empty_text_gives_defaults() {
        assert_eq!(parse("").unwrap(), SuiteConfig::default());
    }

    #[test]
    fn full_config() {
        let cfg = parse(
            r#"
resolution = 64
q_values = [0.3]
k_values = ["q+1", 2.5]
checks = ["faber_krahn", "max_bound"]
inject_lhs_scale = 2.0

[tolerances]
grid = 0.05

[solver]
tol = 1e-9

[[domain]]
kind = "ellipse"
params = [2.0, 1.0]

[[domain]]
kind = "lshape"
name = "L"
"#,
        )
        .unwrap();
        assert_eq!(cfg.resolution, 64);
        assert_eq!(cfg.q_values, vec![0.3]);
        assert_eq!(cfg.k_values, vec![Exponent::QPlusOne, Exponent::Value(2.5)]);
        assert_eq!(cfg.checks, vec![CheckKind::FaberKrahn, CheckKind::MaxBound]);
        assert_eq!(cfg.tolerances.grid, 0.05);
        assert_eq!(cfg.solver.tol, 1e-9);
        assert_eq!(cfg.inject_lhs_scale, Some(2.0));
        assert_eq!(cfg.domains.len(), 2);
        assert_eq!(cfg.domains[1].label(), "L");
    }

    #[test]
    fn errors_carry_line_numbers() {
        let e = parse("resolution = 64\nq_values = [0.5, 1.5]\n").unwrap_err();
        assert_eq!(e.line, 2);
        assert!(e.message.contains("guard band"), "{e}");

        let e = parse("resolution = 64\n\n[[domain]]\nkind = \"hexagon\"\n").unwrap_err();
        assert_eq!(e.line, 3);

        let e = parse("resolution = 8\n").unwrap_err();
        assert_eq!((e.line, e.column), (1, 14));

        let e = parse("q_values = [0.5\n").unwrap_err();
        assert!(e.line >= 1);

        let e = parse("colour = 1\n").unwrap_err();
        assert_eq!(e.line, 1);
        assert!(e.to_string().starts_with("test.toml:1:"));
    }

    #[test]
    fn k_below_q_plus_one_is_rejected() {
        let e = parse("q_values = [0.5]\nk_values = [1.2]\n").unwrap_err();
        assert_eq!(e.line, 2);
    }

    #[test]
    fn locate_counts_from_one() {
        assert_eq!(locate("ab\ncd", 0), (1, 1));
        assert_eq!(locate("ab\ncd", 4), (2, 2));
    }
}
