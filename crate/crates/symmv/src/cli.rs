use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use symmv_core::verify::Exponent;
use symmv_core::DomainSpec;

#[derive(Debug, Parser)]
#[command(name = "symmv", version, about = "Sublinear Dirichlet solves, Schwarz symmetrization and inequality checks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve -Δu = u^q on one domain; writes (x, y, u) and a .meta sidecar.
    Solve(CommonArgs),
    /// Run the inequality checks; exit 1 if any check fails.
    Verify(CommonArgs),
    /// Scan one parameter and tabulate max u, S_q and the volume bound.
    Sweep(SweepArgs),
    /// Solve, then write f* as (measure, value) and f^⋆ as (radius, value).
    Rearrange(CommonArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Summary,
}

#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// TOML run configuration; flags override its values.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output file; stdout for verify and sweep when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Domain as kind:p0,p1,... (disk:1, rectangle:2,1, lshape:1, ellipse:2,1, annulus:0.5,1); repeatable.
    #[arg(long, value_parser = parse_domain)]
    pub domain: Vec<DomainSpec>,
    /// Exponent q in [0.01, 0.99]; comma separated or repeated.
    #[arg(long, value_delimiter = ',')]
    pub q: Vec<f64>,
    /// Moment exponents k >= q+1, numbers or "q+1".
    #[arg(long, value_delimiter = ',', value_parser = parse_exponent)]
    pub k: Vec<Exponent>,
    /// Cells across the longer side of the bounding box.
    #[arg(long)]
    pub resolution: Option<usize>,
    /// verify: relative grid-vs-radial allowance. Other commands: bracket gap of the monotone iteration.
    #[arg(long)]
    pub tolerance: Option<f64>,
    /// Seed for random generators; no subcommand currently draws random numbers.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// verify only: full CSV or a per-domain summary.
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepParam {
    Q,
    Resolution,
    #[value(name = "domain_scale", alias = "domain-scale")]
    DomainScale,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Parameter to vary.
    #[arg(long, value_enum)]
    pub param: SweepParam,
    /// start:stop:count (inclusive, evenly spaced) or a comma-separated list.
    #[arg(long, allow_hyphen_values = true)]
    pub range: String,
}

fn parse_domain(s: &str) -> Result<DomainSpec, String> {
    s.parse().map_err(|e: symmv_core::Error| e.to_string())
}

fn parse_exponent(s: &str) -> Result<Exponent, String> {
    s.parse().map_err(|e: symmv_core::Error| e.to_string())
}

/// Values of a sweep range.
pub fn parse_range(s: &str) -> Result<Vec<f64>, String> {
    let s = s.trim();
    if s.is_empty() {
        return Err("empty range".into());
    }
    let num = |t: &str| -> Result<f64, String> {
        let v: f64 = t.trim().parse().map_err(|_| format!("{t:?} is not a number"))?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(format!("{t:?} is not finite"))
        }
    };
    let parts: Vec<&str> = s.split(':').collect();
    match parts.as_slice() {
        [single] => single.split(',').filter(|t| !t.trim().is_empty()).map(num).collect::<Result<Vec<_>, _>>().and_then(
            |v| if v.is_empty() { Err("empty range".into()) } else { Ok(v) },
        ),
        [a, b, n] => {
            let (a, b) = (num(a)?, num(b)?);
            let n: usize = n.trim().parse().map_err(|_| format!("{n:?} is not a count"))?;
            match n {
                0 => Err("empty range".into()),
                1 if a == b => Ok(vec![a]),
                1 => Err("a one-point range needs start = stop".into()),
                _ => Ok((0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()),
            }
        }
        _ => Err("range must be start:stop:count or a comma-separated list".into()),
    }
}
