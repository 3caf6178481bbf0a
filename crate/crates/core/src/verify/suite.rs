use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use super::checks::{
    check_ball_comparison, check_faber_krahn, check_max_bound, check_moment_bound, check_polya_szego,
    payne_rayner_report,
};
use super::{check_chiti_crossing, check_ode_inequality, CheckContext, CheckReport, Instance, Tolerances};
use crate::domain::{build_grid, DomainSpec, Grid, MIN_RESOLUTION};
use crate::elliptic::{SublinearOptions, SublinearSolver};
use crate::error::{Error, Result};
use crate::rearrange::{supersampled_rearrangement, DEFAULT_SUBDIVISIONS};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CheckKind {
    MomentBound,
    BallComparison,
    MaxBound,
    FaberKrahn,
    LevelSetOde,
    ChitiCrossing,
    PayneRayner,
    PolyaSzego,
}

impl CheckKind {
    pub const ALL: [CheckKind; 8] = [
        CheckKind::MomentBound,
        CheckKind::BallComparison,
        CheckKind::MaxBound,
        CheckKind::FaberKrahn,
        CheckKind::LevelSetOde,
        CheckKind::ChitiCrossing,
        CheckKind::PayneRayner,
        CheckKind::PolyaSzego,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CheckKind::MomentBound => "moment_bound",
            CheckKind::BallComparison => "ball_comparison",
            CheckKind::MaxBound => "max_bound",
            CheckKind::FaberKrahn => "faber_krahn",
            CheckKind::LevelSetOde => "level_set_ode",
            CheckKind::ChitiCrossing => "chiti_crossing",
            CheckKind::PayneRayner => "payne_rayner",
            CheckKind::PolyaSzego => "polya_szego",
        }
    }
}

impl fmt::Display for CheckKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CheckKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        CheckKind::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or(Error::InvalidArgument("unknown check name"))
    }
}

/// A moment exponent, possibly tied to `q`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Exponent {
    QPlusOne,
    Value(f64),
}

impl Exponent {
    pub fn resolve(self, q: f64) -> f64 {
        match self {
            Exponent::QPlusOne => q + 1.0,
            Exponent::Value(k) => k,
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::QPlusOne => f.write_str("q+1"),
            Exponent::Value(k) => write!(f, "{k}"),
        }
    }
}

impl FromStr for Exponent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if t == "q+1" || t == "1+q" {
            return Ok(Exponent::QPlusOne);
        }
        t.parse::<f64>()
            .ok()
            .filter(|k| k.is_finite())
            .map(Exponent::Value)
            .ok_or(Error::InvalidArgument("k must be a number or q+1"))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteConfig {
    pub domains: Vec<DomainSpec>,
    pub q_values: Vec<f64>,
    pub k_values: Vec<Exponent>,
    pub resolution: usize,
    pub checks: Vec<CheckKind>,
    pub tolerances: Tolerances,
    pub solver: SublinearOptions,
    /// Test hook: multiplies every report's left side before classification.
    pub inject_lhs_scale: Option<f64>,
}

impl Default for SuiteConfig {
    /// Disk, unit square and L-shape; `q ∈ {0.2, 0.5, 0.8}`; `k ∈ {q+1, 2, 3}`.
    fn default() -> Self {
        let domains = vec![
            DomainSpec::from_params(crate::domain::DomainKind::Disk, &[1.0]).expect("valid disk"),
            DomainSpec::from_params(crate::domain::DomainKind::Rectangle, &[1.0]).expect("valid square"),
            DomainSpec::from_params(crate::domain::DomainKind::LShape, &[1.0]).expect("valid L-shape"),
        ];
        SuiteConfig {
            domains,
            q_values: vec![0.2, 0.5, 0.8],
            k_values: vec![Exponent::QPlusOne, Exponent::Value(2.0), Exponent::Value(3.0)],
            resolution: 128,
            checks: CheckKind::ALL.to_vec(),
            tolerances: Tolerances::default(),
            solver: SublinearOptions::default(),
            inject_lhs_scale: None,
        }
    }
}

impl SuiteConfig {
    pub fn validate(&self) -> Result<()> {
        for &q in &self.q_values {
            crate::check_exponent(q)?;
            for k in &self.k_values {
                let kv = k.resolve(q);
                if !(kv >= q + 1.0) {
                    return Err(Error::InvalidArgument("every k must be at least q + 1"));
                }
            }
        }
        if self.resolution < MIN_RESOLUTION {
            return Err(Error::InvalidResolution(self.resolution));
        }
        let t = &self.tolerances;
        if [t.grid, t.formula, t.crossing_band, t.ode, t.polya_szego].iter().any(|v| !(*v >= 0.0)) {
            return Err(Error::InvalidArgument("tolerances must be nonnegative"));
        }
        if let Some(s) = self.inject_lhs_scale {
            if !(s.is_finite() && s > 0.0) {
                return Err(Error::InvalidArgument("inject_lhs_scale must be positive"));
            }
        }
        Ok(())
    }

    fn has(&self, kind: CheckKind) -> bool {
        self.checks.contains(&kind)
    }
}

fn apply_injection(reports: &mut [CheckReport], scale: Option<f64>) {
    if let Some(f) = scale {
        reports.iter_mut().for_each(|r| r.inflate_lhs(f));
    }
}

fn skipped(name: &str, ctx: CheckContext, err: &Error) -> CheckReport {
    CheckReport::skipped(name, err.to_string()).with_context(ctx)
}

/// Per-domain state shared by all exponents: the grid solver with its torsion
/// function and first eigenpair.
#[derive(Debug)]
pub struct PreparedDomain<'g> {
    grid: &'g Grid,
    solver: SublinearSolver<'g>,
    config: &'g SuiteConfig,
}

impl<'g> PreparedDomain<'g> {
    pub fn new(grid: &'g Grid, config: &'g SuiteConfig) -> Result<Self> {
        let solver = SublinearSolver::new(grid, config.solver.clone())?;
        Ok(PreparedDomain { grid, solver, config })
    }

    pub fn grid(&self) -> &'g Grid {
        self.grid
    }

    /// Checks that do not depend on `q`.
    pub fn domain_reports(&self) -> Vec<CheckReport> {
        let mut out = Vec::new();
        if self.config.has(CheckKind::PayneRayner) {
            let ctx = CheckContext {
                domain: Some(self.grid.spec().label()),
                q: None,
                k: None,
                resolution: Some(self.grid.resolution()),
            };
            let phi = self.solver.phi1();
            out.push(payne_rayner_report(self.solver.lambda1(), &phi, &self.config.tolerances).with_context(ctx));
        }
        apply_injection(&mut out, self.config.inject_lhs_scale);
        out
    }

    /// Every `q`-dependent check at one exponent, in configured order.
    pub fn q_reports(&self, q: f64) -> Vec<CheckReport> {
        let cfg = self.config;
        let tol = &cfg.tolerances;
        let ks: Vec<f64> = cfg.k_values.iter().map(|k| k.resolve(q)).collect();
        let mut out = Vec::new();
        let inst = match Instance::new(&self.solver, q) {
            Ok(i) => i,
            Err(e) => {
                let ctx = CheckContext {
                    domain: Some(self.grid.spec().label()),
                    q: Some(q),
                    k: None,
                    resolution: Some(self.grid.resolution()),
                };
                for kind in cfg.checks.iter().filter(|c| **c != CheckKind::PayneRayner) {
                    out.push(skipped(kind.name(), ctx.clone(), &e));
                }
                return out;
            }
        };
        for &kind in &cfg.checks {
            match kind {
                CheckKind::PayneRayner => {}
                CheckKind::MomentBound | CheckKind::BallComparison => {
                    for &k in &ks {
                        let r = if kind == CheckKind::MomentBound {
                            check_moment_bound(&inst, k, tol)
                        } else {
                            check_ball_comparison(&inst, k, tol)
                        };
                        match r {
                            Ok(rs) => out.extend(rs),
                            Err(e) => out.push(skipped(kind.name(), inst.context(Some(k)), &e)),
                        }
                    }
                }
                CheckKind::ChitiCrossing => match check_chiti_crossing(&inst, &ks, tol) {
                    Ok((_, rs)) => out.extend(rs),
                    Err(e) => out.push(skipped(kind.name(), inst.context(None), &e)),
                },
                CheckKind::MaxBound | CheckKind::FaberKrahn | CheckKind::PolyaSzego | CheckKind::LevelSetOde => {
                    let r = match kind {
                        CheckKind::MaxBound => check_max_bound(&inst, tol),
                        CheckKind::FaberKrahn => check_faber_krahn(&inst, tol),
                        CheckKind::PolyaSzego => check_polya_szego(&inst, tol),
                        _ => level_set_report(&inst, tol),
                    };
                    out.push(r.unwrap_or_else(|e| skipped(kind.name(), inst.context(None), &e)));
                }
            }
        }
        apply_injection(&mut out, cfg.inject_lhs_scale);
        out
    }
}

/// The level-set inequality on the supersampled profile of `u / ‖u‖_{q+1}`.
fn level_set_report(inst: &Instance<'_>, tol: &Tolerances) -> Result<CheckReport> {
    let profile = supersampled_rearrangement(&inst.normalized(), DEFAULT_SUBDIVISIONS)?;
    Ok(check_ode_inequality(&profile, inst.sq_omega, inst.q, 2, tol.ode)?.with_context(inst.context(None)))
}

/// Skipped reports standing in for a domain that could not be set up.
pub fn domain_failure_reports(spec: &DomainSpec, config: &SuiteConfig, err: &Error) -> Vec<CheckReport> {
    let ctx = CheckContext {
        domain: Some(spec.label()),
        q: None,
        k: None,
        resolution: Some(config.resolution),
    };
    config
        .checks
        .iter()
        .map(|c| skipped(c.name(), ctx.clone(), err).with_note(format!("domain setup failed: {err}")))
        .collect()
}

/// All configured checks, ordered by domain, then `q`, then check, then `k`.
/// Individual failures become skipped reports.
pub fn run_suite(config: &SuiteConfig) -> Result<Vec<CheckReport>> {
    config.validate()?;
    let mut out = Vec::new();
    for spec in &config.domains {
        out.extend(run_domain(spec, config));
    }
    Ok(out)
}

/// Reports for one domain, sequentially over `q`.
pub fn run_domain(spec: &DomainSpec, config: &SuiteConfig) -> Vec<CheckReport> {
    let grid = match build_grid(spec, config.resolution) {
        Ok(g) => g,
        Err(e) => return domain_failure_reports(spec, config, &e),
    };
    let prepared = match PreparedDomain::new(&grid, config) {
        Ok(p) => p,
        Err(e) => return domain_failure_reports(spec, config, &e),
    };
    let mut out = prepared.domain_reports();
    for &q in &config.q_values {
        out.extend(prepared.q_reports(q));
    }
    out
}
