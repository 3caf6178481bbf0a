//! Checks of the comparison inequalities on concrete instances, each
//! reported as a signed margin with a verdict.
//!
//! Grid quantities are always compared against the radial solution on the
//! ball of equal measure, so discretization error enters one side only.

mod checks;
mod crossing;
mod level_set;
mod report;
mod suite;

use alloc::string::String;


use crate::domain::{schwarz_radius, Grid};
use crate::elliptic::{compute_sq, ScalarField, SolveDiagnostics, SublinearOptions, SublinearSolver};
use crate::error::Result;
use crate::radial::{solve_ball_sublinear, RadialSolution};

pub use checks::{
    check_ball_comparison, check_faber_krahn, check_max_bound, check_moment_bound, check_payne_rayner,
    check_polya_szego, payne_rayner_report,
};
pub use crossing::{check_chiti_crossing, CrossingReport};
pub use level_set::{check_ode_inequality, check_ode_inequality_binned, DEFAULT_ODE_BINS};
pub use report::{CheckContext, CheckReport, Verdict};
pub use suite::{domain_failure_reports, run_domain, run_suite, CheckKind, Exponent, PreparedDomain, SuiteConfig};

/// Allowances for each kind of comparison.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Relative, grid value against radial value.
    pub grid: f64,
    /// Relative, identities that hold up to rounding.
    pub formula: f64,
    /// Fraction of `max z*` below which profile differences count as zero.
    pub crossing_band: f64,
    /// Relative, per bin, for the level-set differential inequality.
    pub ode: f64,
    /// Relative deficit allowed in the symmetrized energy comparison.
    pub polya_szego: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { grid: 0.03, formula: 1e-8, crossing_band: 0.005, ode: 1e-3, polya_szego: 0.05 }
    }
}

/// Steps of the fine measure-variable profile of ball minimizers.
pub const PROFILE_STEPS: usize = 8192;

/// A solved `(domain, q)` pair and its ball counterpart.
#[derive(Debug, Clone)]
pub struct Instance<'g> {
    pub grid: &'g Grid,
    pub q: f64,
    pub u: ScalarField<'g>,
    pub diagnostics: SolveDiagnostics,
    /// `S_q(Ω)` from the grid solution.
    pub sq_omega: f64,
    /// `R*` from the exact area of the domain.
    pub ball_radius: f64,
    /// Radial solution on `B_{R*}`.
    pub ball: RadialSolution,
    /// `S_q(Ω*)` from the radial solution.
    pub sq_star: f64,
}

impl<'g> Instance<'g> {
    pub fn new(solver: &SublinearSolver<'g>, q: f64) -> Result<Self> {
        let grid = solver.grid();
        let (u, diagnostics) = solver.solve(q)?;
        let sq_omega = compute_sq(&u, q)?;
        let ball_radius = schwarz_radius(grid.domain_area(), 2)?;
        let ball = solve_ball_sublinear(2, ball_radius, q)?;
        let sq_star = ball.sq();
        Ok(Instance { grid, q, u, diagnostics, sq_omega, ball_radius, ball, sq_star })
    }

    /// Solves from scratch with `options`.
    pub fn solve(grid: &'g Grid, q: f64, options: SublinearOptions) -> Result<Self> {
        let solver = SublinearSolver::new(grid, options)?;
        Self::new(&solver, q)
    }

    pub fn context(&self, k: Option<f64>) -> CheckContext {
        CheckContext {
            domain: Some(self.label()),
            q: Some(self.q),
            k,
            resolution: Some(self.grid.resolution()),
        }
    }

    pub fn label(&self) -> String {
        self.grid.spec().label()
    }

    /// `u / ‖u‖_{q+1}`, the minimizer with unit norm.
    pub fn normalized(&self) -> ScalarField<'g> {
        let norm = crate::elliptic::lp_norm(&self.u, self.q + 1.0);
        self.u.scaled(1.0 / norm)
    }
}
