use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_traits::Float;

use super::{CheckReport, Instance, Tolerances};
use crate::domain::Grid;
use crate::elliptic::{dirichlet_energy, lp_norm, max_field, solve_first_eigen, ScalarField};
use crate::error::Result;
use crate::radial::{sigma1, sigma2, volume_max_bound};
use crate::rearrange::{decreasing_rearrangement, profile_energy};

fn grid_power_integral(u: &ScalarField<'_>, k: f64) -> f64 {
    u.values().iter().map(|v| v.powf(k)).sum::<f64>() * u.grid().cell_measure()
}

fn is_identity_exponent(q: f64, k: f64) -> bool {
    (k - (q + 1.0)).abs() <= 1e-12
}

/// `∫u^k ≤ C ‖u‖^{σ₁}_{q+1}` and `max u ≤ C' ‖u‖^{σ₂}_{q+1}` with constants
/// taken from the ball solution, so both are equalities on balls.
pub fn check_moment_bound(inst: &Instance<'_>, k: f64, tol: &Tolerances) -> Result<Vec<CheckReport>> {
    let q = inst.q;
    let s1 = sigma1(q, k, 2)?;
    let s2 = sigma2(q, 2)?;
    let h = &inst.ball;
    let h_norm = h.lp_norm(q + 1.0);
    let u_norm = lp_norm(&inst.u, q + 1.0);

    let lhs = grid_power_integral(&inst.u, k);
    let rhs = h.integral_power(k) / h_norm.powf(s1) * u_norm.powf(s1);
    let t = if is_identity_exponent(q, k) { tol.formula } else { tol.grid };
    let integral = CheckReport::compare_scaled("moment_bound_integral", lhs, rhs, rhs, t);

    let lhs = max_field(&inst.u);
    let rhs = h.max_value() / h_norm.powf(s2) * u_norm.powf(s2);
    let max = CheckReport::compare_scaled("moment_bound_max", lhs, rhs, rhs, tol.grid);

    let ctx = inst.context(Some(k));
    Ok(vec![integral.with_context(ctx.clone()), max.with_context(ctx)])
}

/// `∫_Ω u^k ≤ ∫_{Ω*} h^k` and `max u ≤ max h`.
pub fn check_ball_comparison(inst: &Instance<'_>, k: f64, tol: &Tolerances) -> Result<Vec<CheckReport>> {
    let h = &inst.ball;
    let lhs = grid_power_integral(&inst.u, k);
    let rhs = h.integral_power(k);
    let integral = CheckReport::compare_scaled("ball_comparison_integral", lhs, rhs, rhs, tol.grid);
    let lhs = max_field(&inst.u);
    let rhs = h.max_value();
    let max = CheckReport::compare_scaled("ball_comparison_max", lhs, rhs, rhs, tol.grid);
    let ctx = inst.context(Some(k));
    Ok(vec![integral.with_context(ctx.clone()), max.with_context(ctx)])
}

/// `max u` against the closed-form bound from the domain's measure.
pub fn check_max_bound(inst: &Instance<'_>, tol: &Tolerances) -> Result<CheckReport> {
    let lhs = max_field(&inst.u);
    let rhs = volume_max_bound(inst.grid.domain_area(), 2, inst.q)?;
    Ok(CheckReport::compare_scaled("max_bound", lhs, rhs, rhs, tol.grid).with_context(inst.context(None)))
}

/// `S_q(Ω*) ≤ S_q(Ω)`, margin relative to `S_q(Ω*)`.
pub fn check_faber_krahn(inst: &Instance<'_>, tol: &Tolerances) -> Result<CheckReport> {
    let (lhs, rhs) = (inst.sq_star, inst.sq_omega);
    Ok(CheckReport::compare_scaled("faber_krahn", lhs, rhs, lhs, tol.grid).with_context(inst.context(None)))
}

/// Energy of the Schwarz symmetrization against the grid energy of `u`.
pub fn check_polya_szego(inst: &Instance<'_>, tol: &Tolerances) -> Result<CheckReport> {
    let rhs = dirichlet_energy(&inst.u);
    let lhs = profile_energy(&decreasing_rearrangement(&inst.u)?, 2)?;
    Ok(CheckReport::compare_scaled("polya_szego", lhs, rhs, rhs, tol.polya_szego).with_context(inst.context(None)))
}

/// `4π/λ₁ ∫φ² ≤ (∫φ)²` from a given eigenpair.
pub fn payne_rayner_report(lambda: f64, phi: &ScalarField<'_>, tol: &Tolerances) -> CheckReport {
    let h2 = phi.grid().cell_measure();
    let l1: f64 = phi.values().iter().map(|v| v.abs()).sum::<f64>() * h2;
    let l2: f64 = phi.values().iter().map(|v| v * v).sum::<f64>() * h2;
    let lhs = 4.0 * PI / lambda * l2;
    let rhs = l1 * l1;
    CheckReport::compare_scaled("payne_rayner", lhs, rhs, rhs, tol.grid)
}

pub fn check_payne_rayner(grid: &Grid, tol: &Tolerances) -> Result<CheckReport> {
    let e = solve_first_eigen(grid, 1e-8)?;
    let ctx = super::CheckContext {
        domain: Some(grid.spec().label()),
        q: None,
        k: None,
        resolution: Some(grid.resolution()),
    };
    Ok(payne_rayner_report(e.lambda, &e.phi, tol).with_context(ctx))
}
