//! The differential inequality satisfied by the rearrangement of a minimizer:
//! `-du*/ds ≤ S n⁻² ω_n^{-2/n} s^{-2(n-1)/n} ∫₀^s (u*)^q`.
//!
//! Both sides are tested against hat functions centered at the inner edges
//! of `K` equal-measure bins. For the hat at edge `e` with half-width `W`,
//! the left side becomes the difference of the two adjacent bin averages,
//! which is defined for step profiles too.

use alloc::vec::Vec;

use num_traits::Float;

use super::{CheckReport, Verdict};
use crate::domain::unit_ball_volume;
use crate::error::{Error, Result};
use crate::rearrange::DecreasingProfile;

pub const DEFAULT_ODE_BINS: usize = 32;

const SUBINTERVALS: usize = 16;
const GAUSS_NODES: [f64; 4] = [-0.8611363115940526, -0.3399810435848563, 0.3399810435848563, 0.8611363115940526];
const GAUSS_WEIGHTS: [f64; 4] = [0.3478548451374538, 0.6521451548625461, 0.6521451548625461, 0.3478548451374538];

/// `profile` is the rearrangement of a function solving `-Δv = S v^q`.
pub fn check_ode_inequality(profile: &DecreasingProfile, sq: f64, q: f64, n: usize, tol: f64) -> Result<CheckReport> {
    check_ode_inequality_binned(profile, sq, q, n, DEFAULT_ODE_BINS, tol)
}

/// Margin is the smallest per-bin `(rhs - lhs)/rhs`. Equality case when every
/// bin is within `tol` of equality; pass when no bin falls below `-tol`.
pub fn check_ode_inequality_binned(
    profile: &DecreasingProfile,
    sq: f64,
    q: f64,
    n: usize,
    bins: usize,
    tol: f64,
) -> Result<CheckReport> {
    if bins < 3 {
        return Err(Error::InvalidArgument("need at least 3 bins"));
    }
    if !(sq > 0.0) {
        return Err(Error::InvalidArgument("S_q must be positive"));
    }
    let omega = unit_ball_volume(n)?;
    let nf = n as f64;
    let m = profile.total_measure();
    let w = m / bins as f64;
    let avg = profile.bin_averages(bins);
    if avg.iter().all(|&a| a == 0.0) {
        return Ok(CheckReport::with_margin("level_set_ode", 0.0, 0.0, 0.0, tol).with_verdict(Verdict::Pass));
    }

    // quadrature nodes over every bin, ascending
    let sub = w / SUBINTERVALS as f64;
    let mut nodes = Vec::with_capacity(bins * SUBINTERVALS * 4);
    let mut weights = Vec::with_capacity(nodes.capacity());
    for b in 0..bins {
        for i in 0..SUBINTERVALS {
            let mid = b as f64 * w + (i as f64 + 0.5) * sub;
            for (x, wt) in GAUSS_NODES.iter().zip(GAUSS_WEIGHTS) {
                nodes.push(mid + 0.5 * sub * x);
                weights.push(0.5 * sub * wt);
            }
        }
    }
    let cumulative = profile.cumulative_at(&nodes, q);
    let c = sq / (nf * nf * omega.powf(2.0 / nf));
    let gamma = 2.0 * (nf - 1.0) / nf;
    let source: Vec<f64> = nodes.iter().zip(&cumulative).map(|(s, qv)| c * s.powf(-gamma) * qv).collect();

    let per_bin = SUBINTERVALS * 4;
    let (mut worst, mut worst_lhs, mut worst_rhs) = (f64::INFINITY, 0.0, 0.0);
    let mut largest = 0.0_f64;
    for j in 0..bins - 1 {
        let edge = (j + 1) as f64 * w;
        let mut rhs = 0.0;
        for i in j * per_bin..(j + 2) * per_bin {
            let hat = 1.0 - (nodes[i] - edge).abs() / w;
            rhs += weights[i] * source[i] * hat;
        }
        let lhs = avg[j] - avg[j + 1];
        let rel = if rhs > 0.0 {
            (rhs - lhs) / rhs
        } else if lhs <= 0.0 {
            0.0
        } else {
            f64::NEG_INFINITY
        };
        largest = largest.max(rel.abs());
        if rel < worst {
            worst = rel;
            worst_lhs = lhs;
            worst_rhs = rhs;
        }
    }
    let verdict = if largest <= tol {
        Verdict::EqualityCase
    } else if worst >= -tol {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    Ok(CheckReport::with_margin("level_set_ode", worst_lhs, worst_rhs, worst, tol).with_verdict(verdict))
}
