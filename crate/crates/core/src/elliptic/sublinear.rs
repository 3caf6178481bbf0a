//! Monotone sub/super-solution iteration for `-Δu = u^q`, `0 < q < 1`.
//!
//! `T(v) = (-Δ_h)^{-1} v^q` is order preserving because `-Δ_h` is an
//! M-matrix. Starting from a super-solution `M₀·h` (`h` the torsion function)
//! the iterates decrease; starting from a sub-solution `η₀·φ₁` they increase.
//! Both converge to the unique discrete solution, and the sup-distance
//! between them bounds the error.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::Float;

use super::cg::{Poisson, DEFAULT_LINEAR_TOL};
use super::eigen::solve_first_eigen;
use super::ScalarField;
use crate::domain::Grid;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct SublinearOptions {
    /// Stop when `max|super - sub| <= tol · max super`.
    pub tol: f64,
    pub max_iter: usize,
    pub linear_tol: f64,
    pub eigen_tol: f64,
    /// `M₀ = super_factor · max(1, max h)^{q/(1-q)}`; must exceed 1.
    pub super_factor: f64,
    /// Allowed relative ordering violations, from linear-solve error.
    pub order_slack: f64,
}

impl Default for SublinearOptions {
    fn default() -> Self {
        SublinearOptions {
            tol: 1e-8,
            max_iter: 500,
            linear_tol: DEFAULT_LINEAR_TOL,
            eigen_tol: 1e-8,
            super_factor: 2.0,
            order_slack: 1e-7,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveDiagnostics {
    pub iterations: usize,
    /// Final `max|super - sub| / max super`.
    pub final_gap: f64,
    /// Largest relative CG residual of each iteration's two solves.
    pub linear_residuals: Vec<f64>,
    /// Super-solution multiplier `M₀`.
    pub super_start: f64,
    /// Sub-solution multiplier `η₀`.
    pub sub_start: f64,
    pub lambda1: f64,
}

/// Snapshot passed to an observer after every iteration.
#[derive(Debug, Clone, Copy)]
pub struct BracketState<'a> {
    pub iteration: usize,
    pub sub: &'a [f64],
    pub sup: &'a [f64],
    pub gap: f64,
}

/// Holds the q-independent pieces (torsion, first eigenpair) so several
/// exponents can be solved on one grid.
#[derive(Debug, Clone)]
pub struct SublinearSolver<'g> {
    grid: &'g Grid,
    torsion: Vec<f64>,
    lambda1: f64,
    phi1: Vec<f64>,
    options: SublinearOptions,
}

fn max_of(v: &[f64]) -> f64 {
    v.iter().copied().fold(f64::NEG_INFINITY, f64::max)
}

impl<'g> SublinearSolver<'g> {
    pub fn new(grid: &'g Grid, options: SublinearOptions) -> Result<Self> {
        if !(options.tol > 0.0) || !(options.linear_tol > 0.0) {
            return Err(Error::InvalidArgument("tolerances must be positive"));
        }
        if !(options.super_factor > 1.0) {
            return Err(Error::InvalidArgument("super_factor must exceed 1"));
        }
        let mut op = Poisson::new(grid);
        let mut torsion = vec![0.0; grid.len()];
        op.solve(&vec![1.0; grid.len()], &mut torsion, options.linear_tol)?;
        let eig = solve_first_eigen(grid, options.eigen_tol)?;
        Ok(SublinearSolver {
            grid,
            torsion,
            lambda1: eig.lambda,
            phi1: eig.phi.into_values(),
            options,
        })
    }

    pub fn grid(&self) -> &'g Grid {
        self.grid
    }

    pub fn options(&self) -> &SublinearOptions {
        &self.options
    }

    pub fn torsion(&self) -> ScalarField<'g> {
        ScalarField::from_vec_unchecked(self.grid, self.torsion.clone())
    }

    pub fn lambda1(&self) -> f64 {
        self.lambda1
    }

    pub fn phi1(&self) -> ScalarField<'g> {
        ScalarField::from_vec_unchecked(self.grid, self.phi1.clone())
    }

    pub fn solve(&self, q: f64) -> Result<(ScalarField<'g>, SolveDiagnostics)> {
        self.solve_observed(q, |_| {})
    }

    /// As [`solve`](Self::solve), calling `observer` after every iteration.
    pub fn solve_observed(
        &self,
        q: f64,
        mut observer: impl FnMut(BracketState<'_>),
    ) -> Result<(ScalarField<'g>, SolveDiagnostics)> {
        crate::check_exponent(q)?;
        let opts = &self.options;
        let n = self.grid.len();

        let hmax = max_of(&self.torsion);
        let m0 = opts.super_factor * hmax.max(1.0).powf(q / (1.0 - q));
        let mut sup: Vec<f64> = self.torsion.iter().map(|h| m0 * h).collect();

        let mut eta0 = 0.5 * self.lambda1.powf(1.0 / (q - 1.0)).min(1.0);
        while self.phi1.iter().zip(&sup).any(|(p, s)| eta0 * p > *s) {
            eta0 *= 0.5;
        }
        let mut sub: Vec<f64> = self.phi1.iter().map(|p| eta0 * p).collect();

        let mut op = Poisson::new(self.grid);
        let mut rhs = vec![0.0; n];
        let mut next_sup = sup.clone();
        let mut next_sub = sub.clone();
        let mut residuals = Vec::new();
        let gap_of = |lo: &[f64], hi: &[f64]| {
            let scale = max_of(hi);
            lo.iter().zip(hi).map(|(a, b)| (b - a).abs()).fold(0.0, f64::max) / scale
        };
        let mut gap = gap_of(&sub, &sup);

        for it in 1..=opts.max_iter {
            rhs.iter_mut().zip(&sup).for_each(|(r, v)| *r = v.max(0.0).powf(q));
            next_sup.copy_from_slice(&sup);
            let a = op.solve(&rhs, &mut next_sup, opts.linear_tol)?;
            rhs.iter_mut().zip(&sub).for_each(|(r, v)| *r = v.max(0.0).powf(q));
            next_sub.copy_from_slice(&sub);
            let b = op.solve(&rhs, &mut next_sub, opts.linear_tol)?;
            residuals.push(a.relative_residual.max(b.relative_residual));

            let scale = max_of(&next_sup);
            let mut excess = 0.0_f64;
            for i in 0..n {
                excess = excess
                    .max(next_sup[i] - sup[i])
                    .max(sub[i] - next_sub[i])
                    .max(next_sub[i] - next_sup[i]);
            }
            if excess > opts.order_slack * scale {
                return Err(Error::BracketViolation { iteration: it, excess: excess / scale });
            }
            core::mem::swap(&mut sup, &mut next_sup);
            core::mem::swap(&mut sub, &mut next_sub);
            gap = gap_of(&sub, &sup);
            observer(BracketState { iteration: it, sub: &sub, sup: &sup, gap });
            if gap <= opts.tol {
                let u: Vec<f64> = sub.iter().zip(&sup).map(|(a, b)| 0.5 * (a + b)).collect();
                if let Some((index, &value)) = u.iter().enumerate().find(|(_, v)| !(**v > 0.0)) {
                    return Err(Error::NegativeValue { index, value });
                }
                let diag = SolveDiagnostics {
                    iterations: it,
                    final_gap: gap,
                    linear_residuals: residuals,
                    super_start: m0,
                    sub_start: eta0,
                    lambda1: self.lambda1,
                };
                return Ok((ScalarField::from_vec_unchecked(self.grid, u), diag));
            }
        }
        Err(Error::NotConverged { what: "monotone iteration", iterations: opts.max_iter, residual: gap })
    }
}

/// Solves `-Δu = u^q` on `grid`, stopping at relative bracket gap `tol`.
pub fn solve_sublinear(grid: &Grid, q: f64, tol: f64) -> Result<(ScalarField<'_>, SolveDiagnostics)> {
    crate::check_exponent(q)?;
    let opts = SublinearOptions { tol, ..SublinearOptions::default() };
    SublinearSolver::new(grid, opts)?.solve(q)
}
