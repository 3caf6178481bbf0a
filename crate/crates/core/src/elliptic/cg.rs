//! Jacobi-preconditioned conjugate gradients on `h²·(-Δ_h)`.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::Float;

use super::laplacian::{apply_scaled, operator_diagonal};
use super::ScalarField;
use crate::domain::Grid;
use crate::error::{Error, Result};

pub const DEFAULT_LINEAR_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearStats {
    pub iterations: usize,
    /// Final `‖-Δ_h x - b‖₂ / ‖b‖₂`.
    pub relative_residual: f64,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Iteration cap `200·√N`.
pub(crate) fn iteration_cap(n: usize) -> usize {
    ((n as f64).sqrt() * 200.0).ceil() as usize + 10
}

/// Reusable operator data for repeated solves on one grid.
#[derive(Debug, Clone)]
pub(crate) struct Poisson<'g> {
    grid: &'g Grid,
    diag: Vec<f64>,
    scratch: Scratch,
}

#[derive(Debug, Clone)]
struct Scratch {
    r: Vec<f64>,
    z: Vec<f64>,
    p: Vec<f64>,
    ap: Vec<f64>,
    b: Vec<f64>,
}

impl<'g> Poisson<'g> {
    pub(crate) fn new(grid: &'g Grid) -> Self {
        let n = grid.len();
        Poisson {
            grid,
            diag: operator_diagonal(grid),
            scratch: Scratch { r: vec![0.0; n], z: vec![0.0; n], p: vec![0.0; n], ap: vec![0.0; n], b: vec![0.0; n] },
        }
    }

    /// `y = -Δ_h x`.
    pub(crate) fn apply(&self, x: &[f64], y: &mut [f64]) {
        apply_scaled(self.grid, &self.diag, x, y);
        let inv_h2 = 1.0 / self.grid.cell_measure();
        y.iter_mut().for_each(|v| *v *= inv_h2);
    }

    /// Solves `-Δ_h x = rhs`, starting from the contents of `x`.
    pub(crate) fn solve(&mut self, rhs: &[f64], x: &mut [f64], tol: f64) -> Result<LinearStats> {
        let n = self.grid.len();
        let h2 = self.grid.cell_measure();
        let Scratch { r, z, p, ap, b } = &mut self.scratch;
        for (bi, &fi) in b.iter_mut().zip(rhs) {
            *bi = h2 * fi;
        }
        let b_norm = dot(b, b).sqrt();
        if b_norm == 0.0 {
            x.iter_mut().for_each(|v| *v = 0.0);
            return Ok(LinearStats { iterations: 0, relative_residual: 0.0 });
        }

        apply_scaled(self.grid, &self.diag, x, ap);
        for i in 0..n {
            r[i] = b[i] - ap[i];
            z[i] = r[i] / self.diag[i];
            p[i] = z[i];
        }
        let mut rz = dot(r, z);
        let mut res = dot(r, r).sqrt() / b_norm;
        let cap = iteration_cap(n);
        let mut it = 0;
        while res > tol {
            if it == cap {
                return Err(Error::NotConverged { what: "conjugate gradient", iterations: it, residual: res });
            }
            apply_scaled(self.grid, &self.diag, p, ap);
            let pap = dot(p, ap);
            if !(pap > 0.0) {
                return Err(Error::NotConverged { what: "conjugate gradient (breakdown)", iterations: it, residual: res });
            }
            let alpha = rz / pap;
            for i in 0..n {
                x[i] += alpha * p[i];
                r[i] -= alpha * ap[i];
                z[i] = r[i] / self.diag[i];
            }
            let rz_new = dot(r, z);
            let beta = rz_new / rz;
            rz = rz_new;
            for i in 0..n {
                p[i] = z[i] + beta * p[i];
            }
            res = dot(r, r).sqrt() / b_norm;
            it += 1;
        }
        Ok(LinearStats { iterations: it, relative_residual: res })
    }
}

/// Solves `-Δ_h f = rhs` to relative residual `tol`.
pub fn solve_linear<'g>(rhs: &ScalarField<'g>, tol: f64) -> Result<ScalarField<'g>> {
    let guess = ScalarField::zeros(rhs.grid());
    solve_linear_from(rhs, guess, tol).map(|(f, _)| f)
}

/// As [`solve_linear`], warm-started from `guess`.
pub fn solve_linear_from<'g>(
    rhs: &ScalarField<'g>,
    guess: ScalarField<'g>,
    tol: f64,
) -> Result<(ScalarField<'g>, LinearStats)> {
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument("linear tolerance must be positive"));
    }
    if !rhs.same_grid(&guess) {
        return Err(Error::GridMismatch);
    }
    let mut op = Poisson::new(rhs.grid());
    let mut x = guess.into_values();
    let stats = op.solve(rhs.values(), &mut x, tol)?;
    Ok((ScalarField::from_vec_unchecked(rhs.grid(), x), stats))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{build_grid, DomainSpec, Shape};
    use crate::elliptic::apply_laplacian;

    #[test]
    fn zero_rhs_gives_zero() {
        let g = build_grid(&DomainSpec::new(Shape::Disk { radius: 1.0 }).unwrap(), 32).unwrap();
        let f = solve_linear(&ScalarField::zeros(&g), 1e-10).unwrap();
        assert!(f.values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn residual_meets_tolerance() {
        let g = build_grid(&DomainSpec::new(Shape::LShape { side: 1.0 }).unwrap(), 48).unwrap();
        let rhs = ScalarField::from_fn(&g, |x, y| 1.0 + x * x - y).unwrap();
        let tol = 1e-10;
        let f = solve_linear(&rhs, tol).unwrap();
        let lf = apply_laplacian(&f);
        let num: f64 = lf.values().iter().zip(rhs.values()).map(|(a, b)| (a - b) * (a - b)).sum();
        let den: f64 = rhs.values().iter().map(|b| b * b).sum();
        assert!((num / den).sqrt() <= tol * 1.0001);
    }

    #[test]
    fn nonnegative_rhs_gives_nonnegative_solution() {
        let g = build_grid(&DomainSpec::new(Shape::Annulus { inner: 0.4, outer: 1.0 }).unwrap(), 48).unwrap();
        let rhs = ScalarField::from_fn(&g, |x, _| if x > 0.3 { 1.0 } else { 0.0 }).unwrap();
        let f = solve_linear(&rhs, 1e-12).unwrap();
        let scale = f.values().iter().copied().fold(0.0, f64::max);
        assert!(f.values().iter().all(|&v| v >= -1e-9 * scale));
    }
}
