//! Discrete Dirichlet Laplacian and the three solves built on it: torsion
//! (`-Δh = 1`), the first eigenpair, and the sublinear problem `-Δu = u^q`.

mod cg;
mod eigen;
mod laplacian;
mod sublinear;

use alloc::vec;
use alloc::vec::Vec;

use num_traits::Float;

use crate::domain::Grid;
use crate::error::{Error, Result};

pub use cg::{solve_linear, solve_linear_from, LinearStats, DEFAULT_LINEAR_TOL};
pub use eigen::{solve_first_eigen, EigenPair};
pub use laplacian::{apply_laplacian, operator_diagonal};
pub use sublinear::{solve_sublinear, BracketState, SolveDiagnostics, SublinearOptions, SublinearSolver};

/// Real values on the inside cells of a grid; zero outside.
#[derive(Debug, Clone)]
pub struct ScalarField<'g> {
    grid: &'g Grid,
    values: Vec<f64>,
}

impl<'g> ScalarField<'g> {
    pub fn new(grid: &'g Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::GridMismatch);
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("field values must be finite"));
        }
        Ok(ScalarField { grid, values })
    }

    pub(crate) fn from_vec_unchecked(grid: &'g Grid, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), grid.len());
        ScalarField { grid, values }
    }

    pub fn zeros(grid: &'g Grid) -> Self {
        ScalarField { grid, values: vec![0.0; grid.len()] }
    }

    pub fn constant(grid: &'g Grid, c: f64) -> Self {
        ScalarField { grid, values: vec![c; grid.len()] }
    }

    /// Samples `f(x, y)` at inside cell centers.
    pub fn from_fn(grid: &'g Grid, mut f: impl FnMut(f64, f64) -> f64) -> Result<Self> {
        let values = (0..grid.len())
            .map(|k| {
                let c = grid.cell_center(k);
                f(c[0], c[1])
            })
            .collect();
        ScalarField::new(grid, values)
    }

    pub fn grid(&self) -> &'g Grid {
        self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> ScalarField<'g> {
        ScalarField { grid: self.grid, values: self.values.iter().map(|&v| f(v)).collect() }
    }

    pub fn scaled(&self, t: f64) -> ScalarField<'g> {
        self.map(|v| t * v)
    }

    pub fn same_grid(&self, other: &ScalarField<'_>) -> bool {
        core::ptr::eq(self.grid, other.grid)
    }

    /// `Σ f h²`.
    pub fn integral(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.grid.cell_measure()
    }

    /// Smallest value over cells at graph distance `>= depth` from the boundary.
    pub fn min_at_depth(&self, depth: usize) -> Option<f64> {
        let d = self.grid.boundary_depth();
        self.values
            .iter()
            .zip(&d)
            .filter(|(_, &dk)| dk >= depth)
            .map(|(&v, _)| v)
            .reduce(f64::min)
    }
}

/// `(Σ |f|^p h²)^{1/p}`.
pub fn lp_norm(field: &ScalarField<'_>, p: f64) -> f64 {
    debug_assert!(p >= 1.0);
    let s: f64 = field.values.iter().map(|v| v.abs().powf(p)).sum();
    (s * field.grid.cell_measure()).powf(1.0 / p)
}

/// Largest cell value.
pub fn max_field(field: &ScalarField<'_>) -> f64 {
    field.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
}

/// Discrete Dirichlet energy `∫|∇f|²` of the zero extension.
///
/// Interior edges contribute `(f_i - f_j)²`; a boundary side at fraction `θ`
/// contributes `f_i² / θ`, the energy of the linear ramp from `f_i` to zero
/// over distance `θh` in an `h`-wide strip. This equals `h²⟨f, -Δ_h f⟩`.
pub fn dirichlet_energy(field: &ScalarField<'_>) -> f64 {
    let g = field.grid;
    let f = &field.values;
    let mut e = 0.0;
    for k in 0..g.len() {
        for dir in [0usize, 2] {
            if let Some(m) = g.neighbor(k, dir) {
                let d = f[k] - f[m];
                e += d * d;
            }
        }
        for dir in 0..4 {
            if g.neighbor(k, dir).is_none() {
                e += f[k] * f[k] / g.boundary_fraction(k, dir);
            }
        }
    }
    e
}

/// `S_q(Ω) = ‖u‖_{q+1}^{q-1}` for the solution `u` of `-Δu = u^q`.
pub fn compute_sq(u: &ScalarField<'_>, q: f64) -> Result<f64> {
    let norm = lp_norm(u, q + 1.0);
    if norm == 0.0 {
        return Err(Error::ZeroField);
    }
    Ok(norm.powf(q - 1.0))
}

/// Solves `-Δh = 1` with zero Dirichlet data.
pub fn solve_torsion(grid: &Grid, tol: f64) -> Result<ScalarField<'_>> {
    let rhs = ScalarField::constant(grid, 1.0);
    solve_linear(&rhs, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{build_grid, DomainSpec, Shape};
    use approx::assert_relative_eq;
    use core::f64::consts::PI;

    fn disk(r: f64, res: usize) -> Grid {
        build_grid(&DomainSpec::new(Shape::Disk { radius: r }).unwrap(), res).unwrap()
    }

    fn square(res: usize) -> Grid {
        build_grid(&DomainSpec::new(Shape::Rectangle { width: 1.0, height: 1.0 }).unwrap(), res).unwrap()
    }

    /// Series solution of the unit-square torsion problem at the center:
    /// (16/π⁴) Σ_{m,n odd} (-1)^{(m+n)/2 - 1} / (m n (m² + n²)).
    fn square_torsion_center_oracle() -> f64 {
        let mut s = 0.0;
        for m in (1..400).step_by(2) {
            for n in (1..400).step_by(2) {
                let sign = if ((m + n) / 2 - 1) % 2 == 0 { 1.0 } else { -1.0 };
                let (mf, nf) = (m as f64, n as f64);
                s += sign / (mf * nf * (mf * mf + nf * nf));
            }
        }
        16.0 / PI.powi(4) * s
    }

    #[test]
    fn square_torsion_oracle_value() {
        assert_relative_eq!(square_torsion_center_oracle(), 0.07367, max_relative = 1e-4);
    }

    #[test]
    fn torsion_maxima() {
        let g = disk(1.0, 128);
        let t = solve_torsion(&g, 1e-10).unwrap();
        assert_relative_eq!(max_field(&t), 0.25, max_relative = 0.02);
        let g = square(128);
        let t = solve_torsion(&g, 1e-10).unwrap();
        assert_relative_eq!(max_field(&t), square_torsion_center_oracle(), max_relative = 0.02);
        let g = disk(2.0, 128);
        let t = solve_torsion(&g, 1e-10).unwrap();
        assert_relative_eq!(max_field(&t), 1.0, max_relative = 0.02);
    }

    #[test]
    fn torsion_is_positive_and_reproduces_unit_load() {
        let g = disk(1.0, 64);
        let t = solve_torsion(&g, 1e-12).unwrap();
        assert!(t.values().iter().all(|&v| v > 0.0));
        let lt = apply_laplacian(&t);
        let worst = lt.values().iter().map(|v| (v - 1.0).abs()).fold(0.0, f64::max);
        assert!(worst < 1e-6, "worst residual {worst}");
    }

    #[test]
    fn norms_and_energy() {
        let g = square(32);
        assert_relative_eq!(lp_norm(&ScalarField::constant(&g, 1.0), 2.0), 1.0, max_relative = 1e-14);

        let g = disk(1.0, 128);
        let t = solve_torsion(&g, 1e-10).unwrap();
        // ∫γ = ∫₀¹ (1 - r²)/4 · 2πr dr = π/8
        assert_relative_eq!(lp_norm(&t, 1.0), PI / 8.0, max_relative = 0.02);
        // ∫|∇γ|² = ∫γ by parts
        assert_relative_eq!(dirichlet_energy(&t), PI / 8.0, max_relative = 0.03);
    }

    #[test]
    fn energy_equals_quadratic_form() {
        let g = disk(1.0, 40);
        let f = ScalarField::from_fn(&g, |x, y| (1.0 + x * y).cos() + 0.1 * x).unwrap();
        let af = apply_laplacian(&f);
        let quad: f64 = f.values().iter().zip(af.values()).map(|(a, b)| a * b).sum::<f64>() * g.cell_measure();
        assert_relative_eq!(dirichlet_energy(&f), quad, max_relative = 1e-12);
    }

    #[test]
    fn sq_scaling_of_non_solutions() {
        let g = square(32);
        let f = ScalarField::from_fn(&g, |x, y| x * (1.0 - x) * y * (1.0 - y)).unwrap();
        let q = 0.5;
        let t = 3.0;
        let a = compute_sq(&f, q).unwrap();
        let b = compute_sq(&f.scaled(t), q).unwrap();
        assert_relative_eq!(b, t.powf(q - 1.0) * a, max_relative = 1e-12);
        assert_eq!(compute_sq(&ScalarField::zeros(&g), q), Err(Error::ZeroField));
    }
}
