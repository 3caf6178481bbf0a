use alloc::vec;

use num_traits::Float;

use super::cg::Poisson;
use super::ScalarField;
use crate::domain::Grid;
use crate::error::{Error, Result};

const MAX_ITERATIONS: usize = 2000;

/// Smallest eigenvalue of `-Δ_h` and its eigenvector.
#[derive(Debug, Clone)]
pub struct EigenPair<'g> {
    pub lambda: f64,
    /// Positive, normalized to `max φ = 1`.
    pub phi: ScalarField<'g>,
    pub iterations: usize,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Inverse power iteration, started from the torsion function.
///
/// Stops when `‖-Δ_h φ - λφ‖₂ ≤ tol·λ‖φ‖₂` with `λ` the Rayleigh quotient.
pub fn solve_first_eigen(grid: &Grid, tol: f64) -> Result<EigenPair<'_>> {
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument("eigen tolerance must be positive"));
    }
    let inner_tol = (tol * 1e-2).clamp(1e-13, 1e-10);
    let n = grid.len();
    let mut op = Poisson::new(grid);

    let ones = vec![1.0; n];
    let mut x = vec![0.0; n];
    op.solve(&ones, &mut x, inner_tol)?;
    let norm = dot(&x, &x).sqrt();
    x.iter_mut().for_each(|v| *v /= norm);

    let mut y = vec![0.0; n];
    let mut ay = vec![0.0; n];
    let mut lambda = f64::NAN;
    for it in 1..=MAX_ITERATIONS {
        // warm start: if x were the eigenvector, y = x / λ
        let guess = if lambda.is_finite() { 1.0 / lambda } else { 0.0 };
        y.iter_mut().zip(&x).for_each(|(yi, xi)| *yi = guess * xi);
        op.solve(&x, &mut y, inner_tol)?;
        op.apply(&y, &mut ay);
        let yy = dot(&y, &y);
        lambda = dot(&y, &ay) / yy;
        let res: f64 = ay.iter().zip(&y).map(|(a, b)| (a - lambda * b) * (a - lambda * b)).sum::<f64>().sqrt();
        let rel = res / (lambda * yy.sqrt());
        let ynorm = yy.sqrt();
        x.iter_mut().zip(&y).for_each(|(xi, yi)| *xi = yi / ynorm);
        if rel <= tol {
            let mx = x.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let mn = x.iter().copied().fold(f64::INFINITY, f64::min);
            let scale = if mx.abs() >= mn.abs() { mx } else { mn };
            let phi: alloc::vec::Vec<f64> = x.iter().map(|v| v / scale).collect();
            return Ok(EigenPair { lambda, phi: ScalarField::from_vec_unchecked(grid, phi), iterations: it });
        }
    }
    Err(Error::NotConverged { what: "inverse power iteration", iterations: MAX_ITERATIONS, residual: f64::NAN })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{build_grid, DomainSpec, Shape};
    use crate::elliptic::{max_field, solve_linear};
    use approx::assert_relative_eq;
    use core::f64::consts::PI;

    /// First zero of J₀ by bisection on its power series.
    fn bessel_j0_first_zero() -> f64 {
        let j0 = |x: f64| {
            let mut term = 1.0;
            let mut sum = 1.0;
            for k in 1..60 {
                term *= -(x * x / 4.0) / (k as f64 * k as f64);
                sum += term;
            }
            sum
        };
        let (mut lo, mut hi) = (2.0, 3.0);
        for _ in 0..100 {
            let mid = 0.5 * (lo + hi);
            if j0(lo) * j0(mid) <= 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    fn disk(r: f64, res: usize) -> Grid {
        build_grid(&DomainSpec::new(Shape::Disk { radius: r }).unwrap(), res).unwrap()
    }

    #[test]
    fn bessel_oracle() {
        assert_relative_eq!(bessel_j0_first_zero(), 2.404825557695773, max_relative = 1e-12);
    }

    #[test]
    fn disk_and_square_eigenvalues() {
        let j = bessel_j0_first_zero();
        let g = disk(1.0, 128);
        let e = solve_first_eigen(&g, 1e-8).unwrap();
        assert_relative_eq!(e.lambda, j * j, max_relative = 0.01);
        assert_relative_eq!(max_field(&e.phi), 1.0);
        assert!(e.phi.values().iter().all(|&v| v > 0.0));

        let sq = build_grid(&DomainSpec::new(Shape::Rectangle { width: 1.0, height: 1.0 }).unwrap(), 128).unwrap();
        let e = solve_first_eigen(&sq, 1e-8).unwrap();
        assert_relative_eq!(e.lambda, 2.0 * PI * PI, max_relative = 0.01);
    }

    #[test]
    fn eigenvalue_scales_with_inverse_square_radius() {
        let a = solve_first_eigen(&disk(1.0, 96), 1e-8).unwrap().lambda;
        let b = solve_first_eigen(&disk(2.0, 96), 1e-8).unwrap().lambda;
        assert_relative_eq!(b, a / 4.0, max_relative = 0.01);
    }

    #[test]
    fn solving_with_lambda_phi_reproduces_phi() {
        let g = disk(1.0, 64);
        let tol = 1e-10;
        let e = solve_first_eigen(&g, 1e-10).unwrap();
        let rhs = e.phi.scaled(e.lambda);
        let back = solve_linear(&rhs, tol).unwrap();
        let worst = back.values().iter().zip(e.phi.values()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        assert!(worst < 2.0 * 1e-8, "worst {worst}");
    }
}
