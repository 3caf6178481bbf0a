//! Numerical core for the sublinear Dirichlet problem `-Δu = u^q` (0 < q < 1)
//! on planar domains.
//!
//! The crate is `no_std` (it needs `alloc`) and carries no IO. It provides:
//!
//! - [`domain`]: planar shapes, their masked uniform grids, and ball geometry.
//! - [`elliptic`]: the five-point Dirichlet Laplacian with a boundary-distance
//!   correction, a conjugate-gradient solver, inverse power iteration, and the
//!   monotone sub/super-solution iteration for the sublinear problem.
//! - [`rearrange`]: distribution functions, decreasing rearrangements and
//!   Schwarz symmetrization in exact discrete form.
//! - [`radial`]: ball solutions via a single initial-value problem plus exact
//!   scaling, and the closed forms that go with them.
//! - [`verify`]: inequality and comparison checks with signed margins.
//!
//! Dimension `n = 2` is the only grid dimension; the radial formulas accept any
//! `n >= 2`.

#![no_std]
// `num_traits::Float` is redundant whenever std's inherent float methods are visible
#![allow(unused_imports)]
// `!(x > 0.0)` style guards reject NaN on purpose
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod domain;
pub mod elliptic;
mod error;
pub mod radial;
pub mod rearrange;
pub mod verify;

pub use domain::{build_grid, schwarz_radius, unit_ball_volume, volume, DomainSpec, Grid, Shape};
pub use elliptic::{
    compute_sq, dirichlet_energy, lp_norm, max_field, solve_first_eigen, solve_sublinear,
    solve_torsion, ScalarField, SolveDiagnostics, SublinearOptions,
};
pub use error::{Error, Result};
pub use radial::{solve_ball_sublinear, RadialSolution};
pub use rearrange::{decreasing_rearrangement, DecreasingProfile, RadialField};
pub use verify::{CheckReport, CrossingReport, Verdict};

/// Lower end of the accepted exponent band.
pub const Q_MIN: f64 = 0.01;
/// Upper end of the accepted exponent band.
pub const Q_MAX: f64 = 0.99;

/// Rejects exponents outside `[Q_MIN, Q_MAX]`.
pub fn check_exponent(q: f64) -> Result<()> {
    if q.is_finite() && (Q_MIN..=Q_MAX).contains(&q) {
        Ok(())
    } else {
        Err(Error::ExponentOutOfBand(q))
    }
}
