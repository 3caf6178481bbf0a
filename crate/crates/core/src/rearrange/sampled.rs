//! Rearrangement of a grid field's continuous reconstruction.
//!
//! Cell-center values are extended by one ring of ghost values (linear
//! extrapolation to zero at the boundary point found on each axis), then
//! interpolated bilinearly at `m × m` subpoints per cell. Subpoints outside
//! the domain are dropped. The resulting profile has steps of width `(h/m)²`
//! and resolves the level sets of the solution between cell centers, which
//! the one-step-per-cell profile cannot.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::Float;

use super::DecreasingProfile;
use crate::domain::DIRECTIONS;
use crate::elliptic::ScalarField;
use crate::error::{Error, Result};

pub const DEFAULT_SUBDIVISIONS: usize = 8;

/// Extrapolation uses `max(θ, THETA_FLOOR)` so ghosts stay bounded.
const THETA_FLOOR: f64 = 0.05;

pub fn supersampled_rearrangement(field: &ScalarField<'_>, subdivisions: usize) -> Result<DecreasingProfile> {
    if subdivisions == 0 {
        return Err(Error::InvalidArgument("subdivisions must be positive"));
    }
    if let Some((index, &value)) = field.values().iter().enumerate().find(|(_, v)| **v < 0.0) {
        return Err(Error::NegativeValue { index, value });
    }
    let grid = field.grid();
    let u = field.values();
    let (nx, ny) = grid.shape();
    let (px, py) = (nx + 2, ny + 2);
    let mut padded = vec![0.0; px * py];
    let at = |i: isize, j: isize| ((j + 1) as usize) * px + (i + 1) as usize;

    for j in -1..=ny as isize {
        for i in -1..=nx as isize {
            let inside = (i >= 0 && j >= 0).then(|| grid.index_of(i as usize, j as usize)).flatten();
            if let Some(k) = inside {
                padded[at(i, j)] = u[k];
                continue;
            }
            let (mut sum, mut count) = (0.0, 0);
            for (dir, &(dx, dy)) in DIRECTIONS.iter().enumerate() {
                // neighbor a sits at ghost - direction; ghost is a + direction
                let (ai, aj) = (i - dx, j - dy);
                if ai < 0 || aj < 0 {
                    continue;
                }
                if let Some(a) = grid.index_of(ai as usize, aj as usize) {
                    let theta = grid.boundary_fraction(a, dir).max(THETA_FLOOR);
                    sum -= (1.0 - theta) / theta * u[a];
                    count += 1;
                }
            }
            if count > 0 {
                padded[at(i, j)] = sum / count as f64;
            }
        }
    }

    let spec = grid.spec();
    let h = grid.spacing();
    let origin = grid.origin();
    let m = subdivisions;
    let sub = h / m as f64;
    let mut values = Vec::new();
    for j in 0..ny {
        for i in 0..nx {
            for b in 0..m {
                let y = origin[1] + j as f64 * h + (b as f64 + 0.5) * sub;
                for a in 0..m {
                    let x = origin[0] + i as f64 * h + (a as f64 + 0.5) * sub;
                    if !spec.contains(x, y) {
                        continue;
                    }
                    let fx = (x - origin[0]) / h - 0.5;
                    let fy = (y - origin[1]) / h - 0.5;
                    let (i0, j0) = (fx.floor(), fy.floor());
                    let (tx, ty) = (fx - i0, fy - j0);
                    let (i0, j0) = (i0 as isize, j0 as isize);
                    let v00 = padded[at(i0, j0)];
                    let v10 = padded[at(i0 + 1, j0)];
                    let v01 = padded[at(i0, j0 + 1)];
                    let v11 = padded[at(i0 + 1, j0 + 1)];
                    let v = (1.0 - ty) * ((1.0 - tx) * v00 + tx * v10) + ty * ((1.0 - tx) * v01 + tx * v11);
                    values.push(v.max(0.0));
                }
            }
        }
    }
    if values.is_empty() {
        return Err(Error::DegenerateDomain);
    }
    values.sort_by(|a, b| b.total_cmp(a));
    let widths = vec![sub * sub; values.len()];
    Ok(DecreasingProfile::from_sorted(widths, values))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{build_grid, DomainSpec, Shape};
    use crate::elliptic::solve_torsion;
    use crate::rearrange::profile_integral;
    use approx::assert_relative_eq;
    use core::f64::consts::PI;

    #[test]
    fn measure_tracks_the_domain() {
        let g = build_grid(&DomainSpec::new(Shape::Disk { radius: 1.0 }).unwrap(), 64).unwrap();
        let f = ScalarField::constant(&g, 1.0);
        let p = supersampled_rearrangement(&f, 8).unwrap();
        assert_relative_eq!(p.total_measure(), PI, max_relative = 2e-3);
    }

    #[test]
    fn disk_torsion_reconstruction() {
        let g = build_grid(&DomainSpec::new(Shape::Disk { radius: 1.0 }).unwrap(), 96).unwrap();
        let t = solve_torsion(&g, 1e-10).unwrap();
        let p = supersampled_rearrangement(&t, 8).unwrap();
        for s in [0.05, 0.5, 1.5, 2.5, 3.0] {
            let exact = (1.0 - s / PI) / 4.0;
            assert!((p.eval(s) - exact).abs() <= 2e-3 * 0.25, "s = {s}: {} vs {exact}", p.eval(s));
        }
        assert_relative_eq!(profile_integral(&p, 1.0), PI / 8.0, max_relative = 2e-3);
    }

    #[test]
    fn one_subdivision_matches_cells_on_a_square() {
        let g = build_grid(&DomainSpec::new(Shape::Rectangle { width: 1.0, height: 1.0 }).unwrap(), 32).unwrap();
        let f = ScalarField::from_fn(&g, |x, y| x * (1.0 - x) * y * (1.0 - y)).unwrap();
        let p = supersampled_rearrangement(&f, 1).unwrap();
        let q = crate::rearrange::decreasing_rearrangement(&f).unwrap();
        assert_eq!(p.values(), q.values());
    }

    #[test]
    fn rejects_bad_input() {
        let g = build_grid(&DomainSpec::new(Shape::Disk { radius: 1.0 }).unwrap(), 16).unwrap();
        assert!(supersampled_rearrangement(&ScalarField::constant(&g, 1.0), 0).is_err());
        assert!(supersampled_rearrangement(&ScalarField::constant(&g, -1.0), 2).is_err());
    }
}
