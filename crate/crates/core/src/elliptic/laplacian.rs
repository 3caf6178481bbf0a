use alloc::vec::Vec;

use super::ScalarField;
use crate::domain::Grid;

/// Diagonal of `h²·(-Δ_h)`: one per inside neighbor, `1/θ` per boundary side.
pub fn operator_diagonal(grid: &Grid) -> Vec<f64> {
    (0..grid.len())
        .map(|k| {
            (0..4)
                .map(|d| match grid.neighbor(k, d) {
                    Some(_) => 1.0,
                    None => 1.0 / grid.boundary_fraction(k, d),
                })
                .sum()
        })
        .collect()
}

/// `out = h²·(-Δ_h) x`.
pub(crate) fn apply_scaled(grid: &Grid, diag: &[f64], x: &[f64], out: &mut [f64]) {
    for k in 0..grid.len() {
        let mut acc = diag[k] * x[k];
        for d in 0..4 {
            if let Some(m) = grid.neighbor(k, d) {
                acc -= x[m];
            }
        }
        out[k] = acc;
    }
}

/// Five-point `-Δ_h` with zero Dirichlet data.
///
/// Away from the boundary this is `(4f(c) - Σ neighbors) / h²`. A missing
/// neighbor at boundary fraction `θ` adds `f(c) / (θh²)` instead of `f(c)/h²`,
/// which places the zero of the linear extrapolation on the boundary and
/// keeps the operator symmetric.
pub fn apply_laplacian<'g>(field: &ScalarField<'g>) -> ScalarField<'g> {
    let grid = field.grid();
    let diag = operator_diagonal(grid);
    let mut out = alloc::vec![0.0; grid.len()];
    apply_scaled(grid, &diag, field.values(), &mut out);
    let inv_h2 = 1.0 / grid.cell_measure();
    out.iter_mut().for_each(|v| *v *= inv_h2);
    ScalarField::from_vec_unchecked(grid, out)
}
