//! Combinatorial exterior derivative (coboundary) on the periodic grid.

use crate::cochain::{Cochain, Degree};
use crate::grid::GridComplex2D;

/// `d` as a matrix-free stencil. Same sign pattern and summation order as
/// [`crate::grid::IncidenceOperator::coboundary`] on the transposed boundary.
///
/// A 2-form (or empty) input yields the zero cochain of empty degree.
pub fn exterior_derivative(w: &Cochain, grid: &GridComplex2D) -> Cochain {
    let mut out = Cochain::zeros(w.degree().raised(), grid);
    exterior_derivative_into(w, grid, &mut out);
    out
}

/// Writes `d w` into `out`, which must already have degree `w.degree().raised()`.
pub fn exterior_derivative_into(w: &Cochain, grid: &GridComplex2D, out: &mut Cochain) {
    assert_eq!(out.degree(), w.degree().raised(), "output degree of d");
    let (nx, ny) = (grid.nx(), grid.ny());
    let n = nx * ny;
    let src = w.values();
    let dst = out.values_mut();
    match w.degree() {
        Degree::Zero => {
            for j in 0..ny {
                let jn = (j + 1) % ny;
                for i in 0..nx {
                    let in_ = (i + 1) % nx;
                    let f = src[j * nx + i];
                    dst[j * nx + i] = src[j * nx + in_] - f;
                    dst[n + j * nx + i] = src[jn * nx + i] - f;
                }
            }
        }
        Degree::One => {
            let (wx, wy) = src.split_at(n);
            for j in 0..ny {
                let jn = (j + 1) % ny;
                for i in 0..nx {
                    let in_ = (i + 1) % nx;
                    dst[j * nx + i] =
                        wx[j * nx + i] + wy[j * nx + in_] - wx[jn * nx + i] - wy[j * nx + i];
                }
            }
        }
        Degree::Two | Degree::Empty => {}
    }
}
