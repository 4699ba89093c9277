//! Discrete interior product: time-integrated contraction of a k-cochain with
//! a staggered velocity field.
//!
//! Every (k-1)-cell is extruded backwards in time along the flow and the form
//! is integrated over the extrusion with a 1-D finite-volume kernel. Multi-D
//! extrusions are split into axis-aligned 1-D sweeps whose contributions are
//! summed.
//!
//! Sign conventions on the periodic grid, for a 2-form `w` with cell averages
//! `rho = w / h^2`:
//!
//! * horizontal edge `(i, j)`: `-h * E_y`, sweeping column `i` across the
//!   interface between cells `(i, j-1)` and `(i, j)` with flux `X^y(i, j)`;
//! * vertical edge `(i, j)`: `+h * E_x`, sweeping row `j` across the interface
//!   between cells `(i-1, j)` and `(i, j)` with flux `X^x(i, j)`;
//!
//! where `E` is [`extrusion_integral`]. For a 1-form the value at vertex
//! `(i, j)` is `E_x + E_y`, sweeping the line densities `w^x / h` along row
//! `j` and `w^y / h` along column `i` with the node-averaged fluxes.

use rayon::prelude::*;

use crate::cochain::{Cochain, Degree};
use crate::error::{Error, Result};
use crate::fv::{extrusion_integral, SchemeKind, Stencil1D, Sweep, KERNEL_COURANT_LIMIT};
use crate::grid::{Axis, GridComplex2D};
use crate::velocity::StaggeredVelocity;

/// A contraction together with the interval it integrates over.
#[derive(Clone, Debug, PartialEq)]
pub struct ContractionResult {
    pub cochain: Cochain,
    pub dt: f64,
}

/// Checks that `scheme`'s window fits the grid without self-overlap.
pub fn check_scheme_fits(scheme: SchemeKind, grid: &GridComplex2D) -> Result<()> {
    let need = scheme.window_len();
    for axis in [Axis::X, Axis::Y] {
        if grid.extent(axis) < need {
            return Err(Error::Config(format!(
                "{scheme} needs at least {need} cells along {axis:?}, grid has {}",
                grid.extent(axis)
            )));
        }
    }
    Ok(())
}

fn check_inputs(w: &Cochain, field: &StaggeredVelocity, grid: &GridComplex2D) -> Result<()> {
    w.check_grid(grid)?;
    if field.shape() != (grid.nx(), grid.ny()) {
        return Err(Error::InvalidGrid(format!(
            "velocity on {:?} used with a {}x{} grid",
            field.shape(),
            grid.nx(),
            grid.ny()
        )));
    }
    Ok(())
}

/// Fails on the first flux (in canonical order) whose Courant number exceeds
/// the kernel limit. `fluxes` yields `(i, j, component, flux)`.
fn courant_guard(
    fluxes: impl Iterator<Item = (usize, usize, usize, f64)>,
    describe: impl Fn(usize, usize, usize) -> String,
    dt: f64,
    grid: &GridComplex2D,
) -> Result<()> {
    let h2 = grid.h() * grid.h();
    for (i, j, c, flux) in fluxes {
        let courant = flux.abs() * dt / h2;
        if courant > KERNEL_COURANT_LIMIT || !courant.is_finite() {
            return Err(Error::Courant {
                courant,
                limit: KERNEL_COURANT_LIMIT,
                location: describe(i, j, c),
            });
        }
    }
    Ok(())
}

/// Extrusion integral through one interface of a periodic line.
#[inline]
fn sweep_line(
    line: impl Fn(isize) -> f64,
    at: isize,
    flux: f64,
    dt: f64,
    h: f64,
    scheme: SchemeKind,
) -> Result<f64> {
    match Sweep::of_flux(flux) {
        None => Ok(0.0),
        Some(sweep) => {
            let stencil = Stencil1D::gather(line, at, scheme.half_width(), sweep);
            extrusion_integral(&stencil, flux, dt, h, scheme)
        }
    }
}

/// Contraction of a 2-form onto edges (a degree-1 result).
pub fn contract_2form(
    w: &Cochain,
    field: &StaggeredVelocity,
    dt: f64,
    scheme: SchemeKind,
    grid: &GridComplex2D,
) -> Result<ContractionResult> {
    let mut out = Cochain::zeros(Degree::One, grid);
    contract_2form_into(w, field, dt, scheme, grid, &mut out)?;
    Ok(ContractionResult { cochain: out, dt })
}

pub(crate) fn contract_2form_into(
    w: &Cochain,
    field: &StaggeredVelocity,
    dt: f64,
    scheme: SchemeKind,
    grid: &GridComplex2D,
    out: &mut Cochain,
) -> Result<()> {
    expect_degree(w, Degree::Two)?;
    check_inputs(w, field, grid)?;
    check_scheme_fits(scheme, grid)?;
    let (nx, ny, h) = (grid.nx(), grid.ny(), grid.h());
    courant_guard(
        (0..ny).flat_map(|j| {
            (0..nx).flat_map(move |i| {
                let k = j * nx + i;
                [(i, j, 0, field.y_flux()[k]), (i, j, 1, field.x_flux()[k])]
            })
        }),
        |i, j, c| match c {
            0 => format!("horizontal edge ({i}, {j})"),
            _ => format!("vertical edge ({i}, {j})"),
        },
        dt,
        grid,
    )?;

    let h2 = h * h;
    let rho: Vec<f64> = w.values().iter().map(|v| v / h2).collect();
    let rho_at = |i: isize, j: isize| rho[grid.idx(i, j)];

    let n = grid.plane_len();
    let (out_x, out_y) = out.values_mut().split_at_mut(n);
    out_x
        .par_chunks_mut(nx)
        .zip(out_y.par_chunks_mut(nx))
        .enumerate()
        .try_for_each(|(j, (row_x, row_y))| -> Result<()> {
            let j = j as isize;
            for i in 0..nx as isize {
                let through_h = sweep_line(|k| rho_at(i, k), j, field.fy(i, j), dt, h, scheme)?;
                row_x[i as usize] = -(h * through_h);
                let through_v = sweep_line(|k| rho_at(k, j), i, field.fx(i, j), dt, h, scheme)?;
                row_y[i as usize] = h * through_v;
            }
            Ok(())
        })
}

/// Contraction of a 1-form onto vertices (a degree-0 result).
pub fn contract_1form(
    w: &Cochain,
    field: &StaggeredVelocity,
    dt: f64,
    scheme: SchemeKind,
    grid: &GridComplex2D,
) -> Result<ContractionResult> {
    let mut out = Cochain::zeros(Degree::Zero, grid);
    contract_1form_into(w, field, dt, scheme, grid, &mut out)?;
    Ok(ContractionResult { cochain: out, dt })
}

pub(crate) fn contract_1form_into(
    w: &Cochain,
    field: &StaggeredVelocity,
    dt: f64,
    scheme: SchemeKind,
    grid: &GridComplex2D,
    out: &mut Cochain,
) -> Result<()> {
    expect_degree(w, Degree::One)?;
    check_inputs(w, field, grid)?;
    check_scheme_fits(scheme, grid)?;
    let (nx, ny, h) = (grid.nx(), grid.ny(), grid.h());
    courant_guard(
        (0..ny).flat_map(|j| {
            (0..nx).flat_map(move |i| {
                let (ii, jj) = (i as isize, j as isize);
                [(i, j, 0, field.node_fx(ii, jj)), (i, j, 1, field.node_fy(ii, jj))]
            })
        }),
        |i, j, c| format!("vertex ({i}, {j}) {} flux", if c == 0 { "x" } else { "y" }),
        dt,
        grid,
    )?;

    let n = grid.plane_len();
    let (wx, wy) = w.values().split_at(n);
    let ax: Vec<f64> = wx.iter().map(|v| v / h).collect();
    let ay: Vec<f64> = wy.iter().map(|v| v / h).collect();
    let ax_at = |i: isize, j: isize| ax[grid.idx(i, j)];
    let ay_at = |i: isize, j: isize| ay[grid.idx(i, j)];

    out.values_mut()
        .par_chunks_mut(nx)
        .enumerate()
        .try_for_each(|(j, row)| -> Result<()> {
            let j = j as isize;
            for i in 0..nx as isize {
                let along_x = sweep_line(|k| ax_at(k, j), i, field.node_fx(i, j), dt, h, scheme)?;
                let along_y = sweep_line(|k| ay_at(i, k), j, field.node_fy(i, j), dt, h, scheme)?;
                row[i as usize] = along_x + along_y;
            }
            Ok(())
        })
}

/// Contraction of a 0-form: identically zero, of empty degree.
pub fn contract_0form(w: &Cochain, dt: f64, grid: &GridComplex2D) -> Result<ContractionResult> {
    expect_degree(w, Degree::Zero)?;
    Ok(ContractionResult {
        cochain: Cochain::empty(grid),
        dt,
    })
}

/// Dispatches on the degree of `w`.
pub fn contract(
    w: &Cochain,
    field: &StaggeredVelocity,
    dt: f64,
    scheme: SchemeKind,
    grid: &GridComplex2D,
) -> Result<ContractionResult> {
    match w.degree() {
        Degree::Two => contract_2form(w, field, dt, scheme, grid),
        Degree::One => contract_1form(w, field, dt, scheme, grid),
        Degree::Zero => contract_0form(w, dt, grid),
        Degree::Empty => Ok(ContractionResult {
            cochain: Cochain::empty(grid),
            dt,
        }),
    }
}

fn expect_degree(w: &Cochain, degree: Degree) -> Result<()> {
    if w.degree() != degree {
        return Err(Error::DegreeMismatch {
            expected: degree.to_string(),
            found: w.degree().to_string(),
        });
    }
    Ok(())
}
