//! Discrete vector fields stored as integrated fluxes on edges (MAC layout).

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::grid::GridComplex2D;

/// Edge fluxes of a vector field.
///
/// `x_flux[(i, j)]` is the flux in `+x` through vertical edge `(i, j)` and
/// `y_flux[(i, j)]` the flux in `+y` through horizontal edge `(i, j)`. Both
/// are velocity times edge length.
#[derive(Clone, Debug, PartialEq)]
pub struct StaggeredVelocity {
    nx: usize,
    ny: usize,
    x_flux: Vec<f64>,
    y_flux: Vec<f64>,
}

impl StaggeredVelocity {
    pub fn zero(grid: &GridComplex2D) -> Self {
        let n = grid.plane_len();
        Self {
            nx: grid.nx(),
            ny: grid.ny(),
            x_flux: vec![0.0; n],
            y_flux: vec![0.0; n],
        }
    }

    pub fn from_fluxes(grid: &GridComplex2D, x_flux: Vec<f64>, y_flux: Vec<f64>) -> Result<Self> {
        let n = grid.plane_len();
        if x_flux.len() != n || y_flux.len() != n {
            return Err(Error::InvalidGrid(format!(
                "flux planes of length {} and {} on a grid with {n} edges per axis",
                x_flux.len(),
                y_flux.len()
            )));
        }
        Ok(Self {
            nx: grid.nx(),
            ny: grid.ny(),
            x_flux,
            y_flux,
        })
    }

    #[inline]
    fn idx(&self, i: isize, j: isize) -> usize {
        let i = i.rem_euclid(self.nx as isize) as usize;
        let j = j.rem_euclid(self.ny as isize) as usize;
        j * self.nx + i
    }

    /// `X^x` on vertical edge `(i, j)`.
    #[inline]
    pub fn fx(&self, i: isize, j: isize) -> f64 {
        self.x_flux[self.idx(i, j)]
    }

    /// `X^y` on horizontal edge `(i, j)`.
    #[inline]
    pub fn fy(&self, i: isize, j: isize) -> f64 {
        self.y_flux[self.idx(i, j)]
    }

    pub fn x_flux(&self) -> &[f64] {
        &self.x_flux
    }

    pub fn y_flux(&self) -> &[f64] {
        &self.y_flux
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.nx, self.ny)
    }

    pub fn negated(&self) -> Self {
        Self {
            nx: self.nx,
            ny: self.ny,
            x_flux: self.x_flux.iter().map(|v| -v).collect(),
            y_flux: self.y_flux.iter().map(|v| -v).collect(),
        }
    }

    pub fn scaled(&self, a: f64) -> Self {
        Self {
            nx: self.nx,
            ny: self.ny,
            x_flux: self.x_flux.iter().map(|v| a * v).collect(),
            y_flux: self.y_flux.iter().map(|v| a * v).collect(),
        }
    }

    pub fn max_abs_flux(&self) -> f64 {
        self.x_flux
            .iter()
            .chain(&self.y_flux)
            .fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Signed outflow of cell `(i, j)`.
    pub fn cell_divergence(&self, i: isize, j: isize) -> f64 {
        self.fx(i + 1, j) - self.fx(i, j) + self.fy(i, j + 1) - self.fy(i, j)
    }

    /// Node-averaged x flux at vertex `(i, j)`.
    #[inline]
    pub fn node_fx(&self, i: isize, j: isize) -> f64 {
        (self.fx(i, j) + self.fx(i, j - 1)) / 2.0
    }

    /// Node-averaged y flux at vertex `(i, j)`.
    #[inline]
    pub fn node_fy(&self, i: isize, j: isize) -> f64 {
        (self.fy(i, j) + self.fy(i - 1, j)) / 2.0
    }
}

pub type StreamFunction = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

/// Source of a continuous velocity field.
#[derive(Clone)]
pub enum VelocityProvider {
    Constant { vx: f64, vy: f64 },
    /// Velocity `(-d psi/dy, d psi/dx)`.
    Stream(StreamFunction),
}

impl fmt::Debug for VelocityProvider {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VelocityProvider::Constant { vx, vy } => {
                f.debug_struct("Constant").field("vx", vx).field("vy", vy).finish()
            }
            VelocityProvider::Stream(_) => f.write_str("Stream(..)"),
        }
    }
}

impl VelocityProvider {
    pub fn constant(vx: f64, vy: f64) -> Self {
        VelocityProvider::Constant { vx, vy }
    }

    pub fn stream(psi: impl Fn(f64, f64) -> f64 + Send + Sync + 'static) -> Self {
        VelocityProvider::Stream(Arc::new(psi))
    }

    /// Single-vortex field on the unit square,
    /// `psi = sin^2(pi x) sin^2(pi y) / pi`.
    pub fn rudman_vortex() -> Self {
        Self::stream(|x, y| {
            let (sx, sy) = ((PI * x).sin(), (PI * y).sin());
            sx * sx * sy * sy / PI
        })
    }

    pub fn negated(&self) -> Self {
        match self {
            VelocityProvider::Constant { vx, vy } => Self::constant(-vx, -vy),
            VelocityProvider::Stream(psi) => {
                let psi = Arc::clone(psi);
                Self::stream(move |x, y| -psi(x, y))
            }
        }
    }
}

pub fn discretize_velocity(
    provider: &VelocityProvider,
    grid: &GridComplex2D,
) -> Result<StaggeredVelocity> {
    let (nx, ny, h) = (grid.nx(), grid.ny(), grid.h());
    let n = grid.plane_len();
    match provider {
        VelocityProvider::Constant { vx, vy } => {
            if !(vx.is_finite() && vy.is_finite()) {
                return Err(Error::NonFinite("constant velocity".into()));
            }
            StaggeredVelocity::from_fluxes(grid, vec![vx * h; n], vec![vy * h; n])
        }
        VelocityProvider::Stream(psi) => {
            let mut nodes = Vec::with_capacity(n);
            for j in 0..ny {
                for i in 0..nx {
                    let v = psi(i as f64 * h, j as f64 * h);
                    if !v.is_finite() {
                        return Err(Error::NonFinite(format!("stream function at vertex ({i}, {j})")));
                    }
                    nodes.push(v);
                }
            }
            let at = |i: usize, j: usize| nodes[(j % ny) * nx + (i % nx)];
            let mut x_flux = vec![0.0; n];
            let mut y_flux = vec![0.0; n];
            for j in 0..ny {
                for i in 0..nx {
                    // flux through (i,j)->(i,j+1) in +x is psi(tail) - psi(head)
                    x_flux[j * nx + i] = at(i, j) - at(i, j + 1);
                    // flux through (i,j)->(i+1,j) in +y is psi(head) - psi(tail)
                    y_flux[j * nx + i] = at(i + 1, j) - at(i, j);
                }
            }
            StaggeredVelocity::from_fluxes(grid, x_flux, y_flux)
        }
    }
}

/// Node-wise `(x flux, y flux)` planes from two-edge averages.
pub fn average_to_node(field: &StaggeredVelocity, grid: &GridComplex2D) -> (Vec<f64>, Vec<f64>) {
    let (nx, ny) = (grid.nx() as isize, grid.ny() as isize);
    let mut fx = Vec::with_capacity(grid.plane_len());
    let mut fy = Vec::with_capacity(grid.plane_len());
    for j in 0..ny {
        for i in 0..nx {
            fx.push(field.node_fx(i, j));
            fy.push(field.node_fy(i, j));
        }
    }
    (fx, fy)
}

/// Largest `|flux| dt / h^2` over all edges.
pub fn max_courant(field: &StaggeredVelocity, dt: f64, grid: &GridComplex2D) -> f64 {
    field.max_abs_flux() * dt / (grid.h() * grid.h())
}
