//! Discrete k-forms: one real value per oriented k-cell.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::grid::{Axis, CellRef, GridComplex2D};

/// Degree of a cochain on the 2-D complex.
///
/// `Empty` is the identically-zero result of operators that leave the range
/// `0..=2` (the derivative of a 2-form, the contraction of a 0-form).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Degree {
    Zero,
    One,
    Two,
    Empty,
}

impl Degree {
    pub fn from_k(k: usize) -> Result<Self> {
        match k {
            0 => Ok(Degree::Zero),
            1 => Ok(Degree::One),
            2 => Ok(Degree::Two),
            _ => Err(Error::InvalidDegree(format!("degree {k} outside 0..=2"))),
        }
    }

    pub fn k(self) -> Option<usize> {
        match self {
            Degree::Zero => Some(0),
            Degree::One => Some(1),
            Degree::Two => Some(2),
            Degree::Empty => None,
        }
    }

    /// Degree of `d` applied to a form of this degree.
    pub fn raised(self) -> Degree {
        match self {
            Degree::Zero => Degree::One,
            Degree::One => Degree::Two,
            Degree::Two | Degree::Empty => Degree::Empty,
        }
    }

    /// Degree of a contraction of a form of this degree.
    pub fn lowered(self) -> Degree {
        match self {
            Degree::Two => Degree::One,
            Degree::One => Degree::Zero,
            Degree::Zero | Degree::Empty => Degree::Empty,
        }
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.k() {
            Some(k) => write!(f, "{k}"),
            None => f.write_str("empty"),
        }
    }
}

/// Values of a discrete form in canonical cell order.
///
/// For degree 1 the first half of `values` holds the horizontal-edge plane
/// (`dx` components) and the second half the vertical-edge plane (`dy`).
#[derive(Clone, Debug, PartialEq)]
pub struct Cochain {
    degree: Degree,
    nx: usize,
    ny: usize,
    values: Vec<f64>,
}

impl Cochain {
    pub fn zeros(degree: Degree, grid: &GridComplex2D) -> Self {
        let len = degree.k().map_or(0, |k| grid.cell_count(k));
        Self {
            degree,
            nx: grid.nx(),
            ny: grid.ny(),
            values: vec![0.0; len],
        }
    }

    pub fn empty(grid: &GridComplex2D) -> Self {
        Self::zeros(Degree::Empty, grid)
    }

    pub fn from_values(degree: Degree, grid: &GridComplex2D, values: Vec<f64>) -> Result<Self> {
        let expected = degree.k().map_or(0, |k| grid.cell_count(k));
        if values.len() != expected {
            return Err(Error::DegreeMismatch {
                expected: format!("{expected} values for degree {degree}"),
                found: format!("{} values", values.len()),
            });
        }
        Ok(Self {
            degree,
            nx: grid.nx(),
            ny: grid.ny(),
            values,
        })
    }

    /// Degree-1 cochain built from its two component planes.
    pub fn from_planes(grid: &GridComplex2D, x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        let mut values = x;
        values.extend(y);
        Self::from_values(Degree::One, grid, values)
    }

    #[inline]
    pub fn degree(&self) -> Degree {
        self.degree
    }

    #[inline]
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    #[inline]
    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.nx, self.ny)
    }

    pub fn is_empty_degree(&self) -> bool {
        self.degree == Degree::Empty
    }

    #[inline]
    fn idx(&self, i: isize, j: isize) -> usize {
        let i = i.rem_euclid(self.nx as isize) as usize;
        let j = j.rem_euclid(self.ny as isize) as usize;
        j * self.nx + i
    }

    /// Value on vertex or face `(i, j)` with periodic wrap.
    #[inline]
    pub fn at(&self, i: isize, j: isize) -> f64 {
        debug_assert!(matches!(self.degree, Degree::Zero | Degree::Two));
        self.values[self.idx(i, j)]
    }

    /// `dx` component on horizontal edge `(i, j)`.
    #[inline]
    pub fn x(&self, i: isize, j: isize) -> f64 {
        debug_assert_eq!(self.degree, Degree::One);
        self.values[self.idx(i, j)]
    }

    /// `dy` component on vertical edge `(i, j)`.
    #[inline]
    pub fn y(&self, i: isize, j: isize) -> f64 {
        debug_assert_eq!(self.degree, Degree::One);
        self.values[self.nx * self.ny + self.idx(i, j)]
    }

    /// Component plane of a degree-1 cochain.
    pub fn plane(&self, axis: Axis) -> &[f64] {
        assert_eq!(self.degree, Degree::One, "component planes exist only for 1-forms");
        let n = self.nx * self.ny;
        match axis {
            Axis::X => &self.values[..n],
            Axis::Y => &self.values[n..],
        }
    }

    pub fn get(&self, grid: &GridComplex2D, cell: CellRef) -> f64 {
        self.values[grid.local_index(cell)]
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn scaled(&self, a: f64) -> Cochain {
        let mut out = self.clone();
        out.values.iter_mut().for_each(|v| *v *= a);
        out
    }

    /// First non-finite entry, if any.
    pub fn first_non_finite(&self) -> Option<usize> {
        self.values.iter().position(|v| !v.is_finite())
    }

    pub(crate) fn check_compatible(&self, other: &Cochain) -> Result<()> {
        if self.degree != other.degree || self.shape() != other.shape() {
            return Err(Error::DegreeMismatch {
                expected: format!("degree {} on {:?}", self.degree, self.shape()),
                found: format!("degree {} on {:?}", other.degree, other.shape()),
            });
        }
        Ok(())
    }

    pub(crate) fn check_grid(&self, grid: &GridComplex2D) -> Result<()> {
        if self.shape() != (grid.nx(), grid.ny()) {
            return Err(Error::InvalidGrid(format!(
                "cochain on {:?} used with a {}x{} grid",
                self.shape(),
                grid.nx(),
                grid.ny()
            )));
        }
        Ok(())
    }
}

/// `a * x + y`, elementwise.
pub fn axpy(a: f64, x: &Cochain, y: &Cochain) -> Result<Cochain> {
    x.check_compatible(y)?;
    let mut out = y.clone();
    for (o, &xv) in out.values.iter_mut().zip(&x.values) {
        *o += a * xv;
    }
    Ok(out)
}

/// Which discrete norm to evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Norm {
    L1,
    L2,
}

/// `L1`: `h * sum |w|`; `L2`: `sqrt(sum w^2)`, summed over every entry of
/// every component plane.
pub fn norm(w: &Cochain, p: Norm, grid: &GridComplex2D) -> f64 {
    match p {
        Norm::L1 => grid.h() * w.values.iter().map(|v| v.abs()).sum::<f64>(),
        Norm::L2 => w.values.iter().map(|v| v * v).sum::<f64>().sqrt(),
    }
}

pub type ScalarField = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

/// Axis-aligned rectangle `[x0, x1] x [y0, y1]` in domain coordinates.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Rect {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
}

impl Rect {
    /// Weight of a transverse coordinate: 1 inside, 1/2 on a side, 0 outside.
    fn membership(lo: f64, hi: f64, c: f64) -> f64 {
        if c > lo && c < hi {
            1.0
        } else if c == lo || c == hi {
            0.5
        } else {
            0.0
        }
    }

    fn overlap(lo: f64, hi: f64, a: f64, b: f64) -> f64 {
        (b.min(hi) - a.max(lo)).max(0.0)
    }
}

/// A continuous form that can be integrated onto the complex.
#[derive(Clone)]
pub enum AnalyticForm {
    /// Smooth 0-form sampled at vertices.
    Scalar(ScalarField),
    /// Smooth 1-form `a dx + b dy`.
    OneForm { dx: ScalarField, dy: ScalarField },
    /// Smooth 2-form `rho dx^dy`.
    Density(ScalarField),
    /// `cx dx + cy dy` inside `rect`, zero outside; integrated exactly.
    BoxOneForm { rect: Rect, cx: f64, cy: f64 },
    /// `rho dx^dy` inside `rect`, zero outside; integrated exactly.
    BoxDensity { rect: Rect, rho: f64 },
}

impl fmt::Debug for AnalyticForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AnalyticForm::Scalar(_) => f.write_str("Scalar(..)"),
            AnalyticForm::OneForm { .. } => f.write_str("OneForm { .. }"),
            AnalyticForm::Density(_) => f.write_str("Density(..)"),
            AnalyticForm::BoxOneForm { rect, cx, cy } => f
                .debug_struct("BoxOneForm")
                .field("rect", rect)
                .field("cx", cx)
                .field("cy", cy)
                .finish(),
            AnalyticForm::BoxDensity { rect, rho } => f
                .debug_struct("BoxDensity")
                .field("rect", rect)
                .field("rho", rho)
                .finish(),
        }
    }
}

impl AnalyticForm {
    pub fn scalar(f: impl Fn(f64, f64) -> f64 + Send + Sync + 'static) -> Self {
        AnalyticForm::Scalar(Arc::new(f))
    }

    pub fn one_form(
        dx: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
        dy: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        AnalyticForm::OneForm {
            dx: Arc::new(dx),
            dy: Arc::new(dy),
        }
    }

    pub fn density(rho: impl Fn(f64, f64) -> f64 + Send + Sync + 'static) -> Self {
        AnalyticForm::Density(Arc::new(rho))
    }

    pub fn degree(&self) -> Degree {
        match self {
            AnalyticForm::Scalar(_) => Degree::Zero,
            AnalyticForm::OneForm { .. } | AnalyticForm::BoxOneForm { .. } => Degree::One,
            AnalyticForm::Density(_) | AnalyticForm::BoxDensity { .. } => Degree::Two,
        }
    }
}

// 3-point Gauss-Legendre rule on [-1, 1].
const GAUSS_NODES: [f64; 3] = [-0.774_596_669_241_483_4, 0.0, 0.774_596_669_241_483_4];
const GAUSS_WEIGHTS: [f64; 3] = [5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0];

fn gauss_1d(a: f64, b: f64, f: impl Fn(f64) -> f64) -> f64 {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let s: f64 = GAUSS_NODES
        .iter()
        .zip(GAUSS_WEIGHTS)
        .map(|(&t, w)| w * f(mid + half * t))
        .sum();
    half * s
}

/// Integrates `form` over every cell of the matching dimension.
pub fn discretize(form: &AnalyticForm, grid: &GridComplex2D) -> Result<Cochain> {
    let h = grid.h();
    let (nx, ny) = (grid.nx(), grid.ny());
    let mut out = Cochain::zeros(form.degree(), grid);
    let n = grid.plane_len();
    for j in 0..ny {
        for i in 0..nx {
            let (x, y) = (i as f64 * h, j as f64 * h);
            let (xe, ye) = ((i + 1) as f64 * h, (j + 1) as f64 * h);
            let k = j * nx + i;
            match form {
                AnalyticForm::Scalar(f) => out.values[k] = f(x, y),
                AnalyticForm::OneForm { dx, dy } => {
                    out.values[k] = gauss_1d(x, xe, |s| dx(s, y));
                    out.values[n + k] = gauss_1d(y, ye, |s| dy(x, s));
                }
                AnalyticForm::Density(rho) => {
                    out.values[k] = gauss_1d(y, ye, |t| gauss_1d(x, xe, |s| rho(s, t)));
                }
                AnalyticForm::BoxOneForm { rect, cx, cy } => {
                    out.values[k] = cx
                        * Rect::membership(rect.y0, rect.y1, y)
                        * Rect::overlap(rect.x0, rect.x1, x, xe);
                    out.values[n + k] = cy
                        * Rect::membership(rect.x0, rect.x1, x)
                        * Rect::overlap(rect.y0, rect.y1, y, ye);
                }
                AnalyticForm::BoxDensity { rect, rho } => {
                    out.values[k] = rho
                        * Rect::overlap(rect.x0, rect.x1, x, xe)
                        * Rect::overlap(rect.y0, rect.y1, y, ye);
                }
            }
        }
    }
    if let Some(bad) = out.first_non_finite() {
        let cell = grid
            .unflatten(global_offset(out.degree, n) + bad)
            .expect("index within the complex");
        return Err(Error::NonFinite(format!("{cell:?} while discretizing")));
    }
    Ok(out)
}

fn global_offset(degree: Degree, n: usize) -> usize {
    match degree {
        Degree::Zero => 0,
        Degree::One => n,
        _ => 3 * n,
    }
}
