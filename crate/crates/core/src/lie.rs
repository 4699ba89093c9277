//! Discrete Lie derivative via Cartan's formula and explicit time stepping.
//!
//! Over one step of length `dt` the time-integrated Lie derivative of `w` is
//! `i_X(d w) + d(i_X w)`, with both contractions time-integrated over the
//! step. The update is `w <- w - i_X(d w) - d(i_X w)`.

use crate::cochain::{Cochain, Degree};
use crate::contraction::{check_scheme_fits, contract_1form_into, contract_2form_into};
use crate::dec::exterior_derivative_into;
use crate::error::{Error, Result};
use crate::fv::SchemeKind;
use crate::grid::GridComplex2D;
use crate::velocity::{max_courant, StaggeredVelocity};

pub const DEFAULT_COURANT_LIMIT: f64 = 0.5;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AdvectionConfig {
    pub dt: f64,
    pub steps: usize,
    pub scheme: SchemeKind,
    /// Largest accepted `|flux| dt / h^2` over all edges.
    pub courant_limit: f64,
}

impl AdvectionConfig {
    pub fn new(dt: f64, steps: usize, scheme: SchemeKind) -> Result<Self> {
        let cfg = Self {
            dt,
            steps,
            scheme,
            courant_limit: DEFAULT_COURANT_LIMIT,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_courant_limit(mut self, limit: f64) -> Result<Self> {
        self.courant_limit = limit;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(Error::Config(format!("time step {} must be positive", self.dt)));
        }
        if !(self.courant_limit > 0.0 && self.courant_limit <= 1.0) {
            return Err(Error::Config(format!(
                "Courant limit {} must lie in (0, 1]",
                self.courant_limit
            )));
        }
        Ok(())
    }

    /// Checks the configuration against a grid and field before stepping.
    pub fn check(&self, field: &StaggeredVelocity, grid: &GridComplex2D) -> Result<()> {
        self.validate()?;
        check_scheme_fits(self.scheme, grid)?;
        let courant = max_courant(field, self.dt, grid);
        if courant > self.courant_limit {
            return Err(Error::Courant {
                courant,
                limit: self.courant_limit,
                location: format!("dt = {:e} on a {}x{} grid", self.dt, grid.nx(), grid.ny()),
            });
        }
        Ok(())
    }
}

/// The two halves of Cartan's formula, both of the input degree.
#[derive(Clone, Debug, PartialEq)]
pub struct CartanTerms {
    /// `i_X(d w)`; zero for a 2-form.
    pub contraction_of_derivative: Cochain,
    /// `d(i_X w)`; zero for a 0-form.
    pub derivative_of_contraction: Cochain,
}

impl CartanTerms {
    pub fn sum(&self) -> Cochain {
        let mut out = self.contraction_of_derivative.clone();
        for (o, b) in out
            .values_mut()
            .iter_mut()
            .zip(self.derivative_of_contraction.values())
        {
            *o += b;
        }
        out
    }
}

/// Reusable buffers for repeated steps on one grid, field and scheme.
pub struct LieStepper<'a> {
    grid: &'a GridComplex2D,
    field: &'a StaggeredVelocity,
    cfg: AdvectionConfig,
    degree: Degree,
    dw: Cochain,
    ixdw: Cochain,
    ixw: Cochain,
    dixw: Cochain,
}

impl<'a> LieStepper<'a> {
    pub fn new(
        degree: Degree,
        field: &'a StaggeredVelocity,
        cfg: AdvectionConfig,
        grid: &'a GridComplex2D,
    ) -> Result<Self> {
        if degree == Degree::Empty {
            return Err(Error::InvalidDegree("cannot advect an empty-degree cochain".into()));
        }
        cfg.check(field, grid)?;
        Ok(Self {
            grid,
            field,
            cfg,
            degree,
            dw: Cochain::zeros(degree.raised(), grid),
            ixdw: Cochain::zeros(degree, grid),
            ixw: Cochain::zeros(degree.lowered(), grid),
            dixw: Cochain::zeros(degree, grid),
        })
    }

    pub fn config(&self) -> &AdvectionConfig {
        &self.cfg
    }

    /// Fills the internal Cartan term buffers for `w`.
    fn evaluate(&mut self, w: &Cochain) -> Result<()> {
        if w.degree() != self.degree {
            return Err(Error::DegreeMismatch {
                expected: self.degree.to_string(),
                found: w.degree().to_string(),
            });
        }
        w.check_grid(self.grid)?;
        let (grid, field, dt, scheme) = (self.grid, self.field, self.cfg.dt, self.cfg.scheme);
        // i_X d w
        exterior_derivative_into(w, grid, &mut self.dw);
        match self.degree {
            Degree::Zero => contract_1form_into(&self.dw, field, dt, scheme, grid, &mut self.ixdw)?,
            Degree::One => contract_2form_into(&self.dw, field, dt, scheme, grid, &mut self.ixdw)?,
            _ => {}
        }
        // d i_X w
        match self.degree {
            Degree::One => contract_1form_into(w, field, dt, scheme, grid, &mut self.ixw)?,
            Degree::Two => contract_2form_into(w, field, dt, scheme, grid, &mut self.ixw)?,
            _ => {}
        }
        if self.degree != Degree::Zero {
            exterior_derivative_into(&self.ixw, grid, &mut self.dixw);
        }
        Ok(())
    }

    pub fn terms(&mut self, w: &Cochain) -> Result<CartanTerms> {
        self.evaluate(w)?;
        Ok(CartanTerms {
            contraction_of_derivative: self.ixdw.clone(),
            derivative_of_contraction: self.dixw.clone(),
        })
    }

    /// Advances `w` by one step in place.
    pub fn step_in_place(&mut self, w: &mut Cochain) -> Result<()> {
        self.evaluate(w)?;
        for ((v, a), b) in w
            .values_mut()
            .iter_mut()
            .zip(self.ixdw.values())
            .zip(self.dixw.values())
        {
            *v = *v - a - b;
        }
        if let Some(bad) = w.first_non_finite() {
            return Err(Error::NonFinite(format!(
                "degree-{} entry {bad} after a step",
                self.degree
            )));
        }
        Ok(())
    }
}

/// Cartan's two terms for `w` over one step.
pub fn cartan_terms(
    w: &Cochain,
    field: &StaggeredVelocity,
    cfg: &AdvectionConfig,
    grid: &GridComplex2D,
) -> Result<CartanTerms> {
    LieStepper::new(w.degree(), field, *cfg, grid)?.terms(w)
}

/// Time-integrated Lie derivative of `w` over one step, same degree as `w`.
pub fn lie_increment(
    w: &Cochain,
    field: &StaggeredVelocity,
    cfg: &AdvectionConfig,
    grid: &GridComplex2D,
) -> Result<Cochain> {
    Ok(cartan_terms(w, field, cfg, grid)?.sum())
}

/// One explicit update `w - i_X(d w) - d(i_X w)`.
pub fn step(
    w: &Cochain,
    field: &StaggeredVelocity,
    cfg: &AdvectionConfig,
    grid: &GridComplex2D,
) -> Result<Cochain> {
    let mut next = w.clone();
    LieStepper::new(w.degree(), field, *cfg, grid)?.step_in_place(&mut next)?;
    Ok(next)
}

/// Runs `cfg.steps` updates from `w0`.
///
/// `observer` is called with `(0, w0)` and then with `(n, w_n)` after every
/// step; an observer error aborts the run.
pub fn advect(
    w0: &Cochain,
    field: &StaggeredVelocity,
    cfg: &AdvectionConfig,
    grid: &GridComplex2D,
    mut observer: impl FnMut(usize, &Cochain) -> Result<()>,
) -> Result<Cochain> {
    let mut w = w0.clone();
    observer(0, &w)?;
    if cfg.steps == 0 {
        return Ok(w);
    }
    let mut stepper = LieStepper::new(w0.degree(), field, *cfg, grid)?;
    for n in 1..=cfg.steps {
        stepper.step_in_place(&mut w)?;
        observer(n, &w)?;
    }
    Ok(w)
}
