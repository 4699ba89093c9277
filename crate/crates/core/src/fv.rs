//! One-dimensional finite-volume reconstruction and time-integrated flux
//! kernels.
//!
//! A [`Stencil1D`] is a window of `2 * half_width` cell averages centred on one
//! interface: the interface lies between `values[hw - 1]` and `values[hw]`.
//! The reconstruction is evaluated from the upwind side only.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Regularization added to the WENO smoothness indicators.
pub const WENO_EPSILON: f64 = 1e-6;

/// Largest Courant number a single kernel evaluation accepts.
pub const KERNEL_COURANT_LIMIT: f64 = 1.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SchemeKind {
    /// Piecewise-constant upwind (donor cell).
    UpwindPc,
    Weno5,
    Weno7,
}

impl SchemeKind {
    pub const ALL: [SchemeKind; 3] = [SchemeKind::UpwindPc, SchemeKind::Weno5, SchemeKind::Weno7];

    /// Number of cells on each side of the interface the window spans.
    pub fn half_width(self) -> usize {
        match self {
            SchemeKind::UpwindPc => 1,
            SchemeKind::Weno5 => 3,
            SchemeKind::Weno7 => 4,
        }
    }

    pub fn window_len(self) -> usize {
        2 * self.half_width()
    }

    pub fn name(self) -> &'static str {
        match self {
            SchemeKind::UpwindPc => "upwind",
            SchemeKind::Weno5 => "weno5",
            SchemeKind::Weno7 => "weno7",
        }
    }
}

impl fmt::Display for SchemeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SchemeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "upwind" | "upwindpc" | "upwind-pc" => Ok(SchemeKind::UpwindPc),
            "weno5" => Ok(SchemeKind::Weno5),
            "weno7" => Ok(SchemeKind::Weno7),
            other => Err(Error::Config(format!(
                "unknown scheme `{other}` (expected upwind, weno5 or weno7)"
            ))),
        }
    }
}

/// Direction in which material crosses the interface.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sweep {
    /// Flow towards increasing index; the upwind cell is `values[hw - 1]`.
    Forward,
    /// Flow towards decreasing index; the upwind cell is `values[hw]`.
    Backward,
}

impl Sweep {
    /// `None` for a zero flux.
    pub fn of_flux(flux: f64) -> Option<Sweep> {
        if flux > 0.0 {
            Some(Sweep::Forward)
        } else if flux < 0.0 {
            Some(Sweep::Backward)
        } else {
            None
        }
    }
}

/// Window of cell averages around one interface.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Stencil1D {
    values: [f64; 8],
    len: usize,
    pub sweep: Sweep,
}

impl Stencil1D {
    pub fn new(values: &[f64], sweep: Sweep) -> Self {
        assert!(
            values.len().is_multiple_of(2) && (2..=8).contains(&values.len()),
            "window length {} not supported",
            values.len()
        );
        let mut buf = [0.0; 8];
        buf[..values.len()].copy_from_slice(values);
        Self {
            values: buf,
            len: values.len(),
            sweep,
        }
    }

    /// Gathers the window for the interface just before index `at` on a
    /// periodic line: cells `at - hw ..= at + hw - 1`.
    pub fn gather(line: impl Fn(isize) -> f64, at: isize, half_width: usize, sweep: Sweep) -> Self {
        let hw = half_width as isize;
        let mut buf = [0.0; 8];
        for (slot, k) in buf.iter_mut().zip(at - hw..at + hw) {
            *slot = line(k);
        }
        Self {
            values: buf,
            len: 2 * half_width,
            sweep,
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.values[..self.len]
    }

    pub fn half_width(&self) -> usize {
        self.len / 2
    }

    /// The window reversed in space with the sweep flipped.
    pub fn mirrored(&self) -> Self {
        let mut buf = [0.0; 8];
        for (dst, src) in buf.iter_mut().zip(self.values().iter().rev()) {
            *dst = *src;
        }
        Self {
            values: buf,
            len: self.len,
            sweep: match self.sweep {
                Sweep::Forward => Sweep::Backward,
                Sweep::Backward => Sweep::Forward,
            },
        }
    }

    /// Upwind-oriented cells: index `r - 1` is the upwind cell, the
    /// interface lies to its right. Length `2 * hw - 1`.
    fn oriented(&self, hw: usize) -> [f64; 7] {
        let centre = self.len / 2;
        let mut out = [0.0; 7];
        match self.sweep {
            Sweep::Forward => {
                for (k, slot) in out.iter_mut().take(2 * hw - 1).enumerate() {
                    *slot = self.values[centre - hw + k];
                }
            }
            Sweep::Backward => {
                for (k, slot) in out.iter_mut().take(2 * hw - 1).enumerate() {
                    *slot = self.values[centre + hw - 1 - k];
                }
            }
        }
        out
    }
}

/// Value of the reconstruction at the interface, taken from the upwind side.
pub fn reconstruct_at_interface(stencil: &Stencil1D, scheme: SchemeKind) -> f64 {
    let hw = scheme.half_width();
    assert!(
        stencil.half_width() >= hw,
        "{scheme} needs a window of {} cells, got {}",
        2 * hw,
        stencil.len
    );
    let u = stencil.oriented(hw);
    match scheme {
        SchemeKind::UpwindPc => u[0],
        SchemeKind::Weno5 => weno5(&[u[0], u[1], u[2], u[3], u[4]]),
        SchemeKind::Weno7 => weno7(&u),
    }
}

/// Approximates the integral of the reconstructed density over the backward
/// extrusion of the interface during `dt`: `q * flux * dt / h`, where `q` is
/// the reconstructed interface value. Zero flux gives zero.
pub fn extrusion_integral(
    stencil: &Stencil1D,
    flux: f64,
    dt: f64,
    h: f64,
    scheme: SchemeKind,
) -> Result<f64> {
    let courant = flux.abs() * dt / (h * h);
    if courant > KERNEL_COURANT_LIMIT {
        return Err(Error::Courant {
            courant,
            limit: KERNEL_COURANT_LIMIT,
            location: format!("{scheme} kernel with flux {flux:e}"),
        });
    }
    let Some(sweep) = Sweep::of_flux(flux) else {
        return Ok(0.0);
    };
    debug_assert_eq!(sweep, stencil.sweep, "stencil sweep must follow the flux sign");
    Ok(reconstruct_at_interface(stencil, scheme) * (flux * dt / h))
}

/// Candidate values, smoothness indicators and nonlinear weights of one
/// WENO evaluation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WenoParts<const N: usize> {
    pub candidates: [f64; N],
    pub smoothness: [f64; N],
    pub weights: [f64; N],
}

impl<const N: usize> WenoParts<N> {
    fn new(candidates: [f64; N], smoothness: [f64; N], linear: [f64; N]) -> Self {
        let mut weights = [0.0; N];
        let mut total = 0.0;
        for k in 0..N {
            let denom = WENO_EPSILON + smoothness[k];
            weights[k] = linear[k] / (denom * denom);
            total += weights[k];
        }
        weights.iter_mut().for_each(|w| *w /= total);
        Self {
            candidates,
            smoothness,
            weights,
        }
    }

    pub fn value(&self) -> f64 {
        self.weights
            .iter()
            .zip(&self.candidates)
            .map(|(w, q)| w * q)
            .sum()
    }
}

/// WENO-5 pieces for `u = [u_{i-2}, .., u_{i+2}]`, interface at `i + 1/2`.
pub fn weno5_parts(u: &[f64; 5]) -> WenoParts<3> {
    let [a, b, c, d, e] = *u;
    let sq = |v: f64| v * v;
    WenoParts::new(
        [
            (2.0 * a - 7.0 * b + 11.0 * c) / 6.0,
            (-b + 5.0 * c + 2.0 * d) / 6.0,
            (2.0 * c + 5.0 * d - e) / 6.0,
        ],
        [
            13.0 / 12.0 * sq(a - 2.0 * b + c) + 0.25 * sq(a - 4.0 * b + 3.0 * c),
            13.0 / 12.0 * sq(b - 2.0 * c + d) + 0.25 * sq(b - d),
            13.0 / 12.0 * sq(c - 2.0 * d + e) + 0.25 * sq(3.0 * c - 4.0 * d + e),
        ],
        [0.1, 0.6, 0.3],
    )
}

/// WENO-7 pieces for `u = [u_{i-3}, .., u_{i+3}]`, interface at `i + 1/2`.
pub fn weno7_parts(u: &[f64; 7]) -> WenoParts<4> {
    let [a, b, c, d, e, f, g] = *u;
    // quadratic forms are positive semidefinite; clamp roundoff below zero
    let beta = [
        a * (547.0 * a - 3882.0 * b + 4642.0 * c - 1854.0 * d)
            + b * (7043.0 * b - 17246.0 * c + 7042.0 * d)
            + c * (11003.0 * c - 9402.0 * d)
            + 2107.0 * d * d,
        b * (267.0 * b - 1642.0 * c + 1602.0 * d - 494.0 * e)
            + c * (2843.0 * c - 5966.0 * d + 1922.0 * e)
            + d * (3443.0 * d - 2522.0 * e)
            + 547.0 * e * e,
        c * (547.0 * c - 2522.0 * d + 1922.0 * e - 494.0 * f)
            + d * (3443.0 * d - 5966.0 * e + 1602.0 * f)
            + e * (2843.0 * e - 1642.0 * f)
            + 267.0 * f * f,
        d * (2107.0 * d - 9402.0 * e + 7042.0 * f - 1854.0 * g)
            + e * (11003.0 * e - 17246.0 * f + 4642.0 * g)
            + f * (7043.0 * f - 3882.0 * g)
            + 547.0 * g * g,
    ]
    .map(|b| b.max(0.0));
    WenoParts::new(
        [
            (-3.0 * a + 13.0 * b - 23.0 * c + 25.0 * d) / 12.0,
            (b - 5.0 * c + 13.0 * d + 3.0 * e) / 12.0,
            (-c + 7.0 * d + 7.0 * e - f) / 12.0,
            (3.0 * d + 13.0 * e - 5.0 * f + g) / 12.0,
        ],
        beta,
        [1.0 / 35.0, 12.0 / 35.0, 18.0 / 35.0, 4.0 / 35.0],
    )
}

fn weno5(u: &[f64; 5]) -> f64 {
    weno5_parts(u).value()
}

fn weno7(u: &[f64; 7]) -> f64 {
    weno7_parts(u).value()
}
