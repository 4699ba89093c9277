//! Discrete Lie advection of differential forms on periodic Cartesian grids.
//!
//! Forms are stored as cochains (one value per oriented cell), vector fields as
//! edge fluxes. The interior product is computed with upwinded finite-volume
//! extrusions, and the Lie derivative is assembled as `i_X d + d i_X`.

pub mod artifacts;
pub mod cochain;
pub mod contraction;
pub mod dec;
pub mod error;
pub mod experiments;
pub mod fv;
pub mod grid;
pub mod lie;
pub mod velocity;

pub use artifacts::{read_errors_csv, read_field, render_field, write_errors_csv, write_field, ErrorRecord, Raster};
pub use cochain::{axpy, discretize, norm, AnalyticForm, Cochain, Degree, Norm, Rect};
pub use contraction::{contract, contract_0form, contract_1form, contract_2form, ContractionResult};
pub use dec::exterior_derivative;
pub use error::{Error, Result};
pub use experiments::{fit_convergence_slope, run_scenario, simulate, Scenario, ScenarioParams, SlopeFit, SlopeValue};
pub use fv::{extrusion_integral, reconstruct_at_interface, SchemeKind, Stencil1D, Sweep};
pub use grid::{Axis, CellRef, GridComplex2D, IncidenceOperator};
pub use lie::{advect, lie_increment, step, AdvectionConfig, CartanTerms, LieStepper};
pub use velocity::{average_to_node, discretize_velocity, max_courant, StaggeredVelocity, VelocityProvider};
