//! Named advection scenarios, convergence sweeps and slope fitting.

use std::f64::consts::PI;
use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;
use std::time::Instant;

use crate::artifacts::{render_field, write_errors_csv, write_field, ErrorRecord};
use crate::cochain::{axpy, discretize, norm, AnalyticForm, Cochain, Norm, Rect};
use crate::error::{Error, Result};
use crate::fv::SchemeKind;
use crate::grid::GridComplex2D;
use crate::lie::{advect, AdvectionConfig};
use crate::velocity::{discretize_velocity, VelocityProvider};

/// Support of the piecewise-constant `dy` form used by the discontinuous scenarios.
pub const BOX: Rect = Rect {
    x0: 0.3,
    x1: 0.6,
    y0: 0.25,
    y1: 0.7,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Scenario {
    SquareTranslate,
    RudmanVortex,
    ConvergenceSmoothConstant,
    ConvergenceSmoothVortex,
    ConvergenceDiscontinuous,
    Scalar0Form,
    Volume2FormEquivalence,
}

impl Scenario {
    pub const ALL: [Scenario; 7] = [
        Scenario::SquareTranslate,
        Scenario::RudmanVortex,
        Scenario::ConvergenceSmoothConstant,
        Scenario::ConvergenceSmoothVortex,
        Scenario::ConvergenceDiscontinuous,
        Scenario::Scalar0Form,
        Scenario::Volume2FormEquivalence,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Scenario::SquareTranslate => "square-translate",
            Scenario::RudmanVortex => "rudman-vortex",
            Scenario::ConvergenceSmoothConstant => "convergence-smooth-constant",
            Scenario::ConvergenceSmoothVortex => "convergence-smooth-vortex",
            Scenario::ConvergenceDiscontinuous => "convergence-discontinuous",
            Scenario::Scalar0Form => "scalar-0form",
            Scenario::Volume2FormEquivalence => "volume-2form-equivalence",
        }
    }

    /// Vortex scenarios run forward for `duration`, then back in the negated field.
    pub fn is_vortex(self) -> bool {
        matches!(
            self,
            Scenario::RudmanVortex | Scenario::ConvergenceSmoothVortex | Scenario::ConvergenceDiscontinuous
        )
    }

    pub fn initial_form(self) -> AnalyticForm {
        match self {
            Scenario::SquareTranslate | Scenario::RudmanVortex | Scenario::ConvergenceDiscontinuous => {
                AnalyticForm::BoxOneForm {
                    rect: BOX,
                    cx: 0.0,
                    cy: 1.0,
                }
            }
            Scenario::ConvergenceSmoothConstant | Scenario::ConvergenceSmoothVortex => smooth_one_form(),
            Scenario::Scalar0Form => AnalyticForm::scalar(|x, y| (2.0 * PI * x).sin() * (2.0 * PI * y).sin()),
            Scenario::Volume2FormEquivalence => {
                AnalyticForm::density(|x, y| 1.0 + 0.5 * (2.0 * PI * x).sin() * (2.0 * PI * y).cos())
            }
        }
    }

    pub fn defaults(self) -> ScenarioParams {
        let base = ScenarioParams {
            resolutions: vec![48],
            schemes: vec![SchemeKind::UpwindPc, SchemeKind::Weno7],
            dt: None,
            duration: 1.0,
            steps: None,
            velocity: None,
            record_timing: true,
            dump_every: None,
            images: true,
        };
        match self {
            Scenario::SquareTranslate => ScenarioParams {
                dt: Some(1e-3),
                ..base
            },
            Scenario::RudmanVortex => ScenarioParams {
                dt: Some(1e-3),
                dump_every: Some(200),
                ..base
            },
            Scenario::ConvergenceSmoothConstant | Scenario::Scalar0Form | Scenario::Volume2FormEquivalence => {
                ScenarioParams {
                    resolutions: vec![16, 32, 64, 128],
                    images: false,
                    ..base
                }
            }
            Scenario::ConvergenceSmoothVortex => ScenarioParams {
                resolutions: vec![16, 32, 64],
                duration: 0.125,
                images: false,
                ..base
            },
            Scenario::ConvergenceDiscontinuous => ScenarioParams {
                resolutions: vec![16, 32, 64, 128],
                duration: 0.5,
                images: false,
                ..base
            },
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scenario {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Scenario::ALL
            .into_iter()
            .find(|sc| sc.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = Scenario::ALL.iter().map(|sc| sc.name()).collect();
                Error::Config(format!("unknown scenario {s:?} (expected one of {})", names.join(", ")))
            })
    }
}

/// `sin(2 pi (x + y)) dx + cos(2 pi (x + y)) dy`; not closed.
pub fn smooth_one_form() -> AnalyticForm {
    AnalyticForm::one_form(|x, y| (2.0 * PI * (x + y)).sin(), |x, y| (2.0 * PI * (x + y)).cos())
}

/// Courant number `speed dt / h` used when no time step is given.
pub fn default_courant(scheme: SchemeKind) -> f64 {
    match scheme {
        SchemeKind::UpwindPc => 0.4,
        SchemeKind::Weno5 | SchemeKind::Weno7 => 0.048,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScenarioParams {
    pub resolutions: Vec<usize>,
    pub schemes: Vec<SchemeKind>,
    /// Time step at the first resolution; later levels scale it with `h`.
    pub dt: Option<f64>,
    /// Simulated time (per leg for vortex scenarios).
    pub duration: f64,
    /// Step count at the first resolution; overrides `duration` as `steps * dt`.
    pub steps: Option<usize>,
    /// Constant velocity replacing the default `(1, 1)`.
    pub velocity: Option<(f64, f64)>,
    /// When false, `runtime_ms` is written as 0 so output is byte-reproducible.
    pub record_timing: bool,
    pub dump_every: Option<usize>,
    pub images: bool,
}

impl ScenarioParams {
    pub fn validate(&self, scenario: Scenario) -> Result<()> {
        if self.resolutions.is_empty() || self.schemes.is_empty() {
            return Err(Error::Config("need at least one resolution and one scheme".into()));
        }
        if let Some(&n) = self.resolutions.iter().find(|&&n| n < 4) {
            return Err(Error::Config(format!("resolution {n} below 4")));
        }
        if let Some(dt) = self.dt {
            if !(dt.is_finite() && dt > 0.0) {
                return Err(Error::Config(format!("time step {dt} must be positive")));
            }
        }
        if !(self.duration.is_finite() && self.duration >= 0.0) {
            return Err(Error::Config(format!("duration {} must be non-negative", self.duration)));
        }
        if self.dump_every == Some(0) {
            return Err(Error::Config("dump interval must be positive".into()));
        }
        if let Some((vx, vy)) = self.velocity {
            if scenario.is_vortex() {
                return Err(Error::Config(format!("{scenario} uses the vortex field; --velocity does not apply")));
            }
            if !(vx.is_finite() && vy.is_finite()) {
                return Err(Error::Config("velocity must be finite".into()));
            }
        }
        Ok(())
    }
}

/// Time step and step count of one leg at one resolution.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TimePlan {
    pub dt: f64,
    pub steps: usize,
}

fn provider(scenario: Scenario, params: &ScenarioParams) -> VelocityProvider {
    if scenario.is_vortex() {
        VelocityProvider::rudman_vortex()
    } else {
        let (vx, vy) = params.velocity.unwrap_or((1.0, 1.0));
        VelocityProvider::constant(vx, vy)
    }
}

/// `dt = dt0 * h / h0`, shortened so an integer number of steps spans the
/// duration exactly.
pub fn time_plan(scenario: Scenario, params: &ScenarioParams, n: usize, scheme: SchemeKind) -> Result<TimePlan> {
    let n0 = params.resolutions[0];
    let dt0 = match params.dt {
        Some(dt) => dt,
        None => {
            let g0 = GridComplex2D::unit_square(n0)?;
            let v0 = discretize_velocity(&provider(scenario, params), &g0)?;
            let speed = v0.max_abs_flux() / g0.h();
            let speed = if speed > 0.0 { speed } else { 1.0 };
            default_courant(scheme) * g0.h() / speed
        }
    };
    let dt_rule = dt0 * n0 as f64 / n as f64;
    let duration = params.steps.map_or(params.duration, |s| s as f64 * dt0);
    if duration == 0.0 {
        return Ok(TimePlan { dt: dt_rule, steps: 0 });
    }
    let steps = (duration / dt_rule * (1.0 - 1e-12)).ceil().max(1.0) as usize;
    Ok(TimePlan {
        dt: duration / steps as f64,
        steps,
    })
}

/// Stage of a run passed to observers.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Leg {
    Forward,
    Backward,
}

#[derive(Clone, Debug)]
pub struct CaseResult {
    pub grid: GridComplex2D,
    pub initial: Cochain,
    /// End of the forward leg, for vortex scenarios.
    pub turnaround: Option<Cochain>,
    pub last: Cochain,
    pub record: ErrorRecord,
}

/// Runs one `(resolution, scheme)` case without touching the filesystem.
pub fn simulate(
    scenario: Scenario,
    params: &ScenarioParams,
    n: usize,
    scheme: SchemeKind,
    mut observer: impl FnMut(Leg, usize, &Cochain) -> Result<()>,
) -> Result<CaseResult> {
    params.validate(scenario)?;
    let grid = GridComplex2D::unit_square(n)?;
    let plan = time_plan(scenario, params, n, scheme)?;
    let cfg = AdvectionConfig::new(plan.dt, plan.steps, scheme)?;
    let velocity = provider(scenario, params);
    let field = discretize_velocity(&velocity, &grid)?;
    let initial = discretize(&scenario.initial_form(), &grid)?;

    let start = Instant::now();
    let forward = advect(&initial, &field, &cfg, &grid, |k, w| observer(Leg::Forward, k, w))?;
    let (turnaround, last) = if scenario.is_vortex() {
        let back = discretize_velocity(&velocity.negated(), &grid)?;
        let last = advect(&forward, &back, &cfg, &grid, |k, w| observer(Leg::Backward, k, w))?;
        (Some(forward), last)
    } else {
        (None, forward)
    };
    let elapsed = start.elapsed().as_secs_f64() * 1e3;

    let err = axpy(-1.0, &initial, &last)?;
    let record = ErrorRecord {
        resolution: n,
        scheme,
        l1: norm(&err, Norm::L1, &grid),
        l2: norm(&err, Norm::L2, &grid),
        runtime_ms: if params.record_timing { elapsed } else { 0.0 },
    };
    Ok(CaseResult {
        grid,
        initial,
        turnaround,
        last,
        record,
    })
}

/// Runs every `(resolution, scheme)` case and writes `errors.csv` plus one
/// directory `<scheme>-<n>` of dumps and images per case.
pub fn run_scenario(scenario: Scenario, params: &ScenarioParams, out_dir: &Path) -> Result<Vec<ErrorRecord>> {
    params.validate(scenario)?;
    fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    let mut records = Vec::new();
    for &n in &params.resolutions {
        for &scheme in &params.schemes {
            let case_dir = out_dir.join(format!("{}-{n}", scheme.name()));
            fs::create_dir_all(&case_dir).map_err(|e| Error::io(&case_dir, e))?;
            let grid = GridComplex2D::unit_square(n)?;
            let every = params.dump_every;
            let res = simulate(scenario, params, n, scheme, |leg, k, w| match every {
                Some(m) if k % m == 0 => {
                    let tag = match leg {
                        Leg::Forward => "forward",
                        Leg::Backward => "backward",
                    };
                    write_field(&case_dir.join(format!("{tag}-{k:06}.txt")), w, &grid)
                }
                _ => Ok(()),
            })?;
            let mut frames = vec![("initial", &res.initial), ("final", &res.last)];
            if let Some(t) = &res.turnaround {
                frames.insert(1, ("turnaround", t));
            }
            for (name, w) in frames {
                write_field(&case_dir.join(format!("{name}.txt")), w, &res.grid)?;
                if params.images {
                    render_field(w, &res.grid).write(&case_dir.join(format!("{name}.pgm")))?;
                }
            }
            records.push(res.record);
        }
    }
    write_errors_csv(&out_dir.join("errors.csv"), &records)?;
    Ok(records)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SlopeValue {
    Slope(f64),
    /// Some error was exactly zero.
    Exact,
}

impl fmt::Display for SlopeValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SlopeValue::Slope(s) => write!(f, "{s:.4}"),
            SlopeValue::Exact => f.write_str("exact"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SlopeFit {
    pub l1: SlopeValue,
    pub l2: SlopeValue,
}

/// Least-squares slope of `ln(err)` against `ln(h)` with `h = 1 / resolution`.
pub fn fit_slope(points: &[(usize, f64)]) -> Result<SlopeValue> {
    let mut res: Vec<usize> = points.iter().map(|p| p.0).collect();
    res.sort_unstable();
    res.dedup();
    if res.len() < 3 {
        return Err(Error::Slope(format!("{} distinct resolutions, need at least 3", res.len())));
    }
    if let Some(&(n, e)) = points.iter().find(|p| !(p.1.is_finite() && p.1 >= 0.0)) {
        return Err(Error::Slope(format!("error {e} at resolution {n}")));
    }
    if points.iter().any(|p| p.1 == 0.0) {
        return Ok(SlopeValue::Exact);
    }
    let xs: Vec<f64> = points.iter().map(|p| -(p.0 as f64).ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let m = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / m, ys.iter().sum::<f64>() / m);
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    Ok(SlopeValue::Slope(sxy / sxx))
}

/// Slopes of one scheme's records in both norms.
pub fn fit_convergence_slope(records: &[ErrorRecord]) -> Result<SlopeFit> {
    if let Some(r) = records.iter().find(|r| r.scheme != records[0].scheme) {
        return Err(Error::Slope(format!(
            "records mix schemes {} and {}",
            records[0].scheme, r.scheme
        )));
    }
    let pts = |f: fn(&ErrorRecord) -> f64| records.iter().map(|r| (r.resolution, f(r))).collect::<Vec<_>>();
    Ok(SlopeFit {
        l1: fit_slope(&pts(|r| r.l1))?,
        l2: fit_slope(&pts(|r| r.l2))?,
    })
}

/// Groups records by scheme in first-appearance order.
pub fn group_by_scheme(records: &[ErrorRecord]) -> Vec<(SchemeKind, Vec<ErrorRecord>)> {
    let mut groups: Vec<(SchemeKind, Vec<ErrorRecord>)> = Vec::new();
    for r in records {
        match groups.iter_mut().find(|g| g.0 == r.scheme) {
            Some(g) => g.1.push(*r),
            None => groups.push((r.scheme, vec![*r])),
        }
    }
    groups
}
