//! Floating-point cross-check of the exact series machinery.
//!
//! Orbits are integrated with a hand-rolled Dormand-Prince 5(4) pair and the
//! return to the switching line is located by sign-change bracketing plus
//! bisection. Both half orbits are integrated in a nonnegative pseudo-time:
//! the vector field is pre-multiplied by the sign the flight time will carry,
//! so one code path serves the forward and backward halves alike.

use crate::error::{Error, Result};
use crate::field::{classify, reparametrized_field, PiecewiseField, Side};
use crate::period::period_constants;
use crate::series2::Series2;
use rayon::prelude::*;

/// Orbits wandering past this distance from the origin have left the
/// neighborhood where the series data means anything.
const ESCAPE_RADIUS: f64 = 1.0;

const MAX_BISECTIONS: usize = 200;

#[derive(Clone, Debug)]
pub struct SimulationConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub event_tol: f64,
    pub max_steps: usize,
    pub x_grid: Vec<f64>,
}

impl Default for SimulationConfig {
    fn default() -> Self {
        SimulationConfig {
            abs_tol: 1e-12,
            rel_tol: 1e-12,
            event_tol: 1e-13,
            max_steps: 200_000,
            x_grid: default_grid(),
        }
    }
}

/// Twelve logarithmically spaced abscissas from 1e-3 to 1e-1.
pub fn default_grid() -> Vec<f64> {
    (0..12)
        .map(|j| 10f64.powf(-3.0 + 2.0 * j as f64 / 11.0))
        .collect()
}

impl SimulationConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, value) in [
            ("abs_tol", self.abs_tol),
            ("rel_tol", self.rel_tol),
            ("event_tol", self.event_tol),
        ] {
            if !(value > 0.0 && value <= 1e-6) {
                return Err(Error::BadConfig(format!(
                    "{name} must lie in (0, 1e-6], got {value:e}"
                )));
            }
        }
        if self.max_steps == 0 {
            return Err(Error::BadConfig("max_steps must be positive".into()));
        }
        for &x in &self.x_grid {
            if !(x > 0.0 && x < ESCAPE_RADIUS) {
                return Err(Error::BadConfig(format!(
                    "grid abscissa {x:e} outside (0, {ESCAPE_RADIUS})"
                )));
            }
        }
        Ok(())
    }
}

/// One measured closed orbit. `period = delta (time_minus - time_plus)`,
/// which the pseudo-time construction makes a sum of two positive times.
#[derive(Clone, Debug)]
pub struct OrbitMeasurement {
    pub x0: f64,
    pub landing_x_plus: f64,
    pub landing_x_minus: f64,
    pub time_plus: f64,
    pub time_minus: f64,
    pub period: f64,
}

/// Residuals of the measured period against a truncated series, with the
/// fitted log-log slope. Points at the rounding floor are left out of the
/// fit; when every point sits there the report is `saturated`.
#[derive(Clone, Debug)]
pub struct ConvergenceReport {
    pub points: Vec<ConvergencePoint>,
    pub slope: Option<f64>,
    pub saturated: bool,
    pub floor: f64,
}

#[derive(Clone, Copy, Debug)]
pub struct ConvergencePoint {
    pub x: f64,
    pub residual: f64,
}

struct CompiledSide {
    x: Vec<(i32, i32, f64)>,
    y: Vec<(i32, i32, f64)>,
    time_sign: f64,
}

fn compile(series: &Series2) -> Vec<(i32, i32, f64)> {
    series
        .terms()
        .map(|(i, j, c)| (i as i32, j as i32, c.to_f64()))
        .collect()
}

impl CompiledSide {
    fn eval(&self, p: [f64; 2]) -> [f64; 2] {
        let mut out = [0.0, 0.0];
        for (slot, terms) in [&self.x, &self.y].into_iter().enumerate() {
            let mut acc = 0.0;
            for &(i, j, c) in terms {
                acc += c * p[0].powi(i) * p[1].powi(j);
            }
            out[slot] = self.time_sign * acc;
        }
        out
    }
}

// Dormand-Prince 5(4): `A` feeds the stages, `B5` the fifth-order solution,
// `E` the embedded error estimate.
const A: [[f64; 6]; 6] = [
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

fn dopri5_step(rhs: &CompiledSide, state: [f64; 2], h: f64) -> ([f64; 2], [f64; 2]) {
    let mut k = [[0.0; 2]; 7];
    k[0] = rhs.eval(state);
    for stage in 1..7 {
        let mut p = state;
        for (i, ki) in k.iter().enumerate().take(stage) {
            let a = A[stage - 1][i];
            if a != 0.0 {
                p[0] += h * a * ki[0];
                p[1] += h * a * ki[1];
            }
        }
        k[stage] = rhs.eval(p);
    }
    let mut next = state;
    let mut err = [0.0, 0.0];
    for (i, ki) in k.iter().enumerate() {
        next[0] += h * B5[i] * ki[0];
        next[1] += h * B5[i] * ki[1];
        err[0] += h * E[i] * ki[0];
        err[1] += h * E[i] * ki[1];
    }
    (next, err)
}

struct OrbitProblem {
    rhs: CompiledSide,
    interior_sign: f64,
    weight_x: f64,
    weight_y: f64,
    h_init: f64,
    h_max: f64,
}

impl OrbitProblem {
    fn error_norm(&self, err: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
        let wx = self.weight_x + a[0].abs().max(b[0].abs());
        let wy = self.weight_y + a[1].abs().max(b[1].abs());
        let rx = err[0] / wx;
        let ry = err[1] / wy;
        ((rx * rx + ry * ry) / 2.0).sqrt()
    }
}

/// Integrates one half orbit from `(x0, 0)` until the first return to the
/// switching line, in pseudo-time. Returns the landing abscissa and the
/// signed flight time.
pub fn integrate_half_orbit(
    field: &PiecewiseField,
    side: Side,
    x0: f64,
    cfg: &SimulationConfig,
) -> Result<(f64, f64)> {
    cfg.validate()?;
    if !(x0 > 0.0 && x0.is_finite()) {
        return Err(Error::NonPositiveStart { x0 });
    }
    let class = classify(field)?;
    let time_sign = -f64::from(side.sign() as i32) * f64::from(class.delta as i32);
    let problem = {
        let speed0 = field.x_component(side).eval_f64(0.0, 0.0).abs();
        let tau_scale = 2.0 * x0 / speed0;
        let y_char = class.a(side).to_f64().abs() * x0.powi(2 * class.k(side) as i32);
        OrbitProblem {
            rhs: CompiledSide {
                x: compile(field.x_component(side)),
                y: compile(field.y_component(side)),
                time_sign,
            },
            interior_sign: f64::from(side.sign() as i32),
            // Weight scales follow the orbit: abscissas live at x0, heights
            // at the leading arc height.
            weight_x: cfg.abs_tol / cfg.rel_tol * x0,
            weight_y: cfg.abs_tol / cfg.rel_tol * y_char,
            h_init: tau_scale / 50.0,
            h_max: tau_scale / 10.0,
        }
    };

    let mut tau = 0.0;
    let mut state = [x0, 0.0];
    let mut h = problem.h_init;
    let mut armed = false;
    for _ in 0..cfg.max_steps {
        h = h.min(problem.h_max);
        let (next, err) = dopri5_step(&problem.rhs, state, h);
        let norm = problem.error_norm(err, state, next) / cfg.rel_tol;
        if norm <= 1.0 {
            let signed_y = next[1] * problem.interior_sign;
            if armed && signed_y <= 0.0 {
                let theta = locate_event(&problem, state, h, cfg.event_tol);
                let (landing, _) = dopri5_step(&problem.rhs, state, theta);
                return Ok((landing[0], time_sign * (tau + theta)));
            }
            if signed_y > 0.0 {
                armed = true;
            }
            state = next;
            tau += h;
            if state[0].abs() > ESCAPE_RADIUS || state[1].abs() > ESCAPE_RADIUS {
                return Err(Error::OrbitEscaped {
                    bound: ESCAPE_RADIUS,
                });
            }
        }
        let factor = if norm > 0.0 {
            (0.9 * norm.powf(-0.2)).clamp(0.2, 5.0)
        } else {
            5.0
        };
        h *= factor;
    }
    Err(Error::StepBudgetExhausted {
        max_steps: cfg.max_steps,
    })
}

/// Bisects the accepted step `[0, h]` from `state` down to `event_tol` in
/// pseudo-time. On entry the interior-signed height is positive at 0 and
/// nonpositive at `h`; the returned offset keeps the nonpositive endpoint.
fn locate_event(problem: &OrbitProblem, state: [f64; 2], h: f64, event_tol: f64) -> f64 {
    let mut lo = 0.0;
    let mut hi = h;
    for _ in 0..MAX_BISECTIONS {
        if hi - lo <= event_tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let (probe, _) = dopri5_step(&problem.rhs, state, mid);
        if probe[1] * problem.interior_sign > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    hi
}

/// Measures the closed orbit through `(x0, 0)` by composing both half
/// orbits.
pub fn numeric_period(
    field: &PiecewiseField,
    x0: f64,
    cfg: &SimulationConfig,
) -> Result<OrbitMeasurement> {
    let class = classify(field)?;
    let (landing_x_plus, time_plus) = integrate_half_orbit(field, Side::Plus, x0, cfg)?;
    let (landing_x_minus, time_minus) = integrate_half_orbit(field, Side::Minus, x0, cfg)?;
    let period = f64::from(class.delta as i32) * (time_minus - time_plus);
    Ok(OrbitMeasurement {
        x0,
        landing_x_plus,
        landing_x_minus,
        time_plus,
        time_minus,
        period,
    })
}

/// Period of the unit-horizontal-speed reparametrization, measured
/// numerically.
pub fn numeric_tilde_period(
    field: &PiecewiseField,
    x0: f64,
    cfg: &SimulationConfig,
) -> Result<f64> {
    let class = classify(field)?;
    let straightened = reparametrized_field(field, &class)?;
    Ok(numeric_period(&straightened, x0, cfg)?.period)
}

/// Compares measured periods against the exact series truncated at `order`
/// over the configured grid and fits the order of the leftover.
pub fn convergence_report(
    field: &PiecewiseField,
    order: usize,
    cfg: &SimulationConfig,
) -> Result<ConvergenceReport> {
    cfg.validate()?;
    if cfg.x_grid.is_empty() {
        return Err(Error::BadConfig("empty simulation grid".into()));
    }
    let lo = cfg.x_grid.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = cfg.x_grid.iter().cloned().fold(0.0, f64::max);
    if hi / lo < 10f64.powf(1.5) * (1.0 - 1e-9) {
        return Err(Error::BadConfig(
            "grid must span at least 1.5 decades".into(),
        ));
    }
    let exact = period_constants(field, order)?;
    let points = cfg
        .x_grid
        .par_iter()
        .map(|&x| -> Result<ConvergencePoint> {
            let measured = numeric_period(field, x, cfg)?;
            let residual = (measured.period - exact.t.eval_f64(x)).abs();
            Ok(ConvergencePoint { x, residual })
        })
        .collect::<Result<Vec<_>>>()?;
    let floor = 10.0 * cfg.event_tol;
    let used: Vec<(f64, f64)> = points
        .iter()
        .filter(|p| p.residual >= floor)
        .map(|p| (p.x, p.residual))
        .collect();
    let saturated = used.is_empty();
    let slope = (used.len() >= 2).then(|| fitted_slope(&used));
    Ok(ConvergenceReport {
        points,
        slope,
        saturated,
        floor,
    })
}

fn fitted_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
    for &(x, r) in points {
        let lx = x.ln();
        let lr = r.ln();
        sx += lx;
        sy += lr;
        sxx += lx * lx;
        sxy += lx * lr;
    }
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ExactScalar;

    fn s2(terms: &[(usize, usize, i64)], order: usize) -> Series2 {
        Series2::from_terms(
            terms
                .iter()
                .map(|&(i, j, c)| (i, j, ExactScalar::int(c)))
                .collect(),
            order,
        )
        .unwrap()
    }

    type Terms<'a> = &'a [(usize, usize, i64)];

    fn field(plus: (Terms, Terms), minus: (Terms, Terms), order: usize) -> PiecewiseField {
        PiecewiseField::new(
            order,
            s2(plus.0, order),
            s2(plus.1, order),
            s2(minus.0, order),
            s2(minus.1, order),
        )
        .unwrap()
    }

    fn e1() -> PiecewiseField {
        field(
            (&[(0, 0, 1)], &[(1, 0, -1)]),
            (&[(0, 0, -1)], &[(1, 0, -1)]),
            8,
        )
    }

    fn e2() -> PiecewiseField {
        field(
            (&[(0, 0, 2)], &[(1, 0, -1)]),
            (&[(0, 0, -1)], &[(1, 0, -1)]),
            8,
        )
    }

    fn e3() -> PiecewiseField {
        field(
            (&[(0, 0, 1)], &[(3, 0, -1)]),
            (&[(0, 0, -1)], &[(1, 0, -1)]),
            10,
        )
    }

    #[test]
    fn config_rejections() {
        let cfg = SimulationConfig {
            rel_tol: 1e-3,
            ..Default::default()
        };
        assert!(matches!(cfg.validate(), Err(Error::BadConfig(_))));
        let cfg = SimulationConfig {
            event_tol: 0.0,
            ..Default::default()
        };
        assert!(matches!(cfg.validate(), Err(Error::BadConfig(_))));
        let cfg = SimulationConfig {
            x_grid: vec![0.1, -0.2],
            ..Default::default()
        };
        assert!(matches!(cfg.validate(), Err(Error::BadConfig(_))));
        let cfg = SimulationConfig {
            max_steps: 0,
            ..Default::default()
        };
        assert!(matches!(cfg.validate(), Err(Error::BadConfig(_))));
        assert!(SimulationConfig::default().validate().is_ok());
    }

    #[test]
    fn default_grid_shape() {
        let grid = default_grid();
        assert_eq!(grid.len(), 12);
        assert!((grid[0] - 1e-3).abs() < 1e-15);
        assert!((grid[11] - 1e-1).abs() < 1e-12);
        assert!(grid.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn two_fold_half_orbits_match_the_closed_form() {
        let cfg = SimulationConfig::default();
        let f = e1();
        let (landing, time) = integrate_half_orbit(&f, Side::Plus, 0.1, &cfg).unwrap();
        assert!((landing + 0.1).abs() < 1e-9, "landing {landing}");
        assert!((time + 0.2).abs() < 1e-9, "time {time}");
        let (landing, time) = integrate_half_orbit(&f, Side::Minus, 0.1, &cfg).unwrap();
        assert!((landing + 0.1).abs() < 1e-9);
        assert!((time - 0.2).abs() < 1e-9);
    }

    #[test]
    fn faster_horizontal_speed_halves_the_flight() {
        let cfg = SimulationConfig::default();
        let (landing, time) = integrate_half_orbit(&e2(), Side::Plus, 0.1, &cfg).unwrap();
        assert!((landing + 0.1).abs() < 1e-9);
        assert!((time + 0.1).abs() < 1e-9);
    }

    #[test]
    fn periods_of_the_linear_period_fixtures() {
        let cfg = SimulationConfig::default();
        for (f, expect) in [(e1(), 0.4), (e2(), 0.3), (e3(), 0.4)] {
            let m = numeric_period(&f, 0.1, &cfg).unwrap();
            assert!((m.period - expect).abs() < 1e-8, "period {}", m.period);
            assert!(m.time_plus * m.time_minus <= 0.0);
            assert!(m.period >= 0.0);
            assert!(m.landing_x_plus < 0.0 && m.landing_x_minus < 0.0);
        }
    }

    #[test]
    fn straightened_periods_match_the_landing_formula() {
        let cfg = SimulationConfig::default();
        for (f, x0, expect) in [(e1(), 0.1, 0.4), (e2(), 0.1, 0.4), (e3(), 0.05, 0.2)] {
            let t = numeric_tilde_period(&f, x0, &cfg).unwrap();
            assert!((t - expect).abs() < 1e-8, "tilde period {t}");
        }
    }

    #[test]
    fn start_must_be_positive() {
        let cfg = SimulationConfig::default();
        assert!(matches!(
            integrate_half_orbit(&e1(), Side::Plus, 0.0, &cfg),
            Err(Error::NonPositiveStart { .. })
        ));
        assert!(matches!(
            numeric_period(&e1(), -0.3, &cfg),
            Err(Error::NonPositiveStart { .. })
        ));
    }

    #[test]
    fn runaway_orbit_is_reported() {
        // Strong positive feedback in y on the upper side: the orbit leaves
        // the unit neighborhood instead of returning.
        let f = field(
            (&[(0, 0, 1)], &[(1, 0, -1), (0, 1, -100)]),
            (&[(0, 0, -1)], &[(1, 0, -1)]),
            8,
        );
        let cfg = SimulationConfig::default();
        assert!(matches!(
            integrate_half_orbit(&f, Side::Plus, 0.1, &cfg),
            Err(Error::OrbitEscaped { .. })
        ));
    }

    #[test]
    fn step_budget_is_enforced() {
        let cfg = SimulationConfig {
            max_steps: 3,
            ..Default::default()
        };
        assert!(matches!(
            integrate_half_orbit(&e1(), Side::Plus, 0.1, &cfg),
            Err(Error::StepBudgetExhausted { max_steps: 3 })
        ));
    }

    #[test]
    fn exact_linear_period_saturates_the_residuals() {
        let cfg = SimulationConfig {
            event_tol: 1e-9,
            ..Default::default()
        };
        let report = convergence_report(&e1(), 4, &cfg).unwrap();
        assert!(report.saturated, "residuals {:?}", report.points);
        assert!(report.slope.is_none());
    }

    #[test]
    fn quadratic_speed_perturbation_shows_cubic_leftover() {
        // X = +-(1 + x^2), Y = -x: the period is 4 arctan(x), so the
        // order-2 truncation 4x leaves a residual of order exactly 3.
        let f = field(
            (&[(0, 0, 1), (2, 0, 1)], &[(1, 0, -1)]),
            (&[(0, 0, -1), (2, 0, -1)], &[(1, 0, -1)]),
            8,
        );
        let cfg = SimulationConfig::default();
        let report = convergence_report(&f, 2, &cfg).unwrap();
        let slope = report.slope.expect("residuals well above the floor");
        assert!((2.5..3.5).contains(&slope), "slope {slope}");
    }

    #[test]
    fn convergence_grid_preconditions() {
        let cfg = SimulationConfig {
            x_grid: Vec::new(),
            ..Default::default()
        };
        assert!(matches!(
            convergence_report(&e1(), 4, &cfg),
            Err(Error::BadConfig(_))
        ));
        let cfg = SimulationConfig {
            x_grid: vec![0.05, 0.1],
            ..Default::default()
        };
        assert!(matches!(
            convergence_report(&e1(), 4, &cfg),
            Err(Error::BadConfig(_))
        ));
    }

    #[test]
    fn convergence_refuses_non_centers() {
        let f = field(
            (&[(0, 0, 1)], &[(1, 0, -1), (2, 0, 1)]),
            (&[(0, 0, -1)], &[(1, 0, -1)]),
            8,
        );
        let cfg = SimulationConfig::default();
        assert!(matches!(
            convergence_report(&f, 4, &cfg),
            Err(Error::NotACenter {
                first_mismatch_index: 2
            })
        ));
    }
}
