//! Serializable report shapes and the two output renderers.
//!
//! Exact rationals are rendered as `"p/q"` strings, floating values as bare
//! decimal literals with a fixed 17-significant-digit form so reports are
//! byte-for-byte reproducible. A field holds either exact strings or float
//! literals, never a mixture.

use filperiod::field::Classification;
use filperiod::half_return::CenterReport;
use filperiod::oracle::{ConvergenceReport, OrbitMeasurement};
use filperiod::period::PeriodData;
use filperiod::{ExactScalar, Series1};
use serde::Serialize;
use serde_json::Number;

pub fn float_literal(value: f64) -> String {
    format!("{value:.16e}")
}

fn number(value: f64) -> Number {
    serde_json::from_str(&float_literal(value)).expect("fixed-format float is a JSON number")
}

fn rational(value: &ExactScalar) -> String {
    value.to_string()
}

#[derive(Serialize)]
pub struct SeriesJson {
    pub order: usize,
    pub coefficients: Vec<String>,
}

impl SeriesJson {
    pub fn from_series(series: &Series1) -> Self {
        SeriesJson {
            order: series.order(),
            coefficients: series.coeffs().iter().map(rational).collect(),
        }
    }
}

#[derive(Serialize)]
pub struct ClassifyReport {
    pub command: &'static str,
    pub order: usize,
    pub delta: i64,
    pub k_plus: usize,
    pub k_minus: usize,
    pub a_plus: String,
    pub a_minus: String,
}

impl ClassifyReport {
    pub fn new(order: usize, class: &Classification) -> Self {
        ClassifyReport {
            command: "classify",
            order,
            delta: class.delta,
            k_plus: class.k_plus,
            k_minus: class.k_minus,
            a_plus: rational(&class.a_plus),
            a_minus: rational(&class.a_minus),
        }
    }
}

#[derive(Serialize)]
pub struct HalfReturnReport {
    pub command: &'static str,
    pub order: usize,
    pub is_center: bool,
    pub first_mismatch_index: Option<usize>,
    pub alpha_plus: Vec<String>,
    pub alpha_minus: Vec<String>,
    pub map_plus: SeriesJson,
    pub map_minus: SeriesJson,
}

impl HalfReturnReport {
    pub fn new(report: &CenterReport) -> Self {
        HalfReturnReport {
            command: "halfreturn",
            order: report.order,
            is_center: report.is_center(),
            first_mismatch_index: report.first_mismatch_index,
            alpha_plus: report.plus.alpha.iter().map(rational).collect(),
            alpha_minus: report.minus.alpha.iter().map(rational).collect(),
            map_plus: SeriesJson::from_series(&report.plus.map()),
            map_minus: SeriesJson::from_series(&report.minus.map()),
        }
    }
}

#[derive(Serialize)]
pub struct PeriodReport {
    pub command: &'static str,
    pub order: usize,
    pub t_hat: Vec<String>,
    pub time_plus: SeriesJson,
    pub time_minus: SeriesJson,
    pub period: SeriesJson,
    pub corollary_t0: String,
    pub corollary_t1: String,
    pub corollary_match: bool,
}

impl PeriodReport {
    pub fn new(data: &PeriodData, corollary: &(ExactScalar, ExactScalar)) -> Self {
        let corollary_match =
            data.t_hat[0] == corollary.0 && (data.order < 1 || data.t_hat[1] == corollary.1);
        PeriodReport {
            command: "period",
            order: data.order,
            t_hat: data.t_hat.iter().map(rational).collect(),
            time_plus: SeriesJson::from_series(&data.t_plus),
            time_minus: SeriesJson::from_series(&data.t_minus),
            period: SeriesJson::from_series(&data.t),
            corollary_t0: rational(&corollary.0),
            corollary_t1: rational(&corollary.1),
            corollary_match,
        }
    }
}

#[derive(Serialize)]
pub struct SimulateReport {
    pub command: &'static str,
    pub measurements: Vec<MeasurementJson>,
}

#[derive(Serialize)]
pub struct MeasurementJson {
    pub x0: Number,
    pub landing_x_plus: Number,
    pub landing_x_minus: Number,
    pub time_plus: Number,
    pub time_minus: Number,
    pub period: Number,
}

impl SimulateReport {
    pub fn new(measurements: &[OrbitMeasurement]) -> Self {
        SimulateReport {
            command: "simulate",
            measurements: measurements
                .iter()
                .map(|m| MeasurementJson {
                    x0: number(m.x0),
                    landing_x_plus: number(m.landing_x_plus),
                    landing_x_minus: number(m.landing_x_minus),
                    time_plus: number(m.time_plus),
                    time_minus: number(m.time_minus),
                    period: number(m.period),
                })
                .collect(),
        }
    }
}

#[derive(Serialize)]
pub struct CompareReport {
    pub command: &'static str,
    pub order: usize,
    pub floor: Number,
    pub saturated: bool,
    pub slope: Option<Number>,
    pub points: Vec<ComparePointJson>,
}

#[derive(Serialize)]
pub struct ComparePointJson {
    pub x: Number,
    pub residual: Number,
}

impl CompareReport {
    pub fn new(order: usize, report: &ConvergenceReport) -> Self {
        CompareReport {
            command: "compare",
            order,
            floor: number(report.floor),
            saturated: report.saturated,
            slope: report.slope.map(number),
            points: report
                .points
                .iter()
                .map(|p| ComparePointJson {
                    x: number(p.x),
                    residual: number(p.residual),
                })
                .collect(),
        }
    }
}

pub fn to_json<T: Serialize>(report: &T) -> String {
    let mut text = serde_json::to_string_pretty(report).expect("reports serialize");
    text.push('\n');
    text
}

pub fn simulate_csv(measurements: &[OrbitMeasurement]) -> String {
    let mut out = String::from("x0,landing_x_plus,landing_x_minus,time_plus,time_minus,period\n");
    for m in measurements {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            float_literal(m.x0),
            float_literal(m.landing_x_plus),
            float_literal(m.landing_x_minus),
            float_literal(m.time_plus),
            float_literal(m.time_minus),
            float_literal(m.period),
        ));
    }
    out
}

pub fn compare_csv(report: &ConvergenceReport) -> String {
    let slope = report.slope.map(float_literal).unwrap_or_default();
    let mut out = String::from("x,residual,slope,saturated\n");
    for p in &report.points {
        out.push_str(&format!(
            "{},{},{},{}\n",
            float_literal(p.x),
            float_literal(p.residual),
            slope,
            report.saturated,
        ));
    }
    out
}
