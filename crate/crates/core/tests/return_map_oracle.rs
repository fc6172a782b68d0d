//! Cross-checks between the exact half-return machinery and the
//! floating-point integrator, plus structural invariants on randomly
//! generated centers.

use filperiod::field::{classify, PiecewiseField, Side};
use filperiod::fixtures::{
    non_center, quartic_speed_center, random_center, two_fold, uneven_speeds,
};
use filperiod::half_return::{half_return_data, involution_defect};
use filperiod::oracle::{
    integrate_half_orbit, numeric_period, numeric_tilde_period, SimulationConfig,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn log_log_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
    for &(x, r) in points {
        let (lx, lr) = (x.ln(), r.ln());
        sx += lx;
        sy += lr;
        sxx += lx * lx;
        sxy += lx * lr;
    }
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}

#[test]
fn measured_map_converges_at_the_truncation_order() {
    let field = non_center();
    let class = classify(&field).unwrap();
    let order = 4;
    let phi = half_return_data(&field, &class, Side::Plus, order)
        .unwrap()
        .map();
    let cfg = SimulationConfig::default();
    let mut points = Vec::new();
    for &x in &cfg.x_grid {
        let (landing, _) = integrate_half_orbit(&field, Side::Plus, x, &cfg).unwrap();
        let residual = (landing - phi.eval_f64(x)).abs();
        if residual >= 10.0 * cfg.event_tol {
            points.push((x, residual));
        }
    }
    assert!(points.len() >= 4, "too few residuals above the floor");
    let slope = log_log_slope(&points);
    assert!(
        slope >= order as f64 + 0.5 && slope <= order as f64 + 1.8,
        "slope {slope}"
    );
}

#[test]
fn generated_centers_have_matching_involutive_maps() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for _ in 0..8 {
        let field = random_center(&mut rng, 8);
        let class = classify(&field).unwrap();
        let order = field.order() + 2 - 2 * class.k_plus.max(class.k_minus);
        let plus = half_return_data(&field, &class, Side::Plus, order).unwrap();
        let minus = half_return_data(&field, &class, Side::Minus, order).unwrap();
        assert_eq!(plus.alpha, minus.alpha, "sides disagree");
        for data in [plus, minus] {
            assert!(data.mu[0].is_zero(), "first crossing height must vanish");
            let defect = involution_defect(&data.map()).unwrap();
            assert!(defect.is_zero(), "defect {defect:?}");
        }
    }
}

#[test]
fn rescaling_one_side_leaves_its_map_alone() {
    let field = non_center();
    let class = classify(&field).unwrap();
    let factor = filperiod::ExactScalar::ratio(3, 2);
    let rescaled = PiecewiseField::new(
        field.order(),
        field.x_component(Side::Plus).scale(&factor),
        field.y_component(Side::Plus).scale(&factor),
        field.x_component(Side::Minus).clone(),
        field.y_component(Side::Minus).clone(),
    )
    .unwrap();
    let rescaled_class = classify(&rescaled).unwrap();
    assert_eq!(class.a_plus, rescaled_class.a_plus);
    let original = half_return_data(&field, &class, Side::Plus, 4).unwrap();
    let modified = half_return_data(&rescaled, &rescaled_class, Side::Plus, 4).unwrap();
    assert_eq!(original.mu, modified.mu);
    assert_eq!(original.alpha, modified.alpha);
}

#[test]
fn numeric_maps_agree_only_for_centers() {
    let cfg = SimulationConfig {
        event_tol: 1e-10,
        ..Default::default()
    };
    for field in [two_fold(), quartic_speed_center()] {
        let m = numeric_period(&field, 0.1, &cfg).unwrap();
        assert!(
            (m.landing_x_plus - m.landing_x_minus).abs() <= 10.0 * cfg.event_tol,
            "landings {} vs {}",
            m.landing_x_plus,
            m.landing_x_minus
        );
    }
    let m = numeric_period(&non_center(), 0.1, &cfg).unwrap();
    assert!((m.landing_x_plus - m.landing_x_minus).abs() > 1e-3);
}

#[test]
fn straightened_flight_matches_the_landing_formula() {
    let cfg = SimulationConfig {
        event_tol: 1e-10,
        ..Default::default()
    };
    let field = uneven_speeds();
    let straightened = numeric_tilde_period(&field, 0.1, &cfg).unwrap();
    let (landing, _) = integrate_half_orbit(&field, Side::Plus, 0.1, &cfg).unwrap();
    assert!((straightened - 2.0 * (0.1 - landing)).abs() <= 10.0 * cfg.event_tol);
}

#[test]
fn halving_tolerances_barely_moves_the_period() {
    let field = quartic_speed_center();
    let base = SimulationConfig::default();
    let mut tight = base.clone();
    tight.abs_tol /= 2.0;
    tight.rel_tol /= 2.0;
    tight.event_tol /= 2.0;
    for x0 in [1e-3, 1e-2, 1e-1] {
        let coarse = numeric_period(&field, x0, &base).unwrap().period;
        let fine = numeric_period(&field, x0, &tight).unwrap().period;
        assert!((coarse - fine).abs() < 1e-9, "x0 {x0}: {coarse} vs {fine}");
    }
}
