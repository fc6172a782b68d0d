//! Ready-made fields for tests, demos, and the property suites: a handful of
//! closed-form fixtures plus a randomized center generator built on the
//! mirror construction.

use crate::error::{Error, Result};
use crate::field::PiecewiseField;
use crate::scalar::ExactScalar;
use crate::series2::Series2;
use rand::Rng;
use std::collections::BTreeMap;

fn s2(terms: &[(usize, usize, i64)], order: usize) -> Series2 {
    Series2::from_terms(
        terms
            .iter()
            .map(|&(i, j, c)| (i, j, ExactScalar::int(c)))
            .collect(),
        order,
    )
    .expect("fixture terms are well formed")
}

type Terms<'a> = &'a [(usize, usize, i64)];

fn assemble(plus: (Terms, Terms), minus: (Terms, Terms), order: usize) -> PiecewiseField {
    PiecewiseField::new(
        order,
        s2(plus.0, order),
        s2(plus.1, order),
        s2(minus.0, order),
        s2(minus.1, order),
    )
    .expect("fixture components reach the declared order")
}

/// Fold-fold with unit speeds: `(1, -x | -1, -x)`. Period exactly `4x`.
pub fn two_fold() -> PiecewiseField {
    assemble(
        (&[(0, 0, 1)], &[(1, 0, -1)]),
        (&[(0, 0, -1)], &[(1, 0, -1)]),
        8,
    )
}

/// Fold-fold with speeds 2 and 1: `(2, -x | -1, -x)`. Period exactly `3x`.
pub fn uneven_speeds() -> PiecewiseField {
    assemble(
        (&[(0, 0, 2)], &[(1, 0, -1)]),
        (&[(0, 0, -1)], &[(1, 0, -1)]),
        8,
    )
}

/// Fourth-order contact above, fold below: `(1, -x^3 | -1, -x)`.
pub fn cusp_fold() -> PiecewiseField {
    assemble(
        (&[(0, 0, 1)], &[(3, 0, -1)]),
        (&[(0, 0, -1)], &[(1, 0, -1)]),
        10,
    )
}

/// Fold-fold with a quartic speed modulation: `(2 + x^4, -x | -2 - x^4, -x)`.
/// The period expands as `2x - x^5/5 + x^9/18 - ...`, so truncations leave a
/// measurable tail.
pub fn quartic_speed_center() -> PiecewiseField {
    assemble(
        (&[(0, 0, 2), (4, 0, 1)], &[(1, 0, -1)]),
        (&[(0, 0, -2), (4, 0, -1)], &[(1, 0, -1)]),
        12,
    )
}

/// Fold-fold whose upper map is not an involution: `(1, -x + x^2 | -1, -x)`.
/// The two half-return maps disagree at the quadratic coefficient.
pub fn non_center() -> PiecewiseField {
    assemble(
        (&[(0, 0, 1)], &[(1, 0, -1), (2, 0, 1)]),
        (&[(0, 0, -1)], &[(1, 0, -1)]),
        8,
    )
}

/// Upper tangency curving away from the switching line: `(1, x | -1, -x)`.
/// Classification refuses it, which is the point.
pub fn visible_contact() -> PiecewiseField {
    assemble(
        (&[(0, 0, 1)], &[(1, 0, 1)]),
        (&[(0, 0, -1)], &[(1, 0, -1)]),
        8,
    )
}

/// Builds the lower field as the mirrored, time-reversed, `gamma`-rescaled
/// copy of the upper one:
///
/// `Z_minus(x, y) = (-gamma X_plus(x, -y), gamma Y_plus(x, -y))`
///
/// Lower orbits are then reflections of upper orbits, so the two half-return
/// maps coincide and the fold pair is a center by construction.
pub fn reflection_center(
    x_plus: &Series2,
    y_plus: &Series2,
    gamma: &ExactScalar,
    order: usize,
) -> Result<PiecewiseField> {
    if !gamma.is_positive() {
        return Err(Error::InconsistentField(
            "mirror speed ratio must be positive".into(),
        ));
    }
    let mirror = |series: &Series2, flip: bool| -> Series2 {
        let terms = series
            .terms()
            .map(|(i, j, c)| {
                let mut value = c * gamma;
                if flip != (j % 2 == 1) {
                    value = -&value;
                }
                (i, j, value)
            })
            .collect();
        Series2::from_terms(terms, series.order()).expect("mirror of valid terms stays valid")
    };
    PiecewiseField::new(
        order,
        x_plus.clone(),
        y_plus.clone(),
        mirror(x_plus, true),
        mirror(y_plus, false),
    )
}

/// Draws a center at random: an upper field with an invisible tangency of
/// random contact order, speed, and perturbation terms, closed up by
/// `reflection_center` with a random positive ratio.
pub fn random_center<R: Rng>(rng: &mut R, order: usize) -> PiecewiseField {
    assert!(order >= 4, "generator needs room for perturbation terms");
    let delta: i64 = if rng.gen_bool(0.5) { 1 } else { -1 };
    let k: usize = if rng.gen_bool(0.7) { 1 } else { 2 };
    let ratio = |rng: &mut R, lo: i64, hi: i64| {
        ExactScalar::ratio(rng.gen_range(lo..=hi), rng.gen_range(1..=3))
    };

    let mut x_terms: BTreeMap<(usize, usize), ExactScalar> = BTreeMap::new();
    x_terms.insert((0, 0), &ratio(rng, 1, 3) * &ExactScalar::int(delta));
    for _ in 0..rng.gen_range(0..=3) {
        let i = rng.gen_range(0..=order);
        let j = rng.gen_range(0..=(order - i));
        if (i, j) == (0, 0) {
            continue;
        }
        let entry = x_terms.entry((i, j)).or_insert_with(ExactScalar::zero);
        *entry = &*entry + &ratio(rng, -3, 3);
    }

    let mut y_terms: BTreeMap<(usize, usize), ExactScalar> = BTreeMap::new();
    y_terms.insert(
        (2 * k - 1, 0),
        &ratio(rng, 1, 3) * &ExactScalar::int(-delta),
    );
    for _ in 0..rng.gen_range(0..=4) {
        let pure_x = rng.gen_bool(0.5);
        let (i, j) = if pure_x {
            (rng.gen_range(2 * k..=order), 0)
        } else {
            let j = rng.gen_range(1..=order - 1);
            (rng.gen_range(0..=(order - j)), j)
        };
        let entry = y_terms.entry((i, j)).or_insert_with(ExactScalar::zero);
        *entry = &*entry + &ratio(rng, -3, 3);
    }

    let into_series = |terms: BTreeMap<(usize, usize), ExactScalar>| {
        Series2::from_terms(
            terms.into_iter().map(|((i, j), c)| (i, j, c)).collect(),
            order,
        )
        .expect("generated terms respect the order bound")
    };
    let x_plus = into_series(x_terms);
    let y_plus = into_series(y_terms);
    let gamma = ratio(rng, 1, 4);
    reflection_center(&x_plus, &y_plus, &gamma, order)
        .expect("mirrored field is valid by construction")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::field::{classify, Side};
    use crate::half_return::center_check;
    use crate::period::{corollary_values, period_constants};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn named_fixtures_classify_as_advertised() {
        for (f, k_plus, k_minus) in [
            (two_fold(), 1, 1),
            (uneven_speeds(), 1, 1),
            (cusp_fold(), 2, 1),
            (quartic_speed_center(), 1, 1),
            (non_center(), 1, 1),
        ] {
            let c = classify(&f).unwrap();
            assert_eq!((c.k_plus, c.k_minus), (k_plus, k_minus));
        }
        assert!(matches!(
            classify(&visible_contact()),
            Err(Error::VisibleContact { side: "plus" })
        ));
    }

    #[test]
    fn named_centers_pass_and_the_defective_one_fails() {
        for f in [
            two_fold(),
            uneven_speeds(),
            cusp_fold(),
            quartic_speed_center(),
        ] {
            assert!(center_check(&f, 4).unwrap().is_center());
        }
        let report = center_check(&non_center(), 4).unwrap();
        assert_eq!(report.first_mismatch_index, Some(2));
    }

    #[test]
    fn mirror_of_the_quartic_upper_field_reproduces_the_fixture() {
        let fixture = quartic_speed_center();
        let rebuilt = reflection_center(
            fixture.x_component(Side::Plus),
            fixture.y_component(Side::Plus),
            &ExactScalar::one(),
            12,
        )
        .unwrap();
        for side in Side::both() {
            assert_eq!(rebuilt.x_component(side), fixture.x_component(side));
            assert_eq!(rebuilt.y_component(side), fixture.y_component(side));
        }
    }

    #[test]
    fn mirror_flips_odd_heights() {
        // X = 1 + y, Y = -x + xy, ratio 2. The height flip negates odd
        // powers of y, time reversal negates all of X: so X keeps its y-odd
        // terms and flips the rest, Y the other way around.
        let x_plus = s2(&[(0, 0, 1), (0, 1, 1)], 6);
        let y_plus = s2(&[(1, 0, -1), (1, 1, 1)], 6);
        let f = reflection_center(&x_plus, &y_plus, &ExactScalar::int(2), 6).unwrap();
        assert_eq!(f.x_component(Side::Minus), &s2(&[(0, 0, -2), (0, 1, 2)], 6));
        assert_eq!(
            f.y_component(Side::Minus),
            &s2(&[(1, 0, -2), (1, 1, -2)], 6)
        );
    }

    #[test]
    fn mirror_ratio_must_be_positive() {
        let x_plus = s2(&[(0, 0, 1)], 4);
        let y_plus = s2(&[(1, 0, -1)], 4);
        assert!(reflection_center(&x_plus, &y_plus, &ExactScalar::int(-1), 4).is_err());
        assert!(reflection_center(&x_plus, &y_plus, &ExactScalar::zero(), 4).is_err());
    }

    #[test]
    fn random_centers_are_centers_with_positive_linear_constant() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..12 {
            let f = random_center(&mut rng, 8);
            let class = classify(&f).expect("generated fields classify");
            let order = 2.min(f.order() + 2 - 2 * class.k_plus.max(class.k_minus));
            let data = period_constants(&f, order).expect("generated fields are centers");
            assert!(data.t_hat[0].is_zero());
            assert!(data.t_hat[1].is_positive());
            let (c0, c1) = corollary_values(&f).unwrap();
            assert_eq!(data.t_hat[0], c0);
            assert_eq!(data.t_hat[1], c1);
        }
    }
}
