use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use symmv_core::domain::{build_grid, DomainSpec, Grid, Shape};
use symmv_core::rearrange::{
    decreasing_rearrangement, distribution_function, hardy_littlewood_bounds, increasing_rearrangement,
    profile_integral, schwarz_symmetrization, DecreasingProfile,
};
use symmv_core::{solve_sublinear, ScalarField};

fn square(res: usize) -> Grid {
    build_grid(&DomainSpec::new(Shape::Rectangle { width: 1.0, height: 1.0 }).unwrap(), res).unwrap()
}

fn grid_power_integral(f: &ScalarField<'_>, p: f64) -> f64 {
    f.values().iter().map(|v| v.powf(p)).sum::<f64>() * f.grid().cell_measure()
}

fn random_field<'g>(grid: &'g Grid, rng: &mut ChaCha8Rng, signed: bool) -> ScalarField<'g> {
    let lo = if signed { -1.0 } else { 0.0 };
    let values = (0..grid.len()).map(|_| rng.gen_range(lo..1.0)).collect();
    ScalarField::new(grid, values).unwrap()
}

#[test]
fn equimeasurable_on_a_sublinear_solution() {
    let g = build_grid(&DomainSpec::new(Shape::LShape { side: 1.0 }).unwrap(), 48).unwrap();
    let q = 0.5;
    let (u, _) = solve_sublinear(&g, q, 1e-8).unwrap();
    let p = decreasing_rearrangement(&u).unwrap();
    for e in [1.0, q + 1.0, 2.0, 3.0] {
        let a = grid_power_integral(&u, e);
        let b = profile_integral(&p, e);
        assert!((a - b).abs() <= 1e-12 * a, "p = {e}: {a} vs {b}");
    }
    assert!((p.total_measure() - g.len() as f64 * g.cell_measure()).abs() < 1e-12);
}

#[test]
fn distribution_matches_profile_level_sets() {
    let g = square(24);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let f = random_field(&g, &mut rng, false);
    let p = decreasing_rearrangement(&f).unwrap();
    for t in [0.0, 0.1, 0.25, 0.5, 0.9, 1.0] {
        let cells = p.values().iter().filter(|v| **v > t).count();
        assert_eq!(distribution_function(&f, t), cells as f64 * g.cell_measure());
    }
}

#[test]
fn hardy_littlewood_chain_on_seeded_pairs() {
    let g = square(32);
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for pair in 0..100 {
        let f = random_field(&g, &mut rng, pair % 2 == 1);
        let h = random_field(&g, &mut rng, pair % 3 == 2);
        let (lower, middle, upper) = hardy_littlewood_bounds(&f, &h).unwrap();
        assert!(lower <= middle && middle <= upper, "pair {pair}: {lower} {middle} {upper}");
    }
}

#[test]
fn hardy_littlewood_is_tight_for_identical_ordering() {
    let g = square(20);
    let f = ScalarField::from_fn(&g, |x, y| x + 2.0 * y).unwrap();
    let (lower, middle, upper) = hardy_littlewood_bounds(&f, &f).unwrap();
    assert!((upper - middle).abs() <= 1e-12 * upper);
    assert!(lower < middle);
}

#[test]
fn symmetrization_keeps_volume_and_max() {
    let g = square(40);
    let f = ScalarField::from_fn(&g, |x, y| (x * (1.0 - x) * y * (1.0 - y)).sqrt()).unwrap();
    let s = schwarz_symmetrization(&f).unwrap();
    let area = g.len() as f64 * g.cell_measure();
    assert!((std::f64::consts::PI * s.radius() * s.radius() - area).abs() < 1e-12);
    let fmax = f.values().iter().copied().fold(0.0, f64::max);
    assert_eq!(s.max_value(), fmax);
    assert_eq!(s.eval_radius(0.0), fmax);
    assert_eq!(s.eval_radius(s.radius() * 1.01), 0.0);
}

fn profile_strategy() -> impl Strategy<Value = DecreasingProfile> {
    prop::collection::vec((1e-3f64..1.0, 0.0f64..10.0), 1..40).prop_map(|mut pairs| {
        pairs.sort_by(|a, b| b.1.total_cmp(&a.1));
        let (w, v): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
        DecreasingProfile::new(w, v).unwrap()
    })
}

proptest! {
    #[test]
    fn double_reflection_is_identity(p in profile_strategy()) {
        let back = increasing_rearrangement(&p).reflect();
        prop_assert_eq!(back.widths(), p.widths());
        prop_assert_eq!(back.values(), p.values());
    }

    #[test]
    fn rearrangement_preserves_power_integrals(
        values in prop::collection::vec(0.0f64..5.0, 256),
        e in prop::sample::select(vec![1.0, 1.3, 1.5, 1.8, 2.0, 3.0]),
    ) {
        let g = square(16);
        let f = ScalarField::new(&g, values).unwrap();
        let p = decreasing_rearrangement(&f).unwrap();
        let a = grid_power_integral(&f, e);
        let b = profile_integral(&p, e);
        prop_assert!((a - b).abs() <= 1e-12 * a.max(1e-300));
        prop_assert!(p.values().windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn stepwise_powers_commute_with_rearrangement(
        values in prop::collection::vec(0.0f64..3.0, 256),
        e in 0.2f64..4.0,
    ) {
        let g = square(16);
        let f = ScalarField::new(&g, values).unwrap();
        let a = decreasing_rearrangement(&f.map(|v| v.powf(e))).unwrap();
        let b = decreasing_rearrangement(&f).unwrap().powered(e);
        prop_assert_eq!(a.values(), b.values());
    }

    #[test]
    fn scaling_commutes_with_rearrangement(
        values in prop::collection::vec(0.0f64..3.0, 256),
        t in 0.01f64..100.0,
    ) {
        let g = square(16);
        let f = ScalarField::new(&g, values).unwrap();
        let a = decreasing_rearrangement(&f.scaled(t)).unwrap();
        let b = decreasing_rearrangement(&f).unwrap().scaled(t).unwrap();
        prop_assert_eq!(a.values(), b.values());
    }

    #[test]
    fn hardy_littlewood_orders_any_pair(
        f in prop::collection::vec(-2.0f64..2.0, 256),
        h in prop::collection::vec(-2.0f64..2.0, 256),
    ) {
        let g = square(16);
        let f = ScalarField::new(&g, f).unwrap();
        let h = ScalarField::new(&g, h).unwrap();
        let (lower, middle, upper) = hardy_littlewood_bounds(&f, &h).unwrap();
        let slack = 1e-12 * (upper.abs() + lower.abs() + 1.0);
        prop_assert!(lower <= middle + slack && middle <= upper + slack);
    }
}
