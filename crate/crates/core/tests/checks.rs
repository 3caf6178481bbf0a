use symmv_core::domain::{build_grid, DomainSpec, Grid, Shape};
use symmv_core::verify::{
    check_ball_comparison, check_chiti_crossing, check_faber_krahn, check_max_bound, check_moment_bound,
    check_ode_inequality, check_payne_rayner, check_polya_szego, Instance, Tolerances,
};
use symmv_core::rearrange::supersampled_rearrangement;
use symmv_core::{SublinearOptions, Verdict};

fn grid(shape: Shape, res: usize) -> Grid {
    build_grid(&DomainSpec::new(shape).unwrap(), res).unwrap()
}

fn disk(res: usize) -> Grid {
    grid(Shape::Disk { radius: 1.0 }, res)
}

fn square(res: usize) -> Grid {
    grid(Shape::Rectangle { width: 1.0, height: 1.0 }, res)
}

fn instance(g: &Grid, q: f64) -> Instance<'_> {
    Instance::solve(g, q, SublinearOptions::default()).unwrap()
}

#[test]
fn moment_bound_is_an_identity_at_q_plus_one() {
    let tol = Tolerances::default();
    let g = grid(Shape::LShape { side: 1.0 }, 64);
    for q in [0.3, 0.7] {
        let inst = instance(&g, q);
        let r = &check_moment_bound(&inst, q + 1.0, &tol).unwrap()[0];
        assert!(r.margin.abs() <= 1e-10, "q={q}: {}", r.margin);
        assert_eq!(r.verdict, Verdict::EqualityCase);
    }
}

#[test]
fn disk_is_an_equality_case_and_square_passes() {
    let tol = Tolerances::default();
    let gd = disk(128);
    let gs = square(128);
    let d = instance(&gd, 0.5);
    let s = instance(&gs, 0.5);
    for r in check_moment_bound(&d, 2.0, &tol).unwrap().iter().chain(&check_ball_comparison(&d, 2.0, &tol).unwrap()) {
        assert_eq!(r.verdict, Verdict::EqualityCase, "{}: {}", r.name, r.margin);
    }
    for r in check_moment_bound(&s, 2.0, &tol).unwrap().iter().chain(&check_ball_comparison(&s, 2.0, &tol).unwrap()) {
        assert!(r.margin > 0.0, "{}: {}", r.name, r.margin);
    }
    let ball = check_ball_comparison(&s, 2.0, &tol).unwrap();
    assert_eq!(ball[0].verdict, Verdict::Pass);

    let fk = check_faber_krahn(&d, &tol).unwrap();
    assert_eq!(fk.verdict, Verdict::EqualityCase);
    let fk = check_faber_krahn(&s, &tol).unwrap();
    assert_eq!(fk.verdict, Verdict::Pass);
}

#[test]
fn max_bound_holds_strictly_even_on_the_disk() {
    let tol = Tolerances::default();
    let g = disk(64);
    let inst = instance(&g, 0.5);
    let r = check_max_bound(&inst, &tol).unwrap();
    assert_eq!(r.rhs, 1.0 / 16.0);
    assert_eq!(r.verdict, Verdict::Pass);

    let inst = instance(&g, 0.9);
    let r = check_max_bound(&inst, &tol).unwrap();
    assert!((r.rhs / 0.25f64.powi(10) - 1.0).abs() < 1e-12);
    assert_eq!(r.verdict, Verdict::Pass);
}

#[test]
fn faber_krahn_margin_grows_with_asymmetry() {
    let tol = Tolerances::default();
    let gs = square(96);
    let ga = grid(Shape::Annulus { inner: 0.5, outer: 1.0 }, 96);
    let s = check_faber_krahn(&instance(&gs, 0.5), &tol).unwrap();
    let a = check_faber_krahn(&instance(&ga, 0.5), &tol).unwrap();
    assert!(s.margin > 0.01);
    assert!(a.margin > s.margin);
}

#[test]
fn square_crosses_once() {
    let tol = Tolerances::default();
    let g = square(96);
    let inst = instance(&g, 0.5);
    let (c, reports) = check_chiti_crossing(&inst, &[1.5, 2.0, 3.0], &tol).unwrap();
    assert_eq!(c.sign_changes, 1);
    let s0 = c.s0.unwrap();
    assert!(s0 > 0.0 && s0 < c.m_star);
    assert_eq!(reports.len(), 5);
    assert_eq!(reports[0].name, "chiti_crossing");
    assert_eq!(reports[1].name, "partial_dominance");
    assert!(reports.iter().all(|r| r.verdict.holds()), "{reports:?}");
}

#[test]
fn disk_crossing_is_an_equality_case_at_any_resolution() {
    let tol = Tolerances::default();
    for res in [48, 128] {
        let g = disk(res);
        let inst = instance(&g, 0.5);
        let (c, reports) = check_chiti_crossing(&inst, &[2.0], &tol).unwrap();
        assert_eq!(reports[0].verdict, Verdict::EqualityCase, "res {res}: {c:?}");
    }
}

#[test]
fn payne_rayner_disk_and_square() {
    let tol = Tolerances::default();
    assert_eq!(check_payne_rayner(&disk(128), &tol).unwrap().verdict, Verdict::EqualityCase);
    assert_eq!(check_payne_rayner(&square(64), &tol).unwrap().verdict, Verdict::Pass);
}

#[test]
fn polya_szego_within_allowance() {
    let tol = Tolerances::default();
    for g in [disk(96), square(96)] {
        let r = check_polya_szego(&instance(&g, 0.5), &tol).unwrap();
        assert!(r.verdict.holds(), "{}: {}", g.spec(), r.margin);
    }
}

#[test]
fn level_set_inequality_on_the_square() {
    let g = square(96);
    let inst = instance(&g, 0.5);
    let p = supersampled_rearrangement(&inst.normalized(), 8).unwrap();
    let r = check_ode_inequality(&p, inst.sq_omega, 0.5, 2, 1e-3).unwrap();
    assert!(r.margin >= 0.0, "{}", r.margin);
}
