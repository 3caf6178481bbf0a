use symmv_core::domain::{DomainKind, DomainSpec};
use symmv_core::verify::{run_suite, CheckKind, Exponent, SuiteConfig};
use symmv_core::{Error, Verdict};

fn small_config() -> SuiteConfig {
    SuiteConfig {
        domains: vec![
            DomainSpec::from_params(DomainKind::Disk, &[1.0]).unwrap(),
            DomainSpec::from_params(DomainKind::Rectangle, &[1.0]).unwrap(),
        ],
        q_values: vec![0.5],
        k_values: vec![Exponent::QPlusOne, Exponent::Value(2.0)],
        resolution: 96,
        ..SuiteConfig::default()
    }
}

#[test]
fn empty_domain_list_gives_no_reports() {
    let cfg = SuiteConfig { domains: vec![], ..SuiteConfig::default() };
    assert!(run_suite(&cfg).unwrap().is_empty());
}

#[test]
fn out_of_band_exponent_is_rejected_before_solving() {
    let cfg = SuiteConfig { q_values: vec![1.5], ..SuiteConfig::default() };
    assert_eq!(run_suite(&cfg), Err(Error::ExponentOutOfBand(1.5)));
    let cfg = SuiteConfig { k_values: vec![Exponent::Value(1.1)], ..SuiteConfig::default() };
    assert!(run_suite(&cfg).is_err());
    let cfg = SuiteConfig { resolution: 8, ..SuiteConfig::default() };
    assert_eq!(run_suite(&cfg), Err(Error::InvalidResolution(8)));
}

#[test]
fn small_suite_holds_and_is_deterministic() {
    let cfg = small_config();
    let a = run_suite(&cfg).unwrap();
    let b = run_suite(&cfg).unwrap();
    assert_eq!(a, b);
    assert!(!a.is_empty());
    for r in &a {
        assert!(r.verdict.holds(), "{} {:?}: margin {}", r.name, r.context, r.margin);
    }
    // ordering: domain-level check first, then by q and check
    assert_eq!(a[0].name, "payne_rayner");
    assert_eq!(a[0].context.domain.as_deref(), Some("disk:1"));
    let second = a.iter().position(|r| r.context.domain.as_deref() != Some("disk:1")).unwrap();
    assert_eq!(a[second].name, "payne_rayner");
}

#[test]
fn inflated_left_sides_fail() {
    let cfg = SuiteConfig {
        checks: vec![CheckKind::MaxBound, CheckKind::FaberKrahn],
        inject_lhs_scale: Some(10.0),
        ..small_config()
    };
    let reports = run_suite(&cfg).unwrap();
    assert_eq!(reports.len(), 4);
    assert!(reports.iter().all(|r| r.verdict == Verdict::Fail));
}

#[test]
fn selected_checks_only() {
    let cfg = SuiteConfig { checks: vec![CheckKind::MomentBound], ..small_config() };
    let reports = run_suite(&cfg).unwrap();
    // two domains, one q, two k, integral and max forms
    assert_eq!(reports.len(), 8);
    assert!(reports.iter().all(|r| r.name.starts_with("moment_bound")));
}

#[test]
fn unbuildable_domain_becomes_skipped_reports() {
    let thin = DomainSpec::from_params(DomainKind::Annulus, &[0.999, 1.0]).unwrap();
    let cfg = SuiteConfig {
        domains: vec![thin],
        checks: vec![CheckKind::MaxBound, CheckKind::PayneRayner],
        resolution: 16,
        ..SuiteConfig::default()
    };
    let reports = run_suite(&cfg).unwrap();
    assert_eq!(reports.len(), 2);
    assert!(reports.iter().all(|r| r.verdict == Verdict::Skipped && r.note.is_some()));
}

#[test]
fn check_names_round_trip() {
    for c in CheckKind::ALL {
        assert_eq!(c.name().parse::<CheckKind>().unwrap(), c);
    }
    assert!("nonsense".parse::<CheckKind>().is_err());
    assert_eq!("q + 1".parse::<Exponent>().unwrap(), Exponent::QPlusOne);
    assert_eq!("2.5".parse::<Exponent>().unwrap(), Exponent::Value(2.5));
}
