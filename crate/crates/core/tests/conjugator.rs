use cantorstab_core::conjugator::{
    build_conjugator, conjugate_element, conjugation_suite, eval_limit, eval_limit_inverse, extend,
    samples_off_first_stage, verify_certificate, LimitValue, Outcome, SuiteStatus,
};
use cantorstab_core::engine::{fixes_cylinder_pointwise, in_rigid_stabiliser};
use cantorstab_core::family::GroupFamily;
use cantorstab_core::search::RistCache;
use cantorstab_core::{
    Alphabet, BoundaryPoint, Budgets, ConjugatorCertificate, Cylinder, DepthSchedule, Error, GroupElement, Ternary,
    Word,
};
use proptest::prelude::*;

fn pt(s: &str) -> BoundaryPoint {
    BoundaryPoint::parse(Alphabet::BINARY, s).unwrap()
}

fn build(family: &GroupFamily, x: &str, y: &str, depth: usize) -> ConjugatorCertificate {
    build_conjugator(
        family,
        &pt(x),
        &pt(y),
        &DepthSchedule::up_to(depth),
        Budgets::default(),
        &mut RistCache::new(),
    )
    .unwrap()
}

fn grigorchuk_cert() -> ConjugatorCertificate {
    build(&GroupFamily::grigorchuk(), "(0)", "(01)", 8)
}

#[test]
fn grigorchuk_certificate_verifies() {
    let cert = grigorchuk_cert();
    assert_eq!(cert.stages.len(), 9);
    assert_eq!(cert.depths(), (1..=8).collect::<Vec<_>>());
    let report = verify_certificate(&cert, Budgets::default());
    assert!(report.passed(), "{:?}", report.failures().collect::<Vec<_>>());
    for name in ["image", "schedule", "point", "agreement", "target", "window", "nesting", "factor"] {
        assert_eq!(report.checks.iter().filter(|c| c.name == name).count(), 8, "{name}");
    }
    assert_eq!(cert.design_flags, vec!["W_depth_margin:1".to_string()]);
    assert!(cert.warnings.is_empty());
}

#[test]
fn odometer_certificate_refines_inside_the_target() {
    let f = GroupFamily::odometer_full();
    let cert = build(&f, "(0)", "(1)", 3);
    assert!(verify_certificate(&cert, Budgets::default()).passed());
    let g1 = &cert.stages[1].g;
    assert_eq!(g1.act_point(&pt("(0)"), 4096).unwrap().prefix(1), pt("(1)").prefix(1));
    for s in &cert.stages[1..] {
        assert!(s.v.prefix().letters().iter().all(|&l| l == 1), "{}", s.v);
    }
}

#[test]
fn equal_points_give_identity_stages() {
    for f in [GroupFamily::grigorchuk(), GroupFamily::odometer_full(), GroupFamily::prefix_v()] {
        let cert = build(&f, "1(10)", "1(10)", 5);
        assert!(cert.stages.iter().all(|s| s.h.is_identity(16).is_yes()), "{}", f.name());
        assert!(verify_certificate(&cert, Budgets::default()).passed());
    }
}

#[test]
fn schedules_are_validated() {
    assert_eq!(DepthSchedule::new(vec![0, 1]), Err(Error::InvalidSchedule));
    assert_eq!(DepthSchedule::new(vec![2, 2]), Err(Error::InvalidSchedule));
    assert!(DepthSchedule::new(vec![1, 3, 4]).is_ok());
}

#[test]
fn alphabet_mismatch_fails_loudly() {
    let ternary = BoundaryPoint::parse(Alphabet::new(3).unwrap(), "(2)").unwrap();
    let r = build_conjugator(
        &GroupFamily::grigorchuk(),
        &pt("(0)"),
        &ternary,
        &DepthSchedule::up_to(2),
        Budgets::default(),
        &mut RistCache::new(),
    );
    assert_eq!(r.unwrap_err().error, Error::AlphabetMismatch);
}

#[test]
fn non_minimal_family_is_warned_about() {
    let tau = GroupFamily::odometer_full().generator("tau").unwrap().clone();
    let shift = GroupFamily::custom("shift", vec![("tau".into(), tau)]).unwrap();
    let r = build_conjugator(
        &shift,
        &pt("(0)"),
        &pt("(1)"),
        &DepthSchedule::up_to(2),
        Budgets::default(),
        &mut RistCache::new(),
    );
    // The shift is minimal, but it has no rigid stabilisers to move with.
    let failure = r.unwrap_err();
    assert!(matches!(failure.error, Error::EmptyRist(_)));
    assert!(failure.partial.warnings.is_empty());
    assert_eq!(failure.partial.stages.len(), 2);

    let a = GroupFamily::grigorchuk().generator("a").unwrap().clone();
    let flip = GroupFamily::custom("flip", vec![("a".into(), a)]).unwrap();
    let failure = build_conjugator(
        &flip,
        &pt("(0)"),
        &pt("(1)"),
        &DepthSchedule::new(vec![2, 3]).unwrap(),
        Budgets::default(),
        &mut RistCache::new(),
    )
    .unwrap_err();
    assert!(!failure.partial.warnings.is_empty());
}

#[test]
fn mutations_are_detected() {
    let cert = grigorchuk_cert();
    let a = GroupFamily::grigorchuk().generator("a").unwrap().clone();
    let mut bad = cert.clone();
    bad.stages[2].g = bad.stages[2].g.compose(&a).unwrap();
    let report = verify_certificate(&bad, Budgets::default());
    assert!(report
        .failures()
        .any(|c| c.stage == 2 && c.name == "agreement" && c.outcome == Outcome::Fail));

    let mut bad = cert.clone();
    let flipped: Vec<u8> = bad.stages[3].u.prefix().letters().iter().map(|l| 1 - l).collect();
    bad.stages[3].u = Cylinder::new(Word::new(Alphabet::BINARY, flipped).unwrap());
    assert!(!verify_certificate(&bad, Budgets::default()).passed());
}

#[test]
fn limit_map_examples() {
    let cert = grigorchuk_cert();
    assert_eq!(
        eval_limit(&cert, &pt("(0)"), 4096).unwrap(),
        LimitValue::Prefix {
            word: pt("(01)").prefix(8),
            limit: Some(pt("(01)"))
        }
    );
    assert_eq!(
        eval_limit_inverse(&cert, &pt("(01)"), 4096).unwrap(),
        LimitValue::Prefix {
            word: pt("(0)").prefix(8),
            limit: Some(pt("(0)"))
        }
    );
    let z = pt("1(0)");
    let g1 = &cert.stages[1].g;
    assert_eq!(eval_limit(&cert, &z, 4096).unwrap(), LimitValue::Exact(g1.act_point(&z, 4096).unwrap()));
    let LimitValue::Exact(fz) = eval_limit(&cert, &z, 4096).unwrap() else { unreachable!() };
    assert_eq!(eval_limit_inverse(&cert, &fz, 4096).unwrap(), LimitValue::Exact(z));

    let f = GroupFamily::grigorchuk();
    let trivial = build_conjugator(
        &f,
        &pt("(0)"),
        &pt("(01)"),
        &DepthSchedule::new(vec![]).unwrap(),
        Budgets::default(),
        &mut RistCache::new(),
    )
    .unwrap();
    assert!(verify_certificate(&trivial, Budgets::default()).passed());
    assert_eq!(eval_limit(&trivial, &pt("(0)"), 64).unwrap(), LimitValue::Exact(pt("(0)")));
    assert_eq!(eval_limit_inverse(&trivial, &pt("1(0)"), 64).unwrap(), LimitValue::Exact(pt("1(0)")));
}

#[test]
fn conjugate_element_examples() {
    let cert = grigorchuk_cert();
    let f = GroupFamily::grigorchuk();
    let d = f.generator("d").unwrap().clone();
    let c = conjugate_element(&cert, &d, 30, Budgets::default()).unwrap();
    assert_eq!(c.stage, 1);
    assert_eq!(c.witness_depth, 1);
    assert!(c.element.same_map(&cert.stages[1].g.conjugate(&d).unwrap(), 512).unwrap().is_yes());
    assert_eq!(fixes_cylinder_pointwise(&c.element, &cert.stages[1].v, 512).unwrap(), Ternary::Yes);

    let b = f.generator("b").unwrap().clone();
    let singular = build(&f, "(1)", "(0)", 4);
    assert!(matches!(
        conjugate_element(&singular, &b, 30, Budgets::default()),
        Err(Error::NotInNbhdStabiliser(_))
    ));

    let trivial = build_conjugator(
        &f,
        &pt("(0)"),
        &pt("(0)"),
        &DepthSchedule::up_to(3),
        Budgets::default(),
        &mut RistCache::new(),
    )
    .unwrap();
    let same = conjugate_element(&trivial, &d, 30, Budgets::default()).unwrap();
    assert!(same.element.same_map(&d, 512).unwrap().is_yes());
}

#[test]
fn conjugation_suite_examples() {
    let cert = grigorchuk_cert();
    let f = GroupFamily::grigorchuk();
    let samples = samples_off_first_stage(&f, &cert, 60, Budgets::default(), &mut RistCache::new()).unwrap();
    assert_eq!(samples.len(), 60);
    for (_, g) in &samples {
        assert_eq!(in_rigid_stabiliser(g, &cert.stages[1].u.complement_code()[0], 512).unwrap(), Ternary::Yes);
    }
    let report = conjugation_suite(&cert, &samples, Budgets::default());
    assert_eq!(report.count(SuiteStatus::Pass), 60, "{report:?}");

    let a = f.generator("a").unwrap().clone();
    let report = conjugation_suite(&cert, &[("a".into(), a)], Budgets::default());
    assert_eq!(report.count(SuiteStatus::Skipped), 1);
    assert!(report.passed());

    assert!(conjugation_suite(&cert, &[], Budgets::default()).entries.is_empty());
}

#[test]
fn other_families_pass_the_suite() {
    for (f, x, y) in [
        (GroupFamily::odometer_full(), "(0)", "(1)"),
        (GroupFamily::odometer_full(), "1(0)", "(011)"),
        (GroupFamily::prefix_v(), "(0)", "(01)"),
        (GroupFamily::prefix_v(), "1(0)", "(1)"),
    ] {
        let cert = build(&f, x, y, 6);
        let report = verify_certificate(&cert, Budgets::default());
        assert!(report.passed(), "{} {x}→{y}: {:?}", f.name(), report.failures().collect::<Vec<_>>());
        let samples = samples_off_first_stage(&f, &cert, 20, Budgets::default(), &mut RistCache::new()).unwrap();
        assert!(!samples.is_empty());
        let suite = conjugation_suite(&cert, &samples, Budgets::default());
        assert!(suite.passed() && suite.count(SuiteStatus::Pass) == samples.len(), "{suite:?}");
    }
}

#[test]
fn zero_margin_is_recorded() {
    let budgets = Budgets {
        margin: 0,
        ..Budgets::default()
    };
    let cert = build_conjugator(
        &GroupFamily::odometer_full(),
        &pt("(0)"),
        &pt("(1)"),
        &DepthSchedule::up_to(3),
        budgets,
        &mut RistCache::new(),
    )
    .unwrap();
    assert_eq!(cert.design_flags, vec!["W_equals_V".to_string()]);
    assert!(cert.stages.iter().all(|s| s.w == s.v));
    assert!(verify_certificate(&cert, budgets).passed());
}

fn family() -> impl Strategy<Value = GroupFamily> {
    prop_oneof![
        Just(GroupFamily::grigorchuk()),
        Just(GroupFamily::odometer_full()),
        Just(GroupFamily::prefix_v()),
    ]
}

fn binary_point() -> impl Strategy<Value = BoundaryPoint> {
    (prop::collection::vec(0u8..2, 0..=4), prop::collection::vec(0u8..2, 1..=3))
        .prop_map(|(pre, per)| BoundaryPoint::new(Alphabet::BINARY, pre, per).unwrap())
}

fn exact(v: LimitValue) -> BoundaryPoint {
    match v {
        LimitValue::Exact(p) => p,
        other => panic!("expected an exact value, got {other:?}"),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn built_certificates_satisfy_every_stage_condition(
        f in family(),
        x in binary_point(),
        y in binary_point(),
        depth in 1usize..6,
    ) {
        let cert = build_conjugator(&f, &x, &y, &DepthSchedule::up_to(depth), Budgets::default(), &mut RistCache::new());
        let cert = cert.map_err(|e| TestCaseError::fail(e.to_string()))?;
        let report = verify_certificate(&cert, Budgets::default());
        prop_assert!(report.passed(), "{:?}", report.failures().collect::<Vec<_>>());
        for s in &cert.stages[1..] {
            prop_assert_eq!(s.g.act_cylinder(&s.u).unwrap(), s.v.clone());
            let img = s.g.act_point(&x, 100_000).unwrap();
            // Convergence: g_i(x) agrees with y at least to depth d_i.
            let agree = img.first_disagreement(&y).unwrap().unwrap_or(usize::MAX);
            prop_assert!(agree >= s.depth);
        }
    }

    #[test]
    fn limit_map_round_trips_and_is_stable(
        f in family(),
        x in binary_point(),
        y in binary_point(),
        z in binary_point(),
    ) {
        let mut cache = RistCache::new();
        let short = build_conjugator(&f, &x, &y, &DepthSchedule::up_to(3), Budgets::default(), &mut cache)
            .map_err(|e| TestCaseError::fail(e.to_string()))?;
        let long = extend(short.clone(), &f, &[4, 5], &mut cache).map_err(|e| TestCaseError::fail(e.to_string()))?;
        prop_assert_eq!(&long.stages[..4], &short.stages[..]);
        prop_assert!(verify_certificate(&long, Budgets::default()).passed());
        if !short.stages[1].u.contains_point(&z).unwrap() {
            let fz = exact(eval_limit(&short, &z, 100_000).unwrap());
            prop_assert_eq!(exact(eval_limit_inverse(&short, &fz, 100_000).unwrap()), z.clone());
        }
        if !short.last().u.contains_point(&z).unwrap() {
            prop_assert_eq!(eval_limit(&short, &z, 100_000).unwrap(), eval_limit(&long, &z, 100_000).unwrap());
        }
    }

    #[test]
    fn conjugates_land_in_the_neighbourhood_stabiliser(word in "[abcd]{1,6}") {
        let f = GroupFamily::grigorchuk();
        let cert = grigorchuk_cert();
        let g: GroupElement = f.parse_element(&word.chars().map(String::from).collect::<Vec<_>>().join("*")).unwrap();
        if let Ok(c) = conjugate_element(&cert, &g, 8, Budgets::default()) {
            let stage = &cert.stages[c.stage];
            prop_assert_eq!(fixes_cylinder_pointwise(&c.element, &stage.v, 512).unwrap(), Ternary::Yes);
            let back = stage.g.invert().conjugate(&c.element).unwrap();
            prop_assert_eq!(back.compose(&g.invert()).unwrap().is_identity(1024), Ternary::Yes);
        }
    }
}
