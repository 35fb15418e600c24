use cantorstab_core::engine::{
    classify_point, fixes_cylinder_pointwise, germ_classes, in_neighbourhood_stabiliser, in_rigid_stabiliser,
    stabilises, GermBudget, PointClass,
};
use cantorstab_core::family::GroupFamily;
use cantorstab_core::{Alphabet, BoundaryPoint, Cylinder, GermVerdict, GroupElement, Ternary};
use proptest::prelude::*;

fn pt(s: &str) -> BoundaryPoint {
    BoundaryPoint::parse(Alphabet::BINARY, s).unwrap()
}

fn cyl(s: &str) -> Cylinder {
    Cylinder::parse(Alphabet::BINARY, s).unwrap()
}

fn grig(s: &str) -> GroupElement {
    GroupFamily::grigorchuk().parse_element(s).unwrap()
}

fn germ_budget(max_word_len: usize) -> GermBudget {
    GermBudget {
        max_word_len,
        max_depth: 30,
        id_budget: 512,
        max_states: 4096,
        max_elements: 100_000,
    }
}

#[test]
fn stabiliser_examples() {
    assert_eq!(stabilises(&grig("b"), &pt("(1)"), 4096).unwrap(), Ternary::Yes);
    assert_eq!(stabilises(&grig("a"), &pt("(1)"), 4096).unwrap(), Ternary::No);
    let tau = GroupFamily::odometer_full().generator("tau").unwrap().clone();
    assert_eq!(stabilises(&tau, &pt("(0)"), 4096).unwrap(), Ternary::No);
}

#[test]
fn rigid_stabiliser_examples() {
    assert_eq!(fixes_cylinder_pointwise(&grig("d"), &cyl("0"), 64).unwrap(), Ternary::Yes);
    assert_eq!(in_rigid_stabiliser(&grig("d"), &cyl("0"), 64).unwrap(), Ternary::No);
    assert_eq!(in_rigid_stabiliser(&grig("d"), &cyl("1"), 256).unwrap(), Ternary::Yes);
    assert_eq!(in_rigid_stabiliser(&grig("a"), &cyl(""), 64).unwrap(), Ternary::Yes);
}

#[test]
fn germ_verdict_examples() {
    assert_eq!(in_neighbourhood_stabiliser(&grig("d"), &pt("(0)"), 5, 64, 4096).unwrap(), GermVerdict::Trivial(1));
    assert_eq!(
        in_neighbourhood_stabiliser(&grig("b"), &pt("(1)"), 20, 256, 4096).unwrap(),
        GermVerdict::NontrivialUpTo(20)
    );
    assert_eq!(
        in_neighbourhood_stabiliser(&grig("a"), &pt("(1)"), 5, 64, 4096).unwrap(),
        GermVerdict::NotInStabiliser
    );
}

#[test]
fn singular_point_has_at_least_four_germ_classes() {
    let report = germ_classes(&GroupFamily::grigorchuk(), &pt("(1)"), germ_budget(4)).unwrap();
    assert!(report.lower_bound() >= 4, "{report:?}");
    let reps: Vec<_> = report.classes.iter().map(|c| c.representative.as_str()).collect();
    for r in ["1", "b", "c", "d"] {
        assert!(reps.contains(&r), "{reps:?}");
    }
    let f = GroupFamily::grigorchuk();
    for p in ["b", "c", "d"] {
        for q in ["b", "c", "d"] {
            if p != q {
                let quotient = grig(p).compose(&grig(q).invert()).unwrap();
                let v = in_neighbourhood_stabiliser(&quotient, &pt("(1)"), 20, 256, 4096).unwrap();
                assert_eq!(v, GermVerdict::NontrivialUpTo(20), "{p}·{q}⁻¹ in {}", f.name());
            }
        }
    }
}

#[test]
fn regular_point_has_one_germ_class() {
    let report = germ_classes(&GroupFamily::grigorchuk(), &pt("(0)"), germ_budget(6)).unwrap();
    assert_eq!(report.lower_bound(), 1, "{report:?}");
    assert_eq!(report.classes.len(), 1);
    assert!(report.stabilising > 1);
    for (label, g) in GroupFamily::grigorchuk().enumerate(6, 100_000).unwrap() {
        if stabilises(&g, &pt("(0)"), 4096).unwrap().is_yes() {
            let v = in_neighbourhood_stabiliser(&g, &pt("(0)"), 30, 512, 4096).unwrap();
            assert!(v.is_trivial(), "{label}: {v}");
        }
    }
}

#[test]
fn no_stabilising_words_leaves_the_identity_class() {
    let tau = GroupFamily::odometer_full().generator("tau").unwrap().clone();
    let family = GroupFamily::custom("shift", vec![("tau".into(), tau)]).unwrap();
    let report = germ_classes(&family, &pt("(0)"), germ_budget(3)).unwrap();
    assert_eq!(report.classes.len(), 1);
    assert!(report.classes[0].element.is_identity(8).is_yes());
}

#[test]
fn classification_examples() {
    let g = GroupFamily::grigorchuk();
    assert_eq!(classify_point(&g, &pt("(1)")), PointClass::Singular);
    assert_eq!(classify_point(&g, &pt("01(1)")), PointClass::Singular);
    assert_eq!(classify_point(&g, &pt("(0)")), PointClass::Regular);
    assert_eq!(classify_point(&g, &pt("(01)")), PointClass::Regular);
    let o = GroupFamily::odometer_full();
    for p in ["01(10)", "(0)", "(1)"] {
        assert_eq!(classify_point(&o, &pt(p)), PointClass::Regular);
    }
    assert_eq!(classify_point(&GroupFamily::prefix_v(), &pt("(0)")), PointClass::NoRule);
}

fn stabilisers_of(x: &BoundaryPoint) -> Vec<GroupElement> {
    GroupFamily::grigorchuk()
        .enumerate(6, 100_000)
        .unwrap()
        .into_iter()
        .map(|(_, g)| g)
        .filter(|g| stabilises(g, x, 4096).unwrap().is_yes())
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn neighbourhood_stabiliser_is_normal(i in 0usize..1000, j in 0usize..1000, regular in any::<bool>()) {
        let x = if regular { pt("(0)") } else { pt("(1)") };
        let st = stabilisers_of(&x);
        let trivial: Vec<_> = st
            .iter()
            .filter(|g| in_neighbourhood_stabiliser(g, &x, 30, 512, 4096).unwrap().is_trivial())
            .collect();
        let g = trivial[i % trivial.len()];
        let h = &st[j % st.len()];
        let conj = h.conjugate(g).unwrap();
        let v = in_neighbourhood_stabiliser(&conj, &x, 40, 512, 4096).unwrap();
        prop_assert!(v.is_trivial(), "{} {}: {}", h, g, v);
    }

    #[test]
    fn trivial_germs_are_consistent(word in "[abcd]{1,8}", pre in "[01]{0,4}", per in "[01]{1,3}") {
        let g = grig(&word.chars().map(String::from).collect::<Vec<_>>().join("*"));
        let x = pt(&format!("{pre}({per})"));
        if let GermVerdict::Trivial(n) = in_neighbourhood_stabiliser(&g, &x, 30, 512, 4096).unwrap() {
            prop_assert_eq!(stabilises(&g, &x, 4096).unwrap(), Ternary::Yes);
            prop_assert_eq!(fixes_cylinder_pointwise(&g, &x.cylinder(n), 512).unwrap(), Ternary::Yes);
            for m in n..n + 4 {
                prop_assert_eq!(fixes_cylinder_pointwise(&g, &x.cylinder(m), 512).unwrap(), Ternary::Yes);
            }
        }
    }

    #[test]
    fn larger_budgets_never_flip_definite_answers(word in "[abcd]{1,10}", budget in 1usize..16, depth in 1usize..8) {
        let g = grig(&word.chars().map(String::from).collect::<Vec<_>>().join("*"));
        let small = g.is_identity(budget);
        let large = g.is_identity(budget * 64);
        if small != Ternary::Unknown {
            prop_assert_eq!(small, large);
        }
        let x = pt("(1)");
        let shallow = in_neighbourhood_stabiliser(&g, &x, depth, budget, 4096).unwrap();
        let deep = in_neighbourhood_stabiliser(&g, &x, depth + 10, budget * 64, 4096).unwrap();
        match shallow {
            GermVerdict::Trivial(n) => prop_assert_eq!(deep, GermVerdict::Trivial(n)),
            GermVerdict::NotInStabiliser => prop_assert_eq!(deep, GermVerdict::NotInStabiliser),
            _ => {}
        }
    }
}
