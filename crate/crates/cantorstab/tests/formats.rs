use cantorstab::doc::{self, canonical, read_envelope, CertificateDoc, ElementDoc, Envelope};
use cantorstab::family_file::{load_family, FamilyDoc};
use cantorstab::output::{parse_scale, write_atomic};
use cantorstab::CliError;
use cantorstab_core::conjugator::{build_conjugator, verify_certificate};
use cantorstab_core::family::GroupFamily;
use cantorstab_core::search::RistCache;
use cantorstab_core::{Alphabet, BoundaryPoint, Budgets, DepthSchedule, GroupElement, Ternary};
use proptest::prelude::*;

fn pt(s: &str) -> BoundaryPoint {
    BoundaryPoint::parse(Alphabet::BINARY, s).unwrap()
}

const GRIGORCHUK_FILE: &str = r#"{
  "schema": "cantorstab/family/v1",
  "name": "grigorchuk-file",
  "kind": "tree",
  "alphabet": 2,
  "generators": [
    {"name": "a", "perm": [1, 0], "sections": ["1", "1"]},
    {"name": "b", "perm": [0, 1], "sections": ["a", "c"]},
    {"name": "c", "perm": [0, 1], "sections": ["a", "d"]},
    {"name": "d", "perm": [0, 1], "sections": ["1", "b"]}
  ],
  "relations": {"involutions": ["a", "b", "c", "d"], "rewrites": [["b*c", "d"], ["c*b", "d"]]},
  "oracle": "grigorchuk-branch",
  "classifier": {"cofinal_with": 1}
}"#;

#[test]
fn element_documents_by_kind() {
    let g = GroupFamily::grigorchuk().parse_element("a*b*a*d").unwrap();
    assert_eq!(ElementDoc::from_element(&g), ElementDoc::Word("a*b*a*d".into()));
    let a = GroupFamily::prefix_v().generator("A").unwrap().clone();
    assert_eq!(
        serde_json::to_string(&ElementDoc::from_element(&a)).unwrap(),
        r#"[["0","00"],["10","01"],["11","1"]]"#
    );
    let tau = GroupFamily::odometer_full().generator("tau").unwrap().clone();
    assert_eq!(serde_json::to_string(&ElementDoc::from_element(&tau)).unwrap(), r#"[["",1]]"#);
}

#[test]
fn malformed_elements_are_schema_errors() {
    let v = GroupFamily::prefix_v();
    let bad: ElementDoc = serde_json::from_str(r#"[["0","00"],["1","01"]]"#).unwrap();
    assert!(matches!(bad.to_element(&v), Err(CliError::Schema(_))));
    let rows: ElementDoc = serde_json::from_str(r#"[["",1]]"#).unwrap();
    assert!(matches!(rows.to_element(&v), Err(CliError::Schema(_))));
    let word = ElementDoc::Word("a*z".into());
    assert!(matches!(word.to_element(&GroupFamily::grigorchuk()), Err(CliError::Schema(_))));
}

#[test]
fn certificates_round_trip_through_json() {
    for (f, x, y) in [
        (GroupFamily::grigorchuk(), "(0)", "(01)"),
        (GroupFamily::odometer_full(), "(0)", "(1)"),
        (GroupFamily::prefix_v(), "(0)", "(01)"),
    ] {
        let cert =
            build_conjugator(&f, &pt(x), &pt(y), &DepthSchedule::up_to(5), Budgets::default(), &mut RistCache::new())
                .unwrap();
        let env = Envelope::new(doc::CERTIFICATE_SCHEMA, CertificateDoc::from_certificate(&cert));
        let text = env.to_json();
        let back = read_envelope::<CertificateDoc>(&text, doc::CERTIFICATE_SCHEMA).unwrap();
        assert_eq!(back.body, env.body);
        let rebuilt = back.body.to_certificate(&f).unwrap();
        assert_eq!(rebuilt.stages.len(), cert.stages.len());
        for (s, t) in rebuilt.stages.iter().zip(&cert.stages) {
            assert_eq!((s.index, s.depth, &s.u, &s.v, &s.w), (t.index, t.depth, &t.u, &t.v, &t.w));
            assert_eq!(s.g.same_map(&t.g, 512).unwrap(), Ternary::Yes);
        }
        assert!(verify_certificate(&rebuilt, rebuilt.budgets).passed());
        assert!(text.contains("\"U\"") && text.contains("\"design_flags\""));
    }
}

#[test]
fn envelope_schema_is_checked() {
    let env = Envelope::new(doc::ORBIT_SCHEMA, serde_json::json!({}));
    let r = read_envelope::<serde_json::Value>(&env.to_json(), doc::CERTIFICATE_SCHEMA);
    assert!(matches!(r, Err(CliError::Schema(_))));
    assert!(matches!(read_envelope::<serde_json::Value>("{", doc::ORBIT_SCHEMA), Err(CliError::Schema(_))));
}

#[test]
fn canonical_body_ignores_metadata() {
    let mut a = Envelope::new(doc::ORBIT_SCHEMA, vec![1, 2, 3]);
    let mut b = a.clone();
    a.meta.elapsed_ms = Some(1);
    b.meta.elapsed_ms = Some(99);
    assert_ne!(a.to_json(), b.to_json());
    assert_eq!(canonical(&a.body), canonical(&b.body));
}

#[test]
fn family_file_matches_the_preset() {
    let file = FamilyDoc::parse(GRIGORCHUK_FILE).unwrap().build().unwrap();
    let preset = GroupFamily::grigorchuk();
    assert_eq!(file.name(), "grigorchuk-file");
    assert_eq!(file.classify(&pt("(1)")), preset.classify(&pt("(1)")));
    for w in ["a*b", "b*c*d", "a*d*a*c", "d*a*b*a*c"] {
        let (g, h) = (file.parse_element(w).unwrap(), preset.parse_element(w).unwrap());
        for z in ["(0)", "(01)", "1(10)", "(1)"] {
            assert_eq!(g.act_point(&pt(z), 4096).unwrap(), h.act_point(&pt(z), 4096).unwrap(), "{w} at {z}");
        }
    }
    assert_eq!(file.parse_element("b*c").unwrap().to_string(), "d");
}

#[test]
fn prefix_and_full_family_files() {
    let prefix = r#"{"name": "two-swaps", "kind": "prefix", "alphabet": 2,
        "generators": [
          {"name": "s", "rules": [["0", "1"], ["1", "0"]]},
          {"name": "t", "rules": [["0", "0"], ["10", "11"], ["11", "10"]]}
        ], "oracle": "prefix-localize"}"#;
    let f = FamilyDoc::parse(prefix).unwrap().build().unwrap();
    assert_eq!(f.generators().len(), 2);
    let full = r#"{"name": "shift", "kind": "full", "alphabet": 2,
        "generators": [{"name": "tau", "rows": [["", 1]]}], "classifier": "all-regular"}"#;
    let f = FamilyDoc::parse(full).unwrap().build().unwrap();
    assert_eq!(f.classify(&pt("(0)")).to_string(), "REGULAR");
}

#[test]
fn invalid_family_files_are_rejected() {
    let cases = [
        r#"{"name": "x", "kind": "tree", "alphabet": 2, "generators": [{"name": "a", "perm": [0, 0], "sections": ["1", "1"]}]}"#,
        r#"{"name": "x", "kind": "tree", "alphabet": 2, "generators": [{"name": "a", "perm": [1, 0]}]}"#,
        r#"{"name": "x", "kind": "prefix", "alphabet": 2, "generators": [{"name": "s", "rules": [["0", "0"]]}]}"#,
        r#"{"name": "x", "kind": "full", "alphabet": 2, "generators": [{"name": "t", "rows": [["0", 1], ["1", 0]]}]}"#,
        r#"{"name": "x", "kind": "tree", "alphabet": 1, "generators": []}"#,
        r#"{"name": "x", "kind": "tree", "alphabet": 2, "generators": [{"name": "a", "perm": [1, 0], "sections": ["1", "a"]}],
            "relations": {"involutions": ["a"]}}"#,
        r#"{"name": "x", "kind": "lattice", "alphabet": 2, "generators": []}"#,
        r#"{"name": "x", "kind": "tree", "alphabet": 2, "generators": [], "extra": 1}"#,
        r#"{"schema": "cantorstab/orbit/v1", "name": "x", "kind": "tree", "alphabet": 2, "generators": []}"#,
    ];
    for c in cases {
        let r = FamilyDoc::parse(c).and_then(|d| d.build());
        assert!(matches!(r, Err(CliError::Schema(_))), "{c}");
    }
    assert!(matches!(load_family("no-such-preset"), Err(CliError::Parse(_))));
    assert!(load_family("prefix-v").is_ok());
}

#[test]
fn atomic_writes_replace_the_target() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.json");
    write_atomic(&path, "first").unwrap();
    write_atomic(&path, "second").unwrap();
    assert_eq!(std::fs::read_to_string(&path).unwrap(), "second");
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    assert!(write_atomic(&dir.path().join("missing/out.json"), "x").is_err());
}

#[test]
fn budget_scale_must_be_positive() {
    assert_eq!(parse_scale("2.5").unwrap(), 2.5);
    for bad in ["0", "-1", "NaN", "inf", "lots"] {
        assert!(parse_scale(bad).is_err(), "{bad}");
    }
    let b = Budgets::default().scaled(0.5);
    assert_eq!(b.id_budget, 256);
    assert_eq!(b.margin, Budgets::default().margin);
}

fn element_of(family: GroupFamily) -> impl Strategy<Value = (GroupFamily, GroupElement)> {
    let moves = family.moves();
    prop::collection::vec(0..moves.len(), 0..=8).prop_map(move |idx| {
        let w: Vec<_> = idx.iter().map(|&i| moves[i]).collect();
        (family.clone(), family.eval_moves(&w).unwrap())
    })
}

proptest! {
    #[test]
    fn element_documents_round_trip(
        (family, g) in prop_oneof![
            element_of(GroupFamily::grigorchuk()),
            element_of(GroupFamily::odometer_full()),
            element_of(GroupFamily::prefix_v()),
        ]
    ) {
        let doc = ElementDoc::from_element(&g);
        let text = serde_json::to_string(&doc).unwrap();
        let back: ElementDoc = serde_json::from_str(&text).unwrap();
        let h = back.to_element(&family).unwrap();
        prop_assert_eq!(h.same_map(&g, 512).unwrap(), Ternary::Yes);
        prop_assert_eq!(serde_json::to_string(&ElementDoc::from_element(&h)).unwrap(), text);
    }
}
