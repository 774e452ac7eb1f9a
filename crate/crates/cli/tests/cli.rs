//! Process-level tests: exit codes, document round trips, and command
//! output shapes.

use std::path::Path;
use std::process::Command;

use stratachi::documents::{
    emit, parse_map_document, parse_space_document, LinkEntry, MapDocument, SpaceDocument,
    SpaceRef, StratumEntry,
};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_stratachi"))
}

fn write(dir: &Path, name: &str, content: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, content).unwrap();
    path.to_string_lossy().into_owned()
}

fn nodal_space() -> String {
    r#"{
  "name": "nodal-cubic",
  "strata": [
    {"id": "node", "complex_dim": 0, "chi_c": 1},
    {"id": "smooth", "complex_dim": 1, "chi_c": 0}
  ],
  "order_pairs": [["node", "smooth"]],
  "dense": "smooth",
  "links": [{"lower": "node", "upper": "smooth", "link_ih_betti": [2, 2]}]
}"#
    .to_string()
}

fn blowup_map() -> String {
    r#"{
  "source": {
    "name": "blowup-of-p2",
    "strata": [{"id": "x", "complex_dim": 2, "chi_c": 4}],
    "dense": "x",
    "links": []
  },
  "target": {
    "name": "p2",
    "strata": [
      {"id": "p", "complex_dim": 0, "chi_c": 1},
      {"id": "plane", "complex_dim": 2, "chi_c": 2}
    ],
    "order_pairs": [["p", "plane"]],
    "dense": "plane",
    "links": [{"lower": "p", "upper": "plane", "link_ih_betti": [1, 0, 0, 1]}]
  },
  "kernel": [
    {"target": "plane", "source": "x", "chi": 1},
    {"target": "p", "source": "x", "chi": 2}
  ],
  "skip_validation": false
}"#
    .to_string()
}

#[test]
fn exit_codes_follow_the_contract() {
    let dir = tempfile::tempdir().unwrap();
    let space = write(dir.path(), "nodal.json", &nodal_space());
    let map = write(dir.path(), "blowup.json", &blowup_map());

    // 0: a passing check.
    let ok = bin().args(["verify", &space, "--formula", "c1"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    let ok = bin().args(["verify", &map, "--formula", "eq6"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));

    // 1: a corrupted kernel with validation waived breaks the theorem.
    let corrupted = blowup_map()
        .replace(r#"{"target": "p", "source": "x", "chi": 2}"#, r#"{"target": "p", "source": "x", "chi": 3}"#)
        .replace(r#""skip_validation": false"#, r#""skip_validation": true"#);
    let bad_map = write(dir.path(), "corrupted.json", &corrupted);
    let fail = bin().args(["verify", &bad_map, "--formula", "eq6"]).output().unwrap();
    assert_eq!(fail.status.code(), Some(1));

    // 2: the same corruption without the waiver is an input error.
    let unwaived = corrupted.replace(r#""skip_validation": true"#, r#""skip_validation": false"#);
    let bad_unwaived = write(dir.path(), "unwaived.json", &unwaived);
    let err = bin().args(["validate", &bad_unwaived]).output().unwrap();
    assert_eq!(err.status.code(), Some(2));
    let err = bin().args(["verify", &bad_unwaived, "--formula", "eq6"]).output().unwrap();
    assert_eq!(err.status.code(), Some(2));

    // 2: cyclic order.
    let cyclic = write(
        dir.path(),
        "cyclic.json",
        r#"{
  "name": "bad",
  "strata": [
    {"id": "a", "complex_dim": 0, "chi_c": 1},
    {"id": "b", "complex_dim": 1, "chi_c": 1}
  ],
  "order_pairs": [["a", "b"], ["b", "a"]]
}"#,
    );
    let err = bin().args(["validate", &cyclic]).output().unwrap();
    assert_eq!(err.status.code(), Some(2));

    // 2: unknown formula, wrong document kind, fixed-function misuse.
    let err = bin().args(["verify", &space, "--formula", "eq99"]).output().unwrap();
    assert_eq!(err.status.code(), Some(2));
    let err = bin().args(["verify", &space, "--formula", "eq6"]).output().unwrap();
    assert_eq!(err.status.code(), Some(2));
    let err = bin().args(["verify", &map, "--formula", "c1"]).output().unwrap();
    assert_eq!(err.status.code(), Some(2));
    let f = write(dir.path(), "f.json", r#"{"x": 2}"#);
    let err = bin()
        .args(["verify", &map, "--formula", "eq6", "--function", &f])
        .output()
        .unwrap();
    assert_eq!(err.status.code(), Some(2));

    // 2: missing file.
    let err = bin().args(["validate", "no-such-file.json"]).output().unwrap();
    assert_eq!(err.status.code(), Some(2));
}

#[test]
fn validate_passes_on_the_catalog_documents() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["smooth-singleton", "two-chain", "nodal-cubic"] {
        let doc = stratachi::catalog::space_document(name).unwrap();
        let path = write(dir.path(), &format!("{name}.json"), &emit(&doc));
        let out = bin().args(["validate", &path]).output().unwrap();
        assert_eq!(out.status.code(), Some(0), "{name} should validate");
    }
    for name in ["blowup-p2", "nodal-cubic-normalization"] {
        let doc = stratachi::catalog::map_document(name).unwrap();
        let path = write(dir.path(), &format!("{name}.json"), &emit(&doc));
        let out = bin().args(["validate", &path]).output().unwrap();
        assert_eq!(out.status.code(), Some(0), "{name} should validate");
    }
}

#[test]
fn emitted_documents_parse_back_bit_exactly() {
    // Value-level identity and byte-level stability for both kinds.
    let space = SpaceDocument {
        name: "x".into(),
        strata: vec![StratumEntry {
            id: "a".into(),
            complex_dim: 0,
            chi_c: -2,
        }],
        order_pairs: vec![],
        dense: None,
        links: Some(vec![LinkEntry {
            lower: "a".into(),
            upper: "b".into(),
            ichi_cone: Some(3),
            link_ih_betti: Some(vec![1, 2]),
        }]),
    };
    let text = emit(&space);
    let parsed = parse_space_document(&text).unwrap();
    assert_eq!(parsed, space);
    assert_eq!(emit(&parsed), text);

    let map = MapDocument {
        source: SpaceRef::Path("a.json".into()),
        target: SpaceRef::Inline(space),
        kernel: vec![],
        skip_validation: true,
    };
    let text = emit(&map);
    let parsed = parse_map_document(&text).unwrap();
    assert_eq!(parsed, map);
    assert_eq!(emit(&parsed), text);
}

#[test]
fn bases_prints_the_two_chain_transition_matrices() {
    let dir = tempfile::tempdir().unwrap();
    let two_chain = write(
        dir.path(),
        "two-chain.json",
        &emit(&stratachi::catalog::space_document("two-chain").unwrap()),
    );
    let out = bin().args(["bases", &two_chain, "--json"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["ic_to_open"], serde_json::json!([[1, 2], [0, 1]]));
    assert_eq!(v["ic_to_open_inverse"], serde_json::json!([[1, -2], [0, 1]]));
    assert_eq!(v["closed_to_open"], serde_json::json!([[1, 1], [0, 1]]));

    // A singleton degenerates to 1×1 identities.
    let singleton = write(
        dir.path(),
        "singleton.json",
        &emit(&stratachi::catalog::space_document("smooth-singleton").unwrap()),
    );
    let out = bin().args(["bases", &singleton, "--json"]).output().unwrap();
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["closed_to_open"], serde_json::json!([[1]]));
    assert_eq!(v["ic_to_open"], serde_json::json!([[1]]));
}

#[test]
fn catalog_list_and_run_via_binary() {
    let out = bin().args(["catalog", "list", "--json"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 6);

    for name in [
        "smooth-singleton",
        "two-chain",
        "nodal-cubic",
        "blowup-p2",
        "nodal-cubic-normalization",
        "identity-maps",
    ] {
        let out = bin().args(["catalog", "run", name]).output().unwrap();
        assert_eq!(out.status.code(), Some(0), "{name} should pass");
    }

    let out = bin().args(["catalog", "run", "no-such-example"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_reports_are_json_with_term_arrays() {
    let dir = tempfile::tempdir().unwrap();
    let map = write(dir.path(), "blowup.json", &blowup_map());
    let out = bin()
        .args(["verify", &map, "--formula", "eq15", "--json"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["formula"], "eq15");
    assert_eq!(v["pass"], true);
    assert_eq!(v["lhs"], serde_json::json!({"int": 4}));
    let terms = v["terms"].as_array().unwrap();
    assert_eq!(terms.len(), 2);
    assert_eq!(terms[0]["stratum"], "plane");
    assert_eq!(terms[1]["coefficient"], 1);
}

#[test]
fn pushforward_via_binary_matches_the_fiber_data() {
    let dir = tempfile::tempdir().unwrap();
    let map = write(dir.path(), "blowup.json", &blowup_map());
    let out = bin().args(["pushforward", &map, "--json"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["pushforward"], serde_json::json!({"p": 2, "plane": 1}));
}

#[test]
fn decompose_via_binary() {
    let dir = tempfile::tempdir().unwrap();
    let space = write(dir.path(), "nodal.json", &nodal_space());
    let f = write(dir.path(), "alpha.json", r#"{"node": 5, "smooth": 3}"#);
    let out = bin()
        .args(["decompose", &space, "--function", &f, "--basis", "ic-dense", "--json"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    // α(S) = 3 on ic_Y, α(node) − α(S)·2 = −1 on the hat element.
    assert_eq!(v["coefficients"], serde_json::json!({"node": -1, "smooth": 3}));

    let err = bin()
        .args(["decompose", &space, "--basis", "nonsense"])
        .output()
        .unwrap();
    assert_eq!(err.status.code(), Some(2));
}

#[test]
fn map_documents_can_reference_spaces_by_path() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "nodal.json", &nodal_space());
    let map = write(
        dir.path(),
        "norm.json",
        r#"{
  "source": {
    "name": "line",
    "strata": [{"id": "line", "complex_dim": 1, "chi_c": 2}],
    "dense": "line",
    "links": []
  },
  "target": "nodal.json",
  "kernel": [
    {"target": "smooth", "source": "line", "chi": 1},
    {"target": "node", "source": "line", "chi": 2}
  ],
  "skip_validation": false
}"#,
    );
    let out = bin().args(["verify", &map, "--formula", "eq12"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
}
