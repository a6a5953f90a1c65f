use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;

fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_chaintwist"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn json(args: &[&str], expected_code: i32) -> Value {
    let (code, stdout, stderr) = run(args);
    assert_eq!(code, expected_code, "{args:?}: {stderr}");
    serde_json::from_str(&stdout).unwrap()
}

fn schema_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../schema")
        .join(name)
}

fn assert_valid(schema: &str, doc: &Value) {
    let text = std::fs::read_to_string(schema_path(schema)).unwrap();
    let schema_doc: Value = serde_json::from_str(&text).unwrap();
    let validator = jsonschema::validator_for(&schema_doc).unwrap();
    let errors: Vec<String> = validator.iter_errors(doc).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{schema}: {errors:?}\n{doc}");
}

#[test]
fn compile_example() {
    let d = json(
        &["compile", "--g", "3", "--m", "1", "--n", "1", "--r", "1"],
        0,
    );
    assert_eq!(d["r_prime"], "-4");
    assert_eq!(d["verdict"], "SteinFillable");
    assert_valid("contact_diagram.schema.json", &d);
}

#[test]
fn compile_variants_validate() {
    for (g, r) in [
        ("2", "7/2"),
        ("4", "-13/5"),
        ("1", "2/3"),
        ("2", "3"),
        ("3", "-1/2"),
    ] {
        let d = json(&["compile", "--g", g, "--m", "2", "--n", "3", "--r", r], 0);
        assert_valid("contact_diagram.schema.json", &d);
    }
}

#[test]
fn certify_example() {
    let d = json(&["certify", "--g", "2", "--n", "1"], 0);
    assert_eq!(d["fills_after"], 3);
    assert_eq!(d["window_known"], false);
    assert_eq!(d["window_length_max"], 7);
    assert_eq!(d["orbit"], serde_json::json!(["a2", "a3", "a4"]));
    assert_valid("certificate.schema.json", &d);
}

#[test]
fn certify_inconclusive_exit_code() {
    let d = json(&["certify", "--g", "2", "--word", "1"], 3);
    assert_eq!(d["status"], "inconclusive");
    assert_valid("certificate.schema.json", &d);
    let d = json(
        &["certify", "--g", "3", "--word", "a2 a1^2", "--gamma", "a2"],
        3,
    );
    assert_valid("certificate.schema.json", &d);
}

#[test]
fn verdict_example() {
    let d = json(
        &["verdict", "--g", "2", "--m", "1", "--n", "1", "--r", "3"],
        0,
    );
    assert_eq!(d["verdict"]["kind"], "ExcludedSlope");
    assert_valid("verdict.schema.json", &d);
    let d = json(
        &["verdict", "--g", "1", "--m", "1", "--n", "1", "--r", "-2"],
        0,
    );
    assert!(d["hyperbolicity"].is_null());
    assert_valid("verdict.schema.json", &d);
}

#[test]
fn orbit_and_homology_validate() {
    let d = json(&["orbit", "--g", "3", "--n", "-2"], 0);
    assert_eq!(
        d["iterates"],
        serde_json::json!(["a2", "a3", "a4", "a5", "a6"])
    );
    assert_valid("orbit.schema.json", &d);
    let d = json(
        &["orbit", "--g", "2", "--word", "a2 a1^2", "--gamma", "a2"],
        3,
    );
    assert_valid("orbit.schema.json", &d);
    for framing in ["binding_page", "section_fiber"] {
        let d = json(
            &[
                "homology",
                "--g",
                "2",
                "--m",
                "1",
                "--n",
                "2",
                "--r",
                "7/2",
                "--framing",
                framing,
            ],
            0,
        );
        assert_eq!(d["surgery"]["chain_route_agrees"], true);
        assert_valid("homology.schema.json", &d);
    }
    let d = json(&["homology", "--g", "2", "--m", "0", "--n", "0"], 0);
    // t_a2 t_a3 t_a4 fixes a rank-one sublattice of H_1(Σ_2).
    assert_eq!(
        d["mapping_torus"],
        serde_json::json!({"free_rank": 2, "torsion": []})
    );
    assert_valid("homology.schema.json", &d);
}

#[test]
fn sweep_rows_and_order() {
    let d = json(
        &[
            "sweep",
            "--g",
            "2",
            "--m",
            "-1..2",
            "--n",
            "1..2",
            "--r-list",
            "7/2,-1,3,1/2",
        ],
        0,
    );
    let rows = d.as_array().unwrap();
    assert_eq!(rows.len(), 4 * 2 * 4);
    let keys: Vec<(i64, i64, String)> = rows
        .iter()
        .map(|r| {
            (
                r["m"].as_i64().unwrap(),
                r["n"].as_i64().unwrap(),
                r["r"].as_str().unwrap().to_string(),
            )
        })
        .collect();
    assert_eq!(keys[0], (-1, 1, "-1".to_string()));
    assert_eq!(keys[3], (-1, 1, "7/2".to_string()));
    assert_eq!(keys[4], (-1, 2, "-1".to_string()));
    assert_valid("sweep.schema.json", &d);
}

#[test]
fn output_is_deterministic() {
    let args = [
        "sweep",
        "--g",
        "3",
        "--m",
        "0..3",
        "--n",
        "-1..2",
        "--r-list",
        "5,1,-7/3,11/2",
    ];
    let (_, first, _) = run(&args);
    for _ in 0..3 {
        assert_eq!(run(&args).1, first);
    }
    let (_, a, _) = run(&[
        "--pretty", "compile", "--g", "2", "--m", "3", "--n", "2", "--r", "-5/3",
    ]);
    let (_, b, _) = run(&[
        "compile", "--g", "2", "--m", "3", "--n", "2", "--r", "-5/3", "--pretty",
    ]);
    assert_eq!(a, b);
}

#[test]
fn output_file() {
    let dir = std::env::temp_dir().join(format!("chaintwist-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("cert.json");
    let (code, stdout, _) = run(&[
        "certify",
        "--g",
        "3",
        "--n",
        "0",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert!(stdout.is_empty());
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(doc["fills_after"], 5);
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn invalid_input_exit_code() {
    for args in [
        &["compile", "--g", "2", "--m", "1", "--n", "1", "--r", "3/x"][..],
        &["compile", "--g", "2", "--m", "1", "--n", "1", "--r", "1/0"],
        &["compile", "--g", "0", "--m", "1", "--n", "1", "--r", "1"],
        &["certify", "--g", "1"],
        &["certify", "--g", "2", "--word", "a9"],
        &["verdict", "--g", "1", "--m", "1", "--n", "1"],
        &[
            "sweep", "--g", "2", "--m", "3..1", "--n", "1", "--r-list", "1",
        ],
        &[
            "homology",
            "--g",
            "2",
            "--m",
            "1",
            "--n",
            "1",
            "--framing",
            "sideways",
        ],
    ] {
        let (code, stdout, stderr) = run(args);
        assert_eq!(code, 2, "{args:?}");
        assert!(stdout.is_empty());
        assert!(!stderr.is_empty());
    }
}
