use std::process::{Command, Output};

use gaclass::algebra::{ClassLabel, MultiplicationTable};
use gaclass::classify::GroupKind;
use gaclass::field::field_make;
use gaclass::types::GAType;
use serde_json::Value;

fn gac(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gac"))
        .args(args)
        .env_remove("GAC_BUDGET_ELEMENTS")
        .output()
        .expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("valid JSON on stdout")
}

fn without_elapsed(mut v: Value) -> Value {
    match &mut v {
        Value::Array(items) => {
            for x in items.iter_mut() {
                *x = without_elapsed(x.take());
            }
        }
        Value::Object(m) => {
            m.remove("elapsed_ms");
        }
        _ => {}
    }
    v
}

#[test]
fn classify_identity_and_translation() {
    let id = json_of(&gac(&[
        "classify",
        "--group",
        "GA",
        "--q",
        "2",
        "--matrix",
        "1,0,0;0,1,0;0,0,1",
        "--format",
        "json",
    ]));
    let f2 = field_make(2, 1).unwrap();
    let modified = GAType::from_json(&f2, &id["modified"]).unwrap();
    assert!(modified.base.is_empty());
    assert_eq!(modified.k, 0);
    assert_eq!(
        (&id["reflection_length"], &id["length"], &id["ll_a"]),
        (&Value::from(0), &Value::from(0), &Value::from(0))
    );

    let tr = json_of(&gac(&[
        "classify",
        "--group",
        "GA",
        "--q",
        "2",
        "--matrix",
        "[[1,0,0],[1,1,0],[0,0,1]]",
        "--format",
        "json",
    ]));
    let modified = GAType::from_json(&f2, &tr["modified"]).unwrap();
    assert!(modified.base.is_empty());
    assert_eq!(modified.k, 1);
    assert_eq!(tr["length"], 1);
    assert_eq!(tr["ll_a"], 2);
    assert_eq!(tr["hyperbolic"], true);
}

#[test]
fn classify_text_lists_all_lengths() {
    let out = gac(&[
        "classify",
        "--group",
        "GA",
        "--q",
        "3",
        "--matrix",
        "1 0 0; 1 1 0; 0 0 1",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for key in ["type", "modified", "ℓ ", "ℓᵃ", "ℓℓᵃ"] {
        assert!(text.contains(key), "{text}");
    }
}

#[test]
fn membership_and_parse_failures() {
    let not_affine = gac(&[
        "classify", "--group", "GA", "--q", "2", "--matrix", "1,1;0,1",
    ]);
    assert_eq!(not_affine.status.code(), Some(3));
    let singular = gac(&[
        "classify", "--group", "GL", "--q", "3", "--matrix", "1,1;1,1",
    ]);
    assert_eq!(singular.status.code(), Some(3));
    for args in [
        &["classify", "--group", "GA", "--q", "2", "--matrix", "1,0;0"][..],
        &[
            "classify", "--group", "GA", "--q", "2", "--matrix", "1,x;0,1",
        ],
        &["classify", "--group", "GA", "--q", "6", "--matrix", "1"],
        &["classify", "--group", "GA", "--q", "2", "--matrix", "2"],
        &["classes", "--group", "GA", "--q", "2"],
        &[
            "structconst",
            "--group",
            "GA",
            "--n",
            "3",
            "--q",
            "3",
            "1:t^^2",
            "-",
            "-",
        ],
    ] {
        assert_eq!(gac(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn class_listings() {
    let rows = json_of(&gac(&[
        "classes", "--group", "GA", "--n", "3", "--q", "2", "--format", "json",
    ]));
    let rows = rows.as_array().unwrap();
    assert_eq!(rows.len(), 5);
    let total: u64 = rows.iter().map(|r| r["size"].as_u64().unwrap()).sum();
    assert_eq!(total, 24);

    let f2 = field_make(2, 1).unwrap();
    for r in rows {
        let label = ClassLabel::from_json(GroupKind::GA, &f2, &r["modified"]).unwrap();
        assert_eq!(label.degree() as u64, r["degree"].as_u64().unwrap());
    }

    let gl = json_of(&gac(&[
        "classes", "--group", "GL", "--n", "2", "--p", "2", "--format", "json",
    ]));
    let sizes: Vec<u64> = gl
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["size"].as_u64().unwrap())
        .collect();
    assert_eq!(sizes, vec![1, 3, 2]);

    let trivial = json_of(&gac(&[
        "classes", "--group", "GA", "--n", "1", "--q", "5", "--format", "json",
    ]));
    assert_eq!(trivial.as_array().unwrap().len(), 1);

    let csv = gac(&[
        "classes", "--group", "GA", "--n", "3", "--q", "2", "--format", "csv",
    ]);
    assert_eq!(String::from_utf8(csv.stdout).unwrap().lines().count(), 6);
}

#[test]
fn structure_constants() {
    let r = json_of(&gac(&[
        "structconst",
        "--group",
        "GA",
        "--n",
        "3",
        "--q",
        "3",
        "--format",
        "json",
        "1:t-2",
        "1:t-2",
        "1:t-2,1:t-2",
    ]));
    assert_eq!(r["value"], 12);
    let r = json_of(&gac(&[
        "structconst",
        "--group",
        "GA",
        "--n",
        "3",
        "--q",
        "3",
        "--format",
        "json",
        r#"{"base":{},"k":1}"#,
        ";1",
        "-",
    ]));
    assert_eq!(r["value"], 3 * 3 - 1);
}

#[test]
fn undefined_classes_exit_5_with_the_bound() {
    let out = gac(&[
        "structconst",
        "--group",
        "GA",
        "--n",
        "3",
        "--q",
        "2",
        "2:t-1",
        "-",
        "2:t-1",
    ]);
    assert_eq!(out.status.code(), Some(5));
    assert!(String::from_utf8_lossy(&out.stderr).contains("n >= 4"));
}

#[test]
fn table_round_trips_and_passes_row_mass() {
    let v = json_of(&gac(&[
        "table", "--group", "GA", "--n", "3", "--q", "2", "--format", "json",
    ]));
    let t = MultiplicationTable::from_json(&field_make(2, 1).unwrap(), &v).unwrap();
    assert_eq!(t.len(), 5);
    assert!(t.row_mass_failures().is_empty());
    assert!(t.commutativity_failures().is_empty());
    let text = gac(&["table", "--group", "GA", "--n", "3", "--q", "2"]);
    let lines = String::from_utf8(text.stdout).unwrap();
    assert_eq!(lines.lines().filter(|l| l.contains(" * ")).count(), 25);
}

#[test]
fn budget_exhaustion_exits_4() {
    let out = Command::new(env!("CARGO_BIN_EXE_gac"))
        .args(["classes", "--group", "GA", "--n", "4", "--q", "3"])
        .env("GAC_BUDGET_ELEMENTS", "100")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(4));
    let flag = gac(&[
        "classes",
        "--group",
        "GA",
        "--n",
        "4",
        "--q",
        "3",
        "--budget-elements",
        "100",
    ]);
    assert_eq!(flag.status.code(), Some(4));
}

#[test]
fn verify_passes_for_q2() {
    let out = gac(&["verify", "--q", "2", "--n-max", "4", "--format", "json"]);
    let reports = json_of(&out);
    let reports = reports.as_array().unwrap();
    assert!(reports.iter().all(|r| r["status"] != "fail"));
    assert!(reports.iter().filter(|r| r["status"] == "pass").count() > 30);
    assert!(String::from_utf8_lossy(&out.stderr).contains("0 failed"));
}

#[test]
fn verify_exit_code_reflects_failures() {
    let out = gac(&["verify", "--q", "2", "--n-max", "3", "--stretch"]);
    assert_eq!(out.status.code(), Some(1));
    let out = gac(&["verify", "--q", "3", "--n-max", "3", "--stretch"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn output_is_independent_of_parallelism() {
    let args = ["verify", "--q", "3", "--n-max", "3", "--format", "json"];
    let mut outputs = Vec::new();
    for threads in ["1", "4"] {
        let mut a = args.to_vec();
        a.extend(["--parallelism", threads]);
        outputs.push(without_elapsed(json_of(&gac(&a))));
    }
    assert_eq!(outputs[0], outputs[1]);
    let classes = |threads| {
        gac(&[
            "classes",
            "--group",
            "GL",
            "--n",
            "3",
            "--q",
            "3",
            "--parallelism",
            threads,
        ])
        .stdout
    };
    assert_eq!(classes("1"), classes("3"));
}

#[test]
fn irreducible_listing() {
    let v = json_of(&gac(&[
        "irreducibles",
        "--q",
        "2",
        "--degree",
        "4",
        "--format",
        "json",
    ]));
    let degrees: Vec<u64> = v
        .as_array()
        .unwrap()
        .iter()
        .map(|p| p["degree"].as_u64().unwrap())
        .collect();
    assert_eq!(degrees, vec![1, 2, 3, 3, 4, 4, 4]);
    let v = json_of(&gac(&[
        "irreducibles",
        "--p",
        "3",
        "--k",
        "1",
        "--degree",
        "1",
        "--format",
        "json",
    ]));
    assert_eq!(v.as_array().unwrap().len(), 2);
}
