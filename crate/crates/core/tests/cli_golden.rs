use std::path::PathBuf;

use jsonschema::JSONSchema;
use serde_json::Value;

use quatorder::cli::run;
use quatorder::quadratic::SquareFreeD;
use quatorder::quaternion::Quaternion;
use quatorder::{format_unit, parse_unit};

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

fn invoke(args: &[&str]) -> (i32, String, String) {
    let argv = std::iter::once("quatorder").chain(args.iter().copied());
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn schema(name: &str) -> JSONSchema {
    let path = root()
        .join("../../docs/schemas")
        .join(format!("{name}.schema.json"));
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    let doc: Value = serde_json::from_str(&text).unwrap();
    JSONSchema::compile(&doc).unwrap_or_else(|e| panic!("{name}: {e}"))
}

fn validate(name: &str, text: &str) {
    let compiled = schema(name);
    for line in text.lines() {
        let value: Value = serde_json::from_str(line).unwrap_or_else(|e| panic!("{line}: {e}"));
        let msgs: Vec<String> = match compiled.validate(&value) {
            Ok(()) => continue,
            Err(errors) => errors
                .map(|e| format!("{} at {}", e, e.instance_path))
                .collect(),
        };
        panic!("{name} rejects {line}:\n{}", msgs.join("\n"));
    }
}

struct Case {
    file: &'static str,
    schema: Option<&'static str>,
    args: &'static [&'static str],
    code: i32,
}

const CASES: &[Case] = &[
    Case {
        file: "classify_d7_k8.json",
        schema: Some("verdict"),
        args: &["--json", "classify", "--d", "7", "--group", "K8"],
        code: 0,
    },
    Case {
        file: "classify_d3_a6.json",
        schema: Some("verdict"),
        args: &["--json", "classify", "--d", "3", "--group", "A[6]"],
        code: 0,
    },
    Case {
        file: "classify_dm2_a22.json",
        schema: Some("verdict"),
        args: &["--json", "classify", "--d", "-2", "--group", "A[2,2]"],
        code: 0,
    },
    Case {
        file: "table_1_10.jsonl",
        schema: Some("verdict"),
        args: &[
            "--json", "table", "--from", "1", "--to", "10", "--group", "C2", "--group", "K8",
        ],
        code: 0,
    },
    Case {
        file: "table_1_10.txt",
        schema: None,
        args: &[
            "table", "--from", "1", "--to", "10", "--group", "C2", "--group", "K8",
        ],
        code: 0,
    },
    Case {
        file: "fundamental_unit_d7.json",
        schema: Some("fundamental_unit"),
        args: &["--json", "fundamental-unit", "--d", "7"],
        code: 0,
    },
    Case {
        file: "fundamental_unit_d13.json",
        schema: Some("fundamental_unit"),
        args: &["--json", "fundamental-unit", "--d", "13"],
        code: 0,
    },
    Case {
        file: "pell_unit_d7.json",
        schema: Some("unit_record"),
        args: &["--json", "pell-unit", "--d", "7"],
        code: 0,
    },
    Case {
        file: "two_unit_d7.json",
        schema: Some("unit_record"),
        args: &["--json", "two-unit", "--d", "7"],
        code: 0,
    },
    Case {
        file: "two_unit_d7_samples.json",
        schema: Some("homomorphism"),
        args: &[
            "--json",
            "two-unit",
            "--d",
            "7",
            "--pair",
            "i,1",
            "--samples",
            "20",
            "--seed",
            "5",
        ],
        code: 0,
    },
    Case {
        file: "two_unit_d2_minus.json",
        schema: Some("unit_record"),
        args: &[
            "--json", "two-unit", "--d", "2", "--pair", "j,k", "--norm", "-1",
        ],
        code: 0,
    },
    Case {
        file: "three_unit_d7.json",
        schema: Some("unit_record"),
        args: &["--json", "three-unit", "--d", "7"],
        code: 0,
    },
    Case {
        file: "gauss_unit_d7_m6.json",
        schema: Some("unit_record"),
        args: &[
            "--json",
            "gauss-unit",
            "--d",
            "7",
            "--m",
            "6",
            "--norm",
            "-1",
        ],
        code: 0,
    },
    Case {
        file: "s_units_d7.json",
        schema: Some("unit_records"),
        args: &["--json", "s-units", "--d", "7"],
        code: 0,
    },
    Case {
        file: "verify_d7_v.json",
        schema: Some("verify"),
        args: &["--json", "verify", "--d", "7", "--unit", "6s+15i+5j+1k"],
        code: 0,
    },
    Case {
        file: "verify_d7_v.txt",
        schema: None,
        args: &["verify", "--d", "7", "--unit", "6s+15i+5j+1k"],
        code: 0,
    },
    Case {
        file: "torsion_d7_i.json",
        schema: Some("torsion"),
        args: &["--json", "torsion", "--d", "7", "--unit", "i"],
        code: 0,
    },
    Case {
        file: "torsion_d2_unknown.json",
        schema: Some("torsion"),
        args: &["--json", "torsion", "--d", "2", "--unit", "3+2si"],
        code: 0,
    },
    Case {
        file: "zero_divisor_d1.json",
        schema: Some("zero_divisor"),
        args: &["--json", "zero-divisor", "--d", "1"],
        code: 0,
    },
    Case {
        file: "zero_divisor_d7.json",
        schema: Some("zero_divisor"),
        args: &["--json", "zero-divisor", "--d", "7"],
        code: 0,
    },
    Case {
        file: "free_pair_d7.json",
        schema: Some("certificate"),
        args: &[
            "--json",
            "free-pair",
            "--d",
            "7",
            "--u",
            "3s+8i",
            "--v",
            "3s+8j",
            "--max-m",
            "64",
        ],
        code: 0,
    },
    Case {
        file: "free_pair_d7.txt",
        schema: None,
        args: &[
            "free-pair",
            "--d",
            "7",
            "--u",
            "3s+8i",
            "--v",
            "3s+8j",
            "--max-m",
            "64",
        ],
        code: 0,
    },
    Case {
        file: "free_family_d7.json",
        schema: Some("certificate"),
        args: &[
            "--json",
            "free-family",
            "--d",
            "7",
            "--unit",
            "3s+8i",
            "--unit",
            "3s+8j",
            "--unit",
            "3s+8k",
        ],
        code: 0,
    },
    Case {
        file: "relation_check_d7_i.json",
        schema: Some("relation"),
        args: &[
            "--json",
            "relation-check",
            "--d",
            "7",
            "--unit",
            "i",
            "--max-len",
            "4",
        ],
        code: 0,
    },
    Case {
        file: "relation_check_d7_pair.json",
        schema: Some("relation"),
        args: &[
            "--json",
            "relation-check",
            "--d",
            "7",
            "--unit",
            "3s+8i",
            "--unit",
            "3s+8j",
        ],
        code: 0,
    },
];

#[test]
fn golden_outputs_match_byte_for_byte() {
    let dir = root().join("tests/golden");
    let mut mismatches = Vec::new();
    for case in CASES {
        let want = std::fs::read_to_string(dir.join(case.file))
            .unwrap_or_else(|e| panic!("{}: {e}", case.file));
        let (code, out, err) = invoke(case.args);
        assert_eq!(code, case.code, "{}: stderr {err}", case.file);
        if out != want {
            mismatches.push(format!("{}:\n--- want\n{want}--- got\n{out}", case.file));
        }
        if let Some(name) = case.schema {
            validate(name, &out);
        }
    }
    assert!(mismatches.is_empty(), "{}", mismatches.join("\n"));
}

#[test]
fn every_golden_file_has_a_case() {
    let mut files: Vec<String> = std::fs::read_dir(root().join("tests/golden"))
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    files.sort();
    let mut covered: Vec<String> = CASES.iter().map(|c| c.file.to_string()).collect();
    covered.sort();
    assert_eq!(files, covered);
}

#[test]
fn text_units_reparse() {
    let d = SquareFreeD::new(7).unwrap();
    let runs: &[&[&str]] = &[
        &["pell-unit", "--d", "7"],
        &["pell-unit", "--d", "7", "--sign", "lower"],
        &["two-unit", "--d", "7"],
        &["three-unit", "--d", "7"],
        &["gauss-unit", "--d", "7", "--m", "6", "--norm", "-1"],
        &["gauss-unit", "--d", "7", "--m", "2", "--norm", "1"],
        &["s-units", "--d", "7"],
    ];
    for args in runs {
        let (code, out, _) = invoke(args);
        assert_eq!(code, 0, "{args:?}");
        let mut json_args = vec!["--json"];
        json_args.extend_from_slice(args);
        let (_, json, _) = invoke(&json_args);
        let json: Value = serde_json::from_str(&json).unwrap();
        let records = match json {
            Value::Array(v) => v,
            v => vec![v],
        };
        let lines: Vec<&str> = out.lines().collect();
        assert_eq!(lines.len(), records.len(), "{args:?}");
        for (line, record) in lines.iter().zip(&records) {
            let literal = line.split(' ').next().unwrap();
            let u = parse_unit(d, literal).unwrap_or_else(|e| panic!("{literal}: {e}"));
            assert_eq!(format_unit(&u), literal);
            assert_eq!(
                u,
                from_coefficients(d, &record["coefficients"]),
                "{literal}"
            );
        }
    }
}

fn from_coefficients(d: SquareFreeD, v: &Value) -> Quaternion {
    let part = |c: &Value| {
        let n = |k: &str| c[k].as_i64().unwrap();
        (n("a"), n("b"), n("den"))
    };
    let parts: Vec<_> = v.as_array().unwrap().iter().map(part).collect();
    Quaternion::from_parts(d, parts.try_into().unwrap())
}

#[test]
fn exit_codes() {
    let cases: &[(&[&str], i32)] = &[
        (&["--help"], 0),
        (&["--version"], 0),
        (&["classify", "--d", "7", "--group", "K8"], 0),
        (&["classify", "--d", "0", "--group", "K8"], 1),
        (&["classify", "--d", "-1", "--group", "C2"], 1),
        (&["classify", "--d", "4", "--group", "C2"], 1),
        (&["classify", "--d", "7", "--group", "Z9"], 2),
        (&["verify", "--d", "7", "--unit", "2"], 1),
        (&["verify", "--d", "7", "--unit", "x"], 2),
        (&["two-unit", "--d", "7", "--pair", "i,i"], 2),
        (&["three-unit", "--d", "7", "--triple", "1,i"], 2),
        (
            &[
                "free-pair",
                "--d",
                "7",
                "--u",
                "3s+8i",
                "--v",
                "3s+8i",
                "--max-m",
                "4",
            ],
            1,
        ),
        (&["free-pair", "--d", "7", "--u", "i", "--v", "3s+8j"], 1),
        (&["no-such-command"], 2),
        (&["classify", "--d", "7"], 2),
    ];
    for (args, want) in cases {
        let (code, _, err) = invoke(args);
        assert_eq!(code, *want, "{args:?}: {err}");
        if *want != 0 {
            assert!(!err.is_empty(), "{args:?} exits {want} without a message");
        }
    }
}

#[test]
fn schemas_reject_malformed_documents() {
    let bad = [
        (
            "verdict",
            r#"{"d":7,"group":"K8","hyperbolic":true,"clause":"Bogus","stufe":4}"#,
        ),
        (
            "verdict",
            r#"{"d":7,"group":"K8","hyperbolic":true,"clause":"K8_Stufe4","stufe":3}"#,
        ),
        (
            "fundamental_unit",
            r#"{"d":7,"plus":{"d":7,"x":8.5,"y":3,"norm":1},"minus":null}"#,
        ),
        (
            "fundamental_unit",
            r#"{"d":7,"plus":{"d":7,"x":-8,"y":3,"norm":1},"minus":null}"#,
        ),
        (
            "torsion",
            r#"{"d":7,"unit":"1i","kind":"FiniteOrder","order":4}"#,
        ),
        ("relation", r#"{"d":7,"m":0,"max_len":4,"relation":null}"#),
        (
            "zero_divisor",
            r#"{"d":7,"bound":5,"witness":null,"coefficients":[]}"#,
        ),
    ];
    for (name, doc) in bad {
        let value: Value = serde_json::from_str(doc).unwrap();
        assert!(!schema(name).is_valid(&value), "{name} accepts {doc}");
    }
}
