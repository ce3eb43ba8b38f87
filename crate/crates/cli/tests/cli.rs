use std::process::{Command, Output};

use serde_json::Value;

fn ffhyper(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ffhyper"))
        .args(args)
        .env_remove("FFHYPER_CACHE_DIR")
        .output()
        .expect("run ffhyper")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("bad json ({e}): {}", stdout(o)))
}

#[test]
fn admissible_verdicts() {
    let cases = [
        ("5", "x1*x2+1", "Admissible"),
        ("7", "x1+x2", "Admissible"),
        ("5", "(x1+x2)^2", "FailsSquareCondition"),
        ("7", "x1*x2", "FailsPrimitive"),
        ("7", "x1*x2*x3+1", "Admissible"),
        ("5", "x1*x2+x2*x3+x3*x1", "FailsPrimitive"),
    ];
    for (field, poly, status) in cases {
        let o = ffhyper(&["admissible", "--field", field, "--poly", poly]);
        assert_eq!(o.status.code(), Some(0), "{poly}");
        assert_eq!(json(&o)["status"], status, "{poly} over F_{field}");
    }
}

#[test]
fn parse_error_reports_position() {
    let o = ffhyper(&["admissible", "--field", "7", "--poly", "x1+*x2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(o.stdout.is_empty());
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("line 1, column"), "{err}");
}

#[test]
fn bad_field_is_a_usage_error() {
    let o = ffhyper(&["admissible", "--field", "8", "--poly", "x1+x2"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn epo_methods_agree() {
    let o = ffhyper(&["epo", "--field", "13", "--poly", "x1*x2+1", "--method", "both"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["direct"]["observed"], "7928");
    assert_eq!(v["agreement"]["pass"], true);
}

#[test]
fn epo_paley() {
    let o = ffhyper(&["epo", "--paley", "--k", "2", "--field", "17"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["poly"], "x1 + x2");
    assert_eq!(v["k"], 2);
}

#[test]
fn epo_csv_has_versioned_header() {
    let o = ffhyper(&["epo", "--field", "13", "--poly", "x1+x2", "--format", "csv"]);
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("# ffhyper epo v1"));
    assert_eq!(lines.next(), Some("q,k,d,method,observed,predicted,deviation,relative"));
    assert!(lines.next().unwrap().starts_with("13,2,1,direct,"));
}

#[test]
fn budget_exceeded_exits_3_without_output() {
    let o = ffhyper(&["epo", "--field", "13", "--poly", "x1*x2+1", "--budget-tuples", "1000"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(o.stdout.is_empty());
    let o = ffhyper(&["clique", "--field", "101", "--poly", "x1+x2", "--budget-tuples", "5"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(o.stdout.is_empty());
}

#[test]
fn tuples_requires_m_at_least_k() {
    let o = ffhyper(&["tuples", "--field", "7", "--poly", "x1+x2", "--m", "1"]);
    assert_eq!(o.status.code(), Some(2));
    let o = ffhyper(&["tuples", "--field", "101", "--poly", "x1*x2+1", "--m", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["report"]["observed"], "22075");
    assert_eq!(v["within_envelope"], true);
}

#[test]
fn tuples_for_three_uniform_case() {
    // brute force over 4-subsets of F_31, residues as integers
    let q = 31u64;
    let square: Vec<bool> = (0..q).map(|x| (0..q).any(|y| y * y % q == x)).collect();
    let edge = |a: u64, b: u64, c: u64| square[((a * b % q * c + 1) % q) as usize];
    let mut expected = 0;
    for a in 0..q {
        for b in a + 1..q {
            for c in b + 1..q {
                if !edge(a, b, c) {
                    continue;
                }
                for d in c + 1..q {
                    if edge(a, b, d) && edge(a, c, d) && edge(b, c, d) {
                        expected += 1;
                    }
                }
            }
        }
    }
    let o = ffhyper(&["tuples", "--field", "31", "--poly", "x1*x2*x3+1", "--m", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["report"]["observed"], expected.to_string());
    assert_eq!(v["within_envelope"], true);
}

#[test]
fn non_symmetric_input_is_rejected() {
    let o = ffhyper(&["tuples", "--field", "7", "--poly", "x1+2*x2", "--m", "3"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn clique_number_of_small_paley_graph() {
    let o = ffhyper(&["clique", "--field", "13", "--poly", "x1+x2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["omega"], 4);
}

#[test]
fn weil_single_and_random() {
    let o = ffhyper(&["weil", "--field", "13", "--poly", "x1^2+1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["instances"][0]["sum"], -1);
    let o = ffhyper(&["weil", "--field", "25", "--s", "40", "--d", "5"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["instances"].as_array().unwrap().len(), 40);
    let o = ffhyper(&["weil", "--field", "13", "--poly", "2*x1+1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn exceptional_sets() {
    let o = ffhyper(&["xset", "--field", "5", "--poly", "x1*x2+1"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["size"], 1);
    assert_eq!(v["within_bounds"], true);
    let o = ffhyper(&["bset", "--field", "5", "--poly", "x1*x2+1"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn slavov_counts() {
    let o = ffhyper(&["slavov", "--field", "13", "--poly", "x1", "--poly", "x2", "--poly", "x1+x2"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["condition_holds"], true);
    assert_eq!(v["report"]["observed"], "12");
}

#[test]
fn scan_is_independent_of_workers() {
    let run = |w: &str| {
        let o = ffhyper(&["scan", "--seed", "0", "--workers", w]);
        assert_eq!(o.status.code(), Some(0));
        o.stdout
    };
    let one = run("1");
    assert_eq!(one, run("2"));
    assert_eq!(one, run("8"));
    let text = String::from_utf8(one).unwrap();
    let admissible = text.lines().filter(|l| l.contains(",Admissible,")).count();
    assert_eq!(admissible, 250);
    assert!(text.starts_with("# ffhyper scan v1 seed=0"));
}

#[test]
fn verify_single_group() {
    let o = ffhyper(&["verify", "--only", "weil"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["pass"], true);
    let checks = v["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 1);
    assert_eq!(checks[0]["check"], "weil");
    assert!(checks[0]["seconds"].as_f64().is_some());
    let o = ffhyper(&["verify", "--only", "nonsense"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn cache_is_transparent() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("c");
    let args = ["tuples", "--field", "29", "--poly", "x1*x2+1", "--m", "3"];
    let plain = ffhyper(&args);

    let mut with_flag: Vec<&str> = args.to_vec();
    with_flag.extend(["--cache-dir", cache.to_str().unwrap()]);
    let cold = ffhyper(&with_flag);
    assert!(std::fs::read_dir(&cache).unwrap().count() > 0);
    let warm = ffhyper(&with_flag);
    for o in [&cold, &warm] {
        assert_eq!(o.stdout, plain.stdout);
        assert_eq!(o.status.code(), plain.status.code());
    }

    let via_env = Command::new(env!("CARGO_BIN_EXE_ffhyper"))
        .args(args)
        .env("FFHYPER_CACHE_DIR", &cache)
        .output()
        .unwrap();
    assert_eq!(via_env.stdout, plain.stdout);

    // a different format is a different entry
    let mut csv = with_flag.clone();
    csv.extend(["--format", "csv"]);
    assert!(stdout(&ffhyper(&csv)).starts_with("# ffhyper tuples v1"));
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let o = ffhyper(&["admissible", "--field", "5", "--poly", "x1*x2+1", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    assert_eq!(v["status"], "Admissible");
}
