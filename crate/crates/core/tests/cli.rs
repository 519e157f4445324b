use std::process::{Command, Output};

use bannai_ito::bivariate::{build_lattice, eval_def2, BivFreeParams, BivTruncParams};
use bannai_ito::exact::{parse_scalar, rat};
use bannai_ito::univariate::{detect_truncation, orthogonality_data, UniParams};
use serde_json::Value;

fn bi(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bi")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("json report")
}

fn scalars(v: &Value) -> Vec<bannai_ito::Scalar> {
    v.as_array().unwrap().iter().map(|s| parse_scalar(s.as_str().unwrap()).unwrap()).collect()
}

#[test]
fn eval_constant_is_one() {
    let o = bi(&["eval", "--def", "1", "--n1", "0", "--n2", "0", "--z1", "1", "--z2", "1"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).trim(), "1");
}

#[test]
fn eval_linear_matches_library() {
    let o = bi(&[
        "eval", "--def", "2", "--n1", "1", "--n2", "0", "--z1", "3/7", "--z2", "-2/9", "--params", "alpha=2/3",
        "beta=-1/5", "gamma=3/7", "delta=-2/11", "epsilon=1/13",
    ]);
    assert_eq!(code(&o), 0);
    let p = BivFreeParams::new(rat(2, 3), rat(-1, 5), rat(3, 7), rat(-2, 11), rat(1, 13));
    let want = eval_def2(&p, 1, 0, &rat(3, 7), &rat(-2, 9)).unwrap();
    assert_eq!(parse_scalar(stdout(&o).trim()).unwrap(), want);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(code(&bi(&["eval", "--def", "2", "--z1", "1/0"])), 2);
    assert_eq!(code(&bi(&["eval", "--def", "1", "--n1", "3", "--n2", "2", "--N", "4"])), 2);
    assert_eq!(code(&bi(&["verify", "l1", "--params", "zeta=1"])), 2);
    assert_eq!(code(&bi(&["frobnicate"])), 2);
    assert_eq!(code(&bi(&["qlimit", "poly", "--t", "1e-3"])), 2);
    assert_eq!(code(&bi(&["qlimit", "poly", "--t", "1e-4,1e-3"])), 2);
    assert_eq!(code(&bi(&["--help"])), 0);
}

#[test]
fn verify_commands_pass() {
    let o = bi(&["verify", "ortho", "--N", "3"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["max_residual"], "0");
    for check in ["ortho-uni", "dunkl", "l1", "l2", "threerec"] {
        let o = bi(&["verify", check, "--max-deg", "3"]);
        assert_eq!(code(&o), 0, "{check}: {}", String::from_utf8_lossy(&o.stderr));
        let v = json(&o);
        assert_eq!(v["max_residual"], "0");
        assert!(v.get("worst").is_none());
    }
    let o = bi(&["verify", "ninerec", "--max-deg", "4"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["op"], "ninerec");
    assert_eq!(v["cases"], 15 * 5);
}

#[test]
fn theta_pole_exits_3_and_names_it() {
    let o = bi(&["verify", "ninerec", "--max-deg", "2", "--params", "alpha=1", "beta=0", "gamma=0", "delta=0", "epsilon=0"]);
    assert_eq!(code(&o), 3);
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("-alpha+beta+gamma+delta+2epsilon+n1+n2+1"), "{err}");
}

#[test]
fn qlimit_default_poly_passes() {
    let o = bi(&["qlimit", "poly", "--max-deg", "1"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["pass"], true);
    assert_eq!(v["t"], serde_json::json!(["1/1000", "1/10000"]));
    for r in v["reports"].as_array().unwrap() {
        assert_eq!(r["pass"], true);
    }
}

#[test]
fn low_precision_exits_4() {
    let o = bi(&["qlimit", "operator", "--precision", "32", "--t", "1e-4,1e-5"]);
    assert_eq!(code(&o), 4);
}

#[test]
fn uni_table_rows() {
    let o = bi(&["table", "uni", "--N", "2", "--format", "csv"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 3);
    assert_eq!(rows[0].split(',').nth(2), Some("1"));
}

#[test]
fn uni_table_round_trips() {
    let o = bi(&["table", "uni", "--N", "4", "--params", "rho1=1/3"]);
    let v = json(&o);
    let p = UniParams::new(rat(1, 3), rat(-7, 2), rat(1, 3) + rat(5, 2), rat(-4, 5));
    let data = orthogonality_data(&p, &detect_truncation(&p, 4)).unwrap();
    assert_eq!(scalars(&v["grid"]), data.grid);
    assert_eq!(scalars(&v["weights"]), data.weights);
    assert_eq!(scalars(&v["norms"]), data.norms);
}

#[test]
fn biv_table_shapes_and_round_trip() {
    let v = json(&bi(&["table", "biv", "--N", "2"]));
    let z1 = v["z1"].as_array().unwrap();
    assert_eq!(z1.len(), 3);
    assert!(z1.iter().all(|row| row.as_array().unwrap().len() == 3));

    let v = json(&bi(&["table", "biv", "--N", "3"]));
    let h = v["H"].as_object().unwrap();
    assert_eq!(h.len(), 10);
    let lat = build_lattice(&BivTruncParams::new(rat(1, 5), rat(1, 7), rat(1, 11), rat(1, 3), 3)).unwrap();
    for ((a, b), want) in &lat.h {
        assert_eq!(&parse_scalar(h[&format!("({a},{b})")].as_str().unwrap()).unwrap(), want);
    }
    assert_eq!(scalars(&v["w2"]), lat.w2);
    for (r, row) in v["w1"].as_array().unwrap().iter().enumerate() {
        assert_eq!(scalars(row), lat.w1[r]);
    }
}

#[test]
fn reports_are_deterministic() {
    let dir = std::env::temp_dir();
    let a = dir.join(format!("bi-det-a-{}.json", std::process::id()));
    let b = dir.join(format!("bi-det-b-{}.json", std::process::id()));
    for path in [&a, &b] {
        let o = bi(&["verify", "l2", "--max-deg", "2", "--seed", "11", "--out", path.to_str().unwrap()]);
        assert_eq!(code(&o), 0);
        assert!(o.stdout.is_empty());
    }
    let (ta, tb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    std::fs::remove_file(&a).unwrap();
    std::fs::remove_file(&b).unwrap();
    assert_eq!(ta, tb);
}
