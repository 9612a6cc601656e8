use std::process::{Command, Output};

fn matsusy(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_matsusy")).args(args).output().expect("spawn")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn list_prints_every_entry_with_formula_ids() {
    let o = matsusy(&["list"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 212);
    assert!(text.contains("P.b1.01+Q.tan.ddd+R.11p\tP.block1.1\tQ.tan\tR.11"));
}

#[test]
fn describe_r11_lists_its_pairings() {
    let o = matsusy(&["describe", "R.11"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("R.11 = ±ω(e₃+e₈)\n"), "{text}");
    assert!(text.contains("  P.b1.12+Q.r2.ddd+R.11m"));
    assert!(!text.contains("R.12"));
}

#[test]
fn describe_entry_shows_constraints() {
    let o = matsusy(&["describe", "P.b4.01+Q.h3.ddd+R.14p"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("r² + ε² = ω²"));
}

#[test]
fn check_all_passes_and_is_sorted() {
    let o = matsusy(&["check", "--entry", "all", "--tol", "1e-9"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["pass"], true);
    let ids: Vec<&str> = v["reports"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["entry_id"].as_str().unwrap())
        .collect();
    assert_eq!(ids.len(), 212 * 6);
    assert!(ids.windows(2).all(|w| w[0] <= w[1]));
}

#[test]
fn usage_and_constraint_errors_exit_2() {
    assert_eq!(matsusy(&["check", "--entry", "P.b9.99+Q.tan.ddd+R.11p"]).status.code(), Some(2));
    assert_eq!(matsusy(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(
        matsusy(&["check", "--entry", "P.b4.01+Q.h3.ddd+R.14p", "--r", "0.7"]).status.code(),
        Some(2)
    );
    assert_eq!(
        matsusy(&["spectrum", "--entry", "P.b1.01+Q.tan.ddd+R.11p", "--grid", "1:0:100"]).status.code(),
        Some(2)
    );
    assert_eq!(matsusy(&["check", "--entry", "all", "--tol", "-1"]).status.code(), Some(2));
}

#[test]
fn check_failure_exits_3() {
    let o = matsusy(&["check", "--entry", "P.b1.01+Q.tan.ddd+R.11p", "--tol", "1e-300"]);
    assert_eq!(o.status.code(), Some(3));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["pass"], false);
}

#[test]
fn truncated_ladder_exits_3() {
    let o = matsusy(&["spectrum", "--entry", "P.b1.01+Q.tan.ddd+R.11p", "--grid", "-1.5707963267948966:0.2707963267948966:300"]);
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn ground_state_csv_and_out_file() {
    let dir = std::env::temp_dir().join(format!("matsusy-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("g.csv");
    let o = matsusy(&[
        "ground-state",
        "--entry",
        "P.b1.01+Q.tan.ddd+R.11p",
        "--gammas",
        "0,0,0",
        "--grid",
        "-1.5707963267948966:1.5707963267948966:200",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("x,re1,im1,re2,im2,re3,im3\n"));
    assert_eq!(text.lines().count(), 201);
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn export_round_trips_as_json() {
    let o = matsusy(&["export"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 212);
}
