use std::process::{Command, Output};

fn sphrh(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sphrh")).args(args).output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn first_number(text: &str) -> f64 {
    text.split_whitespace().next().unwrap().parse().unwrap()
}

#[test]
fn eval_prints_real_and_imaginary_parts() {
    let out = sphrh(&["eval", "power:d=3,n=2", "--point", "0.6,0.8,0"]);
    assert!(out.status.success());
    let parts: Vec<f64> = stdout(&out).split_whitespace().map(|s| s.parse().unwrap()).collect();
    // (0.6 + 0.8i)² = −0.28 + 0.96i
    assert!((parts[0] + 0.28).abs() < 1e-14 && (parts[1] - 0.96).abs() < 1e-14);
}

#[test]
fn norm_matches_the_closed_form() {
    let out = sphrh(&["norm", "power:d=3,n=1", "-p", "2"]);
    assert!(out.status.success());
    let v = first_number(&stdout(&out));
    assert!((v - (8.0 * std::f64::consts::PI / 3.0).sqrt()).abs() < 1e-12);
    let sup = sphrh(&["norm", "zonal:d=4,n=5", "-p", "inf"]);
    assert!(sup.status.success());
    // P_5^{(1/2,1/2)}(1) = (11/2)(9/2)(7/2)(5/2)(3/2)/5!
    assert!((first_number(&stdout(&sup)) - 2.70703125).abs() < 1e-12, "{}", stdout(&sup));
}

#[test]
fn project_and_toperator_reproduce_their_degree() {
    for args in [
        vec!["project", "-k", "3", "zonal:d=3,n=3", "--point", "0.6,0,0.8", "--point", "0,1,0"],
        vec!["toperator", "-n", "3", "power:d=4,n=3", "--point", "0.5,0.5,0.5,0.5"],
    ] {
        let out = sphrh(&args);
        assert!(out.status.success(), "{args:?}");
        let text = stdout(&out);
        let mut lines = text.lines();
        assert!(lines.next().unwrap().ends_with(",input,output"));
        for line in lines {
            let cols: Vec<f64> = line.split(',').map(|s| s.parse().unwrap()).collect();
            let (input, output) = (cols[cols.len() - 2], cols[cols.len() - 1]);
            assert!((input - output).abs() <= 1e-10 * (1.0 + input.abs()), "{line}");
        }
    }
}

#[test]
fn regimes_table_and_csv_file() {
    let out = sphrh(&["regimes", "-d", "3"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("d,p,q,regime,exponent,nikolskii,gap,witness\n"));
    assert!(text.contains("3,1,2,i,1/4,1,3/4,power"));
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("rates.csv");
    let out = sphrh(&["regimes", "-d", "3", "--csv", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(std::fs::read_to_string(path).unwrap(), text);
}

#[test]
fn pitt_at_the_self_dual_index() {
    let out = sphrh(&["pitt", "-d", "4", "-k", "0", "-p", "2", "--ratio", "1"]);
    assert!(out.status.success());
    let expected = (2.0 * std::f64::consts::PI).powi(2);
    assert!((first_number(&stdout(&out)) - expected).abs() < 1e-12 * expected);
    assert_eq!(sphrh(&["pitt", "-d", "4", "-k", "0", "-p", "3"]).status.code(), Some(2));
}

#[test]
fn verify_exponents_suite_passes_and_writes_reports() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("report.csv");
    let json = dir.path().join("report.json");
    let out = sphrh(&[
        "verify",
        "--suite",
        "exponents",
        "--csv",
        csv.to_str().unwrap(),
        "--json",
        json.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(csv).unwrap();
    assert!(text.lines().count() > 10);
    let rows: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(json).unwrap()).unwrap();
    assert_eq!(rows.as_array().map(|a| a.len()), Some(text.lines().count() - 1));
}

#[test]
fn configuration_problems_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let unknown = dir.path().join("unknown.json");
    std::fs::write(&unknown, r#"{"nope": 1}"#).unwrap();
    let over = dir.path().join("over.json");
    std::fs::write(&over, r#"{"n_grid": [16, 32, 64, 100000]}"#).unwrap();
    let broken = dir.path().join("broken.json");
    std::fs::write(&broken, "{").unwrap();
    for path in [&unknown, &over, &broken] {
        let out = sphrh(&["verify", "--suite", "rates", "--config", path.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(2), "{}", path.display());
    }
    assert_eq!(sphrh(&["verify", "--suite", "nonsense"]).status.code(), Some(2));
    assert_eq!(sphrh(&["eval", "power:d=3,n=1", "--point", "1,0"]).status.code(), Some(2));
}
