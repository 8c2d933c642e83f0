use std::process::Command;

fn permclass(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_permclass"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn count_f_closed_12() {
    let (code, out, _) = permclass(&["count", "--class", "F", "--n", "12", "--method", "closed"]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "2155145");
}

#[test]
fn count_e_brute_9() {
    let (code, out, _) = permclass(&["count", "--class", "E", "--n", "9", "--method", "brute"]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "30468");
}

#[test]
fn count_methods_agree_pairwise() {
    for class in ["F", "E"] {
        for n in ["1", "5", "8"] {
            let got: Vec<String> = ["series", "brute", "closed"]
                .iter()
                .map(|m| permclass(&["count", "--class", class, "--n", n, "--method", m]).1)
                .collect();
            assert!(got.windows(2).all(|w| w[0] == w[1]), "{class} n={n}: {got:?}");
        }
    }
}

#[test]
fn decompose_identity_of_length_one() {
    let (code, out, _) = permclass(&["decompose", "--perm", "1"]);
    assert_eq!(code, 0);
    assert!(out.contains("source graphs: 1"), "{out}");
    assert!(out.contains("spike: none"));
    assert!(out.contains("label: A"));
}

#[test]
fn decompose_json_schema() {
    let (code, out, _) = permclass(&["--format", "json", "decompose", "--perm", "3 1 4 2 5", "--class", "F"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["spike"], 5);
}

#[test]
fn series_dump() {
    let (code, out, _) = permclass(&["series", "--class", "E", "--order", "6", "--bivariate"]);
    assert_eq!(code, 0);
    assert!(out.contains("  6 367"), "{out}");
    assert!(out.contains("P(z,u):"));
    let (code, out, _) = permclass(&["--format", "json", "series", "--class", "F", "--order", "8", "--intermediates"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["sequence"][7], "6901");
    assert!(v["series"].as_object().unwrap().len() > 3);
}

#[test]
fn growth_reports() {
    let (code, out, _) = permclass(&["growth", "--class", "F", "--tol", "1e-9"]);
    assert_eq!(code, 0);
    assert!(out.contains("growth rate 4 "), "{out}");
    let (code, out, _) = permclass(&["growth", "--class", "E", "--tol", "1e-9"]);
    assert_eq!(code, 0);
    assert!(out.contains("growth rate 5.1955"), "{out}");
    assert_eq!(permclass(&["growth", "--class", "E", "--tol", "-1"]).0, 2);
}

#[test]
fn oeis_offline_and_corrupted_fixture() {
    let (code, out, _) = permclass(&["oeis", "--id", "A165540", "--terms", "12", "--offline"]);
    assert_eq!(code, 0);
    assert!(out.contains("12 terms compared, all agree"));

    let dir = std::env::temp_dir().join(format!("permclass-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let good = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/b165539.txt")).unwrap();
    std::fs::write(dir.join("b165539.txt"), good.replace("6 367", "6 368")).unwrap();
    let dir_s = dir.to_str().unwrap();
    let (code, out, _) = permclass(&["--fixtures", dir_s, "oeis", "--id", "A165539", "--offline"]);
    assert_eq!(code, 1);
    assert!(out.contains("first mismatch at n=6: b-file 368, series 367"), "{out}");

    std::fs::write(dir.join("b165539.txt"), "1 1\n2 two\n").unwrap();
    let (code, _, err) = permclass(&["--fixtures", dir_s, "oeis", "--id", "A165539", "--offline"]);
    assert_eq!(code, 1);
    assert!(err.contains("line 2"), "{err}");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn usage_errors() {
    assert_eq!(permclass(&[]).0, 2);
    assert_eq!(permclass(&["count", "--class", "X", "--n", "3"]).0, 2);
    assert_eq!(permclass(&["verify", "--suite", "nothing"]).0, 2);
    assert_eq!(permclass(&["decompose", "--perm", "1 2 2"]).0, 2);
}

#[test]
fn verify_single_suite() {
    let (code, out, _) = permclass(&["verify", "--suite", "series"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("5/5 checks passed"));
}
