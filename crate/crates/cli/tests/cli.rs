use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn diskfn(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_diskfn"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

#[test]
fn unequal_zero_counts_are_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&diskfn(dir.path(), &["fixtures", "--out", "fx"])), 0);
    let o = diskfn(
        dir.path(),
        &[
            "match",
            "--zeros",
            "fx/adversarial_z.json",
            "--zeros-star",
            "fx/geometric.json",
        ],
    );
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("cardinality"));
}

#[test]
fn adversarial_single_step_fails_certification() {
    let dir = tempfile::tempdir().unwrap();
    let o = diskfn(
        dir.path(),
        &["path", "--fixture", "adversarial", "--grid", "1024"],
    );
    assert_eq!(code(&o), 1);
    let report: serde_json::Value =
        serde_json::from_slice(&fs::read(dir.path().join("out/certification.json")).unwrap())
            .unwrap();
    assert_eq!(report["result"]["certified"], false);
}

#[test]
fn bad_flags_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(
        code(&diskfn(dir.path(), &["fixtures", "--grid", "1000"])),
        2
    );
    assert_eq!(
        code(&diskfn(dir.path(), &["fixtures", "--tol", "nope=1"])),
        2
    );
    assert_eq!(
        code(&diskfn(dir.path(), &["eval", "--zeros", "missing.json"])),
        2
    );
    fs::write(
        dir.path().join("outside.json"),
        r#"{"zeros":[{"re":1.5,"im":0.0,"mult":1}],"lambda":{"re":1.0,"im":0.0},"m":0}"#,
    )
    .unwrap();
    assert_eq!(
        code(&diskfn(dir.path(), &["eval", "--zeros", "outside.json"])),
        2
    );
}

#[test]
fn same_seed_gives_identical_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let run = |out: &str| {
        let o = diskfn(
            dir.path(),
            &[
                "contour",
                "--fixture",
                "disk-walks",
                "--walks",
                "200",
                "--grid",
                "1024",
                "--seed",
                "11",
                "--out",
                out,
            ],
        );
        assert!(
            matches!(code(&o), 0 | 1),
            "{}",
            String::from_utf8_lossy(&o.stderr)
        );
    };
    run("a");
    run("b");
    let mut names: Vec<_> = fs::read_dir(dir.path().join("a"))
        .unwrap()
        .map(|e| e.unwrap().file_name())
        .collect();
    names.sort();
    assert!(!names.is_empty());
    for n in names {
        let a = fs::read(dir.path().join("a").join(&n)).unwrap();
        let b = fs::read(dir.path().join("b").join(&n)).unwrap();
        assert_eq!(a, b, "{n:?} differs");
    }
}

#[test]
fn artifacts_carry_hash_and_seed() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&diskfn(dir.path(), &["fixtures", "--out", "fx"])), 0);
    let o = diskfn(
        dir.path(),
        &[
            "match",
            "--zeros",
            "fx/singular_shift_e-2.json",
            "--zeros-star",
            "fx/singular_shift_e-1.json",
            "--seed",
            "3",
        ],
    );
    assert_eq!(code(&o), 0);
    let v: serde_json::Value =
        serde_json::from_slice(&fs::read(dir.path().join("out/pairing.json")).unwrap()).unwrap();
    assert_eq!(v["seed"], 3);
    assert_eq!(v["config_hash"].as_str().unwrap().len(), 64);
    let cost = v["result"]["cost"].as_f64().unwrap();
    assert!((cost - 2f64.ln()).abs() < 1e-6, "{cost}");
}
