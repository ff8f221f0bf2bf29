use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use rigidity::graphcore::{named, to_edge_list, to_graph6};
use rigidity::pipeline::CertificationReport;

fn scratch(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("rigidity-cli-{tag}-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn rigidity(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rigidity"))
        .args(args)
        .env_remove("RIGIDITY_SEED")
        .output()
        .unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn check_exit_codes() {
    let dir = scratch("codes");
    let petersen = write(&dir, "petersen.g6", &to_graph6(&named::petersen()));
    let barbell = write(&dir, "barbell.txt", &to_edge_list(&named::barbell()));
    let trivial = write(&dir, "trivial.json", "[]");
    assert_eq!(rigidity(&["check", &petersen]).status.code(), Some(0));
    assert_eq!(
        rigidity(&["check", &barbell, "--target", "lower"])
            .status
            .code(),
        Some(1)
    );
    let group = format!("file:{trivial}");
    assert_eq!(
        rigidity(&["check", &petersen, "--target", "lower", "--group", &group])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        rigidity(&["check", &dir.join("missing").to_string_lossy()])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(
        rigidity(&["check", &petersen, "--group", "nonsense"])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(
        rigidity(&["check", &petersen, "--tol-sdp", "-1"])
            .status
            .code(),
        Some(3)
    );
    let bad = write(&dir, "bad.txt", "0 1\n1 x\n");
    assert_eq!(rigidity(&["check", &bad]).status.code(), Some(3));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn report_file_round_trips_and_is_deterministic() {
    let dir = scratch("report");
    let petersen = write(&dir, "petersen.g6", &to_graph6(&named::petersen()));
    let out_a = dir.join("a.json");
    let out_b = dir.join("b.json");
    for out in [&out_a, &out_b] {
        let o = rigidity(&[
            "check",
            &petersen,
            "--target",
            "upper",
            "--report",
            &out.to_string_lossy(),
        ]);
        assert_eq!(o.status.code(), Some(0));
    }
    let a = std::fs::read(&out_a).unwrap();
    assert_eq!(a, std::fs::read(&out_b).unwrap());
    let report: CertificationReport = serde_json::from_slice(&a).unwrap();
    assert!(rigidity::pipeline::verify_report(
        &named::petersen(),
        &report
    ));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn seed_flag_and_environment() {
    let dir = scratch("seed");
    let c5 = write(&dir, "c5.txt", &to_edge_list(&named::cycle(5)));
    let seed_of = |o: Output| -> u64 {
        let r: CertificationReport = serde_json::from_slice(&o.stdout).unwrap();
        r.seed
    };
    let args = ["check", c5.as_str(), "--target", "lower", "--json"];
    assert_eq!(seed_of(rigidity(&args)), 0);
    let env = Command::new(env!("CARGO_BIN_EXE_rigidity"))
        .args(args)
        .env("RIGIDITY_SEED", "11")
        .output()
        .unwrap();
    assert_eq!(seed_of(env), 11);
    let mut with_flag = args.to_vec();
    with_flag.extend(["--seed", "5"]);
    let both = Command::new(env!("CARGO_BIN_EXE_rigidity"))
        .args(&with_flag)
        .env("RIGIDITY_SEED", "11")
        .output()
        .unwrap();
    assert_eq!(seed_of(both), 5);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn group_sources() {
    let dir = scratch("group");
    let g = named::petersen();
    let petersen = write(&dir, "petersen.g6", &to_graph6(&g));
    let orbits = |group: &str| -> serde_json::Value {
        let o = rigidity(&["orbits", &petersen, "--group", group, "--json"]);
        assert_eq!(
            o.status.code(),
            Some(0),
            "{}",
            String::from_utf8_lossy(&o.stderr)
        );
        serde_json::from_slice(&o.stdout).unwrap()
    };
    assert_eq!(orbits("auto")["group_order"], 120);
    assert_eq!(orbits("fix:0")["group_order"], 12);
    let rot: Vec<usize> = vec![1, 2, 3, 4, 0, 6, 7, 8, 9, 5];
    let file = write(
        &dir,
        "gens.json",
        &serde_json::to_string(&vec![rot]).unwrap(),
    );
    let v = orbits(&format!("file:{file}"));
    assert!(v["group_order"].as_u64().unwrap() >= 1);
    let not_aut = write(&dir, "bad.json", "[[1,0,2,3,4,5,6,7,8,9]]");
    assert_eq!(
        rigidity(&["orbits", &petersen, "--group", &format!("file:{not_aut}")])
            .status
            .code(),
        Some(3)
    );
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn spectrum_and_disprove() {
    let dir = scratch("misc");
    let f3 = write(&dir, "f3.txt", &to_edge_list(&named::friendship(3)));
    let o = rigidity(&["spectrum", &f3, "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!((v["lambda_max"].as_f64().unwrap() - 7.0).abs() < 1e-10);
    assert_eq!(
        rigidity(&["disprove", &f3, "--target", "upper"])
            .status
            .code(),
        Some(1)
    );
    let p = write(&dir, "p.g6", &to_graph6(&named::petersen()));
    assert_eq!(
        rigidity(&["disprove", &p, "--target", "upper"])
            .status
            .code(),
        Some(2)
    );
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn batch_directory() {
    let dir = scratch("batch");
    write(&dir, "barbell.g6", &to_graph6(&named::barbell()));
    write(&dir, "f3.g6", &to_graph6(&named::friendship(3)));
    write(&dir, "c5.txt", &to_edge_list(&named::cycle(5)));
    write(&dir, "desargues.g6", &to_graph6(&named::desargues()));
    let o = rigidity(&["batch", &dir.to_string_lossy(), "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let reports = v["reports"].as_array().unwrap();
    assert_eq!(reports.len(), 8);
    let status = |id: &str, target: &str| -> String {
        reports
            .iter()
            .find(|r| r["graph_id"] == id && r["target"] == target)
            .map(|r| r["status"].as_str().unwrap().to_string())
            .unwrap()
    };
    assert_eq!(status("barbell.g6", "LOWER"), "DISPROVED");
    assert_eq!(status("f3.g6", "UPPER"), "DISPROVED");
    assert!(status("c5.txt", "LOWER").starts_with("CERTIFIED"));
    assert!(status("c5.txt", "UPPER").starts_with("CERTIFIED"));
    assert_eq!(status("desargues.g6", "UPPER"), "CERTIFIED_EXACT");
    assert!(matches!(o.status.code(), Some(1 | 2)));

    write(&dir, "broken.txt", "0 1\n1 2\nzzz\n");
    let o = rigidity(&["batch", &dir.to_string_lossy(), "--json"]);
    assert_eq!(o.status.code(), Some(3));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["failures"].as_array().unwrap().len(), 1);
    assert_eq!(v["reports"].as_array().unwrap().len(), 8);
    std::fs::remove_dir_all(&dir).unwrap();
}
