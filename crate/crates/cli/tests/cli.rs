use std::process::Command;

fn exe() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_kkindex"));
    c.env_remove("KKINDEX_OUT");
    c
}

#[test]
fn list_shows_registry() {
    let out = exe().arg("list").output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 12);
    assert!(text.starts_with("ccr_car"));
    assert!(text.contains("kucerovsky"));
}

#[test]
fn env_overrides_out() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("c.cfg");
    std::fs::write(&cfg, "modes = 2\nenergy_cut = 4\n").unwrap();
    let env_dir = tmp.path().join("from_env");
    let out = exe()
        .args(["run", "sigma_tails", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(tmp.path().join("from_flag"))
        .env("KKINDEX_OUT", &env_dir)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(env_dir.join("sigma_tails.csv")).unwrap();
    assert!(csv.starts_with("# kk-index-lab v1\n"));
    assert!(!tmp.path().join("from_flag").exists());
}

#[test]
fn bad_config_and_unknown_experiment() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("bad.cfg");
    std::fs::write(&cfg, "modes = -1\n").unwrap();
    let out = exe().args(["run", "weitzenbock", "--config"]).arg(&cfg).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("`modes`"));
    let out = exe()
        .args(["run", "nonsense", "--out"])
        .arg(tmp.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn failing_margin_gives_nonzero_exit() {
    // exit status follows the pass column, whatever the floating-point luck
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("tight.cfg");
    std::fs::write(&cfg, "tolerance = 1e-300\ncycle_modes = 2\ncycle_energy = 4\nactive_modes = 2\n").unwrap();
    let out = exe()
        .args(["run", "index_compare", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(tmp.path())
        .output()
        .unwrap();
    let csv = std::fs::read_to_string(tmp.path().join("index_compare.csv")).unwrap();
    let any_fail = csv.lines().any(|l| l.ends_with(",false"));
    assert_eq!(out.status.code(), Some(if any_fail { 1 } else { 0 }));
}

#[test]
fn kernel_count_reports_eleven() {
    let tmp = tempfile::tempdir().unwrap();
    let out = exe()
        .args(["run", "kernel_count", "--out"])
        .arg(tmp.path())
        .output()
        .unwrap();
    assert!(out.status.success());
    let csv = std::fs::read_to_string(tmp.path().join("kernel_count.csv")).unwrap();
    assert!(csv.contains("kernel_count,dim ker right,N=3 E=4,11,11,0,0,0,true"), "{csv}");
}
