use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use dgmf_cli::artifacts::{MfFile, ResolutionFile, RunReport, XFile};
use dgmf_core::bundle::{bundle_file, read_bundle, to_json};
use dgmf_core::linkage::LinkageOptions;
use tempfile::TempDir;

fn bundles() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../bundles")
}

fn dgmf(out: &Path, args: &[&str]) -> i32 {
    let status = Command::new(env!("CARGO_BIN_EXE_dgmf"))
        .args(args)
        .arg("--out")
        .arg(out)
        .env("DGMF_SEED", "0")
        .output()
        .expect("run dgmf")
        .status;
    status.code().expect("exit code")
}

fn bundle(name: &str) -> String {
    bundles().join(name).display().to_string()
}

fn report(out: &Path) -> RunReport {
    serde_json::from_str(&fs::read_to_string(out.join("report.json")).unwrap()).unwrap()
}

fn read(out: &Path, name: &str) -> String {
    fs::read_to_string(out.join(name)).unwrap()
}

#[test]
fn validate_exit_codes() {
    let dir = TempDir::new().unwrap();
    assert_eq!(dgmf(dir.path(), &["validate", &bundle("e1.json")]), 0);
    assert_eq!(report(dir.path()).status, "ok");

    assert_eq!(dgmf(dir.path(), &["validate", &bundle("faulty_e1.json")]), 1);
    let rep = report(dir.path());
    let failed: Vec<&str> =
        rep.stages[0].checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
    assert!(failed.contains(&"associativity"), "{failed:?}");

    let truncated = dir.path().join("truncated.json");
    let text = fs::read_to_string(bundles().join("e1.json")).unwrap();
    fs::write(&truncated, &text[..text.len() / 2]).unwrap();
    assert_eq!(dgmf(dir.path(), &["validate", truncated.to_str().unwrap()]), 2);
    assert_eq!(dgmf(dir.path(), &["validate", "/nonexistent/bundle.json"]), 2);
}

#[test]
fn unit_r_build_emits_rank_six_factorization() {
    let dir = TempDir::new().unwrap();
    let code = dgmf(dir.path(), &["build", &bundle("e1.json"), "--mf2", "--resolution", "acute"]);
    assert_eq!(code, 0);
    let mf: MfFile = serde_json::from_str(&read(dir.path(), "mf_reduced.json")).unwrap();
    assert_eq!((mf.rank, mf.f.as_str()), (6, "x + 1"));
    let res: ResolutionFile = serde_json::from_str(&read(dir.path(), "resolution_acute.json")).unwrap();
    assert_eq!(res.ranks[..4], [1, 4, 6, 6]);
    assert!(report(dir.path()).stages.iter().all(|s| s.passed));
}

#[test]
fn non_unit_r_needs_full_factorization() {
    let dir = TempDir::new().unwrap();
    assert_eq!(dgmf(dir.path(), &["build", &bundle("e2.json"), "--mf2"]), 3);
    let rep = report(dir.path());
    assert_eq!((rep.status.as_str(), rep.failed_stage.as_deref()), ("precondition", Some("mf_reduced")));

    assert_eq!(dgmf(dir.path(), &["build", &bundle("e2.json"), "--mf1", "--resolution", "N"]), 0);
    let mf: MfFile = serde_json::from_str(&read(dir.path(), "mf_full.json")).unwrap();
    assert_eq!(mf.rank, 11);
}

#[test]
fn differentials_only_bundle_needs_solver() {
    let dir = TempDir::new().unwrap();
    assert_eq!(dgmf(dir.path(), &["build", &bundle("e3_differentials.json")]), 2);
    assert_eq!(dgmf(dir.path(), &["build", &bundle("e3_differentials.json"), "--solve-mult", "--mf2"]), 0);
    let rep = report(dir.path());
    assert_eq!(rep.seed, Some(0));
    assert!(rep.artifacts.contains(&"bundle.json".to_string()));
    let solved = read_bundle(&read(dir.path(), "bundle.json")).unwrap();
    assert_eq!(solved.m.unwrap().complex.ranks(), &[1, 8, 14, 8, 1]);
}

#[test]
fn artifacts_round_trip_byte_identically() {
    let dir = TempDir::new().unwrap();
    assert_eq!(dgmf(dir.path(), &["demo", "E2", "--mf1", "--resolution", "N"]), 0);
    let out = dir.path();

    let text = read(out, "bundle.json");
    let b = read_bundle(&text).unwrap();
    let opts = LinkageOptions { check_regular: b.options.check_regular };
    assert_eq!(to_json(&bundle_file(&b.vars, &b.a, &b.f, b.m.as_ref().unwrap(), &opts)), text);

    let text = read(out, "x.json");
    assert_eq!(to_json(&serde_json::from_str::<XFile>(&text).unwrap().canonical().unwrap()), text);
    let text = read(out, "mf_full.json");
    assert_eq!(to_json(&serde_json::from_str::<MfFile>(&text).unwrap().canonical().unwrap()), text);
    let text = read(out, "resolution_N.json");
    assert_eq!(to_json(&serde_json::from_str::<ResolutionFile>(&text).unwrap().canonical().unwrap()), text);

    // shipped fixtures are in canonical form too
    assert_eq!(read(&bundles(), "e2.json"), read(out, "bundle.json"));
}

#[test]
fn writes_leave_no_temporaries() {
    let dir = TempDir::new().unwrap();
    assert_eq!(dgmf(dir.path(), &["demo", "E1"]), 0);
    let names: Vec<String> =
        fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().file_name().to_string_lossy().into_owned()).collect();
    assert!(names.iter().all(|n| !n.ends_with(".tmp")), "{names:?}");
    for expected in ["report.json", "bundle.json", "x.json", "mf_reduced.json", "resolution_acute.json"] {
        assert!(names.iter().any(|n| n == expected), "missing {expected} in {names:?}");
    }
}
