//! End-to-end runs of the `stratum` binary.

use std::path::PathBuf;
use std::process::{Command, Output};

fn stratum(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stratum")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch_dir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("stratum-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn pinched_torus_intersection_homology() {
    let o = stratum(&["ih", "pinched_torus", "--perversity", "zero", "--ring", "Z"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    for line in ["IH[0] rank=1 torsion=[]", "IH[1] rank=0 torsion=[]", "IH[2] rank=1 torsion=[]"] {
        assert!(text.contains(line), "{line} missing from\n{text}");
    }
}

#[test]
fn double_suspension_has_four_exceptional_strata() {
    let o = stratum(&["classify", "double_suspension_poincare"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.matches("class=exceptional").count(), 4);
    assert!(text.contains("exceptional: 4"));
}

#[test]
fn a_verification_suite_passes_and_is_deterministic() {
    let a = stratum(&["verify", "perversity-laws"]);
    let b = stratum(&["verify", "perversity-laws"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    assert!(text.contains("seed:"));
    assert!(text.trim_end().ends_with(")") && text.contains("result: pass"));
}

#[test]
fn other_seeds_are_echoed() {
    let o = stratum(&["verify", "pi0-invariance", "--seed", "7"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("=7"));
}

#[test]
fn malformed_input_exits_two_with_a_position() {
    let dir = scratch_dir("malformed");
    let path = dir.join("bad.strat");
    std::fs::write(&path, "complex\nfacets: 0 1 x\n").unwrap();
    let o = stratum(&["strata", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("line 1, column 1"));
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn unknown_entries_and_bad_usage_exit_two() {
    assert_eq!(stratum(&["strata", "no_such_entry"]).status.code(), Some(2));
    assert_eq!(stratum(&["verify", "no-such-suite"]).status.code(), Some(2));
    assert_eq!(stratum(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn emitted_files_load_back_unchanged() {
    let dir = scratch_dir("emit");
    for name in ["sphere2_point", "pinched_torus", "three_filtrations"] {
        let first = stratum(&["emit", name]);
        assert_eq!(first.status.code(), Some(0));
        let path = dir.join(format!("{name}.strat"));
        std::fs::write(&path, &first.stdout).unwrap();
        let second = stratum(&["emit", path.to_str().unwrap()]);
        assert_eq!(second.status.code(), Some(0));
        assert_eq!(first.stdout, second.stdout, "{name}");
    }
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn corpus_directory_can_be_overridden() {
    let dir = scratch_dir("corpus");
    let text = stdout(&stratum(&["emit", "sphere2_point"]));
    std::fs::write(dir.join("my_sphere.strat"), text).unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_stratum"))
        .args(["strata", "my_sphere"])
        .env("STRATUM_CORPUS_DIR", &dir)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("regular components: 1"));
    let o = stratum(&["strata", "my_sphere"]);
    assert_eq!(o.status.code(), Some(2));
    std::fs::remove_dir_all(dir).unwrap();
}
