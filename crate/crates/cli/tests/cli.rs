use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn tests_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests")
}

fn sigmak(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sigmak"))
        .args(args)
        .current_dir(tests_dir().join("data"))
        .output()
        .expect("binary runs")
}

fn golden(args: &[&str], file: &str) {
    let out = sigmak(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let want = std::fs::read_to_string(tests_dir().join("golden").join(file)).unwrap();
    assert_eq!(String::from_utf8(out.stdout).unwrap(), want, "{args:?}");
}

#[test]
fn dist_golden() {
    golden(
        &["dist", "--k", "2", "bp_a.genome", "bp_b.genome"],
        "dist_k2.txt",
    );
    golden(
        &["dist", "--k", "inf", "bp_a.genome", "bp_b.genome"],
        "dist_inf.txt",
    );
}

#[test]
fn dd_golden() {
    let pair = ["amb_s.genome", "amb_d.genome"];
    let cases = [
        (["--k", "8", "--engine", "naive"], "dd_naive_k8.txt"),
        (["--k", "2", "--engine", "greedy2"], "dd_greedy2_k2.txt"),
        (["--k", "4", "--engine", "mis"], "dd_mis_k4.txt"),
        (["--k", "inf", "--engine", "oracle"], "dd_oracle_inf.txt"),
    ];
    for (flags, file) in cases {
        let mut args = vec!["dd"];
        args.extend(flags);
        args.extend(pair);
        golden(&args, file);
    }
}

#[test]
fn dd_writes_report() {
    let out = Path::new(env!("CARGO_TARGET_TMPDIR")).join("dd_report.json");
    let o = sigmak(&[
        "dd",
        "--k",
        "8",
        "--out",
        out.to_str().unwrap(),
        "amb_s.genome",
        "amb_d.genome",
    ]);
    assert!(o.status.success());
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["dd"], 3);
    assert_eq!(v["tau"], "01");
}

#[test]
fn reduce_golden() {
    golden(
        &[
            "reduce",
            "--k",
            "8",
            "--assignment",
            "T,T,F,T",
            "--solve",
            "example.cnf",
        ],
        "reduce_k8.txt",
    );
    golden(
        &["reduce", "--k", "8", "--shape", "linear", "example.cnf"],
        "reduce_linear.txt",
    );
    golden(
        &[
            "reduce",
            "--k",
            "8",
            "--assignment",
            "T,F,F,T",
            "example.cnf",
        ],
        "reduce_unsat_assignment.txt",
    );
}

#[test]
fn reduce_writes_bundle() {
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR")).join("reduce_bundle");
    let o = sigmak(&[
        "reduce",
        "--k",
        "8",
        "--out",
        dir.to_str().unwrap(),
        "example.cnf",
    ]);
    assert!(o.status.success());
    let meta: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("meta.json")).unwrap()).unwrap();
    assert_eq!(meta["summary"]["bound"], 20);
    assert_eq!(meta["summary"]["vertices"], 944);
    assert_eq!(meta["summary"]["a_star"], 236);
    assert_eq!(meta["genes"], 236);
    let s = sigmak::genome::parse_genome(&std::fs::read_to_string(dir.join("S.genome")).unwrap())
        .unwrap();
    let d = sigmak::genome::parse_genome(&std::fs::read_to_string(dir.join("D.genome")).unwrap())
        .unwrap();
    assert_eq!(
        sigmak::genome::classify_pair(&s, &d),
        sigmak::genome::PairClass::OneTwoCognate {
            singular: sigmak::genome::Side::First
        }
    );
    let dot = std::fs::read_to_string(dir.join("abg.dot")).unwrap();
    assert!(dot.starts_with("digraph abg {") && dot.ends_with("}\n"));
}

#[test]
fn verify_golden() {
    golden(&["verify", "flower", "--p", "5"], "verify_flower_p5.txt");
    golden(
        &["verify", "reduction", "--k", "8", "example.cnf"],
        "verify_reduction_k8.txt",
    );
    golden(
        &["verify", "reduction", "--k", "12", "example.cnf"],
        "verify_reduction_k12.txt",
    );
}

#[test]
fn gen_golden() {
    golden(
        &[
            "gen",
            "genome",
            "--n",
            "6",
            "--linear",
            "1",
            "--circular",
            "1",
            "--seed",
            "4",
        ],
        "gen_genome.txt",
    );
    golden(&["gen", "pair", "--n", "4", "--seed", "2"], "gen_pair.txt");
    golden(
        &["gen", "cnf", "--variables", "4", "--seed", "1"],
        "gen_cnf.txt",
    );
}

#[test]
fn export_dot_golden() {
    golden(
        &["export-dot", "--tau", "01", "amb_s.genome", "amb_d.genome"],
        "export_dot_tau.txt",
    );
}

#[test]
fn exit_codes() {
    // usage errors
    for args in [
        vec!["dist", "--k", "3", "bp_a.genome", "bp_b.genome"],
        vec!["dd", "--engine", "magic", "amb_s.genome", "amb_d.genome"],
        vec!["reduce", "--shape", "round", "example.cnf"],
        vec!["nonsense"],
    ] {
        assert_eq!(sigmak(&args).status.code(), Some(2), "{args:?}");
    }
    // domain errors
    for args in [
        vec!["dist", "bp_a.genome", "missing.genome"],
        vec!["dist", "bp_a.genome", "amb_d.genome"],
        vec![
            "dd",
            "--k",
            "inf",
            "--engine",
            "mis",
            "amb_s.genome",
            "amb_d.genome",
        ],
        vec!["reduce", "--k", "6", "example.cnf"],
        vec!["verify", "flower", "--p", "1"],
        vec!["export-dot", "--tau", "0", "amb_s.genome", "amb_d.genome"],
    ] {
        let o = sigmak(&args);
        assert_eq!(o.status.code(), Some(1), "{args:?}");
        assert!(String::from_utf8_lossy(&o.stderr).starts_with("error: "));
    }
}
