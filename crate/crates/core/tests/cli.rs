use std::path::{Path, PathBuf};
use std::process::Command;

const BIN: &str = env!("CARGO_BIN_EXE_btfloquet");

fn bundled(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs").join(name)
}

fn write_config(dir: &Path, text: &str) -> PathBuf {
    let p = dir.join("run.toml");
    std::fs::write(&p, text).unwrap();
    p
}

fn run(args: &[&str], config: &Path, out: &Path) -> i32 {
    Command::new(BIN)
        .args(args)
        .arg("--config")
        .arg(config)
        .arg("--out")
        .arg(out)
        .output()
        .unwrap()
        .status
        .code()
        .unwrap()
}

/// Data rows of a CSV (header comments and column line dropped).
fn rows(path: &Path) -> Vec<Vec<String>> {
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

const SMALL_DISK: &str = "g = 20.0\nn = 12\nnt = 64\n[shape]\nkind = \"disk\"\nradius = 0.25\n";

#[test]
fn bundled_no_hole_config_validates() {
    let tmp = tempfile::tempdir().unwrap();
    assert_eq!(run(&["validate"], &bundled("no_hole.toml"), tmp.path()), 0);
    let table = rows(&tmp.path().join("validation.csv"));
    assert!(table.len() >= 5);
    assert!(table.iter().all(|r| r[1] == "true"));
}

#[test]
fn every_bundled_config_parses() {
    for entry in std::fs::read_dir(bundled("")).unwrap() {
        let path = entry.unwrap().path();
        btfloquet::cli::RunConfig::load(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    }
}

#[test]
fn malformed_configs_exit_with_2() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("out");
    let cfg = write_config(tmp.path(), "g = -1.0\nn = 8\n");
    assert_eq!(run(&["spectrum"], &cfg, &out), 2);
    let cfg = write_config(tmp.path(), "g = 0.0\nn = 8\n");
    assert_eq!(run(&["spectrum"], &cfg, &out), 2);
    let cfg = write_config(tmp.path(), "g = 1.0\nn = 8\nsurprise = true\n");
    assert_eq!(run(&["spectrum"], &cfg, &out), 2);
    let cfg = write_config(tmp.path(), "g = 1.0\nn = 8\n[shape]\nkind = \"disk\"\nradius = 0.2\ncolour = 1\n");
    assert_eq!(run(&["spectrum"], &cfg, &out), 2);
    // the sweep table is mandatory for the sweep command
    let cfg = write_config(tmp.path(), SMALL_DISK);
    assert_eq!(run(&["sweep"], &cfg, &out), 2);
    assert_eq!(run(&["spectrum"], &tmp.path().join("missing.toml"), &out), 2);
    assert!(!out.exists(), "nothing is written for a rejected config");

    let status = Command::new(BIN).arg("spectrum").output().unwrap().status;
    assert_eq!(status.code(), Some(2));
}

#[test]
fn sweep_over_a_full_turn_repeats_the_fiber() {
    let tmp = tempfile::tempdir().unwrap();
    let text = format!("{SMALL_DISK}[sweep]\nq_values = [0.0, 6.283185307179586]\n");
    let cfg = write_config(tmp.path(), &text);
    assert_eq!(run(&["sweep", "--plots"], &cfg, tmp.path()), 0);
    let table = rows(&tmp.path().join("spectrum.csv"));
    let at = |q: &str| -> Vec<(f64, f64)> {
        table
            .iter()
            .filter(|r| r[0] == q)
            .map(|r| (r[4].parse().unwrap(), r[5].parse().unwrap()))
            .collect()
    };
    let a = at("0.0000000000000000e0");
    let b = at("6.2831853071795862e0");
    assert!(!a.is_empty());
    assert_eq!(a.len(), b.len());
    for (x, y) in a.iter().zip(&b) {
        assert!((x.0 - y.0).abs() < 1e-8 && (x.1 - y.1).abs() < 1e-8);
    }
    assert!(tmp.path().join("spectral_curves.svg").exists());
    assert!(tmp.path().join("curves.csv").exists());
}

#[test]
fn outputs_embed_config_version_and_caveat() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), SMALL_DISK);
    assert_eq!(run(&["spectrum"], &cfg, tmp.path()), 0);
    let text = std::fs::read_to_string(tmp.path().join("spectrum.csv")).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), format!("# tool: {}", btfloquet::TOOL_VERSION));
    let config = lines.next().unwrap();
    assert!(config.starts_with("# config: {\"g\":20.0,"), "{config}");
    assert!(lines.next().unwrap().starts_with("# caveat: branch values"));
    assert_eq!(lines.next().unwrap(), "q,p0,g,s,re_lambda,im_lambda,abs_mu,residual,method");

    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(tmp.path().join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["command"], "spectrum");
    assert_eq!(summary["config"]["n"], 12);
    assert!(summary["wall_seconds"].as_f64().unwrap() >= 0.0);
    assert!(summary["caveat"].as_str().unwrap().contains("conjecture"));
}

#[test]
fn reruns_are_byte_identical() {
    let tmp = tempfile::tempdir().unwrap();
    let text = format!(
        "{SMALL_DISK}[pseudospectra]\nre = [0.0, 20.0]\nim = [-5.0, 5.0]\nn_re = 3\nn_im = 2\nhalf_width = 1\n"
    );
    let cfg = write_config(tmp.path(), &text);
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    assert_eq!(run(&["spectrum"], &cfg, &a), 0);
    assert_eq!(run(&["spectrum", "--threads", "1"], &cfg, &b), 0);
    assert_eq!(run(&["pseudospectra"], &cfg, &a), 0);
    assert_eq!(run(&["pseudospectra", "--threads", "1"], &cfg, &b), 0);
    for f in ["spectrum.csv", "pseudospectra.csv"] {
        let x = std::fs::read(a.join(f)).unwrap();
        let y = std::fs::read(b.join(f)).unwrap();
        assert_eq!(x, y, "{f} differs");
    }
}

#[test]
fn seed_flag_overrides_config() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), SMALL_DISK);
    let out = tmp.path().join("o");
    let code = Command::new(BIN)
        .args(["spectrum", "--seed", "9"])
        .arg("--config")
        .arg(&cfg)
        .arg("--out")
        .arg(&out)
        .output()
        .unwrap()
        .status
        .code();
    assert_eq!(code, Some(0));
    let text = std::fs::read_to_string(out.join("spectrum.csv")).unwrap();
    assert!(text.contains("\"seed\":9"));
}

#[test]
fn failed_crosscheck_exits_with_4() {
    let tmp = tempfile::tempdir().unwrap();
    let text = format!("{SMALL_DISK}[strip]\nhalf_width = 1\ncrosscheck_tol = 1e-14\n");
    let cfg = write_config(tmp.path(), &text);
    assert_eq!(run(&["crosscheck"], &cfg, tmp.path()), 4);
    assert!(tmp.path().join("crosscheck.csv").exists());
    assert!(tmp.path().join("summary.json").exists());
}

#[test]
fn unconverged_spectrum_exits_with_3() {
    let tmp = tempfile::tempdir().unwrap();
    let text = format!("{SMALL_DISK}[eigen]\nm = 4\ntol = 1e-300\n");
    let cfg = write_config(tmp.path(), &text);
    assert_eq!(run(&["spectrum"], &cfg, tmp.path()), 3);
    assert!(rows(&tmp.path().join("spectrum.csv")).is_empty());
}
