use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use qdephase::experiment::{ResultTable, PRESETS};
use qdephase::revival::{detect_revivals, DEFAULT_PROMINENCE, FULL_REVIVAL_FLOOR};
use qdephase::{TimeGrid, Trace};

fn qdephase(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qdephase")).args(args).output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn table(dir: &Path, name: &str) -> ResultTable {
    ResultTable::from_csv(&fs::read_to_string(dir.join(format!("{name}.csv"))).unwrap()).unwrap()
}

fn trace(t: &ResultTable, column: &str) -> Trace {
    let times = t.column("t").unwrap();
    let grid = TimeGrid::new(*times.last().unwrap(), times.len()).unwrap();
    Trace::new(grid, t.column(column).unwrap())
}

fn meta(t: &ResultTable, key: &str) -> f64 {
    t.meta_value(key).unwrap().parse().unwrap()
}

#[test]
fn list_presets() {
    let out = qdephase(&["list-presets"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    for (name, _) in PRESETS {
        assert!(text.contains(name));
    }
}

#[test]
fn unknown_preset_lists_names() {
    let out = qdephase(&["preset", "fig9z"]);
    assert_eq!(code(&out), 2);
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("fig3c") && err.contains("grape"), "{err}");
}

fn write_config(dir: &Path, body: &str) -> String {
    let path = dir.join("exp.toml");
    fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn config_errors_exit_2_with_location() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "[experiment]\nkind = \"gamma\"\n\n[params]\nalpah = 0.5\n");
    let out = qdephase(&["run", &cfg]);
    assert_eq!(code(&out), 2);
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("alpah") && err.contains("line 5"), "{err}");

    let cfg = write_config(dir.path(), "[experiment]\nkind = \"coherence\"\n[params]\nalpha = 0.5\nomega0 = 0.1\nomega_j = 50\nt_max = 10\nmembers = 10\n");
    let out = qdephase(&["run", &cfg]);
    assert_eq!(code(&out), 2, "ensemble without seed");

    assert_eq!(code(&qdephase(&["run", "/nonexistent/exp.toml"])), 1, "unreadable file is an I/O error");
}

#[test]
fn domain_errors_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "[experiment]\nkind = \"gamma\"\n[params]\nalpha = 0.5\nomega0 = -0.1\nomega_j = 50\nt_max = 100\n",
    );
    let out = qdephase(&["run", &cfg, "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code(&out), 3);
    assert!(String::from_utf8(out.stderr).unwrap().contains("omega0"));
}

#[test]
fn runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let body = "[experiment]\nkind = \"coherence\"\nname = \"det\"\n[params]\nalpha = 0.5\nomega0 = 0.2514\nomega_j = 50\nomega_k = 0.1257\nbasis = \"x\"\nt_max = 100\nmembers = 50\nseed = 11\n[output]\nformat = \"csv\"\n";
    let cfg = write_config(dir.path(), body);
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    for out in [&a, &b] {
        let run = qdephase(&["run", &cfg, "--out", out.to_str().unwrap()]);
        assert_eq!(code(&run), 0, "{}", String::from_utf8_lossy(&run.stderr));
    }
    let first = fs::read(a.join("det.csv")).unwrap();
    assert_eq!(first, fs::read(b.join("det.csv")).unwrap());
    assert!(!first.contains(&b'\r'));
}

#[test]
fn json_mirrors_csv() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    assert_eq!(code(&qdephase(&["preset", "fig5b", "--out", d])), 0);
    assert_eq!(code(&qdephase(&["preset", "fig5b", "--out", d, "--format", "json"])), 0);
    let csv = table(dir.path(), "fig5b");
    let json = ResultTable::from_json(&fs::read_to_string(dir.path().join("fig5b.json")).unwrap()).unwrap();
    assert_eq!(csv.columns, json.columns);
    assert_eq!(csv.rows, json.rows);
    let strip = |t: &ResultTable| t.metadata.iter().filter(|(k, _)| k != "config.output.format").cloned().collect::<Vec<_>>();
    assert_eq!(strip(&csv), strip(&json));
}

#[test]
fn print_config_round_trips() {
    let out = qdephase(&["preset", "fig4d", "--print-config"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    let cfg = qdephase::experiment::ExperimentConfig::parse(&text).unwrap();
    assert_eq!(cfg, qdephase::experiment::preset("fig4d").unwrap());
}

/// Every preset runs and its output passes the matching module-level check.
#[test]
fn preset_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    for (name, _) in PRESETS {
        let out = qdephase(&["preset", name, "--out", d.to_str().unwrap()]);
        assert_eq!(code(&out), 0, "{name}: {}", String::from_utf8_lossy(&out.stderr));
    }

    for (name, expected) in [("fig2a", 0.0629), ("fig2b", 0.0314), ("fig2c", 0.0158)] {
        let t = table(d, name);
        assert!((meta(&t, "omega0_crit_numeric") - expected).abs() <= 1e-4, "{name}");
        let omega0 = t.column("omega0").unwrap();
        let measure = t.column("measure").unwrap();
        let first = omega0.iter().zip(&measure).find(|(_, n)| **n > 0.0).unwrap().0;
        assert!((first - expected).abs() <= 2e-4, "{name}: {first}");
    }

    let full = |name: &str, count: usize| {
        let t = table(d, name);
        let peaks = detect_revivals(&trace(&t, "coh_analytic"), FULL_REVIVAL_FLOOR, DEFAULT_PROMINENCE);
        assert_eq!(peaks.len(), count, "{name}");
        let cols = t.columns.clone();
        assert!(["t", "coh_analytic", "coh_mc"].iter().all(|c| cols.iter().any(|x| x == c)));
    };
    full("fig3c", 4);
    full("fig5b", 4);
    full("figA3a", 3);
    full("figA3b", 3);
    full("figA4a", 3);
    full("figA4b", 3);

    for (name, interior) in [("fig4a", false), ("fig4b", false), ("fig4c", true), ("fig4d", true)] {
        let peaks = detect_revivals(&trace(&table(d, name), "coh_analytic"), 0.0, DEFAULT_PROMINENCE);
        assert_eq!(peaks.iter().any(|p| !p.endpoint), interior, "{name}");
    }

    for name in ["fig6a", "fig6b"] {
        let t = table(d, &format!("{name}_threshold"));
        assert!(t.metadata.iter().filter(|(k, _)| k.starts_with("monotone")).all(|(_, v)| v == "true"));
    }

    let g = table(d, "grape");
    assert!(meta(&g, "fidelity") >= 0.999);
}
