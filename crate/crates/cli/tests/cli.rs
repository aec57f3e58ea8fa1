use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use sha2::{Digest, Sha256};

fn scene(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../scenes")
        .join(format!("{name}.toml"))
}

fn vispart(cmd: &str, scene: &Path, out: &Path, extra: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vispart"))
        .arg(cmd)
        .arg("--scene")
        .arg(scene)
        .arg("--out")
        .arg(out)
        .args(extra)
        .output()
        .unwrap()
}

fn read(path: &Path) -> String {
    std::fs::read_to_string(path).unwrap()
}

fn rows(csv: &str) -> Vec<Vec<String>> {
    csv.lines()
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn carpet_from_above_at_depth_one() {
    let dir = tempfile::tempdir().unwrap();
    let o = vispart("visible", &scene("carpet"), dir.path(), &["--depth", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let csv = read(&dir.path().join("visible.csv"));
    assert!(csv.starts_with("word,run_lo,run_hi,run_width\n"));
    let rows = rows(&csv);
    let words: Vec<&str> = rows.iter().map(|r| r[0].as_str()).collect();
    assert_eq!(words, ["6", "7", "8"]);
    for r in &rows {
        assert_eq!(r[3], "0.333333333333");
    }
}

#[test]
fn svg_has_every_layer_and_a_flat_envelope() {
    let dir = tempfile::tempdir().unwrap();
    let o = vispart(
        "visible",
        &scene("carpet"),
        dir.path(),
        &["--depth", "2", "--direction", "90"],
    );
    assert_eq!(o.status.code(), Some(0));
    let svg = read(&dir.path().join("visible.svg"));
    for id in ["hull", "cylinders", "visible", "envelope", "oracle"] {
        assert_eq!(svg.matches(&format!(r#"<g id="{id}""#)).count(), 1, "{id}");
    }
    // the carpet seen from above: every envelope vertex sits at height 1
    let env = svg
        .split(r#"<g id="envelope""#)
        .nth(1)
        .unwrap()
        .split("</g>")
        .next()
        .unwrap();
    let mut seen = 0;
    for points in env.split(r#"points=""#).skip(1) {
        for pair in points.split('"').next().unwrap().split_whitespace() {
            let y: f64 = pair.split(',').nth(1).unwrap().parse().unwrap();
            assert!((y - 1.0).abs() < 1e-12, "{pair}");
            seen += 1;
        }
    }
    assert!(seen >= 2);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(
        vispart("check", &scene("duplicate"), dir.path(), &[])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        vispart("check", &scene("corner_dust"), dir.path(), &[])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        vispart("visible", &scene("corner_dust"), dir.path(), &[])
            .status
            .code(),
        Some(2)
    );
    assert!(!dir.path().join("visible.csv").exists());
    let forced = vispart("visible", &scene("corner_dust"), dir.path(), &["--force"]);
    assert_eq!(forced.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&forced.stderr).contains("projection_interval"));
    assert!(dir.path().join("visible.csv").exists());
    let missing = vispart("check", &dir.path().join("nope.toml"), dir.path(), &[]);
    assert_eq!(missing.status.code(), Some(1));
}

#[test]
fn invalid_scene_reports_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.toml");
    std::fs::write(
        &path,
        "name = \"bad\"\n[builtin.carpet]\n[run]\ndirections = 0\n",
    )
    .unwrap();
    let o = vispart("dim", &path, dir.path(), &[]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("directions"));
    std::fs::write(&path, "name = \"bad\"\n[[maps]]\nscale = 0.5\ncolour = 1\n").unwrap();
    let o = vispart("check", &path, dir.path(), &[]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr)
        .contains("bad.toml:4:1: parse error: unknown field `colour`"));
}

#[test]
fn bounds_table_decreases() {
    let dir = tempfile::tempdir().unwrap();
    let o = vispart("bounds", &scene("carpet"), dir.path(), &[]);
    assert_eq!(o.status.code(), Some(0));
    let csv = read(&dir.path().join("bounds.csv"));
    assert!(csv.starts_with("delta,q,lambda,K,component1,component2,bound\n"));
    let rows = rows(&csv);
    assert_eq!(rows.len(), 7);
    assert_eq!(rows[0][0], "0.01");
    assert_eq!(rows[6][0], "1e-08");
    let bound: Vec<f64> = rows.iter().map(|r| r[6].parse().unwrap()).collect();
    assert!(bound.windows(2).all(|w| w[1] < w[0]));
    // r_min component at delta = 1e-6 is 1 + ln 3 / ln 1e6
    let c2: f64 = rows[4][5].parse().unwrap();
    assert!((c2 - (1.0 + 3f64.ln() / 1e6f64.ln())).abs() < 1e-11);
}

#[test]
fn manifest_hashes_match_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let o = vispart(
        "render",
        &scene("sierpinski"),
        dir.path(),
        &["--direction", "45", "--png"],
    );
    assert_eq!(o.status.code(), Some(0));
    let m: serde_json::Value =
        serde_json::from_str(&read(&dir.path().join("manifest-render.json"))).unwrap();
    assert_eq!(m["command"], "render");
    let outputs = m["outputs"].as_array().unwrap();
    assert_eq!(outputs.len(), 2);
    for rec in outputs {
        let bytes = std::fs::read(dir.path().join(rec["path"].as_str().unwrap())).unwrap();
        assert_eq!(
            rec["sha256"].as_str().unwrap(),
            hex::encode(Sha256::digest(&bytes))
        );
    }
    let png = std::fs::read(dir.path().join("render.png")).unwrap();
    assert_eq!(&png[..8], b"\x89PNG\r\n\x1a\n");
}

#[test]
fn forced_dim_records_failed_checks() {
    let dir = tempfile::tempdir().unwrap();
    let o = vispart("dim", &scene("corner_dust"), dir.path(), &["--force"]);
    assert_eq!(o.status.code(), Some(0));
    let m: serde_json::Value =
        serde_json::from_str(&read(&dir.path().join("manifest-dim.json"))).unwrap();
    assert_eq!(m["checks"]["projection_interval"], false);
    assert_eq!(m["checks"]["forced"], true);
    let csv = read(&dir.path().join("dim.csv"));
    assert!(csv.starts_with("direction_deg,cover_slope,oracle_slope,r2,bound_delta,bound_value\n"));
    assert_eq!(rows(&csv).len(), 16);
}

#[test]
fn seeded_random_directions_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("koch.toml");
    let text = read(&scene("koch")).replace("[run]", "[run]\nrandom_directions = true");
    std::fs::write(&path, text).unwrap();
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    let c = dir.path().join("c");
    for (out, seed) in [(&a, "3"), (&b, "3"), (&c, "4")] {
        assert_eq!(
            vispart("dim", &path, out, &["--seed", seed]).status.code(),
            Some(0)
        );
    }
    let (a, b, c) = (
        read(&a.join("dim.csv")),
        read(&b.join("dim.csv")),
        read(&c.join("dim.csv")),
    );
    assert_eq!(a, b);
    assert_ne!(a, c);
}
