mod common;

use std::path::Path;

use common::*;
use tempfile::TempDir;

fn compute_to(dir: &TempDir, input: &Path, name: &str, extra: &[&str]) -> std::path::PathBuf {
    let out = dir.path().join(name);
    let mut args = vec!["compute".as_ref(), input.as_os_str(), "-o".as_ref(), out.as_os_str()];
    args.extend(extra.iter().map(|s| std::ffi::OsStr::new(*s)));
    let o = hvd(&args);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    out
}

fn assert_one_error_line(o: &std::process::Output, code: i32, kind: &str) {
    assert_eq!(o.status.code(), Some(code), "{}", stderr(o));
    let err = stderr(o);
    assert_eq!(err.lines().count(), 1, "{err}");
    assert!(err.starts_with(&format!("hvd: error[{kind}]: ")), "{err}");
}

fn seed_fixture(dir: &TempDir) -> std::path::PathBuf {
    let p = dir.path().join("seed42.json");
    std::fs::write(&p, point_set_json(&seeded_klein(42, 16, 2), 2, "klein")).unwrap();
    p
}

#[test]
fn version_and_help() {
    let o = hvd(["--version"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("hvd "));
    let o = hvd(["--help"]);
    assert_eq!(o.status.code(), Some(0));
    for cmd in ["compute", "convert", "delaunay", "render", "check"] {
        assert!(stdout(&o).contains(cmd));
    }
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(hvd(Vec::<&str>::new()).status.code(), Some(2));
    let o = hvd(["compute", "--frobnicate", "x.json"]);
    assert_one_error_line(&o, 2, "parse");
    let o = hvd(["convert", fixture("triangle.json").to_str().unwrap(), "--to", "sphere"]);
    assert_one_error_line(&o, 2, "parse");
}

#[test]
fn error_exit_codes() {
    let run = |name: &str| hvd(["compute", fixture(name).to_str().unwrap()]);
    assert_one_error_line(&run("bad_arity.json"), 2, "parse");
    let o = run("outside.json");
    assert_one_error_line(&o, 3, "domain");
    assert!(stderr(&o).contains("point 1"));
    assert_one_error_line(&run("four_d.json"), 4, "dimension");
    assert_one_error_line(&run("duplicate.json"), 6, "duplicate");
    assert_one_error_line(&run("does_not_exist.json"), 7, "io");

    let dir = TempDir::new().unwrap();
    let garbage = dir.path().join("garbage.json");
    std::fs::write(&garbage, "{ not json").unwrap();
    assert_one_error_line(&hvd(["compute", garbage.to_str().unwrap()]), 2, "parse");

    let o = hvd(["convert", fixture("klein_exact.json").to_str().unwrap(), "--to", "poincare"]);
    assert_one_error_line(&o, 5, "sqrt");
    assert!(stderr(&o).contains("square root"));
}

#[test]
fn implicit_mode_accepts_any_dimension() {
    let o = hvd(["compute", fixture("four_d.json").to_str().unwrap(), "--implicit"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["explicit"], false);
    assert_eq!(doc["cells"].as_array().unwrap().len(), 6);
    assert!(doc.get("delaunay").is_none());
}

#[test]
fn two_sites_give_one_diameter() {
    let o = hvd(["compute", fixture("two_sites.json").to_str().unwrap()]);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let b = doc["boundaries"].as_array().unwrap();
    assert_eq!(b.len(), 1);
    assert_eq!(b[0]["class"], "hyperplane-through-origin");
    assert_eq!(b[0]["b"].as_f64(), Some(0.0));
}

#[test]
fn ring_fixture_dual_is_a_star() {
    let o = hvd(["delaunay", fixture("ring.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let dt: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(dt["is_triangulation"], false);
    let edges = dt["edges"].as_array().unwrap();
    assert_eq!(edges.len(), 8);
    assert!(edges.iter().all(|e| e[0] == 0));
}

#[test]
fn delaunay_examples() {
    let faces = |name: &str| -> serde_json::Value {
        let o = hvd(["delaunay", fixture(name).to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        serde_json::from_str(&stdout(&o)).unwrap()
    };
    let t = faces("triangle.json");
    assert_eq!(t["faces"], serde_json::json!([[0, 1, 2]]));
    assert_eq!(t["is_triangulation"], true);
    let q = faces("square.json");
    assert_eq!(q["faces"], serde_json::json!([[0, 1, 2, 3]]));
    assert_eq!(q["is_triangulation"], false);

    // a diagram document answers from its stored section
    let dir = TempDir::new().unwrap();
    let diagram = compute_to(&dir, &fixture("square.json"), "square.diagram.json", &[]);
    let o = hvd(["delaunay", diagram.to_str().unwrap()]);
    let from_doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(from_doc, q);
}

#[test]
fn seed_fixture_verifies() {
    let dir = TempDir::new().unwrap();
    let input = seed_fixture(&dir);
    let out = compute_to(&dir, &input, "seed.diagram.json", &["--verify", "10000", "--seed", "42"]);
    let doc = read_value(&out);
    assert_eq!(doc["verification"]["agreement_rate"].as_f64(), Some(1.0));
    assert_eq!(doc["verification"]["disagreements"].as_u64(), Some(0));
    assert_eq!(doc["verification"]["samples"].as_u64(), Some(10000));
}

#[test]
fn check_command() {
    let o = hvd(["check", fixture("one_site.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).starts_with("PASS\n"));
    assert!(!stdout(&o).contains('\x1b'));

    let dir = TempDir::new().unwrap();
    let input = seed_fixture(&dir);
    let o = hvd(["check", input.to_str().unwrap(), "--samples", "10000", "--seed", "42"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("agreement rate: 1.000000"));

    let diagram = compute_to(&dir, &input, "seed.diagram.json", &[]);
    let o = hvd(["check", diagram.to_str().unwrap(), "--samples", "2000"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
}

#[test]
fn corrupted_diagram_fails_check_with_witness() {
    let dir = TempDir::new().unwrap();
    let diagram = compute_to(&dir, &fixture("triangle.json"), "t.json", &[]);
    let mut doc = read_value(&diagram);
    let cells = doc["cells"].as_array_mut().unwrap();
    let first = cells[0]["halfspaces"].take();
    cells[0]["halfspaces"] = cells[1]["halfspaces"].take();
    cells[1]["halfspaces"] = first;
    let corrupted = dir.path().join("corrupted.json");
    std::fs::write(&corrupted, serde_json::to_string_pretty(&doc).unwrap()).unwrap();

    let o = hvd(["check", corrupted.to_str().unwrap(), "--samples", "1000"]);
    assert_one_error_line(&o, 1, "check");
    let report = stdout(&o);
    assert!(report.starts_with("FAIL\n"));
    assert!(report.contains("witness: point"));
}

#[test]
fn convert_examples() {
    let o = hvd(["convert", fixture("convert_klein.json").to_str().unwrap(), "--to", "hyperboloid"]);
    assert_eq!(o.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let p: Vec<f64> = doc["points"][0].as_array().unwrap().iter().map(|v| v.as_f64().unwrap()).collect();
    for (got, want) in p.iter().zip([1.25, 0.75, 0.0]) {
        assert!((got - want).abs() < 1e-12, "{p:?}");
    }

    let dir = TempDir::new().unwrap();
    let exact_in = dir.path().join("exact.json");
    std::fs::write(
        &exact_in,
        r#"{"dimension": 2, "scalar": "exact-rational", "points": [["3/5", "0"]]}"#,
    )
    .unwrap();
    let o = hvd(["convert", exact_in.to_str().unwrap(), "--to", "hyperboloid"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["points"], serde_json::json!([["5/4", "3/4", "0"]]));

    // the hemisphere ↔ Klein leg needs no square roots
    let o = hvd(["convert", fixture("hemisphere_point.json").to_str().unwrap(), "--to", "klein"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
}

#[test]
fn identity_conversion_keeps_points_verbatim() {
    let input = fixture("ring.json");
    let o = hvd(["convert", input.to_str().unwrap(), "--to", "klein"]);
    assert_eq!(o.status.code(), Some(0));
    let out: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let raw = std::fs::read_to_string(&input).unwrap();
    let orig: serde_json::Value = serde_json::from_str(&raw).unwrap();
    assert_eq!(
        serde_json::to_string(&out["points"]).unwrap(),
        serde_json::to_string(&orig["points"]).unwrap()
    );
}

#[test]
fn klein_poincare_round_trip() {
    let dir = TempDir::new().unwrap();
    let pts = seeded_klein(7, 50, 3);
    let input = dir.path().join("k.json");
    std::fs::write(&input, point_set_json(&pts, 3, "klein")).unwrap();
    let mid = dir.path().join("p.json");
    let back = dir.path().join("k2.json");
    assert_eq!(
        hvd(["convert", input.to_str().unwrap(), "--to", "poincare", "-o", mid.to_str().unwrap()]).status.code(),
        Some(0)
    );
    assert_eq!(
        hvd(["convert", mid.to_str().unwrap(), "--to", "klein", "-o", back.to_str().unwrap()]).status.code(),
        Some(0)
    );
    let doc = read_value(&back);
    for (row, p) in doc["points"].as_array().unwrap().iter().zip(&pts) {
        for (v, x) in row.as_array().unwrap().iter().zip(p) {
            assert!((v.as_f64().unwrap() - x).abs() < 1e-12);
        }
    }
}

#[test]
fn compute_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let input = seed_fixture(&dir);
    let a = hvd(["compute", input.to_str().unwrap()]);
    let b = hvd(["compute", input.to_str().unwrap()]);
    assert_eq!(a.stdout, b.stdout);
    let a = hvd(["compute", fixture("wheel.json").to_str().unwrap(), "--route", "hemisphere"]);
    let b = hvd(["compute", fixture("wheel.json").to_str().unwrap(), "--route", "hemisphere"]);
    assert_eq!(a.status.code(), Some(0), "{}", stderr(&a));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn model_and_curvature_overrides() {
    let dir = TempDir::new().unwrap();
    let input = fixture("triangle.json");
    let k = read_value(&compute_to(&dir, &input, "k.json", &[]));
    let u = read_value(&compute_to(&dir, &input, "u.json", &["--model", "upper"]));
    assert_eq!(u["input"]["model"], "upper");
    assert_eq!(adjacency(&k), adjacency(&u));
    let c = read_value(&compute_to(&dir, &input, "c.json", &["--curvature", "-4"]));
    assert_eq!(c["input"]["curvature"].as_f64(), Some(-4.0));
}

/// Exact output is platform independent, so it is compared byte for byte.
/// `HVD_BLESS=1` rewrites the golden file.
#[test]
fn wheel_golden_document() {
    let o = hvd(["compute", fixture("wheel.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let golden = fixture("golden/wheel.diagram.json");
    if std::env::var_os("HVD_BLESS").is_some() {
        std::fs::create_dir_all(golden.parent().unwrap()).unwrap();
        std::fs::write(&golden, &o.stdout).unwrap();
    }
    let want = std::fs::read_to_string(&golden).expect("golden file present");
    assert_eq!(stdout(&o), want);
    let doc: serde_json::Value = serde_json::from_str(&want).unwrap();
    for b in doc["boundaries"].as_array().unwrap() {
        assert_eq!(b["b"], "0");
    }
}

fn render(dir: &TempDir, diagram: &Path, model: &str, extra: &[&str]) -> String {
    let out = dir.path().join(format!("{model}.svg"));
    let mut args = vec![
        "render".as_ref(),
        diagram.as_os_str(),
        "--model".as_ref(),
        model.as_ref(),
        "-o".as_ref(),
        out.as_os_str(),
    ];
    args.extend(extra.iter().map(|s| std::ffi::OsStr::new(*s)));
    let o = hvd(&args);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    std::fs::read_to_string(out).unwrap()
}

fn numbers(d: &str) -> Vec<f64> {
    d.split_whitespace().filter_map(|t| t.parse().ok()).collect()
}

#[test]
fn two_sites_render_as_one_chord() {
    let dir = TempDir::new().unwrap();
    let diagram = compute_to(&dir, &fixture("two_sites.json"), "d.json", &[]);
    let svg = render(&dir, &diagram, "klein", &[]);
    assert!(svg.starts_with("<?xml"));
    assert!(svg.contains(r#"version="1.1""#));
    assert!(svg.trim_end().ends_with("</svg>"));
    let paths = svg_paths(&svg);
    assert_eq!(paths.len(), 1);
    assert!(paths[0].1.contains(" L ") && !paths[0].1.contains(" A "));
}

#[test]
fn wheel_chords_pass_through_center() {
    let dir = TempDir::new().unwrap();
    let diagram = compute_to(&dir, &fixture("wheel.json"), "d.json", &[]);
    for model in ["klein", "poincare"] {
        let svg = render(&dir, &diagram, model, &[]);
        let paths = svg_paths(&svg);
        assert_eq!(paths.len(), 8);
        for (_, d) in paths {
            let v = numbers(&d);
            let (a, b) = ([v[0], v[1]], [v[2], v[3]]);
            // distance from (400, 400) to the line through a and b
            let e = [b[0] - a[0], b[1] - a[1]];
            let dist = ((400.0 - a[0]) * e[1] - (400.0 - a[1]) * e[0]).abs() / e[0].hypot(e[1]);
            assert!(dist < 0.5, "{model}: {d} misses the centre by {dist}");
        }
    }
}

/// Centre, radius, start angle and signed sweep of an SVG arc
/// `M x1 y1 A r r 0 0 sweep x2 y2` (circle, no rotation).
fn arc_geometry(d: &str) -> ([f64; 2], f64, f64, f64) {
    let v = numbers(d);
    let (x1, y1, mut r, sweep, x2, y2) = (v[0], v[1], v[2], v[6], v[7], v[8]);
    let (hx, hy) = ((x1 - x2) / 2.0, (y1 - y2) / 2.0);
    let h2 = hx * hx + hy * hy;
    r = r.max(h2.sqrt());
    let sign = if sweep == 1.0 { 1.0 } else { -1.0 };
    let coef = sign * ((r * r - h2).max(0.0) / h2).sqrt();
    let c = [coef * hy + (x1 + x2) / 2.0, -coef * hx + (y1 + y2) / 2.0];
    let t1 = (y1 - c[1]).atan2(x1 - c[0]);
    let t2 = (y2 - c[1]).atan2(x2 - c[0]);
    let mut dt = t2 - t1;
    if sweep == 1.0 && dt < 0.0 {
        dt += std::f64::consts::TAU;
    }
    if sweep == 0.0 && dt > 0.0 {
        dt -= std::f64::consts::TAU;
    }
    (c, r, t1, dt)
}

/// Whether `p` lies on the drawn arc within `tol` pixels.
fn on_arc(d: &str, p: [f64; 2], tol: f64) -> bool {
    let (c, r, t1, dt) = arc_geometry(d);
    let radial = ((p[0] - c[0]).hypot(p[1] - c[1]) - r).abs();
    let mut t = (p[1] - c[1]).atan2(p[0] - c[0]) - t1;
    if dt > 0.0 {
        t = t.rem_euclid(std::f64::consts::TAU);
    } else {
        t = -(-t).rem_euclid(std::f64::consts::TAU);
    }
    radial < tol && t / dt >= 0.0 && t / dt <= 1.0
}

#[test]
fn poincare_arcs_bend_through_the_geodesic() {
    let dir = TempDir::new().unwrap();
    let diagram = compute_to(&dir, &fixture("triangle.json"), "d.json", &[]);
    let doc = read_value(&diagram);
    let svg = render(&dir, &diagram, "poincare", &[]);
    let paths = svg_paths(&svg);
    assert_eq!(paths.len(), 3);
    for ((i, j), d) in paths {
        assert!(d.contains(" A "), "{d}");
        let b = doc["boundaries"]
            .as_array()
            .unwrap()
            .iter()
            .find(|b| b["sites"] == serde_json::json!([i, j]))
            .unwrap();
        let seg = &b["segment"];
        let m = [
            (seg[0][0].as_f64().unwrap() + seg[1][0].as_f64().unwrap()) / 2.0,
            (seg[0][1].as_f64().unwrap() + seg[1][1].as_f64().unwrap()) / 2.0,
        ];
        let s = 1.0 + (1.0 - m[0] * m[0] - m[1] * m[1]).sqrt();
        let want = [400.0 + 360.0 * m[0] / s, 400.0 - 360.0 * m[1] / s];
        assert!(on_arc(&d, want, 0.5), "{d} misses {want:?}");
    }
}

#[test]
fn polyline_rendering() {
    let dir = TempDir::new().unwrap();
    let diagram = compute_to(&dir, &fixture("triangle.json"), "d.json", &[]);
    let svg = render(&dir, &diagram, "upper", &["--samples-per-arc", "16"]);
    for (_, d) in svg_paths(&svg) {
        assert_eq!(d.matches(" L ").count(), 16);
    }
}

#[test]
fn render_adjacency_matches_across_models() {
    let dir = TempDir::new().unwrap();
    let input = seed_fixture(&dir);
    let diagram = compute_to(&dir, &input, "d.json", &[]);
    let mut want = adjacency(&read_value(&diagram));
    want.sort();
    for model in ["klein", "poincare", "upper"] {
        assert_eq!(svg_adjacency(&render(&dir, &diagram, model, &[])), want, "{model}");
    }
}

#[test]
fn render_rejects_other_models_and_dimensions() {
    let dir = TempDir::new().unwrap();
    let diagram = compute_to(&dir, &fixture("triangle.json"), "d.json", &[]);
    let out = dir.path().join("x.svg");
    let o = hvd(["render", diagram.to_str().unwrap(), "--model", "hyperboloid", "-o", out.to_str().unwrap()]);
    assert_one_error_line(&o, 2, "parse");

    let d4 = compute_to(&dir, &fixture("four_d.json"), "d4.json", &["--implicit"]);
    let o = hvd(["render", d4.to_str().unwrap(), "-o", out.to_str().unwrap()]);
    assert_one_error_line(&o, 4, "dimension");
}
