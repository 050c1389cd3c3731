#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

pub fn hvd<I, S>(args: I) -> Output
where
    I: IntoIterator<Item = S>,
    S: AsRef<std::ffi::OsStr>,
{
    Command::new(env!("CARGO_BIN_EXE_hvd"))
        .args(args)
        .env("NO_COLOR", "1")
        .output()
        .expect("hvd runs")
}

pub fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8 stdout")
}

pub fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).expect("utf-8 stderr")
}

/// `n` points uniform in the Klein ball of radius `sqrt(0.9)`, from `seed`.
pub fn seeded_klein(seed: u64, n: usize, d: usize) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| loop {
            let p: Vec<f64> = (0..d).map(|_| rng.random_range(-0.95..0.95)).collect();
            if p.iter().map(|x| x * x).sum::<f64>() < 0.9 {
                break p;
            }
        })
        .collect()
}

pub fn point_set_json(points: &[Vec<f64>], dimension: usize, model: &str) -> String {
    let doc = serde_json::json!({
        "dimension": dimension,
        "curvature": -1,
        "model": model,
        "scalar": "float64",
        "points": points,
    });
    serde_json::to_string_pretty(&doc).unwrap() + "\n"
}

/// `{"a": ..}` document as loosely typed JSON.
pub fn read_value(path: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

pub fn adjacency(doc: &serde_json::Value) -> Vec<(usize, usize)> {
    doc["adjacency"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| (e[0].as_u64().unwrap() as usize, e[1].as_u64().unwrap() as usize))
        .collect()
}

/// Pairs named by `data-sites="i-j"` attributes, sorted.
pub fn svg_adjacency(svg: &str) -> Vec<(usize, usize)> {
    let mut out: Vec<(usize, usize)> = svg
        .split("data-sites=\"")
        .skip(1)
        .map(|rest| {
            let tag = &rest[..rest.find('"').unwrap()];
            let (i, j) = tag.split_once('-').unwrap();
            (i.parse().unwrap(), j.parse().unwrap())
        })
        .collect();
    out.sort();
    out
}

/// `d` attributes of the boundary paths, keyed by site pair.
pub fn svg_paths(svg: &str) -> Vec<((usize, usize), String)> {
    svg.lines()
        .filter(|l| l.contains("data-sites=\""))
        .map(|l| {
            let tag = l.split("data-sites=\"").nth(1).unwrap();
            let tag = &tag[..tag.find('"').unwrap()];
            let (i, j) = tag.split_once('-').unwrap();
            let d = l.split(" d=\"").nth(1).unwrap();
            ((i.parse().unwrap(), j.parse().unwrap()), d[..d.find('"').unwrap()].to_string())
        })
        .collect()
}
