//! Detection of inputs that break general position.

use super::{approx_point, voronoi, VoronoiOptions};
use crate::conversions::unit_klein;
use crate::models::{validate_point, ModelPoint, ModelTag, MEMBERSHIP_TOLERANCE};
use crate::Result;

/// Relative tolerance used by every test in [`detect_degeneracies`].
pub const DEGENERACY_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Default)]
pub struct DegeneracyReport {
    /// Sites on a common hyperbolic sphere (more than `d + 1` at one dual vertex).
    pub cocircular_groups: Vec<Vec<usize>>,
    /// At least three sites on one geodesic.
    pub collinear_groups: Vec<Vec<usize>>,
    /// At least `d + 2` sites at the same distance from the chart origin.
    pub equal_norm_groups: Vec<Vec<usize>>,
    /// Upper half-space: at least `d + 2` sites at the same height.
    pub equal_height_groups: Vec<Vec<usize>>,
    pub tolerance: f64,
    pub notes: Vec<String>,
}

impl DegeneracyReport {
    pub fn is_empty(&self) -> bool {
        self.cocircular_groups.is_empty()
            && self.collinear_groups.is_empty()
            && self.equal_norm_groups.is_empty()
            && self.equal_height_groups.is_empty()
    }
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= DEGENERACY_TOLERANCE * a.abs().max(b.abs())
}

/// Runs of (chained) equal values with at least `min` members.
fn equal_value_groups(values: &[f64], min: usize) -> Vec<Vec<usize>> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
    let mut groups = Vec::new();
    let mut run: Vec<usize> = Vec::new();
    for i in order {
        if run.last().is_some_and(|&l| !close(values[l], values[i])) {
            groups.push(std::mem::take(&mut run));
        }
        run.push(i);
    }
    groups.push(run);
    groups
        .into_iter()
        .filter(|g| g.len() >= min)
        .map(|mut g| {
            g.sort_unstable();
            g
        })
        .collect()
}

fn collinear_groups(k: &[Vec<f64>]) -> Vec<Vec<usize>> {
    let n = k.len();
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let u: Vec<f64> = k[j].iter().zip(&k[i]).map(|(a, b)| a - b).collect();
            let uu: f64 = u.iter().map(|x| x * x).sum();
            let group: Vec<usize> = (0..n)
                .filter(|&m| {
                    if m == i || m == j {
                        return true;
                    }
                    let v: Vec<f64> = k[m].iter().zip(&k[i]).map(|(a, b)| a - b).collect();
                    let vv: f64 = v.iter().map(|x| x * x).sum();
                    let uv: f64 = u.iter().zip(&v).map(|(a, b)| a * b).sum();
                    // Gram determinant of (u, v)
                    uu * vv - uv * uv <= DEGENERACY_TOLERANCE * uu * vv
                })
                .collect();
            if group.len() >= 3 && !groups.iter().any(|g| group.iter().all(|m| g.contains(m))) {
                groups.push(group);
            }
        }
    }
    groups
}

/// Reports equal-norm, equal-height, co-spherical and collinear groups.
/// All tests run in floating point on the unit Klein chart.
pub fn detect_degeneracies<T: crate::Scalar>(points: &[ModelPoint<T>]) -> Result<DegeneracyReport> {
    let mut report = DegeneracyReport {
        tolerance: DEGENERACY_TOLERANCE,
        ..Default::default()
    };
    let Some(first) = points.first() else {
        return Ok(report);
    };
    let pts = points
        .iter()
        .enumerate()
        .map(|(i, p)| {
            validate_point(p, MEMBERSHIP_TOLERANCE).map_err(|e| e.at(i))?;
            approx_point(p).map_err(|e| e.at(i))
        })
        .collect::<Result<Vec<_>>>()?;
    let d = first.dimension();
    let klein = pts
        .iter()
        .enumerate()
        .map(|(i, p)| unit_klein(p).map_err(|e| e.at(i)))
        .collect::<Result<Vec<_>>>()?;

    if first.model() == ModelTag::UpperHalfSpace {
        let heights: Vec<f64> = pts.iter().map(|p| p.coords()[d - 1]).collect();
        report.equal_height_groups = equal_value_groups(&heights, d + 2);
    } else {
        let norms: Vec<f64> = klein.iter().map(|k| k.iter().map(|x| x * x).sum()).collect();
        report.equal_norm_groups = equal_value_groups(&norms, d + 2);
    }
    report.collinear_groups = collinear_groups(&klein);

    if (2..=3).contains(&d) {
        let chart: Vec<ModelPoint<f64>> = klein
            .iter()
            .map(|k| ModelPoint::unit(ModelTag::Klein, k.clone()))
            .collect();
        match voronoi(&chart, &VoronoiOptions::default()) {
            Ok(v) => {
                report.cocircular_groups = v
                    .complex
                    .power_vertices
                    .iter()
                    .filter(|pv| pv.inside_clip && pv.is_degenerate(d))
                    .map(|pv| pv.sites.clone())
                    .collect();
            }
            Err(e) => report.notes.push(format!("co-spherical test skipped: {e}")),
        }
    } else {
        report
            .notes
            .push(format!("co-spherical test needs explicit geometry, skipped for d = {d}"));
    }
    Ok(report)
}
