//! Sampling oracle: compares cell membership with exhaustive nearest-site search.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{approx_point, nearest_site, VoronoiDiagram};
use crate::conversions::ConversionPath;
use crate::models::{distance, ModelPoint, ModelTag};
use crate::power::Halfspace;
use crate::{Result, Scalar};

/// Samples whose cell margin is below this are not compared.
pub const DEFAULT_BAND: f64 = 1e-7;

#[derive(Debug, Clone, PartialEq)]
pub struct Witness {
    /// Sample in the unit Klein chart.
    pub chart_point: Vec<f64>,
    /// Sample in the diagram's model.
    pub point: Vec<f64>,
    /// Cell claiming the sample, if exactly one does.
    pub diagram_label: Option<usize>,
    pub nearest: usize,
    pub gap: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub samples: usize,
    pub seed: u64,
    pub band: f64,
    pub compared: usize,
    pub excluded: usize,
    pub agreements: usize,
    pub disagreements: usize,
    /// `agreements / compared` (1 when nothing was compared).
    pub agreement_rate: f64,
    /// Largest `d(x, claimed site) − d(x, nearest site)` over disagreements.
    pub max_gap: f64,
    /// First disagreement, by sample index.
    pub witness: Option<Witness>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.disagreements == 0
    }
}

/// Sample `index` of the stream `seed`: uniform in the open unit ball of dimension `d`.
pub fn sample_chart(d: usize, seed: u64, index: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    loop {
        let x: Vec<f64> = (0..d).map(|_| rng.random_range(-1.0..1.0)).collect();
        if x.iter().map(|v| v * v).sum::<f64>() < 1.0 {
            return x;
        }
    }
}

/// Per-cell score `max_h ⟨n_h, x⟩ + o_h` over unit-normalised halfspaces
/// (`-∞` for a cell without constraints). Returns the best and second-best
/// `(cell, score)` by lowest score.
pub fn cell_label(cells: &[Vec<Halfspace<f64>>], x: &[f64]) -> ((usize, f64), Option<(usize, f64)>) {
    let mut best: Option<(usize, f64)> = None;
    let mut second: Option<(usize, f64)> = None;
    for (i, hs) in cells.iter().enumerate() {
        let score = hs
            .iter()
            .map(|h| h.normalized_evaluate(x))
            .fold(f64::NEG_INFINITY, f64::max);
        match best {
            Some((_, b)) if score >= b => {
                if second.is_none_or(|(_, s)| score < s) {
                    second = Some((i, score));
                }
            }
            _ => {
                second = best;
                best = Some((i, score));
            }
        }
    }
    (best.unwrap_or((0, f64::NEG_INFINITY)), second)
}

enum Outcome {
    Excluded,
    Agree,
    Disagree(Witness),
}

/// Checks `cells` (halfspaces in the unit Klein chart) against `sites`.
///
/// A sample is claimed by a cell when that cell's score is at most `-band`.
/// Samples whose best score lies in `(-band, band)` are excluded; a sample
/// that no cell claims, or that two cells claim, is a disagreement.
pub fn verify_cells(
    sites: &[ModelPoint<f64>],
    cells: &[Vec<Halfspace<f64>>],
    samples: usize,
    seed: u64,
    band: f64,
) -> Result<VerificationReport> {
    let Some(first) = sites.first() else {
        return Err(crate::Error::EmptySites);
    };
    let model = first.model();
    let curvature = first.curvature().clone();
    let d = first.dimension();
    let path = ConversionPath::new(ModelTag::Klein, model);
    let outcomes = (0..samples as u64)
        .into_par_iter()
        .map(|index| -> Result<Outcome> {
            let x = sample_chart(d, seed, index);
            let ((label, score), second) = cell_label(cells, &x);
            if score.abs() < band {
                return Ok(Outcome::Excluded);
            }
            let unit = match path.apply_unit(&x) {
                Ok(u) => u,
                Err(_) => return Ok(Outcome::Excluded),
            };
            let q = ModelPoint::from_unit_coords(model, unit, curvature.clone())?;
            let near = nearest_site(&q, sites)?;
            let claimed = score <= -band && second.is_none_or(|(_, s)| s > -band);
            if claimed && near.ties.contains(&label) {
                return Ok(Outcome::Agree);
            }
            let gap = distance(&q, &sites[label])? - distance(&q, &sites[near.index])?;
            Ok(Outcome::Disagree(Witness {
                chart_point: x,
                point: q.into_coords(),
                diagram_label: claimed.then_some(label),
                nearest: near.index,
                gap,
            }))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut report = VerificationReport {
        samples,
        seed,
        band,
        compared: 0,
        excluded: 0,
        agreements: 0,
        disagreements: 0,
        agreement_rate: 1.0,
        max_gap: 0.0,
        witness: None,
    };
    for o in outcomes {
        match o {
            Outcome::Excluded => report.excluded += 1,
            Outcome::Agree => {
                report.compared += 1;
                report.agreements += 1;
            }
            Outcome::Disagree(w) => {
                report.compared += 1;
                report.disagreements += 1;
                report.max_gap = report.max_gap.max(w.gap);
                if report.witness.is_none() {
                    report.witness = Some(w);
                }
            }
        }
    }
    if report.compared > 0 {
        report.agreement_rate = report.agreements as f64 / report.compared as f64;
    }
    Ok(report)
}

pub fn verify_with_band<T: Scalar>(
    diagram: &VoronoiDiagram<T>,
    samples: usize,
    seed: u64,
    band: f64,
) -> Result<VerificationReport> {
    let sites = diagram.sites.iter().map(approx_point).collect::<Result<Vec<_>>>()?;
    let cells: Vec<Vec<Halfspace<f64>>> = diagram
        .complex
        .cells
        .iter()
        .map(|c| c.halfspaces.iter().map(|h| h.halfspace.to_f64()).collect())
        .collect();
    verify_cells(&sites, &cells, samples, seed, band)
}

/// [`verify_with_band`] with [`DEFAULT_BAND`].
pub fn verify<T: Scalar>(diagram: &VoronoiDiagram<T>, samples: usize, seed: u64) -> Result<VerificationReport> {
    verify_with_band(diagram, samples, seed, DEFAULT_BAND)
}
