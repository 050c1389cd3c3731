//! Hyperbolic Voronoi diagrams through an affine chart.
//!
//! Sites are moved to the unit Klein ball (directly, or through the
//! hemisphere and its vertical projection), mapped to weighted sites, and
//! the power diagram clipped to the unit ball is the hyperbolic diagram in
//! that chart. Bisectors are then carried back to the input model.

mod degeneracy;
mod delaunay;
mod verify;

use std::fmt;
use std::str::FromStr;

pub use degeneracy::{detect_degeneracies, DegeneracyReport};
pub use delaunay::{delaunay, DelaunayComplex, DelaunayFace};
pub use verify::{
    cell_label, sample_chart, verify, verify_cells, verify_with_band, VerificationReport, Witness, DEFAULT_BAND,
};

use crate::bisectors::{klein_hyperplane_in, ImplicitSurface, SurfaceClass};
use crate::conversions::{drop_b_to_k, unit_hemisphere, unit_klein};
use crate::models::{check_pair, distance, validate_point, Curvature, ModelPoint, ModelTag, MEMBERSHIP_TOLERANCE};
use crate::power::{
    build_complex, hemisphere_site_from_unit, klein_site_from_unit, Ball, BuildOptions, CellGeometry, EdgeLabel,
    Location, PowerComplex, WeightedSite,
};
use crate::{Error, Real, Result, Scalar};

/// Absolute tie tolerance on hyperbolic distances in [`nearest_site`].
pub const DISTANCE_TIE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Route {
    #[default]
    Klein,
    /// Square-root-free for rational hemisphere input.
    Hemisphere,
}

impl Route {
    pub fn name(self) -> &'static str {
        match self {
            Route::Klein => "klein",
            Route::Hemisphere => "hemisphere",
        }
    }
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Route {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "klein" | "k" => Ok(Route::Klein),
            "hemisphere" | "b" => Ok(Route::Hemisphere),
            _ => Err(format!("unknown route `{s}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VoronoiOptions {
    pub route: Route,
    /// Build vertex/facet geometry, adjacency and boundaries (`d ∈ {2, 3}`).
    pub explicit: bool,
}

impl Default for VoronoiOptions {
    fn default() -> Self {
        VoronoiOptions {
            route: Route::Klein,
            explicit: true,
        }
    }
}

/// Bisector between two adjacent cells, expressed in the input model.
#[derive(Debug, Clone, PartialEq)]
pub struct Boundary<T> {
    /// `(i, j)` with `i < j`; site `i` is on the negative side.
    pub sites: (usize, usize),
    pub surface: ImplicitSurface<T>,
    pub class: SurfaceClass,
    /// 2-D only: the boundary piece in the unit Klein chart, clipped to the disk.
    pub segment: Option<[[f64; 2]; 2]>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VoronoiDiagram<T> {
    pub model: ModelTag,
    pub curvature: Curvature<T>,
    pub sites: Vec<ModelPoint<T>>,
    /// Site positions in the unit Klein chart.
    pub chart_sites: Vec<Vec<T>>,
    pub route: Route,
    pub complex: PowerComplex<T>,
    pub boundaries: Vec<Boundary<T>>,
}

impl<T: Scalar> VoronoiDiagram<T> {
    pub fn dimension(&self) -> usize {
        self.complex.dimension
    }

    pub fn weighted_sites(&self) -> &[WeightedSite<T>] {
        &self.complex.sites
    }
}

/// Hyperbolic Voronoi diagram of `points`.
pub fn voronoi<T: Scalar>(points: &[ModelPoint<T>], options: &VoronoiOptions) -> Result<VoronoiDiagram<T>> {
    let first = points.first().ok_or(Error::EmptySites)?;
    for (i, p) in points.iter().enumerate() {
        check_pair(first, p).map_err(|e| e.at(i))?;
        validate_point(p, MEMBERSHIP_TOLERANCE).map_err(|e| e.at(i))?;
    }
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            if points[i].coords() == points[j].coords() {
                return Err(Error::DuplicateSites(i, j));
            }
        }
    }
    let d = first.dimension();
    if options.explicit && !(2..=3).contains(&d) {
        return Err(Error::DimensionUnsupported(d));
    }
    let mut chart_sites = Vec::with_capacity(points.len());
    let mut weighted = Vec::with_capacity(points.len());
    for (i, p) in points.iter().enumerate() {
        match options.route {
            Route::Klein => {
                let k = unit_klein(p).map_err(|e| e.at(i))?;
                weighted.push(klein_site_from_unit(&k, i).map_err(|e| e.at(i))?);
                chart_sites.push(k);
            }
            Route::Hemisphere => {
                let h = unit_hemisphere(p).map_err(|e| e.at(i))?;
                weighted.push(hemisphere_site_from_unit(&h, i));
                chart_sites.push(drop_b_to_k(&h));
            }
        }
    }
    let complex = build_complex(
        &weighted,
        &BuildOptions {
            clip: Some(Ball::unit(d)),
            explicit: options.explicit,
            bound: None,
        },
    )?;
    let boundaries = complex
        .adjacency
        .iter()
        .map(|&(i, j)| boundary(&complex, first.model(), first.curvature(), i, j))
        .collect::<Result<Vec<_>>>()?;
    Ok(VoronoiDiagram {
        model: first.model(),
        curvature: first.curvature().clone(),
        sites: points.to_vec(),
        chart_sites,
        route: options.route,
        complex,
        boundaries,
    })
}

fn boundary<T: Scalar>(
    complex: &PowerComplex<T>,
    model: ModelTag,
    curvature: &Curvature<T>,
    i: usize,
    j: usize,
) -> Result<Boundary<T>> {
    let cell = &complex.cells[i];
    let h = &cell
        .halfspaces
        .iter()
        .find(|h| h.neighbor == j)
        .expect("adjacent cells share a halfspace")
        .halfspace;
    let (lambda, a, b) = klein_hyperplane_in(model, h.normal.clone(), h.offset.clone());
    let surface = ImplicitSurface::from_unit(lambda, a, b, model, curvature.clone())?;
    let class = surface.classify()?;
    let segment = match &cell.geometry {
        Some(CellGeometry::Polygon(p)) => p
            .edges()
            .find(|(_, _, l)| *l == EdgeLabel::Site(j))
            .and_then(|(a, b, _)| clip_to_disk([a[0].approx(), a[1].approx()], [b[0].approx(), b[1].approx()])),
        _ => None,
    };
    Ok(Boundary {
        sites: (i, j),
        surface,
        class,
        segment,
    })
}

/// Part of segment `[a, b]` inside the closed unit disk.
fn clip_to_disk(a: [f64; 2], b: [f64; 2]) -> Option<[[f64; 2]; 2]> {
    let e = [b[0] - a[0], b[1] - a[1]];
    let qa = e[0] * e[0] + e[1] * e[1];
    let qb = 2.0 * (a[0] * e[0] + a[1] * e[1]);
    let qc = a[0] * a[0] + a[1] * a[1] - 1.0;
    let disc = qb * qb - 4.0 * qa * qc;
    if qa == 0.0 || disc <= 0.0 {
        return None;
    }
    let sq = disc.sqrt();
    let t0 = ((-qb - sq) / (2.0 * qa)).max(0.0);
    let t1 = ((-qb + sq) / (2.0 * qa)).min(1.0);
    if t0 >= t1 {
        return None;
    }
    let at = |t: f64| [a[0] + t * e[0], a[1] + t * e[1]];
    Some([at(t0), at(t1)])
}

/// Exhaustive nearest site by hyperbolic distance; ties within
/// [`DISTANCE_TIE_TOLERANCE`].
pub fn nearest_site<T: Real>(x: &ModelPoint<T>, points: &[ModelPoint<T>]) -> Result<Location> {
    if points.is_empty() {
        return Err(Error::EmptySites);
    }
    let dists = points
        .iter()
        .enumerate()
        .map(|(i, p)| distance(x, p).map_err(|e| e.at(i)))
        .collect::<Result<Vec<T>>>()?;
    let min = dists.iter().copied().fold(T::infinity(), T::min);
    let tol = T::lit(DISTANCE_TIE_TOLERANCE);
    let ties: Vec<usize> = (0..dists.len()).filter(|&i| dists[i] - min <= tol).collect();
    Ok(Location { index: ties[0], ties })
}

/// Float copy of a point (exact coordinates rounded to nearest).
pub fn approx_point<T: Scalar>(p: &ModelPoint<T>) -> Result<ModelPoint<f64>> {
    let curvature = Curvature::new(p.curvature().kappa().approx())?;
    Ok(ModelPoint::new(p.model(), crate::linalg::to_f64(p.coords()), curvature))
}
