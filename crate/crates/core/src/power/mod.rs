//! Power (Laguerre) diagrams of weighted sites.
//!
//! A site `(c, w)` has power `‖c − x‖² − w` at `x`. Cells are built by
//! clipping a bounding box against the radical hyperplanes of all other
//! sites and are then restricted to an optional open clip ball. Explicit
//! geometry is produced for `d ∈ {2, 3}`; other dimensions keep the
//! halfspace lists only.

mod polygon;
mod polyhedron;

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;

pub use polygon::Polygon;
pub use polyhedron::{Face, Polyhedron};

use crate::linalg::{dist_sq, dot, norm_sq, scale, sub};
use crate::models::{validate_point, ModelPoint, ModelTag, MEMBERSHIP_TOLERANCE};
use crate::{Error, Result, Scalar};

/// Relative tolerance on power values when collecting the sites incident to a vertex.
pub const VERTEX_TIE_TOLERANCE: f64 = 1e-9;

/// Half-width of the bounding box used when no clip ball is given.
pub const DEFAULT_BOUND: f64 = 1e6;

/// Sign of `1/p₀` in the hemisphere site weight `w = ‖c‖² + s/p₀`.
pub const HEMISPHERE_WEIGHT_SIGN: i8 = -1;

#[derive(Debug, Clone, PartialEq)]
pub struct WeightedSite<T> {
    pub center: Vec<T>,
    /// Squared radius; negative weights are allowed.
    pub weight: T,
    pub origin_index: usize,
}

impl<T: Scalar> WeightedSite<T> {
    pub fn new(center: Vec<T>, weight: T, origin_index: usize) -> Self {
        WeightedSite {
            center,
            weight,
            origin_index,
        }
    }

    pub fn dimension(&self) -> usize {
        self.center.len()
    }
}

/// `{x : ⟨normal, x⟩ + offset ≤ 0}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Halfspace<T> {
    pub normal: Vec<T>,
    pub offset: T,
}

impl<T: Scalar> Halfspace<T> {
    pub fn new(normal: Vec<T>, offset: T) -> Self {
        Halfspace { normal, offset }
    }

    /// Rescaled by a positive factor: unit normal for floats, primitive
    /// integers for rationals.
    pub fn canonical(&self) -> Self {
        let d = self.normal.len();
        let mut c: Vec<T> = self.normal.clone();
        c.push(self.offset.clone());
        T::canonicalize(&mut c, d);
        let offset = c.pop().expect("offset");
        Halfspace { normal: c, offset }
    }

    pub fn evaluate(&self, x: &[T]) -> T {
        dot(&self.normal, x) + self.offset.clone()
    }

    /// Zero normal: the constraint holds everywhere or nowhere.
    pub fn is_trivial(&self) -> bool {
        self.normal.iter().all(|c| c.is_zero())
    }

    pub fn is_nowhere(&self) -> bool {
        self.is_trivial() && self.offset > T::zero()
    }

    pub fn to_f64(&self) -> Halfspace<f64> {
        Halfspace::new(crate::linalg::to_f64(&self.normal), self.offset.approx())
    }
}

impl Halfspace<f64> {
    /// Signed Euclidean distance to the hyperplane (`±∞` for trivial constraints).
    pub fn normalized_evaluate(&self, x: &[f64]) -> f64 {
        let n = norm_sq(&self.normal).sqrt();
        if n == 0.0 {
            return if self.offset > 0.0 { f64::INFINITY } else { f64::NEG_INFINITY };
        }
        self.evaluate(x) / n
    }
}

/// Open ball `‖x − center‖² < radius_sq`.
#[derive(Debug, Clone, PartialEq)]
pub struct Ball<T> {
    pub center: Vec<T>,
    pub radius_sq: T,
}

impl<T: Scalar> Ball<T> {
    pub fn unit(d: usize) -> Self {
        Ball {
            center: vec![T::zero(); d],
            radius_sq: T::one(),
        }
    }

    /// Strict membership, with margin `tol` on the squared radius.
    pub fn contains(&self, x: &[T], tol: &T) -> bool {
        dist_sq(x, &self.center) < self.radius_sq.clone() - tol.clone()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EdgeLabel {
    /// Side `k` of the bounding box.
    Bound(usize),
    /// Radical hyperplane shared with site `j`.
    Site(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct BuildOptions<T> {
    pub clip: Option<Ball<T>>,
    /// Build vertex/facet geometry (`d ∈ {2, 3}` only).
    pub explicit: bool,
    /// Bounding-box half-width when unclipped; defaults to [`DEFAULT_BOUND`].
    pub bound: Option<T>,
}

impl<T> Default for BuildOptions<T> {
    fn default() -> Self {
        BuildOptions {
            clip: None,
            explicit: true,
            bound: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CellHalfspace<T> {
    pub neighbor: usize,
    pub halfspace: Halfspace<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum CellGeometry<T> {
    Polygon(Polygon<T>),
    Polyhedron(Polyhedron<T>),
}

impl<T: Scalar> CellGeometry<T> {
    pub fn vertices(&self, tol: &T) -> Vec<Vec<T>> {
        match self {
            CellGeometry::Polygon(p) => p.vertices.clone(),
            CellGeometry::Polyhedron(p) => p.vertices(tol),
        }
    }

    pub fn is_empty(&self) -> bool {
        match self {
            CellGeometry::Polygon(p) => p.is_empty(),
            CellGeometry::Polyhedron(p) => p.is_empty(),
        }
    }

    /// Labels of the facets with positive measure.
    pub fn facet_labels(&self) -> BTreeSet<EdgeLabel> {
        match self {
            CellGeometry::Polygon(p) => p.labels.iter().copied().collect(),
            CellGeometry::Polyhedron(p) => p.faces.iter().map(|f| f.label).collect(),
        }
    }

    /// Squared distance from `c` to the facet labelled `label`.
    fn facet_dist_sq(&self, label: EdgeLabel, c: &[T]) -> Option<T> {
        match self {
            CellGeometry::Polygon(p) => p
                .edges()
                .find(|(_, _, l)| *l == label)
                .map(|(a, b, _)| crate::linalg::segment_dist_sq(c, a, b)),
            CellGeometry::Polyhedron(p) => p.faces.iter().find(|f| f.label == label).map(|f| f.dist_sq(c)),
        }
    }

    fn boundary_dist_sq(&self, c: &[T]) -> T {
        let all: Vec<T> = match self {
            CellGeometry::Polygon(p) => p
                .edges()
                .map(|(a, b, _)| crate::linalg::segment_dist_sq(c, a, b))
                .collect(),
            CellGeometry::Polyhedron(p) => p.faces.iter().map(|f| f.dist_sq(c)).collect(),
        };
        all.into_iter()
            .fold(None, |m: Option<T>, d| match m {
                Some(m) if m <= d => Some(m),
                _ => Some(d),
            })
            .unwrap_or_else(T::zero)
    }
}

/// Circular piece of a clipped 2-D cell boundary, counter-clockwise from
/// `start` to `end` (radians, `end > start`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Arc {
    pub center: [f64; 2],
    pub radius: f64,
    pub start: f64,
    pub end: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvexCell<T> {
    pub site_index: usize,
    pub halfspaces: Vec<CellHalfspace<T>>,
    pub clip: Option<Ball<T>>,
    pub geometry: Option<CellGeometry<T>>,
    /// Clip-ball arcs of the boundary (2-D clipped cells only).
    pub arcs: Vec<Arc>,
    pub empty: bool,
}

impl<T: Scalar> ConvexCell<T> {
    pub fn neighbors(&self) -> impl Iterator<Item = usize> + '_ {
        self.halfspaces.iter().map(|h| h.neighbor)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PowerVertex<T> {
    pub point: Vec<T>,
    /// Sites of minimal power at `point`, ascending.
    pub sites: Vec<usize>,
    pub inside_clip: bool,
}

impl<T> PowerVertex<T> {
    pub fn is_degenerate(&self, d: usize) -> bool {
        self.sites.len() > d + 1
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PowerComplex<T> {
    pub dimension: usize,
    pub sites: Vec<WeightedSite<T>>,
    pub cells: Vec<ConvexCell<T>>,
    /// Pairs `(i, j)`, `i < j`, sharing a facet inside the clip ball; ascending.
    pub adjacency: Vec<(usize, usize)>,
    pub power_vertices: Vec<PowerVertex<T>>,
    pub clip: Option<Ball<T>>,
    pub explicit: bool,
}

impl<T: Scalar> PowerComplex<T> {
    pub fn is_adjacent(&self, i: usize, j: usize) -> bool {
        let key = if i < j { (i, j) } else { (j, i) };
        self.adjacency.binary_search(&key).is_ok()
    }
}

/// Result of a point location: the winning index and every index tied with it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Location {
    pub index: usize,
    pub ties: Vec<usize>,
}

pub fn power_distance<T: Scalar>(s: &WeightedSite<T>, x: &[T]) -> Result<T> {
    if s.center.len() != x.len() {
        return Err(Error::ArityMismatch {
            expected: s.center.len(),
            found: x.len(),
        });
    }
    Ok(dist_sq(&s.center, x) - s.weight.clone())
}

/// Radical hyperplane of `si` and `sj`, with `si`'s side `≤ 0`, in canonical scale.
pub fn radical_hyperplane<T: Scalar>(si: &WeightedSite<T>, sj: &WeightedSite<T>) -> Result<Halfspace<T>> {
    if si.center.len() != sj.center.len() {
        return Err(Error::ArityMismatch {
            expected: si.center.len(),
            found: sj.center.len(),
        });
    }
    let two = T::one() + T::one();
    let normal = scale(&sub(&sj.center, &si.center), &two);
    let offset = norm_sq(&si.center) - norm_sq(&sj.center) - si.weight.clone() + sj.weight.clone();
    let h = Halfspace::new(normal, offset);
    if h.is_trivial() && h.offset.is_zero() {
        return Err(Error::CoincidentSites(si.origin_index, sj.origin_index));
    }
    Ok(h.canonical())
}

/// Site of a unit Klein point: `c = p / (2s)`, `w = ‖c‖² − 1/s`, `s = √(1 − ‖p‖²)`.
pub fn klein_site_from_unit<T: Scalar>(p: &[T], origin_index: usize) -> Result<WeightedSite<T>> {
    let s = (T::one() - norm_sq(p))
        .sqrt_checked()
        .ok_or(Error::NotSquareRootFree("Klein site map"))?;
    let two_s = s.clone() + s.clone();
    let center: Vec<T> = p.iter().map(|x| x.clone() / two_s.clone()).collect();
    let weight = norm_sq(&center) - T::one() / s;
    Ok(WeightedSite::new(center, weight, origin_index))
}

pub fn klein_site_map<T: Scalar>(p: &ModelPoint<T>) -> Result<WeightedSite<T>> {
    expect_model(p, ModelTag::Klein)?;
    klein_site_from_unit(&p.unit_coords()?, 0)
}

/// Site of a unit hemisphere point with an explicit weight sign.
pub fn hemisphere_site_from_unit_signed<T: Scalar>(p: &[T], sign: i8, origin_index: usize) -> WeightedSite<T> {
    let two_p0 = p[0].clone() + p[0].clone();
    let center: Vec<T> = p[1..].iter().map(|x| x.clone() / two_p0.clone()).collect();
    let inv = T::one() / p[0].clone();
    let weight = if sign < 0 {
        norm_sq(&center) - inv
    } else {
        norm_sq(&center) + inv
    };
    WeightedSite::new(center, weight, origin_index)
}

/// Site of a unit hemisphere point: `c = (p₁..p_d) / (2p₀)`, `w = ‖c‖² − 1/p₀`.
pub fn hemisphere_site_from_unit<T: Scalar>(p: &[T], origin_index: usize) -> WeightedSite<T> {
    hemisphere_site_from_unit_signed(p, HEMISPHERE_WEIGHT_SIGN, origin_index)
}

pub fn hemisphere_site_map<T: Scalar>(p: &ModelPoint<T>) -> Result<WeightedSite<T>> {
    expect_model(p, ModelTag::Hemisphere)?;
    Ok(hemisphere_site_from_unit(&p.unit_coords()?, 0))
}

fn expect_model<T: Scalar>(p: &ModelPoint<T>, model: ModelTag) -> Result<()> {
    if p.model() != model {
        return Err(Error::ModelMismatch(p.model(), model));
    }
    validate_point(p, MEMBERSHIP_TOLERANCE)
}

/// `‖p‖²` at which the Klein site weight changes sign: `4(√5 − 2)`.
pub fn negative_weight_threshold() -> f64 {
    4.0 * (5f64.sqrt() - 2.0)
}

/// Linear-scan argmin of power distance; ties within the scalar's tie tolerance.
pub fn locate<T: Scalar>(x: &[T], sites: &[WeightedSite<T>]) -> Result<Location> {
    if sites.is_empty() {
        return Err(Error::EmptySites);
    }
    let powers = sites
        .iter()
        .map(|s| power_distance(s, x))
        .collect::<Result<Vec<T>>>()?;
    let min = powers
        .iter()
        .skip(1)
        .fold(&powers[0], |m, p| if p < m { p } else { m })
        .clone();
    let tol = T::tie_tolerance();
    let ties: Vec<usize> = powers
        .iter()
        .enumerate()
        .filter(|(_, p)| (*p).clone() - min.clone() <= tol)
        .map(|(i, _)| i)
        .collect();
    Ok(Location { index: ties[0], ties })
}

/// Sites whose power at `x` is within the relative vertex tolerance of the minimum.
fn incident_sites<T: Scalar>(x: &[T], sites: &[WeightedSite<T>]) -> Vec<usize> {
    let powers: Vec<T> = sites
        .iter()
        .map(|s| dist_sq(&s.center, x) - s.weight.clone())
        .collect();
    let (m, min) = powers
        .iter()
        .enumerate()
        .skip(1)
        .fold((0, &powers[0]), |(mi, mv), (i, p)| if p < mv { (i, p) } else { (mi, mv) });
    let scale = T::one() + norm_sq(x) + norm_sq(&sites[m].center) + sites[m].weight.magnitude();
    powers
        .iter()
        .enumerate()
        .filter(|(_, p)| ((*p).clone() - min.clone()).is_negligible(&scale, VERTEX_TIE_TOLERANCE))
        .map(|(i, _)| i)
        .collect()
}

fn on_box<T: Scalar>(v: &[T], center: &[T], half: &T, tol: &T) -> bool {
    v.iter().zip(center).any(|(x, c)| {
        let off = (x.clone() - c.clone()).magnitude();
        (off - half.clone()).magnitude() <= *tol
    })
}

struct Bounds<T> {
    center: Vec<T>,
    half: T,
    tol: T,
}

fn bounds<T: Scalar>(d: usize, options: &BuildOptions<T>) -> Bounds<T> {
    let (center, half) = match &options.clip {
        Some(ball) => {
            let three_halves = T::lit(1.5);
            let half = match ball.radius_sq.sqrt_checked() {
                Some(r) => three_halves * r,
                // r ≤ (r² + 1) / 2, so r² + 1 covers 1.5 r
                None => ball.radius_sq.clone() + T::one(),
            };
            (ball.center.clone(), half)
        }
        None => (
            vec![T::zero(); d],
            options.bound.clone().unwrap_or_else(|| T::lit(DEFAULT_BOUND)),
        ),
    };
    let tol = if T::EXACT {
        T::zero()
    } else {
        let one = T::one();
        T::tie_tolerance() * if half > one { half.clone() } else { one }
    };
    Bounds { center, half, tol }
}

/// Builds the power diagram of `sites`, optionally clipped to an open ball.
pub fn build_complex<T: Scalar>(sites: &[WeightedSite<T>], options: &BuildOptions<T>) -> Result<PowerComplex<T>> {
    if sites.is_empty() {
        return Err(Error::EmptySites);
    }
    let d = sites[0].dimension();
    for s in sites {
        if s.dimension() != d {
            return Err(Error::ArityMismatch {
                expected: d,
                found: s.dimension(),
            });
        }
    }
    if options.explicit && !(2..=3).contains(&d) {
        return Err(Error::DimensionUnsupported(d));
    }
    let halfspaces: Vec<Vec<CellHalfspace<T>>> = (0..sites.len())
        .into_par_iter()
        .map(|i| {
            (0..sites.len())
                .filter(|&j| j != i)
                .map(|j| {
                    radical_hyperplane(&sites[i], &sites[j])
                        .map(|halfspace| CellHalfspace { neighbor: j, halfspace })
                        .map_err(|_| Error::DuplicateSites(i.min(j), i.max(j)))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;

    if !options.explicit {
        let cells = halfspaces
            .into_iter()
            .enumerate()
            .map(|(i, hs)| ConvexCell {
                site_index: i,
                empty: hs.iter().any(|h| h.halfspace.is_nowhere()),
                halfspaces: hs,
                clip: options.clip.clone(),
                geometry: None,
                arcs: Vec::new(),
            })
            .collect();
        return Ok(PowerComplex {
            dimension: d,
            sites: sites.to_vec(),
            cells,
            adjacency: Vec::new(),
            power_vertices: Vec::new(),
            clip: options.clip.clone(),
            explicit: false,
        });
    }

    let b = bounds(d, options);
    let cells: Vec<ConvexCell<T>> = halfspaces
        .into_par_iter()
        .enumerate()
        .map(|(i, hs)| build_cell(i, hs, &b, options.clip.as_ref()))
        .collect();

    let mut pairs = BTreeSet::new();
    for c in &cells {
        for j in c.neighbors() {
            if !c.empty && !cells[j].empty {
                pairs.insert((c.site_index.min(j), c.site_index.max(j)));
            }
        }
    }

    let mut by_sites: BTreeMap<Vec<usize>, PowerVertex<T>> = BTreeMap::new();
    for c in &cells {
        let Some(g) = &c.geometry else { continue };
        for v in g.vertices(&b.tol) {
            if on_box(&v, &b.center, &b.half, &b.tol) {
                continue;
            }
            let incident = incident_sites(&v, sites);
            if incident.len() < d + 1 || by_sites.contains_key(&incident) {
                continue;
            }
            let inside_clip = options
                .clip
                .as_ref()
                .is_none_or(|ball| ball.contains(&v, &T::tie_tolerance()));
            by_sites.insert(
                incident.clone(),
                PowerVertex {
                    point: v,
                    sites: incident,
                    inside_clip,
                },
            );
        }
    }

    Ok(PowerComplex {
        dimension: d,
        sites: sites.to_vec(),
        cells,
        adjacency: pairs.into_iter().collect(),
        power_vertices: by_sites.into_values().collect(),
        clip: options.clip.clone(),
        explicit: true,
    })
}

fn build_cell<T: Scalar>(
    i: usize,
    halfspaces: Vec<CellHalfspace<T>>,
    b: &Bounds<T>,
    clip: Option<&Ball<T>>,
) -> ConvexCell<T> {
    let d = b.center.len();
    let mut geometry = if d == 2 {
        CellGeometry::Polygon(Polygon::square(&b.center, &b.half))
    } else {
        CellGeometry::Polyhedron(Polyhedron::cube(&b.center, &b.half))
    };
    let mut nowhere = false;
    for h in &halfspaces {
        if h.halfspace.is_trivial() {
            nowhere |= h.halfspace.is_nowhere();
            continue;
        }
        let label = EdgeLabel::Site(h.neighbor);
        geometry = match geometry {
            CellGeometry::Polygon(p) => CellGeometry::Polygon(p.clip(&h.halfspace, label, &b.tol)),
            CellGeometry::Polyhedron(p) => CellGeometry::Polyhedron(p.clip(&h.halfspace, label, &b.tol)),
        };
        if geometry.is_empty() {
            break;
        }
    }
    let mut empty = nowhere || geometry.is_empty();
    if let (false, Some(ball)) = (empty, clip) {
        let inside = halfspaces.iter().all(|h| h.halfspace.evaluate(&ball.center) <= T::zero());
        let reach = if inside {
            T::zero()
        } else {
            geometry.boundary_dist_sq(&ball.center)
        };
        empty = !(reach < ball.radius_sq.clone() - b.tol.clone());
    }
    if empty {
        return ConvexCell {
            site_index: i,
            halfspaces,
            clip: clip.cloned(),
            geometry: Some(geometry),
            arcs: Vec::new(),
            empty: true,
        };
    }
    let labels = geometry.facet_labels();
    let kept: Vec<CellHalfspace<T>> = halfspaces
        .into_iter()
        .filter(|h| labels.contains(&EdgeLabel::Site(h.neighbor)))
        .filter(|h| match clip {
            None => true,
            Some(ball) => geometry
                .facet_dist_sq(EdgeLabel::Site(h.neighbor), &ball.center)
                .is_some_and(|r| r < ball.radius_sq.clone() - b.tol.clone()),
        })
        .collect();
    let arcs = match (&geometry, clip) {
        (CellGeometry::Polygon(p), Some(ball)) => clip_arcs(p, ball),
        _ => Vec::new(),
    };
    ConvexCell {
        site_index: i,
        halfspaces: kept,
        clip: clip.cloned(),
        geometry: Some(geometry),
        arcs,
        empty: false,
    }
}

/// Arcs of the clip circle that bound `poly ∩ ball`.
fn clip_arcs<T: Scalar>(poly: &Polygon<T>, ball: &Ball<T>) -> Vec<Arc> {
    let c = [ball.center[0].approx(), ball.center[1].approx()];
    let r = ball.radius_sq.approx().sqrt();
    let n = poly.vertices.len();
    let pts: Vec<[f64; 2]> = poly
        .vertices
        .iter()
        .map(|v| [v[0].approx() - c[0], v[1].approx() - c[1]])
        .collect();
    // (edge index, t, point, entering)
    let mut events: Vec<(usize, f64, [f64; 2], bool)> = Vec::new();
    for k in 0..n {
        let a = pts[k];
        let b = pts[(k + 1) % n];
        let e = [b[0] - a[0], b[1] - a[1]];
        let qa = e[0] * e[0] + e[1] * e[1];
        let qb = 2.0 * (a[0] * e[0] + a[1] * e[1]);
        let qc = a[0] * a[0] + a[1] * a[1] - r * r;
        let disc = qb * qb - 4.0 * qa * qc;
        if qa == 0.0 || disc <= 0.0 {
            continue;
        }
        let sq = disc.sqrt();
        for t in [(-qb - sq) / (2.0 * qa), (-qb + sq) / (2.0 * qa)] {
            if (0.0..1.0).contains(&t) {
                let entering = 2.0 * qa * t + qb < 0.0;
                events.push((k, t, [a[0] + t * e[0], a[1] + t * e[1]], entering));
            }
        }
    }
    let angle = |p: [f64; 2]| p[1].atan2(p[0]);
    let tau = std::f64::consts::TAU;
    if events.is_empty() {
        let center_inside = poly.edges().all(|(a, b, _)| {
            let (ax, ay) = (a[0].approx() - c[0], a[1].approx() - c[1]);
            let (bx, by) = (b[0].approx() - c[0], b[1].approx() - c[1]);
            ax * by - ay * bx >= 0.0
        });
        let all_outside = pts.iter().all(|p| p[0] * p[0] + p[1] * p[1] >= r * r);
        return if center_inside && all_outside {
            vec![Arc {
                center: c,
                radius: r,
                start: 0.0,
                end: tau,
            }]
        } else {
            Vec::new()
        };
    }
    let m = events.len();
    let mut arcs = Vec::new();
    for k in 0..m {
        let (_, _, x, entering) = events[k];
        if entering {
            continue;
        }
        let Some(&(_, _, y, _)) = (1..=m).map(|s| &events[(k + s) % m]).find(|e| e.3) else {
            continue;
        };
        let start = angle(x);
        let mut end = angle(y);
        while end <= start {
            end += tau;
        }
        arcs.push(Arc {
            center: c,
            radius: r,
            start,
            end,
        });
    }
    arcs
}
