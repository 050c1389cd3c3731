//! Hyperbolic Voronoi diagrams in the Klein, Poincaré ball, upper
//! half-space, hemisphere and hyperboloid models.
//!
//! The kernel is generic over [`Scalar`]: `f32`, `f64` and exact
//! [`Rational`]. Distances, geodesics and sampling need transcendental
//! functions and are only available for [`Real`] types.

// `!(a < b)` is kept so that NaN fails domain checks.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bisectors;
pub mod conversions;
mod error;
pub mod hvd;
mod linalg;
pub mod models;
pub mod power;
mod scalar;

pub use error::{Error, Result};
pub use scalar::{Real, Scalar};

pub use bisectors::{bisector, geodesic, transport_surface, ImplicitSurface, SurfaceClass};
pub use conversions::{convert, ConversionPath};
pub use hvd::{
    delaunay, detect_degeneracies, nearest_site, verify, voronoi, Boundary, DegeneracyReport, DelaunayComplex,
    Route, VerificationReport, VoronoiDiagram, VoronoiOptions,
};
pub use models::{distance, metric_tensor, Curvature, ModelPoint, ModelTag, ScalarKind};
pub use power::{
    build_complex, hemisphere_site_map, klein_site_map, locate, power_distance, radical_hyperplane, Halfspace,
    PowerComplex, WeightedSite,
};

/// Exact rational scalar.
pub type Rational = num_rational::BigRational;

pub type Point64 = ModelPoint<f64>;
pub type PointQ = ModelPoint<Rational>;
pub type Surface64 = ImplicitSurface<f64>;
pub type SurfaceQ = ImplicitSurface<Rational>;
pub type Site64 = WeightedSite<f64>;
pub type SiteQ = WeightedSite<Rational>;
pub type Complex64 = PowerComplex<f64>;
pub type ComplexQ = PowerComplex<Rational>;
pub type Diagram64 = VoronoiDiagram<f64>;
pub type DiagramQ = VoronoiDiagram<Rational>;
