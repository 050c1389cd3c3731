//! JSON documents: point sets in, diagrams out.
//!
//! Numbers are either JSON numbers (kept verbatim, so decimals parse
//! exactly in rational mode) or strings `"n/d"`. Exact values are always
//! written as strings.

use std::str::FromStr;

use hvd_core::hvd::{Boundary, DegeneracyReport, DelaunayComplex, VerificationReport, VoronoiDiagram};
use hvd_core::{Curvature, ModelPoint, ModelTag, Rational, Scalar, ScalarKind};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Value {
    Number(serde_json::Number),
    Text(String),
}

impl Value {
    pub fn from_f64(x: f64) -> Value {
        match serde_json::Number::from_f64(x) {
            Some(n) => Value::Number(n),
            None => Value::Text(x.to_string()),
        }
    }

    pub fn from_rational(x: &Rational) -> Value {
        if x.denom().is_one() {
            Value::Text(x.numer().to_string())
        } else {
            Value::Text(format!("{}/{}", x.numer(), x.denom()))
        }
    }

    pub fn literal(&self) -> String {
        match self {
            Value::Number(n) => n.to_string(),
            Value::Text(s) => s.clone(),
        }
    }

    pub fn to_f64(&self) -> Result<f64, CliError> {
        let s = self.literal();
        if let Ok(x) = f64::from_str(s.trim()) {
            return Ok(x);
        }
        parse_rational(&s)
            .map(|q| q.approx())
            .ok_or_else(|| CliError::Parse(format!("`{s}` is not a number")))
    }

    pub fn to_rational(&self) -> Result<Rational, CliError> {
        let s = self.literal();
        parse_rational(&s).ok_or_else(|| CliError::Parse(format!("`{s}` is not an exact number")))
    }
}

/// Conversion between a scalar and its document encoding.
pub trait DocScalar: Scalar {
    const KIND: ScalarKind;
    fn read(v: &Value) -> Result<Self, CliError>;
    fn write(&self) -> Value;
}

impl DocScalar for f64 {
    const KIND: ScalarKind = ScalarKind::Float64;

    fn read(v: &Value) -> Result<Self, CliError> {
        v.to_f64()
    }

    fn write(&self) -> Value {
        Value::from_f64(*self)
    }
}

impl DocScalar for Rational {
    const KIND: ScalarKind = ScalarKind::ExactRational;

    fn read(v: &Value) -> Result<Self, CliError> {
        v.to_rational()
    }

    fn write(&self) -> Value {
        Value::from_rational(self)
    }
}

/// Exact value of `"n/d"`, an integer, or a decimal with optional exponent.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n = BigInt::from_str(n.trim()).ok()?;
        let d = BigInt::from_str(d.trim()).ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(Rational::new(n, d));
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], i64::from_str(&s[i + 1..]).ok()?),
        None => (s, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if int.is_empty() && frac.is_empty() {
        return None;
    }
    if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let n = BigInt::from_str(&format!("{int}{frac}")).ok()?;
    let scale = exp - frac.len() as i64;
    let ten = BigInt::from(10);
    let p = num_traits::pow(ten, scale.unsigned_abs() as usize);
    let mut q = if scale >= 0 {
        Rational::from_integer(n * p)
    } else {
        Rational::new(n, p)
    };
    if neg {
        q = -q;
    }
    Some(q)
}

fn default_curvature() -> Value {
    Value::Number(serde_json::Number::from(-1))
}

fn default_model() -> String {
    "klein".into()
}

fn default_scalar() -> String {
    "float64".into()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointSetDocument {
    pub dimension: usize,
    #[serde(default = "default_curvature")]
    pub curvature: Value,
    #[serde(default = "default_model")]
    pub model: String,
    #[serde(default = "default_scalar")]
    pub scalar: String,
    pub points: Vec<Vec<Value>>,
}

pub fn scalar_name(kind: ScalarKind) -> &'static str {
    match kind {
        ScalarKind::Float64 => "float64",
        ScalarKind::ExactRational => "exact-rational",
    }
}

impl PointSetDocument {
    pub fn model_tag(&self) -> Result<ModelTag, CliError> {
        ModelTag::from_str(&self.model).map_err(|e| CliError::Parse(e.to_string()))
    }

    pub fn scalar_kind(&self) -> Result<ScalarKind, CliError> {
        match self.scalar.as_str() {
            "float64" => Ok(ScalarKind::Float64),
            "exact-rational" => Ok(ScalarKind::ExactRational),
            s => Err(CliError::Parse(format!(
                "unknown scalar `{s}` (expected float64 or exact-rational)"
            ))),
        }
    }

    /// Reads the points as `T`, checking arity and model domain.
    pub fn points<T: DocScalar>(&self) -> Result<Vec<ModelPoint<T>>, CliError> {
        if self.dimension < 2 {
            return Err(CliError::Parse(format!("dimension must be at least 2, got {}", self.dimension)));
        }
        let model = self.model_tag()?;
        let kappa = T::read(&self.curvature)?;
        let curvature = Curvature::new(kappa).map_err(CliError::from)?;
        let arity = model.arity(self.dimension);
        self.points
            .iter()
            .enumerate()
            .map(|(i, row)| {
                if row.len() != arity {
                    return Err(CliError::Parse(format!(
                        "point {i}: expected {arity} coordinates for a {model} point in dimension {}, found {}",
                        self.dimension,
                        row.len()
                    )));
                }
                let coords = row.iter().map(T::read).collect::<Result<Vec<T>, _>>()?;
                ModelPoint::checked(model, coords, curvature.clone()).map_err(|e| {
                    CliError::from(hvd_core::Error::AtPoint {
                        index: i,
                        source: Box::new(e),
                    })
                })
            })
            .collect()
    }

    pub fn from_points<T: DocScalar>(points: &[ModelPoint<T>], dimension: usize, model: ModelTag, curvature: &Curvature<T>) -> Self {
        PointSetDocument {
            dimension,
            curvature: curvature.kappa().write(),
            model: model.name().into(),
            scalar: scalar_name(T::KIND).into(),
            points: points.iter().map(|p| p.coords().iter().map(T::write).collect()).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClipDocument {
    pub center: Vec<Value>,
    pub radius_sq: Value,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SiteDocument {
    pub center: Vec<Value>,
    pub weight: Value,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HalfspaceDocument {
    pub neighbor: usize,
    pub normal: Vec<Value>,
    pub offset: Value,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellDocument {
    pub site: usize,
    pub empty: bool,
    /// `⟨normal, x⟩ + offset ≤ 0` in the unit Klein chart.
    pub halfspaces: Vec<HalfspaceDocument>,
    pub vertices: Vec<Vec<Value>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryDocument {
    pub sites: [usize; 2],
    pub model: String,
    pub lambda: Value,
    pub a: Vec<Value>,
    pub b: Value,
    pub class: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub segment: Option<[[f64; 2]; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerVertexDocument {
    pub point: Vec<Value>,
    pub sites: Vec<usize>,
    pub inside_clip: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DelaunayDocument {
    pub faces: Vec<Vec<usize>>,
    pub edges: Vec<[usize; 2]>,
    pub is_triangulation: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DegeneracyDocument {
    pub cocircular_groups: Vec<Vec<usize>>,
    pub collinear_groups: Vec<Vec<usize>>,
    pub equal_norm_groups: Vec<Vec<usize>>,
    pub equal_height_groups: Vec<Vec<usize>>,
    pub tolerance: f64,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessDocument {
    pub chart_point: Vec<f64>,
    pub point: Vec<f64>,
    pub diagram_label: Option<usize>,
    pub nearest: usize,
    pub gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationDocument {
    pub samples: usize,
    pub seed: u64,
    pub band: f64,
    pub compared: usize,
    pub excluded: usize,
    pub agreements: usize,
    pub disagreements: usize,
    pub agreement_rate: f64,
    pub max_gap: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessDocument>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagramDocument {
    pub input: PointSetDocument,
    pub route: String,
    pub explicit: bool,
    pub clip: ClipDocument,
    pub sites: Vec<SiteDocument>,
    pub cells: Vec<CellDocument>,
    pub adjacency: Vec<[usize; 2]>,
    pub boundaries: Vec<BoundaryDocument>,
    pub power_vertices: Vec<PowerVertexDocument>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delaunay: Option<DelaunayDocument>,
    pub degeneracies: DegeneracyDocument,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verification: Option<VerificationDocument>,
}

fn values<T: DocScalar>(v: &[T]) -> Vec<Value> {
    v.iter().map(T::write).collect()
}

fn boundary_document<T: DocScalar>(b: &Boundary<T>) -> BoundaryDocument {
    BoundaryDocument {
        sites: [b.sites.0, b.sites.1],
        model: b.surface.model.name().into(),
        lambda: b.surface.lambda.write(),
        a: values(&b.surface.a),
        b: b.surface.b.write(),
        class: b.class.name().into(),
        segment: b.segment,
    }
}

impl DelaunayDocument {
    pub fn from_complex<T>(dt: &DelaunayComplex<T>) -> Self {
        DelaunayDocument {
            faces: dt.faces.iter().map(|f| f.sites.clone()).collect(),
            edges: dt.edges.iter().map(|&(i, j)| [i, j]).collect(),
            is_triangulation: dt.is_triangulation,
        }
    }
}

impl DegeneracyDocument {
    pub fn from_report(r: &DegeneracyReport) -> Self {
        DegeneracyDocument {
            cocircular_groups: r.cocircular_groups.clone(),
            collinear_groups: r.collinear_groups.clone(),
            equal_norm_groups: r.equal_norm_groups.clone(),
            equal_height_groups: r.equal_height_groups.clone(),
            tolerance: r.tolerance,
            notes: r.notes.clone(),
        }
    }
}

impl VerificationDocument {
    pub fn from_report(r: &VerificationReport) -> Self {
        VerificationDocument {
            samples: r.samples,
            seed: r.seed,
            band: r.band,
            compared: r.compared,
            excluded: r.excluded,
            agreements: r.agreements,
            disagreements: r.disagreements,
            agreement_rate: r.agreement_rate,
            max_gap: r.max_gap,
            witness: r.witness.as_ref().map(|w| WitnessDocument {
                chart_point: w.chart_point.clone(),
                point: w.point.clone(),
                diagram_label: w.diagram_label,
                nearest: w.nearest,
                gap: w.gap,
            }),
        }
    }
}

impl DiagramDocument {
    pub fn from_diagram<T: DocScalar>(
        v: &VoronoiDiagram<T>,
        delaunay: Option<&DelaunayComplex<T>>,
        degeneracies: &DegeneracyReport,
        verification: Option<&VerificationReport>,
    ) -> Self {
        let d = v.dimension();
        let complex = &v.complex;
        let clip = complex.clip.clone().expect("diagrams are clipped");
        let tol = T::tie_tolerance();
        DiagramDocument {
            input: PointSetDocument::from_points(&v.sites, d, v.model, &v.curvature),
            route: v.route.name().into(),
            explicit: complex.explicit,
            clip: ClipDocument {
                center: values(&clip.center),
                radius_sq: clip.radius_sq.write(),
            },
            sites: complex
                .sites
                .iter()
                .map(|s| SiteDocument {
                    center: values(&s.center),
                    weight: s.weight.write(),
                })
                .collect(),
            cells: complex
                .cells
                .iter()
                .map(|c| CellDocument {
                    site: c.site_index,
                    empty: c.empty,
                    halfspaces: c
                        .halfspaces
                        .iter()
                        .map(|h| HalfspaceDocument {
                            neighbor: h.neighbor,
                            normal: values(&h.halfspace.normal),
                            offset: h.halfspace.offset.write(),
                        })
                        .collect(),
                    vertices: match (&c.geometry, c.empty) {
                        (Some(g), false) => g.vertices(&tol).iter().map(|p| values(p)).collect(),
                        _ => Vec::new(),
                    },
                })
                .collect(),
            adjacency: complex.adjacency.iter().map(|&(i, j)| [i, j]).collect(),
            boundaries: v.boundaries.iter().map(boundary_document).collect(),
            power_vertices: complex
                .power_vertices
                .iter()
                .map(|p| PowerVertexDocument {
                    point: values(&p.point),
                    sites: p.sites.clone(),
                    inside_clip: p.inside_clip,
                })
                .collect(),
            delaunay: delaunay.map(DelaunayDocument::from_complex),
            degeneracies: DegeneracyDocument::from_report(degeneracies),
            verification: verification.map(VerificationDocument::from_report),
        }
    }

    pub fn dimension(&self) -> usize {
        self.input.dimension
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn decimals_parse_exactly() {
        assert_eq!(parse_rational("0.6"), Some(q(3, 5)));
        assert_eq!(parse_rational("-1.25e-1"), Some(q(-1, 8)));
        assert_eq!(parse_rational("3/12"), Some(q(1, 4)));
        assert_eq!(parse_rational("12E2"), Some(q(1200, 1)));
        assert_eq!(parse_rational(".5"), Some(q(1, 2)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("abc"), None);
        assert_eq!(parse_rational("."), None);
    }

    #[test]
    fn values_round_trip() {
        let v = Value::from_rational(&q(-3, 7));
        assert_eq!(serde_json::to_string(&v).unwrap(), "\"-3/7\"");
        assert_eq!(v.to_rational().unwrap(), q(-3, 7));
        let v: Value = serde_json::from_str("0.1").unwrap();
        assert_eq!(v.to_rational().unwrap(), q(1, 10));
        assert_eq!(v.to_f64().unwrap(), 0.1);
        assert_eq!(serde_json::to_string(&Value::from_f64(0.1)).unwrap(), "0.1");
    }

    #[test]
    fn point_set_defaults() {
        let doc: PointSetDocument = serde_json::from_str(r#"{"dimension": 2, "points": [[0.5, 0]]}"#).unwrap();
        assert_eq!(doc.model, "klein");
        assert_eq!(doc.scalar, "float64");
        let pts = doc.points::<f64>().unwrap();
        assert_eq!(pts[0].coords(), &[0.5, 0.0]);
        assert!(pts[0].curvature().is_unit());
    }

    #[test]
    fn point_set_errors() {
        let bad_arity: PointSetDocument = serde_json::from_str(r#"{"dimension": 2, "points": [[0.5]]}"#).unwrap();
        assert!(matches!(bad_arity.points::<f64>(), Err(CliError::Parse(_))));
        let outside: PointSetDocument = serde_json::from_str(r#"{"dimension": 2, "points": [[0.1, 0], [1.5, 0]]}"#).unwrap();
        let e = outside.points::<f64>().unwrap_err();
        assert!(matches!(e, CliError::Core(_)));
        assert_eq!(e.exit_code(), 3);
        assert!(e.to_string().contains("point 1"));
    }
}
