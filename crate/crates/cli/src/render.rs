//! SVG rendering of planar diagram documents in the Klein, Poincaré and
//! upper half-plane views.
//!
//! Only the document is read: sites come from the input echo and each
//! boundary from its Klein-chart segment plus its implicit surface.

use std::fmt::Write as _;

use hvd_core::conversions::unit_klein;
use hvd_core::{Curvature, ImplicitSurface, ModelTag, SurfaceClass};

use crate::document::{BoundaryDocument, DiagramDocument, DocScalar};
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RenderOptions {
    pub model: ModelTag,
    pub width: u32,
    /// `0` draws native SVG arcs; `n > 0` draws an `n`-segment polyline per boundary.
    pub samples_per_arc: usize,
}

/// Unit Klein chart point in the view model's unit coordinates, or `None`
/// at the point at infinity of the upper half-plane.
fn chart_to_view(model: ModelTag, x: [f64; 2]) -> Option<[f64; 2]> {
    let s = (1.0 - x[0] * x[0] - x[1] * x[1]).max(0.0).sqrt();
    match model {
        ModelTag::Poincare => Some([x[0] / (1.0 + s), x[1] / (1.0 + s)]),
        ModelTag::UpperHalfSpace => {
            let den = 1.0 - x[1];
            if den <= 1e-12 {
                None
            } else {
                Some([x[0] / den, s / den])
            }
        }
        _ => Some(x),
    }
}

/// Similarity from view coordinates to pixels (y axis flipped).
struct Screen {
    origin: [f64; 2],
    scale: f64,
    width: f64,
    height: f64,
}

impl Screen {
    fn map(&self, p: [f64; 2]) -> [f64; 2] {
        [self.origin[0] + self.scale * p[0], self.origin[1] - self.scale * p[1]]
    }
}

fn fmt(x: f64) -> String {
    let s = format!("{x:.3}");
    if s == "-0.000" {
        "0.000".into()
    } else {
        s
    }
}

fn surface_in_view(b: &BoundaryDocument, curvature: f64, view: ModelTag) -> Result<ImplicitSurface<f64>, CliError> {
    let model: ModelTag = b.model.parse().map_err(|e: hvd_core::models::UnknownModel| CliError::Parse(e.to_string()))?;
    let surface = ImplicitSurface::new(
        f64::read(&b.lambda)?,
        b.a.iter().map(f64::read).collect::<Result<Vec<_>, _>>()?,
        f64::read(&b.b)?,
        model,
        Curvature::new(curvature)?,
    );
    let t = surface.transport(view)?;
    let (lambda, a, c) = t.unit_coefficients()?;
    Ok(ImplicitSurface::new(lambda, a, c, view, Curvature::unit()))
}

fn boundary_path(
    b: &BoundaryDocument,
    curvature: f64,
    opts: &RenderOptions,
    screen: &Screen,
) -> Result<Option<String>, CliError> {
    let Some([e0, e1]) = b.segment else {
        return Ok(None);
    };
    let view = opts.model;
    if opts.samples_per_arc > 0 {
        let n = opts.samples_per_arc;
        let pts: Vec<[f64; 2]> = (0..=n)
            .filter_map(|k| {
                let t = k as f64 / n as f64;
                chart_to_view(view, [e0[0] + t * (e1[0] - e0[0]), e0[1] + t * (e1[1] - e0[1])])
            })
            .map(|p| screen.map(p))
            .collect();
        if pts.len() < 2 {
            return Ok(None);
        }
        let mut d = format!("M {} {}", fmt(pts[0][0]), fmt(pts[0][1]));
        for p in &pts[1..] {
            let _ = write!(d, " L {} {}", fmt(p[0]), fmt(p[1]));
        }
        return Ok(Some(d));
    }
    let (v0, v1) = (chart_to_view(view, e0), chart_to_view(view, e1));
    let (p0, p1) = match (v0, v1) {
        (Some(a), Some(b)) => (screen.map(a), screen.map(b)),
        // one end at infinity: a vertical ray clamped to the top edge
        (Some(a), None) | (None, Some(a)) => {
            let p = screen.map(a);
            (p, [p[0], 0.0])
        }
        (None, None) => return Ok(None),
    };
    let straight = format!("M {} {} L {} {}", fmt(p0[0]), fmt(p0[1]), fmt(p1[0]), fmt(p1[1]));
    if view == ModelTag::Klein || v0.is_none() || v1.is_none() {
        return Ok(Some(straight));
    }
    let surface = surface_in_view(b, curvature, view)?;
    if surface.classify()? != SurfaceClass::Sphere {
        return Ok(Some(straight));
    }
    let (_, r2) = surface.sphere().expect("sphere");
    let r = r2.sqrt() * screen.scale;
    let mid = chart_to_view(view, [0.5 * (e0[0] + e1[0]), 0.5 * (e0[1] + e1[1])]).expect("interior point");
    let m = screen.map(mid);
    let cross = (p1[0] - p0[0]) * (m[1] - p0[1]) - (p1[1] - p0[1]) * (m[0] - p0[0]);
    let sweep = if cross < 0.0 { 1 } else { 0 };
    Ok(Some(format!(
        "M {} {} A {} {} 0 0 {} {} {}",
        fmt(p0[0]),
        fmt(p0[1]),
        fmt(r),
        fmt(r),
        sweep,
        fmt(p1[0]),
        fmt(p1[1])
    )))
}

/// SVG 1.1 picture of a 2-D diagram document.
pub fn render_svg(doc: &DiagramDocument, opts: &RenderOptions) -> Result<String, CliError> {
    if doc.dimension() != 2 {
        return Err(CliError::Dimension(format!(
            "rendering needs a 2-dimensional diagram, got d = {}",
            doc.dimension()
        )));
    }
    if !matches!(opts.model, ModelTag::Klein | ModelTag::Poincare | ModelTag::UpperHalfSpace) {
        return Err(CliError::Parse(format!(
            "cannot render in the {} model (use klein, poincare or upper)",
            opts.model
        )));
    }
    let curvature = f64::read(&doc.input.curvature)?;
    let sites: Vec<[f64; 2]> = doc
        .input
        .points::<f64>()?
        .iter()
        .map(|p| unit_klein(p).map(|k| [k[0], k[1]]))
        .collect::<Result<_, _>>()?;
    let views: Vec<Option<[f64; 2]>> = sites.iter().map(|s| chart_to_view(opts.model, *s)).collect();

    let w = opts.width as f64;
    let h = w;
    let screen = if opts.model == ModelTag::UpperHalfSpace {
        // sites near the point at infinity would shrink everything else; they
        // are left to the viewport clip instead
        let xr = views
            .iter()
            .flatten()
            .fold(2.0f64, |m, v| m.max(1.2 * v[0].abs()))
            .min(20.0);
        let scale = 0.5 * w / xr;
        Screen {
            origin: [0.5 * w, 0.92 * h],
            scale,
            width: w,
            height: h,
        }
    } else {
        Screen {
            origin: [0.5 * w, 0.5 * h],
            scale: 0.45 * w.min(h),
            width: w,
            height: h,
        }
    };

    let mut svg = String::new();
    let _ = writeln!(svg, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{}" height="{}" viewBox="0 0 {} {}" data-model="{}">"#,
        fmt(screen.width),
        fmt(screen.height),
        fmt(screen.width),
        fmt(screen.height),
        opts.model.name()
    );
    let _ = writeln!(svg, r#"<rect x="0" y="0" width="{}" height="{}" fill="white"/>"#, fmt(w), fmt(h));
    if opts.model == ModelTag::UpperHalfSpace {
        let y = screen.origin[1];
        let _ = writeln!(
            svg,
            r#"<line class="ideal-boundary" x1="0" y1="{}" x2="{}" y2="{}" stroke="black" stroke-width="1.5"/>"#,
            fmt(y),
            fmt(w),
            fmt(y)
        );
    } else {
        let _ = writeln!(
            svg,
            r#"<circle class="ideal-boundary" cx="{}" cy="{}" r="{}" fill="none" stroke="black" stroke-width="1.5"/>"#,
            fmt(screen.origin[0]),
            fmt(screen.origin[1]),
            fmt(screen.scale)
        );
    }
    let _ = writeln!(svg, r#"<g class="boundaries" fill="none" stroke="steelblue" stroke-width="1.2">"#);
    for b in &doc.boundaries {
        if let Some(d) = boundary_path(b, curvature, opts, &screen)? {
            let _ = writeln!(svg, r#"<path data-sites="{}-{}" d="{}"/>"#, b.sites[0], b.sites[1], d);
        }
    }
    let _ = writeln!(svg, "</g>");
    let _ = writeln!(svg, r#"<g class="sites" fill="crimson">"#);
    for (i, v) in views.iter().enumerate() {
        if let Some(v) = v {
            let p = screen.map(*v);
            let _ = writeln!(
                svg,
                r#"<circle data-site="{}" cx="{}" cy="{}" r="3"/>"#,
                i,
                fmt(p[0]),
                fmt(p[1])
            );
        }
    }
    let _ = writeln!(svg, "</g>");
    let _ = writeln!(svg, "</svg>");
    Ok(svg)
}
