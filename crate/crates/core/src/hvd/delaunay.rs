use super::VoronoiDiagram;
use crate::{Error, Result, Scalar};

#[derive(Debug, Clone, PartialEq)]
pub struct DelaunayFace<T> {
    /// Ascending site indices; more than `d + 1` for a degenerate face.
    pub sites: Vec<usize>,
    /// Dual power vertex in the unit Klein chart (the hyperbolic circumcenter).
    pub center: Vec<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DelaunayComplex<T> {
    pub faces: Vec<DelaunayFace<T>>,
    /// Adjacent pairs of the clipped diagram.
    pub edges: Vec<(usize, usize)>,
    /// At least `d + 1` sites, every face a `d`-simplex, and every edge in some face.
    pub is_triangulation: bool,
}

/// Dual of the clipped diagram: one face per power vertex strictly inside the ball.
pub fn delaunay<T: Scalar>(diagram: &VoronoiDiagram<T>) -> Result<DelaunayComplex<T>> {
    let complex = &diagram.complex;
    if !complex.explicit {
        return Err(Error::NoExplicitGeometry);
    }
    let d = complex.dimension;
    let faces: Vec<DelaunayFace<T>> = complex
        .power_vertices
        .iter()
        .filter(|v| v.inside_clip)
        .map(|v| DelaunayFace {
            sites: v.sites.clone(),
            center: v.point.clone(),
        })
        .collect();
    let edges = complex.adjacency.clone();
    let covered = |&(i, j): &(usize, usize)| faces.iter().any(|f| f.sites.contains(&i) && f.sites.contains(&j));
    let is_triangulation = diagram.sites.len() > d
        && faces.iter().all(|f| f.sites.len() == d + 1)
        && edges.iter().all(covered);
    Ok(DelaunayComplex {
        faces,
        edges,
        is_triangulation,
    })
}
