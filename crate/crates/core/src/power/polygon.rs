//! Convex polygons with labelled edges, clipped one halfspace at a time.

use super::{EdgeLabel, Halfspace};
use crate::linalg::{dist_sq, lerp};
use crate::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Side {
    Less,
    Equal,
    Greater,
}

pub(crate) fn side<T: Scalar>(value: &T, tol: &T) -> Side {
    if *value < -tol.clone() {
        Side::Less
    } else if *value > *tol {
        Side::Greater
    } else {
        Side::Equal
    }
}

/// Counter-clockwise convex polygon. `labels[k]` names the constraint
/// supporting the edge from `vertices[k]` to `vertices[k + 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Polygon<T> {
    pub vertices: Vec<Vec<T>>,
    pub labels: Vec<EdgeLabel>,
}

impl<T: Scalar> Polygon<T> {
    /// Axis-aligned square `center ± half`, edges labelled `Bound(0..4)`.
    pub fn square(center: &[T], half: &T) -> Self {
        let (cx, cy) = (center[0].clone(), center[1].clone());
        let h = half.clone();
        let vertices = vec![
            vec![cx.clone() - h.clone(), cy.clone() - h.clone()],
            vec![cx.clone() + h.clone(), cy.clone() - h.clone()],
            vec![cx.clone() + h.clone(), cy.clone() + h.clone()],
            vec![cx - h.clone(), cy + h],
        ];
        Polygon {
            vertices,
            labels: (0..4).map(EdgeLabel::Bound).collect(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.len() < 3
    }

    pub fn edges(&self) -> impl Iterator<Item = (&[T], &[T], EdgeLabel)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |k| {
            (
                self.vertices[k].as_slice(),
                self.vertices[(k + 1) % n].as_slice(),
                self.labels[k],
            )
        })
    }

    /// Twice the signed area.
    pub fn double_area(&self) -> T {
        self.edges().fold(T::zero(), |acc, (a, b, _)| {
            acc + a[0].clone() * b[1].clone() - a[1].clone() * b[0].clone()
        })
    }

    /// Intersection with `h`; the new edge is labelled `label`.
    pub fn clip(&self, h: &Halfspace<T>, label: EdgeLabel, tol: &T) -> Self {
        let values: Vec<T> = self.vertices.iter().map(|v| h.evaluate(v)).collect();
        let sides: Vec<Side> = values.iter().map(|s| side(s, tol)).collect();
        if sides.iter().all(|s| *s != Side::Greater) {
            return self.clone();
        }
        if sides.iter().all(|s| *s != Side::Less) {
            return Polygon {
                vertices: Vec::new(),
                labels: Vec::new(),
            };
        }
        let n = self.vertices.len();
        let mut vertices = Vec::with_capacity(n + 1);
        let mut labels = Vec::with_capacity(n + 1);
        for k in 0..n {
            let m = (k + 1) % n;
            let cur = &self.vertices[k];
            let next = &self.vertices[m];
            let crossing = || crossing_point(cur, next, &values[k], &values[m]);
            match sides[k] {
                Side::Less => {
                    vertices.push(cur.clone());
                    labels.push(self.labels[k]);
                    if sides[m] == Side::Greater {
                        vertices.push(crossing());
                        labels.push(label);
                    }
                }
                Side::Equal => {
                    vertices.push(cur.clone());
                    labels.push(if sides[m] == Side::Greater {
                        label
                    } else {
                        self.labels[k]
                    });
                }
                Side::Greater => {
                    if sides[m] == Side::Less {
                        vertices.push(crossing());
                        labels.push(self.labels[k]);
                    }
                }
            }
        }
        let mut out = Polygon { vertices, labels };
        out.drop_short_edges(tol);
        if out.vertices.len() < 3 || out.double_area().is_negligible(&T::one(), tol.approx()) {
            out.vertices.clear();
            out.labels.clear();
        }
        out
    }

    fn drop_short_edges(&mut self, tol: &T) {
        let tol_sq = tol.clone() * tol.clone();
        let mut k = 0;
        while self.vertices.len() > 1 && k < self.vertices.len() {
            let m = (k + 1) % self.vertices.len();
            if dist_sq(&self.vertices[k], &self.vertices[m]) <= tol_sq {
                self.vertices.remove(m);
                self.labels.remove(k);
                if m == 0 {
                    // vertex 0 went away, so label j must move to slot j - 1
                    self.labels.rotate_left(1);
                }
            } else {
                k += 1;
            }
        }
    }
}

/// Point where the segment crosses the zero set. Endpoints are ordered
/// lexicographically first so a shared edge always yields the same point.
pub(crate) fn crossing_point<T: Scalar>(a: &[T], b: &[T], sa: &T, sb: &T) -> Vec<T> {
    let swap = b.partial_cmp(a) == Some(std::cmp::Ordering::Less);
    let (a, b, sa, sb) = if swap { (b, a, sb, sa) } else { (a, b, sa, sb) };
    let t = sa.clone() / (sa.clone() - sb.clone());
    lerp(a, b, &t)
}
