//! Convex polyhedra as face lists, clipped one halfspace at a time.

use std::cmp::Ordering;

use super::polygon::{crossing_point, side, Side};
use super::{EdgeLabel, Halfspace};
use crate::linalg::{add, cross3, dist_sq, dot, norm_sq, scale, segment_dist_sq, sub};
use crate::Scalar;

/// Planar convex face; vertices form a closed loop.
#[derive(Debug, Clone, PartialEq)]
pub struct Face<T> {
    pub vertices: Vec<Vec<T>>,
    pub label: EdgeLabel,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Polyhedron<T> {
    pub faces: Vec<Face<T>>,
}

impl<T: Scalar> Face<T> {
    /// Newell normal; its length is twice the face area.
    pub fn area_normal(&self) -> Vec<T> {
        let n = self.vertices.len();
        let mut acc = vec![T::zero(), T::zero(), T::zero()];
        for k in 0..n {
            acc = add(&acc, &cross3(&self.vertices[k], &self.vertices[(k + 1) % n]));
        }
        acc
    }

    /// Squared distance from `c` to the face (as a closed planar polygon).
    pub fn dist_sq(&self, c: &[T]) -> T {
        let normal = self.area_normal();
        let nn = norm_sq(&normal);
        let n = self.vertices.len();
        let inside = (0..n).all(|k| {
            let a = &self.vertices[k];
            let b = &self.vertices[(k + 1) % n];
            dot(&cross3(&sub(b, a), &sub(c, a)), &normal) >= T::zero()
        });
        if inside && !nn.is_zero() {
            let h = dot(&normal, &sub(c, &self.vertices[0]));
            return h.clone() * h / nn;
        }
        (0..n)
            .map(|k| segment_dist_sq(c, &self.vertices[k], &self.vertices[(k + 1) % n]))
            .fold(None, |m: Option<T>, d| match m {
                Some(m) if m <= d => Some(m),
                _ => Some(d),
            })
            .unwrap_or_else(T::zero)
    }
}

fn push_unique<T: Scalar>(list: &mut Vec<Vec<T>>, p: Vec<T>, tol_sq: &T) {
    if !list.iter().any(|q| dist_sq(q, &p) <= *tol_sq) {
        list.push(p);
    }
}

fn negligible_area<T: Scalar>(f: &Face<T>, tol: &T) -> bool {
    f.vertices.len() < 3 || norm_sq(&f.area_normal()).is_negligible(&T::one(), tol.approx() * tol.approx())
}

impl<T: Scalar> Polyhedron<T> {
    /// Axis-aligned cube `center ± half`; faces labelled `Bound(0..6)`.
    pub fn cube(center: &[T], half: &T) -> Self {
        let corner = |sx: i32, sy: i32, sz: i32| -> Vec<T> {
            [sx, sy, sz]
                .iter()
                .zip(center)
                .map(|(s, c)| {
                    if *s > 0 {
                        c.clone() + half.clone()
                    } else {
                        c.clone() - half.clone()
                    }
                })
                .collect()
        };
        // loops are counter-clockwise seen from outside
        let loops: [[(i32, i32, i32); 4]; 6] = [
            [(-1, -1, -1), (-1, -1, 1), (-1, 1, 1), (-1, 1, -1)],
            [(1, -1, -1), (1, 1, -1), (1, 1, 1), (1, -1, 1)],
            [(-1, -1, -1), (1, -1, -1), (1, -1, 1), (-1, -1, 1)],
            [(-1, 1, -1), (-1, 1, 1), (1, 1, 1), (1, 1, -1)],
            [(-1, -1, -1), (-1, 1, -1), (1, 1, -1), (1, -1, -1)],
            [(-1, -1, 1), (1, -1, 1), (1, 1, 1), (-1, 1, 1)],
        ];
        let faces = loops
            .iter()
            .enumerate()
            .map(|(k, l)| Face {
                vertices: l.iter().map(|&(x, y, z)| corner(x, y, z)).collect(),
                label: EdgeLabel::Bound(k),
            })
            .collect();
        Polyhedron { faces }
    }

    pub fn is_empty(&self) -> bool {
        self.faces.len() < 4
    }

    /// Distinct vertices, in first-seen order.
    pub fn vertices(&self, tol: &T) -> Vec<Vec<T>> {
        let tol_sq = tol.clone() * tol.clone();
        let mut out = Vec::new();
        for f in &self.faces {
            for v in &f.vertices {
                push_unique(&mut out, v.clone(), &tol_sq);
            }
        }
        out
    }

    /// Distinct edges as vertex pairs.
    pub fn edges(&self) -> Vec<(Vec<T>, Vec<T>)> {
        let mut out: Vec<(Vec<T>, Vec<T>)> = Vec::new();
        for f in &self.faces {
            let n = f.vertices.len();
            for k in 0..n {
                let (a, b) = (&f.vertices[k], &f.vertices[(k + 1) % n]);
                let (a, b) = if b.partial_cmp(a) == Some(Ordering::Less) { (b, a) } else { (a, b) };
                if !out.iter().any(|(x, y)| x == a && y == b) {
                    out.push((a.clone(), b.clone()));
                }
            }
        }
        out
    }

    /// Intersection with `h`; the cap face is labelled `label`.
    pub fn clip(&self, h: &Halfspace<T>, label: EdgeLabel, tol: &T) -> Self {
        let values: Vec<Vec<T>> = self
            .faces
            .iter()
            .map(|f| f.vertices.iter().map(|v| h.evaluate(v)).collect())
            .collect();
        let sides: Vec<Vec<Side>> = values
            .iter()
            .map(|vs| vs.iter().map(|s| side(s, tol)).collect())
            .collect();
        if sides.iter().flatten().all(|s| *s != Side::Greater) {
            return self.clone();
        }
        if sides.iter().flatten().all(|s| *s != Side::Less) {
            return Polyhedron { faces: Vec::new() };
        }
        let tol_sq = tol.clone() * tol.clone();
        let mut cap: Vec<Vec<T>> = Vec::new();
        let mut faces = Vec::with_capacity(self.faces.len() + 1);
        for (fi, f) in self.faces.iter().enumerate() {
            let n = f.vertices.len();
            let mut out = Vec::with_capacity(n + 1);
            for k in 0..n {
                let m = (k + 1) % n;
                let (cur, next) = (&f.vertices[k], &f.vertices[m]);
                let (sc, sn) = (sides[fi][k], sides[fi][m]);
                if sc != Side::Greater {
                    out.push(cur.clone());
                }
                if sc == Side::Equal {
                    push_unique(&mut cap, cur.clone(), &tol_sq);
                }
                if (sc == Side::Less && sn == Side::Greater) || (sc == Side::Greater && sn == Side::Less) {
                    let x = crossing_point(cur, next, &values[fi][k], &values[fi][m]);
                    push_unique(&mut cap, x.clone(), &tol_sq);
                    out.push(x);
                }
            }
            let mut dedup: Vec<Vec<T>> = Vec::with_capacity(out.len());
            for v in out {
                if dedup.last().is_none_or(|l| dist_sq(l, &v) > tol_sq) {
                    dedup.push(v);
                }
            }
            while dedup.len() > 1 && dist_sq(&dedup[0], dedup.last().unwrap()) <= tol_sq {
                dedup.pop();
            }
            let face = Face {
                vertices: dedup,
                label: f.label,
            };
            if !negligible_area(&face, tol) {
                faces.push(face);
            }
        }
        let cap = Face {
            vertices: order_around(cap, &h.normal),
            label,
        };
        if !negligible_area(&cap, tol) {
            faces.push(cap);
        }
        if faces.len() < 4 {
            faces.clear();
        }
        Polyhedron { faces }
    }
}

/// Sorts coplanar points counter-clockwise around `normal` using only
/// ring operations.
fn order_around<T: Scalar>(points: Vec<Vec<T>>, normal: &[T]) -> Vec<Vec<T>> {
    if points.len() < 3 {
        return points;
    }
    let n = T::from_usize(points.len()).expect("small count");
    let sum = points
        .iter()
        .fold(vec![T::zero(), T::zero(), T::zero()], |acc, p| add(&acc, p));
    let centroid = scale(&sum, &(T::one() / n));
    let reference = sub(&points[0], &centroid);
    let half = |u: &[T]| -> u8 {
        let c = dot(&cross3(&reference, u), normal);
        if c > T::zero() || (c.is_zero() && dot(&reference, u) > T::zero()) {
            0
        } else {
            1
        }
    };
    let mut keyed: Vec<(u8, Vec<T>, Vec<T>)> = points
        .into_iter()
        .map(|p| {
            let u = sub(&p, &centroid);
            (half(&u), u, p)
        })
        .collect();
    keyed.sort_by(|(ha, ua, _), (hb, ub, _)| {
        ha.cmp(hb).then_with(|| {
            let c = dot(&cross3(ua, ub), normal);
            if c > T::zero() {
                Ordering::Less
            } else if c < T::zero() {
                Ordering::Greater
            } else {
                Ordering::Equal
            }
        })
    });
    keyed.into_iter().map(|(_, _, p)| p).collect()
}
