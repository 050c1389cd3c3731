//! Small dense-vector helpers over [`Scalar`] slices.

use crate::Scalar;

pub(crate) fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter()
        .zip(b)
        .fold(T::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

pub(crate) fn norm_sq<T: Scalar>(a: &[T]) -> T {
    dot(a, a)
}

pub(crate) fn sub<T: Scalar>(a: &[T], b: &[T]) -> Vec<T> {
    a.iter().zip(b).map(|(x, y)| x.clone() - y.clone()).collect()
}

pub(crate) fn add<T: Scalar>(a: &[T], b: &[T]) -> Vec<T> {
    a.iter().zip(b).map(|(x, y)| x.clone() + y.clone()).collect()
}

pub(crate) fn scale<T: Scalar>(a: &[T], s: &T) -> Vec<T> {
    a.iter().map(|x| x.clone() * s.clone()).collect()
}

pub(crate) fn dist_sq<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (x, y)| {
        let d = x.clone() - y.clone();
        acc + d.clone() * d
    })
}

/// `a + t (b - a)`
pub(crate) fn lerp<T: Scalar>(a: &[T], b: &[T], t: &T) -> Vec<T> {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.clone() + t.clone() * (y.clone() - x.clone()))
        .collect()
}

pub(crate) fn cross3<T: Scalar>(a: &[T], b: &[T]) -> Vec<T> {
    vec![
        a[1].clone() * b[2].clone() - a[2].clone() * b[1].clone(),
        a[2].clone() * b[0].clone() - a[0].clone() * b[2].clone(),
        a[0].clone() * b[1].clone() - a[1].clone() * b[0].clone(),
    ]
}

pub(crate) fn max_abs<T: Scalar>(a: &[T]) -> T {
    a.iter().fold(T::zero(), |m, x| {
        let x = x.magnitude();
        if x > m {
            x
        } else {
            m
        }
    })
}

pub(crate) fn to_f64<T: Scalar>(a: &[T]) -> Vec<f64> {
    a.iter().map(Scalar::approx).collect()
}

/// Squared distance from `c` to the segment `[a, b]`.
pub(crate) fn segment_dist_sq<T: Scalar>(c: &[T], a: &[T], b: &[T]) -> T {
    let ab = sub(b, a);
    let len = norm_sq(&ab);
    if len.is_zero() {
        return dist_sq(c, a);
    }
    let t = dot(&sub(c, a), &ab) / len;
    let t = if t < T::zero() {
        T::zero()
    } else if t > T::one() {
        T::one()
    } else {
        t
    };
    dist_sq(c, &lerp(a, b, &t))
}
