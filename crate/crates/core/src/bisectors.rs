//! Bisectors and geodesics in every model.
//!
//! Every bisector is a quadric `λ‖x‖² + ⟨a, x⟩ + b = 0` in the model's stored
//! coordinates (ambient `d+1` coordinates for hemisphere and hyperboloid).
//! Surfaces returned by [`bisector`] are oriented so that the first site lies
//! on the negative side.

use std::fmt;

use num_traits::Float;

use crate::conversions::ConversionPath;
use crate::linalg::{dot, max_abs, norm_sq, scale, sub};
use crate::models::{check_pair, unit_distance, validate_point, Curvature, ModelPoint, ModelTag, MEMBERSHIP_TOLERANCE};
use crate::{Error, Real, Result, Scalar};

/// Relative tolerance on coefficients used by [`ImplicitSurface::classify`].
pub const CLASSIFY_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct ImplicitSurface<T> {
    pub lambda: T,
    pub a: Vec<T>,
    pub b: T,
    pub model: ModelTag,
    pub curvature: Curvature<T>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SurfaceClass {
    Hyperplane,
    HyperplaneThroughOrigin,
    Sphere,
    /// Hemisphere only: ambient hyperplane with no `x_0` term.
    VerticalSphere,
}

impl SurfaceClass {
    pub fn is_hyperplane(self) -> bool {
        matches!(self, SurfaceClass::Hyperplane | SurfaceClass::HyperplaneThroughOrigin)
    }

    pub fn name(self) -> &'static str {
        match self {
            SurfaceClass::Hyperplane => "hyperplane",
            SurfaceClass::HyperplaneThroughOrigin => "hyperplane-through-origin",
            SurfaceClass::Sphere => "sphere",
            SurfaceClass::VerticalSphere => "vertical-sphere",
        }
    }
}

impl fmt::Display for SurfaceClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for SurfaceClass {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Ok(match s {
            "hyperplane" => SurfaceClass::Hyperplane,
            "hyperplane-through-origin" => SurfaceClass::HyperplaneThroughOrigin,
            "sphere" => SurfaceClass::Sphere,
            "vertical-sphere" => SurfaceClass::VerticalSphere,
            _ => return Err(format!("unknown surface class `{s}`")),
        })
    }
}

impl<T: Scalar> ImplicitSurface<T> {
    pub fn new(lambda: T, a: Vec<T>, b: T, model: ModelTag, curvature: Curvature<T>) -> Self {
        ImplicitSurface {
            lambda,
            a,
            b,
            model,
            curvature,
        }
    }

    /// Builds a surface from coefficients on the unit model (`x = r y`).
    pub fn from_unit(lambda: T, a: Vec<T>, b: T, model: ModelTag, curvature: Curvature<T>) -> Result<Self> {
        if curvature.is_unit() {
            return Ok(Self::new(lambda, a, b, model, curvature));
        }
        let r = curvature.radius()?;
        let lambda = lambda / curvature.radius_sq();
        let a = a.into_iter().map(|c| c / r.clone()).collect();
        Ok(Self::new(lambda, a, b, model, curvature))
    }

    /// Coefficients on the unit model: `(λ r², a r, b)`.
    pub fn unit_coefficients(&self) -> Result<(T, Vec<T>, T)> {
        if self.curvature.is_unit() {
            return Ok((self.lambda.clone(), self.a.clone(), self.b.clone()));
        }
        let r = self.curvature.radius()?;
        Ok((
            self.lambda.clone() * self.curvature.radius_sq(),
            scale(&self.a, &r),
            self.b.clone(),
        ))
    }

    /// `λ‖x‖² + ⟨a, x⟩ + b`.
    pub fn evaluate(&self, x: &[T]) -> Result<T> {
        if x.len() != self.a.len() {
            return Err(Error::ArityMismatch {
                expected: self.a.len(),
                found: x.len(),
            });
        }
        Ok(self.lambda.clone() * norm_sq(x) + dot(&self.a, x) + self.b.clone())
    }

    pub fn negated(&self) -> Self {
        Self::new(
            -self.lambda.clone(),
            self.a.iter().map(|c| -c.clone()).collect(),
            -self.b.clone(),
            self.model,
            self.curvature.clone(),
        )
    }

    fn coefficient_scale(&self) -> T {
        let m = max_abs(&self.a);
        let l = self.lambda.magnitude();
        let b = self.b.magnitude();
        let m = if l > m { l } else { m };
        if b > m {
            b
        } else {
            m
        }
    }

    /// Projective canonical form: the first nonzero of `(λ, a, b)` becomes `+1`.
    pub fn canonical(&self) -> Self {
        let lead = std::iter::once(&self.lambda)
            .chain(self.a.iter())
            .chain(std::iter::once(&self.b))
            .find(|c| !c.is_zero())
            .cloned()
            .unwrap_or_else(T::one);
        Self::new(
            self.lambda.clone() / lead.clone(),
            self.a.iter().map(|c| c.clone() / lead.clone()).collect(),
            self.b.clone() / lead,
            self.model,
            self.curvature.clone(),
        )
    }

    /// Center and squared radius when the surface is a sphere.
    pub fn sphere(&self) -> Option<(Vec<T>, T)> {
        if self.lambda.is_negligible(&self.coefficient_scale(), CLASSIFY_TOLERANCE) {
            return None;
        }
        let two_l = self.lambda.clone() + self.lambda.clone();
        let center: Vec<T> = self.a.iter().map(|c| -c.clone() / two_l.clone()).collect();
        let r2 = norm_sq(&center) - self.b.clone() / self.lambda.clone();
        Some((center, r2))
    }

    pub fn classify(&self) -> Result<SurfaceClass> {
        let s = self.coefficient_scale();
        let negligible = |c: &T| c.is_negligible(&s, CLASSIFY_TOLERANCE);
        if !negligible(&self.lambda) {
            let (_, r2) = self.sphere().expect("λ ≠ 0");
            if r2 <= T::zero() {
                return Err(Error::DegenerateSurface(r2.approx()));
            }
            return Ok(SurfaceClass::Sphere);
        }
        if self.model == ModelTag::Hemisphere && negligible(&self.a[0]) {
            return Ok(SurfaceClass::VerticalSphere);
        }
        if negligible(&self.b) {
            Ok(SurfaceClass::HyperplaneThroughOrigin)
        } else {
            Ok(SurfaceClass::Hyperplane)
        }
    }

    /// Unit-model Klein hyperplane `(a, b)` carrying the same zero set.
    fn unit_klein_hyperplane(&self) -> Result<(Vec<T>, T)> {
        let (lambda, a, b) = self.unit_coefficients()?;
        let s = self.coefficient_scale();
        let negligible = |c: &T| c.is_negligible(&s, CLASSIFY_TOLERANCE);
        let unsupported = |reason| Error::UnsupportedPath {
            from: self.model,
            to: ModelTag::Klein,
            reason,
        };
        let two = T::one() + T::one();
        match self.model {
            ModelTag::Klein => {
                if !negligible(&lambda) {
                    return Err(unsupported("Klein quadric is not a hyperplane"));
                }
                Ok((a, b))
            }
            ModelTag::Poincare => {
                if !negligible(&(lambda.clone() - b.clone())) {
                    return Err(unsupported("sphere is not orthogonal to the ideal boundary"));
                }
                let mid = (lambda + b) / two.clone();
                Ok((a.iter().map(|c| c.clone() / two.clone()).collect(), mid))
            }
            ModelTag::UpperHalfSpace => {
                let d = a.len();
                if !negligible(&a[d - 1]) {
                    return Err(unsupported("surface is not centered on the ideal boundary"));
                }
                let mut ak: Vec<T> = a[..d - 1].iter().map(|c| c.clone() / two.clone()).collect();
                ak.push((lambda.clone() - b.clone()) / two.clone());
                Ok((ak, (lambda + b) / two))
            }
            ModelTag::Hemisphere => {
                if !negligible(&lambda) || !negligible(&a[0]) {
                    return Err(unsupported("hemisphere surface is not vertical"));
                }
                Ok((a[1..].to_vec(), b))
            }
            ModelTag::Hyperboloid => {
                if !negligible(&lambda) || !negligible(&b) {
                    return Err(unsupported("hyperboloid surface is not a linear hyperplane"));
                }
                Ok((a[1..].to_vec(), a[0].clone()))
            }
        }
    }

    /// Re-expresses the surface in another model by substituting the
    /// Klein-hub conversion maps into its equation. Orientation is kept.
    pub fn transport(&self, to: ModelTag) -> Result<Self> {
        let (a, b) = self.unit_klein_hyperplane()?;
        let (lambda, a, b) = klein_hyperplane_in(to, a, b);
        Self::from_unit(lambda, a, b, to, self.curvature.clone())
    }
}

/// Coefficients in model `to` (unit) of the Klein hyperplane `⟨a, x⟩ + b = 0`.
/// Each substitution is multiplied by a positive factor, so sides are kept.
pub(crate) fn klein_hyperplane_in<T: Scalar>(to: ModelTag, a: Vec<T>, b: T) -> (T, Vec<T>, T) {
    let two = T::one() + T::one();
    match to {
        ModelTag::Klein => (T::zero(), a, b),
        // x = 2y/(1+|y|²), times (1+|y|²)
        ModelTag::Poincare => (b.clone(), scale(&a, &two), b),
        // x_i = 2v_i/(1+|v|²), x_d = (|v|²-1)/(|v|²+1), times (1+|v|²)
        ModelTag::UpperHalfSpace => {
            let d = a.len();
            let ad = a[d - 1].clone();
            let mut au: Vec<T> = a[..d - 1].iter().map(|c| two.clone() * c.clone()).collect();
            au.push(T::zero());
            (ad.clone() + b.clone(), au, b - ad)
        }
        ModelTag::Hemisphere => {
            let mut ab = vec![T::zero()];
            ab.extend(a);
            (T::zero(), ab, b)
        }
        // x = X/X_0, times X_0
        ModelTag::Hyperboloid => {
            let mut al = vec![b];
            al.extend(a);
            (T::zero(), al, T::zero())
        }
    }
}

/// Same as [`ImplicitSurface::transport`].
pub fn transport_surface<T: Scalar>(s: &ImplicitSurface<T>, to: ModelTag) -> Result<ImplicitSurface<T>> {
    s.transport(to)
}

/// Locus of points equidistant from `p` and `q`, with `p` on the negative side.
pub fn bisector<T: Scalar>(p: &ModelPoint<T>, q: &ModelPoint<T>) -> Result<ImplicitSurface<T>> {
    check_pair(p, q)?;
    validate_point(p, MEMBERSHIP_TOLERANCE)?;
    validate_point(q, MEMBERSHIP_TOLERANCE)?;
    if p.coords() == q.coords() {
        return Err(Error::CoincidentSites(0, 1));
    }
    let x = p.unit_coords()?;
    let y = q.unit_coords()?;
    let one = T::one();
    let two = one.clone() + one.clone();
    let model = p.model();
    let (lambda, a, b) = match model {
        ModelTag::Klein => {
            let sp = (one.clone() - norm_sq(&x))
                .sqrt_checked()
                .ok_or(Error::NotSquareRootFree("Klein bisector"))?;
            let sq = (one.clone() - norm_sq(&y))
                .sqrt_checked()
                .ok_or(Error::NotSquareRootFree("Klein bisector"))?;
            let a = sub(&scale(&y, &sp), &scale(&x, &sq));
            (T::zero(), a, sq - sp)
        }
        ModelTag::Poincare => {
            let np = norm_sq(&x);
            let nq = norm_sq(&y);
            let ap = one.clone() / (one.clone() - np.clone());
            let aq = one.clone() / (one.clone() - nq.clone());
            let a = scale(&sub(&scale(&y, &aq), &scale(&x, &ap)), &two);
            (ap.clone() - aq.clone(), a, np * ap - nq * aq)
        }
        ModelTag::UpperHalfSpace => {
            let h = x.len() - 1;
            let ip = one.clone() / x[h].clone();
            let iq = one.clone() / y[h].clone();
            let a = scale(&sub(&scale(&y, &iq), &scale(&x, &ip)), &two);
            let b = norm_sq(&x) * ip.clone() - norm_sq(&y) * iq.clone();
            (ip - iq, a, b)
        }
        ModelTag::Hyperboloid => {
            let mut a = sub(&y, &x);
            a[0] = x[0].clone() - y[0].clone();
            (T::zero(), a, T::zero())
        }
        ModelTag::Hemisphere => {
            let ip = one.clone() / x[0].clone();
            let iq = one.clone() / y[0].clone();
            let mut a = sub(&scale(&y, &iq), &scale(&x, &ip));
            a[0] = T::zero();
            (T::zero(), a, ip - iq)
        }
    };
    ImplicitSurface::from_unit(lambda, a, b, model, p.curvature().clone())
}

/// Point at parameter `t` on the constant-speed geodesic from `p` (t = 0) to `q` (t = 1).
pub fn geodesic<T: Real>(p: &ModelPoint<T>, q: &ModelPoint<T>, t: T) -> Result<ModelPoint<T>> {
    check_pair(p, q)?;
    validate_point(p, MEMBERSHIP_TOLERANCE)?;
    validate_point(q, MEMBERSHIP_TOLERANCE)?;
    if p.coords() == q.coords() {
        return Err(Error::CoincidentSites(0, 1));
    }
    let model = p.model();
    let to_l = ConversionPath::new(model, ModelTag::Hyperboloid);
    let from_l = ConversionPath::new(ModelTag::Hyperboloid, model);
    let lp = to_l.apply_unit(&p.unit_coords()?)?;
    let lq = to_l.apply_unit(&q.unit_coords()?)?;
    let dist = unit_distance(ModelTag::Hyperboloid, &lp, &lq);
    let unit = if dist < T::lit(1e-6) {
        let kp = ConversionPath::new(model, ModelTag::Klein).apply_unit(&p.unit_coords()?)?;
        let kq = ConversionPath::new(model, ModelTag::Klein).apply_unit(&q.unit_coords()?)?;
        let k = crate::linalg::lerp(&kp, &kq, &t);
        ConversionPath::new(ModelTag::Klein, model).apply_unit(&k)?
    } else {
        let sd = Float::sinh(dist);
        let wp = Float::sinh((T::one() - t) * dist) / sd;
        let wq = Float::sinh(t * dist) / sd;
        let l: Vec<T> = lp.iter().zip(&lq).map(|(a, b)| wp * *a + wq * *b).collect();
        from_l.apply_unit(&l)?
    };
    ModelPoint::from_unit_coords(model, unit, p.curvature().clone())
}
