//! Isometries between the five models.
//!
//! Klein is the hub: every conversion is "source → Klein → target", each leg
//! being one closed-form primitive on unit-model coordinates. The primitives
//! that need a square root (`√(1-‖x‖²)`) go through
//! [`Scalar::sqrt_checked`], so in rational mode a conversion succeeds
//! exactly when its result is rational.

use crate::linalg::norm_sq;
use crate::models::{validate_point, ModelPoint, ModelTag, MEMBERSHIP_TOLERANCE};
use crate::{Error, Result, Scalar};

/// Klein points closer than this to the ideal boundary are rejected in float mode.
pub const BOUNDARY_GUARD: f64 = 1e-14;

/// One closed-form map on unit-model coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Step {
    /// `x / (1 + √(1-‖x‖²))`
    PoincareFromKlein,
    /// `2x / (1 + ‖x‖²)`
    KleinFromPoincare,
    /// `(x_1, …, x_{d-1}, √(1-‖x‖²)) / (1 - x_d)`, height stored last
    UpperFromKlein,
    /// `(2v_1, …, 2v_{d-1}, ‖v‖² - 1) / (1 + ‖v‖²)`
    KleinFromUpper,
    /// `(1, x) / √(1-‖x‖²)`
    HyperboloidFromKlein,
    /// `(x_1, …, x_d) / x_0`
    KleinFromHyperboloid,
    /// `(√(1-‖x‖²), x)`
    LiftHemisphereFromKlein,
    /// `(x_1, …, x_d)`
    DropHemisphereToKlein,
}

impl Step {
    pub fn source(self) -> ModelTag {
        match self {
            Step::PoincareFromKlein
            | Step::UpperFromKlein
            | Step::HyperboloidFromKlein
            | Step::LiftHemisphereFromKlein => ModelTag::Klein,
            Step::KleinFromPoincare => ModelTag::Poincare,
            Step::KleinFromUpper => ModelTag::UpperHalfSpace,
            Step::KleinFromHyperboloid => ModelTag::Hyperboloid,
            Step::DropHemisphereToKlein => ModelTag::Hemisphere,
        }
    }

    pub fn target(self) -> ModelTag {
        match self {
            Step::PoincareFromKlein => ModelTag::Poincare,
            Step::UpperFromKlein => ModelTag::UpperHalfSpace,
            Step::HyperboloidFromKlein => ModelTag::Hyperboloid,
            Step::LiftHemisphereFromKlein => ModelTag::Hemisphere,
            _ => ModelTag::Klein,
        }
    }

    /// True for the steps that take `√(1-‖x‖²)`.
    pub fn needs_sqrt(self) -> bool {
        matches!(
            self,
            Step::PoincareFromKlein
                | Step::UpperFromKlein
                | Step::HyperboloidFromKlein
                | Step::LiftHemisphereFromKlein
        )
    }

    pub fn apply<T: Scalar>(self, x: &[T]) -> Result<Vec<T>> {
        let one = T::one();
        let two = one.clone() + one.clone();
        match self {
            Step::KleinFromPoincare => {
                let den = one + norm_sq(x);
                Ok(x.iter().map(|c| two.clone() * c.clone() / den.clone()).collect())
            }
            Step::KleinFromUpper => {
                let n = norm_sq(x);
                let den = one.clone() + n.clone();
                let d = x.len();
                let mut out: Vec<T> = x[..d - 1]
                    .iter()
                    .map(|c| two.clone() * c.clone() / den.clone())
                    .collect();
                out.push((n - one) / den);
                Ok(out)
            }
            Step::KleinFromHyperboloid => {
                let x0 = x[0].clone();
                Ok(x[1..].iter().map(|c| c.clone() / x0.clone()).collect())
            }
            Step::DropHemisphereToKlein => Ok(x[1..].to_vec()),
            Step::PoincareFromKlein => {
                let s = klein_sqrt(x, "Klein to Poincaré")?;
                let den = one + s;
                Ok(x.iter().map(|c| c.clone() / den.clone()).collect())
            }
            Step::UpperFromKlein => {
                let s = klein_sqrt(x, "Klein to upper half-space")?;
                let d = x.len();
                let den = one - x[d - 1].clone();
                let mut out: Vec<T> = x[..d - 1].iter().map(|c| c.clone() / den.clone()).collect();
                out.push(s / den);
                Ok(out)
            }
            Step::HyperboloidFromKlein => {
                let s = klein_sqrt(x, "Klein to hyperboloid")?;
                let mut out = vec![one / s.clone()];
                out.extend(x.iter().map(|c| c.clone() / s.clone()));
                Ok(out)
            }
            Step::LiftHemisphereFromKlein => {
                let s = klein_sqrt(x, "Klein to hemisphere")?;
                let mut out = vec![s];
                out.extend_from_slice(x);
                Ok(out)
            }
        }
    }
}

/// `√(1-‖x‖²)` for a Klein point, with the boundary guard.
fn klein_sqrt<T: Scalar>(x: &[T], what: &'static str) -> Result<T> {
    let e = T::one() - norm_sq(x);
    guard_boundary(&e)?;
    e.sqrt_checked().ok_or(Error::NotSquareRootFree(what))
}

fn guard_boundary<T: Scalar>(e: &T) -> Result<()> {
    if *e <= T::zero() {
        return Err(Error::DomainViolation {
            model: ModelTag::Klein,
            constraint: "‖x‖² < r²",
            excess: -e.approx(),
        });
    }
    // 1 - ‖x‖² ≈ 2 (1 - ‖x‖) near the boundary
    if !T::EXACT && *e < T::lit(2.0 * BOUNDARY_GUARD) {
        return Err(Error::NumericalUnderflow(e.approx() / 2.0));
    }
    Ok(())
}

/// The sequence of primitives taking `from` coordinates to `to` coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConversionPath {
    pub from: ModelTag,
    pub to: ModelTag,
    pub steps: Vec<Step>,
}

impl ConversionPath {
    pub fn new(from: ModelTag, to: ModelTag) -> Self {
        let mut steps = Vec::new();
        if from != to {
            if let Some(s) = to_klein_step(from) {
                steps.push(s);
            }
            if let Some(s) = from_klein_step(to) {
                steps.push(s);
            }
        }
        ConversionPath { from, to, steps }
    }

    /// True when no step takes a square root.
    pub fn is_square_root_free(&self) -> bool {
        !self.steps.iter().any(|s| s.needs_sqrt())
    }

    pub fn apply_unit<T: Scalar>(&self, x: &[T]) -> Result<Vec<T>> {
        let mut cur = x.to_vec();
        for step in &self.steps {
            if step.source() == ModelTag::Klein {
                // every non-hub step lands in Klein; reject near-ideal points before leaving it
                guard_boundary(&(T::one() - norm_sq(&cur)))?;
            }
            cur = step.apply(&cur)?;
        }
        Ok(cur)
    }
}

fn to_klein_step(m: ModelTag) -> Option<Step> {
    match m {
        ModelTag::Klein => None,
        ModelTag::Poincare => Some(Step::KleinFromPoincare),
        ModelTag::UpperHalfSpace => Some(Step::KleinFromUpper),
        ModelTag::Hemisphere => Some(Step::DropHemisphereToKlein),
        ModelTag::Hyperboloid => Some(Step::KleinFromHyperboloid),
    }
}

fn from_klein_step(m: ModelTag) -> Option<Step> {
    match m {
        ModelTag::Klein => None,
        ModelTag::Poincare => Some(Step::PoincareFromKlein),
        ModelTag::UpperHalfSpace => Some(Step::UpperFromKlein),
        ModelTag::Hemisphere => Some(Step::LiftHemisphereFromKlein),
        ModelTag::Hyperboloid => Some(Step::HyperboloidFromKlein),
    }
}

/// Converts `p` to the model `to`, preserving curvature and hyperbolic distance.
pub fn convert<T: Scalar>(p: &ModelPoint<T>, to: ModelTag) -> Result<ModelPoint<T>> {
    validate_point(p, MEMBERSHIP_TOLERANCE)?;
    if p.model() == to {
        return Ok(p.clone());
    }
    let unit = p.unit_coords()?;
    let out = ConversionPath::new(p.model(), to).apply_unit(&unit)?;
    ModelPoint::from_unit_coords(to, out, p.curvature().clone())
}

/// Unit-model Klein coordinates of `p`.
pub fn unit_klein<T: Scalar>(p: &ModelPoint<T>) -> Result<Vec<T>> {
    validate_point(p, MEMBERSHIP_TOLERANCE)?;
    let unit = p.unit_coords()?;
    ConversionPath::new(p.model(), ModelTag::Klein).apply_unit(&unit)
}

/// Unit-model hemisphere coordinates of `p`.
pub fn unit_hemisphere<T: Scalar>(p: &ModelPoint<T>) -> Result<Vec<T>> {
    validate_point(p, MEMBERSHIP_TOLERANCE)?;
    let unit = p.unit_coords()?;
    ConversionPath::new(p.model(), ModelTag::Hemisphere).apply_unit(&unit)
}

/// Vertical lift of a unit Klein point onto the unit hemisphere.
pub fn lift_b_from_k<T: Scalar>(x: &[T]) -> Result<Vec<T>> {
    guard_boundary(&(T::one() - norm_sq(x)))?;
    Step::LiftHemisphereFromKlein.apply(x)
}

/// Vertical projection of a unit hemisphere point to the Klein ball.
pub fn drop_b_to_k<T: Scalar>(x: &[T]) -> Vec<T> {
    x[1..].to_vec()
}
