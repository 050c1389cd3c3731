//! Scalar abstraction shared by the whole kernel.
//!
//! Everything that only needs field operations and comparisons is written
//! against [`Scalar`], which is implemented for `f32`, `f64` and
//! [`BigRational`]. Operations that need transcendental functions
//! (distances, geodesics, sampling) require [`Real`], which only the float
//! types implement.
//!
//! Square roots go through [`Scalar::sqrt_checked`]: floats always succeed
//! on non-negative input, rationals succeed only when the value is the
//! square of a rational. A `None` therefore means "this path is not
//! square-root-free for this input".

use std::fmt::Debug;
use std::ops::Neg;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Float, FloatConst, FromPrimitive, Num, One, Signed, ToPrimitive, Zero};

pub trait Scalar:
    Clone
    + Debug
    + PartialOrd
    + Num
    + Neg<Output = Self>
    + FromPrimitive
    + ToPrimitive
    + Send
    + Sync
    + 'static
{
    /// True when arithmetic is exact (no rounding).
    const EXACT: bool;

    /// Converts an `f64` literal. Exact types take the binary value verbatim.
    fn lit(x: f64) -> Self;

    /// Nearest `f64` (NaN if unrepresentable).
    fn approx(&self) -> f64;

    fn sqrt_checked(&self) -> Option<Self>;

    /// Absolute tolerance used for power-distance ties. Zero for exact types.
    fn tie_tolerance() -> Self;

    /// Rescales a coefficient tuple by a positive factor into the type's
    /// canonical representative. The first `lead` entries are the normal:
    /// floats normalize it to unit length, rationals reduce the whole tuple
    /// to coprime integers.
    fn canonicalize(coeffs: &mut [Self], lead: usize);

    fn magnitude(&self) -> Self {
        if *self < Self::zero() {
            -self.clone()
        } else {
            self.clone()
        }
    }

    /// `|self| <= rel * |scale|` for floats, `self == 0` for exact types.
    fn is_negligible(&self, scale: &Self, rel: f64) -> bool {
        if Self::EXACT {
            self.is_zero()
        } else {
            self.magnitude() <= scale.magnitude() * Self::lit(rel)
        }
    }
}

/// Float scalars: everything in [`Scalar`] plus transcendental functions.
pub trait Real: Scalar + Float + FloatConst {}

macro_rules! float_scalar {
    ($t:ty, $tie:expr) => {
        impl Scalar for $t {
            const EXACT: bool = false;

            fn lit(x: f64) -> Self {
                x as $t
            }

            fn approx(&self) -> f64 {
                *self as f64
            }

            fn sqrt_checked(&self) -> Option<Self> {
                if *self >= 0.0 {
                    Some(Float::sqrt(*self))
                } else {
                    None
                }
            }

            fn tie_tolerance() -> Self {
                $tie
            }

            fn canonicalize(coeffs: &mut [Self], lead: usize) {
                let norm = Float::sqrt(coeffs[..lead].iter().map(|c| c * c).sum::<$t>());
                let scale = if norm > 0.0 {
                    norm
                } else {
                    match coeffs.iter().find(|c| **c != 0.0) {
                        Some(c) => Float::abs(*c),
                        None => return,
                    }
                };
                for c in coeffs.iter_mut() {
                    *c /= scale;
                }
            }
        }

        impl Real for $t {}
    };
}

float_scalar!(f64, 1e-12);
float_scalar!(f32, 1e-6);

fn exact_sqrt_int(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let root = n.sqrt();
    if &root * &root == *n {
        Some(root)
    } else {
        None
    }
}

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn lit(x: f64) -> Self {
        BigRational::from_f64(x).expect("finite literal")
    }

    fn approx(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    fn sqrt_checked(&self) -> Option<Self> {
        // Ratio is kept reduced, so a rational square has square numerator and denominator.
        let n = exact_sqrt_int(self.numer())?;
        let d = exact_sqrt_int(self.denom())?;
        Some(BigRational::new(n, d))
    }

    fn tie_tolerance() -> Self {
        BigRational::zero()
    }

    fn canonicalize(coeffs: &mut [Self], _lead: usize) {
        let lcm = coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let gcd = coeffs
            .iter()
            .map(|c| c.numer() * (&lcm / c.denom()))
            .fold(BigInt::zero(), |acc, n| acc.gcd(&n));
        if gcd.is_zero() {
            return;
        }
        let factor = BigRational::new(lcm, gcd);
        for c in coeffs.iter_mut() {
            *c = &*c * &factor;
        }
    }
}
