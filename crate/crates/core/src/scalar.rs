//! Scalar abstraction shared by every numerical type in the crate.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use num_complex::Complex;
use num_traits::{Float, FloatConst, NumAssign};

/// Real scalar the simulator is generic over (`f32` or `f64`).
pub trait Real:
    Float + FloatConst + NumAssign + Sum + Default + Debug + Display + LowerExp + Send + Sync + 'static
{
    /// Slack allowed above unit squared norm and on amplitude comparisons.
    fn norm_slack() -> Self;

    /// Moduli below this are treated as exact zeros when pruning states.
    fn prune_threshold() -> Self;

    fn lit(x: f64) -> Self {
        <Self as num_traits::NumCast>::from(x).expect("literal representable in scalar type")
    }

    fn as_f64(self) -> f64 {
        num_traits::ToPrimitive::to_f64(&self).unwrap_or(f64::NAN)
    }
}

impl Real for f64 {
    fn norm_slack() -> Self {
        1e-12
    }

    fn prune_threshold() -> Self {
        1e-300
    }
}

impl Real for f32 {
    fn norm_slack() -> Self {
        1e-5
    }

    fn prune_threshold() -> Self {
        1e-37
    }
}

pub type C<T> = Complex<T>;

#[inline]
pub fn c<T: Real>(re: T, im: T) -> C<T> {
    Complex::new(re, im)
}

#[inline]
pub fn re<T: Real>(x: T) -> C<T> {
    Complex::new(x, T::zero())
}

#[inline]
pub fn frac_1_sqrt_2<T: Real>() -> T {
    T::FRAC_1_SQRT_2()
}
