//! Scalar abstraction: the numeric core is generic over the underlying real
//! float type, with the paired complex type carrying the dense linear-algebra
//! backend bounds.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::{Product, Sum};

use ndarray_linalg::{Lapack, Scalar};
use num_complex::Complex;
use num_traits::{Float, FloatConst, NumAssign};

/// Real floating-point scalar (f32 or f64) underlying all numerics.
///
/// `Cplx` is the matching complex type; it is the element type of every
/// matrix and vector in the library and satisfies the LAPACK-backed solver
/// bounds, so eigendecompositions and linear solves stay generic.
pub trait Real:
    Float
    + FloatConst
    + NumAssign
    + Sum
    + Product
    + Debug
    + Display
    + LowerExp
    + rustfft::FftNum
    + Send
    + Sync
    + 'static
{
    type Cplx: Scalar<Real = Self, Complex = Self::Cplx>
        + Lapack
        + From<Complex<Self>>
        + Into<Complex<Self>>
        + Send
        + Sync;

    /// Complex number from real and imaginary parts.
    fn c(re: Self, im: Self) -> Self::Cplx {
        Complex::new(re, im).into()
    }

    /// Purely real complex number.
    fn cr(re: Self) -> Self::Cplx {
        Self::c(re, Self::zero())
    }

    /// The imaginary unit.
    fn i() -> Self::Cplx {
        Self::c(Self::zero(), Self::one())
    }

    /// Convert an f64 constant; panics only if the value is not representable,
    /// which cannot happen for the hard-coded tableau/weight constants used here.
    fn rl(x: f64) -> Self {
        Self::from(x).expect("constant not representable in this scalar type")
    }
}

impl Real for f32 {
    type Cplx = Complex<f32>;
}

impl Real for f64 {
    type Cplx = Complex<f64>;
}

/// Complex number from f64 parts in the target scalar type.
pub fn cx<T: Real>(re: f64, im: f64) -> T::Cplx {
    T::c(T::rl(re), T::rl(im))
}
