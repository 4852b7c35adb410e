//! Scalar abstraction for the floating-point parts of the crate.
//!
//! Everything that touches complex amplitudes or character values is generic
//! over [`Real`]; integer and rational bookkeeping never goes through it.

use std::fmt::{Debug, Display};

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Floating-point scalar usable for amplitudes: `f32` or `f64`.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + NumAssign + Debug + Display + Send + Sync + 'static
{
    /// Largest accepted deviation of a squared norm from 1 before a state is
    /// rejected as unnormalized.
    const NORM_TOLERANCE: f64;

    /// Largest accepted deviation of `|z|` from 1 for entries of a diagonal
    /// unitary.
    const UNIT_TOLERANCE: f64;

    fn from_f64_lossy(x: f64) -> Self {
        Self::from_f64(x).expect("finite f64 converts to every Real")
    }

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().expect("Real converts to f64")
    }
}

impl Real for f64 {
    const NORM_TOLERANCE: f64 = 1e-6;
    const UNIT_TOLERANCE: f64 = 1e-10;
}

impl Real for f32 {
    const NORM_TOLERANCE: f64 = 1e-4;
    const UNIT_TOLERANCE: f64 = 1e-5;
}

/// `exp(2πi · num/den)`, with the angle reduced and evaluated in double precision.
pub fn root_of_unity<T: Real>(num: u64, den: u64) -> Complex<T> {
    let r = num % den;
    let (s, c) = (std::f64::consts::TAU * r as f64 / den as f64).sin_cos();
    Complex::new(T::from_f64_lossy(c), T::from_f64_lossy(s))
}

/// All `den`-th roots of unity, `table[t] = exp(2πi t/den)`.
pub fn roots_of_unity<T: Real>(den: u64) -> Vec<Complex<T>> {
    (0..den).map(|t| root_of_unity(t, den)).collect()
}
