//! Scalar abstraction: the workbench is generic over the real floating-point
//! type used for matrix entries and momenta.

use nalgebra::RealField;
use num_traits::{FromPrimitive, ToPrimitive};

/// Real scalar the library is generic over (`f64` for production runs, `f32`
/// for quick scans). Bundles the field operations nalgebra needs with the
/// conversions from literals and grid indices used throughout.
pub trait Scalar: RealField + FromPrimitive + ToPrimitive + Copy {
    /// Convert an `f64` literal (tolerances, default thresholds).
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in scalar type")
    }

    /// Convert a grid index or count.
    fn from_index(i: usize) -> Self {
        Self::from_usize(i).expect("index representable in scalar type")
    }

    /// Convert a signed integer exponent.
    fn from_int(i: i64) -> Self {
        Self::from_i64(i).expect("integer representable in scalar type")
    }

    /// Lossy view as `f64`, used for diagnostics in error values.
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl<T> Scalar for T where T: RealField + FromPrimitive + ToPrimitive + Copy {}
