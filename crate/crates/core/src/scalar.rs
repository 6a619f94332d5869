//! Scalar abstraction for the closed-form parts of the crate.
//!
//! Inertia bookkeeping, axis classification and the attainability predicates
//! only need field arithmetic and ordering, so they are written against
//! [`Scalar`] and work for `f32`, `f64` and exact rationals alike. Tolerance
//! tests are phrased on squared quantities so no square root is required;
//! with a rational scalar and a zero tolerance every comparison is exact.
//!
//! The grid machinery (transforms, projections, time stepping) is fixed to
//! `f64`, the precision its tolerances and the checkpoint layout assume.

use std::fmt::Debug;

use num_traits::{Num, Signed};

/// Ordered field used by the closed-form routines.
pub trait Scalar: Num + Signed + PartialOrd + Copy + Debug {
    fn two() -> Self {
        Self::one() + Self::one()
    }

    fn max_of(self, other: Self) -> Self {
        if self >= other {
            self
        } else {
            other
        }
    }
}

impl<T> Scalar for T where T: Num + Signed + PartialOrd + Copy + Debug {}

/// `|a - b| <= tol * max(|a|, |b|)`.
pub fn rel_close<T: Scalar>(a: T, b: T, tol: T) -> bool {
    (a - b).abs() <= tol * a.abs().max_of(b.abs())
}

pub fn dot3<T: Scalar>(a: [T; 3], b: [T; 3]) -> T {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub fn cross3<T: Scalar>(a: [T; 3], b: [T; 3]) -> [T; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

pub fn norm_sq3<T: Scalar>(a: [T; 3]) -> T {
    dot3(a, a)
}
