use std::fmt;

use crate::scalar::Scalar;
use crate::setup::degeneracy_groups;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Attainability {
    /// Terminal rotation about the axis of maximum moment.
    GuaranteedMaxAxis,
    /// Terminal rotation somewhere in `span{e2, e3}` (`A < B = C`).
    GuaranteedDegenerateSubspace,
    NoGuarantee,
}

impl fmt::Display for Attainability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Attainability::GuaranteedMaxAxis => "GuaranteedMaxAxis",
            Attainability::GuaranteedDegenerateSubspace => "GuaranteedDegenerateSubspace",
            Attainability::NoGuarantee => "NoGuarantee",
        })
    }
}

/// Which permanent rotation the motion with relative energy `e0` and initial
/// angular velocity `w` is guaranteed to settle on.
///
/// A guarantee additionally needs a strictly positive right-hand side
/// (`w3 != 0`, or `w2^2 + w3^2 > 0` in the degenerate case): with it zero the
/// data sit on another permanent rotation, possibly an unstable one.
/// Equal moments and `w = 0` give no guarantee.
pub fn attainability<T: Scalar>(e0: T, w: [T; 3], moments: [T; 3], tol: T) -> Attainability {
    let [a, b, c] = moments;
    let two = T::two();
    let [w1, w2, w3] = [w[0] * w[0], w[1] * w[1], w[2] * w[2]];
    if e0 < T::zero() || a > b || b > c || w1 + w2 + w3 == T::zero() {
        return Attainability::NoGuarantee;
    }
    let groups = degeneracy_groups(moments, tol);
    let layout: Vec<usize> = groups.iter().map(|g| g.multiplicity()).collect();
    match layout.as_slice() {
        [2, 1] => {
            let rhs = (c - a) * c / (two * a) * w3;
            if rhs > T::zero() && e0 <= rhs {
                return Attainability::GuaranteedMaxAxis;
            }
        }
        [1, 1, 1] => {
            let first = e0 + a / (two * b) * (b - a) * w1 <= c / (two * b) * (c - b) * w3;
            let second = e0 <= b / (two * a) * (b - a) * w2 + c / (two * a) * (c - a) * w3;
            if w3 > T::zero() && first && second {
                return Attainability::GuaranteedMaxAxis;
            }
        }
        [1, 2] => {
            let rhs = b * (b - a) / (two * a) * (w2 + w3);
            if rhs > T::zero() && e0 <= rhs {
                return Attainability::GuaranteedDegenerateSubspace;
            }
        }
        _ => {}
    }
    Attainability::NoGuarantee
}
