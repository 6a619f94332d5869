use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::{norm_sq3, Scalar};
use crate::setup::degeneracy_groups;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CaseId {
    I,
    Ii,
    Iii,
    Iv,
    V,
    Vi,
}

impl CaseId {
    pub const ALL: [CaseId; 6] = [CaseId::I, CaseId::Ii, CaseId::Iii, CaseId::Iv, CaseId::V, CaseId::Vi];

    pub fn as_str(self) -> &'static str {
        match self {
            CaseId::I => "i",
            CaseId::Ii => "ii",
            CaseId::Iii => "iii",
            CaseId::Iv => "iv",
            CaseId::V => "v",
            CaseId::Vi => "vi",
        }
    }

    pub fn verdict(self) -> Verdict {
        match self {
            CaseId::I | CaseId::Ii | CaseId::Iii => Verdict::Stable,
            _ => Verdict::Unstable,
        }
    }
}

impl fmt::Display for CaseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Stable,
    Unstable,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Stable => "Stable",
            Verdict::Unstable => "Unstable",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StabilityVerdict<T> {
    pub case_id: CaseId,
    pub verdict: Verdict,
    pub lambda: T,
    pub m: usize,
}

impl<T> fmt::Display for StabilityVerdict<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "case {}: {}", self.case_id, self.verdict)
    }
}

/// The axis is not an eigenvector of the inertia tensor, or the moments
/// are out of order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NotAPermanentAxis;

/// Classify the permanent rotation about `e` for moments `A <= B <= C`.
///
/// Degeneracy is resolved first (all equal, then which pair, then distinct),
/// then `e` is located in an eigenspace. Only directions matter, so `e` need
/// not be normalised.
pub fn classify<T: Scalar>(moments: [T; 3], e: [T; 3], tol: T) -> std::result::Result<StabilityVerdict<T>, NotAPermanentAxis> {
    let [a, b, c] = moments;
    if a > b || b > c || norm_sq3(e) == T::zero() {
        return Err(NotAPermanentAxis);
    }
    let groups = degeneracy_groups(moments, tol);
    if groups.len() == 1 {
        return Ok(StabilityVerdict { case_id: CaseId::I, verdict: Verdict::Stable, lambda: a, m: 3 });
    }
    let host = groups.iter().find(|g| g.contains(e, tol)).ok_or(NotAPermanentAxis)?;
    let case_id = match (groups.len(), host.axes.as_slice()) {
        (2, [0, 1]) => CaseId::Vi,
        (2, [1, 2]) => CaseId::Iii,
        (2, [0]) => CaseId::Iv,
        (2, [2]) => CaseId::Ii,
        (3, [0]) => CaseId::Iv,
        (3, [1]) => CaseId::V,
        (3, [2]) => CaseId::Ii,
        _ => unreachable!("eigenspace layout {:?}", host.axes),
    };
    Ok(StabilityVerdict { case_id, verdict: case_id.verdict(), lambda: host.lambda, m: host.multiplicity() })
}

/// Double-precision front end reporting failures through [`Error`].
pub fn classify_f64(moments: [f64; 3], e: [f64; 3], tol: f64) -> Result<StabilityVerdict<f64>> {
    let [a, b, c] = moments;
    if a > b || b > c {
        return Err(Error::OrderViolation { a, b, c });
    }
    classify(moments, e, tol).map_err(|_| Error::NotPermanentAxis(e))
}
