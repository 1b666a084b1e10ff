//! Lacunary generators `sum_m T^{i_m}` with `i_1 = 2`, `i_{m+1} = m(1 + i_m) + 1`.

use std::sync::Arc;

use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::lognorm::{LogNorm, RadiusContext};
use crate::series::{SeriesKind, TateSeries};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SparseSpec {
    pub indices: Vec<i64>,
}

impl SparseSpec {
    pub fn terms(&self) -> usize {
        self.indices.len()
    }

    /// `i_m` (1-based).
    pub fn index(&self, m: usize) -> i64 {
        self.indices[m - 1]
    }
}

/// The first `m` exponents of the sequence.
pub fn sparse_indices(m: usize) -> Result<SparseSpec> {
    if m == 0 {
        return Err(Error::PreconditionFailed("need at least one term".into()));
    }
    let mut v: Vec<i64> = vec![2];
    for j in 1..m as i64 {
        let last = *v.last().expect("nonempty");
        let next = last
            .checked_add(1)
            .and_then(|x| x.checked_mul(j))
            .and_then(|x| x.checked_add(1))
            .ok_or_else(|| Error::CapExceeded(format!("exponent i_{} overflows", j + 1)))?;
        v.push(next);
    }
    Ok(SparseSpec { indices: v })
}

/// A radius that is usable for the construction: declared irrational and `< 1`.
pub fn check_generic_radius(ctx: &RadiusContext, radius_id: &str) -> Result<()> {
    let decl = &ctx.radii[ctx.index_of(radius_id)?];
    if !decl.is_irrational() {
        return Err(Error::PreconditionFailed(format!("radius `{radius_id}` is not declared irrational")));
    }
    // value is q^-L with L = log_q(1/r); r < 1 iff L > 0
    let (lo, _) = decl.interval(16);
    if !lo.is_positive() {
        return Err(Error::PreconditionFailed(format!("radius `{radius_id}` is not below 1")));
    }
    Ok(())
}

#[derive(Clone, Debug)]
pub struct SparseSeries {
    pub spec: SparseSpec,
    /// `sum_{j <= m} T^{i_j}`, exact.
    pub truncation: TateSeries,
    /// The same terms with the tail `r^{i_{m+1}}` from `T^{i_{m+1}}` on:
    /// the full lacunary series as an element of the Tate algebra.
    pub ideal: TateSeries,
}

pub fn sparse_series(
    m: usize,
    field: &Arc<FieldSpec>,
    ctx: &Arc<RadiusContext>,
    radius_id: &str,
) -> Result<SparseSeries> {
    check_generic_radius(ctx, radius_id)?;
    let spec = sparse_indices(m + 1)?;
    let mut truncation = TateSeries::zero(field, ctx, &[radius_id], SeriesKind::Power)?;
    for &i in &spec.indices[..m] {
        truncation.set_coeff(&[i], Scalar::one(field))?;
    }
    let next = spec.indices[m];
    let bound: LogNorm = truncation.radius_monomial(&[next]);
    let ideal = truncation.clone().with_tail(bound, Some(next))?;
    Ok(SparseSeries { spec: SparseSpec { indices: spec.indices[..m].to_vec() }, truncation, ideal })
}
