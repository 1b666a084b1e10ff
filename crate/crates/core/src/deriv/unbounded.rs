//! The divergence table for `phi(g) = (g, dg/df)` on `g_n = f - f_n`, where
//! `f_n` is the `n`-th partial sum of a lacunary series `f`.

use std::sync::Arc;

use serde::Serialize;
use serde_json::json;

use super::poly::PolyInTF;
use super::sparse::{check_generic_radius, sparse_series};
use super::{nonintegral_certificate, phi, Certificate, CertificateKind, Verdict};
use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::lognorm::{LogNorm, RadiusContext};

#[derive(Clone, Debug, Serialize)]
pub struct UnboundedRow {
    pub n: usize,
    /// `i_{n+1}`, the lowest exponent of `g_n`.
    pub index: i64,
    pub element: String,
    pub norm: LogNorm,
    pub image_norm: LogNorm,
    pub ratio: LogNorm,
    pub ratio_log10: f64,
    /// The ratio equals `r^{-i_{n+1}}` as an exponent vector.
    pub ratio_matches: bool,
    pub exceeds_bound: bool,
}

#[derive(Clone, Debug)]
pub struct UnboundedTable {
    pub rows: Vec<UnboundedRow>,
    pub certificate: Certificate,
    /// The non-integrality certificate that makes `d/df` well defined on every `g_n`.
    pub integrality: Certificate,
}

/// Rows `n = 1..=m_max`; the verdict is `UNBOUNDED` when the ratios strictly
/// increase and the last one exceeds `10^bound_exp10`.
pub fn unboundedness_table(
    m_max: usize,
    field: &Arc<FieldSpec>,
    ctx: &Arc<RadiusContext>,
    radius_id: &str,
    bound_exp10: u32,
) -> Result<UnboundedTable> {
    if m_max == 0 {
        return Err(Error::PreconditionFailed("need at least one row".into()));
    }
    check_generic_radius(ctx, radius_id)?;
    let gen = ctx.index_of(radius_id)?;
    let sparse = sparse_series(m_max + 1, field, ctx, radius_id)?;
    let f = &sparse.ideal;
    let idx = &sparse.spec.indices;
    let integrality = nonintegral_certificate(f, 1, idx[m_max - 1] as u32)?;
    if !integrality.holds() {
        return Err(Error::MissingCertificate("the lacunary series was not certified non-integral".into()));
    }

    let mut rows: Vec<UnboundedRow> = Vec::new();
    let mut increasing = true;
    for n in 1..=m_max {
        let (head, _) = sparse.truncation.truncate(idx[n - 1])?;
        let g = PolyInTF::f(field).sub(&PolyInTF::from_series(&head)?)?;
        let image = phi(&g, f, &integrality)?;
        let (norm, exact) = image.a.gauss_norm()?;
        if !exact {
            return Err(Error::PrecisionExhausted(format!("the norm of g_{n} is not determined")));
        }
        let image_norm = image.norm()?;
        let ratio = image_norm.div(&norm)?;
        let index = idx[n];
        if let Some(prev) = rows.last() {
            increasing &= ctx.lt(&prev.ratio, &ratio)?;
        }
        rows.push(UnboundedRow {
            n,
            index,
            element: g.to_string(),
            ratio_matches: ratio == LogNorm::radius_power(gen, -index),
            ratio_log10: ctx.approx_log10(&ratio)?,
            exceeds_bound: ctx.exceeds_power_of_ten(&ratio, bound_exp10)?,
            norm,
            image_norm,
            ratio,
        });
    }
    let last = rows.last().expect("m_max >= 1");
    let all_match = rows.iter().all(|r| r.ratio_matches);
    let verdict = if increasing && all_match && last.exceeds_bound { Verdict::Unbounded } else { Verdict::NotShown };
    let certificate = Certificate {
        kind: CertificateKind::Unbounded,
        verdict,
        params: json!({
            "m_max": m_max,
            "radius": radius_id,
            "bound_log10": bound_exp10,
            "indices": idx,
        }),
        witness: json!({ "rows": rows, "strictly_increasing": increasing }),
    };
    Ok(UnboundedTable { rows, certificate, integrality })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lognorm::RadiusDecl;

    #[test]
    fn ratios_follow_the_gaps() {
        let s = FieldSpec::padic(3, 20).unwrap();
        let ctx = Arc::new(RadiusContext::new(3, vec![RadiusDecl::near_six_tenths("r1")]).unwrap());
        let t = unboundedness_table(3, &s, &ctx, "r1", 6).unwrap();
        assert!(t.certificate.holds());
        let idx: Vec<i64> = t.rows.iter().map(|r| r.index).collect();
        assert_eq!(idx, vec![4, 11, 37]);
        for r in &t.rows {
            assert!(r.image_norm.is_one());
            assert!(r.ratio_matches);
        }
        // 0.6 * 4 = 2.4 in base 3
        assert!((t.rows[0].ratio_log10 - 2.4 * 3f64.log10()).abs() < 0.01);
        let t = unboundedness_table(1, &s, &ctx, "r1", 6).unwrap();
        assert_eq!(t.certificate.verdict, Verdict::NotShown);
    }
}
