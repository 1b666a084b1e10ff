//! Derivations `d/df` on subrings `k[T][f]` of the Tate algebra, the
//! square-zero homomorphisms they induce, and certificates for the
//! preconditions under which those maps are well defined.

pub mod integrality;
pub mod pbasis;
pub mod poly;
pub mod sparse;
pub mod unbounded;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::series::TateSeries;
use crate::square_zero::SquareZeroElem;

pub use integrality::nonintegral_certificate;
pub use pbasis::{p_independence_certificate, pbasis_series, IndependenceBounds};
pub use poly::PolyInTF;
pub use sparse::{sparse_indices, sparse_series, SparseSeries, SparseSpec};
pub use unbounded::{unboundedness_table, UnboundedRow, UnboundedTable};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum CertificateKind {
    NonIntegral,
    PIndependent,
    Unbounded,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    NonIntegral,
    Integral,
    PIndependent,
    PDependent,
    Unbounded,
    NotShown,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub kind: CertificateKind,
    pub verdict: Verdict,
    pub params: Value,
    pub witness: Value,
}

impl Certificate {
    /// True iff the verdict is the property the certificate is named for.
    pub fn holds(&self) -> bool {
        matches!(
            (self.kind, self.verdict),
            (CertificateKind::NonIntegral, Verdict::NonIntegral)
                | (CertificateKind::PIndependent, Verdict::PIndependent)
                | (CertificateKind::Unbounded, Verdict::Unbounded)
        )
    }
}

fn param_u32(cert: &Certificate, key: &str) -> Result<u32> {
    cert.params
        .get(key)
        .and_then(Value::as_u64)
        .and_then(|v| u32::try_from(v).ok())
        .ok_or_else(|| Error::MissingCertificate(format!("certificate has no `{key}`")))
}

/// Checks that `cert` shows `f` is not integral in the degrees `p` uses.
pub fn check_coverage(p: &PolyInTF, f: &TateSeries, cert: &Certificate) -> Result<()> {
    if cert.kind != CertificateKind::NonIntegral || cert.verdict != Verdict::NonIntegral {
        return Err(Error::MissingCertificate("no non-integrality certificate".into()));
    }
    if cert.params.get("series") != Some(&serde_json::to_value(f.to_json())?) {
        return Err(Error::MissingCertificate("certificate is for a different series".into()));
    }
    let n_max = param_u32(cert, "n_max")?;
    let d_max = param_u32(cert, "d_max")?;
    if p.f_degree() > n_max || p.t_degree() > d_max {
        return Err(Error::MissingCertificate(format!(
            "{p} has degrees (T: {}, F: {}) beyond the certified (T: {d_max}, F: {n_max})",
            p.t_degree(),
            p.f_degree()
        )));
    }
    Ok(())
}

/// `dP/dF` evaluated at `f`: the derivation `d/df` on `k[T][f]`.
pub fn deriv_eval(p: &PolyInTF, f: &TateSeries, cert: &Certificate) -> Result<TateSeries> {
    check_coverage(p, f, cert)?;
    p.d_df()?.eval(f)
}

/// `P(T, f) -> (P(T, f), dP/dF(T, f))` into the dual numbers over the Laurent ring.
pub fn phi(p: &PolyInTF, f: &TateSeries, cert: &Certificate) -> Result<SquareZeroElem<TateSeries>> {
    let d = deriv_eval(p, f, cert)?;
    let v = p.eval(f)?;
    Ok(SquareZeroElem::dual(v.as_laurent(), d.as_laurent()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{FieldSpec, Scalar};
    use crate::lognorm::{RadiusContext, RadiusDecl};
    use crate::series::SeriesKind;
    use std::sync::Arc;

    struct Setup {
        spec: Arc<FieldSpec>,
        ctx: Arc<RadiusContext>,
        f: TateSeries,
        cert: Certificate,
    }

    fn setup() -> Setup {
        let spec = FieldSpec::padic(3, 20).unwrap();
        let ctx = Arc::new(RadiusContext::new(3, vec![RadiusDecl::near_six_tenths("r1")]).unwrap());
        let f = sparse_series(3, &spec, &ctx, "r1").unwrap().ideal;
        let cert = nonintegral_certificate(&f, 2, 3).unwrap();
        Setup { spec, ctx, f, cert }
    }

    fn ser(s: &Setup, src: &str) -> TateSeries {
        TateSeries::parse_univariate(&s.spec, &s.ctx, "r1", SeriesKind::Power, src).unwrap()
    }

    #[test]
    fn derivation_values() {
        let s = setup();
        assert!(s.cert.holds());
        let t = PolyInTF::t(&s.spec);
        let big_f = PolyInTF::f(&s.spec);
        assert!(deriv_eval(&t.mul(&t).unwrap().mul(&t).unwrap(), &s.f, &s.cert).unwrap().is_zero());
        assert_eq!(deriv_eval(&big_f, &s.f, &s.cert).unwrap(), ser(&s, "1"));
        let tf2 = t.mul(&big_f).unwrap().mul(&big_f).unwrap();
        let want = s.f.mul(&ser(&s, "2*T")).unwrap();
        assert_eq!(deriv_eval(&tf2, &s.f, &s.cert).unwrap(), want);
    }

    #[test]
    fn phi_values() {
        let s = setup();
        let big_f = PolyInTF::f(&s.spec);
        let x = phi(&big_f, &s.f, &s.cert).unwrap();
        assert_eq!(x.a, s.f.as_laurent());
        assert_eq!(x.b, ser(&s, "1").as_laurent());
        let sq = phi(&big_f.mul(&big_f).unwrap(), &s.f, &s.cert).unwrap();
        assert!(sq.agrees(&x.mul(&x).unwrap()).unwrap());
        let t = phi(&PolyInTF::t(&s.spec), &s.f, &s.cert).unwrap();
        assert!(t.b.is_zero());
    }

    #[test]
    fn coverage_is_enforced() {
        let s = setup();
        let big_f = PolyInTF::f(&s.spec);
        let f3 = big_f.mul(&big_f).unwrap().mul(&big_f).unwrap();
        assert!(matches!(deriv_eval(&f3, &s.f, &s.cert), Err(Error::MissingCertificate(_))));
        let other = ser(&s, "T^2");
        assert!(matches!(deriv_eval(&big_f, &other, &s.cert), Err(Error::MissingCertificate(_))));
        let c = PolyInTF::constant(Scalar::from_int(&s.spec, 5));
        let mut bad = s.cert.clone();
        bad.verdict = Verdict::Integral;
        assert!(matches!(deriv_eval(&c, &s.f, &bad), Err(Error::MissingCertificate(_))));
    }
}
