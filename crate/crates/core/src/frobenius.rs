//! Decomposition along the basis `1, t, ..., t^{p-1}` of `F_q((t))` over its
//! subfield of `p`-th powers, for scalars and for power series.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_rational::BigRational;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::field::laurent::{Laurent, Outcome};
use crate::field::{FieldKind, FieldSpec, Scalar};
use crate::lognorm::LogNorm;
use crate::series::TateSeries;

#[derive(Clone, Debug)]
pub struct PBasis {
    spec: Arc<FieldSpec>,
    p: u64,
    elements: Vec<Scalar>,
}

impl PBasis {
    pub fn new(spec: &Arc<FieldSpec>) -> Result<Self> {
        if spec.kind != FieldKind::FqLaurent {
            return Err(Error::FieldMismatch("a finite p-basis is only provided for F_q((t))".into()));
        }
        let p = spec.characteristic();
        let elements = (0..p as i64).map(|i| Scalar::uniformizer_pow(spec, i)).collect();
        Ok(PBasis { spec: spec.clone(), p, elements })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn size(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Scalar] {
        &self.elements
    }

    fn check(&self, a: &Scalar) -> Result<()> {
        if a.spec() != &self.spec && **a.spec() != *self.spec {
            return Err(Error::FieldMismatch("scalar is not in the basis field".into()));
        }
        Ok(())
    }
}

/// `[a_0, ..., a_{p-1}]` with `a = sum a_i^p t^i`. A part that vanishes to
/// the known precision of `a` is returned as `0`.
pub fn scalar_decompose(a: &Scalar, basis: &PBasis) -> Result<Vec<Scalar>> {
    basis.check(a)?;
    let l = a.fq_laurent().ok_or_else(|| Error::FieldMismatch("expected an element of F_q((t))".into()))?;
    let spec = &basis.spec;
    let gf = spec.gf_ctx();
    let p = basis.p as i64;
    let mut parts = Vec::with_capacity(basis.size());
    for i in 0..p {
        let zero = Scalar::zero(spec);
        if l.is_zero() {
            parts.push(zero);
            continue;
        }
        let top = l.val + l.coeffs.len() as i64 - 1;
        let lo = div_ceil(l.val - i, p);
        let hi = (top - i).div_euclid(p);
        let coeffs = (lo..=hi)
            .map(|m| l.coeff(p * m + i, gf).expect("inside the stored range").frobenius_root(gf))
            .collect();
        let abs = l.abs_prec().map(|n| div_ceil(n - i, p));
        parts.push(match Laurent::normalize(lo, coeffs, abs, spec.precision_cap) {
            Outcome::Value(v) => Scalar::from_fq_laurent(spec, v),
            Outcome::Negligible(_) => zero,
        });
    }
    Ok(parts)
}

fn div_ceil(a: i64, b: i64) -> i64 {
    -((-a).div_euclid(b))
}

/// `sum a_i^p x_i`.
pub fn reconstruct_scalar(parts: &[Scalar], basis: &PBasis) -> Result<Scalar> {
    if parts.len() != basis.size() {
        return Err(Error::Incompatible(format!("{} parts for a basis of size {}", parts.len(), basis.size())));
    }
    let mut acc = Scalar::zero(&basis.spec);
    for (a, x) in parts.iter().zip(&basis.elements) {
        acc = acc.checked_add(&a.pow(basis.p as i64)?.mul(x)?)?.value().unwrap_or_else(|| Scalar::zero(&basis.spec));
    }
    Ok(acc)
}

#[derive(Clone, Debug, Serialize)]
pub struct NormCheck {
    /// `max_i |a_i^p x_i| / |a|`.
    pub ratio: LogNorm,
    /// `max(ratio, 1 / ratio)`.
    pub observed_constant: LogNorm,
    pub pass: bool,
}

/// Compares `max_i |a_i^p x_i|` with `|a|` against the declared constant `c >= 1`.
pub fn verify_norm_bound(a: &Scalar, basis: &PBasis, c: &LogNorm) -> Result<NormCheck> {
    if a.is_zero() {
        return Err(Error::PreconditionFailed("the norm bound is stated for a != 0".into()));
    }
    let parts = scalar_decompose(a, basis)?;
    let mut top: Option<i64> = None;
    for (ai, x) in parts.iter().zip(&basis.elements) {
        if let Some(v) = ai.valuation() {
            let v = v * basis.p as i64 + x.valuation().expect("basis elements are nonzero");
            top = Some(top.map_or(v, |t: i64| t.min(v)));
        }
    }
    let va = a.valuation().expect("nonzero");
    let top = top.ok_or_else(|| Error::PrecisionExhausted("every part vanished".into()))?;
    // norms are q^-v, so the ratio is q^-(top - va)
    let ratio = LogNorm::from_base_int(top - va);
    let observed_constant = LogNorm::from_base_int(-(top - va).abs());
    let ce = c.base_exp().ok_or_else(|| Error::Config("the constant must be positive".into()))?;
    let pass = BigRational::from_integer((-(top - va).abs()).into()) >= *ce;
    Ok(NormCheck { ratio, observed_constant, pass })
}

/// Residue class `e in {0..p-1}^n` and basis index `i`.
pub type PartKey = (Vec<i64>, usize);

/// `f = sum_{e, i} f_{e,i}^p x_i T^e` with `f_{e,i} = sum_v a_{p v + e, i} T^v`.
pub fn series_decompose(f: &TateSeries, basis: &PBasis) -> Result<BTreeMap<PartKey, TateSeries>> {
    if !f.tail().is_zero() {
        return Err(Error::PreconditionFailed("decomposition needs an exact polynomial".into()));
    }
    if f.spec() != &basis.spec && **f.spec() != *basis.spec {
        return Err(Error::FieldMismatch("series is not over the basis field".into()));
    }
    let p = basis.p as i64;
    let n = f.nvars();
    let mut parts = BTreeMap::new();
    for e in residues(n, p) {
        for i in 0..basis.size() {
            parts.insert((e.clone(), i), f.zero_like());
        }
    }
    for (exp, c) in f.terms() {
        let e: Vec<i64> = exp.iter().map(|x| x.rem_euclid(p)).collect();
        let v: Vec<i64> = exp.iter().map(|x| x.div_euclid(p)).collect();
        for (i, a) in scalar_decompose(c, basis)?.into_iter().enumerate() {
            if !a.is_zero() {
                parts.get_mut(&(e.clone(), i)).expect("all keys present").set_coeff(&v, a)?;
            }
        }
    }
    Ok(parts)
}

fn residues(n: usize, p: i64) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|v: Vec<i64>| {
                (0..p).map(move |k| {
                    let mut w = v.clone();
                    w.push(k);
                    w
                })
            })
            .collect();
    }
    out
}

/// `sum_{e, i} f_{e,i}^p x_i T^e`.
pub fn reconstruct_series(
    parts: &BTreeMap<PartKey, TateSeries>,
    basis: &PBasis,
    template: &TateSeries,
) -> Result<TateSeries> {
    let mut acc = template.zero_like();
    for ((e, i), part) in parts {
        if part.is_zero() {
            continue;
        }
        let x = basis.elements.get(*i).ok_or_else(|| Error::Incompatible(format!("no basis element {i}")))?;
        let term = part.pow(basis.p as u32)?.mul(&template.monomial_like(x.clone(), e)?)?;
        acc = acc.add(&term)?;
    }
    Ok(acc)
}

/// Checks `d f / d T_j = sum_{e, i} f_{e,i}^p x_i e_j T^{e - 1_j}` for every variable.
pub fn derivative_span_witness(f: &TateSeries, basis: &PBasis) -> Result<bool> {
    let parts = series_decompose(f, basis)?;
    for j in 0..f.nvars() {
        let lhs = f.derivative(j)?;
        let mut rhs = f.zero_like();
        for ((e, i), part) in &parts {
            if e[j] == 0 || part.is_zero() {
                continue;
            }
            let mut lowered = e.clone();
            lowered[j] -= 1;
            let coeff = basis.elements[*i].mul_int(e[j])?;
            rhs = rhs.add(&part.pow(basis.p as u32)?.mul(&f.monomial_like(coeff, &lowered)?)?)?;
        }
        if lhs != rhs {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Checks `|a_{p v + e, i}| r^v <= (|a_{p v + e}| r^{p v + e} / |x_i|)^{1/p} r^{-e/p}`
/// for every stored term and every part. This is the coefficient bound
/// `|a_i^p x_i| <= |a|` of [`verify_norm_bound`] carried through the grouping.
pub fn termwise_tail_bound(f: &TateSeries, basis: &PBasis) -> Result<bool> {
    let p = basis.p as i64;
    let inv_p = BigRational::new(1.into(), p.into());
    for (exp, c) in f.terms() {
        let e: Vec<i64> = exp.iter().map(|x| x.rem_euclid(p)).collect();
        let v: Vec<i64> = exp.iter().map(|x| x.div_euclid(p)).collect();
        let neg_e: Vec<i64> = e.iter().map(|x| -x).collect();
        let rhs = f.term_norm(exp, c).pow(&inv_p)?.mul(&f.radius_monomial(&neg_e).pow(&inv_p)?);
        for (a, x) in scalar_decompose(c, basis)?.iter().zip(&basis.elements) {
            if a.is_zero() {
                continue;
            }
            let lhs = a.norm().mul(&f.radius_monomial(&v));
            let rhs = rhs.mul(&x.norm().inv()?.pow(&inv_p)?);
            if !f.ctx().le(&lhs, &rhs)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// JSON form with a `"parts"` map keyed by `"e,i"`.
pub fn parts_to_json(parts: &BTreeMap<PartKey, TateSeries>) -> Result<Value> {
    let mut map = serde_json::Map::new();
    for ((e, i), s) in parts {
        let key = format!("{},{i}", e.iter().map(i64::to_string).collect::<Vec<_>>().join(":"));
        let (g, _) = s.gauss_norm()?;
        map.insert(key, json!({ "series": s.to_json(), "gauss_norm": g }));
    }
    Ok(json!({ "parts": map }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lognorm::{RadiusContext, RadiusDecl};
    use crate::series::SeriesKind;

    fn f2() -> Arc<FieldSpec> {
        FieldSpec::fq_laurent(2, 2, 30).unwrap()
    }

    fn sc(s: &Arc<FieldSpec>, src: &str) -> Scalar {
        Scalar::parse(s, src).unwrap()
    }

    #[test]
    fn scalar_examples() {
        let s = f2();
        let b = PBasis::new(&s).unwrap();
        assert_eq!(b.size(), 2);
        let parts = scalar_decompose(&sc(&s, "t^3 + t"), &b).unwrap();
        assert_eq!(parts, vec![Scalar::zero(&s), sc(&s, "t + 1")]);
        assert_eq!(scalar_decompose(&sc(&s, "1"), &b).unwrap(), vec![sc(&s, "1"), Scalar::zero(&s)]);
        assert_eq!(scalar_decompose(&sc(&s, "t"), &b).unwrap(), vec![Scalar::zero(&s), sc(&s, "1")]);
        let chk = verify_norm_bound(&sc(&s, "t^3 + t"), &b, &LogNorm::one()).unwrap();
        assert!(chk.pass && chk.ratio.is_one());
        assert!(PBasis::new(&FieldSpec::padic(3, 10).unwrap()).is_err());
    }

    #[test]
    fn capped_scalar_round_trip() {
        let s = FieldSpec::fq_laurent(3, 9, 12).unwrap();
        let b = PBasis::new(&s).unwrap();
        let a = sc(&s, "z*t^-2 + t + (z + 1)*t^5 + O(t^10)");
        let parts = scalar_decompose(&a, &b).unwrap();
        assert!(reconstruct_scalar(&parts, &b).unwrap().agrees_with(&a));
    }

    #[test]
    fn series_examples() {
        let s = f2();
        let ctx = Arc::new(RadiusContext::new(2, vec![RadiusDecl::default_irrational("r")]).unwrap());
        let b = PBasis::new(&s).unwrap();
        let ser = |src: &str| TateSeries::parse_univariate(&s, &ctx, "r", SeriesKind::Power, src).unwrap();
        let f = ser("t*T + T^2");
        let parts = series_decompose(&f, &b).unwrap();
        assert_eq!(parts[&(vec![0], 0)], ser("T"));
        assert_eq!(parts[&(vec![1], 1)], ser("1"));
        assert!(parts[&(vec![0], 1)].is_zero() && parts[&(vec![1], 0)].is_zero());
        assert_eq!(reconstruct_series(&parts, &b, &f).unwrap(), f);
        assert!(derivative_span_witness(&f, &b).unwrap());
        assert!(termwise_tail_bound(&f, &b).unwrap());
        let zero = ser("0");
        assert!(series_decompose(&zero, &b).unwrap().values().all(TateSeries::is_zero));
        assert!(derivative_span_witness(&zero, &b).unwrap());
        let tp = ser("T^2");
        let parts = series_decompose(&tp, &b).unwrap();
        assert_eq!(parts[&(vec![0], 0)], ser("T"));
        assert_eq!(parts.values().filter(|x| !x.is_zero()).count(), 1);
        assert!(derivative_span_witness(&tp, &b).unwrap());
        let js = parts_to_json(&parts).unwrap();
        assert!(js["parts"]["0,0"]["series"]["terms"].is_array());
    }
}
