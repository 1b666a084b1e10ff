//! The operations the root iteration and the square-zero construction need
//! from a multiplicatively normed ring.

use std::cmp::Ordering;
use std::fmt;

use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::field::{Bounded, Scalar};
use crate::lognorm::{LogNorm, RadiusContext};
use crate::series::TateSeries;

pub trait NormedRing: Clone + fmt::Debug + fmt::Display {
    fn one_like(&self) -> Self;
    fn zero_like(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn ring_add(&self, o: &Self) -> Result<Self>;
    /// `self - o`, or a norm bound when the difference vanishes to working precision.
    fn ring_sub(&self, o: &Self) -> Result<Bounded<Self>>;
    fn ring_mul(&self, o: &Self) -> Result<Self>;
    fn ring_neg(&self) -> Self;
    fn div_int(&self, n: i64) -> Result<Self>;
    /// Norm, or an upper bound on it when only a truncation is known.
    fn norm_bound(&self) -> Result<LogNorm>;
    fn compare_norms(&self, a: &LogNorm, b: &LogNorm) -> Result<Ordering>;
    /// True iff the integer `p` has norm 1 in this ring.
    fn unit_prime(&self, p: u64) -> bool;
    /// Restrict to working precision: digits of valuation `>= abs` are dropped.
    fn with_working_precision(&self, abs: i64) -> Result<Self>;
    fn inverse(&self) -> Result<Self>;
    fn precision_cap(&self) -> u32;
    /// Move into a copy of the ring whose coefficients keep `cap` significant digits.
    fn with_precision_cap(&self, cap: u32) -> Result<Self>;
    /// `(g, g_root)` with `g_root^p = g` and `|self - g| < |self|`.
    fn root_seed(&self, p: u64) -> Result<(Self, Self)>;
    /// An integer `N` with `q^-N <= bound`.
    fn base_precision(&self, bound: &LogNorm) -> Result<i64>;
    /// An exact element equal to the approximate root `approx` of `target`, if one is visible.
    fn snap_exact_root(&self, _approx: &Self, _p: u64) -> Option<Self> {
        None
    }

    fn ring_pow(&self, n: u32) -> Result<Self> {
        let mut acc = self.one_like();
        for _ in 0..n {
            acc = acc.ring_mul(self)?;
        }
        Ok(acc)
    }

    fn norm_le(&self, a: &LogNorm, b: &LogNorm) -> Result<bool> {
        Ok(self.compare_norms(a, b)? != Ordering::Greater)
    }

    fn norm_lt(&self, a: &LogNorm, b: &LogNorm) -> Result<bool> {
        Ok(self.compare_norms(a, b)? == Ordering::Less)
    }

    /// True iff `self` and `o` agree to working precision.
    fn agrees(&self, o: &Self) -> Result<bool> {
        Ok(match self.ring_sub(o)? {
            Bounded::Negligible(_) => true,
            Bounded::Value(d) => d.is_zero(),
        })
    }
}

fn ceil_neg_log(l: &BigRational) -> i64 {
    let c = l.ceil();
    c.to_integer().to_i64().unwrap_or(i64::MAX)
}

impl NormedRing for Scalar {
    fn one_like(&self) -> Self {
        Scalar::one(self.spec())
    }

    fn zero_like(&self) -> Self {
        Scalar::zero(self.spec())
    }

    fn is_zero(&self) -> bool {
        Scalar::is_zero(self)
    }

    fn ring_add(&self, o: &Self) -> Result<Self> {
        match self.checked_add(o)? {
            Bounded::Value(v) => Ok(v),
            Bounded::Negligible(_) => Ok(self.zero_like()),
        }
    }

    fn ring_sub(&self, o: &Self) -> Result<Bounded<Self>> {
        self.checked_sub(o)
    }

    fn ring_mul(&self, o: &Self) -> Result<Self> {
        self.mul(o)
    }

    fn ring_neg(&self) -> Self {
        self.neg()
    }

    fn div_int(&self, n: i64) -> Result<Self> {
        Scalar::div_int(self, n)
    }

    fn norm_bound(&self) -> Result<LogNorm> {
        Ok(self.norm())
    }

    fn compare_norms(&self, a: &LogNorm, b: &LogNorm) -> Result<Ordering> {
        RadiusContext { q: self.spec().q, radii: Vec::new(), max_depth: 8 }.compare(a, b)
    }

    fn unit_prime(&self, p: u64) -> bool {
        self.spec().check_aux_prime(p)
    }

    fn with_working_precision(&self, abs: i64) -> Result<Self> {
        if self.is_zero() {
            return Ok(self.clone());
        }
        match self.truncate_abs(abs) {
            Bounded::Value(v) => Ok(v),
            Bounded::Negligible(_) => Err(Error::PrecisionExhausted(format!("{self} vanishes below valuation {abs}"))),
        }
    }

    fn inverse(&self) -> Result<Self> {
        self.inv()
    }

    fn precision_cap(&self) -> u32 {
        self.spec().precision_cap
    }

    fn with_precision_cap(&self, cap: u32) -> Result<Self> {
        Scalar::with_precision_cap(self, cap)
    }

    fn root_seed(&self, p: u64) -> Result<(Self, Self)> {
        self.pth_root_seed(p)
    }

    fn base_precision(&self, bound: &LogNorm) -> Result<i64> {
        match bound.base_exp() {
            None => Err(Error::PreconditionFailed("zero norm bound".into())),
            Some(e) => Ok(ceil_neg_log(e)),
        }
    }

    fn snap_exact_root(&self, approx: &Self, p: u64) -> Option<Self> {
        self.exact_rational_root(p, approx)
    }
}

impl NormedRing for TateSeries {
    fn one_like(&self) -> Self {
        TateSeries::one_like(self)
    }

    fn zero_like(&self) -> Self {
        TateSeries::zero_like(self)
    }

    fn is_zero(&self) -> bool {
        TateSeries::is_zero(self)
    }

    fn ring_add(&self, o: &Self) -> Result<Self> {
        self.add(o)
    }

    fn ring_sub(&self, o: &Self) -> Result<Bounded<Self>> {
        let d = self.sub(o)?;
        if d.terms().is_empty() && !d.tail().is_zero() {
            Ok(Bounded::Negligible(d.tail().clone()))
        } else {
            Ok(Bounded::Value(d))
        }
    }

    fn ring_mul(&self, o: &Self) -> Result<Self> {
        self.mul(o)
    }

    fn ring_neg(&self) -> Self {
        self.neg()
    }

    fn div_int(&self, n: i64) -> Result<Self> {
        self.scale(&Scalar::from_int(self.spec(), n).inv()?)
    }

    fn norm_bound(&self) -> Result<LogNorm> {
        TateSeries::norm_bound(self)
    }

    fn compare_norms(&self, a: &LogNorm, b: &LogNorm) -> Result<Ordering> {
        self.ctx().compare(a, b)
    }

    fn unit_prime(&self, p: u64) -> bool {
        self.spec().check_aux_prime(p)
    }

    fn with_working_precision(&self, abs: i64) -> Result<Self> {
        let mut out = self.zero_like();
        for (e, c) in self.terms() {
            let t = match c.truncate_abs(abs) {
                Bounded::Value(v) => self.monomial_like(v, e)?,
                Bounded::Negligible(n) => self
                    .zero_like()
                    .with_tail(n.mul(&self.radius_monomial(e)), Some(e.iter().sum()))?,
            };
            out = out.add(&t)?;
        }
        out = out.with_tail(self.tail().clone(), self.tail_start())?;
        out.drop_below(&LogNorm::from_base_int(abs))
    }

    fn inverse(&self) -> Result<Self> {
        TateSeries::inverse(self)
    }

    fn precision_cap(&self) -> u32 {
        self.spec().precision_cap
    }

    fn with_precision_cap(&self, cap: u32) -> Result<Self> {
        TateSeries::with_precision_cap(self, cap)
    }

    fn root_seed(&self, p: u64) -> Result<(Self, Self)> {
        let (lead_exp, lead) = self.dominant_term()?;
        if lead_exp.iter().any(|e| e % p as i64 != 0) {
            return Err(Error::NoRootInField {
                p,
                reason: format!("dominant exponent {lead_exp:?} is not divisible by {p}"),
            });
        }
        let (ga, ra) = lead.pth_root_seed(p)?;
        let root_exp: Vec<i64> = lead_exp.iter().map(|e| e / p as i64).collect();
        Ok((self.monomial_like(ga, &lead_exp)?, self.monomial_like(ra, &root_exp)?))
    }

    fn base_precision(&self, bound: &LogNorm) -> Result<i64> {
        let (lo, _) = self.ctx().log_q_bounds(bound, 32)?;
        Ok(ceil_neg_log(&-lo))
    }
}

impl TateSeries {
    /// The unique term of maximal norm, which must strictly dominate the rest.
    pub fn dominant_term(&self) -> Result<(Vec<i64>, Scalar)> {
        let (g, exact) = self.gauss_norm()?;
        if g.is_zero() || !exact {
            return Err(Error::PreconditionFailed("no dominant term".into()));
        }
        let mut hits = self.terms().iter().filter(|(e, c)| self.term_norm(e, c) == g);
        let (e, c) = hits.next().expect("maximum is attained");
        if hits.next().is_some() {
            return Err(Error::PreconditionFailed("Gauss norm attained by several terms".into()));
        }
        Ok((e.clone(), c.clone()))
    }

    /// Inverse of a series `m (1 + e)` with a dominant monomial `m` that is a
    /// unit; the geometric series is cut once `|e|^k` falls below the
    /// coefficient precision cap, and the rest is folded into the tail.
    pub fn inverse(&self) -> Result<Self> {
        let (exp, lead) = self.dominant_term()?;
        if self.kind() == crate::series::SeriesKind::Power && exp.iter().any(|&x| x != 0) {
            return Err(Error::PreconditionFailed("dominant monomial is not a unit in the power series ring".into()));
        }
        let neg_exp: Vec<i64> = exp.iter().map(|x| -x).collect();
        let m_inv = self.monomial_like(lead.inv()?, &neg_exp)?;
        let e = self.mul(&m_inv)?.sub(&self.one_like())?;
        let cap = self.spec().precision_cap as i64;
        let stop = LogNorm::from_base_int(cap);
        let mut acc = self.one_like();
        let mut power = self.one_like();
        let mut k = 0u32;
        loop {
            power = power.mul(&e.neg())?;
            k += 1;
            if power.terms().is_empty() {
                acc = acc.add(&power)?;
                break;
            }
            let pn = power.norm_bound()?;
            if self.ctx().le(&pn, &stop)? || k > 4 * cap as u32 {
                let rest = self.zero_like().with_tail(pn, None)?;
                acc = acc.add(&rest)?;
                break;
            }
            acc = acc.add(&power)?;
        }
        acc.mul(&m_inv)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;
    use crate::lognorm::RadiusDecl;
    use crate::series::SeriesKind;
    use std::sync::Arc;

    #[test]
    fn laurent_unit_inverse() {
        let spec = FieldSpec::padic(3, 20).unwrap();
        let ctx = Arc::new(RadiusContext::new(3, vec![RadiusDecl::default_irrational("r1")]).unwrap());
        let f = TateSeries::parse_univariate(&spec, &ctx, "r1", SeriesKind::Laurent, "T + 3").unwrap();
        let g = f.inverse().unwrap();
        let prod = f.mul(&g).unwrap();
        let bound = prod.sub(&f.one_like()).unwrap().norm_bound().unwrap();
        assert!(ctx.le(&bound, &LogNorm::from_base_int(20)).unwrap());
    }

    #[test]
    fn scalar_ring_ops() {
        let s = FieldSpec::padic(3, 20).unwrap();
        let x = Scalar::from_int(&s, 9);
        assert_eq!(x.base_precision(&x.norm()).unwrap(), 2);
        assert!(x.unit_prime(2) && !x.unit_prime(3));
        assert!(x.norm_lt(&x.norm(), &LogNorm::one()).unwrap());
    }
}
