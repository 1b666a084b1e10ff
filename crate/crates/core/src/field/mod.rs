//! Complete non-archimedean valued fields with exact valuation tracking.
//!
//! Three concrete fields are supported:
//!
//! * `Q_q` (p-adic numbers),
//! * `F_{q^d}((t))` (Laurent series over a finite field),
//! * `F_q(u_1, ..., u_N)((t))` (Laurent series over a rational function field).
//!
//! Values are either *exact* (a rational number, a Laurent polynomial) or
//! *capped* (known to a bounded number of significant digits). Exact values
//! stay exact under ring operations; mixing with a capped value yields a
//! capped value. A capped computation that cancels every known digit raises
//! [`Error::PrecisionExhausted`] instead of producing a fake zero.

pub mod coeff;
pub mod gf;
pub mod laurent;
pub mod padic;
mod parse;
pub mod ratfun;

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lognorm::LogNorm;
use coeff::Coeff;
use gf::{Gf, GfCtx};
use laurent::{Laurent, Outcome};
use padic::Padic;
use ratfun::{MPoly, RatFun, RatFunCtx};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FieldKind {
    Padic,
    FqLaurent,
    RatfunLaurent,
}

/// Description of a concrete valued field and its precision cap.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldSpec {
    pub kind: FieldKind,
    /// Residue characteristic.
    pub q: u64,
    /// Size of the residue field (`q^d` for `FqLaurent`, `q` otherwise).
    pub field_size: u64,
    /// Number of variables `u_1..u_N` for `RatfunLaurent`.
    pub nvars: usize,
    /// Maximum number of significant digits retained by capped values.
    pub precision_cap: u32,
    gf: GfCtx,
    rf: RatFunCtx,
}

pub(crate) fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

impl FieldSpec {
    fn build(kind: FieldKind, q: u64, field_size: u64, nvars: usize, cap: u32) -> Result<Arc<Self>> {
        if !is_prime(q) {
            return Err(Error::Config(format!("{q} is not prime")));
        }
        if cap == 0 {
            return Err(Error::Config("precision cap must be at least 1".into()));
        }
        let mut degree = 0u32;
        let mut s = field_size;
        while s > 1 && s % q == 0 {
            s /= q;
            degree += 1;
        }
        if s != 1 || degree == 0 {
            return Err(Error::Config(format!("field size {field_size} is not a power of {q}")));
        }
        if degree > 1 && field_size > 1 << 16 {
            return Err(Error::Config(format!("residue field of size {field_size} is too large")));
        }
        Ok(Arc::new(FieldSpec {
            kind,
            q,
            field_size,
            nvars,
            precision_cap: cap,
            gf: GfCtx::new(q, degree),
            rf: RatFunCtx { p: q, nvars },
        }))
    }

    /// `Q_q`.
    pub fn padic(q: u64, precision_cap: u32) -> Result<Arc<Self>> {
        Self::build(FieldKind::Padic, q, q, 0, precision_cap)
    }

    /// `F_{field_size}((t))` with `field_size` a power of `q`.
    pub fn fq_laurent(q: u64, field_size: u64, precision_cap: u32) -> Result<Arc<Self>> {
        Self::build(FieldKind::FqLaurent, q, field_size, 0, precision_cap)
    }

    /// `F_q(u_1..u_N)((t))`.
    pub fn ratfun_laurent(q: u64, nvars: usize, precision_cap: u32) -> Result<Arc<Self>> {
        Self::build(FieldKind::RatfunLaurent, q, q, nvars, precision_cap)
    }

    /// Characteristic of the field: 0 for `Q_q`, `q` otherwise.
    pub fn characteristic(&self) -> u64 {
        match self.kind {
            FieldKind::Padic => 0,
            _ => self.q,
        }
    }

    /// True iff the image of the prime `p` has norm exactly 1.
    pub fn check_aux_prime(&self, p: u64) -> bool {
        is_prime(p) && p != self.q
    }

    pub fn gf_ctx(&self) -> &GfCtx {
        &self.gf
    }

    pub fn rf_ctx(&self) -> &RatFunCtx {
        &self.rf
    }

    pub fn with_precision(&self, cap: u32) -> Result<Arc<Self>> {
        Self::build(self.kind, self.q, self.field_size, self.nvars, cap)
    }
}

#[derive(Serialize, Deserialize)]
struct FieldSpecWire {
    kind: FieldKind,
    q: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    field_size: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    num_pbasis_vars: Option<usize>,
    precision_cap: u32,
}

impl Serialize for FieldSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        FieldSpecWire {
            kind: self.kind,
            q: self.q,
            field_size: (self.kind == FieldKind::FqLaurent).then_some(self.field_size),
            num_pbasis_vars: (self.kind == FieldKind::RatfunLaurent).then_some(self.nvars),
            precision_cap: self.precision_cap,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FieldSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let w = FieldSpecWire::deserialize(d)?;
        let spec = match w.kind {
            FieldKind::Padic => FieldSpec::padic(w.q, w.precision_cap),
            FieldKind::FqLaurent => FieldSpec::fq_laurent(w.q, w.field_size.unwrap_or(w.q), w.precision_cap),
            FieldKind::RatfunLaurent => {
                FieldSpec::ratfun_laurent(w.q, w.num_pbasis_vars.unwrap_or(0), w.precision_cap)
            }
        }
        .map_err(serde::de::Error::custom)?;
        Ok((*spec).clone())
    }
}

/// A value, or a certificate that it vanishes to the working precision.
#[derive(Clone, Debug, PartialEq)]
pub enum Bounded<T> {
    Value(T),
    /// Indistinguishable from zero; the true value has norm at most this.
    Negligible(LogNorm),
}

impl<T> Bounded<T> {
    pub fn value(self) -> Option<T> {
        match self {
            Bounded::Value(v) => Some(v),
            Bounded::Negligible(_) => None,
        }
    }
}

/// An element of the prime field, used when setting up exact linear systems.
#[derive(Clone, Debug, PartialEq)]
pub enum PrimeConst {
    Rational(BigRational),
    Modular(u64),
}

#[derive(Clone, Debug, PartialEq)]
pub(crate) enum Repr {
    Padic(Padic),
    Fq(Laurent<Gf>),
    RatFun(Laurent<RatFun>),
}

/// Element of one of the supported valued fields.
#[derive(Clone, Debug)]
pub struct Scalar {
    spec: Arc<FieldSpec>,
    repr: Repr,
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.spec, &other.spec) || self.spec == other.spec) && self.repr == other.repr
    }
}

fn negligible<T>(abs: i64) -> Bounded<T> {
    Bounded::Negligible(LogNorm::from_base_int(abs))
}

impl Scalar {
    pub(crate) fn from_repr(spec: &Arc<FieldSpec>, repr: Repr) -> Self {
        Scalar { spec: spec.clone(), repr }
    }

    pub fn spec(&self) -> &Arc<FieldSpec> {
        &self.spec
    }

    pub fn zero(spec: &Arc<FieldSpec>) -> Self {
        let repr = match spec.kind {
            FieldKind::Padic => Repr::Padic(Padic::Exact(BigRational::zero())),
            FieldKind::FqLaurent => Repr::Fq(Laurent::zero()),
            FieldKind::RatfunLaurent => Repr::RatFun(Laurent::zero()),
        };
        Self::from_repr(spec, repr)
    }

    pub fn one(spec: &Arc<FieldSpec>) -> Self {
        Self::from_int(spec, 1)
    }

    pub fn from_int(spec: &Arc<FieldSpec>, n: i64) -> Self {
        Self::from_bigint(spec, &BigInt::from(n))
    }

    pub fn from_bigint(spec: &Arc<FieldSpec>, n: &BigInt) -> Self {
        let repr = match spec.kind {
            FieldKind::Padic => Repr::Padic(Padic::Exact(BigRational::from_integer(n.clone()))),
            FieldKind::FqLaurent | FieldKind::RatfunLaurent => {
                let r = n % BigInt::from(spec.q);
                let m: i64 = r.try_into().expect("residue fits");
                match spec.kind {
                    FieldKind::FqLaurent => Repr::Fq(Laurent::monomial(Gf::from_i64(m, &spec.gf), 0)),
                    _ => Repr::RatFun(Laurent::monomial(RatFun::from_i64(m, &spec.rf), 0)),
                }
            }
        };
        Self::from_repr(spec, repr)
    }

    /// An integer fraction; in positive characteristic the denominator must be a unit.
    pub fn from_rational(spec: &Arc<FieldSpec>, x: &BigRational) -> Result<Self> {
        match spec.kind {
            FieldKind::Padic => Ok(Self::from_repr(spec, Repr::Padic(Padic::Exact(x.clone())))),
            _ => Self::from_bigint(spec, x.numer()).div(&Self::from_bigint(spec, x.denom())),
        }
    }

    /// The uniformiser: `q` in `Q_q`, `t` in the Laurent fields.
    pub fn uniformizer(spec: &Arc<FieldSpec>) -> Self {
        Self::uniformizer_pow(spec, 1)
    }

    pub fn uniformizer_pow(spec: &Arc<FieldSpec>, e: i64) -> Self {
        let repr = match spec.kind {
            FieldKind::Padic => {
                let q = BigRational::from_integer(BigInt::from(spec.q));
                let v = num_traits::pow(q, e.unsigned_abs() as usize);
                Repr::Padic(Padic::Exact(if e >= 0 { v } else { v.recip() }))
            }
            FieldKind::FqLaurent => Repr::Fq(Laurent::monomial(Gf::one(&spec.gf), e)),
            FieldKind::RatfunLaurent => Repr::RatFun(Laurent::monomial(RatFun::one(&spec.rf), e)),
        };
        Self::from_repr(spec, repr)
    }

    /// The generator `z` of `F_{q^d}` inside `F_{q^d}((t))`.
    pub fn residue_generator(spec: &Arc<FieldSpec>) -> Result<Self> {
        match (spec.kind, spec.gf.generator()) {
            (FieldKind::FqLaurent, Some(z)) => Ok(Self::from_repr(spec, Repr::Fq(Laurent::monomial(z, 0)))),
            _ => Err(Error::Parse("`z` needs a residue field of degree > 1".into())),
        }
    }

    /// The variable `u_i` (1-based) of `F_q(u_1..u_N)((t))`.
    pub fn variable(spec: &Arc<FieldSpec>, i: usize) -> Result<Self> {
        if spec.kind != FieldKind::RatfunLaurent || i == 0 || i > spec.nvars {
            return Err(Error::Parse(format!("no variable u{i} in this field")));
        }
        let c = RatFun::from_poly(MPoly::var(i, &spec.rf), &spec.rf);
        Ok(Self::from_repr(spec, Repr::RatFun(Laurent::monomial(c, 0))))
    }

    /// `c * t^e` for a residue-field constant of `F_{q^d}((t))`.
    pub fn from_gf(spec: &Arc<FieldSpec>, c: Gf, e: i64) -> Self {
        Self::from_repr(spec, Repr::Fq(Laurent::monomial(c, e)))
    }

    pub(crate) fn from_fq_laurent(spec: &Arc<FieldSpec>, l: Laurent<Gf>) -> Self {
        Self::from_repr(spec, Repr::Fq(l))
    }

    /// The Laurent data of an element of `F_{q^d}((t))`.
    pub fn fq_laurent(&self) -> Option<&Laurent<Gf>> {
        match &self.repr {
            Repr::Fq(l) => Some(l),
            _ => None,
        }
    }

    pub fn ratfun_laurent(&self) -> Option<&Laurent<RatFun>> {
        match &self.repr {
            Repr::RatFun(l) => Some(l),
            _ => None,
        }
    }

    pub fn padic(&self) -> Option<&Padic> {
        match &self.repr {
            Repr::Padic(x) => Some(x),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        match &self.repr {
            Repr::Padic(x) => x.is_zero(),
            Repr::Fq(l) => l.is_zero(),
            Repr::RatFun(l) => l.is_zero(),
        }
    }

    pub fn is_exact(&self) -> bool {
        match &self.repr {
            Repr::Padic(x) => matches!(x, Padic::Exact(_)),
            Repr::Fq(l) => l.is_exact(),
            Repr::RatFun(l) => l.is_exact(),
        }
    }

    /// Valuation; `None` for zero.
    pub fn valuation(&self) -> Option<i64> {
        match &self.repr {
            Repr::Padic(x) => x.valuation(self.spec.q),
            Repr::Fq(l) => (!l.is_zero()).then_some(l.val),
            Repr::RatFun(l) => (!l.is_zero()).then_some(l.val),
        }
    }

    /// Absolute precision (exclusive valuation bound of unknown digits), `None` if exact.
    pub fn abs_precision(&self) -> Option<i64> {
        match &self.repr {
            Repr::Padic(x) => x.abs_prec(),
            Repr::Fq(l) => l.abs_prec(),
            Repr::RatFun(l) => l.abs_prec(),
        }
    }

    /// `|x| = q^{-v(x)}`; exact regardless of precision.
    pub fn norm(&self) -> LogNorm {
        match self.valuation() {
            None => LogNorm::Zero,
            Some(v) => LogNorm::from_base_int(v),
        }
    }

    fn same_field(&self, o: &Scalar) -> Result<()> {
        if Arc::ptr_eq(&self.spec, &o.spec) || self.spec == o.spec {
            Ok(())
        } else {
            Err(Error::FieldMismatch(format!("{:?} vs {:?}", self.spec.kind, o.spec.kind)))
        }
    }

    fn wrap(&self, o: Outcome<Repr>) -> Bounded<Scalar> {
        match o {
            Outcome::Value(r) => Bounded::Value(Self::from_repr(&self.spec, r)),
            Outcome::Negligible(a) => negligible(a),
        }
    }

    /// Addition that reports total cancellation instead of failing.
    pub fn checked_add(&self, o: &Scalar) -> Result<Bounded<Scalar>> {
        self.same_field(o)?;
        let s = &self.spec;
        let cap = s.precision_cap;
        let out = match (&self.repr, &o.repr) {
            (Repr::Padic(a), Repr::Padic(b)) => a.add(b, s.q, cap).map(Repr::Padic),
            (Repr::Fq(a), Repr::Fq(b)) => a.add(b, &s.gf, cap).map(Repr::Fq),
            (Repr::RatFun(a), Repr::RatFun(b)) => a.add(b, &s.rf, cap).map(Repr::RatFun),
            _ => unreachable!("same field"),
        };
        Ok(self.wrap(out))
    }

    pub fn checked_sub(&self, o: &Scalar) -> Result<Bounded<Scalar>> {
        self.checked_add(&o.neg())
    }

    fn exhausted(b: Bounded<Scalar>) -> Result<Scalar> {
        match b {
            Bounded::Value(v) => Ok(v),
            Bounded::Negligible(n) => Err(Error::PrecisionExhausted(n.to_string())),
        }
    }

    pub fn add(&self, o: &Scalar) -> Result<Scalar> {
        Self::exhausted(self.checked_add(o)?)
    }

    pub fn sub(&self, o: &Scalar) -> Result<Scalar> {
        Self::exhausted(self.checked_sub(o)?)
    }

    pub fn neg(&self) -> Scalar {
        let s = &self.spec;
        let repr = match &self.repr {
            Repr::Padic(a) => Repr::Padic(a.neg(s.q)),
            Repr::Fq(a) => Repr::Fq(a.neg(&s.gf)),
            Repr::RatFun(a) => Repr::RatFun(a.neg(&s.rf)),
        };
        Self::from_repr(s, repr)
    }

    pub fn mul(&self, o: &Scalar) -> Result<Scalar> {
        self.same_field(o)?;
        let s = &self.spec;
        let cap = s.precision_cap;
        let repr = match (&self.repr, &o.repr) {
            (Repr::Padic(a), Repr::Padic(b)) => Repr::Padic(a.mul(b, s.q, cap)),
            (Repr::Fq(a), Repr::Fq(b)) => Repr::Fq(a.mul(b, &s.gf, cap)),
            (Repr::RatFun(a), Repr::RatFun(b)) => Repr::RatFun(a.mul(b, &s.rf, cap)),
            _ => unreachable!("same field"),
        };
        Ok(Self::from_repr(s, repr))
    }

    pub fn inv(&self) -> Result<Scalar> {
        let s = &self.spec;
        let cap = s.precision_cap;
        let repr = match &self.repr {
            Repr::Padic(a) => a.inv(s.q).map(Repr::Padic),
            Repr::Fq(a) => a.inv(&s.gf, cap).map(Repr::Fq),
            Repr::RatFun(a) => a.inv(&s.rf, cap).map(Repr::RatFun),
        };
        repr.map(|r| Self::from_repr(s, r)).ok_or(Error::DivisionByZero)
    }

    pub fn div(&self, o: &Scalar) -> Result<Scalar> {
        self.mul(&o.inv()?)
    }

    pub fn pow(&self, e: i64) -> Result<Scalar> {
        let mut base = if e < 0 { self.inv()? } else { self.clone() };
        let mut n = e.unsigned_abs();
        let mut acc = Scalar::one(&self.spec);
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    pub fn mul_int(&self, n: i64) -> Result<Scalar> {
        self.mul(&Scalar::from_int(&self.spec, n))
    }

    pub fn div_int(&self, n: i64) -> Result<Scalar> {
        self.div(&Scalar::from_int(&self.spec, n))
    }

    /// The same value in a copy of the field with a different precision cap.
    pub fn with_precision_cap(&self, cap: u32) -> Result<Scalar> {
        let spec = if self.spec.precision_cap == cap { self.spec.clone() } else { self.spec.with_precision(cap)? };
        let x = Scalar { spec, repr: self.repr.clone() };
        Ok(if x.is_exact() { x } else { x.to_capped(cap) })
    }

    /// Keep at most `rel` significant digits (no-op on zero).
    pub fn to_capped(&self, rel: u32) -> Scalar {
        let Some(v) = self.valuation() else {
            return self.clone();
        };
        self.truncate_abs(v + rel as i64).value().expect("nonzero value keeps its leading digit")
    }

    /// Forget all digits of valuation `>= abs`.
    pub fn truncate_abs(&self, abs: i64) -> Bounded<Scalar> {
        let s = &self.spec;
        let cap = s.precision_cap.max(1);
        let out = match &self.repr {
            Repr::Padic(a) => a.truncate_abs(s.q, abs, u32::MAX.min(cap.max((abs - a.valuation(s.q).unwrap_or(abs)).max(1) as u32))).map(Repr::Padic),
            Repr::Fq(a) => a.truncate_abs(abs, u32::MAX).map(Repr::Fq),
            Repr::RatFun(a) => a.truncate_abs(abs, u32::MAX).map(Repr::RatFun),
        };
        self.wrap(out)
    }

    /// True iff `self - o` vanishes to the available precision.
    pub fn agrees_with(&self, o: &Scalar) -> bool {
        match self.checked_sub(o) {
            Ok(Bounded::Negligible(_)) => true,
            Ok(Bounded::Value(d)) => d.is_zero(),
            Err(_) => false,
        }
    }

    /// The value as a prime-field constant, if it is one exactly.
    pub fn prime_const(&self) -> Option<PrimeConst> {
        match &self.repr {
            Repr::Padic(Padic::Exact(x)) => Some(PrimeConst::Rational(x.clone())),
            Repr::Padic(_) => None,
            Repr::Fq(l) => laurent_const(l, &self.spec.gf),
            Repr::RatFun(l) => laurent_const(l, &self.spec.rf),
        }
    }

    /// Residue-level seed for a `p`-th root: returns `(g, g_root)` with
    /// `g_root^p = g` exactly and `|self - g| < |self|`.
    pub fn pth_root_seed(&self, p: u64) -> Result<(Scalar, Scalar)> {
        let s = &self.spec;
        let v = self.valuation().ok_or_else(|| Error::NoRootInField { p, reason: "zero has no seed".into() })?;
        if v.rem_euclid(p as i64) != 0 {
            return Err(Error::NoRootInField { p, reason: format!("valuation {v} is not divisible by {p}") });
        }
        let w = v / p as i64;
        let seed = match &self.repr {
            Repr::Padic(x) => {
                let u = x.residue(s.q).expect("nonzero");
                let r = (1..s.q)
                    .find(|c| (0..p).fold(1u64, |acc, _| acc * c % s.q) == u)
                    .ok_or_else(|| Error::NoRootInField {
                        p,
                        reason: format!("residue {u} is not a {p}-th power mod {}", s.q),
                    })?;
                Scalar::from_int(s, r as i64).mul(&Scalar::uniformizer_pow(s, w))?
            }
            Repr::Fq(l) => {
                let r = l.coeffs[0].pth_roots(p, &s.gf).into_iter().next().ok_or_else(|| {
                    Error::NoRootInField { p, reason: "leading coefficient has no root in the residue field".into() }
                })?;
                Self::from_repr(s, Repr::Fq(Laurent::monomial(r, w)))
            }
            Repr::RatFun(l) => {
                let r = l.coeffs[0].pth_roots(p, &s.rf).into_iter().next().ok_or_else(|| {
                    Error::NoRootInField { p, reason: "leading coefficient has no root in the coefficient field".into() }
                })?;
                Self::from_repr(s, Repr::RatFun(Laurent::monomial(r, w)))
            }
        };
        Ok((seed.pow(p as i64)?, seed))
    }

    /// A `p`-th root inside the field, by Newton iteration from the residue seed.
    ///
    /// Among the candidate roots the one whose leading coefficient is the
    /// smallest canonical residue root is returned; for `self` congruent to 1
    /// that is the root congruent to 1.
    pub fn pth_root(&self, p: u64) -> Result<Scalar> {
        let s = self.spec.clone();
        if !s.check_aux_prime(p) {
            return Err(Error::PreconditionFailed(format!("|{p}| != 1 in this field")));
        }
        if self.is_zero() {
            return Ok(self.clone());
        }
        let (_, seed) = self.pth_root_seed(p)?;
        if self.is_exact() {
            if let Bounded::Value(d) = seed.pow(p as i64)?.checked_sub(self)? {
                if d.is_zero() {
                    return Ok(seed);
                }
            }
        }
        let cap = s.precision_cap;
        let target = self.to_capped(cap);
        let mut r = seed.to_capped(cap);
        let pp = Scalar::from_int(&s, p as i64);
        let mut converged = false;
        for _ in 0..256 {
            match r.pow(p as i64)?.checked_sub(&target)? {
                Bounded::Negligible(_) => {
                    converged = true;
                    break;
                }
                Bounded::Value(e) => {
                    let step = e.div(&pp.mul(&r.pow(p as i64 - 1)?)?)?;
                    r = match r.checked_sub(&step)? {
                        Bounded::Value(x) => x,
                        Bounded::Negligible(_) => return Err(Error::PrecisionExhausted("root iterate vanished".into())),
                    };
                }
            }
        }
        if !converged {
            return Err(Error::PreconditionFailed("Newton iteration did not converge".into()));
        }
        if let Some(exact) = self.exact_rational_root(p, &r) {
            return Ok(exact);
        }
        Ok(r)
    }

    pub(crate) fn exact_rational_root(&self, p: u64, approx: &Scalar) -> Option<Scalar> {
        let Repr::Padic(Padic::Exact(x)) = &self.repr else {
            return None;
        };
        let n = x.numer();
        let d = x.denom();
        let rn = n.abs().nth_root(p as u32);
        let rd = d.nth_root(p as u32);
        if num_traits::pow(rn.clone(), p as usize) != n.abs() || num_traits::pow(rd.clone(), p as usize) != *d {
            return None;
        }
        let base = BigRational::new(rn, rd);
        let mut candidates = Vec::new();
        if n.is_negative() {
            if p % 2 == 1 {
                candidates.push(-base);
            }
        } else {
            candidates.push(base.clone());
            if p % 2 == 0 {
                candidates.push(-base);
            }
        }
        candidates
            .into_iter()
            .map(|c| Self::from_repr(&self.spec, Repr::Padic(Padic::Exact(c))))
            .find(|c| c.agrees_with(approx))
    }

    /// Leading coefficient with respect to the uniformiser, as a scalar.
    pub fn leading_term(&self) -> Option<Scalar> {
        let v = self.valuation()?;
        let s = &self.spec;
        Some(match &self.repr {
            Repr::Padic(x) => {
                let r = x.residue(s.q)?;
                Scalar::from_int(s, r as i64).mul(&Scalar::uniformizer_pow(s, v)).ok()?
            }
            Repr::Fq(l) => Self::from_repr(s, Repr::Fq(Laurent::monomial(l.coeffs[0].clone(), v))),
            Repr::RatFun(l) => Self::from_repr(s, Repr::RatFun(Laurent::monomial(l.coeffs[0].clone(), v))),
        })
    }

    pub fn parse(spec: &Arc<FieldSpec>, s: &str) -> Result<Scalar> {
        parse::parse_scalar(spec, s)
    }
}

fn laurent_const<C: Coeff>(l: &Laurent<C>, ctx: &C::Ctx) -> Option<PrimeConst> {
    if l.is_zero() {
        return Some(PrimeConst::Modular(0));
    }
    if !l.is_exact() || l.val != 0 || l.coeffs.len() != 1 {
        return None;
    }
    l.coeffs[0].prime_const(ctx).map(PrimeConst::Modular)
}

fn fmt_laurent<C: Coeff>(l: &Laurent<C>, ctx: &C::Ctx, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let mut parts = Vec::new();
    for (i, c) in l.coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let e = l.val + i as i64;
        let mono = match e {
            0 => String::new(),
            1 => "t".into(),
            _ => format!("t^{e}"),
        };
        let coeff = c.render(ctx);
        parts.push(if mono.is_empty() {
            if c.is_compound(ctx) {
                format!("({coeff})")
            } else {
                coeff
            }
        } else if c.prime_const(ctx) == Some(1) {
            mono
        } else if c.is_compound(ctx) {
            format!("({coeff})*{mono}")
        } else {
            format!("{coeff}*{mono}")
        });
    }
    if parts.is_empty() {
        parts.push("0".into());
    }
    if let Some(a) = l.abs_prec() {
        parts.push(format!("O(t^{a})"));
    }
    write!(f, "{}", parts.join(" + "))
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = &self.spec;
        match &self.repr {
            Repr::Padic(Padic::Exact(x)) => write!(f, "{x}"),
            Repr::Padic(Padic::Capped { val, unit, prec }) => {
                let u = Padic::signed_unit(unit, s.q, *prec);
                let abs = val + *prec as i64;
                if *val == 0 {
                    write!(f, "{u} + O({}^{abs})", s.q)
                } else {
                    write!(f, "{u}*{}^{val} + O({}^{abs})", s.q, s.q)
                }
            }
            Repr::Fq(l) => fmt_laurent(l, &s.gf, f),
            Repr::RatFun(l) => fmt_laurent(l, &s.rf, f),
        }
    }
}

impl Serialize for Scalar {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl Scalar {
    /// True iff the value is exactly one.
    pub fn is_one(&self) -> bool {
        match &self.repr {
            Repr::Padic(Padic::Exact(x)) => x.is_one(),
            _ => self.is_exact() && *self == Scalar::one(&self.spec),
        }
    }
}
