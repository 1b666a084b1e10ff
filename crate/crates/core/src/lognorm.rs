//! Exact multiplicative norm values.
//!
//! A norm value is stored through its exponents: `q^{-e0} * r_1^{e_1} * ... * r_g^{e_g}`
//! where `q` is the residue characteristic of the base field and the `r_j` are
//! formal radius generators declared in a [`RadiusContext`]. Multiplication and
//! powers are exact exponent arithmetic. Ordering needs the real numbers
//! `log_q(1/r_j)`, which are only known through refinable rational intervals,
//! so comparison goes through [`RadiusContext::compare`].

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;
use std::sync::Mutex;

use num_bigint::{BigInt, Sign};
use num_integer::Roots;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Exponent data of a nonzero norm value.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NormExponents {
    /// `e0`: the value carries the factor `q^{-e0}`.
    pub base: BigRational,
    /// `e_j` for generator `j`; trailing zeros are trimmed.
    pub radius: Vec<BigRational>,
}

/// A norm value, or the norm of zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum LogNorm {
    Zero,
    Value(NormExponents),
}

fn trim(mut v: Vec<BigRational>) -> Vec<BigRational> {
    while v.last().map_or(false, |x| x.is_zero()) {
        v.pop();
    }
    v
}

pub(crate) fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl LogNorm {
    /// The identity norm value `1`.
    pub fn one() -> Self {
        LogNorm::Value(NormExponents { base: BigRational::zero(), radius: Vec::new() })
    }

    /// `q^{-e0}`.
    pub fn from_base(e0: BigRational) -> Self {
        LogNorm::Value(NormExponents { base: e0, radius: Vec::new() })
    }

    pub fn from_base_int(e0: i64) -> Self {
        Self::from_base(rat(e0))
    }

    pub fn new(e0: BigRational, radius: Vec<BigRational>) -> Self {
        LogNorm::Value(NormExponents { base: e0, radius: trim(radius) })
    }

    /// Integer-exponent convenience constructor.
    pub fn from_ints(e0: i64, radius: &[i64]) -> Self {
        Self::new(rat(e0), radius.iter().map(|&e| rat(e)).collect())
    }

    /// `r_j^{e}`.
    pub fn radius_power(generator: usize, e: i64) -> Self {
        let mut radius = vec![BigRational::zero(); generator + 1];
        radius[generator] = rat(e);
        Self::new(BigRational::zero(), radius)
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, LogNorm::Zero)
    }

    pub fn is_one(&self) -> bool {
        match self {
            LogNorm::Zero => false,
            LogNorm::Value(v) => v.base.is_zero() && v.radius.is_empty(),
        }
    }

    pub fn base_exp(&self) -> Option<&BigRational> {
        match self {
            LogNorm::Zero => None,
            LogNorm::Value(v) => Some(&v.base),
        }
    }

    pub fn radius_exp(&self, generator: usize) -> BigRational {
        match self {
            LogNorm::Zero => BigRational::zero(),
            LogNorm::Value(v) => v.radius.get(generator).cloned().unwrap_or_else(BigRational::zero),
        }
    }

    /// Number of generators with a stored (possibly zero) exponent.
    pub fn arity(&self) -> usize {
        match self {
            LogNorm::Zero => 0,
            LogNorm::Value(v) => v.radius.len(),
        }
    }

    /// Componentwise exponent sum; `Zero` is absorbing.
    pub fn mul(&self, other: &LogNorm) -> LogNorm {
        match (self, other) {
            (LogNorm::Value(a), LogNorm::Value(b)) => {
                let n = a.radius.len().max(b.radius.len());
                let radius = (0..n)
                    .map(|j| {
                        a.radius.get(j).cloned().unwrap_or_else(BigRational::zero)
                            + b.radius.get(j).cloned().unwrap_or_else(BigRational::zero)
                    })
                    .collect();
                LogNorm::new(&a.base + &b.base, radius)
            }
            _ => LogNorm::Zero,
        }
    }

    /// Exponents scaled by `s`. `Zero^s` is `Zero` for `s > 0` and undefined otherwise.
    pub fn pow(&self, s: &BigRational) -> Result<LogNorm> {
        match self {
            LogNorm::Zero if s.is_positive() => Ok(LogNorm::Zero),
            LogNorm::Zero => Err(Error::PreconditionFailed(format!("ZERO^{s} is undefined"))),
            LogNorm::Value(v) => Ok(LogNorm::new(
                &v.base * s,
                v.radius.iter().map(|e| e * s).collect(),
            )),
        }
    }

    pub fn powi(&self, n: i64) -> Result<LogNorm> {
        self.pow(&rat(n))
    }

    /// Multiplicative inverse of a nonzero value.
    pub fn inv(&self) -> Result<LogNorm> {
        self.powi(-1)
    }

    /// `self / other` for nonzero `other`.
    pub fn div(&self, other: &LogNorm) -> Result<LogNorm> {
        Ok(self.mul(&other.inv()?))
    }

    /// True iff the value lies in the divisible hull of the value group,
    /// i.e. no formal radius generator occurs.
    pub fn in_value_group_rational(&self) -> Result<bool> {
        match self {
            LogNorm::Zero => Err(Error::PreconditionFailed(
                "the zero norm is not in the value group".into(),
            )),
            LogNorm::Value(v) => Ok(v.radius.is_empty()),
        }
    }
}

impl fmt::Display for LogNorm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LogNorm::Zero => write!(f, "0"),
            LogNorm::Value(v) => {
                write!(f, "({}", v.base)?;
                for (j, e) in v.radius.iter().enumerate() {
                    if j == 0 {
                        write!(f, ";")?;
                    } else {
                        write!(f, ",")?;
                    }
                    write!(f, "{e}")?;
                }
                write!(f, ")")
            }
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum LogNormWire {
    Zero { zero: bool },
    Value { e0: String, radius: Vec<String> },
}

impl Serialize for LogNorm {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            LogNorm::Zero => LogNormWire::Zero { zero: true },
            LogNorm::Value(v) => LogNormWire::Value {
                e0: v.base.to_string(),
                radius: v.radius.iter().map(|e| e.to_string()).collect(),
            },
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for LogNorm {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match LogNormWire::deserialize(d)? {
            LogNormWire::Zero { zero: true } => Ok(LogNorm::Zero),
            LogNormWire::Zero { zero: false } => Err(D::Error::custom("`zero` must be true")),
            LogNormWire::Value { e0, radius } => {
                let parse = |s: &str| BigRational::from_str(s).map_err(D::Error::custom);
                let base = parse(&e0)?;
                let radius = radius.iter().map(|s| parse(s)).collect::<std::result::Result<_, _>>()?;
                Ok(LogNorm::new(base, radius))
            }
        }
    }
}

/// How the real number `log_q(1/r)` of a radius generator is produced.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "snake_case")]
pub enum RadiusSource {
    /// `(a + b*sqrt(c)) / d` with `c` not a perfect square; provably irrational.
    Quadratic { a: i64, b: i64, c: u64, d: i64 },
    /// An exact rational exponent: the radius lies in the divisible value group.
    Rational { value: String },
}

/// A formal radius generator `r = q^{-l}` with `l = log_q(1/r)`.
#[derive(Debug, Serialize, Deserialize)]
pub struct RadiusDecl {
    pub id: String,
    #[serde(flatten)]
    pub source: RadiusSource,
    #[serde(skip)]
    cache: Mutex<Option<(u32, BigRational, BigRational)>>,
}

impl Clone for RadiusDecl {
    fn clone(&self) -> Self {
        RadiusDecl { id: self.id.clone(), source: self.source.clone(), cache: Mutex::new(None) }
    }
}

impl PartialEq for RadiusDecl {
    fn eq(&self, other: &Self) -> bool {
        self.id == other.id && self.source == other.source
    }
}

impl RadiusDecl {
    pub fn quadratic(id: &str, a: i64, b: i64, c: u64, d: i64) -> Result<Self> {
        if d == 0 {
            return Err(Error::Config(format!("radius `{id}`: zero denominator")));
        }
        if b != 0 && (c.sqrt() * c.sqrt() == c) {
            return Err(Error::Config(format!("radius `{id}`: {c} is a perfect square")));
        }
        Ok(RadiusDecl {
            id: id.to_string(),
            source: RadiusSource::Quadratic { a, b, c, d },
            cache: Mutex::new(None),
        })
    }

    pub fn rational(id: &str, value: BigRational) -> Self {
        RadiusDecl {
            id: id.to_string(),
            source: RadiusSource::Rational { value: value.to_string() },
            cache: Mutex::new(None),
        }
    }

    /// Default demonstration radius: `log_q(1/r) = 1/sqrt(2) = 0.7071...`.
    pub fn default_irrational(id: &str) -> Self {
        Self::quadratic(id, 0, 1, 2, 2).expect("2 is not a square")
    }

    /// Test radius with `log_q(1/r) = sqrt(3601)/100 = 0.60008...`.
    pub fn near_six_tenths(id: &str) -> Self {
        Self::quadratic(id, 0, 1, 3601, 100).expect("3601 is not a square")
    }

    /// Whether the declaration asserts `r` outside the divisible value group.
    pub fn is_irrational(&self) -> bool {
        match &self.source {
            RadiusSource::Quadratic { b, .. } => *b != 0,
            RadiusSource::Rational { .. } => false,
        }
    }

    fn validate(&self) -> Result<()> {
        match &self.source {
            RadiusSource::Quadratic { b, c, d, .. } => {
                if *d == 0 {
                    return Err(Error::Config(format!("radius `{}`: zero denominator", self.id)));
                }
                if *b != 0 && c.sqrt() * c.sqrt() == *c {
                    return Err(Error::Config(format!("radius `{}`: {c} is a perfect square", self.id)));
                }
                Ok(())
            }
            RadiusSource::Rational { value } => BigRational::from_str(value)
                .map(|_| ())
                .map_err(|e| Error::Config(format!("radius `{}`: {e}", self.id))),
        }
    }

    /// A closed rational interval of width at most `2^{-depth}` (times the
    /// quadratic's scale) containing `log_q(1/r)`. Intervals only shrink.
    pub fn interval(&self, depth: u32) -> (BigRational, BigRational) {
        let mut cache = self.cache.lock().expect("radius cache poisoned");
        if let Some((d, lo, hi)) = cache.as_ref() {
            if *d >= depth {
                return (lo.clone(), hi.clone());
            }
        }
        let (lo, hi) = match &self.source {
            RadiusSource::Rational { value } => {
                let v = BigRational::from_str(value).expect("validated rational");
                (v.clone(), v)
            }
            RadiusSource::Quadratic { a, b, c, d } => {
                let scale = BigInt::one() << depth;
                let s = (BigInt::from(*c) * &scale * &scale).sqrt();
                let sqrt_lo = BigRational::new(s.clone(), scale.clone());
                let sqrt_hi = BigRational::new(s + 1, scale);
                let (blo, bhi) = if *b >= 0 {
                    (rat(*b) * &sqrt_lo, rat(*b) * &sqrt_hi)
                } else {
                    (rat(*b) * &sqrt_hi, rat(*b) * &sqrt_lo)
                };
                let (x, y) = (rat(*a) + blo, rat(*a) + bhi);
                let dd = rat(*d);
                if *d > 0 {
                    (x / &dd, y / &dd)
                } else {
                    (y / &dd, x / &dd)
                }
            }
        };
        *cache = Some((depth, lo.clone(), hi.clone()));
        (lo, hi)
    }

    /// Midpoint approximation of `log_q(1/r)`.
    pub fn approx(&self) -> f64 {
        let (lo, hi) = self.interval(48);
        ((lo + hi) / rat(2)).to_f64().unwrap_or(f64::NAN)
    }
}

/// Declared radius generators of a session together with the residue
/// characteristic `q` that fixes the logarithm base.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RadiusContext {
    pub q: u64,
    pub radii: Vec<RadiusDecl>,
    #[serde(default = "default_depth")]
    pub max_depth: u32,
}

fn default_depth() -> u32 {
    256
}

impl RadiusContext {
    pub fn new(q: u64, radii: Vec<RadiusDecl>) -> Result<Self> {
        let ctx = RadiusContext { q, radii, max_depth: default_depth() };
        ctx.validate()?;
        Ok(ctx)
    }

    pub fn with_max_depth(mut self, depth: u32) -> Self {
        self.max_depth = depth;
        self
    }

    pub fn validate(&self) -> Result<()> {
        for (i, r) in self.radii.iter().enumerate() {
            r.validate()?;
            if self.radii[..i].iter().any(|s| s.id == r.id) {
                return Err(Error::Config(format!("radius `{}` declared twice", r.id)));
            }
        }
        if self.max_depth == 0 {
            return Err(Error::Config("refinement depth must be positive".into()));
        }
        Ok(())
    }

    pub fn index_of(&self, id: &str) -> Result<usize> {
        self.radii
            .iter()
            .position(|r| r.id == id)
            .ok_or_else(|| Error::UndeclaredRadius(id.to_string()))
    }

    fn check_arity(&self, a: &LogNorm) -> Result<()> {
        if a.arity() > self.radii.len() {
            return Err(Error::Incompatible(format!(
                "norm uses {} radius generators but only {} are declared",
                a.arity(),
                self.radii.len()
            )));
        }
        Ok(())
    }

    /// Interval for `L(a) = e0 + sum_j e_j * log_q(1/r_j)`; the value is `q^{-L}`.
    fn exponent_interval(&self, a: &NormExponents, depth: u32) -> (BigRational, BigRational) {
        let mut lo = a.base.clone();
        let mut hi = a.base.clone();
        for (j, e) in a.radius.iter().enumerate() {
            if e.is_zero() {
                continue;
            }
            let (l, h) = self.radii[j].interval(depth);
            if e.is_positive() {
                lo += e * &l;
                hi += e * &h;
            } else {
                lo += e * &h;
                hi += e * &l;
            }
        }
        (lo, hi)
    }

    /// Total order on norm values, refining radius intervals until the sign
    /// of the log-difference is determined.
    pub fn compare(&self, a: &LogNorm, b: &LogNorm) -> Result<Ordering> {
        self.check_arity(a)?;
        self.check_arity(b)?;
        let (x, y) = match (a, b) {
            (LogNorm::Zero, LogNorm::Zero) => return Ok(Ordering::Equal),
            (LogNorm::Zero, _) => return Ok(Ordering::Less),
            (_, LogNorm::Zero) => return Ok(Ordering::Greater),
            (LogNorm::Value(x), LogNorm::Value(y)) => (x, y),
        };
        if x == y {
            return Ok(Ordering::Equal);
        }
        // difference of exponents; a < b iff L(a) > L(b)
        let n = x.radius.len().max(y.radius.len());
        let diff = NormExponents {
            base: &x.base - &y.base,
            radius: (0..n)
                .map(|j| {
                    x.radius.get(j).cloned().unwrap_or_else(BigRational::zero)
                        - y.radius.get(j).cloned().unwrap_or_else(BigRational::zero)
                })
                .collect(),
        };
        if diff.radius.iter().all(|e| e.is_zero()) {
            return Ok(diff.base.cmp(&BigRational::zero()).reverse());
        }
        let mut depth = 8u32.min(self.max_depth);
        loop {
            let (lo, hi) = self.exponent_interval(&diff, depth);
            if lo.is_positive() {
                return Ok(Ordering::Less);
            }
            if hi.is_negative() {
                return Ok(Ordering::Greater);
            }
            if lo.is_zero() && hi.is_zero() {
                return Ok(Ordering::Equal);
            }
            if depth >= self.max_depth {
                return Err(Error::UndecidableAtDepth { depth });
            }
            depth = (depth * 2).min(self.max_depth);
        }
    }

    pub fn max<'a>(&self, a: &'a LogNorm, b: &'a LogNorm) -> Result<&'a LogNorm> {
        Ok(if self.compare(a, b)? == Ordering::Less { b } else { a })
    }

    pub fn le(&self, a: &LogNorm, b: &LogNorm) -> Result<bool> {
        Ok(self.compare(a, b)? != Ordering::Greater)
    }

    pub fn lt(&self, a: &LogNorm, b: &LogNorm) -> Result<bool> {
        Ok(self.compare(a, b)? == Ordering::Less)
    }

    /// Rational bounds on `log_q(value)` at the given refinement depth.
    pub fn log_q_bounds(&self, a: &LogNorm, depth: u32) -> Result<(BigRational, BigRational)> {
        self.check_arity(a)?;
        match a {
            LogNorm::Zero => Err(Error::PreconditionFailed("log of the zero norm".into())),
            LogNorm::Value(x) => {
                let (lo, hi) = self.exponent_interval(x, depth);
                Ok((-hi, -lo))
            }
        }
    }

    /// Approximate `log10(value)`, for display.
    pub fn approx_log10(&self, a: &LogNorm) -> Result<f64> {
        let (lo, hi) = self.log_q_bounds(a, 48)?;
        let mid = ((lo + hi) / rat(2)).to_f64().unwrap_or(f64::NAN);
        Ok(mid * (self.q as f64).log10())
    }

    /// Certified check that the value exceeds `10^k`, using a rational lower
    /// bound on `log_q(value)` and an exact integer power comparison.
    pub fn exceeds_power_of_ten(&self, a: &LogNorm, k: u32) -> Result<bool> {
        if a.is_zero() {
            return Ok(false);
        }
        let mut depth = 16u32.min(self.max_depth);
        loop {
            let (lower, upper) = self.log_q_bounds(a, depth)?;
            // lower bound rounded down to a multiple of 2^-10
            let den: i64 = 1 << 10;
            let scaled = (&lower * rat(den)).floor().to_integer();
            if scaled.sign() == Sign::Plus {
                let exp = scaled.to_u32().ok_or_else(|| Error::CapExceeded("exponent too large".into()))?;
                let lhs = num_traits::pow(BigInt::from(self.q), exp as usize);
                let rhs = num_traits::pow(BigInt::from(10u32), (k as usize) * den as usize);
                if lhs > rhs {
                    return Ok(true);
                }
            }
            // upper bound already at or below k*log_q(10)?
            let upper_scaled = (&upper * rat(den)).ceil().to_integer();
            if upper_scaled.sign() != Sign::Plus {
                return Ok(false);
            }
            if let Some(exp) = upper_scaled.to_u32() {
                let lhs = num_traits::pow(BigInt::from(self.q), exp as usize);
                let rhs = num_traits::pow(BigInt::from(10u32), (k as usize) * den as usize);
                if lhs <= rhs {
                    return Ok(false);
                }
            }
            if depth >= self.max_depth {
                return Err(Error::UndecidableAtDepth { depth });
            }
            depth = (depth * 2).min(self.max_depth);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn six_tenths() -> RadiusContext {
        RadiusContext::new(3, vec![RadiusDecl::near_six_tenths("r")]).unwrap()
    }

    #[test]
    fn mul_adds_exponents() {
        let a = LogNorm::from_ints(1, &[0]);
        let b = LogNorm::from_ints(0, &[1]);
        assert_eq!(a.mul(&b), LogNorm::from_ints(1, &[1]));
        assert_eq!(LogNorm::Zero.mul(&a), LogNorm::Zero);
        let c = LogNorm::new(q(1, 2), vec![rat(3)]);
        let d = LogNorm::new(q(1, 2), vec![rat(-3)]);
        assert_eq!(c.mul(&d), LogNorm::from_ints(1, &[]));
    }

    #[test]
    fn powers() {
        assert_eq!(LogNorm::from_ints(2, &[]).pow(&q(1, 2)).unwrap(), LogNorm::from_ints(1, &[]));
        assert_eq!(LogNorm::from_ints(1, &[1]).powi(3).unwrap(), LogNorm::from_ints(3, &[3]));
        assert_eq!(LogNorm::Zero.powi(2).unwrap(), LogNorm::Zero);
        assert!(LogNorm::Zero.powi(0).is_err());
    }

    #[test]
    fn compare_against_irrational_radius() {
        let ctx = six_tenths();
        let one = LogNorm::from_ints(0, &[]);
        assert_eq!(ctx.compare(&one, &one).unwrap(), Ordering::Equal);
        // 3^-1 < 3^-0.6
        assert_eq!(
            ctx.compare(&LogNorm::from_ints(1, &[]), &LogNorm::from_ints(0, &[1])).unwrap(),
            Ordering::Less
        );
        // 3^-1 > 3^-1.2
        assert_eq!(
            ctx.compare(&LogNorm::from_ints(1, &[]), &LogNorm::from_ints(0, &[2])).unwrap(),
            Ordering::Greater
        );
        assert_eq!(ctx.compare(&LogNorm::Zero, &one).unwrap(), Ordering::Less);
    }

    #[test]
    fn value_group_membership() {
        assert!(LogNorm::new(q(1, 2), vec![]).in_value_group_rational().unwrap());
        assert!(!LogNorm::from_ints(0, &[1]).in_value_group_rational().unwrap());
        assert!(!LogNorm::new(rat(2), vec![q(3, 2)]).in_value_group_rational().unwrap());
    }

    #[test]
    fn undecidable_when_depth_too_small() {
        // 1/sqrt(2) against 7071/10000: agree to four digits
        let ctx = RadiusContext::new(3, vec![RadiusDecl::default_irrational("r")]).unwrap().with_max_depth(8);
        let a = LogNorm::new(q(7071, 10000), vec![]);
        let b = LogNorm::from_ints(0, &[1]);
        assert!(matches!(ctx.compare(&a, &b), Err(Error::UndecidableAtDepth { .. })));
        let deep = RadiusContext::new(3, vec![RadiusDecl::default_irrational("r")]).unwrap();
        // 0.7071 < 0.70710678 so 3^-0.7071 > r
        assert_eq!(deep.compare(&a, &b).unwrap(), Ordering::Greater);
    }

    #[test]
    fn rational_radius_can_tie() {
        let ctx = RadiusContext::new(3, vec![RadiusDecl::rational("r", q(1, 2))]).unwrap();
        let a = LogNorm::from_ints(1, &[]);
        let b = LogNorm::from_ints(0, &[2]);
        assert_eq!(ctx.compare(&a, &b).unwrap(), Ordering::Equal);
    }

    #[test]
    fn power_of_ten_bounds() {
        let ctx = six_tenths();
        // r^-4 = 3^2.4003 ~ 13.98
        let ratio = LogNorm::from_ints(0, &[-4]);
        assert!(ctx.exceeds_power_of_ten(&ratio, 1).unwrap());
        assert!(!ctx.exceeds_power_of_ten(&ratio, 2).unwrap());
        let log = ctx.approx_log10(&ratio).unwrap();
        assert!((10f64.powf(log) - 13.98).abs() < 0.05, "{}", 10f64.powf(log));
    }

    #[test]
    fn lognorm_json_shape() {
        let z = serde_json::to_string(&LogNorm::Zero).unwrap();
        assert_eq!(z, r#"{"zero":true}"#);
        let v = LogNorm::new(q(1, 2), vec![rat(-3)]);
        let s = serde_json::to_string(&v).unwrap();
        assert_eq!(s, r#"{"e0":"1/2","radius":["-3"]}"#);
        assert_eq!(serde_json::from_str::<LogNorm>(&s).unwrap(), v);
    }
}
