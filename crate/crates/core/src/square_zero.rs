//! Square-zero extensions `A' = A (+) A/J` with product
//! `(a, b)(a', b') = (a a', pi(a) b' + pi(a') b)` and the max norm
//! `|(a, b)| = max(|a|, |b|_{A/J})`.
//!
//! The quotient `A/J` is given by a projection and a seminorm evaluator; with
//! `J = 0` the extension is the ring of dual numbers `A[e]/(e^2)`.

use std::fmt;
use std::sync::Arc;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::field::Bounded;
use crate::lognorm::LogNorm;
use crate::ring::NormedRing;
use crate::series::TateSeries;

pub trait Quotient<R>: Send + Sync {
    /// Canonical representative of the class of `a`.
    fn project(&self, a: &R) -> Result<R>;
    /// `inf { |a + j| : j in J }` for the class of `b`.
    fn seminorm(&self, b: &R) -> Result<LogNorm>;
    fn describe(&self) -> String;
}

/// `J = 0`.
#[derive(Clone, Copy, Debug, Default)]
pub struct ZeroIdeal;

impl<R: NormedRing> Quotient<R> for ZeroIdeal {
    fn project(&self, a: &R) -> Result<R> {
        Ok(a.clone())
    }

    fn seminorm(&self, b: &R) -> Result<LogNorm> {
        b.norm_bound()
    }

    fn describe(&self) -> String {
        "J = 0".into()
    }
}

/// `J = (T^k)` in a one-variable power series ring. The quotient seminorm of
/// a class is the Gauss norm of its part of degree `< k`.
#[derive(Clone, Copy, Debug)]
pub struct MonomialIdeal {
    pub degree: i64,
}

impl Quotient<TateSeries> for MonomialIdeal {
    fn project(&self, a: &TateSeries) -> Result<TateSeries> {
        Ok(a.truncate(self.degree - 1)?.0)
    }

    fn seminorm(&self, b: &TateSeries) -> Result<LogNorm> {
        Ok(self.project(b)?.gauss_norm()?.0)
    }

    fn describe(&self) -> String {
        format!("J = (T^{})", self.degree)
    }
}

#[derive(Clone)]
pub struct SquareZeroElem<R> {
    pub a: R,
    pub b: R,
    quotient: Arc<dyn Quotient<R>>,
}

impl<R: fmt::Debug> fmt::Debug for SquareZeroElem<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SquareZeroElem").field("a", &self.a).field("b", &self.b).finish()
    }
}

impl<R: fmt::Display> fmt::Display for SquareZeroElem<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.a, self.b)
    }
}

impl<R: NormedRing + 'static> SquareZeroElem<R> {
    /// Dual number `a + b e`.
    pub fn dual(a: R, b: R) -> Self {
        SquareZeroElem { a, b, quotient: Arc::new(ZeroIdeal) }
    }

    pub fn new(a: R, b: R, quotient: Arc<dyn Quotient<R>>) -> Result<Self> {
        let b = quotient.project(&b)?;
        Ok(SquareZeroElem { a, b, quotient })
    }

    /// The section `a -> (a, 0)`.
    pub fn section(&self, a: R) -> Self {
        let b = a.zero_like();
        SquareZeroElem { a, b, quotient: self.quotient.clone() }
    }

    /// `e = (0, 1)`.
    pub fn epsilon(&self) -> Self {
        SquareZeroElem { a: self.a.zero_like(), b: self.a.one_like(), quotient: self.quotient.clone() }
    }

    pub fn with_parts(&self, a: R, b: R) -> Result<Self> {
        Self::new(a, b, self.quotient.clone())
    }

    fn same_quotient(&self, o: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.quotient, &o.quotient) || self.quotient.describe() == o.quotient.describe() {
            Ok(())
        } else {
            Err(Error::Incompatible("different square-zero quotients".into()))
        }
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.same_quotient(o)?;
        self.with_parts(self.a.ring_add(&o.a)?, self.b.ring_add(&o.b)?)
    }

    pub fn neg(&self) -> Self {
        SquareZeroElem { a: self.a.ring_neg(), b: self.b.ring_neg(), quotient: self.quotient.clone() }
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.add(&o.neg())
    }

    /// `(a a', pi(a) b' + pi(a') b)`.
    pub fn mul(&self, o: &Self) -> Result<Self> {
        self.same_quotient(o)?;
        let pa = self.quotient.project(&self.a)?;
        let pa2 = self.quotient.project(&o.a)?;
        let b = pa.ring_mul(&o.b)?.ring_add(&pa2.ring_mul(&self.b)?)?;
        self.with_parts(self.a.ring_mul(&o.a)?, b)
    }

    /// `max(|a|, |b|_{A/J})`.
    pub fn norm(&self) -> Result<LogNorm> {
        let na = self.a.norm_bound()?;
        let nb = self.quotient.seminorm(&self.b)?;
        Ok(if self.a.norm_le(&na, &nb)? { nb } else { na })
    }

    /// The reduction map onto the base ring.
    pub fn reduction(&self) -> R {
        self.a.clone()
    }

    /// Equality of both components to working precision.
    pub fn agrees(&self, o: &Self) -> Result<bool> {
        let db = match self.b.ring_sub(&o.b)? {
            Bounded::Negligible(_) => true,
            Bounded::Value(d) => self.quotient.project(&d)?.is_zero(),
        };
        Ok(db && self.a.agrees(&o.a)?)
    }

    pub fn quotient_description(&self) -> String {
        self.quotient.describe()
    }
}

impl SquareZeroElem<TateSeries> {
    pub fn to_json(&self) -> Value {
        json!({ "a": self.a.to_json(), "b": self.b.to_json() })
    }
}
