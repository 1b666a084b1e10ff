//! Laurent series `sum c_n t^n` over a coefficient field, either exact (a
//! Laurent polynomial) or known to a finite number of significant terms.

use super::coeff::Coeff;

/// Result of an operation that may cancel below the known precision.
#[derive(Clone, Debug, PartialEq)]
pub enum Outcome<T> {
    Value(T),
    /// All known digits cancelled; the true value has valuation at least this.
    Negligible(i64),
}

impl<T> Outcome<T> {
    pub fn map<U>(self, f: impl FnOnce(T) -> U) -> Outcome<U> {
        match self {
            Outcome::Value(v) => Outcome::Value(f(v)),
            Outcome::Negligible(a) => Outcome::Negligible(a),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Laurent<C> {
    /// Valuation (exponent of `coeffs[0]`); meaningless for zero.
    pub val: i64,
    /// `coeffs[i]` multiplies `t^{val+i}`; `coeffs[0]` is nonzero unless the series is zero.
    pub coeffs: Vec<C>,
    /// Relative precision: terms of degree `>= val + prec` are unknown. `None` = exact.
    pub prec: Option<u32>,
}

impl<C: Coeff> Laurent<C> {
    pub fn zero() -> Self {
        Laurent { val: 0, coeffs: Vec::new(), prec: None }
    }

    pub fn monomial(c: C, e: i64) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            Laurent { val: e, coeffs: vec![c], prec: None }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_exact(&self) -> bool {
        self.prec.is_none()
    }

    pub fn abs_prec(&self) -> Option<i64> {
        self.prec.map(|p| self.val + p as i64)
    }

    /// Coefficient of `t^n`, `None` when it lies beyond the known precision.
    pub fn coeff(&self, n: i64, ctx: &C::Ctx) -> Option<C> {
        if let Some(a) = self.abs_prec() {
            if n >= a {
                return None;
            }
        }
        let i = n - self.val;
        if i < 0 || i as usize >= self.coeffs.len() {
            Some(C::zero(ctx))
        } else {
            Some(self.coeffs[i as usize].clone())
        }
    }

    /// Builds from dense coefficients starting at `val`, cutting at the
    /// absolute precision `abs` (exclusive) and at the relative cap.
    pub fn normalize(val: i64, mut coeffs: Vec<C>, abs: Option<i64>, cap: u32) -> Outcome<Self> {
        if let Some(a) = abs {
            let keep = (a - val).max(0) as usize;
            coeffs.truncate(keep);
        }
        let lead = coeffs.iter().position(|c| !c.is_zero());
        let Some(lead) = lead else {
            return match abs {
                None => Outcome::Value(Self::zero()),
                Some(a) => Outcome::Negligible(a),
            };
        };
        coeffs.drain(..lead);
        let val = val + lead as i64;
        let prec = abs.map(|a| ((a - val) as u32).min(cap));
        if let Some(p) = prec {
            coeffs.truncate(p as usize);
        }
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        Outcome::Value(Laurent { val, coeffs, prec })
    }

    pub fn add(&self, o: &Self, ctx: &C::Ctx, cap: u32) -> Outcome<Self> {
        let abs = match (self.abs_prec(), o.abs_prec()) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        if self.is_zero() && o.is_zero() {
            return Outcome::Value(Self::zero());
        }
        let lo = match (self.is_zero(), o.is_zero()) {
            (true, _) => o.val,
            (_, true) => self.val,
            _ => self.val.min(o.val),
        };
        let hi_a = self.val + self.coeffs.len() as i64;
        let hi_b = o.val + o.coeffs.len() as i64;
        let mut hi = hi_a.max(hi_b);
        if let Some(a) = abs {
            hi = hi.min(a);
        }
        let len = (hi - lo).max(0) as usize;
        let mut out = vec![C::zero(ctx); len];
        for (src, v) in [(self, self.val), (o, o.val)] {
            for (i, c) in src.coeffs.iter().enumerate() {
                let idx = v + i as i64 - lo;
                if idx >= 0 && (idx as usize) < len {
                    out[idx as usize] = out[idx as usize].add(c, ctx);
                }
            }
        }
        Self::normalize(lo, out, abs, cap)
    }

    pub fn neg(&self, ctx: &C::Ctx) -> Self {
        Laurent { val: self.val, coeffs: self.coeffs.iter().map(|c| c.neg(ctx)).collect(), prec: self.prec }
    }

    pub fn mul(&self, o: &Self, ctx: &C::Ctx, cap: u32) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let rel = match (self.prec, o.prec) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        let full = self.coeffs.len() + o.coeffs.len() - 1;
        let len = rel.map_or(full, |r| full.min(r as usize));
        let mut out = vec![C::zero(ctx); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            if i >= len || a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                if i + j >= len {
                    break;
                }
                out[i + j] = out[i + j].add(&a.mul(b, ctx), ctx);
            }
        }
        let val = self.val + o.val;
        match Self::normalize(val, out, rel.map(|r| val + r as i64), cap) {
            Outcome::Value(v) => v,
            Outcome::Negligible(_) => unreachable!("leading coefficients of a field multiply to a unit"),
        }
    }

    /// Multiplicative inverse; exact only for exact monomials.
    pub fn inv(&self, ctx: &C::Ctx, cap: u32) -> Option<Self> {
        let lead = self.coeffs.first()?;
        let b0 = lead.inv(ctx)?;
        if self.is_exact() && self.coeffs.len() == 1 {
            return Some(Laurent { val: -self.val, coeffs: vec![b0], prec: None });
        }
        let n = self.prec.unwrap_or(cap).min(cap) as usize;
        let mut b: Vec<C> = Vec::with_capacity(n);
        b.push(b0.clone());
        for k in 1..n {
            let mut s = C::zero(ctx);
            for j in 1..=k.min(self.coeffs.len() - 1) {
                s = s.add(&self.coeffs[j].mul(&b[k - j], ctx), ctx);
            }
            b.push(s.mul(&b0, ctx).neg(ctx));
        }
        let val = -self.val;
        match Self::normalize(val, b, Some(val + n as i64), cap) {
            Outcome::Value(v) => Some(v),
            Outcome::Negligible(_) => None,
        }
    }

    /// Forget everything at or beyond absolute degree `abs`.
    pub fn truncate_abs(&self, abs: i64, cap: u32) -> Outcome<Self> {
        let abs = match self.abs_prec() {
            Some(a) => a.min(abs),
            None => abs,
        };
        Self::normalize(self.val, self.coeffs.clone(), Some(abs), cap)
    }
}
