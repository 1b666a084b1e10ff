//! Truncated elements of Tate algebras `k{r^-1 T}` and Laurent algebras
//! `k{r^-1 T, r T^-1}`.
//!
//! A [`TateSeries`] stores finitely many nonzero coefficients plus a tail
//! bound: every omitted term `a_v T^v` satisfies `|a_v| r^v <= tail`. For
//! power series the tail additionally records the lowest total degree at
//! which omitted terms can occur, which is what makes finite linear systems
//! over truncations faithful.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Bounded, FieldSpec, Scalar};
use crate::lognorm::{rat, LogNorm, RadiusContext};

pub const DEFAULT_SUPPORT_CAP: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SeriesKind {
    /// `k{r^-1 T}`: exponents `>= 0`.
    Power,
    /// `k{r^-1 T, r T^-1}`: exponents in `Z`.
    Laurent,
}

#[derive(Clone, Debug)]
pub struct TateSeries {
    spec: Arc<FieldSpec>,
    ctx: Arc<RadiusContext>,
    /// Radius generator index (into `ctx.radii`) for each variable.
    radii: Vec<usize>,
    kind: SeriesKind,
    terms: BTreeMap<Vec<i64>, Scalar>,
    tail: LogNorm,
    /// Lowest total degree of omitted terms; `None` when the tail is zero or unknown.
    tail_start: Option<i64>,
    support_cap: usize,
}

impl PartialEq for TateSeries {
    fn eq(&self, o: &Self) -> bool {
        self.kind == o.kind
            && self.radii == o.radii
            && self.terms == o.terms
            && self.tail == o.tail
            && self.tail_start == o.tail_start
    }
}

fn total(exps: &[i64]) -> i64 {
    exps.iter().sum()
}

impl TateSeries {
    /// The zero series in variables bound to the named radii.
    pub fn zero(
        spec: &Arc<FieldSpec>,
        ctx: &Arc<RadiusContext>,
        radius_ids: &[&str],
        kind: SeriesKind,
    ) -> Result<Self> {
        if radius_ids.is_empty() {
            return Err(Error::Config("a series needs at least one variable".into()));
        }
        if ctx.q != spec.q {
            return Err(Error::Incompatible(format!(
                "radius context is in base {} but the field has residue characteristic {}",
                ctx.q, spec.q
            )));
        }
        let radii = radius_ids.iter().map(|id| ctx.index_of(id)).collect::<Result<Vec<_>>>()?;
        Ok(TateSeries {
            spec: spec.clone(),
            ctx: ctx.clone(),
            radii,
            kind,
            terms: BTreeMap::new(),
            tail: LogNorm::Zero,
            tail_start: None,
            support_cap: DEFAULT_SUPPORT_CAP,
        })
    }

    /// A series with the same field, radii and kind as `self` but no terms.
    pub fn zero_like(&self) -> Self {
        TateSeries { terms: BTreeMap::new(), tail: LogNorm::Zero, tail_start: None, ..self.clone() }
    }

    pub fn constant_like(&self, c: Scalar) -> Result<Self> {
        self.monomial_like(c, &vec![0; self.nvars()])
    }

    pub fn one_like(&self) -> Self {
        self.constant_like(Scalar::one(&self.spec)).expect("constant exponent is valid")
    }

    pub fn monomial_like(&self, c: Scalar, exps: &[i64]) -> Result<Self> {
        let mut s = self.zero_like();
        s.set_coeff(exps, c)?;
        Ok(s)
    }

    /// The variable `T_i` (0-based).
    pub fn variable_like(&self, i: usize) -> Result<Self> {
        let mut e = vec![0; self.nvars()];
        *e.get_mut(i).ok_or_else(|| Error::Config(format!("no variable {i}")))? = 1;
        self.monomial_like(Scalar::one(&self.spec), &e)
    }

    /// The same series over a copy of the field with a different precision cap.
    pub fn with_precision_cap(&self, cap: u32) -> Result<Self> {
        let spec = if self.spec.precision_cap == cap { self.spec.clone() } else { self.spec.with_precision(cap)? };
        let mut out = TateSeries { spec, terms: BTreeMap::new(), ..self.clone() };
        for (e, c) in &self.terms {
            out.terms.insert(e.clone(), c.with_precision_cap(cap)?);
        }
        Ok(out)
    }

    pub fn with_support_cap(mut self, cap: usize) -> Self {
        self.support_cap = cap.max(1);
        self
    }

    pub fn support_cap(&self) -> usize {
        self.support_cap
    }

    pub fn spec(&self) -> &Arc<FieldSpec> {
        &self.spec
    }

    pub fn ctx(&self) -> &Arc<RadiusContext> {
        &self.ctx
    }

    pub fn kind(&self) -> SeriesKind {
        self.kind
    }

    pub fn nvars(&self) -> usize {
        self.radii.len()
    }

    pub fn radius_ids(&self) -> Vec<&str> {
        self.radii.iter().map(|&j| self.ctx.radii[j].id.as_str()).collect()
    }

    pub fn terms(&self) -> &BTreeMap<Vec<i64>, Scalar> {
        &self.terms
    }

    pub fn tail(&self) -> &LogNorm {
        &self.tail
    }

    pub fn tail_start(&self) -> Option<i64> {
        self.tail_start
    }

    /// Coefficient of `T^exps`; zero when not stored.
    pub fn coeff(&self, exps: &[i64]) -> Scalar {
        self.terms.get(exps).cloned().unwrap_or_else(|| Scalar::zero(&self.spec))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty() && self.tail.is_zero()
    }

    /// True iff the series is a polynomial with exact coefficients.
    pub fn is_exact(&self) -> bool {
        self.tail.is_zero() && self.terms.values().all(Scalar::is_exact)
    }

    /// Highest total degree `D` such that all coefficients of total degree
    /// `<= D` are stored exactly; `None` for unbounded.
    pub fn faithful_degree(&self) -> Option<i64> {
        if self.tail.is_zero() {
            None
        } else {
            Some(self.tail_start.map_or(i64::MIN, |s| s - 1))
        }
    }

    fn check_exps(&self, exps: &[i64]) -> Result<()> {
        if exps.len() != self.nvars() {
            return Err(Error::Incompatible(format!(
                "exponent {:?} has {} entries for {} variables",
                exps,
                exps.len(),
                self.nvars()
            )));
        }
        if self.kind == SeriesKind::Power && exps.iter().any(|&e| e < 0) {
            return Err(Error::Incompatible(format!("negative exponent {exps:?} in a power series")));
        }
        Ok(())
    }

    /// Overwrite one coefficient (zero removes it).
    pub fn set_coeff(&mut self, exps: &[i64], c: Scalar) -> Result<()> {
        self.check_exps(exps)?;
        if c.is_zero() {
            self.terms.remove(exps);
        } else {
            self.terms.insert(exps.to_vec(), c);
        }
        Ok(())
    }

    /// Widen the tail so that it also covers terms `>= start` of norm `<= bound`.
    pub fn with_tail(mut self, bound: LogNorm, start: Option<i64>) -> Result<Self> {
        self.absorb_tail(&bound, start)?;
        Ok(self)
    }

    /// `r^v` for the variables' radii.
    pub fn radius_monomial(&self, exps: &[i64]) -> LogNorm {
        let n = self.radii.iter().max().map_or(0, |m| m + 1);
        let mut e = vec![BigRational::from_integer(0.into()); n];
        for (&j, &x) in self.radii.iter().zip(exps) {
            e[j] += rat(x);
        }
        LogNorm::new(rat(0), e)
    }

    pub fn term_norm(&self, exps: &[i64], c: &Scalar) -> LogNorm {
        c.norm().mul(&self.radius_monomial(exps))
    }

    fn compatible(&self, o: &Self) -> Result<()> {
        if self.kind != o.kind
            || self.radii != o.radii
            || !(Arc::ptr_eq(&self.ctx, &o.ctx) || *self.ctx == *o.ctx)
            || !(Arc::ptr_eq(&self.spec, &o.spec) || *self.spec == *o.spec)
        {
            return Err(Error::Incompatible("series live in different rings".into()));
        }
        Ok(())
    }

    fn absorb_tail(&mut self, bound: &LogNorm, start: Option<i64>) -> Result<()> {
        if bound.is_zero() {
            return Ok(());
        }
        if self.tail.is_zero() {
            self.tail = bound.clone();
            self.tail_start = start;
        } else {
            self.tail = self.ctx.max(&self.tail, bound)?.clone();
            self.tail_start = match (self.tail_start, start) {
                (Some(a), Some(b)) => Some(a.min(b)),
                _ => None,
            };
        }
        Ok(())
    }

    /// Lowest total degree among stored terms and the tail.
    fn low_degree(&self) -> Option<i64> {
        let stored = self.terms.keys().map(|e| total(e)).min();
        let tail = if self.tail.is_zero() { None } else { Some(self.tail_start.unwrap_or(i64::MIN)) };
        match (stored, tail) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        }
    }

    /// Add `c T^exps`, folding a capped cancellation into the tail.
    fn accumulate(&mut self, exps: Vec<i64>, c: &Scalar) -> Result<()> {
        match self.terms.get(&exps) {
            None => {
                if !c.is_zero() {
                    self.terms.insert(exps, c.clone());
                }
            }
            Some(old) => match old.checked_add(c)? {
                Bounded::Value(v) if v.is_zero() => {
                    self.terms.remove(&exps);
                }
                Bounded::Value(v) => {
                    self.terms.insert(exps, v);
                }
                Bounded::Negligible(n) => {
                    self.terms.remove(&exps);
                    let b = n.mul(&self.radius_monomial(&exps));
                    let start = (self.kind == SeriesKind::Power).then(|| total(&exps));
                    self.absorb_tail(&b, start)?;
                }
            },
        }
        Ok(())
    }

    /// Move the smallest terms into the tail until the support fits the cap.
    fn prune(&mut self) -> Result<()> {
        if self.terms.len() <= self.support_cap {
            return Ok(());
        }
        let mut normed: Vec<(LogNorm, Vec<i64>)> =
            self.terms.iter().map(|(e, c)| (self.term_norm(e, c), e.clone())).collect();
        let mut err = None;
        normed.sort_by(|a, b| match self.ctx.compare(&a.0, &b.0) {
            Ok(o) => o.then_with(|| a.1.cmp(&b.1)),
            Err(e) => {
                err.get_or_insert(e);
                Ordering::Equal
            }
        });
        if let Some(e) = err {
            return Err(e);
        }
        let excess = self.terms.len() - self.support_cap;
        for (n, e) in normed.into_iter().take(excess) {
            self.terms.remove(&e);
            let start = (self.kind == SeriesKind::Power).then(|| total(&e));
            self.absorb_tail(&n, start)?;
        }
        Ok(())
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.compatible(o)?;
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.accumulate(e.clone(), c)?;
        }
        out.absorb_tail(&o.tail, o.tail_start)?;
        out.prune()?;
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        TateSeries { terms: self.terms.iter().map(|(e, c)| (e.clone(), c.neg())).collect(), ..self.clone() }
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.add(&o.neg())
    }

    /// Norm bound `max(stored Gauss norm, tail)`.
    pub fn norm_bound(&self) -> Result<LogNorm> {
        let (g, _) = self.gauss_norm()?;
        Ok(self.ctx.max(&g, &self.tail)?.clone())
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        self.compatible(o)?;
        let mut out = self.zero_like();
        for (ea, a) in &self.terms {
            for (eb, b) in &o.terms {
                let e: Vec<i64> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.accumulate(e, &a.mul(b)?)?;
            }
        }
        if !self.tail.is_zero() || !o.tail.is_zero() {
            let fb = self.norm_bound()?;
            let gb = o.norm_bound()?;
            let bound = self.ctx.max(&self.tail.mul(&gb), &o.tail.mul(&fb))?.clone();
            let start = if self.kind == SeriesKind::Power {
                let from_f = (!self.tail.is_zero()).then(|| {
                    self.tail_start.unwrap_or(0).saturating_add(o.low_degree().unwrap_or(0))
                });
                let from_g = (!o.tail.is_zero()).then(|| {
                    o.tail_start.unwrap_or(0).saturating_add(self.low_degree().unwrap_or(0))
                });
                match (from_f, from_g) {
                    (Some(a), Some(b)) => Some(a.min(b)),
                    (a, b) => a.or(b),
                }
            } else {
                None
            };
            out.absorb_tail(&bound, start)?;
        }
        out.prune()?;
        Ok(out)
    }

    pub fn pow(&self, n: u32) -> Result<Self> {
        let mut acc = self.one_like();
        let mut base = self.clone();
        let mut k = n;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// Multiply every coefficient by a scalar.
    pub fn scale(&self, c: &Scalar) -> Result<Self> {
        if c.is_zero() {
            return Ok(self.zero_like());
        }
        let mut out = self.zero_like();
        for (e, a) in &self.terms {
            out.terms.insert(e.clone(), a.mul(c)?);
        }
        out.absorb_tail(&self.tail.mul(&c.norm()), self.tail_start)?;
        Ok(out)
    }

    /// Gauss norm of the stored part, and whether it strictly dominates the tail
    /// (in which case it is the Gauss norm of every completion).
    pub fn gauss_norm(&self) -> Result<(LogNorm, bool)> {
        let mut best = LogNorm::Zero;
        for (e, c) in &self.terms {
            let n = self.term_norm(e, c);
            if self.ctx.lt(&best, &n)? {
                best = n;
            }
        }
        let exact = self.tail.is_zero() || self.ctx.lt(&self.tail, &best)?;
        Ok((best, exact))
    }

    /// `max_v rho(a_v) r^v`, with `rho = |.|` on field coefficients.
    pub fn spectral_radius_laurent(&self) -> Result<(LogNorm, bool)> {
        if self.kind != SeriesKind::Laurent {
            return Err(Error::PreconditionFailed("spectral radius formula needs a Laurent series".into()));
        }
        let mut best = LogNorm::Zero;
        for (e, c) in &self.terms {
            let rho = c.norm();
            let n = rho.mul(&self.radius_monomial(e));
            best = self.ctx.max(&best, &n)?.clone();
        }
        let exact = self.tail.is_zero() || self.ctx.lt(&self.tail, &best)?;
        Ok((best, exact))
    }

    /// `gauss_norm(f^l)^(1/l)`.
    pub fn spectral_power_estimate(&self, l: u32) -> Result<LogNorm> {
        if l == 0 {
            return Err(Error::PreconditionFailed("power must be positive".into()));
        }
        if !self.tail.is_zero() {
            return Err(Error::PreconditionFailed("power estimate needs an exact polynomial".into()));
        }
        let p = self.pow(l)?;
        if !p.tail.is_zero() {
            return Err(Error::CapExceeded(format!(
                "f^{l} exceeds the support cap of {} terms",
                self.support_cap
            )));
        }
        let (n, _) = p.gauss_norm()?;
        n.pow(&BigRational::new(1.into(), l.into()))
    }

    /// Split into the polynomial part of total degree `<= d` (zero tail) and the remainder.
    pub fn truncate(&self, d: i64) -> Result<(Self, Self)> {
        if self.kind != SeriesKind::Power {
            return Err(Error::PreconditionFailed("truncation is defined for power series".into()));
        }
        let mut head = self.zero_like();
        let mut rest = self.zero_like();
        for (e, c) in &self.terms {
            if total(e) <= d {
                head.terms.insert(e.clone(), c.clone());
            } else {
                rest.terms.insert(e.clone(), c.clone());
            }
        }
        rest.tail = self.tail.clone();
        rest.tail_start = self.tail_start;
        Ok((head, rest))
    }

    /// The image under the inclusion of power series into Laurent series.
    pub fn as_laurent(&self) -> Self {
        TateSeries { kind: SeriesKind::Laurent, ..self.clone() }
    }

    /// Terms of norm `<= bound` are moved into the tail.
    pub fn drop_below(&self, bound: &LogNorm) -> Result<Self> {
        let mut out = self.clone();
        for (e, c) in &self.terms {
            let n = self.term_norm(e, c);
            if self.ctx.le(&n, bound)? {
                out.terms.remove(e);
                let start = (self.kind == SeriesKind::Power).then(|| total(e));
                out.absorb_tail(&n, start)?;
            }
        }
        Ok(out)
    }

    /// Formal partial derivative in variable `i`.
    pub fn derivative(&self, i: usize) -> Result<Self> {
        if i >= self.nvars() {
            return Err(Error::Config(format!("no variable {i}")));
        }
        if !self.tail.is_zero() {
            return Err(Error::PreconditionFailed("formal derivative needs an exact polynomial".into()));
        }
        let mut out = self.zero_like();
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[i] -= 1;
            out.accumulate(e2, &c.mul_int(e[i])?)?;
        }
        Ok(out)
    }

    /// True iff the difference has no stored terms (it may still have a tail).
    pub fn agrees_with(&self, o: &Self) -> Result<bool> {
        Ok(self.sub(o)?.terms.is_empty())
    }

    pub fn to_json(&self) -> SeriesJson {
        SeriesJson {
            kind: self.kind,
            radius: self.radius_ids().into_iter().map(String::from).collect(),
            terms: self
                .terms
                .iter()
                .map(|(e, c)| TermJson { exp: e.clone(), coeff: c.to_string() })
                .collect(),
            tail: self.tail.clone(),
            tail_start: self.tail_start,
        }
    }

    pub fn from_json(spec: &Arc<FieldSpec>, ctx: &Arc<RadiusContext>, j: &SeriesJson) -> Result<Self> {
        let ids: Vec<&str> = j.radius.iter().map(String::as_str).collect();
        let mut s = Self::zero(spec, ctx, &ids, j.kind)?;
        for t in &j.terms {
            let c = Scalar::parse(spec, &t.coeff)?;
            if s.terms.contains_key(&t.exp) {
                return Err(Error::Parse(format!("exponent {:?} listed twice", t.exp)));
            }
            s.set_coeff(&t.exp, c)?;
        }
        s.absorb_tail(&j.tail, j.tail_start)?;
        Ok(s)
    }

    /// Parse a polynomial in `T` (one variable) with coefficients in the field,
    /// e.g. `"3*T + T^2"` or `"T + T^-1"`.
    pub fn parse_univariate(
        spec: &Arc<FieldSpec>,
        ctx: &Arc<RadiusContext>,
        radius_id: &str,
        kind: SeriesKind,
        src: &str,
    ) -> Result<Self> {
        let mut s = Self::zero(spec, ctx, &[radius_id], kind)?;
        for (e, c) in parse_terms(src)? {
            let c = Scalar::parse(spec, &c)?;
            s.check_exps(&[e])?;
            s.accumulate(vec![e], &c)?;
        }
        Ok(s)
    }
}

/// Split `"c1*T^e1 + c2*T^e2 - ..."` into (exponent, coefficient source) pairs.
fn parse_terms(src: &str) -> Result<Vec<(i64, String)>> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    let mut pieces = Vec::new();
    for (i, ch) in src.chars().enumerate() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            _ => {}
        }
        let prev = cur.trim_end().chars().last();
        if depth == 0 && (ch == '+' || ch == '-') && i > 0 && !matches!(prev, None | Some('^') | Some('*') | Some('/')) {
            pieces.push(std::mem::take(&mut cur));
            if ch == '-' {
                cur.push('-');
            }
        } else {
            cur.push(ch);
        }
    }
    pieces.push(cur);
    for p in pieces {
        let p = p.trim();
        if p.is_empty() {
            return Err(Error::Parse(format!("empty term in `{src}`")));
        }
        let (coef, var) = match p.find('T') {
            None => (p.to_string(), None),
            Some(k) => {
                let head = p[..k].trim().trim_end_matches('*').trim();
                let coef = match head {
                    "" => "1".to_string(),
                    "-" => "-1".to_string(),
                    h => h.to_string(),
                };
                (coef, Some(p[k + 1..].trim().to_string()))
            }
        };
        let e = match var.as_deref() {
            None => 0,
            Some("") => 1,
            Some(rest) => {
                let r = rest.strip_prefix('^').ok_or_else(|| Error::Parse(format!("bad term `{p}`")))?;
                r.trim()
                    .trim_start_matches('(')
                    .trim_end_matches(')')
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad exponent in `{p}`")))?
            }
        };
        out.push((e, coef));
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermJson {
    pub exp: Vec<i64>,
    pub coeff: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeriesJson {
    pub kind: SeriesKind,
    pub radius: Vec<String>,
    pub terms: Vec<TermJson>,
    pub tail: LogNorm,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tail_start: Option<i64>,
}

impl fmt::Display for TateSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = if self.nvars() == 1 {
            vec!["T".into()]
        } else {
            (1..=self.nvars()).map(|i| format!("T{i}")).collect()
        };
        let mut parts = Vec::new();
        for (e, c) in &self.terms {
            let mono: Vec<String> = e
                .iter()
                .zip(&names)
                .filter(|(x, _)| **x != 0)
                .map(|(x, n)| if *x == 1 { n.clone() } else { format!("{n}^{x}") })
                .collect();
            let cs = c.to_string();
            let cs = if cs.contains(' ') { format!("({cs})") } else { cs };
            parts.push(match (mono.is_empty(), cs.as_str()) {
                (true, _) => cs,
                (false, "1") => mono.join("*"),
                (false, _) => format!("{cs}*{}", mono.join("*")),
            });
        }
        if parts.is_empty() {
            parts.push("0".into());
        }
        if !self.tail.is_zero() {
            parts.push(format!("O(norm <= {})", self.tail));
        }
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lognorm::RadiusDecl;

    fn setup() -> (Arc<FieldSpec>, Arc<RadiusContext>) {
        let spec = FieldSpec::padic(3, 40).unwrap();
        let ctx = RadiusContext::new(3, vec![RadiusDecl::default_irrational("r1")]).unwrap();
        (spec, Arc::new(ctx))
    }

    fn ser(src: &str, kind: SeriesKind) -> TateSeries {
        let (s, c) = setup();
        TateSeries::parse_univariate(&s, &c, "r1", kind, src).unwrap()
    }

    #[test]
    fn add_cancels_exactly() {
        let t = ser("T", SeriesKind::Power);
        let z = t.add(&t.neg()).unwrap();
        assert!(z.is_zero());
        assert_eq!(z.gauss_norm().unwrap(), (LogNorm::Zero, true));
    }

    #[test]
    fn mul_examples() {
        let a = ser("3*T", SeriesKind::Power);
        let b = ser("T", SeriesKind::Power);
        assert_eq!(a.mul(&b).unwrap(), ser("3*T^2", SeriesKind::Power));
        assert!(a.mul(&a.zero_like()).unwrap().is_zero());
    }

    #[test]
    fn gauss_norm_picks_dominant_term() {
        // |3| r = 3^-1 r versus r^2: log_3 gives -1.707 < -1.414
        let f = ser("3*T + T^2", SeriesKind::Power);
        assert_eq!(f.gauss_norm().unwrap(), (LogNorm::from_ints(0, &[2]), true));
        let c = ser("3", SeriesKind::Power);
        assert_eq!(c.gauss_norm().unwrap(), (LogNorm::from_ints(1, &[]), true));
    }

    #[test]
    fn laurent_spectral_radius() {
        let f = ser("T + T^-1", SeriesKind::Laurent);
        assert_eq!(f.spectral_radius_laurent().unwrap().0, LogNorm::from_ints(0, &[-1]));
        assert_eq!(f.spectral_power_estimate(2).unwrap(), LogNorm::from_ints(0, &[-1]));
        let g = ser("3*T", SeriesKind::Laurent);
        assert_eq!(g.spectral_power_estimate(4).unwrap(), LogNorm::from_ints(1, &[1]));
        let one = ser("1", SeriesKind::Laurent);
        assert!(one.spectral_radius_laurent().unwrap().0.is_one());
        assert!(ser("T", SeriesKind::Power).spectral_radius_laurent().is_err());
    }

    #[test]
    fn truncation_splits_polynomial() {
        let f = ser("T^2 + T^4 + T^11", SeriesKind::Power);
        let (head, rest) = f.truncate(4).unwrap();
        assert_eq!(head, ser("T^2 + T^4", SeriesKind::Power));
        assert_eq!(rest, ser("T^11", SeriesKind::Power));
        assert_eq!(rest.gauss_norm().unwrap().0, LogNorm::from_ints(0, &[11]));
        assert_eq!(f.truncate(i64::MAX).unwrap().0, f);
    }

    #[test]
    fn tail_propagates_through_mul() {
        let f = ser("1 + T", SeriesKind::Power).with_tail(LogNorm::from_ints(0, &[5]), Some(5)).unwrap();
        let g = ser("T^2", SeriesKind::Power);
        let h = f.mul(&g).unwrap();
        assert_eq!(h.tail(), &LogNorm::from_ints(0, &[7]));
        assert_eq!(h.tail_start(), Some(7));
        assert_eq!(h.faithful_degree(), Some(6));
        let (n, exact) = h.gauss_norm().unwrap();
        assert_eq!(n, LogNorm::from_ints(0, &[2]));
        assert!(exact);
    }

    #[test]
    fn support_cap_prunes_smallest() {
        let f = ser("1 + T + T^2 + T^3", SeriesKind::Power).with_support_cap(2);
        let g = f.add(&f.zero_like()).unwrap();
        assert_eq!(g.terms().len(), 2);
        assert_eq!(g.tail(), &LogNorm::from_ints(0, &[2]));
        assert_eq!(g.tail_start(), Some(2));
    }

    #[test]
    fn json_round_trip() {
        let (s, c) = setup();
        let f = ser("T^2 - 5/3*T^3", SeriesKind::Power).with_tail(LogNorm::from_ints(0, &[9]), Some(9)).unwrap();
        let j = serde_json::to_string(&f.to_json()).unwrap();
        let back = TateSeries::from_json(&s, &c, &serde_json::from_str(&j).unwrap()).unwrap();
        assert_eq!(back, f);
        assert!(j.starts_with(r#"{"kind":"power","radius":["r1"],"terms":[{"exp":[2],"coeff":"1"}"#));
    }

    #[test]
    fn derivative_lowers_degree() {
        let f = ser("T^2 + 5*T^3", SeriesKind::Power);
        assert_eq!(f.derivative(0).unwrap(), ser("2*T + 15*T^2", SeriesKind::Power));
    }
}
