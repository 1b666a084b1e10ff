//! Rational functions in `u_1, ..., u_N` over `F_p`.
//!
//! Polynomials are sparse maps from exponent vectors to coefficients, ordered
//! lexicographically (`u_1 > u_2 > ...`). A fraction is kept with a monic
//! denominator and with common monomial content removed; when one side
//! divides the other exactly the quotient is taken. Equality is decided by
//! cross-multiplication, so it does not depend on full gcd reduction.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::coeff::Coeff;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RatFunCtx {
    pub p: u64,
    pub nvars: usize,
}

/// Sparse polynomial over `F_p`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MPoly {
    pub terms: BTreeMap<Vec<u32>, u64>,
}

fn inv_mod(a: u64, p: u64) -> u64 {
    // p is prime
    let mut acc = 1u64;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    acc
}

impl MPoly {
    pub fn zero() -> Self {
        MPoly { terms: BTreeMap::new() }
    }

    pub fn constant(c: u64, ctx: &RatFunCtx) -> Self {
        let mut m = Self::zero();
        if c % ctx.p != 0 {
            m.terms.insert(vec![0; ctx.nvars], c % ctx.p);
        }
        m
    }

    pub fn monomial(exps: Vec<u32>, c: u64, ctx: &RatFunCtx) -> Self {
        let mut m = Self::zero();
        if c % ctx.p != 0 {
            m.terms.insert(exps, c % ctx.p);
        }
        m
    }

    /// The variable `u_i` (1-based).
    pub fn var(i: usize, ctx: &RatFunCtx) -> Self {
        let mut e = vec![0; ctx.nvars];
        e[i - 1] = 1;
        Self::monomial(e, 1, ctx)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&x| x == 0))
    }

    pub fn constant_value(&self) -> Option<u64> {
        if self.is_constant() {
            Some(self.terms.values().next().copied().unwrap_or(0))
        } else {
            None
        }
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum::<u32>()).max().unwrap_or(0)
    }

    fn leading(&self) -> Option<(&Vec<u32>, &u64)> {
        self.terms.iter().next_back()
    }

    pub fn add(&self, o: &Self, ctx: &RatFunCtx) -> Self {
        let mut terms = self.terms.clone();
        for (e, c) in &o.terms {
            let entry = terms.entry(e.clone()).or_insert(0);
            *entry = (*entry + c) % ctx.p;
            if *entry == 0 {
                terms.remove(e);
            }
        }
        MPoly { terms }
    }

    pub fn scale(&self, c: u64, ctx: &RatFunCtx) -> Self {
        let c = c % ctx.p;
        if c == 0 {
            return Self::zero();
        }
        MPoly { terms: self.terms.iter().map(|(e, a)| (e.clone(), a * c % ctx.p)).collect() }
    }

    pub fn neg(&self, ctx: &RatFunCtx) -> Self {
        self.scale(ctx.p - 1, ctx)
    }

    pub fn mul(&self, o: &Self, ctx: &RatFunCtx) -> Self {
        let mut terms: BTreeMap<Vec<u32>, u64> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &o.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                let entry = terms.entry(e).or_insert(0);
                *entry = (*entry + ca * cb) % ctx.p;
            }
        }
        terms.retain(|_, c| *c != 0);
        MPoly { terms }
    }

    /// Multivariate division by a single divisor: `(quotient, remainder)`.
    pub fn div_rem(&self, d: &Self, ctx: &RatFunCtx) -> (Self, Self) {
        let (de, dc) = match d.leading() {
            Some((e, c)) => (e.clone(), *c),
            None => panic!("division by the zero polynomial"),
        };
        let dinv = inv_mod(dc, ctx.p);
        let mut rem = Self::zero();
        let mut quo = Self::zero();
        let mut f = self.clone();
        while let Some((fe, fc)) = f.leading().map(|(e, c)| (e.clone(), *c)) {
            if fe.iter().zip(&de).all(|(a, b)| a >= b) {
                let qe: Vec<u32> = fe.iter().zip(&de).map(|(a, b)| a - b).collect();
                let t = Self::monomial(qe, fc * dinv % ctx.p, ctx);
                f = f.add(&t.mul(d, ctx).neg(ctx), ctx);
                quo = quo.add(&t, ctx);
            } else {
                f.terms.remove(&fe);
                rem.terms.insert(fe, fc);
            }
        }
        (quo, rem)
    }

    fn min_exponents(&self) -> Option<Vec<u32>> {
        let mut it = self.terms.keys();
        let first = it.next()?.clone();
        Some(it.fold(first, |acc, e| acc.iter().zip(e).map(|(a, b)| *a.min(b)).collect()))
    }

    fn shift_down(&self, by: &[u32]) -> Self {
        MPoly {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.iter().zip(by).map(|(a, b)| a - b).collect(), *c))
                .collect(),
        }
    }

    pub fn render(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (e, c) in self.terms.iter().rev() {
            let mut factors = Vec::new();
            for (i, &x) in e.iter().enumerate() {
                match x {
                    0 => {}
                    1 => factors.push(format!("u{}", i + 1)),
                    _ => factors.push(format!("u{}^{}", i + 1, x)),
                }
            }
            let mono = factors.join("*");
            parts.push(match (mono.is_empty(), *c) {
                (true, c) => c.to_string(),
                (false, 1) => mono,
                (false, c) => format!("{c}*{mono}"),
            });
        }
        parts.join(" + ")
    }
}

/// Element of `F_p(u_1, ..., u_N)`.
#[derive(Clone, Debug)]
pub struct RatFun {
    pub num: MPoly,
    pub den: MPoly,
    p: u64,
}

impl RatFun {
    pub fn from_poly(num: MPoly, ctx: &RatFunCtx) -> Self {
        RatFun { num, den: MPoly::constant(1, ctx), p: ctx.p }
    }

    pub fn new(num: MPoly, den: MPoly, ctx: &RatFunCtx) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return RatFun { num, den: MPoly::constant(1, ctx), p: ctx.p };
        }
        let (_, lc) = den.leading().map(|(e, c)| (e.clone(), *c)).unwrap();
        let li = inv_mod(lc, ctx.p);
        let mut num = num.scale(li, ctx);
        let mut den = den.scale(li, ctx);
        // common monomial content
        if let (Some(a), Some(b)) = (num.min_exponents(), den.min_exponents()) {
            let m: Vec<u32> = a.iter().zip(&b).map(|(x, y)| *x.min(y)).collect();
            if m.iter().any(|&x| x > 0) {
                num = num.shift_down(&m);
                den = den.shift_down(&m);
            }
        }
        if !den.is_constant() {
            let (q, r) = num.div_rem(&den, ctx);
            if r.is_zero() {
                return RatFun { num: q, den: MPoly::constant(1, ctx), p: ctx.p };
            }
            let (q, r) = den.div_rem(&num, ctx);
            if r.is_zero() && !num.is_constant() {
                // num | den: 1 / (den / num), renormalised
                return RatFun::new(MPoly::constant(1, ctx), q, ctx);
            }
        }
        RatFun { num, den, p: ctx.p }
    }

    pub fn as_poly(&self) -> Option<&MPoly> {
        // denominators are monic, so a constant denominator is 1
        self.den.is_constant().then_some(&self.num)
    }
}

impl PartialEq for RatFun {
    fn eq(&self, other: &Self) -> bool {
        if self.den == other.den {
            return self.num == other.num;
        }
        let nvars = self.num.terms.keys().chain(self.den.terms.keys()).next().map_or(0, |e| e.len());
        let ctx = RatFunCtx { p: self.p, nvars };
        self.num.mul(&other.den, &ctx) == other.num.mul(&self.den, &ctx)
    }
}

impl Coeff for RatFun {
    type Ctx = RatFunCtx;

    fn zero(ctx: &RatFunCtx) -> Self {
        RatFun::from_poly(MPoly::zero(), ctx)
    }

    fn one(ctx: &RatFunCtx) -> Self {
        RatFun::from_poly(MPoly::constant(1, ctx), ctx)
    }

    fn from_i64(n: i64, ctx: &RatFunCtx) -> Self {
        RatFun::from_poly(MPoly::constant(n.rem_euclid(ctx.p as i64) as u64, ctx), ctx)
    }

    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn add(&self, o: &Self, ctx: &RatFunCtx) -> Self {
        if self.den == o.den {
            return RatFun::new(self.num.add(&o.num, ctx), self.den.clone(), ctx);
        }
        RatFun::new(
            self.num.mul(&o.den, ctx).add(&o.num.mul(&self.den, ctx), ctx),
            self.den.mul(&o.den, ctx),
            ctx,
        )
    }

    fn neg(&self, ctx: &RatFunCtx) -> Self {
        RatFun { num: self.num.neg(ctx), den: self.den.clone(), p: ctx.p }
    }

    fn mul(&self, o: &Self, ctx: &RatFunCtx) -> Self {
        RatFun::new(self.num.mul(&o.num, ctx), self.den.mul(&o.den, ctx), ctx)
    }

    fn inv(&self, ctx: &RatFunCtx) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(RatFun::new(self.den.clone(), self.num.clone(), ctx))
        }
    }

    fn pth_roots(&self, p: u64, ctx: &RatFunCtx) -> Vec<Self> {
        // only constants times monomials with exponents divisible by p
        let single = |m: &MPoly| -> Option<(Vec<u32>, u64)> {
            (m.terms.len() == 1).then(|| m.terms.iter().next().map(|(e, c)| (e.clone(), *c)).unwrap())
        };
        let (Some((ne, nc)), Some((de, dc))) = (single(&self.num), single(&self.den)) else {
            return Vec::new();
        };
        if ne.iter().chain(&de).any(|&x| x as u64 % p != 0) {
            return Vec::new();
        }
        let c = nc * inv_mod(dc, ctx.p) % ctx.p;
        let root_num: Vec<u32> = ne.iter().map(|&x| x / p as u32).collect();
        let root_den: Vec<u32> = de.iter().map(|&x| x / p as u32).collect();
        (1..ctx.p)
            .filter(|x| {
                let mut acc = 1u64;
                for _ in 0..p {
                    acc = acc * x % ctx.p;
                }
                acc == c
            })
            .map(|x| {
                RatFun::new(
                    MPoly::monomial(root_num.clone(), x, ctx),
                    MPoly::monomial(root_den.clone(), 1, ctx),
                    ctx,
                )
            })
            .collect()
    }

    fn prime_const(&self, _ctx: &RatFunCtx) -> Option<u64> {
        if self.den.is_constant() {
            self.num.constant_value()
        } else {
            None
        }
    }

    fn render(&self, _ctx: &RatFunCtx) -> String {
        if self.den.is_constant() {
            self.num.render()
        } else {
            format!("({})/({})", self.num.render(), self.den.render())
        }
    }

    fn is_compound(&self, _ctx: &RatFunCtx) -> bool {
        !self.den.is_constant() || self.num.terms.len() > 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> RatFunCtx {
        RatFunCtx { p: 2, nvars: 3 }
    }

    #[test]
    fn fractions_cancel_exact_divisors() {
        let c = ctx();
        let u1 = MPoly::var(1, &c);
        let u2 = MPoly::var(2, &c);
        let s = u1.add(&u2, &c);
        // (u1+u2)^2 / (u1+u2) = u1 + u2
        let f = RatFun::new(s.mul(&s, &c), s.clone(), &c);
        assert!(f.den.is_constant());
        assert_eq!(f.num, s);
        // u1*u2 / u1 = u2
        let g = RatFun::new(u1.mul(&u2, &c), u1.clone(), &c);
        assert_eq!(g.num, u2);
    }

    #[test]
    fn inverse_round_trip() {
        let c = ctx();
        let s = MPoly::var(1, &c).add(&MPoly::var(3, &c), &c);
        let f = RatFun::from_poly(s, &c);
        let inv = f.inv(&c).unwrap();
        assert_eq!(f.mul(&inv, &c), RatFun::one(&c));
    }

    #[test]
    fn char_two_cancellation() {
        let c = ctx();
        let u1 = RatFun::from_poly(MPoly::var(1, &c), &c);
        assert!(u1.add(&u1, &c).is_zero());
    }
}
