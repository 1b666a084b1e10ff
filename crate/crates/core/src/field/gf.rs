//! Finite fields `F_{p^d}` as `F_p[z]/(m(z))`.

use serde::{Deserialize, Serialize};

use super::coeff::Coeff;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GfCtx {
    pub p: u64,
    pub degree: u32,
    /// Monic modulus, low degree first, length `degree + 1`.
    pub modulus: Vec<u64>,
}

/// Element of `F_{p^d}`, coefficients of `1, z, ..., z^{d-1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Gf(pub Vec<u64>);

fn poly_rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let mut a = a.to_vec();
    let d = m.len() - 1;
    while a.len() > d {
        let lead = a.pop().unwrap();
        if lead != 0 {
            let shift = a.len() - d;
            for (i, &mi) in m[..d].iter().enumerate() {
                a[shift + i] = (a[shift + i] + (p - lead) * mi % p) % p;
            }
        }
    }
    a.resize(d, 0);
    a
}

fn is_irreducible(m: &[u64], p: u64) -> bool {
    let d = m.len() - 1;
    // trial division by every monic polynomial of degree 1..=d/2
    for k in 1..=d / 2 {
        let count = p.pow(k as u32);
        for idx in 0..count {
            let mut g = Vec::with_capacity(k + 1);
            let mut x = idx;
            for _ in 0..k {
                g.push(x % p);
                x /= p;
            }
            g.push(1);
            if poly_rem(m, &g, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

impl GfCtx {
    /// Field of size `p^degree` with the lexicographically first monic
    /// irreducible modulus.
    pub fn new(p: u64, degree: u32) -> Self {
        assert!(degree >= 1);
        if degree == 1 {
            return GfCtx { p, degree, modulus: vec![0, 1] };
        }
        let d = degree as usize;
        let count = p.pow(degree);
        for idx in 0..count {
            let mut m = Vec::with_capacity(d + 1);
            let mut x = idx;
            for _ in 0..d {
                m.push(x % p);
                x /= p;
            }
            m.push(1);
            if m[0] != 0 && is_irreducible(&m, p) {
                return GfCtx { p, degree, modulus: m };
            }
        }
        unreachable!("irreducible polynomials exist in every degree")
    }

    pub fn size(&self) -> u64 {
        self.p.pow(self.degree)
    }

    /// Element with canonical index `idx` (base-`p` digits of the coefficients).
    pub fn element(&self, mut idx: u64) -> Gf {
        let mut c = Vec::with_capacity(self.degree as usize);
        for _ in 0..self.degree {
            c.push(idx % self.p);
            idx /= self.p;
        }
        Gf(c)
    }

    /// The adjoined root `z` of the modulus; `None` for prime fields.
    pub fn generator(&self) -> Option<Gf> {
        (self.degree > 1).then(|| self.element(self.p))
    }
}

impl Gf {
    pub fn index(&self, ctx: &GfCtx) -> u64 {
        self.0.iter().rev().fold(0, |acc, &c| acc * ctx.p + c)
    }

    pub fn pow(&self, mut e: u64, ctx: &GfCtx) -> Gf {
        let mut base = self.clone();
        let mut acc = Gf::one(ctx);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base, ctx);
            }
            base = base.mul(&base, ctx);
            e >>= 1;
        }
        acc
    }

    /// Inverse Frobenius `x^{1/p}`.
    pub fn frobenius_root(&self, ctx: &GfCtx) -> Gf {
        self.pow(ctx.p.pow(ctx.degree - 1), ctx)
    }
}

impl Coeff for Gf {
    type Ctx = GfCtx;

    fn zero(ctx: &GfCtx) -> Self {
        Gf(vec![0; ctx.degree as usize])
    }

    fn one(ctx: &GfCtx) -> Self {
        let mut c = vec![0; ctx.degree as usize];
        c[0] = 1;
        Gf(c)
    }

    fn from_i64(n: i64, ctx: &GfCtx) -> Self {
        let mut c = vec![0; ctx.degree as usize];
        c[0] = n.rem_euclid(ctx.p as i64) as u64;
        Gf(c)
    }

    fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    fn add(&self, o: &Self, ctx: &GfCtx) -> Self {
        Gf(self.0.iter().zip(&o.0).map(|(a, b)| (a + b) % ctx.p).collect())
    }

    fn neg(&self, ctx: &GfCtx) -> Self {
        Gf(self.0.iter().map(|a| (ctx.p - a) % ctx.p).collect())
    }

    fn mul(&self, o: &Self, ctx: &GfCtx) -> Self {
        let d = ctx.degree as usize;
        let mut prod = vec![0u64; 2 * d - 1];
        for (i, a) in self.0.iter().enumerate() {
            if *a == 0 {
                continue;
            }
            for (j, b) in o.0.iter().enumerate() {
                prod[i + j] = (prod[i + j] + a * b) % ctx.p;
            }
        }
        Gf(poly_rem(&prod, &ctx.modulus, ctx.p))
    }

    fn inv(&self, ctx: &GfCtx) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.pow(ctx.size() - 2, ctx))
        }
    }

    fn pth_roots(&self, p: u64, ctx: &GfCtx) -> Vec<Self> {
        (0..ctx.size())
            .map(|i| ctx.element(i))
            .filter(|x| x.pow(p, ctx) == *self)
            .collect()
    }

    fn prime_const(&self, _ctx: &GfCtx) -> Option<u64> {
        if self.0[1..].iter().all(|&c| c == 0) {
            Some(self.0[0])
        } else {
            None
        }
    }

    fn render(&self, _ctx: &GfCtx) -> String {
        let mut parts = Vec::new();
        for (i, &c) in self.0.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => "z".to_string(),
                _ => format!("z^{i}"),
            };
            parts.push(match (c, i) {
                (_, 0) => c.to_string(),
                (1, _) => mono,
                _ => format!("{c}*{mono}"),
            });
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }

    fn is_compound(&self, ctx: &GfCtx) -> bool {
        self.prime_const(ctx).is_none()
    }
}
