//! Polynomials `P(T, F)` standing for elements `P(T, f)` of `k[T][f]`, and
//! the derivation `d/dF` on them.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::Result;
use crate::field::{Bounded, FieldSpec, Scalar};
use crate::series::TateSeries;

#[derive(Clone, Debug, PartialEq)]
pub struct PolyInTF {
    spec: Arc<FieldSpec>,
    /// `(deg_T, deg_F) -> coefficient`, all nonzero.
    terms: BTreeMap<(u32, u32), Scalar>,
}

impl PolyInTF {
    pub fn zero(spec: &Arc<FieldSpec>) -> Self {
        PolyInTF { spec: spec.clone(), terms: BTreeMap::new() }
    }

    pub fn monomial(c: Scalar, t_deg: u32, f_deg: u32) -> Self {
        let mut p = Self::zero(c.spec());
        if !c.is_zero() {
            p.terms.insert((t_deg, f_deg), c);
        }
        p
    }

    pub fn constant(c: Scalar) -> Self {
        Self::monomial(c, 0, 0)
    }

    /// `T`.
    pub fn t(spec: &Arc<FieldSpec>) -> Self {
        Self::monomial(Scalar::one(spec), 1, 0)
    }

    /// `F`, standing for `f`.
    pub fn f(spec: &Arc<FieldSpec>) -> Self {
        Self::monomial(Scalar::one(spec), 0, 1)
    }

    /// A polynomial in `T` alone, from the terms of an exact one-variable series.
    pub fn from_series(s: &TateSeries) -> Result<Self> {
        let mut p = Self::zero(s.spec());
        for (e, c) in s.terms() {
            let d = u32::try_from(e[0])
                .map_err(|_| crate::Error::PreconditionFailed("negative exponent in k[T]".into()))?;
            p = p.add(&Self::monomial(c.clone(), d, 0))?;
        }
        Ok(p)
    }

    pub fn terms(&self) -> &BTreeMap<(u32, u32), Scalar> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn t_degree(&self) -> u32 {
        self.terms.keys().map(|k| k.0).max().unwrap_or(0)
    }

    pub fn f_degree(&self) -> u32 {
        self.terms.keys().map(|k| k.1).max().unwrap_or(0)
    }

    fn insert_add(&mut self, k: (u32, u32), c: &Scalar) -> Result<()> {
        let v = match self.terms.get(&k) {
            None => c.clone(),
            Some(old) => match old.checked_add(c)? {
                Bounded::Value(v) => v,
                Bounded::Negligible(_) => Scalar::zero(&self.spec),
            },
        };
        if v.is_zero() {
            self.terms.remove(&k);
        } else {
            self.terms.insert(k, v);
        }
        Ok(())
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        let mut out = self.clone();
        for (k, c) in &o.terms {
            out.insert_add(*k, c)?;
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        PolyInTF { spec: self.spec.clone(), terms: self.terms.iter().map(|(k, c)| (*k, c.neg())).collect() }
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        let mut out = Self::zero(&self.spec);
        for ((a, b), c) in &self.terms {
            for ((x, y), d) in &o.terms {
                out.insert_add((a + x, b + y), &c.mul(d)?)?;
            }
        }
        Ok(out)
    }

    /// `dP/dF`.
    pub fn d_df(&self) -> Result<Self> {
        let mut out = Self::zero(&self.spec);
        for ((a, b), c) in &self.terms {
            if *b > 0 {
                out.insert_add((*a, b - 1), &c.mul_int(*b as i64)?)?;
            }
        }
        Ok(out)
    }

    /// `P(T, f)` in the ring of `f`.
    pub fn eval(&self, f: &TateSeries) -> Result<TateSeries> {
        let t = f.variable_like(0)?;
        let mut acc = f.zero_like();
        let mut f_pows = vec![f.one_like()];
        for ((a, b), c) in &self.terms {
            while f_pows.len() <= *b as usize {
                let next = f_pows.last().expect("nonempty").mul(f)?;
                f_pows.push(next);
            }
            let term = t.pow(*a)?.mul(&f_pows[*b as usize])?.scale(c)?;
            acc = acc.add(&term)?;
        }
        Ok(acc)
    }
}

impl fmt::Display for PolyInTF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|((a, b), c)| {
                let mut mono = Vec::new();
                if *a > 0 {
                    mono.push(if *a == 1 { "T".to_string() } else { format!("T^{a}") });
                }
                if *b > 0 {
                    mono.push(if *b == 1 { "F".to_string() } else { format!("F^{b}") });
                }
                let cs = c.to_string();
                match (mono.is_empty(), c.is_one()) {
                    (true, _) => cs,
                    (false, true) => mono.join("*"),
                    (false, false) => format!("{cs}*{}", mono.join("*")),
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}
