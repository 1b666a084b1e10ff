//! Elements of `Q_q`: exact rationals, or `q^v * u` with the unit `u` known
//! modulo `q^prec`.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::laurent::Outcome;

#[derive(Clone, Debug, PartialEq)]
pub enum Padic {
    Exact(BigRational),
    Capped {
        val: i64,
        /// Representative in `[1, q^prec)`, prime to `q`.
        unit: BigInt,
        prec: u32,
    },
}

pub fn pow_q(q: u64, e: u32) -> BigInt {
    num_traits::pow(BigInt::from(q), e as usize)
}

/// `(v_q(n), n / q^{v_q(n)})` for nonzero `n`.
pub fn split_int(n: &BigInt, q: u64) -> (i64, BigInt) {
    let qb = BigInt::from(q);
    let mut v = 0;
    let mut m = n.clone();
    loop {
        let (d, r) = m.div_rem(&qb);
        if !r.is_zero() {
            break;
        }
        m = d;
        v += 1;
    }
    (v, m)
}

pub fn valuation_rat(x: &BigRational, q: u64) -> Option<i64> {
    if x.is_zero() {
        return None;
    }
    let (a, _) = split_int(x.numer(), q);
    let (b, _) = split_int(x.denom(), q);
    Some(a - b)
}

pub fn inv_mod(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let g = a.extended_gcd(m);
    if !g.gcd.is_one() {
        return None;
    }
    Some(g.x.mod_floor(m))
}

/// Valuation and unit residue of a nonzero rational modulo `q^prec`.
pub fn rat_to_capped(x: &BigRational, q: u64, prec: u32) -> (i64, BigInt) {
    let (a, nu) = split_int(x.numer(), q);
    let (b, du) = split_int(x.denom(), q);
    let m = pow_q(q, prec);
    let di = inv_mod(&du, &m).expect("denominator unit is prime to q");
    (a - b, (nu * di).mod_floor(&m))
}

impl Padic {
    pub fn is_zero(&self) -> bool {
        matches!(self, Padic::Exact(x) if x.is_zero())
    }

    pub fn valuation(&self, q: u64) -> Option<i64> {
        match self {
            Padic::Exact(x) => valuation_rat(x, q),
            Padic::Capped { val, .. } => Some(*val),
        }
    }

    pub fn abs_prec(&self) -> Option<i64> {
        match self {
            Padic::Exact(_) => None,
            Padic::Capped { val, prec, .. } => Some(val + *prec as i64),
        }
    }

    /// Unit residue modulo `q^n` for a nonzero element (`n` at most the known precision).
    fn unit_mod(&self, q: u64, n: u32) -> BigInt {
        match self {
            Padic::Exact(x) => rat_to_capped(x, q, n).1,
            Padic::Capped { unit, .. } => unit.mod_floor(&pow_q(q, n)),
        }
    }

    /// Forget digits at or beyond `q^abs`, keeping at most `cap` significant digits.
    pub fn truncate_abs(&self, q: u64, abs: i64, cap: u32) -> Outcome<Padic> {
        let Some(v) = self.valuation(q) else {
            return Outcome::Negligible(abs);
        };
        let abs = self.abs_prec().map_or(abs, |a| a.min(abs));
        if abs <= v {
            return Outcome::Negligible(abs);
        }
        let prec = ((abs - v) as u32).min(cap);
        Outcome::Value(Padic::Capped { val: v, unit: self.unit_mod(q, prec), prec })
    }

    pub fn add(&self, o: &Padic, q: u64, cap: u32) -> Outcome<Padic> {
        if let (Padic::Exact(a), Padic::Exact(b)) = (self, o) {
            return Outcome::Value(Padic::Exact(a + b));
        }
        if self.is_zero() {
            return o.truncate_abs(q, i64::MAX, cap);
        }
        if o.is_zero() {
            return self.truncate_abs(q, i64::MAX, cap);
        }
        let abs = match (self.abs_prec(), o.abs_prec()) {
            (Some(a), Some(b)) => a.min(b),
            (a, b) => a.or(b).expect("one operand is capped"),
        };
        let vx = self.valuation(q).unwrap();
        let vy = o.valuation(q).unwrap();
        let v0 = vx.min(vy);
        if abs <= v0 {
            return Outcome::Negligible(abs);
        }
        let width = (abs - v0) as u32;
        let m = pow_q(q, width);
        let mut s = BigInt::zero();
        for (x, vx) in [(self, vx), (o, vy)] {
            if vx < abs {
                let shift = (vx - v0) as u32;
                s += x.unit_mod(q, width - shift) * pow_q(q, shift);
            }
        }
        let s = s.mod_floor(&m);
        if s.is_zero() {
            return Outcome::Negligible(abs);
        }
        let (w, u) = split_int(&s, q);
        let val = v0 + w;
        let prec = ((abs - val) as u32).min(cap);
        Outcome::Value(Padic::Capped { val, unit: u.mod_floor(&pow_q(q, prec)), prec })
    }

    pub fn neg(&self, q: u64) -> Padic {
        match self {
            Padic::Exact(x) => Padic::Exact(-x),
            Padic::Capped { val, unit, prec } => Padic::Capped {
                val: *val,
                unit: (-unit).mod_floor(&pow_q(q, *prec)),
                prec: *prec,
            },
        }
    }

    pub fn mul(&self, o: &Padic, q: u64, cap: u32) -> Padic {
        if let (Padic::Exact(a), Padic::Exact(b)) = (self, o) {
            return Padic::Exact(a * b);
        }
        if self.is_zero() || o.is_zero() {
            return Padic::Exact(BigRational::zero());
        }
        let prec = match (self, o) {
            (Padic::Capped { prec: a, .. }, Padic::Capped { prec: b, .. }) => *a.min(b),
            (Padic::Capped { prec, .. }, _) | (_, Padic::Capped { prec, .. }) => *prec,
            _ => unreachable!(),
        }
        .min(cap);
        let m = pow_q(q, prec);
        Padic::Capped {
            val: self.valuation(q).unwrap() + o.valuation(q).unwrap(),
            unit: (self.unit_mod(q, prec) * o.unit_mod(q, prec)).mod_floor(&m),
            prec,
        }
    }

    pub fn inv(&self, q: u64) -> Option<Padic> {
        match self {
            Padic::Exact(x) if x.is_zero() => None,
            Padic::Exact(x) => Some(Padic::Exact(x.recip())),
            Padic::Capped { val, unit, prec } => Some(Padic::Capped {
                val: -val,
                unit: inv_mod(unit, &pow_q(q, *prec))?,
                prec: *prec,
            }),
        }
    }

    /// Balanced integer representative of a capped unit, for display.
    pub fn signed_unit(unit: &BigInt, q: u64, prec: u32) -> BigInt {
        let m = pow_q(q, prec);
        if unit * 2 > m {
            unit - m
        } else {
            unit.clone()
        }
    }

    pub fn residue(&self, q: u64) -> Option<u64> {
        if self.is_zero() {
            return None;
        }
        let u = self.unit_mod(q, 1);
        let (sign, digits) = u.to_u64_digits();
        debug_assert!(sign != Sign::Minus);
        Some(digits.first().copied().unwrap_or(0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn capped_addition_tracks_valuation() {
        let a = Padic::Exact(r(3, 1)).truncate_abs(3, 10, 40);
        let Outcome::Value(a) = a else { panic!() };
        let s = a.add(&Padic::Exact(r(6, 1)), 3, 40);
        let Outcome::Value(Padic::Capped { val, unit, prec }) = s else { panic!("{s:?}") };
        assert_eq!(val, 2);
        assert_eq!(unit, BigInt::one());
        assert_eq!(prec, 8);
    }

    #[test]
    fn cancellation_below_precision() {
        let Outcome::Value(a) = Padic::Exact(r(1, 1)).truncate_abs(3, 5, 40) else { panic!() };
        let s = a.add(&Padic::Exact(r(-1, 1)), 3, 40);
        assert_eq!(s, Outcome::Negligible(5));
    }

    #[test]
    fn capped_inverse() {
        let Outcome::Value(a) = Padic::Exact(r(2, 1)).truncate_abs(3, 20, 40) else { panic!() };
        let inv = a.inv(3).unwrap();
        let prod = a.mul(&inv, 3, 40);
        let Padic::Capped { val, unit, .. } = prod else { panic!() };
        assert_eq!((val, unit), (0, BigInt::one()));
    }
}
