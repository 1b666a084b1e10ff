//! Bounded-degree certificates that a power series `f` satisfies no
//! polynomial relation `h_0 f^n + h_1 f^{n-1} + ... + h_n = 0` with
//! `h_j in k[T]`, `deg h_j <= d`.
//!
//! The unknown coefficients of the `h_j` give one column each and every
//! power `T^e` with `e <= n deg(f) + d` gives a row. All of these rows only
//! involve stored coefficients of `f` below its tail, so full column rank
//! rules out every relation of the given shape.

use std::fmt::Display;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde_json::{json, Value};

use super::{Certificate, CertificateKind, Verdict};
use crate::error::{Error, Result};
use crate::field::PrimeConst;
use crate::linalg::{kernel, rref, LinField, PrimeField, Rationals};
use crate::series::{SeriesKind, TateSeries};

/// Rank over `F_M` bounds the rank over `Q` from below.
const SHORTCUT_PRIME: u64 = (1 << 61) - 1;

enum Coefficients {
    Rational(Vec<BigRational>),
    Modular(u64, Vec<u64>),
}

fn dense_coefficients(f: &TateSeries, deg: usize) -> Result<Coefficients> {
    let p = f.spec().characteristic();
    let mut q = vec![BigRational::zero(); deg + 1];
    let mut m = vec![0u64; deg + 1];
    for (e, c) in f.terms() {
        let i = e[0] as usize;
        match c.prime_const() {
            Some(PrimeConst::Rational(x)) if p == 0 => q[i] = x,
            Some(PrimeConst::Modular(x)) if p != 0 => m[i] = x,
            _ => {
                return Err(Error::PreconditionFailed(format!(
                    "coefficient {c} of T^{i} is not in the prime field"
                )))
            }
        }
    }
    Ok(if p == 0 { Coefficients::Rational(q) } else { Coefficients::Modular(p, m) })
}

fn poly_mul<F: LinField>(fl: &F, a: &[F::E], b: &[F::E]) -> Vec<F::E> {
    let mut out = vec![fl.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if fl.is_zero(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = fl.add(&out[i + j], &fl.mul(x, y));
        }
    }
    out
}

/// `pows[k]` = dense coefficients of `f^k`.
fn powers<F: LinField>(fl: &F, f: &[F::E], n: usize) -> Vec<Vec<F::E>> {
    let mut pows = vec![vec![fl.one()]];
    for _ in 0..n {
        let next = poly_mul(fl, pows.last().expect("nonempty"), f);
        pows.push(next);
    }
    pows
}

/// Rows of the system for relations of degree `n` in `f` and `d` in `T`.
fn system<F: LinField>(fl: &F, pows: &[Vec<F::E>], n: usize, d: usize, deg_f: usize) -> (Vec<Vec<F::E>>, usize) {
    let ncols = (n + 1) * (d + 1);
    let mut rows = vec![vec![fl.zero(); ncols]; n * deg_f + d + 1];
    for j in 0..=n {
        for k in 0..=d {
            for (i, c) in pows[n - j].iter().enumerate() {
                if !fl.is_zero(c) {
                    rows[i + k][j * (d + 1) + k] = c.clone();
                }
            }
        }
    }
    (rows, ncols)
}

fn render_relation<E: Display>(v: &[E], n: usize, d: usize, is_zero: impl Fn(&E) -> bool) -> String {
    let mut parts = Vec::new();
    for j in 0..=n {
        let mut h = Vec::new();
        for k in 0..=d {
            let c = &v[j * (d + 1) + k];
            if is_zero(c) {
                continue;
            }
            let cs = c.to_string();
            h.push(match (k, cs.as_str()) {
                (0, _) => cs,
                (_, "1") => mono("T", k),
                (_, "-1") => format!("-{}", mono("T", k)),
                _ => format!("{cs}*{}", mono("T", k)),
            });
        }
        if h.is_empty() {
            continue;
        }
        let x = n - j;
        let hs = h.join(" + ");
        parts.push(match (x, h.len(), hs.as_str()) {
            (0, _, _) => hs,
            (_, 1, "1") => mono("X", x),
            (_, 1, "-1") => format!("-{}", mono("X", x)),
            (_, 1, _) => format!("{hs}*{}", mono("X", x)),
            _ => format!("({hs})*{}", mono("X", x)),
        });
    }
    parts.join(" + ").replace("+ -", "- ")
}

fn mono(var: &str, e: usize) -> String {
    if e == 1 {
        var.to_string()
    } else {
        format!("{var}^{e}")
    }
}

/// A kernel vector scaled so its first nonzero entry is 1.
fn normalized<F: LinField>(fl: &F, mut v: Vec<F::E>) -> Vec<F::E> {
    if let Some(lead) = v.iter().find(|x| !fl.is_zero(x)).cloned() {
        let inv = fl.inv(&lead);
        for x in v.iter_mut() {
            *x = fl.mul(x, &inv);
        }
    }
    v
}

fn to_shortcut(x: &BigRational) -> Option<u64> {
    let m = BigInt::from(SHORTCUT_PRIME);
    let num = x.numer().mod_floor(&m).to_u64()?;
    let den = x.denom().mod_floor(&m).to_u64()?;
    (den != 0).then(|| PrimeField(SHORTCUT_PRIME).mul(&num, &PrimeField(SHORTCUT_PRIME).inv(&den)))
}

struct Outcome {
    rank: usize,
    rank_field: String,
    relation: Option<String>,
}

fn solve_modular(p: u64, f: &[u64], n: usize, d: usize, deg_f: usize) -> Outcome {
    let fl = PrimeField(p);
    let pows = powers(&fl, f, n);
    let (rows, ncols) = system(&fl, &pows, n, d, deg_f);
    let e = rref(&fl, &rows, ncols);
    let relation = kernel(&fl, &e)
        .into_iter()
        .next()
        .map(|v| render_relation(&normalized(&fl, v), n, d, |x| *x == 0));
    Outcome { rank: e.rank(), rank_field: format!("F_{p}"), relation }
}

fn solve_rational(f: &[BigRational], n: usize, d: usize, deg_f: usize) -> Outcome {
    let ncols = (n + 1) * (d + 1);
    if let Some(fm) = f.iter().map(to_shortcut).collect::<Option<Vec<u64>>>() {
        let fl = PrimeField(SHORTCUT_PRIME);
        let pows = powers(&fl, &fm, n);
        let (rows, _) = system(&fl, &pows, n, d, deg_f);
        let rank = rref(&fl, &rows, ncols).rank();
        if rank == ncols {
            return Outcome { rank, rank_field: format!("F_{SHORTCUT_PRIME}"), relation: None };
        }
    }
    let pows = powers(&Rationals, f, n);
    let (rows, _) = system(&Rationals, &pows, n, d, deg_f);
    let e = rref(&Rationals, &rows, ncols);
    let relation = kernel(&Rationals, &e).into_iter().next().map(|v| {
        let v = normalized(&Rationals, v);
        render_relation(&v, n, d, |x| x.is_zero())
    });
    Outcome { rank: e.rank(), rank_field: "Q".into(), relation }
}

/// Checks every `n <= n_max` with coefficient degrees `<= d_max`.
///
/// `f` must be a one-variable power series whose coefficients lie in the
/// prime field, and when it has a tail the rows must stay below it:
/// `n_max deg(f) + d_max < tail_start`.
pub fn nonintegral_certificate(f: &TateSeries, n_max: u32, d_max: u32) -> Result<Certificate> {
    if f.kind() != SeriesKind::Power || f.nvars() != 1 {
        return Err(Error::PreconditionFailed("need a power series in one variable".into()));
    }
    if n_max == 0 {
        return Err(Error::PreconditionFailed("n_max must be at least 1".into()));
    }
    if f.terms().keys().any(|e| e[0].is_negative()) {
        return Err(Error::PreconditionFailed("negative exponent in a power series".into()));
    }
    let deg_f = f.terms().keys().map(|e| e[0]).max().unwrap_or(0);
    let bound = (n_max as i64)
        .checked_mul(deg_f)
        .and_then(|x| x.checked_add(d_max as i64))
        .ok_or_else(|| Error::CapExceeded("system size overflows".into()))?;
    let exact = f.tail().is_zero();
    let tail_start = f.tail_start();
    if !exact {
        let start = tail_start
            .ok_or_else(|| Error::PreconditionFailed("the tail has no known starting degree".into()))?;
        if bound >= start {
            return Err(Error::PreconditionFailed(format!(
                "degree gap fails: {n_max}*{deg_f} + {d_max} = {bound} is not below the tail start {start}"
            )));
        }
    }
    let unknowns = (n_max as u64 + 1) * (d_max as u64 + 1);
    if unknowns.saturating_mul(bound as u64 + 1) > 50_000_000 {
        return Err(Error::CapExceeded(format!("system of {} x {unknowns} is too large", bound + 1)));
    }
    let (deg_u, d) = (deg_f as usize, d_max as usize);
    let coeffs = dense_coefficients(f, deg_u)?;

    let mut systems = Vec::new();
    let mut relation: Option<(u32, String)> = None;
    for n in 1..=n_max as usize {
        let out = match &coeffs {
            Coefficients::Rational(q) => solve_rational(q, n, d, deg_u),
            Coefficients::Modular(p, m) => solve_modular(*p, m, n, d, deg_u),
        };
        let ncols = (n + 1) * (d + 1);
        systems.push(json!({
            "n": n,
            "unknowns": ncols,
            "equations": n * deg_u + d + 1,
            "rank": out.rank,
            "rank_field": out.rank_field,
        }));
        if out.rank < ncols {
            relation = Some((n as u32, out.relation.unwrap_or_default()));
            break;
        }
    }
    let verdict = match (&relation, exact) {
        (None, _) => Verdict::NonIntegral,
        (Some(_), true) => Verdict::Integral,
        (Some(_), false) => Verdict::NotShown,
    };
    let params = json!({
        "series": f.to_json(),
        "n_max": n_max,
        "d_max": d_max,
        "degree_gap": { "degree": deg_f, "bound": bound, "tail_start": tail_start },
    });
    let witness = json!({
        "systems": systems,
        "relation": relation.as_ref().map(|(n, r)| json!({ "n": n, "relation": r })).unwrap_or(Value::Null),
    });
    Ok(Certificate { kind: CertificateKind::NonIntegral, verdict, params, witness })
}
