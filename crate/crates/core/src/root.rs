//! p-th roots of elements close to 1 by the additive correction iteration
//!
//! ```text
//! g_1 = (f - 1)/p,   h_m = (1 + g_1 + ... + g_m)^p - f,   g_{m+1} = -h_m/p
//! ```
//!
//! together with per-step certificates, recentring at a known root, and
//! compatible towers of iterated roots.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::Error;
use crate::field::Bounded;
use crate::lognorm::LogNorm;
use crate::ring::NormedRing;

/// How the iteration represents intermediate values.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "mode")]
pub enum Arithmetic {
    /// Exact ring arithmetic. Sizes grow geometrically with the step count.
    Exact,
    /// Every iterate is kept modulo `q^N`, where `q^-N` sits `guard` digits
    /// below the stopping tolerance.
    Capped { guard: u32 },
}

#[derive(Clone, Debug)]
pub struct RootOptions {
    pub max_steps: usize,
    /// Stop once `|h_m| <= tol`; defaults to `|g_1|^40`.
    pub tol: Option<LogNorm>,
    pub arithmetic: Arithmetic,
}

impl Default for RootOptions {
    fn default() -> Self {
        RootOptions { max_steps: 64, tol: None, arithmetic: Arithmetic::Capped { guard: 8 } }
    }
}

#[derive(Clone, Debug)]
pub struct RootStep<R> {
    pub g: R,
    pub h: R,
    pub norm_g: LogNorm,
    /// `|h_m|`, or an upper bound when `h_m` vanished to working precision.
    pub norm_h: LogNorm,
    pub h_below_precision: bool,
    /// `(1 + g_1 + ... + g_m)^p = f + h_m` on recomputation.
    pub identity_ok: bool,
    /// `|g_m| <= |g_1|^m`.
    pub contraction_ok: bool,
    /// `|h_m| <= |g_1|^(m+1)`.
    pub residual_ok: bool,
}

#[derive(Clone, Debug)]
pub struct RootTrace<R> {
    pub p: u64,
    pub target: R,
    pub steps: Vec<RootStep<R>>,
    pub result: R,
    /// `|g_1| = |f - 1|`.
    pub g1_matches: bool,
    /// `|result - 1| <= |f - 1|`.
    pub near_one: bool,
    /// Absolute precision of the iteration, `None` for exact arithmetic.
    pub working_precision: Option<i64>,
    /// Significant digits kept by the iteration's copy of the field.
    pub working_cap: u32,
    pub certified: bool,
}

#[derive(Debug, thiserror::Error)]
pub enum RootError<R: std::fmt::Debug> {
    #[error(transparent)]
    Ring(#[from] Error),
    #[error("iteration did not reach the tolerance in {} steps", .0.steps.len())]
    MaxStepsExceeded(Box<RootTrace<R>>),
}

impl<R: std::fmt::Debug> RootError<R> {
    pub fn into_error(self) -> Error {
        match self {
            RootError::Ring(e) => e,
            RootError::MaxStepsExceeded(t) => {
                Error::PreconditionFailed(format!("no convergence after {} steps", t.steps.len()))
            }
        }
    }
}

type RootResult<T, R> = std::result::Result<T, RootError<R>>;

fn capper<R: NormedRing>(n: Option<i64>) -> impl Fn(R) -> crate::Result<R> {
    move |x: R| match n {
        Some(n) if !x.is_zero() => x.with_working_precision(n),
        _ => Ok(x),
    }
}

fn trivial_trace<R: NormedRing>(f: &R, p: u64) -> RootTrace<R> {
    let one = f.one_like();
    RootTrace {
        p,
        target: f.clone(),
        steps: vec![RootStep {
            g: f.zero_like(),
            h: f.zero_like(),
            norm_g: LogNorm::Zero,
            norm_h: LogNorm::Zero,
            h_below_precision: false,
            identity_ok: true,
            contraction_ok: true,
            residual_ok: true,
        }],
        result: one,
        g1_matches: true,
        near_one: true,
        working_precision: None,
        working_cap: f.precision_cap(),
        certified: true,
    }
}

/// The p-th root of `f` with `|f - 1| < 1` that lies in the open unit disc around 1.
pub fn pth_root_near_one<R: NormedRing>(f: &R, p: u64, opts: &RootOptions) -> RootResult<(R, RootTrace<R>), R> {
    if !f.unit_prime(p) {
        return Err(Error::PreconditionFailed(format!("|{p}| != 1 in this ring")).into());
    }
    let one = f.one_like();
    let d = match f.ring_sub(&one)? {
        Bounded::Negligible(_) => return Ok((one, trivial_trace(f, p))),
        Bounded::Value(d) if d.is_zero() => return Ok((one, trivial_trace(f, p))),
        Bounded::Value(d) => d,
    };
    let dn = d.norm_bound()?;
    if !f.norm_lt(&dn, &LogNorm::one())? {
        return Err(Error::PreconditionFailed(format!("|f - 1| = {dn} is not below 1")).into());
    }
    let g1 = d.div_int(p as i64)?;
    let a = g1.norm_bound()?;
    let tol = match &opts.tol {
        Some(t) => t.clone(),
        None => a.powi(40)?,
    };
    let working = match opts.arithmetic {
        Arithmetic::Exact => None,
        Arithmetic::Capped { guard } => Some(f.base_precision(&tol)? + guard as i64),
    };
    let orig_cap = f.precision_cap();
    let working_cap = match working {
        Some(n) => orig_cap.max(u32::try_from(n.max(0)).unwrap_or(u32::MAX).saturating_add(8)),
        None => orig_cap,
    };
    let cap = capper::<R>(working);
    let target = cap(f.with_precision_cap(working_cap)?)?;
    let mut g = cap(g1.with_precision_cap(working_cap)?)?;
    let one = one.with_precision_cap(working_cap)?;
    let mut partial = one.ring_add(&g)?;
    let mut steps = Vec::new();
    let mut a_pow = a.clone();
    let mut done = false;
    for _ in 0..opts.max_steps {
        let (h, norm_h, below) = match cap(partial.ring_pow(p as u32)?)?.ring_sub(&target)? {
            Bounded::Value(h) => {
                let n = h.norm_bound()?;
                (h, n, false)
            }
            Bounded::Negligible(b) => (target.zero_like(), b, true),
        };
        let norm_g = g.norm_bound()?;
        let next_pow = a_pow.mul(&a);
        steps.push(RootStep {
            g: g.clone(),
            h: h.clone(),
            contraction_ok: f.norm_le(&norm_g, &a_pow)?,
            residual_ok: f.norm_le(&norm_h, &next_pow)?,
            norm_g,
            norm_h: norm_h.clone(),
            h_below_precision: below,
            identity_ok: false,
        });
        a_pow = next_pow;
        if h.is_zero() || f.norm_le(&norm_h, &tol)? {
            done = true;
            break;
        }
        g = cap(h.div_int(p as i64)?.ring_neg())?;
        partial = partial.ring_add(&g)?;
    }
    let capped = partial.with_precision_cap(orig_cap)?;
    let result = f.snap_exact_root(&capped, p).unwrap_or(capped);
    let mut trace = RootTrace {
        p,
        target: f.clone(),
        steps,
        result: result.clone(),
        g1_matches: false,
        near_one: false,
        working_precision: working,
        working_cap,
        certified: false,
    };
    certify(&mut trace, &dn)?;
    if !done {
        return Err(RootError::MaxStepsExceeded(Box::new(trace)));
    }
    Ok((result, trace))
}

/// Recompute every step identity and the global conditions from the stored data.
fn certify<R: NormedRing>(trace: &mut RootTrace<R>, f_minus_one: &LogNorm) -> crate::Result<()> {
    let f = &trace.target;
    let cap = capper::<R>(trace.working_precision);
    let target = cap(f.with_precision_cap(trace.working_cap)?)?;
    let mut partial = target.one_like();
    for st in trace.steps.iter_mut() {
        partial = partial.ring_add(&st.g)?;
        let lhs = cap(partial.ring_pow(trace.p as u32)?)?;
        let rhs = target.ring_add(&st.h)?;
        st.identity_ok = lhs.agrees(&rhs)?;
    }
    if let Some(first) = trace.steps.first() {
        trace.g1_matches = first.g.is_zero() || f.compare_norms(&first.norm_g, f_minus_one)?.is_eq();
    }
    trace.near_one = match trace.result.with_precision_cap(trace.working_cap)?.ring_sub(&target.one_like())? {
        Bounded::Negligible(_) => true,
        Bounded::Value(d) => f.norm_le(&d.norm_bound()?, f_minus_one)?,
    };
    trace.certified = trace.g1_matches
        && trace.near_one
        && trace.steps.iter().all(|s| s.identity_ok && s.contraction_ok && s.residual_ok);
    Ok(())
}

/// Re-run the certificate checks of an existing trace.
pub fn recheck_trace<R: NormedRing>(trace: &RootTrace<R>) -> crate::Result<bool> {
    let mut t = trace.clone();
    let dn = match t.target.ring_sub(&t.target.one_like())? {
        Bounded::Negligible(b) => b,
        Bounded::Value(d) => d.norm_bound()?,
    };
    let a = match t.steps.first() {
        Some(s) => s.norm_g.clone(),
        None => return Ok(false),
    };
    let mut a_pow = a.clone();
    for s in t.steps.iter_mut() {
        let next = a_pow.mul(&a);
        s.contraction_ok = s.g.is_zero() || t.target.norm_le(&s.norm_g, &a_pow)?;
        s.residual_ok = (s.h.is_zero() && !s.h_below_precision) || t.target.norm_le(&s.norm_h, &next)?;
        a_pow = next;
    }
    certify(&mut t, &dn)?;
    Ok(t.certified)
}

#[derive(Clone, Debug)]
pub struct NearRoot<R> {
    pub root: R,
    pub trace: RootTrace<R>,
    /// `|root - g_root| < |root|`.
    pub separated: bool,
}

/// The p-th root of `f` near a unit `g` whose p-th root `g_root` is known:
/// `g_root * (g^-1 f)^(1/p)`.
pub fn pth_root_near<R: NormedRing>(
    f: &R,
    g: &R,
    g_root: &R,
    p: u64,
    opts: &RootOptions,
) -> RootResult<NearRoot<R>, R> {
    if !g_root.ring_pow(p as u32)?.agrees(g)? {
        return Err(Error::PreconditionFailed("g_root^p differs from g".into()).into());
    }
    let fnorm = f.norm_bound()?;
    if let Bounded::Value(d) = f.ring_sub(g)? {
        if !d.is_zero() && !f.norm_lt(&d.norm_bound()?, &fnorm)? {
            return Err(Error::PreconditionFailed("|f - g| is not below |f|".into()).into());
        }
    }
    let u = g.inverse()?.ring_mul(f)?;
    let (r, trace) = pth_root_near_one(&u, p, opts)?;
    let root = g_root.ring_mul(&r)?;
    let root = f.snap_exact_root(&root, p).unwrap_or(root);
    let separated = match root.ring_sub(g_root)? {
        Bounded::Negligible(_) => true,
        Bounded::Value(d) => d.is_zero() || f.norm_lt(&d.norm_bound()?, &root.norm_bound()?)?,
    };
    Ok(NearRoot { root, trace, separated })
}

/// `[f, f^(1/p), ..., f^(1/p^E)]`.
#[derive(Clone, Debug)]
pub struct RootTower<R> {
    pub p: u64,
    pub elements: Vec<R>,
}

impl<R> RootTower<R> {
    pub fn depth(&self) -> usize {
        self.elements.len().saturating_sub(1)
    }
}

pub fn build_tower<R: NormedRing>(f: &R, p: u64, depth: usize, opts: &RootOptions) -> crate::Result<RootTower<R>> {
    let mut elements = vec![f.clone()];
    for e in 1..=depth {
        let prev = elements.last().expect("nonempty");
        let obstruction = |err: Error| Error::TowerObstruction { depth: e, reason: err.to_string() };
        let (g, g_root) = prev.root_seed(p).map_err(obstruction)?;
        let near = pth_root_near(prev, &g, &g_root, p, opts).map_err(|err| obstruction(err.into_error()))?;
        elements.push(near.root);
    }
    Ok(RootTower { p, elements })
}

/// Recompute `(f^(1/p^(e+1)))^p = f^(1/p^e)` for every level.
pub fn verify_tower<R: NormedRing>(t: &RootTower<R>) -> bool {
    t.elements.windows(2).all(|w| {
        w[1].ring_pow(t.p as u32).and_then(|x| x.agrees(&w[0])).unwrap_or(false)
    })
}

/// The base of a tower has nonzero norm and an inverse `f^-1` with `f f^-1 = 1`.
pub fn tower_unit_witness<R: NormedRing>(t: &RootTower<R>) -> crate::Result<bool> {
    let f = &t.elements[0];
    if f.norm_bound()?.is_zero() {
        return Ok(false);
    }
    let inv = f.inverse()?;
    f.ring_mul(&inv)?.agrees(&f.one_like())
}

impl<R: std::fmt::Display> RootTrace<R> {
    pub fn to_json(&self) -> Value {
        let steps: Vec<Value> = self
            .steps
            .iter()
            .enumerate()
            .map(|(i, s)| {
                json!({
                    "m": i + 1,
                    "g": s.g.to_string(),
                    "h": s.h.to_string(),
                    "norm_g": s.norm_g,
                    "norm_h": s.norm_h,
                    "h_below_precision": s.h_below_precision,
                    "identity": s.identity_ok,
                    "contraction": s.contraction_ok,
                    "residual": s.residual_ok,
                })
            })
            .collect();
        json!({
            "prime": self.p,
            "target": self.target.to_string(),
            "working_precision": self.working_precision,
            "steps": steps,
            "result": self.result.to_string(),
            "g1_matches": self.g1_matches,
            "near_one": self.near_one,
            "certified": self.certified,
        })
    }
}

impl<R: std::fmt::Display> RootTower<R> {
    pub fn to_json(&self) -> Value {
        json!({
            "prime": self.p,
            "depth": self.depth(),
            "elements": self.elements.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{FieldSpec, Scalar};
    use num_rational::BigRational;
    use std::sync::Arc;

    fn q3() -> Arc<FieldSpec> {
        FieldSpec::padic(3, 40).unwrap()
    }

    fn rq(s: &Arc<FieldSpec>, n: i64, d: i64) -> Scalar {
        Scalar::from_rational(s, &BigRational::new(n.into(), d.into())).unwrap()
    }

    #[test]
    fn exact_steps_for_four() {
        let s = q3();
        let opts = RootOptions {
            max_steps: 2,
            tol: Some(LogNorm::from_base_int(3)),
            arithmetic: Arithmetic::Exact,
        };
        let (root, trace) = pth_root_near_one(&Scalar::from_int(&s, 4), 2, &opts).unwrap();
        assert_eq!(trace.steps[0].g, rq(&s, 3, 2));
        assert_eq!(trace.steps[0].h, rq(&s, 9, 4));
        assert_eq!(trace.steps[0].norm_h, LogNorm::from_base_int(2));
        assert_eq!(trace.steps[1].g, rq(&s, -9, 8));
        assert_eq!(trace.steps[1].h, rq(&s, -135, 64));
        assert_eq!(trace.steps[1].norm_h, LogNorm::from_base_int(3));
        assert_eq!(root, rq(&s, 11, 8));
        assert!(trace.certified);
    }

    #[test]
    fn capped_limit_is_minus_two() {
        let s = q3();
        let (root, trace) = pth_root_near_one(&Scalar::from_int(&s, 4), 2, &RootOptions::default()).unwrap();
        assert_eq!(root, Scalar::from_int(&s, -2));
        assert!(trace.certified);
        assert!(recheck_trace(&trace).unwrap());
        let (root, _) = pth_root_near_one(&Scalar::from_int(&s, 25), 2, &RootOptions::default()).unwrap();
        assert_eq!(root, Scalar::from_int(&s, -5));
    }

    #[test]
    fn trivial_and_rejected_inputs() {
        let s = q3();
        let (root, trace) = pth_root_near_one(&Scalar::one(&s), 2, &RootOptions::default()).unwrap();
        assert!(root.is_one());
        assert_eq!(trace.steps.len(), 1);
        assert!(trace.steps[0].g.is_zero());
        let bad = pth_root_near_one(&Scalar::from_int(&s, 2), 2, &RootOptions::default());
        assert!(matches!(bad, Err(RootError::Ring(Error::PreconditionFailed(_)))));
        let bad = pth_root_near_one(&Scalar::from_int(&s, 4), 3, &RootOptions::default());
        assert!(matches!(bad, Err(RootError::Ring(Error::PreconditionFailed(_)))));
    }

    #[test]
    fn too_few_steps_reports_trace() {
        let s = q3();
        let opts = RootOptions { max_steps: 3, ..Default::default() };
        match pth_root_near_one(&Scalar::from_int(&s, 4), 2, &opts) {
            Err(RootError::MaxStepsExceeded(t)) => assert_eq!(t.steps.len(), 3),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn recentred_root_of_thirteen() {
        let s = q3();
        let f = Scalar::from_int(&s, 13);
        let near = pth_root_near(&f, &Scalar::from_int(&s, 4), &Scalar::from_int(&s, -2), 2, &RootOptions::default())
            .unwrap();
        assert!(near.separated);
        assert!(near.root.pow(2).unwrap().agrees_with(&f));
        let same = pth_root_near(&f, &f, &near.root, 2, &RootOptions::default()).unwrap();
        assert!(same.root.agrees_with(&near.root));
    }

    #[test]
    fn series_root_near_one() {
        use crate::lognorm::{RadiusContext, RadiusDecl};
        use crate::series::{SeriesKind, TateSeries};
        let s = FieldSpec::padic(3, 20).unwrap();
        let ctx = Arc::new(RadiusContext::new(3, vec![RadiusDecl::default_irrational("r1")]).unwrap());
        let f = TateSeries::parse_univariate(&s, &ctx, "r1", SeriesKind::Power, "1 + 3*T").unwrap();
        let opts = RootOptions { tol: Some(LogNorm::from_base_int(12)), ..Default::default() };
        let (root, trace) = pth_root_near_one(&f, 2, &opts).unwrap();
        assert!(trace.certified, "{:?}", trace.steps.iter().map(|s| (s.identity_ok, s.contraction_ok, s.residual_ok)).collect::<Vec<_>>());
        let err = root.mul(&root).unwrap().sub(&f).unwrap().norm_bound().unwrap();
        assert!(ctx.le(&err, &LogNorm::from_base_int(12)).unwrap());
    }

    #[test]
    fn towers() {
        let s = q3();
        let opts = RootOptions::default();
        let t = build_tower(&Scalar::from_int(&s, 4), 2, 2, &opts).unwrap();
        assert_eq!(t.elements[1], Scalar::from_int(&s, -2));
        let x = &t.elements[2];
        assert!(x.pow(2).unwrap().agrees_with(&Scalar::from_int(&s, -2)));
        assert!(x.sub(&Scalar::from_int(&s, 4)).unwrap().valuation().unwrap() >= 2);
        assert!(verify_tower(&t));
        assert!(tower_unit_witness(&t).unwrap());

        let ones = build_tower(&Scalar::one(&s), 2, 3, &opts).unwrap();
        assert!(ones.elements.iter().all(|x| x.is_one()));

        let err = build_tower(&Scalar::from_int(&s, 3), 2, 1, &opts).unwrap_err();
        assert!(matches!(err, Error::TowerObstruction { depth: 1, .. }));

        let bad = RootTower { p: 2, elements: vec![Scalar::from_int(&s, 4), rq(&s, 21, 10)] };
        assert!(!verify_tower(&bad));
    }
}
