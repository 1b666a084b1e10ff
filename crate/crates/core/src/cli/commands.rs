//! The subcommands.

use std::path::PathBuf;
use std::sync::Arc;

use clap::{Args, ValueEnum};
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::session::SessionConfig;
use super::{norm_json, Outcome, Status};
use crate::deriv::{
    nonintegral_certificate, p_independence_certificate, pbasis_series, sparse_series, unboundedness_table,
    IndependenceBounds,
};
use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::frobenius::{
    derivative_span_witness, parts_to_json, reconstruct_series, series_decompose, termwise_tail_bound,
    verify_norm_bound, PBasis,
};
use crate::lognorm::{LogNorm, RadiusContext};
use crate::ring::NormedRing;
use crate::root::{build_tower, pth_root_near, pth_root_near_one, tower_unit_witness, verify_tower};
use crate::root::{Arithmetic, RootError, RootOptions};
use crate::series::{SeriesJson, SeriesKind, TateSeries};
use crate::square_zero::SquareZeroElem;

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KindArg {
    Power,
    Laurent,
}

impl From<KindArg> for SeriesKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Power => SeriesKind::Power,
            KindArg::Laurent => SeriesKind::Laurent,
        }
    }
}

struct Ring {
    spec: Arc<FieldSpec>,
    ctx: Arc<RadiusContext>,
    support: usize,
}

impl Ring {
    fn new(cfg: &SessionConfig, field: &str, radius: &str, precision: Option<u32>) -> Result<Self> {
        cfg.check_radius(radius)?;
        let spec = cfg.field(field, precision)?;
        let ctx = cfg.radius_context(&spec)?;
        Ok(Ring { spec, ctx, support: cfg.caps.support })
    }

    fn series(&self, radius: &str, kind: SeriesKind, src: &str) -> Result<TateSeries> {
        Ok(TateSeries::parse_univariate(&self.spec, &self.ctx, radius, kind, src)?.with_support_cap(self.support))
    }

    fn series_file(&self, path: &PathBuf) -> Result<TateSeries> {
        let text = std::fs::read_to_string(path)?;
        let j: SeriesJson = serde_json::from_str(&text).map_err(|e| Error::Parse(format!("series JSON: {e}")))?;
        Ok(TateSeries::from_json(&self.spec, &self.ctx, &j)?.with_support_cap(self.support))
    }

    fn log_q(&self, n: &LogNorm) -> Result<f64> {
        let (lo, hi) = self.ctx.log_q_bounds(n, 48)?;
        Ok(((lo + hi) / BigRational::from_integer(2.into())).to_f64().unwrap_or(f64::NAN))
    }
}

fn status(ok: bool) -> Status {
    if ok {
        Status::Pass
    } else {
        Status::Negative
    }
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaussNormArgs {
    #[arg(long, default_value = "q3")]
    pub field: String,
    #[arg(long, default_value = "r1")]
    pub radius: String,
    #[arg(long, value_enum, default_value = "power")]
    pub kind: KindArg,
    /// Polynomial in T, e.g. "3*T + T^2".
    #[arg(long, default_value = "0")]
    pub series: String,
    /// Series JSON file, instead of --series.
    #[arg(long)]
    pub input: Option<PathBuf>,
}

pub fn gauss_norm(a: &GaussNormArgs, cfg: &SessionConfig, precision: Option<u32>) -> Result<Outcome> {
    let ring = Ring::new(cfg, &a.field, &a.radius, precision)?;
    let f = match &a.input {
        Some(p) => ring.series_file(p)?,
        None => ring.series(&a.radius, a.kind.into(), &a.series)?,
    };
    let (n, exact) = f.gauss_norm()?;
    let log10 = if n.is_zero() { None } else { Some(ring.ctx.approx_log10(&n)?) };
    let summary = format!("|f| = {} ({})", if n.is_zero() { "ZERO".into() } else { n.to_string() }, f);
    Ok(Outcome {
        status: Status::Pass,
        lemma: "Gauss norm of a convergent series",
        result: json!({
            "series": f.to_json(),
            "gauss_norm": norm_json(&n),
            "determined_by_stored_terms": exact,
            "approx_log10": log10,
        }),
        summary,
    })
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralArgs {
    #[arg(long, default_value = "q3")]
    pub field: String,
    #[arg(long, default_value = "r1")]
    pub radius: String,
    /// Laurent polynomial in T, e.g. "T^-1 + 3*T".
    #[arg(long)]
    pub series: String,
    /// Largest power l in gauss_norm(f^l)^(1/l).
    #[arg(long, default_value_t = 6)]
    pub powers: u32,
}

pub fn spectral_radius(a: &SpectralArgs, cfg: &SessionConfig, precision: Option<u32>) -> Result<Outcome> {
    let ring = Ring::new(cfg, &a.field, &a.radius, precision)?;
    let f = ring.series(&a.radius, SeriesKind::Laurent, &a.series)?;
    let (rho, exact) = f.spectral_radius_laurent()?;
    let mut rows = Vec::new();
    let mut all = exact;
    for l in 1..=a.powers {
        let est = f.spectral_power_estimate(l)?;
        let eq = est == rho;
        all &= eq;
        rows.push(json!({ "l": l, "estimate": norm_json(&est), "equal": eq }));
    }
    Ok(Outcome {
        status: status(all),
        lemma: "spectral radius of a Laurent series from its coefficients",
        result: json!({ "series": f.to_json(), "spectral_radius": norm_json(&rho), "estimates": rows }),
        summary: format!("rho(f) = {rho}; powers 1..={} {}", a.powers, if all { "agree" } else { "DISAGREE" }),
    })
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PthRootArgs {
    #[arg(long, default_value = "q3")]
    pub field: String,
    #[arg(long)]
    pub prime: u64,
    /// The element whose root is taken, e.g. "4" or "13/4".
    #[arg(long)]
    pub target: String,
    /// Exact arithmetic instead of capped iterates.
    #[arg(long)]
    pub exact: bool,
    #[arg(long, default_value_t = 64)]
    pub max_steps: usize,
}

fn root_options(exact: bool, max_steps: usize) -> RootOptions {
    let mut o = RootOptions { max_steps, ..RootOptions::default() };
    if exact {
        o.arithmetic = Arithmetic::Exact;
    }
    o
}

pub fn pth_root(a: &PthRootArgs, cfg: &SessionConfig, precision: Option<u32>) -> Result<Outcome> {
    let spec = cfg.field(&a.field, precision)?;
    let f = Scalar::parse(&spec, &a.target)?;
    let opts = root_options(a.exact, a.max_steps);
    let one = Scalar::one(&spec);
    let near_one = match f.checked_sub(&one)? {
        crate::field::Bounded::Value(d) => d.valuation().map_or(true, |v| v > 0),
        crate::field::Bounded::Negligible(_) => true,
    };
    let lemma = "p-th roots by iteration";
    let run = if near_one {
        pth_root_near_one(&f, a.prime, &opts).map(|(root, trace)| (root, trace, true, Value::Null))
    } else {
        let (g, g_root) = f.root_seed(a.prime)?;
        pth_root_near(&f, &g, &g_root, a.prime, &opts).map(|n| {
            let seed = json!({ "g": g.to_string(), "g_root": g_root.to_string() });
            (n.root, n.trace, n.separated, seed)
        })
    };
    match run {
        Ok((root, trace, separated, seed)) => {
            let back = root.ring_pow(a.prime as u32)?.agrees(&f)?;
            let ok = trace.certified && separated && back;
            Ok(Outcome {
                status: status(ok),
                lemma,
                result: json!({
                    "target": f.to_string(),
                    "prime": a.prime,
                    "mode": if near_one { "near_one" } else { "recentred" },
                    "seed": seed,
                    "trace": trace.to_json(),
                    "root": root.to_string(),
                    "root_pow_matches": back,
                    "separated": separated,
                }),
                summary: format!(
                    "root of order {} of {f}: {root} after {} steps ({})",
                    a.prime,
                    trace.steps.len(),
                    if ok { "certified" } else { "NOT certified" }
                ),
            })
        }
        Err(RootError::MaxStepsExceeded(t)) => Ok(Outcome {
            status: Status::Negative,
            lemma,
            result: json!({ "target": f.to_string(), "prime": a.prime, "trace": t.to_json(), "root": Value::Null }),
            summary: format!("no convergence within {} steps", t.steps.len()),
        }),
        Err(RootError::Ring(e)) => Err(e),
    }
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TowerArgs {
    #[arg(long, default_value = "q3")]
    pub field: String,
    #[arg(long)]
    pub prime: u64,
    #[arg(long)]
    pub base: String,
    #[arg(long, default_value_t = 3)]
    pub depth: usize,
}

pub fn tower(a: &TowerArgs, cfg: &SessionConfig, precision: Option<u32>) -> Result<Outcome> {
    let spec = cfg.field(&a.field, precision)?;
    let f = Scalar::parse(&spec, &a.base)?;
    let lemma = "towers of p-power roots consist of units";
    match build_tower(&f, a.prime, a.depth, &RootOptions::default()) {
        Ok(t) => {
            let verified = verify_tower(&t);
            let unit = tower_unit_witness(&t)?;
            Ok(Outcome {
                status: status(verified && unit),
                lemma,
                result: json!({ "tower": t.to_json(), "verified": verified, "base_is_unit": unit }),
                summary: format!(
                    "tower of depth {} over {f}: {}",
                    t.depth(),
                    t.elements.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" <- ")
                ),
            })
        }
        Err(Error::TowerObstruction { depth, reason }) => Ok(Outcome {
            status: Status::Negative,
            lemma,
            result: json!({ "obstruction": { "depth": depth, "reason": reason } }),
            summary: format!("no tower over {f}: obstruction at depth {depth}: {reason}"),
        }),
        Err(e) => Err(e),
    }
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SparseArgs {
    #[arg(long, default_value = "q3")]
    pub field: String,
    #[arg(long, default_value = "r1")]
    pub radius: String,
    #[arg(long, default_value_t = 3)]
    pub terms: usize,
}

pub fn sparse(a: &SparseArgs, cfg: &SessionConfig, precision: Option<u32>) -> Result<Outcome> {
    let ring = Ring::new(cfg, &a.field, &a.radius, precision)?;
    let s = sparse_series(a.terms, &ring.spec, &ring.ctx, &a.radius)?;
    let (g, _) = s.ideal.gauss_norm()?;
    Ok(Outcome {
        status: Status::Pass,
        lemma: "lacunary series with growing exponent gaps",
        result: json!({
            "indices": s.spec.indices,
            "truncation": s.truncation.to_json(),
            "tail": { "bound": s.ideal.tail(), "start": s.ideal.tail_start() },
            "gauss_norm": norm_json(&g),
        }),
        summary: format!("f = {} + O(T^{})", s.truncation, s.ideal.tail_start().unwrap_or_default()),
    })
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NonintegralArgs {
    #[arg(long, default_value = "q3")]
    pub field: String,
    #[arg(long, default_value = "r1")]
    pub radius: String,
    /// A polynomial in T; otherwise the lacunary series is used.
    #[arg(long)]
    pub series: Option<String>,
    /// Stored terms of the lacunary series.
    #[arg(long, default_value_t = 3)]
    pub sparse_terms: usize,
    #[arg(long, default_value_t = 2)]
    pub n_max: u32,
    #[arg(long, default_value_t = 3)]
    pub d_max: u32,
}

pub fn nonintegral(a: &NonintegralArgs, cfg: &SessionConfig, precision: Option<u32>) -> Result<Outcome> {
    let ring = Ring::new(cfg, &a.field, &a.radius, precision)?;
    let f = match &a.series {
        Some(src) => ring.series(&a.radius, SeriesKind::Power, src)?,
        None => sparse_series(a.sparse_terms, &ring.spec, &ring.ctx, &a.radius)?.ideal,
    };
    let cert = nonintegral_certificate(&f, a.n_max, a.d_max)?;
    let relation = cert.witness["relation"]["relation"].as_str().map(str::to_string);
    Ok(Outcome {
        status: status(cert.holds()),
        lemma: "non-integrality over k[T] in bounded degrees",
        summary: match relation {
            None => format!("{:?}: no relation with n <= {}, deg h <= {}", cert.verdict, a.n_max, a.d_max),
            Some(r) => format!("{:?}: relation {r} = 0", cert.verdict),
        },
        result: serde_json::to_value(&cert)?,
    })
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnboundedArgs {
    #[arg(long, default_value = "q3")]
    pub field: String,
    #[arg(long, default_value = "r1")]
    pub radius: String,
    /// Stored terms of the lacunary series; rows run over n = 1..terms-1.
    #[arg(long, default_value_t = 4)]
    pub terms: usize,
    /// A power of ten, e.g. 1e6.
    #[arg(long, default_value = "1e6")]
    pub bound: String,
}

fn power_of_ten(s: &str) -> Result<u32> {
    let t = s.trim();
    let exp = if let Some((m, e)) = t.split_once(['e', 'E']) {
        if m.trim() != "1" {
            return Err(Error::Parse(format!("bound `{s}` is not a power of ten")));
        }
        e.trim_start_matches('+').parse::<u32>().ok()
    } else if t.starts_with('1') && t[1..].chars().all(|c| c == '0') {
        Some(t.len() as u32 - 1)
    } else {
        None
    };
    exp.ok_or_else(|| Error::Parse(format!("bound `{s}` is not a power of ten")))
}

pub fn unbounded(a: &UnboundedArgs, cfg: &SessionConfig, precision: Option<u32>) -> Result<Outcome> {
    let ring = Ring::new(cfg, &a.field, &a.radius, precision)?;
    if a.terms < 2 {
        return Err(Error::PreconditionFailed("need at least two terms".into()));
    }
    let k = power_of_ten(&a.bound)?;
    let t = unboundedness_table(a.terms - 1, &ring.spec, &ring.ctx, &a.radius, k)?;
    let mut lines = vec![format!("{:?} (bound 10^{k})", t.certificate.verdict)];
    for r in &t.rows {
        lines.push(format!(
            "  n={}  |g_n| = r^{}  ratio = {}^{{{:.4}}} ~ 10^{:.2}{}",
            r.n,
            r.index,
            ring.spec.q,
            ring.log_q(&r.ratio)?,
            r.ratio_log10,
            if r.exceeds_bound { "  > bound" } else { "" }
        ));
    }
    Ok(Outcome {
        status: status(t.certificate.holds()),
        lemma: "an unbounded homomorphism into a square-zero extension",
        result: json!({ "certificate": t.certificate, "integrality": t.integrality }),
        summary: lines.join("\n"),
    })
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PbasisArgs {
    #[arg(long, default_value = "rf2")]
    pub field: String,
    #[arg(long, default_value = "r1")]
    pub radius: String,
    /// Terms of the p-basis series; ignored with --series.
    #[arg(long, default_value_t = 4)]
    pub terms: usize,
    /// A polynomial in T with coefficients in F_p(u)((t)), e.g. "u1^2*T^2".
    #[arg(long)]
    pub series: Option<String>,
    #[arg(long, default_value_t = 4)]
    pub t_degree: u32,
    #[arg(long, default_value_t = 2)]
    pub coeff_degree: u32,
    /// Generators allowed to non-p-th powers, e.g. "t,u1".
    #[arg(long, value_delimiter = ',')]
    pub relation_basis: Vec<String>,
}

pub fn pbasis(a: &PbasisArgs, cfg: &SessionConfig, precision: Option<u32>) -> Result<Outcome> {
    let ring = Ring::new(cfg, &a.field, &a.radius, precision)?;
    let f = match &a.series {
        Some(src) => ring.series(&a.radius, SeriesKind::Power, src)?,
        None => pbasis_series(a.terms, &ring.spec, &ring.ctx, &a.radius)?,
    };
    let bounds = IndependenceBounds {
        t_degree: a.t_degree,
        coeff_degree: a.coeff_degree,
        relation_basis: a.relation_basis.clone(),
        max_unknowns: cfg.caps.certificate_unknowns,
    };
    let cert = p_independence_certificate(&f, &bounds)?;
    let w = &cert.witness;
    Ok(Outcome {
        status: status(cert.holds()),
        lemma: "p-independence of a series with p-basis coefficients",
        summary: format!(
            "{:?} for f = {f}: rank {} of {} unknowns{}",
            cert.verdict,
            w["rank"],
            w["unknowns"],
            w["multiplier"].as_str().map(|m| format!("; multiplier w = {m}")).unwrap_or_default()
        ),
        result: serde_json::to_value(&cert)?,
    })
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FfiniteArgs {
    #[arg(long, default_value = "f2t")]
    pub field: String,
    #[arg(long, default_value = "r1")]
    pub radius: String,
    #[arg(long, default_value = "t*T + T^2")]
    pub series: String,
    /// Series JSON file, instead of --series.
    #[arg(long)]
    pub input: Option<PathBuf>,
}

pub fn ffinite(a: &FfiniteArgs, cfg: &SessionConfig, precision: Option<u32>) -> Result<Outcome> {
    let ring = Ring::new(cfg, &a.field, &a.radius, precision)?;
    let f = match &a.input {
        Some(p) => ring.series_file(p)?,
        None => ring.series(&a.radius, SeriesKind::Power, &a.series)?,
    };
    let basis = PBasis::new(&ring.spec)?;
    let parts = series_decompose(&f, &basis)?;
    let round_trip = reconstruct_series(&parts, &basis, &f)? == f;
    let derivative = derivative_span_witness(&f, &basis)?;
    let tail = termwise_tail_bound(&f, &basis)?;
    let mut norm_checks = Vec::new();
    for c in f.terms().values() {
        norm_checks.push(verify_norm_bound(c, &basis, &LogNorm::one())?);
    }
    let norms_ok = norm_checks.iter().all(|c| c.pass);
    let ok = round_trip && derivative && tail && norms_ok;
    let mut result = parts_to_json(&parts)?;
    result["series"] = serde_json::to_value(f.to_json())?;
    result["checks"] = json!({
        "round_trip": round_trip,
        "derivative_span": derivative,
        "termwise_tail_bound": tail,
        "norm_bound_c1": norms_ok,
        "norm_ratios": norm_checks.iter().map(|c| c.ratio.clone()).collect::<Vec<_>>(),
    });
    let nonzero: Vec<String> = parts
        .iter()
        .filter(|(_, s)| !s.is_zero())
        .map(|((e, i), s)| format!("f[{e:?},{i}] = {s}"))
        .collect();
    Ok(Outcome {
        status: status(ok),
        lemma: "p-basis decomposition of series over F_q((t))",
        result,
        summary: format!("{}\nchecks: {}", nonzero.join("\n"), if ok { "all pass" } else { "FAILED" }),
    })
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SzArgs {
    #[arg(long, default_value = "q3")]
    pub field: String,
    #[arg(long, default_value = "r1")]
    pub radius: String,
    /// Dual numbers "a | b" with Laurent polynomials a, b.
    #[arg(long = "element", default_values_t = ["T | 1".to_string(), "1 + 3*T | T".to_string(), "T^-1 | 3".to_string()])]
    pub elements: Vec<String>,
}

pub fn sz_check(a: &SzArgs, cfg: &SessionConfig, precision: Option<u32>) -> Result<Outcome> {
    let ring = Ring::new(cfg, &a.field, &a.radius, precision)?;
    let xs = a
        .elements
        .iter()
        .map(|s| {
            let (l, r) = s.split_once('|').ok_or_else(|| Error::Parse(format!("`{s}` is not of the form a | b")))?;
            Ok(SquareZeroElem::dual(
                ring.series(&a.radius, SeriesKind::Laurent, l.trim())?,
                ring.series(&a.radius, SeriesKind::Laurent, r.trim())?,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    let ctx = &ring.ctx;
    let (mut assoc, mut distrib, mut submult, mut nil, mut iso) = (true, true, true, true, true);
    for x in &xs {
        let e = x.with_parts(x.a.zero_like(), x.b.clone())?;
        let sq = e.mul(&e)?;
        nil &= sq.a.is_zero() && sq.b.is_zero();
        let s = x.section(x.a.clone());
        iso &= s.norm()? == x.a.gauss_norm()?.0;
        for y in &xs {
            let xy = x.mul(y)?;
            submult &= ctx.le(&xy.norm()?, &x.norm()?.mul(&y.norm()?))?;
            for z in &xs {
                assoc &= xy.mul(z)?.agrees(&x.mul(&y.mul(z)?)?)?;
                distrib &= x.mul(&y.add(z)?)?.agrees(&xy.add(&x.mul(z)?)?)?;
            }
        }
    }
    let ok = assoc && distrib && submult && nil && iso;
    let checks = json!({
        "associativity": assoc,
        "distributivity": distrib,
        "submultiplicative_norm": submult,
        "epsilon_part_squares_to_zero": nil,
        "section_is_isometric": iso,
    });
    Ok(Outcome {
        status: status(ok),
        lemma: "square-zero extensions are seminormed rings",
        summary: format!("{} elements: {}", xs.len(), checks),
        result: json!({
            "elements": xs.iter().map(SquareZeroElem::to_json).collect::<Vec<_>>(),
            "checks": checks,
        }),
    })
}
