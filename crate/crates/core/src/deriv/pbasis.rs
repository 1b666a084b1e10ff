//! Series with distinct `p`-basis coefficients over `F_p(u_1, ..., u_N)((t))`
//! and bounded searches for relations that would make them `p`-dependent.
//!
//! A relation is a nonzero `w in F_p[t, u][T]` whose monomials in `(t, u)`
//! are `x^{p a + m}` with `m` supported on a declared set `L` of generators,
//! such that every `(t, u)`-monomial of `w f` is again of that shape. When
//! `L` is empty this says `w f` has only `p`-th power monomials in `(t, u)`.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::{Certificate, CertificateKind, Verdict};
use crate::error::{Error, Result};
use crate::field::{FieldKind, FieldSpec, Scalar};
use crate::linalg::{kernel, rref, PrimeField};
use crate::lognorm::RadiusContext;
use crate::series::{SeriesKind, TateSeries};

/// `t, u1, ..., uN`.
pub fn generator_names(nvars: usize) -> Vec<String> {
    std::iter::once("t".to_string()).chain((1..=nvars).map(|i| format!("u{i}"))).collect()
}

/// `x_0 + x_1 T + ... + x_{m-1} T^{m-1}` with `x_0 = t`, `x_i = u_i`.
pub fn pbasis_series(
    m: usize,
    field: &Arc<FieldSpec>,
    ctx: &Arc<RadiusContext>,
    radius_id: &str,
) -> Result<TateSeries> {
    if field.kind != FieldKind::RatfunLaurent {
        return Err(Error::FieldMismatch("p-basis series live over F_p(u)((t))".into()));
    }
    if m == 0 {
        return Err(Error::PreconditionFailed("need at least one term".into()));
    }
    if m > field.nvars + 1 {
        return Err(Error::PreconditionFailed(format!(
            "not enough declared variables: {m} terms need {} of u1..uN, have {}",
            m - 1,
            field.nvars
        )));
    }
    let mut f = TateSeries::zero(field, ctx, &[radius_id], SeriesKind::Power)?;
    f.set_coeff(&[0], Scalar::uniformizer(field))?;
    for i in 1..m {
        f.set_coeff(&[i as i64], Scalar::variable(field, i)?)?;
    }
    Ok(f)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndependenceBounds {
    /// Degree of `w` in `T`.
    pub t_degree: u32,
    /// Bound on `|a|` in the monomials `x^{p a + m}` of `w`.
    pub coeff_degree: u32,
    /// Generators allowed to appear to non-`p`-th powers.
    #[serde(default)]
    pub relation_basis: Vec<String>,
    #[serde(default = "default_max_unknowns")]
    pub max_unknowns: usize,
}

fn default_max_unknowns() -> usize {
    4096
}

impl Default for IndependenceBounds {
    fn default() -> Self {
        IndependenceBounds { t_degree: 4, coeff_degree: 2, relation_basis: Vec::new(), max_unknowns: default_max_unknowns() }
    }
}

type Mono = Vec<u32>;

/// The `(t, u)`-monomials of each `T`-coefficient of `f`, as `T-exp -> (mono -> c)`.
fn coefficient_monomials(f: &TateSeries) -> Result<BTreeMap<usize, BTreeMap<Mono, u64>>> {
    if !f.tail().is_zero() {
        return Err(Error::PreconditionFailed("need an exact polynomial in T".into()));
    }
    let mut out = BTreeMap::new();
    for (e, c) in f.terms() {
        let l = c
            .ratfun_laurent()
            .ok_or_else(|| Error::FieldMismatch("coefficients must lie in F_p(u)((t))".into()))?;
        let te = usize::try_from(e[0]).map_err(|_| Error::PreconditionFailed("negative T exponent".into()))?;
        if !l.is_exact() {
            return Err(Error::PreconditionFailed(format!("coefficient of T^{te} is not exact")));
        }
        let mut monos = BTreeMap::new();
        for (i, r) in l.coeffs.iter().enumerate() {
            let tdeg = u32::try_from(l.val + i as i64)
                .map_err(|_| Error::PreconditionFailed(format!("coefficient of T^{te} has a pole in t")))?;
            let poly = r
                .as_poly()
                .ok_or_else(|| Error::PreconditionFailed(format!("coefficient of T^{te} is not a polynomial")))?;
            for (ue, c) in &poly.terms {
                let mut m = vec![tdeg];
                m.extend(ue);
                monos.insert(m, *c);
            }
        }
        out.insert(te, monos);
    }
    Ok(out)
}

/// All exponent vectors of length `n` with entries summing to at most `d`.
fn bounded_exponents(n: usize, d: u32) -> Vec<Mono> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|v: Mono| {
                let used: u32 = v.iter().sum();
                (0..=d - used).map(move |k| {
                    let mut w = v.clone();
                    w.push(k);
                    w
                })
            })
            .collect();
    }
    out
}

fn allowed(m: &[u32], p: u64, basis: &[bool]) -> bool {
    m.iter().zip(basis).all(|(e, ok)| *ok || *e as u64 % p == 0)
}

fn render_mono(m: &[u32], names: &[String]) -> String {
    let parts: Vec<String> = m
        .iter()
        .zip(names)
        .filter(|(e, _)| **e > 0)
        .map(|(e, n)| if *e == 1 { n.clone() } else { format!("{n}^{e}") })
        .collect();
    parts.join("*")
}

pub fn p_independence_certificate(f: &TateSeries, bounds: &IndependenceBounds) -> Result<Certificate> {
    let spec = f.spec();
    if spec.kind != FieldKind::RatfunLaurent || f.nvars() != 1 || f.kind() != SeriesKind::Power {
        return Err(Error::FieldMismatch("need a power series in T over F_p(u)((t))".into()));
    }
    let p = spec.q;
    let names = generator_names(spec.nvars);
    let nv = names.len();
    let mut basis = vec![false; nv];
    for g in &bounds.relation_basis {
        let i = names
            .iter()
            .position(|n| n == g)
            .ok_or_else(|| Error::Config(format!("`{g}` is not one of {}", names.join(", "))))?;
        basis[i] = true;
    }
    let f_monos = coefficient_monomials(f)?;

    // unknown monomials x^{p a + m} of each T-coefficient of w
    let residues = residue_vectors(nv, p, &basis);
    let lifts = bounded_exponents(nv, bounds.coeff_degree);
    let per_t = lifts.len().saturating_mul(residues.len());
    let ncols = per_t.saturating_mul(bounds.t_degree as usize + 1);
    if ncols > bounds.max_unknowns {
        return Err(Error::CapExceeded(format!("{ncols} unknowns exceed the cap of {}", bounds.max_unknowns)));
    }
    let mut columns: Vec<(usize, Mono)> = Vec::with_capacity(ncols);
    for nu in 0..=bounds.t_degree as usize {
        for a in &lifts {
            for r in &residues {
                let m: Mono = a.iter().zip(r).map(|(x, y)| x * p as u32 + y).collect();
                columns.push((nu, m));
            }
        }
    }

    // one row per forbidden monomial T^e x^m of w f
    let mut rows: BTreeMap<(usize, Mono), Vec<u64>> = BTreeMap::new();
    for (col, (nu, wm)) in columns.iter().enumerate() {
        for (te, monos) in &f_monos {
            for (fm, c) in monos {
                let m: Mono = wm.iter().zip(fm).map(|(x, y)| x + y).collect();
                if allowed(&m, p, &basis) {
                    continue;
                }
                let row = rows.entry((nu + te, m)).or_insert_with(|| vec![0; ncols]);
                row[col] = (row[col] + c) % p;
            }
        }
    }
    let fl = PrimeField(p);
    let matrix: Vec<Vec<u64>> = rows.into_values().collect();
    let e = rref(&fl, &matrix, ncols);
    let rank = e.rank();

    let obstruction = f_monos.iter().find_map(|(te, monos)| {
        monos.keys().find(|m| !allowed(m, p, &basis)).map(|m| {
            let g = m.iter().zip(&basis).position(|(x, ok)| !ok && *x as u64 % p != 0).expect("not allowed");
            json!({
                "t_exponent": te,
                "monomial": render_mono(m, &names),
                "generator": names[g],
            })
        })
    });
    let relation = kernel(&fl, &e).into_iter().next().map(|v| {
        let parts: Vec<String> = v
            .iter()
            .zip(&columns)
            .filter(|(c, _)| **c != 0)
            .map(|(c, (nu, m))| {
                let mut factors = Vec::new();
                if *c != 1 {
                    factors.push(c.to_string());
                }
                let xm = render_mono(m, &names);
                if !xm.is_empty() {
                    factors.push(xm);
                }
                match nu {
                    0 => {}
                    1 => factors.push("T".into()),
                    _ => factors.push(format!("T^{nu}")),
                }
                if factors.is_empty() {
                    "1".into()
                } else {
                    factors.join("*")
                }
            })
            .collect();
        parts.join(" + ")
    });
    let verdict = if rank == ncols { Verdict::PIndependent } else { Verdict::PDependent };
    let params = json!({
        "series": f.to_json(),
        "p": p,
        "generators": names,
        "bounds": bounds,
    });
    let witness = json!({
        "unknowns": ncols,
        "equations": matrix.len(),
        "rank": rank,
        "obstruction": obstruction.unwrap_or(Value::Null),
        "multiplier": relation.map(Value::String).unwrap_or(Value::Null),
    });
    Ok(Certificate { kind: CertificateKind::PIndependent, verdict, params, witness })
}

/// Exponent vectors `m` with `m_i < p` on allowed generators and `0` elsewhere.
fn residue_vectors(n: usize, p: u64, basis: &[bool]) -> Vec<Mono> {
    let mut out = vec![Vec::new()];
    for ok in basis.iter().take(n) {
        let top = if *ok { p as u32 } else { 1 };
        out = out
            .into_iter()
            .flat_map(|v: Mono| {
                (0..top).map(move |k| {
                    let mut w = v.clone();
                    w.push(k);
                    w
                })
            })
            .collect();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lognorm::RadiusDecl;

    fn setup(n: usize) -> (Arc<FieldSpec>, Arc<RadiusContext>) {
        (
            FieldSpec::ratfun_laurent(2, n, 20).unwrap(),
            Arc::new(RadiusContext::new(2, vec![RadiusDecl::default_irrational("r")]).unwrap()),
        )
    }

    fn series(s: &Arc<FieldSpec>, c: &Arc<RadiusContext>, src: &str) -> TateSeries {
        TateSeries::parse_univariate(s, c, "r", SeriesKind::Power, src).unwrap()
    }

    #[test]
    fn basis_series_shape() {
        let (s, c) = setup(3);
        let f = pbasis_series(4, &s, &c, "r").unwrap();
        assert_eq!(f, series(&s, &c, "t + u1*T + u2*T^2 + u3*T^3"));
        assert_eq!(pbasis_series(1, &s, &c, "r").unwrap(), series(&s, &c, "t"));
        assert!(f.terms().values().all(|x| x.norm().base_exp().map_or(true, |e| !num_traits::Signed::is_negative(e))));
        assert!(matches!(pbasis_series(5, &s, &c, "r"), Err(Error::PreconditionFailed(_))));
    }

    #[test]
    fn verdicts() {
        let (s, c) = setup(3);
        let f = pbasis_series(4, &s, &c, "r").unwrap();
        let b = IndependenceBounds::default();
        let cert = p_independence_certificate(&f, &b).unwrap();
        assert!(cert.holds());
        assert_eq!(cert.witness["obstruction"]["generator"], "t");
        for src in ["u1^2*T^2", "T"] {
            let cert = p_independence_certificate(&series(&s, &c, src), &b).unwrap();
            assert_eq!(cert.verdict, Verdict::PDependent, "{src}");
        }
        // t itself is allowed once it is in the relation basis
        let b = IndependenceBounds { relation_basis: vec!["t".into()], ..IndependenceBounds::default() };
        let cert = p_independence_certificate(&series(&s, &c, "t"), &b).unwrap();
        assert_eq!(cert.verdict, Verdict::PDependent);
        let tight = IndependenceBounds { max_unknowns: 10, ..IndependenceBounds::default() };
        assert!(matches!(p_independence_certificate(&f, &tight), Err(Error::CapExceeded(_))));
    }

    /// Multiplies out every nonzero `w` over `F_2` and checks the verdict by hand.
    fn brute_force_dependent(f: &[(usize, Vec<Mono>)], t_deg: usize, coeff_deg: u32, nv: usize) -> bool {
        let lifts = bounded_exponents(nv, coeff_deg);
        let cols: Vec<(usize, Mono)> = (0..=t_deg)
            .flat_map(|nu| lifts.iter().map(move |a| (nu, a.iter().map(|x| 2 * x).collect())))
            .collect();
        (1u64..1 << cols.len()).any(|mask| {
            let mut prod: BTreeMap<(usize, Mono), u8> = BTreeMap::new();
            for (i, (nu, wm)) in cols.iter().enumerate() {
                if mask >> i & 1 == 0 {
                    continue;
                }
                for (te, monos) in f {
                    for fm in monos {
                        let m: Mono = wm.iter().zip(fm).map(|(x, y)| x + y).collect();
                        *prod.entry((nu + te, m)).or_default() ^= 1;
                    }
                }
            }
            prod.iter().all(|((_, m), c)| *c == 0 || m.iter().all(|e| e % 2 == 0))
        })
    }

    #[test]
    fn agrees_with_enumeration() {
        let (s, c) = setup(1);
        let cases: [(&str, Vec<(usize, Vec<Mono>)>); 4] = [
            ("t + u1*T", vec![(0, vec![vec![1, 0]]), (1, vec![vec![0, 1]])]),
            ("u1^2 + t^2*T", vec![(0, vec![vec![0, 2]]), (1, vec![vec![2, 0]])]),
            ("t*u1 + t*u1*T", vec![(0, vec![vec![1, 1]]), (1, vec![vec![1, 1]])]),
            ("(t + u1)*T", vec![(1, vec![vec![1, 0], vec![0, 1]])]),
        ];
        for (src, monos) in cases {
            let f = series(&s, &c, src);
            let b = IndependenceBounds { t_degree: 1, coeff_degree: 1, ..IndependenceBounds::default() };
            let cert = p_independence_certificate(&f, &b).unwrap();
            let dep = brute_force_dependent(&monos, 1, 1, 2);
            assert_eq!(cert.verdict == Verdict::PDependent, dep, "{src}");
        }
    }
}
