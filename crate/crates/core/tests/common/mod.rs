#![allow(dead_code)]

use std::sync::Arc;

use nonarch::lognorm::{RadiusContext, RadiusDecl};
use nonarch::series::{SeriesKind, TateSeries};
use nonarch::{FieldSpec, Scalar};
use rand::Rng;

pub fn ctx(q: u64) -> Arc<RadiusContext> {
    Arc::new(
        RadiusContext::new(q, vec![RadiusDecl::near_six_tenths("r1"), RadiusDecl::default_irrational("r0707")])
            .unwrap(),
    )
}

/// A nonzero exact scalar: a small rational times a power of 3 for Q_3, a
/// Laurent polynomial in t for F_q((t)).
pub fn scalar<R: Rng>(rng: &mut R, spec: &Arc<FieldSpec>) -> Scalar {
    match spec.kind {
        nonarch::FieldKind::Padic => loop {
            let n = rng.gen_range(-40i64..=40);
            let d = rng.gen_range(1i64..=12);
            if n == 0 {
                continue;
            }
            let x = Scalar::from_int(spec, n).div(&Scalar::from_int(spec, d)).unwrap();
            let k = rng.gen_range(-2i64..=3);
            return x.mul(&Scalar::uniformizer_pow(spec, k)).unwrap();
        },
        _ => loop {
            let mut acc = Scalar::zero(spec);
            for _ in 0..rng.gen_range(1..=3) {
                let e = rng.gen_range(-3i64..=6);
                let mut c = Scalar::uniformizer_pow(spec, e);
                if spec.field_size > spec.q {
                    let z = Scalar::residue_generator(spec).unwrap();
                    c = c.mul(&z.pow(rng.gen_range(0..3)).unwrap()).unwrap();
                }
                acc = acc.checked_add(&c).unwrap().value().unwrap_or_else(|| Scalar::zero(spec));
            }
            if !acc.is_zero() {
                return acc;
            }
        },
    }
}

/// An exact one-variable series with at most `max_terms` terms.
pub fn series<R: Rng>(
    rng: &mut R,
    spec: &Arc<FieldSpec>,
    ctx: &Arc<RadiusContext>,
    radius: &str,
    kind: SeriesKind,
    max_terms: usize,
    exps: std::ops::RangeInclusive<i64>,
) -> TateSeries {
    let mut f = TateSeries::zero(spec, ctx, &[radius], kind).unwrap();
    for _ in 0..rng.gen_range(1..=max_terms) {
        let e = rng.gen_range(exps.clone());
        f.set_coeff(&[e], scalar(rng, spec)).unwrap();
    }
    f
}
