mod common;

use std::cmp::Ordering;

use num_rational::BigRational;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use nonarch::deriv::{deriv_eval, nonintegral_certificate, phi, sparse_series, unboundedness_table, PolyInTF};
use nonarch::frobenius::{derivative_span_witness, termwise_tail_bound, PBasis};
use nonarch::lognorm::LogNorm;
use nonarch::ring::NormedRing;
use nonarch::root::{pth_root_near, pth_root_near_one, RootOptions};
use nonarch::series::SeriesKind;
use nonarch::square_zero::SquareZeroElem;
use nonarch::{Bounded, Error, FieldSpec, Scalar};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn fields() -> Vec<std::sync::Arc<FieldSpec>> {
    vec![
        FieldSpec::padic(3, 30).unwrap(),
        FieldSpec::fq_laurent(2, 4, 30).unwrap(),
        FieldSpec::fq_laurent(3, 9, 30).unwrap(),
    ]
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn scalar_norm_is_ultrametric_and_multiplicative(seed in any::<u64>()) {
        let mut r = rng(seed);
        for s in fields() {
            let ctx = common::ctx(s.q);
            let x = common::scalar(&mut r, &s);
            let y = common::scalar(&mut r, &s);
            prop_assert_eq!(x.mul(&y).unwrap().norm(), x.norm().mul(&y.norm()));
            if let Bounded::Value(sum) = x.checked_add(&y).unwrap() {
                let (nx, ny, ns) = (x.norm(), y.norm(), sum.norm());
                let top = ctx.max(&nx, &ny).unwrap().clone();
                prop_assert!(ctx.le(&ns, &top).unwrap());
                if nx != ny {
                    prop_assert_eq!(ns, top);
                }
            }
        }
    }

    #[test]
    fn scalar_roots_raise_back(seed in any::<u64>(), p in prop::sample::select(vec![2u64, 5, 7])) {
        let mut r = rng(seed);
        for s in fields() {
            if !s.check_aux_prime(p) {
                continue;
            }
            let a = common::scalar(&mut r, &s).pow(p as i64).unwrap().with_precision_cap(20).unwrap();
            let root = a.pth_root(p).unwrap();
            prop_assert!(root.pow(p as i64).unwrap().agrees_with(&a));
        }
    }

    #[test]
    fn auxiliary_primes_are_units(p in 2u64..60) {
        for s in fields() {
            if s.check_aux_prime(p) {
                prop_assert!(Scalar::from_int(&s, p as i64).norm().is_one());
            }
        }
    }

    #[test]
    fn lognorm_order_respects_products(a in (-20i64..20, -20i64..20, -20i64..20),
                                       b in (-20i64..20, -20i64..20, -20i64..20),
                                       c in (-20i64..20, -20i64..20, -20i64..20)) {
        let ctx = common::ctx(3);
        let (x, y, z) = (
            LogNorm::from_ints(a.0, &[a.1, a.2]),
            LogNorm::from_ints(b.0, &[b.1, b.2]),
            LogNorm::from_ints(c.0, &[c.1, c.2]),
        );
        let o = ctx.compare(&x, &y).unwrap();
        prop_assert_eq!(ctx.compare(&x.mul(&z), &y.mul(&z)).unwrap(), o);
        // both radii are irrational and independent: only identical exponents tie
        prop_assert_eq!(o == Ordering::Equal, x == y);
    }

    #[test]
    fn lognorm_powers_add(a in (-9i64..9, -9i64..9), s in (-6i64..6, 1i64..5), t in (-6i64..6, 1i64..5)) {
        let x = LogNorm::from_ints(a.0, &[a.1]);
        let (s, t) = (rat(s.0, s.1), rat(t.0, t.1));
        prop_assert_eq!(x.pow(&s).unwrap().mul(&x.pow(&t).unwrap()), x.pow(&(s + t)).unwrap());
    }

    #[test]
    fn gauss_norm_of_sum_is_bounded(seed in any::<u64>()) {
        let mut r = rng(seed);
        for s in fields() {
            let ctx = common::ctx(s.q);
            let f = common::series(&mut r, &s, &ctx, "r1", SeriesKind::Laurent, 5, -4..=6);
            let g = common::series(&mut r, &s, &ctx, "r1", SeriesKind::Laurent, 5, -4..=6);
            let (nf, ng) = (f.gauss_norm().unwrap().0, g.gauss_norm().unwrap().0);
            let nsum = f.add(&g).unwrap().gauss_norm().unwrap().0;
            prop_assert!(ctx.le(&nsum, ctx.max(&nf, &ng).unwrap()).unwrap());
        }
    }

    #[test]
    fn root_iteration_contracts_and_agrees(k in 1i64..4, n in -30i64..30, d in 1i64..8) {
        prop_assume!(n % 3 != 0 && d % 3 != 0);
        let s = FieldSpec::padic(3, 30).unwrap();
        // f = 1 + 3^k n/d
        let f = Scalar::one(&s)
            .add(&Scalar::from_int(&s, n).div(&Scalar::from_int(&s, d)).unwrap().mul(&Scalar::uniformizer_pow(&s, k)).unwrap())
            .unwrap();
        for p in [2u64, 5] {
            let (root, trace) = pth_root_near_one(&f, p, &RootOptions::default()).unwrap();
            let g1 = trace.steps[0].norm_g.clone();
            for (m, step) in trace.steps.iter().enumerate() {
                let m = m as i64 + 1;
                prop_assert!(step.contraction_ok && step.residual_ok && step.identity_ok);
                prop_assert!(s.q == 3 && NormedRing::norm_le(&f, &step.norm_g, &g1.powi(m).unwrap()).unwrap());
            }
            prop_assert!(trace.certified);
            prop_assert!(root.agrees_with(&f.pth_root(p).unwrap()));
        }
    }

    #[test]
    fn recentred_roots_stay_separated(u in 1i64..40, k in 1i64..5, v in -30i64..30) {
        prop_assume!(u % 3 != 0 && v != 0);
        let s = FieldSpec::padic(3, 30).unwrap();
        let g_root = Scalar::from_int(&s, u);
        let g = g_root.pow(2).unwrap();
        let f = g.add(&Scalar::from_int(&s, v).mul(&Scalar::uniformizer_pow(&s, k)).unwrap()).unwrap();
        let near = pth_root_near(&f, &g, &g_root, 2, &RootOptions::default()).unwrap();
        prop_assert!(near.separated);
        prop_assert!(near.root.pow(2).unwrap().agrees_with(&f));
    }

    #[test]
    fn square_zero_reduction_is_a_homomorphism(seed in any::<u64>()) {
        let mut r = rng(seed);
        let s = FieldSpec::fq_laurent(2, 4, 30).unwrap();
        let ctx = common::ctx(2);
        let mut e = || SquareZeroElem::dual(
            common::series(&mut r, &s, &ctx, "r0707", SeriesKind::Laurent, 3, -3..=3),
            common::series(&mut r, &s, &ctx, "r0707", SeriesKind::Laurent, 3, -3..=3),
        );
        let (x, y) = (e(), e());
        let xy = x.mul(&y).unwrap();
        prop_assert_eq!(xy.reduction(), x.reduction().mul(&y.reduction()).unwrap());
        prop_assert!(ctx.le(&xy.norm().unwrap(), &x.norm().unwrap().mul(&y.norm().unwrap())).unwrap());
        let zb = x.with_parts(x.a.zero_like(), y.b.clone()).unwrap();
        prop_assert!(zb.mul(&zb).unwrap().b.is_zero());
    }

    #[test]
    fn derivation_is_leibniz_and_phi_is_multiplicative(
        p in prop::collection::vec((0u32..2, 0u32..2, -5i64..5), 1..4),
        q in prop::collection::vec((0u32..2, 0u32..2, -5i64..5), 1..4),
    ) {
        let s = FieldSpec::padic(3, 30).unwrap();
        let ctx = common::ctx(3);
        let f = sparse_series(3, &s, &ctx, "r1").unwrap().ideal;
        let cert = nonintegral_certificate(&f, 2, 3).unwrap();
        let poly = |terms: &[(u32, u32, i64)]| {
            terms.iter().fold(PolyInTF::zero(&s), |acc, (a, b, c)| {
                acc.add(&PolyInTF::monomial(Scalar::from_int(&s, *c), *a, *b)).unwrap()
            })
        };
        let (pp, qq) = (poly(&p), poly(&q));
        let pq = pp.mul(&qq).unwrap();
        let lhs = deriv_eval(&pq, &f, &cert).unwrap();
        let rhs = pp.eval(&f).unwrap().mul(&deriv_eval(&qq, &f, &cert).unwrap()).unwrap()
            .add(&qq.eval(&f).unwrap().mul(&deriv_eval(&pp, &f, &cert).unwrap()).unwrap()).unwrap();
        prop_assert!(lhs.agrees_with(&rhs).unwrap());
        let (fp, fq) = (phi(&pp, &f, &cert).unwrap(), phi(&qq, &f, &cert).unwrap());
        prop_assert!(phi(&pq, &f, &cert).unwrap().agrees(&fp.mul(&fq).unwrap()).unwrap());
        prop_assert!(phi(&pp.add(&qq).unwrap(), &f, &cert).unwrap().agrees(&fp.add(&fq).unwrap()).unwrap());
    }

    #[test]
    fn certificates_respect_the_degree_gap(m in 1usize..5, n_max in 1u32..4, d_max in 0u32..40) {
        let s = FieldSpec::padic(3, 30).unwrap();
        let ctx = common::ctx(3);
        let sp = sparse_series(m, &s, &ctx, "r1").unwrap();
        let i_m = sp.spec.index(m);
        let next = sp.ideal.tail_start().unwrap();
        match nonintegral_certificate(&sp.ideal, n_max, d_max) {
            Ok(c) => {
                prop_assert!(n_max as i64 * i_m + (d_max as i64) < next);
                // once d_max reaches deg f, X - f(T) is itself a relation
                prop_assert_eq!(c.holds(), (d_max as i64) < i_m);
            }
            Err(Error::PreconditionFailed(_)) => prop_assert!(n_max as i64 * i_m + d_max as i64 >= next),
            Err(e) => prop_assert!(false, "unexpected {e}"),
        }
    }

    #[test]
    fn divergence_ratios_increase(m_max in 1usize..5, radius in prop::sample::select(vec!["r1", "r0707"])) {
        let s = FieldSpec::padic(3, 30).unwrap();
        let ctx = common::ctx(3);
        let t = unboundedness_table(m_max, &s, &ctx, radius, 0).unwrap();
        prop_assert!(t.rows.windows(2).all(|w| ctx.lt(&w[0].ratio, &w[1].ratio).unwrap()));
        prop_assert!(t.rows.iter().all(|r| r.ratio_matches));
    }

    #[test]
    fn frobenius_parts_are_bounded(seed in any::<u64>()) {
        let mut r = rng(seed);
        for s in [FieldSpec::fq_laurent(2, 2, 30).unwrap(), FieldSpec::fq_laurent(3, 9, 30).unwrap()] {
            let ctx = common::ctx(s.q);
            let basis = PBasis::new(&s).unwrap();
            let f = common::series(&mut r, &s, &ctx, "r1", SeriesKind::Power, 6, 0..=12);
            prop_assert!(derivative_span_witness(&f, &basis).unwrap());
            let start = f.terms().keys().map(|e| e[0]).max().unwrap() + 1;
            let tailed = f.clone().with_tail(f.radius_monomial(&[start]), Some(start)).unwrap();
            prop_assert!(termwise_tail_bound(&tailed, &basis).unwrap());
        }
    }
}
