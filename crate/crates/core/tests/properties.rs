use proptest::prelude::*;
use vdm_core::exponents::{affine_dimension, d_gamma, normalize, p_adic_valuation};
use vdm_core::irreducibility::{decide, verify_certificate_with_seed, FieldSpec, Verdict};
use vdm_core::oracle::line_case_factor;
use vdm_core::tropical::{decide_tropical_irreducibility, TropicalVerdict};
use vdm_core::vandermonde::VandermondeInstance;
use vdm_core::{ExponentVector, Ring, Support};

fn distinct_support(n: usize, max_size: usize, max_exp: u64) -> impl Strategy<Value = Support> {
    prop::collection::btree_set(prop::collection::vec(0..=max_exp, n), 1..=max_size)
        .prop_map(|set| Support::from_rows(&set.into_iter().collect::<Vec<_>>()).unwrap())
}

fn shuffled(s: &Support, seed: u64) -> Support {
    let mut perm: Vec<usize> = (0..s.len()).collect();
    perm.sort_by_key(|&i| (i as u64 * 2_654_435_761 + seed) % 97);
    s.permuted(&perm)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn decide_ignores_column_order(s in distinct_support(2, 6, 6), seed in 0u64..50, p in prop::sample::select(vec![0u64, 2, 3, 5])) {
        let f = FieldSpec::new(p).unwrap();
        let a = decide(&s, f);
        let b = decide(&shuffled(&s, seed), f);
        prop_assert_eq!(a.verdict, b.verdict);
        prop_assert_eq!((a.d_gamma, a.affine_dim, a.power_r), (b.d_gamma, b.affine_dim, b.power_r));
        prop_assert_eq!(a.reduced_support.as_set(), b.reduced_support.as_set());
    }

    #[test]
    fn translation_only_moves_gamma_bar(s in distinct_support(3, 5, 4), dx in 0u64..3, dy in 0u64..3, dz in 0u64..3) {
        let delta = ExponentVector::new(vec![dx, dy, dz]);
        let (base, _) = normalize(&s);
        let moved = base.translated(&delta);
        let cert = decide(&moved, FieldSpec::zero());
        prop_assert_eq!(&cert.gamma_bar, &delta);
        prop_assert_eq!(cert.normalized_verdict, decide(&base, FieldSpec::zero()).verdict);
    }

    #[test]
    fn power_r_is_the_valuation(s in distinct_support(2, 5, 5), k in 1u64..4, p in prop::sample::select(vec![2u64, 3])) {
        prop_assume!(s.len() >= 2);
        let scaled = normalize(&s).0.scaled(k * p);
        let cert = decide(&scaled, FieldSpec::new(p).unwrap());
        prop_assert_eq!(cert.power_r, p_adic_valuation(d_gamma(&scaled).unwrap(), p));
        let reduced = decide(&cert.reduced_support, FieldSpec::new(p).unwrap());
        if reduced.reasons[0].holds && reduced.reasons[1].holds {
            prop_assert_eq!(reduced.verdict, Verdict::Irreducible);
        }
    }

    #[test]
    fn tropical_verdict_ignores_the_seed(s in distinct_support(2, 6, 4), a in 0u64..1000, b in 0u64..1000) {
        prop_assume!(s.len() >= 2);
        let x = decide_tropical_irreducibility(&s, a).unwrap();
        let y = decide_tropical_irreducibility(&s, b).unwrap();
        prop_assert_eq!(x.verdict, y.verdict);
        prop_assert_eq!(x.multiplicity_gcd, y.multiplicity_gcd);
        prop_assert_eq!(x.multiplicity_gcd, Some(d_gamma(&normalize(&s).0).unwrap()));
    }

    #[test]
    fn algebraic_and_tropical_agree_when_d_is_one(s in distinct_support(2, 6, 5)) {
        let (s, _) = normalize(&s);
        prop_assume!(s.len() >= 3 && d_gamma(&s).unwrap() == 1);
        let t1 = decide(&s, FieldSpec::zero()).verdict == Verdict::Irreducible;
        let t2 = decide_tropical_irreducibility(&s, 0).unwrap().verdict == TropicalVerdict::Irreducible;
        prop_assert_eq!(t1, t2);
    }

    #[test]
    fn line_case_success_means_collinear_split(
        start in prop::collection::vec(0u64..4, 2),
        dir in prop::sample::select(vec![(1u64, 0u64), (0, 1), (1, 1), (1, 2), (2, 1)]),
        steps in prop::collection::btree_set(0u64..6, 3..=5),
        p in prop::sample::select(vec![2u64, 3, 5]),
        seed in 0u64..100,
    ) {
        let rows: Vec<Vec<u64>> = steps.iter().map(|&k| vec![start[0] + k * dir.0, start[1] + k * dir.1]).collect();
        let s = Support::from_rows(&rows).unwrap();
        prop_assert_eq!(affine_dimension(&s), 1);
        let inst = VandermondeInstance::new(s.clone(), Ring::prime_field(p).unwrap()).unwrap();
        if line_case_factor(&inst, seed).is_ok() {
            let cert = decide(&s, FieldSpec::new(p).unwrap());
            prop_assert_eq!(cert.normalized_verdict, Verdict::CollinearSplit);
            prop_assert!(verify_certificate_with_seed(&inst, &cert, seed).is_ok());
        }
    }
}
