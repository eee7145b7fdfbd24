use multcong_core::arith::{coprime_part, factorize_u64, is_prime, kronecker, nu, primes_up_to, quadratic_class};
use multcong_core::engine::scan_valuation;
use multcong_core::{
    certify_congruence, decompose_progression, theorem_decomposition, EngineConfig, Finite, FnDescriptor,
};
use num_integer::Integer;
use proptest::prelude::*;

fn small_prime() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![2u64, 3, 5, 7])
}

fn function() -> impl Strategy<Value = FnDescriptor> {
    prop_oneof![(0u32..4).prop_map(FnDescriptor::sigma), Just(FnDescriptor::phi())]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn factorization_multiplies_back(n in 1u64..u64::MAX) {
        let f = factorize_u64(n).unwrap();
        prop_assert_eq!(f.value().unwrap(), n as i128);
        prop_assert!(f.factors.iter().all(|&(q, e)| e > 0 && is_prime(q)));
        prop_assert!(f.factors.windows(2).all(|w| w[0].0 < w[1].0));
    }

    #[test]
    fn valuation_is_additive(p in small_prime(), a in 1i64..1_000_000, b in 1i64..1_000_000) {
        let sum = nu(p, a as i128 * b as i128).unwrap();
        let (Finite(x), Finite(y)) = (nu(p, a as i128).unwrap(), nu(p, b as i128).unwrap()) else { unreachable!() };
        prop_assert_eq!(sum, Finite(x + y));
    }

    #[test]
    fn progression_decomposition(a in 1u64..5000, b in 1u64..5000) {
        let pr = decompose_progression(a, b).unwrap();
        prop_assert_eq!(pr.g, a.gcd(&b));
        prop_assert_eq!(pr.a_prime * pr.g, a);
        prop_assert_eq!(pr.b_prime * pr.g, b);
        prop_assert_eq!(pr.g % pr.g_prime, 0);
        prop_assert!(pr.g_prime_factors.primes().all(|q| pr.a_prime % q == 0));
        let rest = pr.g / pr.g_prime;
        prop_assert!(pr.varying_primes().all(|(q, e)| pr.a_prime % q != 0 && rest % q.pow(e) == 0));
    }

    #[test]
    fn coprime_part_is_coprime(n in 1u64..1_000_000, c in 1u64..10_000) {
        let m = coprime_part(n, c).unwrap();
        prop_assert_eq!(n % m, 0);
        prop_assert_eq!(m.gcd(&c), 1);
        prop_assert!((n / m) > 0);
        prop_assert!(factorize_u64(n / m).unwrap().primes().all(|q| c % q == 0));
    }

    #[test]
    fn functions_are_multiplicative(f in function(), m in 1u64..5000, n in 1u64..5000) {
        prop_assume!(m.gcd(&n) == 1);
        prop_assert_eq!(f.eval(m * n).unwrap(), f.eval(m).unwrap() * f.eval(n).unwrap());
    }

    #[test]
    fn residues_match_exact_values(f in function(), n in 1u64..100_000, m in 2u64..1000) {
        let exact = f.eval(n).unwrap() % m;
        prop_assert_eq!(exact.to_string(), f.eval_mod(n, m).unwrap().to_string());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn decomposition_is_a_lower_bound(f in function(), p in small_prime(), a in 1u64..=60, b in 1u64..=60) {
        let cfg = EngineConfig::with_horizon(500);
        let d = theorem_decomposition(&f, p, a, b, &cfg).unwrap();
        let scan = scan_valuation(&f, p, a, b, 500).unwrap();
        prop_assert!(d.rhs_total.value <= scan.value, "rhs {} scan {}", d.rhs_total.value, scan.value);
    }

    #[test]
    fn certificates_recheck_after_round_trip(
        f in function(), p in small_prime(), k in 1u64..4, a in 1u64..=40, b in 1u64..=40,
    ) {
        let cert = certify_congruence(&f, p, k, a, b, &EngineConfig::with_horizon(500)).unwrap();
        let json = serde_json::to_string(&cert).unwrap();
        let back: multcong_core::Certificate = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(&back, &cert);
        back.recheck(&f).unwrap();
    }

    #[test]
    fn scans_ignore_thread_count(f in function(), p in small_prime(), a in 1u64..=200, b in 1u64..=200) {
        let run = |t: usize| {
            rayon::ThreadPoolBuilder::new().num_threads(t).build().unwrap()
                .install(|| certify_congruence(&f, p, 2, a, b, &EngineConfig::with_horizon(3000)).unwrap())
        };
        prop_assert_eq!(run(1), run(4));
    }
}

#[test]
fn square_test_agrees_with_euler_criterion() {
    for &q in primes_up_to(200).iter().filter(|&&q| q > 2) {
        for b in 1..q {
            let class = quadratic_class(b, q).unwrap();
            assert_eq!(class.is_square_mod, kronecker(b as i128, q as i128) == 1, "{b} mod {q}");
        }
    }
}
