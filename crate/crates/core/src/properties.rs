//! Randomized cross-checks between modules.

use proptest::prelude::*;

use crate::analytic::zagier_a;
use crate::oracle::ideal_dfs;
use crate::quadfield::{kronecker, splitting_type, validate_field, FieldSpec, Splitting};
use crate::series::{euler_pairs, euler_pairs_with_workers, extension_counts_from};

fn in_scope(bound: i64) -> Vec<i64> {
    (-bound..=bound).filter(|&d| validate_field(d).is_ok()).collect()
}

fn field() -> impl Strategy<Value = FieldSpec> {
    proptest::sample::select(in_scope(300)).prop_map(|d| validate_field(d).unwrap())
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn euler_product_equals_ideal_search(k in field(), n in 1u64..3000) {
        let (a0, am) = euler_pairs(&k, n).unwrap();
        let dfs = ideal_dfs(&k, n).unwrap();
        for m in 1..=n {
            prop_assert_eq!(a0.get(m), dfs.unsigned.get(m), "D={} m={}", k.d(), m);
            prop_assert_eq!(am.get(m), dfs.signed.get(m), "D={} m={}", k.d(), m);
        }
    }

    #[test]
    fn coefficients_are_multiplicative(k in field(), m in 1u64..80, n in 1u64..80) {
        prop_assume!(gcd(m, n) == 1);
        let (a0, am) = euler_pairs(&k, m * n).unwrap();
        prop_assert_eq!(a0.get(m * n), a0.get(m) * a0.get(n));
        prop_assert_eq!(am.get(m * n), am.get(m) * am.get(n));
    }

    #[test]
    fn signed_bounded_by_unsigned(k in field(), n in 1u64..2000) {
        let (a0, am) = euler_pairs(&k, n).unwrap();
        for m in 1..=n {
            prop_assert!(am.get(m).abs() <= a0.get(m));
            prop_assert_eq!((a0.get(m) + am.get(m)) % 2, 0);
            if !k.is_imaginary() {
                prop_assert_eq!(am.get(m), a0.get(m));
            }
        }
        let counts = extension_counts_from(&k, &a0, &am).unwrap();
        prop_assert!(counts.entries().all(|(_, v)| v >= 0));
    }

    #[test]
    fn workers_do_not_change_the_result(k in field(), n in 1u64..4000, w in 2usize..6) {
        prop_assert_eq!(euler_pairs(&k, n).unwrap(), euler_pairs_with_workers(&k, n, w).unwrap());
    }

    #[test]
    fn kronecker_is_completely_multiplicative(a in -500i64..500, m in 1u64..400, n in 1u64..400) {
        prop_assert_eq!(kronecker(a, m * n), kronecker(a, m) * kronecker(a, n));
    }

    #[test]
    fn ramification_times_norms_is_p_squared(k in field(), i in 0usize..25) {
        let p = crate::primes::primes_up_to(100)[i];
        let s = splitting_type(&k, p);
        let e = if s.splitting == Splitting::Ramified { 2 } else { 1 };
        prop_assert_eq!(s.ideal_norms.iter().product::<u64>().pow(e), p * p);
        prop_assert_eq!(s.splitting == Splitting::Ramified, k.disc() % p == 0);
    }

    #[test]
    fn cotangent_integral_is_odd_and_positive(x in 1e-3f64..1e3) {
        let a = zagier_a(x).unwrap();
        prop_assert!(a > 0.0);
        prop_assert_eq!(zagier_a(-x).unwrap(), -a);
    }
}
