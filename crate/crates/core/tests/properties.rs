use std::collections::BTreeSet;

use num_bigint::BigUint;
use prime_avoid_core::kpower::matching::maximum_matching;
use prime_avoid_core::numtheory::{
    crt_solve, is_prime, is_prime_u64, jacobi, kth_roots_mod_p, pow_mod, primes_upto, reduce,
};
use prime_avoid_core::schedule::make_schedule;
use prime_avoid_core::squarefree::{build_sets, construct, SearchOptions};
use prime_avoid_core::{Congruence, Profile, ScheduleOverrides};
use proptest::prelude::*;
use proptest::sample::subsequence;

fn small_primes() -> Vec<u64> {
    primes_upto(400)
}

fn brute_max(adj: &[Vec<usize>], used: &mut Vec<bool>, i: usize) -> usize {
    if i == adj.len() {
        return 0;
    }
    let mut best = brute_max(adj, used, i + 1);
    for &r in &adj[i] {
        if !used[r] {
            used[r] = true;
            best = best.max(1 + brute_max(adj, used, i + 1));
            used[r] = false;
        }
    }
    best
}

proptest! {
    #[test]
    fn crt_solution_satisfies_every_congruence(
        moduli in subsequence(small_primes(), 1..12),
        seeds in prop::collection::vec(any::<u64>(), 12),
    ) {
        let cs: Vec<Congruence> = moduli
            .iter()
            .zip(&seeds)
            .map(|(&p, &s)| Congruence::new(s % p, p).unwrap())
            .collect();
        let (m0, n) = crt_solve(&cs).unwrap();
        prop_assert!(m0 < n);
        prop_assert_eq!(n, moduli.iter().fold(BigUint::from(1u32), |acc, &p| acc * p));
        for c in &cs {
            prop_assert!(c.holds_for(&m0));
        }
    }

    #[test]
    fn big_and_machine_primality_agree(n in any::<u64>()) {
        prop_assert_eq!(is_prime(&BigUint::from(n), 7), is_prime_u64(n));
    }

    #[test]
    fn products_of_primes_are_composite(i in 0usize..78, j in 0usize..78) {
        let ps = primes_upto(400);
        let n = BigUint::from(ps[i]) * ps[j] * ps[(i + j) % ps.len()];
        prop_assert!(!is_prime(&n, 1));
    }

    #[test]
    fn jacobi_is_multiplicative_in_the_top(a in -500i64..500, b in -500i64..500, n in (1u64..2000).prop_map(|v| 2 * v + 1)) {
        let ja = jacobi(a, n).unwrap();
        let jb = jacobi(b, n).unwrap();
        prop_assert_eq!(jacobi(a * b, n).unwrap(), ja * jb);
        prop_assert_eq!(jacobi(a + n as i64, n).unwrap(), ja);
    }

    #[test]
    fn roots_are_roots(a in -1000i64..1000, k in 1u64..9, idx in 0usize..78) {
        let p = primes_upto(400)[idx];
        let roots = kth_roots_mod_p(a, k, p);
        prop_assert!(roots.len() as u64 <= k.min(p));
        for r in roots {
            prop_assert_eq!(pow_mod(r, k, p), reduce(a, p));
        }
    }

    #[test]
    fn matching_is_a_maximum_matching(
        adj in prop::collection::vec(prop::collection::btree_set(0usize..7, 0..4), 0..7),
    ) {
        let adj: Vec<Vec<usize>> = adj.into_iter().map(|s| s.into_iter().collect()).collect();
        let m = maximum_matching(&adj, 7);
        prop_assert_eq!(m.len(), adj.len());
        let mut rights = BTreeSet::new();
        for (l, r) in m.iter().enumerate() {
            if let Some(r) = *r {
                prop_assert!(adj[l].contains(&r));
                prop_assert!(rights.insert(r));
            }
        }
        prop_assert_eq!(rights.len(), brute_max(&adj, &mut vec![false; 7], 0));
    }

    #[test]
    fn set_system_is_nested(x in 40.0f64..3000.0, y in 3u64..200) {
        let o = ScheduleOverrides { y: Some(y), ..Default::default() };
        let Ok(sch) = make_schedule(x, 1, Profile::Practical, o) else { return Ok(()) };
        let s = build_sets(&sch).unwrap();
        let w = 2 * y as usize + 1;
        prop_assert_eq!(s.u1.len() + s.u2.len() + 2, w);
        let sub = |a: &[i64], b: &[i64]| a.iter().all(|u| b.binary_search(u).is_ok());
        prop_assert!(sub(&s.u3, &s.u2));
        prop_assert!(sub(&s.u5, &s.u3));
        prop_assert!(sub(&s.u4, &s.u2));
        prop_assert!(s.u6.len() <= w);
        for u in [-1, 0, 1] {
            prop_assert!(s.u6.contains(&u));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn every_offset_gets_a_witness(x in 40.0f64..400.0, y in 3u64..16, seed in any::<u64>()) {
        let o = ScheduleOverrides { z: Some(x.sqrt()), y: Some(y), ..Default::default() };
        let sch = make_schedule(x, 1, Profile::Explicit, o).unwrap();
        let cert = construct(&sch, &SearchOptions { seed, ..Default::default() }).unwrap();
        let y = cert.schedule.y as i64;
        prop_assert_eq!(cert.cover.len() as i64, 2 * y + 1);
        for (i, (u, w)) in cert.cover.iter().enumerate() {
            prop_assert_eq!(*u, i as i64 - y);
            prop_assert!(w.certifies_composite());
            prop_assert!(w.p as f64 <= x);
        }
    }
}
