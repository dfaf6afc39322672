use gdlp::graphroute::{gdlp3_to_routing, solve_routing, verify_routing};
use gdlp::reduce::{extract_assignment, full_chain, sat_to_tethered, Stage};
use gdlp::{decide_k1, verify_witness, GdlpInstance, Permutation, SatInstance, SearchOptions, Witness};
use proptest::prelude::*;

fn perm_of(d: usize) -> impl Strategy<Value = Permutation> {
    Just((0..d).collect::<Vec<usize>>())
        .prop_shuffle()
        .prop_map(|m| Permutation::from_map(m).unwrap())
}

fn cycle_of(d: usize, max_len: usize) -> impl Strategy<Value = Permutation> {
    (Just((0..d).collect::<Vec<usize>>()).prop_shuffle(), 2..=max_len.min(d))
        .prop_map(move |(pts, len)| Permutation::cycle(&pts[..len], d).unwrap())
}

// Every exponent vector in 0..order, last base fastest, product left-first.
fn grid_oracle(bases: &[Permutation], target: &Permutation) -> Option<Vec<u64>> {
    let orders: Vec<u64> = bases.iter().map(Permutation::order).collect();
    let mut e = vec![0u64; bases.len()];
    loop {
        let mut acc = Permutation::identity(target.degree()).unwrap();
        for (b, &x) in bases.iter().zip(&e) {
            for _ in 0..x {
                acc = acc.compose(b).unwrap();
            }
        }
        if &acc == target {
            return Some(e);
        }
        let mut k = bases.len();
        loop {
            if k == 0 {
                return None;
            }
            k -= 1;
            e[k] += 1;
            if e[k] < orders[k] {
                break;
            }
            e[k] = 0;
        }
    }
}

fn small_instance() -> impl Strategy<Value = (Vec<Permutation>, Permutation)> {
    (2usize..=6)
        .prop_flat_map(|d| {
            let base = prop_oneof![cycle_of(d, 3), perm_of(d)];
            (prop::collection::vec(base, 1..=12), perm_of(d), prop::collection::vec(0u64..6, 12), any::<bool>())
        })
        .prop_filter("grid too large", |(bases, ..)| {
            bases.iter().map(Permutation::order).product::<u64>() <= 50_000
        })
        .prop_map(|(bases, random, exps, reachable)| {
            // half the targets are known to be reachable
            let target = if reachable {
                let mut acc = Permutation::identity(random.degree()).unwrap();
                for (b, &x) in bases.iter().zip(&exps) {
                    acc = acc.compose(&b.power(x)).unwrap();
                }
                acc
            } else {
                random
            };
            (bases, target)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn pruned_search_matches_grid_oracle((bases, target) in small_instance()) {
        let inst = GdlpInstance::from_plain(bases.clone(), target.clone()).unwrap();
        let oracle = grid_oracle(&bases, &target);
        for opts in [
            SearchOptions::default(),
            SearchOptions { compress: false, ..SearchOptions::default() },
            SearchOptions::naive(),
        ] {
            let got = decide_k1(&inst, &opts).unwrap();
            prop_assert_eq!(got.as_ref().map(|w| w.rows()[0].clone()), oracle.clone());
            if let Some(w) = got {
                prop_assert!(verify_witness(&inst, &w).unwrap());
            }
        }
    }

    #[test]
    fn k_rows_unfold_to_one((bases, target) in small_instance(), k in 1usize..=3, seed in any::<u64>()) {
        let q = bases.len();
        let rows: Vec<Vec<u64>> = (0..k)
            .map(|i| (0..q).map(|j| (seed >> ((i * q + j) % 60)) & 7).collect())
            .collect();
        let inst = GdlpInstance::from_plain(bases.clone(), target.clone()).unwrap();
        let repeated: Vec<Permutation> = (0..k).flat_map(|_| bases.iter().cloned()).collect();
        let flat = GdlpInstance::from_plain(repeated, target).unwrap();
        let w = Witness::new(rows.clone()).unwrap();
        let w1 = Witness::single_row(rows.concat()).unwrap();
        prop_assert_eq!(verify_witness(&inst, &w).unwrap(), verify_witness(&flat, &w1).unwrap());
    }

    #[test]
    fn routing_matches_decision(
        (d, bases, target) in (3usize..=6).prop_flat_map(|d| {
            (Just(d), prop::collection::vec(cycle_of(d, 3), 1..=8), perm_of(d))
        })
    ) {
        let inst = GdlpInstance::from_plain(bases, target).unwrap();
        let r = gdlp3_to_routing(&inst).unwrap();
        prop_assert!(r.is_acyclic());
        let (i, o) = r.max_degrees();
        prop_assert!(i <= 2 && o <= 2);
        prop_assert_eq!(r.terminals().len(), d);
        let opts = SearchOptions::default();
        let routed = solve_routing(&r, &opts).unwrap();
        let w = decide_k1(&inst, &opts).unwrap();
        prop_assert_eq!(routed.is_some(), w.is_some());
        if let Some(p) = routed {
            prop_assert!(verify_routing(&r, &p).unwrap());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn reduced_witnesses_verify_and_decode(
        (n, clauses) in (1usize..=4).prop_flat_map(|n| (Just(n), prop::collection::vec([0..n, 0..n, 0..n], 1..=3)))
    ) {
        let s = SatInstance::new(n, clauses).unwrap();
        let tethered = sat_to_tethered(&s).unwrap();
        if let Some(w) = decide_k1(&tethered, &SearchOptions::default()).unwrap() {
            prop_assert!(verify_witness(&tethered, &w).unwrap());
            let a = extract_assignment(&s, &w).unwrap();
            prop_assert!(s.eval(&a).unwrap());
        }
        for st in [Stage::Six, Stage::Four, Stage::Three] {
            let (inst, _) = full_chain(&s, st).unwrap();
            if let Some(w) = decide_k1(&inst, &SearchOptions::default()).unwrap() {
                prop_assert!(verify_witness(&inst, &w).unwrap());
            }
        }
    }
}
