//! Acceptance gate: one line per criterion.
//!
//! Criteria listed in `KNOWN_FAILURES` are still evaluated in full and
//! printed as FAIL; the gate asserts that every other criterion passes and
//! that the known ones have not silently changed outcome.

use std::collections::BTreeSet;
use std::io::Write;
use std::time::{Duration, Instant};

use gdlp::benes::{bottom_to_top_count, BenesNetwork};
use gdlp::graphroute::{gdlp3_to_routing, solve_routing, verify_routing};
use gdlp::reduce::{full_chain, gadget_cases, sat_to_tethered, Stage};
use gdlp::{brute_force_sat, decide_k1, Permutation, SatInstance, SearchOptions};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const KNOWN_FAILURES: &[&str] = &["AC2", "AC3", "AC6"];

const RANDOM_SAMPLES: usize = 200;
const RANDOM_SEED: u64 = 20_240_601;
const ALGEBRA_CASES: usize = 10_000;

const LIMIT_AC1: Duration = Duration::from_secs(60);
const LIMIT_AC2: Duration = Duration::from_secs(600);
const LIMIT_AC3: Duration = Duration::from_secs(5);
const LIMIT_AC4: Duration = Duration::from_secs(30);
const LIMIT_AC7: Duration = Duration::from_secs(600);
const LIMIT_AC8: Duration = Duration::from_secs(5);

struct Gate {
    unexpected: Vec<String>,
}

impl Gate {
    fn record(&mut self, id: &str, title: &str, pass: bool, detail: String) {
        let known = KNOWN_FAILURES.contains(&id);
        let tag = match (pass, known) {
            (true, _) => "PASS",
            (false, true) => "FAIL (known)",
            (false, false) => "FAIL",
        };
        // straight to the handle so the line shows up without --nocapture
        let _ = writeln!(std::io::stdout().lock(), "{id} {tag}: {title} | {detail}");
        if pass == known {
            self.unexpected.push(format!("{id}: {tag}"));
        }
    }
}

fn all_triples(n: usize) -> Vec<[usize; 3]> {
    (0..n * n * n).map(|x| [x % n, x / n % n, x / (n * n)]).collect()
}

fn instance_set() -> Vec<SatInstance> {
    let mut set = Vec::new();
    let triples = all_triples(3);
    for &c in &triples {
        set.push(SatInstance::new(3, vec![c]).unwrap());
    }
    for &a in &triples {
        for &b in &triples {
            set.push(SatInstance::new(3, vec![a, b]).unwrap());
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(RANDOM_SEED);
    for _ in 0..RANDOM_SAMPLES {
        let n = rng.random_range(1..=4);
        let m = rng.random_range(1..=3);
        set.push(SatInstance::random(&mut rng, n, m).unwrap());
    }
    set
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let t = Instant::now();
    let v = f();
    (v, t.elapsed())
}

fn ac1(gate: &mut Gate, set: &[SatInstance], sat: &[bool]) {
    let (bad, el) = timed(|| {
        set.iter()
            .zip(sat)
            .filter(|(s, &expect)| {
                let inst = sat_to_tethered(s).unwrap();
                decide_k1(&inst, &SearchOptions::default()).unwrap().is_some() != expect
            })
            .count()
    });
    gate.record(
        "AC1",
        "SAT satisfiable iff tethered instance has a k=1 witness",
        bad == 0 && el < LIMIT_AC1,
        format!("{}/{} agree, {:.2?}", set.len() - bad, set.len(), el),
    );
}

fn ac2(gate: &mut Gate, set: &[SatInstance], sat: &[bool]) {
    let ((per_stage, lost, gained), el) = timed(|| {
        let mut per_stage = Vec::new();
        let mut lost = 0;
        let mut gained = 0;
        for st in Stage::ALL {
            let mut agree = 0;
            for (s, &expect) in set.iter().zip(sat) {
                let (inst, _) = full_chain(s, st).unwrap();
                let got = decide_k1(&inst, &SearchOptions::default()).unwrap().is_some();
                if got == expect {
                    agree += 1;
                } else if st == Stage::Three && expect {
                    lost += 1;
                } else if st == Stage::Three {
                    gained += 1;
                }
            }
            per_stage.push((st, agree));
        }
        (per_stage, lost, gained)
    });
    let pass = per_stage.iter().all(|&(_, a)| a == set.len()) && el < LIMIT_AC2;
    let counts: Vec<String> = per_stage.iter().map(|(st, a)| format!("{st} {a}/{}", set.len())).collect();
    gate.record(
        "AC2",
        "decisions agree across stages tethered, six, four, three",
        pass,
        format!(
            "{}; stage three loses {lost} satisfiable and gains {gained} unsatisfiable; {:.2?}",
            counts.join(", "),
            el
        ),
    );
}

fn ac3(gate: &mut Gate) {
    let (results, el) = timed(|| {
        gadget_cases()
            .unwrap()
            .into_iter()
            .map(|c| {
                let got = c.outcomes().unwrap();
                (c.name, got.len(), got == c.expected)
            })
            .collect::<Vec<_>>()
    });
    let pass = results.iter().all(|r| r.2) && el < LIMIT_AC3;
    let parts: Vec<String> = results
        .iter()
        .map(|(n, k, ok)| format!("{n} {k} outcomes {}", if *ok { "ok" } else { "wrong" }))
        .collect();
    gate.record(
        "AC3",
        "gadget outcome sets equal the powers of the replaced base",
        pass,
        format!("{}; {:.2?}", parts.join(", "), el),
    );
}

fn ac4(gate: &mut Gate) {
    let ((card, cross_ok, cycle_ok, detail), el) = timed(|| {
        let net = BenesNetwork::build(6).unwrap();
        let all = net.all_realizations().unwrap();
        let distinct: BTreeSet<&Permutation> = all.iter().map(|(_, p)| p).collect();
        let cross_ok = all
            .iter()
            .all(|(s, p)| net.middle_cross_count(s).unwrap() == bottom_to_top_count(p));
        let cycle = Permutation::parse_cycles("(0 1 2 3 4 5)", 6).unwrap();
        let middles = net.middle_switches();
        let mut positions = BTreeSet::new();
        let mut one_cross = true;
        let mut routings = 0;
        for (s, p) in &all {
            if p == &cycle {
                routings += 1;
                let crossed: Vec<usize> = middles.iter().copied().filter(|&i| s.bits()[i]).collect();
                one_cross &= crossed.len() == 1;
                positions.extend(crossed);
            }
        }
        let cycle_ok = one_cross && positions.len() == middles.len();
        let detail = format!(
            "{} settings, {} distinct, {routings} routings of the 6-cycle using middle positions {:?}",
            all.len(),
            distinct.len(),
            positions
        );
        (distinct.len(), cross_ok, cycle_ok, detail)
    });
    gate.record(
        "AC4",
        "Benes(6) realizes all 720 permutations; middle crosses equal bottom-to-top count",
        card == 720 && cross_ok && cycle_ok && el < LIMIT_AC4,
        format!("{detail}; {:.2?}", el),
    );
}

fn ac5(gate: &mut Gate, set: &[SatInstance]) {
    let mut bad4 = 0;
    let mut bad3 = 0;
    for s in set {
        let (four, _) = full_chain(s, Stage::Four).unwrap();
        bad4 += four.bases().iter().filter(|b| b.perm.support().len() > 4).count();
        let (three, _) = full_chain(s, Stage::Three).unwrap();
        bad3 += three
            .bases()
            .iter()
            .filter(|b| {
                let c = b.perm.cycles();
                !(c.len() == 1 && (c[0].len() == 2 || c[0].len() == 3))
            })
            .count();
    }
    gate.record(
        "AC5",
        "stage-four bases have support <= 4; stage-three bases are 2- or 3-cycles",
        bad4 == 0 && bad3 == 0,
        format!("{bad4} oversized stage-four bases, {bad3} non-cycle stage-three bases"),
    );
}

fn ac6(gate: &mut Gate) {
    let mut six_ok = true;
    let mut four_ok = true;
    let mut lines = Vec::new();
    for m in 1..=4 {
        let distinct = SatInstance::new(3 * m, (0..m).map(|i| [3 * i, 3 * i + 1, 3 * i + 2]).collect()).unwrap();
        let (_, r6) = full_chain(&distinct, Stage::Six).unwrap();
        let (_, r4) = full_chain(&distinct, Stage::Four).unwrap();
        let (_, r3) = full_chain(&distinct, Stage::Three).unwrap();
        six_ok &= r6.matches_claim() == Some(true);
        four_ok &= r4.matches_claim() == Some(true);
        lines.push(format!(
            "m={m} distinct: six {}/{} four {}/{} three {}/{} (claimed {:?})",
            r6.bases, r6.degree, r4.bases, r4.degree, r3.bases, r3.degree, r3.claimed().unwrap()
        ));
        if m % 2 == 0 {
            // clauses 2k and 2k+1 share their three variables
            let twice = SatInstance::new(3 * m, (0..m).map(|i| [3 * (i / 2), 3 * (i / 2) + 1, 3 * (i / 2) + 2]).collect())
                .unwrap();
            let (_, r4) = full_chain(&twice, Stage::Four).unwrap();
            let (_, r3) = full_chain(&twice, Stage::Three).unwrap();
            lines.push(format!(
                "m={m} repeated: four {}/{} three {}/{}",
                r4.bases, r4.degree, r3.bases, r3.degree
            ));
        }
    }
    gate.record(
        "AC6",
        "all-distinct inputs: six stage 15m/12m and four stage 24m/24m",
        six_ok && four_ok,
        format!(
            "six {}, four {}; {}",
            if six_ok { "matches" } else { "differs" },
            if four_ok { "matches" } else { "differs" },
            lines.join("; ")
        ),
    );
}

fn ac7(gate: &mut Gate, set: &[SatInstance]) {
    let ((agree, total, invalid, over), el) = timed(|| {
        let mut agree = 0;
        let mut total = 0;
        let mut invalid = 0;
        let mut over = 0;
        for s in set.iter().take(27 + 27 * 27) {
            let (inst, _) = full_chain(s, Stage::Three).unwrap();
            let r = gdlp3_to_routing(&inst).unwrap();
            let opts = SearchOptions::default();
            let (Ok(routed), Ok(w)) = (solve_routing(&r, &opts), decide_k1(&inst, &opts)) else {
                over += 1;
                continue;
            };
            total += 1;
            if routed.is_some() == w.is_some() {
                agree += 1;
            }
            if let Some(p) = routed {
                if !verify_routing(&r, &p).unwrap() {
                    invalid += 1;
                }
            }
        }
        (agree, total, invalid, over)
    });
    gate.record(
        "AC7",
        "stage-three routing solvable iff k=1 witness exists; every path set verifies",
        agree == total && invalid == 0 && el < LIMIT_AC7,
        format!("{agree}/{total} agree, {invalid} invalid path sets, {over} over budget, {:.2?}", el),
    );
}

fn random_perm(rng: &mut ChaCha8Rng, d: usize) -> Permutation {
    let mut map: Vec<usize> = (0..d).collect();
    map.shuffle(rng);
    Permutation::from_map(map).unwrap()
}

fn iterated(p: &Permutation, e: u64) -> Permutation {
    let mut acc = Permutation::identity(p.degree()).unwrap();
    for _ in 0..e {
        acc = acc.compose(p).unwrap();
    }
    acc
}

fn ac8(gate: &mut Gate) {
    let (fails, el) = timed(|| {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let mut fails = [0usize; 5];
        for _ in 0..ALGEBRA_CASES {
            let d = rng.random_range(1..=12);
            let (a, b, c) = (random_perm(&mut rng, d), random_perm(&mut rng, d), random_perm(&mut rng, d));
            let id = Permutation::identity(d).unwrap();
            let ab_c = a.compose(&b).unwrap().compose(&c).unwrap();
            let a_bc = a.compose(&b.compose(&c).unwrap()).unwrap();
            fails[0] += usize::from(ab_c != a_bc);
            let inv = a.inverse();
            fails[1] += usize::from(a.compose(&inv).unwrap() != id || inv.compose(&a).unwrap() != id);
            let e = rng.random_range(0..40);
            fails[2] += usize::from(a.power(e) != iterated(&a, e));
            let back = Permutation::parse_cycles(&a.format_cycles(), d).unwrap();
            fails[3] += usize::from(back != a);
            // step forward until the identity comes back
            let mut k = 1;
            let mut acc = a.clone();
            while !acc.is_identity() {
                acc = acc.compose(&a).unwrap();
                k += 1;
            }
            fails[4] += usize::from(a.order() != k);
        }
        fails
    });
    gate.record(
        "AC8",
        "associativity, inverse, power, cycle round-trip, order minimality",
        fails.iter().all(|&f| f == 0) && el < LIMIT_AC8,
        format!("{ALGEBRA_CASES} cases each, failures {fails:?}, {:.2?}", el),
    );
}

#[test]
fn acceptance() {
    let set = instance_set();
    let sat: Vec<bool> = set.iter().map(|s| brute_force_sat(s).unwrap().is_some()).collect();
    let mut gate = Gate { unexpected: Vec::new() };
    let _ = writeln!(std::io::stdout().lock());
    ac1(&mut gate, &set, &sat);
    ac2(&mut gate, &set, &sat);
    ac3(&mut gate);
    ac4(&mut gate);
    ac5(&mut gate, &set);
    ac6(&mut gate);
    ac7(&mut gate, &set);
    ac8(&mut gate);
    assert!(gate.unexpected.is_empty(), "unexpected outcomes: {:?}", gate.unexpected);
}
