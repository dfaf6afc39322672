//! Complementary Benes networks of 2-by-2 switches.
//!
//! An `h`-wire network splits its wires into a top half of `⌈h/2⌉` and a
//! bottom half of `⌊h/2⌋`. Recursive sub-networks permute each half on the
//! left, a middle column of switches pairs top wire `⌈h/2⌉-⌊h/2⌋+t` with
//! bottom wire `⌈h/2⌉+t`, and a second pair of sub-networks permutes each
//! half on the right. For odd `h` the top wire of the top half has no
//! middle partner and only passes through the sub-networks.
//!
//! Switches are numbered in topological order: left top sub-network, left
//! bottom sub-network, middle column top to bottom, right top, right
//! bottom. For `h = 6` this gives
//! `(0 1) (1 2) (0 1) (3 4) (4 5) (3 4) (0 3) (1 4) (2 5) (0 1) (1 2) (0 1) (3 4) (4 5) (3 4)`.
//!
//! Middle switches only exchange wires between the halves and the
//! sub-networks never do, so the number of crossed top-level middle
//! switches equals the number of bottom-half inputs routed to the top half.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::instance::CircuitInstance;
use crate::perm::Permutation;

/// Largest switch count `enumerate_realizable` accepts.
pub const ENUMERATION_MAX_SWITCHES: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Switch {
    pub top: usize,
    pub bottom: usize,
    /// Recursion depth of the sub-network that owns this switch.
    pub depth: usize,
    /// Part of that sub-network's middle column.
    pub middle: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BenesNetwork {
    size: usize,
    switches: Vec<Switch>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Settings {
    bits: Vec<bool>,
}

impl Settings {
    pub fn new(bits: Vec<bool>) -> Self {
        Settings { bits }
    }

    pub fn parallel(len: usize) -> Self {
        Settings {
            bits: vec![false; len],
        }
    }

    /// Bit `i` of `word` is switch `i`.
    pub fn from_word(word: u64, len: usize) -> Self {
        Settings {
            bits: (0..len).map(|i| word >> i & 1 == 1).collect(),
        }
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn to_text(&self) -> String {
        self.bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
    }
}

/// Number of switches in an `h`-wire network.
pub fn switch_count(h: usize) -> usize {
    if h <= 1 {
        return 0;
    }
    let (a, b) = halves(h);
    2 * (switch_count(a) + switch_count(b)) + b
}

fn halves(h: usize) -> (usize, usize) {
    (h.div_ceil(2), h / 2)
}

impl BenesNetwork {
    pub fn build(h: usize) -> Result<Self> {
        if h == 0 {
            return Err(Error::ZeroDegree);
        }
        let mut switches = Vec::with_capacity(switch_count(h));
        lay_out(0, h, 0, &mut switches);
        debug_assert_eq!(switches.len(), switch_count(h));
        Ok(BenesNetwork { size: h, switches })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn switches(&self) -> &[Switch] {
        &self.switches
    }

    pub fn switch_count(&self) -> usize {
        self.switches.len()
    }

    /// Indices of the top-level middle column.
    pub fn middle_switches(&self) -> Vec<usize> {
        (0..self.switches.len())
            .filter(|&i| self.switches[i].depth == 0 && self.switches[i].middle)
            .collect()
    }

    /// The switch list as a circuit, in topological order.
    pub fn to_circuit(&self) -> Result<CircuitInstance> {
        CircuitInstance::new(
            self.size,
            self.switches.iter().map(|s| (s.top, s.bottom)).collect(),
        )
    }

    fn check(&self, s: &Settings) -> Result<()> {
        if s.len() != self.switches.len() {
            return Err(Error::LengthMismatch {
                expected: self.switches.len(),
                actual: s.len(),
            });
        }
        Ok(())
    }

    /// Input-to-output permutation of the configured network.
    pub fn realize(&self, s: &Settings) -> Result<Permutation> {
        self.check(s)?;
        Ok(self.realize_range(0..self.switches.len(), s.bits()))
    }

    fn realize_range(&self, range: std::ops::Range<usize>, bits: &[bool]) -> Permutation {
        // wire -> element currently on it
        let mut on: Vec<usize> = (0..self.size).collect();
        for i in range {
            if bits[i] {
                let sw = self.switches[i];
                on.swap(sw.top, sw.bottom);
            }
        }
        let mut map = vec![0; self.size];
        for (w, &e) in on.iter().enumerate() {
            map[e] = w;
        }
        Permutation::from_map(map).expect("switch swaps keep a bijection")
    }

    /// Permutations of the left sub-networks, the middle column, and the
    /// right sub-networks; their left-to-right product is `realize`.
    pub fn stage_permutations(&self, s: &Settings) -> Result<[Permutation; 3]> {
        self.check(s)?;
        let mid = self.middle_switches();
        let (lo, hi) = match (mid.first(), mid.last()) {
            (Some(&lo), Some(&hi)) => (lo, hi + 1),
            _ => (0, 0),
        };
        Ok([
            self.realize_range(0..lo, s.bits()),
            self.realize_range(lo..hi, s.bits()),
            self.realize_range(hi..self.switches.len(), s.bits()),
        ])
    }

    /// Settings realizing `target`.
    ///
    /// The bottom-to-top inputs (ascending) are sent to the lowest middle
    /// positions (ascending), the top-to-bottom inputs likewise; every other
    /// input keeps its order among the remaining positions. Sub-networks are
    /// routed recursively with the same rule.
    pub fn route(&self, target: &Permutation) -> Result<Settings> {
        if target.degree() != self.size {
            return Err(Error::DegreeMismatch {
                left: target.degree(),
                right: self.size,
            });
        }
        let mut bits = vec![false; self.switches.len()];
        route_into(0, target.map(), &mut bits);
        let s = Settings { bits };
        debug_assert_eq!(self.realize(&s).as_ref(), Ok(target));
        Ok(s)
    }

    /// Crossed switches in the top-level middle column.
    pub fn middle_cross_count(&self, s: &Settings) -> Result<usize> {
        self.check(s)?;
        Ok(self.middle_switches().into_iter().filter(|&i| s.bits[i]).count())
    }

    /// Every settings vector with its realized permutation, in counting order.
    pub fn all_realizations(&self) -> Result<Vec<(Settings, Permutation)>> {
        let n = self.switches.len();
        if n > ENUMERATION_MAX_SWITCHES {
            return Err(Error::BudgetExceeded {
                budget: 1 << ENUMERATION_MAX_SWITCHES,
            });
        }
        Ok((0..1u64 << n)
            .map(|w| {
                let s = Settings::from_word(w, n);
                let p = self.realize_range(0..n, s.bits());
                (s, p)
            })
            .collect())
    }

    pub fn enumerate_realizable(&self) -> Result<BTreeSet<Permutation>> {
        Ok(self.all_realizations()?.into_iter().map(|(_, p)| p).collect())
    }
}

fn lay_out(offset: usize, h: usize, depth: usize, out: &mut Vec<Switch>) {
    if h <= 1 {
        return;
    }
    let (a, b) = halves(h);
    lay_out(offset, a, depth + 1, out);
    lay_out(offset + a, b, depth + 1, out);
    for t in 0..b {
        out.push(Switch {
            top: offset + a - b + t,
            bottom: offset + a + t,
            depth,
            middle: true,
        });
    }
    lay_out(offset, a, depth + 1, out);
    lay_out(offset + a, b, depth + 1, out);
}

/// Routes the local permutation `pi` on `pi.len()` wires, writing bits
/// starting at `base` in the same order `lay_out` emits switches.
fn route_into(base: usize, pi: &[usize], bits: &mut [bool]) {
    let h = pi.len();
    if h <= 1 {
        return;
    }
    let (a, b) = halves(h);
    let down: Vec<usize> = (0..a).filter(|&i| pi[i] >= a).collect();
    let up: Vec<usize> = (a..h).filter(|&i| pi[i] < a).collect();
    let c = down.len();
    debug_assert_eq!(c, up.len());

    // left sub-networks: local input -> local middle-column position
    let mut left_top = vec![usize::MAX; a];
    for (k, &i) in down.iter().enumerate() {
        left_top[i] = a - b + k;
    }
    let crossed_top: Vec<usize> = (0..c).map(|k| a - b + k).collect();
    let mut free = (0..a).filter(|x| !crossed_top.contains(x));
    for slot in left_top.iter_mut().filter(|s| **s == usize::MAX) {
        *slot = free.next().expect("counts match");
    }
    let mut left_bottom = vec![usize::MAX; b];
    for (k, &i) in up.iter().enumerate() {
        left_bottom[i - a] = k;
    }
    let mut free = c..b;
    for slot in left_bottom.iter_mut().filter(|s| **s == usize::MAX) {
        *slot = free.next().expect("counts match");
    }

    // where each input sits after the middle column, in network coordinates
    let mut after_mid = vec![0; h];
    for i in 0..a {
        let x = left_top[i];
        after_mid[i] = if x >= a - b && x - (a - b) < c { a + (x - (a - b)) } else { x };
    }
    for i in a..h {
        let y = left_bottom[i - a];
        after_mid[i] = if y < c { a - b + y } else { a + y };
    }
    let mut right_top = vec![0; a];
    let mut right_bottom = vec![0; b];
    for i in 0..h {
        let x = after_mid[i];
        if x < a {
            right_top[x] = pi[i];
        } else {
            right_bottom[x - a] = pi[i] - a;
        }
    }

    let (ca, cb) = (switch_count(a), switch_count(b));
    route_into(base, &left_top, bits);
    route_into(base + ca, &left_bottom, bits);
    let mid = base + ca + cb;
    for t in 0..c {
        bits[mid + t] = true;
    }
    route_into(mid + b, &right_top, bits);
    route_into(mid + b + ca, &right_bottom, bits);
}

/// Inputs in the bottom half (`i >= ⌈h/2⌉`) sent to the top half.
pub fn bottom_to_top_count(target: &Permutation) -> usize {
    let a = target.degree().div_ceil(2);
    (a..target.degree()).filter(|&i| target.apply(i) < a).count()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(t: &str, d: usize) -> Permutation {
        Permutation::parse_cycles(t, d).unwrap()
    }

    #[test]
    fn small_networks() {
        assert_eq!(BenesNetwork::build(1).unwrap().switch_count(), 0);
        assert_eq!(BenesNetwork::build(2).unwrap().switch_count(), 1);
        assert_eq!(BenesNetwork::build(3).unwrap().switch_count(), 3);
        assert_eq!(BenesNetwork::build(6).unwrap().switch_count(), 15);
        assert!(BenesNetwork::build(0).is_err());
    }

    #[test]
    fn six_wire_layout() {
        let net = BenesNetwork::build(6).unwrap();
        let pairs: Vec<(usize, usize)> = net.switches().iter().map(|s| (s.top, s.bottom)).collect();
        let block = [(0, 1), (1, 2), (0, 1), (3, 4), (4, 5), (3, 4)];
        assert_eq!(&pairs[..6], &block);
        assert_eq!(&pairs[6..9], &[(0, 3), (1, 4), (2, 5)]);
        assert_eq!(&pairs[9..], &block);
        assert_eq!(net.middle_switches(), vec![6, 7, 8]);
    }

    #[test]
    fn odd_wire_bypass() {
        let net = BenesNetwork::build(3).unwrap();
        let pairs: Vec<(usize, usize)> = net.switches().iter().map(|s| (s.top, s.bottom)).collect();
        assert_eq!(pairs, vec![(0, 1), (1, 2), (0, 1)]);
        let net = BenesNetwork::build(5).unwrap();
        let mid: Vec<(usize, usize)> = net
            .middle_switches()
            .into_iter()
            .map(|i| (net.switches()[i].top, net.switches()[i].bottom))
            .collect();
        assert_eq!(mid, vec![(1, 3), (2, 4)]);
    }

    #[test]
    fn realize_examples() {
        let net = BenesNetwork::build(6).unwrap();
        assert!(net.realize(&Settings::parallel(15)).unwrap().is_identity());
        let two = BenesNetwork::build(2).unwrap();
        assert_eq!(two.realize(&Settings::new(vec![true])).unwrap(), p("(0 1)", 2));
        let mut bits = vec![false; 15];
        bits[6] = true;
        assert_eq!(net.realize(&Settings::new(bits)).unwrap(), p("(0 3)", 6));
        assert!(net.realize(&Settings::parallel(3)).is_err());
    }

    #[test]
    fn route_examples() {
        let net = BenesNetwork::build(6).unwrap();
        let id = net.route(&Permutation::identity(6).unwrap()).unwrap();
        assert_eq!(id, Settings::parallel(15));
        assert_eq!(net.middle_cross_count(&id).unwrap(), 0);
        let c6 = p("(0 1 2 3 4 5)", 6);
        let s = net.route(&c6).unwrap();
        assert_eq!(net.realize(&s).unwrap(), c6);
        assert_eq!(net.middle_cross_count(&s).unwrap(), 1);
    }

    #[test]
    fn route_every_small_permutation() {
        for h in 1..=6 {
            let net = BenesNetwork::build(h).unwrap();
            let all = net.enumerate_realizable().unwrap();
            let fact: usize = (1..=h).product();
            assert_eq!(all.len(), fact, "h = {h}");
            for q in &all {
                let s = net.route(q).unwrap();
                assert_eq!(&net.realize(&s).unwrap(), q);
                assert_eq!(net.middle_cross_count(&s).unwrap(), bottom_to_top_count(q));
            }
        }
    }

    #[test]
    fn route_larger_networks() {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for h in [7, 8, 11, 16, 33] {
            let net = BenesNetwork::build(h).unwrap();
            for _ in 0..50 {
                let mut m: Vec<usize> = (0..h).collect();
                m.shuffle(&mut rng);
                let q = Permutation::from_map(m).unwrap();
                let s = net.route(&q).unwrap();
                assert_eq!(net.realize(&s).unwrap(), q);
                assert_eq!(net.middle_cross_count(&s).unwrap(), bottom_to_top_count(&q));
            }
        }
    }

    #[test]
    fn bottom_to_top_examples() {
        assert_eq!(bottom_to_top_count(&Permutation::identity(6).unwrap()), 0);
        assert_eq!(bottom_to_top_count(&p("(0 1 2 3 4 5)", 6)), 1);
        assert_eq!(bottom_to_top_count(&p("(0 3)(1 4)(2 5)", 6)), 3);
    }

    #[test]
    fn enumeration_examples() {
        let two = BenesNetwork::build(2).unwrap().enumerate_realizable().unwrap();
        assert_eq!(two.into_iter().collect::<Vec<_>>(), vec![p("()", 2), p("(0 1)", 2)]);
        assert_eq!(BenesNetwork::build(3).unwrap().enumerate_realizable().unwrap().len(), 6);
        assert!(BenesNetwork::build(9).unwrap().enumerate_realizable().is_err());
    }

    #[test]
    fn stages_compose_to_realization() {
        let net = BenesNetwork::build(6).unwrap();
        for (s, q) in net.all_realizations().unwrap().into_iter().step_by(97) {
            let [l, m, r] = net.stage_permutations(&s).unwrap();
            assert_eq!(l.compose(&m).unwrap().compose(&r).unwrap(), q);
        }
    }

    #[test]
    fn cross_count_law_spot_checks() {
        for h in [4, 5] {
            let net = BenesNetwork::build(h).unwrap();
            for (s, q) in net.all_realizations().unwrap() {
                assert_eq!(net.middle_cross_count(&s).unwrap(), bottom_to_top_count(&q));
            }
        }
    }
}
