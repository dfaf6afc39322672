//! Exhaustive search for one choice per step whose left-to-right product
//! equals a target permutation.
//!
//! A step is a list of candidate permutations (for a GDLP base these are
//! its powers `α^0 .. α^(ord-1)`, for a routing layer its disjoint path
//! bundles). The search walks steps depth-first, trying options in index
//! order, so the first hit is the lexicographically smallest choice vector.
//!
//! With pruning enabled three sound reductions are applied:
//!
//! * orbit check: after step `j`, the element sitting on wire `x` must be
//!   able to reach its target wire using only steps `j+1..`, i.e. both wires
//!   lie in one connected component of the union of later supports. Wires no
//!   later step touches form singleton components, so this contains the
//!   plain fixed-points check;
//! * dead-state memo: states (restricted to wires later steps touch) that
//!   were already fully explored without success at the same depth are
//!   skipped;
//! * segment compression: a run of contiguous steps that is the only place
//!   some target-fixed wires are touched is replaced by the list of distinct
//!   products it can realize while returning those wires home. Each product
//!   keeps the lexicographically smallest choice vector producing it.

use rustc_hash::{FxHashMap, FxHashSet};

use crate::error::{Error, Result};
use crate::perm::Permutation;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchOptions {
    /// Orbit pruning, dead-state memo and segment compression. Off means the
    /// plain enumeration of every choice vector.
    pub prune: bool,
    pub compress: bool,
    /// Maximum number of remembered dead states.
    pub memo_capacity: usize,
    /// Maximum number of option applications before giving up.
    pub budget: u64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            prune: true,
            compress: true,
            memo_capacity: 1 << 20,
            budget: 1 << 26,
        }
    }
}

impl SearchOptions {
    /// The unpruned oracle configuration.
    pub fn naive() -> Self {
        SearchOptions {
            prune: false,
            compress: false,
            ..Self::default()
        }
    }

    pub fn with_budget(mut self, budget: u64) -> Self {
        self.budget = budget;
        self
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub nodes: u64,
    pub memo_hits: u64,
    pub segments: usize,
}

/// Sparse action of one option on wires: content of wire `from` moves to
/// wire `to`.
#[derive(Debug, Clone)]
struct Move {
    from: Vec<u32>,
    to: Vec<u32>,
}

impl Move {
    fn of(p: &Permutation) -> Move {
        let from: Vec<u32> = p.support().into_iter().map(|x| x as u32).collect();
        let to = from.iter().map(|&x| p.apply(x as usize) as u32).collect();
        Move { from, to }
    }

    fn of_map(map: &[u32]) -> Move {
        let from: Vec<u32> = (0..map.len() as u32).filter(|&x| map[x as usize] != x).collect();
        let to = from.iter().map(|&x| map[x as usize]).collect();
        Move { from, to }
    }

    #[inline]
    fn apply(&self, state: &mut [u32], scratch: &mut Vec<u32>) {
        scratch.clear();
        scratch.extend(self.from.iter().map(|&x| state[x as usize]));
        for (k, &t) in self.to.iter().enumerate() {
            state[t as usize] = scratch[k];
        }
    }

    #[inline]
    fn undo(&self, state: &mut [u32], scratch: &mut Vec<u32>) {
        scratch.clear();
        scratch.extend(self.to.iter().map(|&x| state[x as usize]));
        for (k, &f) in self.from.iter().enumerate() {
            state[f as usize] = scratch[k];
        }
    }
}

#[derive(Debug, Clone)]
struct Item {
    /// First original step covered.
    start: usize,
    /// Number of original steps covered.
    span: usize,
    support: Vec<u32>,
    options: Vec<Move>,
    /// Choice vector per option over the covered original steps; `None`
    /// for a single original step, whose choice is the option index.
    reprs: Option<Vec<Vec<usize>>>,
}

impl Item {
    fn expand(&self, option: usize, out: &mut Vec<usize>) {
        match &self.reprs {
            None => out.push(option),
            Some(r) => out.extend_from_slice(&r[option]),
        }
    }
}

struct Budget {
    limit: u64,
    stats: SearchStats,
}

impl Budget {
    #[inline]
    fn tick(&mut self) -> Result<()> {
        self.stats.nodes += 1;
        if self.stats.nodes > self.limit {
            Err(Error::BudgetExceeded { budget: self.limit })
        } else {
            Ok(())
        }
    }
}

/// Finds the lexicographically smallest choice vector `c` with
/// `steps[0][c[0]] · steps[1][c[1]] ⋯ = target` (left factor first).
pub fn find_choices(
    steps: &[Vec<Permutation>],
    target: &Permutation,
    opts: &SearchOptions,
) -> Result<Option<Vec<usize>>> {
    search_with_stats(steps, target, opts).map(|(c, _)| c)
}

pub fn search_with_stats(
    steps: &[Vec<Permutation>],
    target: &Permutation,
    opts: &SearchOptions,
) -> Result<(Option<Vec<usize>>, SearchStats)> {
    let degree = target.degree();
    for step in steps {
        if step.is_empty() {
            return Ok((None, SearchStats::default()));
        }
        for p in step {
            if p.degree() != degree {
                return Err(Error::DegreeMismatch {
                    left: p.degree(),
                    right: degree,
                });
            }
        }
    }
    let mut budget = Budget {
        limit: opts.budget,
        stats: SearchStats::default(),
    };
    let tgt: Vec<u32> = target.map().iter().map(|&v| v as u32).collect();
    let plain: Vec<Item> = steps
        .iter()
        .enumerate()
        .map(|(j, opts)| plain_item(j, opts))
        .collect();

    let items = if opts.prune && opts.compress {
        let (items, segments) = compress(plain, &tgt, &mut budget)?;
        budget.stats.segments = segments;
        items
    } else {
        plain
    };

    let found = if opts.prune {
        let mut dfs = PrunedDfs::new(&items, &tgt, opts.memo_capacity);
        dfs.run(&mut budget)?
    } else {
        naive_dfs(&items, &tgt, &mut budget)?
    };
    let choices = found.map(|chosen| {
        let mut out = Vec::with_capacity(steps.len());
        for (item, &o) in items.iter().zip(&chosen) {
            item.expand(o, &mut out);
        }
        out
    });
    Ok((choices, budget.stats))
}

fn plain_item(j: usize, options: &[Permutation]) -> Item {
    let moves: Vec<Move> = options.iter().map(Move::of).collect();
    Item {
        start: j,
        span: 1,
        support: union_support(&moves),
        options: moves,
        reprs: None,
    }
}

fn union_support(moves: &[Move]) -> Vec<u32> {
    let mut s: Vec<u32> = moves.iter().flat_map(|m| m.from.iter().copied()).collect();
    s.sort_unstable();
    s.dedup();
    s
}

fn matches_target(state: &[u32], tgt: &[u32]) -> bool {
    state
        .iter()
        .enumerate()
        .all(|(x, &e)| tgt[e as usize] as usize == x)
}

fn naive_dfs(items: &[Item], tgt: &[u32], budget: &mut Budget) -> Result<Option<Vec<usize>>> {
    fn go(
        depth: usize,
        items: &[Item],
        tgt: &[u32],
        state: &mut [u32],
        chosen: &mut Vec<usize>,
        scratch: &mut Vec<u32>,
        budget: &mut Budget,
    ) -> Result<bool> {
        if depth == items.len() {
            return Ok(matches_target(state, tgt));
        }
        for (o, mv) in items[depth].options.iter().enumerate() {
            budget.tick()?;
            mv.apply(state, scratch);
            chosen.push(o);
            if go(depth + 1, items, tgt, state, chosen, scratch, budget)? {
                return Ok(true);
            }
            chosen.pop();
            mv.undo(state, scratch);
        }
        Ok(false)
    }
    let mut state: Vec<u32> = (0..tgt.len() as u32).collect();
    let mut chosen = Vec::new();
    let mut scratch = Vec::new();
    if go(0, items, tgt, &mut state, &mut chosen, &mut scratch, budget)? {
        Ok(Some(chosen))
    } else {
        Ok(None)
    }
}

struct PrunedDfs<'a> {
    items: &'a [Item],
    tgt: &'a [u32],
    /// `comp[j][x]`: component of wire `x` under items `j..`.
    comp: Vec<Vec<u32>>,
    /// Wires to re-check after applying item `j`.
    check: Vec<Vec<u32>>,
    /// Wires touched by items `j..`.
    live: Vec<Vec<u32>>,
    memo: Vec<FxHashSet<Box<[u32]>>>,
    memo_len: usize,
    memo_capacity: usize,
}

impl<'a> PrunedDfs<'a> {
    fn new(items: &'a [Item], tgt: &'a [u32], memo_capacity: usize) -> Self {
        let d = tgt.len();
        let q = items.len();
        let mut parent: Vec<usize> = (0..d).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        let mut comp = vec![Vec::new(); q + 1];
        let mut sizes = vec![Vec::new(); q + 1];
        let snapshot = |parent: &mut Vec<usize>| {
            let labels: Vec<u32> = (0..d).map(|x| find(parent, x) as u32).collect();
            let mut count = vec![0u32; d];
            for &l in &labels {
                count[l as usize] += 1;
            }
            let size: Vec<u32> = labels.iter().map(|&l| count[l as usize]).collect();
            (labels, size)
        };
        let (l, s) = snapshot(&mut parent);
        comp[q] = l;
        sizes[q] = s;
        for j in (0..q).rev() {
            for mv in &items[j].options {
                for (&f, &t) in mv.from.iter().zip(&mv.to) {
                    let a = find(&mut parent, f as usize);
                    let b = find(&mut parent, t as usize);
                    if a != b {
                        parent[a] = b;
                    }
                }
            }
            let (l, s) = snapshot(&mut parent);
            comp[j] = l;
            sizes[j] = s;
        }
        let check = (0..q)
            .map(|j| {
                let mut c: Vec<u32> = items[j].support.clone();
                c.extend((0..d as u32).filter(|&x| sizes[j + 1][x as usize] < sizes[j][x as usize]));
                c.sort_unstable();
                c.dedup();
                c
            })
            .collect();
        let mut live = vec![Vec::new(); q + 1];
        let mut touched = vec![false; d];
        for j in (0..q).rev() {
            for &x in &items[j].support {
                touched[x as usize] = true;
            }
            live[j] = (0..d as u32).filter(|&x| touched[x as usize]).collect();
        }
        PrunedDfs {
            items,
            tgt,
            comp,
            check,
            live,
            memo: vec![FxHashSet::default(); q + 1],
            memo_len: 0,
            memo_capacity,
        }
    }

    #[inline]
    fn reachable(&self, depth: usize, state: &[u32], wires: &[u32]) -> bool {
        let comp = &self.comp[depth];
        wires.iter().all(|&x| {
            let dest = self.tgt[state[x as usize] as usize];
            comp[x as usize] == comp[dest as usize]
        })
    }

    fn run(&mut self, budget: &mut Budget) -> Result<Option<Vec<usize>>> {
        let d = self.tgt.len();
        let mut state: Vec<u32> = (0..d as u32).collect();
        let all: Vec<u32> = (0..d as u32).collect();
        if !self.reachable(0, &state, &all) {
            return Ok(None);
        }
        let mut chosen = Vec::with_capacity(self.items.len());
        let mut scratch = Vec::new();
        if self.go(0, &mut state, &mut chosen, &mut scratch, budget)? {
            Ok(Some(chosen))
        } else {
            Ok(None)
        }
    }

    fn go(
        &mut self,
        depth: usize,
        state: &mut [u32],
        chosen: &mut Vec<usize>,
        scratch: &mut Vec<u32>,
        budget: &mut Budget,
    ) -> Result<bool> {
        let items = self.items;
        if depth == items.len() {
            return Ok(matches_target(state, self.tgt));
        }
        let key: Option<Box<[u32]>> = if self.memo_capacity > 0 && !self.live[depth].is_empty() {
            let k: Box<[u32]> = self.live[depth].iter().map(|&x| state[x as usize]).collect();
            if self.memo[depth].contains(&k) {
                budget.stats.memo_hits += 1;
                return Ok(false);
            }
            Some(k)
        } else {
            None
        };
        for (o, mv) in items[depth].options.iter().enumerate() {
            budget.tick()?;
            mv.apply(state, scratch);
            if self.reachable(depth + 1, state, &self.check[depth]) {
                chosen.push(o);
                if self.go(depth + 1, state, chosen, scratch, budget)? {
                    return Ok(true);
                }
                chosen.pop();
            }
            mv.undo(state, scratch);
        }
        if let Some(k) = key {
            if self.memo_len < self.memo_capacity {
                self.memo[depth].insert(k);
                self.memo_len += 1;
            }
        }
        Ok(false)
    }
}

/// Replaces runs of steps that privately own target-fixed wires by macro
/// items. Returns the new item list and the number of macros built.
fn compress(plain: Vec<Item>, tgt: &[u32], budget: &mut Budget) -> Result<(Vec<Item>, usize)> {
    let d = tgt.len();
    let mut first = vec![usize::MAX; d];
    let mut last = vec![0usize; d];
    for (j, item) in plain.iter().enumerate() {
        for &x in &item.support {
            let x = x as usize;
            if first[x] == usize::MAX {
                first[x] = j;
            }
            last[x] = j;
        }
    }
    let private: Vec<usize> = (0..d)
        .filter(|&x| first[x] != usize::MAX && tgt[x] as usize == x)
        .collect();
    if private.is_empty() {
        return Ok((plain, 0));
    }

    // Laminar family: merge crossing intervals until none cross.
    let mut intervals: Vec<(usize, usize)> = private.iter().map(|&x| (first[x], last[x])).collect();
    loop {
        intervals.sort_unstable_by(|a, b| a.0.cmp(&b.0).then(b.1.cmp(&a.1)));
        intervals.dedup();
        let mut merged = false;
        'outer: for i in 0..intervals.len() {
            for k in i + 1..intervals.len() {
                let (a0, a1) = intervals[i];
                let (b0, b1) = intervals[k];
                if b0 > a1 {
                    break;
                }
                // b0 >= a0 by sorting; crossing when b starts inside a and ends outside
                if b1 > a1 {
                    intervals[i] = (a0, b1);
                    intervals.swap_remove(k);
                    merged = true;
                    break 'outer;
                }
            }
        }
        if !merged {
            break;
        }
    }
    intervals.sort_unstable_by(|a, b| a.0.cmp(&b.0).then(b.1.cmp(&a.1)));

    // Nest into a forest; children lists in order.
    #[derive(Debug)]
    struct Node {
        lo: usize,
        hi: usize,
        children: Vec<usize>,
    }
    let mut nodes: Vec<Node> = Vec::new();
    let mut roots = Vec::new();
    let mut stack: Vec<usize> = Vec::new();
    for &(lo, hi) in &intervals {
        while let Some(&top) = stack.last() {
            if nodes[top].hi < lo {
                stack.pop();
            } else {
                break;
            }
        }
        let id = nodes.len();
        nodes.push(Node {
            lo,
            hi,
            children: Vec::new(),
        });
        match stack.last() {
            Some(&p) => nodes[p].children.push(id),
            None => roots.push(id),
        }
        stack.push(id);
    }

    let mut plain: Vec<Option<Item>> = plain.into_iter().map(Some).collect();
    let mut built = 0;

    #[allow(clippy::too_many_arguments)]
    fn build(
        id: usize,
        nodes: &[Node],
        plain: &mut [Option<Item>],
        first: &[usize],
        last: &[usize],
        tgt: &[u32],
        budget: &mut Budget,
        built: &mut usize,
    ) -> Result<Item> {
        let (lo, hi) = (nodes[id].lo, nodes[id].hi);
        let mut members: Vec<Item> = Vec::new();
        let mut j = lo;
        let mut kids = nodes[id].children.iter().peekable();
        while j <= hi {
            if let Some(&&c) = kids.peek() {
                if nodes[c].lo == j {
                    kids.next();
                    members.push(build(c, nodes, plain, first, last, tgt, budget, built)?);
                    j = nodes[c].hi + 1;
                    continue;
                }
            }
            members.push(plain[j].take().expect("each step used once"));
            j += 1;
        }
        *built += 1;
        enumerate_segment(lo, hi, members, first, last, tgt, budget)
    }

    let mut out = Vec::new();
    let mut roots_iter = roots.iter().peekable();
    let mut j = 0;
    let q = plain.len();
    while j < q {
        if let Some(&&r) = roots_iter.peek() {
            if nodes[r].lo == j {
                roots_iter.next();
                out.push(build(r, &nodes, &mut plain, &first, &last, tgt, budget, &mut built)?);
                j = nodes[r].hi + 1;
                continue;
            }
        }
        out.push(plain[j].take().expect("each step used once"));
        j += 1;
    }
    Ok((out, built))
}

/// Distinct products of `members` (covering original steps `lo..=hi`) that
/// return every privately owned target-fixed wire to itself.
fn enumerate_segment(
    lo: usize,
    hi: usize,
    members: Vec<Item>,
    first: &[usize],
    last: &[usize],
    tgt: &[u32],
    budget: &mut Budget,
) -> Result<Item> {
    let d = tgt.len();
    // wires frozen once member `k` has been applied
    let mut frozen_after: Vec<Vec<u32>> = vec![Vec::new(); members.len()];
    let member_of = |j: usize| members.iter().position(|m| m.start <= j && j < m.start + m.span);
    for x in 0..d {
        if first[x] != usize::MAX && first[x] >= lo && last[x] <= hi && tgt[x] as usize == x {
            let k = member_of(last[x]).expect("inside segment");
            frozen_after[k].push(x as u32);
        }
    }

    struct Ctx<'a> {
        members: &'a [Item],
        frozen_after: &'a [Vec<u32>],
        seen: FxHashMap<Vec<u32>, usize>,
        outcomes: Vec<Move>,
        reprs: Vec<Vec<usize>>,
        chosen: Vec<usize>,
        scratch: Vec<u32>,
    }

    fn go(ctx: &mut Ctx<'_>, k: usize, state: &mut [u32], budget: &mut Budget) -> Result<()> {
        if k == ctx.members.len() {
            // state[y] = element on wire y; the action sends state[y] to y
            let mut action = vec![0u32; state.len()];
            for (y, &e) in state.iter().enumerate() {
                action[e as usize] = y as u32;
            }
            if !ctx.seen.contains_key(&action) {
                let mut repr = Vec::new();
                for (m, &o) in ctx.members.iter().zip(&ctx.chosen) {
                    m.expand(o, &mut repr);
                }
                ctx.outcomes.push(Move::of_map(&action));
                ctx.reprs.push(repr);
                ctx.seen.insert(action, ctx.outcomes.len() - 1);
            }
            return Ok(());
        }
        let members = ctx.members;
        for (o, mv) in members[k].options.iter().enumerate() {
            budget.tick()?;
            let mut scratch = std::mem::take(&mut ctx.scratch);
            mv.apply(state, &mut scratch);
            if ctx.frozen_after[k].iter().all(|&x| state[x as usize] == x) {
                ctx.chosen.push(o);
                ctx.scratch = scratch;
                go(ctx, k + 1, state, budget)?;
                scratch = std::mem::take(&mut ctx.scratch);
                ctx.chosen.pop();
            }
            mv.undo(state, &mut scratch);
            ctx.scratch = scratch;
        }
        Ok(())
    }

    let mut ctx = Ctx {
        members: &members,
        frozen_after: &frozen_after,
        seen: FxHashMap::default(),
        outcomes: Vec::new(),
        reprs: Vec::new(),
        chosen: Vec::new(),
        scratch: Vec::new(),
    };
    let mut state: Vec<u32> = (0..d as u32).collect();
    go(&mut ctx, 0, &mut state, budget)?;
    let Ctx { outcomes, reprs, .. } = ctx;
    Ok(Item {
        start: lo,
        span: hi - lo + 1,
        support: union_support(&outcomes),
        options: outcomes,
        reprs: Some(reprs),
    })
}
