//! Vertex-disjoint path routing on layered DAGs, and the compilation of
//! 3-GDLP instances into it.
//!
//! Vertices are numbered boundary 0, then for each layer its interior
//! vertices followed by the next boundary. Boundary `k` holds one vertex per
//! wire. A 2-cycle layer is `K_{2,2}` on its two wires; a 3-cycle
//! `(a b c)` layer has interior vertices `m_a, m_b, m_c` with a first column
//! of straight and shift-by-one edges and a second column of straight and
//! shift-by-two edges. Every other wire crosses the layer on a single edge.
//!
//! Text format: `route v1 <V> <E> <T> <L>`, then `E` lines `<from> <to>`,
//! `T` lines `terminal <src> <dst>` and `L` lines `layer <first> <last>`.

use std::fmt;

use rustc_hash::FxHashSet;

use crate::error::{Error, Result};
use crate::instance::GdlpInstance;
use crate::perm::Permutation;
use crate::search::{find_choices, SearchOptions};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoutingInstance {
    vertices: usize,
    edges: Vec<(usize, usize)>,
    terminals: Vec<(usize, usize)>,
    layers: Vec<(usize, usize)>,
    out: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathSet {
    pub paths: Vec<Vec<usize>>,
}

impl PathSet {
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for p in &self.paths {
            let cells: Vec<String> = p.iter().map(usize::to_string).collect();
            s.push_str(&cells.join(" "));
            s.push('\n');
        }
        s
    }

    pub fn parse(text: &str) -> Result<Self> {
        let paths = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty())
            .enumerate()
            .map(|(i, l)| {
                l.split_whitespace()
                    .map(|t| {
                        t.parse::<usize>().map_err(|_| Error::Format {
                            line: i + 1,
                            reason: format!("bad vertex '{t}'"),
                        })
                    })
                    .collect()
            })
            .collect::<Result<_>>()?;
        Ok(PathSet { paths })
    }
}

/// One way of crossing a layer: a path per input wire and the wire
/// permutation it realizes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Linkage {
    pub paths: Vec<Vec<usize>>,
    pub perm: Permutation,
}

impl RoutingInstance {
    pub fn new(
        vertices: usize,
        edges: Vec<(usize, usize)>,
        terminals: Vec<(usize, usize)>,
        layers: Vec<(usize, usize)>,
    ) -> Result<Self> {
        let check = |v: usize| {
            if v < vertices {
                Ok(())
            } else {
                Err(Error::IndexOutOfRange { index: v, degree: vertices })
            }
        };
        let mut out = vec![Vec::new(); vertices];
        for &(a, b) in &edges {
            check(a)?;
            check(b)?;
            out[a].push(b);
        }
        for &(s, t) in &terminals {
            check(s)?;
            check(t)?;
        }
        for &(a, b) in &layers {
            check(a)?;
            check(b)?;
            if a > b {
                return Err(Error::InvalidInstance(format!("layer {a}..{b} is empty")));
            }
        }
        let r = RoutingInstance {
            vertices,
            edges,
            terminals,
            layers,
            out,
        };
        if !r.is_acyclic() {
            return Err(Error::InvalidInstance("graph has a cycle".into()));
        }
        Ok(r)
    }

    pub fn vertices(&self) -> usize {
        self.vertices
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn terminals(&self) -> &[(usize, usize)] {
        &self.terminals
    }

    pub fn layers(&self) -> &[(usize, usize)] {
        &self.layers
    }

    pub fn is_acyclic(&self) -> bool {
        let mut indeg = vec![0usize; self.vertices];
        for &(_, b) in &self.edges {
            indeg[b] += 1;
        }
        let mut stack: Vec<usize> = (0..self.vertices).filter(|&v| indeg[v] == 0).collect();
        let mut seen = 0;
        while let Some(v) = stack.pop() {
            seen += 1;
            for &w in &self.out[v] {
                indeg[w] -= 1;
                if indeg[w] == 0 {
                    stack.push(w);
                }
            }
        }
        seen == self.vertices
    }

    /// Largest in-degree and out-degree.
    pub fn max_degrees(&self) -> (usize, usize) {
        let mut indeg = vec![0usize; self.vertices];
        for &(_, b) in &self.edges {
            indeg[b] += 1;
        }
        let o = self.out.iter().map(Vec::len).max().unwrap_or(0);
        (indeg.into_iter().max().unwrap_or(0), o)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!(
            "route v1 {} {} {} {}\n",
            self.vertices,
            self.edges.len(),
            self.terminals.len(),
            self.layers.len()
        );
        for (a, b) in &self.edges {
            s.push_str(&format!("{a} {b}\n"));
        }
        for (a, b) in &self.terminals {
            s.push_str(&format!("terminal {a} {b}\n"));
        }
        for (a, b) in &self.layers {
            s.push_str(&format!("layer {a} {b}\n"));
        }
        s
    }

    pub fn parse(text: &str) -> Result<Self> {
        let fail = |line: usize, reason: String| Error::Format { line, reason };
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());
        let (ln, head) = lines.next().ok_or_else(|| fail(0, "missing header".into()))?;
        let head: Vec<&str> = head.split_whitespace().collect();
        let counts: Vec<usize> = match head.as_slice() {
            ["route", "v1", rest @ ..] if rest.len() == 4 => rest
                .iter()
                .map(|t| t.parse().map_err(|_| fail(ln, format!("bad count '{t}'"))))
                .collect::<Result<_>>()?,
            _ => return Err(fail(ln, "expected 'route v1 <V> <E> <T> <L>'".into())),
        };
        let (v, ne, nt, nl) = (counts[0], counts[1], counts[2], counts[3]);
        let mut edges = Vec::with_capacity(ne);
        let mut terminals = Vec::with_capacity(nt);
        let mut layers = Vec::with_capacity(nl);
        for (ln, l) in lines {
            let parts: Vec<&str> = l.split_whitespace().collect();
            let num = |t: &str| t.parse::<usize>().map_err(|_| fail(ln, format!("bad vertex '{t}'")));
            match parts.as_slice() {
                [a, b] if terminals.is_empty() && layers.is_empty() => edges.push((num(a)?, num(b)?)),
                ["terminal", a, b] if layers.is_empty() => terminals.push((num(a)?, num(b)?)),
                ["layer", a, b] => layers.push((num(a)?, num(b)?)),
                _ => return Err(fail(ln, format!("unexpected line '{l}'"))),
            }
        }
        if (edges.len(), terminals.len(), layers.len()) != (ne, nt, nl) {
            return Err(fail(
                0,
                format!(
                    "header declares {ne}/{nt}/{nl} edges/terminals/layers, found {}/{}/{}",
                    edges.len(),
                    terminals.len(),
                    layers.len()
                ),
            ));
        }
        Self::new(v, edges, terminals, layers)
    }

    fn wires(&self) -> usize {
        self.terminals.len()
    }

    // First vertex of boundary k.
    fn boundary(&self, k: usize) -> Result<usize> {
        let d = self.wires();
        let start = if k < self.layers.len() {
            self.layers[k].0
        } else {
            let last = self.layers.last().ok_or_else(|| Error::InvalidInstance("no layers".into()))?;
            (last.1 + 1)
                .checked_sub(d)
                .ok_or_else(|| Error::InvalidInstance("last layer too small".into()))?
        };
        if start + d > self.vertices {
            return Err(Error::InvalidInstance(format!("boundary {k} exceeds the vertex range")));
        }
        Ok(start)
    }

    /// Every vertex-disjoint way of crossing layer `k`, in depth-first order
    /// (wire 0's path chosen first, edges in insertion order).
    pub fn layer_linkages(&self, k: usize) -> Result<Vec<Linkage>> {
        let d = self.wires();
        let (lo, hi) = self.layers[k];
        let from = self.boundary(k)?;
        let to = self.boundary(k + 1)?;
        let mut used = vec![false; self.vertices];
        let mut found = Vec::new();
        let mut cur: Vec<Vec<usize>> = Vec::with_capacity(d);
        self.link(0, from, to, (lo, hi.max(to + d - 1)), &mut used, &mut cur, &mut found);
        found
            .into_iter()
            .map(|paths: Vec<Vec<usize>>| {
                let map = paths.iter().map(|p| p[p.len() - 1] - to).collect();
                Ok(Linkage {
                    perm: Permutation::from_map(map)?,
                    paths,
                })
            })
            .collect()
    }

    #[allow(clippy::too_many_arguments)]
    fn link(
        &self,
        wire: usize,
        from: usize,
        to: usize,
        span: (usize, usize),
        used: &mut [bool],
        cur: &mut Vec<Vec<usize>>,
        found: &mut Vec<Vec<Vec<usize>>>,
    ) {
        let d = self.wires();
        if wire == d {
            found.push(cur.clone());
            return;
        }
        let start = from + wire;
        let mut path = vec![start];
        used[start] = true;
        self.extend_path(wire, from, to, span, used, &mut path, cur, found);
        used[start] = false;
    }

    #[allow(clippy::too_many_arguments)]
    fn extend_path(
        &self,
        wire: usize,
        from: usize,
        to: usize,
        span: (usize, usize),
        used: &mut [bool],
        path: &mut Vec<usize>,
        cur: &mut Vec<Vec<usize>>,
        found: &mut Vec<Vec<Vec<usize>>>,
    ) {
        let d = self.wires();
        let v = *path.last().expect("path starts at a boundary vertex");
        if path.len() > 1 && (to..to + d).contains(&v) {
            cur.push(path.clone());
            self.link(wire + 1, from, to, span, used, cur, found);
            cur.pop();
            return;
        }
        for &w in &self.out[v] {
            if used[w] || w < span.0 || w > span.1 || (from..from + d).contains(&w) {
                continue;
            }
            used[w] = true;
            path.push(w);
            self.extend_path(wire, from, to, span, used, path, cur, found);
            path.pop();
            used[w] = false;
        }
    }

    // Wire permutation the terminals ask for.
    fn terminal_target(&self) -> Result<Option<Permutation>> {
        let d = self.wires();
        let first = self.boundary(0)?;
        let last = self.boundary(self.layers.len())?;
        let mut map = vec![usize::MAX; d];
        for &(s, t) in &self.terminals {
            if !(first..first + d).contains(&s) || !(last..last + d).contains(&t) {
                return Err(Error::InvalidInstance(format!(
                    "terminal ({s}, {t}) is not on the outer boundaries"
                )));
            }
            if map[s - first] != usize::MAX {
                return Err(Error::InvalidInstance(format!("vertex {s} is the source of two terminals")));
            }
            map[s - first] = t - last;
        }
        Ok(Permutation::from_map(map).ok())
    }
}

impl fmt::Display for RoutingInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Compiles a 3-GDLP instance: one layer per base, terminal for wire `e`
/// from `(e, 0)` to `(target(e), q)`.
pub fn gdlp3_to_routing(inst: &GdlpInstance) -> Result<RoutingInstance> {
    let d = inst.degree();
    let q = inst.base_count();
    let mut edges = Vec::new();
    let mut layers = Vec::with_capacity(q);
    let mut next = d;
    let mut bstart = 0;
    for (j, b) in inst.bases().iter().enumerate() {
        let cycles = b.perm.cycles();
        let c = match cycles.as_slice() {
            [c] if c.len() == 2 || c.len() == 3 => c.clone(),
            _ => {
                return Err(Error::UnsupportedBase(format!(
                    "base {j} {} is not a 2-cycle or 3-cycle",
                    b.perm
                )))
            }
        };
        let interior = if c.len() == 3 { 3 } else { 0 };
        let istart = next;
        let nstart = istart + interior;
        let inb = |w: usize| bstart + w;
        let outb = |w: usize| nstart + w;
        for w in 0..d {
            if !c.contains(&w) {
                edges.push((inb(w), outb(w)));
            }
        }
        if c.len() == 2 {
            let (x, y) = (c[0], c[1]);
            edges.extend([(inb(x), outb(x)), (inb(x), outb(y)), (inb(y), outb(y)), (inb(y), outb(x))]);
        } else {
            let pos = |w: usize| c.iter().position(|&z| z == w).expect("cycle element");
            let mid = |w: usize| istart + pos(w);
            let sigma = |w: usize| b.perm.apply(w);
            for &x in &c {
                edges.push((inb(x), mid(x)));
                edges.push((inb(x), mid(sigma(x))));
            }
            for &x in &c {
                edges.push((mid(x), outb(x)));
                edges.push((mid(x), outb(sigma(sigma(x)))));
            }
        }
        layers.push((bstart, nstart - 1));
        bstart = nstart;
        next = nstart + d;
    }
    if let Some(last) = layers.last_mut() {
        last.1 = next - 1;
    }
    let terminals = (0..d).map(|e| (e, bstart + inst.target().apply(e))).collect();
    RoutingInstance::new(next, edges, terminals, layers)
}

/// Finds a disjoint path set by searching over per-layer linkages; when
/// several linkages of a layer realize the same wire permutation, the first
/// is used.
pub fn solve_routing(r: &RoutingInstance, opts: &SearchOptions) -> Result<Option<PathSet>> {
    if r.layers().is_empty() {
        return Err(Error::InvalidInstance("no layers".into()));
    }
    let Some(target) = r.terminal_target()? else {
        return Ok(None);
    };
    let mut steps = Vec::with_capacity(r.layers().len());
    let mut linkages = Vec::with_capacity(r.layers().len());
    for k in 0..r.layers().len() {
        let mut seen = FxHashSet::default();
        let distinct: Vec<Linkage> = r
            .layer_linkages(k)?
            .into_iter()
            .filter(|l| seen.insert(l.perm.clone()))
            .collect();
        steps.push(distinct.iter().map(|l| l.perm.clone()).collect::<Vec<_>>());
        linkages.push(distinct);
    }
    let Some(choice) = find_choices(&steps, &target, opts)? else {
        return Ok(None);
    };
    let d = r.wires();
    let first = r.boundary(0)?;
    let mut paths: Vec<Vec<usize>> = (0..d).map(|w| vec![first + w]).collect();
    // at[w] = terminal currently sitting on wire w
    let mut at: Vec<usize> = (0..d).collect();
    for (k, &c) in choice.iter().enumerate() {
        let link = &linkages[k][c];
        let mut next = vec![0; d];
        for (w, seg) in link.paths.iter().enumerate() {
            let t = at[w];
            paths[t].extend_from_slice(&seg[1..]);
            next[link.perm.apply(w)] = t;
        }
        at = next;
    }
    // order paths like the terminal list
    let by_source: Vec<Vec<usize>> = r
        .terminals()
        .iter()
        .map(|&(s, _)| paths[s - first].clone())
        .collect();
    Ok(Some(PathSet { paths: by_source }))
}

pub fn verify_routing(r: &RoutingInstance, p: &PathSet) -> Result<bool> {
    if p.paths.len() != r.terminals().len() {
        return Err(Error::LengthMismatch {
            expected: r.terminals().len(),
            actual: p.paths.len(),
        });
    }
    if let Some(i) = p.paths.iter().position(Vec::is_empty) {
        return Err(Error::MalformedPath(format!("path {i} is empty")));
    }
    let edges: FxHashSet<(usize, usize)> = r.edges().iter().copied().collect();
    let mut used = FxHashSet::default();
    for (path, &(s, t)) in p.paths.iter().zip(r.terminals()) {
        if path[0] != s || path[path.len() - 1] != t {
            return Ok(false);
        }
        if path.windows(2).any(|e| !edges.contains(&(e[0], e[1]))) {
            return Ok(false);
        }
        if !path.iter().all(|&v| used.insert(v)) {
            return Ok(false);
        }
    }
    Ok(true)
}
