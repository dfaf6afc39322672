//! Permutations of `{0, .., d-1}` with explicit degree.
//!
//! `map[i]` is the index the element at index `i` moves to. Products are
//! read left to right: in `p.compose(&q)` the permutation `p` acts first.
//!
//! Cycle text follows the grammar
//!
//! ```text
//! cycles = ( "(" index ( WS index )* ")" )*
//! ```
//!
//! with zero-based decimal indices. The identity renders as `()`. Cycles
//! written next to each other are multiplied left to right.

use std::fmt;

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    map: Vec<usize>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Result<Self> {
        if degree == 0 {
            return Err(Error::ZeroDegree);
        }
        Ok(Permutation {
            map: (0..degree).collect(),
        })
    }

    /// Builds a permutation from its image table, checking bijectivity.
    pub fn from_map(map: Vec<usize>) -> Result<Self> {
        let degree = map.len();
        if degree == 0 {
            return Err(Error::ZeroDegree);
        }
        let mut seen = vec![false; degree];
        for &v in &map {
            if v >= degree || seen[v] {
                return Err(Error::NotBijection { degree });
            }
            seen[v] = true;
        }
        Ok(Permutation { map })
    }

    /// The single cycle `(c[0] c[1] .. c[k-1])` on `degree` points.
    pub fn cycle(points: &[usize], degree: usize) -> Result<Self> {
        let mut p = Self::identity(degree)?;
        p.apply_cycle(points)?;
        Ok(p)
    }

    pub fn transposition(a: usize, b: usize, degree: usize) -> Result<Self> {
        Self::cycle(&[a, b], degree)
    }

    /// Product of independent single cycles, given as point lists.
    pub fn from_cycles(cycles: &[&[usize]], degree: usize) -> Result<Self> {
        let mut p = Self::identity(degree)?;
        for c in cycles {
            let next = Self::cycle(c, degree)?;
            p = p.compose(&next)?;
        }
        Ok(p)
    }

    // Multiplies `self` on the right by the cycle over `points`.
    fn apply_cycle(&mut self, points: &[usize]) -> Result<()> {
        let degree = self.degree();
        for (k, &a) in points.iter().enumerate() {
            if a >= degree {
                return Err(Error::IndexOutOfRange { index: a, degree });
            }
            if points[..k].contains(&a) {
                return Err(Error::RepeatedInCycle { index: a });
            }
        }
        if points.len() < 2 {
            return Ok(());
        }
        let mut step = (0..degree).collect::<Vec<_>>();
        for (k, &a) in points.iter().enumerate() {
            step[a] = points[(k + 1) % points.len()];
        }
        for v in self.map.iter_mut() {
            *v = step[*v];
        }
        Ok(())
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.map.len()
    }

    #[inline]
    pub fn map(&self) -> &[usize] {
        &self.map
    }

    /// Image of `i`.
    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.map[i]
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(i, &v)| i == v)
    }

    /// `self` first, then `other`.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation> {
        if self.degree() != other.degree() {
            return Err(Error::DegreeMismatch {
                left: self.degree(),
                right: other.degree(),
            });
        }
        let out = Permutation {
            map: self.map.iter().map(|&v| other.map[v]).collect(),
        };
        debug_assert!(out.is_bijection());
        Ok(out)
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.degree()];
        for (i, &v) in self.map.iter().enumerate() {
            inv[v] = i;
        }
        Permutation { map: inv }
    }

    /// `self` composed with itself `e` times, by repeated squaring.
    pub fn power(&self, mut e: u64) -> Permutation {
        let mut acc = Permutation {
            map: (0..self.degree()).collect(),
        };
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.compose(&base).expect("same degree");
            }
            e >>= 1;
            if e > 0 {
                base = base.compose(&base).expect("same degree");
            }
        }
        acc
    }

    /// Least common multiple of the cycle lengths.
    pub fn order(&self) -> u64 {
        self.cycles()
            .iter()
            .fold(1u64, |acc, c| lcm(acc, c.len() as u64))
    }

    /// Non-trivial disjoint cycles, each starting at its smallest element,
    /// sorted by that element.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree()];
        let mut out = Vec::new();
        for start in 0..self.degree() {
            if seen[start] || self.map[start] == start {
                seen[start] = true;
                continue;
            }
            let mut cyc = Vec::new();
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                cyc.push(i);
                i = self.map[i];
            }
            out.push(cyc);
        }
        out
    }

    /// Sorted list of moved points.
    pub fn support(&self) -> Vec<usize> {
        (0..self.degree()).filter(|&i| self.map[i] != i).collect()
    }

    /// Same mapping on `0..degree`, fixed points above.
    pub fn embed(&self, degree: usize) -> Result<Permutation> {
        if degree < self.degree() {
            return Err(Error::EmbedShrink {
                from: self.degree(),
                to: degree,
            });
        }
        let mut map = self.map.clone();
        map.extend(self.degree()..degree);
        Ok(Permutation { map })
    }

    pub fn parse_cycles(text: &str, degree: usize) -> Result<Permutation> {
        let mut p = Self::identity(degree)?;
        let bytes = text.as_bytes();
        let mut pos = 0;
        let skip_ws = |pos: &mut usize| {
            while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
                *pos += 1;
            }
        };
        loop {
            skip_ws(&mut pos);
            if pos == bytes.len() {
                break;
            }
            if bytes[pos] != b'(' {
                return Err(Error::CycleSyntax {
                    offset: pos,
                    reason: "expected '('".into(),
                });
            }
            pos += 1;
            let mut points = Vec::new();
            loop {
                skip_ws(&mut pos);
                if pos == bytes.len() {
                    return Err(Error::CycleSyntax {
                        offset: pos,
                        reason: "unclosed cycle".into(),
                    });
                }
                if bytes[pos] == b')' {
                    pos += 1;
                    break;
                }
                let start = pos;
                while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                    pos += 1;
                }
                if start == pos {
                    return Err(Error::CycleSyntax {
                        offset: pos,
                        reason: "expected index".into(),
                    });
                }
                // digits are ASCII so the slice is valid UTF-8
                let index: usize = text[start..pos].parse().map_err(|_| Error::CycleSyntax {
                    offset: start,
                    reason: "index too large".into(),
                })?;
                points.push(index);
                if pos < bytes.len() && !bytes[pos].is_ascii_whitespace() && bytes[pos] != b')' {
                    return Err(Error::CycleSyntax {
                        offset: pos,
                        reason: "unexpected character".into(),
                    });
                }
            }
            p.apply_cycle(&points)?;
        }
        Ok(p)
    }

    pub fn format_cycles(&self) -> String {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return "()".to_string();
        }
        let mut s = String::new();
        for c in cycles {
            s.push('(');
            for (k, v) in c.iter().enumerate() {
                if k > 0 {
                    s.push(' ');
                }
                s.push_str(&v.to_string());
            }
            s.push(')');
        }
        s
    }

    fn is_bijection(&self) -> bool {
        let mut seen = vec![false; self.degree()];
        self.map
            .iter()
            .all(|&v| v < seen.len() && !std::mem::replace(&mut seen[v], true))
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format_cycles())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation[{}]{}", self.degree(), self.format_cycles())
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}
