//! Exactly-1 Positive 3-SAT: every clause is a triple of variables and
//! holds iff exactly one of them is true.
//!
//! Text format: `p e1p3sat <n> <m>` followed by `m` lines `<u> <v> <w>`
//! of zero-based variable indices. Lines starting with `#` are ignored.

use rand::Rng;

use crate::error::{Error, Result};

pub type Clause = [usize; 3];

/// Largest variable count `brute_force_sat` will enumerate.
pub const BRUTE_FORCE_MAX_VARS: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SatInstance {
    n: usize,
    clauses: Vec<Clause>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Assignment {
    bits: Vec<bool>,
}

impl Assignment {
    pub fn new(bits: Vec<bool>) -> Self {
        Assignment { bits }
    }

    /// Bit `j` of `word` is variable `j`.
    pub fn from_word(word: u64, n: usize) -> Self {
        Assignment {
            bits: (0..n).map(|j| word >> j & 1 == 1).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn get(&self, var: usize) -> Option<bool> {
        self.bits.get(var).copied()
    }

    pub fn to_text(&self) -> String {
        let cells: Vec<&str> = self.bits.iter().map(|&b| if b { "1" } else { "0" }).collect();
        cells.join(" ")
    }
}

pub fn eval_clause(a: &Assignment, u: usize, v: usize, w: usize) -> Result<bool> {
    let get = |i: usize| {
        a.get(i).ok_or(Error::IndexOutOfRange {
            index: i,
            degree: a.len(),
        })
    };
    let (u, v, w) = (get(u)?, get(v)?, get(w)?);
    Ok([u, v, w].iter().filter(|&&b| b).count() == 1)
}

impl SatInstance {
    pub fn new(n: usize, clauses: Vec<Clause>) -> Result<Self> {
        if clauses.is_empty() {
            return Err(Error::InvalidInstance("at least one clause is required".into()));
        }
        for c in &clauses {
            for &x in c {
                if x >= n {
                    return Err(Error::IndexOutOfRange { index: x, degree: n });
                }
            }
        }
        Ok(SatInstance { n, clauses })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.clauses.len()
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn eval(&self, a: &Assignment) -> Result<bool> {
        if a.len() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                actual: a.len(),
            });
        }
        for &[u, v, w] in &self.clauses {
            if !eval_clause(a, u, v, w)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Clause triples drawn independently and uniformly from `0..n`,
    /// repeats allowed.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, n: usize, m: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInstance("n must be positive".into()));
        }
        let clauses = (0..m)
            .map(|_| [rng.random_range(0..n), rng.random_range(0..n), rng.random_range(0..n)])
            .collect();
        Self::new(n, clauses)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("p e1p3sat {} {}\n", self.n, self.m());
        for [u, v, w] in &self.clauses {
            s.push_str(&format!("{u} {v} {w}\n"));
        }
        s
    }

    pub fn parse(text: &str) -> Result<Self> {
        let fail = |line: usize, reason: &str| Error::Format {
            line,
            reason: reason.to_string(),
        };
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (ln, head) = lines.next().ok_or_else(|| fail(0, "missing header"))?;
        let parts: Vec<&str> = head.split_whitespace().collect();
        let (n, m) = match parts.as_slice() {
            ["p", "e1p3sat", n, m] => (
                n.parse::<usize>().map_err(|_| fail(ln, "bad variable count"))?,
                m.parse::<usize>().map_err(|_| fail(ln, "bad clause count"))?,
            ),
            _ => return Err(fail(ln, "expected 'p e1p3sat <n> <m>'")),
        };
        let mut clauses = Vec::with_capacity(m);
        for (ln, l) in lines {
            let vars: Vec<usize> = l
                .split_whitespace()
                .map(|t| t.parse::<usize>().map_err(|_| fail(ln, "bad variable index")))
                .collect::<Result<_>>()?;
            let clause: Clause = vars
                .try_into()
                .map_err(|_| fail(ln, "a clause needs exactly three variables"))?;
            if let Some(&x) = clause.iter().find(|&&x| x >= n) {
                return Err(fail(ln, &format!("variable {x} out of range for n = {n}")));
            }
            if clauses.len() == m {
                return Err(fail(ln, &format!("more than {m} clauses")));
            }
            clauses.push(clause);
        }
        if clauses.len() != m {
            return Err(fail(0, &format!("expected {m} clauses, got {}", clauses.len())));
        }
        Self::new(n, clauses)
    }
}

/// First satisfying assignment in counting order (bit `j` of the counter is
/// variable `j`), or `None`.
pub fn brute_force_sat(s: &SatInstance) -> Result<Option<Assignment>> {
    if s.n() > BRUTE_FORCE_MAX_VARS {
        return Err(Error::BudgetExceeded {
            budget: 1 << BRUTE_FORCE_MAX_VARS,
        });
    }
    let masks: Vec<[u64; 3]> = s
        .clauses()
        .iter()
        .map(|c| [1u64 << c[0], 1u64 << c[1], 1u64 << c[2]])
        .collect();
    let found = (0..1u64 << s.n()).find(|&word| {
        masks.iter().all(|ms| {
            ms.iter().filter(|&&mask| word & mask != 0).count() == 1
        })
    });
    Ok(found.map(|w| Assignment::from_word(w, s.n())))
}
