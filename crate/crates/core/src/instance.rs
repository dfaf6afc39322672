//! GDLP instances, witnesses, and the circuit-to-GDLP mapping.
//!
//! An instance asks for exponent rows `x[i][j]` such that
//! `∏_i α_0^x[i][0] ⋯ α_{q-1}^x[i][q-1] = y`, products read left to right.
//! Exponents range over `0..order(α_j)`; `order(α_j)` itself is the
//! positive-exponent equivalent of `0`.
//!
//! Text format:
//!
//! ```text
//! gdlp v1
//! degree <d>
//! khat <k>
//! base <role-tag> <cycle-text>
//! ...
//! target <cycle-text>
//! ```

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::search::{self, SearchOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BaseRole {
    OuterSwitch,
    Tether,
    GadgetSix,
    GadgetDouble,
    GadgetFourCycle,
    Plain,
}

impl BaseRole {
    pub const ALL: [BaseRole; 6] = [
        BaseRole::OuterSwitch,
        BaseRole::Tether,
        BaseRole::GadgetSix,
        BaseRole::GadgetDouble,
        BaseRole::GadgetFourCycle,
        BaseRole::Plain,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            BaseRole::OuterSwitch => "outer-switch",
            BaseRole::Tether => "tether",
            BaseRole::GadgetSix => "gadget-six",
            BaseRole::GadgetDouble => "gadget-double",
            BaseRole::GadgetFourCycle => "gadget-four-cycle",
            BaseRole::Plain => "plain",
        }
    }

    /// Whether `p` has the cycle shape this role promises.
    pub fn admits(self, p: &Permutation) -> bool {
        let lens: Vec<usize> = p.cycles().iter().map(Vec::len).collect();
        match self {
            BaseRole::OuterSwitch => lens == [2],
            BaseRole::Tether => !lens.is_empty() && lens.iter().all(|&l| l == 2),
            BaseRole::GadgetSix => lens == [2, 2, 2],
            BaseRole::GadgetDouble => lens == [2, 2],
            BaseRole::GadgetFourCycle => lens == [4],
            BaseRole::Plain => true,
        }
    }
}

impl fmt::Display for BaseRole {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for BaseRole {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        BaseRole::ALL
            .into_iter()
            .find(|r| r.tag() == s)
            .ok_or_else(|| format!("unknown role tag '{s}'"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Base {
    pub perm: Permutation,
    pub role: BaseRole,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GdlpInstance {
    degree: usize,
    bases: Vec<Base>,
    target: Permutation,
    khat: usize,
}

impl GdlpInstance {
    pub fn new(bases: Vec<Base>, target: Permutation, khat: usize) -> Result<Self> {
        if bases.is_empty() {
            return Err(Error::InvalidInstance("base sequence is empty".into()));
        }
        if khat == 0 {
            return Err(Error::InvalidInstance("khat must be positive".into()));
        }
        let degree = target.degree();
        for (j, b) in bases.iter().enumerate() {
            if b.perm.degree() != degree {
                return Err(Error::DegreeMismatch {
                    left: b.perm.degree(),
                    right: degree,
                });
            }
            if !b.role.admits(&b.perm) {
                return Err(Error::InvalidInstance(format!(
                    "base {j} {} does not have the shape of role {}",
                    b.perm, b.role
                )));
            }
        }
        Ok(GdlpInstance {
            degree,
            bases,
            target,
            khat,
        })
    }

    /// Bases given as bare permutations with role `plain`.
    pub fn from_plain(bases: Vec<Permutation>, target: Permutation) -> Result<Self> {
        let bases = bases
            .into_iter()
            .map(|perm| Base {
                perm,
                role: BaseRole::Plain,
            })
            .collect();
        Self::new(bases, target, 1)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn bases(&self) -> &[Base] {
        &self.bases
    }

    pub fn base_count(&self) -> usize {
        self.bases.len()
    }

    pub fn target(&self) -> &Permutation {
        &self.target
    }

    pub fn khat(&self) -> usize {
        self.khat
    }

    pub fn with_khat(mut self, khat: usize) -> Result<Self> {
        if khat == 0 {
            return Err(Error::InvalidInstance("khat must be positive".into()));
        }
        self.khat = khat;
        Ok(self)
    }

    /// Product of base orders, saturating.
    pub fn search_space(&self) -> u128 {
        self.bases
            .iter()
            .fold(1u128, |acc, b| acc.saturating_mul(b.perm.order() as u128))
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("gdlp v1\ndegree {}\nkhat {}\n", self.degree, self.khat);
        for b in &self.bases {
            s.push_str(&format!("base {} {}\n", b.role, b.perm));
        }
        s.push_str(&format!("target {}\n", self.target));
        s
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
        let fail = |line: usize, reason: &str| Error::Format {
            line,
            reason: reason.to_string(),
        };
        let mut next = |what: &str| lines.next().ok_or_else(|| fail(0, &format!("missing {what}")));

        let (n, l) = next("header")?;
        if l != "gdlp v1" {
            return Err(fail(n, "expected 'gdlp v1'"));
        }
        let (n, l) = next("degree line")?;
        let degree: usize = l
            .strip_prefix("degree ")
            .and_then(|v| v.trim().parse().ok())
            .filter(|&d| d > 0)
            .ok_or_else(|| fail(n, "expected 'degree <d>' with d >= 1"))?;
        let (n, l) = next("khat line")?;
        let khat: usize = l
            .strip_prefix("khat ")
            .and_then(|v| v.trim().parse().ok())
            .filter(|&k| k > 0)
            .ok_or_else(|| fail(n, "expected 'khat <k>' with k >= 1"))?;

        let mut bases = Vec::new();
        let mut target = None;
        for (n, l) in lines {
            if l.is_empty() {
                continue;
            }
            if target.is_some() {
                return Err(fail(n, "content after target line"));
            }
            if let Some(rest) = l.strip_prefix("base ") {
                let rest = rest.trim_start();
                let (tag, cyc) = rest.split_once(char::is_whitespace).unwrap_or((rest, ""));
                let role: BaseRole = tag.parse().map_err(|e: String| fail(n, &e))?;
                let perm = Permutation::parse_cycles(cyc, degree).map_err(|e| fail(n, &e.to_string()))?;
                if !role.admits(&perm) {
                    return Err(fail(n, &format!("base does not have the shape of role {role}")));
                }
                bases.push(Base { perm, role });
            } else if let Some(rest) = l.strip_prefix("target") {
                let perm = Permutation::parse_cycles(rest, degree).map_err(|e| fail(n, &e.to_string()))?;
                target = Some(perm);
            } else {
                return Err(fail(n, "expected 'base' or 'target' line"));
            }
        }
        let target = target.ok_or_else(|| fail(0, "missing target line"))?;
        Self::new(bases, target, khat)
    }
}

impl fmt::Display for GdlpInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// `k` rows of `q` exponents.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    rows: Vec<Vec<u64>>,
}

impl Witness {
    pub fn new(rows: Vec<Vec<u64>>) -> Result<Self> {
        let q = rows.first().map(Vec::len).unwrap_or(0);
        if rows.is_empty() || q == 0 {
            return Err(Error::WitnessShape {
                rows: rows.len(),
                cols: q,
                bases: q,
            });
        }
        if let Some(bad) = rows.iter().find(|r| r.len() != q) {
            return Err(Error::WitnessShape {
                rows: rows.len(),
                cols: bad.len(),
                bases: q,
            });
        }
        Ok(Witness { rows })
    }

    pub fn single_row(row: Vec<u64>) -> Result<Self> {
        Self::new(vec![row])
    }

    pub fn k(&self) -> usize {
        self.rows.len()
    }

    pub fn q(&self) -> usize {
        self.rows[0].len()
    }

    pub fn rows(&self) -> &[Vec<u64>] {
        &self.rows
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("witness v1 {} {}\n", self.k(), self.q());
        for r in &self.rows {
            let cells: Vec<String> = r.iter().map(u64::to_string).collect();
            s.push_str(&cells.join(" "));
            s.push('\n');
        }
        s
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());
        let fail = |line: usize, reason: &str| Error::Format {
            line,
            reason: reason.to_string(),
        };
        let (n, head) = lines.next().ok_or_else(|| fail(0, "empty witness"))?;
        let parts: Vec<&str> = head.split_whitespace().collect();
        let (k, q) = match parts.as_slice() {
            ["witness", "v1", k, q] => (
                k.parse::<usize>().map_err(|_| fail(n, "bad k"))?,
                q.parse::<usize>().map_err(|_| fail(n, "bad q"))?,
            ),
            _ => return Err(fail(n, "expected 'witness v1 <k> <q>'")),
        };
        let mut rows = Vec::with_capacity(k);
        for (n, l) in lines {
            let row: Vec<u64> = l
                .split_whitespace()
                .map(|c| c.parse::<u64>().map_err(|_| fail(n, "bad exponent")))
                .collect::<Result<_>>()?;
            if row.len() != q {
                return Err(fail(n, &format!("expected {q} exponents")));
            }
            rows.push(row);
        }
        if rows.len() != k || k == 0 {
            return Err(fail(0, &format!("expected {k} rows, got {}", rows.len())));
        }
        Self::new(rows)
    }
}

/// Whether the interleaved product of `w` equals the target. Each power
/// is computed by squaring.
pub fn verify_witness(inst: &GdlpInstance, w: &Witness) -> Result<bool> {
    if w.q() != inst.base_count() {
        return Err(Error::WitnessShape {
            rows: w.k(),
            cols: w.q(),
            bases: inst.base_count(),
        });
    }
    let mut acc = Permutation::identity(inst.degree())?;
    for row in w.rows() {
        for (b, &x) in inst.bases().iter().zip(row) {
            acc = acc.compose(&b.perm.power(x))?;
        }
    }
    Ok(&acc == inst.target())
}

/// k = 1 decision. Returns the lexicographically smallest single-row
/// witness with exponents in `0..order(α_j)`, or `None`.
pub fn decide_k1(inst: &GdlpInstance, opts: &SearchOptions) -> Result<Option<Witness>> {
    let steps: Vec<Vec<Permutation>> = inst
        .bases()
        .iter()
        .map(|b| (0..b.perm.order()).map(|e| b.perm.power(e)).collect())
        .collect();
    let found = search::find_choices(&steps, inst.target(), opts)?;
    found
        .map(|c| Witness::single_row(c.into_iter().map(|e| e as u64).collect()))
        .transpose()
}

/// A circuit of 2-by-2 switches listed in topological order, inputs first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CircuitInstance {
    wires: usize,
    switches: Vec<(usize, usize)>,
}

impl CircuitInstance {
    pub fn new(wires: usize, switches: Vec<(usize, usize)>) -> Result<Self> {
        if wires == 0 {
            return Err(Error::ZeroDegree);
        }
        for &(a, b) in &switches {
            for w in [a, b] {
                if w >= wires {
                    return Err(Error::IndexOutOfRange {
                        index: w,
                        degree: wires,
                    });
                }
            }
            if a == b {
                return Err(Error::InvalidInstance(format!("switch ({a},{b}) joins a wire to itself")));
            }
        }
        Ok(CircuitInstance { wires, switches })
    }

    pub fn wires(&self) -> usize {
        self.wires
    }

    pub fn switches(&self) -> &[(usize, usize)] {
        &self.switches
    }
}

/// One transposition base per switch, in circuit order; `khat = 1`.
pub fn circuit_to_gdlp(c: &CircuitInstance, target: &Permutation) -> Result<GdlpInstance> {
    if target.degree() != c.wires() {
        return Err(Error::DegreeMismatch {
            left: target.degree(),
            right: c.wires(),
        });
    }
    let bases = c
        .switches()
        .iter()
        .map(|&(a, b)| {
            Ok(Base {
                perm: Permutation::transposition(a, b, c.wires())?,
                role: BaseRole::OuterSwitch,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    GdlpInstance::new(bases, target.clone(), 1)
}
