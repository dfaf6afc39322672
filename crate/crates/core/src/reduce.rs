//! Reduction chain from Exactly-1 Positive 3-SAT to GDLP with bases of
//! bounded support.
//!
//! * `sat_to_tethered`: one 6-wire complementary Benes block per clause
//!   (wires `6i..6i+6`), with the middle switch of each literal position
//!   tethered to every other occurrence of the same variable.
//! * `tethered_to_6`: each tether of `p >= 2` transpositions becomes a
//!   cyclic chain of `p` bases `(K_{j-1} S_{j-1})(I_j I_j+3)(K_j S_j)`.
//! * `expand_6_to_4`: each three-transposition base becomes three
//!   double transpositions sharing a fresh 4-cycle of wires `L0..L3`.
//! * `expand_4_to_3`: double transpositions and 4-cycles become 3-cycles
//!   and transpositions over fresh wires `J0, J1` and `R`.
//!
//! Fresh wires are numbered consecutively from the current degree, in base
//! order. The target never moves a fresh wire.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::instance::{Base, BaseRole, GdlpInstance, Witness};
use crate::perm::Permutation;
use crate::sat::{Assignment, SatInstance};

/// Largest exponent space `gadget_outcomes` enumerates.
pub const GADGET_MAX_PATTERNS: u64 = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Stage {
    Tethered,
    Six,
    Four,
    Three,
}

impl Stage {
    pub const ALL: [Stage; 4] = [Stage::Tethered, Stage::Six, Stage::Four, Stage::Three];

    pub fn name(self) -> &'static str {
        match self {
            Stage::Tethered => "tethered",
            Stage::Six => "six",
            Stage::Four => "four",
            Stage::Three => "three",
        }
    }

    /// Base and element counts the construction is advertised with, as
    /// multiples of the clause count.
    pub fn claimed_per_clause(self) -> Option<(usize, usize)> {
        match self {
            Stage::Tethered => None,
            Stage::Six => Some((15, 12)),
            Stage::Four => Some((24, 24)),
            Stage::Three => Some((45, 55)),
        }
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Stage {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Stage::ALL
            .into_iter()
            .find(|st| st.name() == s)
            .ok_or_else(|| format!("unknown stage '{s}'"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StageReport {
    pub stage: Stage,
    pub clauses: usize,
    pub bases: usize,
    pub degree: usize,
    /// Fresh elements introduced by the last stage, `aux_start..aux_end`.
    pub aux_start: usize,
    pub aux_end: usize,
}

impl StageReport {
    pub fn claimed(&self) -> Option<(usize, usize)> {
        self.stage
            .claimed_per_clause()
            .map(|(b, e)| (b * self.clauses, e * self.clauses))
    }

    pub fn matches_claim(&self) -> Option<bool> {
        self.claimed().map(|(b, e)| b == self.bases && e == self.degree)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!(
            "stage: {}\nclauses: {}\nbases: {}\ndegree: {}\naux: {}..{}\n",
            self.stage, self.clauses, self.bases, self.degree, self.aux_start, self.aux_end
        );
        match self.claimed() {
            Some((b, e)) => s.push_str(&format!(
                "claimed-bases: {b}\nclaimed-degree: {e}\nmatches-claim: {}\n",
                if b == self.bases && e == self.degree { "yes" } else { "no" }
            )),
            None => s.push_str("claimed-bases: none\nclaimed-degree: none\n"),
        }
        s
    }
}

fn t(a: usize, b: usize, d: usize) -> Permutation {
    Permutation::transposition(a, b, d).expect("wires below degree")
}

fn clause_block(i: usize, d: usize) -> [Permutation; 6] {
    let o = 6 * i;
    [
        t(o, o + 1, d),
        t(o + 1, o + 2, d),
        t(o, o + 1, d),
        t(o + 3, o + 4, d),
        t(o + 4, o + 5, d),
        t(o + 3, o + 4, d),
    ]
}

/// Variables that occur in some clause, ascending; one tether base each.
pub fn tether_variables(s: &SatInstance) -> Vec<usize> {
    let mut used = vec![false; s.n()];
    for c in s.clauses() {
        for &x in c {
            used[x] = true;
        }
    }
    (0..s.n()).filter(|&j| used[j]).collect()
}

pub fn sat_to_tethered(s: &SatInstance) -> Result<GdlpInstance> {
    let m = s.m();
    let d = 6 * m;
    let mut bases = Vec::with_capacity(12 * m + s.n());
    for i in 0..m {
        bases.extend(clause_block(i, d).into_iter().map(|perm| Base {
            perm,
            role: BaseRole::OuterSwitch,
        }));
    }
    for j in tether_variables(s) {
        let mut perm = Permutation::identity(d)?;
        for (i, clause) in s.clauses().iter().enumerate() {
            for (pos, &x) in clause.iter().enumerate() {
                if x == j {
                    let top = 6 * i + pos;
                    perm = perm.compose(&t(top, top + 3, d))?;
                }
            }
        }
        bases.push(Base {
            perm,
            role: BaseRole::Tether,
        });
    }
    for i in 0..m {
        bases.extend(clause_block(i, d).into_iter().map(|perm| Base {
            perm,
            role: BaseRole::OuterSwitch,
        }));
    }
    let mut target = Permutation::identity(d)?;
    for i in 0..m {
        let block: Vec<usize> = (6 * i..6 * i + 6).collect();
        target = target.compose(&Permutation::cycle(&block, d)?)?;
    }
    GdlpInstance::new(bases, target, 1)
}

/// Reads a satisfying assignment off a witness of the tethered instance:
/// variable `z_j` is true iff its tether base has an odd exponent.
pub fn extract_assignment(s: &SatInstance, w: &Witness) -> Result<Assignment> {
    let vars = tether_variables(s);
    let offset = 6 * s.m();
    let expected = 12 * s.m() + vars.len();
    if w.q() != expected || w.k() != 1 {
        return Err(Error::WitnessShape {
            rows: w.k(),
            cols: w.q(),
            bases: expected,
        });
    }
    let mut bits = vec![false; s.n()];
    for (k, &j) in vars.iter().enumerate() {
        bits[j] = w.rows()[0][offset + k] % 2 == 1;
    }
    Ok(Assignment::new(bits))
}

// Allocates fresh wires from the current degree.
struct Fresh {
    next: usize,
}

impl Fresh {
    fn take(&mut self) -> usize {
        self.next += 1;
        self.next - 1
    }
}

fn embed_all(bases: Vec<(Vec<Vec<usize>>, BaseRole)>, target: &Permutation, degree: usize) -> Result<GdlpInstance> {
    let bases = bases
        .into_iter()
        .map(|(cycles, role)| {
            let refs: Vec<&[usize]> = cycles.iter().map(Vec::as_slice).collect();
            Ok(Base {
                perm: Permutation::from_cycles(&refs, degree)?,
                role,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    GdlpInstance::new(bases, target.embed(degree)?, 1)
}

/// Each tether `(I_0 I_0+3)⋯(I_{p-1} I_{p-1}+3)` becomes `p` bases
/// `(K_{j-1} S_{j-1})(I_j I_j+3)(K_j S_j)` with indices taken mod `p`.
/// Fresh wires are allocated `K_0, S_0, K_1, S_1, ..` per tether, including
/// tethers of a single transposition, which stay as they are.
pub fn tethered_to_6(inst: &GdlpInstance) -> Result<GdlpInstance> {
    let mut fresh = Fresh { next: inst.degree() };
    let mut out = Vec::new();
    for (j, b) in inst.bases().iter().enumerate() {
        match b.role {
            BaseRole::OuterSwitch => out.push((b.perm.cycles(), b.role)),
            BaseRole::Tether => {
                let pairs = b.perm.cycles();
                let p = pairs.len();
                let ks: Vec<(usize, usize)> = (0..p).map(|_| (fresh.take(), fresh.take())).collect();
                if p == 1 {
                    out.push((pairs, BaseRole::Plain));
                    continue;
                }
                for (jj, pair) in pairs.iter().enumerate() {
                    let (kp, sp) = ks[(jj + p - 1) % p];
                    let (k, s) = ks[jj];
                    out.push((vec![vec![kp, sp], pair.clone(), vec![k, s]], BaseRole::GadgetSix));
                }
            }
            other => {
                return Err(Error::InvalidInstance(format!(
                    "base {j} has role {other}; expected a tethered instance"
                )))
            }
        }
    }
    embed_all(out, inst.target(), fresh.next)
}

/// Each `(A B)(C D)(E F)` gadget-six base becomes
/// `(A B)(L0 L1)`, `(C D)(L1 L2)`, `(E F)(L2 L3)`, `(L0 L1 L2 L3)`,
/// with the pairs taken in canonical cycle order.
pub fn expand_6_to_4(inst: &GdlpInstance) -> Result<GdlpInstance> {
    let mut fresh = Fresh { next: inst.degree() };
    let mut out = Vec::new();
    for (j, b) in inst.bases().iter().enumerate() {
        let cycles = b.perm.cycles();
        let support: usize = cycles.iter().map(Vec::len).sum();
        if b.role == BaseRole::GadgetSix {
            let l: Vec<usize> = (0..4).map(|_| fresh.take()).collect();
            for (k, pair) in cycles.iter().enumerate() {
                out.push((vec![pair.clone(), vec![l[k], l[k + 1]]], BaseRole::GadgetDouble));
            }
            out.push((vec![l.clone()], BaseRole::GadgetFourCycle));
        } else if support <= 4 {
            out.push((cycles, b.role));
        } else {
            return Err(Error::UnsupportedBase(format!(
                "base {j} {} has support {support} but role {}",
                b.perm, b.role
            )));
        }
    }
    embed_all(out, inst.target(), fresh.next)
}

/// Each `(β γ)(δ ε)` becomes `(β γ J0)`, `(β δ ε)`, `(J0 β J1)`,
/// `(β J0 J1)`; each `(ζ η θ κ)` becomes `(ζ η R)`, `(ζ θ κ)`, `(θ R)`.
pub fn expand_4_to_3(inst: &GdlpInstance) -> Result<GdlpInstance> {
    let mut fresh = Fresh { next: inst.degree() };
    let mut out = Vec::new();
    for (j, b) in inst.bases().iter().enumerate() {
        let cycles = b.perm.cycles();
        let support: usize = cycles.iter().map(Vec::len).sum();
        match b.role {
            BaseRole::GadgetDouble => {
                let (beta, gamma) = (cycles[0][0], cycles[0][1]);
                let (delta, eps) = (cycles[1][0], cycles[1][1]);
                let j0 = fresh.take();
                let j1 = fresh.take();
                out.push((vec![vec![beta, gamma, j0]], BaseRole::Plain));
                out.push((vec![vec![beta, delta, eps]], BaseRole::Plain));
                out.push((vec![vec![j0, beta, j1]], BaseRole::Plain));
                out.push((vec![vec![beta, j0, j1]], BaseRole::Plain));
            }
            BaseRole::GadgetFourCycle => {
                let c = &cycles[0];
                let (zeta, eta, theta, kappa) = (c[0], c[1], c[2], c[3]);
                let r = fresh.take();
                out.push((vec![vec![zeta, eta, r]], BaseRole::Plain));
                out.push((vec![vec![zeta, theta, kappa]], BaseRole::Plain));
                out.push((vec![vec![theta, r]], BaseRole::Plain));
            }
            _ if cycles.len() <= 1 && support <= 3 => out.push((cycles, b.role)),
            _ => {
                return Err(Error::UnsupportedBase(format!(
                    "base {j} {} is not a cycle of length at most 3 and has role {}",
                    b.perm, b.role
                )))
            }
        }
    }
    embed_all(out, inst.target(), fresh.next)
}

pub fn full_chain(s: &SatInstance, stage: Stage) -> Result<(GdlpInstance, StageReport)> {
    let mut inst = sat_to_tethered(s)?;
    let mut aux_start = 0;
    let mut aux_end = 0;
    for st in Stage::ALL.into_iter().skip(1).take_while(|&st| st <= stage) {
        let before = inst.degree();
        inst = match st {
            Stage::Six => tethered_to_6(&inst)?,
            Stage::Four => expand_6_to_4(&inst)?,
            Stage::Three => expand_4_to_3(&inst)?,
            Stage::Tethered => unreachable!(),
        };
        aux_start = before;
        aux_end = inst.degree();
    }
    let report = StageReport {
        stage,
        clauses: s.m(),
        bases: inst.base_count(),
        degree: inst.degree(),
        aux_start,
        aux_end,
    };
    Ok((inst, report))
}

/// Distinct products `α_0^e_0 ⋯ α_{q-1}^e_{q-1}` (`e_j < order(α_j)`) that
/// fix every element of `aux`.
pub fn gadget_outcomes(bases: &[Permutation], aux: &[usize]) -> Result<BTreeSet<Permutation>> {
    let first = bases
        .first()
        .ok_or_else(|| Error::InvalidInstance("no bases".into()))?;
    let d = first.degree();
    if let Some(&x) = aux.iter().find(|&&x| x >= d) {
        return Err(Error::IndexOutOfRange { index: x, degree: d });
    }
    let orders: Vec<u64> = bases.iter().map(Permutation::order).collect();
    let space = orders
        .iter()
        .try_fold(1u64, |acc, &o| acc.checked_mul(o).filter(|&v| v <= GADGET_MAX_PATTERNS));
    if space.is_none() {
        return Err(Error::BudgetExceeded {
            budget: GADGET_MAX_PATTERNS,
        });
    }
    let powers: Vec<Vec<Permutation>> = bases
        .iter()
        .zip(&orders)
        .map(|(b, &o)| (0..o).map(|e| b.power(e)).collect())
        .collect();
    let mut out = BTreeSet::new();
    let mut exps = vec![0usize; bases.len()];
    loop {
        let mut acc = Permutation::identity(d)?;
        for (pw, &e) in powers.iter().zip(&exps) {
            acc = acc.compose(&pw[e])?;
        }
        if aux.iter().all(|&x| acc.apply(x) == x) {
            out.insert(acc);
        }
        // odometer, last base fastest
        let mut k = bases.len();
        loop {
            if k == 0 {
                return Ok(out);
            }
            k -= 1;
            exps[k] += 1;
            if exps[k] < orders[k] as usize {
                break;
            }
            exps[k] = 0;
        }
    }
}

/// A gadget produced by one of the stage expansions, with the outcome set
/// it is meant to have: the powers of the base it replaces.
#[derive(Debug, Clone)]
pub struct GadgetCase {
    pub name: String,
    pub bases: Vec<Permutation>,
    pub aux: Vec<usize>,
    pub expected: BTreeSet<Permutation>,
}

impl GadgetCase {
    pub fn outcomes(&self) -> Result<BTreeSet<Permutation>> {
        gadget_outcomes(&self.bases, &self.aux)
    }
}

fn gadget_case(name: String, replaced: Base, expand: fn(&GdlpInstance) -> Result<GdlpInstance>) -> Result<GadgetCase> {
    let d = replaced.perm.degree();
    let source = replaced.perm.clone();
    let inst = GdlpInstance::new(vec![replaced], Permutation::identity(d)?, 1)?;
    let out = expand(&inst)?;
    let expected = (0..source.order())
        .map(|e| source.power(e).embed(out.degree()))
        .collect::<Result<_>>()?;
    Ok(GadgetCase {
        name,
        bases: out.bases().iter().map(|b| b.perm.clone()).collect(),
        aux: (d..out.degree()).collect(),
        expected,
    })
}

/// Tether chains for `p = 2, 3, 4`, the gadget-six expansion, and the
/// double and four-cycle expansions.
pub fn gadget_cases() -> Result<Vec<GadgetCase>> {
    let mut cases = Vec::new();
    for p in 2..=4 {
        let pairs: Vec<Vec<usize>> = (0..p).map(|j| vec![j, j + p]).collect();
        let refs: Vec<&[usize]> = pairs.iter().map(Vec::as_slice).collect();
        let tether = Base {
            perm: Permutation::from_cycles(&refs, 2 * p)?,
            role: BaseRole::Tether,
        };
        cases.push(gadget_case(format!("chain-{p}"), tether, tethered_to_6)?);
    }
    let six = Base {
        perm: Permutation::parse_cycles("(0 1)(2 3)(4 5)", 6)?,
        role: BaseRole::GadgetSix,
    };
    cases.push(gadget_case("six".into(), six, expand_6_to_4)?);
    let dbl = Base {
        perm: Permutation::parse_cycles("(0 1)(2 3)", 4)?,
        role: BaseRole::GadgetDouble,
    };
    cases.push(gadget_case("double".into(), dbl, expand_4_to_3)?);
    let four = Base {
        perm: Permutation::parse_cycles("(0 1 2 3)", 4)?,
        role: BaseRole::GadgetFourCycle,
    };
    cases.push(gadget_case("four-cycle".into(), four, expand_4_to_3)?);
    Ok(cases)
}
