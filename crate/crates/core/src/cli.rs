//! Command-line front end. `run` takes the full argv (program name first)
//! and returns the exit status and the text that goes to stdout.
//!
//! Exit status: 0 success or "yes", 1 "no", 2 usage or input error,
//! 3 budget exceeded.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::benes::BenesNetwork;
use crate::error::Error;
use crate::graphroute::{gdlp3_to_routing, solve_routing, verify_routing, PathSet, RoutingInstance};
use crate::instance::{decide_k1, verify_witness, GdlpInstance, Witness};
use crate::perm::Permutation;
use crate::reduce::{full_chain, gadget_cases, Stage};
use crate::sat::{brute_force_sat, SatInstance};
use crate::search::SearchOptions;

pub const OK: i32 = 0;
pub const NO: i32 = 1;
pub const USAGE: i32 = 2;
pub const BUDGET: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StageArg {
    Tethered,
    Six,
    Four,
    Three,
    Graph,
}

impl StageArg {
    fn gdlp_stage(self) -> Stage {
        match self {
            StageArg::Tethered => Stage::Tethered,
            StageArg::Six => Stage::Six,
            StageArg::Four => Stage::Four,
            StageArg::Three | StageArg::Graph => Stage::Three,
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "gdlp", version, about = "GDLP reductions, solvers and checkers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Reduce a SAT file to a GDLP instance (or a routing instance)
    Reduce {
        input: PathBuf,
        #[arg(long, value_enum, default_value = "tethered")]
        stage: StageArg,
        #[arg(short = 'o')]
        output: Option<PathBuf>,
        #[arg(long)]
        khat: Option<usize>,
    },
    /// Decide k <= 1 for a GDLP instance
    Solve {
        input: PathBuf,
        #[arg(long)]
        no_prune: bool,
        #[arg(long)]
        budget: Option<u64>,
        #[arg(long)]
        khat: Option<usize>,
        #[arg(short = 'o')]
        output: Option<PathBuf>,
    },
    /// Check a witness against a GDLP instance, or a path set against a routing instance
    Verify { instance: PathBuf, certificate: PathBuf },
    /// Brute-force a SAT file
    SatSolve { input: PathBuf },
    /// Print a Benes network, or route a target through it
    Benes {
        #[arg(long)]
        size: usize,
        #[arg(long)]
        target: Option<String>,
    },
    /// Solve a routing instance
    Route {
        input: PathBuf,
        #[arg(long)]
        no_prune: bool,
        #[arg(long)]
        budget: Option<u64>,
        #[arg(short = 'o')]
        output: Option<PathBuf>,
    },
    /// Compare the SAT oracle with the GDLP solver on random instances
    Roundtrip {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "tethered")]
        stage: StageArg,
        #[arg(long)]
        no_prune: bool,
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Enumerate gadget outcome sets and compare with the replaced bases
    GadgetCheck,
}

pub struct Outcome {
    pub status: i32,
    pub output: String,
}

struct Fail {
    status: i32,
    message: String,
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::BudgetExceeded { .. } => BUDGET,
            _ => USAGE,
        };
        Fail {
            status,
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Fail {
    Fail {
        status: USAGE,
        message: message.into(),
    }
}

fn read(path: &Path) -> Result<String, Fail> {
    fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Fail> {
    fs::write(path, text).map_err(|e| usage(format!("{}: {e}", path.display())))
}

// Parse errors name the file as well as the line.
fn parsed<T>(path: &Path, r: crate::error::Result<T>) -> Result<T, Fail> {
    r.map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn options(no_prune: bool, budget: Option<u64>) -> SearchOptions {
    let mut o = if no_prune {
        SearchOptions::naive()
    } else {
        SearchOptions::default()
    };
    if let Some(b) = budget {
        o = o.with_budget(b);
    }
    o
}

fn result_line(yes: bool) -> &'static str {
    if yes {
        "result: yes\n"
    } else {
        "result: no\n"
    }
}

pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let status = if e.use_stderr() { USAGE } else { OK };
            return Outcome {
                status,
                output: e.to_string(),
            };
        }
    };
    let mut out = String::new();
    match dispatch(cli.command, &mut out) {
        Ok(status) => Outcome { status, output: out },
        Err(f) => {
            if f.status == BUDGET {
                out.push_str("result: unknown\n");
            }
            out.push_str(&format!("error: {}\n", f.message));
            Outcome {
                status: f.status,
                output: out,
            }
        }
    }
}

fn dispatch(cmd: Command, out: &mut String) -> Result<i32, Fail> {
    match cmd {
        Command::Reduce {
            input,
            stage,
            output,
            khat,
        } => {
            let sat = parsed(&input, SatInstance::parse(&read(&input)?))?;
            let (mut inst, report) = full_chain(&sat, stage.gdlp_stage())?;
            if let Some(k) = khat {
                inst = inst.with_khat(k)?;
            }
            let text = if stage == StageArg::Graph {
                gdlp3_to_routing(&inst)?.to_text()
            } else {
                inst.to_text()
            };
            match output {
                Some(path) => {
                    write(&path, &text)?;
                    out.push_str(&report.to_text());
                }
                None => out.push_str(&text),
            }
            Ok(OK)
        }
        Command::Solve {
            input,
            no_prune,
            budget,
            khat,
            output,
        } => {
            let mut inst = parsed(&input, GdlpInstance::parse(&read(&input)?))?;
            if let Some(k) = khat {
                inst = inst.with_khat(k)?;
            }
            if inst.khat() != 1 {
                return Err(usage(format!(
                    "only k <= 1 can be decided; instance has khat = {}",
                    inst.khat()
                )));
            }
            match decide_k1(&inst, &options(no_prune, budget))? {
                Some(w) => {
                    out.push_str(result_line(true));
                    match output {
                        Some(path) => write(&path, &w.to_text())?,
                        None => out.push_str(&w.to_text()),
                    }
                    Ok(OK)
                }
                None => {
                    out.push_str(result_line(false));
                    Ok(NO)
                }
            }
        }
        Command::Verify {
            instance,
            certificate,
        } => {
            let text = read(&instance)?;
            let cert = read(&certificate)?;
            let head = text.lines().map(str::trim).find(|l| !l.is_empty()).unwrap_or("");
            let ok = if head.starts_with("gdlp v1") {
                let inst = parsed(&instance, GdlpInstance::parse(&text))?;
                let w = parsed(&certificate, Witness::parse(&cert))?;
                verify_witness(&inst, &w)?
            } else if head.starts_with("route v1") {
                let r = parsed(&instance, RoutingInstance::parse(&text))?;
                let p = parsed(&certificate, PathSet::parse(&cert))?;
                verify_routing(&r, &p)?
            } else {
                return Err(usage(format!(
                    "{}: line 1: expected a 'gdlp v1' or 'route v1' header",
                    instance.display()
                )));
            };
            out.push_str(result_line(ok));
            Ok(if ok { OK } else { NO })
        }
        Command::SatSolve { input } => {
            let sat = parsed(&input, SatInstance::parse(&read(&input)?))?;
            match brute_force_sat(&sat)? {
                Some(a) => {
                    out.push_str(result_line(true));
                    out.push_str(&format!("assignment: {}\n", a.to_text()));
                    Ok(OK)
                }
                None => {
                    out.push_str(result_line(false));
                    Ok(NO)
                }
            }
        }
        Command::Benes { size, target } => {
            let net = BenesNetwork::build(size)?;
            out.push_str(&format!("size: {size}\nswitches: {}\n", net.switch_count()));
            match target {
                None => {
                    for s in net.switches() {
                        out.push_str(&format!("switch {} {}\n", s.top, s.bottom));
                    }
                }
                Some(t) => {
                    let target = Permutation::parse_cycles(&t, size)?;
                    let settings = net.route(&target)?;
                    out.push_str(&format!("settings: {}\n", settings.to_text()));
                    out.push_str(&format!("middle-crosses: {}\n", net.middle_cross_count(&settings)?));
                }
            }
            Ok(OK)
        }
        Command::Route {
            input,
            no_prune,
            budget,
            output,
        } => {
            let r = parsed(&input, RoutingInstance::parse(&read(&input)?))?;
            match solve_routing(&r, &options(no_prune, budget))? {
                Some(p) => {
                    out.push_str(result_line(true));
                    match output {
                        Some(path) => write(&path, &p.to_text())?,
                        None => out.push_str(&p.to_text()),
                    }
                    Ok(OK)
                }
                None => {
                    out.push_str(result_line(false));
                    Ok(NO)
                }
            }
        }
        Command::Roundtrip {
            n,
            m,
            samples,
            seed,
            stage,
            no_prune,
            budget,
        } => {
            if n == 0 || m == 0 {
                return Err(usage("--n and --m must be positive"));
            }
            let opts = options(no_prune, budget);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut agree = 0;
            let mut over = 0;
            for _ in 0..samples {
                let sat = SatInstance::random(&mut rng, n, m)?;
                let expect = brute_force_sat(&sat)?.is_some();
                let (inst, _) = full_chain(&sat, stage.gdlp_stage())?;
                let got = if stage == StageArg::Graph {
                    solve_routing(&gdlp3_to_routing(&inst)?, &opts).map(|p| p.is_some())
                } else {
                    decide_k1(&inst, &opts).map(|w| w.is_some())
                };
                match got {
                    Ok(g) if g == expect => agree += 1,
                    Ok(_) => {}
                    Err(Error::BudgetExceeded { .. }) => over += 1,
                    Err(e) => return Err(e.into()),
                }
            }
            out.push_str(&format!("agree: {agree}/{samples}\n"));
            if over > 0 {
                out.push_str(&format!("budget-exceeded: {over}\n"));
                return Ok(BUDGET);
            }
            out.push_str(result_line(agree == samples));
            Ok(if agree == samples { OK } else { NO })
        }
        Command::GadgetCheck => {
            let mut all = true;
            for case in gadget_cases()? {
                let got = case.outcomes()?;
                let ok = got == case.expected;
                all &= ok;
                let fmt = |set: &std::collections::BTreeSet<Permutation>| {
                    set.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(" ")
                };
                out.push_str(&format!(
                    "{}: {}\n  observed: {}\n  expected: {}\n",
                    case.name,
                    if ok { "match" } else { "mismatch" },
                    fmt(&got),
                    fmt(&case.expected)
                ));
            }
            out.push_str(result_line(all));
            Ok(if all { OK } else { NO })
        }
    }
}
