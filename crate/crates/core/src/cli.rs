//! Command-line frontend. Exit codes: 0 MS, 2 NOT MS, 1 error, 3 when a
//! catalog run finds an inconsistency.

use std::ffi::OsString;
use std::io::Write;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::algebra::GroupAlgebra;
use crate::catalog::{parse_group_spec, run_catalog, summary_table, DEFAULT_MAX_ORDER};
use crate::criteria::{decide_central_full, decide_vg, task_id, MsVerdict};
use crate::gfq::{seed_from_env, splitting_field_for, task_rng};
use crate::groups::FiniteGroup;
use crate::oracle::{
    central_witness_search, enumerate_central_idempotents, random_idempotent_search, scan_all_idempotents,
    IdempotentReport, ScanBudget, DEFAULT_MAX_STATES, DEFAULT_TRIALS, MAX_LISTED_BLOCKS,
};
use crate::structure::block_idempotents;

pub const EXIT_MS: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_NOT_MS: i32 = 2;
pub const EXIT_INCONSISTENT: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "msalg", version, about = "Trace-zero idempotents and Mathieu subspaces of finite group algebras")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Common {
    /// Group spec, e.g. cyclic:6, product(cyclic:2,symmetric:3), cayley:@file
    #[arg(long)]
    group: String,
    /// Characteristic: 0 or a prime
    #[arg(long)]
    prime: u64,
    /// RNG seed (default: MSALG_SEED or 0xC0FFEE)
    #[arg(long)]
    seed: Option<u64>,
    /// Compact single-line JSON
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SubjectArg {
    Vg,
    Central,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OracleMode {
    Scan,
    Central,
    Random,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide whether V_G (or V_G ∩ Z(KG)) is a Mathieu subspace
    Decide {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value = "vg")]
        subject: SubjectArg,
        /// Attach the block idempotents to the central verdict
        #[arg(long)]
        emit_idempotents: bool,
    },
    /// Block idempotent summary: traces, dimensions, full defect
    Blocks {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        emit_idempotents: bool,
    },
    /// Degrees of the semisimple algebra behind the V_G decision
    Degrees {
        #[command(flatten)]
        common: Common,
    },
    /// Run one oracle directly
    Oracle {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum)]
        mode: OracleMode,
        #[arg(long, default_value_t = DEFAULT_TRIALS)]
        trials: u64,
        #[arg(long, default_value_t = DEFAULT_MAX_STATES)]
        budget_states: u64,
    },
    /// Run the builtin catalog, writing JSONL records
    Catalog {
        #[arg(long, default_value_t = DEFAULT_MAX_ORDER)]
        max_order: usize,
        /// Comma-separated primes
        #[arg(long, value_delimiter = ',', required = true, num_args = 1..)]
        primes: Vec<u64>,
        /// Output file (default: stdout)
        #[arg(long)]
        out: Option<std::path::PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = DEFAULT_TRIALS)]
        trials: u64,
        #[arg(long, default_value_t = DEFAULT_MAX_STATES)]
        budget_states: u64,
        /// Add wall-clock milliseconds to each record
        #[arg(long)]
        timing: bool,
    },
}

struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Failure {
        Failure(e.to_string())
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(Failure(msg)) => {
            eprintln!("error: {msg}");
            EXIT_ERROR
        }
    }
}

fn emit<T: Serialize>(value: &T, compact: bool) -> Result<(), Failure> {
    let s = if compact {
        serde_json::to_string(value)?
    } else {
        serde_json::to_string_pretty(value)?
    };
    let mut out = std::io::stdout().lock();
    writeln!(out, "{s}")?;
    Ok(())
}

fn load(common: &Common) -> Result<(Arc<FiniteGroup>, u64), Failure> {
    let g = parse_group_spec(&common.group)?;
    Ok((Arc::new(g), common.seed.unwrap_or_else(seed_from_env)))
}

fn splitting_algebra(g: &Arc<FiniteGroup>, p: u64) -> Result<GroupAlgebra, Failure> {
    if p == 0 {
        return Err(Failure("this command needs a prime characteristic".into()));
    }
    Ok(GroupAlgebra::over_splitting_field(g.clone(), p)?)
}

fn dispatch(cmd: Command) -> Result<i32, Failure> {
    match cmd {
        Command::Decide {
            common,
            subject,
            emit_idempotents,
        } => {
            let (g, seed) = load(&common)?;
            let p = common.prime;
            let central = || -> Result<MsVerdict, Failure> {
                let d = decide_central_full(&g, p, seed)?;
                let mut v = d.verdict;
                if emit_idempotents {
                    v.idempotents = d.blocks.map(|b| b.idempotents_json());
                }
                Ok(v)
            };
            let verdicts = match subject {
                SubjectArg::Vg => vec![decide_vg(&g, p, seed)?],
                SubjectArg::Central => vec![central()?],
                SubjectArg::Both => vec![decide_vg(&g, p, seed)?, central()?],
            };
            if verdicts.len() == 1 {
                emit(&verdicts[0], common.json)?;
            } else {
                emit(&verdicts, common.json)?;
            }
            Ok(if verdicts.iter().all(|v| v.is_ms) { EXIT_MS } else { EXIT_NOT_MS })
        }
        Command::Blocks {
            common,
            emit_idempotents,
        } => {
            let (g, seed) = load(&common)?;
            let alg = splitting_algebra(&g, common.prime)?;
            let blocks = block_idempotents(&alg, &mut task_rng(seed, task_id(g.label(), common.prime)))?;
            let mut v = json!({
                "group": g.label(),
                "order": g.order(),
                "p": common.prime,
                "field": alg.field().spec(),
                "count": blocks.count(),
                "blocks": blocks.summary(),
                "seed": seed,
            });
            if emit_idempotents {
                v["idempotents"] = Value::from(blocks.idempotents_json());
            }
            emit(&v, common.json)?;
            Ok(EXIT_MS)
        }
        Command::Degrees { common } => {
            let (g, seed) = load(&common)?;
            let p = common.prime;
            if p == 0 {
                return Err(Failure("degrees need a prime characteristic".into()));
            }
            let degrees = crate::criteria::relevant_degrees(&g, p, seed)?;
            let on = if (g.order() as u64).is_multiple_of(p) { "G/H" } else { "G" };
            let v = match degrees {
                Some(d) => json!({
                    "group": g.label(), "p": p, "degrees": d, "computed_on": on, "seed": seed,
                }),
                None => json!({
                    "group": g.label(), "p": p, "notice": "NO_NORMAL_SYLOW", "seed": seed,
                }),
            };
            emit(&v, common.json)?;
            Ok(EXIT_MS)
        }
        Command::Oracle {
            common,
            mode,
            trials,
            budget_states,
        } => {
            let (g, seed) = load(&common)?;
            let p = common.prime;
            let alg = splitting_algebra(&g, p)?;
            let budget = ScanBudget {
                max_states: budget_states,
                trials,
                seed,
            };
            let base = json!({
                "group": g.label(),
                "p": p,
                "field": splitting_field_for(&g, p)?.spec(),
                "seed": seed,
            });
            let list = |r: &[IdempotentReport]| r.iter().map(IdempotentReport::to_json).collect::<Vec<_>>();
            let mut v = base;
            match mode {
                OracleMode::Scan => {
                    let all = scan_all_idempotents(&alg, &budget)?;
                    v["mode"] = "scan".into();
                    v["count"] = all.len().into();
                    v["witnesses"] = all.iter().filter(|r| r.is_witness()).count().into();
                    v["idempotents"] = list(&all).into();
                }
                OracleMode::Central => {
                    let blocks = block_idempotents(&alg, &mut task_rng(seed, task_id(g.label(), p)))?;
                    v["mode"] = "central".into();
                    v["blocks"] = blocks.count().into();
                    if blocks.count() <= MAX_LISTED_BLOCKS {
                        let all = enumerate_central_idempotents(&blocks)?;
                        v["idempotents"] = list(&all).into();
                    }
                    v["witness"] = match central_witness_search(&blocks)? {
                        Some((subset, r)) => json!({ "subset": subset, "idempotent": r.to_json() }),
                        None => Value::Null,
                    };
                }
                OracleMode::Random => {
                    v["mode"] = "random".into();
                    v["trials"] = trials.into();
                    v["witness"] = random_idempotent_search(&alg, &budget)
                        .map(|r| r.to_json())
                        .unwrap_or(Value::Null);
                }
            }
            emit(&v, common.json)?;
            Ok(EXIT_MS)
        }
        Command::Catalog {
            max_order,
            primes,
            out,
            seed,
            trials,
            budget_states,
            timing,
        } => {
            if max_order > DEFAULT_MAX_ORDER {
                return Err(Failure(format!("--max-order is capped at {DEFAULT_MAX_ORDER}")));
            }
            if let Some(&bad) = primes.iter().find(|&&p| !crate::gfq::is_prime(p)) {
                return Err(Failure(format!("{bad} is not a prime")));
            }
            let budget = ScanBudget {
                max_states: budget_states,
                trials,
                seed: seed.unwrap_or_else(seed_from_env),
            };
            let records = run_catalog(max_order, &primes, &budget, timing)?;
            let mut text = String::new();
            for r in &records {
                text.push_str(&serde_json::to_string(r)?);
                text.push('\n');
            }
            match out {
                Some(path) => std::fs::write(&path, text).map_err(|e| Failure(format!("{}: {e}", path.display())))?,
                None => std::io::stdout().lock().write_all(text.as_bytes())?,
            }
            eprint!("{}", summary_table(&records));
            Ok(if records.iter().all(|r| r.consistent) {
                EXIT_MS
            } else {
                EXIT_INCONSISTENT
            })
        }
    }
}
