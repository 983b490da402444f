//! Command-line front end.
//!
//! Exit codes: 0 success, 1 input/parse/resource error, 2 a checked property
//! failed, 64 usage error, 70 internal defect.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::bivalued::{self, BalancedOutcome};
use crate::certify::{self, FairnessReport, Witness};
use crate::error::{Error, Result};
use crate::fixtures::Fixture;
use crate::io::format::allocation_map;
use crate::io::{self as fileio, GenClass, GenParams, ResultFile};
use crate::model::{preprocess_zero_chores, Allocation, Instance, InstanceClass, PaymentVector};
use crate::oracle::{self, EnumBudget, Predicate};
use crate::rational::format_rational;
use crate::{repro, three, twotype};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_VERIFY: i32 = 2;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_DEFECT: i32 = 70;

#[derive(Debug, Parser)]
#[command(name = "choreq", version, about = "Fair and efficient allocation of indivisible chores")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run a solver on an instance file.
    Solve(SolveArgs),
    /// Check fairness and efficiency properties of a given allocation.
    Check(CheckArgs),
    /// List every allocation satisfying a set of properties (brute force).
    Oracle(OracleArgs),
    /// Write a seeded random instance.
    Gen(GenArgs),
    /// Replay a bundled worked example and check its documented claims.
    Repro(ReproArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Alg {
    ThreeAgents,
    TwoType,
    BivaluedBalanced,
    BivaluedEfx,
    TwoAry,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Prop {
    Ef,
    Ef1,
    Efx,
    Pef1,
    Ce,
    Po,
    Fpo,
}

#[derive(Debug, Args)]
struct SolveArgs {
    #[arg(long, value_enum)]
    alg: Alg,
    #[arg(long)]
    input: PathBuf,
    /// Result file; printed to stdout when absent.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Record the solver trace, in FILE if given, else inside the result.
    #[arg(long, value_name = "FILE", num_args = 0..=1)]
    trace: Option<Option<PathBuf>>,
    /// Certify the solver's guarantees and exit 2 if any fails.
    #[arg(long)]
    verify: bool,
}

#[derive(Debug, Args)]
struct CheckArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    alloc: PathBuf,
    #[arg(long, value_enum, value_delimiter = ',', required = true)]
    props: Vec<Prop>,
    /// Needed for pef1 and ce.
    #[arg(long)]
    payments: Option<PathBuf>,
    /// Allocation budget for po.
    #[arg(long, env = oracle::ENUM_LIMIT_ENV)]
    limit: Option<u64>,
}

#[derive(Debug, Args)]
struct OracleArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, value_delimiter = ',', required = true)]
    find: Vec<Prop>,
    /// Needed for pef1.
    #[arg(long)]
    payments: Option<PathBuf>,
    #[arg(long, env = oracle::ENUM_LIMIT_ENV)]
    limit: Option<u64>,
}

#[derive(Debug, Args)]
struct GenArgs {
    /// general, three-agent, two-type, bivalued, two-ary or identical.
    #[arg(long)]
    class: String,
    #[arg(long)]
    agents: usize,
    #[arg(long)]
    chores: usize,
    /// High cost of bivalued instances (low is 1).
    #[arg(long)]
    k: Option<i64>,
    #[arg(long, default_value_t = 1)]
    low: i64,
    #[arg(long, default_value_t = 10)]
    high: i64,
    #[arg(long, env = "CHOREQ_SEED", default_value_t = 0)]
    seed: u64,
    /// Printed to stdout when absent.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ReproArgs {
    /// B1..B6, thm2 or all.
    #[arg(long)]
    example: String,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{text}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(stderr, "{text}");
                    EXIT_USAGE
                }
            };
        }
    };
    let result = match cli.command {
        Command::Solve(a) => solve(&a, stdout, stderr),
        Command::Check(a) => check(&a, stdout),
        Command::Oracle(a) => find(&a, stdout),
        Command::Gen(a) => gen(&a, stdout),
        Command::Repro(a) => run_repro(&a, stdout),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            match e {
                Error::Defect(_) => EXIT_DEFECT,
                _ => EXIT_INPUT,
            }
        }
    }
}

fn read(path: &Path) -> Result<Vec<u8>> {
    fs::read(path).map_err(|e| Error::input(format!("cannot read {}: {e}", path.display())))
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::input(format!("cannot write {}: {e}", path.display())))
}

fn emit(out: &mut dyn Write, text: &str) -> Result<()> {
    out.write_all(text.as_bytes())
        .map_err(|e| Error::input(format!("cannot write output: {e}")))
}

fn load_instance(path: &Path) -> Result<Instance> {
    fileio::parse_instance(&read(path)?)
}

struct Solved {
    allocation: Allocation,
    /// Present whenever the output is certified by a market equilibrium.
    payments: Option<PaymentVector>,
    trace: Value,
    guarantees: Vec<Prop>,
}

fn solve(args: &SolveArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let inst = load_instance(&args.input)?;
    let solved = run_solver(args.alg, &inst)?;
    let mut result = ResultFile::new(&inst, &solved.allocation, solved.payments.as_ref());
    let mut code = EXIT_OK;
    if args.verify {
        for &prop in &solved.guarantees {
            if matches!(prop, Prop::Ce | Prop::Pef1) && solved.payments.is_none() {
                continue;
            }
            let report = match evaluate(prop, &inst, &solved.allocation, solved.payments.as_ref(), EnumBudget::from_env()) {
                Ok(r) => r,
                Err(Error::Resource(msg)) => {
                    emit(err, &format!("{}: cannot verify ({msg})\n", prop_name(prop)))?;
                    code = EXIT_VERIFY;
                    continue;
                }
                Err(e) => return Err(e),
            };
            if !report.holds {
                code = EXIT_VERIFY;
            }
            result.certificate.push(report);
        }
    }
    match &args.trace {
        Some(Some(path)) => write_file(path, &format!("{:#}\n", solved.trace))?,
        Some(None) => result.trace = Some(solved.trace),
        None => {}
    }
    let json = result.to_json();
    match &args.output {
        Some(path) => {
            write_file(path, &json)?;
            for r in &result.certificate {
                emit(out, &format!("{}\n", describe(&inst, r)))?;
            }
        }
        None => emit(out, &json)?,
    }
    Ok(code)
}

fn run_solver(alg: Alg, inst: &Instance) -> Result<Solved> {
    match alg {
        Alg::ThreeAgents => {
            if inst.num_agents() != 3 {
                return Err(Error::input(format!(
                    "three-agents requires exactly 3 agents, got {}",
                    inst.num_agents()
                )));
            }
            with_zero_chores(inst, |reduced| {
                let o = three::solve_three_agents(reduced)?;
                Ok((o.allocation, o.payments, serde_json::to_value(&o.trace).expect("trace serializes")))
            })
            .map(|(allocation, payments, trace)| Solved {
                allocation,
                payments,
                trace,
                guarantees: vec![Prop::Ef1, Prop::Ce, Prop::Fpo],
            })
        }
        Alg::TwoType => with_zero_chores(inst, |reduced| {
            if reduced.num_agents() > 0 && InstanceClass::distinct_rows(reduced) == 1 {
                let (alloc, pay) = twotype::solve_identical(reduced)?;
                return Ok((alloc, pay, json!({ "single_type": true })));
            }
            let o = twotype::solve_two_type(reduced)?;
            let trace = json!({ "partition": o.partition, "trace": o.trace });
            Ok((o.allocation, o.payments, trace))
        })
        .map(|(allocation, payments, trace)| Solved {
            allocation,
            payments,
            trace,
            guarantees: vec![Prop::Pef1, Prop::Ce, Prop::Ef1, Prop::Fpo],
        }),
        Alg::BivaluedBalanced => {
            let normal = bivalued::rescale_bivalued(inst)?;
            let o = bivalued::balanced_ef1_fpo(&normal)?;
            Ok(Solved {
                trace: json!({ "k": format_rational(normal.k()), "balanced": balanced_trace(&o) }),
                allocation: o.allocation,
                payments: Some(o.payments),
                guarantees: vec![Prop::Ef1, Prop::Ce, Prop::Fpo],
            })
        }
        Alg::BivaluedEfx => {
            let normal = bivalued::rescale_bivalued(inst)?;
            let o = bivalued::efx_fpo_three_bivalued(&normal)?;
            Ok(Solved {
                trace: json!({
                    "k": format_rational(normal.k()),
                    "case": o.case,
                    "balanced": o.balanced.as_ref().map(balanced_trace),
                    "repair": o.events,
                }),
                allocation: o.allocation,
                payments: Some(o.payments),
                guarantees: vec![Prop::Efx, Prop::Ce, Prop::Fpo],
            })
        }
        Alg::TwoAry => {
            let o = bivalued::solve_two_ary(inst)?;
            Ok(Solved {
                trace: json!({ "balanced": balanced_trace(&o.balanced) }),
                allocation: o.allocation,
                payments: None,
                guarantees: vec![Prop::Ef1, Prop::Po],
            })
        }
    }
}

fn balanced_trace(o: &BalancedOutcome) -> Value {
    json!({ "groups": o.groups.groups(), "events": o.events })
}

/// Runs `solver` with zero-cost chores set aside, then puts them back.
/// Payments survive only if nothing was set aside.
fn with_zero_chores<F>(inst: &Instance, solver: F) -> Result<(Allocation, Option<PaymentVector>, Value)>
where
    F: FnOnce(&Instance) -> Result<(Allocation, PaymentVector, Value)>,
{
    let red = preprocess_zero_chores(inst);
    let (alloc, pay, trace) = solver(&red.reduced)?;
    Ok((red.lift(&alloc), red.lift_payments(&pay), trace))
}

fn prop_name(p: Prop) -> &'static str {
    match p {
        Prop::Ef => "ef",
        Prop::Ef1 => "ef1",
        Prop::Efx => "efx",
        Prop::Pef1 => "pef1",
        Prop::Ce => "ce",
        Prop::Po => "po",
        Prop::Fpo => "fpo",
    }
}

fn evaluate(
    prop: Prop,
    inst: &Instance,
    alloc: &Allocation,
    pay: Option<&PaymentVector>,
    budget: EnumBudget,
) -> Result<FairnessReport> {
    let needs_pay = || pay.ok_or_else(|| Error::input(format!("{} needs --payments", prop_name(prop))));
    match prop {
        Prop::Ef => certify::is_ef(inst, alloc),
        Prop::Ef1 => certify::is_ef1(inst, alloc),
        Prop::Efx => certify::is_efx(inst, alloc),
        Prop::Pef1 => Ok(certify::is_pef1(inst, alloc, needs_pay()?)),
        Prop::Ce => Ok(certify::is_ce(inst, alloc, needs_pay()?)),
        Prop::Po => oracle::po_report(inst, alloc, budget),
        Prop::Fpo => oracle::fpo_report(inst, alloc),
    }
}

/// One line: `prop: pass` or `prop: FAIL (witness)` with agent and chore names.
fn describe(inst: &Instance, report: &FairnessReport) -> String {
    let Some(w) = &report.witness else {
        return report.to_string();
    };
    let detail = match w {
        Witness::Envy {
            envier,
            envied,
            own,
            other,
        } => format!(
            "{} envies {}: {} > {}",
            inst.agent_name(*envier),
            inst.agent_name(*envied),
            format_rational(own),
            format_rational(other)
        ),
        Witness::Unallocated { chore } => format!("{} is unallocated", inst.chore_name(*chore)),
        Witness::NotMpb {
            agent,
            chore,
            ratio,
            mpb_ratio,
        } => format!(
            "{} holds {} at ratio {} above its best {}",
            inst.agent_name(*agent),
            inst.chore_name(*chore),
            format_rational(ratio),
            format_rational(mpb_ratio)
        ),
        Witness::Dominated { owners } => {
            let alloc = Allocation::from_owners(inst.num_agents(), owners).expect("witness owners are valid");
            format!("dominated by {}", json!(allocation_map(inst, &alloc)))
        }
        Witness::FractionallyDominated { total, lp_optimum } => format!(
            "total cost {} exceeds the fractional optimum {}",
            format_rational(total),
            format_rational(lp_optimum)
        ),
    };
    format!("{report} ({detail})")
}

fn budget(limit: Option<u64>) -> EnumBudget {
    limit.map(EnumBudget).unwrap_or_default()
}

fn check(args: &CheckArgs, out: &mut dyn Write) -> Result<i32> {
    let inst = load_instance(&args.input)?;
    let alloc = fileio::parse_allocation(&inst, &read(&args.alloc)?)?;
    let pay = match &args.payments {
        Some(p) => Some(fileio::parse_payments(&inst, &read(p)?)?),
        None => None,
    };
    let mut code = EXIT_OK;
    for &prop in &args.props {
        let report = evaluate(prop, &inst, &alloc, pay.as_ref(), budget(args.limit))?;
        if !report.holds {
            code = EXIT_VERIFY;
        }
        emit(out, &format!("{}\n", describe(&inst, &report)))?;
    }
    Ok(code)
}

fn find(args: &OracleArgs, out: &mut dyn Write) -> Result<i32> {
    let inst = load_instance(&args.input)?;
    let pay = match &args.payments {
        Some(p) => Some(fileio::parse_payments(&inst, &read(p)?)?),
        None => None,
    };
    let mut preds = Vec::new();
    for &prop in &args.find {
        preds.push(match prop {
            Prop::Ef => Predicate::Ef,
            Prop::Ef1 => Predicate::Ef1,
            Prop::Efx => Predicate::Efx,
            Prop::Po => Predicate::Po,
            Prop::Fpo => Predicate::Fpo,
            Prop::Pef1 => Predicate::Pef1(
                pay.clone()
                    .ok_or_else(|| Error::input("pef1 needs --payments"))?,
            ),
            Prop::Ce => return Err(Error::input("ce is not an allocation property; use check")),
        });
    }
    let found = oracle::find_allocations(&inst, &preds, budget(args.limit))?;
    let names: Vec<&str> = args.find.iter().map(|&p| prop_name(p)).collect();
    emit(out, &format!("{} allocation(s) satisfy {}\n", found.len(), names.join(",")))?;
    for alloc in &found {
        emit(out, &format!("{}\n", json!(allocation_map(&inst, alloc))))?;
    }
    Ok(EXIT_OK)
}

fn gen(args: &GenArgs, out: &mut dyn Write) -> Result<i32> {
    let class: GenClass = args.class.parse()?;
    let mut params = GenParams::new(args.agents, args.chores).with_range(args.low, args.high);
    params.k = args.k;
    let inst = fileio::generate(class, &params, args.seed)?;
    let text = fileio::serialize_instance(&inst);
    match &args.output {
        Some(path) => write_file(path, &text)?,
        None => emit(out, &text)?,
    }
    Ok(EXIT_OK)
}

fn run_repro(args: &ReproArgs, out: &mut dyn Write) -> Result<i32> {
    let fixtures: Vec<Fixture> = if args.example.eq_ignore_ascii_case("all") {
        Fixture::ALL.to_vec()
    } else {
        vec![args.example.parse()?]
    };
    let mut code = EXIT_OK;
    for f in fixtures {
        let report = repro::run(f)?;
        emit(out, &report.render())?;
        if !report.all_passed() {
            code = EXIT_VERIFY;
        }
    }
    Ok(code)
}

