//! The `pnta` command line.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::analysis::fuzz;
use crate::format::{parse_automaton, parse_timed_word, print_automaton, print_timed_word};
use crate::generators::{gen_lk, gen_lpk};
use crate::model::{is_nrtta, validate, Automaton, ParamValuation};
use crate::parametric::{
    emptiness_fixed_with, parametric_emptiness_with, prepare_fixed, CheckOptions, Decision, Engine, ParametricError,
};
use crate::rational::Rational;
use crate::regions::{build_region_automaton_with_budget, RegionError, SymbolicLasso, DEFAULT_REGION_BUDGET};
use crate::semantics::{reachable_configs, TimedWord};
use crate::translate::ta_to_nrtta;

pub const EXIT_EMPTY: i32 = 0;
pub const EXIT_NONEMPTY: i32 = 10;
pub const EXIT_ERROR: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "pnta", version, about = "Emptiness checking for parametric nrtTA")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Decide Büchi emptiness, for some parameter value or a fixed one.
    Check(CheckArgs),
    /// Translate a timed automaton into an equivalent nrtTA.
    Translate {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Configurations reachable after reading a finite timed word.
    Simulate {
        file: PathBuf,
        /// A word file, or inline events such as `a@1/2 b@1`.
        #[arg(long)]
        word: String,
        #[arg(long)]
        mu: Option<Rational>,
    },
    /// Build the region automaton.
    Regions {
        file: PathBuf,
        #[arg(long)]
        mu: Option<Rational>,
        #[arg(long)]
        dot: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_REGION_BUDGET)]
        max_regions: usize,
    },
    /// Print a generated automaton.
    Gen {
        family: Family,
        #[arg(long)]
        k: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Check well-formedness and report the automaton class.
    Validate { file: PathBuf },
    /// Run the randomized property suites.
    Analyze {
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long)]
        jobs: Option<usize>,
    },
}

#[derive(Args, Debug)]
pub struct CheckArgs {
    pub file: PathBuf,
    /// Check this parameter value only.
    #[arg(long)]
    pub mu: Option<Rational>,
    /// Print the lasso and a concrete timed word.
    #[arg(long)]
    pub witness: bool,
    #[arg(long)]
    pub json: bool,
    #[arg(long, default_value_t = DEFAULT_REGION_BUDGET)]
    pub max_regions: usize,
    /// Translate one-clock inputs that are not nrtTA.
    #[arg(long, default_value_t = true, num_args = 0..=1, default_missing_value = "true", action = clap::ArgAction::Set)]
    pub auto_translate: bool,
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    #[arg(long, value_enum, default_value_t = EngineArg::OnTheFly)]
    pub engine: EngineArg,
    /// Leave `wall_time_ms` out of the JSON report.
    #[arg(long)]
    pub no_timings: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum EngineArg {
    OnTheFly,
    Explicit,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Family {
    Lk,
    Lpk,
}

#[derive(Serialize, Debug, Clone, PartialEq, Eq)]
pub struct LassoReport {
    pub stem: Vec<String>,
    pub cycle: Vec<String>,
}

#[derive(Serialize, Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub verdict: &'static str,
    pub witness_mu: Option<String>,
    pub candidates_checked: usize,
    pub region_nodes: usize,
    pub translated: bool,
    /// Lasso regions are in time units multiplied by this factor.
    pub time_scale: Option<u64>,
    pub lasso: Option<LassoReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub word: Option<Vec<(String, String)>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<u128>,
}

fn fail(msg: impl std::fmt::Display) -> i32 {
    eprintln!("error: {msg}");
    EXIT_ERROR
}

fn load(path: &Path) -> Result<Automaton, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    parse_automaton(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn write_out(path: Option<&Path>, text: &str) -> Result<(), String> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| format!("{}: {e}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn lasso_report(a: &Automaton, l: &SymbolicLasso) -> LassoReport {
    let (stem, cycle) = l.describe(a);
    LassoReport { stem, cycle }
}

/// Report for a decision; the lasso is rendered against the scaled automaton.
pub fn build_report(d: &Decision, with_word: bool) -> Report {
    let w = d.verdict.witness();
    let word = match (with_word, w) {
        (true, Some(w)) => {
            w.word(1).ok().map(|tw| tw.events().iter().map(|(l, t)| (l.clone(), t.to_string())).collect())
        }
        _ => None,
    };
    Report {
        verdict: if d.verdict.is_empty() { "empty" } else { "nonempty" },
        witness_mu: d.verdict.witness_mu().map(|m| m.to_string()),
        candidates_checked: d.candidates_checked,
        region_nodes: d.region_nodes,
        translated: d.translated,
        time_scale: w.map(|w| w.scaled_by),
        lasso: w.map(|w| lasso_report(&w.scaled, &w.lasso)),
        word,
        wall_time_ms: None,
    }
}

fn error_code(e: &ParametricError) -> i32 {
    match e {
        ParametricError::Region(RegionError::RegionBudgetExceeded(_)) => EXIT_BUDGET,
        _ => EXIT_ERROR,
    }
}

fn cmd_check(args: &CheckArgs) -> i32 {
    let a = match load(&args.file) {
        Ok(a) => a,
        Err(e) => return fail(e),
    };
    let opts = CheckOptions {
        max_regions: args.max_regions,
        auto_translate: args.auto_translate,
        jobs: args.jobs.max(1),
        engine: match args.engine {
            EngineArg::OnTheFly => Engine::OnTheFly,
            EngineArg::Explicit => Engine::Explicit,
        },
    };
    let start = Instant::now();
    let result = match &args.mu {
        Some(mu) => {
            validate(&a).map_err(ParametricError::Invalid).and_then(|_| emptiness_fixed_with(&a, Some(mu), &opts))
        }
        None => parametric_emptiness_with(&a, &opts),
    };
    let d = match result {
        Ok(d) => d,
        Err(e) => {
            eprintln!("error: {e}");
            return error_code(&e);
        }
    };
    let mut report = build_report(&d, args.witness);
    if !args.no_timings {
        report.wall_time_ms = Some(start.elapsed().as_millis());
    }
    if args.json {
        println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
    } else {
        println!("verdict: {}", report.verdict);
        if let Some(mu) = &report.witness_mu {
            println!("witness mu: {mu}");
        }
        println!("candidates checked: {}", report.candidates_checked);
        println!("region nodes: {}", report.region_nodes);
        if report.translated {
            println!("input translated to nrtTA");
        }
        if args.witness {
            if let Some(l) = &report.lasso {
                if let Some(d) = report.time_scale.filter(|d| *d != 1) {
                    println!("lasso regions scaled by {d}");
                }
                println!("stem:");
                l.stem.iter().for_each(|s| println!("  {s}"));
                println!("cycle:");
                l.cycle.iter().for_each(|s| println!("  {s}"));
            }
            if let Some(w) = &report.word {
                let events: Vec<String> = w.iter().map(|(l, t)| format!("{l}@{t}")).collect();
                println!("word: {}", events.join(" "));
            }
        }
    }
    if d.verdict.is_empty() {
        EXIT_EMPTY
    } else {
        EXIT_NONEMPTY
    }
}

/// Reads a word from a file, or from inline `LETTER@TIME` tokens.
pub fn read_word(spec: &str) -> Result<TimedWord, String> {
    let path = Path::new(spec);
    if path.is_file() {
        let text = fs::read_to_string(path).map_err(|e| e.to_string())?;
        return parse_timed_word(&text).map_err(|e| e.to_string());
    }
    let mut events = Vec::new();
    for tok in spec.split(|c: char| c.is_whitespace() || c == ',').filter(|t| !t.is_empty()) {
        let (letter, t) = tok.split_once('@').ok_or_else(|| format!("bad event `{tok}`, expected LETTER@TIME"))?;
        let t: Rational = t.parse().map_err(|_| format!("bad timestamp `{t}`"))?;
        events.push((letter.to_string(), t));
    }
    TimedWord::new(events).map_err(|e| e.to_string())
}

fn param_valuation(a: &Automaton, mu: Option<&Rational>) -> Result<ParamValuation, String> {
    match (a.has_params(), mu) {
        (true, Some(m)) => Ok(ParamValuation::single(m.clone())),
        (false, None) => Ok(ParamValuation::empty()),
        (true, None) => Err("the automaton is parametric; pass --mu".into()),
        (false, Some(_)) => Err("--mu given for an automaton without parameters".into()),
    }
}

fn cmd_simulate(file: &Path, word: &str, mu: Option<&Rational>) -> i32 {
    let run = || -> Result<bool, String> {
        let a = load(file)?;
        validate(&a).map_err(|es| es.iter().map(|e| e.to_string()).collect::<Vec<_>>().join("; "))?;
        let w = read_word(word)?;
        let i = param_valuation(&a, mu)?;
        let configs = reachable_configs(&a, &w, &i);
        println!("word: {}", print_timed_word(&w).trim_end().replace('\n', ", "));
        println!("reachable configurations: {}", configs.len());
        for c in &configs {
            println!("  {} {}", a.state_name(c.state), c.valuation);
        }
        let acc = configs.iter().any(|c| a.is_accepting(c.state));
        println!("accepting reachable: {}", if acc { "yes" } else { "no" });
        Ok(acc)
    };
    match run() {
        Ok(_) => 0,
        Err(e) => fail(e),
    }
}

fn cmd_regions(file: &Path, mu: Option<&Rational>, dot: Option<&Path>, budget: usize) -> i32 {
    let run = || -> Result<i32, String> {
        let a = load(file)?;
        validate(&a).map_err(|es| es.iter().map(|e| e.to_string()).collect::<Vec<_>>().join("; "))?;
        param_valuation(&a, mu)?;
        let p = prepare_fixed(&a, mu).map_err(|e| e.to_string())?;
        let ra = match build_region_automaton_with_budget(&p.scaled, p.max, budget) {
            Ok(ra) => ra,
            Err(e @ RegionError::RegionBudgetExceeded(_)) => {
                eprintln!("error: {e}");
                return Ok(EXIT_BUDGET);
            }
            Err(e) => return Err(e.to_string()),
        };
        let accepting = (0..ra.node_count()).filter(|&n| ra.is_accepting(n)).count();
        if p.d != 1 {
            println!("time scaled by {}", p.d);
        }
        println!("region bound: {}", p.max);
        println!("nodes: {}", ra.node_count());
        println!("edges: {}", ra.edge_count());
        println!("accepting nodes: {accepting}");
        if let Some(path) = dot {
            write_out(Some(path), &ra.to_dot())?;
        }
        Ok(0)
    };
    run().unwrap_or_else(fail)
}

fn cmd_validate(file: &Path) -> i32 {
    let a = match load(file) {
        Ok(a) => a,
        Err(e) => return fail(e),
    };
    match validate(&a) {
        Ok(()) => {
            println!("ok");
            println!("states: {}", a.states.len());
            println!("clocks: {}", a.clocks.len());
            println!("parameters: {}", a.params.len());
            println!("nrtTA: {}", if is_nrtta(&a) { "yes" } else { "no" });
            0
        }
        Err(es) => {
            for e in es {
                eprintln!("error: {e}");
            }
            EXIT_ERROR
        }
    }
}

fn cmd_analyze(seed: u64, trials: usize, jobs: Option<usize>) -> i32 {
    let go = || fuzz::run_all(seed, trials);
    let reports = match jobs {
        Some(j) => match rayon::ThreadPoolBuilder::new().num_threads(j.max(1)).build() {
            Ok(pool) => pool.install(go),
            Err(e) => return fail(e),
        },
        None => go(),
    };
    let mut ok = true;
    for r in &reports {
        let status = if r.passed() { "PASS" } else { "FAIL" };
        println!("{status} {:<36} {} trials, {} failures", r.name, r.trials, r.failures);
        if let Some(f) = &r.first_failure {
            println!("     first failure: {f}");
        }
        ok &= r.passed();
    }
    if ok {
        0
    } else {
        1
    }
}

fn cmd_translate(file: &Path, output: Option<&Path>) -> i32 {
    let a = match load(file) {
        Ok(a) => a,
        Err(e) => return fail(e),
    };
    if let Err(es) = validate(&a) {
        return fail(es.iter().map(|e| e.to_string()).collect::<Vec<_>>().join("; "));
    }
    write_out(output, &print_automaton(&ta_to_nrtta(&a))).map_or_else(fail, |_| 0)
}

fn cmd_gen(family: Family, k: usize, output: Option<&Path>) -> i32 {
    if k == 0 {
        return fail("--k must be at least 1");
    }
    let a = match family {
        Family::Lk => gen_lk(k),
        Family::Lpk => gen_lpk(k),
    };
    write_out(output, &print_automaton(&a)).map_or_else(fail, |_| 0)
}

pub fn dispatch(cli: Cli) -> i32 {
    match cli.command {
        Command::Check(args) => cmd_check(&args),
        Command::Translate { file, output } => cmd_translate(&file, output.as_deref()),
        Command::Simulate { file, word, mu } => cmd_simulate(&file, &word, mu.as_ref()),
        Command::Regions { file, mu, dot, max_regions } => cmd_regions(&file, mu.as_ref(), dot.as_deref(), max_regions),
        Command::Gen { family, k, output } => cmd_gen(family, k, output.as_deref()),
        Command::Validate { file } => cmd_validate(&file),
        Command::Analyze { seed, trials, jobs } => cmd_analyze(seed, trials, jobs),
    }
}

pub fn run() -> i32 {
    match Cli::try_parse() {
        Ok(cli) => dispatch(cli),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { 0 };
            let _ = e.print();
            code
        }
    }
}
