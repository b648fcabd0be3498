//! Command-line front end.
//!
//! Exit status: 0 on success, 2 for unreadable or invalid input and usage
//! errors, 1 for internal failures (including oracle mismatches in `check`).
//! Node ids are 1-based on the command line and in all output. Values are
//! printed in the file's integer domain; decimal input is scaled by 10^6 and
//! the scale is echoed as `scale=1000000`.

pub mod bench;

use std::fmt::Write as _;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::Rng;
use serde_json::json;

use crate::bitree::CoverageMode;
use crate::covering_dp::{solve_direct, solve_indirect, solve_single_maxcov, Solution};
use crate::error::Error;
use crate::hardness::{build_wn_instance, collide_one, random_interleaved, WnTuple};
use crate::instance::{parse_instance, parse_structured, serialize, serialize_structured, Instance};
use crate::medianoid::{solve_medianoid, MedianoidInstance};
use crate::oracles::{check_hardness, rng_from_seed, run_equivalence_suite, GenConfig, Shape};
use bench::{run_bench, Construction, CSV_HEADER, MIN_REPS};

pub const SEED_ENV: &str = "COVERTREE_SEED";

#[derive(Debug, Parser)]
#[command(name = "covertree", version, about = "Covering subtrees, maximum coverage and medianoids on trees")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Optimal indirect covering subtree.
    Solve {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, value_enum, default_value_t = Mode::Weak)]
        mode: Mode,
        /// Print the subtree's nodes and edges.
        #[arg(long)]
        witness: bool,
    },
    /// Best single facility node (maximum coverage).
    Maxcov {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, value_enum, default_value_t = Mode::Weak)]
        mode: Mode,
    },
    /// Best new facility against the existing set X; penalties are weights.
    Medianoid {
        #[command(flatten)]
        input: InputArgs,
        /// Comma-separated ids of X.
        #[arg(long = "x", allow_hyphen_values = true)]
        x: String,
    },
    /// Direct covering subtree (customers covered only by membership).
    Direct {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        witness: bool,
    },
    /// Print a generated instance.
    Gen {
        #[command(subcommand)]
        what: GenCommand,
    },
    /// Time the penalty engine on random trees.
    Bench {
        /// Comma-separated tree sizes.
        #[arg(long, default_value = "8192,16384,32768,65536,131072")]
        sizes: String,
        #[arg(long, default_value_t = MIN_REPS)]
        reps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the CSV here instead of stdout.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Comma-separated subset of symmetric,descendant,father.
        #[arg(long, default_value = "symmetric,descendant,father")]
        constructions: String,
    },
    /// Cross-check fast routines against brute-force oracles.
    Check {
        #[arg(value_enum, default_value_t = Suite::All)]
        suite: Suite,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Largest instance size (tuple length for `wn`).
        #[arg(long, default_value_t = 12)]
        nmax: usize,
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
}

#[derive(Debug, Subcommand)]
enum GenCommand {
    /// Seeded random tree.
    Random {
        #[arg(long, default_value_t = 10)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = ShapeArg::UniformRandom)]
        shape: ShapeArg,
        #[arg(long, default_value_t = 9)]
        cost_max: u64,
        #[arg(long, default_value_t = 9)]
        penalty_max: u64,
        #[arg(long, default_value_t = 15)]
        radius_max: u64,
        #[arg(long, value_enum, default_value_t = FormatArg::Text)]
        format: FormatArg,
    },
    /// Coverage instance encoding a tuple (xs, ys).
    Wn {
        #[arg(long, allow_hyphen_values = true)]
        xs: String,
        #[arg(long, allow_hyphen_values = true)]
        ys: String,
        #[arg(long, value_enum, default_value_t = FormatArg::Text)]
        format: FormatArg,
    },
}

#[derive(Debug, Args)]
struct InputArgs {
    /// Instance file, or `-` for stdin.
    file: PathBuf,
    #[arg(long, value_enum, default_value_t = FormatArg::Text)]
    format: FormatArg,
    /// Emit one JSON document.
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Mode {
    Weak,
    Strict,
}

impl From<Mode> for CoverageMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Weak => CoverageMode::Weak,
            Mode::Strict => CoverageMode::Strict,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Text,
    Structured,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ShapeArg {
    UniformRandom,
    Path,
    Caterpillar,
    Star,
    BalancedBinary,
}

impl From<ShapeArg> for Shape {
    fn from(s: ShapeArg) -> Self {
        match s {
            ShapeArg::UniformRandom => Shape::UniformRandom,
            ShapeArg::Path => Shape::Path,
            ShapeArg::Caterpillar => Shape::Caterpillar,
            ShapeArg::Star => Shape::Star,
            ShapeArg::BalancedBinary => Shape::BalancedBinary,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Suite {
    All,
    Wn,
}

/// An error with the exit status it maps to.
#[derive(Debug)]
struct Failure {
    code: u8,
    msg: String,
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure { code: 2, msg: msg.into() }
}

fn internal(msg: impl Into<String>) -> Failure {
    Failure { code: 1, msg: msg.into() }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::CapExceeded { .. } => internal(e.to_string()),
            _ => usage(e.to_string()),
        }
    }
}

type CliResult = Result<String, Failure>;

pub fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match dispatch(cli.command) {
        Ok(out) => {
            print!("{out}");
            let _ = io::stdout().flush();
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("covertree: {}", f.msg.trim_end());
            ExitCode::from(f.code)
        }
    }
}

fn dispatch(cmd: Command) -> CliResult {
    match cmd {
        Command::Solve { input, mode, witness } => {
            let t = read_instance(&input)?;
            let sol = solve_indirect(&t, mode.into());
            Ok(render_solution(&t, &sol, witness, input.json))
        }
        Command::Direct { input, witness } => {
            let t = read_instance(&input)?;
            let sol = solve_direct(&t)?;
            Ok(render_solution(&t, &sol, witness, input.json))
        }
        Command::Maxcov { input, mode } => {
            let t = read_instance(&input)?;
            let best = solve_single_maxcov(&t, mode.into());
            if input.json {
                let doc = json!({
                    "node": best.node + 1, "penalty": best.penalty, "covered": best.covered, "scale": t.scale(),
                });
                return Ok(format!("{doc}\n"));
            }
            Ok(format!("node={} penalty={} covered={}\n{}", best.node + 1, best.penalty, best.covered, scale_line(&t)))
        }
        Command::Medianoid { input, x } => {
            let t = read_instance(&input)?;
            let ids = parse_ids(&x, t.n())?;
            let scale = t.scale();
            let mi = MedianoidInstance::new(t, ids)?;
            let best = solve_medianoid(&mi)?;
            if input.json {
                let doc = json!({ "node": best.node + 1, "captured": best.captured, "scale": scale });
                return Ok(format!("{doc}\n"));
            }
            Ok(format!("node={} captured={}\n{}", best.node + 1, best.captured, scale_line(mi.tree())))
        }
        Command::Gen { what } => gen(what),
        Command::Bench { sizes, reps, seed, csv, constructions } => {
            let sizes = parse_list::<usize>(&sizes, "size")?;
            if let Some(&s) = sizes.iter().find(|&&s| s < 2) {
                return Err(usage(format!("bench sizes must be at least 2, got {s}")));
            }
            let cons = parse_constructions(&constructions)?;
            let seed = effective_seed(seed)?;
            let records = run_bench(&sizes, &cons, reps, seed)?;
            let mut text = format!("{CSV_HEADER}\n");
            for r in &records {
                let _ = writeln!(text, "{}", r.csv_row());
            }
            match csv {
                Some(path) => {
                    std::fs::write(&path, &text).map_err(|e| internal(format!("{}: {e}", path.display())))?;
                    Ok(String::new())
                }
                None => Ok(text),
            }
        }
        Command::Check { suite, trials, seed, nmax, inject_fault } => {
            if nmax == 0 {
                return Err(usage("--nmax must be at least 1"));
            }
            let seed = effective_seed(seed)?;
            let (text, ok) = match suite {
                Suite::All => {
                    let cfg = GenConfig { seed, n: 1..=nmax, ..GenConfig::default() };
                    let report = run_equivalence_suite(&cfg, trials, inject_fault)?;
                    (report.to_string(), report.passed())
                }
                Suite::Wn => check_wn(trials, seed, nmax),
            };
            if ok {
                Ok(text)
            } else {
                Err(internal(text))
            }
        }
    }
}

/// Hardness tri-oracle agreement on `trials` tuples of length `1..=nmax`.
fn check_wn(trials: usize, seed: u64, nmax: usize) -> (String, bool) {
    let mut lines = Vec::new();
    let mut failures = Vec::new();
    for trial in 0..trials {
        let s = seed.wrapping_add(trial as u64);
        let mut rng = rng_from_seed(s);
        let n = rng.gen_range(1..=nmax);
        let member = random_interleaved(n, &mut rng);
        let collided = collide_one(&member, &mut rng);
        let status = match check_hardness(&member, &collided) {
            Ok(()) => "pass",
            Err(e) => {
                failures.push(format!("FAIL trial {trial} seed {s}: {e}"));
                "fail"
            }
        };
        lines.push(format!("{trial},{s},hardness,{status}"));
    }
    let mut text = format!("{trials} trials, {} failures\n", failures.len());
    for l in failures.iter().chain(&lines) {
        let _ = writeln!(text, "{l}");
    }
    (text, failures.is_empty())
}

fn gen(what: GenCommand) -> CliResult {
    let (t, format) = match what {
        GenCommand::Random { n, seed, shape, cost_max, penalty_max, radius_max, format } => {
            if n == 0 {
                return Err(usage("--n must be at least 1"));
            }
            let cfg = GenConfig {
                seed: effective_seed(seed)?,
                n: n..=n,
                cost: 0..=cost_max,
                penalty: 0..=penalty_max,
                radius: 0..=radius_max,
                shape: shape.into(),
            };
            (crate::oracles::gen_random_tree(&cfg)?, format)
        }
        GenCommand::Wn { xs, ys, format } => {
            let tuple = WnTuple::new(parse_list(&xs, "x")?, parse_list(&ys, "y")?)?;
            let wn = build_wn_instance(&tuple)?
                .ok_or_else(|| usage("xs are not strictly increasing; the tuple is not in W_n"))?;
            (wn.instance, format)
        }
    };
    Ok(match format {
        FormatArg::Text => serialize(&t),
        FormatArg::Structured => serialize_structured(&t) + "\n",
    })
}

fn read_instance(input: &InputArgs) -> Result<Instance, Failure> {
    let text = if input.file.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(|e| usage(format!("stdin: {e}")))?;
        s
    } else {
        std::fs::read_to_string(&input.file).map_err(|e| usage(format!("{}: {e}", input.file.display())))?
    };
    let parsed = match input.format {
        FormatArg::Text => parse_instance(&text),
        FormatArg::Structured => parse_structured(&text),
    };
    parsed.map_err(|e| usage(format!("{}: {e}", input.file.display())))
}

fn render_solution(t: &Instance, sol: &Solution, witness: bool, as_json: bool) -> String {
    let nodes: Vec<usize> = sol.nodes.iter().map(|v| v + 1).collect();
    let edges: Vec<(usize, usize)> = sol.edges.iter().map(|&(a, b)| (a + 1, b + 1)).collect();
    if as_json {
        let mut doc = json!({ "total": sol.total, "setup": sol.setup, "penalty": sol.penalty, "scale": t.scale() });
        if witness {
            doc["nodes"] = json!(nodes);
            doc["edges"] = json!(edges);
        }
        return format!("{doc}\n");
    }
    let mut out = format!("total={} setup={} penalty={}\n", sol.total, sol.setup, sol.penalty);
    if witness {
        let join = |v: Vec<String>| v.join(",");
        let _ = writeln!(out, "nodes=[{}]", join(nodes.iter().map(|v| v.to_string()).collect()));
        let _ = writeln!(out, "edges=[{}]", join(edges.iter().map(|(a, b)| format!("{a}-{b}")).collect()));
    }
    out + &scale_line(t)
}

fn scale_line(t: &Instance) -> String {
    if t.scale() == 1 {
        String::new()
    } else {
        format!("scale={}\n", t.scale())
    }
}

fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>, Failure> {
    s.split(',')
        .map(str::trim)
        .filter(|f| !f.is_empty())
        .map(|f| f.parse().map_err(|_| usage(format!("invalid {what} {f:?}"))))
        .collect()
}

/// 1-based ids to 0-based; an empty list is rejected by the medianoid itself.
fn parse_ids(s: &str, n: usize) -> Result<Vec<usize>, Failure> {
    parse_list::<usize>(s, "node id")?
        .into_iter()
        .map(|id| if (1..=n).contains(&id) { Ok(id - 1) } else { Err(usage(format!("node id {id} not in 1..{n}"))) })
        .collect()
}

fn parse_constructions(s: &str) -> Result<Vec<Construction>, Failure> {
    s.split(',')
        .map(|c| {
            Construction::ALL
                .into_iter()
                .find(|k| k.name() == c.trim())
                .ok_or_else(|| usage(format!("unknown construction {c:?}")))
        })
        .collect()
}

/// `COVERTREE_SEED`, when set, replaces `--seed`.
fn effective_seed(flag: u64) -> Result<u64, Failure> {
    match std::env::var(SEED_ENV) {
        Ok(v) => v.trim().parse().map_err(|_| usage(format!("{SEED_ENV}={v:?} is not a 64-bit seed"))),
        Err(_) => Ok(flag),
    }
}
