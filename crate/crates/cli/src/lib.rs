//! The `bce` command line. Exit codes: 0 success or YES, 1 NO, 2 errors and
//! failed verification.

use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use bicluster_core::analysis::{branching_factor, lrr_cd, BranchingVector};
use bicluster_core::generate::{gen_p6, gen_planted, gen_random, gen_tight};
use bicluster_core::io::{parse_instance, parse_solution, write_instance, write_solution};
use bicluster_core::kernel::{kernelize, Instance, Reduction};
use bicluster_core::oracle::{oracle_opt_with, OracleMode, DEFAULT_STATE_LIMIT};
use bicluster_core::solver::{solve_decision_with, solve_optimal_with, PruneMode, SolveStats, SolverConfig};
use bicluster_core::verify::verify;
use bicluster_core::{BipartiteGraph, EditSet, Side};
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "bce", version, about = "Exact Bicluster Editing")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct SearchOpts {
    /// Print search statistics as comment lines.
    #[arg(long)]
    stats: bool,
    #[arg(long, value_enum, default_value_t = Prune::Local)]
    prune: Prune,
    /// Explore search nodes above this depth in parallel.
    #[arg(long, default_value_t = 0)]
    parallel_depth: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum Prune {
    Off,
    Local,
    Global,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Plain,
    Twins,
    DeletionMaximal,
}

#[derive(Subcommand)]
enum Cmd {
    /// Decide whether FILE can be solved within the budget.
    Solve {
        #[arg(long)]
        budget: usize,
        /// Kernelize before searching.
        #[arg(long)]
        kernelize: bool,
        #[command(flatten)]
        opts: SearchOpts,
        file: PathBuf,
    },
    /// Minimum editing cost of FILE.
    Optimal {
        #[command(flatten)]
        opts: SearchOpts,
        file: PathBuf,
    },
    /// Apply the reduction rules and print the reduced instance.
    Kernelize {
        #[arg(long)]
        budget: usize,
        file: PathBuf,
    },
    /// Brute-force optimum of a small instance.
    Oracle {
        #[arg(long, value_enum, default_value_t = Mode::Plain)]
        mode: Mode,
        #[arg(long, default_value_t = DEFAULT_STATE_LIMIT)]
        limit: u64,
        file: PathBuf,
    },
    /// Check a solution file against an instance.
    Verify {
        #[arg(long)]
        budget: Option<usize>,
        file: PathBuf,
        solution: PathBuf,
    },
    /// Generate an instance.
    Gen {
        #[command(subcommand)]
        family: Family,
    },
    /// Branching factor of a vector, or lrr(c, d).
    Analyze {
        /// Comma-separated entries, e.g. 1,2,3,3,4.
        #[arg(long, conflicts_with = "cd", required_unless_present = "cd")]
        vector: Option<String>,
        #[arg(long, num_args = 2, value_names = ["C", "D"])]
        cd: Option<Vec<u32>>,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        /// Digits after the decimal point.
        #[arg(long, default_value_t = 5)]
        digits: usize,
    },
}

#[derive(Subcommand)]
enum Family {
    /// Disjoint six-vertex paths.
    P6 { copies: usize },
    /// Disjoint copies of the path with doubled left side.
    Tight { copies: usize },
    /// Independent edges with probability P.
    Random { n_left: usize, n_right: usize, p: f64, seed: u64 },
    /// Noisy disjoint blocks, e.g. `--blocks 2x3,1x1`.
    Planted {
        #[arg(long, value_delimiter = ',', value_parser = parse_block)]
        blocks: Vec<(usize, usize)>,
        #[arg(long)]
        noise: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn parse_block(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s.split_once('x').ok_or_else(|| format!("expected LxR, got {:?}", s))?;
    let n = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("{}: {}", t, e));
    Ok((n(a)?, n(b)?))
}

struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    if path == Path::new("-") {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        return Ok(s);
    }
    std::fs::read_to_string(path).map_err(|e| Failure(format!("{}: {}", path.display(), e)))
}

fn load(path: &Path) -> Result<BipartiteGraph, Failure> {
    parse_instance(&read(path)?).map_err(|e| Failure(format!("{}: {}", path.display(), e)))
}

fn config(o: &SearchOpts) -> SolverConfig {
    let prune = match o.prune {
        Prune::Off => PruneMode::Off,
        Prune::Local => PruneMode::Local,
        Prune::Global => PruneMode::Global,
    };
    SolverConfig { prune, parallel_depth: o.parallel_depth, ..Default::default() }
}

fn stats_lines(s: &SolveStats) -> String {
    format!(
        "c nodes {}\nc max_depth {}\nc rule degree_one {}\nc rule twins {}\nc rule merge {}\nc rule general {}\nc rule degree_two_leaves {}\nc pruned {}\n",
        s.nodes, s.max_depth, s.degree_one, s.twins, s.merge, s.general, s.degree_two_leaves, s.pruned
    )
}

fn dispatch(cmd: Cmd, out: &mut dyn Write) -> Result<i32, Failure> {
    match cmd {
        Cmd::Solve { budget, kernelize: kern, opts, file } => {
            let g = load(&file)?;
            let inst = Instance::new(g.clone(), budget);
            let r = if kern {
                match kernelize(&inst).reduction {
                    Reduction::Infeasible => None,
                    Reduction::Reduced(red) => Some(solve_decision_with(&red, &config(&opts))),
                }
            } else {
                Some(solve_decision_with(&inst, &config(&opts)))
            };
            let yes = r.as_ref().is_some_and(|r| r.is_yes());
            if kern {
                // The reduced instance hides removed vertices; report the
                // decision only.
                writeln!(out, "{}", if yes { "s YES" } else { "s NO" })?;
            } else {
                let r = r.as_ref().unwrap();
                write!(out, "{}", write_solution(&g, r.witness.as_ref()))?;
            }
            if let (true, Some(r)) = (opts.stats, &r) {
                write!(out, "{}", stats_lines(&r.stats))?;
            }
            Ok(if yes { 0 } else { 1 })
        }
        Cmd::Optimal { opts, file } => {
            let g = load(&file)?;
            let r = solve_optimal_with(&g, &config(&opts));
            write!(out, "{}", write_solution(&g, r.witness.as_ref()))?;
            if opts.stats {
                write!(out, "{}", stats_lines(&r.stats))?;
            }
            Ok(0)
        }
        Cmd::Kernelize { budget, file } => {
            let g = load(&file)?;
            let k = kernelize(&Instance::new(g, budget));
            for step in &k.trace.steps {
                writeln!(out, "c {}", step)?;
            }
            match k.reduction {
                Reduction::Infeasible => {
                    writeln!(out, "s NO")?;
                    Ok(1)
                }
                Reduction::Reduced(red) => {
                    let (c, maps) = red.graph.compact();
                    writeln!(out, "c budget {}", red.budget)?;
                    for (side, name) in [(Side::Left, "left"), (Side::Right, "right")] {
                        write!(out, "c kept {}", name)?;
                        for i in &maps[side as usize] {
                            write!(out, " {}", i + 1)?;
                        }
                        writeln!(out)?;
                    }
                    write!(out, "{}", write_instance(&c))?;
                    Ok(0)
                }
            }
        }
        Cmd::Oracle { mode, limit, file } => {
            let g = load(&file)?;
            let mode = match mode {
                Mode::Plain => OracleMode::Plain,
                Mode::Twins => OracleMode::TwinRespecting,
                Mode::DeletionMaximal => OracleMode::DeletionMaximal,
            };
            let (_, b) = oracle_opt_with(&g, mode, limit)?;
            let w = EditSet::between(&g, &b.to_graph(&g));
            write!(out, "{}", write_solution(&g, Some(&w)))?;
            Ok(0)
        }
        Cmd::Verify { budget, file, solution } => {
            let g = load(&file)?;
            let sol = parse_solution(&read(&solution)?).map_err(|e| Failure(format!("{}: {}", solution.display(), e)))?;
            match verify(&g, &sol, budget) {
                Ok(()) => {
                    writeln!(out, "OK")?;
                    Ok(0)
                }
                Err(vs) => {
                    for v in vs {
                        writeln!(out, "{}", v)?;
                    }
                    Ok(2)
                }
            }
        }
        Cmd::Gen { family } => {
            let text = match family {
                Family::P6 { copies } => format!("c p6 {}\n{}", copies, write_instance(&gen_p6(copies)?)),
                Family::Tight { copies } => format!("c tight {}\n{}", copies, write_instance(&gen_tight(copies)?)),
                Family::Random { n_left, n_right, p, seed } => format!(
                    "c random {} {} {} {}\n{}",
                    n_left,
                    n_right,
                    p,
                    seed,
                    write_instance(&gen_random(n_left, n_right, p, seed)?)
                ),
                Family::Planted { blocks, noise, seed } => {
                    let pl = gen_planted(&blocks, noise, seed)?;
                    format!("c planted flips {}\n{}", pl.flips, write_instance(&pl.graph))
                }
            };
            write!(out, "{}", text)?;
            Ok(0)
        }
        Cmd::Analyze { vector, cd, tol, digits } => {
            if !(tol > 0.0) {
                return Err(Failure("tolerance must be positive".into()));
            }
            let r = match (vector, cd) {
                (Some(v), _) => branching_factor(&v.parse::<BranchingVector>()?, tol),
                (None, Some(cd)) => lrr_cd(cd[0], cd[1], tol)?,
                (None, None) => unreachable!("clap requires one of them"),
            };
            writeln!(out, "{:.*}", digits, r.value)?;
            Ok(0)
        }
    }
}

/// Runs the command line `args` (program name first).
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    match dispatch(cli.cmd, out) {
        Ok(code) => code,
        Err(Failure(msg)) => {
            let _ = writeln!(err, "error: {}", msg);
            2
        }
    }
}
