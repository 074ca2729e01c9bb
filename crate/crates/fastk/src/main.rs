//! Command-line front end: generate, kernelize, solve, verify.
//!
//! Exit codes: 0 for success / yes-instances, 1 for no-instances and failed
//! verification, 2 for usage and format errors.

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use fastk::exact::fas_exact_with_limit;
use fastk::heuristics::{HeuristicConfig, HeuristicKind};
use fastk::instance::{generate, parse_instance, serialize_instance, GeneratorKind, GeneratorSpec};
use fastk::kernelize::{kernel_linear, kernel_subquadratic, KernelResult, Verdict};
use fastk::tournament::Tournament;
use fastk::trace::{replay_trace, ReductionTrace};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "fastk", version, about = "Feedback arc set kernelization for tournaments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    Linear,
    Subquadratic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Heuristic {
    Indegree,
    Kwiksort,
    Exact,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Kind {
    Uniform,
    Planted,
}

#[derive(Args)]
struct HeuristicArgs {
    /// Ordering heuristic supplying the feedback arc set.
    #[arg(long, value_enum, default_value_t = Heuristic::Kwiksort)]
    heuristic: Heuristic,
    /// Restarts for the pivot-partition heuristic.
    #[arg(long, default_value_t = 32)]
    restarts: u32,
    /// Master seed; per-run seeds are derived by counter.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl HeuristicArgs {
    fn config(&self, exact_limit: usize) -> HeuristicConfig {
        HeuristicConfig {
            kind: match self.heuristic {
                Heuristic::Indegree => HeuristicKind::Indegree,
                Heuristic::Kwiksort => HeuristicKind::Kwiksort,
                Heuristic::Exact => HeuristicKind::Exact,
            },
            restarts: self.restarts,
            seed: self.seed,
            exact_limit,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Reduce an instance to an equivalent kernel.
    Kernelize {
        #[arg(long, value_enum)]
        mode: Mode,
        /// Parameter budget.
        #[arg(long)]
        k: u64,
        /// Accuracy knob for the linear mode's size target.
        #[arg(long, default_value_t = 0.5)]
        epsilon: f64,
        #[command(flatten)]
        heuristic: HeuristicArgs,
        #[arg(long)]
        input: PathBuf,
        /// Kernel destination; printed to stdout when omitted.
        #[arg(long)]
        output: Option<PathBuf>,
        /// Reduction trace destination.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Solve an instance exactly.
    Solve {
        #[arg(long)]
        input: PathBuf,
        /// When given, also decide fas <= k (exit 1 on no).
        #[arg(long)]
        k: Option<u64>,
        /// Vertex limit for the exact solver.
        #[arg(long, default_value_t = fastk::exact::DEFAULT_EXACT_LIMIT)]
        exact_limit: usize,
    },
    /// Generate an instance.
    Gen {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long)]
        n: usize,
        /// Number of planted reversals (planted kind only).
        #[arg(long, default_value_t = 0)]
        planted_k: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        output: PathBuf,
    },
    /// Replay a trace against an instance and compare with a kernel file.
    Verify {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        trace: PathBuf,
        #[arg(long)]
        kernel: PathBuf,
    },
}

fn read_instance(path: &Path) -> anyhow::Result<Tournament> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))?;
    parse_instance(&text).map_err(|e| anyhow::anyhow!("{}: {e}", path.display()))
}

fn print_stats(result: &KernelResult) {
    let stats = &result.stats;
    println!("vertices_before={}", stats.vertices_before);
    println!("vertices_after={}", stats.vertices_after);
    println!("k_before={}", stats.k_before);
    println!("k_after={}", result.k_remaining);
    match stats.achieved_s {
        Some(s) => println!("achieved_S={s}"),
        None => println!("achieved_S=-"),
    }
    println!(
        "verdict={}",
        match result.verdict {
            Verdict::Kernel => "KERNEL",
            Verdict::No => "NO",
        }
    );
    println!("rule1_deletions={}", stats.rule1_deletions);
    println!("rule2_reversals={}", stats.rule2_reversals);
    println!("rule3_arcs_reversed={}", stats.rule3_arcs_reversed);
    println!("rule4_arcs_reversed={}", stats.rule4_arcs_reversed);
    if let Some(len) = stats.max_backward_len {
        println!("max_backward_len={len}");
    }
}

fn run() -> anyhow::Result<ExitCode> {
    match Cli::parse().command {
        Command::Kernelize { mode, k, epsilon, heuristic, input, output, trace } => {
            let t = read_instance(&input)?;
            let cfg = heuristic.config(fastk::exact::DEFAULT_EXACT_LIMIT);
            let result = match mode {
                Mode::Subquadratic => kernel_subquadratic(&t, k),
                Mode::Linear => kernel_linear(&t, k, epsilon, &cfg, &Default::default())
                    .map_err(|e| anyhow::anyhow!("{e}"))?,
            };
            let kernel_text = serialize_instance(&result.kernel);
            match &output {
                Some(path) => std::fs::write(path, &kernel_text)
                    .with_context(|| format!("writing {}", path.display()))?,
                None => print!("{kernel_text}"),
            }
            if let Some(path) = &trace {
                std::fs::write(path, result.trace.to_text())
                    .with_context(|| format!("writing {}", path.display()))?;
            }
            print_stats(&result);
            Ok(match result.verdict {
                Verdict::Kernel => ExitCode::SUCCESS,
                Verdict::No => ExitCode::from(1),
            })
        }
        Command::Solve { input, k, exact_limit } => {
            let t = read_instance(&input)?;
            let result = fas_exact_with_limit(&t, exact_limit).map_err(|e| anyhow::anyhow!("{e}"))?;
            println!("fas_size={}", result.fas_size);
            println!(
                "ordering={}",
                result
                    .optimal_ordering
                    .iter()
                    .map(|&v| t.label(v).to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            );
            println!(
                "feedback_arcs={}",
                result
                    .minimal_fas
                    .iter()
                    .map(|&(u, v)| format!("{}->{}", t.label(u), t.label(v)))
                    .collect::<Vec<_>>()
                    .join(",")
            );
            if let Some(k) = k {
                let yes = result.fas_size as u64 <= k;
                println!("verdict={}", if yes { "YES" } else { "NO" });
                if !yes {
                    return Ok(ExitCode::from(1));
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Gen { kind, n, planted_k, seed, output } => {
            let spec = GeneratorSpec {
                kind: match kind {
                    Kind::Uniform => GeneratorKind::Uniform,
                    Kind::Planted => GeneratorKind::Planted { reversals: planted_k },
                },
                n,
                seed,
            };
            let t = generate(&spec).map_err(|e| anyhow::anyhow!("{e}"))?;
            std::fs::write(&output, serialize_instance(&t))
                .with_context(|| format!("writing {}", output.display()))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { input, trace, kernel } => {
            let t = read_instance(&input)?;
            let trace_text = std::fs::read_to_string(&trace)
                .with_context(|| format!("reading {}", trace.display()))?;
            let ops = ReductionTrace::parse(&trace_text)
                .map_err(|e| anyhow::anyhow!("{}: {e}", trace.display()))?;
            let kernel_text = std::fs::read_to_string(&kernel)
                .with_context(|| format!("reading {}", kernel.display()))?;
            // validate the kernel file as an instance before comparing
            parse_instance(&kernel_text).map_err(|e| anyhow::anyhow!("{}: {e}", kernel.display()))?;

            let replayed = match replay_trace(&t, &ops) {
                Ok(replayed) => replayed,
                Err(e) => {
                    println!("verified=false");
                    println!("reason={e}");
                    return Ok(ExitCode::from(1));
                }
            };
            if serialize_instance(&replayed) == kernel_text {
                println!("verified=true");
                Ok(ExitCode::SUCCESS)
            } else {
                println!("verified=false");
                println!("reason=replayed kernel differs from the kernel file");
                Ok(ExitCode::from(1))
            }
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}
