use std::fs;
use std::io::{self, Write};
use std::path::{Path as FsPath, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use coarse_menger::acceptance;
use coarse_menger::construction::{build_counterexample, build_gadget, tree_path_s1_t2};
use coarse_menger::dot::{to_dot, Emphasis};
use coarse_menger::graph::set_distance;
use coarse_menger::instances::{corridor_gadget, grid, random_sparse, rng, Corridor};
use coarse_menger::oracle::{
    exhaustive_separator_search, is_ball_separator, search_far_paths, verify_far_paths, verify_gadget_dichotomy,
    FarPathsResult, SearchBudget,
};
use coarse_menger::solver::{solve_general, solve_k2, SolverConfig, SolverError, SolverOutcome};
use coarse_menger::{parse_instance, write_instance, Instance, Vertex};
use rand::Rng;
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "coarse-menger", version, about = "Far-apart S-T paths versus small ball separators")]
struct Cli {
    /// Worker threads for parallel stages (default: available parallelism).
    #[arg(long, global = true, env = "COARSE_MENGER_WORKERS")]
    workers: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
enum Family {
    Counterexample,
    Gadget,
    Sparse,
    Grid,
    Corridor,
}

#[derive(Subcommand)]
enum Command {
    /// Write an instance file and a `.labels.json` sidecar.
    Gen {
        #[arg(long, value_enum, default_value = "counterexample")]
        family: Family,
        #[arg(long, default_value_t = 1)]
        ell: usize,
        /// Tree depth (gadget families).
        #[arg(long)]
        depth: Option<usize>,
        /// Edges per subdivided edge (counterexample).
        #[arg(long)]
        subdiv: Option<usize>,
        /// Vertex count (sparse) or backbone length (corridor).
        #[arg(long, default_value_t = 1000)]
        n: usize,
        #[arg(long, default_value_t = 2.5)]
        avg_degree: f64,
        #[arg(long, default_value_t = 200)]
        width: usize,
        #[arg(long, default_value_t = 3)]
        height: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Two far S-T paths or a ball-separator centre.
    Solve {
        #[arg(short, long)]
        input: PathBuf,
        #[arg(long, default_value_t = 7)]
        c: u32,
        #[arg(long, default_value_t = 19)]
        ell: u32,
        /// Target distance; values above 3 run on the d-th power graph.
        #[arg(short, long, default_value_t = 3)]
        d: u32,
        /// Dump the full solver trace as JSON.
        #[arg(long)]
        trace: Option<PathBuf>,
        #[arg(long)]
        no_self_verify: bool,
        #[arg(long)]
        joint_budget: Option<u64>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Check a ball separator, or search for the least one.
    VerifySeparator {
        #[arg(short, long)]
        input: PathBuf,
        /// Centres, comma separated; omit to search all sets of `--max-size`.
        #[arg(long, value_delimiter = ',')]
        x: Vec<Vertex>,
        #[arg(long)]
        radius: u32,
        #[arg(long, default_value_t = 2)]
        max_size: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Exhaustive search for k S-T paths pairwise at distance at least d.
    SearchPaths {
        #[arg(short, long)]
        input: PathBuf,
        #[arg(short, long)]
        k: usize,
        #[arg(short, long, default_value_t = 3)]
        d: u32,
        #[arg(long, default_value_t = 50_000_000)]
        budget: u64,
        #[arg(long)]
        max_seconds: Option<f64>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Exhaustive two-path dichotomy on the unsubdivided gadget.
    VerifyConstruction {
        #[arg(short, long, default_value_t = 4)]
        k: usize,
        #[arg(long, default_value_t = 10_000_000)]
        path_limit: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Graphviz rendering of an instance file or a generated counterexample.
    ExportDot {
        #[arg(short, long, conflicts_with = "ell")]
        input: Option<PathBuf>,
        /// Render the counterexample for this ell instead of a file.
        #[arg(long)]
        ell: Option<usize>,
        /// Bold the tree path from s1 to t2 (with `--ell`).
        #[arg(long, requires = "ell")]
        tree_path: bool,
        /// Run the solver and draw its two paths in alternating styles.
        #[arg(long)]
        solve: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run the acceptance criteria and report each one.
    Selftest {
        /// Run only these criteria (1-8).
        #[arg(long, value_delimiter = ',')]
        only: Vec<u8>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Serialize)]
struct RunReport {
    command: &'static str,
    params: Value,
    outcome: Value,
    elapsed_ms: u128,
    seed: Option<u64>,
}

enum Failure {
    /// Bad flags or unreadable input.
    Usage(String),
    /// The run completed and the claim under test is false.
    Negative(Box<Done>),
    Internal(String),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Usage(format!("{e:#}"))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(w) = cli.workers {
        if w == 0 {
            eprintln!("error: --workers must be positive");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(w).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(3);
        }
    }
    let start = Instant::now();
    match run(cli.command, start) {
        Ok((report, output)) => emit(&report, output.as_deref()).map_or_else(fail_io, |_| ExitCode::SUCCESS),
        Err(Failure::Negative(done)) => {
            let (report, output) = *done;
            emit(&report, output.as_deref()).map_or_else(fail_io, |_| ExitCode::from(1))
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("internal failure: {msg}");
            ExitCode::from(3)
        }
    }
}

fn fail_io(e: anyhow::Error) -> ExitCode {
    eprintln!("error: {e:#}");
    ExitCode::from(2)
}

fn emit(report: &RunReport, output: Option<&FsPath>) -> anyhow::Result<()> {
    let text = serde_json::to_string_pretty(report)?;
    match output {
        Some(p) => fs::write(p, text + "\n").with_context(|| format!("writing {}", p.display())),
        None => match writeln!(io::stdout().lock(), "{text}") {
            Err(e) if e.kind() != io::ErrorKind::BrokenPipe => Err(e.into()),
            _ => Ok(()),
        },
    }
}

fn load(path: &FsPath) -> Result<Instance, Failure> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_instance(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn sidecar(path: &FsPath) -> PathBuf {
    path.with_extension("labels.json")
}

type Done = (RunReport, Option<PathBuf>);

// Failure::Negative carries the report and output target together.
impl Failure {
    fn negative(report: RunReport, output: Option<PathBuf>) -> Self {
        Failure::Negative(Box::new((report, output)))
    }
}

fn run(command: Command, start: Instant) -> Result<Done, Failure> {
    let elapsed = || start.elapsed().as_millis();
    match command {
        Command::Gen { family, ell, depth, subdiv, n, avg_degree, width, height, seed, output } => {
            let mut r = rng(seed);
            let (inst, labels) = match family {
                Family::Counterexample => {
                    let ce = build_counterexample(ell, depth, subdiv, false).map_err(|e| Failure::Usage(e.to_string()))?;
                    let labels = serde_json::to_value(&ce).map_err(|e| Failure::Internal(e.to_string()))?;
                    (Instance::new(ce.graph, ce.s, ce.t), labels)
                }
                Family::Gadget => {
                    let gk = build_gadget(depth.unwrap_or(4)).map_err(|e| Failure::Usage(e.to_string()))?;
                    let labels = serde_json::to_value(&gk).map_err(|e| Failure::Internal(e.to_string()))?;
                    (Instance::new(gk.graph, gk.s, gk.t), labels)
                }
                Family::Sparse => {
                    if n < 2 {
                        return Err(Failure::Usage("sparse instances need --n >= 2".into()));
                    }
                    (random_sparse(&mut r, n, avg_degree, 3, 3), json!({ "family": "sparse" }))
                }
                Family::Grid => {
                    if width == 0 || height == 0 {
                        return Err(Failure::Usage("grid dimensions must be positive".into()));
                    }
                    (grid(width, height), json!({ "family": "grid" }))
                }
                Family::Corridor => {
                    if n < 40 {
                        return Err(Failure::Usage("corridor backbone needs --n >= 40".into()));
                    }
                    let cors: Vec<Corridor> = (0..r.gen_range(1..=3))
                        .map(|_| Corridor { rungs: vec![(r.gen_range(1..=n + 1), r.gen_range(1..=3))] })
                        .collect();
                    let hair = r.gen_range(0..=n / 20);
                    let inst = corridor_gadget(&mut r, n, &cors, hair);
                    let rungs: Vec<_> = cors.iter().map(|c| c.rungs.clone()).collect();
                    (inst, json!({ "family": "corridor", "rungs": rungs }))
                }
            };
            fs::write(&output, write_instance(&inst)).with_context(|| format!("writing {}", output.display()))?;
            let side = sidecar(&output);
            let labels_text = serde_json::to_string_pretty(&labels).map_err(|e| Failure::Internal(e.to_string()))?;
            fs::write(&side, labels_text + "\n").with_context(|| format!("writing {}", side.display()))?;
            let report = RunReport {
                command: "gen",
                params: json!({ "family": family, "ell": ell, "depth": depth, "subdiv": subdiv, "output": output }),
                outcome: json!({
                    "vertices": inst.graph.vertex_count(),
                    "edges": inst.graph.edge_count(),
                    "max_degree": inst.graph.max_degree(),
                    "labels": side,
                }),
                elapsed_ms: elapsed(),
                seed: Some(seed),
            };
            Ok((report, None))
        }

        Command::Solve { input, c, ell, d, trace, no_self_verify, joint_budget, output } => {
            let inst = load(&input)?;
            let mut cfg = SolverConfig { c, ell, self_verify: !no_self_verify, ..SolverConfig::default() };
            if let Some(b) = joint_budget {
                cfg.joint_budget = b;
            }
            let (res, tr) = if d == 3 {
                solve_k2(&inst.graph, &inst.s, &inst.t, &cfg)
            } else {
                solve_general(&inst.graph, &inst.s, &inst.t, d, &cfg)
            };
            if let Some(p) = &trace {
                let text = serde_json::to_string(&tr).map_err(|e| Failure::Internal(e.to_string()))?;
                fs::write(p, text).with_context(|| format!("writing {}", p.display()))?;
            }
            let params = json!({ "input": input, "c": c, "ell": ell, "d": d, "self_verify": cfg.self_verify });
            let report = |outcome| RunReport { command: "solve", params: params.clone(), outcome, elapsed_ms: elapsed(), seed: None };
            match res {
                Ok(out) => {
                    let payload = match &out {
                        SolverOutcome::TwoFarPaths { paths } => {
                            let dist = set_distance(&inst.graph, paths[0].vertices(), paths[1].vertices())
                                .map_err(|e| Failure::Internal(e.to_string()))?;
                            json!({ "outcome": "two_far_paths", "paths": paths, "pairwise_distance": dist.get() })
                        }
                        SolverOutcome::Center { vertex, radius } => {
                            let verified = is_ball_separator(&inst.graph, &inst.s, &inst.t, &[*vertex], *radius).separates();
                            if !verified {
                                return Err(Failure::Internal(format!("centre {vertex} fails re-verification")));
                            }
                            json!({ "outcome": "center", "vertex": vertex, "radius": radius, "verified": true })
                        }
                        SolverOutcome::NoPath => json!({ "outcome": "no_path" }),
                    };
                    Ok((report(payload), output))
                }
                Err(SolverError::InvalidConfig(msg)) => Err(Failure::Usage(msg)),
                Err(SolverError::VerificationFailed(msg)) => Err(Failure::negative(
                    report(json!({ "outcome": "verification_failed", "detail": msg, "stage": tr.stage })),
                    output,
                )),
                Err(e) => Err(Failure::Internal(format!("{e} (stage {})", tr.stage))),
            }
        }

        Command::VerifySeparator { input, x, radius, max_size, output } => {
            let inst = load(&input)?;
            let n = inst.graph.vertex_count();
            if let Some(&bad) = x.iter().find(|&&v| v >= n) {
                return Err(Failure::Usage(format!("vertex {bad} out of range 0..{n}")));
            }
            let params = json!({ "input": input, "x": x, "radius": radius, "max_size": max_size });
            if x.is_empty() {
                let res = exhaustive_separator_search(&inst.graph, &inst.s, &inst.t, max_size, radius);
                let mut outcome = serde_json::to_value(&res).map_err(|e| Failure::Internal(e.to_string()))?;
                outcome["claim"] = json!("least_ball_separator");
                outcome["instance"] = json!(input);
                let report = RunReport { command: "verify-separator", params, outcome, elapsed_ms: elapsed(), seed: None };
                return Ok((report, output));
            }
            let res = is_ball_separator(&inst.graph, &inst.s, &inst.t, &x, radius);
            let separates = res.separates();
            let mut outcome = serde_json::to_value(&res).map_err(|e| Failure::Internal(e.to_string()))?;
            outcome["claim"] = json!("ball_separator");
            outcome["instance"] = json!(input);
            let report = RunReport { command: "verify-separator", params, outcome, elapsed_ms: elapsed(), seed: None };
            if separates {
                Ok((report, output))
            } else {
                Err(Failure::negative(report, output))
            }
        }

        Command::SearchPaths { input, k, d, budget, max_seconds, output } => {
            let inst = load(&input)?;
            if k == 0 {
                return Err(Failure::Usage("-k must be at least 1".into()));
            }
            let rep = search_far_paths(&inst.graph, &inst.s, &inst.t, k, d, SearchBudget { max_nodes: budget, max_seconds });
            if let FarPathsResult::Found { witness } = &rep.result {
                verify_far_paths(&inst.graph, &inst.s, &inst.t, witness, d)
                    .map_err(|e| Failure::Internal(format!("witness fails verification: {e}")))?;
            }
            let mut outcome = serde_json::to_value(&rep).map_err(|e| Failure::Internal(e.to_string()))?;
            outcome["claim"] = json!(format!("{k} S-T paths pairwise at distance >= {d}"));
            outcome["instance"] = json!(input);
            let params = json!({ "input": input, "k": k, "d": d, "budget": budget, "max_seconds": max_seconds });
            Ok((RunReport { command: "search-paths", params, outcome, elapsed_ms: elapsed(), seed: None }, output))
        }

        Command::VerifyConstruction { k, path_limit, output } => {
            let rep = verify_gadget_dichotomy(k, path_limit).map_err(|e| Failure::Usage(e.to_string()))?;
            let gadget = build_gadget(k).map_err(|e| Failure::Usage(e.to_string()))?;
            let ok = rep.violations == 0 && gadget.graph.max_degree() <= 3;
            let mut outcome = serde_json::to_value(&rep).map_err(|e| Failure::Internal(e.to_string()))?;
            outcome["claim"] = json!("two-path dichotomy");
            outcome["max_degree"] = json!(gadget.graph.max_degree());
            outcome["holds"] = json!(ok);
            let report = RunReport {
                command: "verify-construction",
                params: json!({ "k": k, "path_limit": path_limit }),
                outcome,
                elapsed_ms: elapsed(),
                seed: None,
            };
            if ok {
                Ok((report, output))
            } else {
                Err(Failure::negative(report, output))
            }
        }

        Command::ExportDot { input, ell, tree_path, solve, output } => {
            let mut highlights = Vec::new();
            let mut labels = Vec::new();
            let inst = match (&input, ell) {
                (Some(p), None) => load(p)?,
                (None, Some(ell)) => {
                    let ce = build_counterexample(ell, None, None, false).map_err(|e| Failure::Usage(e.to_string()))?;
                    if tree_path {
                        highlights.push((tree_path_s1_t2(&ce), Emphasis::Bold));
                    }
                    for (v, name) in [(ce.root, "r"), (ce.s1, "s1"), (ce.s2, "s2"), (ce.t1, "t1"), (ce.t2, "t2")] {
                        labels.push((v, name.to_string()));
                    }
                    Instance::new(ce.graph, ce.s, ce.t)
                }
                _ => return Err(Failure::Usage("give exactly one of --input and --ell".into())),
            };
            let mut solved = Value::Null;
            if solve {
                let (res, _) = solve_k2(&inst.graph, &inst.s, &inst.t, &SolverConfig::default());
                match res.map_err(|e| Failure::Internal(e.to_string()))? {
                    SolverOutcome::TwoFarPaths { paths: [p, q] } => {
                        highlights.push((p, Emphasis::Odd));
                        highlights.push((q, Emphasis::Even));
                        solved = json!("two_far_paths");
                    }
                    SolverOutcome::Center { vertex, radius } => {
                        labels.push((vertex, format!("centre r={radius}")));
                        solved = json!("center");
                    }
                    SolverOutcome::NoPath => solved = json!("no_path"),
                }
            }
            let text = to_dot(&inst.graph, &inst.s, &inst.t, &highlights, &labels);
            let Some(out) = output else {
                print!("{text}");
                std::process::exit(0);
            };
            fs::write(&out, &text).with_context(|| format!("writing {}", out.display()))?;
            let report = RunReport {
                command: "export-dot",
                params: json!({ "input": input, "ell": ell, "tree_path": tree_path, "solve": solve, "output": out }),
                outcome: json!({ "nodes": inst.graph.vertex_count(), "edges": inst.graph.edge_count(), "solver": solved }),
                elapsed_ms: elapsed(),
                seed: None,
            };
            Ok((report, None))
        }

        Command::Selftest { only, output } => {
            let all: Vec<fn() -> acceptance::CriterionReport> = vec![
                acceptance::criterion_1,
                acceptance::criterion_2,
                acceptance::criterion_3,
                acceptance::criterion_4,
                acceptance::criterion_5,
                acceptance::criterion_6,
                acceptance::criterion_7,
                acceptance::criterion_8,
            ];
            if let Some(bad) = only.iter().find(|&&i| !(1..=8).contains(&i)) {
                return Err(Failure::Usage(format!("no criterion {bad}")));
            }
            let mut reports = Vec::new();
            for (i, f) in all.iter().enumerate() {
                if only.is_empty() || only.contains(&(i as u8 + 1)) {
                    let rep = f();
                    eprintln!("{rep}");
                    reports.push(rep);
                }
            }
            let passed = reports.iter().all(|r| r.passed);
            let report = RunReport {
                command: "selftest",
                params: json!({ "only": only }),
                outcome: json!({ "passed": passed, "criteria": reports }),
                elapsed_ms: elapsed(),
                seed: None,
            };
            if passed {
                Ok((report, output))
            } else {
                Err(Failure::negative(report, output))
            }
        }
    }
}
