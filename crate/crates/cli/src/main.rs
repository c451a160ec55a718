use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::json;

use sigmak::abg::{build_abg, score, to_dot, Resolution};
use sigmak::bp_graph::{build_breakpoint_graph, distance, SigmaIndex};
use sigmak::genome::{
    format_genome, parse_genome, random_cognate_pair, random_genome, singularize, Genome,
};
use sigmak::reduction::{
    assignment_to_solution, build_reduction, extract_genomes, normalize, parse_cnf,
    random_instance, sat_brute, verify_flower, verify_structure, Assignment, ReductionShape,
};
use sigmak::solver::{dd, Budget, Engine};

/// σ_k genome distances, double distances and the (2,3)-SAT reduction.
#[derive(Parser)]
#[command(name = "sigmak", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// σ_k distance between two canonical genomes.
    Dist {
        #[arg(long, default_value = "inf")]
        k: SigmaIndex,
        a: PathBuf,
        b: PathBuf,
    },
    /// σ_k double distance of a singular genome S and a duplicated genome D.
    Dd {
        #[arg(long, default_value = "inf")]
        k: SigmaIndex,
        #[arg(long, default_value = "naive")]
        engine: Engine,
        #[command(flatten)]
        budget: BudgetArgs,
        /// Write a JSON report here.
        #[arg(long)]
        out: Option<PathBuf>,
        s: PathBuf,
        d: PathBuf,
    },
    /// Build the reduction graph of a CNF formula and extract its genomes.
    Reduce {
        #[arg(long, default_value_t = 8)]
        k: u32,
        #[arg(long, default_value = "circular")]
        shape: ReductionShape,
        /// Truth values of the input variables (T/F or 1/0, comma separated);
        /// prints the score of the induced resolution.
        #[arg(long)]
        assignment: Option<String>,
        /// Solve the graph with the MIS engine.
        #[arg(long)]
        solve: bool,
        #[command(flatten)]
        budget: BudgetArgs,
        /// Directory for S.genome, D.genome, abg.dot and meta.json.
        #[arg(long)]
        out: Option<PathBuf>,
        cnf: PathBuf,
    },
    /// Structural checks.
    Verify {
        #[command(subcommand)]
        what: VerifyCommand,
    },
    /// Seeded random genomes, genome pairs and formulas.
    Gen {
        #[command(subcommand)]
        what: GenCommand,
    },
    /// Graphviz rendering of the ambiguous breakpoint graph of S and D.
    ExportDot {
        /// Resolution to highlight, as a bitstring over squares.
        #[arg(long)]
        tau: Option<String>,
        s: PathBuf,
        d: PathBuf,
    },
}

#[derive(Subcommand)]
enum VerifyCommand {
    /// Parity law of a closed p-flower over all 2^p resolutions.
    Flower {
        #[arg(long, default_value_t = 5)]
        p: usize,
    },
    /// Shortest cycles, registry match and sizes of a reduction graph.
    Reduction {
        #[arg(long, default_value_t = 8)]
        k: u32,
        #[arg(long, default_value = "circular")]
        shape: ReductionShape,
        cnf: PathBuf,
    },
}

#[derive(Subcommand)]
enum GenCommand {
    /// A random singular genome.
    Genome {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        linear: usize,
        #[arg(long, default_value_t = 0)]
        circular: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// A random singular genome S and a duplicated genome D.
    Pair {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 3)]
        ops: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write S.genome and D.genome here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// A random formula in (2,3)-SAT normal form.
    Cnf {
        #[arg(long)]
        variables: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Args)]
struct BudgetArgs {
    /// Search node limit.
    #[arg(long)]
    budget_nodes: Option<u64>,
    /// Wall-clock limit in milliseconds.
    #[arg(long)]
    budget_ms: Option<u64>,
    #[arg(long, default_value_t = 1)]
    threads: usize,
}

impl BudgetArgs {
    fn budget(&self) -> Budget {
        let mut b = Budget::default();
        if let Some(n) = self.budget_nodes {
            b.max_nodes = n;
        }
        b.max_time = self.budget_ms.map(Duration::from_millis);
        b.threads = self.threads;
        b
    }
}

fn read_genome(path: &Path) -> Result<Genome> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_genome(&text).with_context(|| format!("parsing {}", path.display()))
}

fn parse_values(text: &str) -> Result<Vec<bool>> {
    text.split(',')
        .map(|t| match t.trim() {
            "T" | "t" | "1" | "true" => Ok(true),
            "F" | "f" | "0" | "false" => Ok(false),
            other => bail!("`{other}` is not a truth value"),
        })
        .collect()
}

fn parse_tau(text: &str, len: usize) -> Result<Resolution> {
    let bits: Vec<bool> = text
        .chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            _ => bail!("resolution must be a bitstring"),
        })
        .collect::<Result<_>>()?;
    if bits.len() != len {
        bail!(
            "resolution has {} bits but the graph has {len} squares",
            bits.len()
        );
    }
    Ok(Resolution(bits))
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Dist { k, a, b } => {
            let (a, b) = (read_genome(&a)?, read_genome(&b)?);
            let d = distance(&a, &b, k)?;
            let census = build_breakpoint_graph(&a, &b)?.census();
            println!("{d}");
            println!("census {census}");
        }
        Command::Dd {
            k,
            engine,
            budget,
            out,
            s,
            d,
        } => {
            let (s, d) = (read_genome(&s)?, read_genome(&d)?);
            let r = dd(&s, &d, k, engine, &budget.budget())?;
            println!("{}", r.dd);
            println!("score {}", r.score);
            println!("tau {}", r.tau);
            println!("optimal {}", r.optimal);
            if let Some(out) = out {
                let report = json!({
                    "k": k.to_string(),
                    "engine": engine.to_string(),
                    "dd": r.dd,
                    "score": r.score,
                    "tau": r.tau.to_string(),
                    "optimal": r.optimal,
                    "nodes": r.stats.nodes,
                    "candidates": r.stats.candidates,
                });
                fs::write(&out, serde_json::to_string_pretty(&report)? + "\n")
                    .with_context(|| format!("writing {}", out.display()))?;
            }
        }
        Command::Reduce {
            k,
            shape,
            assignment,
            solve,
            budget,
            out,
            cnf,
        } => reduce(k, shape, assignment, solve, &budget.budget(), out, &cnf)?,
        Command::Verify { what } => match what {
            VerifyCommand::Flower { p } => {
                let rep = verify_flower(p)?;
                println!(
                    "p {} resolutions {} even {} odd {} violations {}",
                    rep.p,
                    rep.resolutions,
                    rep.even_checked,
                    rep.odd_checked,
                    rep.violations.len()
                );
                if !rep.ok() {
                    bail!("parity law violated");
                }
            }
            VerifyCommand::Reduction { k, shape, cnf } => {
                let text = fs::read_to_string(&cnf)
                    .with_context(|| format!("reading {}", cnf.display()))?;
                let norm = normalize(&parse_cnf(&text)?)?;
                let r = build_reduction(&norm.instance, k, shape)?;
                let rep = verify_structure(&r)?;
                let shortest = rep
                    .shortest_cycle
                    .map_or("none".to_string(), |c| c.to_string());
                println!("shortest cycle {shortest}");
                println!("cycles below k {}", rep.cycles_below_k);
                println!(
                    "k-cycles {} registered {}",
                    rep.k_cycles, rep.registered_k_cycles
                );
                println!(
                    "vertices {} expected {}",
                    rep.vertices, rep.expected_vertices
                );
                println!("squares {} expected {}", rep.squares, rep.expected_squares);
                println!("flowers {} expected {}", rep.flowers, rep.expected_flowers);
                println!(
                    "extensions {} expected {}",
                    rep.extensions, rep.expected_extensions
                );
                for v in &rep.violations {
                    println!("violation: {v}");
                }
                if !rep.ok() {
                    bail!("{} structural violations", rep.violations.len());
                }
            }
        },
        Command::Gen { what } => match what {
            GenCommand::Genome {
                n,
                linear,
                circular,
                seed,
            } => print!(
                "{}",
                format_genome(&random_genome(n, linear, circular, seed)?)
            ),
            GenCommand::Pair { n, ops, seed, out } => {
                let (s, d) = random_cognate_pair(n, true, ops, seed)?;
                match out {
                    Some(dir) => {
                        fs::create_dir_all(&dir)?;
                        fs::write(dir.join("S.genome"), format_genome(&s))?;
                        fs::write(dir.join("D.genome"), format_genome(&d))?;
                    }
                    None => print!("# S\n{}# D\n{}", format_genome(&s), format_genome(&d)),
                }
            }
            GenCommand::Cnf { variables, seed } => {
                print!("{}", random_instance(variables, seed)?.to_dimacs())
            }
        },
        Command::ExportDot { tau, s, d } => {
            let (s, d) = (read_genome(&s)?, read_genome(&d)?);
            let abg = build_abg(&s, &singularize(&d)?)?;
            let tau = tau.map(|t| parse_tau(&t, abg.a_star())).transpose()?;
            print!("{}", to_dot(&abg, tau.as_ref()));
        }
    }
    Ok(())
}

fn reduce(
    k: u32,
    shape: ReductionShape,
    assignment: Option<String>,
    solve: bool,
    budget: &Budget,
    out: Option<PathBuf>,
    cnf: &Path,
) -> Result<()> {
    let text = fs::read_to_string(cnf).with_context(|| format!("reading {}", cnf.display()))?;
    let input = parse_cnf(&text)?;
    let norm = normalize(&input)?;
    let r = build_reduction(&norm.instance, k, shape)?;
    let summary = r.summary();
    println!(
        "variables {} clauses {} occurrences {}",
        summary.variables, summary.clauses, summary.occurrences
    );
    println!(
        "vertices {} isolated {}",
        r.graph.vertex_count(),
        summary.isolated
    );
    println!("squares {}", summary.a_star);
    println!("bound {}", summary.bound);
    let mut extra = serde_json::Map::new();
    if let Some(a) = assignment {
        let values = parse_values(&a)?;
        if values.len() != input.variable_count {
            bail!(
                "{} truth values given for {} variables",
                values.len(),
                input.variable_count
            );
        }
        let tau = assignment_to_solution(&r, &Assignment::new(norm.lower(&values)))?;
        let value = score(&r.graph, &tau, SigmaIndex::Finite(k))?;
        println!("assignment score {value}");
        extra.insert("assignment_score".into(), json!(value));
    }
    if solve {
        let res = sigmak::solver::ss_mis(&r.graph, k, budget)?;
        println!("ss {} optimal {}", res.score, res.optimal);
        extra.insert("ss".into(), json!(res.score));
        extra.insert("optimal".into(), json!(res.optimal));
        extra.insert(
            "satisfiable".into(),
            json!(sat_brute(&norm.instance).ok().map(|s| s.is_some())),
        );
    }
    if let Some(dir) = out {
        let x = extract_genomes(&r)?;
        fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
        fs::write(dir.join("S.genome"), format_genome(&x.s))?;
        fs::write(dir.join("D.genome"), format_genome(&x.d))?;
        fs::write(dir.join("abg.dot"), to_dot(&r.graph, None))?;
        let renaming: Vec<_> = norm
            .origin
            .iter()
            .map(|o| json!({"original": o.original, "flipped": o.flipped}))
            .collect();
        let meta = json!({
            "summary": summary,
            "genes": x.s.gene_count(),
            "normalization": {
                "renaming": renaming,
                "forced": norm.forced,
                "kept_clauses": norm.kept_clauses,
            },
            "registries": {
                "variables": r.variables,
                "clauses": r.clauses,
                "occurrences": r.occurrences,
                "flowers": r.flowers,
                "extensions": r.extensions,
            },
            "results": extra,
        });
        fs::write(
            dir.join("meta.json"),
            serde_json::to_string_pretty(&meta)? + "\n",
        )?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
