//! Command-line front end for chain graph separation, minimal maps and
//! I-map preserving transformations.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use chaingraph::separation::{enumerate_model_bounded, is_imap_bounded, DEFAULT_MAX_NODES};
use chaingraph::{
    fbmerge, fbsplit, fmt_set, format_chain, format_graph, format_model, method_b3, method_g2h,
    mi_map, oracle_from_graph, oracle_from_model, parse_chain, parse_graph, parse_model, separated,
    separated_bruteforce, separated_moral, verify_trace_bounded, Chain, ElementaryOp, Error,
    Generator, HybridGraph, NodeSet, Trace, Triple,
};
use clap::builder::TypedValueParser as _;
use clap::{Parser, Subcommand, ValueEnum};
use log::{info, warn};

const MIMAP_WARN_NODES: usize = 12;

#[derive(Parser)]
#[command(
    name = "chaingraph",
    version,
    about = "Chain graph separation and transformations"
)]
struct Cli {
    /// More log output (repeatable).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,

    /// Node bound for exhaustive model enumeration.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_NODES,
          value_parser = clap::value_parser!(u16).range(1..).map(usize::from))]
    max_nodes: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OracleKind {
    Reach,
    Brute,
    Moral,
    All,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RandomKind {
    Cg,
    ImapPair,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a graph and report whether it is a chain graph.
    Validate { graph: PathBuf },
    /// Decide X ⊥ Y | Z. Node sets are comma or space separated.
    Separate {
        graph: PathBuf,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        #[arg(long, default_value = "")]
        z: String,
        #[arg(long, value_enum, default_value_t = OracleKind::Reach)]
        oracle: OracleKind,
    },
    /// List the connectivity components, one per line.
    Components { graph: PathBuf },
    /// Enumerate the independence model of a graph.
    Model {
        graph: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Is I(H) contained in I(G)?
    ImapCheck { h: PathBuf, g: PathBuf },
    /// Turn part of a block into a block of its own.
    Fbsplit {
        graph: PathBuf,
        #[arg(long)]
        block: String,
        #[arg(long)]
        part: String,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write the elementary steps as JSON lines.
        #[arg(long)]
        ops: Option<PathBuf>,
    },
    /// Fuse a block with a block to its right.
    Fbmerge {
        graph: PathBuf,
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        ops: Option<PathBuf>,
    },
    /// Transform a graph into the minimal map of its model relative to a chain.
    B3 {
        graph: PathBuf,
        chain: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Record a transformation from G to H, which must satisfy I(H) ⊆ I(G).
    G2h {
        g: PathBuf,
        h: PathBuf,
        /// Trace destination; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Minimal independence map relative to a chain, from a graph or a model file.
    Mimap {
        chain: PathBuf,
        #[arg(long, conflicts_with = "model", required_unless_present = "model")]
        graph: Option<PathBuf>,
        #[arg(long)]
        model: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Replay a trace and check every intermediate graph against H.
    VerifyTrace { trace: PathBuf, h: PathBuf },
    /// Generate a random chain graph or an I-map pair.
    Random {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_parser = clap::value_parser!(u16).range(1..).map(usize::from))]
        nodes: usize,
        #[arg(long, value_enum, default_value_t = RandomKind::Cg)]
        kind: RandomKind,
        #[arg(long, default_value_t = chaingraph::generate::DEFAULT_EDGE_PROBABILITY)]
        edge_probability: f64,
        /// Destination of G.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Destination of H for imap-pair.
        #[arg(long)]
        out_h: Option<PathBuf>,
    },
}

/// Outcome of a command that ran to completion.
enum Verdict {
    Yes,
    No,
}

fn read(path: &Path) -> Result<String, Error> {
    fs::read_to_string(path).map_err(|e| Error::Input(format!("{}: {e}", path.display())))
}

fn read_graph(path: &Path) -> Result<HybridGraph, Error> {
    parse_graph(&read(path)?)
}

fn read_chain(path: &Path) -> Result<Chain, Error> {
    parse_chain(&read(path)?)
}

fn node_list(text: &str) -> Result<NodeSet, Error> {
    chaingraph::node_set(
        text.split(|c: char| c == ',' || c.is_whitespace())
            .filter(|s| !s.is_empty()),
    )
}

/// Writes `contents` to `path` through a temporary sibling, so a failure
/// never leaves a partial file behind. Prints to stdout without a path.
fn emit(path: Option<&Path>, contents: &str) -> Result<(), Error> {
    let Some(path) = path else {
        print!("{contents}");
        return Ok(());
    };
    let io = |e: std::io::Error| Error::Input(format!("{}: {e}", path.display()));
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(contents.as_bytes()).map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    info!("wrote {}", path.display());
    Ok(())
}

fn ops_jsonl(ops: &[ElementaryOp]) -> String {
    ops.iter()
        .map(|op| serde_json::to_string(op).expect("operations serialize") + "\n")
        .collect()
}

fn run(cli: Cli) -> Result<Verdict, Error> {
    let max_nodes = cli.max_nodes;
    match cli.command {
        Command::Validate { graph } => {
            let g = read_graph(&graph)?;
            println!("nodes: {}", g.node_count());
            println!("edges: {}", g.edge_count());
            let comps: Vec<String> = g.components().iter().map(fmt_set).collect();
            println!("components: {}", comps.join(" "));
            match g.consistent_chain() {
                Ok(chain) => {
                    let blocks: Vec<String> = chain.blocks().iter().map(fmt_set).collect();
                    println!("chain graph: yes");
                    println!("chain: {}", blocks.join(" "));
                    Ok(Verdict::Yes)
                }
                Err(_) => {
                    println!("chain graph: no");
                    Ok(Verdict::No)
                }
            }
        }
        Command::Separate {
            graph,
            x,
            y,
            z,
            oracle,
        } => {
            let g = read_graph(&graph)?;
            let t = Triple::new(node_list(&x)?, node_list(&y)?, node_list(&z)?)?;
            let brute = |g: &HybridGraph| separated_bruteforce(g, &t, 4 * g.node_count());
            let answer = match oracle {
                OracleKind::Reach => separated(&g, &t)?,
                OracleKind::Brute => brute(&g)?,
                OracleKind::Moral => separated_moral(&g, &t)?,
                OracleKind::All => {
                    let (r, b, m) = (separated(&g, &t)?, brute(&g)?, separated_moral(&g, &t)?);
                    if r != b || r != m {
                        return Err(Error::Invariant(format!(
                            "separation engines disagree: reach={r} brute={b} moral={m}"
                        )));
                    }
                    r
                }
            };
            println!("{answer}");
            Ok(Verdict::Yes)
        }
        Command::Components { graph } => {
            let g = read_graph(&graph)?;
            for c in g.components() {
                let labels: Vec<&str> = c.iter().map(|n| n.as_str()).collect();
                println!("{}", labels.join(" "));
            }
            Ok(Verdict::Yes)
        }
        Command::Model { graph, out } => {
            let g = read_graph(&graph)?;
            let m = enumerate_model_bounded(&g, max_nodes)?;
            info!("{} statements", m.len());
            emit(out.as_deref(), &format_model(&m))?;
            Ok(Verdict::Yes)
        }
        Command::ImapCheck { h, g } => {
            let (h, g) = (read_graph(&h)?, read_graph(&g)?);
            println!("{}", is_imap_bounded(&h, &g, max_nodes)?);
            Ok(Verdict::Yes)
        }
        Command::Fbsplit {
            graph,
            block,
            part,
            out,
            ops,
        } => {
            let g = read_graph(&graph)?;
            let (result, steps) = fbsplit(&node_list(&block)?, &node_list(&part)?, &g)?;
            if let Some(path) = ops.as_deref() {
                emit(Some(path), &ops_jsonl(&steps))?;
            }
            emit(out.as_deref(), &format_graph(&result))?;
            Ok(Verdict::Yes)
        }
        Command::Fbmerge {
            graph,
            left,
            right,
            out,
            ops,
        } => {
            let g = read_graph(&graph)?;
            let (result, steps) = fbmerge(&node_list(&left)?, &node_list(&right)?, &g)?;
            if let Some(path) = ops.as_deref() {
                emit(Some(path), &ops_jsonl(&steps))?;
            }
            emit(out.as_deref(), &format_graph(&result))?;
            Ok(Verdict::Yes)
        }
        Command::B3 {
            graph,
            chain,
            out,
            trace,
        } => {
            let (g, alpha) = (read_graph(&graph)?, read_chain(&chain)?);
            let (result, t) = method_b3(&g, &alpha)?;
            info!("{} steps", t.ops().len());
            if let Some(path) = trace.as_deref() {
                emit(Some(path), &t.to_jsonl())?;
            }
            emit(out.as_deref(), &format_graph(&result))?;
            Ok(Verdict::Yes)
        }
        Command::G2h { g, h, out } => {
            let (g, h) = (read_graph(&g)?, read_graph(&h)?);
            let t = method_g2h(&g, &h)?;
            info!("{} steps", t.ops().len());
            emit(out.as_deref(), &t.to_jsonl())?;
            Ok(Verdict::Yes)
        }
        Command::Mimap {
            chain,
            graph,
            model,
            out,
        } => {
            let alpha = read_chain(&chain)?;
            if alpha.nodes().len() > MIMAP_WARN_NODES {
                warn!(
                    "{} nodes: the boundary search is exponential in the prefix size",
                    alpha.nodes().len()
                );
            }
            let result = match (graph, model) {
                (Some(path), _) => mi_map(&oracle_from_graph(&read_graph(&path)?)?, &alpha)?,
                (None, Some(path)) => {
                    let m = parse_model(&read(&path)?, &alpha.nodes())?;
                    mi_map(&oracle_from_model(m), &alpha)?
                }
                (None, None) => unreachable!("clap requires one source"),
            };
            emit(out.as_deref(), &format_graph(&result))?;
            Ok(Verdict::Yes)
        }
        Command::VerifyTrace { trace, h } => {
            let t = Trace::from_jsonl(&read(&trace)?)?;
            let h = read_graph(&h)?;
            let report = verify_trace_bounded(&t, &h, max_nodes)?;
            println!("{report}");
            Ok(if report.is_valid() {
                Verdict::Yes
            } else {
                Verdict::No
            })
        }
        Command::Random {
            seed,
            nodes,
            kind,
            edge_probability,
            out,
            out_h,
        } => {
            let mut gen = Generator::new(seed).with_edge_probability(edge_probability)?;
            match kind {
                RandomKind::Cg => {
                    let (g, alpha) = gen.chain_graph(nodes)?;
                    info!("drawn against chain\n{}", format_chain(&alpha));
                    emit(out.as_deref(), &format_graph(&g))?;
                }
                RandomKind::ImapPair => {
                    let (g, h) = gen.imap_pair(nodes)?;
                    match (out.as_deref(), out_h.as_deref()) {
                        (None, None) => {
                            print!("# G\n{}# H\n{}", format_graph(&g), format_graph(&h))
                        }
                        (Some(pg), Some(ph)) => {
                            emit(Some(pg), &format_graph(&g))?;
                            emit(Some(ph), &format_graph(&h))?;
                        }
                        _ => {
                            return Err(Error::Input(
                                "imap-pair needs both --out and --out-h, or neither".into(),
                            ))
                        }
                    }
                }
            }
            Ok(Verdict::Yes)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let level = match cli.verbose {
        0 => log::LevelFilter::Warn,
        1 => log::LevelFilter::Info,
        _ => log::LevelFilter::Debug,
    };
    env_logger::Builder::new()
        .filter_level(level)
        .format_timestamp(None)
        .init();

    match run(cli) {
        Ok(Verdict::Yes) => ExitCode::SUCCESS,
        Ok(Verdict::No) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_internal() { 2 } else { 1 })
        }
    }
}
