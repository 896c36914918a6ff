//! The `mealy` command line: classify, activity, order, export and compose
//! over wreath-recursion files.

pub mod document;
pub mod error;

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use mealy_core::activity::{classify_detout, growth_rate_detout};
use mealy_core::dot::{detout_dot, mealy_dot, nfa_dot, osg_dot};
use mealy_core::{
    brute_force_activity, build_osg_capped, decide_order, determinize_all, parse_wreath,
    print_wreath, pruned_output, ActivityConfig, AutomatonSet, DetOut, GrowthClass, OrderConfig,
    OrderVerdict, Transformation,
};
use rayon::prelude::*;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

pub use document::ResultDocument;
use document::{ErrorInfo, InputDigest, Timings, FORMAT_VERSION};
pub use error::CliError;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INCONCLUSIVE: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "mealy",
    version,
    about = "Activity growth and order of Mealy-automaton transformations"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// State to analyse; defaults to `main`, else the first equation.
    #[arg(long, global = true)]
    pub state: Option<String>,

    /// Target precision of growth-rate computations.
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub precision: f64,

    /// Print JSON result documents instead of text.
    #[arg(long, global = true)]
    pub json: bool,

    /// Process input files on this many threads. Output order and content
    /// do not depend on it.
    #[arg(long, global = true, default_value_t = 1)]
    pub jobs: usize,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Polynomial degree or exponential rate of activity growth.
    Classify {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[arg(long, default_value_t = 1_000_000)]
        max_subsets: usize,
    },
    /// Activity values α(1..=N).
    Activity {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[arg(long, default_value_t = 10)]
        upto: usize,
        /// Recount every value by enumerating all input words.
        #[arg(long)]
        oracle: bool,
        /// Largest number of words the oracle may enumerate per length.
        #[arg(long, default_value_t = 1_000_000)]
        budget: u128,
    },
    /// Decide whether the transformation has finite order.
    Order {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[arg(long, default_value_t = 10_000)]
        max_vertices: usize,
        /// Cap on intermediate products while expanding one vertex.
        #[arg(long, default_value_t = 20_000)]
        max_vertex_states: usize,
        /// Fail unless the exact index is found.
        #[arg(long)]
        exact: bool,
    },
    /// Graphviz output of one of the associated automata.
    Export {
        file: PathBuf,
        #[arg(long, value_enum)]
        what: ExportKind,
        /// Write here instead of standard output.
        #[arg(long)]
        dot: Option<PathBuf>,
        #[arg(long, default_value_t = 10_000)]
        max_vertices: usize,
        #[arg(long, default_value_t = 20_000)]
        max_vertex_states: usize,
        #[arg(long, default_value_t = 1_000_000)]
        max_subsets: usize,
    },
    /// Wreath recursion of a product; the first name acts first.
    Compose {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        /// Space-separated state names.
        #[arg(long)]
        word: String,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExportKind {
    Mealy,
    Out,
    Detout,
    Osg,
}

impl ExportKind {
    fn as_str(self) -> &'static str {
        match self {
            ExportKind::Mealy => "mealy",
            ExportKind::Out => "out",
            ExportKind::Detout => "detout",
            ExportKind::Osg => "osg",
        }
    }
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Classify { .. } => "classify",
            Command::Activity { .. } => "activity",
            Command::Order { .. } => "order",
            Command::Export { .. } => "export",
            Command::Compose { .. } => "compose",
        }
    }

    fn files(&self) -> Vec<PathBuf> {
        match self {
            Command::Classify { files, .. }
            | Command::Activity { files, .. }
            | Command::Order { files, .. }
            | Command::Compose { files, .. } => files.clone(),
            Command::Export { file, .. } => vec![file.clone()],
        }
    }
}

/// What one command produced for one file.
#[derive(Debug, Clone)]
pub struct Report {
    pub text: String,
    pub result: Value,
    pub exit_code: i32,
}

/// A parsed input file together with its digest.
pub struct Input {
    pub path: PathBuf,
    pub sha256: String,
    pub set: AutomatonSet,
}

pub fn load(path: &Path) -> Result<Input, CliError> {
    let bytes = std::fs::read(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let sha256 = format!("{:x}", Sha256::digest(&bytes));
    let text = String::from_utf8(bytes).map_err(|_| CliError::Encoding {
        path: path.to_path_buf(),
    })?;
    let set = parse_wreath(&text).map_err(|source| CliError::Core {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(Input {
        path: path.to_path_buf(),
        sha256,
        set,
    })
}

impl Input {
    fn core(&self) -> impl Fn(mealy_core::Error) -> CliError + '_ {
        move |source| CliError::Core {
            path: self.path.clone(),
            source,
        }
    }

    /// The requested state, or the file's default.
    pub fn select(&self, state: Option<&str>) -> Result<(String, Transformation), CliError> {
        let name = state.unwrap_or_else(|| self.set.default_name()).to_string();
        let t = self
            .set
            .resolve(&name)
            .map_err(|_| CliError::UnknownState {
                path: self.path.clone(),
                name: name.clone(),
            })?;
        Ok((name, t))
    }
}

fn digits<T: ToString>(values: &[T]) -> Vec<String> {
    values.iter().map(ToString::to_string).collect()
}

fn class_json(class: &GrowthClass) -> Value {
    match *class {
        GrowthClass::Polynomial { degree } => json!({
            "kind": "polynomial",
            "degree": degree,
        }),
        GrowthClass::Exponential { lambda, rate } => json!({
            "kind": "exponential",
            "lambda": lambda,
            "rate": rate,
        }),
    }
}

/// Runs `command` on one file.
pub fn execute(cli: &Cli, input: &Input) -> Result<Report, CliError> {
    let (name, t) = input.select(cli.state.as_deref())?;
    let core = input.core();
    let mut text = String::new();
    let _ = writeln!(text, "state: {name}");
    match &cli.command {
        Command::Classify { max_subsets, .. } => {
            let config = ActivityConfig {
                max_subsets: *max_subsets,
                precision: cli.precision,
                ..ActivityConfig::default()
            };
            let det = DetOut::of(&t, config.max_subsets).map_err(&core)?;
            let class = classify_detout(&det, &config).map_err(&core)?;
            let structure = det.structure();
            let _ = writeln!(text, "class: {class}");
            let _ = writeln!(
                text,
                "detout: {} subsets, {} transitions, {} cyclic components, longest cycle chain {}",
                det.len(),
                det.transition_count(),
                structure.cyclic_count(),
                structure.longest_chain
            );
            let mut result = json!({
                "state": name,
                "class": class.to_string(),
                "growth": class_json(&class),
                "detout": {
                    "subsets": det.len(),
                    "transitions": det.transition_count(),
                    "cyclic_components": structure.cyclic_count(),
                    "longest_chain": structure.longest_chain,
                },
            });
            if !class.is_polynomial() {
                let g = growth_rate_detout(&det, &config).map_err(&core)?;
                let _ = writeln!(text, "lambda bracket: [{:.12}, {:.12}]", g.lower, g.upper);
                result["growth"]["bracket"] = json!([g.lower, g.upper]);
            }
            Ok(Report {
                text,
                result,
                exit_code: EXIT_OK,
            })
        }
        Command::Activity {
            upto,
            oracle,
            budget,
            ..
        } => {
            let det = DetOut::of(&t, ActivityConfig::default().max_subsets).map_err(&core)?;
            let series = det.series(*upto);
            let _ = writeln!(text, "alpha(1..{upto}): {}", digits(&series).join(" "));
            let mut result = json!({
                "state": name,
                "upto": upto,
                "series": digits(&series),
            });
            if *oracle {
                let mut counted = Vec::with_capacity(*upto);
                for n in 1..=*upto {
                    counted.push(brute_force_activity(&t, n, *budget).map_err(&core)?);
                }
                let _ = writeln!(text, "enumerated:   {}", digits(&counted).join(" "));
                if let Some(i) = (0..*upto).find(|&i| series[i] != counted[i]) {
                    return Err(CliError::OracleMismatch {
                        path: input.path.clone(),
                        n: i + 1,
                        counted: series[i].to_string(),
                        enumerated: counted[i].to_string(),
                    });
                }
                let _ = writeln!(text, "oracle: agrees");
                result["oracle"] = json!(digits(&counted));
            }
            Ok(Report {
                text,
                result,
                exit_code: EXIT_OK,
            })
        }
        Command::Order {
            max_vertices,
            max_vertex_states,
            exact,
            ..
        } => {
            let config = OrderConfig {
                max_vertices: *max_vertices,
                max_vertex_states: *max_vertex_states,
                ..OrderConfig::default()
            };
            let report = decide_order(&t, &config);
            let mut namer = input.set.namer();
            let g = &report.graph;
            let graph = json!({
                "vertices": g.vertices().len(),
                "edges": g.edges().len(),
                "expanded": g.expanded(),
                "complete": g.is_complete(),
                "state_cap_hit": g.hit_state_cap(),
            });
            let mut result = json!({
                "state": name,
                "class": report.class.map(|c| c.to_string()),
                "graph": graph,
            });
            let mut exit_code = EXIT_OK;
            match &report.verdict {
                OrderVerdict::Infinite {
                    witness,
                    witness_vertex,
                } => {
                    let vertex = [namer.name(&witness_vertex.s), namer.name(&witness_vertex.t)];
                    let _ = writeln!(text, "verdict: infinite");
                    let _ = writeln!(
                        text,
                        "witness: cycle through ({}, {}) with edge {} ({},{})",
                        vertex[0], vertex[1], witness.letter, witness.index, witness.period
                    );
                    result["verdict"] = json!("infinite");
                    result["witness"] = json!({
                        "vertex": vertex,
                        "letter": witness.letter,
                        "index": witness.index,
                        "period": witness.period,
                    });
                }
                OrderVerdict::Finite {
                    period,
                    index_lower,
                    index_upper,
                    exact_index,
                } => {
                    let _ = writeln!(text, "verdict: finite");
                    let _ = writeln!(text, "period: {period}");
                    match exact_index {
                        Some(i) => {
                            let _ = writeln!(text, "index: {i}");
                        }
                        None => {
                            let reason = report
                                .oracle_error
                                .as_ref()
                                .map_or_else(|| "not requested".to_string(), ToString::to_string);
                            if *exact {
                                return Err(CliError::ExactUnavailable {
                                    path: input.path.clone(),
                                    reason,
                                });
                            }
                            let _ = writeln!(text, "index: unknown ({reason})");
                        }
                    }
                    let _ = writeln!(text, "index bounds: [{index_lower}, {index_upper}]");
                    result["verdict"] = json!("finite");
                    result["period"] = json!(period.to_string());
                    result["index"] = json!(exact_index.as_ref().map(ToString::to_string));
                    result["index_lower"] = json!(index_lower.to_string());
                    result["index_upper"] = json!(index_upper.to_string());
                }
                OrderVerdict::Inconclusive { vertices_explored } => {
                    let cause = if g.hit_state_cap() {
                        "vertex state cap"
                    } else {
                        "vertex cap"
                    };
                    let _ = writeln!(text, "verdict: inconclusive");
                    let _ = writeln!(
                        text,
                        "explored: {vertices_explored} vertices before the {cause}"
                    );
                    result["verdict"] = json!("inconclusive");
                    result["vertices_explored"] = json!(vertices_explored);
                    exit_code = EXIT_INCONCLUSIVE;
                }
            }
            let _ = writeln!(
                text,
                "graph: {} vertices, {} edges{}",
                g.vertices().len(),
                g.edges().len(),
                if g.is_complete() { "" } else { " (partial)" }
            );
            Ok(Report {
                text,
                result,
                exit_code,
            })
        }
        Command::Export {
            what,
            dot,
            max_vertices,
            max_vertex_states,
            max_subsets,
            ..
        } => {
            let mut namer = input.set.namer();
            let names = namer.state_names(&t);
            let graph = match what {
                ExportKind::Mealy => mealy_dot(&t, &names),
                ExportKind::Out => nfa_dot(&pruned_output(&t), &names),
                ExportKind::Detout => {
                    let det = determinize_all(&pruned_output(&t), *max_subsets).map_err(&core)?;
                    detout_dot(&det, &names)
                }
                ExportKind::Osg => {
                    let g = build_osg_capped(&t, *max_vertices, *max_vertex_states);
                    osg_dot(&g, |x| namer.name(x))
                }
            };
            let mut result = json!({ "state": name, "what": what.as_str() });
            match dot {
                Some(path) => {
                    std::fs::write(path, &graph).map_err(|source| CliError::Io {
                        path: path.clone(),
                        source,
                    })?;
                    let _ = writeln!(text, "wrote {}", path.display());
                    result["dot_path"] = json!(path.display().to_string());
                }
                None => {
                    // the DOT text is the whole output
                    text = graph.clone();
                    result["dot"] = json!(graph);
                }
            }
            Ok(Report {
                text,
                result,
                exit_code: EXIT_OK,
            })
        }
        Command::Compose { word, .. } => {
            let names: Vec<&str> = word.split_whitespace().collect();
            let mut product = Transformation::identity(input.set.alphabet_size());
            for n in &names {
                let factor = input.select(Some(n))?.1;
                product = product.compose(&factor).map_err(&core)?;
            }
            let mut namer = input.set.namer();
            let root = match namer.lookup(&product) {
                Some(known) => known.to_string(),
                None if names.is_empty() => "e".to_string(),
                None => names.join("_"),
            };
            let wreath = print_wreath(&product, &root, &mut namer);
            text = wreath.clone();
            Ok(Report {
                text,
                result: json!({
                    "word": names,
                    "states": product.state_count(),
                    "wreath": wreath,
                }),
                exit_code: EXIT_OK,
            })
        }
    }
}

fn parameters(cli: &Cli) -> BTreeMap<String, Value> {
    let mut p = BTreeMap::new();
    p.insert("state".into(), json!(cli.state));
    match &cli.command {
        Command::Classify { max_subsets, .. } => {
            p.insert("precision".into(), json!(cli.precision));
            p.insert("max_subsets".into(), json!(max_subsets));
        }
        Command::Activity {
            upto,
            oracle,
            budget,
            ..
        } => {
            p.insert("upto".into(), json!(upto));
            p.insert("oracle".into(), json!(oracle));
            p.insert("budget".into(), json!(budget.to_string()));
        }
        Command::Order {
            max_vertices,
            max_vertex_states,
            exact,
            ..
        } => {
            p.insert("max_vertices".into(), json!(max_vertices));
            p.insert("max_vertex_states".into(), json!(max_vertex_states));
            p.insert("exact".into(), json!(exact));
        }
        Command::Export {
            what,
            dot,
            max_vertices,
            max_vertex_states,
            max_subsets,
            ..
        } => {
            p.insert("what".into(), json!(what.as_str()));
            p.insert(
                "dot".into(),
                json!(dot.as_ref().map(|d| d.display().to_string())),
            );
            p.insert("max_vertices".into(), json!(max_vertices));
            p.insert("max_vertex_states".into(), json!(max_vertex_states));
            p.insert("max_subsets".into(), json!(max_subsets));
        }
        Command::Compose { word, .. } => {
            p.insert("word".into(), json!(word));
        }
    }
    p
}

/// Output of one file: the document and the text rendering.
#[derive(Debug, Clone)]
pub struct FileOutcome {
    pub document: ResultDocument,
    pub text: String,
    /// Message for standard error, if the command failed.
    pub error: Option<String>,
}

pub fn run_file(cli: &Cli, path: &Path) -> FileOutcome {
    let start = Instant::now();
    let mut digest = String::new();
    let outcome = load(path).and_then(|input| {
        digest = input.sha256.clone();
        execute(cli, &input)
    });
    let (result, text, error, exit_code) = match outcome {
        Ok(r) => (Some(r.result), r.text, None, r.exit_code),
        Err(e) => (None, String::new(), Some(e.to_string()), e.exit_code()),
    };
    FileOutcome {
        document: ResultDocument {
            format: FORMAT_VERSION,
            command: cli.command.name().to_string(),
            input: InputDigest {
                path: path.display().to_string(),
                sha256: digest,
            },
            parameters: parameters(cli),
            result,
            error: error.clone().map(|message| ErrorInfo { message }),
            exit_code,
            timings: Timings {
                total_ms: start.elapsed().as_secs_f64() * 1e3,
            },
        },
        text,
        error,
    }
}

/// Runs every file, in parallel when `--jobs` is above one, and returns the
/// outcomes in input order.
pub fn run_all(cli: &Cli) -> Vec<FileOutcome> {
    let files = cli.command.files();
    if cli.jobs <= 1 || files.len() <= 1 {
        return files.iter().map(|f| run_file(cli, f)).collect();
    }
    match rayon::ThreadPoolBuilder::new()
        .num_threads(cli.jobs)
        .build()
    {
        Ok(pool) => pool.install(|| files.par_iter().map(|f| run_file(cli, f)).collect()),
        Err(_) => files.iter().map(|f| run_file(cli, f)).collect(),
    }
}

/// The worst exit code: resource caps over inconclusive over input errors
/// over oracle failures.
pub fn combined_exit_code(outcomes: &[FileOutcome]) -> i32 {
    outcomes
        .iter()
        .map(|o| o.document.exit_code)
        .max()
        .unwrap_or(EXIT_OK)
}

/// Writes the outcomes and returns the process exit code.
pub fn run(cli: &Cli, out: &mut impl Write, err: &mut impl Write) -> i32 {
    let outcomes = run_all(cli);
    for o in &outcomes {
        if let Some(message) = &o.error {
            let _ = writeln!(err, "mealy: error: {message}");
        }
    }
    if cli.json {
        let docs: Vec<&ResultDocument> = outcomes.iter().map(|o| &o.document).collect();
        let rendered = if docs.len() == 1 {
            serde_json::to_string_pretty(docs[0])
        } else {
            serde_json::to_string_pretty(&docs)
        };
        let _ = writeln!(out, "{}", rendered.expect("documents serialize"));
    } else {
        let several = outcomes.len() > 1;
        for o in &outcomes {
            if several {
                let _ = writeln!(out, "== {}", o.document.input.path);
            }
            let _ = write!(out, "{}", o.text);
        }
    }
    combined_exit_code(&outcomes)
}
