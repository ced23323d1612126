use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;
use zec_core::channel::{
    evaluate, load_channel, parse_states, validate_completeness, ChannelError, LoadedChannel, Params, LENIENT_TOL, STRICT_TOL,
};
use zec_core::codec::CodeError;
use zec_core::distinguishability::GraphError;
use zec_core::report::{self, AnalysisOptions, SCHEMA_VERSION};
use zec_core::Error;

mod render;

/// Exit statuses; a stable contract for scripts.
mod exit {
    pub const INVALID_CHANNEL: u8 = 1;
    pub const PARSE: u8 = 2;
    pub const BUDGET: u8 = 3;
    pub const NO_WITNESS: u8 = 4;
    pub const NUMERICAL: u8 = 5;
}

#[derive(Parser)]
#[command(name = "zec", version, about = "Certify lower bounds on the zero-error capacity of Kraus channels")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the completeness relation of a channel file.
    Validate(Common),
    /// Full analysis: common eigenstates, fixed space, bounds and a verified code.
    Analyze {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        graph: GraphArgs,
    },
    /// Confusability graph, independence number and n-shot rate for a states file.
    Graph {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        graph: GraphArgs,
    },
    /// Transmit messages through a repetition code and check for zero error.
    Simulate {
        #[command(flatten)]
        common: Common,
        /// Number of messages (default: every available witness state).
        #[arg(long)]
        messages: Option<usize>,
        /// Block length of the repetition code.
        #[arg(long, default_value_t = 1)]
        block: usize,
    },
}

#[derive(Args)]
struct Common {
    /// Channel file (JSON).
    file: PathBuf,
    /// Completeness tolerance (validate: 1e-9; other commands: 1e-3).
    #[arg(long)]
    tol: Option<f64>,
    /// Parameter override for expression entries, as name=value.
    #[arg(long = "param", value_name = "K=V")]
    params: Vec<String>,
    /// Also write the machine-readable report here.
    #[arg(long)]
    json: Option<PathBuf>,
    /// Continue past a failed completeness check; nothing is certified.
    #[arg(long)]
    allow_invalid: bool,
}

#[derive(Args)]
struct GraphArgs {
    /// States file (JSON list of vectors or density matrices).
    #[arg(long)]
    states: Option<PathBuf>,
    /// Block length for the strong product.
    #[arg(short = 'n', default_value_t = 1)]
    n: usize,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Parse(_) => exit::PARSE,
            Error::Channel(c) | Error::Code(CodeError::Channel(c)) | Error::Graph(GraphError::Channel(c)) => channel_code(c),
            Error::Graph(g) | Error::Code(CodeError::Graph(g)) => graph_code(g),
            Error::Code(CodeError::BudgetExceeded { .. }) => exit::BUDGET,
            Error::Code(CodeError::NoWitness { .. } | CodeError::AdjacentCodewords { .. } | CodeError::OverlappingSupports { .. }) => {
                exit::NO_WITNESS
            }
            _ => exit::NUMERICAL,
        };
        Self::new(code, e.to_string())
    }
}

fn channel_code(e: &ChannelError) -> u8 {
    match e {
        ChannelError::NotCptp { .. } | ChannelError::Unvalidated => exit::INVALID_CHANNEL,
        ChannelError::DimensionMismatch { .. } | ChannelError::InvalidState(_) | ChannelError::InvalidKraus(_) => exit::PARSE,
        ChannelError::Numerics(_) => exit::NUMERICAL,
    }
}

fn graph_code(e: &GraphError) -> u8 {
    match e {
        GraphError::TooManyVertices { .. } | GraphError::BudgetExceeded { .. } | GraphError::BlockLength(_) => exit::BUDGET,
        GraphError::DimensionMismatch { .. } => exit::PARSE,
        GraphError::Channel(c) => channel_code(c),
        _ => exit::NUMERICAL,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(command: Command) -> Result<u8, Failure> {
    match command {
        Command::Validate(common) => validate(&common),
        Command::Analyze { common, graph } => analyze(&common, &graph),
        Command::Graph { common, graph } => graph_cmd(&common, &graph),
        Command::Simulate { common, messages, block } => simulate(&common, messages, block),
    }
}

fn parse_params(raw: &[String]) -> Result<Params, Failure> {
    let mut params = Params::new();
    for item in raw {
        let (k, v) = item
            .split_once('=')
            .ok_or_else(|| Failure::new(exit::PARSE, format!("--param expects name=value, got '{item}'")))?;
        let value = evaluate(v, &Params::new()).map_err(|e| Failure::new(exit::PARSE, e.to_string()))?;
        params.insert(k.trim().to_string(), value);
    }
    Ok(params)
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::new(exit::PARSE, format!("{}: {e}", path.display())))
}

fn load(common: &Common) -> Result<LoadedChannel, Failure> {
    let params = parse_params(&common.params)?;
    let text = read(&common.file)?;
    load_channel(&text, &params).map_err(|e| Failure::new(exit::PARSE, format!("{}: {e}", common.file.display())))
}

fn options(common: &Common, loaded: &LoadedChannel, graph: Option<&GraphArgs>) -> Result<AnalysisOptions, Failure> {
    let mut opts = AnalysisOptions {
        validation_tol: common.tol.unwrap_or(LENIENT_TOL),
        allow_invalid: common.allow_invalid,
        ..AnalysisOptions::default()
    };
    if let Some(g) = graph {
        opts.block_length = g.n;
        if let Some(path) = &g.states {
            let states =
                parse_states(&read(path)?, &loaded.params).map_err(|e| Failure::new(exit::PARSE, format!("{}: {e}", path.display())))?;
            opts.states = Some(states);
        }
    }
    Ok(opts)
}

/// Writes through a sibling temporary file and a rename.
fn write_atomic(path: &Path, text: &str) -> Result<(), Failure> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    fs::write(&tmp, text)
        .and_then(|_| fs::rename(&tmp, path))
        .map_err(|e| Failure::new(exit::PARSE, format!("{}: {e}", path.display())))
}

fn emit_json(path: &Option<PathBuf>, value: &serde_json::Value) -> Result<(), Failure> {
    if let Some(path) = path {
        let mut text = serde_json::to_string_pretty(value).expect("finite values");
        text.push('\n');
        write_atomic(path, &text)?;
    }
    Ok(())
}

fn validate(common: &Common) -> Result<u8, Failure> {
    let loaded = load(common)?;
    let tol = common.tol.unwrap_or(STRICT_TOL);
    let v = validate_completeness(&loaded.channel, tol);
    print!("{}", render::validation(&loaded, &v));
    emit_json(
        &common.json,
        &json!({
            "schema": SCHEMA_VERSION,
            "command": "validate",
            "channel": loaded.channel.name(),
            "validation": v,
        }),
    )?;
    Ok(if v.passed { 0 } else { exit::INVALID_CHANNEL })
}

fn analyze(common: &Common, graph: &GraphArgs) -> Result<u8, Failure> {
    let loaded = load(common)?;
    let opts = options(common, &loaded, Some(graph))?;
    let report = match report::analyze(&loaded, &opts) {
        Ok(r) => r,
        Err(Error::Channel(ChannelError::NotCptp { .. })) => {
            let v = validate_completeness(&loaded.channel, opts.validation_tol);
            print!("{}", render::validation(&loaded, &v));
            return Err(Failure::new(
                exit::INVALID_CHANNEL,
                "channel fails validation; rerun with --allow-invalid to inspect it",
            ));
        }
        Err(e) => return Err(e.into()),
    };
    print!("{}", render::analysis(&report));
    if let Some(path) = &common.json {
        let mut text = report.to_json();
        text.push('\n');
        write_atomic(path, &text)?;
    }
    Ok(0)
}

fn graph_cmd(common: &Common, graph: &GraphArgs) -> Result<u8, Failure> {
    let loaded = load(common)?;
    let opts = options(common, &loaded, Some(graph))?;
    let Some(states) = &opts.states else {
        return Err(Failure::new(exit::PARSE, "graph needs --states FILE"));
    };
    let (ch, _) = report::prepare_channel(&loaded, opts.validation_tol, opts.allow_invalid).map_err(Error::from)?;
    let (section, entry) = report::graph_section(&ch, states, graph.n)?;
    print!("{}", render::graph(&section));
    emit_json(
        &common.json,
        &json!({
            "schema": SCHEMA_VERSION,
            "command": "graph",
            "channel": ch.name(),
            "graph": section,
            "bound": entry,
        }),
    )?;
    Ok(0)
}

fn simulate(common: &Common, messages: Option<usize>, block: usize) -> Result<u8, Failure> {
    let loaded = load(common)?;
    let opts = AnalysisOptions {
        block_length: block,
        ..options(common, &loaded, None)?
    };
    let section = report::simulate(&loaded, &opts, messages)?;
    print!("{}", render::code(&section));
    emit_json(
        &common.json,
        &json!({
            "schema": SCHEMA_VERSION,
            "command": "simulate",
            "channel": loaded.channel.name(),
            "code": section,
        }),
    )?;
    if section.zero_error {
        Ok(0)
    } else {
        Err(Failure::new(exit::NO_WITNESS, "the code is not zero-error"))
    }
}
