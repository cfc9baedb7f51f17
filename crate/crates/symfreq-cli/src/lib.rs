//! Command-line front end: counting, checkpoint tracing, generation, and
//! comparison of symbol streams, with JSON or CSV output.

mod gen_spec;
mod output;

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use symfreq::sources::{decode_file, encode_symbols, DecodeMode, DecoderConfig, SymbolSource};
use symfreq::{
    build_report, count_stream, run_checkpointed, Alphabet, AnalysisError, CheckpointSchedule,
    CountVector, DistanceMetric, EmpiricalMeasure, EngineConfig, EngineError, MeasureError,
    SourceError,
};

/// Exact symbol-frequency statistics over m-ary alphabets.
#[derive(Debug, Parser)]
#[command(name = "symfreq", version, about)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Count symbols in a prefix and print the exact empirical measure.
    Count(CountArgs),
    /// Record counts and distances to a target at scheduled prefix lengths.
    Trace(TraceArgs),
    /// Write symbols from a generator.
    Gen(GenArgs),
    /// Compare the empirical measures of two inputs over a common prefix.
    Compare(CompareArgs),
}

/// Byte-level encodings for symbol streams.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Encoding {
    /// Digit characters 0-9 then a-z; whitespace is skipped when reading.
    Ascii,
    /// One symbol per byte, byte value equal to the symbol value.
    Raw,
}

impl Encoding {
    fn decoder(self) -> DecoderConfig {
        match self {
            Encoding::Ascii => DecoderConfig::ascii(),
            Encoding::Raw => DecoderConfig::raw(),
        }
    }

    fn mode(self) -> DecodeMode {
        match self {
            Encoding::Ascii => DecodeMode::AsciiDigit,
            Encoding::Raw => DecodeMode::RawByte,
        }
    }
}

/// Output serialization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    /// One JSON object per result row.
    Json,
    /// Comma-separated values with a header row.
    Csv,
}

#[derive(Debug, Args)]
struct CountArgs {
    /// Input file of encoded symbols.
    input: PathBuf,

    /// Alphabet size m; symbols are 0..m-1.
    #[arg(long, value_name = "M")]
    base: u32,

    /// Prefix length to count; defaults to the whole input.
    #[arg(long, value_name = "N")]
    n: Option<u64>,

    /// How input bytes map to symbols.
    #[arg(long, value_enum, default_value_t = Encoding::Ascii)]
    decode: Encoding,

    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Worker threads for counting.
    #[arg(long, value_name = "D", default_value_t = 1)]
    parallel: usize,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("stream").required(true).args(["input", "gen"])))]
struct TraceArgs {
    /// Input file of encoded symbols.
    input: Option<PathBuf>,

    /// Generator instead of a file: periodic:0110, bernoulli:1/3,1/3,1/3,
    /// or champernowne.
    #[arg(long, value_name = "SPEC")]
    gen: Option<String>,

    /// Alphabet size m; required for files and champernowne, inferred for
    /// the other generators.
    #[arg(long, value_name = "M")]
    base: Option<u32>,

    /// Seed for stochastic generators.
    #[arg(long, value_name = "SEED", default_value_t = 0)]
    seed: u64,

    /// How input bytes map to symbols.
    #[arg(long, value_enum, default_value_t = Encoding::Ascii)]
    decode: Encoding,

    /// Comma-separated checkpoint prefix lengths.
    #[arg(long, value_name = "LIST", value_delimiter = ',', conflicts_with = "geometric")]
    checkpoints: Option<Vec<u64>>,

    /// Geometric checkpoint schedule n_k = round(r^k) with this ratio;
    /// the default schedule when --checkpoints is absent uses r = 2.
    #[arg(long, value_name = "R")]
    geometric: Option<f64>,

    /// Upper bound for generated schedules; required when the stream
    /// length is not known in advance.
    #[arg(long, value_name = "N")]
    max_n: Option<u64>,

    /// Target measure: "uniform" or comma-separated rationals.
    #[arg(long, value_name = "TARGET", default_value = "uniform")]
    target: String,

    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Worker threads for counting.
    #[arg(long, value_name = "D", default_value_t = 1)]
    parallel: usize,
}

#[derive(Debug, Args)]
struct GenArgs {
    /// Generator: periodic:0110, bernoulli:1/3,1/3,1/3, or champernowne.
    spec: String,

    /// Number of symbols to write.
    #[arg(long, value_name = "N")]
    count: u64,

    /// Alphabet size m; required for champernowne, inferred for the other
    /// generators.
    #[arg(long, value_name = "M")]
    base: Option<u32>,

    /// Seed for stochastic generators.
    #[arg(long, value_name = "SEED", default_value_t = 0)]
    seed: u64,

    /// Output encoding.
    #[arg(long, value_enum, default_value_t = Encoding::Ascii)]
    encode: Encoding,

    /// Output path; stdout when omitted.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct CompareArgs {
    /// First input file.
    left: PathBuf,

    /// Second input file.
    right: PathBuf,

    /// Alphabet size m; symbols are 0..m-1.
    #[arg(long, value_name = "M")]
    base: u32,

    /// Prefix length to compare; both inputs must reach it.
    #[arg(long, value_name = "N")]
    n: u64,

    /// How input bytes map to symbols.
    #[arg(long, value_enum, default_value_t = Encoding::Ascii)]
    decode: Encoding,
}

/// Errors reported to the user; every variant exits with status 2.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Source(#[from] SourceError),
    #[error(transparent)]
    Measure(#[from] MeasureError),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
    #[error("cannot write {path}: {source}")]
    Create {
        path: String,
        source: std::io::Error,
    },
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("serialization error: {0}")]
    Json(#[from] serde_json::Error),
}

/// Executes a parsed command, writing its machine-readable output to `out`.
pub fn run(cli: Cli, out: &mut dyn Write) -> Result<(), CliError> {
    match cli.command {
        Command::Count(args) => cmd_count(args, out),
        Command::Trace(args) => cmd_trace(args, out),
        Command::Gen(args) => cmd_gen(args, out),
        Command::Compare(args) => cmd_compare(args, out),
    }
}

fn cmd_count(args: CountArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let alphabet = Alphabet::new(args.base)?;
    let mut source = decode_file(&args.input, alphabet, &args.decode.decoder())?;
    let config = EngineConfig {
        parallelism: args.parallel,
        ..EngineConfig::default()
    };
    let counts = count_stream(source.as_mut(), args.n, &config)?;
    let measure = counts.empirical_measure()?;
    match args.format {
        Format::Json => output::write_count_json(out, &counts, &measure),
        Format::Csv => output::write_count_csv(out, &counts, &measure),
    }
}

fn cmd_trace(args: TraceArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let (mut source, alphabet) = open_trace_source(&args)?;
    let schedule = resolve_schedule(&args, source.as_ref(), alphabet)?;
    let config = EngineConfig {
        parallelism: args.parallel,
        ..EngineConfig::default()
    };
    let series = run_checkpointed(source.as_mut(), &schedule, &config)?;
    let target = parse_target(&args.target, alphabet)?;
    let report = build_report(&series, &target)?;
    match args.format {
        Format::Json => output::write_trace_json(out, &report),
        Format::Csv => output::write_trace_csv(out, &report),
    }
}

fn cmd_gen(args: GenArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let (mut source, alphabet) = gen_spec::open_generator(&args.spec, args.base, args.seed)?;
    let mut file_sink;
    let sink: &mut dyn Write = match &args.out {
        Some(path) => {
            let file = File::create(path).map_err(|source| CliError::Create {
                path: path.display().to_string(),
                source,
            })?;
            file_sink = BufWriter::new(file);
            &mut file_sink
        }
        None => out,
    };
    let mode = args.encode.mode();
    let mut remaining = args.count;
    let mut buf = vec![0u8; 64 * 1024];
    while remaining > 0 {
        let want = (buf.len() as u64).min(remaining) as usize;
        let got = source.read_symbols(&mut buf[..want])?;
        if got == 0 {
            return Err(CliError::Usage(format!(
                "generator ended after {} of {} symbols",
                args.count - remaining,
                args.count
            )));
        }
        let encoded = encode_symbols(alphabet, &buf[..got], mode)?;
        sink.write_all(&encoded)?;
        remaining -= got as u64;
    }
    sink.flush()?;
    Ok(())
}

fn cmd_compare(args: CompareArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let alphabet = Alphabet::new(args.base)?;
    let config = EngineConfig::default();
    let count_one = |path: &Path| -> Result<CountVector, CliError> {
        let mut source = decode_file(path, alphabet, &args.decode.decoder())?;
        Ok(count_stream(source.as_mut(), Some(args.n), &config)?)
    };
    let left = count_one(&args.left)?;
    let right = count_one(&args.right)?;
    let left_measure = left.empirical_measure()?;
    let right_measure = right.empirical_measure()?;
    let total_variation = left_measure.distance(&right_measure, DistanceMetric::TotalVariation)?;
    let sup_deviation = left_measure.distance(&right_measure, DistanceMetric::SupDeviation)?;
    output::write_compare_json(
        out,
        &left,
        &right,
        &left_measure,
        &right_measure,
        &total_variation,
        &sup_deviation,
    )
}

fn open_trace_source(args: &TraceArgs) -> Result<(Box<dyn SymbolSource>, Alphabet), CliError> {
    if let Some(path) = &args.input {
        let base = args
            .base
            .ok_or_else(|| CliError::Usage("--base is required for file input".into()))?;
        let alphabet = Alphabet::new(base)?;
        let source = decode_file(path, alphabet, &args.decode.decoder())?;
        Ok((source, alphabet))
    } else {
        let spec = args.gen.as_deref().expect("clap enforces input xor gen");
        gen_spec::open_generator(spec, args.base, args.seed)
    }
}

fn resolve_schedule(
    args: &TraceArgs,
    source: &dyn SymbolSource,
    alphabet: Alphabet,
) -> Result<CheckpointSchedule, CliError> {
    if let Some(points) = &args.checkpoints {
        return Ok(CheckpointSchedule::from_points(points)?);
    }
    let ratio = args.geometric.unwrap_or(2.0);
    let bound = match args.max_n.or_else(|| source.known_len()) {
        Some(n) => n,
        // Files decoded through a skip set have no cheap length; one
        // counting pass pins the schedule to the true symbol count.
        None => match &args.input {
            Some(path) => scan_symbol_len(path, alphabet, args.decode)?,
            None => {
                return Err(CliError::Usage(
                    "stream length is unknown: bound the schedule with --max-n or pass explicit --checkpoints".into(),
                ))
            }
        },
    };
    if bound == 0 {
        return Err(CliError::Usage(
            "input is empty: no checkpoint is reachable".into(),
        ));
    }
    Ok(CheckpointSchedule::geometric(ratio, bound)?)
}

fn scan_symbol_len(path: &Path, alphabet: Alphabet, decode: Encoding) -> Result<u64, CliError> {
    let mut source = decode_file(path, alphabet, &decode.decoder())?;
    let mut total = 0u64;
    let mut buf = vec![0u8; 1 << 16];
    loop {
        let got = source.read_symbols(&mut buf)?;
        if got == 0 {
            return Ok(total);
        }
        total += got as u64;
    }
}

fn parse_target(text: &str, alphabet: Alphabet) -> Result<EmpiricalMeasure, CliError> {
    if text == "uniform" {
        return Ok(EmpiricalMeasure::uniform(alphabet));
    }
    let components = text
        .split(',')
        .map(gen_spec::parse_rational)
        .collect::<Result<Vec<_>, _>>()?;
    Ok(EmpiricalMeasure::from_rationals(alphabet, &components)?)
}
