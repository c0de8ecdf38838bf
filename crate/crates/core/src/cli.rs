//! The `wubi` command-line tool.
//!
//! Every subcommand reads line-oriented UTF-8 (one sentence per line) from a
//! file or stdin and writes data to stdout or `--output`. Diagnostics go to
//! stderr. Exit codes: 0 success, 1 data or validation error, 2 usage error.

use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::builder::TypedValueParser;
use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use rayon::ThreadPool;

use crate::codec::{Codec, Mode};
use crate::error::Error;
use crate::metrics::bleu::{self, BleuStats};
use crate::metrics::bootstrap::{self, DEFAULT_SAMPLES};
use crate::metrics::normalize::{normalize_for_bleu, Side};
use crate::metrics::stats::{stats_from_counts, SentenceCounts};
use crate::pipeline::{self, LineChunks, LineError, Processed, CHUNK_LINES};
use crate::punct::PunctuationMap;
use crate::segmenter::{segment, Lexicon};
use crate::subword::{
    apply_vocab, bpe, from_characters, to_characters, BpeModel, GranularityConfig, TokenCounts,
    Vocabulary, DEFAULT_BPE_CAP, DEFAULT_WORD_CAP,
};
use crate::wubi_table::WubiTable;

pub const EXIT_OK: i32 = 0;
pub const EXIT_DATA: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "wubi", version, about = "Chinese/Wubi corpus preparation and MT evaluation")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Wubi table (`<char>\t<code>` lines); defaults to the built-in fixture table.
    #[arg(long, global = true, env = "WUBI_TABLE", value_name = "PATH")]
    pub table: Option<PathBuf>,
    /// Punctuation map (`<mark>\t<ascii>` lines); defaults to the built-in map.
    #[arg(long, global = true, env = "WUBI_PUNCT", value_name = "PATH")]
    pub punct: Option<PathBuf>,
    #[arg(long, global = true, env = "WUBI_MODE", value_enum, default_value_t = ModeArg::Strict)]
    pub mode: ModeArg,
    /// Worker threads for line-parallel subcommands.
    #[arg(long, global = true, env = "WUBI_THREADS", default_value_t = 1,
          value_parser = clap::value_parser!(u16).range(1..))]
    pub threads: u16,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Strict,
    Lenient,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Strict => Mode::Strict,
            ModeArg::Lenient => Mode::Lenient,
        }
    }
}

#[derive(Debug, Args)]
pub struct IoArgs {
    /// Input file; stdin when absent or `-`.
    pub input: Option<PathBuf>,
    /// Output file; stdout when absent or `-`.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    /// System output, one sentence per line.
    #[arg(long, value_name = "PATH")]
    pub hyp: PathBuf,
    /// References aligned with `--hyp`.
    #[arg(long = "ref", value_name = "PATH")]
    pub reference: PathBuf,
    /// Source sentences for length binning; reference lengths are used otherwise.
    #[arg(long, value_name = "PATH")]
    pub source: Option<PathBuf>,
    /// Encode Chinese-side hypothesis/reference files to Wubi before scoring.
    #[arg(long)]
    pub normalize_cn: bool,
    #[arg(long, default_value_t = bleu::DEFAULT_BIN_WIDTH,
          value_parser = clap::value_parser!(u32).range(1..).map(|v| v as usize))]
    pub bin_width: usize,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Encode segmented Chinese to Wubi.
    Encode {
        #[command(flatten)]
        io: IoArgs,
        /// Segment raw input with this lexicon before encoding.
        #[arg(long, value_name = "PATH", conflicts_with = "pre_segmented")]
        lexicon: Option<PathBuf>,
        /// Input is already segmented (the default).
        #[arg(long)]
        pre_segmented: bool,
    },
    /// Decode Wubi back to segmented Chinese.
    Decode {
        #[command(flatten)]
        io: IoArgs,
    },
    /// Segment raw Chinese by forward maximum matching.
    Segment {
        #[command(flatten)]
        io: IoArgs,
        #[arg(long, env = "WUBI_LEXICON", value_name = "PATH")]
        lexicon: PathBuf,
    },
    /// Build a capped word vocabulary, or replace OOV tokens with `<unk>`.
    Vocab {
        #[command(flatten)]
        io: IoArgs,
        #[arg(long, default_value_t = DEFAULT_WORD_CAP,
              value_parser = clap::value_parser!(u64).range(1..).map(|v| v as usize))]
        cap: usize,
        /// Apply this vocabulary file to the input instead of building one.
        #[arg(long, value_name = "VOCAB")]
        apply: Option<PathBuf>,
    },
    /// Learn BPE merges.
    BpeLearn {
        #[command(flatten)]
        io: IoArgs,
        #[arg(long, default_value_t = DEFAULT_BPE_CAP,
              value_parser = clap::value_parser!(u64).range(1..).map(|v| v as usize))]
        bpe_size: usize,
    },
    /// Split words into BPE subwords (or join them with `--undo`).
    BpeApply {
        #[command(flatten)]
        io: IoArgs,
        #[arg(long, value_name = "PATH", required_unless_present = "undo")]
        merges: Option<PathBuf>,
        #[arg(long)]
        undo: bool,
    },
    /// One token per character, spaces as `<sp>` (or the inverse with `--undo`).
    Chars {
        #[command(flatten)]
        io: IoArgs,
        #[arg(long)]
        undo: bool,
    },
    /// Words per sentence, characters per word and per sentence (mean, std).
    Stats {
        #[command(flatten)]
        io: IoArgs,
    },
    /// Corpus BLEU with a per-sentence and length-binned report.
    Bleu {
        #[command(flatten)]
        eval: EvalArgs,
        /// Write the full report as JSON.
        #[arg(long, value_name = "PATH")]
        report: Option<PathBuf>,
    },
    /// Sentence BLEU averaged by source length: `start\tend\tmean\tcount`.
    BinnedBleu {
        #[command(flatten)]
        eval: EvalArgs,
    },
    /// Paired bootstrap significance test of system A over system B.
    Bootstrap {
        #[arg(long, value_name = "PATH")]
        hyp_a: PathBuf,
        #[arg(long, value_name = "PATH")]
        hyp_b: PathBuf,
        #[arg(long = "ref", value_name = "PATH")]
        reference: PathBuf,
        #[arg(long, default_value_t = DEFAULT_SAMPLES,
              value_parser = clap::value_parser!(u64).range(1..).map(|v| v as usize))]
        samples: usize,
        #[arg(long, env = "WUBI_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        normalize_cn: bool,
        #[arg(long, value_name = "PATH")]
        report: Option<PathBuf>,
    },
    /// Encode then decode every line and count lines that do not come back.
    RoundtripCheck {
        #[command(flatten)]
        io: IoArgs,
    },
}

/// Settings shared by all subcommands after flag and environment resolution.
#[derive(Debug, Clone)]
pub struct PipelineConfig {
    pub table_path: Option<PathBuf>,
    pub punct_path: Option<PathBuf>,
    pub lexicon_path: Option<PathBuf>,
    pub mode: Mode,
    pub granularity: GranularityConfig,
    pub threads: usize,
    pub seed: u64,
}

impl PipelineConfig {
    pub fn from_cli(cli: &Cli) -> Self {
        let mut config = PipelineConfig {
            table_path: cli.global.table.clone(),
            punct_path: cli.global.punct.clone(),
            lexicon_path: None,
            mode: cli.global.mode.into(),
            granularity: GranularityConfig::default(),
            threads: cli.global.threads as usize,
            seed: 0,
        };
        match &cli.command {
            Command::Encode { lexicon, .. } => config.lexicon_path = lexicon.clone(),
            Command::Segment { lexicon, .. } => config.lexicon_path = Some(lexicon.clone()),
            Command::Vocab { cap, .. } => config.granularity.word_cap = *cap,
            Command::BpeLearn { bpe_size, .. } => config.granularity.bpe_cap = *bpe_size,
            Command::Bootstrap { seed, .. } => config.seed = *seed,
            _ => {}
        }
        config
    }

    pub fn load_codec(&self) -> Result<Codec, Failure> {
        let table = match &self.table_path {
            Some(p) => WubiTable::from_path(p).map_err(|e| Failure::data(Some(p), e))?,
            None => WubiTable::fixture(),
        };
        let punct = match &self.punct_path {
            Some(p) => PunctuationMap::from_path(p).map_err(|e| Failure::data(Some(p), e))?,
            None => PunctuationMap::builtin(),
        };
        Ok(Codec::new(table, punct))
    }
}

/// A message for stderr plus the exit code to leave with.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn data(path: Option<&Path>, err: impl std::fmt::Display) -> Self {
        let message = match path {
            Some(p) => format!("{}: {err}", p.display()),
            None => err.to_string(),
        };
        Failure {
            code: EXIT_DATA,
            message,
        }
    }

    fn at_line(path: Option<&Path>, err: LineError) -> Self {
        Failure {
            code: EXIT_DATA,
            message: match &err.error {
                Error::Parse { msg, .. } => format!("{}:{}: {msg}", display_name(path), err.line),
                e => format!("{}:{}: {e}", display_name(path), err.line),
            },
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.message)
    }
}

fn display_name(path: Option<&Path>) -> String {
    match path {
        Some(p) if p != Path::new("-") => p.display().to_string(),
        _ => "<stdin>".to_owned(),
    }
}

fn is_stdio(p: &Option<PathBuf>) -> bool {
    p.as_deref().is_none_or(|p| p == Path::new("-"))
}

fn open_input(path: &Option<PathBuf>) -> Result<Box<dyn BufRead>, Failure> {
    if is_stdio(path) {
        return Ok(Box::new(BufReader::new(io::stdin())));
    }
    let p = path.as_deref().expect("checked");
    let f = File::open(p).map_err(|e| Failure::data(Some(p), e))?;
    Ok(Box::new(BufReader::new(f)))
}

fn open_output(path: &Option<PathBuf>) -> Result<Box<dyn Write>, Failure> {
    if is_stdio(path) {
        return Ok(Box::new(BufWriter::new(io::stdout())));
    }
    let p = path.as_deref().expect("checked");
    let f = File::create(p).map_err(|e| Failure::data(Some(p), e))?;
    Ok(Box::new(BufWriter::new(f)))
}

fn read_file_lines(path: &Path) -> Result<Vec<String>, Failure> {
    let f = File::open(path).map_err(|e| Failure::data(Some(path), e))?;
    pipeline::read_all_lines(BufReader::new(f)).map_err(|e| Failure::at_line(Some(path), e))
}

fn write_err(path: &Option<PathBuf>) -> impl Fn(io::Error) -> Failure + '_ {
    move |e| Failure::data(path.as_deref().filter(|p| *p != Path::new("-")), e)
}

fn note_printer(path: &Option<PathBuf>) -> impl FnMut(usize, &str) + '_ {
    let name = display_name(path.as_deref());
    move |line, note| eprintln!("wubi: {name}:{line}: {note}")
}

/// Runs a parsed command line and returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    match execute(cli) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("wubi: {f}");
            f.code
        }
    }
}

fn execute(cli: Cli) -> Result<i32, Failure> {
    let config = PipelineConfig::from_cli(&cli);
    let pool = pipeline::build_pool(config.threads).map_err(|e| Failure {
        code: EXIT_USAGE,
        message: e.to_string(),
    })?;
    match &cli.command {
        Command::Encode { io, .. } => encode(io, &config, &pool),
        Command::Decode { io } => {
            let codec = config.load_codec()?;
            map_io(io, &pool, |line| codec.decode(line).map(Processed::from))
        }
        Command::Segment { io, lexicon } => {
            let lex = Lexicon::from_path(lexicon).map_err(|e| Failure::data(Some(lexicon), e))?;
            map_io(io, &pool, |line| Ok(segment(line, &lex).into()))
        }
        Command::Vocab { io, cap, apply } => vocab(io, *cap, apply.as_deref(), &pool),
        Command::BpeLearn { io, bpe_size } => bpe_learn(io, *bpe_size, &pool),
        Command::BpeApply { io, merges, undo } => {
            if *undo {
                return map_io(io, &pool, |line| Ok(bpe::bpe_undo(line).into()));
            }
            let path = merges.as_deref().expect("clap requires --merges");
            let f = File::open(path).map_err(|e| Failure::data(Some(path), e))?;
            let model =
                BpeModel::read_from(BufReader::new(f)).map_err(|e| Failure::data(Some(path), e))?;
            map_io(io, &pool, |line| Ok(bpe::bpe_apply(line, &model).into()))
        }
        Command::Chars { io, undo } => {
            if *undo {
                map_io(io, &pool, |line| Ok(from_characters(line).into()))
            } else {
                map_io(io, &pool, |line| Ok(to_characters(line).into()))
            }
        }
        Command::Stats { io } => stats(io, &pool),
        Command::Bleu { eval, report } => bleu_cmd(eval, report.as_deref(), &config, &pool),
        Command::BinnedBleu { eval } => binned_bleu(eval, &config, &pool),
        Command::Bootstrap {
            hyp_a,
            hyp_b,
            reference,
            samples,
            seed,
            normalize_cn,
            report,
        } => {
            let a = read_file_lines(hyp_a)?;
            let b = read_file_lines(hyp_b)?;
            let r = read_file_lines(reference)?;
            let (a, b, r) = if *normalize_cn {
                let codec = config.load_codec()?;
                let n = |lines: &[String], path: &Path| normalized(lines, path, &codec, &pool);
                (n(&a, hyp_a), n(&b, hyp_b), n(&r, reference))
            } else {
                (a, b, r)
            };
            let result = pool
                .install(|| bootstrap::paired_bootstrap(&a, &b, &r, *samples, *seed))
                .map_err(|e| Failure::data(None, e))?;
            let mut out = BufWriter::new(io::stdout());
            writeln!(out, "system A BLEU\t{:.4}", result.bleu_a)
                .and_then(|_| writeln!(out, "system B BLEU\t{:.4}", result.bleu_b))
                .and_then(|_| writeln!(out, "delta\t{:.4}", result.delta))
                .and_then(|_| writeln!(out, "B >= A\t{}/{}", result.b_at_least_a, result.samples))
                .and_then(|_| writeln!(out, "p-value\t{:.6}", result.p_value))
                .and_then(|_| writeln!(out, "seed\t{}", result.seed))
                .and_then(|_| out.flush())
                .map_err(|e| Failure::data(None, e))?;
            if let Some(path) = report {
                write_json(path, &result)?;
            }
            Ok(EXIT_OK)
        }
        Command::RoundtripCheck { io } => roundtrip_check(io, &config, &pool),
    }
}

fn map_io<F>(io: &IoArgs, pool: &ThreadPool, f: F) -> Result<i32, Failure>
where
    F: Fn(&str) -> crate::error::Result<Processed> + Sync,
{
    let reader = open_input(&io.input)?;
    let writer = open_output(&io.output)?;
    pipeline::map_lines(reader, writer, pool, f, note_printer(&io.input))
        .map_err(|e| Failure::at_line(io.input.as_deref(), e))?;
    Ok(EXIT_OK)
}

fn encode(io: &IoArgs, config: &PipelineConfig, pool: &ThreadPool) -> Result<i32, Failure> {
    let codec = config.load_codec()?;
    let lexicon = match &config.lexicon_path {
        Some(p) => Some(Lexicon::from_path(p).map_err(|e| Failure::data(Some(p), e))?),
        None => None,
    };
    let mode = config.mode;
    map_io(io, pool, |line| {
        let segmented;
        let line = match &lexicon {
            Some(lex) => {
                segmented = segment(line, lex);
                segmented.as_str()
            }
            None => line,
        };
        let enc = codec.encode(line, mode)?;
        Ok(Processed {
            line: enc.text.render(),
            notes: enc.diagnostics.iter().map(ToString::to_string).collect(),
        })
    })
}

fn count_tokens(io: &IoArgs, pool: &ThreadPool) -> Result<TokenCounts, Failure> {
    let reader = open_input(&io.input)?;
    let mut chunks = LineChunks::new(reader);
    let mut counts = TokenCounts::default();
    while let Some((_, lines)) = chunks
        .next_chunk(CHUNK_LINES)
        .map_err(|e| Failure::at_line(io.input.as_deref(), e))?
    {
        let part = pool.install(|| {
            lines
                .par_iter()
                .fold(TokenCounts::default, |mut acc, l| {
                    acc.add_sentence(l);
                    acc
                })
                .reduce(TokenCounts::default, |mut a, b| {
                    a.merge(b);
                    a
                })
        });
        counts.merge(part);
    }
    Ok(counts)
}

fn vocab(io: &IoArgs, cap: usize, apply: Option<&Path>, pool: &ThreadPool) -> Result<i32, Failure> {
    if let Some(path) = apply {
        let f = File::open(path).map_err(|e| Failure::data(Some(path), e))?;
        let vocab =
            Vocabulary::read_from(BufReader::new(f)).map_err(|e| Failure::data(Some(path), e))?;
        return map_io(io, pool, |line| Ok(apply_vocab(line, &vocab).into()));
    }
    let counts = count_tokens(io, pool)?;
    let vocab = Vocabulary::from_counts(&counts, cap).map_err(|e| Failure::data(None, e))?;
    let out = open_output(&io.output)?;
    vocab.write_to(out).map_err(|e| Failure::data(None, e))?;
    eprintln!(
        "wubi: vocabulary {} of {} types, coverage {:.4}%",
        vocab.len(),
        counts.distinct(),
        100.0 * vocab.coverage()
    );
    Ok(EXIT_OK)
}

fn bpe_learn(io: &IoArgs, size: usize, pool: &ThreadPool) -> Result<i32, Failure> {
    let counts = count_tokens(io, pool)?;
    let model = bpe::learn_from_counts(&counts, size);
    let out = open_output(&io.output)?;
    model.write_to(out).map_err(|e| Failure::data(None, e))?;
    eprintln!(
        "wubi: {} merges, {} symbols",
        model.merges().len(),
        model.vocab_size()
    );
    Ok(EXIT_OK)
}

fn stats(io: &IoArgs, pool: &ThreadPool) -> Result<i32, Failure> {
    let reader = open_input(&io.input)?;
    let lines =
        pipeline::read_all_lines(reader).map_err(|e| Failure::at_line(io.input.as_deref(), e))?;
    let counts: Vec<SentenceCounts> =
        pool.install(|| lines.par_iter().map(|l| SentenceCounts::of(l)).collect());
    let s = stats_from_counts(counts).map_err(|e| Failure::data(io.input.as_deref(), e))?;
    let mut out = open_output(&io.output)?;
    let rows = [
        ("words_per_sentence", s.words_per_sentence),
        ("chars_per_word", s.chars_per_word),
        ("chars_per_sentence", s.chars_per_sentence),
    ];
    let mut text = format!("sentences\t{}\n", s.sentence_count);
    for (name, ms) in rows {
        text.push_str(&format!("{name}\t{:.4}\t{:.4}\n", ms.mean, ms.std));
    }
    out.write_all(text.as_bytes())
        .and_then(|_| out.flush())
        .map_err(write_err(&io.output))?;
    Ok(EXIT_OK)
}

fn normalized(lines: &[String], path: &Path, codec: &Codec, pool: &ThreadPool) -> Vec<String> {
    let n = pool.install(|| normalize_for_bleu(lines, Side::Auto, &codec.table, &codec.punct));
    for (idx, d) in &n.diagnostics {
        eprintln!("wubi: {}:{}: {d}", path.display(), idx + 1);
    }
    n.lines
}

fn evaluate(
    eval: &EvalArgs,
    config: &PipelineConfig,
    pool: &ThreadPool,
) -> Result<bleu::BleuReport, Failure> {
    let mut hyps = read_file_lines(&eval.hyp)?;
    let mut refs = read_file_lines(&eval.reference)?;
    if eval.normalize_cn {
        let codec = config.load_codec()?;
        hyps = normalized(&hyps, &eval.hyp, &codec, pool);
        refs = normalized(&refs, &eval.reference, &codec, pool);
    }
    let sources = match &eval.source {
        Some(p) => Some(read_file_lines(p)?),
        None => None,
    };
    if hyps.len() != refs.len() {
        return Err(Failure::data(
            None,
            Error::LengthMismatch {
                what: "hypotheses vs references",
                left: hyps.len(),
                right: refs.len(),
            },
        ));
    }
    let stats: Vec<BleuStats> = pool.install(|| {
        hyps.par_iter()
            .zip(refs.par_iter())
            .map(|(h, r)| BleuStats::of(h, r))
            .collect()
    });
    let source_lens: Vec<usize> = match &sources {
        Some(src) => src.iter().map(|s| s.split_whitespace().count()).collect(),
        None => stats.iter().map(|s| s.ref_len as usize).collect(),
    };
    bleu::report_from_stats(&stats, &source_lens, eval.bin_width)
        .map_err(|e| Failure::data(eval.source.as_deref(), e))
}

fn bleu_cmd(
    eval: &EvalArgs,
    report_path: Option<&Path>,
    config: &PipelineConfig,
    pool: &ThreadPool,
) -> Result<i32, Failure> {
    let report = evaluate(eval, config, pool)?;
    let p = report.ngram_precisions;
    let mut out = BufWriter::new(io::stdout());
    writeln!(
        out,
        "BLEU = {:.4}  {:.1}/{:.1}/{:.1}/{:.1}  (BP = {:.4}, hyp_len = {}, ref_len = {}, sentences = {})",
        report.corpus_bleu,
        100.0 * p[0],
        100.0 * p[1],
        100.0 * p[2],
        100.0 * p[3],
        report.brevity_penalty,
        report.hyp_len,
        report.ref_len,
        report.per_sentence.len()
    )
    .and_then(|_| out.flush())
    .map_err(|e| Failure::data(None, e))?;
    if let Some(path) = report_path {
        write_json(path, &report)?;
    }
    Ok(EXIT_OK)
}

fn binned_bleu(eval: &EvalArgs, config: &PipelineConfig, pool: &ThreadPool) -> Result<i32, Failure> {
    let report = evaluate(eval, config, pool)?;
    let mut out = BufWriter::new(io::stdout());
    let mut text = String::new();
    for b in &report.bins {
        text.push_str(&format!("{}\t{}\t{:.4}\t{}\n", b.start, b.end, b.mean_bleu, b.count));
    }
    out.write_all(text.as_bytes())
        .and_then(|_| out.flush())
        .map_err(|e| Failure::data(None, e))?;
    Ok(EXIT_OK)
}

fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> Result<(), Failure> {
    let f = File::create(path).map_err(|e| Failure::data(Some(path), e))?;
    let mut w = BufWriter::new(f);
    serde_json::to_writer_pretty(&mut w, value)
        .map_err(|e| Failure::data(Some(path), e))
        .and_then(|_| {
            writeln!(w)
                .and_then(|_| w.flush())
                .map_err(|e| Failure::data(Some(path), e))
        })
}

fn roundtrip_check(io: &IoArgs, config: &PipelineConfig, pool: &ThreadPool) -> Result<i32, Failure> {
    let codec = config.load_codec()?;
    let mode = config.mode;
    let reader = open_input(&io.input)?;
    let mut chunks = LineChunks::new(reader);
    let mut note = note_printer(&io.input);
    let (mut lines, mut mismatches) = (0usize, 0usize);
    while let Some((first, chunk)) = chunks
        .next_chunk(CHUNK_LINES)
        .map_err(|e| Failure::at_line(io.input.as_deref(), e))?
    {
        let results: Vec<Option<String>> = pool.install(|| {
            chunk
                .par_iter()
                .map(|line| match codec.encode(line, mode) {
                    Err(e) => Some(format!("encode failed: {e}")),
                    Ok(enc) => match codec.decode(&enc.text.render()) {
                        Err(e) => Some(format!("decode failed: {e}")),
                        Ok(back) if back != *line => {
                            Some(format!("round trip changed the line to {back:?}"))
                        }
                        Ok(_) => None,
                    },
                })
                .collect()
        });
        for (i, r) in results.into_iter().enumerate() {
            lines += 1;
            if let Some(msg) = r {
                mismatches += 1;
                note(first + i, &msg);
            }
        }
    }
    let mut out = open_output(&io.output)?;
    writeln!(out, "{lines} lines, {mismatches} mismatches")
        .and_then(|_| out.flush())
        .map_err(write_err(&io.output))?;
    Ok(if mismatches == 0 { EXIT_OK } else { EXIT_DATA })
}
