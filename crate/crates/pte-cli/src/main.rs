//! Command-line front end for the equal-power-sum word toolkit.
//!
//! Each run prints plain text by default, or exactly one JSON object with
//! `--format json`. Exit codes: 0 on success, 1 when a check or
//! construction fails on valid input, 2 for unusable input.

mod selftest;

use std::io::Read;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use pte::{
    apply_latin, construct_three_letter, construct_two_letter, first_pte, k_split, prouhet_word,
    reduce_by_swaps, search_singular, shuffle, thue_morse, verify_pouring, Density, Error,
    LatinSquare, PouringReport, Result, SearchSpec, SplitSpec, Word, WordReport,
};

const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Parser)]
#[command(
    name = "pte",
    version,
    about = "Equal-power-sum words: check, count, build, transform, pour"
)]
struct Cli {
    /// Output format; json prints exactly one object per run.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Worker threads for enumeration.
    #[arg(long, global = true, env = "PTE_JOBS", default_value_t = 1)]
    jobs: usize,

    /// Extra detail in text output.
    #[arg(short, long, global = true)]
    verbose: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Report length, alphabet, blocks, and largest regularity of words.
    Check(CheckArgs),
    /// List, count, or find the first regular word of a given shape.
    Enumerate(EnumerateArgs),
    /// Construct a word from one of the built-in families.
    #[command(subcommand)]
    Build(BuildCommand),
    /// Validate a Latin square, encode it, take its determinant, or hunt
    /// for singular ones.
    Latin(LatinArgs),
    /// Expand a word through a Latin square, one chunk per letter.
    Expand(ExpandArgs),
    /// Walk a 1-regular two-letter word down to canonical form by swaps.
    Reduce(ReduceArgs),
    /// Interleave equal-length words letter by letter.
    Shuffle(ShuffleArgs),
    /// Cut a word into pieces that must each clear a regularity bar.
    Split(SplitArgs),
    /// Pour a density into cups along a word and certify the disparity.
    Pour(PourArgs),
    /// Run the embedded fixture suite.
    Selftest(SelftestArgs),
}

#[derive(Args)]
struct CheckArgs {
    /// Words to check.
    words: Vec<String>,

    /// Read more words from standard input, one per line.
    #[arg(long)]
    stdin: bool,
}

#[derive(Args)]
struct EnumerateArgs {
    /// Word length.
    m: usize,

    /// Alphabet size.
    b: usize,

    /// Regularity; -1 admits every word.
    #[arg(allow_negative_numbers = true)]
    r: i32,

    /// Print every word (the default).
    #[arg(long, group = "mode")]
    list: bool,

    /// Print only how many words exist.
    #[arg(long, group = "mode")]
    count: bool,

    /// Stop at the first word in dictionary order.
    #[arg(long, group = "mode")]
    first: bool,

    /// Work over all letterings, not one representative per renaming.
    #[arg(long)]
    all_labelings: bool,
}

#[derive(Subcommand)]
enum BuildCommand {
    /// Thue-Morse prefix of the given length.
    Tm {
        length: usize,
    },
    /// Iterated cyclic expansion of a single letter.
    Prouhet {
        alphabet: usize,
        level: u32,
    },
    /// Two-letter word of the given length and regularity.
    TwoLetter {
        length: usize,
        #[arg(allow_negative_numbers = true)]
        regularity: i32,
    },
    /// Three-letter word of the given length and regularity.
    ThreeLetter {
        length: usize,
        #[arg(allow_negative_numbers = true)]
        regularity: i32,
    },
}

#[derive(Args)]
#[command(group(clap::ArgGroup::new("op").required(true)))]
struct LatinArgs {
    /// Square file, one letter row per line; pass - for standard input.
    square: Option<String>,

    /// Validate the square and report its shape.
    #[arg(long, group = "op")]
    check: bool,

    /// Print the column-position encoding of the square.
    #[arg(long, group = "op")]
    encoding: bool,

    /// Print the exact determinant of the numeric table.
    #[arg(long, group = "op")]
    det: bool,

    /// Randomly search for squares of this size with determinant zero.
    #[arg(long, value_name = "N", group = "op")]
    search_singular: Option<usize>,

    /// How many random squares the search may try.
    #[arg(long, default_value_t = 100_000)]
    budget: usize,

    /// Seed for the search.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct ExpandArgs {
    /// Word to expand; it is lifted into the square's alphabet.
    word: String,

    /// Square file, one letter row per line; pass - for standard input.
    #[arg(long = "latin", value_name = "FILE")]
    square: String,
}

#[derive(Args)]
struct ReduceArgs {
    /// A 1-regular two-letter word.
    word: String,
}

#[derive(Args)]
struct ShuffleArgs {
    /// Words to interleave; all are lifted to the widest alphabet.
    #[arg(required = true)]
    words: Vec<String>,
}

#[derive(Args)]
struct SplitArgs {
    /// Word to cut.
    word: String,

    /// Cut positions: a cut at c separates positions c and c+1.
    #[arg(long = "at", value_delimiter = ',', required = true)]
    cuts: Vec<usize>,

    /// Regularity every piece must reach.
    #[arg(short = 'k', long, allow_negative_numbers = true)]
    regularity: i32,
}

#[derive(Args)]
struct PourArgs {
    /// Pouring order.
    #[arg(long)]
    word: String,

    /// poly:c0,c1,... or exp:RATE or file:PATH with one x,f(x) pair per line.
    #[arg(long)]
    density: String,

    /// Supremum of the relevant derivative on [0, 1]; overrides the
    /// density's own bound and is required for sampled data.
    #[arg(long = "deriv-bound")]
    derivative_bound: Option<f64>,
}

#[derive(Args)]
struct SelftestArgs {
    /// Run only fixtures whose name contains this substring.
    filter: Option<String>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(match err {
                Error::Parse(_) => 2,
                _ => 1,
            })
        }
    }
}

fn run(cli: Cli) -> Result<bool> {
    if cli.jobs == 0 {
        return Err(Error::Parse("jobs must be at least 1".into()));
    }
    let out = Output {
        format: cli.format,
        verbose: cli.verbose,
    };
    match cli.command {
        Command::Check(args) => cmd_check(&out, args)?,
        Command::Enumerate(args) => cmd_enumerate(&out, cli.jobs, &args)?,
        Command::Build(cmd) => cmd_build(&out, &cmd)?,
        Command::Latin(args) => cmd_latin(&out, &args)?,
        Command::Expand(args) => cmd_expand(&out, &args)?,
        Command::Reduce(args) => cmd_reduce(&out, &args)?,
        Command::Shuffle(args) => cmd_shuffle(&out, &args)?,
        Command::Split(args) => cmd_split(&out, &args)?,
        Command::Pour(args) => cmd_pour(&out, &args)?,
        Command::Selftest(args) => return cmd_selftest(&out, &args),
    }
    Ok(true)
}

struct Output {
    format: Format,
    verbose: bool,
}

impl Output {
    fn emit<T: Serialize>(&self, json: &T, text: &str) -> Result<()> {
        match self.format {
            Format::Json => {
                let body = serde_json::to_string(json).expect("report serializes");
                print_line(&body);
            }
            Format::Text => {
                if !text.is_empty() {
                    print_line(text);
                }
            }
        }
        Ok(())
    }
}

// a closed pipe downstream is not an error worth reporting
fn print_line(text: &str) {
    use std::io::Write;
    let mut stdout = std::io::stdout().lock();
    if let Err(err) = writeln!(stdout, "{text}") {
        if err.kind() == std::io::ErrorKind::BrokenPipe {
            std::process::exit(0);
        }
        eprintln!("error: stdout: {err}");
        std::process::exit(1);
    }
}

fn letter(index: usize) -> char {
    (b'A' + index as u8) as char
}

fn render_report(report: &WordReport, verbose: bool) -> String {
    let mut text = format!(
        "{}: length {}, alphabet {}, max regularity {}",
        report.word, report.length, report.alphabet_size, report.max_regularity
    );
    if verbose {
        for (index, block) in report.blocks.iter().enumerate() {
            let cells = block
                .iter()
                .map(usize::to_string)
                .collect::<Vec<_>>()
                .join(" ");
            text.push_str(&format!("\n  {}: {cells}", letter(index)));
        }
    }
    text
}

#[derive(Serialize)]
struct WordOut {
    version: &'static str,
    #[serde(flatten)]
    report: WordReport,
}

fn emit_word(out: &Output, word: &Word) -> Result<()> {
    let report = word.report()?;
    let text = if out.verbose {
        render_report(&report, true)
    } else {
        report.word.clone()
    };
    out.emit(
        &WordOut {
            version: VERSION,
            report,
        },
        &text,
    )
}

#[derive(Serialize)]
struct CheckOneOut {
    version: &'static str,
    #[serde(flatten)]
    report: WordReport,
}

#[derive(Serialize)]
struct CheckManyOut {
    version: &'static str,
    reports: Vec<WordReport>,
}

fn cmd_check(out: &Output, args: CheckArgs) -> Result<()> {
    let mut inputs = args.words;
    if args.stdin {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| Error::Parse(format!("stdin: {e}")))?;
        inputs.extend(
            buf.lines()
                .map(str::trim)
                .filter(|line| !line.is_empty())
                .map(String::from),
        );
    }
    if inputs.is_empty() {
        return Err(Error::Parse("nothing to check: pass words or --stdin".into()));
    }
    let mut reports = Vec::with_capacity(inputs.len());
    for text in &inputs {
        if text.trim().is_empty() {
            return Err(Error::Parse("empty word".into()));
        }
        reports.push(Word::parse(text, None)?.report()?);
    }
    let text = reports
        .iter()
        .map(|report| render_report(report, out.verbose))
        .collect::<Vec<_>>()
        .join("\n");
    if reports.len() == 1 {
        let report = reports.remove(0);
        out.emit(
            &CheckOneOut {
                version: VERSION,
                report,
            },
            &text,
        )
    } else {
        out.emit(
            &CheckManyOut {
                version: VERSION,
                reports,
            },
            &text,
        )
    }
}

#[derive(Serialize)]
struct EnumerationOut {
    version: &'static str,
    #[serde(flatten)]
    report: pte::EnumerationReport,
}

#[derive(Serialize)]
struct FirstOut {
    version: &'static str,
    m: usize,
    b: usize,
    r: i32,
    word: Option<String>,
}

fn cmd_enumerate(out: &Output, jobs: usize, args: &EnumerateArgs) -> Result<()> {
    let mut spec = SearchSpec::new(args.m, args.b, args.r)?.with_jobs(jobs)?;
    if args.all_labelings {
        spec = spec.all_labelings();
    }
    if args.first {
        let word = first_pte(&spec)?.map(|w| w.to_string());
        let text = word.clone().unwrap_or_default();
        return out.emit(
            &FirstOut {
                version: VERSION,
                m: args.m,
                b: args.b,
                r: args.r,
                word,
            },
            &text,
        );
    }
    let report = pte::enumeration::report(&spec, !args.count)?;
    let text = if args.count {
        if args.all_labelings {
            report.total_count.to_string()
        } else {
            report.canonical_count.to_string()
        }
    } else {
        report.words.clone().unwrap_or_default().join("\n")
    };
    out.emit(
        &EnumerationOut {
            version: VERSION,
            report,
        },
        &text,
    )
}

fn cmd_build(out: &Output, cmd: &BuildCommand) -> Result<()> {
    let word = match cmd {
        BuildCommand::Tm { length } => thue_morse(*length)?,
        BuildCommand::Prouhet { alphabet, level } => prouhet_word(*alphabet, *level)?,
        BuildCommand::TwoLetter { length, regularity } => {
            construct_two_letter(*length, *regularity)?
        }
        BuildCommand::ThreeLetter { length, regularity } => {
            construct_three_letter(*length, *regularity)?
        }
    };
    emit_word(out, &word)
}

fn read_square(path: &str) -> Result<LatinSquare> {
    let text = if path == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| Error::Parse(format!("stdin: {e}")))?;
        buf
    } else {
        std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{path}: {e}")))?
    };
    LatinSquare::parse(&text)
}

#[derive(Serialize)]
struct SquareCheckOut {
    version: &'static str,
    size: usize,
    rows: Vec<Vec<usize>>,
    normalized: bool,
}

#[derive(Serialize)]
struct EncodingOut {
    version: &'static str,
    size: usize,
    rows: Vec<Vec<usize>>,
}

#[derive(Serialize)]
struct DetOut {
    version: &'static str,
    size: usize,
    det: String,
}

#[derive(Serialize)]
struct SearchSingularOut {
    version: &'static str,
    size: usize,
    budget: usize,
    seed: u64,
    count: usize,
    squares: Vec<Vec<String>>,
}

fn cmd_latin(out: &Output, args: &LatinArgs) -> Result<()> {
    if let Some(size) = args.search_singular {
        let squares = search_singular(size, args.budget, args.seed)?;
        let rows: Vec<Vec<String>> = squares
            .iter()
            .map(|square| square.to_string().lines().map(String::from).collect())
            .collect();
        let mut text = String::new();
        for square in &squares {
            text.push_str(&square.to_string());
            text.push_str("\n\n");
        }
        text.push_str(&format!(
            "found {} singular in {} tries",
            squares.len(),
            args.budget
        ));
        return out.emit(
            &SearchSingularOut {
                version: VERSION,
                size,
                budget: args.budget,
                seed: args.seed,
                count: squares.len(),
                squares: rows,
            },
            &text,
        );
    }
    let path = args
        .square
        .as_deref()
        .ok_or_else(|| Error::Parse("square file required".into()))?;
    let square = read_square(path)?;
    if args.encoding {
        let encoding = square.encode();
        let report = encoding.report();
        out.emit(
            &EncodingOut {
                version: VERSION,
                size: report.size,
                rows: report.rows,
            },
            &encoding.to_string(),
        )
    } else if args.det {
        let det = square.numeric_matrix().det().to_string();
        out.emit(
            &DetOut {
                version: VERSION,
                size: square.size(),
                det: det.clone(),
            },
            &det,
        )
    } else {
        let report = square.report();
        let normalized = square.is_normalized();
        let text = format!(
            "valid latin square, size {}{}",
            report.size,
            if normalized { ", normalized" } else { "" }
        );
        out.emit(
            &SquareCheckOut {
                version: VERSION,
                size: report.size,
                rows: report.rows,
                normalized,
            },
            &text,
        )
    }
}

fn cmd_expand(out: &Output, args: &ExpandArgs) -> Result<()> {
    let square = read_square(&args.square)?;
    if !square.is_normalized() {
        eprintln!("warning: square is not normalized; rows are reordered before expansion");
    }
    let word = Word::parse(&args.word, Some(square.size()))?;
    emit_word(out, &apply_latin(&square, &word)?)
}

#[derive(Serialize)]
struct StepOut {
    descent: usize,
    ascent: usize,
    word: String,
}

#[derive(Serialize)]
struct ReduceOut {
    version: &'static str,
    start: String,
    steps: Vec<StepOut>,
    result: String,
}

fn cmd_reduce(out: &Output, args: &ReduceArgs) -> Result<()> {
    let word = Word::parse(&args.word, None)?;
    let steps = reduce_by_swaps(&word)?;
    let result = steps
        .last()
        .map_or_else(|| word.to_string(), |step| step.word.to_string());
    // positions are 1-based on the way out, matching block reports
    let steps: Vec<StepOut> = steps
        .iter()
        .map(|step| StepOut {
            descent: step.descent + 1,
            ascent: step.ascent + 1,
            word: step.word.to_string(),
        })
        .collect();
    let mut lines: Vec<String> = steps
        .iter()
        .map(|step| format!("swap {} with {} -> {}", step.descent, step.ascent, step.word))
        .collect();
    lines.push(format!("result {result}"));
    out.emit(
        &ReduceOut {
            version: VERSION,
            start: word.to_string(),
            steps,
            result,
        },
        &lines.join("\n"),
    )
}

fn cmd_shuffle(out: &Output, args: &ShuffleArgs) -> Result<()> {
    let mut alphabet = 0;
    for text in &args.words {
        alphabet = alphabet.max(Word::parse(text, None)?.alphabet_size());
    }
    let words = args
        .words
        .iter()
        .map(|text| Word::parse(text, Some(alphabet)))
        .collect::<Result<Vec<_>>>()?;
    emit_word(out, &shuffle(&words)?)
}

#[derive(Serialize)]
struct SplitOut {
    version: &'static str,
    word: String,
    cuts: Vec<usize>,
    regularity: i32,
    pieces: Vec<String>,
}

fn cmd_split(out: &Output, args: &SplitArgs) -> Result<()> {
    let word = Word::parse(&args.word, None)?;
    let spec = SplitSpec {
        word: word.clone(),
        cuts: args.cuts.clone(),
    };
    let pieces: Vec<String> = k_split(&spec, args.regularity)?
        .iter()
        .map(|piece| piece.to_string())
        .collect();
    out.emit(
        &SplitOut {
            version: VERSION,
            word: word.to_string(),
            cuts: args.cuts.clone(),
            regularity: args.regularity,
            pieces: pieces.clone(),
        },
        &pieces.join("\n"),
    )
}

#[derive(Serialize)]
struct PourOut {
    version: &'static str,
    word: String,
    #[serde(flatten)]
    report: PouringReport,
}

fn parse_density(text: &str) -> Result<Density> {
    if let Some(path) = text.strip_prefix("file:") {
        let body =
            std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{path}: {e}")))?;
        let mut points = Vec::new();
        for (index, line) in body.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (x, f) = line
                .split_once(',')
                .ok_or_else(|| Error::Parse(format!("line {}: expected x,f", index + 1)))?;
            let x: f64 = x
                .trim()
                .parse()
                .map_err(|e| Error::Parse(format!("line {}: {e}", index + 1)))?;
            let f: f64 = f
                .trim()
                .parse()
                .map_err(|e| Error::Parse(format!("line {}: {e}", index + 1)))?;
            points.push((x, f));
        }
        return Density::sampled(points);
    }
    Density::parse(text)
}

fn cmd_pour(out: &Output, args: &PourArgs) -> Result<()> {
    let word = Word::parse(&args.word, None)?;
    let density = parse_density(&args.density)?;
    let report = verify_pouring(&density, &word, args.derivative_bound)?;
    let mut lines: Vec<String> = report
        .cup_amounts
        .iter()
        .enumerate()
        .map(|(index, amount)| format!("cup {}: {:.12}", letter(index), amount))
        .collect();
    lines.push(format!("disparity {:.6e}", report.disparity));
    match report.bound {
        Some(bound) => lines.push(format!("bound {:.6e}", bound)),
        None => lines.push("bound none".into()),
    }
    lines.push(format!("switches {}", report.switches));
    out.emit(
        &PourOut {
            version: VERSION,
            word: word.to_string(),
            report,
        },
        &lines.join("\n"),
    )
}

#[derive(Serialize)]
struct FixtureOut {
    name: &'static str,
    passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    detail: Option<String>,
}

#[derive(Serialize)]
struct SelftestOut {
    version: &'static str,
    passed: usize,
    failed: usize,
    results: Vec<FixtureOut>,
}

fn cmd_selftest(out: &Output, args: &SelftestArgs) -> Result<bool> {
    let mut results = Vec::new();
    for fixture in selftest::fixtures() {
        if let Some(filter) = &args.filter {
            if !fixture.name.contains(filter.as_str()) {
                continue;
            }
        }
        let outcome = (fixture.run)();
        if out.format == Format::Text {
            match &outcome {
                Ok(()) => print_line(&format!("PASS {}", fixture.name)),
                Err(detail) => print_line(&format!("FAIL {}: {detail}", fixture.name)),
            }
        }
        results.push(FixtureOut {
            name: fixture.name,
            passed: outcome.is_ok(),
            detail: outcome.err(),
        });
    }
    let passed = results.iter().filter(|r| r.passed).count();
    let failed = results.len() - passed;
    match out.format {
        Format::Text => print_line(&format!("{passed} passed, {failed} failed")),
        Format::Json => out.emit(
            &SelftestOut {
                version: VERSION,
                passed,
                failed,
                results,
            },
            "",
        )?,
    }
    Ok(failed == 0)
}
