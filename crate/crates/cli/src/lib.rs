//! Command-line driver. `run` is kept separate from `main` so the whole
//! front end can be exercised in-process.

use std::collections::BTreeSet;
use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use anyhow::{anyhow, Context, Result};
use clap::{CommandFactory, Parser, Subcommand};

use nametranslit::config::{parse_category_list, Config};
use nametranslit::decoder::{Decoder, EntityOutput, FallbackTable};
use nametranslit::evaluation::{per_category_report, read_eval_records, render_report, ReportFormat};
use nametranslit::knowledge_base::{
    estimate, load_kb, read_pair_corpus, read_word_pair_corpus, save_kb, IngestStats, PairCounts,
};
use nametranslit::ner_io::{fallback_tag, parse_conll, parse_inline, render_inline, EntityCategory};
use nametranslit::phonology::Phonology;
use nametranslit::pipeline::process_sentence;

#[derive(Debug, Parser)]
#[command(name = "nametranslit", version, about = "English to Hindi named-entity transliteration")]
struct Cli {
    /// Flat key=value configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the phoneme chunks and patterns of each word.
    Segment {
        #[arg(required = true)]
        words: Vec<String>,
    },
    /// Build a knowledge base from phoneme-pair and word-pair corpora.
    Train {
        #[arg(long = "pairs", num_args = 1..)]
        pairs: Vec<PathBuf>,
        #[arg(long = "word-pairs", num_args = 1..)]
        word_pairs: Vec<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Tag standard input with the heuristic tagger and print inline markup.
    Tag,
    /// Transliterate words or tagged sentences from standard input.
    Translit {
        #[arg(long)]
        kb: PathBuf,
        /// Comma-separated categories to leave untransliterated.
        #[arg(long)]
        skip: Option<String>,
        #[arg(long)]
        show_chunks: bool,
        /// Read two-column CoNLL from standard input instead of lines.
        #[arg(long)]
        conll: bool,
    },
    /// Score an evaluation file.
    Eval {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        format: Option<String>,
    },
}

/// Data errors (bad files, bad input) map to exit code 2.
struct DataError(anyhow::Error);

impl<E: Into<anyhow::Error>> From<E> for DataError {
    fn from(e: E) -> Self {
        DataError(e.into())
    }
}

pub fn run<I, S>(args: I, stdin: &mut dyn BufRead, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            if !e.use_stderr() {
                let _ = write!(stdout, "{}", e.render());
                return 0;
            }
            let _ = writeln!(stderr, "{}", e.render());
            let _ = write!(stderr, "{}", Cli::command().render_help());
            return 1;
        }
    };
    match dispatch(cli, stdin, stdout, stderr) {
        Ok(()) => 0,
        Err(DataError(e)) => {
            let _ = writeln!(stderr, "error: {e:#}");
            2
        }
    }
}

fn load_config(path: Option<&Path>) -> Result<Config> {
    match path {
        None => Ok(Config::default()),
        Some(p) => {
            let text = std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            Config::parse(&text).with_context(|| format!("in {}", p.display()))
        }
    }
}

fn open(path: &Path) -> Result<BufReader<File>> {
    let f = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    Ok(BufReader::new(f))
}

fn dispatch(cli: Cli, stdin: &mut dyn BufRead, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<(), DataError> {
    let config = load_config(cli.config.as_deref())?;
    let phonology = Phonology::with_digraphs(&config.digraphs)?;

    match cli.command {
        Command::Segment { words } => {
            for word in words {
                match phonology.segment_word(&word) {
                    Ok(seg) => {
                        let chunks: Vec<String> = seg.chunks.iter().map(|c| display_case(&word, c.index, &seg)).collect();
                        let patterns: Vec<&str> = seg.chunks.iter().map(|c| c.pattern.as_str()).collect();
                        writeln!(stdout, "{word}\t{}\t{}", chunks.join("|"), patterns.join("|"))?;
                    }
                    Err(e) => return Err(anyhow!(e).into()),
                }
            }
        }
        Command::Train { pairs, word_pairs, out } => {
            if pairs.is_empty() && word_pairs.is_empty() {
                return Err(anyhow!("train needs at least one --pairs or --word-pairs file").into());
            }
            let mut counts = PairCounts::new();
            let mut stats = IngestStats::default();
            let mut skipped = 0;
            for path in &pairs {
                read_pair_corpus(open(path)?, &mut counts, &mut stats)
                    .with_context(|| format!("reading {}", path.display()))?;
                skipped += report_skipped(path, &mut stats, stderr);
            }
            for path in &word_pairs {
                read_word_pair_corpus(open(path)?, &phonology, &mut counts, &mut stats)
                    .with_context(|| format!("reading {}", path.display()))?;
                skipped += report_skipped(path, &mut stats, stderr);
            }
            let mut kb = estimate(&counts)?;
            kb.metadata.source = pairs
                .iter()
                .chain(&word_pairs)
                .map(|p| p.display().to_string())
                .collect::<Vec<_>>()
                .join(", ");
            kb.metadata.created = std::time::SystemTime::now()
                .duration_since(std::time::UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0);
            let file = File::create(&out).with_context(|| format!("creating {}", out.display()))?;
            save_kb(&kb, std::io::BufWriter::new(file))?;
            writeln!(stdout, "pairs_read\t{}", stats.read)?;
            writeln!(stdout, "lines_skipped\t{skipped}")?;
            writeln!(stdout, "unalignable\t{}", stats.unalignable)?;
            writeln!(stdout, "phonemes\t{}", kb.phonemes().count())?;
            writeln!(stdout, "entries\t{}", kb.len())?;
        }
        Command::Tag => {
            for (id, line) in stdin.lines().enumerate() {
                let line = line?;
                writeln!(stdout, "{}", render_inline(&fallback_tag(&line, id)))?;
            }
        }
        Command::Translit { kb, skip, show_chunks, conll } => {
            let kb = load_kb(open(&kb)?).with_context(|| format!("loading {}", kb.display()))?;
            let skip: BTreeSet<EntityCategory> = match skip {
                Some(list) => parse_category_list(&list).map_err(|e| anyhow!(e))?,
                None => config.skip.clone(),
            };
            let mut fallback = FallbackTable::default();
            if let Some(path) = &config.fallback_table {
                fallback = fallback.with_overrides(open(path)?)?;
            }
            let decoder = Decoder::new(&kb).with_phonology(phonology).with_fallback(fallback).with_skip(skip);

            if conll {
                let sentences = parse_conll(stdin)?;
                for s in &sentences {
                    for row in process_sentence(s, &decoder) {
                        writeln!(stdout, "{}", row.to_tsv(show_chunks))?;
                    }
                }
            } else {
                for (id, line) in stdin.lines().enumerate() {
                    let line = line?;
                    if line.trim().is_empty() {
                        continue;
                    }
                    if looks_tagged(&line) {
                        let s = parse_inline(&line, id).with_context(|| format!("input line {}", id + 1))?;
                        for row in process_sentence(&s, &decoder) {
                            writeln!(stdout, "{}", row.to_tsv(show_chunks))?;
                        }
                    } else {
                        let input = line.trim();
                        match decoder.transliterate_text(input)? {
                            EntityOutput::Text { hindi, confidence, words, .. } => {
                                write!(stdout, "{input}\t{hindi}\t{confidence:.4}")?;
                                if show_chunks {
                                    let trace: Vec<String> = words.iter().map(|w| w.chunk_trace()).collect();
                                    write!(stdout, "\t{}", trace.join(" "))?;
                                }
                                writeln!(stdout)?;
                            }
                            EntityOutput::NoOutput => writeln!(stdout, "{input}\t-\t-")?,
                        }
                    }
                }
            }
        }
        Command::Eval { input, format } => {
            let format: ReportFormat = match format {
                Some(f) => f.parse().map_err(|e: String| anyhow!(e))?,
                None => config.format,
            };
            let records = read_eval_records(open(&input)?).with_context(|| format!("reading {}", input.display()))?;
            let report = per_category_report(&records)?;
            write!(stdout, "{}", render_report(&report, format))?;
        }
    }
    stdout.flush()?;
    Ok(())
}

/// True when some token carries a `/Category` suffix with a known category.
fn looks_tagged(line: &str) -> bool {
    line.split_whitespace().any(|tok| {
        tok.rsplit_once('/').is_some_and(|(word, tag)| {
            !word.is_empty() && tag.trim_end_matches(['.', ',', ';', ':', '!', '?']).parse::<EntityCategory>().is_ok()
        })
    })
}

/// Chunk surface with the casing of the original word restored.
fn display_case(word: &str, index: usize, seg: &nametranslit::SegmentedWord) -> String {
    let letters: Vec<char> = word.chars().filter(char::is_ascii_alphabetic).collect();
    let start: usize = seg.chunks[..index].iter().map(|c| c.surface.len()).sum();
    let len = seg.chunks[index].surface.len();
    letters[start..start + len].iter().collect()
}

/// Prints and clears the skipped lines collected for `path`.
fn report_skipped(path: &Path, stats: &mut IngestStats, stderr: &mut dyn Write) -> usize {
    let n = stats.skipped.len();
    for s in stats.skipped.drain(..) {
        let _ = writeln!(stderr, "{}:{}: skipped: {}", path.display(), s.line, s.reason);
    }
    n
}
