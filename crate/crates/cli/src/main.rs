use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use drift_cli::pipeline::RunOutput;
use drift_cli::{
    analyze_corpus, build_metrics, read_corpus, read_jsonl, read_labels, rewrite_corpus, select_rules, write_json,
    write_jsonl, DriftSummary, ErrorRecord, HarnessError,
};
use drift_core::bpe::{load_tokenizer, vocab_distance};
use drift_core::lexer::ImmutableTypes;
use drift_core::metrics::{fraction_to_f64, frequency_ratio, Fraction};
use drift_core::rewrite::{RewriteRule, RuleCatalog};

#[derive(Parser)]
#[command(name = "drift", version, about = "Rewrite code, measure subword tokenization drift, compute robustness metrics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Apply rewrite rules to every sample and write rewrites.jsonl.
    Rewrite(RunArgs),
    /// Rewrite, tokenize and classify boundary drift; writes drift.jsonl.
    Analyze(RunArgs),
    /// Compute accuracy, delta-accuracy and sensitivity from labels.
    Metrics(MetricsArgs),
    /// Distance between the vocabularies of two tokenizers.
    Vocab(VocabArgs),
    /// Frequency of each rule's left- and right-hand forms in a corpus.
    Freq(FreqArgs),
}

#[derive(Args)]
struct RuleArgs {
    /// Rule ids, comma-separated, or `all`.
    #[arg(long, default_value = "all")]
    rules: String,
    /// Rule catalog TOML replacing the built-in one.
    #[arg(long)]
    catalog: Option<PathBuf>,
}

impl RuleArgs {
    fn load(&self) -> Result<Vec<RewriteRule>, HarnessError> {
        let catalog = match &self.catalog {
            Some(p) => RuleCatalog::from_toml(&read_text(p)?)?,
            None => RuleCatalog::default(),
        };
        select_rules(&catalog, &self.rules)
    }
}

#[derive(Args)]
struct RunArgs {
    /// A .jsonl corpus or a directory of .java/.py files.
    #[arg(long)]
    corpus: PathBuf,
    #[command(flatten)]
    rules: RuleArgs,
    /// Tokenizer file or vocab/merges directory (required by `analyze`).
    #[arg(long)]
    tokenizer: Option<PathBuf>,
    /// Immutable-context TOML replacing the built-in one.
    #[arg(long)]
    immutable: Option<PathBuf>,
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    /// Recorded in run.json for downstream randomized tooling.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct MetricsArgs {
    /// Label file (JSON Lines).
    #[arg(long)]
    labels: PathBuf,
    /// Output directory; drift.jsonl is read from here unless --drift is given.
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    drift: Option<PathBuf>,
    /// Wilcoxon comparison between two models, as `a:b`. Repeatable.
    #[arg(long, value_parser = parse_pair)]
    compare: Vec<(String, String)>,
}

#[derive(Args)]
struct VocabArgs {
    /// Exactly two tokenizers.
    #[arg(long, num_args = 1, required = true)]
    tokenizer: Vec<PathBuf>,
}

#[derive(Args)]
struct FreqArgs {
    #[arg(long)]
    corpus: PathBuf,
    #[command(flatten)]
    rules: RuleArgs,
    /// Directory for freq.jsonl; the table always goes to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_pair(s: &str) -> Result<(String, String), String> {
    match s.split_once(':') {
        Some((a, b)) if !a.is_empty() && !b.is_empty() => Ok((a.to_owned(), b.to_owned())),
        _ => Err(format!("expected `a:b`, got `{s}`")),
    }
}

fn read_text(p: &Path) -> Result<String, HarnessError> {
    std::fs::read_to_string(p).map_err(|e| HarnessError::Io {
        path: p.to_path_buf(),
        message: e.to_string(),
    })
}

fn prepare_out(out: &Path) -> Result<(), HarnessError> {
    std::fs::create_dir_all(out).map_err(|e| HarnessError::Io {
        path: out.to_path_buf(),
        message: e.to_string(),
    })
}

#[derive(Serialize)]
struct RunManifest<'a> {
    command: &'a str,
    corpus: String,
    tokenizer: Option<String>,
    rules: Vec<String>,
    seed: u64,
    samples: usize,
    records: usize,
    errors: usize,
}

/// Outcome of a batch command: the number of hard failures.
type Failures = usize;

fn finish<T: Serialize>(
    args: &RunArgs,
    command: &str,
    file: &str,
    rules: &[RewriteRule],
    samples: usize,
    run: RunOutput<T>,
) -> Result<Failures, HarnessError> {
    write_jsonl(&args.out.join(file), &run.records)?;
    write_jsonl::<ErrorRecord>(&args.out.join("errors.jsonl"), &run.errors)?;
    write_json(
        &args.out.join("run.json"),
        &RunManifest {
            command,
            corpus: args.corpus.display().to_string(),
            tokenizer: args.tokenizer.as_ref().map(|p| p.display().to_string()),
            rules: rules.iter().map(|r| r.id.to_string()).collect(),
            seed: args.seed,
            samples,
            records: run.records.len(),
            errors: run.errors.len(),
        },
    )?;
    eprintln!(
        "{command}: {samples} samples, {} records, {} errors -> {}",
        run.records.len(),
        run.errors.len(),
        args.out.display()
    );
    Ok(run.errors.len())
}

fn immutable(args: &RunArgs) -> Result<ImmutableTypes, HarnessError> {
    Ok(match &args.immutable {
        Some(p) => ImmutableTypes::from_toml(&read_text(p)?)?,
        None => ImmutableTypes::default(),
    })
}

fn run(cli: Cli) -> Result<Failures, HarnessError> {
    match cli.command {
        Command::Rewrite(args) => {
            let rules = args.rules.load()?;
            let samples = read_corpus(&args.corpus)?;
            let imm = immutable(&args)?;
            prepare_out(&args.out)?;
            let out = rewrite_corpus(&samples, &rules, &imm, args.workers);
            finish(&args, "rewrite", "rewrites.jsonl", &rules, samples.len(), out)
        }
        Command::Analyze(args) => {
            let rules = args.rules.load()?;
            let path = args
                .tokenizer
                .as_ref()
                .ok_or_else(|| HarnessError::Usage("analyze needs --tokenizer".into()))?;
            let spec = load_tokenizer(path)?;
            let samples = read_corpus(&args.corpus)?;
            let imm = immutable(&args)?;
            prepare_out(&args.out)?;
            let out = analyze_corpus(&samples, &rules, &spec, &imm, args.workers);
            finish(&args, "analyze", "drift.jsonl", &rules, samples.len(), out)
        }
        Command::Metrics(args) => {
            let drift_path = args.drift.clone().unwrap_or_else(|| args.out.join("drift.jsonl"));
            let drift: Vec<DriftSummary> = read_jsonl(&drift_path)?;
            let labels = read_labels(&args.labels)?;
            let report = build_metrics(&drift, &labels, &args.compare)?;
            prepare_out(&args.out)?;
            write_json(&args.out.join("metrics.json"), &report)?;
            for (model, subsets) in &report.models {
                for (subset, r) in subsets {
                    let sens = |s: Option<Fraction>| s.map_or("undefined".to_string(), |f| format!("{:.4}", fraction_to_f64(f)));
                    println!(
                        "{model} {subset}: baseline accuracy {:.4}, mean sensitivity {}, weighted {}",
                        fraction_to_f64(r.baseline_accuracy),
                        sens(r.mean_sensitivity),
                        sens(r.weighted_sensitivity)
                    );
                }
            }
            for c in &report.comparisons {
                println!("{} vs {} [{}]: n={} p={:.4}", c.a, c.b, c.group, c.rules, c.p_value);
            }
            Ok(0)
        }
        Command::Vocab(args) => {
            let [a, b] = args.tokenizer.as_slice() else {
                return Err(HarnessError::Usage("vocab needs exactly two --tokenizer paths".into()));
            };
            let (sa, sb) = (load_tokenizer(a)?, load_tokenizer(b)?);
            let d = vocab_distance(&sa, &sb);
            let out = serde_json::json!({
                "distance": d,
                "shared": 1.0 - d,
                "vocab_a": sa.vocab_size(),
                "vocab_b": sb.vocab_size(),
            });
            println!("{out}");
            Ok(0)
        }
        Command::Freq(args) => {
            let rules = args.rules.load()?;
            let corpus: Vec<_> = read_corpus(&args.corpus)?.iter().map(|s| s.as_corpus_file()).collect();
            let mut rows = Vec::new();
            for rule in &rules {
                let c = frequency_ratio(&corpus, rule).map_err(|e| HarnessError::Record {
                    path: args.corpus.clone(),
                    line: 0,
                    message: e.to_string(),
                })?;
                let ratio = c.ratio_percent.map_or("undefined".into(), |r| format!("{r:.2}%"));
                println!("{:<4} {:>8} {:>8} {:>10}", c.rule.to_string(), c.lhs, c.rhs, ratio);
                rows.push(c);
            }
            if let Some(out) = &args.out {
                prepare_out(out)?;
                write_jsonl(&out.join("freq.jsonl"), &rows)?;
            }
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(0) => ExitCode::SUCCESS,
        Ok(_) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
