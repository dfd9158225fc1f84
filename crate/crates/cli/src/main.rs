use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use geometria::corpus::CorpusFormat;
use geometria::experiments::{Pipeline, RunConfig};
use geometria::lda::{train_lda, training_digest};
use geometria::relations::Structure;
use geometria::structcmp::StructuralMeasure;
use geometria::Error;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "geometria", version, about = "Structures of topic models and structures of those structures")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Run configuration (TOML). Defaults apply when absent.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Master seed, overriding `run.seed`.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory, overriding `run.out`.
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Preprocess the corpus and write its document-term matrix.
    Ingest {
        /// Corpus path, overriding `[corpus]`.
        #[arg(long, value_name = "PATH", requires = "format")]
        input: Option<PathBuf>,
        /// Corpus layout: lines, csv or dir.
        #[arg(long)]
        format: Option<CorpusFormat>,
    },
    /// Train every model of the ensemble (cached by training hash).
    Train,
    /// Build the structure of every ensemble model (cached by digest).
    Structure,
    /// Compare two structure files.
    Compare {
        #[arg(long, value_name = "FILE")]
        a: PathBuf,
        #[arg(long, value_name = "FILE")]
        b: PathBuf,
        /// Structural measure: procrustes, pearson, spearman, pearson-full, spearman-full.
        #[arg(long, default_value = "procrustes")]
        delta: StructuralMeasure,
    },
    /// Seed stability per k against random and null references.
    Stability {
        /// Restrict to these k (repeatable).
        #[arg(long)]
        k: Vec<usize>,
        /// Number of random reference structures, overriding `measures.n_random`.
        #[arg(long)]
        n_random: Option<usize>,
    },
    /// Mean structural distance between model groups of every pair of k.
    Ksweep,
    /// Agreement between two structural measures over all model pairs.
    Deltacmp {
        #[arg(long, default_value = "procrustes")]
        a: StructuralMeasure,
        #[arg(long, default_value = "pearson")]
        b: StructuralMeasure,
    },
    /// Regenerate every table and plot from stored artifacts only.
    Report,
}

fn config(common: &Common) -> Result<RunConfig, Error> {
    let mut cfg = match &common.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    if let Some(s) = common.seed {
        cfg.run.seed = s;
    }
    if let Some(out) = &common.out {
        cfg.run.out = absolute(out);
    }
    cfg.validate()?;
    Ok(cfg)
}

fn absolute(p: &Path) -> PathBuf {
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        std::env::current_dir().unwrap_or_default().join(p)
    }
}

fn paths(files: &[PathBuf]) -> Vec<String> {
    files.iter().map(|p| p.display().to_string()).collect()
}

fn run(cli: Cli) -> Result<Value, Error> {
    let mut cfg = config(&cli.common)?;
    match cli.command {
        Command::Ingest { input, format } => {
            if let (Some(path), Some(format)) = (input, format) {
                cfg.corpus = Some(geometria::experiments::CorpusSection {
                    path: absolute(&path),
                    format,
                });
                cfg.synth = None;
            }
            let p = Pipeline::new(cfg)?;
            let (dtm, report) = p.corpus()?;
            let path = p.out_dir().join(format!("dtm_{}.triplets", dtm.digest().short()));
            dtm.save(&path)?;
            Ok(json!({
                "dtm": path.display().to_string(),
                "digest": dtm.digest(),
                "documents": dtm.m(),
                "vocabulary": dtm.n(),
                "tokens": dtm.total(),
                "report": report,
            }))
        }
        Command::Train => {
            let p = Pipeline::new(cfg)?;
            let (dtm, _) = p.corpus()?;
            let spec = p.config().ensemble_spec();
            let corpus = dtm.digest();
            let mut models = Vec::new();
            for (k, seed) in spec.members()? {
                let lda = spec.lda.config(k, seed);
                let hash = training_digest(&corpus, &lda);
                let cached = p.store().has_model(&hash);
                if !cached {
                    p.store().save_model(&train_lda(&dtm, &lda)?)?;
                }
                models.push(json!({
                    "k": k,
                    "seed": seed,
                    "model": p.store().model_path(&hash).display().to_string(),
                    "status": if cached { "cached" } else { "trained" },
                }));
            }
            Ok(json!({ "models": models }))
        }
        Command::Structure => {
            let p = Pipeline::new(cfg)?;
            let (ens, _) = p.prepare::<f64>()?;
            let structures: Vec<Value> = ens
                .members
                .iter()
                .map(|m| {
                    json!({
                        "k": m.k,
                        "seed": m.seed,
                        "structure": p.store().structure_path(m.structure.phi_digest()).display().to_string(),
                    })
                })
                .collect();
            Ok(json!({
                "status": if ens.built == 0 { "cached" } else { "built" },
                "built": ens.built,
                "cached": ens.cached,
                "structures": structures,
            }))
        }
        Command::Compare { a, b, delta } => {
            let sa = Structure::<f64>::load(&a)?;
            let sb = Structure::<f64>::load(&b)?;
            if sa.symbol_ids() != sb.symbol_ids() {
                return Err(Error::SymbolMismatch);
            }
            let value = delta.compare(sa.matrix(), sb.matrix())?;
            Ok(json!({ "delta": delta.id(), "value": value }))
        }
        Command::Stability { k, n_random } => {
            if let Some(n) = n_random {
                cfg.measures.n_random = n;
            }
            let p = Pipeline::new(cfg)?;
            let (ens, base) = p.prepare::<f64>()?;
            let ks = (!k.is_empty()).then_some(k.as_slice());
            let (reports, files) = p.stability(&ens, &base, ks)?;
            let rows: Vec<Value> = reports
                .iter()
                .map(|r| {
                    json!({
                        "k": r.k,
                        "pairs": r.within.len(),
                        "lda": r.lda,
                        "random": r.random,
                        "null": r.null,
                    })
                })
                .collect();
            Ok(json!({ "stability": rows, "files": paths(&files) }))
        }
        Command::Ksweep => {
            let p = Pipeline::new(cfg)?;
            let (ens, _) = p.prepare::<f64>()?;
            let (report, files) = p.ksweep(&ens)?;
            Ok(json!({ "ks": report.ks, "cells": report.cells, "files": paths(&files) }))
        }
        Command::Deltacmp { a, b } => {
            let p = Pipeline::new(cfg)?;
            let (ens, _) = p.prepare::<f64>()?;
            let (report, files) = p.deltacmp(&ens, a, b)?;
            Ok(json!({
                "delta_a": report.delta_a,
                "delta_b": report.delta_b,
                "pairs": report.pairs.len(),
                "correlation": report.correlation,
                "files": paths(&files),
            }))
        }
        Command::Report => {
            let p = Pipeline::new(cfg)?;
            let summary = p.report::<f64>()?;
            Ok(serde_json::to_value(summary).expect("summary serializes"))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprintln!("{}", json!({ "error": "Usage", "message": e.render().to_string().trim() }));
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(v) => {
            let text = serde_json::to_string_pretty(&v).expect("output serializes");
            // A closed pipe downstream is not a failure of the command.
            let _ = writeln!(std::io::stdout(), "{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            let mut err = json!({ "error": e.kind(), "message": e.to_string() });
            if let Error::Config { key, .. } = &e {
                err["key"] = json!(key);
            }
            eprintln!("{err}");
            ExitCode::FAILURE
        }
    }
}
