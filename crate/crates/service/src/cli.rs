use std::fs::File;
use std::io::{BufReader, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use percept_core::sus::parse_sus_responses;
use percept_core::{aggregate_profiles, parse_annotations, parse_video_manifest, SessionLog};

use crate::config::ServiceConfig;
use crate::state::{load_dataset, AppState};

#[derive(Debug, Parser)]
#[command(name = "percept", version, about = "Perceptual video retrieval service")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Video manifest (CSV)
    #[arg(long, global = true, env = "PERCEPT_MANIFEST", default_value = "data/manifest.csv")]
    pub manifest: PathBuf,
    /// Annotation file (CSV)
    #[arg(long, global = true, env = "PERCEPT_ANNOTATIONS", default_value = "data/annotations.csv")]
    pub annotations: PathBuf,
    /// Session event log (newline-delimited JSON, append-only)
    #[arg(long, global = true, env = "PERCEPT_LOG", default_value = "sessions.ndjson")]
    pub log: PathBuf,
    /// Address the HTTP service binds to
    #[arg(long, global = true, env = "PERCEPT_LISTEN", default_value = "127.0.0.1:8080")]
    pub listen: String,
    /// Default page size for GET /videos
    #[arg(long, global = true, env = "PERCEPT_PAGE_SIZE", default_value_t = 20)]
    pub page_size: usize,
}

impl GlobalArgs {
    pub fn config(&self) -> ServiceConfig {
        ServiceConfig {
            manifest_path: self.manifest.clone(),
            annotations_path: self.annotations.clone(),
            session_log_path: self.log.clone(),
            listen_address: self.listen.clone(),
            page_size_default: self.page_size,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse and aggregate the corpus, write the dataset export, print counts
    Ingest {
        /// Where to write the aggregated dataset (JSON)
        #[arg(long, default_value = "dataset.json")]
        out: PathBuf,
    },
    /// Parse and check the input files without exporting anything
    Validate,
    /// Run the HTTP service
    Serve,
    /// Summarise session metrics (and optionally SUS responses) as a text table
    Report {
        /// SUS responses (CSV: participant_id,i1,...,i10)
        #[arg(long, env = "PERCEPT_SUS")]
        sus: Option<PathBuf>,
    },
}

/// Run one command, writing normal output to `out` and problems to `err`.
pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> ExitCode {
    match cli.command {
        Command::Ingest { out: path } => ingest(&cli.global, &path, out, err),
        Command::Validate => validate(&cli.global, out, err),
        Command::Serve => serve(&cli.global, err),
        Command::Report { sus } => report(&cli.global, sus.as_deref(), out, err),
    }
}

fn ingest(args: &GlobalArgs, path: &std::path::Path, out: &mut dyn Write, err: &mut dyn Write) -> ExitCode {
    let dataset = match load_dataset(&args.manifest, &args.annotations) {
        Ok(d) => d,
        Err(e) => {
            let _ = writeln!(err, "{e}");
            return ExitCode::from(1);
        }
    };
    let written = File::create(path)
        .map_err(|e| e.to_string())
        .and_then(|f| serde_json::to_writer_pretty(f, &dataset.export()).map_err(|e| e.to_string()));
    if let Err(e) = written {
        let _ = writeln!(err, "cannot write {}: {e}", path.display());
        return ExitCode::from(1);
    }
    let c = dataset.category_counts();
    let _ = writeln!(out, "category  videos");
    for (label, n) in [("A", c.count_a), ("B", c.count_b), ("C", c.count_c), ("D", c.count_d)] {
        let _ = writeln!(out, "{label:<9} {n:>6}");
    }
    let _ = writeln!(out, "{:<9} {:>6}", "total", c.total);
    let _ = writeln!(out, "spoken {} / non-spoken {}", c.spoken(), c.non_spoken());
    let _ = writeln!(out, "profiled {}", dataset.profiles().len());
    for warning in dataset.warnings() {
        let _ = writeln!(out, "warning: {warning}");
    }
    let _ = writeln!(out, "wrote {}", path.display());
    ExitCode::SUCCESS
}

fn validate(args: &GlobalArgs, out: &mut dyn Write, err: &mut dyn Write) -> ExitCode {
    let mut problems: Vec<(&std::path::Path, String)> = Vec::new();

    let videos = match File::open(&args.manifest) {
        Ok(f) => parse_video_manifest(f)
            .map_err(|e| problems.push((&args.manifest, e.to_string())))
            .ok(),
        Err(e) => {
            problems.push((&args.manifest, e.to_string()));
            None
        }
    };
    let annotations = match File::open(&args.annotations) {
        Ok(f) => parse_annotations(f)
            .map_err(|e| problems.push((&args.annotations, e.to_string())))
            .ok(),
        Err(e) => {
            problems.push((&args.annotations, e.to_string()));
            None
        }
    };
    if let (Some(videos), Some(annotations)) = (videos, annotations) {
        match aggregate_profiles(videos, &annotations) {
            Ok(dataset) => {
                for warning in dataset.warnings() {
                    let _ = writeln!(out, "warning: {warning}");
                }
                let _ = writeln!(out, "OK, {} videos", dataset.videos().len());
                return ExitCode::SUCCESS;
            }
            Err(e) => problems.push((&args.annotations, e.to_string())),
        }
    }
    for (path, message) in problems {
        for line in message.lines() {
            let _ = writeln!(err, "{}: {line}", path.display());
        }
    }
    ExitCode::from(1)
}

fn report(args: &GlobalArgs, sus: Option<&std::path::Path>, out: &mut dyn Write, err: &mut dyn Write) -> ExitCode {
    let log = match File::open(&args.log) {
        Ok(f) => SessionLog::read_ndjson(BufReader::new(f)),
        Err(e) => {
            let _ = writeln!(err, "{}: {e}", args.log.display());
            return ExitCode::from(1);
        }
    };
    let log = match log {
        Ok(log) => log,
        Err(e) => {
            let _ = writeln!(err, "{}: {e}", args.log.display());
            return ExitCode::from(1);
        }
    };
    let responses = match sus {
        None => Vec::new(),
        Some(path) => match File::open(path).map_err(|e| e.to_string()).and_then(|f| {
            parse_sus_responses(f).map_err(|e| e.to_string())
        }) {
            Ok(r) => r,
            Err(e) => {
                for line in e.lines() {
                    let _ = writeln!(err, "{}: {line}", path.display());
                }
                return ExitCode::from(1);
            }
        },
    };
    let _ = write!(out, "{}", crate::report::render_report(&log, &responses));
    ExitCode::SUCCESS
}

fn serve(args: &GlobalArgs, err: &mut dyn Write) -> ExitCode {
    let config = args.config();
    if let Err(e) = config.validate() {
        let _ = writeln!(err, "invalid configuration: {e}");
        return ExitCode::from(1);
    }
    let state = match AppState::load(&config) {
        Ok(state) => state,
        Err(e) => {
            let _ = writeln!(err, "startup failed: {e}");
            return ExitCode::from(1);
        }
    };
    let runtime = match tokio::runtime::Runtime::new() {
        Ok(rt) => rt,
        Err(e) => {
            let _ = writeln!(err, "cannot start runtime: {e}");
            return ExitCode::from(1);
        }
    };
    match runtime.block_on(crate::serve(Arc::new(state), &config.listen_address)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let _ = writeln!(err, "{e}");
            ExitCode::from(1)
        }
    }
}

