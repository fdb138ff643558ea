//! Startup ingestion and the service's shared state.

use std::fs::{File, OpenOptions};
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex};

use percept_core::session::AppendOutcome;
use percept_core::{
    aggregate_profiles, parse_annotations, parse_video_manifest, Dataset, ParseErrors, SessionError, SessionEvent,
    SessionLog, SusResponse,
};
use thiserror::Error;

use crate::config::ServiceConfig;

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}:\n{errors}")]
    Parse { path: PathBuf, errors: ParseErrors },
    #[error("{0}")]
    Dataset(#[from] percept_core::DatasetError),
    #[error("{path}: {source}")]
    SessionLog { path: PathBuf, source: SessionError },
}

fn open(path: &Path) -> Result<File, LoadError> {
    File::open(path).map_err(|source| LoadError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Parse both input files and aggregate them.
pub fn load_dataset(manifest: &Path, annotations: &Path) -> Result<Dataset, LoadError> {
    let videos = parse_video_manifest(open(manifest)?).map_err(|errors| LoadError::Parse {
        path: manifest.to_path_buf(),
        errors,
    })?;
    let rows = parse_annotations(open(annotations)?).map_err(|errors| LoadError::Parse {
        path: annotations.to_path_buf(),
        errors,
    })?;
    Ok(aggregate_profiles(videos, &rows)?)
}

/// Replay an existing log file; a missing file is an empty log.
pub fn load_session_log(path: &Path) -> Result<SessionLog, LoadError> {
    match File::open(path) {
        Ok(file) => SessionLog::read_ndjson(BufReader::new(file)).map_err(|source| LoadError::SessionLog {
            path: path.to_path_buf(),
            source,
        }),
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(SessionLog::new()),
        Err(source) => Err(LoadError::Io {
            path: path.to_path_buf(),
            source,
        }),
    }
}

#[derive(Debug, Error)]
pub enum RecordError {
    #[error(transparent)]
    Rejected(#[from] SessionError),
    #[error("failed to persist event: {0}")]
    Io(#[from] std::io::Error),
}

/// The session log plus the append-only file backing it.
#[derive(Debug)]
pub struct SessionStore {
    log: SessionLog,
    file: File,
}

impl SessionStore {
    pub fn open(path: &Path) -> Result<Self, LoadError> {
        let log = load_session_log(path)?;
        let file = OpenOptions::new()
            .create(true)
            .append(true)
            .open(path)
            .map_err(|source| LoadError::Io {
                path: path.to_path_buf(),
                source,
            })?;
        Ok(SessionStore { log, file })
    }

    pub fn log(&self) -> &SessionLog {
        &self.log
    }

    /// Validate, write to disk, then apply. Duplicates are acknowledged
    /// without touching the file.
    pub fn record(&mut self, event: SessionEvent) -> Result<AppendOutcome, RecordError> {
        if self.log.check_event(&event)? == AppendOutcome::Duplicate {
            return Ok(AppendOutcome::Duplicate);
        }
        let mut line = serde_json::to_vec(&event).map_err(std::io::Error::other)?;
        line.push(b'\n');
        self.file.write_all(&line)?;
        self.file.sync_data()?;
        Ok(self.log.append_event(event)?)
    }
}

pub struct AppState {
    pub dataset: Arc<Dataset>,
    pub sessions: Mutex<SessionStore>,
    pub sus: Mutex<Vec<SusResponse>>,
    pub page_size_default: usize,
}

impl AppState {
    pub fn load(config: &ServiceConfig) -> Result<Self, LoadError> {
        let dataset = load_dataset(&config.manifest_path, &config.annotations_path)?;
        Self::with_dataset(dataset, config)
    }

    pub fn with_dataset(dataset: Dataset, config: &ServiceConfig) -> Result<Self, LoadError> {
        Ok(AppState {
            dataset: Arc::new(dataset),
            sessions: Mutex::new(SessionStore::open(&config.session_log_path)?),
            sus: Mutex::new(Vec::new()),
            page_size_default: config.page_size_default,
        })
    }
}
