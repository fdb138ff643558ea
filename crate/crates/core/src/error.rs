use thiserror::Error;

use crate::model::Application;

/// Closed-vocabulary and numeric-domain violations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DomainError {
    #[error("unknown category {0:?} (expected one of A, B, C, D)")]
    UnknownCategory(String),
    #[error("unknown application {0:?}")]
    UnknownApplication(String),
    #[error("invalid number {0:?}")]
    InvalidNumber(String),
    #[error("value {0} outside [1.0, 7.0]")]
    OutOfRange(String),
    #[error("range lower bound {lo} exceeds upper bound {hi}")]
    InvertedRange { lo: String, hi: String },
}

/// A row-level problem in a manifest or annotation file.
///
/// `line` is the 1-based physical line of the offending record, counting the
/// header as line 1.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, field `{field}`: {message}")]
pub struct ParseError {
    pub line: u64,
    pub field: String,
    pub message: String,
}

impl ParseError {
    pub fn new(line: u64, field: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            line,
            field: field.into(),
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DatasetError {
    #[error("annotation by {annotator_id} references unknown video {video_id:?}")]
    UnknownVideo {
        annotator_id: String,
        video_id: String,
    },
    #[error("dataset has no profiled videos")]
    Empty,
}

/// `application_bounds` found no video carrying the requested application.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("no videos for application {0}")]
pub struct NoVideosForApplication(pub Application);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SessionError {
    #[error("session {session_id}: timestamp {timestamp_ms} precedes previous event at {previous_ms}")]
    TimestampRegression {
        session_id: String,
        timestamp_ms: u64,
        previous_ms: u64,
    },
    #[error("session {session_id}: {kind} requires a video_id")]
    MissingVideoId { session_id: String, kind: String },
    #[error("session {session_id}: query_issued requires an interface_mode")]
    MissingInterfaceMode { session_id: String },
    #[error("session {session_id}: {kind} for video {video_id} which is not open")]
    VideoNotOpen {
        session_id: String,
        kind: String,
        video_id: String,
    },
    #[error("session id must be non-empty")]
    EmptySessionId,
    #[error("unknown session {0:?}")]
    UnknownSession(String),
    #[error("no sessions for interface mode {0}")]
    NoSessionsForMode(String),
    #[error("log line {line}: {message}")]
    Malformed { line: u64, message: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SusError {
    #[error("expected 10 items, got {0}")]
    ItemCount(usize),
    #[error("item i{item} = {value} outside [1, 5]")]
    ItemOutOfRange { item: usize, value: i64 },
    #[error("no responses")]
    Empty,
}

/// Every row-level problem found in one input file.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{}", render_parse_errors(.0))]
pub struct ParseErrors(pub Vec<ParseError>);

fn render_parse_errors(errors: &[ParseError]) -> String {
    errors
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("\n")
}

impl ParseErrors {
    pub fn single(error: ParseError) -> Self {
        ParseErrors(vec![error])
    }

    pub fn errors(&self) -> &[ParseError] {
        &self.0
    }
}
