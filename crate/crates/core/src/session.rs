//! Retrieval-session event log and the study quantities derived from it.
//!
//! Timestamps are client-reported milliseconds from session start. The log
//! only checks that they never go backwards within a session.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::error::SessionError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EventKind {
    QueryIssued,
    VideoOpened,
    VideoClosed,
    MarkedSatisfactory,
}

impl EventKind {
    pub fn as_str(self) -> &'static str {
        match self {
            EventKind::QueryIssued => "query_issued",
            EventKind::VideoOpened => "video_opened",
            EventKind::VideoClosed => "video_closed",
            EventKind::MarkedSatisfactory => "marked_satisfactory",
        }
    }

    pub fn needs_video(self) -> bool {
        !matches!(self, EventKind::QueryIssued)
    }
}

impl fmt::Display for EventKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The three retrieval interfaces compared in a study.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InterfaceMode {
    Ui1Keyword,
    Ui2Content,
    Perceptual,
}

impl InterfaceMode {
    pub const ALL: [InterfaceMode; 3] = [
        InterfaceMode::Ui1Keyword,
        InterfaceMode::Ui2Content,
        InterfaceMode::Perceptual,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            InterfaceMode::Ui1Keyword => "ui1_keyword",
            InterfaceMode::Ui2Content => "ui2_content",
            InterfaceMode::Perceptual => "perceptual",
        }
    }
}

impl fmt::Display for InterfaceMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for InterfaceMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        InterfaceMode::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| format!("unknown interface mode {s:?}"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SessionEvent {
    pub session_id: String,
    pub timestamp_ms: u64,
    pub kind: EventKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub video_id: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub interface_mode: Option<InterfaceMode>,
}

impl SessionEvent {
    pub fn query(session_id: &str, timestamp_ms: u64, mode: InterfaceMode) -> Self {
        SessionEvent {
            session_id: session_id.to_string(),
            timestamp_ms,
            kind: EventKind::QueryIssued,
            video_id: None,
            interface_mode: Some(mode),
        }
    }

    pub fn video(session_id: &str, timestamp_ms: u64, kind: EventKind, video_id: &str) -> Self {
        SessionEvent {
            session_id: session_id.to_string(),
            timestamp_ms,
            kind,
            video_id: Some(video_id.to_string()),
            interface_mode: None,
        }
    }

    fn same_delivery(&self, other: &SessionEvent) -> bool {
        self.timestamp_ms == other.timestamp_ms
            && self.kind == other.kind
            && self.video_id == other.video_id
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AppendOutcome {
    Appended,
    /// An identical (session, timestamp, kind, video) event was already logged.
    Duplicate,
}

#[derive(Debug, Clone, Default)]
struct SessionState {
    events: Vec<usize>,
    open: BTreeSet<String>,
    last_ms: u64,
}

/// Append-only store of session events, validated per session.
#[derive(Debug, Clone, Default)]
pub struct SessionLog {
    journal: Vec<SessionEvent>,
    sessions: BTreeMap<String, SessionState>,
}

impl SessionLog {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.journal.len()
    }

    pub fn is_empty(&self) -> bool {
        self.journal.is_empty()
    }

    /// Every event in append order.
    pub fn events(&self) -> &[SessionEvent] {
        &self.journal
    }

    pub fn session_ids(&self) -> impl Iterator<Item = &str> {
        self.sessions.keys().map(String::as_str)
    }

    pub fn session_events(&self, session_id: &str) -> Option<Vec<&SessionEvent>> {
        self.sessions
            .get(session_id)
            .map(|s| s.events.iter().map(|&i| &self.journal[i]).collect())
    }

    /// Validate and append one event.
    pub fn append_event(&mut self, event: SessionEvent) -> Result<AppendOutcome, SessionError> {
        let outcome = self.check_event(&event)?;
        if outcome == AppendOutcome::Appended {
            self.commit(event);
        }
        Ok(outcome)
    }

    /// What [`append_event`](Self::append_event) would do, without changing the log.
    pub fn check_event(&self, event: &SessionEvent) -> Result<AppendOutcome, SessionError> {
        let session_id = || event.session_id.clone();
        if event.session_id.is_empty() {
            return Err(SessionError::EmptySessionId);
        }
        if event.kind.needs_video() && event.video_id.as_deref().is_none_or(str::is_empty) {
            return Err(SessionError::MissingVideoId {
                session_id: session_id(),
                kind: event.kind.to_string(),
            });
        }
        if event.kind == EventKind::QueryIssued && event.interface_mode.is_none() {
            return Err(SessionError::MissingInterfaceMode {
                session_id: session_id(),
            });
        }

        let state = self.sessions.get(&event.session_id);
        if let Some(state) = state {
            if state.events.iter().any(|&i| self.journal[i].same_delivery(event)) {
                return Ok(AppendOutcome::Duplicate);
            }
            if event.timestamp_ms < state.last_ms {
                return Err(SessionError::TimestampRegression {
                    session_id: session_id(),
                    timestamp_ms: event.timestamp_ms,
                    previous_ms: state.last_ms,
                });
            }
        }

        if let (EventKind::VideoClosed | EventKind::MarkedSatisfactory, Some(video)) =
            (event.kind, event.video_id.as_deref())
        {
            if !state.is_some_and(|s| s.open.contains(video)) {
                return Err(SessionError::VideoNotOpen {
                    session_id: session_id(),
                    kind: event.kind.to_string(),
                    video_id: video.to_string(),
                });
            }
        }
        Ok(AppendOutcome::Appended)
    }

    fn commit(&mut self, event: SessionEvent) {
        let state = self.sessions.entry(event.session_id.clone()).or_default();
        match (event.kind, event.video_id.as_deref()) {
            (EventKind::VideoOpened, Some(video)) => {
                state.open.insert(video.to_string());
            }
            (EventKind::VideoClosed, Some(video)) => {
                state.open.remove(video);
            }
            _ => {}
        }
        state.last_ms = event.timestamp_ms;
        state.events.push(self.journal.len());
        self.journal.push(event);
    }

    pub fn compute_session_metrics(&self, session_id: &str) -> Result<SessionMetrics, SessionError> {
        let events = self
            .session_events(session_id)
            .ok_or_else(|| SessionError::UnknownSession(session_id.to_string()))?;
        Ok(metrics_from_events(session_id, events))
    }

    pub fn all_session_metrics(&self) -> Vec<SessionMetrics> {
        self.sessions
            .keys()
            .map(|id| metrics_from_events(id, self.session_events(id).unwrap_or_default()))
            .collect()
    }

    /// Newline-delimited JSON, one event per line, in append order.
    pub fn write_ndjson<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        for event in &self.journal {
            serde_json::to_writer(&mut out, event)?;
            out.write_all(b"\n")?;
        }
        Ok(())
    }

    /// Rebuild a log by replaying newline-delimited events; blank lines are skipped.
    pub fn read_ndjson<R: BufRead>(input: R) -> Result<SessionLog, SessionError> {
        let mut log = SessionLog::new();
        for (idx, line) in input.lines().enumerate() {
            let line_no = idx as u64 + 1;
            let line = line.map_err(|e| SessionError::Malformed {
                line: line_no,
                message: e.to_string(),
            })?;
            if line.trim().is_empty() {
                continue;
            }
            let event: SessionEvent = serde_json::from_str(&line).map_err(|e| SessionError::Malformed {
                line: line_no,
                message: e.to_string(),
            })?;
            log.append_event(event).map_err(|e| SessionError::Malformed {
                line: line_no,
                message: e.to_string(),
            })?;
        }
        Ok(log)
    }
}

/// Study quantities for one session.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SessionMetrics {
    pub session_id: String,
    /// Mode of the session's first query; `None` when no query was issued.
    pub interface_mode: Option<InterfaceMode>,
    pub time_to_first_satisfactory_ms: Option<u64>,
    pub satisfactory_intervals_ms: Vec<u64>,
    pub videos_viewed: usize,
    pub videos_satisfactory: usize,
    /// `videos_satisfactory / videos_viewed`; absent when nothing was viewed.
    pub satisfaction_ratio: Option<f64>,
}

/// Metrics over one session's events, which must already be in log order.
///
/// Time to first satisfactory video is measured from the first query issued
/// before it, or from the session's first event if no query preceded it.
pub fn metrics_from_events<'a>(
    session_id: &str,
    events: impl IntoIterator<Item = &'a SessionEvent>,
) -> SessionMetrics {
    let mut interface_mode = None;
    let mut anchor_ms: Option<u64> = None;
    let mut first_event_ms: Option<u64> = None;
    let mut time_to_first = None;
    let mut marks: Vec<u64> = Vec::new();
    let mut viewed = BTreeSet::new();
    let mut satisfactory = BTreeSet::new();

    for event in events {
        first_event_ms.get_or_insert(event.timestamp_ms);
        match event.kind {
            EventKind::QueryIssued => {
                if interface_mode.is_none() {
                    interface_mode = event.interface_mode;
                }
                anchor_ms.get_or_insert(event.timestamp_ms);
            }
            EventKind::VideoOpened => {
                if let Some(v) = &event.video_id {
                    viewed.insert(v.as_str());
                }
            }
            EventKind::VideoClosed => {}
            EventKind::MarkedSatisfactory => {
                if time_to_first.is_none() {
                    let anchor = anchor_ms.or(first_event_ms).unwrap_or(0);
                    time_to_first = Some(event.timestamp_ms.saturating_sub(anchor));
                }
                marks.push(event.timestamp_ms);
                if let Some(v) = &event.video_id {
                    satisfactory.insert(v.as_str());
                }
            }
        }
    }

    let videos_viewed = viewed.len();
    let videos_satisfactory = satisfactory.len();
    SessionMetrics {
        session_id: session_id.to_string(),
        interface_mode,
        time_to_first_satisfactory_ms: time_to_first,
        satisfactory_intervals_ms: marks.windows(2).map(|w| w[1] - w[0]).collect(),
        videos_viewed,
        videos_satisfactory,
        satisfaction_ratio: (videos_viewed > 0)
            .then(|| videos_satisfactory as f64 / videos_viewed as f64),
    }
}

/// Mean, min and max of one quantity across the sessions that have it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FieldSummary {
    pub count: usize,
    /// Sessions that lack this quantity and were left out of it.
    pub excluded: usize,
    pub mean: Option<f64>,
    pub min: Option<f64>,
    pub max: Option<f64>,
}

impl FieldSummary {
    pub fn from_values(values: &[f64], excluded: usize) -> Self {
        let count = values.len();
        if count == 0 {
            return FieldSummary {
                count,
                excluded,
                mean: None,
                min: None,
                max: None,
            };
        }
        FieldSummary {
            count,
            excluded,
            mean: Some(values.iter().sum::<f64>() / count as f64),
            min: values.iter().copied().reduce(f64::min),
            max: values.iter().copied().reduce(f64::max),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StudySummary {
    pub interface_mode: InterfaceMode,
    pub sessions: usize,
    pub time_to_first_satisfactory_ms: FieldSummary,
    /// Pooled over every interval of every session; sessions with fewer
    /// than two satisfactory marks count as excluded.
    pub satisfactory_interval_ms: FieldSummary,
    pub videos_viewed: FieldSummary,
    pub videos_satisfactory: FieldSummary,
    pub satisfaction_ratio: FieldSummary,
}

/// Summarise every session whose first query used `mode`.
pub fn aggregate_study(log: &SessionLog, mode: InterfaceMode) -> Result<StudySummary, SessionError> {
    let sessions: Vec<SessionMetrics> = log
        .all_session_metrics()
        .into_iter()
        .filter(|m| m.interface_mode == Some(mode))
        .collect();
    summarize_sessions(mode, &sessions)
}

pub fn summarize_sessions(
    mode: InterfaceMode,
    sessions: &[SessionMetrics],
) -> Result<StudySummary, SessionError> {
    if sessions.is_empty() {
        return Err(SessionError::NoSessionsForMode(mode.to_string()));
    }
    let n = sessions.len();
    let ttf: Vec<f64> = sessions
        .iter()
        .filter_map(|m| m.time_to_first_satisfactory_ms.map(|v| v as f64))
        .collect();
    let intervals: Vec<f64> = sessions
        .iter()
        .flat_map(|m| m.satisfactory_intervals_ms.iter().map(|&v| v as f64))
        .collect();
    let without_intervals = sessions
        .iter()
        .filter(|m| m.satisfactory_intervals_ms.is_empty())
        .count();
    let viewed: Vec<f64> = sessions.iter().map(|m| m.videos_viewed as f64).collect();
    let satisfied: Vec<f64> = sessions.iter().map(|m| m.videos_satisfactory as f64).collect();
    let ratios: Vec<f64> = sessions.iter().filter_map(|m| m.satisfaction_ratio).collect();

    Ok(StudySummary {
        interface_mode: mode,
        sessions: n,
        time_to_first_satisfactory_ms: FieldSummary::from_values(&ttf, n - ttf.len()),
        satisfactory_interval_ms: FieldSummary::from_values(&intervals, without_intervals),
        videos_viewed: FieldSummary::from_values(&viewed, 0),
        videos_satisfactory: FieldSummary::from_values(&satisfied, 0),
        satisfaction_ratio: FieldSummary::from_values(&ratios, n - ratios.len()),
    })
}
