//! Perceptual retrieval over a Likert-annotated video corpus.
//!
//! - [`ingest`]: manifest and annotation file formats.
//! - [`dataset`]: aggregation into per-video perception profiles.
//! - [`query`]: the perception filter, slider bounds and baseline modes.
//! - [`session`]: retrieval-session event log and study metrics.
//! - [`sus`]: System Usability Scale scoring.

pub mod dataset;
pub mod error;
pub mod ingest;
pub mod model;
pub mod query;
pub mod session;
pub mod sus;

pub use dataset::{aggregate_profiles, dataset_stats, CategoryCounts, Dataset, PerceptionProfile};
pub use error::{DatasetError, DomainError, NoVideosForApplication, ParseError, ParseErrors, SessionError, SusError};
pub use ingest::{parse_annotations, parse_video_manifest, AnnotationRecord, VideoRecord};
pub use model::{Application, Category, Metric, Rating};
pub use query::{
    application_bounds, clamp_filter_to_bounds, content_search, default_filter, execute_query,
    keyword_search, normalize_range, ContentFilter, Handle, MetricBounds, MetricRange, QueryFilter,
    ResultList, SpokenFilter,
};
pub use session::{aggregate_study, EventKind, InterfaceMode, SessionEvent, SessionLog, SessionMetrics};
pub use sus::{mean_sus_score, sus_score, SusResponse};
