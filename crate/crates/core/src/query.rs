//! The perception filter, application-conditioned slider bounds and the two
//! baseline retrieval modes (keyword only, keyword plus content section).
//!
//! Everything here is a pure function of an immutable [`Dataset`].
//!
//! Ordering: results are sorted by descending tingles mean, ties broken by
//! ascending `video_id`. Keyword modes rank by number of matching query
//! tokens first and fall back to that order.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use serde::{Deserialize, Deserializer, Serialize};

use crate::dataset::{Dataset, PerceptionProfile};
use crate::error::{DomainError, NoVideosForApplication};
use crate::ingest::VideoRecord;
use crate::model::{Application, Category, Metric, Rating};

/// Slider resolution: ten steps per Likert unit.
pub const SLIDER_STEPS_PER_UNIT: i64 = 10;

/// Closed interval `[lo, hi]` inside `[1.0, 7.0]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct MetricRange {
    lo: Rating,
    hi: Rating,
}

impl MetricRange {
    pub const FULL: MetricRange = MetricRange {
        lo: Rating::MIN,
        hi: Rating::MAX,
    };

    pub fn new(lo: Rating, hi: Rating) -> Result<Self, DomainError> {
        check_domain(lo)?;
        check_domain(hi)?;
        if lo > hi {
            return Err(DomainError::InvertedRange {
                lo: lo.to_string(),
                hi: hi.to_string(),
            });
        }
        Ok(MetricRange { lo, hi })
    }

    pub fn from_tenths(lo: i64, hi: i64) -> Result<Self, DomainError> {
        MetricRange::new(Rating::from_tenths(lo), Rating::from_tenths(hi))
    }

    pub fn lo(&self) -> Rating {
        self.lo
    }

    pub fn hi(&self) -> Rating {
        self.hi
    }

    pub fn contains(&self, value: Rating) -> bool {
        self.lo <= value && value <= self.hi
    }

    pub fn is_full(&self) -> bool {
        *self == MetricRange::FULL
    }
}

impl Default for MetricRange {
    fn default() -> Self {
        MetricRange::FULL
    }
}

impl<'de> Deserialize<'de> for MetricRange {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Raw {
            lo: Rating,
            hi: Rating,
        }
        let raw = Raw::deserialize(deserializer)?;
        MetricRange::new(raw.lo, raw.hi).map_err(serde::de::Error::custom)
    }
}

fn check_domain(value: Rating) -> Result<(), DomainError> {
    if value.in_likert_range() {
        Ok(())
    } else {
        Err(DomainError::OutOfRange(value.to_string()))
    }
}

/// Which slider handle the user is dragging.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Handle {
    Left,
    Right,
}

/// Apply the two-handle collision rule to a proposed `(lo, hi)` pair.
///
/// Handles may meet but never cross: a left handle pushed past the right one
/// stops at the right handle's value, and a right handle pulled below the
/// left one stops at the left handle's value.
pub fn normalize_range(lo: Rating, hi: Rating, moving: Handle) -> Result<MetricRange, DomainError> {
    check_domain(lo)?;
    check_domain(hi)?;
    let (lo, hi) = if lo <= hi {
        (lo, hi)
    } else {
        match moving {
            Handle::Left => (hi, hi),
            Handle::Right => (lo, lo),
        }
    };
    Ok(MetricRange { lo, hi })
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpokenFilter {
    #[default]
    Any,
    SpokenOnly,
    NonSpokenOnly,
}

impl SpokenFilter {
    pub fn accepts(self, spoken: bool) -> bool {
        match self {
            SpokenFilter::Any => true,
            SpokenFilter::SpokenOnly => spoken,
            SpokenFilter::NonSpokenOnly => !spoken,
        }
    }
}

/// State of the perception filter panel.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(default)]
pub struct QueryFilter {
    pub application: Option<Application>,
    pub spoken: SpokenFilter,
    pub tingles: MetricRange,
    pub excitement: MetricRange,
    pub calmness: MetricRange,
    pub sadness: MetricRange,
    pub stress: MetricRange,
}

impl QueryFilter {
    pub fn range(&self, metric: Metric) -> MetricRange {
        match metric {
            Metric::Tingles => self.tingles,
            Metric::Excitement => self.excitement,
            Metric::Calmness => self.calmness,
            Metric::Sadness => self.sadness,
            Metric::Stress => self.stress,
        }
    }

    pub fn range_mut(&mut self, metric: Metric) -> &mut MetricRange {
        match metric {
            Metric::Tingles => &mut self.tingles,
            Metric::Excitement => &mut self.excitement,
            Metric::Calmness => &mut self.calmness,
            Metric::Sadness => &mut self.sadness,
            Metric::Stress => &mut self.stress,
        }
    }

    pub fn with_application(mut self, application: Application) -> Self {
        self.application = Some(application);
        self
    }

    pub fn matches(&self, video: &VideoRecord, profile: &PerceptionProfile) -> bool {
        self.application
            .is_none_or(|app| profile.applications.contains(&app))
            && self.spoken.accepts(video.spoken)
            && Metric::ALL
                .into_iter()
                .all(|m| self.range(m).contains(profile.mean(m)))
    }
}

/// The identity filter: no application, any speech, every range full.
pub fn default_filter() -> QueryFilter {
    QueryFilter::default()
}

/// The content section of the keyword + content baseline.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct ContentFilter {
    pub application: Option<Application>,
    pub spoken: SpokenFilter,
    pub tingles: MetricRange,
}

impl ContentFilter {
    pub fn matches(&self, video: &VideoRecord, profile: Option<&PerceptionProfile>) -> bool {
        let Some(profile) = profile else {
            return false;
        };
        self.application
            .is_none_or(|app| profile.applications.contains(&app))
            && self.spoken.accepts(video.spoken)
            && self.tingles.contains(profile.tingles_mean)
    }
}

impl From<&QueryFilter> for ContentFilter {
    fn from(filter: &QueryFilter) -> Self {
        ContentFilter {
            application: filter.application,
            spoken: filter.spoken,
            tingles: filter.tingles,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ResultEntry {
    pub video_id: String,
    pub title: String,
    pub url: String,
    pub category: Category,
    pub spoken: bool,
    pub profile: Option<PerceptionProfile>,
}

impl ResultEntry {
    fn new(video: &VideoRecord, profile: Option<&PerceptionProfile>) -> Self {
        ResultEntry {
            video_id: video.video_id.clone(),
            title: video.title.clone(),
            url: video.url.clone(),
            category: video.category,
            spoken: video.spoken,
            profile: profile.cloned(),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ResultList {
    pub results: Vec<ResultEntry>,
    pub total_matches: usize,
}

impl ResultList {
    fn from_entries(results: Vec<ResultEntry>) -> Self {
        let total_matches = results.len();
        ResultList {
            results,
            total_matches,
        }
    }

    pub fn video_ids(&self) -> Vec<&str> {
        self.results.iter().map(|r| r.video_id.as_str()).collect()
    }

    pub fn id_set(&self) -> BTreeSet<String> {
        self.results.iter().map(|r| r.video_id.clone()).collect()
    }

    /// Keep `limit` entries starting at `offset`; `total_matches` is unchanged.
    pub fn page(mut self, offset: usize, limit: usize) -> Self {
        let start = offset.min(self.results.len());
        self.results.drain(..start);
        self.results.truncate(limit);
        self
    }
}

fn canonical_order(
    a: (&VideoRecord, Option<&PerceptionProfile>),
    b: (&VideoRecord, Option<&PerceptionProfile>),
) -> Ordering {
    let tingles = |p: Option<&PerceptionProfile>| p.map(|p| p.tingles_mean);
    // Unprofiled videos (None) sort after every profiled one.
    tingles(b.1)
        .cmp(&tingles(a.1))
        .then_with(|| a.0.video_id.cmp(&b.0.video_id))
}

/// Videos whose profile satisfies every predicate of `filter`.
pub fn execute_query(dataset: &Dataset, filter: &QueryFilter) -> ResultList {
    let mut hits: Vec<_> = dataset
        .profiled()
        .filter(|(video, profile)| filter.matches(video, profile))
        .collect();
    hits.sort_by(|a, b| canonical_order((a.0, Some(a.1)), (b.0, Some(b.1))));
    ResultList::from_entries(
        hits.into_iter()
            .map(|(video, profile)| ResultEntry::new(video, Some(profile)))
            .collect(),
    )
}

/// Per-metric extremes over the videos labelled with one application.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MetricBounds {
    pub tingles: Extent,
    pub excitement: Extent,
    pub calmness: Extent,
    pub sadness: Extent,
    pub stress: Extent,
    pub video_count: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Extent {
    pub min: Rating,
    pub max: Rating,
}

impl MetricBounds {
    pub const FULL: MetricBounds = {
        let full = Extent {
            min: Rating::MIN,
            max: Rating::MAX,
        };
        MetricBounds {
            tingles: full,
            excitement: full,
            calmness: full,
            sadness: full,
            stress: full,
            video_count: 0,
        }
    };

    pub fn extent(&self, metric: Metric) -> Extent {
        match metric {
            Metric::Tingles => self.tingles,
            Metric::Excitement => self.excitement,
            Metric::Calmness => self.calmness,
            Metric::Sadness => self.sadness,
            Metric::Stress => self.stress,
        }
    }

    fn extent_mut(&mut self, metric: Metric) -> &mut Extent {
        match metric {
            Metric::Tingles => &mut self.tingles,
            Metric::Excitement => &mut self.excitement,
            Metric::Calmness => &mut self.calmness,
            Metric::Sadness => &mut self.sadness,
            Metric::Stress => &mut self.stress,
        }
    }

    /// Bounds widened to the 0.1 slider grid (min down, max up), so no
    /// boundary video falls outside the rendered handles.
    pub fn outward_to_grid(&self) -> MetricBounds {
        let mut rounded = *self;
        for metric in Metric::ALL {
            let extent = rounded.extent_mut(metric);
            extent.min = extent.min.floor_to_step(SLIDER_STEPS_PER_UNIT);
            extent.max = extent.max.ceil_to_step(SLIDER_STEPS_PER_UNIT);
        }
        rounded
    }
}

/// Min and max of each metric mean over the videos carrying `application`.
pub fn application_bounds(
    dataset: &Dataset,
    application: Application,
) -> Result<MetricBounds, NoVideosForApplication> {
    let mut bounds: Option<MetricBounds> = None;
    for (_, profile) in dataset
        .profiled()
        .filter(|(_, p)| p.applications.contains(&application))
    {
        let b = bounds.get_or_insert_with(|| {
            let at = |m: Metric| Extent {
                min: profile.mean(m),
                max: profile.mean(m),
            };
            MetricBounds {
                tingles: at(Metric::Tingles),
                excitement: at(Metric::Excitement),
                calmness: at(Metric::Calmness),
                sadness: at(Metric::Sadness),
                stress: at(Metric::Stress),
                video_count: 0,
            }
        });
        for metric in Metric::ALL {
            let value = profile.mean(metric);
            let extent = b.extent_mut(metric);
            extent.min = extent.min.min(value);
            extent.max = extent.max.max(value);
        }
        b.video_count += 1;
    }
    bounds.ok_or(NoVideosForApplication(application))
}

/// Set all five ranges to the given bounds; application and spoken pass through.
pub fn clamp_filter_to_bounds(filter: &QueryFilter, bounds: &MetricBounds) -> QueryFilter {
    let mut clamped = *filter;
    for metric in Metric::ALL {
        let extent = bounds.extent(metric);
        *clamped.range_mut(metric) = MetricRange {
            lo: extent.min,
            hi: extent.max,
        };
    }
    clamped
}

fn query_tokens(query: &str) -> Vec<String> {
    let mut tokens: Vec<String> = query.split_whitespace().map(str::to_lowercase).collect();
    tokens.sort();
    tokens.dedup();
    tokens
}

fn keyword_ranked<'a>(
    dataset: &'a Dataset,
    query: &str,
    mut keep: impl FnMut(&VideoRecord, Option<&PerceptionProfile>) -> bool,
) -> ResultList {
    let tokens = query_tokens(query);
    let mut hits: Vec<(usize, &'a VideoRecord, Option<&'a PerceptionProfile>)> = dataset
        .videos()
        .values()
        .filter_map(|video| {
            let profile = dataset.profile(&video.video_id);
            let matched = if tokens.is_empty() {
                0
            } else {
                let title = video.title.to_lowercase();
                let n = tokens.iter().filter(|t| title.contains(t.as_str())).count();
                if n == 0 {
                    return None;
                }
                n
            };
            keep(video, profile).then_some((matched, video, profile))
        })
        .collect();
    hits.sort_by(|a, b| b.0.cmp(&a.0).then_with(|| canonical_order((a.1, a.2), (b.1, b.2))));
    ResultList::from_entries(
        hits.into_iter()
            .map(|(_, video, profile)| ResultEntry::new(video, profile))
            .collect(),
    )
}

/// Keyword-only retrieval: case-insensitive, whitespace tokens, a video
/// matches when any token is a substring of its title.
pub fn keyword_search(dataset: &Dataset, query: &str) -> ResultList {
    keyword_ranked(dataset, query, |_, _| true)
}

/// Keyword retrieval restricted by the content section (application,
/// spoken, tingles range). The four perceptual ranges are not consulted.
pub fn content_search(dataset: &Dataset, query: &str, content: &ContentFilter) -> ResultList {
    keyword_ranked(dataset, query, |video, profile| content.matches(video, profile))
}
