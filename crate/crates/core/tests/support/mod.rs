//! Random corpus generators and brute-force oracles.
//!
//! The oracles work from raw annotation rows with plain integer arithmetic
//! (sums, counts and cross-multiplication), never from profiles or the
//! rational type, so they stay independent of the code under test.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use percept_core::ingest::{AnnotationRecord, VideoRecord};
use percept_core::model::{Application, Category, Metric};
use percept_core::query::{MetricRange, QueryFilter, SpokenFilter};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::Rng;

pub const WORDS: [&str; 12] = [
    "slime", "tapping", "whisper", "rain", "brushing", "crinkle", "soap", "wood", "page", "ear", "sleep",
    "Tapping",
];

pub fn random_corpus(rng: &mut StdRng, max_videos: usize) -> (Vec<VideoRecord>, Vec<AnnotationRecord>) {
    let n = rng.gen_range(0..=max_videos);
    let mut videos = Vec::with_capacity(n);
    let mut annotations = Vec::new();
    for i in 0..n {
        let id = format!("v{i:03}");
        let category = Category::ALL[rng.gen_range(0..4)];
        let words = rng.gen_range(1..=3);
        let title = (0..words)
            .map(|_| *WORDS.choose(rng).unwrap())
            .collect::<Vec<_>>()
            .join(" ");
        videos.push(VideoRecord::new(&id, title, format!("https://example.org/{id}"), category, rng.gen_range(1..5000)));
        // About one video in ten stays unannotated.
        let annotators = if rng.gen_bool(0.1) { 0 } else { rng.gen_range(1..=4) };
        for a in 0..annotators {
            annotations.push(random_annotation(rng, &format!("p{a}"), &id));
        }
    }
    annotations.shuffle(rng);
    (videos, annotations)
}

pub fn random_annotation(rng: &mut StdRng, annotator: &str, video: &str) -> AnnotationRecord {
    let mut s = || rng.gen_range(1..=7u8);
    let scores = [s(), s(), s(), s(), s()];
    let applications = Application::ALL
        .into_iter()
        .filter(|_| rng.gen_bool(0.35))
        .collect();
    AnnotationRecord {
        annotator_id: annotator.to_string(),
        video_id: video.to_string(),
        tingles: scores[0],
        excitement: scores[1],
        calmness: scores[2],
        sadness: scores[3],
        stress: scores[4],
        applications,
    }
}

/// A filter expressed on the tenths grid so the oracle can use integers.
#[derive(Debug, Clone, Copy)]
pub struct GridFilter {
    pub application: Option<Application>,
    pub spoken: SpokenFilter,
    /// `(lo, hi)` in tenths for each metric, questionnaire order.
    pub ranges: [(i64, i64); 5],
}

impl GridFilter {
    pub fn full() -> Self {
        GridFilter {
            application: None,
            spoken: SpokenFilter::Any,
            ranges: [(10, 70); 5],
        }
    }

    pub fn random(rng: &mut StdRng) -> Self {
        let application = if rng.gen_bool(0.5) {
            None
        } else {
            Some(Application::ALL[rng.gen_range(0..5)])
        };
        let spoken = [SpokenFilter::Any, SpokenFilter::SpokenOnly, SpokenFilter::NonSpokenOnly][rng.gen_range(0..3)];
        let mut ranges = [(10, 70); 5];
        for r in ranges.iter_mut() {
            if rng.gen_bool(0.5) {
                let a = rng.gen_range(10..=70);
                let b = rng.gen_range(10..=70);
                *r = (a.min(b), a.max(b));
            }
        }
        GridFilter {
            application,
            spoken,
            ranges,
        }
    }

    pub fn to_filter(self) -> QueryFilter {
        let mut filter = QueryFilter {
            application: self.application,
            spoken: self.spoken,
            ..QueryFilter::default()
        };
        for metric in Metric::ALL {
            let (lo, hi) = self.ranges[metric.index()];
            *filter.range_mut(metric) = MetricRange::from_tenths(lo, hi).unwrap();
        }
        filter
    }

    /// Widen one facet of the filter at random.
    pub fn widened(&self, rng: &mut StdRng) -> Self {
        let mut wider = *self;
        match rng.gen_range(0..4) {
            0 => wider.application = None,
            1 => wider.spoken = SpokenFilter::Any,
            _ => {
                let r = &mut wider.ranges[rng.gen_range(0..5)];
                r.0 = rng.gen_range(10..=r.0);
                r.1 = rng.gen_range(r.1..=70);
            }
        }
        wider
    }
}

/// Raw per-video view for the oracles: integer score sums and app union.
#[derive(Debug, Clone)]
pub struct RawVideo {
    pub video_id: String,
    pub category_letter: char,
    pub title: String,
    pub sums: [i64; 5],
    pub count: i64,
    pub apps: BTreeSet<Application>,
}

pub fn raw_view(videos: &[VideoRecord], annotations: &[AnnotationRecord]) -> Vec<RawVideo> {
    let mut by_video: BTreeMap<&str, Vec<&AnnotationRecord>> = BTreeMap::new();
    for a in annotations {
        by_video.entry(a.video_id.as_str()).or_default().push(a);
    }
    videos
        .iter()
        .map(|v| {
            let rows = by_video.remove(v.video_id.as_str()).unwrap_or_default();
            let sums = [
                rows.iter().map(|a| a.tingles as i64).sum(),
                rows.iter().map(|a| a.excitement as i64).sum(),
                rows.iter().map(|a| a.calmness as i64).sum(),
                rows.iter().map(|a| a.sadness as i64).sum(),
                rows.iter().map(|a| a.stress as i64).sum(),
            ];
            RawVideo {
                video_id: v.video_id.clone(),
                category_letter: v.category.letter(),
                title: v.title.clone(),
                sums,
                count: rows.len() as i64,
                apps: rows.iter().flat_map(|a| a.applications.iter().copied()).collect(),
            }
        })
        .collect()
}

/// Linear scan applying the application, spoken and range predicates independently.
pub fn filter_oracle(raw: &[RawVideo], f: &GridFilter) -> BTreeSet<String> {
    raw.iter()
        .filter(|v| v.count > 0)
        .filter(|v| f.application.is_none_or(|a| v.apps.contains(&a)))
        .filter(|v| {
            let spoken = v.category_letter == 'A' || v.category_letter == 'B';
            match f.spoken {
                SpokenFilter::Any => true,
                SpokenFilter::SpokenOnly => spoken,
                SpokenFilter::NonSpokenOnly => !spoken,
            }
        })
        .filter(|v| {
            (0..5).all(|m| {
                let (lo, hi) = f.ranges[m];
                // lo/10 <= sum/count <= hi/10
                lo * v.count <= 10 * v.sums[m] && 10 * v.sums[m] <= hi * v.count
            })
        })
        .map(|v| v.video_id.clone())
        .collect()
}

/// Fraction as (numerator, denominator), compared by cross-multiplication.
pub type Frac = (i64, i64);

pub fn frac_lt(a: Frac, b: Frac) -> bool {
    a.0 * b.1 < b.0 * a.1
}

/// Per-metric `(min, max)` extents and the matching video ids.
pub type BoundsOracle = ([(Frac, Frac); 5], BTreeSet<String>);

/// Per-metric (min, max) over videos carrying `app`, plus the subset.
pub fn bounds_oracle(raw: &[RawVideo], app: Application) -> Option<BoundsOracle> {
    let subset: Vec<&RawVideo> = raw.iter().filter(|v| v.count > 0 && v.apps.contains(&app)).collect();
    if subset.is_empty() {
        return None;
    }
    let mut out = [((0, 1), (0, 1)); 5];
    for (m, slot) in out.iter_mut().enumerate() {
        let mut lo = (subset[0].sums[m], subset[0].count);
        let mut hi = lo;
        for v in &subset[1..] {
            let x = (v.sums[m], v.count);
            if frac_lt(x, lo) {
                lo = x;
            }
            if frac_lt(hi, x) {
                hi = x;
            }
        }
        *slot = (lo, hi);
    }
    Some((out, subset.iter().map(|v| v.video_id.clone()).collect()))
}

/// Any lowercase whitespace token of `query` is a substring of the lowercase title.
pub fn keyword_oracle(raw: &[RawVideo], query: &str) -> BTreeSet<String> {
    let tokens: Vec<String> = query.split_whitespace().map(|t| t.to_lowercase()).collect();
    raw.iter()
        .filter(|v| tokens.is_empty() || tokens.iter().any(|t| v.title.to_lowercase().contains(t)))
        .map(|v| v.video_id.clone())
        .collect()
}

pub fn random_query(rng: &mut StdRng) -> String {
    let n = rng.gen_range(0..=3);
    let mut tokens: Vec<String> = (0..n).map(|_| WORDS.choose(rng).unwrap().to_string()).collect();
    if rng.gen_bool(0.2) {
        tokens.push("harp".into());
    }
    if rng.gen_bool(0.2) {
        tokens.push("LIM".into());
    }
    tokens.join(" ")
}

/// Per-video exact means recomputed from rows: video_id -> [(sum, count); 5].
pub fn mean_oracle(annotations: &[AnnotationRecord]) -> BTreeMap<String, [Frac; 5]> {
    let mut acc: BTreeMap<String, [Frac; 5]> = BTreeMap::new();
    for a in annotations {
        let entry = acc.entry(a.video_id.clone()).or_insert([(0, 0); 5]);
        for (m, score) in [a.tingles, a.excitement, a.calmness, a.sadness, a.stress].into_iter().enumerate() {
            entry[m].0 += score as i64;
            entry[m].1 += 1;
        }
    }
    acc
}
