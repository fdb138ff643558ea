//! Aggregation of annotations into per-video perception profiles.

use std::collections::{BTreeMap, BTreeSet};

use chrono::{DateTime, Utc};
use serde::Serialize;

use crate::error::DatasetError;
use crate::ingest::{AnnotationRecord, VideoRecord};
use crate::model::{serialize_two_decimals, Application, Category, Metric, Rating};

/// Aggregated perception of one video.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PerceptionProfile {
    pub video_id: String,
    #[serde(serialize_with = "serialize_two_decimals")]
    pub tingles_mean: Rating,
    #[serde(serialize_with = "serialize_two_decimals")]
    pub excitement_mean: Rating,
    #[serde(serialize_with = "serialize_two_decimals")]
    pub calmness_mean: Rating,
    #[serde(serialize_with = "serialize_two_decimals")]
    pub sadness_mean: Rating,
    #[serde(serialize_with = "serialize_two_decimals")]
    pub stress_mean: Rating,
    pub applications: BTreeSet<Application>,
    pub annotator_count: u32,
}

impl PerceptionProfile {
    pub fn mean(&self, metric: Metric) -> Rating {
        match metric {
            Metric::Tingles => self.tingles_mean,
            Metric::Excitement => self.excitement_mean,
            Metric::Calmness => self.calmness_mean,
            Metric::Sadness => self.sadness_mean,
            Metric::Stress => self.stress_mean,
        }
    }

    fn from_annotations(video_id: &str, annotations: &[&AnnotationRecord]) -> Self {
        let count = annotations.len() as i64;
        let mean = |metric: Metric| {
            let sum: i64 = annotations.iter().map(|a| a.score(metric) as i64).sum();
            Rating::new(sum, count)
        };
        PerceptionProfile {
            video_id: video_id.to_string(),
            tingles_mean: mean(Metric::Tingles),
            excitement_mean: mean(Metric::Excitement),
            calmness_mean: mean(Metric::Calmness),
            sadness_mean: mean(Metric::Sadness),
            stress_mean: mean(Metric::Stress),
            applications: annotations
                .iter()
                .flat_map(|a| a.applications.iter().copied())
                .collect(),
            annotator_count: annotations.len() as u32,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct CategoryCounts {
    pub count_a: usize,
    pub count_b: usize,
    pub count_c: usize,
    pub count_d: usize,
    pub total: usize,
}

impl CategoryCounts {
    pub fn from_videos<'a>(videos: impl IntoIterator<Item = &'a VideoRecord>) -> Self {
        let mut counts = CategoryCounts::default();
        for video in videos {
            match video.category {
                Category::A => counts.count_a += 1,
                Category::B => counts.count_b += 1,
                Category::C => counts.count_c += 1,
                Category::D => counts.count_d += 1,
            }
            counts.total += 1;
        }
        counts
    }

    pub fn spoken(&self) -> usize {
        self.count_a + self.count_b
    }

    pub fn non_spoken(&self) -> usize {
        self.count_c + self.count_d
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MetricExtent {
    pub min: Rating,
    pub max: Rating,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DatasetStats {
    pub counts: CategoryCounts,
    pub extents: BTreeMap<Metric, MetricExtent>,
}

/// The queryable corpus. Built once by [`aggregate_profiles`], never mutated.
#[derive(Debug, Clone)]
pub struct Dataset {
    videos: BTreeMap<String, VideoRecord>,
    profiles: BTreeMap<String, PerceptionProfile>,
    unannotated: Vec<String>,
    created_at: DateTime<Utc>,
}

impl Dataset {
    pub fn empty() -> Self {
        Dataset {
            videos: BTreeMap::new(),
            profiles: BTreeMap::new(),
            unannotated: Vec::new(),
            created_at: Utc::now(),
        }
    }

    pub fn videos(&self) -> &BTreeMap<String, VideoRecord> {
        &self.videos
    }

    pub fn profiles(&self) -> &BTreeMap<String, PerceptionProfile> {
        &self.profiles
    }

    pub fn video(&self, video_id: &str) -> Option<&VideoRecord> {
        self.videos.get(video_id)
    }

    pub fn profile(&self, video_id: &str) -> Option<&PerceptionProfile> {
        self.profiles.get(video_id)
    }

    /// Videos with no annotation, excluded from perception queries.
    pub fn unannotated(&self) -> &[String] {
        &self.unannotated
    }

    pub fn warnings(&self) -> Vec<String> {
        self.unannotated
            .iter()
            .map(|id| format!("video {id} has no annotations and is excluded from perception queries"))
            .collect()
    }

    pub fn created_at(&self) -> DateTime<Utc> {
        self.created_at
    }

    /// Profiled videos paired with their records, in video_id order.
    pub fn profiled(&self) -> impl Iterator<Item = (&VideoRecord, &PerceptionProfile)> {
        self.profiles
            .iter()
            .map(move |(id, profile)| (&self.videos[id], profile))
    }

    pub fn category_counts(&self) -> CategoryCounts {
        CategoryCounts::from_videos(self.videos.values())
    }

    pub fn export(&self) -> DatasetExport<'_> {
        DatasetExport {
            created_at: self.created_at,
            videos: self.videos.values().collect(),
            profiles: self.profiles.values().collect(),
        }
    }
}

/// Object-notation rendering of a dataset; means carry two decimals.
#[derive(Debug, Serialize)]
pub struct DatasetExport<'a> {
    pub created_at: DateTime<Utc>,
    pub videos: Vec<&'a VideoRecord>,
    pub profiles: Vec<&'a PerceptionProfile>,
}

/// Combine annotations into one profile per annotated video.
///
/// Each metric mean is the exact arithmetic mean over the video's annotators
/// and the application set is the union of their selections.
pub fn aggregate_profiles(
    videos: Vec<VideoRecord>,
    annotations: &[AnnotationRecord],
) -> Result<Dataset, DatasetError> {
    aggregate_profiles_at(videos, annotations, Utc::now())
}

pub fn aggregate_profiles_at(
    videos: Vec<VideoRecord>,
    annotations: &[AnnotationRecord],
    created_at: DateTime<Utc>,
) -> Result<Dataset, DatasetError> {
    let videos: BTreeMap<String, VideoRecord> = videos
        .into_iter()
        .map(|v| (v.video_id.clone(), v))
        .collect();

    let mut by_video: BTreeMap<&str, Vec<&AnnotationRecord>> = BTreeMap::new();
    for annotation in annotations {
        if !videos.contains_key(&annotation.video_id) {
            return Err(DatasetError::UnknownVideo {
                annotator_id: annotation.annotator_id.clone(),
                video_id: annotation.video_id.clone(),
            });
        }
        by_video
            .entry(annotation.video_id.as_str())
            .or_default()
            .push(annotation);
    }

    let profiles: BTreeMap<String, PerceptionProfile> = by_video
        .iter()
        .map(|(id, rows)| (id.to_string(), PerceptionProfile::from_annotations(id, rows)))
        .collect();
    let unannotated = videos
        .keys()
        .filter(|id| !profiles.contains_key(*id))
        .cloned()
        .collect();

    Ok(Dataset {
        videos,
        profiles,
        unannotated,
        created_at,
    })
}

/// Category counts over the corpus and per-metric extremes over profiles.
pub fn dataset_stats(dataset: &Dataset) -> Result<DatasetStats, DatasetError> {
    if dataset.profiles.is_empty() {
        return Err(DatasetError::Empty);
    }
    let extents = Metric::ALL
        .into_iter()
        .map(|metric| {
            let means = dataset.profiles.values().map(|p| p.mean(metric));
            let min = means.clone().min().expect("non-empty");
            let max = means.max().expect("non-empty");
            (metric, MetricExtent { min, max })
        })
        .collect();
    Ok(DatasetStats {
        counts: dataset.category_counts(),
        extents,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Category;

    fn video(id: &str, category: Category) -> VideoRecord {
        VideoRecord::new(id, format!("title {id}"), format!("https://example.org/{id}"), category, 60)
    }

    fn ann(annotator: &str, video: &str, scores: [u8; 5], apps: &[Application]) -> AnnotationRecord {
        AnnotationRecord {
            annotator_id: annotator.into(),
            video_id: video.into(),
            tingles: scores[0],
            excitement: scores[1],
            calmness: scores[2],
            sadness: scores[3],
            stress: scores[4],
            applications: apps.iter().copied().collect(),
        }
    }

    #[test]
    fn single_annotation_profile_equals_scores() {
        let ds = aggregate_profiles(
            vec![video("v1", Category::A)],
            &[ann("p1", "v1", [4, 2, 6, 1, 3], &[Application::Sleep])],
        )
        .unwrap();
        let p = ds.profile("v1").unwrap();
        assert_eq!(p.tingles_mean, Rating::from_integer(4));
        assert_eq!(p.excitement_mean, Rating::from_integer(2));
        assert_eq!(p.calmness_mean, Rating::from_integer(6));
        assert_eq!(p.sadness_mean, Rating::from_integer(1));
        assert_eq!(p.stress_mean, Rating::from_integer(3));
        assert_eq!(p.annotator_count, 1);
    }

    #[test]
    fn two_annotations_average_and_union() {
        let ds = aggregate_profiles(
            vec![video("v1", Category::C)],
            &[
                ann("p1", "v1", [1, 1, 3, 1, 1], &[Application::Sleep]),
                ann("p2", "v1", [1, 1, 6, 1, 1], &[Application::Relaxation, Application::Sleep]),
            ],
        )
        .unwrap();
        let p = ds.profile("v1").unwrap();
        assert_eq!(p.calmness_mean, Rating::new(9, 2));
        assert_eq!(
            p.applications,
            BTreeSet::from([Application::Sleep, Application::Relaxation])
        );
        assert_eq!(p.annotator_count, 2);
    }

    #[test]
    fn unannotated_videos_are_warned_not_profiled() {
        let ds = aggregate_profiles(
            vec![video("v1", Category::A), video("v2", Category::B)],
            &[ann("p1", "v1", [1, 1, 1, 1, 1], &[])],
        )
        .unwrap();
        assert_eq!(ds.profiles().len(), 1);
        assert_eq!(ds.unannotated(), ["v2".to_string()]);
        assert_eq!(ds.warnings().len(), 1);
        assert_eq!(ds.videos().len(), 2);
    }

    #[test]
    fn unknown_video_reference_is_an_error() {
        let err = aggregate_profiles(
            vec![video("v1", Category::A)],
            &[ann("p1", "v9", [1, 1, 1, 1, 1], &[])],
        )
        .unwrap_err();
        assert!(matches!(err, DatasetError::UnknownVideo { ref video_id, .. } if video_id == "v9"));
    }

    #[test]
    fn stats_on_empty_dataset_is_an_error() {
        assert_eq!(dataset_stats(&Dataset::empty()), Err(DatasetError::Empty));
        let ds = aggregate_profiles(vec![video("v1", Category::A)], &[]).unwrap();
        assert_eq!(dataset_stats(&ds), Err(DatasetError::Empty));
    }

    #[test]
    fn singleton_stats_min_equals_max() {
        let ds = aggregate_profiles(
            vec![video("v1", Category::D)],
            &[
                ann("p1", "v1", [2, 3, 4, 5, 6], &[]),
                ann("p2", "v1", [3, 3, 5, 5, 7], &[]),
            ],
        )
        .unwrap();
        let stats = dataset_stats(&ds).unwrap();
        let p = ds.profile("v1").unwrap();
        for metric in Metric::ALL {
            let extent = stats.extents[&metric];
            assert_eq!(extent.min, p.mean(metric));
            assert_eq!(extent.max, p.mean(metric));
        }
        assert_eq!(stats.counts.count_d, 1);
        assert_eq!(stats.counts.total, 1);
    }

    #[test]
    fn export_renders_two_decimals() {
        let ds = aggregate_profiles(
            vec![video("v1", Category::A)],
            &[
                ann("p1", "v1", [4, 1, 3, 1, 1], &[Application::Sleep]),
                ann("p2", "v1", [5, 2, 6, 1, 2], &[]),
                ann("p3", "v1", [5, 2, 6, 1, 2], &[]),
            ],
        )
        .unwrap();
        let json = serde_json::to_string(&ds.export()).unwrap();
        assert!(json.contains(r#""tingles_mean":4.67"#), "{json}");
        assert!(json.contains(r#""calmness_mean":5.00"#), "{json}");
        assert!(json.contains(r#""spoken":true"#), "{json}");
        assert!(json.contains(r#""category":"A""#), "{json}");
        let value: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(value["videos"].as_array().unwrap().len(), 1);
        assert_eq!(value["profiles"][0]["applications"], serde_json::json!(["sleep"]));
    }
}
