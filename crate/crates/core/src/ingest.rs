//! Manifest and annotation file formats.
//!
//! Both are comma-separated text with a fixed header row. Titles may be
//! double-quoted with `""` escaping. Parsing collects every row-level problem
//! rather than stopping at the first one, so a validation run reports the
//! whole file at once.

use std::collections::{BTreeSet, HashSet};
use std::io::{Read, Write};

use csv::{QuoteStyle, ReaderBuilder, StringRecord, WriterBuilder};
use serde::Serialize;

use crate::error::{ParseError, ParseErrors};
use crate::model::{Application, Category, Metric, LIKERT_MAX, LIKERT_MIN};

pub const MANIFEST_HEADER: [&str; 5] = ["video_id", "title", "url", "category", "duration_seconds"];

pub const ANNOTATION_HEADER: [&str; 8] = [
    "annotator_id",
    "video_id",
    "tingles",
    "excitement",
    "calmness",
    "sadness",
    "stress",
    "applications",
];

/// One corpus entry.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VideoRecord {
    pub video_id: String,
    pub title: String,
    pub url: String,
    pub category: Category,
    pub duration_seconds: u32,
    /// Derived from `category`; never read from input.
    pub spoken: bool,
}

impl VideoRecord {
    pub fn new(
        video_id: impl Into<String>,
        title: impl Into<String>,
        url: impl Into<String>,
        category: Category,
        duration_seconds: u32,
    ) -> Self {
        Self {
            video_id: video_id.into(),
            title: title.into(),
            url: url.into(),
            category,
            duration_seconds,
            spoken: category.is_spoken(),
        }
    }
}

/// One annotator's answers for one video.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AnnotationRecord {
    pub annotator_id: String,
    pub video_id: String,
    pub tingles: u8,
    pub excitement: u8,
    pub calmness: u8,
    pub sadness: u8,
    pub stress: u8,
    pub applications: BTreeSet<Application>,
}

impl AnnotationRecord {
    pub fn score(&self, metric: Metric) -> u8 {
        match metric {
            Metric::Tingles => self.tingles,
            Metric::Excitement => self.excitement,
            Metric::Calmness => self.calmness,
            Metric::Sadness => self.sadness,
            Metric::Stress => self.stress,
        }
    }

    pub fn scores(&self) -> [u8; 5] {
        Metric::ALL.map(|m| self.score(m))
    }
}

fn question_label(metric: Metric) -> &'static str {
    match metric {
        Metric::Tingles => "tingles (Q1)",
        Metric::Excitement => "excitement (Q2)",
        Metric::Calmness => "calmness (Q3)",
        Metric::Sadness => "sadness (Q4)",
        Metric::Stress => "stress (Q5)",
    }
}

fn line_of(record: &StringRecord) -> u64 {
    record.position().map(|p| p.line()).unwrap_or(0)
}

fn csv_failure(err: &csv::Error) -> ParseError {
    let line = err.position().map(|p| p.line()).unwrap_or(0);
    match err.kind() {
        csv::ErrorKind::UnequalLengths { expected_len, len, .. } => ParseError::new(
            line,
            "row",
            format!("expected {expected_len} fields, found {len}"),
        ),
        csv::ErrorKind::Utf8 { .. } => ParseError::new(line, "row", "input is not valid UTF-8"),
        _ => ParseError::new(line, "row", err.to_string()),
    }
}

fn open_reader<R: Read>(
    raw: R,
    expected: &[&str],
) -> Result<csv::Reader<R>, ParseErrors> {
    let mut reader = ReaderBuilder::new().has_headers(true).from_reader(raw);
    let header = reader
        .headers()
        .map_err(|e| ParseErrors::single(csv_failure(&e)))?;
    if header.iter().ne(expected.iter().copied()) {
        return Err(ParseErrors::single(ParseError::new(
            1,
            "header",
            format!("expected `{}`", expected.join(",")),
        )));
    }
    Ok(reader)
}

/// Parse a video manifest, deriving `spoken` from each row's category.
pub fn parse_video_manifest<R: Read>(raw: R) -> Result<Vec<VideoRecord>, ParseErrors> {
    let mut reader = open_reader(raw, &MANIFEST_HEADER)?;
    let mut videos = Vec::new();
    let mut errors = Vec::new();
    let mut seen = HashSet::new();

    for row in reader.records() {
        let row = match row {
            Ok(row) => row,
            Err(e) => {
                errors.push(csv_failure(&e));
                continue;
            }
        };
        let line = line_of(&row);
        match parse_video_row(&row, line) {
            Ok(video) => {
                if !seen.insert(video.video_id.clone()) {
                    errors.push(ParseError::new(
                        line,
                        "video_id",
                        format!("duplicate video_id {:?}", video.video_id),
                    ));
                } else {
                    videos.push(video);
                }
            }
            Err(e) => errors.push(e),
        }
    }

    if errors.is_empty() {
        Ok(videos)
    } else {
        Err(ParseErrors(errors))
    }
}

fn parse_video_row(row: &StringRecord, line: u64) -> Result<VideoRecord, ParseError> {
    let video_id = &row[0];
    if video_id.is_empty() {
        return Err(ParseError::new(line, "video_id", "must be non-empty"));
    }
    let category: Category = row[3]
        .parse()
        .map_err(|e: crate::error::DomainError| ParseError::new(line, "category", e.to_string()))?;
    let duration: i64 = row[4].trim().parse().map_err(|_| {
        ParseError::new(line, "duration_seconds", format!("not an integer: {:?}", &row[4]))
    })?;
    let duration = u32::try_from(duration)
        .ok()
        .filter(|d| *d > 0)
        .ok_or_else(|| ParseError::new(line, "duration_seconds", format!("must be positive, got {duration}")))?;
    Ok(VideoRecord::new(video_id, &row[1], &row[2], category, duration))
}

/// Parse an annotation file; every score must be a Likert answer in 1..=7.
pub fn parse_annotations<R: Read>(raw: R) -> Result<Vec<AnnotationRecord>, ParseErrors> {
    let mut reader = open_reader(raw, &ANNOTATION_HEADER)?;
    let mut annotations = Vec::new();
    let mut errors = Vec::new();
    let mut seen = HashSet::new();

    for row in reader.records() {
        let row = match row {
            Ok(row) => row,
            Err(e) => {
                errors.push(csv_failure(&e));
                continue;
            }
        };
        let line = line_of(&row);
        match parse_annotation_row(&row, line) {
            Ok(record) => {
                let key = (record.annotator_id.clone(), record.video_id.clone());
                if seen.insert(key) {
                    annotations.push(record);
                } else {
                    errors.push(ParseError::new(
                        line,
                        "video_id",
                        format!(
                            "duplicate annotation of {:?} by {:?}",
                            record.video_id, record.annotator_id
                        ),
                    ));
                }
            }
            Err(e) => errors.push(e),
        }
    }

    if errors.is_empty() {
        Ok(annotations)
    } else {
        Err(ParseErrors(errors))
    }
}

fn parse_annotation_row(row: &StringRecord, line: u64) -> Result<AnnotationRecord, ParseError> {
    let annotator_id = &row[0];
    let video_id = &row[1];
    if annotator_id.is_empty() {
        return Err(ParseError::new(line, "annotator_id", "must be non-empty"));
    }
    if video_id.is_empty() {
        return Err(ParseError::new(line, "video_id", "must be non-empty"));
    }

    let mut scores = [0u8; 5];
    for metric in Metric::ALL {
        let text = &row[2 + metric.index()];
        let value: i64 = text.trim().parse().map_err(|_| {
            ParseError::new(line, question_label(metric), format!("not an integer: {text:?}"))
        })?;
        if !(LIKERT_MIN as i64..=LIKERT_MAX as i64).contains(&value) {
            return Err(ParseError::new(
                line,
                question_label(metric),
                format!("score {value} outside [{LIKERT_MIN}, {LIKERT_MAX}]"),
            ));
        }
        scores[metric.index()] = value as u8;
    }

    let mut applications = BTreeSet::new();
    let field = &row[7];
    if !field.is_empty() {
        for name in field.split('|') {
            let app: Application = name
                .parse()
                .map_err(|_| ParseError::new(line, "applications (Q6)", format!("unknown application {name:?}")))?;
            if !applications.insert(app) {
                return Err(ParseError::new(
                    line,
                    "applications (Q6)",
                    format!("application {name:?} listed twice"),
                ));
            }
        }
    }

    let [tingles, excitement, calmness, sadness, stress] = scores;
    Ok(AnnotationRecord {
        annotator_id: annotator_id.to_string(),
        video_id: video_id.to_string(),
        tingles,
        excitement,
        calmness,
        sadness,
        stress,
        applications,
    })
}

pub fn write_video_manifest<W: Write>(out: W, videos: &[VideoRecord]) -> csv::Result<()> {
    let mut writer = WriterBuilder::new()
        .quote_style(QuoteStyle::Necessary)
        .from_writer(out);
    writer.write_record(MANIFEST_HEADER)?;
    for v in videos {
        writer.write_record([
            v.video_id.as_str(),
            v.title.as_str(),
            v.url.as_str(),
            &v.category.to_string(),
            &v.duration_seconds.to_string(),
        ])?;
    }
    writer.flush()?;
    Ok(())
}

pub fn write_annotations<W: Write>(out: W, annotations: &[AnnotationRecord]) -> csv::Result<()> {
    let mut writer = WriterBuilder::new()
        .quote_style(QuoteStyle::Necessary)
        .from_writer(out);
    writer.write_record(ANNOTATION_HEADER)?;
    for a in annotations {
        let apps = a
            .applications
            .iter()
            .map(|app| app.as_str())
            .collect::<Vec<_>>()
            .join("|");
        let mut row: Vec<String> = vec![a.annotator_id.clone(), a.video_id.clone()];
        row.extend(a.scores().iter().map(u8::to_string));
        row.push(apps);
        writer.write_record(&row)?;
    }
    writer.flush()?;
    Ok(())
}
