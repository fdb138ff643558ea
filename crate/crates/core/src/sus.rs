//! System Usability Scale scoring.
//!
//! Ten items answered 1..=5. Odd items are positively phrased and contribute
//! `item - 1`; even items are negatively phrased and contribute `5 - item`.
//! The summed contribution (0..=40) is scaled by 2.5 onto 0..=100.

use std::io::Read;

use serde::{Deserialize, Serialize};

use crate::error::{ParseError, ParseErrors, SusError};

pub const SUS_ITEMS: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawSusResponse")]
pub struct SusResponse {
    pub participant_id: String,
    items: [u8; SUS_ITEMS],
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSusResponse {
    participant_id: String,
    items: Vec<i64>,
}

impl TryFrom<RawSusResponse> for SusResponse {
    type Error = SusError;

    fn try_from(raw: RawSusResponse) -> Result<Self, Self::Error> {
        SusResponse::new(raw.participant_id, &raw.items)
    }
}

impl SusResponse {
    pub fn new(participant_id: impl Into<String>, items: &[i64]) -> Result<Self, SusError> {
        if items.len() != SUS_ITEMS {
            return Err(SusError::ItemCount(items.len()));
        }
        let mut checked = [0u8; SUS_ITEMS];
        for (idx, &value) in items.iter().enumerate() {
            if !(1..=5).contains(&value) {
                return Err(SusError::ItemOutOfRange {
                    item: idx + 1,
                    value,
                });
            }
            checked[idx] = value as u8;
        }
        Ok(SusResponse {
            participant_id: participant_id.into(),
            items: checked,
        })
    }

    pub fn items(&self) -> &[u8; SUS_ITEMS] {
        &self.items
    }

    /// Summed item contributions, 0..=40.
    pub fn raw_contribution(&self) -> u32 {
        self.items
            .iter()
            .enumerate()
            .map(|(idx, &item)| {
                // idx 0 is item 1 (odd, positive)
                if idx % 2 == 0 {
                    item as u32 - 1
                } else {
                    5 - item as u32
                }
            })
            .sum()
    }
}

pub fn sus_score(response: &SusResponse) -> f64 {
    response.raw_contribution() as f64 * 2.5
}

pub fn mean_sus_score(responses: &[SusResponse]) -> Result<f64, SusError> {
    if responses.is_empty() {
        return Err(SusError::Empty);
    }
    Ok(responses.iter().map(sus_score).sum::<f64>() / responses.len() as f64)
}

/// Parse a `participant_id,i1,...,i10` file.
pub fn parse_sus_responses<R: Read>(raw: R) -> Result<Vec<SusResponse>, ParseErrors> {
    let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(raw);
    let expected: Vec<String> = std::iter::once("participant_id".to_string())
        .chain((1..=SUS_ITEMS).map(|i| format!("i{i}")))
        .collect();
    let header = reader
        .headers()
        .map_err(|e| ParseErrors::single(ParseError::new(1, "header", e.to_string())))?;
    if header.iter().ne(expected.iter().map(String::as_str)) {
        return Err(ParseErrors::single(ParseError::new(
            1,
            "header",
            format!("expected `{}`", expected.join(",")),
        )));
    }

    let mut responses = Vec::new();
    let mut errors = Vec::new();
    for row in reader.records() {
        let row = match row {
            Ok(row) => row,
            Err(e) => {
                let line = e.position().map(|p| p.line()).unwrap_or(0);
                errors.push(ParseError::new(line, "row", e.to_string()));
                continue;
            }
        };
        let line = row.position().map(|p| p.line()).unwrap_or(0);
        let parsed: Result<Vec<i64>, ParseError> = (1..=SUS_ITEMS)
            .map(|i| {
                row[i]
                    .trim()
                    .parse()
                    .map_err(|_| ParseError::new(line, format!("i{i}"), format!("not an integer: {:?}", &row[i])))
            })
            .collect();
        match parsed.and_then(|items| {
            SusResponse::new(&row[0], &items).map_err(|e| {
                let field = match e {
                    SusError::ItemOutOfRange { item, .. } => format!("i{item}"),
                    _ => "row".to_string(),
                };
                ParseError::new(line, field, e.to_string())
            })
        }) {
            Ok(response) => responses.push(response),
            Err(e) => errors.push(e),
        }
    }
    if errors.is_empty() {
        Ok(responses)
    } else {
        Err(ParseErrors(errors))
    }
}
