//! Corpus vocabulary: categories, watching purposes, perception metrics and
//! the exact rational value type used for every aggregated score.

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::DomainError;

/// Lowest Likert answer.
pub const LIKERT_MIN: u8 = 1;
/// Highest Likert answer.
pub const LIKERT_MAX: u8 = 7;

/// Video category. A and B contain speech, C and D do not.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Category {
    /// Spoken, high interactivity.
    A,
    /// Spoken, low interactivity.
    B,
    /// No speech, one or a few contents.
    C,
    /// No speech, multiple contents.
    D,
}

impl Category {
    pub const ALL: [Category; 4] = [Category::A, Category::B, Category::C, Category::D];

    pub fn is_spoken(self) -> bool {
        matches!(self, Category::A | Category::B)
    }

    pub fn letter(self) -> char {
        match self {
            Category::A => 'A',
            Category::B => 'B',
            Category::C => 'C',
            Category::D => 'D',
        }
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

impl FromStr for Category {
    type Err = DomainError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "A" => Ok(Category::A),
            "B" => Ok(Category::B),
            "C" => Ok(Category::C),
            "D" => Ok(Category::D),
            _ => Err(DomainError::UnknownCategory(s.to_string())),
        }
    }
}

/// Watching purpose selected by annotators (multi-choice).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Application {
    Sleep,
    Relaxation,
    Concentration,
    Companionship,
    Attention,
}

impl Application {
    pub const ALL: [Application; 5] = [
        Application::Sleep,
        Application::Relaxation,
        Application::Concentration,
        Application::Companionship,
        Application::Attention,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Application::Sleep => "sleep",
            Application::Relaxation => "relaxation",
            Application::Concentration => "concentration",
            Application::Companionship => "companionship",
            Application::Attention => "attention",
        }
    }
}

impl fmt::Display for Application {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Application {
    type Err = DomainError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Application::ALL
            .into_iter()
            .find(|app| app.as_str() == s)
            .ok_or_else(|| DomainError::UnknownApplication(s.to_string()))
    }
}

/// The five Likert-scored perception metrics, in questionnaire order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    Tingles,
    Excitement,
    Calmness,
    Sadness,
    Stress,
}

impl Metric {
    pub const ALL: [Metric; 5] = [
        Metric::Tingles,
        Metric::Excitement,
        Metric::Calmness,
        Metric::Sadness,
        Metric::Stress,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Metric::Tingles => "tingles",
            Metric::Excitement => "excitement",
            Metric::Calmness => "calmness",
            Metric::Sadness => "sadness",
            Metric::Stress => "stress",
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// An exact rational perception value.
///
/// Means and slider endpoints are compared exactly; conversion to floating
/// point only happens when rendering. On the wire a `Rating` is a JSON
/// number, and decoding reads the number's shortest decimal form exactly,
/// so `2.1` becomes 21/10 rather than the nearest binary double.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rating(Ratio<i64>);

impl Rating {
    pub const MIN: Rating = Rating::from_integer(LIKERT_MIN as i64);
    pub const MAX: Rating = Rating::from_integer(LIKERT_MAX as i64);

    pub const fn from_integer(value: i64) -> Self {
        Rating(Ratio::new_raw(value, 1))
    }

    /// `numer / denom`; panics on a zero denominator.
    pub fn new(numer: i64, denom: i64) -> Self {
        Rating(Ratio::new(numer, denom))
    }

    /// Value of `tenths / 10`, the slider grid unit.
    pub fn from_tenths(tenths: i64) -> Self {
        Rating::new(tenths, 10)
    }

    pub fn ratio(self) -> Ratio<i64> {
        self.0
    }

    pub fn to_f64(self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    pub fn in_likert_range(self) -> bool {
        Rating::MIN <= self && self <= Rating::MAX
    }

    /// Parse a plain decimal literal (`"4"`, `"4.25"`, `"-1.5"`, `"2e0"`) exactly.
    pub fn parse_decimal(text: &str) -> Result<Self, DomainError> {
        let bad = || DomainError::InvalidNumber(text.to_string());
        let (mantissa, exponent) = match text.find(['e', 'E']) {
            Some(pos) => (
                &text[..pos],
                text[pos + 1..].parse::<i32>().map_err(|_| bad())?,
            ),
            None => (text, 0),
        };
        let (negative, digits) = match mantissa.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, mantissa),
        };
        let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
        if int_part.is_empty() && frac_part.is_empty()
            || !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit())
        {
            return Err(bad());
        }
        // Trailing zeros carry no value and only cost range.
        let frac_part = frac_part.trim_end_matches('0');
        let scale = frac_part.len() as i32 - exponent;
        let joined = format!("{int_part}{frac_part}");
        let joined = joined.trim_start_matches('0');
        let mut numer: i64 = if joined.is_empty() {
            0
        } else {
            joined.parse().map_err(|_| bad())?
        };
        if negative {
            numer = -numer;
        }
        let ratio = if scale >= 0 {
            let denom = 10i64.checked_pow(scale as u32).ok_or_else(bad)?;
            Ratio::new(numer, denom)
        } else {
            let factor = 10i64.checked_pow((-scale) as u32).ok_or_else(bad)?;
            Ratio::from_integer(numer.checked_mul(factor).ok_or_else(bad)?)
        };
        Ok(Rating(ratio))
    }

    /// Largest multiple of `1 / steps_per_unit` not above the value.
    pub fn floor_to_step(self, steps_per_unit: i64) -> Rating {
        let scaled = self.0 * steps_per_unit;
        Rating(Ratio::new(scaled.floor().to_integer(), steps_per_unit))
    }

    /// Smallest multiple of `1 / steps_per_unit` not below the value.
    pub fn ceil_to_step(self, steps_per_unit: i64) -> Rating {
        let scaled = self.0 * steps_per_unit;
        Rating(Ratio::new(scaled.ceil().to_integer(), steps_per_unit))
    }

    /// Decimal rendering with exactly `places` fractional digits, rounding
    /// half away from zero.
    pub fn to_fixed(self, places: u32) -> String {
        let scale = 10i64.pow(places);
        let rounded = (self.0 * scale).round().to_integer();
        if places == 0 {
            return rounded.to_string();
        }
        let sign = if rounded < 0 { "-" } else { "" };
        let abs = rounded.unsigned_abs();
        let scale = scale as u64;
        format!(
            "{sign}{}.{:0width$}",
            abs / scale,
            abs % scale,
            width = places as usize
        )
    }

    pub fn is_zero(self) -> bool {
        self.0.is_zero()
    }
}

impl fmt::Display for Rating {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match f.precision() {
            Some(places) => f.write_str(&self.to_fixed(places as u32)),
            None => write!(f, "{}", self.to_f64()),
        }
    }
}

impl Serialize for Rating {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_f64(self.to_f64())
    }
}

impl<'de> Deserialize<'de> for Rating {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let number = serde_json::Number::deserialize(deserializer)?;
        Rating::parse_decimal(&number.to_string()).map_err(serde::de::Error::custom)
    }
}

/// Serializes a rating as a JSON number with exactly two decimals (`4.50`).
pub(crate) fn serialize_two_decimals<S: Serializer>(
    rating: &Rating,
    serializer: S,
) -> Result<S::Ok, S::Error> {
    let raw = serde_json::value::RawValue::from_string(rating.to_fixed(2))
        .map_err(serde::ser::Error::custom)?;
    raw.serialize(serializer)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spoken_follows_category() {
        assert!(Category::A.is_spoken());
        assert!(Category::B.is_spoken());
        assert!(!Category::C.is_spoken());
        assert!(!Category::D.is_spoken());
    }

    #[test]
    fn category_parse_is_case_insensitive() {
        assert_eq!("c".parse::<Category>().unwrap(), Category::C);
        assert!("E".parse::<Category>().is_err());
        assert!("AB".parse::<Category>().is_err());
    }

    #[test]
    fn application_names_round_trip() {
        for app in Application::ALL {
            assert_eq!(app.as_str().parse::<Application>().unwrap(), app);
        }
        assert!("gaming".parse::<Application>().is_err());
        assert!("Sleep".parse::<Application>().is_err());
    }

    #[test]
    fn decimal_parse_is_exact() {
        assert_eq!(Rating::parse_decimal("2.1").unwrap(), Rating::new(21, 10));
        assert_eq!(Rating::parse_decimal("7").unwrap(), Rating::MAX);
        assert_eq!(Rating::parse_decimal("4.50").unwrap(), Rating::new(9, 2));
        assert_eq!(Rating::parse_decimal("0.5").unwrap(), Rating::new(1, 2));
        assert_eq!(Rating::parse_decimal(".5").unwrap(), Rating::new(1, 2));
        assert_eq!(Rating::parse_decimal("-1.25").unwrap(), Rating::new(-5, 4));
        assert_eq!(Rating::parse_decimal("25e-1").unwrap(), Rating::new(5, 2));
        assert_eq!(Rating::parse_decimal("3E2").unwrap(), Rating::from_integer(300));
        for bad in ["", "abc", "1.2.3", "-", ".", "1e", "1,5"] {
            assert!(Rating::parse_decimal(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn json_number_decodes_exactly() {
        let r: Rating = serde_json::from_str("2.1").unwrap();
        assert_eq!(r, Rating::from_tenths(21));
        let r: Rating = serde_json::from_str("5").unwrap();
        assert_eq!(r, Rating::from_integer(5));
        assert!(serde_json::from_str::<Rating>("\"5\"").is_err());
    }

    #[test]
    fn fixed_rendering_rounds_half_away() {
        assert_eq!(Rating::new(9, 2).to_fixed(2), "4.50");
        assert_eq!(Rating::new(7, 3).to_fixed(2), "2.33");
        assert_eq!(Rating::new(8, 3).to_fixed(2), "2.67");
        assert_eq!(Rating::new(33, 8).to_fixed(2), "4.13");
        assert_eq!(Rating::from_integer(7).to_fixed(2), "7.00");
        assert_eq!(format!("{:.1}", Rating::new(1, 4)), "0.3");
    }

    #[test]
    fn step_rounding_is_outward() {
        let third = Rating::new(7, 3);
        assert_eq!(third.floor_to_step(10), Rating::from_tenths(23));
        assert_eq!(third.ceil_to_step(10), Rating::from_tenths(24));
        let on_grid = Rating::from_tenths(45);
        assert_eq!(on_grid.floor_to_step(10), on_grid);
        assert_eq!(on_grid.ceil_to_step(10), on_grid);
    }
}
