//! Reviews CSV: header `item_id,rating,polarity`, comma separated, `.` as
//! decimal point, LF line endings, no quoting.
//!
//! Line numbers in diagnostics count the header as line 1.

use crate::consensus::{ReviewRecord, Strictness};
use crate::Error;

pub const REVIEWS_CSV_HEADER: &str = "item_id,rating,polarity";

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ParsedReviews {
    pub records: Vec<ReviewRecord>,
    /// `(line, reason)` of rows dropped in lenient mode.
    pub skipped: Vec<(usize, String)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ReviewsError {
    /// The file does not start with the expected header.
    Header(String),
    Row {
        line: usize,
        reason: String,
    },
}

impl std::fmt::Display for ReviewsError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Header(found) => write!(
                f,
                "line 1: expected header `{REVIEWS_CSV_HEADER}`, found {found:?}"
            ),
            Self::Row { line, reason } => write!(f, "line {line}: {reason}"),
        }
    }
}

fn parse_row(line: &str) -> Result<ReviewRecord, String> {
    if line.is_empty() {
        return Err("blank line".into());
    }
    if line.contains('\r') {
        return Err("carriage return in row (expected LF line endings)".into());
    }
    let fields: Vec<&str> = line.split(',').collect();
    let [item_id, rating, polarity] = fields[..] else {
        return Err(format!("expected 3 fields, found {}", fields.len()));
    };
    let number = |name: &str, text: &str| {
        text.parse::<f64>()
            .map_err(|_| format!("{name} {text:?} is not a decimal number"))
    };
    let record = ReviewRecord {
        item_id: item_id.to_owned(),
        rating: number("rating", rating)?,
        polarity: number("polarity", polarity)?,
    };
    record.validate().map_err(|e: Error| e.to_string())?;
    Ok(record)
}

pub fn parse_reviews(text: &str, strictness: Strictness) -> Result<ParsedReviews, ReviewsError> {
    let mut lines = text.split('\n');
    let header = lines.next().unwrap_or("");
    if header != REVIEWS_CSV_HEADER {
        return Err(ReviewsError::Header(header.to_owned()));
    }
    let mut body: Vec<&str> = lines.collect();
    if body.last() == Some(&"") {
        body.pop();
    }

    let mut parsed = ParsedReviews::default();
    for (i, line) in body.into_iter().enumerate() {
        let line_no = i + 2;
        match parse_row(line) {
            Ok(record) => parsed.records.push(record),
            Err(reason) => match strictness {
                Strictness::Strict => {
                    return Err(ReviewsError::Row {
                        line: line_no,
                        reason,
                    })
                }
                Strictness::Lenient => parsed.skipped.push((line_no, reason)),
            },
        }
    }
    Ok(parsed)
}
