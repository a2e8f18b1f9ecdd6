use crate::error::{Error, Result};

/// Primary and optional secondary citizenship as spelled in the source field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Citizenship {
    pub primary: String,
    pub secondary: Option<String>,
    /// More than two citizenships were listed; everything after the second was discarded.
    pub truncated: bool,
}

/// Splits a citizenship field on runs of two or more spaces.
///
/// A single space belongs to a multi-word name ("DR Congo"). Only the first
/// two entries are kept.
pub fn parse_citizenship(row_id: &str, raw: &str) -> Result<Citizenship> {
    let mut tokens = split_double_space(raw.trim());
    let primary = match tokens.next() {
        Some(p) => p.to_owned(),
        None => {
            return Err(Error::MalformedRecord {
                row_id: row_id.to_owned(),
                reason: "empty citizenship field".into(),
            })
        }
    };
    let secondary = tokens.next().map(str::to_owned);
    let truncated = tokens.next().is_some();
    Ok(Citizenship { primary, secondary, truncated })
}

fn split_double_space(s: &str) -> impl Iterator<Item = &str> {
    let mut rest = s;
    std::iter::from_fn(move || {
        let rest_trimmed = rest.trim_start();
        if rest_trimmed.is_empty() {
            return None;
        }
        match rest_trimmed.find("  ") {
            Some(pos) => {
                let token = &rest_trimmed[..pos];
                rest = &rest_trimmed[pos..];
                Some(token.trim_end())
            }
            None => {
                rest = "";
                Some(rest_trimmed.trim_end())
            }
        }
    })
}
