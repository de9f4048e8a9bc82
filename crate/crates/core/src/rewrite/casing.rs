use std::fmt;
use std::sync::LazyLock;

use regex::Regex;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CaseStyle {
    Camel,
    Snake,
    Pascal,
    ScreamingSnake,
}

impl fmt::Display for CaseStyle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CaseStyle::Camel => "camel",
            CaseStyle::Snake => "snake",
            CaseStyle::Pascal => "pascal",
            CaseStyle::ScreamingSnake => "screaming_snake",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("`{identifier}` is not {style} case")]
pub struct StyleError {
    pub identifier: String,
    pub style: CaseStyle,
}

static SNAKE: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"^[a-z0-9]+(?:_[A-Za-z0-9]+)+$").unwrap());
static CAMEL: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(r"^[a-z]+(?:[A-Z]+[A-Za-z0-9]+[A-Za-z0-9]*)+$").unwrap()
});
static PASCAL: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"^[A-Z][a-z0-9]+(?:[A-Z][A-Za-z0-9]*)*$").unwrap());
static SCREAMING: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"^[A-Z0-9]+(?:_[A-Z0-9]+)+$").unwrap());

/// Whether the whole identifier matches the style's pattern.
pub fn match_case_style(identifier: &str, style: CaseStyle) -> bool {
    let re = match style {
        CaseStyle::Camel => &CAMEL,
        CaseStyle::Snake => &SNAKE,
        CaseStyle::Pascal => &PASCAL,
        CaseStyle::ScreamingSnake => &SCREAMING,
    };
    re.is_match(identifier)
}

/// Split an identifier into lower-cased segments according to `style`.
///
/// Underscore styles split at underscores. Capitalised styles start a new
/// segment at each upper-case letter not preceded by another upper-case
/// letter, so capital runs stay together and digits stick to the segment
/// before them.
pub fn segments(identifier: &str, style: CaseStyle) -> Vec<String> {
    match style {
        CaseStyle::Snake | CaseStyle::ScreamingSnake => identifier
            .split('_')
            .map(|s| s.to_ascii_lowercase())
            .collect(),
        CaseStyle::Camel | CaseStyle::Pascal => {
            let mut out: Vec<String> = Vec::new();
            let mut prev_upper = false;
            for c in identifier.chars() {
                let upper = c.is_ascii_uppercase();
                if out.is_empty() || (upper && !prev_upper) {
                    out.push(String::new());
                }
                out.last_mut().unwrap().push(c.to_ascii_lowercase());
                prev_upper = upper;
            }
            out
        }
    }
}

fn capitalise(seg: &str) -> String {
    let mut chars = seg.chars();
    match chars.next() {
        Some(first) => first.to_ascii_uppercase().to_string() + chars.as_str(),
        None => String::new(),
    }
}

fn join(segs: &[String], style: CaseStyle) -> String {
    match style {
        CaseStyle::Snake => segs.join("_"),
        CaseStyle::ScreamingSnake => segs.join("_").to_ascii_uppercase(),
        CaseStyle::Pascal => segs.iter().map(|s| capitalise(s)).collect(),
        CaseStyle::Camel => segs
            .iter()
            .enumerate()
            .map(|(i, s)| if i == 0 { s.clone() } else { capitalise(s) })
            .collect(),
    }
}

/// Re-join the identifier's segments in `target` style.
pub fn convert_case(
    identifier: &str,
    source: CaseStyle,
    target: CaseStyle,
) -> Result<String, StyleError> {
    if !match_case_style(identifier, source) {
        return Err(StyleError {
            identifier: identifier.to_owned(),
            style: source,
        });
    }
    Ok(join(&segments(identifier, source), target))
}
