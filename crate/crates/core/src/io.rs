//! Text and JSON encodings for families and splits.
//!
//! Family text format:
//!
//! ```text
//! # comment
//! universe 6 maxcard 2
//! 0 1
//! 2 5
//! -
//! ```
//!
//! One set per line as space-separated labels, `-` for the empty set, `#` starts a comment.
//! Output is canonical: labels ascending, sets in lexicographic order.
//!
//! Split text format: a `split <n> <m>` header followed by the strips in order, one per line.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::family::SetFamily;
use crate::set::{GroundSet, Universe};
use crate::split::Split;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyJson {
    pub n: usize,
    pub m: usize,
    pub sets: Vec<Vec<usize>>,
}

impl From<&SetFamily> for FamilyJson {
    fn from(family: &SetFamily) -> Self {
        FamilyJson {
            n: family.universe().size(),
            m: family.max_card(),
            sets: family.iter().map(GroundSet::to_vec).collect(),
        }
    }
}

impl TryFrom<FamilyJson> for SetFamily {
    type Error = Error;

    fn try_from(json: FamilyJson) -> Result<Self> {
        let universe = Universe::new(json.n)?;
        let sets = json
            .sets
            .into_iter()
            .map(|labels| set_from_labels(universe, labels))
            .collect::<Result<Vec<_>>>()?;
        SetFamily::new(universe, json.m, sets)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitJson {
    pub n: usize,
    pub strips: Vec<Vec<usize>>,
}

impl From<&Split> for SplitJson {
    fn from(split: &Split) -> Self {
        SplitJson {
            n: split.universe().size(),
            strips: split.to_label_lists(),
        }
    }
}

fn set_from_labels(universe: Universe, labels: Vec<usize>) -> Result<GroundSet> {
    let len = labels.len();
    let set = GroundSet::from_labels(universe, labels)?;
    if set.len() != len {
        return Err(Error::InvalidArgument(format!("repeated label in {set}")));
    }
    Ok(set)
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let line = line.split('#').next().unwrap_or("").trim();
        (!line.is_empty()).then_some((i + 1, line))
    })
}

fn parse_labels(line_no: usize, line: &str) -> Result<Vec<usize>> {
    if line == "-" {
        return Ok(Vec::new());
    }
    line.split_whitespace()
        .map(|tok| {
            tok.parse::<usize>().map_err(|_| Error::Parse {
                line: line_no,
                msg: format!("`{tok}` is not a label"),
            })
        })
        .collect()
}

fn header_numbers<'a>(line_no: usize, line: &'a str, keys: &[&str]) -> Result<Vec<usize>> {
    let toks: Vec<&'a str> = line.split_whitespace().collect();
    let bad = || Error::Parse {
        line: line_no,
        msg: format!("expected header `{}`", keys.iter().map(|k| format!("{k} <int>")).collect::<Vec<_>>().join(" ")),
    };
    if toks.len() != 2 * keys.len() {
        return Err(bad());
    }
    keys.iter()
        .enumerate()
        .map(|(i, key)| {
            if toks[2 * i] != *key {
                return Err(bad());
            }
            toks[2 * i + 1].parse::<usize>().map_err(|_| bad())
        })
        .collect()
}

pub fn parse_family_text(text: &str) -> Result<SetFamily> {
    let mut lines = content_lines(text);
    let (line_no, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        msg: "missing `universe <n> maxcard <m>` header".into(),
    })?;
    let nums = header_numbers(line_no, header, &["universe", "maxcard"])?;
    let universe = Universe::new(nums[0]).map_err(|e| Error::Parse {
        line: line_no,
        msg: e.to_string(),
    })?;
    let max_card = nums[1];
    let mut sets = Vec::new();
    for (line_no, line) in lines {
        let labels = parse_labels(line_no, line)?;
        let set = set_from_labels(universe, labels).map_err(|e| Error::Parse {
            line: line_no,
            msg: e.to_string(),
        })?;
        sets.push(set);
    }
    SetFamily::new(universe, max_card, sets)
}

pub fn family_to_text(family: &SetFamily) -> String {
    let mut out = format!("universe {} maxcard {}\n", family.universe().size(), family.max_card());
    for set in family {
        out.push_str(&labels_line(set));
        out.push('\n');
    }
    out
}

fn labels_line(set: &GroundSet) -> String {
    if set.is_empty() {
        return "-".into();
    }
    set.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

pub fn parse_family_json(text: &str) -> Result<SetFamily> {
    let json: FamilyJson = serde_json::from_str(text)?;
    SetFamily::try_from(json)
}

pub fn family_to_json(family: &SetFamily) -> String {
    serde_json::to_string(&FamilyJson::from(family)).expect("family serializes")
}

/// Picks JSON when the first non-space character is `{`, text otherwise.
pub fn parse_family(text: &str) -> Result<SetFamily> {
    if text.trim_start().starts_with('{') {
        parse_family_json(text)
    } else {
        parse_family_text(text)
    }
}

pub fn parse_split_text(text: &str) -> Result<Split> {
    let mut lines = content_lines(text);
    let (line_no, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        msg: "missing `split <n> <m>` header".into(),
    })?;
    let toks: Vec<&str> = header.split_whitespace().collect();
    let parsed = match toks.as_slice() {
        ["split", n, m] => n.parse::<usize>().ok().zip(m.parse::<usize>().ok()),
        _ => None,
    };
    let (n, m) = parsed.ok_or(Error::Parse {
        line: line_no,
        msg: "expected header `split <n> <m>`".into(),
    })?;
    let strips = lines
        .map(|(line_no, line)| parse_labels(line_no, line))
        .collect::<Result<Vec<_>>>()?;
    if strips.len() != m {
        return Err(Error::Parse {
            line: line_no,
            msg: format!("header announces {m} strips, found {}", strips.len()),
        });
    }
    Split::from_label_lists(n, &strips)
}

pub fn split_to_text(split: &Split) -> String {
    let mut out = format!("split {} {}\n", split.universe().size(), split.rank());
    for strip in split.strips() {
        out.push_str(&labels_line(strip));
        out.push('\n');
    }
    out
}

pub fn parse_split(text: &str) -> Result<Split> {
    if text.trim_start().starts_with('{') {
        let json: SplitJson = serde_json::from_str(text)?;
        Split::from_label_lists(json.n, &json.strips)
    } else {
        parse_split_text(text)
    }
}
