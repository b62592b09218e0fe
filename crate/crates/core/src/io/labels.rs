//! Ground-truth range files.
//!
//! One inclusive 1-based range `start-end` per line (several may share a
//! line separated by commas), plus one `total N` line. `#` starts a comment.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelSpec {
    pub ranges: Vec<(usize, usize)>,
    pub total_frames: usize,
}

impl LabelSpec {
    pub fn new(ranges: Vec<(usize, usize)>, total_frames: usize) -> Result<Self> {
        let mut prev_end = 0;
        for (k, &(start, end)) in ranges.iter().enumerate() {
            if start == 0 || start > end {
                return Err(Error::MalformedRange {
                    line: k + 1,
                    text: format!("{start}-{end}"),
                });
            }
            if end > total_frames {
                return Err(Error::OutOfBounds {
                    start,
                    end,
                    total: total_frames,
                });
            }
            if start <= prev_end {
                return Err(Error::MalformedRange {
                    line: k + 1,
                    text: format!("{start}-{end} overlaps or precedes the previous range"),
                });
            }
            prev_end = end;
        }
        Ok(Self { ranges, total_frames })
    }

    /// `truth[t - 1]` is true when frame `t` lies in a range.
    pub fn truth(&self) -> Vec<bool> {
        let mut t = vec![false; self.total_frames];
        for &(s, e) in &self.ranges {
            t[s - 1..e].iter_mut().for_each(|v| *v = true);
        }
        t
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for (s, e) in &self.ranges {
            out.push_str(&format!("{s}-{e}\n"));
        }
        out.push_str(&format!("total {}\n", self.total_frames));
        out
    }
}

fn parse_range(part: &str, line: usize) -> Result<(usize, usize)> {
    let malformed = || Error::MalformedRange {
        line,
        text: part.to_string(),
    };
    let (a, b) = part
        .split_once(['-', '\u{2013}'])
        .ok_or_else(malformed)?;
    let start = a.trim().parse().map_err(|_| malformed())?;
    let end = b.trim().parse().map_err(|_| malformed())?;
    if start == 0 || start > end {
        return Err(malformed());
    }
    Ok((start, end))
}

pub fn parse_labels(text: &str) -> Result<LabelSpec> {
    let mut ranges = Vec::new();
    let mut total = None;
    let mut positions = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("total") {
            let n = rest.trim().parse().map_err(|_| Error::MalformedRange {
                line: k + 1,
                text: raw.to_string(),
            })?;
            if total.replace(n).is_some() {
                return Err(Error::MalformedRange {
                    line: k + 1,
                    text: "duplicate total line".into(),
                });
            }
            continue;
        }
        for part in line.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            ranges.push(parse_range(part, k + 1)?);
            positions.push(k + 1);
        }
    }
    let total_frames = total.ok_or(Error::MalformedRange {
        line: 0,
        text: "missing \"total N\" line".into(),
    })?;
    LabelSpec::new(ranges, total_frames).map_err(|e| match e {
        Error::MalformedRange { line, text } => Error::MalformedRange {
            line: positions.get(line - 1).copied().unwrap_or(line),
            text,
        },
        other => other,
    })
}
