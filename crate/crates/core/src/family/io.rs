//! Family files.
//!
//! JSON: `{"n": 8, "sets": [[1,2,3,4],[1,5,7]]}`. Text: the first line is
//! `n`, then one member per line as space-separated elements (an empty line
//! is the empty member, lines starting with `#` are skipped). Both writers
//! preserve member order and emit sorted elements.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::Family;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Text,
}

/// Serialized shape of a family.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyFile {
    pub n: usize,
    pub sets: Vec<Vec<usize>>,
}

impl From<&Family> for FamilyFile {
    fn from(f: &Family) -> Self {
        FamilyFile {
            n: f.n(),
            sets: f.to_lists(),
        }
    }
}

impl FamilyFile {
    pub fn into_family(self) -> Result<Family> {
        if self.n == 0 {
            return Err(Error::Parse {
                location: "field `n`".into(),
                message: "n must be at least 1".into(),
            });
        }
        for (i, set) in self.sets.iter().enumerate() {
            if let Some(&x) = set.iter().find(|&&x| x == 0 || x > self.n) {
                return Err(Error::Parse {
                    location: format!("field `sets[{i}]`"),
                    message: format!("element {x} is outside [1, {}]", self.n),
                });
            }
        }
        Family::from_lists(self.n, &self.sets)
    }
}

impl Family {
    pub fn to_json(&self) -> String {
        serde_json::to_string(&FamilyFile::from(self)).expect("family serializes")
    }

    pub fn from_json(text: &str) -> Result<Family> {
        let file: FamilyFile = serde_json::from_str(text).map_err(|e| Error::Parse {
            location: format!("line {}, column {}", e.line(), e.column()),
            message: e.to_string(),
        })?;
        file.into_family()
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.n());
        for s in self.sets() {
            let line: Vec<String> = s.iter().map(|x| x.to_string()).collect();
            let _ = writeln!(out, "{}", line.join(" "));
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Family> {
        let mut lines = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim_start().starts_with('#'));
        let (first_no, first) = lines.next().ok_or_else(|| Error::Parse {
            location: "line 1".into(),
            message: "missing ground-set size".into(),
        })?;
        let n: usize = first.trim().parse().map_err(|_| Error::Parse {
            location: format!("line {}", first_no + 1),
            message: format!("expected the ground-set size, found {:?}", first.trim()),
        })?;
        if n == 0 {
            return Err(Error::Parse {
                location: format!("line {}", first_no + 1),
                message: "n must be at least 1".into(),
            });
        }
        let mut sets = Vec::new();
        for (no, line) in lines {
            let mut set = Vec::new();
            for token in line.split_whitespace() {
                let x: usize = token.parse().map_err(|_| Error::Parse {
                    location: format!("line {}", no + 1),
                    message: format!("expected an element, found {token:?}"),
                })?;
                if x == 0 || x > n {
                    return Err(Error::Parse {
                        location: format!("line {}", no + 1),
                        message: format!("element {x} is outside [1, {n}]"),
                    });
                }
                set.push(x);
            }
            sets.push(set);
        }
        Family::from_lists(n, sets)
    }

    /// Detects the format from the first non-blank character.
    pub fn parse(text: &str) -> Result<Family> {
        if text.trim_start().starts_with('{') {
            Family::from_json(text)
        } else {
            Family::from_text(text)
        }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = self.to_json();
                s.push('\n');
                s
            }
            Format::Text => self.to_text(),
        }
    }
}
