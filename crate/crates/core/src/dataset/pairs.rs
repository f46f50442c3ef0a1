use std::path::Path;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairEntry {
    pub name_a: String,
    pub name_b: String,
    pub same_identity: bool,
}

/// A verification pair list.
///
/// Accepted line formats (blank lines and `#` comments are skipped):
///
/// * `image_a image_b label` with label `1`/`0` (or `same`/`diff`)
/// * classic LFW positives `Name n1 n2` and negatives `Name1 n1 Name2 n2`,
///   expanded to `Name_0001`-style ids; a leading all-numeric header line is
///   ignored.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PairList {
    pub entries: Vec<PairEntry>,
}

fn lfw_id(name: &str, n: u32) -> String {
    format!("{name}_{n:04}")
}

fn parse_label(s: &str) -> Option<bool> {
    match s {
        "1" | "same" | "true" => Some(true),
        "0" | "diff" | "false" => Some(false),
        _ => None,
    }
}

impl PairList {
    pub fn new(entries: Vec<PairEntry>) -> Self {
        Self { entries }
    }

    pub fn from_tuples<S: Into<String>>(pairs: impl IntoIterator<Item = (S, S, bool)>) -> Self {
        Self {
            entries: pairs
                .into_iter()
                .map(|(a, b, same)| PairEntry {
                    name_a: a.into(),
                    name_b: b.into(),
                    same_identity: same,
                })
                .collect(),
        }
    }

    pub fn parse(text: &str, origin: &Path) -> Result<Self> {
        let mut entries = Vec::new();
        let mut first = true;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let tokens: Vec<&str> = line.split_whitespace().collect();
            let is_int = |s: &str| s.parse::<u32>().is_ok();
            if first && tokens.len() <= 2 && tokens.iter().all(|t| is_int(t)) {
                first = false;
                continue;
            }
            first = false;
            let bad = || Error::parse(origin, format!("line {}: unrecognized pair '{line}'", lineno + 1));
            let entry = match tokens.as_slice() {
                [name, n1, n2] if is_int(n1) && is_int(n2) => PairEntry {
                    name_a: lfw_id(name, n1.parse().unwrap()),
                    name_b: lfw_id(name, n2.parse().unwrap()),
                    same_identity: true,
                },
                [a, b, label] => PairEntry {
                    name_a: a.to_string(),
                    name_b: b.to_string(),
                    same_identity: parse_label(label).ok_or_else(bad)?,
                },
                [na, n1, nb, n2] if is_int(n1) && is_int(n2) => PairEntry {
                    name_a: lfw_id(na, n1.parse().unwrap()),
                    name_b: lfw_id(nb, n2.parse().unwrap()),
                    same_identity: false,
                },
                _ => return Err(bad()),
            };
            entries.push(entry);
        }
        Ok(Self { entries })
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text, path)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn positives(&self) -> usize {
        self.entries.iter().filter(|e| e.same_identity).count()
    }

    pub fn negatives(&self) -> usize {
        self.len() - self.positives()
    }
}
