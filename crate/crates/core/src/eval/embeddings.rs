use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};

/// Image id to embedding vector, all vectors the same length, finite and nonzero.
///
/// Two on-disk layouts:
///
/// * text: one `image-id d v1 ... vd` record per line;
/// * binary (`.bin`): repeated records of `u32 id_len | id bytes (UTF-8) |
///   u32 d | d x f32`, all little-endian.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct EmbeddingTable {
    dim: usize,
    vectors: BTreeMap<String, Vec<f32>>,
}

impl EmbeddingTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, id: impl Into<String>, v: Vec<f32>) -> Result<()> {
        let id = id.into();
        if v.is_empty() {
            return Err(Error::invalid(format!("embedding for '{id}' is empty")));
        }
        if !self.vectors.is_empty() && v.len() != self.dim {
            return Err(Error::invalid(format!(
                "embedding for '{id}' has dimension {}, expected {}",
                v.len(),
                self.dim
            )));
        }
        if v.iter().any(|x| !x.is_finite()) {
            return Err(Error::invalid(format!("embedding for '{id}' has non-finite values")));
        }
        if v.iter().all(|&x| x == 0.0) {
            return Err(Error::invalid(format!("embedding for '{id}' has zero norm")));
        }
        self.dim = v.len();
        self.vectors.insert(id, v);
        Ok(())
    }

    pub fn from_entries<S: Into<String>>(entries: impl IntoIterator<Item = (S, Vec<f32>)>) -> Result<Self> {
        let mut t = Self::new();
        for (id, v) in entries {
            t.insert(id, v)?;
        }
        Ok(t)
    }

    pub fn get(&self, id: &str) -> Option<&[f32]> {
        self.vectors.get(id).map(Vec::as_slice)
    }

    pub fn contains(&self, id: &str) -> bool {
        self.vectors.contains_key(id)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &[f32])> {
        self.vectors.iter().map(|(k, v)| (k.as_str(), v.as_slice()))
    }

    pub fn parse_text(text: &str, origin: &Path) -> Result<Self> {
        let mut t = Self::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = |m: String| Error::parse(origin, format!("line {}: {m}", lineno + 1));
            let mut it = line.split_whitespace();
            let id = it.next().unwrap();
            let d: usize = it
                .next()
                .ok_or_else(|| bad("missing dimension".into()))?
                .parse()
                .map_err(|_| bad("bad dimension".into()))?;
            let v = it
                .map(|s| s.parse::<f32>().map_err(|_| bad(format!("bad value '{s}'"))))
                .collect::<Result<Vec<_>>>()?;
            if v.len() != d {
                return Err(bad(format!("declared {d} values, found {}", v.len())));
            }
            t.insert(id, v).map_err(|e| bad(e.to_string()))?;
        }
        Ok(t)
    }

    pub fn parse_binary(bytes: &[u8], origin: &Path) -> Result<Self> {
        let mut t = Self::new();
        let mut pos = 0usize;
        let bad = |at: usize, m: &str| Error::parse(origin, format!("byte {at}: {m}"));
        let take = |pos: &mut usize, n: usize| -> Result<&[u8]> {
            let s = bytes
                .get(*pos..*pos + n)
                .ok_or_else(|| bad(*pos, "truncated record"))?;
            *pos += n;
            Ok(s)
        };
        while pos < bytes.len() {
            let start = pos;
            let len = u32::from_le_bytes(take(&mut pos, 4)?.try_into().unwrap()) as usize;
            let id = std::str::from_utf8(take(&mut pos, len)?)
                .map_err(|_| bad(start, "id is not UTF-8"))?
                .to_string();
            let d = u32::from_le_bytes(take(&mut pos, 4)?.try_into().unwrap()) as usize;
            let raw = take(&mut pos, d.checked_mul(4).ok_or_else(|| bad(start, "dimension overflow"))?)?;
            let v = raw
                .chunks_exact(4)
                .map(|c| f32::from_le_bytes(c.try_into().unwrap()))
                .collect();
            t.insert(id, v).map_err(|e| bad(start, &e.to_string()))?;
        }
        Ok(t)
    }

    /// Reads a table; `.bin` files use the binary layout, anything else text.
    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
        if is_binary(path) {
            Self::parse_binary(&bytes, path)
        } else {
            let text = String::from_utf8(bytes).map_err(|_| Error::parse(path, "not UTF-8 text"))?;
            Self::parse_text(&text, path)
        }
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (id, v) in &self.vectors {
            let _ = write!(s, "{id} {}", v.len());
            for x in v {
                let _ = write!(s, " {x}");
            }
            s.push('\n');
        }
        s
    }

    pub fn to_binary(&self) -> Vec<u8> {
        let mut out = Vec::new();
        for (id, v) in &self.vectors {
            out.extend_from_slice(&(id.len() as u32).to_le_bytes());
            out.extend_from_slice(id.as_bytes());
            out.extend_from_slice(&(v.len() as u32).to_le_bytes());
            for x in v {
                out.extend_from_slice(&x.to_le_bytes());
            }
        }
        out
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let bytes = if is_binary(path) {
            self.to_binary()
        } else {
            self.to_text().into_bytes()
        };
        std::fs::write(path, bytes).map_err(|e| Error::io(path, e))
    }
}

fn is_binary(path: &Path) -> bool {
    path.extension().is_some_and(|e| e.eq_ignore_ascii_case("bin"))
}
