//! Polytope files and exact JSON integers.
//!
//! Text format:
//!
//! ```text
//! # comment
//! name reeve
//! ambient 3
//! 0 0 0
//! 1 0 0
//! 0 1 0
//! 1 1 2
//! ```
//!
//! The `name` line is optional. JSON format:
//! `{"name": "reeve", "ambient": 3, "vertices": [[0,0,0], …]}`, where an
//! integer may also be given as a decimal string.

use std::fmt::Write as _;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize, Serializer};

use crate::polytope::Polytope;
use crate::Result;

/// Largest integer magnitude written as a JSON number; anything larger is
/// written as a decimal string.
pub const JSON_SAFE_INT: i64 = (1 << 53) - 1;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolytopeFile {
    pub name: Option<String>,
    pub ambient: usize,
    /// Sorted and deduplicated.
    pub vertices: Vec<Vec<BigInt>>,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

fn err(line: usize, column: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        line,
        column,
        message: message.into(),
    }
}

impl PolytopeFile {
    pub fn new(name: Option<String>, ambient: usize, mut vertices: Vec<Vec<BigInt>>) -> Self {
        vertices.sort();
        vertices.dedup();
        PolytopeFile {
            name,
            ambient,
            vertices,
        }
    }

    pub fn from_polytope(name: Option<String>, p: &Polytope) -> Self {
        PolytopeFile::new(name, p.ambient_dim(), p.vertices().to_vec())
    }

    pub fn polytope(&self) -> Result<Polytope> {
        Polytope::new(&self.vertices)
    }

    /// Canonical text form; parsing it gives back `self`.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        if let Some(name) = &self.name {
            writeln!(s, "name {name}").unwrap();
        }
        writeln!(s, "ambient {}", self.ambient).unwrap();
        for v in &self.vertices {
            let line: Vec<String> = v.iter().map(|x| x.to_string()).collect();
            writeln!(s, "{}", line.join(" ")).unwrap();
        }
        s
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut obj = serde_json::Map::new();
        if let Some(name) = &self.name {
            obj.insert("name".into(), name.clone().into());
        }
        obj.insert("ambient".into(), self.ambient.into());
        obj.insert(
            "vertices".into(),
            self.vertices
                .iter()
                .map(|v| v.iter().map(exact_json).collect::<Vec<_>>().into())
                .collect::<Vec<serde_json::Value>>()
                .into(),
        );
        obj.into()
    }
}

/// Parses either format, choosing JSON when the first non-blank character
/// is `{`.
pub fn parse(input: &str) -> Result<PolytopeFile, ParseError> {
    if input.trim_start().starts_with('{') {
        parse_json(input)
    } else {
        parse_text(input)
    }
}

pub fn parse_text(input: &str) -> Result<PolytopeFile, ParseError> {
    let mut name = None;
    let mut ambient: Option<usize> = None;
    let mut vertices = Vec::new();
    for (i, raw) in input.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap();
        let tokens = tokens(line);
        let Some(&(col, first)) = tokens.first() else {
            continue;
        };
        if first == "name" {
            if ambient.is_some() || name.is_some() {
                return Err(err(line_no, col, "`name` must come once, before `ambient`"));
            }
            let rest = line.trim_start()["name".len()..].trim();
            if rest.is_empty() {
                return Err(err(line_no, col + 4, "missing name"));
            }
            name = Some(rest.to_string());
            continue;
        }
        let Some(n) = ambient else {
            if first != "ambient" {
                return Err(err(line_no, col, "expected `ambient <n>`"));
            }
            let Some(&(c, tok)) = tokens.get(1) else {
                return Err(err(line_no, col + 7, "missing ambient dimension"));
            };
            let n: usize = tok
                .parse()
                .map_err(|_| err(line_no, c, format!("invalid ambient dimension `{tok}`")))?;
            if n == 0 {
                return Err(err(line_no, c, "ambient dimension must be positive"));
            }
            if let Some(&(c, _)) = tokens.get(2) {
                return Err(err(line_no, c, "unexpected token after ambient dimension"));
            }
            ambient = Some(n);
            continue;
        };
        if tokens.len() != n {
            let column = tokens.get(n).map_or(raw.trim_end().len() + 1, |t| t.0);
            return Err(err(
                line_no,
                column,
                format!("expected {n} coordinates, found {}", tokens.len()),
            ));
        }
        let v = tokens
            .iter()
            .map(|&(c, t)| {
                t.parse::<BigInt>()
                    .map_err(|_| err(line_no, c, format!("invalid integer `{t}`")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        vertices.push(v);
    }
    let line_count = input.lines().count().max(1);
    let ambient = ambient.ok_or_else(|| err(line_count, 1, "missing `ambient <n>` line"))?;
    if vertices.is_empty() {
        return Err(err(line_count, 1, "no vertices"));
    }
    Ok(PolytopeFile::new(name, ambient, vertices))
}

/// Whitespace-separated tokens with their 1-based starting column.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices() {
        match (ch.is_whitespace(), start) {
            (true, Some(s)) => {
                out.push((s, &line[s..i]));
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s, &line[s..]));
    }
    out.into_iter()
        .map(|(s, t)| (line[..s].chars().count() + 1, t))
        .collect()
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonFile {
    #[serde(default)]
    name: Option<String>,
    ambient: usize,
    vertices: Vec<Vec<JsonInt>>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum JsonInt {
    Int(i64),
    Text(String),
}

pub fn parse_json(input: &str) -> Result<PolytopeFile, ParseError> {
    let file: JsonFile =
        serde_json::from_str(input).map_err(|e| err(e.line(), e.column(), e.to_string()))?;
    if file.ambient == 0 {
        return Err(err(1, 1, "ambient dimension must be positive"));
    }
    if file.vertices.is_empty() {
        return Err(err(1, 1, "no vertices"));
    }
    let mut vertices = Vec::with_capacity(file.vertices.len());
    for (i, v) in file.vertices.into_iter().enumerate() {
        let (line, column) = locate_vertex(input, i);
        if v.len() != file.ambient {
            return Err(err(
                line,
                column,
                format!("vertex {i} has {} coordinates, expected {}", v.len(), file.ambient),
            ));
        }
        let coords = v
            .into_iter()
            .map(|x| match x {
                JsonInt::Int(n) => Ok(BigInt::from(n)),
                JsonInt::Text(s) => s
                    .parse::<BigInt>()
                    .map_err(|_| err(line, column, format!("invalid integer `{s}`"))),
            })
            .collect::<Result<Vec<_>, _>>()?;
        vertices.push(coords);
    }
    Ok(PolytopeFile::new(file.name, file.ambient, vertices))
}

/// Line and column of the `index`-th element of the `"vertices"` array.
/// Falls back to the start of the document.
fn locate_vertex(input: &str, index: usize) -> (usize, usize) {
    let Some(key) = input.find("\"vertices\"") else {
        return (1, 1);
    };
    let mut depth = 0;
    let mut seen = 0;
    let mut in_string = false;
    for (off, ch) in input[key + 10..].char_indices() {
        let pos = key + 10 + off;
        match ch {
            '"' => in_string = !in_string,
            _ if in_string => {}
            '[' => {
                depth += 1;
                if depth == 2 {
                    if seen == index {
                        let line = input[..pos].matches('\n').count() + 1;
                        let col = input[..pos].rsplit('\n').next().unwrap().chars().count() + 1;
                        return (line, col);
                    }
                    seen += 1;
                }
            }
            ']' => {
                depth -= 1;
                if depth == 0 {
                    break;
                }
            }
            _ => {}
        }
    }
    (1, 1)
}

/// A JSON number when `|v| ≤ 2⁵³ − 1`, otherwise a decimal string.
pub fn exact_json(v: &BigInt) -> serde_json::Value {
    let safe = BigInt::from(JSON_SAFE_INT);
    if *v <= safe && *v >= -safe {
        let n: i64 = v.try_into().unwrap();
        n.into()
    } else {
        v.to_string().into()
    }
}

/// `serialize_with` helpers applying [`exact_json`].
pub mod exact {
    use super::*;

    pub fn int<T, S>(v: &T, s: S) -> Result<S::Ok, S::Error>
    where
        T: Clone + Into<BigInt>,
        S: Serializer,
    {
        exact_json(&v.clone().into()).serialize(s)
    }

    pub fn vec<T, S>(v: &[T], s: S) -> Result<S::Ok, S::Error>
    where
        T: Clone + Into<BigInt>,
        S: Serializer,
    {
        v.iter()
            .map(|x| exact_json(&x.clone().into()))
            .collect::<Vec<_>>()
            .serialize(s)
    }

    pub fn matrix<T, S>(v: &[Vec<T>], s: S) -> Result<S::Ok, S::Error>
    where
        T: Clone + Into<BigInt>,
        S: Serializer,
    {
        v.iter()
            .map(|row| {
                row.iter()
                    .map(|x| exact_json(&x.clone().into()))
                    .collect::<Vec<_>>()
            })
            .collect::<Vec<_>>()
            .serialize(s)
    }
}
