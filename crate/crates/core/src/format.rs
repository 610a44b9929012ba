//! Plain-text hypergraph files.
//!
//! ```text
//! # comment
//! n 6
//! 0 1 2
//! -
//! ```
//!
//! The first non-comment line declares the ground-set size. Every following
//! non-comment line is one edge as space-separated 0-based vertex indices;
//! `-` is the empty edge. `#` starts a comment anywhere on a line.
//! [`write_hypergraph`] emits the canonical form, which parses back to the
//! same hypergraph and re-serializes byte for byte.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::{Hypergraph, VertexSet};

pub fn parse_hypergraph(text: &str) -> Result<Hypergraph> {
    let mut ground_size = None;
    let mut edges = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let err = |message: String| Error::Parse { line, message };
        let Some(n) = ground_size else {
            let mut parts = body.split_whitespace();
            match (parts.next(), parts.next(), parts.next()) {
                (Some("n"), Some(size), None) => {
                    let size = size
                        .parse::<usize>()
                        .map_err(|e| err(format!("bad ground size {size:?}: {e}")))?;
                    ground_size = Some(size);
                }
                _ => return Err(err(format!("expected `n <ground_size>`, found {body:?}"))),
            }
            continue;
        };
        if body == "-" {
            edges.push(VertexSet::new());
            continue;
        }
        let mut edge = VertexSet::new();
        for tok in body.split_whitespace() {
            let v = tok
                .parse::<usize>()
                .map_err(|e| err(format!("bad vertex {tok:?}: {e}")))?;
            if v >= n {
                return Err(err(format!("vertex {v} outside ground set of size {n}")));
            }
            if edge.contains(v) {
                return Err(err(format!("vertex {v} repeated in edge")));
            }
            edge.insert(v);
        }
        edges.push(edge);
    }
    let Some(n) = ground_size else {
        return Err(Error::Parse {
            line: text.lines().count().max(1),
            message: "missing `n <ground_size>` header".into(),
        });
    };
    Hypergraph::new(n, edges)
}

/// Canonical serialization. Restricted hypergraphs are written in their
/// re-indexed form.
pub fn write_hypergraph(h: &Hypergraph) -> String {
    let h = h.reindexed();
    let mut out = String::new();
    writeln!(out, "n {}", h.ground_size()).unwrap();
    for e in h.edges() {
        writeln!(out, "{e}").unwrap();
    }
    out
}

pub fn read_hypergraph_file(path: impl AsRef<Path>) -> Result<Hypergraph> {
    let text = std::fs::read_to_string(path)?;
    parse_hypergraph(&text)
}
