//! Edge lists: one `u v` pair of 0-based vertex ids per line; `#` starts a
//! comment.

use std::fs::File;
use std::io::{self, BufRead, BufReader};
use std::path::Path;

use graal_core::problems::Graph;

#[derive(Debug, thiserror::Error)]
pub enum EdgeListError {
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error("line {line}: {msg}")]
    Line { line: usize, msg: String },
    #[error("no edges")]
    Empty,
    #[error("{0}")]
    Graph(#[from] graal_core::Error),
}

pub fn parse_edge_list<R: BufRead>(reader: R) -> Result<Graph, EdgeListError> {
    let mut edges = Vec::new();
    let mut n = 0;
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let body = line.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let err = |msg: String| EdgeListError::Line { line: i + 1, msg };
        let ids: Vec<&str> = body.split_ascii_whitespace().collect();
        let [u, v] = ids[..] else {
            return Err(err(format!("expected two vertex ids, got {body:?}")));
        };
        let u: usize = u.parse().map_err(|_| err(format!("bad vertex id {u:?}")))?;
        let v: usize = v.parse().map_err(|_| err(format!("bad vertex id {v:?}")))?;
        if u == v {
            return Err(err(format!("self-loop at {u}")));
        }
        n = n.max(u + 1).max(v + 1);
        edges.push((u, v));
    }
    if edges.is_empty() {
        return Err(EdgeListError::Empty);
    }
    Ok(Graph::from_edges(n, &edges)?)
}

pub fn read_edge_list_file(path: &Path) -> Result<Graph, EdgeListError> {
    parse_edge_list(BufReader::new(File::open(path)?))
}
