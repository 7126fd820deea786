//! SNAP-style whitespace separated edge lists.

use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use super::{Graph, VertexMap};
use crate::error::{Error, Result};

/// Parse an edge list: one `u v` pair per line, `#` comment lines and blank
/// lines ignored, tabs or spaces as separators. Labels are compacted to
/// `0..n` in ascending label order.
pub fn load_edge_list<R: BufRead>(reader: R) -> Result<(Graph, VertexMap)> {
    let mut raw = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = idx + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut tokens = trimmed.split_whitespace();
        let (Some(a), Some(b), None) = (tokens.next(), tokens.next(), tokens.next()) else {
            return Err(Error::Parse {
                line: lineno,
                message: format!("expected two vertex ids, found {trimmed:?}"),
            });
        };
        let parse = |tok: &str| {
            tok.parse::<u64>().map_err(|_| Error::Parse {
                line: lineno,
                message: format!("vertex id {tok:?} is not a non-negative integer"),
            })
        };
        raw.push((parse(a)?, parse(b)?));
    }

    let mut labels: Vec<u64> = raw.iter().flat_map(|&(a, b)| [a, b]).collect();
    labels.sort_unstable();
    labels.dedup();
    let compact = |l: u64| labels.binary_search(&l).expect("label collected above");
    let pairs: Vec<(usize, usize)> = raw.iter().map(|&(a, b)| (compact(a), compact(b))).collect();
    let graph = Graph::from_edges(labels.len(), pairs)?;
    Ok((graph, VertexMap::new(labels)))
}

pub fn load_edge_list_file(path: impl AsRef<Path>) -> Result<(Graph, VertexMap)> {
    load_edge_list(BufReader::new(File::open(path)?))
}

/// Write `g` as an edge list with a `# Nodes: n Edges: m` header.
///
/// Isolated vertices have no line of their own, so only graphs without
/// isolated vertices reload to an identical graph.
pub fn write_edge_list<W: Write>(g: &Graph, out: W) -> Result<()> {
    write_edge_list_with_header(g, &[], out)
}

pub fn write_edge_list_with_header<W: Write>(
    g: &Graph,
    header: &[String],
    mut out: W,
) -> Result<()> {
    for line in header {
        writeln!(out, "# {line}")?;
    }
    writeln!(out, "# Nodes: {} Edges: {}", g.n(), g.edge_count())?;
    for &(u, v) in g.edges() {
        writeln!(out, "{u}\t{v}")?;
    }
    out.flush()?;
    Ok(())
}
