//! Plain-text edge lists: a `n m` header line, then one `i j` line per edge.

use std::io::{BufRead, Write};

use keymesh_core::AdjacencyGraph;

use crate::error::{config_err, Result};

pub fn write_edge_list<W: Write>(graph: &AdjacencyGraph, mut out: W) -> Result<()> {
    writeln!(out, "{} {}", graph.n(), graph.edge_count())?;
    for (i, j) in graph.edges() {
        writeln!(out, "{i} {j}")?;
    }
    Ok(())
}

pub fn read_edge_list<R: BufRead>(input: R) -> Result<AdjacencyGraph> {
    let mut lines = input.lines();
    let header = match lines.next() {
        Some(line) => line?,
        None => return config_err("edge list is empty"),
    };
    let (n, m) = pair(&header)?;
    let mut edges = Vec::with_capacity(m);
    for line in lines {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let (i, j) = pair(&line)?;
        edges.push((u32::try_from(i).unwrap_or(u32::MAX), u32::try_from(j).unwrap_or(u32::MAX)));
    }
    if edges.len() != m {
        return config_err(format!("header promises {m} edges, found {}", edges.len()));
    }
    Ok(AdjacencyGraph::from_edges(n, edges)?)
}

fn pair(line: &str) -> Result<(usize, usize)> {
    let mut it = line.split_whitespace().map(str::parse::<usize>);
    match (it.next(), it.next(), it.next()) {
        (Some(Ok(a)), Some(Ok(b)), None) => Ok((a, b)),
        _ => config_err(format!("expected two integers, got {line:?}")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let g = AdjacencyGraph::from_edges(5, [(0, 1), (3, 1), (4, 2)]).unwrap();
        let mut buf = Vec::new();
        write_edge_list(&g, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf.clone()).unwrap(), "5 3\n0 1\n1 3\n2 4\n");
        assert_eq!(read_edge_list(&buf[..]).unwrap(), g);
    }

    #[test]
    fn rejects_malformed() {
        assert!(read_edge_list(&b"3 1\n0 5\n"[..]).is_err());
        assert!(read_edge_list(&b"3 2\n0 1\n"[..]).is_err());
        assert!(read_edge_list(&b"3\n"[..]).is_err());
        assert!(read_edge_list(&b""[..]).is_err());
    }
}
