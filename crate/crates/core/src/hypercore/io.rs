//! Text formats.
//!
//! `.dhg`: one hyperedge per line as `h1,h2,…|t1,t2,…`; either side may be
//! blank but not both; repeated lines encode multiplicity; lines starting
//! with `#` are comments. The comment `# isolated: a,b,…` additionally
//! declares nodes that belong to no hyperedge.
//!
//! Undirected format: one hyperedge per line, comma-separated node ids.
//! Label format: CSV `node_id,category`, optional header.

use std::path::Path;

use super::hypergraph::{DirectedHypergraph, NodeId, UndirectedHypergraph};
use crate::{Error, Result};

const ISOLATED: &str = "# isolated:";

fn parse_ids(s: &str, line: usize) -> Result<Vec<NodeId>> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    let mut ids = Vec::new();
    for tok in s.split(',') {
        let tok = tok.trim();
        let id = tok.parse::<NodeId>().map_err(|_| Error::Parse { line, msg: format!("non-integer token '{tok}'") })?;
        ids.push(id);
    }
    let mut sorted = ids.clone();
    sorted.sort_unstable();
    if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::Parse { line, msg: format!("node {} repeated within one side", w[0]) });
    }
    Ok(ids)
}

pub fn parse_hypergraph(text: &str) -> Result<DirectedHypergraph> {
    let mut edges = Vec::new();
    let mut isolated = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let l = raw.trim();
        if let Some(rest) = l.strip_prefix(ISOLATED) {
            isolated.extend(parse_ids(rest, line)?);
            continue;
        }
        if l.is_empty() || l.starts_with('#') {
            continue;
        }
        let (h, t) = l.split_once('|').ok_or(Error::Parse { line, msg: "missing '|'".into() })?;
        if t.contains('|') {
            return Err(Error::Parse { line, msg: "more than one '|'".into() });
        }
        let (h, t) = (parse_ids(h, line)?, parse_ids(t, line)?);
        if h.is_empty() && t.is_empty() {
            return Err(Error::Parse { line, msg: "head and tail both empty".into() });
        }
        edges.push((h, t, 1));
    }
    DirectedHypergraph::from_ids(isolated, edges)
}

fn join(ids: impl Iterator<Item = NodeId>) -> String {
    ids.map(|v| v.to_string()).collect::<Vec<_>>().join(",")
}

/// Canonical `.dhg` text: one line per hyperedge copy, in canonical order.
pub fn serialize_hypergraph(h: &DirectedHypergraph) -> String {
    let mut out = String::new();
    let iso = h.isolated_nodes();
    if !iso.is_empty() {
        out.push_str(ISOLATED);
        out.push(' ');
        out.push_str(&join(iso.iter().map(|&v| h.node_id(v))));
        out.push('\n');
    }
    for e in h.copies() {
        out.push_str(&join(e.head.iter().map(|&v| h.node_id(v))));
        out.push('|');
        out.push_str(&join(e.tail.iter().map(|&v| h.node_id(v))));
        out.push('\n');
    }
    out
}

pub fn parse_undirected(text: &str) -> Result<UndirectedHypergraph> {
    let mut edges = Vec::new();
    let mut isolated = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let l = raw.trim();
        if let Some(rest) = l.strip_prefix(ISOLATED) {
            isolated.extend(parse_ids(rest, line)?);
            continue;
        }
        if l.is_empty() || l.starts_with('#') {
            continue;
        }
        edges.push((parse_ids(l, line)?, 1));
    }
    UndirectedHypergraph::from_ids(isolated, edges)
}

pub fn serialize_undirected(u: &UndirectedHypergraph) -> String {
    let mut out = String::new();
    for e in u.edges() {
        let line = join(e.members.iter().map(|&v| u.nodes()[v as usize]));
        for _ in 0..e.multiplicity {
            out.push_str(&line);
            out.push('\n');
        }
    }
    out
}

/// Reads `node_id,category` rows. A first row whose id is not an integer is
/// treated as a header.
pub fn parse_labels(text: &str) -> Result<Vec<(NodeId, String)>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let l = raw.trim();
        if l.is_empty() || l.starts_with('#') {
            continue;
        }
        let (id, cat) =
            l.split_once(',').ok_or(Error::Parse { line: i + 1, msg: "expected node_id,category".into() })?;
        match id.trim().parse::<NodeId>() {
            Ok(id) => out.push((id, cat.trim().to_string())),
            Err(_) if out.is_empty() && i == first_data_line(text) => continue,
            Err(_) => return Err(Error::Parse { line: i + 1, msg: format!("non-integer node id '{id}'") }),
        }
    }
    Ok(out)
}

fn first_data_line(text: &str) -> usize {
    text.lines().position(|l| !l.trim().is_empty() && !l.trim().starts_with('#')).unwrap_or(0)
}

pub fn read_hypergraph(path: impl AsRef<Path>) -> Result<DirectedHypergraph> {
    parse_hypergraph(&std::fs::read_to_string(path)?)
}

pub fn read_undirected(path: impl AsRef<Path>) -> Result<UndirectedHypergraph> {
    parse_undirected(&std::fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypercore::toy;

    #[test]
    fn single_line() {
        let h = parse_hypergraph("1,2|3").unwrap();
        assert_eq!(h.node_count(), 3);
        assert_eq!(h.edge_count(), 1);
        assert_eq!(h.edges()[0].head, vec![0, 1]);
        assert_eq!(h.edges()[0].tail, vec![2]);
    }

    #[test]
    fn repeated_line_is_multiplicity() {
        let h = parse_hypergraph("1,2|3\n2,1|3\n").unwrap();
        assert_eq!(h.edges().len(), 1);
        assert_eq!(h.edges()[0].multiplicity, 2);
    }

    #[test]
    fn fig1_round_trip() {
        let h = toy::fig1();
        assert_eq!(h.node_count(), 6);
        assert_eq!(h.edge_count(), 3);
        let text = serialize_hypergraph(&h);
        assert_eq!(parse_hypergraph(&text).unwrap(), h);
        let mut a: Vec<&str> = text.lines().collect();
        let mut b: Vec<&str> = toy::FIG1.lines().collect();
        a.sort();
        b.sort();
        assert_eq!(a, b);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let e = parse_hypergraph("# c\n1|2\n1,2\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 3, .. }), "{e}");
        assert!(matches!(parse_hypergraph("1|x").unwrap_err(), Error::Parse { line: 1, .. }));
        assert!(matches!(parse_hypergraph("1,1|2").unwrap_err(), Error::Parse { line: 1, .. }));
        assert!(matches!(parse_hypergraph("|").unwrap_err(), Error::Parse { line: 1, .. }));
    }

    #[test]
    fn one_sided_edges() {
        let h = parse_hypergraph("|4,5\n6|\n").unwrap();
        assert_eq!(h.edge_count(), 2);
        assert_eq!(parse_hypergraph(&serialize_hypergraph(&h)).unwrap(), h);
    }

    #[test]
    fn isolated_nodes_round_trip() {
        let h = DirectedHypergraph::from_ids([10, 11], vec![(vec![1], vec![2], 1)]).unwrap();
        let back = parse_hypergraph(&serialize_hypergraph(&h)).unwrap();
        assert_eq!(back, h);
    }

    #[test]
    fn undirected_round_trip() {
        let u = parse_undirected("1,2\n2,3,4\n1,2\n").unwrap();
        assert_eq!(u.edge_count(), 3);
        assert_eq!(parse_undirected(&serialize_undirected(&u)).unwrap(), u);
    }

    #[test]
    fn labels_with_header() {
        let l = parse_labels("node_id,category\n1,D\n2,R\n").unwrap();
        assert_eq!(l, vec![(1, "D".to_string()), (2, "R".to_string())]);
        assert!(parse_labels("1,D\nx,R\n").is_err());
    }
}
