//! Whitespace-separated edge-list files.
//!
//! One edge per line as two non-negative integer node ids. Blank lines and
//! lines starting with `#` are ignored, except for an optional header
//! `# nodes: N` that declares ids `0..N` (or `1..=N` with one-based indexing)
//! up front, in order, so isolated nodes survive a round trip. Other ids are
//! compacted to `0..n` in order of first appearance; [`EdgeList::node_ids`]
//! maps each compact index back to its original id.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::graph::AdjacencyGraph;
use super::model::Membership;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum Indexing {
    #[default]
    Zero,
    One,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeListOptions {
    pub indexing: Indexing,
    /// Drop `i i` lines (still registering node `i`) instead of failing.
    pub ignore_self_loops: bool,
}

impl Default for EdgeListOptions {
    fn default() -> Self {
        Self {
            indexing: Indexing::Zero,
            ignore_self_loops: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeList {
    pub graph: AdjacencyGraph,
    /// Original id of each compact node index.
    pub node_ids: Vec<u64>,
}

const NODES_HEADER: &str = "# nodes:";

struct Compactor {
    index: HashMap<u64, usize>,
    ids: Vec<u64>,
}

impl Compactor {
    fn get(&mut self, id: u64) -> usize {
        *self.index.entry(id).or_insert_with(|| {
            self.ids.push(id);
            self.ids.len() - 1
        })
    }
}

fn parse_id(token: &str, line: usize, indexing: Indexing) -> Result<u64> {
    let id: u64 = token.parse().map_err(|_| Error::Parse {
        line,
        msg: format!("invalid node id {token:?}"),
    })?;
    if indexing == Indexing::One && id == 0 {
        return Err(Error::Parse {
            line,
            msg: "node id 0 with one-based indexing".into(),
        });
    }
    Ok(id)
}

/// Parses edge-list text. Never panics on arbitrary input.
pub fn parse_edge_list(text: &str, opts: EdgeListOptions) -> Result<EdgeList> {
    let mut nodes = Compactor {
        index: HashMap::new(),
        ids: Vec::new(),
    };
    let mut edges = Vec::new();
    let mut saw_data = false;
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let trimmed = raw.trim();
        if let Some(rest) = trimmed.strip_prefix(NODES_HEADER) {
            if saw_data || !nodes.ids.is_empty() {
                return Err(Error::Parse {
                    line,
                    msg: "node header must precede all edges".into(),
                });
            }
            let count: u64 = rest.trim().parse().map_err(|_| Error::Parse {
                line,
                msg: format!("invalid node count {:?}", rest.trim()),
            })?;
            if count > u32::MAX as u64 {
                return Err(Error::Parse {
                    line,
                    msg: format!("node count {count} too large"),
                });
            }
            let first = u64::from(opts.indexing == Indexing::One);
            for id in first..first + count {
                nodes.get(id);
            }
            continue;
        }
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        saw_data = true;
        let mut tokens = trimmed.split_whitespace();
        let (a, b) = match (tokens.next(), tokens.next(), tokens.next()) {
            (Some(a), Some(b), None) => (a, b),
            _ => {
                return Err(Error::Parse {
                    line,
                    msg: format!("expected two node ids, got {trimmed:?}"),
                })
            }
        };
        let a = parse_id(a, line, opts.indexing)?;
        let b = parse_id(b, line, opts.indexing)?;
        let (ia, ib) = (nodes.get(a), nodes.get(b));
        if ia == ib {
            if opts.ignore_self_loops {
                continue;
            }
            return Err(Error::Parse {
                line,
                msg: format!("self-loop at node {a}"),
            });
        }
        edges.push((ia, ib));
    }
    if nodes.ids.is_empty() {
        return Err(Error::Parse {
            line: 0,
            msg: "edge list contains no nodes".into(),
        });
    }
    if nodes.ids.len() > u32::MAX as usize {
        return Err(Error::Parse {
            line: 0,
            msg: "too many nodes".into(),
        });
    }
    let graph = AdjacencyGraph::from_edges(nodes.ids.len(), edges)?;
    Ok(EdgeList {
        graph,
        node_ids: nodes.ids,
    })
}

pub fn read_edge_list(path: impl AsRef<Path>, opts: EdgeListOptions) -> Result<EdgeList> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_edge_list(&text, opts)
}

/// Serializes with a `# nodes:` header and zero-based ids `i < j`, one edge
/// per line in row-major order.
pub fn format_edge_list(graph: &AdjacencyGraph) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{NODES_HEADER} {}", graph.n());
    for (i, j) in graph.edges() {
        let _ = writeln!(out, "{i} {j}");
    }
    out
}

pub fn write_edge_list(path: impl AsRef<Path>, graph: &AdjacencyGraph) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, format_edge_list(graph)).map_err(|e| Error::io(path, e))
}

/// Community labels read from text.
///
/// Each non-comment line is either `label` (positional) or `node_id label`.
/// Label tokens are arbitrary strings; they are mapped to communities
/// `0..k` in sorted order (numerically when every token is an integer).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LabelFile {
    Positional(Vec<String>),
    Keyed(Vec<(u64, String)>),
}

pub fn parse_labels(text: &str) -> Result<LabelFile> {
    let mut positional = Vec::new();
    let mut keyed = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = trimmed.split_whitespace().collect();
        match tokens.as_slice() {
            [label] => positional.push(label.to_string()),
            [id, label] => {
                let id: u64 = id.parse().map_err(|_| Error::Parse {
                    line,
                    msg: format!("invalid node id {id:?}"),
                })?;
                keyed.push((id, label.to_string()));
            }
            _ => {
                return Err(Error::Parse {
                    line,
                    msg: format!("expected `label` or `node_id label`, got {trimmed:?}"),
                })
            }
        }
        if !positional.is_empty() && !keyed.is_empty() {
            return Err(Error::Parse {
                line,
                msg: "mixes positional and keyed label lines".into(),
            });
        }
    }
    if positional.is_empty() && keyed.is_empty() {
        return Err(Error::Parse {
            line: 0,
            msg: "label file is empty".into(),
        });
    }
    Ok(if keyed.is_empty() {
        LabelFile::Positional(positional)
    } else {
        LabelFile::Keyed(keyed)
    })
}

pub fn read_labels(path: impl AsRef<Path>) -> Result<LabelFile> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_labels(&text)
}

/// Maps label tokens to a membership in the order given.
pub fn labels_to_membership(tokens: &[&str]) -> Result<Membership> {
    let numeric: Option<Vec<i64>> = tokens.iter().map(|t| t.parse().ok()).collect();
    let labels: Vec<usize> = match numeric {
        // Tokens such as "1" and "+1" name the same community.
        Some(values) => {
            let mut distinct = values.clone();
            distinct.sort_unstable();
            distinct.dedup();
            values.iter().map(|v| distinct.binary_search(v).unwrap_or_default()).collect()
        }
        None => {
            let mut distinct: Vec<&str> = tokens.to_vec();
            distinct.sort_unstable();
            distinct.dedup();
            tokens.iter().map(|t| distinct.binary_search(t).unwrap_or_default()).collect()
        }
    };
    let k = labels.iter().max().map_or(1, |m| m + 1);
    Membership::proper(labels, k)
}

impl LabelFile {
    /// Labels for the nodes `nodes` of `list` (compact indices).
    ///
    /// Positional files are matched against all nodes sorted by original id
    /// when their length equals the node count, or against `nodes` directly
    /// (sorted by original id) when their length equals `nodes.len()`.
    pub fn membership_for(&self, list: &EdgeList, nodes: &[usize]) -> Result<Membership> {
        let mut by_id: Vec<usize> = nodes.to_vec();
        by_id.sort_by_key(|&v| list.node_ids[v]);
        let mut token_of_node: HashMap<usize, &str> = HashMap::new();
        match self {
            LabelFile::Positional(labels) => {
                if labels.len() == nodes.len() {
                    for (v, l) in by_id.iter().zip(labels) {
                        token_of_node.insert(*v, l);
                    }
                } else if labels.len() == list.graph.n() {
                    let mut all: Vec<usize> = (0..list.graph.n()).collect();
                    all.sort_by_key(|&v| list.node_ids[v]);
                    for (v, l) in all.iter().zip(labels) {
                        token_of_node.insert(*v, l);
                    }
                } else {
                    return Err(Error::param(format!(
                        "label file has {} labels but the analysed component has {} nodes (graph has {})",
                        labels.len(),
                        nodes.len(),
                        list.graph.n()
                    )));
                }
            }
            LabelFile::Keyed(pairs) => {
                let index: HashMap<u64, usize> =
                    list.node_ids.iter().enumerate().map(|(v, &id)| (id, v)).collect();
                for (id, l) in pairs {
                    if let Some(&v) = index.get(id) {
                        token_of_node.insert(v, l);
                    }
                }
                let missing = nodes.iter().filter(|v| !token_of_node.contains_key(v)).count();
                if missing > 0 {
                    return Err(Error::param(format!(
                        "label file covers {} of the {} nodes in the analysed component",
                        nodes.len() - missing,
                        nodes.len()
                    )));
                }
            }
        }
        let tokens: Vec<&str> = nodes.iter().map(|v| token_of_node[v]).collect();
        labels_to_membership(&tokens)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn duplicates_in_both_orientations_collapse() {
        let el = parse_edge_list("0 1\n1 0\n", EdgeListOptions::default()).unwrap();
        assert_eq!(el.graph.n(), 2);
        assert_eq!(el.graph.edge_count(), 1);
    }

    #[test]
    fn ignored_self_loop_registers_node() {
        let el = parse_edge_list("3 3\n", EdgeListOptions::default()).unwrap();
        assert_eq!(el.node_ids, vec![3]);
        assert_eq!(el.graph.edge_count(), 0);
        let strict = EdgeListOptions {
            ignore_self_loops: false,
            ..Default::default()
        };
        assert!(matches!(
            parse_edge_list("0 1\n3 3\n", strict),
            Err(Error::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn malformed_lines_report_line_number() {
        let opts = EdgeListOptions::default();
        for bad in ["# c\n0 1\n1\n", "0 1\n\n1 x\n", "0 1\n1 2\n1 2 3\n", "0 1\n\n1 -2\n"] {
            match parse_edge_list(bad, opts) {
                Err(Error::Parse { line: 3, .. }) => {}
                other => panic!("{bad:?}: {other:?}"),
            }
        }
    }

    #[test]
    fn empty_input_is_an_error() {
        assert!(parse_edge_list("", EdgeListOptions::default()).is_err());
        assert!(parse_edge_list("# only a comment\n\n", EdgeListOptions::default()).is_err());
    }

    #[test]
    fn one_based_indexing() {
        let opts = EdgeListOptions {
            indexing: Indexing::One,
            ..Default::default()
        };
        assert!(parse_edge_list("0 1\n", opts).is_err());
        let el = parse_edge_list("# nodes: 3\n3 1\n", opts).unwrap();
        assert_eq!(el.node_ids, vec![1, 2, 3]);
        assert!(el.graph.has_edge(0, 2));
    }

    #[test]
    fn sparse_ids_compact_in_first_appearance_order() {
        let el = parse_edge_list("10 5\n5 7\n", EdgeListOptions::default()).unwrap();
        assert_eq!(el.node_ids, vec![10, 5, 7]);
        assert!(el.graph.has_edge(0, 1) && el.graph.has_edge(1, 2));
    }

    #[test]
    fn header_after_edges_rejected() {
        assert!(parse_edge_list("0 1\n# nodes: 4\n", EdgeListOptions::default()).is_err());
    }

    #[test]
    fn format_then_parse_is_identity() {
        let g = AdjacencyGraph::from_edges(5, [(3, 1), (0, 4)]).unwrap();
        let back = parse_edge_list(&format_edge_list(&g), EdgeListOptions::default()).unwrap();
        assert_eq!(back.graph, g);
    }

    #[test]
    fn label_parsing_and_mapping() {
        assert!(matches!(parse_labels("a\nb\n").unwrap(), LabelFile::Positional(_)));
        assert!(matches!(parse_labels("1 a\n2 b\n").unwrap(), LabelFile::Keyed(_)));
        assert!(parse_labels("a\n1 b\n").is_err());
        assert!(parse_labels("").is_err());
        let m = labels_to_membership(&["10", "2", "10"]).unwrap();
        assert_eq!(m.labels(), &[1, 0, 1]);
        let m = labels_to_membership(&["1", "+1", "-2", "01"]).unwrap();
        assert_eq!(m.labels(), &[1, 1, 0, 1]);
        assert_eq!(m.k(), 2);
    }

    #[test]
    fn positional_labels_length_mismatch_names_counts() {
        let el = parse_edge_list("0 1\n1 2\n", EdgeListOptions::default()).unwrap();
        let labels = parse_labels("a\nb\n").unwrap();
        let err = labels.membership_for(&el, &[0, 1, 2]).unwrap_err().to_string();
        assert!(err.contains('2') && err.contains('3'), "{err}");
    }
}
