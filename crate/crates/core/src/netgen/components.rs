use std::collections::VecDeque;

use super::graph::AdjacencyGraph;

/// Connected components, each sorted ascending, ordered by smallest member.
pub fn connected_components(graph: &AdjacencyGraph) -> Vec<Vec<usize>> {
    let n = graph.n();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    let mut queue = VecDeque::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        queue.push_back(start);
        let mut comp = Vec::new();
        while let Some(v) = queue.pop_front() {
            comp.push(v);
            for &w in graph.neighbors(v) {
                let w = w as usize;
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

/// Subgraph induced on the largest connected component, with the original
/// index of each retained node (ascending). Ties go to the component whose
/// smallest node index is lowest.
pub fn largest_connected_component(graph: &AdjacencyGraph) -> (AdjacencyGraph, Vec<usize>) {
    let comps = connected_components(graph);
    let mut best: Option<Vec<usize>> = None;
    for comp in comps {
        // Components arrive ordered by smallest member, so strict > keeps
        // the earliest on ties.
        if best.as_ref().is_none_or(|b| comp.len() > b.len()) {
            best = Some(comp);
        }
    }
    match best {
        None => (graph.clone(), Vec::new()),
        Some(nodes) => (graph.induced_subgraph(&nodes), nodes),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn connected_graph_gives_identity() {
        let g = AdjacencyGraph::from_edges(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
        let (sub, map) = largest_connected_component(&g);
        assert_eq!(sub, g);
        assert_eq!(map, vec![0, 1, 2, 3]);
    }

    #[test]
    fn picks_larger_component() {
        let g = AdjacencyGraph::from_edges(5, [(0, 3), (1, 4), (4, 2)]).unwrap();
        let (sub, map) = largest_connected_component(&g);
        assert_eq!(map, vec![1, 2, 4]);
        assert_eq!(sub.edge_count(), 2);
        assert!(sub.has_edge(0, 2) && sub.has_edge(1, 2));
    }

    #[test]
    fn ties_break_to_smallest_index() {
        let g = AdjacencyGraph::from_edges(4, [(1, 3), (0, 2)]).unwrap();
        assert_eq!(largest_connected_component(&g).1, vec![0, 2]);
    }

    #[test]
    fn empty_graph_returns_itself() {
        let g = AdjacencyGraph::empty(0);
        let (sub, map) = largest_connected_component(&g);
        assert_eq!(sub, g);
        assert!(map.is_empty());
    }
}
