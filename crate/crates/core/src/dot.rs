//! Graphviz DOT export, so shares can be printed and a secret reconstructed
//! by eye: lay two printed shares side by side, keep the nodes with labels
//! appearing on both, keep the edges present on both.

use std::fmt::Write as _;

use crate::graph::Graph;

/// Renders an undirected DOT graph with deterministic node and edge order.
pub fn graph_to_dot(g: &Graph) -> String {
    let mut out = String::from("graph g {\n");
    for node in g.nodes() {
        let _ = writeln!(out, "    {node};");
    }
    for e in g.edges() {
        let _ = writeln!(out, "    {} -- {};", e.lo(), e.hi());
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete_graph, Graph, Label};

    #[test]
    fn single_node_graph() {
        let g = Graph::edgeless(vec![Label(4)]).unwrap();
        assert_eq!(graph_to_dot(&g), "graph g {\n    4;\n}\n");
    }

    #[test]
    fn triangle_edges_in_sorted_order() {
        let g = complete_graph(&[Label(1), Label(2), Label(3)]).unwrap();
        assert_eq!(
            graph_to_dot(&g),
            "graph g {\n    1;\n    2;\n    3;\n    1 -- 2;\n    1 -- 3;\n    2 -- 3;\n}\n"
        );
    }

    #[test]
    fn edge_line_count_matches_edge_count() {
        let g = complete_graph(&(0..6).map(Label).collect::<Vec<_>>()).unwrap();
        let dot = graph_to_dot(&g);
        assert_eq!(dot.matches(" -- ").count(), g.edge_count());
    }
}
