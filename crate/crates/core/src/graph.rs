//! Labeled simple graphs and the primitive operations the sharing schemes
//! are built from: sorted-merge intersection, clique checks, complete graphs
//! and exhaustive enumeration of small labeled graphs.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

/// Default node-count cap for [`enumerate_graphs`]. 2^C(5,2) = 1024 graphs;
/// larger alphabets are refused unless the caller raises the cap explicitly.
pub const DEFAULT_ENUMERATION_CAP: usize = 5;

/// Widest alphabet for which an edge bitmask fits in a `u64` (C(11,2) = 55).
pub const MAX_MASK_NODES: usize = 11;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("input sequence is not strictly increasing")]
    NotStrictlyIncreasing,
    #[error("label {0} does not occur in the graph")]
    UnknownLabel(Label),
    #[error("self-loop on label {0} is not allowed")]
    SelfLoop(Label),
    #[error("edge endpoint {0} is not a node of the graph")]
    EndpointNotANode(Label),
    #[error("alphabet has {got} nodes, exceeding the enumeration cap of {cap}")]
    EnumerationCapExceeded { got: usize, cap: usize },
    #[error("edge bitmask needs {0} nodes; at most {MAX_MASK_NODES} are supported")]
    MaskTooWide(usize),
    #[error("edge bitmask {mask:#x} out of range for {nodes} nodes")]
    MaskOutOfRange { mask: u64, nodes: usize },
}

/// A node label, compared numerically.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Label(pub u32);

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl From<u32> for Label {
    fn from(value: u32) -> Self {
        Label(value)
    }
}

/// An undirected edge stored in canonical order (`lo < hi`).
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Edge {
    lo: Label,
    hi: Label,
}

impl Edge {
    /// Builds a canonical edge between two distinct labels.
    pub fn new(a: Label, b: Label) -> Result<Edge, GraphError> {
        match a.cmp(&b) {
            std::cmp::Ordering::Less => Ok(Edge { lo: a, hi: b }),
            std::cmp::Ordering::Greater => Ok(Edge { lo: b, hi: a }),
            std::cmp::Ordering::Equal => Err(GraphError::SelfLoop(a)),
        }
    }

    pub fn lo(&self) -> Label {
        self.lo
    }

    pub fn hi(&self) -> Label {
        self.hi
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.lo, self.hi)
    }
}

/// A labeled simple graph: strictly increasing node labels plus a set of
/// canonical edges whose endpoints all occur among the nodes. The edge set
/// is stored as a sorted vector; membership tests binary search it.
///
/// Values are immutable after construction; all operations on them are pure.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Graph {
    nodes: Vec<Label>,
    edges: Vec<Edge>,
}

impl Graph {
    pub fn new(
        nodes: Vec<Label>,
        edges: impl IntoIterator<Item = Edge>,
    ) -> Result<Graph, GraphError> {
        if !strictly_increasing(&nodes) {
            return Err(GraphError::NotStrictlyIncreasing);
        }
        let mut edges: Vec<Edge> = edges.into_iter().collect();
        edges.sort_unstable();
        edges.dedup();
        for e in &edges {
            for endpoint in [e.lo, e.hi] {
                if nodes.binary_search(&endpoint).is_err() {
                    return Err(GraphError::EndpointNotANode(endpoint));
                }
            }
        }
        Ok(Graph { nodes, edges })
    }

    /// Constructor for callers that guarantee sorted nodes, sorted distinct
    /// edges, and endpoints drawn from the nodes.
    pub(crate) fn from_sorted_parts(nodes: Vec<Label>, edges: Vec<Edge>) -> Graph {
        debug_assert!(strictly_increasing(&nodes));
        debug_assert!(strictly_increasing(&edges));
        debug_assert!(edges
            .iter()
            .all(|e| nodes.binary_search(&e.lo).is_ok() && nodes.binary_search(&e.hi).is_ok()));
        Graph { nodes, edges }
    }

    /// Graph on the given nodes with no edges.
    pub fn edgeless(nodes: Vec<Label>) -> Result<Graph, GraphError> {
        Graph::new(nodes, [])
    }

    pub fn nodes(&self) -> &[Label] {
        &self.nodes
    }

    /// Edges in canonical (lo, hi) order, each exactly once.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn has_node(&self, l: Label) -> bool {
        self.nodes.binary_search(&l).is_ok()
    }

    pub fn has_edge(&self, a: Label, b: Label) -> bool {
        Edge::new(a, b)
            .is_ok_and(|e| self.edges.binary_search(&e).is_ok())
    }
}

fn strictly_increasing<T: Ord>(xs: &[T]) -> bool {
    xs.windows(2).all(|w| w[0] < w[1])
}

/// Single-pass merge intersection of two strictly increasing sequences.
///
/// Walks both slices with one cursor each, advancing the smaller side and
/// emitting elements present in both.
pub fn intersect_sorted<T: Ord + Clone>(a: &[T], b: &[T]) -> Result<Vec<T>, GraphError> {
    if !strictly_increasing(a) || !strictly_increasing(b) {
        return Err(GraphError::NotStrictlyIncreasing);
    }
    let mut out = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Equal => {
                out.push(a[i].clone());
                i += 1;
                j += 1;
            }
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
        }
    }
    Ok(out)
}

/// Intersection of two sorted node-label sequences.
pub fn node_intersection(a: &[Label], b: &[Label]) -> Result<Vec<Label>, GraphError> {
    intersect_sorted(a, b)
}

/// Edges common to both graphs whose endpoints both lie in `nodes`.
///
/// `nodes` must be strictly increasing and a subset of both graphs' nodes.
pub fn edge_intersection(
    g1: &Graph,
    g2: &Graph,
    nodes: &[Label],
) -> Result<BTreeSet<Edge>, GraphError> {
    if !strictly_increasing(nodes) {
        return Err(GraphError::NotStrictlyIncreasing);
    }
    for &l in nodes {
        if !g1.has_node(l) || !g2.has_node(l) {
            return Err(GraphError::UnknownLabel(l));
        }
    }
    let mut out = BTreeSet::new();
    for (i, &a) in nodes.iter().enumerate() {
        for &b in &nodes[i + 1..] {
            if g1.has_edge(a, b) && g2.has_edge(a, b) {
                out.insert(Edge::new(a, b).expect("distinct labels"));
            }
        }
    }
    Ok(out)
}

/// Complete graph on the given strictly increasing labels.
pub fn complete_graph(labels: &[Label]) -> Result<Graph, GraphError> {
    if !strictly_increasing(labels) {
        return Err(GraphError::NotStrictlyIncreasing);
    }
    let mut edges = Vec::with_capacity(pair_count(labels.len()));
    for (i, &a) in labels.iter().enumerate() {
        for &b in &labels[i + 1..] {
            edges.push(Edge::new(a, b).expect("distinct labels"));
        }
    }
    Ok(Graph::from_sorted_parts(labels.to_vec(), edges))
}

/// True iff every pair among `labels` is an edge of `g`.
///
/// Every label must occur in `g`; labels need not be sorted.
pub fn contains_clique(g: &Graph, labels: &[Label]) -> Result<bool, GraphError> {
    for &l in labels {
        if !g.has_node(l) {
            return Err(GraphError::UnknownLabel(l));
        }
    }
    for (i, &a) in labels.iter().enumerate() {
        for &b in &labels[i + 1..] {
            if !g.has_edge(a, b) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Canonical pair order over node positions `0..c`:
/// (0,1), (0,2), ..., (0,c-1), (1,2), ..., (c-2,c-1).
///
/// Bit `t` of an edge bitmask refers to the `t`-th pair of this sequence,
/// bit 0 least significant.
pub fn pair_order(c: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..c).flat_map(move |i| (i + 1..c).map(move |j| (i, j)))
}

/// Bit index of the position pair `(i, j)`, `i < j`, in [`pair_order`].
pub fn pair_index(c: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < c);
    i * c - i * (i + 1) / 2 + (j - i - 1)
}

fn check_mask_alphabet(alphabet: &[Label]) -> Result<(), GraphError> {
    if !strictly_increasing(alphabet) {
        return Err(GraphError::NotStrictlyIncreasing);
    }
    if alphabet.len() > MAX_MASK_NODES {
        return Err(GraphError::MaskTooWide(alphabet.len()));
    }
    Ok(())
}

/// Number of possible edges on `c` nodes, C(c, 2).
pub fn pair_count(c: usize) -> usize {
    c * c.saturating_sub(1) / 2
}

/// Decodes an edge bitmask into the graph it denotes on `alphabet`.
pub fn graph_from_mask(alphabet: &[Label], mask: u64) -> Result<Graph, GraphError> {
    check_mask_alphabet(alphabet)?;
    let bits = pair_count(alphabet.len());
    if bits < 64 && mask >> bits != 0 {
        return Err(GraphError::MaskOutOfRange {
            mask,
            nodes: alphabet.len(),
        });
    }
    let mut edges = Vec::with_capacity(mask.count_ones() as usize);
    for (t, (i, j)) in pair_order(alphabet.len()).enumerate() {
        if mask >> t & 1 == 1 {
            edges.push(Edge::new(alphabet[i], alphabet[j]).expect("distinct labels"));
        }
    }
    Ok(Graph::from_sorted_parts(alphabet.to_vec(), edges))
}

/// Encodes a graph as the edge bitmask over its own node sequence.
pub fn mask_from_graph(g: &Graph) -> Result<u64, GraphError> {
    check_mask_alphabet(g.nodes())?;
    let c = g.node_count();
    let mut mask = 0u64;
    for e in g.edges() {
        let i = g.nodes().binary_search(&e.lo()).expect("endpoint is a node");
        let j = g.nodes().binary_search(&e.hi()).expect("endpoint is a node");
        mask |= 1 << pair_index(c, i, j);
    }
    Ok(mask)
}

/// All 2^C(c,2) labeled graphs on `alphabet`, in edge-bitmask order.
pub fn enumerate_graphs(alphabet: &[Label]) -> Result<GraphEnumeration, GraphError> {
    enumerate_graphs_capped(alphabet, DEFAULT_ENUMERATION_CAP)
}

/// As [`enumerate_graphs`] with an explicit node-count cap.
pub fn enumerate_graphs_capped(
    alphabet: &[Label],
    cap: usize,
) -> Result<GraphEnumeration, GraphError> {
    check_mask_alphabet(alphabet)?;
    if alphabet.len() > cap {
        return Err(GraphError::EnumerationCapExceeded {
            got: alphabet.len(),
            cap,
        });
    }
    Ok(GraphEnumeration {
        alphabet: alphabet.to_vec(),
        next: 0,
        total: 1u64 << pair_count(alphabet.len()),
    })
}

/// Iterator over every labeled graph on a fixed alphabet.
#[derive(Clone, Debug)]
pub struct GraphEnumeration {
    alphabet: Vec<Label>,
    next: u64,
    total: u64,
}

impl GraphEnumeration {
    /// Total number of graphs the enumeration yields, 2^C(c,2).
    pub fn total(&self) -> u64 {
        self.total
    }
}

impl Iterator for GraphEnumeration {
    type Item = Graph;

    fn next(&mut self) -> Option<Graph> {
        if self.next >= self.total {
            return None;
        }
        let mask = self.next;
        self.next += 1;
        Some(graph_from_mask(&self.alphabet, mask).expect("mask in range"))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = (self.total - self.next) as usize;
        (left, Some(left))
    }
}
