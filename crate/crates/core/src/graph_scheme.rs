//! The (2, n) graph sharing scheme: the secret graph is hidden as a sub graph
//! of every share among `b` padding nodes, each share is augmented with edges
//! drawn from a global ledger so no secret-node edge repeats across shares,
//! and a complete graph is planted so that every candidate secret stays
//! feasible. Any two shares recover the secret by node and edge intersection.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_traits::One;
use rand::Rng;
use thiserror::Error;

use crate::graph::{
    contains_clique, edge_intersection, node_intersection, pair_count, pair_index, pair_order,
    Edge, Graph, GraphError, Label,
};

/// Retries for a fresh-label draw before giving up.
const MAX_LABEL_RETRIES: usize = 256;

/// Attempts at flipping a nonempty augmentation subset before forcing a
/// single pair.
const MAX_SUBSET_RETRIES: usize = 64;

#[derive(Debug, Error, PartialEq)]
pub enum GraphSchemeError {
    #[error("the alphabet must name at least one node")]
    EmptyAlphabet,
    #[error("alphabet names must be strictly increasing")]
    AlphabetNotIncreasing,
    #[error("alphabet name {0:?} is empty or contains ',' or a line break")]
    BadAlphabetName(String),
    #[error("the secret graph must have nodes 0..{expected}, got {got} nodes")]
    SecretNodesMismatch { expected: usize, got: usize },
    #[error("a (2, n) deal needs n >= 2, got n = {0}")]
    TooFewShares(usize),
    #[error("probability {0} is outside [0, 1]")]
    BadProbability(f64),
    #[error("b = {b} padding nodes is below the security floor {required}; override requires the insecure flag")]
    InsecurePadding { b: usize, required: usize },
    #[error("could not draw a fresh node label after {MAX_LABEL_RETRIES} attempts")]
    LabelSpaceExhausted,
    #[error("no acceptable clique placement exists for this secret and padding")]
    PlantingImpossible,
    #[error("shares carry mismatched deal metadata")]
    MetadataMismatch,
    #[error("reconstruction needs two distinct shares, got index {0} twice")]
    SameShareIndex(usize),
    #[error("shares have {got} common nodes, expected {expected}; shares are corrupt or unrelated")]
    WrongCommonNodeCount { expected: usize, got: usize },
    #[error("share index {index} out of range 1..={n}")]
    BadIndex { index: usize, n: usize },
    #[error("share graph has {got} nodes, metadata requires {expected}")]
    WrongNodeCount { expected: usize, got: usize },
    #[error("audit labels are not nodes of the share graph")]
    AuditLabelsNotInShare,
    #[error("audited clique location is not a clique in the share")]
    PlantedNotClique,
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// The secret: a public, sorted alphabet of node names and a graph on the
/// positions 0..c-1 of that alphabet.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GraphSecret {
    alphabet: Vec<String>,
    graph: Graph,
}

pub(crate) fn check_alphabet(alphabet: &[String]) -> Result<(), GraphSchemeError> {
    if alphabet.is_empty() {
        return Err(GraphSchemeError::EmptyAlphabet);
    }
    for name in alphabet {
        if name.is_empty() || name.contains(',') || name.contains('\n') || name.contains('\r') {
            return Err(GraphSchemeError::BadAlphabetName(name.clone()));
        }
    }
    if !alphabet.windows(2).all(|w| w[0] < w[1]) {
        return Err(GraphSchemeError::AlphabetNotIncreasing);
    }
    Ok(())
}

impl GraphSecret {
    pub fn new(alphabet: Vec<String>, graph: Graph) -> Result<GraphSecret, GraphSchemeError> {
        check_alphabet(&alphabet)?;
        let c = alphabet.len();
        let expected: Vec<Label> = (0..c as u32).map(Label).collect();
        if graph.nodes() != expected.as_slice() {
            return Err(GraphSchemeError::SecretNodesMismatch {
                expected: c,
                got: graph.node_count(),
            });
        }
        Ok(GraphSecret { alphabet, graph })
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    /// Number of secret nodes, c.
    pub fn node_count(&self) -> usize {
        self.alphabet.len()
    }
}

/// Dealing parameters. `b` is the number of padding nodes; anything below
/// [`min_padding`] is refused unless `allow_insecure` is set.
#[derive(Clone, Debug)]
pub struct DealParams {
    pub n: usize,
    pub b: usize,
    pub edge_fill_prob: f64,
    pub augment_prob: f64,
    pub max_plant_retries: usize,
    pub allow_insecure: bool,
}

impl DealParams {
    pub fn new(n: usize, b: usize) -> DealParams {
        DealParams {
            n,
            b,
            edge_fill_prob: 0.5,
            augment_prob: 0.5,
            max_plant_retries: 64,
            allow_insecure: false,
        }
    }
}

/// Global record of secret-position edge pairs already present in some
/// share: the secret's own edges from the start, plus every augmentation
/// edge handed out since. Keeping shares disjoint here is what makes
/// pairwise edge intersection exact.
#[derive(Clone, Debug)]
pub struct EdgeLedger {
    c: usize,
    used: BTreeSet<(usize, usize)>,
}

impl EdgeLedger {
    pub fn new(secret: &GraphSecret) -> EdgeLedger {
        let used = secret
            .graph()
            .edges()
            .iter()
            .map(|e| (e.lo().0 as usize, e.hi().0 as usize))
            .collect();
        EdgeLedger {
            c: secret.node_count(),
            used,
        }
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.used.contains(&(i.min(j), i.max(j)))
    }

    pub fn insert(&mut self, i: usize, j: usize) {
        debug_assert!(i != j && i < self.c && j < self.c);
        self.used.insert((i.min(j), i.max(j)));
    }

    /// Position pairs not yet used, in canonical pair order.
    pub fn available(&self) -> Vec<(usize, usize)> {
        pair_order(self.c)
            .filter(|&(i, j)| !self.used.contains(&(i, j)))
            .collect()
    }

    pub fn is_full(&self) -> bool {
        self.used.len() == pair_count(self.c)
    }
}

/// One share: a graph on b+c nodes plus the public deal metadata.
///
/// `secret_labels` and `planted` are dealer-side audit data; share files
/// never carry them, so shares parsed from disk have neither.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GraphShare {
    index: usize,
    n: usize,
    c: usize,
    b: usize,
    alphabet: Vec<String>,
    graph: Graph,
    secret_labels: Option<Vec<Label>>,
    planted: Option<Vec<Label>>,
}

impl GraphShare {
    pub fn new(
        index: usize,
        n: usize,
        c: usize,
        b: usize,
        alphabet: Vec<String>,
        graph: Graph,
    ) -> Result<GraphShare, GraphSchemeError> {
        if n < 2 {
            return Err(GraphSchemeError::TooFewShares(n));
        }
        if index == 0 || index > n {
            return Err(GraphSchemeError::BadIndex { index, n });
        }
        check_alphabet(&alphabet)?;
        if alphabet.len() != c {
            return Err(GraphSchemeError::SecretNodesMismatch {
                expected: c,
                got: alphabet.len(),
            });
        }
        if graph.node_count() != b + c {
            return Err(GraphSchemeError::WrongNodeCount {
                expected: b + c,
                got: graph.node_count(),
            });
        }
        Ok(GraphShare {
            index,
            n,
            c,
            b,
            alphabet,
            graph,
            secret_labels: None,
            planted: None,
        })
    }

    /// Attaches the dealer's audit record: where the secret sits and where
    /// the complete graph was planted.
    pub fn with_audit(
        mut self,
        secret_labels: Vec<Label>,
        planted: Vec<Label>,
    ) -> Result<GraphShare, GraphSchemeError> {
        for labels in [&secret_labels, &planted] {
            if labels.len() != self.c || !labels.iter().all(|&l| self.graph.has_node(l)) {
                return Err(GraphSchemeError::AuditLabelsNotInShare);
            }
        }
        if !contains_clique(&self.graph, &planted)? {
            return Err(GraphSchemeError::PlantedNotClique);
        }
        self.secret_labels = Some(secret_labels);
        self.planted = Some(planted);
        Ok(self)
    }

    pub fn index(&self) -> usize {
        self.index
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn c(&self) -> usize {
        self.c
    }

    pub fn b(&self) -> usize {
        self.b
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn secret_labels(&self) -> Option<&[Label]> {
        self.secret_labels.as_deref()
    }

    pub fn planted(&self) -> Option<&[Label]> {
        self.planted.as_deref()
    }
}

/// Exact binomial coefficient C(n, k).
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::ZERO;
    }
    let k = k.min(n - k);
    let mut result = BigUint::one();
    for i in 0..k {
        result = result * (n - i) / (i + 1);
    }
    result
}

/// 2^C(c,2), the number of labeled graphs on c nodes.
pub fn candidate_count(c: usize) -> BigUint {
    BigUint::one() << pair_count(c)
}

/// Smallest b >= 0 with C(b+c, c) >= target, by exact big-integer comparison.
pub fn min_padding_target(c: usize, target: &BigUint) -> usize {
    assert!(c >= 1, "secret must have at least one node");
    let meets = |b: usize| binomial((b + c) as u64, c as u64) >= *target;
    if meets(0) {
        return 0;
    }
    let mut hi = 1usize;
    while !meets(hi) {
        hi = hi.checked_mul(2).expect("padding bound exceeds usize");
    }
    let mut lo = hi / 2; // known insufficient
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if meets(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// Smallest b making subset picking at least as hard as brute force over all
/// c-node secrets: C(b+c, c) >= 2^C(c,2).
pub fn min_padding(c: usize) -> usize {
    min_padding_target(c, &candidate_count(c))
}

/// Steps to reconstruct under the flat operation count: b+c node
/// comparisons plus C(c,2) edge checks.
pub fn reconstruction_cost(c: usize, b: usize) -> u64 {
    assert!(c >= 1, "secret must have at least one node");
    (b + c) as u64 + pair_count(c) as u64
}

fn draw_distinct_labels<R: Rng + ?Sized>(
    rng: &mut R,
    count: usize,
) -> Result<Vec<Label>, GraphSchemeError> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let mut attempts = 0;
        loop {
            let l: u32 = rng.random();
            if seen.insert(l) {
                out.push(Label(l));
                break;
            }
            attempts += 1;
            if attempts >= MAX_LABEL_RETRIES {
                return Err(GraphSchemeError::LabelSpaceExhausted);
            }
        }
    }
    Ok(out)
}

/// A uniformly flipped nonempty subset of `available`; after too many empty
/// flips, a single uniform pair.
fn nonempty_subset<R: Rng + ?Sized>(
    rng: &mut R,
    available: &[(usize, usize)],
) -> Vec<(usize, usize)> {
    debug_assert!(!available.is_empty());
    for _ in 0..MAX_SUBSET_RETRIES {
        let chosen: Vec<(usize, usize)> = available
            .iter()
            .copied()
            .filter(|_| rng.random_bool(0.5))
            .collect();
        if !chosen.is_empty() {
            return chosen;
        }
    }
    vec![available[rng.random_range(0..available.len())]]
}

/// Picks c of the b+c node positions such that whatever secret positions are
/// included already form a clique of the secret itself; completing the pick
/// into a clique then never fabricates a secret-node edge.
fn plant_pick<R: Rng + ?Sized>(
    rng: &mut R,
    secret: &GraphSecret,
    total: usize,
    max_retries: usize,
) -> Result<Vec<usize>, GraphSchemeError> {
    let c = secret.node_count();
    let acceptable = |picked: &[usize]| {
        let secret_positions: Vec<usize> = picked.iter().copied().filter(|&p| p < c).collect();
        secret_positions.iter().enumerate().all(|(idx, &x)| {
            secret_positions[idx + 1..]
                .iter()
                .all(|&y| secret.graph().has_edge(Label(x as u32), Label(y as u32)))
        })
    };

    for _ in 0..max_retries {
        let mut picked: Vec<usize> =
            rand::seq::index::sample(rng, total, c).iter().collect();
        picked.sort_unstable();
        if acceptable(&picked) {
            return Ok(picked);
        }
    }
    // Deterministic fallback: first acceptable pick in lexicographic order.
    use itertools::Itertools;
    (0..total)
        .combinations(c)
        .find(|picked| acceptable(picked))
        .ok_or(GraphSchemeError::PlantingImpossible)
}

/// Deals `params.n` shares of the secret.
///
/// The padded base graph is built once and copied; each copy gets fresh junk
/// labels, optional augmentation edges drawn from the ledger, and a planted
/// complete graph. The c secret positions keep one common sorted label
/// vector in alphabet order across all shares.
pub fn graph_deal<R: Rng + ?Sized>(
    secret: &GraphSecret,
    params: &DealParams,
    rng: &mut R,
) -> Result<Vec<GraphShare>, GraphSchemeError> {
    let c = secret.node_count();
    let (n, b) = (params.n, params.b);
    if n < 2 {
        return Err(GraphSchemeError::TooFewShares(n));
    }
    for p in [params.edge_fill_prob, params.augment_prob] {
        if !(0.0..=1.0).contains(&p) {
            return Err(GraphSchemeError::BadProbability(p));
        }
    }
    if !params.allow_insecure {
        let required = min_padding(c);
        if b < required {
            return Err(GraphSchemeError::InsecurePadding { b, required });
        }
    }
    let total = c + b;

    // Base graph on positions 0..total as a dense pair table: the secret
    // plus random wiring of every pair with at least one padding endpoint.
    let mut base = vec![false; pair_count(total)];
    for e in secret.graph().edges() {
        base[pair_index(total, e.lo().0 as usize, e.hi().0 as usize)] = true;
    }
    for i in 0..total {
        for j in (i + 1).max(c)..total {
            if rng.random_bool(params.edge_fill_prob) {
                base[pair_index(total, i, j)] = true;
            }
        }
    }

    // One common sorted label vector for the secret, fresh labels per share
    // for the padding nodes; all c + n*b labels distinct.
    let labels = draw_distinct_labels(rng, c + n * b)?;
    let mut secret_labels: Vec<Label> = labels[..c].to_vec();
    secret_labels.sort_unstable();

    let mut ledger = EdgeLedger::new(secret);
    let mut shares = Vec::with_capacity(n);
    for s in 0..n {
        let mut table = base.clone();

        // Augmentation: sometimes add unused secret-position pairs to this
        // share and retire them in the ledger.
        if !ledger.is_full() && rng.random_bool(params.augment_prob) {
            for (i, j) in nonempty_subset(rng, &ledger.available()) {
                table[pair_index(total, i, j)] = true;
                ledger.insert(i, j);
            }
        }

        // Plant a complete graph on an acceptable pick of c positions.
        let picked = plant_pick(rng, secret, total, params.max_plant_retries)?;
        for (idx, &x) in picked.iter().enumerate() {
            for &y in &picked[idx + 1..] {
                table[pair_index(total, x, y)] = true;
            }
        }

        // Relabel positions into this share's label space.
        let mut position_label = vec![Label(0); total];
        position_label[..c].copy_from_slice(&secret_labels);
        position_label[c..].copy_from_slice(&labels[c + s * b..c + (s + 1) * b]);

        let mut nodes = position_label.clone();
        nodes.sort_unstable();
        let mut share_edges = Vec::with_capacity(table.len() / 2 + c * c);
        let mut t = 0;
        for i in 0..total {
            for j in i + 1..total {
                if table[t] {
                    share_edges.push(
                        Edge::new(position_label[i], position_label[j])
                            .expect("distinct labels"),
                    );
                }
                t += 1;
            }
        }
        share_edges.sort_unstable();
        let graph = Graph::from_sorted_parts(nodes, share_edges);

        let mut planted: Vec<Label> = picked.iter().map(|&p| position_label[p]).collect();
        planted.sort_unstable();
        shares.push(
            GraphShare::new(s + 1, n, c, b, secret.alphabet().to_vec(), graph)?
                .with_audit(secret_labels.clone(), planted)?,
        );
    }
    Ok(shares)
}

/// Recovers the secret from any two distinct shares of one deal.
///
/// The common node labels are exactly the secret's (junk labels never
/// repeat across shares); the common edges on them are exactly the secret's
/// (the ledger kept everything else share-local); the i-th smallest common
/// label maps back to the i-th alphabet name.
pub fn graph_reconstruct(
    share_a: &GraphShare,
    share_b: &GraphShare,
) -> Result<GraphSecret, GraphSchemeError> {
    if (share_a.n, share_a.c, share_a.b, &share_a.alphabet)
        != (share_b.n, share_b.c, share_b.b, &share_b.alphabet)
    {
        return Err(GraphSchemeError::MetadataMismatch);
    }
    if share_a.index == share_b.index {
        return Err(GraphSchemeError::SameShareIndex(share_a.index));
    }
    let c = share_a.c;

    let common = node_intersection(share_a.graph.nodes(), share_b.graph.nodes())?;
    if common.len() != c {
        return Err(GraphSchemeError::WrongCommonNodeCount {
            expected: c,
            got: common.len(),
        });
    }

    let common_edges = edge_intersection(&share_a.graph, &share_b.graph, &common)?;
    let position_of = |l: Label| common.binary_search(&l).expect("common label") as u32;
    let edges: BTreeSet<Edge> = common_edges
        .iter()
        .map(|e| {
            Edge::new(Label(position_of(e.lo())), Label(position_of(e.hi())))
                .expect("distinct positions")
        })
        .collect();
    let graph = Graph::new((0..c as u32).map(Label).collect(), edges)?;
    GraphSecret::new(share_a.alphabet.clone(), graph)
}
