//! Brute-force verification of the schemes' secrecy claims at desk scale:
//! is every candidate secret still constructible from a single graph share
//! (feasibility-level perfect secrecy), and which candidates does a single
//! set share rule out (the set scheme's leak).

use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_traits::One;
use thiserror::Error;

use crate::graph::{mask_from_graph, pair_count, pair_index, Graph, GraphError, Label};
use crate::graph_scheme::{binomial, GraphShare};
use crate::set_scheme::{SetShare, Token};

/// Default node-count cap for exhaustive candidate enumeration.
pub const DEFAULT_FEASIBILITY_CAP: usize = 5;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AnalyzerError {
    #[error("candidate must be a graph on positions 0..{expected}")]
    CandidateMismatch { expected: usize },
    #[error("candidate enumeration for c = {c} exceeds the cap of {cap} nodes")]
    CapExceeded { c: usize, cap: usize },
    #[error("candidate has {got} tokens, the share's secret cardinality is {expected}")]
    WrongCandidateCardinality { expected: usize, got: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// A c-subset of share nodes whose induced subgraph contains the candidate;
/// candidate position i corresponds to `nodes[i]` (order preserving).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Witness {
    pub nodes: Vec<Label>,
}

/// Feasibility verdict for one candidate edge bitmask.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CandidateReport {
    pub mask: u64,
    pub feasible: bool,
    pub witness: Option<Witness>,
}

/// Feasibility of every possible c-node secret against one share.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FeasibilityReport {
    pub c: usize,
    pub candidates: u64,
    pub feasible_count: u64,
    pub per_candidate: Vec<CandidateReport>,
}

impl FeasibilityReport {
    /// True when no candidate is ruled out, the testable reading of perfect
    /// secrecy for a single share.
    pub fn all_feasible(&self) -> bool {
        self.feasible_count == self.candidates
    }
}

fn positions(c: usize) -> Vec<Label> {
    (0..c as u32).map(Label).collect()
}

/// Induced edge bitmask of each sorted c-subset of the share's nodes.
fn induced_masks(share: &GraphShare) -> Vec<(Vec<Label>, u64)> {
    use itertools::Itertools;
    let c = share.c();
    share
        .graph()
        .nodes()
        .iter()
        .copied()
        .combinations(c)
        .map(|subset| {
            let mut mask = 0u64;
            for i in 0..c {
                for j in i + 1..c {
                    if share.graph().has_edge(subset[i], subset[j]) {
                        mask |= 1 << pair_index(c, i, j);
                    }
                }
            }
            (subset, mask)
        })
        .collect()
}

/// Does some c-subset of the share contain the candidate under the
/// order-preserving positional relabeling? Returns the first witness found.
pub fn candidate_feasible(
    share: &GraphShare,
    candidate: &Graph,
) -> Result<Option<Witness>, AnalyzerError> {
    let c = share.c();
    if candidate.nodes() != positions(c).as_slice() {
        return Err(AnalyzerError::CandidateMismatch { expected: c });
    }
    let target = mask_from_graph(candidate)?;
    Ok(induced_masks(share)
        .into_iter()
        .find(|&(_, induced)| target & !induced == 0)
        .map(|(nodes, _)| Witness { nodes }))
}

/// Runs [`candidate_feasible`] over all 2^C(c,2) candidates.
pub fn posterior_feasibility(share: &GraphShare) -> Result<FeasibilityReport, AnalyzerError> {
    posterior_feasibility_capped(share, DEFAULT_FEASIBILITY_CAP)
}

/// As [`posterior_feasibility`] with an explicit enumeration cap. The cap
/// is bounded by the u64 edge-bitmask width regardless of the caller.
pub fn posterior_feasibility_capped(
    share: &GraphShare,
    cap: usize,
) -> Result<FeasibilityReport, AnalyzerError> {
    let c = share.c();
    if c > cap.min(crate::graph::MAX_MASK_NODES) {
        return Err(AnalyzerError::CapExceeded {
            c,
            cap: cap.min(crate::graph::MAX_MASK_NODES),
        });
    }
    let subsets = induced_masks(share);
    let candidates = 1u64 << pair_count(c);
    let mut per_candidate = Vec::with_capacity(candidates as usize);
    let mut feasible_count = 0;
    for mask in 0..candidates {
        let witness = subsets
            .iter()
            .find(|&&(_, induced)| mask & !induced == 0)
            .map(|(nodes, _)| Witness {
                nodes: nodes.clone(),
            });
        feasible_count += witness.is_some() as u64;
        per_candidate.push(CandidateReport {
            mask,
            feasible: witness.is_some(),
            witness,
        });
    }
    Ok(FeasibilityReport {
        c,
        candidates,
        feasible_count,
        per_candidate,
    })
}

/// The attacker's subset-picking space against the brute-force secret space.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SearchSpace {
    /// C(b+c, c): ways to pick candidate secret nodes out of a share.
    pub picks: BigUint,
    /// 2^C(c,2): number of possible c-node secrets.
    pub brute: BigUint,
}

impl SearchSpace {
    pub fn picks_at_least_brute(&self) -> bool {
        self.picks >= self.brute
    }
}

/// Exact search-space sizes for a share of c secret and b padding nodes.
pub fn search_space(c: u64, b: u64) -> SearchSpace {
    let pairs = (c as u128 * (c as u128).saturating_sub(1) / 2) as usize;
    SearchSpace {
        picks: binomial(b + c, c),
        brute: BigUint::one() << pairs,
    }
}

/// Can `candidate` still be the secret set given this single share? A set
/// share rules out every candidate not fully contained in it, which is
/// exactly the scheme's leak.
pub fn set_scheme_leak_check(
    share: &SetShare,
    candidate: &BTreeSet<Token>,
) -> Result<bool, AnalyzerError> {
    if candidate.len() != share.u() {
        return Err(AnalyzerError::WrongCandidateCardinality {
            expected: share.u(),
            got: candidate.len(),
        });
    }
    Ok(candidate.is_subset(share.elements()))
}
