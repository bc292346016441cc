//! Threshold secret sharing without arithmetic: secrets are hidden as sub
//! graphs (or subsets) of their shares and recovered by intersection.
//!
//! The crate provides:
//!
//! - [`graph`]: labeled simple graphs and the intersection/clique/enumeration
//!   primitives.
//! - [`set_scheme`]: (k, n) sharing of a set of opaque tokens.
//! - [`graph_scheme`]: the (2, n) graph scheme with padding nodes, the edge
//!   ledger and clique planting, plus the padding bound C(b+c, c) >= 2^C(c,2).
//! - [`password`]: 8-character base-62 passwords as 11-node graphs.
//! - [`shamir`]: a (2, n) Shamir baseline over a prime field for cost
//!   comparison.
//! - [`analyzer`]: brute-force feasibility checks of the secrecy claims at
//!   desk scale.
//! - [`fileio`], [`dot`], [`cli`]: the text formats, DOT export and the
//!   command-line tool.

pub mod analyzer;
pub mod cli;
pub mod dot;
pub mod fileio;
pub mod graph;
pub mod graph_scheme;
pub mod password;
pub mod set_scheme;
pub mod shamir;

pub use graph::{Edge, Graph, Label};
pub use graph_scheme::{DealParams, GraphSecret, GraphShare};
pub use set_scheme::{SetSecret, SetShare, Token};
pub use shamir::{ShamirParams, ShamirShare};
