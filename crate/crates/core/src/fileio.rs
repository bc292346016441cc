//! Line-based text formats for graphs and shares. All formats are UTF-8
//! with LF line endings and a fixed field order; parsers are strict and
//! report the offending line. Serialization is canonical: parsing and
//! re-serializing a file reproduces it byte for byte.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use thiserror::Error;

use crate::graph::{Edge, Graph, Label};
use crate::graph_scheme::{check_alphabet, GraphShare};
use crate::set_scheme::{SetShare, Token};
use crate::shamir::{is_prime, ShamirShare};

/// A parse failure at a specific line of the input text.
#[derive(Debug, Error, PartialEq, Eq)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

fn err(line: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        line,
        message: message.into(),
    }
}

/// A serialization failure: share content the text format cannot carry.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum FormatError {
    #[error("token is not single-line UTF-8 text")]
    TokenNotText,
}

struct LineReader<'a> {
    lines: std::str::Lines<'a>,
    current: usize,
}

impl<'a> LineReader<'a> {
    fn new(text: &'a str) -> Self {
        LineReader {
            lines: text.lines(),
            current: 0,
        }
    }

    fn next_line(&mut self) -> Option<(usize, &'a str)> {
        self.lines.next().map(|l| {
            self.current += 1;
            (self.current, l)
        })
    }

    fn expect_line(&mut self, what: &str) -> Result<(usize, &'a str), ParseError> {
        self.next_line()
            .ok_or_else(|| err(self.current + 1, format!("expected {what}, found end of file")))
    }

    fn expect_exact(&mut self, exact: &str) -> Result<(), ParseError> {
        let (line, got) = self.expect_line(&format!("`{exact}`"))?;
        if got != exact {
            return Err(err(line, format!("expected `{exact}`, got `{got}`")));
        }
        Ok(())
    }

    /// Reads a `key: value` line with the exact expected key.
    fn field(&mut self, key: &str) -> Result<(usize, &'a str), ParseError> {
        let (line, got) = self.expect_line(&format!("field `{key}`"))?;
        match got.strip_prefix(&format!("{key}: ")) {
            Some(rest) => Ok((line, rest)),
            None if got == format!("{key}:") => Ok((line, "")),
            None => Err(err(line, format!("expected field `{key}`, got `{got}`"))),
        }
    }

    fn finish(&mut self) -> Result<(), ParseError> {
        match self.next_line() {
            None => Ok(()),
            Some((line, got)) => Err(err(line, format!("unexpected trailing line `{got}`"))),
        }
    }
}

fn parse_u64(line: usize, s: &str, what: &str) -> Result<u64, ParseError> {
    s.parse()
        .map_err(|_| err(line, format!("{what} `{s}` is not a decimal integer")))
}

fn parse_usize(line: usize, s: &str, what: &str) -> Result<usize, ParseError> {
    s.parse()
        .map_err(|_| err(line, format!("{what} `{s}` is not a decimal integer")))
}

fn parse_label(line: usize, s: &str) -> Result<Label, ParseError> {
    s.parse::<u32>()
        .map(Label)
        .map_err(|_| err(line, format!("label `{s}` is not a decimal 32-bit integer")))
}

fn parse_node_list(line: usize, raw: &str) -> Result<Vec<Label>, ParseError> {
    if raw.is_empty() {
        return Ok(Vec::new());
    }
    let nodes: Vec<Label> = raw
        .split(',')
        .map(|s| parse_label(line, s))
        .collect::<Result<_, _>>()?;
    if !nodes.windows(2).all(|w| w[0] < w[1]) {
        return Err(err(line, "node labels must be strictly increasing"));
    }
    Ok(nodes)
}

/// Parses the `edge: lo hi` lines that terminate a graph section.
fn parse_edges(
    reader: &mut LineReader<'_>,
    nodes: &[Label],
) -> Result<BTreeSet<Edge>, ParseError> {
    let mut edges = BTreeSet::new();
    let mut last: Option<Edge> = None;
    while let Some((line, text)) = reader.next_line() {
        let rest = text
            .strip_prefix("edge: ")
            .ok_or_else(|| err(line, format!("expected `edge: <lo> <hi>`, got `{text}`")))?;
        let mut parts = rest.split(' ');
        let (lo, hi) = match (parts.next(), parts.next(), parts.next()) {
            (Some(lo), Some(hi), None) => (parse_label(line, lo)?, parse_label(line, hi)?),
            _ => return Err(err(line, format!("expected `edge: <lo> <hi>`, got `{text}`"))),
        };
        if lo >= hi {
            return Err(err(line, format!("edge endpoints must satisfy lo < hi, got {lo} {hi}")));
        }
        for endpoint in [lo, hi] {
            if nodes.binary_search(&endpoint).is_err() {
                return Err(err(line, format!("edge endpoint {endpoint} is not a listed node")));
            }
        }
        let edge = Edge::new(lo, hi).expect("lo < hi");
        if let Some(prev) = last {
            if edge <= prev {
                return Err(err(line, "edges must be strictly increasing by (lo, hi)"));
            }
        }
        last = Some(edge);
        edges.insert(edge);
    }
    Ok(edges)
}

fn write_node_list(out: &mut String, nodes: &[Label]) {
    out.push_str("nodes:");
    for (i, l) in nodes.iter().enumerate() {
        out.push(if i == 0 { ' ' } else { ',' });
        let _ = write!(out, "{l}");
    }
    out.push('\n');
}

fn write_edges(out: &mut String, edges: &[Edge]) {
    for e in edges {
        let _ = writeln!(out, "edge: {} {}", e.lo(), e.hi());
    }
}

/// Serializes a graph in the `.g` format.
pub fn write_graph(g: &Graph) -> String {
    let mut out = String::new();
    write_node_list(&mut out, g.nodes());
    write_edges(&mut out, g.edges());
    out
}

/// Parses the `.g` format: a `nodes:` line then zero or more `edge:` lines.
pub fn parse_graph(text: &str) -> Result<Graph, ParseError> {
    let mut reader = LineReader::new(text);
    let (line, raw) = reader.field("nodes")?;
    let nodes = parse_node_list(line, raw)?;
    let edges = parse_edges(&mut reader, &nodes)?;
    Ok(Graph::new(nodes, edges).expect("validated while parsing"))
}

/// Serializes a set share in the `.sshare` format, elements sorted bytewise.
pub fn write_set_share(share: &SetShare) -> Result<String, FormatError> {
    let mut out = String::new();
    let _ = writeln!(out, "SETSHARE v1");
    let _ = writeln!(out, "k: {}", share.k());
    let _ = writeln!(out, "n: {}", share.n());
    let _ = writeln!(out, "u: {}", share.u());
    let _ = writeln!(out, "index: {}", share.index());
    for token in share.elements() {
        let text = std::str::from_utf8(token.as_bytes()).map_err(|_| FormatError::TokenNotText)?;
        if text.contains('\n') || text.contains('\r') {
            return Err(FormatError::TokenNotText);
        }
        let _ = writeln!(out, "elem: {text}");
    }
    Ok(out)
}

/// Parses the `.sshare` format.
pub fn parse_set_share(text: &str) -> Result<SetShare, ParseError> {
    let mut reader = LineReader::new(text);
    reader.expect_exact("SETSHARE v1")?;
    let (line_k, raw) = reader.field("k")?;
    let k = parse_usize(line_k, raw, "threshold k")?;
    let (line_n, raw) = reader.field("n")?;
    let n = parse_usize(line_n, raw, "share count n")?;
    if k < 2 || k > n {
        return Err(err(line_n, format!("threshold k = {k} must satisfy 2 <= k <= n = {n}")));
    }
    let (line, raw) = reader.field("u")?;
    let u = parse_usize(line, raw, "secret cardinality u")?;
    let (line, raw) = reader.field("index")?;
    let index = parse_usize(line, raw, "share index")?;
    if index == 0 || index > n {
        return Err(err(line, format!("share index {index} out of range 1..={n}")));
    }

    let mut elements = BTreeSet::new();
    let mut last_line = line;
    let mut last: Option<Token> = None;
    while let Some((line, text)) = reader.next_line() {
        last_line = line;
        let rest = text
            .strip_prefix("elem: ")
            .ok_or_else(|| err(line, format!("expected `elem: <token>`, got `{text}`")))?;
        let token = Token::new(rest.as_bytes().to_vec())
            .map_err(|_| err(line, "token must be non-empty"))?;
        if let Some(prev) = &last {
            if &token <= prev {
                return Err(err(line, "tokens must be strictly increasing bytewise"));
            }
        }
        last = Some(token.clone());
        elements.insert(token);
    }
    SetShare::new(index, k, n, u, elements).map_err(|e| err(last_line, e.to_string()))
}

/// Serializes a graph share in the `.gshare` format. Dealer-side audit data
/// (secret label positions, planted clique) is never written.
pub fn write_graph_share(share: &GraphShare) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "GRAPHSHARE v1");
    let _ = writeln!(out, "scheme: graph-2n");
    let _ = writeln!(out, "n: {}", share.n());
    let _ = writeln!(out, "c: {}", share.c());
    let _ = writeln!(out, "b: {}", share.b());
    let _ = writeln!(out, "index: {}", share.index());
    let _ = writeln!(out, "alphabet: {}", share.alphabet().join(","));
    write_node_list(&mut out, share.graph().nodes());
    write_edges(&mut out, share.graph().edges());
    out
}

/// Parses the `.gshare` format.
pub fn parse_graph_share(text: &str) -> Result<GraphShare, ParseError> {
    let mut reader = LineReader::new(text);
    reader.expect_exact("GRAPHSHARE v1")?;
    reader.expect_exact("scheme: graph-2n")?;
    let (line_n, raw) = reader.field("n")?;
    let n = parse_usize(line_n, raw, "share count n")?;
    if n < 2 {
        return Err(err(line_n, format!("a (2, n) share needs n >= 2, got {n}")));
    }
    let (line, raw) = reader.field("c")?;
    let c = parse_usize(line, raw, "secret node count c")?;
    let (line, raw) = reader.field("b")?;
    let b = parse_usize(line, raw, "padding node count b")?;
    let (line, raw) = reader.field("index")?;
    let index = parse_usize(line, raw, "share index")?;
    if index == 0 || index > n {
        return Err(err(line, format!("share index {index} out of range 1..={n}")));
    }
    let (line, raw) = reader.field("alphabet")?;
    let alphabet: Vec<String> = if raw.is_empty() {
        Vec::new()
    } else {
        raw.split(',').map(str::to_string).collect()
    };
    check_alphabet(&alphabet).map_err(|e| err(line, e.to_string()))?;
    if alphabet.len() != c {
        return Err(err(
            line,
            format!("alphabet names {} nodes, c = {c}", alphabet.len()),
        ));
    }
    let (line, raw) = reader.field("nodes")?;
    let nodes = parse_node_list(line, raw)?;
    if nodes.len() != b + c {
        return Err(err(
            line,
            format!("share lists {} nodes, b + c = {}", nodes.len(), b + c),
        ));
    }
    let edges = parse_edges(&mut reader, &nodes)?;
    let graph = Graph::new(nodes, edges).expect("validated while parsing");
    GraphShare::new(index, n, c, b, alphabet, graph).map_err(|e| err(1, e.to_string()))
}

/// Serializes a Shamir share in the `.pshare` format.
pub fn write_shamir_share(p: u64, share: &ShamirShare) -> String {
    format!("SHAMIRSHARE v1\np: {p}\nx: {}\ny: {}\n", share.x, share.y)
}

/// Parses the `.pshare` format, returning the modulus and the share.
pub fn parse_shamir_share(text: &str) -> Result<(u64, ShamirShare), ParseError> {
    let mut reader = LineReader::new(text);
    reader.expect_exact("SHAMIRSHARE v1")?;
    let (line, raw) = reader.field("p")?;
    let p = parse_u64(line, raw, "modulus p")?;
    if !is_prime(p) {
        return Err(err(line, format!("modulus {p} is not prime")));
    }
    let (line, raw) = reader.field("x")?;
    let x = parse_u64(line, raw, "coordinate x")?;
    if x == 0 || x >= p {
        return Err(err(line, format!("x = {x} must be a nonzero residue modulo {p}")));
    }
    let (line, raw) = reader.field("y")?;
    let y = parse_u64(line, raw, "coordinate y")?;
    if y >= p {
        return Err(err(line, format!("y = {y} must be a residue modulo {p}")));
    }
    reader.finish()?;
    Ok((p, ShamirShare { x, y }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph_scheme::{graph_deal, DealParams, GraphSecret};
    use crate::set_scheme::{set_deal, SetSecret, TokenRng};
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    fn labels(xs: &[u32]) -> Vec<Label> {
        xs.iter().copied().map(Label).collect()
    }

    #[test]
    fn graph_round_trip_is_byte_identical() {
        let text = "nodes: 1,2,5\nedge: 1 2\nedge: 2 5\n";
        let g = parse_graph(text).unwrap();
        assert_eq!(write_graph(&g), text);
        assert_eq!(g.nodes(), labels(&[1, 2, 5]).as_slice());
        assert_eq!(g.edge_count(), 2);
    }

    #[test]
    fn empty_and_edgeless_graphs() {
        assert_eq!(parse_graph("nodes:\n").unwrap().node_count(), 0);
        let g = parse_graph("nodes: 7\n").unwrap();
        assert_eq!(g.edge_count(), 0);
        assert_eq!(write_graph(&g), "nodes: 7\n");
    }

    #[test]
    fn graph_parse_errors_carry_line_numbers() {
        let cases = [
            ("", 1, "end of file"),
            ("nodes: 2,1\n", 1, "strictly increasing"),
            ("nodes: 1,2\nedge: 2 1\n", 2, "lo < hi"),
            ("nodes: 1,2\nedge: 1 2\nedge: 1 2\n", 3, "strictly increasing"),
            ("nodes: 1,2\nedge: 1 3\n", 2, "not a listed node"),
            ("nodes: 1,2\nbogus\n", 2, "expected `edge"),
            ("nodes: 1,x\n", 1, "not a decimal"),
        ];
        for (text, line, needle) in cases {
            let e = parse_graph(text).unwrap_err();
            assert_eq!(e.line, line, "{text:?}: {e}");
            assert!(e.message.contains(needle), "{text:?}: {e}");
        }
    }

    #[test]
    fn set_share_round_trip() {
        let secret = SetSecret::new(
            [b"alpha".to_vec(), b"beta".to_vec()]
                .into_iter()
                .map(|b| Token::new(b).unwrap())
                .collect(),
        )
        .unwrap();
        let mut rng = TokenRng::new(ChaCha12Rng::seed_from_u64(4));
        for share in set_deal(&secret, 4, &mut rng).unwrap() {
            let text = write_set_share(&share).unwrap();
            let back = parse_set_share(&text).unwrap();
            assert_eq!(back, share);
            assert_eq!(write_set_share(&back).unwrap(), text);
        }
    }

    #[test]
    fn set_share_parser_is_strict() {
        let good = "SETSHARE v1\nk: 2\nn: 2\nu: 1\nindex: 1\nelem: a\nelem: b\n";
        assert!(parse_set_share(good).is_ok());
        let cases = [
            ("SETSHARE v2\n", 1, "expected `SETSHARE v1`"),
            ("SETSHARE v1\nn: 2\n", 2, "expected field `k`"),
            ("SETSHARE v1\nk: 1\nn: 2\nu: 1\nindex: 1\n", 3, "2 <= k"),
            (
                "SETSHARE v1\nk: 2\nn: 2\nu: 1\nindex: 3\nelem: a\n",
                5,
                "out of range",
            ),
            (
                "SETSHARE v1\nk: 2\nn: 2\nu: 1\nindex: 1\nelem: b\nelem: a\n",
                7,
                "strictly increasing",
            ),
            (
                "SETSHARE v1\nk: 2\nn: 2\nu: 1\nindex: 1\nelem: a\n",
                6,
                "requires 2",
            ),
        ];
        for (text, line, needle) in cases {
            let e = parse_set_share(text).unwrap_err();
            assert_eq!(e.line, line, "{text:?}: {e}");
            assert!(e.message.contains(needle), "{text:?}: {e}");
        }
    }

    #[test]
    fn graph_share_round_trip_drops_audit_data() {
        let secret = GraphSecret::new(
            vec!["a".into(), "b".into(), "c".into()],
            parse_graph("nodes: 0,1,2\nedge: 0 1\n").unwrap(),
        )
        .unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(12);
        for share in graph_deal(&secret, &DealParams::new(3, 2), &mut rng).unwrap() {
            let text = write_graph_share(&share);
            assert!(!text.contains("planted"));
            let back = parse_graph_share(&text).unwrap();
            assert_eq!(back.graph(), share.graph());
            assert_eq!(back.index(), share.index());
            assert!(back.secret_labels().is_none());
            assert!(back.planted().is_none());
            assert_eq!(write_graph_share(&back), text);
        }
    }

    #[test]
    fn graph_share_parser_is_strict() {
        let good = "GRAPHSHARE v1\nscheme: graph-2n\nn: 2\nc: 1\nb: 1\nindex: 1\n\
                    alphabet: a\nnodes: 3,9\nedge: 3 9\n";
        assert!(parse_graph_share(good).is_ok());
        let cases = [
            ("GRAPHSHARE v1\nscheme: other\n", 2, "graph-2n"),
            (
                "GRAPHSHARE v1\nscheme: graph-2n\nn: 1\n",
                3,
                "n >= 2",
            ),
            (
                "GRAPHSHARE v1\nscheme: graph-2n\nn: 2\nc: 1\nb: 1\nindex: 1\nalphabet: a,b\nnodes: 3,9\n",
                7,
                "c = 1",
            ),
            (
                "GRAPHSHARE v1\nscheme: graph-2n\nn: 2\nc: 1\nb: 1\nindex: 1\nalphabet: a\nnodes: 3\n",
                8,
                "b + c = 2",
            ),
            (
                "GRAPHSHARE v1\nscheme: graph-2n\nn: 2\nc: 1\nb: 1\nindex: 1\nalphabet: a\nnodes: 3,9\nextra: 1\n",
                9,
                "expected `edge",
            ),
        ];
        for (text, line, needle) in cases {
            let e = parse_graph_share(text).unwrap_err();
            assert_eq!(e.line, line, "{text:?}: {e}");
            assert!(e.message.contains(needle), "{text:?}: {e}");
        }
    }

    #[test]
    fn shamir_share_round_trip_and_errors() {
        let text = "SHAMIRSHARE v1\np: 31\nx: 2\ny: 13\n";
        let (p, share) = parse_shamir_share(text).unwrap();
        assert_eq!((p, share.x, share.y), (31, 2, 13));
        assert_eq!(write_shamir_share(p, &share), text);

        let e = parse_shamir_share("SHAMIRSHARE v1\np: 32\nx: 1\ny: 0\n").unwrap_err();
        assert_eq!(e.line, 2);
        assert!(e.message.contains("not prime"));
        let e = parse_shamir_share("SHAMIRSHARE v1\np: 31\nx: 0\ny: 0\n").unwrap_err();
        assert_eq!(e.line, 3);
        let e = parse_shamir_share("SHAMIRSHARE v1\np: 31\nx: 1\ny: 31\n").unwrap_err();
        assert_eq!(e.line, 4);
        let e = parse_shamir_share("SHAMIRSHARE v1\np: 31\nx: 1\ny: 3\nz: 1\n").unwrap_err();
        assert_eq!(e.line, 5);
    }
}
