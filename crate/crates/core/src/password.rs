//! Bijection between 8-character base-62 passwords and a slice of the
//! 11-node graphs: the password's rank fills the low 48 bits of the 55-bit
//! edge bitmask, the remaining 7 bits stay zero.

use thiserror::Error;

use crate::graph::{graph_from_mask, mask_from_graph, Graph, GraphError, Label};

/// 62^8, the number of 8-character case-sensitive alphanumeric passwords.
pub const PASSWORD_SPACE: u64 = 218_340_105_584_896;

/// Password length in characters.
pub const PASSWORD_LEN: usize = 8;

/// Node count of a password graph.
pub const PASSWORD_GRAPH_NODES: usize = 11;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PasswordError {
    #[error("passwords are exactly {PASSWORD_LEN} characters, got {0}")]
    BadLength(usize),
    #[error("password character {0:?} is outside 0-9, A-Z, a-z")]
    BadCharacter(char),
    #[error("rank {0} is outside the password space")]
    RankOutOfRange(u64),
    #[error("graph does not have nodes 0..{PASSWORD_GRAPH_NODES}")]
    WrongNodes,
    #[error("edge bitmask {0:#x} does not encode a password: high bits set or value out of range")]
    NotAPasswordGraph(u64),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// An 8-character password over 0-9, A-Z, a-z.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Password {
    chars: [u8; PASSWORD_LEN],
}

impl Password {
    pub fn new(s: &str) -> Result<Password, PasswordError> {
        if s.chars().count() != PASSWORD_LEN {
            return Err(PasswordError::BadLength(s.chars().count()));
        }
        let mut chars = [0u8; PASSWORD_LEN];
        for (slot, ch) in chars.iter_mut().zip(s.chars()) {
            digit_value(ch)?;
            *slot = ch as u8;
        }
        Ok(Password { chars })
    }

    pub fn as_str(&self) -> &str {
        std::str::from_utf8(&self.chars).expect("alphanumeric ASCII")
    }
}

impl std::fmt::Display for Password {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A password's index in [0, 62^8).
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct PasswordRank(u64);

impl PasswordRank {
    pub fn new(value: u64) -> Result<PasswordRank, PasswordError> {
        if value >= PASSWORD_SPACE {
            return Err(PasswordError::RankOutOfRange(value));
        }
        Ok(PasswordRank(value))
    }

    pub fn value(&self) -> u64 {
        self.0
    }
}

/// Digit value: '0'-'9' to 0-9, 'A'-'Z' to 10-35, 'a'-'z' to 36-61.
fn digit_value(ch: char) -> Result<u64, PasswordError> {
    match ch {
        '0'..='9' => Ok(ch as u64 - '0' as u64),
        'A'..='Z' => Ok(ch as u64 - 'A' as u64 + 10),
        'a'..='z' => Ok(ch as u64 - 'a' as u64 + 36),
        _ => Err(PasswordError::BadCharacter(ch)),
    }
}

fn digit_char(v: u64) -> u8 {
    match v {
        0..=9 => b'0' + v as u8,
        10..=35 => b'A' + (v - 10) as u8,
        36..=61 => b'a' + (v - 36) as u8,
        _ => unreachable!("base-62 digit"),
    }
}

/// Big-endian positional rank of a password.
pub fn password_to_rank(p: &Password) -> PasswordRank {
    let mut rank = 0u64;
    for &ch in &p.chars {
        rank = rank * 62 + digit_value(ch as char).expect("validated at construction");
    }
    PasswordRank(rank)
}

fn rank_to_password(r: PasswordRank) -> Password {
    let mut value = r.0;
    let mut chars = [0u8; PASSWORD_LEN];
    for slot in chars.iter_mut().rev() {
        *slot = digit_char(value % 62);
        value /= 62;
    }
    Password { chars }
}

fn password_alphabet() -> Vec<Label> {
    (0..PASSWORD_GRAPH_NODES as u32).map(Label).collect()
}

/// The 11-node graph whose edge bitmask equals the rank (bit 0 least
/// significant; bits 48..55 of the 55-bit mask are zero).
pub fn rank_to_graph(r: PasswordRank) -> Graph {
    graph_from_mask(&password_alphabet(), r.0).expect("rank fits in 48 of 55 bits")
}

/// Inverse of [`password_to_rank`] composed with [`rank_to_graph`].
pub fn graph_to_password(g: &Graph) -> Result<Password, PasswordError> {
    if g.nodes() != password_alphabet().as_slice() {
        return Err(PasswordError::WrongNodes);
    }
    let mask = mask_from_graph(g)?;
    if mask >= PASSWORD_SPACE {
        return Err(PasswordError::NotAPasswordGraph(mask));
    }
    Ok(rank_to_password(PasswordRank(mask)))
}
