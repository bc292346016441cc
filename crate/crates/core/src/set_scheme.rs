//! (k, n) threshold sharing of a set of opaque tokens, reconstructed by
//! intersection. The classic construction is the (3, n) dealing loop; a
//! generalized dealer covers arbitrary thresholds. The scheme trades perfect
//! secrecy for simplicity: a single share rules candidates out, which the
//! analyzer module demonstrates.

use std::collections::BTreeSet;

use rand::Rng;
use thiserror::Error;

use crate::graph::intersect_sorted;

/// Retries for a fresh-token draw before declaring the domain exhausted.
const MAX_DRAW_RETRIES: usize = 64;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SetSchemeError {
    #[error("tokens must be non-empty")]
    EmptyToken,
    #[error("the secret set must contain at least one token")]
    EmptySecret,
    #[error("the (3, n) dealer needs n >= 3, got n = {0}")]
    TooFewShares(usize),
    #[error("threshold k = {k} must satisfy 2 <= k <= n = {n}")]
    BadThreshold { k: usize, n: usize },
    #[error("could not draw a fresh junk token after {MAX_DRAW_RETRIES} attempts")]
    TokenDomainExhausted,
    #[error("token source produced a pick outside the unmarked pool")]
    PickOutsidePool,
    #[error("scripted token source ran out of entries")]
    ScriptExhausted,
    #[error("share index {index} out of range 1..={n}")]
    BadIndex { index: usize, n: usize },
    #[error("share has {got} elements, the ({k}, {n}) scheme with u = {u} requires {expected}")]
    WrongShareSize {
        expected: usize,
        got: usize,
        k: usize,
        n: usize,
        u: usize,
    },
    #[error("scheme parameters too large to size shares")]
    ParamsTooLarge,
    #[error("shares carry inconsistent (k, n, u) metadata")]
    MetadataMismatch,
    #[error("share index {0} appears more than once")]
    DuplicateShareIndex(usize),
    #[error("no shares given")]
    NoShares,
    #[error("{got} shares are below the threshold k = {threshold}; pass force to intersect anyway")]
    BelowThreshold { got: usize, threshold: usize },
}

/// An opaque share element, compared bytewise.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Token(Vec<u8>);

impl Token {
    pub fn new(bytes: impl Into<Vec<u8>>) -> Result<Token, SetSchemeError> {
        let bytes = bytes.into();
        if bytes.is_empty() {
            return Err(SetSchemeError::EmptyToken);
        }
        Ok(Token(bytes))
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }
}

impl std::fmt::Display for Token {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&String::from_utf8_lossy(&self.0))
    }
}

/// The secret: a non-empty set of tokens. Its cardinality `u` is public.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SetSecret {
    elements: BTreeSet<Token>,
}

impl SetSecret {
    pub fn new(elements: BTreeSet<Token>) -> Result<SetSecret, SetSchemeError> {
        if elements.is_empty() {
            return Err(SetSchemeError::EmptySecret);
        }
        Ok(SetSecret { elements })
    }

    pub fn elements(&self) -> &BTreeSet<Token> {
        &self.elements
    }

    /// The public cardinality u.
    pub fn cardinality(&self) -> usize {
        self.elements.len()
    }
}

/// One participant's share: the secret hidden among junk tokens.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SetShare {
    index: usize,
    n: usize,
    k: usize,
    u: usize,
    elements: BTreeSet<Token>,
}

impl SetShare {
    pub fn new(
        index: usize,
        k: usize,
        n: usize,
        u: usize,
        elements: BTreeSet<Token>,
    ) -> Result<SetShare, SetSchemeError> {
        if k < 2 || k > n {
            return Err(SetSchemeError::BadThreshold { k, n });
        }
        if index == 0 || index > n {
            return Err(SetSchemeError::BadIndex { index, n });
        }
        let expected = share_size(k, n, u).ok_or(SetSchemeError::ParamsTooLarge)?;
        if elements.len() != expected {
            return Err(SetSchemeError::WrongShareSize {
                expected,
                got: elements.len(),
                k,
                n,
                u,
            });
        }
        Ok(SetShare {
            index,
            n,
            k,
            u,
            elements,
        })
    }

    pub fn index(&self) -> usize {
        self.index
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn u(&self) -> usize {
        self.u
    }

    pub fn elements(&self) -> &BTreeSet<Token> {
        &self.elements
    }
}

/// Share size u * (1 + C(n-1, k-2)); reduces to n*u at k = 3.
fn share_size(k: usize, n: usize, u: usize) -> Option<usize> {
    let mut groups: u128 = 1;
    for i in 0..k - 2 {
        groups = groups.checked_mul((n - 1 - i) as u128)? / (i as u128 + 1);
    }
    let total = (u as u128).checked_mul(1 + groups)?;
    usize::try_from(total).ok()
}

/// Randomness a dealer consumes: fresh junk tokens and subset picks.
///
/// The provided [`TokenRng`] draws 64-bit integers rendered as decimal byte
/// strings; a scripted implementation can replay a fixed transcript instead.
pub trait SetDealRng {
    fn fresh_token(&mut self) -> Result<Token, SetSchemeError>;

    /// Picks `count` distinct elements of `pool` (strictly increasing order).
    fn pick(&mut self, pool: &[Token], count: usize) -> Result<Vec<Token>, SetSchemeError>;
}

/// Token source backed by any [`Rng`].
pub struct TokenRng<R> {
    rng: R,
}

impl<R: Rng> TokenRng<R> {
    pub fn new(rng: R) -> Self {
        TokenRng { rng }
    }
}

impl<R: Rng> SetDealRng for TokenRng<R> {
    fn fresh_token(&mut self) -> Result<Token, SetSchemeError> {
        let value: u64 = self.rng.random();
        Token::new(value.to_string().into_bytes())
    }

    fn pick(&mut self, pool: &[Token], count: usize) -> Result<Vec<Token>, SetSchemeError> {
        if count > pool.len() {
            return Err(SetSchemeError::PickOutsidePool);
        }
        let picked = rand::seq::index::sample(&mut self.rng, pool.len(), count);
        Ok(picked.iter().map(|i| pool[i].clone()).collect())
    }
}

/// Draws until the token is fresh relative to `used`, then records it.
fn draw_fresh<R: SetDealRng + ?Sized>(
    rng: &mut R,
    used: &mut BTreeSet<Token>,
) -> Result<Token, SetSchemeError> {
    for _ in 0..MAX_DRAW_RETRIES {
        let t = rng.fresh_token()?;
        if used.insert(t.clone()) {
            return Ok(t);
        }
    }
    Err(SetSchemeError::TokenDomainExhausted)
}

/// Deals a (3, n) scheme.
///
/// Share i (1-based) starts as the secret, receives (n-i)*u fresh junk
/// tokens, and passes u of its not-yet-passed junk tokens to every later
/// share. Each junk token therefore lands in exactly two shares, and every
/// share ends up with n*u elements.
pub fn set_deal<R: SetDealRng + ?Sized>(
    secret: &SetSecret,
    n: usize,
    rng: &mut R,
) -> Result<Vec<SetShare>, SetSchemeError> {
    if n < 3 {
        return Err(SetSchemeError::TooFewShares(n));
    }
    let u = secret.cardinality();
    let mut used: BTreeSet<Token> = secret.elements().clone();
    let mut shares: Vec<BTreeSet<Token>> = vec![secret.elements().clone(); n];
    let mut marked: Vec<BTreeSet<Token>> = vec![secret.elements().clone(); n];

    for i in 0..n {
        for _ in 0..(n - 1 - i) * u {
            let t = draw_fresh(rng, &mut used)?;
            shares[i].insert(t);
        }
        for j in i + 1..n {
            let pool: Vec<Token> = shares[i].difference(&marked[i]).cloned().collect();
            let picked = rng.pick(&pool, u)?;
            if picked.len() != u {
                return Err(SetSchemeError::PickOutsidePool);
            }
            for t in picked {
                if !marked[i].insert(t.clone()) || !shares[i].contains(&t) {
                    return Err(SetSchemeError::PickOutsidePool);
                }
                shares[j].insert(t.clone());
                marked[j].insert(t);
            }
        }
    }

    shares
        .into_iter()
        .enumerate()
        .map(|(i, elements)| SetShare::new(i + 1, 3, n, u, elements))
        .collect()
}

/// Deals a (k, n) scheme: for every (k-1)-subset of shares, u fresh junk
/// tokens are added to exactly those shares. Reduces to the (3, n) share
/// shape at k = 3.
pub fn set_deal_general<R: SetDealRng + ?Sized>(
    secret: &SetSecret,
    k: usize,
    n: usize,
    rng: &mut R,
) -> Result<Vec<SetShare>, SetSchemeError> {
    if k < 2 || k > n {
        return Err(SetSchemeError::BadThreshold { k, n });
    }
    let u = secret.cardinality();
    let mut used: BTreeSet<Token> = secret.elements().clone();
    let mut shares: Vec<BTreeSet<Token>> = vec![secret.elements().clone(); n];

    for group in combinations(n, k - 1) {
        for _ in 0..u {
            let t = draw_fresh(rng, &mut used)?;
            for &member in &group {
                shares[member].insert(t.clone());
            }
        }
    }

    shares
        .into_iter()
        .enumerate()
        .map(|(i, elements)| SetShare::new(i + 1, k, n, u, elements))
        .collect()
}

/// All size-`len` subsets of 0..n in lexicographic order.
fn combinations(n: usize, len: usize) -> Vec<Vec<usize>> {
    use itertools::Itertools;
    (0..n).combinations(len).collect()
}

/// Result of intersecting shares, flagged when below threshold.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SetReconstruction {
    pub elements: BTreeSet<Token>,
    pub below_threshold: bool,
}

/// Intersects the element sets of the given shares.
///
/// With at least k genuine shares this recovers the secret. Fewer shares are
/// refused unless `force` is set, in which case the raw intersection is
/// returned with `below_threshold` marked.
pub fn set_reconstruct(
    shares: &[SetShare],
    force: bool,
) -> Result<SetReconstruction, SetSchemeError> {
    let first = shares.first().ok_or(SetSchemeError::NoShares)?;
    let mut seen = BTreeSet::new();
    for s in shares {
        if (s.k, s.n, s.u) != (first.k, first.n, first.u) {
            return Err(SetSchemeError::MetadataMismatch);
        }
        if !seen.insert(s.index) {
            return Err(SetSchemeError::DuplicateShareIndex(s.index));
        }
    }
    let below_threshold = shares.len() < first.k;
    if below_threshold && !force {
        return Err(SetSchemeError::BelowThreshold {
            got: shares.len(),
            threshold: first.k,
        });
    }

    let mut common: Vec<Token> = first.elements.iter().cloned().collect();
    for s in &shares[1..] {
        let other: Vec<Token> = s.elements.iter().cloned().collect();
        common = intersect_sorted(&common, &other).expect("set iteration is sorted");
    }
    Ok(SetReconstruction {
        elements: common.into_iter().collect(),
        below_threshold,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;
    use std::collections::VecDeque;

    fn tok(i: i64) -> Token {
        Token::new(i.to_string().into_bytes()).unwrap()
    }

    fn toks(xs: &[i64]) -> BTreeSet<Token> {
        xs.iter().copied().map(tok).collect()
    }

    fn secret() -> SetSecret {
        SetSecret::new(toks(&[0, 2, 13])).unwrap()
    }

    /// Replays a fixed dealing transcript: fresh tokens in draw order and
    /// picks by value.
    struct ScriptedRng {
        fresh: VecDeque<Token>,
        picks: VecDeque<Vec<Token>>,
    }

    impl SetDealRng for ScriptedRng {
        fn fresh_token(&mut self) -> Result<Token, SetSchemeError> {
            self.fresh.pop_front().ok_or(SetSchemeError::ScriptExhausted)
        }

        fn pick(&mut self, pool: &[Token], count: usize) -> Result<Vec<Token>, SetSchemeError> {
            let picked = self.picks.pop_front().ok_or(SetSchemeError::ScriptExhausted)?;
            if picked.len() != count || !picked.iter().all(|t| pool.contains(t)) {
                return Err(SetSchemeError::PickOutsidePool);
            }
            Ok(picked)
        }
    }

    fn published_shares() -> [BTreeSet<Token>; 5] {
        [
            toks(&[-48, -25, -18, -5, 0, 1, 2, 9, 10, 13, 19, 24, 40, 52, 88]),
            toks(&[-92, -48, -18, -3, 0, 2, 3, 4, 10, 11, 12, 13, 37, 61, 90]),
            toks(&[-75, -53, -44, -25, -10, -3, 0, 1, 2, 11, 13, 40, 46, 58, 61]),
            toks(&[-81, -75, -44, -10, -5, 0, 2, 3, 12, 13, 23, 24, 50, 52, 90]),
            toks(&[-92, -81, -53, 0, 2, 4, 9, 13, 19, 23, 37, 46, 50, 58, 88]),
        ]
    }

    #[test]
    fn replaying_the_published_transcript_reproduces_the_shares() {
        let fresh: Vec<i64> = vec![
            -48, -25, -18, -5, 1, 9, 10, 19, 24, 40, 52, 88, // into s1
            -92, -3, 3, 4, 11, 12, 37, 61, 90, // into s2
            -75, -53, -44, -10, 46, 58, // into s3
            -81, 23, 50, // into s4
        ];
        let picks: Vec<Vec<i64>> = vec![
            vec![-48, -18, 10],
            vec![-25, 1, 40],
            vec![-5, 24, 52],
            vec![9, 19, 88],
            vec![-3, 11, 61],
            vec![3, 12, 90],
            vec![-92, 4, 37],
            vec![-75, -44, -10],
            vec![-53, 46, 58],
            vec![-81, 23, 50],
        ];
        let mut rng = ScriptedRng {
            fresh: fresh.into_iter().map(tok).collect(),
            picks: picks
                .into_iter()
                .map(|p| p.into_iter().map(tok).collect())
                .collect(),
        };

        let shares = set_deal(&secret(), 5, &mut rng).unwrap();
        let expected = published_shares();
        for (share, want) in shares.iter().zip(&expected) {
            assert_eq!(share.elements(), want);
            assert_eq!(share.elements().len(), 15); // n*u
        }
    }

    #[test]
    fn single_element_secret_three_shares() {
        let secret = SetSecret::new(toks(&[7])).unwrap();
        let mut rng = TokenRng::new(ChaCha12Rng::seed_from_u64(11));
        let shares = set_deal(&secret, 3, &mut rng).unwrap();
        for s in &shares {
            assert_eq!(s.elements().len(), 3);
            assert!(s.elements().contains(&tok(7)));
        }
        for i in 0..3 {
            for j in i + 1..3 {
                let junk_overlap: BTreeSet<_> = shares[i]
                    .elements()
                    .intersection(shares[j].elements())
                    .filter(|t| **t != tok(7))
                    .collect();
                assert_eq!(junk_overlap.len(), 1);
            }
        }
    }

    #[test]
    fn general_dealer_matches_the_three_of_five_share_size() {
        let mut rng = TokenRng::new(ChaCha12Rng::seed_from_u64(5));
        let shares = set_deal_general(&secret(), 3, 5, &mut rng).unwrap();
        for s in &shares {
            assert_eq!(s.elements().len(), 15);
        }
    }

    #[test]
    fn general_dealer_two_of_two() {
        let secret = SetSecret::new(toks(&[42])).unwrap();
        let mut rng = TokenRng::new(ChaCha12Rng::seed_from_u64(1));
        let shares = set_deal_general(&secret, 2, 2, &mut rng).unwrap();
        assert_eq!(shares[0].elements().len(), 2);
        assert_eq!(shares[1].elements().len(), 2);
        let overlap: BTreeSet<_> = shares[0]
            .elements()
            .intersection(shares[1].elements())
            .cloned()
            .collect();
        assert_eq!(overlap, toks(&[42]));
    }

    #[test]
    fn general_dealer_full_threshold() {
        use itertools::Itertools;
        for n in 2..=5 {
            let mut rng = TokenRng::new(ChaCha12Rng::seed_from_u64(n as u64));
            let shares = set_deal_general(&secret(), n, n, &mut rng).unwrap();
            // junk tokens appear in all shares but one
            let mut counts: std::collections::BTreeMap<&Token, usize> = Default::default();
            for s in &shares {
                for t in s.elements() {
                    *counts.entry(t).or_default() += 1;
                }
            }
            for (t, count) in counts {
                let expected = if secret().elements().contains(t) { n } else { n - 1 };
                assert_eq!(count, expected, "token {t}");
            }
            // any k-subset reconstructs, brute force
            for subset in shares.iter().cloned().combinations(n) {
                let rec = set_reconstruct(&subset, false).unwrap();
                assert_eq!(&rec.elements, secret().elements());
            }
        }
    }

    #[test]
    fn reconstruct_published_fixtures() {
        let shares: Vec<SetShare> = published_shares()
            .into_iter()
            .enumerate()
            .map(|(i, elements)| SetShare::new(i + 1, 3, 5, 3, elements).unwrap())
            .collect();

        // two shares only: refused, then forced
        let pair = [shares[1].clone(), shares[2].clone()];
        assert_eq!(
            set_reconstruct(&pair, false).unwrap_err(),
            SetSchemeError::BelowThreshold { got: 2, threshold: 3 }
        );
        let forced = set_reconstruct(&pair, true).unwrap();
        assert!(forced.below_threshold);
        assert_eq!(forced.elements, toks(&[-3, 0, 2, 11, 13, 61]));

        let triple = [shares[1].clone(), shares[2].clone(), shares[4].clone()];
        let rec = set_reconstruct(&triple, false).unwrap();
        assert!(!rec.below_threshold);
        assert_eq!(rec.elements, toks(&[0, 2, 13]));

        let all = set_reconstruct(&shares, false).unwrap();
        assert_eq!(all.elements, toks(&[0, 2, 13]));
    }

    #[test]
    fn reconstruct_rejects_mixed_metadata_and_duplicates() {
        let a = SetShare::new(1, 3, 5, 1, toks(&[1, 2, 3, 4, 5])).unwrap();
        let b = SetShare::new(1, 3, 5, 1, toks(&[1, 2, 3, 4, 6])).unwrap();
        assert_eq!(
            set_reconstruct(&[a.clone(), b], false).unwrap_err(),
            SetSchemeError::DuplicateShareIndex(1)
        );
        let c = SetShare::new(2, 3, 4, 1, toks(&[1, 2, 3, 4])).unwrap();
        assert_eq!(
            set_reconstruct(&[a, c], false).unwrap_err(),
            SetSchemeError::MetadataMismatch
        );
    }

    #[test]
    fn dealer_rejects_small_n_and_bad_thresholds() {
        let mut rng = TokenRng::new(ChaCha12Rng::seed_from_u64(0));
        assert_eq!(
            set_deal(&secret(), 2, &mut rng).unwrap_err(),
            SetSchemeError::TooFewShares(2)
        );
        assert_eq!(
            set_deal_general(&secret(), 1, 4, &mut rng).unwrap_err(),
            SetSchemeError::BadThreshold { k: 1, n: 4 }
        );
        assert_eq!(
            set_deal_general(&secret(), 5, 4, &mut rng).unwrap_err(),
            SetSchemeError::BadThreshold { k: 5, n: 4 }
        );
    }

    #[test]
    fn a_stuck_token_source_exhausts_the_domain() {
        /// Always produces the same token, so every redraw collides.
        struct StuckRng;
        impl SetDealRng for StuckRng {
            fn fresh_token(&mut self) -> Result<Token, SetSchemeError> {
                Token::new(b"same".to_vec())
            }
            fn pick(&mut self, pool: &[Token], count: usize) -> Result<Vec<Token>, SetSchemeError> {
                Ok(pool[..count].to_vec())
            }
        }
        assert_eq!(
            set_deal(&secret(), 3, &mut StuckRng).unwrap_err(),
            SetSchemeError::TokenDomainExhausted
        );
    }

    #[test]
    fn share_size_invariant_is_enforced() {
        let err = SetShare::new(1, 3, 5, 3, toks(&[1, 2, 3])).unwrap_err();
        assert!(matches!(err, SetSchemeError::WrongShareSize { expected: 15, got: 3, .. }));
    }

    mod properties {
        use super::*;
        use itertools::Itertools;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(48))]

            #[test]
            fn any_k_shares_recover_the_secret(
                seed in any::<u64>(),
                k in 2usize..=4,
                extra in 0usize..=2,
                secret_values in proptest::collection::btree_set(-50i64..50, 1..=4),
            ) {
                let n = k + extra;
                let secret = SetSecret::new(
                    secret_values.iter().map(|&v| tok(v)).collect()
                ).unwrap();
                let mut rng = TokenRng::new(ChaCha12Rng::seed_from_u64(seed));
                let shares = set_deal_general(&secret, k, n, &mut rng).unwrap();

                let u = secret.cardinality();
                for subset in shares.iter().cloned().combinations(k) {
                    let rec = set_reconstruct(&subset, false).unwrap();
                    prop_assert_eq!(&rec.elements, secret.elements());
                }
                // threshold gap: k-1 shares leave exactly u junk tokens behind
                for subset in shares.iter().cloned().combinations(k - 1) {
                    let rec = set_reconstruct(&subset, true).unwrap();
                    prop_assert!(rec.below_threshold);
                    prop_assert_eq!(rec.elements.len(), 2 * u);
                    prop_assert!(rec.elements.is_superset(secret.elements()));
                }
                // junk multiplicity is exactly k-1
                let mut counts: std::collections::BTreeMap<Token, usize> = Default::default();
                for s in &shares {
                    for t in s.elements() {
                        *counts.entry(t.clone()).or_default() += 1;
                    }
                }
                for (t, count) in counts {
                    if !secret.elements().contains(&t) {
                        prop_assert_eq!(count, k - 1);
                    }
                }
            }
        }
    }
}
