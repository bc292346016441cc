//! Minimal (2, n) Shamir sharing over a prime field, used as the cost
//! baseline: shares are points of the line q(x) = a0 + a1*x (mod p) and two
//! of them recover a0 by inverting the 2x2 system.

use rand::Rng;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ShamirError {
    #[error("modulus {0} is not prime")]
    NotPrime(u64),
    #[error("need n < p distinct nonzero evaluation points, got n = {n}, p = {p}")]
    TooManyShares { n: usize, p: u64 },
    #[error("secret {secret} is not a residue modulo {p}")]
    SecretOutOfRange { secret: u64, p: u64 },
    #[error("shares evaluate the polynomial at the same point x = {0}; the system is singular")]
    SingularSystem(u64),
    #[error("share coordinate {value} is not a residue modulo {p}")]
    CoordinateOutOfRange { value: u64, p: u64 },
}

/// Field modulus and share count for one deal.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct ShamirParams {
    p: u64,
    pub n: usize,
}

impl ShamirParams {
    /// Checks primality (Miller-Rabin) and the share-count bound.
    pub fn new(p: u64, n: usize) -> Result<ShamirParams, ShamirError> {
        if !is_prime(p) {
            return Err(ShamirError::NotPrime(p));
        }
        if n as u64 >= p {
            return Err(ShamirError::TooManyShares { n, p });
        }
        Ok(ShamirParams { p, n })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }
}

/// One share: the evaluation point and the polynomial value there.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct ShamirShare {
    pub x: u64,
    pub y: u64,
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    (a as u128 * b as u128 % p as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin over the bases that cover all 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for small in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == small {
            return true;
        }
        if n.is_multiple_of(small) {
            return false;
        }
    }
    let trailing = (n - 1).trailing_zeros();
    let odd = (n - 1) >> trailing;
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, odd, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..trailing {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn inverse_mod(a: u64, p: u64) -> u64 {
    // p is prime, so a^(p-2) inverts any nonzero a
    debug_assert!(!a.is_multiple_of(p));
    pow_mod(a, p - 2, p)
}

/// Evaluates q(x) = a0 + a1*x (mod p) at x = 1..=n.
pub fn shamir_deal_with_slope(
    a0: u64,
    a1: u64,
    params: &ShamirParams,
) -> Result<Vec<ShamirShare>, ShamirError> {
    let p = params.p;
    if a0 >= p {
        return Err(ShamirError::SecretOutOfRange { secret: a0, p });
    }
    Ok((1..=params.n as u64)
        .map(|x| ShamirShare {
            x,
            y: (a0 + mul_mod(a1 % p, x, p)) % p,
        })
        .collect())
}

/// Deals n shares of a0 with a uniformly random slope.
pub fn shamir_deal<R: Rng + ?Sized>(
    a0: u64,
    params: &ShamirParams,
    rng: &mut R,
) -> Result<Vec<ShamirShare>, ShamirError> {
    let a1 = rng.random_range(0..params.p);
    shamir_deal_with_slope(a0, a1, params)
}

/// Recovers a0 from two shares: a0 = (y1*x2 - y2*x1) * (x2 - x1)^-1 (mod p).
pub fn shamir_reconstruct(s1: &ShamirShare, s2: &ShamirShare, p: u64) -> Result<u64, ShamirError> {
    for value in [s1.x, s1.y, s2.x, s2.y] {
        if value >= p {
            return Err(ShamirError::CoordinateOutOfRange { value, p });
        }
    }
    if s1.x == s2.x {
        return Err(ShamirError::SingularSystem(s1.x));
    }
    let numerator = (mul_mod(s1.y, s2.x, p) + p - mul_mod(s2.y, s1.x, p)) % p;
    let denominator = (s2.x + p - s1.x) % p;
    Ok(mul_mod(numerator, inverse_mod(denominator, p), p))
}

/// The flat cost model for reconstruction over a `bits`-wide prime field:
/// bits^3 basic operations for the field inversion.
pub fn shamir_cost(bits: u32) -> u64 {
    (bits as u64).pow(3)
}

/// Reconstruction operation counts of both schemes under the flat model.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct CostReport {
    /// (b+c) + C(c,2): node comparisons plus secret-edge checks.
    pub graph_steps: u64,
    /// bits^3: the field inversion.
    pub shamir_ops: u64,
}

impl CostReport {
    pub fn ratio(&self) -> f64 {
        self.shamir_ops as f64 / self.graph_steps as f64
    }
}

/// Compares reconstructing a c-node secret from a b-padded share against a
/// Shamir reconstruction over a `bits`-wide field.
pub fn compare_cost(c: usize, b: usize, bits: u32) -> CostReport {
    CostReport {
        graph_steps: crate::graph_scheme::reconstruction_cost(c, b),
        shamir_ops: shamir_cost(bits),
    }
}
