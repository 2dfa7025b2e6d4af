use num_bigint::BigInt;

use crate::error::{Result, RurError};
use crate::polyarith::{bigint_is_divisible, is_prime_u64, IntPoly, Prime, PRIME_BITS};

/// Upper bound on the number of primes drawn before giving up.
pub const PRIME_STREAM_LIMIT: usize = 1_000_000;

/// Descending primes below `2^30` that divide no generator's leading
/// coefficient.
#[derive(Clone, Debug)]
pub struct PrimeStream {
    next: u64,
    leading: Vec<BigInt>,
    drawn: usize,
    skipped: Vec<(u64, usize)>,
}

pub fn prime_stream(system: &[IntPoly]) -> PrimeStream {
    PrimeStream {
        next: (1 << PRIME_BITS) - 1,
        leading: system.iter().filter_map(|g| g.leading_coeff().cloned()).collect(),
        drawn: 0,
        skipped: Vec::new(),
    }
}

impl PrimeStream {
    pub fn next_prime(&mut self) -> Result<Prime> {
        loop {
            if self.drawn >= PRIME_STREAM_LIMIT || self.next <= 1 << (PRIME_BITS - 1) {
                return Err(RurError::PrimesExhausted);
            }
            let c = self.next;
            self.next -= 1;
            if !is_prime_u64(c) {
                continue;
            }
            self.drawn += 1;
            if let Some(k) = self.leading.iter().position(|l| bigint_is_divisible(l, c)) {
                self.skipped.push((c, k));
                continue;
            }
            return Prime::new(c);
        }
    }

    /// Primes passed over so far, with the index of the offending generator.
    pub fn skipped(&self) -> &[(u64, usize)] {
        &self.skipped
    }
}

impl Iterator for PrimeStream {
    type Item = Prime;

    fn next(&mut self) -> Option<Prime> {
        self.next_prime().ok()
    }
}
