//! Word-sized prime moduli and residue arithmetic.
//!
//! Residues live in `[0, p)` inside `u64` words. Every prime is below `2^30`
//! so that four products `a*b < p^2` can be summed without overflow in an
//! `i64` holding a representative in `[0, 4p^2)`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};

use crate::error::{Result, RurError};

pub const PRIME_BITS: u32 = 30;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Prime(u64);

impl Prime {
    /// Accepts any prime below `2^30`. The production stream only draws from
    /// `(2^29, 2^30)`, small primes are allowed for hand-checkable examples.
    pub fn new(p: u64) -> Result<Prime> {
        if p >= 1 << PRIME_BITS {
            return Err(RurError::Usage(format!("modulus {p} exceeds 2^{PRIME_BITS}")));
        }
        if !is_prime_u64(p) {
            return Err(RurError::Usage(format!("modulus {p} is not prime")));
        }
        Ok(Prime(p))
    }

    #[inline]
    pub fn get(self) -> u64 {
        self.0
    }

    #[inline]
    pub fn add(self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.0 {
            s - self.0
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.0 - b
        }
    }

    #[inline]
    pub fn neg(self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.0 - a
        }
    }

    #[inline]
    pub fn mul(self, a: u64, b: u64) -> u64 {
        a * b % self.0
    }

    pub fn pow(self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1 % self.0;
        base %= self.0;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Inverse via the extended Euclidean algorithm; `None` for zero.
    pub fn inv(self, a: u64) -> Option<u64> {
        let a = a % self.0;
        if a == 0 {
            return None;
        }
        let (mut r0, mut r1) = (self.0 as i64, a as i64);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        debug_assert_eq!(r0, 1);
        Some(t0.rem_euclid(self.0 as i64) as u64)
    }

    #[inline]
    pub fn from_i64(self, x: i64) -> u64 {
        x.rem_euclid(self.0 as i64) as u64
    }

    pub fn from_bigint(self, x: &BigInt) -> u64 {
        let r = x.mod_floor(&BigInt::from(self.0));
        r.to_u64().expect("residue fits a word")
    }

    /// Symmetric lift of a residue into `(-p/2, p/2]`.
    pub fn to_signed(self, a: u64) -> i64 {
        if a > self.0 / 2 {
            a as i64 - self.0 as i64
        } else {
            a as i64
        }
    }

    /// `p^2`, the correction constant of the delayed-reduction dot product.
    #[inline]
    fn square(self) -> i64 {
        (self.0 * self.0) as i64
    }

    /// Dot product `sum a_i b_i mod p` with delayed reduction.
    ///
    /// Products are summed four at a time into a representative kept in
    /// `[0, 4p^2)`; after each block `4p^2` is subtracted and added back
    /// through the sign mask, so the loop has no data-dependent branch.
    pub fn dot(self, a: &[u64], b: &[u64]) -> u64 {
        debug_assert_eq!(a.len(), b.len());
        let p4 = 4 * self.square();
        let mut acc: i64 = 0;
        let mut ca = a.chunks_exact(4);
        let mut cb = b.chunks_exact(4);
        for (x, y) in (&mut ca).zip(&mut cb) {
            let block = x[0] * y[0] + x[1] * y[1] + x[2] * y[2] + x[3] * y[3];
            acc += block as i64;
            acc -= p4;
            acc += (acc >> 63) & p4;
        }
        for (x, y) in ca.remainder().iter().zip(cb.remainder()) {
            acc += (x * y) as i64;
            acc -= p4;
            acc += (acc >> 63) & p4;
        }
        (acc as u64) % self.0
    }
}

/// Deterministic Miller-Rabin, exact for every `u64`.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for sp in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % sp == 0 {
            return n == sp;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let powmod = |mut b: u64, mut e: u64| {
        let mut r = 1u64;
        b %= n;
        while e > 0 {
            if e & 1 == 1 {
                r = mulmod(r, b);
            }
            b = mulmod(b, b);
            e >>= 1;
        }
        r
    };
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Residue of `x` modulo `p` for a possibly negative big integer, `None`
/// when the integer is divisible by `p`.
pub fn nonzero_residue(p: Prime, x: &BigInt) -> Option<u64> {
    let r = p.from_bigint(x);
    (r != 0).then_some(r)
}

pub(crate) fn bigint_is_divisible(x: &BigInt, p: u64) -> bool {
    (x.abs() % p).to_u64() == Some(0)
}
