use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Result, RurError};

const KARATSUBA_THRESHOLD: usize = 32;

/// Dense univariate polynomial with integer coefficients, constant term
/// first, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct UniIntPoly {
    coeffs: Vec<BigInt>,
}

impl fmt::Debug for UniIntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        write!(f, "[{}]", c.join(", "))
    }
}

impl UniIntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> UniIntPoly {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniIntPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> UniIntPoly {
        UniIntPoly::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> UniIntPoly {
        UniIntPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: BigInt) -> UniIntPoly {
        UniIntPoly::new(vec![c])
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigInt> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading_coeff(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    /// Total bit length of the coefficients, a size measure for cost accounting.
    pub fn max_bits(&self) -> u64 {
        self.coeffs.iter().map(|c| c.bits()).max().unwrap_or(0)
    }

    pub fn add(&self, other: &UniIntPoly) -> UniIntPoly {
        let (long, short) = if self.coeffs.len() >= other.coeffs.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut out = long.coeffs.clone();
        for (o, s) in out.iter_mut().zip(&short.coeffs) {
            *o += s;
        }
        UniIntPoly::new(out)
    }

    pub fn sub(&self, other: &UniIntPoly) -> UniIntPoly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> UniIntPoly {
        UniIntPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn scale(&self, c: &BigInt) -> UniIntPoly {
        if c.is_zero() {
            return UniIntPoly::zero();
        }
        UniIntPoly {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Multiplication by `t^k`.
    pub fn shift(&self, k: usize) -> UniIntPoly {
        if self.is_zero() {
            return UniIntPoly::zero();
        }
        let mut coeffs = vec![BigInt::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        UniIntPoly { coeffs }
    }

    pub fn mul(&self, other: &UniIntPoly) -> UniIntPoly {
        uni_int_mul(self, other)
    }

    pub fn pow(&self, mut e: u32) -> UniIntPoly {
        let mut base = self.clone();
        let mut acc = UniIntPoly::constant(BigInt::one());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Non-negative gcd of the coefficients; zero for the zero polynomial.
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Divides out the content and makes the leading coefficient positive.
    pub fn primitive_part(&self) -> UniIntPoly {
        if self.is_zero() {
            return UniIntPoly::zero();
        }
        let mut g = self.content();
        if self.leading_coeff().is_negative() {
            g = -g;
        }
        UniIntPoly {
            coeffs: self.coeffs.iter().map(|c| c / &g).collect(),
        }
    }

    /// Exact division of every coefficient by `c`.
    pub fn div_exact_scalar(&self, c: &BigInt) -> UniIntPoly {
        UniIntPoly {
            coeffs: self
                .coeffs
                .iter()
                .map(|a| {
                    debug_assert!((a % c).is_zero());
                    a / c
                })
                .collect(),
        }
    }

    pub fn derivative(&self) -> UniIntPoly {
        UniIntPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    /// Coefficients of `p(-t)`.
    pub fn reflect(&self) -> UniIntPoly {
        UniIntPoly {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| if i % 2 == 1 { -c } else { c.clone() })
                .collect(),
        }
    }

    pub fn divrem(&self, b: &UniIntPoly) -> Result<(UniIntPoly, UniIntPoly, BigInt)> {
        uni_int_divrem(self, b)
    }

    /// Remainder of division by `b` when every quotient step divides
    /// exactly over the integers, `None` as soon as one does not.
    ///
    /// For a primitive divisor that divides `self` over the rationals the
    /// quotient is integral, so this succeeds whenever the remainder is zero.
    pub fn try_exact_divrem(&self, b: &UniIntPoly) -> Result<Option<(UniIntPoly, UniIntPoly)>> {
        let db = b.degree().ok_or(RurError::DivisionByZero)?;
        if self.coeffs.len() <= db {
            return Ok(Some((UniIntPoly::zero(), self.clone())));
        }
        let lc = b.leading_coeff();
        let mut r = self.coeffs.clone();
        let mut q = vec![BigInt::zero(); r.len() - db];
        for k in (0..q.len()).rev() {
            let (c, rem) = r[k + db].div_rem(&lc);
            if !rem.is_zero() {
                return Ok(None);
            }
            if !c.is_zero() {
                for (i, bc) in b.coeffs.iter().enumerate() {
                    r[k + i] -= &c * bc;
                }
            }
            q[k] = c;
        }
        r.truncate(db);
        Ok(Some((UniIntPoly::new(q), UniIntPoly::new(r))))
    }
}

fn schoolbook(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn add_into(dst: &mut [BigInt], src: &[BigInt]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d += s;
    }
}

fn karatsuba(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    if a.len() < KARATSUBA_THRESHOLD || b.len() < KARATSUBA_THRESHOLD {
        return schoolbook(a, b);
    }
    let half = a.len().max(b.len()) / 2;
    let (a0, a1) = a.split_at(half.min(a.len()));
    let (b0, b1) = b.split_at(half.min(b.len()));
    let z0 = karatsuba(a0, b0);
    let z2 = karatsuba(a1, b1);
    let sum = |x: &[BigInt], y: &[BigInt]| {
        let mut s: Vec<BigInt> = x.to_vec();
        if s.len() < y.len() {
            s.resize(y.len(), BigInt::zero());
        }
        add_into(&mut s, y);
        s
    };
    let mut z1 = karatsuba(&sum(a0, a1), &sum(b0, b1));
    for (i, c) in z0.iter().enumerate() {
        z1[i] -= c;
    }
    for (i, c) in z2.iter().enumerate() {
        z1[i] -= c;
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    add_into(&mut out, &z0);
    add_into(&mut out[half..], &z1);
    add_into(&mut out[2 * half..], &z2);
    out
}

/// Exact product: schoolbook for short operands, Karatsuba above.
pub fn uni_int_mul(a: &UniIntPoly, b: &UniIntPoly) -> UniIntPoly {
    UniIntPoly::new(karatsuba(&a.coeffs, &b.coeffs))
}

/// Pseudo-division: returns `(q, r, dhat)` with `dhat * a = q * b + r`,
/// `deg r < deg b`, and `dhat = lc(b)^k` where `k` counts the elimination
/// steps that were actually needed.
pub fn uni_int_divrem(a: &UniIntPoly, b: &UniIntPoly) -> Result<(UniIntPoly, UniIntPoly, BigInt)> {
    let db = b.degree().ok_or(RurError::DivisionByZero)?;
    let lc = b.leading_coeff();
    let mut r = a.clone();
    let mut q = UniIntPoly::zero();
    let mut dhat = BigInt::one();
    while let Some(dr) = r.degree() {
        if dr < db {
            break;
        }
        let lr = r.leading_coeff();
        let (c, rem) = lr.div_rem(&lc);
        let shift = dr - db;
        if rem.is_zero() {
            q = q.add(&UniIntPoly::constant(c.clone()).shift(shift));
            r = r.sub(&b.scale(&c).shift(shift));
        } else {
            // multiply everything through by lc(b)
            dhat *= &lc;
            q = q.scale(&lc).add(&UniIntPoly::constant(lr.clone()).shift(shift));
            r = r.scale(&lc).sub(&b.scale(&lr).shift(shift));
        }
    }
    Ok((q, r, dhat))
}
