use super::prime::Prime;
use crate::error::{Result, RurError};

/// Dense univariate polynomial over `Z/pZ`, constant term first, no
/// trailing zeros (the zero polynomial has no coefficients).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniModPoly {
    coeffs: Vec<u64>,
    prime: Prime,
}

impl UniModPoly {
    pub fn new(prime: Prime, mut coeffs: Vec<u64>) -> UniModPoly {
        for c in coeffs.iter_mut() {
            *c %= prime.get();
        }
        let mut p = UniModPoly { coeffs, prime };
        p.trim();
        p
    }

    pub fn from_i64(prime: Prime, coeffs: &[i64]) -> UniModPoly {
        UniModPoly::new(prime, coeffs.iter().map(|&c| prime.from_i64(c)).collect())
    }

    pub fn zero(prime: Prime) -> UniModPoly {
        UniModPoly {
            coeffs: Vec::new(),
            prime,
        }
    }

    pub fn one(prime: Prime) -> UniModPoly {
        UniModPoly::new(prime, vec![1])
    }

    /// The monomial `t`.
    pub fn t(prime: Prime) -> UniModPoly {
        UniModPoly::new(prime, vec![0, 1])
    }

    fn trim(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<u64> {
        self.coeffs
    }

    /// Coefficient of `t^i`, zero beyond the degree.
    pub fn coeff(&self, i: usize) -> u64 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading_coeff(&self) -> u64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn scale(&self, c: u64) -> UniModPoly {
        let p = self.prime;
        UniModPoly::new(p, self.coeffs.iter().map(|&a| p.mul(a, c)).collect())
    }

    pub fn monic(&self) -> UniModPoly {
        match self.prime.inv(self.leading_coeff()) {
            Some(inv) => self.scale(inv),
            None => self.clone(),
        }
    }

    pub fn add(&self, other: &UniModPoly) -> UniModPoly {
        let p = self.prime;
        let n = self.coeffs.len().max(other.coeffs.len());
        UniModPoly::new(p, (0..n).map(|i| p.add(self.coeff(i), other.coeff(i))).collect())
    }

    pub fn sub(&self, other: &UniModPoly) -> UniModPoly {
        let p = self.prime;
        let n = self.coeffs.len().max(other.coeffs.len());
        UniModPoly::new(p, (0..n).map(|i| p.sub(self.coeff(i), other.coeff(i))).collect())
    }

    pub fn mul(&self, other: &UniModPoly) -> UniModPoly {
        if self.is_zero() || other.is_zero() {
            return UniModPoly::zero(self.prime);
        }
        let p = self.prime;
        let n = self.coeffs.len() + other.coeffs.len() - 1;
        let mut out = vec![0u64; n];
        // rows of b reversed so each output coefficient is a contiguous dot product
        let rb: Vec<u64> = other.coeffs.iter().rev().copied().collect();
        let lb = rb.len();
        for (k, o) in out.iter_mut().enumerate() {
            let lo = k.saturating_sub(lb - 1);
            let hi = k.min(self.coeffs.len() - 1);
            let a = &self.coeffs[lo..=hi];
            let start = lb - 1 - (k - lo);
            let b = &rb[start..start + a.len()];
            *o = p.dot(a, b);
        }
        UniModPoly::new(p, out)
    }

    pub fn derivative(&self) -> UniModPoly {
        let p = self.prime;
        UniModPoly::new(
            p,
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| p.mul(c, i as u64 % p.get()))
                .collect(),
        )
    }

    pub fn eval(&self, x: u64) -> u64 {
        let p = self.prime;
        self.coeffs.iter().rev().fold(0, |acc, &c| p.add(p.mul(acc, x), c))
    }

    pub fn divrem(&self, b: &UniModPoly) -> Result<(UniModPoly, UniModPoly)> {
        uni_divrem_modp(self, b)
    }

    pub fn rem(&self, b: &UniModPoly) -> Result<UniModPoly> {
        Ok(uni_divrem_modp(self, b)?.1)
    }

    pub fn mul_mod(&self, other: &UniModPoly, m: &UniModPoly) -> Result<UniModPoly> {
        self.mul(other).rem(m)
    }

    /// Inverse modulo `m`, `None` when not coprime.
    pub fn inv_mod(&self, m: &UniModPoly) -> Option<UniModPoly> {
        let (g, u, _) = uni_ext_gcd_modp(&self.rem(m).ok()?, m);
        if g.degree() == Some(0) {
            Some(u.rem(m).ok()?)
        } else {
            None
        }
    }
}

pub fn uni_divrem_modp(a: &UniModPoly, b: &UniModPoly) -> Result<(UniModPoly, UniModPoly)> {
    let p = a.prime;
    let db = b.degree().ok_or(RurError::DivisionByZero)?;
    if a.coeffs.len() <= db {
        return Ok((UniModPoly::zero(p), a.clone()));
    }
    let inv = p.inv(b.leading_coeff()).expect("nonzero leading coefficient");
    let mut r = a.coeffs.clone();
    let mut q = vec![0u64; r.len() - db];
    for k in (0..q.len()).rev() {
        let c = p.mul(r[k + db], inv);
        q[k] = c;
        if c != 0 {
            for (i, &bc) in b.coeffs.iter().enumerate() {
                r[k + i] = p.sub(r[k + i], p.mul(c, bc));
            }
        }
    }
    r.truncate(db);
    Ok((UniModPoly::new(p, q), UniModPoly::new(p, r)))
}

/// Monic gcd with Bezout cofactors `u*a + v*b = g`.
pub fn uni_ext_gcd_modp(a: &UniModPoly, b: &UniModPoly) -> (UniModPoly, UniModPoly, UniModPoly) {
    let p = a.prime;
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut u0, mut u1) = (UniModPoly::one(p), UniModPoly::zero(p));
    let (mut v0, mut v1) = (UniModPoly::zero(p), UniModPoly::one(p));
    while !r1.is_zero() {
        let (q, r) = uni_divrem_modp(&r0, &r1).expect("nonzero divisor");
        let u2 = u0.sub(&q.mul(&u1));
        let v2 = v0.sub(&q.mul(&v1));
        (r0, r1) = (r1, r);
        (u0, u1) = (u1, u2);
        (v0, v1) = (v1, v2);
    }
    match p.inv(r0.leading_coeff()) {
        Some(inv) => (r0.scale(inv), u0.scale(inv), v0.scale(inv)),
        None => (r0, u0, v0),
    }
}

/// Monic gcd; `gcd(0, 0) = 0`.
pub fn uni_gcd_modp(a: &UniModPoly, b: &UniModPoly) -> UniModPoly {
    uni_ext_gcd_modp(a, b).0
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p13() -> Prime {
        Prime::new(13).unwrap()
    }

    #[test]
    fn divrem_examples() {
        let p = p13();
        let a = UniModPoly::from_i64(p, &[2, -3, 1]);
        let b = UniModPoly::from_i64(p, &[-1, 1]);
        let (q, r) = uni_divrem_modp(&a, &b).unwrap();
        assert_eq!(q, UniModPoly::from_i64(p, &[-2, 1]));
        assert!(r.is_zero());

        let t = UniModPoly::t(p);
        let t2 = UniModPoly::from_i64(p, &[0, 0, 1]);
        let (q, r) = uni_divrem_modp(&t, &t2).unwrap();
        assert!(q.is_zero());
        assert_eq!(r, t);

        let (q, r) = uni_divrem_modp(&UniModPoly::zero(p), &b).unwrap();
        assert!(q.is_zero() && r.is_zero());

        assert_eq!(uni_divrem_modp(&a, &UniModPoly::zero(p)), Err(RurError::DivisionByZero));
    }

    #[test]
    fn gcd_examples() {
        let p = p13();
        let a = UniModPoly::from_i64(p, &[-1, 0, 1]);
        let b = UniModPoly::from_i64(p, &[-1, 1]);
        assert_eq!(uni_gcd_modp(&a, &b), b);

        let a = UniModPoly::from_i64(p, &[0, 0, 1]);
        let b = UniModPoly::from_i64(p, &[0, 2]);
        assert_eq!(uni_gcd_modp(&a, &b), UniModPoly::t(p));

        let a = UniModPoly::from_i64(p, &[4, 2]);
        assert_eq!(uni_gcd_modp(&a, &UniModPoly::zero(p)), a.monic());
    }

    #[test]
    fn bezout_cofactors() {
        let p = p13();
        let a = UniModPoly::from_i64(p, &[3, 1, 4, 1]);
        let b = UniModPoly::from_i64(p, &[5, 9, 2]);
        let (g, u, v) = uni_ext_gcd_modp(&a, &b);
        assert_eq!(u.mul(&a).add(&v.mul(&b)), g);
    }

    fn arb_poly(p: Prime, max_len: usize) -> impl Strategy<Value = UniModPoly> {
        proptest::collection::vec(0..p.get(), 0..max_len).prop_map(move |c| UniModPoly::new(p, c))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]
        #[test]
        fn divrem_reconstructs(a in arb_poly(Prime::new(1_073_741_789).unwrap(), 30),
                               b in arb_poly(Prime::new(1_073_741_789).unwrap(), 12)) {
            prop_assume!(!b.is_zero());
            let (q, r) = uni_divrem_modp(&a, &b).unwrap();
            prop_assert_eq!(q.mul(&b).add(&r), a);
            prop_assert!(r.is_zero() || r.degree() < b.degree());
        }
    }
}
