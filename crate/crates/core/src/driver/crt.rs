use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Result, RurError};
use crate::gbasis::{signatures_compatible, LearnedHints, Signature};
use crate::polyarith::Prime;
use crate::quotient::SepForm;
use crate::rur_modp::RurModP;

/// Residues of `m` and every `Q_i` modulo the product of the used primes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrtState {
    modulus: BigInt,
    m: Vec<BigInt>,
    q: Vec<Vec<BigInt>>,
    primes: Vec<u64>,
    form: SepForm,
    signature: Signature,
    dim: usize,
    radicalized: bool,
    hints: LearnedHints,
}

fn lift(coeffs: &[u64], len: usize) -> Vec<BigInt> {
    (0..len).map(|i| BigInt::from(coeffs.get(i).copied().unwrap_or(0))).collect()
}

impl CrtState {
    pub fn new(r: &RurModP) -> CrtState {
        CrtState {
            modulus: BigInt::from(r.prime.get()),
            m: lift(r.m.coeffs(), r.dim + 1),
            q: r.q.iter().map(|q| lift(q.coeffs(), r.dim)).collect(),
            primes: vec![r.prime.get()],
            form: r.form.clone(),
            signature: r.signature.clone(),
            dim: r.dim,
            radicalized: r.radicalized,
            hints: r.hints.clone(),
        }
    }

    /// `P`, the product of the used primes.
    pub fn modulus(&self) -> &BigInt {
        &self.modulus
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    /// `N`.
    pub fn count(&self) -> usize {
        self.primes.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn form(&self) -> &SepForm {
        &self.form
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn radicalized(&self) -> bool {
        self.radicalized
    }

    pub fn hints(&self) -> &LearnedHints {
        &self.hints
    }

    /// Residues of `m`, constant term first, length `d + 1`.
    pub fn m_residues(&self) -> &[BigInt] {
        &self.m
    }

    /// Residues of each `Q_i`, length `d`.
    pub fn q_residues(&self) -> &[Vec<BigInt>] {
        &self.q
    }

    /// Same form, same leading-monomial set, same dimension.
    pub fn is_compatible(&self, r: &RurModP) -> bool {
        self.form == r.form && self.dim == r.dim && signatures_compatible(&self.signature, &r.signature)
    }
}

/// The residue mod `P p` congruent to `a` mod `P` and `b` mod `p`.
pub fn crt_pair(a: &BigInt, modulus: &BigInt, b: u64, p: Prime) -> BigInt {
    let pm = p.from_bigint(modulus);
    let inv = p.inv(pm).expect("coprime moduli");
    let diff = p.sub(b % p.get(), p.from_bigint(a));
    a + modulus * BigInt::from(p.mul(diff, inv))
}

pub fn crt_combine(state: CrtState, r: &RurModP) -> Result<CrtState> {
    let p = r.prime;
    if state.primes.contains(&p.get()) || !state.is_compatible(r) {
        return Err(RurError::IncompatiblePrime(p.get()));
    }
    let modulus = &state.modulus;
    let combine = |old: &[BigInt], new: &[u64]| -> Vec<BigInt> {
        old.iter()
            .enumerate()
            .map(|(i, a)| crt_pair(a, modulus, new.get(i).copied().unwrap_or(0), p))
            .collect()
    };
    let m = combine(&state.m, r.m.coeffs());
    let q = state.q.iter().zip(&r.q).map(|(o, n)| combine(o, n.coeffs())).collect();
    let mut primes = state.primes;
    primes.push(p.get());
    Ok(CrtState {
        modulus: &state.modulus * BigInt::from(p.get()),
        m,
        q,
        primes,
        form: state.form,
        signature: state.signature,
        dim: state.dim,
        radicalized: state.radicalized || r.radicalized,
        hints: state.hints,
    })
}

/// Numerator and denominator bounds `(N, D)` with `2 N D < P`.
pub fn farey_bounds(modulus: &BigInt) -> (BigInt, BigInt) {
    let n = (modulus / 2u32).sqrt();
    if n.is_zero() {
        return (n, BigInt::one());
    }
    let d = (modulus - 1u32) / (&n * 2u32);
    (n, d)
}

/// Rational reconstruction of `residue` modulo `modulus` by the
/// half-extended Euclidean algorithm, with `|a| <= N` and `0 < b <= D`
/// for the bounds of [`farey_bounds`].
pub fn farey(residue: &BigInt, modulus: &BigInt) -> Result<BigRational> {
    if modulus < &BigInt::from(2) {
        return Err(RurError::Usage("Farey reconstruction needs a modulus of at least 2".into()));
    }
    let (nb, db) = farey_bounds(modulus);
    let (mut r0, mut r1) = (modulus.clone(), residue.mod_floor(modulus));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while r1 > nb {
        let (q, r) = r0.div_rem(&r1);
        let t = &t0 - &q * &t1;
        (r0, r1) = (r1, r);
        (t0, t1) = (t1, t);
    }
    if t1.is_zero() || t1.abs() > db {
        return Err(RurError::NoReconstruction);
    }
    let (a, b) = if t1.is_negative() { (-r1, -t1) } else { (r1, t1) };
    if !a.gcd(&b).is_one() {
        return Err(RurError::NoReconstruction);
    }
    Ok(BigRational::new_raw(a, b))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn farey_examples() {
        let m = BigInt::from(13);
        assert_eq!(farey(&5.into(), &m).unwrap(), rat(2, 3));
        assert_eq!(farey(&12.into(), &m).unwrap(), rat(-1, 1));
        assert_eq!(farey(&4.into(), &m).unwrap(), rat(-1, 3));
        assert_eq!(farey(&0.into(), &m).unwrap(), rat(0, 1));
    }

    #[test]
    fn crt_example() {
        let p5 = Prime::new(5).unwrap();
        assert_eq!(crt_pair(&2.into(), &3.into(), 3, p5), BigInt::from(8));
    }

    #[test]
    fn farey_fails_beyond_bounds() {
        // N = 2, D = 3: 3 and 10 have no representative a/b
        let m = BigInt::from(13);
        assert!(farey(&BigInt::from(3), &m).is_err());
        assert!(farey(&BigInt::from(10), &m).is_err());
    }

    #[test]
    fn bounds_keep_uniqueness() {
        for p in [2u64, 3, 13, 101, 1 << 20, 1_000_003] {
            let (n, d) = farey_bounds(&BigInt::from(p));
            assert!(BigInt::from(2) * n * d < BigInt::from(p));
        }
    }
}
