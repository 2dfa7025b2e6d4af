//! Exact certification of a reconstructed parametrization by substitution
//! into the original equations.
//!
//! For an equation `P` of total degree `delta`, the polynomial
//! `m'^delta * P(Q_1/m', ..., Q_n/m')` is formed over a single integer
//! denominator and divided by the primitive part of `m~`; the equation is
//! verified when the remainder vanishes.

use std::sync::atomic::{AtomicU64, Ordering};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::driver::RurCandidate;
use crate::polyarith::{uni_int_divrem, IntPoly, Monomial, UniIntPoly};
use crate::system::PolySystem;

/// Default width of the certification thread pool.
pub const DEFAULT_CERT_THREADS: usize = 6;

/// `A / a` with `A` an integer polynomial and `a > 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatUniPoly {
    pub num: UniIntPoly,
    pub den: BigInt,
}

impl RatUniPoly {
    pub fn new(num: UniIntPoly, den: BigInt) -> RatUniPoly {
        assert!(den.is_positive(), "denominator must be positive");
        RatUniPoly { num, den }
    }

    pub fn zero() -> RatUniPoly {
        RatUniPoly::new(UniIntPoly::zero(), BigInt::one())
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Divides numerator and denominator by their common factor.
    pub fn normalize(&self) -> RatUniPoly {
        if self.num.is_zero() {
            return RatUniPoly::zero();
        }
        let g = self.num.content().gcd(&self.den);
        RatUniPoly::new(self.num.div_exact_scalar(&g), &self.den / &g)
    }
}

/// Counts arithmetic work as the size (coefficients times bits) of every
/// product and sum formed.
#[derive(Debug, Default)]
pub struct WorkMeter {
    units: AtomicU64,
}

impl WorkMeter {
    pub fn new() -> WorkMeter {
        WorkMeter::default()
    }

    pub fn units(&self) -> u64 {
        self.units.load(Ordering::Relaxed)
    }

    fn charge(&self, p: &UniIntPoly) {
        let size = p.coeffs().len() as u64 * p.max_bits().max(1);
        self.units.fetch_add(size, Ordering::Relaxed);
    }
}

fn metered_mul(a: &UniIntPoly, b: &UniIntPoly, meter: Option<&WorkMeter>) -> UniIntPoly {
    let out = a.mul(b);
    if let Some(w) = meter {
        w.charge(&out);
    }
    out
}

/// `A/a + B/b = (A (b/g) + B (a/g)) / (g (a/g) (b/g))` with `g = gcd(a, b)`.
pub fn frac_add(x: &RatUniPoly, y: &RatUniPoly) -> RatUniPoly {
    frac_add_metered(x, y, None)
}

fn frac_add_metered(x: &RatUniPoly, y: &RatUniPoly, meter: Option<&WorkMeter>) -> RatUniPoly {
    if x.is_zero() {
        return y.clone();
    }
    if y.is_zero() {
        return x.clone();
    }
    let g = x.den.gcd(&y.den);
    let (ag, bg) = (&x.den / &g, &y.den / &g);
    let num = x.num.scale(&bg).add(&y.num.scale(&ag));
    if let Some(w) = meter {
        w.charge(&num);
    }
    RatUniPoly::new(num, g * ag * bg)
}

/// Product of a list of polynomials along a balanced binary tree.
fn product_tree(mut factors: Vec<UniIntPoly>, meter: Option<&WorkMeter>) -> UniIntPoly {
    if factors.is_empty() {
        return UniIntPoly::constant(BigInt::one());
    }
    while factors.len() > 1 {
        let mut next = Vec::with_capacity(factors.len().div_ceil(2));
        let mut it = factors.into_iter();
        while let Some(a) = it.next() {
            match it.next() {
                Some(b) => next.push(metered_mul(&a, &b, meter)),
                None => next.push(a),
            }
        }
        factors = next;
    }
    factors.pop().unwrap()
}

fn metered_pow(base: &UniIntPoly, mut e: u32, meter: Option<&WorkMeter>) -> UniIntPoly {
    let mut acc: Option<UniIntPoly> = None;
    let mut b = base.clone();
    while e > 0 {
        if e & 1 == 1 {
            acc = Some(match acc {
                Some(a) => metered_mul(&a, &b, meter),
                None => b.clone(),
            });
        }
        e >>= 1;
        if e > 0 {
            b = metered_mul(&b, &b, meter);
        }
    }
    acc.unwrap_or_else(|| UniIntPoly::constant(BigInt::one()))
}

/// `c D~^(delta - |alpha|) prod Q~_l^alpha_l` over
/// `d~^(delta - |alpha|) prod q_l^alpha_l`, not reduced modulo `m~`.
pub fn monomial_eval(coeff: &BigInt, mono: &Monomial, rur: &RurCandidate, delta: u32) -> RatUniPoly {
    monomial_eval_metered(coeff, mono, rur, delta, None)
}

fn monomial_eval_metered(
    coeff: &BigInt,
    mono: &Monomial,
    rur: &RurCandidate,
    delta: u32,
    meter: Option<&WorkMeter>,
) -> RatUniPoly {
    assert!(mono.degree() <= delta, "monomial degree exceeds delta");
    if coeff.is_zero() {
        return RatUniPoly::zero();
    }
    let rest = delta - mono.degree();
    let mut factors = Vec::new();
    let mut den = rur.dm_den.pow(rest);
    if rest > 0 {
        factors.push(metered_pow(&rur.dm, rest, meter));
    }
    for (l, &a) in mono.exps().iter().enumerate() {
        if a > 0 {
            factors.push(metered_pow(&rur.q[l], a as u32, meter));
            den *= rur.q_den[l].pow(a as u32);
        }
    }
    let num = product_tree(factors, meter).scale(coeff);
    RatUniPoly::new(num, den)
}

/// Sum of monomial evaluations, split in halves.
fn sum_terms(terms: &[(Monomial, BigInt)], rur: &RurCandidate, delta: u32, meter: Option<&WorkMeter>) -> RatUniPoly {
    match terms {
        [] => RatUniPoly::zero(),
        [(m, c)] => monomial_eval_metered(c, m, rur, delta, meter),
        _ => {
            let (a, b) = terms.split_at(terms.len() / 2);
            let x = sum_terms(a, rur, delta, meter);
            let y = sum_terms(b, rur, delta, meter);
            frac_add_metered(&x, &y, meter)
        }
    }
}

/// Verdict of one check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CheckOutcome {
    Verified,
    /// Carries the remainder modulo `m~`.
    Failed(UniIntPoly),
}

/// Remainder of `f` modulo the primitive part of `m`, up to a positive
/// constant factor.
fn remainder_mod(f: &UniIntPoly, m: &UniIntPoly) -> UniIntPoly {
    let mp = m.primitive_part();
    if let Ok(Some((_, r))) = f.try_exact_divrem(&mp) {
        return r;
    }
    uni_int_divrem(f, &mp).expect("nonzero modulus").1
}

pub fn substitute_check(eq: &IntPoly, rur: &RurCandidate) -> CheckOutcome {
    substitute_check_metered(eq, rur, None)
}

pub fn substitute_check_metered(eq: &IntPoly, rur: &RurCandidate, meter: Option<&WorkMeter>) -> CheckOutcome {
    let delta = eq.total_degree();
    let sum = sum_terms(eq.terms(), rur, delta, meter);
    let r = remainder_mod(&sum.num, &rur.m);
    if r.is_zero() {
        CheckOutcome::Verified
    } else {
        CheckOutcome::Failed(r)
    }
}

/// `sum lambda_i Q~_i / q_i = t D~ / d~ (mod m~)`, checked after clearing
/// by `lcm(q_1, ..., q_n, d~)`.
pub fn sepform_identity_check(rur: &RurCandidate) -> CheckOutcome {
    let l = rur.q_den.iter().fold(rur.dm_den.clone(), |acc, q| acc.lcm(q));
    let mut acc = rur.dm.shift(1).scale(&-(&l / &rur.dm_den));
    for ((q, den), &lam) in rur.q.iter().zip(&rur.q_den).zip(rur.form.lambda()) {
        if lam != 0 {
            acc = acc.add(&q.scale(&(&l / den * BigInt::from(lam))));
        }
    }
    let r = remainder_mod(&acc, &rur.m);
    if r.is_zero() {
        CheckOutcome::Verified
    } else {
        CheckOutcome::Failed(r)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CertStatus {
    Verified,
    Failed { residual: UniIntPoly },
    Skipped,
}

impl CertStatus {
    fn from_outcome(o: CheckOutcome) -> CertStatus {
        match o {
            CheckOutcome::Verified => CertStatus::Verified,
            CheckOutcome::Failed(residual) => CertStatus::Failed { residual },
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            CertStatus::Verified => "verified",
            CertStatus::Failed { .. } => "failed",
            CertStatus::Skipped => "skipped",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquationRecord {
    /// Total degree `delta`.
    pub degree: u32,
    /// Number of monomials `l`.
    pub monomials: usize,
    pub status: CertStatus,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertReport {
    pub equations: Vec<EquationRecord>,
    pub sepform_identity: CertStatus,
    /// `0` skips everything, `1` checks every equation, `n > 1` checks
    /// equations of total degree below `n`.
    pub mode: u32,
    /// The parametrization describes the radical of the input ideal.
    pub radicalized: bool,
}

impl CertReport {
    pub fn all_skipped(&self) -> bool {
        self.sepform_identity == CertStatus::Skipped && self.equations.iter().all(|e| e.status == CertStatus::Skipped)
    }

    pub fn any_failed(&self) -> bool {
        matches!(self.sepform_identity, CertStatus::Failed { .. })
            || self.equations.iter().any(|e| matches!(e.status, CertStatus::Failed { .. }))
    }

    /// Every equation and the identity were checked and passed.
    pub fn all_verified(&self) -> bool {
        self.sepform_identity == CertStatus::Verified && self.equations.iter().all(|e| e.status != CertStatus::Skipped) && !self.any_failed()
    }
}

fn wants(mode: u32, degree: u32) -> bool {
    match mode {
        0 => false,
        1 => true,
        n => degree < n,
    }
}

/// Certifies every selected equation of `system` on a pool of
/// `thread_cap` threads; records come back in input order.
pub fn certify(system: &PolySystem, rur: &RurCandidate, mode: u32, thread_cap: usize) -> CertReport {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(thread_cap.max(1))
        .build()
        .expect("certification thread pool");
    let equations: Vec<EquationRecord> = pool.install(|| {
        system
            .generators()
            .par_iter()
            .map(|eq| {
                let degree = eq.total_degree();
                let status = if wants(mode, degree) {
                    CertStatus::from_outcome(substitute_check(eq, rur))
                } else {
                    CertStatus::Skipped
                };
                EquationRecord {
                    degree,
                    monomials: eq.len(),
                    status,
                }
            })
            .collect()
    });
    let any_checked = equations.iter().any(|e| e.status != CertStatus::Skipped);
    let sepform_identity = if any_checked {
        CertStatus::from_outcome(sepform_identity_check(rur))
    } else {
        CertStatus::Skipped
    };
    CertReport {
        equations,
        sepform_identity,
        mode,
        radicalized: rur.radicalized,
    }
}
