//! Real-root isolation by Vincent–Akritas–Strzeboński continued fractions
//! and solution boxes through the parametrization.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::driver::RurCandidate;
use crate::polyarith::{is_prime_u64, uni_gcd_modp, IntPoly, Prime, UniIntPoly, UniModPoly, PRIME_BITS};

/// Closed rational interval.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatInterval {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl RatInterval {
    pub fn new(lo: BigRational, hi: BigRational) -> RatInterval {
        debug_assert!(lo <= hi);
        RatInterval { lo, hi }
    }

    pub fn point(x: BigRational) -> RatInterval {
        RatInterval { lo: x.clone(), hi: x }
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_zero(&self) -> bool {
        self.contains(&BigRational::zero())
    }

    pub fn add(&self, o: &RatInterval) -> RatInterval {
        RatInterval::new(&self.lo + &o.lo, &self.hi + &o.hi)
    }

    pub fn mul(&self, o: &RatInterval) -> RatInterval {
        let c = [&self.lo * &o.lo, &self.lo * &o.hi, &self.hi * &o.lo, &self.hi * &o.hi];
        let lo = c.iter().min().unwrap().clone();
        let hi = c.iter().max().unwrap().clone();
        RatInterval::new(lo, hi)
    }

    pub fn scale(&self, k: &BigRational) -> RatInterval {
        let (a, b) = (&self.lo * k, &self.hi * k);
        if a <= b {
            RatInterval::new(a, b)
        } else {
            RatInterval::new(b, a)
        }
    }

    /// `None` when the divisor contains zero.
    pub fn div(&self, o: &RatInterval) -> Option<RatInterval> {
        if o.contains_zero() {
            return None;
        }
        let inv = RatInterval::new(o.hi.recip(), o.lo.recip());
        Some(self.mul(&inv))
    }

    pub fn pow(&self, e: u32) -> RatInterval {
        let mut acc = RatInterval::point(BigRational::one());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }
}

/// An isolating interval of one real root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsolationInterval {
    pub lo: BigRational,
    pub hi: BigRational,
    /// `lo = hi` is the root itself.
    pub exact: bool,
}

impl IsolationInterval {
    pub fn as_interval(&self) -> RatInterval {
        RatInterval::new(self.lo.clone(), self.hi.clone())
    }
}

fn sign_variations(c: &[BigInt]) -> usize {
    let mut last = 0i8;
    let mut v = 0;
    for x in c {
        let s = if x.is_positive() {
            1
        } else if x.is_negative() {
            -1
        } else {
            0
        };
        if s != 0 {
            if last != 0 && s != last {
                v += 1;
            }
            last = s;
        }
    }
    v
}

/// `p(t + s)` by repeated synthetic division.
fn taylor_shift(c: &[BigInt], s: &BigInt) -> Vec<BigInt> {
    let mut a = c.to_vec();
    let n = a.len();
    for i in 0..n {
        for j in (i..n.saturating_sub(1)).rev() {
            let t = &a[j + 1] * s;
            a[j] += t;
        }
    }
    a
}

fn bits(x: &BigInt) -> i64 {
    x.bits() as i64
}

/// Exponent `e` with every positive root below `2^e` (leading coefficient
/// normalized positive). `None` when there are no negative coefficients.
fn positive_root_upper_exponent(c: &[BigInt]) -> Option<i64> {
    let n = c.len() - 1;
    let flip = c[n].is_negative();
    let lead_bits = bits(&c[n]);
    let mut best: Option<i64> = None;
    for (i, a) in c.iter().enumerate().take(n) {
        let neg = if flip { a.is_positive() } else { a.is_negative() };
        if neg {
            let k = (n - i) as i64;
            let e = (bits(a) - lead_bits + 1).div_euclid(k) + i64::from((bits(a) - lead_bits + 1).rem_euclid(k) != 0);
            best = Some(best.map_or(e, |b: i64| b.max(e)));
        }
    }
    best.map(|e| e + 1)
}

fn cauchy_bound(c: &[BigInt]) -> BigInt {
    let lead = c.last().unwrap().abs();
    let max = c.iter().map(|x| x.abs()).max().unwrap();
    BigInt::one() + (max + &lead - 1u32) / lead
}

fn ratio(num: &BigInt, den: &BigInt) -> BigRational {
    BigRational::new(num.clone(), den.clone())
}

/// Positive real roots of `c` (which must not vanish at zero).
fn vas_positive(c: &[BigInt]) -> Vec<IsolationInterval> {
    let bound = cauchy_bound(c);
    let mut out = Vec::new();
    let one = BigInt::one();
    let zero = BigInt::zero();
    let mut stack: Vec<(Vec<BigInt>, [BigInt; 4])> = vec![(c.to_vec(), [one.clone(), zero.clone(), zero.clone(), one.clone()])];
    while let Some((mut p, [a, mut b, c_, mut d])) = stack.pop() {
        if p.len() <= 1 {
            continue;
        }
        let v = sign_variations(&p);
        if v == 0 {
            continue;
        }
        if v == 1 {
            let lo = ratio(&b, &d);
            let hi = if c_.is_zero() {
                BigRational::from_integer(bound.clone())
            } else {
                ratio(&a, &c_)
            };
            let (lo, hi) = if lo <= hi { (lo, hi) } else { (hi, lo) };
            out.push(IsolationInterval { lo, hi, exact: false });
            continue;
        }
        // shift by a power-of-two lower bound of the positive roots
        let rev: Vec<BigInt> = p.iter().rev().cloned().collect();
        if let Some(e) = positive_root_upper_exponent(&rev) {
            if e <= 0 {
                let lb = BigInt::one() << ((-e) as usize);
                p = taylor_shift(&p, &lb);
                b = &a * &lb + &b;
                d = &c_ * &lb + &d;
                if p[0].is_zero() {
                    out.push(IsolationInterval {
                        lo: ratio(&b, &d),
                        hi: ratio(&b, &d),
                        exact: true,
                    });
                    p.remove(0);
                }
            }
        }
        // y > 1
        let mut p1 = taylor_shift(&p, &one);
        let (a1, b1, c1, d1) = (a.clone(), &a + &b, c_.clone(), &c_ + &d);
        let root_at_one = p1[0].is_zero();
        if root_at_one {
            out.push(IsolationInterval {
                lo: ratio(&b1, &d1),
                hi: ratio(&b1, &d1),
                exact: true,
            });
            p1.remove(0);
        }
        // 0 < y < 1 via y -> 1 / (1 + y)
        let mut rev = p.clone();
        rev.reverse();
        let mut p2 = taylor_shift(&rev, &one);
        while p2.len() > 1 && p2[0].is_zero() {
            p2.remove(0);
        }
        let (a2, b2, c2, d2) = (b.clone(), &a + &b, d.clone(), &c_ + &d);
        stack.push((p2, [a2, b2, c2, d2]));
        stack.push((p1, [a1, b1, c1, d1]));
    }
    out
}

fn eval_rat(p: &UniIntPoly, x: &BigRational) -> BigRational {
    p.coeffs()
        .iter()
        .rev()
        .fold(BigRational::zero(), |acc, c| acc * x + BigRational::from_integer(c.clone()))
}

fn int_sign(x: &BigInt) -> i8 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

/// Sign of `p(a/b)` from the integer `b^n p(a/b)`.
fn sign_at(p: &UniIntPoly, x: &BigRational) -> i8 {
    let (a, b) = (x.numer(), x.denom());
    let c = p.coeffs();
    let Some(last) = c.last() else {
        return 0;
    };
    let mut acc = last.clone();
    let mut bpow = BigInt::one();
    for ci in c.iter().rev().skip(1) {
        bpow *= b;
        acc = acc * a + ci * &bpow;
    }
    int_sign(&acc)
}

#[cfg(test)]
fn sign(x: &BigRational) -> i8 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

/// Isolating intervals of the real roots of a squarefree `m`, ascending.
/// Non-exact intervals have endpoints that are not roots and are disjoint
/// from every other interval.
pub fn isolate_real_roots(m: &UniIntPoly) -> Vec<IsolationInterval> {
    assert!(!m.is_zero(), "cannot isolate the roots of zero");
    let mut c = m.coeffs().to_vec();
    let mut out = Vec::new();
    if c[0].is_zero() {
        out.push(IsolationInterval {
            lo: BigRational::zero(),
            hi: BigRational::zero(),
            exact: true,
        });
        while c.len() > 1 && c[0].is_zero() {
            c.remove(0);
        }
    }
    let positive = vas_positive(&c);
    let reflected = UniIntPoly::new(c.clone()).reflect();
    let negative: Vec<IsolationInterval> = vas_positive(reflected.coeffs())
        .into_iter()
        .map(|iv| IsolationInterval {
            lo: -iv.hi,
            hi: -iv.lo,
            exact: iv.exact,
        })
        .collect();
    out.extend(positive);
    out.extend(negative);
    let rational = may_have_rational_root(m);
    let mut out: Vec<IsolationInterval> = out
        .into_iter()
        .map(|iv| {
            let iv = separate(m, iv);
            if rational {
                rational_root_in(m, iv)
            } else {
                iv
            }
        })
        .collect();
    out.sort_by(|x, y| x.lo.cmp(&y.lo));
    for i in 1..out.len() {
        while out[i - 1].hi >= out[i].lo {
            if out[i - 1].exact {
                out[i] = bisect(m, &out[i]);
            } else {
                out[i - 1] = bisect(m, &out[i - 1]);
            }
        }
    }
    out
}

/// `t^e mod m` over `Z/pZ`.
fn power_of_t(e: u64, m: &UniModPoly) -> UniModPoly {
    let p = m.prime();
    let mut acc = UniModPoly::one(p);
    let t = UniModPoly::t(p).rem(m).expect("nonzero modulus");
    for bit in (0..64 - e.leading_zeros()).rev() {
        acc = acc.mul_mod(&acc, m).expect("nonzero modulus");
        if e >> bit & 1 == 1 {
            acc = acc.mul_mod(&t, m).expect("nonzero modulus");
        }
    }
    acc
}

/// Primes tried by [`may_have_rational_root`].
const RATIONAL_FILTER_PRIMES: usize = 6;

/// `false` when some prime image of `m` has no root in `Z/pZ`, which
/// rules out a linear factor over the rationals.
fn may_have_rational_root(m: &UniIntPoly) -> bool {
    if m.degree().unwrap_or(0) <= 1 {
        return m.degree() == Some(1);
    }
    let mut tried = 0;
    let mut c: u64 = (1 << PRIME_BITS) - 1;
    while tried < RATIONAL_FILTER_PRIMES {
        c -= 2;
        if !is_prime_u64(c) {
            continue;
        }
        let p = Prime::new(c).expect("checked prime");
        if p.from_bigint(&m.leading_coeff()) == 0 {
            continue;
        }
        tried += 1;
        let mp = UniModPoly::new(p, m.coeffs().iter().map(|x| p.from_bigint(x)).collect());
        let frob = power_of_t(c, &mp).sub(&UniModPoly::t(p));
        if uni_gcd_modp(&frob, &mp).degree() == Some(0) {
            return false;
        }
    }
    true
}

/// Replaces `iv` by the exact root when that root is rational. Its
/// denominator divides the leading coefficient, so an interval narrower
/// than `1 / lc` holds at most one candidate.
fn rational_root_in(m: &UniIntPoly, iv: IsolationInterval) -> IsolationInterval {
    if iv.exact {
        return iv;
    }
    let lc = m.leading_coeff().abs();
    let step = BigRational::new(BigInt::one(), lc.clone());
    let narrow = refine(m, &iv, &(&step / BigRational::from_integer(BigInt::from(2))));
    if narrow.exact {
        return narrow;
    }
    let k = (&narrow.lo * BigRational::from_integer(lc.clone())).ceil();
    let x = k / BigRational::from_integer(lc);
    if narrow.as_interval().contains(&x) && sign_at(m, &x) == 0 {
        return IsolationInterval {
            lo: x.clone(),
            hi: x,
            exact: true,
        };
    }
    iv
}

/// Sign of `p` just to the right of `x`.
fn sign_right_of(p: &UniIntPoly, x: &BigRational) -> i8 {
    let s = sign_at(p, x);
    if s != 0 {
        return s;
    }
    sign_at(&p.derivative(), x)
}

/// Bisects `iv` once, keeping the half with the root; returns an exact
/// interval when the midpoint is the root.
fn bisect(p: &UniIntPoly, iv: &IsolationInterval) -> IsolationInterval {
    let two = BigRational::from_integer(BigInt::from(2));
    let mid = (&iv.lo + &iv.hi) / two;
    let sm = sign_at(p, &mid);
    if sm == 0 {
        return IsolationInterval {
            lo: mid.clone(),
            hi: mid,
            exact: true,
        };
    }
    if sm != sign_right_of(p, &iv.lo) {
        IsolationInterval {
            lo: iv.lo.clone(),
            hi: mid,
            exact: false,
        }
    } else {
        IsolationInterval {
            lo: mid,
            hi: iv.hi.clone(),
            exact: false,
        }
    }
}

/// Shrinks an open isolating interval until neither endpoint is a root.
fn separate(p: &UniIntPoly, mut iv: IsolationInterval) -> IsolationInterval {
    while !iv.exact && (sign_at(p, &iv.lo) == 0 || sign_at(p, &iv.hi) == 0) {
        iv = bisect(p, &iv);
    }
    iv
}

/// Bisects until the width is at most `width`.
pub fn refine(p: &UniIntPoly, iv: &IsolationInterval, width: &BigRational) -> IsolationInterval {
    let mut iv = iv.clone();
    while !iv.exact && &(&iv.hi - &iv.lo) > width {
        iv = bisect(p, &iv);
    }
    iv
}

/// Interval Horner evaluation.
pub fn eval_interval(p: &UniIntPoly, x: &RatInterval) -> RatInterval {
    let mut acc = RatInterval::point(BigRational::zero());
    for c in p.coeffs().iter().rev() {
        acc = acc.mul(x).add(&RatInterval::point(BigRational::from_integer(c.clone())));
    }
    acc
}

/// One real solution: an interval per variable and the root of `m~`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolutionBox {
    pub coords: Vec<RatInterval>,
    pub root: IsolationInterval,
}

/// `[lo, hi]` with `f([A, B] / 2^k) 2^(k n) ⊆ [lo, hi]` for `n = deg`,
/// by interval Horner over the integers.
fn scaled_horner(f: &[BigInt], n: usize, a: &BigInt, b: &BigInt, k: usize) -> (BigInt, BigInt) {
    let (mut lo, mut hi) = (BigInt::zero(), BigInt::zero());
    for i in (0..=n).rev() {
        let c = f.get(i).cloned().unwrap_or_default() << (k * (n - i));
        let p = [&lo * a, &lo * b, &hi * a, &hi * b];
        lo = p.iter().min().unwrap() + &c;
        hi = p.iter().max().unwrap() + &c;
    }
    (lo, hi)
}

/// Encloses `num(t) / den(t)` for `t` in `iv` widened to the `2^-k` grid;
/// `None` when the enclosure of `den` contains zero.
fn fraction_on_grid(num: &UniIntPoly, den: &UniIntPoly, iv: &IsolationInterval, k: usize) -> Option<RatInterval> {
    let scale = BigRational::from_integer(BigInt::one() << k);
    let a = (&iv.lo * &scale).floor().to_integer();
    let b = (&iv.hi * &scale).ceil().to_integer();
    let n = num.coeffs().len().max(den.coeffs().len()).saturating_sub(1);
    let (nl, nh) = scaled_horner(num.coeffs(), n, &a, &b, k);
    let (dl, dh) = scaled_horner(den.coeffs(), n, &a, &b, k);
    let as_rat = |x: BigInt| BigRational::from_integer(x);
    RatInterval::new(as_rat(nl), as_rat(nh)).div(&RatInterval::new(as_rat(dl), as_rat(dh)))
}

/// Bits of refinement tried first beyond the target precision.
const INITIAL_GUARD_BITS: u32 = 16;

/// Evaluates `x_i = d~ Q~_i(t) / (q_i D~(t))` over each root interval,
/// refining until every coordinate is at most `2^-precision` wide.
pub fn solution_boxes(rur: &RurCandidate, intervals: &[IsolationInterval], precision: u32) -> Vec<SolutionBox> {
    let target = BigRational::new(BigInt::one(), BigInt::one() << precision as usize);
    let fractions: Vec<(UniIntPoly, UniIntPoly)> = (0..rur.q.len()).map(|i| rur.variable_fraction(i)).collect();
    intervals
        .iter()
        .map(|iv0| {
            if iv0.exact {
                let x = &iv0.lo;
                let coords = fractions
                    .iter()
                    .map(|(num, den)| RatInterval::point(eval_rat(num, x) / eval_rat(den, x)))
                    .collect();
                return SolutionBox {
                    coords,
                    root: iv0.clone(),
                };
            }
            let mut guard = INITIAL_GUARD_BITS;
            let mut iv = iv0.clone();
            loop {
                let bits = (precision + guard) as usize;
                iv = refine(&rur.m, &iv, &BigRational::new(BigInt::one(), BigInt::one() << bits));
                if iv.exact {
                    return solution_boxes(rur, &[iv], precision).remove(0);
                }
                let coords: Option<Vec<RatInterval>> = fractions
                    .iter()
                    .map(|(num, den)| fraction_on_grid(num, den, &iv, bits + 2))
                    .collect();
                if let Some(coords) = coords {
                    if coords.iter().all(|c| c.width() <= target) {
                        return SolutionBox { coords, root: iv };
                    }
                }
                guard *= 2;
            }
        })
        .collect()
}

/// Interval evaluation of a multivariate integer polynomial on a box.
pub fn eval_on_box(eq: &IntPoly, coords: &[RatInterval]) -> RatInterval {
    let mut acc = RatInterval::point(BigRational::zero());
    for (mono, c) in eq.terms() {
        let mut term = RatInterval::point(BigRational::from_integer(c.clone()));
        for (x, &e) in coords.iter().zip(mono.exps()) {
            if e > 0 {
                term = term.mul(&x.pow(e as u32));
            }
        }
        acc = acc.add(&term);
    }
    acc
}
