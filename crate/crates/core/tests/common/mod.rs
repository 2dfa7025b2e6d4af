//! Independent oracles over the rationals and over `Z/pZ`.
#![allow(dead_code)]

use std::io::Write;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use rur_core::polyarith::{is_prime_u64, IntPoly, Monomial, Prime};

pub type Q = BigRational;

pub fn q(a: i64, b: i64) -> Q {
    Q::new(a.into(), b.into())
}

pub fn qi(a: &BigInt) -> Q {
    Q::from_integer(a.clone())
}

/// Writes a result line that survives the test harness's output capture.
pub fn report(criterion: u32, name: &str, pass: bool, detail: &str) {
    let verdict = if pass { "PASS" } else { "FAIL" };
    let _ = writeln!(std::io::stderr(), "acceptance criterion {criterion:>2} [{name}]: {verdict} ({detail})");
}

pub fn random_prime_30<R: Rng>(rng: &mut R) -> Prime {
    loop {
        let c = rng.gen_range(1u64 << 29..1u64 << 30);
        if is_prime_u64(c) {
            return Prime::new(c).unwrap();
        }
    }
}

// ---- dense univariate polynomials over Q, constant term first ----

pub fn trim(mut p: Vec<Q>) -> Vec<Q> {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

pub fn deg(p: &[Q]) -> Option<usize> {
    p.iter().rposition(|c| !c.is_zero())
}

pub fn eval(p: &[Q], x: &Q) -> Q {
    p.iter().rev().fold(Q::zero(), |acc, c| acc * x + c)
}

pub fn derivative(p: &[Q]) -> Vec<Q> {
    trim(p.iter().enumerate().skip(1).map(|(i, c)| c * qi(&BigInt::from(i))).collect())
}

pub fn divrem(a: &[Q], b: &[Q]) -> (Vec<Q>, Vec<Q>) {
    let db = deg(b).expect("division by zero");
    let mut r = trim(a.to_vec());
    let mut quo = vec![Q::zero(); r.len().saturating_sub(db).max(1)];
    while let Some(dr) = deg(&r) {
        if dr < db {
            break;
        }
        let c = &r[dr] / &b[db];
        for (i, bc) in b.iter().enumerate().take(db + 1) {
            r[dr - db + i] = &r[dr - db + i] - &c * bc;
        }
        quo[dr - db] = c;
        r = trim(r);
    }
    (trim(quo), r)
}

pub fn gcd(a: &[Q], b: &[Q]) -> Vec<Q> {
    let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
    while deg(&b).is_some() {
        let (_, r) = divrem(&a, &b);
        a = b;
        b = r;
    }
    let lc = a.last().cloned().unwrap_or_else(Q::one);
    a.iter().map(|c| c / &lc).collect()
}

pub fn squarefree(p: &[Q]) -> Vec<Q> {
    let g = gcd(p, &derivative(p));
    divrem(p, &g).0
}

fn sign(x: &Q) -> i32 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

pub fn sturm(p: &[Q]) -> Vec<Vec<Q>> {
    let mut seq = vec![trim(p.to_vec()), derivative(p)];
    while deg(seq.last().unwrap()).is_some_and(|d| d > 0) {
        let n = seq.len();
        let (_, r) = divrem(&seq[n - 2], &seq[n - 1]);
        if deg(&r).is_none() {
            break;
        }
        seq.push(r.iter().map(|c| -c).collect());
    }
    seq
}

fn variations_at(seq: &[Vec<Q>], x: &Q) -> usize {
    let signs: Vec<i32> = seq.iter().map(|s| sign(&eval(s, x))).filter(|&s| s != 0).collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Distinct real roots of `p` in `(a, b]`.
pub fn count_roots(seq: &[Vec<Q>], a: &Q, b: &Q) -> usize {
    variations_at(seq, a) - variations_at(seq, b)
}

pub fn cauchy(p: &[Q]) -> Q {
    let d = deg(p).unwrap();
    let lc = p[d].abs();
    Q::one() + p.iter().take(d).map(|c| c.abs() / &lc).max().unwrap_or_else(Q::zero)
}

/// Isolates and refines every real root of a squarefree `p` to width
/// at most `width`, by Sturm counts and sign bisection.
pub fn real_roots(p: &[Q], width: &Q) -> Vec<(Q, Q)> {
    if deg(p).unwrap_or(0) == 0 {
        return Vec::new();
    }
    let seq = sturm(p);
    let b = cauchy(p);
    let mut todo = vec![(-b.clone(), b)];
    let mut out = Vec::new();
    while let Some((lo, hi)) = todo.pop() {
        match count_roots(&seq, &lo, &hi) {
            0 => {}
            1 => out.push(refine(p, lo, hi, width)),
            _ => {
                let mid = (&lo + &hi) / q(2, 1);
                todo.push((lo, mid.clone()));
                todo.push((mid, hi));
            }
        }
    }
    out.sort();
    out
}

/// The single root in `(lo, hi]` narrowed to `width`.
fn refine(p: &[Q], mut lo: Q, mut hi: Q, width: &Q) -> (Q, Q) {
    if eval(p, &hi).is_zero() {
        return (hi.clone(), hi);
    }
    let s_hi = sign(&eval(p, &hi));
    while &(&hi - &lo) > width {
        let mid = (&lo + &hi) / q(2, 1);
        let s = sign(&eval(p, &mid));
        if s == 0 {
            return (mid.clone(), mid);
        }
        if s == s_hi {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    (lo, hi)
}

pub fn interpolate(xs: &[Q], ys: &[Q]) -> Vec<Q> {
    let n = xs.len();
    let mut out = vec![Q::zero(); n];
    for i in 0..n {
        let mut basis = vec![Q::one()];
        let mut denom = Q::one();
        for j in (0..n).filter(|&j| j != i) {
            let mut next = vec![Q::zero(); basis.len() + 1];
            for (k, c) in basis.iter().enumerate() {
                next[k + 1] += c;
                next[k] -= c * &xs[j];
            }
            basis = next;
            denom *= &xs[i] - &xs[j];
        }
        let scale = &ys[i] / denom;
        for (k, c) in basis.iter().enumerate() {
            out[k] += c * &scale;
        }
    }
    trim(out)
}

pub fn det(mut a: Vec<Vec<Q>>) -> Q {
    let n = a.len();
    let mut d = Q::one();
    for c in 0..n {
        let Some(piv) = (c..n).find(|&r| !a[r][c].is_zero()) else {
            return Q::zero();
        };
        if piv != c {
            a.swap(piv, c);
            d = -d;
        }
        d *= &a[c][c];
        for r in c + 1..n {
            let f = &a[r][c] / &a[c][c];
            for k in c..n {
                let t = &f * &a[c][k];
                a[r][k] -= t;
            }
        }
    }
    d
}

pub fn sylvester_resultant(f: &[Q], g: &[Q]) -> Q {
    let (m, n) = (deg(f).unwrap(), deg(g).unwrap());
    let size = m + n;
    let mut rows = Vec::with_capacity(size);
    for i in 0..n {
        let mut row = vec![Q::zero(); size];
        for (k, c) in f.iter().enumerate().take(m + 1) {
            row[i + m - k] = c.clone();
        }
        rows.push(row);
    }
    for i in 0..m {
        let mut row = vec![Q::zero(); size];
        for (k, c) in g.iter().enumerate().take(n + 1) {
            row[i + n - k] = c.clone();
        }
        rows.push(row);
    }
    det(rows)
}

/// Coefficients in variable `keep` of `f` with the other variable of a
/// bivariate polynomial set to `at`.
pub fn specialize(f: &IntPoly, keep: usize, at: &Q) -> Vec<Q> {
    let mut out = vec![Q::zero(); f.total_degree() as usize + 1];
    for (mono, c) in f.terms() {
        let e = mono.exps();
        out[e[keep] as usize] += qi(c) * num_traits::pow(at.clone(), e[1 - keep] as usize);
    }
    trim(out)
}

/// `Res` eliminating variable `eliminate` of two bivariate polynomials whose
/// leading coefficients in that variable are constants.
pub fn resultant(f: &IntPoly, g: &IntPoly, eliminate: usize) -> Vec<Q> {
    let bound = (f.total_degree() * g.total_degree()) as i64;
    let xs: Vec<Q> = (0..=bound).map(|i| q(i, 1)).collect();
    let ys: Vec<Q> = xs
        .iter()
        .map(|x| sylvester_resultant(&specialize(f, eliminate, x), &specialize(g, eliminate, x)))
        .collect();
    interpolate(&xs, &ys)
}

/// Closed rational interval arithmetic for evaluating equations on boxes.
#[derive(Clone, Debug)]
pub struct Iv(pub Q, pub Q);

impl Iv {
    pub fn mul(&self, o: &Iv) -> Iv {
        let c = [&self.0 * &o.0, &self.0 * &o.1, &self.1 * &o.0, &self.1 * &o.1];
        Iv(c.iter().min().unwrap().clone(), c.iter().max().unwrap().clone())
    }

    pub fn add(&self, o: &Iv) -> Iv {
        Iv(&self.0 + &o.0, &self.1 + &o.1)
    }

    pub fn contains_zero(&self) -> bool {
        !self.0.is_positive() && !self.1.is_negative()
    }

    pub fn intersects(&self, o: &Iv) -> bool {
        self.0 <= o.1 && o.0 <= self.1
    }
}

pub fn eval_box(f: &IntPoly, point: &[Iv]) -> Iv {
    let mut acc = Iv(Q::zero(), Q::zero());
    for (mono, c) in f.terms() {
        let mut t = Iv(qi(c), qi(c));
        for (x, &e) in point.iter().zip(mono.exps()) {
            for _ in 0..e {
                t = t.mul(x);
            }
        }
        acc = acc.add(&t);
    }
    acc
}

/// Dense bivariate polynomial of total degree `d`, coefficients in
/// `[-9, 9]`, with nonzero constant coefficients on `x^d` and `y^d`.
pub fn random_dense_bivariate<R: Rng>(rng: &mut R, d: u16) -> IntPoly {
    let mut terms = Vec::new();
    for i in 0..=d {
        for j in 0..=d - i {
            let mut c: i64 = rng.gen_range(-9..=9);
            if (i == d || j == d) && c == 0 {
                c = if rng.gen_bool(0.5) { 1 } else { -1 } * rng.gen_range(1..=9);
            }
            terms.push((Monomial::new(vec![i, j]), BigInt::from(c)));
        }
    }
    IntPoly::from_terms(2, terms)
}

// ---- matrices over Z/pZ ----

/// Minimal polynomial of the `d x d` matrix with the given columns: the
/// first linear dependency among `I, M, M^2, ...` found by elimination on
/// the flattened powers. Monic, constant term first.
pub fn matrix_minimal_polynomial(p: Prime, columns: &[Vec<u64>]) -> Vec<u64> {
    let d = columns.len();
    let mul = |a: &[Vec<u64>], b: &[Vec<u64>]| -> Vec<Vec<u64>> {
        // columns of a * b
        (0..d)
            .map(|j| {
                let mut col = vec![0u64; d];
                for (k, &bk) in b[j].iter().enumerate() {
                    if bk != 0 {
                        for i in 0..d {
                            col[i] = p.add(col[i], p.mul(a[k][i], bk));
                        }
                    }
                }
                col
            })
            .collect()
    };
    let identity: Vec<Vec<u64>> = (0..d).map(|j| (0..d).map(|i| u64::from(i == j)).collect()).collect();
    let mut basis: Vec<(Vec<u64>, Vec<u64>, usize)> = Vec::new();
    let mut power = identity;
    for k in 0..=d {
        let mut v: Vec<u64> = power.iter().flatten().copied().collect();
        let mut combo = vec![0u64; k + 1];
        combo[k] = 1;
        for (row, bcombo, piv) in &basis {
            let f = v[*piv];
            if f != 0 {
                for (x, y) in v.iter_mut().zip(row) {
                    *x = p.sub(*x, p.mul(f, *y));
                }
                for (x, y) in combo.iter_mut().zip(bcombo) {
                    *x = p.sub(*x, p.mul(f, *y));
                }
            }
        }
        match v.iter().position(|&x| x != 0) {
            None => return combo,
            Some(piv) => {
                let inv = p.inv(v[piv]).unwrap();
                let row = v.iter().map(|&x| p.mul(x, inv)).collect();
                let bcombo: Vec<u64> = combo.iter().map(|&x| p.mul(x, inv)).collect();
                basis.push((row, bcombo, piv));
            }
        }
        power = mul(columns, &power);
    }
    unreachable!("Cayley-Hamilton bounds the degree by d")
}
