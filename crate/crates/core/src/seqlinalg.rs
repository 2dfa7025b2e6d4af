//! Krylov scalar sequences, Berlekamp–Massey, and Hankel systems over `Z/pZ`.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Result, RurError};
use crate::polyarith::{Prime, UniModPoly};
use crate::quotient::MultMatrix;

/// `s_k = <(M^T)^k v, target>` for one target vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScalarSequence {
    s: Vec<u64>,
    generator_vector: Arc<Vec<u64>>,
    prime: Prime,
}

impl ScalarSequence {
    pub fn new(prime: Prime, s: Vec<u64>, generator_vector: Arc<Vec<u64>>) -> ScalarSequence {
        ScalarSequence {
            s,
            generator_vector,
            prime,
        }
    }

    pub fn values(&self) -> &[u64] {
        &self.s
    }

    pub fn generator_vector(&self) -> &[u64] {
        &self.generator_vector
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn len(&self) -> usize {
        self.s.len()
    }

    pub fn is_empty(&self) -> bool {
        self.s.is_empty()
    }
}

/// One pass of `w <- M^T w` starting at `v`, dotted against every target.
pub fn krylov_sequences(m: &MultMatrix, v: &[u64], targets: &[Vec<u64>], count: usize) -> Vec<ScalarSequence> {
    let p = m.prime();
    assert_eq!(v.len(), m.dim());
    assert!(targets.iter().all(|t| t.len() == m.dim()));
    let mut out = vec![Vec::with_capacity(count); targets.len()];
    let mut w = v.to_vec();
    for k in 0..count {
        for (seq, t) in out.iter_mut().zip(targets) {
            seq.push(p.dot(&w, t));
        }
        if k + 1 < count {
            w = m.apply_transpose(&w);
        }
    }
    let shared = Arc::new(v.to_vec());
    out.into_iter()
        .map(|s| ScalarSequence::new(p, s, Arc::clone(&shared)))
        .collect()
}

pub fn berlekamp_massey(s: &ScalarSequence) -> UniModPoly {
    berlekamp_massey_slice(s.prime, &s.s)
}

/// Monic minimal polynomial `c` of the linear recurrence of `s`:
/// `sum_i c_i s_{k+i} = 0` for every `k` with `k + deg c < s.len()`.
pub fn berlekamp_massey_slice(p: Prime, s: &[u64]) -> UniModPoly {
    let mut c = vec![1u64];
    let mut b = vec![1u64];
    let mut l = 0usize;
    let mut shift = 1usize;
    let mut last = 1u64;
    for n in 0..s.len() {
        let mut disc = s[n];
        for i in 1..=l.min(c.len() - 1) {
            disc = p.add(disc, p.mul(c[i], s[n - i]));
        }
        if disc == 0 {
            shift += 1;
            continue;
        }
        let coef = p.mul(disc, p.inv(last).expect("nonzero discrepancy"));
        let prev = c.clone();
        if c.len() < b.len() + shift {
            c.resize(b.len() + shift, 0);
        }
        for (i, &bi) in b.iter().enumerate() {
            c[i + shift] = p.sub(c[i + shift], p.mul(coef, bi));
        }
        if 2 * l <= n {
            l = n + 1 - l;
            b = prev;
            last = disc;
            shift = 1;
        } else {
            shift += 1;
        }
    }
    c.resize(l + 1, 0);
    let rev: Vec<u64> = c.into_iter().rev().collect();
    let out = UniModPoly::new(p, rev);
    assert!(annihilates(&out, s), "Berlekamp-Massey output does not annihilate the sequence");
    out
}

/// Whether `c` (of degree `L`) satisfies `sum_i c_i s_{k+i} = 0` on all of `s`.
pub fn annihilates(c: &UniModPoly, s: &[u64]) -> bool {
    let p = c.prime();
    let cs = c.coeffs();
    let deg = cs.len().saturating_sub(1);
    (0..s.len().saturating_sub(deg)).all(|k| p.dot(cs, &s[k..k + cs.len()]) == 0)
}

/// Square Hankel system `H[j][k] = s_{j+k}`, `0 <= j, k < d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HankelSystem {
    s: Vec<u64>,
    dim: usize,
    prime: Prime,
}

impl HankelSystem {
    pub fn new(prime: Prime, s: Vec<u64>, dim: usize) -> Result<HankelSystem> {
        if dim == 0 || s.len() + 1 < 2 * dim {
            return Err(RurError::Usage(format!(
                "Hankel system of dimension {dim} needs {} sequence terms, got {}",
                2 * dim.max(1) - 1,
                s.len()
            )));
        }
        Ok(HankelSystem { s, dim, prime })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn sequence(&self) -> &[u64] {
        &self.s
    }

    pub fn entry(&self, j: usize, k: usize) -> u64 {
        self.s[j + k]
    }

    /// `H x`.
    pub fn mul_vec(&self, x: &[u64]) -> Vec<u64> {
        (0..self.dim)
            .map(|j| self.prime.dot(&self.s[j..j + self.dim], x))
            .collect()
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HankelMethod {
    /// Dense LU factorization, cubic.
    #[default]
    Gauss,
    /// Inversion through the Horner basis of the minimal polynomial, quadratic.
    Bezoutian,
}

/// Factored Hankel matrix, reusable across right-hand sides.
#[derive(Clone, Debug)]
pub enum HankelSolver {
    Gauss(Lu),
    Bezoutian(BezoutianInverse),
}

impl HankelSolver {
    /// `min_poly`, when given, must be the monic degree-`d` recurrence of the
    /// sequence; otherwise the Bezoutian path recomputes it.
    pub fn new(sys: &HankelSystem, method: HankelMethod, min_poly: Option<&UniModPoly>) -> Result<HankelSolver> {
        match method {
            HankelMethod::Gauss => Ok(HankelSolver::Gauss(Lu::factor(sys)?)),
            HankelMethod::Bezoutian => Ok(HankelSolver::Bezoutian(BezoutianInverse::new(sys, min_poly)?)),
        }
    }

    pub fn solve(&self, rhs: &[u64]) -> Vec<u64> {
        match self {
            HankelSolver::Gauss(lu) => lu.solve(rhs),
            HankelSolver::Bezoutian(b) => b.solve(rhs),
        }
    }
}

/// Solves `H x = rhs` by Gaussian elimination.
pub fn hankel_solve(sys: &HankelSystem, rhs: &[u64]) -> Result<Vec<u64>> {
    if rhs.len() != sys.dim {
        return Err(RurError::Usage("right-hand side length differs from the dimension".into()));
    }
    Ok(Lu::factor(sys)?.solve(rhs))
}

/// Solves `H x = rhs` through the Bezoutian of the sequence's minimal polynomial.
pub fn hankel_solve_bezoutian(sys: &HankelSystem, rhs: &[u64]) -> Result<Vec<u64>> {
    if rhs.len() != sys.dim {
        return Err(RurError::Usage("right-hand side length differs from the dimension".into()));
    }
    Ok(BezoutianInverse::new(sys, None)?.solve(rhs))
}

/// `P A = L U` with row pivoting, packed in one matrix.
#[derive(Clone, Debug)]
pub struct Lu {
    lu: Vec<Vec<u64>>,
    perm: Vec<usize>,
    prime: Prime,
}

impl Lu {
    fn factor(sys: &HankelSystem) -> Result<Lu> {
        let d = sys.dim;
        let p = sys.prime;
        let mut a: Vec<Vec<u64>> = (0..d).map(|j| sys.s[j..j + d].to_vec()).collect();
        let mut perm: Vec<usize> = (0..d).collect();
        for col in 0..d {
            let piv = (col..d).find(|&r| a[r][col] != 0).ok_or(RurError::SingularHankel)?;
            a.swap(col, piv);
            perm.swap(col, piv);
            let inv = p.inv(a[col][col]).expect("nonzero pivot");
            let (top, rest) = a.split_at_mut(col + 1);
            let pivot_row = &top[col];
            for row in rest.iter_mut() {
                if row[col] == 0 {
                    continue;
                }
                let f = p.mul(row[col], inv);
                row[col] = f;
                for k in col + 1..d {
                    row[k] = p.sub(row[k], p.mul(f, pivot_row[k]));
                }
            }
        }
        Ok(Lu { lu: a, perm, prime: p })
    }

    fn solve(&self, rhs: &[u64]) -> Vec<u64> {
        let p = self.prime;
        let d = self.lu.len();
        let mut y: Vec<u64> = self.perm.iter().map(|&i| rhs[i]).collect();
        for i in 0..d {
            let s = p.dot(&self.lu[i][..i], &y[..i]);
            y[i] = p.sub(y[i], s);
        }
        for i in (0..d).rev() {
            let s = p.dot(&self.lu[i][i + 1..], &y[i + 1..]);
            y[i] = p.mul(p.sub(y[i], s), p.inv(self.lu[i][i]).expect("nonzero pivot"));
        }
        y
    }
}

/// With `m` monic of degree `d` and Horner polynomials
/// `h_j = sum_{k>j} m_k z^{k-j-1}`, the functional defined by `s` equals
/// `f -> coeff_{d-1}(R f mod m)` for `R = sum_j s_j h_j`. The solution of
/// `H x = rhs` is `X = R^{-1} (sum_j rhs_j h_j) mod m`.
#[derive(Clone, Debug)]
pub struct BezoutianInverse {
    m: UniModPoly,
    r_inv: UniModPoly,
}

impl BezoutianInverse {
    fn new(sys: &HankelSystem, min_poly: Option<&UniModPoly>) -> Result<BezoutianInverse> {
        let d = sys.dim;
        let p = sys.prime;
        let m = match min_poly {
            Some(m) => m.clone(),
            None => {
                let mut s = sys.s.clone();
                if s.len() < 2 * d {
                    // any continuation works: H is nonsingular iff the padded
                    // sequence has linear complexity d
                    s.push(0);
                }
                berlekamp_massey_slice(p, &s[..2 * d])
            }
        };
        if m.degree() != Some(d) || m.leading_coeff() != 1 {
            return Err(RurError::SingularHankel);
        }
        let r = horner_combination(&m, &sys.s[..d]);
        let r_inv = r.inv_mod(&m).ok_or(RurError::SingularHankel)?;
        Ok(BezoutianInverse { m, r_inv })
    }

    fn solve(&self, rhs: &[u64]) -> Vec<u64> {
        let d = self.m.degree().unwrap();
        let y = horner_combination(&self.m, rhs);
        let x = self.r_inv.mul_mod(&y, &self.m).expect("nonzero modulus");
        (0..d).map(|i| x.coeff(i)).collect()
    }
}

/// `sum_j c_j h_j`; the coefficient of `z^e` is `sum_j c_j m_{e+j+1}`.
fn horner_combination(m: &UniModPoly, c: &[u64]) -> UniModPoly {
    let p = m.prime();
    let d = m.degree().unwrap();
    let mc = m.coeffs();
    let out = (0..d)
        .map(|e| {
            let hi = d - e;
            p.dot(&c[..hi], &mc[e + 1..e + 1 + hi])
        })
        .collect();
    UniModPoly::new(p, out)
}
