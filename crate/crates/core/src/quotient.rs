//! Monomial basis of the quotient ring and multiplication matrices.

use std::collections::HashMap;
use std::sync::atomic::{AtomicUsize, Ordering};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Result, RurError};
use crate::gbasis::GroebnerBasisModP;
use crate::polyarith::{ModPoly, Monomial, Prime};

/// Above this many multi-basis points the staircase is walked instead.
const ENUMERATION_LIMIT: u128 = 1 << 24;

/// Largest admissible `|lambda_i|` of a separating form.
pub const SEPFORM_COEFF_CAP: i64 = 1 << 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientBasis {
    monomials: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
    degree_bounds: Vec<u16>,
    bound_product: u128,
}

impl QuotientBasis {
    /// Basis monomials in ascending grevlex order; index 0 is `1`.
    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    pub fn dim(&self) -> usize {
        self.monomials.len()
    }

    /// Exponent `d_i` of the pure power of `x_i` among the leading monomials.
    pub fn degree_bounds(&self) -> &[u16] {
        &self.degree_bounds
    }

    /// `D = prod d_i`, saturating.
    pub fn bound_product(&self) -> u128 {
        self.bound_product
    }

    pub fn index_of(&self, m: &Monomial) -> Option<usize> {
        self.index.get(m).copied()
    }

    /// Coordinate vector of a polynomial supported on the basis.
    ///
    /// Panics if a term lies outside the basis, i.e. `f` is not reduced.
    pub fn coords(&self, f: &ModPoly) -> Vec<u64> {
        let mut v = vec![0u64; self.dim()];
        for (m, c) in f.terms() {
            let i = self.index_of(m).expect("polynomial is reduced modulo the basis");
            v[i] = *c;
        }
        v
    }
}

/// A linear form `t = sum lambda_i x_i` with small integer coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SepForm {
    lambda: Vec<i64>,
}

impl SepForm {
    pub fn new(lambda: Vec<i64>) -> Result<SepForm> {
        if lambda.iter().all(|&l| l == 0) {
            return Err(RurError::Usage("separating form is identically zero".into()));
        }
        if lambda.iter().any(|l| l.abs() > SEPFORM_COEFF_CAP) {
            return Err(RurError::Usage(format!("separating form coefficient exceeds {SEPFORM_COEFF_CAP}")));
        }
        Ok(SepForm { lambda })
    }

    /// The coordinate form `x_i`.
    pub fn variable(nvars: usize, i: usize) -> SepForm {
        let mut lambda = vec![0; nvars];
        lambda[i] = 1;
        SepForm { lambda }
    }

    pub fn lambda(&self) -> &[i64] {
        &self.lambda
    }

    pub fn nvars(&self) -> usize {
        self.lambda.len()
    }

    /// `Some(i)` when the form is exactly `x_i`.
    pub fn as_variable(&self) -> Option<usize> {
        let nz: Vec<usize> = (0..self.lambda.len()).filter(|&i| self.lambda[i] != 0).collect();
        match nz.as_slice() {
            [i] if self.lambda[*i] == 1 => Some(*i),
            _ => None,
        }
    }

    /// The form as a polynomial over `Z/pZ`.
    pub fn to_modpoly(&self, p: Prime) -> ModPoly {
        let n = self.nvars();
        let terms = (0..n)
            .filter(|&i| self.lambda[i] != 0)
            .map(|i| (Monomial::var(n, i), p.from_i64(self.lambda[i])))
            .collect();
        ModPoly::from_terms(n, p, terms)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Column {
    /// The image is the basis monomial with this index.
    Unit(usize),
    Dense(Vec<u64>),
}

/// Matrix of multiplication by a linear form on the quotient ring, stored
/// column by column.
#[derive(Debug)]
pub struct MultMatrix {
    dim: usize,
    prime: Prime,
    columns: Vec<Column>,
    transpose_applications: AtomicUsize,
}

impl MultMatrix {
    pub fn from_columns(prime: Prime, columns: Vec<Column>) -> MultMatrix {
        let dim = columns.len();
        debug_assert!(columns.iter().all(|c| match c {
            Column::Unit(i) => *i < dim,
            Column::Dense(v) => v.len() == dim,
        }));
        MultMatrix {
            dim,
            prime,
            columns,
            transpose_applications: AtomicUsize::new(0),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn columns(&self) -> &[Column] {
        &self.columns
    }

    pub fn dense_column_count(&self) -> usize {
        self.columns.iter().filter(|c| matches!(c, Column::Dense(_))).count()
    }

    /// Column `j` as a dense vector.
    pub fn column(&self, j: usize) -> Vec<u64> {
        match &self.columns[j] {
            Column::Unit(i) => {
                let mut v = vec![0; self.dim];
                v[*i] = 1;
                v
            }
            Column::Dense(v) => v.clone(),
        }
    }

    /// `M u`.
    pub fn apply(&self, u: &[u64]) -> Vec<u64> {
        let p = self.prime;
        let mut out = vec![0u64; self.dim];
        for (j, col) in self.columns.iter().enumerate() {
            if u[j] == 0 {
                continue;
            }
            match col {
                Column::Unit(i) => out[*i] = p.add(out[*i], u[j]),
                Column::Dense(c) => {
                    for (o, &x) in out.iter_mut().zip(c) {
                        *o = p.add(*o, p.mul(x, u[j]));
                    }
                }
            }
        }
        out
    }

    /// `M^T w`: entry `j` is the dot product of column `j` with `w`.
    pub fn apply_transpose(&self, w: &[u64]) -> Vec<u64> {
        self.transpose_applications.fetch_add(1, Ordering::Relaxed);
        self.columns
            .iter()
            .map(|c| match c {
                Column::Unit(i) => w[*i],
                Column::Dense(v) => self.prime.dot(v, w),
            })
            .collect()
    }

    /// Number of `apply_transpose` calls so far.
    pub fn transpose_applications(&self) -> usize {
        self.transpose_applications.load(Ordering::Relaxed)
    }
}

fn leading_monomials(gb: &GroebnerBasisModP) -> Vec<Monomial> {
    gb.polys().iter().map(|g| g.leading_monomial().unwrap().clone()).collect()
}

fn reducible(m: &Monomial, lms: &[Monomial]) -> bool {
    lms.iter().any(|l| l.divides(m))
}

pub fn quotient_basis(gb: &GroebnerBasisModP) -> Result<QuotientBasis> {
    let n = gb.nvars();
    let lms = leading_monomials(gb);
    let mut bounds = vec![0u16; n];
    for lm in &lms {
        if let Some((i, e)) = lm.pure_power() {
            if bounds[i] == 0 || e < bounds[i] {
                bounds[i] = e;
            }
        }
    }
    if bounds.iter().any(|&b| b == 0) {
        return Err(RurError::NotZeroDimensional);
    }
    let product = bounds
        .iter()
        .fold(1u128, |acc, &b| acc.saturating_mul(b as u128));
    let mut monomials = if product <= ENUMERATION_LIMIT {
        enumerate_multibasis(&bounds, &lms)
    } else {
        walk_staircase(n, &lms)
    };
    monomials.sort();
    let index = monomials.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
    Ok(QuotientBasis {
        monomials,
        index,
        degree_bounds: bounds,
        bound_product: product,
    })
}

/// Decodes every `0 <= i < D` in the mixed radix `(d_1, ..., d_n)`.
fn enumerate_multibasis(bounds: &[u16], lms: &[Monomial]) -> Vec<Monomial> {
    let total: u64 = bounds.iter().map(|&b| b as u64).product();
    let mut out = Vec::new();
    let mut exps = vec![0u16; bounds.len()];
    for i in 0..total {
        let mut r = i;
        for (k, &b) in bounds.iter().enumerate().rev() {
            exps[k] = (r % b as u64) as u16;
            r /= b as u64;
        }
        let m = Monomial::new(exps.clone());
        if !reducible(&m, lms) {
            out.push(m);
        }
    }
    out
}

/// Grows the staircase from `1` by multiplying with variables.
fn walk_staircase(n: usize, lms: &[Monomial]) -> Vec<Monomial> {
    let mut seen = std::collections::HashSet::new();
    let mut stack = vec![Monomial::one(n)];
    seen.insert(Monomial::one(n));
    let mut out = Vec::new();
    while let Some(m) = stack.pop() {
        for i in 0..n {
            let next = m.mul_var(i);
            if !reducible(&next, lms) && seen.insert(next.clone()) {
                stack.push(next);
            }
        }
        out.push(m);
    }
    out
}

/// Columns of multiplication by `x_i`.
fn variable_columns(gb: &GroebnerBasisModP, basis: &QuotientBasis, i: usize) -> Vec<Column> {
    let p = gb.prime();
    basis
        .monomials()
        .par_iter()
        .map(|b| {
            let prod = b.mul_var(i);
            if let Some(k) = basis.index_of(&prod) {
                return Column::Unit(k);
            }
            if let Some(g) = gb.with_leading_monomial(&prod) {
                let mut v = vec![0u64; basis.dim()];
                for (m, c) in &g.terms()[1..] {
                    v[basis.index_of(m).expect("reduced tail")] = p.neg(*c);
                }
                return Column::Dense(v);
            }
            let f = ModPoly::from_terms(gb.nvars(), p, vec![(prod, 1)]);
            Column::Dense(basis.coords(&gb.normal_form(&f)))
        })
        .collect()
}

pub fn mult_matrix(gb: &GroebnerBasisModP, basis: &QuotientBasis, form: &SepForm) -> MultMatrix {
    let p = gb.prime();
    if let Some(i) = form.as_variable() {
        return MultMatrix::from_columns(p, variable_columns(gb, basis, i));
    }
    let d = basis.dim();
    let mut dense = vec![vec![0u64; d]; d];
    for (i, &l) in form.lambda().iter().enumerate() {
        if l == 0 {
            continue;
        }
        let li = p.from_i64(l);
        for (j, col) in variable_columns(gb, basis, i).into_iter().enumerate() {
            match col {
                Column::Unit(k) => dense[j][k] = p.add(dense[j][k], li),
                Column::Dense(v) => {
                    for (o, x) in dense[j].iter_mut().zip(v) {
                        *o = p.add(*o, p.mul(li, x));
                    }
                }
            }
        }
    }
    MultMatrix::from_columns(p, dense.into_iter().map(Column::Dense).collect())
}
