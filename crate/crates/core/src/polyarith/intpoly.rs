use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::modpoly::ModPoly;
use super::monomial::Monomial;
use super::prime::Prime;

/// Sparse distributed polynomial with integer coefficients, terms descending
/// in grevlex. Content is not normalized.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntPoly {
    terms: Vec<(Monomial, BigInt)>,
    nvars: usize,
}

impl IntPoly {
    pub fn zero(nvars: usize) -> IntPoly {
        IntPoly {
            terms: Vec::new(),
            nvars,
        }
    }

    pub fn from_terms(nvars: usize, terms: Vec<(Monomial, BigInt)>) -> IntPoly {
        let mut acc: BTreeMap<Monomial, BigInt> = BTreeMap::new();
        for (m, c) in terms {
            debug_assert_eq!(m.nvars(), nvars);
            *acc.entry(m).or_insert_with(BigInt::zero) += c;
        }
        IntPoly {
            terms: acc.into_iter().rev().filter(|(_, c)| !c.is_zero()).collect(),
            nvars,
        }
    }

    pub fn terms(&self) -> &[(Monomial, BigInt)] {
        &self.terms
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of monomials.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.iter().map(|t| t.0.degree()).max().unwrap_or(0)
    }

    pub fn leading_coeff(&self) -> Option<&BigInt> {
        self.terms.first().map(|t| &t.1)
    }

    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.first().map(|t| &t.0)
    }

    pub fn reduce_mod(&self, p: Prime) -> ModPoly {
        ModPoly::from_terms(
            self.nvars,
            p,
            self.terms.iter().map(|(m, c)| (m.clone(), p.from_bigint(c))).collect(),
        )
    }

    pub fn mul(&self, other: &IntPoly) -> IntPoly {
        let mut terms = Vec::with_capacity(self.len() * other.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                terms.push((ma.mul(mb), ca * cb));
            }
        }
        IntPoly::from_terms(self.nvars, terms)
    }

    /// Evaluates at a floating-point point; used only for diagnostics.
    pub fn eval_f64(&self, point: &[f64]) -> f64 {
        use num_traits::ToPrimitive;
        self.terms
            .iter()
            .map(|(m, c)| {
                let mut v = c.to_f64().unwrap_or(f64::NAN);
                for (e, x) in m.exps().iter().zip(point) {
                    v *= x.powi(*e as i32);
                }
                v
            })
            .sum()
    }

    /// Renders with the given variable names in the input grammar.
    pub fn display_with(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if k == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            if m.is_one() {
                s.push_str(&abs.to_string());
            } else if abs.is_one() {
                s.push_str(&m.display_with(names));
            } else {
                s.push_str(&format!("{}*{}", abs, m.display_with(names)));
            }
        }
        s
    }
}
