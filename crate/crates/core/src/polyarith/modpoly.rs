use std::collections::BTreeMap;

use super::monomial::{Monomial, MonomialOrder};
use super::prime::Prime;

/// Sparse distributed polynomial over `Z/pZ`, terms strictly descending in
/// grevlex, no zero coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModPoly {
    terms: Vec<(Monomial, u64)>,
    prime: Prime,
    nvars: usize,
}

impl ModPoly {
    pub fn zero(nvars: usize, prime: Prime) -> ModPoly {
        ModPoly {
            terms: Vec::new(),
            prime,
            nvars,
        }
    }

    pub fn constant(nvars: usize, prime: Prime, c: u64) -> ModPoly {
        ModPoly::from_terms(nvars, prime, vec![(Monomial::one(nvars), c)])
    }

    pub fn var(nvars: usize, prime: Prime, i: usize) -> ModPoly {
        ModPoly::from_terms(nvars, prime, vec![(Monomial::var(nvars, i), 1)])
    }

    /// Builds a polynomial from unsorted terms, combining duplicates.
    pub fn from_terms(nvars: usize, prime: Prime, terms: Vec<(Monomial, u64)>) -> ModPoly {
        let mut acc: BTreeMap<Monomial, u64> = BTreeMap::new();
        for (m, c) in terms {
            debug_assert_eq!(m.nvars(), nvars);
            let e = acc.entry(m).or_insert(0);
            *e = prime.add(*e, c % prime.get());
        }
        ModPoly::from_map(nvars, prime, acc)
    }

    fn from_map(nvars: usize, prime: Prime, acc: BTreeMap<Monomial, u64>) -> ModPoly {
        ModPoly {
            terms: acc.into_iter().rev().filter(|(_, c)| *c != 0).collect(),
            prime,
            nvars,
        }
    }

    /// Terms already sorted descending with nonzero coefficients.
    pub(crate) fn from_sorted(nvars: usize, prime: Prime, terms: Vec<(Monomial, u64)>) -> ModPoly {
        debug_assert!(terms.windows(2).all(|w| w[0].0 > w[1].0));
        debug_assert!(terms.iter().all(|t| t.1 != 0));
        ModPoly { terms, prime, nvars }
    }

    pub fn terms(&self) -> &[(Monomial, u64)] {
        &self.terms
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn order(&self) -> MonomialOrder {
        MonomialOrder::Grevlex
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.first().map(|t| &t.0)
    }

    pub fn leading_coeff(&self) -> u64 {
        self.terms.first().map_or(0, |t| t.1)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.iter().map(|t| t.0.degree()).max().unwrap_or(0)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one()
    }

    pub fn scale(&self, c: u64) -> ModPoly {
        let c = c % self.prime.get();
        if c == 0 {
            return ModPoly::zero(self.nvars, self.prime);
        }
        let p = self.prime;
        ModPoly {
            terms: self.terms.iter().map(|(m, a)| (m.clone(), p.mul(*a, c))).collect(),
            prime: p,
            nvars: self.nvars,
        }
    }

    pub fn monic(&self) -> ModPoly {
        match self.prime.inv(self.leading_coeff()) {
            Some(inv) => self.scale(inv),
            None => self.clone(),
        }
    }

    pub fn mul_term(&self, m: &Monomial, c: u64) -> ModPoly {
        let p = self.prime;
        let c = c % p.get();
        if c == 0 {
            return ModPoly::zero(self.nvars, p);
        }
        ModPoly {
            terms: self.terms.iter().map(|(t, a)| (t.mul(m), p.mul(*a, c))).collect(),
            prime: p,
            nvars: self.nvars,
        }
    }

    pub fn add(&self, other: &ModPoly) -> ModPoly {
        self.combine(other, false)
    }

    pub fn sub(&self, other: &ModPoly) -> ModPoly {
        self.combine(other, true)
    }

    fn combine(&self, other: &ModPoly, negate: bool) -> ModPoly {
        let p = self.prime;
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let fix = |c: u64| if negate { p.neg(c) } else { c };
        while i < self.terms.len() && j < other.terms.len() {
            let (a, b) = (&self.terms[i], &other.terms[j]);
            match a.0.cmp(&b.0) {
                std::cmp::Ordering::Greater => {
                    out.push(a.clone());
                    i += 1;
                }
                std::cmp::Ordering::Less => {
                    out.push((b.0.clone(), fix(b.1)));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = p.add(a.1, fix(b.1));
                    if c != 0 {
                        out.push((a.0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(self.terms[i..].iter().cloned());
        out.extend(other.terms[j..].iter().map(|(m, c)| (m.clone(), fix(*c))));
        ModPoly {
            terms: out,
            prime: p,
            nvars: self.nvars,
        }
    }

    pub fn mul(&self, other: &ModPoly) -> ModPoly {
        let p = self.prime;
        let mut acc: BTreeMap<Monomial, u64> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let e = acc.entry(ma.mul(mb)).or_insert(0);
                *e = p.add(*e, p.mul(*ca, *cb));
            }
        }
        ModPoly::from_map(self.nvars, p, acc)
    }

    /// Drops the leading term.
    pub fn tail(&self) -> ModPoly {
        ModPoly {
            terms: self.terms.iter().skip(1).cloned().collect(),
            prime: self.prime,
            nvars: self.nvars,
        }
    }
}

/// Full reduction of `f` by the list `g` (multivariate division).
///
/// The result has no term divisible by any leading monomial of `g`, and
/// `f - result` lies in the ideal generated by `g`.
pub fn normal_form(f: &ModPoly, g: &[ModPoly]) -> ModPoly {
    let refs: Vec<&ModPoly> = g.iter().collect();
    normal_form_refs(f, &refs)
}

pub(crate) fn normal_form_refs(f: &ModPoly, g: &[&ModPoly]) -> ModPoly {
    let p = f.prime;
    let divisors: Vec<(&Monomial, u64, &ModPoly)> = g
        .iter()
        .copied()
        .filter(|gi| !gi.is_zero())
        .map(|gi| {
            let inv = p.inv(gi.leading_coeff()).expect("nonzero leading coefficient");
            (gi.leading_monomial().unwrap(), inv, gi)
        })
        .collect();
    let mut work: BTreeMap<Monomial, u64> = f.terms.iter().cloned().collect();
    let mut out = Vec::new();
    while let Some((m, c)) = work.pop_last() {
        match divisors.iter().find(|(lm, _, _)| lm.divides(&m)) {
            Some((lm, inv, gi)) => {
                let q = m.div(lm);
                let factor = p.mul(c, *inv);
                for (tm, tc) in &gi.terms[1..] {
                    let key = tm.mul(&q);
                    let delta = p.mul(factor, *tc);
                    match work.entry(key) {
                        std::collections::btree_map::Entry::Occupied(mut o) => {
                            let v = p.sub(*o.get(), delta);
                            if v == 0 {
                                o.remove();
                            } else {
                                *o.get_mut() = v;
                            }
                        }
                        std::collections::btree_map::Entry::Vacant(v) => {
                            v.insert(p.neg(delta));
                        }
                    }
                }
            }
            None => out.push((m, c)),
        }
    }
    ModPoly::from_sorted(f.nvars, p, out)
}
