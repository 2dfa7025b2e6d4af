//! Reduced grevlex Gröbner bases over `Z/pZ`.
//!
//! Buchberger's algorithm with the normal selection strategy on sugar
//! degree and the Gebauer–Möller pair criteria. A run records every critical
//! pair whose S-polynomial reduced to zero, keyed by the leading monomials
//! of the two basis elements; later primes skip those pairs.

use std::collections::HashSet;

use crate::error::{Result, RurError};
use crate::polyarith::{normal_form_refs, ModPoly, Monomial, Prime};

/// Sorted (ascending) set of leading monomials of a reduced basis.
pub type Signature = Vec<Monomial>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroebnerBasisModP {
    polys: Vec<ModPoly>,
    prime: Prime,
    nvars: usize,
}

impl GroebnerBasisModP {
    /// Monic, inter-reduced elements sorted by ascending leading monomial.
    pub fn polys(&self) -> &[ModPoly] {
        &self.polys
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    pub fn signature(&self) -> Signature {
        self.polys.iter().map(|g| g.leading_monomial().unwrap().clone()).collect()
    }

    /// Element whose leading monomial is exactly `m`.
    pub fn with_leading_monomial(&self, m: &Monomial) -> Option<&ModPoly> {
        self.polys
            .binary_search_by(|g| g.leading_monomial().unwrap().cmp(m))
            .ok()
            .map(|i| &self.polys[i])
    }

    pub fn normal_form(&self, f: &ModPoly) -> ModPoly {
        let refs: Vec<&ModPoly> = self.polys.iter().collect();
        normal_form_refs(f, &refs)
    }
}

/// Pairs known to reduce to zero, learned on a completed run.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LearnedHints {
    zero_pairs: HashSet<(Monomial, Monomial)>,
    signature: Signature,
}

impl LearnedHints {
    pub fn zero_pairs(&self) -> usize {
        self.zero_pairs.len()
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    fn contains(&self, a: &Monomial, b: &Monomial) -> bool {
        self.zero_pairs.contains(&pair_key(a, b))
    }
}

fn pair_key(a: &Monomial, b: &Monomial) -> (Monomial, Monomial) {
    if a <= b {
        (a.clone(), b.clone())
    } else {
        (b.clone(), a.clone())
    }
}

pub fn signatures_compatible(a: &[Monomial], b: &[Monomial]) -> bool {
    let sa: HashSet<&Monomial> = a.iter().collect();
    let sb: HashSet<&Monomial> = b.iter().collect();
    sa == sb
}

struct Element {
    poly: ModPoly,
    sugar: u32,
    redundant: bool,
}

impl Element {
    fn lm(&self) -> &Monomial {
        self.poly.leading_monomial().unwrap()
    }
}

#[derive(Clone, Debug)]
struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
    sugar: u32,
}

impl Pair {
    fn key(&self) -> (u32, &Monomial, usize, usize) {
        (self.sugar, &self.lcm, self.i, self.j)
    }
}

struct Engine<'h> {
    basis: Vec<Element>,
    pairs: Vec<Pair>,
    hints: Option<&'h LearnedHints>,
    learned: HashSet<(Monomial, Monomial)>,
    prime: Prime,
    nvars: usize,
}

impl Engine<'_> {
    fn active(&self) -> Vec<&ModPoly> {
        self.basis.iter().filter(|e| !e.redundant).map(|e| &e.poly).collect()
    }

    fn make_pair(&self, i: usize, j: usize) -> Pair {
        let (ei, ej) = (&self.basis[i], &self.basis[j]);
        let lcm = ei.lm().lcm(ej.lm());
        let sugar = (ei.sugar + lcm.degree() - ei.lm().degree()).max(ej.sugar + lcm.degree() - ej.lm().degree());
        Pair { i, j, lcm, sugar }
    }

    /// Gebauer–Möller update for a new element `h` (already pushed).
    fn update(&mut self, h: usize) {
        let lm_h = self.basis[h].lm().clone();
        let candidates: Vec<Pair> = (0..h)
            .filter(|&g| !self.basis[g].redundant)
            .map(|g| self.make_pair(g, h))
            .collect();

        // a new pair survives if its leading monomials are coprime or no
        // other new pair (pending or kept) has an lcm dividing its own;
        // coprime pairs are kept here so they shadow others, then dropped
        let mut kept: Vec<Pair> = Vec::new();
        for (k, c) in candidates.iter().enumerate() {
            let coprime = self.basis[c.i].lm().is_coprime(&lm_h);
            let shadowed = candidates[k + 1..].iter().chain(kept.iter()).any(|o| o.lcm.divides(&c.lcm));
            if coprime || !shadowed {
                kept.push(c.clone());
            }
        }
        let fresh: Vec<Pair> = kept
            .into_iter()
            .filter(|c| !self.basis[c.i].lm().is_coprime(&lm_h))
            .collect();

        let basis = &self.basis;
        self.pairs.retain(|pr| {
            if !lm_h.divides(&pr.lcm) {
                return true;
            }
            let li = basis[pr.i].lm().lcm(&lm_h);
            let lj = basis[pr.j].lm().lcm(&lm_h);
            li == pr.lcm || lj == pr.lcm
        });
        self.pairs.extend(fresh);

        for k in 0..h {
            if !self.basis[k].redundant && lm_h.divides(self.basis[k].lm()) {
                self.basis[k].redundant = true;
            }
        }
    }

    fn insert(&mut self, poly: ModPoly, sugar: u32) -> Result<()> {
        if poly.is_constant() {
            return Err(RurError::IdealIsUnit);
        }
        self.basis.push(Element {
            poly: poly.monic(),
            sugar,
            redundant: false,
        });
        let h = self.basis.len() - 1;
        self.update(h);
        Ok(())
    }

    fn spoly(&self, pr: &Pair) -> ModPoly {
        let (f, g) = (&self.basis[pr.i].poly, &self.basis[pr.j].poly);
        let uf = pr.lcm.div(f.leading_monomial().unwrap());
        let ug = pr.lcm.div(g.leading_monomial().unwrap());
        f.mul_term(&uf, 1).sub(&g.mul_term(&ug, 1))
    }

    fn select(&mut self) -> Option<Pair> {
        let best = self
            .pairs
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.key().cmp(&b.1.key()))
            .map(|(k, _)| k)?;
        Some(self.pairs.swap_remove(best))
    }

    fn run(&mut self) -> Result<()> {
        while let Some(pr) = self.select() {
            let (lmi, lmj) = (self.basis[pr.i].lm().clone(), self.basis[pr.j].lm().clone());
            if let Some(h) = self.hints {
                if h.contains(&lmi, &lmj) {
                    self.learned.insert(pair_key(&lmi, &lmj));
                    continue;
                }
            }
            let s = self.spoly(&pr);
            let r = normal_form_refs(&s, &self.active());
            if r.is_zero() {
                self.learned.insert(pair_key(&lmi, &lmj));
            } else {
                self.insert(r, pr.sugar)?;
            }
        }
        Ok(())
    }

    fn finish(self) -> GroebnerBasisModP {
        let mut lead: Vec<ModPoly> = self.basis.into_iter().filter(|e| !e.redundant).map(|e| e.poly).collect();
        lead.sort_by(|a, b| a.leading_monomial().cmp(&b.leading_monomial()));
        // tail reduction against the other elements
        let mut reduced = Vec::with_capacity(lead.len());
        for (k, g) in lead.iter().enumerate() {
            let others: Vec<&ModPoly> = lead.iter().enumerate().filter(|(l, _)| *l != k).map(|(_, o)| o).collect();
            let lt = ModPoly::from_terms(self.nvars, self.prime, vec![g.terms()[0].clone()]);
            let tail = normal_form_refs(&g.tail(), &others);
            reduced.push(lt.add(&tail));
        }
        GroebnerBasisModP {
            polys: reduced,
            prime: self.prime,
            nvars: self.nvars,
        }
    }
}

fn run_once(gens: &[ModPoly], hints: Option<&LearnedHints>) -> Result<(GroebnerBasisModP, LearnedHints)> {
    let prime = gens[0].prime();
    let nvars = gens[0].nvars();
    let mut engine = Engine {
        basis: Vec::new(),
        pairs: Vec::new(),
        hints,
        learned: HashSet::new(),
        prime,
        nvars,
    };
    let mut ordered: Vec<&ModPoly> = gens.iter().filter(|g| !g.is_zero()).collect();
    ordered.sort_by(|a, b| a.leading_monomial().cmp(&b.leading_monomial()));
    for g in ordered {
        let r = normal_form_refs(g, &engine.active());
        if !r.is_zero() {
            let sugar = g.total_degree();
            engine.insert(r, sugar)?;
        }
    }
    if engine.basis.is_empty() {
        return Err(RurError::Usage("all generators vanish".into()));
    }
    engine.run()?;
    let learned = std::mem::take(&mut engine.learned);
    let gb = engine.finish();
    let hints = LearnedHints {
        zero_pairs: learned,
        signature: gb.signature(),
    };
    Ok((gb, hints))
}

/// Reduced monic Gröbner basis of the ideal spanned by `gens`.
///
/// With `hints`, pairs recorded as zero-reducing are skipped. When the hinted
/// run ends with a different signature than the one the hints were learned
/// on, the hints are discarded and the basis is recomputed from scratch.
pub fn buchberger_modp(
    gens: &[ModPoly],
    hints: Option<&LearnedHints>,
) -> Result<(GroebnerBasisModP, LearnedHints)> {
    let first = gens.first().ok_or_else(|| RurError::Usage("no generators".into()))?;
    if gens.iter().any(|g| g.prime() != first.prime() || g.nvars() != first.nvars()) {
        return Err(RurError::Usage("generators over different rings".into()));
    }
    match hints {
        Some(h) => {
            let out = run_once(gens, Some(h))?;
            if out.0.signature() == h.signature {
                Ok(out)
            } else {
                run_once(gens, None)
            }
        }
        None => run_once(gens, None),
    }
}

/// Pairwise S-polynomial check of the Gröbner property.
pub fn is_groebner_basis(gb: &GroebnerBasisModP) -> bool {
    let polys = gb.polys();
    for i in 0..polys.len() {
        for j in i + 1..polys.len() {
            let (f, g) = (&polys[i], &polys[j]);
            let lcm = f.leading_monomial().unwrap().lcm(g.leading_monomial().unwrap());
            let s = f
                .mul_term(&lcm.div(f.leading_monomial().unwrap()), 1)
                .sub(&g.mul_term(&lcm.div(g.leading_monomial().unwrap()), 1));
            if !gb.normal_form(&s).is_zero() {
                return false;
            }
        }
    }
    true
}
