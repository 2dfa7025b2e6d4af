use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed};

use crate::polyarith::{Prime, UniIntPoly, UniModPoly};
use crate::quotient::SepForm;
use crate::rur_modp::RurModP;

use super::crt::{farey, CrtState};

/// The parametrization over the rationals:
/// `m~(t) = 0`, `x_i = (Q~_i(t) / q_i) / (D~(t) / d~)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RurCandidate {
    pub form: SepForm,
    /// Primitive, positive leading coefficient, degree `dim`.
    pub m: UniIntPoly,
    pub q: Vec<UniIntPoly>,
    /// Positive, coprime to the content of the matching `q`.
    pub q_den: Vec<BigInt>,
    /// `D~ / d~` is the derivative of the monic rational `m`.
    pub dm: UniIntPoly,
    pub dm_den: BigInt,
    /// `N`, the number of primes folded into the reconstruction.
    pub primes: usize,
    pub dim: usize,
    pub radicalized: bool,
}

/// Outcome of checking a candidate against one prime's image.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ImageCheck {
    Matches,
    Differs,
    /// The prime divides a denominator of the candidate.
    DenominatorVanished,
}

fn clear(coeffs: &[BigRational]) -> (UniIntPoly, BigInt) {
    let den = coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let num = coeffs.iter().map(|c| c.numer() * (&den / c.denom())).collect();
    (UniIntPoly::new(num), den)
}

impl RurCandidate {
    /// Normalizes a rational parametrization given by the monic `m` and
    /// the numerators `Q_i` over `m'`.
    pub fn from_rationals(
        form: SepForm,
        m: &[BigRational],
        q: &[Vec<BigRational>],
        primes: usize,
        radicalized: bool,
    ) -> RurCandidate {
        let dim = m.len() - 1;
        let (mi, _) = clear(m);
        let m_tilde = mi.primitive_part();
        let dm_rat: Vec<BigRational> = m
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
            .collect();
        let (dm, dm_den) = clear(&dm_rat);
        let (q, q_den) = q.iter().map(|qi| clear(qi)).unzip();
        RurCandidate {
            form,
            m: m_tilde,
            q,
            q_den,
            dm,
            dm_den,
            primes,
            dim,
            radicalized,
        }
    }

    /// Compares the candidate's reduction modulo `r.prime` with `r`.
    pub fn check_image(&self, r: &RurModP) -> ImageCheck {
        let p = r.prime;
        let lc = p.from_bigint(&self.m.leading_coeff());
        if lc == 0 || self.q_den.iter().any(|q| p.from_bigint(q) == 0) {
            return ImageCheck::DenominatorVanished;
        }
        if r.form != self.form || r.dim != self.dim || r.q.len() != self.q.len() {
            return ImageCheck::Differs;
        }
        let reduce = |f: &UniIntPoly, scale: u64| {
            UniModPoly::new(p, f.coeffs().iter().map(|c| p.mul(p.from_bigint(c), scale)).collect())
        };
        if reduce(&self.m, p.inv(lc).unwrap()) != r.m {
            return ImageCheck::Differs;
        }
        for ((qi, den), ri) in self.q.iter().zip(&self.q_den).zip(&r.q) {
            if reduce(qi, p.inv(p.from_bigint(den)).unwrap()) != *ri {
                return ImageCheck::Differs;
            }
        }
        ImageCheck::Matches
    }

    /// `x_i` as the rational function `(d~ Q~_i) / (q_i D~)`.
    pub fn variable_fraction(&self, i: usize) -> (UniIntPoly, UniIntPoly) {
        (self.q[i].scale(&self.dm_den), self.dm.scale(&self.q_den[i]))
    }
}

/// Result of a reconstruction attempt.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Reconstruction {
    Candidate(RurCandidate),
    NeedMorePrimes,
    /// The fresh prime divides a reconstructed denominator.
    DenominatorVanished,
}

/// Whether `a/b` reduces to `r` modulo `p`; `None` when `p | b`.
fn agrees(x: &BigRational, r: u64, p: Prime) -> Option<bool> {
    let b = p.from_bigint(x.denom());
    if b == 0 {
        return None;
    }
    Some(p.from_bigint(x.numer()) == p.mul(r, b))
}

/// Probes four coefficients, then reconstructs and checks everything
/// against `fresh`, which must not be folded into `state` yet.
pub fn try_reconstruct(state: &CrtState, fresh: &RurModP) -> Reconstruction {
    let p = fresh.prime;
    let d = state.dim();
    let modulus = state.modulus();
    if !state.is_compatible(fresh) {
        return Reconstruction::NeedMorePrimes;
    }
    let coeff = |poly: &UniModPoly, i: usize| poly.coeff(i);
    let mut probes: Vec<(&BigInt, u64)> = vec![(&state.m_residues()[0], coeff(&fresh.m, 0))];
    if d >= 1 {
        probes.push((&state.m_residues()[d - 1], coeff(&fresh.m, d - 1)));
    }
    if let (Some(q0), Some(f0)) = (state.q_residues().first(), fresh.q.first()) {
        if d >= 1 {
            probes.push((&q0[0], coeff(f0, 0)));
            probes.push((&q0[d - 1], coeff(f0, d - 1)));
        }
    }
    for (res, r) in probes {
        match farey(res, modulus) {
            Ok(x) => match agrees(&x, r, p) {
                Some(true) => {}
                Some(false) => return Reconstruction::NeedMorePrimes,
                None => return Reconstruction::DenominatorVanished,
            },
            Err(_) => return Reconstruction::NeedMorePrimes,
        }
    }

    let lift_all = |res: &[BigInt], img: &UniModPoly| -> std::result::Result<Vec<BigRational>, Reconstruction> {
        res.iter()
            .enumerate()
            .map(|(i, c)| {
                let x = farey(c, modulus).map_err(|_| Reconstruction::NeedMorePrimes)?;
                match agrees(&x, img.coeff(i), p) {
                    Some(true) => Ok(x),
                    Some(false) => Err(Reconstruction::NeedMorePrimes),
                    None => Err(Reconstruction::DenominatorVanished),
                }
            })
            .collect()
    };
    let m = match lift_all(state.m_residues(), &fresh.m) {
        Ok(m) => m,
        Err(e) => return e,
    };
    if !m[d].is_one() {
        return Reconstruction::NeedMorePrimes;
    }
    let mut q = Vec::with_capacity(fresh.q.len());
    for (res, img) in state.q_residues().iter().zip(&fresh.q) {
        match lift_all(res, img) {
            Ok(x) => q.push(x),
            Err(e) => return e,
        }
    }
    Reconstruction::Candidate(RurCandidate::from_rationals(
        state.form().clone(),
        &m,
        &q,
        state.count() + 1,
        state.radicalized() || fresh.radicalized,
    ))
}

/// Checks the documented invariants of a candidate.
pub fn candidate_is_normalized(c: &RurCandidate) -> bool {
    let lc_ok = c.m.leading_coeff().is_positive() && c.m.content().is_one();
    let degs = c.m.degree() == Some(c.dim) && c.q.iter().all(|q| q.degree().map_or(true, |e| e < c.dim));
    let dens = c
        .q
        .iter()
        .zip(&c.q_den)
        .all(|(q, den)| den.is_positive() && (q.is_zero() && den.is_one() || q.content().gcd(den).is_one()));
    lc_ok && degs && dens && c.dm_den.is_positive() && (!c.dm.is_zero() || c.dim <= 1)
}
