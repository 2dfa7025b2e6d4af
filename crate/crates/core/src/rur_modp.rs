//! The single-prime pipeline: Gröbner basis, quotient basis, separating
//! form, radicalization, and the parametrization `x_i = Q_i(t) / m'(t)`.

use std::sync::OnceLock;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{BadPrimeReason, Result, RurError};
use crate::gbasis::{buchberger_modp, GroebnerBasisModP, LearnedHints, Signature};
use crate::polyarith::{uni_gcd_modp, IntPoly, ModPoly, Prime, UniModPoly};
use crate::quotient::{mult_matrix, quotient_basis, MultMatrix, QuotientBasis, SepForm, SEPFORM_COEFF_CAP};
use crate::seqlinalg::{berlekamp_massey, krylov_sequences, HankelMethod, HankelSolver, HankelSystem, ScalarSequence};

/// Tuning knobs of one prime's computation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RurParams {
    pub seed: u64,
    /// Random combinations tried after the coordinate forms.
    pub random_forms: usize,
    pub max_radicalizations: usize,
    pub hankel: HankelMethod,
}

impl Default for RurParams {
    fn default() -> RurParams {
        RurParams {
            seed: 0,
            random_forms: 20,
            max_radicalizations: 3,
            hankel: HankelMethod::Gauss,
        }
    }
}

/// One prime's image of the parametrization.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RurModP {
    pub prime: Prime,
    pub form: SepForm,
    /// Monic, squarefree, degree `dim`.
    pub m: UniModPoly,
    /// `Q_i` per variable, degree below `dim`.
    pub q: Vec<UniModPoly>,
    pub dim: usize,
    pub signature: Signature,
    pub radicalized: bool,
    /// Zero-reducing pairs of the run on the original generators.
    pub hints: LearnedHints,
}

impl RurModP {
    /// Evaluates `g` at `x_i = Q_i / m'` in `Z/pZ[t]/(m)`.
    pub fn substitute(&self, g: &ModPoly) -> UniModPoly {
        let p = self.prime;
        let dm = self.m.derivative();
        let inv = dm.inv_mod(&self.m).expect("m is squarefree");
        let values: Vec<UniModPoly> = self.q.iter().map(|q| q.mul_mod(&inv, &self.m).unwrap()).collect();
        let mut acc = UniModPoly::zero(p);
        for (mono, c) in g.terms() {
            let mut term = UniModPoly::new(p, vec![*c]);
            for (i, &e) in mono.exps().iter().enumerate() {
                for _ in 0..e {
                    term = term.mul_mod(&values[i], &self.m).unwrap();
                }
            }
            acc = acc.add(&term);
        }
        acc.rem(&self.m).unwrap()
    }
}

/// What the first successful prime fixes for all later primes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolveRecord {
    pub form: SepForm,
    pub hints: LearnedHints,
    pub signature: Signature,
    pub dim: usize,
    pub radicalized: bool,
}

/// Write-once record shared by concurrent primes.
#[derive(Debug, Default)]
pub struct SharedSolveState {
    record: OnceLock<SolveRecord>,
}

impl SharedSolveState {
    pub fn new() -> SharedSolveState {
        SharedSolveState::default()
    }

    pub fn get(&self) -> Option<&SolveRecord> {
        self.record.get()
    }

    /// Stores `rec` unless a record exists; returns whether it was stored.
    pub fn record(&self, rec: SolveRecord) -> bool {
        self.record.set(rec).is_ok()
    }

    /// Forgets the record so the next prime searches afresh.
    pub fn reset(&mut self) {
        self.record.take();
    }
}

fn attempt_rng(seed: u64, prime: Prime, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ prime.get().rotate_left(32));
    rng.set_stream(stream);
    rng
}

fn random_vector(rng: &mut ChaCha8Rng, p: Prime, d: usize) -> Vec<u64> {
    (0..d).map(|_| rng.gen_range(1..p.get())).collect()
}

/// Krylov targets: `coords(1)` then `coords(x_i)` for every variable.
fn targets(gb: &GroebnerBasisModP, basis: &QuotientBasis) -> Vec<Vec<u64>> {
    let n = gb.nvars();
    let p = gb.prime();
    let mut t = vec![basis.coords(&ModPoly::constant(n, p, 1))];
    for i in 0..n {
        t.push(basis.coords(&gb.normal_form(&ModPoly::var(n, p, i))));
    }
    t
}

/// Minimal polynomial of `form` on the quotient ring, with one retry on a
/// fresh vector when the first degree falls short of the dimension.
pub fn minimal_poly_of_form(
    gb: &GroebnerBasisModP,
    basis: &QuotientBasis,
    form: &SepForm,
    attempt_seed: u64,
) -> UniModPoly {
    let matrix = mult_matrix(gb, basis, form);
    let mut counter = 0;
    let (m, _) = sequences_for(gb, basis, &matrix, attempt_seed, &mut counter, false);
    m
}

/// Runs the Krylov pass (retrying once) and returns `m` with all sequences.
fn sequences_for(
    gb: &GroebnerBasisModP,
    basis: &QuotientBasis,
    matrix: &MultMatrix,
    seed: u64,
    counter: &mut u64,
    with_rhs: bool,
) -> (UniModPoly, Vec<ScalarSequence>) {
    let d = basis.dim();
    let p = gb.prime();
    let mut tg = targets(gb, basis);
    if !with_rhs {
        tg.truncate(1);
    }
    let mut best: Option<(UniModPoly, Vec<ScalarSequence>)> = None;
    for _ in 0..2 {
        let mut rng = attempt_rng(seed, p, *counter);
        *counter += 1;
        let v = random_vector(&mut rng, p, d);
        let seqs = krylov_sequences(matrix, &v, &tg, 2 * d);
        let m = berlekamp_massey(&seqs[0]);
        let deg = m.degree().unwrap_or(0);
        if deg == d {
            return (m, seqs);
        }
        if best.as_ref().map_or(true, |b| b.0.degree().unwrap_or(0) < deg) {
            best = Some((m, seqs));
        }
    }
    best.expect("at least one attempt")
}

/// Tries `x_n, ..., x_1`, then random combinations with coefficients in
/// `[-d^2, d^2]`, returning the first form whose minimal polynomial has
/// degree `d`.
pub fn find_separating_form(
    gb: &GroebnerBasisModP,
    basis: &QuotientBasis,
    rng: &mut ChaCha8Rng,
    random_forms: usize,
) -> Result<(SepForm, UniModPoly)> {
    let d = basis.dim();
    for form in candidate_forms(gb.nvars(), d, rng, random_forms) {
        let seed = rng.gen();
        let m = minimal_poly_of_form(gb, basis, &form, seed);
        if m.degree() == Some(d) {
            return Ok((form, m));
        }
    }
    Err(RurError::NoSeparatingForm)
}

fn candidate_forms(n: usize, d: usize, rng: &mut ChaCha8Rng, random_forms: usize) -> Vec<SepForm> {
    let mut out: Vec<SepForm> = (0..n).rev().map(|i| SepForm::variable(n, i)).collect();
    let bound = ((d * d) as i64).clamp(1, SEPFORM_COEFF_CAP);
    while out.len() < n + random_forms {
        let lambda: Vec<i64> = (0..n).map(|_| rng.gen_range(-bound..=bound)).collect();
        if let Ok(f) = SepForm::new(lambda) {
            out.push(f);
        }
    }
    out
}

/// `m / gcd(m, m')`, monic.
pub fn squarefree_part(m: &UniModPoly) -> UniModPoly {
    let g = uni_gcd_modp(m, &m.derivative());
    m.divrem(&g).expect("gcd divides m").0.monic()
}

/// `f(sum lambda_i x_i)` expanded in the original variables.
fn compose_with_form(f: &UniModPoly, form: &SepForm, nvars: usize) -> ModPoly {
    let p = f.prime();
    let t = form.to_modpoly(p);
    let mut acc = ModPoly::zero(nvars, p);
    for &c in f.coeffs().iter().rev() {
        acc = acc.mul(&t).add(&ModPoly::constant(nvars, p, c));
    }
    acc
}

fn bad(prime: Prime, reason: BadPrimeReason) -> RurError {
    RurError::BadPrime {
        prime: prime.get(),
        reason,
    }
}

/// Reduces the generators, refusing primes that kill a leading coefficient.
pub fn reduce_generators(gens: &[IntPoly], p: Prime) -> Result<Vec<ModPoly>> {
    gens.iter()
        .enumerate()
        .map(|(k, g)| {
            let r = g.reduce_mod(p);
            if r.leading_monomial() != g.leading_monomial() {
                Err(bad(p, BadPrimeReason::LeadingCoefficientVanished { generator: k }))
            } else {
                Ok(r)
            }
        })
        .collect()
}

/// The full per-prime computation. On the first success with an empty
/// `state`, the form, hints, signature, and dimension are recorded there.
pub fn rur_modp(gens_int: &[IntPoly], p: Prime, state: &SharedSolveState, params: &RurParams) -> Result<RurModP> {
    let gens = reduce_generators(gens_int, p)?;
    let n = gens[0].nvars();
    let record = state.get();
    let mut rng = attempt_rng(params.seed, p, u64::MAX);
    let mut counter = 0u64;
    let mut current = gens;
    let mut first_hints: Option<LearnedHints> = None;
    let mut preferred: Option<SepForm> = record.map(|r| r.form.clone());
    let mut radicalized = false;

    for round in 0..=params.max_radicalizations {
        let hints = if round == 0 { record.map(|r| &r.hints) } else { None };
        let (gb, learned) = buchberger_modp(&current, hints).map_err(|e| match e {
            RurError::IdealIsUnit => bad(p, BadPrimeReason::UnitIdeal),
            other => other,
        })?;
        if round == 0 {
            first_hints = Some(learned);
        }
        let basis = quotient_basis(&gb).map_err(|_| bad(p, BadPrimeReason::NotZeroDimensional))?;
        let d = basis.dim();

        let (form, matrix, m, seqs) = match (&preferred, record) {
            (Some(form), Some(_)) => {
                let matrix = mult_matrix(&gb, &basis, form);
                let (m, seqs) = sequences_for(&gb, &basis, &matrix, params.seed, &mut counter, true);
                let deg = m.degree().unwrap_or(0);
                if deg != d {
                    return Err(bad(p, BadPrimeReason::FormDegreeDrop { degree: deg, dim: d }));
                }
                (form.clone(), matrix, m, seqs)
            }
            _ => {
                let mut cands = candidate_forms(n, d, &mut rng, params.random_forms);
                if let Some(f) = &preferred {
                    cands.insert(0, f.clone());
                }
                let mut found = None;
                for form in cands {
                    let matrix = mult_matrix(&gb, &basis, &form);
                    let (m, seqs) = sequences_for(&gb, &basis, &matrix, params.seed, &mut counter, true);
                    if m.degree() == Some(d) {
                        found = Some((form, matrix, m, seqs));
                        break;
                    }
                }
                found.ok_or_else(|| bad(p, BadPrimeReason::NoSeparatingForm))?
            }
        };

        let sqf = squarefree_part(&m);
        if sqf.degree() != m.degree() {
            radicalized = true;
            preferred = Some(form.clone());
            let mut next: Vec<ModPoly> = gb.polys().to_vec();
            next.push(compose_with_form(&sqf, &form, n));
            current = next;
            continue;
        }

        let q = parametrize(&m, &seqs, d, p, params.hankel).map_err(|_| bad(p, BadPrimeReason::SingularHankel))?;
        drop(matrix);
        let out = RurModP {
            prime: p,
            form: form.clone(),
            m,
            q,
            dim: d,
            signature: gb.signature(),
            radicalized,
            hints: first_hints.unwrap_or_default(),
        };
        if record.is_none() {
            state.record(SolveRecord {
                form,
                hints: out.hints.clone(),
                signature: out.signature.clone(),
                dim: d,
                radicalized,
            });
        }
        return Ok(out);
    }
    Err(bad(p, BadPrimeReason::RadicalizationExceeded))
}

/// Hankel solves for `P_i`, then `Q_i = P_i m' mod m`.
fn parametrize(m: &UniModPoly, seqs: &[ScalarSequence], d: usize, p: Prime, method: HankelMethod) -> Result<Vec<UniModPoly>> {
    let sys = HankelSystem::new(p, seqs[0].values().to_vec(), d)?;
    let solver = HankelSolver::new(&sys, method, Some(m)).map_err(|_| RurError::SingularHankel)?;
    let dm = m.derivative();
    Ok(seqs[1..]
        .iter()
        .map(|s| {
            let pi = UniModPoly::new(p, solver.solve(&s.values()[..d]));
            pi.mul_mod(&dm, m).expect("nonzero modulus")
        })
        .collect())
}

/// The separating-form identity `sum lambda_i Q_i = t m' mod m`.
pub fn sepform_identity_modp(r: &RurModP) -> bool {
    let p = r.prime;
    let mut lhs = UniModPoly::zero(p);
    for (q, &l) in r.q.iter().zip(r.form.lambda()) {
        lhs = lhs.add(&q.scale(p.from_i64(l)));
    }
    let rhs = UniModPoly::t(p).mul_mod(&r.m.derivative(), &r.m).unwrap();
    lhs.rem(&r.m).unwrap() == rhs
}
