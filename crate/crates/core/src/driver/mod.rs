//! Multi-modular orchestration: primes, compatibility voting, Chinese
//! remaindering, reconstruction, and acceptance.

mod candidate;
mod crt;
mod primes;

use std::collections::{HashSet, VecDeque};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::One;
use rayon::prelude::*;

use crate::certify::{certify, CertReport, DEFAULT_CERT_THREADS};
use crate::error::{BadPrimeReason, Result, RurError};
use crate::polyarith::{IntPoly, Monomial, Prime};
use crate::realroots::{isolate_real_roots, solution_boxes, SolutionBox};
use crate::rur_modp::{rur_modp, RurModP, RurParams, SharedSolveState};
use crate::seqlinalg::HankelMethod;
use crate::system::PolySystem;

pub use candidate::{candidate_is_normalized, try_reconstruct, ImageCheck, Reconstruction, RurCandidate};
pub use crt::{crt_combine, crt_pair, farey, farey_bounds, CrtState};
pub use primes::{prime_stream, PrimeStream, PRIME_STREAM_LIMIT};

/// Multiplies a rational-coefficient polynomial by the lcm of its
/// coefficient denominators.
pub fn clear_denominators(nvars: usize, terms: Vec<(Monomial, BigRational)>) -> IntPoly {
    let l = terms.iter().fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.denom()));
    let ints = terms
        .into_iter()
        .map(|(m, c)| (m, c.numer() * (&l / c.denom())))
        .collect();
    IntPoly::from_terms(nvars, ints)
}

/// Consecutive form-degree drops that make the driver forget the
/// recorded separating form.
const FORM_DROP_LIMIT: usize = 3;

/// Consecutive identical structural failures taken as a property of the
/// system rather than of the primes.
const STRUCTURAL_LIMIT: usize = 3;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolveConfig {
    /// Primes computed concurrently.
    pub threads: usize,
    /// `0` skips certification, `1` checks every equation, `n > 1` checks
    /// equations of total degree below `n`.
    pub certify_mode: u32,
    pub cert_threads: usize,
    /// Extra primes that must agree with a candidate before acceptance.
    pub confirm_extra: usize,
    pub seed: u64,
    pub isolate: bool,
    /// Solution boxes are refined to width `2^-precision`.
    pub precision: u32,
    pub hankel: HankelMethod,
    pub random_forms: usize,
    pub max_primes: usize,
    /// Consecutive primes without a separating form before giving up.
    pub form_budget: usize,
}

impl Default for SolveConfig {
    fn default() -> SolveConfig {
        SolveConfig {
            threads: std::thread::available_parallelism().map_or(1, |n| n.get()),
            certify_mode: 1,
            cert_threads: DEFAULT_CERT_THREADS,
            confirm_extra: 1,
            seed: 0,
            isolate: false,
            precision: 40,
            hankel: HankelMethod::Gauss,
            random_forms: 20,
            max_primes: 10_000,
            form_budget: 6,
        }
    }
}

impl SolveConfig {
    fn params(&self) -> RurParams {
        RurParams {
            seed: self.seed,
            random_forms: self.random_forms,
            hankel: self.hankel,
            ..RurParams::default()
        }
    }
}

/// A prime left out of the reconstruction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Discard {
    pub prime: u64,
    pub reason: BadPrimeReason,
}

#[derive(Clone, Debug)]
pub struct SolveOutcome {
    pub candidate: RurCandidate,
    pub report: CertReport,
    /// In processing order.
    pub discards: Vec<Discard>,
    /// Present when `isolate` is set.
    pub boxes: Option<Vec<SolutionBox>>,
}

pub fn solve(system: &PolySystem, config: &SolveConfig) -> Result<(RurCandidate, CertReport)> {
    solve_detailed(system, config).map(|o| (o.candidate, o.report))
}

pub fn solve_detailed(system: &PolySystem, config: &SolveConfig) -> Result<SolveOutcome> {
    solve_with_primes(system, config, &[])
}

/// Like [`solve_detailed`], but processes `injected` before the regular
/// prime stream, which then skips them.
pub fn solve_with_primes(system: &PolySystem, config: &SolveConfig, injected: &[u64]) -> Result<SolveOutcome> {
    if config.threads == 0 || config.cert_threads == 0 {
        return Err(RurError::Usage("thread counts must be positive".into()));
    }
    let injected: Vec<Prime> = injected.iter().map(|&p| Prime::new(p)).collect::<Result<_>>()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.threads)
        .build()
        .map_err(|e| RurError::Usage(format!("cannot start worker pool: {e}")))?;
    let mut run = Run::new(system, config, injected);
    let candidate = pool.install(|| run.reconstruct())?;
    let discards = run.finish();
    let report = certify(system, &candidate, config.certify_mode, config.cert_threads);
    let boxes = config
        .isolate
        .then(|| solution_boxes(&candidate, &isolate_real_roots(&candidate.m), config.precision));
    Ok(SolveOutcome {
        candidate,
        report,
        discards,
        boxes,
    })
}

/// What processing one prime's result did to the run.
enum Step {
    Continue,
    /// The shared record changed; results computed under the old one are
    /// stale. The listed primes are recomputed first.
    Invalidate(Vec<Prime>),
    Accept(RurCandidate),
}

struct Run<'a> {
    gens: &'a [IntPoly],
    config: &'a SolveConfig,
    params: RurParams,
    state: SharedSolveState,
    queue: VecDeque<Prime>,
    injected: HashSet<u64>,
    stream: PrimeStream,
    skips_logged: usize,
    processed: usize,
    canon: Option<CrtState>,
    rivals: Vec<CrtState>,
    /// Rival primes in processing order.
    rival_order: Vec<Prime>,
    pending: Option<(RurCandidate, usize)>,
    log: Vec<Discard>,
    drop_streak: usize,
    nosep_streak: usize,
    structural: Option<(BadPrimeReason, usize)>,
}

impl<'a> Run<'a> {
    fn new(system: &'a PolySystem, config: &'a SolveConfig, injected: Vec<Prime>) -> Run<'a> {
        Run {
            gens: system.generators(),
            config,
            params: config.params(),
            state: SharedSolveState::new(),
            injected: injected.iter().map(|p| p.get()).collect(),
            queue: injected.into(),
            stream: prime_stream(system.generators()),
            skips_logged: 0,
            processed: 0,
            canon: None,
            rivals: Vec::new(),
            rival_order: Vec::new(),
            pending: None,
            log: Vec::new(),
            drop_streak: 0,
            nosep_streak: 0,
            structural: None,
        }
    }

    fn take_primes(&mut self, k: usize) -> Result<Vec<Prime>> {
        let mut out = Vec::with_capacity(k);
        while out.len() < k {
            if let Some(p) = self.queue.pop_front() {
                out.push(p);
                continue;
            }
            let p = self.stream.next_prime()?;
            if !self.injected.contains(&p.get()) {
                out.push(p);
            }
        }
        Ok(out)
    }

    /// Logs the stream's skipped primes above `p`.
    fn flush_skips(&mut self, p: Prime) {
        let skipped = self.stream.skipped();
        while self.skips_logged < skipped.len() && skipped[self.skips_logged].0 > p.get() {
            let (prime, generator) = skipped[self.skips_logged];
            self.skips_logged += 1;
            if self.injected.contains(&prime) {
                continue;
            }
            self.log.push(Discard {
                prime,
                reason: BadPrimeReason::LeadingCoefficientVanished { generator },
            });
        }
    }

    fn reconstruct(&mut self) -> Result<RurCandidate> {
        loop {
            let k = if self.state.get().is_none() { 1 } else { self.config.threads };
            let batch = self.take_primes(k)?;
            let (gens, state, params) = (self.gens, &self.state, &self.params);
            let results: Vec<Result<RurModP>> = batch.par_iter().map(|&p| rur_modp(gens, p, state, params)).collect();
            for (i, (p, res)) in batch.iter().zip(results).enumerate() {
                if self.processed >= self.config.max_primes {
                    return Err(RurError::PrimesExhausted);
                }
                self.processed += 1;
                if !self.injected.contains(&p.get()) {
                    self.flush_skips(*p);
                }
                match self.step(*p, res)? {
                    Step::Continue => {}
                    Step::Accept(c) => return Ok(c),
                    Step::Invalidate(replay) => {
                        for q in batch[i + 1..].iter().rev().chain(replay.iter().rev()) {
                            self.queue.push_front(*q);
                        }
                        break;
                    }
                }
            }
        }
    }

    fn discard(&mut self, prime: u64, reason: BadPrimeReason) {
        self.log.push(Discard { prime, reason });
    }

    fn discard_all(&mut self, st: &CrtState, reason: BadPrimeReason) {
        for &p in st.primes() {
            self.discard(p, reason.clone());
        }
    }

    fn step(&mut self, p: Prime, res: Result<RurModP>) -> Result<Step> {
        match res {
            Ok(r) => self.on_image(r),
            Err(RurError::BadPrime { prime, reason }) => self.on_failure(prime, reason),
            Err(RurError::SingularHankel) => {
                self.discard(p.get(), BadPrimeReason::SingularHankel);
                Ok(Step::Continue)
            }
            Err(e) => Err(e),
        }
    }

    fn on_failure(&mut self, prime: u64, reason: BadPrimeReason) -> Result<Step> {
        self.discard(prime, reason.clone());
        match &reason {
            BadPrimeReason::NotZeroDimensional | BadPrimeReason::UnitIdeal => {
                let n = match &self.structural {
                    Some((r, n)) if *r == reason => n + 1,
                    _ => 1,
                };
                self.structural = Some((reason.clone(), n));
                let support = self.canon.as_ref().map_or(0, |c| c.count());
                if n >= STRUCTURAL_LIMIT && n > support {
                    return Err(if reason == BadPrimeReason::UnitIdeal {
                        RurError::EmptyVariety
                    } else {
                        RurError::NotZeroDimensional
                    });
                }
            }
            BadPrimeReason::NoSeparatingForm => {
                self.nosep_streak += 1;
                if self.nosep_streak >= self.config.form_budget {
                    return Err(RurError::NoSeparatingForm);
                }
            }
            BadPrimeReason::FormDegreeDrop { .. } => {
                self.drop_streak += 1;
                if self.drop_streak >= FORM_DROP_LIMIT {
                    self.drop_streak = 0;
                    if let Some(c) = self.canon.take() {
                        self.discard_all(&c, BadPrimeReason::Outvoted);
                    }
                    for r in std::mem::take(&mut self.rivals) {
                        self.discard_all(&r, BadPrimeReason::Outvoted);
                    }
                    self.rival_order.clear();
                    self.pending = None;
                    self.state.reset();
                    return Ok(Step::Invalidate(Vec::new()));
                }
            }
            _ => {}
        }
        Ok(Step::Continue)
    }

    fn on_image(&mut self, r: RurModP) -> Result<Step> {
        self.drop_streak = 0;
        self.nosep_streak = 0;
        self.structural = None;
        let Some(canon) = self.canon.take() else {
            self.canon = Some(CrtState::new(&r));
            return Ok(Step::Continue);
        };
        if !canon.is_compatible(&r) {
            self.canon = Some(canon);
            return Ok(self.on_rival(r));
        }
        let prime = r.prime.get();
        if let Some((cand, confirmations)) = self.pending.take() {
            match cand.check_image(&r) {
                ImageCheck::Matches => {
                    self.canon = Some(crt_combine(canon, &r)?);
                    if confirmations + 1 >= self.config.confirm_extra {
                        return Ok(Step::Accept(cand));
                    }
                    self.pending = Some((cand, confirmations + 1));
                }
                ImageCheck::Differs => self.canon = Some(crt_combine(canon, &r)?),
                ImageCheck::DenominatorVanished => {
                    self.canon = Some(canon);
                    self.pending = Some((cand, confirmations));
                    self.discard(prime, BadPrimeReason::DenominatorVanished);
                }
            }
            return Ok(Step::Continue);
        }
        match try_reconstruct(&canon, &r) {
            Reconstruction::Candidate(cand) => {
                self.canon = Some(crt_combine(canon, &r)?);
                if self.config.confirm_extra == 0 {
                    return Ok(Step::Accept(cand));
                }
                self.pending = Some((cand, 0));
            }
            Reconstruction::NeedMorePrimes => self.canon = Some(crt_combine(canon, &r)?),
            Reconstruction::DenominatorVanished => {
                self.canon = Some(canon);
                self.discard(prime, BadPrimeReason::DenominatorVanished);
            }
        }
        Ok(Step::Continue)
    }

    /// Files an image that disagrees with the canonical state. When a
    /// rival group outnumbers the canon, the canon is discarded and every
    /// rival prime is recomputed from a fresh record, since those images
    /// were computed under the canon's form and hints.
    fn on_rival(&mut self, r: RurModP) -> Step {
        let prime = r.prime;
        let idx = match self.rivals.iter().position(|g| g.is_compatible(&r)) {
            Some(i) => match crt_combine(self.rivals[i].clone(), &r) {
                Ok(g) => {
                    self.rivals[i] = g;
                    i
                }
                Err(_) => {
                    self.discard(prime.get(), BadPrimeReason::Incompatible);
                    return Step::Continue;
                }
            },
            None => {
                self.rivals.push(CrtState::new(&r));
                self.rivals.len() - 1
            }
        };
        self.rival_order.push(prime);
        let canon_count = self.canon.as_ref().map_or(0, |c| c.count());
        if self.rivals[idx].count() <= canon_count {
            return Step::Continue;
        }
        if let Some(old) = self.canon.take() {
            self.discard_all(&old, BadPrimeReason::Outvoted);
        }
        self.rivals.clear();
        self.pending = None;
        self.state.reset();
        Step::Invalidate(std::mem::take(&mut self.rival_order))
    }

    /// The discard log, with the losing rival groups appended.
    fn finish(mut self) -> Vec<Discard> {
        for g in std::mem::take(&mut self.rivals) {
            self.discard_all(&g, BadPrimeReason::Incompatible);
        }
        self.log
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyarith::UniIntPoly;
    use crate::system::parse_system;

    fn config() -> SolveConfig {
        SolveConfig {
            threads: 2,
            ..SolveConfig::default()
        }
    }

    #[test]
    fn toy_solve() {
        let s = parse_system("vars: x, y\nx + y - 3\nx*y - 2").unwrap();
        let (c, report) = solve(&s, &config()).unwrap();
        assert_eq!(c.m, UniIntPoly::from_i64(&[2, -3, 1]));
        assert!(report.all_verified());
    }

    #[test]
    fn structural_errors() {
        let s = parse_system("vars: x\nx - 1\nx - 2").unwrap();
        assert_eq!(solve(&s, &config()).unwrap_err(), RurError::EmptyVariety);
        let s = parse_system("vars: x, y\nx*y - 1").unwrap();
        assert_eq!(solve(&s, &config()).unwrap_err(), RurError::NotZeroDimensional);
    }

    #[test]
    fn rational_coordinates() {
        // solutions (1/3, 2) and (-1/3, 5/7)
        let s = parse_system("vars: x, y\n9*x^2 - 1\n(3*x - 1)*(7*y - 5) + (3*x + 1)*(y - 2)").unwrap();
        let out = solve_detailed(
            &s,
            &SolveConfig {
                isolate: true,
                ..config()
            },
        )
        .unwrap();
        assert!(out.report.all_verified());
        assert!(candidate_is_normalized(&out.candidate));
        let boxes = out.boxes.unwrap();
        assert_eq!(boxes.len(), 2);
        let third = BigRational::new(1.into(), 3.into());
        assert!(boxes.iter().any(|b| b.coords[0].contains(&third) && b.coords[1].contains(&BigRational::from_integer(2.into()))));
    }

    #[test]
    fn injected_bad_prime_is_logged() {
        let s = parse_system("vars: x, y\n1073741783*x^2 + y - 3\nx*y - 2").unwrap();
        let (plain, _) = solve(&s, &config()).unwrap();
        let out = solve_with_primes(&s, &config(), &[1073741783]).unwrap();
        assert_eq!(out.candidate, plain);
        assert_eq!(
            out.discards[0],
            Discard {
                prime: 1073741783,
                reason: BadPrimeReason::LeadingCoefficientVanished { generator: 0 }
            }
        );
    }

    #[test]
    fn planted_double_root_is_outvoted() {
        // roots 1 and 1 + p collide modulo p
        let p = 1_000_000_007u64;
        let text = format!("vars: x, y\nx^2 - {}*x + {}\ny - x", p + 2, p + 1);
        let s = parse_system(&text).unwrap();
        let (plain, _) = solve(&s, &config()).unwrap();
        let out = solve_with_primes(&s, &config(), &[p]).unwrap();
        assert_eq!(out.candidate, plain);
        assert!(out.report.all_verified());
        assert_eq!(
            out.discards,
            vec![Discard {
                prime: p,
                reason: BadPrimeReason::Outvoted
            }]
        );
    }

    #[test]
    fn thread_count_does_not_change_result() {
        let s = crate::generators::katsura(4);
        let one = solve_detailed(&s, &SolveConfig { threads: 1, ..config() }).unwrap();
        let four = solve_detailed(&s, &SolveConfig { threads: 4, ..config() }).unwrap();
        assert_eq!(one.candidate, four.candidate);
        assert_eq!(one.discards, four.discards);
    }
}
