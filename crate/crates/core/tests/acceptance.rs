//! Acceptance criteria, one test each. Every test writes a single
//! `acceptance criterion N [...]: PASS|FAIL` line to stderr.

mod common;

use std::time::{Duration, Instant};

use common::*;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rur_core::certify::{sepform_identity_check, substitute_check, CheckOutcome};
use rur_core::driver::{
    crt_pair, farey, farey_bounds, solve_detailed, solve_with_primes, Discard, RurCandidate, SolveConfig,
};
use rur_core::gbasis::buchberger_modp;
use rur_core::generators::katsura;
use rur_core::output::emit_result;
use rur_core::polyarith::{uni_gcd_modp, IntPoly, Monomial, ModPoly, Prime, UniIntPoly, UniModPoly};
use rur_core::quotient::{mult_matrix, quotient_basis, SepForm};
use rur_core::realroots::RatInterval;
use rur_core::seqlinalg::{berlekamp_massey_slice, hankel_solve, hankel_solve_bezoutian, HankelSystem};
use rur_core::system::{parse_system, PolySystem};
use rur_core::{BadPrimeReason, RurError};

const TOY_TIME_LIMIT: Duration = Duration::from_secs(1);
const KATSURA7_TIME_LIMIT: Duration = Duration::from_secs(120);
const BOX_PRECISION: u32 = 40;
const ORACLE_PRECISION: usize = 60;
const RANDOM_SYSTEMS: usize = 50;
const FAREY_CASES: usize = 1000;
const FAREY_BITS: u32 = 40;
const BM_CASES: usize = 200;
const BM_MAX_DIM: usize = 40;
const HANKEL_CASES: usize = 500;
const HANKEL_MAX_DIM: usize = 128;
const PERTURBATIONS: usize = 100;

fn config() -> SolveConfig {
    SolveConfig {
        threads: 4,
        ..SolveConfig::default()
    }
}

fn toy() -> PolySystem {
    parse_system("vars: x, y\nx + y - 3\nx*y - 2").unwrap()
}

fn point(b: &[RatInterval]) -> Vec<(Q, Q)> {
    b.iter().map(|c| (c.lo.clone(), c.hi.clone())).collect()
}

#[test]
fn criterion_01_toy_exactness() {
    let start = Instant::now();
    let out = solve_detailed(
        &toy(),
        &SolveConfig {
            isolate: true,
            ..config()
        },
    )
    .unwrap();
    let elapsed = start.elapsed();
    let c = &out.candidate;
    let rur_ok = c.m == UniIntPoly::from_i64(&[2, -3, 1])
        && c.q == vec![UniIntPoly::from_i64(&[-5, 3]), UniIntPoly::from_i64(&[-4, 3])]
        && c.q_den == vec![BigInt::one(), BigInt::one()];
    let mut boxes: Vec<Vec<(Q, Q)>> = out.boxes.as_ref().unwrap().iter().map(|b| point(&b.coords)).collect();
    boxes.sort();
    let expected = vec![
        vec![(q(1, 1), q(1, 1)), (q(2, 1), q(2, 1))],
        vec![(q(2, 1), q(2, 1)), (q(1, 1), q(1, 1))],
    ];
    let pass = rur_ok && out.report.all_verified() && boxes == expected && elapsed < TOY_TIME_LIMIT;
    report(
        1,
        "toy exactness",
        pass,
        &format!(
            "m = {:?}, Q = {:?}, certified = {}, boxes exact = {}, {:?} < {:?}",
            c.m,
            c.q,
            out.report.all_verified(),
            boxes == expected,
            elapsed,
            TOY_TIME_LIMIT
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_02_katsura_dimension_law() {
    let mut details = Vec::new();
    let mut pass = true;
    for k in 4..=7usize {
        let start = Instant::now();
        let out = solve_detailed(&katsura(k), &config()).unwrap();
        let elapsed = start.elapsed();
        let ok = out.candidate.dim == 1 << (k - 1) && out.report.all_verified() && (k < 7 || elapsed < KATSURA7_TIME_LIMIT);
        pass &= ok;
        details.push(format!("k={k}: d={} certified={} {:.2?}", out.candidate.dim, out.report.all_verified(), elapsed));
    }
    report(2, "katsura dimension law", pass, &details.join("; "));
    assert!(pass);
}

/// Real solutions of `{f, g}` from the eliminants in `x` and in `y`:
/// each real root of one pairs with the unique real root of the other
/// on which both equations enclose zero. `None` when the system is not
/// in generic position for this oracle.
fn resultant_oracle(f: &IntPoly, g: &IntPoly, dim: usize) -> Option<Vec<[Iv; 2]>> {
    let rx = squarefree(&resultant(f, g, 1));
    let ry = squarefree(&resultant(f, g, 0));
    if deg(&rx) != Some(dim) || deg(&ry) != Some(dim) {
        return None;
    }
    let width = Q::new(BigInt::one(), BigInt::one() << ORACLE_PRECISION);
    let xs = real_roots(&rx, &width);
    let ys = real_roots(&ry, &width);
    let mut out = Vec::new();
    for (xl, xh) in &xs {
        let x = Iv(xl.clone(), xh.clone());
        let partners: Vec<Iv> = ys
            .iter()
            .map(|(yl, yh)| Iv(yl.clone(), yh.clone()))
            .filter(|y| {
                let pt = [x.clone(), y.clone()];
                eval_box(f, &pt).contains_zero() && eval_box(g, &pt).contains_zero()
            })
            .collect();
        if partners.len() != 1 {
            return None;
        }
        out.push([x, partners[0].clone()]);
    }
    Some(out)
}

#[test]
fn criterion_03_substitution_soundness_against_resultants() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let target = Q::new(BigInt::one(), BigInt::one() << BOX_PRECISION);
    let (mut checked, mut skipped, mut failures) = (0usize, 0usize, Vec::new());
    let mut real_total = 0usize;
    while checked < RANDOM_SYSTEMS {
        let (a, b) = (rng.gen_range(2..=3), rng.gen_range(2..=3));
        let f = random_dense_bivariate(&mut rng, a);
        let g = random_dense_bivariate(&mut rng, b);
        let system = PolySystem::new(vec!["x".into(), "y".into()], vec![f.clone(), g.clone()]).unwrap();
        let out = match solve_detailed(
            &system,
            &SolveConfig {
                isolate: true,
                precision: BOX_PRECISION,
                ..config()
            },
        ) {
            Ok(o) => o,
            Err(e) => {
                failures.push(format!("system {checked}: solver error {e}"));
                checked += 1;
                continue;
            }
        };
        let Some(oracle) = resultant_oracle(&f, &g, out.candidate.dim) else {
            skipped += 1;
            continue;
        };
        checked += 1;
        real_total += oracle.len();
        let mut boxes: Vec<Vec<RatInterval>> = out.boxes.unwrap().into_iter().map(|b| b.coords).collect();
        boxes.sort_by(|u, v| u[0].lo.cmp(&v[0].lo));
        let ok = out.report.all_verified()
            && boxes.len() == oracle.len()
            && boxes.iter().zip(&oracle).all(|(bx, or)| {
                bx.iter().zip(or).all(|(c, o)| c.width() <= target && Iv(c.lo.clone(), c.hi.clone()).intersects(o))
            });
        if !ok {
            failures.push(format!(
                "system {}: {} boxes vs {} oracle solutions, certified {}",
                checked - 1,
                boxes.len(),
                oracle.len(),
                out.report.all_verified()
            ));
        }
    }
    let pass = failures.is_empty();
    report(
        3,
        "substitution soundness vs resultant oracle",
        pass,
        &format!(
            "{checked} systems, {real_total} real solutions, {skipped} non-generic redrawn, width <= 2^-{BOX_PRECISION}; {}",
            if pass { "all match".to_string() } else { failures.join("; ") }
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_04_farey_crt_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let primes: Vec<Prime> = rur_core::driver::prime_stream(&[]).take(5).collect();
    let (mut exact, mut wrong_accepts) = (0usize, 0usize);
    for _ in 0..FAREY_CASES {
        let a: i64 = rng.gen_range(-(1i64 << FAREY_BITS) + 1..1i64 << FAREY_BITS);
        let b: i64 = rng.gen_range(1..1i64 << FAREY_BITS);
        let truth = q(a, b);
        let residue = |p: Prime| p.mul(p.from_bigint(truth.numer()), p.inv(p.from_bigint(truth.denom())).unwrap());
        let mut modulus = BigInt::from(primes[0].get());
        let mut acc = BigInt::from(residue(primes[0]));
        let mut recovered = None;
        for k in 1..primes.len() {
            // accept only what the next prime confirms
            if let Ok(r) = farey(&acc, &modulus) {
                let p = primes[k];
                let den = p.from_bigint(r.denom());
                if den != 0 && p.from_bigint(r.numer()) == p.mul(residue(p), den) {
                    if r != truth {
                        wrong_accepts += 1;
                    }
                    recovered.get_or_insert(r);
                }
            }
            acc = crt_pair(&acc, &modulus, residue(primes[k]), primes[k]);
            modulus *= BigInt::from(primes[k].get());
            let (n, d) = farey_bounds(&modulus);
            let in_bounds = truth.numer().magnitude() <= n.magnitude() && truth.denom() <= &d;
            if in_bounds && farey(&acc, &modulus).ok() != Some(truth.clone()) {
                wrong_accepts += 1;
            }
        }
        if recovered == Some(truth) {
            exact += 1;
        }
    }
    let pass = exact == FAREY_CASES && wrong_accepts == 0;
    report(
        4,
        "farey/crt round trip",
        pass,
        &format!("{exact}/{FAREY_CASES} exact with |a|, b < 2^{FAREY_BITS}, {wrong_accepts} wrong reconstructions"),
    );
    assert!(pass);
}

fn random_modpoly(rng: &mut ChaCha8Rng, p: Prime, nvars: usize, d: u16) -> ModPoly {
    let mut terms = Vec::new();
    let mut exps = vec![0u16; nvars];
    fn walk(rng: &mut ChaCha8Rng, p: Prime, i: usize, left: u16, exps: &mut Vec<u16>, out: &mut Vec<(Monomial, u64)>) {
        if i == exps.len() {
            out.push((Monomial::new(exps.clone()), rng.gen_range(1..p.get())));
            return;
        }
        for e in 0..=left {
            exps[i] = e;
            walk(rng, p, i + 1, left - e, exps, out);
        }
        exps[i] = 0;
    }
    walk(rng, p, 0, d, &mut exps, &mut terms);
    ModPoly::from_terms(nvars, p, terms)
}

fn modpoly_from(p: Prime, c: &[u64]) -> UniModPoly {
    UniModPoly::new(p, c.to_vec())
}

#[test]
fn criterion_05_berlekamp_massey_vs_kernel_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let shapes: Vec<Vec<u16>> = {
        let mut s = Vec::new();
        for a in 1..=6u16 {
            for b in a..=6u16 {
                if (a * b) as usize <= BM_MAX_DIM {
                    s.push(vec![a, b]);
                }
            }
        }
        s.extend([vec![2, 2, 2], vec![2, 2, 3], vec![2, 3, 3], vec![3, 3, 3], vec![2, 4, 5]]);
        s
    };
    let (mut divides, mut equal, mut max_dim) = (0usize, 0usize, 0usize);
    for _ in 0..BM_CASES {
        let p = random_prime_30(&mut rng);
        let shape = &shapes[rng.gen_range(0..shapes.len())];
        let n = shape.len();
        let gens: Vec<ModPoly> = shape.iter().map(|&d| random_modpoly(&mut rng, p, n, d)).collect();
        let (gb, _) = buchberger_modp(&gens, None).unwrap();
        let basis = quotient_basis(&gb).unwrap();
        let d = basis.dim();
        max_dim = max_dim.max(d);
        let lambda: Vec<i64> = (0..n).map(|_| rng.gen_range(-20..=20)).collect();
        let form = SepForm::new(if lambda.iter().all(|&l| l == 0) { vec![1; n] } else { lambda }).unwrap();
        let m = mult_matrix(&gb, &basis, &form);
        let columns: Vec<Vec<u64>> = (0..d).map(|j| m.column(j)).collect();
        let oracle = modpoly_from(p, &matrix_minimal_polynomial(p, &columns));
        let bm_run = |rng: &mut ChaCha8Rng| {
            let u: Vec<u64> = (0..d).map(|_| rng.gen_range(0..p.get())).collect();
            let mut v: Vec<u64> = (0..d).map(|_| rng.gen_range(0..p.get())).collect();
            let mut s = Vec::with_capacity(2 * d);
            for _ in 0..2 * d {
                s.push(p.dot(&u, &v));
                v = m.apply(&v);
            }
            berlekamp_massey_slice(p, &s)
        };
        let first = bm_run(&mut rng);
        let second = bm_run(&mut rng);
        let divides_oracle = |f: &UniModPoly| oracle.rem(f).map(|r| r.is_zero()).unwrap_or(false);
        if divides_oracle(&first) && divides_oracle(&second) {
            divides += 1;
        }
        let g = uni_gcd_modp(&first, &second);
        let lcm = first.mul(&second).divrem(&g).unwrap().0.monic();
        if lcm == oracle {
            equal += 1;
        }
    }
    let pass = divides == BM_CASES && equal == BM_CASES;
    report(
        5,
        "berlekamp-massey vs kernel oracle",
        pass,
        &format!("{divides}/{BM_CASES} divide, {equal}/{BM_CASES} equal with a second vector, dims up to {max_dim}"),
    );
    assert!(pass);
}

#[test]
fn criterion_06_hankel_solver_equivalence() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let (mut agree, mut verified, mut drawn) = (0usize, 0usize, 0usize);
    let mut cases = 0;
    while cases < HANKEL_CASES {
        drawn += 1;
        let p = random_prime_30(&mut rng);
        let d = rng.gen_range(1..=HANKEL_MAX_DIM);
        let s: Vec<u64> = (0..2 * d - 1).map(|_| rng.gen_range(0..p.get())).collect();
        let rhs: Vec<u64> = (0..d).map(|_| rng.gen_range(0..p.get())).collect();
        let sys = HankelSystem::new(p, s.clone(), d).unwrap();
        let Ok(gauss) = hankel_solve(&sys, &rhs) else {
            continue;
        };
        cases += 1;
        if hankel_solve_bezoutian(&sys, &rhs).ok().as_ref() == Some(&gauss) {
            agree += 1;
        }
        let direct: Vec<u64> = (0..d)
            .map(|j| (0..d).fold(0u64, |acc, k| p.add(acc, p.mul(s[j + k], gauss[k]))))
            .collect();
        if direct == rhs {
            verified += 1;
        }
    }
    let pass = agree == HANKEL_CASES && verified == HANKEL_CASES;
    report(
        6,
        "hankel solver equivalence",
        pass,
        &format!(
            "bezoutian == gauss bit-exact on {agree}/{HANKEL_CASES}, H x = rhs on {verified}/{HANKEL_CASES}, d <= {HANKEL_MAX_DIM}, {} singular redrawn",
            drawn - HANKEL_CASES
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_07_bad_prime_robustness() {
    // 1073741789 divides the leading coefficient of the second generator;
    // modulo 1000000007 the roots 1 and 1 + p of the first collide.
    let lc_prime = 1_073_741_789u64;
    let planted = 1_000_000_007u64;
    let text = format!(
        "vars: x, y\nx^2 - {}*x + {}\n{lc_prime}*x - y - {}",
        planted + 2,
        planted + 1,
        lc_prime - 1
    );
    let s = parse_system(&text).unwrap();
    let plain = solve_detailed(&s, &config()).unwrap();
    let mut details = vec![format!("clean run discards {:?}", plain.discards)];
    let mut pass = plain.report.all_verified();
    let lc_discard = Discard {
        prime: lc_prime,
        reason: BadPrimeReason::LeadingCoefficientVanished { generator: 1 },
    };
    let planted_discard = Discard {
        prime: planted,
        reason: BadPrimeReason::Outvoted,
    };
    for (injected, threads) in [
        (vec![lc_prime, planted], 1),
        (vec![planted, lc_prime], 4),
        (vec![planted], 2),
        (vec![lc_prime, planted, lc_prime], 3),
    ] {
        let cfg = SolveConfig { threads, ..config() };
        let out = solve_with_primes(&s, &cfg, &injected).unwrap();
        let same = out.candidate == plain.candidate;
        let logged = injected.iter().all(|p| {
            let expect = if *p == planted { &planted_discard } else { &lc_discard };
            out.discards.contains(expect)
        });
        pass &= same && logged;
        details.push(format!("inject {injected:?} on {threads} threads: same = {same}, logged = {logged}"));
    }
    report(7, "bad-prime robustness", pass, &details.join("; "));
    assert!(pass);
}

#[test]
fn criterion_08_non_radical_handling() {
    let s = parse_system("vars: x, y\nx^2\ny^2 - 1").unwrap();
    let out = solve_detailed(
        &s,
        &SolveConfig {
            isolate: true,
            ..config()
        },
    )
    .unwrap();
    let mut boxes: Vec<Vec<(Q, Q)>> = out.boxes.as_ref().unwrap().iter().map(|b| point(&b.coords)).collect();
    boxes.sort();
    let expected = vec![
        vec![(q(0, 1), q(0, 1)), (q(-1, 1), q(-1, 1))],
        vec![(q(0, 1), q(0, 1)), (q(1, 1), q(1, 1))],
    ];
    let pass = out.candidate.dim == 2 && boxes == expected && out.report.all_verified() && out.report.radicalized;
    report(
        8,
        "non-radical handling",
        pass,
        &format!(
            "d = {}, solutions (0, +-1) exact = {}, certified = {}, radicalized = {}",
            out.candidate.dim,
            boxes == expected,
            out.report.all_verified(),
            out.report.radicalized
        ),
    );
    assert!(pass);
}

fn perturb(rng: &mut ChaCha8Rng, c: &RurCandidate) -> (RurCandidate, String) {
    let mut c = c.clone();
    let bump = |rng: &mut ChaCha8Rng, p: &UniIntPoly, len: usize| -> (UniIntPoly, usize) {
        let mut coeffs = p.coeffs().to_vec();
        coeffs.resize(coeffs.len().max(len), BigInt::zero());
        let i = rng.gen_range(0..coeffs.len());
        let delta = rng.gen_range(1..=1000i64) * if rng.gen_bool(0.5) { 1 } else { -1 };
        coeffs[i] += delta;
        (UniIntPoly::new(coeffs), i)
    };
    let n = c.q.len();
    let what = match rng.gen_range(0..5) {
        0 => {
            let (m, i) = bump(rng, &c.m, c.dim + 1);
            c.m = m;
            format!("m[{i}]")
        }
        1 => {
            let v = rng.gen_range(0..n);
            let (qv, i) = bump(rng, &c.q[v], c.dim);
            c.q[v] = qv;
            format!("Q{v}[{i}]")
        }
        2 => {
            let v = rng.gen_range(0..n);
            c.q_den[v] += rng.gen_range(1..=1000u32);
            format!("q{v}")
        }
        3 => {
            let (dm, i) = bump(rng, &c.dm, c.dim);
            c.dm = dm;
            format!("D[{i}]")
        }
        _ => {
            c.dm_den += rng.gen_range(1..=1000u32);
            "d".to_string()
        }
    };
    (c, what)
}

#[test]
fn criterion_09_certification_negative_control() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let systems = [toy(), katsura(4)];
    let rurs: Vec<RurCandidate> = systems.iter().map(|s| solve_detailed(s, &config()).unwrap().candidate).collect();
    let mut false_verifications = Vec::new();
    for k in 0..PERTURBATIONS {
        let which = k % systems.len();
        let (bad, what) = perturb(&mut rng, &rurs[which]);
        let any_failed = sepform_identity_check(&bad) != CheckOutcome::Verified
            || systems[which]
                .generators()
                .iter()
                .any(|eq| substitute_check(eq, &bad) != CheckOutcome::Verified);
        if !any_failed {
            false_verifications.push(format!("system {which} {what}"));
        }
    }
    let pass = false_verifications.is_empty();
    report(
        9,
        "certification negative control",
        pass,
        &format!("{PERTURBATIONS} perturbations, {} false verifications {:?}", false_verifications.len(), false_verifications),
    );
    assert!(pass);
}

#[test]
fn criterion_10_determinism() {
    let s = katsura(5);
    let cfg = SolveConfig {
        threads: 4,
        seed: 7,
        isolate: true,
        ..SolveConfig::default()
    };
    let render = || {
        let out = solve_detailed(&s, &cfg).unwrap();
        emit_result(s.variables(), &out.candidate, &out.report, &out.discards, out.boxes.as_deref(), cfg.precision)
    };
    let first = render();
    let second = render();
    let pass = first == second;
    report(
        10,
        "determinism",
        pass,
        &format!("katsura(5), seed 7, 4 threads: {} bytes, identical = {pass}", first.len()),
    );
    assert!(pass);
}

#[test]
fn structural_errors_surface() {
    let empty = parse_system("vars: x\nx - 1\nx - 2").unwrap();
    assert_eq!(solve_detailed(&empty, &config()).unwrap_err(), RurError::EmptyVariety);
}
