//! Built-in benchmark families.

use num_bigint::BigInt;

use crate::polyarith::{IntPoly, Monomial};
use crate::system::PolySystem;

fn names(k: usize) -> Vec<String> {
    (1..=k).map(|i| format!("x{i}")).collect()
}

/// Katsura system in `k` unknowns `x1..xk` (standing for `u_0..u_{k-1}`):
/// `u_0 + 2 sum u_i = 1` and, for `m < k-1`,
/// `sum_{l=-(k-1)}^{k-1} u_|l| u_|m-l| = u_m`.
pub fn katsura(k: usize) -> PolySystem {
    assert!(k >= 1);
    let mut gens = Vec::with_capacity(k);
    let mut lin: Vec<(Monomial, BigInt)> = (0..k)
        .map(|i| (Monomial::var(k, i), BigInt::from(if i == 0 { 1 } else { 2 })))
        .collect();
    lin.push((Monomial::one(k), BigInt::from(-1)));
    gens.push(IntPoly::from_terms(k, lin));
    let kk = k as i64;
    for m in 0..k as i64 - 1 {
        let mut terms = Vec::new();
        for l in -(kk - 1)..kk {
            let (a, b) = (l.unsigned_abs() as usize, (m - l).unsigned_abs() as usize);
            if a < k && b < k {
                let mut e = vec![0u16; k];
                e[a] += 1;
                e[b] += 1;
                terms.push((Monomial::new(e), BigInt::from(1)));
            }
        }
        terms.push((Monomial::var(k, m as usize), BigInt::from(-1)));
        gens.push(IntPoly::from_terms(k, terms));
    }
    PolySystem::new(names(k), gens).expect("katsura generators are well formed")
}

/// Noon system in `k` unknowns with denominators cleared:
/// `10 x_i sum_{j != i} x_j^2 - 11 x_i + 10`.
pub fn noon(k: usize) -> PolySystem {
    assert!(k >= 2);
    let gens = (0..k)
        .map(|i| {
            let mut terms = Vec::new();
            for j in (0..k).filter(|&j| j != i) {
                let mut e = vec![0u16; k];
                e[i] += 1;
                e[j] += 2;
                terms.push((Monomial::new(e), BigInt::from(10)));
            }
            terms.push((Monomial::var(k, i), BigInt::from(-11)));
            terms.push((Monomial::one(k), BigInt::from(10)));
            IntPoly::from_terms(k, terms)
        })
        .collect();
    PolySystem::new(names(k), gens).expect("noon generators are well formed")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn katsura_matches_published_shape() {
        let s = katsura(3);
        let shown: Vec<String> = s.generators().iter().map(|g| g.display_with(s.variables())).collect();
        assert_eq!(
            shown,
            vec![
                "x1 + 2*x2 + 2*x3 - 1",
                "x1^2 + 2*x2^2 + 2*x3^2 - x1",
                "2*x1*x2 + 2*x2*x3 - x2",
            ]
        );
    }

    #[test]
    fn noon_shape() {
        let s = noon(2);
        let shown: Vec<String> = s.generators().iter().map(|g| g.display_with(s.variables())).collect();
        assert_eq!(shown, vec!["10*x1*x2^2 - 11*x1 + 10", "10*x1^2*x2 - 11*x2 + 10"]);
    }
}
