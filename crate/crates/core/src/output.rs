//! The JSON result document.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::certify::{CertReport, CertStatus};
use crate::driver::{Discard, RurCandidate};
use crate::polyarith::UniIntPoly;
use crate::realroots::{RatInterval, SolutionBox};

#[derive(Serialize)]
struct Document<'a> {
    variables: &'a [String],
    form: Vec<String>,
    dimension: usize,
    primes: usize,
    radicalized: bool,
    m: Vec<String>,
    parametrization: Vec<Fraction<'a>>,
    derivative: Fraction<'a>,
    certification: Certification,
    discards: Vec<DiscardDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    boxes: Option<Vec<BoxDoc>>,
}

#[derive(Serialize)]
struct Fraction<'a> {
    #[serde(skip_serializing_if = "Option::is_none")]
    variable: Option<&'a str>,
    numerator: Vec<String>,
    denominator: String,
}

#[derive(Serialize)]
#[serde(untagged)]
enum Certification {
    Skipped(&'static str),
    Checked(CheckedDoc),
}

#[derive(Serialize)]
struct CheckedDoc {
    mode: u32,
    all_verified: bool,
    sepform_identity: StatusDoc,
    equations: Vec<EquationDoc>,
}

#[derive(Serialize)]
struct StatusDoc {
    status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    residual: Option<Vec<String>>,
}

#[derive(Serialize)]
struct EquationDoc {
    index: usize,
    degree: u32,
    monomials: usize,
    #[serde(flatten)]
    status: StatusDoc,
}

#[derive(Serialize)]
struct DiscardDoc {
    prime: String,
    reason: String,
}

#[derive(Serialize)]
struct IntervalDoc {
    lo: String,
    hi: String,
}

#[derive(Serialize)]
struct BoxDoc {
    root: IntervalDoc,
    exact: bool,
    coordinates: Vec<IntervalDoc>,
}

fn ints(p: &UniIntPoly) -> Vec<String> {
    if p.is_zero() {
        return vec!["0".into()];
    }
    p.coeffs().iter().map(|c| c.to_string()).collect()
}

fn status(s: &CertStatus) -> StatusDoc {
    StatusDoc {
        status: s.as_str(),
        residual: match s {
            CertStatus::Failed { residual } => Some(ints(residual)),
            _ => None,
        },
    }
}

/// Decimal digits that resolve a width of `2^-precision`.
pub fn decimal_digits(precision: u32) -> usize {
    (f64::from(precision) * std::f64::consts::LOG10_2).ceil() as usize + 1
}

/// `x` with `digits` fractional digits, rounded toward minus infinity
/// (`ceil = false`) or plus infinity; trailing zeros dropped.
pub fn decimal_string(x: &BigRational, digits: usize, ceil: bool) -> String {
    let scale = BigInt::from(10u32).pow(digits as u32);
    let scaled = x * BigRational::from_integer(scale.clone());
    let n = if ceil { scaled.ceil() } else { scaled.floor() }.to_integer();
    let (int, frac) = n.abs().div_rem(&scale);
    let sign = if n.is_negative() { "-" } else { "" };
    if frac.is_zero() {
        return format!("{sign}{int}");
    }
    let frac = format!("{:0>width$}", frac.to_string(), width = digits);
    format!("{sign}{int}.{}", frac.trim_end_matches('0'))
}

fn interval(iv: &RatInterval, digits: usize) -> IntervalDoc {
    IntervalDoc {
        lo: decimal_string(&iv.lo, digits, false),
        hi: decimal_string(&iv.hi, digits, true),
    }
}

/// Renders the solver's result as pretty-printed JSON. Boxes are written
/// with outward rounding, so each decimal interval contains the exact one.
pub fn emit_result(
    variables: &[String],
    rur: &RurCandidate,
    report: &CertReport,
    discards: &[Discard],
    boxes: Option<&[SolutionBox]>,
    precision: u32,
) -> String {
    let digits = decimal_digits(precision);
    let certification = if report.all_skipped() {
        Certification::Skipped("skipped")
    } else {
        Certification::Checked(CheckedDoc {
            mode: report.mode,
            all_verified: report.all_verified(),
            sepform_identity: status(&report.sepform_identity),
            equations: report
                .equations
                .iter()
                .enumerate()
                .map(|(index, e)| EquationDoc {
                    index,
                    degree: e.degree,
                    monomials: e.monomials,
                    status: status(&e.status),
                })
                .collect(),
        })
    };
    let doc = Document {
        variables,
        form: rur.form.lambda().iter().map(|l| l.to_string()).collect(),
        dimension: rur.dim,
        primes: rur.primes,
        radicalized: rur.radicalized,
        m: ints(&rur.m),
        parametrization: variables
            .iter()
            .zip(rur.q.iter().zip(&rur.q_den))
            .map(|(v, (q, den))| Fraction {
                variable: Some(v),
                numerator: ints(q),
                denominator: den.to_string(),
            })
            .collect(),
        derivative: Fraction {
            variable: None,
            numerator: ints(&rur.dm),
            denominator: rur.dm_den.to_string(),
        },
        certification,
        discards: discards
            .iter()
            .map(|d| DiscardDoc {
                prime: d.prime.to_string(),
                reason: d.reason.to_string(),
            })
            .collect(),
        boxes: boxes.map(|bs| {
            bs.iter()
                .map(|b| BoxDoc {
                    root: interval(&b.root.as_interval(), digits),
                    exact: b.root.exact,
                    coordinates: b.coords.iter().map(|c| interval(c, digits)).collect(),
                })
                .collect()
        }),
    };
    let mut text = serde_json::to_string_pretty(&doc).expect("serializable document");
    text.push('\n');
    text
}
