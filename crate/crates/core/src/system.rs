//! Polynomial systems and their text format.
//!
//! ```text
//! file   = { comment | blank } header { generator | comment | blank }
//! header = "vars:" ident { "," ident }
//! generator = expr                      (one per line)
//! expr   = [ "+" | "-" ] term { ( "+" | "-" ) term }
//! term   = factor { ( "*" | "/" ) factor }     (divisors must be constants)
//! factor = atom [ "^" integer ]
//! atom   = integer | ident | "(" expr ")"
//! comment = "#" ...
//! ```

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::driver::clear_denominators;
use crate::error::{Result, RurError};
use crate::polyarith::{IntPoly, Monomial};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolySystem {
    variables: Vec<String>,
    generators: Vec<IntPoly>,
}

impl PolySystem {
    pub fn new(variables: Vec<String>, generators: Vec<IntPoly>) -> Result<PolySystem> {
        if variables.is_empty() {
            return Err(RurError::Usage("no variables declared".into()));
        }
        if generators.is_empty() {
            return Err(RurError::Usage("empty system".into()));
        }
        for (k, g) in generators.iter().enumerate() {
            if g.nvars() != variables.len() {
                return Err(RurError::Usage(format!("generator {k} has the wrong variable count")));
            }
            if g.is_zero() {
                return Err(RurError::Usage(format!("generator {k} is identically zero")));
            }
        }
        Ok(PolySystem {
            variables,
            generators,
        })
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn generators(&self) -> &[IntPoly] {
        &self.generators
    }

    pub fn nvars(&self) -> usize {
        self.variables.len()
    }

    /// Maximum total degree over the generators.
    pub fn total_degree(&self) -> u32 {
        self.generators.iter().map(|g| g.total_degree()).max().unwrap_or(0)
    }

    /// Renders the system in the input grammar.
    pub fn to_text(&self) -> String {
        let mut s = format!("vars: {}\n", self.variables.join(", "));
        for g in &self.generators {
            s.push_str(&g.display_with(&self.variables));
            s.push('\n');
        }
        s
    }
}

type RatPoly = BTreeMap<Monomial, BigRational>;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

struct Lexer<'a> {
    line: usize,
    chars: Vec<(usize, char)>,
    src: &'a str,
}

impl<'a> Lexer<'a> {
    fn tokens(&self) -> Result<Vec<(usize, Tok)>> {
        let mut out = Vec::new();
        let mut i = 0;
        let c = &self.chars;
        while i < c.len() {
            let (col, ch) = c[i];
            let col = col + 1;
            match ch {
                ' ' | '\t' | '\r' => {
                    i += 1;
                    continue;
                }
                '+' => out.push((col, Tok::Plus)),
                '-' => out.push((col, Tok::Minus)),
                '*' => out.push((col, Tok::Star)),
                '/' => out.push((col, Tok::Slash)),
                '^' => out.push((col, Tok::Caret)),
                '(' => out.push((col, Tok::LParen)),
                ')' => out.push((col, Tok::RParen)),
                d if d.is_ascii_digit() => {
                    let start = i;
                    while i < c.len() && c[i].1.is_ascii_digit() {
                        i += 1;
                    }
                    let text: String = c[start..i].iter().map(|x| x.1).collect();
                    out.push((col, Tok::Num(text.parse().expect("digits"))));
                    continue;
                }
                a if a.is_alphabetic() || a == '_' => {
                    let start = i;
                    while i < c.len() && (c[i].1.is_alphanumeric() || c[i].1 == '_') {
                        i += 1;
                    }
                    let text: String = c[start..i].iter().map(|x| x.1).collect();
                    out.push((col, Tok::Ident(text)));
                    continue;
                }
                other => return Err(self.err(col, format!("unexpected character '{other}'"))),
            }
            i += 1;
        }
        Ok(out)
    }

    fn err(&self, column: usize, message: String) -> RurError {
        let _ = self.src;
        RurError::Parse {
            line: self.line,
            column,
            message,
        }
    }
}

struct Parser<'v> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    line: usize,
    end_col: usize,
    vars: &'v [String],
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.1)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end_col, |t| t.0)
    }

    fn err(&self, message: impl Into<String>) -> RurError {
        RurError::Parse {
            line: self.line,
            column: self.col(),
            message: message.into(),
        }
    }

    fn nvars(&self) -> usize {
        self.vars.len()
    }

    fn expr(&mut self) -> Result<RatPoly> {
        let mut acc = RatPoly::new();
        let mut sign = match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                -1
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                1
            }
            _ => 1,
        };
        loop {
            let t = self.term()?;
            add_scaled(&mut acc, &t, sign);
            match self.peek() {
                Some(Tok::Plus) => sign = 1,
                Some(Tok::Minus) => sign = -1,
                _ => return Ok(acc),
            }
            self.pos += 1;
        }
    }

    fn term(&mut self) -> Result<RatPoly> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    let f = self.factor()?;
                    acc = mul(&acc, &f);
                }
                Some(Tok::Slash) => {
                    self.pos += 1;
                    let f = self.factor()?;
                    let c = as_constant(&f, self.nvars()).ok_or_else(|| self.err("division by a non-constant"))?;
                    if c.is_zero() {
                        return Err(self.err("division by zero"));
                    }
                    for v in acc.values_mut() {
                        *v /= c.clone();
                    }
                }
                Some(Tok::Ident(_)) | Some(Tok::Num(_)) | Some(Tok::LParen) => {
                    return Err(self.err("implicit multiplication is not allowed, use '*'"));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<RatPoly> {
        let base = self.atom()?;
        if self.peek() == Some(&Tok::Caret) {
            self.pos += 1;
            let e = match self.peek() {
                Some(Tok::Num(n)) => u32::try_from(n.clone()).map_err(|_| self.err("exponent too large"))?,
                _ => return Err(self.err("expected a non-negative integer exponent")),
            };
            self.pos += 1;
            let mut acc = constant(self.nvars(), BigRational::one());
            for _ in 0..e {
                acc = mul(&acc, &base);
            }
            return Ok(acc);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<RatPoly> {
        let n = self.nvars();
        match self.peek().cloned() {
            Some(Tok::Num(v)) => {
                self.pos += 1;
                Ok(constant(n, BigRational::from_integer(v)))
            }
            Some(Tok::Ident(name)) => {
                let Some(i) = self.vars.iter().position(|v| *v == name) else {
                    return Err(self.err(format!("undeclared variable '{name}'")));
                };
                self.pos += 1;
                let mut p = RatPoly::new();
                p.insert(Monomial::var(n, i), BigRational::one());
                Ok(p)
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(&Tok::RParen) {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(t) => Err(self.err(format!("unexpected token {t:?}"))),
            None => Err(self.err("unexpected end of line")),
        }
    }
}

fn constant(nvars: usize, c: BigRational) -> RatPoly {
    let mut p = RatPoly::new();
    if !c.is_zero() {
        p.insert(Monomial::one(nvars), c);
    }
    p
}

fn as_constant(p: &RatPoly, nvars: usize) -> Option<BigRational> {
    match p.len() {
        0 => Some(BigRational::zero()),
        1 => p.get(&Monomial::one(nvars)).cloned(),
        _ => None,
    }
}

fn add_scaled(acc: &mut RatPoly, t: &RatPoly, sign: i32) {
    for (m, c) in t {
        let e = acc.entry(m.clone()).or_insert_with(BigRational::zero);
        if sign < 0 {
            *e -= c;
        } else {
            *e += c;
        }
        if e.is_zero() {
            acc.remove(m);
        }
    }
}

fn mul(a: &RatPoly, b: &RatPoly) -> RatPoly {
    let mut out = RatPoly::new();
    for (ma, ca) in a {
        for (mb, cb) in b {
            *out.entry(ma.mul(mb)).or_insert_with(BigRational::zero) += ca * cb;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn is_ident(s: &str) -> bool {
    let mut ch = s.chars();
    matches!(ch.next(), Some(c) if c.is_alphabetic() || c == '_') && ch.all(|c| c.is_alphanumeric() || c == '_')
}

/// Parses a system; rational coefficients are cleared generator by generator.
pub fn parse_system(text: &str) -> Result<PolySystem> {
    let mut vars: Option<Vec<String>> = None;
    let mut gens = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line_no = k + 1;
        let line = raw.split('#').next().unwrap_or("");
        if line.trim().is_empty() {
            continue;
        }
        match &vars {
            None => {
                let trimmed = line.trim_start();
                let Some(rest) = trimmed.strip_prefix("vars:") else {
                    return Err(RurError::Parse {
                        line: line_no,
                        column: raw.len() - trimmed.len() + 1,
                        message: "expected a 'vars:' declaration".into(),
                    });
                };
                let names: Vec<String> = rest.split(',').map(|s| s.trim().to_string()).collect();
                let offset = raw.len() - rest.len();
                for n in &names {
                    if !is_ident(n) {
                        return Err(RurError::Parse {
                            line: line_no,
                            column: offset + 1,
                            message: format!("invalid variable name '{n}'"),
                        });
                    }
                }
                let mut seen = std::collections::HashSet::new();
                if let Some(dup) = names.iter().find(|n| !seen.insert(n.as_str())) {
                    return Err(RurError::Parse {
                        line: line_no,
                        column: offset + 1,
                        message: format!("variable '{dup}' declared twice"),
                    });
                }
                vars = Some(names);
            }
            Some(names) => {
                let lexer = Lexer {
                    line: line_no,
                    chars: line.chars().enumerate().collect(),
                    src: line,
                };
                let toks = lexer.tokens()?;
                let mut parser = Parser {
                    toks,
                    pos: 0,
                    line: line_no,
                    end_col: line.chars().count() + 1,
                    vars: names,
                };
                let p = parser.expr()?;
                if parser.pos != parser.toks.len() {
                    return Err(parser.err("unexpected trailing input"));
                }
                if p.is_empty() {
                    return Err(RurError::Parse {
                        line: line_no,
                        column: 1,
                        message: "generator is identically zero".into(),
                    });
                }
                gens.push(clear_denominators(names.len(), p.into_iter().collect()));
            }
        }
    }
    let vars = vars.ok_or_else(|| RurError::Usage("empty system: missing 'vars:' line".into()))?;
    if gens.is_empty() {
        return Err(RurError::Usage("empty system: no generators".into()));
    }
    PolySystem::new(vars, gens)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn toy_system_parses() {
        let s = parse_system("vars: x,y\nx + y - 3\nx*y - 2").unwrap();
        assert_eq!(s.variables(), &["x".to_string(), "y".to_string()]);
        assert_eq!(s.generators().len(), 2);
        assert_eq!(s.generators()[1].display_with(s.variables()), "x*y - 2");
    }

    #[test]
    fn undeclared_variable() {
        let e = parse_system("vars: x\ny - 1").unwrap_err();
        match e {
            RurError::Parse { line, column, message } => {
                assert_eq!((line, column), (2, 1));
                assert!(message.contains("undeclared variable 'y'"));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn rational_coefficients_are_cleared() {
        let s = parse_system("vars: x\nx^2/2 - 1/3").unwrap();
        assert_eq!(s.generators()[0].display_with(s.variables()), "3*x^2 - 2");
    }

    #[test]
    fn implicit_multiplication_rejected() {
        assert!(matches!(parse_system("vars: x\n2x - 1"), Err(RurError::Parse { column: 2, .. })));
    }

    #[test]
    fn parentheses_and_powers() {
        let s = parse_system("vars: x, y\n(x + y)^2 - (x - y)^2").unwrap();
        assert_eq!(s.generators()[0].display_with(s.variables()), "4*x*y");
    }

    #[test]
    fn empty_system() {
        assert!(matches!(parse_system("vars: x\n"), Err(RurError::Usage(_))));
        assert!(matches!(parse_system(""), Err(RurError::Usage(_))));
    }
}
