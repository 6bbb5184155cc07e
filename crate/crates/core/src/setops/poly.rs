//! Integer polynomials in variables `v1, v2, ...` and their images on sets.
//!
//! Grammar (whitespace ignored):
//!
//! ```text
//! expr  = term { ("+" | "-") term } ;
//! term  = unary { "*" unary } ;
//! unary = "-" unary | power ;
//! power = atom [ "^" uint ] ;
//! atom  = "v" uint | uint | "(" expr ")" ;
//! ```
//!
//! Variable indices start at 1. Literals are capped at `2^31`, exponents at
//! 64, nesting depth at 64.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::field::{Elem, FSet, PrimeField};

const MAX_COEFF: u64 = 1 << 31;
const MAX_EXP: u32 = 64;
const MAX_DEPTH: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PolyExpr {
    Var(usize),
    Const(i64),
    Neg(Box<PolyExpr>),
    Add(Box<PolyExpr>, Box<PolyExpr>),
    Sub(Box<PolyExpr>, Box<PolyExpr>),
    Mul(Box<PolyExpr>, Box<PolyExpr>),
    Pow(Box<PolyExpr>, u32),
}

impl PolyExpr {
    pub fn parse(src: &str) -> Result<Self> {
        let mut p = Parser {
            chars: src.chars().filter(|c| !c.is_whitespace()).collect(),
            pos: 0,
            depth: 0,
        };
        let e = p.expr()?;
        if p.pos != p.chars.len() {
            return Err(Error::Parse(format!("unexpected '{}' at {}", p.chars[p.pos], p.pos)));
        }
        if e.num_vars() == 0 {
            return Err(Error::Parse("expression has no variables".into()));
        }
        Ok(e)
    }

    /// Highest variable index used.
    pub fn num_vars(&self) -> usize {
        match self {
            PolyExpr::Var(i) => *i,
            PolyExpr::Const(_) => 0,
            PolyExpr::Neg(e) | PolyExpr::Pow(e, _) => e.num_vars(),
            PolyExpr::Add(a, b) | PolyExpr::Sub(a, b) | PolyExpr::Mul(a, b) => a.num_vars().max(b.num_vars()),
        }
    }

    /// Evaluates with `vals[i-1]` bound to `v_i`.
    pub fn eval(&self, f: PrimeField, vals: &[Elem]) -> Elem {
        match self {
            PolyExpr::Var(i) => vals[i - 1],
            PolyExpr::Const(c) => f.reduce(*c),
            PolyExpr::Neg(e) => f.neg(e.eval(f, vals)),
            PolyExpr::Add(a, b) => f.add(a.eval(f, vals), b.eval(f, vals)),
            PolyExpr::Sub(a, b) => f.sub(a.eval(f, vals), b.eval(f, vals)),
            PolyExpr::Mul(a, b) => f.mul(a.eval(f, vals), b.eval(f, vals)),
            PolyExpr::Pow(e, k) => f.pow(e.eval(f, vals), *k as u64),
        }
    }
}

impl FromStr for PolyExpr {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        PolyExpr::parse(s)
    }
}

impl fmt::Display for PolyExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PolyExpr::Var(i) => write!(f, "v{i}"),
            PolyExpr::Const(c) => write!(f, "{c}"),
            PolyExpr::Neg(e) => write!(f, "-({e})"),
            PolyExpr::Add(a, b) => write!(f, "({a} + {b})"),
            PolyExpr::Sub(a, b) => write!(f, "({a} - {b})"),
            PolyExpr::Mul(a, b) => write!(f, "({a} * {b})"),
            PolyExpr::Pow(e, k) => write!(f, "({e})^{k}"),
        }
    }
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
    depth: usize,
}

impl Parser {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<PolyExpr> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(Error::Parse("expression nested too deeply".into()));
        }
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = PolyExpr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat('-') {
                lhs = PolyExpr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                break;
            }
        }
        self.depth -= 1;
        Ok(lhs)
    }

    fn term(&mut self) -> Result<PolyExpr> {
        let mut lhs = self.unary()?;
        while self.eat('*') {
            lhs = PolyExpr::Mul(Box::new(lhs), Box::new(self.unary()?));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<PolyExpr> {
        if self.eat('-') {
            self.depth += 1;
            if self.depth > MAX_DEPTH {
                return Err(Error::Parse("expression nested too deeply".into()));
            }
            let e = PolyExpr::Neg(Box::new(self.unary()?));
            self.depth -= 1;
            return Ok(e);
        }
        let base = self.atom()?;
        if self.eat('^') {
            let k = self.uint()?;
            if k > MAX_EXP as u64 {
                return Err(Error::Parse(format!("exponent {k} exceeds {MAX_EXP}")));
            }
            return Ok(PolyExpr::Pow(Box::new(base), k as u32));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<PolyExpr> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(Error::Parse(format!("expected ')' at {}", self.pos)));
                }
                Ok(e)
            }
            Some('v') => {
                self.pos += 1;
                let i = self.uint()?;
                if i == 0 || i > 64 {
                    return Err(Error::Parse(format!("variable index {i} out of range 1..=64")));
                }
                Ok(PolyExpr::Var(i as usize))
            }
            Some(c) if c.is_ascii_digit() => {
                let c = self.uint()?;
                if c > MAX_COEFF {
                    return Err(Error::Parse(format!("coefficient {c} exceeds 2^31")));
                }
                Ok(PolyExpr::Const(c as i64))
            }
            Some(c) => Err(Error::Parse(format!("unexpected '{c}' at {}", self.pos))),
            None => Err(Error::Parse("unexpected end of input".into())),
        }
    }

    fn uint(&mut self) -> Result<u64> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::Parse(format!("expected a number at {start}")));
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.parse::<u64>()
            .map_err(|_| Error::Parse(format!("number '{s}' too large")))
    }
}

/// Exact image `{P(a_1, ..., a_m) : a_i ∈ A}`. Requires `|A|^m <= budget`.
pub fn polynomial_image(p: &PolyExpr, a: &FSet, budget: u128) -> Result<FSet> {
    let f = a.field();
    let m = p.num_vars();
    let work = (a.len() as u128).checked_pow(m as u32).unwrap_or(u128::MAX);
    if work > budget {
        return Err(Error::BudgetExceeded { needed: work, budget });
    }
    let mut out = FSet::empty(f);
    let elems = a.to_vec();
    if elems.is_empty() {
        return Ok(out);
    }
    let mut idx = vec![0usize; m];
    let mut vals = vec![elems[0]; m];
    loop {
        out.insert(p.eval(f, &vals));
        // Odometer, last variable fastest.
        let mut k = m;
        loop {
            if k == 0 {
                return Ok(out);
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < elems.len() {
                vals[k] = elems[idx[k]];
                break;
            }
            idx[k] = 0;
            vals[k] = elems[0];
        }
    }
}
