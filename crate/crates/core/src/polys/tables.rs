//! Parser and container for the printed coefficient tables.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use crate::arith::{ExactRational, MultiPoly, UniPoly, Var};

const BUILTIN: &str = include_str!("../../data/tables.txt");

pub const X: Var = Var('x');
pub const Y: Var = Var('y');
pub const H: Var = Var('h');
pub const K: Var = Var('k');
pub const T: Var = Var('t');

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TableError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("{entry}: unexpected variable '{var}'")]
    Variable { entry: String, var: char },
    #[error("unknown entry `{0}`")]
    UnknownEntry(String),
    #[error("entry `{0}` given twice")]
    Duplicate(String),
    #[error("missing entry `{0}`")]
    Missing(String),
    #[error("{entry}: degree {found} exceeds {max}")]
    Degree { entry: String, found: u32, max: u32 },
}

/// Name of one table entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Entry {
    Zeta(usize),
    Xi(usize),
    Phi(usize),
    Nu(usize),
    Mu(usize),
    C,
    F1,
    F2,
}

impl fmt::Display for Entry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Entry::Zeta(i) => write!(f, "zeta[{i}]"),
            Entry::Xi(i) => write!(f, "xi[{i}]"),
            Entry::Phi(i) => write!(f, "phi[{i}]"),
            Entry::Nu(i) => write!(f, "nu[{i}]"),
            Entry::Mu(i) => write!(f, "mu[{i}]"),
            Entry::C => write!(f, "c"),
            Entry::F1 => write!(f, "F1"),
            Entry::F2 => write!(f, "F2"),
        }
    }
}

/// Every printed table, read from a single data file.
///
/// `zeta` is in `x`, `xi` in `h`, `phi`, `nu` and `mu` in `t`, and `F1`,
/// `F2` in `(h, t)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoefficientTables {
    pub zeta: Vec<UniPoly>,
    pub xi: Vec<UniPoly>,
    pub phi: Vec<UniPoly>,
    pub nu: Vec<UniPoly>,
    pub mu: Vec<UniPoly>,
    pub c: Vec<ExactRational>,
    pub f1: MultiPoly,
    pub f2: MultiPoly,
}

const COUNTS: [(&str, usize, Option<u32>); 5] = [
    ("zeta", 10, Some(8)),
    ("xi", 10, None),
    ("phi", 6, Some(9)),
    ("nu", 6, Some(9)),
    ("mu", 15, Some(25)),
];

impl CoefficientTables {
    /// The tables shipped with the crate. Parsed once.
    pub fn builtin() -> &'static CoefficientTables {
        static CELL: OnceLock<CoefficientTables> = OnceLock::new();
        CELL.get_or_init(|| CoefficientTables::parse(BUILTIN).expect("shipped tables parse"))
    }

    pub fn builtin_text() -> &'static str {
        BUILTIN
    }

    pub fn parse(text: &str) -> Result<CoefficientTables, TableError> {
        let mut raw: BTreeMap<String, (usize, String)> = BTreeMap::new();
        let mut current: Option<String> = None;
        for (no, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("");
            if line.trim().is_empty() {
                continue;
            }
            if line.starts_with(char::is_whitespace) {
                let key = current.as_ref().ok_or_else(|| TableError::Syntax {
                    line: no + 1,
                    msg: "continuation before any entry".into(),
                })?;
                let slot = raw.get_mut(key).expect("current entry exists");
                slot.1.push(' ');
                slot.1.push_str(line.trim());
                continue;
            }
            let (name, body) = line.split_once('=').ok_or_else(|| TableError::Syntax {
                line: no + 1,
                msg: "expected `name = expression`".into(),
            })?;
            let name: String = name.chars().filter(|c| !c.is_whitespace()).collect();
            if raw.contains_key(&name) {
                return Err(TableError::Duplicate(name));
            }
            raw.insert(name.clone(), (no + 1, body.trim().to_string()));
            current = Some(name);
        }

        let mut take = |name: &str| raw.remove(name).ok_or_else(|| TableError::Missing(name.into()));
        let mut families: BTreeMap<&str, Vec<UniPoly>> = BTreeMap::new();
        for (family, count, max_deg) in COUNTS {
            let (var, pair) = match family {
                "zeta" => (X, [X, Y]),
                "xi" => (H, [H, K]),
                _ => (T, [H, T]),
            };
            let mut polys = Vec::with_capacity(count);
            for i in 0..count {
                let name = format!("{family}[{i}]");
                let (line, body) = take(&name)?;
                let p = parse_poly(&body, pair, &[var], &name, line)?;
                let u = p.to_unipoly(var).expect("single variable");
                if let (Some(max), Some(d)) = (max_deg, u.degree()) {
                    if d as u32 > max {
                        return Err(TableError::Degree { entry: name, found: d as u32, max });
                    }
                }
                polys.push(u);
            }
            families.insert(family, polys);
        }
        let (line, body) = take("c")?;
        let c = parse_list(&body, line)?;
        if c.len() != 10 {
            return Err(TableError::Syntax { line, msg: format!("c has {} entries, expected 10", c.len()) });
        }
        let mut bivariate = |name: &str| -> Result<MultiPoly, TableError> {
            let (line, body) = take(name)?;
            let p = parse_poly(&body, [H, T], &[H, T], name, line)?;
            let d = p.degree_in(H).unwrap_or(0);
            if d > 13 {
                return Err(TableError::Degree { entry: name.into(), found: d, max: 13 });
            }
            Ok(p)
        };
        let f1 = bivariate("F1")?;
        let f2 = bivariate("F2")?;
        if let Some(extra) = raw.keys().next() {
            return Err(TableError::UnknownEntry(extra.clone()));
        }
        let mut fam = |k: &str| families.remove(k).expect("family parsed");
        Ok(CoefficientTables {
            zeta: fam("zeta"),
            xi: fam("xi"),
            phi: fam("phi"),
            nu: fam("nu"),
            mu: fam("mu"),
            c,
            f1,
            f2,
        })
    }

    /// Every coefficient position that carries a printed nonzero value. For
    /// univariate entries the exponent is `.0`; for `c` it is the index.
    pub fn coefficient_sites(&self) -> Vec<(Entry, (u32, u32))> {
        let mut out = Vec::new();
        let mut uni = |e: fn(usize) -> Entry, polys: &[UniPoly]| {
            for (i, p) in polys.iter().enumerate() {
                for (k, c) in p.coeffs().iter().enumerate() {
                    if !c.is_zero() {
                        out.push((e(i), (k as u32, 0)));
                    }
                }
            }
        };
        uni(Entry::Zeta, &self.zeta);
        uni(Entry::Xi, &self.xi);
        uni(Entry::Phi, &self.phi);
        uni(Entry::Nu, &self.nu);
        uni(Entry::Mu, &self.mu);
        out.extend((0..self.c.len()).map(|k| (Entry::C, (k as u32, 0))));
        out.extend(self.f1.terms().map(|(e, _)| (Entry::F1, *e)));
        out.extend(self.f2.terms().map(|(e, _)| (Entry::F2, *e)));
        out
    }

    /// Copy with one coefficient shifted by `delta`.
    pub fn perturbed(&self, entry: Entry, term: (u32, u32), delta: &ExactRational) -> CoefficientTables {
        let mut t = self.clone();
        let bump_uni = |p: &mut UniPoly| {
            let mut c = p.coeffs().to_vec();
            let k = term.0 as usize;
            if c.len() <= k {
                c.resize(k + 1, ExactRational::zero());
            }
            c[k] += delta;
            *p = UniPoly::new(c);
        };
        let bump_multi = |p: &mut MultiPoly| {
            let add = MultiPoly::from_terms(p.vars(), [(term, delta.clone())]);
            *p = &*p + &add;
        };
        match entry {
            Entry::Zeta(i) => bump_uni(&mut t.zeta[i]),
            Entry::Xi(i) => bump_uni(&mut t.xi[i]),
            Entry::Phi(i) => bump_uni(&mut t.phi[i]),
            Entry::Nu(i) => bump_uni(&mut t.nu[i]),
            Entry::Mu(i) => bump_uni(&mut t.mu[i]),
            Entry::C => t.c[term.0 as usize] += delta,
            Entry::F1 => bump_multi(&mut t.f1),
            Entry::F2 => bump_multi(&mut t.f2),
        }
        t
    }

    /// `P = sum mu_j(t) h^j`.
    pub fn p_poly(&self) -> MultiPoly {
        sum_in_h(&self.mu)
    }

    /// `S = sum nu_j(t) h^j`.
    pub fn s_poly(&self) -> MultiPoly {
        sum_in_h(&self.nu)
    }

    /// `rho = sum phi_i(t) h^i`.
    pub fn rho_poly(&self) -> MultiPoly {
        sum_in_h(&self.phi)
    }

    /// `p(h, k) = -sum xi_i(h) k^i`.
    pub fn p_from_xi(&self) -> MultiPoly {
        let mut out = MultiPoly::zero([H, K]);
        for (i, xi) in self.xi.iter().enumerate() {
            let lifted = MultiPoly::from_unipoly([H, K], H, xi);
            let ki = MultiPoly::var([H, K], K).pow(i as u32);
            out = &out - &(&lifted * &ki);
        }
        out
    }
}

fn sum_in_h(coeffs: &[UniPoly]) -> MultiPoly {
    let mut out = MultiPoly::zero([H, T]);
    for (j, c) in coeffs.iter().enumerate() {
        let lifted = MultiPoly::from_unipoly([H, T], T, c);
        out = &out + &(&lifted * &MultiPoly::var([H, T], H).pow(j as u32));
    }
    out
}

fn parse_list(body: &str, line: usize) -> Result<Vec<ExactRational>, TableError> {
    body.split(',')
        .map(|s| {
            let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
            s.parse::<BigInt>().map(ExactRational::from_integer).map_err(|_| TableError::Syntax {
                line,
                msg: format!("bad integer `{s}`"),
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Var(char),
    Plus,
    Minus,
    Star,
    Caret,
    Open,
    Close,
}

fn tokenize(s: &str, line: usize) -> Result<Vec<Tok>, TableError> {
    let mut out = Vec::new();
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            _ if c.is_whitespace() => {}
            '0'..='9' => {
                let start = i;
                while i + 1 < chars.len() && chars[i + 1].is_ascii_digit() {
                    i += 1;
                }
                let digits: String = chars[start..=i].iter().collect();
                out.push(Tok::Int(digits.parse().expect("digits")));
            }
            'a'..='z' | 'A'..='Z' => out.push(Tok::Var(c)),
            '+' => out.push(Tok::Plus),
            '-' => out.push(Tok::Minus),
            '*' => out.push(Tok::Star),
            '^' => out.push(Tok::Caret),
            '(' => out.push(Tok::Open),
            ')' => out.push(Tok::Close),
            _ => return Err(TableError::Syntax { line, msg: format!("unexpected character '{c}'") }),
        }
        i += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    pair: [Var; 2],
    allowed: &'a [Var],
    name: &'a str,
    line: usize,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> TableError {
        TableError::Syntax { line: self.line, msg: format!("{}: {msg} at token {}", self.name, self.pos) }
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn expr(&mut self) -> Result<MultiPoly, TableError> {
        let mut acc = MultiPoly::zero(self.pair);
        let mut first = true;
        loop {
            let negate = match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    false
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    true
                }
                _ if first => false,
                _ => break,
            };
            first = false;
            let term = self.term()?;
            acc = if negate { &acc - &term } else { &acc + &term };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<MultiPoly, TableError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => self.pos += 1,
                Some(Tok::Int(_) | Tok::Var(_) | Tok::Open) => {}
                _ => break,
            }
            let f = self.factor()?;
            acc = &acc * &f;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<MultiPoly, TableError> {
        let base = self.primary()?;
        if self.peek() == Some(&Tok::Caret) {
            self.pos += 1;
            match self.toks.get(self.pos).cloned() {
                Some(Tok::Int(e)) => {
                    self.pos += 1;
                    let e: u32 = e.try_into().map_err(|_| self.err("exponent too large"))?;
                    return Ok(base.pow(e));
                }
                _ => return Err(self.err("expected integer exponent")),
            }
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<MultiPoly, TableError> {
        match self.toks.get(self.pos).cloned() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                Ok(MultiPoly::constant(self.pair, ExactRational::from_integer(n)))
            }
            Some(Tok::Var(c)) => {
                self.pos += 1;
                let v = Var(c);
                if !self.allowed.contains(&v) {
                    return Err(TableError::Variable { entry: self.name.into(), var: c });
                }
                Ok(MultiPoly::var(self.pair, v))
            }
            Some(Tok::Open) => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(&Tok::Close) {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            _ => Err(self.err("expected a number, variable or '('")),
        }
    }
}

/// Parses an integer polynomial written with implicit multiplication.
pub fn parse_poly(
    text: &str,
    pair: [Var; 2],
    allowed: &[Var],
    name: &str,
    line: usize,
) -> Result<MultiPoly, TableError> {
    let toks = tokenize(text, line)?;
    if toks.is_empty() {
        return Err(TableError::Syntax { line, msg: format!("{name}: empty expression") });
    }
    let mut p = Parser { toks, pos: 0, pair, allowed, name, line };
    let out = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(p.err("trailing input"));
    }
    Ok(out)
}
