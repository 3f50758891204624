//! Expression grammar for chart files and the command line.
//!
//! Identifiers are `b1..b{p+q}`, with `z1`, `zb1`, `zeta1`, `eps1` accepted
//! as aliases on Dolbeault-style charts. Literals are integers, rationals
//! `p/q` and the imaginary unit `i`. Operators: `+ - * ^`, `d(expr)` for
//! the exterior differential, and in vector-field component lists a
//! trailing `@j` attaches a component to `d/db^j`.

use super::form::SuperForm;
use super::{ChartSignature, Parity, SuperPolynomial, SuperVectorField};
use crate::scalars::GaussianRational;
use std::collections::BTreeMap;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("unexpected character {0:?} at byte {1}")]
    UnexpectedChar(char, usize),
    #[error("unexpected end of input")]
    UnexpectedEnd,
    #[error("unexpected token {0:?}")]
    UnexpectedToken(String),
    #[error("unknown identifier {0:?}")]
    UnknownIdentifier(String),
    #[error("exponent must be a nonnegative integer on a function")]
    BadExponent,
    #[error("expression mixes form degrees where a single degree is required")]
    MixedDegree,
    #[error("expected a form of degree {0}, found degree {1}")]
    WrongDegree(usize, usize),
    #[error("component list is not parity-homogeneous")]
    MixedParity,
    #[error("zero denominator in literal")]
    ZeroDenominator,
}

/// Variable naming for a chart.
#[derive(Debug, Clone)]
pub struct VarNames {
    sig: ChartSignature,
    names: BTreeMap<String, usize>,
}

impl VarNames {
    /// Plain chart: `b1..b{p+q}`.
    pub fn plain(sig: ChartSignature) -> Self {
        let mut names = BTreeMap::new();
        for i in 0..sig.n() {
            names.insert(format!("b{}", i + 1), i);
        }
        VarNames { sig, names }
    }

    /// Dolbeault chart with `d` base dimensions and rank `r`:
    /// `z1..zd, zb1..zbd` even, `zeta1..zetad, eps1..epsr` odd.
    pub fn dolbeault(d: usize, r: usize) -> Self {
        let sig = ChartSignature::new(2 * d, d + r);
        let mut v = VarNames::plain(sig);
        for i in 0..d {
            v.names.insert(format!("z{}", i + 1), i);
            v.names.insert(format!("zb{}", i + 1), d + i);
            v.names.insert(format!("zeta{}", i + 1), 2 * d + i);
        }
        for k in 0..r {
            v.names.insert(format!("eps{}", k + 1), 2 * d + d + k);
        }
        v
    }

    /// De Rham / parity-reversed-bundle chart: `x1..xd` even,
    /// `eps1..epsr` odd.
    pub fn pi_bundle(d: usize, r: usize) -> Self {
        let sig = ChartSignature::new(d, r);
        let mut v = VarNames::plain(sig);
        for i in 0..d {
            v.names.insert(format!("x{}", i + 1), i);
        }
        for k in 0..r {
            v.names.insert(format!("eps{}", k + 1), d + k);
        }
        v
    }

    pub fn signature(&self) -> ChartSignature {
        self.sig
    }

    fn lookup(&self, name: &str) -> Option<usize> {
        self.names.get(name).copied()
    }
}

/// An inhomogeneous form: a sum of homogeneous pieces keyed by degree.
#[derive(Debug, Clone)]
pub struct GradedExpr {
    sig: ChartSignature,
    parts: BTreeMap<usize, SuperForm>,
}

impl GradedExpr {
    fn zero(sig: ChartSignature) -> Self {
        GradedExpr { sig, parts: BTreeMap::new() }
    }

    fn from_form(f: SuperForm) -> Self {
        let sig = f.signature();
        let mut parts = BTreeMap::new();
        if !f.is_zero() {
            parts.insert(f.degree(), f);
        }
        GradedExpr { sig, parts }
    }

    fn from_poly(p: SuperPolynomial) -> Self {
        GradedExpr::from_form(SuperForm::from_fn(p))
    }

    fn add(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (d, f) in &rhs.parts {
            let e = out
                .parts
                .entry(*d)
                .or_insert_with(|| SuperForm::zero(self.sig, *d));
            *e = e.add(f);
            if e.is_zero() {
                out.parts.remove(d);
            }
        }
        out
    }

    fn neg(&self) -> Self {
        let parts = self.parts.iter().map(|(d, f)| (*d, f.neg())).collect();
        GradedExpr { sig: self.sig, parts }
    }

    fn mul(&self, rhs: &Self) -> Self {
        let mut out = GradedExpr::zero(self.sig);
        for f1 in self.parts.values() {
            for f2 in rhs.parts.values() {
                out = out.add(&GradedExpr::from_form(f1.wedge(f2)));
            }
        }
        out
    }

    fn d(&self) -> Self {
        let mut out = GradedExpr::zero(self.sig);
        for f in self.parts.values() {
            out = out.add(&GradedExpr::from_form(f.d()));
        }
        out
    }

    fn pow(&self, e: u32) -> Result<Self, ParseError> {
        // powers only make sense degreewise-associatively; allow any form
        let mut acc = GradedExpr::from_poly(SuperPolynomial::one(self.sig));
        for _ in 0..e {
            acc = acc.mul(self);
        }
        Ok(acc)
    }

    /// Extract a homogeneous form of the given degree (zero allowed).
    pub fn into_form(self, degree: usize) -> Result<SuperForm, ParseError> {
        let mut parts = self.parts;
        match parts.len() {
            0 => Ok(SuperForm::zero(self.sig, degree)),
            1 => {
                let (d, f) = parts.pop_first().unwrap();
                if d == degree {
                    Ok(f)
                } else {
                    Err(ParseError::WrongDegree(degree, d))
                }
            }
            _ => Err(ParseError::MixedDegree),
        }
    }

    pub fn into_poly(self) -> Result<SuperPolynomial, ParseError> {
        let sig = self.sig;
        Ok(self.into_form(0)?.into_poly_with(sig))
    }
}

trait IntoPolyWith {
    fn into_poly_with(self, sig: ChartSignature) -> SuperPolynomial;
}

impl IntoPolyWith for SuperForm {
    fn into_poly_with(self, sig: ChartSignature) -> SuperPolynomial {
        if self.is_zero() {
            SuperPolynomial::zero(sig)
        } else {
            self.into_poly()
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Num(i64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    At,
    LParen,
    RParen,
    D,
}

fn tokenize(src: &str) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    let bytes: Vec<char> = src.chars().collect();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' => {
                out.push(Token::Plus);
                i += 1;
            }
            '-' => {
                out.push(Token::Minus);
                i += 1;
            }
            '*' => {
                out.push(Token::Star);
                i += 1;
            }
            '^' => {
                out.push(Token::Caret);
                i += 1;
            }
            '/' => {
                out.push(Token::Slash);
                i += 1;
            }
            '@' => {
                out.push(Token::At);
                i += 1;
            }
            '(' => {
                out.push(Token::LParen);
                i += 1;
            }
            ')' => {
                out.push(Token::RParen);
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = bytes[start..i].iter().collect();
                out.push(Token::Num(s.parse().map_err(|_| ParseError::BadExponent)?));
            }
            c if c.is_ascii_alphabetic() => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == '_') {
                    i += 1;
                }
                let s: String = bytes[start..i].iter().collect();
                if s == "d" && i < bytes.len() && bytes[i] == '(' {
                    out.push(Token::D);
                } else {
                    out.push(Token::Ident(s));
                }
            }
            other => return Err(ParseError::UnexpectedChar(other, i)),
        }
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<Token>,
    pos: usize,
    names: &'a VarNames,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Result<Token, ParseError> {
        let t = self.tokens.get(self.pos).cloned().ok_or(ParseError::UnexpectedEnd)?;
        self.pos += 1;
        Ok(t)
    }

    fn expect(&mut self, t: Token) -> Result<(), ParseError> {
        let got = self.next()?;
        if got == t {
            Ok(())
        } else {
            Err(ParseError::UnexpectedToken(format!("{got:?}")))
        }
    }

    fn parse_sum(&mut self) -> Result<GradedExpr, ParseError> {
        let mut acc = self.parse_product()?;
        loop {
            match self.peek() {
                Some(Token::Plus) => {
                    self.pos += 1;
                    acc = acc.add(&self.parse_product()?);
                }
                Some(Token::Minus) => {
                    self.pos += 1;
                    acc = acc.add(&self.parse_product()?.neg());
                }
                _ => return Ok(acc),
            }
        }
    }

    fn parse_product(&mut self) -> Result<GradedExpr, ParseError> {
        let mut acc = self.parse_power()?;
        while matches!(self.peek(), Some(Token::Star)) {
            self.pos += 1;
            acc = acc.mul(&self.parse_power()?);
        }
        Ok(acc)
    }

    fn parse_power(&mut self) -> Result<GradedExpr, ParseError> {
        let base = self.parse_atom()?;
        if matches!(self.peek(), Some(Token::Caret)) {
            self.pos += 1;
            match self.next()? {
                Token::Num(e) if e >= 0 => base.pow(e as u32),
                _ => Err(ParseError::BadExponent),
            }
        } else {
            Ok(base)
        }
    }

    fn parse_atom(&mut self) -> Result<GradedExpr, ParseError> {
        let sig = self.names.signature();
        match self.next()? {
            Token::Minus => Ok(self.parse_atom()?.neg()),
            Token::Num(n) => {
                // optional rational literal n/m
                if matches!(self.peek(), Some(Token::Slash)) {
                    self.pos += 1;
                    match self.next()? {
                        Token::Num(m) if m != 0 => Ok(GradedExpr::from_poly(
                            SuperPolynomial::constant(sig, GaussianRational::from_ratio(n, m)),
                        )),
                        Token::Num(_) => Err(ParseError::ZeroDenominator),
                        t => Err(ParseError::UnexpectedToken(format!("{t:?}"))),
                    }
                } else {
                    Ok(GradedExpr::from_poly(SuperPolynomial::constant(
                        sig,
                        GaussianRational::from_int(n),
                    )))
                }
            }
            Token::Ident(name) => {
                if name == "i" {
                    return Ok(GradedExpr::from_poly(SuperPolynomial::constant(
                        sig,
                        GaussianRational::i(),
                    )));
                }
                let idx = self
                    .names
                    .lookup(&name)
                    .ok_or(ParseError::UnknownIdentifier(name))?;
                Ok(GradedExpr::from_poly(SuperPolynomial::coordinate(sig, idx)))
            }
            Token::D => {
                self.expect(Token::LParen)?;
                let inner = self.parse_sum()?;
                self.expect(Token::RParen)?;
                Ok(inner.d())
            }
            Token::LParen => {
                let inner = self.parse_sum()?;
                self.expect(Token::RParen)?;
                Ok(inner)
            }
            t => Err(ParseError::UnexpectedToken(format!("{t:?}"))),
        }
    }
}

/// Parse a graded expression.
pub fn parse_expr(src: &str, names: &VarNames) -> Result<GradedExpr, ParseError> {
    let tokens = tokenize(src)?;
    let mut p = Parser { tokens, pos: 0, names };
    let out = p.parse_sum()?;
    if p.pos != p.tokens.len() {
        return Err(ParseError::UnexpectedToken(format!("{:?}", p.tokens[p.pos])));
    }
    Ok(out)
}

/// Parse a polynomial (degree-0 expression).
pub fn parse_poly(src: &str, names: &VarNames) -> Result<SuperPolynomial, ParseError> {
    parse_expr(src, names)?.into_poly()
}

/// Parse a homogeneous form of the given degree.
pub fn parse_form(src: &str, names: &VarNames, degree: usize) -> Result<SuperForm, ParseError> {
    parse_expr(src, names)?.into_form(degree)
}

/// Parse a vector field from a sum of `coeff@j` terms, e.g.
/// `b2@1 - 2*b1@2`. Parity is inferred and must be homogeneous.
pub fn parse_vector_field(src: &str, names: &VarNames) -> Result<SuperVectorField, ParseError> {
    let sig = names.signature();
    let tokens = tokenize(src)?;
    // split at top-level +/- into (sign, component-tokens, index)
    let mut comps: Vec<SuperPolynomial> =
        (0..sig.n()).map(|_| SuperPolynomial::zero(sig)).collect();
    let mut depth = 0usize;
    let mut start = 0usize;
    let mut chunks: Vec<(bool, Vec<Token>)> = Vec::new();
    let mut negated = false;
    for (k, t) in tokens.iter().enumerate() {
        match t {
            Token::LParen => depth += 1,
            Token::RParen => depth -= 1,
            Token::Plus | Token::Minus if depth == 0 && k > start => {
                chunks.push((negated, tokens[start..k].to_vec()));
                negated = matches!(t, Token::Minus);
                start = k + 1;
            }
            Token::Minus if depth == 0 && k == start => {
                negated = !negated;
                start = k + 1;
            }
            _ => {}
        }
    }
    if start < tokens.len() {
        chunks.push((negated, tokens[start..].to_vec()));
    }
    for (neg, mut chunk) in chunks {
        // expect trailing At Num
        let idx = match (chunk.pop(), chunk.pop()) {
            (Some(Token::Num(j)), Some(Token::At)) if j >= 1 && (j as usize) <= sig.n() => {
                j as usize - 1
            }
            _ => return Err(ParseError::UnexpectedToken("expected @j suffix".into())),
        };
        let coeff = if chunk.is_empty() {
            SuperPolynomial::one(sig)
        } else {
            // strip a trailing `*`
            if chunk.last() == Some(&Token::Star) {
                chunk.pop();
            }
            let mut p = Parser { tokens: chunk, pos: 0, names };
            let e = p.parse_sum()?;
            if p.pos != p.tokens.len() {
                return Err(ParseError::UnexpectedToken("trailing tokens".into()));
            }
            e.into_poly()?
        };
        let coeff = if neg { coeff.neg() } else { coeff };
        comps[idx] = comps[idx].add(&coeff);
    }
    // infer parity
    let mut parity: Option<Parity> = None;
    for (i, c) in comps.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let cp = c.parity().ok_or(ParseError::MixedParity)?;
        let total = cp.combine(sig.parity(i));
        match parity {
            None => parity = Some(total),
            Some(p) if p == total => {}
            _ => return Err(ParseError::MixedParity),
        }
    }
    SuperVectorField::new(sig, comps, parity.unwrap_or(Parity::Even))
        .map_err(|_| ParseError::MixedParity)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_polynomial() {
        let names = VarNames::plain(ChartSignature::new(2, 1));
        let p = parse_poly("b1^2*b3 - 3/2*b2 + i", &names).unwrap();
        let sig = names.signature();
        let b1 = SuperPolynomial::coordinate(sig, 0);
        let b2 = SuperPolynomial::coordinate(sig, 1);
        let b3 = SuperPolynomial::coordinate(sig, 2);
        let expect = b1
            .mul(&b1)
            .mul(&b3)
            .sub(&b2.scale(&GaussianRational::from_ratio(3, 2)))
            .add(&SuperPolynomial::constant(sig, GaussianRational::i()));
        assert_eq!(p, expect);
    }

    #[test]
    fn parse_three_form() {
        let names = VarNames::plain(ChartSignature::new(3, 0));
        let h = parse_form("d(b1)*d(b2)*d(b3)", &names, 3).unwrap();
        let sig = names.signature();
        let db = |i| SuperForm::basis_one_form(sig, i);
        assert_eq!(h, db(0).wedge(&db(1)).wedge(&db(2)));
    }

    #[test]
    fn parse_d_of_product() {
        let names = VarNames::plain(ChartSignature::new(2, 0));
        let f = parse_form("d(b1*b2)", &names, 1).unwrap();
        let sig = names.signature();
        let b1 = SuperPolynomial::coordinate(sig, 0);
        let b2 = SuperPolynomial::coordinate(sig, 1);
        assert_eq!(f, d_poly(&b1.mul(&b2)));
    }

    #[test]
    fn parse_vector_field_terms() {
        let names = VarNames::plain(ChartSignature::new(2, 0));
        let x = parse_vector_field("b2*b2@1 - 2*b1@2", &names).unwrap();
        let sig = names.signature();
        let b1 = SuperPolynomial::coordinate(sig, 0);
        let b2 = SuperPolynomial::coordinate(sig, 1);
        assert_eq!(x.component(0), &b2.mul(&b2));
        assert_eq!(x.component(1), &b1.scale(&GaussianRational::from_int(-2)));
    }

    #[test]
    fn dolbeault_aliases() {
        let names = VarNames::dolbeault(1, 1);
        // z1 even, zb1 even, zeta1 odd, eps1 odd
        let p = parse_poly("z1*zb1 + zeta1*eps1", &names).unwrap();
        assert_eq!(p.parity(), Some(Parity::Even));
        let bad = parse_poly("zeta1*zeta1", &names).unwrap();
        assert!(bad.is_zero());
    }

    #[test]
    fn reject_unknown_identifier() {
        let names = VarNames::plain(ChartSignature::new(1, 0));
        assert!(matches!(
            parse_poly("w1", &names),
            Err(ParseError::UnknownIdentifier(_))
        ));
    }
}
