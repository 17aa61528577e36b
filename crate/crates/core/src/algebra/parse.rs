//! Text syntax for polynomials and rational functions over F₉.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/')? unary)*      juxtaposition multiplies
//! unary  := ('+' | '-') unary | power
//! power  := atom ('^' integer)?
//! atom   := integer | 'i' | 't' | '(' expr ')'
//! ```
//!
//! Integers are reduced mod 3, `i² = −1`, whitespace is ignored. Exponents may be
//! negative on nonzero bases.

use super::field::{Field, F9};
use super::poly::P9;
use super::rational::RatFunc;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(i64),
    I,
    Var,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn lex(s: &str, var: char) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let chars: Vec<char> = s.chars().collect();
    let mut k = 0;
    while k < chars.len() {
        let c = chars[k];
        k += 1;
        match c {
            c if c.is_whitespace() => {}
            '0'..='9' => {
                let mut n = c.to_digit(10).expect("digit") as i64;
                while k < chars.len() && chars[k].is_ascii_digit() {
                    n = n.saturating_mul(10).saturating_add(chars[k].to_digit(10).expect("digit") as i64);
                    k += 1;
                }
                out.push(Tok::Num(n));
            }
            'i' => out.push(Tok::I),
            c if c == var => out.push(Tok::Var),
            '+' => out.push(Tok::Plus),
            '-' | '−' => out.push(Tok::Minus),
            '*' | '·' => out.push(Tok::Star),
            '/' => out.push(Tok::Slash),
            '^' => out.push(Tok::Caret),
            '(' => out.push(Tok::LParen),
            ')' => out.push(Tok::RParen),
            other => return Err(Error::Parse(format!("unexpected character `{other}` in `{s}`"))),
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    src: &'a str,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn err(&self, msg: &str) -> Error {
        Error::Parse(format!("{msg} in `{}`", self.src))
    }

    fn expr(&mut self) -> Result<RatFunc> {
        let mut acc = self.term()?;
        while let Some(t) = self.peek() {
            match t {
                Tok::Plus => {
                    self.bump();
                    acc = &acc + &self.term()?;
                }
                Tok::Minus => {
                    self.bump();
                    acc = &acc - &self.term()?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<RatFunc> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.bump();
                    acc = &acc * &self.unary()?;
                }
                Some(Tok::Slash) => {
                    self.bump();
                    let d = self.unary()?;
                    acc = acc.checked_div(&d).map_err(|_| self.err("division by zero"))?;
                }
                Some(Tok::Num(_) | Tok::I | Tok::Var | Tok::LParen) => {
                    acc = &acc * &self.power()?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<RatFunc> {
        match self.peek() {
            Some(Tok::Minus) => {
                self.bump();
                Ok(-self.unary()?)
            }
            Some(Tok::Plus) => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<RatFunc> {
        let base = self.atom()?;
        if self.peek() == Some(&Tok::Caret) {
            self.bump();
            let neg = if self.peek() == Some(&Tok::Minus) {
                self.bump();
                true
            } else {
                false
            };
            // `t^(12)` is accepted as well as `t^12`
            let paren = self.peek() == Some(&Tok::LParen) && !neg;
            if paren {
                self.bump();
            }
            let e = match self.bump() {
                Some(Tok::Num(n)) => n,
                _ => return Err(self.err("expected integer exponent")),
            };
            if paren && self.bump() != Some(Tok::RParen) {
                return Err(self.err("expected `)`"));
            }
            if neg && base.is_zero() {
                return Err(self.err("negative power of zero"));
            }
            return Ok(base.pow(if neg { -e } else { e }));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<RatFunc> {
        match self.bump() {
            Some(Tok::Num(n)) => Ok(RatFunc::constant(F9::from_int(n))),
            Some(Tok::I) => Ok(RatFunc::constant(F9::I)),
            Some(Tok::Var) => Ok(RatFunc::var()),
            Some(Tok::LParen) => {
                let e = self.expr()?;
                if self.bump() != Some(Tok::RParen) {
                    return Err(self.err("expected `)`"));
                }
                Ok(e)
            }
            _ => Err(self.err("unexpected end or token")),
        }
    }
}

/// Parse a rational function in the variable `var`.
pub fn parse_ratfunc_in(s: &str, var: char) -> Result<RatFunc> {
    let toks = lex(s, var)?;
    if toks.is_empty() {
        return Err(Error::Parse("empty expression".into()));
    }
    let mut p = Parser { toks, pos: 0, src: s };
    let r = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(p.err("trailing input"));
    }
    Ok(r)
}

/// Parse a rational function in `t`.
pub fn parse_ratfunc(s: &str) -> Result<RatFunc> {
    parse_ratfunc_in(s, 't')
}

/// Parse a polynomial in `t`; errors if the expression has a denominator.
pub fn parse_poly(s: &str) -> Result<P9> {
    let r = parse_ratfunc(s)?;
    r.as_poly().cloned().ok_or_else(|| Error::Parse(format!("`{s}` is not a polynomial")))
}

/// Parse a field element (a constant expression).
pub fn parse_scalar(s: &str) -> Result<F9> {
    let p = parse_poly(s)?;
    if p.is_constant() {
        Ok(p.coeff(0))
    } else {
        Err(Error::Parse(format!("`{s}` is not a constant")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_canonical() {
        let p = parse_poly("2*t^3 + 2").unwrap();
        assert_eq!(p.to_string(), "2*t^3 + 2");
        assert_eq!(parse_poly(&p.to_string()).unwrap(), p);
        let q = parse_poly("(1+i)*t^2 + t + 1+2*i").unwrap();
        assert_eq!(parse_poly(&q.to_string()).unwrap(), q);
    }

    #[test]
    fn paper_style_input() {
        let a = parse_poly("-t^2(t-1)^2(t+1)^2").unwrap();
        let b = parse_poly("2*t^6 + 2*t^4 + 2*t^2").unwrap();
        assert_eq!(a, b);
        assert_eq!(parse_poly("t^12").unwrap().degree(), Some(12));
        assert_eq!(parse_poly("10*t").unwrap(), P9::var());
        let r = parse_ratfunc("t^3/(t-1)").unwrap();
        assert_eq!(r.den().degree(), Some(1));
        assert_eq!(parse_ratfunc("t^-2").unwrap(), RatFunc::var().pow(-2));
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_poly("t +").is_err());
        assert!(parse_poly("x^2").is_err());
        assert!(parse_poly("1/t").is_err());
        assert!(parse_ratfunc("1/0").is_err());
        assert!(parse_poly("").is_err());
    }
}
