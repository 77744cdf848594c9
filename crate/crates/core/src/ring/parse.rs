//! Polynomial expression parser.
//!
//! ```text
//! expr   = term { ("+" | "-") term } ;
//! term   = unary { ("*" | "/") unary } ;      (* divisor must be a nonzero constant *)
//! unary  = ("+" | "-") unary | power ;
//! power  = atom [ "^" integer ] ;
//! atom   = integer | variable | "(" expr ")" ;
//! ```
//!
//! Juxtaposition (`2x`, `x y`) is rejected. Positions in errors are byte
//! offsets into the source.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::One;

use super::base::Ring;
use super::field::Field;
use super::poly::Polynomial;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Op(char),
    End,
}

fn tokenize(src: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let n: BigInt = src[start..i].parse().expect("digits");
            out.push((start, Tok::Num(n)));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((start, Tok::Ident(src[start..i].to_string())));
        } else if "+-*/^()".contains(c) {
            out.push((i, Tok::Op(c)));
            i += 1;
        } else {
            return Err(Error::Syntax { pos: i, msg: format!("unexpected character {c:?}") });
        }
    }
    out.push((src.len(), Tok::End));
    Ok(out)
}

struct Parser<'a, F: Field> {
    toks: Vec<(usize, Tok)>,
    at: usize,
    ring: &'a Arc<Ring>,
    _f: std::marker::PhantomData<F>,
}

impl<F: Field> Parser<'_, F> {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].1
    }

    fn pos(&self) -> usize {
        self.toks[self.at].0
    }

    fn bump(&mut self) -> (usize, Tok) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<Polynomial<F>> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Tok::Op('+') => {
                    self.bump();
                    acc = &acc + &self.term()?;
                }
                Tok::Op('-') => {
                    self.bump();
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial<F>> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Tok::Op('*') => {
                    self.bump();
                    acc = &acc * &self.unary()?;
                }
                Tok::Op('/') => {
                    self.bump();
                    let pos = self.pos();
                    let d = self.unary()?;
                    if !d.is_constant() || d.is_zero() {
                        return Err(Error::Syntax { pos, msg: "divisor must be a nonzero constant".into() });
                    }
                    acc = acc.scale(&d.constant_term().inv());
                }
                Tok::Num(_) | Tok::Ident(_) | Tok::Op('(') => {
                    return Err(Error::Syntax {
                        pos: self.pos(),
                        msg: "implicit multiplication is not allowed; use `*`".into(),
                    })
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Polynomial<F>> {
        match self.peek() {
            Tok::Op('-') => {
                self.bump();
                Ok(-&self.unary()?)
            }
            Tok::Op('+') => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Polynomial<F>> {
        let base = self.atom()?;
        if self.peek() == &Tok::Op('^') {
            self.bump();
            let (pos, tok) = self.bump();
            let e = match tok {
                Tok::Num(n) => u32::try_from(n).map_err(|_| Error::Syntax { pos, msg: "exponent too large".into() })?,
                _ => return Err(Error::Syntax { pos, msg: "expected a non-negative integer exponent".into() }),
            };
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Polynomial<F>> {
        let (pos, tok) = self.bump();
        match tok {
            Tok::Num(n) => {
                let c = F::from_ratio(&n, &BigInt::one()).expect("integer literal");
                Ok(Polynomial::constant(self.ring, c))
            }
            Tok::Ident(name) => match self.ring.var_index(&name) {
                Some(i) => Ok(Polynomial::var(self.ring, i)),
                None => Err(Error::UnknownVariable { pos, name }),
            },
            Tok::Op('(') => {
                let inner = self.expr()?;
                let (pos, close) = self.bump();
                if close != Tok::Op(')') {
                    return Err(Error::Syntax { pos, msg: "expected `)`".into() });
                }
                Ok(inner)
            }
            Tok::End => Err(Error::Syntax { pos, msg: "unexpected end of input".into() }),
            Tok::Op(c) => Err(Error::Syntax { pos, msg: format!("unexpected `{c}`") }),
        }
    }
}

/// Parses `src` into a polynomial of `ring`.
pub fn parse_poly<F: Field>(src: &str, ring: &Arc<Ring>) -> Result<Polynomial<F>> {
    let toks = tokenize(src)?;
    let mut p = Parser { toks, at: 0, ring, _f: std::marker::PhantomData };
    let out = p.expr()?;
    match p.peek() {
        Tok::End => Ok(out),
        Tok::Op(')') => Err(Error::Syntax { pos: p.pos(), msg: "unbalanced `)`".into() }),
        _ => Err(Error::Syntax { pos: p.pos(), msg: "trailing input".into() }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{Fp, MonomialOrder, Rational};

    fn ring() -> Arc<Ring> {
        Ring::new(["x", "y"], MonomialOrder::Grevlex)
    }

    #[test]
    fn parses_examples() {
        let r = ring();
        let f: Polynomial<Rational> = parse_poly("x^2 - 2*x*y", &r).unwrap();
        assert_eq!(f.len(), 2);
        let z: Polynomial<Rational> = parse_poly("0", &r).unwrap();
        assert!(z.terms().is_empty());
        let h: Polynomial<Rational> = parse_poly("3/6*x", &r).unwrap();
        assert_eq!(h.lead_coeff().unwrap().to_string(), "1/2");
        let g: Polynomial<Rational> = parse_poly("(x+y)^2 - x*(x+2*y)", &r).unwrap();
        assert_eq!(g.to_string(), "y^2");
    }

    #[test]
    fn errors_carry_positions() {
        let r = ring();
        assert_eq!(
            parse_poly::<Rational>("x + z", &r).unwrap_err(),
            Error::UnknownVariable { pos: 4, name: "z".into() }
        );
        match parse_poly::<Rational>("2x", &r).unwrap_err() {
            Error::Syntax { pos, .. } => assert_eq!(pos, 1),
            e => panic!("{e:?}"),
        }
        assert!(matches!(parse_poly::<Rational>("x*(y", &r), Err(Error::Syntax { pos: 4, .. })));
        assert!(matches!(parse_poly::<Rational>("x/y", &r), Err(Error::Syntax { .. })));
        assert!(matches!(parse_poly::<Rational>("x/0", &r), Err(Error::Syntax { .. })));
        assert!(matches!(parse_poly::<Rational>("x $ y", &r), Err(Error::Syntax { pos: 2, .. })));
    }

    #[test]
    fn prime_field_literals() {
        let r = ring();
        let f: Polynomial<Fp<7>> = parse_poly("8*x - 1/2", &r).unwrap();
        assert_eq!(f.to_string(), "x + 3");
    }
}
