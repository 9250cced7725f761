//! Tokenizer and parser for the expression syntax shared by datum files and
//! the command line:
//!
//! ```text
//! 3/5 * zeta(25)^5 * a1 a2 a1 * g[1,0] - (1 + zeta(5)) * a2^3 + 2
//! ```
//!
//! Factors inside a term are joined by `*` or by juxtaposition.

use crate::scalars::{CycField, CycScalar, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("parse error at column {column}: {message}")]
pub struct ParseError {
    pub column: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Factor {
    Number(Rational),
    /// `zeta(order)^exp`
    Zeta { order: u32, exp: i64 },
    /// 1-based letter index with repetition count.
    Letter { index: usize, power: u32 },
    /// Group element by raw (unreduced) exponents.
    Group(Vec<i64>),
    Paren(Expr),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Term {
    pub negative: bool,
    pub factors: Vec<Factor>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Expr {
    pub terms: Vec<Term>,
}

impl Expr {
    /// Every `zeta(k)` order mentioned anywhere in the expression.
    pub fn zeta_orders(&self) -> Vec<u32> {
        let mut out = Vec::new();
        for t in &self.terms {
            for f in &t.factors {
                match f {
                    Factor::Zeta { order, .. } => out.push(*order),
                    Factor::Paren(e) => out.extend(e.zeta_orders()),
                    _ => {}
                }
            }
        }
        out
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError { column: self.pos + 1, message: message.into() })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected `{}`", c as char))
        }
    }

    fn digits(&mut self) -> Result<&'a str, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected digits");
        }
        Ok(std::str::from_utf8(&self.src[start..self.pos]).expect("ascii"))
    }

    fn signed_int(&mut self) -> Result<i64, ParseError> {
        let neg = self.eat(b'-');
        let d = self.digits()?;
        let v: i64 = match d.parse() {
            Ok(v) => v,
            Err(_) => return self.err("integer out of range"),
        };
        Ok(if neg { -v } else { v })
    }

    fn exponent(&mut self) -> Result<Option<i64>, ParseError> {
        if !self.eat(b'^') {
            return Ok(None);
        }
        if self.eat(b'(') {
            let v = self.signed_int()?;
            self.expect(b')')?;
            Ok(Some(v))
        } else {
            Ok(Some(self.signed_int()?))
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut terms = Vec::new();
        let mut negative = false;
        if self.eat(b'-') {
            negative = true;
        } else {
            self.eat(b'+');
        }
        loop {
            let factors = self.factors()?;
            terms.push(Term { negative, factors });
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    negative = false;
                }
                Some(b'-') => {
                    self.pos += 1;
                    negative = true;
                }
                _ => break,
            }
        }
        Ok(Expr { terms })
    }

    fn factors(&mut self) -> Result<Vec<Factor>, ParseError> {
        let mut out = vec![self.factor()?];
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    out.push(self.factor()?);
                }
                Some(c) if c.is_ascii_alphanumeric() || c == b'(' => out.push(self.factor()?),
                _ => break,
            }
        }
        Ok(out)
    }

    fn factor(&mut self) -> Result<Factor, ParseError> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let n = self.digits()?;
                let text = if self.eat(b'/') {
                    format!("{n}/{}", self.digits()?)
                } else {
                    n.to_string()
                };
                match text.parse::<Rational>() {
                    Ok(r) => Ok(Factor::Number(r)),
                    Err(e) => self.err(e.to_string()),
                }
            }
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b')')?;
                Ok(Factor::Paren(e))
            }
            Some(b'z') if self.src[self.pos..].starts_with(b"zeta") => {
                self.pos += 4;
                self.expect(b'(')?;
                let order: u32 = match self.digits()?.parse() {
                    Ok(v) if v > 0 => v,
                    _ => return self.err("zeta order must be a positive integer"),
                };
                self.expect(b')')?;
                let exp = self.exponent()?.unwrap_or(1);
                Ok(Factor::Zeta { order, exp })
            }
            Some(b'a') => {
                self.pos += 1;
                let index: usize = match self.digits()?.parse() {
                    Ok(v) if v > 0 => v,
                    _ => return self.err("letter index must be >= 1"),
                };
                let power = match self.exponent()? {
                    None => 1,
                    Some(p) if p >= 0 => p as u32,
                    Some(_) => return self.err("negative power of a letter"),
                };
                Ok(Factor::Letter { index, power })
            }
            Some(b'g') => {
                self.pos += 1;
                self.expect(b'[')?;
                let mut exps = Vec::new();
                if !self.eat(b']') {
                    loop {
                        exps.push(self.signed_int()?);
                        if self.eat(b']') {
                            break;
                        }
                        self.expect(b',')?;
                    }
                }
                Ok(Factor::Group(exps))
            }
            Some(c) => self.err(format!("unexpected `{}`", c as char)),
            None => self.err("unexpected end of input"),
        }
    }
}

pub fn parse_expr(src: &str) -> Result<Expr, ParseError> {
    let mut p = Parser { src: src.as_bytes(), pos: 0 };
    if p.peek().is_none() {
        return p.err("empty expression");
    }
    let e = p.expr()?;
    if p.peek().is_some() {
        return p.err("trailing input");
    }
    Ok(e)
}

/// Value of an expression that contains no letters or group elements.
pub fn eval_scalar(e: &Expr, field: &'static CycField) -> Result<CycScalar, String> {
    let mut acc = field.zero();
    for t in &e.terms {
        let mut prod = field.one();
        for f in &t.factors {
            let v = match f {
                Factor::Number(r) => field.rational(r.clone()),
                Factor::Zeta { order, exp } => field.root_of_unity(*order, *exp).map_err(|e| e.to_string())?,
                Factor::Paren(inner) => eval_scalar(inner, field)?,
                Factor::Letter { .. } | Factor::Group(_) => {
                    return Err("expected a scalar, found a letter or group element".into())
                }
            };
            prod = &prod * &v;
        }
        acc = if t.negative { &acc - &prod } else { &acc + &prod };
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_mixed_term() {
        let e = parse_expr("3/5 * zeta(25)^5 * a1 a2 a1 * g[1,0]").unwrap();
        assert_eq!(e.terms.len(), 1);
        let f = &e.terms[0].factors;
        assert_eq!(f[0], Factor::Number(Rational::new(3, 5)));
        assert_eq!(f[1], Factor::Zeta { order: 25, exp: 5 });
        assert_eq!(f[2], Factor::Letter { index: 1, power: 1 });
        assert_eq!(f[5], Factor::Group(vec![1, 0]));
    }

    #[test]
    fn signs_and_parens() {
        let e = parse_expr("-1 - (1 + zeta(5)^-2) a2^3 + g[-1]").unwrap();
        assert_eq!(e.terms.len(), 3);
        assert!(e.terms[0].negative && e.terms[1].negative && !e.terms[2].negative);
        assert_eq!(e.zeta_orders(), vec![5]);
    }

    #[test]
    fn scalar_values() {
        let f = CycField::get(25);
        let v = eval_scalar(&parse_expr("-3/5*zeta(25)^3").unwrap(), f).unwrap();
        assert_eq!(v.to_string(), "-3/5*zeta(25)^3");
        let s = eval_scalar(&parse_expr("zeta(5) + zeta(5)^2 + zeta(5)^3 + zeta(5)^4").unwrap(), f).unwrap();
        assert_eq!(s, f.int(-1));
        assert!(eval_scalar(&parse_expr("zeta(3)").unwrap(), f).is_err());
        assert!(eval_scalar(&parse_expr("2 a1").unwrap(), f).is_err());
    }

    #[test]
    fn errors_report_column() {
        let err = parse_expr("a1 + ").unwrap_err();
        assert_eq!(err.column, 6);
        assert!(parse_expr("").is_err());
        assert!(parse_expr("a0").is_err());
        assert!(parse_expr("1/0").is_err());
    }
}
