//! Recursive-descent parser for polynomial expressions.
//!
//! Grammar (whitespace ignored):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' integer)?
//! atom   := integer | name | '(' expr ')'
//! ```
//!
//! Division is only allowed by a nonzero constant, so canonical printing of
//! rational coefficients (`1/2*x`) parses back to the same polynomial.

use num_bigint::BigInt;
use num_rational::BigRational;

use super::multipoly::MultiPoly;
use super::PolyError;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Name(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>, PolyError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = match c {
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            d if d.is_ascii_digit() => {
                while i < bytes.len() && (bytes[i] as char).is_ascii_digit() {
                    i += 1;
                }
                out.push((start, Tok::Int(text[start..i].parse().unwrap())));
                continue;
            }
            a if a.is_ascii_alphabetic() || a == '_' => {
                while i < bytes.len() && ((bytes[i] as char).is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((start, Tok::Name(text[start..i].to_string())));
                continue;
            }
            other => {
                return Err(PolyError::Syntax {
                    pos: start,
                    msg: format!("unexpected character '{other}'"),
                })
            }
        };
        out.push((start, tok));
        i += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    idx: usize,
    end: usize,
    vars: &'a [&'a str],
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.idx).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.idx).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.idx).map(|(_, t)| t.clone());
        self.idx += 1;
        t
    }

    fn expr(&mut self) -> Result<MultiPoly, PolyError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    acc = &acc + &self.term()?;
                }
                Some(Tok::Minus) => {
                    self.bump();
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<MultiPoly, PolyError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.bump();
                    acc = &acc * &self.unary()?;
                }
                Some(Tok::Slash) => {
                    let pos = self.pos();
                    self.bump();
                    let d = self.unary()?;
                    let c = d.constant_term();
                    if d.num_terms() != 1 || d.total_degree() != Some(0) {
                        return Err(PolyError::Syntax {
                            pos,
                            msg: "division is only allowed by a nonzero constant".into(),
                        });
                    }
                    acc = acc.scale(&c.recip());
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<MultiPoly, PolyError> {
        if self.peek() == Some(&Tok::Minus) {
            self.bump();
            let inner = self.unary()?;
            return Ok(-&inner);
        }
        self.power()
    }

    fn power(&mut self) -> Result<MultiPoly, PolyError> {
        let base = self.atom()?;
        if self.peek() != Some(&Tok::Caret) {
            return Ok(base);
        }
        self.bump();
        let pos = self.pos();
        match self.bump() {
            Some(Tok::Int(k)) => {
                let k: u32 = k.try_into().map_err(|_| PolyError::Syntax {
                    pos,
                    msg: "exponent too large".into(),
                })?;
                if self.peek() == Some(&Tok::Caret) {
                    return Err(PolyError::Syntax {
                        pos: self.pos(),
                        msg: "chained exponents need parentheses".into(),
                    });
                }
                Ok(base.pow(k))
            }
            Some(Tok::Minus) => Err(PolyError::NegativeExponent { pos }),
            _ => Err(PolyError::Syntax {
                pos,
                msg: "exponent must be a nonnegative integer literal".into(),
            }),
        }
    }

    fn atom(&mut self) -> Result<MultiPoly, PolyError> {
        let pos = self.pos();
        let n = self.vars.len();
        match self.bump() {
            Some(Tok::Int(v)) => Ok(MultiPoly::constant(n, BigRational::from_integer(v))),
            Some(Tok::Name(name)) => match self.vars.iter().position(|v| *v == name) {
                Some(i) => Ok(MultiPoly::var(n, i)),
                None => Err(PolyError::UnknownVariable { name, pos }),
            },
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                match self.bump() {
                    Some(Tok::RParen) => Ok(inner),
                    _ => Err(PolyError::Syntax {
                        pos: self.toks.get(self.idx - 1).map(|(p, _)| *p).unwrap_or(self.end),
                        msg: "expected ')'".into(),
                    }),
                }
            }
            Some(_) => Err(PolyError::Syntax {
                pos,
                msg: "expected a number, variable or '('".into(),
            }),
            None => Err(PolyError::Syntax {
                pos,
                msg: "unexpected end of input".into(),
            }),
        }
    }
}

/// Parses `text` as a polynomial in the named variables.
pub fn parse_poly(text: &str, var_names: &[&str]) -> Result<MultiPoly, PolyError> {
    if var_names.is_empty() {
        return Err(PolyError::NoVariables);
    }
    for (i, v) in var_names.iter().enumerate() {
        let valid = v.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
            && v.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
        if !valid || var_names[..i].contains(v) {
            return Err(PolyError::BadVariableName(v.to_string()));
        }
    }
    let toks = tokenize(text)?;
    let mut p = Parser {
        toks,
        idx: 0,
        end: text.len(),
        vars: var_names,
    };
    let poly = p.expr()?;
    if p.idx < p.toks.len() {
        return Err(PolyError::Syntax {
            pos: p.pos(),
            msg: "trailing input".into(),
        });
    }
    Ok(poly)
}
