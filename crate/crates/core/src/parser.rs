//! Recursive-descent parser for polynomial expressions.
//!
//! Grammar (conventional precedence, `^` tightest):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := '-' factor | power
//! power  := atom ('^' INT)*
//! atom   := INT | IDENT | '(' expr ')'
//! ```
//!
//! `^` takes a bare nonnegative integer literal; juxtaposition is not
//! implicit multiplication. Errors carry the byte offset they occurred at.

use crate::poly::{Poly, PolyError, VarName};
use num_bigint::BigInt;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    pos: usize,
}

fn lex(text: &str) -> Result<Vec<Token>, PolyError> {
    let bytes = text.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let pos = i;
        match c {
            ' ' | '\t' | '\r' | '\n' => {
                i += 1;
            }
            '+' => {
                toks.push(Token { tok: Tok::Plus, pos });
                i += 1;
            }
            '-' => {
                toks.push(Token { tok: Tok::Minus, pos });
                i += 1;
            }
            '*' => {
                toks.push(Token { tok: Tok::Star, pos });
                i += 1;
            }
            '^' => {
                toks.push(Token { tok: Tok::Caret, pos });
                i += 1;
            }
            '(' => {
                toks.push(Token { tok: Tok::LParen, pos });
                i += 1;
            }
            ')' => {
                toks.push(Token { tok: Tok::RParen, pos });
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n = BigInt::parse_bytes(&bytes[start..i], 10).ok_or(PolyError::Syntax {
                    pos: start,
                    message: "invalid integer literal".to_string(),
                })?;
                toks.push(Token { tok: Tok::Int(n), pos: start });
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < bytes.len()
                    && ((bytes[i] as char).is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                toks.push(Token {
                    tok: Tok::Ident(text[start..i].to_string()),
                    pos: start,
                });
            }
            other => {
                return Err(PolyError::Syntax {
                    pos,
                    message: format!("unexpected character `{}`", other),
                })
            }
        }
    }
    Ok(toks)
}

struct Parser {
    toks: Vec<Token>,
    i: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.toks.get(self.i)
    }

    fn pos(&self) -> usize {
        self.peek().map_or(self.end, |t| t.pos)
    }

    fn bump(&mut self) -> Option<Token> {
        let t = self.toks.get(self.i).cloned();
        if t.is_some() {
            self.i += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<Poly, PolyError> {
        let mut acc = self.term()?;
        while let Some(t) = self.peek() {
            match t.tok {
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

    fn term(&mut self) -> Result<Poly, PolyError> {
        let mut acc = self.factor()?;
        while matches!(self.peek(), Some(t) if t.tok == Tok::Star) {
            self.bump();
            acc = &acc * &self.factor()?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Poly, PolyError> {
        if matches!(self.peek(), Some(t) if t.tok == Tok::Minus) {
            self.bump();
            return Ok(-&self.factor()?);
        }
        self.power()
    }

    fn power(&mut self) -> Result<Poly, PolyError> {
        let mut base = self.atom()?;
        while matches!(self.peek(), Some(t) if t.tok == Tok::Caret) {
            self.bump();
            let pos = self.pos();
            match self.bump() {
                Some(Token { tok: Tok::Int(n), .. }) => {
                    let exp = u32::try_from(&n).map_err(|_| PolyError::BadExponent { pos })?;
                    base = base.pow(exp);
                }
                _ => return Err(PolyError::BadExponent { pos }),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Poly, PolyError> {
        match self.bump() {
            Some(Token { tok: Tok::Int(n), .. }) => Ok(Poly::constant(n)),
            Some(Token { tok: Tok::Ident(name), pos }) => {
                let v = VarName::new(&name).map_err(|_| PolyError::Syntax {
                    pos,
                    message: format!("invalid variable name `{}`", name),
                })?;
                Ok(Poly::from_var(v))
            }
            Some(Token { tok: Tok::LParen, pos }) => {
                let inner = self.expr()?;
                match self.bump() {
                    Some(Token { tok: Tok::RParen, .. }) => Ok(inner),
                    _ => Err(PolyError::Syntax {
                        pos,
                        message: "unclosed parenthesis".to_string(),
                    }),
                }
            }
            Some(Token { pos, .. }) => Err(PolyError::Syntax {
                pos,
                message: "expected a number, variable or parenthesized expression".to_string(),
            }),
            None => Err(PolyError::Syntax {
                pos: self.end,
                message: "unexpected end of expression".to_string(),
            }),
        }
    }
}

pub(crate) fn parse(text: &str) -> Result<Poly, PolyError> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks,
        i: 0,
        end: text.len(),
    };
    let poly = p.expr()?;
    if let Some(t) = p.peek() {
        return Err(PolyError::Syntax {
            pos: t.pos,
            message: "trailing input after expression".to_string(),
        });
    }
    Ok(poly)
}
