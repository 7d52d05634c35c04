//! Term parser. Prefix applications `f(t1,...,tn)` are the canonical form;
//! the infix connectives below are accepted as input sugar and resolved to
//! the first alternative name the signature actually declares.

use crate::error::{Error, Result};

use super::{Signature, Term};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Sugar {
    And,
    Or,
    Not,
    Imp,
    Plus,
    OPlus,
    One,
    Zero,
}

impl Sugar {
    fn candidates(self) -> &'static [&'static str] {
        match self {
            Sugar::And => &["and", "meet"],
            Sugar::Or => &["or", "join"],
            Sugar::Not => &["not", "neg"],
            Sugar::Imp => &["imp", "implies"],
            Sugar::Plus => &["plus", "add"],
            Sugar::OPlus => &["oplus", "plus"],
            Sugar::One => &["one", "top"],
            Sugar::Zero => &["zero", "bot"],
        }
    }

    fn symbol(self) -> &'static str {
        match self {
            Sugar::And => "∧",
            Sugar::Or => "∨",
            Sugar::Not => "¬",
            Sugar::Imp => "→",
            Sugar::Plus => "+",
            Sugar::OPlus => "⊕",
            Sugar::One => "1",
            Sugar::Zero => "0",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Sugar(Sugar),
    LParen,
    RParen,
    Comma,
    End,
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn skip_ws(&mut self) {
        while let Some(c) = self.src[self.pos..].chars().next() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn next(&mut self) -> Result<(Tok, usize)> {
        self.skip_ws();
        let start = self.pos;
        let rest = &self.src[self.pos..];
        let Some(c) = rest.chars().next() else {
            return Ok((Tok::End, start));
        };
        if c.is_ascii_alphabetic() || c == '_' {
            let len = rest
                .find(|ch: char| !(ch.is_ascii_alphanumeric() || ch == '_'))
                .unwrap_or(rest.len());
            self.pos += len;
            return Ok((Tok::Ident(rest[..len].to_string()), start));
        }
        if rest.starts_with("->") {
            self.pos += 2;
            return Ok((Tok::Sugar(Sugar::Imp), start));
        }
        let tok = match c {
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            ',' => Tok::Comma,
            '∧' | '&' => Tok::Sugar(Sugar::And),
            '∨' | '|' => Tok::Sugar(Sugar::Or),
            '¬' | '~' | '!' => Tok::Sugar(Sugar::Not),
            '→' => Tok::Sugar(Sugar::Imp),
            '+' => Tok::Sugar(Sugar::Plus),
            '⊕' => Tok::Sugar(Sugar::OPlus),
            '1' => Tok::Sugar(Sugar::One),
            '0' => Tok::Sugar(Sugar::Zero),
            other => {
                return Err(Error::Syntax {
                    offset: start,
                    message: format!("unexpected character `{other}`"),
                })
            }
        };
        self.pos += c.len_utf8();
        Ok((tok, start))
    }
}

struct Parser<'a> {
    lexer: Lexer<'a>,
    tok: Tok,
    at: usize,
    sig: Option<&'a Signature>,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str, sig: Option<&'a Signature>) -> Result<Self> {
        let mut lexer = Lexer { src, pos: 0 };
        let (tok, at) = lexer.next()?;
        Ok(Parser { lexer, tok, at, sig })
    }

    fn bump(&mut self) -> Result<()> {
        let (tok, at) = self.lexer.next()?;
        self.tok = tok;
        self.at = at;
        Ok(())
    }

    fn syntax<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            offset: self.at,
            message: message.into(),
        })
    }

    fn resolve(&self, sugar: Sugar, arity: usize, offset: usize) -> Result<String> {
        match self.sig {
            None => Ok(sugar.candidates()[0].to_string()),
            Some(sig) => sugar
                .candidates()
                .iter()
                .find(|name| sig.arity_of(name) == Some(arity))
                .map(|name| name.to_string())
                .ok_or_else(|| Error::UnknownOperation {
                    name: sugar.symbol().to_string(),
                    offset,
                }),
        }
    }

    fn expr(&mut self) -> Result<Term> {
        let lhs = self.disjunction()?;
        if self.tok == Tok::Sugar(Sugar::Imp) {
            let at = self.at;
            self.bump()?;
            let rhs = self.expr()?;
            let op = self.resolve(Sugar::Imp, 2, at)?;
            return Ok(Term::App(op, vec![lhs, rhs]));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Term> {
        let mut lhs = self.conjunction()?;
        while let Tok::Sugar(s @ (Sugar::Or | Sugar::Plus | Sugar::OPlus)) = self.tok {
            let at = self.at;
            self.bump()?;
            let rhs = self.conjunction()?;
            let op = self.resolve(s, 2, at)?;
            lhs = Term::App(op, vec![lhs, rhs]);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<Term> {
        let mut lhs = self.unary()?;
        while self.tok == Tok::Sugar(Sugar::And) {
            let at = self.at;
            self.bump()?;
            let rhs = self.unary()?;
            let op = self.resolve(Sugar::And, 2, at)?;
            lhs = Term::App(op, vec![lhs, rhs]);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Term> {
        if self.tok == Tok::Sugar(Sugar::Not) {
            let at = self.at;
            self.bump()?;
            let arg = self.unary()?;
            let op = self.resolve(Sugar::Not, 1, at)?;
            return Ok(Term::App(op, vec![arg]));
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<Term> {
        let at = self.at;
        match self.tok.clone() {
            Tok::LParen => {
                self.bump()?;
                let t = self.expr()?;
                if self.tok != Tok::RParen {
                    return self.syntax("expected `)`");
                }
                self.bump()?;
                Ok(t)
            }
            Tok::Sugar(s @ (Sugar::One | Sugar::Zero)) => {
                self.bump()?;
                Ok(Term::App(self.resolve(s, 0, at)?, Vec::new()))
            }
            Tok::Ident(name) => {
                self.bump()?;
                if self.tok == Tok::LParen {
                    self.bump()?;
                    let args = self.arguments()?;
                    self.application(name, args, at)
                } else {
                    match self.sig {
                        Some(sig) => match sig.arity_of(&name) {
                            Some(_) => self.application(name, Vec::new(), at),
                            None => Ok(Term::Var(name)),
                        },
                        None => Ok(Term::Var(name)),
                    }
                }
            }
            Tok::End => self.syntax("unexpected end of input"),
            other => self.syntax(format!("unexpected token {other:?}")),
        }
    }

    // Called right after the opening parenthesis.
    fn arguments(&mut self) -> Result<Vec<Term>> {
        let mut args = Vec::new();
        if self.tok == Tok::RParen {
            self.bump()?;
            return Ok(args);
        }
        loop {
            args.push(self.expr()?);
            match self.tok {
                Tok::Comma => self.bump()?,
                Tok::RParen => {
                    self.bump()?;
                    return Ok(args);
                }
                _ => return self.syntax("expected `,` or `)`"),
            }
        }
    }

    fn application(&self, name: String, args: Vec<Term>, at: usize) -> Result<Term> {
        if let Some(sig) = self.sig {
            let arity = sig.arity_of(&name).ok_or_else(|| Error::UnknownOperation {
                name: name.clone(),
                offset: at,
            })?;
            if arity != args.len() {
                return Err(Error::ArityMismatch {
                    name,
                    expected: arity,
                    found: args.len(),
                    offset: at,
                });
            }
        }
        Ok(Term::App(name, args))
    }
}

fn run(src: &str, sig: Option<&Signature>) -> Result<Term> {
    let mut p = Parser::new(src, sig)?;
    let t = p.expr()?;
    if p.tok != Tok::End {
        return p.syntax("trailing input");
    }
    Ok(t)
}

/// Parses a term over `sig`. Bare identifiers naming a nullary operation are
/// constants; every other bare identifier is a variable.
pub fn parse_term(src: &str, sig: &Signature) -> Result<Term> {
    run(src, Some(sig))
}

/// Signature-free parsing: `f(...)` is an application (so `a()` is a
/// constant), bare identifiers are variables, sugar maps to default names.
pub fn parse_term_unchecked(src: &str) -> Result<Term> {
    run(src, None)
}
