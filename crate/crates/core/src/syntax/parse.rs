//! Recursive-descent parser for the ASCII formula grammar.
//!
//! Precedence from tightest to loosest: `~`, `&`, `|`, then `->` and `=>`
//! (both right-associative). `&` and `|` associate to the left. A quantifier
//! body extends as far to the right as possible.

use std::fmt;

use thiserror::Error;

use super::{Formula, Signature, Symbol, Term, RESERVED_WORDS};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    UnexpectedChar(char),
    UnexpectedToken { expected: String, found: String },
    UnknownSymbol(String),
    ArityMismatch { symbol: String, expected: usize, found: usize },
    Misused { symbol: String, what: &'static str },
    BinderClash(String),
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::UnexpectedChar(c) => write!(f, "unexpected character `{c}`"),
            ParseErrorKind::UnexpectedToken { expected, found } => {
                write!(f, "expected {expected}, found {found}")
            }
            ParseErrorKind::UnknownSymbol(s) => write!(f, "unknown symbol `{s}`"),
            ParseErrorKind::ArityMismatch { symbol, expected, found } => {
                write!(f, "`{symbol}` expects {expected} argument(s), found {found}")
            }
            ParseErrorKind::Misused { symbol, what } => write!(f, "`{symbol}` {what}"),
            ParseErrorKind::BinderClash(v) => {
                write!(f, "quantified variable `{v}` clashes with a declared symbol")
            }
        }
    }
}

/// A parse failure with its 1-based line and column.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {kind}")]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub offset: usize,
    pub line: usize,
    pub column: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    LParen,
    RParen,
    Comma,
    Dot,
    Not,
    And,
    Or,
    Arrow,
    FatArrow,
    Equals,
    Turnstile,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Tok::Ident(s) => return write!(f, "`{s}`"),
            Tok::LParen => "`(`",
            Tok::RParen => "`)`",
            Tok::Comma => "`,`",
            Tok::Dot => "`.`",
            Tok::Not => "`~`",
            Tok::And => "`&`",
            Tok::Or => "`|`",
            Tok::Arrow => "`->`",
            Tok::FatArrow => "`=>`",
            Tok::Equals => "`=`",
            Tok::Turnstile => "`|-`",
            Tok::Eof => "end of input",
        };
        f.write_str(s)
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let mut out = Vec::new();
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut i = 0;
    while i < chars.len() {
        let (off, c) = chars[i];
        let next = chars.get(i + 1).map(|&(_, c)| c);
        let single = |t: Tok| (t, 1);
        let (tok, width) = match c {
            ' ' | '\t' | '\r' | '\n' => {
                i += 1;
                continue;
            }
            '#' => {
                while i < chars.len() && chars[i].1 != '\n' {
                    i += 1;
                }
                continue;
            }
            '(' => single(Tok::LParen),
            ')' => single(Tok::RParen),
            ',' => single(Tok::Comma),
            '.' => single(Tok::Dot),
            '~' | '¬' => single(Tok::Not),
            '&' | '∧' => single(Tok::And),
            '∨' => single(Tok::Or),
            '⊃' | '→' => single(Tok::Arrow),
            '⇒' => single(Tok::FatArrow),
            '⊢' => single(Tok::Turnstile),
            '⊥' => single(Tok::Ident("bot".into())),
            '⊤' => single(Tok::Ident("top".into())),
            '∘' => single(Tok::Ident("cons".into())),
            '∀' => single(Tok::Ident("forall".into())),
            '∃' => single(Tok::Ident("exists".into())),
            '|' if next == Some('-') => (Tok::Turnstile, 2),
            '|' => single(Tok::Or),
            '-' if next == Some('>') => (Tok::Arrow, 2),
            '=' if next == Some('>') => (Tok::FatArrow, 2),
            '=' => single(Tok::Equals),
            c if c.is_ascii_alphabetic() => {
                let mut j = i;
                while j < chars.len() && (chars[j].1.is_ascii_alphanumeric() || chars[j].1 == '_') {
                    j += 1;
                }
                while j < chars.len() && chars[j].1 == '\'' {
                    j += 1;
                }
                let end = chars.get(j).map_or(text.len(), |&(o, _)| o);
                out.push((Tok::Ident(text[off..end].to_string()), off));
                i = j;
                continue;
            }
            other => return Err(make_error(text, off, ParseErrorKind::UnexpectedChar(other))),
        };
        out.push((tok, off));
        i += width;
    }
    out.push((Tok::Eof, text.len()));
    Ok(out)
}

fn make_error(text: &str, offset: usize, kind: ParseErrorKind) -> ParseError {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    ParseError { kind, offset, line, column }
}

struct Parser<'a> {
    text: &'a str,
    toks: Vec<(Tok, usize)>,
    pos: usize,
    sig: &'a Signature,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str, sig: &'a Signature) -> Result<Parser<'a>, ParseError> {
        Ok(Parser { text, toks: lex(text)?, pos: 0, sig })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn peek2(&self) -> &Tok {
        &self.toks[(self.pos + 1).min(self.toks.len() - 1)].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error_here(&self, kind: ParseErrorKind) -> ParseError {
        make_error(self.text, self.offset(), kind)
    }

    fn unexpected(&self, expected: &str) -> ParseError {
        self.error_here(ParseErrorKind::UnexpectedToken {
            expected: expected.to_string(),
            found: self.peek().to_string(),
        })
    }

    fn expect(&mut self, tok: Tok) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected(&tok.to_string()))
        }
    }

    fn expect_eof(&self) -> Result<(), ParseError> {
        if *self.peek() == Tok::Eof {
            Ok(())
        } else {
            Err(self.unexpected("end of input"))
        }
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.disjunction()?;
        match self.peek() {
            Tok::Arrow => {
                self.bump();
                Ok(lhs.implies(self.formula()?))
            }
            Tok::FatArrow => {
                self.bump();
                Ok(lhs.strong_implies(self.formula()?))
            }
            _ => Ok(lhs),
        }
    }

    fn disjunction(&mut self) -> Result<Formula, ParseError> {
        let mut acc = self.conjunction()?;
        while *self.peek() == Tok::Or {
            self.bump();
            acc = acc.or(self.conjunction()?);
        }
        Ok(acc)
    }

    fn conjunction(&mut self) -> Result<Formula, ParseError> {
        let mut acc = self.unary()?;
        while *self.peek() == Tok::And {
            self.bump();
            acc = acc.and(self.unary()?);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            Tok::Not => {
                self.bump();
                Ok(self.unary()?.negate())
            }
            Tok::Ident(k) if k == "forall" || k == "exists" => {
                let universal = k == "forall";
                self.bump();
                self.quantified(universal)
            }
            _ => self.atom(),
        }
    }

    fn quantified(&mut self, universal: bool) -> Result<Formula, ParseError> {
        let mut vars = vec![self.binder()?];
        while *self.peek() == Tok::Comma {
            self.bump();
            vars.push(self.binder()?);
        }
        self.expect(Tok::Dot)?;
        let body = self.formula()?;
        Ok(vars.into_iter().rev().fold(body, |acc, v| {
            if universal {
                Formula::forall(v, acc)
            } else {
                Formula::exists(v, acc)
            }
        }))
    }

    fn binder(&mut self) -> Result<String, ParseError> {
        match self.peek().clone() {
            Tok::Ident(name) if !RESERVED_WORDS.contains(&name.as_str()) => {
                if self.sig.lookup(&name).is_some() {
                    return Err(self.error_here(ParseErrorKind::BinderClash(name)));
                }
                self.bump();
                Ok(name)
            }
            _ => Err(self.unexpected("a variable")),
        }
    }

    fn atom(&mut self) -> Result<Formula, ParseError> {
        let name = match self.peek().clone() {
            Tok::LParen => {
                self.bump();
                let f = self.formula()?;
                self.expect(Tok::RParen)?;
                return Ok(f);
            }
            Tok::Ident(name) => name,
            _ => return Err(self.unexpected("a formula")),
        };
        match name.as_str() {
            "bot" => {
                self.bump();
                return Ok(Formula::Falsum);
            }
            "top" => {
                self.bump();
                return Ok(Formula::Top);
            }
            "cons" => {
                self.bump();
                self.expect(Tok::LParen)?;
                let f = self.formula()?;
                self.expect(Tok::RParen)?;
                return Ok(f.cons());
            }
            _ => {}
        }
        match self.sig.lookup(&name) {
            Some(Symbol::Predicate(arity)) => {
                let start = self.offset();
                self.bump();
                let args = self.arguments(&name)?;
                if args.len() != arity {
                    return Err(make_error(
                        self.text,
                        start,
                        ParseErrorKind::ArityMismatch { symbol: name, expected: arity, found: args.len() },
                    ));
                }
                Ok(Formula::Pred(name, args))
            }
            Some(Symbol::Proposition) => {
                self.bump();
                if *self.peek() == Tok::LParen {
                    return Err(self.error_here(ParseErrorKind::Misused {
                        symbol: name,
                        what: "is a proposition and takes no arguments",
                    }));
                }
                Ok(Formula::Prop(name))
            }
            None if *self.peek2() != Tok::Equals && *self.peek2() != Tok::LParen => {
                Err(self.error_here(ParseErrorKind::UnknownSymbol(name)))
            }
            _ => {
                let lhs = self.term()?;
                self.expect(Tok::Equals)?;
                let rhs = self.term()?;
                Ok(Formula::Eq(lhs, rhs))
            }
        }
    }

    fn arguments(&mut self, owner: &str) -> Result<Vec<Term>, ParseError> {
        if *self.peek() != Tok::LParen {
            return Err(self.unexpected(&format!("`(` after `{owner}`")));
        }
        self.bump();
        let mut args = vec![self.term()?];
        while *self.peek() == Tok::Comma {
            self.bump();
            args.push(self.term()?);
        }
        self.expect(Tok::RParen)?;
        Ok(args)
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        let start = self.offset();
        let name = match self.peek().clone() {
            Tok::Ident(n) if !RESERVED_WORDS.contains(&n.as_str()) => n,
            _ => return Err(self.unexpected("a term")),
        };
        match self.sig.lookup(&name) {
            Some(Symbol::Function(arity)) => {
                self.bump();
                let args = self.arguments(&name)?;
                if args.len() != arity {
                    return Err(make_error(
                        self.text,
                        start,
                        ParseErrorKind::ArityMismatch { symbol: name, expected: arity, found: args.len() },
                    ));
                }
                Ok(Term::App(name, args))
            }
            Some(Symbol::Constant) => {
                self.bump();
                if *self.peek() == Tok::LParen {
                    return Err(self.error_here(ParseErrorKind::Misused {
                        symbol: name,
                        what: "is a constant and takes no arguments",
                    }));
                }
                Ok(Term::Const(name))
            }
            Some(Symbol::Predicate(_)) | Some(Symbol::Proposition) => Err(self.error_here(ParseErrorKind::Misused {
                symbol: name,
                what: "is a predicate and cannot be used as a term",
            })),
            None => {
                if *self.peek2() == Tok::LParen {
                    return Err(self.error_here(ParseErrorKind::UnknownSymbol(name)));
                }
                self.bump();
                Ok(Term::Var(name))
            }
        }
    }

    fn formula_list(&mut self, stop: &[Tok]) -> Result<Vec<Formula>, ParseError> {
        let mut out = Vec::new();
        if stop.contains(self.peek()) {
            return Ok(out);
        }
        out.push(self.formula()?);
        while *self.peek() == Tok::Comma {
            self.bump();
            out.push(self.formula()?);
        }
        Ok(out)
    }
}

/// Parses a single formula over `sig`. Undeclared lower-level names in term
/// position are variables.
pub fn parse_formula(text: &str, sig: &Signature) -> Result<Formula, ParseError> {
    let mut p = Parser::new(text, sig)?;
    let f = p.formula()?;
    p.expect_eof()?;
    Ok(f)
}

pub fn parse_term(text: &str, sig: &Signature) -> Result<Term, ParseError> {
    let mut p = Parser::new(text, sig)?;
    let t = p.term()?;
    p.expect_eof()?;
    Ok(t)
}

/// Parses a comma-separated, possibly empty, list of formulas.
pub fn parse_formula_list(text: &str, sig: &Signature) -> Result<Vec<Formula>, ParseError> {
    let mut p = Parser::new(text, sig)?;
    let list = p.formula_list(&[Tok::Eof])?;
    p.expect_eof()?;
    Ok(list)
}

/// Parses `A1, ..., An |- B1, ..., Bm` into its two sides.
pub fn parse_sequent_parts(text: &str, sig: &Signature) -> Result<(Vec<Formula>, Vec<Formula>), ParseError> {
    let mut p = Parser::new(text, sig)?;
    let lhs = p.formula_list(&[Tok::Turnstile])?;
    p.expect(Tok::Turnstile)?;
    let rhs = p.formula_list(&[Tok::Eof])?;
    p.expect_eof()?;
    Ok((lhs, rhs))
}
