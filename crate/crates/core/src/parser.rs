//! Concrete syntax.
//!
//! ```text
//! formula := 'forall' VAR '.' formula | 'exists' VAR '.' formula | imp
//! imp     := disj ('->' imp)?                     (right-associative)
//! disj    := conj ('or' conj)*                    (left-associative)
//! conj    := neg ('and' neg)*
//! neg     := 'not' neg | atom
//! atom    := NAME '(' term ')' | term '=' term | '(' formula ')'
//!          | 'true' | 'false' | prop
//! prop    := '[' formula ('||' formula)? ']' '_' VAR cmp RATIONAL
//! cmp     := '~' '(' INT ')' | '<~' '(' INT ')' | '>~' '(' INT ')'
//! RATIONAL:= INT ('/' INT)? | DECIMAL
//! ```
//!
//! Quantifier bodies extend as far right as possible. Predicates start
//! uppercase, constants lowercase; a single lowercase letter is a variable
//! when an enclosing `forall`/`exists`/proportion binds it, and otherwise must
//! be a declared constant. `#` starts a line comment. Decimals are exact:
//! `0.9` means 9/10.

use crate::syntax::{Comparator, Formula, PropCompare, Term};
use crate::vocab::{Vocabulary, KEYWORDS};
use num::{BigInt, BigRational, One, Signed, Zero};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
#[error("parse error at {line}:{col}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

// ---------------------------------------------------------------------------
// Lexer
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(String),
    Decimal(String),
    LParen,
    RParen,
    LBracket,
    RBracket,
    Arrow,
    Equals,
    Tilde,
    LeTilde,
    GeTilde,
    Bar2,
    Dot,
    Underscore,
    Slash,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Tok::Ident(s) => return write!(f, "`{s}`"),
            Tok::Int(s) | Tok::Decimal(s) => return write!(f, "`{s}`"),
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::LBracket => "[",
            Tok::RBracket => "]",
            Tok::Arrow => "->",
            Tok::Equals => "=",
            Tok::Tilde => "~",
            Tok::LeTilde => "<~",
            Tok::GeTilde => ">~",
            Tok::Bar2 => "||",
            Tok::Dot => ".",
            Tok::Underscore => "_",
            Tok::Slash => "/",
        };
        write!(f, "`{s}`")
    }
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    col: usize,
}

impl<'a> Lexer<'a> {
    fn new(text: &'a str) -> Self {
        Lexer {
            chars: text.chars().peekable(),
            line: 1,
            col: 1,
        }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn err(&self, message: impl Into<String>) -> ParseError {
        ParseError {
            line: self.line,
            col: self.col,
            message: message.into(),
        }
    }

    fn tokens(mut self) -> Result<Vec<(Tok, usize, usize)>, ParseError> {
        let mut out = Vec::new();
        while let Some(&c) = self.chars.peek() {
            if c == '#' {
                while let Some(&c) = self.chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    self.bump();
                }
                continue;
            }
            if c.is_whitespace() {
                self.bump();
                continue;
            }
            let (line, col) = (self.line, self.col);
            let tok = if c.is_ascii_alphabetic() {
                let mut s = String::new();
                while let Some(&c) = self.chars.peek() {
                    if c.is_ascii_alphanumeric() || c == '_' {
                        s.push(c);
                        self.bump();
                    } else {
                        break;
                    }
                }
                Tok::Ident(s)
            } else if c.is_ascii_digit() {
                let mut s = String::new();
                while let Some(&c) = self.chars.peek() {
                    if c.is_ascii_digit() {
                        s.push(c);
                        self.bump();
                    } else {
                        break;
                    }
                }
                // A dot directly followed by a digit continues a decimal.
                let mut probe = self.chars.clone();
                if probe.next() == Some('.') && probe.peek().is_some_and(|c| c.is_ascii_digit()) {
                    s.push('.');
                    self.bump();
                    while let Some(&c) = self.chars.peek() {
                        if c.is_ascii_digit() {
                            s.push(c);
                            self.bump();
                        } else {
                            break;
                        }
                    }
                    Tok::Decimal(s)
                } else {
                    Tok::Int(s)
                }
            } else {
                match c {
                    '(' => {
                        self.bump();
                        Tok::LParen
                    }
                    ')' => {
                        self.bump();
                        Tok::RParen
                    }
                    '[' => {
                        self.bump();
                        Tok::LBracket
                    }
                    ']' => {
                        self.bump();
                        Tok::RBracket
                    }
                    '.' => {
                        self.bump();
                        Tok::Dot
                    }
                    '_' => {
                        self.bump();
                        Tok::Underscore
                    }
                    '/' => {
                        self.bump();
                        Tok::Slash
                    }
                    '=' => {
                        self.bump();
                        Tok::Equals
                    }
                    '~' => {
                        self.bump();
                        Tok::Tilde
                    }
                    '-' => {
                        self.bump();
                        if self.chars.peek() == Some(&'>') {
                            self.bump();
                            Tok::Arrow
                        } else {
                            return Err(self.err("expected `->`"));
                        }
                    }
                    '<' => {
                        self.bump();
                        if self.chars.peek() == Some(&'~') {
                            self.bump();
                            Tok::LeTilde
                        } else {
                            return Err(self.err("expected `<~`"));
                        }
                    }
                    '>' => {
                        self.bump();
                        if self.chars.peek() == Some(&'~') {
                            self.bump();
                            Tok::GeTilde
                        } else {
                            return Err(self.err("expected `>~`"));
                        }
                    }
                    '|' => {
                        self.bump();
                        if self.chars.peek() == Some(&'|') {
                            self.bump();
                            Tok::Bar2
                        } else {
                            return Err(self.err("expected `||`"));
                        }
                    }
                    other => return Err(self.err(format!("unexpected character `{other}`"))),
                }
            };
            out.push((tok, line, col));
        }
        Ok(out)
    }
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

struct Parser<'a> {
    toks: Vec<(Tok, usize, usize)>,
    pos: usize,
    vocab: &'a Vocabulary,
    binders: Vec<char>,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _, _)| t)
    }

    fn here(&self) -> (usize, usize) {
        self.toks
            .get(self.pos)
            .or_else(|| self.toks.last())
            .map_or((1, 1), |(_, l, c)| (*l, *c))
    }

    fn err(&self, message: impl Into<String>) -> ParseError {
        let (line, col) = self.here();
        ParseError {
            line,
            col,
            message: message.into(),
        }
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _, _)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok) -> Result<(), ParseError> {
        match self.peek() {
            Some(t) if *t == want => {
                self.bump();
                Ok(())
            }
            Some(t) => Err(self.err(format!("expected {want}, found {t}"))),
            None => Err(self.err(format!("expected {want}, found end of input"))),
        }
    }

    fn is_kw(t: Option<&Tok>, kw: &str) -> bool {
        matches!(t, Some(Tok::Ident(s)) if s == kw)
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        if Self::is_kw(self.peek(), "forall") || Self::is_kw(self.peek(), "exists") {
            let universal = Self::is_kw(self.peek(), "forall");
            self.bump();
            let var = self.bind_var()?;
            self.expect(Tok::Dot)?;
            self.binders.push(var);
            let body = self.formula()?;
            self.binders.pop();
            return Ok(if universal {
                Formula::forall(var, body)
            } else {
                Formula::exists(var, body)
            });
        }
        self.imp()
    }

    fn bind_var(&mut self) -> Result<char, ParseError> {
        match self.bump() {
            Some(Tok::Ident(s)) => {
                let mut chars = s.chars();
                match (chars.next(), chars.next()) {
                    (Some(c), None) if c.is_ascii_lowercase() => Ok(c),
                    _ => Err(self.err(format!(
                        "variable must be a single lowercase letter, found `{s}`"
                    ))),
                }
            }
            other => Err(self.err(format!(
                "expected a variable, found {}",
                other.map_or("end of input".to_string(), |t| t.to_string())
            ))),
        }
    }

    fn imp(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.disj()?;
        if self.peek() == Some(&Tok::Arrow) {
            self.bump();
            let rhs = self.imp()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disj(&mut self) -> Result<Formula, ParseError> {
        let mut f = self.conj()?;
        while Self::is_kw(self.peek(), "or") {
            self.bump();
            f = Formula::or(f, self.conj()?);
        }
        Ok(f)
    }

    fn conj(&mut self) -> Result<Formula, ParseError> {
        let mut f = self.neg()?;
        while Self::is_kw(self.peek(), "and") {
            self.bump();
            f = Formula::and(f, self.neg()?);
        }
        Ok(f)
    }

    fn neg(&mut self) -> Result<Formula, ParseError> {
        if Self::is_kw(self.peek(), "not") {
            self.bump();
            return Ok(Formula::not(self.neg()?));
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            Some(Tok::LParen) => {
                self.bump();
                let f = self.formula()?;
                self.expect(Tok::RParen)?;
                Ok(f)
            }
            Some(Tok::LBracket) => self.prop(),
            Some(Tok::Ident(s)) if s == "true" => {
                self.bump();
                Ok(Formula::True)
            }
            Some(Tok::Ident(s)) if s == "false" => {
                self.bump();
                Ok(Formula::False)
            }
            Some(Tok::Ident(s)) if KEYWORDS.contains(&s.as_str()) => {
                Err(self.err(format!("unexpected keyword `{s}`")))
            }
            Some(Tok::Ident(s)) if s.starts_with(|c: char| c.is_ascii_uppercase()) => {
                let name = s.clone();
                self.bump();
                if self.vocab.pred_index(&name).is_none() {
                    return Err(self.err(format!("unknown predicate `{name}`")));
                }
                self.expect(Tok::LParen)?;
                let t = self.term()?;
                self.expect(Tok::RParen)?;
                Ok(Formula::Pred(name, t))
            }
            Some(Tok::Ident(_)) => {
                let a = self.term()?;
                self.expect(Tok::Equals)?;
                let b = self.term()?;
                Ok(Formula::Eq(a, b))
            }
            Some(t) => Err(self.err(format!("expected a formula, found {t}"))),
            None => Err(self.err("expected a formula, found end of input")),
        }
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        match self.bump() {
            Some(Tok::Ident(s)) => {
                let mut chars = s.chars();
                if let (Some(c), None) = (chars.next(), chars.next()) {
                    if c.is_ascii_lowercase() && self.binders.contains(&c) {
                        return Ok(Term::Var(c));
                    }
                }
                if self.vocab.const_index(&s).is_some() {
                    Ok(Term::Const(s))
                } else if s.len() == 1 {
                    Err(self.err(format!(
                        "`{s}` is neither a bound variable nor a declared constant"
                    )))
                } else {
                    Err(self.err(format!("unknown constant `{s}`")))
                }
            }
            other => Err(self.err(format!(
                "expected a term, found {}",
                other.map_or("end of input".to_string(), |t| t.to_string())
            ))),
        }
    }

    /// The bound variable is written *after* the closing bracket (`]_x`), so
    /// scan ahead for it before parsing the bodies.
    fn prop(&mut self) -> Result<Formula, ParseError> {
        self.expect(Tok::LBracket)?;
        let var = self.scan_prop_var()?;
        self.binders.push(var);
        let numerator = self.formula()?;
        let denominator = if self.peek() == Some(&Tok::Bar2) {
            self.bump();
            Some(Box::new(self.formula()?))
        } else {
            None
        };
        self.binders.pop();
        self.expect(Tok::RBracket)?;
        self.expect(Tok::Underscore)?;
        let v2 = self.bind_var()?;
        debug_assert_eq!(var, v2);
        let cmp = match self.bump() {
            Some(Tok::Tilde) => Comparator::ApproxEq,
            Some(Tok::LeTilde) => Comparator::ApproxLe,
            Some(Tok::GeTilde) => Comparator::ApproxGe,
            other => {
                return Err(self.err(format!(
                    "expected `~`, `<~` or `>~`, found {}",
                    other.map_or("end of input".to_string(), |t| t.to_string())
                )))
            }
        };
        self.expect(Tok::LParen)?;
        let tol_index = match self.bump() {
            Some(Tok::Int(s)) => s
                .parse::<u32>()
                .ok()
                .filter(|&i| i >= 1)
                .ok_or_else(|| self.err("tolerance index must be a positive integer"))?,
            other => {
                return Err(self.err(format!(
                    "expected a tolerance index, found {}",
                    other.map_or("end of input".to_string(), |t| t.to_string())
                )))
            }
        };
        self.expect(Tok::RParen)?;
        let coeff = self.rational()?;
        if coeff.is_negative() || coeff > BigRational::one() {
            return Err(self.err(format!("coefficient {coeff} is outside [0, 1]")));
        }
        Ok(Formula::Prop(PropCompare {
            numerator: Box::new(numerator),
            denominator,
            var,
            cmp,
            tol_index,
            coeff,
        }))
    }

    /// From a position just past `[`, find the matching `]` and return the
    /// variable after its underscore.
    fn scan_prop_var(&self) -> Result<char, ParseError> {
        let mut depth = 1usize;
        let mut i = self.pos;
        while let Some((t, _, _)) = self.toks.get(i) {
            match t {
                Tok::LBracket => depth += 1,
                Tok::RBracket => {
                    depth -= 1;
                    if depth == 0 {
                        if let (Some((Tok::Underscore, _, _)), Some((Tok::Ident(s), l, c))) =
                            (self.toks.get(i + 1), self.toks.get(i + 2))
                        {
                            let mut chars = s.chars();
                            if let (Some(ch), None) = (chars.next(), chars.next()) {
                                if ch.is_ascii_lowercase() {
                                    return Ok(ch);
                                }
                            }
                            return Err(ParseError {
                                line: *l,
                                col: *c,
                                message: format!("proportion variable must be a single lowercase letter, found `{s}`"),
                            });
                        }
                        return Err(self.err("proportion bracket must be followed by `_x`"));
                    }
                }
                _ => {}
            }
            i += 1;
        }
        Err(self.err("unterminated proportion bracket"))
    }

    fn rational(&mut self) -> Result<BigRational, ParseError> {
        match self.bump() {
            Some(Tok::Int(s)) => {
                let p: BigInt = s.parse().map_err(|_| self.err("bad integer"))?;
                if self.peek() == Some(&Tok::Slash) {
                    self.bump();
                    match self.bump() {
                        Some(Tok::Int(q)) => {
                            let q: BigInt = q.parse().map_err(|_| self.err("bad integer"))?;
                            if q.is_zero() {
                                return Err(self.err("zero denominator"));
                            }
                            Ok(BigRational::new(p, q))
                        }
                        other => Err(self.err(format!(
                            "expected a denominator, found {}",
                            other.map_or("end of input".to_string(), |t| t.to_string())
                        ))),
                    }
                } else {
                    Ok(BigRational::from_integer(p))
                }
            }
            Some(Tok::Decimal(s)) => {
                Ok(parse_decimal(&s)
                    .ok_or_else(|| self.err(format!("bad decimal literal `{s}`")))?)
            }
            other => Err(self.err(format!(
                "expected a rational, found {}",
                other.map_or("end of input".to_string(), |t| t.to_string())
            ))),
        }
    }
}

fn parse_decimal(s: &str) -> Option<BigRational> {
    let (int_part, frac_part) = s.split_once('.')?;
    let int: BigInt = int_part.parse().ok()?;
    let frac: BigInt = frac_part.parse().ok()?;
    let scale = num::pow::pow(BigInt::from(10), frac_part.len());
    Some(BigRational::from_integer(int) + BigRational::new(frac, scale))
}

/// Parse a closed formula against a vocabulary.
pub fn parse(text: &str, vocab: &Vocabulary) -> Result<Formula, ParseError> {
    let toks = Lexer::new(text).tokens()?;
    let mut p = Parser {
        toks,
        pos: 0,
        vocab,
        binders: Vec::new(),
    };
    let f = p.formula()?;
    if p.pos != p.toks.len() {
        return Err(p.err(format!("trailing input starting at {}", p.peek().unwrap())));
    }
    Ok(f)
}

/// Parse `p/q`, an integer, or a decimal into an exact rational.
/// Used for tolerance values and CLI arguments.
pub fn parse_rational(s: &str) -> Result<BigRational, String> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p
            .trim()
            .parse()
            .map_err(|_| format!("bad rational `{s}`"))?;
        let q: BigInt = q
            .trim()
            .parse()
            .map_err(|_| format!("bad rational `{s}`"))?;
        if q.is_zero() {
            return Err(format!("zero denominator in `{s}`"));
        }
        return Ok(BigRational::new(p, q));
    }
    if s.contains('.') {
        // Scientific shorthand is not supported; decimals are exact.
        return parse_decimal(s).ok_or_else(|| format!("bad decimal `{s}`"));
    }
    if let Some(exp) = s.strip_prefix("1e-").or_else(|| s.strip_prefix("1E-")) {
        // Grid values are conventionally written 1e-2, 1e-3, ...
        let exp: usize = exp.parse().map_err(|_| format!("bad rational `{s}`"))?;
        return Ok(BigRational::new(
            1.into(),
            num::pow::pow(BigInt::from(10), exp),
        ));
    }
    let p: BigInt = s.parse().map_err(|_| format!("bad rational `{s}`"))?;
    Ok(BigRational::from_integer(p))
}

/// Parse a KB file: header lines `predicates: ...` and `constants: ...`
/// followed by one closed formula (possibly spanning several lines).
pub fn parse_kb_text(text: &str) -> Result<(Vocabulary, Formula), String> {
    let mut predicates: Option<Vec<String>> = None;
    let mut constants: Vec<String> = Vec::new();
    let mut body = String::new();
    for line in text.lines() {
        let stripped = line.split('#').next().unwrap_or("").trim();
        if let Some(rest) = stripped.strip_prefix("predicates:") {
            if predicates.is_some() {
                return Err("duplicate `predicates:` header".into());
            }
            predicates = Some(
                rest.split(',')
                    .map(|s| s.trim().to_string())
                    .filter(|s| !s.is_empty())
                    .collect(),
            );
        } else if let Some(rest) = stripped.strip_prefix("constants:") {
            constants = rest
                .split(',')
                .map(|s| s.trim().to_string())
                .filter(|s| !s.is_empty())
                .collect();
        } else {
            body.push_str(stripped);
            body.push('\n');
        }
    }
    let predicates = predicates.ok_or("missing `predicates:` header")?;
    let vocab = Vocabulary::new(predicates, constants).map_err(|e| e.to_string())?;
    let formula = parse(&body, &vocab).map_err(|e| e.to_string())?;
    Ok((vocab, formula))
}
