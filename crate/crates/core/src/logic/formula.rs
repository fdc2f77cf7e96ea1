//! Formulas over `⊥, &, ⇒, ⊓, □`, the ASCII grammar and its printer.
//!
//! Grammar, loosest binding first:
//!
//! ```text
//! imp   := lat ( ("->" | "<->") imp )?        right associative
//! lat   := conj ( ("^" | "|") conj )*         left associative
//! conj  := unary ( "&" unary )*               left associative
//! unary := ("box" | "neg") unary | atom
//! atom  := "p" digits | "bot" | "top" | "(" imp ")"
//! ```
//!
//! `top`, `neg`, `|` and `<->` are abbreviations and expand while parsing:
//! `top = bot -> bot`, `neg a = a -> bot`,
//! `a | b = ((a -> b) -> b) ^ ((b -> a) -> a)`,
//! `a <-> b = (a -> b) & (b -> a)`. The printer folds them back.

use std::fmt;

use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Var(usize),
    Bot,
    /// strong conjunction `&`
    And(Box<Formula>, Box<Formula>),
    Imp(Box<Formula>, Box<Formula>),
    /// weak conjunction `⊓`, written `^`
    Min(Box<Formula>, Box<Formula>),
    Box(Box<Formula>),
}

impl Formula {
    pub fn var(i: usize) -> Formula {
        Formula::Var(i)
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn imp(a: Formula, b: Formula) -> Formula {
        Formula::Imp(Box::new(a), Box::new(b))
    }

    pub fn min(a: Formula, b: Formula) -> Formula {
        Formula::Min(Box::new(a), Box::new(b))
    }

    pub fn boxed(a: Formula) -> Formula {
        Formula::Box(Box::new(a))
    }

    pub fn top() -> Formula {
        Formula::imp(Formula::Bot, Formula::Bot)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn neg(a: Formula) -> Formula {
        Formula::imp(a, Formula::Bot)
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::min(
            Formula::imp(Formula::imp(a.clone(), b.clone()), b.clone()),
            Formula::imp(Formula::imp(b, a.clone()), a),
        )
    }

    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::and(Formula::imp(a.clone(), b.clone()), Formula::imp(b, a))
    }

    /// `a ⇒ b` split into its parts.
    pub fn as_imp(&self) -> Option<(&Formula, &Formula)> {
        match self {
            Formula::Imp(a, b) => Some((a, b)),
            _ => None,
        }
    }

    /// One more than the largest variable index, or 0.
    pub fn var_count(&self) -> usize {
        match self {
            Formula::Var(i) => i + 1,
            Formula::Bot => 0,
            Formula::Box(a) => a.var_count(),
            Formula::And(a, b) | Formula::Imp(a, b) | Formula::Min(a, b) => a.var_count().max(b.var_count()),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Formula::Var(_) | Formula::Bot => 0,
            Formula::Box(a) => 1 + a.depth(),
            Formula::And(a, b) | Formula::Imp(a, b) | Formula::Min(a, b) => 1 + a.depth().max(b.depth()),
        }
    }

    /// Replaces `Var(i)` by `subst[i]`.
    pub fn substitute(&self, subst: &[Formula]) -> Formula {
        match self {
            Formula::Var(i) => subst[*i].clone(),
            Formula::Bot => Formula::Bot,
            Formula::Box(a) => Formula::boxed(a.substitute(subst)),
            Formula::And(a, b) => Formula::and(a.substitute(subst), b.substitute(subst)),
            Formula::Imp(a, b) => Formula::imp(a.substitute(subst), b.substitute(subst)),
            Formula::Min(a, b) => Formula::min(a.substitute(subst), b.substitute(subst)),
        }
    }

    /// Renders with `Var(i)` printed as `names[i]`.
    pub fn display_with<'a>(&'a self, names: &'a [&'a str]) -> impl fmt::Display + 'a {
        Printer {
            f: self,
            names: Some(names),
        }
    }
}

/// Abbreviation recognised at the root of a formula when printing.
enum Sugar<'a> {
    Top,
    Neg(&'a Formula),
    Or(&'a Formula, &'a Formula),
    Iff(&'a Formula, &'a Formula),
}

fn sugar(f: &Formula) -> Option<Sugar<'_>> {
    match f {
        Formula::Imp(a, b) if **b == Formula::Bot => {
            if **a == Formula::Bot {
                Some(Sugar::Top)
            } else {
                Some(Sugar::Neg(a))
            }
        }
        Formula::Min(l, r) => {
            let (l1, lb) = l.as_imp()?;
            let (l2, lb2) = l1.as_imp()?;
            let (r1, ra) = r.as_imp()?;
            let (r2, ra2) = r1.as_imp()?;
            (lb == lb2 && ra == ra2 && l2 == ra && r2 == lb).then_some(Sugar::Or(l2, lb))
        }
        Formula::And(l, r) => {
            let (a, b) = l.as_imp()?;
            let (b2, a2) = r.as_imp()?;
            (a == a2 && b == b2).then_some(Sugar::Iff(a, b))
        }
        _ => None,
    }
}

// Precedence levels: 1 implication, 2 lattice, 3 conjunction, 4 unary/atom.
struct Printer<'a> {
    f: &'a Formula,
    names: Option<&'a [&'a str]>,
}

impl Printer<'_> {
    fn sub(&self, f: &Formula, min_level: u8) -> Result<String, fmt::Error> {
        let (level, body) = self.render(f)?;
        Ok(if level < min_level { format!("({body})") } else { body })
    }

    fn render(&self, f: &Formula) -> Result<(u8, String), fmt::Error> {
        if let Some(s) = sugar(f) {
            return Ok(match s {
                Sugar::Top => (4, "top".to_string()),
                Sugar::Neg(a) => (4, format!("neg {}", self.sub(a, 4)?)),
                Sugar::Or(a, b) => (2, format!("{} | {}", self.sub(a, 2)?, self.sub(b, 3)?)),
                Sugar::Iff(a, b) => (1, format!("{} <-> {}", self.sub(a, 2)?, self.sub(b, 1)?)),
            });
        }
        Ok(match f {
            Formula::Var(i) => match self.names {
                Some(names) => (4, names[*i].to_string()),
                None => (4, format!("p{i}")),
            },
            Formula::Bot => (4, "bot".to_string()),
            Formula::Box(a) => (4, format!("box {}", self.sub(a, 4)?)),
            Formula::And(a, b) => (3, format!("{} & {}", self.sub(a, 3)?, self.sub(b, 4)?)),
            Formula::Min(a, b) => (2, format!("{} ^ {}", self.sub(a, 2)?, self.sub(b, 3)?)),
            Formula::Imp(a, b) => (1, format!("{} -> {}", self.sub(a, 2)?, self.sub(b, 1)?)),
        })
    }
}

impl fmt::Display for Printer<'_> {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        out.write_str(&self.render(self.f)?.1)
    }
}

/// Serializes as its printed text.
impl serde::Serialize for Formula {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        Printer { f: self, names: None }.fmt(out)
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("column {column}: {message}")]
pub struct ParseError {
    /// 1-based character column.
    pub column: usize,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Token {
    Var(usize),
    Ident(String),
    Amp,
    Caret,
    Bar,
    Arrow,
    Iff,
    LParen,
    RParen,
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Token::Var(i) => write!(f, "p{i}"),
            Token::Ident(s) => f.write_str(s),
            Token::Amp => f.write_str("&"),
            Token::Caret => f.write_str("^"),
            Token::Bar => f.write_str("|"),
            Token::Arrow => f.write_str("->"),
            Token::Iff => f.write_str("<->"),
            Token::LParen => f.write_str("("),
            Token::RParen => f.write_str(")"),
        }
    }
}

fn tokenize(text: &str) -> Result<Vec<(usize, Token)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let err = |column: usize, message: String| ParseError { column, message };
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        let rest: String = chars[i..chars.len().min(i + 3)].iter().collect();
        let symbol = match c {
            '&' => Some((Token::Amp, 1)),
            '^' => Some((Token::Caret, 1)),
            '|' => Some((Token::Bar, 1)),
            '(' => Some((Token::LParen, 1)),
            ')' => Some((Token::RParen, 1)),
            '-' if rest.starts_with("->") => Some((Token::Arrow, 2)),
            '<' if rest.starts_with("<->") => Some((Token::Iff, 3)),
            _ => None,
        };
        if let Some((token, width)) = symbol {
            out.push((col, token));
            i += width;
        } else if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let word: String = chars[start..i].iter().collect();
            let digits = word
                .strip_prefix('p')
                .filter(|d| !d.is_empty() && d.chars().all(|c| c.is_ascii_digit()));
            let token = match digits {
                Some(d) => Token::Var(
                    d.parse()
                        .map_err(|_| err(col, format!("variable index `{d}` is too large")))?,
                ),
                None => Token::Ident(word),
            };
            out.push((col, token));
        } else {
            return Err(err(col, format!("unexpected character `{c}`")));
        }
    }
    Ok(out)
}

/// Metavariable names accepted in schema patterns, in index order.
pub const METAVARIABLES: [&str; 3] = ["alpha", "beta", "gamma"];

struct Parser {
    tokens: Vec<(usize, Token)>,
    pos: usize,
    end: usize,
    metavariables: bool,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn column(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.end, |(c, _)| *c)
    }

    fn fail<T>(&self, message: String) -> Result<T, ParseError> {
        Err(ParseError {
            column: self.column(),
            message,
        })
    }

    fn imp(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.lat()?;
        match self.peek() {
            Some(Token::Arrow) => {
                self.pos += 1;
                Ok(Formula::imp(lhs, self.imp()?))
            }
            Some(Token::Iff) => {
                self.pos += 1;
                Ok(Formula::iff(lhs, self.imp()?))
            }
            _ => Ok(lhs),
        }
    }

    fn lat(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.conj()?;
        loop {
            match self.peek() {
                Some(Token::Caret) => {
                    self.pos += 1;
                    lhs = Formula::min(lhs, self.conj()?);
                }
                Some(Token::Bar) => {
                    self.pos += 1;
                    lhs = Formula::or(lhs, self.conj()?);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn conj(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.unary()?;
        while self.peek() == Some(&Token::Amp) {
            self.pos += 1;
            lhs = Formula::and(lhs, self.unary()?);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek().cloned() {
            Some(Token::Ident(w)) if w == "box" => {
                self.pos += 1;
                Ok(Formula::boxed(self.unary()?))
            }
            Some(Token::Ident(w)) if w == "neg" => {
                self.pos += 1;
                Ok(Formula::neg(self.unary()?))
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<Formula, ParseError> {
        let Some(token) = self.peek().cloned() else {
            return self.fail("unexpected end of formula".to_string());
        };
        let f = match token {
            Token::Var(i) if !self.metavariables => Formula::Var(i),
            Token::Ident(w) if w == "bot" => Formula::Bot,
            Token::Ident(w) if w == "top" => Formula::top(),
            Token::Ident(w) if self.metavariables && METAVARIABLES.contains(&w.as_str()) => {
                Formula::Var(METAVARIABLES.iter().position(|m| *m == w).unwrap())
            }
            Token::LParen => {
                self.pos += 1;
                let inner = self.imp()?;
                if self.peek() != Some(&Token::RParen) {
                    return self.fail("expected `)`".to_string());
                }
                inner
            }
            Token::Ident(w) => return self.fail(format!("unknown identifier `{w}`")),
            other => return self.fail(format!("unexpected `{other}`")),
        };
        self.pos += 1;
        Ok(f)
    }
}

fn parse_with(text: &str, metavariables: bool) -> Result<Formula, ParseError> {
    let tokens = tokenize(text)?;
    let mut p = Parser {
        tokens,
        pos: 0,
        end: text.chars().count() + 1,
        metavariables,
    };
    let f = p.imp()?;
    if p.pos < p.tokens.len() {
        return p.fail(format!("unexpected `{}` after a complete formula", p.tokens[p.pos].1));
    }
    Ok(f)
}

pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    parse_with(text, false)
}

/// Parses a pattern whose variables are the metavariables `alpha`, `beta`,
/// `gamma`, mapped to indices 0, 1, 2.
pub fn parse_pattern(text: &str) -> Result<Formula, ParseError> {
    parse_with(text, true)
}
