//! The line-oriented algebra file format.
//!
//! ```text
//! algebra <ident>
//! size <n>
//! names <n tokens>      (optional)
//! odot
//! <n lines of n indices>
//! arrow
//! <n lines of n indices>
//! forall <n indices>    (optional)
//! ```
//!
//! `#` starts a comment anywhere on a line.

use std::fmt::{self, Write as _};

use thiserror::Error;
use umtl_core::{Elem, FiniteMTLAlgebra, ValidationError};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraDocument {
    pub ident: String,
    pub size: usize,
    pub names: Option<Vec<String>>,
    pub odot: Vec<Vec<Elem>>,
    pub arrow: Vec<Vec<Elem>>,
    pub forall: Option<Vec<Elem>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct DocumentError {
    pub line: usize,
    pub message: String,
}

struct Lines<'a> {
    lines: Vec<(usize, Vec<&'a str>)>,
    pos: usize,
    last: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        let lines = text
            .lines()
            .enumerate()
            .filter_map(|(i, l)| {
                let l = l.split('#').next().unwrap_or("");
                let words: Vec<&str> = l.split_whitespace().collect();
                (!words.is_empty()).then_some((i + 1, words))
            })
            .collect();
        Lines {
            lines,
            pos: 0,
            last: text.lines().count().max(1),
        }
    }

    fn peek_keyword(&self) -> Option<&'a str> {
        self.lines.get(self.pos).map(|(_, w)| w[0])
    }

    fn next(&mut self, what: &str) -> Result<(usize, Vec<&'a str>), DocumentError> {
        let item = self.lines.get(self.pos).cloned().ok_or_else(|| DocumentError {
            line: self.last,
            message: format!("unexpected end of input, expected {what}"),
        })?;
        self.pos += 1;
        Ok(item)
    }

    fn keyword(&mut self, kw: &str, args: Option<usize>) -> Result<(usize, Vec<&'a str>), DocumentError> {
        let (line, words) = self.next(&format!("`{kw}`"))?;
        if words[0] != kw {
            return Err(err(line, format!("expected `{kw}`, found `{}`", words[0])));
        }
        if let Some(n) = args {
            if words.len() - 1 != n {
                return Err(err(
                    line,
                    format!("`{kw}` takes {n} argument(s), found {}", words.len() - 1),
                ));
            }
        }
        Ok((line, words[1..].to_vec()))
    }
}

fn err(line: usize, message: String) -> DocumentError {
    DocumentError { line, message }
}

fn indices(line: usize, words: &[&str], n: usize) -> Result<Vec<Elem>, DocumentError> {
    if words.len() != n {
        return Err(err(line, format!("expected {n} indices, found {}", words.len())));
    }
    words
        .iter()
        .map(|w| {
            w.parse::<Elem>()
                .map_err(|_| err(line, format!("`{w}` is not an element index")))
        })
        .collect()
}

fn table(lines: &mut Lines, kw: &str, n: usize) -> Result<Vec<Vec<Elem>>, DocumentError> {
    lines.keyword(kw, Some(0))?;
    (0..n)
        .map(|_| {
            let (line, words) = lines.next(&format!("a row of `{kw}`"))?;
            indices(line, &words, n)
        })
        .collect()
}

impl AlgebraDocument {
    pub fn parse(text: &str) -> Result<Self, DocumentError> {
        let mut lines = Lines::new(text);
        let (line, ident) = lines.keyword("algebra", Some(1))?;
        let ident = ident[0].to_string();
        if !ident.chars().all(|c| c.is_ascii_alphanumeric() || "-_.".contains(c)) {
            return Err(err(
                line,
                format!("identifier `{ident}` may use only letters, digits, `-`, `_` and `.`"),
            ));
        }
        let (line, size) = lines.keyword("size", Some(1))?;
        let size: usize = size[0].parse().ok().filter(|&n| n >= 2).ok_or_else(|| {
            err(
                line,
                format!("size must be an integer of at least 2, found `{}`", size[0]),
            )
        })?;
        let names = if lines.peek_keyword() == Some("names") {
            let (line, words) = lines.keyword("names", Some(size))?;
            let names: Vec<String> = words.iter().map(|s| s.to_string()).collect();
            if let Some(dup) = names.iter().enumerate().find(|(i, n)| names[..*i].contains(n)) {
                return Err(err(line, format!("duplicate name `{}`", dup.1)));
            }
            Some(names)
        } else {
            None
        };
        let odot = table(&mut lines, "odot", size)?;
        let arrow = table(&mut lines, "arrow", size)?;
        let forall = if lines.peek_keyword() == Some("forall") {
            let (line, words) = lines.keyword("forall", None)?;
            Some(indices(line, &words, size)?)
        } else {
            None
        };
        if let Some((line, words)) = lines.lines.get(lines.pos) {
            return Err(err(*line, format!("unexpected `{}` after the tables", words[0])));
        }
        Ok(AlgebraDocument {
            ident,
            size,
            names,
            odot,
            arrow,
            forall,
        })
    }

    /// Validates the tables; the top is `0 → 0`.
    pub fn to_algebra(&self) -> Result<FiniteMTLAlgebra, ValidationError> {
        let top = self.arrow.first().and_then(|r| r.first()).copied().unwrap_or(0);
        let alg = FiniteMTLAlgebra::validate(self.size, &self.odot, &self.arrow, top)?;
        match &self.names {
            Some(n) => alg.with_names(n.clone()),
            None => Ok(alg),
        }
    }

    pub fn from_algebra(ident: &str, alg: &FiniteMTLAlgebra, forall: Option<&[Elem]>) -> Self {
        AlgebraDocument {
            ident: ident.to_string(),
            size: alg.size(),
            names: alg.has_custom_names().then(|| alg.names().to_vec()),
            odot: alg.odot_rows(),
            arrow: alg.arrow_rows(),
            forall: forall.map(<[Elem]>::to_vec),
        }
    }
}

fn row(out: &mut fmt::Formatter<'_>, xs: &[Elem]) -> fmt::Result {
    let mut s = String::new();
    for (i, x) in xs.iter().enumerate() {
        if i > 0 {
            s.push(' ');
        }
        write!(s, "{x}")?;
    }
    writeln!(out, "{s}")
}

impl fmt::Display for AlgebraDocument {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(out, "algebra {}", self.ident)?;
        writeln!(out, "size {}", self.size)?;
        if let Some(names) = &self.names {
            writeln!(out, "names {}", names.join(" "))?;
        }
        for (kw, t) in [("odot", &self.odot), ("arrow", &self.arrow)] {
            writeln!(out, "{kw}")?;
            for r in t {
                row(out, r)?;
            }
        }
        if let Some(f) = &self.forall {
            write!(out, "forall ")?;
            row(out, f)?;
        }
        Ok(())
    }
}
