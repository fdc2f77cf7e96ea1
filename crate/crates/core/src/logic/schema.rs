//! Axiom schemas and one-way pattern matching.

use std::fmt;

use serde::Serialize;

use super::formula::{parse_pattern, Formula, METAVARIABLES};
use crate::quantifier::U2Parse;

/// An axiom schema: a pattern over the metavariables `alpha, beta, gamma`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Schema {
    pub id: String,
    #[serde(serialize_with = "serialize_pattern")]
    pub pattern: Formula,
    /// Number of metavariables the pattern uses.
    pub arity: usize,
}

fn serialize_pattern<S: serde::Serializer>(f: &Formula, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(&f.display_with(&METAVARIABLES))
}

impl fmt::Display for Schema {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.id, self.pattern.display_with(&METAVARIABLES))
    }
}

/// Optional axioms for the standard extensions of the base logic.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Extension {
    /// `¬¬α ⇒ α`
    Inv,
    /// `¬(α&β) ⊔ (α⊓β ⇒ α&β)`
    Wnm,
    /// `((α⇒β)⇒β) ⇒ ((β⇒α)⇒α)`
    Mv,
    /// `α ⊔ ¬α`
    Em,
}

impl Extension {
    pub const ALL: [Extension; 4] = [Extension::Inv, Extension::Wnm, Extension::Mv, Extension::Em];

    pub fn id(self) -> &'static str {
        match self {
            Extension::Inv => "INV",
            Extension::Wnm => "WNM",
            Extension::Mv => "MV",
            Extension::Em => "EM",
        }
    }

    fn pattern(self) -> &'static str {
        match self {
            Extension::Inv => "neg neg alpha -> alpha",
            Extension::Wnm => "neg (alpha & beta) | (alpha ^ beta -> alpha & beta)",
            Extension::Mv => "((alpha -> beta) -> beta) -> (beta -> alpha) -> alpha",
            Extension::Em => "alpha | neg alpha",
        }
    }
}

/// Rule id of "from `α⊔β` derive `α⊔□β`".
pub const DISJUNCTION_RULE: &str = "DR";

const BASE: [(&str, &str); 10] = [
    ("A1", "(alpha -> beta) -> (beta -> gamma) -> alpha -> gamma"),
    ("A2", "alpha & beta -> alpha"),
    ("A3", "alpha & beta -> beta & alpha"),
    ("A4", "alpha ^ beta -> alpha"),
    ("A5", "alpha ^ beta -> beta ^ alpha"),
    ("A6", "alpha & (alpha -> beta) -> alpha ^ beta"),
    ("A7", "(alpha -> beta -> gamma) -> alpha & beta -> gamma"),
    ("A8", "(alpha & beta -> gamma) -> alpha -> beta -> gamma"),
    (
        "A9",
        "((alpha -> beta) -> gamma) -> ((beta -> alpha) -> gamma) -> gamma",
    ),
    ("A10", "bot -> alpha"),
];

fn modal(parse: U2Parse) -> Vec<(&'static str, String)> {
    let m2_left = match parse {
        U2Parse::Standard => "box ((alpha -> box beta) -> box beta)",
        U2Parse::Alt => "box (alpha -> box beta -> box beta)",
    };
    let m2_right = "(box alpha -> box beta) -> box beta";
    vec![
        ("M1", "box alpha -> alpha".to_string()),
        ("M2a", format!("{m2_left} -> {m2_right}")),
        ("M2b", format!("({m2_right}) -> {m2_left}")),
        ("M3a", "box (box alpha -> beta) -> box alpha -> box beta".to_string()),
        ("M3b", "(box alpha -> box beta) -> box (box alpha -> beta)".to_string()),
    ]
}

fn schema(id: &str, text: &str) -> Schema {
    let pattern = parse_pattern(text).expect("built-in schemas parse");
    Schema {
        id: id.to_string(),
        arity: pattern.var_count(),
        pattern,
    }
}

/// The axioms and extra rules a proof may use.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SchemaCatalog {
    schemas: Vec<Schema>,
    extensions: Vec<Extension>,
    disjunction_rule: bool,
    parse: U2Parse,
}

impl SchemaCatalog {
    /// `A1..A10`, `M1`, both directions of `M2` and `M3`.
    pub fn mmtl(parse: U2Parse) -> Self {
        let mut schemas: Vec<Schema> = BASE.iter().map(|(id, text)| schema(id, text)).collect();
        schemas.extend(modal(parse).iter().map(|(id, text)| schema(id, text)));
        SchemaCatalog {
            schemas,
            extensions: Vec::new(),
            disjunction_rule: false,
            parse,
        }
    }

    pub fn with_extension(mut self, ext: Extension) -> Self {
        if !self.extensions.contains(&ext) {
            self.extensions.push(ext);
            self.schemas.push(schema(ext.id(), ext.pattern()));
        }
        self
    }

    /// Enables the rule "from `α⊔β` derive `α⊔□β`".
    pub fn with_disjunction_rule(mut self) -> Self {
        self.disjunction_rule = true;
        self
    }

    pub fn schemas(&self) -> &[Schema] {
        &self.schemas
    }

    pub fn get(&self, id: &str) -> Option<&Schema> {
        self.schemas.iter().find(|s| s.id == id)
    }

    pub fn extensions(&self) -> &[Extension] {
        &self.extensions
    }

    pub fn has_disjunction_rule(&self) -> bool {
        self.disjunction_rule
    }

    pub fn parse(&self) -> U2Parse {
        self.parse
    }

    /// The instance of schema `id` under `subst`, which must cover its arity.
    pub fn instance(&self, id: &str, subst: &[Formula]) -> Option<Formula> {
        let s = self.get(id)?;
        (subst.len() >= s.arity).then(|| s.pattern.substitute(subst))
    }
}

/// Extends `binding` so that `pattern` under it equals `formula`.
/// Metavariables already bound must agree.
pub fn match_pattern(pattern: &Formula, formula: &Formula, binding: &mut Vec<Option<Formula>>) -> bool {
    match (pattern, formula) {
        (Formula::Var(i), f) => {
            if binding.len() <= *i {
                binding.resize(*i + 1, None);
            }
            match &binding[*i] {
                Some(bound) => bound == f,
                None => {
                    binding[*i] = Some(f.clone());
                    true
                }
            }
        }
        (Formula::Bot, Formula::Bot) => true,
        (Formula::Box(p), Formula::Box(f)) => match_pattern(p, f, binding),
        (Formula::And(p1, p2), Formula::And(f1, f2))
        | (Formula::Imp(p1, p2), Formula::Imp(f1, f2))
        | (Formula::Min(p1, p2), Formula::Min(f1, f2)) => {
            match_pattern(p1, f1, binding) && match_pattern(p2, f2, binding)
        }
        _ => false,
    }
}

/// The two disjuncts of `a ⊔ b` in its expanded form.
pub fn as_join(f: &Formula) -> Option<(&Formula, &Formula)> {
    let Formula::Min(l, _) = f else { return None };
    let (ab, b) = l.as_imp()?;
    let (a, b2) = ab.as_imp()?;
    let expected = Formula::or(a.clone(), b.clone());
    (b == b2 && *f == expected).then_some((a, b))
}
