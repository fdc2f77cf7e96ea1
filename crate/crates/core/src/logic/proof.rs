//! Hilbert-style proofs, their checker and the line-oriented proof file format.
//!
//! ```text
//! # comment
//! theory:
//!   h: p0 -> p1
//! step 1: bot -> p0 ; axiom A10 [alpha:=p0]
//! step 2: p0 -> p1 ; hyp h
//! step 3: box (p0 -> p1) ; nec 2
//! ```
//!
//! Step numbers in files are 1-based; [`Justification`] indices are 0-based.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use super::formula::{parse_formula, Formula, ParseError, METAVARIABLES};
use super::schema::{as_join, match_pattern, SchemaCatalog, DISJUNCTION_RULE};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Justification {
    /// Instance of a catalog schema. Metavariables missing from `subst` are
    /// inferred by matching.
    Axiom {
        schema: String,
        subst: Vec<(usize, Formula)>,
    },
    Hypothesis(String),
    /// From step `i` and step `j = i ⇒ current`.
    Mp(usize, usize),
    /// From step `i`, concluding `□ step_i`.
    Nec(usize),
    /// From step `i = α⊔β`, concluding `α⊔□β`.
    DisjunctionBox(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Step {
    pub formula: Formula,
    pub justification: Justification,
}

/// Serializes as its proof-file text, with 1-based step numbers.
impl Serialize for Justification {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Proof {
    pub theory: Vec<(String, Formula)>,
    pub steps: Vec<Step>,
}

impl Proof {
    pub fn conclusion(&self) -> Option<&Formula> {
        self.steps.last().map(|s| &s.formula)
    }

    pub fn hypothesis(&self, name: &str) -> Option<&Formula> {
        self.theory.iter().find(|(n, _)| n == name).map(|(_, f)| f)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum StepFault {
    #[error("unknown schema `{0}`")]
    UnknownSchema(String),
    #[error("not an instance of {schema} (attempted {attempted})")]
    SchemaMismatch { schema: String, attempted: String },
    #[error("unknown hypothesis `{0}`")]
    UnknownHypothesis(String),
    #[error("hypothesis `{name}` is `{expected}`")]
    HypothesisMismatch { name: String, expected: String },
    #[error("step {} does not precede this step", .0 + 1)]
    DanglingIndex(usize),
    #[error("step {} is not `{}`", .major + 1, .expected)]
    MpShape { major: usize, expected: String },
    #[error("expected `box ({premise})`")]
    NecShape { premise: String },
    #[error("the disjunction rule is not enabled")]
    RuleDisabled,
    #[error("expected step {} to be a join `a | b` and this step `a | box b`", .0 + 1)]
    RuleShape(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ProofError {
    #[error("empty proof")]
    Empty,
    #[error("step {}: {}", .step + 1, .fault)]
    Step { step: usize, fault: StepFault },
}

impl ProofError {
    pub fn step(&self) -> Option<usize> {
        match self {
            ProofError::Empty => None,
            ProofError::Step { step, .. } => Some(*step),
        }
    }
}

fn attempted(binding: &[Option<Formula>]) -> String {
    let parts: Vec<String> = binding
        .iter()
        .enumerate()
        .filter_map(|(i, f)| f.as_ref().map(|f| format!("{}:={f}", meta_name(i))))
        .collect();
    format!("[{}]", parts.join(", "))
}

fn meta_name(i: usize) -> String {
    METAVARIABLES
        .get(i)
        .map_or_else(|| format!("meta{i}"), |m| m.to_string())
}

/// Checks one step against the steps before it.
pub fn check_step(catalog: &SchemaCatalog, proof: &Proof, k: usize) -> Result<(), StepFault> {
    let step = &proof.steps[k];
    let current = &step.formula;
    let earlier = |i: usize| {
        if i < k {
            Ok(&proof.steps[i].formula)
        } else {
            Err(StepFault::DanglingIndex(i))
        }
    };
    match &step.justification {
        Justification::Axiom { schema, subst } => {
            let s = catalog
                .get(schema)
                .ok_or_else(|| StepFault::UnknownSchema(schema.clone()))?;
            let mut binding: Vec<Option<Formula>> = vec![None; s.arity];
            for (i, f) in subst {
                if *i >= binding.len() {
                    binding.resize(i + 1, None);
                }
                binding[*i] = Some(f.clone());
            }
            let mut trial = binding.clone();
            if match_pattern(&s.pattern, current, &mut trial) {
                Ok(())
            } else {
                Err(StepFault::SchemaMismatch {
                    schema: schema.clone(),
                    attempted: attempted(&binding),
                })
            }
        }
        Justification::Hypothesis(name) => {
            let h = proof
                .hypothesis(name)
                .ok_or_else(|| StepFault::UnknownHypothesis(name.clone()))?;
            if h == current {
                Ok(())
            } else {
                Err(StepFault::HypothesisMismatch {
                    name: name.clone(),
                    expected: h.to_string(),
                })
            }
        }
        Justification::Mp(i, j) => {
            let minor = earlier(*i)?;
            let major = earlier(*j)?;
            match major.as_imp() {
                Some((a, b)) if a == minor && b == current => Ok(()),
                _ => Err(StepFault::MpShape {
                    major: *j,
                    expected: Formula::imp(minor.clone(), current.clone()).to_string(),
                }),
            }
        }
        Justification::Nec(i) => {
            let premise = earlier(*i)?;
            match current {
                Formula::Box(inner) if **inner == *premise => Ok(()),
                _ => Err(StepFault::NecShape {
                    premise: premise.to_string(),
                }),
            }
        }
        Justification::DisjunctionBox(i) => {
            if !catalog.has_disjunction_rule() {
                return Err(StepFault::RuleDisabled);
            }
            let premise = earlier(*i)?;
            let ok =
                as_join(premise).is_some_and(|(a, b)| *current == Formula::or(a.clone(), Formula::boxed(b.clone())));
            if ok {
                Ok(())
            } else {
                Err(StepFault::RuleShape(*i))
            }
        }
    }
}

/// Checks every step in order and returns the conclusion, or the first
/// failing step.
pub fn check_proof<'p>(catalog: &SchemaCatalog, proof: &'p Proof) -> Result<&'p Formula, ProofError> {
    for k in 0..proof.steps.len() {
        check_step(catalog, proof, k).map_err(|fault| ProofError::Step { step: k, fault })?;
    }
    proof.conclusion().ok_or(ProofError::Empty)
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ProofSyntaxError {
    pub line: usize,
    pub message: String,
}

fn formula_at(line: usize, text: &str) -> Result<Formula, ProofSyntaxError> {
    parse_formula(text).map_err(|e: ParseError| ProofSyntaxError {
        line,
        message: format!("in `{}`: {e}", text.trim()),
    })
}

fn parse_index(line: usize, word: Option<&str>, steps: usize) -> Result<usize, ProofSyntaxError> {
    let err = |message: String| ProofSyntaxError { line, message };
    let word = word.ok_or_else(|| err("missing step number".to_string()))?;
    let n: usize = word.parse().map_err(|_| err(format!("bad step number `{word}`")))?;
    if n == 0 || n > steps {
        return Err(err(format!("step number {n} is out of range")));
    }
    Ok(n - 1)
}

fn parse_subst(line: usize, text: &str) -> Result<Vec<(usize, Formula)>, ProofSyntaxError> {
    let err = |message: String| ProofSyntaxError { line, message };
    let text = text.trim();
    if text.is_empty() {
        return Ok(Vec::new());
    }
    let inner = text
        .strip_prefix('[')
        .and_then(|t| t.strip_suffix(']'))
        .ok_or_else(|| err(format!("expected `[meta:=formula, ..]`, got `{text}`")))?;
    let mut out: Vec<(usize, Formula)> = Vec::new();
    for part in inner.split(',').filter(|p| !p.trim().is_empty()) {
        let (name, f) = part
            .split_once(":=")
            .ok_or_else(|| err(format!("expected `meta:=formula`, got `{}`", part.trim())))?;
        let name = name.trim();
        let i = METAVARIABLES
            .iter()
            .position(|m| *m == name)
            .ok_or_else(|| err(format!("unknown metavariable `{name}`")))?;
        if out.iter().any(|(j, _)| *j == i) {
            return Err(err(format!("metavariable `{name}` bound twice")));
        }
        out.push((i, formula_at(line, f)?));
    }
    out.sort_by_key(|(i, _)| *i);
    Ok(out)
}

fn parse_justification(line: usize, text: &str, steps: usize) -> Result<Justification, ProofSyntaxError> {
    let err = |message: String| ProofSyntaxError { line, message };
    let text = text.trim();
    let (word, rest) = text.split_once(char::is_whitespace).unwrap_or((text, ""));
    let mut args = rest.split_whitespace();
    let j = match word {
        "axiom" => {
            let rest = rest.trim_start();
            let (schema, subst) = rest.split_once(char::is_whitespace).unwrap_or((rest, ""));
            if schema.is_empty() {
                return Err(err("missing schema id".to_string()));
            }
            return Ok(Justification::Axiom {
                schema: schema.to_string(),
                subst: parse_subst(line, subst)?,
            });
        }
        "hyp" => {
            let name = args.next().ok_or_else(|| err("missing hypothesis name".to_string()))?;
            Justification::Hypothesis(name.to_string())
        }
        "mp" => Justification::Mp(
            parse_index(line, args.next(), steps)?,
            parse_index(line, args.next(), steps)?,
        ),
        "nec" => Justification::Nec(parse_index(line, args.next(), steps)?),
        "rule" if args.next() == Some(DISJUNCTION_RULE) => {
            Justification::DisjunctionBox(parse_index(line, args.next(), steps)?)
        }
        other => return Err(err(format!("unknown justification `{other}`"))),
    };
    if let Some(extra) = args.next() {
        return Err(err(format!("unexpected `{extra}`")));
    }
    Ok(j)
}

/// Parses the proof file format. Indices are only range-checked against the
/// number of steps; precedence is left to [`check_proof`].
pub fn parse_proof(text: &str) -> Result<Proof, ProofSyntaxError> {
    let lines: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("")))
        .filter(|(_, l)| !l.trim().is_empty())
        .collect();
    let total_steps = lines
        .iter()
        .filter(|(_, l)| l.trim_start().starts_with("step "))
        .count();
    let mut proof = Proof::default();
    let mut in_theory = false;
    for (line, raw) in lines {
        let err = |message: String| ProofSyntaxError { line, message };
        let l = raw.trim();
        if l == "theory:" {
            if !proof.steps.is_empty() {
                return Err(err("`theory:` must come before the steps".to_string()));
            }
            in_theory = true;
        } else if let Some(rest) = l.strip_prefix("step ") {
            in_theory = false;
            let (num, body) = rest
                .split_once(':')
                .ok_or_else(|| err("expected `step <k>: ..`".to_string()))?;
            let expected = proof.steps.len() + 1;
            if num.trim() != expected.to_string() {
                return Err(err(format!("expected step {expected}, found `{}`", num.trim())));
            }
            let (f, j) = body
                .split_once(';')
                .ok_or_else(|| err("expected `<formula> ; <justification>`".to_string()))?;
            proof.steps.push(Step {
                formula: formula_at(line, f)?,
                justification: parse_justification(line, j, total_steps)?,
            });
        } else if in_theory {
            let (name, f) = l
                .split_once(':')
                .ok_or_else(|| err("expected `<name>: <formula>`".to_string()))?;
            let name = name.trim();
            if name.is_empty() || name.contains(char::is_whitespace) {
                return Err(err(format!("bad hypothesis name `{name}`")));
            }
            if proof.hypothesis(name).is_some() {
                return Err(err(format!("duplicate hypothesis `{name}`")));
            }
            proof.theory.push((name.to_string(), formula_at(line, f)?));
        } else {
            return Err(err(format!("unexpected line `{l}`")));
        }
    }
    Ok(proof)
}

impl fmt::Display for Justification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Justification::Axiom { schema, subst } => {
                write!(f, "axiom {schema}")?;
                if !subst.is_empty() {
                    let parts: Vec<String> = subst.iter().map(|(i, g)| format!("{}:={g}", meta_name(*i))).collect();
                    write!(f, " [{}]", parts.join(", "))?;
                }
                Ok(())
            }
            Justification::Hypothesis(name) => write!(f, "hyp {name}"),
            Justification::Mp(i, j) => write!(f, "mp {} {}", i + 1, j + 1),
            Justification::Nec(i) => write!(f, "nec {}", i + 1),
            Justification::DisjunctionBox(i) => write!(f, "rule {DISJUNCTION_RULE} {}", i + 1),
        }
    }
}

/// Writes the proof file format; [`parse_proof`] reads it back unchanged.
impl fmt::Display for Proof {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.theory.is_empty() {
            writeln!(f, "theory:")?;
            for (name, h) in &self.theory {
                writeln!(f, "  {name}: {h}")?;
            }
        }
        for (k, step) in self.steps.iter().enumerate() {
            writeln!(f, "step {}: {} ; {}", k + 1, step.formula, step.justification)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantifier::U2Parse;

    fn catalog() -> SchemaCatalog {
        SchemaCatalog::mmtl(U2Parse::Standard)
    }

    #[test]
    fn single_axiom_step() {
        let p = parse_proof("step 1: bot -> p0 ; axiom A10 [alpha:=p0]\n").unwrap();
        assert_eq!(check_proof(&catalog(), &p).unwrap().to_string(), "bot -> p0");
    }

    #[test]
    fn necessitation_of_a_hypothesis() {
        let p = parse_proof("theory:\n  h: p0\nstep 1: p0 ; hyp h\nstep 2: box p0 ; nec 1\n").unwrap();
        assert_eq!(check_proof(&catalog(), &p).unwrap(), &Formula::boxed(Formula::var(0)));
    }

    #[test]
    fn substitution_may_be_partial_or_omitted() {
        let text = "step 1: p0 & p1 -> p0 ; axiom A2 [beta:=p1]\nstep 2: p1 & p0 -> p1 ; axiom A2\n";
        assert!(check_proof(&catalog(), &parse_proof(text).unwrap()).is_ok());
    }

    #[test]
    fn faults_name_the_step() {
        let bad_schema = parse_proof("step 1: p0 -> p0 ; axiom A10 [alpha:=p0]\n").unwrap();
        let e = check_proof(&catalog(), &bad_schema).unwrap_err();
        assert_eq!(e.step(), Some(0));
        assert_eq!(e.to_string(), "step 1: not an instance of A10 (attempted [alpha:=p0])");

        let forward = parse_proof("step 1: box p0 ; nec 2\nstep 2: p0 ; axiom A10\n").unwrap();
        let e = check_proof(&catalog(), &forward).unwrap_err();
        assert!(matches!(
            e,
            ProofError::Step {
                step: 0,
                fault: StepFault::DanglingIndex(1)
            }
        ));

        let text = "step 1: bot -> p0 ; axiom A10\nstep 2: bot ; axiom A10\nstep 3: p1 ; mp 2 1\n";
        let e = check_proof(&catalog(), &parse_proof(text).unwrap()).unwrap_err();
        assert_eq!(e.step(), Some(1));

        let text = "theory:\n  h: p0\nstep 1: p0 ; hyp h\nstep 2: box p1 ; nec 1\n";
        let e = check_proof(&catalog(), &parse_proof(text).unwrap()).unwrap_err();
        assert!(matches!(
            e,
            ProofError::Step {
                step: 1,
                fault: StepFault::NecShape { .. }
            }
        ));
    }

    #[test]
    fn disjunction_rule_needs_enabling() {
        let text = "theory:\n  h: p0 | p1\nstep 1: p0 | p1 ; hyp h\nstep 2: p0 | box p1 ; rule DR 1\n";
        let p = parse_proof(text).unwrap();
        assert!(matches!(
            check_proof(&catalog(), &p),
            Err(ProofError::Step {
                fault: StepFault::RuleDisabled,
                ..
            })
        ));
        assert!(check_proof(&catalog().with_disjunction_rule(), &p).is_ok());
    }

    #[test]
    fn file_format_round_trips() {
        let text = "theory:\n  h: p0 -> p1\nstep 1: p0 -> p1 ; hyp h\nstep 2: box (p0 -> p1) ; nec 1\n\
                    step 3: box (p0 -> p1) -> p0 -> p1 ; axiom M1 [alpha:=p0 -> p1]\nstep 4: p0 -> p1 ; mp 2 3\n";
        let p = parse_proof(text).unwrap();
        assert_eq!(p.to_string(), text);
        assert_eq!(parse_proof(&p.to_string()).unwrap(), p);
    }

    #[test]
    fn syntax_errors_carry_lines() {
        let e = parse_proof("# header\nstep 1: p0 ; hyp\n").unwrap_err();
        assert_eq!(e.line, 2);
        let e = parse_proof("step 2: p0 ; hyp h\n").unwrap_err();
        assert!(e.message.contains("expected step 1"));
        let e = parse_proof("step 1: p0 -> ; hyp h\n").unwrap_err();
        assert!(e.message.contains("unexpected end"));
        let e = parse_proof("step 1: p0 ; mp 1 5\n").unwrap_err();
        assert!(e.message.contains("out of range"));
    }
}
