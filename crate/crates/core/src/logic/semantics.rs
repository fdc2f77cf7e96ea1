//! Evaluation of formulas in finite quantified algebras, validity sweeps,
//! countermodel search and the soundness audit of a schema catalog.
//!
//! Valuations are enumerated in mixed-radix order with `p0` the most
//! significant digit, so the first countervaluation found is the
//! lexicographically least one regardless of how the sweep is scheduled.

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use super::formula::Formula;
use super::schema::SchemaCatalog;
use crate::algebra::Elem;
use crate::analysis::{disjunction_condition, Verdict};
use crate::quantifier::UmtlAlgebra;

pub const DEFAULT_MAX_VARS: usize = 6;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SemanticsError {
    #[error("{vars} variables exceed the budget of {max}")]
    VariableBudget { vars: usize, max: usize },
    #[error("{size}^{vars} valuations do not fit in memory indices")]
    TooManyValuations { size: usize, vars: usize },
}

pub fn eval(q: &UmtlAlgebra, e: &[Elem], f: &Formula) -> Elem {
    let a = q.algebra();
    match f {
        Formula::Var(i) => e[*i],
        Formula::Bot => a.bottom(),
        Formula::And(x, y) => a.odot(eval(q, e, x), eval(q, e, y)),
        Formula::Imp(x, y) => a.imp(eval(q, e, x), eval(q, e, y)),
        Formula::Min(x, y) => a.meet(eval(q, e, x), eval(q, e, y)),
        Formula::Box(x) => q.forall(eval(q, e, x)),
    }
}

/// The `index`-th valuation of `k` variables over `n` elements.
fn valuation(mut index: usize, n: usize, k: usize) -> Vec<Elem> {
    let mut v = vec![0; k];
    for slot in v.iter_mut().rev() {
        *slot = index % n;
        index /= n;
    }
    v
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Validity {
    pub holds: bool,
    /// Least valuation of `p0, p1, ..` that refutes the claim.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub countervaluation: Option<Vec<Elem>>,
    pub valuations: u64,
}

fn sweep_count(n: usize, k: usize, max_vars: usize) -> Result<usize, SemanticsError> {
    if k > max_vars {
        return Err(SemanticsError::VariableBudget { vars: k, max: max_vars });
    }
    n.checked_pow(k as u32)
        .ok_or(SemanticsError::TooManyValuations { size: n, vars: k })
}

/// Every valuation sending all of `theory` to top sends `f` to top.
pub fn consequence_with_budget(
    q: &UmtlAlgebra,
    theory: &[Formula],
    f: &Formula,
    max_vars: usize,
) -> Result<Validity, SemanticsError> {
    let n = q.algebra().size();
    let top = q.algebra().top();
    let k = theory
        .iter()
        .map(Formula::var_count)
        .max()
        .unwrap_or(0)
        .max(f.var_count());
    let total = sweep_count(n, k, max_vars)?;
    let countervaluation = (0..total)
        .into_par_iter()
        .map(|i| valuation(i, n, k))
        .find_first(|e| theory.iter().all(|t| eval(q, e, t) == top) && eval(q, e, f) != top);
    Ok(Validity {
        holds: countervaluation.is_none(),
        countervaluation,
        valuations: total as u64,
    })
}

pub fn consequence(q: &UmtlAlgebra, theory: &[Formula], f: &Formula) -> Result<Validity, SemanticsError> {
    consequence_with_budget(q, theory, f, DEFAULT_MAX_VARS)
}

pub fn is_valid(q: &UmtlAlgebra, f: &Formula) -> Result<Validity, SemanticsError> {
    consequence(q, &[], f)
}

/// A formula to refute, or a rule instance whose premises must evaluate to
/// top while its conclusion does not.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Goal {
    Formula {
        formula: Formula,
    },
    Rule {
        premises: Vec<Formula>,
        conclusion: Formula,
    },
}

impl Goal {
    /// Parses either a formula or `from <f>, <f> derive <f>`.
    pub fn parse(text: &str) -> Result<Goal, super::formula::ParseError> {
        use super::formula::parse_formula;
        let t = text.trim();
        if let Some(rest) = t.strip_prefix("from ") {
            if let Some((premises, conclusion)) = rest.split_once(" derive ") {
                let premises = premises.split(',').map(parse_formula).collect::<Result<Vec<_>, _>>()?;
                return Ok(Goal::Rule {
                    premises,
                    conclusion: parse_formula(conclusion)?,
                });
            }
        }
        Ok(Goal::Formula {
            formula: parse_formula(t)?,
        })
    }

    fn parts(&self) -> (&[Formula], &Formula) {
        match self {
            Goal::Formula { formula } => (&[], formula),
            Goal::Rule { premises, conclusion } => (premises, conclusion),
        }
    }
}

#[derive(Clone, Debug)]
pub struct PoolEntry {
    pub name: String,
    pub algebra: UmtlAlgebra,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum SearchOutcome {
    Countermodel {
        index: usize,
        name: String,
        valuation: Vec<Elem>,
        /// Element names of the valuation.
        labels: Vec<String>,
    },
    Exhausted {
        pool_size: usize,
        valuations: u64,
    },
}

/// Scans `pool` in order and reports the first member with a refuting
/// valuation.
pub fn countermodel_search(goal: &Goal, pool: &[PoolEntry], max_vars: usize) -> Result<SearchOutcome, SemanticsError> {
    let (premises, conclusion) = goal.parts();
    let results: Vec<Validity> = pool
        .par_iter()
        .map(|p| consequence_with_budget(&p.algebra, premises, conclusion, max_vars))
        .collect::<Result<_, _>>()?;
    for (index, (entry, r)) in pool.iter().zip(&results).enumerate() {
        if let Some(v) = &r.countervaluation {
            return Ok(SearchOutcome::Countermodel {
                index,
                name: entry.name.clone(),
                labels: v.iter().map(|&x| entry.algebra.algebra().name(x).to_string()).collect(),
                valuation: v.clone(),
            });
        }
    }
    Ok(SearchOutcome::Exhausted {
        pool_size: pool.len(),
        valuations: results.iter().map(|r| r.valuations).sum(),
    })
}

/// `x∨y = 1` implies `x∨∀y = 1`: the algebra validates the rule
/// "from `α⊔β` derive `α⊔□β`" pointwise.
pub fn check_semilinearity_condition(q: &UmtlAlgebra) -> Verdict {
    disjunction_condition(q)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AuditCounter {
    pub algebra: String,
    pub valuation: Vec<Elem>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SchemaAudit {
    pub id: String,
    pub valid: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counter: Option<AuditCounter>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SoundnessReport {
    pub algebras: usize,
    pub schemas: Vec<SchemaAudit>,
    /// `x = 1` and `x→y = 1` imply `y = 1`, for all `x, y`.
    pub mp_preserved: bool,
    /// `∀1 = 1`, so validity of `α` gives validity of `□α`.
    pub nec_preserved: bool,
    pub sound: bool,
}

/// Every schema is valid for every assignment of elements to its
/// metavariables on every pool member, and both rules preserve validity.
/// Assignments to metavariables cover every instance: an instance's value
/// under a valuation is the schema's value under the induced assignment.
pub fn soundness_audit(catalog: &SchemaCatalog, pool: &[PoolEntry]) -> SoundnessReport {
    let schemas: Vec<SchemaAudit> = catalog
        .schemas()
        .par_iter()
        .map(|s| {
            let counter = pool.iter().find_map(|p| {
                let v = consequence_with_budget(&p.algebra, &[], &s.pattern, s.arity).expect("arity is the budget");
                v.countervaluation.map(|valuation| AuditCounter {
                    algebra: p.name.clone(),
                    valuation,
                })
            });
            SchemaAudit {
                id: s.id.clone(),
                valid: counter.is_none(),
                counter,
            }
        })
        .collect();
    let mp_preserved = pool.iter().all(|p| {
        let a = p.algebra.algebra();
        let top = a.top();
        a.elements().all(|y| y == top || a.imp(top, y) != top)
    });
    let nec_preserved = pool
        .iter()
        .all(|p| p.algebra.forall(p.algebra.algebra().top()) == p.algebra.algebra().top());
    let sound = mp_preserved && nec_preserved && schemas.iter().all(|s| s.valid);
    SoundnessReport {
        algebras: pool.len(),
        schemas,
        mp_preserved,
        nec_preserved,
        sound,
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::chains::{chain_algebra, l6, ChainKind};
    use crate::logic::formula::parse_formula;
    use crate::quantifier::{delta_table, identity_table, U2Parse};

    fn delta(kind: ChainKind, n: usize) -> UmtlAlgebra {
        let a = chain_algebra(kind, n).unwrap();
        let t = delta_table(&a);
        UmtlAlgebra::new(Arc::new(a), &t, U2Parse::Standard).unwrap()
    }

    #[test]
    fn identity_implication_is_valid() {
        let q = delta(ChainKind::Lukasiewicz, 4);
        let f = parse_formula("p0 -> p0").unwrap();
        for x in 0..4 {
            assert_eq!(eval(&q, &[x], &f), 3);
        }
        assert!(is_valid(&q, &f).unwrap().holds);
    }

    #[test]
    fn box_is_not_a_consequence_of_the_formula() {
        for kind in [ChainKind::Lukasiewicz, ChainKind::NilpotentMinimum] {
            let q = delta(kind, 3);
            let v = is_valid(&q, &parse_formula("p0 -> box p0").unwrap()).unwrap();
            assert!(!v.holds);
            assert_eq!(v.countervaluation, Some(vec![1]));
            assert!(
                consequence(&q, &[Formula::var(0)], &parse_formula("box p0").unwrap())
                    .unwrap()
                    .holds
            );
        }
    }

    fn identity(kind: ChainKind, n: usize) -> UmtlAlgebra {
        let a = chain_algebra(kind, n).unwrap();
        let t = identity_table(&a);
        UmtlAlgebra::new(Arc::new(a), &t, U2Parse::Standard).unwrap()
    }

    #[test]
    fn valuation_order_is_lexicographic() {
        let q = identity(ChainKind::Goedel, 3);
        // p0 ^ p1 -> bot fails first at (1, 1) in lexicographic order.
        let v = is_valid(&q, &parse_formula("neg (p0 ^ p1)").unwrap()).unwrap();
        assert_eq!(v.countervaluation, Some(vec![1, 1]));
        assert_eq!(v.valuations, 9);
    }

    #[test]
    fn budget_is_enforced() {
        let q = delta(ChainKind::Goedel, 2);
        let f = parse_formula("p6 -> p6").unwrap();
        assert_eq!(
            is_valid(&q, &f),
            Err(SemanticsError::VariableBudget { vars: 7, max: 6 })
        );
    }

    #[test]
    fn disjunction_rule_has_a_countermodel_on_the_six_element_algebra() {
        let a = Arc::new(l6());
        let goal = Goal::parse("from p0 | p1 derive p0 | box p1").unwrap();
        let pool = vec![
            PoolEntry {
                name: "l6-identity".into(),
                algebra: UmtlAlgebra::new(a.clone(), &identity_table(&a), U2Parse::Standard).unwrap(),
            },
            PoolEntry {
                name: "l6-delta".into(),
                algebra: UmtlAlgebra::new(a.clone(), &delta_table(&a), U2Parse::Standard).unwrap(),
            },
        ];
        match countermodel_search(&goal, &pool, DEFAULT_MAX_VARS).unwrap() {
            SearchOutcome::Countermodel { index, labels, .. } => {
                assert_eq!(index, 1);
                // b∨d = 1 but b∨Δd = b.
                assert_eq!(labels, ["b", "d"]);
            }
            other => panic!("expected a countermodel, got {other:?}"),
        }
        assert!(!check_semilinearity_condition(&pool[1].algebra).holds);
        assert!(check_semilinearity_condition(&pool[0].algebra).holds);
    }

    #[test]
    fn axioms_have_no_countermodel() {
        let pool = vec![
            PoolEntry {
                name: "lukasiewicz-3-delta".into(),
                algebra: delta(ChainKind::Lukasiewicz, 3),
            },
            PoolEntry {
                name: "nm-3-delta".into(),
                algebra: delta(ChainKind::NilpotentMinimum, 3),
            },
            PoolEntry {
                name: "goedel-3-identity".into(),
                algebra: identity(ChainKind::Goedel, 3),
            },
        ];
        let goal = Goal::parse("(p0 -> p1) -> (p1 -> p2) -> p0 -> p2").unwrap();
        assert_eq!(
            countermodel_search(&goal, &pool, DEFAULT_MAX_VARS).unwrap(),
            SearchOutcome::Exhausted {
                pool_size: 3,
                valuations: 81
            }
        );
        let report = soundness_audit(&SchemaCatalog::mmtl(U2Parse::Standard), &pool);
        assert!(report.sound, "{report:?}");
    }
}
