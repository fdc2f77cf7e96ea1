//! Turns a proof of `β` from `T ∪ {α}` into a proof of `□α ⇒ β` from `T`.
//!
//! Steps that do not depend on `α` are copied. For a dependent step `φ` the
//! output proves `□α ⇒ φ`:
//!
//! - `φ = α`: the instance `□α ⇒ α` of `M1`;
//! - modus ponens with only the minor premise dependent: transitivity;
//! - modus ponens with only the major premise dependent: exchange, then
//!   modus ponens with the copied minor premise;
//! - necessitation: `□(□α ⇒ φ)`, then `□(□α⇒φ) ⇒ (□□α ⇒ □φ)` and
//!   `□α ⇒ □□α`.
//!
//! Modus ponens with both premises dependent would need `□α ⇒ □α & □α`,
//! which is not a theorem: on the three-element MV-chain with the identity
//! quantifier `p0 ⊢ p0 & p0` holds but `□p0 ⇒ p0 & p0` fails at `½`. Such
//! proofs are refused. So is the disjunction rule applied to a dependent
//! step.

use serde::Serialize;
use thiserror::Error;

use super::builder::ProofBuilder;
use super::formula::Formula;
use super::proof::{check_proof, Justification, Proof, ProofError};
use super::schema::SchemaCatalog;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum DeductionError {
    #[error("input proof does not check: {0}")]
    InvalidInput(ProofError),
    #[error(
        "step {}: both premises of modus ponens depend on the discharged hypothesis; \
         the transform would need `box a -> box a & box a`",
        .step + 1
    )]
    ContractionRequired { step: usize },
    #[error("step {}: the disjunction rule is applied to a step depending on the discharged hypothesis", .step + 1)]
    RuleOnDependentStep { step: usize },
    #[error("transformed proof does not check: {0}")]
    OutputRejected(ProofError),
}

impl DeductionError {
    pub fn step(&self) -> Option<usize> {
        match self {
            DeductionError::ContractionRequired { step } | DeductionError::RuleOnDependentStep { step } => Some(*step),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Deduction {
    pub proof: Proof,
    pub conclusion: Formula,
    /// Names of the hypotheses equal to `α` that were removed.
    pub discharged: Vec<String>,
    /// The input conclusion did not depend on `α` and was weakened.
    pub weakened: bool,
}

/// Discharges every hypothesis equal to `alpha`.
pub fn deduction_transform(
    catalog: &SchemaCatalog,
    input: &Proof,
    alpha: &Formula,
) -> Result<Deduction, DeductionError> {
    let beta = check_proof(catalog, input)
        .map_err(DeductionError::InvalidInput)?
        .clone();
    let discharged: Vec<String> = input
        .theory
        .iter()
        .filter(|(_, f)| f == alpha)
        .map(|(n, _)| n.clone())
        .collect();
    let theory = input.theory.iter().filter(|(_, f)| f != alpha).cloned().collect();
    let boxed = Formula::boxed(alpha.clone());
    let mut b = ProofBuilder::new(catalog, theory);

    // For step k: Ok(i) if step k was copied to output step i,
    // Err(i) if it depends on alpha and output step i proves `□α ⇒ φ_k`.
    let mut image: Vec<Result<usize, usize>> = Vec::with_capacity(input.steps.len());
    for (k, step) in input.steps.iter().enumerate() {
        let phi = &step.formula;
        let entry = match &step.justification {
            Justification::Hypothesis(name) if discharged.contains(name) => {
                Err(b.axiom("M1", std::slice::from_ref(alpha)))
            }
            Justification::Hypothesis(name) => Ok(b.hyp(name)),
            Justification::Axiom { schema, subst } => {
                let i = b.push(
                    phi.clone(),
                    Justification::Axiom {
                        schema: schema.clone(),
                        subst: subst.clone(),
                    },
                );
                Ok(i)
            }
            Justification::Mp(i, j) => match (image[*i], image[*j]) {
                (Ok(minor), Ok(major)) => Ok(b.mp(minor, major)),
                (Err(minor), Ok(major)) => Err(b.trans(minor, major)),
                (Ok(minor), Err(major)) => {
                    let swapped = b.exchange(major);
                    Err(b.mp(minor, swapped))
                }
                (Err(_), Err(_)) => return Err(DeductionError::ContractionRequired { step: k }),
            },
            Justification::Nec(i) => match image[*i] {
                Ok(x) => Ok(b.nec(x)),
                Err(x) => {
                    let inner = match phi {
                        Formula::Box(inner) => (**inner).clone(),
                        _ => unreachable!("checked necessitation"),
                    };
                    let lifted = b.nec(x);
                    let k_ax = b.box_k(&boxed, &inner);
                    let from_four = b.mp(lifted, k_ax);
                    let four = b.box_four(alpha);
                    Err(b.trans(four, from_four))
                }
            },
            Justification::DisjunctionBox(i) => match image[*i] {
                Ok(x) => Ok(b.push(phi.clone(), Justification::DisjunctionBox(x))),
                Err(_) => return Err(DeductionError::RuleOnDependentStep { step: k }),
            },
        };
        image.push(entry);
    }
    let last = *image.last().expect("checked proofs are non-empty");
    let weakened = last.is_ok();
    let fin = match last {
        Ok(i) => b.weaken(i, &boxed),
        Err(i) => i,
    };
    let conclusion = Formula::imp(boxed, beta);
    assert_eq!(b.formula(fin), &conclusion);
    let proof = trim(b.finish(), fin);
    check_proof(catalog, &proof).map_err(DeductionError::OutputRejected)?;
    Ok(Deduction {
        proof,
        conclusion,
        discharged,
        weakened,
    })
}

/// Keeps only the steps `target` depends on, renumbered, so the last step is
/// the conclusion.
pub fn trim(proof: Proof, target: usize) -> Proof {
    let mut needed = vec![false; proof.steps.len()];
    needed[target] = true;
    for k in (0..=target).rev() {
        if !needed[k] {
            continue;
        }
        match proof.steps[k].justification {
            Justification::Mp(i, j) => {
                needed[i] = true;
                needed[j] = true;
            }
            Justification::Nec(i) | Justification::DisjunctionBox(i) => needed[i] = true,
            _ => {}
        }
    }
    let mut index = vec![usize::MAX; proof.steps.len()];
    let mut steps = Vec::new();
    for (k, step) in proof.steps.into_iter().enumerate().take(target + 1) {
        if !needed[k] {
            continue;
        }
        index[k] = steps.len();
        let justification = match step.justification {
            Justification::Mp(i, j) => Justification::Mp(index[i], index[j]),
            Justification::Nec(i) => Justification::Nec(index[i]),
            Justification::DisjunctionBox(i) => Justification::DisjunctionBox(index[i]),
            other => other,
        };
        steps.push(super::proof::Step {
            formula: step.formula,
            justification,
        });
    }
    Proof {
        theory: proof.theory,
        steps,
    }
}
