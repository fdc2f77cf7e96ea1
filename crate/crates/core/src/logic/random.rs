//! Seeded random proofs: schema instances and hypotheses chained by modus
//! ponens and necessitation.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::builder::ProofBuilder;
use super::deduction::trim;
use super::formula::Formula;
use super::proof::{Justification, Proof};
use super::schema::{match_pattern, SchemaCatalog};

/// Formulas deeper than this are not added.
const MAX_DEPTH: usize = 7;

#[derive(Clone, Debug)]
pub struct RandomProof {
    pub seed: u64,
    pub proof: Proof,
    /// A hypothesis of the theory to discharge.
    pub discharged: Formula,
}

fn random_formula(rng: &mut ChaCha8Rng, depth: usize) -> Formula {
    if depth == 0 || rng.gen_bool(0.35) {
        return if rng.gen_bool(0.85) {
            Formula::var(rng.gen_range(0..3))
        } else {
            Formula::Bot
        };
    }
    let sub = |rng: &mut ChaCha8Rng| random_formula(rng, depth - 1);
    match rng.gen_range(0..4) {
        0 => Formula::and(sub(rng), sub(rng)),
        1 => Formula::imp(sub(rng), sub(rng)),
        2 => Formula::min(sub(rng), sub(rng)),
        _ => Formula::boxed(sub(rng)),
    }
}

/// Draws a formula for an unbound metavariable: an earlier step's formula
/// or a small random one.
fn filler(b: &ProofBuilder, rng: &mut ChaCha8Rng) -> Formula {
    if rng.gen_bool(0.5) {
        b.formula(rng.gen_range(0..b.len())).clone()
    } else {
        random_formula(rng, 1)
    }
}

/// Adds an axiom instance whose antecedent is step `i`, then applies modus
/// ponens. Returns `None` when no implicational schema matches.
fn chain(b: &mut ProofBuilder, rng: &mut ChaCha8Rng, i: usize) -> Option<usize> {
    let phi = b.formula(i).clone();
    let mut options: Vec<(String, Vec<Option<Formula>>)> = b
        .catalog()
        .schemas()
        .iter()
        .filter_map(|s| {
            let (ante, _) = s.pattern.as_imp()?;
            let mut binding = vec![None; s.arity];
            match_pattern(ante, &phi, &mut binding).then(|| (s.id.clone(), binding))
        })
        .collect();
    options.shuffle(rng);
    let (id, binding) = options.pop()?;
    let subst: Vec<Formula> = binding
        .into_iter()
        .map(|f| f.unwrap_or_else(|| filler(b, rng)))
        .collect();
    let instance = b.catalog().instance(&id, &subst)?;
    if instance.depth() > MAX_DEPTH {
        return None;
    }
    let ax = b.axiom(&id, &subst);
    Some(b.mp(i, ax))
}

/// For step `i = x ⇒ y`, proves `y` when `x` is an earlier step or an axiom
/// instance.
fn apply(b: &mut ProofBuilder, i: usize) -> Option<usize> {
    let x = b.formula(i).as_imp()?.0.clone();
    if let Some(k) = b.find(&x) {
        return Some(b.mp(k, i));
    }
    let (id, subst) = b.catalog().schemas().iter().find_map(|s| {
        let mut binding = vec![None; s.arity];
        if !match_pattern(&s.pattern, &x, &mut binding) {
            return None;
        }
        let subst: Vec<Formula> = binding.into_iter().map(|f| f.unwrap_or(Formula::Bot)).collect();
        Some((s.id.clone(), subst))
    })?;
    let k = b.axiom(&id, &subst);
    Some(b.mp(k, i))
}

/// Pairs `(i, j)` with step `j` equal to `step_i ⇒ ..`.
fn mp_pairs(b: &ProofBuilder) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for j in 0..b.len() {
        if let Some((a, _)) = b.formula(j).as_imp() {
            if let Some(i) = b.find(a) {
                out.push((i, j));
            }
        }
    }
    out
}

/// Steps each step's derivation uses, itself included.
fn cones(proof: &Proof) -> Vec<Vec<bool>> {
    (0..proof.steps.len())
        .map(|k| {
            let mut seen = vec![false; k + 1];
            let mut stack = vec![k];
            while let Some(i) = stack.pop() {
                if std::mem::replace(&mut seen[i], true) {
                    continue;
                }
                match proof.steps[i].justification {
                    Justification::Mp(x, y) => stack.extend([x, y]),
                    Justification::Nec(x) | Justification::DisjunctionBox(x) => stack.push(x),
                    _ => {}
                }
            }
            seen
        })
        .collect()
}

/// A checking proof from the theory `{a: α, t: τ}` with random `α`, `τ`.
///
/// Each action extends the most recent step (the head) or a random earlier
/// one: a schema instance with it as antecedent followed by modus ponens,
/// modus ponens with it as major premise, necessitation, or weakening; other
/// actions add hypotheses, axiom instances or any available modus ponens.
/// After about `target_steps` steps, the conclusion is the step with the
/// largest derivation among those using the theory, the proof is cut down
/// to that derivation, and the hypothesis to discharge is drawn from those
/// the derivation uses.
pub fn random_proof(catalog: &SchemaCatalog, seed: u64, target_steps: usize) -> RandomProof {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let alpha = random_formula(&mut rng, 2);
    let mut tau = random_formula(&mut rng, 2);
    while tau == alpha {
        tau = random_formula(&mut rng, 2);
    }
    let theory = vec![("a".to_string(), alpha), ("t".to_string(), tau)];
    let mut b = ProofBuilder::new(catalog, theory.clone());
    let ids: Vec<String> = catalog.schemas().iter().map(|s| s.id.clone()).collect();
    b.hyp("a");
    let mut attempts = 0;
    while b.len() < target_steps && attempts < 50 * target_steps {
        attempts += 1;
        let head = if rng.gen_bool(0.8) {
            b.len() - 1
        } else {
            rng.gen_range(0..b.len())
        };
        match rng.gen_range(0..20) {
            0 | 1 => {
                b.hyp(if rng.gen_bool(0.5) { "a" } else { "t" });
            }
            2 | 3 => {
                let id = ids.choose(&mut rng).expect("non-empty catalog");
                let arity = catalog.get(id).expect("listed").arity;
                let subst: Vec<Formula> = (0..arity).map(|_| filler(&b, &mut rng)).collect();
                if catalog.instance(id, &subst).is_some_and(|f| f.depth() <= MAX_DEPTH) {
                    b.axiom(id, &subst);
                }
            }
            4..=9 => {
                chain(&mut b, &mut rng, head);
            }
            10..=12 => {
                apply(&mut b, head);
            }
            13 | 14 => {
                let pairs = mp_pairs(&b);
                if let Some(&(i, j)) = pairs.choose(&mut rng) {
                    b.mp(i, j);
                }
            }
            15 => {
                let psi = filler(&b, &mut rng);
                if b.formula(head).depth().max(psi.depth()) < MAX_DEPTH {
                    b.weaken(head, &psi);
                }
            }
            _ => {
                if b.formula(head).depth() < MAX_DEPTH {
                    b.nec(head);
                }
            }
        }
    }
    let proof = b.finish();
    let cones = cones(&proof);
    let size = |k: usize| cones[k].iter().filter(|&&s| s).count();
    let uses_theory =
        |k: usize| (0..=k).any(|i| cones[k][i] && matches!(proof.steps[i].justification, Justification::Hypothesis(_)));
    let conclusion = (0..proof.steps.len())
        .max_by_key(|&k| (uses_theory(k), size(k), k))
        .expect("non-empty proof");
    let used: Vec<&Formula> = theory
        .iter()
        .filter(|(name, _)| {
            proof.steps.iter().enumerate().any(|(k, s)| {
                cones[conclusion].get(k) == Some(&true) && s.justification == Justification::Hypothesis(name.clone())
            })
        })
        .map(|(_, f)| f)
        .collect();
    let discharged = used
        .choose(&mut rng)
        .map_or_else(|| theory[0].1.clone(), |f| (*f).clone());
    RandomProof {
        seed,
        proof: trim(proof, conclusion),
        discharged,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::proof::check_proof;
    use crate::quantifier::U2Parse;

    #[test]
    fn random_proofs_check_and_are_reproducible() {
        let c = SchemaCatalog::mmtl(U2Parse::Standard);
        for seed in 0..20 {
            let r = random_proof(&c, seed, 12);
            assert!(check_proof(&c, &r.proof).is_ok(), "seed {seed}");
            assert_eq!(r.proof, random_proof(&c, seed, 12).proof);
        }
    }
}
