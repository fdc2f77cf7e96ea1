//! Incremental proof construction, the lemmas the deduction transform is
//! built from, and bundled proofs of the standard derived modal rules.

use std::collections::HashMap;

use super::formula::{parse_formula, Formula};
use super::proof::{Justification, Proof, Step};
use super::schema::SchemaCatalog;

/// Appends justified steps to a proof. A formula already proved is reused
/// instead of being proved twice.
#[derive(Clone, Debug)]
pub struct ProofBuilder<'c> {
    catalog: &'c SchemaCatalog,
    proof: Proof,
    known: HashMap<Formula, usize>,
}

impl<'c> ProofBuilder<'c> {
    pub fn new(catalog: &'c SchemaCatalog, theory: Vec<(String, Formula)>) -> Self {
        ProofBuilder {
            catalog,
            proof: Proof {
                theory,
                steps: Vec::new(),
            },
            known: HashMap::new(),
        }
    }

    pub fn catalog(&self) -> &'c SchemaCatalog {
        self.catalog
    }

    pub fn formula(&self, i: usize) -> &Formula {
        &self.proof.steps[i].formula
    }

    pub fn len(&self) -> usize {
        self.proof.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.proof.steps.is_empty()
    }

    pub fn proof(&self) -> &Proof {
        &self.proof
    }

    pub fn finish(self) -> Proof {
        self.proof
    }

    /// Index of an earlier step proving `f`.
    pub fn find(&self, f: &Formula) -> Option<usize> {
        self.known.get(f).copied()
    }

    pub fn push(&mut self, formula: Formula, justification: Justification) -> usize {
        if let Some(i) = self.find(&formula) {
            return i;
        }
        let i = self.proof.steps.len();
        self.known.insert(formula.clone(), i);
        self.proof.steps.push(Step { formula, justification });
        i
    }

    pub fn axiom(&mut self, schema: &str, subst: &[Formula]) -> usize {
        let f = self
            .catalog
            .instance(schema, subst)
            .unwrap_or_else(|| panic!("schema {schema} with {} arguments", subst.len()));
        let subst = subst.iter().cloned().enumerate().collect();
        self.push(
            f,
            Justification::Axiom {
                schema: schema.to_string(),
                subst,
            },
        )
    }

    pub fn hyp(&mut self, name: &str) -> usize {
        let f = self
            .proof
            .hypothesis(name)
            .unwrap_or_else(|| panic!("no hypothesis {name}"))
            .clone();
        self.push(f, Justification::Hypothesis(name.to_string()))
    }

    /// From `minor` and `major = minor ⇒ c`, concludes `c`.
    pub fn mp(&mut self, minor: usize, major: usize) -> usize {
        let (a, c) = self.formula(major).as_imp().expect("major premise is an implication");
        assert_eq!(
            a,
            self.formula(minor),
            "major premise does not start with the minor premise"
        );
        let c = c.clone();
        self.push(c, Justification::Mp(minor, major))
    }

    pub fn nec(&mut self, i: usize) -> usize {
        let f = Formula::boxed(self.formula(i).clone());
        self.push(f, Justification::Nec(i))
    }

    fn imp_parts(&self, i: usize) -> (Formula, Formula) {
        let (a, b) = self.formula(i).as_imp().expect("an implication");
        (a.clone(), b.clone())
    }

    /// `⊢ ⊥ ⇒ ⊥`, which is `top`.
    pub fn top(&mut self) -> usize {
        self.axiom("A10", &[Formula::Bot])
    }

    /// `⊢ φ ⇒ φ`.
    pub fn identity(&mut self, phi: &Formula) -> usize {
        let t = Formula::top();
        let top = self.top();
        let drop = self.axiom("A2", &[phi.clone(), t.clone()]);
        let swap = self.axiom("A3", &[t.clone(), phi.clone()]);
        let left = self.trans(swap, drop);
        let curry = self.axiom("A8", &[t, phi.clone(), phi.clone()]);
        let guarded = self.mp(left, curry);
        self.mp(top, guarded)
    }

    /// From `a ⇒ b` and `b ⇒ c`, concludes `a ⇒ c`.
    pub fn trans(&mut self, ab: usize, bc: usize) -> usize {
        let (a, b) = self.imp_parts(ab);
        let (_, c) = self.imp_parts(bc);
        let a1 = self.axiom("A1", &[a, b, c]);
        let step = self.mp(ab, a1);
        self.mp(bc, step)
    }

    /// From `φ`, concludes `ψ ⇒ φ`.
    pub fn weaken(&mut self, phi: usize, psi: &Formula) -> usize {
        let f = self.formula(phi).clone();
        let drop = self.axiom("A2", &[f.clone(), psi.clone()]);
        let curry = self.axiom("A8", &[f.clone(), psi.clone(), f]);
        let k = self.mp(drop, curry);
        self.mp(phi, k)
    }

    /// From `a ⇒ (b ⇒ c)`, concludes `b ⇒ (a ⇒ c)`.
    pub fn exchange(&mut self, abc: usize) -> usize {
        let (a, bc) = self.imp_parts(abc);
        let (b, c) = bc
            .as_imp()
            .map(|(b, c)| (b.clone(), c.clone()))
            .expect("a curried implication");
        let uncurry = self.axiom("A7", &[a.clone(), b.clone(), c.clone()]);
        let ab_c = self.mp(abc, uncurry);
        let swap = self.axiom("A3", &[b.clone(), a.clone()]);
        let ba_c = self.trans(swap, ab_c);
        let curry = self.axiom("A8", &[b, a, c]);
        self.mp(ba_c, curry)
    }

    /// From `□a ⇒ b`, concludes `□a ⇒ □b`.
    pub fn box_mono_from_boxed(&mut self, i: usize) -> usize {
        let (boxed, b) = self.imp_parts(i);
        let Formula::Box(a) = boxed else {
            panic!("antecedent is not boxed");
        };
        let n = self.nec(i);
        let m3 = self.axiom("M3a", &[*a, b]);
        self.mp(n, m3)
    }

    /// From `a ⇒ b`, concludes `□a ⇒ □b`.
    pub fn box_mono(&mut self, i: usize) -> usize {
        let (a, _) = self.imp_parts(i);
        let m1 = self.axiom("M1", &[a]);
        let t = self.trans(m1, i);
        self.box_mono_from_boxed(t)
    }

    /// `⊢ □a ⇒ □□a`.
    pub fn box_four(&mut self, a: &Formula) -> usize {
        let id = self.identity(&Formula::boxed(a.clone()));
        self.box_mono_from_boxed(id)
    }

    /// `⊢ □(a ⇒ b) ⇒ (□a ⇒ □b)`.
    pub fn box_k(&mut self, a: &Formula, b: &Formula) -> usize {
        let ab = Formula::imp(a.clone(), b.clone());
        let boxed_a = Formula::boxed(a.clone());
        let m1_ab = self.axiom("M1", &[ab]);
        let m1_a = self.axiom("M1", std::slice::from_ref(a));
        let a1 = self.axiom("A1", &[boxed_a, a.clone(), b.clone()]);
        let pre = self.mp(m1_a, a1);
        let lifted = self.trans(m1_ab, pre);
        let boxed = self.box_mono_from_boxed(lifted);
        let m3 = self.axiom("M3a", &[a.clone(), b.clone()]);
        self.trans(boxed, m3)
    }
}

/// A bundled derivation of one of the standard derived modal rules.
#[derive(Clone, Debug)]
pub struct DerivedRule {
    pub id: &'static str,
    /// `hypotheses |- conclusion`, hypotheses comma separated.
    pub statement: &'static str,
    pub proof: Proof,
}

impl DerivedRule {
    pub fn hypotheses(&self) -> Vec<Formula> {
        let (lhs, _) = self.statement.split_once("|-").expect("statement has a turnstile");
        lhs.split(',')
            .filter(|s| !s.trim().is_empty())
            .map(|s| parse_formula(s).expect("statement parses"))
            .collect()
    }

    pub fn conclusion(&self) -> Formula {
        let (_, rhs) = self.statement.split_once("|-").expect("statement has a turnstile");
        parse_formula(rhs).expect("statement parses")
    }
}

fn rule(
    id: &'static str,
    statement: &'static str,
    catalog: &SchemaCatalog,
    build: impl Fn(&mut ProofBuilder),
) -> DerivedRule {
    let (lhs, _) = statement.split_once("|-").expect("turnstile");
    let theory = lhs
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .enumerate()
        .map(|(i, s)| (format!("h{}", i + 1), parse_formula(s).expect("statement parses")))
        .collect();
    let mut b = ProofBuilder::new(catalog, theory);
    build(&mut b);
    DerivedRule {
        id,
        statement,
        proof: b.finish(),
    }
}

/// Proofs of the seven derived rules in `p0, p1`:
/// `□⊤`; `□α⇒□□α`; congruence; `□α, α⇒β ⊢ □β`; `□α, □(α⇒β) ⊢ □β`;
/// `□α⇒β ⊢ □α⇒□β`; and `□(α⇒β)⇒(□α⇒□β)`.
pub fn derived_rules(catalog: &SchemaCatalog) -> Vec<DerivedRule> {
    let p = Formula::var(0);
    let q = Formula::var(1);
    vec![
        rule("box-top", "|- box top", catalog, |b| {
            let t = b.top();
            b.nec(t);
        }),
        rule("box-four", "|- box p0 -> box box p0", catalog, |b| {
            b.box_four(&p);
        }),
        rule("box-congruence", "p0 <-> p1 |- box p0 -> box p1", catalog, |b| {
            let h = b.hyp("h1");
            let fwd = b.axiom(
                "A2",
                &[Formula::imp(p.clone(), q.clone()), Formula::imp(q.clone(), p.clone())],
            );
            let pq = b.mp(h, fwd);
            b.box_mono(pq);
        }),
        rule("box-mp", "box p0, p0 -> p1 |- box p1", catalog, |b| {
            let bp = b.hyp("h1");
            let pq = b.hyp("h2");
            let mono = b.box_mono(pq);
            b.mp(bp, mono);
        }),
        rule("box-mp-boxed", "box p0, box (p0 -> p1) |- box p1", catalog, |b| {
            let bp = b.hyp("h1");
            let bpq = b.hyp("h2");
            let m1 = b.axiom("M1", &[Formula::imp(p.clone(), q.clone())]);
            let pq = b.mp(bpq, m1);
            let mono = b.box_mono(pq);
            b.mp(bp, mono);
        }),
        rule("box-mono-boxed", "box p0 -> p1 |- box p0 -> box p1", catalog, |b| {
            let h = b.hyp("h1");
            b.box_mono_from_boxed(h);
        }),
        rule("box-k", "|- box (p0 -> p1) -> box p0 -> box p1", catalog, |b| {
            b.box_k(&p, &q);
        }),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::proof::check_proof;
    use crate::quantifier::U2Parse;

    #[test]
    fn lemmas_check() {
        let c = SchemaCatalog::mmtl(U2Parse::Standard);
        let f = parse_formula("box p0 & p1").unwrap();
        let mut b = ProofBuilder::new(&c, vec![("h".into(), parse_formula("p0 -> p1 -> p2").unwrap())]);
        let id = b.identity(&f);
        assert_eq!(b.formula(id), &Formula::imp(f.clone(), f.clone()));
        let h = b.hyp("h");
        let ex = b.exchange(h);
        assert_eq!(b.formula(ex).to_string(), "p1 -> p0 -> p2");
        let w = b.weaken(h, &Formula::Bot);
        assert_eq!(b.formula(w).to_string(), "bot -> p0 -> p1 -> p2");
        let proof = b.finish();
        assert!(check_proof(&c, &proof).is_ok());
    }

    #[test]
    fn derived_rules_check_and_prove_their_statements() {
        for parse in [U2Parse::Standard, U2Parse::Alt] {
            let c = SchemaCatalog::mmtl(parse);
            let rules = derived_rules(&c);
            assert_eq!(rules.len(), 7);
            for r in rules {
                let concl = check_proof(&c, &r.proof).unwrap_or_else(|e| panic!("{}: {e}", r.id));
                assert_eq!(concl, &r.conclusion(), "{}", r.id);
                let theory: Vec<Formula> = r.proof.theory.iter().map(|(_, f)| f.clone()).collect();
                assert_eq!(theory, r.hypotheses(), "{}", r.id);
            }
        }
    }

    #[test]
    fn repeated_formulas_are_reused() {
        let c = SchemaCatalog::mmtl(U2Parse::Standard);
        let mut b = ProofBuilder::new(&c, Vec::new());
        let x = b.top();
        let y = b.top();
        assert_eq!(x, y);
        assert_eq!(b.len(), 1);
    }
}
