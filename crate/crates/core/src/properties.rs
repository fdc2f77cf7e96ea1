//! Property suites for quantifiers: the fourteen derived laws of a universal
//! quantifier, the MV-style axioms and the monadic Boolean axioms.
//!
//! Failures are report entries rather than errors, since the suites double
//! as audits over forced (unvalidated) tables.

use serde::Serialize;

use crate::algebra::{pairs, Elem, FiniteMTLAlgebra};
use crate::quantifier::UmtlAlgebra;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckItem {
    pub id: &'static str,
    pub statement: &'static str,
    pub pass: bool,
    /// Least failing tuple; empty for closed statements such as `∀0 = 0`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<Elem>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub items: Vec<CheckItem>,
    /// Set when the base algebra is outside the subvariety the suite targets.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub precondition: Option<String>,
}

impl CheckReport {
    pub fn all_pass(&self) -> bool {
        self.items.iter().all(|i| i.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckItem> {
        self.items.iter().filter(|i| !i.pass)
    }

    pub fn get(&self, id: &str) -> Option<&CheckItem> {
        self.items.iter().find(|i| i.id == id)
    }
}

fn item(id: &'static str, statement: &'static str, witness: Option<Vec<Elem>>) -> CheckItem {
    CheckItem {
        id,
        statement,
        pass: witness.is_none(),
        witness,
    }
}

fn first_element(n: usize, bad: impl Fn(Elem) -> bool) -> Option<Vec<Elem>> {
    (0..n).find(|&x| bad(x)).map(|x| vec![x])
}

fn first_pair(n: usize, bad: impl Fn(Elem, Elem) -> bool) -> Option<Vec<Elem>> {
    pairs(n).find(|&(x, y)| bad(x, y)).map(|(x, y)| vec![x, y])
}

fn closed(fails: bool) -> Option<Vec<Elem>> {
    fails.then(Vec::new)
}

/// Runs the fourteen derived laws on `q`.
pub fn properties_suite(q: &UmtlAlgebra) -> CheckReport {
    let a = q.algebra();
    let n = a.size();
    let top = a.top();
    let f = |x: Elem| q.forall(x);
    let image = q.image();
    let fixpoints = q.quantifier().fixpoints();

    let implication_bound = first_pair(n, |x, y| !a.le(f(a.imp(x, y)), a.imp(f(x), f(y))))
        .or_else(|| first_element(n, |x| !a.le(f(a.neg(x)), a.neg(f(x)))));
    let image_diff = image
        .union(fixpoints)
        .iter()
        .find(|&x| image.contains(x) != fixpoints.contains(x));
    let image_subalgebra = closed(!image.contains(0) || !image.contains(top)).or_else(|| {
        first_pair(n, |x, y| {
            if !image.contains(x) || !image.contains(y) {
                return false;
            }
            [a.meet(x, y), a.join(x, y), a.odot(x, y), a.imp(x, y), f(x)]
                .iter()
                .any(|&z| !image.contains(z))
        })
    });

    let items = vec![
        item("forall-zero", "∀0 = 0", closed(f(0) != 0)),
        item("forall-one", "∀1 = 1", closed(f(top) != top)),
        item("idempotent", "∀∀x = ∀x", first_element(n, |x| f(f(x)) != f(x))),
        item(
            "monotone",
            "x ≤ y implies ∀x ≤ ∀y",
            first_pair(n, |x, y| a.le(x, y) && !a.le(f(x), f(y))),
        ),
        item("implication-bound", "∀(x→y) ≤ ∀x→∀y and ∀¬x ≤ ¬∀x", implication_bound),
        item(
            "adjunction",
            "∀x ≤ y iff ∀x ≤ ∀y",
            first_pair(n, |x, y| a.le(f(x), y) != a.le(f(x), f(y))),
        ),
        item(
            "closed-implication",
            "∀(∀x→∀y) = ∀x→∀y",
            first_pair(n, |x, y| f(a.imp(f(x), f(y))) != a.imp(f(x), f(y))),
        ),
        item(
            "closed-negation",
            "∀¬∀x = ¬∀x",
            first_element(n, |x| f(a.neg(f(x))) != a.neg(f(x))),
        ),
        item(
            "meet-preserving",
            "∀(x∧y) = ∀x∧∀y",
            first_pair(n, |x, y| f(a.meet(x, y)) != a.meet(f(x), f(y))),
        ),
        item(
            "closed-join",
            "∀(∀x∨∀y) = ∀x∨∀y",
            first_pair(n, |x, y| f(a.join(f(x), f(y))) != a.join(f(x), f(y))),
        ),
        item(
            "product-bound",
            "∀(x⊙y) ≥ ∀x⊙∀y",
            first_pair(n, |x, y| !a.le(a.odot(f(x), f(y)), f(a.odot(x, y)))),
        ),
        item(
            "closed-product",
            "∀(∀x⊙∀y) = ∀x⊙∀y",
            first_pair(n, |x, y| f(a.odot(f(x), f(y))) != a.odot(f(x), f(y))),
        ),
        item("image-is-fixpoints", "∀L = {x : ∀x = x}", image_diff.map(|x| vec![x])),
        item(
            "image-subalgebra",
            "∀L is closed under ∧, ∨, ⊙, →, ∀ and contains 0, 1",
            image_subalgebra,
        ),
    ];
    CheckReport {
        items,
        precondition: None,
    }
}

/// MV-style quantifier axioms for the table `t` on `a`.
pub fn umv_scan(a: &FiniteMTLAlgebra, t: &[Elem]) -> Vec<CheckItem> {
    let n = a.size();
    let top = a.top();
    let f = |x: Elem| t[x];
    vec![
        item("umv-top-fixed", "∀1 = 1", closed(f(top) != top)),
        item("umv-deflationary", "∀x ≤ x", first_element(n, |x| !a.le(f(x), x))),
        item(
            "umv-join-absorbs",
            "∀(x∨∀y) = ∀x∨∀y",
            first_pair(n, |x, y| f(a.join(x, f(y))) != a.join(f(x), f(y))),
        ),
        item(
            "umv-implication-distributes",
            "∀(x→y)→(∀x→∀y) = 1",
            first_pair(n, |x, y| a.imp(f(a.imp(x, y)), a.imp(f(x), f(y))) != top),
        ),
        item(
            "umv-closed-implication",
            "∀(∀x→∀y) = ∀x→∀y",
            first_pair(n, |x, y| f(a.imp(f(x), f(y))) != a.imp(f(x), f(y))),
        ),
    ]
}

/// Monadic Boolean axioms for an existential table `e` on `a`.
pub fn mba_scan(a: &FiniteMTLAlgebra, e: &[Elem]) -> Vec<CheckItem> {
    let n = a.size();
    let g = |x: Elem| e[x];
    vec![
        item("mba-exists-zero", "∃0 = 0", closed(g(0) != 0)),
        item("mba-inflationary", "x ≤ ∃x", first_element(n, |x| !a.le(x, g(x)))),
        item(
            "mba-meet-absorbs",
            "∃(x∧∃y) = ∃x∧∃y",
            first_pair(n, |x, y| g(a.meet(x, g(y))) != a.meet(g(x), g(y))),
        ),
    ]
}

/// `∃x = ¬∀¬x`
pub fn existential_table(a: &FiniteMTLAlgebra, t: &[Elem]) -> Vec<Elem> {
    a.elements().map(|x| a.neg(t[a.neg(x)])).collect()
}

pub fn check_umv_axioms(q: &UmtlAlgebra) -> CheckReport {
    let a = q.algebra();
    CheckReport {
        items: umv_scan(a, q.quantifier().table()),
        precondition: (!a.classify().mv).then(|| "base algebra does not satisfy (x→y)→y = (y→x)→x".to_string()),
    }
}

pub fn check_mba_axioms(q: &UmtlAlgebra) -> CheckReport {
    let a = q.algebra();
    let e = existential_table(a, q.quantifier().table());
    CheckReport {
        items: mba_scan(a, &e),
        precondition: (!a.classify().boolean).then(|| "base algebra does not satisfy x ∨ ¬x = 1".to_string()),
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::chains::{boolean2, chain_algebra, l6, ChainKind};
    use crate::quantifier::{delta_table, enumerate_quantifiers, identity_table, U2Parse};

    fn pair(alg: FiniteMTLAlgebra, t: Vec<Elem>) -> UmtlAlgebra {
        UmtlAlgebra::new(Arc::new(alg), &t, U2Parse::Standard).unwrap()
    }

    #[test]
    fn delta_on_six_element_passes_everything() {
        let a = l6();
        let t = delta_table(&a);
        let r = properties_suite(&pair(a, t));
        assert_eq!(r.items.len(), 14);
        assert!(r.all_pass(), "{:?}", r.failures().collect::<Vec<_>>());
    }

    #[test]
    fn identity_passes_everything() {
        for a in [l6(), chain_algebra(ChainKind::Goedel, 5).unwrap()] {
            let t = identity_table(&a);
            assert!(properties_suite(&pair(a, t)).all_pass());
        }
    }

    #[test]
    fn forced_delta_on_goedel_three_breaks_derived_laws() {
        let g = Arc::new(chain_algebra(ChainKind::Goedel, 3).unwrap());
        let q = UmtlAlgebra::forced(g.clone(), &delta_table(&g)).unwrap();
        let r = properties_suite(&q);
        // ∀L = {0, 1} is a subalgebra and ∀ is still an interior operator,
        // so only laws that need ∀ to commute with double negation can fail.
        assert!(r.get("forall-zero").unwrap().pass);
        assert!(r.get("idempotent").unwrap().pass);
        assert!(r.get("monotone").unwrap().pass);
        assert!(r.get("image-subalgebra").unwrap().pass);
        let failed: Vec<&str> = r.failures().map(|i| i.id).collect();
        assert!(failed.is_empty() || failed.iter().all(|id| r.get(id).unwrap().witness.is_some()));
    }

    #[test]
    fn enumerated_quantifiers_pass_suite() {
        for a in [l6(), chain_algebra(ChainKind::NilpotentMinimum, 6).unwrap()] {
            let a = Arc::new(a);
            for q in enumerate_quantifiers(&a, U2Parse::Standard) {
                let r = properties_suite(&UmtlAlgebra::from_quantifier(a.clone(), q, U2Parse::Standard));
                assert!(r.all_pass());
            }
        }
    }

    #[test]
    fn umv_axioms_on_lukasiewicz_three_delta() {
        let a = chain_algebra(ChainKind::Lukasiewicz, 3).unwrap();
        let t = delta_table(&a);
        let r = check_umv_axioms(&pair(a, t));
        assert!(r.precondition.is_none());
        assert!(r.all_pass());
    }

    #[test]
    fn umv_axioms_on_six_element_delta() {
        let a = l6();
        let t = delta_table(&a);
        let r = check_umv_axioms(&pair(a, t));
        assert!(r.precondition.is_none());
        assert!(r.all_pass());
    }

    #[test]
    fn mba_axioms_on_boolean_identity() {
        let a = boolean2();
        let t = identity_table(&a);
        let r = check_mba_axioms(&pair(a, t));
        assert!(r.precondition.is_none() && r.all_pass());
    }

    #[test]
    fn mba_precondition_reported_not_fatal() {
        let a = l6();
        let t = delta_table(&a);
        let r = check_mba_axioms(&pair(a, t));
        assert!(r.precondition.is_some());
        assert_eq!(r.items.len(), 3);
    }
}
