//! Cross-checks of characterization results over a corpus.
//!
//! Every equivalence is audited as agreement between independently computed
//! verdicts. Disagreements are findings with witnesses, never errors.

use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{pairs, Elem, FiniteMTLAlgebra};
use crate::analysis::{
    disjunction_condition, is_representable, is_semisimple, is_simple, is_strong, is_u_homomorphism,
    subdirect_decompose, DecompositionMode,
};
use crate::chains::l6;
use crate::elemset::ElemSet;
use crate::filters::{
    check_maximal_ufilter, congruence_classes, enumerate_ufilters, maximal_ufilters, minimal_primes, quotient,
};
use crate::logic::semantics::{countermodel_search, Goal, PoolEntry, SearchOutcome, DEFAULT_MAX_VARS};
use crate::properties::{check_mba_axioms, check_umv_axioms, properties_suite, CheckReport};
use crate::quantifier::{delta_table, validate_quantifier, U2Parse, UmtlAlgebra};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Finding {
    pub subject: String,
    pub check: &'static str,
    pub agree: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct AuditReport {
    pub findings: Vec<Finding>,
}

impl AuditReport {
    pub fn disagreements(&self) -> impl Iterator<Item = &Finding> {
        self.findings.iter().filter(|f| !f.agree)
    }

    pub fn check(&self, id: &str) -> impl Iterator<Item = &Finding> + '_ {
        let id = id.to_string();
        self.findings.iter().filter(move |f| f.check == id)
    }

    pub fn all_agree(&self) -> bool {
        self.findings.iter().all(|f| f.agree)
    }
}

pub fn set_names(a: &FiniteMTLAlgebra, s: ElemSet) -> String {
    let names: Vec<&str> = s.iter().map(|x| a.name(x)).collect();
    format!("{{{}}}", names.join(", "))
}

fn tuple_names(a: &FiniteMTLAlgebra, xs: &[Elem]) -> String {
    let names: Vec<&str> = xs.iter().map(|&x| a.name(x)).collect();
    format!("({})", names.join(", "))
}

fn finding(subject: &str, check: &'static str, agree: bool, detail: String) -> Finding {
    Finding {
        subject: subject.to_string(),
        check,
        agree,
        detail,
    }
}

fn suite_detail(a: &FiniteMTLAlgebra, r: &CheckReport) -> String {
    if let Some(p) = &r.precondition {
        return format!("precondition: {p}");
    }
    let failures: Vec<String> = r
        .failures()
        .map(|i| match &i.witness {
            Some(w) if !w.is_empty() => format!("{} fails at {}", i.id, tuple_names(a, w)),
            _ => format!("{} fails", i.id),
        })
        .collect();
    if failures.is_empty() {
        format!("{} items hold", r.items.len())
    } else {
        failures.join("; ")
    }
}

/// All partitions of `0..n`, blocks ordered by least member.
fn partitions(n: usize) -> Vec<Vec<ElemSet>> {
    fn grow(x: usize, n: usize, blocks: &mut Vec<ElemSet>, out: &mut Vec<Vec<ElemSet>>) {
        if x == n {
            out.push(blocks.clone());
            return;
        }
        for i in 0..blocks.len() {
            blocks[i].insert(x);
            grow(x + 1, n, blocks, out);
            blocks[i].remove(x);
        }
        blocks.push(ElemSet::singleton(x));
        grow(x + 1, n, blocks, out);
        blocks.pop();
    }
    let mut out = Vec::new();
    grow(0, n, &mut Vec::new(), &mut out);
    out
}

/// Partitions compatible with `⊙, →, ∧, ∨` and `∀`.
fn u_congruences(q: &UmtlAlgebra) -> Vec<Vec<ElemSet>> {
    let a = q.algebra();
    let n = a.size();
    partitions(n)
        .into_iter()
        .filter(|blocks| {
            let mut class = vec![0; n];
            for (i, b) in blocks.iter().enumerate() {
                for x in b.iter() {
                    class[x] = i;
                }
            }
            let same = |x: Elem, y: Elem| class[x] == class[y];
            let ops: [&dyn Fn(Elem, Elem) -> Elem; 4] = [
                &|x, y| a.odot(x, y),
                &|x, y| a.imp(x, y),
                &|x, y| a.meet(x, y),
                &|x, y| a.join(x, y),
            ];
            pairs(n).filter(|&(x, x2)| same(x, x2)).all(|(x, x2)| {
                same(q.forall(x), q.forall(x2))
                    && a.elements().all(|y| {
                        ops.iter()
                            .all(|op| same(op(x, y), op(x2, y)) && same(op(y, x), op(y, x2)))
                    })
            })
        })
        .collect()
}

/// Whether partition `p` refines partition `r`.
fn refines(p: &[ElemSet], r: &[ElemSet]) -> bool {
    p.iter().all(|b| r.iter().any(|c| b.is_subset(*c)))
}

fn filter_congruence(name: &str, q: &UmtlAlgebra) -> Finding {
    let a = q.algebra();
    let ufilters = enumerate_ufilters(q);
    let induced: Vec<Vec<ElemSet>> = ufilters.iter().map(|&f| congruence_classes(a, f)).collect();
    let top = a.top();
    if let Some((f, _)) = ufilters
        .iter()
        .zip(&induced)
        .find(|(f, classes)| classes.iter().find(|c| c.contains(top)) != Some(*f))
    {
        return finding(
            name,
            "filter-congruence-correspondence",
            false,
            format!("the class of 1 under {} differs from it", set_names(a, *f)),
        );
    }
    let mut from_filters = induced.clone();
    from_filters.sort();
    let mut direct = u_congruences(q);
    direct.sort();
    if from_filters != direct {
        let extra = direct.iter().find(|p| !from_filters.contains(p));
        let detail = match extra {
            Some(p) => {
                let blocks: Vec<String> = p.iter().map(|b| set_names(a, *b)).collect();
                format!("U-congruence {} comes from no U-filter", blocks.join(" "))
            }
            None => "a filter congruence is not a U-congruence".to_string(),
        };
        return finding(name, "filter-congruence-correspondence", false, detail);
    }
    let order_iso = ufilters.iter().zip(&induced).all(|(&f, cf)| {
        ufilters
            .iter()
            .zip(&induced)
            .all(|(&g, cg)| f.is_subset(g) == refines(cf, cg))
    });
    finding(
        name,
        "filter-congruence-correspondence",
        order_iso,
        format!(
            "{} U-filters, {} U-congruences, inclusion {} refinement",
            ufilters.len(),
            direct.len(),
            if order_iso { "matches" } else { "does not match" }
        ),
    )
}

/// Audits of one quantified algebra, in a fixed order.
pub fn audit_pair(name: &str, q: &UmtlAlgebra) -> Vec<Finding> {
    let a = q.algebra();
    let profile = a.classify();
    let carrier = a.carrier();
    let mut out = Vec::new();

    let suite = properties_suite(q);
    out.push(finding(
        name,
        "quantifier-properties",
        suite.all_pass(),
        suite_detail(a, &suite),
    ));
    if profile.mv {
        let r = check_umv_axioms(q);
        out.push(finding(name, "monadic-mv-axioms", r.all_pass(), suite_detail(a, &r)));
    }
    if profile.boolean {
        let r = check_mba_axioms(q);
        out.push(finding(
            name,
            "monadic-boolean-axioms",
            r.all_pass(),
            suite_detail(a, &r),
        ));
    }

    out.push(filter_congruence(name, q));

    let rep = is_representable(q);
    let w = |v: &crate::analysis::Verdict| match (&v.holds, &v.witness) {
        (true, _) => "holds".to_string(),
        (false, Some(w)) => format!("fails at {}", tuple_names(a, w)),
        (false, None) => "fails".to_string(),
    };
    out.push(finding(
        name,
        "representability-conditions",
        rep.agree,
        format!(
            "implication {}; disjunction {}; minimal primes {}",
            w(&rep.implication),
            w(&rep.disjunction),
            w(&rep.minimal_primes)
        ),
    ));
    let strong = is_strong(q);
    out.push(finding(
        name,
        "strong-iff-representable",
        strong.agree,
        format!("strong {}; representable {}", strong.strong.holds, strong.representable),
    ));

    let ufilters = enumerate_ufilters(q);
    let maximal = maximal_ufilters(q);
    let proper: Vec<ElemSet> = ufilters.iter().copied().filter(|&f| f != carrier).collect();
    let mut criterion_bad = Vec::new();
    let mut quotient_bad = Vec::new();
    let mut contract_bad = Vec::new();
    for &f in &proper {
        match check_maximal_ufilter(q, f) {
            Ok(m) if !m.agree => criterion_bad.push(format!(
                "{}: definition {}, criterion {}{}",
                set_names(a, f),
                m.by_definition,
                m.by_criterion,
                m.criterion_witness
                    .map_or(String::new(), |x| format!(" (fails at {})", a.name(x)))
            )),
            Ok(_) => {}
            Err(e) => criterion_bad.push(format!("{}: {e}", set_names(a, f))),
        }
        match quotient(q, f) {
            Ok(r) => {
                let simple = is_simple(&r.quotient).simple;
                if simple != maximal.contains(&f) {
                    quotient_bad.push(format!(
                        "{}: quotient simple {simple}, maximal {}",
                        set_names(a, f),
                        maximal.contains(&f)
                    ));
                }
                if let Err(h) = is_u_homomorphism(&r.class_map, q, &r.quotient) {
                    contract_bad.push(format!("{}: class map breaks {}", set_names(a, f), h.operation));
                }
            }
            Err(e) => {
                quotient_bad.push(format!("{}: {e}", set_names(a, f)));
                contract_bad.push(format!("{}: {e}", set_names(a, f)));
            }
        }
    }
    let summary = |bad: Vec<String>, what: &str| {
        if bad.is_empty() {
            format!("{} proper U-filters {what}", proper.len())
        } else {
            bad.join("; ")
        }
    };
    out.push(finding(
        name,
        "maximality-criterion",
        criterion_bad.is_empty(),
        summary(criterion_bad, "agree"),
    ));

    let s = is_simple(q);
    let list = [
        ("two-ufilters", &s.two_ufilters),
        ("image-simple", &s.image_simple),
        ("trivial-fixpoints", &s.trivial_fixpoints),
        ("unique-proper", &s.unique_proper),
        ("finite-orders", &s.finite_orders),
    ];
    let parts: Vec<String> = list.iter().map(|(id, v)| format!("{id} {}", w(v))).collect();
    out.push(finding(name, "simplicity-conditions", s.agree, parts.join("; ")));

    out.push(finding(
        name,
        "quotient-simple-iff-maximal",
        quotient_bad.is_empty(),
        summary(quotient_bad, "agree"),
    ));

    let ss = is_semisimple(q);
    let (decomposes, how) = match subdirect_decompose(q, DecompositionMode::MaxUFilters) {
        Ok(e) => {
            let ok = e.is_subdirect() && e.factors_simple.iter().all(|&s| s);
            (
                ok,
                format!("{} simple factors, subdirect {}", e.factors.len(), e.is_subdirect()),
            )
        }
        Err(e) => (false, e.to_string()),
    };
    out.push(finding(
        name,
        "semisimple-decomposition",
        ss.semisimple == decomposes,
        format!("radical {}; {how}", set_names(a, ss.radical)),
    ));
    out.push(finding(
        name,
        "quotient-contract",
        contract_bad.is_empty(),
        summary(contract_bad, "give U-homomorphic quotients"),
    ));

    let dc = disjunction_condition(q);
    out.push(finding(
        name,
        "semilinearity-condition",
        !rep.representable || dc.holds,
        format!("representable {}; disjunction condition {}", rep.representable, w(&dc)),
    ));
    out
}

/// Audits that depend only on the base algebra.
pub fn audit_algebra(name: &str, a: &Arc<FiniteMTLAlgebra>, parse: U2Parse) -> Vec<Finding> {
    let mut out = Vec::new();
    let mp = minimal_primes(a);
    let primes: Vec<String> = mp.by_inclusion.iter().map(|&p| set_names(a, p)).collect();
    let perp: Vec<String> = mp.by_perp.iter().map(|&p| set_names(a, p)).collect();
    out.push(finding(
        name,
        "minimal-primes",
        mp.agree,
        format!("by inclusion {}; by annihilators {}", primes.join(" "), perp.join(" ")),
    ));

    let profile = a.classify();
    let delta = validate_quantifier(a, &delta_table(a), parse);
    let delta_representable = match &delta {
        Ok(d) => is_representable(&UmtlAlgebra::from_quantifier(Arc::clone(a), d.clone(), parse)).representable,
        Err(_) => false,
    };
    let delta_detail = match &delta {
        Ok(_) => format!("delta is a quantifier, representable {delta_representable}"),
        Err(e) => format!("delta is not a quantifier: {e}"),
    };
    out.push(finding(
        name,
        "delta-iff-linear",
        profile.linear == (delta.is_ok() && delta_representable),
        format!("linear {}; {delta_detail}", profile.linear),
    ));
    if profile.imtl {
        out.push(finding(name, "delta-on-involutive", delta.is_ok(), delta_detail));
    }
    out
}

/// Per-algebra and per-pair audits; `pairs` names are the subjects.
pub fn theorem_audit(algebras: &[(String, Arc<FiniteMTLAlgebra>)], pairs: &[PoolEntry], parse: U2Parse) -> AuditReport {
    let mut findings: Vec<Finding> = algebras
        .par_iter()
        .map(|(name, a)| audit_algebra(name, a, parse))
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect();
    findings.extend(
        pairs
            .par_iter()
            .map(|p| audit_pair(&p.name, &p.algebra))
            .collect::<Vec<_>>()
            .into_iter()
            .flatten(),
    );
    AuditReport { findings }
}

/// The published U-filters `{1}, {d,1}, {b,c,1}, L` of the six-element
/// algebra, in element indices.
pub fn published_ufilter_listing() -> Vec<ElemSet> {
    let mut v: Vec<ElemSet> = vec![
        ElemSet::from_iter([5]),
        ElemSet::from_iter([4, 5]),
        ElemSet::from_iter([2, 3, 5]),
        ElemSet::from_iter(0..6),
    ];
    v.sort();
    v
}

/// Findings on the six-element algebra: which quantifier the published
/// U-filter listing fits, and whether the claimed countermodel to the
/// disjunction rule is one. `pool` is searched for a genuine countermodel.
pub fn six_element_findings(delta: &UmtlAlgebra, product: &UmtlAlgebra, pool: &[PoolEntry]) -> Vec<Finding> {
    let a = delta.algebra();
    let published = published_ufilter_listing();
    let listing = |fs: &[ElemSet]| fs.iter().map(|&f| set_names(a, f)).collect::<Vec<_>>().join(" ");
    let mut out = Vec::new();
    for (label, q) in [("delta", delta), ("product", product)] {
        let got = enumerate_ufilters(q);
        out.push(finding(
            &format!("l6-{label}"),
            "published-ufilter-listing",
            got == published,
            format!("computed {}; published {}", listing(&got), listing(&published)),
        ));
    }

    let l = l6();
    let (b, d) = (l.lookup("b").expect("b"), l.lookup("d").expect("d"));
    let join = a.join(b, d);
    let forall_c = product.forall(l.lookup("c").expect("c"));
    let dc = disjunction_condition(product);
    out.push(finding(
        "l6-product",
        "disjunction-rule-claim",
        join != a.top() && !dc.holds,
        format!(
            "claimed d∨∀c = d∨b = d; computed ∀c = {}, d∨b = {}; disjunction condition {}",
            a.name(forall_c),
            a.name(join),
            if dc.holds { "holds" } else { "fails" }
        ),
    ));
    let goal = Goal::parse("from p0 | p1 derive p0 | box p1").expect("rule parses");
    let detail = match countermodel_search(&goal, pool, DEFAULT_MAX_VARS) {
        Ok(SearchOutcome::Countermodel { name, labels, .. }) => {
            format!(
                "first countermodel in a pool of {}: {name} at p0={}, p1={}",
                pool.len(),
                labels[0],
                labels[1]
            )
        }
        Ok(SearchOutcome::Exhausted { pool_size, valuations }) => {
            format!("no countermodel among {pool_size} algebras ({valuations} valuations)")
        }
        Err(e) => e.to_string(),
    };
    out.push(finding(
        "pool",
        "disjunction-rule-countermodel",
        detail.starts_with("first"),
        detail,
    ));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chains::{boolean2, chain_algebra, ChainKind};
    use crate::quantifier::{enumerate_quantifiers, identity_table};

    fn pool_of(name: &str, a: FiniteMTLAlgebra) -> (Arc<FiniteMTLAlgebra>, Vec<PoolEntry>) {
        let a = Arc::new(a);
        let pool = enumerate_quantifiers(&a, U2Parse::Standard)
            .into_iter()
            .enumerate()
            .map(|(i, u)| PoolEntry {
                name: format!("{name}#{i}"),
                algebra: UmtlAlgebra::from_quantifier(Arc::clone(&a), u, U2Parse::Standard),
            })
            .collect();
        (a, pool)
    }

    #[test]
    fn partitions_count_bell_numbers() {
        let counts: Vec<usize> = (0..7).map(|n| partitions(n).len()).collect();
        assert_eq!(counts, [1, 1, 2, 5, 15, 52, 203]);
    }

    #[test]
    fn boolean_identity_agrees_everywhere() {
        let (a, pool) = pool_of("boolean-2", boolean2());
        let report = theorem_audit(&[("boolean-2".into(), a)], &pool, U2Parse::Standard);
        assert!(report.all_agree(), "{:?}", report.disagreements().collect::<Vec<_>>());
        assert_eq!(report.check("monadic-boolean-axioms").count(), 1);
    }

    #[test]
    fn lukasiewicz_identity_disagrees_only_on_simplicity() {
        let a = Arc::new(chain_algebra(ChainKind::Lukasiewicz, 3).unwrap());
        let q = UmtlAlgebra::new(Arc::clone(&a), &identity_table(&a), U2Parse::Standard).unwrap();
        let bad: Vec<&'static str> = audit_pair("l3-id", &q)
            .into_iter()
            .filter(|f| !f.agree)
            .map(|f| f.check)
            .collect();
        assert_eq!(bad, ["simplicity-conditions"]);
    }

    #[test]
    fn goedel_delta_is_reported_not_assumed() {
        let a = Arc::new(chain_algebra(ChainKind::Goedel, 3).unwrap());
        let f = audit_algebra("g3", &a, U2Parse::Standard);
        let delta = f.iter().find(|f| f.check == "delta-iff-linear").unwrap();
        assert!(!delta.agree);
        assert!(delta.detail.contains("not a quantifier"));
    }

    #[test]
    fn six_element_listing_fits_the_product_quantifier() {
        let a = Arc::new(l6());
        let delta = UmtlAlgebra::new(Arc::clone(&a), &delta_table(&a), U2Parse::Standard).unwrap();
        let product = UmtlAlgebra::new(Arc::clone(&a), &crate::chains::l6_product_table(), U2Parse::Standard).unwrap();
        let pool = vec![PoolEntry {
            name: "l6-delta".into(),
            algebra: delta.clone(),
        }];
        let f = six_element_findings(&delta, &product, &pool);
        let verdicts: Vec<(&str, &str, bool)> = f.iter().map(|f| (f.subject.as_str(), f.check, f.agree)).collect();
        assert_eq!(
            verdicts,
            [
                ("l6-delta", "published-ufilter-listing", false),
                ("l6-product", "published-ufilter-listing", true),
                ("l6-product", "disjunction-rule-claim", false),
                ("pool", "disjunction-rule-countermodel", true),
            ]
        );
        assert!(f[2].detail.contains("d∨b = 1"), "{}", f[2].detail);
        assert!(f[3].detail.contains("l6-delta at p0=b, p1=d"), "{}", f[3].detail);
    }
}
