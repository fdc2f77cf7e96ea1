use std::collections::BTreeSet;
use std::sync::Arc;

use umtl_core::audit::{six_element_findings, theorem_audit};
use umtl_core::chains::{boolean2, chain_algebra, l6, l6_product_table, ChainKind};
use umtl_core::filters::enumerate_ufilters;
use umtl_core::logic::PoolEntry;
use umtl_core::quantifier::{delta_table, enumerate_quantifiers};
use umtl_core::{FiniteMTLAlgebra, U2Parse, UmtlAlgebra};

fn corpus() -> (Vec<(String, Arc<FiniteMTLAlgebra>)>, Vec<PoolEntry>) {
    let mut algebras = vec![
        ("boolean-2".to_string(), Arc::new(boolean2())),
        ("l6".to_string(), Arc::new(l6())),
    ];
    for kind in ChainKind::ALL {
        for n in 2..=6 {
            algebras.push((
                format!("{}-{n}", kind.short()),
                Arc::new(chain_algebra(kind, n).unwrap()),
            ));
        }
    }
    let mut pairs = Vec::new();
    for (name, a) in &algebras {
        for u in enumerate_quantifiers(a, U2Parse::Standard) {
            let q = UmtlAlgebra::from_quantifier(Arc::clone(a), u, U2Parse::Standard);
            pairs.push(PoolEntry {
                name: format!("{name} [{}]", q.table_names().join(" ")),
                algebra: q,
            });
        }
    }
    (algebras, pairs)
}

#[test]
fn disagreements_are_confined_to_two_known_families() {
    let (algebras, pairs) = corpus();
    let report = theorem_audit(&algebras, &pairs, U2Parse::Standard);
    let mut simplicity = BTreeSet::new();
    for f in report.disagreements() {
        match f.check {
            "delta-iff-linear" => {
                let n: usize = f.subject.strip_prefix("goedel-").expect(&f.subject).parse().unwrap();
                assert!(n >= 3, "{}", f.subject);
            }
            "simplicity-conditions" => {
                assert_eq!(f.detail.matches("fails").count(), 1, "{}", f.detail);
                assert!(f.detail.contains("trivial-fixpoints fails"), "{}", f.detail);
                simplicity.insert(f.subject.clone());
            }
            other => panic!("unexpected disagreement {other} on {}: {}", f.subject, f.detail),
        }
    }
    // Each such pair is simple by definition while fixing more than 0 and 1.
    for p in pairs.iter().filter(|p| simplicity.contains(&p.name)) {
        let q = &p.algebra;
        assert_eq!(enumerate_ufilters(q).len(), 2, "{}", p.name);
        assert!(q.quantifier().fixpoints().len() > 2, "{}", p.name);
        assert!(q.algebra().classify().imtl, "{}", p.name);
    }
    let expected: BTreeSet<String> = pairs
        .iter()
        .filter(|p| {
            let q = &p.algebra;
            enumerate_ufilters(q).len() == 2 && q.quantifier().fixpoints().len() > 2
        })
        .map(|p| p.name.clone())
        .collect();
    assert_eq!(simplicity, expected);
    assert!(!expected.is_empty());
}

#[test]
fn goedel_delta_disagreements_cover_every_longer_chain() {
    let (algebras, pairs) = corpus();
    let report = theorem_audit(&algebras, &pairs, U2Parse::Standard);
    let subjects: Vec<&str> = report
        .check("delta-iff-linear")
        .filter(|f| !f.agree)
        .map(|f| f.subject.as_str())
        .collect();
    assert_eq!(subjects, ["goedel-3", "goedel-4", "goedel-5", "goedel-6"]);
}

#[test]
fn six_element_findings_locate_the_published_listing() {
    let a = Arc::new(l6());
    let delta = UmtlAlgebra::new(Arc::clone(&a), &delta_table(&a), U2Parse::Standard).unwrap();
    let product = UmtlAlgebra::new(Arc::clone(&a), &l6_product_table(), U2Parse::Standard).unwrap();
    let pool = vec![
        PoolEntry {
            name: "l6-delta".into(),
            algebra: delta.clone(),
        },
        PoolEntry {
            name: "l6-product".into(),
            algebra: product.clone(),
        },
    ];
    let f = six_element_findings(&delta, &product, &pool);
    let verdict = |subject: &str, check: &str| {
        f.iter()
            .find(|x| x.subject == subject && x.check == check)
            .unwrap()
            .agree
    };
    assert!(!verdict("l6-delta", "published-ufilter-listing"));
    assert!(verdict("l6-product", "published-ufilter-listing"));
    assert!(!verdict("l6-product", "disjunction-rule-claim"));
    // d ∨ b is the top, computed from the order.
    let (b, d) = (a.lookup("b").unwrap(), a.lookup("d").unwrap());
    assert_eq!(a.join(b, d), a.top());
}
