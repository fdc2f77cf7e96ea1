use std::sync::Arc;

use proptest::prelude::*;
use umtl_core::algebra::{Axiom, ValidationError};
use umtl_core::chains::{boolean2, chain_algebra, l6, l6_names, l6_product_table, ChainKind};
use umtl_core::properties::properties_suite;
use umtl_core::quantifier::{brute_force_quantifiers, delta_table, enumerate_quantifiers, validate_quantifier};
use umtl_core::{Elem, FiniteMTLAlgebra, U2Parse, UmtlAlgebra};

const PARSES: [U2Parse; 2] = [U2Parse::Standard, U2Parse::Alt];

fn corpus() -> Vec<(String, FiniteMTLAlgebra)> {
    let mut out = vec![("boolean-2".to_string(), boolean2()), ("l6".to_string(), l6())];
    for kind in ChainKind::ALL {
        for n in 2..=6 {
            out.push((format!("{}-{n}", kind.short()), chain_algebra(kind, n).unwrap()));
        }
    }
    out
}

/// Every map `L → L` as a table, in lexicographic order.
fn all_maps(n: usize) -> impl Iterator<Item = Vec<Elem>> {
    (0..n.pow(n as u32)).map(move |mut k| {
        let mut t = vec![0; n];
        for slot in t.iter_mut().rev() {
            *slot = k % n;
            k /= n;
        }
        t
    })
}

/// U1–U3 written out directly from their statements.
fn satisfies_axioms(a: &FiniteMTLAlgebra, t: &[Elem], parse: U2Parse) -> bool {
    a.elements().all(|x| {
        a.le(t[x], x)
            && a.elements().all(|y| {
                let rhs = a.imp(a.imp(t[x], t[y]), t[y]);
                let lhs = match parse {
                    U2Parse::Standard => t[a.imp(a.imp(x, t[y]), t[y])],
                    U2Parse::Alt => t[a.imp(x, a.imp(t[y], t[y]))],
                };
                lhs == rhs && t[a.imp(t[x], y)] == a.imp(t[x], t[y])
            })
    })
}

#[test]
fn enumeration_matches_scan_of_all_maps() {
    for (name, a) in corpus().into_iter().filter(|(_, a)| a.size() <= 5) {
        for parse in PARSES {
            let fast: Vec<Vec<Elem>> = enumerate_quantifiers(&a, parse)
                .iter()
                .map(|u| u.table().to_vec())
                .collect();
            let naive: Vec<Vec<Elem>> = all_maps(a.size()).filter(|t| satisfies_axioms(&a, t, parse)).collect();
            assert_eq!(fast, naive, "{name} {parse}");
            let library: Vec<Vec<Elem>> = brute_force_quantifiers(&a, parse)
                .unwrap()
                .iter()
                .map(|u| u.table().to_vec())
                .collect();
            assert_eq!(library, naive, "{name} {parse}");
        }
    }
}

#[test]
fn six_element_quantifiers() {
    let a = l6();
    let tables: Vec<Vec<Elem>> = enumerate_quantifiers(&a, U2Parse::Standard)
        .iter()
        .map(|u| u.table().to_vec())
        .collect();
    let naive: Vec<Vec<Elem>> = all_maps(6)
        .filter(|t| satisfies_axioms(&a, t, U2Parse::Standard))
        .collect();
    assert_eq!(tables, naive);
    assert!(tables.contains(&delta_table(&a)));
    assert!(tables.contains(&l6_product_table()));
}

#[test]
fn mutated_six_element_table_is_rejected_with_witnesses() {
    let a = l6();
    let [_, _, b, c, d, _] = l6_names();
    let mut odot = a.odot_rows();
    odot[c][d] = b;
    let err = FiniteMTLAlgebra::validate(6, &odot, &a.arrow_rows(), 5).unwrap_err();
    let ValidationError::Axioms(v) = err else {
        panic!("expected axiom violations, got {err}");
    };
    let axioms: Vec<Axiom> = v.iter().map(|x| x.axiom).collect();
    assert!(axioms.contains(&Axiom::OdotCommutative));
    assert!(axioms.contains(&Axiom::Residuation));
    let comm = v.iter().find(|x| x.axiom == Axiom::OdotCommutative).unwrap();
    assert_eq!(comm.witness, [c, d]);
}

#[test]
fn delta_is_a_quantifier_on_involutive_members() {
    for (name, a) in corpus() {
        if a.classify().imtl {
            assert!(
                validate_quantifier(&a, &delta_table(&a), U2Parse::Standard).is_ok(),
                "{name}"
            );
        }
    }
}

#[test]
fn alternative_grouping_admits_no_quantifier() {
    // At x = y = 0 the left side is ∀(0→1) = 1 and the right side ∀0 = 0.
    for (name, a) in corpus() {
        assert!(enumerate_quantifiers(&a, U2Parse::Alt).is_empty(), "{name}");
        let v = umtl_core::quantifier::scan_quantifier_axioms(&a, &delta_table(&a), U2Parse::Alt);
        assert_eq!(v.len(), 1, "{name}");
        assert_eq!(v[0].witness, [0, 0], "{name}");
    }
}

#[test]
fn delta_fails_on_goedel_chains_beyond_two() {
    for n in 3..=6 {
        let a = chain_algebra(ChainKind::Goedel, n).unwrap();
        assert!(
            validate_quantifier(&a, &delta_table(&a), U2Parse::Standard).is_err(),
            "goedel-{n}"
        );
    }
}

#[test]
fn property_suite_holds_on_every_enumerated_pair() {
    for (name, a) in corpus() {
        let a = Arc::new(a);
        for parse in PARSES {
            for u in enumerate_quantifiers(&a, parse) {
                let q = UmtlAlgebra::from_quantifier(Arc::clone(&a), u, parse);
                let r = properties_suite(&q);
                assert!(
                    r.all_pass(),
                    "{name} {parse} {:?}: {:?}",
                    q.table_names(),
                    r.failures().collect::<Vec<_>>()
                );
            }
        }
    }
}

fn chain() -> impl Strategy<Value = FiniteMTLAlgebra> {
    (0..3usize, 2..=7usize).prop_map(|(k, n)| chain_algebra(ChainKind::ALL[k], n).unwrap())
}

proptest! {
    #[test]
    fn fixpoints_form_a_subalgebra(a in chain(), pick in any::<prop::sample::Index>()) {
        let qs = enumerate_quantifiers(&a, U2Parse::Standard);
        let u = &qs[pick.index(qs.len())];
        let fix = u.fixpoints();
        prop_assert!(fix.contains(a.bottom()) && fix.contains(a.top()));
        for x in fix.iter() {
            for y in fix.iter() {
                prop_assert!(fix.contains(a.odot(x, y)));
                prop_assert!(fix.contains(a.imp(x, y)));
                prop_assert!(fix.contains(a.meet(x, y)));
                prop_assert!(fix.contains(a.join(x, y)));
            }
        }
        for x in a.elements() {
            let v = u.apply(x);
            prop_assert!(fix.contains(v) && a.le(v, x));
            prop_assert!(fix.iter().filter(|&f| a.le(f, x)).all(|f| a.le(f, v)));
        }
    }

    #[test]
    fn random_maps_agree_with_validation(a in chain(), seed in any::<u64>()) {
        let n = a.size();
        let t: Vec<Elem> = (0..n).map(|i| ((seed >> (i * 3)) as usize) % n).collect();
        for parse in PARSES {
            prop_assert_eq!(validate_quantifier(&a, &t, parse).is_ok(), satisfies_axioms(&a, &t, parse));
        }
    }
}
