//! Filters, U-filters and the congruences they induce.
//!
//! A filter is a subset containing the top and closed under modus ponens;
//! a U-filter is additionally closed under `∀`. On a finite algebra every
//! filter is principal, generated by its least element, which makes
//! enumeration a walk over the carrier. The `*_by_subset_scan` functions
//! test all `2^n` subsets instead and serve as oracles.

use serde::Serialize;
use thiserror::Error;

use crate::algebra::{pairs, Elem, FiniteMTLAlgebra, ValidationError};
use crate::elemset::ElemSet;
use crate::quantifier::{QuantifierError, UmtlAlgebra};

/// Largest carrier accepted by the subset-scan oracles.
pub const SUBSET_SCAN_MAX: usize = 20;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FilterError {
    #[error("a generating set must be nonempty")]
    EmptyGenerators,
    #[error("{0:?} is not a filter")]
    NotFilter(ElemSet),
    #[error("{0:?} is not a U-filter")]
    NotUFilter(ElemSet),
    #[error("improper filter: the quotient by the whole carrier has a single class")]
    Improper,
    #[error("∀ is not compatible with the congruence: {x} and {y} are related but ∀{x} and ∀{y} are not")]
    IllDefinedQuantifier { x: Elem, y: Elem },
    #[error("{op} is not compatible with the congruence: {x} ≡ {x2} and {y} ≡ {y2} give unrelated results")]
    IllDefinedOperation {
        op: &'static str,
        x: Elem,
        x2: Elem,
        y: Elem,
        y2: Elem,
    },
    #[error("quotient tables failed validation: {0}")]
    Quotient(#[from] ValidationError),
    #[error("quotient quantifier failed validation: {0}")]
    QuotientQuantifier(#[from] QuantifierError),
}

/// `1 ∈ S` and `x, x→y ∈ S` imply `y ∈ S`.
pub fn is_filter(a: &FiniteMTLAlgebra, s: ElemSet) -> bool {
    s.contains(a.top()) && pairs(a.size()).all(|(x, y)| !(s.contains(x) && s.contains(a.imp(x, y))) || s.contains(y))
}

/// `1 ∈ S`, `S` upward closed and closed under `⊙`.
pub fn is_filter_by_order(a: &FiniteMTLAlgebra, s: ElemSet) -> bool {
    s.contains(a.top())
        && pairs(a.size()).all(|(x, y)| {
            let upward = !(s.contains(x) && a.le(x, y)) || s.contains(y);
            let product = !(s.contains(x) && s.contains(y)) || s.contains(a.odot(x, y));
            upward && product
        })
}

pub fn is_ufilter(q: &UmtlAlgebra, s: ElemSet) -> bool {
    is_filter(q.algebra(), s) && s.iter().all(|x| s.contains(q.forall(x)))
}

/// Proper filter such that `x∨y ∈ F` implies `x ∈ F` or `y ∈ F`.
pub fn is_prime(a: &FiniteMTLAlgebra, s: ElemSet) -> bool {
    is_filter(a, s)
        && s != a.carrier()
        && pairs(a.size()).all(|(x, y)| !s.contains(a.join(x, y)) || s.contains(x) || s.contains(y))
}

/// `{y : y >= x}`
pub fn up_set(a: &FiniteMTLAlgebra, x: Elem) -> ElemSet {
    a.elements().filter(|&y| a.le(x, y)).collect()
}

fn upward_closure(a: &FiniteMTLAlgebra, s: ElemSet) -> ElemSet {
    s.iter().fold(ElemSet::EMPTY, |acc, x| acc.union(up_set(a, x)))
}

fn mp_closure(a: &FiniteMTLAlgebra, seed: ElemSet, forall: Option<&[Elem]>) -> ElemSet {
    let mut s = seed.with(a.top());
    loop {
        let mut next = s;
        for x in s.iter() {
            if let Some(t) = forall {
                next.insert(t[x]);
            }
            for y in a.elements() {
                if s.contains(a.imp(x, y)) {
                    next.insert(y);
                }
            }
        }
        if next == s {
            return s;
        }
        s = next;
    }
}

fn product_closure(a: &FiniteMTLAlgebra, seed: ElemSet) -> ElemSet {
    let mut s = seed;
    loop {
        let mut next = s;
        for x in s.iter() {
            for y in s.iter() {
                next.insert(a.odot(x, y));
            }
        }
        if next == s {
            return s;
        }
        s = next;
    }
}

/// Smallest filter containing `x`, by closing under modus ponens.
pub fn generated_filter(a: &FiniteMTLAlgebra, x: ElemSet) -> Result<ElemSet, FilterError> {
    if x.is_empty() {
        return Err(FilterError::EmptyGenerators);
    }
    Ok(mp_closure(a, x, None))
}

/// `{y : y >= x₁⊙..⊙xₙ, xᵢ ∈ X}`
pub fn generated_filter_by_products(a: &FiniteMTLAlgebra, x: ElemSet) -> Result<ElemSet, FilterError> {
    if x.is_empty() {
        return Err(FilterError::EmptyGenerators);
    }
    Ok(upward_closure(a, product_closure(a, x)))
}

/// Smallest U-filter containing `x`, by closing under modus ponens and `∀`.
pub fn generated_ufilter(q: &UmtlAlgebra, x: ElemSet) -> Result<ElemSet, FilterError> {
    if x.is_empty() {
        return Err(FilterError::EmptyGenerators);
    }
    Ok(mp_closure(q.algebra(), x, Some(q.quantifier().table())))
}

/// `{y : y >= ∀x₁⊙..⊙∀xₙ, xᵢ ∈ X}`
pub fn generated_ufilter_by_products(q: &UmtlAlgebra, x: ElemSet) -> Result<ElemSet, FilterError> {
    if x.is_empty() {
        return Err(FilterError::EmptyGenerators);
    }
    let images = x.iter().map(|v| q.forall(v)).collect();
    Ok(upward_closure(q.algebra(), product_closure(q.algebra(), images)))
}

/// `{y : y >= (∀x)^n for some n >= 1}`
pub fn principal_ufilter(q: &UmtlAlgebra, x: Elem) -> ElemSet {
    let a = q.algebra();
    let fx = q.forall(x);
    (1..=a.size()).fold(ElemSet::EMPTY, |acc, n| acc.union(up_set(a, a.power(fx, n))))
}

fn sorted(mut v: Vec<ElemSet>) -> Vec<ElemSet> {
    v.sort();
    v.dedup();
    v
}

/// All filters, including the carrier, sorted by bitmask.
pub fn enumerate_filters(a: &FiniteMTLAlgebra) -> Vec<ElemSet> {
    sorted(
        a.elements()
            .map(|x| mp_closure(a, ElemSet::singleton(x), None))
            .collect(),
    )
}

/// All U-filters, including the carrier, sorted by bitmask.
pub fn enumerate_ufilters(q: &UmtlAlgebra) -> Vec<ElemSet> {
    let a = q.algebra();
    let t = q.quantifier().table();
    sorted(
        a.elements()
            .map(|x| mp_closure(a, ElemSet::singleton(x), Some(t)))
            .collect(),
    )
}

fn subset_scan(n: usize, keep: impl Fn(ElemSet) -> bool) -> Option<Vec<ElemSet>> {
    if n > SUBSET_SCAN_MAX {
        return None;
    }
    Some(sorted(
        (0..1u64 << n).map(ElemSet::from_bits).filter(|&s| keep(s)).collect(),
    ))
}

pub fn filters_by_subset_scan(a: &FiniteMTLAlgebra) -> Option<Vec<ElemSet>> {
    subset_scan(a.size(), |s| is_filter(a, s))
}

pub fn ufilters_by_subset_scan(q: &UmtlAlgebra) -> Option<Vec<ElemSet>> {
    subset_scan(q.algebra().size(), |s| is_ufilter(q, s))
}

/// `a^⊥ = {x : a∨x = 1}`
pub fn a_perp(a: &FiniteMTLAlgebra, x: Elem) -> ElemSet {
    a.elements().filter(|&y| a.join(x, y) == a.top()).collect()
}

pub fn prime_filters(a: &FiniteMTLAlgebra) -> Vec<ElemSet> {
    enumerate_filters(a).into_iter().filter(|&s| is_prime(a, s)).collect()
}

/// Minimal prime filters found by two independent routes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MinimalPrimes {
    /// Inclusion-minimal members of the set of prime filters.
    pub by_inclusion: Vec<ElemSet>,
    /// Proper filters `P` with `P = ∪{a^⊥ : a ∉ P}`.
    pub by_perp: Vec<ElemSet>,
    pub agree: bool,
}

impl MinimalPrimes {
    pub fn primes(&self) -> &[ElemSet] {
        &self.by_inclusion
    }
}

pub fn minimal_primes(a: &FiniteMTLAlgebra) -> MinimalPrimes {
    let primes = prime_filters(a);
    let by_inclusion: Vec<ElemSet> = primes
        .iter()
        .copied()
        .filter(|&p| !primes.iter().any(|&r| r.is_proper_subset(p)))
        .collect();
    let carrier = a.carrier();
    let by_perp: Vec<ElemSet> = enumerate_filters(a)
        .into_iter()
        .filter(|&p| p != carrier)
        .filter(|&p| {
            let outside = a.elements().filter(|&x| !p.contains(x));
            outside.fold(ElemSet::EMPTY, |acc, x| acc.union(a_perp(a, x))) == p
        })
        .collect();
    let agree = by_inclusion == by_perp;
    MinimalPrimes {
        by_inclusion,
        by_perp,
        agree,
    }
}

/// Proper filter not strictly contained in another proper filter.
pub fn is_maximal_filter(a: &FiniteMTLAlgebra, s: ElemSet) -> bool {
    let carrier = a.carrier();
    is_filter(a, s)
        && s != carrier
        && !enumerate_filters(a)
            .into_iter()
            .any(|g| g != carrier && s.is_proper_subset(g))
}

/// Proper U-filters not strictly contained in another proper U-filter.
pub fn maximal_ufilters(q: &UmtlAlgebra) -> Vec<ElemSet> {
    let carrier = q.algebra().carrier();
    let proper: Vec<ElemSet> = enumerate_ufilters(q).into_iter().filter(|&f| f != carrier).collect();
    proper
        .iter()
        .copied()
        .filter(|&f| !proper.iter().any(|&g| f.is_proper_subset(g)))
        .collect()
}

/// Maximality of a proper U-filter decided by definition and by the
/// criterion "every `a ∉ F` has some `n` with `¬((∀a)^n) ∈ F`".
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MaximalityCheck {
    pub by_definition: bool,
    pub by_criterion: bool,
    pub agree: bool,
    /// An element outside `F` for which the criterion fails.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub criterion_witness: Option<Elem>,
}

pub fn check_maximal_ufilter(q: &UmtlAlgebra, f: ElemSet) -> Result<MaximalityCheck, FilterError> {
    let a = q.algebra();
    if !is_ufilter(q, f) {
        return Err(FilterError::NotUFilter(f));
    }
    if f == a.carrier() {
        return Err(FilterError::Improper);
    }
    let by_definition = maximal_ufilters(q).contains(&f);
    let criterion_witness = a
        .elements()
        .filter(|&x| !f.contains(x))
        .find(|&x| !(1..=a.size()).any(|n| f.contains(a.neg(a.power(q.forall(x), n)))));
    let by_criterion = criterion_witness.is_none();
    Ok(MaximalityCheck {
        by_definition,
        by_criterion,
        agree: by_definition == by_criterion,
        criterion_witness,
    })
}

/// A subset together with its kind flags.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FilterSet {
    pub members: ElemSet,
    pub is_filter: bool,
    pub is_proper: bool,
    pub is_prime: bool,
    pub is_minimal_prime: bool,
    pub is_maximal: bool,
    pub is_ufilter: bool,
    pub is_maximal_ufilter: bool,
}

impl FilterSet {
    pub fn classify(q: &UmtlAlgebra, members: ElemSet) -> FilterSet {
        let a = q.algebra();
        let is_filter = is_filter(a, members);
        let is_ufilter = is_filter && is_ufilter(q, members);
        FilterSet {
            members,
            is_filter,
            is_proper: members != a.carrier(),
            is_prime: is_prime(a, members),
            is_minimal_prime: is_filter && minimal_primes(a).by_inclusion.contains(&members),
            is_maximal: is_maximal_filter(a, members),
            is_ufilter,
            is_maximal_ufilter: is_ufilter && maximal_ufilters(q).contains(&members),
        }
    }
}

/// Classes of `x ≡ y ⟺ x→y, y→x ∈ F`, ordered by least member.
pub fn congruence_classes(a: &FiniteMTLAlgebra, f: ElemSet) -> Vec<ElemSet> {
    let mut classes: Vec<ElemSet> = Vec::new();
    for x in a.elements() {
        if classes.iter().any(|c| c.contains(x)) {
            continue;
        }
        classes.push(
            a.elements()
                .filter(|&y| f.contains(a.imp(x, y)) && f.contains(a.imp(y, x)))
                .collect(),
        );
    }
    classes
}

fn class_map(n: usize, classes: &[ElemSet]) -> Vec<Elem> {
    (0..n)
        .map(|x| {
            classes
                .iter()
                .position(|c| c.contains(x))
                .expect("classes cover the carrier")
        })
        .collect()
}

type BinOp = fn(&FiniteMTLAlgebra, Elem, Elem) -> Elem;

/// The MTL-algebra `L/F` with its class map and classes.
pub fn quotient_algebra(
    a: &FiniteMTLAlgebra,
    f: ElemSet,
) -> Result<(FiniteMTLAlgebra, Vec<Elem>, Vec<ElemSet>), FilterError> {
    if !is_filter(a, f) {
        return Err(FilterError::NotFilter(f));
    }
    if f == a.carrier() {
        return Err(FilterError::Improper);
    }
    let classes = congruence_classes(a, f);
    let map = class_map(a.size(), &classes);
    let ops: [(&'static str, BinOp); 4] = [
        ("odot", FiniteMTLAlgebra::odot),
        ("arrow", FiniteMTLAlgebra::imp),
        ("meet", FiniteMTLAlgebra::meet),
        ("join", FiniteMTLAlgebra::join),
    ];
    for (op, f) in ops {
        let bad = crate::algebra::triples(a.size())
            .filter(|&(x, x2, _)| map[x] == map[x2])
            .flat_map(|(x, x2, y)| [(x, x2, y, y), (y, y, x, x2)])
            .find(|&(x, x2, y, y2)| map[f(a, x, y)] != map[f(a, x2, y2)]);
        if let Some((x, x2, y, y2)) = bad {
            return Err(FilterError::IllDefinedOperation { op, x, x2, y, y2 });
        }
    }
    let reps: Vec<Elem> = classes
        .iter()
        .map(|c| c.iter().next().expect("classes are nonempty"))
        .collect();
    let table = |op: &dyn Fn(Elem, Elem) -> Elem| -> Vec<Vec<Elem>> {
        reps.iter()
            .map(|&x| reps.iter().map(|&y| map[op(x, y)]).collect())
            .collect()
    };
    let odot = table(&|x, y| a.odot(x, y));
    let arrow = table(&|x, y| a.imp(x, y));
    let alg = FiniteMTLAlgebra::validate(classes.len(), &odot, &arrow, map[a.top()])?;
    let names = reps.iter().map(|&r| format!("[{}]", a.name(r))).collect();
    Ok((alg.with_names(names)?, map, classes))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientResult {
    pub quotient: UmtlAlgebra,
    pub class_map: Vec<Elem>,
    pub classes: Vec<ElemSet>,
}

/// The UMTL-algebra `(L/F, ∀_F)` with `∀_F[x] = [∀x]`.
///
/// Well-definedness of every operation on classes is checked pairwise, so a
/// congruence that is not compatible with `∀` is reported with a witness.
pub fn quotient(q: &UmtlAlgebra, f: ElemSet) -> Result<QuotientResult, FilterError> {
    let a = q.algebra();
    let (alg, map, classes) = quotient_algebra(a, f)?;
    if let Some((x, y)) = pairs(a.size()).find(|&(x, y)| map[x] == map[y] && map[q.forall(x)] != map[q.forall(y)]) {
        return Err(FilterError::IllDefinedQuantifier { x, y });
    }
    let table: Vec<Elem> = classes
        .iter()
        .map(|c| map[q.forall(c.iter().next().unwrap())])
        .collect();
    let quotient = UmtlAlgebra::new(std::sync::Arc::new(alg), &table, q.parse())?;
    Ok(QuotientResult {
        quotient,
        class_map: map,
        classes,
    })
}

/// Intersection of all maximal U-filters.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Radical {
    pub members: ElemSet,
    /// Set when there is no maximal U-filter; `members` is then the carrier.
    pub empty_family: bool,
}

pub fn radical(q: &UmtlAlgebra) -> Radical {
    let maximal = maximal_ufilters(q);
    let carrier = q.algebra().carrier();
    Radical {
        members: maximal.iter().fold(carrier, |acc, &f| acc.intersection(f)),
        empty_family: maximal.is_empty(),
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::chains::{boolean2, chain_algebra, l6, l6_names, ChainKind};
    use crate::quantifier::{delta_table, identity_table, U2Parse};

    fn set(xs: &[Elem]) -> ElemSet {
        xs.iter().copied().collect()
    }

    fn pair(a: FiniteMTLAlgebra, t: &[Elem]) -> UmtlAlgebra {
        UmtlAlgebra::new(Arc::new(a), t, U2Parse::Standard).unwrap()
    }

    fn l6_b4() -> UmtlAlgebra {
        let [z, _, b, _, d, one] = l6_names();
        pair(l6(), &[z, z, b, b, d, one])
    }

    #[test]
    fn boolean_filters() {
        let a = boolean2();
        assert_eq!(enumerate_filters(&a), vec![set(&[1]), set(&[0, 1])]);
        assert_eq!(minimal_primes(&a).by_inclusion, vec![set(&[1])]);
        assert!(minimal_primes(&a).agree);
    }

    #[test]
    fn six_element_generated_filters() {
        let a = l6();
        let [_, _, b, c, d, one] = l6_names();
        assert_eq!(generated_filter(&a, set(&[one])).unwrap(), set(&[one]));
        assert_eq!(generated_filter(&a, set(&[d])).unwrap(), set(&[d, one]));
        assert_eq!(generated_filter(&a, set(&[c])).unwrap(), set(&[b, c, one]));
        assert_eq!(generated_filter(&a, ElemSet::EMPTY), Err(FilterError::EmptyGenerators));
        assert_eq!(a_perp(&a, d), set(&[b, c, one]));
        assert_eq!(a_perp(&a, one), a.carrier());
    }

    #[test]
    fn six_element_ufilters_under_both_quantifiers() {
        let [_, _, b, c, d, one] = l6_names();
        let q = l6_b4();
        let found = enumerate_ufilters(&q);
        assert_eq!(found, ufilters_by_subset_scan(&q).unwrap());
        let mut listed = vec![set(&[one]), set(&[d, one]), set(&[b, c, one]), q.algebra().carrier()];
        listed.sort();
        assert_eq!(found, listed);
        assert_eq!(generated_ufilter(&q, set(&[c])).unwrap(), set(&[b, c, one]));

        let a = l6();
        let t = delta_table(&a);
        let delta = pair(a, &t);
        assert_eq!(enumerate_ufilters(&delta), vec![set(&[one]), delta.algebra().carrier()]);
        assert_eq!(maximal_ufilters(&delta), vec![set(&[one])]);
        assert_eq!(radical(&delta).members, set(&[one]));
    }

    #[test]
    fn maximality_by_both_routes() {
        let [_, _, b, c, d, one] = l6_names();
        let q = l6_b4();
        for f in [set(&[d, one]), set(&[b, c, one])] {
            let m = check_maximal_ufilter(&q, f).unwrap();
            assert!(m.by_definition && m.agree);
        }
        let m = check_maximal_ufilter(&q, set(&[one])).unwrap();
        assert!(!m.by_definition && m.agree);
        assert_eq!(radical(&q).members, set(&[one]));
        assert!(matches!(
            check_maximal_ufilter(&q, q.algebra().carrier()),
            Err(FilterError::Improper)
        ));
    }

    #[test]
    fn quotients() {
        let [_, _, b, c, d, one] = l6_names();
        let q = l6_b4();
        let id = quotient(&q, set(&[one])).unwrap();
        assert_eq!(id.class_map, vec![0, 1, 2, 3, 4, 5]);
        // Collapsing the two-element factor leaves the three-element chain.
        let by_d = quotient(&q, set(&[d, one])).unwrap();
        assert_eq!(by_d.quotient.algebra().size(), 3);
        assert!(by_d.quotient.algebra().is_linear());
        let by_b = quotient(&q, set(&[b, c, one])).unwrap();
        assert_eq!(by_b.quotient.algebra().size(), 2);
        assert!(matches!(
            quotient(&q, q.algebra().carrier()),
            Err(FilterError::Improper)
        ));

        let a = l6();
        let t = delta_table(&a);
        let delta = pair(a, &t);
        assert_eq!(
            quotient(&delta, set(&[d, one])).unwrap_err(),
            FilterError::IllDefinedQuantifier { x: d, y: one }
        );
        assert!(matches!(
            quotient(&delta, set(&[c, one])),
            Err(FilterError::NotFilter(_))
        ));
    }

    #[test]
    fn generated_filters_agree_with_product_formula() {
        for a in [
            l6(),
            chain_algebra(ChainKind::NilpotentMinimum, 5).unwrap(),
            chain_algebra(ChainKind::Goedel, 4).unwrap(),
        ] {
            let t = identity_table(&a);
            let q = pair(a, &t);
            for bits in 1..1u64 << q.algebra().size() {
                let x = ElemSet::from_bits(bits);
                assert_eq!(
                    generated_filter(q.algebra(), x),
                    generated_filter_by_products(q.algebra(), x)
                );
                assert_eq!(generated_ufilter(&q, x), generated_ufilter_by_products(&q, x));
            }
        }
    }
}
