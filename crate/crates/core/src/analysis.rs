//! Representability, strongness, simplicity and semisimplicity of a
//! quantified algebra, and subdirect decompositions.
//!
//! Each property with several textbook characterizations is decided by every
//! one of them independently; the reports carry the individual verdicts and
//! whether they agree.

use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::algebra::{pairs, Elem};
use crate::elemset::ElemSet;
use crate::filters::{
    enumerate_filters, enumerate_ufilters, is_ufilter, maximal_ufilters, minimal_primes, quotient, radical, FilterError,
};
use crate::quantifier::UmtlAlgebra;

/// Outcome of one scan, with the least failing tuple.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<Elem>>,
}

impl Verdict {
    fn from_witness(witness: Option<Vec<Elem>>) -> Self {
        Verdict {
            holds: witness.is_none(),
            witness,
        }
    }
}

fn first_pair(q: &UmtlAlgebra, bad: impl Fn(Elem, Elem) -> bool) -> Verdict {
    Verdict::from_witness(
        pairs(q.algebra().size())
            .find(|&(x, y)| bad(x, y))
            .map(|(x, y)| vec![x, y]),
    )
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Representability {
    /// `∀(x→y) ∨ (y→x) = 1`; the headline verdict.
    pub implication: Verdict,
    /// `x∨y = 1` implies `x∨∀y = 1`.
    pub disjunction: Verdict,
    /// Every minimal prime filter is a U-filter; the witness lists the
    /// members of the first offending prime.
    pub minimal_primes: Verdict,
    pub representable: bool,
    pub agree: bool,
}

/// `x∨y = 1` implies `x∨∀y = 1` for all `x, y`.
pub fn disjunction_condition(q: &UmtlAlgebra) -> Verdict {
    let a = q.algebra();
    let top = a.top();
    first_pair(q, |x, y| a.join(x, y) == top && a.join(x, q.forall(y)) != top)
}

pub fn is_representable(q: &UmtlAlgebra) -> Representability {
    let a = q.algebra();
    let top = a.top();
    let implication = first_pair(q, |x, y| a.join(q.forall(a.imp(x, y)), a.imp(y, x)) != top);
    let disjunction = disjunction_condition(q);
    let offending = minimal_primes(a).by_inclusion.into_iter().find(|&p| !is_ufilter(q, p));
    let minimal_primes = Verdict::from_witness(offending.map(|p| p.to_vec()));
    let agree = implication.holds == disjunction.holds && disjunction.holds == minimal_primes.holds;
    Representability {
        representable: implication.holds,
        implication,
        disjunction,
        minimal_primes,
        agree,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Strongness {
    /// `∀(x∨y) = ∀x∨∀y`
    pub strong: Verdict,
    pub representable: bool,
    pub agree: bool,
}

pub fn is_strong(q: &UmtlAlgebra) -> Strongness {
    let a = q.algebra();
    let strong = first_pair(q, |x, y| q.forall(a.join(x, y)) != a.join(q.forall(x), q.forall(y)));
    let representable = is_representable(q).representable;
    Strongness {
        agree: strong.holds == representable,
        strong,
        representable,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Simplicity {
    /// The U-filters are exactly `{1}` and the carrier; the definition.
    pub two_ufilters: Verdict,
    /// The image `∀L`, as an algebra, has only the filters `{1}` and `∀L`.
    pub image_simple: Verdict,
    /// `L_∀ = {0, 1}`
    pub trivial_fixpoints: Verdict,
    /// `{1}` is the only proper U-filter.
    pub unique_proper: Verdict,
    /// `x ≠ 1` implies `ord(∀x) < ∞`.
    pub finite_orders: Verdict,
    pub simple: bool,
    pub agree: bool,
}

pub fn is_simple(q: &UmtlAlgebra) -> Simplicity {
    let a = q.algebra();
    let top = a.top();
    let carrier = a.carrier();
    let one = ElemSet::singleton(top);
    let ufilters = enumerate_ufilters(q);

    // Witnesses list the members of an extra U-filter, an extra filter of the
    // image, an extra fixpoint, or an element whose quantified order is infinite.
    let extra = ufilters.iter().find(|&&f| f != one && f != carrier);
    let two_ufilters = Verdict::from_witness(extra.map(|f| f.to_vec()));
    let unique_proper = Verdict::from_witness(ufilters.iter().find(|&&f| f != carrier && f != one).map(|f| f.to_vec()));
    let image = q.image();
    let image_simple = match a.restrict(image) {
        Ok((sub, members)) => {
            let sub_top = ElemSet::singleton(sub.top());
            let extra = enumerate_filters(&sub)
                .into_iter()
                .find(|&f| f != sub_top && f != sub.carrier());
            Verdict::from_witness(extra.map(|f| f.iter().map(|i| members[i]).collect()))
        }
        Err(_) => Verdict::from_witness(Some(image.to_vec())),
    };
    let fixpoints = q.quantifier().fixpoints();
    let trivial_fixpoints = Verdict::from_witness(fixpoints.iter().find(|&x| x != 0 && x != top).map(|x| vec![x]));
    let finite_orders = Verdict::from_witness(
        a.elements()
            .find(|&x| x != top && a.ord(q.forall(x)).is_none())
            .map(|x| vec![x]),
    );
    let verdicts = [
        two_ufilters.holds,
        image_simple.holds,
        trivial_fixpoints.holds,
        unique_proper.holds,
        finite_orders.holds,
    ];
    Simplicity {
        simple: two_ufilters.holds,
        agree: verdicts.iter().all(|&v| v == verdicts[0]),
        two_ufilters,
        image_simple,
        trivial_fixpoints,
        unique_proper,
        finite_orders,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Semisimplicity {
    pub semisimple: bool,
    pub radical: ElemSet,
    pub maximal_ufilters: Vec<ElemSet>,
}

/// Semisimple exactly when the radical is `{1}`.
pub fn is_semisimple(q: &UmtlAlgebra) -> Semisimplicity {
    let r = radical(q);
    Semisimplicity {
        semisimple: r.members == ElemSet::singleton(q.algebra().top()),
        radical: r.members,
        maximal_ufilters: maximal_ufilters(q),
    }
}

/// The first failure of a map to be a U-homomorphism.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomomorphismFailure {
    pub operation: &'static str,
    pub arguments: Vec<Elem>,
}

/// Checks that `f` preserves `0, 1, ⊙, →, ∧, ∨` and commutes with `∀`.
pub fn is_u_homomorphism(f: &[Elem], q1: &UmtlAlgebra, q2: &UmtlAlgebra) -> Result<(), HomomorphismFailure> {
    let (a, b) = (q1.algebra(), q2.algebra());
    let fail = |operation, arguments| Err(HomomorphismFailure { operation, arguments });
    if f.len() != a.size() || f.iter().any(|&y| y >= b.size()) {
        return fail("domain", vec![]);
    }
    if f[0] != 0 {
        return fail("bottom", vec![]);
    }
    if f[a.top()] != b.top() {
        return fail("top", vec![]);
    }
    for (x, y) in pairs(a.size()) {
        let checks: [(&'static str, Elem, Elem); 4] = [
            ("odot", f[a.odot(x, y)], b.odot(f[x], f[y])),
            ("arrow", f[a.imp(x, y)], b.imp(f[x], f[y])),
            ("meet", f[a.meet(x, y)], b.meet(f[x], f[y])),
            ("join", f[a.join(x, y)], b.join(f[x], f[y])),
        ];
        if let Some((op, _, _)) = checks.iter().find(|(_, l, r)| l != r) {
            return fail(op, vec![x, y]);
        }
    }
    if let Some(x) = a.elements().find(|&x| f[q1.forall(x)] != q2.forall(f[x])) {
        return fail("forall", vec![x]);
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DecompositionMode {
    /// Quotients by the minimal prime filters; factors are chains.
    MinPrimes,
    /// Quotients by the maximal U-filters; factors are simple.
    MaxUFilters,
}

impl std::str::FromStr for DecompositionMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "min-primes" => Ok(DecompositionMode::MinPrimes),
            "max-ufilters" => Ok(DecompositionMode::MaxUFilters),
            other => Err(format!(
                "unknown decomposition mode `{other}` (expected min-primes or max-ufilters)"
            )),
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DecompositionError {
    #[error("minimal prime filter {0:?} is not a U-filter")]
    PrimeNotUFilter(ElemSet),
    #[error("radical element {0} differs from the top, so the embedding cannot be injective")]
    NontrivialRadical(Elem),
    #[error("quotient failed: {0}")]
    Quotient(#[from] FilterError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubdirectEmbedding {
    pub mode: DecompositionMode,
    pub filters: Vec<ElemSet>,
    pub factors: Vec<UmtlAlgebra>,
    /// `embedding[x][i]` is the class of `x` in factor `i`.
    pub embedding: Vec<Vec<Elem>>,
    pub injective: bool,
    pub surjective: Vec<bool>,
    pub homomorphic: Vec<bool>,
    pub factors_linear: Vec<bool>,
    pub factors_simple: Vec<bool>,
}

impl SubdirectEmbedding {
    /// Injective, every projection onto, every coordinate a U-homomorphism.
    pub fn is_subdirect(&self) -> bool {
        self.injective && self.surjective.iter().all(|&s| s) && self.homomorphic.iter().all(|&h| h)
    }
}

/// Embeds `q` into the product of its quotients by the selected filters.
pub fn subdirect_decompose(q: &UmtlAlgebra, mode: DecompositionMode) -> Result<SubdirectEmbedding, DecompositionError> {
    let a = q.algebra();
    let filters = match mode {
        DecompositionMode::MinPrimes => {
            let primes = minimal_primes(a).by_inclusion;
            if let Some(&p) = primes.iter().find(|&&p| !is_ufilter(q, p)) {
                return Err(DecompositionError::PrimeNotUFilter(p));
            }
            primes
        }
        DecompositionMode::MaxUFilters => {
            let r = radical(q);
            if let Some(x) = r.members.iter().find(|&x| x != a.top()) {
                return Err(DecompositionError::NontrivialRadical(x));
            }
            maximal_ufilters(q)
        }
    };
    let quotients = filters.iter().map(|&f| quotient(q, f)).collect::<Result<Vec<_>, _>>()?;
    let embedding: Vec<Vec<Elem>> = a
        .elements()
        .map(|x| quotients.iter().map(|r| r.class_map[x]).collect())
        .collect();
    let injective = pairs(a.size()).all(|(x, y)| x == y || embedding[x] != embedding[y]);
    let surjective = quotients
        .iter()
        .map(|r| (0..r.quotient.algebra().size()).all(|c| r.class_map.contains(&c)))
        .collect();
    let homomorphic = quotients
        .iter()
        .map(|r| is_u_homomorphism(&r.class_map, q, &r.quotient).is_ok())
        .collect();
    let factors_linear = quotients.iter().map(|r| r.quotient.algebra().is_linear()).collect();
    let factors_simple = quotients.iter().map(|r| is_simple(&r.quotient).simple).collect();
    Ok(SubdirectEmbedding {
        mode,
        filters,
        factors: quotients.into_iter().map(|r| r.quotient).collect(),
        embedding,
        injective,
        surjective,
        homomorphic,
        factors_linear,
        factors_simple,
    })
}

/// Every verdict of this module for one algebra.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AnalysisReport {
    pub representability: Representability,
    pub strongness: Strongness,
    pub simplicity: Simplicity,
    pub semisimplicity: Semisimplicity,
}

pub fn analyze(q: &UmtlAlgebra) -> AnalysisReport {
    AnalysisReport {
        representability: is_representable(q),
        strongness: is_strong(q),
        simplicity: is_simple(q),
        semisimplicity: is_semisimple(q),
    }
}

/// Shares `q`'s algebra with a new quantifier table, for callers holding a
/// raw table.
pub fn with_table(q: &UmtlAlgebra, table: &[Elem]) -> Result<UmtlAlgebra, crate::quantifier::QuantifierError> {
    UmtlAlgebra::new(Arc::clone(q.algebra_arc()), table, q.parse())
}
