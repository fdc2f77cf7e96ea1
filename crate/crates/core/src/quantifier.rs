//! Universal quantifiers on finite MTL-algebras.
//!
//! A universal quantifier is a unary map `∀` with
//!
//! * `∀x <= x` (deflationary),
//! * `∀((x→∀y)→∀y) = (∀x→∀y)→∀y` (fixed implication),
//! * `∀(∀x→y) = ∀x→∀y` (left absorption).
//!
//! The fixed-implication identity is written without inner parentheses in
//! its usual display; [`U2Parse::Standard`] is the left-grouped reading used
//! throughout, and [`U2Parse::Alt`] groups to the right for comparison runs.
//!
//! Every quantifier is an interior operator (below the identity, idempotent,
//! monotone), so it is determined by its fixpoint set `S` through
//! `∀x = max{s ∈ S : s <= x}`. [`enumerate_quantifiers`] walks those sets
//! rather than all `n^n` maps; [`brute_force_quantifiers`] is the raw oracle.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::algebra::{pairs, Elem, FiniteMTLAlgebra};
use crate::elemset::ElemSet;

/// Grouping of the fixed-implication identity.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum U2Parse {
    /// `∀((x→∀y)→∀y) = (∀x→∀y)→∀y`
    #[default]
    Standard,
    /// `∀(x→(∀y→∀y)) = (∀x→∀y)→∀y`
    Alt,
}

impl FromStr for U2Parse {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "standard" => Ok(U2Parse::Standard),
            "alt" => Ok(U2Parse::Alt),
            other => Err(format!("unknown u2 parse `{other}` (expected standard or alt)")),
        }
    }
}

impl fmt::Display for U2Parse {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            U2Parse::Standard => "standard",
            U2Parse::Alt => "alt",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum QuantifierAxiom {
    Deflationary,
    FixedImplication,
    LeftAbsorption,
}

impl QuantifierAxiom {
    pub fn as_str(self) -> &'static str {
        match self {
            QuantifierAxiom::Deflationary => "deflationary",
            QuantifierAxiom::FixedImplication => "fixed-implication",
            QuantifierAxiom::LeftAbsorption => "left-absorption",
        }
    }
}

impl fmt::Display for QuantifierAxiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuantifierViolation {
    pub axiom: QuantifierAxiom,
    pub witness: Vec<Elem>,
}

impl fmt::Display for QuantifierViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w: Vec<String> = self.witness.iter().map(|x| x.to_string()).collect();
        write!(f, "{} fails at ({})", self.axiom, w.join(", "))
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum QuantifierError {
    #[error("quantifier table has {got} entries, expected {expected}")]
    WrongLength { expected: usize, got: usize },
    #[error("quantifier entry {index} = {value} is out of range")]
    OutOfRange { index: usize, value: usize },
    #[error("{} quantifier axiom violation(s): {}", .0.len(), .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Axioms(Vec<QuantifierViolation>),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RelativizationError {
    #[error("the fixpoint set must contain the bottom and top elements")]
    MissingBound,
    #[error("no largest fixpoint lies below element {0}")]
    NoMaximum(Elem),
}

/// A validated quantifier table and its fixpoint set.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct UniversalQuantifier {
    table: Vec<Elem>,
    fixpoints: ElemSet,
}

impl UniversalQuantifier {
    fn from_table(table: Vec<Elem>) -> Self {
        let fixpoints = table
            .iter()
            .enumerate()
            .filter(|(x, &v)| *x == v)
            .map(|(x, _)| x)
            .collect();
        UniversalQuantifier { table, fixpoints }
    }

    pub fn table(&self) -> &[Elem] {
        &self.table
    }

    pub fn apply(&self, x: Elem) -> Elem {
        self.table[x]
    }

    /// `{x : ∀x = x}`
    pub fn fixpoints(&self) -> ElemSet {
        self.fixpoints
    }
}

/// Scans the three quantifier axioms and returns every failed one with its
/// least witness. `table` must already be in range.
pub fn scan_quantifier_axioms(alg: &FiniteMTLAlgebra, table: &[Elem], parse: U2Parse) -> Vec<QuantifierViolation> {
    let q = |x: Elem| table[x];
    let n = alg.size();
    let mut out = Vec::new();
    if let Some(x) = alg.elements().find(|&x| !alg.le(q(x), x)) {
        out.push(QuantifierViolation {
            axiom: QuantifierAxiom::Deflationary,
            witness: vec![x],
        });
    }
    let fixed_implication = pairs(n).find(|&(x, y)| {
        let qy = q(y);
        let lhs = match parse {
            U2Parse::Standard => q(alg.imp(alg.imp(x, qy), qy)),
            U2Parse::Alt => q(alg.imp(x, alg.imp(qy, qy))),
        };
        lhs != alg.imp(alg.imp(q(x), qy), qy)
    });
    if let Some((x, y)) = fixed_implication {
        out.push(QuantifierViolation {
            axiom: QuantifierAxiom::FixedImplication,
            witness: vec![x, y],
        });
    }
    if let Some((x, y)) = pairs(n).find(|&(x, y)| q(alg.imp(q(x), y)) != alg.imp(q(x), q(y))) {
        out.push(QuantifierViolation {
            axiom: QuantifierAxiom::LeftAbsorption,
            witness: vec![x, y],
        });
    }
    out
}

fn check_shape(alg: &FiniteMTLAlgebra, table: &[Elem]) -> Result<(), QuantifierError> {
    if table.len() != alg.size() {
        return Err(QuantifierError::WrongLength {
            expected: alg.size(),
            got: table.len(),
        });
    }
    if let Some((index, &value)) = table.iter().enumerate().find(|(_, &v)| v >= alg.size()) {
        return Err(QuantifierError::OutOfRange { index, value });
    }
    Ok(())
}

pub fn validate_quantifier(
    alg: &FiniteMTLAlgebra,
    table: &[Elem],
    parse: U2Parse,
) -> Result<UniversalQuantifier, QuantifierError> {
    check_shape(alg, table)?;
    let violations = scan_quantifier_axioms(alg, table, parse);
    if violations.is_empty() {
        Ok(UniversalQuantifier::from_table(table.to_vec()))
    } else {
        Err(QuantifierError::Axioms(violations))
    }
}

/// Candidate table sending the top to itself and everything else to the
/// bottom. Not a quantifier on every algebra.
pub fn delta_table(alg: &FiniteMTLAlgebra) -> Vec<Elem> {
    alg.elements().map(|x| if x == alg.top() { x } else { 0 }).collect()
}

pub fn identity_table(alg: &FiniteMTLAlgebra) -> Vec<Elem> {
    alg.elements().collect()
}

/// Candidate table `x ↦ max{s ∈ set : s <= x}`.
pub fn relativization_table(alg: &FiniteMTLAlgebra, set: ElemSet) -> Result<Vec<Elem>, RelativizationError> {
    if !set.contains(0) || !set.contains(alg.top()) {
        return Err(RelativizationError::MissingBound);
    }
    alg.elements()
        .map(|x| largest_below(alg, set, x).ok_or(RelativizationError::NoMaximum(x)))
        .collect()
}

fn largest_below(alg: &FiniteMTLAlgebra, set: ElemSet, x: Elem) -> Option<Elem> {
    let below: Vec<Elem> = set.iter().filter(|&s| alg.le(s, x)).collect();
    below.iter().copied().find(|&m| below.iter().all(|&s| alg.le(s, m)))
}

/// All quantifiers on `alg`, sorted by table.
///
/// Fixpoint sets containing bottom and top are split across the rayon pool;
/// the result is sorted after merging so it does not depend on scheduling.
pub fn enumerate_quantifiers(alg: &FiniteMTLAlgebra, parse: U2Parse) -> Vec<UniversalQuantifier> {
    let inner: Vec<Elem> = alg.elements().filter(|&x| x != 0 && x != alg.top()).collect();
    let base = ElemSet::singleton(0).with(alg.top());
    let mut found: Vec<UniversalQuantifier> = (0..1u64 << inner.len())
        .into_par_iter()
        .filter_map(|mask| {
            let set = inner
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .fold(base, |s, (_, &x)| s.with(x));
            let table = relativization_table(alg, set).ok()?;
            validate_quantifier(alg, &table, parse).ok()
        })
        .collect();
    found.sort();
    found
}

/// Largest carrier accepted by [`brute_force_quantifiers`].
pub const BRUTE_FORCE_MAX: usize = 7;

/// Filters all `n^n` unary maps by the axioms. `None` above
/// [`BRUTE_FORCE_MAX`] elements.
pub fn brute_force_quantifiers(alg: &FiniteMTLAlgebra, parse: U2Parse) -> Option<Vec<UniversalQuantifier>> {
    let n = alg.size();
    if n > BRUTE_FORCE_MAX {
        return None;
    }
    let total = (n as u64).pow(n as u32);
    let mut found: Vec<UniversalQuantifier> = (0..total)
        .into_par_iter()
        .filter_map(|code| {
            let mut c = code;
            let mut table = vec![0; n];
            for slot in table.iter_mut().rev() {
                *slot = (c % n as u64) as usize;
                c /= n as u64;
            }
            scan_quantifier_axioms(alg, &table, parse)
                .is_empty()
                .then(|| UniversalQuantifier::from_table(table))
        })
        .collect();
    found.sort();
    Some(found)
}

/// A base algebra paired with a quantifier table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UmtlAlgebra {
    algebra: Arc<FiniteMTLAlgebra>,
    quantifier: UniversalQuantifier,
    parse: U2Parse,
    validated: bool,
}

impl UmtlAlgebra {
    pub fn new(algebra: Arc<FiniteMTLAlgebra>, table: &[Elem], parse: U2Parse) -> Result<Self, QuantifierError> {
        let quantifier = validate_quantifier(&algebra, table, parse)?;
        Ok(UmtlAlgebra {
            algebra,
            quantifier,
            parse,
            validated: true,
        })
    }

    pub fn from_quantifier(algebra: Arc<FiniteMTLAlgebra>, quantifier: UniversalQuantifier, parse: U2Parse) -> Self {
        UmtlAlgebra {
            algebra,
            quantifier,
            parse,
            validated: true,
        }
    }

    /// Pairs a table with its algebra without checking the axioms. Only the
    /// shape is checked; used to audit what breaks when an axiom fails.
    pub fn forced(algebra: Arc<FiniteMTLAlgebra>, table: &[Elem]) -> Result<Self, QuantifierError> {
        check_shape(&algebra, table)?;
        Ok(UmtlAlgebra {
            algebra,
            quantifier: UniversalQuantifier::from_table(table.to_vec()),
            parse: U2Parse::Standard,
            validated: false,
        })
    }

    pub fn algebra(&self) -> &FiniteMTLAlgebra {
        &self.algebra
    }

    pub fn algebra_arc(&self) -> &Arc<FiniteMTLAlgebra> {
        &self.algebra
    }

    pub fn quantifier(&self) -> &UniversalQuantifier {
        &self.quantifier
    }

    pub fn parse(&self) -> U2Parse {
        self.parse
    }

    pub fn is_validated(&self) -> bool {
        self.validated
    }

    pub fn forall(&self, x: Elem) -> Elem {
        self.quantifier.apply(x)
    }

    /// The image `∀L`.
    pub fn image(&self) -> ElemSet {
        self.quantifier.table().iter().copied().collect()
    }

    /// Renders the table as element names.
    pub fn table_names(&self) -> Vec<String> {
        self.quantifier
            .table()
            .iter()
            .map(|&x| self.algebra.name(x).to_string())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chains::{boolean2, chain_algebra, l6, l6_names, ChainKind};

    fn b4_table() -> Vec<Elem> {
        let [zero, _, b, _, d, one] = l6_names();
        vec![zero, zero, b, b, d, one]
    }

    #[test]
    fn delta_on_six_element_is_valid() {
        let alg = l6();
        let q = validate_quantifier(&alg, &delta_table(&alg), U2Parse::Standard).unwrap();
        assert_eq!(q.fixpoints().to_vec(), vec![0, 5]);
    }

    #[test]
    fn identity_is_always_valid() {
        for alg in [l6(), boolean2(), chain_algebra(ChainKind::Goedel, 4).unwrap()] {
            assert!(validate_quantifier(&alg, &identity_table(&alg), U2Parse::Standard).is_ok());
        }
    }

    #[test]
    fn boolean_fixpoint_quantifier_on_six_element_is_valid() {
        // 1↦1, b,c↦b, d↦d, 0,a↦0: the scan confirms it is a quantifier.
        let alg = l6();
        let q = validate_quantifier(&alg, &b4_table(), U2Parse::Standard).unwrap();
        assert_eq!(q.fixpoints().to_vec(), vec![0, 2, 4, 5]);
    }

    #[test]
    fn delta_fails_fixed_implication_on_goedel_three() {
        // x = 1/2, y = 0: ∀((x→0)→0) = ∀1 = 1 but (∀x→0)→0 = 0.
        let g = chain_algebra(ChainKind::Goedel, 3).unwrap();
        let err = validate_quantifier(&g, &delta_table(&g), U2Parse::Standard).unwrap_err();
        assert_eq!(
            err,
            QuantifierError::Axioms(vec![QuantifierViolation {
                axiom: QuantifierAxiom::FixedImplication,
                witness: vec![1, 0],
            }])
        );
    }

    #[test]
    fn alt_parse_admits_no_quantifier() {
        // The right-grouped reading forces (∀x→∀y)→∀y = 1, which fails at x = 1, y = 0.
        for alg in [boolean2(), l6()] {
            assert!(enumerate_quantifiers(&alg, U2Parse::Alt).is_empty());
            assert!(brute_force_quantifiers(&alg, U2Parse::Alt).unwrap().is_empty());
        }
    }

    #[test]
    fn shape_errors() {
        let alg = boolean2();
        assert_eq!(
            validate_quantifier(&alg, &[0], U2Parse::Standard),
            Err(QuantifierError::WrongLength { expected: 2, got: 1 })
        );
        assert_eq!(
            validate_quantifier(&alg, &[0, 9], U2Parse::Standard),
            Err(QuantifierError::OutOfRange { index: 1, value: 9 })
        );
    }

    #[test]
    fn relativization_tables() {
        let nm5 = chain_algebra(ChainKind::NilpotentMinimum, 5).unwrap();
        assert_eq!(relativization_table(&nm5, nm5.carrier()).unwrap(), identity_table(&nm5));
        let thirds: ElemSet = [0, 2, 4].into_iter().collect();
        assert_eq!(relativization_table(&nm5, thirds).unwrap(), vec![0, 0, 2, 2, 4]);
        let bounds: ElemSet = [0, 4].into_iter().collect();
        assert_eq!(relativization_table(&nm5, bounds).unwrap(), delta_table(&nm5));
        assert_eq!(
            relativization_table(&nm5, ElemSet::singleton(4)),
            Err(RelativizationError::MissingBound)
        );
        // On the six-element algebra {0, a, b, 1}: below c lie both a and b.
        let alg = l6();
        let set: ElemSet = [0, 1, 2, 5].into_iter().collect();
        assert_eq!(relativization_table(&alg, set), Err(RelativizationError::NoMaximum(3)));
    }

    #[test]
    fn enumeration_on_small_algebras() {
        let b = boolean2();
        let qs = enumerate_quantifiers(&b, U2Parse::Standard);
        assert_eq!(qs.len(), 1);
        assert_eq!(qs[0].table(), &[0, 1]);

        // Brute force over all 27 maps of the Gödel 3-chain leaves only the
        // identity: the delta map fails the fixed-implication identity.
        let g3 = chain_algebra(ChainKind::Goedel, 3).unwrap();
        let tables: Vec<Vec<Elem>> = enumerate_quantifiers(&g3, U2Parse::Standard)
            .into_iter()
            .map(|q| q.table().to_vec())
            .collect();
        assert_eq!(tables, vec![vec![0, 1, 2]]);
        assert_eq!(brute_force_quantifiers(&g3, U2Parse::Standard).unwrap().len(), 1);
    }

    #[test]
    fn six_element_enumeration_contains_delta_and_boolean_fixpoint_table() {
        let alg = l6();
        let tables: Vec<Vec<Elem>> = enumerate_quantifiers(&alg, U2Parse::Standard)
            .into_iter()
            .map(|q| q.table().to_vec())
            .collect();
        assert!(tables.contains(&delta_table(&alg)));
        assert!(tables.contains(&b4_table()));
        assert!(tables.contains(&identity_table(&alg)));
        let brute: Vec<Vec<Elem>> = brute_force_quantifiers(&alg, U2Parse::Standard)
            .unwrap()
            .into_iter()
            .map(|q| q.table().to_vec())
            .collect();
        assert_eq!(tables, brute);
    }
}
