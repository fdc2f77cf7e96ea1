//! Finite MTL-algebras given by operation tables.
//!
//! An algebra is supplied as the monoid table `odot` and the residuum table
//! `arrow` over the carrier `{0, .., n-1}`. Element `0` is the bottom. The
//! order is never supplied: `x <= y` holds exactly when `arrow[x][y]` is the
//! top, and meet/join tables are derived from that order during validation.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::elemset::{ElemSet, MAX_ELEMENTS};

/// Index of an element in the carrier of an algebra.
pub type Elem = usize;

/// The axiom groups checked by [`FiniteMTLAlgebra::validate`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Axiom {
    OrderReflexive,
    OrderAntisymmetric,
    OrderTransitive,
    BottomLeast,
    TopGreatest,
    LatticeJoin,
    LatticeMeet,
    OdotCommutative,
    OdotAssociative,
    OdotUnit,
    Residuation,
    Prelinearity,
}

impl Axiom {
    pub fn as_str(self) -> &'static str {
        match self {
            Axiom::OrderReflexive => "order-reflexive",
            Axiom::OrderAntisymmetric => "order-antisymmetric",
            Axiom::OrderTransitive => "order-transitive",
            Axiom::BottomLeast => "bottom-least",
            Axiom::TopGreatest => "top-greatest",
            Axiom::LatticeJoin => "lattice-join",
            Axiom::LatticeMeet => "lattice-meet",
            Axiom::OdotCommutative => "odot-commutative",
            Axiom::OdotAssociative => "odot-associative",
            Axiom::OdotUnit => "odot-unit",
            Axiom::Residuation => "residuation",
            Axiom::Prelinearity => "prelinearity",
        }
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A failed axiom together with its least lexicographic witness tuple.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub axiom: Axiom,
    pub witness: Vec<Elem>,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w: Vec<String> = self.witness.iter().map(|x| x.to_string()).collect();
        write!(f, "{} fails at ({})", self.axiom, w.join(", "))
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ValidationError {
    #[error("an algebra needs at least two elements, got {0}")]
    TooSmall(usize),
    #[error("carrier of {0} elements exceeds the supported maximum of {MAX_ELEMENTS}")]
    TooLarge(usize),
    #[error("{table} table is not {size}x{size}: {detail}")]
    NotSquare {
        table: &'static str,
        size: usize,
        detail: String,
    },
    #[error("{table}[{row}][{col}] = {value} is out of range for {size} elements")]
    OutOfRange {
        table: &'static str,
        row: usize,
        col: usize,
        value: usize,
        size: usize,
    },
    #[error("top index {0} is out of range or coincides with the bottom element 0")]
    BadTop(usize),
    #[error("expected {expected} element names, got {got}")]
    NameCount { expected: usize, got: usize },
    #[error("duplicate element name `{0}`")]
    DuplicateName(String),
    #[error("{} axiom violation(s): {}", .0.len(), join_violations(.0))]
    Axioms(Vec<Violation>),
}

fn join_violations(v: &[Violation]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
}

/// Membership of an algebra in the standard subvarieties.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SubvarietyProfile {
    /// `¬¬x = x`
    pub imtl: bool,
    /// involutive and `¬(x⊙y) ∨ ((x∧y) → x⊙y) = 1`
    pub nm: bool,
    /// `(x→y)→y = (y→x)→x`
    pub mv: bool,
    /// `x ∨ ¬x = 1`
    pub boolean: bool,
    /// the order is total
    pub linear: bool,
}

/// A validated finite MTL-algebra. Immutable once constructed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteMTLAlgebra {
    size: usize,
    names: Vec<String>,
    custom_names: bool,
    odot: Vec<Elem>,
    arrow: Vec<Elem>,
    top: Elem,
    le: Vec<bool>,
    meet: Vec<Elem>,
    join: Vec<Elem>,
}

fn check_table(table: &'static str, rows: &[Vec<Elem>], n: usize) -> Result<Vec<Elem>, ValidationError> {
    if rows.len() != n {
        return Err(ValidationError::NotSquare {
            table,
            size: n,
            detail: format!("{} rows", rows.len()),
        });
    }
    let mut flat = Vec::with_capacity(n * n);
    for (r, row) in rows.iter().enumerate() {
        if row.len() != n {
            return Err(ValidationError::NotSquare {
                table,
                size: n,
                detail: format!("row {r} has {} entries", row.len()),
            });
        }
        for (c, &v) in row.iter().enumerate() {
            if v >= n {
                return Err(ValidationError::OutOfRange {
                    table,
                    row: r,
                    col: c,
                    value: v,
                    size: n,
                });
            }
            flat.push(v);
        }
    }
    Ok(flat)
}

fn default_names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("e{i}")).collect()
}

impl FiniteMTLAlgebra {
    /// Validates operation tables and derives order, meet and join.
    ///
    /// Every axiom group is scanned; on failure all failed groups are
    /// returned, each with its least lexicographic witness.
    pub fn validate(size: usize, odot: &[Vec<Elem>], arrow: &[Vec<Elem>], top: Elem) -> Result<Self, ValidationError> {
        let n = size;
        if n < 2 {
            return Err(ValidationError::TooSmall(n));
        }
        if n > MAX_ELEMENTS {
            return Err(ValidationError::TooLarge(n));
        }
        let odot = check_table("odot", odot, n)?;
        let arrow = check_table("arrow", arrow, n)?;
        if top == 0 || top >= n {
            return Err(ValidationError::BadTop(top));
        }

        let at = |t: &Vec<Elem>, x: Elem, y: Elem| t[x * n + y];
        let le: Vec<bool> = arrow.iter().map(|&v| v == top).collect();
        let leq = |x: Elem, y: Elem| le[x * n + y];
        let mut violations = Vec::new();

        // Order axioms.
        if let Some(x) = (0..n).find(|&x| !leq(x, x)) {
            violations.push(Violation {
                axiom: Axiom::OrderReflexive,
                witness: vec![x],
            });
        }
        let antisym = pairs(n).find(|&(x, y)| x != y && leq(x, y) && leq(y, x));
        if let Some((x, y)) = antisym {
            violations.push(Violation {
                axiom: Axiom::OrderAntisymmetric,
                witness: vec![x, y],
            });
        }
        let trans = triples(n).find(|&(x, y, z)| leq(x, y) && leq(y, z) && !leq(x, z));
        if let Some((x, y, z)) = trans {
            violations.push(Violation {
                axiom: Axiom::OrderTransitive,
                witness: vec![x, y, z],
            });
        }
        if let Some(x) = (0..n).find(|&x| !leq(0, x)) {
            violations.push(Violation {
                axiom: Axiom::BottomLeast,
                witness: vec![x],
            });
        }
        if let Some(x) = (0..n).find(|&x| !leq(x, top)) {
            violations.push(Violation {
                axiom: Axiom::TopGreatest,
                witness: vec![x],
            });
        }
        let partial_order = violations.is_empty();

        // Lattice: least upper and greatest lower bounds must exist.
        let mut meet = vec![0; n * n];
        let mut join = vec![0; n * n];
        let mut lattice = partial_order;
        if partial_order {
            let mut bad_join = None;
            let mut bad_meet = None;
            for (x, y) in pairs(n) {
                let upper: Vec<Elem> = (0..n).filter(|&z| leq(x, z) && leq(y, z)).collect();
                match upper.iter().find(|&&z| upper.iter().all(|&u| leq(z, u))) {
                    Some(&z) => join[x * n + y] = z,
                    None => {
                        bad_join.get_or_insert((x, y));
                    }
                }
                let lower: Vec<Elem> = (0..n).filter(|&z| leq(z, x) && leq(z, y)).collect();
                match lower.iter().find(|&&z| lower.iter().all(|&l| leq(l, z))) {
                    Some(&z) => meet[x * n + y] = z,
                    None => {
                        bad_meet.get_or_insert((x, y));
                    }
                }
            }
            if let Some((x, y)) = bad_join {
                violations.push(Violation {
                    axiom: Axiom::LatticeJoin,
                    witness: vec![x, y],
                });
                lattice = false;
            }
            if let Some((x, y)) = bad_meet {
                violations.push(Violation {
                    axiom: Axiom::LatticeMeet,
                    witness: vec![x, y],
                });
                lattice = false;
            }
        }

        // Commutative monoid with unit top.
        if let Some((x, y)) = pairs(n).find(|&(x, y)| at(&odot, x, y) != at(&odot, y, x)) {
            violations.push(Violation {
                axiom: Axiom::OdotCommutative,
                witness: vec![x, y],
            });
        }
        let assoc = triples(n).find(|&(x, y, z)| at(&odot, at(&odot, x, y), z) != at(&odot, x, at(&odot, y, z)));
        if let Some((x, y, z)) = assoc {
            violations.push(Violation {
                axiom: Axiom::OdotAssociative,
                witness: vec![x, y, z],
            });
        }
        if let Some(x) = (0..n).find(|&x| at(&odot, x, top) != x || at(&odot, top, x) != x) {
            violations.push(Violation {
                axiom: Axiom::OdotUnit,
                witness: vec![x],
            });
        }

        // x⊙y <= z iff x <= y→z
        let resid = triples(n).find(|&(x, y, z)| leq(at(&odot, x, y), z) != leq(x, at(&arrow, y, z)));
        if let Some((x, y, z)) = resid {
            violations.push(Violation {
                axiom: Axiom::Residuation,
                witness: vec![x, y, z],
            });
        }

        if lattice {
            let prelin = pairs(n).find(|&(x, y)| join[at(&arrow, x, y) * n + at(&arrow, y, x)] != top);
            if let Some((x, y)) = prelin {
                violations.push(Violation {
                    axiom: Axiom::Prelinearity,
                    witness: vec![x, y],
                });
            }
        }

        if !violations.is_empty() {
            return Err(ValidationError::Axioms(violations));
        }
        Ok(FiniteMTLAlgebra {
            size: n,
            names: default_names(n),
            custom_names: false,
            odot,
            arrow,
            top,
            le,
            meet,
            join,
        })
    }

    /// Attaches display labels. Labels must be distinct.
    pub fn with_names(mut self, names: Vec<String>) -> Result<Self, ValidationError> {
        if names.len() != self.size {
            return Err(ValidationError::NameCount {
                expected: self.size,
                got: names.len(),
            });
        }
        for (i, a) in names.iter().enumerate() {
            if names[..i].contains(a) {
                return Err(ValidationError::DuplicateName(a.clone()));
            }
        }
        self.custom_names = true;
        self.names = names;
        Ok(self)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn top(&self) -> Elem {
        self.top
    }

    pub fn bottom(&self) -> Elem {
        0
    }

    pub fn elements(&self) -> std::ops::Range<Elem> {
        0..self.size
    }

    pub fn carrier(&self) -> ElemSet {
        ElemSet::full(self.size)
    }

    pub fn name(&self, x: Elem) -> &str {
        &self.names[x]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Whether the names were supplied rather than defaulted.
    pub fn has_custom_names(&self) -> bool {
        self.custom_names
    }

    /// Looks an element up by display name, falling back to a decimal index.
    pub fn lookup(&self, token: &str) -> Option<Elem> {
        self.names
            .iter()
            .position(|n| n == token)
            .or_else(|| token.parse::<usize>().ok().filter(|&i| i < self.size))
    }

    pub fn odot(&self, x: Elem, y: Elem) -> Elem {
        self.odot[x * self.size + y]
    }

    pub fn imp(&self, x: Elem, y: Elem) -> Elem {
        self.arrow[x * self.size + y]
    }

    pub fn meet(&self, x: Elem, y: Elem) -> Elem {
        self.meet[x * self.size + y]
    }

    pub fn join(&self, x: Elem, y: Elem) -> Elem {
        self.join[x * self.size + y]
    }

    pub fn le(&self, x: Elem, y: Elem) -> bool {
        self.le[x * self.size + y]
    }

    pub fn lt(&self, x: Elem, y: Elem) -> bool {
        x != y && self.le(x, y)
    }

    pub fn neg(&self, x: Elem) -> Elem {
        self.imp(x, 0)
    }

    /// `x ⊙ x ⊙ .. ⊙ x` with `n >= 1` factors.
    pub fn power(&self, x: Elem, n: usize) -> Elem {
        assert!(n >= 1, "power needs at least one factor");
        (1..n).fold(x, |acc, _| self.odot(acc, x))
    }

    /// Least `n` with `x^n = 0`, or `None` when no power of `x` vanishes.
    ///
    /// Powers decrease, so they stabilise within `size` steps; `ord` is
    /// taken in the usual sense of the nilpotency order.
    pub fn ord(&self, x: Elem) -> Option<usize> {
        let mut p = x;
        for k in 1..=self.size {
            if p == 0 {
                return Some(k);
            }
            p = self.odot(p, x);
        }
        None
    }

    pub fn is_linear(&self) -> bool {
        pairs(self.size).all(|(x, y)| self.le(x, y) || self.le(y, x))
    }

    /// Pairs `(x, y)` where `y` covers `x` in the order.
    pub fn covers(&self) -> Vec<(Elem, Elem)> {
        pairs(self.size)
            .filter(|&(x, y)| self.lt(x, y) && !self.elements().any(|z| self.lt(x, z) && self.lt(z, y)))
            .collect()
    }

    pub fn odot_rows(&self) -> Vec<Vec<Elem>> {
        self.odot.chunks(self.size).map(|r| r.to_vec()).collect()
    }

    pub fn arrow_rows(&self) -> Vec<Vec<Elem>> {
        self.arrow.chunks(self.size).map(|r| r.to_vec()).collect()
    }

    pub fn classify(&self) -> SubvarietyProfile {
        let n = self.size;
        let top = self.top;
        let imtl = self.elements().all(|x| self.neg(self.neg(x)) == x);
        let wnm = pairs(n).all(|(x, y)| {
            let p = self.odot(x, y);
            self.join(self.neg(p), self.imp(self.meet(x, y), p)) == top
        });
        let mv = pairs(n).all(|(x, y)| self.imp(self.imp(x, y), y) == self.imp(self.imp(y, x), x));
        let boolean = self.elements().all(|x| self.join(x, self.neg(x)) == top);
        SubvarietyProfile {
            imtl,
            nm: imtl && wnm,
            mv,
            boolean,
            linear: self.is_linear(),
        }
    }

    /// The subalgebra on `set`, re-indexed in increasing element order.
    /// Returns the algebra and the map from new indices to old elements.
    pub fn restrict(&self, set: ElemSet) -> Result<(FiniteMTLAlgebra, Vec<Elem>), ValidationError> {
        let members = set.to_vec();
        let index = |x: Elem| members.iter().position(|&m| m == x);
        let mut odot = Vec::with_capacity(members.len());
        let mut arrow = Vec::with_capacity(members.len());
        for &x in &members {
            let mut orow = Vec::with_capacity(members.len());
            let mut arow = Vec::with_capacity(members.len());
            for &y in &members {
                // Not closed: an out-of-range entry makes validation reject it.
                orow.push(index(self.odot(x, y)).unwrap_or(usize::MAX));
                arow.push(index(self.imp(x, y)).unwrap_or(usize::MAX));
            }
            odot.push(orow);
            arrow.push(arow);
        }
        let top = index(self.top).unwrap_or(usize::MAX);
        let sub = FiniteMTLAlgebra::validate(members.len(), &odot, &arrow, top)?;
        let names = members.iter().map(|&m| self.names[m].clone()).collect();
        Ok((sub.with_names(names)?, members))
    }
}

/// All pairs over `0..n` in lexicographic order.
pub(crate) fn pairs(n: usize) -> impl Iterator<Item = (Elem, Elem)> {
    (0..n).flat_map(move |x| (0..n).map(move |y| (x, y)))
}

/// All triples over `0..n` in lexicographic order.
pub(crate) fn triples(n: usize) -> impl Iterator<Item = (Elem, Elem, Elem)> {
    (0..n).flat_map(move |x| (0..n).flat_map(move |y| (0..n).map(move |z| (x, y, z))))
}
