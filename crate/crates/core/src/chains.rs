//! Standard finite algebras used as a corpus.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::algebra::{Elem, FiniteMTLAlgebra};

/// The t-norm whose finite analogue builds a chain.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ChainKind {
    Lukasiewicz,
    Goedel,
    NilpotentMinimum,
}

impl ChainKind {
    pub const ALL: [ChainKind; 3] = [ChainKind::Lukasiewicz, ChainKind::Goedel, ChainKind::NilpotentMinimum];

    pub fn as_str(self) -> &'static str {
        match self {
            ChainKind::Lukasiewicz => "lukasiewicz",
            ChainKind::Goedel => "goedel",
            ChainKind::NilpotentMinimum => "nilpotent-minimum",
        }
    }

    /// Short prefix used for corpus file names.
    pub fn short(self) -> &'static str {
        match self {
            ChainKind::Lukasiewicz => "lukasiewicz",
            ChainKind::Goedel => "goedel",
            ChainKind::NilpotentMinimum => "nm",
        }
    }
}

impl fmt::Display for ChainKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ChainError {
    #[error("unknown chain kind `{0}` (expected lukasiewicz, goedel or nilpotent-minimum)")]
    UnknownKind(String),
    #[error("a chain needs at least two elements, got {0}")]
    TooSmall(usize),
}

impl FromStr for ChainKind {
    type Err = ChainError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "lukasiewicz" | "luk" => Ok(ChainKind::Lukasiewicz),
            "goedel" | "godel" => Ok(ChainKind::Goedel),
            "nilpotent-minimum" | "nm" => Ok(ChainKind::NilpotentMinimum),
            other => Err(ChainError::UnknownKind(other.to_string())),
        }
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Labels `0, 1/k, .., 1` for the chain `{0, 1/(n-1), .., 1}`.
fn fraction_names(n: usize) -> Vec<String> {
    let m = n - 1;
    (0..n)
        .map(|i| match i {
            0 => "0".to_string(),
            i if i == m => "1".to_string(),
            i => {
                let g = gcd(i, m);
                format!("{}/{}", i / g, m / g)
            }
        })
        .collect()
}

/// The `n`-element chain `0 < 1/(n-1) < .. < 1` with the given t-norm.
/// Element `i` stands for `i/(n-1)`.
pub fn chain_algebra(kind: ChainKind, n: usize) -> Result<FiniteMTLAlgebra, ChainError> {
    if n < 2 {
        return Err(ChainError::TooSmall(n));
    }
    let m = n - 1;
    let table = |f: &dyn Fn(usize, usize) -> usize| -> Vec<Vec<Elem>> {
        (0..n).map(|x| (0..n).map(|y| f(x, y)).collect()).collect()
    };
    let (odot, arrow) = match kind {
        ChainKind::Lukasiewicz => (
            table(&|x, y| (x + y).saturating_sub(m)),
            table(&|x, y| (m - x + y).min(m)),
        ),
        ChainKind::Goedel => (table(&|x, y| x.min(y)), table(&|x, y| if x <= y { m } else { y })),
        ChainKind::NilpotentMinimum => (
            table(&|x, y| if x + y <= m { 0 } else { x.min(y) }),
            table(&|x, y| if x <= y { m } else { (m - x).max(y) }),
        ),
    };
    let alg = FiniteMTLAlgebra::validate(n, &odot, &arrow, m).expect("standard chains are MTL-algebras");
    Ok(alg.with_names(fraction_names(n)).expect("fraction names are distinct"))
}

/// The two-element Boolean algebra with elements named `0` and `1`.
pub fn boolean2() -> FiniteMTLAlgebra {
    chain_algebra(ChainKind::Lukasiewicz, 2).expect("n = 2 is valid")
}

/// Indices of the six-element algebra's elements `0, a, b, c, d, 1`.
pub fn l6_names() -> [Elem; 6] {
    [0, 1, 2, 3, 4, 5]
}

/// The six-element non-linear algebra with order `0 < a, b`, `a < c, d`,
/// `b < c`, `c, d < 1`. It is isomorphic to the product of the two- and
/// three-element MV-chains via `a = (0,½)`, `b = (1,0)`, `c = (1,½)`,
/// `d = (0,1)`.
///
/// The monoid table is the one forced by the residuum through
/// `x⊙y = min{z : x <= y→z}`; in particular `a⊙d = d⊙a = d⊙c = a`.
pub fn l6() -> FiniteMTLAlgebra {
    let odot = vec![
        vec![0, 0, 0, 0, 0, 0],
        vec![0, 0, 0, 0, 1, 1],
        vec![0, 0, 2, 2, 0, 2],
        vec![0, 0, 2, 2, 1, 3],
        vec![0, 1, 0, 1, 4, 4],
        vec![0, 1, 2, 3, 4, 5],
    ];
    let arrow = vec![
        vec![5, 5, 5, 5, 5, 5],
        vec![3, 5, 3, 5, 5, 5],
        vec![4, 4, 5, 5, 4, 5],
        vec![1, 4, 3, 5, 4, 5],
        vec![2, 3, 2, 3, 5, 5],
        vec![0, 1, 2, 3, 4, 5],
    ];
    let names = ["0", "a", "b", "c", "d", "1"].iter().map(|s| s.to_string()).collect();
    FiniteMTLAlgebra::validate(6, &odot, &arrow, 5)
        .expect("six-element tables are an MTL-algebra")
        .with_names(names)
        .expect("distinct names")
}

/// The quantifier on the six-element algebra fixing `0, b, d, 1` with
/// `∀a = 0` and `∀c = b`: the identity on the two-element factor times
/// delta on the three-element one.
pub fn l6_product_table() -> Vec<Elem> {
    vec![0, 0, 2, 2, 4, 5]
}
