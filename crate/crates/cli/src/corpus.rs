//! The bundled corpus, loading algebra files, and quantifier pools.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use rayon::prelude::*;
use sha2::{Digest, Sha256};
use umtl_core::chains::{boolean2, chain_algebra, l6, l6_product_table, ChainKind};
use umtl_core::logic::{derived_rules, PoolEntry, SchemaCatalog};
use umtl_core::quantifier::{delta_table, enumerate_quantifiers};
use umtl_core::{Elem, FiniteMTLAlgebra, U2Parse, UmtlAlgebra};

use crate::document::AlgebraDocument;

/// `(file name, contents)` of every bundled algebra file, in file-name order.
pub fn bundled_algebras() -> Vec<(String, String)> {
    let mut out = Vec::new();
    let mut push = |ident: String, comment: String, alg: &FiniteMTLAlgebra, forall: Option<Vec<Elem>>| {
        let doc = AlgebraDocument::from_algebra(&ident, alg, forall.as_deref());
        out.push((format!("{ident}.alg"), format!("# {comment}\n{doc}")));
    };
    push(
        "boolean-2".into(),
        "two-element Boolean algebra".into(),
        &boolean2(),
        None,
    );
    for kind in ChainKind::ALL {
        for n in 2..=6 {
            let alg = chain_algebra(kind, n).expect("n >= 2");
            push(
                format!("{}-{n}", kind.short()),
                format!("{n}-element {kind} chain"),
                &alg,
                None,
            );
        }
    }
    let six = l6();
    let order = "six-element algebra, order 0 < a, b; a < c, d; b < c; c, d < 1";
    push("l6".into(), order.into(), &six, None);
    push(
        "l6-delta".into(),
        format!("{order}; delta quantifier"),
        &six,
        Some(delta_table(&six)),
    );
    push(
        "l6-product".into(),
        format!("{order}; quantifier fixing 0, b, d, 1"),
        &six,
        Some(l6_product_table()),
    );
    out.sort();
    out
}

/// `(file name, contents)` of the proofs of the derived rules.
pub fn bundled_proofs(parse: U2Parse) -> Vec<(String, String)> {
    derived_rules(&SchemaCatalog::mmtl(parse))
        .into_iter()
        .map(|r| (format!("{}.proof", r.id), format!("# {}\n{}", r.statement, r.proof)))
        .collect()
}

#[derive(Clone, Debug)]
pub struct LoadedAlgebra {
    pub path: PathBuf,
    pub doc: AlgebraDocument,
    pub algebra: Arc<FiniteMTLAlgebra>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("{}: cannot read", path.display()))
}

pub fn parse_algebra(path: &Path, text: &str) -> Result<LoadedAlgebra> {
    let doc =
        AlgebraDocument::parse(text).map_err(|e| anyhow::anyhow!("{}:{}: {}", path.display(), e.line, e.message))?;
    let algebra = doc
        .to_algebra()
        .with_context(|| format!("{}: not an MTL-algebra", path.display()))?;
    Ok(LoadedAlgebra {
        path: path.to_path_buf(),
        doc,
        algebra: Arc::new(algebra),
    })
}

/// The `.alg` files of a directory in file-name order, or the file itself.
pub fn algebra_files(path: &Path) -> Result<Vec<PathBuf>> {
    if path.is_dir() {
        let mut files: Vec<PathBuf> = fs::read_dir(path)
            .with_context(|| format!("{}: cannot list", path.display()))?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "alg"))
            .collect();
        files.sort();
        if files.is_empty() {
            bail!("{}: no .alg files", path.display());
        }
        Ok(files)
    } else {
        Ok(vec![path.to_path_buf()])
    }
}

/// Loads algebras from a file or directory; `None` loads the bundled corpus.
/// Algebras are ordered by size, then file name. Returns the algebras and
/// the digest of their file contents.
pub fn load_algebras(path: Option<&Path>) -> Result<(Vec<LoadedAlgebra>, String)> {
    let texts: Vec<(PathBuf, String)> = match path {
        Some(p) => algebra_files(p)?
            .into_iter()
            .map(|f| read_text(&f).map(|t| (f, t)))
            .collect::<Result<_>>()?,
        None => bundled_algebras()
            .into_iter()
            .map(|(name, text)| (PathBuf::from("<bundled>").join(name), text))
            .collect(),
    };
    let mut algebras: Vec<LoadedAlgebra> = texts.iter().map(|(p, t)| parse_algebra(p, t)).collect::<Result<_>>()?;
    algebras.sort_by_key(|l| (l.algebra.size(), l.path.file_name().map(|n| n.to_os_string())));
    let mut hasher = Sha256::new();
    for (p, t) in &texts {
        hasher.update(
            p.file_name()
                .map(|n| n.to_string_lossy().into_owned())
                .unwrap_or_default(),
        );
        hasher.update([0]);
        hasher.update(t);
        hasher.update([0]);
    }
    Ok((algebras, hex::encode(hasher.finalize())))
}

/// Every (algebra, quantifier) pair: the declared quantifier when a file
/// has one, otherwise each enumerated quantifier in lexicographic order.
pub fn pool(algebras: &[LoadedAlgebra], parse: U2Parse) -> Result<Vec<PoolEntry>> {
    let per_file: Vec<Result<Vec<PoolEntry>>> = algebras
        .par_iter()
        .map(|l| match &l.doc.forall {
            Some(t) => {
                let q = UmtlAlgebra::new(Arc::clone(&l.algebra), t, parse)
                    .with_context(|| format!("{}: declared forall is not a quantifier", l.path.display()))?;
                Ok(vec![PoolEntry {
                    name: l.doc.ident.clone(),
                    algebra: q,
                }])
            }
            None => Ok(enumerate_quantifiers(&l.algebra, parse)
                .into_iter()
                .map(|u| {
                    let q = UmtlAlgebra::from_quantifier(Arc::clone(&l.algebra), u, parse);
                    PoolEntry {
                        name: format!("{} [{}]", l.doc.ident, q.table_names().join(" ")),
                        algebra: q,
                    }
                })
                .collect()),
        })
        .collect();
    let mut out = Vec::new();
    for r in per_file {
        out.extend(r?);
    }
    Ok(out)
}
