//! Command implementations. Each returns the human-readable text, the
//! report payload and an exit code; errors are input errors.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Map, Value};
use umtl_core::algebra::ValidationError;
use umtl_core::analysis::{analyze, subdirect_decompose, DecompositionMode, SubdirectEmbedding, Verdict};
use umtl_core::audit::{set_names, six_element_findings, theorem_audit, Finding};
use umtl_core::chains::{l6, l6_product_table};
use umtl_core::filters::{
    enumerate_filters, enumerate_ufilters, is_maximal_filter, maximal_ufilters, minimal_primes, prime_filters,
    quotient as quotient_by, radical, ufilters_by_subset_scan,
};
use umtl_core::logic::semantics::{consequence_with_budget, soundness_audit};
use umtl_core::logic::{
    check_proof, countermodel_search, deduction_transform, parse_formula, parse_proof, DeductionError, Formula, Goal,
    PoolEntry, Proof, SchemaCatalog, SearchOutcome,
};
use umtl_core::quantifier::{
    brute_force_quantifiers, delta_table, enumerate_quantifiers, identity_table, scan_quantifier_axioms,
};
use umtl_core::{Elem, ElemSet, FiniteMTLAlgebra, U2Parse, UmtlAlgebra};

use crate::args::{
    CatalogArgs, Cli, Command, CorpusCmd, DotTarget, ExportCmd, FilterKind, LogicCmd, PoolArgs, ProveCmd,
    QuantifiersCmd,
};
use crate::corpus::{
    bundled_algebras, bundled_proofs, load_algebras, parse_algebra, pool, read_text, sha256_hex, LoadedAlgebra,
};
use crate::document::AlgebraDocument;
use crate::dot::{order_dot, sets_dot};
use crate::report::InputDigest;

#[derive(Debug)]
pub struct Outcome {
    pub code: i32,
    pub text: String,
    pub result: Value,
    pub inputs: Vec<InputDigest>,
}

impl Outcome {
    fn new(code: i32, text: String, result: Value, inputs: Vec<InputDigest>) -> Self {
        Outcome {
            code,
            text,
            result,
            inputs,
        }
    }
}

pub fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Validate { .. } => "validate",
        Command::Classify { .. } => "classify",
        Command::Quantifiers(QuantifiersCmd::Enum { .. }) => "quantifiers enum",
        Command::Quantifiers(QuantifiersCmd::Check { .. }) => "quantifiers check",
        Command::Filters { .. } => "filters",
        Command::Quotient { .. } => "quotient",
        Command::Analyze { .. } => "analyze",
        Command::Audit { .. } => "audit",
        Command::Prove(ProveCmd::Check { .. }) => "prove check",
        Command::Prove(ProveCmd::Deduce { .. }) => "prove deduce",
        Command::Logic(LogicCmd::Valid { .. }) => "logic valid",
        Command::Logic(LogicCmd::Countermodel { .. }) => "logic countermodel",
        Command::Export(ExportCmd::Dot { .. }) => "export dot",
        Command::Corpus(CorpusCmd::Write { .. }) => "corpus write",
        Command::Corpus(CorpusCmd::Proofs { .. }) => "corpus proofs",
    }
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    let parse = cli.u2_parse;
    match &cli.command {
        Command::Validate { path, forall } => validate(path, forall.forall.as_deref(), parse),
        Command::Classify { path } => classify(path),
        Command::Quantifiers(QuantifiersCmd::Enum { path, brute_force }) => quantifiers_enum(path, *brute_force, parse),
        Command::Quantifiers(QuantifiersCmd::Check { path, forall }) => {
            quantifiers_check(path, forall.forall.as_deref(), parse)
        }
        Command::Filters { path, forall, kind } => filters(path, forall.forall.as_deref(), *kind, parse),
        Command::Quotient {
            path,
            filter,
            forall,
            out,
        } => quotient(path, filter, forall.forall.as_deref(), out.as_deref(), parse),
        Command::Analyze { path, forall } => analyze_cmd(path, forall.forall.as_deref(), parse),
        Command::Audit { corpus } => audit(corpus, parse),
        Command::Prove(ProveCmd::Check { proof, catalog }) => prove_check(proof, catalog, parse),
        Command::Prove(ProveCmd::Deduce {
            proof,
            discharge,
            catalog,
            out,
            pool,
        }) => prove_deduce(proof, discharge, catalog, out.as_deref(), pool.as_deref(), parse),
        Command::Logic(LogicCmd::Valid { formula, pool }) => logic_valid(formula, pool, parse),
        Command::Logic(LogicCmd::Countermodel { goal, pool }) => logic_countermodel(goal, pool, parse),
        Command::Export(ExportCmd::Dot {
            path,
            what,
            forall,
            out,
        }) => export_dot(path, *what, forall.forall.as_deref(), out.as_deref(), parse),
        Command::Corpus(CorpusCmd::Write { dir }) => write_files(dir, bundled_algebras()),
        Command::Corpus(CorpusCmd::Proofs { dir }) => write_files(dir, bundled_proofs(parse)),
    }
}

fn digest(path: &Path, text: &str) -> InputDigest {
    InputDigest {
        path: path.display().to_string(),
        sha256: sha256_hex(text.as_bytes()),
    }
}

fn load(path: &Path) -> Result<(LoadedAlgebra, InputDigest)> {
    let text = read_text(path)?;
    Ok((parse_algebra(path, &text)?, digest(path, &text)))
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("reports serialize")
}

fn tuple(a: &FiniteMTLAlgebra, xs: &[Elem]) -> String {
    let names: Vec<&str> = xs.iter().map(|&x| a.name(x)).collect();
    format!("({})", names.join(", "))
}

fn table_label(a: &FiniteMTLAlgebra, t: &[Elem]) -> String {
    let names: Vec<&str> = t.iter().map(|&x| a.name(x)).collect();
    format!("[{}]", names.join(" "))
}

fn sets(a: &FiniteMTLAlgebra, ss: &[ElemSet]) -> String {
    if ss.is_empty() {
        return "none".to_string();
    }
    ss.iter().map(|&s| set_names(a, s)).collect::<Vec<_>>().join(" ")
}

fn verdict(a: &FiniteMTLAlgebra, v: &Verdict) -> String {
    match (&v.holds, &v.witness) {
        (true, _) => "holds".to_string(),
        (false, Some(w)) => format!("fails at {}", tuple(a, w)),
        (false, None) => "fails".to_string(),
    }
}

fn elements(a: &FiniteMTLAlgebra, choice: &str, what: &str) -> Result<Vec<Elem>> {
    choice
        .split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .map(|t| a.lookup(t).ok_or_else(|| anyhow!("{what}: unknown element `{t}`")))
        .collect()
}

/// Candidate quantifier tables selected by `--forall`.
fn select_tables(l: &LoadedAlgebra, choice: Option<&str>, parse: U2Parse) -> Result<Vec<Vec<Elem>>> {
    let a = &l.algebra;
    let n = a.size();
    let tables = match choice.unwrap_or("declared") {
        "declared" => match &l.doc.forall {
            Some(t) => vec![t.clone()],
            None => bail!(
                "{}: no forall line; pass --forall delta|identity|all|<table>",
                l.path.display()
            ),
        },
        "delta" => vec![delta_table(a)],
        "identity" => vec![identity_table(a)],
        "all" => enumerate_quantifiers(a, parse)
            .into_iter()
            .map(|u| u.table().to_vec())
            .collect(),
        other => vec![elements(a, other, "--forall")?],
    };
    for t in &tables {
        if t.len() != n {
            bail!(
                "{}: a quantifier table needs {n} entries, got {}",
                l.path.display(),
                t.len()
            );
        }
        if let Some(&x) = t.iter().find(|&&x| x >= n) {
            bail!("{}: forall entry {x} is out of range", l.path.display());
        }
    }
    Ok(tables)
}

fn quantified(l: &LoadedAlgebra, choice: Option<&str>, parse: U2Parse) -> Result<Vec<UmtlAlgebra>> {
    select_tables(l, choice, parse)?
        .into_iter()
        .map(|t| {
            UmtlAlgebra::new(Arc::clone(&l.algebra), &t, parse).with_context(|| {
                format!(
                    "{}: {} is not a quantifier",
                    l.path.display(),
                    table_label(&l.algebra, &t)
                )
            })
        })
        .collect()
}

fn single(l: &LoadedAlgebra, choice: Option<&str>, parse: U2Parse) -> Result<UmtlAlgebra> {
    let mut qs = quantified(l, choice, parse)?;
    if qs.len() != 1 {
        bail!(
            "{}: this command needs exactly one quantifier, got {}",
            l.path.display(),
            qs.len()
        );
    }
    Ok(qs.remove(0))
}

fn validate(path: &Path, choice: Option<&str>, parse: U2Parse) -> Result<Outcome> {
    let text = read_text(path)?;
    let input = digest(path, &text);
    let doc = AlgebraDocument::parse(&text).map_err(|e| anyhow!("{}:{}: {}", path.display(), e.line, e.message))?;
    let mut out = String::new();
    let alg = match doc.to_algebra() {
        Ok(a) => a,
        Err(ValidationError::Axioms(v)) => {
            writeln!(out, "MTL-algebra: invalid").unwrap();
            for x in &v {
                writeln!(out, "  {x}").unwrap();
            }
            let result = json!({"algebra": doc.ident, "size": doc.size, "mtl": {"valid": false, "violations": v}});
            return Ok(Outcome::new(1, out, result, vec![input]));
        }
        Err(e) => bail!("{}: {e}", path.display()),
    };
    writeln!(out, "MTL-algebra: valid").unwrap();
    let mut code = 0;
    let mut checks = Vec::new();
    if choice.is_some() || doc.forall.is_some() {
        let l = LoadedAlgebra {
            path: path.to_path_buf(),
            doc: doc.clone(),
            algebra: Arc::new(alg.clone()),
        };
        for t in select_tables(&l, choice, parse)? {
            let v = scan_quantifier_axioms(&alg, &t, parse);
            if v.is_empty() {
                writeln!(out, "quantifier {}: valid ({parse} parse)", table_label(&alg, &t)).unwrap();
            } else {
                code = 1;
                writeln!(out, "quantifier {}: invalid ({parse} parse)", table_label(&alg, &t)).unwrap();
                for x in &v {
                    writeln!(out, "  {} fails at {}", x.axiom, tuple(&alg, &x.witness)).unwrap();
                }
            }
            checks.push(json!({"table": t, "valid": v.is_empty(), "violations": v}));
        }
    }
    let result = json!({
        "algebra": doc.ident,
        "size": doc.size,
        "mtl": {"valid": true, "violations": []},
        "quantifiers": checks,
    });
    Ok(Outcome::new(code, out, result, vec![input]))
}

fn classify(path: &Path) -> Result<Outcome> {
    let (l, input) = load(path)?;
    let a = &l.algebra;
    let p = a.classify();
    let orders: Vec<Option<usize>> = a.elements().map(|x| a.ord(x)).collect();
    let mut out = String::new();
    writeln!(out, "{}: {} elements", l.doc.ident, a.size()).unwrap();
    for (label, v) in [
        ("linear", p.linear),
        ("involutive", p.imtl),
        ("nilpotent minimum", p.nm),
        ("MV", p.mv),
        ("Boolean", p.boolean),
    ] {
        writeln!(out, "{label}: {v}").unwrap();
    }
    let ords: Vec<String> = a
        .elements()
        .map(|x| {
            format!(
                "{}:{}",
                a.name(x),
                orders[x].map_or("inf".to_string(), |n| n.to_string())
            )
        })
        .collect();
    writeln!(out, "orders: {}", ords.join(" ")).unwrap();
    let result = json!({
        "algebra": l.doc.ident,
        "size": a.size(),
        "names": a.names(),
        "profile": p,
        "orders": orders,
    });
    Ok(Outcome::new(0, out, result, vec![input]))
}

fn quantifiers_enum(path: &Path, brute_force: bool, parse: U2Parse) -> Result<Outcome> {
    let (l, input) = load(path)?;
    let a = &l.algebra;
    let qs = enumerate_quantifiers(a, parse);
    let mut out = String::new();
    writeln!(out, "{} quantifier(s) on {} ({parse} parse)", qs.len(), l.doc.ident).unwrap();
    for u in &qs {
        writeln!(
            out,
            "  {}  fixpoints {}",
            table_label(a, u.table()),
            set_names(a, u.fixpoints())
        )
        .unwrap();
    }
    let list: Vec<Value> = qs
        .iter()
        .map(|u| json!({"table": u.table(), "fixpoints": u.fixpoints()}))
        .collect();
    let mut code = 0;
    let oracle = if brute_force {
        match brute_force_quantifiers(a, parse) {
            Some(b) => {
                let agree = b == qs;
                if !agree {
                    code = 1;
                }
                writeln!(out, "scan of all unary maps: {} quantifier(s), agree {agree}", b.len()).unwrap();
                json!({"count": b.len(), "agree": agree})
            }
            None => {
                writeln!(out, "scan of all unary maps: skipped, carrier too large").unwrap();
                json!("skipped")
            }
        }
    } else {
        Value::Null
    };
    let result = json!({"algebra": l.doc.ident, "count": qs.len(), "quantifiers": list, "brute_force": oracle});
    Ok(Outcome::new(code, out, result, vec![input]))
}

fn quantifiers_check(path: &Path, choice: Option<&str>, parse: U2Parse) -> Result<Outcome> {
    let (l, input) = load(path)?;
    let a = &l.algebra;
    let mut out = String::new();
    let mut checks = Vec::new();
    let mut code = 0;
    for t in select_tables(&l, choice, parse)? {
        let v = scan_quantifier_axioms(a, &t, parse);
        writeln!(
            out,
            "{}: {}",
            table_label(a, &t),
            if v.is_empty() { "quantifier" } else { "not a quantifier" }
        )
        .unwrap();
        for x in &v {
            writeln!(out, "  {} fails at {}", x.axiom, tuple(a, &x.witness)).unwrap();
        }
        if !v.is_empty() {
            code = 1;
        }
        checks.push(json!({"table": t, "valid": v.is_empty(), "violations": v}));
    }
    let result = json!({"algebra": l.doc.ident, "checks": checks});
    Ok(Outcome::new(code, out, result, vec![input]))
}

fn filters(path: &Path, choice: Option<&str>, kind: FilterKind, parse: U2Parse) -> Result<Outcome> {
    let (l, input) = load(path)?;
    let a = &l.algebra;
    let wants = |k: FilterKind| kind == FilterKind::All || kind == k;
    let mut out = String::new();
    let mut result = Map::new();
    result.insert("algebra".into(), json!(l.doc.ident));
    let all = enumerate_filters(a);
    if wants(FilterKind::Filters) {
        writeln!(out, "filters: {}", sets(a, &all)).unwrap();
        result.insert("filters".into(), to_value(&all));
    }
    if wants(FilterKind::Primes) {
        let p = prime_filters(a);
        writeln!(out, "prime filters: {}", sets(a, &p)).unwrap();
        result.insert("prime_filters".into(), to_value(&p));
    }
    if wants(FilterKind::MinimalPrimes) {
        let m = minimal_primes(a);
        writeln!(out, "minimal prime filters: {}", sets(a, &m.by_inclusion)).unwrap();
        if !m.agree {
            writeln!(out, "  by annihilators: {}", sets(a, &m.by_perp)).unwrap();
        }
        result.insert("minimal_primes".into(), to_value(&m));
    }
    if wants(FilterKind::Maximal) {
        let m: Vec<ElemSet> = all.iter().copied().filter(|&f| is_maximal_filter(a, f)).collect();
        writeln!(out, "maximal filters: {}", sets(a, &m)).unwrap();
        result.insert("maximal_filters".into(), to_value(&m));
    }
    let needs_quantifier = [FilterKind::Ufilters, FilterKind::MaximalUfilters, FilterKind::Radical].contains(&kind)
        || (kind == FilterKind::All && (choice.is_some() || l.doc.forall.is_some()));
    if needs_quantifier {
        let mut per = Vec::new();
        for q in quantified(&l, choice, parse)? {
            let mut m = Map::new();
            writeln!(out, "quantifier {}", table_label(a, q.quantifier().table())).unwrap();
            m.insert("table".into(), json!(q.quantifier().table()));
            if wants(FilterKind::Ufilters) {
                let u = enumerate_ufilters(&q);
                writeln!(out, "  U-filters: {}", sets(a, &u)).unwrap();
                m.insert("ufilters".into(), to_value(&u));
            }
            if wants(FilterKind::MaximalUfilters) {
                let u = maximal_ufilters(&q);
                writeln!(out, "  maximal U-filters: {}", sets(a, &u)).unwrap();
                m.insert("maximal_ufilters".into(), to_value(&u));
            }
            if wants(FilterKind::Radical) {
                let r = radical(&q);
                writeln!(out, "  radical: {}", set_names(a, r.members)).unwrap();
                m.insert("radical".into(), to_value(&r));
            }
            per.push(Value::Object(m));
        }
        result.insert("quantifiers".into(), Value::Array(per));
    }
    Ok(Outcome::new(0, out, Value::Object(result), vec![input]))
}

fn quotient(
    path: &Path,
    filter: &str,
    choice: Option<&str>,
    out_path: Option<&Path>,
    parse: U2Parse,
) -> Result<Outcome> {
    let (l, input) = load(path)?;
    let a = &l.algebra;
    let q = single(&l, choice, parse)?;
    let f: ElemSet = elements(a, filter, "--filter")?.into_iter().collect();
    let mut out = String::new();
    let r = match quotient_by(&q, f) {
        Ok(r) => r,
        Err(e) => {
            writeln!(out, "quotient by {}: {e}", set_names(a, f)).unwrap();
            let result = json!({"algebra": l.doc.ident, "filter": f, "error": e.to_string()});
            return Ok(Outcome::new(1, out, result, vec![input]));
        }
    };
    let qa = r.quotient.algebra();
    writeln!(
        out,
        "quotient of {} by {}: {} classes",
        l.doc.ident,
        set_names(a, f),
        r.classes.len()
    )
    .unwrap();
    for (i, c) in r.classes.iter().enumerate() {
        writeln!(out, "  {} = {}", qa.name(i), set_names(a, *c)).unwrap();
    }
    writeln!(out, "forall {}", table_label(qa, r.quotient.quantifier().table())).unwrap();
    let hom = umtl_core::analysis::is_u_homomorphism(&r.class_map, &q, &r.quotient);
    match &hom {
        Ok(()) => writeln!(out, "class map: U-homomorphism").unwrap(),
        Err(h) => writeln!(out, "class map: breaks {} at {}", h.operation, tuple(a, &h.arguments)).unwrap(),
    }
    let doc = AlgebraDocument::from_algebra(
        &format!("{}-quotient", l.doc.ident),
        qa,
        Some(r.quotient.quantifier().table()),
    );
    if let Some(p) = out_path {
        fs::write(p, doc.to_string()).with_context(|| format!("{}: cannot write", p.display()))?;
        writeln!(out, "wrote {}", p.display()).unwrap();
    }
    let result = json!({
        "algebra": l.doc.ident,
        "filter": f,
        "classes": r.classes,
        "class_map": r.class_map,
        "quotient": {
            "size": qa.size(),
            "names": qa.names(),
            "odot": qa.odot_rows(),
            "arrow": qa.arrow_rows(),
            "forall": r.quotient.quantifier().table(),
        },
        "homomorphism": hom.as_ref().err(),
    });
    Ok(Outcome::new(if hom.is_ok() { 0 } else { 1 }, out, result, vec![input]))
}

fn embedding_value(e: &SubdirectEmbedding) -> Value {
    json!({
        "filters": e.filters,
        "factor_sizes": e.factors.iter().map(|f| f.algebra().size()).collect::<Vec<_>>(),
        "injective": e.injective,
        "surjective": e.surjective,
        "homomorphic": e.homomorphic,
        "factors_linear": e.factors_linear,
        "factors_simple": e.factors_simple,
        "subdirect": e.is_subdirect(),
    })
}

fn analyze_cmd(path: &Path, choice: Option<&str>, parse: U2Parse) -> Result<Outcome> {
    let (l, input) = load(path)?;
    let a = &l.algebra;
    let mut out = String::new();
    let mut per = Vec::new();
    let mut code = 0;
    for q in quantified(&l, choice, parse)? {
        let r = analyze(&q);
        let agree = r.representability.agree && r.strongness.agree && r.simplicity.agree;
        if !agree {
            code = 1;
        }
        writeln!(out, "quantifier {}", table_label(a, q.quantifier().table())).unwrap();
        writeln!(
            out,
            "  representable={} strong={} simple={} semisimple={}",
            r.representability.representable,
            r.strongness.strong.holds,
            r.simplicity.simple,
            r.semisimplicity.semisimple
        )
        .unwrap();
        let rep = &r.representability;
        writeln!(out, "  representability (agree {}):", rep.agree).unwrap();
        writeln!(out, "    forall(x->y) v (y->x) = 1: {}", verdict(a, &rep.implication)).unwrap();
        writeln!(
            out,
            "    x v y = 1 implies x v forall y = 1: {}",
            verdict(a, &rep.disjunction)
        )
        .unwrap();
        writeln!(
            out,
            "    minimal primes are U-filters: {}",
            verdict(a, &rep.minimal_primes)
        )
        .unwrap();
        writeln!(
            out,
            "  strong forall(x v y) = forall x v forall y: {} (agrees with representability: {})",
            verdict(a, &r.strongness.strong),
            r.strongness.agree
        )
        .unwrap();
        let s = &r.simplicity;
        writeln!(out, "  simplicity (agree {}):", s.agree).unwrap();
        for (label, v) in [
            ("exactly two U-filters", &s.two_ufilters),
            ("image simple", &s.image_simple),
            ("fixpoints are 0 and 1", &s.trivial_fixpoints),
            ("{1} the only proper U-filter", &s.unique_proper),
            ("forall x has finite order for x < 1", &s.finite_orders),
        ] {
            writeln!(out, "    {label}: {}", verdict(a, v)).unwrap();
        }
        writeln!(
            out,
            "  radical {}; maximal U-filters {}",
            set_names(a, r.semisimplicity.radical),
            sets(a, &r.semisimplicity.maximal_ufilters)
        )
        .unwrap();
        let mut decomp = Map::new();
        for (label, mode) in [
            ("min-primes", DecompositionMode::MinPrimes),
            ("max-ufilters", DecompositionMode::MaxUFilters),
        ] {
            match subdirect_decompose(&q, mode) {
                Ok(e) => {
                    let sizes: Vec<String> = e.factors.iter().map(|f| f.algebra().size().to_string()).collect();
                    writeln!(
                        out,
                        "  decomposition by {label}: factor sizes {}, subdirect {}",
                        sizes.join(" x "),
                        e.is_subdirect()
                    )
                    .unwrap();
                    decomp.insert(label.into(), embedding_value(&e));
                }
                Err(e) => {
                    writeln!(out, "  decomposition by {label}: {e}").unwrap();
                    decomp.insert(label.into(), json!({"error": e.to_string()}));
                }
            }
        }
        per.push(json!({
            "table": q.quantifier().table(),
            "analysis": r,
            "decomposition": decomp,
        }));
    }
    let result = json!({"algebra": l.doc.ident, "quantifiers": per});
    Ok(Outcome::new(code, out, result, vec![input]))
}

fn oracle_findings(algebras: &[LoadedAlgebra], pairs: &[PoolEntry], parse: U2Parse) -> Vec<Finding> {
    let mut out: Vec<Finding> = algebras
        .par_iter()
        .map(|l| {
            let fast = enumerate_quantifiers(&l.algebra, parse);
            let (agree, detail) = match brute_force_quantifiers(&l.algebra, parse) {
                Some(b) => (
                    b == fast,
                    format!("{} by fixpoint sets, {} by scanning all maps", fast.len(), b.len()),
                ),
                None => (true, format!("{} by fixpoint sets; scan skipped", fast.len())),
            };
            Finding {
                subject: l.doc.ident.clone(),
                check: "quantifier-enumeration",
                agree,
                detail,
            }
        })
        .collect();
    out.extend(
        pairs
            .par_iter()
            .map(|p| {
                let fast = enumerate_ufilters(&p.algebra);
                let scan = ufilters_by_subset_scan(&p.algebra);
                Finding {
                    subject: p.name.clone(),
                    check: "ufilter-subset-scan",
                    agree: scan.as_ref().is_none_or(|s| *s == fast),
                    detail: format!(
                        "{} U-filters by closure, {}",
                        fast.len(),
                        scan.map_or("scan skipped".to_string(), |s| format!("{} by subset scan", s.len()))
                    ),
                }
            })
            .collect::<Vec<_>>(),
    );
    out
}

fn summarize(out: &mut String, title: &str, findings: &[Finding]) {
    let mut by_check: BTreeMap<&str, (usize, usize)> = BTreeMap::new();
    for f in findings {
        let e = by_check.entry(f.check).or_default();
        if f.agree {
            e.0 += 1;
        } else {
            e.1 += 1;
        }
    }
    writeln!(out, "{title}").unwrap();
    for (check, (agree, disagree)) in &by_check {
        writeln!(out, "  {check}: {agree} agree, {disagree} disagree").unwrap();
    }
    for f in findings.iter().filter(|f| !f.agree) {
        writeln!(out, "  DISAGREE {} {}: {}", f.check, f.subject, f.detail).unwrap();
    }
}

fn audit(corpus: &Path, parse: U2Parse) -> Result<Outcome> {
    let (algebras, digest_hex) = load_algebras(Some(corpus))?;
    let pairs = pool(&algebras, parse)?;
    let named: Vec<(String, Arc<FiniteMTLAlgebra>)> = algebras
        .iter()
        .map(|l| (l.doc.ident.clone(), Arc::clone(&l.algebra)))
        .collect();
    let theorems = theorem_audit(&named, &pairs, parse);
    let oracles = oracle_findings(&algebras, &pairs, parse);

    let six = Arc::new(l6());
    let delta = UmtlAlgebra::new(Arc::clone(&six), &delta_table(&six), parse);
    let product = UmtlAlgebra::new(Arc::clone(&six), &l6_product_table(), parse);
    let small: Vec<PoolEntry> = pairs
        .iter()
        .filter(|p| p.algebra.algebra().size() <= 6)
        .cloned()
        .collect();
    let six_findings = match (&delta, &product) {
        (Ok(d), Ok(p)) => six_element_findings(d, p, &small),
        _ => vec![Finding {
            subject: "l6".into(),
            check: "published-ufilter-listing",
            agree: false,
            detail: format!("a reference quantifier fails under the {parse} parse"),
        }],
    };
    let soundness = soundness_audit(&SchemaCatalog::mmtl(parse), &pairs);

    let mut out = String::new();
    writeln!(out, "{} algebras, {} quantified pairs", algebras.len(), pairs.len()).unwrap();
    summarize(&mut out, "characterizations", &theorems.findings);
    summarize(&mut out, "oracles", &oracles);
    summarize(&mut out, "six-element algebra", &six_findings);
    for f in &six_findings {
        writeln!(out, "  {} {}: {}", f.check, f.subject, f.detail).unwrap();
    }
    writeln!(
        out,
        "soundness: {}",
        if soundness.sound {
            "all schemas valid, rules preserve validity"
        } else {
            "FAILS"
        }
    )
    .unwrap();
    for s in soundness.schemas.iter().filter(|s| !s.valid) {
        if let Some(c) = &s.counter {
            writeln!(out, "  {} fails on {} at {:?}", s.id, c.algebra, c.valuation).unwrap();
        }
    }
    let disagreements =
        theorems.disagreements().count() + oracles.iter().filter(|f| !f.agree).count() + usize::from(!soundness.sound);
    writeln!(out, "disagreements: {disagreements}").unwrap();
    let result = json!({
        "algebras": algebras.len(),
        "pairs": pairs.len(),
        "characterizations": theorems.findings,
        "oracles": oracles,
        "six_element": six_findings,
        "soundness": soundness,
        "disagreements": disagreements,
    });
    let input = InputDigest {
        path: corpus.display().to_string(),
        sha256: digest_hex,
    };
    Ok(Outcome::new(i32::from(disagreements > 0), out, result, vec![input]))
}

fn catalog(args: &CatalogArgs, parse: U2Parse) -> SchemaCatalog {
    let mut c = SchemaCatalog::mmtl(parse);
    for &e in &args.extensions {
        c = c.with_extension(e.into());
    }
    if args.disjunction_rule {
        c = c.with_disjunction_rule();
    }
    c
}

fn load_proof(path: &Path) -> Result<(Proof, InputDigest)> {
    let text = read_text(path)?;
    let proof = parse_proof(&text).map_err(|e| anyhow!("{}:{}: {}", path.display(), e.line, e.message))?;
    Ok((proof, digest(path, &text)))
}

fn prove_check(path: &Path, args: &CatalogArgs, parse: U2Parse) -> Result<Outcome> {
    let (proof, input) = load_proof(path)?;
    let c = catalog(args, parse);
    let mut out = String::new();
    let (code, result) = match check_proof(&c, &proof) {
        Ok(f) => {
            writeln!(out, "proof checks: {} steps", proof.steps.len()).unwrap();
            writeln!(out, "conclusion: {f}").unwrap();
            (0, json!({"valid": true, "steps": proof.steps.len(), "conclusion": f}))
        }
        Err(e) => {
            writeln!(out, "proof fails: {e}").unwrap();
            (
                1,
                json!({"valid": false, "steps": proof.steps.len(), "step": e.step().map(|s| s + 1), "error": e.to_string()}),
            )
        }
    };
    Ok(Outcome::new(code, out, result, vec![input]))
}

fn load_pool(path: Option<&Path>, parse: U2Parse) -> Result<(Vec<PoolEntry>, InputDigest)> {
    let (algebras, digest_hex) = load_algebras(path)?;
    let entries = pool(&algebras, parse)?;
    let input = InputDigest {
        path: path.map_or("<bundled>".to_string(), |p| p.display().to_string()),
        sha256: digest_hex,
    };
    Ok((entries, input))
}

fn search_text(out: &mut String, s: &SearchOutcome) {
    match s {
        SearchOutcome::Countermodel { name, labels, .. } => {
            let v: Vec<String> = labels.iter().enumerate().map(|(i, l)| format!("p{i}={l}")).collect();
            writeln!(out, "countermodel: {name} at {}", v.join(", ")).unwrap();
        }
        SearchOutcome::Exhausted { pool_size, valuations } => {
            writeln!(
                out,
                "no countermodel among {pool_size} algebras ({valuations} valuations)"
            )
            .unwrap();
        }
    }
}

fn prove_deduce(
    path: &Path,
    discharge: &str,
    args: &CatalogArgs,
    out_path: Option<&Path>,
    pool_path: Option<&Path>,
    parse: U2Parse,
) -> Result<Outcome> {
    let (proof, input) = load_proof(path)?;
    let c = catalog(args, parse);
    let alpha = match proof.hypothesis(discharge) {
        Some(f) => f.clone(),
        None => {
            parse_formula(discharge).map_err(|e| anyhow!("--discharge: `{discharge}` is no hypothesis name and {e}"))?
        }
    };
    let mut out = String::new();
    let mut inputs = vec![input];
    match deduction_transform(&c, &proof, &alpha) {
        Ok(d) => {
            let text = d.proof.to_string();
            if let Some(p) = out_path {
                fs::write(p, &text).with_context(|| format!("{}: cannot write", p.display()))?;
            }
            writeln!(
                out,
                "discharged {}: {} steps proving {}",
                alpha,
                d.proof.steps.len(),
                d.conclusion
            )
            .unwrap();
            if d.weakened {
                writeln!(out, "the conclusion did not use the hypothesis and was weakened").unwrap();
            }
            if out_path.is_none() {
                out.push_str(&text);
            }
            let result = json!({
                "outcome": "transformed",
                "discharge": alpha,
                "discharged": d.discharged,
                "weakened": d.weakened,
                "conclusion": d.conclusion,
                "steps": d.proof.steps.len(),
                "proof": text,
            });
            Ok(Outcome::new(0, out, result, inputs))
        }
        Err(DeductionError::InvalidInput(e)) => {
            writeln!(out, "input proof does not check: {e}").unwrap();
            Ok(Outcome::new(
                1,
                out,
                json!({"outcome": "invalid-input", "error": e.to_string()}),
                inputs,
            ))
        }
        Err(e) => {
            writeln!(out, "refused: {e}").unwrap();
            let beta = check_proof(&c, &proof).expect("checked by the transform").clone();
            let premises: Vec<Formula> = proof
                .theory
                .iter()
                .filter(|(_, f)| *f != alpha)
                .map(|(_, f)| f.clone())
                .collect();
            let goal = Goal::Rule {
                premises,
                conclusion: Formula::imp(Formula::boxed(alpha.clone()), beta),
            };
            let (entries, pool_input) = load_pool(pool_path, parse)?;
            inputs.push(pool_input);
            let search = match countermodel_search(&goal, &entries, umtl_core::logic::semantics::DEFAULT_MAX_VARS) {
                Ok(s) => {
                    search_text(&mut out, &s);
                    to_value(&s)
                }
                Err(e) => {
                    writeln!(out, "countermodel search skipped: {e}").unwrap();
                    json!({"error": e.to_string()})
                }
            };
            let result = json!({
                "outcome": "refused",
                "discharge": alpha,
                "step": e.step().map(|s| s + 1),
                "reason": e.to_string(),
                "goal": goal,
                "search": search,
            });
            Ok(Outcome::new(1, out, result, inputs))
        }
    }
}

fn logic_valid(formula: &str, args: &PoolArgs, parse: U2Parse) -> Result<Outcome> {
    let f = parse_formula(formula).map_err(|e| anyhow!("formula: {e}"))?;
    let (entries, input) = load_pool(args.pool.as_deref(), parse)?;
    let results = entries
        .par_iter()
        .map(|p| consequence_with_budget(&p.algebra, &[], &f, args.max_vars))
        .collect::<Result<Vec<_>, _>>()?;
    let mut out = String::new();
    let invalid: Vec<(&PoolEntry, &Vec<Elem>)> = entries
        .iter()
        .zip(&results)
        .filter_map(|(p, r)| r.countervaluation.as_ref().map(|v| (p, v)))
        .collect();
    if invalid.is_empty() {
        writeln!(out, "{f} is valid on all {} pool members", entries.len()).unwrap();
    } else {
        writeln!(out, "{f} fails on {} of {} pool members", invalid.len(), entries.len()).unwrap();
        for (p, v) in &invalid {
            let a = p.algebra.algebra();
            let vals: Vec<String> = v
                .iter()
                .enumerate()
                .map(|(i, &x)| format!("p{i}={}", a.name(x)))
                .collect();
            writeln!(out, "  {} at {}", p.name, vals.join(", ")).unwrap();
        }
    }
    let members: Vec<Value> = entries
        .iter()
        .zip(&results)
        .map(|(p, r)| json!({"name": p.name, "valid": r.holds, "countervaluation": r.countervaluation}))
        .collect();
    let result = json!({"formula": f, "valid": invalid.is_empty(), "members": members});
    Ok(Outcome::new(i32::from(!invalid.is_empty()), out, result, vec![input]))
}

fn logic_countermodel(goal: &str, args: &PoolArgs, parse: U2Parse) -> Result<Outcome> {
    let g = Goal::parse(goal).map_err(|e| anyhow!("goal: {e}"))?;
    let (entries, input) = load_pool(args.pool.as_deref(), parse)?;
    let s = countermodel_search(&g, &entries, args.max_vars)?;
    let mut out = String::new();
    search_text(&mut out, &s);
    let code = i32::from(matches!(s, SearchOutcome::Countermodel { .. }));
    Ok(Outcome::new(code, out, json!({"goal": g, "search": s}), vec![input]))
}

fn export_dot(
    path: &Path,
    what: DotTarget,
    choice: Option<&str>,
    out_path: Option<&Path>,
    parse: U2Parse,
) -> Result<Outcome> {
    let (l, input) = load(path)?;
    let a = &l.algebra;
    let ident = &l.doc.ident;
    let dot = match what {
        DotTarget::Order => order_dot(ident, a),
        DotTarget::Filters => sets_dot(&format!("{ident} filters"), a, &enumerate_filters(a)),
        DotTarget::Ufilters => {
            let q = single(&l, choice, parse)?;
            sets_dot(&format!("{ident} U-filters"), a, &enumerate_ufilters(&q))
        }
    };
    let text = match out_path {
        Some(p) => {
            fs::write(p, &dot).with_context(|| format!("{}: cannot write", p.display()))?;
            format!("wrote {}\n", p.display())
        }
        None => dot.clone(),
    };
    Ok(Outcome::new(
        0,
        text,
        json!({"algebra": ident, "dot": dot}),
        vec![input],
    ))
}

fn write_files(dir: &Path, files: Vec<(String, String)>) -> Result<Outcome> {
    fs::create_dir_all(dir).with_context(|| format!("{}: cannot create", dir.display()))?;
    for (name, text) in &files {
        let p = dir.join(name);
        fs::write(&p, text).with_context(|| format!("{}: cannot write", p.display()))?;
    }
    let names: Vec<&str> = files.iter().map(|(n, _)| n.as_str()).collect();
    let text = format!("wrote {} files to {}\n", files.len(), dir.display());
    Ok(Outcome::new(
        0,
        text,
        json!({"dir": dir.display().to_string(), "files": names}),
        vec![],
    ))
}
