//! One PASS/FAIL line per acceptance criterion. Criteria listed in
//! `EXPECTED_FAILURES` fail for reasons recorded with their output; the
//! test asserts that exactly those fail.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use umtl_cli::corpus::{load_algebras, pool, LoadedAlgebra};
use umtl_core::analysis::is_u_homomorphism;
use umtl_core::audit::{audit_algebra, audit_pair, published_ufilter_listing, six_element_findings, Finding};
use umtl_core::chains::l6_product_table;
use umtl_core::filters::{enumerate_ufilters, quotient, ufilters_by_subset_scan};
use umtl_core::logic::random::random_proof;
use umtl_core::logic::semantics::{check_semilinearity_condition, soundness_audit};
use umtl_core::logic::{
    check_proof, countermodel_search, deduction_transform, parse_proof, DeductionError, Formula, Goal, PoolEntry,
    SchemaCatalog, SearchOutcome,
};
use umtl_core::properties::properties_suite;
use umtl_core::quantifier::{delta_table, enumerate_quantifiers, validate_quantifier};
use umtl_core::{Elem, ElemSet, FiniteMTLAlgebra, U2Parse, UmtlAlgebra};

const VALIDATE_BUDGET: Duration = Duration::from_secs(1);
const ENUMERATION_BUDGET: Duration = Duration::from_secs(5);
const BRUTE_FORCE_MAX_SIZE: usize = 4;
const RANDOM_PROOF_TARGET: usize = 24;
const ROUND_TRIPS_REQUIRED: usize = 20;
const SEED_LIMIT: u64 = 100;
const SEARCH_MAX_VARS: usize = 6;
const EXPECTED_FAILURES: [u32; 1] = [5];

/// Checks whose agreement the theorem-audit criterion requires.
const THEOREM_CHECKS: [&str; 8] = [
    "minimal-primes",
    "filter-congruence-correspondence",
    "representability-conditions",
    "strong-iff-representable",
    "maximality-criterion",
    "simplicity-conditions",
    "quotient-simple-iff-maximal",
    "semisimple-decomposition",
];

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn corpus_dir() -> PathBuf {
    root().join("corpus")
}

fn corpus_file(name: &str) -> String {
    corpus_dir().join(name).display().to_string()
}

struct Corpus {
    algebras: Vec<LoadedAlgebra>,
    pool: Vec<PoolEntry>,
}

fn load() -> Corpus {
    let (algebras, _) = load_algebras(Some(&corpus_dir())).unwrap();
    let pool = pool(&algebras, U2Parse::Standard).unwrap();
    Corpus { algebras, pool }
}

fn six(c: &Corpus, ident: &str) -> UmtlAlgebra {
    c.pool.iter().find(|p| p.name == ident).unwrap().algebra.clone()
}

type Verdict = (bool, String);

fn criterion_1() -> Verdict {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_umtl"))
        .args(["validate", &corpus_file("l6-delta.alg")])
        .output()
        .unwrap();
    let elapsed = start.elapsed();
    let stdout = String::from_utf8_lossy(&out.stdout);
    let (algebras, _) = load_algebras(Some(Path::new(&corpus_file("l6.alg")))).unwrap();
    let a = &algebras[0].algebra;
    let rescan = FiniteMTLAlgebra::validate(a.size(), &a.odot_rows(), &a.arrow_rows(), a.top()).is_ok();
    let delta = validate_quantifier(a, &delta_table(a), U2Parse::Standard).is_ok();
    let ok = out.status.code() == Some(0)
        && stdout.starts_with("MTL-algebra: valid")
        && rescan
        && delta
        && elapsed < VALIDATE_BUDGET;
    (
        ok,
        format!("axioms {rescan}, delta quantifier {delta}, {elapsed:.2?} (budget {VALIDATE_BUDGET:?})"),
    )
}

fn criterion_2(c: &Corpus) -> Verdict {
    let mut mismatches = Vec::new();
    let mut checked = 0;
    for l in c.algebras.iter().filter(|l| l.algebra.size() <= BRUTE_FORCE_MAX_SIZE) {
        let a = &l.algebra;
        let n = a.size();
        let enumerated: Vec<Vec<Elem>> = enumerate_quantifiers(a, U2Parse::Standard)
            .iter()
            .map(|u| u.table().to_vec())
            .collect();
        let mut scanned = Vec::new();
        for k in 0..n.pow(n as u32) {
            let t: Vec<Elem> = (0..n).rev().map(|i| (k / n.pow(i as u32)) % n).collect();
            if validate_quantifier(a, &t, U2Parse::Standard).is_ok() {
                scanned.push(t);
            }
        }
        checked += 1;
        if enumerated != scanned {
            mismatches.push(l.doc.ident.clone());
        }
    }
    let l6 = &c.algebras.iter().find(|l| l.doc.ident == "l6").unwrap().algebra;
    let start = Instant::now();
    let found = enumerate_quantifiers(l6, U2Parse::Standard).len();
    let elapsed = start.elapsed();
    (
        mismatches.is_empty() && checked > 0 && elapsed < ENUMERATION_BUDGET,
        format!(
            "{checked} algebras of size <= {BRUTE_FORCE_MAX_SIZE} match the scan of all maps{}; \
             six-element enumeration found {found} in {elapsed:.2?} (budget {ENUMERATION_BUDGET:?})",
            if mismatches.is_empty() {
                String::new()
            } else {
                format!(", mismatches {mismatches:?}")
            }
        ),
    )
}

fn criterion_3(c: &Corpus) -> Verdict {
    let violations: Vec<String> = c
        .pool
        .iter()
        .flat_map(|p| {
            properties_suite(&p.algebra)
                .failures()
                .map(|f| format!("{}: {f:?}", p.name))
                .collect::<Vec<_>>()
        })
        .collect();
    (
        violations.is_empty(),
        format!("{} pairs, {} violations {violations:?}", c.pool.len(), violations.len()),
    )
}

fn criterion_4(c: &Corpus) -> Verdict {
    let delta = six(c, "l6-delta");
    let product = six(c, "l6-product");
    let a = product.algebra();
    let by_definition: Vec<ElemSet> = (0..1u64 << a.size())
        .map(ElemSet::from_bits)
        .filter(|&s| {
            s.contains(a.top())
                && s.iter().all(|x| a.elements().all(|y| !a.le(x, y) || s.contains(y)))
                && s.iter().all(|x| s.iter().all(|y| s.contains(a.odot(x, y))))
                && s.iter().all(|x| s.contains(product.forall(x)))
        })
        .collect();
    let enumerated = enumerate_ufilters(&product);
    let scan = ufilters_by_subset_scan(&product).unwrap();
    let findings = six_element_findings(&delta, &product, &c.pool);
    let listing = |subject: &str| {
        findings
            .iter()
            .find(|f| f.subject == subject && f.check == "published-ufilter-listing")
            .map(|f| f.agree)
    };
    let ok = enumerated == by_definition
        && scan == by_definition
        && product.quantifier().table() == l6_product_table()
        && enumerated == published_ufilter_listing()
        && listing("l6-product") == Some(true)
        && listing("l6-delta") == Some(false)
        && enumerate_ufilters(&delta) == [ElemSet::singleton(a.top()), a.carrier()];
    (
        ok,
        format!(
            "{} U-filters match the subset oracle; listing fits the product quantifier {:?}, delta {:?}",
            enumerated.len(),
            listing("l6-product"),
            listing("l6-delta")
        ),
    )
}

fn criterion_5(c: &Corpus) -> Verdict {
    let mut findings: Vec<(bool, Finding)> = Vec::new();
    for l in &c.algebras {
        let imtl = l.algebra.classify().imtl;
        findings.extend(
            audit_algebra(&l.doc.ident, &l.algebra, U2Parse::Standard)
                .into_iter()
                .map(|f| (imtl, f)),
        );
    }
    for p in &c.pool {
        let imtl = p.algebra.algebra().classify().imtl;
        findings.extend(audit_pair(&p.name, &p.algebra).into_iter().map(|f| (imtl, f)));
    }
    let relevant: Vec<&(bool, Finding)> = findings
        .iter()
        .filter(|(_, f)| THEOREM_CHECKS.contains(&f.check))
        .collect();
    let involutive_bad: Vec<String> = relevant
        .iter()
        .filter(|(imtl, f)| *imtl && !f.agree)
        .map(|(_, f)| format!("{} {}: {}", f.check, f.subject, f.detail))
        .collect();
    let unwitnessed = relevant
        .iter()
        .filter(|(imtl, f)| !imtl && !f.agree && !f.detail.contains("fails at"))
        .count();
    let mut detail = format!(
        "{} findings, {} involutive disagreements, {unwitnessed} unwitnessed elsewhere",
        relevant.len(),
        involutive_bad.len()
    );
    for line in &involutive_bad {
        detail.push_str("\n    ");
        detail.push_str(line);
    }
    if !involutive_bad.is_empty() {
        detail.push_str(
            "\n    each is simple by definition yet fixes more than 0 and 1, so the fixpoint condition \
             is not equivalent to the others",
        );
    }
    (involutive_bad.is_empty() && unwitnessed == 0, detail)
}

fn criterion_6(c: &Corpus) -> Verdict {
    let mut checked = 0;
    let mut bad = Vec::new();
    for p in &c.pool {
        let q = &p.algebra;
        let a = q.algebra();
        for f in enumerate_ufilters(q).into_iter().filter(|&f| f != a.carrier()) {
            checked += 1;
            let ok = quotient(q, f).is_ok_and(|r| {
                let b = r.quotient.algebra();
                FiniteMTLAlgebra::validate(b.size(), &b.odot_rows(), &b.arrow_rows(), b.top()).is_ok()
                    && validate_quantifier(b, r.quotient.quantifier().table(), U2Parse::Standard).is_ok()
                    && is_u_homomorphism(&r.class_map, q, &r.quotient).is_ok()
            });
            if !ok {
                bad.push(format!("{} / {f:?}", p.name));
            }
        }
    }
    (bad.is_empty(), format!("{checked} proper U-filters, failures {bad:?}"))
}

fn criterion_7(c: &Corpus) -> Verdict {
    let catalog = SchemaCatalog::mmtl(U2Parse::Standard);
    let mut proofs: Vec<PathBuf> = fs::read_dir(root().join("proofs"))
        .unwrap()
        .map(|e| e.unwrap().path())
        .collect();
    proofs.sort();
    let checked = proofs
        .iter()
        .filter(|p| {
            let proof = parse_proof(&fs::read_to_string(p).unwrap()).unwrap();
            check_proof(&catalog, &proof).is_ok()
        })
        .count();
    let bundled_ok = proofs.len() == 7 && checked == 7;

    let mut round_trips = 0;
    let mut refused = Vec::new();
    let mut broken = Vec::new();
    for seed in 0..SEED_LIMIT {
        if round_trips == ROUND_TRIPS_REQUIRED {
            break;
        }
        let r = random_proof(&catalog, seed, RANDOM_PROOF_TARGET);
        let Ok(beta) = check_proof(&catalog, &r.proof) else {
            broken.push(seed);
            continue;
        };
        match deduction_transform(&catalog, &r.proof, &r.discharged) {
            Ok(d) => {
                let expected = Formula::imp(Formula::boxed(r.discharged.clone()), beta.clone());
                if d.conclusion == expected && check_proof(&catalog, &d.proof).is_ok_and(|g| *g == expected) {
                    round_trips += 1;
                } else {
                    broken.push(seed);
                }
            }
            Err(DeductionError::ContractionRequired { .. }) => refused.push(seed),
            Err(_) => broken.push(seed),
        }
    }

    let goal = Goal::parse("p0 -> box p0").unwrap();
    let counter = match countermodel_search(&goal, &c.pool, SEARCH_MAX_VARS).unwrap() {
        SearchOutcome::Countermodel {
            index,
            name,
            valuation,
            labels,
        } => {
            let q = &c.pool[index].algebra;
            let three_chain_delta = q.algebra().size() == 3 && q.quantifier().table() == delta_table(q.algebra());
            let middle = valuation == [1];
            (
                three_chain_delta && middle,
                format!("{name} at p0={}", labels.join(",")),
            )
        }
        SearchOutcome::Exhausted { .. } => (false, "none".to_string()),
    };
    let soundness = soundness_audit(&catalog, &c.pool);
    let ok = bundled_ok && round_trips == ROUND_TRIPS_REQUIRED && broken.is_empty() && counter.0 && soundness.sound;
    (
        ok,
        format!(
            "{checked}/{} bundled proofs check; {round_trips} deduction round trips (refused seeds {refused:?}, \
             broken {broken:?}); countermodel {}; soundness on {} members {}",
            proofs.len(),
            counter.1,
            soundness.algebras,
            soundness.sound
        ),
    )
}

fn criterion_8(c: &Corpus) -> Verdict {
    let mut representable = 0;
    let mut bad = Vec::new();
    for p in &c.pool {
        if umtl_core::analysis::is_representable(&p.algebra).representable {
            representable += 1;
            if !check_semilinearity_condition(&p.algebra).holds {
                bad.push(p.name.clone());
            }
        }
    }
    let delta = six(c, "l6-delta");
    let product = six(c, "l6-product");
    let v = check_semilinearity_condition(&delta);
    let witness = v.witness.clone().unwrap_or_default();
    let delta_ok = !v.holds && witness.len() == 2;
    let small: Vec<PoolEntry> = c
        .pool
        .iter()
        .filter(|p| p.algebra.algebra().size() <= 6)
        .cloned()
        .collect();
    let findings = six_element_findings(&delta, &product, &small);
    let claim = findings.iter().find(|f| f.check == "disjunction-rule-claim");
    let search = findings.iter().find(|f| f.check == "disjunction-rule-countermodel");
    let names: Vec<&str> = witness.iter().map(|&x| delta.algebra().name(x)).collect();
    (
        bad.is_empty() && delta_ok && claim.is_some() && search.is_some(),
        format!(
            "{representable} representable members, condition fails on {bad:?}; delta pairing fails at ({}); \
             claim {}; search {}",
            names.join(", "),
            claim.map_or("missing".to_string(), |f| f.detail.clone()),
            search.map_or("missing".to_string(), |f| f.detail.clone())
        ),
    )
}

fn criterion_9() -> Verdict {
    let dir = tempfile::tempdir().unwrap();
    let out = |name: &str| dir.path().join(name).display().to_string();
    let corpus = corpus_dir().display().to_string();
    let proof = root().join("proofs/box-mp.proof").display().to_string();
    let l6 = corpus_file("l6.alg");
    let product = corpus_file("l6-product.alg");
    let commands: Vec<Vec<String>> = [
        vec!["validate", &l6],
        vec!["classify", &l6],
        vec!["quantifiers", "enum", &l6],
        vec!["quantifiers", "check", &product],
        vec!["filters", &product, "--kind", "all"],
        vec!["quotient", &product, "--filter", "d,1"],
        vec!["analyze", &l6, "--forall", "delta"],
        vec!["audit", &corpus],
        vec!["prove", "check", &proof],
        vec!["prove", "deduce", &proof, "--discharge", "h1"],
        vec!["logic", "valid", "box p0 -> p0", "--pool", &corpus],
        vec!["logic", "countermodel", "p0 -> box p0", "--pool", &corpus],
        vec!["export", "dot", &product, "--what", "ufilters"],
        vec!["corpus", "write", &out("written")],
    ]
    .into_iter()
    .map(|c| c.into_iter().map(str::to_string).collect())
    .collect();
    let mut differing = Vec::new();
    for (i, cmd) in commands.iter().enumerate() {
        let reports: Vec<Vec<u8>> = ["1", "8"]
            .iter()
            .map(|jobs| {
                let path = out(&format!("{i}-{jobs}.json"));
                Command::new(env!("CARGO_BIN_EXE_umtl"))
                    .args(["--jobs", jobs, "--json", &path])
                    .args(cmd)
                    .output()
                    .unwrap();
                fs::read(&path).unwrap_or_default()
            })
            .collect();
        if reports[0].is_empty() || reports[0] != reports[1] {
            differing.push(cmd.join(" "));
        }
    }
    (
        differing.is_empty(),
        format!("{} commands, differing {differing:?}", commands.len()),
    )
}

#[test]
fn acceptance() {
    let c = load();
    let verdicts: Vec<(u32, Verdict)> = vec![
        (1, criterion_1()),
        (2, criterion_2(&c)),
        (3, criterion_3(&c)),
        (4, criterion_4(&c)),
        (5, criterion_5(&c)),
        (6, criterion_6(&c)),
        (7, criterion_7(&c)),
        (8, criterion_8(&c)),
        (9, criterion_9()),
    ];
    let mut failed = Vec::new();
    for (n, (ok, detail)) in &verdicts {
        let line = format!("criterion {n}: {} {detail}\n", if *ok { "PASS" } else { "FAIL" });
        std::io::stderr().write_all(line.as_bytes()).unwrap();
        if !ok {
            failed.push(*n);
        }
    }
    assert_eq!(
        failed, EXPECTED_FAILURES,
        "failing criteria differ from the recorded set"
    );
}
