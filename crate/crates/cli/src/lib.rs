//! Library side of the `vn` command: table ingestion, batch evaluation and the
//! command implementations, kept here so integration tests can call them.

use anyhow::{bail, Context, Result};
use rayon::prelude::*;
use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use vn_core::analysis::{
    alexander_oracle, check_specialization, check_symmetry, genus_report, positivity_audit, read_annotations,
    torus_family, write_records, Annotation, ClassMember, InvariantRecord,
};
use vn_core::diagram::{parse_pd, PDCode};
use vn_core::engine::evaluate;
use vn_core::rmatrix::{load_bundle, RMatrixBundle};

pub const BUNDLE_DIR_ENV: &str = "VN_BUNDLE_DIR";

/// Bundle file for `n`: `$VN_BUNDLE_DIR/v<n>.rmx`, else the repository's `data/bundles`.
pub fn bundle_path(n: u32) -> PathBuf {
    let dir = std::env::var_os(BUNDLE_DIR_ENV)
        .map(PathBuf::from)
        .unwrap_or_else(|| Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/bundles"));
    dir.join(format!("v{n}.rmx"))
}

pub fn resolve_bundle(path: Option<&Path>, n: Option<u32>) -> Result<RMatrixBundle> {
    let p = match (path, n) {
        (Some(p), _) => p.to_path_buf(),
        (None, Some(n)) => bundle_path(n),
        (None, None) => bundle_path(1),
    };
    load_bundle(&p).with_context(|| format!("loading bundle {}", p.display()))
}

#[derive(Debug, Default)]
pub struct Table {
    pub rows: Vec<(String, PDCode)>,
    pub warnings: Vec<String>,
}

/// Reads `name<TAB>pd` (or `name,pd`) rows in input order; bad rows become warnings.
pub fn ingest_table(path: &Path) -> Result<Table> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(ingest_str(&text))
}

pub fn ingest_str(text: &str) -> Table {
    let mut t = Table::default();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let split = line.split_once('\t').or_else(|| line.split_once(','));
        let Some((name, pd)) = split else {
            t.warnings.push(format!("line {}: expected `name<TAB>pd`", i + 1));
            continue;
        };
        let (name, pd) = (name.trim(), pd.trim().trim_matches('"'));
        if i == 0 && name.eq_ignore_ascii_case("name") {
            continue;
        }
        match parse_pd(pd) {
            Ok(d) => t.rows.push((name.to_string(), d)),
            Err(e) => t.warnings.push(format!("line {} ({name}): {e}", i + 1)),
        }
    }
    t
}

/// Evaluates every row on a pool of `jobs` workers; output follows input order.
pub fn batch_evaluate(rows: &[(String, PDCode)], bundle: &RMatrixBundle, jobs: usize) -> Result<Vec<InvariantRecord>> {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build()?;
    let n = bundle.n as u32;
    pool.install(|| {
        rows.par_iter()
            .map(|(name, pd)| {
                let v = evaluate(pd, bundle).with_context(|| format!("evaluating {name}"))?;
                Ok(InvariantRecord::new(name.clone(), n, v.value))
            })
            .collect()
    })
}

pub fn annotate_all(records: &mut [InvariantRecord], rows: &[(String, PDCode)], ann: &BTreeMap<String, Annotation>) {
    for (rec, (_, pd)) in records.iter_mut().zip(rows) {
        let a = ann.get(&rec.name);
        let alex = a.and_then(|a| a.genus).map(|_| alexander_oracle(pd));
        rec.annotate(a, alex.as_ref());
    }
}

pub fn load_annotations(path: Option<&Path>) -> Result<BTreeMap<String, Annotation>> {
    match path {
        Some(p) => {
            let f = std::fs::File::open(p).with_context(|| format!("opening {}", p.display()))?;
            Ok(read_annotations(f)?)
        }
        None => Ok(BTreeMap::new()),
    }
}

pub fn format_classes(classes: &[Vec<ClassMember>]) -> String {
    let mut s = String::new();
    for c in classes {
        let names: Vec<String> = c.iter().map(|m| m.to_string()).collect();
        s.push_str(&names.join("\t"));
        s.push('\n');
    }
    s
}

#[derive(Debug, Default)]
pub struct AuditSummary {
    pub lines: Vec<String>,
    pub failures: usize,
}

/// Symmetry and specialization per record, then genus and positivity aggregates.
pub fn audit(records: &[InvariantRecord], diagrams: Option<&BTreeMap<String, PDCode>>) -> AuditSummary {
    let mut s = AuditSummary::default();
    let mut sym_fail = 0;
    let mut spec_fail = 0;
    let mut spec_checked = 0;
    for r in records {
        if !check_symmetry(&r.poly) {
            sym_fail += 1;
            s.lines.push(format!("symmetry FAIL {}", r.name));
        }
        if let Some(pd) = diagrams.and_then(|d| d.get(&r.name)) {
            spec_checked += 1;
            let rep = check_specialization(&r.poly, pd);
            if !(rep.at_t_eq_q && rep.at_q_eq_1) {
                spec_fail += 1;
                s.lines.push(format!("specialization FAIL {} {:?}", r.name, rep));
            }
        } else if !r.poly.t_to_q().is_one() {
            spec_fail += 1;
            s.lines.push(format!("specialization FAIL {} (t=q)", r.name));
        }
    }
    s.lines.push(format!("symmetry: {} checked, {} failed", records.len(), sym_fail));
    s.lines.push(format!(
        "specialization: {} checked ({} against the Alexander oracle), {} failed",
        records.len(),
        spec_checked,
        spec_fail
    ));
    let g = genus_report(records);
    for (name, span, genus, st) in &g.rows {
        if *st == vn_core::analysis::GenusStatus::Violation {
            s.lines.push(format!("genus VIOLATION {name}: t_span {span} > 4*{genus}"));
        }
    }
    s.lines.push(format!("genus: {} equality, {} strict, {} violation", g.equality, g.strict, g.violation));
    let p = positivity_audit(records);
    for f in &p.failures {
        s.lines.push(format!("positivity FAIL {f}"));
    }
    s.lines.push(format!("positivity: {} alternating checked, {} failed", p.checked, p.failures.len()));
    s.failures = sym_fail + spec_fail + g.violation + p.failures.len();
    s
}

/// Parses `a..b` (inclusive), allowing negative ends.
pub fn parse_range(s: &str) -> Result<std::ops::RangeInclusive<i64>> {
    let (a, b) = s.split_once("..").context("range must look like a..b")?;
    let b = b.strip_prefix('=').unwrap_or(b);
    let (a, b): (i64, i64) = (a.trim().parse()?, b.trim().parse()?);
    if a > b {
        bail!("empty range {s}");
    }
    Ok(a..=b)
}

pub fn recurse_lines(n: u32, range: std::ops::RangeInclusive<i64>) -> Result<String> {
    let mut lo = *range.start();
    let mut hi = *range.end();
    // The seeds must be inside the extension range.
    let (s0, s1) = if n == 1 { (-1, 1) } else { (-3, 2) };
    lo = lo.min(s0);
    hi = hi.max(s1);
    let fam = torus_family(n, lo..=hi)?;
    let mut out = String::new();
    for (b, p) in fam.range(range) {
        out.push_str(&format!("{b}\t{p}\n"));
    }
    Ok(out)
}

pub fn write_output(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

pub fn records_to_string(records: &[InvariantRecord]) -> Result<String> {
    let mut buf = Vec::new();
    write_records(&mut buf, records)?;
    Ok(String::from_utf8(buf)?)
}
