//! Audits and derived results over computed invariants.

mod alexander;
mod recurrence;
mod relation;

pub use alexander::{alexander_oracle, bareiss_det, normalize_alexander};
pub use recurrence::{lin_extend, torus_family, torus_spec, RecurrenceSpec};
pub use relation::{relation_numerators, v2_from_v1};

use crate::diagram::PDCode;
use crate::poly::LaurentPoly;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum RecordError {
    #[error("row {row}: {msg}")]
    Row { row: usize, msg: String },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Flag {
    Alternating,
    Tight,
    Loose,
    Thin,
    Thick,
}

impl fmt::Display for Flag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Flag::Alternating => "alternating",
            Flag::Tight => "tight",
            Flag::Loose => "loose",
            Flag::Thin => "thin",
            Flag::Thick => "thick",
        })
    }
}

impl FromStr for Flag {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Ok(match s {
            "alternating" => Flag::Alternating,
            "tight" => Flag::Tight,
            "loose" => Flag::Loose,
            "thin" => Flag::Thin,
            "thick" => Flag::Thick,
            _ => return Err(format!("unknown flag `{s}`")),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GenusStatus {
    Equality,
    Strict,
    Violation,
}

impl fmt::Display for GenusStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GenusStatus::Equality => "equality",
            GenusStatus::Strict => "strict",
            GenusStatus::Violation => "violation",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantRecord {
    pub name: String,
    pub n: u32,
    pub poly: LaurentPoly,
    pub t_span: u32,
    pub genus: Option<u32>,
    pub flags: BTreeSet<Flag>,
}

impl InvariantRecord {
    pub fn new(name: impl Into<String>, n: u32, poly: LaurentPoly) -> Self {
        let t_span = poly.t_span().unwrap_or(0);
        InvariantRecord { name: name.into(), n, poly, t_span, genus: None, flags: BTreeSet::new() }
    }

    pub fn genus_status(&self) -> Option<GenusStatus> {
        let g = self.genus?;
        Some(match self.t_span.cmp(&(4 * g)) {
            std::cmp::Ordering::Equal => GenusStatus::Equality,
            std::cmp::Ordering::Less => GenusStatus::Strict,
            std::cmp::Ordering::Greater => GenusStatus::Violation,
        })
    }

    /// Applies sidecar annotations and the tight/loose label from the Alexander degree.
    pub fn annotate(&mut self, ann: Option<&Annotation>, alexander: Option<&LaurentPoly>) {
        if let Some(a) = ann {
            self.genus = a.genus;
            if a.alternating {
                self.flags.insert(Flag::Alternating);
            }
            match a.thin {
                Some(true) => self.flags.insert(Flag::Thin),
                Some(false) => self.flags.insert(Flag::Thick),
                None => false,
            };
        }
        if let (Some(g), Some(d)) = (self.genus, alexander) {
            let span = d.t_span().unwrap_or(0);
            self.flags.insert(if span == 2 * g { Flag::Tight } else { Flag::Loose });
        }
    }
}

pub fn check_symmetry(p: &LaurentPoly) -> bool {
    p.invert_t() == *p
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpecializationReport {
    /// `p(q, q) = 1`.
    pub at_t_eq_q: bool,
    /// `p(t, 1)` equals the squared Alexander polynomial of the diagram.
    pub at_q_eq_1: bool,
}

pub fn check_specialization(p: &LaurentPoly, pd: &PDCode) -> SpecializationReport {
    let a = alexander_oracle(pd);
    SpecializationReport { at_t_eq_q: p.t_to_q().is_one(), at_q_eq_1: p.q_to_one() == &a * &a }
}

#[derive(Clone, Debug, Default)]
pub struct GenusReport {
    pub rows: Vec<(String, u32, u32, GenusStatus)>,
    pub equality: usize,
    pub strict: usize,
    pub violation: usize,
}

pub fn genus_report(records: &[InvariantRecord]) -> GenusReport {
    let mut r = GenusReport::default();
    for rec in records {
        let Some(st) = rec.genus_status() else { continue };
        match st {
            GenusStatus::Equality => r.equality += 1,
            GenusStatus::Strict => r.strict += 1,
            GenusStatus::Violation => r.violation += 1,
        }
        r.rows.push((rec.name.clone(), rec.t_span, rec.genus.unwrap(), st));
    }
    r
}

/// Mirror-folded key: the smaller canonical text of `p` and `p(t, 1/q)`.
pub fn sieve_key(p: &LaurentPoly, mirror_fold: bool) -> String {
    let a = p.to_string();
    if !mirror_fold {
        return a;
    }
    let b = p.invert_q().to_string();
    a.min(b)
}

/// Census-aware sort key: `12n364` sorts by (12, n, 364), `3_1` by (3, _, 1).
pub fn name_key(name: &str) -> (u32, String, u64, String) {
    let digits: String = name.chars().take_while(|c| c.is_ascii_digit()).collect();
    let rest = &name[digits.len()..];
    let kind: String = rest.chars().take_while(|c| !c.is_ascii_digit()).collect();
    let num: String = rest[kind.len()..].chars().take_while(|c| c.is_ascii_digit()).collect();
    (digits.parse().unwrap_or(u32::MAX), kind, num.parse().unwrap_or(u64::MAX), name.to_string())
}

/// A member of an equivalence class; `mirrored` when its value is the `q -> 1/q`
/// image of the first member's value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassMember {
    pub name: String,
    pub mirrored: bool,
}

impl fmt::Display for ClassMember {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.mirrored {
            write!(f, "{}*", self.name)
        } else {
            f.write_str(&self.name)
        }
    }
}

/// Groups records by equal value (up to mirror image); returns classes of size
/// at least two, members and classes in census order.
pub fn sieve_classes(records: &[InvariantRecord], mirror_fold: bool) -> Vec<Vec<ClassMember>> {
    let mut groups: HashMap<String, Vec<&InvariantRecord>> = HashMap::new();
    for r in records {
        groups.entry(sieve_key(&r.poly, mirror_fold)).or_default().push(r);
    }
    let mut classes: Vec<Vec<ClassMember>> = groups
        .into_values()
        .filter(|g| g.len() > 1)
        .map(|mut g| {
            g.sort_by_key(|r| name_key(&r.name));
            let first = g[0].poly.clone();
            g.iter()
                .map(|r| ClassMember { name: r.name.clone(), mirrored: r.poly != first })
                .collect()
        })
        .collect();
    classes.sort_by_key(|c| name_key(&c[0].name));
    classes
}

#[derive(Clone, Debug, Default)]
pub struct PositivityReport {
    pub checked: usize,
    pub failures: Vec<String>,
}

/// `V(t, -q)` has nonnegative coefficients, for the alternating records.
pub fn positivity_audit(records: &[InvariantRecord]) -> PositivityReport {
    let mut r = PositivityReport::default();
    for rec in records.iter().filter(|r| r.flags.contains(&Flag::Alternating)) {
        r.checked += 1;
        if !rec.poly.negate_q().coeffs_nonneg() {
            r.failures.push(rec.name.clone());
        }
    }
    r
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Annotation {
    pub genus: Option<u32>,
    pub alternating: bool,
    pub thin: Option<bool>,
}

fn parse_bool(s: &str) -> Option<bool> {
    match s.trim().to_ascii_lowercase().as_str() {
        "true" | "y" | "yes" | "1" => Some(true),
        "false" | "n" | "no" | "0" => Some(false),
        _ => None,
    }
}

/// Sidecar CSV `name,genus,alternating,thin`.
pub fn read_annotations<R: Read>(r: R) -> Result<BTreeMap<String, Annotation>, RecordError> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(r);
    let mut out = BTreeMap::new();
    for (i, row) in rdr.records().enumerate() {
        let row = row?;
        let get = |k: usize| row.get(k).unwrap_or("");
        if get(0).is_empty() {
            return Err(RecordError::Row { row: i + 2, msg: "missing name".into() });
        }
        out.insert(
            get(0).to_string(),
            Annotation {
                genus: get(1).parse().ok(),
                alternating: parse_bool(get(2)).unwrap_or(false),
                thin: parse_bool(get(3)),
            },
        );
    }
    Ok(out)
}

pub const RECORD_HEADER: [&str; 7] = ["name", "n", "polynomial", "t_span", "genus", "flags", "status"];

pub fn write_records<W: Write>(w: W, records: &[InvariantRecord]) -> Result<(), RecordError> {
    let mut wtr = csv::WriterBuilder::new().delimiter(b'\t').from_writer(w);
    wtr.write_record(RECORD_HEADER)?;
    for r in records {
        let flags: Vec<String> = r.flags.iter().map(|f| f.to_string()).collect();
        wtr.write_record([
            r.name.clone(),
            r.n.to_string(),
            r.poly.to_string(),
            r.t_span.to_string(),
            r.genus.map_or_else(|| "-".into(), |g| g.to_string()),
            if flags.is_empty() { "-".into() } else { flags.join(",") },
            r.genus_status().map_or_else(|| "-".into(), |s| s.to_string()),
        ])?;
    }
    wtr.flush()?;
    Ok(())
}

pub fn read_records<R: Read>(r: R) -> Result<Vec<InvariantRecord>, RecordError> {
    let mut rdr = csv::ReaderBuilder::new().delimiter(b'\t').comment(Some(b'#')).from_reader(r);
    let mut out = Vec::new();
    for (i, row) in rdr.records().enumerate() {
        let row = row?;
        let bad = |msg: String| RecordError::Row { row: i + 2, msg };
        if row.len() < 3 {
            return Err(bad("expected at least name, n, polynomial".into()));
        }
        let n = row[1].parse().map_err(|_| bad(format!("bad n `{}`", &row[1])))?;
        let poly: LaurentPoly = row[2].parse().map_err(|e| bad(format!("{e}")))?;
        let mut rec = InvariantRecord::new(&row[0], n, poly);
        if let Some(g) = row.get(4) {
            rec.genus = g.parse().ok();
        }
        if let Some(fl) = row.get(5).filter(|f| *f != "-" && !f.is_empty()) {
            for f in fl.split(',') {
                rec.flags.insert(f.parse().map_err(bad)?);
            }
        }
        out.push(rec);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(name: &str, p: &str) -> InvariantRecord {
        InvariantRecord::new(name, 2, p.parse().unwrap())
    }

    #[test]
    fn symmetry_examples() {
        assert!(check_symmetry(&LaurentPoly::one()));
        assert!(!check_symmetry(&"t+q".parse().unwrap()));
    }

    #[test]
    fn specialization_negative_control() {
        let r = check_specialization(&"t+q".parse().unwrap(), &PDCode::unknot());
        assert_eq!(r, SpecializationReport { at_t_eq_q: false, at_q_eq_1: false });
    }

    #[test]
    fn sieve_folds_mirrors() {
        let recs = vec![rec("12n5", "1+q*t"), rec("12n2", "1"), rec("12n10", "1+q^-1*t"), rec("12n3", "t")];
        let c = sieve_classes(&recs, true);
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].iter().map(|m| m.to_string()).collect::<Vec<_>>(), ["12n5", "12n10*"]);
        assert!(sieve_classes(&recs, false).is_empty());
    }

    #[test]
    fn genus_status() {
        let mut r = rec("3_1", "t^2+t^-2");
        r.genus = Some(1);
        assert_eq!(r.genus_status(), Some(GenusStatus::Equality));
        r.genus = Some(2);
        assert_eq!(r.genus_status(), Some(GenusStatus::Strict));
        r.genus = Some(0);
        assert_eq!(genus_report(&[r]).violation, 1);
    }

    #[test]
    fn records_roundtrip() {
        let mut a = rec("3_1", "1+t");
        a.genus = Some(1);
        a.flags.insert(Flag::Alternating);
        a.flags.insert(Flag::Thin);
        let recs = vec![a, rec("4_1", "-2*q^3")];
        let mut buf = Vec::new();
        write_records(&mut buf, &recs).unwrap();
        assert_eq!(read_records(&buf[..]).unwrap(), recs);
    }

    #[test]
    fn annotations() {
        let text = "name,genus,alternating,thin\n3_1,1,true,true\n11n34,3,false,false\n";
        let a = read_annotations(text.as_bytes()).unwrap();
        assert_eq!(a["11n34"], Annotation { genus: Some(3), alternating: false, thin: Some(false) });
    }
}
