//! R-matrix bundles: crossing tensors, curl operator, file format and checks.
//!
//! File format (line oriented, `#` starts a comment):
//!
//! ```text
//! VN-BUNDLE n=1 dim=4 convention=legs:sw,se,nw,ne;rpos-right-handed [exponent_divisor=2]
//! CURL
//! 1 : 1*t^0*q^0
//! RPOS
//! 1 2 2 1 : 1*t^-1*q^0
//! RNEG
//! ...
//! ```
//!
//! Tensor lines `i j k l` are 1-based indices on the legs SW, SE, NW, NE: the
//! inputs are the two bottom legs and the outputs the two top legs.

use crate::poly::{LaurentPoly, PolyError};
use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum BundleError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: index {index} out of range 1..={dim}")]
    IndexRange { line: usize, index: usize, dim: usize },
    #[error("missing section {0}")]
    MissingSection(&'static str),
    #[error("missing or malformed header")]
    Header,
    #[error("curl entry {0} is not an invertible monomial")]
    Curl(usize),
    #[error("line {line}: {source}")]
    Poly { line: usize, source: PolyError },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Input pair -> list of (output pair, entry).
pub type Columns<'a> = HashMap<(u8, u8), Vec<((u8, u8), &'a LaurentPoly)>>;

/// Entries keyed by 0-based `[sw, se, nw, ne]`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SparseTensor4 {
    pub dim: usize,
    pub entries: BTreeMap<[u8; 4], LaurentPoly>,
}

impl SparseTensor4 {
    pub fn new(dim: usize) -> Self {
        SparseTensor4 { dim, entries: BTreeMap::new() }
    }

    pub fn get(&self, k: [u8; 4]) -> Option<&LaurentPoly> {
        self.entries.get(&k)
    }

    pub fn insert(&mut self, k: [u8; 4], v: LaurentPoly) {
        if v.is_zero() {
            self.entries.remove(&k);
        } else {
            self.entries.insert(k, v);
        }
    }

    /// Column view: input pair -> list of (output pair, entry).
    pub fn columns(&self) -> Columns<'_> {
        let mut cols: Columns<'_> = HashMap::new();
        for (k, v) in &self.entries {
            cols.entry((k[0], k[1])).or_default().push(((k[2], k[3]), v));
        }
        cols
    }

    pub fn identity(dim: usize) -> Self {
        let mut t = Self::new(dim);
        for i in 0..dim as u8 {
            for j in 0..dim as u8 {
                t.insert([i, j, i, j], LaurentPoly::one());
            }
        }
        t
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RMatrixBundle {
    pub n: usize,
    pub dim: usize,
    pub r_pos: SparseTensor4,
    pub r_neg: SparseTensor4,
    /// Diagonal curl for one counterclockwise turn, as unit monomials.
    pub curl: Vec<LaurentPoly>,
    pub convention: String,
    /// Exponents of evaluated invariants are divided by this.
    pub exponent_divisor: i32,
}

pub fn load_bundle(path: impl AsRef<Path>) -> Result<RMatrixBundle, BundleError> {
    parse_bundle(&std::fs::read_to_string(path)?)
}

pub fn parse_bundle(text: &str) -> Result<RMatrixBundle, BundleError> {
    let mut header: Option<(usize, usize, String, i32)> = None;
    let mut section: Option<&'static str> = None;
    let mut curl: BTreeMap<usize, LaurentPoly> = BTreeMap::new();
    let mut tensors = [None, None];
    let mut seen = [false; 3];
    for (ln, raw) in text.lines().enumerate() {
        let line_no = ln + 1;
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let syntax = |msg: &str| BundleError::Syntax { line: line_no, msg: msg.to_string() };
        if line.starts_with("VN-BUNDLE") {
            let mut n = None;
            let mut dim = None;
            let mut conv = String::new();
            let mut div = 1;
            for tok in line.split_whitespace().skip(1) {
                let (k, v) = tok.split_once('=').ok_or_else(|| syntax("header fields are key=value"))?;
                match k {
                    "n" => n = v.parse().ok(),
                    "dim" => dim = v.parse().ok(),
                    "convention" => conv = v.to_string(),
                    "exponent_divisor" => div = v.parse().map_err(|_| syntax("bad exponent_divisor"))?,
                    _ => return Err(syntax(&format!("unknown header field `{k}`"))),
                }
            }
            match (n, dim) {
                (Some(n), Some(d)) if d > 0 && d <= 16 && div > 0 => header = Some((n, d, conv, div)),
                _ => return Err(syntax("header needs n=<int> dim=<1..16>")),
            }
            continue;
        }
        let dim = header.as_ref().ok_or(BundleError::Header)?.1;
        match line {
            "CURL" => {
                section = Some("CURL");
                seen[0] = true;
                continue;
            }
            "RPOS" => {
                section = Some("RPOS");
                seen[1] = true;
                tensors[0].get_or_insert_with(|| SparseTensor4::new(dim));
                continue;
            }
            "RNEG" => {
                section = Some("RNEG");
                seen[2] = true;
                tensors[1].get_or_insert_with(|| SparseTensor4::new(dim));
                continue;
            }
            _ => {}
        }
        let (lhs, rhs) = line.split_once(':').ok_or_else(|| syntax("expected `indices : poly`"))?;
        let poly: LaurentPoly = rhs.trim().parse().map_err(|e| BundleError::Poly { line: line_no, source: e })?;
        let idx: Vec<usize> = lhs
            .split_whitespace()
            .map(|s| s.parse::<usize>().map_err(|_| syntax(&format!("bad index `{s}`"))))
            .collect::<Result<_, _>>()?;
        for &i in &idx {
            if i == 0 || i > dim {
                return Err(BundleError::IndexRange { line: line_no, index: i, dim });
            }
        }
        match section {
            Some("CURL") => {
                if idx.len() != 1 {
                    return Err(syntax("CURL lines take one index"));
                }
                curl.insert(idx[0] - 1, poly);
            }
            Some(s) => {
                if idx.len() != 4 {
                    return Err(syntax("tensor lines take four indices"));
                }
                let k = [idx[0] as u8 - 1, idx[1] as u8 - 1, idx[2] as u8 - 1, idx[3] as u8 - 1];
                let t = tensors[if s == "RPOS" { 0 } else { 1 }].as_mut().unwrap();
                t.insert(k, poly);
            }
            None => return Err(syntax("data line before any section")),
        }
    }
    let (n, dim, convention, exponent_divisor) = header.ok_or(BundleError::Header)?;
    for (s, name) in seen.iter().zip(["CURL", "RPOS", "RNEG"]) {
        if !s {
            return Err(BundleError::MissingSection(name));
        }
    }
    let mut curl_vec = Vec::with_capacity(dim);
    for i in 0..dim {
        let c = curl.remove(&i).ok_or(BundleError::Curl(i + 1))?;
        if c.as_unit_monomial().is_none() {
            return Err(BundleError::Curl(i + 1));
        }
        curl_vec.push(c);
    }
    let [p, m] = tensors;
    Ok(RMatrixBundle {
        n,
        dim,
        r_pos: p.unwrap(),
        r_neg: m.unwrap(),
        curl: curl_vec,
        convention,
        exponent_divisor,
    })
}

pub fn serialize_bundle(b: &RMatrixBundle) -> String {
    let mut s = String::new();
    let conv = if b.convention.is_empty() { "none" } else { &b.convention };
    write!(s, "VN-BUNDLE n={} dim={} convention={}", b.n, b.dim, conv).unwrap();
    if b.exponent_divisor != 1 {
        write!(s, " exponent_divisor={}", b.exponent_divisor).unwrap();
    }
    s.push('\n');
    s.push_str("CURL\n");
    for (i, c) in b.curl.iter().enumerate() {
        writeln!(s, "{} : {}", i + 1, c).unwrap();
    }
    for (name, t) in [("RPOS", &b.r_pos), ("RNEG", &b.r_neg)] {
        writeln!(s, "{name}").unwrap();
        for (k, v) in &t.entries {
            writeln!(s, "{} {} {} {} : {}", k[0] + 1, k[1] + 1, k[2] + 1, k[3] + 1, v).unwrap();
        }
    }
    s
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VerifyMode {
    Full,
    Sampled,
}

#[derive(Clone, Debug, Default)]
pub struct VerifyReport {
    /// First violating (output, input) index pair of `r_pos * r_neg = id`.
    pub inverse_violation: Option<([u8; 2], [u8; 2])>,
    pub ybe_checked: usize,
    /// First basis input where the braid relation fails.
    pub ybe_violation: Option<[u8; 3]>,
    /// Values of the kink unknots that are not 1.
    pub kink_failures: Vec<(String, LaurentPoly)>,
}

impl VerifyReport {
    pub fn ok(&self) -> bool {
        self.inverse_violation.is_none() && self.ybe_violation.is_none() && self.kink_failures.is_empty()
    }
}

/// Product `a * b` of tensors as `d^2 x d^2` matrices from inputs to outputs.
pub fn compose(a: &SparseTensor4, b: &SparseTensor4) -> SparseTensor4 {
    let cols_a = a.columns();
    let mut out = SparseTensor4::new(a.dim);
    let mut acc: BTreeMap<[u8; 4], LaurentPoly> = BTreeMap::new();
    for (kb, vb) in &b.entries {
        if let Some(col) = cols_a.get(&(kb[2], kb[3])) {
            for &((k, l), va) in col {
                acc.entry([kb[0], kb[1], k, l]).or_default().add_assign_ref(&(va * vb));
            }
        }
    }
    for (k, v) in acc {
        out.insert(k, v);
    }
    out
}

pub fn check_inverse(p: &SparseTensor4, m: &SparseTensor4) -> Option<([u8; 2], [u8; 2])> {
    let prod = compose(p, m);
    let d = p.dim as u8;
    for i in 0..d {
        for j in 0..d {
            for k in 0..d {
                for l in 0..d {
                    let want = (i, j) == (k, l);
                    let ok = match prod.get([i, j, k, l]) {
                        Some(v) => want && v.is_one(),
                        None => !want,
                    };
                    if !ok {
                        return Some(([k, l], [i, j]));
                    }
                }
            }
        }
    }
    None
}

type Vec3 = HashMap<[u8; 3], LaurentPoly>;

fn apply_at(cols: &Columns<'_>, v: &Vec3, pos: usize) -> Vec3 {
    let mut out: Vec3 = HashMap::new();
    for (k, c) in v {
        if let Some(col) = cols.get(&(k[pos], k[pos + 1])) {
            for &((a, b), r) in col {
                let mut nk = *k;
                nk[pos] = a;
                nk[pos + 1] = b;
                out.entry(nk).or_default().add_assign_ref(&(r * c));
            }
        }
    }
    out.retain(|_, p| !p.is_zero());
    out
}

/// Checks `R1 R2 R1 = R2 R1 R2` on basis vectors; returns (checked, first failure).
pub fn check_ybe(r: &SparseTensor4, mode: VerifyMode) -> (usize, Option<[u8; 3]>) {
    let cols = r.columns();
    let d = r.dim as u8;
    let mut inputs = Vec::new();
    for a in 0..d {
        for b in 0..d {
            for c in 0..d {
                inputs.push([a, b, c]);
            }
        }
    }
    if mode == VerifyMode::Sampled && d >= 8 {
        // A fixed stride coprime to d^3 visits a spread of index triples.
        let total = inputs.len();
        inputs = (0..total.min(96)).map(|i| inputs[(i * 37 + 5) % total]).collect();
    }
    for (n, &x) in inputs.iter().enumerate() {
        let v: Vec3 = HashMap::from([(x, LaurentPoly::one())]);
        let lhs = apply_at(&cols, &apply_at(&cols, &apply_at(&cols, &v, 0), 1), 0);
        let rhs = apply_at(&cols, &apply_at(&cols, &apply_at(&cols, &v, 1), 0), 1);
        if lhs != rhs {
            return (n + 1, Some(x));
        }
    }
    (inputs.len(), None)
}

pub fn verify_bundle(b: &RMatrixBundle, mode: VerifyMode) -> VerifyReport {
    let mut report = VerifyReport { inverse_violation: check_inverse(&b.r_pos, &b.r_neg), ..Default::default() };
    if report.inverse_violation.is_none() {
        report.inverse_violation = check_inverse(&b.r_neg, &b.r_pos);
    }
    let mode = if b.dim <= 4 { VerifyMode::Full } else { mode };
    let (n, v) = check_ybe(&b.r_pos, mode);
    report.ybe_checked = n;
    report.ybe_violation = v;
    for pd in KINKS {
        let d = crate::diagram::parse_pd(pd).expect("kink PD");
        match crate::engine::evaluate_all_long(&d, b) {
            Ok(vals) => {
                for v in vals {
                    if !v.is_one() {
                        report.kink_failures.push((pd.to_string(), v));
                        break;
                    }
                }
            }
            Err(e) => report.kink_failures.push((format!("{pd}: {e}"), LaurentPoly::zero())),
        }
    }
    report
}

/// One-crossing unknots with both kink signs and both loop sides.
pub const KINKS: [&str; 4] = ["PD[X[1,1,2,2]]", "PD[X[2,1,1,2]]", "PD[X[1,2,2,1]]", "PD[X[2,2,1,1]]"];

#[cfg(test)]
mod tests {
    use super::*;

    const SMALL: &str = "\
# comment
VN-BUNDLE n=1 dim=2 convention=test
CURL
1 : 1
2 : -1*q^2
RPOS
1 1 1 1 : 1
RNEG
";

    #[test]
    fn parse_and_roundtrip() {
        let b = parse_bundle(SMALL).unwrap();
        assert_eq!(b.dim, 2);
        assert_eq!(b.r_pos.entries.len(), 1);
        assert!(b.r_neg.entries.is_empty());
        let s = serialize_bundle(&b);
        assert_eq!(parse_bundle(&s).unwrap(), b);
        assert_eq!(serialize_bundle(&parse_bundle(&s).unwrap()), s);
        assert!(s.ends_with("RNEG\n"));
    }

    #[test]
    fn structured_errors() {
        let truncated = &SMALL[..SMALL.find("RPOS").unwrap()];
        assert!(matches!(parse_bundle(truncated), Err(BundleError::MissingSection("RPOS"))));
        let bad = SMALL.replace("1 1 1 1 : 1", "1 3 1 1 : 1");
        assert!(matches!(parse_bundle(&bad), Err(BundleError::IndexRange { line: 7, .. })));
        let bad = SMALL.replace("2 : -1*q^2", "2 : 2*q^2");
        assert!(matches!(parse_bundle(&bad), Err(BundleError::Curl(2))));
        let bad = SMALL.replace("1 1 1 1 : 1", "1 1 1 1 : t^");
        assert!(matches!(parse_bundle(&bad), Err(BundleError::Poly { line: 7, .. })));
    }

    #[test]
    fn identity_controls() {
        let id = SparseTensor4::identity(3);
        assert!(check_inverse(&id, &id).is_none());
        assert_eq!(check_ybe(&id, VerifyMode::Full), (27, None));
        let mut bad = id.clone();
        bad.insert([0, 1, 0, 1], LaurentPoly::q());
        assert_eq!(check_inverse(&bad, &id), Some(([0, 1], [0, 1])));
    }
}
