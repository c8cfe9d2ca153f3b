//! Planar knot diagrams: PD codes, long diagrams with rotation numbers, satellites.

mod builder;
mod long;

pub use builder::{braid_closure, cable_2_1, torus_2, whitehead_double, PlanarBuilder};
pub use long::{LongCrossing, LongDiagram, Role};

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DiagramError {
    #[error("PD syntax error: {0}")]
    Syntax(String),
    #[error("arc label {label} appears {count} times (expected 2)")]
    Multiplicity { label: u32, count: usize },
    #[error("diagram has {0} components; only knots are supported")]
    MultiComponent(usize),
    #[error("strand orientation is inconsistent at crossing {0}")]
    Orientation(usize),
    #[error("diagram is not planar ({faces} faces for {crossings} crossings)")]
    NonPlanar { faces: usize, crossings: usize },
}

/// One crossing: arc labels counterclockwise from the incoming under-strand.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Crossing {
    pub arcs: [u32; 4],
    pub sign: i8,
}

/// Position of a leg: crossing index and slot 0..4 in the PD record.
pub type Leg = (usize, usize);

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PDCode {
    pub crossings: Vec<Crossing>,
}

/// Orientation data derived by walking the knot once.
#[derive(Clone, Debug)]
pub(crate) struct Topology {
    /// Sorted distinct arc labels; arc index = position here.
    pub labels: Vec<u32>,
    /// Leg where each arc starts (an outgoing slot).
    pub tail: Vec<Leg>,
    /// Leg where each arc ends (an incoming slot).
    pub head: Vec<Leg>,
    /// Arc index at each leg.
    pub arc_at: Vec<[usize; 4]>,
    pub signs: Vec<i8>,
}

impl PDCode {
    pub fn unknot() -> PDCode {
        PDCode { crossings: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.crossings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.crossings.is_empty()
    }

    /// Validates raw crossing records and infers the signs.
    pub fn from_arcs(records: &[[u32; 4]]) -> Result<PDCode, DiagramError> {
        let mut pd = PDCode {
            crossings: records.iter().map(|&arcs| Crossing { arcs, sign: 0 }).collect(),
        };
        let topo = pd.topology()?;
        for (c, s) in pd.crossings.iter_mut().zip(topo.signs) {
            c.sign = s;
        }
        Ok(pd)
    }

    pub(crate) fn topology(&self) -> Result<Topology, DiagramError> {
        let mut occ: BTreeMap<u32, Vec<Leg>> = BTreeMap::new();
        for (ci, c) in self.crossings.iter().enumerate() {
            for (p, &a) in c.arcs.iter().enumerate() {
                occ.entry(a).or_default().push((ci, p));
            }
        }
        for (&label, legs) in &occ {
            if legs.len() != 2 {
                return Err(DiagramError::Multiplicity { label, count: legs.len() });
            }
        }
        let labels: Vec<u32> = occ.keys().copied().collect();
        let index: BTreeMap<u32, usize> = labels.iter().enumerate().map(|(i, &l)| (l, i)).collect();
        let n = self.crossings.len();
        let arc_at: Vec<[usize; 4]> = self
            .crossings
            .iter()
            .map(|c| c.arcs.map(|a| index[&a]))
            .collect();
        let mut tail = vec![(usize::MAX, 0); labels.len()];
        let mut head = vec![(usize::MAX, 0); labels.len()];
        let mut signs = vec![0i8; n];
        if n == 0 {
            return Ok(Topology { labels, tail, head, arc_at, signs });
        }
        let other = |leg: Leg, a: usize| -> Leg {
            let legs = &occ[&labels[a]];
            if legs[0] == leg {
                legs[1]
            } else {
                legs[0]
            }
        };
        let start: Leg = (0, 0);
        let mut at = start;
        let mut visited = 0usize;
        loop {
            let (c, p) = at;
            match p {
                0 => {}
                1 => signs[c] = -1,
                3 => signs[c] = 1,
                _ => return Err(DiagramError::Orientation(c)),
            }
            let out = (c, (p + 2) % 4);
            let a = arc_at[c][out.1];
            if tail[a].0 != usize::MAX {
                return Err(DiagramError::Orientation(c));
            }
            let next = other(out, a);
            tail[a] = out;
            head[a] = next;
            visited += 1;
            at = next;
            if at == start {
                break;
            }
            if visited > labels.len() {
                return Err(DiagramError::Orientation(c));
            }
        }
        if visited != labels.len() {
            let comps = count_components(&self.crossings, &arc_at, labels.len());
            return Err(DiagramError::MultiComponent(comps.max(2)));
        }
        if signs.contains(&0) {
            return Err(DiagramError::Orientation(signs.iter().position(|&s| s == 0).unwrap()));
        }
        Ok(Topology { labels, tail, head, arc_at, signs })
    }

    pub fn writhe(&self) -> i32 {
        self.crossings.iter().map(|c| c.sign as i32).sum()
    }

    /// Exchanges over and under strands at every crossing.
    pub fn mirror(&self) -> PDCode {
        let crossings = self
            .crossings
            .iter()
            .map(|c| {
                let [a, b, cc, d] = c.arcs;
                let arcs = if c.sign > 0 { [d, a, b, cc] } else { [b, cc, d, a] };
                Crossing { arcs, sign: -c.sign }
            })
            .collect();
        PDCode { crossings }
    }

    /// Arc labels are renumbered 1.. in traversal order.
    pub fn relabeled(&self) -> PDCode {
        if self.is_empty() {
            return self.clone();
        }
        let topo = self.topology().expect("validated diagram");
        let mut order = Vec::with_capacity(topo.labels.len());
        let mut at = (0usize, 0usize);
        loop {
            let a = topo.arc_at[at.0][(at.1 + 2) % 4];
            order.push(a);
            at = topo.head[a];
            if at == (0, 0) {
                break;
            }
        }
        let mut newlab = vec![0u32; topo.labels.len()];
        for (k, &a) in order.iter().enumerate() {
            newlab[a] = k as u32 + 1;
        }
        PDCode {
            crossings: self
                .crossings
                .iter()
                .enumerate()
                .map(|(ci, c)| Crossing { arcs: topo.arc_at[ci].map(|a| newlab[a]), sign: c.sign })
                .collect(),
        }
    }
}

fn count_components(crossings: &[Crossing], arc_at: &[[usize; 4]], n_arcs: usize) -> usize {
    // Strands go straight through a crossing, so components are classes of arcs
    // joined across opposite slots.
    let mut parent: Vec<usize> = (0..n_arcs).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut y = x;
        while p[y] != r {
            let nx = p[y];
            p[y] = r;
            y = nx;
        }
        r
    }
    for (ci, _) in crossings.iter().enumerate() {
        for (s, t) in [(0, 2), (1, 3)] {
            let a = find(&mut parent, arc_at[ci][s]);
            let b = find(&mut parent, arc_at[ci][t]);
            parent[a] = b;
        }
    }
    (0..n_arcs).filter(|&x| find(&mut parent, x) == x).count()
}

/// Parses `PD[X[a,b,c,d],...]`, a bare `X[..],X[..]` list, or lines `a,b,c,d`.
pub fn parse_pd(text: &str) -> Result<PDCode, DiagramError> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let records = if s.contains('X') || s.starts_with("PD") {
        parse_bracketed(&s)?
    } else {
        parse_csv_lines(text)?
    };
    PDCode::from_arcs(&records)
}

fn parse_bracketed(s: &str) -> Result<Vec<[u32; 4]>, DiagramError> {
    let syntax = |m: &str| DiagramError::Syntax(m.to_string());
    let body = if let Some(rest) = s.strip_prefix("PD[") {
        rest.strip_suffix(']').ok_or_else(|| syntax("missing closing `]` after PD"))?
    } else {
        s
    };
    let mut out = Vec::new();
    let mut rest = body;
    while !rest.is_empty() {
        let inner = rest
            .strip_prefix("X[")
            .ok_or_else(|| syntax(&format!("expected `X[` at `{}`", truncate(rest))))?;
        let close = inner.find(']').ok_or_else(|| syntax("unterminated `X[`"))?;
        out.push(parse_four(&inner[..close])?);
        rest = &inner[close + 1..];
        if let Some(r) = rest.strip_prefix(',') {
            rest = r;
            if rest.is_empty() {
                return Err(syntax("trailing comma"));
            }
        } else if !rest.is_empty() {
            return Err(syntax(&format!("expected `,` at `{}`", truncate(rest))));
        }
    }
    Ok(out)
}

fn parse_csv_lines(text: &str) -> Result<Vec<[u32; 4]>, DiagramError> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| parse_four(&l.chars().filter(|c| !c.is_whitespace()).collect::<String>()))
        .collect()
}

fn parse_four(s: &str) -> Result<[u32; 4], DiagramError> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 4 {
        return Err(DiagramError::Syntax(format!("crossing `{s}` needs 4 labels")));
    }
    let mut out = [0u32; 4];
    for (o, p) in out.iter_mut().zip(parts) {
        *o = p
            .parse::<u32>()
            .ok()
            .filter(|&v| v > 0)
            .ok_or_else(|| DiagramError::Syntax(format!("bad arc label `{p}`")))?;
    }
    Ok(out)
}

fn truncate(s: &str) -> &str {
    &s[..s.len().min(16)]
}

impl FromStr for PDCode {
    type Err = DiagramError;
    fn from_str(s: &str) -> Result<PDCode, DiagramError> {
        parse_pd(s)
    }
}

impl fmt::Display for PDCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PD[")?;
        for (i, c) in self.crossings.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            let [a, b, cc, d] = c.arcs;
            write!(f, "X[{a},{b},{cc},{d}]")?;
        }
        write!(f, "]")
    }
}
