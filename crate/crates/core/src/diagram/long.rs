//! Upright long diagrams and their rotation numbers.
//!
//! Every crossing is drawn with both strands pointing up. A face traversed with
//! the face on its left turns by `+1` (bounded) or `-1` (outer), in full turns;
//! inside a crossing the boundary makes a left U-turn at the north and south
//! corners and goes straight at the west and east corners. These equations fix
//! the per-arc rotation numbers up to a gauge that does not affect the invariant.

use super::{DiagramError, PDCode, Topology};
use std::collections::VecDeque;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Role {
    SW = 0,
    SE = 1,
    NW = 2,
    NE = 3,
}

/// PD slot -> role, for positive and negative crossings.
const ROLE_POS: [Role; 4] = [Role::SE, Role::NE, Role::NW, Role::SW];
const ROLE_NEG: [Role; 4] = [Role::SW, Role::SE, Role::NE, Role::NW];

fn role(sign: i8, slot: usize) -> Role {
    if sign > 0 {
        ROLE_POS[slot]
    } else {
        ROLE_NEG[slot]
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LongCrossing {
    pub sign: i8,
    /// Arc ids indexed by `Role as usize`: SW, SE, NW, NE.
    pub legs: [usize; 4],
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LongDiagram {
    pub crossings: Vec<LongCrossing>,
    /// Rotation number per arc id.
    pub rot: Vec<i32>,
    pub entrance: usize,
    pub exit: usize,
    /// PD label of each arc id; the entrance gets a fresh label.
    pub labels: Vec<u32>,
    /// PD label of the arc that was cut.
    pub cut_label: u32,
    /// Whether the unbounded face lies left of the cut arc.
    pub outer_left: bool,
}

impl LongDiagram {
    pub fn n_arcs(&self) -> usize {
        self.rot.len()
    }

    /// The crossingless long unknot.
    pub fn trivial() -> LongDiagram {
        LongDiagram {
            crossings: Vec::new(),
            rot: vec![0],
            entrance: 0,
            exit: 0,
            labels: vec![1],
            cut_label: 1,
            outer_left: false,
        }
    }
}

struct Faces {
    /// Face id of the dart leaving each leg.
    face_of: Vec<[usize; 4]>,
    /// Darts (legs) around each face.
    darts: Vec<Vec<(usize, usize)>>,
}

fn trace_faces(topo: &Topology) -> Faces {
    let n = topo.arc_at.len();
    let mut face_of = vec![[usize::MAX; 4]; n];
    let mut darts = Vec::new();
    let other_end = |c: usize, p: usize| {
        let a = topo.arc_at[c][p];
        if topo.tail[a] == (c, p) {
            topo.head[a]
        } else {
            topo.tail[a]
        }
    };
    for c in 0..n {
        for p in 0..4 {
            if face_of[c][p] != usize::MAX {
                continue;
            }
            let id = darts.len();
            let mut cycle = Vec::new();
            let (mut vc, mut vp) = (c, p);
            while face_of[vc][vp] == usize::MAX {
                face_of[vc][vp] = id;
                cycle.push((vc, vp));
                let (nc, np) = other_end(vc, vp);
                vc = nc;
                vp = (np + 3) % 4;
            }
            darts.push(cycle);
        }
    }
    Faces { face_of, darts }
}

/// Rotation numbers of the closed diagram with `outer` as the unbounded face.
fn solve_rotations(topo: &Topology, faces: &Faces, outer: usize) -> Vec<i32> {
    let n = topo.arc_at.len();
    let n_arcs = topo.labels.len();
    // Spanning tree of the crossing graph; its arcs get rotation 0.
    let mut in_tree = vec![false; n_arcs];
    let mut seen = vec![false; n];
    let mut queue = VecDeque::from([0usize]);
    seen[0] = true;
    while let Some(c) = queue.pop_front() {
        for p in 0..4 {
            let a = topo.arc_at[c][p];
            let (t, h) = (topo.tail[a].0, topo.head[a].0);
            let o = if t == c { h } else { t };
            if !seen[o] {
                seen[o] = true;
                in_tree[a] = true;
                queue.push_back(o);
            }
        }
    }
    let mut rot: Vec<Option<i32>> = in_tree.iter().map(|&t| if t { Some(0) } else { None }).collect();
    // Each face equation in half turns: 2 * sum(+-rot) + (#north/south corners) = 2 * eps.
    let nf = faces.darts.len();
    let mut done = vec![false; nf];
    done[outer] = true;
    let signed_arc = |c: usize, p: usize| -> (usize, i32) {
        let a = topo.arc_at[c][p];
        (a, if topo.tail[a] == (c, p) { 1 } else { -1 })
    };
    let ns_corners = |f: usize| -> i32 {
        let mut k = 0;
        for &(c, p) in &faces.darts[f] {
            // The corner entered just before leaving slot p is between p and p+1.
            let s = topo.signs[c];
            let r1 = role(s, p) as usize;
            let r2 = role(s, (p + 1) % 4) as usize;
            let south = r1 <= 1 && r2 <= 1;
            let north = r1 >= 2 && r2 >= 2;
            if south || north {
                k += 1;
            }
        }
        k
    };
    loop {
        let mut progressed = false;
        for f in 0..nf {
            if done[f] {
                continue;
            }
            let unknown: Vec<(usize, i32)> = faces.darts[f]
                .iter()
                .map(|&(c, p)| signed_arc(c, p))
                .filter(|&(a, _)| rot[a].is_none())
                .collect();
            if unknown.len() != 1 {
                continue;
            }
            let (ua, us) = unknown[0];
            let mut known = 0;
            for &(c, p) in &faces.darts[f] {
                let (a, s) = signed_arc(c, p);
                if a != ua {
                    known += s * rot[a].unwrap();
                }
            }
            let twice = 2 - ns_corners(f) - 2 * known;
            debug_assert!(twice % 2 == 0);
            rot[ua] = Some(us * twice / 2);
            done[f] = true;
            progressed = true;
        }
        if !progressed {
            break;
        }
    }
    let rot: Vec<i32> = rot.into_iter().map(|r| r.expect("face equations determine every arc")).collect();
    debug_assert!({
        let mut total = 0;
        for &(c, p) in &faces.darts[outer] {
            let (a, s) = signed_arc(c, p);
            total += 2 * s * rot[a];
        }
        total + ns_corners(outer) == -2
    });
    rot
}

impl PDCode {
    /// All long diagrams: each arc cut open with either adjacent face unbounded.
    pub fn to_long_diagrams(&self) -> Result<Vec<LongDiagram>, DiagramError> {
        if self.is_empty() {
            return Ok(vec![LongDiagram::trivial()]);
        }
        let topo = self.topology()?;
        let faces = trace_faces(&topo);
        if faces.darts.len() != self.len() + 2 {
            return Err(DiagramError::NonPlanar { faces: faces.darts.len(), crossings: self.len() });
        }
        let n_arcs = topo.labels.len();
        let mut out = Vec::with_capacity(2 * n_arcs);
        let mut cache: Vec<Option<Vec<i32>>> = vec![None; faces.darts.len()];
        for x in 0..n_arcs {
            let (tc, tp) = topo.tail[x];
            let (hc, hp) = topo.head[x];
            let left = faces.face_of[tc][tp];
            let right = faces.face_of[hc][hp];
            for (outer, outer_left) in [(left, true), (right, false)] {
                if cache[outer].is_none() {
                    cache[outer] = Some(solve_rotations(&topo, &faces, outer));
                }
                let tau = cache[outer].as_ref().unwrap();
                let entrance = n_arcs;
                let mut rot = tau.clone();
                rot[x] = tau[x] + if outer_left { 1 } else { -1 };
                rot.push(0);
                let mut labels = topo.labels.clone();
                labels.push(topo.labels.iter().max().unwrap() + 1);
                let crossings = self
                    .crossings
                    .iter()
                    .enumerate()
                    .map(|(ci, c)| {
                        let mut legs = [0usize; 4];
                        for p in 0..4 {
                            let mut a = topo.arc_at[ci][p];
                            if a == x && (ci, p) == (hc, hp) {
                                a = entrance;
                            }
                            legs[role(c.sign, p) as usize] = a;
                        }
                        LongCrossing { sign: c.sign, legs }
                    })
                    .collect();
                out.push(LongDiagram {
                    crossings,
                    rot,
                    entrance,
                    exit: x,
                    labels,
                    cut_label: topo.labels[x],
                    outer_left,
                });
            }
        }
        Ok(out)
    }
}
