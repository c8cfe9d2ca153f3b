//! Planar-map construction of diagrams: braid closures and satellites.
//!
//! A builder crossing has four slots counterclockwise and records which pair of
//! opposite slots carries the under-strand. Orientation and signs are derived
//! afterwards by walking the single resulting component.

use super::{DiagramError, PDCode};

type BLeg = (usize, usize);

#[derive(Clone, Debug, Default)]
pub struct PlanarBuilder {
    links: Vec<[Option<BLeg>; 4]>,
    /// Under-strand occupies slots {axis, axis + 2}.
    under_axis: Vec<usize>,
}

impl PlanarBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_crossing(&mut self, under_axis: usize) -> usize {
        self.links.push([None; 4]);
        self.under_axis.push(under_axis % 2);
        self.links.len() - 1
    }

    pub fn connect(&mut self, a: BLeg, b: BLeg) {
        debug_assert!(self.links[a.0][a.1].is_none() && self.links[b.0][b.1].is_none());
        self.links[a.0][a.1] = Some(b);
        self.links[b.0][b.1] = Some(a);
    }

    pub fn len(&self) -> usize {
        self.links.len()
    }

    pub fn is_empty(&self) -> bool {
        self.links.is_empty()
    }

    /// Walks the knot from crossing 0 along its under-strand and emits a PD code.
    pub fn to_pd(&self) -> Result<PDCode, DiagramError> {
        let n = self.links.len();
        if n == 0 {
            return Ok(PDCode::unknot());
        }
        let mut label = vec![[0u32; 4]; n];
        let mut incoming_under = vec![usize::MAX; n];
        let start: BLeg = (0, self.under_axis[0]);
        let mut at = start;
        let mut next_label = 1u32;
        loop {
            let (c, p) = at;
            if p % 2 == self.under_axis[c] {
                incoming_under[c] = p;
            }
            let out = (c, (p + 2) % 4);
            let dest = self.links[out.0][out.1].ok_or(DiagramError::Orientation(c))?;
            if label[out.0][out.1] != 0 {
                return Err(DiagramError::Orientation(c));
            }
            label[out.0][out.1] = next_label;
            label[dest.0][dest.1] = next_label;
            next_label += 1;
            at = dest;
            if at == start {
                break;
            }
        }
        if (next_label as usize - 1) != 2 * n {
            return Err(DiagramError::MultiComponent(2));
        }
        let records: Vec<[u32; 4]> = (0..n)
            .map(|c| {
                let p = incoming_under[c];
                [label[c][p], label[c][(p + 1) % 4], label[c][(p + 2) % 4], label[c][(p + 3) % 4]]
            })
            .collect();
        PDCode::from_arcs(&records)
    }
}

// Compass slots of the small crossings used by the parallel and clasp gadgets.
const S: usize = 0;
const E: usize = 1;
const N: usize = 2;
const W: usize = 3;

// Slots of a twist crossing in strip coordinates.
const SW: usize = 0;
const SE: usize = 1;
const NE: usize = 2;
const NW: usize = 3;

/// Two strands running up a strip, as (left, right) free legs.
type Lanes = (BLeg, BLeg);

/// Adds `k` half twists; positive `k` is a positive crossing for parallel strands.
fn add_twists(b: &mut PlanarBuilder, mut lanes: Lanes, k: i32, first: &mut Option<Lanes>) -> Lanes {
    for _ in 0..k.unsigned_abs() {
        // Over strand SW -> NE gives a positive crossing when both strands go up.
        let x = b.add_crossing(if k > 0 { 1 } else { 0 });
        attach(b, lanes, ((x, SW), (x, SE)), first);
        lanes = ((x, NW), (x, NE));
    }
    lanes
}

/// Adds a clasp turning the strip back on itself; `over_first` picks its handedness.
fn add_clasp(b: &mut PlanarBuilder, lanes: Lanes, over_first: bool, first: &mut Option<Lanes>) -> Lanes {
    // A cap enters from below and arches across the strip; a cup hangs from above
    // with its two legs crossing the arch.
    let x1 = b.add_crossing(if over_first { 1 } else { 0 });
    let x2 = b.add_crossing(if over_first { 0 } else { 1 });
    b.connect((x1, S), (x2, S));
    b.connect((x1, E), (x2, W));
    attach(b, lanes, ((x1, W), (x2, E)), first);
    ((x1, N), (x2, N))
}

fn attach(b: &mut PlanarBuilder, lanes: Lanes, bottom: Lanes, first: &mut Option<Lanes>) {
    if lanes.0 .0 == usize::MAX {
        *first = Some(bottom);
    } else {
        b.connect(lanes.0, bottom.0);
        b.connect(lanes.1, bottom.1);
    }
}

const OPEN: Lanes = ((usize::MAX, 0), (usize::MAX, 0));

/// Sub-leg `k` of the doubled slot `p` of original crossing `v` in the parallel.
fn sub_leg(base: usize, p: usize, k: usize) -> BLeg {
    // Small crossings: base + 0 = (-,-), 1 = (+,-), 2 = (-,+), 3 = (+,+).
    match (p, k) {
        (0, 0) => (base, S),
        (0, 1) => (base + 1, S),
        (1, 0) => (base + 1, E),
        (1, 1) => (base + 3, E),
        (2, 0) => (base + 3, N),
        (2, 1) => (base + 2, N),
        (3, 0) => (base + 2, W),
        (3, 1) => (base, W),
        _ => unreachable!(),
    }
}

enum Gadget {
    Twists(i32),
    Clasp(bool),
}

/// Blackboard 2-parallel of `pd` with gadgets inserted on the strip of the first
/// outgoing under-arc. The crossingless unknot is a closed strip.
fn parallel_with(pd: &PDCode, gadgets: &[Gadget]) -> Result<(PDCode, Vec<usize>), DiagramError> {
    let mut b = PlanarBuilder::new();
    let n = pd.len();
    for _ in 0..n {
        let base = b.len();
        for _ in 0..4 {
            b.add_crossing(0);
        }
        b.connect((base, N), (base + 2, S));
        b.connect((base + 1, N), (base + 3, S));
        b.connect((base, E), (base + 1, W));
        b.connect((base + 2, E), (base + 3, W));
    }
    let mut gadget_crossings = Vec::new();
    let mut run = |b: &mut PlanarBuilder, lanes: Lanes, first: &mut Option<Lanes>| {
        let mut lanes = lanes;
        for g in gadgets {
            let before = b.len();
            lanes = match g {
                Gadget::Twists(k) => add_twists(b, lanes, *k, first),
                Gadget::Clasp(o) => add_clasp(b, lanes, *o, first),
            };
            gadget_crossings.extend(before..b.len());
        }
        lanes
    };
    if n == 0 {
        let mut first = None;
        let end = run(&mut b, OPEN, &mut first);
        let first = first.ok_or(DiagramError::MultiComponent(2))?;
        b.connect(end.0, first.0);
        b.connect(end.1, first.1);
        return Ok((b.to_pd()?, gadget_crossings));
    }
    let topo = pd.topology()?;
    let strip_arc = topo.arc_at[0][2];
    for a in 0..topo.labels.len() {
        let (vc, vp) = topo.tail[a];
        let (wc, wp) = topo.head[a];
        if a != strip_arc {
            b.connect(sub_leg(4 * vc, vp, 0), sub_leg(4 * wc, wp, 1));
            b.connect(sub_leg(4 * vc, vp, 1), sub_leg(4 * wc, wp, 0));
            continue;
        }
        // Facing along the strip from the tail end, sub-leg 0 is on the right.
        let start: Lanes = (sub_leg(4 * vc, vp, 1), sub_leg(4 * vc, vp, 0));
        let mut first = None;
        let end = run(&mut b, start, &mut first);
        b.connect(end.0, sub_leg(4 * wc, wp, 0));
        b.connect(end.1, sub_leg(4 * wc, wp, 1));
    }
    Ok((b.to_pd()?, gadget_crossings))
}

/// The (2,1)-cable: blackboard parallel plus `1 - 2w` half twists.
pub fn cable_2_1(pd: &PDCode) -> Result<PDCode, DiagramError> {
    let k = 1 - 2 * pd.writhe();
    Ok(parallel_with(pd, &[Gadget::Twists(k)])?.0)
}

/// Whitehead double with a positive clasp on the 0-framed parallel.
pub fn whitehead_double(pd: &PDCode) -> Result<PDCode, DiagramError> {
    let k = -2 * pd.writhe();
    for over_first in [true, false] {
        let (out, extra) = parallel_with(pd, &[Gadget::Twists(k), Gadget::Clasp(over_first)])?;
        let clasp = &extra[extra.len() - 2..];
        if clasp.iter().all(|&c| out.crossings[c].sign > 0) {
            return Ok(out);
        }
    }
    unreachable!("one clasp handedness is positive")
}

/// Closure of a braid word; generator `i` (1-based) is positive for `+i`.
pub fn braid_closure(strands: usize, word: &[i32]) -> Result<PDCode, DiagramError> {
    let mut b = PlanarBuilder::new();
    let mut first: Vec<Option<BLeg>> = vec![None; strands];
    let mut ends: Vec<Option<BLeg>> = vec![None; strands];
    for &g in word {
        let i = g.unsigned_abs() as usize - 1;
        assert!(g != 0 && i + 1 < strands, "generator out of range");
        let x = b.add_crossing(if g > 0 { 1 } else { 0 });
        for (lane, slot) in [(i, SW), (i + 1, SE)] {
            match ends[lane] {
                Some(e) => b.connect(e, (x, slot)),
                None => first[lane] = Some((x, slot)),
            }
        }
        ends[i] = Some((x, NW));
        ends[i + 1] = Some((x, NE));
    }
    for lane in 0..strands {
        match (ends[lane], first[lane]) {
            (Some(e), Some(f)) => b.connect(e, f),
            _ => return Err(DiagramError::MultiComponent(2)),
        }
    }
    b.to_pd()
}

/// The torus knot `T(2, k)` for odd `k`, as the closure of `sigma_1^k`.
pub fn torus_2(k: i32) -> Result<PDCode, DiagramError> {
    if k.abs() == 1 {
        return Ok(PDCode::unknot());
    }
    let g = if k > 0 { 1 } else { -1 };
    braid_closure(2, &vec![g; k.unsigned_abs() as usize])
}
