//! Planar link diagrams as half-edge combinatorial maps.
//!
//! A crossing lists four edge labels in counterclockwise order. Half-edge `4c + s`
//! is slot `s` of crossing `c`; the two half-edges carrying the same label form an
//! edge. A strand passes straight through a crossing from slot `s` to slot `s + 2`.
//! Crossingless circles are counted in `loops`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

pub type EdgeId = u32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Crossing {
    pub slots: [EdgeId; 4],
    /// `false`: slots 0 and 2 carry the understrand; `true`: slots 1 and 3 do.
    pub odd_under: bool,
}

impl Crossing {
    pub fn new(slots: [EdgeId; 4]) -> Self {
        Crossing { slots, odd_under: false }
    }

    pub fn under_slots(&self) -> [usize; 2] {
        if self.odd_under {
            [1, 3]
        } else {
            [0, 2]
        }
    }

    /// Slot pairs joined by the `r`-smoothing (Kauffman convention, `r = 0` is the A-smoothing).
    pub fn smoothing(&self, r: u8) -> [(usize, usize); 2] {
        if (self.odd_under as u8) ^ (r & 1) == 0 {
            [(0, 1), (2, 3)]
        } else {
            [(1, 2), (3, 0)]
        }
    }

    pub fn mirrored(&self) -> Self {
        Crossing { slots: self.slots, odd_under: !self.odd_under }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlanarDiagram {
    crossings: Vec<Crossing>,
    loops: u32,
    basepoint: Option<EdgeId>,
    label: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BraidWord {
    pub strands: u32,
    pub letters: Vec<i32>,
}

impl BraidWord {
    pub fn new(strands: u32, letters: Vec<i32>) -> Result<Self> {
        if strands == 0 {
            return Err(Error::Invalid("braid needs at least one strand".into()));
        }
        for &k in &letters {
            if k == 0 || k.unsigned_abs() >= strands {
                return Err(Error::Invalid(format!("letter {k} out of range for {strands} strands")));
            }
        }
        Ok(BraidWord { strands, letters })
    }
}

/// Orientation data: which half-edges point out of their crossing, and crossing signs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrientedDiagram {
    pub diagram: PlanarDiagram,
    pub outgoing: Vec<bool>,
    pub signs: Vec<i8>,
    pub n_plus: usize,
    pub n_minus: usize,
}

impl OrientedDiagram {
    /// Slot of the incoming understrand at crossing `c`.
    pub fn under_in(&self, c: usize) -> usize {
        let [a, b] = self.diagram.crossings[c].under_slots();
        if self.outgoing[4 * c + a] {
            b
        } else {
            a
        }
    }

    /// Slot of the incoming overstrand at crossing `c`.
    pub fn over_in(&self, c: usize) -> usize {
        let u = self.under_in(c);
        if self.outgoing[4 * c + (u + 1) % 4] {
            (u + 3) % 4
        } else {
            (u + 1) % 4
        }
    }

    pub fn writhe(&self) -> i64 {
        self.n_plus as i64 - self.n_minus as i64
    }
}

impl PlanarDiagram {
    /// Validates edge pairing, planarity and the basepoint.
    pub fn new(
        crossings: Vec<Crossing>,
        loops: u32,
        basepoint: Option<EdgeId>,
        label: Option<String>,
    ) -> Result<Self> {
        let d = PlanarDiagram { crossings, loops, basepoint, label };
        d.validate()?;
        Ok(d)
    }

    pub fn unknot() -> Self {
        PlanarDiagram { crossings: vec![], loops: 1, basepoint: None, label: Some("unknot".into()) }
    }

    fn validate(&self) -> Result<()> {
        if self.crossings.is_empty() && self.loops == 0 {
            return invalid("empty diagram");
        }
        let mut count: BTreeMap<EdgeId, u32> = BTreeMap::new();
        for x in &self.crossings {
            for &e in &x.slots {
                *count.entry(e).or_default() += 1;
            }
        }
        if let Some((e, n)) = count.iter().find(|(_, &n)| n != 2) {
            return invalid(format!("edge {e} appears {n} times"));
        }
        match self.basepoint {
            Some(b) if !count.contains_key(&b) => return invalid(format!("basepoint edge {b} not in diagram")),
            None if self.loops == 0 => return invalid("basepoint missing"),
            _ => {}
        }
        let faces = self.face_count();
        let comps = self.graph_components().len();
        let v = self.crossings.len();
        if v + faces != 2 * v + 2 * comps {
            return invalid(format!(
                "not planar: V - E + F = {} over {comps} component(s)",
                v as i64 - 2 * v as i64 + faces as i64
            ));
        }
        Ok(())
    }

    pub fn crossings(&self) -> &[Crossing] {
        &self.crossings
    }

    pub fn len(&self) -> usize {
        self.crossings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.crossings.is_empty()
    }

    pub fn loops(&self) -> u32 {
        self.loops
    }

    pub fn basepoint(&self) -> Option<EdgeId> {
        self.basepoint
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    /// Moves the basepoint; `None` puts it on a crossingless circle.
    pub fn with_basepoint(mut self, b: Option<EdgeId>) -> Result<Self> {
        self.basepoint = b;
        self.validate()?;
        Ok(self)
    }

    /// Basepoint on a crossing edge when there is one (smallest label otherwise).
    pub fn effective_basepoint(&self) -> Option<EdgeId> {
        self.basepoint.or_else(|| self.edges().into_iter().next())
    }

    pub fn edges(&self) -> Vec<EdgeId> {
        let mut v: Vec<EdgeId> = self.crossings.iter().flat_map(|x| x.slots).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// Partner half-edge of every half-edge.
    pub fn partners(&self) -> Vec<usize> {
        let mut first: BTreeMap<EdgeId, usize> = BTreeMap::new();
        let mut p = vec![usize::MAX; 4 * self.crossings.len()];
        for (c, x) in self.crossings.iter().enumerate() {
            for s in 0..4 {
                let h = 4 * c + s;
                if let Some(g) = first.remove(&x.slots[s]) {
                    p[h] = g;
                    p[g] = h;
                } else {
                    first.insert(x.slots[s], h);
                }
            }
        }
        p
    }

    /// Number of faces of the map. Corner `4c + s` sits between slots `s` and `s + 1`.
    pub fn face_count(&self) -> usize {
        self.faces().1
    }

    /// Face index per corner, and the number of faces.
    pub fn faces(&self) -> (Vec<usize>, usize) {
        let p = self.partners();
        let n = 4 * self.crossings.len();
        let mut face = vec![usize::MAX; n];
        let mut f = 0;
        for start in 0..n {
            if face[start] != usize::MAX {
                continue;
            }
            let mut k = start;
            while face[k] == usize::MAX {
                face[k] = f;
                let (c, s) = (k / 4, k % 4);
                k = p[4 * c + (s + 1) % 4];
            }
            f += 1;
        }
        (face, f)
    }

    /// Connected components of the underlying 4-valent graph, as crossing lists.
    pub fn graph_components(&self) -> Vec<Vec<usize>> {
        let p = self.partners();
        let n = self.crossings.len();
        let mut comp = vec![usize::MAX; n];
        let mut out = Vec::new();
        for c0 in 0..n {
            if comp[c0] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut stack = vec![c0];
            let mut members = vec![];
            comp[c0] = id;
            while let Some(c) = stack.pop() {
                members.push(c);
                for s in 0..4 {
                    let d = p[4 * c + s] / 4;
                    if comp[d] == usize::MAX {
                        comp[d] = id;
                        stack.push(d);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    /// Link components as cyclic half-edge sequences (each entry is an outgoing half-edge).
    /// Slot 0 of every crossing is taken as incoming; components that never use slots 0
    /// and 2 start from their smallest half-edge.
    pub fn strands(&self) -> Vec<Vec<usize>> {
        let p = self.partners();
        let n = 4 * self.crossings.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        let starts = (0..n / 4).map(|c| 4 * c + 2).chain(0..n);
        for h0 in starts {
            if seen[h0] {
                continue;
            }
            let mut cyc = vec![];
            let mut h = h0;
            loop {
                seen[h] = true;
                cyc.push(h);
                let g = p[h];
                seen[g] = true;
                h = 4 * (g / 4) + (g % 4 + 2) % 4;
                if h == h0 {
                    break;
                }
            }
            out.push(cyc);
        }
        out
    }

    pub fn count_components(&self) -> usize {
        self.strands().len() + self.loops as usize
    }

    pub fn mirror(&self) -> Self {
        PlanarDiagram {
            crossings: self.crossings.iter().map(Crossing::mirrored).collect(),
            ..self.clone()
        }
    }

    /// Sub-diagram on a subset of crossings that forms a union of graph components.
    pub(crate) fn restrict(&self, cs: &[usize]) -> Self {
        let crossings: Vec<Crossing> = cs.iter().map(|&c| self.crossings[c]).collect();
        let bp = self
            .basepoint
            .filter(|b| crossings.iter().any(|x| x.slots.contains(b)))
            .or_else(|| crossings.first().map(|x| x.slots[0]));
        PlanarDiagram { crossings, loops: 0, basepoint: bp, label: None }
    }

    /// Relabels edges to 0.. in order of first appearance.
    pub fn compact(&self) -> Self {
        let mut map: BTreeMap<EdgeId, EdgeId> = BTreeMap::new();
        let mut next = 0;
        let crossings = self
            .crossings
            .iter()
            .map(|x| {
                let mut y = *x;
                for s in 0..4 {
                    y.slots[s] = *map.entry(x.slots[s]).or_insert_with(|| {
                        next += 1;
                        next - 1
                    });
                }
                y
            })
            .collect();
        PlanarDiagram {
            crossings,
            loops: self.loops,
            basepoint: self.basepoint.map(|b| map[&b]),
            label: self.label.clone(),
        }
    }

    /// Replaces crossing `c` by its `r`-smoothing.
    pub fn resolve(&self, c: usize, r: u8) -> Result<Self> {
        if c >= self.crossings.len() {
            return Err(Error::Invalid(format!("no crossing {c}")));
        }
        let x = self.crossings[c];
        let pairs = x.smoothing(r);
        let mut rest: Vec<Crossing> = self.crossings.clone();
        rest.remove(c);
        Ok(self.join_edges(rest, &pairs.map(|(a, b)| (x.slots[a], x.slots[b]))))
    }

    /// Removes a crossing by merging edge labels, counting closed-off circles as loops.
    fn join_edges(&self, rest: Vec<Crossing>, joins: &[(EdgeId, EdgeId)]) -> Self {
        let mut uf = LabelUnion::default();
        for &(a, b) in joins {
            uf.union(a, b);
        }
        let mut used = std::collections::BTreeSet::new();
        let crossings: Vec<Crossing> = rest
            .into_iter()
            .map(|mut y| {
                for e in y.slots.iter_mut() {
                    *e = uf.find(*e);
                    used.insert(*e);
                }
                y
            })
            .collect();
        let mut roots = std::collections::BTreeSet::new();
        for &(a, b) in joins {
            roots.insert(uf.find(a));
            roots.insert(uf.find(b));
        }
        let new_loops = roots.iter().filter(|r| !used.contains(r)).count() as u32;
        let basepoint = self.basepoint.map(|b| uf.find(b)).filter(|b| used.contains(b));
        PlanarDiagram { crossings, loops: self.loops + new_loops, basepoint, label: self.label.clone() }
    }

    /// Removes kinks (an edge joining two adjacent slots of one crossing).
    pub fn reduce_r1(&self) -> Self {
        let mut d = self.clone();
        'outer: loop {
            for (c, x) in d.crossings.iter().enumerate() {
                for s in 0..4 {
                    if x.slots[s] == x.slots[(s + 1) % 4] {
                        let (a, b) = (x.slots[(s + 2) % 4], x.slots[(s + 3) % 4]);
                        let mut rest = d.crossings.clone();
                        rest.remove(c);
                        let kink = x.slots[s];
                        let mut nd = d.join_edges(rest, &[(a, b)]);
                        if d.basepoint == Some(kink) {
                            let rep = a.min(b);
                            nd.basepoint = nd.crossings.iter().any(|y| y.slots.contains(&rep)).then_some(rep);
                        }
                        d = nd;
                        continue 'outer;
                    }
                }
            }
            return d;
        }
    }

    pub fn orient(&self) -> OrientedDiagram {
        self.orient_with(&[])
    }

    /// Orientation with optional per-component reversal (components in default traversal order).
    pub fn orient_with(&self, reverse: &[bool]) -> OrientedDiagram {
        let mut outgoing = vec![false; 4 * self.crossings.len()];
        let p = self.partners();
        for (i, cyc) in self.strands().iter().enumerate() {
            let rev = reverse.get(i).copied().unwrap_or(false);
            for &h in cyc {
                outgoing[h] = !rev;
                outgoing[p[h]] = rev;
            }
        }
        let mut signs = Vec::with_capacity(self.crossings.len());
        let mut od = OrientedDiagram { diagram: self.clone(), outgoing, signs: vec![], n_plus: 0, n_minus: 0 };
        for c in 0..self.crossings.len() {
            let u = od.under_in(c);
            let o = od.over_in(c);
            signs.push(if o == (u + 3) % 4 { 1 } else { -1 });
        }
        od.n_plus = signs.iter().filter(|&&s| s > 0).count();
        od.n_minus = signs.len() - od.n_plus;
        od.signs = signs;
        od
    }

    /// Re-expresses every crossing so that slot 0 is the incoming understrand.
    pub fn pd_rows(&self) -> Vec<[EdgeId; 4]> {
        let od = self.orient();
        (0..self.crossings.len())
            .map(|c| {
                let u = od.under_in(c);
                let s = self.crossings[c].slots;
                [s[u], s[(u + 1) % 4], s[(u + 2) % 4], s[(u + 3) % 4]]
            })
            .collect()
    }
}

/// Union-find on edge labels keyed by value; the representative is the smallest label.
#[derive(Default)]
pub(crate) struct LabelUnion {
    parent: BTreeMap<EdgeId, EdgeId>,
}

impl LabelUnion {
    pub(crate) fn find(&mut self, e: EdgeId) -> EdgeId {
        let p = *self.parent.get(&e).unwrap_or(&e);
        if p == e {
            return e;
        }
        let r = self.find(p);
        self.parent.insert(e, r);
        r
    }

    pub(crate) fn union(&mut self, a: EdgeId, b: EdgeId) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = (ra.min(rb), ra.max(rb));
            self.parent.insert(hi, lo);
        }
    }
}

/// Trace closure of a braid; letters are processed bottom to top and become crossings in order.
pub fn braid_closure(word: &BraidWord) -> PlanarDiagram {
    let s = word.strands as usize;
    let mut next: EdgeId = s as EdgeId;
    let mut cur: Vec<EdgeId> = (0..s as EdgeId).collect();
    let mut crossings = Vec::with_capacity(word.letters.len());
    for &k in &word.letters {
        let i = k.unsigned_abs() as usize - 1;
        let (x, y) = (cur[i], cur[i + 1]);
        let (x2, y2) = (next, next + 1);
        next += 2;
        crossings.push(braid_crossing(k > 0, x, y, x2, y2));
        cur[i] = x2;
        cur[i + 1] = y2;
    }
    close_positions(crossings, &cur, s, None)
}

/// Crossing for a braid letter between positions with incoming edges `x` (left), `y` (right)
/// and outgoing `x2`, `y2`, strands running upward.
pub(crate) fn braid_crossing(positive: bool, x: EdgeId, y: EdgeId, x2: EdgeId, y2: EdgeId) -> Crossing {
    if positive {
        Crossing::new([y, y2, x2, x])
    } else {
        Crossing::new([x, y, y2, x2])
    }
}

/// Joins the top edge of every position to its bottom edge (bottom edges are `0..s`).
pub(crate) fn close_positions(
    crossings: Vec<Crossing>,
    top: &[EdgeId],
    s: usize,
    label: Option<String>,
) -> PlanarDiagram {
    let mut uf = LabelUnion::default();
    for (i, &t) in top.iter().enumerate().take(s) {
        uf.union(i as EdgeId, t);
    }
    let crossings: Vec<Crossing> = crossings
        .into_iter()
        .map(|mut x| {
            for e in x.slots.iter_mut() {
                *e = uf.find(*e);
            }
            x
        })
        .collect();
    let loops = (0..s).filter(|&i| top[i] == i as EdgeId).count() as u32;
    let basepoint = if top[0] == 0 { None } else { Some(0) };
    PlanarDiagram { crossings, loops, basepoint, label }
}
