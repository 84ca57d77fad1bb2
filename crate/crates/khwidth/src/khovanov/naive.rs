//! Full cube of resolutions. Exponential in the crossing count; used as a reference.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;

use super::gf2::{self, SparseRow};
use crate::diagram::PlanarDiagram;

struct State {
    /// Circle index of every compacted edge.
    circle: Vec<u16>,
    /// One edge per circle coming from crossings (free loops have none).
    rep: Vec<u32>,
    n_circles: usize,
    marked: usize,
    /// Position of each circle among the unmarked ones (`u16::MAX` for the marked circle).
    slot: Vec<u16>,
    /// Block index of every label mask.
    index: Vec<u32>,
}

/// Returns ranks keyed by the standard gradings `(i, j)`.
pub fn kh_ij(d: &PlanarDiagram) -> BTreeMap<(i32, i32), u64> {
    let d = d.compact();
    let od = d.orient();
    let n = d.len();
    let n_edges = d.edges().len();
    let loops = d.loops() as usize;
    let xs = d.crossings();

    let build = |s: u32| -> State {
        let mut parent: Vec<u32> = (0..n_edges as u32).collect();
        fn find(p: &mut [u32], x: u32) -> u32 {
            let mut r = x;
            while p[r as usize] != r {
                r = p[r as usize];
            }
            let mut y = x;
            while p[y as usize] != r {
                let nx = p[y as usize];
                p[y as usize] = r;
                y = nx;
            }
            r
        }
        for (c, x) in xs.iter().enumerate() {
            for (a, b) in x.smoothing(((s >> c) & 1) as u8) {
                let (ra, rb) = (find(&mut parent, x.slots[a]), find(&mut parent, x.slots[b]));
                if ra != rb {
                    parent[ra.max(rb) as usize] = ra.min(rb);
                }
            }
        }
        let mut circle = vec![0u16; n_edges];
        let mut rep = Vec::new();
        let mut root_idx: HashMap<u32, u16> = HashMap::new();
        for e in 0..n_edges as u32 {
            let r = find(&mut parent, e);
            let k = *root_idx.entry(r).or_insert_with(|| {
                rep.push(e);
                (rep.len() - 1) as u16
            });
            circle[e as usize] = k;
        }
        let n_circles = rep.len() + loops;
        let marked = match d.basepoint() {
            Some(b) => circle[b as usize] as usize,
            None => rep.len(),
        };
        let mut slot = vec![u16::MAX; n_circles];
        let mut k = 0;
        for (i, sl) in slot.iter_mut().enumerate() {
            if i != marked {
                *sl = k;
                k += 1;
            }
        }
        State { circle, rep, n_circles, marked, slot, index: Vec::new() }
    };

    // Block sizes keyed by (r, q) where q is the algebra degree plus r.
    let mut states: Vec<State> = (0..1u32 << n).into_par_iter().map(build).collect();
    let mut block_size: HashMap<(u32, i32), u32> = HashMap::new();
    for (s, st) in states.iter_mut().enumerate() {
        let r = (s as u32).count_ones();
        let u = st.n_circles - 1;
        st.index = (0..1u32 << u)
            .map(|mask| {
                let q = r as i32 + 2 * mask.count_ones() as i32 - u as i32;
                let e = block_size.entry((r, q)).or_default();
                *e += 1;
                *e - 1
            })
            .collect();
    }

    // Rows of the differential out of each block.
    let rows: Vec<((u32, i32), SparseRow)> = (0..1u32 << n)
        .into_par_iter()
        .flat_map_iter(|s| {
            let st = &states[s as usize];
            let r = s.count_ones();
            let u = st.n_circles - 1;
            let mut out = Vec::with_capacity(1 << u);
            for mask in 0..1u32 << u {
                let q = r as i32 + 2 * mask.count_ones() as i32 - u as i32;
                let mut cols = Vec::new();
                for c in 0..n {
                    if (s >> c) & 1 == 1 {
                        continue;
                    }
                    let t = &states[(s | 1 << c) as usize];
                    edge_map(st, t, &xs[c].slots, mask, loops, &mut cols);
                }
                out.push(((r, q), gf2::normalize(cols)));
            }
            out
        })
        .collect();

    let mut grouped: HashMap<(u32, i32), Vec<SparseRow>> = HashMap::new();
    for (k, row) in rows {
        grouped.entry(k).or_default().push(row);
    }
    let ranks: HashMap<(u32, i32), usize> =
        grouped.into_par_iter().map(|(k, rows)| (k, gf2::rank(rows))).collect();

    let mut out = BTreeMap::new();
    let (np, nm) = (od.n_plus as i32, od.n_minus as i32);
    for (&(r, q), &dim) in &block_size {
        let out_rank = ranks.get(&(r, q)).copied().unwrap_or(0);
        let in_rank = if r == 0 { 0 } else { ranks.get(&(r - 1, q)).copied().unwrap_or(0) };
        let h = dim as usize - out_rank - in_rank;
        if h > 0 {
            out.insert((r as i32 - nm, q + np - 2 * nm), h as u64);
        }
    }
    out
}

/// Appends the image of generator `mask` of state `s` under the edge map to state `t`.
fn edge_map(s: &State, t: &State, slots: &[u32; 4], mask: u32, loops: usize, cols: &mut Vec<u32>) {
    let label = |st: &State, m: u32, c: usize| -> bool { c != st.marked && (m >> st.slot[c]) & 1 == 1 };
    let mut src: Vec<usize> = slots.iter().map(|&e| s.circle[e as usize] as usize).collect();
    src.sort_unstable();
    src.dedup();
    let mut dst: Vec<usize> = slots.iter().map(|&e| t.circle[e as usize] as usize).collect();
    dst.sort_unstable();
    dst.dedup();

    // Labels on the untouched circles of the target.
    let n_crossing_circles = t.rep.len();
    let mut base = 0u32;
    for c in 0..t.n_circles {
        if dst.contains(&c) || c == t.marked {
            continue;
        }
        let sc = if c < n_crossing_circles {
            s.circle[t.rep[c] as usize] as usize
        } else {
            s.rep.len() + (c - n_crossing_circles)
        };
        debug_assert!(c < n_crossing_circles || c - n_crossing_circles < loops);
        if label(s, mask, sc) {
            base |= 1 << t.slot[c];
        }
    }
    let set = |m: &mut u32, c: usize, v: bool| {
        if v {
            if c == t.marked {
                return false;
            }
            *m |= 1 << t.slot[c];
        }
        true
    };
    match (src.len(), dst.len()) {
        (2, 1) => {
            let (a, b) = (label(s, mask, src[0]), label(s, mask, src[1]));
            if a && b {
                let mut m = base;
                if set(&mut m, dst[0], true) {
                    cols.push(t.index[m as usize]);
                }
            } else if a || b {
                cols.push(t.index[base as usize]);
            }
        }
        (1, 2) => {
            if label(s, mask, src[0]) {
                for (x, y) in [(true, false), (false, true)] {
                    let mut m = base;
                    if set(&mut m, dst[0], x) && set(&mut m, dst[1], y) {
                        cols.push(t.index[m as usize]);
                    }
                }
            } else {
                cols.push(t.index[base as usize]);
            }
        }
        _ => unreachable!("a single smoothing change merges or splits"),
    }
}
