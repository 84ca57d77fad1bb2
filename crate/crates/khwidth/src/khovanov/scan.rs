//! Local complexes over dotted cobordisms, built one crossing at a time.
//!
//! The diagram is cut open at the basepoint, so the final complex lives over a
//! single arc. Objects are crossingless matchings of the current boundary with a
//! homological degree and a quantum shift. A morphism between two matchings is a
//! sum of dotted disks bounding the loops of their union, stored as a set of dot
//! masks. Closed circles are delooped on creation and isomorphisms are cancelled
//! by Gaussian elimination after every crossing.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use super::gf2;
use crate::diagram::{Crossing, PlanarDiagram};

const BP_A: u32 = u32::MAX - 1;
const BP_B: u32 = u32::MAX;

type Mor = Vec<u32>;

#[derive(Clone, Debug, PartialEq, Eq)]
struct Obj {
    /// Partner position of every boundary position.
    m: Vec<u8>,
    r: i32,
    q: i32,
}

#[derive(Default)]
struct Complex {
    boundary: Vec<u32>,
    objs: Vec<Option<Obj>>,
    out: Vec<BTreeMap<u32, Mor>>,
    inn: Vec<BTreeSet<u32>>,
}

/// Loop index of every position in the union of two matchings, numbered by smallest position.
fn loops(m1: &[u8], m2: &[u8]) -> (Vec<u8>, usize) {
    let n = m1.len();
    let mut id = vec![u8::MAX; n];
    let mut k = 0u8;
    for p in 0..n {
        if id[p] != u8::MAX {
            continue;
        }
        let mut x = p;
        loop {
            id[x] = k;
            let y = m1[x] as usize;
            id[y] = k;
            x = m2[y] as usize;
            if x == p {
                break;
            }
        }
        k += 1;
    }
    (id, k as usize)
}

/// Connected pieces of a cobordism glued from disks.
struct Surface {
    parent: Vec<usize>,
    chi: Vec<i32>,
}

impl Surface {
    fn new() -> Self {
        Surface { parent: Vec::new(), chi: Vec::new() }
    }

    fn add(&mut self, chi: i32) -> usize {
        self.parent.push(self.parent.len());
        self.chi.push(chi);
        self.parent.len() - 1
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Glues two pieces along an interval (`dchi = -1`) or a circle (`dchi = 0`).
    fn glue(&mut self, a: usize, b: usize, dchi: i32) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[rb] = ra;
            self.chi[ra] += self.chi[rb];
        }
        self.chi[ra] += dchi;
    }

    /// Component summary given the piece touching each output loop.
    fn shape(mut self, out_piece: &[usize], bp: u32) -> Shape {
        assert!(self.parent.len() <= 64 && out_piece.len() <= 32, "cobordism too large");
        let mut comps: BTreeMap<usize, Comp> = BTreeMap::new();
        for p in 0..self.parent.len() {
            let r = self.find(p);
            let chi = self.chi[r];
            let c = comps.entry(r).or_insert(Comp { chi, pieces: 0, outs: 0 });
            c.pieces |= 1 << p;
        }
        for (l, &p) in out_piece.iter().enumerate() {
            let r = self.find(p);
            comps.get_mut(&r).expect("piece has a component").outs |= 1 << l;
        }
        Shape { comps: comps.into_values().collect(), bp }
    }
}

struct Comp {
    chi: i32,
    pieces: u64,
    outs: u32,
}

struct Shape {
    comps: Vec<Comp>,
    bp: u32,
}

impl Shape {
    /// Pushes the normal form of the surface with dots on the given pieces.
    fn eval(&self, dots: u64, acc: &mut Vec<u32>) {
        let mut partial: Vec<u32> = vec![0];
        for c in &self.comps {
            let d = (dots & c.pieces).count_ones();
            let k = c.outs.count_ones() as i32;
            if k == 0 {
                if c.chi == 2 && d == 1 {
                    continue;
                }
                return;
            }
            if c.chi + k != 2 || d >= 2 {
                return;
            }
            let choices: Vec<u32> = if d == 1 {
                vec![c.outs]
            } else {
                let mut v = Vec::new();
                let mut rest = c.outs;
                while rest != 0 {
                    let b = rest & rest.wrapping_neg();
                    v.push(c.outs & !b);
                    rest &= !b;
                }
                v
            };
            let choices: Vec<u32> = choices.into_iter().filter(|m| m & self.bp == 0).collect();
            if choices.is_empty() {
                return;
            }
            partial = partial.iter().flat_map(|&p| choices.iter().map(move |&c| p | c)).collect();
        }
        acc.extend(partial);
    }
}

fn bp_mask(boundary: &[u32], loop_id: &[u8]) -> u32 {
    boundary
        .iter()
        .zip(loop_id)
        .filter(|(&b, _)| b == BP_A || b == BP_B)
        .fold(0, |m, (_, &l)| m | 1 << l)
}

impl Complex {
    fn new() -> Self {
        let mut c = Complex::default();
        c.push(Obj { m: vec![], r: 0, q: 0 });
        c
    }

    fn push(&mut self, o: Obj) -> u32 {
        self.objs.push(Some(o));
        self.out.push(BTreeMap::new());
        self.inn.push(BTreeSet::new());
        (self.objs.len() - 1) as u32
    }

    fn obj(&self, i: u32) -> &Obj {
        self.objs[i as usize].as_ref().expect("live object")
    }

    fn add_arrow(&mut self, a: u32, b: u32, f: Mor) {
        if f.is_empty() {
            return;
        }
        let e = self.out[a as usize].entry(b).or_default();
        let merged = gf2::normalize(e.iter().copied().chain(f).collect());
        if merged.is_empty() {
            self.out[a as usize].remove(&b);
            self.inn[b as usize].remove(&a);
        } else {
            *e = merged;
            self.inn[b as usize].insert(a);
        }
    }

    /// `g ∘ f` for `f: m1 -> m2` and `g: m2 -> m3`.
    fn compose(&self, m1: &[u8], m2: &[u8], m3: &[u8], f: &Mor, g: &Mor) -> Mor {
        let (fl, nf) = loops(m1, m2);
        let (gl, ng) = loops(m2, m3);
        let (ol, no) = loops(m1, m3);
        let mut s = Surface::new();
        for _ in 0..nf + ng {
            s.add(1);
        }
        for p in 0..m2.len() {
            if p < m2[p] as usize {
                s.glue(fl[p] as usize, nf + gl[p] as usize, -1);
            }
        }
        let mut out_piece = vec![usize::MAX; no];
        for p in 0..m1.len() {
            if out_piece[ol[p] as usize] == usize::MAX {
                out_piece[ol[p] as usize] = fl[p] as usize;
            }
        }
        let shape = s.shape(&out_piece, bp_mask(&self.boundary, &ol));
        let mut acc = Vec::new();
        for &a in f {
            for &b in g {
                shape.eval(a as u64 | (b as u64) << nf, &mut acc);
            }
        }
        gf2::normalize(acc)
    }

    fn is_iso(&self, a: u32, b: u32) -> bool {
        let (oa, ob) = (self.obj(a), self.obj(b));
        oa.m == ob.m && oa.q == ob.q && self.out[a as usize][&b] == [0]
    }

    fn remove(&mut self, a: u32) {
        for b in std::mem::take(&mut self.out[a as usize]).into_keys() {
            self.inn[b as usize].remove(&a);
        }
        for x in std::mem::take(&mut self.inn[a as usize]) {
            self.out[x as usize].remove(&a);
        }
        self.objs[a as usize] = None;
    }

    /// Cancels the isomorphism `a -> b`.
    fn cancel(&mut self, a: u32, b: u32) {
        let xs: Vec<u32> = self.inn[b as usize].iter().copied().filter(|&x| x != a).collect();
        let ys: Vec<u32> = self.out[a as usize].keys().copied().filter(|&y| y != b).collect();
        let mut updates = Vec::new();
        for &x in &xs {
            let f = &self.out[x as usize][&b];
            for &y in &ys {
                let g = &self.out[a as usize][&y];
                let h = self.compose(&self.obj(x).m, &self.obj(b).m, &self.obj(y).m, f, g);
                if !h.is_empty() {
                    updates.push((x, y, h));
                }
            }
        }
        self.remove(a);
        self.remove(b);
        for (x, y, h) in updates {
            self.add_arrow(x, y, h);
        }
    }

    fn simplify(&mut self) {
        loop {
            let mut changed = false;
            for a in 0..self.objs.len() as u32 {
                if self.objs[a as usize].is_none() {
                    continue;
                }
                let hit = self.out[a as usize].keys().copied().find(|&b| self.is_iso(a, b));
                if let Some(b) = hit {
                    self.cancel(a, b);
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        self.compact();
    }

    fn compact(&mut self) {
        let mut map = vec![u32::MAX; self.objs.len()];
        let mut next = Complex { boundary: self.boundary.clone(), ..Default::default() };
        for (i, o) in self.objs.iter().enumerate() {
            if let Some(o) = o {
                map[i] = next.push(o.clone());
            }
        }
        for (a, outs) in self.out.iter().enumerate() {
            for (&b, f) in outs {
                let (na, nb) = (map[a], map[b as usize]);
                next.out[na as usize].insert(nb, f.clone());
                next.inn[nb as usize].insert(na);
            }
        }
        *self = next;
    }

    /// Tensors with one crossing whose slots carry boundary ids `ids`.
    fn tensor(&self, x: &Crossing, ids: [u32; 4]) -> Complex {
        let nb = self.boundary.len();
        let pos: HashMap<u32, usize> = self.boundary.iter().enumerate().map(|(i, &b)| (b, i)).collect();
        // Glue partner of every node; nodes are old positions then the four legs.
        let mut glue = vec![usize::MAX; nb + 4];
        let mut new_ids: Vec<(u32, usize)> = Vec::new();
        for j in 0..4 {
            if let Some(&p) = pos.get(&ids[j]) {
                glue[p] = nb + j;
                glue[nb + j] = p;
            } else if let Some(k) = (0..4).find(|&k| k != j && ids[k] == ids[j]) {
                glue[nb + j] = nb + k;
            } else {
                new_ids.push((ids[j], nb + j));
            }
        }
        for p in 0..nb {
            if glue[p] == usize::MAX {
                new_ids.push((self.boundary[p], p));
            }
        }
        new_ids.sort_unstable();
        assert!(new_ids.len() < 255, "boundary too wide");
        let boundary: Vec<u32> = new_ids.iter().map(|&(b, _)| b).collect();
        let node_of: Vec<usize> = new_ids.iter().map(|&(_, n)| n).collect();
        let mut pos_of_node = vec![usize::MAX; nb + 4];
        for (i, &n) in node_of.iter().enumerate() {
            pos_of_node[n] = i;
        }
        let smooth: [[usize; 4]; 2] = [0u8, 1].map(|e| {
            let mut s = [0usize; 4];
            for (a, b) in x.smoothing(e) {
                s[a] = b;
                s[b] = a;
            }
            s
        });
        let arc = |m: &[u8], e: usize, n: usize| -> usize {
            if n < nb {
                m[n] as usize
            } else {
                nb + smooth[e][n - nb]
            }
        };

        struct Config {
            m: Vec<u8>,
            circles: Vec<Vec<usize>>,
        }
        let configure = |m: &[u8], e: usize| -> Config {
            let mut seen = vec![false; nb + 4];
            let mut out = vec![0u8; boundary.len()];
            for (i, &start) in node_of.iter().enumerate() {
                if seen[start] {
                    continue;
                }
                let mut n = start;
                loop {
                    seen[n] = true;
                    let a = arc(m, e, n);
                    seen[a] = true;
                    if glue[a] == usize::MAX {
                        out[i] = pos_of_node[a] as u8;
                        out[pos_of_node[a]] = i as u8;
                        break;
                    }
                    n = glue[a];
                }
            }
            let mut circles = Vec::new();
            for start in 0..nb + 4 {
                if seen[start] {
                    continue;
                }
                let mut cyc = Vec::new();
                let mut n = start;
                loop {
                    seen[n] = true;
                    cyc.push(n);
                    let a = arc(m, e, n);
                    seen[a] = true;
                    cyc.push(a);
                    n = glue[a];
                    if n == start {
                        break;
                    }
                }
                circles.push(cyc);
            }
            Config { m: out, circles }
        };

        let mut next = Complex { boundary: boundary.clone(), ..Default::default() };
        let live: Vec<u32> = (0..self.objs.len() as u32).filter(|&i| self.objs[i as usize].is_some()).collect();
        let mut configs: HashMap<(u32, usize), (Config, u32)> = HashMap::new();
        for &o in &live {
            let ob = self.obj(o);
            for e in 0..2 {
                let cf = configure(&ob.m, e);
                let c = cf.circles.len();
                let first = next.objs.len() as u32;
                for lab in 0..1u32 << c {
                    let shift = 2 * lab.count_ones() as i32 - c as i32;
                    next.push(Obj { m: cf.m.clone(), r: ob.r + e as i32, q: ob.q + e as i32 + shift });
                }
                configs.insert((o, e), (cf, first));
            }
        }

        // Builds the cobordism between two configurations from the pieces of an old morphism.
        let build = |src: &Config,
                     dst: &Config,
                     old_piece: &dyn Fn(usize) -> usize,
                     n_old: usize,
                     leg_piece: &dyn Fn(usize) -> usize,
                     n_legs: usize|
         -> (Shape, usize, usize) {
            let mut s = Surface::new();
            for _ in 0..n_old + n_legs {
                s.add(1);
            }
            let piece = |n: usize| if n < nb { old_piece(n) } else { n_old + leg_piece(n - nb) };
            for n in 0..nb + 4 {
                let g = glue[n];
                if g != usize::MAX && n < g {
                    s.glue(piece(n), piece(g), -1);
                }
            }
            let cups = s.parent.len();
            for cyc in &src.circles {
                let cap = s.add(1);
                for &n in cyc {
                    s.glue(cap, piece(n), 0);
                }
            }
            let caps = s.parent.len();
            for cyc in &dst.circles {
                let cap = s.add(1);
                for &n in cyc {
                    s.glue(cap, piece(n), 0);
                }
            }
            let (ol, no) = loops(&src.m, &dst.m);
            let mut out_piece = vec![usize::MAX; no];
            for (p, &l) in ol.iter().enumerate() {
                if out_piece[l as usize] == usize::MAX {
                    out_piece[l as usize] = piece(node_of[p]);
                }
            }
            let bp = bp_mask(&boundary, &ol);
            (s.shape(&out_piece, bp), cups, caps)
        };

        let cap_dots = |src_c: usize, dst_c: usize, ls: u32, lt: u32, cups: usize, caps: usize| -> u64 {
            let mut d = 0u64;
            for i in 0..src_c {
                if (ls >> i) & 1 == 0 {
                    d |= 1 << (cups + i);
                }
            }
            for i in 0..dst_c {
                if (lt >> i) & 1 == 1 {
                    d |= 1 << (caps + i);
                }
            }
            d
        };

        // Old arrows tensored with the identity on each smoothing.
        for &a in &live {
            for (&b, f) in &self.out[a as usize] {
                let (ma, mb) = (&self.obj(a).m, &self.obj(b).m);
                let (ol, n_old) = loops(ma, mb);
                for e in 0..2 {
                    let (ca, fa) = &configs[&(a, e)];
                    let (cb, fb) = &configs[&(b, e)];
                    let strip = |j: usize| if smooth[e][j] < j { smooth[e][j] } else { j };
                    let strip_idx = |j: usize| usize::from(strip(j) != strip(0));
                    let (shape, cups, caps) =
                        build(ca, cb, &|n| ol[n] as usize, n_old, &strip_idx, 2);
                    for ls in 0..1u32 << ca.circles.len() {
                        for lt in 0..1u32 << cb.circles.len() {
                            let cd = cap_dots(ca.circles.len(), cb.circles.len(), ls, lt, cups, caps);
                            let mut acc = Vec::new();
                            for &mono in f {
                                shape.eval(mono as u64 | cd, &mut acc);
                            }
                            next.add_arrow(fa + ls, fb + lt, gf2::normalize(acc));
                        }
                    }
                }
            }
        }

        // The saddle between the two smoothings.
        for &o in &live {
            let m = &self.obj(o).m;
            let (ol, n_old) = loops(m, m);
            let (c0, f0) = &configs[&(o, 0)];
            let (c1, f1) = &configs[&(o, 1)];
            let (shape, cups, caps) = build(c0, c1, &|n| ol[n] as usize, n_old, &|_| 0, 1);
            for ls in 0..1u32 << c0.circles.len() {
                for lt in 0..1u32 << c1.circles.len() {
                    let cd = cap_dots(c0.circles.len(), c1.circles.len(), ls, lt, cups, caps);
                    let mut acc = Vec::new();
                    shape.eval(cd, &mut acc);
                    next.add_arrow(f0 + ls, f1 + lt, gf2::normalize(acc));
                }
            }
        }
        next
    }
}

/// Returns ranks keyed by the standard gradings `(i, j)`.
pub fn kh_ij(d: &PlanarDiagram) -> BTreeMap<(i32, i32), u64> {
    let od = d.orient();
    let (np, nm) = (od.n_plus as i32, od.n_minus as i32);
    let mut out = BTreeMap::new();
    if d.is_empty() {
        // V^(loops - 1) on crossingless circles
        let k = d.loops() as i32 - 1;
        for plus in 0..=k {
            *out.entry((0, 2 * plus - k)).or_insert(0) += binom(k as u64, plus as u64);
        }
        return out;
    }
    let bp = d.effective_basepoint().expect("diagram with crossings has edges");
    let mut seen_bp = false;
    let mut cx = Complex::new();
    for x in d.crossings() {
        let mut ids = x.slots;
        for id in ids.iter_mut() {
            if *id == bp {
                *id = if seen_bp { BP_B } else { BP_A };
                seen_bp = true;
            }
        }
        cx = cx.tensor(x, ids);
        cx.simplify();
    }
    debug_assert!(cx.out.iter().all(|o| o.is_empty()), "residual differential");
    let mut base: BTreeMap<(i32, i32), u64> = BTreeMap::new();
    for o in cx.objs.iter().flatten() {
        *base.entry((o.r - nm, o.q + np - 2 * nm)).or_insert(0) += 1;
    }
    // Free circles: the basepoint sits on a crossing edge, so each one tensors with V.
    let k = d.loops() as i32;
    for ((i, j), r) in base {
        for plus in 0..=k {
            *out.entry((i, j + 2 * plus - k)).or_insert(0) += r * binom(k as u64, plus as u64);
        }
    }
    out
}

fn binom(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}
