//! Independent oracles: Kauffman bracket, Seifert-matrix signature, float eigenvalues.
#![allow(dead_code)]

use std::collections::BTreeMap;

use khwidth::{braid_closure, BraidWord, PlanarDiagram};
use proptest::prelude::*;

/// Laurent polynomial keyed by exponent.
pub type Poly = BTreeMap<i32, i64>;

fn mul(a: &Poly, b: &Poly) -> Poly {
    let mut out = Poly::new();
    for (&ea, &ca) in a {
        for (&eb, &cb) in b {
            *out.entry(ea + eb).or_insert(0) += ca * cb;
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

fn add_into(acc: &mut Poly, p: &Poly) {
    for (&e, &c) in p {
        *acc.entry(e).or_insert(0) += c;
    }
    acc.retain(|_, c| *c != 0);
}

fn loop_value() -> Poly {
    Poly::from([(2, -1), (-2, -1)])
}

fn pow(p: &Poly, k: usize) -> Poly {
    let mut out = Poly::from([(0, 1)]);
    for _ in 0..k {
        out = mul(&out, p);
    }
    out
}

struct Uf(Vec<usize>);

impl Uf {
    fn new(n: usize) -> Self {
        Uf((0..n).collect())
    }
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        self.0[x] = r;
        r
    }
    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        self.0[a] = b;
    }
    fn classes(&mut self, n: usize) -> usize {
        (0..n).filter(|&x| self.find(x) == x).count()
    }
}

/// Bracket state sum plus writhe normalization; returns `V(t)` keyed by doubled `t` exponent.
fn normalize(bracket: Poly, writhe: i64) -> Poly {
    // (-A^3)^(-w)
    let sign = if writhe.rem_euclid(2) == 0 { 1 } else { -1 };
    let shift = -3 * writhe as i32;
    let mut v = Poly::new();
    for (e, c) in bracket {
        // t = A^-4, so A^k = t^(-k/4); doubled exponent -k/2
        let k = e + shift;
        assert!(k % 2 == 0, "odd A-exponent {k}");
        v.insert(-k / 2, sign * c);
    }
    v
}

/// Jones polynomial of a braid closure from the Kauffman bracket, keyed by doubled exponent.
pub fn jones_of_braid(strands: usize, letters: &[i32]) -> Poly {
    let m = letters.len();
    let node = |k: usize, p: usize| (k % m.max(1)) * strands + p;
    let n_nodes = m.max(1) * strands;
    let mut total = Poly::new();
    for state in 0..1u64 << m {
        let mut uf = Uf::new(n_nodes);
        let mut a_count = 0i32;
        for (k, &l) in letters.iter().enumerate() {
            let i = l.unsigned_abs() as usize - 1;
            let a_smoothing = (state >> k) & 1 == 0;
            a_count += if a_smoothing { 1 } else { -1 };
            // positive letters: the A-smoothing is the identity braid
            let vertical = a_smoothing == (l > 0);
            for p in 0..strands {
                if p != i && p != i + 1 {
                    uf.union(node(k, p), node(k + 1, p));
                }
            }
            if vertical {
                uf.union(node(k, i), node(k + 1, i));
                uf.union(node(k, i + 1), node(k + 1, i + 1));
            } else {
                uf.union(node(k, i), node(k, i + 1));
                uf.union(node(k + 1, i), node(k + 1, i + 1));
            }
        }
        let circles = if m == 0 { strands } else { uf.classes(n_nodes) };
        let term = mul(&Poly::from([(a_count, 1)]), &pow(&loop_value(), circles - 1));
        add_into(&mut total, &term);
    }
    let writhe: i64 = letters.iter().map(|&l| l.signum() as i64).sum();
    normalize(total, writhe)
}

/// Jones polynomial of a knot diagram from its raw crossings.
pub fn jones_of_knot(d: &PlanarDiagram) -> Poly {
    let xs = d.crossings();
    let n = xs.len();
    if n == 0 {
        assert_eq!(d.loops(), 1, "expected a knot");
        return Poly::from([(0, 1)]);
    }
    let mut where_: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
    for (c, x) in xs.iter().enumerate() {
        for s in 0..4 {
            where_.entry(x.slots[s]).or_default().push(4 * c + s);
        }
    }
    let other = |h: usize| -> usize {
        let e = xs[h / 4].slots[h % 4];
        let v = &where_[&e];
        if v[0] == h {
            v[1]
        } else {
            v[0]
        }
    };
    // trace the knot, recording which half-edges are entered
    let under0 = if xs[0].odd_under { 1 } else { 0 };
    let mut entered = vec![false; 4 * n];
    let mut h = under0;
    for _ in 0..2 * n {
        entered[h] = true;
        let exit = 4 * (h / 4) + (h % 4 + 2) % 4;
        h = other(exit);
    }
    assert_eq!(h, under0, "expected a single component");
    let mut writhe = 0i64;
    for (c, x) in xs.iter().enumerate() {
        let u = if x.odd_under { 1 } else { 0 };
        let ui = if entered[4 * c + u] { u } else { u + 2 };
        // over strand entering at ui + 3 and leaving at ui + 1 is positive
        let oi = if entered[4 * c + (ui + 3) % 4] { (ui + 3) % 4 } else { (ui + 1) % 4 };
        writhe += if oi == (ui + 3) % 4 { 1 } else { -1 };
    }
    let labels: Vec<u32> = where_.keys().copied().collect();
    let idx = |e: u32| labels.binary_search(&e).unwrap();
    let mut total = Poly::new();
    for state in 0..1u64 << n {
        let mut uf = Uf::new(labels.len());
        let mut a_count = 0;
        for (c, x) in xs.iter().enumerate() {
            let u = if x.odd_under { 1 } else { 0 };
            let a = (state >> c) & 1 == 0;
            a_count += if a { 1 } else { -1 };
            // from the under slot counterclockwise: A joins (u, u+1) and (u+2, u+3)
            let off = if a { 0 } else { 1 };
            let s = |k: usize| idx(x.slots[(u + off + k) % 4]);
            uf.union(s(0), s(1));
            uf.union(s(2), s(3));
        }
        let circles = uf.classes(labels.len()) + d.loops() as usize;
        add_into(&mut total, &mul(&Poly::from([(a_count, 1)]), &pow(&loop_value(), circles - 1)));
    }
    normalize(total, writhe)
}

pub fn abs_at_minus_one(v: &Poly) -> u64 {
    let (mut re, mut im) = (0i64, 0i64);
    for (&e, &c) in v {
        let s = if e.div_euclid(2).rem_euclid(2) == 0 { 1 } else { -1 };
        if e.rem_euclid(2) == 0 {
            re += s * c;
        } else {
            im += s * c;
        }
    }
    (re * re + im * im).isqrt() as u64
}

/// Symmetrized Seifert matrix `V + V^T` of a braid closure; every generator must occur.
pub fn seifert_form(strands: usize, letters: &[i32]) -> Vec<Vec<i64>> {
    let mut loops: Vec<(usize, usize, usize, i32, i32)> = Vec::new();
    for i in 1..strands {
        let pos: Vec<usize> = (0..letters.len()).filter(|&k| letters[k].unsigned_abs() as usize == i).collect();
        assert!(!pos.is_empty(), "generator {i} missing");
        for w in pos.windows(2) {
            loops.push((i, w[0], w[1], letters[w[0]].signum(), letters[w[1]].signum()));
        }
    }
    let n = loops.len();
    let mut m = vec![vec![0i64; n]; n];
    for x in 0..n {
        let (i, a, b, ea, eb) = loops[x];
        m[x][x] = match (ea, eb) {
            (1, 1) => -2,
            (-1, -1) => 2,
            _ => 0,
        };
        for y in 0..n {
            if x == y {
                continue;
            }
            let (j, c, d, _, _) = loops[y];
            if i == j && b == c {
                // consecutive loops share band b
                let v = letters[b].signum() as i64;
                m[x][y] = v;
                m[y][x] = v;
            } else if j == i + 1 && ((a < c && c < b && b < d) || (c < a && a < d && d < b)) {
                let v = if a < c { -1 } else { 1 };
                m[x][y] = v;
                m[y][x] = v;
            }
        }
    }
    m
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations.
pub fn eigenvalues(m: &[Vec<i64>]) -> Vec<f64> {
    let n = m.len();
    let mut a: Vec<Vec<f64>> = m.iter().map(|r| r.iter().map(|&x| x as f64).collect()).collect();
    for _ in 0..100 {
        let off: f64 = (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j))).map(|(i, j)| a[i][j] * a[i][j]).sum();
        if off < 1e-18 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[k][p], a[k][q]);
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    (0..n).map(|i| a[i][i]).collect()
}

/// Signature and `|det|` of a symmetric integer matrix.
pub fn signature_det(m: &[Vec<i64>]) -> (i64, u64) {
    let ev = eigenvalues(m);
    let sig = ev.iter().filter(|&&x| x > 1e-7).count() as i64 - ev.iter().filter(|&&x| x < -1e-7).count() as i64;
    let det: f64 = ev.iter().product();
    (sig, det.abs().round() as u64)
}

/// Signature and determinant of a braid closure from its Seifert form.
pub fn seifert_signature(strands: usize, letters: &[i32]) -> (i64, u64) {
    let m = seifert_form(strands, letters);
    if m.is_empty() {
        return (0, 1);
    }
    signature_det(&m)
}

pub fn closure(strands: u32, letters: &[i32]) -> PlanarDiagram {
    braid_closure(&BraidWord::new(strands, letters.to_vec()).unwrap())
}

/// Random braid words on 2 to 4 strands.
pub fn braid_strategy(max_len: usize) -> impl Strategy<Value = (u32, Vec<i32>)> {
    (2u32..=4).prop_flat_map(move |s| {
        let letter = (1..s as i32).prop_flat_map(|g| prop_oneof![Just(g), Just(-g)]);
        (Just(s), prop::collection::vec(letter, 1..=max_len))
    })
}

/// Random braid words in which every generator occurs.
pub fn connected_braid_strategy(max_len: usize) -> impl Strategy<Value = (u32, Vec<i32>)> {
    braid_strategy(max_len).prop_filter("every generator occurs", |(s, w)| {
        (1..*s as i32).all(|g| w.iter().any(|l| l.abs() == g))
    })
}

/// A braid-level Reidemeister or Markov move applied at a random position.
pub fn apply_move(s: u32, w: &[i32], kind: u8, at: usize, sign: bool) -> (u32, Vec<i32>) {
    let mut w = w.to_vec();
    let at = at % (w.len() + 1);
    let g = 1 + (at as i32 % (s as i32 - 1));
    let e = if sign { 1 } else { -1 };
    match kind % 5 {
        // R2
        0 => {
            w.splice(at..at, [g * e, -g * e]);
        }
        // R3 followed by R2 moves: the inserted word is trivial
        1 if s >= 3 && g < s as i32 - 1 => {
            w.splice(at..at, [g, g + 1, g, -(g + 1), -g, -(g + 1)]);
        }
        // stabilization (R1 in the closure)
        2 => {
            w.push(s as i32 * e);
            return (s + 1, w);
        }
        // conjugation
        3 => {
            let k = at % w.len().max(1);
            w.rotate_left(k);
        }
        // far commutation
        _ => {
            for k in 0..w.len().saturating_sub(1) {
                if (w[k].abs() - w[k + 1].abs()).abs() >= 2 {
                    w.swap(k, k + 1);
                    break;
                }
            }
            w.splice(at..at, [g * e, -g * e]);
        }
    }
    (s, w)
}

/// Standard torus-type braids used as fixed oracle checks.
pub const NAMED_BRAIDS: &[(&str, u32, &[i32])] = &[
    ("right trefoil", 2, &[1, 1, 1]),
    ("left trefoil", 2, &[-1, -1, -1]),
    ("figure eight", 3, &[1, -2, 1, -2]),
    ("cinquefoil", 2, &[1, 1, 1, 1, 1]),
    ("T(3,4)", 3, &[1, 2, 1, 2, 1, 2, 1, 2]),
    ("10_124", 3, &[1, 2, 1, 2, 1, 2, 1, 2, 1, 2]),
    ("positive Hopf", 2, &[1, 1]),
    ("negative Hopf", 2, &[-1, -1]),
    ("5_2 closure", 3, &[1, 1, 1, 2, -1, 2]),
];
