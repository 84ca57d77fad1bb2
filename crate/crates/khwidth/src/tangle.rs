//! Four-ended tangles, continued fractions, and the closures `tau(p/q)`.
//!
//! A rational tangle of slope `p/q` is attached outside the tangle by a 3-braid
//! acting on the endpoints SW, SE and NE (NW stays fixed): `sigma_2` twists SE
//! with NE and `sigma_1` twists SW with SE. The odd closure joins NW to NE and
//! SW to SE; the even closure joins NW to SW and NE to SE.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::diagram::{braid_crossing, BraidWord, Crossing, EdgeId, LabelUnion, PlanarDiagram};
use crate::error::{Error, Result};
use crate::goeritz;
use crate::khovanov::{reduced_kh, Backend};

pub const NW: usize = 0;
pub const NE: usize = 1;
pub const SW: usize = 2;
pub const SE: usize = 3;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tangle {
    crossings: Vec<Crossing>,
    /// Edge labels at NW, NE, SW, SE. Two ports may share a label when an arc joins them directly.
    ports: [EdgeId; 4],
    pub name: Option<String>,
    /// Index where attached twist crossings are listed, so a braid-cut tangle closes in
    /// braid-letter order.
    splice: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Slope {
    pub p: i64,
    pub q: i64,
}

impl Slope {
    pub fn new(p: i64, q: i64) -> Result<Self> {
        if p == 0 && q == 0 {
            return Err(Error::Invalid("0/0 is not a slope".into()));
        }
        let g = gcd(p.unsigned_abs(), q.unsigned_abs()) as i64;
        let (mut p, mut q) = (p / g, q / g);
        if q < 0 || (q == 0 && p < 0) {
            p = -p;
            q = -q;
        }
        Ok(Slope { p, q })
    }

    pub fn integer(n: i64) -> Self {
        Slope { p: n, q: 1 }
    }

    pub fn infinity() -> Self {
        Slope { p: 1, q: 0 }
    }

    pub fn is_infinite(&self) -> bool {
        self.q == 0
    }

    pub fn is_negative(&self) -> bool {
        self.q > 0 && self.p < 0
    }

    pub fn negated(&self) -> Self {
        if self.q == 0 {
            *self
        } else {
            Slope { p: -self.p, q: self.q }
        }
    }
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.p, self.q)
    }
}

impl std::str::FromStr for Slope {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Invalid(format!("bad slope {s:?}"));
        match s.split_once('/') {
            Some((p, q)) => Slope::new(p.trim().parse().map_err(|_| bad())?, q.trim().parse().map_err(|_| bad())?),
            None => Ok(Slope::integer(s.trim().parse().map_err(|_| bad())?)),
        }
    }
}

pub(crate) fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// `[a1, ..., ar]` with `a1 >= 0` and later terms positive.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContinuedFraction {
    pub terms: Vec<i64>,
}

impl ContinuedFraction {
    pub fn new(terms: Vec<i64>) -> Result<Self> {
        if terms.first().is_some_and(|&a| a < 0) || terms.iter().skip(1).any(|&a| a <= 0) {
            return Err(Error::Invalid(format!("{terms:?} is not in normal form")));
        }
        Ok(ContinuedFraction { terms }.normalized())
    }

    /// Folds a trailing 1 into its predecessor.
    fn normalized(mut self) -> Self {
        while self.terms.len() > 1 && *self.terms.last().unwrap() == 1 {
            self.terms.pop();
            *self.terms.last_mut().unwrap() += 1;
        }
        self
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn value(&self) -> Slope {
        // evaluate from the back: x = a_i + 1/x
        let (mut p, mut q) = (1i64, 0i64);
        for &a in self.terms.iter().rev() {
            (p, q) = (a * p + q, p);
        }
        Slope::new(p, q).expect("nonzero")
    }
}

pub fn cf_expand(s: Slope) -> Result<ContinuedFraction> {
    if s.is_negative() {
        return Err(Error::Invalid("negative slopes are handled by mirroring".into()));
    }
    let (mut p, mut q) = (s.p, s.q);
    let mut terms = Vec::new();
    while q != 0 {
        terms.push(p.div_euclid(q));
        (p, q) = (q, p.rem_euclid(q));
    }
    Ok(ContinuedFraction { terms }.normalized())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Closure {
    /// NW to NE, SW to SE.
    Odd,
    /// NW to SW, NE to SE.
    Even,
}

/// The 0- and 1-resolutions of the terminal crossing, and whether `r` is odd.
pub fn cf_resolve(cf: &ContinuedFraction) -> Result<(ContinuedFraction, ContinuedFraction, bool)> {
    let r = cf.terms.len();
    if r == 0 {
        return Err(Error::Invalid("1/0 has no terminal crossing".into()));
    }
    let shorter = ContinuedFraction { terms: cf.terms[..r - 1].to_vec() };
    let mut t = cf.terms.clone();
    t[r - 1] -= 1;
    if t[r - 1] == 0 && r > 1 {
        // [.., a, 0] is not reachable from a normal form with a_r > 1
        return Err(Error::Invalid("continued fraction not normalized".into()));
    }
    let decremented = ContinuedFraction { terms: t }.normalized();
    let odd = r % 2 == 1;
    Ok(if odd { (decremented, shorter, true) } else { (shorter, decremented, false) })
}

/// Letters on three positions: `2` twists SE with NE, `-1` twists SW with SE.
pub fn braid_of_cf(cf: &ContinuedFraction) -> (BraidWord, Closure) {
    let mut letters = Vec::new();
    for (i, &a) in cf.terms.iter().enumerate() {
        let (g, sign) = if i % 2 == 0 { (2, 1) } else { (1, -1) };
        let l = g * sign * a.signum() as i32;
        letters.extend(std::iter::repeat_n(l, a.unsigned_abs() as usize));
    }
    let closure = if cf.terms.len() % 2 == 1 { Closure::Odd } else { Closure::Even };
    (BraidWord { strands: 3, letters }, closure)
}

impl Tangle {
    pub fn new(crossings: Vec<Crossing>, ports: [EdgeId; 4], name: Option<String>) -> Result<Self> {
        let splice = crossings.len();
        let t = Tangle { crossings, ports, name, splice };
        t.validate()?;
        Ok(t)
    }

    fn validate(&self) -> Result<()> {
        let mut count: BTreeMap<EdgeId, u32> = BTreeMap::new();
        for x in &self.crossings {
            for &e in &x.slots {
                *count.entry(e).or_default() += 1;
            }
        }
        for &p in &self.ports {
            *count.entry(p).or_default() += 1;
        }
        if let Some((e, n)) = count.iter().find(|(_, &n)| n != 2) {
            return Err(Error::InvalidDiagram(format!("tangle edge {e} appears {n} times")));
        }
        // planarity of both rational closures
        self.close(&[], Closure::Odd)?;
        self.close(&[], Closure::Even)?;
        Ok(())
    }

    /// The trivial 0-tangle: arcs NW to NE and SW to SE.
    pub fn trivial() -> Self {
        Tangle { crossings: vec![], ports: [0, 0, 1, 1], name: Some("trivial".into()), splice: 0 }
    }

    /// Tangle cut from the closure of `lower * upper` on `strands` strands, between positions
    /// `k` and `k + 1` (1-based). NE and SE are the ends leaving `lower`; NW and SW enter `upper`.
    pub fn from_braid_cut(strands: u32, k: u32, lower: &[i32], upper: &[i32], name: Option<String>) -> Result<Self> {
        let s = strands as usize;
        if k == 0 || k >= strands {
            return Err(Error::Invalid(format!("cut {k} out of range for {strands} strands")));
        }
        BraidWord::new(strands, lower.to_vec())?;
        BraidWord::new(strands, upper.to_vec())?;
        let mut next: EdgeId = s as EdgeId;
        let mut cur: Vec<EdgeId> = (0..s as EdgeId).collect();
        let mut crossings = Vec::new();
        let mut apply = |word: &[i32], cur: &mut Vec<EdgeId>, next: &mut EdgeId| {
            for &l in word {
                let i = l.unsigned_abs() as usize - 1;
                let (x2, y2) = (*next, *next + 1);
                *next += 2;
                crossings.push(braid_crossing(l > 0, cur[i], cur[i + 1], x2, y2));
                cur[i] = x2;
                cur[i + 1] = y2;
            }
        };
        apply(lower, &mut cur, &mut next);
        let k = k as usize - 1;
        let (ne, se) = (cur[k], cur[k + 1]);
        let (nw, sw) = (next, next + 1);
        next += 2;
        cur[k] = nw;
        cur[k + 1] = sw;
        apply(upper, &mut cur, &mut next);
        // close the braid: top of each position is its bottom edge
        let mut uf = LabelUnion::default();
        for (i, &t) in cur.iter().enumerate() {
            uf.union(i as EdgeId, t);
        }
        for x in crossings.iter_mut() {
            for e in x.slots.iter_mut() {
                *e = uf.find(*e);
            }
        }
        let ports = [nw, ne, sw, se].map(|p| uf.find(p));
        let splice = lower.len();
        Ok(Tangle { splice, ..Tangle::new(crossings, ports, name)? })
    }

    pub fn crossings(&self) -> &[Crossing] {
        &self.crossings
    }

    pub fn ports(&self) -> [EdgeId; 4] {
        self.ports
    }

    pub fn len(&self) -> usize {
        self.crossings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.crossings.is_empty()
    }

    pub fn mirror(&self) -> Self {
        Tangle {
            crossings: self.crossings.iter().map(Crossing::mirrored).collect(),
            ports: self.ports,
            name: self.name.as_ref().map(|n| format!("{n}*")),
            splice: self.splice,
        }
    }

    fn fresh(&self) -> EdgeId {
        self.crossings.iter().flat_map(|x| x.slots).chain(self.ports).max().map_or(0, |m| m + 1)
    }

    /// Appends `f` twists of SE with NE, shifting every integer slope by `-f`.
    pub fn twisted(&self, f: i64) -> Self {
        let letters: Vec<i32> = std::iter::repeat_n(if f > 0 { 2 } else { -2 }, f.unsigned_abs() as usize).collect();
        let (crossings, ports) = self.attach(&letters);
        Tangle { crossings, ports, name: self.name.clone(), splice: self.splice + f.unsigned_abs() as usize }
    }

    /// Adds twist crossings outside the tangle; returns all crossings and the new ports.
    fn attach(&self, letters: &[i32]) -> (Vec<Crossing>, [EdgeId; 4]) {
        let mut next = self.fresh();
        let mut added = Vec::with_capacity(letters.len());
        let mut p = self.ports;
        for &l in letters {
            let (a, b) = (next, next + 1);
            next += 2;
            match l {
                2 | -2 => {
                    let (se, ne) = (p[SE], p[NE]);
                    added.push(braid_crossing(l > 0, ne, se, a, b));
                    p[NE] = a;
                    p[SE] = b;
                }
                1 | -1 => {
                    let (sw, se) = (p[SW], p[SE]);
                    // SE and SW meet below the tangle; SW' and SE' continue outward
                    let x = Crossing { slots: [se, sw, a, b], odd_under: l > 0 };
                    added.push(x);
                    p[SW] = a;
                    p[SE] = b;
                }
                _ => unreachable!("three-position braid"),
            }
        }
        let mut crossings = self.crossings.clone();
        crossings.splice(self.splice..self.splice, added);
        (crossings, p)
    }

    /// Attaches the twists and closes.
    pub fn close(&self, letters: &[i32], closure: Closure) -> Result<PlanarDiagram> {
        let (crossings, p) = self.attach(letters);
        let joins = match closure {
            Closure::Odd => [(p[NW], p[NE]), (p[SW], p[SE])],
            Closure::Even => [(p[NW], p[SW]), (p[NE], p[SE])],
        };
        let mut uf = LabelUnion::default();
        for (a, b) in joins {
            uf.union(a, b);
        }
        let mut used = std::collections::BTreeSet::new();
        let crossings: Vec<Crossing> = crossings
            .into_iter()
            .map(|mut x| {
                for e in x.slots.iter_mut() {
                    *e = uf.find(*e);
                    used.insert(*e);
                }
                x
            })
            .collect();
        let classes: std::collections::BTreeSet<EdgeId> = p.iter().map(|&e| uf.find(e)).collect();
        let loops = classes.iter().filter(|c| !used.contains(c)).count() as u32;
        let nw = uf.find(p[NW]);
        let basepoint = used.contains(&nw).then_some(nw);
        PlanarDiagram::new(crossings, loops, basepoint, self.name.clone())
    }
}

/// The closure `tau(s)`; negative slopes use the mirror image of the tangle.
pub fn tau(t: &Tangle, s: Slope) -> Result<PlanarDiagram> {
    if s.is_negative() {
        return Ok(tau(&t.mirror(), s.negated())?.mirror());
    }
    let cf = cf_expand(s)?;
    let (word, closure) = braid_of_cf(&cf);
    let d = t.close(&word.letters, closure)?;
    let label = format!("{}({})", t.name.as_deref().unwrap_or("tau"), s);
    Ok(d.with_label(label))
}

/// Index of the terminal crossing of `tau(s)` for `s >= 0` with a nonempty expansion.
pub fn terminal_crossing(t: &Tangle, s: Slope) -> Option<usize> {
    let cf = cf_expand(s).ok()?;
    let (word, _) = braid_of_cf(&cf);
    (!word.letters.is_empty()).then(|| t.splice + word.letters.len() - 1)
}

/// Finds the offset `f` with `det tau(n + f) = |n|` for `n` in `-2..=2`, searching `lo..=hi`.
pub fn calibrate(t: &Tangle, lo: i64, hi: i64) -> Result<i64> {
    let unit = reduced_kh(&tau(t, Slope::infinity())?, Backend::Scan)?.total_rank() == 1;
    if unit {
        for f in lo..=hi {
            let mut ok = true;
            for n in -2..=2i64 {
                if goeritz::determinant(&tau(t, Slope::integer(n + f))?)? != n.unsigned_abs() {
                    ok = false;
                    break;
                }
            }
            if ok {
                return Ok(f);
            }
        }
    }
    Err(Error::NotPreferred { lo, hi })
}
