//! Reduced Khovanov homology over F2 in the diagonal grading.
//!
//! Internally the standard gradings `(i, j)` are used; the exported gradings are
//! `q = j / 2` and `delta = i - j / 2`, both stored doubled.

pub mod gf2;
pub mod naive;
pub mod scan;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::diagram::PlanarDiagram;
use crate::error::{Error, Result};
use crate::goeritz;

pub const DEFAULT_CAPACITY: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Naive,
    #[default]
    Scan,
}

impl std::str::FromStr for Backend {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "naive" => Ok(Backend::Naive),
            "scan" => Ok(Backend::Scan),
            _ => Err(Error::Invalid(format!("unknown backend {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct KhOptions {
    pub backend: Backend,
    /// Crossing cap for the naive backend.
    pub capacity: usize,
}

impl Default for KhOptions {
    fn default() -> Self {
        KhOptions { backend: Backend::Scan, capacity: DEFAULT_CAPACITY }
    }
}

/// Ranks on the `(two_delta, two_q)` lattice.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BigradedRanks {
    #[serde(with = "entry_list")]
    entries: BTreeMap<(i32, i32), u64>,
    absolute: bool,
}

/// Entries as a list of `[two_delta, two_q, rank]`, since JSON keys must be strings.
mod entry_list {
    use std::collections::BTreeMap;

    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(m: &BTreeMap<(i32, i32), u64>, s: S) -> Result<S::Ok, S::Error> {
        let v: Vec<(i32, i32, u64)> = m.iter().map(|(&(d, q), &r)| (d, q, r)).collect();
        v.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BTreeMap<(i32, i32), u64>, D::Error> {
        let v: Vec<(i32, i32, u64)> = Vec::deserialize(d)?;
        Ok(v.into_iter().map(|(d, q, r)| ((d, q), r)).collect())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WidthProfile {
    pub width: usize,
    /// Total rank per occupied delta column, by increasing delta.
    pub column_ranks: Vec<u64>,
}

impl BigradedRanks {
    pub fn from_doubled(entries: BTreeMap<(i32, i32), u64>, absolute: bool) -> Self {
        BigradedRanks { entries: entries.into_iter().filter(|&(_, r)| r > 0).collect(), absolute }
    }

    /// From ranks keyed by the standard `(i, j)` gradings.
    pub fn from_ij(ij: &BTreeMap<(i32, i32), u64>) -> Self {
        let entries = ij.iter().filter(|(_, &r)| r > 0).map(|(&(i, j), &r)| ((2 * i - j, j), r)).collect();
        BigradedRanks { entries, absolute: true }
    }

    pub fn unknot() -> Self {
        Self::from_doubled(BTreeMap::from([((0, 0), 1)]), true)
    }

    pub fn entries(&self) -> &BTreeMap<(i32, i32), u64> {
        &self.entries
    }

    pub fn is_absolute(&self) -> bool {
        self.absolute
    }

    pub fn get(&self, two_delta: i32, two_q: i32) -> u64 {
        self.entries.get(&(two_delta, two_q)).copied().unwrap_or(0)
    }

    pub fn total_rank(&self) -> u64 {
        self.entries.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Total rank per `two_delta`.
    pub fn columns(&self) -> BTreeMap<i32, u64> {
        let mut c = BTreeMap::new();
        for (&(d, _), &r) in &self.entries {
            *c.entry(d).or_insert(0) += r;
        }
        c
    }

    /// Ranks of one delta column keyed by `two_q`.
    pub fn column(&self, two_delta: i32) -> BTreeMap<i32, u64> {
        self.entries.iter().filter(|((d, _), _)| *d == two_delta).map(|(&(_, q), &r)| (q, r)).collect()
    }

    pub fn shifted(&self, d_two_delta: i32, d_two_q: i32) -> Self {
        BigradedRanks {
            entries: self.entries.iter().map(|(&(d, q), &r)| ((d + d_two_delta, q + d_two_q), r)).collect(),
            absolute: self.absolute,
        }
    }

    /// Both gradings negated, as for the mirror image.
    pub fn negated(&self) -> Self {
        BigradedRanks {
            entries: self.entries.iter().map(|(&(d, q), &r)| ((-d, -q), r)).collect(),
            absolute: self.absolute,
        }
    }

    /// Translated so the smallest occupied `(two_delta, two_q)` is the origin; marked relative.
    pub fn relative(&self) -> Self {
        let d0 = self.entries.keys().map(|k| k.0).min().unwrap_or(0);
        let q0 = self.entries.keys().map(|k| k.1).min().unwrap_or(0);
        let mut r = self.shifted(-d0, -q0);
        r.absolute = false;
        r
    }

    /// Equality up to an overall translation.
    pub fn relative_eq(&self, other: &Self) -> bool {
        self.relative().entries == other.relative().entries
    }

    /// Parity lattice: `two_delta + two_q` is even everywhere.
    pub fn parity_ok(&self) -> bool {
        self.entries.keys().all(|&(d, q)| (d + q).rem_euclid(2) == 0)
    }
}

pub fn width(r: &BigradedRanks) -> WidthProfile {
    let column_ranks: Vec<u64> = r.columns().into_values().collect();
    WidthProfile { width: column_ranks.len(), column_ranks }
}

/// `|sum over delta of (-1)^delta rk|`.
pub fn euler(r: &BigradedRanks) -> u64 {
    let cols = r.columns();
    let Some(&d0) = cols.keys().next() else { return 0 };
    let s: i64 = cols
        .iter()
        .map(|(&d, &n)| if ((d - d0) / 2).rem_euclid(2) == 0 { n as i64 } else { -(n as i64) })
        .sum();
    s.unsigned_abs()
}

/// Laurent polynomial in `t^(1/2)`, keyed by doubled exponent.
#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Laurent {
    pub coeffs: BTreeMap<i32, i64>,
}

impl Laurent {
    pub fn add_term(&mut self, two_exp: i32, c: i64) {
        let e = self.coeffs.entry(two_exp).or_insert(0);
        *e += c;
        if *e == 0 {
            self.coeffs.remove(&two_exp);
        }
    }

    /// `|V(-1)|`, taking `(-1)^(1/2) = i`.
    pub fn abs_at_minus_one(&self) -> u64 {
        let (mut re, mut im) = (0i64, 0i64);
        for (&e, &c) in &self.coeffs {
            let sign = if e.div_euclid(2).rem_euclid(2) == 0 { 1 } else { -1 };
            if e.rem_euclid(2) == 0 {
                re += sign * c;
            } else {
                im += sign * c;
            }
        }
        // only one of the two parts is nonzero for a link polynomial
        (re.abs() + im.abs()) as u64
    }
}

impl fmt::Display for Laurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        for (k, (&e, &c)) in self.coeffs.iter().enumerate() {
            let sign = if c < 0 { "-" } else if k > 0 { "+" } else { "" };
            let sep = if k > 0 { " " } else { "" };
            let mag = c.unsigned_abs();
            let exp = if e % 2 == 0 { format!("{}", e / 2) } else { format!("{e}/2") };
            let coef = if mag == 1 && e != 0 { String::new() } else { mag.to_string() };
            if k > 0 {
                write!(f, " {sign}{sep}")?;
            } else {
                write!(f, "{sign}")?;
            }
            match e {
                0 => write!(f, "{mag}")?,
                2 => write!(f, "{coef}t")?,
                _ => write!(f, "{coef}t^{exp}")?,
            }
        }
        Ok(())
    }
}

/// Jones polynomial with `V(unknot) = 1` and `V(right trefoil) = t + t^3 - t^4`.
pub fn jones(r: &BigradedRanks) -> Result<Laurent> {
    if !r.absolute {
        return Err(Error::Invalid("jones needs absolute gradings".into()));
    }
    let mut v = Laurent::default();
    for (&(d, q), &n) in &r.entries {
        let i = (d + q) / 2;
        let sign = if (i + q).rem_euclid(2) == 0 { 1 } else { -1 };
        v.add_term(q, sign * n as i64);
    }
    Ok(v)
}

/// Shifts delta by `-sigma / 2`.
pub fn sigma_normalize(r: &BigradedRanks, sigma: i64) -> BigradedRanks {
    r.shifted(-sigma as i32, 0)
}

pub fn reduced_kh(d: &PlanarDiagram, backend: Backend) -> Result<BigradedRanks> {
    reduced_kh_with(d, KhOptions { backend, ..Default::default() })
}

pub fn reduced_kh_with(d: &PlanarDiagram, opts: KhOptions) -> Result<BigradedRanks> {
    let ij = match opts.backend {
        Backend::Naive => {
            if d.len() > opts.capacity {
                return Err(Error::Capacity { crossings: d.len(), cap: opts.capacity });
            }
            naive::kh_ij(d)
        }
        Backend::Scan => scan::kh_ij(d),
    };
    Ok(BigradedRanks::from_ij(&ij))
}

/// ASCII grid: delta grows to the right, q grows upward, blanks for zero.
pub fn render_grid(r: &BigradedRanks) -> String {
    if r.is_empty() {
        return String::from("(empty)\n");
    }
    let ds: Vec<i32> = r.columns().into_keys().collect();
    let (dmin, dmax) = (ds[0], *ds.last().unwrap());
    let qmin = r.entries.keys().map(|k| k.1).min().unwrap();
    let qmax = r.entries.keys().map(|k| k.1).max().unwrap();
    let half = |x: i32| if x % 2 == 0 { format!("{}", x / 2) } else { format!("{x}/2") };
    let cell = r.entries.values().map(|n| n.to_string().len()).max().unwrap().max(4);
    let label_w = (qmin..=qmax).map(|q| half(q).len()).max().unwrap().max(5);
    let mut s = String::new();
    // all two_q share one parity, so rows step by one unit of q
    for q in (qmin..=qmax).rev().step_by(2) {
        s.push_str(&format!("{:>label_w$} |", half(q)));
        for d in (dmin..=dmax).step_by(2) {
            match r.entries.get(&(d, q)) {
                Some(n) => s.push_str(&format!(" {n:>cell$}")),
                None => s.push_str(&format!(" {:>cell$}", "")),
            }
        }
        s.push('\n');
    }
    s.push_str(&format!("{:>label_w$} +{}\n", "", "-".repeat((cell + 1) * ((dmax - dmin) / 2 + 1) as usize)));
    s.push_str(&format!("{:>label_w$}  ", "δ"));
    for d in (dmin..=dmax).step_by(2) {
        s.push_str(&format!(" {:>cell$}", half(d)));
    }
    s.push('\n');
    s
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SkeinCase {
    /// `det L = det L0 + det L1` with both positive.
    Additive,
    /// `det L0 = 0` and `det L = det L1 != 0`.
    DegenerateZero,
    /// `det L1 = 0` and `det L = det L0 != 0`.
    DegenerateOne,
    Inapplicable,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkeinReport {
    pub case: SkeinCase,
    pub dets: (u64, u64, u64),
    pub sigmas: (i64, i64, i64),
    /// `n_-(L1) - n_-(L)` for the orientation of `L1` chosen below.
    pub c: i64,
    pub support_ok: bool,
    /// `rk L0 + rk L1 - rk L`.
    pub rank_defect: i64,
}

fn support(r: &BigradedRanks) -> std::collections::BTreeSet<i32> {
    r.columns().into_keys().collect()
}

/// Checks the skein exact triangle at crossing `c` in sigma-normalized gradings.
///
/// Supports are compared as sets of doubled delta values. In the additive case the
/// normalized supports of `L0` and `L1` sit in the same diagonals as `L`. In the
/// degenerate cases the vanishing side is shifted by a half step in either direction.
pub fn skein_check(d: &PlanarDiagram, c: usize, backend: Backend) -> Result<SkeinReport> {
    let l0 = d.resolve(c, 0)?;
    let l1 = d.resolve(c, 1)?;
    let kh = |x: &PlanarDiagram| reduced_kh(x, backend);
    let (k, k0, k1) = (kh(d)?, kh(&l0)?, kh(&l1)?);
    let det = |x: &PlanarDiagram| goeritz::determinant(x);
    let sig = |x: &PlanarDiagram| goeritz::signature(x);
    let dets = (det(d)?, det(&l0)?, det(&l1)?);
    let sigmas = (sig(d)?, sig(&l0)?, sig(&l1)?);
    let n_minus = |x: &PlanarDiagram| x.orient().n_minus as i64;
    let c_val = n_minus(&l1) - n_minus(d);
    let case = if dets.1 > 0 && dets.2 > 0 && dets.0 == dets.1 + dets.2 {
        SkeinCase::Additive
    } else if dets.1 == 0 && dets.0 == dets.2 && dets.0 != 0 {
        SkeinCase::DegenerateZero
    } else if dets.2 == 0 && dets.0 == dets.1 && dets.0 != 0 {
        SkeinCase::DegenerateOne
    } else {
        SkeinCase::Inapplicable
    };
    let rank_defect = k0.total_rank() as i64 + k1.total_rank() as i64 - k.total_rank() as i64;
    let s = support(&sigma_normalize(&k, sigmas.0));
    let s0 = support(&sigma_normalize(&k0, sigmas.1));
    let s1 = support(&sigma_normalize(&k1, sigmas.2));
    let widen = |set: &std::collections::BTreeSet<i32>| -> std::collections::BTreeSet<i32> {
        set.iter().flat_map(|&x| [x - 1, x + 1]).collect()
    };
    let allowed: std::collections::BTreeSet<i32> = match case {
        SkeinCase::Additive => s0.union(&s1).copied().collect(),
        SkeinCase::DegenerateZero => widen(&s0).union(&s1).copied().collect(),
        SkeinCase::DegenerateOne => s0.union(&widen(&s1)).copied().collect(),
        SkeinCase::Inapplicable => s.clone(),
    };
    let support_ok = s.is_subset(&allowed) && rank_defect >= 0 && rank_defect % 2 == 0;
    Ok(SkeinReport { case, dets, sigmas, c: c_val, support_ok, rank_defect })
}
