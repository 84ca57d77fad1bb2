//! Width scans over integer slopes and surgery obstructions.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::goeritz;
use crate::khovanov::{reduced_kh_with, width, BigradedRanks, KhOptions};
use crate::tangle::{tau, Slope, Tangle};

/// Consecutive rank-plus-one steps on one diagonal needed to call a tail stable.
pub const TAIL_STEPS: usize = 3;

#[derive(Clone, Copy, Debug)]
pub struct ScanOptions {
    pub window: (i64, i64),
    /// Grow the window until both tails stabilize.
    pub auto_widen: bool,
    /// Largest `|n|` the window may grow to.
    pub max_extent: i64,
    pub kh: KhOptions,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions { window: (-6, 6), auto_widen: true, max_extent: 40, kh: KhOptions::default() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlopeData {
    pub n: i64,
    pub ranks: BigradedRanks,
    pub sigma: i64,
    pub det: u64,
    pub width: usize,
}

impl SlopeData {
    /// Column ranks keyed by `two_delta - sigma`.
    pub fn normalized_columns(&self) -> BTreeMap<i32, u64> {
        self.ranks.columns().into_iter().map(|(d, r)| (d - self.sigma as i32, r)).collect()
    }

    fn mirrored(&self) -> Self {
        SlopeData { n: -self.n, ranks: self.ranks.negated(), sigma: -self.sigma, det: self.det, width: self.width }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Genericity {
    WidthStable,
    ExpansionGeneric,
    DecayGeneric,
    NonGeneric,
    /// Tails not stabilized inside the window.
    Undetermined,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabilityReport {
    pub name: String,
    pub window: (i64, i64),
    pub slopes: Vec<SlopeData>,
    pub w_min: usize,
    pub w_max: usize,
    /// The unique `n` with `w(n) != w(n + 1)`.
    pub ell: Option<i64>,
    pub genericity: Genericity,
    /// Some `m` satisfying the strong genericity test.
    pub strong_generic: Option<i64>,
    /// Growth diagonals (`two_delta - sigma`) of the upper and lower tails.
    pub delta_plus: Option<i32>,
    pub delta_minus: Option<i32>,
    pub stabilized_hi: bool,
    pub stabilized_lo: bool,
    /// `det tau(n) = |n|` across the window.
    pub det_pattern: bool,
}

/// Normalized column map of `n`, with every admissible shift: a zero determinant leaves the
/// signature defined only up to one unit, so those slopes may move by one diagonal.
fn aligned(s: &SlopeData) -> Vec<BTreeMap<i32, u64>> {
    let c = s.normalized_columns();
    if s.det != 0 {
        return vec![c];
    }
    [-1, 1].iter().map(|&k| c.iter().map(|(&d, &r)| (d + k, r)).collect()).collect()
}

/// The diagonal `d` with `b = a + e_d`, if any.
fn unit_step(a: &BTreeMap<i32, u64>, b: &BTreeMap<i32, u64>) -> Option<i32> {
    let keys: std::collections::BTreeSet<i32> = a.keys().chain(b.keys()).copied().collect();
    let mut hit = None;
    for k in keys {
        let (x, y) = (a.get(&k).copied().unwrap_or(0), b.get(&k).copied().unwrap_or(0));
        if y == x {
            continue;
        }
        if y != x + 1 || hit.is_some() {
            return None;
        }
        hit = Some(k);
    }
    hit
}

/// Growth diagonal if the last `TAIL_STEPS` steps along `seq` add one generator on a fixed diagonal.
fn tail(seq: &[&SlopeData]) -> Option<i32> {
    if seq.len() < TAIL_STEPS + 1 {
        return None;
    }
    let mut diag = None;
    for w in seq[seq.len() - TAIL_STEPS - 1..].windows(2) {
        if w[0].det == 0 || w[1].det == 0 {
            return None;
        }
        let d = unit_step(&w[0].normalized_columns(), &w[1].normalized_columns())?;
        if diag.is_some_and(|e| e != d) {
            return None;
        }
        diag = Some(d);
    }
    diag
}

/// Column ranks over the occupied diagonals in order.
fn column_vector(s: &SlopeData) -> Vec<u64> {
    width(&s.ranks).column_ranks
}

/// `wide` is `narrow` with one extra rank-one column at an end whose neighbour has rank above one.
fn generic_step(narrow: &[u64], wide: &[u64]) -> bool {
    if wide.len() != narrow.len() + 1 || narrow.is_empty() {
        return false;
    }
    let k = narrow.len();
    let at_end = wide[k] == 1 && wide[..k] == *narrow && narrow[k - 1] > 1;
    let at_start = wide[0] == 1 && wide[1..] == *narrow && narrow[0] > 1;
    at_end || at_start
}

/// Every occupied diagonal has a `q` with `rk^delta > rk^delta_q > 1`.
pub fn strong_generic_at(r: &BigradedRanks) -> bool {
    r.columns().iter().all(|(&d, &total)| r.column(d).values().any(|&x| x > 1 && x < total))
}

impl StabilityReport {
    /// Derives every summary field from per-slope data.
    pub fn from_slopes(name: String, mut slopes: Vec<SlopeData>) -> Self {
        slopes.sort_by_key(|s| s.n);
        let window = (slopes.first().map_or(0, |s| s.n), slopes.last().map_or(0, |s| s.n));
        let widths: Vec<usize> = slopes.iter().map(|s| s.width).collect();
        let w_min = widths.iter().copied().min().unwrap_or(0);
        let w_max = widths.iter().copied().max().unwrap_or(0);
        let changes: Vec<usize> = (0..slopes.len().saturating_sub(1)).filter(|&i| widths[i] != widths[i + 1]).collect();
        let ell = match changes[..] {
            [i] => Some(slopes[i].n),
            _ => None,
        };
        let up: Vec<&SlopeData> = slopes.iter().collect();
        let down: Vec<&SlopeData> = slopes.iter().rev().collect();
        let delta_plus = tail(&up);
        let delta_minus = tail(&down);
        let (stabilized_hi, stabilized_lo) = (delta_plus.is_some(), delta_minus.is_some());
        let genericity = if !(stabilized_hi && stabilized_lo) {
            Genericity::Undetermined
        } else if changes.is_empty() {
            Genericity::WidthStable
        } else if let [i] = changes[..] {
            let (a, b) = (column_vector(&slopes[i]), column_vector(&slopes[i + 1]));
            if generic_step(&a, &b) {
                Genericity::ExpansionGeneric
            } else if generic_step(&b, &a) {
                Genericity::DecayGeneric
            } else {
                Genericity::NonGeneric
            }
        } else {
            Genericity::NonGeneric
        };
        let strong_generic = slopes.iter().find(|s| strong_generic_at(&s.ranks)).map(|s| s.n);
        let det_pattern = slopes.iter().all(|s| s.det == s.n.unsigned_abs());
        StabilityReport {
            name,
            window,
            slopes,
            w_min,
            w_max,
            ell,
            genericity,
            strong_generic,
            delta_plus,
            delta_minus,
            stabilized_hi,
            stabilized_lo,
            det_pattern,
        }
    }

    pub fn stabilized(&self) -> bool {
        self.stabilized_hi && self.stabilized_lo
    }

    /// Width-stable, expansion or decay generic, or strongly generic.
    pub fn is_generic(&self) -> bool {
        matches!(
            self.genericity,
            Genericity::WidthStable | Genericity::ExpansionGeneric | Genericity::DecayGeneric
        ) || (self.stabilized() && self.strong_generic.is_some())
    }

    pub fn at(&self, n: i64) -> Option<&SlopeData> {
        self.slopes.iter().find(|s| s.n == n)
    }

    pub fn widths(&self) -> BTreeMap<i64, usize> {
        self.slopes.iter().map(|s| (s.n, s.width)).collect()
    }

    /// Report for the mirror tangle, where `tau*(n)` is the mirror of `tau(-n)`.
    pub fn mirrored(&self) -> Self {
        let name = format!("{}*", self.name);
        StabilityReport::from_slopes(name, self.slopes.iter().map(SlopeData::mirrored).collect())
    }

    /// Supports of `n` and `n + 1` are nested under some admissible alignment.
    pub fn nested(&self, n: i64) -> Option<bool> {
        let (a, b) = (self.at(n)?, self.at(n + 1)?);
        Some(aligned(a).iter().any(|x| {
            aligned(b).iter().any(|y| x.keys().all(|k| y.contains_key(k)) || y.keys().all(|k| x.contains_key(k)))
        }))
    }

    fn same_support(&self, n: i64) -> bool {
        let (Some(a), Some(b)) = (self.at(n), self.at(n + 1)) else {
            return false;
        };
        aligned(a).iter().any(|x| aligned(b).iter().any(|y| x.keys().eq(y.keys())))
    }

    fn floor(&self) -> usize {
        if self.is_generic() {
            self.w_min
        } else {
            1
        }
    }

    /// Lower and upper width bounds for `tau(s)`; `None` for an unknown upper bound.
    pub fn interval_bounds(&self, s: Slope) -> (usize, Option<usize>) {
        if s.is_infinite() {
            return (1, Some(1));
        }
        if s.q == 1 {
            if let Some(d) = self.at(s.p) {
                return (d.width, Some(d.width));
            }
        }
        let n = s.p.div_euclid(s.q);
        let (lo, hi) = self.window;
        if n >= hi {
            return self.tail_bounds(hi, self.stabilized_hi);
        }
        if n < lo {
            return self.tail_bounds(lo, self.stabilized_lo);
        }
        let (a, b) = (self.at(n).map(|d| d.width), self.at(n + 1).map(|d| d.width));
        let (Some(a), Some(b)) = (a, b) else {
            return (self.floor(), None);
        };
        let upper = a.max(b);
        let lower = if a == b && self.same_support(n) { a } else { self.floor() };
        (lower.min(upper), Some(upper))
    }

    fn tail_bounds(&self, edge: i64, stable: bool) -> (usize, Option<usize>) {
        match (stable, self.at(edge)) {
            (true, Some(d)) => (d.width, Some(d.width)),
            _ => (self.floor(), None),
        }
    }
}

/// Computes `tau(n)` data for one integer slope.
pub fn slope_data(t: &Tangle, n: i64, kh: KhOptions) -> Result<SlopeData> {
    let d = tau(t, Slope::integer(n))?;
    let ranks = reduced_kh_with(&d, kh)?;
    let sigma = goeritz::signature(&d)?;
    let det = goeritz::determinant(&d)?;
    Ok(SlopeData { n, width: width(&ranks).width, ranks, sigma, det })
}

/// Scans integer slopes, widening the window until both tails stabilize or the extent cap is hit.
pub fn scan_integers(t: &Tangle, opts: ScanOptions) -> Result<StabilityReport> {
    let (mut lo, mut hi) = opts.window;
    if lo >= hi {
        return Err(Error::Invalid(format!("empty window {lo}..{hi}")));
    }
    let name = t.name.clone().unwrap_or_else(|| "tangle".into());
    let mut data: BTreeMap<i64, SlopeData> = BTreeMap::new();
    loop {
        let todo: Vec<i64> = (lo..=hi).filter(|n| !data.contains_key(n)).collect();
        let fresh: Vec<SlopeData> = todo.par_iter().map(|&n| slope_data(t, n, opts.kh)).collect::<Result<_>>()?;
        data.extend(fresh.into_iter().map(|s| (s.n, s)));
        let rep = StabilityReport::from_slopes(name.clone(), data.values().cloned().collect());
        if !opts.auto_widen || rep.stabilized() {
            return Ok(rep);
        }
        let step = TAIL_STEPS as i64;
        let (nlo, nhi) = (
            if rep.stabilized_lo { lo } else { (lo - step).max(-opts.max_extent) },
            if rep.stabilized_hi { hi } else { (hi + step).min(opts.max_extent) },
        );
        if (nlo, nhi) == (lo, hi) {
            return Ok(rep);
        }
        (lo, hi) = (nlo, nhi);
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Lens,
    Finite,
}

impl Mode {
    /// Widths above this rule out the filling type.
    pub fn threshold(self) -> usize {
        match self {
            Mode::Lens => 1,
            Mode::Finite => 2,
        }
    }
}

impl std::str::FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lens" => Ok(Mode::Lens),
            "finite" => Ok(Mode::Finite),
            _ => Err(Error::Invalid(format!("unknown mode {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Obstructed,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntervalVerdict {
    /// Closed interval of slopes; `None` at an end means unbounded.
    pub from: Option<i64>,
    pub to: Option<i64>,
    pub lower: usize,
    pub upper: Option<usize>,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObstructionReport {
    pub mode: Mode,
    pub generic: bool,
    pub w_min: usize,
    pub intervals: Vec<IntervalVerdict>,
    pub notes: Vec<String>,
}

impl ObstructionReport {
    pub fn all_obstructed(&self) -> bool {
        self.intervals.iter().all(|i| i.verdict == Verdict::Obstructed)
    }
}

fn verdict(lower: usize, mode: Mode) -> Verdict {
    if lower > mode.threshold() {
        Verdict::Obstructed
    } else {
        Verdict::Inconclusive
    }
}

/// Verdicts for the slopes `s >= 0` of the scanned tangle, excluding the trivial slope `1/0`.
pub fn obstruct(rep: &StabilityReport, mode: Mode) -> ObstructionReport {
    let mut intervals = Vec::new();
    let mut notes = Vec::new();
    let hi = rep.window.1.max(0);
    for n in 0..hi {
        let (lower, upper) = rep.interval_bounds(Slope { p: 2 * n + 1, q: 2 });
        intervals.push(IntervalVerdict { from: Some(n), to: Some(n + 1), lower, upper, verdict: verdict(lower, mode) });
    }
    let (lower, upper) = rep.tail_bounds(hi, rep.stabilized_hi);
    intervals.push(IntervalVerdict { from: Some(hi), to: None, lower, upper, verdict: verdict(lower, mode) });
    if !rep.stabilized() {
        notes.push(format!("tails not stabilized on {}..{}; widen the window", rep.window.0, rep.window.1));
    }
    if !rep.is_generic() {
        notes.push("tangle is not generic; only local width agreement gives bounds".into());
    }
    if !rep.det_pattern {
        notes.push("det tau(n) != |n| somewhere in the window; the tangle may not be calibrated".into());
    }
    ObstructionReport { mode, generic: rep.is_generic(), w_min: rep.w_min, intervals, notes }
}

/// Both sides: nonnegative slopes from `rep` and negative slopes from the mirrored report.
pub fn obstruct_all(rep: &StabilityReport, mode: Mode) -> ObstructionReport {
    let pos = obstruct(rep, mode);
    let neg = obstruct(&rep.mirrored(), mode);
    let mut intervals: Vec<IntervalVerdict> = neg
        .intervals
        .into_iter()
        .rev()
        .map(|i| IntervalVerdict { from: i.to.map(|x| -x), to: i.from.map(|x| -x), ..i })
        .collect();
    intervals.extend(pos.intervals);
    let mut notes = pos.notes;
    notes.push("1/0 is the trivial filling and is not assessed".into());
    ObstructionReport { mode, generic: pos.generic, w_min: pos.w_min, intervals, notes }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum UnknotCertificate {
    IsTrivialPattern,
    IsNontrivial,
    Inconclusive,
}

/// Thin `tau(n)` for every nonzero `n` (both tails stable and thin) versus some thick `tau(n)`.
pub fn unknot_certificate(rep: &StabilityReport, mirrored: &StabilityReport) -> UnknotCertificate {
    let thick = |r: &StabilityReport| r.slopes.iter().any(|s| s.n != 0 && s.width > 1);
    if thick(rep) || thick(mirrored) {
        return UnknotCertificate::IsNontrivial;
    }
    if rep.stabilized() && mirrored.stabilized() {
        UnknotCertificate::IsTrivialPattern
    } else {
        UnknotCertificate::Inconclusive
    }
}
