//! Line-based text format for links and tangles.
//!
//! ```text
//! # comments start with '#'
//! link trefoil
//! braid 2: 1 1 1
//!
//! link hopf
//! pd ccw            # or `pd cw`; each row starts at the incoming understrand
//! X 1 3 2 4
//! X 3 1 4 2
//! basepoint 1       # optional
//! loops 0           # optional extra unknotted circles
//!
//! tangle fig8
//! braid 3 cut 2: -1 -2 -2 -1 -1 -2 -2 -1 -1 -2 -2 -2 -2
//! framing 0         # optional twist correction
//! c_M 1             # optional slope system
//! lambda_M 0 1
//! provenance figure-transcription
//!
//! tangle custom
//! ports 1 2 3 4     # NW NE SW SE
//! pd ccw
//! X ...
//! ```

use serde::{Deserialize, Serialize};

use crate::diagram::{braid_closure, BraidWord, Crossing, EdgeId, PlanarDiagram};
use crate::error::{Error, Result};
use crate::slopes::SlopeSystem;
use crate::tangle::Tangle;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Body {
    Link(PlanarDiagram),
    Tangle(Tangle),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fixture {
    pub name: String,
    pub body: Body,
    pub system: Option<SlopeSystem>,
    pub provenance: Option<String>,
}

impl Fixture {
    pub fn link(&self) -> Option<&PlanarDiagram> {
        match &self.body {
            Body::Link(d) => Some(d),
            Body::Tangle(_) => None,
        }
    }

    pub fn tangle(&self) -> Option<&Tangle> {
        match &self.body {
            Body::Tangle(t) => Some(t),
            Body::Link(_) => None,
        }
    }
}

fn perr<T>(line: usize, msg: impl Into<String>) -> Result<T> {
    Err(Error::Parse { line, msg: msg.into() })
}

fn ints<T: std::str::FromStr>(line: usize, words: &str) -> Result<Vec<T>> {
    words
        .split_whitespace()
        .map(|w| w.parse::<T>().or_else(|_| perr(line, format!("expected an integer, found `{w}`"))))
        .collect()
}

#[derive(Default)]
struct Raw {
    kind: Option<(usize, String, String)>,
    braid: Option<(usize, u32, Option<u32>, Vec<i32>, Vec<i32>)>,
    pd_cw: Option<bool>,
    rows: Vec<(usize, [EdgeId; 4])>,
    basepoint: Option<EdgeId>,
    loops: Option<u32>,
    ports: Option<[EdgeId; 4]>,
    framing: i64,
    c_m: Option<u64>,
    lambda: Option<(i64, i64)>,
    provenance: Option<String>,
}

/// Parses a single link or tangle description.
pub fn parse(text: &str) -> Result<Fixture> {
    let mut raw = Raw::default();
    for (i, full) in text.lines().enumerate() {
        let ln = i + 1;
        let line = full.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let rest = rest.trim();
        match key {
            "link" | "tangle" => {
                if raw.kind.is_some() {
                    return perr(ln, "second header");
                }
                if rest.is_empty() {
                    return perr(ln, "missing name");
                }
                raw.kind = Some((ln, key.to_string(), rest.to_string()));
            }
            "braid" => {
                let Some((head, word)) = rest.split_once(':') else {
                    return perr(ln, "expected `braid s: letters`");
                };
                let head: Vec<&str> = head.split_whitespace().collect();
                let (s, k) = match head.as_slice() {
                    [s] => (s.parse().or_else(|_| perr(ln, "bad strand count"))?, None),
                    [s, "cut", k] => (
                        s.parse().or_else(|_| perr(ln, "bad strand count"))?,
                        Some(k.parse().or_else(|_| perr(ln, "bad cut position"))?),
                    ),
                    _ => return perr(ln, "expected `braid s:` or `braid s cut k:`"),
                };
                let (lower, upper) = match word.split_once('|') {
                    Some((a, b)) => (ints(ln, a)?, ints(ln, b)?),
                    None => (ints(ln, word)?, Vec::new()),
                };
                raw.braid = Some((ln, s, k, lower, upper));
            }
            "pd" => {
                raw.pd_cw = Some(match rest {
                    "" | "ccw" => false,
                    "cw" => true,
                    other => return perr(ln, format!("unknown orientation flag `{other}`")),
                });
            }
            "X" => {
                let v: Vec<EdgeId> = ints(ln, rest)?;
                let Ok(row) = <[EdgeId; 4]>::try_from(v) else {
                    return perr(ln, "a crossing needs four edge labels");
                };
                raw.rows.push((ln, row));
            }
            "basepoint" => raw.basepoint = Some(rest.parse().or_else(|_| perr(ln, "bad basepoint"))?),
            "loops" => raw.loops = Some(rest.parse().or_else(|_| perr(ln, "bad loop count"))?),
            "ports" => {
                let v: Vec<EdgeId> = ints(ln, rest)?;
                let Ok(p) = <[EdgeId; 4]>::try_from(v) else {
                    return perr(ln, "ports needs NW NE SW SE");
                };
                raw.ports = Some(p);
            }
            "framing" => raw.framing = rest.parse().or_else(|_| perr(ln, "bad framing"))?,
            "c_M" => raw.c_m = Some(rest.parse().or_else(|_| perr(ln, "bad c_M"))?),
            "lambda_M" => {
                let v: Vec<i64> = ints(ln, rest)?;
                let [x, y] = v[..] else {
                    return perr(ln, "lambda_M needs two integers");
                };
                raw.lambda = Some((x, y));
            }
            "provenance" => raw.provenance = Some(rest.to_string()),
            other => return perr(ln, format!("unknown keyword `{other}`")),
        }
    }
    build(raw)
}

fn build(raw: Raw) -> Result<Fixture> {
    let Some((hl, kind, name)) = raw.kind else {
        return perr(1, "missing `link` or `tangle` header");
    };
    if raw.braid.is_some() && !raw.rows.is_empty() {
        return perr(hl, "give either a braid or a PD code, not both");
    }
    let crossings = || -> Vec<Crossing> {
        let cw = raw.pd_cw.unwrap_or(false);
        raw.rows
            .iter()
            .map(|&(_, [a, b, c, d])| Crossing::new(if cw { [a, d, c, b] } else { [a, b, c, d] }))
            .collect()
    };
    let system = match (raw.c_m, raw.lambda) {
        (None, None) => None,
        (c, l) => Some(SlopeSystem::new(l.unwrap_or((0, 1)), c.unwrap_or(1))?),
    };
    let body = if kind == "link" {
        let d = match &raw.braid {
            Some((ln, s, k, lower, upper)) => {
                if k.is_some() || !upper.is_empty() {
                    return perr(*ln, "a link braid has no cut");
                }
                let w = BraidWord::new(*s, lower.clone()).or_else(|e| perr(*ln, e.to_string()))?;
                let d = braid_closure(&w);
                match raw.basepoint {
                    Some(b) => d.with_basepoint(Some(b))?,
                    None => d,
                }
            }
            None => {
                let loops = raw.loops.unwrap_or(if raw.rows.is_empty() { 1 } else { 0 });
                let bp = raw.basepoint.or_else(|| raw.rows.first().map(|r| r.1[0]));
                PlanarDiagram::new(crossings(), loops, bp, None)?
            }
        };
        Body::Link(d.with_label(name.clone()))
    } else {
        let t = match &raw.braid {
            Some((ln, s, k, lower, upper)) => {
                let Some(k) = k else {
                    return perr(*ln, "a tangle braid needs `cut k`");
                };
                Tangle::from_braid_cut(*s, *k, lower, upper, Some(name.clone()))?
            }
            None => {
                let Some(ports) = raw.ports else {
                    return perr(hl, "a PD tangle needs a `ports` line");
                };
                Tangle::new(crossings(), ports, Some(name.clone()))?
            }
        };
        Body::Tangle(if raw.framing != 0 { t.twisted(raw.framing) } else { t })
    };
    Ok(Fixture { name, body, system, provenance: raw.provenance })
}

/// Writes a link in the PD format, each row starting at the incoming understrand.
pub fn write_link(d: &PlanarDiagram) -> String {
    let mut out = format!("link {}\n", d.label().unwrap_or("unnamed"));
    if d.is_empty() {
        out += &format!("loops {}\n", d.loops());
        return out;
    }
    out += "pd ccw\n";
    for r in d.pd_rows() {
        out += &format!("X {} {} {} {}\n", r[0], r[1], r[2], r[3]);
    }
    if let Some(b) = d.basepoint() {
        out += &format!("basepoint {b}\n");
    }
    if d.loops() > 0 {
        out += &format!("loops {}\n", d.loops());
    }
    out
}
