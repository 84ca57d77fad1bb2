//! Checkerboard colourings, Goeritz matrices, and the signature and determinant of a link.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::diagram::PlanarDiagram;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Coloring {
    /// Face index of every corner `4c + s` (between slots `s` and `s + 1`).
    pub corner_face: Vec<usize>,
    /// `true` for white faces.
    pub white: Vec<bool>,
    /// White faces in index order; the first is the discarded region.
    pub white_regions: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CrossingType {
    I,
    II,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoeritzData {
    /// Rows and columns indexed by `white_regions[1..]`.
    pub g: Vec<Vec<i64>>,
    pub incidence: Vec<i8>,
    pub types: Vec<CrossingType>,
    pub mu_l: i64,
    pub sigma_g: i64,
    pub det_g: i128,
}

fn two_color(d: &PlanarDiagram) -> Result<(Vec<usize>, Vec<bool>)> {
    let (corner_face, nf) = d.faces();
    let mut color: Vec<Option<bool>> = vec![None; nf];
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); nf];
    for c in 0..d.len() {
        for s in 0..4 {
            let (a, b) = (corner_face[4 * c + s], corner_face[4 * c + (s + 1) % 4]);
            adj[a].push(b);
            adj[b].push(a);
        }
    }
    for start in 0..nf {
        if color[start].is_some() {
            continue;
        }
        color[start] = Some(false);
        let mut stack = vec![start];
        while let Some(f) = stack.pop() {
            let cf = color[f].unwrap();
            for &g in &adj[f] {
                match color[g] {
                    None => {
                        color[g] = Some(!cf);
                        stack.push(g);
                    }
                    Some(cg) if cg == cf => {
                        return Err(Error::Coloring(format!("faces {f} and {g} are adjacent and equal")));
                    }
                    _ => {}
                }
            }
        }
    }
    Ok((corner_face, color.into_iter().map(|c| c.unwrap()).collect()))
}

fn build_coloring(d: &PlanarDiagram, dual: bool, strict: bool) -> Result<Coloring> {
    if d.is_empty() {
        return Ok(Coloring { corner_face: vec![], white: vec![true], white_regions: vec![0] });
    }
    if d.graph_components().len() != 1 {
        return Err(Error::Coloring("diagram is split".into()));
    }
    let (corner_face, color) = two_color(d)?;
    let nf = color.len();
    let mut corners = vec![0usize; nf];
    for &f in &corner_face {
        corners[f] += 1;
    }
    // the face with most corners stands in for the unbounded one
    let outer = (0..nf).max_by_key(|&f| (corners[f], std::cmp::Reverse(f))).unwrap();
    let outer_white = dual;
    let white: Vec<bool> = color.iter().map(|&c| (c == color[outer]) == outer_white).collect();
    if strict {
        for c in 0..d.len() {
            let w = white_corners(&corner_face, &white, c);
            if corner_face[4 * c + w] == corner_face[4 * c + w + 2] {
                return Err(Error::Coloring(format!("crossing {c} meets one white region on both sides")));
            }
        }
    }
    let white_regions = (0..nf).filter(|&f| white[f]).collect();
    Ok(Coloring { corner_face, white, white_regions })
}

/// First white corner at crossing `c` (0 or 1); the other is two slots later.
fn white_corners(corner_face: &[usize], white: &[bool], c: usize) -> usize {
    if white[corner_face[4 * c]] {
        0
    } else {
        1
    }
}

/// Colouring with the unbounded region black. Kinks are removed first.
pub fn checkerboard(d: &PlanarDiagram) -> Result<Coloring> {
    build_coloring(&d.reduce_r1(), false, true)
}

/// The other colouring.
pub fn checkerboard_dual(d: &PlanarDiagram) -> Result<Coloring> {
    build_coloring(&d.reduce_r1(), true, true)
}

/// Goeritz data; `d` must be the diagram the colouring was built for (after kink removal).
pub fn goeritz(d: &PlanarDiagram, col: &Coloring) -> GoeritzData {
    let od = d.orient();
    let idx: std::collections::HashMap<usize, usize> =
        col.white_regions.iter().enumerate().map(|(i, &f)| (f, i)).collect();
    let n = col.white_regions.len();
    let mut full = vec![vec![0i64; n]; n];
    let mut incidence = Vec::with_capacity(d.len());
    let mut types = Vec::with_capacity(d.len());
    for c in 0..d.len() {
        let x = d.crossings()[c];
        let w = white_corners(&col.corner_face, &col.white, c);
        // the 0-smoothing joins corners {1, 3} for an even crossing and {0, 2} otherwise
        let zero_merges = if x.odd_under { 0 } else { 1 };
        let eta: i64 = if w == zero_merges { -1 } else { 1 };
        let u = od.under_in(c);
        let o = od.over_in(c);
        let seifert_merges = if o == (u + 1) % 4 { u % 2 } else { (u + 1) % 2 };
        let ty = if seifert_merges == w { CrossingType::I } else { CrossingType::II };
        let (a, b) = (idx[&col.corner_face[4 * c + w]], idx[&col.corner_face[4 * c + w + 2]]);
        if a != b {
            full[a][b] -= eta;
            full[b][a] -= eta;
            full[a][a] += eta;
            full[b][b] += eta;
        }
        incidence.push(eta as i8);
        types.push(ty);
    }
    let g: Vec<Vec<i64>> = full.iter().skip(1).map(|row| row[1..].to_vec()).collect();
    let mu_l = incidence.iter().zip(&types).filter(|(_, &t)| t == CrossingType::II).map(|(&e, _)| e as i64).sum();
    let (sigma_g, det_g) = signature_and_det(&g);
    GoeritzData { g, incidence, types, mu_l, sigma_g, det_g }
}

/// Signature and determinant of a symmetric integer matrix by exact congruence diagonalization.
pub fn signature_and_det(m: &[Vec<i64>]) -> (i64, i128) {
    let n = m.len();
    let mut a: Vec<Vec<BigRational>> =
        m.iter().map(|r| r.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect()).collect();
    let mut diag = Vec::with_capacity(n);
    for k in 0..n {
        if a[k][k].is_zero() {
            if let Some(j) = (k + 1..n).find(|&j| !a[j][j].is_zero()) {
                a.swap(k, j);
                for row in a.iter_mut() {
                    row.swap(k, j);
                }
            } else if let Some(j) = (k + 1..n).find(|&j| !a[k][j].is_zero()) {
                // row_k += row_j and col_k += col_j makes the pivot 2 a_kj
                for i in 0..n {
                    let v = a[j][i].clone();
                    a[k][i] += v;
                }
                for i in 0..n {
                    let v = a[i][j].clone();
                    a[i][k] += v;
                }
            }
        }
        let p = a[k][k].clone();
        diag.push(p.clone());
        if p.is_zero() {
            continue;
        }
        for i in k + 1..n {
            if a[i][k].is_zero() {
                continue;
            }
            let f = &a[i][k] / &p;
            for j in k..n {
                let v = &f * &a[k][j];
                a[i][j] -= v;
            }
        }
        for i in k + 1..n {
            a[k][i] = BigRational::zero();
            a[i][k] = BigRational::zero();
        }
    }
    let sig = diag.iter().map(|x| if x.is_positive() { 1 } else if x.is_negative() { -1 } else { 0 }).sum();
    let det = diag.iter().fold(BigRational::from_integer(BigInt::from(1)), |acc, x| acc * x);
    let det = det.to_integer().to_i128().expect("determinant fits in i128");
    (sig, det)
}

/// Per connected piece: the reduced diagram and its data under the first workable colouring.
fn pieces(d: &PlanarDiagram) -> Vec<(PlanarDiagram, GoeritzData)> {
    let d = d.reduce_r1();
    let mut out = Vec::new();
    for cs in d.graph_components() {
        let sub = d.restrict(&cs);
        let col = build_coloring(&sub, false, true)
            .or_else(|_| build_coloring(&sub, true, true))
            .or_else(|_| build_coloring(&sub, false, false))
            .expect("planar diagrams are two-colourable");
        let g = goeritz(&sub, &col);
        out.push((sub, g));
    }
    out
}

/// Link signature; a split diagram gives the sum over its pieces.
pub fn signature(d: &PlanarDiagram) -> Result<i64> {
    Ok(pieces(d).iter().map(|(_, g)| g.sigma_g - g.mu_l).sum())
}

/// Link determinant; zero for split diagrams.
pub fn determinant(d: &PlanarDiagram) -> Result<u64> {
    let d = d.reduce_r1();
    let comps = d.graph_components().len() + d.loops() as usize;
    if comps > 1 {
        return Ok(0);
    }
    if d.is_empty() {
        return Ok(1);
    }
    let (_, g) = pieces(&d).pop().expect("one piece");
    Ok(g.det_g.unsigned_abs() as u64)
}

/// Signature computed from a given colouring choice, for duality checks.
pub fn signature_with(d: &PlanarDiagram, dual: bool) -> Result<i64> {
    let d = d.reduce_r1();
    let mut total = 0;
    for cs in d.graph_components() {
        let sub = d.restrict(&cs);
        let col = build_coloring(&sub, dual, false)?;
        let g = goeritz(&sub, &col);
        total += g.sigma_g - g.mu_l;
    }
    Ok(total)
}
