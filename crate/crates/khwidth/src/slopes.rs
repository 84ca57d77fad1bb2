//! Homological arithmetic of Dehn fillings: filling orders and determinant certificates.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tangle::{cf_expand, cf_resolve, ContinuedFraction, Slope};

/// Rational longitude `(x, y)` in the basis `(alpha, beta)` and the constant `c_M`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlopeSystem {
    pub lambda: (i64, i64),
    pub c_m: u64,
}

impl SlopeSystem {
    pub fn new(lambda: (i64, i64), c_m: u64) -> Result<Self> {
        if crate::tangle::gcd(lambda.0.unsigned_abs(), lambda.1.unsigned_abs()) != 1 {
            return Err(Error::Invalid(format!("longitude {lambda:?} is not primitive")));
        }
        if c_m == 0 {
            return Err(Error::Invalid("c_M must be positive".into()));
        }
        Ok(SlopeSystem { lambda, c_m })
    }

    /// Knot exterior in the 3-sphere with basis (meridian, longitude).
    pub fn knot() -> Self {
        SlopeSystem { lambda: (0, 1), c_m: 1 }
    }
}

/// `c_M * Delta(s, lambda_M)`.
pub fn filling_order(sys: &SlopeSystem, s: Slope) -> u64 {
    let (x, y) = sys.lambda;
    sys.c_m * (s.p * y - s.q * x).unsigned_abs()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QANode {
    pub slope: Slope,
    pub det: u64,
    /// Resolutions of the terminal crossing: (0-resolution, 1-resolution).
    pub children: Option<Box<(QANode, QANode)>>,
}

impl QANode {
    pub fn depth(&self) -> usize {
        match &self.children {
            None => 0,
            Some(c) => 1 + c.0.depth().max(c.1.depth()),
        }
    }

    pub fn size(&self) -> usize {
        1 + self.children.as_ref().map_or(0, |c| c.0.size() + c.1.size())
    }

    /// Every internal node has `det = det0 + det1`.
    pub fn additive(&self) -> bool {
        match &self.children {
            None => true,
            Some(c) => self.det == c.0.det + c.1.det && c.0.additive() && c.1.additive(),
        }
    }
}

/// Determinant-additivity chain from `target` down to the triad legs `tau(1/0)` and `tau(0)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QACertificate {
    pub det_infinity: u64,
    pub det_zero: u64,
    pub root: QANode,
}

/// Builds the certificate for a triad with `det tau(1/0) = c_M a` and `det tau(0) = c_M b`.
pub fn qa_propagate(sys: &SlopeSystem, a: i64, b: i64, target: Slope) -> Result<QACertificate> {
    if a <= 0 || b <= 0 {
        return Err(Error::Hypothesis(format!("triad legs need positive intersection (a = {a}, b = {b})")));
    }
    if target.is_negative() {
        return Err(Error::Invalid("negative target: pass to the mirror".into()));
    }
    let (da, db) = (sys.c_m * a as u64, sys.c_m * b as u64);
    fn build(cf: &ContinuedFraction, da: u64, db: u64) -> Result<QANode> {
        let slope = cf.value();
        if cf.is_empty() {
            return Ok(QANode { slope, det: da, children: None });
        }
        if cf.terms == [0] {
            return Ok(QANode { slope, det: db, children: None });
        }
        let (c0, c1, _) = cf_resolve(cf)?;
        let (n0, n1) = (build(&c0, da, db)?, build(&c1, da, db)?);
        Ok(QANode { slope, det: n0.det + n1.det, children: Some(Box::new((n0, n1))) })
    }
    let root = build(&cf_expand(target)?, da, db)?;
    let expected = sys.c_m * (target.p as u64 * a as u64 + target.q as u64 * b as u64);
    if root.det != expected || !root.additive() {
        return Err(Error::Hypothesis(format!("determinant chain gives {} but p a + q b = {expected}", root.det)));
    }
    Ok(QACertificate { det_infinity: da, det_zero: db, root })
}
