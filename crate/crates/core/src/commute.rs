//! The tent map, its sawtooth commutators `ξ_t`, and commutativity checks.

use std::collections::HashSet;

use serde::Serialize;
use thiserror::Error;

use crate::lattice::{kink_test_points, sat_verdict};
use crate::plmap::PLMap;
use crate::rational::{int, one, r, zero, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CommuteError {
    #[error("t must be at least 1, got {0}")]
    InvalidT(i64),
    #[error("unknown method `{0}`")]
    UnknownMethod(String),
    #[error("method `{method}` does not apply: {reason}")]
    NotApplicable { method: String, reason: String },
}

/// `x ↦ 1 − |1 − 2x|`.
pub fn tent() -> PLMap {
    PLMap::new(vec![(zero(), zero()), (r(1, 2), one()), (one(), zero())]).expect("tent is valid")
}

/// The `t`-piece sawtooth: breakpoints at `k/t` with values alternating
/// `0, 1, 0, …`. Commutes with the tent map for every `t`.
pub fn xi(t: i64) -> Result<PLMap, CommuteError> {
    if t < 1 {
        return Err(CommuteError::InvalidT(t));
    }
    let pts = (0..=t).map(|k| (r(k, t), int(k % 2))).collect();
    Ok(PLMap::new(pts).expect("sawtooth is valid"))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    #[serde(serialize_with = "crate::rational::ser::rat")]
    pub x: Rational,
    /// `g(ψ(x))`
    #[serde(serialize_with = "crate::rational::ser::rat")]
    pub g_psi: Rational,
    /// `ψ(g(x))`
    #[serde(serialize_with = "crate::rational::ser::rat")]
    pub psi_g: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CommuteReport {
    pub method: String,
    pub commutes: bool,
    pub witness: Option<Witness>,
    /// Every point where either composite may kink; agreement on all of them
    /// is equivalent to commutativity.
    #[serde(serialize_with = "crate::rational::ser::rat_vec")]
    pub checked_points: Vec<Rational>,
    /// Verdict of the trajectory (SAT) method when its preconditions hold.
    pub sat_verdict: Option<bool>,
}

fn first_difference(g: &PLMap, psi: &PLMap) -> Option<Witness> {
    let gp = PLMap::compose(g, psi);
    let pg = PLMap::compose(psi, g);
    let mut xs: Vec<Rational> = gp.xs();
    xs.extend(pg.xs());
    xs.sort();
    xs.dedup();
    xs.into_iter().find_map(|x| {
        let (a, b) = (gp.at(&x), pg.at(&x));
        (a != b).then_some(Witness { x, g_psi: a, psi_g: b })
    })
}

/// Decides `g∘ψ = ψ∘g` by exact equality of the canonical composites and
/// records the trajectory-method verdict alongside.
pub fn commutes(g: &PLMap, psi: &PLMap) -> CommuteReport {
    let exact = PLMap::compose(g, psi) == PLMap::compose(psi, g);
    let witness = if exact { None } else { first_difference(g, psi) };
    let sat = sat_verdict(g, psi).ok();
    debug_assert!(sat.is_none_or(|v| v == exact), "SAT and exact verdicts disagree");
    CommuteReport {
        method: "exact".into(),
        commutes: exact,
        witness,
        checked_points: kink_test_points(g, psi),
        sat_verdict: sat,
    }
}

/// A commutativity decision procedure, selectable by name.
pub trait CommuteMethod: Send + Sync {
    fn name(&self) -> &'static str;
    fn decide(&self, g: &PLMap, psi: &PLMap) -> Result<CommuteReport, CommuteError>;
}

/// Exact equality of the two composites.
pub struct ExactComposition;

impl CommuteMethod for ExactComposition {
    fn name(&self) -> &'static str {
        "exact"
    }

    fn decide(&self, g: &PLMap, psi: &PLMap) -> Result<CommuteReport, CommuteError> {
        Ok(commutes(g, psi))
    }
}

/// Consistency of every single trajectory in the SATs through the kinks.
/// Applies to unimodal `g` with piecewise-surjective `ψ`.
pub struct TrajectoryMethod;

impl CommuteMethod for TrajectoryMethod {
    fn name(&self) -> &'static str {
        "sat"
    }

    fn decide(&self, g: &PLMap, psi: &PLMap) -> Result<CommuteReport, CommuteError> {
        let verdict = sat_verdict(g, psi)
            .map_err(|e| CommuteError::NotApplicable { method: self.name().into(), reason: e.to_string() })?;
        Ok(CommuteReport {
            method: self.name().into(),
            commutes: verdict,
            witness: if verdict { None } else { first_difference(g, psi) },
            checked_points: kink_test_points(g, psi),
            sat_verdict: Some(verdict),
        })
    }
}

pub fn methods() -> Vec<Box<dyn CommuteMethod>> {
    vec![Box::new(ExactComposition), Box::new(TrajectoryMethod)]
}

pub fn method_by_name(name: &str) -> Result<Box<dyn CommuteMethod>, CommuteError> {
    methods().into_iter().find(|m| m.name() == name).ok_or_else(|| CommuteError::UnknownMethod(name.into()))
}

/// Derivative of the commutation identity on one linearity cell:
/// `ψ'(x)·g'(ψ(x))` against `g'(x)·ψ'(g(x))`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SlopeRelation {
    #[serde(serialize_with = "crate::rational::ser::rat")]
    pub point: Rational,
    #[serde(serialize_with = "crate::rational::ser::rat")]
    pub lhs: Rational,
    #[serde(serialize_with = "crate::rational::ser::rat")]
    pub rhs: Rational,
    pub holds: bool,
}

/// Slope of `m` at `x` approached from the right (from the left at `x = 1`).
fn slope_at(m: &PLMap, x: &Rational) -> Rational {
    if *x == one() {
        m.slope_left(x)
    } else {
        m.slope_right(x)
    }
}

/// One relation per cell of the common refinement of `g`, `ψ`, `g∘ψ` and
/// `ψ∘g`, evaluated at the cell midpoint. All four maps are affine on a
/// cell, so the midpoint decides the cell. The inner maps can land on a
/// kink of the outer map; the right-hand slope is used there, which matches
/// the composite's slope on the cell because the composite is affine.
pub fn chain_rule_check(g: &PLMap, psi: &PLMap) -> Vec<SlopeRelation> {
    let mut xs: Vec<Rational> = g.xs();
    xs.extend(psi.xs());
    xs.extend(PLMap::compose(g, psi).xs());
    xs.extend(PLMap::compose(psi, g).xs());
    xs.sort();
    xs.dedup();
    xs.windows(2)
        .map(|w| {
            let m = (&w[0] + &w[1]) / int(2);
            let lhs = psi.slope_right(&m) * slope_at(g, &psi.at(&m));
            let rhs = g.slope_right(&m) * slope_at(psi, &g.at(&m));
            let holds = lhs == rhs;
            SlopeRelation { point: m, lhs, rhs, holds }
        })
        .collect()
}

/// Least `n ≥ 1` with `ψ = gⁿ`, searching while `gⁿ` has no more pieces
/// than `ψ`.
pub fn is_iterate(psi: &PLMap, g: &PLMap) -> Option<u32> {
    let mut seen: HashSet<PLMap> = HashSet::new();
    let mut power = g.clone();
    let mut n = 1u32;
    while power.piece_count() <= psi.piece_count() {
        if power == *psi {
            return Some(n);
        }
        if !seen.insert(power.clone()) {
            return None;
        }
        power = PLMap::compose(g, &power);
        n += 1;
    }
    None
}
