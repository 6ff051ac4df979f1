//! PL topological conjugacy to the tent map.
//!
//! A conjugacy from `f` to `g` is an increasing homeomorphism `h` with
//! `h∘f = g∘h`. Points are matched across conjugate unimodal maps by their
//! L/C/R itineraries, which the conjugacy preserves; for the tent map an
//! eventually periodic itinerary pins down a unique rational point.

use std::collections::HashMap;
use std::fmt;

use num_traits::One;
use serde::Serialize;
use thiserror::Error;

use crate::commute::tent;
use crate::plmap::PLMap;
use crate::rational::{fmt_rational, half, int, one, zero, Rational};

pub const DEFAULT_ORBIT_CAP: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConjugacyError {
    #[error("h is not an increasing homeomorphism of [0,1]")]
    NotHomeomorphism,
    #[error("map is not unimodal with g(0) = g(1) = 0 and maximum 1")]
    NotUnimodal,
    #[error("orbit of {x} did not close within {cap} steps")]
    NoCycleWithinCap { x: String, cap: usize },
    #[error("invalid itinerary: {0}")]
    InvalidItinerary(String),
}

/// `h∘g∘h⁻¹`.
pub fn conjugate(g: &PLMap, h: &PLMap) -> Result<PLMap, ConjugacyError> {
    let inv = h.inverse().ok_or(ConjugacyError::NotHomeomorphism)?;
    Ok(PLMap::compose(h, &PLMap::compose(g, &inv)))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    #[serde(serialize_with = "crate::rational::ser::rat")]
    pub x: Rational,
    /// `h(f(x))`
    #[serde(serialize_with = "crate::rational::ser::rat")]
    pub lhs: Rational,
    /// `g(h(x))`
    #[serde(serialize_with = "crate::rational::ser::rat")]
    pub rhs: Rational,
}

/// Necessary conditions for a unimodal map to be PL conjugate to the tent
/// map: slope 2 at the origin, and `(g_r²)' = 4` at the fixed point of the
/// decreasing leg.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NecessaryConditions {
    pub derivative_at_zero_check: bool,
    pub right_leg_check: bool,
    #[serde(serialize_with = "crate::rational::ser::opt_rat")]
    pub right_fixed_point: Option<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConjugacyReport {
    pub is_conjugacy: bool,
    pub h_is_homeomorphism: bool,
    pub violations: Vec<Violation>,
    #[serde(flatten)]
    pub conditions: NecessaryConditions,
}

/// Checks `h∘f0 = g∘h` exactly and records the necessary conditions on `g`.
pub fn verify_conjugacy(f0: &PLMap, g: &PLMap, h: &PLMap) -> ConjugacyReport {
    let left = PLMap::compose(h, f0);
    let right = PLMap::compose(g, h);
    let mut xs = left.xs();
    xs.extend(right.xs());
    xs.sort();
    xs.dedup();
    let violations: Vec<Violation> = xs
        .into_iter()
        .filter_map(|x| {
            let (lhs, rhs) = (left.at(&x), right.at(&x));
            (lhs != rhs).then_some(Violation { x, lhs, rhs })
        })
        .collect();
    let h_is_homeomorphism = h.is_homeomorphism();
    ConjugacyReport {
        is_conjugacy: h_is_homeomorphism && violations.is_empty(),
        h_is_homeomorphism,
        violations,
        conditions: tent_necessary_conditions(g),
    }
}

pub fn tent_necessary_conditions(g: &PLMap) -> NecessaryConditions {
    let derivative_at_zero_check = g.slope_right(&zero()) == int(2);
    let mut right_fixed_point = None;
    let mut right_leg_check = false;
    if let Some(v) = g.turning_point().filter(|_| g.classify().is_unimodal) {
        // The decreasing leg runs from 1 down to 0, so it crosses the
        // diagonal exactly once.
        if let Some(x0) = g.classify().fixed_points.into_iter().find(|x| *x > v) {
            // Near x0 the leg swaps sides of x0, so both one-sided
            // derivatives of the second iterate equal the product of the
            // two one-sided slopes.
            right_leg_check = g.slope_left(&x0) * g.slope_right(&x0) == int(4);
            right_fixed_point = Some(x0);
        }
    }
    NecessaryConditions { derivative_at_zero_check, right_leg_check, right_fixed_point }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Symbol {
    L,
    C,
    R,
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Symbol::L => "L",
            Symbol::C => "C",
            Symbol::R => "R",
        })
    }
}

/// Eventually periodic symbol sequence `preperiod · period^∞`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Itinerary {
    pub preperiod: Vec<Symbol>,
    pub period: Vec<Symbol>,
}

impl Itinerary {
    pub fn new(preperiod: Vec<Symbol>, period: Vec<Symbol>) -> Self {
        Itinerary { preperiod, period }
    }

    /// Shortest equivalent presentation: primitive period, preperiod with
    /// no trailing symbols absorbed by the period.
    pub fn normalized(&self) -> Itinerary {
        let mut period = self.period.clone();
        let k = period.len();
        if let Some(d) = (1..=k).find(|d| k.is_multiple_of(*d) && (0..k).all(|i| period[i] == period[i % d])) {
            period.truncate(d);
        }
        let mut preperiod = self.preperiod.clone();
        while !period.is_empty() && preperiod.last() == period.last() {
            preperiod.pop();
            period.rotate_right(1);
        }
        Itinerary { preperiod, period }
    }
}

impl fmt::Display for Itinerary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.preperiod {
            write!(f, "{s}")?;
        }
        f.write_str("(")?;
        for s in &self.period {
            write!(f, "{s}")?;
        }
        f.write_str(")")
    }
}

pub fn itinerary(g: &PLMap, x: &Rational) -> Result<Itinerary, ConjugacyError> {
    itinerary_with_cap(g, x, DEFAULT_ORBIT_CAP)
}

/// Symbols of the orbit of `x` relative to the turning point, until the
/// exact orbit revisits a value.
pub fn itinerary_with_cap(g: &PLMap, x: &Rational, cap: usize) -> Result<Itinerary, ConjugacyError> {
    if !g.classify().is_unimodal {
        return Err(ConjugacyError::NotUnimodal);
    }
    let v = g.turning_point().expect("unimodal map has a turning point");
    let mut seen: HashMap<Rational, usize> = HashMap::new();
    let mut symbols: Vec<Symbol> = Vec::new();
    let mut cur = x.clone();
    for step in 0..=cap {
        if let Some(&start) = seen.get(&cur) {
            let period = symbols.split_off(start);
            return Ok(Itinerary { preperiod: symbols, period });
        }
        seen.insert(cur.clone(), step);
        symbols.push(match cur.cmp(&v) {
            std::cmp::Ordering::Less => Symbol::L,
            std::cmp::Ordering::Equal => Symbol::C,
            std::cmp::Ordering::Greater => Symbol::R,
        });
        cur = g.at(&cur);
    }
    Err(ConjugacyError::NoCycleWithinCap { x: fmt_rational(x), cap })
}

/// Inverse tent branch for a symbol, as `y ↦ a·y + b`.
fn branch(s: Symbol) -> (Rational, Rational) {
    match s {
        Symbol::L => (half(), zero()),
        Symbol::R => (-half(), one()),
        Symbol::C => unreachable!("the critical symbol has no affine branch"),
    }
}

/// The unique point whose tent-map itinerary is `it`.
pub fn tent_point(it: &Itinerary) -> Result<Rational, ConjugacyError> {
    if it.period.is_empty() {
        return Err(ConjugacyError::InvalidItinerary("empty period".into()));
    }
    if it.period.contains(&Symbol::C) {
        return Err(ConjugacyError::InvalidItinerary("critical symbol inside the period".into()));
    }
    // x_0 = B_{s_0}(B_{s_1}(… B_{s_{k-1}}(x_0))): fold the branches into one
    // affine map and solve for its fixed point.
    let (mut a, mut b) = (one(), zero());
    for s in it.period.iter().rev() {
        let (ba, bb) = branch(*s);
        // B∘(a·y + b) = ba·(a·y + b) + bb
        b = &ba * &b + bb;
        a = ba * a;
    }
    let mut x = b / (one() - a);
    for s in it.preperiod.iter().rev() {
        x = match s {
            Symbol::C if x.is_one() => half(),
            Symbol::C => {
                return Err(ConjugacyError::InvalidItinerary("critical symbol must be followed by the value 1".into()))
            }
            s => {
                let (ba, bb) = branch(*s);
                ba * x + bb
            }
        };
    }
    // Inverse branches can land on the turning point, where the symbol would
    // read C instead; reject such presentations.
    let actual = itinerary(&tent(), &x)?;
    if actual.normalized() != it.normalized() {
        return Err(ConjugacyError::InvalidItinerary(format!("{it} is not realized; {x} reads {actual}")));
    }
    Ok(x)
}

/// The PL conjugacy `h` with `h∘tent = g∘h`, if one exists.
///
/// Each breakpoint `a` of `g` is matched to the tent point `α` with the same
/// itinerary; the candidate `h` passes through every `(α, a)` and
/// `(tent(α), g(a))`. The candidate is returned only if it verifies exactly.
pub fn find_tent_conjugacy(g: &PLMap) -> Result<Option<PLMap>, ConjugacyError> {
    let profile = g.classify();
    if !profile.is_unimodal {
        return Err(ConjugacyError::NotUnimodal);
    }
    if profile.derivative_at_zero != int(2) {
        return Ok(None);
    }
    let f = tent();
    let mut pts: Vec<(Rational, Rational)> = vec![(zero(), zero()), (one(), one())];
    for (a, ga) in g.kinks() {
        let alpha = tent_point(&itinerary(g, a)?)?;
        pts.push((f.at(&alpha), ga.clone()));
        pts.push((alpha, a.clone()));
    }
    pts.sort();
    pts.dedup();
    if pts.windows(2).any(|w| w[0].0 == w[1].0 || w[0].1 >= w[1].1) {
        return Ok(None);
    }
    let h = PLMap::new(pts).expect("strictly increasing points in the unit square");
    Ok(verify_conjugacy(&f, g, &h).is_conjugacy.then_some(h))
}
