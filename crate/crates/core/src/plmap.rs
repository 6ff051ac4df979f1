//! Continuous piecewise-linear self-maps of `[0,1]` with exact breakpoints.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::rational::{fmt_rational, in_unit, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PlMapError {
    #[error("no points given")]
    EmptyInput,
    #[error("domain must start at x = 0 and end at x = 1")]
    DomainNotUnit,
    #[error("abscissas must increase; conflict at point {index}")]
    NonMonotoneX { index: usize },
    #[error("coordinate of point {index} lies outside [0,1]")]
    OutOfRange { index: usize },
    #[error("argument {0} lies outside [0,1]")]
    OutOfDomain(Rational),
    #[error("a linear piece is constant at {0}; preimage is an interval")]
    InfinitePreimage(Rational),
}

/// A canonical continuous PL map of the unit interval.
///
/// Breakpoints start at `x = 0`, end at `x = 1`, have strictly increasing
/// abscissas, and no interior breakpoint is collinear with its neighbours.
/// Canonical form is unique, so derived equality is extensional equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PLMap {
    pts: Vec<(Rational, Rational)>,
}

fn collinear(a: &(Rational, Rational), b: &(Rational, Rational), c: &(Rational, Rational)) -> bool {
    (&b.1 - &a.1) * (&c.0 - &b.0) == (&c.1 - &b.1) * (&b.0 - &a.0)
}

impl PLMap {
    /// Builds the canonical map through `points`.
    ///
    /// Repeated points are merged; a repeated abscissa with a different
    /// ordinate is a discontinuity and is rejected.
    pub fn new(points: Vec<(Rational, Rational)>) -> Result<Self, PlMapError> {
        if points.is_empty() {
            return Err(PlMapError::EmptyInput);
        }
        for (index, (x, y)) in points.iter().enumerate() {
            if !in_unit(x) || !in_unit(y) {
                return Err(PlMapError::OutOfRange { index });
            }
        }
        if !points[0].0.is_zero() || !points[points.len() - 1].0.is_one() {
            return Err(PlMapError::DomainNotUnit);
        }
        let mut out: Vec<(Rational, Rational)> = Vec::with_capacity(points.len());
        for (index, p) in points.into_iter().enumerate() {
            if let Some(last) = out.last() {
                if p.0 < last.0 || (p.0 == last.0 && p.1 != last.1) {
                    return Err(PlMapError::NonMonotoneX { index });
                }
                if p.0 == last.0 {
                    continue;
                }
            }
            while out.len() >= 2 && collinear(&out[out.len() - 2], &out[out.len() - 1], &p) {
                out.pop();
            }
            out.push(p);
        }
        Ok(PLMap { pts: out })
    }

    /// Convenience constructor from integer fractions `(xn, xd, yn, yd)`.
    pub fn from_fracs(points: &[(i64, i64, i64, i64)]) -> Result<Self, PlMapError> {
        use crate::rational::r;
        PLMap::new(points.iter().map(|&(a, b, c, d)| (r(a, b), r(c, d))).collect())
    }

    pub fn identity() -> Self {
        PLMap { pts: vec![(Rational::zero(), Rational::zero()), (Rational::one(), Rational::one())] }
    }

    pub fn constant(c: Rational) -> Result<Self, PlMapError> {
        PLMap::new(vec![(Rational::zero(), c.clone()), (Rational::one(), c)])
    }

    pub fn breakpoints(&self) -> &[(Rational, Rational)] {
        &self.pts
    }

    pub fn xs(&self) -> Vec<Rational> {
        self.pts.iter().map(|p| p.0.clone()).collect()
    }

    /// Interior breakpoints, i.e. genuine kinks.
    pub fn kinks(&self) -> &[(Rational, Rational)] {
        &self.pts[1..self.pts.len() - 1]
    }

    pub fn piece_count(&self) -> usize {
        self.pts.len() - 1
    }

    pub fn slopes(&self) -> Vec<Rational> {
        (0..self.piece_count()).map(|i| self.piece_slope(i)).collect()
    }

    pub fn piece_slope(&self, i: usize) -> Rational {
        let (a, b) = (&self.pts[i], &self.pts[i + 1]);
        (&b.1 - &a.1) / (&b.0 - &a.0)
    }

    /// Index of the piece `[x_i, x_{i+1}]` containing `x`; breakpoints go to
    /// the piece on their right (the last breakpoint to the last piece).
    fn piece_of(&self, x: &Rational) -> usize {
        let i = self.pts.partition_point(|p| p.0 <= *x);
        i.saturating_sub(1).min(self.piece_count() - 1)
    }

    pub fn eval(&self, x: &Rational) -> Result<Rational, PlMapError> {
        if !in_unit(x) {
            return Err(PlMapError::OutOfDomain(x.clone()));
        }
        Ok(self.at(x))
    }

    /// Evaluation for arguments already known to lie in `[0,1]`.
    pub fn at(&self, x: &Rational) -> Rational {
        debug_assert!(in_unit(x));
        let i = self.piece_of(x);
        let (a, b) = (&self.pts[i], &self.pts[i + 1]);
        if *x == a.0 {
            return a.1.clone();
        }
        if *x == b.0 {
            return b.1.clone();
        }
        &a.1 + (x - &a.0) * (&b.1 - &a.1) / (&b.0 - &a.0)
    }

    /// Slope of the piece immediately to the right of `x` (`x < 1`).
    pub fn slope_right(&self, x: &Rational) -> Rational {
        self.piece_slope(self.piece_of(x))
    }

    /// Slope of the piece immediately to the left of `x` (`x > 0`).
    pub fn slope_left(&self, x: &Rational) -> Rational {
        let i = self.pts.partition_point(|p| p.0 < *x);
        self.piece_slope(i.saturating_sub(1).min(self.piece_count() - 1))
    }

    /// All solutions of `m(x) = y`, ascending.
    pub fn preimages(&self, y: &Rational) -> Result<Vec<Rational>, PlMapError> {
        if !in_unit(y) {
            return Err(PlMapError::OutOfDomain(y.clone()));
        }
        let mut out: Vec<Rational> = Vec::new();
        for w in self.pts.windows(2) {
            let (a, b) = (&w[0], &w[1]);
            let (lo, hi) = if a.1 <= b.1 { (&a.1, &b.1) } else { (&b.1, &a.1) };
            if y < lo || y > hi {
                continue;
            }
            if a.1 == b.1 {
                return Err(PlMapError::InfinitePreimage(y.clone()));
            }
            let x = &a.0 + (y - &a.1) * (&b.0 - &a.0) / (&b.1 - &a.1);
            if out.last() != Some(&x) {
                out.push(x);
            }
        }
        Ok(out)
    }

    /// Solutions of `m(x) = y` on non-constant pieces only. Together with the
    /// breakpoints this still covers every place where `m` can cross `y`.
    pub fn level_crossings(&self, y: &Rational) -> Vec<Rational> {
        let mut out: Vec<Rational> = Vec::new();
        for w in self.pts.windows(2) {
            let (a, b) = (&w[0], &w[1]);
            if a.1 == b.1 {
                continue;
            }
            let (lo, hi) = if a.1 < b.1 { (&a.1, &b.1) } else { (&b.1, &a.1) };
            if y >= lo && y <= hi {
                out.push(&a.0 + (y - &a.1) * (&b.0 - &a.0) / (&b.1 - &a.1));
            }
        }
        out.sort();
        out.dedup();
        out
    }

    /// `outer ∘ inner`.
    pub fn compose(outer: &PLMap, inner: &PLMap) -> PLMap {
        let mut xs: Vec<Rational> = inner.xs();
        for w in inner.pts.windows(2) {
            let (a, b) = (&w[0], &w[1]);
            if a.1 == b.1 {
                continue;
            }
            let (lo, hi) = if a.1 < b.1 { (&a.1, &b.1) } else { (&b.1, &a.1) };
            for (k, _) in outer.kinks() {
                if k > lo && k < hi {
                    xs.push(&a.0 + (k - &a.1) * (&b.0 - &a.0) / (&b.1 - &a.1));
                }
            }
        }
        xs.sort();
        xs.dedup();
        let pts = xs
            .into_iter()
            .map(|x| {
                let y = outer.at(&inner.at(&x));
                (x, y)
            })
            .collect();
        PLMap::new(pts).expect("composite of valid maps is valid")
    }

    /// `self ∘ other`.
    pub fn after(&self, other: &PLMap) -> PLMap {
        PLMap::compose(self, other)
    }

    /// `self^n`, with `self^0` the identity.
    pub fn iterate(&self, n: u32) -> PLMap {
        let mut acc = PLMap::identity();
        for _ in 0..n {
            acc = PLMap::compose(self, &acc);
        }
        acc
    }

    pub fn is_strictly_increasing(&self) -> bool {
        self.pts.windows(2).all(|w| w[0].1 < w[1].1)
    }

    /// Increasing bijection of `[0,1]` onto itself.
    pub fn is_homeomorphism(&self) -> bool {
        self.is_strictly_increasing() && self.pts[0].1.is_zero() && self.pts[self.pts.len() - 1].1.is_one()
    }

    /// Inverse of an increasing homeomorphism.
    pub fn inverse(&self) -> Option<PLMap> {
        if !self.is_homeomorphism() {
            return None;
        }
        let pts = self.pts.iter().map(|(x, y)| (y.clone(), x.clone())).collect();
        Some(PLMap::new(pts).expect("swapped homeomorphism is valid"))
    }

    /// Maximal strictly monotone runs as `(start_breakpoint, end_breakpoint,
    /// direction)`; constant pieces form their own runs with direction 0.
    pub fn monotone_runs(&self) -> Vec<(usize, usize, i8)> {
        let mut runs: Vec<(usize, usize, i8)> = Vec::new();
        for (i, s) in self.slopes().iter().enumerate() {
            let d: i8 = if s.is_positive() {
                1
            } else if s.is_negative() {
                -1
            } else {
                0
            };
            match runs.last_mut() {
                Some(last) if last.2 == d => last.1 = i + 1,
                _ => runs.push((i, i + 1, d)),
            }
        }
        runs
    }

    pub fn classify(&self) -> MapProfile {
        let runs = self.monotone_runs();
        let slopes = self.slopes();
        let first = &self.pts[0].1;
        let last = &self.pts[self.pts.len() - 1].1;
        let zero_at_endpoints = first.is_zero() && last.is_zero();
        let is_surjective_each_piece = runs.iter().all(|&(a, b, d)| {
            d != 0 && {
                let (ya, yb) = (&self.pts[a].1, &self.pts[b].1);
                (ya.is_zero() && yb.is_one()) || (ya.is_one() && yb.is_zero())
            }
        });
        let is_unimodal =
            runs.len() == 2 && runs[0].2 == 1 && runs[1].2 == -1 && zero_at_endpoints && self.pts[runs[0].1].1.is_one();
        let mut fixed_points: Vec<Rational> = Vec::new();
        for w in self.pts.windows(2) {
            let (a, b) = (&w[0], &w[1]);
            // m(x) - x is affine on the piece; find its zeros.
            let da = &a.1 - &a.0;
            let db = &b.1 - &b.0;
            if da.is_zero() && db.is_zero() {
                // Whole piece lies on the diagonal: record its ends.
                fixed_points.push(a.0.clone());
                fixed_points.push(b.0.clone());
            } else if da.is_zero() {
                fixed_points.push(a.0.clone());
            } else if db.is_zero() {
                fixed_points.push(b.0.clone());
            } else if da.is_positive() != db.is_positive() {
                let t = &da / (&da - &db);
                fixed_points.push(&a.0 + t * (&b.0 - &a.0));
            }
        }
        fixed_points.sort();
        fixed_points.dedup();
        MapProfile {
            kinks: self.kinks().to_vec(),
            derivative_at_zero: slopes[0].clone(),
            slopes,
            monotone_piece_count: runs.len(),
            is_unimodal,
            is_surjective_each_piece,
            fixed_points,
            zero_at_endpoints,
        }
    }

    /// Abscissa of the maximum for unimodal maps.
    pub fn turning_point(&self) -> Option<Rational> {
        let runs = self.monotone_runs();
        if runs.len() == 2 && runs[0].2 == 1 && runs[1].2 == -1 {
            Some(self.pts[runs[0].1].0.clone())
        } else {
            None
        }
    }
}

/// Structural summary of a map.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MapProfile {
    #[serde(serialize_with = "crate::rational::ser::point_vec")]
    pub kinks: Vec<(Rational, Rational)>,
    #[serde(serialize_with = "crate::rational::ser::rat_vec")]
    pub slopes: Vec<Rational>,
    pub monotone_piece_count: usize,
    pub is_unimodal: bool,
    pub is_surjective_each_piece: bool,
    #[serde(serialize_with = "crate::rational::ser::rat")]
    pub derivative_at_zero: Rational,
    #[serde(serialize_with = "crate::rational::ser::rat_vec")]
    pub fixed_points: Vec<Rational>,
    pub zero_at_endpoints: bool,
}

impl fmt::Display for PLMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (x, y)) in self.pts.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{},{}", fmt_rational(x), fmt_rational(y))?;
        }
        Ok(())
    }
}

impl FromStr for PLMap {
    type Err = crate::text::ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        crate::text::parse_plmap(s)
    }
}

impl Serialize for PLMap {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for PLMap {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}
