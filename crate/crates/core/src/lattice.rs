//! Four-quadrant trajectory machinery: single trajectories, SATs (sets of
//! all trajectories sharing a `y` line), the determinating lattice, the
//! A/B/C/D intersection sequences and the coincident-kink index pairs.
//!
//! Conventions: for a pair `(g, ψ)` a trajectory through `x0` consists of the
//! lines `x = x0`, `ψ = ψ(x0)`, `g = g(x0)` and `y = g(ψ(x0))`. It is
//! consistent when `g(ψ(x0)) = ψ(g(x0))`.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::commute::is_iterate;
use crate::plmap::{PLMap, PlMapError};
use crate::rational::{in_unit, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("maps do not commute")]
    NotCommuting,
    #[error("the commutator is constant")]
    TrivialPsi,
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("lattice does not match the maps: {0}")]
    LatticeMismatch(String),
    #[error("kink without a coincident partner: {0}")]
    UnmatchedKink(String),
    #[error(transparent)]
    Map(#[from] PlMapError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SingleTrajectory {
    #[serde(serialize_with = "crate::rational::ser::rat")]
    pub x0: Rational,
    #[serde(serialize_with = "crate::rational::ser::rat")]
    pub psi_line: Rational,
    #[serde(serialize_with = "crate::rational::ser::rat")]
    pub g_line: Rational,
    #[serde(serialize_with = "crate::rational::ser::rat")]
    pub y_line: Rational,
    pub consistent: bool,
}

pub fn single_trajectory(g: &PLMap, psi: &PLMap, x0: &Rational) -> Result<SingleTrajectory, LatticeError> {
    let psi_line = psi.eval(x0)?;
    let g_line = g.at(x0);
    let y_line = g.at(&psi_line);
    let consistent = y_line == psi.at(&g_line);
    Ok(SingleTrajectory { x0: x0.clone(), psi_line, g_line, y_line, consistent })
}

/// All single trajectories whose `y` line equals `g(ψ(seed))`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Sat {
    #[serde(serialize_with = "crate::rational::ser::rat")]
    pub seed: Rational,
    #[serde(serialize_with = "crate::rational::ser::rat")]
    pub y_value: Rational,
    #[serde(serialize_with = "crate::rational::ser::rat_vec")]
    pub generators: Vec<Rational>,
    pub trajectories: Vec<SingleTrajectory>,
    pub is_boundary: bool,
}

impl Sat {
    pub fn is_consistent(&self) -> bool {
        self.trajectories.iter().all(|t| t.consistent)
    }
}

fn check_pair_shape(g: &PLMap, psi: &PLMap) -> Result<(), LatticeError> {
    if !g.classify().is_unimodal {
        return Err(LatticeError::PreconditionViolated("g must be unimodal with g(0) = g(1) = 0 and maximum 1".into()));
    }
    if !psi.classify().is_surjective_each_piece {
        return Err(LatticeError::PreconditionViolated("every monotone piece of psi must map onto [0,1]".into()));
    }
    Ok(())
}

fn sat_unchecked(g: &PLMap, psi: &PLMap, x: &Rational) -> Result<Sat, LatticeError> {
    let y_value = g.at(&psi.eval(x)?);
    let mut generators: Vec<Rational> = Vec::new();
    for p in g.preimages(&y_value)? {
        generators.extend(psi.preimages(&p)?);
    }
    generators.sort();
    generators.dedup();
    let trajectories = generators.iter().map(|x0| single_trajectory(g, psi, x0)).collect::<Result<Vec<_>, _>>()?;
    let is_boundary = y_value.is_zero() || y_value.is_one();
    Ok(Sat { seed: x.clone(), y_value, generators, trajectories, is_boundary })
}

/// The SAT through `x`.
pub fn sat(g: &PLMap, psi: &PLMap, x: &Rational) -> Result<Sat, LatticeError> {
    check_pair_shape(g, psi)?;
    sat_unchecked(g, psi, x)
}

/// Points at which both composites `g∘ψ` and `ψ∘g` may have kinks:
/// breakpoints of either map and the preimages of each map's breakpoints
/// under the other. Both composites are affine between consecutive points.
pub fn kink_test_points(g: &PLMap, psi: &PLMap) -> Vec<Rational> {
    let mut pts: BTreeSet<Rational> = BTreeSet::new();
    pts.extend(g.xs());
    pts.extend(psi.xs());
    for k in g.xs() {
        pts.extend(psi.level_crossings(&k));
    }
    for k in psi.xs() {
        pts.extend(g.level_crossings(&k));
    }
    pts.into_iter().collect()
}

/// One SAT per distinct value of `g∘ψ` on the kink test points, seeded by
/// that class's smallest generator; ordered by seed.
fn seed_sats(g: &PLMap, psi: &PLMap) -> Result<Vec<Sat>, LatticeError> {
    let mut classes: BTreeMap<Rational, ()> = BTreeMap::new();
    for x in kink_test_points(g, psi) {
        classes.insert(g.at(&psi.at(&x)), ());
    }
    let mut sats = Vec::with_capacity(classes.len());
    for y0 in classes.keys() {
        let mut generators: Vec<Rational> = Vec::new();
        for p in g.preimages(y0)? {
            generators.extend(psi.preimages(&p)?);
        }
        let seed = generators.into_iter().min().expect("class value is attained");
        sats.push(sat_unchecked(g, psi, &seed)?);
    }
    sats.sort_by(|a, b| a.seed.cmp(&b.seed));
    Ok(sats)
}

/// Commutativity decided by trajectory consistency over the SATs of all kink
/// test points. Requires unimodal `g` and piecewise-surjective `ψ`.
pub fn sat_verdict(g: &PLMap, psi: &PLMap) -> Result<bool, LatticeError> {
    check_pair_shape(g, psi)?;
    Ok(seed_sats(g, psi)?.iter().all(Sat::is_consistent))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LineCounts {
    pub x: usize,
    pub psi: usize,
    pub g: usize,
    pub y: usize,
}

impl LineCounts {
    /// Counts predicted for a non-trivial commutator with `n` monotone
    /// pieces and `s` non-boundary SATs.
    pub fn predicted(n: usize, s: usize) -> LineCounts {
        LineCounts { x: 2 * n * s + 2 * n - 1, psi: 2 * s + 1, g: n * s + n - 1, y: s }
    }

    pub fn as_tuple(&self) -> (usize, usize, usize, usize) {
        (self.x, self.psi, self.g, self.y)
    }
}

/// The determinating lattice of a commuting pair. Only interior lines are
/// stored; the coordinate axes and the lines at 1 are implicit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Lattice {
    #[serde(serialize_with = "crate::rational::ser::rat_vec")]
    pub x_lines: Vec<Rational>,
    #[serde(serialize_with = "crate::rational::ser::rat_vec")]
    pub psi_lines: Vec<Rational>,
    #[serde(serialize_with = "crate::rational::ser::rat_vec")]
    pub g_lines: Vec<Rational>,
    #[serde(serialize_with = "crate::rational::ser::rat_vec")]
    pub y_lines: Vec<Rational>,
    /// Seed SATs, one per class, including boundary ones.
    pub sats: Vec<Sat>,
    pub n: usize,
    pub s: usize,
    pub counts: LineCounts,
    /// Whether `counts` agrees with [`LineCounts::predicted`]; `None` when
    /// `ψ` is an iterate of `g`, where the prediction does not apply.
    pub counts_match: Option<bool>,
}

impl Lattice {
    pub fn seeds(&self) -> Vec<Rational> {
        self.sats.iter().map(|s| s.seed.clone()).collect()
    }
}

fn interior(set: BTreeSet<Rational>) -> Vec<Rational> {
    set.into_iter().filter(|v| !v.is_zero() && !v.is_one()).collect()
}

pub fn determinating_lattice(g: &PLMap, psi: &PLMap) -> Result<Lattice, LatticeError> {
    if psi.piece_count() == 1 && psi.slopes()[0].is_zero() {
        return Err(LatticeError::TrivialPsi);
    }
    if PLMap::compose(g, psi) != PLMap::compose(psi, g) {
        return Err(LatticeError::NotCommuting);
    }
    check_pair_shape(g, psi)?;
    let sats = seed_sats(g, psi)?;
    let (mut xs, mut ps, mut gs, mut ys) = (BTreeSet::new(), BTreeSet::new(), BTreeSet::new(), BTreeSet::new());
    for sat in &sats {
        for t in &sat.trajectories {
            xs.insert(t.x0.clone());
            ps.insert(t.psi_line.clone());
            gs.insert(t.g_line.clone());
            ys.insert(t.y_line.clone());
        }
    }
    let n = psi.classify().monotone_piece_count;
    let s = sats.iter().filter(|sat| !sat.is_boundary).count();
    let x_lines = interior(xs);
    let psi_lines = interior(ps);
    let g_lines = interior(gs);
    let y_lines = interior(ys);
    let counts = LineCounts { x: x_lines.len(), psi: psi_lines.len(), g: g_lines.len(), y: y_lines.len() };
    let counts_match = match is_iterate(psi, g) {
        Some(_) => None,
        None => Some(counts == LineCounts::predicted(n, s)),
    };
    Ok(Lattice { x_lines, psi_lines, g_lines, y_lines, sats, n, s, counts, counts_match })
}

/// Grid `{0} ∪ lines ∪ {1}`.
fn closed(lines: &[Rational]) -> Vec<Rational> {
    let mut v = Vec::with_capacity(lines.len() + 2);
    v.push(Rational::zero());
    v.extend(lines.iter().cloned());
    v.push(Rational::one());
    v
}

/// Intersections of the graphs with the lattice lines, indexed from the
/// origin. Coordinates are given in the axes of the respective quadrant:
/// `A` in ψ×y (graph of g), `B` in x×ψ (graph of ψ), `C` in g×y (graph of
/// ψ), `D` in x×g (graph of g).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AbcdPoints {
    #[serde(serialize_with = "crate::rational::ser::point_vec")]
    pub a: Vec<(Rational, Rational)>,
    #[serde(serialize_with = "crate::rational::ser::point_vec")]
    pub b: Vec<(Rational, Rational)>,
    #[serde(serialize_with = "crate::rational::ser::point_vec")]
    pub c: Vec<(Rational, Rational)>,
    #[serde(serialize_with = "crate::rational::ser::point_vec")]
    pub d: Vec<(Rational, Rational)>,
}

fn check_maps_into(m: &PLMap, from: &[Rational], into: &[Rational], what: &str) -> Result<(), LatticeError> {
    let target: BTreeSet<&Rational> = into.iter().collect();
    for x in from {
        if !in_unit(x) {
            return Err(LatticeError::LatticeMismatch(format!("{what}: line {x} outside [0,1]")));
        }
        let y = m.at(x);
        if !(y.is_zero() || y.is_one() || target.contains(&y)) {
            return Err(LatticeError::LatticeMismatch(format!("{what}: image {y} of line {x} is not a lattice line")));
        }
    }
    Ok(())
}

/// Verifies that the lattice lines are closed under the maps.
pub fn check_lattice(g: &PLMap, psi: &PLMap, lat: &Lattice) -> Result<(), LatticeError> {
    check_maps_into(psi, &lat.x_lines, &lat.psi_lines, "psi on x lines")?;
    check_maps_into(g, &lat.x_lines, &lat.g_lines, "g on x lines")?;
    check_maps_into(g, &lat.psi_lines, &lat.y_lines, "g on psi lines")?;
    check_maps_into(psi, &lat.g_lines, &lat.y_lines, "psi on g lines")
}

pub fn abcd_points(g: &PLMap, psi: &PLMap, lat: &Lattice) -> Result<AbcdPoints, LatticeError> {
    check_lattice(g, psi, lat)?;
    let graph = |m: &PLMap, grid: &[Rational]| grid.iter().map(|x| (x.clone(), m.at(x))).collect::<Vec<_>>();
    let xs = closed(&lat.x_lines);
    Ok(AbcdPoints {
        a: graph(g, &closed(&lat.psi_lines)),
        b: graph(psi, &xs),
        c: graph(psi, &closed(&lat.g_lines)),
        d: graph(g, &xs),
    })
}

/// Index pairs of coincident kinks: `p` pairs `A_i` (a breakpoint of g) with
/// `D_j`, `q` pairs `B_i` (a breakpoint of ψ) with `C_j`. The endpoints count
/// as breakpoints.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KinkPairSets {
    pub p: BTreeSet<(usize, usize)>,
    pub q: BTreeSet<(usize, usize)>,
}

fn pair_up(
    kinks: &[Rational],
    left: &[(Rational, Rational)],
    right: &[(Rational, Rational)],
    name: &str,
) -> Result<BTreeSet<(usize, usize)>, LatticeError> {
    let mut out = BTreeSet::new();
    for k in kinks {
        let i = left.iter().position(|p| p.0 == *k);
        let j = right.iter().position(|p| p.0 == *k);
        match (i, j) {
            (Some(i), Some(j)) => {
                debug_assert_eq!(left[i], right[j]);
                out.insert((i, j));
            }
            _ => return Err(LatticeError::UnmatchedKink(format!("{name} breakpoint at {k}"))),
        }
    }
    Ok(out)
}

pub fn kink_pairs(g: &PLMap, psi: &PLMap, lat: &Lattice) -> Result<KinkPairSets, LatticeError> {
    let pts = abcd_points(g, psi, lat)?;
    Ok(KinkPairSets { p: pair_up(&g.xs(), &pts.a, &pts.d, "g")?, q: pair_up(&psi.xs(), &pts.b, &pts.c, "psi")? })
}

/// The coincidence pattern of the 3-piece lattice in which `A_1` meets
/// `D_2`, with the regular `B`/`C` pairing along the way.
pub fn is_fig10_pattern(pairs: &KinkPairSets) -> bool {
    const Q: [(usize, usize); 6] = [(0, 0), (2, 1), (4, 2), (6, 3), (8, 4), (10, 5)];
    pairs.p.contains(&(1, 2)) && Q.iter().all(|qp| pairs.q.contains(qp))
}

/// The PL map on the grid `{0} ∪ u ∪ {1}` that starts at the origin, moves
/// one step of the value grid `{0} ∪ v ∪ {1}` per cell, and turns only at 0
/// and 1. Returns `None` for an empty value grid step (no interior values
/// and no cells).
pub fn mu_uv(u: &[Rational], v: &[Rational]) -> Option<PLMap> {
    let xs = closed(u);
    let ys = closed(v);
    let top = ys.len() - 1;
    let mut idx = 0usize;
    let mut up = true;
    let mut pts = vec![(xs[0].clone(), ys[0].clone())];
    for x in &xs[1..] {
        if up && idx == top {
            up = false;
        } else if !up && idx == 0 {
            up = true;
        }
        idx = if up { idx + 1 } else { idx - 1 };
        pts.push((x.clone(), ys[idx].clone()));
    }
    PLMap::new(pts).ok()
}

/// Rebuilds the pair from lattice lines alone: ψ from (X, Ψ), g from (X, G),
/// g from (Ψ, Y) and ψ from (G, Y).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reconstruction {
    pub psi_from_x: Option<PLMap>,
    pub g_from_x: Option<PLMap>,
    pub g_from_psi: Option<PLMap>,
    pub psi_from_g: Option<PLMap>,
}

impl Reconstruction {
    pub fn reproduces(&self, g: &PLMap, psi: &PLMap) -> bool {
        self.psi_from_x.as_ref() == Some(psi)
            && self.g_from_x.as_ref() == Some(g)
            && self.g_from_psi.as_ref() == Some(g)
            && self.psi_from_g.as_ref() == Some(psi)
    }
}

pub fn reconstruct(lat: &Lattice) -> Reconstruction {
    Reconstruction {
        psi_from_x: mu_uv(&lat.x_lines, &lat.psi_lines),
        g_from_x: mu_uv(&lat.x_lines, &lat.g_lines),
        g_from_psi: mu_uv(&lat.psi_lines, &lat.y_lines),
        psi_from_g: mu_uv(&lat.g_lines, &lat.y_lines),
    }
}
