//! Parametrized families of unimodal maps that are PL conjugate to the tent
//! map, together with their sawtooth commutators, and the reconstruction of
//! such a map from its increasing leg.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::commute::{commutes, tent, xi, CommuteError};
use crate::conjugacy::{conjugate, find_tent_conjugacy, verify_conjugacy, ConjugacyError};
use crate::plmap::{PLMap, PlMapError};
use crate::rational::{fmt_rational, int, one, r, zero, Rational};

pub const COMPLETION_STEP_CAP: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error("parameters out of range: {0}")]
    ParamOutOfRange(String),
    #[error("breakpoints collide: {0}")]
    DegenerateShape(String),
    #[error("unknown family `{0}`")]
    UnknownFamily(String),
    #[error("generated instance failed its own check: {0}")]
    InvariantBroken(String),
    #[error("slope at the origin must be 2, got {0}")]
    SlopeAtZeroNotTwo(Rational),
    #[error("the leg has a positive fixed point at or before {0}")]
    PositiveFixedPoint(Rational),
    #[error("not an increasing leg: {0}")]
    NotIncreasingLeg(String),
    #[error("no PL conjugacy to the tent map")]
    NotTentConjugate,
    #[error(transparent)]
    Conjugacy(#[from] ConjugacyError),
    #[error(transparent)]
    Commute(#[from] CommuteError),
    #[error(transparent)]
    Map(#[from] PlMapError),
}

/// A unimodal `g`, its commutator `ψ = h∘ξ_t∘h⁻¹`, and the conjugacy `h`
/// from the tent map.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FamilyInstance {
    pub family_id: String,
    #[serde(serialize_with = "ser_params")]
    pub params: BTreeMap<String, Rational>,
    pub t: i64,
    pub g: PLMap,
    pub psi: PLMap,
    pub h: Option<PLMap>,
}

fn ser_params<S: serde::Serializer>(p: &BTreeMap<String, Rational>, s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeMap;
    let mut m = s.serialize_map(Some(p.len()))?;
    for (k, v) in p {
        m.serialize_entry(k, &fmt_rational(v))?;
    }
    m.end()
}

/// Outcome of one family-specific slope identity on an instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SlopeCheck {
    pub name: String,
    pub holds: bool,
}

fn check(name: &str, holds: bool) -> SlopeCheck {
    SlopeCheck { name: name.into(), holds }
}

/// A family of commuting pairs, addressable by id.
pub trait Family: Send + Sync {
    fn id(&self) -> &'static str;
    fn param_names(&self) -> &'static [&'static str];
    /// Breakpoints of `g` and of the conjugacy `h`, after range checks.
    fn shape(&self, params: &[Rational]) -> Result<(PLMap, PLMap), FamilyError>;
    /// Slope identities that every non-degenerate member satisfies.
    fn slope_checks(&self, params: &[Rational], g: &PLMap) -> Vec<SlopeCheck>;

    fn build(&self, params: &[Rational], t: i64) -> Result<FamilyInstance, FamilyError> {
        let names = self.param_names();
        if params.len() != names.len() {
            return Err(FamilyError::ParamOutOfRange(format!("{} expects {} parameter(s)", self.id(), names.len())));
        }
        let (g, h) = self.shape(params)?;
        let psi = conjugate(&xi(t)?, &h)?;
        if conjugate(&tent(), &h)? != g {
            return Err(FamilyError::InvariantBroken("g is not the tent conjugate by h".into()));
        }
        if !verify_conjugacy(&tent(), &g, &h).is_conjugacy {
            return Err(FamilyError::InvariantBroken("conjugacy check failed".into()));
        }
        if !commutes(&g, &psi).commutes {
            return Err(FamilyError::InvariantBroken("g and psi do not commute".into()));
        }
        let params = names.iter().map(|n| n.to_string()).zip(params.iter().cloned()).collect();
        Ok(FamilyInstance { family_id: self.id().into(), params, t, g, psi, h: Some(h) })
    }
}

fn pts(v: Vec<(Rational, Rational)>) -> Result<PLMap, FamilyError> {
    PLMap::new(v).map_err(|e| FamilyError::DegenerateShape(e.to_string()))
}

fn strictly_increasing(xs: &[&Rational]) -> bool {
    xs.windows(2).all(|w| w[0] < w[1])
}

/// Four-piece maps `(0,0)→(a/2,a)→(a,1)→((a+1)/2,a)→(1,0)`, conjugated by
/// `(0,0)→(1/2,a)→(1,1)`; `0 < a < 1`.
pub struct Fig9;

impl Family for Fig9 {
    fn id(&self) -> &'static str {
        "fig9"
    }

    fn param_names(&self) -> &'static [&'static str] {
        &["a"]
    }

    fn shape(&self, p: &[Rational]) -> Result<(PLMap, PLMap), FamilyError> {
        let a = &p[0];
        if !(a.is_positive() && *a < one()) {
            return Err(FamilyError::ParamOutOfRange(format!("need 0 < a < 1, got a = {a}")));
        }
        let half = r(1, 2);
        let g = pts(vec![
            (zero(), zero()),
            (a * &half, a.clone()),
            (a.clone(), one()),
            ((a + one()) * &half, a.clone()),
            (one(), zero()),
        ])?;
        let h = pts(vec![(zero(), zero()), (half, a.clone()), (one(), one())])?;
        Ok((g, h))
    }

    fn slope_checks(&self, _p: &[Rational], g: &PLMap) -> Vec<SlopeCheck> {
        let s = g.slopes();
        if s.len() != 4 {
            return Vec::new();
        }
        vec![
            check("g1 = 2", s[0] == int(2)),
            check("g3 = -g1", s[2] == -&s[0]),
            check("g4 = -g1^2/g2", s[3] == -(&s[0] * &s[0]) / &s[1]),
        ]
    }
}

/// Six-piece maps with kink ordinates `a < b`:
/// `(0,0)→(a/2,a)→(a,b)→((3a+b)/4,1)→((a+b)/2,b)→(b,a)→(1,0)`, conjugated by
/// `(0,0)→(2/5,a)→(4/5,b)→(1,1)`; `0 < a < b < 1`.
pub struct Fig11;

impl Family for Fig11 {
    fn id(&self) -> &'static str {
        "fig11"
    }

    fn param_names(&self) -> &'static [&'static str] {
        &["a", "b"]
    }

    fn shape(&self, p: &[Rational]) -> Result<(PLMap, PLMap), FamilyError> {
        let (a, b) = (&p[0], &p[1]);
        if !(a.is_positive() && a < b && *b < one()) {
            return Err(FamilyError::ParamOutOfRange(format!("need 0 < a < b < 1, got a = {a}, b = {b}")));
        }
        let xs = [a / int(2), a.clone(), (a * int(3) + b) / int(4), (a + b) / int(2), b.clone()];
        if !strictly_increasing(&xs.iter().collect::<Vec<_>>()) {
            return Err(FamilyError::DegenerateShape("abscissas are not increasing".into()));
        }
        let [x1, x2, x3, x4, x5] = xs;
        let g = pts(vec![
            (zero(), zero()),
            (x1, a.clone()),
            (x2, b.clone()),
            (x3, one()),
            (x4, b.clone()),
            (x5, a.clone()),
            (one(), zero()),
        ])?;
        let h = pts(vec![(zero(), zero()), (r(2, 5), a.clone()), (r(4, 5), b.clone()), (one(), one())])?;
        Ok((g, h))
    }

    fn slope_checks(&self, p: &[Rational], g: &PLMap) -> Vec<SlopeCheck> {
        let s = g.slopes();
        if s.len() != 6 {
            return Vec::new();
        }
        // Lengths along the y axis: first kink height, and the rise between
        // the two lower kinks.
        let a_len = p[0].clone();
        let b_len = &p[1] - &p[0];
        vec![
            check("g1 = 2", s[0] == int(2)),
            check("a = 8/(4 g2 + g2 g3 + 8)", a_len == int(8) / (&s[1] * int(4) + &s[1] * &s[2] + int(8))),
            check("g2 = 2b/a", s[1] == &b_len * int(2) / &a_len),
            check("g3 = 4(1-a-b)/b", s[2] == (one() - &a_len - &b_len) * int(4) / &b_len),
            check("g4 = -g3", s[3] == -&s[2]),
            check("g5 = -2", s[4] == int(-2)),
            check("g6 = -8/(g2 g3)", s[5] == int(-8) / (&s[1] * &s[2])),
        ]
    }
}

/// Five-piece maps `(0,0)→(a,2a)→(b,1)→(2b−a,2a)→(2a,4(b−a))→(1,0)`,
/// conjugated by `(0,0)→(a/b,2a)→(1,1)`; `0 < a < b < 3a/2`, `a < 1/2`.
pub struct Fig18;

impl Family for Fig18 {
    fn id(&self) -> &'static str {
        "fig18"
    }

    fn param_names(&self) -> &'static [&'static str] {
        &["a", "b"]
    }

    fn shape(&self, p: &[Rational]) -> Result<(PLMap, PLMap), FamilyError> {
        let (a, b) = (&p[0], &p[1]);
        if !(a.is_positive() && a < b && b * int(2) < a * int(3) && a * int(2) < one()) {
            return Err(FamilyError::ParamOutOfRange(format!(
                "need 0 < a < b < 3a/2 and a < 1/2, got a = {a}, b = {b}"
            )));
        }
        let two_a = a * int(2);
        let xs = [a.clone(), b.clone(), b * int(2) - a, two_a.clone()];
        if !strictly_increasing(&xs.iter().collect::<Vec<_>>()) {
            return Err(FamilyError::DegenerateShape("abscissas are not increasing".into()));
        }
        let [x1, x2, x3, x4] = xs;
        let g = pts(vec![
            (zero(), zero()),
            (x1, two_a.clone()),
            (x2, one()),
            (x3, two_a.clone()),
            (x4, (b - a) * int(4)),
            (one(), zero()),
        ])?;
        let h = pts(vec![(zero(), zero()), (a / b, two_a), (one(), one())])?;
        Ok((g, h))
    }

    fn slope_checks(&self, p: &[Rational], g: &PLMap) -> Vec<SlopeCheck> {
        let s = g.slopes();
        if s.len() != 5 {
            return Vec::new();
        }
        let (a, b) = (&p[0], &p[1]);
        let a_len = (b - a) * int(4);
        let b_len = a * int(6) - b * int(4);
        vec![
            check("g1 = 2", s[0] == int(2)),
            check("b = 1 - a g2/4 - a", b_len == one() - &a_len * &s[1] / int(4) - &a_len),
            check("g3 = -g2", s[2] == -&s[1]),
            check("g4 = -2", s[3] == int(-2)),
            check("g5 = -4/g2", s[4] == int(-4) / &s[1]),
        ]
    }
}

pub fn families() -> Vec<Box<dyn Family>> {
    vec![Box::new(Fig9), Box::new(Fig11), Box::new(Fig18)]
}

pub fn family_by_id(id: &str) -> Result<Box<dyn Family>, FamilyError> {
    families().into_iter().find(|f| f.id() == id).ok_or_else(|| FamilyError::UnknownFamily(id.into()))
}

pub fn family_fig9(a: Rational) -> Result<FamilyInstance, FamilyError> {
    Fig9.build(&[a], 3)
}

pub fn family_fig11(a: Rational, b: Rational) -> Result<FamilyInstance, FamilyError> {
    Fig11.build(&[a, b], 3)
}

pub fn family_fig18(a: Rational, b: Rational) -> Result<FamilyInstance, FamilyError> {
    Fig18.build(&[a, b], 3)
}

/// Increasing PL leg from `(0,0)` to `(v,1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IncreasingLeg {
    pts: Vec<(Rational, Rational)>,
}

impl IncreasingLeg {
    pub fn new(points: Vec<(Rational, Rational)>) -> Result<Self, FamilyError> {
        let bad = |m: &str| Err(FamilyError::NotIncreasingLeg(m.into()));
        if points.len() < 2 {
            return bad("need at least two points");
        }
        if !points[0].0.is_zero() || !points[0].1.is_zero() {
            return bad("must start at (0,0)");
        }
        let (v, top) = &points[points.len() - 1];
        if !top.is_one() || !v.is_positive() || *v >= one() {
            return bad("must end at (v,1) with 0 < v < 1");
        }
        if points.windows(2).any(|w| w[0].0 >= w[1].0 || w[0].1 >= w[1].1) {
            return bad("coordinates must strictly increase");
        }
        // Drop collinear interior points.
        let mut out: Vec<(Rational, Rational)> = Vec::with_capacity(points.len());
        for p in points {
            while out.len() >= 2 {
                let (a, b) = (&out[out.len() - 2], &out[out.len() - 1]);
                if (&b.1 - &a.1) * (&p.0 - &b.0) == (&p.1 - &b.1) * (&b.0 - &a.0) {
                    out.pop();
                } else {
                    break;
                }
            }
            out.push(p);
        }
        Ok(IncreasingLeg { pts: out })
    }

    pub fn parse(text: &str) -> Result<Self, crate::text::ParseError> {
        let points = crate::text::parse_points(text)?;
        IncreasingLeg::new(points).map_err(|e| crate::text::ParseError::Syntax {
            line: 1,
            column: 1,
            message: e.to_string(),
        })
    }

    pub fn points(&self) -> &[(Rational, Rational)] {
        &self.pts
    }

    pub fn turning_point(&self) -> &Rational {
        &self.pts[self.pts.len() - 1].0
    }

    fn interp(pts: &[(Rational, Rational)], x: &Rational, inverse: bool) -> Rational {
        let key = |p: &(Rational, Rational)| if inverse { p.1.clone() } else { p.0.clone() };
        let val = |p: &(Rational, Rational)| if inverse { p.0.clone() } else { p.1.clone() };
        let i = pts.partition_point(|p| key(p) <= *x).clamp(1, pts.len() - 1);
        let (a, b) = (&pts[i - 1], &pts[i]);
        val(a) + (x - key(a)) * (val(b) - val(a)) / (key(b) - key(a))
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        Self::interp(&self.pts, x, false)
    }

    pub fn eval_inverse(&self, y: &Rational) -> Rational {
        Self::interp(&self.pts, y, true)
    }
}

impl std::fmt::Display for IncreasingLeg {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for (i, (x, y)) in self.pts.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{},{}", fmt_rational(x), fmt_rational(y))?;
        }
        Ok(())
    }
}

/// The part of a unimodal map up to its turning point.
pub fn increasing_leg(g: &PLMap) -> Option<IncreasingLeg> {
    let v = g.turning_point()?;
    let pts = g.breakpoints().iter().take_while(|p| p.0 <= v).cloned().collect();
    IncreasingLeg::new(pts).ok()
}

/// A unimodal map rebuilt from its increasing leg, with its conjugacy from
/// the tent map.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Completion {
    pub g: PLMap,
    pub h: PLMap,
}

/// Rebuilds the unique tent-conjugate unimodal map with the given increasing
/// leg.
///
/// The conjugacy satisfies `h(2x) = leg(h(x))` on `[0,1/2]`. Starting from
/// `h(1) = 1`, the values `c_j = h(2^-j)` follow the inverse leg down until
/// `c_j` falls inside twice the first linear piece; there `h` is linear, and
/// the functional equation doubles its domain back up to `[0,1]`.
pub fn complete_from_left(leg: &IncreasingLeg) -> Result<Completion, FamilyError> {
    let pts = leg.points();
    let slope0 = (&pts[1].1 - &pts[0].1) / (&pts[1].0 - &pts[0].0);
    if slope0 != int(2) {
        return Err(FamilyError::SlopeAtZeroNotTwo(slope0));
    }
    // leg(x) - x is affine between breakpoints and positive just right of 0,
    // so positivity at every breakpoint rules out positive fixed points.
    if let Some(p) = pts[1..].iter().find(|p| p.1 <= p.0) {
        return Err(FamilyError::PositiveFixedPoint(p.0.clone()));
    }
    let first_kink = pts[1].0.clone();
    let limit = &first_kink * int(2);
    let mut c = one();
    let mut j = 0usize;
    while c > limit {
        if j == COMPLETION_STEP_CAP {
            return Err(FamilyError::NotIncreasingLeg("recursion did not reach the linear piece".into()));
        }
        c = leg.eval_inverse(&c);
        j += 1;
    }
    let mut width = Rational::one() / Rational::from_integer(num_bigint::BigInt::from(2u8).pow(j as u32));
    let mut h: Vec<(Rational, Rational)> = vec![(zero(), zero()), (width.clone(), c)];
    let leg_xs: Vec<Rational> = pts.iter().map(|p| p.0.clone()).collect();
    for _ in 0..j {
        // h_new(2x) = leg(h_old(x)): kinks come from h's own kinks and from
        // points where h_old passes a kink of the leg.
        let mut xs: Vec<Rational> = h.iter().map(|p| p.0.clone()).collect();
        for w in h.windows(2) {
            let (a, b) = (&w[0], &w[1]);
            for y in &leg_xs {
                if *y > a.1 && *y < b.1 {
                    xs.push(&a.0 + (y - &a.1) * (&b.0 - &a.0) / (&b.1 - &a.1));
                }
            }
        }
        xs.sort();
        xs.dedup();
        let old = h;
        h = xs.into_iter().map(|x| (&x * int(2), leg.eval(&IncreasingLeg::interp(&old, &x, false)))).collect();
        width *= int(2);
    }
    debug_assert!(width.is_one());
    let h = PLMap::new(h)?;
    if !h.is_homeomorphism() {
        return Err(FamilyError::InvariantBroken("constructed h is not a homeomorphism".into()));
    }
    let g = conjugate(&tent(), &h)?;
    if increasing_leg(&g).as_ref() != Some(leg) {
        return Err(FamilyError::InvariantBroken("completion does not extend the given leg".into()));
    }
    Ok(Completion { g, h })
}

/// `h∘ξ_t∘h⁻¹` for the conjugacy `h` from the tent map to `g`.
pub fn commutator_of(g: &PLMap, t: i64) -> Result<PLMap, FamilyError> {
    let h = match find_tent_conjugacy(g) {
        Ok(Some(h)) => h,
        Ok(None) | Err(ConjugacyError::NotUnimodal) => return Err(FamilyError::NotTentConjugate),
        Err(e) => return Err(e.into()),
    };
    Ok(conjugate(&xi(t)?, &h)?)
}
