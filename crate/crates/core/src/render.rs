//! Deterministic SVG rendering of the four-quadrant diagram.
//!
//! Orientation: the `x` axis points left, `ψ` up, `y` right and `g` down.
//! The graph of `ψ` is drawn in the upper-left (`x×ψ`) and lower-right
//! (`g×y`) quadrants, the graph of `g` in the upper-right (`ψ×y`) and
//! lower-left (`x×g`) ones, so a single trajectory closes into a rectangle
//! exactly when it is consistent.
//!
//! Coordinates are exact rationals rounded to six decimals for output only.

use std::fmt::Write as _;

use num_traits::One;
use serde::Serialize;

use crate::lattice::{abcd_points, check_lattice, Lattice, LatticeError, Sat};
use crate::plmap::PLMap;
use crate::rational::{fmt_rational, int, to_decimal, Rational};

const PLACES: u32 = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Quadrant {
    /// upper left, graph of ψ
    XPsi,
    /// upper right, graph of g
    PsiY,
    /// lower right, graph of ψ
    GY,
    /// lower left, graph of g
    XG,
}

/// Corner mark used to say which quadrant a coordinate pair refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Corner {
    Lr,
    Ll,
    Ur,
    Ul,
}

impl Quadrant {
    pub fn corner(self) -> Corner {
        match self {
            Quadrant::XPsi => Corner::Lr,
            Quadrant::PsiY => Corner::Ll,
            Quadrant::GY => Corner::Ul,
            Quadrant::XG => Corner::Ur,
        }
    }
}

pub struct PointLabelConvention;

impl PointLabelConvention {
    /// `(α,β)_⌟`, `_⌞(α,β)`, `(α,β)^⌝` or `^⌜(α,β)`.
    pub fn tag(corner: Corner, alpha: &Rational, beta: &Rational) -> String {
        let pair = format!("({},{})", fmt_rational(alpha), fmt_rational(beta));
        match corner {
            Corner::Lr => format!("{pair}_⌟"),
            Corner::Ll => format!("_⌞{pair}"),
            Corner::Ur => format!("{pair}^⌝"),
            Corner::Ul => format!("^⌜{pair}"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct QuadrantScene {
    pub g: PLMap,
    pub psi: PLMap,
    pub lattice: Option<Lattice>,
    pub highlighted_sats: Vec<Sat>,
    pub labels: bool,
    /// Side of the square canvas in SVG user units.
    pub size: u32,
}

impl QuadrantScene {
    pub fn new(g: PLMap, psi: PLMap) -> Self {
        QuadrantScene { g, psi, lattice: None, highlighted_sats: Vec::new(), labels: false, size: 600 }
    }

    pub fn with_lattice(mut self, lattice: Lattice) -> Self {
        self.lattice = Some(lattice);
        self
    }

    pub fn with_labels(mut self, labels: bool) -> Self {
        self.labels = labels;
        self
    }

    pub fn with_sats(mut self, sats: Vec<Sat>) -> Self {
        self.highlighted_sats = sats;
        self
    }
}

struct Canvas {
    centre: Rational,
    scale: Rational,
}

impl Canvas {
    fn new(size: u32) -> Self {
        let size = int(size as i64);
        let margin = &size / int(16);
        let centre = &size / int(2);
        let scale = &centre - &margin;
        Canvas { centre, scale }
    }

    /// Canvas position of a point given in a quadrant's own coordinates:
    /// `(x, ψ)`, `(ψ, y)`, `(g, y)` or `(x, g)`.
    fn place(&self, q: Quadrant, u: &Rational, w: &Rational) -> (Rational, Rational) {
        let (c, s) = (&self.centre, &self.scale);
        match q {
            Quadrant::XPsi => (c - u * s, c - w * s),
            Quadrant::PsiY => (c + w * s, c - u * s),
            Quadrant::GY => (c + w * s, c + u * s),
            Quadrant::XG => (c - u * s, c + w * s),
        }
    }

    fn at(&self, offset: &Rational) -> Rational {
        &self.centre + offset * &self.scale
    }
}

fn d(x: &Rational) -> String {
    to_decimal(x, PLACES)
}

fn line(out: &mut String, x1: &Rational, y1: &Rational, x2: &Rational, y2: &Rational, class: &str) {
    let _ = writeln!(out, r#"  <line class="{class}" x1="{}" y1="{}" x2="{}" y2="{}"/>"#, d(x1), d(y1), d(x2), d(y2));
}

fn polyline(out: &mut String, pts: &[(Rational, Rational)], class: &str, closed: bool) {
    let coords: Vec<String> = pts.iter().map(|(x, y)| format!("{},{}", d(x), d(y))).collect();
    let tag = if closed { "polygon" } else { "polyline" };
    let _ = writeln!(out, r#"  <{tag} class="{class}" points="{}"/>"#, coords.join(" "));
}

const STYLE: &str = "\
    .axis { stroke: #000; stroke-width: 1.2; }
    .frame { stroke: #999; stroke-width: 0.6; fill: none; }
    .lattice { stroke: #9ab; stroke-width: 0.5; }
    .graph-g { stroke: #c22; stroke-width: 1.6; fill: none; }
    .graph-psi { stroke: #22c; stroke-width: 1.6; fill: none; }
    .sat { stroke: #2a2; stroke-width: 1; fill: none; stroke-dasharray: 4 2; }
    .dot { fill: #000; }
    .label { font: 11px serif; }
    .axis-name { font: italic 14px serif; }";

/// Renders the scene. Identical scenes give byte-identical output.
pub fn render_quadrant_svg(scene: &QuadrantScene) -> Result<String, LatticeError> {
    let (g, psi) = (&scene.g, &scene.psi);
    if let Some(lat) = &scene.lattice {
        check_lattice(g, psi, lat)?;
    }
    let cv = Canvas::new(scene.size);
    let one = Rational::one();
    let lo = cv.at(&-&one);
    let hi = cv.at(&one);
    let c = cv.centre.clone();
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{0}" height="{0}" viewBox="0 0 {0} {0}">"#,
        scene.size
    );
    let _ = writeln!(out, "  <style>\n{STYLE}\n  </style>");

    // Unit squares of the four quadrants.
    for (x1, y1) in [(&lo, &lo), (&c, &lo), (&c, &c), (&lo, &c)] {
        let _ = writeln!(
            out,
            r#"  <rect class="frame" x="{}" y="{}" width="{}" height="{}"/>"#,
            d(x1),
            d(y1),
            d(&cv.scale),
            d(&cv.scale)
        );
    }

    if let Some(lat) = &scene.lattice {
        for x in &lat.x_lines {
            let px = cv.at(&-x);
            line(&mut out, &px, &lo, &px, &hi, "lattice");
        }
        for y in &lat.y_lines {
            let px = cv.at(y);
            line(&mut out, &px, &lo, &px, &hi, "lattice");
        }
        for p in &lat.psi_lines {
            let py = cv.at(&-p);
            line(&mut out, &lo, &py, &hi, &py, "lattice");
        }
        for q in &lat.g_lines {
            let py = cv.at(q);
            line(&mut out, &lo, &py, &hi, &py, "lattice");
        }
    }

    // Axes with their names at the outer ends.
    line(&mut out, &lo, &c, &hi, &c, "axis");
    line(&mut out, &c, &lo, &c, &hi, "axis");
    let pad = &cv.scale / int(20);
    for (name, x, y) in [
        ("x", &lo - &pad * int(2), &c - &pad),
        ("y", &hi + &pad, &c - &pad),
        ("ψ", &c + &pad, &lo - &pad),
        ("g", &c + &pad, &hi + &pad * int(2)),
    ] {
        let _ = writeln!(out, r#"  <text class="axis-name" x="{}" y="{}">{name}</text>"#, d(&x), d(&y));
    }

    let graph = |m: &PLMap, q: Quadrant| -> Vec<(Rational, Rational)> {
        m.breakpoints().iter().map(|(u, w)| cv.place(q, u, w)).collect()
    };
    polyline(&mut out, &graph(psi, Quadrant::XPsi), "graph-psi", false);
    polyline(&mut out, &graph(g, Quadrant::PsiY), "graph-g", false);
    polyline(&mut out, &graph(psi, Quadrant::GY), "graph-psi", false);
    polyline(&mut out, &graph(g, Quadrant::XG), "graph-g", false);

    for sat in &scene.highlighted_sats {
        for t in &sat.trajectories {
            let corners = [
                cv.place(Quadrant::XPsi, &t.x0, &t.psi_line),
                cv.place(Quadrant::PsiY, &t.psi_line, &t.y_line),
                cv.place(Quadrant::GY, &t.g_line, &psi.at(&t.g_line)),
                cv.place(Quadrant::XG, &t.x0, &t.g_line),
            ];
            polyline(&mut out, &corners, "sat", true);
        }
    }

    if let Some(lat) = &scene.lattice {
        let pts = abcd_points(g, psi, lat)?;
        let g_kinks: Vec<&Rational> = g.kinks().iter().map(|p| &p.0).collect();
        let psi_kinks: Vec<&Rational> = psi.kinks().iter().map(|p| &p.0).collect();
        let sets = [
            ("A", Quadrant::PsiY, &pts.a, &g_kinks),
            ("B", Quadrant::XPsi, &pts.b, &psi_kinks),
            ("C", Quadrant::GY, &pts.c, &psi_kinks),
            ("D", Quadrant::XG, &pts.d, &g_kinks),
        ];
        for (name, q, seq, kinks) in sets {
            for (i, (u, w)) in seq.iter().enumerate() {
                let (px, py) = cv.place(q, u, w);
                let tag = PointLabelConvention::tag(q.corner(), u, w);
                let _ = writeln!(
                    out,
                    r#"  <circle class="dot" cx="{}" cy="{}" r="2"><title>{name}{i} {tag}</title></circle>"#,
                    d(&px),
                    d(&py)
                );
                if scene.labels && kinks.contains(&u) {
                    let _ = writeln!(
                        out,
                        r#"  <text class="label" x="{}" y="{}">{name}<tspan baseline-shift="sub">{i}</tspan></text>"#,
                        d(&(&px + &pad / int(2))),
                        d(&(&py - &pad / int(2)))
                    );
                }
            }
        }
    }
    out.push_str("</svg>\n");
    Ok(out)
}
