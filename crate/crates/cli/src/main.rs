//! `pldyn` command-line tool.
//!
//! Maps are given either as a path to a file in the text format
//! (`0,0; 1/2,1; 1,0`) or as that text inline. Reports are JSON on stdout
//! unless `--out` names a file. Exit codes: 0 success or a positive check,
//! 1 a negative check (e.g. the maps do not commute), 2 usage or input
//! errors, with a JSON error object on stderr.

use std::fmt::Display;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use pldyn::commute::{self, chain_rule_check, is_iterate, method_by_name, CommuteReport, SlopeRelation};
use pldyn::conjugacy::{find_tent_conjugacy, tent_necessary_conditions, verify_conjugacy};
use pldyn::families::{complete_from_left, family_by_id, increasing_leg, IncreasingLeg, SlopeCheck};
use pldyn::lattice::{
    abcd_points, determinating_lattice, is_fig10_pattern, kink_pairs, sat, AbcdPoints, KinkPairSets, Lattice,
    LineCounts,
};
use pldyn::rational::{fmt_rational, parse_rational};
use pldyn::render::{render_quadrant_svg, QuadrantScene};
use pldyn::{parse_plmap, PLMap, Rational};
use serde::Serialize;

#[derive(Parser)]
#[command(name = "pldyn", version, about = "Exact tools for piecewise-linear interval maps")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a map at one or more points.
    Eval {
        #[arg(long)]
        g: String,
        #[arg(long, required = true, value_parser = rational_arg)]
        x: Vec<Rational>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compose two maps: writes g∘ψ.
    Compose {
        #[arg(long)]
        g: String,
        #[arg(long)]
        psi: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The sawtooth map with t monotone pieces commuting with the tent map.
    Xi {
        #[arg(long)]
        t: i64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decide whether g and ψ commute.
    Commute {
        #[arg(long)]
        g: String,
        #[arg(long)]
        psi: String,
        #[arg(long, value_enum, default_value_t = Method::Exact)]
        method: Method,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Determinating lattice of a commuting pair, with its A/B/C/D points and
    /// coincident-kink index sets.
    Lattice {
        #[arg(long)]
        g: String,
        #[arg(long)]
        psi: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Coincident-kink index sets P and Q only.
    Pairs {
        #[arg(long)]
        g: String,
        #[arg(long)]
        psi: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// PL conjugacies to the tent map.
    Conjugacy {
        #[command(subcommand)]
        action: ConjugacyAction,
    },
    /// Build a member of a parametrized family of commuting pairs.
    Family {
        #[arg(long)]
        id: String,
        #[arg(long, value_parser = rational_arg)]
        a: Rational,
        #[arg(long, value_parser = rational_arg)]
        b: Option<Rational>,
        #[arg(long, default_value_t = 3)]
        t: i64,
        #[arg(long)]
        out_g: Option<PathBuf>,
        #[arg(long)]
        out_psi: Option<PathBuf>,
        #[arg(long)]
        out_h: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Rebuild a tent-conjugate unimodal map from its increasing leg.
    CompleteLeft {
        /// Points `x,y; ...` of the increasing leg, from (0,0) to the turning
        /// point at height 1.
        #[arg(long)]
        gl: String,
        #[arg(long)]
        out_g: Option<PathBuf>,
        #[arg(long)]
        out_h: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Four-quadrant SVG diagram: x left, ψ up, y right, g down.
    Render {
        #[arg(long)]
        g: String,
        #[arg(long)]
        psi: String,
        /// Label kinks of the graphs as A_i, B_i, C_i, D_i.
        #[arg(long)]
        labels: bool,
        /// Draw only the graphs, without the lattice.
        #[arg(long)]
        bare: bool,
        /// Highlight the SAT through this point (repeatable).
        #[arg(long, value_parser = rational_arg)]
        x: Vec<Rational>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum ConjugacyAction {
    /// Search for h with h∘tent = g∘h.
    Find {
        #[arg(long)]
        g: String,
        /// Write h in the text format here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check h∘f = g∘h exactly; f defaults to the tent map.
    Verify {
        #[arg(long)]
        f: Option<String>,
        #[arg(long)]
        g: String,
        #[arg(long)]
        h: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Necessary conditions for g to be conjugate to the tent map.
    Check {
        #[arg(long)]
        g: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Exact,
    Sat,
    Both,
}

#[derive(Debug)]
struct CliError {
    kind: &'static str,
    message: String,
}

#[derive(Serialize)]
struct ErrorReport<'a> {
    error: &'a str,
    message: &'a str,
}

fn fail(kind: &'static str, e: impl Display) -> CliError {
    CliError { kind, message: e.to_string() }
}

type CliResult = Result<ExitCode, CliError>;

fn rational_arg(s: &str) -> Result<Rational, String> {
    parse_rational(s).ok_or_else(|| format!("not a rational: {s:?}"))
}

/// Reads a map from a file, or parses the argument itself when no such file
/// exists.
fn load_map(arg: &str) -> Result<PLMap, CliError> {
    let path = Path::new(arg);
    if path.is_file() {
        let text = fs::read_to_string(path).map_err(|e| fail("io", format!("{arg}: {e}")))?;
        parse_plmap(&text).map_err(|e| fail("parse", format!("{arg}: {e}")))
    } else {
        parse_plmap(arg).map_err(|e| fail("parse", format!("{arg}: no such file, and not a map ({e})")))
    }
}

fn load_text(arg: &str) -> Result<String, CliError> {
    let path = Path::new(arg);
    if path.is_file() {
        fs::read_to_string(path).map_err(|e| fail("io", format!("{arg}: {e}")))
    } else {
        Ok(arg.to_string())
    }
}

fn write_text(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    let mut text = text.to_string();
    if !text.ends_with('\n') {
        text.push('\n');
    }
    match out {
        Some(p) => fs::write(p, text).map_err(|e| fail("io", format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn write_json<T: Serialize>(out: Option<&Path>, value: &T) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value).map_err(|e| fail("internal", e))?;
    write_text(out, &text)
}

fn verdict(ok: bool) -> ExitCode {
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

#[derive(Serialize)]
struct EvalPoint {
    x: String,
    y: String,
}

#[derive(Serialize)]
struct CommuteOutput {
    commutes: bool,
    reports: Vec<CommuteReport>,
    /// Slope identity `g'(ψ(x))·ψ'(x) = ψ'(g(x))·g'(x)` on each piece.
    chain_rule: Vec<SlopeRelation>,
}

#[derive(Serialize)]
struct LatticeOutput<'a> {
    seeds: Vec<String>,
    #[serde(flatten)]
    lattice: &'a Lattice,
    predicted_counts: Option<LineCounts>,
    psi_is_iterate_of_g: Option<u32>,
    points: AbcdPoints,
    pairs: KinkPairSets,
    fig10_pattern: bool,
}

#[derive(Serialize)]
struct PairsOutput {
    #[serde(flatten)]
    pairs: KinkPairSets,
    fig10_pattern: bool,
}

#[derive(Serialize)]
struct FindOutput {
    found: bool,
    h: Option<PLMap>,
}

#[derive(Serialize)]
struct FamilyOutput {
    #[serde(flatten)]
    instance: pldyn::families::FamilyInstance,
    slope_checks: Vec<SlopeCheck>,
}

fn run_commute(g: &PLMap, psi: &PLMap, method: Method) -> Result<CommuteOutput, CliError> {
    let names: &[&str] = match method {
        Method::Exact => &["exact"],
        Method::Sat => &["sat"],
        Method::Both => &["exact", "sat"],
    };
    let mut reports = Vec::new();
    for name in names {
        let m = method_by_name(name).map_err(|e| fail("usage", e))?;
        reports.push(m.decide(g, psi).map_err(|e| fail("precondition", e))?);
    }
    Ok(CommuteOutput { commutes: reports.iter().all(|r| r.commutes), reports, chain_rule: chain_rule_check(g, psi) })
}

fn lattice_of(g: &PLMap, psi: &PLMap) -> Result<Lattice, CliError> {
    determinating_lattice(g, psi).map_err(|e| fail("lattice", e))
}

fn run(cli: Cli) -> CliResult {
    match cli.command {
        Command::Eval { g, x, out } => {
            let g = load_map(&g)?;
            let mut points = Vec::new();
            for x in x {
                let y = g.eval(&x).map_err(|e| fail("domain", e))?;
                points.push(EvalPoint { x: fmt_rational(&x), y: fmt_rational(&y) });
            }
            write_json(out.as_deref(), &points)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Compose { g, psi, out } => {
            let c = PLMap::compose(&load_map(&g)?, &load_map(&psi)?);
            write_text(out.as_deref(), &c.to_string())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Xi { t, out } => {
            let m = commute::xi(t).map_err(|e| fail("usage", e))?;
            write_text(out.as_deref(), &m.to_string())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Commute { g, psi, method, out } => {
            let report = run_commute(&load_map(&g)?, &load_map(&psi)?, method)?;
            write_json(out.as_deref(), &report)?;
            Ok(verdict(report.commutes))
        }
        Command::Lattice { g, psi, out } => {
            let (g, psi) = (load_map(&g)?, load_map(&psi)?);
            let lat = lattice_of(&g, &psi)?;
            let points = abcd_points(&g, &psi, &lat).map_err(|e| fail("lattice", e))?;
            let pairs = kink_pairs(&g, &psi, &lat).map_err(|e| fail("lattice", e))?;
            let iterate = is_iterate(&psi, &g);
            let report = LatticeOutput {
                seeds: lat.seeds().iter().map(fmt_rational).collect(),
                lattice: &lat,
                predicted_counts: iterate.is_none().then(|| LineCounts::predicted(lat.n, lat.s)),
                psi_is_iterate_of_g: iterate,
                points,
                fig10_pattern: is_fig10_pattern(&pairs),
                pairs,
            };
            write_json(out.as_deref(), &report)?;
            Ok(verdict(lat.counts_match != Some(false)))
        }
        Command::Pairs { g, psi, out } => {
            let (g, psi) = (load_map(&g)?, load_map(&psi)?);
            let lat = lattice_of(&g, &psi)?;
            let pairs = kink_pairs(&g, &psi, &lat).map_err(|e| fail("lattice", e))?;
            write_json(out.as_deref(), &PairsOutput { fig10_pattern: is_fig10_pattern(&pairs), pairs })?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Conjugacy { action } => run_conjugacy(action),
        Command::Family { id, a, b, t, out_g, out_psi, out_h, out } => {
            let fam = family_by_id(&id).map_err(|e| fail("usage", e))?;
            let params: Vec<Rational> = std::iter::once(a).chain(b).collect();
            let inst = fam.build(&params, t).map_err(|e| fail("family", e))?;
            if let Some(p) = &out_g {
                write_text(Some(p), &inst.g.to_string())?;
            }
            if let Some(p) = &out_psi {
                write_text(Some(p), &inst.psi.to_string())?;
            }
            if let (Some(p), Some(h)) = (&out_h, &inst.h) {
                write_text(Some(p), &h.to_string())?;
            }
            let slope_checks = fam.slope_checks(&params, &inst.g);
            let ok = slope_checks.iter().all(|c| c.holds);
            write_json(out.as_deref(), &FamilyOutput { instance: inst, slope_checks })?;
            Ok(verdict(ok))
        }
        Command::CompleteLeft { gl, out_g, out_h, out } => {
            let text = load_text(&gl)?;
            let leg = match IncreasingLeg::parse(&text) {
                Ok(leg) => leg,
                // A whole unimodal map is accepted too; its increasing leg is used.
                Err(e) => parse_plmap(&text).ok().and_then(|m| increasing_leg(&m)).ok_or_else(|| fail("parse", e))?,
            };
            let done = complete_from_left(&leg).map_err(|e| fail("family", e))?;
            if let Some(p) = &out_g {
                write_text(Some(p), &done.g.to_string())?;
            }
            if let Some(p) = &out_h {
                write_text(Some(p), &done.h.to_string())?;
            }
            write_json(out.as_deref(), &done)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Render { g, psi, labels, bare, x, out } => {
            let (g, psi) = (load_map(&g)?, load_map(&psi)?);
            let mut sats = Vec::new();
            for x in &x {
                sats.push(sat(&g, &psi, x).map_err(|e| fail("lattice", e))?);
            }
            let mut scene = QuadrantScene::new(g.clone(), psi.clone()).with_labels(labels).with_sats(sats);
            if !bare {
                scene = scene.with_lattice(lattice_of(&g, &psi)?);
            }
            let svg = render_quadrant_svg(&scene).map_err(|e| fail("lattice", e))?;
            write_text(out.as_deref(), &svg)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn run_conjugacy(action: ConjugacyAction) -> CliResult {
    match action {
        ConjugacyAction::Find { g, out } => {
            let g = load_map(&g)?;
            let h = find_tent_conjugacy(&g).map_err(|e| fail("conjugacy", e))?;
            if let (Some(p), Some(h)) = (&out, &h) {
                write_text(Some(p), &h.to_string())?;
            }
            let found = h.is_some();
            write_json(None, &FindOutput { found, h })?;
            Ok(verdict(found))
        }
        ConjugacyAction::Verify { f, g, h, out } => {
            let f = match f {
                Some(f) => load_map(&f)?,
                None => commute::tent(),
            };
            let report = verify_conjugacy(&f, &load_map(&g)?, &load_map(&h)?);
            write_json(out.as_deref(), &report)?;
            Ok(verdict(report.is_conjugacy))
        }
        ConjugacyAction::Check { g, out } => {
            let conditions = tent_necessary_conditions(&load_map(&g)?);
            write_json(out.as_deref(), &conditions)?;
            Ok(verdict(conditions.derivative_at_zero_check && conditions.right_leg_check))
        }
    }
}

fn report_error(kind: &str, message: &str) {
    let json = serde_json::to_string(&ErrorReport { error: kind, message }).unwrap_or_default();
    eprintln!("{json}");
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            report_error("usage", e.render().to_string().trim_end());
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            report_error(e.kind, &e.message);
            ExitCode::from(2)
        }
    }
}
