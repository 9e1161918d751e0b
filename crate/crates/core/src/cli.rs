//! The `commitment-limits` command line.
//!
//! Exit codes: 0 on success, 1 on errors, 2 when the P-plausible set was
//! skipped because RC1-RC3 fail or when the oracle disagrees with theory.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::cst::SymbolicCst;
use crate::design::{solve_cdp, CstClass, Objective, ObjectiveKind};
use crate::error::{Error, Result};
use crate::families::{CoordinationParams, DuopolyParams, Family, TabulatedGame};
use crate::game::GameSpec;
use crate::oracle::{FiniteCst, Oracle};
use crate::plausibility::Analysis;
use crate::plot::{render, Panel};
use crate::refinement::{is_finer, is_richer, is_worse, worse_refinement_check};
use crate::report::{self, header, sample_curves, to_json, unique_cournot, with_body};
use crate::validation::equivalence_campaign;

pub const THREADS_ENV: &str = "COMMITMENT_LIMITS_THREADS";

#[derive(Parser, Debug)]
#[command(name = "commitment-limits", version, about = "Plausible leader actions under partial commitment")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Equilibria, regularity conditions and plausible sets as JSON.
    Analyze {
        #[command(flatten)]
        game: GameArgs,
        /// Sampling density for set computations.
        #[arg(long, default_value_t = 2001)]
        grid_n: usize,
        /// Also write sampled curves x, U, phi, gamma as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// SVG plots of U, phi and gamma with the plausible sets shaded.
    Plot {
        #[command(flatten)]
        game: GameArgs,
        #[arg(long, default_value_t = 2001)]
        grid_n: usize,
        /// Output directory; receives u.svg, phi.svg and gamma.svg.
        #[arg(long, default_value = ".")]
        out: PathBuf,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Brute-force SPE on a grid: one structure with --cst, otherwise the
    /// equivalence campaign against the theorems.
    Oracle {
        #[command(flatten)]
        game: GameArgs,
        /// Leader grid points (landmarks are added on top).
        #[arg(long, default_value_t = 201)]
        grid_n: usize,
        #[arg(long)]
        cst: Option<String>,
        /// Largest number of cuts in the campaign's cutoff partitions.
        #[arg(long, default_value_t = 2)]
        max_cuts: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Best plausible action for an objective, with witness structures.
    Design {
        #[command(flatten)]
        game: GameArgs,
        #[arg(long, default_value = "leader")]
        objective: String,
        #[arg(long, value_enum, default_value_t = ClassArg::All)]
        class: ClassArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Does a worse simple refinement of a simple structure exist?
    RefineCheck {
        #[command(flatten)]
        game: GameArgs,
        /// The simple structure K.
        #[arg(long)]
        cst: String,
        /// A candidate refinement K' to compare with K on the oracle grid.
        #[arg(long)]
        refined: Option<String>,
        #[arg(long, default_value_t = 201)]
        grid_n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    Duopoly,
    Coordination,
    Tabulated,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum ClassArg {
    Simple,
    I,
    P,
    All,
}

impl From<ClassArg> for CstClass {
    fn from(c: ClassArg) -> Self {
        match c {
            ClassArg::Simple => CstClass::Simple,
            ClassArg::I => CstClass::I,
            ClassArg::P => CstClass::P,
            ClassArg::All => CstClass::All,
        }
    }
}

#[derive(Args, Debug, Clone)]
pub struct GameArgs {
    #[arg(long, value_enum)]
    pub family: FamilyArg,
    /// Duopoly cost ratio.
    #[arg(long)]
    pub r: Option<f64>,
    /// Duopoly differentiation.
    #[arg(long)]
    pub d: Option<f64>,
    /// Coordination asymmetry.
    #[arg(long)]
    pub a: Option<f64>,
    /// Payoff table for the tabulated family.
    #[arg(long)]
    pub file: Option<PathBuf>,
}

impl GameArgs {
    pub fn family(&self) -> Result<Family> {
        let need = |v: Option<f64>, name: &str| v.ok_or_else(|| Error::BadParams(format!("--{name} is required")));
        Ok(match self.family {
            FamilyArg::Duopoly => Family::Duopoly(DuopolyParams::new(need(self.r, "r")?, self.d.unwrap_or(0.0))?),
            FamilyArg::Coordination => Family::Coordination(CoordinationParams::new(self.a.unwrap_or(0.0))?),
            FamilyArg::Tabulated => {
                let path = self.file.as_ref().ok_or_else(|| Error::BadParams("--file is required".into()))?;
                Family::Tabulated(TabulatedGame::from_csv_path(path)?.into())
            }
        })
    }
}

/// What a command produced: the JSON document and the exit code.
pub struct Outcome {
    pub json: Value,
    pub code: i32,
}

fn spec_with_grid(family: &Family, grid_n: usize) -> Result<GameSpec> {
    let spec = family.spec()?;
    let tol = crate::game::Tolerances { grid_n, ..spec.tol };
    spec.with_tolerances(tol)
}

fn write_curves(an: &Analysis, path: &Path) -> Result<()> {
    let rows = sample_curves(&an.spec, unique_cournot(an), 401);
    report::write_curves_csv(&rows, fs::File::create(path)?)
}

pub fn analyze(game: &GameArgs, grid_n: usize, csv: Option<&Path>) -> Result<Outcome> {
    let family = game.family()?;
    let spec = spec_with_grid(&family, grid_n)?;
    let an = Analysis::with_hints(&spec, &family.landmarks())?;
    if let Some(p) = csv {
        write_curves(&an, p)?;
    }
    let json = report::analyze(&family, &an);
    let code = if json["diagnostics"]["p_omitted"] == Value::Bool(true) { 2 } else { 0 };
    Ok(Outcome { json, code })
}

pub fn plot(game: &GameArgs, grid_n: usize, dir: &Path, csv: Option<&Path>) -> Result<Outcome> {
    let family = game.family()?;
    let spec = spec_with_grid(&family, grid_n)?;
    let an = Analysis::with_hints(&spec, &family.landmarks())?;
    fs::create_dir_all(dir)?;
    let mut files = Vec::new();
    for panel in Panel::ALL {
        let path = dir.join(format!("{}.svg", panel.name()));
        fs::write(&path, render(&an, panel))?;
        files.push(path.display().to_string());
    }
    if let Some(p) = csv {
        write_curves(&an, p)?;
    }
    Ok(Outcome { json: with_body(header("plot", &family), json!({ "files": files })), code: 0 })
}

pub fn oracle(game: &GameArgs, grid_n: usize, cst: Option<&str>, max_cuts: usize) -> Result<Outcome> {
    let family = game.family()?;
    let spec = family.spec()?;
    let Some(literal) = cst else {
        let rep = equivalence_campaign(&family, grid_n, max_cuts)?;
        let code = if rep.discrepancies.is_empty() { 0 } else { 2 };
        let body = json!({ "mode": "campaign", "campaign": rep });
        return Ok(Outcome { json: with_body(header("oracle", &family), body), code });
    };
    let k = SymbolicCst::parse(literal, spec.leader_space)?;
    let mut hints = family.landmarks();
    hints.extend(k.endpoints());
    let o = Oracle::with_landmarks(&spec, grid_n, &hints)?;
    let fk = FiniteCst::from_symbolic(&k, o.grid())?;
    let spe = o.spe_outcomes(&fk);
    let preferred = o.spe_outcomes_leader_preferred(&fk);
    let body = json!({
        "mode": "cst",
        "cst": k.to_string(),
        "grid_n": o.grid().len(),
        "h": o.grid().h(),
        "spe": spe,
        "leader_actions": spe.leader_actions(),
        "leader_preferred": preferred,
        "leader_preferred_actions": preferred.leader_actions(),
    });
    Ok(Outcome { json: with_body(header("oracle", &family), body), code: 0 })
}

pub fn design(game: &GameArgs, objective: &str, class: CstClass) -> Result<Outcome> {
    let family = game.family()?;
    let kind: ObjectiveKind = objective.parse()?;
    let sol = solve_cdp(&family, &Objective::new(kind)?, class)?;
    let code = match &sol.closed_form {
        Some(c) if !c.agrees => 2,
        _ if sol.witnesses.iter().any(|w| !w.verified) => 2,
        _ => 0,
    };
    Ok(Outcome { json: with_body(header("design", &family), json!({ "solution": sol })), code })
}

pub fn refine_check(game: &GameArgs, cst: &str, refined: Option<&str>, grid_n: usize) -> Result<Outcome> {
    let family = game.family()?;
    let spec = family.spec()?;
    let an = Analysis::with_hints(&spec, &family.landmarks())?;
    let k = SymbolicCst::parse(cst, spec.leader_space)?;
    let check = worse_refinement_check(&an, &k)?;
    let mut body = json!({
        "cst": k.to_string(),
        "worse_refinement_exists": check.exists,
        "check": check,
    });
    if let Some(lit) = refined {
        let kp = SymbolicCst::parse(lit, spec.leader_space)?;
        let mut hints = family.landmarks();
        hints.extend(k.endpoints());
        hints.extend(kp.endpoints());
        let o = Oracle::with_landmarks(&spec, grid_n, &hints)?;
        let (fk, fkp) = (FiniteCst::from_symbolic(&k, o.grid())?, FiniteCst::from_symbolic(&kp, o.grid())?);
        body["refined"] = json!({
            "cst": kp.to_string(),
            "is_finer": is_finer(&kp, &k),
            "is_richer": is_richer(&kp, &k),
            "is_worse": is_worse(&o, &fkp, &fk)?,
            "spe_min_payoff": o.spe_outcomes(&fkp).min_payoff(),
            "grid_n": o.grid().len(),
        });
    }
    Ok(Outcome { json: with_body(header("refine-check", &family), body), code: 0 })
}

/// Caps the rayon pool from the environment; later calls are no-ops.
pub fn init_threads() {
    if let Some(n) = std::env::var(THREADS_ENV).ok().and_then(|v| v.trim().parse::<usize>().ok()).filter(|n| *n > 0) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

fn emit(json: &Value, out: Option<&Path>) -> Result<()> {
    let text = to_json(json)?;
    match out {
        Some(p) => fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn dispatch(cli: &Cli) -> Result<(Outcome, Option<PathBuf>)> {
    Ok(match &cli.command {
        Command::Analyze { game, grid_n, csv, out } => (analyze(game, *grid_n, csv.as_deref())?, out.clone()),
        Command::Plot { game, grid_n, out, csv } => (plot(game, *grid_n, out, csv.as_deref())?, None),
        Command::Oracle { game, grid_n, cst, max_cuts, out } => {
            (oracle(game, *grid_n, cst.as_deref(), *max_cuts)?, out.clone())
        }
        Command::Design { game, objective, class, out } => (design(game, objective, (*class).into())?, out.clone()),
        Command::RefineCheck { game, cst, refined, grid_n, out } => {
            (refine_check(game, cst, refined.as_deref(), *grid_n)?, out.clone())
        }
    })
}

/// Runs the parsed command and returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    init_threads();
    let result = dispatch(&cli).and_then(|(o, out)| emit(&o.json, out.as_deref()).map(|_| o.code));
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}
