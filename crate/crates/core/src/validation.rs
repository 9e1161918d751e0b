//! Oracle-versus-theorem equivalence campaigns on a grid.

use serde::Serialize;

use crate::error::Result;
use crate::families::Family;
use crate::interval::IntervalUnion;
use crate::oracle::Oracle;
use crate::plausibility::Analysis;

#[derive(Clone, Debug, Serialize)]
pub struct GridPoint {
    pub x: f64,
    pub simple: bool,
    pub cutoff_certified: bool,
    pub i_plausible: bool,
    pub complement_certified: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Discrepancy {
    pub x: f64,
    pub kind: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct CampaignReport {
    pub grid_n: usize,
    pub h: f64,
    pub max_cuts: usize,
    pub simple: IntervalUnion,
    pub i_plausible: IntervalUnion,
    pub points: Vec<GridPoint>,
    pub discrepancies: Vec<Discrepancy>,
}

/// Compares the cutoff-partition certificates with the simply plausible set
/// and the interval-plus-complement certificates with the I-plausible set.
/// A point counts as a discrepancy only when it is more than one grid
/// spacing away from agreement.
pub fn equivalence_campaign(family: &Family, grid_n: usize, max_cuts: usize) -> Result<CampaignReport> {
    let spec = family.spec()?;
    let an = Analysis::with_hints(&spec, &family.landmarks())?;
    let simple = an.simply_plausible_set();
    let ip = an.i_plausible_set();
    let mut hints = family.landmarks();
    hints.extend(simple.pieces().iter().chain(ip.pieces()).flat_map(|p| [p.lo, p.hi]));
    let o = Oracle::with_landmarks(&spec, grid_n, &hints)?;
    let grid = o.grid();
    let h = grid.h();
    let slack = h * (1.0 + 1e-9);
    let cut = o.cutoff_certified(max_cuts);
    let ipc = o.complement_certified();
    let near = |flags: &[bool], x: f64| (0..grid.len()).any(|j| flags[j] && (grid.x(j) - x).abs() <= slack);
    let mut points = Vec::with_capacity(grid.len());
    let mut discrepancies = Vec::new();
    for i in 0..grid.len() {
        let x = grid.x(i);
        let p = GridPoint {
            x,
            simple: simple.contains_approx(x, spec.tol.merge_tol()),
            cutoff_certified: cut[i],
            i_plausible: ip.contains_approx(x, spec.tol.merge_tol()),
            complement_certified: ipc[i],
        };
        let mut flag = |kind: &str| discrepancies.push(Discrepancy { x, kind: kind.into() });
        if p.cutoff_certified && simple.distance(x) > slack {
            flag("cutoff certificate outside the simply plausible set");
        }
        if p.simple && !near(&cut, x) {
            flag("simply plausible action without a nearby cutoff certificate");
        }
        if p.complement_certified && ip.distance(x) > slack {
            flag("interval-plus-complement certificate outside the I-plausible set");
        }
        if p.i_plausible && !near(&ipc, x) {
            flag("I-plausible action without a nearby interval-plus-complement certificate");
        }
        points.push(p);
    }
    Ok(CampaignReport { grid_n: grid.len(), h, max_cuts, simple, i_plausible: ip, points, discrepancies })
}
