//! Cournot and Stackelberg sets and contour sets of `U`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::GameSpec;
use crate::interval::{IntervalUnion, Piece};
use crate::optimize::{bisect_boundary, bisect_root, golden_max, linspace};

#[derive(Clone, Debug, Serialize)]
pub struct EquilibriumReport {
    pub cournot: IntervalUnion,
    pub stackelberg: IntervalUnion,
    /// Isolated Cournot actions, and both ends of any continuum piece.
    pub cournot_points: Vec<f64>,
    /// `U` at each entry of `cournot_points`.
    pub u_at_cournot: Vec<f64>,
    pub u_max: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    #[serde(rename = ">=")]
    Ge,
    #[serde(rename = ">")]
    Gt,
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = "<")]
    Lt,
}

impl Direction {
    /// Comparison with an `f_tol` band that keeps ties on the weak side.
    pub fn holds(self, value: f64, level: f64, f_tol: f64) -> bool {
        match self {
            Direction::Ge => value >= level - f_tol,
            Direction::Gt => value > level + f_tol,
            Direction::Le => value <= level + f_tol,
            Direction::Lt => value < level - f_tol,
        }
    }
}

/// All fixed points of `phi`.
///
/// Sign changes of `phi(x) - x` are bisected; runs of at least three grid
/// points with `|phi(x) - x| <= 100 x_tol` become continuum pieces.
pub fn cournot_set(spec: &GameSpec) -> Result<IntervalUnion> {
    let s = spec.leader_space;
    let tol = spec.tol;
    let g = |x: f64| spec.phi(x) - x;
    let xs = linspace(s.lo, s.hi, tol.grid_n);
    let gs: Vec<f64> = xs.par_iter().map(|&x| g(x)).collect();
    let band = 100.0 * tol.x_tol;
    let near: Vec<bool> = gs.iter().map(|v| v.abs() <= band).collect();
    let mut in_run = vec![false; xs.len()];
    let mut pieces = Vec::new();
    let mut i = 0;
    while i < xs.len() {
        if !near[i] {
            i += 1;
            continue;
        }
        let start = i;
        while i + 1 < xs.len() && near[i + 1] {
            i += 1;
        }
        if i - start + 1 >= 3 {
            let flat = |x: f64| g(x).abs() <= 10.0 * tol.x_tol;
            let lo = if start == 0 { xs[0] } else { bisect_boundary(flat, xs[start], xs[start - 1], tol.x_tol) };
            let hi = if i + 1 == xs.len() { xs[i] } else { bisect_boundary(flat, xs[i], xs[i + 1], tol.x_tol) };
            pieces.push(Piece::closed(lo, hi));
            in_run[start..=i].iter_mut().for_each(|b| *b = true);
        }
        i += 1;
    }
    for k in 0..xs.len() {
        if in_run[k] {
            continue;
        }
        if gs[k] == 0.0 {
            pieces.push(Piece::point(xs[k]));
        }
        if k + 1 < xs.len() && !in_run[k + 1] && gs[k] * gs[k + 1] < 0.0 {
            pieces.push(Piece::point(bisect_root(g, xs[k], xs[k + 1])));
        }
    }
    let set = IntervalUnion::from_pieces(s, pieces);
    if set.is_empty() {
        return Err(Error::Internal("no fixed point of phi found".into()));
    }
    Ok(set)
}

/// Global argmax set of `U` and the maximum value.
pub fn stackelberg_set(spec: &GameSpec, hints: &[f64]) -> (IntervalUnion, f64) {
    let s = spec.leader_space;
    let tol = spec.tol;
    // a hint a rounding error away from a grid point would pass for a plateau
    let kept: Vec<f64> = hints.iter().copied().filter(|h| s.contains(*h)).collect();
    let mut xs: Vec<f64> = linspace(s.lo, s.hi, tol.grid_n)
        .into_iter()
        .filter(|x| kept.iter().all(|h| (h - x).abs() > tol.x_tol))
        .collect();
    xs.extend(&kept);
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    let us: Vec<f64> = xs.par_iter().map(|&x| spec.leader_value(x)).collect();
    let n = xs.len();
    let mut peaks: Vec<(f64, f64)> = (0..n)
        .filter(|&i| (i == 0 || us[i] >= us[i - 1]) && (i + 1 == n || us[i] >= us[i + 1]))
        .map(|i| {
            let (a, b) = (xs[i.saturating_sub(1)], xs[(i + 1).min(n - 1)]);
            let (x, v) = golden_max(|t| spec.leader_value(t), a, b, 1e-13 * s.width().max(1.0));
            if v >= us[i] { (x, v) } else { (xs[i], us[i]) }
        })
        .collect();
    let u_max = peaks.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
    peaks.retain(|p| p.1 >= u_max - tol.f_tol);
    let mut pieces: Vec<Piece> = peaks
        .iter()
        .map(|&(x, _)| {
            let snapped = hints
                .iter()
                .copied()
                .filter(|h| (h - x).abs() <= 1e-6 && spec.leader_value(*h) >= u_max - tol.f_tol)
                .min_by(|a, b| (a - x).abs().total_cmp(&(b - x).abs()));
            Piece::point(snapped.unwrap_or(x))
        })
        .collect();
    // plateaus: two or more consecutive grid points at the maximum
    let top = |x: f64| spec.leader_value(x) >= u_max - tol.f_tol;
    let mut i = 0;
    while i < n {
        if us[i] < u_max - tol.f_tol {
            i += 1;
            continue;
        }
        let start = i;
        while i + 1 < n && us[i + 1] >= u_max - tol.f_tol {
            i += 1;
        }
        if i > start {
            let lo = if start == 0 { xs[0] } else { bisect_boundary(top, xs[start], xs[start - 1], tol.x_tol) };
            let hi = if i + 1 == n { xs[i] } else { bisect_boundary(top, xs[i], xs[i + 1], tol.x_tol) };
            pieces.push(Piece::closed(lo, hi));
        }
        i += 1;
    }
    (IntervalUnion::from_pieces(s, pieces), u_max)
}

/// `{x : U(x) <dir> level}`, ties resolved with `f_tol`.
pub fn contour_set(spec: &GameSpec, level: f64, dir: Direction, hints: &[f64]) -> IntervalUnion {
    let f_tol = spec.tol.f_tol;
    IntervalUnion::from_predicate(
        |x| dir.holds(spec.leader_value(x), level, f_tol),
        spec.leader_space,
        spec.tol.grid_n,
        hints,
        spec.tol.x_tol,
    )
}

/// Landmark actions of a Cournot set: isolated points and piece ends.
pub fn cournot_points(cournot: &IntervalUnion) -> Vec<f64> {
    let mut v: Vec<f64> = cournot
        .pieces()
        .iter()
        .flat_map(|p| if p.is_point() { vec![p.lo] } else { vec![p.lo, p.hi] })
        .collect();
    v.dedup();
    v
}

pub fn equilibria(spec: &GameSpec) -> Result<EquilibriumReport> {
    let cournot = cournot_set(spec)?;
    let points = cournot_points(&cournot);
    let s = spec.leader_space;
    let mut hints = points.clone();
    hints.extend([s.lo, s.hi]);
    let (stackelberg, u_max) = stackelberg_set(spec, &hints);
    let u_at_cournot = points.iter().map(|&x| spec.leader_value(x)).collect();
    Ok(EquilibriumReport { cournot, stackelberg, cournot_points: points, u_at_cournot, u_max })
}
