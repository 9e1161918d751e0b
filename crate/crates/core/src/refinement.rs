//! Orders on commitment structures (richer, finer, worse), plausibility
//! relative to an interval, and the test for a worse simple refinement.

use rayon::prelude::*;
use serde::Serialize;

use crate::cst::SymbolicCst;
use crate::error::{Error, Result};
use crate::interval::{IntervalUnion, Piece, MERGE_TOL};
use crate::optimize::{golden_max, golden_min, linspace};
use crate::oracle::{FiniteCst, Oracle};
use crate::plausibility::Analysis;

/// Singleton elements of `k` that are only implied by its fill.
fn filled_points(k: &SymbolicCst) -> Option<IntervalUnion> {
    k.singleton_fill.then(|| k.uncovered())
}

/// Does `k` have `e` as an element, counting filled singletons.
fn has_element(k: &SymbolicCst, e: &IntervalUnion) -> bool {
    k.elements.iter().any(|f| f.same_set(e, MERGE_TOL))
        || (e.pieces().len() == 1
            && e.pieces()[0].is_point()
            && filled_points(k).is_some_and(|u| u.contains(e.pieces()[0].lo)))
}

/// Every filled singleton of `k` is an element of `k_prime`.
fn fill_kept(k_prime: &SymbolicCst, k: &SymbolicCst) -> bool {
    let Some(need) = filled_points(k) else { return true };
    let space = k.space();
    let explicit = k_prime
        .elements
        .iter()
        .filter(|e| e.pieces().len() == 1 && e.pieces()[0].is_point())
        .fold(IntervalUnion::empty(space), |acc, e| acc.union(e));
    let have = match filled_points(k_prime) {
        Some(f) => explicit.union(&f),
        None => explicit,
    };
    need.is_subset(&have, MERGE_TOL)
}

/// `k_prime` contains every element of `k`.
pub fn is_richer(k_prime: &SymbolicCst, k: &SymbolicCst) -> bool {
    k.elements.iter().all(|e| has_element(k_prime, e)) && fill_kept(k_prime, k)
}

/// Every element of `k_prime` sits inside an element of `k`, and every
/// element of `k` is the union of the elements of `k_prime` it contains.
pub fn is_finer(k_prime: &SymbolicCst, k: &SymbolicCst) -> bool {
    let inside_some = |e: &IntervalUnion| {
        k.elements.iter().any(|f| e.is_subset(f, MERGE_TOL))
            || (e.pieces().len() == 1
                && e.pieces()[0].is_point()
                && filled_points(k).is_some_and(|u| u.contains(e.pieces()[0].lo)))
    };
    if !k_prime.elements.iter().all(inside_some) {
        return false;
    }
    let space = k.space();
    let rebuilt = |f: &IntervalUnion| {
        let mut acc = k_prime
            .elements
            .iter()
            .filter(|e| e.is_subset(f, MERGE_TOL))
            .fold(IntervalUnion::empty(space), |acc, e| acc.union(e));
        if let Some(fill) = filled_points(k_prime) {
            acc = acc.union(&fill.intersect(f));
        }
        acc
    };
    k.elements.iter().all(|f| rebuilt(f).same_set(f, MERGE_TOL)) && fill_kept(k_prime, k)
}

/// Some SPE of `G(k_prime)` pays the leader strictly less than every SPE of
/// `G(k)`.
pub fn is_worse(oracle: &Oracle, k_prime: &FiniteCst, k: &FiniteCst) -> Result<bool> {
    let base = oracle.spe_outcomes(k);
    let Some(floor) = base.min_payoff() else { return Err(Error::NoEquilibrium) };
    Ok(oracle.spe_outcomes(k_prime).min_payoff().is_some_and(|m| m < floor - oracle.tol()))
}

const PROBE_STEPS: [f64; 3] = [1e-6, 1e-7, 1e-8];

/// Whether `pred` holds on a sequence converging to the end `at` of `p`:
/// at the end itself when `p` contains it, otherwise at points approaching
/// it from inside.
fn accumulates(pred: impl Fn(f64) -> bool, p: &Piece, upper: bool) -> bool {
    let at = if upper { p.hi } else { p.lo };
    if p.contains(at) && pred(at) {
        return true;
    }
    let w = p.width();
    if w <= 0.0 {
        return false;
    }
    PROBE_STEPS.iter().all(|&s| {
        let x = if upper { at - s * w } else { at + s * w };
        p.contains(x) && pred(x)
    })
}

/// Lowest `U` over the Cournot actions in `p` on the side of `x` given by
/// `upward`.
fn cournot_min_in(an: &Analysis, p: &Piece, x: f64, upward: bool) -> Option<f64> {
    let space = an.spec.leader_space;
    let side = if upward { Piece::closed(x, space.hi) } else { Piece::closed(space.lo, x) };
    let window = IntervalUnion::from_pieces(space, vec![*p]).intersect(&IntervalUnion::from_pieces(space, vec![side]));
    let hits = an.eq.cournot.intersect(&window);
    hits.pieces()
        .iter()
        .filter_map(|q| {
            if q.is_point() {
                return Some(an.u(q.lo));
            }
            let xs = linspace(q.lo, q.hi, 41);
            xs.iter().filter(|t| q.contains(**t)).map(|&t| an.u(t)).reduce(f64::min)
        })
        .reduce(f64::min)
}

/// Membership test of the characterization of actions implementable by a
/// simple structure restricted to the interval `p`.
pub fn simply_plausible_wrt(an: &Analysis, x: f64, p: &Piece) -> bool {
    if !p.contains(x) {
        return false;
    }
    let g = an.spec.phi(x) - x;
    if g.abs() <= an.fixed_band() {
        return true;
    }
    let ux = an.u(x) + an.spec.tol.f_tol;
    let up = g > 0.0;
    if cournot_min_in(an, p, x, up).is_some_and(|m| m <= ux) {
        return true;
    }
    let sign = if up { 1.0 } else { -1.0 };
    accumulates(|t| an.u(t) <= ux && (an.spec.phi(t) - t) * sign > 0.0, p, up)
}

/// Membership test of the characterization of actions implementable by a
/// Property-I structure restricted to the interval `p`.
pub fn i_plausible_wrt(an: &Analysis, x: f64, p: &Piece) -> bool {
    if !p.contains(x) {
        return false;
    }
    if (an.spec.phi(x) - x).abs() <= an.fixed_band() {
        return true;
    }
    let ux = an.u(x) + an.spec.tol.f_tol;
    if accumulates(|t| an.u(t) <= ux && an.in_b(t), p, true) || accumulates(|t| an.u(t) <= ux && an.in_a(t), p, false)
    {
        return true;
    }
    let mut hints = an.hints.clone();
    hints.extend([p.lo, p.hi, x]);
    let a = an.set_of(|t| p.contains(t) && an.u(t) <= ux && an.in_a(t), &hints);
    let b = an.set_of(|t| p.contains(t) && an.u(t) <= ux && an.in_b(t), &hints);
    match (a.min(), b.max()) {
        (Ok(lo), Ok(hi)) => lo <= hi + an.spec.tol.x_tol,
        _ => false,
    }
}

/// Actions simply plausible relative to the interval `p`.
pub fn simply_plausible_wrt_set(an: &Analysis, p: &Piece) -> IntervalUnion {
    let space = an.spec.leader_space;
    if p.is_point() {
        return IntervalUnion::point(space, p.lo);
    }
    let mut hints = an.hints.clone();
    hints.extend([p.lo, p.hi]);
    an.set_of(|t| simply_plausible_wrt(an, t, p), &hints)
}

/// Extreme value of `U` over a set, sampled per piece and refined by golden
/// section.
fn extreme(an: &Analysis, set: &IntervalUnion, maximize: bool) -> Option<(f64, f64)> {
    let better = |a: f64, b: f64| if maximize { a > b } else { a < b };
    let mut best: Option<(f64, f64)> = None;
    for q in set.pieces() {
        let mut cands = vec![q.lo, q.hi];
        if !q.is_point() {
            let xs = linspace(q.lo, q.hi, 201);
            let us: Vec<f64> = xs.iter().map(|&t| an.u(t)).collect();
            let k = (0..xs.len()).reduce(|i, j| if better(us[j], us[i]) { j } else { i }).unwrap_or(0);
            let (l, r) = (xs[k.saturating_sub(1)], xs[(k + 1).min(xs.len() - 1)]);
            let f = |t: f64| an.u(t);
            cands.push(if maximize { golden_max(f, l, r, 1e-13).0 } else { golden_min(f, l, r, 1e-13).0 });
        }
        for x in cands {
            let v = an.u(x);
            if best.is_none_or(|b| better(v, b.1)) {
                best = Some((x, v));
            }
        }
    }
    best
}

#[derive(Clone, Debug, Serialize)]
pub struct ElementBound {
    pub element: String,
    /// For an interval: the least `U` over its relatively plausible actions.
    /// For the filled singletons: the largest `U` among them.
    pub payoff: f64,
    pub action: f64,
    /// The bound is reached by an action of the element rather than only
    /// approached at an open end.
    pub attained: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct RefinementCheck {
    pub exists: bool,
    /// Least leader payoff over the SPE of `G(K)`.
    pub spe_min_payoff: f64,
    /// Smallest level every element can be pushed down to.
    pub threshold: f64,
    pub attained: bool,
    pub elements: Vec<ElementBound>,
}

/// Continuation equilibria of an interval element: Cournot actions in it,
/// its top if the leader wants to go higher and its bottom if lower.
fn continuation(an: &Analysis, p: &Piece) -> Vec<f64> {
    let space = an.spec.leader_space;
    let band = an.fixed_band();
    if p.is_point() {
        return vec![p.lo];
    }
    let mut out: Vec<f64> = Vec::new();
    for q in an.eq.cournot.intersect(&IntervalUnion::from_pieces(space, vec![*p])).pieces() {
        if q.is_point() {
            out.push(q.lo);
        } else {
            out.extend(linspace(q.lo, q.hi, 41).into_iter().filter(|t| q.contains(*t)));
        }
    }
    if p.hi_closed && an.spec.phi(p.hi) >= p.hi - band {
        out.push(p.hi);
    }
    if p.lo_closed && an.spec.phi(p.lo) <= p.lo + band {
        out.push(p.lo);
    }
    out
}

fn bound_tol(an: &Analysis, level: f64) -> f64 {
    (1e3 * an.spec.tol.f_tol).max(1e-10 * level.abs())
}

/// The two-step test for a worse simple refinement of the simple structure
/// `k`, with its diagnostics.
pub fn worse_refinement_check(an: &Analysis, k: &SymbolicCst) -> Result<RefinementCheck> {
    if !k.is_simple() {
        return Err(Error::NotSimple(k.to_string()));
    }
    let pieces: Vec<Piece> = k.elements.iter().map(|e| e.pieces()[0]).collect();
    let fill = filled_points(k).filter(|f| !f.is_empty());
    let conts: Vec<Vec<f64>> = pieces.iter().map(|p| continuation(an, p)).collect();
    if conts.iter().any(Vec::is_empty) {
        return Err(Error::NoEquilibrium);
    }
    let floor_of = |bs: &Vec<f64>| bs.iter().map(|&b| an.u(b)).fold(f64::INFINITY, f64::min);
    let fill_top = fill.as_ref().and_then(|f| extreme(an, f, true));
    let level = conts
        .iter()
        .map(floor_of)
        .chain(fill_top.map(|t| t.1))
        .fold(f64::NEG_INFINITY, f64::max);
    let tol = bound_tol(an, level);
    let mut spe_min = conts.iter().flatten().map(|&b| an.u(b)).filter(|&v| v >= level - tol).fold(f64::INFINITY, f64::min);
    if let Some(f) = &fill {
        let xs = f.pieces().iter().flat_map(|q| linspace(q.lo, q.hi, 201).into_iter().filter(|t| q.contains(*t)));
        spe_min = xs.map(|t| an.u(t)).filter(|&v| v >= level - tol).fold(spe_min, f64::min);
    }
    let x_tol = an.spec.tol.x_tol;
    let mut elements: Vec<ElementBound> = pieces
        .par_iter()
        .zip(&k.elements)
        .map(|(p, e)| {
            let w = simply_plausible_wrt_set(an, p);
            let (action, payoff) = extreme(an, &w, false).unwrap_or((f64::NAN, f64::INFINITY));
            let open_end = (!p.lo_closed && (action - p.lo).abs() <= 1e3 * x_tol)
                || (!p.hi_closed && (action - p.hi).abs() <= 1e3 * x_tol);
            ElementBound { element: e.to_string(), payoff, action, attained: !open_end }
        })
        .collect();
    if let (Some(f), Some((action, payoff))) = (&fill, fill_top) {
        elements.push(ElementBound { element: format!("singletons on {f}"), payoff, action, attained: f.contains(action) });
    }
    let top = elements
        .iter()
        .max_by(|a, b| a.payoff.total_cmp(&b.payoff))
        .ok_or_else(|| Error::Internal("structure without elements".into()))?;
    let (threshold, attained) = (top.payoff, top.attained);
    Ok(RefinementCheck { exists: spe_min > threshold + tol, spe_min_payoff: spe_min, threshold, attained, elements })
}

/// `Some` with the threshold and per-element witnesses when a worse simple
/// refinement of `k` exists.
pub fn worse_refinement_exists(an: &Analysis, k: &SymbolicCst) -> Result<Option<RefinementCheck>> {
    worse_refinement_check(an, k).map(|c| c.exists.then_some(c))
}
