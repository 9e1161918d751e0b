//! Plausible leader actions by class of commitment structure.
//!
//! - simply plausible: `U(x)` is at least the payoff of some Cournot action
//!   on the side `phi(x)` points to;
//! - I-plausible: the lower contour set of `x` holds `x' <= x''` with
//!   `phi(x') <= x'` and `phi(x'') >= x''`;
//! - P-plausible (under RC1-RC3): the upper level set of
//!   `min over S of U(gamma(x))`.

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::equilibria::{contour_set, equilibria, Direction, EquilibriumReport};
use crate::error::{Error, Result};
use crate::game::GameSpec;
use crate::interval::IntervalUnion;
use crate::optimize::{golden_min, linspace};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Serialize for Sign {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RcReport {
    /// Unique Cournot action, interior, with an interior follower response.
    pub rc1: bool,
    /// `u2 v2 > 0` at every probe.
    pub rc2: bool,
    /// `u12 v12 > 0` at every probe.
    pub rc3: bool,
    /// Constant sign of `u2 u12`, when RC2 and RC3 hold.
    pub sign_u2_u12: Option<Sign>,
    pub x_cournot: Option<f64>,
    pub y_cournot: Option<f64>,
}

impl RcReport {
    pub fn holds(&self) -> bool {
        self.rc1 && self.rc2 && self.rc3 && self.sign_u2_u12.is_some()
    }
}

/// Result of the P-plausible computation.
#[derive(Clone, Debug, Serialize)]
pub struct PPlausible {
    pub set: IntervalUnion,
    pub s_set: IntervalUnion,
    pub underline_u: f64,
    /// Minimizer of `U(gamma(x))` over `S`.
    pub x_hat: f64,
    pub gamma_hat: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct LowerBoundDiagnostics {
    pub u_quasi_concave: bool,
    pub u_quasi_convex: bool,
    /// `R_L'(y^C) R_F'(x^C)` by central differences, under RC.
    pub slope_product: Option<f64>,
    pub slope_predicate: Option<bool>,
    /// `underline_u < U(x^C)` observed.
    pub below_cournot: Option<bool>,
    pub underline_u: Option<f64>,
    pub u_cournot: Option<f64>,
    /// False when the slope predicate holds but the observation does not.
    pub consistent: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct PlausibilityReport {
    pub simple: IntervalUnion,
    pub i_plausible: IntervalUnion,
    pub p_plausible: Option<IntervalUnion>,
    /// Quasi-simply plausible and plausible actions; equal to the P set under RC.
    pub plausible: Option<IntervalUnion>,
    pub underline_u: Option<f64>,
    pub s_set: Option<IntervalUnion>,
    pub rc: RcReport,
    pub i_threshold: f64,
    pub caveats: Vec<String>,
}

/// A game together with its equilibria and the hint points used for every
/// set computation.
#[derive(Clone, Debug)]
pub struct Analysis {
    pub spec: GameSpec,
    pub eq: EquilibriumReport,
    pub hints: Vec<f64>,
}

const RC_PROBES: usize = 41;
const S_GRID: usize = 1001;

impl Analysis {
    pub fn new(spec: &GameSpec) -> Result<Self> {
        Self::with_hints(spec, &[])
    }

    /// `extra` points are kept exact in every sampled set, e.g. family
    /// landmarks.
    pub fn with_hints(spec: &GameSpec, extra: &[f64]) -> Result<Self> {
        let eq = equilibria(spec)?;
        let s = spec.leader_space;
        let mut hints = vec![s.lo, s.hi];
        hints.extend(&eq.cournot_points);
        for p in eq.stackelberg.pieces() {
            hints.extend([p.lo, p.hi]);
        }
        hints.extend(extra.iter().copied().filter(|x| s.contains(*x)));
        hints.sort_by(f64::total_cmp);
        hints.dedup();
        Ok(Self { spec: spec.clone(), eq, hints })
    }

    pub fn u(&self, x: f64) -> f64 {
        self.spec.leader_value(x)
    }

    /// `|phi(x) - x|` below this counts as a fixed point.
    pub(crate) fn fixed_band(&self) -> f64 {
        self.spec.tol.x_tol
    }

    pub fn contour(&self, level: f64, dir: Direction) -> IntervalUnion {
        contour_set(&self.spec, level, dir, &self.hints)
    }

    pub(crate) fn set_of(&self, pred: impl Fn(f64) -> bool + Sync, hints: &[f64]) -> IntervalUnion {
        let t = self.spec.tol;
        IntervalUnion::from_predicate(pred, self.spec.leader_space, t.grid_n, hints, t.x_tol)
    }

    /// Lowest `U` over the part of a Cournot piece on one side of `x`.
    fn cournot_min_on_side(&self, x: f64, upward: bool) -> Option<f64> {
        self.eq
            .cournot
            .pieces()
            .iter()
            .filter_map(|p| {
                let (a, b) = if upward { (p.lo.max(x), p.hi) } else { (p.lo, p.hi.min(x)) };
                if a > b {
                    return None;
                }
                if a == b {
                    return Some(self.u(a));
                }
                let xs = linspace(a, b, 101);
                let (i, _) = xs
                    .iter()
                    .enumerate()
                    .map(|(i, &t)| (i, self.u(t)))
                    .min_by(|p, q| p.1.total_cmp(&q.1))?;
                let (l, r) = (xs[i.saturating_sub(1)], xs[(i + 1).min(100)]);
                Some(golden_min(|t| self.u(t), l, r, 1e-12).1)
            })
            .reduce(f64::min)
    }

    /// Membership test of the simple-CST characterization.
    pub fn is_simply_plausible(&self, x: f64) -> bool {
        let g = self.spec.phi(x) - x;
        if g.abs() <= self.fixed_band() {
            return true;
        }
        match self.cournot_min_on_side(x, g > 0.0) {
            Some(m) => m <= self.u(x) + self.spec.tol.f_tol,
            None => false,
        }
    }

    pub fn simply_plausible_set(&self) -> IntervalUnion {
        self.set_of(|x| self.is_simply_plausible(x), &self.hints)
    }

    pub(crate) fn in_a(&self, x: f64) -> bool {
        self.spec.phi(x) - x <= self.fixed_band()
    }

    pub(crate) fn in_b(&self, x: f64) -> bool {
        self.spec.phi(x) - x >= -self.fixed_band()
    }

    /// Local minima of `U` refined by golden section, plus the space ends.
    fn u_local_minima(&self) -> Vec<f64> {
        let s = self.spec.leader_space;
        let xs = linspace(s.lo, s.hi, self.spec.tol.grid_n);
        let us: Vec<f64> = xs.par_iter().map(|&x| self.u(x)).collect();
        let n = xs.len();
        let mut out = vec![s.lo, s.hi];
        for i in 1..n - 1 {
            if us[i] <= us[i - 1] && us[i] <= us[i + 1] {
                out.push(golden_min(|t| self.u(t), xs[i - 1], xs[i + 1], 1e-13).0);
            }
        }
        out
    }

    /// The level `L*` with I-plausible set `{x : U(x) >= L*}`: the smallest
    /// value of `max(U(x'), U(x''))` over pairs `x' <= x''` with
    /// `phi(x') <= x'` and `phi(x'') >= x''`.
    pub fn i_threshold(&self) -> f64 {
        let a = self.set_of(|x| self.in_a(x), &self.hints);
        let b = self.set_of(|x| self.in_b(x), &self.hints);
        let mut cand = self.u_local_minima();
        cand.extend(&self.hints);
        for p in a.pieces().iter().chain(b.pieces()) {
            cand.extend([p.lo, p.hi]);
        }
        cand.sort_by(f64::total_cmp);
        cand.dedup();
        let info: Vec<(f64, f64, bool, bool)> =
            cand.par_iter().map(|&x| (x, self.u(x), self.in_a(x), self.in_b(x))).collect();
        // suffix minimum of U over B-candidates
        let mut suffix = vec![f64::INFINITY; info.len() + 1];
        for k in (0..info.len()).rev() {
            suffix[k] = if info[k].3 { suffix[k + 1].min(info[k].1) } else { suffix[k + 1] };
        }
        info.iter()
            .enumerate()
            .filter(|(_, c)| c.2)
            .map(|(k, c)| c.1.max(suffix[k]))
            .fold(f64::INFINITY, f64::min)
    }

    pub fn i_plausible_set(&self) -> IntervalUnion {
        self.contour(self.i_threshold(), Direction::Ge)
    }

    /// Direct reading of the I characterization for one action, without the
    /// threshold shortcut. Used to cross-check `i_plausible_set`.
    pub fn is_i_plausible_direct(&self, x: f64) -> bool {
        let lc = self.contour(self.u(x), Direction::Le);
        let a = self.set_of(|t| self.in_a(t), &self.hints).intersect(&lc);
        let b = self.set_of(|t| self.in_b(t), &self.hints).intersect(&lc);
        match (a.min(), b.max()) {
            (Ok(lo), Ok(hi)) => lo <= hi + self.spec.tol.x_tol,
            _ => false,
        }
    }

    pub fn check_rc(&self) -> RcReport {
        let spec = &self.spec;
        let (ls, fs) = (spec.leader_space, spec.follower_space);
        let pts = self.eq.cournot.pieces();
        let margin = 10.0 * spec.tol.x_tol;
        let (mut rc1, mut xc, mut yc) = (false, None, None);
        if pts.len() == 1 && pts[0].is_point() {
            let x = pts[0].lo;
            let y = spec.best_response_follower(x);
            xc = Some(x);
            yc = Some(y);
            rc1 = ls.lo + margin < x && x < ls.hi - margin && fs.lo + margin < y && y < fs.hi - margin;
        }
        let probe = |s: &crate::game::ActionSpace, i: usize| s.lo + s.width() * i as f64 / (RC_PROBES + 1) as f64;
        let samples: Vec<_> = (1..=RC_PROBES)
            .flat_map(|i| (1..=RC_PROBES).map(move |j| (i, j)))
            .map(|(i, j)| spec.partials(probe(&ls, i), probe(&fs, j)))
            .collect();
        let rc2 = samples.iter().all(|p| p.u2 * p.v2 > 0.0);
        let rc3 = samples.iter().all(|p| p.u12 * p.v12 > 0.0);
        let sign = if rc2 && rc3 {
            if samples.iter().all(|p| p.u2 * p.u12 > 0.0) {
                Some(Sign::Plus)
            } else if samples.iter().all(|p| p.u2 * p.u12 < 0.0) {
                Some(Sign::Minus)
            } else {
                None
            }
        } else {
            None
        };
        RcReport { rc1, rc2, rc3, sign_u2_u12: sign, x_cournot: xc, y_cournot: yc }
    }

    pub fn p_plausible(&self) -> Result<PPlausible> {
        let rc = self.check_rc();
        if !rc.holds() {
            return Err(Error::RcViolated(format!(
                "rc1={} rc2={} rc3={} sign={:?}",
                rc.rc1, rc.rc2, rc.rc3, rc.sign_u2_u12
            )));
        }
        let xc = rc.x_cournot.ok_or_else(|| Error::Internal("missing Cournot action".into()))?;
        let tol = self.spec.tol.x_tol;
        let gamma = |x: f64| self.spec.gamma(x, xc);
        let s_set = match rc.sign_u2_u12 {
            Some(Sign::Plus) => self.set_of(
                |x| {
                    let g = gamma(x);
                    x <= xc + tol && g >= x - tol && g <= xc + tol
                },
                &self.hints,
            ),
            _ => self.set_of(
                |x| {
                    let g = gamma(x);
                    x >= xc - tol && g <= x + tol && g >= xc - tol
                },
                &self.hints,
            ),
        };
        let ug = |x: f64| self.u(gamma(x));
        let mut best = (xc, ug(xc));
        for p in s_set.pieces() {
            let xs = if p.is_point() { vec![p.lo] } else { linspace(p.lo, p.hi, S_GRID) };
            let vals: Vec<f64> = xs.par_iter().map(|&x| ug(x)).collect();
            let (i, v) = vals
                .iter()
                .copied()
                .enumerate()
                .min_by(|a, b| a.1.total_cmp(&b.1))
                .unwrap_or((0, f64::INFINITY));
            let mut cand = (xs[i], v);
            if xs.len() > 1 {
                let (l, r) = (xs[i.saturating_sub(1)], xs[(i + 1).min(xs.len() - 1)]);
                let polished = golden_min(ug, l, r, 1e-13);
                if polished.1 < cand.1 {
                    cand = polished;
                }
            }
            if cand.1 < best.1 {
                best = cand;
            }
        }
        let (x_hat, underline_u) = best;
        let gamma_hat = gamma(x_hat);
        let mut hints = self.hints.clone();
        hints.push(gamma_hat);
        let set = contour_set(&self.spec, underline_u, Direction::Ge, &hints);
        Ok(PPlausible { set, s_set, underline_u, x_hat, gamma_hat })
    }

    pub fn lower_bound_diagnostics(&self) -> LowerBoundDiagnostics {
        let s = self.spec.leader_space;
        let xs = linspace(s.lo, s.hi, self.spec.tol.grid_n);
        let us: Vec<f64> = xs.par_iter().map(|&x| self.u(x)).collect();
        let band = self.spec.tol.f_tol.max(1e-12);
        let (qc, qv) = (quasi_concave(&us, band), quasi_convex(&us, band));
        let mut out = LowerBoundDiagnostics {
            u_quasi_concave: qc,
            u_quasi_convex: qv,
            slope_product: None,
            slope_predicate: None,
            below_cournot: None,
            underline_u: None,
            u_cournot: None,
            consistent: true,
        };
        let rc = self.check_rc();
        if let (true, Some(xc), Some(yc)) = (rc.holds(), rc.x_cournot, rc.y_cournot) {
            let h = self.spec.tol.fd_step;
            let rf = (self.spec.best_response_follower(xc + h) - self.spec.best_response_follower(xc - h)) / (2.0 * h);
            let rl = (self.spec.best_response_leader(yc + h) - self.spec.best_response_leader(yc - h)) / (2.0 * h);
            let prod = rf * rl;
            if let Ok(p) = self.p_plausible() {
                let uc = self.u(xc);
                let below = p.underline_u < uc - self.spec.tol.f_tol;
                out.underline_u = Some(p.underline_u);
                out.u_cournot = Some(uc);
                out.below_cournot = Some(below);
                out.consistent = !(prod > 0.5 && !below);
            }
            out.slope_product = Some(prod);
            out.slope_predicate = Some(prod > 0.5);
        }
        out
    }

    pub fn report(&self) -> PlausibilityReport {
        let rc = self.check_rc();
        let p = self.p_plausible().ok();
        let mut caveats = vec!["numeric set endpoints are reported as closed".to_string()];
        if p.is_none() {
            caveats.push("RC1-RC3 fail: P-plausible and plausible sets are not characterized".into());
        }
        PlausibilityReport {
            simple: self.simply_plausible_set(),
            i_plausible: self.i_plausible_set(),
            p_plausible: p.as_ref().map(|p| p.set.clone()),
            plausible: p.as_ref().map(|p| p.set.clone()),
            underline_u: p.as_ref().map(|p| p.underline_u),
            s_set: p.as_ref().map(|p| p.s_set.clone()),
            rc,
            i_threshold: self.i_threshold(),
            caveats,
        }
    }
}

/// No value sits below both an earlier and a later value by more than `band`.
pub fn quasi_concave(us: &[f64], band: f64) -> bool {
    let n = us.len();
    let mut suffix = vec![f64::NEG_INFINITY; n + 1];
    for k in (0..n).rev() {
        suffix[k] = suffix[k + 1].max(us[k]);
    }
    let mut prefix = f64::NEG_INFINITY;
    for k in 0..n {
        if us[k] < prefix.min(suffix[k + 1]) - band {
            return false;
        }
        prefix = prefix.max(us[k]);
    }
    true
}

/// No value sits above both an earlier and a later value by more than `band`.
pub fn quasi_convex(us: &[f64], band: f64) -> bool {
    let neg: Vec<f64> = us.iter().map(|u| -u).collect();
    quasi_concave(&neg, band)
}

pub fn simply_plausible_set(spec: &GameSpec) -> Result<IntervalUnion> {
    Ok(Analysis::new(spec)?.simply_plausible_set())
}

pub fn i_plausible_set(spec: &GameSpec) -> Result<IntervalUnion> {
    Ok(Analysis::new(spec)?.i_plausible_set())
}

pub fn p_plausible_set(spec: &GameSpec) -> Result<PPlausible> {
    Analysis::new(spec)?.p_plausible()
}

pub fn check_rc(spec: &GameSpec) -> Result<RcReport> {
    Ok(Analysis::new(spec)?.check_rc())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{CoordinationParams, DuopolyParams};

    fn duo(r: f64, d: f64) -> Analysis {
        Analysis::new(&DuopolyParams::new(r, d).unwrap().spec().unwrap()).unwrap()
    }

    #[test]
    fn quasi_shape_checks() {
        assert!(quasi_concave(&[0.0, 1.0, 2.0, 1.0], 0.0));
        assert!(!quasi_concave(&[1.0, 0.0, 1.0], 0.0));
        assert!(quasi_convex(&[1.0, 0.0, 1.0], 0.0));
        assert!(!quasi_convex(&[0.0, 1.0, 0.0], 0.0));
    }

    #[test]
    fn rc_verdicts() {
        let rc = duo(0.8, 0.0).check_rc();
        assert!(rc.holds());
        assert_eq!(rc.sign_u2_u12, Some(Sign::Plus));
        assert!(!duo(1.2, 0.0).check_rc().rc1);
        let c = Analysis::new(&CoordinationParams::new(0.0).unwrap().spec().unwrap()).unwrap();
        assert!(!c.check_rc().rc1);
    }

    #[test]
    fn p_set_requires_rc() {
        assert!(matches!(duo(1.2, 0.0).p_plausible(), Err(Error::RcViolated(_))));
    }

    #[test]
    fn simple_set_of_low_returns_duopoly() {
        let a = duo(0.8, 0.0);
        let s = a.simply_plausible_set();
        assert_eq!(s.pieces().len(), 1);
        assert!((s.min().unwrap() - 5.0 / 11.0).abs() < 1e-9);
        // U(x) = x - 0.6 x^2 beyond the exit point, equal to U(5/11)
        let uc = a.u(5.0 / 11.0);
        let top = (1.0 + (1.0 - 2.4 * uc).sqrt()) / 1.2;
        assert!((s.max().unwrap() - top).abs() < 1e-8);
    }
}
