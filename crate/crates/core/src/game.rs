//! Leader-follower games and their primitive maps.
//!
//! A game is a pair of payoffs `u(x, y)` for the leader and `v(y, x)` for the
//! follower on compact intervals, each strictly concave in the player's own
//! action. Everything else in the crate is built from the maps below:
//!
//! - `R_F`, `R_L`: unique best responses,
//! - `phi = R_L . R_F`, whose fixed points are the Cournot actions,
//! - `U(x) = u(x, R_F(x))`,
//! - `eta(x~, x) = u(x~, R_F(x)) - u(x, R_F(x))`,
//! - `gamma(x)`: the other root of `eta(., x)`, with boundary fallbacks.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::optimize::{bisect_root, concave_argmax, golden_max, linspace};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ActionSpace {
    pub lo: f64,
    pub hi: f64,
}

impl ActionSpace {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::BadParams(format!("action space [{lo}, {hi}] is degenerate")));
        }
        Ok(Self { lo, hi })
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn clamp(&self, x: f64) -> f64 {
        x.clamp(self.lo, self.hi)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Action resolution for set boundaries.
    pub x_tol: f64,
    /// Payoff resolution for ties.
    pub f_tol: f64,
    /// Step for first-order finite differences.
    pub fd_step: f64,
    /// Sampling density for set computations.
    pub grid_n: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { x_tol: 1e-9, f_tol: 1e-13, fd_step: 1e-6, grid_n: 2001 }
    }
}

impl Tolerances {
    pub fn validate(&self) -> Result<()> {
        let ok = [self.x_tol, self.f_tol, self.fd_step].iter().all(|t| t.is_finite() && *t > 0.0);
        if !ok || self.grid_n < 3 {
            return Err(Error::BadParams(format!("invalid tolerances {self:?}")));
        }
        Ok(())
    }

    /// Gap below which adjacent pieces of a set are merged.
    pub fn merge_tol(&self) -> f64 {
        10.0 * self.x_tol
    }

    /// Step for second-order finite differences.
    pub fn fd2_step(&self) -> f64 {
        0.1 * self.fd_step.sqrt()
    }
}

/// Partial derivatives at a profile `(x, y)`: `u` is evaluated at `(x, y)`,
/// `v` at `(y, x)`, so `v1` is the follower's own-action derivative.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct Partials {
    pub u1: f64,
    pub u2: f64,
    pub u11: f64,
    pub u12: f64,
    pub v1: f64,
    pub v2: f64,
    pub v11: f64,
    pub v12: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Concavity {
    /// Smooth and strictly concave in own action.
    Strict,
    /// Concave but possibly piecewise linear (tabulated data).
    Weak,
}

/// Payoff functions of a game.
pub trait Payoffs: Send + Sync {
    /// Leader payoff `u(x, y)`.
    fn leader(&self, x: f64, y: f64) -> f64;
    /// Follower payoff `v(y, x)`.
    fn follower(&self, y: f64, x: f64) -> f64;
    fn partials(&self, _x: f64, _y: f64) -> Option<Partials> {
        None
    }
    fn concavity(&self) -> Concavity {
        Concavity::Strict
    }
}

type PayoffFn = dyn Fn(f64, f64) -> f64 + Send + Sync;

/// Adapter for payoffs given as closures.
pub struct FnPayoffs {
    u: Box<PayoffFn>,
    v: Box<PayoffFn>,
}

impl FnPayoffs {
    pub fn new(
        u: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
        v: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self { u: Box::new(u), v: Box::new(v) }
    }
}

impl Payoffs for FnPayoffs {
    fn leader(&self, x: f64, y: f64) -> f64 {
        (self.u)(x, y)
    }
    fn follower(&self, y: f64, x: f64) -> f64 {
        (self.v)(y, x)
    }
}

#[derive(Clone)]
pub struct GameSpec {
    pub leader_space: ActionSpace,
    pub follower_space: ActionSpace,
    payoffs: Arc<dyn Payoffs>,
    pub tol: Tolerances,
    pub name: String,
}

impl fmt::Debug for GameSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GameSpec")
            .field("name", &self.name)
            .field("leader_space", &self.leader_space)
            .field("follower_space", &self.follower_space)
            .field("tol", &self.tol)
            .finish()
    }
}

const PROBES: usize = 9;

impl GameSpec {
    /// Builds a game and checks finiteness and own-action concavity on a
    /// probe grid.
    pub fn new(
        leader_space: ActionSpace,
        follower_space: ActionSpace,
        payoffs: impl Payoffs + 'static,
    ) -> Result<Self> {
        let spec = Self {
            leader_space,
            follower_space,
            payoffs: Arc::new(payoffs),
            tol: Tolerances::default(),
            name: "custom".into(),
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn from_fns(
        leader_space: ActionSpace,
        follower_space: ActionSpace,
        u: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
        v: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
    ) -> Result<Self> {
        Self::new(leader_space, follower_space, FnPayoffs::new(u, v))
    }

    pub fn with_tolerances(mut self, tol: Tolerances) -> Result<Self> {
        tol.validate()?;
        self.tol = tol;
        Ok(self)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn concavity(&self) -> Concavity {
        self.payoffs.concavity()
    }

    fn validate(&self) -> Result<()> {
        let xs = linspace(self.leader_space.lo, self.leader_space.hi, PROBES);
        let ys = linspace(self.follower_space.lo, self.follower_space.hi, PROBES);
        for &x in &xs {
            for &y in &ys {
                let (u, v) = (self.u(x, y), self.v(y, x));
                if !u.is_finite() || !v.is_finite() {
                    return Err(Error::BadParams(format!("payoff not finite at ({x}, {y})")));
                }
            }
        }
        if self.concavity() == Concavity::Weak {
            return Ok(());
        }
        let interior = |s: &ActionSpace| -> Vec<f64> {
            (1..=PROBES).map(|i| s.lo + s.width() * i as f64 / (PROBES + 1) as f64).collect()
        };
        for &x in &interior(&self.leader_space) {
            for &y in &interior(&self.follower_space) {
                let p = self.partials(x, y);
                if !(p.u11 < 0.0) {
                    return Err(Error::NonConcave(format!("u11 = {} at ({x}, {y})", p.u11)));
                }
                if !(p.v11 < 0.0) {
                    return Err(Error::NonConcave(format!("v11 = {} at ({x}, {y})", p.v11)));
                }
            }
        }
        Ok(())
    }

    pub fn u(&self, x: f64, y: f64) -> f64 {
        self.payoffs.leader(x, y)
    }

    pub fn v(&self, y: f64, x: f64) -> f64 {
        self.payoffs.follower(y, x)
    }

    pub fn analytic_partials(&self, x: f64, y: f64) -> Option<Partials> {
        self.payoffs.partials(x, y)
    }

    /// Analytic partials when the payoffs supply them, finite differences
    /// otherwise.
    pub fn partials(&self, x: f64, y: f64) -> Partials {
        self.analytic_partials(x, y).unwrap_or_else(|| self.numeric_partials(x, y))
    }

    /// Central differences, shifted inward at the boundary of the space.
    pub fn numeric_partials(&self, x: f64, y: f64) -> Partials {
        let (lx, ly) = (&self.leader_space, &self.follower_space);
        let h = self.tol.fd_step;
        let s = self.tol.fd2_step();
        let u = |a: f64, b: f64| self.u(a, b);
        let v = |a: f64, b: f64| self.v(a, b);
        let d1 = |f: &dyn Fn(f64) -> f64, t: f64, sp: &ActionSpace| {
            let (a, b) = (sp.clamp(t - h), sp.clamp(t + h));
            (f(b) - f(a)) / (b - a)
        };
        let d2 = |f: &dyn Fn(f64) -> f64, t: f64, sp: &ActionSpace| {
            let c = t.clamp(sp.lo + s, sp.hi - s);
            (f(c + s) - 2.0 * f(c) + f(c - s)) / (s * s)
        };
        let cross = |f: &dyn Fn(f64, f64) -> f64, a: f64, b: f64, sa: &ActionSpace, sb: &ActionSpace| {
            let a = a.clamp(sa.lo + s, sa.hi - s);
            let b = b.clamp(sb.lo + s, sb.hi - s);
            (f(a + s, b + s) - f(a + s, b - s) - f(a - s, b + s) + f(a - s, b - s)) / (4.0 * s * s)
        };
        Partials {
            u1: d1(&|t| u(t, y), x, lx),
            u2: d1(&|t| u(x, t), y, ly),
            u11: d2(&|t| u(t, y), x, lx),
            u12: cross(&u, x, y, lx, ly),
            v1: d1(&|t| v(t, x), y, ly),
            v2: d1(&|t| v(y, t), x, lx),
            v11: d2(&|t| v(t, x), y, ly),
            v12: cross(&v, y, x, ly, lx),
        }
    }

    /// Maximizer of a concave own-payoff over `space`.
    fn own_argmax(
        &self,
        space: &ActionSpace,
        value: impl Fn(f64) -> f64,
        analytic_slope: impl Fn(f64) -> Option<f64>,
    ) -> f64 {
        if analytic_slope(space.lo).is_some() {
            return concave_argmax(|t| analytic_slope(t).unwrap_or(0.0), space.lo, space.hi);
        }
        match self.concavity() {
            Concavity::Strict => {
                let h = self.tol.fd_step;
                let slope = |t: f64| {
                    let (a, b) = (space.clamp(t - h), space.clamp(t + h));
                    (value(b) - value(a)) / (b - a)
                };
                concave_argmax(slope, space.lo, space.hi)
            }
            Concavity::Weak => {
                let tol = 1e-13 * space.width().max(1.0);
                golden_max(&value, space.lo, space.hi, tol).0
            }
        }
    }

    /// Follower best response `R_F(x)`.
    pub fn best_response_follower(&self, x: f64) -> f64 {
        self.own_argmax(
            &self.follower_space,
            |y| self.v(y, x),
            |y| self.analytic_partials(x, y).map(|p| p.v1),
        )
    }

    /// Leader best response `R_L(y)`.
    pub fn best_response_leader(&self, y: f64) -> f64 {
        self.own_argmax(
            &self.leader_space,
            |x| self.u(x, y),
            |x| self.analytic_partials(x, y).map(|p| p.u1),
        )
    }

    /// `R_F(x)` with a second-difference concavity check at the optimum.
    pub fn checked_best_response_follower(&self, x: f64) -> Result<f64> {
        let y = self.best_response_follower(x);
        self.check_peak(&self.follower_space, y, |t| self.v(t, x))?;
        Ok(y)
    }

    /// `R_L(y)` with a second-difference concavity check at the optimum.
    pub fn checked_best_response_leader(&self, y: f64) -> Result<f64> {
        let x = self.best_response_leader(y);
        self.check_peak(&self.leader_space, x, |t| self.u(t, y))?;
        Ok(x)
    }

    fn check_peak(&self, space: &ActionSpace, t: f64, f: impl Fn(f64) -> f64) -> Result<()> {
        let s = self.tol.fd2_step();
        let c = t.clamp(space.lo + s, space.hi - s);
        let second = f(c + s) - 2.0 * f(c) + f(c - s);
        if second > self.tol.f_tol.max(1e-12) {
            return Err(Error::NonConcave(format!("positive second difference {second:e} near {t}")));
        }
        Ok(())
    }

    /// `phi(x) = R_L(R_F(x))`.
    pub fn phi(&self, x: f64) -> f64 {
        self.best_response_leader(self.best_response_follower(x))
    }

    /// `U(x) = u(x, R_F(x))`.
    pub fn leader_value(&self, x: f64) -> f64 {
        self.u(x, self.best_response_follower(x))
    }

    /// Deviation gain `eta(x~, x)`.
    pub fn eta(&self, x_tilde: f64, x: f64) -> f64 {
        if x_tilde == x {
            return 0.0;
        }
        let y = self.best_response_follower(x);
        self.u(x_tilde, y) - self.u(x, y)
    }

    /// The action other than `x` at which the leader is indifferent given
    /// the follower's response to `x`, falling back to the far boundary (or
    /// to the Cournot action itself) when no such action exists.
    pub fn gamma(&self, x: f64, cournot: f64) -> f64 {
        let space = &self.leader_space;
        if (x - cournot).abs() <= self.tol.x_tol {
            return cournot;
        }
        let y = self.best_response_follower(x);
        let base = self.u(x, y);
        let eta = |t: f64| self.u(t, y) - base;
        let peak = self.best_response_leader(y);
        let up = if peak != x { peak > x } else { x < cournot };
        let far = if up { space.hi } else { space.lo };
        if far == x {
            return x;
        }
        // eta(., x) is concave with peak at phi(x), so the far side holds at
        // most one root.
        if eta(far) >= 0.0 {
            return far;
        }
        if up { bisect_root(eta, peak, far) } else { bisect_root(eta, far, peak) }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quadratic() -> GameSpec {
        let s = ActionSpace::new(0.0, 2.0).unwrap();
        GameSpec::from_fns(s, s, |x, y| x - 0.5 * x * y - 0.6 * x * x, |y, x| y - 0.5 * x * y - 0.6 * y * y)
            .unwrap()
    }

    #[test]
    fn rejects_convex_payoffs() {
        let s = ActionSpace::new(0.0, 1.0).unwrap();
        let err = GameSpec::from_fns(s, s, |x, _| x * x, |y, _| -y * y).unwrap_err();
        assert!(matches!(err, Error::NonConcave(_)));
    }

    #[test]
    fn rejects_degenerate_space() {
        assert!(ActionSpace::new(1.0, 1.0).is_err());
    }

    #[test]
    fn numeric_best_response_matches_first_order_condition() {
        let g = quadratic();
        // v_1 = 1 - 0.5 x - 1.2 y = 0
        for x in [0.0, 0.3, 1.0, 1.7] {
            let y = g.best_response_follower(x);
            assert!((y - (1.0 - 0.5 * x) / 1.2).abs() < 1e-9, "x={x} y={y}");
        }
    }

    #[test]
    fn eta_vanishes_on_diagonal_and_gamma_is_indifferent() {
        let g = quadratic();
        // Cournot: x = (1 - 0.5 x)/1.2 -> x = 1/1.7
        let xc = 1.0 / 1.7;
        assert!((g.phi(xc) - xc).abs() < 1e-9);
        for x in [0.0, 0.2, 0.9, 1.5] {
            assert_eq!(g.eta(x, x), 0.0);
            let t = g.gamma(x, xc);
            if t > 0.0 && t < 2.0 {
                assert!(g.eta(t, x).abs() < 1e-12, "x={x} gamma={t}");
            }
        }
        assert_eq!(g.gamma(xc, xc), xc);
    }

    #[test]
    fn checked_best_response_passes_for_concave_payoffs() {
        let g = quadratic();
        assert!(g.checked_best_response_follower(0.4).is_ok());
        assert!(g.checked_best_response_leader(0.4).is_ok());
    }
}
