//! Built-in game families and the duopoly closed forms.
//!
//! - [`DuopolyParams`]: `u(x, y) = x - (1-d) x y - (1 - r/2) x^2`, `v(y, x) = u(y, x)`
//!   on `[0, 2/(2-r)]`.
//! - [`CoordinationParams`]: `u(x, y) = x y + (1-x)(1-y) - (x-1/2)^2/2 - 3(1+a)/2 (y-1/2)^2`,
//!   `v(y, x) = u(y, x)` on `[0, 1]`.
//! - [`TabulatedGame`]: payoff samples with bilinear interpolation.

use std::path::Path;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::game::{ActionSpace, Concavity, GameSpec, Partials, Payoffs};
use crate::interval::{IntervalUnion, Piece};

/// Comparison tolerance for the knife edge `r = d + 1`.
pub const KNIFE_EDGE_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DuopolyParams {
    pub r: f64,
    pub d: f64,
}

struct DuopolyPayoffs {
    r: f64,
    d: f64,
}

impl Payoffs for DuopolyPayoffs {
    fn leader(&self, x: f64, y: f64) -> f64 {
        x - (1.0 - self.d) * x * y - (1.0 - 0.5 * self.r) * x * x
    }

    fn follower(&self, y: f64, x: f64) -> f64 {
        self.leader(y, x)
    }

    fn partials(&self, x: f64, y: f64) -> Option<Partials> {
        let (b, c) = (1.0 - self.d, 2.0 - self.r);
        Some(Partials {
            u1: 1.0 - b * y - c * x,
            u2: -b * x,
            u11: -c,
            u12: -b,
            v1: 1.0 - b * x - c * y,
            v2: -b * y,
            v11: -c,
            v12: -b,
        })
    }
}

impl DuopolyParams {
    pub fn new(r: f64, d: f64) -> Result<Self> {
        if !(r.is_finite() && r < 2.0) {
            return Err(Error::BadParams(format!("duopoly needs r < 2, got {r}")));
        }
        if !(0.0..=1.0).contains(&d) {
            return Err(Error::BadParams(format!("duopoly needs d in [0, 1], got {d}")));
        }
        Ok(Self { r, d })
    }

    pub fn space(&self) -> ActionSpace {
        ActionSpace { lo: 0.0, hi: self.x_max() }
    }

    /// Upper bound of the action space, `2/(2-r)`.
    pub fn x_max(&self) -> f64 {
        2.0 / (2.0 - self.r)
    }

    /// Monopoly quantity `1/(2-r)`.
    pub fn x_monopoly(&self) -> f64 {
        1.0 / (2.0 - self.r)
    }

    /// Interior Cournot quantity `1/(3-r-d)`.
    pub fn x_cournot(&self) -> f64 {
        1.0 / (3.0 - self.r - self.d)
    }

    /// Quantity above which the follower stays out, `1/(1-d)`.
    pub fn kink(&self) -> f64 {
        1.0 / (1.0 - self.d)
    }

    pub fn spec(&self) -> Result<GameSpec> {
        let s = self.space();
        Ok(GameSpec::new(s, s, DuopolyPayoffs { r: self.r, d: self.d })?
            .with_name(format!("duopoly(r={}, d={})", self.r, self.d)))
    }

    pub fn u(&self, x: f64, y: f64) -> f64 {
        DuopolyPayoffs { r: self.r, d: self.d }.leader(x, y)
    }

    /// Sign of `r - (d+1)` with the knife-edge tolerance.
    pub fn edge(&self) -> std::cmp::Ordering {
        let g = self.r - (self.d + 1.0);
        if g.abs() <= KNIFE_EDGE_TOL {
            std::cmp::Ordering::Equal
        } else if g < 0.0 {
            std::cmp::Ordering::Less
        } else {
            std::cmp::Ordering::Greater
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CoordinationParams {
    pub a: f64,
}

struct CoordinationPayoffs {
    a: f64,
}

impl Payoffs for CoordinationPayoffs {
    fn leader(&self, x: f64, y: f64) -> f64 {
        x * y + (1.0 - x) * (1.0 - y) - 0.5 * (x - 0.5).powi(2) - 1.5 * (1.0 + self.a) * (y - 0.5).powi(2)
    }

    fn follower(&self, y: f64, x: f64) -> f64 {
        self.leader(y, x)
    }

    fn partials(&self, x: f64, y: f64) -> Option<Partials> {
        let k = 3.0 * (1.0 + self.a);
        Some(Partials {
            u1: 2.0 * y - x - 0.5,
            u2: 2.0 * x - 1.0 - k * (y - 0.5),
            u11: -1.0,
            u12: 2.0,
            v1: 2.0 * x - y - 0.5,
            v2: 2.0 * y - 1.0 - k * (x - 0.5),
            v11: -1.0,
            v12: 2.0,
        })
    }
}

impl CoordinationParams {
    pub fn new(a: f64) -> Result<Self> {
        if !(a.is_finite() && a >= 0.0) {
            return Err(Error::BadParams(format!("coordination needs a >= 0, got {a}")));
        }
        Ok(Self { a })
    }

    pub fn space(&self) -> ActionSpace {
        ActionSpace { lo: 0.0, hi: 1.0 }
    }

    pub fn spec(&self) -> Result<GameSpec> {
        let s = self.space();
        Ok(GameSpec::new(s, s, CoordinationPayoffs { a: self.a })?.with_name(format!("coordination(a={})", self.a)))
    }
}

/// Payoff samples on a rectangular grid, interpolated bilinearly.
///
/// `u[i][j] = u(xs[i], ys[j])` and `v[i][j] = v(ys[j], xs[i])`.
#[derive(Clone, Debug, PartialEq)]
pub struct TabulatedGame {
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
    pub u: Vec<Vec<f64>>,
    pub v: Vec<Vec<f64>>,
}

fn bracket(knots: &[f64], t: f64) -> (usize, f64) {
    let n = knots.len();
    let t = t.clamp(knots[0], knots[n - 1]);
    let k = knots.partition_point(|&k| k <= t).clamp(1, n - 1) - 1;
    let w = (t - knots[k]) / (knots[k + 1] - knots[k]);
    (k, w)
}

fn concave_sequence(knots: &[f64], vals: impl Fn(usize) -> f64) -> bool {
    (1..knots.len() - 1).all(|k| {
        let left = (vals(k) - vals(k - 1)) / (knots[k] - knots[k - 1]);
        let right = (vals(k + 1) - vals(k)) / (knots[k + 1] - knots[k]);
        right <= left + 1e-12
    })
}

impl TabulatedGame {
    pub fn new(xs: Vec<f64>, ys: Vec<f64>, u: Vec<Vec<f64>>, v: Vec<Vec<f64>>) -> Result<Self> {
        let inc = |s: &[f64]| s.len() >= 2 && s.windows(2).all(|w| w[0] < w[1]);
        if !inc(&xs) || !inc(&ys) {
            return Err(Error::BadParams("grid axes must be strictly increasing with >= 2 knots".into()));
        }
        let shape_ok = |t: &Vec<Vec<f64>>| t.len() == xs.len() && t.iter().all(|r| r.len() == ys.len());
        if !shape_ok(&u) || !shape_ok(&v) {
            return Err(Error::BadParams("payoff tables must be |xs| rows by |ys| columns".into()));
        }
        if u.iter().chain(&v).flatten().any(|z| !z.is_finite()) {
            return Err(Error::BadParams("payoff tables contain non-finite values".into()));
        }
        for j in 0..ys.len() {
            if !concave_sequence(&xs, |i| u[i][j]) {
                return Err(Error::NonConcave(format!("u(., {}) is not concave", ys[j])));
            }
        }
        for (i, row) in v.iter().enumerate() {
            if !concave_sequence(&ys, |j| row[j]) {
                return Err(Error::NonConcave(format!("v(., {}) is not concave", xs[i])));
            }
        }
        Ok(Self { xs, ys, u, v })
    }

    /// Reads the long table format:
    ///
    /// ```text
    /// table,x,<y_1>,...,<y_m>
    /// u,<x_1>,u(x_1,y_1),...
    /// v,<x_1>,v(y_1,x_1),...
    /// ```
    pub fn from_csv_reader(rdr: impl std::io::Read) -> Result<Self> {
        let mut r = csv::ReaderBuilder::new().has_headers(true).trim(csv::Trim::All).from_reader(rdr);
        let header = r.headers()?.clone();
        let parse = |s: &str| s.parse::<f64>().map_err(|e| Error::Parse(format!("{s:?}: {e}")));
        let ys = header.iter().skip(2).map(parse).collect::<Result<Vec<_>>>()?;
        let (mut ux, mut u, mut vx, mut v) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
        for rec in r.records() {
            let rec = rec?;
            let x = parse(rec.get(1).unwrap_or(""))?;
            let row = rec.iter().skip(2).map(parse).collect::<Result<Vec<_>>>()?;
            match rec.get(0) {
                Some("u") => {
                    ux.push(x);
                    u.push(row);
                }
                Some("v") => {
                    vx.push(x);
                    v.push(row);
                }
                other => return Err(Error::Parse(format!("row tag must be u or v, got {other:?}"))),
            }
        }
        if ux != vx {
            return Err(Error::Parse("u and v rows must list the same leader actions".into()));
        }
        Self::new(ux, ys, u, v)
    }

    pub fn from_csv_path(path: &Path) -> Result<Self> {
        Self::from_csv_reader(std::fs::File::open(path)?)
    }

    fn interp(&self, table: &[Vec<f64>], x: f64, y: f64) -> f64 {
        let (i, wx) = bracket(&self.xs, x);
        let (j, wy) = bracket(&self.ys, y);
        let a = table[i][j] * (1.0 - wy) + table[i][j + 1] * wy;
        let b = table[i + 1][j] * (1.0 - wy) + table[i + 1][j + 1] * wy;
        a * (1.0 - wx) + b * wx
    }

    pub fn spec(self: &Arc<Self>) -> Result<GameSpec> {
        let ls = ActionSpace::new(self.xs[0], *self.xs.last().unwrap())?;
        let fs = ActionSpace::new(self.ys[0], *self.ys.last().unwrap())?;
        Ok(GameSpec::new(ls, fs, TabulatedPayoffs(self.clone()))?.with_name("tabulated"))
    }
}

struct TabulatedPayoffs(Arc<TabulatedGame>);

impl Payoffs for TabulatedPayoffs {
    fn leader(&self, x: f64, y: f64) -> f64 {
        self.0.interp(&self.0.u, x, y)
    }
    fn follower(&self, y: f64, x: f64) -> f64 {
        self.0.interp(&self.0.v, x, y)
    }
    fn concavity(&self) -> Concavity {
        Concavity::Weak
    }
}

/// A selected family with its parameters.
#[derive(Clone, Debug)]
pub enum Family {
    Duopoly(DuopolyParams),
    Coordination(CoordinationParams),
    Tabulated(Arc<TabulatedGame>),
}

impl Family {
    pub fn spec(&self) -> Result<GameSpec> {
        match self {
            Family::Duopoly(p) => p.spec(),
            Family::Coordination(p) => p.spec(),
            Family::Tabulated(t) => t.spec(),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Family::Duopoly(_) => "duopoly",
            Family::Coordination(_) => "coordination",
            Family::Tabulated(_) => "tabulated",
        }
    }

    /// Parameters as a JSON object for reports.
    pub fn params_json(&self) -> serde_json::Value {
        match self {
            Family::Duopoly(p) => serde_json::json!({ "r": p.r, "d": p.d }),
            Family::Coordination(p) => serde_json::json!({ "a": p.a }),
            Family::Tabulated(t) => serde_json::json!({ "rows": t.xs.len(), "cols": t.ys.len() }),
        }
    }

    /// Actions worth keeping as exact grid points.
    pub fn landmarks(&self) -> Vec<f64> {
        match self {
            Family::Duopoly(p) => match DuopolyClosedForms::new(*p) {
                Ok(cf) => cf.landmarks(),
                Err(_) => vec![],
            },
            Family::Coordination(_) => vec![0.0, 0.25, 0.5, 0.75, 1.0],
            Family::Tabulated(t) => t.xs.clone(),
        }
    }
}

/// The six regime thresholds in `r` for a given `d`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ThresholdRow {
    pub d: f64,
    /// `r*`: above it the plausible set extends below the Cournot quantity.
    pub r_star: f64,
    /// `r**`: the simply-plausible upper end passes the follower's exit point.
    pub r_2star: f64,
    /// `r***`: the Stackelberg quantity becomes `1/(1-d)`.
    pub r_3star: f64,
    /// `r_dag`: producer surplus switches from Cournot to Stackelberg.
    pub r_dag: f64,
    pub r_2dag: f64,
    pub r_3dag: f64,
}

pub fn thresholds(d: f64) -> ThresholdRow {
    let b = 1.0 - d;
    let c = (57f64.sqrt() / 9.0 + 1.0).cbrt();
    // 3 (9 - sqrt 78) = 9 / (9 + sqrt 78), free of cancellation.
    let s = (9.0 / (9.0 + 78f64.sqrt())).cbrt();
    // 80 - 9 sqrt 79 = 1 / (80 + 9 sqrt 79).
    let c3 = (1.0 / (80.0 + 9.0 * 79f64.sqrt())).cbrt();
    let sqrt5 = 5f64.sqrt();
    ThresholdRow {
        d,
        r_star: 2.0 - 2f64.sqrt() * b,
        r_2star: 2.0 - c * b - 2.0 * b / (3.0 * c),
        r_3star: 0.5 * (3.0 - sqrt5 + (1.0 + sqrt5) * d),
        r_dag: 2.0 - (s / 3.0 + 1.0 / s) * b,
        r_2dag: 2.0 - 3f64.sqrt() * b,
        r_3dag: 2.0 + ((1.0 - c3) / 3.0 - 1.0 / (3.0 * c3)) * b,
    }
}

impl ThresholdRow {
    /// `2d < r_2dag < r_3dag < r_dag < r* < d+1`.
    pub fn ordered(&self) -> bool {
        let seq = [2.0 * self.d, self.r_2dag, self.r_3dag, self.r_dag, self.r_star, self.d + 1.0];
        seq.windows(2).all(|w| w[0] < w[1])
    }
}

/// Parameter regime of the duopoly, as used by the closed forms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// `r <= r**`
    Low,
    /// `r** < r < r*`
    Middle,
    /// `r* <= r < d+1`
    High,
    /// `r = d+1`
    KnifeEdge,
    /// `r > d+1`
    MultipleCournot,
}

impl Regime {
    pub fn label(&self) -> &'static str {
        match self {
            Regime::Low => "r<=r**",
            Regime::Middle => "r**<r<r*",
            Regime::High => "r*<=r<d+1",
            Regime::KnifeEdge => "r=d+1",
            Regime::MultipleCournot => "r>d+1",
        }
    }
}

/// Closed-form duopoly maps and sets.
#[derive(Clone, Debug, Serialize)]
pub struct DuopolyClosedForms {
    pub params: DuopolyParams,
    pub thresholds: ThresholdRow,
    pub regime: Regime,
    pub cournot: IntervalUnion,
    pub stackelberg: f64,
    pub simply_plausible: IntervalUnion,
    pub i_plausible: IntervalUnion,
    pub plausible: IntervalUnion,
    pub x_min: f64,
    pub x_max: f64,
}

impl DuopolyClosedForms {
    pub fn new(p: DuopolyParams) -> Result<Self> {
        let p = DuopolyParams::new(p.r, p.d)?;
        let (r, d) = (p.r, p.d);
        let t = thresholds(d);
        let s = p.space();
        let b = 1.0 - d;
        let c2 = (2.0 - r).powi(2);
        let xc = p.x_cournot();
        let xm = p.x_monopoly();
        let top = p.x_max();
        let regime = match p.edge() {
            std::cmp::Ordering::Equal => Regime::KnifeEdge,
            std::cmp::Ordering::Greater => Regime::MultipleCournot,
            std::cmp::Ordering::Less if r >= t.r_star => Regime::High,
            std::cmp::Ordering::Less if r > t.r_2star => Regime::Middle,
            std::cmp::Ordering::Less => Regime::Low,
        };
        let cournot = match regime {
            Regime::KnifeEdge => IntervalUnion::closed(s, 0.0, xm),
            Regime::MultipleCournot => {
                IntervalUnion::from_pieces(s, vec![Piece::point(0.0), Piece::point(xc), Piece::point(xm)])
            }
            _ => IntervalUnion::point(s, xc),
        };
        let stackelberg = match regime {
            Regime::MultipleCournot => xm,
            _ if r < t.r_3star => (d + 1.0 - r) / (c2 - 2.0 * b * b),
            _ => p.kink(),
        };
        let simple_upper_low = c2 / ((3.0 - r - d) * (c2 - 2.0 * b * b));
        let simple_upper_mid = ((b * (5.0 - 2.0 * r - d)).sqrt() - r - d + 3.0) / ((2.0 - r) * (3.0 - r - d));
        let q0_lo = 2.0 * (r - d - 1.0) / (2.0 * b * b - c2);
        let simply_plausible = match regime {
            Regime::Low => IntervalUnion::closed(s, xc, simple_upper_low),
            Regime::Middle | Regime::High => IntervalUnion::closed(s, xc, simple_upper_mid),
            Regime::KnifeEdge => IntervalUnion::full(s),
            Regime::MultipleCournot => IntervalUnion::from_pieces(
                s,
                vec![Piece::point(0.0), Piece::closed(q0_lo, xc), Piece::closed(xm, top)],
            ),
        };
        let i_plausible = match regime {
            Regime::MultipleCournot => {
                IntervalUnion::from_pieces(s, vec![Piece::point(0.0), Piece::closed(q0_lo, top)])
            }
            _ => simply_plausible.clone(),
        };
        let plausible = match regime {
            Regime::High => {
                let lo = 2.0 * (d + 1.0 - r) / c2;
                let disc = (c2 * c2 - 8.0 * b * b * (d + 1.0 - r).powi(2)).max(0.0);
                IntervalUnion::closed(s, lo, (c2 + disc.sqrt()) / (2.0 - r).powi(3))
            }
            _ => i_plausible.clone(),
        };
        let (x_min, x_max) = (plausible.min()?, plausible.max()?);
        Ok(Self {
            params: p,
            thresholds: t,
            regime,
            cournot,
            stackelberg,
            simply_plausible,
            i_plausible,
            plausible,
            x_min,
            x_max,
        })
    }

    pub fn r_f(&self, x: f64) -> f64 {
        let DuopolyParams { r, d } = self.params;
        if x <= self.params.kink() {
            (1.0 - (1.0 - d) * x) / (2.0 - r)
        } else {
            0.0
        }
    }

    pub fn phi(&self, x: f64) -> f64 {
        let DuopolyParams { r, d } = self.params;
        let b = 1.0 - d;
        if x <= (r - (d + 1.0)) / (b * b) {
            0.0
        } else if x < self.params.kink() {
            (d + 1.0 - r + b * b * x) / (2.0 - r).powi(2)
        } else {
            self.params.x_monopoly()
        }
    }

    pub fn u_value(&self, x: f64) -> f64 {
        self.params.u(x, self.r_f(x))
    }

    /// `gamma` on `[0, x^C]` for `r < d+1`.
    pub fn gamma_below_cournot(&self, x: f64) -> f64 {
        let DuopolyParams { r, d } = self.params;
        let c2 = (2.0 - r).powi(2);
        (2.0 * (1.0 + d - r) - x * c2 + 2.0 * x * (1.0 - d).powi(2)) / c2
    }

    /// The Cournot CST is follower-optimal iff `r` is outside `(r*, d+1)`.
    pub fn cournot_cst_follower_optimal(&self) -> bool {
        let r = self.params.r;
        !(r > self.thresholds.r_star && self.params.edge() == std::cmp::Ordering::Less)
    }

    pub fn landmarks(&self) -> Vec<f64> {
        let s = self.params.space();
        let mut v = vec![s.lo, s.hi, self.stackelberg, self.params.x_monopoly(), self.params.kink()];
        for set in [&self.cournot, &self.simply_plausible, &self.i_plausible, &self.plausible] {
            for p in set.pieces() {
                v.push(p.lo);
                v.push(p.hi);
            }
        }
        v.retain(|x| x.is_finite() && s.contains(*x));
        v.sort_by(f64::total_cmp);
        v.dedup();
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn threshold_values_at_zero() {
        let t = thresholds(0.0);
        assert!((t.r_star - (2.0 - 2f64.sqrt())).abs() < 1e-15);
        // frozen from a 50-digit evaluation of the defining radicals
        assert!((t.r_dag - 0.478620293195432).abs() < 1e-12);
        assert!((t.r_3dag - 0.462343828301578).abs() < 1e-12);
        assert!((t.r_2dag - 0.267949192431123).abs() < 1e-12);
        assert!((t.r_2star - 0.230707645761369).abs() < 1e-12);
        assert!((t.r_3star - 0.381966011250105).abs() < 1e-12);
        assert!(t.ordered());
    }

    #[test]
    fn thresholds_meet_at_two_when_d_is_one() {
        let t = thresholds(1.0);
        for v in [t.r_star, t.r_2star, t.r_3star, t.r_dag, t.r_2dag, t.r_3dag] {
            assert!((v - 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn r_dag_is_the_producer_surplus_switch() {
        // PS(x, R_F(x)) at the Cournot and at the exit quantity agree at r_dag (d = 0).
        let r = thresholds(0.0).r_dag;
        let p = DuopolyParams::new(r, 0.0).unwrap();
        let cf = DuopolyClosedForms::new(p).unwrap();
        let ps = |x: f64| {
            let y = cf.r_f(x);
            p.u(x, y) + p.u(y, x)
        };
        assert!((ps(p.x_cournot()) - ps(1.0)).abs() < 1e-12);
    }

    #[test]
    fn bad_params_are_rejected() {
        assert!(DuopolyParams::new(2.0, 0.0).is_err());
        assert!(DuopolyParams::new(0.5, 1.5).is_err());
        assert!(CoordinationParams::new(-0.1).is_err());
    }

    #[test]
    fn worked_closed_forms() {
        let cf = DuopolyClosedForms::new(DuopolyParams::new(0.8, 0.0).unwrap()).unwrap();
        assert_eq!(cf.regime, Regime::High);
        assert!((cf.cournot.min().unwrap() - 5.0 / 11.0).abs() < 1e-15);
        assert!((cf.x_min - 5.0 / 18.0).abs() < 1e-15);
        assert!((cf.stackelberg - 1.0).abs() < 1e-15);
        let cf = DuopolyClosedForms::new(DuopolyParams::new(1.2, 0.0).unwrap()).unwrap();
        assert_eq!(cf.cournot.points(), vec![0.0, 5.0 / 9.0, 1.25]);
        assert!((cf.simply_plausible.pieces()[1].lo - 5.0 / 17.0).abs() < 1e-15);
        let cf = DuopolyClosedForms::new(DuopolyParams::new(1.0, 0.0).unwrap()).unwrap();
        assert_eq!(cf.regime, Regime::KnifeEdge);
        assert_eq!(cf.cournot.pieces(), &[Piece::closed(0.0, 1.0)]);
    }

    #[test]
    fn duopoly_is_symmetric() {
        let s = DuopolyParams::new(0.7, 0.3).unwrap().spec().unwrap();
        for (x, y) in [(0.1, 0.9), (1.2, 0.3), (0.0, 0.5)] {
            assert_eq!(s.u(x, y), s.v(x, y));
        }
    }

    #[test]
    fn tabulated_csv_roundtrip_and_concavity() {
        let csv = "table,x,0,0.5,1\nu,0,0,0,0\nu,0.5,0.3,0.2,0.1\nu,1,0.2,0.1,0\nv,0,0,0.3,0.2\nv,0.5,0,0.25,0.1\nv,1,0,0.2,0\n";
        let t = TabulatedGame::from_csv_reader(csv.as_bytes()).unwrap();
        assert_eq!(t.ys, vec![0.0, 0.5, 1.0]);
        let g = Arc::new(t).spec().unwrap();
        assert!((g.u(0.25, 0.0) - 0.15).abs() < 1e-15);
        assert!((g.v(0.5, 0.0) - 0.3).abs() < 1e-15);
        let bad = "table,x,0,0.5,1\nu,0,0,0,0\nu,0.5,0,0,0\nu,1,1,1,1\nv,0,0,0,0\nv,0.5,0,0,0\nv,1,0,0,0\n";
        assert!(matches!(TabulatedGame::from_csv_reader(bad.as_bytes()), Err(Error::NonConcave(_))));
    }
}
