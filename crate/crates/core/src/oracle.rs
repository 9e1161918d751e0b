//! Brute-force SPE outcomes of `G(K)` for finite commitment structures on a
//! grid of leader actions.
//!
//! An element's continuation equilibria are the actions `b` in it with
//! `eta(x, b) <= tol` for every `x` the leader could switch to. Grid indices
//! that are consecutive in an element stand for the whole interval between
//! them, so besides the grid actions themselves the best deviation inside
//! each run, the leader's best response to `R_F(b)` clamped to the run, is
//! tested too. Limit points are grid actions outside an element that lie in
//! its closure; they stand in for open endpoints, since the leader can get
//! arbitrarily close to them.

use std::str::FromStr;

use itertools::Itertools;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cst::SymbolicCst;
use crate::error::{Error, Result};
use crate::game::{ActionSpace, GameSpec};
use crate::optimize::linspace;

/// Payoff tolerance of the admissibility and maximality tests, relative to
/// the largest absolute grid payoff.
pub const ORACLE_REL_TOL: f64 = 1e-11;

/// Largest grid for which the full `eta` table is cached.
const ETA_CACHE_MAX: usize = 1500;

#[derive(Clone, Debug, Serialize)]
pub struct Grid {
    points: Vec<f64>,
    h: f64,
    #[serde(skip)]
    space: ActionSpace,
}

impl Grid {
    /// `n` uniform points plus every hint inside the space. A uniform point
    /// within `1e-9` of the space width of a hint is replaced by the hint.
    pub fn new(space: ActionSpace, n: usize, hints: &[f64]) -> Result<Self> {
        if n < 2 {
            return Err(Error::BadParams(format!("grid needs at least 2 points, got {n}")));
        }
        let close = 1e-9 * space.width();
        let mut points = linspace(space.lo, space.hi, n);
        for &x in hints.iter().filter(|x| x.is_finite() && space.contains(**x)) {
            let k = points.partition_point(|p| *p < x);
            let near = [k.checked_sub(1), (k < points.len()).then_some(k)]
                .into_iter()
                .flatten()
                .find(|&j| (points[j] - x).abs() <= close);
            match near {
                Some(j) if j != 0 && j != points.len() - 1 => points[j] = x,
                Some(_) => {}
                None => points.insert(k, x),
            }
        }
        Ok(Self { points, h: space.width() / (n - 1) as f64, space })
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn x(&self, i: usize) -> f64 {
        self.points[i]
    }

    /// Spacing of the uniform part.
    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn space(&self) -> ActionSpace {
        self.space
    }

    pub fn nearest(&self, x: f64) -> usize {
        let k = self.points.partition_point(|p| *p < x);
        match k {
            0 => 0,
            k if k == self.points.len() => k - 1,
            k if x - self.points[k - 1] <= self.points[k] - x => k - 1,
            k => k,
        }
    }

    /// Index of `x` if it is a grid action up to `1e-9` of the space width.
    pub fn index_of(&self, x: f64) -> Option<usize> {
        let k = self.nearest(x);
        ((self.points[k] - x).abs() <= 1e-9 * self.space.width()).then_some(k)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CstElement {
    pub members: Vec<usize>,
    /// Grid actions outside the element that lie in its closure.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub limit_points: Vec<usize>,
}

impl CstElement {
    pub fn new(mut members: Vec<usize>) -> Self {
        members.sort_unstable();
        members.dedup();
        Self { members, limit_points: Vec::new() }
    }

    pub fn range(lo: usize, hi: usize) -> Self {
        Self { members: (lo..=hi).collect(), limit_points: Vec::new() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiniteCst {
    pub elements: Vec<CstElement>,
}

impl FiniteCst {
    pub fn new(n: usize, elements: Vec<Vec<usize>>) -> Result<Self> {
        Self::with_limits(n, elements.into_iter().map(CstElement::new).collect())
    }

    pub fn with_limits(n: usize, elements: Vec<CstElement>) -> Result<Self> {
        let mut seen = vec![false; n];
        for e in &elements {
            if e.members.is_empty() {
                return Err(Error::Parse("empty element".into()));
            }
            for &i in e.members.iter().chain(&e.limit_points) {
                if i >= n {
                    return Err(Error::Parse(format!("grid index {i} out of range")));
                }
            }
            e.members.iter().for_each(|&i| seen[i] = true);
        }
        if let Some(i) = seen.iter().position(|s| !s) {
            return Err(Error::NotCovering(format!("grid index {i} belongs to no element")));
        }
        Ok(Self { elements })
    }

    pub fn cournot(n: usize) -> Self {
        Self { elements: vec![CstElement::range(0, n - 1)] }
    }

    pub fn stackelberg(n: usize) -> Self {
        Self { elements: (0..n).map(|i| CstElement::range(i, i)).collect() }
    }

    /// Contiguous pieces starting at each cut.
    pub fn from_cuts(n: usize, cuts: &[usize]) -> Self {
        let mut bounds = vec![0];
        bounds.extend_from_slice(cuts);
        bounds.push(n);
        Self { elements: bounds.windows(2).map(|w| CstElement::range(w[0], w[1] - 1)).collect() }
    }

    /// Projects a symbolic structure on the grid. Open endpoints that are grid
    /// actions become limit points; filled singletons become elements.
    pub fn from_symbolic(k: &SymbolicCst, grid: &Grid) -> Result<Self> {
        let mut covered = vec![false; grid.len()];
        let mut elements = Vec::new();
        for e in &k.elements {
            let members: Vec<usize> = (0..grid.len()).filter(|&i| e.contains(grid.x(i))).collect();
            let mut limit_points: Vec<usize> = e
                .pieces()
                .iter()
                .flat_map(|p| [(p.lo, p.lo_closed), (p.hi, p.hi_closed)])
                .filter(|&(_, closed)| !closed)
                .filter_map(|(x, _)| grid.index_of(x))
                .filter(|i| !members.contains(i))
                .collect();
            limit_points.sort_unstable();
            limit_points.dedup();
            if members.is_empty() {
                return Err(Error::Parse(format!("element {e} holds no grid action; refine the grid")));
            }
            members.iter().for_each(|&i| covered[i] = true);
            elements.push(CstElement { members, limit_points });
        }
        for i in 0..grid.len() {
            if !covered[i] {
                if !k.singleton_fill {
                    return Err(Error::NotCovering(format!("grid action {} belongs to no element", grid.x(i))));
                }
                elements.push(CstElement::range(i, i));
            }
        }
        Ok(Self { elements })
    }

    /// Literal-style description: runs of consecutive grid actions as closed
    /// intervals; more than three singleton elements are summarized as `*`.
    pub fn describe(&self, grid: &Grid) -> String {
        let singles = self.elements.iter().filter(|e| e.members.len() == 1).count();
        if singles == grid.len() {
            return "stackelberg".into();
        }
        let mut parts = Vec::new();
        for e in &self.elements {
            if e.members.len() == 1 && singles > 3 {
                continue;
            }
            let mut runs: Vec<(usize, usize)> = Vec::new();
            for &i in &e.members {
                match runs.last_mut() {
                    Some(r) if r.1 + 1 == i => r.1 = i,
                    _ => runs.push((i, i)),
                }
            }
            let text: Vec<String> = runs
                .iter()
                .map(|&(a, b)| {
                    let (x, y) = (crate::interval::fmt_num(grid.x(a)), crate::interval::fmt_num(grid.x(b)));
                    if a == b { format!("{{{x}}}") } else { format!("[{x},{y}]") }
                })
                .collect();
            parts.push(text.join("u"));
        }
        if singles > 3 {
            parts.push("*".into());
        }
        parts.join("|")
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpeOutcome {
    pub index: usize,
    pub x: f64,
    pub y: f64,
    pub payoff: f64,
    /// First element in which this action is a continuation equilibrium
    /// supporting the outcome.
    pub element: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct SpeSet {
    pub outcomes: Vec<SpeOutcome>,
    /// Some element has no continuation equilibrium on the grid.
    pub no_equilibrium: bool,
    /// Continuation equilibria of each element.
    pub continuation: Vec<Vec<usize>>,
}

impl SpeSet {
    pub fn contains(&self, index: usize) -> bool {
        self.outcomes.iter().any(|o| o.index == index)
    }

    pub fn leader_actions(&self) -> Vec<f64> {
        self.outcomes.iter().map(|o| o.x).collect()
    }

    pub fn min_payoff(&self) -> Option<f64> {
        self.outcomes.iter().map(|o| o.payoff).min_by(f64::total_cmp)
    }

    pub fn max_payoff(&self) -> Option<f64> {
        self.outcomes.iter().map(|o| o.payoff).max_by(f64::total_cmp)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CstFamily {
    /// The all-singletons structure.
    Singletons,
    /// Interval partitions with up to `max_cuts` cuts.
    CutoffPartitions,
    /// `{x*}`, a prefix and a suffix covering the grid, and the two-element
    /// prefix/suffix covers.
    IntervalPlusComplement,
    /// `(lo, a]`, `{lo}` together with `(a, b)`, and `[b, hi]`.
    ThreePieceDesign,
    /// Partitions with one non-interval element.
    QuasiSimpleWitness,
}

impl CstFamily {
    pub const ALL: [CstFamily; 5] = [
        CstFamily::Singletons,
        CstFamily::CutoffPartitions,
        CstFamily::IntervalPlusComplement,
        CstFamily::ThreePieceDesign,
        CstFamily::QuasiSimpleWitness,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CstFamily::Singletons => "singletons",
            CstFamily::CutoffPartitions => "cutoff_partitions",
            CstFamily::IntervalPlusComplement => "interval_plus_complement",
            CstFamily::ThreePieceDesign => "three_piece_design",
            CstFamily::QuasiSimpleWitness => "quasi_simple_witness",
        }
    }
}

impl FromStr for CstFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace('-', "_");
        Self::ALL
            .into_iter()
            .find(|f| f.name() == key)
            .ok_or_else(|| Error::UnknownFamily(s.to_string()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct EnumConfig {
    pub max_cuts: usize,
    /// Grid index the construction is built around, where the family has one.
    pub anchor: Option<usize>,
}

impl Default for EnumConfig {
    fn default() -> Self {
        Self { max_cuts: 3, anchor: None }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Witness {
    pub family: CstFamily,
    pub cst: FiniteCst,
    pub spe: SpeSet,
}

pub struct Oracle {
    spec: GameSpec,
    grid: Grid,
    y: Vec<f64>,
    u: Vec<f64>,
    /// Leader's best response to `y`.
    peak: Vec<f64>,
    eta: Option<Vec<f64>>,
    tol: f64,
}

impl Oracle {
    pub fn new(spec: &GameSpec, grid: Grid) -> Self {
        let xs = grid.points().to_vec();
        let y: Vec<f64> = xs.par_iter().map(|&x| spec.best_response_follower(x)).collect();
        let u: Vec<f64> = xs.iter().zip(&y).map(|(&x, &y)| spec.u(x, y)).collect();
        let peak: Vec<f64> = y.par_iter().map(|&y| spec.best_response_leader(y)).collect();
        let scale = u.iter().fold(1.0f64, |m, v| m.max(v.abs()));
        let tol = (ORACLE_REL_TOL * scale).max(spec.tol.f_tol);
        let n = xs.len();
        let eta = (n <= ETA_CACHE_MAX).then(|| {
            (0..n * n)
                .into_par_iter()
                .map(|k| {
                    let (i, b) = (k / n, k % n);
                    if i == b { 0.0 } else { spec.u(xs[i], y[b]) - u[b] }
                })
                .collect()
        });
        Self { spec: spec.clone(), grid, y, u, peak, eta, tol }
    }

    /// Grid of `n` uniform points plus the Cournot and Stackelberg actions
    /// and `hints`.
    pub fn with_landmarks(spec: &GameSpec, n: usize, hints: &[f64]) -> Result<Self> {
        let eq = crate::equilibria::equilibria(spec)?;
        let mut all = hints.to_vec();
        all.extend(eq.cournot_points.iter());
        all.extend(eq.stackelberg.pieces().iter().flat_map(|p| [p.lo, p.hi]));
        Ok(Self::new(spec, Grid::new(spec.leader_space, n, &all)?))
    }

    pub fn spec(&self) -> &GameSpec {
        &self.spec
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn payoff(&self, i: usize) -> f64 {
        self.u[i]
    }

    pub fn payoffs(&self) -> &[f64] {
        &self.u
    }

    pub fn follower(&self, i: usize) -> f64 {
        self.y[i]
    }

    /// Gain from switching the leader action from grid index `b` to `i`,
    /// holding the follower's response to `b`.
    pub fn eta(&self, i: usize, b: usize) -> f64 {
        match &self.eta {
            Some(m) => m[i * self.grid.len() + b],
            None if i == b => 0.0,
            None => self.spec.u(self.grid.x(i), self.y[b]) - self.u[b],
        }
    }

    /// Largest gain from switching away from `b` to an action in
    /// `[x_lo, x_hi]`, found at the clamped best response.
    pub fn run_gain(&self, b: usize, lo: usize, hi: usize) -> f64 {
        let x = self.peak[b].clamp(self.grid.x(lo), self.grid.x(hi));
        if x == self.grid.x(b) { 0.0 } else { self.spec.u(x, self.y[b]) - self.u[b] }
    }

    pub fn admissible_actions(&self, element: &CstElement) -> Vec<usize> {
        let mut closure: Vec<usize> = element.members.iter().chain(&element.limit_points).copied().collect();
        closure.sort_unstable();
        closure.dedup();
        let mut runs: Vec<(usize, usize)> = Vec::new();
        for &i in &closure {
            match runs.last_mut() {
                Some(r) if r.1 + 1 == i => r.1 = i,
                _ => runs.push((i, i)),
            }
        }
        element
            .members
            .iter()
            .copied()
            .filter(|&b| {
                closure.iter().all(|&i| self.eta(i, b) <= self.tol)
                    && runs.iter().all(|&(lo, hi)| self.run_gain(b, lo, hi) <= self.tol)
            })
            .collect()
    }

    fn continuation(&self, cst: &FiniteCst) -> Vec<Vec<usize>> {
        cst.elements.iter().map(|e| self.admissible_actions(e)).collect()
    }

    fn outcome(&self, index: usize, element: usize) -> SpeOutcome {
        SpeOutcome { index, x: self.grid.x(index), y: self.y[index], payoff: self.u[index], element }
    }

    fn collect(&self, cont: Vec<Vec<usize>>, keep: impl Fn(usize, usize) -> bool) -> SpeSet {
        let mut outcomes: Vec<SpeOutcome> = Vec::new();
        for (j, bs) in cont.iter().enumerate() {
            for &b in bs {
                if keep(j, b) && !outcomes.iter().any(|o| o.index == b) {
                    outcomes.push(self.outcome(b, j));
                }
            }
        }
        outcomes.sort_by_key(|o| o.index);
        SpeSet { outcomes, no_equilibrium: false, continuation: cont }
    }

    /// All SPE leader actions: `b` continues in some element and every
    /// element has a continuation equilibrium worth at most `U(b)`.
    pub fn spe_outcomes(&self, cst: &FiniteCst) -> SpeSet {
        let cont = self.continuation(cst);
        if cont.iter().any(Vec::is_empty) {
            return SpeSet { outcomes: Vec::new(), no_equilibrium: true, continuation: cont };
        }
        let level = cont
            .iter()
            .map(|bs| bs.iter().map(|&b| self.u[b]).fold(f64::INFINITY, f64::min))
            .fold(f64::NEG_INFINITY, f64::max);
        self.collect(cont, |_, b| self.u[b] >= level - self.tol)
    }

    /// SPE outcomes when every subgame plays the leader's favourite
    /// continuation equilibrium.
    pub fn spe_outcomes_leader_preferred(&self, cst: &FiniteCst) -> SpeSet {
        let cont = self.continuation(cst);
        if cont.iter().any(Vec::is_empty) {
            return SpeSet { outcomes: Vec::new(), no_equilibrium: true, continuation: cont };
        }
        let best: Vec<f64> =
            cont.iter().map(|bs| bs.iter().map(|&b| self.u[b]).fold(f64::NEG_INFINITY, f64::max)).collect();
        let top = best.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        self.collect(cont, |j, b| best[j] >= top - self.tol && self.u[b] >= best[j] - self.tol)
    }

    pub fn spe_of_symbolic(&self, k: &SymbolicCst) -> Result<SpeSet> {
        Ok(self.spe_outcomes(&FiniteCst::from_symbolic(k, &self.grid)?))
    }

    /// Lazily lists the structures of `family`.
    pub fn enumerate(&self, family: CstFamily, cfg: EnumConfig) -> Box<dyn Iterator<Item = FiniteCst> + '_> {
        let n = self.grid.len();
        let anchors: Box<dyn Iterator<Item = usize> + Send> = match cfg.anchor {
            Some(a) => Box::new(std::iter::once(a)),
            None => Box::new(0..n),
        };
        match family {
            CstFamily::Singletons => Box::new(std::iter::once(FiniteCst::stackelberg(n))),
            CstFamily::CutoffPartitions => Box::new(
                (1..=cfg.max_cuts.min(n - 1))
                    .flat_map(move |k| (1..n).combinations(k))
                    .map(move |cuts| FiniteCst::from_cuts(n, &cuts)),
            ),
            CstFamily::IntervalPlusComplement => {
                let covers = move || {
                    (0..n - 1).flat_map(move |j| (1..=j + 1).map(move |i| (CstElement::range(0, j), CstElement::range(i, n - 1))))
                };
                let pairs = covers().map(|(a, b)| FiniteCst { elements: vec![a, b] });
                let with_point = anchors.flat_map(move |k| {
                    covers().map(move |(a, b)| FiniteCst { elements: vec![CstElement::range(k, k), a, b] })
                });
                Box::new(with_point.chain(pairs))
            }
            CstFamily::ThreePieceDesign => Box::new(anchors.filter(|&b| b >= 2).flat_map(move |b| {
                (1..b).map(move |a| {
                    let mut middle = vec![0];
                    middle.extend(a + 1..b);
                    let mut elements = vec![CstElement::range(1, a), CstElement::new(middle)];
                    if b < n {
                        elements.push(CstElement::range(b, n - 1));
                    }
                    FiniteCst { elements }
                })
            })),
            CstFamily::QuasiSimpleWitness => Box::new(anchors.flat_map(move |s| self.quasi_simple(s))),
        }
    }

    /// Quasi-simple structures around anchor `s`: `s` as the top of an
    /// interval whose lower neighbour `a` joins the upper tail, the mirror
    /// image, then `{x_hat}` joined to the strict upper contour set of `s`
    /// with singletons elsewhere.
    fn quasi_simple(&self, s: usize) -> impl Iterator<Item = FiniteCst> + '_ {
        let n = self.grid.len();
        let below = (0..s).map(move |a| {
            let mut first = vec![a];
            first.extend(s + 1..n);
            let mut elements = vec![CstElement::new(first), CstElement::range(a + 1, s)];
            if a > 0 {
                elements.push(CstElement::range(0, a - 1));
            }
            FiniteCst { elements }
        });
        let above = (s + 1..n).rev().map(move |b| {
            let mut first: Vec<usize> = (0..s).collect();
            first.push(b);
            let mut elements = vec![CstElement::new(first), CstElement::range(s, b - 1)];
            if b + 1 < n {
                elements.push(CstElement::range(b + 1, n - 1));
            }
            FiniteCst { elements }
        });
        let level = self.u[s];
        let upper: Vec<usize> = (0..n).filter(|&k| self.u[k] > level + self.tol).collect();
        let contour = (0..n).filter(move |&x| x != s && self.u[x] <= level + self.tol).map(move |x_hat| {
            let mut first = upper.clone();
            first.push(x_hat);
            let first = CstElement::new(first);
            let mut elements: Vec<CstElement> =
                (0..n).filter(|i| !first.members.contains(i)).map(|i| CstElement::range(i, i)).collect();
            elements.insert(0, first);
            FiniteCst { elements }
        });
        below.chain(above).chain(contour)
    }

    /// First structure in `families` with `x_star` among its SPE leader
    /// actions.
    pub fn certify(&self, x_star: usize, families: &[CstFamily], cfg: EnumConfig) -> Option<Witness> {
        let cfg = EnumConfig { anchor: Some(x_star), ..cfg };
        for &family in families {
            let found = match family {
                CstFamily::CutoffPartitions => self.tables().cutoff_witness(self, x_star, cfg.max_cuts),
                CstFamily::IntervalPlusComplement => self.tables().complement_witness(self, x_star),
                _ => self.enumerate(family, cfg).find(|k| self.spe_outcomes(k).contains(x_star)),
            };
            if let Some(cst) = found {
                let spe = self.spe_outcomes(&cst);
                if spe.contains(x_star) {
                    return Some(Witness { family, cst, spe });
                }
            }
        }
        None
    }

    /// Admissibility data for contiguous elements.
    pub fn tables(&self) -> ContiguousTables {
        ContiguousTables::new(self)
    }

    /// Grid actions that some interval partition with at most `max_cuts`
    /// cuts (the single-element partition included) implements.
    pub fn cutoff_certified(&self, max_cuts: usize) -> Vec<bool> {
        self.tables().cutoff_certified(self, max_cuts)
    }

    /// Grid actions implemented by a prefix/suffix cover, with or without an
    /// extra singleton.
    pub fn complement_certified(&self) -> Vec<bool> {
        let t = self.tables();
        let level = t.complement_level(self).map_or(f64::INFINITY, |c| c.0);
        self.u.iter().map(|&v| v >= level - self.tol).collect()
    }
}

/// For each grid action, how far a contiguous element around it may extend
/// without a profitable deviation, and the smallest continuation payoff of
/// every contiguous element.
pub struct ContiguousTables {
    n: usize,
    left: Vec<usize>,
    right: Vec<usize>,
    min_u: Vec<f64>,
}

impl ContiguousTables {
    fn new(o: &Oracle) -> Self {
        let n = o.grid.len();
        let (left, right): (Vec<usize>, Vec<usize>) = (0..n)
            .into_par_iter()
            .map(|b| {
                let mut l = b;
                while l > 0 && o.eta(l - 1, b) <= o.tol && o.run_gain(b, l - 1, b) <= o.tol {
                    l -= 1;
                }
                let mut r = b;
                while r + 1 < n && o.eta(r + 1, b) <= o.tol && o.run_gain(b, b, r + 1) <= o.tol {
                    r += 1;
                }
                (l, r)
            })
            .unzip();
        let min_u: Vec<f64> = (0..n)
            .into_par_iter()
            .flat_map_iter(|l| {
                let mut row = vec![f64::INFINITY; n];
                for b in l..n {
                    if left[b] <= l {
                        for r in b..=right[b] {
                            row[r] = row[r].min(o.u[b]);
                        }
                    }
                }
                row
            })
            .collect();
        Self { n, left, right, min_u }
    }

    pub fn admits(&self, b: usize, lo: usize, hi: usize) -> bool {
        lo <= b && b <= hi && self.left[b] <= lo && self.right[b] >= hi
    }

    /// Smallest continuation payoff of `[lo, hi]`, infinite if none.
    pub fn min_u(&self, lo: usize, hi: usize) -> f64 {
        self.min_u[lo * self.n + hi]
    }

    fn partitions(&self, max_cuts: usize, mut visit: impl FnMut(&[usize]) -> bool) {
        let n = self.n;
        for k in 0..=max_cuts.min(n - 1) {
            for cuts in (1..n).combinations(k) {
                if visit(&cuts) {
                    return;
                }
            }
        }
    }

    fn level(&self, cuts: &[usize]) -> Option<f64> {
        let mut bounds = vec![0];
        bounds.extend_from_slice(cuts);
        bounds.push(self.n);
        let mut level = f64::NEG_INFINITY;
        for w in bounds.windows(2) {
            let m = self.min_u(w[0], w[1] - 1);
            if m == f64::INFINITY {
                return None;
            }
            level = level.max(m);
        }
        Some(level)
    }

    fn cutoff_certified(&self, o: &Oracle, max_cuts: usize) -> Vec<bool> {
        let n = self.n;
        let mut hit = vec![false; n];
        self.partitions(max_cuts, |cuts| {
            if let Some(level) = self.level(cuts) {
                let mut lo = 0;
                for &hi in cuts.iter().chain(std::iter::once(&n)) {
                    for b in lo..hi {
                        if !hit[b] && o.u[b] >= level - o.tol && self.admits(b, lo, hi - 1) {
                            hit[b] = true;
                        }
                    }
                    lo = hi;
                }
            }
            false
        });
        hit
    }

    fn cutoff_witness(&self, o: &Oracle, x: usize, max_cuts: usize) -> Option<FiniteCst> {
        let n = self.n;
        let mut found = None;
        self.partitions(max_cuts, |cuts| {
            let Some(level) = self.level(cuts) else { return false };
            if o.u[x] < level - o.tol {
                return false;
            }
            let lo = cuts.iter().copied().filter(|&c| c <= x).last().unwrap_or(0);
            let hi = cuts.iter().copied().find(|&c| c > x).unwrap_or(n) - 1;
            if self.admits(x, lo, hi) {
                found = Some(FiniteCst::from_cuts(n, cuts));
                return true;
            }
            false
        });
        found
    }

    /// Smallest `max(min_u(prefix), min_u(suffix))` over prefix/suffix covers
    /// with both parts proper, and the minimizing `(prefix end, suffix start)`.
    pub fn complement_level(&self, _o: &Oracle) -> Option<(f64, usize, usize)> {
        let n = self.n;
        let mut best: Option<(f64, usize, usize)> = None;
        for j in 0..n - 1 {
            let a = self.min_u(0, j);
            if a == f64::INFINITY {
                continue;
            }
            for i in 1..=j + 1 {
                let v = a.max(self.min_u(i, n - 1));
                if v < best.map_or(f64::INFINITY, |b| b.0) {
                    best = Some((v, j, i));
                }
            }
        }
        best
    }

    fn complement_witness(&self, o: &Oracle, x: usize) -> Option<FiniteCst> {
        let (level, j, i) = self.complement_level(o)?;
        (o.u[x] >= level - o.tol).then(|| FiniteCst {
            elements: vec![CstElement::range(x, x), CstElement::range(0, j), CstElement::range(i, self.n - 1)],
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{CoordinationParams, DuopolyParams};

    fn duo(r: f64, hints: &[f64]) -> Oracle {
        let g = DuopolyParams::new(r, 0.0).unwrap().spec().unwrap();
        Oracle::with_landmarks(&g, 201, hints).unwrap()
    }

    fn coord(a: f64, hints: &[f64]) -> Oracle {
        let g = CoordinationParams::new(a).unwrap().spec().unwrap();
        Oracle::with_landmarks(&g, 201, hints).unwrap()
    }

    fn sym(o: &Oracle, lit: &str) -> FiniteCst {
        let k = SymbolicCst::parse(lit, o.grid().space()).unwrap();
        FiniteCst::from_symbolic(&k, o.grid()).unwrap()
    }

    fn near(o: &Oracle, xs: &[f64], want: &[f64]) -> bool {
        xs.len() == want.len() && xs.iter().zip(want).all(|(a, b)| (a - b).abs() <= o.grid().h())
    }

    const DUO_MARKS: [f64; 5] = [1.5, 1.0 / 8.0, 1.0 / 3.0, 5.0 / 18.0, 5.0 / 3.0];

    #[test]
    fn grid_keeps_hints_exactly() {
        let g = Grid::new(ActionSpace::new(0.0, 1.0).unwrap(), 11, &[1.0 / 3.0, 0.5 + 1e-12]).unwrap();
        assert_eq!(g.len(), 12);
        assert_eq!(g.index_of(1.0 / 3.0), Some(4));
        assert_eq!(g.x(6), 0.5 + 1e-12);
        assert_eq!(g.nearest(0.96), 11);
    }

    #[test]
    fn upper_interval_admits_only_its_bottom() {
        let o = duo(0.8, &DUO_MARKS);
        let el = &sym(&o, "[1.5,5/3]|*").elements[0];
        let b: Vec<f64> = o.admissible_actions(el).iter().map(|&i| o.grid().x(i)).collect();
        assert_eq!(b, vec![1.5]);
    }

    #[test]
    fn union_element_has_two_continuations() {
        let o = duo(0.8, &DUO_MARKS);
        let el = &sym(&o, "[0,1/8]u(1/3,5/3]|*").elements[0];
        let b: Vec<f64> = o.admissible_actions(el).iter().map(|&i| o.grid().x(i)).collect();
        assert!(near(&o, &b, &[0.125, 5.0 / 11.0]), "{b:?}");
    }

    #[test]
    fn worked_duopoly_structures() {
        let o = duo(0.8, &DUO_MARKS);
        let spe = o.spe_outcomes(&sym(&o, "[0,1.5)|[1.5,1.6667]"));
        assert_eq!(spe.leader_actions(), vec![1.5]);
        let k = sym(&o, "(0.125,0.3333]|[0,0.125]u(0.3333,1.6667]");
        let spe = o.spe_outcomes(&k);
        assert!(near(&o, &spe.leader_actions(), &[1.0 / 3.0, 5.0 / 11.0]), "{:?}", spe.leader_actions());
        let best = o.spe_outcomes_leader_preferred(&k);
        assert!(near(&o, &best.leader_actions(), &[5.0 / 11.0]));
    }

    #[test]
    fn coordination_bad_equilibrium_and_its_removal() {
        let o = coord(0.0, &[1.0 / 9.0, 4.0 / 9.0]);
        let k = sym(&o, "[1/9,4/9)|[0,1/9)u[4/9,1]");
        let spe = o.spe_outcomes(&k);
        let cournot_min = [0.0, 0.5, 1.0].map(|x| o.payoff(o.grid().index_of(x).unwrap())).into_iter().fold(f64::INFINITY, f64::min);
        let bad = spe.outcomes.iter().find(|s| (s.x - 4.0 / 9.0).abs() <= o.grid().h()).expect("4/9 outcome");
        assert!(bad.payoff < cournot_min);
        let best = o.spe_outcomes_leader_preferred(&k);
        assert!(best.outcomes.iter().all(|s| s.payoff >= cournot_min - o.tol()));
    }

    #[test]
    fn extreme_structures() {
        let o = coord(0.01, &[]);
        let st = o.spe_outcomes(&FiniteCst::stackelberg(o.grid().len()));
        assert_eq!(st.leader_actions(), vec![0.5]);
        let c = o.spe_outcomes(&FiniteCst::cournot(o.grid().len()));
        assert_eq!(c.leader_actions(), vec![0.0, 0.5, 1.0]);
        let c = o.spe_outcomes_leader_preferred(&FiniteCst::cournot(o.grid().len()));
        assert_eq!(c.leader_actions(), vec![0.5]);
    }

    #[test]
    fn five_point_grid_has_four_binary_partitions() {
        let g = CoordinationParams::new(0.0).unwrap().spec().unwrap();
        let o = Oracle::new(&g, Grid::new(g.leader_space, 5, &[]).unwrap());
        let cfg = EnumConfig { max_cuts: 1, anchor: None };
        assert_eq!(o.enumerate(CstFamily::CutoffPartitions, cfg).count(), 4);
        let cfg = EnumConfig { max_cuts: 2, anchor: None };
        assert_eq!(o.enumerate(CstFamily::CutoffPartitions, cfg).count(), 4 + 6);
    }

    #[test]
    fn quasi_simple_witness_for_one_third() {
        let o = duo(0.8, &DUO_MARKS);
        let s = o.grid().index_of(1.0 / 3.0).unwrap();
        let w = o.certify(s, &[CstFamily::QuasiSimpleWitness], EnumConfig::default()).unwrap();
        assert_eq!(w.cst.elements.len(), 2);
        assert_eq!(w.cst.elements[0].members[0], 0);
        assert_eq!(w.cst.elements[0].members[1], s + 1);
        assert_eq!(w.cst.elements[1].members, (1..=s).collect::<Vec<_>>());
        assert!(o.certify(s, &[CstFamily::CutoffPartitions], EnumConfig::default()).is_none());
    }

    #[test]
    fn i_plausible_but_not_simple() {
        let o = duo(1.2, &[0.7]);
        let s = o.grid().index_of(0.7).unwrap();
        assert!(o.certify(s, &[CstFamily::CutoffPartitions], EnumConfig::default()).is_none());
        let w = o.certify(s, &[CstFamily::IntervalPlusComplement], EnumConfig::default()).unwrap();
        assert_eq!(w.cst.elements[0].members, vec![s]);
    }

    #[test]
    fn stackelberg_action_certified_by_singletons() {
        let o = coord(0.01, &[]);
        let s = o.grid().index_of(0.5).unwrap();
        let w = o.certify(s, &CstFamily::ALL, EnumConfig::default()).unwrap();
        assert_eq!(w.family, CstFamily::Singletons);
    }

    #[test]
    fn family_names_round_trip() {
        for f in CstFamily::ALL {
            assert_eq!(f.name().parse::<CstFamily>().unwrap(), f);
        }
        assert!(matches!("spirals".parse::<CstFamily>(), Err(Error::UnknownFamily(_))));
    }
}
