//! The commitment design problem: maximize `W(x, R_F(x))` over the actions
//! implementable by some structure of a given class.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::Serialize;

use crate::cst::SymbolicCst;
use crate::error::{Error, Result};
use crate::families::{DuopolyClosedForms, DuopolyParams, Family, Regime};
use crate::game::GameSpec;
use crate::interval::IntervalUnion;
use crate::optimize::{golden_max, linspace};
use crate::oracle::{CstFamily, EnumConfig, Oracle};
use crate::plausibility::Analysis;

/// Relative tie tolerance between optimal objective values.
pub const TIE_TOL: f64 = 1e-9;

/// Closed-form and numeric optimal actions must agree to this.
pub const CLOSED_FORM_TOL: f64 = 1e-5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ObjectiveKind {
    Leader,
    Follower,
    ConsumerSurplus,
    ProducerSurplus,
    Welfare,
    Custom,
}

impl FromStr for ObjectiveKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.trim().to_ascii_lowercase().replace('-', "_").as_str() {
            "leader" | "u" => ObjectiveKind::Leader,
            "follower" | "v" => ObjectiveKind::Follower,
            "cs" | "consumer_surplus" => ObjectiveKind::ConsumerSurplus,
            "ps" | "producer_surplus" => ObjectiveKind::ProducerSurplus,
            "w" | "welfare" => ObjectiveKind::Welfare,
            _ => return Err(Error::UnsupportedObjective(s.to_string())),
        })
    }
}

type CustomFn = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

#[derive(Clone)]
pub struct Objective {
    pub kind: ObjectiveKind,
    custom: Option<CustomFn>,
}

impl fmt::Debug for Objective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Objective({:?})", self.kind)
    }
}

impl Objective {
    pub fn new(kind: ObjectiveKind) -> Result<Self> {
        if kind == ObjectiveKind::Custom {
            return Err(Error::UnsupportedObjective("custom objectives need a function; use Objective::custom".into()));
        }
        Ok(Self { kind, custom: None })
    }

    pub fn custom(w: impl Fn(f64, f64) -> f64 + Send + Sync + 'static) -> Self {
        Self { kind: ObjectiveKind::Custom, custom: Some(Arc::new(w)) }
    }

    /// `W(x, y)`; `d` is the product differentiation of the duopoly, needed by
    /// consumer surplus and welfare.
    pub fn value(&self, spec: &GameSpec, d: Option<f64>, x: f64, y: f64) -> Result<f64> {
        let need_d = || d.ok_or_else(|| Error::UnsupportedObjective("consumer surplus is defined for the duopoly only".into()));
        Ok(match self.kind {
            ObjectiveKind::Leader => spec.u(x, y),
            ObjectiveKind::Follower => spec.v(y, x),
            ObjectiveKind::ConsumerSurplus => consumer_surplus(x, y, need_d()?),
            ObjectiveKind::ProducerSurplus => producer_surplus(spec, x, y),
            ObjectiveKind::Welfare => welfare(spec, x, y, need_d()?),
            ObjectiveKind::Custom => (self.custom.as_ref().expect("custom objective"))(x, y),
        })
    }
}

pub fn consumer_surplus(x: f64, y: f64, d: f64) -> f64 {
    (x + y).powi(2) / 2.0 - d * x * y
}

pub fn producer_surplus(spec: &GameSpec, x: f64, y: f64) -> f64 {
    spec.u(x, y) + spec.v(y, x)
}

pub fn welfare(spec: &GameSpec, x: f64, y: f64, d: f64) -> f64 {
    consumer_surplus(x, y, d) + producer_surplus(spec, x, y)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CstClass {
    Simple,
    I,
    P,
    All,
}

impl FromStr for CstClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.trim().to_ascii_lowercase().as_str() {
            "simple" => CstClass::Simple,
            "i" | "interval" => CstClass::I,
            "p" | "partition" => CstClass::P,
            "all" => CstClass::All,
            _ => return Err(Error::UnsupportedClass(s.to_string())),
        })
    }
}

impl CstClass {
    fn witness_families(self) -> &'static [CstFamily] {
        match self {
            CstClass::Simple => &[CstFamily::CutoffPartitions],
            CstClass::I => &[CstFamily::CutoffPartitions, CstFamily::IntervalPlusComplement],
            CstClass::P | CstClass::All => &[
                CstFamily::CutoffPartitions,
                CstFamily::ThreePieceDesign,
                CstFamily::QuasiSimpleWitness,
            ],
        }
    }
}

/// The plausible set of a class, with a note when it rests on a closed-form
/// identity rather than a theorem that applies generically.
pub fn plausible_set(an: &Analysis, family: &Family, class: CstClass) -> Result<(IntervalUnion, Option<String>)> {
    match class {
        CstClass::Simple => Ok((an.simply_plausible_set(), None)),
        CstClass::I => Ok((an.i_plausible_set(), None)),
        CstClass::P | CstClass::All => match an.p_plausible() {
            Ok(p) => Ok((p.set, None)),
            Err(Error::RcViolated(why)) => match family {
                Family::Duopoly(_) => Ok((
                    an.i_plausible_set(),
                    Some("RC fails; for the duopoly the plausible and I-plausible sets coincide".into()),
                )),
                _ => Err(Error::RcViolated(why)),
            },
            Err(e) => Err(e),
        },
    }
}

/// Smallest and largest plausible actions of the class.
pub fn extreme_plausible_actions(family: &Family, class: CstClass) -> Result<(f64, f64)> {
    if let Family::Duopoly(p) = family {
        let cf = DuopolyClosedForms::new(*p)?;
        let set = match class {
            CstClass::Simple => &cf.simply_plausible,
            CstClass::I => &cf.i_plausible,
            CstClass::P | CstClass::All => &cf.plausible,
        };
        return Ok((set.min()?, set.max()?));
    }
    let spec = family.spec()?;
    let an = Analysis::with_hints(&spec, &family.landmarks())?;
    let (set, _) = plausible_set(&an, family, class)?;
    Ok((set.min()?, set.max()?))
}

/// Maximizers of `f` over `set` within the tie tolerance of the best, and
/// the best value.
pub fn argmax_on(set: &IntervalUnion, f: impl Fn(f64) -> f64) -> (Vec<f64>, f64) {
    let mut cands: Vec<(f64, f64)> = Vec::new();
    for q in set.pieces() {
        if q.is_point() {
            cands.push((q.lo, f(q.lo)));
            continue;
        }
        let xs = linspace(q.lo, q.hi, 801);
        let vs: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
        let n = xs.len();
        for i in 0..n {
            let left_ok = i == 0 || vs[i] >= vs[i - 1];
            let right_ok = i + 1 == n || vs[i] >= vs[i + 1];
            if !(left_ok && right_ok) {
                continue;
            }
            if i == 0 || i + 1 == n {
                cands.push((xs[i], vs[i]));
            } else {
                let (x, v) = golden_max(&f, xs[i - 1], xs[i + 1], 1e-13);
                cands.push(if v >= vs[i] { (x, v) } else { (xs[i], vs[i]) });
            }
        }
    }
    let best = cands.iter().map(|c| c.1).fold(f64::NEG_INFINITY, f64::max);
    let tie = TIE_TOL * best.abs().max(1.0);
    let mut xs: Vec<f64> = cands.into_iter().filter(|c| c.1 >= best - tie).map(|c| c.0).collect();
    xs.sort_by(f64::total_cmp);
    xs.dedup_by(|a, b| (*a - *b).abs() <= 1e-7);
    (xs, best)
}

#[derive(Clone, Debug, Serialize)]
pub struct WitnessCst {
    pub action: f64,
    pub cst: String,
    /// The oracle found `action` among the SPE leader actions of the
    /// structure on a grid containing its endpoints.
    pub verified: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClosedFormCheck {
    pub actions: Vec<f64>,
    pub max_gap: f64,
    pub agrees: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct DesignSolution {
    pub objective: ObjectiveKind,
    pub class: CstClass,
    pub plausible_set: IntervalUnion,
    pub optimal_actions: Vec<f64>,
    pub objective_value: f64,
    pub witnesses: Vec<WitnessCst>,
    pub regime: Option<String>,
    pub closed_form: Option<ClosedFormCheck>,
    pub caveats: Vec<String>,
}

/// Optimal actions from the closed-form propositions for the duopoly with all
/// structures allowed; `None` where they say nothing.
pub fn closed_form_optimum(cf: &DuopolyClosedForms, kind: ObjectiveKind) -> Option<Vec<f64>> {
    let p = cf.params;
    let xc = p.x_cournot();
    Some(match kind {
        ObjectiveKind::Leader => vec![cf.stackelberg],
        ObjectiveKind::Follower => vec![cf.x_min],
        ObjectiveKind::ConsumerSurplus | ObjectiveKind::Welfare => vec![cf.x_max],
        ObjectiveKind::ProducerSurplus => match cf.regime {
            Regime::KnifeEdge => return None,
            Regime::MultipleCournot => vec![0.0, p.x_monopoly()],
            _ => {
                let r_dag = cf.thresholds.r_dag;
                if (p.r - r_dag).abs() <= 1e-12 {
                    let mut v = vec![xc, cf.stackelberg];
                    v.sort_by(f64::total_cmp);
                    v
                } else if p.r < r_dag {
                    vec![xc]
                } else {
                    vec![cf.stackelberg]
                }
            }
        },
        ObjectiveKind::Custom => return None,
    })
}

/// The structures of the closed-form analysis that implement `action`.
fn duopoly_witness(cf: &DuopolyClosedForms, kind: ObjectiveKind, action: f64) -> Option<String> {
    let p = cf.params;
    let top = p.x_max();
    let xc = p.x_cournot();
    let g0 = cf.gamma_below_cournot(0.0);
    let lit = |x: f64| fmt_exact(x);
    match kind {
        ObjectiveKind::Leader => Some("stackelberg".into()),
        ObjectiveKind::Follower if cf.cournot_cst_follower_optimal() => Some("cournot".into()),
        ObjectiveKind::Follower => Some(format!("(0,{}]|{{0}}u({},{}]", lit(g0), lit(g0), lit(top))),
        ObjectiveKind::ConsumerSurplus | ObjectiveKind::Welfare => {
            let xk = cf.x_max;
            if cf.regime == Regime::MultipleCournot || g0 >= xc {
                Some(format!("[0,{})|[{},{}]", lit(xk), lit(xk), lit(top)))
            } else {
                Some(format!("(0,{}]|{{0}}u({},{})|[{},{}]", lit(g0), lit(g0), lit(xk), lit(xk), lit(top)))
            }
        }
        ObjectiveKind::ProducerSurplus => {
            if (action - cf.stackelberg).abs() <= 1e-9 {
                Some("stackelberg".into())
            } else {
                Some("cournot".into())
            }
        }
        ObjectiveKind::Custom => None,
    }
}

/// Full precision so that witness endpoints land on the oracle grid exactly.
fn fmt_exact(x: f64) -> String {
    format!("{x:?}")
}

fn verify(spec: &GameSpec, literal: &str, action: f64) -> bool {
    let Ok(k) = SymbolicCst::parse(literal, spec.leader_space) else { return false };
    let mut hints = k.endpoints();
    hints.push(action);
    let Ok(o) = Oracle::with_landmarks(spec, 401, &hints) else { return false };
    let Some(i) = o.grid().index_of(action) else { return false };
    o.spe_of_symbolic(&k).map(|s| s.contains(i)).unwrap_or(false)
}

fn searched_witness(spec: &GameSpec, class: CstClass, action: f64, set: &IntervalUnion) -> WitnessCst {
    let mut hints: Vec<f64> = set.pieces().iter().flat_map(|p| [p.lo, p.hi]).collect();
    hints.push(action);
    let found = Oracle::with_landmarks(spec, 201, &hints).ok().and_then(|o| {
        let i = o.grid().index_of(action)?;
        let w = o.certify(i, class.witness_families(), EnumConfig::default())?;
        Some(w.cst.describe(o.grid()))
    });
    match found {
        Some(cst) => WitnessCst { action, cst, verified: true },
        None => WitnessCst { action, cst: String::new(), verified: false },
    }
}

pub fn solve_cdp(family: &Family, objective: &Objective, class: CstClass) -> Result<DesignSolution> {
    let spec = family.spec()?;
    let an = Analysis::with_hints(&spec, &family.landmarks())?;
    let d = match family {
        Family::Duopoly(DuopolyParams { d, .. }) => Some(*d),
        _ => None,
    };
    objective.value(&spec, d, spec.leader_space.lo, spec.follower_space.lo)?;
    let (set, note) = plausible_set(&an, family, class)?;
    let mut caveats: Vec<String> = note.into_iter().collect();
    let w = |x: f64| objective.value(&spec, d, x, spec.best_response_follower(x)).unwrap_or(f64::NAN);
    let (mut optimal_actions, objective_value) = argmax_on(&set, w);
    let mut regime = None;
    let mut closed_form = None;
    let cf = match family {
        Family::Duopoly(p) => Some(DuopolyClosedForms::new(*p)?),
        _ => None,
    };
    if let Some(cf) = &cf {
        regime = Some(cf.regime.label().to_string());
        if class == CstClass::All {
            if let Some(actions) = closed_form_optimum(cf, objective.kind) {
                let gap = |a: &[f64], b: &[f64]| {
                    a.iter().map(|x| b.iter().map(|y| (x - y).abs()).fold(f64::INFINITY, f64::min)).fold(0.0, f64::max)
                };
                let max_gap = gap(&actions, &optimal_actions).max(gap(&optimal_actions, &actions));
                if max_gap <= CLOSED_FORM_TOL {
                    // report the exact values
                    optimal_actions = actions.clone();
                }
                closed_form = Some(ClosedFormCheck { actions, max_gap, agrees: max_gap <= CLOSED_FORM_TOL });
            }
        }
    } else {
        caveats.push("solved numerically; uniqueness is not claimed".into());
    }
    let witnesses = optimal_actions
        .iter()
        .map(|&x| {
            let literal = match (&cf, class) {
                (Some(cf), CstClass::All) => duopoly_witness(cf, objective.kind, x),
                _ if objective.kind == ObjectiveKind::Leader => Some("stackelberg".into()),
                _ => None,
            };
            match literal {
                Some(cst) => {
                    let verified = verify(&spec, &cst, x);
                    WitnessCst { action: x, cst, verified }
                }
                None => searched_witness(&spec, class, x, &set),
            }
        })
        .collect();
    Ok(DesignSolution {
        objective: objective.kind,
        class,
        plausible_set: set,
        optimal_actions,
        objective_value,
        witnesses,
        regime,
        closed_form,
        caveats,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::CoordinationParams;

    fn duo(r: f64, d: f64) -> Family {
        Family::Duopoly(DuopolyParams::new(r, d).unwrap())
    }

    fn solve(f: &Family, k: ObjectiveKind) -> DesignSolution {
        solve_cdp(f, &Objective::new(k).unwrap(), CstClass::All).unwrap()
    }

    #[test]
    fn surplus_formulas() {
        let g = DuopolyParams::new(0.8, 0.0).unwrap();
        let spec = g.spec().unwrap();
        assert_eq!(consumer_surplus(0.0, 0.0, 0.3), 0.0);
        let xc = 5.0 / 11.0;
        let ps = producer_surplus(&spec, xc, spec.best_response_follower(xc));
        assert!((ps - 2.0 * spec.leader_value(xc)).abs() < 1e-14);
        // R_F(1) = 0 when r = 4/5 and d = 0
        assert!(spec.best_response_follower(1.0).abs() < 1e-15);
        assert!((consumer_surplus(1.0, spec.best_response_follower(1.0), 0.0) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn leader_gets_stackelberg() {
        let s = solve(&duo(0.8, 0.0), ObjectiveKind::Leader);
        assert_eq!(s.optimal_actions, vec![1.0]);
        assert_eq!(s.witnesses[0].cst, "stackelberg");
        assert!(s.witnesses[0].verified);
        assert!(s.closed_form.unwrap().agrees);
    }

    #[test]
    fn consumer_optimum_is_largest_plausible_action() {
        let f = duo(0.8, 0.0);
        let s = solve(&f, ObjectiveKind::ConsumerSurplus);
        let (_, hi) = extreme_plausible_actions(&f, CstClass::All).unwrap();
        assert!((s.optimal_actions[0] - hi).abs() < 1e-12);
        assert!(s.closed_form.as_ref().unwrap().agrees, "{s:?}");
        assert!(s.witnesses[0].cst.split('|').count() == 3, "{}", s.witnesses[0].cst);
        assert!(s.witnesses[0].verified, "{s:?}");
        let w = solve(&f, ObjectiveKind::Welfare);
        assert!((w.optimal_actions[0] - hi).abs() < 1e-12);
    }

    #[test]
    fn producer_surplus_branches() {
        let s = solve(&duo(0.4, 0.0), ObjectiveKind::ProducerSurplus);
        assert!((s.optimal_actions[0] - 5.0 / 13.0).abs() < 1e-12, "{s:?}");
        let s = solve(&duo(1.3, 0.0), ObjectiveKind::ProducerSurplus);
        assert_eq!(s.optimal_actions.len(), 2, "{s:?}");
        assert!(s.closed_form.unwrap().agrees);
    }

    #[test]
    fn follower_gets_gamma_witness() {
        let s = solve(&duo(0.7, 0.0), ObjectiveKind::Follower);
        assert!(s.closed_form.as_ref().unwrap().agrees, "{s:?}");
        assert!(s.witnesses[0].cst.starts_with("(0,"), "{}", s.witnesses[0].cst);
        assert!(s.witnesses[0].verified, "{s:?}");
    }

    #[test]
    fn generic_game_is_numeric() {
        let f = Family::Coordination(CoordinationParams::new(0.0).unwrap());
        let e = solve_cdp(&f, &Objective::new(ObjectiveKind::ConsumerSurplus).unwrap(), CstClass::Simple).unwrap_err();
        assert!(matches!(e, Error::UnsupportedObjective(_)));
        let s = solve_cdp(&f, &Objective::new(ObjectiveKind::Follower).unwrap(), CstClass::Simple).unwrap();
        assert!(s.closed_form.is_none());
        assert!(s.witnesses.iter().all(|w| w.verified), "{s:?}");
        let e = solve_cdp(&f, &Objective::new(ObjectiveKind::Leader).unwrap(), CstClass::All).unwrap_err();
        assert!(matches!(e, Error::RcViolated(_)));
    }

    #[test]
    fn parse_names() {
        assert_eq!("cs".parse::<ObjectiveKind>().unwrap(), ObjectiveKind::ConsumerSurplus);
        assert_eq!("all".parse::<CstClass>().unwrap(), CstClass::All);
        assert!("pareto".parse::<ObjectiveKind>().is_err());
    }
}
