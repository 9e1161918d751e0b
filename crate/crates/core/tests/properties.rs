use proptest::prelude::*;

use commitment_limits::cst::SymbolicCst;
use commitment_limits::design::{argmax_on, plausible_set, CstClass};
use commitment_limits::equilibria::{cournot_set, Direction};
use commitment_limits::families::{thresholds, CoordinationParams, DuopolyClosedForms, DuopolyParams, Family, Regime};
use commitment_limits::game::{ActionSpace, GameSpec};
use commitment_limits::interval::{IntervalUnion, Piece, MERGE_TOL};
use commitment_limits::optimize::linspace;
use commitment_limits::oracle::{CstFamily, EnumConfig, Oracle};
use commitment_limits::plausibility::Analysis;
use commitment_limits::refinement::{i_plausible_wrt, is_finer, simply_plausible_wrt};
use commitment_limits::validation::equivalence_campaign;

fn unit() -> ActionSpace {
    ActionSpace::new(0.0, 1.0).unwrap()
}

fn duo(r: f64, d: f64) -> GameSpec {
    DuopolyParams::new(r, d).unwrap().spec().unwrap()
}

fn coord(a: f64) -> GameSpec {
    CoordinationParams::new(a).unwrap().spec().unwrap()
}

fn union_strategy() -> impl Strategy<Value = IntervalUnion> {
    prop::collection::vec((0.0..1.0f64, 0.0..0.3f64, any::<bool>(), any::<bool>(), any::<bool>()), 0..5).prop_map(|ps| {
        let pieces = ps
            .into_iter()
            .map(|(lo, w, a, b, point)| if point { Piece::point(lo) } else { Piece::new(lo, (lo + w).min(1.0), a, b) })
            .collect();
        IntervalUnion::from_pieces(unit(), pieces)
    })
}

fn game_strategy() -> impl Strategy<Value = GameSpec> {
    prop_oneof![
        (-1.0..1.9f64, 0.0..0.95f64).prop_filter("knife edge", |(r, d)| (r - d - 1.0).abs() > 1e-3).prop_map(|(r, d)| duo(r, d)),
        (0.0..2.0f64).prop_map(coord),
    ]
}

fn same(a: &IntervalUnion, b: &IntervalUnion) -> bool {
    a.same_set(b, MERGE_TOL)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 256, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn set_algebra_laws(a in union_strategy(), b in union_strategy(), c in union_strategy()) {
        prop_assert!(same(&a.union(&a), &a));
        prop_assert!(same(&a.intersect(&a), &a));
        prop_assert!(same(&a.union(&b), &b.union(&a)));
        prop_assert!(same(&a.intersect(&b), &b.intersect(&a)));
        prop_assert!(same(&a.union(&b).union(&c), &a.union(&b.union(&c))));
        prop_assert!(same(&a.intersect(&b).intersect(&c), &a.intersect(&b.intersect(&c))));
        prop_assert!(same(&a.complement().complement(), &a), "{} vs {}", a.complement().complement(), a);
        prop_assert!(a.intersect(&a.complement()).is_empty());
    }

    #[test]
    fn from_predicate_is_monotone(a in union_strategy(), b in union_strategy()) {
        let wide = a.union(&b);
        let hints: Vec<f64> = wide.pieces().iter().flat_map(|p| [p.lo, p.hi]).collect();
        let r1 = IntervalUnion::from_predicate(|x| a.contains(x), unit(), 201, &hints, 1e-9);
        let r2 = IntervalUnion::from_predicate(|x| wide.contains(x), unit(), 201, &hints, 1e-9);
        prop_assert!(r1.subset_of(&r2, 1e-8), "{r1} not in {r2}");
    }

    #[test]
    fn primitive_invariants(spec in game_strategy(), px in 0.0..1.0f64, py in 0.0..1.0f64) {
        let (s, t) = (spec.leader_space, spec.follower_space);
        let x = s.lo + px * s.width();
        let y = t.lo + py * t.width();
        let f_tol = spec.tol.f_tol;
        prop_assert_eq!(spec.eta(x, x), 0.0);
        let br = spec.best_response_follower(x);
        prop_assert!(spec.v(br, x) >= spec.v(y, x) - f_tol);
        // second differences of eta(., x), scaled to the step
        let step = 1e-3 * s.width();
        for z in linspace(s.lo + step, s.hi - step, 21) {
            let second = spec.eta(z + step, x) - 2.0 * spec.eta(z, x) + spec.eta(z - step, x);
            prop_assert!(second <= f_tol.max(1e-12 * step * step), "second difference {second} at {z}");
        }
        let an = Analysis::new(&spec).unwrap();
        for &c in &an.eq.cournot_points {
            prop_assert!((spec.phi(c) - c).abs() <= 10.0 * spec.tol.x_tol);
        }
        if let [xc] = an.eq.cournot_points.as_slice() {
            let g = spec.gamma(x, *xc);
            let interior = g > s.lo && g < s.hi && (g - x).abs() > spec.tol.x_tol;
            if interior {
                // the root is found to x_tol, so scale the payoff residual by the slope there
                let slope = spec.partials(g, br).u1.abs().max(1.0);
                prop_assert!(spec.eta(g, x).abs() <= 10.0 * f_tol + slope * spec.tol.x_tol, "eta(gamma) = {}", spec.eta(g, x));
            }
        }
    }

    #[test]
    fn contour_nesting(spec in game_strategy(), p in 0.0..1.0f64, q in 0.0..1.0f64) {
        let an = Analysis::new(&spec).unwrap();
        let s = spec.leader_space;
        let (a, b) = (an.u(s.lo + p * s.width()), an.u(s.lo + q * s.width()));
        let (lo, hi) = (a.min(b), a.max(b));
        let band = 10.0 * spec.tol.merge_tol();
        prop_assert!(an.contour(hi, Direction::Ge).subset_of(&an.contour(lo, Direction::Ge), band));
        prop_assert!(an.contour(lo, Direction::Le).subset_of(&an.contour(hi, Direction::Le), band));
    }

    #[test]
    fn finer_is_reflexive_and_transitive(cuts in prop::collection::btree_set(1u32..99, 0..6), extra in prop::collection::btree_set(1u32..99, 0..4)) {
        let lit = |cs: &std::collections::BTreeSet<u32>| {
            let mut ends = vec![0.0];
            ends.extend(cs.iter().map(|&c| c as f64 / 100.0));
            ends.push(1.0);
            let mut parts: Vec<String> = ends.windows(2).map(|w| format!("[{},{})", w[0], w[1])).collect();
            let last = parts.pop().unwrap().replace(')', "]");
            parts.push(last);
            SymbolicCst::parse(&parts.join("|"), unit()).unwrap()
        };
        let k1: std::collections::BTreeSet<u32> = cuts.iter().copied().take(2).collect();
        let k2 = cuts.clone();
        let mut k3 = cuts.clone();
        k3.extend(&extra);
        let (a, b, c) = (lit(&k1), lit(&k2), lit(&k3));
        prop_assert!(is_finer(&a, &a));
        prop_assert!(is_finer(&b, &a) && is_finer(&c, &b));
        prop_assert!(is_finer(&c, &a));
        if k2.len() > k1.len() {
            prop_assert!(!is_finer(&a, &b));
        }
    }
}

#[test]
fn cournot_singleton_below_the_knife_edge() {
    for r in linspace(-0.9, 1.9, 10) {
        for d in linspace(0.0, 0.95, 10) {
            if r >= d + 1.0 - 1e-3 {
                continue;
            }
            let c = cournot_set(&duo(r, d)).unwrap();
            let want = 1.0 / (3.0 - r - d);
            assert_eq!(c.pieces().len(), 1, "({r},{d}) {c}");
            assert!(c.pieces()[0].is_point() && (c.pieces()[0].lo - want).abs() <= 1e-7, "({r},{d}) {c}");
        }
    }
}

#[test]
fn stackelberg_branches() {
    // below r***, between r*** and d+1, above d+1
    for d in [0.0, 0.3, 0.6] {
        let t = thresholds(d);
        for r in [t.r_3star - 0.1, 0.5 * (t.r_3star + d + 1.0), d + 1.2] {
            let p = DuopolyParams::new(r, d).unwrap();
            let cf = DuopolyClosedForms::new(p).unwrap();
            let got = Analysis::new(&p.spec().unwrap()).unwrap().eq.stackelberg;
            assert_eq!(got.points().len(), 1, "({r},{d}) {got}");
            assert!((got.points()[0] - cf.stackelberg).abs() <= 1e-6, "({r},{d}) {got} vs {}", cf.stackelberg);
        }
    }
}

fn corollary_games() -> Vec<GameSpec> {
    vec![duo(0.8, 0.0), duo(1.2, 0.0), duo(0.3, 0.4), duo(1.5, 0.2), coord(0.0), coord(0.01), coord(0.5)]
}

#[test]
fn cournot_contours_bound_the_simple_set() {
    for spec in corollary_games() {
        let an = Analysis::new(&spec).unwrap();
        let simple = an.simply_plausible_set();
        let ip = an.i_plausible_set();
        let s = spec.leader_space;
        let f_tol = spec.tol.f_tol;
        let all_upper = an
            .eq
            .cournot_points
            .iter()
            .map(|&c| an.contour(an.u(c), Direction::Ge))
            .reduce(|a, b| a.intersect(&b))
            .unwrap();
        for x in linspace(s.lo, s.hi, 301) {
            if simple.boundary_distance(x) < 1e-6 || all_upper.boundary_distance(x) < 1e-6 {
                continue;
            }
            if simple.contains(x) {
                assert!(an.eq.cournot_points.iter().any(|&c| an.u(c) <= an.u(x) + f_tol), "{}: {x}", spec.name);
            }
            if all_upper.contains(x) {
                assert!(simple.contains(x), "{}: {x} in every Cournot upper contour", spec.name);
            }
        }
        for &c in &an.eq.cournot_points {
            let upper = an.contour(an.u(c), Direction::Ge);
            assert!(upper.subset_of(&ip, 10.0 * spec.tol.merge_tol()), "{}: {upper} not in {ip}", spec.name);
        }
        if an.eq.cournot_points.len() == 1 {
            let upper = an.contour(an.u(an.eq.cournot_points[0]), Direction::Ge);
            assert!(simple.approx_eq(&ip, 1e-6) && simple.approx_eq(&upper, 1e-6), "{}", spec.name);
        }
    }
}

#[test]
fn p_plausible_actions_have_quasi_simple_witnesses() {
    for (r, d) in [(0.8, 0.0), (0.9, 0.2)] {
        let spec = duo(r, d);
        let an = Analysis::new(&spec).unwrap();
        let p = an.p_plausible().unwrap();
        let o = Oracle::with_landmarks(&spec, 61, &[p.x_hat, p.gamma_hat]).unwrap();
        let h = o.grid().h();
        let mut checked = 0;
        for i in 0..o.grid().len() {
            let x = o.grid().x(i);
            if !p.set.contains(x) || p.set.boundary_distance(x) <= 2.0 * h {
                continue;
            }
            let w = o.certify(i, &[CstFamily::QuasiSimpleWitness], EnumConfig::default());
            assert!(w.is_some(), "({r},{d}) {x} has no quasi-simple witness");
            checked += 1;
        }
        assert!(checked > 10);
    }
}

#[test]
fn halving_the_spacing_keeps_boundaries() {
    let family = Family::Duopoly(DuopolyParams::new(1.2, 0.0).unwrap());
    let runs = |n: usize| {
        let rep = equivalence_campaign(&family, n, 2).unwrap();
        let mut ends = Vec::new();
        let pts = &rep.points;
        for i in 0..pts.len() {
            let prev = i > 0 && pts[i - 1].cutoff_certified;
            let next = i + 1 < pts.len() && pts[i + 1].cutoff_certified;
            if pts[i].cutoff_certified && (!prev || !next) {
                ends.push(pts[i].x);
            }
        }
        (ends, rep.h)
    };
    let (coarse, h) = runs(101);
    let (fine, _) = runs(201);
    assert_eq!(coarse.len(), fine.len(), "{coarse:?} vs {fine:?}");
    for (a, b) in coarse.iter().zip(&fine) {
        assert!((a - b).abs() <= 2.0 * h, "{a} vs {b}");
    }
}

#[test]
fn design_identities_across_regimes() {
    let ds = [0.0, 0.2, 0.45];
    for d in ds {
        let t = thresholds(d);
        let rs = [t.r_2star - 0.1, 0.5 * (t.r_2star + t.r_star), 0.5 * (t.r_star + d + 1.0), d + 1.2];
        for r in rs {
            let p = DuopolyParams::new(r, d).unwrap();
            let cf = DuopolyClosedForms::new(p).unwrap();
            assert_ne!(cf.regime, Regime::KnifeEdge);
            let family = Family::Duopoly(p);
            let spec = family.spec().unwrap();
            let an = Analysis::new(&spec).unwrap();
            let (set, _) = plausible_set(&an, &family, CstClass::All).unwrap();
            let rf = |x: f64| spec.best_response_follower(x);
            let (sum_max, _) = argmax_on(&set, |x| x + rf(x));
            assert!(sum_max.len() == 1 && (sum_max[0] - cf.x_max).abs() <= 1e-5, "({r},{d}) {sum_max:?} vs {}", cf.x_max);
            if r >= 2.0 * d {
                let (prod_min, _) = argmax_on(&set, |x| -x * rf(x));
                assert!(prod_min.iter().any(|x| (x - cf.x_max).abs() <= 1e-5), "({r},{d}) {prod_min:?}");
            }
            let cs = |x: f64| commitment_limits::design::consumer_surplus(x, rf(x), d);
            let w = |x: f64| commitment_limits::design::welfare(&spec, x, rf(x), d);
            let (a, _) = argmax_on(&set, cs);
            let (b, _) = argmax_on(&set, w);
            assert_eq!(a.len(), b.len());
            assert!(a.iter().zip(&b).all(|(x, y)| (x - y).abs() <= 1e-6), "({r},{d}) {a:?} vs {b:?}");
        }
    }
}

#[test]
fn relative_plausibility_on_the_whole_space_matches_the_sets() {
    for spec in [duo(0.8, 0.0), duo(1.2, 0.0), coord(0.0)] {
        let an = Analysis::new(&spec).unwrap();
        let s = spec.leader_space;
        let all = Piece::closed(s.lo, s.hi);
        let simple = an.simply_plausible_set();
        let ip = an.i_plausible_set();
        for x in linspace(s.lo, s.hi, 101) {
            if simple.boundary_distance(x) > 1e-6 || simple.contains(x) {
                assert_eq!(simply_plausible_wrt(&an, x, &all), simple.contains(x), "{} simple at {x}", spec.name);
            }
            if ip.boundary_distance(x) > 1e-6 || ip.contains(x) {
                assert_eq!(i_plausible_wrt(&an, x, &all), ip.contains(x), "{} I at {x}", spec.name);
            }
        }
    }
}

#[test]
fn duopoly_payoffs_are_symmetric() {
    for (r, d) in [(0.3, 0.1), (1.4, 0.5), (-0.5, 0.9)] {
        let spec = duo(r, d);
        for x in linspace(0.0, spec.leader_space.hi, 7) {
            for y in linspace(0.0, spec.follower_space.hi, 7) {
                assert_eq!(spec.u(x, y), spec.v(x, y));
            }
        }
    }
}
