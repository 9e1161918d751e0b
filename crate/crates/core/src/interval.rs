//! Finite unions of intervals of the leader's action space.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::game::ActionSpace;
use crate::optimize::{bisect_boundary, linspace};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Piece {
    pub lo: f64,
    pub hi: f64,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

impl Piece {
    pub fn new(lo: f64, hi: f64, lo_closed: bool, hi_closed: bool) -> Self {
        Self { lo, hi, lo_closed, hi_closed }
    }

    pub fn closed(lo: f64, hi: f64) -> Self {
        Self::new(lo, hi, true, true)
    }

    pub fn open(lo: f64, hi: f64) -> Self {
        Self::new(lo, hi, false, false)
    }

    pub fn point(x: f64) -> Self {
        Self::closed(x, x)
    }

    pub fn is_empty(&self) -> bool {
        !(self.lo < self.hi || (self.lo == self.hi && self.lo_closed && self.hi_closed))
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, x: f64) -> bool {
        let above = if self.lo_closed { x >= self.lo } else { x > self.lo };
        let below = if self.hi_closed { x <= self.hi } else { x < self.hi };
        above && below
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

/// A finite union of disjoint intervals, sorted, inside an ambient space.
#[derive(Clone, Debug, PartialEq)]
pub struct IntervalUnion {
    space: ActionSpace,
    pieces: Vec<Piece>,
}

/// Default gap below which touching pieces are merged.
pub const MERGE_TOL: f64 = 1e-8;

impl Serialize for IntervalUnion {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(&self.pieces)
    }
}

impl IntervalUnion {
    pub fn empty(space: ActionSpace) -> Self {
        Self { space, pieces: Vec::new() }
    }

    pub fn full(space: ActionSpace) -> Self {
        Self { space, pieces: vec![Piece::closed(space.lo, space.hi)] }
    }

    pub fn point(space: ActionSpace, x: f64) -> Self {
        Self::from_pieces(space, vec![Piece::point(x)])
    }

    pub fn closed(space: ActionSpace, lo: f64, hi: f64) -> Self {
        Self::from_pieces(space, vec![Piece::closed(lo, hi)])
    }

    /// Normalizes arbitrary pieces: clips to the space, drops empties, sorts
    /// and merges pieces that overlap, touch at a closed end, or sit within
    /// `MERGE_TOL` of each other.
    pub fn from_pieces(space: ActionSpace, pieces: Vec<Piece>) -> Self {
        Self::normalized(space, pieces, MERGE_TOL)
    }

    fn normalized(space: ActionSpace, pieces: Vec<Piece>, gap: f64) -> Self {
        let mut ps: Vec<Piece> = pieces
            .into_iter()
            .filter(|p| p.lo.is_finite() && p.hi.is_finite())
            .map(|mut p| {
                if p.lo < space.lo {
                    p.lo = space.lo;
                    p.lo_closed = true;
                }
                if p.hi > space.hi {
                    p.hi = space.hi;
                    p.hi_closed = true;
                }
                p
            })
            .filter(|p| !p.is_empty())
            .collect();
        ps.sort_by(|a, b| a.lo.total_cmp(&b.lo).then(b.lo_closed.cmp(&a.lo_closed)));
        let mut out: Vec<Piece> = Vec::with_capacity(ps.len());
        for p in ps {
            if let Some(cur) = out.last_mut() {
                let joins = p.lo < cur.hi
                    || (p.lo == cur.hi && (cur.hi_closed || p.lo_closed))
                    || (p.lo > cur.hi && p.lo - cur.hi <= gap);
                if joins {
                    if p.hi > cur.hi {
                        cur.hi = p.hi;
                        cur.hi_closed = p.hi_closed;
                    } else if p.hi == cur.hi {
                        cur.hi_closed |= p.hi_closed;
                    }
                    continue;
                }
            }
            out.push(p);
        }
        Self { space, pieces: out }
    }

    pub fn space(&self) -> ActionSpace {
        self.space
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    pub fn contains(&self, x: f64) -> bool {
        self.pieces.iter().any(|p| p.contains(x))
    }

    /// Distance from `x` to the closure of the set (infinite when empty).
    pub fn distance(&self, x: f64) -> f64 {
        self.pieces
            .iter()
            .map(|p| if x < p.lo { p.lo - x } else if x > p.hi { x - p.hi } else { 0.0 })
            .fold(f64::INFINITY, f64::min)
    }

    /// Distance from `x` to the nearest endpoint of any piece.
    pub fn boundary_distance(&self, x: f64) -> f64 {
        self.pieces
            .iter()
            .flat_map(|p| [p.lo, p.hi])
            .map(|e| (e - x).abs())
            .fold(f64::INFINITY, f64::min)
    }

    pub fn contains_approx(&self, x: f64, tol: f64) -> bool {
        self.distance(x) <= tol
    }

    pub fn min(&self) -> Result<f64> {
        self.pieces.first().map(|p| p.lo).ok_or(Error::EmptySet)
    }

    pub fn max(&self) -> Result<f64> {
        self.pieces.last().map(|p| p.hi).ok_or(Error::EmptySet)
    }

    pub fn measure(&self) -> f64 {
        self.pieces.iter().map(Piece::width).sum()
    }

    /// Isolated points of the set.
    pub fn points(&self) -> Vec<f64> {
        self.pieces.iter().filter(|p| p.is_point()).map(|p| p.lo).collect()
    }

    pub fn union(&self, other: &Self) -> Self {
        let mut ps = self.pieces.clone();
        ps.extend_from_slice(&other.pieces);
        Self::normalized(self.space, ps, 0.0)
    }

    pub fn intersect(&self, other: &Self) -> Self {
        let mut out = Vec::new();
        for a in &self.pieces {
            for b in &other.pieces {
                let (lo, lo_closed) = if a.lo > b.lo {
                    (a.lo, a.lo_closed)
                } else if b.lo > a.lo {
                    (b.lo, b.lo_closed)
                } else {
                    (a.lo, a.lo_closed && b.lo_closed)
                };
                let (hi, hi_closed) = if a.hi < b.hi {
                    (a.hi, a.hi_closed)
                } else if b.hi < a.hi {
                    (b.hi, b.hi_closed)
                } else {
                    (a.hi, a.hi_closed && b.hi_closed)
                };
                let p = Piece::new(lo, hi, lo_closed, hi_closed);
                if !p.is_empty() {
                    out.push(p);
                }
            }
        }
        Self::normalized(self.space, out, 0.0)
    }

    pub fn complement(&self) -> Self {
        let mut out = Vec::new();
        let (mut cursor, mut closed) = (self.space.lo, true);
        for p in &self.pieces {
            let gap = Piece::new(cursor, p.lo, closed, !p.lo_closed);
            if !gap.is_empty() {
                out.push(gap);
            }
            cursor = p.hi;
            closed = !p.hi_closed;
        }
        let tail = Piece::new(cursor, self.space.hi, closed, true);
        if !tail.is_empty() {
            out.push(tail);
        }
        Self { space: self.space, pieces: out }
    }

    pub fn difference(&self, other: &Self) -> Self {
        self.intersect(&other.complement())
    }

    /// Same number of pieces with endpoints within `tol`; openness ignored.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.pieces.len() == other.pieces.len()
            && self
                .pieces
                .iter()
                .zip(&other.pieces)
                .all(|(a, b)| (a.lo - b.lo).abs() <= tol && (a.hi - b.hi).abs() <= tol)
    }

    /// Largest endpoint mismatch against `other`, infinite when the piece
    /// counts differ.
    pub fn endpoint_gap(&self, other: &Self) -> f64 {
        if self.pieces.len() != other.pieces.len() {
            return f64::INFINITY;
        }
        self.pieces
            .iter()
            .zip(&other.pieces)
            .map(|(a, b)| (a.lo - b.lo).abs().max((a.hi - b.hi).abs()))
            .fold(0.0, f64::max)
    }

    /// Every piece of `self` lies inside `other` widened by `tol`.
    pub fn subset_of(&self, other: &Self, tol: f64) -> bool {
        self.pieces.iter().all(|a| {
            other.pieces.iter().any(|b| b.lo - tol <= a.lo && a.hi <= b.hi + tol)
        })
    }

    /// Set inclusion with endpoint tolerance `tol`; openness is respected at
    /// endpoints that agree within `tol`.
    pub fn is_subset(&self, other: &Self, tol: f64) -> bool {
        self.pieces.iter().all(|a| {
            other.pieces.iter().any(|b| {
                let lo_ok = b.lo < a.lo - tol || ((b.lo - a.lo).abs() <= tol && (b.lo_closed || !a.lo_closed));
                let hi_ok = b.hi > a.hi + tol || ((b.hi - a.hi).abs() <= tol && (b.hi_closed || !a.hi_closed));
                lo_ok && hi_ok
            })
        })
    }

    /// Equality up to `tol` on endpoints, openness included.
    pub fn same_set(&self, other: &Self, tol: f64) -> bool {
        self.is_subset(other, tol) && other.is_subset(self, tol)
    }

    /// Samples `pred` on a uniform grid plus `hints`, bisects every change of
    /// truth value to `x_tol` keeping the true side, and merges. Pieces are
    /// closed. Short pieces around a hint collapse onto the hint, and
    /// endpoints within `1000 x_tol` of a hint snap to it.
    pub fn from_predicate<P>(pred: P, space: ActionSpace, grid_n: usize, hints: &[f64], x_tol: f64) -> Self
    where
        P: Fn(f64) -> bool + Sync,
    {
        let mut xs = linspace(space.lo, space.hi, grid_n.max(2));
        xs.extend(hints.iter().copied().filter(|h| space.contains(*h)));
        xs.sort_by(f64::total_cmp);
        xs.dedup();
        let truth: Vec<bool> = xs.par_iter().map(|&x| pred(x)).collect();
        let mut pieces = Vec::new();
        let mut i = 0;
        while i < xs.len() {
            if !truth[i] {
                i += 1;
                continue;
            }
            let start = i;
            while i + 1 < xs.len() && truth[i + 1] {
                i += 1;
            }
            let lo = if start == 0 { xs[0] } else { bisect_boundary(&pred, xs[start], xs[start - 1], x_tol) };
            let hi = if i + 1 == xs.len() { xs[i] } else { bisect_boundary(&pred, xs[i], xs[i + 1], x_tol) };
            pieces.push(Piece::closed(lo, hi));
            i += 1;
        }
        let snap_width = 1000.0 * x_tol;
        let pieces = pieces
            .into_iter()
            .map(|mut p| {
                if p.width() <= snap_width {
                    if let Some(h) = hints.iter().find(|&&h| p.lo - x_tol <= h && h <= p.hi + x_tol) {
                        return Piece::point(*h);
                    }
                }
                let near = |e: f64| {
                    hints
                        .iter()
                        .copied()
                        .filter(|h| (e - h).abs() <= 1000.0 * x_tol)
                        .min_by(|a, b| (e - a).abs().total_cmp(&(e - b).abs()))
                };
                if let Some(h) = near(p.lo).filter(|&h| h <= p.hi) {
                    p.lo = h;
                }
                if let Some(h) = near(p.hi).filter(|&h| h >= p.lo) {
                    p.hi = h;
                }
                p
            })
            .collect();
        Self::normalized(space, pieces, 10.0 * x_tol)
    }
}

pub(crate) fn fmt_num(x: f64) -> String {
    let s = format!("{x:.6}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" { "0".into() } else { s.into() }
}

/// Prints in the CST literal syntax, e.g. `{0} u [0.294118,0.555556]`.
impl fmt::Display for IntervalUnion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.pieces.is_empty() {
            return write!(f, "{{}}");
        }
        for (i, p) in self.pieces.iter().enumerate() {
            if i > 0 {
                write!(f, " u ")?;
            }
            if p.is_point() {
                write!(f, "{{{}}}", fmt_num(p.lo))?;
            } else {
                let l = if p.lo_closed { '[' } else { '(' };
                let r = if p.hi_closed { ']' } else { ')' };
                write!(f, "{l}{},{}{r}", fmt_num(p.lo), fmt_num(p.hi))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sp() -> ActionSpace {
        ActionSpace::new(0.0, 2.5).unwrap()
    }

    #[test]
    fn always_true_gives_whole_space() {
        let s = IntervalUnion::from_predicate(|_| true, sp(), 11, &[], 1e-9);
        assert_eq!(s, IntervalUnion::full(sp()));
    }

    #[test]
    fn disjoint_pieces_do_not_intersect() {
        let a = IntervalUnion::closed(sp(), 5.0 / 17.0, 5.0 / 9.0);
        let b = IntervalUnion::closed(sp(), 1.25, 2.5);
        assert!(a.intersect(&b).is_empty());
    }

    #[test]
    fn membership_respects_bounds() {
        let s = IntervalUnion::from_pieces(sp(), vec![Piece::point(0.0), Piece::closed(5.0 / 17.0, 5.0 / 9.0)]);
        assert!(!s.contains(0.25));
        assert!(s.contains(0.0));
        assert!(s.contains(0.3));
    }

    #[test]
    fn complement_of_point_keeps_open_gap() {
        let s = IntervalUnion::point(sp(), 1.0);
        let c = s.complement();
        assert_eq!(c.pieces().len(), 2);
        assert!(!c.contains(1.0));
        assert_eq!(c.complement(), s);
        assert_eq!(s.union(&c), IntervalUnion::full(sp()));
    }

    #[test]
    fn open_touching_pieces_stay_apart() {
        let s = IntervalUnion::from_pieces(sp(), vec![Piece::open(0.0, 1.0), Piece::open(1.0, 2.0)]);
        assert_eq!(s.pieces().len(), 2);
        let t = IntervalUnion::from_pieces(sp(), vec![Piece::new(0.0, 1.0, true, true), Piece::open(1.0, 2.0)]);
        assert_eq!(t.pieces().len(), 1);
    }

    #[test]
    fn min_max_of_empty_fail() {
        assert!(matches!(IntervalUnion::empty(sp()).min(), Err(Error::EmptySet)));
        assert!(matches!(IntervalUnion::empty(sp()).max(), Err(Error::EmptySet)));
    }

    #[test]
    fn predicate_with_hint_keeps_isolated_point() {
        let pred = |x: f64| x == 0.7 || (1.0..=2.0).contains(&x);
        let s = IntervalUnion::from_predicate(pred, sp(), 11, &[0.7], 1e-9);
        assert_eq!(s.pieces().len(), 2);
        assert_eq!(s.pieces()[0], Piece::point(0.7));
        assert!((s.pieces()[1].lo - 1.0).abs() < 1e-9);
    }

    #[test]
    fn display_uses_literal_syntax() {
        let s = IntervalUnion::from_pieces(sp(), vec![Piece::point(0.0), Piece::new(0.5, 1.0, false, true)]);
        assert_eq!(s.to_string(), "{0} u (0.5,1]");
    }

    #[test]
    fn serializes_as_piece_array() {
        let s = IntervalUnion::closed(sp(), 0.5, 1.0);
        let j = serde_json::to_string(&s).unwrap();
        assert_eq!(j, r#"[{"lo":0.5,"hi":1.0,"lo_closed":true,"hi_closed":true}]"#);
    }
}
