//! Symbolic commitment structures and the CST literal syntax.
//!
//! A literal lists elements separated by `|`. Each element is a union of
//! intervals joined by `u`: `[a,b]`, `(a,b]`, `[a,b)`, `(a,b)` or `{a}`.
//! Numbers may be decimals or fractions such as `5/3`. A lone `*` element
//! adds every uncovered action as its own singleton. The words `cournot`
//! and `stackelberg` name the two extreme structures.
//!
//! ```
//! use commitment_limits::cst::SymbolicCst;
//! use commitment_limits::game::ActionSpace;
//!
//! let space = ActionSpace::new(0.0, 5.0 / 3.0).unwrap();
//! let k = SymbolicCst::parse("[0,1/8]u(1/3,1.6667]|(1/8,1/3]", space).unwrap();
//! assert_eq!(k.elements.len(), 2);
//! assert!(!k.is_simple());
//! ```

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::game::ActionSpace;
use crate::interval::{IntervalUnion, Piece};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SymbolicCst {
    pub elements: Vec<IntervalUnion>,
    /// Every action outside the listed elements is a singleton element.
    pub singleton_fill: bool,
}

/// Literal endpoints closer than this fraction of the space width to a
/// bound are snapped onto it, so `1.6667` stands for `5/3`.
pub const SNAP_FRACTION: f64 = 1e-4;

impl SymbolicCst {
    pub fn new(elements: Vec<IntervalUnion>, singleton_fill: bool) -> Result<Self> {
        let Some(first) = elements.first() else {
            if singleton_fill {
                return Err(Error::Parse("singleton fill needs a leader space; use stackelberg".into()));
            }
            return Err(Error::NotCovering("no elements".into()));
        };
        let space = first.space();
        if elements.iter().any(|e| e.is_empty()) {
            return Err(Error::Parse("empty element".into()));
        }
        if elements.iter().any(|e| e.space() != space) {
            return Err(Error::Parse("elements live in different spaces".into()));
        }
        let k = Self { elements, singleton_fill };
        if !singleton_fill {
            let gap = k.uncovered();
            if !gap.is_empty() {
                return Err(Error::NotCovering(format!("actions {gap} belong to no element")));
            }
        }
        Ok(k)
    }

    /// The structure `{X}`: no commitment.
    pub fn cournot(space: ActionSpace) -> Self {
        Self { elements: vec![IntervalUnion::full(space)], singleton_fill: false }
    }

    /// All singletons: full commitment.
    pub fn stackelberg(space: ActionSpace) -> Self {
        Self { elements: Vec::new(), singleton_fill: true }.with_space(space)
    }

    // the lowest action is listed so that the space stays reachable
    fn with_space(mut self, space: ActionSpace) -> Self {
        if self.elements.is_empty() {
            self.elements.push(IntervalUnion::point(space, space.lo));
        }
        self
    }

    pub fn space(&self) -> ActionSpace {
        self.elements[0].space()
    }

    pub fn covered(&self) -> IntervalUnion {
        self.elements.iter().fold(IntervalUnion::empty(self.space()), |acc, e| acc.union(e))
    }

    pub fn uncovered(&self) -> IntervalUnion {
        self.covered().complement()
    }

    /// Every finite endpoint appearing in the structure.
    pub fn endpoints(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self.elements.iter().flat_map(|e| e.pieces().iter().flat_map(|p| [p.lo, p.hi])).collect();
        v.sort_by(f64::total_cmp);
        v.dedup();
        v
    }

    /// Interval partition: each element one interval, elements disjoint.
    pub fn is_simple(&self) -> bool {
        let single = self.elements.iter().all(|e| e.pieces().len() == 1);
        let disjoint = self
            .elements
            .iter()
            .enumerate()
            .all(|(i, a)| self.elements[i + 1..].iter().all(|b| a.intersect(b).is_empty()));
        single && disjoint
    }

    /// Index of an element containing `x`, `None` when `x` is a filled
    /// singleton.
    pub fn element_of(&self, x: f64) -> Option<usize> {
        self.elements.iter().position(|e| e.contains(x))
    }

    pub fn parse(literal: &str, space: ActionSpace) -> Result<Self> {
        let text = literal.trim();
        match text.to_ascii_lowercase().as_str() {
            "cournot" => return Ok(Self::cournot(space)),
            "stackelberg" | "*" => return Ok(Self::stackelberg(space)),
            _ => {}
        }
        let mut elements = Vec::new();
        let mut fill = false;
        for part in text.split('|') {
            let part = part.trim();
            if part == "*" {
                fill = true;
                continue;
            }
            elements.push(parse_element(part, space)?);
        }
        if elements.is_empty() {
            return Ok(Self::stackelberg(space));
        }
        Self::new(elements, fill)
    }
}

fn parse_element(text: &str, space: ActionSpace) -> Result<IntervalUnion> {
    if text.is_empty() {
        return Err(Error::Parse("empty element".into()));
    }
    let mut pieces = Vec::new();
    for raw in split_union(text) {
        pieces.push(parse_piece(raw.trim(), space)?);
    }
    let set = IntervalUnion::from_pieces(space, pieces);
    if set.is_empty() {
        return Err(Error::Parse(format!("element `{text}` is empty")));
    }
    Ok(set)
}

/// Splits on `u` outside brackets.
fn split_union(text: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let (mut depth, mut start) = (0i32, 0usize);
    for (i, c) in text.char_indices() {
        match c {
            '[' | '(' | '{' => depth += 1,
            ']' | ')' | '}' => depth -= 1,
            'u' | 'U' if depth == 0 => {
                out.push(&text[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&text[start..]);
    out
}

fn parse_piece(s: &str, space: ActionSpace) -> Result<Piece> {
    let bad = || Error::Parse(format!("cannot read interval `{s}`"));
    if let Some(inner) = s.strip_prefix('{').and_then(|t| t.strip_suffix('}')) {
        let x = snap(parse_number(inner)?, space);
        return Ok(Piece::point(x));
    }
    let lo_closed = match s.chars().next() {
        Some('[') => true,
        Some('(') => false,
        _ => return Err(bad()),
    };
    let hi_closed = match s.chars().last() {
        Some(']') => true,
        Some(')') => false,
        _ => return Err(bad()),
    };
    let inner = &s[1..s.len() - 1];
    let (a, b) = inner.split_once(',').ok_or_else(bad)?;
    let (lo, hi) = (snap(parse_number(a)?, space), snap(parse_number(b)?, space));
    if lo > hi {
        return Err(Error::Parse(format!("interval `{s}` has lo > hi")));
    }
    let p = Piece::new(lo, hi, lo_closed, hi_closed);
    if p.is_empty() {
        return Err(Error::Parse(format!("interval `{s}` is empty")));
    }
    Ok(p)
}

pub fn parse_number(s: &str) -> Result<f64> {
    let s = s.trim();
    let bad = || Error::Parse(format!("bad number `{s}`"));
    let v = match s.split_once('/') {
        Some((p, q)) => {
            let p: f64 = p.trim().parse().map_err(|_| bad())?;
            let q: f64 = q.trim().parse().map_err(|_| bad())?;
            if q == 0.0 {
                return Err(bad());
            }
            p / q
        }
        None => s.parse().map_err(|_| bad())?,
    };
    if v.is_finite() { Ok(v) } else { Err(bad()) }
}

fn snap(x: f64, space: ActionSpace) -> f64 {
    let eps = SNAP_FRACTION * space.width();
    if (x - space.lo).abs() <= eps {
        space.lo
    } else if (x - space.hi).abs() <= eps {
        space.hi
    } else {
        x
    }
}

impl fmt::Display for SymbolicCst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.elements.iter().map(|e| e.to_string()).collect();
        if self.singleton_fill {
            parts.push("*".into());
        }
        write!(f, "{}", parts.join(" | "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn duo() -> ActionSpace {
        ActionSpace::new(0.0, 5.0 / 3.0).unwrap()
    }

    #[test]
    fn parses_two_element_cover() {
        let k = SymbolicCst::parse("[0,1.5)|[1.5,1.6667]", duo()).unwrap();
        assert!(k.is_simple());
        assert_eq!(k.elements[1].max().unwrap(), 5.0 / 3.0);
        assert!(!k.elements[0].contains(1.5));
    }

    #[test]
    fn gap_is_rejected_without_fill() {
        let e = SymbolicCst::parse("[0,1)|(1,1.6667]", duo()).unwrap_err();
        assert!(matches!(e, Error::NotCovering(_)));
        let k = SymbolicCst::parse("[0,1)|(1,1.6667]|*", duo()).unwrap();
        assert_eq!(k.uncovered().points(), vec![1.0]);
    }

    #[test]
    fn singletons_and_fractions() {
        let k = SymbolicCst::parse("{0}|(0,1)|{1}", ActionSpace::new(0.0, 1.0).unwrap()).unwrap();
        assert!(k.is_simple());
        assert_eq!(k.elements[0].points(), vec![0.0]);
        assert_eq!(parse_number(" 5/18 ").unwrap(), 5.0 / 18.0);
        assert!(parse_number("1/0").is_err());
    }

    #[test]
    fn overlap_is_not_simple() {
        let k = SymbolicCst::parse("[0,0.5]|[0.4,1]", ActionSpace::new(0.0, 1.0).unwrap()).unwrap();
        assert!(!k.is_simple());
    }

    #[test]
    fn malformed_literals() {
        for s in ["[0,1", "0,1]", "[1,0]", "(0.5,0.5)", "[a,1]", "", "[0,1]|"] {
            assert!(SymbolicCst::parse(s, ActionSpace::new(0.0, 1.0).unwrap()).is_err(), "{s}");
        }
    }
}
