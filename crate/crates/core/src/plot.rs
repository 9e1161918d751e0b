//! Deterministic SVG plots of `U`, `phi` and `gamma` with the plausible sets
//! shaded along the action axis.

use std::fmt::Write as _;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::interval::{fmt_num, IntervalUnion};
use crate::optimize::linspace;
use crate::plausibility::Analysis;
use crate::report::unique_cournot;

const W: f64 = 640.0;
const H: f64 = 440.0;
const LEFT: f64 = 64.0;
const RIGHT: f64 = 24.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 96.0;
const SAMPLES: usize = 401;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Panel {
    U,
    Phi,
    Gamma,
}

impl Panel {
    pub const ALL: [Panel; 3] = [Panel::U, Panel::Phi, Panel::Gamma];

    pub fn name(self) -> &'static str {
        match self {
            Panel::U => "u",
            Panel::Phi => "phi",
            Panel::Gamma => "gamma",
        }
    }
}

impl FromStr for Panel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Panel::ALL
            .into_iter()
            .find(|p| p.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::Parse(format!("unknown panel `{s}`")))
    }
}

struct Frame {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
}

impl Frame {
    fn new(x0: f64, x1: f64, ys: impl Iterator<Item = f64>) -> Self {
        let (mut y0, mut y1) = ys.filter(|y| y.is_finite()).fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), y| (a.min(y), b.max(y)));
        if !y0.is_finite() {
            (y0, y1) = (0.0, 1.0);
        }
        let pad = 0.05 * (y1 - y0).max(1e-9);
        Self { x0, x1, y0: y0 - pad, y1: y1 + pad }
    }

    fn px(&self, x: f64) -> f64 {
        LEFT + (x - self.x0) / (self.x1 - self.x0) * (W - LEFT - RIGHT)
    }

    fn py(&self, y: f64) -> f64 {
        TOP + (self.y1 - y) / (self.y1 - self.y0) * (H - TOP - BOTTOM)
    }
}

struct Svg {
    out: String,
}

impl Svg {
    fn new(title: &str) -> Self {
        let mut out = String::new();
        let _ = writeln!(out, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="11">"#);
        let _ = writeln!(out, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
        let _ = writeln!(out, r#"<text x="{:.1}" y="22" text-anchor="middle" font-size="14">{}</text>"#, W / 2.0, escape(title));
        Self { out }
    }

    fn axes(&mut self, f: &Frame) {
        let (l, r, t, b) = (LEFT, W - RIGHT, TOP, H - BOTTOM);
        let _ = writeln!(self.out, r#"<rect x="{l}" y="{t}" width="{:.1}" height="{:.1}" fill="none" stroke="black"/>"#, r - l, b - t);
        for x in linspace(f.x0, f.x1, 5) {
            let px = f.px(x);
            let _ = writeln!(self.out, r#"<line x1="{px:.2}" y1="{b}" x2="{px:.2}" y2="{:.1}" stroke="black"/>"#, b + 4.0);
            let _ = writeln!(self.out, r#"<text x="{px:.2}" y="{:.1}" text-anchor="middle">{}</text>"#, b + 16.0, tick(x));
        }
        for y in linspace(f.y0, f.y1, 5) {
            let py = f.py(y);
            let _ = writeln!(self.out, r#"<line x1="{:.1}" y1="{py:.2}" x2="{l}" y2="{py:.2}" stroke="black"/>"#, l - 4.0);
            let _ = writeln!(self.out, r#"<text x="{:.1}" y="{:.2}" text-anchor="end">{}</text>"#, l - 6.0, py + 4.0, tick(y));
        }
    }

    fn curve(&mut self, f: &Frame, pts: &[(f64, f64)], stroke: &str, dash: bool) {
        let mut d = String::new();
        let mut pen_up = true;
        for &(x, y) in pts {
            if !y.is_finite() {
                pen_up = true;
                continue;
            }
            let _ = write!(d, "{}{:.2},{:.2} ", if pen_up { "M" } else { "L" }, f.px(x), f.py(y));
            pen_up = false;
        }
        let dash = if dash { r#" stroke-dasharray="5,4""# } else { "" };
        let _ = writeln!(self.out, r#"<path d="{}" fill="none" stroke="{stroke}" stroke-width="1.6"{dash}/>"#, d.trim_end());
    }

    /// A labelled strip under the plot area marking `set`.
    fn band(&mut self, f: &Frame, row: usize, label: &str, set: &IntervalUnion, fill: &str) {
        let y = H - BOTTOM + 26.0 + 16.0 * row as f64;
        let _ = writeln!(self.out, r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{}</text>"#, LEFT - 6.0, y + 9.0, escape(label));
        for p in set.pieces() {
            let (a, b) = (f.px(p.lo), f.px(p.hi));
            let w = (b - a).max(3.0);
            let _ = writeln!(self.out, r#"<rect x="{:.2}" y="{y:.1}" width="{w:.2}" height="10" fill="{fill}"/>"#, a - if b - a < 3.0 { 1.5 } else { 0.0 });
        }
    }

    fn marker(&mut self, f: &Frame, x: f64, y: f64, label: &str) {
        let (px, py) = (f.px(x), f.py(y));
        let _ = writeln!(self.out, r#"<circle cx="{px:.2}" cy="{py:.2}" r="3.5" fill="black"/>"#);
        let _ = writeln!(self.out, r#"<text x="{:.2}" y="{:.2}">{}</text>"#, px + 5.0, py - 6.0, escape(label));
    }

    fn note(&mut self, text: &str) {
        let _ = writeln!(self.out, r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#, W / 2.0, TOP + 20.0, escape(text));
    }

    fn finish(mut self) -> String {
        self.out.push_str("</svg>\n");
        self.out
    }
}

fn tick(x: f64) -> String {
    let s = format!("{x:.3}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" { "0".into() } else { s.into() }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn sample(an: &Analysis, g: impl Fn(f64) -> f64) -> Vec<(f64, f64)> {
    let s = an.spec.leader_space;
    let mut xs = linspace(s.lo, s.hi, SAMPLES);
    xs.extend(an.hints.iter().copied());
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    xs.into_iter().map(|x| (x, g(x))).collect()
}

fn points_of(set: &IntervalUnion) -> Vec<f64> {
    let mut v: Vec<f64> = set.pieces().iter().flat_map(|p| if p.is_point() { vec![p.lo] } else { vec![p.lo, p.hi] }).collect();
    v.dedup();
    v
}

fn shade_sets(svg: &mut Svg, f: &Frame, an: &Analysis) {
    svg.band(f, 0, "simple", &an.simply_plausible_set(), "#4477aa");
    svg.band(f, 1, "I", &an.i_plausible_set(), "#66ccee");
    if let Ok(p) = an.p_plausible() {
        svg.band(f, 2, "P", &p.set, "#228833");
    }
}

/// The SVG document for one panel.
pub fn render(an: &Analysis, panel: Panel) -> String {
    let s = an.spec.leader_space;
    let name = &an.spec.name;
    match panel {
        Panel::U => {
            let pts = sample(an, |x| an.u(x));
            let f = Frame::new(s.lo, s.hi, pts.iter().map(|p| p.1));
            let mut svg = Svg::new(&format!("U(x) for {name}"));
            svg.axes(&f);
            svg.curve(&f, &pts, "#cc3311", false);
            for x in points_of(&an.eq.stackelberg) {
                svg.marker(&f, x, an.u(x), &format!("max {}", fmt_num(x)));
            }
            shade_sets(&mut svg, &f, an);
            svg.finish()
        }
        Panel::Phi => {
            let pts = sample(an, |x| an.spec.phi(x));
            let diag: Vec<(f64, f64)> = vec![(s.lo, s.lo), (s.hi, s.hi)];
            let f = Frame::new(s.lo, s.hi, pts.iter().map(|p| p.1).chain([s.lo, s.hi]));
            let mut svg = Svg::new(&format!("phi(x) and the 45-degree line for {name}"));
            svg.axes(&f);
            svg.curve(&f, &diag, "#777777", true);
            svg.curve(&f, &pts, "#0077bb", false);
            for x in points_of(&an.eq.cournot) {
                svg.marker(&f, x, x, &format!("fixed {}", fmt_num(x)));
            }
            shade_sets(&mut svg, &f, an);
            svg.finish()
        }
        Panel::Gamma => {
            let mut svg;
            match (unique_cournot(an), an.p_plausible()) {
                (Some(xc), Ok(p)) => {
                    let pts = sample(an, |x| an.spec.gamma(x, xc));
                    let f = Frame::new(s.lo, s.hi, pts.iter().map(|p| p.1).chain([s.lo, s.hi]));
                    svg = Svg::new(&format!("gamma(x) for {name}"));
                    svg.axes(&f);
                    svg.curve(&f, &pts, "#ee7733", false);
                    let mut img: Vec<(f64, f64)> = Vec::new();
                    for q in p.s_set.pieces() {
                        let xs = if q.is_point() { vec![q.lo] } else { linspace(q.lo, q.hi, SAMPLES) };
                        img.extend(xs.into_iter().map(|x| (x, an.spec.gamma(x, xc))));
                    }
                    if let Some(&(x, g)) = img.iter().min_by(|a, b| a.1.total_cmp(&b.1)) {
                        svg.marker(&f, x, g, &format!("min gamma(S) {}", fmt_num(g)));
                    }
                    svg.marker(&f, p.x_hat, p.gamma_hat, &format!("gamma(x hat) {}", fmt_num(p.gamma_hat)));
                    svg.band(&f, 0, "S", &p.s_set, "#ee7733");
                    svg.band(&f, 1, "P", &p.set, "#228833");
                }
                _ => {
                    let f = Frame::new(s.lo, s.hi, [s.lo, s.hi].into_iter());
                    svg = Svg::new(&format!("gamma(x) for {name}"));
                    svg.axes(&f);
                    svg.note("gamma is not characterized: RC1-RC3 fail");
                }
            }
            svg.finish()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::DuopolyParams;

    #[test]
    fn same_input_same_bytes() {
        let an = Analysis::new(&DuopolyParams::new(1.2, 0.0).unwrap().spec().unwrap()).unwrap();
        let a = render(&an, Panel::Phi);
        assert_eq!(a, render(&an, Panel::Phi));
        assert!(a.starts_with("<svg") && a.ends_with("</svg>\n"));
        for label in ["fixed 0<", "fixed 0.555556<", "fixed 1.25<"] {
            assert!(a.contains(label), "{label}");
        }
        assert!(render(&an, Panel::Gamma).contains("not characterized"));
    }
}
