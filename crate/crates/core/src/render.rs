//! Text and LaTeX rendering of classes.
//!
//! A tree is drawn as nested brackets rooted at the vertex carrying the
//! least marking: `g0(1)[g1][g1]` is a genus-0 vertex with point 1 and two
//! genus-1 neighbours. Inside a vertex, `ψ` at a marking is `ψ_k`, at the
//! half-edge toward the parent `ψ_↑`, toward the i-th child `ψ_↓i`. A vertex
//! with a single leg drops the subscript.

use std::fmt;

use crate::rational::Rational;
use crate::strata::{DecoratedStratum, DecorationFactor, Leg, TautClass};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Style {
    Text,
    Latex,
}

fn superscript(n: u32) -> String {
    const DIGITS: [char; 10] = ['⁰', '¹', '²', '³', '⁴', '⁵', '⁶', '⁷', '⁸', '⁹'];
    n.to_string().chars().map(|c| DIGITS[c.to_digit(10).unwrap() as usize]).collect()
}

fn power(base: &str, e: u32, style: Style) -> String {
    match (e, style) {
        (0, _) => String::new(),
        (1, _) => base.to_string(),
        (e, Style::Text) => format!("{base}{}", superscript(e)),
        (e, Style::Latex) => format!("{base}^{{{e}}}"),
    }
}

fn psi_symbol(sub: &str, style: Style) -> String {
    match (style, sub.is_empty()) {
        (Style::Text, true) => "ψ".into(),
        (Style::Text, false) => format!("ψ_{sub}"),
        (Style::Latex, true) => "\\psi".into(),
        (Style::Latex, false) => format!("\\psi_{{{sub}}}"),
    }
}

fn indexed(name: &str, i: u32, style: Style) -> String {
    match style {
        Style::Text => format!("{name}{i}"),
        Style::Latex => format!("\\{name}_{{{i}}}"),
    }
}

fn lambda(i: u32, style: Style) -> String {
    indexed(if style == Style::Text { "λ" } else { "lambda" }, i, style)
}

fn minus(style: Style) -> &'static str {
    match style {
        Style::Text => "−",
        Style::Latex => "-",
    }
}

fn mumford(genus: u32, degree: u32, sub: &str, style: Style) -> String {
    let psi = psi_symbol(sub, style);
    let mut out = String::new();
    for j in 0..=genus.min(degree) {
        let mut t = String::new();
        if j > 0 {
            t.push_str(&lambda(j, style));
        }
        t.push_str(&power(&psi, degree - j, style));
        if t.is_empty() {
            t.push('1');
        }
        if j > 0 {
            out.push_str(if j % 2 == 1 { " " } else { " + " });
            if j % 2 == 1 {
                out.push_str(minus(style));
                out.push(' ');
            }
        }
        out.push_str(&t);
    }
    out
}

struct Tree<'a> {
    s: &'a DecoratedStratum,
    style: Style,
}

impl Tree<'_> {
    fn root(&self) -> usize {
        self.s
            .markings()
            .first()
            .and_then(|&m| self.s.vertex_of_marking(m))
            .unwrap_or(0)
    }

    fn children(&self, v: usize, parent: Option<usize>) -> Vec<usize> {
        self.s.neighbors(v).into_iter().filter(|&u| Some(u) != parent).collect()
    }

    fn leg_sub(&self, v: usize, parent: Option<usize>, leg: Leg) -> String {
        if self.s.valence(v) == 1 {
            return String::new();
        }
        match leg {
            Leg::Marked(m) => m.to_string(),
            Leg::Toward(u) if Some(u) == parent => match self.style {
                Style::Text => "↑".into(),
                Style::Latex => "\\uparrow".into(),
            },
            Leg::Toward(u) => {
                let i = self.children(v, parent).iter().position(|&c| c == u).unwrap_or(0) + 1;
                match self.style {
                    Style::Text => format!("↓{i}"),
                    Style::Latex => format!("\\downarrow {i}"),
                }
            }
        }
    }

    fn decoration(&self, v: usize, parent: Option<usize>) -> String {
        let vert = &self.s.vertices()[v];
        let n = vert.decoration.len();
        let parts: Vec<String> = vert
            .decoration
            .iter()
            .map(|f| match *f {
                DecorationFactor::Psi { leg, exponent } => {
                    power(&psi_symbol(&self.leg_sub(v, parent, leg), self.style), exponent, self.style)
                }
                DecorationFactor::Lambda { index, exponent } => power(&lambda(index, self.style), exponent, self.style),
                DecorationFactor::Kappa { index, exponent } => {
                    let k = indexed(if self.style == Style::Text { "κ" } else { "kappa" }, index, self.style);
                    power(&k, exponent, self.style)
                }
                DecorationFactor::Mumford { leg, degree } => {
                    let m = mumford(vert.genus, degree, &self.leg_sub(v, parent, leg), self.style);
                    if n == 1 || !m.contains(' ') {
                        m
                    } else {
                        format!("({m})")
                    }
                }
            })
            .collect();
        parts.join(if self.style == Style::Text { "·" } else { " " })
    }

    fn vertex(&self, v: usize, parent: Option<usize>, out: &mut String) {
        let vert = &self.s.vertices()[v];
        let marks = vert.markings.iter().map(|m| m.to_string()).collect::<Vec<_>>().join(",");
        match self.style {
            Style::Text => {
                out.push_str(&format!("g{}", vert.genus));
                if !marks.is_empty() {
                    out.push_str(&format!("({marks})"));
                }
                let d = self.decoration(v, parent);
                if !d.is_empty() {
                    out.push_str(&format!("{{{d}}}"));
                }
            }
            Style::Latex => {
                out.push_str(&format!("g_{{{}}}", vert.genus));
                if !marks.is_empty() {
                    out.push_str(&format!("^{{({marks})}}"));
                }
                let d = self.decoration(v, parent);
                if !d.is_empty() {
                    out.push_str(&format!("\\{{{d}\\}}"));
                }
            }
        }
        for c in self.children(v, parent) {
            out.push_str(if self.style == Style::Text { "[" } else { "\\left[" });
            self.vertex(c, Some(v), out);
            out.push_str(if self.style == Style::Text { "]" } else { "\\right]" });
        }
    }
}

pub fn render_stratum(s: &DecoratedStratum, style: Style) -> String {
    let t = Tree { s, style };
    if s.vertices().len() == 1 {
        let d = t.decoration(0, None);
        return if d.is_empty() { "1".into() } else { d };
    }
    let mut out = String::new();
    t.vertex(t.root(), None, &mut out);
    out
}

fn coefficient(c: &Rational, style: Style) -> String {
    let a = c.abs();
    match (a.is_integer(), style) {
        (true, _) => a.to_string(),
        (false, Style::Text) => a.to_string(),
        (false, Style::Latex) => {
            let s = a.to_string();
            let (n, d) = s.split_once('/').expect("non-integer");
            format!("\\frac{{{n}}}{{{d}}}")
        }
    }
}

pub fn render_class(c: &TautClass, style: Style) -> String {
    if c.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (k, (s, v)) in c.terms().enumerate() {
        let neg = *v < Rational::zero();
        match (k, neg) {
            (0, false) => {}
            (0, true) => out.push_str(minus(style)),
            (_, false) => out.push_str(" + "),
            (_, true) => {
                out.push(' ');
                out.push_str(minus(style));
                out.push(' ');
            }
        }
        let body = render_stratum(s, style);
        let unit = v.abs() == Rational::one();
        let wrap = s.vertices().len() == 1 && body.contains(' ') && (c.len() > 1 || !unit);
        let body = if wrap { format!("({body})") } else { body };
        if unit {
            out.push_str(&body);
        } else {
            let sep = if style == Style::Text { "·" } else { " \\cdot " };
            out.push_str(&format!("{}{sep}{body}", coefficient(v, style)));
        }
    }
    out
}

pub fn render_relation(lhs: &TautClass, rhs: &TautClass, style: Style) -> String {
    format!("{} = {}", render_class(lhs, style), render_class(rhs, style))
}

impl fmt::Display for TautClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_class(self, Style::Text))
    }
}

impl fmt::Display for DecoratedStratum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_stratum(self, Style::Text))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::{mumford_lhs, theorem_rhs};

    #[test]
    fn genus_one_relation() {
        let s = render_relation(&mumford_lhs(1).unwrap(), &theorem_rhs(1).unwrap(), Style::Text);
        assert_eq!(s, "ψ − λ1 = 0");
    }

    #[test]
    fn higher_genus_labels() {
        assert_eq!(mumford_lhs(2).unwrap().to_string(), "ψ² − λ1ψ + λ2");
        assert_eq!(mumford_lhs(4).unwrap().to_string(), "ψ⁴ − λ1ψ³ + λ2ψ² − λ3ψ + λ4");
    }

    #[test]
    fn latex_lhs() {
        assert_eq!(render_class(&mumford_lhs(2).unwrap(), Style::Latex), "\\psi^{2} - \\lambda_{1}\\psi + \\lambda_{2}");
    }

    #[test]
    fn latex_is_ascii() {
        let s = render_class(&theorem_rhs(3).unwrap(), Style::Latex);
        assert!(s.is_ascii(), "{s}");
        assert_eq!(s.matches('{').count(), s.matches('}').count());
    }

    #[test]
    fn tree_notation() {
        let r = theorem_rhs(2).unwrap();
        let text = r.to_string();
        assert!(text.contains("1/2·g1(1)"), "{text}");
        assert!(text.contains('['), "{text}");
    }
}
