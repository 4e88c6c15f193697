//! Elimination of reducible truncated Mumford factors.
//!
//! On a 1-legged vertex of genus γ, `M(d) = psi^{d−γ} M(γ)` and `M(γ)` is the
//! boundary formula of genus γ. On a vertex with more legs another leg `p`
//! is forgotten: the factor is the pullback of the same factor from the
//! smaller space plus the bubble where `p` meets the factor's leg.

use std::sync::LazyLock;

use dashmap::DashMap;

use super::forget::bubble;
use super::{forget_pullback, multiply_kappa, multiply_lambda, psi_multiply, SplitDecoration};
use crate::builders::{theorem_rhs, MARKED};
use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::strata::{Ambient, DecoratedStratum, DecorationFactor, Label, Leg, TautClass};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Site {
    pub vertex: usize,
    pub factor: usize,
}

/// Reducible factors, in vertex then factor order.
pub fn reducible_sites(s: &DecoratedStratum) -> Vec<Site> {
    let mut out = Vec::new();
    for (v, vert) in s.vertices().iter().enumerate() {
        for (k, f) in vert.decoration.iter().enumerate() {
            if f.is_reducible(vert.genus) {
                out.push(Site { vertex: v, factor: k });
            }
        }
    }
    out
}

type LocalKey = (Ambient, Vec<DecorationFactor>, Label);

static LOCAL: LazyLock<DashMap<LocalKey, TautClass>> = LazyLock::new(DashMap::new);

/// The single-vertex class on `ambient` with decoration `dec`, rewritten so
/// that the reducible factor at marking `q` is gone.
fn eliminate(ambient: &Ambient, dec: &[DecorationFactor], q: Label) -> Result<TautClass> {
    let key = (ambient.clone(), dec.to_vec(), q);
    if let Some(hit) = LOCAL.get(&key) {
        return Ok(hit.clone());
    }
    let out = eliminate_uncached(ambient, dec, q)?;
    LOCAL.insert(key, out.clone());
    Ok(out)
}

fn eliminate_uncached(ambient: &Ambient, dec: &[DecorationFactor], q: Label) -> Result<TautClass> {
    let genus = ambient.genus;
    let split = SplitDecoration::new(dec)?;
    let at_q = split.legs.get(&Leg::Marked(q)).copied().unwrap_or_default();
    let d = match at_q.mumford {
        Some(d) if d >= genus && genus >= 1 => d,
        _ => return Err(Error::NotReducible(format!("no reducible factor at {q} on genus {genus}"))),
    };
    if ambient.markings.len() == 1 {
        let mut out = theorem_rhs(genus)?.rename_marking(MARKED, q);
        for _ in 0..(at_q.psi + d - genus) {
            out = psi_multiply(&out, q)?;
        }
        for f in &split.rest {
            match *f {
                DecorationFactor::Lambda { index, exponent } => {
                    for _ in 0..exponent {
                        out = multiply_lambda(&out, index)?;
                    }
                }
                DecorationFactor::Kappa { index, exponent } => {
                    for _ in 0..exponent {
                        out = multiply_kappa(&out, index)?;
                    }
                }
                _ => unreachable!("leg factors are split off"),
            }
        }
        return Ok(out);
    }
    let p = choose_forgotten(ambient, &split, q)?;
    let at_p = split.legs.get(&Leg::Marked(p)).copied().unwrap_or_default();
    let mut reduced = split.clone();
    reduced.legs.remove(&Leg::Marked(p));
    let smaller = ambient.without(p);
    let inner = eliminate(&smaller, &reduced.assemble(None), q)?;
    let mut out = forget_pullback(&inner, p)?;
    for _ in 0..at_p.psi {
        out = psi_multiply(&out, p)?;
    }
    if at_p.psi == 0 {
        let here = DecoratedStratum::single(genus, ambient.markings.iter().copied(), dec.to_vec())?;
        for (&r, &lp) in &split.legs {
            let Some(low) = lp.lowered() else { continue };
            let dec_v = split.assemble(Some((r, Leg::Toward(1), low)));
            if let Some(t) = bubble(&here, 0, r, p, dec_v) {
                out.add_term(t, Rational::one())?;
            }
        }
    }
    Ok(out)
}

/// The leg to forget: the least marking other than `q` with no factor, else
/// the least one carrying only a psi power.
fn choose_forgotten(ambient: &Ambient, split: &SplitDecoration, q: Label) -> Result<Label> {
    let others = ambient.markings.iter().copied().filter(|&m| m != q);
    let bare = others.clone().find(|&m| !split.legs.contains_key(&Leg::Marked(m)));
    let psi_only = others.clone().find(|&m| split.legs.get(&Leg::Marked(m)).is_some_and(|lp| lp.mumford.is_none()));
    bare.or(psi_only).ok_or_else(|| {
        Error::UnsupportedDecoration("every other leg carries a truncated Mumford factor".into())
    })
}

/// Rewrite one reducible site, returning a class on the same ambient.
pub fn reduce_site(s: &DecoratedStratum, site: Site) -> Result<TautClass> {
    let vert = s.vertices().get(site.vertex).ok_or_else(|| Error::OutOfRange(format!("vertex {}", site.vertex)))?;
    let f = vert.decoration.get(site.factor).ok_or_else(|| Error::OutOfRange(format!("factor {}", site.factor)))?;
    if !f.is_reducible(vert.genus) {
        return Err(Error::NotReducible(format!("{f:?} on genus {}", vert.genus)));
    }
    let (ambient, leg_of) = s.vertex_space(site.vertex);
    let local = s.local_decoration(site.vertex);
    let q = match local[site.factor].leg() {
        Some(Leg::Marked(q)) => q,
        _ => unreachable!("local decorations use marked legs"),
    };
    let rewritten = eliminate(&ambient, &local, q)?;
    let mut out = TautClass::zero(s.ambient());
    for (t, c) in rewritten.terms() {
        if let Some(g) = s.splice(site.vertex, t, &leg_of) {
            out.add_term(g, c.clone())?;
        }
    }
    Ok(out)
}

/// Rewrite the reducible factor on a vertex with at least two legs.
pub fn comparison_rewrite(s: &DecoratedStratum, vertex: usize) -> Result<TautClass> {
    if vertex >= s.vertices().len() {
        return Err(Error::OutOfRange(format!("vertex {vertex}")));
    }
    if s.valence(vertex) < 2 {
        return Err(Error::OutOfRange(format!("vertex {vertex} has a single leg")));
    }
    let site = reducible_sites(s)
        .into_iter()
        .find(|x| x.vertex == vertex)
        .ok_or_else(|| Error::NotReducible(format!("vertex {vertex} has no reducible factor")))?;
    reduce_site(s, site)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::strata::Vertex;

    fn mumford(leg: Leg, degree: u32) -> DecorationFactor {
        DecorationFactor::Mumford { leg, degree }
    }

    #[test]
    fn genus_one_single_leg_vanishes() {
        let s = DecoratedStratum::single(1, [1], vec![mumford(Leg::Marked(1), 1)]).unwrap();
        let out = reduce_site(&s, Site { vertex: 0, factor: 0 }).unwrap();
        assert!(out.is_zero());
    }

    #[test]
    fn genus_one_two_legs_is_bubble_only() {
        let s = DecoratedStratum::single(1, [1, 2], vec![mumford(Leg::Marked(2), 1)]).unwrap();
        let out = comparison_rewrite(&s, 0).unwrap();
        assert_eq!(out.len(), 1);
        let (t, c) = out.terms().next().unwrap();
        assert_eq!(c, &Rational::one());
        assert_eq!(t.vertices().len(), 2);
        assert_eq!(t.codimension(), 1);
    }

    #[test]
    fn degree_two_bubble_keeps_factor() {
        let s = DecoratedStratum::single(1, [1, 2], vec![mumford(Leg::Marked(2), 2)]).unwrap();
        let out = comparison_rewrite(&s, 0).unwrap();
        assert_eq!(out.codimension(), Some(2));
        for (t, _) in out.terms() {
            let g1 = t.vertices().iter().find(|v| v.genus == 1).unwrap();
            assert!(matches!(g1.decoration[..], [DecorationFactor::Mumford { degree: 1, .. }]));
        }
    }

    #[test]
    fn genus_two_chain() {
        // left factor term of c_1 at g = 2: M(node, 1) on the 2-legged genus-1 vertex
        let s = DecoratedStratum::new(
            vec![
                Vertex { genus: 1, markings: vec![1], decoration: vec![mumford(Leg::Toward(1), 1)] },
                Vertex { genus: 1, markings: vec![], decoration: vec![] },
            ],
            vec![(0, 1)],
        )
        .unwrap();
        let out = comparison_rewrite(&s, 0).unwrap();
        assert_eq!(out.len(), 1);
        let (t, _) = out.terms().next().unwrap();
        let v = t.vertex_of_marking(1).unwrap();
        assert_eq!(t.vertices()[v].genus, 0);
        assert_eq!(t.vertices().len(), 3);
    }

    #[test]
    fn non_reducible_rejected() {
        let s = DecoratedStratum::single(2, [1, 2], vec![mumford(Leg::Marked(2), 1)]).unwrap();
        assert!(matches!(comparison_rewrite(&s, 0), Err(Error::NotReducible(_))));
    }
}
