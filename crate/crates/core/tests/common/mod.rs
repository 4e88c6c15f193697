#![allow(dead_code)]

use std::collections::BTreeMap;

use mumford_core::localization::{FixedLocus, LocusTag};
use mumford_core::poly::{SiteTag, Symbol, SymbolKind, SymbolicPoly};
use mumford_core::strata::{DecorationFactor, Leg, Vertex};
use mumford_core::{DecoratedStratum, Rational, TautClass};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(n, d).unwrap()
}

/// A random stable decorated tree, or `None` when the draw is unstable.
pub fn random_stratum(seed: u64, max_vertices: usize, max_genus: u32, markings: u32) -> Option<DecoratedStratum> {
    let mut rng = StdRng::seed_from_u64(seed);
    let n = rng.gen_range(1..=max_vertices);
    let mut vertices: Vec<Vertex> = (0..n)
        .map(|_| Vertex { genus: rng.gen_range(0..=max_genus), markings: vec![], decoration: vec![] })
        .collect();
    let edges: Vec<(usize, usize)> = (1..n).map(|i| (rng.gen_range(0..i), i)).collect();
    for m in 1..=markings {
        let v = rng.gen_range(0..n);
        vertices[v].markings.push(m);
    }
    let mut nbrs: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &(a, b) in &edges {
        nbrs.entry(a).or_default().push(b);
        nbrs.entry(b).or_default().push(a);
    }
    for (i, v) in vertices.iter_mut().enumerate() {
        let mut legs: Vec<Leg> = v.markings.iter().map(|&m| Leg::Marked(m)).collect();
        legs.extend(nbrs.get(&i).into_iter().flatten().map(|&u| Leg::Toward(u)));
        if legs.is_empty() {
            continue;
        }
        if rng.gen_bool(0.5) {
            let leg = legs[rng.gen_range(0..legs.len())];
            v.decoration.push(DecorationFactor::Psi { leg, exponent: rng.gen_range(1..=2) });
        }
        if v.genus > 0 && rng.gen_bool(0.4) {
            v.decoration.push(DecorationFactor::Lambda { index: rng.gen_range(1..=v.genus), exponent: 1 });
        }
    }
    let s = DecoratedStratum::new(vertices, edges).ok()?;
    (!s.vanishes_by_dimension()).then_some(s)
}

pub fn random_permutation(seed: u64, n: usize) -> Vec<usize> {
    use rand::seq::SliceRandom;
    let mut rng = StdRng::seed_from_u64(seed);
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(&mut rng);
    p
}

/// A random class on a fixed ambient: up to `terms` random strata with small
/// integer coefficients.
pub fn random_class(seed: u64, genus: u32, markings: u32, terms: usize) -> TautClass {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut out = TautClass::zero(mumford_core::Ambient::new(genus, 1..=markings));
    let mut tries = 0;
    while out.len() < terms && tries < 200 {
        tries += 1;
        let s = random_stratum(rng.gen(), 3, genus, markings);
        if let Some(s) = s.filter(|s| s.genus() == genus) {
            out.add_term(s, Rational::from(rng.gen_range(-3i64..=3))).unwrap();
        }
    }
    out
}

/// Evaluate a symbolic polynomial at a point.
pub fn eval(p: &SymbolicPoly, at: &dyn Fn(Symbol) -> Rational) -> Rational {
    let mut total = Rational::zero();
    for (m, c) in p.terms() {
        let mut v = c.clone();
        for &(s, e) in m.powers() {
            for _ in 0..e {
                v = &v * &at(s);
            }
        }
        total = &total + &v;
    }
    total
}

/// A deterministic "random" point: ψ's and λ's at both sides.
pub fn point(seed: u64) -> impl Fn(Symbol) -> Rational {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut table: BTreeMap<(u8, u8, u32), Rational> = BTreeMap::new();
    for kind in 0..2u8 {
        for site in 0..2u8 {
            for index in 0..=8 {
                let n = rng.gen_range(1i64..=40);
                let d = rng.gen_range(1i64..=7);
                let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
                table.insert((kind, site, index), q(sign * n, d));
            }
        }
    }
    move |s: Symbol| {
        let kind = matches!(s.kind, SymbolKind::Lambda) as u8;
        let site = matches!(s.site, SiteTag::Infinity) as u8;
        table[&(kind, site, s.index)].clone()
    }
}

/// Sum of the residues of `t^{2+j} F(t)` at its finite poles, at a numeric
/// point. `F` has a double zero of its denominator at `t = 0`, so for
/// `j >= 0` only the simple poles at `ψ_0` and `−ψ_∞` contribute, and the sum
/// is the coefficient of `t^{−3−j}` at infinity.
pub fn residue_oracle(l: FixedLocus, j: u32, at: &dyn Fn(Symbol) -> Rational) -> Rational {
    let psi0 = at(Symbol::psi(SiteTag::Zero));
    let psiinf = at(Symbol::psi(SiteTag::Infinity));
    let lam = |site, k: u32| at(Symbol::lambda(site, k).unwrap());
    let pow = |x: &Rational, e: u32| (0..e).fold(Rational::one(), |acc, _| &acc * x);
    // numerators as functions of t
    let inf_gen = l.infinity_genus();
    let zero_gen = l.zero_genus();
    let num = |t: &Rational| -> Rational {
        let mut inf = Rational::zero();
        for k in 0..=inf_gen {
            let c = if k == 0 { Rational::one() } else { lam(SiteTag::Infinity, k) };
            inf = &inf + &(&c * &pow(t, inf_gen - k));
        }
        inf = &inf * &Rational::sign_power(inf_gen as i64);
        let mut zero = Rational::zero();
        if matches!(l.tag, LocusTag::H(_)) {
            for k in 0..=zero_gen {
                let c = if k == 0 { Rational::one() } else { lam(SiteTag::Zero, k) };
                zero = &zero + &(&(&c * &Rational::sign_power(k as i64)) * &pow(t, zero_gen - k));
            }
        } else {
            zero = Rational::one();
        }
        &zero * &inf
    };
    // t^{2+j} / (t * (t - ψ0) * (-t) * (-t - ψ∞)) = -t^j / ((t - ψ0)(-t - ψ∞)) on F_h,
    // t^{2+j} / (t * (-t) * (-t - ψ∞)) = -t^j / (-t - ψ∞) on F_0.
    let neg_one = -Rational::one();
    let tj = |t: &Rational| pow(t, j);
    match l.tag {
        LocusTag::H(_) => {
            let at_psi0 = &(&(&neg_one * &tj(&psi0)) * &num(&psi0)) * &(-(&psi0 + &psiinf)).recip().unwrap();
            let p = -psiinf.clone();
            // d/dt of (t - ψ0)(-t - ψ∞) at -ψ∞ is -(t - ψ0)
            let at_inf = &(&(&neg_one * &tj(&p)) * &num(&p)) * &(-(&p - &psi0)).recip().unwrap();
            &at_psi0 + &at_inf
        }
        LocusTag::Zero => {
            let p = -psiinf.clone();
            &(&(&neg_one * &tj(&p)) * &num(&p)) * &neg_one.recip().unwrap()
        }
    }
}
