//! Commutative polynomials over the psi/lambda alphabet with exact
//! rational coefficients.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SymbolKind {
    Psi,
    Lambda,
}

/// Which side of a fixed locus (or which marked point) a symbol lives on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SiteTag {
    Zero,
    Infinity,
    Point(u32),
}

impl fmt::Display for SiteTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SiteTag::Zero => write!(f, "0"),
            SiteTag::Infinity => write!(f, "∞"),
            SiteTag::Point(p) => write!(f, "{p}"),
        }
    }
}

/// A psi or lambda generator. Field order gives the monomial ordering
/// (kind, site, index).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Symbol {
    pub kind: SymbolKind,
    pub site: SiteTag,
    pub index: u32,
}

impl Symbol {
    pub fn psi(site: SiteTag) -> Self {
        Symbol { kind: SymbolKind::Psi, site, index: 0 }
    }

    pub fn lambda(site: SiteTag, index: u32) -> Result<Self> {
        if index == 0 {
            return Err(Error::OutOfRange("lambda index must be >= 1".into()));
        }
        Ok(Symbol { kind: SymbolKind::Lambda, site, index })
    }

    /// Cohomological degree: psi has degree 1, lambda_j degree j.
    pub fn degree(&self) -> u32 {
        match self.kind {
            SymbolKind::Psi => 1,
            SymbolKind::Lambda => self.index,
        }
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            SymbolKind::Psi => write!(f, "ψ_{}", self.site),
            SymbolKind::Lambda => write!(f, "λ^{}_{}", self.site, self.index),
        }
    }
}

/// Sorted list of (symbol, exponent >= 1).
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Monomial(Vec<(Symbol, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(s: Symbol, exp: u32) -> Self {
        if exp == 0 {
            Monomial::one()
        } else {
            Monomial(vec![(s, exp)])
        }
    }

    pub fn from_powers(powers: impl IntoIterator<Item = (Symbol, u32)>) -> Self {
        let mut m = BTreeMap::new();
        for (s, e) in powers {
            *m.entry(s).or_insert(0) += e;
        }
        Monomial(m.into_iter().filter(|&(_, e)| e > 0).collect())
    }

    pub fn powers(&self) -> &[(Symbol, u32)] {
        &self.0
    }

    pub fn exponent(&self, s: &Symbol) -> u32 {
        self.0.iter().find(|(t, _)| t == s).map_or(0, |&(_, e)| e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(s, e)| s.degree() * e).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial::from_powers(self.0.iter().chain(other.0.iter()).copied())
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (s, e) in &self.0 {
            if *e == 1 {
                write!(f, "{s}")?;
            } else {
                write!(f, "{s}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Operations accepted by [`poly_arith`].
#[derive(Clone, Debug)]
pub enum PolyOp {
    Add,
    Mul,
    /// Scale the left operand; the right operand is ignored.
    Scale(Rational),
}

#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SymbolicPoly {
    terms: BTreeMap<Monomial, Rational>,
}

pub fn poly_arith(p: &SymbolicPoly, q: &SymbolicPoly, op: PolyOp) -> SymbolicPoly {
    match op {
        PolyOp::Add => p + q,
        PolyOp::Mul => p * q,
        PolyOp::Scale(c) => p.scale(&c),
    }
}

impl SymbolicPoly {
    pub fn zero() -> Self {
        SymbolicPoly::default()
    }

    pub fn constant(c: Rational) -> Self {
        let mut p = SymbolicPoly::zero();
        p.add_term(Monomial::one(), c);
        p
    }

    pub fn one() -> Self {
        SymbolicPoly::constant(Rational::one())
    }

    pub fn var(s: Symbol) -> Self {
        SymbolicPoly::monomial(Monomial::var(s, 1), Rational::one())
    }

    pub fn monomial(m: Monomial, c: Rational) -> Self {
        let mut p = SymbolicPoly::zero();
        p.add_term(m, c);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> SymbolicPoly {
        if c.is_zero() {
            return SymbolicPoly::zero();
        }
        SymbolicPoly {
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> SymbolicPoly {
        let mut acc = SymbolicPoly::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Degrees of the monomials present, for homogeneity checks.
    pub fn degrees(&self) -> std::collections::BTreeSet<u32> {
        self.terms.keys().map(Monomial::degree).collect()
    }

    /// Sum_{j=0}^{min(genus, d)} (-1)^j lambda_j psi^{d-j} at one site.
    pub fn truncated_mumford(site: SiteTag, genus: u32, d: i64) -> SymbolicPoly {
        let mut p = SymbolicPoly::zero();
        if d < 0 {
            return p;
        }
        let d = d as u32;
        for j in 0..=genus.min(d) {
            let mut powers = vec![(Symbol::psi(site), d - j)];
            if j > 0 {
                powers.push((Symbol { kind: SymbolKind::Lambda, site, index: j }, 1));
            }
            p.add_term(Monomial::from_powers(powers), Rational::sign_power(j as i64));
        }
        p
    }

    /// Replace every `psi(site)^e` by `psi(site)^(e - 1)`, dropping monomials
    /// where the exponent would go negative.
    pub fn lower_psi(&self, site: SiteTag) -> SymbolicPoly {
        let psi = Symbol::psi(site);
        let mut out = SymbolicPoly::zero();
        for (m, c) in &self.terms {
            let e = m.exponent(&psi);
            if e == 0 {
                continue;
            }
            let lowered = Monomial::from_powers(
                m.powers()
                    .iter()
                    .map(|&(s, k)| if s == psi { (s, k - 1) } else { (s, k) }),
            );
            out.add_term(lowered, c.clone());
        }
        out
    }
}

impl Add for &SymbolicPoly {
    type Output = SymbolicPoly;
    fn add(self, rhs: &SymbolicPoly) -> SymbolicPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &SymbolicPoly {
    type Output = SymbolicPoly;
    fn sub(self, rhs: &SymbolicPoly) -> SymbolicPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl Neg for &SymbolicPoly {
    type Output = SymbolicPoly;
    fn neg(self) -> SymbolicPoly {
        self.scale(&-Rational::one())
    }
}

impl Mul for &SymbolicPoly {
    type Output = SymbolicPoly;
    fn mul(self, rhs: &SymbolicPoly) -> SymbolicPoly {
        let mut out = SymbolicPoly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

impl fmt::Display for SymbolicPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let unit = a == Rational::one();
            match (unit, m.powers().is_empty()) {
                (true, true) => write!(f, "1")?,
                (true, false) => write!(f, "{m}")?,
                (false, true) => write!(f, "{a}")?,
                (false, false) => write!(f, "{a}·{m}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn psi(s: SiteTag) -> SymbolicPoly {
        SymbolicPoly::var(Symbol::psi(s))
    }

    fn lam(s: SiteTag, j: u32) -> SymbolicPoly {
        SymbolicPoly::var(Symbol::lambda(s, j).unwrap())
    }

    #[test]
    fn identity_and_inverse() {
        let p = &psi(SiteTag::Zero) - &lam(SiteTag::Zero, 1);
        assert_eq!(poly_arith(&p, &SymbolicPoly::one(), PolyOp::Mul), p);

        let q = &psi(SiteTag::Infinity) - &lam(SiteTag::Infinity, 1);
        let neg = poly_arith(&q, &SymbolicPoly::zero(), PolyOp::Scale(-Rational::one()));
        assert!(poly_arith(&q, &neg, PolyOp::Add).is_zero());
    }

    #[test]
    fn distributes() {
        let p0 = psi(SiteTag::Zero);
        let q = &psi(SiteTag::Infinity) - &lam(SiteTag::Infinity, 1);
        let expect = &(&p0 * &psi(SiteTag::Infinity)) - &(&p0 * &lam(SiteTag::Infinity, 1));
        assert_eq!(&p0 * &q, expect);
        assert_eq!(expect.len(), 2);
    }

    #[test]
    fn lambda_zero_rejected() {
        assert!(Symbol::lambda(SiteTag::Zero, 0).is_err());
    }

    #[test]
    fn mumford_sum() {
        let p = SymbolicPoly::truncated_mumford(SiteTag::Infinity, 2, 2);
        let i = SiteTag::Infinity;
        let expect = &(&psi(i).pow(2) - &(&lam(i, 1) * &psi(i))) + &lam(i, 2);
        assert_eq!(p, expect);
        // negative powers dropped
        let low = SymbolicPoly::truncated_mumford(i, 3, 1);
        assert_eq!(low, &psi(i) - &lam(i, 1));
        assert!(SymbolicPoly::truncated_mumford(i, 3, -1).is_zero());
    }

    #[test]
    fn psi_lowering() {
        let i = SiteTag::Infinity;
        let p = SymbolicPoly::truncated_mumford(i, 1, 2);
        assert_eq!(p.lower_psi(i), SymbolicPoly::truncated_mumford(i, 1, 1));
    }

    #[test]
    fn canonical_display() {
        let p = &psi(SiteTag::Zero) - &lam(SiteTag::Zero, 1);
        assert_eq!(p.to_string(), "ψ_0 - λ^0_1");
    }
}
