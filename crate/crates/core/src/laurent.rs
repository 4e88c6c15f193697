//! Truncated Laurent series in the equivariant parameter `t`.
//!
//! A [`LaurentSeries`] is exact on its inclusive window `[lo, hi]` and makes
//! no claim outside it. Series produced by expanding a rational function
//! whose denominator is a product of linear factors are additionally
//! *closed above*: every nonzero coefficient above `lo` is stored, so two
//! such series can be multiplied.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::poly::SymbolicPoly;
use crate::rational::Rational;

/// A finite Laurent polynomial in `t` with symbolic coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TPolynomial {
    coeffs: BTreeMap<i64, SymbolicPoly>,
}

impl TPolynomial {
    pub fn zero() -> Self {
        TPolynomial::default()
    }

    /// `c * t^k`.
    pub fn term(k: i64, c: SymbolicPoly) -> Self {
        let mut p = TPolynomial::zero();
        p.add_term(k, c);
        p
    }

    pub fn add_term(&mut self, k: i64, c: SymbolicPoly) {
        if c.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(k).or_default();
        *slot = &*slot + &c;
        if slot.is_zero() {
            self.coeffs.remove(&k);
        }
    }

    pub fn max_exponent(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, &SymbolicPoly)> {
        self.coeffs.iter().map(|(k, c)| (*k, c))
    }

    pub fn scale(&self, c: &SymbolicPoly) -> TPolynomial {
        let mut out = TPolynomial::zero();
        for (k, v) in &self.coeffs {
            out.add_term(*k, v * c);
        }
        out
    }
}

/// A denominator factor `t_coeff * t + shift` with `shift` free of `t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearFactor {
    pub t_coeff: i64,
    pub shift: SymbolicPoly,
}

impl LinearFactor {
    pub fn new(t_coeff: i64, shift: SymbolicPoly) -> Self {
        LinearFactor { t_coeff, shift }
    }

    /// The bare factor `sign * t`.
    pub fn t(sign: i64) -> Self {
        LinearFactor { t_coeff: sign, shift: SymbolicPoly::zero() }
    }

    /// Expansion of `1 / (sigma t + s) = sigma * sum_k (-sigma s)^k t^(-1-k)`
    /// for exponents `>= floor`.
    fn expand_inverse(&self, floor: i64) -> Result<BTreeMap<i64, SymbolicPoly>> {
        let sigma = match self.t_coeff {
            1 => Rational::one(),
            -1 => -Rational::one(),
            other => {
                return Err(Error::UnsupportedDenominator(format!(
                    "coefficient of t must be ±1, got {other}"
                )))
            }
        };
        let ratio = self.shift.scale(&-&sigma);
        let mut out = BTreeMap::new();
        let mut power = SymbolicPoly::constant(sigma);
        let mut exp = -1;
        while exp >= floor {
            if power.is_zero() {
                break;
            }
            out.insert(exp, power.clone());
            power = &power * &ratio;
            exp -= 1;
        }
        Ok(out)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentSeries {
    lo: i64,
    hi: i64,
    closed_above: bool,
    coeffs: BTreeMap<i64, SymbolicPoly>,
}

/// Default extraction window for genus-`g` fixed-locus expansions.
pub fn default_window(g: u32) -> (i64, i64) {
    (-(g as i64 + 6), 2)
}

/// Expand `numer / prod(factors)` as a Laurent series in `t^-1`, exact on
/// the window `[lo, hi]`.
pub fn laurent_expand_rational(
    numer: &TPolynomial,
    factors: &[LinearFactor],
    window: (i64, i64),
) -> Result<LaurentSeries> {
    let (lo, hi) = window;
    if lo > hi {
        return Err(Error::OutOfRange(format!("empty window [{lo}, {hi}]")));
    }
    for f in factors {
        if f.t_coeff.abs() != 1 {
            return Err(Error::UnsupportedDenominator(format!(
                "coefficient of t must be ±1, got {}",
                f.t_coeff
            )));
        }
    }
    let Some(top) = numer.max_exponent() else {
        return Ok(LaurentSeries::zero(window));
    };
    let k = factors.len() as i64;
    // every other factor only lowers exponents, so this depth suffices
    let floor = lo - top + k - 1;

    let mut acc: BTreeMap<i64, SymbolicPoly> =
        numer.iter().map(|(e, c)| (e, c.clone())).collect();
    for f in factors {
        let inv = f.expand_inverse(floor)?;
        let mut next: BTreeMap<i64, SymbolicPoly> = BTreeMap::new();
        for (ea, ca) in &acc {
            for (eb, cb) in &inv {
                let e = ea + eb;
                if e < lo {
                    continue;
                }
                let slot = next.entry(e).or_default();
                *slot = &*slot + &(ca * cb);
            }
        }
        next.retain(|_, c| !c.is_zero());
        acc = next;
    }
    let support_top = top - k;
    acc.retain(|e, _| *e <= hi);
    Ok(LaurentSeries { lo, hi, closed_above: hi >= support_top, coeffs: acc })
}

/// Coefficient of `t^k`; reading outside the exact window is an error.
pub fn laurent_coefficient(s: &LaurentSeries, k: i64) -> Result<SymbolicPoly> {
    s.coefficient(k)
}

impl LaurentSeries {
    pub fn zero(window: (i64, i64)) -> Self {
        LaurentSeries { lo: window.0, hi: window.1, closed_above: true, coeffs: BTreeMap::new() }
    }

    pub fn window(&self) -> (i64, i64) {
        (self.lo, self.hi)
    }

    pub fn is_closed_above(&self) -> bool {
        self.closed_above
    }

    pub fn coefficient(&self, k: i64) -> Result<SymbolicPoly> {
        if k < self.lo || k > self.hi {
            return Err(Error::OutsideWindow { exponent: k, lo: self.lo, hi: self.hi });
        }
        Ok(self.coeffs.get(&k).cloned().unwrap_or_default())
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, &SymbolicPoly)> {
        self.coeffs.iter().map(|(k, c)| (*k, c))
    }

    fn top(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn scale(&self, c: &Rational) -> LaurentSeries {
        let coeffs = self
            .coeffs
            .iter()
            .map(|(k, v)| (*k, v.scale(c)))
            .filter(|(_, v)| !v.is_zero())
            .collect();
        LaurentSeries { coeffs, ..self.clone() }
    }

    /// `a*self + b*other` on the intersection of the two windows.
    pub fn linear_combination(&self, a: &Rational, other: &LaurentSeries, b: &Rational) -> Result<Self> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        if lo > hi {
            return Err(Error::OutOfRange(format!("windows do not overlap: [{lo}, {hi}]")));
        }
        let dropped_above = |s: &LaurentSeries| s.top().is_some_and(|t| t > hi);
        let closed_above = self.closed_above
            && other.closed_above
            && !dropped_above(self)
            && !dropped_above(other);
        let mut coeffs: BTreeMap<i64, SymbolicPoly> = BTreeMap::new();
        for (s, w) in [(self, a), (other, b)] {
            for (k, v) in s.coeffs.range(lo..=hi) {
                let slot = coeffs.entry(*k).or_default();
                *slot = &*slot + &v.scale(w);
            }
        }
        coeffs.retain(|_, v| !v.is_zero());
        Ok(LaurentSeries { lo, hi, closed_above, coeffs })
    }

    pub fn add(&self, other: &LaurentSeries) -> Result<Self> {
        self.linear_combination(&Rational::one(), other, &Rational::one())
    }

    pub fn sub(&self, other: &LaurentSeries) -> Result<Self> {
        self.linear_combination(&Rational::one(), other, &-Rational::one())
    }

    /// Product of two closed-above series, exact on the window intersection
    /// further clipped to where the product is fully determined.
    pub fn mul(&self, other: &LaurentSeries) -> Result<Self> {
        if !self.closed_above || !other.closed_above {
            return Err(Error::OpenSeriesProduct);
        }
        let top_a = self.top().unwrap_or(self.lo);
        let top_b = other.top().unwrap_or(other.lo);
        let lo = self.lo.max(other.lo).max(self.lo + top_b).max(other.lo + top_a);
        let hi = self.hi.min(other.hi);
        if lo > hi {
            return Err(Error::OutOfRange(format!("product window is empty: [{lo}, {hi}]")));
        }
        let mut coeffs: BTreeMap<i64, SymbolicPoly> = BTreeMap::new();
        for (ka, va) in &self.coeffs {
            for (kb, vb) in &other.coeffs {
                let k = ka + kb;
                if k < lo {
                    continue;
                }
                let slot = coeffs.entry(k).or_default();
                *slot = &*slot + &(va * vb);
            }
        }
        coeffs.retain(|_, v| !v.is_zero());
        let closed_above = coeffs.keys().next_back().is_none_or(|&t| t <= hi);
        coeffs.retain(|k, _| *k <= hi);
        Ok(LaurentSeries { lo, hi, closed_above, coeffs })
    }
}

impl fmt::Display for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0 [t^{}..t^{}]", self.lo, self.hi);
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .rev()
            .map(|(k, c)| format!("({c})·t^{k}"))
            .collect();
        write!(f, "{} [t^{}..t^{}]", parts.join(" + "), self.lo, self.hi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{SiteTag, Symbol};

    fn psi0() -> SymbolicPoly {
        SymbolicPoly::var(Symbol::psi(SiteTag::Zero))
    }

    #[test]
    fn geometric_series() {
        let numer = TPolynomial::term(0, SymbolicPoly::one());
        let f = LinearFactor::new(1, -&psi0());
        let s = laurent_expand_rational(&numer, &[f], (-4, -1)).unwrap();
        for k in 0..4u32 {
            let c = s.coefficient(-1 - k as i64).unwrap();
            assert_eq!(c, psi0().pow(k));
        }
    }

    #[test]
    fn reading_outside_window_fails() {
        let numer = TPolynomial::term(0, SymbolicPoly::one());
        let f = LinearFactor::new(1, -&psi0());
        let s = laurent_expand_rational(&numer, &[f], (-4, 0)).unwrap();
        assert!(s.coefficient(0).unwrap().is_zero());
        assert!(matches!(s.coefficient(-5), Err(Error::OutsideWindow { .. })));
        assert!(s.coefficient(1).is_err());
    }

    #[test]
    fn rejects_unsupported_denominator() {
        let numer = TPolynomial::term(0, SymbolicPoly::one());
        let f = LinearFactor::new(2, psi0());
        let err = laurent_expand_rational(&numer, &[f], (-4, 0)).unwrap_err();
        assert!(matches!(err, Error::UnsupportedDenominator(_)));
    }

    #[test]
    fn product_matches_direct_expansion() {
        // 1/(t - psi0) * 1/t == expansion of 1/(t (t - psi0))
        let one = TPolynomial::term(0, SymbolicPoly::one());
        let a = laurent_expand_rational(&one, &[LinearFactor::new(1, -&psi0())], (-8, 2)).unwrap();
        let b = laurent_expand_rational(&one, &[LinearFactor::t(1)], (-8, 2)).unwrap();
        let direct = laurent_expand_rational(
            &one,
            &[LinearFactor::t(1), LinearFactor::new(1, -&psi0())],
            (-8, 2),
        )
        .unwrap();
        let prod = a.mul(&b).unwrap();
        let (lo, hi) = prod.window();
        for k in lo..=hi {
            assert_eq!(prod.coefficient(k).unwrap(), direct.coefficient(k).unwrap(), "t^{k}");
        }
    }
}
