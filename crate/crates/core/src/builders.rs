//! The named classes: the Mumford-type class, the factor sums `c_h` and
//! `c'_h`, the boundary formula, and the derived relations.

use std::collections::BTreeSet;
use std::sync::LazyLock;

use dashmap::DashMap;

use crate::error::{Error, Result};
use crate::ops::{forget_pushforward, glue_pushforward, PushMode, NODE};
use crate::poly::{SiteTag, SymbolicPoly};
use crate::rational::Rational;
use crate::report::RelationReport;
use crate::strata::{Ambient, DecoratedStratum, DecorationFactor, Label, Leg, TautClass};

/// The marked point of the 1-pointed space.
pub const MARKED: Label = 1;

/// `coeff * M_0(left_degree) ⊗ M_∞(right_degree)`, with `M(d)` the truncated
/// Mumford sum at the node of each factor.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct PairTerm {
    pub coeff: Rational,
    pub left_degree: u32,
    pub right_degree: u32,
}

/// A sum of decorated products on `M(h, {1, node}) × M(g−h, {node} ∪ extra)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorPair {
    pub genus: u32,
    pub h: u32,
    pub right_markings: Vec<Label>,
    pub terms: Vec<PairTerm>,
}

impl FactorPair {
    pub fn left_ambient(&self) -> Ambient {
        Ambient::new(self.h, [MARKED, NODE])
    }

    pub fn right_ambient(&self) -> Ambient {
        Ambient::new(self.genus - self.h, std::iter::once(NODE).chain(self.right_markings.iter().copied()))
    }

    pub fn to_poly(&self) -> SymbolicPoly {
        let mut out = SymbolicPoly::zero();
        for t in &self.terms {
            let l = SymbolicPoly::truncated_mumford(SiteTag::Zero, self.h, t.left_degree as i64);
            let r = SymbolicPoly::truncated_mumford(SiteTag::Infinity, self.genus - self.h, t.right_degree as i64);
            out = &out + &(&l * &r).scale(&t.coeff);
        }
        out
    }

    pub fn bidegrees(&self) -> BTreeSet<(u32, u32)> {
        self.terms.iter().map(|t| (t.left_degree, t.right_degree)).collect()
    }

    /// Every `psi_∞` power lowered by one, `psi^{-1} = 0`.
    pub fn lower_right(&self) -> FactorPair {
        let terms = self
            .terms
            .iter()
            .filter(|t| t.right_degree > 0)
            .map(|t| PairTerm { right_degree: t.right_degree - 1, ..t.clone() })
            .collect();
        FactorPair { terms, ..self.clone() }
    }

    /// Drop products whose factor degree exceeds the factor dimension. An
    /// unstable right factor (`h = g`, no extra markings) is left alone.
    pub fn truncate_by_dimension(&self) -> FactorPair {
        let ld = self.left_ambient().dimension();
        let right = self.right_ambient();
        let rd = if right.is_stable() { right.dimension() } else { i64::MAX };
        let terms = self
            .terms
            .iter()
            .filter(|t| t.left_degree as i64 <= ld && t.right_degree as i64 <= rd)
            .cloned()
            .collect();
        FactorPair { terms, ..self.clone() }
    }

    pub fn with_right_markings(&self, right_markings: Vec<Label>) -> FactorPair {
        FactorPair { right_markings, ..self.clone() }
    }

    pub fn left_class(&self, degree: u32) -> Result<TautClass> {
        factor_class(self.h, &[MARKED, NODE], degree)
    }

    pub fn right_class(&self, degree: u32) -> Result<TautClass> {
        let mut m = vec![NODE];
        m.extend(&self.right_markings);
        factor_class(self.genus - self.h, &m, degree)
    }

    /// Gluing pushforward into `M(g, {1} ∪ extra)`.
    pub fn glue(&self) -> Result<TautClass> {
        let ambient = Ambient::new(self.genus, std::iter::once(MARKED).chain(self.right_markings.iter().copied()));
        let mut out = TautClass::zero(ambient);
        for t in &self.terms {
            let l = self.left_class(t.left_degree)?;
            let r = self.right_class(t.right_degree)?;
            out.add_class(&glue_pushforward(&l, &r, self.h)?, &t.coeff)?;
        }
        out.ensure_homogeneous("glued factor pair")?;
        Ok(out)
    }
}

fn factor_class(genus: u32, markings: &[Label], degree: u32) -> Result<TautClass> {
    let dec = vec![DecorationFactor::Mumford { leg: Leg::Marked(NODE), degree }];
    let s = DecoratedStratum::single(genus, markings.iter().copied(), dec)?;
    let mut out = TautClass::zero(s.ambient());
    out.add_term(s, Rational::one())?;
    Ok(out)
}

/// `psi^g − λ1 psi^{g−1} + ⋯ + (−1)^g λ_g` at the marked point.
pub fn mumford_lhs(g: u32) -> Result<TautClass> {
    mumford_pattern(g, 1)
}

/// `psi^{g+j−1} − λ1 psi^{g+j−2} + ⋯ + (−1)^g λ_g psi^{j−1}`.
pub fn mumford_pattern(g: u32, j: u32) -> Result<TautClass> {
    if g == 0 || j == 0 {
        return Err(Error::OutOfRange(format!("pattern needs g >= 1 and j >= 1 (got g = {g}, j = {j})")));
    }
    let dec = vec![DecorationFactor::Mumford { leg: Leg::Marked(MARKED), degree: g + j - 1 }];
    let s = DecoratedStratum::single(g, [MARKED], dec)?;
    Ok(TautClass::from_stratum(s, Rational::one()))
}

fn check_h(g: u32, h: u32) -> Result<()> {
    if h == 0 || h > g {
        return Err(Error::OutOfRange(format!("h = {h} outside 1..={g}")));
    }
    Ok(())
}

/// `Σ_{i=0}^{g+j−1} (−1)^{h+i} M_0(i) ⊗ M_∞(g+j−1−i)` on the 3-pointed side:
/// the `t^{−3−j}` coefficient up to the global sign `(−1)^{j−1}`. `j = 1` is `c'_h`.
pub fn build_c_prime_j(g: u32, h: u32, j: u32) -> Result<FactorPair> {
    check_h(g, h)?;
    if j == 0 {
        return Err(Error::OutOfRange("j must be at least 1".into()));
    }
    let top = g + j - 1;
    let terms = (0..=top)
        .map(|i| PairTerm {
            coeff: Rational::sign_power((h + i) as i64),
            left_degree: i,
            right_degree: top - i,
        })
        .collect();
    Ok(FactorPair { genus: g, h, right_markings: vec![2, 3], terms })
}

pub fn build_c_prime(g: u32, h: u32) -> Result<FactorPair> {
    build_c_prime_j(g, h, 1)
}

/// `Σ_{i=0}^{g+j−2} (−1)^{h+i} M_0(i) ⊗ M_∞(g+j−2−i)` on the 1-pointed
/// side, before any truncation.
pub fn build_c_j_untruncated(g: u32, h: u32, j: u32) -> Result<FactorPair> {
    check_h(g, h)?;
    if j == 0 {
        return Err(Error::OutOfRange("j must be at least 1".into()));
    }
    let top = g + j - 2;
    let terms = (0..=top)
        .map(|i| PairTerm {
            coeff: Rational::sign_power((h + i) as i64),
            left_degree: i,
            right_degree: top - i,
        })
        .collect();
    Ok(FactorPair { genus: g, h, right_markings: vec![], terms })
}

pub fn build_c_j(g: u32, h: u32, j: u32) -> Result<FactorPair> {
    Ok(build_c_j_untruncated(g, h, j)?.truncate_by_dimension())
}

/// `c_h` with terms above the factor dimensions dropped.
pub fn build_c(g: u32, h: u32) -> Result<FactorPair> {
    build_c_j(g, h, 1)
}

pub fn build_c_untruncated(g: u32, h: u32) -> Result<FactorPair> {
    build_c_j_untruncated(g, h, 1)
}

/// `1 − h/g`.
pub fn theorem_weight(g: u32, h: u32) -> Rational {
    Rational::one() - Rational::new(h as i64, g as i64).expect("g >= 1")
}

static RHS: LazyLock<DashMap<(u32, u32), TautClass>> = LazyLock::new(DashMap::new);

/// `Σ_{h=1}^{g−1} (1 − h/g) ι_h*(c_h)`.
pub fn theorem_rhs(g: u32) -> Result<TautClass> {
    theorem_rhs_j(g, 1)
}

/// The right side of the `t^{−3−j}` relation, built from `build_c_j`.
pub fn theorem_rhs_j(g: u32, j: u32) -> Result<TautClass> {
    if g == 0 {
        return Err(Error::OutOfRange("genus must be at least 1".into()));
    }
    if let Some(hit) = RHS.get(&(g, j)) {
        return Ok(hit.clone());
    }
    let mut out = TautClass::zero(Ambient::new(g, [MARKED]));
    for h in 1..g {
        out.add_class(&build_c_j(g, h, j)?.glue()?, &theorem_weight(g, h))?;
    }
    out.ensure_homogeneous("theorem right side")?;
    RHS.insert((g, j), out.clone());
    Ok(out)
}

/// The pattern relation at `t^{−3−j}`. At `j = 1` it is checked against the
/// replay of the theorem.
pub fn remark1_relation(g: u32, j: u32) -> Result<RelationReport> {
    let mut r = crate::localization::remark1_extract(g, j)?;
    if j == 1 {
        let replay = crate::localization::replay_derivation(g)?;
        let same = replay.lhs == r.lhs && replay.rhs == r.rhs && replay.residual == r.residual;
        r.check("coincides with replay", same, format!("{} vs {} terms", r.lhs.len(), replay.lhs.len()));
    }
    Ok(r)
}

/// `M(2, g+1)` on `M(g, {1, 2})` pushed forward forgetting point 2.
pub fn remark3_kappa_part(g: u32) -> Result<TautClass> {
    let dec = vec![DecorationFactor::Mumford { leg: Leg::Marked(2), degree: g + 1 }];
    let s = DecoratedStratum::single(g, [MARKED, 2], dec)?;
    forget_pushforward(&TautClass::from_stratum(s, Rational::one()), 2, PushMode::Direct)
}

/// `Σ_{h=1}^{g−1} 2h ι_h*(c_h) + 2g π_*(psi_2^{g+1} − ⋯ + (−1)^g λ_g psi_2)`.
pub fn remark3_class(g: u32) -> Result<TautClass> {
    if g < 2 {
        return Err(Error::OutOfRange(format!("relation needs g >= 2 (got {g})")));
    }
    let mut out = TautClass::zero(Ambient::new(g, [MARKED]));
    for h in 1..g {
        out.add_class(&build_c(g, h)?.glue()?, &Rational::from(2 * h as i64))?;
    }
    out.add_class(&remark3_kappa_part(g)?, &Rational::from(2 * g as i64))?;
    out.ensure_homogeneous("kappa relation")?;
    Ok(out)
}

/// The κ relation as a report-only statement `lhs = 0`.
pub fn remark3_relation(g: u32) -> Result<RelationReport> {
    let lhs = remark3_class(g)?;
    let zero = TautClass::zero(lhs.ambient().clone());
    let mut r = RelationReport::new(g, "remark3", lhs.clone(), zero)?;
    r.report_only = true;
    r.check("codimension", lhs.codimension().is_none_or(|c| c == g), format!("{:?}", lhs.codimensions()));
    Ok(r)
}

/// Half the sum of the κ relation and the assembled localization identity,
/// compared with `Σ ι_h*(c_h) + π_*(…) − lhs(g)`. Pure linear algebra on the
/// two relations, so it must hold exactly.
pub fn remark3_auxiliary(g: u32, replay_final: &TautClass) -> Result<RelationReport> {
    let scale = Rational::new(1, 2 * g as i64)?;
    let lhs = remark3_class(g)?.add(replay_final)?.scale(&scale);
    let mut rhs = TautClass::zero(Ambient::new(g, [MARKED]));
    for h in 1..g {
        rhs.add_class(&build_c(g, h)?.glue()?, &Rational::one())?;
    }
    rhs.add_class(&remark3_kappa_part(g)?, &Rational::one())?;
    rhs.add_class(&mumford_lhs(g)?, &-Rational::one())?;
    RelationReport::new(g, "remark3-auxiliary", lhs, rhs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn genus_one_right_side_is_empty() {
        assert!(theorem_rhs(1).unwrap().is_zero());
    }

    #[test]
    fn c_genus_one() {
        let c = build_c(1, 1).unwrap();
        assert_eq!(c.terms, vec![PairTerm { coeff: -Rational::one(), left_degree: 0, right_degree: 0 }]);
    }

    #[test]
    fn c_genus_two() {
        let c = build_c(2, 1).unwrap();
        assert_eq!(c.bidegrees(), [(0, 1), (1, 0)].into_iter().collect());
        let want = &SymbolicPoly::truncated_mumford(SiteTag::Zero, 1, 1)
            - &SymbolicPoly::truncated_mumford(SiteTag::Infinity, 1, 1);
        assert_eq!(c.to_poly(), want);
    }

    #[test]
    fn c_prime_genus_one() {
        let c = build_c_prime(1, 1).unwrap();
        assert_eq!(c.to_poly().to_string(), "ψ_0 - ψ_∞ - λ^0_1");
    }

    #[test]
    fn lhs_degree() {
        assert_eq!(mumford_lhs(4).unwrap().codimension(), Some(4));
    }

    #[test]
    fn rhs_genus_two_shape() {
        let r = theorem_rhs(2).unwrap();
        assert_eq!(r.len(), 2);
        assert_eq!(r.codimension(), Some(2));
        for (_, c) in r.terms() {
            assert_eq!(c.abs(), Rational::new(1, 2).unwrap());
        }
    }
}
