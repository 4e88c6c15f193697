//! Geometric operators on formal sums of decorated trees.

mod compare;
mod forget;
mod glue;

use std::collections::BTreeMap;

pub use compare::{comparison_rewrite, reduce_site, reducible_sites, Site};
pub use forget::{
    contract_bubble, dilaton_factor, forget_pullback, forget_pushforward, multiply_kappa, multiply_lambda,
    psi_multiply, PushMode,
};
pub use glue::{glue_classes, glue_pushforward, NODE};

use crate::error::{Error, Result};
use crate::strata::{DecorationFactor, Leg};

/// The part of a vertex decoration sitting at one leg:
/// `psi^psi * Mumford(mumford)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub(crate) struct LegPoly {
    pub psi: u32,
    pub mumford: Option<u32>,
}

impl LegPoly {
    /// `(F(x) - F(0)) / x`, the factor left at a leg after a bubble or a
    /// string lowering. `None` when that is zero.
    pub fn lowered(self) -> Option<LegPoly> {
        match (self.psi, self.mumford) {
            (0, None) => None,
            (0, Some(0)) => None,
            (0, Some(d)) => Some(LegPoly { psi: 0, mumford: Some(d - 1) }),
            (m, mumford) => Some(LegPoly { psi: m - 1, mumford }),
        }
    }

    pub fn factors(self, leg: Leg) -> Vec<DecorationFactor> {
        let mut out = Vec::new();
        if self.psi > 0 {
            out.push(DecorationFactor::Psi { leg, exponent: self.psi });
        }
        if let Some(degree) = self.mumford {
            out.push(DecorationFactor::Mumford { leg, degree });
        }
        out
    }

    /// Expansion in `psi_leg` as `(power, lambda index, sign)` triples on a
    /// vertex of the given genus.
    pub fn monomials(self, genus: u32) -> Vec<(u32, u32, i64)> {
        match self.mumford {
            None => vec![(self.psi, 0, 1)],
            Some(d) => (0..=d.min(genus))
                .map(|j| (self.psi + d - j, j, if j % 2 == 0 { 1 } else { -1 }))
                .collect(),
        }
    }
}

/// A vertex decoration split into per-leg factors and the leg-free rest.
#[derive(Clone, Debug, Default)]
pub(crate) struct SplitDecoration {
    pub legs: BTreeMap<Leg, LegPoly>,
    pub rest: Vec<DecorationFactor>,
}

impl SplitDecoration {
    pub fn new(dec: &[DecorationFactor]) -> Result<Self> {
        let mut out = SplitDecoration::default();
        for f in dec {
            match *f {
                DecorationFactor::Psi { leg, exponent } => out.legs.entry(leg).or_default().psi += exponent,
                DecorationFactor::Mumford { leg, degree } => {
                    let slot = out.legs.entry(leg).or_default();
                    if slot.mumford.is_some() {
                        return Err(Error::UnsupportedDecoration(format!(
                            "two truncated Mumford factors at leg {leg:?}"
                        )));
                    }
                    slot.mumford = Some(degree);
                }
                other => out.rest.push(other),
            }
        }
        Ok(out)
    }

    pub fn has_kappa(&self) -> bool {
        self.rest.iter().any(|f| matches!(f, DecorationFactor::Kappa { .. }))
    }

    /// Reassemble, with the factor at `moved.0` replaced by `moved.2` placed
    /// at leg `moved.1`.
    pub fn assemble(&self, moved: Option<(Leg, Leg, LegPoly)>) -> Vec<DecorationFactor> {
        let mut out = self.rest.clone();
        for (&leg, &lp) in &self.legs {
            match moved {
                Some((from, _, _)) if from == leg => {}
                _ => out.extend(lp.factors(leg)),
            }
        }
        if let Some((_, to, lp)) = moved {
            out.extend(lp.factors(to));
        }
        out
    }
}
