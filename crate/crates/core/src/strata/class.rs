use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::{canonical_form, ClassDoc, Ambient, DecoratedStratum, Label};
use crate::error::{Error, Result};
use crate::rational::Rational;

/// Formal rational linear combination of canonical strata in one ambient
/// space. Terms that vanish for dimension reasons are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "ClassDoc", try_from = "ClassDoc")]
pub struct TautClass {
    ambient: Ambient,
    terms: BTreeMap<DecoratedStratum, Rational>,
}

pub fn class_combine(a: &TautClass, b: &TautClass, coeff_a: &Rational, coeff_b: &Rational) -> Result<TautClass> {
    if a.ambient != b.ambient {
        return Err(Error::AmbientMismatch(a.ambient.clone(), b.ambient.clone()));
    }
    let mut out = a.scale(coeff_a);
    for (s, c) in &b.terms {
        out.add_canonical(s.clone(), c * coeff_b);
    }
    Ok(out)
}

impl TautClass {
    pub fn zero(ambient: Ambient) -> Self {
        TautClass { ambient, terms: BTreeMap::new() }
    }

    pub fn from_stratum(s: DecoratedStratum, c: Rational) -> Self {
        let mut out = TautClass::zero(s.ambient());
        out.add_term(s, c).expect("ambient matches by construction");
        out
    }

    pub fn ambient(&self) -> &Ambient {
        &self.ambient
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

    pub fn terms(&self) -> impl Iterator<Item = (&DecoratedStratum, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, s: &DecoratedStratum) -> Rational {
        let key = canonical_form(s).stratum;
        self.terms.get(&key).cloned().unwrap_or_default()
    }

    /// Add `c * [s]`, canonicalizing `s`.
    pub fn add_term(&mut self, s: DecoratedStratum, c: Rational) -> Result<()> {
        if s.ambient() != self.ambient {
            return Err(Error::AmbientMismatch(self.ambient.clone(), s.ambient()));
        }
        if c.is_zero() || s.vanishes_by_dimension() {
            return Ok(());
        }
        let key = canonical_form(&s).stratum;
        self.add_canonical(key, c);
        Ok(())
    }

    pub(crate) fn add_canonical(&mut self, key: DecoratedStratum, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(key) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_class(&mut self, other: &TautClass, c: &Rational) -> Result<()> {
        if other.ambient != self.ambient {
            return Err(Error::AmbientMismatch(self.ambient.clone(), other.ambient.clone()));
        }
        for (s, v) in &other.terms {
            self.add_canonical(s.clone(), v * c);
        }
        Ok(())
    }

    pub fn scale(&self, c: &Rational) -> TautClass {
        if c.is_zero() {
            return TautClass::zero(self.ambient.clone());
        }
        TautClass {
            ambient: self.ambient.clone(),
            terms: self.terms.iter().map(|(s, v)| (s.clone(), v * c)).collect(),
        }
    }

    pub fn sub(&self, other: &TautClass) -> Result<TautClass> {
        class_combine(self, other, &Rational::one(), &-Rational::one())
    }

    pub fn add(&self, other: &TautClass) -> Result<TautClass> {
        class_combine(self, other, &Rational::one(), &Rational::one())
    }

    pub fn codimensions(&self) -> BTreeSet<u32> {
        self.terms.keys().map(DecoratedStratum::codimension).collect()
    }

    pub fn is_homogeneous(&self) -> bool {
        self.codimensions().len() <= 1
    }

    /// The common codimension; `None` for the zero class or a mixed one.
    pub fn codimension(&self) -> Option<u32> {
        let c = self.codimensions();
        if c.len() == 1 {
            c.into_iter().next()
        } else {
            None
        }
    }

    pub fn ensure_homogeneous(&self, what: &str) -> Result<()> {
        if self.is_homogeneous() {
            Ok(())
        } else {
            Err(Error::InvalidStratum(format!(
                "{what}: class is not codimension-homogeneous ({:?})",
                self.codimensions()
            )))
        }
    }

    /// Same class with every truncated Mumford factor expanded, so that two
    /// presentations of one class compare equal.
    pub fn expanded(&self) -> TautClass {
        let mut out = TautClass::zero(self.ambient.clone());
        for (s, c) in &self.terms {
            if !s.has_mumford() {
                out.add_canonical(s.clone(), c.clone());
                continue;
            }
            for (t, sign) in s.expand_mumford() {
                if !t.vanishes_by_dimension() {
                    out.add_canonical(canonical_form(&t).stratum, c * &Rational::from(sign));
                }
            }
        }
        out
    }

    /// Equal as classes after expanding Mumford factors.
    pub fn same_class(&self, other: &TautClass) -> bool {
        self.ambient == other.ambient && self.expanded() == other.expanded()
    }

    pub fn rename_marking(&self, from: Label, to: Label) -> TautClass {
        let ambient = Ambient::new(
            self.ambient.genus,
            self.ambient.markings.iter().map(|&m| if m == from { to } else { m }),
        );
        let mut out = TautClass::zero(ambient);
        for (s, c) in &self.terms {
            out.add_canonical(canonical_form(&s.rename_marking(from, to)).stratum, c.clone());
        }
        out
    }

    /// Collect per-term results into one class over `ambient`.
    pub fn collect(ambient: Ambient, parts: impl IntoIterator<Item = TautClass>) -> Result<TautClass> {
        let mut out = TautClass::zero(ambient);
        for p in parts {
            out.add_class(&p, &Rational::one())?;
        }
        Ok(out)
    }
}
