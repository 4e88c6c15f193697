use serde::{Deserialize, Serialize};

use super::{build_stratum, canonical_form, Ambient, StratumSpec, TautClass};
use crate::error::Error;
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermDoc {
    pub coeff: Rational,
    pub automorphisms: u64,
    pub graph: StratumSpec,
}

/// Wire form of a [`TautClass`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassDoc {
    pub ambient: Ambient,
    pub terms: Vec<TermDoc>,
}

impl From<TautClass> for ClassDoc {
    fn from(c: TautClass) -> Self {
        let terms = c
            .terms()
            .map(|(s, coeff)| TermDoc {
                coeff: coeff.clone(),
                automorphisms: canonical_form(s).automorphisms,
                graph: s.to_spec(),
            })
            .collect();
        ClassDoc { ambient: c.ambient().clone(), terms }
    }
}

impl TryFrom<ClassDoc> for TautClass {
    type Error = Error;

    fn try_from(doc: ClassDoc) -> Result<Self, Error> {
        let mut out = TautClass::zero(doc.ambient);
        for t in doc.terms {
            out.add_term(build_stratum(&t.graph)?, t.coeff)?;
        }
        Ok(out)
    }
}
