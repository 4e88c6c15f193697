use crate::error::{Error, Result};
use crate::strata::{glue_strata, Ambient, Label, TautClass};

/// Marking used for the node in factor spaces before gluing.
pub const NODE: Label = 0;

/// Bilinear gluing: each pair of terms is joined at marking `left_leg` of
/// the left term and `right_leg` of the right term.
pub fn glue_classes(left: &TautClass, left_leg: Label, right: &TautClass, right_leg: Label) -> Result<TautClass> {
    let la = left.ambient();
    let ra = right.ambient();
    if !la.markings.contains(&left_leg) {
        return Err(Error::MissingLeg(left_leg));
    }
    if !ra.markings.contains(&right_leg) {
        return Err(Error::MissingLeg(right_leg));
    }
    let ambient = Ambient::new(
        la.genus + ra.genus,
        la.markings
            .iter()
            .copied()
            .filter(|&m| m != left_leg)
            .chain(ra.markings.iter().copied().filter(|&m| m != right_leg)),
    );
    let mut out = TautClass::zero(ambient);
    for (a, ca) in left.terms() {
        for (b, cb) in right.terms() {
            out.add_term(glue_strata(a, left_leg, b, right_leg)?, ca * cb)?;
        }
    }
    Ok(out)
}

/// Gluing pushforward along the node marking [`NODE`] of both factors. The
/// left factor has genus `h`.
pub fn glue_pushforward(left: &TautClass, right: &TautClass, h: u32) -> Result<TautClass> {
    if left.ambient().genus != h {
        return Err(Error::GenusMismatch(format!(
            "left factor has genus {} but h = {h}",
            left.ambient().genus
        )));
    }
    let out = glue_classes(left, NODE, right, NODE)?;
    if let (Some(a), Some(b), Some(c)) = (left.codimension(), right.codimension(), out.codimension()) {
        debug_assert_eq!(c, a + b + 1);
    }
    Ok(out)
}
