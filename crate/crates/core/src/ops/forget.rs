use super::SplitDecoration;
use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::strata::{DecoratedStratum, DecorationFactor, Label, Leg, TautClass, Vertex};

/// How the forgetful pushforward treats decorations at the other legs of the
/// forgotten point's vertex.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum PushMode {
    /// String lowering and Dilaton scaling applied directly, as if the other
    /// decorations were pulled back.
    #[default]
    Direct,
    /// Each decoration is first split into a pullback plus bubble
    /// corrections; the pullback part is pushed by the projection formula and
    /// the bubbles by contraction.
    Corrected,
}

/// `2γ − 2 + n`.
pub fn dilaton_factor(genus: u32, n: usize) -> i64 {
    2 * genus as i64 - 2 + n as i64
}

fn parts(s: &DecoratedStratum) -> (Vec<Vertex>, Vec<(usize, usize)>) {
    (s.vertices().to_vec(), s.edges().to_vec())
}

/// Put `p` (and `r`, if it is a marked leg) on a new genus-0 vertex attached
/// to `v` where the leg `r` used to be. Vertex `v` gets decoration `dec_v`,
/// in which the new node is `Leg::Toward(s.vertices().len())`.
pub(crate) fn bubble(
    s: &DecoratedStratum,
    v: usize,
    r: Leg,
    p: Label,
    dec_v: Vec<DecorationFactor>,
) -> Option<DecoratedStratum> {
    let (mut vertices, mut edges) = parts(s);
    let w = vertices.len();
    let mut markings = vec![p];
    vertices[v].markings.retain(|&m| m != p);
    match r {
        Leg::Marked(m) => {
            vertices[v].markings.retain(|&x| x != m);
            markings.push(m);
        }
        Leg::Toward(u) => {
            edges.retain(|&e| e != (v.min(u), v.max(u)));
            edges.push((w.min(u), w.max(u)));
            for f in vertices[u].decoration.iter_mut() {
                if f.leg() == Some(Leg::Toward(v)) {
                    *f = f.with_leg(Leg::Toward(w));
                }
            }
        }
    }
    edges.push((v, w));
    vertices[v].decoration = dec_v;
    vertices.push(Vertex { genus: 0, markings, decoration: vec![] });
    DecoratedStratum::from_parts(vertices, edges)
}

/// Forget marking `p` sitting on the genus-0, 3-valent vertex `w`: the
/// vertex disappears and its two other legs are joined.
pub fn contract_bubble(s: &DecoratedStratum, w: usize, p: Label) -> Result<DecoratedStratum> {
    let vert = &s.vertices()[w];
    if vert.genus != 0 || s.valence(w) != 3 || !vert.markings.contains(&p) {
        return Err(Error::UnsupportedPushforward(format!(
            "vertex {w} is not a genus-0 3-valent vertex carrying {p}"
        )));
    }
    let others: Vec<Leg> = s.legs(w).into_iter().filter(|&l| l != Leg::Marked(p)).collect();
    let (mut vertices, mut edges) = parts(s);
    edges.retain(|&(a, b)| a != w && b != w);
    match (others[0], others[1]) {
        (Leg::Toward(a), Leg::Toward(b)) => {
            edges.push((a.min(b), a.max(b)));
            for (x, y) in [(a, b), (b, a)] {
                for f in vertices[x].decoration.iter_mut() {
                    if f.leg() == Some(Leg::Toward(w)) {
                        *f = f.with_leg(Leg::Toward(y));
                    }
                }
            }
        }
        (Leg::Marked(m), Leg::Toward(u)) | (Leg::Toward(u), Leg::Marked(m)) => {
            vertices[u].markings.push(m);
            for f in vertices[u].decoration.iter_mut() {
                if f.leg() == Some(Leg::Toward(w)) {
                    *f = f.with_leg(Leg::Marked(m));
                }
            }
        }
        (Leg::Marked(_), Leg::Marked(_)) => return Err(Error::Unstable { genus: 0, legs: 2 }),
    }
    let out = DecoratedStratum::without_vertex(vertices, edges, w)
        .ok_or_else(|| Error::InvalidStratum("contraction produced a vanishing decoration".into()))?;
    out.validate()?;
    Ok(out)
}

fn without_marking(s: &DecoratedStratum, v: usize, p: Label, dec: Vec<DecorationFactor>) -> Result<Option<DecoratedStratum>> {
    let (mut vertices, edges) = parts(s);
    vertices[v].markings.retain(|&m| m != p);
    vertices[v].decoration = dec;
    match DecoratedStratum::from_parts(vertices, edges) {
        Some(t) => {
            t.validate()?;
            Ok(Some(t))
        }
        None => Ok(None),
    }
}

fn push_term(s: &DecoratedStratum, c: &Rational, p: Label, mode: PushMode) -> Result<Vec<(DecoratedStratum, Rational)>> {
    let v = s.vertex_of_marking(p).ok_or(Error::MissingLeg(p))?;
    let vert = &s.vertices()[v];
    if vert.genus == 0 && s.valence(v) == 3 {
        if !vert.decoration.is_empty() {
            return Ok(vec![]);
        }
        return Ok(vec![(contract_bubble(s, v, p)?, c.clone())]);
    }
    let mut split = SplitDecoration::new(&vert.decoration)?;
    let at_p = split.legs.remove(&Leg::Marked(p)).unwrap_or_default();
    let n_after = s.valence(v) - 1;
    let dil = Rational::from(dilaton_factor(vert.genus, n_after));
    let mut out = Vec::new();
    for (b, j, sign) in at_p.monomials(vert.genus) {
        let coeff = c * &Rational::from(sign);
        let lambda: Vec<DecorationFactor> =
            if j > 0 { vec![DecorationFactor::Lambda { index: j, exponent: 1 }] } else { vec![] };
        let with_extra = |mut d: Vec<DecorationFactor>| {
            d.extend(lambda.iter().copied());
            d
        };
        match b {
            0 => {
                for (&leg, &lp) in &split.legs {
                    let Some(low) = lp.lowered() else { continue };
                    let t = match mode {
                        PushMode::Direct => without_marking(s, v, p, with_extra(split.assemble(Some((leg, leg, low)))))?,
                        PushMode::Corrected => {
                            let w = s.vertices().len();
                            let dec = with_extra(split.assemble(Some((leg, Leg::Toward(w), low))));
                            match bubble(s, v, leg, p, dec) {
                                Some(bub) => Some(contract_bubble(&bub, w, p)?),
                                None => None,
                            }
                        }
                    };
                    if let Some(t) = t {
                        out.push((t, coeff.clone()));
                    }
                }
            }
            1 => {
                if mode == PushMode::Corrected {
                    // psi_p kills every bubble correction
                    for (&leg, &lp) in &split.legs {
                        let Some(low) = lp.lowered() else { continue };
                        let w = s.vertices().len();
                        let dec = with_extra(split.assemble(Some((leg, Leg::Toward(w), low))));
                        if let Some(bub) = bubble(s, v, leg, p, dec) {
                            let (mut vs, es) = (bub.vertices().to_vec(), bub.edges().to_vec());
                            vs[w].decoration.push(DecorationFactor::Psi { leg: Leg::Marked(p), exponent: 1 });
                            let killed = DecoratedStratum::from_parts(vs, es).is_none_or(|t| t.vanishes_by_dimension());
                            if !killed {
                                return Err(Error::UnsupportedPushforward(
                                    "psi at the forgotten point does not annihilate a bubble".into(),
                                ));
                            }
                        }
                    }
                }
                if let Some(t) = without_marking(s, v, p, with_extra(split.assemble(None)))? {
                    out.push((t, &coeff * &dil));
                }
            }
            _ => {
                if !split.legs.is_empty() {
                    return Err(Error::UnsupportedPushforward(format!(
                        "psi_{p}^{b} with further psi classes on the same vertex"
                    )));
                }
                let mut dec = with_extra(split.rest.clone());
                dec.push(DecorationFactor::Kappa { index: b - 1, exponent: 1 });
                if let Some(t) = without_marking(s, v, p, dec)? {
                    out.push((t, coeff));
                }
            }
        }
    }
    Ok(out)
}

/// Pushforward along the map forgetting marking `p`.
pub fn forget_pushforward(c: &TautClass, p: Label, mode: PushMode) -> Result<TautClass> {
    if !c.ambient().markings.contains(&p) {
        return Err(Error::MissingLeg(p));
    }
    let target = c.ambient().without(p);
    if !target.is_stable() {
        return Err(Error::Unstable { genus: target.genus, legs: target.markings.len() });
    }
    let mut out = TautClass::zero(target);
    for (s, coeff) in c.terms() {
        for (t, k) in push_term(s, coeff, p, mode)? {
            out.add_term(t, k)?;
        }
    }
    if let (Some(a), Some(b)) = (c.codimension(), out.codimension()) {
        debug_assert_eq!(a, b + 1);
    }
    Ok(out)
}

/// Pullback along the map forgetting a new marking `p`.
pub fn forget_pullback(c: &TautClass, p: Label) -> Result<TautClass> {
    if c.ambient().markings.contains(&p) {
        return Err(Error::RepeatedMarking(p));
    }
    let mut out = TautClass::zero(c.ambient().with(p));
    for (s, coeff) in c.terms() {
        for (v, vert) in s.vertices().iter().enumerate() {
            let split = SplitDecoration::new(&vert.decoration)?;
            if split.has_kappa() {
                return Err(Error::UnsupportedDecoration("kappa class under forgetful pullback".into()));
            }
            let (mut vertices, edges) = parts(s);
            vertices[v].markings.push(p);
            if let Some(t) = DecoratedStratum::from_parts(vertices, edges) {
                out.add_term(t, coeff.clone())?;
            }
            let w = s.vertices().len();
            for (&r, &lp) in &split.legs {
                let Some(low) = lp.lowered() else { continue };
                let dec = split.assemble(Some((r, Leg::Toward(w), low)));
                if let Some(t) = bubble(s, v, r, p, dec) {
                    out.add_term(t, -coeff)?;
                }
            }
        }
    }
    if let (Some(a), Some(b)) = (c.codimension(), out.codimension()) {
        debug_assert_eq!(a, b);
    }
    Ok(out)
}

/// Multiply by `psi_leg`.
pub fn psi_multiply(c: &TautClass, leg: Label) -> Result<TautClass> {
    if !c.ambient().markings.contains(&leg) {
        return Err(Error::MissingLeg(leg));
    }
    let mut out = TautClass::zero(c.ambient().clone());
    for (s, coeff) in c.terms() {
        let v = s.vertex_of_marking(leg).ok_or(Error::MissingLeg(leg))?;
        let (mut vertices, edges) = parts(s);
        vertices[v].decoration.push(DecorationFactor::Psi { leg: Leg::Marked(leg), exponent: 1 });
        if let Some(t) = DecoratedStratum::from_parts(vertices, edges) {
            out.add_term(t, coeff.clone())?;
        }
    }
    Ok(out)
}

/// Multiply by `lambda_j`, split over the vertices as the Hodge bundle of a
/// compact-type curve is.
pub fn multiply_lambda(c: &TautClass, j: u32) -> Result<TautClass> {
    if j == 0 {
        return Ok(c.clone());
    }
    let mut out = TautClass::zero(c.ambient().clone());
    for (s, coeff) in c.terms() {
        let genera: Vec<u32> = s.vertices().iter().map(|v| v.genus).collect();
        for split in compositions(j, &genera) {
            let (mut vertices, edges) = parts(s);
            for (v, &k) in split.iter().enumerate() {
                if k > 0 {
                    vertices[v].decoration.push(DecorationFactor::Lambda { index: k, exponent: 1 });
                }
            }
            if let Some(t) = DecoratedStratum::from_parts(vertices, edges) {
                out.add_term(t, coeff.clone())?;
            }
        }
    }
    Ok(out)
}

/// Multiply by `kappa_a`, a sum over vertices.
pub fn multiply_kappa(c: &TautClass, a: u32) -> Result<TautClass> {
    if a == 0 {
        return Err(Error::OutOfRange("kappa_0 is a scalar, not a class factor".into()));
    }
    let mut out = TautClass::zero(c.ambient().clone());
    for (s, coeff) in c.terms() {
        for v in 0..s.vertices().len() {
            let (mut vertices, edges) = parts(s);
            vertices[v].decoration.push(DecorationFactor::Kappa { index: a, exponent: 1 });
            if let Some(t) = DecoratedStratum::from_parts(vertices, edges) {
                out.add_term(t, coeff.clone())?;
            }
        }
    }
    Ok(out)
}

/// Ways of writing `total` as `k_0 + k_1 + ...` with `k_i <= caps[i]`.
fn compositions(total: u32, caps: &[u32]) -> Vec<Vec<u32>> {
    let Some((&first, rest)) = caps.split_first() else {
        return if total == 0 { vec![vec![]] } else { vec![] };
    };
    let mut out = Vec::new();
    for k in 0..=first.min(total) {
        for mut tail in compositions(total - k, rest) {
            tail.insert(0, k);
            out.push(tail);
        }
    }
    out
}
