//! Decorated stable trees (compact-type boundary strata) and formal sums of
//! them.
//!
//! A stratum is stored with vertex-relative leg references: a marked leg is
//! named by its marking label and a node half-edge by the neighbouring vertex
//! it points toward. On a tree this names every half-edge uniquely, so no
//! separate half-edge identifiers need to be carried around.

mod canonical;
mod class;
mod serial;
mod spec;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

pub use canonical::{canonical_form, canonical_form_exhaustive, CanonicalForm};
pub use class::{class_combine, TautClass};
pub use serial::{ClassDoc, TermDoc};
pub use spec::{build_stratum, DecorationSpec, FactorSpec, StratumSpec, VertexSpec};

use crate::error::{Error, Result};

pub type Label = u32;

/// Base for the temporary labels given to node half-edges when a single
/// vertex is treated as its own moduli space.
pub const NODE_LABEL_BASE: Label = 1 << 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Leg {
    Marked(Label),
    /// Half-edge pointing at the given neighbour vertex.
    Toward(usize),
}

impl Leg {
    fn remap(self, f: impl Fn(usize) -> usize) -> Leg {
        match self {
            Leg::Toward(u) => Leg::Toward(f(u)),
            m => m,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DecorationFactor {
    Psi { leg: Leg, exponent: u32 },
    Lambda { index: u32, exponent: u32 },
    Kappa { index: u32, exponent: u32 },
    /// `sum_{j=0}^{genus} (-1)^j lambda_j psi_leg^{degree-j}`, negative psi
    /// powers dropped.
    Mumford { leg: Leg, degree: u32 },
}

impl DecorationFactor {
    pub fn degree(&self) -> u32 {
        match *self {
            DecorationFactor::Psi { exponent, .. } => exponent,
            DecorationFactor::Lambda { index, exponent } => index * exponent,
            DecorationFactor::Kappa { index, exponent } => index * exponent,
            DecorationFactor::Mumford { degree, .. } => degree,
        }
    }

    pub fn leg(&self) -> Option<Leg> {
        match *self {
            DecorationFactor::Psi { leg, .. } | DecorationFactor::Mumford { leg, .. } => Some(leg),
            _ => None,
        }
    }

    pub(crate) fn with_leg(self, leg: Leg) -> Self {
        match self {
            DecorationFactor::Psi { exponent, .. } => DecorationFactor::Psi { leg, exponent },
            DecorationFactor::Mumford { degree, .. } => DecorationFactor::Mumford { leg, degree },
            other => other,
        }
    }

    pub(crate) fn remap(self, f: impl Fn(usize) -> usize) -> Self {
        match self.leg() {
            Some(leg) => self.with_leg(leg.remap(f)),
            None => self,
        }
    }

    /// A truncated Mumford factor of degree at least the host genus.
    pub fn is_reducible(&self, genus: u32) -> bool {
        matches!(*self, DecorationFactor::Mumford { degree, .. } if degree >= genus && genus >= 1)
    }
}

/// Normalize a vertex decoration in place. Returns `false` when the product
/// is zero (a lambda class above the vertex genus).
///
/// Powers at the same leg or index are combined; `Mumford(d)` with `d = 0`
/// is dropped; on a genus-0 vertex `Mumford(d)` is `psi^d`; a psi power at a
/// leg carrying a reducible Mumford factor is absorbed into it.
pub fn normalize_decoration(genus: u32, factors: &mut Vec<DecorationFactor>) -> bool {
    let mut psi: BTreeMap<Leg, u32> = BTreeMap::new();
    let mut lambda: BTreeMap<u32, u32> = BTreeMap::new();
    let mut kappa: BTreeMap<u32, u32> = BTreeMap::new();
    let mut mumford: Vec<(Leg, u32)> = Vec::new();
    for f in factors.drain(..) {
        match f {
            DecorationFactor::Psi { exponent: 0, .. }
            | DecorationFactor::Lambda { exponent: 0, .. }
            | DecorationFactor::Kappa { exponent: 0, .. }
            | DecorationFactor::Mumford { degree: 0, .. } => {}
            DecorationFactor::Psi { leg, exponent } => *psi.entry(leg).or_default() += exponent,
            DecorationFactor::Lambda { index, exponent } => {
                if index > genus {
                    return false;
                }
                *lambda.entry(index).or_default() += exponent;
            }
            DecorationFactor::Kappa { index, exponent } => {
                *kappa.entry(index).or_default() += exponent
            }
            DecorationFactor::Mumford { leg, degree } => {
                if genus == 0 {
                    *psi.entry(leg).or_default() += degree;
                } else {
                    mumford.push((leg, degree));
                }
            }
        }
    }
    mumford.sort();
    // absorb psi_leg^e into the first reducible Mumford factor at that leg
    for (leg, degree) in mumford.iter_mut() {
        if *degree >= genus {
            if let Some(e) = psi.remove(leg) {
                *degree += e;
            }
        }
    }
    mumford.sort();
    factors.extend(psi.into_iter().map(|(leg, exponent)| DecorationFactor::Psi { leg, exponent }));
    factors.extend(
        lambda.into_iter().map(|(index, exponent)| DecorationFactor::Lambda { index, exponent }),
    );
    factors.extend(
        kappa.into_iter().map(|(index, exponent)| DecorationFactor::Kappa { index, exponent }),
    );
    factors.extend(mumford.into_iter().map(|(leg, degree)| DecorationFactor::Mumford { leg, degree }));
    true
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Vertex {
    pub genus: u32,
    /// Sorted marking labels carried by this vertex.
    pub markings: Vec<Label>,
    /// Normalized, sorted decoration factors.
    pub decoration: Vec<DecorationFactor>,
}

impl Vertex {
    pub fn decoration_degree(&self) -> u32 {
        self.decoration.iter().map(DecorationFactor::degree).sum()
    }
}

/// The genus and marking set of a moduli space.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Ambient {
    pub genus: u32,
    pub markings: Vec<Label>,
}

impl Ambient {
    pub fn new(genus: u32, markings: impl IntoIterator<Item = Label>) -> Self {
        let mut markings: Vec<Label> = markings.into_iter().collect();
        markings.sort_unstable();
        markings.dedup();
        Ambient { genus, markings }
    }

    pub fn is_stable(&self) -> bool {
        2 * self.genus as i64 - 2 + self.markings.len() as i64 > 0
    }

    pub fn dimension(&self) -> i64 {
        3 * self.genus as i64 - 3 + self.markings.len() as i64
    }

    pub fn without(&self, label: Label) -> Ambient {
        Ambient::new(self.genus, self.markings.iter().copied().filter(|&m| m != label))
    }

    pub fn with(&self, label: Label) -> Ambient {
        Ambient::new(self.genus, self.markings.iter().copied().chain([label]))
    }
}

impl fmt::Display for Ambient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m: Vec<String> = self.markings.iter().map(ToString::to_string).collect();
        write!(f, "M({}, {{{}}})", self.genus, m.join(","))
    }
}

/// One boundary-stratum class: a stable tree with per-vertex decorations.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DecoratedStratum {
    vertices: Vec<Vertex>,
    /// Sorted pairs `(u, v)` with `u < v`.
    edges: Vec<(usize, usize)>,
}

impl DecoratedStratum {
    /// Assemble and validate. Decorations are normalized; a decoration that
    /// normalizes to zero is reported as a lambda-index error.
    pub fn new(mut vertices: Vec<Vertex>, edges: Vec<(usize, usize)>) -> Result<Self> {
        let mut edges: Vec<(usize, usize)> =
            edges.into_iter().map(|(a, b)| (a.min(b), a.max(b))).collect();
        edges.sort_unstable();
        for v in vertices.iter_mut() {
            v.markings.sort_unstable();
            for f in &v.decoration {
                if let DecorationFactor::Lambda { index, .. } = *f {
                    if index > v.genus || index == 0 {
                        return Err(Error::LambdaIndex { index, genus: v.genus });
                    }
                }
            }
            normalize_decoration(v.genus, &mut v.decoration);
        }
        let s = DecoratedStratum { vertices, edges };
        s.validate()?;
        Ok(s)
    }

    /// Single-vertex stratum.
    pub fn single(genus: u32, markings: impl IntoIterator<Item = Label>, decoration: Vec<DecorationFactor>) -> Result<Self> {
        DecoratedStratum::new(
            vec![Vertex { genus, markings: markings.into_iter().collect(), decoration }],
            vec![],
        )
    }

    /// Build without normalizing; `None` when a decoration vanishes.
    pub(crate) fn from_parts(mut vertices: Vec<Vertex>, mut edges: Vec<(usize, usize)>) -> Option<Self> {
        for (a, b) in edges.iter_mut() {
            if *a > *b {
                std::mem::swap(a, b);
            }
        }
        edges.sort_unstable();
        for v in vertices.iter_mut() {
            v.markings.sort_unstable();
            if !normalize_decoration(v.genus, &mut v.decoration) {
                return None;
            }
        }
        Some(DecoratedStratum { vertices, edges })
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn genus(&self) -> u32 {
        self.vertices.iter().map(|v| v.genus).sum()
    }

    pub fn markings(&self) -> Vec<Label> {
        let mut m: Vec<Label> = self.vertices.iter().flat_map(|v| v.markings.iter().copied()).collect();
        m.sort_unstable();
        m
    }

    pub fn ambient(&self) -> Ambient {
        Ambient::new(self.genus(), self.markings())
    }

    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        self.edges
            .iter()
            .filter_map(|&(a, b)| {
                if a == v {
                    Some(b)
                } else if b == v {
                    Some(a)
                } else {
                    None
                }
            })
            .collect()
    }

    pub fn valence(&self, v: usize) -> usize {
        self.vertices[v].markings.len() + self.edges.iter().filter(|&&(a, b)| a == v || b == v).count()
    }

    pub fn legs(&self, v: usize) -> Vec<Leg> {
        let mut legs: Vec<Leg> = self.vertices[v].markings.iter().map(|&m| Leg::Marked(m)).collect();
        legs.extend(self.neighbors(v).into_iter().map(Leg::Toward));
        legs
    }

    pub fn vertex_of_marking(&self, label: Label) -> Option<usize> {
        self.vertices.iter().position(|v| v.markings.contains(&label))
    }

    /// Dimension of the moduli space of vertex `v`.
    pub fn vertex_dimension(&self, v: usize) -> i64 {
        3 * self.vertices[v].genus as i64 - 3 + self.valence(v) as i64
    }

    /// Number of edges plus total decoration degree.
    pub fn codimension(&self) -> u32 {
        self.edges.len() as u32 + self.vertices.iter().map(Vertex::decoration_degree).sum::<u32>()
    }

    /// True when some vertex carries a decoration above its dimension.
    pub fn vanishes_by_dimension(&self) -> bool {
        (0..self.vertices.len())
            .any(|v| self.vertices[v].decoration_degree() as i64 > self.vertex_dimension(v))
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.vertices.len();
        if n == 0 {
            return Err(Error::InvalidStratum("no vertices".into()));
        }
        for w in self.edges.windows(2) {
            if w[0] == w[1] {
                return Err(Error::NotATree("repeated edge".into()));
            }
        }
        for &(a, b) in &self.edges {
            if a == b {
                return Err(Error::NotATree("loop".into()));
            }
            if b >= n {
                return Err(Error::InvalidStratum(format!("edge endpoint {b} out of range")));
            }
        }
        if self.edges.len() + 1 != n {
            return Err(Error::NotATree(format!("{} vertices but {} edges", n, self.edges.len())));
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for u in self.neighbors(v) {
                if !seen[u] {
                    seen[u] = true;
                    stack.push(u);
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::NotATree("disconnected".into()));
        }
        let mut labels: Vec<Label> = Vec::new();
        for (i, v) in self.vertices.iter().enumerate() {
            let legs = self.valence(i);
            if 2 * v.genus as i64 - 2 + legs as i64 <= 0 {
                return Err(Error::Unstable { genus: v.genus, legs });
            }
            labels.extend(&v.markings);
            let own = self.legs(i);
            for f in &v.decoration {
                if let Some(leg) = f.leg() {
                    if !own.contains(&leg) {
                        return Err(Error::InvalidStratum(format!(
                            "decoration {f:?} refers to a leg not on vertex {i}"
                        )));
                    }
                }
                if let DecorationFactor::Lambda { index, .. } = *f {
                    if index > v.genus {
                        return Err(Error::LambdaIndex { index, genus: v.genus });
                    }
                }
            }
        }
        labels.sort_unstable();
        for w in labels.windows(2) {
            if w[0] == w[1] {
                return Err(Error::RepeatedMarking(w[0]));
            }
        }
        Ok(())
    }

    /// Reorder vertices: old vertex `i` moves to position `perm[i]`.
    pub fn relabel(&self, perm: &[usize]) -> DecoratedStratum {
        let n = self.vertices.len();
        let mut vertices: Vec<Option<Vertex>> = vec![None; n];
        for (old, v) in self.vertices.iter().enumerate() {
            let mut dec: Vec<DecorationFactor> =
                v.decoration.iter().map(|f| f.remap(|u| perm[u])).collect();
            dec.sort_unstable();
            vertices[perm[old]] = Some(Vertex { genus: v.genus, markings: v.markings.clone(), decoration: dec });
        }
        let mut edges: Vec<(usize, usize)> = self
            .edges
            .iter()
            .map(|&(a, b)| {
                let (x, y) = (perm[a], perm[b]);
                (x.min(y), x.max(y))
            })
            .collect();
        edges.sort_unstable();
        DecoratedStratum { vertices: vertices.into_iter().map(Option::unwrap).collect(), edges }
    }

    /// Replace vertex `v` by the tree `local`. `local` is a stratum on the
    /// moduli space of `v`, with each of its marking labels sent to the leg
    /// of `v` it stands for by `leg_of`. `None` when a decoration vanishes.
    pub fn splice(&self, v: usize, local: &DecoratedStratum, leg_of: &BTreeMap<Label, Leg>) -> Option<DecoratedStratum> {
        let n = self.vertices.len();
        let local_index = |i: usize| if i == 0 { v } else { n + i - 1 };
        let mut vertices = self.vertices.clone();
        vertices.resize(n + local.vertices.len() - 1, Vertex { genus: 0, markings: vec![], decoration: vec![] });
        let mut edges: Vec<(usize, usize)> =
            self.edges.iter().copied().filter(|&(a, b)| a != v && b != v).collect();
        // outer neighbour u of v -> new vertex that now carries that half-edge
        let mut redirect: BTreeMap<usize, usize> = BTreeMap::new();
        for (i, lv) in local.vertices.iter().enumerate() {
            let new_i = local_index(i);
            let mut markings = Vec::new();
            for &m in &lv.markings {
                match leg_of.get(&m) {
                    Some(Leg::Marked(outer)) => markings.push(*outer),
                    Some(Leg::Toward(u)) => {
                        edges.push((new_i, *u));
                        redirect.insert(*u, new_i);
                    }
                    None => markings.push(m),
                }
            }
            let decoration = lv
                .decoration
                .iter()
                .map(|f| match f.leg() {
                    Some(Leg::Marked(m)) => match leg_of.get(&m) {
                        Some(&outer) => f.with_leg(outer),
                        None => *f,
                    },
                    Some(Leg::Toward(j)) => f.with_leg(Leg::Toward(local_index(j))),
                    None => *f,
                })
                .collect();
            vertices[new_i] = Vertex { genus: lv.genus, markings, decoration };
        }
        for &(a, b) in &local.edges {
            edges.push((local_index(a), local_index(b)));
        }
        for (u, new_i) in &redirect {
            let vert = &mut vertices[*u];
            vert.decoration = vert
                .decoration
                .iter()
                .map(|f| match f.leg() {
                    Some(Leg::Toward(x)) if x == v => f.with_leg(Leg::Toward(*new_i)),
                    _ => *f,
                })
                .collect();
        }
        DecoratedStratum::from_parts(vertices, edges)
    }

    /// The moduli space of vertex `v` as a stand-alone ambient: its markings
    /// keep their labels and the half-edge toward neighbour `u` becomes
    /// marking `NODE_LABEL_BASE + u`.
    pub fn vertex_space(&self, v: usize) -> (Ambient, BTreeMap<Label, Leg>) {
        let mut leg_of = BTreeMap::new();
        for leg in self.legs(v) {
            leg_of.insert(local_label(leg), leg);
        }
        (Ambient::new(self.vertices[v].genus, leg_of.keys().copied()), leg_of)
    }

    /// Decoration of vertex `v` rewritten in the labels of [`Self::vertex_space`].
    pub fn local_decoration(&self, v: usize) -> Vec<DecorationFactor> {
        self.vertices[v]
            .decoration
            .iter()
            .map(|f| match f.leg() {
                Some(leg) => f.with_leg(Leg::Marked(local_label(leg))),
                None => *f,
            })
            .collect()
    }

    /// Same tree with vertex `v`'s decoration replaced.
    pub fn with_decoration(&self, v: usize, decoration: Vec<DecorationFactor>) -> Option<DecoratedStratum> {
        let mut vertices = self.vertices.clone();
        vertices[v].decoration = decoration;
        DecoratedStratum::from_parts(vertices, self.edges.clone())
    }
}

impl DecoratedStratum {
    /// Rename a marking label everywhere it occurs.
    pub fn rename_marking(&self, from: Label, to: Label) -> DecoratedStratum {
        let swap = |m: Label| if m == from { to } else { m };
        let vertices = self
            .vertices
            .iter()
            .map(|v| {
                let mut markings: Vec<Label> = v.markings.iter().map(|&m| swap(m)).collect();
                markings.sort_unstable();
                let mut decoration: Vec<DecorationFactor> = v
                    .decoration
                    .iter()
                    .map(|f| match f.leg() {
                        Some(Leg::Marked(m)) => f.with_leg(Leg::Marked(swap(m))),
                        _ => *f,
                    })
                    .collect();
                decoration.sort_unstable();
                Vertex { genus: v.genus, markings, decoration }
            })
            .collect();
        DecoratedStratum { vertices, edges: self.edges.clone() }
    }

    /// Drop vertex `v` after its edges have been rerouted by the caller:
    /// `edges` must no longer mention `v`. Indices above `v` shift down.
    pub(crate) fn without_vertex(mut vertices: Vec<Vertex>, edges: Vec<(usize, usize)>, v: usize) -> Option<DecoratedStratum> {
        let shift = |u: usize| if u > v { u - 1 } else { u };
        vertices.remove(v);
        for vert in vertices.iter_mut() {
            vert.decoration = vert.decoration.iter().map(|f| f.remap(shift)).collect();
        }
        let edges = edges.into_iter().map(|(a, b)| (shift(a), shift(b))).collect();
        DecoratedStratum::from_parts(vertices, edges)
    }

    /// Every truncated Mumford factor written out as its signed sum of
    /// lambda-psi monomials.
    pub fn expand_mumford(&self) -> Vec<(DecoratedStratum, i64)> {
        let mut acc: Vec<(Vec<Vertex>, i64)> = vec![(self.vertices.clone(), 1)];
        for (i, v) in self.vertices.iter().enumerate() {
            for f in &v.decoration {
                let DecorationFactor::Mumford { leg, degree } = *f else { continue };
                let mut next = Vec::new();
                for (verts, sign) in &acc {
                    for j in 0..=degree.min(v.genus) {
                        let mut verts = verts.clone();
                        let dec = &mut verts[i].decoration;
                        let pos = dec.iter().position(|g| g == f).expect("factor present");
                        dec.remove(pos);
                        dec.push(DecorationFactor::Psi { leg, exponent: degree - j });
                        if j > 0 {
                            dec.push(DecorationFactor::Lambda { index: j, exponent: 1 });
                        }
                        next.push((verts, if j % 2 == 0 { *sign } else { -sign }));
                    }
                }
                acc = next;
            }
        }
        acc.into_iter()
            .filter_map(|(verts, sign)| DecoratedStratum::from_parts(verts, self.edges.clone()).map(|s| (s, sign)))
            .collect()
    }

    pub fn has_mumford(&self) -> bool {
        self.vertices
            .iter()
            .any(|v| v.decoration.iter().any(|f| matches!(f, DecorationFactor::Mumford { .. })))
    }
}

pub(crate) fn local_label(leg: Leg) -> Label {
    match leg {
        Leg::Marked(m) => m,
        Leg::Toward(u) => NODE_LABEL_BASE + u as Label,
    }
}

/// Join marking `left_leg` of `a` to marking `right_leg` of `b` by a new edge.
pub fn glue_strata(a: &DecoratedStratum, left_leg: Label, b: &DecoratedStratum, right_leg: Label) -> Result<DecoratedStratum> {
    let va = a.vertex_of_marking(left_leg).ok_or(Error::MissingLeg(left_leg))?;
    let vb = b.vertex_of_marking(right_leg).ok_or(Error::MissingLeg(right_leg))?;
    let off = a.vertices.len();
    let vb_new = vb + off;
    let mut vertices = Vec::with_capacity(a.vertices.len() + b.vertices.len());
    for (i, v) in a.vertices.iter().enumerate() {
        let mut v = v.clone();
        if i == va {
            v.markings.retain(|&m| m != left_leg);
        }
        v.decoration = v
            .decoration
            .iter()
            .map(|f| match f.leg() {
                Some(Leg::Marked(m)) if m == left_leg => f.with_leg(Leg::Toward(vb_new)),
                _ => *f,
            })
            .collect();
        vertices.push(v);
    }
    for (i, v) in b.vertices.iter().enumerate() {
        let mut v = v.clone();
        if i == vb {
            v.markings.retain(|&m| m != right_leg);
        }
        v.decoration = v
            .decoration
            .iter()
            .map(|f| match f.leg() {
                Some(Leg::Marked(m)) if m == right_leg => f.with_leg(Leg::Toward(va)),
                _ => f.remap(|u| u + off),
            })
            .collect();
        vertices.push(v);
    }
    let mut edges = a.edges.clone();
    edges.extend(b.edges.iter().map(|&(x, y)| (x + off, y + off)));
    edges.push((va, vb_new));
    let s = DecoratedStratum::from_parts(vertices, edges)
        .ok_or_else(|| Error::InvalidStratum("glued decoration vanished".into()))?;
    s.validate()?;
    Ok(s)
}
