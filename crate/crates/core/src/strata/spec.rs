//! Builder input and the serialized graph shape.
//!
//! Legs are strings: `"p<label>"` is a marked point, anything else names a
//! node half-edge and must appear in exactly one edge.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{DecoratedStratum, DecorationFactor, Label, Leg, Vertex};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexSpec {
    pub genus: u32,
    pub legs: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FactorSpec {
    Psi { leg: String, exponent: u32 },
    Lambda { index: u32, exponent: u32 },
    Kappa { index: u32, exponent: u32 },
    Mumford { leg: String, degree: u32 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecorationSpec {
    pub vertex: usize,
    pub factor: FactorSpec,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StratumSpec {
    pub vertices: Vec<VertexSpec>,
    pub edges: Vec<[String; 2]>,
    #[serde(default)]
    pub decorations: Vec<DecorationSpec>,
}

fn parse_marking(leg: &str) -> Option<Label> {
    leg.strip_prefix('p').and_then(|s| s.parse().ok())
}

/// Validate a spec and produce the normalized stratum.
pub fn build_stratum(spec: &StratumSpec) -> Result<DecoratedStratum> {
    let n = spec.vertices.len();
    // half-edge id -> owning vertex
    let mut owner: BTreeMap<&str, usize> = BTreeMap::new();
    let mut vertices: Vec<Vertex> = Vec::with_capacity(n);
    for (i, vs) in spec.vertices.iter().enumerate() {
        let mut markings = Vec::new();
        for leg in &vs.legs {
            match parse_marking(leg) {
                Some(m) => markings.push(m),
                None => {
                    if owner.insert(leg.as_str(), i).is_some() {
                        return Err(Error::InvalidStratum(format!("half-edge {leg:?} used twice")));
                    }
                }
            }
        }
        vertices.push(Vertex { genus: vs.genus, markings, decoration: vec![] });
    }
    let mut used: BTreeMap<&str, usize> = BTreeMap::new();
    let mut edges = Vec::with_capacity(spec.edges.len());
    for [a, b] in &spec.edges {
        let va = *owner
            .get(a.as_str())
            .ok_or_else(|| Error::InvalidStratum(format!("edge uses unknown half-edge {a:?}")))?;
        let vb = *owner
            .get(b.as_str())
            .ok_or_else(|| Error::InvalidStratum(format!("edge uses unknown half-edge {b:?}")))?;
        for h in [a, b] {
            if used.insert(h.as_str(), 0).is_some() {
                return Err(Error::InvalidStratum(format!("half-edge {h:?} in two edges")));
            }
        }
        if va == vb {
            return Err(Error::NotATree("loop".into()));
        }
        edges.push((va, vb));
    }
    if let Some(h) = owner.keys().find(|h| !used.contains_key(*h)) {
        return Err(Error::InvalidStratum(format!("half-edge {h:?} is not part of an edge")));
    }
    // half-edge id -> the neighbour it points at
    let mut toward: BTreeMap<&str, usize> = BTreeMap::new();
    for [a, b] in &spec.edges {
        toward.insert(a.as_str(), owner[b.as_str()]);
        toward.insert(b.as_str(), owner[a.as_str()]);
    }
    let resolve = |vertex: usize, leg: &str| -> Result<Leg> {
        if let Some(m) = parse_marking(leg) {
            if !vertices[vertex].markings.contains(&m) {
                return Err(Error::InvalidStratum(format!("marking {m} is not on vertex {vertex}")));
            }
            return Ok(Leg::Marked(m));
        }
        match (owner.get(leg), toward.get(leg)) {
            (Some(&o), Some(&u)) if o == vertex => Ok(Leg::Toward(u)),
            _ => Err(Error::InvalidStratum(format!("leg {leg:?} is not on vertex {vertex}"))),
        }
    };
    let mut decorations: Vec<Vec<DecorationFactor>> = vec![vec![]; n];
    for d in &spec.decorations {
        if d.vertex >= n {
            return Err(Error::InvalidStratum(format!("decoration on missing vertex {}", d.vertex)));
        }
        let f = match &d.factor {
            FactorSpec::Psi { leg, exponent } => {
                DecorationFactor::Psi { leg: resolve(d.vertex, leg)?, exponent: *exponent }
            }
            FactorSpec::Lambda { index, exponent } => {
                DecorationFactor::Lambda { index: *index, exponent: *exponent }
            }
            FactorSpec::Kappa { index, exponent } => {
                if *index == 0 {
                    return Err(Error::InvalidStratum("kappa index must be >= 1".into()));
                }
                DecorationFactor::Kappa { index: *index, exponent: *exponent }
            }
            FactorSpec::Mumford { leg, degree } => {
                DecorationFactor::Mumford { leg: resolve(d.vertex, leg)?, degree: *degree }
            }
        };
        decorations[d.vertex].push(f);
    }
    for (v, dec) in vertices.iter_mut().zip(decorations) {
        v.decoration = dec;
    }
    DecoratedStratum::new(vertices, edges)
}

impl DecoratedStratum {
    /// Serialized shape with deterministic half-edge names: edge `k` joins
    /// `h{2k}` on its lower endpoint to `h{2k+1}` on its upper endpoint.
    pub fn to_spec(&self) -> StratumSpec {
        let half = |v: usize, u: usize| -> String {
            let k = self
                .edges
                .iter()
                .position(|&(a, b)| (a, b) == (v.min(u), v.max(u)))
                .expect("edge present");
            if v < u {
                format!("h{}", 2 * k)
            } else {
                format!("h{}", 2 * k + 1)
            }
        };
        let leg_name = |v: usize, leg: Leg| match leg {
            Leg::Marked(m) => format!("p{m}"),
            Leg::Toward(u) => half(v, u),
        };
        let vertices = self
            .vertices
            .iter()
            .enumerate()
            .map(|(i, v)| {
                let mut legs: Vec<String> = v.markings.iter().map(|m| format!("p{m}")).collect();
                legs.extend(self.neighbors(i).into_iter().map(|u| half(i, u)));
                VertexSpec { genus: v.genus, legs }
            })
            .collect();
        let edges = (0..self.edges.len()).map(|k| [format!("h{}", 2 * k), format!("h{}", 2 * k + 1)]).collect();
        let mut decorations = Vec::new();
        for (i, v) in self.vertices.iter().enumerate() {
            for f in &v.decoration {
                let factor = match *f {
                    DecorationFactor::Psi { leg, exponent } => FactorSpec::Psi { leg: leg_name(i, leg), exponent },
                    DecorationFactor::Lambda { index, exponent } => FactorSpec::Lambda { index, exponent },
                    DecorationFactor::Kappa { index, exponent } => FactorSpec::Kappa { index, exponent },
                    DecorationFactor::Mumford { leg, degree } => FactorSpec::Mumford { leg: leg_name(i, leg), degree },
                };
                decorations.push(DecorationSpec { vertex: i, factor });
            }
        }
        StratumSpec { vertices, edges, decorations }
    }
}
