//! Canonical labeling of decorated trees.
//!
//! Vertices are first split into classes by iterated colour refinement
//! (genus, markings, decoration shape, then neighbour colours). The
//! canonical representative is the lexicographically least relabeling over
//! every vertex ordering that respects the class order; the number of
//! orderings attaining it is the automorphism count.

use std::collections::BTreeMap;
use std::sync::LazyLock;

use dashmap::DashMap;

use super::{DecoratedStratum, DecorationFactor, Label, Leg};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalForm {
    pub stratum: DecoratedStratum,
    pub automorphisms: u64,
}

static MEMO: LazyLock<DashMap<DecoratedStratum, (DecoratedStratum, u64)>> = LazyLock::new(DashMap::new);

/// Canonical representative and automorphism count, memoized.
pub fn canonical_form(s: &DecoratedStratum) -> CanonicalForm {
    if let Some(hit) = MEMO.get(s) {
        return CanonicalForm { stratum: hit.0.clone(), automorphisms: hit.1 };
    }
    let (stratum, automorphisms) = compute(s);
    let entry = MEMO.entry(s.clone()).or_insert((stratum, automorphisms));
    CanonicalForm { stratum: entry.0.clone(), automorphisms: entry.1 }
}

/// Reference implementation: minimum over all `n!` vertex orderings with no
/// refinement. Only for small trees.
pub fn canonical_form_exhaustive(s: &DecoratedStratum) -> CanonicalForm {
    let n = s.vertices.len();
    let classes = vec![(0..n).collect::<Vec<_>>()];
    let (stratum, automorphisms) = search(s, &classes);
    CanonicalForm { stratum, automorphisms }
}

fn compute(s: &DecoratedStratum) -> (DecoratedStratum, u64) {
    let colors = refine(s);
    let mut classes: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (v, c) in colors.iter().enumerate() {
        classes.entry(*c).or_default().push(v);
    }
    let classes: Vec<Vec<usize>> = classes.into_values().collect();
    search(s, &classes)
}

type Shape = (u8, u32, u32, u8);
/// Neighbour colour, factors on our side of the edge, factors on theirs.
type EdgeKey = (usize, Vec<Shape>, Vec<Shape>);

/// Decoration factors with node legs erased, as an order-invariant summary.
fn factor_shape(f: &DecorationFactor, leg_tag: u8) -> Shape {
    match *f {
        DecorationFactor::Psi { exponent, .. } => (0, exponent, 0, leg_tag),
        DecorationFactor::Lambda { index, exponent } => (1, index, exponent, 0),
        DecorationFactor::Kappa { index, exponent } => (2, index, exponent, 0),
        DecorationFactor::Mumford { degree, .. } => (3, degree, 0, leg_tag),
    }
}

fn leg_factors(s: &DecoratedStratum, v: usize, leg: Leg) -> Vec<Shape> {
    let mut out: Vec<Shape> = s.vertices[v]
        .decoration
        .iter()
        .filter(|f| f.leg() == Some(leg))
        .map(|f| factor_shape(f, 0))
        .collect();
    out.sort_unstable();
    out
}

fn refine(s: &DecoratedStratum) -> Vec<usize> {
    let n = s.vertices.len();
    let nbrs: Vec<Vec<usize>> = (0..n).map(|v| s.neighbors(v)).collect();

    type Initial = (u32, Vec<Label>, usize, Vec<(Shape, Option<Label>)>);
    let initial: Vec<Initial> = (0..n)
        .map(|v| {
            let vert = &s.vertices[v];
            let mut dec: Vec<(Shape, Option<Label>)> = vert
                .decoration
                .iter()
                .map(|f| match f.leg() {
                    Some(Leg::Marked(m)) => (factor_shape(f, 1), Some(m)),
                    Some(Leg::Toward(_)) => (factor_shape(f, 2), None),
                    None => (factor_shape(f, 0), None),
                })
                .collect();
            dec.sort_unstable();
            (vert.genus, vert.markings.clone(), nbrs[v].len(), dec)
        })
        .collect();
    let mut colors = rank(&initial);
    let mut classes = count_distinct(&colors);
    loop {
        let keys: Vec<(usize, Vec<EdgeKey>)> = (0..n)
            .map(|v| {
                let mut around: Vec<EdgeKey> = nbrs[v]
                    .iter()
                    .map(|&u| (colors[u], leg_factors(s, v, Leg::Toward(u)), leg_factors(s, u, Leg::Toward(v))))
                    .collect();
                around.sort_unstable();
                (colors[v], around)
            })
            .collect();
        let next = rank(&keys);
        let next_classes = count_distinct(&next);
        colors = next;
        if next_classes == classes {
            break;
        }
        classes = next_classes;
    }
    colors
}

fn rank<K: Ord + Clone>(keys: &[K]) -> Vec<usize> {
    let mut sorted: Vec<K> = keys.to_vec();
    sorted.sort();
    sorted.dedup();
    keys.iter().map(|k| sorted.binary_search(k).expect("key present")).collect()
}

fn count_distinct(colors: &[usize]) -> usize {
    let mut c = colors.to_vec();
    c.sort_unstable();
    c.dedup();
    c.len()
}

/// Least relabeling over orderings that place `classes[0]` first, then
/// `classes[1]`, and so on, each class permuted freely.
fn search(s: &DecoratedStratum, classes: &[Vec<usize>]) -> (DecoratedStratum, u64) {
    let n = s.vertices.len();
    let mut perms: Vec<Vec<Vec<usize>>> = classes.iter().map(|c| permutations(c)).collect();
    // cheap case: every class a singleton
    if perms.iter().all(|p| p.len() == 1) {
        let order: Vec<usize> = perms.iter_mut().map(|p| p[0][0]).collect();
        return (s.relabel(&inverse(&order, n)), 1);
    }
    let mut best: Option<DecoratedStratum> = None;
    let mut count = 0u64;
    let mut idx = vec![0usize; perms.len()];
    loop {
        let order: Vec<usize> = idx
            .iter()
            .zip(&perms)
            .flat_map(|(&i, p)| p[i].iter().copied())
            .collect();
        let cand = s.relabel(&inverse(&order, n));
        match &best {
            Some(b) if cand > *b => {}
            Some(b) if cand == *b => count += 1,
            _ => {
                best = Some(cand);
                count = 1;
            }
        }
        // odometer
        let mut k = 0;
        loop {
            if k == idx.len() {
                return (best.expect("at least one ordering"), count);
            }
            idx[k] += 1;
            if idx[k] < perms[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

/// `order[pos] = vertex` to `perm[vertex] = pos`.
fn inverse(order: &[usize], n: usize) -> Vec<usize> {
    let mut perm = vec![0; n];
    for (pos, &v) in order.iter().enumerate() {
        perm[v] = pos;
    }
    perm
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, head);
            out.push(tail);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::strata::Vertex;

    fn v(genus: u32, markings: &[Label], decoration: Vec<DecorationFactor>) -> Vertex {
        Vertex { genus, markings: markings.to_vec(), decoration }
    }

    #[test]
    fn symmetric_chain_has_two_automorphisms() {
        let s = DecoratedStratum::new(
            vec![v(1, &[], vec![]), v(0, &[1], vec![]), v(1, &[], vec![])],
            vec![(0, 1), (1, 2)],
        )
        .unwrap();
        assert_eq!(canonical_form(&s).automorphisms, 2);
        assert_eq!(canonical_form_exhaustive(&s).automorphisms, 2);
    }

    #[test]
    fn end_genera_order_is_irrelevant() {
        let a = DecoratedStratum::new(
            vec![v(1, &[], vec![]), v(0, &[1], vec![]), v(2, &[], vec![])],
            vec![(0, 1), (1, 2)],
        )
        .unwrap();
        let b = DecoratedStratum::new(
            vec![v(2, &[], vec![]), v(0, &[1], vec![]), v(1, &[], vec![])],
            vec![(0, 1), (1, 2)],
        )
        .unwrap();
        assert_eq!(canonical_form(&a).stratum, canonical_form(&b).stratum);
        assert_eq!(canonical_form(&a).automorphisms, 1);
    }

    #[test]
    fn decoration_breaks_symmetry() {
        let psi = |u| vec![DecorationFactor::Psi { leg: Leg::Toward(u), exponent: 1 }];
        let s = DecoratedStratum::new(
            vec![v(1, &[], psi(1)), v(0, &[1], vec![]), v(1, &[], vec![])],
            vec![(0, 1), (1, 2)],
        )
        .unwrap();
        assert_eq!(canonical_form(&s).automorphisms, 1);
    }

    #[test]
    fn star_of_three() {
        let s = DecoratedStratum::new(
            vec![v(0, &[1], vec![]), v(1, &[], vec![]), v(1, &[], vec![]), v(1, &[], vec![])],
            vec![(0, 1), (0, 2), (0, 3)],
        )
        .unwrap();
        assert_eq!(canonical_form(&s).automorphisms, 6);
    }
}
