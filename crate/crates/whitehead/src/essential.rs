//! Canonical automorphisms and bases, splittable and worrisome petals,
//! essential vertex types, essential covers and the K_q counts.

use std::collections::BTreeSet;
use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::partition::{compatible, BasedPartition};
use crate::poset::{VertexType, WhiteheadPoset};
use crate::vset::VertexSet;

/// A partial conjugation C_I^j whose petal avoids the minimal label of
/// Γ-st(v_j); these generate the stabilizers minimally.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalGenerator {
    operative: usize,
    petal: VertexSet,
}

impl CanonicalGenerator {
    pub fn new(g: &Graph, operative: usize, petal: VertexSet) -> Result<CanonicalGenerator> {
        let rest = g.minus_star(operative);
        if rest.is_empty() {
            return Err(Error::Dominating(operative));
        }
        if petal.is_empty() || !petal.is_subset(rest) {
            return Err(Error::InvalidPartition(format!(
                "{petal} is not a nonempty subset of Γ-st({operative})"
            )));
        }
        for c in g.components_within(rest) {
            let inter = petal & c;
            if !inter.is_empty() && inter != c {
                return Err(Error::InvalidPartition(format!(
                    "{petal} cuts the component {c} of Γ-st({operative})"
                )));
            }
        }
        let min = rest.min_label().expect("nonempty");
        if petal.contains(min) {
            return Err(Error::InvalidPartition(format!(
                "{petal} contains the minimal element {min} of Γ-st({operative})"
            )));
        }
        Ok(CanonicalGenerator { operative, petal })
    }

    pub(crate) fn new_unchecked(operative: usize, petal: VertexSet) -> CanonicalGenerator {
        CanonicalGenerator { operative, petal }
    }

    pub fn operative(&self) -> usize {
        self.operative
    }

    pub fn petal(&self) -> VertexSet {
        self.petal
    }
}

impl fmt::Debug for CanonicalGenerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "C^{}_{}", self.operative, self.petal)
    }
}

impl fmt::Display for CanonicalGenerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "C^{}_{}", self.operative, self.petal)
    }
}

/// A family of canonical generators, kept sorted for determinism.
pub type GeneratorSet = BTreeSet<CanonicalGenerator>;

/// B(τ): all petals of τ that avoid the minimal element of their
/// Γ-st(v_j). Its size equals rk(τ).
pub fn canonical_basis(g: &Graph, t: &VertexType) -> GeneratorSet {
    let mut basis = GeneratorSet::new();
    for part in t.parts() {
        let min = g
            .min_minus_star(part.operative())
            .expect("reduced graph vertex");
        for &petal in part.petals() {
            if !petal.contains(min) {
                basis.insert(CanonicalGenerator::new_unchecked(part.operative(), petal));
            }
        }
    }
    basis
}

/// Binary splits of the given petal of τ_j that keep the whole type
/// compatible. Each returned set is the split-off part (the complement
/// keeps the petal's least component); ascending enumeration order.
pub fn admissible_splits(g: &Graph, t: &VertexType, j: usize, petal_idx: usize) -> Vec<VertexSet> {
    let part = t.part(j).expect("vertex of the graph");
    let petal = part.petals()[petal_idx];
    let comps = g.components_within(petal);
    let m = comps.len();
    if m < 2 {
        return Vec::new();
    }
    let mut out = Vec::new();
    for mask in 1u32..(1u32 << m) {
        if mask & 1 != 0 {
            continue; // keep the least component on the other side
        }
        let split_part: VertexSet = comps
            .iter()
            .enumerate()
            .filter(|&(i, _)| mask & (1 << i) != 0)
            .map(|(_, c)| *c)
            .fold(VertexSet::EMPTY, |acc, c| acc | c);
        let candidate = part
            .split_petal(g, petal_idx, split_part)
            .expect("union of full components");
        let ok = t
            .parts()
            .iter()
            .filter(|q| q.operative() != j)
            .all(|q| compatible(g, &candidate, q));
        if ok {
            out.push(split_part);
        }
    }
    out
}

/// Petal indices of τ_j that admit at least one compatible binary split.
pub fn splittable_petals(g: &Graph, t: &VertexType, j: usize) -> Vec<usize> {
    let part = t.part(j).expect("vertex of the graph");
    (0..part.len())
        .filter(|&pi| !admissible_splits(g, t, j, pi).is_empty())
        .collect()
}

/// (vertex, petal index) pairs that are splittable yet avoid the minimal
/// element; empty exactly for essential types.
pub fn worrisome_petals(g: &Graph, t: &VertexType) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for part in t.parts() {
        let j = part.operative();
        let min = g.min_minus_star(j).expect("reduced graph vertex");
        for pi in splittable_petals(g, t, j) {
            if !part.petals()[pi].contains(min) {
                out.push((j, pi));
            }
        }
    }
    out
}

/// A type is essential when every splittable petal contains the minimal
/// element of its Γ-st(v_j).
pub fn is_essential(g: &Graph, t: &VertexType) -> bool {
    for part in t.parts() {
        let j = part.operative();
        let min = g.min_minus_star(j).expect("reduced graph vertex");
        for pi in splittable_petals(g, t, j) {
            if !part.petals()[pi].contains(min) {
                return false;
            }
        }
    }
    true
}

/// The essential cover: repeatedly split worrisome petals until none is
/// left. Deterministic order: lowest vertex, least petal index, least
/// admissible split part. Returns the cover and s = rank difference.
pub fn essential_cover(g: &Graph, t: &VertexType) -> (VertexType, usize) {
    let start_rank = t.rank();
    let mut cur = t.clone();
    loop {
        let worrisome = worrisome_petals(g, &cur);
        let Some(&(j, pi)) = worrisome.first() else {
            break;
        };
        let parts = admissible_splits(g, &cur, j, pi);
        let split = parts[0];
        let new_part = cur
            .part(j)
            .unwrap()
            .split_petal(g, pi, split)
            .expect("admissible split");
        cur = cur.with_part(new_part);
    }
    let s = cur.rank() - start_rank;
    (cur, s)
}

/// Same walk with randomized choices of worrisome petal and split; the
/// result is independent of the order.
pub fn essential_cover_randomized<R: Rng>(g: &Graph, t: &VertexType, rng: &mut R) -> (VertexType, usize) {
    let start_rank = t.rank();
    let mut cur = t.clone();
    loop {
        let worrisome = worrisome_petals(g, &cur);
        if worrisome.is_empty() {
            break;
        }
        let &(j, pi) = worrisome.choose(rng).unwrap();
        let parts = admissible_splits(g, &cur, j, pi);
        let split = *parts.choose(rng).unwrap();
        let new_part = cur
            .part(j)
            .unwrap()
            .split_petal(g, pi, split)
            .expect("admissible split");
        cur = cur.with_part(new_part);
    }
    let s = cur.rank() - start_rank;
    (cur, s)
}

/// The cone point τ(A): per vertex, the petals are the generator petals
/// at that vertex plus the remainder (which holds the minimal element).
/// Errors exactly when A is incompatible.
pub fn cone_point(g: &Graph, a: &GeneratorSet) -> Result<VertexType> {
    let mut parts = Vec::new();
    for v in g.verts().iter() {
        let rest = g.minus_star(v);
        if rest.is_empty() {
            return Err(Error::NotReduced(v));
        }
        let mut petals: Vec<VertexSet> = Vec::new();
        let mut used = VertexSet::EMPTY;
        for gen in a.iter().filter(|gen| gen.operative() == v) {
            if !used.is_disjoint(gen.petal()) {
                return Err(Error::Incompatible(format!(
                    "overlapping petals at vertex {v}"
                )));
            }
            used = used | gen.petal();
            petals.push(gen.petal());
        }
        let remainder = rest - used;
        debug_assert!(remainder.contains(rest.min_label().unwrap()));
        petals.push(remainder);
        parts.push(BasedPartition::new(g, v, petals)?);
    }
    VertexType::new(g, parts).map_err(|e| match e {
        Error::Incompatible(msg) => Error::Incompatible(msg),
        other => other,
    })
}

/// K, with K[q] = number of essential vertex types of rank q.
pub fn essential_counts(g: &Graph, cap: usize) -> Result<Vec<usize>> {
    let poset = WhiteheadPoset::enumerate(g, cap)?;
    Ok(essential_counts_of(&poset))
}

/// K computed from an already enumerated poset.
pub fn essential_counts_of(poset: &WhiteheadPoset) -> Vec<usize> {
    let flags: Vec<bool> = poset
        .elements()
        .par_iter()
        .map(|t| is_essential(poset.graph(), t))
        .collect();
    let mut counts = vec![0usize; poset.max_rank() + 1];
    for (i, &e) in flags.iter().enumerate() {
        if e {
            counts[poset.rank_of(i)] += 1;
        }
    }
    counts
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::DEFAULT_CAP;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn g5() -> Graph {
        Graph::from_edges(5, &[(1, 2)]).unwrap()
    }

    fn vs(xs: &[usize]) -> VertexSet {
        xs.iter().copied().collect()
    }

    /// A G5 vertex type: the stated partitions at their vertices, trivial
    /// everywhere else.
    fn ty(g: &Graph, parts: &[(usize, &[&[usize]])]) -> VertexType {
        let mut all = Vec::new();
        for v in g.verts().iter() {
            match parts.iter().find(|(u, _)| *u == v) {
                Some((_, petals)) => all.push(
                    BasedPartition::new(g, v, petals.iter().map(|p| vs(p)).collect()).unwrap(),
                ),
                None => all.push(BasedPartition::trivial(g, v).unwrap()),
            }
        }
        VertexType::new(g, all).unwrap()
    }

    #[test]
    fn canonical_generator_validation() {
        let g = g5();
        assert!(CanonicalGenerator::new(&g, 1, vs(&[4, 5])).is_ok());
        // contains the minimal element 3 of Γ-st(1)
        assert!(CanonicalGenerator::new(&g, 1, vs(&[3])).is_err());
        // cuts the component {1,2} of Γ-st(3)
        assert!(CanonicalGenerator::new(&g, 3, vs(&[2])).is_err());
        assert!(CanonicalGenerator::new(&g, 1, VertexSet::EMPTY).is_err());
    }

    #[test]
    fn basis_of_the_eleven_vertex_example() {
        let g = Graph::from_edges(
            11,
            &[
                (1, 2),
                (2, 3),
                (3, 8),
                (3, 10),
                (5, 6),
                (5, 8),
                (5, 10),
                (6, 7),
                (8, 9),
                (10, 11),
            ],
        )
        .unwrap();
        let t = ty(&g, &[(2, &[&[4], &[5, 6, 7, 8, 9, 10, 11]])]);
        let basis = canonical_basis(&g, &t);
        assert_eq!(basis.len(), 1);
        let gen = basis.iter().next().unwrap();
        assert_eq!(gen.operative(), 2);
        assert_eq!(gen.petal(), vs(&[5, 6, 7, 8, 9, 10, 11]));
    }

    #[test]
    fn nuclear_basis_is_empty_and_sizes_match_rank() {
        let g = g5();
        let poset = WhiteheadPoset::enumerate(&g, DEFAULT_CAP).unwrap();
        assert!(canonical_basis(&g, poset.element(0)).is_empty());
        for t in poset.elements() {
            assert_eq!(canonical_basis(&g, t).len(), t.rank());
        }
    }

    #[test]
    fn splittable_examples() {
        let g = g5();
        let nuclear = VertexType::nuclear(&g).unwrap();
        // three components at vertex 1, all others trivial: splittable
        assert_eq!(splittable_petals(&g, &nuclear, 1), vec![0]);

        // a single-component petal can never be split
        let t = ty(&g, &[(1, &[&[3], &[4], &[5]])]);
        assert!(splittable_petals(&g, &t, 1).is_empty());

        // a split of the dominant-containing petal that would create a
        // crossing is excluded: with {{1,2},{4,5}} at 3 and {{5},{1,2,3}}
        // at 4, neither partition admits any split
        let t = ty(&g, &[(3, &[&[1, 2], &[4, 5]]), (4, &[&[5], &[1, 2, 3]])]);
        assert!(splittable_petals(&g, &t, 3).is_empty());
        assert!(splittable_petals(&g, &t, 4).is_empty());
        assert!(is_essential(&g, &t));
    }

    #[test]
    fn essential_counts_match_the_table() {
        let g = g5();
        let poset = WhiteheadPoset::enumerate(&g, DEFAULT_CAP).unwrap();
        assert!(is_essential(&g, poset.element(0)), "nuclear is essential");
        assert_eq!(essential_counts_of(&poset), vec![1, 10, 27, 10, 1]);
    }

    #[test]
    fn essential_counts_for_free_groups() {
        assert_eq!(
            essential_counts(&Graph::from_edges(4, &[]).unwrap(), DEFAULT_CAP).unwrap(),
            vec![1, 8, 16]
        );
        assert_eq!(
            essential_counts(&Graph::from_edges(2, &[]).unwrap(), DEFAULT_CAP).unwrap(),
            vec![1]
        );
    }

    #[test]
    fn worrisome_examples() {
        let g = g5();
        let t = ty(&g, &[(1, &[&[3], &[4, 5]])]);
        assert_eq!(worrisome_petals(&g, &t), vec![(1, 1)]);
        assert!(!is_essential(&g, &t));

        let nuclear = VertexType::nuclear(&g).unwrap();
        assert!(worrisome_petals(&g, &nuclear).is_empty());

        let essential_t = ty(&g, &[(1, &[&[4], &[3, 5]])]);
        assert!(is_essential(&g, &essential_t));
        assert!(worrisome_petals(&g, &essential_t).is_empty());
    }

    #[test]
    fn cover_examples() {
        let g = g5();
        let essential_t = ty(&g, &[(1, &[&[4], &[3, 5]])]);
        let (cover, s) = essential_cover(&g, &essential_t);
        assert_eq!(cover, essential_t);
        assert_eq!(s, 0);

        let t = ty(&g, &[(1, &[&[3], &[4, 5]])]);
        let (cover, s) = essential_cover(&g, &t);
        assert_eq!(cover, ty(&g, &[(1, &[&[3], &[4], &[5]])]));
        assert_eq!(s, 1);
        assert!(t.leq(&cover));
        // idempotent
        assert_eq!(essential_cover(&g, &cover), (cover.clone(), 0));
    }

    #[test]
    fn cover_is_order_independent() {
        let g = g5();
        let poset = WhiteheadPoset::enumerate(&g, DEFAULT_CAP).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for t in poset.elements() {
            if is_essential(&g, t) {
                continue;
            }
            let (cover, s) = essential_cover(&g, t);
            assert_eq!(s, cover.rank() - t.rank());
            for _ in 0..100 {
                assert_eq!(essential_cover_randomized(&g, t, &mut rng), (cover.clone(), s));
            }
        }
    }

    #[test]
    fn cone_point_round_trips() {
        let g = g5();
        let poset = WhiteheadPoset::enumerate(&g, DEFAULT_CAP).unwrap();

        assert_eq!(
            cone_point(&g, &GeneratorSet::new()).unwrap(),
            VertexType::nuclear(&g).unwrap()
        );

        // τ(B(τ)) = τ for every element
        for t in poset.elements() {
            let basis = canonical_basis(&g, t);
            assert_eq!(&cone_point(&g, &basis).unwrap(), t);
        }

        // B(τ(A)) = A for every compatible family of size ≤ 2, and the
        // constructive compatibility test agrees with the support scan
        let gens: Vec<CanonicalGenerator> = poset
            .elements()
            .iter()
            .flat_map(|t| canonical_basis(&g, t))
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        assert_eq!(gens.len(), 15);
        let mut families: Vec<GeneratorSet> = gens.iter().map(|&x| GeneratorSet::from([x])).collect();
        for i in 0..gens.len() {
            for j in i + 1..gens.len() {
                families.push(GeneratorSet::from([gens[i], gens[j]]));
            }
        }
        for a in families {
            let constructed = cone_point(&g, &a);
            let supported = poset
                .elements()
                .iter()
                .any(|t| a.is_subset(&canonical_basis(&g, t)));
            assert_eq!(constructed.is_ok(), supported);
            if let Ok(tau) = constructed {
                assert_eq!(canonical_basis(&g, &tau), a);
            }
        }
    }

    #[test]
    fn incompatible_generators_are_rejected() {
        let g = g5();
        let a = GeneratorSet::from([
            CanonicalGenerator::new(&g, 3, vs(&[5])).unwrap(),
            CanonicalGenerator::new(&g, 4, vs(&[5])).unwrap(),
        ]);
        assert!(matches!(cone_point(&g, &a), Err(Error::Incompatible(_))));
    }
}
