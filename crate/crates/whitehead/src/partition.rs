//! Based partitions: petal splits, the refinement order, crossings and
//! compatibility.
//!
//! A based partition with operative vertex u splits Γ-st(u) into petals,
//! each a union of connected components of Γ-st(u). The singleton block
//! {u} of the underlying partition of Γ-lk(u) is implicit and never
//! stored.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::vset::VertexSet;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BasedPartition {
    operative: usize,
    /// Pairwise disjoint, each a union of components of Γ-st(operative),
    /// together covering Γ-st(operative); sorted by minimum label.
    petals: Vec<VertexSet>,
}

impl BasedPartition {
    /// Validating constructor; sorts the petals canonically.
    pub fn new(g: &Graph, u: usize, mut petals: Vec<VertexSet>) -> Result<BasedPartition> {
        let rest = g.minus_star(u);
        if rest.is_empty() {
            return Err(Error::Dominating(u));
        }
        let mut union = VertexSet::EMPTY;
        for p in &petals {
            if p.is_empty() {
                return Err(Error::InvalidPartition("empty petal".into()));
            }
            if !union.is_disjoint(*p) {
                return Err(Error::InvalidPartition("petals overlap".into()));
            }
            union = union | *p;
        }
        if union != rest {
            return Err(Error::InvalidPartition(format!(
                "petals cover {union}, expected Γ-st({u}) = {rest}"
            )));
        }
        for p in &petals {
            for c in g.components_within(rest) {
                let inter = *p & c;
                if !inter.is_empty() && inter != c {
                    return Err(Error::InvalidPartition(format!(
                        "petal {p} cuts the component {c}"
                    )));
                }
            }
        }
        petals.sort();
        Ok(BasedPartition {
            operative: u,
            petals,
        })
    }

    fn from_sorted(operative: usize, mut petals: Vec<VertexSet>) -> BasedPartition {
        petals.sort();
        BasedPartition { operative, petals }
    }

    /// The single-petal partition of Γ-st(u).
    pub fn trivial(g: &Graph, u: usize) -> Result<BasedPartition> {
        let rest = g.minus_star(u);
        if rest.is_empty() {
            return Err(Error::Dominating(u));
        }
        Ok(BasedPartition {
            operative: u,
            petals: vec![rest],
        })
    }

    /// All based partitions with operative vertex u: one per set partition
    /// of the component list of Γ-st(u), so Bell(#components) in total.
    pub fn enumerate_all(g: &Graph, u: usize) -> Result<Vec<BasedPartition>> {
        let comps: Vec<VertexSet> = g
            .components_minus_star(u)?
            .into_iter()
            .map(|c| c.vertices)
            .collect();
        let m = comps.len();
        let mut out = Vec::new();
        let mut rgs = vec![0usize; m]; // restricted growth string
        loop {
            let blocks = rgs.iter().copied().max().unwrap_or(0) + 1;
            let mut petals = vec![VertexSet::EMPTY; blocks];
            for (t, &b) in rgs.iter().enumerate() {
                petals[b] = petals[b] | comps[t];
            }
            out.push(BasedPartition::from_sorted(u, petals));

            // advance to the next restricted growth string
            let mut i = m.wrapping_sub(1);
            loop {
                if i == 0 || i == usize::MAX {
                    return Ok(out);
                }
                let prefix_max = rgs[..i].iter().copied().max().unwrap_or(0);
                if rgs[i] <= prefix_max {
                    rgs[i] += 1;
                    for r in rgs[i + 1..].iter_mut() {
                        *r = 0;
                    }
                    break;
                }
                i -= 1;
            }
        }
    }

    pub fn operative(&self) -> usize {
        self.operative
    }

    pub fn petals(&self) -> &[VertexSet] {
        &self.petals
    }

    /// Number of petals; the paper calls this the length l(τ_u).
    pub fn len(&self) -> usize {
        self.petals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.petals.is_empty()
    }

    pub fn is_trivial(&self) -> bool {
        self.petals.len() == 1
    }

    pub fn petal_containing(&self, v: usize) -> Option<usize> {
        self.petals.iter().position(|p| p.contains(v))
    }

    /// Tests `self ≤ other` in the refinement order: every petal of
    /// `other` is contained in a petal of `self`.
    pub fn leq(&self, other: &BasedPartition) -> Result<bool> {
        if self.operative != other.operative {
            return Err(Error::OperativeMismatch(self.operative, other.operative));
        }
        Ok(self.leq_unchecked(other))
    }

    pub(crate) fn leq_unchecked(&self, other: &BasedPartition) -> bool {
        other
            .petals
            .iter()
            .all(|q| self.petals.iter().any(|p| q.is_subset(*p)))
    }

    /// Replaces the chosen petal by {part, petal - part}. `part` must be a
    /// nonempty proper union of components of the petal.
    pub fn split_petal(&self, g: &Graph, petal: usize, part: VertexSet) -> Result<BasedPartition> {
        let target = *self
            .petals
            .get(petal)
            .ok_or_else(|| Error::InvalidSplit(format!("no petal #{petal}")))?;
        if part.is_empty() || part == target {
            return Err(Error::InvalidSplit(
                "split part must be a nonempty proper subset of the petal".into(),
            ));
        }
        if !part.is_subset(target) {
            return Err(Error::InvalidSplit(format!(
                "{part} is not contained in the petal {target}"
            )));
        }
        for c in g.components_within(target) {
            let inter = part & c;
            if !inter.is_empty() && inter != c {
                return Err(Error::InvalidSplit(format!(
                    "{part} cuts the component {c}"
                )));
            }
        }
        let mut petals: Vec<VertexSet> = self
            .petals
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != petal)
            .map(|(_, p)| *p)
            .collect();
        petals.push(part);
        petals.push(target - part);
        Ok(BasedPartition::from_sorted(self.operative, petals))
    }
}

impl std::fmt::Debug for BasedPartition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "τ_{}{{", self.operative)?;
        for (i, p) in self.petals.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "}}")
    }
}

/// Crossing test for based partitions at distinct vertices u, v: false when
/// u ∈ st(v); otherwise true iff there are petals P of p and Q of q with
/// D^v ⊄ P, D^u ⊄ Q and P ∩ Q ≠ ∅, where D^v and D^u are the dominant
/// components of Γ-st(u) and Γ-st(v) for the pair.
pub fn crosses(g: &Graph, p: &BasedPartition, q: &BasedPartition) -> bool {
    let (u, v) = (p.operative(), q.operative());
    assert_ne!(u, v, "crossing is defined for distinct operative vertices");
    if g.in_star(u, v) {
        return false;
    }
    let dv = g
        .dominant_component(u, v)
        .expect("u, v non-adjacent vertices of g");
    let du = g
        .dominant_component(v, u)
        .expect("u, v non-adjacent vertices of g");
    p.petals().iter().any(|&pp| {
        !dv.is_subset(pp)
            && q.petals()
                .iter()
                .any(|&qq| !du.is_subset(qq) && !(pp & qq).is_empty())
    })
}

/// Compatibility: u ∈ st(v) or the partitions do not cross.
pub fn compatible(g: &Graph, p: &BasedPartition, q: &BasedPartition) -> bool {
    g.in_star(p.operative(), q.operative()) || !crosses(g, p, q)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g5() -> Graph {
        Graph::from_edges(5, &[(1, 2)]).unwrap()
    }

    fn g11() -> Graph {
        Graph::from_edges(
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
        .unwrap()
    }

    fn vs(xs: &[usize]) -> VertexSet {
        xs.iter().copied().collect()
    }

    fn bp(g: &Graph, u: usize, petals: &[&[usize]]) -> BasedPartition {
        BasedPartition::new(g, u, petals.iter().map(|p| vs(p)).collect()).unwrap()
    }

    #[test]
    fn trivial_examples() {
        let g = g5();
        assert_eq!(BasedPartition::trivial(&g, 1).unwrap().petals(), &[vs(&[3, 4, 5])]);
        assert_eq!(
            BasedPartition::trivial(&g, 3).unwrap().petals(),
            &[vs(&[1, 2, 4, 5])]
        );
        let t2 = BasedPartition::trivial(&g11(), 2).unwrap();
        assert_eq!(t2.petals(), &[vs(&[4, 5, 6, 7, 8, 9, 10, 11])]);
        let k3 = Graph::from_edges(3, &[(1, 2), (1, 3), (2, 3)]).unwrap();
        assert!(matches!(BasedPartition::trivial(&k3, 1), Err(Error::Dominating(1))));
    }

    #[test]
    fn enumerate_counts_are_bell_numbers() {
        let g = g5();
        // three components at vertex 1: Bell(3) = 5
        let all = BasedPartition::enumerate_all(&g, 1).unwrap();
        assert_eq!(all.len(), 5);
        let mut lengths: Vec<usize> = all.iter().map(|p| p.len()).collect();
        lengths.sort_unstable();
        assert_eq!(lengths, vec![1, 2, 2, 2, 3]);

        // two components at vertex 2 of the 11-vertex graph: Bell(2) = 2
        assert_eq!(BasedPartition::enumerate_all(&g11(), 2).unwrap().len(), 2);

        // a single component yields exactly the trivial partition
        let c5 = Graph::from_edges(5, &[(1, 2), (2, 3), (3, 4), (4, 5), (1, 5)]).unwrap();
        let only = BasedPartition::enumerate_all(&c5, 1).unwrap();
        assert_eq!(only.len(), 1);
        assert_eq!(only[0], BasedPartition::trivial(&c5, 1).unwrap());

        // all enumerated partitions are distinct
        let mut dedup = all.clone();
        dedup.sort();
        dedup.dedup();
        assert_eq!(dedup.len(), all.len());
    }

    #[test]
    fn refinement_order_examples() {
        let g = g5();
        let trivial = BasedPartition::trivial(&g, 1).unwrap();
        let two = bp(&g, 1, &[&[3], &[4, 5]]);
        let full = bp(&g, 1, &[&[3], &[4], &[5]]);
        let other = bp(&g, 1, &[&[3, 4], &[5]]);
        assert!(trivial.leq(&two).unwrap());
        assert!(trivial.leq(&full).unwrap());
        assert!(!two.leq(&other).unwrap());
        assert!(two.leq(&two).unwrap());
        assert!(matches!(
            two.leq(&bp(&g, 3, &[&[1, 2], &[4, 5]])),
            Err(Error::OperativeMismatch(1, 3))
        ));
    }

    #[test]
    fn order_implies_length() {
        let g = g5();
        for u in [1, 3] {
            let all = BasedPartition::enumerate_all(&g, u).unwrap();
            for p in &all {
                for q in &all {
                    if p.leq(q).unwrap() {
                        assert!(p.len() <= q.len());
                        if q.leq(p).unwrap() {
                            assert_eq!(p, q, "antisymmetry");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn crossing_examples() {
        let g = g5();
        // a trivial partition never crosses: its petal contains the dominant
        let p = BasedPartition::trivial(&g, 3).unwrap();
        for q in BasedPartition::enumerate_all(&g, 4).unwrap() {
            assert!(!crosses(&g, &p, &q));
            assert!(compatible(&g, &p, &q));
        }

        // adjacent operative vertices are always compatible
        for p in BasedPartition::enumerate_all(&g, 1).unwrap() {
            for q in BasedPartition::enumerate_all(&g, 2).unwrap() {
                assert!(compatible(&g, &p, &q));
            }
        }

        let p = bp(&g, 3, &[&[1, 2], &[4, 5]]);
        let q = bp(&g, 4, &[&[1, 2], &[3, 5]]);
        assert!(crosses(&g, &p, &q));
        assert!(!compatible(&g, &p, &q));

        // the only compatible pairs of length-2 partitions at (3,4) split a
        // shared component off against the other vertex's dominant side
        let ps = BasedPartition::enumerate_all(&g, 3).unwrap();
        let qs = BasedPartition::enumerate_all(&g, 4).unwrap();
        let compat: Vec<(BasedPartition, BasedPartition)> = ps
            .iter()
            .filter(|p| p.len() == 2)
            .flat_map(|p| {
                qs.iter()
                    .filter(|q| q.len() == 2)
                    .filter(|q| compatible(&g, p, q))
                    .map(|q| (p.clone(), q.clone()))
            })
            .collect();
        assert_eq!(compat.len(), 2);
        assert!(compat.contains(&(
            bp(&g, 3, &[&[1, 2], &[4, 5]]),
            bp(&g, 4, &[&[5], &[1, 2, 3]])
        )));
        assert!(compat.contains(&(
            bp(&g, 3, &[&[5], &[1, 2, 4]]),
            bp(&g, 4, &[&[1, 2], &[3, 5]])
        )));
        // in particular {{4},{1,2,5}} at 3 crosses {{5},{1,2,3}} at 4: the
        // shared component {5} sits in dominant-free petals on both sides
        assert!(crosses(
            &g,
            &bp(&g, 3, &[&[4], &[1, 2, 5]]),
            &bp(&g, 4, &[&[5], &[1, 2, 3]])
        ));
    }

    /// Independent characterization: some shared component C lies in a
    /// petal of p missing D^v and in a petal of q missing D^u.
    pub(crate) fn crosses_via_shared(g: &Graph, p: &BasedPartition, q: &BasedPartition) -> bool {
        let (u, v) = (p.operative(), q.operative());
        if g.in_star(u, v) {
            return false;
        }
        let comps_u: Vec<VertexSet> = g
            .components_minus_star(u)
            .unwrap()
            .iter()
            .map(|c| c.vertices)
            .collect();
        let comps_v: Vec<VertexSet> = g
            .components_minus_star(v)
            .unwrap()
            .iter()
            .map(|c| c.vertices)
            .collect();
        let dv = comps_u.iter().copied().find(|c| c.contains(v)).unwrap();
        let du = comps_v.iter().copied().find(|c| c.contains(u)).unwrap();
        comps_u
            .iter()
            .filter(|c| comps_v.contains(c))
            .any(|&shared| {
                let pp = p.petals()[p.petal_containing(shared.min_label().unwrap()).unwrap()];
                let qq = q.petals()[q.petal_containing(shared.min_label().unwrap()).unwrap()];
                shared.is_subset(pp) && shared.is_subset(qq) && !dv.is_subset(pp) && !du.is_subset(qq)
            })
    }

    #[test]
    fn crossing_formulations_agree_and_are_symmetric() {
        for g in [g5(), Graph::from_edges(4, &[]).unwrap(), g11()] {
            let verts: Vec<usize> = g.verts().iter().collect();
            for &u in &verts {
                for &v in &verts {
                    if u >= v || g.minus_star(u).is_empty() || g.minus_star(v).is_empty() {
                        continue;
                    }
                    for p in BasedPartition::enumerate_all(&g, u).unwrap() {
                        for q in BasedPartition::enumerate_all(&g, v).unwrap() {
                            let direct = crosses(&g, &p, &q);
                            assert_eq!(direct, crosses(&g, &q, &p), "symmetry");
                            assert_eq!(direct, crosses_via_shared(&g, &p, &q), "equivalence");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn split_examples() {
        let g = g5();
        let trivial = BasedPartition::trivial(&g, 1).unwrap();
        let split = trivial.split_petal(&g, 0, vs(&[3])).unwrap();
        assert_eq!(split, bp(&g, 1, &[&[3], &[4, 5]]));
        let fully = split.split_petal(&g, 1, vs(&[4])).unwrap();
        assert_eq!(fully, bp(&g, 1, &[&[3], &[4], &[5]]));

        // {1,2} is a single component of Γ-st(3): cutting it is an error
        let p = bp(&g, 3, &[&[1, 2, 4], &[5]]);
        assert!(matches!(
            p.split_petal(&g, 0, vs(&[1])),
            Err(Error::InvalidSplit(_))
        ));
        assert!(matches!(
            p.split_petal(&g, 0, VertexSet::EMPTY),
            Err(Error::InvalidSplit(_))
        ));
        assert!(matches!(
            p.split_petal(&g, 0, vs(&[1, 2, 4])),
            Err(Error::InvalidSplit(_))
        ));
        assert!(matches!(
            p.split_petal(&g, 5, vs(&[4])),
            Err(Error::InvalidSplit(_))
        ));
    }

    #[test]
    fn new_validates() {
        let g = g5();
        assert!(BasedPartition::new(&g, 1, vec![vs(&[3, 4])]).is_err()); // misses 5
        assert!(BasedPartition::new(&g, 1, vec![vs(&[3, 4, 5]), vs(&[3])]).is_err()); // overlap
        assert!(BasedPartition::new(&g, 3, vec![vs(&[1, 4, 5]), vs(&[2])]).is_err()); // cuts {1,2}
        assert!(BasedPartition::new(&g, 3, vec![vs(&[1, 2]), vs(&[4, 5])]).is_ok());
    }
}
