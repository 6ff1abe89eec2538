//! Exact maximum intersecting sets by branch and bound.
//!
//! An intersecting set is a coclique of the derangement graph, equivalently
//! a clique of the agreement graph (x ~ y iff x and y agree at some point).
//! Vertex transitivity lets the search normalize the identity into every
//! maximum clique, so the only live candidates are the non-derangements.
//! The search is a Tomita-style branch and bound with a greedy-coloring
//! upper bound, seeded with a point stabilizer so alpha >= |G_omega| holds
//! from the first node.

use crate::perm::{Perm, PermError, PermGroup};
use crate::rat::{big, ratio};
use num::BigRational;
use thiserror::Error;

/// Default branch-and-bound node budget.
pub const DEFAULT_BUDGET: u64 = 100_000_000;

#[derive(Debug, Error)]
pub enum CocliqueError {
    #[error("elements {a} and {b} disagree everywhere; set is not intersecting")]
    NotIntersecting { a: usize, b: usize },
    #[error("element {index} is not a member of the group")]
    NotMember { index: usize },
    #[error(transparent)]
    Perm(#[from] PermError),
}

/// Search outcome. `exact` is false when the node budget ran out, in which
/// case `alpha` is only the best lower bound found.
pub struct CocliqueResult {
    pub alpha: usize,
    pub witness: Vec<Perm>,
    pub exact: bool,
    pub nodes: u64,
}

struct Searcher {
    adj: Vec<Vec<u64>>,
    budget: u64,
    nodes: u64,
    exhausted: bool,
    best: Vec<u32>,
}

impl Searcher {
    fn adjacent(&self, u: u32, v: u32) -> bool {
        self.adj[u as usize][(v >> 6) as usize] >> (v & 63) & 1 == 1
    }

    /// Greedy-color `cand` in index order; returns (vertex, color) with
    /// colors ascending. A clique inside the first i entries has size at
    /// most the i-th color.
    fn color_sort(&self, cand: &[u32]) -> Vec<(u32, u32)> {
        let words = self.adj[0].len();
        // Per color class, the union of members' neighborhoods.
        let mut class_conflicts: Vec<Vec<u64>> = Vec::new();
        let mut classes: Vec<Vec<u32>> = Vec::new();
        for &v in cand {
            let slot = class_conflicts
                .iter()
                .position(|cf| cf[(v >> 6) as usize] >> (v & 63) & 1 == 0);
            match slot {
                Some(c) => {
                    classes[c].push(v);
                    for w in 0..words {
                        class_conflicts[c][w] |= self.adj[v as usize][w];
                    }
                }
                None => {
                    classes.push(vec![v]);
                    class_conflicts.push(self.adj[v as usize].clone());
                }
            }
        }
        classes
            .iter()
            .enumerate()
            .flat_map(|(c, class)| class.iter().map(move |&v| (v, c as u32 + 1)))
            .collect()
    }

    fn expand(&mut self, current: &mut Vec<u32>, cand: &[u32]) {
        self.nodes += 1;
        if self.nodes > self.budget {
            self.exhausted = true;
            return;
        }
        let order = self.color_sort(cand);
        for idx in (0..order.len()).rev() {
            if self.exhausted {
                return;
            }
            let (v, color) = order[idx];
            // Colors ascend, so every untried vertex extends by <= color.
            if current.len() + color as usize <= self.best.len() {
                return;
            }
            current.push(v);
            if current.len() > self.best.len() {
                self.best = current.clone();
            }
            let next: Vec<u32> = order[..idx]
                .iter()
                .map(|&(u, _)| u)
                .filter(|&u| self.adjacent(u, v))
                .collect();
            if !next.is_empty() {
                self.expand(current, &next);
            }
            current.pop();
        }
    }
}

/// Exact maximum intersecting set of a transitive group, as a max clique of
/// the agreement graph over {identity} + non-derangements.
pub fn max_coclique(group: &PermGroup, budget: u64) -> Result<CocliqueResult, CocliqueError> {
    let els = group.elements()?;
    let identity = els
        .index_of(&Perm::identity(group.degree()))
        .expect("closure contains the identity");
    // Local vertex 0 is the identity; the rest are the non-derangements.
    let mut verts: Vec<u32> = vec![identity];
    for i in 0..els.len() as u32 {
        if i != identity && els.fixed_counts[i as usize] > 0 {
            verts.push(i);
        }
    }
    let m = verts.len();
    let words = m.div_ceil(64);
    let mut adj = vec![vec![0u64; words]; m];
    for a in 0..m {
        let pa = els.list[verts[a] as usize].images();
        for b in a + 1..m {
            let pb = els.list[verts[b] as usize].images();
            if pa.iter().zip(pb).any(|(x, y)| x == y) {
                adj[a][b >> 6] |= 1 << (b & 63);
                adj[b][a >> 6] |= 1 << (a & 63);
            }
        }
    }
    // Seed: the stabilizer of point 0 is intersecting and contains the
    // identity, so alpha >= |G_omega| before any branching.
    let seed: Vec<u32> = (0..m as u32)
        .filter(|&v| els.list[verts[v as usize] as usize].apply(0) == 0)
        .collect();
    let mut searcher = Searcher {
        adj,
        budget,
        nodes: 0,
        exhausted: false,
        best: seed,
    };
    let cand: Vec<u32> = (1..m as u32).collect();
    let mut current = vec![0u32];
    searcher.expand(&mut current, &cand);
    let witness: Vec<Perm> = searcher
        .best
        .iter()
        .map(|&v| els.list[verts[v as usize] as usize].clone())
        .collect();
    Ok(CocliqueResult {
        alpha: witness.len(),
        witness,
        exact: !searcher.exhausted,
        nodes: searcher.nodes,
    })
}

/// Check that a set is intersecting (pairwise agreement at some point) and
/// return its density rho(F) = |F| / |G_omega| = |F| * degree / |G|.
pub fn verify_intersecting(
    group: &PermGroup,
    set: &[Perm],
) -> Result<BigRational, CocliqueError> {
    for (i, p) in set.iter().enumerate() {
        if p.degree() != group.degree() || !group.contains(p) {
            return Err(CocliqueError::NotMember { index: i });
        }
    }
    for a in 0..set.len() {
        for b in a + 1..set.len() {
            let (x, y) = (&set[a], &set[b]);
            if !(0..x.degree() as u16).any(|p| x.apply(p) == y.apply(p)) {
                return Err(CocliqueError::NotIntersecting { a, b });
            }
        }
    }
    Ok(ratio(
        big(set.len() as u64) * big(group.degree() as u64),
        group.order(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::actions::{psl2_action, triangular_pair_perms, Psl2Target};
    use crate::perm::PermGroup;
    use num::One;

    fn rho_of(n: u64, d: u64) -> BigRational {
        ratio(big(n), big(d))
    }

    #[test]
    fn s3_natural_alpha_two() {
        let g = PermGroup::from_cycle_text("(1 2)\n(1 2 3)").unwrap();
        let r = max_coclique(&g, DEFAULT_BUDGET).unwrap();
        assert!(r.exact);
        assert_eq!(r.alpha, 2);
        let rho = verify_intersecting(&g, &r.witness).unwrap();
        assert!(rho.is_one());
    }

    #[test]
    fn s5_natural_alpha_is_stabilizer() {
        let g = PermGroup::from_cycle_text("(1 2)\n(1 2 3 4 5)").unwrap();
        let r = max_coclique(&g, DEFAULT_BUDGET).unwrap();
        assert!(r.exact);
        assert_eq!(r.alpha, 24);
        assert!(verify_intersecting(&g, &r.witness).unwrap().is_one());
    }

    #[test]
    fn psl2_pairs_small_q() {
        // Exact alpha on 2-subsets of the projective line: 4 at q = 3 and
        // q = 5, 12 at q = 4 (where the triangular subgroup attains it).
        for (q, expect) in [(3u32, 4usize), (4, 12), (5, 4)] {
            let g = psl2_action(q, Psl2Target::TwoSubsets).unwrap();
            let r = max_coclique(&g, DEFAULT_BUDGET).unwrap();
            assert!(r.exact);
            assert_eq!(r.alpha, expect, "q = {q}");
            verify_intersecting(&g, &r.witness).unwrap();
        }
    }

    #[test]
    fn relabeled_group_has_same_alpha() {
        // Conjugating the action relabels the vertices; alpha must agree.
        let g = psl2_action(4, Psl2Target::TwoSubsets).unwrap();
        let n = g.degree();
        let shift = Perm::from_cycles(n, &[(0..n as u16).collect()]).unwrap();
        let conj: Vec<Perm> = g
            .generators()
            .iter()
            .map(|p| shift.inverse().then(p).then(&shift))
            .collect();
        let relabeled = PermGroup::new(n, conj).unwrap();
        let a = max_coclique(&g, DEFAULT_BUDGET).unwrap();
        let b = max_coclique(&relabeled, DEFAULT_BUDGET).unwrap();
        assert!(a.exact && b.exact);
        assert_eq!(a.alpha, b.alpha);
    }

    #[test]
    fn budget_exhaustion_reports_inexact_seed() {
        let g = PermGroup::from_cycle_text("(1 2)\n(1 2 3 4 5)").unwrap();
        let r = max_coclique(&g, 1).unwrap();
        assert!(!r.exact);
        // The stabilizer seed is already maximum here.
        assert_eq!(r.alpha, 24);
    }

    #[test]
    fn triangular_witness_density() {
        let g = psl2_action(4, Psl2Target::TwoSubsets).unwrap();
        let witness = triangular_pair_perms(4).unwrap();
        let rho = verify_intersecting(&g, &witness).unwrap();
        assert_eq!(rho, rho_of(2, 1));
    }

    #[test]
    fn non_intersecting_pair_detected() {
        let g = PermGroup::from_cycle_text("(1 2)\n(1 2 3)").unwrap();
        let e = Perm::identity(3);
        let rot = Perm::from_cycles(3, &[vec![0, 1, 2]]).unwrap();
        assert!(matches!(
            verify_intersecting(&g, &[e, rot]),
            Err(CocliqueError::NotIntersecting { a: 0, b: 1 })
        ));
        let stray = Perm::identity(4);
        assert!(matches!(
            verify_intersecting(&g, &[stray]),
            Err(CocliqueError::NotMember { index: 0 })
        ));
    }
}
