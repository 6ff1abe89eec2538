//! Regular-subgroup search, generic small-subgroup search, and coset actions.
//!
//! A subgroup H of a degree-n group acts regularly iff |H| = n and every
//! non-identity element of H is fixed-point-free, so the search space is the
//! set of subgroups built from fixed-point-free elements whose order divides
//! n. The search is exhaustive: when it terminates within budget without a
//! witness, none exists.

use super::{Elements, Perm, PermError, PermGroup};
use std::collections::HashSet;

#[derive(Debug)]
pub enum RegularOutcome {
    /// Element list of a regular subgroup (closed, identity first).
    Found(Vec<Perm>),
    /// The exhaustive search completed: no regular subgroup exists.
    NoneExists,
}

struct BoundedClosure<'a> {
    els: &'a Elements,
    cap: usize,
}

impl<'a> BoundedClosure<'a> {
    /// Closure of `base ∪ {extra}` under products, or None once it exceeds
    /// `cap` elements. Returns a sorted index list including the identity.
    fn close(&self, base: &[u32], extra: u32) -> Option<Vec<u32>> {
        let mut members: HashSet<u32> = base.iter().copied().collect();
        members.insert(0);
        let mut list: Vec<u32> = members.iter().copied().collect();
        let mut queue: Vec<u32> = Vec::new();
        if members.insert(extra) {
            list.push(extra);
            queue.push(extra);
        }
        while let Some(t) = queue.pop() {
            let mut idx = 0;
            while idx < list.len() {
                let u = list[idx];
                idx += 1;
                for prod in [self.els.product(t, u), self.els.product(u, t)] {
                    if members.insert(prod) {
                        if list.len() + 1 > self.cap {
                            return None;
                        }
                        list.push(prod);
                        queue.push(prod);
                    }
                }
            }
        }
        list.sort_unstable();
        Some(list)
    }
}

fn largest_prime_factor(mut n: u64) -> u64 {
    let mut best = 1;
    let mut d = 2;
    while d * d <= n {
        while n % d == 0 {
            best = d;
            n /= d;
        }
        d += 1;
    }
    if n > 1 {
        best = best.max(n);
    }
    best
}

/// Search for a subgroup acting regularly on the points.
///
/// `budget` bounds the number of closure computations; exceeding it is an
/// error distinct from a completed search that found nothing.
pub fn find_regular_subgroup(
    group: &PermGroup,
    budget: u64,
) -> Result<RegularOutcome, PermError> {
    let n = group.degree() as u64;
    let els = group.elements()?;
    let total = els.len();
    // Candidate pool: fixed-point-free elements whose order divides n.
    let mut in_pool = vec![false; total];
    let mut pool: Vec<u32> = Vec::new();
    for i in 1..total {
        if els.fixed_counts[i] == 0 && n % els.orders[i] == 0 {
            in_pool[i] = true;
            pool.push(i as u32);
        }
    }
    in_pool[0] = true; // identity is always allowed
    if (pool.len() as u64) + 1 < n {
        return Ok(RegularOutcome::NoneExists);
    }
    let p = largest_prime_factor(n);
    // Seeds: the distinct cyclic subgroups of order p inside the pool.
    let mut seeds: Vec<Vec<u32>> = Vec::new();
    let mut seen: HashSet<Vec<u32>> = HashSet::new();
    for &x in &pool {
        if els.orders[x as usize] != p {
            continue;
        }
        let mut cyc: Vec<u32> = (0..p).map(|k| els.power(x, k)).collect();
        cyc.sort_unstable();
        if cyc.iter().all(|&e| in_pool[e as usize]) && seen.insert(cyc.clone()) {
            seeds.push(cyc);
        }
    }
    let closer = BoundedClosure {
        els,
        cap: n as usize,
    };
    let mut visited: HashSet<Vec<u32>> = HashSet::new();
    let mut work = 0u64;
    let mut stack: Vec<Vec<u32>> = Vec::new();
    for seed in seeds {
        if visited.insert(seed.clone()) {
            stack.push(seed);
        }
    }
    while let Some(h) = stack.pop() {
        if h.len() as u64 == n {
            let witness: Vec<Perm> = h.iter().map(|&i| els.list[i as usize].clone()).collect();
            debug_assert!(is_regular(&witness, group.degree()));
            return Ok(RegularOutcome::Found(witness));
        }
        for &y in &pool {
            if h.binary_search(&y).is_ok() {
                continue;
            }
            work += 1;
            if work > budget {
                return Err(PermError::BudgetExhausted { budget });
            }
            if let Some(closed) = closer.close(&h, y) {
                if closed.iter().all(|&e| in_pool[e as usize]) && !visited.contains(&closed) {
                    visited.insert(closed.clone());
                    stack.push(closed);
                }
            }
        }
    }
    Ok(RegularOutcome::NoneExists)
}

fn is_regular(subgroup: &[Perm], degree: usize) -> bool {
    subgroup.len() == degree
        && subgroup
            .iter()
            .filter(|p| !p.is_identity())
            .all(|p| p.fixed_points() == 0)
        && {
            let mut hit = vec![false; degree];
            subgroup.iter().for_each(|p| hit[p.apply(0) as usize] = true);
            hit.iter().all(|&b| b)
        }
}

/// Exhaustive search for any subgroup of the given order, as element indices.
/// Searches closures of (cyclic seed + one extension at a time), which reaches
/// every subgroup; intended for small targets (Sylow-size subgroups, point
/// stabilizer shapes) inside enumerable groups.
pub fn find_subgroup_of_order(
    group: &PermGroup,
    target: usize,
    budget: u64,
) -> Result<Option<Vec<u32>>, PermError> {
    let els = group.elements()?;
    let total = els.len();
    if total % target != 0 {
        return Ok(None);
    }
    if target == 1 {
        return Ok(Some(vec![0]));
    }
    let pool: Vec<u32> = (1..total as u32)
        .filter(|&i| target as u64 % els.orders[i as usize] == 0)
        .collect();
    let mut seeds: Vec<Vec<u32>> = Vec::new();
    let mut seen: HashSet<Vec<u32>> = HashSet::new();
    for &x in &pool {
        let ord = els.orders[x as usize];
        let mut cyc: Vec<u32> = (0..ord).map(|k| els.power(x, k)).collect();
        cyc.sort_unstable();
        if seen.insert(cyc.clone()) {
            seeds.push(cyc);
        }
    }
    // Largest seeds first: a subgroup of order `target` is reached fastest
    // from its largest cyclic subgroup.
    seeds.sort_by_key(|s| std::cmp::Reverse(s.len()));
    let closer = BoundedClosure { els, cap: target };
    let mut visited: HashSet<Vec<u32>> = HashSet::new();
    let mut work = 0u64;
    let mut stack: Vec<Vec<u32>> = Vec::new();
    for seed in seeds {
        if seed.len() == target {
            return Ok(Some(seed));
        }
        if target % seed.len() == 0 && visited.insert(seed.clone()) {
            stack.push(seed);
        }
    }
    while let Some(h) = stack.pop() {
        for &y in &pool {
            if h.binary_search(&y).is_ok() {
                continue;
            }
            work += 1;
            if work > budget {
                return Err(PermError::BudgetExhausted { budget });
            }
            if let Some(closed) = closer.close(&h, y) {
                if closed.len() == target {
                    return Ok(Some(closed));
                }
                if target % closed.len() == 0 && !visited.contains(&closed) {
                    visited.insert(closed.clone());
                    stack.push(closed);
                }
            }
        }
    }
    Ok(None)
}

/// The action of the group on the right cosets of the subgroup given by
/// element indices. Cosets are numbered by their smallest member in
/// enumeration order, so the construction is deterministic.
pub fn coset_action(group: &PermGroup, subgroup: &[u32]) -> Result<PermGroup, PermError> {
    let els = group.elements()?;
    let total = els.len();
    let m = subgroup.len();
    if m == 0 || total % m != 0 {
        return Err(PermError::Internal(format!(
            "subgroup size {m} does not divide group order {total}"
        )));
    }
    let num_cosets = total / m;
    if num_cosets > super::Point::MAX as usize + 1 {
        return Err(PermError::Internal(format!(
            "coset count {num_cosets} exceeds point type"
        )));
    }
    let mut coset_of = vec![u32::MAX; total];
    let mut next_id = 0u32;
    for x in 0..total as u32 {
        if coset_of[x as usize] != u32::MAX {
            continue;
        }
        for &h in subgroup {
            let hx = els.product(h, x);
            if coset_of[hx as usize] != u32::MAX {
                return Err(PermError::Internal("subgroup set is not closed".into()));
            }
            coset_of[hx as usize] = next_id;
        }
        next_id += 1;
    }
    if next_id as usize != num_cosets {
        return Err(PermError::Internal("coset partition has the wrong size".into()));
    }
    // Representative (smallest member) of each coset, for the action map.
    let mut rep = vec![u32::MAX; num_cosets];
    for x in (0..total as u32).rev() {
        rep[coset_of[x as usize] as usize] = x;
    }
    let mut new_gens = Vec::with_capacity(group.generators().len());
    for g in group.generators() {
        let gi = els
            .index_of(g)
            .ok_or_else(|| PermError::Internal("generator missing from elements".into()))?;
        let images: Vec<super::Point> = (0..num_cosets)
            .map(|c| coset_of[els.product(rep[c], gi) as usize] as super::Point)
            .collect();
        new_gens.push(Perm::from_images(images)?);
    }
    PermGroup::with_cap(num_cosets, new_gens, group.element_cap())
}
