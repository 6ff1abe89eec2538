//! Block systems (systems of imprimitivity) and the classification of
//! imprimitive groups whose degree is a product of two distinct odd primes.

use super::{PermError, PermGroup, Point};
use serde::Serialize;

/// A nontrivial G-invariant partition. Blocks are sorted internally and by
/// first point; every block has the same size.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockSystem {
    pub blocks: Vec<Vec<Point>>,
    pub block_of: Vec<u32>,
}

impl BlockSystem {
    pub fn block_size(&self) -> usize {
        self.blocks[0].len()
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    fn from_dsu(mut dsu: DisjointSets) -> Self {
        let n = dsu.size();
        let roots: Vec<usize> = (0..n).map(|i| dsu.find(i)).collect();
        let mut first_seen: Vec<Option<u32>> = vec![None; n];
        let mut blocks: Vec<Vec<Point>> = Vec::new();
        let mut block_of = vec![0u32; n];
        for (i, &r) in roots.iter().enumerate() {
            let id = *first_seen[r].get_or_insert_with(|| {
                blocks.push(Vec::new());
                (blocks.len() - 1) as u32
            });
            blocks[id as usize].push(i as Point);
            block_of[i] = id;
        }
        BlockSystem { blocks, block_of }
    }
}

struct DisjointSets {
    parent: Vec<usize>,
}

impl DisjointSets {
    fn new(n: usize) -> Self {
        DisjointSets {
            parent: (0..n).collect(),
        }
    }

    fn size(&self) -> usize {
        self.parent.len()
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            false
        } else {
            self.parent[ra.max(rb)] = ra.min(rb);
            true
        }
    }
}

/// Finest G-congruence identifying every listed pair, as a block partition,
/// or None when it collapses everything into one block.
fn congruence_closure(group: &PermGroup, seed_pairs: &[(Point, Point)]) -> Option<BlockSystem> {
    let n = group.degree();
    let mut dsu = DisjointSets::new(n);
    let mut queue: Vec<(Point, Point)> = Vec::new();
    for &(a, b) in seed_pairs {
        if dsu.union(a as usize, b as usize) {
            queue.push((a, b));
        }
    }
    while let Some((a, b)) = queue.pop() {
        for g in group.generators() {
            let (ga, gb) = (g.apply(a), g.apply(b));
            if dsu.union(ga as usize, gb as usize) {
                queue.push((ga, gb));
            }
        }
    }
    let system = BlockSystem::from_dsu(dsu);
    if system.num_blocks() == 1 || system.num_blocks() == n {
        None
    } else {
        Some(system)
    }
}

/// All nontrivial block systems of a transitive group. Every G-congruence is
/// a join of the point-pair closures computed here, so closing the principal
/// systems under pairwise joins yields the complete lattice minus the two
/// trivial partitions. Results are sorted by block size, then lexicographically.
pub fn block_systems(group: &PermGroup) -> Result<Vec<BlockSystem>, PermError> {
    if !group.is_transitive() {
        return Err(PermError::NotTransitive);
    }
    let n = group.degree();
    let mut found: Vec<BlockSystem> = Vec::new();
    let mut keys: std::collections::HashSet<Vec<u32>> = std::collections::HashSet::new();
    for w in 1..n {
        if let Some(sys) = congruence_closure(group, &[(0, w as Point)]) {
            if keys.insert(sys.block_of.clone()) {
                found.push(sys);
            }
        }
    }
    // Join closure: the join of two systems is the congruence generated by
    // both block relations together.
    let mut frontier: Vec<usize> = (0..found.len()).collect();
    while let Some(i) = frontier.pop() {
        for j in 0..found.len() {
            if i == j {
                continue;
            }
            let mut pairs: Vec<(Point, Point)> = Vec::new();
            for sys in [&found[i], &found[j]] {
                for block in &sys.blocks {
                    for w in 1..block.len() {
                        pairs.push((block[0], block[w]));
                    }
                }
            }
            if let Some(sys) = congruence_closure(group, &pairs) {
                if keys.insert(sys.block_of.clone()) {
                    found.push(sys);
                    frontier.push(found.len() - 1);
                }
            }
        }
    }
    for sys in &found {
        debug_assert!(is_invariant(group, sys));
        let size = sys.block_size();
        if sys.blocks.iter().any(|b| b.len() != size) {
            return Err(PermError::Internal("unequal block sizes".into()));
        }
    }
    found.sort_by(|a, b| {
        a.block_size()
            .cmp(&b.block_size())
            .then_with(|| a.block_of.cmp(&b.block_of))
    });
    Ok(found)
}

fn is_invariant(group: &PermGroup, sys: &BlockSystem) -> bool {
    group.generators().iter().all(|g| {
        sys.blocks.iter().all(|block| {
            let target = sys.block_of[g.apply(block[0]) as usize];
            block
                .iter()
                .all(|&p| sys.block_of[g.apply(p) as usize] == target)
        })
    })
}

/// Where a transitive imprimitive group of degree p*q (p > q odd primes)
/// falls in the classification by its systems of imprimitivity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PqClass {
    /// One system only, blocks of size p.
    UniqueBlockP,
    /// One system only, blocks of size q (the only case with no density
    /// consequence).
    UniqueBlockQ,
    /// Exactly two systems, one of each block size; the group embeds in a
    /// product of a degree-p and a degree-q group.
    BothSizes,
    /// p+1 systems: p of size-q blocks plus one of size-p blocks; the group
    /// contains a regular normal subgroup of order pq.
    PPlusOne,
    /// Exactly two systems, both with blocks of size q.
    TwoSizeQ,
}

impl PqClass {
    pub fn label(self) -> &'static str {
        match self {
            PqClass::UniqueBlockP => "unique-block-p",
            PqClass::UniqueBlockQ => "unique-block-q",
            PqClass::BothSizes => "case-ii",
            PqClass::PPlusOne => "case-iii-a",
            PqClass::TwoSizeQ => "case-iii-b/c",
        }
    }

    /// Whether the classification alone certifies intersection density 1.
    pub fn certifies_density_one(self) -> bool {
        !matches!(self, PqClass::UniqueBlockQ)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PqReport {
    pub p: usize,
    pub q: usize,
    pub label: String,
    pub class: PqClass,
    pub systems_size_p: usize,
    pub systems_size_q: usize,
    pub certifies_density_one: bool,
}

fn is_odd_prime(n: usize) -> bool {
    n > 2 && n % 2 == 1 && (3..).take_while(|d| d * d <= n).step_by(2).all(|d| n % d != 0)
}

/// Classify a transitive imprimitive group of degree p*q by its block systems.
pub fn classify_pq_blocks(group: &PermGroup, p: usize, q: usize) -> Result<PqReport, PermError> {
    if !(is_odd_prime(p) && is_odd_prime(q) && p > q && group.degree() == p * q) {
        return Err(PermError::BadPqDegree {
            degree: group.degree(),
            p,
            q,
        });
    }
    let systems = block_systems(group)?;
    if systems.is_empty() {
        return Err(PermError::NotImprimitive);
    }
    let size_p = systems.iter().filter(|s| s.block_size() == p).count();
    let size_q = systems.iter().filter(|s| s.block_size() == q).count();
    if size_p + size_q != systems.len() {
        return Err(PermError::Internal(
            "block size other than p or q at degree pq".into(),
        ));
    }
    let class = match (size_p, size_q) {
        (1, 0) => PqClass::UniqueBlockP,
        (0, 1) => PqClass::UniqueBlockQ,
        (1, 1) => PqClass::BothSizes,
        (1, nq) if nq == p => PqClass::PPlusOne,
        (0, 2) => PqClass::TwoSizeQ,
        _ => {
            return Err(PermError::UnexpectedBlockPattern {
                size_p,
                size_q,
            })
        }
    };
    Ok(PqReport {
        p,
        q,
        label: class.label().to_string(),
        class,
        systems_size_p: size_p,
        systems_size_q: size_q,
        certifies_density_one: class.certifies_density_one(),
    })
}
