//! Permutations and finitely generated permutation groups.
//!
//! Points are `0..degree` internally; the text form of a permutation uses
//! 1-based cycle notation. Products compose left-to-right (`a.then(b)` maps
//! `x` to `b(a(x))`), matching the right-action convention `x^(ab) = (x^a)^b`.

mod blocks;
mod chain;
mod classes;
mod regular;

pub use blocks::{block_systems, classify_pq_blocks, BlockSystem, PqClass, PqReport};
pub use chain::StabChain;
pub use classes::ClassTable;
pub use regular::{coset_action, find_regular_subgroup, find_subgroup_of_order, RegularOutcome};

use num::{BigInt, ToPrimitive};
use once_cell::sync::OnceCell;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::fmt;
use thiserror::Error;

pub type Point = u16;

/// Elements are enumerated breadth-first from the identity; groups whose
/// order exceeds the cap refuse to enumerate rather than thrash.
pub const DEFAULT_ELEMENT_CAP: usize = 500_000;

#[derive(Debug, Error)]
pub enum PermError {
    #[error("invalid permutation: {0}")]
    BadPermutation(String),
    #[error("degree mismatch: expected {expected}, got {got}")]
    DegreeMismatch { expected: usize, got: usize },
    #[error("element cap {cap} exceeded: group order is {order}")]
    CapExceeded { cap: usize, order: BigInt },
    #[error("group is not transitive")]
    NotTransitive,
    #[error("group has no nontrivial block system")]
    NotImprimitive,
    #[error("search budget of {budget} nodes exhausted")]
    BudgetExhausted { budget: u64 },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("degree {degree} does not match p*q for odd primes p={p} > q={q}")]
    BadPqDegree { degree: usize, p: usize, q: usize },
    #[error("block pattern outside the degree-pq classification: {size_p} size-p and {size_q} size-q systems")]
    UnexpectedBlockPattern { size_p: usize, size_q: usize },
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

/// A permutation of `0..degree`, stored as its image array.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm {
    images: Box<[Point]>,
}

impl Perm {
    pub fn identity(degree: usize) -> Self {
        Perm {
            images: (0..degree as Point).collect(),
        }
    }

    pub fn from_images(images: Vec<Point>) -> Result<Self, PermError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &im in &images {
            let i = im as usize;
            if i >= n {
                return Err(PermError::BadPermutation(format!(
                    "image {i} out of range for degree {n}"
                )));
            }
            if seen[i] {
                return Err(PermError::BadPermutation(format!("image {i} repeated")));
            }
            seen[i] = true;
        }
        Ok(Perm {
            images: images.into(),
        })
    }

    /// Permutation from disjoint cycles over explicit points.
    pub fn from_cycles(degree: usize, cycles: &[Vec<Point>]) -> Result<Self, PermError> {
        let mut images: Vec<Point> = (0..degree as Point).collect();
        for cycle in cycles {
            for w in 0..cycle.len() {
                let from = cycle[w] as usize;
                let to = cycle[(w + 1) % cycle.len()];
                if from >= degree || to as usize >= degree {
                    return Err(PermError::BadPermutation(format!(
                        "cycle point out of range for degree {degree}"
                    )));
                }
                images[from] = to;
            }
        }
        Perm::from_images(images)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    #[inline]
    pub fn apply(&self, p: Point) -> Point {
        self.images[p as usize]
    }

    pub fn images(&self) -> &[Point] {
        &self.images
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &Perm) -> Perm {
        debug_assert_eq!(self.degree(), other.degree());
        Perm {
            images: self.images.iter().map(|&i| other.images[i as usize]).collect(),
        }
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0 as Point; self.images.len()];
        for (i, &im) in self.images.iter().enumerate() {
            inv[im as usize] = i as Point;
        }
        Perm { images: inv.into() }
    }

    /// Conjugate `g^-1 * self * g`.
    pub fn conjugate_by(&self, g: &Perm) -> Perm {
        g.inverse().then(self).then(g)
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &im)| i as Point == im)
    }

    pub fn fixed_points(&self) -> usize {
        self.images
            .iter()
            .enumerate()
            .filter(|(i, &im)| *i as Point == im)
            .count()
    }

    pub fn min_moved_point(&self) -> Option<Point> {
        self.images
            .iter()
            .enumerate()
            .find(|(i, &im)| *i as Point != im)
            .map(|(i, _)| i as Point)
    }

    pub fn order(&self) -> u64 {
        self.cycles_with_fixed()
            .iter()
            .map(|c| c.len() as u64)
            .fold(1, num::integer::lcm)
    }

    /// Cycles of length >= 2, each rotated to start at its minimum, sorted.
    pub fn cycles(&self) -> Vec<Vec<Point>> {
        self.cycles_with_fixed()
            .into_iter()
            .filter(|c| c.len() > 1)
            .collect()
    }

    fn cycles_with_fixed(&self) -> Vec<Vec<Point>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start as Point];
            seen[start] = true;
            let mut p = self.apply(start as Point);
            while p as usize != start {
                seen[p as usize] = true;
                cycle.push(p);
                p = self.apply(p);
            }
            out.push(cycle);
        }
        out
    }

    /// Parse 1-based cycle notation, e.g. `(1 2 3)(4 5)`.
    pub fn parse_cycles(degree: usize, text: &str) -> Result<Self, PermError> {
        let mut cycles = Vec::new();
        let mut rest = text.trim();
        if rest == "()" || rest.is_empty() {
            return Ok(Perm::identity(degree));
        }
        while !rest.is_empty() {
            let open = rest
                .find('(')
                .ok_or_else(|| PermError::Parse(format!("expected '(' in {text:?}")))?;
            let close = rest[open..]
                .find(')')
                .ok_or_else(|| PermError::Parse(format!("unclosed cycle in {text:?}")))?
                + open;
            let body = &rest[open + 1..close];
            let points: Vec<Point> = body
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|s| !s.is_empty())
                .map(|s| {
                    s.parse::<usize>()
                        .map_err(|_| PermError::Parse(format!("bad point {s:?}")))
                        .and_then(|v| {
                            if v == 0 || v > degree {
                                Err(PermError::Parse(format!(
                                    "point {v} outside 1..={degree}"
                                )))
                            } else {
                                Ok((v - 1) as Point)
                            }
                        })
                })
                .collect::<Result<_, _>>()?;
            if !points.is_empty() {
                cycles.push(points);
            }
            rest = rest[close + 1..].trim_start();
        }
        Perm::from_cycles(degree, &cycles)
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for c in cycles {
            write!(f, "(")?;
            for (i, p) in c.iter().enumerate() {
                if i > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", p + 1)?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

/// Complete, duplicate-free element list with index lookups.
pub struct Elements {
    pub list: Vec<Perm>,
    index: HashMap<Perm, u32>,
    pub inverse: Vec<u32>,
    pub fixed_counts: Vec<u16>,
    pub orders: Vec<u64>,
}

impl Elements {
    pub fn len(&self) -> usize {
        self.list.len()
    }

    pub fn is_empty(&self) -> bool {
        self.list.is_empty()
    }

    pub fn index_of(&self, p: &Perm) -> Option<u32> {
        self.index.get(p).copied()
    }

    /// Index of `list[a] * list[b]`.
    pub fn product(&self, a: u32, b: u32) -> u32 {
        let p = self.list[a as usize].then(&self.list[b as usize]);
        self.index[&p]
    }

    /// Index of `list[a]^k` for `k >= 0`.
    pub fn power(&self, a: u32, mut k: u64) -> u32 {
        let mut acc = 0u32; // identity is element 0
        let mut base = a;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.product(acc, base);
            }
            base = self.product(base, base);
            k >>= 1;
        }
        acc
    }
}

/// A permutation group given by generators, with a deterministic stabilizer
/// chain built at construction and a lazily enumerated element store.
pub struct PermGroup {
    degree: usize,
    generators: Vec<Perm>,
    element_cap: usize,
    chain: StabChain,
    elements: OnceCell<Elements>,
}

impl PermGroup {
    pub fn new(degree: usize, generators: Vec<Perm>) -> Result<Self, PermError> {
        Self::with_cap(degree, generators, DEFAULT_ELEMENT_CAP)
    }

    pub fn with_cap(
        degree: usize,
        generators: Vec<Perm>,
        element_cap: usize,
    ) -> Result<Self, PermError> {
        if degree == 0 || degree > Point::MAX as usize + 1 {
            return Err(PermError::BadPermutation(format!(
                "unsupported degree {degree}"
            )));
        }
        for g in &generators {
            if g.degree() != degree {
                return Err(PermError::DegreeMismatch {
                    expected: degree,
                    got: g.degree(),
                });
            }
        }
        let generators: Vec<Perm> = generators.into_iter().filter(|g| !g.is_identity()).collect();
        let chain = StabChain::build(degree, &generators);
        Ok(PermGroup {
            degree,
            generators,
            element_cap,
            chain,
            elements: OnceCell::new(),
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Perm] {
        &self.generators
    }

    pub fn element_cap(&self) -> usize {
        self.element_cap
    }

    /// Must be called before the first `elements()` to take effect.
    pub fn set_element_cap(&mut self, cap: usize) {
        self.element_cap = cap;
    }

    pub fn chain(&self) -> &StabChain {
        &self.chain
    }

    pub fn order(&self) -> BigInt {
        self.chain.order()
    }

    pub fn contains(&self, p: &Perm) -> bool {
        p.degree() == self.degree && self.chain.contains(p)
    }

    pub fn orbits(&self) -> Vec<Vec<Point>> {
        let mut seen = vec![false; self.degree];
        let mut orbits = Vec::new();
        for start in 0..self.degree {
            if seen[start] {
                continue;
            }
            let mut orbit = vec![start as Point];
            seen[start] = true;
            let mut w = 0;
            while w < orbit.len() {
                let p = orbit[w];
                w += 1;
                for g in &self.generators {
                    let q = g.apply(p);
                    if !seen[q as usize] {
                        seen[q as usize] = true;
                        orbit.push(q);
                    }
                }
            }
            orbit.sort_unstable();
            orbits.push(orbit);
        }
        orbits
    }

    pub fn is_transitive(&self) -> bool {
        self.orbits().len() == 1
    }

    /// |G| / degree, defined for transitive groups.
    pub fn stabilizer_order(&self) -> Result<BigInt, PermError> {
        if !self.is_transitive() {
            return Err(PermError::NotTransitive);
        }
        Ok(self.order() / BigInt::from(self.degree))
    }

    /// Breadth-first enumeration from the identity, in generator order.
    pub fn elements(&self) -> Result<&Elements, PermError> {
        if let Some(e) = self.elements.get() {
            return Ok(e);
        }
        let order = self.order();
        let cap = BigInt::from(self.element_cap);
        if order > cap {
            return Err(PermError::CapExceeded {
                cap: self.element_cap,
                order,
            });
        }
        let expected = order.to_usize().ok_or_else(|| {
            PermError::Internal("group order exceeds usize".into())
        })?;
        let mut list = vec![Perm::identity(self.degree)];
        let mut index = HashMap::with_capacity(expected);
        index.insert(list[0].clone(), 0u32);
        let mut w = 0;
        while w < list.len() {
            let current = list[w].clone();
            w += 1;
            for g in &self.generators {
                let next = current.then(g);
                if !index.contains_key(&next) {
                    index.insert(next.clone(), list.len() as u32);
                    list.push(next);
                }
            }
        }
        if list.len() != expected {
            return Err(PermError::Internal(format!(
                "enumeration found {} elements, stabilizer chain says {}",
                list.len(),
                expected
            )));
        }
        let inverse = list.iter().map(|p| index[&p.inverse()]).collect();
        let fixed_counts = list.iter().map(|p| p.fixed_points() as u16).collect();
        let orders = list.iter().map(|p| p.order()).collect();
        let elements = Elements {
            list,
            index,
            inverse,
            fixed_counts,
            orders,
        };
        Ok(self.elements.get_or_init(|| elements))
    }

    pub fn conjugacy_classes(&self) -> Result<ClassTable, PermError> {
        ClassTable::compute(self)
    }

    pub fn block_systems(&self) -> Result<Vec<BlockSystem>, PermError> {
        blocks::block_systems(self)
    }
}

#[derive(Serialize, Deserialize)]
struct GroupFile {
    degree: usize,
    generators: Vec<Vec<Point>>,
}

impl PermGroup {
    /// JSON form: `{"degree": n, "generators": [[images...], ...]}` (0-based).
    pub fn from_json(text: &str) -> Result<Self, PermError> {
        let file: GroupFile =
            serde_json::from_str(text).map_err(|e| PermError::Parse(e.to_string()))?;
        let gens = file
            .generators
            .into_iter()
            .map(Perm::from_images)
            .collect::<Result<Vec<_>, _>>()?;
        PermGroup::new(file.degree, gens)
    }

    pub fn to_json(&self) -> String {
        let file = GroupFile {
            degree: self.degree,
            generators: self.generators.iter().map(|g| g.images().to_vec()).collect(),
        };
        serde_json::to_string_pretty(&file).expect("group serialization cannot fail")
    }

    /// Text form: optional `degree N` header, then one generator per line in
    /// 1-based cycle notation. Without a header the degree is the largest
    /// point mentioned.
    pub fn from_cycle_text(text: &str) -> Result<Self, PermError> {
        let mut lines: Vec<&str> = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .collect();
        let mut degree = None;
        if let Some(first) = lines.first() {
            if let Some(rest) = first.strip_prefix("degree") {
                degree = Some(
                    rest.trim()
                        .parse::<usize>()
                        .map_err(|_| PermError::Parse(format!("bad degree line {first:?}")))?,
                );
                lines.remove(0);
            }
        }
        let degree = match degree {
            Some(d) => d,
            None => {
                let mut max = 0usize;
                for l in &lines {
                    for tok in l.split(|c: char| !c.is_ascii_digit()) {
                        if let Ok(v) = tok.parse::<usize>() {
                            max = max.max(v);
                        }
                    }
                }
                if max == 0 {
                    return Err(PermError::Parse("no points found".into()));
                }
                max
            }
        };
        let gens = lines
            .iter()
            .map(|l| Perm::parse_cycles(degree, l))
            .collect::<Result<Vec<_>, _>>()?;
        PermGroup::new(degree, gens)
    }

    /// Detects the JSON vs cycle-notation form by the leading character.
    pub fn from_input(text: &str) -> Result<Self, PermError> {
        if text.trim_start().starts_with('{') {
            Self::from_json(text)
        } else {
            Self::from_cycle_text(text)
        }
    }
}
