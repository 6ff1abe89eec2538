//! Deterministic Schreier–Sims stabilizer chain.
//!
//! Base points are always the minimum moved point of the generator that
//! created the level, and orbits are explored breadth-first in generator
//! order, so the chain (and everything derived from it) is reproducible.

use super::{Perm, Point};
use num::BigInt;

struct Level {
    point: Point,
    gens: Vec<Perm>,
    /// transversal[w] = u with point^u = w; None outside the orbit.
    transversal: Vec<Option<Perm>>,
    orbit: Vec<Point>,
}

impl Level {
    fn new(point: Point, degree: usize) -> Self {
        let mut transversal = vec![None; degree];
        transversal[point as usize] = Some(Perm::identity(degree));
        Level {
            point,
            gens: Vec::new(),
            transversal,
            orbit: vec![point],
        }
    }

    /// Rebuild the orbit/transversal of the base point under `gens`, which
    /// must be the full generating set of this level's group (this level's
    /// generators plus every deeper level's: deeper generators fix the base
    /// point yet can still extend its orbit through other points).
    fn rebuild_orbit(&mut self, degree: usize, gens: &[Perm]) {
        self.transversal = vec![None; degree];
        self.transversal[self.point as usize] = Some(Perm::identity(degree));
        self.orbit = vec![self.point];
        let mut w = 0;
        while w < self.orbit.len() {
            let p = self.orbit[w];
            w += 1;
            let u = self.transversal[p as usize].clone().unwrap();
            for g in gens {
                let q = g.apply(p);
                if self.transversal[q as usize].is_none() {
                    self.transversal[q as usize] = Some(u.then(g));
                    self.orbit.push(q);
                }
            }
        }
    }
}

pub struct StabChain {
    degree: usize,
    levels: Vec<Level>,
}

impl StabChain {
    pub fn build(degree: usize, generators: &[Perm]) -> Self {
        let mut chain = StabChain {
            degree,
            levels: Vec::new(),
        };
        for g in generators {
            if !g.is_identity() {
                chain.push_gen(0, g.clone());
            }
        }
        chain.close_all();
        chain
    }

    pub fn base(&self) -> Vec<Point> {
        self.levels.iter().map(|l| l.point).collect()
    }

    pub fn order(&self) -> BigInt {
        self.levels
            .iter()
            .fold(BigInt::from(1), |acc, l| acc * BigInt::from(l.orbit.len()))
    }

    /// Basic orbit of the level-0 base point (the whole orbit of that point).
    pub fn top_orbit_len(&self) -> usize {
        self.levels.first().map_or(1, |l| l.orbit.len())
    }

    pub fn contains(&self, p: &Perm) -> bool {
        match self.sift(0, p.clone()) {
            (residue, _) => residue.is_identity(),
        }
    }

    /// Generators of the group at `level`: this level's and all deeper ones'.
    fn cumulative_gens(&self, level: usize) -> Vec<Perm> {
        self.levels[level..]
            .iter()
            .flat_map(|lv| lv.gens.iter().cloned())
            .collect()
    }

    fn push_gen(&mut self, level: usize, g: Perm) {
        if level == self.levels.len() {
            let point = g
                .min_moved_point()
                .expect("identity is never pushed onto the chain");
            self.levels.push(Level::new(point, self.degree));
        }
        self.levels[level].gens.push(g);
        // The new generator belongs to every group at levels <= level, so all
        // of those orbits can grow.
        for l in 0..=level {
            let gens = self.cumulative_gens(l);
            self.levels[l].rebuild_orbit(self.degree, &gens);
        }
    }

    /// Strip `g` through levels `from..`; returns the residue and the level
    /// at which sifting stopped (== levels.len() when it ran off the end).
    fn sift(&self, from: usize, mut g: Perm) -> (Perm, usize) {
        for (i, level) in self.levels.iter().enumerate().skip(from) {
            if g.is_identity() {
                return (g, i);
            }
            let w = g.apply(level.point);
            match &level.transversal[w as usize] {
                None => return (g, i),
                Some(u) => g = g.then(&u.inverse()),
            }
        }
        (g, self.levels.len())
    }

    /// Drive the chain to a strong generating set. Levels are verified
    /// deepest-first; any insertion at depth d only perturbs levels <= d, so
    /// verification resumes from there. Terminates with every Schreier
    /// generator of every level sifting to the identity, which by Schreier's
    /// lemma makes the orbit-length product the exact group order.
    fn close_all(&mut self) {
        let mut l = self.levels.len() as isize - 1;
        while l >= 0 {
            match self.verify_level(l as usize) {
                None => l -= 1,
                Some(d) => l = d as isize,
            }
        }
    }

    /// Check the Schreier generators of `level`, built from the generators of
    /// this level *and all deeper levels* (deeper generators fix the base
    /// point but can still move the rest of the orbit). On the first residue
    /// that fails to sift, insert it and report the level it landed on.
    fn verify_level(&mut self, level: usize) -> Option<usize> {
        let orbit = self.levels[level].orbit.clone();
        let gens = self.cumulative_gens(level);
        for &w in &orbit {
            let u = self.levels[level].transversal[w as usize].clone().unwrap();
            for s in &gens {
                let target = s.apply(w);
                let r = self.levels[level].transversal[target as usize]
                    .clone()
                    .expect("orbit is closed under the level's own generators");
                let schreier = u.then(s).then(&r.inverse());
                let (residue, depth) = self.sift(level + 1, schreier);
                if !residue.is_identity() {
                    self.push_gen(depth, residue);
                    return Some(depth.min(self.levels.len() - 1));
                }
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::super::PermGroup;
    use super::*;

    fn group(degree: usize, gens: &[&str]) -> PermGroup {
        let gens = gens
            .iter()
            .map(|s| Perm::parse_cycles(degree, s).unwrap())
            .collect();
        PermGroup::new(degree, gens).unwrap()
    }

    #[test]
    fn symmetric_and_alternating_orders() {
        for n in 2..=8usize {
            let factorial: u64 = (1..=n as u64).product();
            let sn = group(
                n,
                &[
                    "(1 2)",
                    &format!(
                        "({})",
                        (1..=n).map(|i| i.to_string()).collect::<Vec<_>>().join(" ")
                    ),
                ],
            );
            assert_eq!(sn.order(), BigInt::from(factorial), "S_{n}");
        }
        let a5 = group(5, &["(1 2 3)", "(3 4 5)"]);
        assert_eq!(a5.order(), BigInt::from(60));
        let a7 = group(7, &["(1 2 3)", "(1 2 3 4 5 6 7)"]);
        assert_eq!(a7.order(), BigInt::from(2520));
    }

    #[test]
    fn dihedral_and_cyclic() {
        let d6 = group(6, &["(1 2 3 4 5 6)", "(2 6)(3 5)"]);
        assert_eq!(d6.order(), BigInt::from(12));
        let c15 = group(15, &["(1 2 3 4 5 6 7 8 9 10 11 12 13 14 15)"]);
        assert_eq!(c15.order(), BigInt::from(15));
    }

    #[test]
    fn psl27_on_projective_line() {
        // z -> z+1 and z -> -1/z on PG(1,7), points 1..7 = 0..6, 8 = infinity.
        let g = group(8, &["(1 2 3 4 5 6 7)", "(1 8)(2 7)(3 4)(5 6)"]);
        assert_eq!(g.order(), BigInt::from(168));
        assert!(g.is_transitive());
    }

    #[test]
    fn order_matches_enumeration() {
        for (deg, gens, expected) in [
            (4usize, vec!["(1 2)", "(1 2 3 4)"], 24u64),
            (5, vec!["(1 2 3)", "(3 4 5)"], 60),
            (6, vec!["(1 2 3 4 5 6)", "(2 6)(3 5)"], 12),
            (7, vec!["(1 2 3 4 5 6 7)", "(2 3 5)(4 7 6)"], 21),
        ] {
            let gens: Vec<Perm> = gens
                .iter()
                .map(|s| Perm::parse_cycles(deg, s).unwrap())
                .collect();
            let g = PermGroup::new(deg, gens).unwrap();
            assert_eq!(g.order(), BigInt::from(expected));
            assert_eq!(g.elements().unwrap().len() as u64, expected);
        }
    }

    #[test]
    fn membership_test() {
        let g = group(5, &["(1 2 3)", "(3 4 5)"]); // A5
        assert!(g.contains(&Perm::parse_cycles(5, "(1 2)(3 4)").unwrap()));
        assert!(!g.contains(&Perm::parse_cycles(5, "(1 2)").unwrap()));
        assert!(g.contains(&Perm::identity(5)));
    }

    #[test]
    fn trivial_group() {
        let g = PermGroup::new(4, vec![]).unwrap();
        assert_eq!(g.order(), BigInt::from(1));
        assert!(g.contains(&Perm::identity(4)));
        assert!(!g.contains(&Perm::parse_cycles(4, "(1 2)").unwrap()));
    }
}
