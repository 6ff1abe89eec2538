//! Conjugacy classes by orbit closure under generator conjugation.

use super::{PermError, PermGroup};

/// Conjugacy classes of an enumerated group. Class 0 is the identity class;
/// classes are ordered by their smallest member in enumeration order, and the
/// representative is that smallest member.
pub struct ClassTable {
    pub reps: Vec<u32>,
    pub sizes: Vec<u64>,
    pub class_of: Vec<u32>,
    pub derangement: Vec<bool>,
    pub rep_orders: Vec<u64>,
}

impl ClassTable {
    pub fn compute(group: &PermGroup) -> Result<Self, PermError> {
        let els = group.elements()?;
        let n = els.len();
        let gens: Vec<(u32, u32)> = group
            .generators()
            .iter()
            .map(|g| {
                let i = els.index_of(g).expect("generators are elements");
                (i, els.inverse[i as usize])
            })
            .collect();
        let mut class_of = vec![u32::MAX; n];
        let mut reps = Vec::new();
        let mut sizes = Vec::new();
        for start in 0..n as u32 {
            if class_of[start as usize] != u32::MAX {
                continue;
            }
            let class_id = reps.len() as u32;
            reps.push(start);
            class_of[start as usize] = class_id;
            let mut queue = vec![start];
            let mut w = 0;
            while w < queue.len() {
                let x = queue[w];
                w += 1;
                for &(g, g_inv) in &gens {
                    let y = els.product(els.product(g_inv, x), g);
                    if class_of[y as usize] == u32::MAX {
                        class_of[y as usize] = class_id;
                        queue.push(y);
                    }
                }
            }
            sizes.push(queue.len() as u64);
        }
        // Fixed-point counts are a class function; a mismatch means the
        // closure above is broken.
        for x in 0..n {
            let rep = reps[class_of[x] as usize] as usize;
            if els.fixed_counts[x] != els.fixed_counts[rep] {
                return Err(PermError::Internal(
                    "fixed-point count not constant on a conjugacy class".into(),
                ));
            }
        }
        let derangement = reps
            .iter()
            .map(|&r| els.fixed_counts[r as usize] == 0)
            .collect();
        let rep_orders = reps.iter().map(|&r| els.orders[r as usize]).collect();
        Ok(ClassTable {
            reps,
            sizes,
            class_of,
            derangement,
            rep_orders,
        })
    }

    pub fn num_classes(&self) -> usize {
        self.reps.len()
    }

    /// Indices of the derangement classes.
    pub fn derangement_classes(&self) -> Vec<usize> {
        (0..self.num_classes()).filter(|&i| self.derangement[i]).collect()
    }

    /// Total number of derangements.
    pub fn derangement_count(&self) -> u64 {
        self.derangement_classes().iter().map(|&i| self.sizes[i]).sum()
    }

    /// Class containing the m-th power of the representative of class `i`.
    pub fn power_class(&self, els: &super::Elements, i: usize, m: u64) -> usize {
        let p = els.power(self.reps[i], m);
        self.class_of[p as usize] as usize
    }

    /// Class of inverses of class `i`.
    pub fn inverse_class(&self, els: &super::Elements, i: usize) -> usize {
        self.class_of[els.inverse[self.reps[i] as usize] as usize] as usize
    }

    /// Partition of the classes into orbits under all power maps coprime to
    /// the element order (these include the inverse map). Eigenvalue sums
    /// over such a block are Galois-stable, hence rational integers.
    pub fn rational_class_blocks(&self, els: &super::Elements) -> Vec<Vec<usize>> {
        let r = self.num_classes();
        let mut block_of = vec![usize::MAX; r];
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        for i in 0..r {
            if block_of[i] != usize::MAX {
                continue;
            }
            let id = blocks.len();
            let mut members = vec![i];
            block_of[i] = id;
            let order = self.rep_orders[i];
            for m in 1..order {
                if num::integer::gcd(m, order) != 1 {
                    continue;
                }
                let j = self.power_class(els, i, m);
                if block_of[j] == usize::MAX {
                    block_of[j] = id;
                    members.push(j);
                }
            }
            members.sort_unstable();
            blocks.push(members);
        }
        blocks
    }
}

#[cfg(test)]
mod tests {
    use super::super::{Perm, PermGroup};

    fn group(degree: usize, gens: &[&str]) -> PermGroup {
        let gens = gens
            .iter()
            .map(|s| Perm::parse_cycles(degree, s).unwrap())
            .collect();
        PermGroup::new(degree, gens).unwrap()
    }

    #[test]
    fn s3_classes() {
        let g = group(3, &["(1 2)", "(1 2 3)"]);
        let t = g.conjugacy_classes().unwrap();
        assert_eq!(t.num_classes(), 3);
        let mut sizes = t.sizes.clone();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![1, 2, 3]);
        assert_eq!(t.sizes[0], 1); // identity class first
        assert_eq!(t.derangement_count(), 2); // the 3-cycles
    }

    #[test]
    fn s5_has_seven_classes() {
        let g = group(5, &["(1 2)", "(1 2 3 4 5)"]);
        let t = g.conjugacy_classes().unwrap();
        assert_eq!(t.num_classes(), 7);
        assert_eq!(t.sizes.iter().sum::<u64>(), 120);
        // Derangements of S5: the 5-cycles (24), the (2,3) type (20), and
        // no others... (1 2)(3 4) fixes a point at degree 5, so:
        assert_eq!(t.derangement_count(), 44);
    }

    #[test]
    fn a5_classes_and_rational_blocks() {
        let g = group(5, &["(1 2 3)", "(3 4 5)"]);
        let t = g.conjugacy_classes().unwrap();
        assert_eq!(t.num_classes(), 5);
        let els = g.elements().unwrap();
        // The two classes of 5-cycles are power-conjugate; everything else
        // sits alone.
        let blocks = t.rational_class_blocks(els);
        assert_eq!(blocks.len(), 4);
        let sizes: Vec<usize> = blocks.iter().map(|b| b.len()).collect();
        assert_eq!(sizes.iter().filter(|&&s| s == 2).count(), 1);
    }

    #[test]
    fn cyclic_inverse_classes() {
        let g = group(5, &["(1 2 3 4 5)"]);
        let t = g.conjugacy_classes().unwrap();
        let els = g.elements().unwrap();
        assert_eq!(t.num_classes(), 5);
        for i in 0..5 {
            let inv = t.inverse_class(els, i);
            assert_eq!(t.inverse_class(els, inv), i);
        }
        // x and x^-1 are distinct classes in an abelian group of odd order.
        assert_ne!(t.inverse_class(els, 1), 1);
    }
}
