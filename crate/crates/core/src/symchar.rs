//! Exact character theory of the symmetric group: partitions, hook-length
//! dimensions, rim-hook enumeration, and the Murnaghan-Nakayama recursion,
//! plus the bulk check that character values on a fixed quintuple of cycle
//! types stay in {-1, 0, 1} for large n.

use num::{BigInt, One};
use once_cell::sync::Lazy;
use std::collections::HashMap;
use std::sync::Mutex;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SymCharError {
    #[error("partition parts must be positive and weakly decreasing")]
    BadPartition,
    #[error("character argument sizes differ: |lambda| = {lambda}, |rho| = {rho}")]
    SizeMismatch { lambda: u32, rho: u32 },
    #[error("n = {n} is too small to form the five test cycle types (need n >= {min})")]
    TooSmall { n: u32, min: u32 },
    #[error("character value {value} outside {{-1,0,1}} at lambda = {lambda}, type = {cycle_type}")]
    ViolationFound {
        lambda: String,
        cycle_type: String,
        value: i64,
    },
}

/// A partition of n: weakly decreasing positive parts.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    pub fn new(parts: Vec<u32>) -> Result<Self, SymCharError> {
        if parts.iter().any(|&p| p == 0) || parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(SymCharError::BadPartition);
        }
        Ok(Partition { parts })
    }

    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn n(&self) -> u32 {
        self.parts.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Conjugate partition: column lengths of the diagram.
    pub fn transpose(&self) -> Partition {
        if self.parts.is_empty() {
            return Partition::empty();
        }
        let cols = self.parts[0] as usize;
        let mut t = Vec::with_capacity(cols);
        for c in 1..=cols as u32 {
            t.push(self.parts.iter().filter(|&&p| p >= c).count() as u32);
        }
        Partition { parts: t }
    }

    /// Number of parts of each size j at index j (index 0 unused).
    fn multiplicities(&self) -> Vec<u32> {
        let max = self.parts.first().copied().unwrap_or(0) as usize;
        let mut m = vec![0u32; max + 1];
        for &p in &self.parts {
            m[p as usize] += 1;
        }
        m
    }

    /// All partitions of n in descending lexicographic order.
    pub fn all(n: u32) -> Vec<Partition> {
        let mut out = Vec::new();
        let mut stack = Vec::new();
        fn rec(remaining: u32, max: u32, stack: &mut Vec<u32>, out: &mut Vec<Partition>) {
            if remaining == 0 {
                out.push(Partition {
                    parts: stack.clone(),
                });
                return;
            }
            let hi = remaining.min(max);
            for next in (1..=hi).rev() {
                stack.push(next);
                rec(remaining - next, next, stack, out);
                stack.pop();
            }
        }
        rec(n, n, &mut stack, &mut out);
        out
    }
}

impl std::fmt::Display for Partition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "]")
    }
}

/// A rim hook: a connected border strip of the diagram whose removal leaves
/// a partition. `leg_length` is (rows spanned) - 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RimHook {
    /// 1-indexed (row, column) cells, top row first.
    pub cells: Vec<(u32, u32)>,
    pub leg_length: u32,
    pub remainder: Partition,
}

impl RimHook {
    pub fn length(&self) -> u32 {
        self.cells.len() as u32
    }

    pub fn sign(&self) -> i64 {
        if self.leg_length % 2 == 0 {
            1
        } else {
            -1
        }
    }
}

/// All rim hooks of the given length. Rim hooks of length L biject with
/// diagram cells of hook length L: the hook cornered at (r,c) maps to the
/// border strip {(i,j) in the diagram : i >= r, j >= c, (i+1,j+1) outside},
/// which spans rows r..=s for s the last row reaching column c.
pub fn rim_hooks(lambda: &Partition, length: u32) -> Vec<RimHook> {
    assert!(length >= 1, "rim hooks have positive length");
    let parts = lambda.parts();
    let transpose = lambda.transpose();
    let cols = transpose.parts();
    let mut hooks = Vec::new();
    for r in 1..=parts.len() as u32 {
        for c in 1..=parts[r as usize - 1] {
            let s = cols[c as usize - 1];
            let hook_len = parts[r as usize - 1] - c + s - r + 1;
            if hook_len != length {
                continue;
            }
            let mut cells = Vec::with_capacity(length as usize);
            for i in r..=s {
                let row_end = parts[i as usize - 1];
                let row_start = if i < s {
                    parts[i as usize].max(c)
                } else {
                    c
                };
                for j in row_start..=row_end {
                    cells.push((i, j));
                }
            }
            debug_assert_eq!(cells.len() as u32, length);
            let mut rem: Vec<u32> = parts.to_vec();
            for i in r..s {
                rem[i as usize - 1] = parts[i as usize] - 1;
            }
            rem[s as usize - 1] = c - 1;
            rem.retain(|&p| p > 0);
            hooks.push(RimHook {
                cells,
                leg_length: s - r,
                remainder: Partition::new(rem).expect("rim hook removal leaves a partition"),
            });
        }
    }
    hooks
}

/// Dimension of the irreducible indexed by lambda: n! divided by the
/// product of all hook lengths, exactly.
pub fn hook_dimension(lambda: &Partition) -> BigInt {
    let parts = lambda.parts();
    let cols_part = lambda.transpose();
    let cols = cols_part.parts();
    let mut numer = factorial(lambda.n());
    for r in 1..=parts.len() as u32 {
        for c in 1..=parts[r as usize - 1] {
            let h = parts[r as usize - 1] - c + cols[c as usize - 1] - r + 1;
            let (q, rem) = num::Integer::div_rem(&numer, &BigInt::from(h));
            debug_assert!(rem == BigInt::from(0) || h == 1);
            assert!(rem == BigInt::from(0), "hook product divides n!");
            numer = q;
        }
    }
    numer
}

fn factorial(n: u32) -> BigInt {
    let mut f = BigInt::one();
    for i in 2..=n {
        f *= i;
    }
    f
}

static MN_MEMO: Lazy<Mutex<HashMap<(Vec<u32>, Vec<u32>), i64>>> =
    Lazy::new(|| Mutex::new(HashMap::new()));

/// Character value of the irreducible indexed by lambda on the class of
/// cycle type rho, by the signed rim-hook recursion that strips the largest
/// part of rho first. Memoized globally; safe for concurrent callers.
pub fn mn_character(lambda: &Partition, rho: &Partition) -> Result<i64, SymCharError> {
    if lambda.n() != rho.n() {
        return Err(SymCharError::SizeMismatch {
            lambda: lambda.n(),
            rho: rho.n(),
        });
    }
    Ok(mn_rec(lambda, rho.parts()))
}

fn mn_rec(lambda: &Partition, rho: &[u32]) -> i64 {
    if rho.is_empty() {
        return 1;
    }
    let key = (lambda.parts().to_vec(), rho.to_vec());
    if let Some(&v) = MN_MEMO.lock().unwrap().get(&key) {
        return v;
    }
    let mut total = 0i64;
    for hook in rim_hooks(lambda, rho[0]) {
        total += hook.sign() * mn_rec(&hook.remainder, &rho[1..]);
    }
    MN_MEMO.lock().unwrap().insert(key, total);
    total
}

/// Conjugacy class size of the cycle type rho in the symmetric group on
/// n = |rho| points: n! / prod_j (j^{m_j} m_j!).
pub fn sym_class_size(rho: &Partition) -> BigInt {
    let mut z = BigInt::one();
    for (j, &m) in rho.multiplicities().iter().enumerate().skip(1) {
        z *= BigInt::from(j).pow(m) * factorial(m);
    }
    let (q, rem) = num::Integer::div_rem(&factorial(rho.n()), &z);
    assert!(rem == BigInt::from(0), "z_rho divides n!");
    q
}

/// The five cycle types whose character columns collapse to {-1,0,1} for
/// large n: [n], [n-1,1], [n-3,3], [n-4,3,1], [n-5,4,1].
pub fn small_value_cycle_types(n: u32) -> Result<[Partition; 5], SymCharError> {
    if n < 10 {
        return Err(SymCharError::TooSmall { n, min: 10 });
    }
    Ok([
        Partition::new(vec![n]).unwrap(),
        Partition::new(vec![n - 1, 1]).unwrap(),
        Partition::new(vec![n - 3, 3]).unwrap(),
        Partition::new(vec![n - 4, 3, 1]).unwrap(),
        Partition::new(vec![n - 5, 4, 1]).unwrap(),
    ])
}

/// Character values of every irreducible of S_n on the five test cycle
/// types. When `asserted` is set (n >= 16) every value was checked to lie
/// in {-1, 0, 1}.
pub struct SmallValueReport {
    pub n: u32,
    pub asserted: bool,
    pub types: [Partition; 5],
    pub rows: Vec<(Partition, [i64; 5])>,
}

/// Evaluate all of S_n's character values on the five test cycle types.
/// For n >= 16 the values are asserted to lie in {-1, 0, 1}; smaller n
/// (down to 10, where the types exist) only reports.
pub fn check_small_values(n: u32) -> Result<SmallValueReport, SymCharError> {
    let types = small_value_cycle_types(n)?;
    let asserted = n >= 16;
    let mut rows = Vec::new();
    for lambda in Partition::all(n) {
        let mut vals = [0i64; 5];
        for (slot, t) in types.iter().enumerate() {
            let v = mn_character(&lambda, t)?;
            if asserted && v.abs() > 1 {
                return Err(SymCharError::ViolationFound {
                    lambda: lambda.to_string(),
                    cycle_type: t.to_string(),
                    value: v,
                });
            }
            vals[slot] = v;
        }
        rows.push((lambda, vals));
    }
    Ok(SmallValueReport {
        n,
        asserted,
        types,
        rows,
    })
}

/// Sign of the class of cycle type rho: (-1)^(n - number of parts).
pub fn cycle_type_sign(rho: &Partition) -> i64 {
    if (rho.n() as usize - rho.len()) % 2 == 0 {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::ToPrimitive;

    fn pt(parts: &[u32]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    #[test]
    fn partition_enumeration_and_transpose() {
        assert_eq!(Partition::all(4).len(), 5);
        assert_eq!(Partition::all(10).len(), 42);
        assert_eq!(Partition::all(20).len(), 627);
        let first = &Partition::all(4)[0];
        assert_eq!(first.parts(), &[4]);
        for lam in Partition::all(8) {
            assert_eq!(lam.transpose().transpose(), lam);
            assert_eq!(lam.transpose().n(), lam.n());
        }
        assert_eq!(pt(&[3, 1]).transpose(), pt(&[2, 1, 1]));
        assert!(Partition::new(vec![1, 2]).is_err());
        assert!(Partition::new(vec![2, 0]).is_err());
    }

    #[test]
    fn hook_dimensions() {
        for n in 2..=12u32 {
            assert_eq!(hook_dimension(&pt(&[n])), BigInt::from(1));
            assert_eq!(hook_dimension(&pt(&[n - 1, 1])), BigInt::from(n - 1));
        }
        assert_eq!(hook_dimension(&pt(&[2, 2])), BigInt::from(2));
        assert_eq!(hook_dimension(&pt(&[3, 2])), BigInt::from(5));
        // Sum of squared dimensions is n!.
        for n in 1..=8u32 {
            let total: BigInt = Partition::all(n)
                .iter()
                .map(|l| hook_dimension(l).pow(2))
                .sum();
            assert_eq!(total, factorial(n));
        }
    }

    #[test]
    fn rim_hook_examples() {
        let hooks = rim_hooks(&pt(&[2, 2]), 2);
        assert_eq!(hooks.len(), 2);
        let legs: Vec<u32> = hooks.iter().map(|h| h.leg_length).collect();
        assert!(legs.contains(&0) && legs.contains(&1));
        for h in &hooks {
            assert_eq!(h.length(), 2);
            assert_eq!(h.remainder.n(), 2);
        }
        for n in 1..=9u32 {
            let hooks = rim_hooks(&pt(&[n]), n);
            assert_eq!(hooks.len(), 1);
            assert_eq!(hooks[0].leg_length, 0);
            assert!(hooks[0].remainder.is_empty());
        }
        // A length-15 strip in a 16-cell diagram exists only when all but
        // one cell sit on the border path: [8,8]'s rim has 9 cells, so it
        // has none, while [13,2,1] has exactly one.
        assert_eq!(rim_hooks(&pt(&[8, 8]), 15).len(), 0);
        assert_eq!(rim_hooks(&pt(&[13, 2, 1]), 15).len(), 1);
        // Cells of every hook are on the rim: removal already validated by
        // the Partition constructor inside rim_hooks.
        let vertical = hooks_with_leg(&pt(&[2, 2]), 2, 1);
        assert_eq!(vertical.cells, vec![(1, 2), (2, 2)]);
    }

    fn hooks_with_leg(lam: &Partition, len: u32, leg: u32) -> RimHook {
        rim_hooks(lam, len)
            .into_iter()
            .find(|h| h.leg_length == leg)
            .unwrap()
    }

    #[test]
    fn uniqueness_of_long_rim_hooks() {
        // For 3k+1 <= n every partition of n has at most one rim hook of
        // length n-k.
        for n in 1..=20u32 {
            for k in 0..=(n.saturating_sub(1)) / 3 {
                if 3 * k + 1 > n {
                    continue;
                }
                for lam in Partition::all(n) {
                    assert!(
                        rim_hooks(&lam, n - k).len() <= 1,
                        "lambda={lam}, length={}",
                        n - k
                    );
                }
            }
        }
    }

    #[test]
    fn mn_examples() {
        for n in 3..=10u32 {
            assert_eq!(mn_character(&pt(&[n - 1, 1]), &pt(&[n])).unwrap(), -1);
        }
        assert_eq!(mn_character(&pt(&[2, 2]), &pt(&[2, 2])).unwrap(), 2);
        for n in 16..=18u32 {
            assert_eq!(
                mn_character(&pt(&[n - 2, 2]), &pt(&[n - 4, 3, 1])).unwrap(),
                -1
            );
        }
        assert_eq!(
            mn_character(&pt(&[2, 1]), &pt(&[1, 1])),
            Err(SymCharError::SizeMismatch { lambda: 3, rho: 2 })
        );
    }

    #[test]
    fn mn_at_identity_is_hook_dimension() {
        for n in 1..=10u32 {
            let id = pt(&vec![1u32; n as usize]);
            for lam in Partition::all(n) {
                assert_eq!(
                    BigInt::from(mn_character(&lam, &id).unwrap()),
                    hook_dimension(&lam)
                );
            }
        }
    }

    #[test]
    fn transpose_rule() {
        // The sign twist: the conjugate partition's character is the sign
        // character times the original.
        for n in 1..=8u32 {
            for lam in Partition::all(n) {
                for rho in Partition::all(n) {
                    assert_eq!(
                        mn_character(&lam.transpose(), &rho).unwrap(),
                        cycle_type_sign(&rho) * mn_character(&lam, &rho).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn column_orthogonality() {
        // Sum over lambda of chi(rho) chi(sigma) is z_rho on the diagonal
        // and 0 off it; on the identity column the diagonal value is n!.
        for n in 1..=6u32 {
            let lams = Partition::all(n);
            let classes = Partition::all(n);
            for (i, rho) in classes.iter().enumerate() {
                for sigma in &classes[i..] {
                    let dot: i64 = lams
                        .iter()
                        .map(|l| {
                            mn_character(l, rho).unwrap() * mn_character(l, sigma).unwrap()
                        })
                        .sum();
                    if rho == sigma {
                        let z = factorial(n) / sym_class_size(rho);
                        assert_eq!(BigInt::from(dot), z);
                    } else {
                        assert_eq!(dot, 0);
                    }
                }
            }
        }
    }

    #[test]
    fn class_sizes_and_closed_forms() {
        assert_eq!(sym_class_size(&pt(&[1, 1, 1])), BigInt::from(1));
        assert_eq!(sym_class_size(&pt(&[3])), BigInt::from(2));
        assert_eq!(sym_class_size(&pt(&[2, 1])), BigInt::from(3));
        // Class sizes over a whole symmetric group sum to n!.
        for n in 1..=9u32 {
            let total: BigInt = Partition::all(n).iter().map(sym_class_size).sum();
            assert_eq!(total, factorial(n));
        }
        // The five test types have closed-form sizes (n-1)!, n(n-2)!,
        // 2C(n,3)(n-4)!, 8C(n,4)(n-5)!, 30C(n,5)(n-6)!.
        let choose = |n: u32, k: u32| {
            factorial(n) / (factorial(k) * factorial(n - k))
        };
        for n in [16u32, 17, 21] {
            let [t0, t1, t2, t3, t4] = small_value_cycle_types(n).unwrap();
            assert_eq!(sym_class_size(&t0), factorial(n - 1));
            assert_eq!(sym_class_size(&t1), BigInt::from(n) * factorial(n - 2));
            assert_eq!(
                sym_class_size(&t2),
                BigInt::from(2) * choose(n, 3) * factorial(n - 4)
            );
            assert_eq!(
                sym_class_size(&t3),
                BigInt::from(8) * choose(n, 4) * factorial(n - 5)
            );
            assert_eq!(
                sym_class_size(&t4),
                BigInt::from(30) * choose(n, 5) * factorial(n - 6)
            );
        }
        assert_eq!(
            sym_class_size(&pt(&[11, 4, 1])),
            BigInt::from(30) * choose(16, 5) * factorial(10)
        );
    }

    #[test]
    fn small_value_report() {
        let rep = check_small_values(16).unwrap();
        assert!(rep.asserted);
        assert_eq!(rep.rows.len(), 231);
        for (_, vals) in &rep.rows {
            assert!(vals.iter().all(|v| v.abs() <= 1));
        }
        // The sign representation's row: the transpose rule sends the
        // trivial row (all ones) to the per-type signs.
        let id_row = rep
            .rows
            .iter()
            .find(|(l, _)| l.parts() == [1u32; 16])
            .unwrap();
        let signs: Vec<i64> = rep.types.iter().map(cycle_type_sign).collect();
        assert_eq!(id_row.1.to_vec(), signs);

        let rep12 = check_small_values(12).unwrap();
        assert!(!rep12.asserted);
        assert!(matches!(
            check_small_values(9),
            Err(SymCharError::TooSmall { .. })
        ));
    }

    #[test]
    fn dimensions_fit_reporting_types() {
        // The largest dimension for n = 21 still fits i64 comfortably.
        let max = Partition::all(21)
            .iter()
            .map(hook_dimension)
            .max()
            .unwrap();
        assert!(max.to_i64().is_some());
    }
}
