//! Closed-form weighting families with exact certificates.
//!
//! Three constructions: a five-class weighting of S_n acting on 2-subsets
//! whose weighted derangement spectrum lies in [-1, C(n,2)-1] and yields
//! alpha bounds 2(n-2)! for S_n and (n-2)! for A_n; two-class weightings of
//! SL(2,k^2) (k even) and PSL(2,k^2) (k odd) acting on (k^2+1)(k+1) points
//! that force the least eigenvalue to -1 and pin the intersection density
//! to 1; and the closed-form unweighted spectrum of PSL(2,q) (q even) on
//! 2-subsets of the projective line, which together with an upper-triangular
//! intersecting subgroup pins the density to q/2.

use crate::field::actions::{triangular_pair_perms, ActionError};
use crate::perm::{ClassTable, Perm, PermError};
use crate::rat::{big, ratio};
use crate::scheme::{
    SchemeEigensystem, SchemeError, SpectrumEntry, SpectrumReport, SpectrumValue, WeightVector,
};
use crate::symchar::{
    hook_dimension, mn_character, small_value_cycle_types, sym_class_size, Partition,
    SymCharError,
};
use num::{BigInt, BigRational, One, Signed, Zero};
use std::collections::HashSet;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FamiliesError {
    #[error("n = {n} is below the certified minimum {min}")]
    TooSmall { n: u32, min: u32 },
    #[error("invalid weight split: {0}")]
    BadSplit(String),
    #[error("derangement class census does not match the closed form: {0}")]
    CensusMismatch(String),
    #[error("spectral assertion failed: {0}")]
    SpectralViolation(String),
    #[error(transparent)]
    SymChar(#[from] SymCharError),
    #[error(transparent)]
    Scheme(#[from] SchemeError),
    #[error(transparent)]
    Action(#[from] ActionError),
    #[error(transparent)]
    Perm(#[from] PermError),
}

fn factorial(n: u32) -> BigInt {
    (1..=n as u64).map(BigInt::from).product()
}

fn choose2(n: u32) -> BigInt {
    big(n as u64) * big((n as u64).saturating_sub(1)) / big(2u64)
}

/// Class weights for S_n on 2-subsets, supported on the five cycle types
/// [n], [n-1,1], [n-3,3], [n-4,3,1], [n-5,4,1] (in that order). The totals
/// satisfy the linear system
///   omega_1 + ... + omega_5 = alpha,  omega_1 + omega_3 = beta,
///   omega_2 + omega_4 + omega_5 = gamma
/// with alpha = C(n,2)-1, beta = n-1, gamma = C(n,2)-n, parameterized by
/// t = (t1,t2,t3) as omega = (beta-t1, alpha-beta-t2-t3, t1, t2, t3).
#[derive(Clone, Debug)]
pub struct SymWeightPlan {
    pub n: u32,
    pub alpha: BigInt,
    pub beta: BigInt,
    pub gamma: BigInt,
    pub t: [BigRational; 3],
    pub omega: [BigRational; 5],
}

impl SymWeightPlan {
    fn from_t(n: u32, t: [BigRational; 3]) -> Result<Self, FamiliesError> {
        let alpha = choose2(n) - BigInt::one();
        let beta = big(n as u64 - 1);
        let gamma = choose2(n) - big(n as u64);
        if t.iter().any(|v| v.is_negative()) {
            return Err(FamiliesError::BadSplit("negative parameter".into()));
        }
        let omega = [
            ratio(beta.clone(), 1) - &t[0],
            ratio(&alpha - &beta, 1) - &t[1] - &t[2],
            t[0].clone(),
            t[1].clone(),
            t[2].clone(),
        ];
        if omega.iter().any(|v| v.is_negative()) {
            return Err(FamiliesError::BadSplit(
                "parameters leave a negative class weight".into(),
            ));
        }
        debug_assert_eq!(
            omega.iter().sum::<BigRational>(),
            ratio(alpha.clone(), 1)
        );
        debug_assert_eq!(&omega[0] + &omega[2], ratio(beta.clone(), 1));
        debug_assert_eq!(
            &omega[1] + &omega[3] + &omega[4],
            ratio(gamma.clone(), 1)
        );
        Ok(SymWeightPlan {
            n,
            alpha,
            beta,
            gamma,
            t,
            omega,
        })
    }

    pub fn cycle_types(&self) -> [Partition; 5] {
        small_value_cycle_types(self.n).expect("plan n >= 16")
    }

    /// Per-element weights x_rho = omega_rho / |C_rho|.
    pub fn element_weights(&self) -> [BigRational; 5] {
        let types = self.cycle_types();
        std::array::from_fn(|i| &self.omega[i] / ratio(sym_class_size(&types[i]), 1))
    }
}

/// Parity-appropriate weight plan: even n weights only [n-1,1] and [n-3,3]
/// (t = (beta,0,0)); odd n weights [n], [n-4,3,1], [n-5,4,1] with the default
/// free split (t2,t3) = (gamma,0). Both supports consist of even
/// permutations, so the same plan restricts to A_n.
pub fn sym_two_subset_weights(n: u32) -> Result<SymWeightPlan, FamiliesError> {
    if n < 16 {
        return Err(FamiliesError::TooSmall { n, min: 16 });
    }
    let gamma = ratio(choose2(n) - big(n as u64), 1);
    let t = if n % 2 == 0 {
        [ratio(big(n as u64 - 1), 1), BigRational::zero(), BigRational::zero()]
    } else {
        [BigRational::zero(), gamma, BigRational::zero()]
    };
    SymWeightPlan::from_t(n, t)
}

/// Odd-n plan with an explicit split t2 + t3 = gamma, t2, t3 >= 0.
pub fn sym_two_subset_weights_split(
    n: u32,
    t2: BigRational,
    t3: BigRational,
) -> Result<SymWeightPlan, FamiliesError> {
    if n < 16 {
        return Err(FamiliesError::TooSmall { n, min: 16 });
    }
    if n % 2 == 0 {
        return Err(FamiliesError::BadSplit(
            "even n admits no free split; use sym_two_subset_weights".into(),
        ));
    }
    let gamma = ratio(choose2(n) - big(n as u64), 1);
    if &t2 + &t3 != gamma {
        return Err(FamiliesError::BadSplit(format!(
            "t2 + t3 must equal gamma = {gamma}"
        )));
    }
    SymWeightPlan::from_t(n, [BigRational::zero(), t2, t3])
}

pub struct SymSpectrumRow {
    pub lambda: Partition,
    pub dimension: BigInt,
    pub value: BigRational,
}

/// Exhaustive eigenvalue table of the weighted 2-subset derangement matrix,
/// one row per irreducible of S_n, with the certified alpha bounds.
pub struct SymCertificate {
    pub plan: SymWeightPlan,
    pub rows: Vec<SymSpectrumRow>,
    pub max_value: BigRational,
    pub min_value: BigRational,
    /// 2 (n-2)!, the ratio bound n! / C(n,2) for S_n.
    pub alpha_sym: BigInt,
    /// (n-2)!, the same bound for A_n on half the vertices.
    pub alpha_alt: BigInt,
}

impl SymCertificate {
    pub fn row(&self, parts: &[u32]) -> Option<&SymSpectrumRow> {
        self.rows.iter().find(|r| r.lambda.parts() == parts)
    }
}

pub fn sym_two_subset_certificate(n: u32) -> Result<SymCertificate, FamiliesError> {
    certificate_for_plan(sym_two_subset_weights(n)?)
}

/// Evaluate xi^lambda = (1/f^lambda) sum_rho omega_rho chi^lambda(rho)
/// exactly for every lambda |- n and check the extremal structure: the
/// maximum is alpha, attained exactly by the two linear characters
/// (eigenvalue multiplicity 2), and the minimum is -1, attained by
/// [n-1,1] and [n-2,2]. The ratio bound is then
/// n! * 1 / (1 + alpha) = 2 (n-2)!.
pub fn certificate_for_plan(plan: SymWeightPlan) -> Result<SymCertificate, FamiliesError> {
    let n = plan.n;
    let types = plan.cycle_types();
    let mut rows = Vec::new();
    for lambda in Partition::all(n) {
        let dimension = hook_dimension(&lambda);
        let mut num = BigRational::zero();
        for (w, rho) in plan.omega.iter().zip(&types) {
            if w.is_zero() {
                continue;
            }
            num += w * ratio(big(mn_character(&lambda, rho)?), 1);
        }
        let value = num / ratio(dimension.clone(), 1);
        rows.push(SymSpectrumRow {
            lambda,
            dimension,
            value,
        });
    }
    let alpha = ratio(plan.alpha.clone(), 1);
    let max_value = rows.iter().map(|r| r.value.clone()).max().unwrap();
    if max_value != alpha {
        return Err(FamiliesError::SpectralViolation(format!(
            "max eigenvalue {max_value} differs from alpha {alpha}"
        )));
    }
    let attain: Vec<&SymSpectrumRow> = rows.iter().filter(|r| r.value == alpha).collect();
    let linear = attain.len() == 2
        && attain.iter().all(|r| r.dimension.is_one())
        && attain[0].lambda.parts() == &[n][..]
        && attain[1].lambda.parts() == vec![1u32; n as usize].as_slice();
    if !linear {
        return Err(FamiliesError::SpectralViolation(format!(
            "alpha attained by {} rows instead of the two linear characters",
            attain.len()
        )));
    }
    let min_value = rows.iter().map(|r| r.value.clone()).min().unwrap();
    let minus_one = -BigRational::one();
    if min_value != minus_one {
        return Err(FamiliesError::SpectralViolation(format!(
            "min eigenvalue {min_value} differs from -1"
        )));
    }
    for probe in [vec![n - 1, 1], vec![n - 2, 2]] {
        let row = rows
            .iter()
            .find(|r| r.lambda.parts() == probe)
            .expect("partition enumeration is complete");
        if row.value != minus_one {
            return Err(FamiliesError::SpectralViolation(format!(
                "expected eigenvalue -1 at {}, found {}",
                row.lambda, row.value
            )));
        }
    }
    // alpha(S_n on pairs) <= |V| tau / (tau - d) with |V| = n!, d = alpha,
    // tau = -1; the quotient is integral.
    let bound = ratio(factorial(n), 1) / (BigRational::one() + alpha);
    if !bound.is_integer() {
        return Err(FamiliesError::SpectralViolation(
            "ratio bound is not an integer".into(),
        ));
    }
    let alpha_sym = bound.to_integer();
    let expect = big(2u64) * factorial(n - 2);
    if alpha_sym != expect {
        return Err(FamiliesError::SpectralViolation(format!(
            "ratio bound {alpha_sym} differs from 2 (n-2)! = {expect}"
        )));
    }
    let alpha_alt = factorial(n - 2);
    Ok(SymCertificate {
        plan,
        rows,
        max_value,
        min_value,
        alpha_sym,
        alpha_alt,
    })
}

/// Derangement classes of SL/PSL(2,k^2) on (k^2+1)(k+1) points, split into
/// the two closed-form types by class size: k^2(k^2+1) for type 1 and
/// k^2(k^2-1) for type 2.
pub struct Sl2Census {
    pub k: u64,
    pub type1_classes: Vec<usize>,
    pub type2_classes: Vec<usize>,
    pub type1_size: u64,
    pub type2_size: u64,
}

fn census(
    k: u64,
    table: &ClassTable,
    expect1: u64,
    expect2: u64,
) -> Result<Sl2Census, FamiliesError> {
    let q = k * k;
    let type1_size = q * (q + 1);
    let type2_size = q * (q - 1);
    let mut type1_classes = Vec::new();
    let mut type2_classes = Vec::new();
    for i in 0..table.num_classes() {
        if !table.derangement[i] {
            continue;
        }
        if table.sizes[i] == type1_size {
            type1_classes.push(i);
        } else if table.sizes[i] == type2_size {
            type2_classes.push(i);
        } else {
            return Err(FamiliesError::CensusMismatch(format!(
                "derangement class of size {} matches neither k^2(k^2+1) = {} nor k^2(k^2-1) = {}",
                table.sizes[i], type1_size, type2_size
            )));
        }
    }
    if type1_classes.len() as u64 != expect1 || type2_classes.len() as u64 != expect2 {
        return Err(FamiliesError::CensusMismatch(format!(
            "found {} type-1 and {} type-2 classes, expected {} and {}",
            type1_classes.len(),
            type2_classes.len(),
            expect1,
            expect2
        )));
    }
    Ok(Sl2Census {
        k,
        type1_classes,
        type2_classes,
        type1_size,
        type2_size,
    })
}

pub fn sl2_even_census(k: u64, table: &ClassTable) -> Result<Sl2Census, FamiliesError> {
    if k < 2 || !k.is_power_of_two() {
        return Err(FamiliesError::CensusMismatch(format!(
            "k = {k} is not an even prime power"
        )));
    }
    census(k, table, k * (k - 1) / 2, k * k / 2)
}

pub fn psl2_odd_census(k: u64, table: &ClassTable) -> Result<Sl2Census, FamiliesError> {
    if k < 3 || k % 2 == 0 {
        return Err(FamiliesError::CensusMismatch(format!("k = {k} is not odd")));
    }
    if k * (k - 1) % 4 != 0 {
        return Err(FamiliesError::CensusMismatch(format!(
            "type-1 class count C(k,2)/2 = {}/2 is not an integer at k = {k}",
            k * (k - 1) / 2
        )));
    }
    census(k, table, k * (k - 1) / 4, (k * k - 1) / 4)
}

/// Two-value weighting of SL(2,k^2) (k even) on (k^2+1)(k+1) points:
/// per-element weights
///   omega_1 = (k^3+k) / (2 C(k,2) k^2 (k^2+1))   on type-1 classes,
///   omega_2 = (k^3+2k^2+k) / (k^4 (k^2-1))       on type-2 classes.
/// The weighted spectrum lies in {(k^2+1)(k+1)-1, (k+1)/(k(k-1)), 0, -1},
/// so the ratio bound equals the stabilizer order k^2(k-1).
pub fn sl2_even_weights(k: u64, table: &ClassTable) -> Result<WeightVector, FamiliesError> {
    let c = sl2_even_census(k, table)?;
    let w1 = ratio(
        big(k * k * k + k),
        big(k * (k - 1)) * big(k * k) * big(k * k + 1),
    );
    let w2 = ratio(big(k * k * k + 2 * k * k + k), big(k * k * k * k) * big(k * k - 1));
    let mut w = WeightVector::zero(table.num_classes());
    for &i in &c.type1_classes {
        w.weights[i] = w1.clone();
    }
    for &i in &c.type2_classes {
        w.weights[i] = w2.clone();
    }
    Ok(w)
}

/// The four admissible eigenvalues of the even-k weighting, largest first.
pub fn sl2_even_expected_values(k: u64) -> [BigRational; 4] {
    [
        ratio(big((k * k + 1) * (k + 1) - 1), 1),
        ratio(big(k + 1), big(k * (k - 1))),
        BigRational::zero(),
        -BigRational::one(),
    ]
}

/// Stabilizer order of SL(2,k^2) on (k^2+1)(k+1) points for even k; the
/// weighting's ratio bound matches it exactly, giving density 1.
pub fn sl2_even_alpha(k: u64) -> BigInt {
    big(k * k * (k - 1))
}

/// Two-value weighting of PSL(2,k^2) (k odd, k(k-1) divisible by 4) on
/// (k^2+1)(k+1) points: per-element weights
///   omega_1 = k(k^2+1) / (C(k,2) k^2 (k^2+1))  on type-1 classes,
///   omega_2 = 2k(k+1)^2 / (k^2 (k^2-1)^2)      on type-2 classes.
pub fn psl2_odd_weights(k: u64, table: &ClassTable) -> Result<WeightVector, FamiliesError> {
    let c = psl2_odd_census(k, table)?;
    let w1 = ratio(
        big(k) * big(k * k + 1),
        big(k * (k - 1) / 2) * big(k * k) * big(k * k + 1),
    );
    let w2 = ratio(
        big(2 * k) * big((k + 1) * (k + 1)),
        big(k * k) * big(k * k - 1) * big(k * k - 1),
    );
    let mut w = WeightVector::zero(table.num_classes());
    for &i in &c.type1_classes {
        w.weights[i] = w1.clone();
    }
    for &i in &c.type2_classes {
        w.weights[i] = w2.clone();
    }
    Ok(w)
}

/// The four admissible eigenvalues of the odd-k weighting, largest first.
/// The positive interior value 2k/(k-1)^2 is afforded by the degree k^2-1
/// characters, whose type-2 sums are +1.
pub fn psl2_odd_expected_values(k: u64) -> [BigRational; 4] {
    [
        ratio(big((k * k + 1) * (k + 1) - 1), 1),
        ratio(big(2 * k), big((k - 1) * (k - 1))),
        BigRational::zero(),
        -BigRational::one(),
    ]
}

/// Stabilizer order of PSL(2,k^2) on (k^2+1)(k+1) points for odd k,
/// k^2(k-1)/2; the weighting's ratio bound matches it exactly.
pub fn psl2_odd_alpha(k: u64) -> BigInt {
    big(k * k * (k - 1)) / big(2u64)
}

/// Exact character sums over the two derangement types, one row per
/// irreducible: (chi(1), sum over type-1 reps of chi, sum over type-2).
pub struct TypeCharacterSums {
    pub degree: u64,
    pub type1: BigInt,
    pub type2: BigInt,
}

pub fn sl2_type_character_sums(
    es: &SchemeEigensystem,
    c: &Sl2Census,
) -> Result<Vec<TypeCharacterSums>, FamiliesError> {
    (0..es.rows.len())
        .map(|r| {
            Ok(TypeCharacterSums {
                degree: es.rows[r].degree,
                type1: es.exact_char_sum(r, &c.type1_classes)?,
                type2: es.exact_char_sum(r, &c.type2_classes)?,
            })
        })
        .collect()
}

/// Verify the even-k character-sum table behind the weighting: with
/// q = k^2, the trivial character sums to the class counts, the Steinberg
/// character (degree q) to (C(k,2), -q/2), each degree q-1 character to
/// (0, 1), and the degree q+1 characters have type-2 sum 0 with type-1 sums
/// -(k-1) for exactly k/2 of them and 0 for the rest.
pub fn check_sl2_even_type_sums(
    es: &SchemeEigensystem,
    c: &Sl2Census,
) -> Result<(), FamiliesError> {
    let k = c.k;
    let q = k * k;
    let sums = sl2_type_character_sums(es, c)?;
    if sums.len() as u64 != q + 1 {
        return Err(FamiliesError::SpectralViolation(format!(
            "{} irreducibles instead of q+1 = {}",
            sums.len(),
            q + 1
        )));
    }
    let count1 = big(k * (k - 1) / 2);
    let count2 = big(q / 2);
    let mut principal_type1 = Vec::new();
    let mut seen = [0u64; 4];
    for s in &sums {
        if s.degree == 1 {
            seen[0] += 1;
            check_sum(s, &count1, &count2)?;
        } else if s.degree == q {
            seen[1] += 1;
            check_sum(s, &count1, &-&count2)?;
        } else if s.degree == q - 1 {
            seen[2] += 1;
            check_sum(s, &BigInt::zero(), &BigInt::one())?;
        } else if s.degree == q + 1 {
            seen[3] += 1;
            if !s.type2.is_zero() {
                return Err(FamiliesError::SpectralViolation(format!(
                    "degree q+1 row has type-2 sum {}",
                    s.type2
                )));
            }
            principal_type1.push(s.type1.clone());
        } else {
            return Err(FamiliesError::SpectralViolation(format!(
                "unexpected character degree {}",
                s.degree
            )));
        }
    }
    if seen != [1, 1, q / 2, q / 2 - 1] {
        return Err(FamiliesError::SpectralViolation(format!(
            "degree census {seen:?} differs from [1, 1, q/2, q/2-1]"
        )));
    }
    principal_type1.sort();
    let mut expect: Vec<BigInt> = std::iter::repeat(-big(k - 1))
        .take((k / 2) as usize)
        .chain(std::iter::repeat(BigInt::zero()).take((q / 2 - 1 - k / 2) as usize))
        .collect();
    expect.sort();
    if principal_type1 != expect {
        return Err(FamiliesError::SpectralViolation(format!(
            "degree q+1 type-1 sums {principal_type1:?} differ from {expect:?}"
        )));
    }
    Ok(())
}

fn check_sum(
    s: &TypeCharacterSums,
    type1: &BigInt,
    type2: &BigInt,
) -> Result<(), FamiliesError> {
    if &s.type1 != type1 || &s.type2 != type2 {
        return Err(FamiliesError::SpectralViolation(format!(
            "degree {} row sums ({}, {}) differ from ({type1}, {type2})",
            s.degree, s.type1, s.type2
        )));
    }
    Ok(())
}

/// Spot checks on the odd-k character sums: the trivial row counts the
/// classes; some principal-series row has type-1 sum -(k-1)/2; the degree
/// (k^2+1)/2 rows have type-1 sum -(k-1)/4; every degree k^2-1 row has
/// type-2 sum +1; and the Steinberg row has type-2 sum -(k^2-1)/4.
pub fn check_psl2_odd_type_sums(
    es: &SchemeEigensystem,
    c: &Sl2Census,
) -> Result<(), FamiliesError> {
    let k = c.k;
    let q = k * k;
    let sums = sl2_type_character_sums(es, c)?;
    let trivial = sums
        .iter()
        .find(|s| s.degree == 1)
        .ok_or_else(|| FamiliesError::SpectralViolation("no trivial row".into()))?;
    check_sum(trivial, &big(k * (k - 1) / 4), &big((q - 1) / 4))?;
    if !sums
        .iter()
        .any(|s| s.degree == q + 1 && s.type1 == -big((k - 1) / 2))
    {
        return Err(FamiliesError::SpectralViolation(format!(
            "no degree q+1 row with type-1 sum -(k-1)/2 = -{}",
            (k - 1) / 2
        )));
    }
    for s in &sums {
        if s.degree == (q + 1) / 2 {
            check_sum(s, &-big((k - 1) / 4), &BigInt::zero())?;
        } else if s.degree == q - 1 {
            check_sum(s, &BigInt::zero(), &BigInt::one())?;
        } else if s.degree == q {
            check_sum(s, &big(k * (k - 1) / 4), &-big((q - 1) / 4))?;
        }
    }
    Ok(())
}

/// Closed-form data for PSL(2,q), q even, acting on 2-subsets of the
/// projective line: the unweighted derangement spectrum, an intersecting
/// subgroup of upper-triangular matrices meeting the ratio bound, and the
/// resulting exact density q/2.
pub struct Psl2PairsReport {
    pub q: u64,
    pub spectrum: SpectrumReport,
    pub witness: Vec<Perm>,
    /// alpha = q(q-1), both the ratio bound and the witness size.
    pub alpha: BigInt,
    /// rho = alpha / (2(q-1)) = q/2.
    pub rho: BigRational,
}

impl Psl2PairsReport {
    pub fn entries_exact(&self) -> Vec<(BigRational, u64)> {
        self.spectrum
            .entries
            .iter()
            .map(|e| {
                (
                    e.value.as_exact().expect("closed form is exact").clone(),
                    e.multiplicity,
                )
            })
            .collect()
    }
}

/// Spectrum {q^2(q-1)/2 x1, q x q(q-1)^2/2, 0 x (q+1)^2(q-2)/2,
/// -q(q-1)/2 x q^2} with the triangular witness, verified intersecting and
/// closed under products.
pub fn psl2_pairs_even(q: u64) -> Result<Psl2PairsReport, FamiliesError> {
    if q < 4 || !q.is_power_of_two() {
        return Err(FamiliesError::CensusMismatch(format!(
            "q = {q} is not an even prime power >= 4"
        )));
    }
    let order = q * (q * q - 1);
    let values: [(BigRational, u64); 4] = [
        (ratio(big(q * q * (q - 1)), 2), 1),
        (ratio(big(q), 1), q * (q - 1) * (q - 1) / 2),
        (BigRational::zero(), (q + 1) * (q + 1) * (q - 2) / 2),
        (-ratio(big(q * (q - 1)), 2), q * q),
    ];
    assert_eq!(values.iter().map(|(_, m)| m).sum::<u64>(), order);
    let row_sum = values[0].0.clone();
    let spectrum = SpectrumReport {
        entries: values
            .iter()
            .map(|(v, m)| SpectrumEntry {
                value: SpectrumValue::Exact(v.clone()),
                multiplicity: *m,
            })
            .collect(),
        row_sum: row_sum.clone(),
        exact: true,
    };
    let witness = triangular_pair_perms(q as u32)?;
    let expected = (q * (q - 1)) as usize;
    if witness.len() != expected {
        return Err(FamiliesError::SpectralViolation(format!(
            "witness has {} elements instead of q(q-1) = {expected}",
            witness.len()
        )));
    }
    // Intersecting: every pair of witness elements agrees on some 2-subset.
    for a in 0..witness.len() {
        for b in a + 1..witness.len() {
            let (x, y) = (&witness[a], &witness[b]);
            if !(0..x.degree() as u16).any(|p| x.apply(p) == y.apply(p)) {
                return Err(FamiliesError::SpectralViolation(format!(
                    "witness elements {a} and {b} disagree everywhere"
                )));
            }
        }
    }
    // Closed under products, hence a subgroup.
    let index: HashSet<&[u16]> = witness.iter().map(|p| p.images()).collect();
    for a in &witness {
        for b in &witness {
            if !index.contains(a.then(b).images()) {
                return Err(FamiliesError::SpectralViolation(
                    "witness set is not closed under products".into(),
                ));
            }
        }
    }
    // Ratio bound |V| tau / (tau - d) with tau = -q(q-1)/2, d = q^2(q-1)/2.
    let tau = values[3].0.clone();
    let bound = ratio(big(order), 1) * -tau.clone() / (&row_sum - &tau);
    let alpha = big(q * (q - 1));
    if bound != ratio(alpha.clone(), 1) {
        return Err(FamiliesError::SpectralViolation(format!(
            "ratio bound {bound} differs from q(q-1) = {alpha}"
        )));
    }
    // Density: stabilizer of a 2-subset has order 2(q-1).
    let rho = ratio(alpha.clone(), big(2 * (q - 1)));
    assert_eq!(rho, ratio(big(q), 2));
    Ok(Psl2PairsReport {
        q,
        spectrum,
        witness,
        alpha,
        rho,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::actions::{psl2_action, sl2k2_in_sp4, Psl2Target};
    use crate::perm::PermGroup;
    use crate::scheme::{eigensystem, structure_constants, weighted_spectrum};

    fn rq(n: i64, d: i64) -> BigRational {
        ratio(big(n), big(d))
    }

    fn scheme_of(group: &PermGroup) -> (ClassTable, SchemeEigensystem) {
        let els = group.elements().unwrap();
        let table = ClassTable::compute(group).unwrap();
        let sc = structure_constants(els, &table).unwrap();
        let blocks = table.rational_class_blocks(els);
        let es = eigensystem(&sc, blocks).unwrap();
        (table, es)
    }

    fn omega_ints(plan: &SymWeightPlan) -> Vec<BigRational> {
        plan.omega.to_vec()
    }

    #[test]
    fn sym_weight_plans() {
        let even = sym_two_subset_weights(16).unwrap();
        assert_eq!(
            omega_ints(&even),
            vec![rq(0, 1), rq(104, 1), rq(15, 1), rq(0, 1), rq(0, 1)]
        );
        let odd = sym_two_subset_weights(17).unwrap();
        assert_eq!(
            omega_ints(&odd),
            vec![rq(16, 1), rq(0, 1), rq(0, 1), rq(119, 1), rq(0, 1)]
        );
        let split = sym_two_subset_weights_split(17, rq(119, 2), rq(119, 2)).unwrap();
        assert_eq!(
            omega_ints(&split),
            vec![rq(16, 1), rq(0, 1), rq(0, 1), rq(119, 2), rq(119, 2)]
        );
        assert!(matches!(
            sym_two_subset_weights(15),
            Err(FamiliesError::TooSmall { n: 15, min: 16 })
        ));
        assert!(matches!(
            sym_two_subset_weights_split(17, rq(1, 1), rq(1, 1)),
            Err(FamiliesError::BadSplit(_))
        ));
        assert!(matches!(
            sym_two_subset_weights_split(17, rq(120, 1), rq(-1, 1)),
            Err(FamiliesError::BadSplit(_))
        ));
        assert!(matches!(
            sym_two_subset_weights_split(16, rq(52, 1), rq(52, 1)),
            Err(FamiliesError::BadSplit(_))
        ));
    }

    #[test]
    fn sym_certificate_frozen_values() {
        let cert = sym_two_subset_certificate(16).unwrap();
        assert_eq!(cert.max_value, rq(119, 1));
        assert_eq!(cert.min_value, rq(-1, 1));
        assert_eq!(cert.row(&[1; 16]).unwrap().value, rq(119, 1));
        let mut two_then_ones = vec![2u32];
        two_then_ones.extend([1u32; 14]);
        assert_eq!(cert.row(&two_then_ones).unwrap().value, rq(-1, 1));
        assert_eq!(cert.row(&[14, 1, 1]).unwrap().value, rq(1, 7));
        let mid = &cert.row(&[8, 8]).unwrap().value;
        assert!(*mid >= rq(-1, 1) && *mid <= rq(119, 1));
        assert_eq!(cert.alpha_sym, big(2u64) * factorial(14));
        assert_eq!(cert.alpha_alt, factorial(14));

        let cert = sym_two_subset_certificate(17).unwrap();
        assert_eq!(cert.row(&[1; 17]).unwrap().value, rq(135, 1));
        assert_eq!(cert.alpha_sym, big(2u64) * factorial(15));
    }

    #[test]
    fn sym_certificates_for_all_small_n() {
        for n in 16..=24 {
            let cert = sym_two_subset_certificate(n).unwrap();
            assert_eq!(cert.alpha_sym, big(2u64) * factorial(n - 2));
            assert_eq!(cert.alpha_alt, factorial(n - 2));
            if n % 2 == 1 {
                let gamma = ratio(choose2(n) - big(n as u64), 1);
                let half = gamma / rq(2, 1);
                let plan = sym_two_subset_weights_split(n, half.clone(), half).unwrap();
                let variant = certificate_for_plan(plan).unwrap();
                assert_eq!(variant.alpha_sym, cert.alpha_sym);
                assert_eq!(variant.max_value, cert.max_value);
                assert_eq!(variant.min_value, cert.min_value);
            }
        }
    }

    #[test]
    fn sl2_even_weights_k2() {
        let emb = sl2k2_in_sp4(2).unwrap();
        let (table, es) = scheme_of(&emb.group);
        let w = sl2_even_weights(2, &table).unwrap();
        let c = sl2_even_census(2, &table).unwrap();
        assert_eq!(c.type1_classes.len(), 1);
        assert_eq!(c.type2_classes.len(), 2);
        assert_eq!(w.weights[c.type1_classes[0]], rq(1, 4));
        assert_eq!(w.weights[c.type2_classes[0]], rq(3, 8));
        let rep = weighted_spectrum(&es, &w).unwrap();
        assert!(rep.exact);
        let got: Vec<(BigRational, u64)> = rep
            .entries
            .iter()
            .map(|e| (e.value.as_exact().unwrap().clone(), e.multiplicity))
            .collect();
        assert_eq!(
            got,
            vec![(rq(14, 1), 1), (rq(3, 2), 18), (rq(-1, 1), 41)]
        );
        let expected = sl2_even_expected_values(2);
        for (v, _) in &got {
            assert!(expected.contains(v));
        }
        let cert =
            crate::bounds::ratio_certificate("sl2even:2", 15, big(60u64), &rep).unwrap();
        assert_eq!(cert.alpha_upper, ratio(sl2_even_alpha(2), 1));
        assert_eq!(cert.rho_upper, rq(1, 1));
        check_sl2_even_type_sums(&es, &c).unwrap();
    }

    #[test]
    fn sl2_even_weights_k4() {
        let emb = sl2k2_in_sp4(4).unwrap();
        assert_eq!(emb.group.degree(), 85);
        let (table, es) = scheme_of(&emb.group);
        let c = sl2_even_census(4, &table).unwrap();
        assert_eq!(c.type1_classes.len(), 6);
        assert_eq!(c.type2_classes.len(), 8);
        assert_eq!(c.type1_size, 272);
        assert_eq!(c.type2_size, 240);
        let w = sl2_even_weights(4, &table).unwrap();
        assert_eq!(w.weights[c.type1_classes[0]], rq(1, 48));
        assert_eq!(w.weights[c.type2_classes[0]], rq(5, 192));
        let rep = weighted_spectrum(&es, &w).unwrap();
        assert!(rep.exact);
        let expected = sl2_even_expected_values(4);
        assert_eq!(expected[1], rq(5, 12));
        for e in &rep.entries {
            assert!(expected.contains(e.value.as_exact().unwrap()));
        }
        assert_eq!(rep.max_exact().unwrap(), &rq(84, 1));
        assert_eq!(rep.min_exact().unwrap(), &rq(-1, 1));
        let cert =
            crate::bounds::ratio_certificate("sl2even:4", 85, big(4080u64), &rep).unwrap();
        assert_eq!(cert.alpha_upper, rq(48, 1));
        assert_eq!(cert.rho_upper, rq(1, 1));
        check_sl2_even_type_sums(&es, &c).unwrap();
    }

    #[test]
    fn psl2_odd_weights_k5() {
        let emb = sl2k2_in_sp4(5).unwrap();
        assert_eq!(emb.group.degree(), 156);
        assert_eq!(emb.group.order(), big(7800u64));
        let (table, es) = scheme_of(&emb.group);
        let c = psl2_odd_census(5, &table).unwrap();
        assert_eq!(c.type1_classes.len(), 5);
        assert_eq!(c.type2_classes.len(), 6);
        assert_eq!(c.type1_size, 650);
        assert_eq!(c.type2_size, 600);
        let w = psl2_odd_weights(5, &table).unwrap();
        assert_eq!(w.weights[c.type1_classes[0]], rq(1, 50));
        assert_eq!(w.weights[c.type2_classes[0]], rq(1, 40));
        let rep = weighted_spectrum(&es, &w).unwrap();
        assert!(rep.exact);
        let expected = psl2_odd_expected_values(5);
        assert_eq!(expected[1], rq(5, 8));
        for e in &rep.entries {
            assert!(expected.contains(e.value.as_exact().unwrap()));
        }
        assert_eq!(rep.max_exact().unwrap(), &rq(155, 1));
        assert_eq!(rep.min_exact().unwrap(), &rq(-1, 1));
        let cert =
            crate::bounds::ratio_certificate("psl2odd:5", 156, big(7800u64), &rep).unwrap();
        assert_eq!(cert.alpha_upper, ratio(psl2_odd_alpha(5), 1));
        assert_eq!(cert.alpha_upper, rq(50, 1));
        assert_eq!(cert.rho_upper, rq(1, 1));
        check_psl2_odd_type_sums(&es, &c).unwrap();
    }

    #[test]
    fn psl2_odd_census_rejects_k3() {
        let emb = sl2k2_in_sp4(3).unwrap();
        let table = ClassTable::compute(&emb.group).unwrap();
        assert!(matches!(
            psl2_odd_weights(3, &table),
            Err(FamiliesError::CensusMismatch(_))
        ));
    }

    #[test]
    fn psl2_pairs_closed_form_q4() {
        let report = psl2_pairs_even(4).unwrap();
        let got = report.entries_exact();
        assert_eq!(
            got,
            vec![
                (rq(24, 1), 1),
                (rq(4, 1), 18),
                (rq(0, 1), 25),
                (rq(-6, 1), 16)
            ]
        );
        assert_eq!(report.witness.len(), 12);
        assert_eq!(report.alpha, big(12u64));
        assert_eq!(report.rho, rq(2, 1));

        // Cross-check against the scheme-computed unweighted spectrum.
        let g = psl2_action(4, Psl2Target::TwoSubsets).unwrap();
        let (_, es) = scheme_of(&g);
        let w = WeightVector::all_derangements(&es.derangement);
        let computed = weighted_spectrum(&es, &w).unwrap();
        let scheme_vals: Vec<(BigRational, u64)> = computed
            .entries
            .iter()
            .map(|e| (e.value.as_exact().unwrap().clone(), e.multiplicity))
            .collect();
        assert_eq!(scheme_vals, got);
    }

    #[test]
    fn psl2_pairs_closed_form_q8() {
        let report = psl2_pairs_even(8).unwrap();
        assert_eq!(report.alpha, big(56u64));
        assert_eq!(report.witness.len(), 56);
        assert_eq!(report.rho, rq(4, 1));
        let g = psl2_action(8, Psl2Target::TwoSubsets).unwrap();
        assert_eq!(g.order(), big(504u64));
        let (_, es) = scheme_of(&g);
        let w = WeightVector::all_derangements(&es.derangement);
        let computed = weighted_spectrum(&es, &w).unwrap();
        let scheme_vals: Vec<(BigRational, u64)> = computed
            .entries
            .iter()
            .map(|e| (e.value.as_exact().unwrap().clone(), e.multiplicity))
            .collect();
        assert_eq!(scheme_vals, report.entries_exact());
    }
}
