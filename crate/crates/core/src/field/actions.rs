//! Permutation actions built from matrix groups over small finite fields:
//! (P)SL(2,q) on the projective line and its 2-subsets, SL(2,k^2) inside
//! Sp(4,k) on the 1-spaces of F_k^4, and symmetric/alternating groups on
//! k-subsets.

use super::{prime_power, symplectic_form, FieldError, Fq, Mat2, Mat4};
use crate::perm::{Perm, PermError, PermGroup, Point};
use std::collections::HashMap;

#[derive(Debug)]
pub enum ActionError {
    Field(FieldError),
    Perm(PermError),
}

impl From<FieldError> for ActionError {
    fn from(e: FieldError) -> Self {
        ActionError::Field(e)
    }
}
impl From<PermError> for ActionError {
    fn from(e: PermError) -> Self {
        ActionError::Perm(e)
    }
}

impl std::fmt::Display for ActionError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ActionError::Field(e) => write!(f, "{e}"),
            ActionError::Perm(e) => write!(f, "{e}"),
        }
    }
}
impl std::error::Error for ActionError {}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Psl2Target {
    ProjectiveLine,
    TwoSubsets,
}

/// Projective line indexing: point t in F_q is (1 : t) at index t, and the
/// point at infinity (0 : 1) has index q.
fn moebius_point_image(f: &Fq, m: Mat2, i: usize) -> usize {
    let q = f.q() as usize;
    let (u, v) = if i == q { (0, 1) } else { (1, i as u16) };
    let iu = f.add(f.mul(m.0[0], u), f.mul(m.0[1], v));
    let iv = f.add(f.mul(m.0[2], u), f.mul(m.0[3], v));
    if iu == 0 {
        assert!(iv != 0, "matrix must be invertible");
        q
    } else {
        f.div(iv, iu) as usize
    }
}

fn perm_on_line(f: &Fq, m: Mat2) -> Perm {
    let degree = f.q() as usize + 1;
    let images: Vec<Point> = (0..degree)
        .map(|i| moebius_point_image(f, m, i) as Point)
        .collect();
    Perm::from_images(images).expect("an invertible matrix permutes the line")
}

/// Lift a permutation of n points to the C(n,2) unordered pairs in
/// lexicographic order.
pub fn pairs_lift(p: &Perm) -> Perm {
    let n = p.degree();
    let pairs: Vec<(Point, Point)> = pair_list(n);
    let index: HashMap<(Point, Point), Point> = pairs
        .iter()
        .enumerate()
        .map(|(i, &pr)| (pr, i as Point))
        .collect();
    let images: Vec<Point> = pairs
        .iter()
        .map(|&(a, b)| {
            let (x, y) = (p.apply(a), p.apply(b));
            index[&(x.min(y), x.max(y))]
        })
        .collect();
    Perm::from_images(images).expect("a point bijection permutes the pairs")
}

fn pair_list(n: usize) -> Vec<(Point, Point)> {
    let mut pairs = Vec::with_capacity(n * (n - 1) / 2);
    for a in 0..n {
        for b in a + 1..n {
            pairs.push((a as Point, b as Point));
        }
    }
    pairs
}

/// SL(2,q) transvection generators as matrices: E12(x) and E21(x) for x
/// running over an F_p-basis of F_q. These generate all of SL(2,q).
fn transvection_mats(f: &Fq) -> Vec<Mat2> {
    let mut mats = Vec::new();
    for b in f.fp_basis() {
        mats.push(Mat2([1, b, 0, 1]));
        mats.push(Mat2([1, 0, b, 1]));
    }
    mats
}

/// PSL(2,q) acting on the projective line (degree q+1) or on its 2-subsets
/// (degree q(q+1)/2). The center of SL(2,q) acts trivially on projective
/// points, so the constructed permutation group is PSL(2,q) for every q;
/// its order is asserted against q(q^2-1)/gcd(2,q-1).
pub fn psl2_action(q: u32, target: Psl2Target) -> Result<PermGroup, ActionError> {
    let (p, m) = prime_power(q).ok_or(FieldError::NotPrimePower(q))?;
    if target == Psl2Target::TwoSubsets && q < 3 {
        return Err(FieldError::DegenerateDegree((q as usize + 1) * q as usize / 2).into());
    }
    let f = Fq::new(p, m)?;
    let line_gens: Vec<Perm> = transvection_mats(&f)
        .into_iter()
        .map(|mat| perm_on_line(&f, mat))
        .collect();
    let gens = match target {
        Psl2Target::ProjectiveLine => line_gens,
        Psl2Target::TwoSubsets => line_gens.iter().map(pairs_lift).collect(),
    };
    let degree = match target {
        Psl2Target::ProjectiveLine => q as usize + 1,
        Psl2Target::TwoSubsets => (q as usize + 1) * q as usize / 2,
    };
    let group = PermGroup::new(degree, gens)?;
    let expected = q as u64 * (q as u64 * q as u64 - 1) / if q % 2 == 0 { 1 } else { 2 };
    if group.order() != expected.into() {
        return Err(FieldError::Internal(format!(
            "PSL(2,{q}) image has order {} instead of {expected}",
            group.order()
        ))
        .into());
    }
    Ok(group)
}

/// The q(q-1) upper-triangular matrices [[b^t, b^(-t) y], [0, b^(-t)]]
/// (b a primitive element, t in 0..q-1, y in F_q) as permutations of the
/// 2-subsets of the projective line. For even q this is a subgroup of
/// PSL(2,q) = SL(2,q) that turns out to be intersecting on 2-subsets.
pub fn triangular_pair_perms(q: u32) -> Result<Vec<Perm>, ActionError> {
    let (p, m) = prime_power(q).ok_or(FieldError::NotPrimePower(q))?;
    let f = Fq::new(p, m)?;
    let beta = f.primitive();
    let mut perms = Vec::with_capacity((q * (q - 1)) as usize);
    for t in 0..q - 1 {
        let bt = f.pow(beta, t);
        let bti = f.inv(bt);
        for y in 0..f.q() {
            let mat = Mat2([bt, f.mul(bti, y), 0, bti]);
            perms.push(pairs_lift(&perm_on_line(&f, mat)));
        }
    }
    Ok(perms)
}

/// Least a in F_k making t^2 + at - 1 irreducible; exists for every k.
fn symmetric_modulus(k1: &Fq) -> u16 {
    (0..k1.q())
        .find(|&a| {
            (0..k1.q()).all(|t| {
                k1.add(k1.add(k1.mul(t, t), k1.mul(a, t)), k1.neg(1)) != 0
            })
        })
        .expect("an irreducible t^2 + at - 1 exists over every finite field")
}

/// Canonical representatives of the 1-spaces of F_k^4: first nonzero
/// coordinate scaled to 1, enumerated by leading position then low-to-high
/// remaining coordinates.
fn one_spaces(f: &Fq) -> (Vec<[u16; 4]>, HashMap<[u16; 4], u32>) {
    let k = f.q() as u32;
    let mut reps = Vec::new();
    for lead in 0..4usize {
        let free = 3 - lead;
        for v in 0..k.pow(free as u32) {
            let mut vec = [0u16; 4];
            vec[lead] = 1;
            let mut rest = v;
            for slot in lead + 1..4 {
                vec[slot] = (rest % k) as u16;
                rest /= k;
            }
            reps.push(vec);
        }
    }
    let index = reps
        .iter()
        .enumerate()
        .map(|(i, &v)| (v, i as u32))
        .collect();
    (reps, index)
}

fn normalize4(f: &Fq, mut v: [u16; 4]) -> [u16; 4] {
    let lead = v.iter().position(|&c| c != 0).expect("nonzero vector");
    let scale = f.inv(v[lead]);
    for c in v.iter_mut() {
        *c = f.mul(scale, *c);
    }
    v
}

pub struct Sp4Embedding {
    pub group: PermGroup,
    /// The a with K_2 = K_1[t]/(t^2 + at - 1).
    pub modulus_a: u16,
}

/// SL(2,k^2) embedded in Sp(4,k) acting on the (k^2+1)(k+1) one-dimensional
/// subspaces of F_k^4. Writing K_2 = K_1(alpha) with alpha^2 + a*alpha = 1,
/// each entry x1 + x2*alpha maps to the 2x2 block x1*I + x2*M over K_1,
/// where M is the symmetric companion matrix [[0,1],[1,-a]] of the modulus.
/// Every generator image is checked against the symplectic form. For odd k
/// the center acts trivially on 1-spaces, so the result is PSL(2,k^2).
pub fn sl2k2_in_sp4(k: u32) -> Result<Sp4Embedding, ActionError> {
    let (p, e) = prime_power(k).ok_or(FieldError::NotPrimePower(k))?;
    let k1 = Fq::new(p, e)?;
    let a = symmetric_modulus(&k1);
    let k2 = Fq::quadratic_extension(&k1, a)?;
    let companion = Mat2([0, 1, 1, k1.neg(a)]);
    let embed_entry = |x: u16| -> Mat2 {
        let (x1, x2) = k2.split(x);
        let mut out = [0u16; 4];
        for i in 0..4 {
            let id = if i % 3 == 0 { 1 } else { 0 };
            out[i] = k1.add(k1.mul(x1, id), k1.mul(x2, companion.0[i]));
        }
        Mat2(out)
    };
    let embed = |g: Mat2| -> Mat4 {
        let blocks = [
            embed_entry(g.0[0]),
            embed_entry(g.0[1]),
            embed_entry(g.0[2]),
            embed_entry(g.0[3]),
        ];
        let mut out = [0u16; 16];
        for bi in 0..2 {
            for bj in 0..2 {
                let blk = blocks[bi * 2 + bj];
                for i in 0..2 {
                    for j in 0..2 {
                        out[(bi * 2 + i) * 4 + (bj * 2 + j)] = blk.0[i * 2 + j];
                    }
                }
            }
        }
        Mat4(out)
    };
    let bform = symplectic_form(&k1);
    let (reps, index) = one_spaces(&k1);
    let degree = reps.len();
    assert_eq!(
        degree,
        ((k * k + 1) * (k + 1)) as usize,
        "1-space count of F_k^4"
    );
    let mut gens = Vec::new();
    for g in transvection_mats(&k2) {
        let big = embed(g);
        let check = Mat4::mul(&k1, Mat4::mul(&k1, big.transpose(), bform), big);
        if check != bform {
            return Err(FieldError::EmbeddingCheckFailed.into());
        }
        let images: Vec<Point> = reps
            .iter()
            .map(|&v| index[&normalize4(&k1, big.apply(&k1, v))] as Point)
            .collect();
        gens.push(Perm::from_images(images)?);
    }
    let group = PermGroup::new(degree, gens)?;
    let kk = k as u64;
    let expected = kk * kk * (kk * kk * kk * kk - 1) / if k % 2 == 0 { 1 } else { 2 };
    if group.order() != expected.into() {
        return Err(FieldError::Internal(format!(
            "SL(2,{}) image on 1-spaces has order {} instead of {expected}",
            k * k,
            group.order()
        ))
        .into());
    }
    Ok(Sp4Embedding {
        group,
        modulus_a: a,
    })
}

/// S_n or A_n acting on the k-subsets of {0,..,n-1} in lexicographic order.
pub fn sym_ksubsets(n: usize, k: usize, alternating: bool) -> Result<PermGroup, ActionError> {
    assert!(k >= 1 && k < n, "subset size must be strictly between 0 and n");
    let point_gens: Vec<Perm> = if alternating {
        let three = Perm::from_cycles(n, &[vec![0, 1, 2]]).unwrap();
        let long = if n % 2 == 1 {
            Perm::from_cycles(n, &[(0..n as Point).collect()]).unwrap()
        } else {
            Perm::from_cycles(n, &[(1..n as Point).collect()]).unwrap()
        };
        vec![three, long]
    } else {
        vec![
            Perm::from_cycles(n, &[vec![0, 1]]).unwrap(),
            Perm::from_cycles(n, &[(0..n as Point).collect()]).unwrap(),
        ]
    };
    let subsets = ksubset_list(n, k);
    let index: HashMap<Vec<Point>, Point> = subsets
        .iter()
        .enumerate()
        .map(|(i, s)| (s.clone(), i as Point))
        .collect();
    let gens = point_gens
        .iter()
        .map(|p| {
            let images: Vec<Point> = subsets
                .iter()
                .map(|s| {
                    let mut img: Vec<Point> = s.iter().map(|&x| p.apply(x)).collect();
                    img.sort_unstable();
                    index[&img]
                })
                .collect();
            Perm::from_images(images)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(PermGroup::new(subsets.len(), gens)?)
}

/// S_n or A_n on unordered pairs (degree C(n,2)).
pub fn sym_two_subsets(n: usize, alternating: bool) -> Result<PermGroup, ActionError> {
    assert!(n >= 5, "the 2-subset action is used for n >= 5");
    sym_ksubsets(n, 2, alternating)
}

fn ksubset_list(n: usize, k: usize) -> Vec<Vec<Point>> {
    let mut out = Vec::new();
    let mut cur: Vec<Point> = (0..k as Point).collect();
    loop {
        out.push(cur.clone());
        // Next k-subset in lexicographic order.
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < (n - k + i) as Point {
                cur[i] += 1;
                for j in i + 1..k {
                    cur[j] = cur[j - 1] + 1;
                }
                break;
            }
        }
    }
}
