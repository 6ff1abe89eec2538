//! The conjugacy-class association scheme of a finite group: exact structure
//! constants, a character-free simultaneous eigensystem of the class
//! matrices, and spectra of weighted derangement adjacency matrices.
//!
//! The eigensystem never consults a stored character table. The class
//! matrices are symmetrized by the class-size diagonal, split into their
//! Hermitian and skew parts, and simultaneously diagonalized; each of the r
//! common eigenvectors carries one irreducible character's eigenvalue row
//! omega_i = |C_i| chi(g_i) / chi(1). Rational-class blocks (classes fused
//! by power maps) have integer character sums, which lets every block-level
//! quantity be snapped to an exact rational and verified.

use crate::perm::{ClassTable, Elements, PermError};
use crate::rat::{big, ratio};
use num::complex::Complex64;
use num::{BigInt, BigRational, One, Signed, Zero};
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};
use thiserror::Error;

/// Largest class count the dense eigensystem supports.
pub const MAX_CLASSES: usize = 200;

/// Relative tolerance for floating-point identities of scheme eigenvalues.
const EIG_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Error)]
pub enum SchemeError {
    #[error(transparent)]
    Perm(#[from] PermError),
    #[error("class matrices {i} and {j} do not commute")]
    CommutationFailure { i: usize, j: usize },
    #[error("eigensystem snap failure: {0}")]
    SnapFailure(String),
    #[error("nonzero weight on non-derangement class {class}")]
    WeightOnNonDerangement { class: usize },
    #[error("scheme has {0} conjugacy classes; supported up to {MAX_CLASSES}")]
    TooManyClasses(usize),
    #[error("internal scheme error: {0}")]
    Internal(String),
}

/// The tensor a[i][j][k] with C-hat_i C-hat_j = sum_k a_{ijk} C-hat_k.
pub struct StructureConstants {
    r: usize,
    tensor: Vec<u64>,
    pub sizes: Vec<u64>,
    pub derangement: Vec<bool>,
    pub group_order: u64,
}

impl StructureConstants {
    pub fn r(&self) -> usize {
        self.r
    }

    pub fn a(&self, i: usize, j: usize, k: usize) -> u64 {
        self.tensor[(i * self.r + j) * self.r + k]
    }
}

/// a_{ijk} = |{x in C_i : x^{-1} z in C_j}| for a fixed z in C_k. The count
/// is independent of z; this recomputes it from up to three members of each
/// class and fails on any mismatch. Also asserted: the identity-class slice
/// is the identity matrix, the row-mass identity
/// sum_k a_{ijk}|C_k| = |C_i||C_j|, and commutativity a_{ijk} = a_{jik}.
pub fn structure_constants(
    els: &Elements,
    table: &ClassTable,
) -> Result<StructureConstants, SchemeError> {
    let r = table.num_classes();
    if r > MAX_CLASSES {
        return Err(SchemeError::TooManyClasses(r));
    }
    let n = els.len();
    // Up to three members of each class, for the z-independence check.
    let mut members: Vec<Vec<u32>> = vec![Vec::new(); r];
    for x in 0..n as u32 {
        let c = table.class_of[x as usize] as usize;
        if members[c].len() < 3 {
            members[c].push(x);
        }
    }
    let column = |k: usize, z: u32| -> Vec<u64> {
        let mut col = vec![0u64; r * r];
        for x in 0..n as u32 {
            let i = table.class_of[x as usize] as usize;
            let y = els.product(els.inverse[x as usize], z);
            let j = table.class_of[y as usize] as usize;
            col[i * r + j] += 1;
        }
        let _ = k;
        col
    };
    let mut tensor = vec![0u64; r * r * r];
    for k in 0..r {
        let col = column(k, members[k][0]);
        for alt in &members[k][1..] {
            if column(k, *alt) != col {
                return Err(SchemeError::Internal(format!(
                    "structure constants depend on the class-{k} representative"
                )));
            }
        }
        for i in 0..r {
            for j in 0..r {
                tensor[(i * r + j) * r + k] = col[i * r + j];
            }
        }
    }
    let sc = StructureConstants {
        r,
        tensor,
        sizes: table.sizes.clone(),
        derangement: table.derangement.clone(),
        group_order: n as u64,
    };
    for j in 0..r {
        for k in 0..r {
            let expect = u64::from(j == k);
            if sc.a(0, j, k) != expect {
                return Err(SchemeError::Internal(
                    "identity-class slice is not the identity matrix".into(),
                ));
            }
        }
    }
    for i in 0..r {
        for j in 0..r {
            let mass: u64 = (0..r).map(|k| sc.a(i, j, k) * sc.sizes[k]).sum();
            if mass != sc.sizes[i] * sc.sizes[j] {
                return Err(SchemeError::Internal(format!(
                    "row mass violated at ({i},{j})"
                )));
            }
            if sc.a(i, j, 0) != sc.a(j, i, 0) || (0..r).any(|k| sc.a(i, j, k) != sc.a(j, i, k)) {
                return Err(SchemeError::CommutationFailure { i, j });
            }
        }
    }
    Ok(sc)
}

/// One common eigenvector's worth of data: the eigenvalue of each class
/// matrix on this irreducible character's isotypic block.
pub struct EigRow {
    /// omega_i = |C_i| chi(g_i) / chi(1), as computed floating-point values.
    pub eigrow: Vec<Complex64>,
    /// chi(1).
    pub degree: u64,
    /// chi(1)^2, the character's share of the regular module.
    pub multiplicity: u64,
    /// Exact block character sums: for each rational-class block B, the
    /// integer sum_{i in B} chi(g_i).
    pub block_char_sums: Vec<BigInt>,
}

/// Simultaneous eigensystem of all class matrices.
pub struct SchemeEigensystem {
    pub r: usize,
    pub group_order: u64,
    pub sizes: Vec<u64>,
    pub derangement: Vec<bool>,
    /// Rational-class blocks: classes fused by power maps coprime to the
    /// element order. Within a block all class sizes are equal.
    pub blocks: Vec<Vec<usize>>,
    pub rows: Vec<EigRow>,
    /// Index of the trivial character's row (eigrow_i = |C_i|).
    pub trivial_row: usize,
}

impl SchemeEigensystem {
    /// Common size of the classes in block b.
    pub fn block_class_size(&self, b: usize) -> u64 {
        self.sizes[self.blocks[b][0]]
    }

    /// Number of group elements covered by block b.
    pub fn block_element_count(&self, b: usize) -> u64 {
        self.block_class_size(b) * self.blocks[b].len() as u64
    }

    /// Exact eigenvalue sum over block b for the given row:
    /// S_B = sum_{i in B} omega_i = |C| * (block character sum) / chi(1).
    pub fn exact_block_sum(&self, row: usize, b: usize) -> BigRational {
        ratio(
            big(self.block_class_size(b)) * &self.rows[row].block_char_sums[b],
            big(self.rows[row].degree),
        )
    }

    /// Exact sum of chi(g_i) over a block-closed set of classes.
    /// Errors if the set splits any rational block.
    pub fn exact_char_sum(&self, row: usize, classes: &[usize]) -> Result<BigInt, SchemeError> {
        let mut member = vec![false; self.r];
        for &c in classes {
            member[c] = true;
        }
        let mut total = BigInt::zero();
        for (b, block) in self.blocks.iter().enumerate() {
            let inside = block.iter().filter(|&&c| member[c]).count();
            if inside == 0 {
                continue;
            }
            if inside != block.len() {
                return Err(SchemeError::Internal(format!(
                    "class set splits rational block {b}"
                )));
            }
            total += &self.rows[row].block_char_sums[b];
        }
        Ok(total)
    }
}

/// Weights on conjugacy classes, nonzero only on derangement classes. The
/// weighted adjacency matrix of the derangement graph assigns w_i to every
/// edge coming from class i.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightVector {
    pub weights: Vec<BigRational>,
}

impl WeightVector {
    pub fn zero(r: usize) -> Self {
        WeightVector {
            weights: vec![BigRational::zero(); r],
        }
    }

    /// Weight 1 on every derangement class: the unweighted derangement graph.
    pub fn all_derangements(derangement: &[bool]) -> Self {
        WeightVector {
            weights: derangement
                .iter()
                .map(|&d| {
                    if d {
                        BigRational::one()
                    } else {
                        BigRational::zero()
                    }
                })
                .collect(),
        }
    }
}

/// A spectrum value: exact rational when snapping succeeded, otherwise the
/// floating-point value (real or complex) verbatim.
#[derive(Clone, Debug, PartialEq)]
pub enum SpectrumValue {
    Exact(BigRational),
    Approx(f64),
    Complex { re: f64, im: f64 },
}

impl SpectrumValue {
    pub fn as_exact(&self) -> Option<&BigRational> {
        match self {
            SpectrumValue::Exact(v) => Some(v),
            _ => None,
        }
    }

    fn sort_key(&self) -> (f64, f64) {
        match self {
            SpectrumValue::Exact(v) => (crate::rat::rational_to_f64(v), 0.0),
            SpectrumValue::Approx(v) => (*v, 0.0),
            SpectrumValue::Complex { re, im } => (*re, *im),
        }
    }

    pub fn to_display_string(&self) -> String {
        match self {
            SpectrumValue::Exact(v) => crate::rat::rational_to_string(v),
            SpectrumValue::Approx(v) => format!("{v}"),
            SpectrumValue::Complex { re, im } => format!("{re}{im:+}i"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SpectrumEntry {
    pub value: SpectrumValue,
    pub multiplicity: u64,
}

/// Eigenvalues of a weighted derangement adjacency matrix, aggregated by
/// value, with multiplicities chi(1)^2 summing to |G|. `row_sum` is the
/// constant row sum d = sum_i w_i |D_i|.
#[derive(Clone, Debug)]
pub struct SpectrumReport {
    pub entries: Vec<SpectrumEntry>,
    pub row_sum: BigRational,
    pub exact: bool,
}

impl Serialize for SpectrumReport {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(3))?;
        let entries: Vec<serde_json::Value> = self
            .entries
            .iter()
            .map(|e| {
                serde_json::json!({
                    "value": e.value.to_display_string(),
                    "multiplicity": e.multiplicity,
                })
            })
            .collect();
        map.serialize_entry("entries", &entries)?;
        map.serialize_entry("row_sum", &crate::rat::rational_to_string(&self.row_sum))?;
        map.serialize_entry("exact", &self.exact)?;
        map.end()
    }
}

impl SpectrumReport {
    pub fn max_exact(&self) -> Option<&BigRational> {
        self.entries.first().and_then(|e| e.value.as_exact())
    }

    pub fn min_exact(&self) -> Option<&BigRational> {
        self.entries.last().and_then(|e| e.value.as_exact())
    }
}

/// Simultaneously diagonalize all class matrices and recover each
/// character's eigenvalue row, degree, and exact block character sums.
///
/// `blocks` must be the rational-class blocks of the same class table the
/// structure constants came from (`ClassTable::rational_class_blocks`).
pub fn eigensystem(
    sc: &StructureConstants,
    blocks: Vec<Vec<usize>>,
) -> Result<SchemeEigensystem, SchemeError> {
    let r = sc.r;
    // The class matrix M_i sends basis vector e_j to sum_k a_{ijk} e_k;
    // commutation of all pairs is the precondition for a simultaneous
    // eigenbasis. Entries fit u64 comfortably (r * |G|^2 < 2^63).
    let m_int: Vec<Vec<u64>> = (0..r)
        .map(|i| {
            let mut m = vec![0u64; r * r];
            for k in 0..r {
                for j in 0..r {
                    m[k * r + j] = sc.a(i, j, k);
                }
            }
            m
        })
        .collect();
    for i in 0..r {
        for j in i + 1..r {
            if !u64_matrices_commute(&m_int[i], &m_int[j], r) {
                return Err(SchemeError::CommutationFailure { i, j });
            }
        }
    }
    // Symmetrization: with D = diag(|C_k|), the conjugated matrix
    // Mt_i = D^{1/2} M_i D^{-1/2} has transpose Mt_{i*} (the inverse
    // class), so its Hermitian and skew parts have eigenvalues Re(omega_i)
    // and i*Im(omega_i) on the common eigenvectors.
    let sqrt_sizes: Vec<f64> = sc.sizes.iter().map(|&s| (s as f64).sqrt()).collect();
    let m_tilde: Vec<Vec<f64>> = (0..r)
        .map(|i| {
            let mut m = vec![0.0f64; r * r];
            for k in 0..r {
                for j in 0..r {
                    m[k * r + j] = sc.a(i, j, k) as f64 * sqrt_sizes[k] / sqrt_sizes[j];
                }
            }
            m
        })
        .collect();

    // Iterative splitting: refine the common eigenspaces with the Hermitian
    // part (M + M^T)/2, then the Hermitianized skew part i(M - M^T)/2, of
    // every class matrix. The class algebra is commutative semisimple with
    // r one-dimensional character blocks, and the Re/Im pairs separate all
    // characters, so every subspace ends up one-dimensional.
    let mut subspaces: Vec<Vec<Vec<Complex64>>> = vec![(0..r)
        .map(|k| {
            let mut e = vec![Complex64::new(0.0, 0.0); r];
            e[k] = Complex64::new(1.0, 0.0);
            e
        })
        .collect()];
    for i in 1..r {
        for part in 0..2 {
            if subspaces.iter().all(|s| s.len() == 1) {
                break;
            }
            let mt = &m_tilde[i];
            let herm: Vec<Complex64> = (0..r * r)
                .map(|idx| {
                    let (row, col) = (idx / r, idx % r);
                    let a = mt[row * r + col];
                    let b = mt[col * r + row];
                    if part == 0 {
                        Complex64::new((a + b) / 2.0, 0.0)
                    } else {
                        Complex64::new(0.0, (a - b) / 2.0)
                    }
                })
                .collect();
            subspaces = split_subspaces(subspaces, &herm, r)?;
        }
    }
    if subspaces.len() != r || subspaces.iter().any(|s| s.len() != 1) {
        return Err(SchemeError::SnapFailure(format!(
            "eigenspace splitting stopped at {} spaces for {} classes",
            subspaces.len(),
            r
        )));
    }

    let group_order = sc.group_order as f64;
    let mut rows = Vec::with_capacity(r);
    let mut degree_total: u64 = 0;
    for space in &subspaces {
        let v = &space[0];
        // Rayleigh quotients against the original (unsymmetrized spectrum,
        // same eigenvalues) conjugated matrices.
        let eigrow: Vec<Complex64> = (0..r)
            .map(|i| rayleigh(&m_tilde[i], v, r))
            .collect();
        if (eigrow[0] - Complex64::new(1.0, 0.0)).norm() > EIG_TOLERANCE {
            return Err(SchemeError::SnapFailure(format!(
                "identity-class eigenvalue {} is not 1",
                eigrow[0]
            )));
        }
        // chi(1)^2 = |G| / sum_i |omega_i|^2 / |C_i|.
        let inv_norm: f64 = eigrow
            .iter()
            .zip(&sc.sizes)
            .map(|(w, &s)| w.norm_sqr() / s as f64)
            .sum();
        let mult_f = group_order / inv_norm;
        let multiplicity = mult_f.round() as u64;
        if multiplicity == 0 || (mult_f - multiplicity as f64).abs() > EIG_TOLERANCE * mult_f {
            return Err(SchemeError::SnapFailure(format!(
                "multiplicity {mult_f} does not snap to a positive integer"
            )));
        }
        let degree = integer_sqrt(multiplicity).ok_or_else(|| {
            SchemeError::SnapFailure(format!("multiplicity {multiplicity} is not a square"))
        })?;
        degree_total += multiplicity;
        rows.push(EigRow {
            eigrow,
            degree,
            multiplicity,
            block_char_sums: Vec::new(),
        });
    }
    if degree_total != sc.group_order {
        return Err(SchemeError::SnapFailure(format!(
            "squared degrees sum to {degree_total}, group order is {}",
            sc.group_order
        )));
    }

    // Homomorphism residual: each row must satisfy the class-algebra
    // multiplication omega_i omega_j = sum_k a_{ijk} omega_k.
    for row in &rows {
        for i in 0..r {
            for j in 0..r {
                let lhs = row.eigrow[i] * row.eigrow[j];
                let mut rhs = Complex64::new(0.0, 0.0);
                for k in 0..r {
                    rhs += Complex64::new(sc.a(i, j, k) as f64, 0.0) * row.eigrow[k];
                }
                let scale = 1.0f64.max(lhs.norm()).max(rhs.norm());
                if (lhs - rhs).norm() > EIG_TOLERANCE * scale {
                    return Err(SchemeError::SnapFailure(format!(
                        "eigenvalue row violates the product rule at ({i},{j})"
                    )));
                }
            }
        }
    }

    // Exact block character sums: within a rational block all class sizes
    // are equal and sum chi(g_i) is a rational algebraic integer, hence in
    // Z; snap and verify.
    for block in &blocks {
        let c0 = sc.sizes[block[0]];
        if block.iter().any(|&c| sc.sizes[c] != c0) {
            return Err(SchemeError::Internal(
                "rational block mixes class sizes".into(),
            ));
        }
        if block.iter().any(|&c| sc.derangement[c] != sc.derangement[block[0]]) {
            return Err(SchemeError::Internal(
                "rational block mixes derangement with non-derangement classes".into(),
            ));
        }
    }
    for row in &mut rows {
        for block in &blocks {
            let c = sc.sizes[block[0]] as f64;
            let s: Complex64 = block.iter().map(|&i| row.eigrow[i]).sum();
            let m_f = s.re * row.degree as f64 / c;
            let m = m_f.round();
            let err = (s - Complex64::new(m * c / row.degree as f64, 0.0)).norm();
            if err > EIG_TOLERANCE * 1.0f64.max(s.norm()) {
                return Err(SchemeError::SnapFailure(format!(
                    "block eigenvalue sum {s} does not snap to |C| Z / chi(1)"
                )));
            }
            row.block_char_sums.push(BigInt::from(m as i64));
        }
    }

    // The trivial character: eigrow_i = |C_i| for every i.
    let trivial_row = rows
        .iter()
        .position(|row| {
            row.eigrow.iter().zip(&sc.sizes).all(|(w, &s)| {
                (w - Complex64::new(s as f64, 0.0)).norm() <= EIG_TOLERANCE * s as f64
            })
        })
        .ok_or_else(|| SchemeError::SnapFailure("no trivial eigenvalue row found".into()))?;
    // Its block character sums must be the block lengths.
    for (b, block) in blocks.iter().enumerate() {
        if rows[trivial_row].block_char_sums[b] != BigInt::from(block.len()) {
            return Err(SchemeError::SnapFailure(
                "trivial row block sums are not the block sizes".into(),
            ));
        }
    }

    Ok(SchemeEigensystem {
        r,
        group_order: sc.group_order,
        sizes: sc.sizes.clone(),
        derangement: sc.derangement.clone(),
        blocks,
        rows,
        trivial_row,
    })
}

fn u64_matrices_commute(a: &[u64], b: &[u64], r: usize) -> bool {
    // Entries of the products stay below r * max(a) * max(b) < 2^63 for
    // the supported group sizes.
    for row in 0..r {
        for col in 0..r {
            let mut ab = 0u64;
            let mut ba = 0u64;
            for k in 0..r {
                ab += a[row * r + k] * b[k * r + col];
                ba += b[row * r + k] * a[k * r + col];
            }
            if ab != ba {
                return false;
            }
        }
    }
    true
}

fn rayleigh(m: &[f64], v: &[Complex64], r: usize) -> Complex64 {
    let mut num = Complex64::new(0.0, 0.0);
    let mut den = 0.0f64;
    for k in 0..r {
        let mut mv = Complex64::new(0.0, 0.0);
        for j in 0..r {
            mv += m[k * r + j] * v[j];
        }
        num += v[k].conj() * mv;
        den += v[k].norm_sqr();
    }
    num / den
}

fn integer_sqrt(n: u64) -> Option<u64> {
    let s = (n as f64).sqrt().round() as u64;
    for cand in s.saturating_sub(1)..=s + 1 {
        if cand * cand == n {
            return Some(cand);
        }
    }
    None
}

/// Refine each subspace against one Hermitian matrix: project, diagonalize,
/// and split along eigenvalue groups.
fn split_subspaces(
    subspaces: Vec<Vec<Vec<Complex64>>>,
    herm: &[Complex64],
    r: usize,
) -> Result<Vec<Vec<Vec<Complex64>>>, SchemeError> {
    let mut out = Vec::new();
    for basis in subspaces {
        let d = basis.len();
        if d == 1 {
            out.push(basis);
            continue;
        }
        // Projected matrix B^H A B, d x d Hermitian.
        let mut proj = vec![Complex64::new(0.0, 0.0); d * d];
        for (bi, vb) in basis.iter().enumerate() {
            // A * vb once per column.
            let mut av = vec![Complex64::new(0.0, 0.0); r];
            for k in 0..r {
                let mut acc = Complex64::new(0.0, 0.0);
                for j in 0..r {
                    acc += herm[k * r + j] * vb[j];
                }
                av[k] = acc;
            }
            for (ai, va) in basis.iter().enumerate() {
                let mut acc = Complex64::new(0.0, 0.0);
                for k in 0..r {
                    acc += va[k].conj() * av[k];
                }
                proj[ai * d + bi] = acc;
            }
        }
        let (vals, vecs) = hermitian_jacobi(&mut proj, d)?;
        // Group eigenvalues, then rotate the basis into each group.
        let mut order: Vec<usize> = (0..d).collect();
        order.sort_by(|&x, &y| vals[x].partial_cmp(&vals[y]).unwrap());
        let scale = vals.iter().fold(1.0f64, |m, v| m.max(v.abs()));
        let gap = EIG_TOLERANCE * scale;
        let mut start = 0;
        while start < d {
            let mut end = start + 1;
            while end < d && (vals[order[end]] - vals[order[end - 1]]).abs() <= gap {
                end += 1;
            }
            let mut group_basis = Vec::with_capacity(end - start);
            for &col in &order[start..end] {
                let mut w = vec![Complex64::new(0.0, 0.0); r];
                for (bi, vb) in basis.iter().enumerate() {
                    let coef = vecs[bi * d + col];
                    for k in 0..r {
                        w[k] += coef * vb[k];
                    }
                }
                group_basis.push(w);
            }
            out.push(group_basis);
            start = end;
        }
    }
    Ok(out)
}

/// Cyclic complex Hermitian Jacobi. Returns (eigenvalues, eigenvectors)
/// with eigenvectors as columns of a d x d unitary in row-major order.
fn hermitian_jacobi(a: &mut [Complex64], d: usize) -> Result<(Vec<f64>, Vec<Complex64>), SchemeError> {
    let mut v = vec![Complex64::new(0.0, 0.0); d * d];
    for i in 0..d {
        v[i * d + i] = Complex64::new(1.0, 0.0);
    }
    let scale = a
        .iter()
        .fold(1.0f64, |m, x| m.max(x.norm()));
    let target = 1e-13 * scale;
    for _sweep in 0..500 {
        let mut off = 0.0f64;
        for p in 0..d {
            for q in p + 1..d {
                off += a[p * d + q].norm_sqr();
            }
        }
        if off.sqrt() <= target {
            let vals: Vec<f64> = (0..d).map(|i| a[i * d + i].re).collect();
            return Ok((vals, v));
        }
        for p in 0..d {
            for q in p + 1..d {
                let apq = a[p * d + q];
                let abs = apq.norm();
                if abs <= target / (d as f64) {
                    continue;
                }
                let app = a[p * d + p].re;
                let aqq = a[q * d + q].re;
                // Zeroing the pivot needs t = sigma/c with
                // t^2 - 2 tau t - 1 = 0; take the root of smaller
                // magnitude, -sign(tau)/(|tau| + sqrt(1 + tau^2)).
                let tau = (aqq - app) / (2.0 * abs);
                let t = if tau >= 0.0 {
                    -1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let sigma = t * c;
                // apq = |apq| e^{i beta}; the rotation's off-diagonal
                // carries the conjugate phase.
                let phase = apq / abs;
                let s = phase.conj() * sigma;
                // A <- U^H A U with U[p][p]=c, U[q][p]=s, U[p][q]=-conj(s),
                // U[q][q]=c. Columns first, then rows.
                for k in 0..d {
                    let akp = a[k * d + p];
                    let akq = a[k * d + q];
                    a[k * d + p] = c * akp + s * akq;
                    a[k * d + q] = -s.conj() * akp + c * akq;
                }
                for k in 0..d {
                    let apk = a[p * d + k];
                    let aqk = a[q * d + k];
                    a[p * d + k] = c * apk + s.conj() * aqk;
                    a[q * d + k] = -s * apk + c * aqk;
                }
                a[p * d + q] = Complex64::new(0.0, 0.0);
                a[q * d + p] = Complex64::new(0.0, 0.0);
                a[p * d + p] = Complex64::new(a[p * d + p].re, 0.0);
                a[q * d + q] = Complex64::new(a[q * d + q].re, 0.0);
                for k in 0..d {
                    let vkp = v[k * d + p];
                    let vkq = v[k * d + q];
                    v[k * d + p] = c * vkp + s * vkq;
                    v[k * d + q] = -s.conj() * vkp + c * vkq;
                }
            }
        }
    }
    Err(SchemeError::SnapFailure(
        "Jacobi iteration did not converge".into(),
    ))
}

/// Spectrum of the weighted adjacency matrix sum_i w_i A_{C_i}. Weights
/// must vanish on classes with fixed points. When the weights are constant
/// on every rational block the eigenvalues are computed exactly from the
/// block character sums; otherwise floating-point values are snapped where
/// possible.
pub fn weighted_spectrum(
    es: &SchemeEigensystem,
    w: &WeightVector,
) -> Result<SpectrumReport, SchemeError> {
    if w.weights.len() != es.r {
        return Err(SchemeError::Internal(format!(
            "weight vector has {} entries for {} classes",
            w.weights.len(),
            es.r
        )));
    }
    for (i, wi) in w.weights.iter().enumerate() {
        if !wi.is_zero() && !es.derangement[i] {
            return Err(SchemeError::WeightOnNonDerangement { class: i });
        }
    }
    let row_sum: BigRational = w
        .weights
        .iter()
        .zip(&es.sizes)
        .map(|(wi, &s)| wi * ratio(big(s), BigInt::one()))
        .sum();
    let block_constant = es.blocks.iter().all(|block| {
        block
            .iter()
            .all(|&c| w.weights[c] == w.weights[block[0]])
    });
    if block_constant {
        // Exact path: eigenvalue per row is sum_B w_B S_B.
        let mut agg: std::collections::BTreeMap<BigRational, u64> = Default::default();
        for (ri, row) in es.rows.iter().enumerate() {
            let mut val = BigRational::zero();
            for (b, block) in es.blocks.iter().enumerate() {
                let wb = &w.weights[block[0]];
                if !wb.is_zero() {
                    val += wb * es.exact_block_sum(ri, b);
                }
            }
            *agg.entry(val).or_insert(0) += row.multiplicity;
        }
        let mut entries: Vec<SpectrumEntry> = agg
            .into_iter()
            .rev()
            .map(|(value, multiplicity)| SpectrumEntry {
                value: SpectrumValue::Exact(value),
                multiplicity,
            })
            .collect();
        entries.sort_by(|a, b| b.value.sort_key().partial_cmp(&a.value.sort_key()).unwrap());
        return Ok(SpectrumReport {
            entries,
            row_sum,
            exact: true,
        });
    }
    // Approximate path: complex dot products, clustered, snapped when real.
    let wf: Vec<f64> = w.weights.iter().map(crate::rat::rational_to_f64).collect();
    let vals: Vec<Complex64> = es
        .rows
        .iter()
        .map(|row| {
            row.eigrow
                .iter()
                .zip(&wf)
                .map(|(om, &wi)| om * wi)
                .sum::<Complex64>()
        })
        .collect();
    let scale = vals.iter().fold(1.0f64, |m, v| m.max(v.norm()));
    let tol = EIG_TOLERANCE * scale;
    let mut groups: Vec<(Complex64, u64)> = Vec::new();
    for (ri, val) in vals.iter().enumerate() {
        match groups.iter_mut().find(|(g, _)| (g - val).norm() <= tol) {
            Some((_, mult)) => *mult += es.rows[ri].multiplicity,
            None => groups.push((*val, es.rows[ri].multiplicity)),
        }
    }
    let mut exact = true;
    let mut entries: Vec<SpectrumEntry> = groups
        .into_iter()
        .map(|(val, multiplicity)| {
            let value = if val.im.abs() > tol {
                exact = false;
                SpectrumValue::Complex {
                    re: val.re,
                    im: val.im,
                }
            } else {
                match crate::rat::snap_default(val.re) {
                    Some(q) => SpectrumValue::Exact(q),
                    None => {
                        exact = false;
                        SpectrumValue::Approx(val.re)
                    }
                }
            };
            SpectrumEntry {
                value,
                multiplicity,
            }
        })
        .collect();
    entries.sort_by(|a, b| b.value.sort_key().partial_cmp(&a.value.sort_key()).unwrap());
    Ok(SpectrumReport {
        entries,
        row_sum,
        exact,
    })
}
