//! Density certificates: independently re-checkable upper bounds on the
//! maximum coclique of a derangement graph, and hence on the intersection
//! density rho(G) = alpha(Gamma_G) / |G_omega|.
//!
//! Kinds: a clique of pairwise-everywhere-disagreeing elements bounds alpha
//! by |G|/|clique| (clique-coclique); a spectrum with constant row sum d and
//! minimum eigenvalue tau bounds alpha by |V| tau/(tau - d) (ratio and
//! weighted-ratio); orbit counts lift a subgroup's density bound (no-hom);
//! and an exhaustively verified maximum coclique is exact. Weighted-ratio
//! weights can also be optimized by an exact rational simplex over the
//! rational-class blocks of derangement classes.

use crate::perm::{Perm, PermError, PermGroup};
use crate::rat::{big, ratio, rational_from_string, rational_to_string};
use crate::scheme::{
    weighted_spectrum, SchemeEigensystem, SchemeError, SpectrumReport, WeightVector,
};
use num::{BigInt, BigRational, One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum BoundsError {
    #[error("elements {a} and {b} agree at point {point}; not a clique")]
    NotAClique { a: usize, b: usize, point: u16 },
    #[error("spectrum contains non-exact or non-real values; ratio bound refused")]
    NonRealSpectrum,
    #[error("subgroup orbits have unequal sizes")]
    UnequalOrbits,
    #[error("linear program is infeasible")]
    Infeasible,
    #[error("linear program is unbounded")]
    Unbounded,
    #[error("malformed certificate: {0}")]
    Malformed(String),
    #[error("certificate recheck failed: {0}")]
    RecheckFailed(String),
    #[error(transparent)]
    Scheme(#[from] SchemeError),
    #[error(transparent)]
    Perm(#[from] PermError),
    #[error("internal bounds error: {0}")]
    Internal(String),
}

#[derive(Serialize, Deserialize, Clone, Copy, Debug, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum CertificateKind {
    RegularSubgroup,
    CliqueCoclique,
    Ratio,
    WeightedRatio,
    NoHom,
    Exact,
}

/// Exact-rational spectrum payload carried inside ratio certificates so the
/// bound can be recomputed from the certificate alone.
#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct SpectrumWitness {
    pub entries: Vec<SpectrumWitnessEntry>,
    pub row_sum: String,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct SpectrumWitnessEntry {
    pub value: String,
    pub multiplicity: u64,
}

impl SpectrumWitness {
    /// Requires every eigenvalue to be exact; certificates never carry
    /// floating-point values.
    pub fn from_report(report: &SpectrumReport) -> Result<Self, BoundsError> {
        let entries = report
            .entries
            .iter()
            .map(|e| {
                e.value
                    .as_exact()
                    .map(|v| SpectrumWitnessEntry {
                        value: rational_to_string(v),
                        multiplicity: e.multiplicity,
                    })
                    .ok_or(BoundsError::NonRealSpectrum)
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(SpectrumWitness {
            entries,
            row_sum: rational_to_string(&report.row_sum),
        })
    }

    pub fn values(&self) -> Result<Vec<(BigRational, u64)>, BoundsError> {
        self.entries
            .iter()
            .map(|e| {
                rational_from_string(&e.value)
                    .map(|v| (v, e.multiplicity))
                    .ok_or_else(|| BoundsError::Malformed(format!("bad rational {:?}", e.value)))
            })
            .collect()
    }

    pub fn row_sum_value(&self) -> Result<BigRational, BoundsError> {
        rational_from_string(&self.row_sum)
            .ok_or_else(|| BoundsError::Malformed(format!("bad rational {:?}", self.row_sum)))
    }
}

#[derive(Serialize, Deserialize, Clone, Debug)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum Witness {
    /// Pairwise everywhere-disagreeing elements, stored as image tables.
    Clique { elements: Vec<Vec<u16>> },
    /// Per-class weights and the induced exact spectrum.
    Spectrum {
        weights: Vec<String>,
        spectrum: SpectrumWitness,
    },
    /// A subgroup's density bound lifted through its orbit count.
    NoHom { rho_sub: String, orbits: usize },
    /// A verified maximum intersecting set, stored as image tables.
    Coclique { elements: Vec<Vec<u16>> },
}

/// A re-checkable upper bound on alpha(Gamma_G) and rho(G) for a transitive
/// group, serialized with exact rational strings.
#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct DensityCertificate {
    pub kind: CertificateKind,
    pub group: String,
    pub degree: usize,
    #[serde(with = "crate::rat::serde_bigint")]
    pub group_order: BigInt,
    #[serde(with = "crate::rat::serde_rational")]
    pub alpha_upper: BigRational,
    #[serde(with = "crate::rat::serde_rational")]
    pub rho_upper: BigRational,
    pub witness: Witness,
}

impl DensityCertificate {
    fn build(
        kind: CertificateKind,
        group: &str,
        degree: usize,
        group_order: BigInt,
        alpha_upper: BigRational,
        witness: Witness,
    ) -> Result<Self, BoundsError> {
        // rho = alpha / |G_omega| with |G_omega| = |G| / degree.
        let rho_upper = &alpha_upper * ratio(big(degree as u64), group_order.clone());
        if rho_upper < BigRational::one() {
            return Err(BoundsError::Internal(format!(
                "claimed rho bound {} < 1; a point stabilizer is always intersecting",
                rational_to_string(&rho_upper)
            )));
        }
        Ok(DensityCertificate {
            kind,
            group: group.to_string(),
            degree,
            group_order,
            alpha_upper,
            rho_upper,
            witness,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serialization cannot fail")
    }

    pub fn from_json(s: &str) -> Result<Self, BoundsError> {
        serde_json::from_str(s).map_err(|e| BoundsError::Malformed(e.to_string()))
    }
}

/// First point where two permutations agree, if any. Adjacent vertices of
/// the derangement graph disagree everywhere.
fn agreement_point(x: &Perm, y: &Perm) -> Option<u16> {
    (0..x.degree() as u16).find(|&p| x.apply(p) == y.apply(p))
}

fn check_clique(elements: &[Perm]) -> Result<(), BoundsError> {
    for a in 0..elements.len() {
        for b in a + 1..elements.len() {
            if let Some(point) = agreement_point(&elements[a], &elements[b]) {
                return Err(BoundsError::NotAClique { a, b, point });
            }
        }
    }
    Ok(())
}

fn check_membership(group: &PermGroup, elements: &[Perm]) -> Result<(), BoundsError> {
    for (i, e) in elements.iter().enumerate() {
        if e.degree() != group.degree() {
            return Err(BoundsError::Malformed(format!(
                "witness element {i} has degree {} instead of {}",
                e.degree(),
                group.degree()
            )));
        }
        if !group.contains(e) {
            return Err(BoundsError::RecheckFailed(format!(
                "witness element {i} is not a group member"
            )));
        }
    }
    Ok(())
}

fn images(elements: &[Perm]) -> Vec<Vec<u16>> {
    elements.iter().map(|p| p.images().to_vec()).collect()
}

fn perms_from_images(tables: &[Vec<u16>]) -> Result<Vec<Perm>, BoundsError> {
    tables
        .iter()
        .map(|t| {
            Perm::from_images(t.clone()).map_err(|e| BoundsError::Malformed(e.to_string()))
        })
        .collect()
}

/// Clique-coclique bound: omega(X) alpha(X) <= |V(X)| on a vertex-transitive
/// graph, so a clique of c pairwise-disagreeing elements gives
/// alpha <= |G| / c.
pub fn clique_coclique(
    group: &PermGroup,
    label: &str,
    clique: &[Perm],
) -> Result<DensityCertificate, BoundsError> {
    if clique.is_empty() {
        return Err(BoundsError::Malformed("empty clique".into()));
    }
    check_membership(group, clique)?;
    check_clique(clique)?;
    let order = group.order();
    let alpha = ratio(order.clone(), big(clique.len() as u64));
    DensityCertificate::build(
        CertificateKind::CliqueCoclique,
        label,
        group.degree(),
        order,
        alpha,
        Witness::Clique {
            elements: images(clique),
        },
    )
}

/// A regular subgroup is a clique of size |Omega|, so alpha <= |G_omega| and
/// rho <= 1; combined with the stabilizer coset this pins rho = 1.
pub fn regular_subgroup_certificate(
    group: &PermGroup,
    label: &str,
    subgroup: &[Perm],
) -> Result<DensityCertificate, BoundsError> {
    if subgroup.len() != group.degree() {
        return Err(BoundsError::Malformed(format!(
            "regular subgroup must have {} elements, got {}",
            group.degree(),
            subgroup.len()
        )));
    }
    check_membership(group, subgroup)?;
    check_clique(subgroup)?;
    // Product closure (finite set closed under multiplication is a group).
    let index: std::collections::HashMap<&[u16], usize> = subgroup
        .iter()
        .enumerate()
        .map(|(i, p)| (p.images(), i))
        .collect();
    if index.len() != subgroup.len() {
        return Err(BoundsError::Malformed("repeated subgroup element".into()));
    }
    for a in subgroup {
        for b in subgroup {
            if !index.contains_key(a.then(b).images()) {
                return Err(BoundsError::RecheckFailed(
                    "witness set is not closed under products".into(),
                ));
            }
        }
    }
    let order = group.order();
    let alpha = ratio(order.clone(), big(subgroup.len() as u64));
    DensityCertificate::build(
        CertificateKind::RegularSubgroup,
        label,
        group.degree(),
        order,
        alpha,
        Witness::Clique {
            elements: images(subgroup),
        },
    )
}

/// alpha <= |V| tau / (tau - d) for a weighted adjacency matrix with
/// constant row sum d and least eigenvalue tau < 0 <= d.
fn ratio_alpha(
    vertices: &BigInt,
    d: &BigRational,
    tau: &BigRational,
) -> Result<BigRational, BoundsError> {
    if !tau.is_negative() || tau >= d {
        return Err(BoundsError::Internal(
            "ratio bound needs a negative least eigenvalue below the row sum".into(),
        ));
    }
    Ok(ratio(vertices.clone(), 1) * -tau.clone() / (d - tau))
}

fn spectrum_bound(
    witness: &SpectrumWitness,
    vertices: &BigInt,
) -> Result<BigRational, BoundsError> {
    let values = witness.values()?;
    if values.is_empty() {
        return Err(BoundsError::Malformed("empty spectrum".into()));
    }
    let total: BigInt = values.iter().map(|(_, m)| big(*m)).sum();
    if &total != vertices {
        return Err(BoundsError::RecheckFailed(format!(
            "spectrum multiplicities sum to {total}, vertex count is {vertices}"
        )));
    }
    let tau = values.iter().map(|(v, _)| v).min().unwrap().clone();
    let d = witness.row_sum_value()?;
    ratio_alpha(vertices, &d, &tau)
}

/// Ratio-bound certificate from an exact spectrum of any weighted
/// derangement adjacency matrix of the group.
pub fn ratio_certificate(
    label: &str,
    degree: usize,
    group_order: BigInt,
    spectrum: &SpectrumReport,
) -> Result<DensityCertificate, BoundsError> {
    let witness = SpectrumWitness::from_report(spectrum)?;
    let alpha = spectrum_bound(&witness, &group_order)?;
    DensityCertificate::build(
        CertificateKind::Ratio,
        label,
        degree,
        group_order,
        alpha,
        Witness::Spectrum {
            weights: Vec::new(),
            spectrum: witness,
        },
    )
}

/// Weighted ratio certificate: computes the exact spectrum of the weighted
/// adjacency matrix for the given class weights and stores both in the
/// witness.
pub fn weighted_ratio_certificate(
    es: &SchemeEigensystem,
    label: &str,
    degree: usize,
    w: &WeightVector,
) -> Result<DensityCertificate, BoundsError> {
    let report = weighted_spectrum(es, w)?;
    let witness = SpectrumWitness::from_report(&report)?;
    let order = big(es.group_order);
    let alpha = spectrum_bound(&witness, &order)?;
    DensityCertificate::build(
        CertificateKind::WeightedRatio,
        label,
        degree,
        order,
        alpha,
        Witness::Spectrum {
            weights: w.weights.iter().map(rational_to_string).collect(),
            spectrum: witness,
        },
    )
}

/// No-homomorphism lift: if K <= H has k orbits, all of equal size, then
/// rho(H) <= rho(K) * k.
pub fn no_hom_bound(
    rho_sub: &BigRational,
    orbit_sizes: &[usize],
) -> Result<BigRational, BoundsError> {
    if orbit_sizes.is_empty() || orbit_sizes.iter().any(|&s| s != orbit_sizes[0]) {
        return Err(BoundsError::UnequalOrbits);
    }
    Ok(rho_sub * ratio(big(orbit_sizes.len() as u64), 1))
}

/// Exact certificate: a verified maximum intersecting set. The witness
/// proves the lower bound; the `exact` kind records that branch-and-bound
/// completed, making alpha_upper = |witness|.
pub fn exact_certificate(
    group: &PermGroup,
    label: &str,
    coclique: &[Perm],
) -> Result<DensityCertificate, BoundsError> {
    if coclique.is_empty() {
        return Err(BoundsError::Malformed("empty coclique".into()));
    }
    check_membership(group, coclique)?;
    for a in 0..coclique.len() {
        for b in a + 1..coclique.len() {
            if agreement_point(&coclique[a], &coclique[b]).is_none() {
                return Err(BoundsError::RecheckFailed(format!(
                    "witness elements {a} and {b} disagree everywhere; not intersecting"
                )));
            }
        }
    }
    let order = group.order();
    let alpha = ratio(big(coclique.len() as u64), 1);
    DensityCertificate::build(
        CertificateKind::Exact,
        label,
        group.degree(),
        order,
        alpha,
        Witness::Coclique {
            elements: images(coclique),
        },
    )
}

/// Recheck a certificate. Ratio kinds are verified from the witness alone;
/// clique, coclique, and regular-subgroup kinds need the group to test
/// membership and pairwise structure.
pub fn recheck(
    cert: &DensityCertificate,
    group: Option<&PermGroup>,
) -> Result<(), BoundsError> {
    let expect_rho =
        &cert.alpha_upper * ratio(big(cert.degree as u64), cert.group_order.clone());
    if expect_rho != cert.rho_upper {
        return Err(BoundsError::RecheckFailed(format!(
            "rho_upper {} does not match alpha_upper * degree / |G| = {}",
            rational_to_string(&cert.rho_upper),
            rational_to_string(&expect_rho)
        )));
    }
    if cert.rho_upper < BigRational::one() {
        return Err(BoundsError::RecheckFailed("rho_upper below 1".into()));
    }
    let need_group = || {
        group.ok_or_else(|| {
            BoundsError::RecheckFailed("this certificate kind needs the group to recheck".into())
        })
    };
    match (&cert.kind, &cert.witness) {
        (CertificateKind::CliqueCoclique, Witness::Clique { elements })
        | (CertificateKind::RegularSubgroup, Witness::Clique { elements }) => {
            let g = need_group()?;
            if g.degree() != cert.degree || g.order() != cert.group_order {
                return Err(BoundsError::RecheckFailed(
                    "group does not match certificate header".into(),
                ));
            }
            let perms = perms_from_images(elements)?;
            let rebuilt = match cert.kind {
                CertificateKind::RegularSubgroup => {
                    regular_subgroup_certificate(g, &cert.group, &perms)?
                }
                _ => clique_coclique(g, &cert.group, &perms)?,
            };
            if rebuilt.alpha_upper != cert.alpha_upper {
                return Err(BoundsError::RecheckFailed(format!(
                    "alpha_upper {} does not match |G|/|clique| = {}",
                    rational_to_string(&cert.alpha_upper),
                    rational_to_string(&rebuilt.alpha_upper)
                )));
            }
            Ok(())
        }
        (CertificateKind::Ratio, Witness::Spectrum { spectrum, .. })
        | (CertificateKind::WeightedRatio, Witness::Spectrum { spectrum, .. }) => {
            let alpha = spectrum_bound(spectrum, &cert.group_order)?;
            if alpha != cert.alpha_upper {
                return Err(BoundsError::RecheckFailed(format!(
                    "alpha_upper {} does not match the ratio bound {}",
                    rational_to_string(&cert.alpha_upper),
                    rational_to_string(&alpha)
                )));
            }
            Ok(())
        }
        (CertificateKind::NoHom, Witness::NoHom { rho_sub, orbits }) => {
            let sub = rational_from_string(rho_sub)
                .ok_or_else(|| BoundsError::Malformed(format!("bad rational {rho_sub:?}")))?;
            let rho = no_hom_bound(&sub, &vec![1; *orbits])?;
            if rho != cert.rho_upper {
                return Err(BoundsError::RecheckFailed(
                    "rho_upper does not match rho_sub * orbit count".into(),
                ));
            }
            Ok(())
        }
        (CertificateKind::Exact, Witness::Coclique { elements }) => {
            let g = need_group()?;
            let perms = perms_from_images(elements)?;
            let rebuilt = exact_certificate(g, &cert.group, &perms)?;
            if rebuilt.alpha_upper != cert.alpha_upper {
                return Err(BoundsError::RecheckFailed(
                    "alpha_upper does not match the witness size".into(),
                ));
            }
            Ok(())
        }
        _ => Err(BoundsError::Malformed(
            "certificate kind does not match its witness payload".into(),
        )),
    }
}

/// Outcome of the weight LP.
pub struct LpSolution {
    pub weights: WeightVector,
    /// Optimal least eigenvalue under row sum 1 (always negative).
    pub tau: BigRational,
    pub certificate: DensityCertificate,
}

/// Optimize derangement-class weights for the weighted ratio bound.
///
/// Variables are one weight per rational-class block of derangement classes
/// (optimal by Galois symmetry: averaging any feasible solution over the
/// power-map symmetry preserves feasibility and the objective), constrained
/// by omega >= 0 and row sum sum_B w_B W_B = 1; the objective maximizes the
/// least nontrivial eigenvalue tau, which minimizes the ratio bound
/// |G| tau/(tau - 1).
pub fn optimize_weights(
    es: &SchemeEigensystem,
    label: &str,
    degree: usize,
) -> Result<LpSolution, BoundsError> {
    let der_blocks: Vec<usize> = (0..es.blocks.len())
        .filter(|&b| es.derangement[es.blocks[b][0]])
        .collect();
    let m = der_blocks.len();
    if m == 0 {
        return Err(BoundsError::Internal(
            "no derangement classes; the derangement graph is empty".into(),
        ));
    }
    let rows: Vec<usize> = (0..es.rows.len()).filter(|&r| r != es.trivial_row).collect();
    let p = rows.len();
    // Variables x = [w_0..w_{m-1}, t, s_0..s_{p-1}], minimizing t with
    //   sum_B W_B w_B = 1
    //   sum_B S_B(r) w_B + t - s_r = 0          for each nontrivial row r
    // where t = -tau >= 0 and s_r >= 0 are slacks.
    let n = m + 1 + p;
    let mut a = vec![vec![BigRational::zero(); n]; p + 1];
    let mut b = vec![BigRational::zero(); p + 1];
    for (col, &blk) in der_blocks.iter().enumerate() {
        a[0][col] = ratio(big(es.block_element_count(blk)), 1);
    }
    b[0] = BigRational::one();
    for (ri, &r) in rows.iter().enumerate() {
        for (col, &blk) in der_blocks.iter().enumerate() {
            a[ri + 1][col] = es.exact_block_sum(r, blk);
        }
        a[ri + 1][m] = BigRational::one();
        a[ri + 1][m + 1 + ri] = -BigRational::one();
    }
    let mut c = vec![BigRational::zero(); n];
    c[m] = BigRational::one();
    let (objective, solution) = simplex_min(&a, &b, &c)?;
    let t = objective;
    if !t.is_positive() {
        return Err(BoundsError::Internal(
            "optimal t must be positive: the trace of the weighted matrix is zero".into(),
        ));
    }
    let tau = -t.clone();
    let mut weights = WeightVector::zero(es.r);
    for (col, &blk) in der_blocks.iter().enumerate() {
        for &class in &es.blocks[blk] {
            weights.weights[class] = solution[col].clone();
        }
    }
    let certificate = weighted_ratio_certificate(es, label, degree, &weights)?;
    // alpha = |G| t/(1+t); the certificate recomputed it from the spectrum.
    let direct = ratio(big(es.group_order), 1) * &t / (&t + BigRational::one());
    if certificate.alpha_upper != direct {
        return Err(BoundsError::Internal(
            "LP bound disagrees with the spectrum recomputation".into(),
        ));
    }
    Ok(LpSolution {
        weights,
        tau,
        certificate,
    })
}

/// Exact two-phase primal simplex with Bland's rule for min c.x subject to
/// A x = b, x >= 0. Returns the optimal objective and one optimal solution.
pub fn simplex_min(
    a: &[Vec<BigRational>],
    b: &[BigRational],
    c: &[BigRational],
) -> Result<(BigRational, Vec<BigRational>), BoundsError> {
    let m = a.len();
    let n = if m == 0 { 0 } else { a[0].len() };
    assert_eq!(b.len(), m);
    assert_eq!(c.len(), n);
    // Tableau with artificial variables: columns 0..n original, n..n+m
    // artificial, last column the right-hand side.
    let width = n + m + 1;
    let mut t = vec![vec![BigRational::zero(); width]; m];
    for (i, row) in a.iter().enumerate() {
        let flip = b[i].is_negative();
        for (j, v) in row.iter().enumerate() {
            t[i][j] = if flip { -v.clone() } else { v.clone() };
        }
        t[i][n + i] = BigRational::one();
        t[i][width - 1] = if flip { -b[i].clone() } else { b[i].clone() };
    }
    let mut basis: Vec<usize> = (n..n + m).collect();

    let phase1: Vec<BigRational> = (0..n + m)
        .map(|j| {
            if j < n {
                BigRational::zero()
            } else {
                BigRational::one()
            }
        })
        .collect();
    run_simplex(&mut t, &mut basis, &phase1, n + m)?;
    let infeas: BigRational = basis
        .iter()
        .zip(t.iter())
        .filter(|(&bv, _)| bv >= n)
        .map(|(_, row)| row[width - 1].clone())
        .sum();
    if !infeas.is_zero() {
        return Err(BoundsError::Infeasible);
    }
    // Drive any degenerate artificial out of the basis, or drop its row.
    let mut drop_rows = Vec::new();
    for i in 0..m {
        if basis[i] < n {
            continue;
        }
        match (0..n).find(|&j| !t[i][j].is_zero()) {
            Some(j) => pivot(&mut t, &mut basis, i, j),
            None => drop_rows.push(i),
        }
    }
    for &i in drop_rows.iter().rev() {
        t.remove(i);
        basis.remove(i);
    }

    let mut phase2: Vec<BigRational> = c.to_vec();
    phase2.extend(std::iter::repeat(BigRational::zero()).take(m));
    run_simplex(&mut t, &mut basis, &phase2, n)?;

    let mut x = vec![BigRational::zero(); n];
    for (i, &bv) in basis.iter().enumerate() {
        if bv < n {
            x[bv] = t[i][width - 1].clone();
        }
    }
    let objective = c.iter().zip(&x).map(|(ci, xi)| ci * xi).sum();
    Ok((objective, x))
}

/// Bland-rule iterations: entering variable is the lowest-index column with
/// negative reduced cost among the first `active` columns; leaving row is
/// the minimum-ratio row, ties broken by lowest basis index.
fn run_simplex(
    t: &mut Vec<Vec<BigRational>>,
    basis: &mut Vec<usize>,
    cost: &[BigRational],
    active: usize,
) -> Result<(), BoundsError> {
    let m = t.len();
    if m == 0 {
        return Ok(());
    }
    let width = t[0].len();
    loop {
        let mut entering = None;
        for j in 0..active {
            if basis.contains(&j) {
                continue;
            }
            let reduced = &cost[j]
                - basis
                    .iter()
                    .zip(t.iter())
                    .map(|(&bv, row)| &cost[bv] * &row[j])
                    .sum::<BigRational>();
            if reduced.is_negative() {
                entering = Some(j);
                break;
            }
        }
        let Some(e) = entering else {
            return Ok(());
        };
        let mut leave: Option<(usize, BigRational)> = None;
        for i in 0..m {
            if t[i][e].is_positive() {
                let r = &t[i][width - 1] / &t[i][e];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => r < *lr || (r == *lr && basis[i] < basis[*li]),
                };
                if better {
                    leave = Some((i, r));
                }
            }
        }
        let Some((l, _)) = leave else {
            return Err(BoundsError::Unbounded);
        };
        pivot(t, basis, l, e);
    }
}

fn pivot(t: &mut [Vec<BigRational>], basis: &mut [usize], l: usize, e: usize) {
    let width = t[0].len();
    let piv = t[l][e].clone();
    for v in t[l].iter_mut() {
        *v /= &piv;
    }
    for i in 0..t.len() {
        if i == l || t[i][e].is_zero() {
            continue;
        }
        let factor = t[i][e].clone();
        for j in 0..width {
            let delta = &factor * &t[l][j];
            t[i][j] -= delta;
        }
    }
    basis[l] = e;
}
