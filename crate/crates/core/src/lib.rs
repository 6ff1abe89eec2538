//! Derangement-graph machinery for finite transitive permutation groups.
//!
//! A set of permutations is *intersecting* if any two of its elements agree on
//! some point. The intersection density of a transitive group G on Ω is
//! ρ(G) = α(Γ_G) / |G_ω|, where Γ_G is the Cayley graph of G on its
//! derangements and α is the maximum size of an intersecting set (a coclique
//! of Γ_G). This crate computes and *certifies* upper bounds on α:
//!
//! - [`perm`] — permutations, stabilizer chains, conjugacy classes, block
//!   systems, regular-subgroup search;
//! - [`field`] — finite fields, 2×2/4×4 matrix groups, projective actions,
//!   and the symplectic embedding of SL(2,k²);
//! - [`symchar`] — exact symmetric-group characters via rim-hook recursion;
//! - [`scheme`] — the conjugacy-class association scheme and its eigensystem;
//! - [`bounds`] — clique/ratio/linear-programming certificates;
//! - [`families`] — closed-form weightings for specific group families;
//! - [`coclique`] — exact maximum-coclique search by branch and bound;
//! - [`registry`] — named constructors for the bundled group families.

pub mod bounds;
pub mod coclique;
pub mod families;
pub mod field;
pub mod perm;
pub mod rat;
pub mod registry;
pub mod scheme;
pub mod symchar;
