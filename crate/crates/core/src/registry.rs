//! Named construction of every group the tool knows by family string.
//!
//! Parameterized families use a `name:parameter` form (`sym2sub:16`,
//! `psl2pairs:7`, `sl2k2:4`); the remaining names are fixed groups. The
//! corpus list enumerates the small instances the cross-module test suites
//! iterate.

use crate::field::actions::{psl2_action, sl2k2_in_sp4, sym_ksubsets, sym_two_subsets,
    ActionError, Psl2Target};
use crate::perm::{coset_action, find_subgroup_of_order, PermError, PermGroup};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum RegistryError {
    #[error("unknown family {0:?}")]
    UnknownFamily(String),
    #[error("bad parameter in {0:?}")]
    BadParameter(String),
    #[error("family {name:?} is not constructible here: {reason}")]
    Unavailable { name: String, reason: String },
    #[error(transparent)]
    Perm(#[from] PermError),
    #[error(transparent)]
    Action(#[from] ActionError),
}

const SUBGROUP_SEARCH_BUDGET: u64 = 10_000_000;

/// The Frobenius group of order 21 in its regular action: built from the
/// degree-7 copy C7:C3 and the cosets of the trivial subgroup.
fn f21_regular() -> Result<PermGroup, RegistryError> {
    let g7 = PermGroup::from_cycle_text("(1 2 3 4 5 6 7)\n(2 3 5)(4 7 6)")?;
    Ok(coset_action(&g7, &[0])?)
}

/// PSL(2,p) on the cosets of a subgroup of the given order.
fn psl2_cosets(p: u32, subgroup_order: usize) -> Result<PermGroup, RegistryError> {
    let g = psl2_action(p, Psl2Target::ProjectiveLine)?;
    let sub = find_subgroup_of_order(&g, subgroup_order, SUBGROUP_SEARCH_BUDGET)?
        .ok_or_else(|| RegistryError::Unavailable {
            name: format!("psl2({p}) cosets"),
            reason: format!("no subgroup of order {subgroup_order} found"),
        })?;
    Ok(coset_action(&g, &sub)?)
}

/// Construct a group by family name.
pub fn family(name: &str) -> Result<PermGroup, RegistryError> {
    if let Some((base, param)) = name.split_once(':') {
        let parse = || {
            param
                .parse::<u32>()
                .map_err(|_| RegistryError::BadParameter(name.to_string()))
        };
        return match base {
            "sym2sub" => Ok(sym_two_subsets(parse()? as usize, false)?),
            "alt2sub" => Ok(sym_two_subsets(parse()? as usize, true)?),
            "psl2proj" => Ok(psl2_action(parse()?, Psl2Target::ProjectiveLine)?),
            "psl2pairs" => Ok(psl2_action(parse()?, Psl2Target::TwoSubsets)?),
            "sl2k2" => Ok(sl2k2_in_sp4(parse()?)?.group),
            _ => Err(RegistryError::UnknownFamily(name.to_string())),
        };
    }
    match name {
        "s3" => Ok(PermGroup::from_cycle_text("(1 2)\n(1 2 3)")?),
        "c15" => Ok(PermGroup::from_cycle_text(
            "(1 2 3 4 5 6 7 8 9 10 11 12 13 14 15)",
        )?),
        "c3wrc5" => Ok(PermGroup::from_cycle_text(
            "(1 2 3)\n(1 4 7 10 13)(2 5 8 11 14)(3 6 9 12 15)",
        )?),
        "f21" => f21_regular(),
        "a7-triples" => Ok(sym_ksubsets(7, 3, true)?),
        "psl27-cosets" => psl2_cosets(7, 8),
        "psl211-cosets" => psl2_cosets(11, 12),
        "m22" => Err(RegistryError::Unavailable {
            name: name.to_string(),
            reason: "M22 (order 443520) is a stretch case beyond the enumeration scope \
                     of this tool"
                .to_string(),
        }),
        _ => Err(RegistryError::UnknownFamily(name.to_string())),
    }
}

/// The small instances iterated by cross-module suites. All are
/// constructible; orders range from 6 to 4080.
pub fn corpus() -> &'static [&'static str] {
    &[
        "s3",
        "c15",
        "c3wrc5",
        "f21",
        "sl2k2:2",
        "sl2k2:3",
        "psl2proj:3",
        "psl2proj:4",
        "psl2proj:5",
        "psl2proj:7",
        "psl2proj:8",
        "psl2proj:9",
        "psl2pairs:3",
        "psl2pairs:4",
        "psl2pairs:5",
        "psl2pairs:7",
        "psl2pairs:8",
        "psl2pairs:9",
        "psl27-cosets",
        "psl211-cosets",
    ]
}
