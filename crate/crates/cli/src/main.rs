//! Command-line driver for intersection-density certificates.
//!
//! Groups come from a file (`--group`) or the named-family registry
//! (`--family`). Every subcommand prints a human summary and optionally
//! writes a JSON report (`--json PATH`, or `--json -` for stdout). The
//! environment variable `EKR_ELEMENT_CAP` overrides the element-enumeration
//! cap for commands that need the full element list.

mod cases;

use std::fs;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use ekr_core::bounds::{
    optimize_weights, ratio_certificate, recheck, regular_subgroup_certificate,
    CertificateKind, DensityCertificate,
};
use ekr_core::coclique::{max_coclique, DEFAULT_BUDGET};
use ekr_core::perm::{
    block_systems, classify_pq_blocks, find_regular_subgroup, ClassTable, PermGroup,
    RegularOutcome,
};
use ekr_core::rat::{big, ratio, rational_to_string};
use ekr_core::registry;
use ekr_core::scheme::{
    eigensystem, structure_constants, weighted_spectrum, SchemeEigensystem, WeightVector,
};
use ekr_core::symchar::{mn_character, small_value_cycle_types, Partition};

#[derive(Parser)]
#[command(
    name = "ekr",
    version,
    about = "Intersection-density bounds and certificates for transitive permutation groups"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GroupArgs {
    /// Group file: JSON {"degree": n, "generators": [[images...], ...]}
    /// (0-based) or cycle notation like "(1 2 3)(4 5)", one generator per line.
    #[arg(long, value_name = "FILE", conflicts_with = "family")]
    group: Option<PathBuf>,
    /// Named family from the registry, e.g. "psl2pairs:7", "sl2k2:2", "f21".
    #[arg(long, value_name = "NAME")]
    family: Option<String>,
}

#[derive(Args)]
struct JsonOut {
    /// Write a JSON report to this path ("-" writes JSON to stdout instead
    /// of the human summary).
    #[arg(long, value_name = "OUT")]
    json: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Exact spectrum of the unweighted derangement graph.
    Spectrum {
        #[command(flatten)]
        group: GroupArgs,
        #[command(flatten)]
        out: JsonOut,
    },
    /// Unweighted ratio-bound certificate for alpha and rho.
    Ratio {
        #[command(flatten)]
        group: GroupArgs,
        #[command(flatten)]
        out: JsonOut,
    },
    /// Optimize derangement-class weights by exact LP and certify the bound.
    Lp {
        #[command(flatten)]
        group: GroupArgs,
        #[command(flatten)]
        out: JsonOut,
    },
    /// Exact maximum intersecting set by branch and bound.
    Coclique {
        #[command(flatten)]
        group: GroupArgs,
        /// Node budget; the search reports exact=false when it runs out.
        #[arg(long, value_name = "N")]
        budget: Option<u64>,
        #[command(flatten)]
        out: JsonOut,
    },
    /// Block systems; at degree p*q the imprimitivity classification too.
    Blocks {
        #[command(flatten)]
        group: GroupArgs,
        #[command(flatten)]
        out: JsonOut,
    },
    /// Search for a regular subgroup and certify density 1 when found.
    Regular {
        #[command(flatten)]
        group: GroupArgs,
        /// Closure-computation budget for the backtracking search.
        #[arg(long, value_name = "N")]
        budget: Option<u64>,
        #[command(flatten)]
        out: JsonOut,
    },
    /// Symmetric-group character values on the five cycle types used by the
    /// 2-subset weighting, as TSV (one row per partition of n).
    Chartable { n: u32 },
    /// Run one named verification case, or all of them.
    #[command(name = "paper-case")]
    PaperCase {
        /// Case id, e.g. "sl2even:2", "psl2pairs:4", "a7-triples".
        id: Option<String>,
        /// Run the whole case list in parallel and merge reports by id.
        #[arg(long)]
        all: bool,
        #[command(flatten)]
        out: JsonOut,
    },
    /// Re-check a stored certificate file.
    Verify {
        /// Certificate JSON produced by ratio/lp/regular/paper-case.
        certificate: PathBuf,
        /// Group to check clique-style witnesses against; defaults to the
        /// registry entry named inside the certificate when there is one.
        #[command(flatten)]
        group: GroupArgs,
    },
}

fn main() {
    if let Err(e) = run() {
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}

fn run() -> Result<()> {
    match Cli::parse().command {
        Command::Spectrum { group, out } => cmd_spectrum(&group, &out),
        Command::Ratio { group, out } => cmd_ratio(&group, &out),
        Command::Lp { group, out } => cmd_lp(&group, &out),
        Command::Coclique { group, budget, out } => cmd_coclique(&group, budget, &out),
        Command::Blocks { group, out } => cmd_blocks(&group, &out),
        Command::Regular { group, budget, out } => cmd_regular(&group, budget, &out),
        Command::Chartable { n } => cmd_chartable(n),
        Command::PaperCase { id, all, out } => cmd_paper_case(id, all, &out),
        Command::Verify { certificate, group } => cmd_verify(&certificate, &group),
    }
}

/// Resolve --group/--family into a group and a label, honoring
/// EKR_ELEMENT_CAP before any element enumeration happens.
fn load_group(args: &GroupArgs) -> Result<(PermGroup, String)> {
    let (mut g, label) = match (&args.group, &args.family) {
        (Some(path), None) => {
            let text = fs::read_to_string(path)
                .with_context(|| format!("cannot read group file {}", path.display()))?;
            let g = PermGroup::from_input(&text)
                .with_context(|| format!("cannot parse group file {}", path.display()))?;
            (g, path.display().to_string())
        }
        (None, Some(name)) => (registry::family(name)?, name.clone()),
        _ => bail!("exactly one of --group or --family is required"),
    };
    apply_element_cap(&mut g)?;
    Ok((g, label))
}

pub(crate) fn apply_element_cap(g: &mut PermGroup) -> Result<()> {
    if let Ok(v) = std::env::var("EKR_ELEMENT_CAP") {
        let cap: usize = v
            .trim()
            .parse()
            .context("EKR_ELEMENT_CAP must be a nonnegative integer")?;
        g.set_element_cap(cap);
    }
    Ok(())
}

pub(crate) fn scheme_for(g: &PermGroup) -> Result<(ClassTable, SchemeEigensystem)> {
    let els = g.elements()?;
    let table = ClassTable::compute(g)?;
    let sc = structure_constants(els, &table)?;
    let blocks = table.rational_class_blocks(els);
    let es = eigensystem(&sc, blocks)?;
    Ok((table, es))
}

/// Write to stdout, exiting quietly when the reading end of a pipe closed.
fn write_stdout(s: &str) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    if out.write_all(s.as_bytes()).is_err() {
        std::process::exit(0);
    }
}

/// Print the human summary, or write/print JSON per --json.
fn emit(out: &JsonOut, json: serde_json::Value, human: &str) -> Result<()> {
    match &out.json {
        Some(p) if p.as_os_str() == "-" => {
            write_stdout(&serde_json::to_string_pretty(&json)?);
            write_stdout("\n");
        }
        Some(p) => {
            fs::write(p, serde_json::to_string_pretty(&json)?)
                .with_context(|| format!("cannot write {}", p.display()))?;
            write_stdout(human);
            write_stdout(&format!("report written to {}\n", p.display()));
        }
        None => write_stdout(human),
    }
    Ok(())
}

fn kind_label(kind: &CertificateKind) -> &'static str {
    match kind {
        CertificateKind::RegularSubgroup => "regular-subgroup",
        CertificateKind::CliqueCoclique => "clique-coclique",
        CertificateKind::Ratio => "ratio",
        CertificateKind::WeightedRatio => "weighted-ratio",
        CertificateKind::NoHom => "no-hom",
        CertificateKind::Exact => "exact",
    }
}

fn cert_summary(cert: &DensityCertificate) -> String {
    format!(
        "kind         {}\nalpha_upper  {}\nrho_upper    {}\n",
        kind_label(&cert.kind),
        rational_to_string(&cert.alpha_upper),
        rational_to_string(&cert.rho_upper),
    )
}

fn group_header(label: &str, g: &PermGroup) -> String {
    format!("group        {label}\ndegree       {}\norder        {}\n", g.degree(), g.order())
}

fn cmd_spectrum(group: &GroupArgs, out: &JsonOut) -> Result<()> {
    let (g, label) = load_group(group)?;
    let (_, es) = scheme_for(&g)?;
    let w = WeightVector::all_derangements(&es.derangement);
    let report = weighted_spectrum(&es, &w)?;
    let mut human = group_header(&label, &g);
    human.push_str(&format!(
        "row sum      {}\nexact        {}\n",
        rational_to_string(&report.row_sum),
        report.exact
    ));
    human.push_str("value  multiplicity\n");
    for e in &report.entries {
        human.push_str(&format!(
            "{}  {}\n",
            e.value.to_display_string(),
            e.multiplicity
        ));
    }
    let json = serde_json::json!({
        "group": label,
        "degree": g.degree(),
        "order": g.order().to_string(),
        "weighting": "unweighted derangement adjacency",
        "spectrum": report,
    });
    emit(out, json, &human)
}

fn cmd_ratio(group: &GroupArgs, out: &JsonOut) -> Result<()> {
    let (g, label) = load_group(group)?;
    let (_, es) = scheme_for(&g)?;
    let w = WeightVector::all_derangements(&es.derangement);
    let report = weighted_spectrum(&es, &w)?;
    let cert = ratio_certificate(&label, g.degree(), g.order(), &report)?;
    let human = format!("{}{}", group_header(&label, &g), cert_summary(&cert));
    emit(out, serde_json::to_value(&cert)?, &human)
}

fn cmd_lp(group: &GroupArgs, out: &JsonOut) -> Result<()> {
    let (g, label) = load_group(group)?;
    let (_, es) = scheme_for(&g)?;
    let sol = optimize_weights(&es, &label, g.degree())?;
    let mut human = format!(
        "{}least eigenvalue  {}\n{}",
        group_header(&label, &g),
        rational_to_string(&sol.tau),
        cert_summary(&sol.certificate)
    );
    human.push_str("nonzero class weights (class: weight)\n");
    for (i, w) in sol.weights.weights.iter().enumerate() {
        if !num::Zero::is_zero(w) {
            human.push_str(&format!("{i}: {}\n", rational_to_string(w)));
        }
    }
    let json = serde_json::json!({
        "group": label,
        "degree": g.degree(),
        "order": g.order().to_string(),
        "tau": rational_to_string(&sol.tau),
        "weights": sol.weights.weights.iter().map(rational_to_string).collect::<Vec<_>>(),
        "certificate": serde_json::to_value(&sol.certificate)?,
    });
    emit(out, json, &human)
}

fn cmd_coclique(group: &GroupArgs, budget: Option<u64>, out: &JsonOut) -> Result<()> {
    let (g, label) = load_group(group)?;
    let result = max_coclique(&g, budget.unwrap_or(DEFAULT_BUDGET))?;
    let rho = ratio(big(result.alpha as u64) * big(g.degree() as u64), g.order());
    let human = format!(
        "{}alpha        {}{}\nrho          {}\nnodes        {}\n",
        group_header(&label, &g),
        result.alpha,
        if result.exact { " (exact)" } else { " (budget exhausted; lower bound only)" },
        rational_to_string(&rho),
        result.nodes
    );
    let witness: Vec<Vec<u16>> = result.witness.iter().map(|p| p.images().to_vec()).collect();
    let json = serde_json::json!({
        "alpha": result.alpha,
        "exact": result.exact,
        "witness": witness,
    });
    emit(out, json, &human)
}

fn is_odd_prime(n: usize) -> bool {
    n >= 3 && n % 2 == 1 && (3..).step_by(2).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

/// Split a degree into p*q with p > q distinct odd primes, when possible.
fn pq_split(n: usize) -> Option<(usize, usize)> {
    let mut q = 3;
    while q * q < n {
        if n % q == 0 && is_odd_prime(q) && is_odd_prime(n / q) {
            return Some((n / q, q));
        }
        q += 2;
    }
    None
}

fn cmd_blocks(group: &GroupArgs, out: &JsonOut) -> Result<()> {
    let (g, label) = load_group(group)?;
    let systems = block_systems(&g)?;
    let mut human = group_header(&label, &g);
    human.push_str(&format!("nontrivial block systems: {}\n", systems.len()));
    for s in &systems {
        human.push_str(&format!(
            "  {} blocks of size {}\n",
            s.num_blocks(),
            s.block_size()
        ));
    }
    let mut json = serde_json::json!({
        "group": label,
        "degree": g.degree(),
        "order": g.order().to_string(),
        "systems": systems
            .iter()
            .map(|s| serde_json::json!({
                "block_size": s.block_size(),
                "num_blocks": s.num_blocks(),
                "blocks": s.blocks,
            }))
            .collect::<Vec<_>>(),
    });
    if let Some((p, q)) = pq_split(g.degree()) {
        if !systems.is_empty() {
            let report = classify_pq_blocks(&g, p, q)?;
            human.push_str(&format!(
                "degree {p}*{q} classification: {} (certifies density 1: {})\n",
                report.label, report.certifies_density_one
            ));
            json["classification"] = serde_json::to_value(&report)?;
        } else {
            human.push_str(&format!("degree {p}*{q} but primitive: no classification\n"));
        }
    }
    emit(out, json, &human)
}

pub(crate) const REGULAR_SEARCH_BUDGET: u64 = 10_000_000;

fn cmd_regular(group: &GroupArgs, budget: Option<u64>, out: &JsonOut) -> Result<()> {
    let (g, label) = load_group(group)?;
    match find_regular_subgroup(&g, budget.unwrap_or(REGULAR_SEARCH_BUDGET))? {
        RegularOutcome::Found(subgroup) => {
            let cert = regular_subgroup_certificate(&g, &label, &subgroup)?;
            let human = format!(
                "{}regular subgroup of order {} found\n{}",
                group_header(&label, &g),
                subgroup.len(),
                cert_summary(&cert)
            );
            let json = serde_json::json!({
                "found": true,
                "certificate": serde_json::to_value(&cert)?,
            });
            emit(out, json, &human)
        }
        RegularOutcome::NoneExists => {
            let human = format!(
                "{}search exhausted: no regular subgroup exists\n",
                group_header(&label, &g)
            );
            emit(out, serde_json::json!({ "found": false }), &human)
        }
    }
}

fn partition_label(p: &Partition) -> String {
    p.parts()
        .iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn cmd_chartable(n: u32) -> Result<()> {
    let types = small_value_cycle_types(n)?;
    let mut header = String::from("lambda");
    for t in &types {
        header.push('\t');
        header.push_str(&partition_label(t));
    }
    header.push('\n');
    write_stdout(&header);
    for lambda in Partition::all(n) {
        let mut row = partition_label(&lambda);
        for t in &types {
            row.push('\t');
            row.push_str(&mn_character(&lambda, t)?.to_string());
        }
        row.push('\n');
        write_stdout(&row);
    }
    Ok(())
}

fn cmd_paper_case(id: Option<String>, all: bool, out: &JsonOut) -> Result<()> {
    let runs = match (id, all) {
        (Some(id), false) => vec![cases::run_case(&id)?],
        (None, true) => cases::run_all(),
        _ => bail!("give exactly one case id, or --all"),
    };
    let mut human = String::new();
    let mut reports = Vec::new();
    let mut blocking_failures = 0;
    for run in &runs {
        human.push_str(&run.human);
        if run.blocking_failure() {
            blocking_failures += 1;
        }
        reports.push(run.json.clone());
    }
    let json = if reports.len() == 1 {
        reports.pop().unwrap()
    } else {
        serde_json::Value::Array(reports)
    };
    emit(out, json, &human)?;
    if blocking_failures > 0 {
        bail!("{blocking_failures} case(s) failed");
    }
    Ok(())
}

/// Pull every certificate out of a verify target: a bare certificate, a
/// report with a "certificate" field, an array of reports, or a case report
/// with a "certificates" list.
fn collect_certificates(value: &serde_json::Value, out: &mut Vec<DensityCertificate>) -> Result<()> {
    match value {
        serde_json::Value::Array(items) => {
            for item in items {
                collect_certificates(item, out)?;
            }
        }
        serde_json::Value::Object(map) => {
            if map.contains_key("kind") && map.contains_key("alpha_upper") {
                out.push(serde_json::from_value(value.clone()).map_err(|e| {
                    anyhow::anyhow!("malformed certificate object: {e}")
                })?);
            } else if let Some(inner) = map.get("certificate") {
                collect_certificates(inner, out)?;
            } else if let Some(inner) = map.get("certificates") {
                collect_certificates(inner, out)?;
            }
        }
        _ => {}
    }
    Ok(())
}

fn cmd_verify(certificate: &PathBuf, group: &GroupArgs) -> Result<()> {
    let text = fs::read_to_string(certificate)
        .with_context(|| format!("cannot read {}", certificate.display()))?;
    let value: serde_json::Value = serde_json::from_str(&text)
        .with_context(|| format!("{} is not JSON", certificate.display()))?;
    let mut certs = Vec::new();
    collect_certificates(&value, &mut certs)?;
    if certs.is_empty() {
        bail!("no certificates found in {}", certificate.display());
    }
    let override_group: Option<PermGroup> = match (&group.group, &group.family) {
        (None, None) => None,
        _ => Some(load_group(group)?.0),
    };
    let mut failures = 0;
    for cert in &certs {
        // Clique-style kinds need the group; fall back to the registry name
        // recorded in the certificate when no override was given.
        let resolved: Option<PermGroup> = match &override_group {
            Some(_) => None,
            None => match registry::family(&cert.group) {
                Ok(mut g) => {
                    apply_element_cap(&mut g)?;
                    Some(g)
                }
                Err(_) => None,
            },
        };
        let g = override_group.as_ref().or(resolved.as_ref());
        match recheck(cert, g) {
            Ok(()) => write_stdout(&format!(
                "certificate OK: kind {} alpha_upper {} rho_upper {} (group {})\n",
                kind_label(&cert.kind),
                rational_to_string(&cert.alpha_upper),
                rational_to_string(&cert.rho_upper),
                cert.group
            )),
            Err(e) => {
                write_stdout(&format!(
                    "certificate FAILED: kind {} (group {}): {e}\n",
                    kind_label(&cert.kind),
                    cert.group
                ));
                failures += 1;
            }
        }
    }
    if failures > 0 {
        bail!("{failures} of {} certificate(s) failed re-check", certs.len());
    }
    Ok(())
}
