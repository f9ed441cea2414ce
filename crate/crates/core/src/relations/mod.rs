//! The identities satisfied by the associators, their numerical
//! verification, and the built-in automorphisms.

pub mod ingredients;
pub mod mobius;
pub mod report;
pub mod verifiers;

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::time::Instant;

use rayon::prelude::*;

pub use ingredients::{associator_kind, Ingredients, Requirements, RunContext};
pub use mobius::{mobius_to_automorphism, named_map, special_points, Mobius, MobiusSymmetry, Point};
pub use report::{RelationRow, RowKind, VerificationReport};
pub use verifiers::*;

use crate::dsl::{ambient, evaluate, parse_catalogue, CatalogueEntry};
use crate::error::Result;
use crate::shuffle::grouplike_residual;
use crate::t4algebra::{hilbert_dims, ResourceGuard};
use ingredients::ProbeContext;

/// The shipped relation catalogue.
pub const DEFAULT_CATALOGUE: &str = include_str!("../../catalogue/relations.rel");

pub const DEFAULT_PREC: usize = 192;
pub const DEFAULT_TERMS: usize = 120;
pub const DEFAULT_TOLERANCE: f64 = 1e-20;
/// Default tolerance for identities in `U(t4)`.
pub const T4_TOLERANCE: f64 = 1e-15;

pub fn default_catalogue() -> Vec<CatalogueEntry> {
    parse_catalogue(DEFAULT_CATALOGUE).expect("shipped catalogue parses")
}

/// Default degree for relations involving the named associator.
fn default_degree(name: &str) -> usize {
    match name {
        "Psi2" => 6,
        "Phi" | "PhiHalf" => 8,
        _ => 4,
    }
}

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub prec: usize,
    pub terms: usize,
    /// Overrides every relation's degree.
    pub degree: Option<usize>,
    /// Overrides every tolerance.
    pub tolerance: Option<f64>,
    pub cache_dir: Option<PathBuf>,
    /// Restrict to these row names (or `group` for `group@reading`).
    pub only: Vec<String>,
    pub guard: ResourceGuard,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            prec: DEFAULT_PREC,
            terms: DEFAULT_TERMS,
            degree: None,
            tolerance: None,
            cache_dir: None,
            only: Vec::new(),
            guard: ResourceGuard::default(),
        }
    }
}

impl VerifyConfig {
    fn selected(&self, name: &str) -> bool {
        self.only.is_empty() || self.only.iter().any(|o| o == name || name.split_once('@').is_some_and(|(g, _)| g == o))
    }
}

/// A catalogue line with its resolved degree and tolerance.
#[derive(Clone, Debug)]
pub struct EntryPlan {
    pub entry: CatalogueEntry,
    pub degree: usize,
    pub tolerance: f64,
    pub uses_t4: bool,
    pub series: Vec<String>,
}

/// Exact or numerical checks run alongside the catalogue.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StructuralCheck {
    GroupLike(String),
    PresentationF5,
    CompositesF5,
    PresentationF3,
    T4Dims,
    T4Centrality,
}

impl StructuralCheck {
    pub fn name(&self) -> String {
        match self {
            StructuralCheck::GroupLike(s) => format!("grouplike-{}", s.to_lowercase()),
            StructuralCheck::PresentationF5 => "presentation-f5".into(),
            StructuralCheck::CompositesF5 => "composites-f5".into(),
            StructuralCheck::PresentationF3 => "presentation-f3".into(),
            StructuralCheck::T4Dims => "t4-dims".into(),
            StructuralCheck::T4Centrality => "t4-centrality".into(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Plan {
    pub entries: Vec<EntryPlan>,
    pub structural: Vec<StructuralCheck>,
    pub requirements: Requirements,
}

/// Resolves degrees and tolerances and collects what must be computed.
pub fn plan(catalogue: &[CatalogueEntry], config: &VerifyConfig) -> Result<Plan> {
    let mut entries = Vec::new();
    let mut req = Requirements::default();
    let mut maps: Vec<String> = Vec::new();
    for e in catalogue.iter().filter(|e| config.selected(&e.name)) {
        let series = e.relation.series_names();
        let probe = ProbeContext::new(&series)?;
        let uses_t4 = ambient(&probe, &e.relation).map(|a| probe.is_t4(&a)).unwrap_or(false);
        let known: Vec<&String> = series.iter().filter(|n| associator_kind(n).is_some()).collect();
        let mut default = known.iter().map(|n| default_degree(n)).min().unwrap_or(4);
        if uses_t4 {
            default = default.min(4);
        }
        let degree = config.degree.or(e.degree).unwrap_or(default);
        let base_tol = if uses_t4 { T4_TOLERANCE } else { DEFAULT_TOLERANCE };
        let tolerance = config.tolerance.or(e.tolerance).unwrap_or(base_tol);
        for n in known {
            req.need(n, degree);
        }
        if uses_t4 {
            req.need_t4(degree);
        }
        for m in e.relation.map_names() {
            if !maps.contains(&m) {
                maps.push(m);
            }
        }
        entries.push(EntryPlan { entry: e.clone(), degree, tolerance, uses_t4, series });
    }
    let mut structural: Vec<StructuralCheck> = req.associators.keys().map(|n| StructuralCheck::GroupLike(n.clone())).collect();
    if maps.iter().any(|m| ["s", "s2", "t", "t2", "t3", "st"].contains(&m.as_str())) {
        structural.push(StructuralCheck::PresentationF5);
        structural.push(StructuralCheck::CompositesF5);
    }
    if maps.iter().any(|m| ["sigma", "d42", "st"].contains(&m.as_str())) {
        structural.push(StructuralCheck::PresentationF3);
    }
    if req.t4_degree.is_some() {
        structural.push(StructuralCheck::T4Dims);
        structural.push(StructuralCheck::T4Centrality);
    }
    structural.retain(|c| config.selected(&c.name()));
    Ok(Plan { entries, structural, requirements: req })
}

fn relation_row(ing: &Ingredients, p: &EntryPlan) -> RelationRow {
    let kind = if p.entry.reading().is_some() { RowKind::Reading } else { RowKind::Relation };
    let run = || -> Result<RelationRow> {
        let ctx = ing.context(p.degree)?;
        let ev = evaluate(&ctx, &p.entry.relation)?;
        Ok(RelationRow::new(&p.entry.name, kind, ev.algebra.alphabet().label(), ev.residual.residual_by_degree(), p.tolerance)
            .with_run(ing.prec(), ing.terms(), ing.tail_bound(&p.series)))
    };
    run().unwrap_or_else(|e| {
        let mut r = RelationRow::failed(&p.entry.name, kind, p.tolerance, e.to_string());
        r.degree = p.degree;
        r
    })
}

fn exact_row(name: &str, algebra: &str, checks: Result<Vec<mobius::MapCheck>>) -> RelationRow {
    match checks {
        Ok(checks) => {
            let failed: Vec<&str> = checks.iter().filter(|c| !c.holds).map(|c| c.name).collect();
            let all: Vec<&str> = checks.iter().map(|c| c.name).collect();
            let note = if failed.is_empty() { all.join(", ") } else { format!("failed: {}", failed.join(", ")) };
            RelationRow::new(name, RowKind::Structural, algebra, vec![failed.len() as f64], 0.0).with_note(note)
        }
        Err(e) => RelationRow::failed(name, RowKind::Structural, 0.0, e.to_string()),
    }
}

fn structural_row(ing: &Ingredients, c: &StructuralCheck, tol: f64) -> RelationRow {
    let name = c.name();
    match c {
        StructuralCheck::GroupLike(s) => match ing.associator(s).and_then(|a| Ok((a, grouplike_residual(&a.series)?))) {
            Ok((a, r)) => {
                let mut row = RelationRow::new(&name, RowKind::Structural, a.series.alphabet().label(), vec![r], tol)
                    .with_run(ing.prec(), ing.terms(), a.tail_bound);
                row.degree = a.series.degree();
                row
            }
            Err(e) => RelationRow::failed(&name, RowKind::Structural, tol, e.to_string()),
        },
        StructuralCheck::PresentationF5 => exact_row(&name, "f5", mobius::presentation_f5()),
        StructuralCheck::CompositesF5 => exact_row(&name, "f5", mobius::composites_f5()),
        StructuralCheck::PresentationF3 => exact_row(&name, "f3", mobius::presentation_f3()),
        StructuralCheck::T4Dims | StructuralCheck::T4Centrality => {
            let Some(b) = ing.t4() else {
                return RelationRow::failed(&name, RowKind::Structural, 0.0, "U(t4) table not built".into());
            };
            let t = b.table();
            let (bad, note) = if *c == StructuralCheck::T4Dims {
                let dims = t.dims();
                let bad = dims.iter().zip(hilbert_dims(t.degree())).filter(|(a, h)| num_bigint::BigInt::from(**a) != *h).count();
                (bad, format!("dims {}", dims.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(", ")))
            } else {
                (usize::from(!t.z_is_central()), format!("Z central through degree {}", t.degree()))
            };
            let mut row = RelationRow::new(&name, RowKind::Structural, t.alphabet().label(), vec![bad as f64], 0.0).with_note(note);
            row.degree = t.degree();
            row
        }
    }
}

/// One row per `group@reading` group: passes iff exactly one reading holds.
fn reading_groups(rows: &[RelationRow]) -> Vec<RelationRow> {
    let mut groups: BTreeMap<&str, Vec<(&str, &RelationRow)>> = BTreeMap::new();
    for r in rows.iter().filter(|r| r.kind == RowKind::Reading) {
        if let Some((g, reading)) = r.name.split_once('@') {
            groups.entry(g).or_default().push((reading, r));
        }
    }
    groups
        .into_iter()
        .map(|(g, readings)| {
            let holding: Vec<&(&str, &RelationRow)> = readings.iter().filter(|(_, r)| r.pass).collect();
            let pick = match holding.as_slice() {
                [one] => one.1,
                _ => readings.iter().map(|(_, r)| *r).min_by(|a, b| a.residual.total_cmp(&b.residual)).expect("nonempty group"),
            };
            let mut row = pick.clone();
            row.name = g.to_string();
            row.kind = RowKind::Relation;
            row.error = None;
            let others: Vec<String> = readings
                .iter()
                .filter(|(_, r)| !std::ptr::eq(*r, pick))
                .map(|(n, r)| format!("{n}: {:.1e}", r.residual))
                .collect();
            row.note = Some(match holding.len() {
                1 => format!("holds under reading {}; {}", holding[0].0, others.join(", ")),
                0 => "no reading holds".into(),
                k => format!("{k} readings hold"),
            });
            row.pass = holding.len() == 1;
            row
        })
        .collect()
}

/// Runs a planned verification over prepared ingredients.
pub fn run(plan: &Plan, ing: &Ingredients, config: &VerifyConfig) -> VerificationReport {
    let tol = config.tolerance.unwrap_or(DEFAULT_TOLERANCE);
    let timed = |name: String, f: &(dyn Fn() -> RelationRow + Sync)| {
        let t0 = Instant::now();
        let r = f();
        (name, r, t0.elapsed().as_secs_f64())
    };
    let mut results: Vec<(String, RelationRow, f64)> =
        plan.entries.par_iter().map(|p| timed(p.entry.name.clone(), &|| relation_row(ing, p))).collect();
    results.extend(plan.structural.par_iter().map(|c| timed(c.name(), &|| structural_row(ing, c, tol))).collect::<Vec<_>>());
    let mut timings = BTreeMap::new();
    let mut rows = Vec::new();
    for (n, r, t) in results {
        timings.insert(n, t);
        rows.push(r);
    }
    let groups = reading_groups(&rows);
    rows.extend(groups);
    VerificationReport::new(rows, timings)
}

/// Plans, computes the ingredients and runs every selected relation and
/// structural check.
pub fn verify_all(catalogue: &[CatalogueEntry], config: &VerifyConfig) -> Result<VerificationReport> {
    let p = plan(catalogue, config)?;
    let t0 = Instant::now();
    let ing = Ingredients::build(&p.requirements, config.prec, config.terms, config.cache_dir.as_deref(), config.guard)?;
    let setup = t0.elapsed().as_secs_f64();
    let mut report = run(&p, &ing, config);
    report.timings.insert("setup".into(), setup);
    Ok(report)
}
