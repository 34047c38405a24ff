//! End-to-end constructions: feasibility, assignment, certificate and
//! (optionally) the truth table.

use crate::bf::{max_vars, TruthTable};
use crate::constructor::build::build;
use crate::constructor::certify::{certify, certify_exhaustive, CertifiedProfile};
use crate::constructor::feasibility::{seed_sets, solve_feasibility, BaseMode, Problem, SeedSet, Selection, Variant};
use crate::constructor::plan::{assign_phi, ConstructionPlan, PlanOptions};
use crate::error::{Error, Result};
use crate::families::SeedFunction;

/// Plans up to this half width are materialized even when only the plan is
/// requested, so the certificate can be exact.
pub const PLAN_ONLY_MATERIALIZE_HALF: u32 = 16;

/// Exhaustive cross-check of built tables up to this many variables.
pub const CROSS_CHECK_MAX_VARS: u32 = 20;

#[derive(Clone, Debug, Default)]
pub struct ConstructOptions {
    pub plan: PlanOptions,
    /// `None`: plain for C1 and C3, best of disjoint and monomial for C2.
    pub mode: Option<BaseMode>,
    /// Force these family widths.
    pub select: Option<Vec<u32>>,
    /// Skip the truth table.
    pub plan_only: bool,
}

#[derive(Clone, Debug)]
pub struct Construction {
    pub plan: ConstructionPlan,
    pub selection: Selection,
    pub certificate: CertifiedProfile,
    pub table: Option<TruthTable>,
    /// Measured profile of the table for `n <= 20`.
    pub cross_check: Option<CertifiedProfile>,
}

fn plan_for(
    n: u32,
    m: u32,
    variant: Variant,
    mode: BaseMode,
    seeds: &[SeedSet],
    opts: &ConstructOptions,
) -> Result<(Selection, ConstructionPlan)> {
    let problem = Problem {
        n,
        m,
        variant,
        mode,
        seeds: seeds.to_vec(),
        select: opts.select.clone(),
    };
    let selection = solve_feasibility(&problem)?;
    let mut po = opts.plan.clone();
    po.materialize = po.materialize && (!opts.plan_only || n / 2 <= PLAN_ONLY_MATERIALIZE_HALF);
    let plan = assign_phi(n, m, variant, mode, &selection, seeds, &po)?;
    Ok((selection, plan))
}

fn modes(variant: Variant, forced: Option<BaseMode>) -> Result<Vec<BaseMode>> {
    match (variant, forced) {
        (Variant::C1, None | Some(BaseMode::Plain)) => Ok(vec![BaseMode::Plain]),
        (Variant::C1, Some(m)) => Err(Error::InvalidArgument(format!(
            "construction 1 has no degree member (base mode {m})"
        ))),
        (Variant::C2, None) => Ok(vec![BaseMode::Disjoint, BaseMode::Monomial]),
        (Variant::C2, Some(BaseMode::Plain)) => {
            Err(Error::InvalidArgument("construction 2 needs a disjoint or monomial base".into()))
        }
        (Variant::C3, None) => Ok(vec![BaseMode::Plain]),
        (_, Some(m)) => Ok(vec![m]),
    }
}

/// Run a construction. Seeds are only consulted by C3.
pub fn construct(variant: Variant, n: u32, m: u32, seeds: &[SeedFunction], opts: &ConstructOptions) -> Result<Construction> {
    if n < opts.plan.regime.min_n() {
        return Err(Error::InvalidArgument(format!(
            "n={n} is below {} for this regime",
            opts.plan.regime.min_n()
        )));
    }
    if !opts.plan_only && n > max_vars() {
        return Err(Error::Capacity(format!(
            "truth table on {n} variables exceeds the capacity {}; use plan-only",
            max_vars()
        )));
    }
    let sets = if variant == Variant::C3 { seed_sets(seeds, m)? } else { Vec::new() };

    // C2 tries both bases and keeps the better closed form; ties favour the
    // disjoint base.
    let mut best: Option<(Selection, ConstructionPlan, CertifiedProfile)> = None;
    let mut first_err = None;
    for mode in modes(variant, opts.mode)? {
        match plan_for(n, m, variant, mode, &sets, opts) {
            Ok((sel, plan)) => {
                let cert = certify(&plan)?;
                let better = best.as_ref().is_none_or(|b| cert.closed_form > b.2.closed_form);
                if better {
                    best = Some((sel, plan, cert));
                }
            }
            Err(e @ Error::Infeasible(_)) => {
                first_err.get_or_insert(e);
            }
            Err(e) => return Err(e),
        }
    }
    let (selection, plan, certificate) = match best {
        Some(b) => b,
        None => return Err(first_err.expect("at least one mode tried")),
    };

    let mut out = Construction {
        plan,
        selection,
        certificate,
        table: None,
        cross_check: None,
    };
    if !opts.plan_only {
        if n <= CROSS_CHECK_MAX_VARS {
            let (table, measured) = certify_exhaustive(&out.plan)?;
            cross_check(&out.certificate, &measured)?;
            out.table = Some(table);
            out.cross_check = Some(measured);
        } else {
            out.table = Some(build(&out.plan)?);
        }
    }
    Ok(out)
}

/// Measured values must sit inside the certificate.
pub fn cross_check(cert: &CertifiedProfile, measured: &CertifiedProfile) -> Result<()> {
    let fail = |msg: String| Err(Error::Verification(format!("cross-check: {msg}")));
    let n_meas = &measured.nonlinearity_at_least;
    if n_meas < &cert.nonlinearity_at_least {
        return fail(format!("measured N={n_meas} below certified {}", cert.nonlinearity_at_least));
    }
    if let Some(exact) = &cert.nonlinearity_exact {
        if exact != n_meas {
            return fail(format!("measured N={n_meas}, structural value {exact}"));
        }
    }
    if measured.resiliency_at_least < cert.resiliency_at_least {
        return fail(format!(
            "measured resiliency {} below certified {}",
            measured.resiliency_at_least, cert.resiliency_at_least
        ));
    }
    let d = measured.degree_lower;
    if d < cert.degree_lower || d > cert.degree_upper {
        return fail(format!(
            "measured degree {d} outside [{}, {}]",
            cert.degree_lower, cert.degree_upper
        ));
    }
    Ok(())
}

pub fn construct1(n: u32, m: u32, opts: &ConstructOptions) -> Result<Construction> {
    construct(Variant::C1, n, m, &[], opts)
}

pub fn construct2(n: u32, m: u32, opts: &ConstructOptions) -> Result<Construction> {
    construct(Variant::C2, n, m, &[], opts)
}

pub fn construct3(n: u32, m: u32, seeds: &[SeedFunction], opts: &ConstructOptions) -> Result<Construction> {
    construct(Variant::C3, n, m, seeds, opts)
}
