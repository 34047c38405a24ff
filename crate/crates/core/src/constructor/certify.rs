//! Certificates for constructed functions.
//!
//! `f(Y, X)` is the concatenation of the assigned components `g_b`, so
//! `W_f(beta, alpha) = sum_b (-1)^(beta . b) W_{g_b}(alpha)`. For each
//! `alpha` only a few components are nonzero (one per disjoint family), and
//! the signs `beta . b_i` they can take are exactly the image of
//! `beta -> (beta . b_i)_i`. Enumerating that image gives `max |W_f|` without
//! touching `2^n` points.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::Zero;
use rayon::prelude::*;

use crate::bf::{profile, table_degree, TruthTable};
use crate::constructor::build::build;
use crate::constructor::counting::pow2;
use crate::constructor::feasibility::BaseMode;
use crate::constructor::plan::{is_odd, ConstructionPlan};
use crate::error::{Error, Result};
use crate::families::{expand, Component, Tail};

/// Widest half for the alpha enumeration.
pub const EXACT_MAX_HALF: u32 = 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CertMode {
    Exhaustive,
    StructuralExact,
    StructuralBound,
}

impl fmt::Display for CertMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CertMode::Exhaustive => "exhaustive",
            CertMode::StructuralExact => "structural-exact",
            CertMode::StructuralBound => "structural-bound",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertifiedProfile {
    pub n: u32,
    pub m: u32,
    pub mode: CertMode,
    pub resiliency_at_least: i32,
    pub nonlinearity_at_least: BigUint,
    pub nonlinearity_exact: Option<BigUint>,
    /// Closed-form lower bound for the plan as built.
    pub closed_form: BigUint,
    /// The bound without the degree member's side-lobe term.
    pub plain_form: BigUint,
    pub degree_lower: i32,
    pub degree_upper: i32,
}

impl CertifiedProfile {
    /// `2^(n-1) - 2^(n/2) <= N < 2^(n-1) - 2^(n/2-1)`.
    pub fn almost_optimal(&self) -> bool {
        let n = self.n;
        if n < 4 || n % 2 == 1 {
            return false;
        }
        let top = pow2(n - 1);
        let lo = &top - pow2(n / 2);
        let hi = &top - pow2(n / 2 - 1);
        self.nonlinearity_at_least >= lo && self.nonlinearity_at_least < hi
    }

    pub fn degree_exact(&self) -> Option<i32> {
        (self.degree_lower == self.degree_upper).then_some(self.degree_lower)
    }
}

/// `2^(n-1) - sum_i 2^(e_i)`, written from the binary expansion of the gap.
pub fn pow2_form(n: u32, value: &BigUint) -> String {
    let top = pow2(n - 1);
    if value > &top {
        return value.to_string();
    }
    let gap = &top - value;
    let mut s = format!("2^{}", n - 1);
    for bit in (0..gap.bits()).rev() {
        if gap.bit(bit) {
            s.push_str(&format!("-2^{bit}"));
        }
    }
    s
}

fn sub_clamped(a: BigInt) -> BigUint {
    if a.sign() == Sign::Minus {
        BigUint::zero()
    } else {
        a.to_biguint().expect("non-negative")
    }
}

/// `2^(n-1) - 2^(n/2-1) - sum max|W|/2` over the non-base families.
pub fn plain_form(plan: &ConstructionPlan) -> BigUint {
    let p = plan.half();
    let mut v = BigInt::from(pow2(plan.n - 1)) - BigInt::from(pow2(p - 1));
    for f in plan.families[1..].iter().filter(|f| !f.used.is_zero()) {
        v -= BigInt::from(&f.penalty >> 1usize);
    }
    sub_clamped(v)
}

/// Closed-form bound for the plan: the plain form, less `2^(m+1)` when
/// the degree member shares points with base masks.
pub fn closed_form(plan: &ConstructionPlan) -> BigUint {
    let t = BigInt::from(plain_form(plan));
    if plan.mode == BaseMode::Monomial {
        sub_clamped(t - BigInt::from(pow2(plan.m + 1)))
    } else {
        sub_clamped(t)
    }
}

fn degree_upper(plan: &ConstructionPlan, member_degree: i32) -> i32 {
    let n = plan.n as i32;
    let structural = plan.half() as i32 + member_degree.max(1);
    structural.min(n - plan.m as i32 - 1)
}

/// Degree of the XOR of all tails with odd multiplicity, from counts alone.
/// `None` when equal top degrees could cancel.
fn symbolic_tail_degree(plan: &ConstructionPlan) -> Option<i32> {
    // (degree, from a shared bent tail)
    let mut contributions: Vec<(i32, bool)> = Vec::new();
    for f in plan.families.iter().filter(|f| !f.used.is_zero()) {
        if f.k == 0 {
            if plan.mode.has_degree_member() {
                contributions.push((f.tail_degree, false));
            }
            continue;
        }
        if !f.seeded {
            if is_odd(&f.used) {
                contributions.push((f.tail_degree, true));
            }
        } else {
            // cycled seeds: parity per seed is not tracked here
            contributions.push((f.tail_degree, false));
            contributions.push((f.tail_degree, false));
        }
    }
    let top = contributions.iter().map(|c| c.0).max()?;
    let at_top: Vec<_> = contributions.iter().filter(|c| c.0 == top).collect();
    if at_top.len() == 1 || at_top.iter().all(|c| c.1) {
        Some(top)
    } else {
        None
    }
}

/// Closed-form certificate; never materializes anything.
pub fn certify_bound(plan: &ConstructionPlan) -> CertifiedProfile {
    let p = plan.half() as i32;
    let member_degree = plan
        .families
        .iter()
        .filter(|f| !f.used.is_zero())
        .map(|f| f.tail_degree.max(1))
        .max()
        .unwrap_or(1);
    let lower = match symbolic_tail_degree(plan) {
        Some(d) if d >= 1 => p + d,
        _ => 1,
    };
    let bound = closed_form(plan);
    CertifiedProfile {
        n: plan.n,
        m: plan.m,
        mode: CertMode::StructuralBound,
        resiliency_at_least: plan.m as i32,
        nonlinearity_at_least: bound.clone(),
        nonlinearity_exact: None,
        closed_form: bound,
        plain_form: plain_form(plan),
        degree_lower: lower,
        degree_upper: degree_upper(plan, member_degree),
    }
}

/// Maximum of `|sum_i s_i w_i|` over sign vectors `s_i = (-1)^(beta . b_i)`.
pub fn max_signed_sum(entries: &[(u32, i64)]) -> u64 {
    match entries.len() {
        0 => return 0,
        1 => return entries[0].1.unsigned_abs(),
        _ => {}
    }
    // xor basis over the block indices, each basis row remembering which
    // independent entries it combines
    let mut basis: Vec<(u32, u64)> = Vec::new();
    let mut free: Vec<usize> = Vec::new();
    let mut combo: Vec<u64> = vec![0; entries.len()];
    for (i, &(b, _)) in entries.iter().enumerate() {
        let mut v = b;
        let mut c = 0u64;
        for &(row, rc) in &basis {
            if v ^ row < v {
                v ^= row;
                c ^= rc;
            }
        }
        if v != 0 {
            let bit = 1u64 << free.len();
            free.push(i);
            basis.push((v, c ^ bit));
            basis.sort_by(|x, y| y.0.cmp(&x.0));
            combo[i] = bit;
        } else {
            combo[i] = c;
        }
    }
    let d = free.len();
    let mut best = 0u64;
    for s in 0u64..1 << d {
        let mut total = 0i64;
        for (i, &(_, w)) in entries.iter().enumerate() {
            if (combo[i] & s).count_ones() & 1 == 1 {
                total -= w;
            } else {
                total += w;
            }
        }
        best = best.max(total.unsigned_abs());
    }
    best
}

struct SpectralIndex<'a> {
    /// Per support: `mask -> [(block, component)]`.
    groups: Vec<(u32, HashMap<u32, Vec<(u32, &'a Component)>>)>,
}

impl<'a> SpectralIndex<'a> {
    fn new(plan: &'a ConstructionPlan) -> Self {
        let mut groups: Vec<(u32, HashMap<u32, Vec<(u32, &'a Component)>>)> = Vec::new();
        for b in 0..plan.phi.len() {
            let g = plan.component(b);
            let slot = match groups.iter().position(|(s, _)| *s == g.support()) {
                Some(i) => i,
                None => {
                    groups.push((g.support(), HashMap::new()));
                    groups.len() - 1
                }
            };
            groups[slot].1.entry(g.mask()).or_default().push((b as u32, g));
        }
        SpectralIndex { groups }
    }

    fn max_at(&self, alpha: u32, scratch: &mut Vec<(u32, i64)>) -> u64 {
        scratch.clear();
        for (support, map) in &self.groups {
            if let Some(list) = map.get(&(alpha & support)) {
                for &(b, g) in list {
                    let w = g.spectrum_at(alpha);
                    if w != 0 {
                        scratch.push((b, w));
                    }
                }
            }
        }
        max_signed_sum(scratch)
    }
}

/// `max_{beta, alpha} |W_f(beta, alpha)|` from component spectra.
pub fn structural_max_walsh(plan: &ConstructionPlan) -> Result<u64> {
    let p = plan.half();
    if !plan.is_materialized() {
        return Err(Error::InvalidArgument("plan has no block assignment".into()));
    }
    if p > EXACT_MAX_HALF {
        return Err(Error::Capacity(format!("alpha enumeration over 2^{p} points exceeds 2^{EXACT_MAX_HALF}")));
    }
    let index = SpectralIndex::new(plan);
    let best = (0u32..1 << p)
        .into_par_iter()
        .map_init(Vec::new, |scratch, alpha| index.max_at(alpha, scratch))
        .max()
        .unwrap_or(0);
    Ok(best)
}

/// XOR of all assigned components (the coefficient function of
/// `y_1 ... y_{n/2}`).
pub fn g_full(plan: &ConstructionPlan) -> Result<TruthTable> {
    let p = plan.half();
    let mut linear = 0u32;
    let mut odd: HashMap<(u32, usize), (bool, Arc<Tail>)> = HashMap::new();
    let mut order: Vec<(u32, usize)> = Vec::new();
    for b in 0..plan.phi.len() {
        let g = plan.component(b);
        linear ^= g.mask();
        if let Some(t) = g.tail() {
            let id = plan.tail_id(t).unwrap_or(usize::MAX);
            let key = (g.support(), id);
            let e = odd.entry(key).or_insert_with(|| {
                order.push(key);
                (false, t.clone())
            });
            e.0 = !e.0;
        }
    }
    let mut out = TruthTable::linear(p, linear as u64)?;
    for key in order {
        let (flag, tail) = &odd[&key];
        if *flag {
            let piece = Component::with_support(p, key.0, 0, Some(tail.clone()))?;
            out.xor_assign(&expand(&piece)?)?;
        }
    }
    Ok(out)
}

/// Structural certificate with exact nonlinearity.
pub fn certify_exact(plan: &ConstructionPlan) -> Result<CertifiedProfile> {
    let p = plan.half() as i32;
    let max = structural_max_walsh(plan)?;
    let exact = pow2(plan.n - 1) - BigUint::from(max / 2);
    let resiliency = (0..plan.phi.len())
        .map(|b| plan.component(b).structural_resiliency())
        .min()
        .unwrap_or(-1);
    let member_degree = plan
        .families
        .iter()
        .flat_map(|f| f.members.iter())
        .map(Component::degree)
        .max()
        .unwrap_or(1);
    let g = g_full(plan)?;
    let dg = table_degree(&g);
    let lower = if dg >= 0 {
        p + dg
    } else {
        plan.component(0).degree().max(1)
    };
    Ok(CertifiedProfile {
        n: plan.n,
        m: plan.m,
        mode: CertMode::StructuralExact,
        resiliency_at_least: resiliency,
        nonlinearity_at_least: exact.clone(),
        nonlinearity_exact: Some(exact),
        closed_form: closed_form(plan),
        plain_form: plain_form(plan),
        degree_lower: lower,
        degree_upper: degree_upper(plan, member_degree),
    })
}

/// Build the table and measure everything.
pub fn certify_exhaustive(plan: &ConstructionPlan) -> Result<(TruthTable, CertifiedProfile)> {
    let f = build(plan)?;
    let prof = profile(&f)?;
    let n = BigUint::from(prof.nonlinearity);
    let cert = CertifiedProfile {
        n: plan.n,
        m: plan.m,
        mode: CertMode::Exhaustive,
        resiliency_at_least: prof.resiliency,
        nonlinearity_at_least: n.clone(),
        nonlinearity_exact: Some(n),
        closed_form: closed_form(plan),
        plain_form: plain_form(plan),
        degree_lower: prof.degree,
        degree_upper: prof.degree,
    };
    Ok((f, cert))
}

/// Exact when the plan is materialized and narrow enough, bound otherwise.
pub fn certify(plan: &ConstructionPlan) -> Result<CertifiedProfile> {
    if plan.is_materialized() && plan.half() <= EXACT_MAX_HALF {
        certify_exact(plan)
    } else {
        Ok(certify_bound(plan))
    }
}
