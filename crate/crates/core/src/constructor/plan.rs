//! Construction plans: counts per family, materialized members and the
//! block assignment.

use std::collections::HashSet;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::constructor::counting::pow2;
use crate::constructor::feasibility::{BaseMode, Selection, SeedSet, TailSource, Variant};
use crate::error::{Error, Result};
use crate::families::family::{
    check_pivots, gamma0_iter, gamma0_prime_iter, masks_with_min_weight, partially_linear_iter, MAX_HALF_VARS,
};
use crate::families::{default_bent_tail, degree_member, Component, FamilyLabel, Regime, Tail};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlanFamily {
    pub label: FamilyLabel,
    pub k: u32,
    pub e: u32,
    /// Full family size.
    pub size: BigUint,
    /// Members assigned to blocks, `|A_k|`.
    pub used: BigUint,
    /// `max |W|` of one member (the linear peak `2^(n/2)` for the base).
    pub penalty: BigUint,
    /// Tails come from seed functions rather than the default bent tail.
    pub seeded: bool,
    /// Highest tail degree among members, `-1` without tails.
    pub tail_degree: i32,
    /// Tail ids (into [`ConstructionPlan::tails`]) cycled over members.
    pub tails: Vec<usize>,
    /// The assigned members; empty in count-only plans.
    pub members: Vec<Component>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstructionPlan {
    pub n: u32,
    pub m: u32,
    pub variant: Variant,
    pub mode: BaseMode,
    /// Selector length.
    pub s: u32,
    /// `a_1..a_s`.
    pub a: Vec<bool>,
    /// `e_1..e_s` (all zero outside Construction 3).
    pub e: Vec<u32>,
    /// 1-based pivot coordinates; empty without a degree member.
    pub pivots: Vec<u32>,
    pub c_prime: Option<u32>,
    pub tails: Vec<Arc<Tail>>,
    /// Base family first, then selected families in increasing `k`.
    pub families: Vec<PlanFamily>,
    /// Block `b` maps to `(family, member)`; empty in count-only plans.
    pub phi: Vec<(u32, u32)>,
    pub shuffle: Option<u64>,
}

#[derive(Clone, Debug)]
pub struct PlanOptions {
    pub regime: Regime,
    /// Permute the block assignment with this seed.
    pub shuffle: Option<u64>,
    /// Build members and the assignment (needs `n/2 <= 24`).
    pub materialize: bool,
    /// Keep `|A_k'|` odd for the largest selected `k'` when the base has no
    /// degree member.
    pub parity_fix: bool,
    /// Defaults to `1..=m+1`.
    pub pivots: Option<Vec<u32>>,
    /// Defaults to the pivot mask.
    pub c_prime: Option<u32>,
}

impl Default for PlanOptions {
    fn default() -> Self {
        PlanOptions {
            regime: Regime::Standard,
            shuffle: None,
            materialize: true,
            parity_fix: true,
            pivots: None,
            c_prime: None,
        }
    }
}

impl ConstructionPlan {
    pub fn half(&self) -> u32 {
        self.n / 2
    }

    pub fn is_materialized(&self) -> bool {
        !self.phi.is_empty()
    }

    pub fn base(&self) -> &PlanFamily {
        &self.families[0]
    }

    /// `(k, |A_k|)` for the non-base families.
    pub fn used_counts(&self) -> Vec<(u32, BigUint)> {
        self.families[1..].iter().map(|f| (f.k, f.used.clone())).collect()
    }

    /// Component assigned to block `b`.
    pub fn component(&self, b: usize) -> &Component {
        let (f, j) = self.phi[b];
        &self.families[f as usize].members[j as usize]
    }

    pub fn tail_id(&self, tail: &Arc<Tail>) -> Option<usize> {
        self.tails
            .iter()
            .position(|t| Arc::ptr_eq(t, tail))
            .or_else(|| self.tails.iter().position(|t| t == tail))
    }

    /// Check the structural invariants: counts add up to `2^(n/2)`,
    /// `a_k = 1` exactly for nonempty `A_k`, and `phi` is a bijection onto
    /// the materialized members.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Verification(format!("plan: {msg}")));
        if self.families.is_empty() {
            return bad("no base family".into());
        }
        let total: BigUint = self.families.iter().map(|f| f.used.clone()).sum();
        if total != pow2(self.half()) {
            return bad(format!("assigned {total} components, need 2^{}", self.half()));
        }
        if self.a.len() != self.s as usize || self.e.len() != self.s as usize {
            return bad("selector length differs from s".into());
        }
        for k in 1..=self.s {
            let fam = self.families[1..].iter().find(|f| f.k == k);
            let nonempty = fam.is_some_and(|f| !f.used.is_zero());
            if self.a[k as usize - 1] != nonempty {
                return bad(format!("a_{k} disagrees with |A_{k}|"));
            }
        }
        for f in &self.families {
            if f.used > f.size {
                return bad(format!("{} uses {} of {} members", f.label, f.used, f.size));
            }
        }
        if self.mode.has_degree_member() && self.half() <= 32 && self.c_prime.is_none() {
            return bad("degree member without c'".into());
        }
        if !self.is_materialized() {
            return Ok(());
        }
        if self.phi.len() != 1usize << self.half() {
            return bad(format!("phi has {} entries", self.phi.len()));
        }
        let mut seen = HashSet::with_capacity(self.phi.len());
        for (b, &(f, j)) in self.phi.iter().enumerate() {
            let fam = self
                .families
                .get(f as usize)
                .ok_or_else(|| Error::Verification(format!("plan: block {b} names family {f}")))?;
            if j as usize >= fam.members.len() {
                return bad(format!("block {b} names member {f}:{j}"));
            }
            if !seen.insert((f, j)) {
                return bad(format!("member {f}:{j} assigned twice"));
            }
        }
        for f in &self.families {
            if BigUint::from(f.members.len()) != f.used {
                return bad(format!("{} lists {} members, uses {}", f.label, f.members.len(), f.used));
            }
            if f.members.iter().any(|c| c.vars() != self.half()) {
                return bad(format!("{} has members of the wrong width", f.label));
            }
        }
        if self.mode.has_degree_member() {
            let g = &self.base().members[0];
            if g.tail().is_none() || g.support().count_ones() != self.m + 1 {
                return bad("degree member is not first in the base family".into());
            }
        }
        Ok(())
    }
}

fn base_label(variant: Variant, mode: BaseMode) -> FamilyLabel {
    match (variant, mode) {
        (Variant::C3, BaseMode::Disjoint) => FamilyLabel::Omega0Prime,
        (Variant::C3, _) => FamilyLabel::Omega0,
        (_, BaseMode::Disjoint) => FamilyLabel::Gamma0Prime,
        _ => FamilyLabel::Gamma0,
    }
}

fn to_usize(x: &BigUint) -> usize {
    x.to_usize().expect("materialized counts fit in usize")
}

/// Turn a selection into a plan: per-family counts, then (optionally)
/// members and the block map.
///
/// Counts: the base is used in full (capped at `2^(n/2)`), each selected
/// family reserves one member, and the rest of the deficit is filled in
/// increasing `k`.
pub fn assign_phi(
    n: u32,
    m: u32,
    variant: Variant,
    mode: BaseMode,
    selection: &Selection,
    seeds: &[SeedSet],
    opts: &PlanOptions,
) -> Result<ConstructionPlan> {
    let p = n / 2;
    let target = pow2(p);
    let chosen = &selection.chosen;
    let reserve = BigUint::from(chosen.len());
    let mut base_used = selection.base_size.clone().min(&target - &reserve.clone().min(target.clone()));
    let mut left = &target - &base_used;
    let mut used: Vec<BigUint> = Vec::with_capacity(chosen.len());
    left -= reserve.clone().min(left.clone());
    for c in chosen {
        if c.size.is_zero() {
            return Err(Error::Infeasible(format!("selected family k={} is empty", c.k)));
        }
        let extra = (&c.size - 1u32).min(left.clone());
        left -= &extra;
        used.push(extra + 1u32);
    }
    if !left.is_zero() {
        return Err(Error::Infeasible(format!(
            "selected families leave {left} blocks unassigned"
        )));
    }
    let pivots: Vec<u32> = if mode.has_degree_member() {
        opts.pivots.clone().unwrap_or_else(|| (1..=m + 1).collect())
    } else {
        Vec::new()
    };
    // Masks exist only for widths that fit a u32; wider plans keep the list.
    let pivot_mask = if mode.has_degree_member() && p <= 32 {
        Some(check_pivots(p, m, &pivots)?)
    } else {
        None
    };
    let c_prime = match (pivot_mask, opts.c_prime) {
        (None, _) => None,
        (Some(pm), Some(c)) => {
            if c & pm != pm || c.count_ones() <= m || (p < 32 && c >> p != 0) {
                return Err(Error::InvalidArgument(format!("c'={c:#x} is not in S")));
            }
            Some(c)
        }
        (Some(pm), None) => Some(pm),
    };

    // Keep the largest selected family's count odd so its tail survives in
    // the XOR of all blocks.
    if opts.parity_fix && !mode.has_degree_member() {
        if let Some((last, c)) = chosen.iter().enumerate().next_back() {
            let single_tail = match &c.source {
                TailSource::Bent => true,
                TailSource::Seeds(i) => seeds[*i].tails.len() == 1,
            };
            let even = (&used[last] % 2u32).is_zero();
            if single_tail && even && used[last] < c.size && !base_used.is_zero() {
                used[last] += 1u32;
                base_used -= 1u32;
            }
        }
    }

    let mut a = vec![false; selection.s as usize];
    let mut e = vec![0u32; selection.s as usize];
    for c in chosen {
        a[c.k as usize - 1] = true;
        e[c.k as usize - 1] = c.e;
    }
    let size = match mode {
        BaseMode::Plain | BaseMode::Monomial => crate::constructor::counting::gamma0_size(n, m),
        BaseMode::Disjoint => crate::constructor::counting::gamma0_prime_size(n, m),
    };
    let mut families = vec![PlanFamily {
        label: base_label(variant, mode),
        k: 0,
        e: 0,
        size,
        used: base_used.clone(),
        penalty: pow2(p),
        seeded: false,
        tail_degree: if mode.has_degree_member() { (p - m - 1) as i32 } else { -1 },
        tails: Vec::new(),
        members: Vec::new(),
    }];
    for (c, u) in chosen.iter().zip(&used) {
        families.push(PlanFamily {
            label: if variant == Variant::C3 { FamilyLabel::Omega(c.k) } else { FamilyLabel::Gamma(c.k) },
            k: c.k,
            e: c.e,
            size: c.size.clone(),
            used: u.clone(),
            penalty: c.penalty.clone(),
            seeded: matches!(c.source, TailSource::Seeds(_)),
            tail_degree: c.tail_degree,
            tails: Vec::new(),
            members: Vec::new(),
        });
    }
    let mut plan = ConstructionPlan {
        n,
        m,
        variant,
        mode,
        s: selection.s,
        a,
        e,
        pivots,
        c_prime,
        tails: Vec::new(),
        families,
        phi: Vec::new(),
        shuffle: opts.shuffle,
    };
    if opts.materialize {
        if p > MAX_HALF_VARS {
            return Err(Error::Capacity(format!(
                "assignment over 2^{p} blocks is not materialized (limit n/2 <= {MAX_HALF_VARS})"
            )));
        }
        materialize(&mut plan, chosen, seeds, pivot_mask)?;
    }
    plan.validate()?;
    Ok(plan)
}

fn materialize(
    plan: &mut ConstructionPlan,
    chosen: &[crate::constructor::feasibility::Candidate],
    seeds: &[SeedSet],
    pivot_mask: Option<u32>,
) -> Result<()> {
    let p = plan.half();
    let m = plan.m;
    let base_used = to_usize(&plan.families[0].used);
    let base: Vec<Component> = match (plan.mode, pivot_mask, plan.c_prime) {
        (BaseMode::Plain, _, _) => gamma0_iter(p, m).take(base_used).collect(),
        (BaseMode::Disjoint, Some(piv), Some(c)) => {
            gamma0_prime_iter(p, m, piv, degree_member(p, piv, c)?).take(base_used).collect()
        }
        (BaseMode::Monomial, Some(piv), Some(c)) => {
            let g = degree_member(p, piv, c)?;
            std::iter::once(g)
                .chain(
                    masks_with_min_weight(p, m as i64 + 1)
                        .filter(move |&x| x != c)
                        .map(move |x| Component::linear(p, x).expect("mask fits")),
                )
                .take(base_used)
                .collect()
        }
        _ => unreachable!("degree member without pivots"),
    };
    if let Some(g) = base.first().filter(|_| plan.mode.has_degree_member()) {
        let tail = g.tail().expect("degree member has a tail").clone();
        plan.tails.push(tail);
        plan.families[0].tails = vec![0];
    }
    plan.families[0].members = base;

    for (i, c) in chosen.iter().enumerate() {
        let tails: Vec<Arc<Tail>> = match &c.source {
            TailSource::Bent => vec![default_bent_tail(c.k)?],
            TailSource::Seeds(j) => seeds[*j].tails.clone(),
        };
        let mut ids = Vec::with_capacity(tails.len());
        for t in &tails {
            ids.push(match plan.tail_id(t) {
                Some(id) => id,
                None => {
                    plan.tails.push(t.clone());
                    plan.tails.len() - 1
                }
            });
        }
        let fam = &mut plan.families[i + 1];
        let want = to_usize(&fam.used);
        fam.members = partially_linear_iter(p, c.k, m as i64 - c.e as i64 + 1, tails).take(want).collect();
        fam.tails = ids;
    }

    let mut phi: Vec<(u32, u32)> = plan
        .families
        .iter()
        .enumerate()
        .flat_map(|(f, fam)| (0..fam.members.len() as u32).map(move |j| (f as u32, j)))
        .collect();
    if let Some(seed) = plan.shuffle {
        phi.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    }
    plan.phi = phi;
    Ok(())
}

/// Largest tail degree over assigned families, or 1 for an all-linear plan.
pub fn max_member_degree(plan: &ConstructionPlan) -> i32 {
    plan.families
        .iter()
        .filter(|f| !f.used.is_zero())
        .map(|f| f.tail_degree.max(1))
        .max()
        .unwrap_or(1)
}

/// `true` when the count is odd.
pub(crate) fn is_odd(x: &BigUint) -> bool {
    (x % 2u32).is_one()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructor::feasibility::{solve_feasibility, Problem};

    fn plan(n: u32, m: u32, variant: Variant, mode: BaseMode, opts: &PlanOptions) -> ConstructionPlan {
        let pr = Problem {
            n,
            m,
            variant,
            mode,
            seeds: Vec::new(),
            select: None,
        };
        let sel = solve_feasibility(&pr).unwrap();
        assign_phi(n, m, variant, mode, &sel, &[], opts).unwrap()
    }

    #[test]
    fn c1_16_1_counts() {
        let pl = plan(16, 1, Variant::C1, BaseMode::Plain, &PlanOptions::default());
        assert_eq!(pl.families[0].used, BigUint::from(247u32));
        assert_eq!(pl.used_counts(), vec![(2, BigUint::from(9u32))]);
        assert_eq!(pl.a, vec![false, true, false]);
        assert_eq!(pl.phi.len(), 256);
        pl.validate().unwrap();
    }

    #[test]
    fn parity_fix_moves_one_block() {
        // (12,1): deficit 7 from Gamma_1 is already odd
        let pl = plan(12, 1, Variant::C1, BaseMode::Plain, &PlanOptions::default());
        assert_eq!(pl.used_counts(), vec![(1, BigUint::from(7u32))]);
        // (20,1): deficit 11 from Gamma_2, odd; (14,1): deficit 8 from Gamma_1
        let pl = plan(14, 1, Variant::C1, BaseMode::Plain, &PlanOptions::default());
        assert_eq!(pl.used_counts(), vec![(1, BigUint::from(9u32))]);
        assert_eq!(pl.families[0].used, BigUint::from(119u32));
        let off = PlanOptions {
            parity_fix: false,
            ..PlanOptions::default()
        };
        let pl = plan(14, 1, Variant::C1, BaseMode::Plain, &off);
        assert_eq!(pl.used_counts(), vec![(1, BigUint::from(8u32))]);
    }

    #[test]
    fn degree_member_is_assigned_first() {
        for mode in [BaseMode::Monomial, BaseMode::Disjoint] {
            let pl = plan(20, 2, Variant::C2, mode, &PlanOptions::default());
            let g = &pl.families[0].members[0];
            assert_eq!(g.support(), 0b111);
            assert_eq!(g.tail().unwrap().degree(), 7);
            assert!(pl.phi.contains(&(0, 0)));
        }
    }

    #[test]
    fn shuffle_is_a_permutation_and_deterministic() {
        let opts = PlanOptions {
            shuffle: Some(7),
            ..PlanOptions::default()
        };
        let a = plan(16, 1, Variant::C1, BaseMode::Plain, &opts);
        let b = plan(16, 1, Variant::C1, BaseMode::Plain, &opts);
        assert_eq!(a, b);
        let plain = plan(16, 1, Variant::C1, BaseMode::Plain, &PlanOptions::default());
        assert_ne!(a.phi, plain.phi);
        a.validate().unwrap();
    }

    #[test]
    fn count_only_plans_for_large_n() {
        let opts = PlanOptions {
            materialize: false,
            ..PlanOptions::default()
        };
        let pl = plan(500, 10, Variant::C2, BaseMode::Monomial, &opts);
        assert!(!pl.is_materialized());
        assert_eq!(pl.families.len(), 2);
        assert_eq!(pl.families[1].k, 96);
        assert!(plan_requires_capacity(60));
    }

    fn plan_requires_capacity(n: u32) -> bool {
        let pr = Problem {
            n,
            m: 1,
            variant: Variant::C1,
            mode: BaseMode::Plain,
            seeds: Vec::new(),
            select: None,
        };
        let sel = solve_feasibility(&pr).unwrap();
        matches!(
            assign_phi(n, 1, Variant::C1, BaseMode::Plain, &sel, &[], &PlanOptions::default()),
            Err(Error::Capacity(_))
        )
    }
}
