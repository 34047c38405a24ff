//! Selecting which families fill the blocks left over by the base family.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::Zero;

use crate::constructor::counting::{gamma0_prime_size, gamma0_size, omega_k_size, pow2};
use crate::error::{Error, Result};
use crate::families::{gamma_limit, target_bent_degree, SeedFunction, Tail};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Variant {
    C1,
    C2,
    C3,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::C1 => "c1",
            Variant::C2 => "c2",
            Variant::C3 => "c3",
        })
    }
}

impl FromStr for Variant {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "c1" => Ok(Variant::C1),
            "c2" => Ok(Variant::C2),
            "c3" => Ok(Variant::C3),
            _ => Err(format!("unknown variant {s:?} (expected c1, c2 or c3)")),
        }
    }
}

/// How the base family carries the degree-raising member `g'`.
///
/// * `Plain`: no `g'`; the base is all linear masks of weight `> m`.
/// * `Disjoint`: `g'` replaces every mask that is all-ones on the pivots, so
///   the base stays disjoint.
/// * `Monomial`: `g'` replaces only the pivot mask `c'`; the base keeps the
///   other masks and loses disjointness with `g'`'s side lobes.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum BaseMode {
    #[default]
    Plain,
    Disjoint,
    Monomial,
}

impl fmt::Display for BaseMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BaseMode::Plain => "plain",
            BaseMode::Disjoint => "disjoint",
            BaseMode::Monomial => "monomial",
        })
    }
}

impl FromStr for BaseMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "plain" => Ok(BaseMode::Plain),
            "disjoint" => Ok(BaseMode::Disjoint),
            "monomial" => Ok(BaseMode::Monomial),
            _ => Err(format!("unknown base mode {s:?}")),
        }
    }
}

impl BaseMode {
    pub fn has_degree_member(self) -> bool {
        self != BaseMode::Plain
    }
}

/// Seed functions for one tail width `2k`, all of order at least `e - 1`.
#[derive(Clone, Debug)]
pub struct SeedSet {
    pub k: u32,
    pub e: u32,
    pub tails: Vec<Arc<Tail>>,
}

impl SeedSet {
    pub fn max_abs(&self) -> u64 {
        self.tails.iter().map(|t| t.max_abs_walsh()).max().unwrap_or(0)
    }

    pub fn degree(&self) -> i32 {
        self.tails.iter().map(|t| t.degree()).max().unwrap_or(-1)
    }
}

/// Group verified seeds by width and pick the largest admissible order:
/// `e = min(declared m + 1, m + 1, k + 1)` over each group.
pub fn seed_sets(seeds: &[SeedFunction], m: u32) -> Result<Vec<SeedSet>> {
    let mut sets: Vec<SeedSet> = Vec::new();
    for s in seeds {
        let n = s.table.vars();
        if n % 2 == 1 || n == 0 {
            return Err(Error::InvalidArgument(format!(
                "seed on {n} variables: tails need an even width"
            )));
        }
        let k = n / 2;
        let order = (s.declared.m + 1).max(0) as u32;
        let tail = s.to_tail()?;
        match sets.iter_mut().find(|x| x.k == k) {
            Some(set) => {
                set.e = set.e.min(order);
                set.tails.push(tail);
            }
            None => sets.push(SeedSet {
                k,
                e: order,
                tails: vec![tail],
            }),
        }
    }
    for set in &mut sets {
        set.e = set.e.min(m + 1).min(set.k + 1);
    }
    sets.sort_by_key(|s| s.k);
    Ok(sets)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TailSource {
    /// The shared Maiorana–McFarland tail of degree `max(k, 2)`.
    Bent,
    /// Index into the seed sets.
    Seeds(usize),
}

/// One family that may be added on top of the base.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Candidate {
    pub k: u32,
    pub e: u32,
    pub source: TailSource,
    pub size: BigUint,
    /// `max |W|` over members: `2^t * max |W_h|`.
    pub penalty: BigUint,
    pub tail_degree: i32,
}

#[derive(Clone, Debug)]
pub struct Problem {
    pub n: u32,
    pub m: u32,
    pub variant: Variant,
    pub mode: BaseMode,
    pub seeds: Vec<SeedSet>,
    /// Forced family widths; `None` lets the solver choose.
    pub select: Option<Vec<u32>>,
}

#[derive(Clone, Debug)]
pub struct Selection {
    pub base_size: BigUint,
    pub target: BigUint,
    /// Largest `k` a selector entry may refer to.
    pub s: u32,
    pub chosen: Vec<Candidate>,
    pub penalty: BigUint,
    /// False when branch-and-bound hit its node budget.
    pub optimal: bool,
}

impl Selection {
    pub fn deficit(&self) -> BigUint {
        if self.target > self.base_size {
            &self.target - &self.base_size
        } else {
            BigUint::zero()
        }
    }

    /// Selector bits `a_1..a_s`.
    pub fn selector(&self) -> Vec<bool> {
        (1..=self.s).map(|k| self.chosen.iter().any(|c| c.k == k)).collect()
    }

    /// Orders `e_1..e_s` (zero where unselected).
    pub fn orders(&self) -> Vec<u32> {
        (1..=self.s)
            .map(|k| self.chosen.iter().find(|c| c.k == k).map_or(0, |c| c.e))
            .collect()
    }
}

fn base_size(n: u32, m: u32, mode: BaseMode) -> BigUint {
    match mode {
        BaseMode::Disjoint => gamma0_prime_size(n, m),
        _ => gamma0_size(n, m),
    }
}

/// Largest selectable `k` for a variant.
pub fn selector_len(n: u32, m: u32, variant: Variant) -> u32 {
    match variant {
        Variant::C1 | Variant::C2 => gamma_limit(n, m),
        Variant::C3 => n / 4,
    }
}

/// Candidate families, per `k` (index `k - 1`).
pub fn candidates(problem: &Problem) -> Vec<Vec<Candidate>> {
    let (n, m) = (problem.n, problem.m);
    let p = n / 2;
    let s = selector_len(n, m, problem.variant);
    let mut out = vec![Vec::new(); s as usize];
    for k in 1..=s {
        let slot = &mut out[k as usize - 1];
        let size = omega_k_size(n, m, k, 0);
        if !size.is_zero() {
            slot.push(Candidate {
                k,
                e: 0,
                source: TailSource::Bent,
                size,
                penalty: pow2(p - k),
                tail_degree: target_bent_degree(k) as i32,
            });
        }
        if problem.variant == Variant::C3 {
            for (i, set) in problem.seeds.iter().enumerate().filter(|(_, x)| x.k == k) {
                let size = omega_k_size(n, m, k, set.e);
                if !size.is_zero() {
                    slot.push(Candidate {
                        k,
                        e: set.e,
                        source: TailSource::Seeds(i),
                        size,
                        penalty: pow2(p - 2 * k) * set.max_abs(),
                        tail_degree: set.degree(),
                    });
                }
            }
        }
    }
    out
}

/// Lexicographic greedy: `a_k = 0` whenever later families still cover the
/// deficit. Exact when penalties are distinct powers of two decreasing in `k`.
pub fn greedy_select(deficit: &BigUint, sizes: &[BigUint]) -> Option<Vec<bool>> {
    let mut suffix = vec![BigUint::zero(); sizes.len() + 1];
    for i in (0..sizes.len()).rev() {
        suffix[i] = &suffix[i + 1] + &sizes[i];
    }
    if &suffix[0] < deficit {
        return None;
    }
    let mut have = BigUint::zero();
    let mut out = Vec::with_capacity(sizes.len());
    for i in 0..sizes.len() {
        if &have >= deficit || &have + &suffix[i + 1] >= *deficit {
            out.push(false);
        } else {
            out.push(true);
            have += &sizes[i];
        }
    }
    Some(out)
}

const NODE_BUDGET: u64 = 5_000_000;

struct Search<'a> {
    options: &'a [Vec<Candidate>],
    deficit: &'a BigUint,
    /// `suffix[i]`: largest total size available from slots `i..`.
    suffix: Vec<BigUint>,
    best: Option<(BigUint, Vec<Option<usize>>)>,
    current: Vec<Option<usize>>,
    nodes: u64,
}

impl Search<'_> {
    fn run(&mut self, i: usize, have: &BigUint, pen: &BigUint) {
        self.nodes += 1;
        if self.nodes > NODE_BUDGET {
            return;
        }
        if let Some((bp, _)) = &self.best {
            if pen >= bp {
                return;
            }
        }
        if have >= self.deficit {
            let mut pick = self.current.clone();
            pick.resize(self.options.len(), None);
            self.best = Some((pen.clone(), pick));
            return;
        }
        if i == self.options.len() || have + &self.suffix[i] < *self.deficit {
            return;
        }
        self.current.push(None);
        self.run(i + 1, have, pen);
        for j in 0..self.options[i].len() {
            *self.current.last_mut().unwrap() = Some(j);
            let c = &self.options[i][j];
            self.run(i + 1, &(have + &c.size), &(pen + &c.penalty));
        }
        self.current.pop();
    }
}

/// Minimum-penalty choice of at most one option per slot covering `deficit`.
/// Returns the picks and whether the search completed.
pub fn branch_and_bound(deficit: &BigUint, options: &[Vec<Candidate>]) -> Option<(Vec<Option<usize>>, bool)> {
    let mut suffix = vec![BigUint::zero(); options.len() + 1];
    for i in (0..options.len()).rev() {
        let most = options[i].iter().map(|c| c.size.clone()).max().unwrap_or_default();
        suffix[i] = &suffix[i + 1] + most;
    }
    let mut search = Search {
        options,
        deficit,
        suffix,
        best: None,
        current: Vec::new(),
        nodes: 0,
    };
    search.run(0, &BigUint::zero(), &BigUint::zero());
    let complete = search.nodes <= NODE_BUDGET;
    search.best.map(|(_, pick)| (pick, complete))
}

fn describe_shortfall(problem: &Problem, base: &BigUint, avail: &[&Candidate], target: &BigUint) -> String {
    let total: BigUint = avail.iter().map(|c| c.size.clone()).sum::<BigUint>() + base;
    let base_name = match (problem.variant, problem.mode) {
        (Variant::C3, BaseMode::Disjoint) => "|O0'|",
        (Variant::C3, _) => "|O0|",
        (_, BaseMode::Disjoint) => "|G0'|",
        _ => "|G0|",
    };
    let fam = if problem.variant == Variant::C3 { "O" } else { "G" };
    let mut terms = vec![format!("{base_name}={base}")];
    terms.extend(avail.iter().map(|c| format!("|{fam}{}|={}", c.k, c.size)));
    format!(
        "n={} m={} {} ({}): {} = {total} < 2^{} = {target}",
        problem.n,
        problem.m,
        problem.variant,
        problem.mode,
        terms.join(" + "),
        problem.n / 2
    )
}

/// Pick the selector vector (and orders) for a variant.
pub fn solve_feasibility(problem: &Problem) -> Result<Selection> {
    let (n, m) = (problem.n, problem.m);
    if n % 2 == 1 || n < 4 {
        return Err(Error::InvalidArgument(format!("n must be even and at least 4, got {n}")));
    }
    if problem.mode.has_degree_member() && m + 1 >= n / 2 {
        return Err(Error::Infeasible(format!(
            "degree member needs m + 1 < n/2 (m={m}, n/2={})",
            n / 2
        )));
    }
    if problem.variant == Variant::C2 && problem.mode == BaseMode::Plain {
        return Err(Error::InvalidArgument("construction 2 needs a disjoint or monomial base".into()));
    }
    let base = base_size(n, m, problem.mode);
    let target = pow2(n / 2);
    let s = selector_len(n, m, problem.variant);
    let options = candidates(problem);
    let deficit = if target > base { &target - &base } else { BigUint::zero() };
    let finish = |chosen: Vec<Candidate>, optimal: bool| {
        let penalty = chosen.iter().map(|c| c.penalty.clone()).sum();
        Selection {
            base_size: base.clone(),
            target: target.clone(),
            s,
            chosen,
            penalty,
            optimal,
        }
    };
    let all: Vec<&Candidate> = options.iter().filter_map(|o| o.iter().max_by_key(|c| &c.size)).collect();

    if let Some(forced) = &problem.select {
        let mut chosen: Vec<Candidate> = Vec::new();
        let mut ks = forced.clone();
        ks.sort_unstable();
        ks.dedup();
        for k in ks {
            if k == 0 || k > s {
                return Err(Error::InvalidArgument(format!("selected k={k} outside 1..={s}")));
            }
            let slot = &options[k as usize - 1];
            let pick = slot
                .iter()
                .find(|c| matches!(c.source, TailSource::Seeds(_)))
                .or_else(|| slot.first())
                .ok_or_else(|| Error::InvalidArgument(format!("family k={k} is empty for n={n}, m={m}")))?;
            chosen.push(pick.clone());
        }
        let total: BigUint = chosen.iter().map(|c| c.size.clone()).sum();
        if total < deficit {
            let refs: Vec<&Candidate> = chosen.iter().collect();
            return Err(Error::Infeasible(describe_shortfall(problem, &base, &refs, &target)));
        }
        return Ok(finish(chosen, true));
    }

    if problem.variant == Variant::C3 {
        let (pick, complete) = branch_and_bound(&deficit, &options)
            .ok_or_else(|| Error::Infeasible(describe_shortfall(problem, &base, &all, &target)))?;
        let chosen = pick
            .iter()
            .enumerate()
            .filter_map(|(i, j)| j.map(|j| options[i][j].clone()))
            .collect();
        return Ok(finish(chosen, complete));
    }

    let sizes: Vec<BigUint> = options
        .iter()
        .map(|o| o.first().map_or_else(BigUint::zero, |c| c.size.clone()))
        .collect();
    let bits = greedy_select(&deficit, &sizes)
        .ok_or_else(|| Error::Infeasible(describe_shortfall(problem, &base, &all, &target)))?;
    let chosen = bits
        .iter()
        .zip(&options)
        .filter(|(b, _)| **b)
        .map(|(_, o)| o[0].clone())
        .collect();
    Ok(finish(chosen, true))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn problem(n: u32, m: u32, variant: Variant, mode: BaseMode) -> Problem {
        Problem {
            n,
            m,
            variant,
            mode,
            seeds: Vec::new(),
            select: None,
        }
    }

    fn selected(sel: &Selection) -> Vec<u32> {
        sel.chosen.iter().map(|c| c.k).collect()
    }

    #[test]
    fn example_selections() {
        let sel = solve_feasibility(&problem(16, 1, Variant::C1, BaseMode::Plain)).unwrap();
        assert_eq!(sel.selector(), vec![false, true, false]);
        assert_eq!(sel.deficit(), BigUint::from(9u32));
        assert_eq!(sel.penalty, pow2(6));

        let sel = solve_feasibility(&problem(30, 5, Variant::C2, BaseMode::Disjoint)).unwrap();
        assert_eq!(sel.selector(), vec![true, false, false, false]);
        assert_eq!(sel.deficit(), BigUint::from(5455u32));

        let sel = solve_feasibility(&problem(12, 1, Variant::C1, BaseMode::Plain)).unwrap();
        assert_eq!(sel.selector(), vec![true, false]);
        assert_eq!(selected(&solve_feasibility(&problem(24, 1, Variant::C1, BaseMode::Plain)).unwrap()), vec![3]);
    }

    #[test]
    fn infeasible_cases_report_the_inequality() {
        let err = solve_feasibility(&problem(12, 5, Variant::C1, BaseMode::Plain)).unwrap_err();
        match err {
            Error::Infeasible(msg) => assert!(msg.contains("|G0|=1") && msg.contains("< 2^6 = 64"), "{msg}"),
            e => panic!("{e}"),
        }
        // the disjoint base is too small at (12,1) and (16,1)
        let err = solve_feasibility(&problem(12, 1, Variant::C2, BaseMode::Disjoint)).unwrap_err();
        assert!(err.to_string().contains("= 54 < 2^6"), "{err}");
        assert!(solve_feasibility(&problem(16, 1, Variant::C2, BaseMode::Disjoint)).is_err());
        assert!(solve_feasibility(&problem(16, 1, Variant::C2, BaseMode::Monomial)).is_ok());
    }

    #[test]
    fn forced_selection() {
        let mut pr = problem(16, 1, Variant::C1, BaseMode::Plain);
        pr.select = Some(vec![1, 3]);
        let sel = solve_feasibility(&pr).unwrap();
        assert_eq!(selected(&sel), vec![1, 3]);
        pr.select = Some(vec![3]);
        assert!(matches!(solve_feasibility(&pr), Err(Error::Infeasible(_))));
        pr.select = Some(vec![9]);
        assert!(matches!(solve_feasibility(&pr), Err(Error::InvalidArgument(_))));
    }

    fn exhaustive(deficit: &BigUint, sizes: &[BigUint], pens: &[BigUint]) -> Option<BigUint> {
        let s = sizes.len();
        (0u64..1 << s)
            .filter(|v| {
                let total: BigUint = (0..s).filter(|i| v >> i & 1 == 1).map(|i| sizes[i].clone()).sum();
                &total >= deficit
            })
            .map(|v| (0..s).filter(|i| v >> i & 1 == 1).map(|i| pens[i].clone()).sum::<BigUint>())
            .min()
    }

    #[test]
    fn greedy_matches_exhaustive_minimum() {
        for n in (12..=40).step_by(2) {
            for m in 1..=5 {
                let pr = problem(n, m, Variant::C1, BaseMode::Plain);
                let opts = candidates(&pr);
                let sizes: Vec<BigUint> = opts.iter().map(|o| o.first().map_or_else(BigUint::zero, |c| c.size.clone())).collect();
                let pens: Vec<BigUint> = (1..=sizes.len() as u32).map(|k| pow2(n / 2 - k)).collect();
                let deficit = pow2(n / 2) - gamma0_size(n, m);
                let best = exhaustive(&deficit, &sizes, &pens);
                match solve_feasibility(&pr) {
                    Ok(sel) => assert_eq!(Some(sel.penalty), best, "n={n} m={m}"),
                    Err(_) => assert_eq!(best, None, "n={n} m={m}"),
                }
            }
        }
    }

    #[test]
    fn branch_and_bound_matches_greedy_on_bent_options() {
        for n in (12..=36).step_by(2) {
            for m in 1..=4 {
                let c1 = solve_feasibility(&problem(n, m, Variant::C1, BaseMode::Plain));
                let c3 = solve_feasibility(&problem(n, m, Variant::C3, BaseMode::Plain));
                if let (Ok(a), Ok(b)) = (&c1, &c3) {
                    assert!(b.penalty <= a.penalty, "n={n} m={m}");
                    assert!(b.optimal);
                }
                if c3.is_err() {
                    assert!(c1.is_err());
                }
            }
        }
    }

    #[test]
    fn large_parameters_count_exactly() {
        let sel = solve_feasibility(&problem(500, 10, Variant::C2, BaseMode::Monomial)).unwrap();
        assert_eq!(selected(&sel), vec![96]);
        let sel = solve_feasibility(&problem(10000, 2475, Variant::C2, BaseMode::Disjoint)).unwrap();
        assert_eq!(sel.chosen.len(), 3);
        assert_eq!(sel.base_size.bits(), 5000);
    }

    proptest! {
        #[test]
        fn feasibility_is_monotone_in_m(half in 6u32..40, m in 1u32..12) {
            let n = 2 * half;
            let hi = solve_feasibility(&problem(n, m, Variant::C1, BaseMode::Plain));
            if hi.is_ok() {
                prop_assert!(solve_feasibility(&problem(n, m - 1, Variant::C1, BaseMode::Plain)).is_ok());
            }
        }

        #[test]
        fn greedy_covers_deficit(half in 6u32..60, m in 0u32..10) {
            let n = 2 * half;
            if let Ok(sel) = solve_feasibility(&problem(n, m, Variant::C1, BaseMode::Plain)) {
                let total: BigUint = sel.chosen.iter().map(|c| c.size.clone()).sum();
                prop_assert!(total >= sel.deficit());
            }
        }
    }
}
