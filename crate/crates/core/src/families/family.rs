//! Generators for the component families.
//!
//! All families live on `p = n/2` variables. Members are listed in increasing
//! mask order; every generator also exists as an iterator so callers that
//! need only a prefix never materialize the whole family.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::families::bent::{mm_bent, target_bent_degree};
use crate::families::component::{full_mask, Component, Tail, TailKind};
use crate::bf::TruthTable;
use crate::error::{Error, Result};

/// Largest half-width for which families are materialized.
pub const MAX_HALF_VARS: u32 = 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FamilyLabel {
    Gamma0,
    Gamma0Prime,
    Gamma(u32),
    Omega0,
    Omega0Prime,
    Omega(u32),
    Custom,
}

impl fmt::Display for FamilyLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilyLabel::Gamma0 => write!(f, "G0"),
            FamilyLabel::Gamma0Prime => write!(f, "G0'"),
            FamilyLabel::Gamma(k) => write!(f, "G{k}"),
            FamilyLabel::Omega0 => write!(f, "O0"),
            FamilyLabel::Omega0Prime => write!(f, "O0'"),
            FamilyLabel::Omega(k) => write!(f, "O{k}"),
            FamilyLabel::Custom => write!(f, "custom"),
        }
    }
}

impl FromStr for FamilyLabel {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "G0" => Ok(FamilyLabel::Gamma0),
            "G0'" => Ok(FamilyLabel::Gamma0Prime),
            "O0" => Ok(FamilyLabel::Omega0),
            "O0'" => Ok(FamilyLabel::Omega0Prime),
            "custom" => Ok(FamilyLabel::Custom),
            _ => {
                let (ctor, rest): (fn(u32) -> FamilyLabel, &str) = if let Some(r) = s.strip_prefix('G') {
                    (FamilyLabel::Gamma, r)
                } else if let Some(r) = s.strip_prefix('O') {
                    (FamilyLabel::Omega, r)
                } else {
                    return Err(format!("unknown family label {s:?}"));
                };
                match rest.parse::<u32>() {
                    Ok(k) if k > 0 => Ok(ctor(k)),
                    _ => Err(format!("unknown family label {s:?}")),
                }
            }
        }
    }
}

impl FamilyLabel {
    /// Tail half-width `k` (0 for the linear families).
    pub fn k(self) -> u32 {
        match self {
            FamilyLabel::Gamma(k) | FamilyLabel::Omega(k) => k,
            _ => 0,
        }
    }

    pub fn is_base(self) -> bool {
        matches!(
            self,
            FamilyLabel::Gamma0 | FamilyLabel::Gamma0Prime | FamilyLabel::Omega0 | FamilyLabel::Omega0Prime
        )
    }
}

/// Whether the `n >= 12` requirement of the constructions is enforced.
/// `Relaxed` admits `n >= 8`, below the standard parameter range.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Regime {
    #[default]
    Standard,
    Relaxed,
}

impl Regime {
    pub fn min_n(self) -> u32 {
        match self {
            Regime::Standard => 12,
            Regime::Relaxed => 8,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentFamily {
    pub label: FamilyLabel,
    /// Member width, `n/2`.
    pub vars: u32,
    pub declared_resiliency: i32,
    pub members: Vec<Component>,
}

impl ComponentFamily {
    /// An arbitrary set of components of equal width.
    pub fn custom(members: Vec<Component>, declared_resiliency: i32) -> Result<Self> {
        let vars = members.first().map_or(1, |c| c.vars());
        if members.iter().any(|c| c.vars() != vars) {
            return Err(Error::Shape("family members differ in width".into()));
        }
        Ok(ComponentFamily {
            label: FamilyLabel::Custom,
            vars,
            declared_resiliency,
            members,
        })
    }

    pub fn k(&self) -> u32 {
        self.label.k()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// `max |W_g(alpha)|` over members and points.
    pub fn max_component_spectrum(&self) -> u64 {
        self.members.iter().map(Component::max_abs_walsh).max().unwrap_or(0)
    }
}

pub(crate) fn check_n(n: u32, regime: Regime) -> Result<u32> {
    if n % 2 == 1 {
        return Err(Error::InvalidArgument(format!("n must be even, got {n}")));
    }
    if n < regime.min_n() {
        return Err(Error::InvalidArgument(format!(
            "n={n} below {} ({})",
            regime.min_n(),
            match regime {
                Regime::Standard => "pass the relaxed regime to go down to 8",
                Regime::Relaxed => "relaxed regime",
            }
        )));
    }
    if n / 2 > MAX_HALF_VARS {
        return Err(Error::Capacity(format!(
            "families on n/2={} variables are not materialized (limit {MAX_HALF_VARS})",
            n / 2
        )));
    }
    Ok(n / 2)
}

/// Largest `k` for Construction 1/2: `floor((n - 2m - 2) / 4)`, or 0.
pub fn gamma_limit(n: u32, m: u32) -> u32 {
    (n as i64 - 2 * m as i64 - 2).max(0) as u32 / 4
}

/// Masks on `t` bits with weight at least `min_weight`, ascending.
pub(crate) fn masks_with_min_weight(t: u32, min_weight: i64) -> impl Iterator<Item = u32> {
    (0..=full_mask(t)).filter(move |c| c.count_ones() as i64 >= min_weight)
}

/// Default shared tail for the `k`-th Gamma family.
pub fn default_bent_tail(k: u32) -> Result<Arc<Tail>> {
    Tail::new(mm_bent(k, target_bent_degree(k))?, TailKind::Bent)
}

pub(crate) fn gamma0_iter(p: u32, m: u32) -> impl Iterator<Item = Component> {
    masks_with_min_weight(p, m as i64 + 1).map(move |c| Component::linear(p, c).expect("mask fits"))
}

/// All linear functions `c . X` on `n/2` variables with `wt(c) > m`.
pub fn gamma0(n: u32, m: u32, regime: Regime) -> Result<ComponentFamily> {
    let p = check_n(n, regime)?;
    Ok(ComponentFamily {
        label: FamilyLabel::Gamma0,
        vars: p,
        declared_resiliency: m as i32,
        members: gamma0_iter(p, m).collect(),
    })
}

fn check_bent_tails(k: u32, tails: &[Arc<Tail>]) -> Result<()> {
    if tails.is_empty() {
        return Err(Error::InvalidArgument("empty tail set".into()));
    }
    let want = target_bent_degree(k) as i32;
    for (i, h) in tails.iter().enumerate() {
        if h.kind() != TailKind::Bent || h.vars() != 2 * k || h.degree() != want {
            return Err(Error::Verification(format!(
                "tail {i} is not a {}-variable bent function of degree {want}",
                2 * k
            )));
        }
    }
    Ok(())
}

pub(crate) fn partially_linear_iter(
    p: u32,
    k: u32,
    min_weight: i64,
    tails: Vec<Arc<Tail>>,
) -> impl Iterator<Item = Component> {
    let t = p - 2 * k;
    masks_with_min_weight(t, min_weight)
        .enumerate()
        .map(move |(i, c)| {
            Component::partially_linear(t, c, tails[i % tails.len()].clone()).expect("dimensions fit")
        })
}

/// `c . X'_t xor h_c(X''_2k)` with `wt(c) > m`, sharing one bent tail.
pub fn gamma_k(n: u32, m: u32, k: u32, regime: Regime) -> Result<ComponentFamily> {
    gamma_k_with_tails(n, m, k, &[default_bent_tail(k)?], regime)
}

/// As [`gamma_k`], with member `i` taking `tails[i % tails.len()]`.
pub fn gamma_k_with_tails(
    n: u32,
    m: u32,
    k: u32,
    tails: &[Arc<Tail>],
    regime: Regime,
) -> Result<ComponentFamily> {
    let p = check_n(n, regime)?;
    let s = gamma_limit(n, m);
    if k == 0 || k > s {
        return Err(Error::InvalidArgument(format!(
            "k={k} outside 1..={s} for n={n}, m={m}"
        )));
    }
    check_bent_tails(k, tails)?;
    Ok(ComponentFamily {
        label: FamilyLabel::Gamma(k),
        vars: p,
        declared_resiliency: m as i32,
        members: partially_linear_iter(p, k, m as i64 + 1, tails.to_vec()).collect(),
    })
}

/// Mask with bits set at the given 1-based coordinates.
pub fn coords_to_mask(p: u32, coords: &[u32]) -> Result<u32> {
    let mut mask = 0u32;
    for &c in coords {
        if c == 0 || c > p {
            return Err(Error::InvalidArgument(format!("coordinate {c} outside 1..={p}")));
        }
        if mask & (1 << (c - 1)) != 0 {
            return Err(Error::InvalidArgument(format!("coordinate {c} repeated")));
        }
        mask |= 1 << (c - 1);
    }
    Ok(mask)
}

/// `g'(X) = c' . X xor prod_{j not a pivot} x_j`, written as a component
/// whose linear part is the pivot coordinates.
pub fn degree_member(p: u32, pivots: u32, c_prime: u32) -> Result<Component> {
    if pivots & !full_mask(p) != 0 || c_prime & !full_mask(p) != 0 {
        return Err(Error::Shape("pivots or c' do not fit n/2 variables".into()));
    }
    if c_prime & pivots != pivots {
        return Err(Error::InvalidArgument(format!(
            "c'={c_prime:#x} is not all-ones on the pivots {pivots:#x}"
        )));
    }
    let rest = full_mask(p) & !pivots;
    let q = rest.count_ones();
    if q == 0 {
        return Err(Error::InvalidArgument("pivots cover every coordinate".into()));
    }
    let lin = crate::families::component::compress(c_prime, rest);
    let all = full_mask(q) as usize;
    let tail = TruthTable::from_fn(q, |z| ((lin as usize & z).count_ones() & 1 == 1) ^ (z == all))?;
    Component::with_support(p, pivots, pivots, Some(Tail::new(tail, TailKind::Plain)?))
}

pub(crate) fn gamma0_prime_iter(p: u32, m: u32, pivots: u32, g_prime: Component) -> impl Iterator<Item = Component> {
    std::iter::once(g_prime).chain(
        masks_with_min_weight(p, m as i64 + 1)
            .filter(move |c| c & pivots != pivots)
            .map(move |c| Component::linear(p, c).expect("mask fits")),
    )
}

pub(crate) fn check_pivots(p: u32, m: u32, pivots: &[u32]) -> Result<u32> {
    if pivots.len() != m as usize + 1 {
        return Err(Error::InvalidArgument(format!(
            "need exactly m+1={} pivot coordinates, got {}",
            m + 1,
            pivots.len()
        )));
    }
    coords_to_mask(p, pivots)
}

/// `{g'} ∪ {c . X : wt(c) > m, c not all-ones on the pivots}`.
pub fn gamma0_prime(
    n: u32,
    m: u32,
    pivots: &[u32],
    c_prime: u32,
    regime: Regime,
) -> Result<ComponentFamily> {
    let p = check_n(n, regime)?;
    let piv = check_pivots(p, m, pivots)?;
    if c_prime.count_ones() <= m || c_prime & piv != piv {
        return Err(Error::InvalidArgument(format!(
            "c'={c_prime:#x} is not in S (weight > {m}, all-ones on pivots)"
        )));
    }
    let g = degree_member(p, piv, c_prime)?;
    Ok(ComponentFamily {
        label: FamilyLabel::Gamma0Prime,
        vars: p,
        declared_resiliency: m as i32,
        members: gamma0_prime_iter(p, m, piv, g).collect(),
    })
}

/// Check an `Omega_k` seed set: nonlinear functions on `2k` variables with
/// resiliency at least `e - 1`.
pub(crate) fn check_seeds(k: u32, e: u32, seeds: &[Arc<Tail>]) -> Result<()> {
    if seeds.is_empty() {
        return Err(Error::InvalidArgument(format!("no seed functions for k={k}")));
    }
    for (i, h) in seeds.iter().enumerate() {
        if h.vars() != 2 * k {
            return Err(Error::Verification(format!(
                "seed {i} has {} variables, expected {}",
                h.vars(),
                2 * k
            )));
        }
        if h.degree() < 2 {
            return Err(Error::Verification(format!("seed {i} is affine")));
        }
        if h.resiliency() < e as i32 - 1 {
            return Err(Error::Verification(format!(
                "seed {i} has resiliency {}, need at least {}",
                h.resiliency(),
                e as i32 - 1
            )));
        }
    }
    Ok(())
}

pub fn check_order(m: u32, k: u32, e: u32) -> Result<()> {
    if e > m + 1 || e > k + 1 {
        return Err(Error::InvalidArgument(format!(
            "e_{k}={e} outside 0..={}",
            (m + 1).min(k + 1)
        )));
    }
    Ok(())
}

/// `c . X'_t xor h_c(X''_2k)` with `wt(c) > m - e` and `h_c` drawn from `seeds`.
pub fn omega_k(
    n: u32,
    m: u32,
    k: u32,
    e: u32,
    seeds: &[Arc<Tail>],
    regime: Regime,
) -> Result<ComponentFamily> {
    let p = check_n(n, regime)?;
    if k == 0 || k > n / 4 {
        return Err(Error::InvalidArgument(format!("k={k} outside 1..={}", n / 4)));
    }
    check_order(m, k, e)?;
    check_seeds(k, e, seeds)?;
    let mut members: Vec<Component> =
        partially_linear_iter(p, k, m as i64 - e as i64 + 1, seeds.to_vec()).collect();
    if p == 2 * k {
        // Only the empty prefix exists, so a single member keeps the family disjoint.
        members.truncate(1);
    }
    Ok(ComponentFamily {
        label: FamilyLabel::Omega(k),
        vars: p,
        declared_resiliency: m as i32,
        members,
    })
}

/// `Omega_0` is `Gamma_0` under its Construction-3 name.
pub fn omega0(n: u32, m: u32, regime: Regime) -> Result<ComponentFamily> {
    let mut f = gamma0(n, m, regime)?;
    f.label = FamilyLabel::Omega0;
    Ok(f)
}
