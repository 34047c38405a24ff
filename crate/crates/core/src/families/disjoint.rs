//! Disjoint-spectra verification.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::bf::fast_walsh;
use crate::families::component::{expand, Component};
use crate::families::family::ComponentFamily;

/// Widest members checked by transforming every expanded member.
pub const EXHAUSTIVE_MAX_VARS: u32 = 14;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum DisjointMode {
    /// Exhaustive up to [`EXHAUSTIVE_MAX_VARS`], symbolic above.
    #[default]
    Auto,
    /// Measure every member's spectrum and look for a shared nonzero point.
    Exhaustive,
    /// Two members are disjoint when their linear parts disagree on a
    /// coordinate both treat linearly.
    Symbolic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DisjointOutcome {
    Disjoint,
    /// Members `i < j` are both nonzero at `alpha`.
    Overlap { i: usize, j: usize, alpha: u32 },
    /// The symbolic test cannot separate members `i < j`.
    Unproven { i: usize, j: usize },
}

impl DisjointOutcome {
    pub fn is_disjoint(&self) -> bool {
        matches!(self, DisjointOutcome::Disjoint)
    }
}

/// Check a family, exhaustively when its members are narrow enough.
pub fn verify_disjoint(fam: &ComponentFamily) -> DisjointOutcome {
    verify_members(&fam.members, DisjointMode::Auto)
}

/// Check an arbitrary member list (members must share one width).
pub fn verify_members(members: &[Component], mode: DisjointMode) -> DisjointOutcome {
    let p = members.first().map_or(0, Component::vars);
    let exhaustive = match mode {
        DisjointMode::Auto => p <= EXHAUSTIVE_MAX_VARS,
        DisjointMode::Exhaustive => true,
        DisjointMode::Symbolic => false,
    };
    if exhaustive {
        exhaustive_check(members)
    } else {
        symbolic_check(members)
    }
}

fn exhaustive_check(members: &[Component]) -> DisjointOutcome {
    if members.is_empty() {
        return DisjointOutcome::Disjoint;
    }
    let p = members[0].vars();
    let supports: Vec<Vec<u32>> = members
        .par_iter()
        .map(|g| {
            let table = expand(g).expect("member width within capacity");
            let s = fast_walsh(&table).expect("member width within capacity");
            s.values()
                .iter()
                .enumerate()
                .filter(|(_, &v)| v != 0)
                .map(|(a, _)| a as u32)
                .collect()
        })
        .collect();
    let mut owner = vec![u32::MAX; 1usize << p];
    for (j, pts) in supports.iter().enumerate() {
        for &a in pts {
            let o = &mut owner[a as usize];
            if *o != u32::MAX {
                return DisjointOutcome::Overlap {
                    i: *o as usize,
                    j,
                    alpha: a,
                };
            }
            *o = j as u32;
        }
    }
    DisjointOutcome::Disjoint
}

fn symbolic_check(members: &[Component]) -> DisjointOutcome {
    // Members grouped by support, keeping first occurrence order.
    let mut groups: Vec<(u32, Vec<usize>)> = Vec::new();
    let mut index: HashMap<u32, usize> = HashMap::new();
    for (i, g) in members.iter().enumerate() {
        let gi = *index.entry(g.support()).or_insert_with(|| {
            groups.push((g.support(), Vec::new()));
            groups.len() - 1
        });
        groups[gi].1.push(i);
    }
    let mut worst: Option<(usize, usize)> = None;
    let mut note = |i: usize, j: usize| {
        let pair = (i.min(j), i.max(j));
        if worst.is_none_or(|w| pair < w) {
            worst = Some(pair);
        }
    };
    for (x, (sx, ix)) in groups.iter().enumerate() {
        for (sy, iy) in groups.iter().skip(x) {
            let common = sx & sy;
            let mut seen: HashMap<u32, usize> = HashMap::with_capacity(ix.len());
            if sx == sy {
                for &i in ix {
                    if let Some(&prev) = seen.get(&(members[i].mask() & common)) {
                        note(prev, i);
                    } else {
                        seen.insert(members[i].mask() & common, i);
                    }
                }
            } else {
                for &i in ix {
                    seen.entry(members[i].mask() & common).or_insert(i);
                }
                for &j in iy {
                    if let Some(&i) = seen.get(&(members[j].mask() & common)) {
                        note(i, j);
                    }
                }
            }
        }
    }
    match worst {
        None => DisjointOutcome::Disjoint,
        Some((i, j)) => DisjointOutcome::Unproven { i, j },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bf::TruthTable;
    use crate::families::component::{Tail, TailKind};
    use crate::families::family::{gamma0, gamma0_prime, gamma_k, ComponentFamily, Regime};

    #[test]
    fn gamma_family_is_disjoint_both_ways() {
        let fam = gamma_k(16, 1, 2, Regime::Standard).unwrap();
        assert!(verify_disjoint(&fam).is_disjoint());
        assert!(verify_members(&fam.members, DisjointMode::Symbolic).is_disjoint());
        let fam = gamma0_prime(12, 1, &[1, 2], 0b11, Regime::Standard).unwrap();
        assert!(verify_members(&fam.members, DisjointMode::Exhaustive).is_disjoint());
        assert!(verify_members(&fam.members, DisjointMode::Symbolic).is_disjoint());
    }

    #[test]
    fn overlapping_pair_has_witness() {
        let x1 = Component::linear(3, 0b001).unwrap();
        let x2x3 = Tail::new(
            TruthTable::from_bits(2, &[false, false, false, true]).unwrap(),
            TailKind::Bent,
        )
        .unwrap();
        let g = Component::with_support(3, 0b001, 0b001, Some(x2x3)).unwrap();
        let fam = ComponentFamily::custom(vec![x1, g], 0).unwrap();
        assert_eq!(
            verify_disjoint(&fam),
            DisjointOutcome::Overlap { i: 0, j: 1, alpha: 0b001 }
        );
        assert_eq!(
            verify_members(&fam.members, DisjointMode::Symbolic),
            DisjointOutcome::Unproven { i: 0, j: 1 }
        );
    }

    #[test]
    fn singleton_and_empty() {
        let fam = ComponentFamily::custom(vec![Component::linear(4, 3).unwrap()], 1).unwrap();
        assert!(verify_disjoint(&fam).is_disjoint());
        assert!(verify_members(&[], DisjointMode::Symbolic).is_disjoint());
    }

    #[test]
    fn different_families_share_points() {
        // Gamma_0 and Gamma_1 are each disjoint but not mutually.
        let mut members = gamma0(12, 1, Regime::Standard).unwrap().members;
        let n0 = members.len();
        members.extend(gamma_k(12, 1, 1, Regime::Standard).unwrap().members);
        match verify_members(&members, DisjointMode::Exhaustive) {
            DisjointOutcome::Overlap { i, j, .. } => assert!(i < n0 && j >= n0),
            other => panic!("{other:?}"),
        }
        assert!(!verify_members(&members, DisjointMode::Symbolic).is_disjoint());
    }
}
