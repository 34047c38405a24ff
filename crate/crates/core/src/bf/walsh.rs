//! Walsh–Hadamard spectra.
//!
//! `W_f(w) = sum_x (-1)^(f(x) xor w.x)`, with `w` indexed like the truth table.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::bf::truth_table::{linear_word, parity};
use crate::bf::TruthTable;
use crate::error::{Error, Result};

/// Largest variable count for which a full spectrum is materialized.
/// Beyond it, [`spectrum_summary`] streams the transform in blocks.
pub const SPECTRUM_MAX_VARS: u32 = 26;

/// Largest variable count accepted by the quadratic-time oracle.
pub const NAIVE_MAX_VARS: u32 = 14;

const PAR_THRESHOLD: usize = 1 << 16;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WalshSpectrum {
    n: u32,
    values: Vec<i64>,
}

impl WalshSpectrum {
    /// Wrap raw values. Only the length is checked; use [`parseval_check`]
    /// to validate the contents.
    pub fn from_values(n: u32, values: Vec<i64>) -> Result<Self> {
        if n > SPECTRUM_MAX_VARS || values.len() != 1usize << n {
            return Err(Error::Shape(format!(
                "spectrum on {n} variables needs {} values, got {}",
                1u64 << n.min(63),
                values.len()
            )));
        }
        Ok(WalshSpectrum { n, values })
    }

    pub fn vars(&self) -> u32 {
        self.n
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    pub fn get(&self, w: usize) -> i64 {
        self.values[w]
    }

    pub fn max_abs(&self) -> u64 {
        self.values.iter().map(|v| v.unsigned_abs()).max().unwrap_or(0)
    }

    pub fn into_values(self) -> Vec<i64> {
        self.values
    }
}

fn signs(f: &TruthTable) -> Vec<i64> {
    (0..f.len())
        .map(|i| if f.get(i) { -1 } else { 1 })
        .collect()
}

/// In-place unnormalized Walsh–Hadamard butterfly. Applying it twice scales
/// every entry by `len`.
pub fn butterfly_in_place(data: &mut [i64]) {
    let len = data.len();
    assert!(len.is_power_of_two(), "butterfly length must be a power of two");
    // Low stages stay inside cache-sized chunks.
    let chunk = len.min(1 << 12);
    let low = |c: &mut [i64]| {
        let mut h = 1;
        while h < c.len() {
            for block in c.chunks_exact_mut(2 * h) {
                let (a, b) = block.split_at_mut(h);
                for (x, y) in a.iter_mut().zip(b.iter_mut()) {
                    let (u, v) = (*x, *y);
                    *x = u + v;
                    *y = u - v;
                }
            }
            h *= 2;
        }
    };
    if len >= PAR_THRESHOLD {
        data.par_chunks_mut(chunk).for_each(low);
    } else {
        data.chunks_mut(chunk).for_each(low);
    }
    let mut h = chunk;
    while h < len {
        for block in data.chunks_exact_mut(2 * h) {
            let (a, b) = block.split_at_mut(h);
            let step = |(x, y): (&mut i64, &mut i64)| {
                let (u, v) = (*x, *y);
                *x = u + v;
                *y = u - v;
            };
            if len >= PAR_THRESHOLD {
                a.par_iter_mut().zip(b.par_iter_mut()).for_each(step);
            } else {
                a.iter_mut().zip(b.iter_mut()).for_each(step);
            }
        }
        h *= 2;
    }
}

/// Full spectrum by the O(n 2^n) butterfly.
pub fn fast_walsh(f: &TruthTable) -> Result<WalshSpectrum> {
    if f.vars() > SPECTRUM_MAX_VARS {
        return Err(Error::Capacity(format!(
            "full spectrum limited to {SPECTRUM_MAX_VARS} variables; use spectrum_summary for n={}",
            f.vars()
        )));
    }
    let mut values = signs(f);
    butterfly_in_place(&mut values);
    Ok(WalshSpectrum { n: f.vars(), values })
}

/// Direct O(4^n) summation, kept as an independent oracle.
pub fn naive_walsh(f: &TruthTable) -> Result<WalshSpectrum> {
    let n = f.vars();
    if n > NAIVE_MAX_VARS {
        return Err(Error::Capacity(format!(
            "naive transform refuses n={n} (limit {NAIVE_MAX_VARS})"
        )));
    }
    let len = f.len();
    let values = (0..len)
        .map(|w| {
            (0..len)
                .map(|x| {
                    let e = f.get(x) ^ ((w & x).count_ones() & 1 == 1);
                    if e {
                        -1
                    } else {
                        1
                    }
                })
                .sum()
        })
        .collect();
    Ok(WalshSpectrum { n, values })
}

/// `W_f(w)` at one point by word-parallel direct summation.
pub fn walsh_at(f: &TruthTable, w: u64) -> i64 {
    let len = f.len() as i64;
    let low = linear_word(w & 63);
    let dist: u64 = if f.vars() < 6 {
        let used = (1u64 << f.len()) - 1;
        ((f.words()[0] ^ low) & used).count_ones() as u64
    } else {
        f.words()
            .iter()
            .enumerate()
            .map(|(j, &word)| {
                let pattern = if parity(w & ((j as u64) << 6)) { !low } else { low };
                (word ^ pattern).count_ones() as u64
            })
            .sum()
    };
    len - 2 * dist as i64
}

/// `W_f` at the requested points only, each by direct summation.
pub fn restricted_walsh(f: &TruthTable, masks: &[u64]) -> Result<BTreeMap<u64, i64>> {
    if masks.is_empty() {
        return Err(Error::InvalidArgument("restricted_walsh needs at least one mask".into()));
    }
    let limit = f.len() as u64;
    let mut out = BTreeMap::new();
    for &w in masks {
        if w >= limit {
            return Err(Error::InvalidArgument(format!(
                "mask {w:#x} out of range for n={}",
                f.vars()
            )));
        }
        out.insert(w, walsh_at(f, w));
    }
    Ok(out)
}

/// `2^(n-1) - max|W| / 2`.
pub fn nonlinearity(s: &WalshSpectrum) -> u64 {
    nonlinearity_from_max(s.vars(), s.max_abs())
}

pub(crate) fn nonlinearity_from_max(n: u32, max_abs: u64) -> u64 {
    ((1u64 << n) - max_abs) / 2
}

/// Largest `m` with `W(w) = 0` for every `wt(w) <= m`; `-1` when `W(0) != 0`.
pub fn resiliency_order(s: &WalshSpectrum) -> i32 {
    let min_weight = s
        .values
        .iter()
        .enumerate()
        .filter(|(_, &v)| v != 0)
        .map(|(w, _)| w.count_ones())
        .min();
    match min_weight {
        Some(wt) => wt as i32 - 1,
        None => s.n as i32,
    }
}

/// Parseval: `sum W^2 == 2^(2n)`, accumulated in 128 bits.
pub fn parseval_check(s: &WalshSpectrum) -> bool {
    let sum: i128 = s.values.iter().map(|&v| (v as i128) * (v as i128)).sum();
    sum == 1i128 << (2 * s.n)
}

/// Spectral statistics without holding the full spectrum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectrumSummary {
    pub n: u32,
    pub max_abs: u64,
    pub resiliency: i32,
    pub parseval: bool,
}

impl SpectrumSummary {
    pub fn nonlinearity(&self) -> u64 {
        nonlinearity_from_max(self.n, self.max_abs)
    }
}

/// Summary statistics of the spectrum. Up to [`SPECTRUM_MAX_VARS`] this runs
/// the full transform; above it the spectrum is produced in blocks.
pub fn spectrum_summary(f: &TruthTable) -> Result<SpectrumSummary> {
    if f.vars() <= SPECTRUM_MAX_VARS {
        let s = fast_walsh(f)?;
        return Ok(SpectrumSummary {
            n: s.n,
            max_abs: s.max_abs(),
            resiliency: resiliency_order(&s),
            parseval: parseval_check(&s),
        });
    }
    streamed_summary(f, SPECTRUM_MAX_VARS)
}

/// Stream the spectrum in `2^(n - low)` slices of length `2^low`.
///
/// Splitting the index into high part `y` (width `q = n - low`) and low part
/// `x`, for each high spectral point `beta` the slice
/// `u_beta(x) = sum_y (-1)^(beta.y) (-1)^f(y, x)` is transformed over `x`,
/// which yields `W(beta, alpha)` for every `alpha`.
pub(crate) fn streamed_summary(f: &TruthTable, low: u32) -> Result<SpectrumSummary> {
    let n = f.vars();
    let low = low.min(n);
    let q = n - low;
    let width = 1usize << low;
    let mut max_abs = 0u64;
    let mut min_weight: Option<u32> = None;
    let mut sum_sq: i128 = 0;
    let mut slice = vec![0i64; width];
    for beta in 0..(1usize << q) {
        slice.par_iter_mut().enumerate().for_each(|(x, acc)| {
            let mut s = 0i64;
            for y in 0..(1usize << q) {
                let sign = ((beta & y).count_ones() & 1) ^ (f.get((y << low) | x) as u32);
                s += if sign == 1 { -1 } else { 1 };
            }
            *acc = s;
        });
        butterfly_in_place(&mut slice);
        for (alpha, &v) in slice.iter().enumerate() {
            sum_sq += (v as i128) * (v as i128);
            if v != 0 {
                max_abs = max_abs.max(v.unsigned_abs());
                let wt = alpha.count_ones() + beta.count_ones();
                min_weight = Some(min_weight.map_or(wt, |m| m.min(wt)));
            }
        }
    }
    Ok(SpectrumSummary {
        n,
        max_abs,
        resiliency: min_weight.map_or(n as i32, |wt| wt as i32 - 1),
        parseval: sum_sq == 1i128 << (2 * n),
    })
}
