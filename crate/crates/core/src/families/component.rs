//! Partially linear components `g(X) = c . X' xor h(X'')`.
//!
//! `X'` is an arbitrary set of coordinates (the *support*) and `X''` the
//! remaining coordinates in increasing order. With the default partition the
//! support is the first `t` variables and the tail sits on the last `p - t`.

use std::fmt;
use std::sync::Arc;

use crate::bf::truth_table::{linear_word, parity};
use crate::bf::{anf, degree, fast_walsh, resiliency_order, TruthTable, WalshSpectrum};
use crate::error::{Error, Result};

/// Largest tail width; tails carry a materialized spectrum.
pub const MAX_TAIL_VARS: u32 = 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TailKind {
    Bent,
    Resilient,
    Plain,
}

impl TailKind {
    pub fn as_str(self) -> &'static str {
        match self {
            TailKind::Bent => "bent",
            TailKind::Resilient => "resilient",
            TailKind::Plain => "plain",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "bent" => Some(TailKind::Bent),
            "resilient" => Some(TailKind::Resilient),
            "plain" => Some(TailKind::Plain),
            _ => None,
        }
    }
}

/// Nonlinear part of a component with its exhaustively measured spectrum.
pub struct Tail {
    table: TruthTable,
    kind: TailKind,
    spectrum: WalshSpectrum,
    resiliency: i32,
    degree: i32,
    max_abs: u64,
}

impl PartialEq for Tail {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind && self.table == other.table
    }
}

impl Eq for Tail {}

impl fmt::Debug for Tail {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Tail")
            .field("vars", &self.vars())
            .field("kind", &self.kind)
            .field("resiliency", &self.resiliency)
            .field("degree", &self.degree)
            .field("max_abs", &self.max_abs)
            .finish()
    }
}

impl Tail {
    /// Measure `table` and check that it matches `kind`: bent tails must
    /// have a flat spectrum, resilient tails must be balanced.
    pub fn new(table: TruthTable, kind: TailKind) -> Result<Arc<Tail>> {
        let q = table.vars();
        if q > MAX_TAIL_VARS {
            return Err(Error::Capacity(format!(
                "tail on {q} variables exceeds {MAX_TAIL_VARS}"
            )));
        }
        let spectrum = fast_walsh(&table)?;
        let resiliency = resiliency_order(&spectrum);
        let max_abs = spectrum.max_abs();
        let degree = degree(&anf(&table)?);
        match kind {
            TailKind::Bent => {
                let flat = q.is_multiple_of(2) && spectrum.values().iter().all(|v| v.unsigned_abs() == 1 << (q / 2));
                if !flat {
                    return Err(Error::Verification(format!(
                        "tail on {q} variables is not bent"
                    )));
                }
            }
            TailKind::Resilient if resiliency < 0 => {
                return Err(Error::Verification("resilient tail is not balanced".into()));
            }
            _ => {}
        }
        Ok(Arc::new(Tail {
            table,
            kind,
            spectrum,
            resiliency,
            degree,
            max_abs,
        }))
    }

    pub fn vars(&self) -> u32 {
        self.table.vars()
    }

    pub fn table(&self) -> &TruthTable {
        &self.table
    }

    pub fn kind(&self) -> TailKind {
        self.kind
    }

    pub fn spectrum(&self) -> &WalshSpectrum {
        &self.spectrum
    }

    /// Measured resiliency order `v` (`-1` when unbalanced).
    pub fn resiliency(&self) -> i32 {
        self.resiliency
    }

    pub fn degree(&self) -> i32 {
        self.degree
    }

    pub fn max_abs_walsh(&self) -> u64 {
        self.max_abs
    }

    pub fn nonlinearity(&self) -> u64 {
        ((1u64 << self.vars()) - self.max_abs) / 2
    }
}

/// Gather the bits of `x` at the positions set in `select` into the low bits.
#[inline]
pub(crate) fn compress(x: u32, select: u32) -> u32 {
    let mut out = 0;
    let mut k = 0;
    let mut s = select;
    while s != 0 {
        let j = s.trailing_zeros();
        out |= ((x >> j) & 1) << k;
        k += 1;
        s &= s - 1;
    }
    out
}

/// Scatter the low bits of `x` onto the positions set in `select`.
#[cfg(test)]
pub(crate) fn expand_bits(x: u32, select: u32) -> u32 {
    let mut out = 0;
    let mut k = 0;
    let mut s = select;
    while s != 0 {
        let j = s.trailing_zeros();
        out |= ((x >> k) & 1) << j;
        k += 1;
        s &= s - 1;
    }
    out
}

#[inline]
pub(crate) fn full_mask(p: u32) -> u32 {
    if p >= 32 {
        u32::MAX
    } else {
        (1u32 << p) - 1
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct Component {
    vars: u32,
    support: u32,
    mask: u32,
    tail: Option<Arc<Tail>>,
}

impl fmt::Debug for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Component(p={}, support={:#x}, c={:#x}, tail={})",
            self.vars,
            self.support,
            self.mask,
            self.tail.as_ref().map_or("-".to_string(), |t| format!("{}:{}", t.kind.as_str(), t.vars()))
        )
    }
}

impl Component {
    /// Pure linear function `c . X` on `p` variables.
    pub fn linear(p: u32, mask: u32) -> Result<Self> {
        Self::with_support(p, full_mask(p), mask, None)
    }

    /// `c . (x_1..x_t) xor h(x_{t+1}..x_p)` with `p = t + vars(h)`.
    pub fn partially_linear(t: u32, mask: u32, tail: Arc<Tail>) -> Result<Self> {
        let p = t + tail.vars();
        Self::with_support(p, full_mask(t), mask, Some(tail))
    }

    /// General partition: `support` selects the linear coordinates, the tail
    /// reads the remaining ones in increasing order.
    pub fn with_support(p: u32, support: u32, mask: u32, tail: Option<Arc<Tail>>) -> Result<Self> {
        if p == 0 || p > 30 {
            return Err(Error::Shape(format!("component width {p} out of range 1..=30")));
        }
        let all = full_mask(p);
        if support & !all != 0 || mask & !support != 0 {
            return Err(Error::Shape(format!(
                "mask {mask:#x} / support {support:#x} do not fit {p} variables"
            )));
        }
        let rest = p - support.count_ones();
        match &tail {
            None if rest != 0 => {
                return Err(Error::Shape(format!(
                    "{rest} non-linear coordinates but no tail"
                )))
            }
            Some(t) if t.vars() != rest => {
                return Err(Error::Shape(format!(
                    "tail has {} variables, partition leaves {rest}",
                    t.vars()
                )))
            }
            _ => {}
        }
        Ok(Component {
            vars: p,
            support,
            mask,
            tail,
        })
    }

    pub fn vars(&self) -> u32 {
        self.vars
    }

    pub fn support(&self) -> u32 {
        self.support
    }

    pub fn mask(&self) -> u32 {
        self.mask
    }

    pub fn tail(&self) -> Option<&Arc<Tail>> {
        self.tail.as_ref()
    }

    /// Number of linear coordinates `t`.
    pub fn linear_order(&self) -> u32 {
        self.support.count_ones()
    }

    fn tail_coords(&self) -> u32 {
        full_mask(self.vars) & !self.support
    }

    /// `wt(c) + v`, with `v = -1` for a missing tail (the empty constant).
    pub fn structural_resiliency(&self) -> i32 {
        self.mask.count_ones() as i32 + self.tail.as_ref().map_or(-1, |t| t.resiliency())
    }

    pub fn degree(&self) -> i32 {
        let lin = if self.mask != 0 { 1 } else { -1 };
        let tail = self.tail.as_ref().map_or(-1, |t| t.degree());
        lin.max(tail)
    }

    /// `max_alpha |W_g(alpha)| = 2^t * max |W_h|`.
    pub fn max_abs_walsh(&self) -> u64 {
        let t = self.linear_order();
        self.tail.as_ref().map_or(1u64 << t, |h| h.max_abs_walsh() << t)
    }

    /// Evaluate at one point.
    #[inline]
    pub fn eval(&self, x: u32) -> bool {
        let lin = (self.mask & x).count_ones() & 1 == 1;
        match &self.tail {
            None => lin,
            Some(h) => lin ^ h.table().get(compress(x, self.tail_coords()) as usize),
        }
    }

    /// Spectrum value at `alpha` from the tail spectrum:
    /// zero unless `alpha` agrees with `c` on the support, else `2^t W_h(theta)`.
    #[inline]
    pub fn spectrum_at(&self, alpha: u32) -> i64 {
        if alpha & self.support != self.mask {
            return 0;
        }
        let t = self.linear_order();
        match &self.tail {
            None => 1i64 << t,
            Some(h) => h.spectrum().get(compress(alpha, self.tail_coords()) as usize) << t,
        }
    }

    /// Points where the spectrum can be nonzero all share this key:
    /// `alpha & support == mask`.
    pub fn spectral_key(&self) -> (u32, u32) {
        (self.support, self.mask)
    }
}

/// Partially linear component on the default partition (linear part on the first
/// `t` coordinates). `tail = None` gives the pure linear function on `t`
/// variables.
pub fn make_component(t: u32, mask: u32, tail: Option<Arc<Tail>>) -> Result<Component> {
    match tail {
        Some(h) => Component::partially_linear(t, mask, h),
        None => Component::linear(t, mask),
    }
}

/// Materialize the truth table of a component.
pub fn expand(comp: &Component) -> Result<TruthTable> {
    let p = comp.vars;
    let mut out = TruthTable::zeros(p)?;
    let rest = comp.tail_coords();
    if p >= 6 && rest & 63 == 0 {
        // Tail constant within each 64-entry word.
        let low = linear_word((comp.mask & 63) as u64);
        for (j, w) in out.words_mut().iter_mut().enumerate() {
            let base = (j as u32) << 6;
            let mut flip = parity((comp.mask & base) as u64);
            if let Some(h) = &comp.tail {
                flip ^= h.table().get(compress(base, rest) as usize);
            }
            *w = if flip { !low } else { low };
        }
    } else {
        for x in 0..(1u32 << p) {
            if comp.eval(x) {
                out.set(x as usize, true);
            }
        }
    }
    Ok(out)
}

/// Spectrum of a component at `alpha`, derived from the tail spectrum.
pub fn component_spectrum(comp: &Component, alpha: u32) -> i64 {
    comp.spectrum_at(alpha)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bf::naive_walsh;

    fn and2() -> Arc<Tail> {
        Tail::new(
            TruthTable::from_bits(2, &[false, false, false, true]).unwrap(),
            TailKind::Bent,
        )
        .unwrap()
    }

    #[test]
    fn pure_linear_expands_to_parity() {
        let c = Component::linear(2, 0b01).unwrap();
        assert_eq!(expand(&c).unwrap().bits(), vec![false, true, false, true]);
        assert_eq!(c.structural_resiliency(), 0);
        assert_eq!(component_spectrum(&c, 0b01), 4);
        assert_eq!(component_spectrum(&c, 0b11), 0);
    }

    #[test]
    fn empty_linear_part_is_the_tail() {
        let h = and2();
        let c = make_component(0, 0, Some(h.clone())).unwrap();
        assert_eq!(expand(&c).unwrap(), *h.table());
    }

    #[test]
    fn tail_spectrum_scales_by_two_to_the_t() {
        // t = 2, c = (1,1), h = x1 x2: nonzero only on prefix (1,1), |W| = 8
        let c = make_component(2, 0b11, Some(and2())).unwrap();
        let s = naive_walsh(&expand(&c).unwrap()).unwrap();
        for alpha in 0..16u32 {
            let v = s.get(alpha as usize);
            assert_eq!(v, component_spectrum(&c, alpha), "alpha={alpha}");
            if alpha & 0b11 == 0b11 {
                assert_eq!(v.abs(), 8);
            } else {
                assert_eq!(v, 0);
            }
        }
        assert_eq!(c.structural_resiliency(), 1);
        assert_eq!(crate::bf::resiliency_order(&s), 1);
    }

    #[test]
    fn balanced_tail_adds_to_mask_weight() {
        // h = x1 xor x2 x3 is balanced and 0-resilient on 3 variables
        let h = Tail::new(
            TruthTable::from_fn(3, |i| (i & 1) ^ ((i >> 1) & (i >> 2) & 1) == 1).unwrap(),
            TailKind::Resilient,
        )
        .unwrap();
        assert_eq!(h.resiliency(), 0);
        let c = make_component(1, 1, Some(h)).unwrap();
        assert_eq!(c.structural_resiliency(), 1);
        let s = naive_walsh(&expand(&c).unwrap()).unwrap();
        assert!(crate::bf::resiliency_order(&s) >= 1);
    }

    #[test]
    fn arbitrary_partition() {
        // support {x1, x3}, tail on {x2, x4}
        let h = and2();
        let c = Component::with_support(4, 0b0101, 0b0101, Some(h)).unwrap();
        let t = expand(&c).unwrap();
        let s = naive_walsh(&t).unwrap();
        for alpha in 0..16u32 {
            assert_eq!(s.get(alpha as usize), c.spectrum_at(alpha));
        }
        for x in 0..16u32 {
            let expect = ((x & 1) ^ (x >> 2 & 1)) ^ ((x >> 1 & 1) & (x >> 3 & 1));
            assert_eq!(t.get(x as usize), expect == 1);
        }
    }

    #[test]
    fn word_fast_path_matches_pointwise() {
        let h = and2();
        let c = Component::partially_linear(7, 0b1010011, h).unwrap();
        let t = expand(&c).unwrap();
        for x in 0..(1u32 << 9) {
            assert_eq!(t.get(x as usize), c.eval(x));
        }
    }

    #[test]
    fn dimension_errors() {
        assert!(Component::linear(3, 0b1000).is_err());
        assert!(Component::with_support(4, 0b0011, 0b0011, None).is_err());
        assert!(Component::with_support(4, 0b0001, 0b0001, Some(and2())).is_err());
        assert!(Tail::new(TruthTable::linear(2, 1).unwrap(), TailKind::Bent).is_err());
        assert!(Tail::new(TruthTable::ones(2).unwrap(), TailKind::Resilient).is_err());
    }

    #[test]
    fn compress_expand_inverse() {
        for sel in [0b1011_0110u32, 0xff, 0x1] {
            for x in 0..(1u32 << sel.count_ones()) {
                assert_eq!(compress(expand_bits(x, sel), sel), x);
            }
        }
    }
}
