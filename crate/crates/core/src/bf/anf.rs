//! Algebraic normal form via the binary Möbius transform.

use crate::bf::TruthTable;
use crate::error::Result;

/// ANF coefficients: bit `u` is the coefficient of `prod_{j : u_j = 1} x_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnfForm {
    coefficients: TruthTable,
}

impl AnfForm {
    pub fn vars(&self) -> u32 {
        self.coefficients.vars()
    }

    pub fn coefficients(&self) -> &TruthTable {
        &self.coefficients
    }

    pub fn from_coefficients(coefficients: TruthTable) -> Self {
        AnfForm { coefficients }
    }

    /// Monomial indices with coefficient 1, ascending.
    pub fn monomials(&self) -> Vec<u64> {
        let mut out = Vec::new();
        for (j, &w) in self.coefficients.words().iter().enumerate() {
            let mut w = w;
            while w != 0 {
                let b = w.trailing_zeros() as u64;
                out.push(((j as u64) << 6) | b);
                w &= w - 1;
            }
        }
        out
    }

    /// Text like `x1*x2 + x3`; `0` for the zero function and `1` for the
    /// constant term. Monomials are sorted lexicographically by their
    /// variable index lists.
    pub fn to_text(&self) -> String {
        let mut monos = self.monomials();
        if monos.is_empty() {
            return "0".into();
        }
        let vars_of = |u: u64| -> Vec<u32> { (0..64).filter(|j| u >> j & 1 == 1).collect() };
        monos.sort_by_key(|&u| vars_of(u));
        monos
            .iter()
            .map(|&u| {
                if u == 0 {
                    "1".to_string()
                } else {
                    vars_of(u)
                        .iter()
                        .map(|j| format!("x{}", j + 1))
                        .collect::<Vec<_>>()
                        .join("*")
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// In-place Möbius transform over GF(2). It is an involution.
pub fn mobius_in_place(t: &mut TruthTable) {
    const MASKS: [u64; 6] = [
        0x5555_5555_5555_5555,
        0x3333_3333_3333_3333,
        0x0F0F_0F0F_0F0F_0F0F,
        0x00FF_00FF_00FF_00FF,
        0x0000_FFFF_0000_FFFF,
        0x0000_0000_FFFF_FFFF,
    ];
    let n = t.vars();
    let words = t.words_mut();
    for (s, &mask) in MASKS.iter().enumerate().take(n.min(6) as usize) {
        let shift = 1u32 << s;
        for w in words.iter_mut() {
            *w ^= (*w & mask) << shift;
        }
    }
    let mut h = 1;
    while h < words.len() {
        for block in words.chunks_exact_mut(2 * h) {
            let (lo, hi) = block.split_at_mut(h);
            for (a, b) in lo.iter().zip(hi.iter_mut()) {
                *b ^= a;
            }
        }
        h *= 2;
    }
}

pub fn anf(f: &TruthTable) -> Result<AnfForm> {
    let mut coefficients = f.clone();
    mobius_in_place(&mut coefficients);
    Ok(AnfForm { coefficients })
}

/// Truth table of an ANF (the transform applied again).
pub fn anf_to_table(a: &AnfForm) -> TruthTable {
    let mut t = a.coefficients.clone();
    mobius_in_place(&mut t);
    t
}

/// Algebraic degree; `-1` for the zero function.
pub fn degree(a: &AnfForm) -> i32 {
    let mut best = -1i32;
    for (j, &w) in a.coefficients.words().iter().enumerate() {
        if w == 0 {
            continue;
        }
        let hi = ((j as u64) << 6).count_ones() as i32;
        let mut w = w;
        while w != 0 {
            let b = w.trailing_zeros();
            best = best.max(hi + b.count_ones() as i32);
            w &= w - 1;
        }
    }
    best
}

/// Degree of a truth table.
pub fn table_degree(f: &TruthTable) -> i32 {
    degree(&anf(f).expect("anf of a valid table"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_function() {
        let a = anf(&TruthTable::zeros(4).unwrap()).unwrap();
        assert!(a.monomials().is_empty());
        assert_eq!(degree(&a), -1);
        assert_eq!(a.to_text(), "0");
    }

    #[test]
    fn quadratic_plus_linear() {
        // x1x2 + x3
        let f = TruthTable::from_fn(3, |i| ((i & 1) & (i >> 1 & 1)) ^ (i >> 2 & 1) == 1).unwrap();
        let a = anf(&f).unwrap();
        assert_eq!(a.monomials(), vec![0b011, 0b100]);
        assert_eq!(degree(&a), 2);
        assert_eq!(a.to_text(), "x1*x2 + x3");
    }

    #[test]
    fn linear_and_bent_degrees() {
        assert_eq!(table_degree(&TruthTable::linear(4, 0b11).unwrap()), 1);
        let bent = TruthTable::from_fn(4, |i| ((i & 1) & (i >> 1 & 1)) ^ ((i >> 2 & 1) & (i >> 3 & 1)) == 1)
            .unwrap();
        assert_eq!(table_degree(&bent), 2);
        assert_eq!(table_degree(&TruthTable::ones(3).unwrap()), 0);
    }

    #[test]
    fn involution_on_large_tables() {
        let f = TruthTable::from_fn(11, |i| (i * 2654435761usize >> 7) & 1 == 1).unwrap();
        let a = anf(&f).unwrap();
        assert_eq!(anf_to_table(&a), f);
    }

    #[test]
    fn full_monomial() {
        for n in 1..10 {
            let f = TruthTable::from_fn(n, |i| i == (1 << n) - 1).unwrap();
            let a = anf(&f).unwrap();
            assert_eq!(a.monomials(), vec![(1u64 << n) - 1]);
            assert_eq!(degree(&a), n as i32);
        }
    }
}
