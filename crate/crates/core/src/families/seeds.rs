//! Seed-function files: externally obtained small functions used as tails.
//!
//! ```text
//! profile n=10 m=1 d=8 N=492
//! n=10
//! <hex>
//! ```
//!
//! Records repeat; blank lines and `#` comments between records are ignored.
//! Every declared parameter is re-measured on load. `m` is a lower bound on
//! the measured resiliency order; `n`, `d` and `N` must match exactly
//! (`d=-` leaves the degree undeclared).

use std::fmt::Write as _;
use std::path::Path;
use std::sync::Arc;

use crate::bf::hexfmt::{parse_block, to_hex};
use crate::bf::{profile, FunctionProfile, TruthTable};
use crate::error::{Error, Result};
use crate::families::component::{Tail, TailKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DeclaredProfile {
    pub n: u32,
    pub m: i32,
    pub d: Option<i32>,
    pub nonlinearity: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeedFunction {
    pub table: TruthTable,
    pub declared: DeclaredProfile,
    pub measured: FunctionProfile,
}

impl SeedFunction {
    /// Measure `table` and check it against `declared`. `record` names the
    /// seed in error messages.
    pub fn verify(table: TruthTable, declared: DeclaredProfile, record: usize) -> Result<Self> {
        let measured = profile(&table)?;
        let fail = |what: &str, want: String, got: String| {
            Err(Error::Verification(format!(
                "seed record {record}: declared {what}={want}, measured {got}"
            )))
        };
        if measured.n != declared.n {
            return fail("n", declared.n.to_string(), measured.n.to_string());
        }
        if measured.resiliency < declared.m {
            return fail("m", declared.m.to_string(), measured.resiliency.to_string());
        }
        if let Some(d) = declared.d {
            if measured.degree != d {
                return fail("d", d.to_string(), measured.degree.to_string());
            }
        }
        if measured.nonlinearity != declared.nonlinearity {
            return fail(
                "N",
                declared.nonlinearity.to_string(),
                measured.nonlinearity.to_string(),
            );
        }
        Ok(SeedFunction {
            table,
            declared,
            measured,
        })
    }

    /// The seed as a component tail.
    pub fn to_tail(&self) -> Result<Arc<Tail>> {
        let n = self.table.vars();
        let bent = n.is_multiple_of(2) && n > 0 && self.measured.nonlinearity == (1u64 << (n - 1)) - (1u64 << (n / 2 - 1));
        let kind = if self.measured.resiliency >= 0 {
            TailKind::Resilient
        } else if bent {
            TailKind::Bent
        } else {
            TailKind::Plain
        };
        Tail::new(self.table.clone(), kind)
    }
}

fn parse_profile_line(text: &str, line: usize) -> Result<DeclaredProfile> {
    let rest = text
        .strip_prefix("profile")
        .ok_or_else(|| Error::parse(line, 1, "expected `profile n=.. m=.. d=.. N=..`"))?;
    let mut n = None;
    let mut m = None;
    let mut d = None;
    let mut nl = None;
    let mut col = "profile".len() + 1;
    for tok in rest.split(' ') {
        if tok.is_empty() {
            col += 1;
            continue;
        }
        let bad = |msg: String| Error::parse(line, col, msg);
        let (key, value) = tok
            .split_once('=')
            .ok_or_else(|| bad(format!("expected key=value, found {tok:?}")))?;
        match key {
            "n" => n = Some(value.parse::<u32>().map_err(|_| bad(format!("invalid n {value:?}")))?),
            "m" => m = Some(value.parse::<i32>().map_err(|_| bad(format!("invalid m {value:?}")))?),
            "d" => {
                d = Some(if value == "-" {
                    None
                } else {
                    Some(value.parse::<i32>().map_err(|_| bad(format!("invalid d {value:?}")))?)
                })
            }
            "N" => nl = Some(value.parse::<u64>().map_err(|_| bad(format!("invalid N {value:?}")))?),
            _ => return Err(bad(format!("unknown key {key:?}"))),
        }
        col += tok.len() + 1;
    }
    let missing = |k: &str| Error::parse(line, 1, format!("profile line lacks {k}="));
    Ok(DeclaredProfile {
        n: n.ok_or_else(|| missing("n"))?,
        m: m.ok_or_else(|| missing("m"))?,
        d: d.ok_or_else(|| missing("d"))?,
        nonlinearity: nl.ok_or_else(|| missing("N"))?,
    })
}

/// Parse and verify every record.
pub fn parse_seeds(text: &str) -> Result<Vec<SeedFunction>> {
    let lines: Vec<&str> = text.lines().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < lines.len() {
        let l = lines[i].trim_end();
        if l.trim().is_empty() || l.trim_start().starts_with('#') {
            i += 1;
            continue;
        }
        let declared = parse_profile_line(l, i + 1)?;
        let table = parse_block(&lines[i + 1..], i + 2)?;
        if table.vars() != declared.n {
            return Err(Error::parse(
                i + 2,
                3,
                format!("table has n={}, profile declares n={}", table.vars(), declared.n),
            ));
        }
        out.push(SeedFunction::verify(table, declared, out.len() + 1)?);
        i += 3;
    }
    Ok(out)
}

pub fn load_seed_functions(path: impl AsRef<Path>) -> Result<Vec<SeedFunction>> {
    parse_seeds(&std::fs::read_to_string(path)?)
}

/// Serialize seeds with their declared profiles.
pub fn write_seeds(seeds: &[SeedFunction]) -> String {
    let mut s = String::new();
    for seed in seeds {
        let d = &seed.declared;
        let deg = d.d.map_or("-".to_string(), |v| v.to_string());
        writeln!(s, "profile n={} m={} d={} N={}", d.n, d.m, deg, d.nonlinearity).unwrap();
        writeln!(s, "n={}", seed.table.vars()).unwrap();
        writeln!(s, "{}", to_hex(&seed.table)).unwrap();
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    // x1 x2 + x3 + x4
    fn sample() -> TruthTable {
        TruthTable::from_fn(4, |i| ((i & 1) & (i >> 1 & 1)) ^ (i >> 2 & 1) ^ (i >> 3 & 1) == 1).unwrap()
    }

    fn record(m: i32) -> String {
        format!("profile n=4 m={m} d=- N=4\nn=4\n{}\n", to_hex(&sample()))
    }

    #[test]
    fn accepts_matching_profile() {
        let seeds = parse_seeds(&record(0)).unwrap();
        assert_eq!(seeds.len(), 1);
        assert_eq!(seeds[0].measured.nonlinearity, 4);
        assert_eq!(seeds[0].measured.degree, 2);
        assert_eq!(seeds[0].to_tail().unwrap().kind(), TailKind::Resilient);
    }

    #[test]
    fn resiliency_is_a_lower_bound() {
        // the sample is 1-resilient: c = (1,1) on x3 x4 over a bent x1 x2
        assert_eq!(parse_seeds(&record(1)).unwrap()[0].measured.resiliency, 1);
        let err = parse_seeds(&record(2)).unwrap_err();
        assert!(matches!(err, Error::Verification(ref s) if s.contains("m=2")), "{err}");
        let t = TruthTable::from_fn(4, |i| 0x33f >> i & 1 == 1).unwrap();
        let text = format!("profile n=4 m=1 d=- N=4\nn=4\n{}\n", to_hex(&t));
        assert!(parse_seeds(&text).is_err());
        assert!(parse_seeds(&text.replace("m=1", "m=0")).is_ok());
    }

    #[test]
    fn rejects_wrong_degree_and_nonlinearity() {
        let hex = to_hex(&sample());
        assert!(parse_seeds(&format!("profile n=4 m=0 d=3 N=4\nn=4\n{hex}\n")).is_err());
        assert!(parse_seeds(&format!("profile n=4 m=0 d=2 N=6\nn=4\n{hex}\n")).is_err());
        assert!(parse_seeds(&format!("profile n=4 m=0 d=2 N=4\nn=4\n{hex}\n")).is_ok());
    }

    #[test]
    fn empty_file_is_empty_set() {
        assert!(parse_seeds("").unwrap().is_empty());
        assert!(parse_seeds("\n# nothing\n").unwrap().is_empty());
    }

    #[test]
    fn parse_errors_carry_positions() {
        match parse_seeds("profile n=4 m=x d=- N=4\n").unwrap_err() {
            Error::Parse { line, column, .. } => assert_eq!((line, column), (1, 13)),
            e => panic!("{e}"),
        }
        match parse_seeds("profile n=4 m=0 d=- N=4\nn=4\n").unwrap_err() {
            Error::Parse { line, .. } => assert_eq!(line, 3),
            e => panic!("{e}"),
        }
    }

    #[test]
    fn round_trip() {
        let text = format!("{}{}", record(0), record(0));
        let seeds = parse_seeds(&text).unwrap();
        assert_eq!(write_seeds(&seeds), text);
    }
}
