//! Text serialization of construction plans.
//!
//! ```text
//! plan v1
//! n=16
//! m=1
//! variant=c1
//! mode=plain
//! s=3
//! a=0,1,0
//! e=0,0,0
//! pivots=-
//! c_prime=-
//! shuffle=-
//! tail 0 kind=bent n=4 hex=0356
//! family 0 label=G0 k=0 e=0 size=247 used=247 penalty=256 seeded=0 tail_degree=-1 tails=-
//! member 0:0 support=0xff mask=0x3 tail=-
//! phi
//! 0 -> 0:0
//! end
//! ```
//!
//! Count-only plans carry no `member` lines and no `phi` section.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::str::FromStr;

use num_bigint::BigUint;

use crate::bf::hexfmt::{from_hex, to_hex};
use crate::constructor::plan::{ConstructionPlan, PlanFamily};
use crate::error::{Error, Result};
use crate::families::{Component, TailKind, Tail};

fn list<T: ToString>(xs: &[T]) -> String {
    if xs.is_empty() {
        "-".into()
    } else {
        xs.iter().map(T::to_string).collect::<Vec<_>>().join(",")
    }
}

fn opt<T: ToString>(x: &Option<T>) -> String {
    x.as_ref().map_or("-".into(), T::to_string)
}

pub fn write_plan(plan: &ConstructionPlan) -> String {
    let mut out = String::new();
    let bits: Vec<u8> = plan.a.iter().map(|&b| b as u8).collect();
    let _ = writeln!(out, "plan v1");
    let _ = writeln!(out, "n={}", plan.n);
    let _ = writeln!(out, "m={}", plan.m);
    let _ = writeln!(out, "variant={}", plan.variant);
    let _ = writeln!(out, "mode={}", plan.mode);
    let _ = writeln!(out, "s={}", plan.s);
    let _ = writeln!(out, "a={}", list(&bits));
    let _ = writeln!(out, "e={}", list(&plan.e));
    let _ = writeln!(out, "pivots={}", list(&plan.pivots));
    let _ = writeln!(out, "c_prime={}", plan.c_prime.map_or("-".into(), |c| format!("{c:#x}")));
    let _ = writeln!(out, "shuffle={}", opt(&plan.shuffle));
    for (i, t) in plan.tails.iter().enumerate() {
        let _ = writeln!(
            out,
            "tail {i} kind={} n={} hex={}",
            t.kind().as_str(),
            t.vars(),
            to_hex(t.table())
        );
    }
    for (i, f) in plan.families.iter().enumerate() {
        let _ = writeln!(
            out,
            "family {i} label={} k={} e={} size={} used={} penalty={} seeded={} tail_degree={} tails={}",
            f.label,
            f.k,
            f.e,
            f.size,
            f.used,
            f.penalty,
            f.seeded as u8,
            f.tail_degree,
            list(&f.tails)
        );
    }
    for (i, f) in plan.families.iter().enumerate() {
        for (j, g) in f.members.iter().enumerate() {
            let tail = g
                .tail()
                .map_or("-".to_string(), |t| plan.tail_id(t).expect("registered tail").to_string());
            let _ = writeln!(
                out,
                "member {i}:{j} support={:#x} mask={:#x} tail={tail}",
                g.support(),
                g.mask()
            );
        }
    }
    if plan.is_materialized() {
        let _ = writeln!(out, "phi");
        for (b, (f, j)) in plan.phi.iter().enumerate() {
            let _ = writeln!(out, "{b} -> {f}:{j}");
        }
    }
    let _ = writeln!(out, "end");
    out
}

struct Cursor<'a> {
    lines: Vec<(usize, &'a str)>,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str) -> Self {
        let lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim_end()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
            .collect();
        Cursor { lines, pos: 0 }
    }

    fn peek(&self) -> Option<(usize, &'a str)> {
        self.lines.get(self.pos).copied()
    }

    fn next(&mut self) -> Result<(usize, &'a str)> {
        let last = self.lines.last().map_or(1, |l| l.0);
        let l = self
            .lines
            .get(self.pos)
            .copied()
            .ok_or_else(|| Error::parse(last, 1, "unexpected end of plan"))?;
        self.pos += 1;
        Ok(l)
    }
}

fn column(line: &str, part: &str) -> usize {
    part.as_ptr() as usize - line.as_ptr() as usize + 1
}

fn value<T: FromStr>(line: usize, col: usize, key: &str, raw: &str) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    raw.parse::<T>()
        .map_err(|e| Error::parse(line, col, format!("bad value {raw:?} for {key}: {e}")))
}

fn hex_u32(line: usize, col: usize, key: &str, raw: &str) -> Result<u32> {
    let digits = raw
        .strip_prefix("0x")
        .ok_or_else(|| Error::parse(line, col, format!("{key} must be 0x-prefixed hex")))?;
    u32::from_str_radix(digits, 16).map_err(|e| Error::parse(line, col, format!("bad {key} {raw:?}: {e}")))
}

fn parse_list<T: FromStr>(line: usize, col: usize, key: &str, raw: &str) -> Result<Vec<T>>
where
    T::Err: std::fmt::Display,
{
    if raw == "-" {
        return Ok(Vec::new());
    }
    raw.split(',').map(|x| value(line, col, key, x)).collect()
}

/// `key=value` line at the header.
fn header<'a>(cur: &mut Cursor<'a>, key: &str) -> Result<(usize, usize, &'a str)> {
    let (no, line) = cur.next()?;
    match line.split_once('=') {
        Some((k, v)) if k == key => Ok((no, k.len() + 2, v)),
        _ => Err(Error::parse(no, 1, format!("expected {key}=..."))),
    }
}

/// Tokens `key=value` after a record tag; values keep their column.
fn fields<'a>(no: usize, line: &'a str, tokens: &[&'a str]) -> Result<HashMap<&'a str, (usize, &'a str)>> {
    let mut out = HashMap::new();
    for tok in tokens {
        let (k, v) = tok
            .split_once('=')
            .ok_or_else(|| Error::parse(no, column(line, tok), format!("expected key=value, found {tok:?}")))?;
        if out.insert(k, (column(line, v), v)).is_some() {
            return Err(Error::parse(no, column(line, tok), format!("duplicate field {k}")));
        }
    }
    Ok(out)
}

fn field<'a>(no: usize, map: &HashMap<&'a str, (usize, &'a str)>, key: &str) -> Result<(usize, &'a str)> {
    map.get(key)
        .copied()
        .ok_or_else(|| Error::parse(no, 1, format!("missing field {key}")))
}

fn index(no: usize, line: &str, tok: &str, want: usize, what: &str) -> Result<()> {
    let got: usize = value(no, column(line, tok), what, tok)?;
    if got != want {
        return Err(Error::parse(no, column(line, tok), format!("{what} {got} out of order, expected {want}")));
    }
    Ok(())
}

pub fn parse_plan(text: &str) -> Result<ConstructionPlan> {
    let mut cur = Cursor::new(text);
    let (no, first) = cur.next()?;
    if first != "plan v1" {
        return Err(Error::parse(no, 1, "expected header \"plan v1\""));
    }
    let (l, c, v) = header(&mut cur, "n")?;
    let n: u32 = value(l, c, "n", v)?;
    let (l, c, v) = header(&mut cur, "m")?;
    let m: u32 = value(l, c, "m", v)?;
    let (l, c, v) = header(&mut cur, "variant")?;
    let variant = value(l, c, "variant", v)?;
    let (l, c, v) = header(&mut cur, "mode")?;
    let mode = value(l, c, "mode", v)?;
    let (l, c, v) = header(&mut cur, "s")?;
    let s: u32 = value(l, c, "s", v)?;
    let (l, c, v) = header(&mut cur, "a")?;
    let a: Vec<u8> = parse_list(l, c, "a", v)?;
    if a.len() != s as usize || a.iter().any(|&x| x > 1) {
        return Err(Error::parse(l, c, format!("a must hold {s} bits")));
    }
    let a = a.into_iter().map(|x| x == 1).collect();
    let (l, c, v) = header(&mut cur, "e")?;
    let e: Vec<u32> = parse_list(l, c, "e", v)?;
    if e.len() != s as usize {
        return Err(Error::parse(l, c, format!("e must hold {s} entries")));
    }
    let (l, c, v) = header(&mut cur, "pivots")?;
    let pivots = parse_list(l, c, "pivots", v)?;
    let (l, c, v) = header(&mut cur, "c_prime")?;
    let c_prime = if v == "-" { None } else { Some(hex_u32(l, c, "c_prime", v)?) };
    let (l, c, v) = header(&mut cur, "shuffle")?;
    let shuffle = if v == "-" { None } else { Some(value(l, c, "shuffle", v)?) };

    let mut tails = Vec::new();
    while let Some((no, line)) = cur.peek().filter(|(_, l)| l.starts_with("tail ")) {
        cur.next()?;
        let toks: Vec<&str> = line.split_whitespace().collect();
        index(no, line, toks.get(1).copied().unwrap_or(""), tails.len(), "tail id")?;
        let map = fields(no, line, &toks[2..])?;
        let (c, kind) = field(no, &map, "kind")?;
        let kind = TailKind::parse(kind).ok_or_else(|| Error::parse(no, c, format!("unknown tail kind {kind:?}")))?;
        let (c, q) = field(no, &map, "n")?;
        let q: u32 = value(no, c, "n", q)?;
        let (_, hex) = field(no, &map, "hex")?;
        let table = from_hex(q, hex, no)?;
        tails.push(Tail::new(table, kind)?);
    }

    let mut families: Vec<PlanFamily> = Vec::new();
    while let Some((no, line)) = cur.peek().filter(|(_, l)| l.starts_with("family ")) {
        cur.next()?;
        let toks: Vec<&str> = line.split_whitespace().collect();
        index(no, line, toks.get(1).copied().unwrap_or(""), families.len(), "family index")?;
        let map = fields(no, line, &toks[2..])?;
        let get = |k: &str| field(no, &map, k);
        let (c, v) = get("label")?;
        let label = value(no, c, "label", v)?;
        let (c, v) = get("k")?;
        let k = value(no, c, "k", v)?;
        let (c, v) = get("e")?;
        let fe = value(no, c, "e", v)?;
        let (c, v) = get("size")?;
        let size: BigUint = value(no, c, "size", v)?;
        let (c, v) = get("used")?;
        let used: BigUint = value(no, c, "used", v)?;
        let (c, v) = get("penalty")?;
        let penalty: BigUint = value(no, c, "penalty", v)?;
        let (c, v) = get("seeded")?;
        let seeded = match v {
            "0" => false,
            "1" => true,
            _ => return Err(Error::parse(no, c, "seeded must be 0 or 1")),
        };
        let (c, v) = get("tail_degree")?;
        let tail_degree = value(no, c, "tail_degree", v)?;
        let (c, v) = get("tails")?;
        let ids: Vec<usize> = parse_list(no, c, "tails", v)?;
        if let Some(bad) = ids.iter().find(|&&i| i >= tails.len()) {
            return Err(Error::parse(no, c, format!("unknown tail id {bad}")));
        }
        families.push(PlanFamily {
            label,
            k,
            e: fe,
            size,
            used,
            penalty,
            seeded,
            tail_degree,
            tails: ids,
            members: Vec::new(),
        });
    }
    if families.is_empty() {
        let (no, _) = cur.peek().unwrap_or((0, ""));
        return Err(Error::parse(no, 1, "plan lists no families"));
    }

    let p = n / 2;
    while let Some((no, line)) = cur.peek().filter(|(_, l)| l.starts_with("member ")) {
        cur.next()?;
        let toks: Vec<&str> = line.split_whitespace().collect();
        let id = toks.get(1).copied().unwrap_or("");
        let (f, j) = id
            .split_once(':')
            .ok_or_else(|| Error::parse(no, column(line, id), "expected <family>:<member>"))?;
        let f: usize = value(no, column(line, f), "family", f)?;
        if f >= families.len() {
            return Err(Error::parse(no, column(line, id), format!("unknown family {f}")));
        }
        index(no, line, j, families[f].members.len(), "member index")?;
        let map = fields(no, line, &toks[2..])?;
        let (c, v) = field(no, &map, "support")?;
        let support = hex_u32(no, c, "support", v)?;
        let (c, v) = field(no, &map, "mask")?;
        let mask = hex_u32(no, c, "mask", v)?;
        let (c, v) = field(no, &map, "tail")?;
        let tail = if v == "-" {
            None
        } else {
            let t: usize = value(no, c, "tail", v)?;
            Some(tails.get(t).cloned().ok_or_else(|| Error::parse(no, c, format!("unknown tail id {t}")))?)
        };
        let g = Component::with_support(p, support, mask, tail).map_err(|e| Error::parse(no, 1, e.to_string()))?;
        families[f].members.push(g);
    }

    let mut phi = Vec::new();
    if cur.peek().is_some_and(|(_, l)| l == "phi") {
        cur.next()?;
        while let Some((no, line)) = cur.peek().filter(|(_, l)| *l != "end") {
            cur.next()?;
            let (b, target) = line
                .split_once(" -> ")
                .ok_or_else(|| Error::parse(no, 1, "expected <block> -> <family>:<member>"))?;
            index(no, line, b, phi.len(), "block")?;
            let (f, j) = target
                .split_once(':')
                .ok_or_else(|| Error::parse(no, column(line, target), "expected <family>:<member>"))?;
            let f: u32 = value(no, column(line, f), "family", f)?;
            let j: u32 = value(no, column(line, j), "member", j)?;
            let ok = families.get(f as usize).is_some_and(|x| (j as usize) < x.members.len());
            if !ok {
                return Err(Error::parse(no, column(line, target), format!("no member {f}:{j}")));
            }
            phi.push((f, j));
        }
    }
    let (no, line) = cur.next()?;
    if line != "end" {
        return Err(Error::parse(no, 1, format!("unexpected line {line:?}")));
    }
    if let Some((no, _)) = cur.peek() {
        return Err(Error::parse(no, 1, "content after end"));
    }
    let plan = ConstructionPlan {
        n,
        m,
        variant,
        mode,
        s,
        a,
        e,
        pivots,
        c_prime,
        tails,
        families,
        phi,
        shuffle,
    };
    plan.validate()?;
    Ok(plan)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructor::feasibility::{solve_feasibility, BaseMode, Problem, Variant};
    use crate::constructor::plan::{assign_phi, PlanOptions};
    use crate::families::Regime;

    fn plan(n: u32, m: u32, variant: Variant, mode: BaseMode, opts: PlanOptions) -> ConstructionPlan {
        let pr = Problem {
            n,
            m,
            variant,
            mode,
            seeds: Vec::new(),
            select: None,
        };
        let sel = solve_feasibility(&pr).unwrap();
        assign_phi(n, m, variant, mode, &sel, &[], &opts).unwrap()
    }

    #[test]
    fn round_trips() {
        let relaxed = || PlanOptions {
            regime: Regime::Relaxed,
            ..PlanOptions::default()
        };
        let cases = [
            plan(16, 1, Variant::C1, BaseMode::Plain, relaxed()),
            plan(12, 1, Variant::C2, BaseMode::Monomial, PlanOptions { shuffle: Some(3), ..relaxed() }),
            plan(20, 2, Variant::C2, BaseMode::Disjoint, relaxed()),
            plan(500, 10, Variant::C2, BaseMode::Monomial, PlanOptions { materialize: false, ..relaxed() }),
        ];
        for pl in cases {
            let text = write_plan(&pl);
            let back = parse_plan(&text).unwrap();
            assert_eq!(back, pl);
            assert_eq!(write_plan(&back), text);
        }
    }

    #[test]
    fn errors_carry_positions() {
        let pl = plan(12, 1, Variant::C1, BaseMode::Plain, PlanOptions::default());
        let text = write_plan(&pl).replace("mode=plain", "mode=weird");
        match parse_plan(&text) {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (5, 6)),
            other => panic!("{other:?}"),
        }
        let text = write_plan(&pl).replace("0 -> ", "1 -> ");
        assert!(matches!(parse_plan(&text), Err(Error::Parse { .. })));
        let text = write_plan(&pl).replace("\nend\n", "\n");
        assert!(matches!(parse_plan(&text), Err(Error::Parse { .. })));
    }

    #[test]
    fn broken_bijection_is_rejected() {
        let pl = plan(12, 1, Variant::C1, BaseMode::Plain, PlanOptions::default());
        let text = write_plan(&pl).replace("\n1 -> 0:1\n", "\n1 -> 0:0\n");
        assert!(matches!(parse_plan(&text), Err(Error::Verification(_))));
    }
}
