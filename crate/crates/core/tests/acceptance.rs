//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use dsconcat::bf::{anf, anf_to_table, fast_walsh, naive_walsh, parseval_check, profile, TruthTable};
use dsconcat::constructor::certify::{certify_exact, certify_exhaustive, pow2_form, CertMode};
use dsconcat::constructor::construct::{construct1, construct2, construct3, ConstructOptions};
use dsconcat::constructor::counting::pow2;
use dsconcat::constructor::feasibility::{solve_feasibility, BaseMode, Problem, Variant};
use dsconcat::constructor::plan::{assign_phi, PlanOptions};
use dsconcat::constructor::tables::{reproduce_tables, table1, table2, TableStatus};
use dsconcat::families::{
    gamma0, gamma0_prime, gamma_k, gamma_limit, mm_bent, omega_k, verify_members, Component, DeclaredProfile,
    DisjointMode, Regime, SeedFunction, Tail, TailKind,
};
use dsconcat::families::expand;
use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(t: Instant, limit: Duration) -> Result<Duration, String> {
    let e = t.elapsed();
    ensure(e < limit, || format!("took {e:?}, limit {limit:?}"))?;
    Ok(e)
}

// Direct definitions, independent of the library transforms.

fn oracle_walsh(f: &TruthTable) -> Vec<i64> {
    let n = f.vars();
    (0..1usize << n)
        .map(|w| {
            (0..1usize << n)
                .map(|x| if f.get(x) ^ ((w & x).count_ones() % 2 == 1) { -1 } else { 1 })
                .sum()
        })
        .collect()
}

fn oracle_resiliency(w: &[i64], n: u32) -> i32 {
    let mut order = -1;
    for k in 0..=n {
        if (0..w.len()).any(|a| a.count_ones() == k && w[a] != 0) {
            break;
        }
        order = k as i32;
    }
    order
}

fn random_table(rng: &mut ChaCha8Rng, n: u32) -> TruthTable {
    let bits: Vec<bool> = (0..1usize << n).map(|_| rng.gen()).collect();
    TruthTable::from_fn(n, |x| bits[x]).unwrap()
}

fn brute_seed() -> TruthTable {
    (0u32..1 << 16)
        .map(|bits| TruthTable::from_fn(4, |i| bits >> i & 1 == 1).unwrap())
        .find(|t| {
            let w = oracle_walsh(t);
            let peak = w.iter().map(|v| v.unsigned_abs()).max().unwrap();
            w[0] == 0 && 8 - peak / 2 == 4
        })
        .expect("a balanced 4-variable function with N = 4")
}

fn c1() -> Outcome {
    let t = Instant::now();
    let c = construct1(16, 1, &ConstructOptions::default()).map_err(|e| e.to_string())?;
    let e = within(t, Duration::from_secs(1))?;
    let table = c.table.as_ref().ok_or("no table")?;
    let p = profile(table).map_err(|e| e.to_string())?;
    ensure(table.len() == 1 << 16, || "wrong table size".into())?;
    ensure(p.resiliency >= 1, || format!("m={}", p.resiliency))?;
    let want = (1u64 << 15) - (1 << 7) - (1 << 5);
    ensure(p.nonlinearity >= want, || format!("N={} < {want}", p.nonlinearity))?;
    ensure(p.degree == 10, || format!("d={}", p.degree))?;
    Ok(format!("c1(16,1): m={} d={} N={} in {e:?}", p.resiliency, p.degree, p.nonlinearity))
}

fn c2_degree() -> Outcome {
    let rows = table1(1..=1, 12..=20);
    let mut parts = Vec::new();
    for n in (12..=20).step_by(2) {
        let t = Instant::now();
        let c = construct2(n, 1, &ConstructOptions::default()).map_err(|e| format!("n={n}: {e}"))?;
        let p = profile(c.table.as_ref().ok_or("no table")?).map_err(|e| e.to_string())?;
        within(t, Duration::from_secs(10))?;
        let row = rows.iter().find(|r| r.n == n).ok_or(format!("no row for n={n}"))?;
        ensure(p.degree == n as i32 - 2, || format!("n={n}: d={}", p.degree))?;
        ensure(p.resiliency >= 1, || format!("n={n}: m={}", p.resiliency))?;
        ensure(BigUint::from(p.nonlinearity) >= row.printed, || {
            format!("n={n}: N={} < {}", p.nonlinearity, row.printed)
        })?;
        parts.push(format!("n={n} N={}", p.nonlinearity));
    }
    Ok(format!("c2 degree n-m-1 at m=1: {}", parts.join(" ")))
}

fn soundness() -> Outcome {
    let t = Instant::now();
    let mut plans = 0;
    for n in (12..=20).step_by(2) {
        for m in 1..=2 {
            for (variant, mode) in [
                (Variant::C1, BaseMode::Plain),
                (Variant::C2, BaseMode::Disjoint),
                (Variant::C2, BaseMode::Monomial),
            ] {
                let pr = Problem {
                    n,
                    m,
                    variant,
                    mode,
                    seeds: Vec::new(),
                    select: None,
                };
                let Ok(sel) = solve_feasibility(&pr) else { continue };
                for shuffle in [None, Some(n as u64 * 31 + m as u64)] {
                    let opts = PlanOptions {
                        shuffle,
                        ..PlanOptions::default()
                    };
                    let plan = assign_phi(n, m, variant, mode, &sel, &[], &opts).map_err(|e| e.to_string())?;
                    let exact = certify_exact(&plan).map_err(|e| e.to_string())?;
                    let (_, measured) = certify_exhaustive(&plan).map_err(|e| e.to_string())?;
                    let tag = format!("({n},{m}) {variant} {mode} shuffle={shuffle:?}");
                    ensure(exact.mode == CertMode::StructuralExact, || format!("{tag}: not exact"))?;
                    ensure(exact.nonlinearity_exact == measured.nonlinearity_exact, || {
                        format!("{tag}: {:?} vs {:?}", exact.nonlinearity_exact, measured.nonlinearity_exact)
                    })?;
                    ensure(exact.resiliency_at_least <= measured.resiliency_at_least, || {
                        format!("{tag}: m {} > {}", exact.resiliency_at_least, measured.resiliency_at_least)
                    })?;
                    plans += 1;
                }
            }
        }
    }
    let e = within(t, Duration::from_secs(120))?;
    ensure(plans > 0, || "no feasible plans".into())?;
    Ok(format!("structural-exact equals exhaustive on {plans} plans in {e:?}"))
}

fn large_n() -> Outcome {
    let t = Instant::now();
    let opts = ConstructOptions {
        plan_only: true,
        ..ConstructOptions::default()
    };
    let c = construct2(30, 5, &opts).map_err(|e| e.to_string())?;
    let e = within(t, Duration::from_secs(60))?;
    let cert = &c.certificate;
    let want = pow2(29) - pow2(14) - pow2(13);
    ensure(c.table.is_none(), || "table materialized".into())?;
    ensure(cert.resiliency_at_least >= 5, || format!("m>={}", cert.resiliency_at_least))?;
    ensure(cert.degree_exact() == Some(24), || {
        format!("d in [{}, {}]", cert.degree_lower, cert.degree_upper)
    })?;
    ensure(cert.nonlinearity_at_least >= want, || format!("N>={}", cert.nonlinearity_at_least))?;
    Ok(format!(
        "(30,5,{},{}) {} in {e:?}",
        24,
        pow2_form(30, &cert.nonlinearity_at_least),
        cert.mode
    ))
}

fn oracles() -> Outcome {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for n in 4..=12 {
        for i in 0..200 {
            let f = random_table(&mut rng, n);
            let fast = fast_walsh(&f).map_err(|e| e.to_string())?;
            let naive = naive_walsh(&f).map_err(|e| e.to_string())?;
            let tag = format!("n={n} #{i}");
            ensure(fast.values() == naive.values(), || format!("{tag}: fast != naive"))?;
            ensure(parseval_check(&fast), || format!("{tag}: parseval"))?;
            ensure(anf_to_table(&anf(&f).map_err(|e| e.to_string())?) == f, || format!("{tag}: mobius"))?;
            if n <= 8 {
                ensure(fast.values() == oracle_walsh(&f).as_slice(), || format!("{tag}: definition"))?;
            }
        }
    }
    let e = within(t, Duration::from_secs(30))?;
    Ok(format!("1800 random tables, n=4..12, in {e:?}"))
}

fn disjointness() -> Outcome {
    let t = Instant::now();
    let seed = Tail::new(brute_seed(), TailKind::Resilient).map_err(|e| e.to_string())?;
    let mut checked = 0;
    let mut check = |name: String, members: &[Component]| -> Result<(), String> {
        let out = verify_members(members, DisjointMode::Exhaustive);
        checked += 1;
        ensure(out.is_disjoint(), || format!("{name}: {out:?}"))
    };
    for n in (8..=24).step_by(2) {
        let p = n / 2;
        for m in 0..p - 1 {
            let Ok(g0) = gamma0(n, m, Regime::Relaxed) else { continue };
            check(format!("G0({n},{m})"), &g0.members)?;
            for k in 1..=gamma_limit(n, m) {
                let g = gamma_k(n, m, k, Regime::Relaxed).map_err(|e| e.to_string())?;
                check(format!("G{k}({n},{m})"), &g.members)?;
            }
            if m + 2 <= p {
                let pivots: Vec<u32> = (1..=m + 1).collect();
                let c_prime = ((1u32 << (m + 1)) - 1) | 1 << (p - 1);
                let g = gamma0_prime(n, m, &pivots, c_prime, Regime::Relaxed).map_err(|e| e.to_string())?;
                check(format!("G0'({n},{m})"), &g.members)?;
            }
            for k in 1..=(p / 2).min(3) {
                let bent = Tail::new(mm_bent(k, k.max(2)).map_err(|e| e.to_string())?, TailKind::Bent)
                    .map_err(|e| e.to_string())?;
                if let Ok(o) = omega_k(n, m, k, 0, &[bent], Regime::Relaxed) {
                    check(format!("O{k}({n},{m},e=0)"), &o.members)?;
                }
            }
            if let Ok(o) = omega_k(n, m, 2, 1, &[seed.clone()], Regime::Relaxed) {
                check(format!("O2({n},{m},e=1)"), &o.members)?;
            }
        }
    }
    let e = within(t, Duration::from_secs(60))?;
    Ok(format!("{checked} families disjoint for n/2 <= 12 in {e:?}"))
}

fn composition() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut nontrivial = 0;
    for i in 0..100 {
        let t = rng.gen_range(1..=6u32);
        let q = rng.gen_range(1..=10 - t);
        let c = rng.gen_range(0..1u32 << t);
        let mut h = random_table(&mut rng, q);
        if rng.gen_bool(0.5) {
            // xor in the last tail variable so h is balanced
            h = TruthTable::from_fn(q, |x| h.get(x) ^ (x >> (q - 1) & 1 == 1)).unwrap();
        }
        let v = oracle_resiliency(&oracle_walsh(&h), q);
        let tail = Tail::new(h, TailKind::Plain).map_err(|e| e.to_string())?;
        let g = Component::partially_linear(t, c, tail).map_err(|e| e.to_string())?;
        let expanded = expand(&g).map_err(|e| e.to_string())?;
        let measured = oracle_resiliency(&oracle_walsh(&expanded), t + q);
        let bound = c.count_ones() as i32 + v;
        ensure(measured >= bound, || format!("#{i}: t={t} c={c:#x} v={v}: {measured} < {bound}"))?;
        if v >= 0 {
            nontrivial += 1;
        }
    }
    Ok(format!("100 random (c, h), {nontrivial} with balanced h"))
}

fn c3_small() -> Outcome {
    let t = Instant::now();
    let seed = SeedFunction::verify(
        brute_seed(),
        DeclaredProfile {
            n: 4,
            m: 0,
            d: None,
            nonlinearity: 4,
        },
        1,
    )
    .map_err(|e| e.to_string())?;
    let c = construct3(12, 1, &[seed], &ConstructOptions::default()).map_err(|e| e.to_string())?;
    let p = profile(c.table.as_ref().ok_or("no table")?).map_err(|e| e.to_string())?;
    let e = within(t, Duration::from_secs(5))?;
    ensure(p.resiliency >= 1, || format!("m={}", p.resiliency))?;
    ensure(p.nonlinearity >= 1984, || format!("N={}", p.nonlinearity))?;
    Ok(format!("c3(12,1): m={} N={} in {e:?}", p.resiliency, p.nonlinearity))
}

fn tables() -> Outcome {
    let t = Instant::now();
    let report = reproduce_tables(1..=4, 12..=512, &[]);
    let e = within(t, Duration::from_secs(300))?;
    for r in &report.rows {
        let line = r.to_line();
        ensure(r.computed.is_some() || r.status != TableStatus::Match, || format!("no value: {line}"))?;
        if r.status == TableStatus::Match {
            ensure(r.computed.as_ref() == Some(&r.printed), || format!("false match: {line}"))?;
        } else {
            ensure(r.computed.as_ref() != Some(&r.printed) || !r.note.is_empty(), || {
                format!("unexplained flag: {line}")
            })?;
        }
    }
    let t2 = table2(5..=6, 34..=64);
    for (n, m) in [(34, 6), (64, 5)] {
        let r = t2.iter().find(|r| r.n == n && r.m == m).ok_or(format!("no row ({n},{m})"))?;
        ensure(r.status == TableStatus::Anomaly, || format!("({n},{m}) not flagged: {}", r.to_line()))?;
    }
    Ok(format!(
        "{} rows: match={} improvement={} discrepancy={} anomaly={} in {e:?}",
        report.rows.len(),
        report.count(TableStatus::Match),
        report.count(TableStatus::Improvement),
        report.count(TableStatus::Discrepancy),
        report.count(TableStatus::Anomaly)
    ))
}

fn bound_entry(n: u32, m: u32) -> Outcome {
    let rows = table2(m..=m, n..=n);
    let r = rows.first().ok_or(format!("no entry ({n},{m})"))?;
    let computed = r.computed.as_ref().ok_or("nothing computed")?;
    ensure(r.status == TableStatus::Match && computed == &r.printed, || r.to_line())?;
    ensure(r.computed_degree == Some(r.printed_degree as i32), || r.to_line())?;
    Ok(format!("({n},{m},{},{})", r.printed_degree, pow2_form(n, computed)))
}

fn main() {
    let criteria: Vec<(&str, fn() -> Outcome)> = vec![
        ("1 c1(16,1) reproduction", c1),
        ("2 construction-2 degree", c2_degree),
        ("3 certificate soundness", soundness),
        ("4 large-n certificate", large_n),
        ("5 oracle equivalence", oracles),
        ("6 disjoint spectra", disjointness),
        ("7 partially linear composition", composition),
        ("8 construction-3 small", c3_small),
        ("9 table reproduction", tables),
        ("bound (100,21)", || bound_entry(100, 21)),
        ("bound (200,45)", || bound_entry(200, 45)),
        ("bound (500,10)", || bound_entry(500, 10)),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        let outcome = match catch_unwind(AssertUnwindSafe(f)) {
            Ok(o) => o,
            Err(p) => Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into())),
        };
        match outcome {
            Ok(detail) => println!("PASS criterion {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {name}: {why}");
            }
        }
    }
    if failed > 0 {
        println!("acceptance: {failed} failed");
        std::process::exit(1);
    }
    println!("acceptance: all passed");
}
