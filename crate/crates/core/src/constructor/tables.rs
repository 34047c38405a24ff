//! Published parameter tables for degree-optimized almost optimal resilient
//! functions, recomputed from plan-only certificates and compared entry by
//! entry.

use std::fmt;
use std::ops::RangeInclusive;

use num_bigint::BigUint;

use crate::constructor::certify::pow2_form;
use crate::constructor::construct::{construct2, ConstructOptions};
use crate::constructor::counting::pow2;
use crate::constructor::feasibility::BaseMode;
use crate::constructor::plan::PlanOptions;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TableStatus {
    Match,
    /// The computed bound exceeds the printed one.
    Improvement,
    /// The computed bound is smaller, or nothing could be built.
    Discrepancy,
    /// The printed entry is internally inconsistent.
    Anomaly,
}

impl fmt::Display for TableStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TableStatus::Match => "match",
            TableStatus::Improvement => "improvement",
            TableStatus::Discrepancy => "discrepancy",
            TableStatus::Anomaly => "anomaly",
        })
    }
}

/// One Table 1 row: `2^(n-1) - 2^(n/2-1) - sum 2^((n+a)/4) - c` over
/// `lo <= n <= hi`, `n` stepping by 4.
struct Row1 {
    m: u32,
    lo: u32,
    hi: u32,
    offsets: &'static [u32],
    constants: &'static [u32],
    note: Option<&'static str>,
}

const fn r1(m: u32, lo: u32, hi: u32, offsets: &'static [u32], c: &'static [u32]) -> Row1 {
    Row1 {
        m,
        lo,
        hi,
        offsets,
        constants: c,
        note: None,
    }
}

const TABLE1: &[Row1] = &[
    r1(1, 12, 20, &[4], &[4]),
    r1(1, 24, 112, &[8], &[4]),
    r1(1, 116, 132, &[8, 4], &[4]),
    r1(1, 136, 136, &[8, 4, 0], &[4]),
    r1(1, 140, 492, &[12], &[4]),
    r1(1, 496, 512, &[12, 4], &[4]),
    r1(1, 14, 50, &[6], &[4]),
    r1(1, 54, 58, &[6, 2], &[4]),
    r1(1, 62, 238, &[10], &[4]),
    r1(1, 242, 246, &[10, 2], &[4]),
    r1(1, 250, 290, &[10, 6], &[4]),
    r1(1, 294, 298, &[10, 6, 2], &[4]),
    r1(2, 16, 16, &[8], &[8]),
    r1(2, 20, 40, &[12], &[8]),
    r1(2, 44, 44, &[12, 8], &[8]),
    r1(2, 48, 84, &[16], &[8]),
    r1(2, 88, 88, &[16, 8], &[8]),
    r1(2, 92, 96, &[16, 12], &[8]),
    r1(2, 100, 176, &[20], &[8]),
    r1(2, 18, 26, &[10], &[8]),
    r1(2, 30, 58, &[14], &[8]),
    r1(2, 62, 66, &[14, 10], &[8]),
    r1(2, 70, 122, &[18], &[8]),
    r1(3, 20, 20, &[12, 8], &[16]),
    r1(3, 24, 32, &[16], &[16]),
    r1(3, 36, 36, &[16, 12], &[16]),
    Row1 {
        m: 3,
        lo: 40,
        hi: 56,
        offsets: &[20],
        constants: &[16, 16],
        note: Some("constant printed twice as -16-16"),
    },
    r1(3, 60, 60, &[20, 16], &[16]),
    r1(3, 64, 88, &[24], &[16]),
    r1(3, 92, 92, &[24, 16], &[16]),
    r1(3, 96, 96, &[24, 20], &[16]),
    r1(3, 100, 144, &[28], &[16]),
    r1(3, 22, 26, &[14], &[16]),
    r1(3, 30, 42, &[18], &[16]),
    r1(3, 46, 46, &[18, 14], &[16]),
    Row1 {
        m: 3,
        lo: 52,
        hi: 70,
        offsets: &[22],
        constants: &[16],
        note: Some("range printed as 52..70 in the n=2 mod 4 block; read as 54..70, n=50 uncovered"),
    },
    r1(3, 74, 74, &[22, 18], &[16]),
    r1(3, 78, 78, &[22, 18, 14], &[16]),
    r1(3, 82, 114, &[26], &[16]),
    r1(4, 28, 32, &[20], &[32]),
    r1(4, 36, 48, &[24], &[32]),
    r1(4, 52, 52, &[24, 20], &[32]),
    r1(4, 56, 68, &[28], &[32]),
    r1(4, 72, 72, &[28, 20, 16], &[32]),
    r1(4, 76, 100, &[32], &[32]),
    r1(4, 26, 26, &[18], &[32]),
    r1(4, 30, 38, &[22], &[32]),
    r1(4, 42, 42, &[22, 18], &[32]),
    r1(4, 46, 58, &[26], &[32]),
    r1(4, 62, 62, &[26, 22], &[32]),
    r1(4, 66, 82, &[30], &[32]),
    r1(4, 86, 86, &[30, 22, 18, 14], &[32]),
    r1(4, 90, 90, &[30, 26, 22], &[32]),
    r1(4, 94, 118, &[34], &[32]),
];

/// One Table 2 entry `(n, m, d, 2^lead - sum 2^e)`.
struct Entry2 {
    n: u32,
    m: u32,
    d: u32,
    lead: u32,
    exps: &'static [u32],
    star: bool,
    truncated: bool,
}

const fn e2(n: u32, m: u32, d: u32, lead: u32, exps: &'static [u32], star: bool) -> Entry2 {
    Entry2 {
        n,
        m,
        d,
        lead,
        exps,
        star,
        truncated: false,
    }
}

const TABLE2: &[Entry2] = &[
    e2(30, 5, 24, 29, &[14, 13], false),
    e2(36, 5, 30, 35, &[17, 15, 6], true),
    e2(38, 5, 32, 37, &[18, 16], false),
    e2(42, 5, 36, 41, &[20, 17, 14, 6], true),
    e2(44, 5, 38, 43, &[21, 18, 6], true),
    e2(48, 5, 42, 47, &[23, 19, 6], true),
    e2(54, 5, 48, 53, &[26, 21, 6], true),
    e2(58, 5, 52, 57, &[28, 22, 21, 6], true),
    e2(60, 5, 54, 59, &[29, 23, 6], true),
    e2(64, 5, 48, 63, &[31, 24, 6], true),
    e2(70, 5, 64, 69, &[34, 26, 6], true),
    e2(74, 5, 68, 73, &[36, 27, 24, 6], true),
    e2(76, 5, 70, 75, &[37, 28, 6], true),
    e2(80, 5, 74, 79, &[39, 29, 6], true),
    e2(84, 5, 78, 83, &[41, 30, 6], true),
    e2(88, 5, 82, 87, &[43, 31, 30, 6], true),
    e2(90, 5, 84, 89, &[44, 32, 6], true),
    e2(94, 5, 88, 93, &[46, 33, 6], true),
    e2(98, 5, 92, 97, &[48, 34, 32, 6], true),
    e2(100, 5, 94, 99, &[49, 35, 6], true),
    e2(34, 6, 27, 23, &[16, 15], false),
    e2(40, 6, 33, 39, &[19, 17, 16, 7], true),
    e2(42, 6, 35, 41, &[20, 18], false),
    e2(48, 6, 41, 47, &[23, 20, 7], true),
    e2(52, 6, 45, 51, &[25, 22], false),
    e2(54, 6, 47, 53, &[26, 22, 7], true),
    e2(60, 6, 53, 59, &[29, 24, 7], true),
    e2(64, 6, 47, 63, &[31, 25, 24, 7], true),
    e2(66, 6, 59, 65, &[32, 26, 7], true),
    e2(70, 6, 63, 69, &[34, 27, 7], true),
    e2(76, 6, 69, 75, &[37, 29, 7], true),
    e2(80, 6, 73, 79, &[39, 30, 29, 7], true),
    e2(82, 6, 75, 81, &[40, 31, 7], true),
    e2(86, 6, 79, 85, &[42, 32, 7], true),
    e2(90, 6, 83, 89, &[44, 33, 32, 7], true),
    e2(92, 6, 85, 91, &[45, 34, 7], true),
    e2(96, 6, 89, 95, &[47, 35, 7], true),
    e2(100, 6, 93, 99, &[49, 36, 35, 7], true),
    e2(38, 7, 30, 37, &[18, 17, 16], false),
    e2(40, 7, 32, 39, &[19, 18], false),
    e2(46, 7, 38, 45, &[22, 20], false),
    e2(48, 7, 40, 47, &[23, 21], false),
    e2(52, 7, 44, 51, &[25, 22, 21, 8], true),
    e2(54, 7, 46, 53, &[26, 23], false),
    e2(58, 7, 50, 57, &[28, 24, 23, 8], true),
    e2(60, 7, 52, 59, &[29, 25, 8], true),
    e2(64, 7, 46, 63, &[31, 26, 25, 8], true),
    e2(66, 7, 58, 65, &[32, 27, 8], true),
    e2(70, 7, 62, 69, &[34, 28, 27, 8], true),
    e2(72, 7, 64, 71, &[35, 29, 8], true),
    e2(76, 7, 68, 73, &[37, 30, 8], true),
    e2(78, 7, 70, 77, &[38, 31, 8], true),
    e2(82, 7, 74, 81, &[40, 32, 8], true),
    e2(86, 7, 78, 85, &[42, 33, 32, 8], true),
    e2(88, 7, 80, 87, &[43, 34, 8], true),
    e2(92, 7, 84, 91, &[45, 35, 8], true),
    e2(98, 7, 90, 97, &[48, 37, 8], true),
    e2(100, 7, 92, 99, &[49, 38, 8], true),
    e2(42, 8, 33, 41, &[20, 19, 18], false),
    e2(44, 8, 35, 43, &[21, 20], false),
    e2(50, 8, 41, 49, &[24, 22, 21], false),
    e2(52, 8, 43, 51, &[25, 23], false),
    e2(58, 8, 49, 57, &[28, 25, 9], true),
    e2(64, 8, 45, 63, &[31, 27, 9], true),
    e2(68, 8, 59, 67, &[33, 25, 29], false),
    e2(70, 8, 61, 69, &[34, 29, 27, 9], true),
    e2(72, 8, 63, 71, &[35, 30, 9], true),
    e2(76, 8, 67, 75, &[37, 31, 28, 9], true),
    e2(78, 8, 69, 77, &[38, 32, 9], true),
    e2(82, 8, 73, 81, &[40, 33, 9], true),
    e2(88, 8, 79, 87, &[43, 35, 9], true),
    e2(92, 8, 83, 91, &[45, 36, 35, 9], true),
    e2(94, 8, 85, 93, &[46, 37, 9], true),
    e2(98, 8, 89, 97, &[48, 38, 36, 9], true),
    e2(100, 8, 91, 99, &[49, 39, 9], true),
    e2(200, 8, 191, 199, &[99, 68, 9], true),
    e2(46, 9, 36, 45, &[22, 21, 20, 19, 10], true),
    e2(48, 9, 38, 47, &[23, 22], false),
    e2(54, 9, 44, 53, &[26, 24, 23, 22], false),
    e2(56, 9, 46, 55, &[27, 25], false),
    e2(62, 9, 52, 61, &[30, 27, 26], false),
    e2(64, 9, 44, 63, &[31, 28], false),
    e2(68, 9, 58, 67, &[33, 29, 28, 27, 10], true),
    e2(70, 9, 60, 69, &[34, 30, 10], true),
    Entry2 {
        n: 74,
        m: 9,
        d: 64,
        lead: 73,
        exps: &[36, 32],
        star: false,
        truncated: true,
    },
    e2(76, 9, 66, 75, &[37, 32, 10], true),
    e2(80, 9, 70, 79, &[39, 34, 10], true),
    e2(82, 9, 72, 81, &[40, 34, 10], true),
    e2(88, 9, 78, 87, &[43, 36, 10], true),
    e2(94, 9, 84, 93, &[46, 38, 10], true),
    e2(98, 9, 88, 97, &[48, 39, 38, 10], true),
    e2(100, 9, 90, 99, &[49, 40, 10], true),
    e2(52, 10, 41, 51, &[25, 24], false),
    e2(60, 10, 49, 59, &[29, 27], false),
    e2(66, 10, 55, 65, &[32, 29, 28, 27, 26, 25, 11], true),
    e2(68, 10, 57, 67, &[33, 30], false),
    e2(74, 10, 63, 73, &[36, 32, 30, 11], true),
    e2(76, 10, 65, 75, &[37, 33], false),
    e2(80, 10, 69, 79, &[39, 34, 33, 11], true),
    e2(82, 10, 71, 81, &[40, 35, 11], true),
    e2(84, 10, 73, 83, &[41, 36, 11], true),
    e2(86, 10, 75, 85, &[42, 36, 35, 34, 11], true),
    e2(88, 10, 77, 87, &[43, 37, 11], true),
    e2(92, 10, 81, 91, &[45, 38, 37, 36, 35, 11], true),
    e2(94, 10, 83, 93, &[46, 39, 11], true),
    e2(98, 10, 87, 97, &[48, 40, 39, 38, 11], true),
    e2(100, 10, 89, 99, &[49, 41, 11], true),
    e2(500, 10, 489, 499, &[249, 153, 11], true),
    e2(100, 21, 78, 99, &[49, 48], false),
    e2(200, 45, 154, 199, &[99, 98], false),
    e2(184, 38, 145, 183, &[91, 89, 87, 86], false),
    e2(516, 116, 399, 515, &[255, 253], false),
    e2(832, 200, 631, 831, &[415, 414, 413], false),
    e2(10000, 2475, 7524, 9999, &[4999, 4998, 4997, 4996], false),
];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableRow {
    pub table: u8,
    pub n: u32,
    pub m: u32,
    /// Printed degree (Table 1 rows always print `n-m-1`).
    pub printed_degree: u32,
    pub printed: BigUint,
    /// The printed value as a formula.
    pub printed_form: String,
    pub starred: bool,
    pub computed: Option<BigUint>,
    pub computed_degree: Option<i32>,
    pub mode: Option<BaseMode>,
    /// Closed form of the monomial base on its own, when feasible.
    pub monomial: Option<BigUint>,
    pub status: TableStatus,
    pub note: String,
}

impl TableRow {
    pub fn to_line(&self) -> String {
        let computed = self
            .computed
            .as_ref()
            .map_or("-".to_string(), |c| pow2_form(self.n, c));
        let mut s = format!(
            "table={} n={} m={} d_printed={} d={} N={} printed={} mode={} status={}",
            self.table,
            self.n,
            self.m,
            self.printed_degree,
            self.computed_degree.map_or("-".into(), |d| d.to_string()),
            computed,
            self.printed_form,
            self.mode.map_or("-".into(), |m| m.to_string()),
            self.status
        );
        if self.starred {
            s.push_str(" star=1");
        }
        if !self.note.is_empty() {
            s.push_str(&format!(" note=\"{}\"", self.note));
        }
        s
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Observation {
    pub n: u32,
    /// Largest `m` with a feasible degree-optimized almost optimal plan.
    pub max_m: Option<u32>,
}

impl Observation {
    pub fn ratio(&self) -> Option<f64> {
        self.max_m.map(|m| m as f64 / self.n as f64)
    }

    pub fn to_line(&self) -> String {
        match self.max_m {
            Some(m) => format!("observe n={} max_m={m} ratio={:.4}", self.n, m as f64 / self.n as f64),
            None => format!("observe n={} max_m=-", self.n),
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct TableReport {
    pub rows: Vec<TableRow>,
    pub observations: Vec<Observation>,
}

impl TableReport {
    pub fn count(&self, status: TableStatus) -> usize {
        self.rows.iter().filter(|r| r.status == status).count()
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for r in &self.rows {
            out.push_str(&r.to_line());
            out.push('\n');
        }
        for o in &self.observations {
            out.push_str(&o.to_line());
            out.push('\n');
        }
        out.push_str(&format!(
            "summary rows={} match={} improvement={} discrepancy={} anomaly={}\n",
            self.rows.len(),
            self.count(TableStatus::Match),
            self.count(TableStatus::Improvement),
            self.count(TableStatus::Discrepancy),
            self.count(TableStatus::Anomaly)
        ));
        out
    }
}

fn count_only(mode: Option<BaseMode>) -> ConstructOptions {
    ConstructOptions {
        plan: PlanOptions {
            materialize: false,
            ..PlanOptions::default()
        },
        mode,
        select: None,
        plan_only: true,
    }
}

/// Best closed form over both Construction 2 bases, plus the monomial base
/// alone. Plan-only, nothing materialized.
pub struct C2Bounds {
    pub best: BigUint,
    pub mode: BaseMode,
    pub degree: i32,
    pub monomial: Option<BigUint>,
}

pub fn c2_bounds(n: u32, m: u32) -> Result<C2Bounds> {
    let best = construct2(n, m, &count_only(None))?;
    let monomial = match construct2(n, m, &count_only(Some(BaseMode::Monomial))) {
        Ok(c) => Some(c.certificate.closed_form),
        Err(Error::Infeasible(_)) => None,
        Err(e) => return Err(e),
    };
    Ok(C2Bounds {
        best: best.certificate.closed_form,
        mode: best.plan.mode,
        degree: best.certificate.degree_lower,
        monomial,
    })
}

fn formula(n: u32, lead: u32, exps: &[u32]) -> String {
    let mut s = format!("2^{lead}");
    for e in exps {
        s.push_str(&format!("-2^{e}"));
    }
    if lead != n - 1 {
        s.push_str(" (printed)");
    }
    s
}

fn compare(computed: &BigUint, printed: &BigUint) -> TableStatus {
    match computed.cmp(printed) {
        std::cmp::Ordering::Equal => TableStatus::Match,
        std::cmp::Ordering::Greater => TableStatus::Improvement,
        std::cmp::Ordering::Less => TableStatus::Discrepancy,
    }
}

fn fill(row: &mut TableRow, anomalies: Vec<String>) {
    match c2_bounds(row.n, row.m) {
        Ok(b) => {
            let mut status = compare(&b.best, &row.printed);
            let mut notes = anomalies;
            if status == TableStatus::Improvement && b.monomial.as_ref() == Some(&row.printed) {
                notes.push("monomial base reproduces the printed value".into());
            }
            if b.degree != (row.n - row.m - 1) as i32 {
                notes.push(format!("certified degree {} below n-m-1", b.degree));
            }
            if !notes.is_empty() && !row.note.is_empty() {
                row.note.push_str("; ");
            }
            if status != TableStatus::Improvement && !notes.is_empty() && row.status == TableStatus::Anomaly {
                status = TableStatus::Anomaly;
            }
            row.note.push_str(&notes.join("; "));
            if row.status != TableStatus::Anomaly {
                row.status = status;
            } else if row.note.is_empty() {
                row.note = format!("computed {status}");
            } else {
                row.note.push_str(&format!("; computed {status}"));
            }
            row.computed = Some(b.best);
            row.computed_degree = Some(b.degree);
            row.mode = Some(b.mode);
            row.monomial = b.monomial;
        }
        Err(e) => {
            row.status = TableStatus::Discrepancy;
            row.note = e.to_string();
        }
    }
}

fn table1_value(n: u32, offsets: &[u32], constants: &[u32]) -> BigUint {
    let mut sub = pow2(n / 2 - 1);
    for a in offsets {
        sub += pow2((n + a) / 4);
    }
    for c in constants {
        sub += *c;
    }
    pow2(n - 1) - sub
}

fn table1_form(n: u32, offsets: &[u32], constants: &[u32]) -> String {
    let mut s = format!("2^{}-2^{}", n - 1, n / 2 - 1);
    for a in offsets {
        s.push_str(&format!("-2^{}", (n + a) / 4));
    }
    for c in constants {
        s.push_str(&format!("-{c}"));
    }
    s
}

/// Table 1 rows with `m` and `n` inside the given ranges.
pub fn table1(ms: RangeInclusive<u32>, ns: RangeInclusive<u32>) -> Vec<TableRow> {
    let mut out = Vec::new();
    for row in TABLE1.iter().filter(|r| ms.contains(&r.m)) {
        // the misplaced m=3 range keeps its residue class
        let start = if row.lo % 4 != row.hi % 4 { row.lo + 2 } else { row.lo };
        for n in (start..=row.hi).step_by(4).filter(|n| ns.contains(n)) {
            let printed = table1_value(n, row.offsets, row.constants);
            let mut r = TableRow {
                table: 1,
                n,
                m: row.m,
                printed_degree: n - row.m - 1,
                printed,
                printed_form: table1_form(n, row.offsets, row.constants),
                starred: false,
                computed: None,
                computed_degree: None,
                mode: None,
                monomial: None,
                status: TableStatus::Match,
                note: String::new(),
            };
            let mut anomalies = Vec::new();
            if let Some(note) = row.note {
                r.status = TableStatus::Anomaly;
                r.note = note.to_string();
                if row.constants.len() > 1 {
                    let single = table1_value(n, row.offsets, &row.constants[..1]);
                    anomalies.push(format!("single constant gives {}", pow2_form(n, &single)));
                }
            }
            fill(&mut r, anomalies);
            out.push(r);
        }
    }
    out
}

/// Table 2 entries with `m` and `n` inside the given ranges.
pub fn table2(ms: RangeInclusive<u32>, ns: RangeInclusive<u32>) -> Vec<TableRow> {
    let mut out = Vec::new();
    for e in TABLE2.iter().filter(|e| ms.contains(&e.m) && ns.contains(&e.n)) {
        let mut printed = pow2(e.lead);
        let mut sub = BigUint::default();
        for x in e.exps {
            sub += pow2(*x);
        }
        printed = if printed >= sub { printed - sub } else { BigUint::default() };
        let mut issues = Vec::new();
        if e.lead != e.n - 1 {
            issues.push(format!("leading term printed as 2^{}, expected 2^{}", e.lead, e.n - 1));
        }
        if e.d != e.n - e.m - 1 {
            issues.push(format!("degree printed as {}, n-m-1 is {}", e.d, e.n - e.m - 1));
        }
        if e.exps.windows(2).any(|w| w[0] <= w[1]) {
            issues.push("exponents out of order".into());
        }
        if e.truncated {
            issues.push("entry truncated in print".into());
        }
        if e.exps.first() != Some(&(e.n / 2 - 1)) {
            issues.push(format!("term 2^{} (n/2-1) missing", e.n / 2 - 1));
        }
        let corrected = corrected_reading(e);
        if !issues.is_empty() {
            issues.push(format!("corrected reading {}", pow2_form(e.n, &corrected)));
        }
        let mut r = TableRow {
            table: 2,
            n: e.n,
            m: e.m,
            printed_degree: e.d,
            printed,
            printed_form: formula(e.n, e.lead, e.exps),
            starred: e.star,
            computed: None,
            computed_degree: None,
            mode: None,
            monomial: None,
            status: if issues.is_empty() { TableStatus::Match } else { TableStatus::Anomaly },
            note: issues.join("; "),
        };
        fill(&mut r, Vec::new());
        if r.status == TableStatus::Anomaly {
            if let Some(c) = &r.computed {
                r.note.push_str(&format!("; against the corrected reading: {}", compare(c, &corrected)));
            }
        }
        out.push(r);
    }
    out
}

/// Leading term `2^(n-1)`, the `2^(n/2-1)` term present, exponents sorted.
fn corrected_reading(e: &Entry2) -> BigUint {
    let mut exps: Vec<u32> = e.exps.to_vec();
    if !exps.contains(&(e.n / 2 - 1)) {
        exps.push(e.n / 2 - 1);
    }
    exps.sort_unstable_by(|a, b| b.cmp(a));
    pow2(e.n - 1) - exps.iter().map(|x| pow2(*x)).sum::<BigUint>()
}

fn almost_optimal_feasible(n: u32, m: u32) -> bool {
    match c2_bounds(n, m) {
        Ok(b) => b.best >= pow2(n - 1) - pow2(n / 2),
        Err(_) => false,
    }
}

/// Largest `m` admitting a degree-optimized almost optimal plan at `n`.
pub fn max_resiliency(n: u32) -> Option<u32> {
    if !almost_optimal_feasible(n, 0) && !almost_optimal_feasible(n, 1) {
        return None;
    }
    let (mut lo, mut hi) = (1u32, n / 2 - 2);
    if !almost_optimal_feasible(n, 1) {
        return Some(0);
    }
    while lo < hi {
        let mid = (lo + hi).div_ceil(2);
        if almost_optimal_feasible(n, mid) {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    Some(lo)
}

pub const OBSERVATION_SIZES: &[u32] = &[40, 100, 200, 500, 1000, 2000];

/// Both tables restricted to the ranges, plus the `m/n` observations.
pub fn reproduce_tables(ms: RangeInclusive<u32>, ns: RangeInclusive<u32>, observe: &[u32]) -> TableReport {
    let mut rows = table1(ms.clone(), ns.clone());
    rows.extend(table2(ms, ns));
    let observations = observe
        .iter()
        .map(|&n| Observation {
            n,
            max_m: max_resiliency(n),
        })
        .collect();
    TableReport { rows, observations }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_block_matches() {
        let rows = table1(1..=1, 12..=20);
        assert_eq!(rows.iter().map(|r| r.n).collect::<Vec<_>>(), vec![12, 16, 20, 14, 18]);
        for r in &rows {
            assert_eq!(r.status, TableStatus::Match, "{}", r.to_line());
        }
        assert_eq!(rows[0].printed, BigUint::from(1996u32));
    }

    #[test]
    fn anomalies_are_flagged() {
        let rows = table2(5..=6, 30..=34);
        let r34 = rows.iter().find(|r| r.n == 34).unwrap();
        assert_eq!(r34.status, TableStatus::Anomaly);
        let r30 = rows.iter().find(|r| r.n == 30).unwrap();
        assert_eq!(r30.status, TableStatus::Match);
        let r64 = table2(5..=5, 64..=64);
        assert_eq!(r64[0].status, TableStatus::Anomaly);
    }

    #[test]
    fn misplaced_range_keeps_residue() {
        let rows = table1(3..=3, 50..=56);
        assert!(rows.iter().all(|r| r.n != 52 || r.printed_form.contains("-16-16")));
        assert!(rows.iter().any(|r| r.n == 54));
        assert!(rows.iter().all(|r| r.n != 50));
    }
}
