use std::fmt::Write as _;

use num_traits::Zero;

use crate::bf::FunctionProfile;
use crate::constructor::certify::{pow2_form, CertifiedProfile};
use crate::constructor::construct::Construction;

pub fn profile_lines(p: &FunctionProfile) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "n={}", p.n);
    let _ = writeln!(s, "balanced={}", p.balanced);
    let _ = writeln!(s, "m={}", p.resiliency);
    let _ = writeln!(s, "d={}", p.degree);
    let _ = writeln!(s, "N={}", p.nonlinearity);
    let _ = writeln!(s, "almost_optimal={}", p.almost_optimal);
    let _ = writeln!(s, "parseval={}", if p.parseval { "ok" } else { "FAILED" });
    s
}

pub fn certificate_lines(c: &CertifiedProfile) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "certificate={}", c.mode);
    let _ = writeln!(s, "n={}", c.n);
    let _ = writeln!(s, "m>={}", c.resiliency_at_least);
    match c.degree_exact() {
        Some(d) => {
            let _ = writeln!(s, "d={d}");
        }
        None => {
            let _ = writeln!(s, "d>={}", c.degree_lower);
            let _ = writeln!(s, "d<={}", c.degree_upper);
        }
    }
    let _ = writeln!(s, "N>={}", c.nonlinearity_at_least);
    let _ = writeln!(s, "N_form={}", pow2_form(c.n, &c.nonlinearity_at_least));
    if let Some(x) = &c.nonlinearity_exact {
        let _ = writeln!(s, "N_exact={x}");
    }
    let _ = writeln!(s, "closed_form={}", pow2_form(c.n, &c.closed_form));
    if c.plain_form != c.closed_form {
        let _ = writeln!(s, "plain_form={}", pow2_form(c.n, &c.plain_form));
    }
    let _ = writeln!(s, "almost_optimal={}", c.almost_optimal());
    s
}

pub fn construction_lines(c: &Construction) -> String {
    let p = &c.plan;
    let mut s = String::new();
    let _ = writeln!(s, "variant={}", p.variant);
    let _ = writeln!(s, "base={}", p.mode);
    let bits: Vec<String> = p.a.iter().map(|&b| (b as u8).to_string()).collect();
    let _ = writeln!(s, "a={}", if bits.is_empty() { "-".into() } else { bits.join(",") });
    if p.e.iter().any(|&e| e != 0) {
        let e: Vec<String> = p.e.iter().map(u32::to_string).collect();
        let _ = writeln!(s, "e={}", e.join(","));
    }
    let fams: Vec<String> = p
        .families
        .iter()
        .filter(|f| !f.used.is_zero())
        .map(|f| format!("{}:{}", f.label, f.used))
        .collect();
    let _ = writeln!(s, "families={}", fams.join(","));
    if let Some(seed) = p.shuffle {
        let _ = writeln!(s, "shuffle={seed}");
    }
    s.push_str(&certificate_lines(&c.certificate));
    if let Some(x) = &c.cross_check {
        let _ = writeln!(s, "measured_m={}", x.resiliency_at_least);
        let _ = writeln!(s, "measured_d={}", x.degree_lower);
        let _ = writeln!(s, "measured_N={}", x.nonlinearity_at_least);
        let _ = writeln!(s, "cross_check=ok");
    }
    s
}
