//! Commands behind the `bhmirror` binary. Each returns the text to print and the exit status.

use std::fmt::Write as _;

use bhmirror::catalog::{builtin_cases, krawitz_catalog, setup_for, verify_case, verify_polynomial, Case, CaseReport};
use bhmirror::geometry::{k3_analysis, sector_grid, K3Report, SectorGrid};
use bhmirror::mirror::{build_mirror_pair, Report};
use bhmirror::statespace::build_h;
use bhmirror::symmetry::{aut_group, dual_group, j_element, sl_group};
use bhmirror::{CyclicSetup, Error, GroupSpec, InvertiblePolynomial, Result, SymmetryGroup};
use rayon::prelude::*;
use serde_json::{json, Value};

pub const SCHEMA: &str = "bhmirror/1";

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy)]
pub struct Options {
    pub format: Format,
    pub weights: bool,
    pub diamonds: bool,
    pub cap: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub text: String,
    pub code: i32,
}

fn ok(text: String) -> Output {
    Output { text, code: EXIT_OK }
}

fn json_out(v: Value) -> String {
    let mut s = serde_json::to_string_pretty(&v).expect("serializable");
    s.push('\n');
    s
}

pub fn error_output(e: &Error, format: Format) -> Output {
    let code = if e.is_internal() { EXIT_INTERNAL } else { EXIT_INPUT };
    let text = match format {
        Format::Json => json_out(json!({"schema": SCHEMA, "error": {"code": e.code(), "message": e.to_string()}})),
        _ => format!("error[{}]: {e}\n", e.code()),
    };
    Output { text, code }
}

fn csv_pairs(rows: &[(&str, String)]) -> String {
    let mut out = String::from("key,value\n");
    for (k, v) in rows {
        let v = if v.contains(',') { format!("\"{v}\"") } else { v.clone() };
        let _ = writeln!(out, "{k},{v}");
    }
    out
}

fn group_json(g: &SymmetryGroup) -> Value {
    json!({
        "order": g.order(),
        "generators": g.generators().iter().map(|x| x.to_string()).collect::<Vec<_>>(),
    })
}

fn atom_text(p: &InvertiblePolynomial) -> String {
    p.atoms()
        .iter()
        .map(|a| {
            let names: Vec<&str> = a.vars().iter().map(|&v| p.var_names()[v].as_str()).collect();
            format!("{a}[{}]", names.join(","))
        })
        .collect::<Vec<_>>()
        .join(" ")
}

fn list<T: ToString>(xs: &[T]) -> String {
    format!("({})", xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
}

/// Weights, degree, atoms and the basic groups.
pub fn cmd_analyze(poly: &str, group: Option<&str>, opts: &Options) -> Result<Output> {
    let p = InvertiblePolynomial::parse(poly)?;
    let aut = aut_group(&p, opts.cap)?;
    let sl = sl_group(&p, opts.cap)?;
    let j = j_element(&p);
    let split = p.split_cyclic().ok();
    let chosen = match group {
        Some(g) => Some((g.to_string(), GroupSpec::parse(g)?.resolve(&p, split.as_ref().map(|s| s.0), opts.cap)?)),
        None => None,
    };
    let s_elem = split.as_ref().map(|(k, _)| bhmirror::symmetry::s_element(&p).map(|s| (*k, s))).transpose()?;
    let text = match opts.format {
        Format::Json => json_out(json!({
            "schema": SCHEMA,
            "command": "analyze",
            "polynomial": p.to_text(),
            "variables": p.var_names(),
            "weights": p.weights(),
            "degree": p.degree(),
            "calabi_yau": p.is_calabi_yau(),
            "atoms": p.atoms(),
            "aut_order": aut.order(),
            "j": j.to_string(),
            "sl_order": sl.order(),
            "split": s_elem.as_ref().map(|(k, s)| json!({"k": k, "s": s.to_string()})),
            "group": chosen.as_ref().map(|(spec, g)| {
                let mut v = group_json(g);
                v["spec"] = json!(spec);
                v
            }),
        })),
        Format::Text | Format::Csv => {
            let mut rows: Vec<(&str, String)> = vec![
                ("polynomial", p.to_text()),
                ("variables", list(p.var_names())),
                ("weights", list(p.weights())),
                ("degree", p.degree().to_string()),
                ("calabi_yau", if p.is_calabi_yau() { "yes" } else { "no" }.to_string()),
                ("atoms", atom_text(&p)),
                ("aut_order", aut.order().to_string()),
                ("j", j.to_string()),
                ("sl_order", sl.order().to_string()),
            ];
            if let Some((k, s)) = &s_elem {
                rows.push(("k", k.to_string()));
                rows.push(("s", s.to_string()));
            }
            if let Some((spec, g)) = &chosen {
                rows.push(("group", spec.clone()));
                rows.push(("group_order", g.order().to_string()));
            }
            if opts.format == Format::Csv {
                csv_pairs(&rows)
            } else {
                rows.iter().map(|(k, v)| format!("{k:<12}{v}\n")).collect()
            }
        }
    };
    Ok(ok(text))
}

/// Transpose, the dual of an acting group, and for `x0^k + f` the mirror cyclic setup.
pub fn cmd_mirror(poly: &str, group: &str, k_spec: &str, opts: &Options) -> Result<Output> {
    let p = InvertiblePolynomial::parse(poly)?;
    let t = p.transpose();
    let split = p.split_cyclic().ok();
    let h = GroupSpec::parse(group)?.resolve(&p, split.as_ref().map(|s| s.0), opts.cap)?;
    let hd = dual_group(&p, &h, opts.cap)?;
    let cyclic = match &split {
        Some((k, f)) => {
            let kg = GroupSpec::parse(k_spec)?.resolve(f, Some(*k), opts.cap)?;
            let setup = CyclicSetup::new(&p, &kg, opts.cap)?;
            let pair = build_mirror_pair(&setup, opts.cap)?;
            Some((setup, pair.target))
        }
        None => None,
    };
    let text = match opts.format {
        Format::Json => json_out(json!({
            "schema": SCHEMA,
            "command": "mirror",
            "polynomial": p.to_text(),
            "transpose": t.to_text(),
            "transpose_weights": t.weights(),
            "transpose_degree": t.degree(),
            "transpose_calabi_yau": t.is_calabi_yau(),
            "group": {"spec": group, "order": h.order(), "generators": group_json(&h)["generators"]},
            "dual_group": group_json(&hd),
            "cyclic": cyclic.as_ref().map(|(s, m)| json!({
                "k": s.k,
                "K": k_spec,
                "K_order": s.k_group.order(),
                "K_j_order": s.h_group.order(),
                "K_js_order": s.g_group.order(),
                "mirror_K": group_json(&m.k_group),
                "mirror_K_j_order": m.h_group.order(),
                "mirror_K_js_order": m.g_group.order(),
            })),
        })),
        Format::Text | Format::Csv => {
            let mut rows: Vec<(&str, String)> = vec![
                ("polynomial", p.to_text()),
                ("transpose", t.to_text()),
                ("transpose_weights", list(t.weights())),
                ("transpose_degree", t.degree().to_string()),
                ("transpose_cy", if t.is_calabi_yau() { "yes" } else { "no" }.to_string()),
                ("group", format!("{group} (order {})", h.order())),
                ("dual_group", format!("order {}", hd.order())),
                ("dual_gens", hd.generators().iter().map(|g| g.to_string()).collect::<Vec<_>>().join(" ")),
            ];
            if let Some((s, m)) = &cyclic {
                rows.push(("k", s.k.to_string()));
                rows.push(("K", format!("{k_spec} (order {})", s.k_group.order())));
                rows.push(("K[j]", s.h_group.order().to_string()));
                rows.push(("K[j,s]", s.g_group.order().to_string()));
                rows.push(("mirror_K", m.k_group.order().to_string()));
                rows.push(("mirror_K[j]", m.h_group.order().to_string()));
                rows.push(("mirror_K[j,s]", m.g_group.order().to_string()));
            }
            if opts.format == Format::Csv {
                csv_pairs(&rows)
            } else {
                rows.iter().map(|(k, v)| format!("{k:<18}{v}\n")).collect()
            }
        }
    };
    Ok(ok(text))
}

fn grid_json(grid: &SectorGrid, opts: &Options) -> Vec<Value> {
    let k = grid.k;
    let label = |x: usize| if x == 0 { "0".to_string() } else { format!("{x}/{k}") };
    grid.cells
        .iter()
        .enumerate()
        .map(|(b, row)| {
            let cells: Vec<Value> = row
                .iter()
                .enumerate()
                .map(|(a, c)| {
                    let mut v = json!({"a": a, "d_j": label(a), "total": c.total});
                    if opts.diamonds && opts.weights {
                        v["classes"] = c
                            .weighted
                            .iter()
                            .map(|((w, p, q), d)| json!({"p": p.to_string(), "q": q.to_string(), "weight": w, "dim": d}))
                            .collect();
                    } else if opts.diamonds {
                        v["diamond"] = c
                            .diamond
                            .iter()
                            .map(|((p, q), d)| json!({"p": p.to_string(), "q": q.to_string(), "dim": d}))
                            .collect();
                    } else if opts.weights {
                        v["weights"] = c.weights.iter().map(|(w, d)| json!({"weight": w, "dim": d})).collect();
                    }
                    v
                })
                .collect();
            json!({"b": b, "d_s": label(b), "total": grid.row_total(b), "cells": cells})
        })
        .collect()
}

/// The `(d_s, d_j)` grid of the `j_W`-invariant part of `ℍ`.
pub fn cmd_table(case: &Case, opts: &Options) -> Result<Output> {
    let setup = setup_for(case, opts.cap)?;
    let table = build_h(&setup)?;
    let grid = sector_grid(&setup, &table)?;
    let text = match opts.format {
        Format::Json => json_out(json!({
            "schema": SCHEMA,
            "command": "table",
            "polynomial": setup.w.to_text(),
            "K": case.group,
            "k": grid.k,
            "calabi_yau": grid.calabi_yau,
            "rows": grid_json(&grid, opts),
        })),
        Format::Csv => grid.render_csv(),
        Format::Text => {
            let shift = if grid.calabi_yau { "Calabi-Yau degrees" } else { "LG degrees" };
            format!(
                "W = {}  K = {}  k = {}  ({shift})\n{}",
                setup.w.to_text(),
                case.group,
                grid.k,
                grid.render_text(opts.weights, opts.diamonds)
            )
        }
    };
    Ok(ok(text))
}

fn summary_json(r: &Report) -> Value {
    r.summary()
        .into_iter()
        .map(|(s, (n, f))| json!({"statement": s, "checked": n, "failed": f}))
        .collect()
}

fn k3_lines(r: &K3Report, out: &mut String) {
    let p = &r.params;
    let opt = |x: Option<u64>| x.map_or("-".to_string(), |v| v.to_string());
    let fit = |p: &bhmirror::geometry::K3Params| {
        format!(
            "a={} b={} c={} g={} | a^v={} b^v={} c^v={} g^v={}",
            p.a,
            opt(p.b),
            opt(p.c),
            p.g,
            p.a_dual,
            opt(p.b_dual),
            opt(p.c_dual),
            p.g_dual
        )
    };
    let locus = |l: &bhmirror::geometry::FixedLocus| {
        let mut s = format!("f_1={} N_1={} g_1={}", l.f1, l.n1, l.g1);
        if let (Some(n2), Some(g2)) = (l.n2, l.g2) {
            let _ = write!(s, " N_2={n2} g_2={g2}");
        }
        s
    };
    let _ = writeln!(out, "  fitted        {}", fit(p));
    let _ = writeln!(out, "  mirror fit    {}", fit(&r.mirror_params));
    let _ = writeln!(out, "  fixed locus   {}", locus(&r.invariants));
    let _ = writeln!(out, "  mirror locus  {}", locus(&r.mirror_invariants));
    if let (Some(l), Some(m)) = (r.lattice, r.mirror_lattice) {
        let _ = writeln!(out, "  lattice       (r, a) = ({}, {})  mirror ({}, {})", l.0, l.1, m.0, m.1);
    }
    for c in &r.checks {
        let _ = writeln!(out, "  {}  {}: {} vs {}", if c.pass { "pass" } else { "FAIL" }, c.name, c.lhs, c.rhs);
    }
    if let Some(c) = &r.n2_plus_g2_identity {
        let _ = writeln!(out, "  note  {}: {} vs {} ({})", c.name, c.lhs, c.rhs, if c.pass { "holds" } else { "does not hold" });
    }
}

/// K3 table fit, fixed-locus invariants and the lattice mirror verdict.
pub fn cmd_k3(case: &Case, opts: &Options) -> Result<Output> {
    let setup = setup_for(case, opts.cap)?;
    let report = k3_analysis(&setup, opts.cap)?;
    let code = if report.passed() { EXIT_OK } else { EXIT_VERIFY };
    let lattice_mirror = match (report.lattice, report.mirror_lattice) {
        (Some(l), Some(m)) => Some(m.0 == 20 - l.0 && m.1 == l.1),
        _ => None,
    };
    let text = match opts.format {
        Format::Json => json_out(json!({
            "schema": SCHEMA,
            "command": "k3",
            "polynomial": setup.w.to_text(),
            "K": case.group,
            "report": report,
            "lattice_mirror": lattice_mirror,
            "passed": report.passed(),
        })),
        Format::Csv => {
            let mut out = String::from("check,lhs,rhs,pass\n");
            for c in &report.checks {
                let _ = writeln!(out, "\"{}\",{},{},{}", c.name, c.lhs, c.rhs, c.pass);
            }
            out
        }
        Format::Text => {
            let mut out = format!("W = {}  K = {}  k = {}\n", setup.w.to_text(), case.group, setup.k);
            k3_lines(&report, &mut out);
            if let Some(m) = lattice_mirror {
                let _ = writeln!(out, "lattice mirror: {}", if m { "yes" } else { "NO" });
            }
            out
        }
    };
    Ok(Output { text, code })
}

/// What `verify` runs on.
#[derive(Debug, Clone)]
pub enum VerifyTarget {
    Cases(Vec<Case>),
    Polynomial(String),
}

/// Runs every check on each case (in parallel), and the Krawitz suite when no case was singled out.
pub fn cmd_verify(target: &VerifyTarget, krawitz: bool, opts: &Options) -> Result<Output> {
    let (cases, polys): (Vec<Case>, Vec<String>) = match target {
        VerifyTarget::Cases(c) => {
            (c.clone(), if krawitz { krawitz_catalog().into_iter().map(String::from).collect() } else { vec![] })
        }
        VerifyTarget::Polynomial(p) => (vec![], vec![p.clone()]),
    };
    let case_results: Vec<Result<CaseReport>> = cases.par_iter().map(|c| verify_case(c, opts.cap)).collect();
    let case_results: Vec<CaseReport> = case_results.into_iter().collect::<Result<_>>()?;
    let poly_results: Vec<Result<(String, Report)>> = polys
        .par_iter()
        .map(|p| {
            let parsed = InvertiblePolynomial::parse(p)?;
            Ok((parsed.to_text(), verify_polynomial(&parsed, opts.cap)?))
        })
        .collect();
    let poly_results: Vec<(String, Report)> = poly_results.into_iter().collect::<Result<_>>()?;
    let passed = case_results.iter().all(|c| c.passed()) && poly_results.iter().all(|(_, r)| r.passed());
    let code = if passed { EXIT_OK } else { EXIT_VERIFY };

    let text = match opts.format {
        Format::Json => json_out(json!({
            "schema": SCHEMA,
            "command": "verify",
            "passed": passed,
            "cases": case_results.iter().map(|c| json!({
                "name": c.case.name,
                "polynomial": c.case.polynomial,
                "K": c.case.group,
                "k": c.k,
                "calabi_yau": c.calabi_yau,
                "mirror_theorems": c.ms_applies,
                "passed": c.passed(),
                "summary": summary_json(&c.report),
                "failures": c.report.failures().collect::<Vec<_>>(),
                "k3": c.k3,
            })).collect::<Vec<_>>(),
            "polynomials": poly_results.iter().map(|(p, r)| json!({
                "polynomial": p,
                "passed": r.passed(),
                "summary": summary_json(r),
                "failures": r.failures().collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
        })),
        Format::Csv => {
            let mut out = String::from("target,statement,checked,failed\n");
            for c in &case_results {
                for (s, (n, f)) in c.report.summary() {
                    let _ = writeln!(out, "{},\"{s}\",{n},{f}", c.case.name);
                }
            }
            for (p, r) in &poly_results {
                for (s, (n, f)) in r.summary() {
                    let _ = writeln!(out, "\"{p}\",\"{s}\",{n},{f}");
                }
            }
            out
        }
        Format::Text => {
            let mut out = String::new();
            for c in &case_results {
                let note = if c.ms_applies { "" } else { "  [j_W not in SL_W: mirror theorems not applicable]" };
                let _ = writeln!(
                    out,
                    "{} {:<22} {} | K={} | {} cells{note}",
                    if c.passed() { "pass" } else { "FAIL" },
                    c.case.name,
                    c.case.polynomial,
                    c.case.group,
                    c.report.records.len()
                );
                for f in c.report.failures().take(20) {
                    let _ = writeln!(out, "    {f}");
                }
                if let Some(k3) = &c.k3 {
                    k3_lines(k3, &mut out);
                }
            }
            for (p, r) in &poly_results {
                let _ = writeln!(out, "{} {:<40} {} cells", if r.passed() { "pass" } else { "FAIL" }, p, r.records.len());
                for f in r.failures().take(20) {
                    let _ = writeln!(out, "    {f}");
                }
            }
            let _ = writeln!(out, "{}", if passed { "all checks passed" } else { "verification FAILED" });
            out
        }
    };
    Ok(Output { text, code })
}

/// A case from `--case` (looked up in `catalog`) or from a polynomial and `--K`.
pub fn resolve_case(poly: Option<&str>, k_spec: Option<&str>, case: Option<&str>, catalog: &[Case]) -> Result<Case> {
    match (poly, case) {
        (_, Some(name)) => {
            let mut c = bhmirror::catalog::find_case(catalog, name)?.clone();
            if let Some(k) = k_spec {
                c.group = k.to_string();
            }
            Ok(c)
        }
        (Some(p), None) => Ok(Case { name: "input".into(), polynomial: p.into(), group: k_spec.unwrap_or("min").into() }),
        (None, None) => Err(Error::Syntax { pos: 0, msg: "a polynomial or --case is required".into() }),
    }
}

pub fn default_catalog() -> Vec<Case> {
    builtin_cases()
}
