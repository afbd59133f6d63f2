//! Named test cases and per-case verification.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{k3_report, verify_k2_corollary, verify_ms_cy_untwisted, K3Report};
use crate::milnor::{milnor_mismatches, oracle_mismatches};
use crate::mirror::{build_mirror_pair, verify_fermat, verify_h_duality, verify_krawitz, verify_mirror_charges, verify_ms_lg, Report};
use crate::poly::InvertiblePolynomial;
use crate::statespace::structure_checks;
use crate::symmetry::{aut_group, CyclicSetup, GroupSpec};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Case {
    pub name: String,
    pub polynomial: String,
    /// Group spec for `K` in the coordinates of `f`.
    pub group: String,
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} | {} | {}", self.name, self.polynomial, self.group)
    }
}

fn case(name: &str, polynomial: &str, group: &str) -> Case {
    Case { name: name.into(), polynomial: polynomial.into(), group: group.into() }
}

/// Admissible `(W, K)` pairs with `W = x0^k + f`.
pub fn builtin_cases() -> Vec<Case> {
    let mut cases = vec![
        case("elliptic", "x0^6+x1^3+x2^2", "trivial"),
        case("quartic", "x0^4+x1^4+x2^4+x3^4", "trivial"),
        case("quartic-sl", "x0^4+x1^4+x2^4+x3^4", "SL"),
        case("cubic-curve", "x0^3+x1^3+x2^3", "trivial"),
        case("cubic-curve-sl", "x0^3+x1^3+x2^3", "SL"),
        case("cubic-k3", "x0^3+x1^3+x2^6+x3^6", "min"),
        case("cubic-k3-b", "x0^3+x1^4+x2^4+x3^6", "min"),
        case("cubic-k3-chain", "x0^3+x1^2*x2+x2^6+x3^12", "min"),
        case("double-quartic-curve", "x0^2+x1^4+x2^4", "min"),
        case("double-quartic-chain", "x0^2+x1^3*x2+x2^4", "min"),
        case("double-quartic-loop", "x0^2+x1^3*x2+x2^3*x1", "min"),
        case("double-sextic", "x0^2+x1^6+x2^6+x3^6", "min"),
        case("quartic-k3-chain", "x0^4+x1^2*x2+x2^4+x3^8", "min"),
        case("quartic-k3-b", "x0^4+x1^3+x2^3+x3^12", "min"),
        case("sextic-k3", "x0^6+x1^3+x2^3+x3^6", "min"),
        case("quintic-k3", "x0^5+x1^2+x2^5+x3^10", "min"),
        case("quintic-k3-chain", "x0^5+x1^2*x2+x2^5+x3^5", "min"),
        case("septic-k3-chain", "x0^7+x1^2*x2+x2^2*x3+x3^7", "min"),
        case("septic-k3-loop", "x0^7+x1^2*x2+x2^2*x3+x3^5*x1", "min"),
        case("nonic-k3-chain", "x0^9+x1^2*x2+x2^9+x3^3", "min"),
        case("p13-k3-loop", "x0^13+x1^2*x2+x2^2*x3+x3^3*x1", "min"),
    ];
    for k in [2, 3, 4, 5, 7, 9, 13] {
        cases.push(case(&format!("toy-{k}"), &format!("x0^{k}+x1^{k}"), "trivial"));
    }
    cases
}

/// Invertible polynomials for the Krawitz suite: every atom type, up to five variables.
pub fn krawitz_catalog() -> Vec<&'static str> {
    vec![
        "x^2",
        "x^7",
        "x^13",
        "x^3+y^3",
        "x^2+y^5",
        "x^6+y^3+z^2",
        "x^4+y^4+z^4+w^4",
        "x^3+y^3+z^3+u^2+v^2",
        "x^2*y+y^3",
        "x^3*y+y^4",
        "x^2*y+y^2*z+z^3",
        "x^3*y+y^2*z+z^4",
        "x^2*y+y^2*z+z^2*w+w^3",
        "x^2*y+y^2",
        "x^2*y+y^2*x",
        "x^3*y+y^2*x",
        "x^4*y+y^3*x",
        "x^2*y+y^2*z+z^2*x",
        "x^3*y+y^2*z+z^2*x",
        "x^2*y+y^2*z+z^2*w+w^2*x",
        "x^3+y^2*z+z^3",
        "x^4+y^2*z+z^2*y",
        "x^2+y^3*z+z^2*y+w^3",
        "x^3+y^2*z+z^3+u^2*v+v^2*u",
        "x^4+y^3*z+z^3",
        "x^2*y+y^2*x+z^2*w+w^3",
        "x0^6+x1^3+x2^2",
        "x0^4+x1^2*x2+x2^4+x3^8",
        "x0^5+x1^2*x2+x2^5+x3^5",
        "x0^7+x1^2*x2+x2^2*x3+x3^7",
        "x0^7+x1^2*x2+x2^2*x3+x3^5*x1",
        "x0^13+x1^2*x2+x2^2*x3+x3^3*x1",
        "x0^2+x1^3*x2+x2^3*x1",
        "x^5+y^2*z+z^2*u+u^3+v^2",
    ]
}

/// `name | polynomial | group` per line; `#` starts a comment.
pub fn parse_catalog(text: &str) -> Result<Vec<Case>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let parts: Vec<&str> = line.split('|').map(str::trim).collect();
        match parts.as_slice() {
            [name, poly] => out.push(case(name, poly, "min")),
            [name, poly, group] => out.push(case(name, poly, group)),
            _ => {
                return Err(Error::Syntax { pos: i + 1, msg: "expected `name | polynomial | group`".into() });
            }
        }
    }
    Ok(out)
}

pub fn find_case<'a>(cases: &'a [Case], name: &str) -> Result<&'a Case> {
    cases.iter().find(|c| c.name == name).ok_or_else(|| Error::UnknownCase(name.to_string()))
}

pub fn setup_for(case: &Case, cap: usize) -> Result<CyclicSetup> {
    let w = InvertiblePolynomial::parse(&case.polynomial)?;
    let (k, f) = w.split_cyclic()?;
    let group = GroupSpec::parse(&case.group)?.resolve(&f, Some(k), cap)?;
    CyclicSetup::new(&w, &group, cap)
}

fn listed(statement: &str, bad: Vec<String>, checked: u64) -> Report {
    let mut r = Report::default();
    if bad.is_empty() {
        r.push(statement, format!("{checked} cells"), 0, 0);
    }
    for b in bad {
        r.push(statement, b, 1, 0);
    }
    r
}

/// Everything checked for one `(W, K)`.
#[derive(Debug, Clone, Serialize)]
pub struct CaseReport {
    pub case: Case,
    pub k: u32,
    pub calabi_yau: bool,
    /// False when `j_W` is not in `SL_W`; the mirror theorems are then skipped.
    pub ms_applies: bool,
    pub report: Report,
    pub k3: Option<K3Report>,
}

impl CaseReport {
    pub fn passed(&self) -> bool {
        self.report.passed() && self.k3.as_ref().is_none_or(|r| r.passed())
    }
}

pub fn verify_case(case: &Case, cap: usize) -> Result<CaseReport> {
    let setup = setup_for(case, cap)?;
    let pair = build_mirror_pair(&setup, cap)?;
    let w = &setup.w;
    // the LG mirror theorem needs j_W in K[j_W] <= SL_W
    let ms_applies = setup.j.in_sl();
    let mut report = if ms_applies { verify_ms_lg(&pair) } else { Report::default() };
    report.extend(verify_h_duality(&pair));
    report.extend(verify_mirror_charges(&pair));
    for (table, side) in [(&pair.source_table, "source"), (&pair.target_table, "mirror")] {
        for c in structure_checks(table) {
            report.extend(listed(&format!("{} ({side})", c.name), c.violations, table.entries.len() as u64));
        }
    }
    let sectors = setup.g_group.elements();
    report.extend(listed("Milnor dimension", milnor_mismatches(w, sectors)?, sectors.len() as u64));
    if w.is_fermat() {
        report.extend(listed("engine vs oracle", oracle_mismatches(w, sectors)?, sectors.len() as u64));
    }
    let calabi_yau = w.is_calabi_yau();
    if calabi_yau && ms_applies {
        report.extend(verify_ms_cy_untwisted(&pair)?);
        if setup.k == 2 {
            report.extend(verify_k2_corollary(&pair)?);
        }
    }
    let k3 = if calabi_yau && w.num_vars() == 4 && (setup.k == 4 || [3, 5, 7, 13].contains(&setup.k)) {
        Some(k3_report(&pair)?)
    } else {
        None
    };
    Ok(CaseReport { case: case.clone(), k: setup.k, calabi_yau, ms_applies, report, k3 })
}

/// Krawitz duality plus, for Fermat inputs, the basis-level exchange.
pub fn verify_polynomial(p: &InvertiblePolynomial, cap: usize) -> Result<Report> {
    let mut r = verify_krawitz(p, cap)?;
    let aut = aut_group(p, cap)?;
    r.extend(listed("Milnor dimension", milnor_mismatches(p, aut.elements())?, aut.order() as u64));
    if p.is_fermat() {
        r.extend(verify_fermat(p, cap)?);
        r.extend(listed("engine vs oracle", oracle_mismatches(p, aut.elements())?, aut.order() as u64));
    }
    Ok(r)
}
