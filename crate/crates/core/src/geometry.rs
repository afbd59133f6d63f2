//! Calabi–Yau presentation of `ℍ`: sector grids, K3 table fitting and fixed-locus invariants.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::Q;
use crate::mirror::{lg_to_cy_reindex, MirrorPair, Report};
use crate::statespace::StateTable;
use crate::symmetry::CyclicSetup;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Cell {
    pub total: u64,
    pub diamond: BTreeMap<(Q, Q), u64>,
    pub weights: BTreeMap<u32, u64>,
    /// `(weight, p, q) -> dim`.
    pub weighted: BTreeMap<(u32, Q, Q), u64>,
}

/// `cells[b][a]`: the `Q_j = 0` part of `ℍ[d_j = a/k, d_s = b/k]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SectorGrid {
    pub k: u32,
    pub num_vars: usize,
    /// Bidegrees shifted by `(-1, -1)`.
    pub calabi_yau: bool,
    pub cells: Vec<Vec<Cell>>,
}

pub fn sector_grid(setup: &CyclicSetup, table: &StateTable) -> Result<SectorGrid> {
    let calabi_yau = setup.w.is_calabi_yau();
    let invariant = table.filter(|l| l.q_j.is_zero());
    let table = if calabi_yau { lg_to_cy_reindex(&invariant, &setup.w)? } else { invariant };
    let k = table.k as usize;
    let mut cells = vec![vec![Cell::default(); k]; k];
    for (l, &d) in &table.entries {
        let (a, b) = l.ab(table.k);
        let cell = &mut cells[b as usize][a as usize];
        cell.total += d;
        *cell.diamond.entry((l.p, l.q)).or_insert(0) += d;
        *cell.weights.entry(l.weight).or_insert(0) += d;
        *cell.weighted.entry((l.weight, l.p, l.q)).or_insert(0) += d;
    }
    Ok(SectorGrid { k: table.k, num_vars: table.num_vars, calabi_yau, cells })
}

impl SectorGrid {
    pub fn totals(&self) -> Vec<Vec<u64>> {
        self.cells.iter().map(|row| row.iter().map(|c| c.total).collect()).collect()
    }

    pub fn row_total(&self, b: usize) -> u64 {
        self.cells[b].iter().map(|c| c.total).sum()
    }

    /// Cell diamond moved back by `(b/k, b/k)`, so twisted rows read as cohomology of the fixed locus.
    pub fn geometric_diamond(&self, b: usize, a: usize) -> Result<BTreeMap<(i64, i64), u64>> {
        let shift = Q::new(b as i64, self.k as i64);
        let mut out = BTreeMap::new();
        for (&(p, q), &d) in &self.cells[b][a].diamond {
            let (p, q) = (p - shift, q - shift);
            if !p.is_integer() || !q.is_integer() {
                return Err(Error::PatternMismatch(format!("cell b={b} a={a} has fractional degree ({p},{q})")));
            }
            if d > 0 {
                out.insert((p.to_integer(), q.to_integer()), d);
            }
        }
        Ok(out)
    }

    fn label(&self, x: usize) -> String {
        if x == 0 {
            "0".into()
        } else {
            format!("{x}/{}", self.k)
        }
    }

    /// Rows `d_s`, columns `d_j`.
    pub fn render_text(&self, weights: bool, diamonds: bool) -> String {
        let k = self.k as usize;
        let body: Vec<Vec<String>> = self
            .cells
            .iter()
            .map(|row| {
                row.iter()
                    .map(|c| {
                        if weights && c.total > 0 {
                            c.weights.iter().map(|(w, d)| format!("{d}@{w}")).collect::<Vec<_>>().join("+")
                        } else {
                            c.total.to_string()
                        }
                    })
                    .collect()
            })
            .collect();
        let head: Vec<String> = (0..k).map(|a| format!("d_j={}", self.label(a))).collect();
        let width = body.iter().flatten().chain(&head).map(|s| s.len()).max().unwrap_or(1);
        let lead = (0..k).map(|b| self.label(b).len()).max().unwrap_or(1) + 5;
        let mut out = String::new();
        let _ = write!(out, "{:lead$}", "");
        for h in &head {
            let _ = write!(out, "  {h:>width$}");
        }
        out.push('\n');
        for (b, row) in body.iter().enumerate() {
            let _ = write!(out, "{:lead$}", format!("d_s={}", self.label(b)));
            for c in row {
                let _ = write!(out, "  {c:>width$}");
            }
            out.push('\n');
        }
        if diamonds {
            out.push('\n');
            for (b, row) in self.cells.iter().enumerate() {
                for (a, c) in row.iter().enumerate() {
                    if c.total == 0 {
                        continue;
                    }
                    let parts: Vec<String> = if weights {
                        c.weighted.iter().map(|((w, p, q), d)| format!("({p},{q})@{w}:{d}")).collect()
                    } else {
                        c.diamond.iter().map(|((p, q), d)| format!("({p},{q}):{d}")).collect()
                    };
                    let _ = writeln!(out, "d_s={} d_j={}  {}", self.label(b), self.label(a), parts.join(" "));
                }
            }
        }
        out
    }

    /// One row per nonzero `(d_s, d_j, p, q, weight)`.
    pub fn render_csv(&self) -> String {
        let mut out = String::from("b,a,d_s,d_j,p,q,weight,dim\n");
        for (b, row) in self.cells.iter().enumerate() {
            for (a, c) in row.iter().enumerate() {
                for ((w, p, q), d) in &c.weighted {
                    if *d > 0 {
                        let _ = writeln!(out, "{b},{a},{},{},{p},{q},{w},{d}", self.label(b), self.label(a));
                    }
                }
            }
        }
        out
    }
}

/// Fitted parameters of the order-4 or prime-order K3 table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct K3Params {
    pub a: u64,
    pub a_dual: u64,
    pub g: u64,
    pub g_dual: u64,
    /// Order-4 only.
    pub b: Option<u64>,
    pub b_dual: Option<u64>,
    pub c: Option<u64>,
    pub c_dual: Option<u64>,
}

impl K3Params {
    /// `x <-> x^v`.
    pub fn swapped(&self) -> Self {
        K3Params {
            a: self.a_dual,
            a_dual: self.a,
            g: self.g_dual,
            g_dual: self.g,
            b: self.b_dual,
            b_dual: self.b,
            c: self.c_dual,
            c_dual: self.c,
        }
    }
}

type Diamond = BTreeMap<(i64, i64), u64>;

fn diamond(entries: &[((i64, i64), u64)]) -> Diamond {
    entries.iter().filter(|(_, d)| *d > 0).copied().collect()
}

fn is_prime(k: u32) -> bool {
    k >= 2 && (2..k).take_while(|i| i * i <= k).all(|i| !k.is_multiple_of(i))
}

/// The table predicted by the parameters, cell by cell, in geometric degrees.
pub fn expected_k3_table(k: u32, p: &K3Params) -> Vec<Vec<Diamond>> {
    let k = k as usize;
    let order4 = k == 4;
    let mid = if order4 { 2 * p.a + p.b.unwrap_or(0) - 2 } else { (k as u64 - 1) * p.a - 2 };
    let base = |a: usize| -> Diamond {
        if a == 1 {
            diamond(&[((0, 0), 1), ((1, 1), p.a_dual - 1)])
        } else if a == k - 1 {
            diamond(&[((2, 2), 1), ((1, 1), p.a_dual - 1)])
        } else if order4 {
            diamond(&[((1, 1), p.b_dual.unwrap_or(0))])
        } else {
            diamond(&[((1, 1), p.a_dual)])
        }
    };
    let mut rows = Vec::new();
    for b in 0..k {
        let mut row = Vec::new();
        for a in 0..k {
            let cell = if b == 0 && a == 0 {
                diamond(&[((2, 0), 1), ((0, 2), 1), ((1, 1), mid)])
            } else if b == 0 {
                base(a)
            } else if a == 0 {
                diamond(&[((1, 0), p.g), ((0, 1), p.g), ((0, 0), p.g_dual), ((1, 1), p.g_dual)])
            } else if (a + b) % k == 0 {
                if order4 && b == 2 {
                    let (c, cv) = (p.c.unwrap_or(0), p.c_dual.unwrap_or(0));
                    diamond(&[((0, 0), c), ((1, 1), c), ((1, 0), cv), ((0, 1), cv)])
                } else {
                    Diamond::new()
                }
            } else if a + b < k {
                base(a)
            } else {
                base(a).into_iter().map(|((x, y), d)| ((x - 1, y - 1), d)).collect()
            };
            row.push(cell);
        }
        rows.push(row);
    }
    rows
}

fn at(d: &Diamond, p: i64, q: i64) -> u64 {
    d.get(&(p, q)).copied().unwrap_or(0)
}

/// Reads the parameters off designated cells and checks every cell against the resulting table.
pub fn fit_k3_pattern(grid: &SectorGrid) -> Result<K3Params> {
    let k = grid.k;
    if !grid.calabi_yau || grid.num_vars != 4 {
        return Err(Error::PatternMismatch("not a K3 grid (needs a Calabi-Yau W in four variables)".into()));
    }
    if k != 4 && !(is_prime(k) && k > 2) {
        return Err(Error::PatternMismatch(format!("order {k} is neither 4 nor an odd prime")));
    }
    let mut geo = Vec::new();
    for b in 0..k as usize {
        let mut row = Vec::new();
        for a in 0..k as usize {
            row.push(grid.geometric_diamond(b, a)?);
        }
        geo.push(row);
    }
    let need = |ok: bool, what: &str| if ok { Ok(()) } else { Err(Error::PatternMismatch(what.to_string())) };
    need(at(&geo[0][1], 0, 0) == 1, "row 0, d_j=1/k must carry one class at (0,0)")?;
    let a_dual = at(&geo[0][1], 1, 1) + 1;
    let g = at(&geo[1][0], 1, 0);
    let g_dual = at(&geo[1][0], 0, 0);
    let params = if k == 4 {
        let middle = &grid.cells[0][0].weighted;
        let mid = |w: u32| middle.get(&(w, Q::from_integer(1), Q::from_integer(1))).copied().unwrap_or(0);
        need(mid(0) == 0 && mid(1) == mid(3), "row 0, d_j=0 middle weights are not (a-1, b, a-1)")?;
        K3Params {
            a: mid(1) + 1,
            a_dual,
            g,
            g_dual,
            b: Some(mid(2)),
            b_dual: Some(at(&geo[0][2], 1, 1)),
            c: Some(at(&geo[2][2], 0, 0)),
            c_dual: Some(at(&geo[2][2], 1, 0)),
        }
    } else {
        let m = at(&geo[0][0], 1, 1) + 2;
        need(m.is_multiple_of(k as u64 - 1), "row 0, d_j=0 middle is not (p-1)a-2")?;
        K3Params { a: m / (k as u64 - 1), a_dual, g, g_dual, b: None, b_dual: None, c: None, c_dual: None }
    };
    let expected = expected_k3_table(k, &params);
    for b in 0..k as usize {
        for a in 0..k as usize {
            if geo[b][a] != expected[b][a] {
                return Err(Error::PatternMismatch(format!(
                    "cell d_s={b}/{k} d_j={a}/{k}: computed {:?}, pattern {:?}",
                    geo[b][a], expected[b][a]
                )));
            }
        }
    }
    let total = if k == 4 {
        2 * params.a + params.b.unwrap_or(0) + 2 * params.a_dual + params.b_dual.unwrap_or(0)
    } else {
        (k as u64 - 1) * (params.a + params.a_dual)
    };
    need(total == 24, &format!("constraint sums to {total}, not 24"))?;
    Ok(params)
}

/// Isolated points `f`, curves `N`, total genus `g` of the `s` (and, for order 4, `s^2`) fixed loci.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FixedLocus {
    pub f1: i64,
    pub n1: i64,
    pub g1: i64,
    pub n2: Option<i64>,
    pub g2: Option<i64>,
}

/// `(source, mirror)`.
pub fn k3_invariants(k: u32, p: &K3Params) -> (FixedLocus, FixedLocus) {
    let one = |p: &K3Params| {
        let (av, g, gv) = (p.a_dual as i64, p.g as i64, p.g_dual as i64);
        if k == 4 {
            let (bv, c, cv) = (p.b_dual.unwrap_or(0) as i64, p.c.unwrap_or(0) as i64, p.c_dual.unwrap_or(0) as i64);
            FixedLocus { f1: av + bv - 2, n1: gv + 1, g1: g, n2: Some(gv + c + av), g2: Some(g + cv) }
        } else {
            FixedLocus { f1: (k as i64 - 2) * av - 2, n1: gv + 1, g1: g, n2: None, g2: None }
        }
    };
    (one(p), one(&p.swapped()))
}

/// `r = (N - g)(p - 1) + 11 - p`, `a = (22 - r)/(p - 1) - 2g`.
pub fn lattice_invariants(p: u32, g: i64, n: i64) -> Result<(i64, i64)> {
    if ![3, 5, 7, 13].contains(&p) {
        return Err(Error::NotAdmissible(format!("lattice invariants need p in {{3, 5, 7, 13}}, got {p}")));
    }
    let p = p as i64;
    let r = (n - g) * (p - 1) + 11 - p;
    if (22 - r) % (p - 1) != 0 {
        return Err(Error::NonIntegralLattice(format!("m = (22 - {r})/{} is not an integer", p - 1)));
    }
    let a = (22 - r) / (p - 1) - 2 * g;
    Ok((r, a))
}

pub fn check_prime_divisibility(k: u32) -> bool {
    k >= 2 && 24 % (k - 1) == 0
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NamedCheck {
    pub name: String,
    pub lhs: i64,
    pub rhs: i64,
    pub pass: bool,
}

fn named(name: &str, lhs: i64, rhs: i64) -> NamedCheck {
    NamedCheck { name: name.into(), lhs, rhs, pass: lhs == rhs }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct K3Report {
    pub k: u32,
    pub params: K3Params,
    pub mirror_params: K3Params,
    pub invariants: FixedLocus,
    pub mirror_invariants: FixedLocus,
    pub lattice: Option<(i64, i64)>,
    pub mirror_lattice: Option<(i64, i64)>,
    pub checks: Vec<NamedCheck>,
    /// Order 4 only: `N_2 + g_2 + f_1 = 20 - N_2^v - g_2^v - f_1^v`, reported but not required.
    pub n2_plus_g2_identity: Option<NamedCheck>,
}

impl K3Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// Screens `(W, K)` before fitting: Calabi–Yau in four variables, and `k - 1 | 24`.
pub fn k3_analysis(setup: &CyclicSetup, cap: usize) -> Result<K3Report> {
    if !setup.w.is_calabi_yau() {
        return Err(Error::NotCalabiYau);
    }
    if setup.w.num_vars() != 4 {
        return Err(Error::NotAdmissible(format!("a K3 needs four variables, got {}", setup.w.num_vars())));
    }
    if !check_prime_divisibility(setup.k) {
        return Err(Error::NotAdmissible(format!("{} - 1 does not divide 24", setup.k)));
    }
    let pair = crate::mirror::build_mirror_pair(setup, cap)?;
    k3_report(&pair)
}

/// Fits both grids of a mirror pair independently and cross-checks the corollaries.
pub fn k3_report(pair: &MirrorPair) -> Result<K3Report> {
    let k = pair.source.k;
    let grid = sector_grid(&pair.source, &pair.source_table)?;
    let mgrid = sector_grid(&pair.target, &pair.target_table)?;
    let params = fit_k3_pattern(&grid)?;
    let mirror_params = fit_k3_pattern(&mgrid)?;
    let (inv, inv_from_source) = k3_invariants(k, &params);
    let (minv, _) = k3_invariants(k, &mirror_params);

    let mut checks = vec![
        named("mirror grid parameters swap (a)", mirror_params.a as i64, params.a_dual as i64),
        named("mirror grid parameters swap (a^v)", mirror_params.a_dual as i64, params.a as i64),
        named("mirror grid parameters swap (g)", mirror_params.g as i64, params.g_dual as i64),
        named("mirror grid parameters swap (g^v)", mirror_params.g_dual as i64, params.g as i64),
        named("N_1 = g_1^v + 1", inv.n1, minv.g1 + 1),
        named("N_1^v = g_1 + 1", minv.n1, inv.g1 + 1),
        named("mirror invariants (f_1^v)", minv.f1, inv_from_source.f1),
    ];
    let (mut lattice, mut mirror_lattice, mut n2_plus_g2_identity) = (None, None, None);
    if k == 4 {
        let (n2, g2, n2v, g2v) = (inv.n2.unwrap(), inv.g2.unwrap(), minv.n2.unwrap(), minv.g2.unwrap());
        checks.push(named("mirror grid parameters swap (b)", mirror_params.b.unwrap() as i64, params.b_dual.unwrap() as i64));
        checks.push(named("mirror grid parameters swap (c)", mirror_params.c.unwrap() as i64, params.c_dual.unwrap() as i64));
        checks.push(named("N_2 - g_2 + f_1 = 20 - (N_2^v - g_2^v) - f_1^v", n2 - g2 + inv.f1, 20 - (n2v - g2v) - minv.f1));
        let (b, bv) = (params.b.unwrap() as i64, params.b_dual.unwrap() as i64);
        checks.push(named("2a + b + 2a^v + b^v = 24", 2 * params.a as i64 + b + 2 * params.a_dual as i64 + bv, 24));
        n2_plus_g2_identity =
            Some(named("N_2 + g_2 + f_1 = 20 - N_2^v - g_2^v - f_1^v", n2 + g2 + inv.f1, 20 - n2v - g2v - minv.f1));
    } else {
        let p = k as i64;
        checks.push(named("(f_1 + f_1^v + 4)(p - 1) = 24(p - 2)", (inv.f1 + minv.f1 + 4) * (p - 1), 24 * (p - 2)));
        if [3, 5, 7, 13].contains(&k) {
            let l = lattice_invariants(k, inv.g1, inv.n1)?;
            let lv = lattice_invariants(k, minv.g1, minv.n1)?;
            checks.push(named("r^v = 20 - r", lv.0, 20 - l.0));
            checks.push(named("a^v = a (lattice)", lv.1, l.1));
            lattice = Some(l);
            mirror_lattice = Some(lv);
        }
    }
    Ok(K3Report { k, params, mirror_params, invariants: inv, mirror_invariants: minv, lattice, mirror_lattice, checks, n2_plus_g2_identity })
}

fn row_weight(grid: &SectorGrid, b: usize, weight: Option<u32>) -> BTreeMap<(Q, Q), u64> {
    let mut out = BTreeMap::new();
    for c in &grid.cells[b] {
        for ((w, p, q), d) in &c.weighted {
            if weight.is_none_or(|t| t == *w) {
                *out.entry((*p, *q)).or_insert(0) += d;
            }
        }
    }
    out
}

fn moved(m: BTreeMap<(Q, Q), u64>, flip: Option<i64>, shift: Q) -> BTreeMap<(Q, Q), u64> {
    m.into_iter()
        .map(|((p, q), d)| {
            let (p, q) = (p - shift, q - shift);
            let p = flip.map_or(p, |n| Q::from_integer(n) - p);
            ((p, q), d)
        })
        .collect()
}

fn compare_maps(report: &mut Report, statement: &str, lhs: &BTreeMap<(Q, Q), u64>, rhs: &BTreeMap<(Q, Q), u64>) {
    let mut keys: Vec<_> = lhs.keys().chain(rhs.keys()).collect();
    keys.sort();
    keys.dedup();
    if keys.is_empty() {
        report.push(statement, "empty", 0, 0);
    }
    for c in keys {
        report.push(statement, format!("(p,q)=({},{})", c.0, c.1), lhs.get(c).copied().unwrap_or(0), rhs.get(c).copied().unwrap_or(0));
    }
}

fn cy_grids(pair: &MirrorPair) -> Result<(SectorGrid, SectorGrid)> {
    if !pair.source.w.is_calabi_yau() || !pair.target.w.is_calabi_yau() {
        return Err(Error::NotCalabiYau);
    }
    Ok((sector_grid(&pair.source, &pair.source_table)?, sector_grid(&pair.target, &pair.target_table)?))
}

/// `H_id(Σ)_{χ=0}` at `(p, q)` against `⊕_{i>0} H_id(Σ^v)_{χ=i}` at `(n - 1 - p, q)`, in Calabi–Yau degrees.
pub fn verify_ms_cy_untwisted(pair: &MirrorPair) -> Result<Report> {
    let (src, tgt) = cy_grids(pair)?;
    let d = src.num_vars as i64 - 2;
    let mut rhs = BTreeMap::new();
    for i in 1..tgt.k {
        for (c, v) in row_weight(&tgt, 0, Some(i)) {
            *rhs.entry(c).or_insert(0) += v;
        }
    }
    let mut report = Report::default();
    compare_maps(&mut report, "MS_CY(1)", &row_weight(&src, 0, Some(0)), &moved(rhs, Some(d), Q::zero()));
    Ok(report)
}

/// For `k = 2`: `H_id^{±}` against the mirror `H_id^{∓}` at `(n - 1 - p, q)`, and
/// `H_s(1/2)` against the mirror `H_s(1/2)` at `(n - 2 - p, q)`.
pub fn verify_k2_corollary(pair: &MirrorPair) -> Result<Report> {
    if pair.source.k != 2 {
        return Err(Error::NotAdmissible(format!("needs k = 2, got {}", pair.source.k)));
    }
    let (src, tgt) = cy_grids(pair)?;
    let n = src.num_vars as i64 - 1;
    let half = Q::new(1, 2);
    let mut report = Report::default();
    for (w, sign) in [(0, "+"), (1, "-")] {
        let lhs = row_weight(&src, 0, Some(w));
        let rhs = moved(row_weight(&tgt, 0, Some(1 - w)), Some(n - 1), Q::zero());
        compare_maps(&mut report, &format!("k=2 H_id^{sign}"), &lhs, &rhs);
    }
    let lhs = moved(row_weight(&src, 1, None), None, half);
    let rhs = moved(moved(row_weight(&tgt, 1, None), None, half), Some(n - 2), Q::zero());
    compare_maps(&mut report, "k=2 H_s(1/2)", &lhs, &rhs);
    Ok(report)
}
