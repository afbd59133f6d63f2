//! Mirror pairs and the dimension-level mirror theorems.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::Q;
use crate::poly::{Atom, InvertiblePolynomial};
use crate::statespace::{build_h, fjrw_state_space, unprojected_state_space, StateTable, UnprojectedSpace};
use crate::symmetry::{dual_group, CyclicSetup, DiagonalSymmetry, SymmetryGroup};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckRecord {
    pub statement: String,
    pub cell: String,
    pub lhs: u64,
    pub rhs: u64,
    pub pass: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Report {
    pub records: Vec<CheckRecord>,
}

impl Report {
    pub fn push(&mut self, statement: impl Into<String>, cell: impl Into<String>, lhs: u64, rhs: u64) {
        self.records.push(CheckRecord { statement: statement.into(), cell: cell.into(), lhs, rhs, pass: lhs == rhs });
    }

    pub fn extend(&mut self, other: Report) {
        self.records.extend(other.records);
    }

    pub fn passed(&self) -> bool {
        self.records.iter().all(|r| r.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.records.iter().filter(|r| !r.pass)
    }

    /// `statement -> (cells checked, cells failed)`.
    pub fn summary(&self) -> BTreeMap<String, (usize, usize)> {
        let mut out: BTreeMap<String, (usize, usize)> = BTreeMap::new();
        for r in &self.records {
            let e = out.entry(r.statement.clone()).or_default();
            e.0 += 1;
            if !r.pass {
                e.1 += 1;
            }
        }
        out
    }
}

impl fmt::Display for CheckRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.pass { "pass" } else { "FAIL" };
        write!(f, "{} {}: {} vs {} {verdict}", self.statement, self.cell, self.lhs, self.rhs)
    }
}

type BiMap = BTreeMap<(Q, Q), u64>;

fn compare(report: &mut Report, statement: &str, lhs: &BiMap, rhs: &BiMap) {
    let mut cells: Vec<&(Q, Q)> = lhs.keys().chain(rhs.keys()).collect();
    cells.sort();
    cells.dedup();
    if cells.is_empty() {
        report.push(statement, "empty", 0, 0);
    }
    for c in cells {
        report.push(
            statement,
            format!("(p,q)=({},{})", c.0, c.1),
            lhs.get(c).copied().unwrap_or(0),
            rhs.get(c).copied().unwrap_or(0),
        );
    }
}

fn add_into(acc: &mut BiMap, m: BiMap) {
    for (c, d) in m {
        *acc.entry(c).or_insert(0) += d;
    }
}

/// `H(a, b)^{p,q} = H^{p+a, q+b}`: a class at `(P, Q)` sits at `(P - a, Q - b)`.
fn shift(m: BiMap, a: Q, b: Q) -> BiMap {
    m.into_iter().map(|((p, q), d)| ((p - a, q - b), d)).collect()
}

/// `(p, q) -> (n - p, q)`.
fn flip(m: BiMap, n: i64) -> BiMap {
    let n = Q::from_integer(n);
    m.into_iter().map(|((p, q), d)| ((n - p, q), d)).collect()
}

fn slice(table: &StateTable, b: u32, weight: u32) -> BiMap {
    fjrw_state_space(table, b).filter(|l| l.weight == weight % table.k).bidegree_dims()
}

/// Source and mirror data for `(W, K)`.
#[derive(Debug, Clone)]
pub struct MirrorPair {
    pub source: CyclicSetup,
    pub source_table: StateTable,
    pub target: CyclicSetup,
    pub target_table: StateTable,
}

/// `W^v = W^T` with `K' = (K[j_W, s])^v`, so that `K'[j, s] = K^v`.
pub fn build_mirror_pair(setup: &CyclicSetup, cap: usize) -> Result<MirrorPair> {
    let w_dual = setup.w.transpose();
    let g_dual = dual_group(&setup.w, &setup.g_group, cap)?;
    if let Some(g) = g_dual.elements().iter().find(|g| !g.entries()[0].is_zero()) {
        return Err(Error::DualityViolation(format!("{g} in (K[j,s])^v moves x_0")));
    }
    let tails: Vec<DiagonalSymmetry> = g_dual.elements().iter().map(|g| g.tail()).collect();
    let k_prime = SymmetryGroup::from_closed_set(setup.f.num_vars(), tails);
    let target = CyclicSetup::new(&w_dual, &k_prime, cap)
        .map_err(|e| Error::DualityViolation(format!("mirror setup is not admissible: {e}")))?;
    if target.k != setup.k {
        return Err(Error::DualityViolation(format!("mirror exponent {} vs {}", target.k, setup.k)));
    }
    let k_dual = dual_group(&setup.w, &setup.k_group, cap)?;
    if target.g_group.elements() != k_dual.elements() {
        return Err(Error::DualityViolation("K'[j, s] differs from K^v".into()));
    }
    let source_table = build_h(setup)?;
    let target_table = build_h(&target)?;
    Ok(MirrorPair { source: setup.clone(), source_table, target, target_table })
}

/// `ℍ` at `(h, k, p, q)` against `ℍ^v` at `(k, h, N - p, q)`.
pub fn verify_h_duality(pair: &MirrorPair) -> Report {
    let n = Q::from_integer(pair.source_table.num_vars as i64);
    let mut lhs = BTreeMap::new();
    for (l, d) in &pair.source_table.entries {
        *lhs.entry((l.h.clone(), l.key.clone(), l.p, l.q)).or_insert(0) += d;
    }
    let mut rhs = BTreeMap::new();
    for (l, d) in &pair.target_table.entries {
        *rhs.entry((l.key.clone(), l.h.clone(), n - l.p, l.q)).or_insert(0) += d;
    }
    keyed_compare("H duality", &lhs, &rhs)
}

fn keyed_compare(statement: &str, lhs: &BTreeMap<(DiagonalSymmetry, DiagonalSymmetry, Q, Q), u64>, rhs: &BTreeMap<(DiagonalSymmetry, DiagonalSymmetry, Q, Q), u64>) -> Report {
    let mut report = Report::default();
    let mut keys: Vec<_> = lhs.keys().chain(rhs.keys()).collect();
    keys.sort();
    keys.dedup();
    for key @ (h, k, p, q) in keys {
        report.push(
            statement,
            format!("h={h} k={k} (p,q)=({p},{q})"),
            lhs.get(key).copied().unwrap_or(0),
            rhs.get(key).copied().unwrap_or(0),
        );
    }
    report
}

/// `U_h^k(P)` at `(p, q)` against `U_k^h(P^v)` at `(N - p, q)`.
pub fn verify_krawitz(p: &InvertiblePolynomial, cap: usize) -> Result<Report> {
    let u = unprojected_state_space(p, cap)?;
    let v = unprojected_state_space(&p.transpose(), cap)?;
    Ok(krawitz_compare(&u, &v))
}

pub(crate) fn krawitz_compare(u: &UnprojectedSpace, v: &UnprojectedSpace) -> Report {
    let n = Q::from_integer(u.num_vars as i64);
    let rhs = v.entries.iter().map(|((h, k, p, q), d)| ((k.clone(), h.clone(), n - p, *q), *d)).collect();
    keyed_compare("Krawitz", &u.entries, &rhs)
}

/// Parts 1 to 3 of the LG mirror theorem, cell by cell.
pub fn verify_ms_lg(pair: &MirrorPair) -> Report {
    let src = &pair.source_table;
    let tgt = &pair.target_table;
    let k = src.k;
    let big_n = src.num_vars as i64;
    let n = big_n - 1;
    let kq = |a: u32| Q::new(a as i64, k as i64);
    let mut report = Report::default();

    let lhs = slice(src, 0, 0);
    let mut rhs = BiMap::new();
    for t in 1..k {
        add_into(&mut rhs, slice(tgt, 0, t));
    }
    compare(&mut report, "MS_LG(1)", &lhs, &flip(rhs, big_n));

    let part2 = |table: &StateTable, i: u32| {
        let mut m = shift(slice(table, i, 0), kq(i), kq(i));
        for j in 1..k {
            if j < k - i {
                add_into(&mut m, shift(slice(table, 0, j), Q::from_integer(1), Q::zero()));
            } else if j > k - i {
                add_into(&mut m, shift(slice(table, 0, j), Q::zero(), Q::from_integer(1)));
            }
        }
        m
    };
    for i in 1..k {
        compare(&mut report, &format!("MS_LG(2) i={i}"), &part2(src, i), &flip(part2(tgt, i), n));
    }

    for b in 1..k {
        for t in 1..k {
            let lhs = shift(slice(src, b, t), kq(b), kq(b));
            let rhs = shift(slice(tgt, k - t, k - b), kq(k - t), kq(k - t));
            compare(&mut report, &format!("MS_LG(3) b={b} t={t}"), &lhs, &flip(rhs, n));
        }
    }
    report
}

/// Fixed-side fiber `(X, Y, Z)` of `ℍ` against the moving fiber `(Y, X, Z)` of `ℍ^v`, by total dimension.
pub fn verify_mirror_charges(pair: &MirrorPair) -> Report {
    use crate::statespace::Side;
    let totals = |t: &StateTable, side: Side, swap: bool| {
        let mut m: BTreeMap<(u32, u32, u32), u64> = BTreeMap::new();
        for (l, d) in t.entries.iter().filter(|(l, _)| l.side == side) {
            let key = if swap { (l.y, l.x, l.z) } else { (l.x, l.y, l.z) };
            *m.entry(key).or_insert(0) += d;
        }
        m
    };
    let mut report = Report::default();
    for (side, other) in [(Side::Fixed, Side::Moving), (Side::Moving, Side::Fixed)] {
        let lhs = totals(&pair.source_table, side, false);
        let rhs = totals(&pair.target_table, other, true);
        let mut keys: Vec<_> = lhs.keys().chain(rhs.keys()).collect();
        keys.sort();
        keys.dedup();
        for key in keys {
            report.push(
                format!("charges {side}->{other}"),
                format!("X={} Y={} Z={}", key.0, key.1, key.2),
                lhs.get(key).copied().unwrap_or(0),
                rhs.get(key).copied().unwrap_or(0),
            );
        }
    }
    report
}

/// Weight-`i` classes of `U(W)` against classes of `U(W^v)` in sectors with first entry `i/k`.
pub fn verify_moving_becomes_fixed(w: &InvertiblePolynomial, cap: usize) -> Result<Report> {
    let (k, _) = w.split_cyclic()?;
    let u = unprojected_state_space(w, cap)?;
    let v = unprojected_state_space(&w.transpose(), cap)?;
    let kq = Q::from_integer(k as i64);
    let mut report = Report::default();
    for i in 0..k {
        let target = Q::new(i as i64, k as i64);
        // Q_s of a key is its first entry
        let lhs = u.entries.iter().filter(|((_, key, ..), _)| key.entries()[0] == target).map(|(_, d)| d).sum();
        let rhs = v.entries.iter().filter(|((h, ..), _)| h.entries()[0] * kq == Q::from_integer(i as i64)).map(|(_, d)| d).sum();
        report.push("moving becomes fixed", format!("weight {i}"), lhs, rhs);
    }
    Ok(report)
}

/// Shifts every bidegree by `(-1, -1)`.
pub fn lg_to_cy_reindex(table: &StateTable, w: &InvertiblePolynomial) -> Result<StateTable> {
    if !w.is_calabi_yau() {
        return Err(Error::NotCalabiYau);
    }
    let one = Q::from_integer(1);
    let entries = table
        .entries
        .iter()
        .map(|(l, d)| {
            let mut l = l.clone();
            l.p -= one;
            l.q -= one;
            (l, *d)
        })
        .collect();
    Ok(StateTable { k: table.k, num_vars: table.num_vars, entries })
}

/// Basis label `(a, b)` of `U_P` for Fermat `P`: sector `[a_i / k_i]`, form `prod x_i^{b_i - 1} dx_i`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct FermatState {
    pub a: Vec<u32>,
    pub b: Vec<u32>,
}

fn fermat_exponents(p: &InvertiblePolynomial) -> Result<Vec<u32>> {
    let mut out = vec![0; p.num_vars()];
    for atom in p.atoms() {
        match atom {
            Atom::Fermat { var, exponent, .. } => out[*var] = *exponent,
            _ => return Err(Error::NotFermat),
        }
    }
    Ok(out)
}

impl FermatState {
    /// `(sector, key, p, q)`.
    pub fn labels(&self, exps: &[u32]) -> (DiagonalSymmetry, DiagonalSymmetry, Q, Q) {
        let h = DiagonalSymmetry::new(self.a.iter().zip(exps).map(|(&a, &k)| Q::new(a as i64, k as i64)));
        let key = DiagonalSymmetry::new(self.b.iter().zip(exps).map(|(&b, &k)| Q::new(b as i64, k as i64)));
        let mut p = Q::zero();
        let mut q = Q::zero();
        for i in 0..exps.len() {
            let (a, b) = (Q::new(self.a[i] as i64, exps[i] as i64), Q::new(self.b[i] as i64, exps[i] as i64));
            if self.b[i] != 0 {
                p += Q::from_integer(1);
            }
            p += a - b;
            q += a + b;
        }
        (h, key, p, q)
    }
}

/// All `(a, b)` with `a_i = 0 <=> b_i != 0`.
pub fn fermat_basis(p: &InvertiblePolynomial) -> Result<Vec<FermatState>> {
    let exps = fermat_exponents(p)?;
    let mut out = vec![FermatState { a: vec![], b: vec![] }];
    for &k in &exps {
        let mut next = Vec::new();
        for s in &out {
            for v in 1..k {
                let mut x = s.clone();
                x.a.push(0);
                x.b.push(v);
                next.push(x);
                let mut y = s.clone();
                y.a.push(v);
                y.b.push(0);
                next.push(y);
            }
        }
        out = next;
    }
    Ok(out)
}

/// `(a, b) -> (b, a)`.
pub fn fermat_mirror_map(state: &FermatState) -> Result<FermatState> {
    if state.a.len() != state.b.len() || state.a.iter().zip(&state.b).any(|(&a, &b)| (a == 0) == (b == 0)) {
        return Err(Error::DualityViolation(format!("{state:?} violates a_i = 0 <=> b_i != 0")));
    }
    Ok(FermatState { a: state.b.clone(), b: state.a.clone() })
}

/// Basis-level checks for Fermat `P`: the labelled basis reproduces `U_P`, and the exchange
/// lands on `(N - p, q)` with sector and key swapped.
pub fn verify_fermat(p: &InvertiblePolynomial, cap: usize) -> Result<Report> {
    let exps = fermat_exponents(p)?;
    let u = unprojected_state_space(p, cap)?;
    let n = Q::from_integer(p.num_vars() as i64);
    let mut counted = BTreeMap::new();
    let mut mirror_bad = 0u64;
    let mut involution_bad = 0u64;
    let basis = fermat_basis(p)?;
    for s in &basis {
        let (h, key, pp, qq) = s.labels(&exps);
        *counted.entry((h.clone(), key.clone(), pp, qq)).or_insert(0) += 1;
        let m = fermat_mirror_map(s)?;
        let (h2, key2, p2, q2) = m.labels(&exps);
        if h2 != key || key2 != h || p2 != n - pp || q2 != qq {
            mirror_bad += 1;
        }
        if fermat_mirror_map(&m)? != *s {
            involution_bad += 1;
        }
    }
    let mut report = keyed_compare("Fermat basis", &counted, &u.entries);
    report.push("Fermat exchange", "mismatched images", mirror_bad, 0);
    report.push("Fermat exchange", "non-involutive", involution_bad, 0);
    report.push("Fermat exchange", "basis size", basis.len() as u64, u.total_dim());
    Ok(report)
}

/// `P' + P''` in disjoint variables.
pub fn direct_sum(a: &InvertiblePolynomial, b: &InvertiblePolynomial) -> Result<InvertiblePolynomial> {
    let (n1, n2) = (a.num_vars(), b.num_vars());
    let mut rows = Vec::new();
    for r in a.exponents() {
        let mut row = r.clone();
        row.extend(std::iter::repeat_n(0, n2));
        rows.push(row);
    }
    for r in b.exponents() {
        let mut row = vec![0; n1];
        row.extend(r.iter().copied());
        rows.push(row);
    }
    let names = (0..n1 + n2).map(|i| format!("x{i}")).collect();
    InvertiblePolynomial::from_exponents(names, rows)
}

/// `U(P' + P'')` against the label-wise convolution of `U(P')` and `U(P'')`.
pub fn verify_thom_sebastiani(a: &InvertiblePolynomial, b: &InvertiblePolynomial, cap: usize) -> Result<Report> {
    let sum = direct_sum(a, b)?;
    let us = unprojected_state_space(&sum, cap)?;
    let ua = unprojected_state_space(a, cap)?;
    let ub = unprojected_state_space(b, cap)?;
    let join = |x: &DiagonalSymmetry, y: &DiagonalSymmetry| {
        DiagonalSymmetry::new(x.entries().iter().chain(y.entries()).copied())
    };
    let mut conv = BTreeMap::new();
    for ((h1, k1, p1, q1), d1) in &ua.entries {
        for ((h2, k2, p2, q2), d2) in &ub.entries {
            *conv.entry((join(h1, h2), join(k1, k2), p1 + p2, q1 + q2)).or_insert(0) += d1 * d2;
        }
    }
    Ok(keyed_compare("Thom-Sebastiani", &us.entries, &conv))
}
