//! The state space `ℍ = [U_{K[j_W,s]}(W)]^K` with its four `ℚ/ℤ` gradings.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{frac, Q};
use crate::milnor::{sector_from_series, SeriesCache};
use crate::poly::InvertiblePolynomial;
use crate::symmetry::{aut_group, pairing_unchecked, CyclicSetup, DiagonalSymmetry, SymmetryGroup};

/// `U_h^k` at bidegree `(p, q)`.
pub type UKey = (DiagonalSymmetry, DiagonalSymmetry, Q, Q);

/// `U_P = ⊕_h Jac(P_h)(-age h)`, split by sector `h` and key `k ∈ Aut_{P^v}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnprojectedSpace {
    pub num_vars: usize,
    pub entries: BTreeMap<UKey, u64>,
}

impl UnprojectedSpace {
    pub fn total_dim(&self) -> u64 {
        self.entries.values().sum()
    }

    pub fn sector_dim(&self, h: &DiagonalSymmetry) -> u64 {
        self.entries.iter().filter(|((s, ..), _)| s == h).map(|(_, d)| d).sum()
    }

    pub fn dims_by_sector(&self) -> BTreeMap<DiagonalSymmetry, u64> {
        let mut out = BTreeMap::new();
        for ((h, ..), d) in &self.entries {
            *out.entry(h.clone()).or_insert(0) += d;
        }
        out
    }
}

/// Sectors over all of `Aut_P`, no invariants taken.
pub fn unprojected_state_space(p: &InvertiblePolynomial, cap: usize) -> Result<UnprojectedSpace> {
    let g = aut_group(p, cap)?;
    unprojected_over(p, &g, None)
}

/// Sectors over `sectors`, keys restricted to `invariance^v`.
pub fn unprojected_over(
    p: &InvertiblePolynomial,
    sectors: &SymmetryGroup,
    invariance: Option<&SymmetryGroup>,
) -> Result<UnprojectedSpace> {
    let cache = SeriesCache::build(p, sectors.elements())?;
    let parts: Vec<_> = sectors
        .elements()
        .par_iter()
        .map(|h| {
            let fixed = h.fixed_vars();
            sector_from_series(p, h, &fixed, cache.get(&fixed), invariance)
        })
        .collect();
    let mut entries = BTreeMap::new();
    for sa in parts {
        for ((key, pp, qq), d) in sa.table {
            entries.insert((sa.sector.clone(), key, pp, qq), d);
        }
    }
    Ok(UnprojectedSpace { num_vars: p.num_vars(), entries })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Side {
    Moving,
    Fixed,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Moving => "moving",
            Side::Fixed => "fixed",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StateLabel {
    pub h: DiagonalSymmetry,
    pub key: DiagonalSymmetry,
    pub p: Q,
    pub q: Q,
    pub d_j: Q,
    pub d_s: Q,
    pub q_j: Q,
    pub q_s: Q,
    pub weight: u32,
    pub side: Side,
    pub x: u32,
    pub y: u32,
    pub z: u32,
}

impl StateLabel {
    /// Cyclic labels `(a, b)` with `d_j = a/k`, `d_s = b/k`.
    pub fn ab(&self, k: u32) -> (u32, u32) {
        let kq = Q::from_integer(k as i64);
        ((self.d_j * kq).to_integer() as u32, (self.d_s * kq).to_integer() as u32)
    }

    pub fn is_narrow(&self) -> bool {
        self.h.fixed_vars().is_empty()
    }
}

/// Dimension table keyed by full label records.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateTable {
    pub k: u32,
    pub num_vars: usize,
    pub entries: BTreeMap<StateLabel, u64>,
}

/// `(X, Y, Z, p, q)` on one side.
pub type FiberKey = (u32, u32, u32, Q, Q);

fn kth(x: Q, k: u32) -> u32 {
    let v = frac(x) * Q::from_integer(k as i64);
    assert!(v.is_integer(), "{x} is not a multiple of 1/{k}");
    v.to_integer() as u32
}

pub fn build_h(setup: &CyclicSetup) -> Result<StateTable> {
    let w = &setup.w;
    let k = setup.k;
    let u = unprojected_over(w, &setup.g_group, Some(&setup.k_group))?;
    let mut entries = BTreeMap::new();
    for ((h, key, p, q), dim) in u.entries {
        let (d_j, d_s) = setup
            .degrees(&h)
            .ok_or_else(|| Error::DualityViolation(format!("sector {h} has no cyclic label")))?;
        let q_j = pairing_unchecked(w.exponents(), setup.j.entries(), key.entries());
        let q_s = pairing_unchecked(w.exponents(), setup.s.entries(), key.entries());
        let side = if q_s.is_zero() { Side::Fixed } else { Side::Moving };
        let x = kth(d_j, k);
        let y = kth(q_s - q_j, k);
        let z = match side {
            Side::Moving => kth(q_s, k),
            Side::Fixed => kth(d_j + d_s, k),
        };
        let label = StateLabel { h, key, p, q, d_j, d_s, q_j, q_s, weight: kth(q_s, k), side, x, y, z };
        entries.insert(label, dim);
    }
    let table = StateTable { k, num_vars: w.num_vars(), entries };
    table.validate(setup)?;
    Ok(table)
}

impl StateTable {
    /// Recomputes every redundant label from `(h, key)`.
    pub fn validate(&self, setup: &CyclicSetup) -> Result<()> {
        let e = setup.w.exponents();
        let k = self.k;
        for l in self.entries.keys() {
            let bad = |why: &str| Err(Error::DualityViolation(format!("{why} at sector {} key {}", l.h, l.key)));
            if setup.degrees(&l.h) != Some((l.d_j, l.d_s)) {
                return bad("cyclic label mismatch");
            }
            if pairing_unchecked(e, setup.j.entries(), l.key.entries()) != l.q_j
                || pairing_unchecked(e, setup.s.entries(), l.key.entries()) != l.q_s
            {
                return bad("charge mismatch");
            }
            // x_0 is fixed by h exactly when d_j + d_s = 0, and then every form carries dx_0
            if (l.side == Side::Moving) != frac(l.d_j + l.d_s).is_zero() {
                return bad("support violated");
            }
            if l.z == 0 || l.x != kth(l.d_j, k) || l.y != kth(l.q_s - l.q_j, k) || l.weight != kth(l.q_s, k) {
                return bad("coordinate mismatch");
            }
            if setup.k_group.elements().iter().any(|g| !pairing_unchecked(e, g.entries(), l.key.entries()).is_zero()) {
                return bad("key outside K^v");
            }
        }
        Ok(())
    }

    pub fn total_dim(&self) -> u64 {
        self.entries.values().sum()
    }

    pub fn filter(&self, pred: impl Fn(&StateLabel) -> bool) -> StateTable {
        StateTable {
            k: self.k,
            num_vars: self.num_vars,
            entries: self.entries.iter().filter(|(l, _)| pred(l)).map(|(l, d)| (l.clone(), *d)).collect(),
        }
    }

    pub fn bidegree_dims(&self) -> BTreeMap<(Q, Q), u64> {
        let mut out = BTreeMap::new();
        for (l, d) in &self.entries {
            *out.entry((l.p, l.q)).or_insert(0) += d;
        }
        out
    }

    /// Dimensions by cyclic label `(a, b)`.
    pub fn label_dims(&self) -> BTreeMap<(u32, u32), u64> {
        let mut out = BTreeMap::new();
        for (l, d) in &self.entries {
            *out.entry(l.ab(self.k)).or_insert(0) += d;
        }
        out
    }

    pub fn fibers(&self, side: Side) -> BTreeMap<FiberKey, u64> {
        let mut out = BTreeMap::new();
        for (l, d) in self.entries.iter().filter(|(l, _)| l.side == side) {
            *out.entry((l.x, l.y, l.z, l.p, l.q)).or_insert(0) += d;
        }
        out
    }
}

/// `H_{W, K[j_W], s^b}`: the `Q_j = 0` part of `ℍ` with `d_s = b/k`.
pub fn fjrw_state_space(table: &StateTable, b: u32) -> StateTable {
    let k = table.k;
    table.filter(|l| l.q_j.is_zero() && l.ab(k).1 == b % k)
}

/// `ℍ^m_{X,Y,Z} -> ℍ^f_{X,Y,Z}`, `(p, q) -> (p - 1 + 2Z/k, q)`.
pub fn twist(table: &StateTable) -> BTreeMap<FiberKey, u64> {
    let k = Q::from_integer(table.k as i64);
    let mut out = BTreeMap::new();
    for ((x, y, z, p, q), d) in table.fibers(Side::Moving) {
        let p2 = p - Q::from_integer(1) + Q::from_integer(2 * z as i64) / k;
        *out.entry((x, y, z, p2, q)).or_insert(0) += d;
    }
    out
}

fn elevator(entry: &FiberKey, to: u32, k: u32, sign: i64) -> Result<FiberKey> {
    let (x, y, z, p, q) = *entry;
    for v in [z, to] {
        if v == 0 || v >= k {
            return Err(Error::ZOutOfRange(v));
        }
    }
    let delta = Q::new(to as i64 - z as i64, k as i64);
    Ok((x, y, to, p + Q::from_integer(sign) * delta, q + delta))
}

/// Moving elevator `Z' -> Z''`: `(p, q) -> (p - δ, q + δ)`, `δ = (Z'' - Z')/k`.
pub fn elevator_m(side: Side, entry: &FiberKey, to: u32, k: u32) -> Result<FiberKey> {
    if side != Side::Moving {
        return Err(Error::SideMismatch);
    }
    elevator(entry, to, k, -1)
}

/// Fixed elevator `Z' -> Z''`: `(p, q) -> (p + δ, q + δ)`.
pub fn elevator_f(side: Side, entry: &FiberKey, to: u32, k: u32) -> Result<FiberKey> {
    if side != Side::Fixed {
        return Err(Error::SideMismatch);
    }
    elevator(entry, to, k, 1)
}

pub fn weight_decomposition(table: &StateTable) -> BTreeMap<u32, StateTable> {
    let mut out: BTreeMap<u32, StateTable> = BTreeMap::new();
    for (l, d) in &table.entries {
        out.entry(l.weight)
            .or_insert_with(|| StateTable { k: table.k, num_vars: table.num_vars, entries: BTreeMap::new() })
            .entries
            .insert(l.clone(), *d);
    }
    out
}

/// `(narrow, broad)`.
pub fn narrow_broad_split(table: &StateTable) -> (StateTable, StateTable) {
    (table.filter(|l| l.is_narrow()), table.filter(|l| !l.is_narrow()))
}

/// One structural check on a table: name and list of violations.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StructureCheck {
    pub name: &'static str,
    pub violations: Vec<String>,
}

impl StructureCheck {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

fn diff_maps(a: &BTreeMap<FiberKey, u64>, b: &BTreeMap<FiberKey, u64>) -> Vec<String> {
    let mut out = Vec::new();
    for key in a.keys().chain(b.keys()) {
        let (l, r) = (a.get(key).copied().unwrap_or(0), b.get(key).copied().unwrap_or(0));
        if l != r {
            let (x, y, z, p, q) = key;
            out.push(format!("X={x} Y={y} Z={z} (p,q)=({p},{q}): {l} vs {r}"));
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Twist, elevators, vanishing and slice reconstruction, checked on the whole table.
pub fn structure_checks(table: &StateTable) -> Vec<StructureCheck> {
    let k = table.k;
    let mut checks = Vec::new();

    checks.push(StructureCheck { name: "twist", violations: diff_maps(&twist(table), &table.fibers(Side::Fixed)) });

    let mut elev = Vec::new();
    for side in [Side::Moving, Side::Fixed] {
        let fibers = table.fibers(side);
        for to in 1..k {
            let mut moved = BTreeMap::new();
            for (key, d) in fibers.iter().filter(|(key, _)| key.2 == 1) {
                let img = match side {
                    Side::Moving => elevator_m(side, key, to, k),
                    Side::Fixed => elevator_f(side, key, to, k),
                }
                .expect("Z in range");
                *moved.entry(img).or_insert(0) += d;
            }
            let actual: BTreeMap<FiberKey, u64> =
                fibers.iter().filter(|(key, _)| key.2 == to).map(|(a, b)| (*a, *b)).collect();
            elev.extend(diff_maps(&moved, &actual).into_iter().map(|v| format!("{side} 1->{to}: {v}")));
        }
    }
    checks.push(StructureCheck { name: "elevators", violations: elev });

    let vanishing = table
        .entries
        .iter()
        .filter(|(l, d)| **d > 0 && l.side == Side::Moving && l.y == l.z && (l.x * l.z) % k != 0)
        .map(|(l, d)| format!("X={} Y=Z={} has dim {d}", l.x, l.z))
        .collect();
    checks.push(StructureCheck { name: "vanishing", violations: vanishing });

    let untwisted: u64 = table.entries.iter().filter(|(l, _)| l.q_j.is_zero()).map(|(_, d)| d).sum();
    let slices: u64 = (0..k).map(|b| fjrw_state_space(table, b).total_dim()).sum();
    let recon = if untwisted == slices { vec![] } else { vec![format!("slices {slices} vs Q_j=0 part {untwisted}")] };
    checks.push(StructureCheck { name: "reconstruction", violations: recon });
    checks
}
