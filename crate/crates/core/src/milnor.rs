//! Equivariant graded Jacobi (Milnor) algebras of restricted polynomials.
//!
//! Every basis form `prod_{j in I} x_j^{b_j - 1} /\ dx_j` of `Jac(P_h)` carries
//! the key `prod rho-bar_j^{b_j}` in `Aut_{P^v}` and the weighted degree
//! `sum b_j w_j` (units of `1/d`). Because each `d_i P_h` is homogeneous for
//! both gradings and the partials form a regular sequence, the bigraded
//! Hilbert series is the Koszul product
//!
//! `prod_{i in I} chi_i t^{w_i} (1 - chi_i^{-1} t^{d - w_i}) / (1 - chi_i t^{w_i})`
//!
//! with `chi_i = rho-bar_i`.

use std::collections::{BTreeMap, HashMap};

use num_traits::Zero;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::Q;
use crate::poly::{Atom, InvertiblePolynomial, RestrictedPolynomial};
use crate::symmetry::{dual_generators, pairing_unchecked, DiagonalSymmetry, SymmetryGroup};

/// Truncated power series in `t` with coefficients in the monoid ring over `Aut_{P^v}`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GroupRingSeries {
    coefficients: BTreeMap<u32, BTreeMap<DiagonalSymmetry, u64>>,
    truncation_bound: u32,
}

impl GroupRingSeries {
    pub fn coefficients(&self) -> &BTreeMap<u32, BTreeMap<DiagonalSymmetry, u64>> {
        &self.coefficients
    }

    pub fn truncation_bound(&self) -> u32 {
        self.truncation_bound
    }

    pub fn total_dim(&self) -> u64 {
        self.coefficients.values().flat_map(|c| c.values()).sum()
    }

    /// Every key sent to the trivial character.
    pub fn hilbert_function(&self) -> BTreeMap<u32, u64> {
        self.coefficients
            .iter()
            .map(|(&m, c)| (m, c.values().sum()))
            .collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, &DiagonalSymmetry, u64)> {
        self.coefficients
            .iter()
            .flat_map(|(&m, c)| c.iter().map(move |(k, &v)| (m, k, v)))
    }
}

type Work = BTreeMap<u32, HashMap<DiagonalSymmetry, i64>>;

fn shift(series: &Work, chi: &DiagonalSymmetry, by: u32, bound: u32) -> Work {
    let mut out = Work::new();
    for (&m, coeffs) in series {
        if m + by > bound {
            continue;
        }
        let slot = out.entry(m + by).or_default();
        for (key, &v) in coeffs {
            *slot.entry(key.add(chi)).or_insert(0) += v;
        }
    }
    out
}

/// Multiplies by `sum_{r >= 0} chi^r t^{r w}` (mod `t^{bound + 1}`) via `new[m] = old[m] + chi new[m - w]`.
fn geometric(series: &Work, chi: &DiagonalSymmetry, w: u32, bound: u32) -> Work {
    let mut out = Work::new();
    for m in 0..=bound {
        let mut slot: HashMap<DiagonalSymmetry, i64> = series.get(&m).cloned().unwrap_or_default();
        if m >= w {
            if let Some(prev) = out.get(&(m - w)) {
                for (key, &v) in prev {
                    *slot.entry(key.add(chi)).or_insert(0) += v;
                }
            }
        }
        slot.retain(|_, v| *v != 0);
        if !slot.is_empty() {
            out.insert(m, slot);
        }
    }
    out
}

fn subtract(a: &mut Work, b: &Work) {
    for (&m, coeffs) in b {
        let slot = a.entry(m).or_default();
        for (key, &v) in coeffs {
            *slot.entry(key.clone()).or_insert(0) -= v;
        }
    }
    for slot in a.values_mut() {
        slot.retain(|_, v| *v != 0);
    }
    a.retain(|_, s| !s.is_empty());
}

/// Koszul-product Hilbert series of `Jac(P_h)` with the volume-form shift included.
pub fn equivariant_hilbert(r: &RestrictedPolynomial<'_>) -> Result<GroupRingSeries> {
    let p = r.parent;
    let rho_bar = dual_generators(p);
    Ok(koszul_series(p, &rho_bar, &r.fixed_vars))
}

fn koszul_series(p: &InvertiblePolynomial, rho_bar: &[DiagonalSymmetry], fixed: &[usize]) -> GroupRingSeries {
    let d = p.degree() as u32;
    let w: Vec<u32> = p.weights().iter().map(|&x| x as u32).collect();
    let bound: u32 = fixed.iter().map(|&i| d - w[i]).sum();
    let n = p.num_vars();
    let mut series = Work::from([(0, HashMap::from([(DiagonalSymmetry::identity(n), 1i64)]))]);
    for &i in fixed {
        let chi = &rho_bar[i];
        series = shift(&series, chi, w[i], bound);
        series = geometric(&series, chi, w[i], bound);
        let relation = shift(&series, &chi.neg(), d - w[i], bound);
        subtract(&mut series, &relation);
    }
    let coefficients = series
        .into_iter()
        .map(|(m, coeffs)| {
            let c: BTreeMap<DiagonalSymmetry, u64> = coeffs
                .into_iter()
                .map(|(k, v)| {
                    assert!(v > 0, "negative coefficient in a Milnor algebra series");
                    (k, v as u64)
                })
                .collect();
            (m, c)
        })
        .collect();
    GroupRingSeries { coefficients, truncation_bound: bound }
}

/// Basis element of a Fermat-supported `Jac(P_h)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct FermatBasisElement {
    /// `b_i` for each fixed variable, in `fixed_vars` order.
    pub b: Vec<u32>,
    pub key: DiagonalSymmetry,
    pub degree: u32,
}

/// All `b` with `1 <= b_i <= k_i - 1`, enumerated directly.
pub fn fermat_monomial_basis(r: &RestrictedPolynomial<'_>) -> Result<Vec<FermatBasisElement>> {
    let p = r.parent;
    let mut exps = Vec::new();
    for &v in &r.fixed_vars {
        let k = p
            .atoms()
            .iter()
            .find_map(|a| match a {
                Atom::Fermat { var, exponent, .. } if *var == v => Some(*exponent),
                _ => None,
            })
            .ok_or(Error::NotFermat)?;
        exps.push(k);
    }
    let rho_bar = dual_generators(p);
    let mut out = Vec::new();
    let mut b = vec![1u32; exps.len()];
    if exps.iter().any(|&k| k < 2) {
        return Ok(out);
    }
    loop {
        let mut key = DiagonalSymmetry::identity(p.num_vars());
        let mut degree = 0;
        for (pos, &v) in r.fixed_vars.iter().enumerate() {
            key = key.add(&rho_bar[v].scale(b[pos] as i64));
            degree += b[pos] * p.weights()[v] as u32;
        }
        out.push(FermatBasisElement { b: b.clone(), key, degree });
        // odometer
        let mut pos = 0;
        loop {
            if pos == b.len() {
                return Ok(out);
            }
            b[pos] += 1;
            if b[pos] < exps[pos] {
                break;
            }
            b[pos] = 1;
            pos += 1;
        }
    }
}

/// Series for every distinct fixed-variable set, computed in parallel.
#[derive(Debug, Clone, Default)]
pub struct SeriesCache {
    by_fixed: HashMap<Vec<usize>, GroupRingSeries>,
}

impl SeriesCache {
    pub fn build<'a>(p: &InvertiblePolynomial, sectors: impl IntoIterator<Item = &'a DiagonalSymmetry>) -> Result<Self> {
        let mut sets: Vec<Vec<usize>> = sectors.into_iter().map(|h| h.fixed_vars()).collect();
        sets.sort();
        sets.dedup();
        for set in &sets {
            p.restrict_to(set)?;
        }
        let rho_bar = dual_generators(p);
        let by_fixed = sets
            .into_par_iter()
            .map(|set| {
                let s = koszul_series(p, &rho_bar, &set);
                (set, s)
            })
            .collect();
        Ok(Self { by_fixed })
    }

    pub fn get(&self, fixed: &[usize]) -> &GroupRingSeries {
        &self.by_fixed[fixed]
    }
}

/// `(Jac P_h)^K (-age h)` as a table `(key, p, q) -> dim`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SectorAlgebra {
    pub sector: DiagonalSymmetry,
    pub fixed_vars: Vec<usize>,
    pub table: BTreeMap<(DiagonalSymmetry, Q, Q), u64>,
}

impl SectorAlgebra {
    pub fn total_dim(&self) -> u64 {
        self.table.values().sum()
    }
}

/// `q = age(h) + m / d`, `p = age(h) + |I| - m / d`.
pub fn bidegree(age: Q, fixed: usize, m: u32, d: i64) -> (Q, Q) {
    let charge = Q::new(m as i64, d);
    (age + Q::from_integer(fixed as i64) - charge, age + charge)
}

/// Keys pairing trivially with every element of `invariance` (that is, keys in `K^v`).
pub fn sector_algebra(
    p: &InvertiblePolynomial,
    h: &DiagonalSymmetry,
    invariance: Option<&SymmetryGroup>,
) -> Result<SectorAlgebra> {
    if !p.fixes(h) {
        return Err(Error::InvalidGroup(format!("{h} is not a symmetry of {p}")));
    }
    let r = p.restrict(h)?;
    let series = equivariant_hilbert(&r)?;
    Ok(sector_from_series(p, h, &r.fixed_vars, &series, invariance))
}

pub(crate) fn sector_from_series(
    p: &InvertiblePolynomial,
    h: &DiagonalSymmetry,
    fixed: &[usize],
    series: &GroupRingSeries,
    invariance: Option<&SymmetryGroup>,
) -> SectorAlgebra {
    let age = h.age();
    let gens: Vec<&DiagonalSymmetry> = match invariance {
        Some(k) if !k.generators().is_empty() => k.generators().iter().collect(),
        Some(k) => k.elements().iter().collect(),
        None => Vec::new(),
    };
    let mut table = BTreeMap::new();
    for (m, key, dim) in series.iter() {
        if gens
            .iter()
            .any(|g| !pairing_unchecked(p.exponents(), g.entries(), key.entries()).is_zero())
        {
            continue;
        }
        let (pp, qq) = bidegree(age, fixed.len(), m, p.degree());
        *table.entry((key.clone(), pp, qq)).or_insert(0) += dim;
    }
    SectorAlgebra { sector: h.clone(), fixed_vars: fixed.to_vec(), table }
}

/// `(sector, key, degree) -> dim` from the series engine against the Fermat enumeration.
/// Returns the mismatching cells.
pub fn oracle_mismatches(p: &InvertiblePolynomial, sectors: &[DiagonalSymmetry]) -> Result<Vec<String>> {
    let cache = SeriesCache::build(p, sectors)?;
    let mut bad = Vec::new();
    for h in sectors {
        let r = p.restrict(h)?;
        let mut oracle: BTreeMap<(u32, DiagonalSymmetry), u64> = BTreeMap::new();
        for e in fermat_monomial_basis(&r)? {
            *oracle.entry((e.degree, e.key)).or_insert(0) += 1;
        }
        let engine: BTreeMap<(u32, DiagonalSymmetry), u64> =
            cache.get(&r.fixed_vars).iter().map(|(m, k, d)| ((m, k.clone()), d)).collect();
        if engine != oracle {
            bad.push(format!("sector {h}: engine {} classes, oracle {}", engine.values().sum::<u64>(), oracle.values().sum::<u64>()));
        }
    }
    Ok(bad)
}

/// Sectors whose series total differs from `prod (d - w_i)/w_i`.
pub fn milnor_mismatches(p: &InvertiblePolynomial, sectors: &[DiagonalSymmetry]) -> Result<Vec<String>> {
    let cache = SeriesCache::build(p, sectors)?;
    let mut bad = Vec::new();
    for h in sectors {
        let r = p.restrict(h)?;
        let (got, want) = (cache.get(&r.fixed_vars).total_dim(), r.milnor_number());
        if got != want {
            bad.push(format!("sector {h}: {got} vs {want}"));
        }
    }
    Ok(bad)
}
