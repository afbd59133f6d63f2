//! Diagonal symmetries, their groups, the duality pairing between
//! `Aut_P` and `Aut_{P^v}`, and the cyclic-automorphism setup `K[j_W, s]`.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use num_traits::Zero;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::{self, frac, Q};
use crate::poly::InvertiblePolynomial;

pub const DEFAULT_GROUP_CAP: usize = 1_000_000;

/// Enumeration cap, overridable through `BHMIRROR_MAX_GROUP`.
pub fn group_cap_from_env() -> usize {
    std::env::var("BHMIRROR_MAX_GROUP")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_GROUP_CAP)
}

/// `[a_0, ..., a_n] = diag(exp(2 pi i a_j))`, entries reduced into `[0, 1)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DiagonalSymmetry {
    entries: Vec<Q>,
}

impl DiagonalSymmetry {
    pub fn new(entries: impl IntoIterator<Item = Q>) -> Self {
        Self { entries: entries.into_iter().map(frac).collect() }
    }

    pub fn identity(n: usize) -> Self {
        Self { entries: vec![Q::zero(); n] }
    }

    /// Parses `[1/4, 3/4, 0]`.
    pub fn parse(text: &str) -> Result<Self> {
        let t = text.trim();
        let inner = t
            .strip_prefix('[')
            .and_then(|s| s.strip_suffix(']'))
            .ok_or_else(|| Error::InvalidGroup(format!("expected [..], got {t:?}")))?;
        if inner.trim().is_empty() {
            return Ok(Self::identity(0));
        }
        inner
            .split(',')
            .map(|s| parse_rational(s.trim()))
            .collect::<Result<Vec<_>>>()
            .map(Self::new)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[Q] {
        &self.entries
    }

    pub fn is_identity(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.len(), other.len());
        Self::new(self.entries.iter().zip(&other.entries).map(|(a, b)| a + b))
    }

    pub fn neg(&self) -> Self {
        Self::new(self.entries.iter().map(|a| -a))
    }

    pub fn scale(&self, m: i64) -> Self {
        Self::new(self.entries.iter().map(|a| a * m))
    }

    /// `sum a_i` with representatives in `[0, 1)`.
    pub fn age(&self) -> Q {
        self.entries.iter().sum()
    }

    /// Membership in `SL`: integral age.
    pub fn in_sl(&self) -> bool {
        self.age().is_integer()
    }

    pub fn order(&self) -> i64 {
        linalg::lcm_of_denominators(&self.entries)
    }

    /// Indices `i` with `a_i = 0`.
    pub fn fixed_vars(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.entries[i].is_zero()).collect()
    }

    /// Prepends `first` (used to embed `Aut_f` into `Aut_W`).
    pub fn prepend(&self, first: Q) -> Self {
        Self::new(std::iter::once(first).chain(self.entries.iter().copied()))
    }

    pub fn tail(&self) -> Self {
        Self { entries: self.entries[1..].to_vec() }
    }
}

impl fmt::Display for DiagonalSymmetry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.entries.iter().map(|q| q.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

impl Serialize for DiagonalSymmetry {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

pub(crate) fn parse_rational(s: &str) -> Result<Q> {
    let bad = || Error::InvalidGroup(format!("bad rational {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: i64 = n.trim().parse().map_err(|_| bad())?;
            let d: i64 = d.trim().parse().map_err(|_| bad())?;
            if d == 0 {
                return Err(bad());
            }
            Ok(Q::new(n, d))
        }
        None => s.parse::<i64>().map(Q::from_integer).map_err(|_| bad()),
    }
}

/// A finite subgroup of `(Q/Z)^n`, stored as an explicit sorted element list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymmetryGroup {
    n: usize,
    generators: Vec<DiagonalSymmetry>,
    elements: Vec<DiagonalSymmetry>,
}

impl SymmetryGroup {
    /// Breadth-first closure of the span of `generators`.
    pub fn generate(n: usize, generators: Vec<DiagonalSymmetry>, cap: usize) -> Result<Self> {
        for g in &generators {
            if g.len() != n {
                return Err(Error::DimensionMismatch { expected: n, got: g.len() });
            }
        }
        let id = DiagonalSymmetry::identity(n);
        let mut seen: HashSet<DiagonalSymmetry> = HashSet::from([id.clone()]);
        let mut queue = VecDeque::from([id]);
        while let Some(x) = queue.pop_front() {
            for g in &generators {
                let y = x.add(g);
                if !seen.contains(&y) {
                    if seen.len() >= cap {
                        return Err(Error::GroupTooLarge { cap });
                    }
                    seen.insert(y.clone());
                    queue.push_back(y);
                }
            }
        }
        let mut elements: Vec<_> = seen.into_iter().collect();
        elements.sort();
        Ok(Self { n, generators, elements })
    }

    pub fn trivial(n: usize) -> Self {
        Self { n, generators: Vec::new(), elements: vec![DiagonalSymmetry::identity(n)] }
    }

    /// Builds a group from a list already known to be closed. Generators are chosen greedily.
    pub fn from_closed_set(n: usize, mut elements: Vec<DiagonalSymmetry>) -> Self {
        elements.sort();
        elements.dedup();
        let mut span: HashSet<DiagonalSymmetry> = HashSet::from([DiagonalSymmetry::identity(n)]);
        let mut generators = Vec::new();
        for x in &elements {
            if span.contains(x) {
                continue;
            }
            let ord = x.order();
            let mut next = HashSet::with_capacity(span.len() * ord as usize);
            for s in &span {
                let mut y = s.clone();
                for _ in 0..ord {
                    next.insert(y.clone());
                    y = y.add(x);
                }
            }
            span = next;
            generators.push(x.clone());
        }
        debug_assert_eq!(span.len(), elements.len());
        Self { n, generators, elements }
    }

    pub fn num_vars(&self) -> usize {
        self.n
    }
    pub fn order(&self) -> usize {
        self.elements.len()
    }
    pub fn generators(&self) -> &[DiagonalSymmetry] {
        &self.generators
    }
    pub fn elements(&self) -> &[DiagonalSymmetry] {
        &self.elements
    }
    pub fn contains(&self, g: &DiagonalSymmetry) -> bool {
        self.elements.binary_search(g).is_ok()
    }
    pub fn is_subgroup_of(&self, other: &SymmetryGroup) -> bool {
        self.elements.iter().all(|g| other.contains(g))
    }
    pub fn all_in_sl(&self) -> bool {
        self.generators.iter().all(DiagonalSymmetry::in_sl)
    }

    /// Image under `g -> g.prepend(0)`.
    pub fn embed_with_leading_zero(&self) -> Self {
        Self {
            n: self.n + 1,
            generators: self.generators.iter().map(|g| g.prepend(Q::zero())).collect(),
            elements: self.elements.iter().map(|g| g.prepend(Q::zero())).collect(),
        }
    }
}

/// `rho_j` = column `j` of `E^{-1}`, reduced mod Z.
pub fn aut_generators(p: &InvertiblePolynomial) -> Vec<DiagonalSymmetry> {
    let inv = p.inverse();
    (0..p.num_vars())
        .map(|j| DiagonalSymmetry::new(inv.iter().map(|row| row[j])))
        .collect()
}

/// `rho-bar_i` = row `i` of `E^{-1}`: the generators of `Aut_{P^v}`.
pub fn dual_generators(p: &InvertiblePolynomial) -> Vec<DiagonalSymmetry> {
    p.inverse().iter().map(|row| DiagonalSymmetry::new(row.iter().copied())).collect()
}

pub fn aut_group(p: &InvertiblePolynomial, cap: usize) -> Result<SymmetryGroup> {
    SymmetryGroup::generate(p.num_vars(), aut_generators(p), cap)
}

pub fn sl_group(p: &InvertiblePolynomial, cap: usize) -> Result<SymmetryGroup> {
    let aut = aut_group(p, cap)?;
    let sl = aut.elements().iter().filter(|g| g.in_sl()).cloned().collect();
    Ok(SymmetryGroup::from_closed_set(p.num_vars(), sl))
}

pub fn j_element(p: &InvertiblePolynomial) -> DiagonalSymmetry {
    DiagonalSymmetry::new(p.charges())
}

pub fn j_group(p: &InvertiblePolynomial, cap: usize) -> Result<SymmetryGroup> {
    SymmetryGroup::generate(p.num_vars(), vec![j_element(p)], cap)
}

/// `s = [1/k, 0, ..., 0]` for `W = x_0^k + f`.
pub fn s_element(w: &InvertiblePolynomial) -> Result<DiagonalSymmetry> {
    let (k, _) = w.split_cyclic()?;
    let mut e = vec![Q::zero(); w.num_vars()];
    e[0] = Q::new(1, k as i64);
    Ok(DiagonalSymmetry::new(e))
}

/// `(E g) . h mod Z` for `g` in `Aut_P` and `h` in `Aut_{P^v}`.
pub fn pairing(p: &InvertiblePolynomial, g: &DiagonalSymmetry, h: &DiagonalSymmetry) -> Result<Q> {
    let n = p.num_vars();
    for x in [g, h] {
        if x.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: x.len() });
        }
    }
    Ok(pairing_unchecked(p.exponents(), g.entries(), h.entries()))
}

pub(crate) fn pairing_unchecked(e: &[Vec<i64>], g: &[Q], h: &[Q]) -> Q {
    let eg = linalg::mat_vec(e, g);
    frac(eg.iter().zip(h).map(|(a, b)| a * b).sum())
}

/// `H^v = { h in Aut_{P^v} : <g, h> = 0 for all g in H }`.
pub fn dual_group(p: &InvertiblePolynomial, h: &SymmetryGroup, cap: usize) -> Result<SymmetryGroup> {
    let dual_aut = aut_group(&p.transpose(), cap)?;
    dual_group_within(p, h, &dual_aut)
}

pub(crate) fn dual_group_within(
    p: &InvertiblePolynomial,
    h: &SymmetryGroup,
    dual_aut: &SymmetryGroup,
) -> Result<SymmetryGroup> {
    if h.num_vars() != p.num_vars() {
        return Err(Error::DimensionMismatch { expected: p.num_vars(), got: h.num_vars() });
    }
    let gens: Vec<&DiagonalSymmetry> = if h.generators().is_empty() {
        h.elements().iter().collect()
    } else {
        h.generators().iter().collect()
    };
    let e = p.exponents();
    let egs: Vec<Vec<Q>> = gens.iter().map(|g| linalg::mat_vec(e, g.entries())).collect();
    let elements = dual_aut
        .elements()
        .iter()
        .filter(|x| {
            egs.iter().all(|eg| {
                let s: Q = eg.iter().zip(x.entries()).map(|(a, b)| a * b).sum();
                s.is_integer()
            })
        })
        .cloned()
        .collect();
    Ok(SymmetryGroup::from_closed_set(p.num_vars(), elements))
}

/// A named or explicit group, resolved against a polynomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupSpec {
    /// `<j>` of the polynomial.
    J,
    Sl,
    Full,
    Trivial,
    /// `<j_f^k>`, the smallest admissible `K` for `W = x_0^k + f`.
    Min,
    Generators(Vec<DiagonalSymmetry>),
}

impl GroupSpec {
    /// `J | SL | full | trivial | min` or `gen:[..];gen:[..]`.
    pub fn parse(text: &str) -> Result<Self> {
        let t = text.trim();
        match t.to_ascii_lowercase().as_str() {
            "j" => return Ok(GroupSpec::J),
            "sl" => return Ok(GroupSpec::Sl),
            "full" | "aut" => return Ok(GroupSpec::Full),
            "trivial" | "id" => return Ok(GroupSpec::Trivial),
            "min" => return Ok(GroupSpec::Min),
            _ => {}
        }
        let gens = t
            .split(';')
            .filter(|s| !s.trim().is_empty())
            .map(|s| {
                let s = s.trim();
                let body = s
                    .strip_prefix("gen:")
                    .ok_or_else(|| Error::InvalidGroup(format!("expected gen:[..], got {s:?}")))?;
                DiagonalSymmetry::parse(body)
            })
            .collect::<Result<Vec<_>>>()?;
        if gens.is_empty() {
            return Err(Error::InvalidGroup("empty group specification".into()));
        }
        Ok(GroupSpec::Generators(gens))
    }

    /// Resolves to a subgroup of `Aut_p`. `Min` needs the cyclic exponent `k` of the ambient `W`.
    pub fn resolve(&self, p: &InvertiblePolynomial, k: Option<u32>, cap: usize) -> Result<SymmetryGroup> {
        let n = p.num_vars();
        match self {
            GroupSpec::J => j_group(p, cap),
            GroupSpec::Sl => sl_group(p, cap),
            GroupSpec::Full => aut_group(p, cap),
            GroupSpec::Trivial => Ok(SymmetryGroup::trivial(n)),
            GroupSpec::Min => {
                let k = k.ok_or_else(|| Error::InvalidGroup("min needs a cyclic setup".into()))?;
                SymmetryGroup::generate(n, vec![j_element(p).scale(k as i64)], cap)
            }
            GroupSpec::Generators(gens) => {
                for g in gens {
                    if g.len() != n {
                        return Err(Error::InvalidGroup(format!(
                            "generator {g} has {} entries, expected {n}",
                            g.len()
                        )));
                    }
                    if !p.fixes(g) {
                        return Err(Error::InvalidGroup(format!("{g} is not a symmetry of {p}")));
                    }
                }
                SymmetryGroup::generate(n, gens.clone(), cap)
            }
        }
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::J => f.write_str("J"),
            GroupSpec::Sl => f.write_str("SL"),
            GroupSpec::Full => f.write_str("full"),
            GroupSpec::Trivial => f.write_str("trivial"),
            GroupSpec::Min => f.write_str("min"),
            GroupSpec::Generators(g) => {
                let parts: Vec<String> = g.iter().map(|x| format!("gen:{x}")).collect();
                f.write_str(&parts.join(";"))
            }
        }
    }
}

/// `W = x_0^k + f` with `(j_f)^k in K <= SL_f`, and the labeled group
/// `K[j_W, s] = sum_{a,b} j_W^a s^b K`.
#[derive(Debug, Clone)]
pub struct CyclicSetup {
    pub w: InvertiblePolynomial,
    pub f: InvertiblePolynomial,
    pub k: u32,
    pub j: DiagonalSymmetry,
    pub s: DiagonalSymmetry,
    /// `K` embedded in `Aut_W` (leading coordinate 0).
    pub k_group: SymmetryGroup,
    /// `K[j_W]`.
    pub h_group: SymmetryGroup,
    /// `K[j_W, s]`.
    pub g_group: SymmetryGroup,
    labels: HashMap<DiagonalSymmetry, (u32, u32)>,
}

impl CyclicSetup {
    /// `k_in_f` lives in `Aut_f` (coordinates of `x_1..x_n`).
    pub fn new(w: &InvertiblePolynomial, k_in_f: &SymmetryGroup, cap: usize) -> Result<Self> {
        let (k, f) = w.split_cyclic()?;
        if k_in_f.num_vars() != f.num_vars() {
            return Err(Error::DimensionMismatch { expected: f.num_vars(), got: k_in_f.num_vars() });
        }
        if let Some(g) = k_in_f.elements().iter().find(|g| !f.fixes(g)) {
            return Err(Error::NotAdmissible(format!("{g} is not a symmetry of f")));
        }
        if let Some(g) = k_in_f.elements().iter().find(|g| !g.in_sl()) {
            return Err(Error::NotAdmissible(format!("{g} is not in SL_f")));
        }
        let jf_k = j_element(&f).scale(k as i64);
        if !k_in_f.contains(&jf_k) {
            return Err(Error::NotAdmissible(format!("(j_f)^{k} = {jf_k} is not in K")));
        }
        let j = j_element(w);
        let s = s_element(w)?;
        let k_group = k_in_f.embed_with_leading_zero();

        let mut labels = HashMap::new();
        for a in 0..k {
            for b in 0..k {
                let shift = j.scale(a as i64).add(&s.scale(b as i64));
                for kappa in k_group.elements() {
                    let g = shift.add(kappa);
                    if let Some(&(a1, b1)) = labels.get(&g) {
                        return Err(Error::GradingCollision { a1, b1, a2: a, b2: b });
                    }
                    labels.insert(g, (a, b));
                }
            }
        }
        if labels.len() > cap {
            return Err(Error::GroupTooLarge { cap });
        }
        let n = w.num_vars();
        let mut g_gens = k_group.generators().to_vec();
        g_gens.extend([j.clone(), s.clone()]);
        let g_group = SymmetryGroup::generate(n, g_gens, cap)?;
        debug_assert_eq!(g_group.order(), labels.len());
        let mut h_gens = k_group.generators().to_vec();
        h_gens.push(j.clone());
        let h_group = SymmetryGroup::generate(n, h_gens, cap)?;
        Ok(Self { w: w.clone(), f, k, j, s, k_group, h_group, g_group, labels })
    }

    /// `(a, b)` with `g in j^a s^b K`.
    pub fn label(&self, g: &DiagonalSymmetry) -> Option<(u32, u32)> {
        self.labels.get(g).copied()
    }

    /// `(d_j, d_s)` as rationals in `[0, 1)`.
    pub fn degrees(&self, g: &DiagonalSymmetry) -> Option<(Q, Q)> {
        let k = self.k as i64;
        self.label(g).map(|(a, b)| (Q::new(a as i64, k), Q::new(b as i64, k)))
    }
}

/// Convenience: one rational as `Q`.
pub fn q(n: i64, d: i64) -> Q {
    Q::new(n, d)
}
