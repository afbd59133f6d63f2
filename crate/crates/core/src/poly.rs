//! Invertible quasi-homogeneous polynomials: parsing, weights, atoms,
//! transposition and restriction to fixed-variable subsets.

use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, Q};
use crate::symmetry::DiagonalSymmetry;

/// Largest number of variables accepted anywhere in the crate.
pub const MAX_VARS: usize = 12;

/// One block of the Kreuzer-Skarke decomposition. Indices refer to the
/// parent polynomial's variables and monomials.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind")]
pub enum Atom {
    /// `x^k`.
    Fermat { var: usize, monomial: usize, exponent: u32 },
    /// `x_1^{a_1} x_2 + ... + x_{m-1}^{a_{m-1}} x_m + x_m^{a_m}`.
    Chain { vars: Vec<usize>, monomials: Vec<usize>, exponents: Vec<u32> },
    /// `x_1^{a_1} x_2 + ... + x_m^{a_m} x_1`.
    Loop { vars: Vec<usize>, monomials: Vec<usize>, exponents: Vec<u32> },
}

impl Atom {
    pub fn vars(&self) -> Vec<usize> {
        match self {
            Atom::Fermat { var, .. } => vec![*var],
            Atom::Chain { vars, .. } | Atom::Loop { vars, .. } => vars.clone(),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Atom::Fermat { .. } => "fermat",
            Atom::Chain { .. } => "chain",
            Atom::Loop { .. } => "loop",
        }
    }

    /// `(monomial, main variable, exponent of main variable, pointer)` for every row of the block.
    fn rows(&self) -> Vec<(usize, usize, u32, Option<usize>)> {
        match self {
            Atom::Fermat { var, monomial, exponent } => vec![(*monomial, *var, *exponent, None)],
            Atom::Chain { vars, monomials, exponents } => (0..vars.len())
                .map(|i| (monomials[i], vars[i], exponents[i], vars.get(i + 1).copied()))
                .collect(),
            Atom::Loop { vars, monomials, exponents } => (0..vars.len())
                .map(|i| (monomials[i], vars[i], exponents[i], Some(vars[(i + 1) % vars.len()])))
                .collect(),
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (name, exps) = match self {
            Atom::Fermat { exponent, .. } => ("Fermat", vec![*exponent]),
            Atom::Chain { exponents, .. } => ("Chain", exponents.clone()),
            Atom::Loop { exponents, .. } => ("Loop", exponents.clone()),
        };
        let parts: Vec<String> = exps.iter().map(|e| e.to_string()).collect();
        write!(f, "{}({})", name, parts.join(","))
    }
}

#[derive(Debug, Clone)]
pub struct InvertiblePolynomial {
    var_names: Vec<String>,
    exponents: Vec<Vec<i64>>,
    inverse: Vec<Vec<Q>>,
    det: i64,
    weights: Vec<i64>,
    degree: i64,
    atoms: Vec<Atom>,
}

impl PartialEq for InvertiblePolynomial {
    fn eq(&self, other: &Self) -> bool {
        self.var_names == other.var_names && self.exponents == other.exponents
    }
}
impl Eq for InvertiblePolynomial {}

/// `q = E^{-1} 1` in exact rationals, normalized to the smallest integral
/// weights `w` and degree `d` with `w / d = q`.
pub fn solve_weights(exponents: &[Vec<i64>]) -> Result<(Vec<i64>, i64)> {
    let inv = linalg::inverse(exponents).ok_or(Error::SingularExponentMatrix)?;
    weights_from_inverse(&inv, |i| format!("#{i}"))
}

fn weights_from_inverse(inv: &[Vec<Q>], name: impl Fn(usize) -> String) -> Result<(Vec<i64>, i64)> {
    let q: Vec<Q> = inv.iter().map(|row| row.iter().copied().sum()).collect();
    if let Some(i) = q.iter().position(|x| !x.is_positive()) {
        return Err(Error::NonPositiveWeight { var: name(i) });
    }
    let d = linalg::lcm_of_denominators(&q);
    let w = q.iter().map(|x| (*x * d).to_integer()).collect();
    Ok((w, d))
}

/// Finds the Fermat/chain/loop decomposition of an exponent matrix.
///
/// Every monomial gets a main variable such that the remaining factor is
/// at most one other variable to the first power (the "pointer"); main
/// variables form a bijection, pointers have in-degree at most one, and
/// every pointer path ends on a pure power with exponent at least 2.
/// Ties are broken by the lowest variable index.
pub fn classify_atoms(exponents: &[Vec<i64>]) -> Result<Vec<Atom>> {
    let n = exponents.len();
    if n > MAX_VARS {
        return Err(Error::TooManyVariables(n));
    }
    for (j, _) in (0..n).enumerate() {
        if exponents.iter().all(|row| row[j] == 0) {
            return Err(Error::DegenerateShape(format!("variable #{j} appears in no monomial")));
        }
    }
    // candidates[i] = list of (main var, pointer)
    let mut candidates = Vec::with_capacity(n);
    for (i, row) in exponents.iter().enumerate() {
        let support: Vec<usize> = (0..n).filter(|&j| row[j] > 0).collect();
        let c: Vec<(usize, Option<usize>)> = match support.as_slice() {
            [v] => vec![(*v, None)],
            [u, v] => {
                let mut c = Vec::new();
                if row[*v] == 1 {
                    c.push((*u, Some(*v)));
                }
                if row[*u] == 1 {
                    c.push((*v, Some(*u)));
                }
                c
            }
            _ => Vec::new(),
        };
        if c.is_empty() {
            return Err(Error::DegenerateShape(format!(
                "monomial #{i} is not of the form x^a or x^a*y"
            )));
        }
        candidates.push(c);
    }

    let mut main = vec![usize::MAX; n];
    let mut pointer: Vec<Option<usize>> = vec![None; n];
    let mut used = vec![false; n];
    let mut pointed = vec![false; n];
    if search(0, exponents, &candidates, &mut main, &mut pointer, &mut used, &mut pointed) {
        Ok(assemble_atoms(exponents, &main, &pointer))
    } else {
        Err(Error::DegenerateShape(
            "no Fermat/chain/loop decomposition exists".into(),
        ))
    }
}

fn search(
    i: usize,
    e: &[Vec<i64>],
    cand: &[Vec<(usize, Option<usize>)>],
    main: &mut [usize],
    pointer: &mut [Option<usize>],
    used: &mut [bool],
    pointed: &mut [bool],
) -> bool {
    let n = e.len();
    if i == n {
        return structure_ok(e, main, pointer);
    }
    for &(v, p) in &cand[i] {
        if used[v] || p.is_some_and(|p| pointed[p]) {
            continue;
        }
        used[v] = true;
        if let Some(p) = p {
            pointed[p] = true;
        }
        main[i] = v;
        pointer[i] = p;
        if search(i + 1, e, cand, main, pointer, used, pointed) {
            return true;
        }
        used[v] = false;
        if let Some(p) = p {
            pointed[p] = false;
        }
    }
    false
}

fn structure_ok(e: &[Vec<i64>], main: &[usize], pointer: &[Option<usize>]) -> bool {
    let n = e.len();
    let mut row_of = vec![0; n];
    for (i, &v) in main.iter().enumerate() {
        row_of[v] = i;
    }
    // every maximal path must end on a pure power with exponent >= 2
    for v in 0..n {
        let i = row_of[v];
        if pointer[i].is_none() && e[i][v] < 2 {
            return false;
        }
    }
    true
}

fn assemble_atoms(e: &[Vec<i64>], main: &[usize], pointer: &[Option<usize>]) -> Vec<Atom> {
    let n = e.len();
    let mut row_of = vec![0; n];
    let mut next = vec![None; n];
    let mut has_pred = vec![false; n];
    for (i, &v) in main.iter().enumerate() {
        row_of[v] = i;
        next[v] = pointer[i];
        if let Some(p) = pointer[i] {
            has_pred[p] = true;
        }
    }
    let mut seen = vec![false; n];
    let mut atoms = Vec::new();
    for start in 0..n {
        if seen[start] || has_pred[start] {
            continue;
        }
        let mut vars = Vec::new();
        let mut cur = Some(start);
        while let Some(v) = cur {
            seen[v] = true;
            vars.push(v);
            cur = next[v];
        }
        let monomials: Vec<usize> = vars.iter().map(|&v| row_of[v]).collect();
        let exponents: Vec<u32> = vars.iter().map(|&v| e[row_of[v]][v] as u32).collect();
        if vars.len() == 1 {
            atoms.push(Atom::Fermat { var: vars[0], monomial: monomials[0], exponent: exponents[0] });
        } else {
            atoms.push(Atom::Chain { vars, monomials, exponents });
        }
    }
    // what is left are cycles; start each at its lowest variable
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut vars = Vec::new();
        let mut v = start;
        while !seen[v] {
            seen[v] = true;
            vars.push(v);
            v = next[v].expect("cycle");
        }
        let monomials: Vec<usize> = vars.iter().map(|&v| row_of[v]).collect();
        let exponents: Vec<u32> = vars.iter().map(|&v| e[row_of[v]][v] as u32).collect();
        atoms.push(Atom::Loop { vars, monomials, exponents });
    }
    atoms.sort_by_key(|a| a.vars().into_iter().min());
    atoms
}

/// Rebuilds the exponent matrix from an atom list.
pub fn reassemble(atoms: &[Atom], n: usize) -> Vec<Vec<i64>> {
    let mut e = vec![vec![0i64; n]; n];
    for atom in atoms {
        for (row, v, a, p) in atom.rows() {
            e[row][v] = a as i64;
            if let Some(p) = p {
                e[row][p] = 1;
            }
        }
    }
    e
}

impl InvertiblePolynomial {
    /// Builds a polynomial from its exponent matrix (row `i` = monomial `i`).
    pub fn from_exponents(var_names: Vec<String>, exponents: Vec<Vec<i64>>) -> Result<Self> {
        let n = var_names.len();
        if exponents.len() != n {
            return Err(Error::NonSquare { monomials: exponents.len(), variables: n });
        }
        if let Some(row) = exponents.iter().find(|r| r.len() != n) {
            return Err(Error::DimensionMismatch { expected: n, got: row.len() });
        }
        if n > MAX_VARS {
            return Err(Error::TooManyVariables(n));
        }
        if n == 0 {
            return Err(Error::DegenerateShape("no variables".into()));
        }
        for j in 0..n {
            if exponents.iter().all(|row| row[j] == 0) {
                return Err(Error::DegenerateShape(format!(
                    "variable {} appears in no monomial",
                    var_names[j]
                )));
            }
        }
        let inverse = linalg::inverse(&exponents).ok_or(Error::SingularExponentMatrix)?;
        let (weights, degree) = weights_from_inverse(&inverse, |i| var_names[i].clone())?;
        let atoms = classify_atoms(&exponents)?;
        let det = linalg::det(&exponents);
        Ok(Self { var_names, exponents, inverse, det, weights, degree, atoms })
    }

    /// Parses `mono ('+' mono)*` with `mono := factor ('*' factor)*` and
    /// `factor := ident ('^' uint)?`. Variables are ordered by first appearance.
    pub fn parse(text: &str) -> Result<Self> {
        let monomials = parse_monomials(text)?;
        let mut names: Vec<String> = Vec::new();
        for mono in &monomials {
            for (name, _) in mono {
                if !names.contains(name) {
                    names.push(name.clone());
                }
            }
        }
        if monomials.len() != names.len() {
            return Err(Error::NonSquare { monomials: monomials.len(), variables: names.len() });
        }
        let exponents = monomials
            .iter()
            .map(|mono| {
                let mut row = vec![0i64; names.len()];
                for (name, e) in mono {
                    let j = names.iter().position(|n| n == name).unwrap();
                    row[j] += *e as i64;
                }
                row
            })
            .collect();
        Self::from_exponents(names, exponents)
    }

    pub fn num_vars(&self) -> usize {
        self.var_names.len()
    }
    pub fn var_names(&self) -> &[String] {
        &self.var_names
    }
    pub fn exponents(&self) -> &[Vec<i64>] {
        &self.exponents
    }
    /// `E^{-1}`; column `j` is the generator `rho_j` of `Aut_P`, row `i` the generator of `Aut_{P^v}`.
    pub fn inverse(&self) -> &[Vec<Q>] {
        &self.inverse
    }
    pub fn det(&self) -> i64 {
        self.det
    }
    pub fn weights(&self) -> &[i64] {
        &self.weights
    }
    pub fn degree(&self) -> i64 {
        self.degree
    }
    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    /// `q_i = w_i / d`.
    pub fn charges(&self) -> Vec<Q> {
        self.weights.iter().map(|&w| Q::new(w, self.degree)).collect()
    }

    pub fn is_calabi_yau(&self) -> bool {
        self.weights.iter().sum::<i64>() == self.degree
    }

    pub fn is_fermat(&self) -> bool {
        self.atoms.iter().all(|a| matches!(a, Atom::Fermat { .. }))
    }

    /// Berglund-Hubsch transpose: exponent matrix `E^T`, same variable names.
    pub fn transpose(&self) -> Self {
        Self::from_exponents(self.var_names.clone(), linalg::transpose(&self.exponents))
            .expect("transpose of a valid invertible polynomial is valid")
    }

    /// True when `g` fixes every monomial.
    pub fn fixes(&self, g: &DiagonalSymmetry) -> bool {
        g.len() == self.num_vars()
            && self.exponents.iter().all(|row| {
                let s: Q = row.iter().zip(g.entries()).map(|(&m, a)| *a * m).sum();
                s.is_integer()
            })
    }

    /// Splits `W = x_0^k + f(x_1..x_n)`.
    pub fn split_cyclic(&self) -> Result<(u32, Self)> {
        let n = self.num_vars();
        if n < 2 {
            return Err(Error::NotCyclicSplit("need at least two variables".into()));
        }
        let rows: Vec<usize> = (0..n).filter(|&i| self.exponents[i][0] > 0).collect();
        let [row] = rows.as_slice() else {
            return Err(Error::NotCyclicSplit(format!(
                "{} occurs in {} monomials",
                self.var_names[0],
                rows.len()
            )));
        };
        if self.exponents[*row][1..].iter().any(|&m| m != 0) {
            return Err(Error::NotCyclicSplit(format!(
                "{} is not a pure power",
                self.var_names[0]
            )));
        }
        let k = self.exponents[*row][0] as u32;
        let f_rows: Vec<Vec<i64>> = (0..n)
            .filter(|i| i != row)
            .map(|i| self.exponents[i][1..].to_vec())
            .collect();
        let f = Self::from_exponents(self.var_names[1..].to_vec(), f_rows)?;
        Ok((k, f))
    }

    /// Restriction to the variables fixed by `h`.
    pub fn restrict(&self, h: &DiagonalSymmetry) -> Result<RestrictedPolynomial<'_>> {
        let fixed: Vec<usize> = (0..self.num_vars()).filter(|&i| h.entries()[i].is_zero()).collect();
        self.restrict_to(&fixed)
    }

    pub fn restrict_to(&self, fixed_vars: &[usize]) -> Result<RestrictedPolynomial<'_>> {
        let n = self.num_vars();
        let inside = |j: usize| fixed_vars.contains(&j);
        let rows: Vec<usize> = (0..n)
            .filter(|&i| (0..n).all(|j| self.exponents[i][j] == 0 || inside(j)))
            .collect();
        if rows.len() != fixed_vars.len() {
            return Err(Error::DegenerateRestriction(format!(
                "{} monomials supported on {} fixed variables",
                rows.len(),
                fixed_vars.len()
            )));
        }
        let sub: Vec<Vec<i64>> = rows
            .iter()
            .map(|&i| fixed_vars.iter().map(|&j| self.exponents[i][j]).collect())
            .collect();
        if !sub.is_empty() {
            if linalg::det(&sub) == 0 {
                return Err(Error::DegenerateRestriction("restricted exponent matrix is singular".into()));
            }
            classify_atoms(&sub).map_err(|e| Error::DegenerateRestriction(e.to_string()))?;
        }
        Ok(RestrictedPolynomial {
            parent: self,
            fixed_vars: fixed_vars.to_vec(),
            rows,
            sub_exponents: sub,
        })
    }

    /// Text form using this polynomial's variable names.
    pub fn to_text(&self) -> String {
        self.exponents
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(_, &m)| m > 0)
                    .map(|(j, &m)| {
                        if m == 1 {
                            self.var_names[j].clone()
                        } else {
                            format!("{}^{}", self.var_names[j], m)
                        }
                    })
                    .collect::<Vec<_>>()
                    .join("*")
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

impl fmt::Display for InvertiblePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// The restriction `P_h` of a polynomial to a set of fixed variables.
/// Weights and degree are those of the parent.
#[derive(Debug, Clone)]
pub struct RestrictedPolynomial<'a> {
    pub parent: &'a InvertiblePolynomial,
    pub fixed_vars: Vec<usize>,
    pub rows: Vec<usize>,
    pub sub_exponents: Vec<Vec<i64>>,
}

impl RestrictedPolynomial<'_> {
    pub fn is_empty(&self) -> bool {
        self.fixed_vars.is_empty()
    }

    /// `prod_{i in I} (d - w_i) / w_i`.
    pub fn milnor_number(&self) -> u64 {
        let d = self.parent.degree();
        let mut num = Q::one();
        for &i in &self.fixed_vars {
            let w = self.parent.weights()[i];
            num *= Q::new(d - w, w);
        }
        assert!(num.is_integer(), "Milnor number must be integral");
        num.to_integer() as u64
    }

    /// True when every fixed variable belongs to a Fermat atom of the parent.
    pub fn is_fermat_supported(&self) -> bool {
        self.fixed_vars.iter().all(|&v| {
            self.parent
                .atoms()
                .iter()
                .any(|a| matches!(a, Atom::Fermat { var, .. } if *var == v))
        })
    }
}

type Monomial = Vec<(String, u32)>;

fn parse_monomials(text: &str) -> Result<Vec<Monomial>> {
    let mut p = Parser { src: text.as_bytes(), pos: 0 };
    let mut monomials = vec![p.monomial()?];
    loop {
        p.skip_ws();
        match p.peek() {
            None => break,
            Some(b'+') => {
                p.pos += 1;
                monomials.push(p.monomial()?);
            }
            Some(c) => return Err(p.error(format!("unexpected '{}'", c as char))),
        }
    }
    Ok(monomials)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(|c| c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn error(&self, msg: impl Into<String>) -> Error {
        Error::Syntax { pos: self.pos, msg: msg.into() }
    }

    fn monomial(&mut self) -> Result<Monomial> {
        let mut factors = Vec::new();
        // a leading unit coefficient is tolerated
        self.skip_ws();
        if self.peek().is_some_and(|c| c.is_ascii_digit()) {
            let start = self.pos;
            let v = self.uint()?;
            if v != 1 {
                self.pos = start;
                return Err(self.error("coefficients other than 1 are not allowed"));
            }
            self.skip_ws();
            if self.peek() != Some(b'*') {
                return Err(self.error("expected '*' after coefficient"));
            }
            self.pos += 1;
        }
        factors.push(self.factor()?);
        loop {
            self.skip_ws();
            if self.peek() == Some(b'*') {
                self.pos += 1;
                factors.push(self.factor()?);
            } else {
                break;
            }
        }
        Ok(factors)
    }

    fn factor(&mut self) -> Result<(String, u32)> {
        self.skip_ws();
        let start = self.pos;
        match self.peek() {
            Some(c) if c.is_ascii_alphabetic() => {}
            Some(c) if c.is_ascii_digit() => {
                return Err(self.error("coefficients other than 1 are not allowed"))
            }
            Some(c) => return Err(self.error(format!("expected variable, found '{}'", c as char))),
            None => return Err(self.error("expected variable, found end of input")),
        }
        while self.peek().is_some_and(|c| c.is_ascii_alphanumeric() || c == b'_') {
            self.pos += 1;
        }
        let name = String::from_utf8_lossy(&self.src[start..self.pos]).into_owned();
        self.skip_ws();
        let mut exp = 1;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let at = self.pos;
            exp = self.uint()?;
            if exp == 0 {
                self.pos = at;
                return Err(self.error("exponent must be positive"));
            }
        }
        Ok((name, exp))
    }

    fn uint(&mut self) -> Result<u32> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected unsigned integer"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| Error::Syntax { pos: start, msg: "integer out of range".into() })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> InvertiblePolynomial {
        InvertiblePolynomial::parse(s).unwrap()
    }

    #[test]
    fn elliptic_weights() {
        let w = p("x0^6 + x1^3 + x2^2");
        assert_eq!(w.weights(), &[1, 2, 3]);
        assert_eq!(w.degree(), 6);
        assert!(w.is_calabi_yau());
        assert_eq!(w.atoms().len(), 3);
    }

    #[test]
    fn single_fermat() {
        let x = p("x^2");
        assert_eq!(x.weights(), &[1]);
        assert_eq!(x.degree(), 2);
        assert!(matches!(x.atoms(), [Atom::Fermat { exponent: 2, .. }]));
    }

    #[test]
    fn two_variable_loop() {
        // E = [[2,1],[1,2]], q = (1/3, 1/3)
        let l = p("x^2*y + y^2*x");
        assert_eq!(l.weights(), &[1, 1]);
        assert_eq!(l.degree(), 3);
        assert!(matches!(l.atoms(), [Atom::Loop { exponents, .. }] if exponents == &[2, 2]));
        assert_eq!(l.transpose(), l);
    }

    #[test]
    fn chain_and_transpose() {
        // 3q_x + q_y = 1, 4q_y = 1
        let c = p("x^3*y + y^4");
        assert_eq!(c.weights(), &[1, 1]);
        assert_eq!(c.degree(), 4);
        assert!(matches!(c.atoms(), [Atom::Chain { exponents, .. }] if exponents == &[3, 4]));
        let t = c.transpose();
        assert_eq!(t.to_text(), "x^3 + x*y^4");
        assert_eq!(t.transpose(), c);
    }

    #[test]
    fn solve_weights_direct() {
        let e = vec![vec![4, 0, 0, 0], vec![0, 4, 0, 0], vec![0, 0, 4, 0], vec![0, 0, 0, 4]];
        assert_eq!(solve_weights(&e).unwrap(), (vec![1, 1, 1, 1], 4));
        assert_eq!(solve_weights(&[vec![7]]).unwrap(), (vec![1], 7));
        assert_eq!(solve_weights(&[vec![3, 1], vec![0, 4]]).unwrap(), (vec![1, 1], 4));
        assert_eq!(solve_weights(&[vec![1, 2], vec![2, 4]]), Err(Error::SingularExponentMatrix));
    }

    #[test]
    fn calabi_yau_flags() {
        assert!(p("x0^4+x1^4+x2^4+x3^4").is_calabi_yau());
        assert!(!p("x^5 + y^5").is_calabi_yau());
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(
            InvertiblePolynomial::parse("x^2 + y^3 + x*y"),
            Err(Error::NonSquare { monomials: 3, variables: 2 })
        ));
        assert!(matches!(InvertiblePolynomial::parse("x^2 +"), Err(Error::Syntax { pos: 5, .. })));
        assert!(matches!(InvertiblePolynomial::parse("3*x^2"), Err(Error::Syntax { pos: 0, .. })));
        assert!(matches!(InvertiblePolynomial::parse("x^0"), Err(Error::Syntax { .. })));
        assert!(InvertiblePolynomial::parse("1*x^2").is_ok());
        // x^2*y^2 is neither x^a nor x^a*y
        assert!(matches!(
            InvertiblePolynomial::parse("x^2*y^2 + y^3*x"),
            Err(Error::DegenerateShape(_)) | Err(Error::NonPositiveWeight { .. })
        ));
        // two chains feeding the same variable
        assert!(matches!(
            InvertiblePolynomial::parse("x^2*y + z^2*y + y^3"),
            Err(Error::DegenerateShape(_))
        ));
        assert!(matches!(
            InvertiblePolynomial::parse("x*y + y^2*x"),
            Err(Error::NonPositiveWeight { .. })
        ));
    }

    #[test]
    fn split() {
        let w = p("x0^6+x1^3+x2^2");
        let (k, f) = w.split_cyclic().unwrap();
        assert_eq!(k, 6);
        assert_eq!(f.to_text(), "x1^3 + x2^2");
        assert!(matches!(
            p("x0^3*x1 + x1^2").split_cyclic(),
            Err(Error::NotCyclicSplit(_))
        ));
    }

    #[test]
    fn restrictions() {
        let q = p("x0^4+x1^4+x2^4+x3^4");
        let h = DiagonalSymmetry::parse("[0,1/4,1/2,1/4]").unwrap();
        let r = q.restrict(&h).unwrap();
        assert_eq!(r.fixed_vars, vec![0]);
        assert_eq!(r.sub_exponents, vec![vec![4]]);

        let x = p("x^5");
        let r = x.restrict(&DiagonalSymmetry::identity(1)).unwrap();
        assert_eq!(r.fixed_vars, vec![0]);
        let r = x.restrict(&DiagonalSymmetry::parse("[2/5]").unwrap()).unwrap();
        assert!(r.is_empty());
        assert_eq!(r.milnor_number(), 1);
    }

    #[test]
    fn restriction_of_chain_tail() {
        // x^3*y + y^4: fixing only y keeps y^4
        let c = p("x^3*y + y^4");
        let r = c.restrict_to(&[1]).unwrap();
        assert_eq!(r.sub_exponents, vec![vec![4]]);
        // fixing only x keeps nothing: degenerate
        assert!(matches!(c.restrict_to(&[0]), Err(Error::DegenerateRestriction(_))));
    }

    #[test]
    fn atoms_reassemble() {
        for s in ["x^2*y + y^3*z + z^4", "a^3*b + b^3*c + c^2*a + d^5", "x^3 + y^2*x"] {
            let poly = p(s);
            assert_eq!(reassemble(poly.atoms(), poly.num_vars()), poly.exponents());
        }
    }
}
