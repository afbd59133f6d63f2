//! One line per acceptance criterion. Exits nonzero if any criterion fails.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use bhmirror::catalog::{builtin_cases, krawitz_catalog, setup_for, Case};
use bhmirror::geometry::{check_prime_divisibility, k3_analysis, lattice_invariants, sector_grid, verify_k2_corollary};
use bhmirror::milnor::{milnor_mismatches, oracle_mismatches, sector_algebra};
use bhmirror::mirror::{build_mirror_pair, verify_krawitz, verify_ms_lg, MirrorPair};
use bhmirror::statespace::{unprojected_state_space, Side, StateTable};
use bhmirror::symmetry::{aut_group, DEFAULT_GROUP_CAP};
use bhmirror::{DiagonalSymmetry, Error, InvertiblePolynomial, Q};
use bhmirror_cli::{cmd_table, Format, Options};
use proptest::strategy::{Strategy, ValueTree};
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};
use rayon::prelude::*;
use serde_json::Value;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome, Duration);

const CAP: usize = DEFAULT_GROUP_CAP;

fn fail<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn case(name: &str) -> Case {
    builtin_cases().into_iter().find(|c| c.name == name).expect("built-in case")
}

fn pair_for(c: &Case) -> Result<MirrorPair, Error> {
    build_mirror_pair(&setup_for(c, CAP)?, CAP)
}

fn r(n: i64, d: i64) -> Q {
    Q::new(n, d)
}

fn c1_elliptic_grid() -> Outcome {
    let opts = Options { format: Format::Json, weights: false, diamonds: false, cap: CAP };
    let out = cmd_table(&case("elliptic"), &opts).map_err(fail)?;
    let v: Value = serde_json::from_str(&out.text).map_err(fail)?;
    ensure(v["schema"] == "bhmirror/1", || "missing schema tag".into())?;
    let got: Vec<Vec<u64>> = v["rows"]
        .as_array()
        .unwrap()
        .iter()
        .map(|row| row["cells"].as_array().unwrap().iter().map(|c| c["total"].as_u64().unwrap()).collect())
        .collect();
    let want = vec![
        vec![2, 1, 0, 0, 0, 1],
        vec![0, 1, 0, 0, 0, 0],
        vec![0, 1, 0, 0, 1, 1],
        vec![0, 1, 0, 2, 0, 1],
        vec![0, 1, 1, 0, 0, 1],
        vec![0, 0, 0, 0, 0, 1],
    ];
    ensure(got == want, || format!("got {got:?}"))?;
    Ok("6x6 grid matches".into())
}

type Diamond = BTreeMap<(i64, i64), u64>;

fn d(cells: &[((i64, i64), u64)]) -> Diamond {
    cells.iter().copied().collect()
}

fn check_grid(label: &str, grid: &bhmirror::geometry::SectorGrid, want: &[Vec<Diamond>]) -> Result<(), String> {
    for (b, row) in want.iter().enumerate() {
        for (a, cell) in row.iter().enumerate() {
            let got = grid.geometric_diamond(b, a).map_err(fail)?;
            let got: Diamond = got.into_iter().filter(|(_, v)| *v > 0).collect();
            ensure(&got == cell, || format!("{label} cell (b={b}, a={a}): got {got:?}, want {cell:?}"))?;
        }
    }
    Ok(())
}

fn row0_weights(grid: &bhmirror::geometry::SectorGrid) -> BTreeMap<(u32, i64, i64), u64> {
    grid.cells[0][0]
        .weighted
        .iter()
        .map(|((w, p, q), v)| ((*w, p.to_integer(), q.to_integer()), *v))
        .collect()
}

fn c2_quartic_grids() -> Outcome {
    let c = case("quartic");
    let pair = pair_for(&c).map_err(fail)?;
    let src = sector_grid(&pair.source, &pair.source_table).map_err(fail)?;
    let tgt = sector_grid(&pair.target, &pair.target_table).map_err(fail)?;

    let curve = d(&[((1, 0), 3), ((0, 1), 3)]);
    let want_src = vec![
        vec![d(&[((2, 0), 1), ((1, 1), 19), ((0, 2), 1)]), d(&[((0, 0), 1)]), d(&[((1, 1), 1)]), d(&[((2, 2), 1)])],
        vec![curve.clone(), d(&[((0, 0), 1)]), d(&[((1, 1), 1)]), d(&[])],
        vec![curve.clone(), d(&[((0, 0), 1)]), d(&[]), d(&[((1, 1), 1)])],
        vec![curve, d(&[]), d(&[((0, 0), 1)]), d(&[((1, 1), 1)])],
    ];
    check_grid("source", &src, &want_src)?;
    let w = row0_weights(&src);
    let want_w: BTreeMap<_, _> =
        [((1, 2, 0), 1), ((1, 1, 1), 6), ((2, 1, 1), 7), ((3, 1, 1), 6), ((3, 0, 2), 1)].into_iter().collect();
    ensure(w == want_w, || format!("source untwisted weights {w:?}"))?;
    ensure(src.row_total(1) == 8, || format!("H_s total {}", src.row_total(1)))?;

    let lines = d(&[((0, 0), 3), ((1, 1), 3)]);
    let want_tgt = vec![
        vec![
            d(&[((2, 0), 1), ((1, 1), 1), ((0, 2), 1)]),
            d(&[((0, 0), 1), ((1, 1), 6)]),
            d(&[((1, 1), 7)]),
            d(&[((2, 2), 1), ((1, 1), 6)]),
        ],
        vec![lines.clone(), d(&[((0, 0), 1), ((1, 1), 6)]), d(&[((1, 1), 7)]), d(&[])],
        vec![lines.clone(), d(&[((0, 0), 1), ((1, 1), 6)]), d(&[]), d(&[((0, 0), 6), ((1, 1), 1)])],
        vec![lines, d(&[]), d(&[((0, 0), 7)]), d(&[((0, 0), 6), ((1, 1), 1)])],
    ];
    check_grid("mirror", &tgt, &want_tgt)?;
    let w = row0_weights(&tgt);
    let want_w: BTreeMap<_, _> = [((1, 2, 0), 1), ((2, 1, 1), 1), ((3, 0, 2), 1)].into_iter().collect();
    ensure(w == want_w, || format!("mirror untwisted weights {w:?}"))?;

    let k3 = k3_analysis(&pair.source, CAP).map_err(fail)?;
    let m = &k3.mirror_invariants;
    ensure(m.n1 == 4 && m.g1 == 0 && m.f1 == 12, || format!("mirror fixed locus {m:?}"))?;
    Ok("both 4x4 grids cell-for-cell, weights 6/7/6, H_s = 8, mirror fixes 4 lines and 12 points".into())
}

fn c3_xk() -> Outcome {
    for k in 2..=13i64 {
        let p = InvertiblePolynomial::parse(&format!("x^{k}")).map_err(fail)?;
        let u = unprojected_state_space(&p, CAP).map_err(fail)?;
        let mut got: BTreeMap<(Q, Q, Q), u64> = BTreeMap::new();
        for ((h, _, pp, qq), v) in &u.entries {
            *got.entry((h.entries()[0], *pp, *qq)).or_insert(0) += v;
        }
        let mut want = BTreeMap::new();
        for i in 1..k {
            want.insert((Q::from_integer(0), Q::from_integer(1) - r(i, k), r(i, k)), 1);
            want.insert((r(i, k), r(i, k), r(i, k)), 1);
        }
        ensure(got == want, || format!("x^{k}: got {got:?}"))?;
    }
    Ok("k = 2..13".into())
}

fn c4_krawitz() -> Outcome {
    let polys: Vec<InvertiblePolynomial> =
        krawitz_catalog().iter().map(|s| InvertiblePolynomial::parse(s)).collect::<Result<_, _>>().map_err(fail)?;
    ensure(polys.len() >= 30, || format!("only {} polynomials", polys.len()))?;
    ensure(polys.iter().all(|p| p.num_vars() <= 5), || "more than five variables".into())?;
    for kind in ["fermat", "chain", "loop"] {
        ensure(polys.iter().any(|p| p.atoms().iter().any(|a| a.kind() == kind)), || format!("no {kind} atom"))?;
    }
    let mixed = polys
        .iter()
        .filter(|p| {
            let kinds: std::collections::BTreeSet<_> = p.atoms().iter().map(|a| a.kind()).collect();
            kinds.len() > 1
        })
        .count();
    ensure(mixed > 0, || "no mixed sums".into())?;
    let results: Vec<_> = polys.par_iter().map(|p| verify_krawitz(p, CAP).map(|r| (p.to_text(), r))).collect();
    let mut cells = 0;
    for res in results {
        let (p, rep) = res.map_err(fail)?;
        ensure(rep.passed(), || format!("{p}: {:?}", rep.failures().next()))?;
        cells += rep.records.len();
    }
    Ok(format!("{} polynomials ({mixed} mixed), {cells} cells", polys.len()))
}

fn c5_ms_lg() -> Outcome {
    let cases = builtin_cases();
    let results: Vec<_> = cases
        .par_iter()
        .map(|c| -> Result<_, Error> {
            let setup = setup_for(c, CAP)?;
            if !setup.j.in_sl() {
                return Ok(None);
            }
            let pair = build_mirror_pair(&setup, CAP)?;
            Ok(Some((c.name.clone(), setup.k, setup.w.is_calabi_yau(), verify_ms_lg(&pair))))
        })
        .collect();
    let (mut checked, mut empties) = (0, 0);
    let mut ks = std::collections::BTreeSet::new();
    for res in results {
        let Some((name, k, cy, rep)) = res.map_err(fail)? else { continue };
        ensure(rep.passed(), || format!("{name}: {:?}", rep.failures().next()))?;
        for part in ["MS_LG(1)", "MS_LG(2)", "MS_LG(3)"] {
            ensure(rep.records.iter().any(|r| r.statement.starts_with(part)), || format!("{name}: {part} not run"))?;
        }
        for b in 1..k {
            for t in 1..k {
                if (b * t) % k == 0 {
                    continue;
                }
                let stmt = format!("MS_LG(3) b={b} t={t}");
                let recs: Vec<_> = rep.records.iter().filter(|r| r.statement == stmt).collect();
                ensure(!recs.is_empty() && recs.iter().all(|r| r.lhs == 0 && r.rhs == 0), || {
                    format!("{name}: {stmt} should vanish on both sides")
                })?;
                empties += 1;
            }
        }
        if cy {
            ks.insert(k);
        }
        checked += 1;
    }
    for k in [2, 3, 4, 6] {
        ensure(ks.contains(&k), || format!("no Calabi-Yau case with k = {k}"))?;
    }
    Ok(format!("{checked} admissible cases, {empties} forced-vanishing part 3 slices empty on both sides"))
}

fn moving_ttb(table: &StateTable, b: u32, t: u32) -> u64 {
    table
        .entries
        .iter()
        .filter(|(l, _)| l.side == Side::Moving && l.x == b && l.y == t && l.z == t)
        .map(|(_, v)| *v)
        .sum()
}

fn c6_vanishing() -> Outcome {
    let tables: Vec<StateTable> = builtin_cases()
        .par_iter()
        .map(|c| -> Result<Vec<StateTable>, Error> {
            let pair = pair_for(c)?;
            Ok(vec![pair.source_table, pair.target_table])
        })
        .collect::<Result<Vec<_>, _>>()
        .map_err(fail)?
        .into_iter()
        .flatten()
        .collect();
    let n = tables.len();
    let mut runner = TestRunner::new_with_rng(
        Config { cases: 4000, failure_persistence: None, ..Config::default() },
        TestRng::deterministic_rng(RngAlgorithm::ChaCha),
    );
    let strategy = (0..n, 0u32..64, 1u32..64);
    let (mut scanned, mut allowed_nonzero) = (0u64, 0u64);
    for _ in 0..runner.config().cases {
        let (i, b, t) = strategy.new_tree(&mut runner).map_err(fail)?.current();
        let table = &tables[i];
        let k = table.k;
        let (b, t) = (b % k, 1 + (t - 1) % (k - 1).max(1));
        let dim = moving_ttb(table, b, t);
        if (b * t) % k != 0 {
            ensure(dim == 0, || format!("table {i}: H^m_(b={b},t={t},t) has dimension {dim}, k = {k}"))?;
            scanned += 1;
        } else if dim > 0 {
            allowed_nonzero += 1;
        }
    }
    ensure(scanned > 0 && allowed_nonzero > 0, || "scan was vacuous".into())?;
    Ok(format!("{scanned} random (table, b, t) draws with k not dividing bt over {n} tables, all zero"))
}

fn fermat_targets() -> Result<Vec<(String, InvertiblePolynomial, Vec<DiagonalSymmetry>)>, Error> {
    let mut out = Vec::new();
    for c in builtin_cases() {
        let setup = setup_for(&c, CAP)?;
        if setup.w.is_fermat() {
            out.push((c.name.clone(), setup.w.clone(), setup.g_group.elements().to_vec()));
        }
    }
    for s in krawitz_catalog() {
        let p = InvertiblePolynomial::parse(s)?;
        if p.is_fermat() {
            let aut = aut_group(&p, CAP)?;
            out.push((p.to_text(), p, aut.elements().to_vec()));
        }
    }
    Ok(out)
}

fn c7_oracle() -> Outcome {
    let targets = fermat_targets().map_err(fail)?;
    let results: Vec<_> = targets.par_iter().map(|(n, p, s)| oracle_mismatches(p, s).map(|m| (n, s.len(), m))).collect();
    let mut sectors = 0;
    for res in results {
        let (name, len, bad) = res.map_err(fail)?;
        ensure(bad.is_empty(), || format!("{name}: {}", bad[0]))?;
        sectors += len;
    }
    Ok(format!("{} Fermat entries, {sectors} sectors", targets.len()))
}

fn c8_milnor() -> Outcome {
    let elliptic = InvertiblePolynomial::parse("x0^6+x1^3+x2^2").map_err(fail)?;
    let quartic = InvertiblePolynomial::parse("x0^4+x1^4+x2^4+x3^4").map_err(fail)?;
    for (p, want) in [(&elliptic, 10), (&quartic, 81)] {
        let id = DiagonalSymmetry::identity(p.num_vars());
        let got = sector_algebra(p, &id, None).map_err(fail)?.total_dim();
        ensure(got == want, || format!("{}: untwisted sector {got}", p.to_text()))?;
    }
    let mut targets: Vec<(String, InvertiblePolynomial, Vec<DiagonalSymmetry>)> = Vec::new();
    for c in builtin_cases() {
        let setup = setup_for(&c, CAP).map_err(fail)?;
        targets.push((c.name.clone(), setup.w.clone(), setup.g_group.elements().to_vec()));
    }
    for s in krawitz_catalog() {
        let p = InvertiblePolynomial::parse(s).map_err(fail)?;
        let aut = aut_group(&p, CAP).map_err(fail)?;
        targets.push((p.to_text(), p, aut.elements().to_vec()));
    }
    let results: Vec<_> = targets.par_iter().map(|(n, p, s)| milnor_mismatches(p, s).map(|m| (n, s.len(), m))).collect();
    let mut sectors = 0;
    for res in results {
        let (name, len, bad) = res.map_err(fail)?;
        ensure(bad.is_empty(), || format!("{name}: {}", bad[0]))?;
        sectors += len;
    }
    Ok(format!("elliptic 10, quartic 81, {} entries, {sectors} sectors", targets.len()))
}

fn c9_k3() -> Outcome {
    let mut seen = std::collections::BTreeSet::new();
    let mut n = 0;
    for c in builtin_cases() {
        let setup = setup_for(&c, CAP).map_err(fail)?;
        if !(setup.w.is_calabi_yau() && setup.w.num_vars() == 4 && [3, 4, 5, 7, 13].contains(&setup.k)) {
            continue;
        }
        let rep = k3_analysis(&setup, CAP).map_err(fail)?;
        let get = |name: &str| rep.checks.iter().find(|c| c.name == name);
        let mut required = vec!["N_1 = g_1^v + 1", "N_1^v = g_1 + 1"];
        if setup.k == 4 {
            required.push("2a + b + 2a^v + b^v = 24");
        } else {
            required.extend(["(f_1 + f_1^v + 4)(p - 1) = 24(p - 2)", "r^v = 20 - r", "a^v = a (lattice)"]);
            let (l, lv) = (rep.lattice.unwrap(), rep.mirror_lattice.unwrap());
            ensure(lv == (20 - l.0, l.1), || format!("{}: lattice {l:?} vs {lv:?}", c.name))?;
        }
        for name in required {
            let chk = get(name).ok_or_else(|| format!("{}: {name} missing", c.name))?;
            ensure(chk.pass, || format!("{}: {name}: {} vs {}", c.name, chk.lhs, chk.rhs))?;
        }
        ensure(rep.passed(), || format!("{}: {:?}", c.name, rep.checks.iter().find(|c| !c.pass)))?;
        seen.insert(setup.k);
        n += 1;
    }
    for k in [3, 4, 5, 7, 13] {
        ensure(seen.contains(&k), || format!("no K3 pair with k = {k}"))?;
    }
    ensure(!check_prime_divisibility(11), || "p = 11 passes the gate".into())?;
    let gated: Vec<u32> = (2..=13).filter(|&p| check_prime_divisibility(p)).collect();
    ensure(gated == vec![2, 3, 4, 5, 7, 9, 13], || format!("gate admits {gated:?}"))?;
    ensure(lattice_invariants(11, 0, 1).is_err(), || "lattice invariants accepted p = 11".into())?;
    let k11 = Case { name: "k11".into(), polynomial: "x0^11+x1^11".into(), group: "trivial".into() };
    let s11 = setup_for(&k11, CAP).map_err(fail)?;
    ensure(k3_analysis(&s11, CAP).is_err(), || "k = 11 reached the K3 analysis".into())?;
    Ok(format!("{n} K3 pairs over k in {{3,4,5,7,13}}, p = 11 gated out"))
}

fn c10_k2() -> Outcome {
    let mut n = 0;
    let mut cells = 0;
    for c in builtin_cases() {
        let setup = setup_for(&c, CAP).map_err(fail)?;
        if setup.k != 2 || !setup.w.is_calabi_yau() {
            continue;
        }
        let pair = build_mirror_pair(&setup, CAP).map_err(fail)?;
        let rep = verify_k2_corollary(&pair).map_err(fail)?;
        ensure(rep.passed(), || format!("{}: {:?}", c.name, rep.failures().next()))?;
        for stmt in ["k=2 H_id^+", "k=2 H_id^-", "k=2 H_s(1/2)"] {
            ensure(rep.records.iter().any(|r| r.statement == stmt), || format!("{}: {stmt} not run", c.name))?;
        }
        n += 1;
        cells += rep.records.len();
    }
    ensure(n >= 3, || format!("only {n} k = 2 entries"))?;
    Ok(format!("{n} double covers, {cells} cells"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("elliptic curve grid", c1_elliptic_grid, Duration::from_secs(1)),
        ("Fermat quartic grids", c2_quartic_grids, Duration::from_secs(5)),
        ("x^k state spaces", c3_xk, Duration::from_secs(60)),
        ("Krawitz duality suite", c4_krawitz, Duration::from_secs(60)),
        ("LG mirror theorem parts 1-3", c5_ms_lg, Duration::from_secs(60)),
        ("vanishing of H^m_(b,t,t)", c6_vanishing, Duration::from_secs(60)),
        ("series engine vs monomial oracle", c7_oracle, Duration::from_secs(60)),
        ("Milnor dimensions", c8_milnor, Duration::from_secs(60)),
        ("K3 corollaries", c9_k3, Duration::from_secs(60)),
        ("k = 2 corollary", c10_k2, Duration::from_secs(60)),
    ];
    let mut failed = 0;
    for (i, (name, f, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let mut res = f();
        let took = start.elapsed();
        if res.is_ok() && took > *limit {
            res = Err(format!("took {took:.2?}, limit {limit:?}"));
        }
        match res {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} [{took:.2?}]", i + 1),
            Err(e) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {e} [{took:.2?}]", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
