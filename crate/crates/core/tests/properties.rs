use bhmirror::mirror::verify_krawitz;
use bhmirror::symmetry::{aut_group, dual_group, j_group, pairing, sl_group, DEFAULT_GROUP_CAP};
use bhmirror::{InvertiblePolynomial, SymmetryGroup, Q};
use num_traits::Zero;
use proptest::prelude::*;

const CAP: usize = DEFAULT_GROUP_CAP;

/// Monomials of one atom on variables `x{start}..`, returned with the number of variables used.
fn atom() -> impl Strategy<Value = (u8, Vec<u32>)> {
    prop_oneof![
        (2u32..7).prop_map(|a| (0u8, vec![a])),
        prop::collection::vec(2u32..4, 2..4).prop_map(|a| (1u8, a)),
        prop::collection::vec(2u32..4, 2..4).prop_map(|a| (2u8, a)),
    ]
}

fn render(atoms: &[(u8, Vec<u32>)]) -> String {
    let mut terms = Vec::new();
    let mut start = 0;
    for (kind, exps) in atoms {
        let n = exps.len();
        for (i, a) in exps.iter().enumerate() {
            let v = start + i;
            terms.push(match kind {
                0 => format!("x{v}^{a}"),
                1 if i + 1 < n => format!("x{v}^{a}*x{}", v + 1),
                1 => format!("x{v}^{a}"),
                _ => format!("x{v}^{a}*x{}", start + (i + 1) % n),
            });
        }
        start += n;
    }
    terms.join("+")
}

fn polynomial() -> impl Strategy<Value = InvertiblePolynomial> {
    prop::collection::vec(atom(), 1..3)
        .prop_filter("at most four variables", |a| a.iter().map(|(_, e)| e.len()).sum::<usize>() <= 4)
        .prop_map(|a| InvertiblePolynomial::parse(&render(&a)).unwrap())
}

fn same(a: &SymmetryGroup, b: &SymmetryGroup) -> bool {
    a.order() == b.order() && a.is_subgroup_of(b)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn weights_solve_exponent_system(p in polynomial()) {
        for row in p.exponents() {
            let deg: i64 = row.iter().zip(p.weights()).map(|(e, w)| e * w).sum();
            prop_assert_eq!(deg, p.degree());
        }
        prop_assert_eq!(aut_group(&p, CAP).unwrap().order() as i64, p.det().abs());
    }

    #[test]
    fn transpose_is_an_involution(p in polynomial()) {
        let t = p.transpose().transpose();
        prop_assert_eq!(t.exponents(), p.exponents());
        prop_assert_eq!(p.transpose().det().abs(), p.det().abs());
    }

    #[test]
    fn dual_group_is_an_involution(p in polynomial()) {
        let aut = aut_group(&p, CAP).unwrap();
        for h in [j_group(&p, CAP).unwrap(), sl_group(&p, CAP).unwrap(), aut.clone(), SymmetryGroup::trivial(p.num_vars())] {
            let d = dual_group(&p, &h, CAP).unwrap();
            prop_assert_eq!(h.order() * d.order(), aut.order());
            let dd = dual_group(&p.transpose(), &d, CAP).unwrap();
            prop_assert!(same(&dd, &h));
        }
        // (J_W)^v = SL_{W^T}
        let jd = dual_group(&p, &j_group(&p, CAP).unwrap(), CAP).unwrap();
        prop_assert!(same(&jd, &sl_group(&p.transpose(), CAP).unwrap()));
    }

    #[test]
    fn pairing_is_bilinear_and_perfect(p in polynomial(), i in any::<prop::sample::Index>(), j in any::<prop::sample::Index>(), l in any::<prop::sample::Index>()) {
        let aut = aut_group(&p, CAP).unwrap();
        let daut = aut_group(&p.transpose(), CAP).unwrap();
        let g1 = i.get(aut.elements());
        let g2 = j.get(aut.elements());
        let h = l.get(daut.elements());
        let lhs = pairing(&p, &g1.add(g2), h).unwrap();
        let rhs = bhmirror::linalg::frac(pairing(&p, g1, h).unwrap() + pairing(&p, g2, h).unwrap());
        prop_assert_eq!(lhs, rhs);
        if !g1.is_identity() {
            prop_assert!(daut.elements().iter().any(|h| !pairing(&p, g1, h).unwrap().is_zero()));
        }
    }

    #[test]
    fn ages_of_inverse_pairs(p in polynomial()) {
        let n = p.num_vars() as i64;
        for g in aut_group(&p, CAP).unwrap().elements() {
            let age: Q = g.age() + g.neg().age();
            prop_assert_eq!(age, Q::from_integer(n - g.fixed_vars().len() as i64));
        }
    }

    #[test]
    fn krawitz_duality_on_random_sums(p in polynomial()) {
        let r = verify_krawitz(&p, CAP).unwrap();
        prop_assert!(r.passed(), "{}: {:?}", p.to_text(), r.failures().next());
    }
}
