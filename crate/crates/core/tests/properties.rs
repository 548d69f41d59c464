use corset_core::catalog;
use corset_core::{
    parse_word, superadditive_closure, CayleyBall, ConedBall, Element, GrowthFunction, Letter,
    MarkedGroup, Provenance, SubgroupSpec, Word,
};
use proptest::prelude::*;

fn groups() -> Vec<MarkedGroup> {
    vec![
        catalog::f2(),
        catalog::z2(),
        MarkedGroup::heisenberg(),
        catalog::z_star_heisenberg().0,
        catalog::default_mapping_torus(),
    ]
}

fn word_of(codes: &[usize], rank: usize) -> Word {
    codes.iter().map(|&c| Letter::from_code(c % (2 * rank))).collect()
}

fn eval(g: &MarkedGroup, codes: &[usize]) -> Element {
    g.eval(&word_of(codes, g.rank()))
}

fn codes() -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(0usize..64, 0..7)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn group_axioms(k in 0usize..5, x in codes(), y in codes(), z in codes()) {
        let g = &groups()[k];
        let (x, y, z) = (eval(g, &x), eval(g, &y), eval(g, &z));
        prop_assert_eq!(g.mul(&g.mul(&x, &y), &z), g.mul(&x, &g.mul(&y, &z)));
        prop_assert!(g.is_identity(&g.mul(&x, &g.inverse(&x))));
        prop_assert_eq!(g.mul(&g.identity(), &x), x.clone());
        prop_assert!(g.validate(&x).is_ok());
    }

    #[test]
    fn letters_multiply_like_words(k in 0usize..5, x in codes()) {
        let g = &groups()[k];
        let mut acc = g.identity();
        for l in word_of(&x, g.rank()).iter() {
            acc = g.mul_letter(&acc, *l);
        }
        prop_assert_eq!(acc, eval(g, &x));
    }

    #[test]
    fn word_length_bounded_by_word(k in 0usize..5, x in prop::collection::vec(0usize..64, 0..4)) {
        let g = &groups()[k];
        let ball = CayleyBall::build(g, 3, 1_000_000).unwrap();
        let e = eval(g, &x);
        let len = ball.word_length(&e).unwrap();
        prop_assert!(len <= x.len());
        if let Some(f) = g.formula_length(&e) {
            prop_assert_eq!(f, len);
        }
        let w = ball.shortlex_word(&e).unwrap();
        prop_assert_eq!(w.len(), len);
        prop_assert_eq!(g.eval(&w), e);
    }

    /// Stallings membership against enumeration of the subgroup ball: in the
    /// free group `⟨a², b⟩` and `⟨ab, b a⁻¹⟩` are undistorted with constant 1.
    #[test]
    fn stallings_matches_enumeration(x in prop::collection::vec(0usize..4, 0..5), which in 0usize..2) {
        let g = catalog::f2();
        let words: &[&str] = if which == 0 { &["a^2", "b"] } else { &["a b", "b A"] };
        let h = SubgroupSpec::from_words(&g, words).unwrap();
        let e = eval(&g, &x);
        let enumerated = h.ball(&g, 2 * x.len(), 1_000_000).unwrap().index_of(&e).is_some();
        prop_assert_eq!(h.oracle().unwrap().contains(&g, &e), enumerated);
    }

    #[test]
    fn lattice_membership_matches_solve(u in -9i64..9, v in -9i64..9) {
        let g = catalog::z2();
        let h = SubgroupSpec::from_words(&g, &["a^2", "a b^3"]).unwrap();
        let e = g.eval(&parse_word(&format!("a^{u} b^{v}"), g.names()).unwrap());
        // (u, v) = s(2,0) + t(1,3) has t = v/3, s = (u - t)/2
        let member = v % 3 == 0 && (u - v / 3) % 2 == 0;
        prop_assert_eq!(h.oracle().unwrap().contains(&g, &e), member);
    }

    #[test]
    fn heisenberg_centre_membership(x in codes()) {
        let g = MarkedGroup::heisenberg();
        let h = SubgroupSpec::from_words(&g, &["z"]).unwrap();
        let e = eval(&g, &x);
        let Element::Heisenberg(m) = &e else { unreachable!() };
        prop_assert_eq!(h.oracle().unwrap().contains(&g, &e), m[0] == 0 && m[1] == 0);
    }

    #[test]
    fn closure_is_least_superadditive_majorant(steps in prop::collection::vec(0u64..6, 1..11)) {
        let mut values = vec![0u64];
        for s in steps {
            values.push(values.last().unwrap() + s);
        }
        let f = GrowthFunction::new(values, Provenance::Synthetic);
        let c = superadditive_closure(&f);
        prop_assert!(c.is_superadditive());
        for n in 0..=f.n() {
            prop_assert!(c.get(n) >= f.get(n));
        }
        // least: every value is a sum of f over some composition
        for n in 1..=f.n() {
            let realised = (1..=n).any(|k| {
                c.get(n) == f.get(k) + if k == n { 0 } else { c.get(n - k) }
            });
            prop_assert!(realised);
        }
        prop_assert_eq!(superadditive_closure(&c).values, c.values.clone());
    }
}

#[test]
fn balls_are_nested() {
    for g in groups() {
        let small = CayleyBall::build(&g, 3, 1_000_000).unwrap();
        let big = CayleyBall::build(&g, 4, 1_000_000).unwrap();
        assert_eq!(&big.elements()[..small.len()], small.elements());
        for i in 0..small.len() {
            assert_eq!(small.length(i), big.length(i));
        }
        assert!(big.len() > small.len());
    }
}

#[test]
fn cosets_partition_the_ball() {
    for (g, ps) in [catalog::f2_rel_a(), catalog::z2_rel_ab(), catalog::z_star_heisenberg()] {
        let coned = ConedBall::build(&g, &ps, 3, 1_000_000).unwrap();
        let n = coned.group_vertex_count();
        for p in 0..ps.len() {
            let mut seen = vec![0; n];
            for (id, e) in coned.cosets().entries().iter().enumerate() {
                if e.peripheral != p {
                    continue;
                }
                for &m in coned.members(corset_core::CosetId(id)) {
                    seen[m as usize] += 1;
                    assert_eq!(coned.coset_of(m as usize, p).0, id);
                }
            }
            assert!(seen.iter().all(|&c| c == 1));
        }
    }
}
