use corset_core::catalog;
use corset_core::qc::{default_r, isolation_diameter};
use corset_core::{
    delta_estimate, embedding_profile, parse_word, qc5_profile, saturation, CayleyBall, ConedBall,
    DeltaMethod, DeltaMode, Element, MarkedGroup, SubgroupSpec, Verdict, WordMetric,
};

fn elt(g: &MarkedGroup, w: &str) -> Element {
    g.eval(&parse_word(w, g.names()).unwrap())
}

fn same_a_coset(g: &MarkedGroup, x: &Element, y: &Element) -> bool {
    match g.mul(&g.inverse(x), y) {
        Element::Free(w) => w.iter().all(|l| l.generator() == 0),
        _ => unreachable!(),
    }
}

fn distance_to_a_coset(g: &MarkedGroup, x: &Element, y: &Element) -> usize {
    let base = g.mul(&g.inverse(x), y);
    let span = g.formula_length(&base).unwrap() as i64 + 1;
    (-span..=span)
        .map(|k| g.formula_length(&g.mul(&base, &elt(g, &format!("a^{k}")))).unwrap())
        .min()
        .unwrap()
}

#[test]
fn saturation_matches_brute_force() {
    let (g, ps) = catalog::f2_rel_a();
    let coned = ConedBall::build(&g, &ps, 9, 1_000_000).unwrap();
    let ball = coned.cayley();
    for w in ["b a^3 b", "a b^2 A b", "b^3", "a^2 B a^2"] {
        let target = elt(&g, w);
        let path = ball.geodesic(&g.identity(), &target).unwrap().vertices;
        for m in 1..=3 {
            let sat = saturation(&coned, &path, m).unwrap();
            // every coset within m of the path meets B(|target| + m)
            let mut brute: Vec<Element> = Vec::new();
            for c in &ball.elements()[ball.within(path.len() - 1 + m)] {
                if brute.iter().any(|d| same_a_coset(&g, d, c)) {
                    continue;
                }
                if path.iter().any(|y| distance_to_a_coset(&g, y, c) < m) {
                    brute.push(c.clone());
                }
            }
            assert_eq!(sat.cosets.len(), brute.len(), "{w}, M = {m}");
            for id in &sat.cosets {
                let rep = &coned.cosets().entry(*id).representative;
                assert!(brute.iter().any(|d| same_a_coset(&g, d, rep)));
            }
        }
    }
}

#[test]
fn peripheral_subgroups_are_quasiconvex() {
    for (g, ps) in [catalog::f2_rel_a(), catalog::z2_rel_ab()] {
        let coned = ConedBall::build(&g, &ps, 8, 1_000_000).unwrap();
        for p in ps.subgroups() {
            let r = qc5_profile(&coned, p, &WordMetric::standard(g.rank()), 6).unwrap();
            assert_eq!(r.kappa(), vec![0; 6]);
            assert_eq!(r.verdict, Verdict::Consistent);
        }
    }
}

#[test]
fn isolation_is_stable_in_radius() {
    let (g, ps) = catalog::f2_rel_a();
    let small = ConedBall::build(&g, &ps, 6, 1_000_000).unwrap();
    let big = ConedBall::build(&g, &ps, 8, 1_000_000).unwrap();
    for eps in 1..=2 {
        assert_eq!(isolation_diameter(&small, eps, 4).unwrap(), isolation_diameter(&big, eps, 6).unwrap());
        assert_eq!(default_r(&small, eps).unwrap(), default_r(&big, eps).unwrap());
    }
    assert_eq!(isolation_diameter(&big, 1, 6).unwrap(), None);
    assert_eq!(isolation_diameter(&big, 2, 6).unwrap(), Some(1));
}

#[test]
fn lifts_track_relative_geodesics() {
    for (g, ps) in [catalog::f2_rel_a(), catalog::z2_rel_a()] {
        let coned = ConedBall::build(&g, &ps, 7, 1_000_000).unwrap();
        let ball = coned.cayley();
        for i in ball.within(4) {
            let target = ball.element(i);
            let path = coned.relative_geodesic(&g.identity(), target).unwrap();
            let (vertices, word) = coned.lift(&path).unwrap();
            assert_eq!(vertices.last(), Some(target));
            assert_eq!(&g.eval(&word), target);
            assert!(path.len() <= ball.length(i));
            assert!(word.len() >= ball.length(i));
            assert!(!path.backtracks());
        }
    }
}

#[test]
fn trees_have_zero_delta() {
    let ball = CayleyBall::build(&catalog::f2(), 3, 1_000_000).unwrap();
    for method in [DeltaMethod::ThinTriangle, DeltaMethod::FourPoint] {
        let d = delta_estimate(&ball.graph(), method, DeltaMode::Exhaustive).unwrap();
        assert_eq!(d.value.0, 0);
        assert!(d.exhaustive);
    }
}

#[test]
fn sampled_delta_is_reproducible() {
    let ball = CayleyBall::build(&catalog::z2(), 5, 1_000_000).unwrap();
    let mode = DeltaMode::Sampled { size: 3000, seed: 4 };
    let a = delta_estimate(&ball.graph(), DeltaMethod::FourPoint, mode).unwrap();
    let b = delta_estimate(&ball.graph(), DeltaMethod::FourPoint, mode).unwrap();
    assert_eq!(a, b);
    assert!(!a.exhaustive);
    let full = delta_estimate(&ball.graph(), DeltaMethod::FourPoint, DeltaMode::Exhaustive).unwrap();
    assert!(a.value <= full.value);
}

#[test]
fn embedding_profiles() {
    let (g, ps) = catalog::f2_rel_a();
    let coned = ConedBall::build(&g, &ps, 7, 1_000_000).unwrap();
    let b = SubgroupSpec::from_words(&g, &["b"]).unwrap();
    let e = embedding_profile(&coned, &b, &[], 5, 5, 1_000_000).unwrap();
    assert!(e.pairs.iter().all(|&(dh, dg)| dh == dg));
    assert_eq!(e.c, 1);
    let h = SubgroupSpec::from_words(&g, &["a^2", "b"]).unwrap();
    let e = embedding_profile(&coned, &h, &[(0, g.identity())], 5, 5, 1_000_000).unwrap();
    assert!(e.c <= 2, "C = {}", e.c);
}
