//! Named test groups used by the examples, benches and acceptance runs.

use crate::error::Result;
use crate::group::MarkedGroup;
use crate::subgroup::{PeripheralStructure, SubgroupSpec};
use crate::word::parse_word;

/// `F(a,b)`.
pub fn f2() -> MarkedGroup {
    MarkedGroup::free(2)
}

/// `ℤ² = ⟨a,b | [a,b]⟩`.
pub fn z2() -> MarkedGroup {
    MarkedGroup::free_abelian(2)
}

/// Peripheral structure given by generator words, one subgroup per entry.
pub fn peripherals(group: &MarkedGroup, subgroups: &[&[&str]]) -> Result<PeripheralStructure> {
    let specs = subgroups
        .iter()
        .map(|words| SubgroupSpec::from_words(group, words))
        .collect::<Result<Vec<_>>>()?;
    PeripheralStructure::new(specs)
}

/// `F(a,b)` relative to `⟨a⟩`.
pub fn f2_rel_a() -> (MarkedGroup, PeripheralStructure) {
    let g = f2();
    let ps = peripherals(&g, &[&["a"]]).expect("catalog peripheral");
    (g, ps)
}

/// `ℤ²` relative to `⟨a⟩`.
pub fn z2_rel_a() -> (MarkedGroup, PeripheralStructure) {
    let g = z2();
    let ps = peripherals(&g, &[&["a"]]).expect("catalog peripheral");
    (g, ps)
}

/// `ℤ²` relative to `{⟨a⟩, ⟨b⟩}`.
pub fn z2_rel_ab() -> (MarkedGroup, PeripheralStructure) {
    let g = z2();
    let ps = peripherals(&g, &[&["a"], &["b"]]).expect("catalog peripheral");
    (g, ps)
}

/// `ℤ ∗ H3(ℤ)` with generators `t` and `x, y, z`, relative to the Heisenberg factor.
pub fn z_star_heisenberg() -> (MarkedGroup, PeripheralStructure) {
    let z = MarkedGroup::free(1)
        .with_names(vec!["t".into()])
        .expect("catalog names");
    let g = MarkedGroup::free_product(vec![z, MarkedGroup::heisenberg()]).expect("catalog product");
    let ps = peripherals(&g, &[&["x", "y", "z"]]).expect("catalog peripheral");
    (g, ps)
}

/// `F(a,b) ⋊_φ ℤ` with `φ(a) = ab`, `φ(b) = a`.
pub fn default_mapping_torus() -> MarkedGroup {
    let names = ["a".to_string(), "b".to_string()];
    let phi = vec![
        parse_word("a b", &names).expect("catalog word"),
        parse_word("a", &names).expect("catalog word"),
    ];
    MarkedGroup::mapping_torus(phi, None).expect("φ is invertible")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_builds() {
        assert_eq!(f2_rel_a().1.len(), 1);
        assert_eq!(z2_rel_ab().1.len(), 2);
        let (g, ps) = z_star_heisenberg();
        assert_eq!(g.names(), ["t", "x", "y", "z"]);
        assert!(ps.get(0).oracle().is_some());
        assert_eq!(default_mapping_torus().rank(), 3);
    }
}
