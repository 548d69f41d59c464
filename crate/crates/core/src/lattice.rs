//! Integer lattices in Hermite normal form.
//!
//! Used for the normal form of finitely generated abelian groups
//! `ℤⁿ / ⟨relations⟩` and for exact membership in their subgroups.

/// A sublattice of `ℤⁿ` stored as an echelon basis with positive pivots and
/// entries above each pivot reduced into `[0, pivot)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lattice {
    dim: usize,
    rows: Vec<Vec<i64>>,
    pivots: Vec<usize>,
}

impl Lattice {
    pub fn new(dim: usize, generators: &[Vec<i64>]) -> Self {
        let mut rows: Vec<Vec<i64>> = generators
            .iter()
            .filter(|g| g.iter().any(|&x| x != 0))
            .cloned()
            .collect();
        for r in &rows {
            assert_eq!(r.len(), dim, "lattice generator has wrong dimension");
        }
        let mut pivots = Vec::new();
        let mut top = 0;
        for col in 0..dim {
            loop {
                let live: Vec<usize> = (top..rows.len()).filter(|&i| rows[i][col] != 0).collect();
                if live.len() <= 1 {
                    if let Some(&i) = live.first() {
                        rows.swap(top, i);
                        if rows[top][col] < 0 {
                            rows[top].iter_mut().for_each(|x| *x = -*x);
                        }
                        let pivot_row = rows[top].clone();
                        let p = pivot_row[col];
                        for above in rows.iter_mut().take(top) {
                            let q = above[col].div_euclid(p);
                            if q != 0 {
                                above.iter_mut().zip(&pivot_row).for_each(|(x, y)| *x -= q * y);
                            }
                        }
                        pivots.push(col);
                        top += 1;
                    }
                    break;
                }
                let &min = live.iter().min_by_key(|&&i| rows[i][col].abs()).unwrap();
                let min_row = rows[min].clone();
                for &i in &live {
                    if i != min {
                        let q = rows[i][col] / min_row[col];
                        rows[i].iter_mut().zip(&min_row).for_each(|(x, y)| *x -= q * y);
                    }
                }
            }
        }
        rows.truncate(top);
        Lattice { dim, rows, pivots }
    }

    pub fn zero(dim: usize) -> Self {
        Lattice::new(dim, &[])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    /// Echelon basis rows.
    pub fn basis(&self) -> &[Vec<i64>] {
        &self.rows
    }

    /// Canonical representative of `v + L`: each pivot coordinate lands in `[0, pivot)`.
    pub fn reduce(&self, v: &[i64]) -> Vec<i64> {
        let mut out = v.to_vec();
        for (row, &col) in self.rows.iter().zip(&self.pivots) {
            let q = out[col].div_euclid(row[col]);
            if q != 0 {
                out.iter_mut().zip(row).for_each(|(x, y)| *x -= q * y);
            }
        }
        out
    }

    pub fn contains(&self, v: &[i64]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }

    /// True when the lattice is all of `ℤⁿ`.
    pub fn is_full(&self) -> bool {
        self.rows.len() == self.dim && self.rows.iter().zip(&self.pivots).all(|(r, &c)| r[c] == 1)
    }

    /// The lattice spanned by this one and extra generators.
    pub fn extended(&self, extra: &[Vec<i64>]) -> Lattice {
        let mut gens = self.rows.clone();
        gens.extend(extra.iter().cloned());
        Lattice::new(self.dim, &gens)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn hnf_of_small_lattice() {
        let l = Lattice::new(2, &[vec![4, 6], vec![2, 2]]);
        assert_eq!(l.basis(), &[vec![2, 0], vec![0, 2]]);
        assert!(l.contains(&[4, 6]));
        assert!(!l.contains(&[1, 0]));
        assert_eq!(l.reduce(&[3, -1]), vec![1, 1]);
    }

    #[test]
    fn full_lattice() {
        assert!(Lattice::new(2, &[vec![2, 1], vec![1, 1]]).is_full());
        assert!(!Lattice::new(2, &[vec![2, 0], vec![0, 1]]).is_full());
        assert!(Lattice::zero(3).is_zero());
    }

    proptest! {
        #[test]
        fn reduce_is_constant_on_cosets(
            gens in prop::collection::vec(prop::collection::vec(-5i64..5, 3), 0..4),
            v in prop::collection::vec(-20i64..20, 3),
            coeffs in prop::collection::vec(-3i64..3, 4),
        ) {
            let l = Lattice::new(3, &gens);
            let mut shifted = v.clone();
            for (g, c) in gens.iter().zip(&coeffs) {
                for k in 0..3 { shifted[k] += c * g[k]; }
            }
            prop_assert_eq!(l.reduce(&v), l.reduce(&shifted));
            let r = l.reduce(&v);
            prop_assert_eq!(l.reduce(&r), r);
        }
    }
}
