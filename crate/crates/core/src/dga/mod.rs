//! Finite bigraded differential modules and algebras on explicit monomial bases.

use std::collections::BTreeMap;

pub mod checks;
pub mod complex;
pub mod product;
pub mod ring;

pub use checks::{
    check_associativity, check_bidegree, check_d_squared, check_leibniz, check_product_grading, check_support,
    check_unit, structural_suite, SignMode,
};
pub use complex::{BasisElement, MonomialComplex};
pub use product::ProductTable;
pub use ring::{cohomology_ring, ring_for_coeff, CohomologyRing, RingClass, RingSummary};

/// Integer combination of basis indices: sorted by index, no zero coefficients.
pub type Combination = Vec<(usize, i64)>;

/// Sparse accumulator that turns into a [`Combination`].
#[derive(Clone, Debug, Default)]
pub struct Accumulator(BTreeMap<usize, i64>);

impl Accumulator {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, index: usize, coef: i64) {
        if coef == 0 {
            return;
        }
        let e = self.0.entry(index).or_insert(0);
        *e += coef;
        if *e == 0 {
            self.0.remove(&index);
        }
    }

    pub fn add_all(&mut self, c: &[(usize, i64)], scale: i64) {
        for &(i, v) in c {
            self.add(i, v * scale);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn finish(self) -> Combination {
        self.0.into_iter().collect()
    }
}

/// `a − b` as a combination.
pub fn difference(a: &[(usize, i64)], b: &[(usize, i64)]) -> Combination {
    let mut acc = Accumulator::new();
    acc.add_all(a, 1);
    acc.add_all(b, -1);
    acc.finish()
}

pub fn scale(c: &[(usize, i64)], by: i64) -> Combination {
    if by == 0 {
        return Vec::new();
    }
    c.iter().map(|&(i, v)| (i, v * by)).collect()
}

/// Sign `(−1)^n`.
pub fn parity_sign(n: impl Into<i64>) -> i64 {
    if n.into().rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accumulator_cancels() {
        let mut acc = Accumulator::new();
        acc.add(3, 2);
        acc.add(1, 1);
        acc.add(3, -2);
        assert_eq!(acc.finish(), vec![(1, 1)]);
        assert_eq!(difference(&[(0, 1), (2, 3)], &[(2, 3)]), vec![(0, 1)]);
        assert_eq!(parity_sign(-3), -1);
        assert_eq!(scale(&[(1, 2)], 0), vec![]);
    }
}
