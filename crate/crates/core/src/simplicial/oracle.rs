//! Reduced simplicial cohomology and the full-subcomplex splitting used as ground truth.

use std::collections::{BTreeMap, HashMap};

use super::{SimplicialComplex, VertexSubset};
use crate::error::{Error, Result};
use crate::linalg::{Coeff, CohomologyResult, FiniteCochainComplex, IntegerMatrix};

/// H̃*(|K|) from the augmented simplicial cochain complex; {∅} has k in degree −1.
pub fn reduced_cohomology(k: &SimplicialComplex, coeff: Coeff) -> Result<CohomologyResult> {
    let top = k.simplices().last().map_or(0, |s| s.count_ones() as usize);
    // by_size[c] = simplices with c vertices, i.e. cochain degree c − 1
    let mut by_size: Vec<Vec<u64>> = vec![Vec::new(); top + 1];
    for &s in k.simplices() {
        by_size[s.count_ones() as usize].push(s);
    }
    let position: Vec<HashMap<u64, usize>> = by_size
        .iter()
        .map(|v| v.iter().enumerate().map(|(i, &s)| (s, i)).collect())
        .collect();

    let mut differentials = Vec::with_capacity(top);
    for c in 0..top {
        let mut d = IntegerMatrix::zeros(by_size[c + 1].len(), by_size[c].len());
        for (row, &tau) in by_size[c + 1].iter().enumerate() {
            let mut sign = 1;
            for b in 0..64 {
                if tau >> b & 1 == 0 {
                    continue;
                }
                let sigma = tau & !(1 << b);
                d.add_to(row, position[c][&sigma], sign);
                sign = -sign;
            }
        }
        differentials.push(d);
    }
    let ranks = by_size.iter().map(Vec::len).collect();
    FiniteCochainComplex::new(-1, ranks, differentials)?.cohomology(coeff)
}

/// How each full-subcomplex summand H̃*(ΣK_J) is shifted or tensored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ShiftMode {
    /// ⊕_J H̃*(ΣK_J): the real moment-angle complex.
    Real,
    /// X_i = S^{n_i}: the J-summand is tensored with one class of degree Σ_{i∈J} n_i.
    Spheres(Vec<u32>),
    /// H̃*(X_i) free with generators in the listed degrees; summand tensored with H^J.
    Tensor(Vec<Vec<i32>>),
}

impl ShiftMode {
    /// Poincaré series of H^J as degree → rank.
    fn coefficient_series(&self, j: VertexSubset) -> Result<BTreeMap<i32, usize>> {
        let mut series = BTreeMap::from([(0, 1usize)]);
        let factors: Vec<Vec<i32>> = match self {
            ShiftMode::Real => return Ok(series),
            ShiftMode::Spheres(n) => j
                .vertices()
                .iter()
                .map(|&v| n.get(v - 1).map(|&d| vec![d as i32]))
                .collect::<Option<_>>()
                .ok_or_else(|| Error::input("fewer sphere dimensions than vertices"))?,
            ShiftMode::Tensor(h) => j
                .vertices()
                .iter()
                .map(|&v| h.get(v - 1).cloned())
                .collect::<Option<_>>()
                .ok_or_else(|| Error::input("fewer coefficient modules than vertices"))?,
        };
        for degrees in factors {
            let mut next = BTreeMap::new();
            for (&a, &ca) in &series {
                for &b in &degrees {
                    *next.entry(a + b).or_insert(0) += ca;
                }
            }
            series = next;
        }
        Ok(series)
    }
}

/// ⊕_{J⊆[m]} H̃*(ΣK_J) ⊗ H^J, with H^J determined by the mode.
pub fn splitting_oracle(k: &SimplicialComplex, coeff: Coeff, mode: &ShiftMode) -> Result<CohomologyResult> {
    let mut total = CohomologyResult::new();
    for mask in 0..1u64 << k.m() {
        let j = VertexSubset::from_mask(mask);
        let summand = reduced_cohomology(&k.full_subcomplex(j), coeff)?.shifted(1);
        if summand.is_zero() {
            continue;
        }
        for (shift, count) in mode.coefficient_series(j)? {
            for (&deg, g) in summand.iter() {
                total.add(deg + shift, g.times(count));
            }
        }
    }
    Ok(total)
}

/// The summand H̃*(ΣK_J) alone.
pub fn suspended_full_subcomplex(k: &SimplicialComplex, j: VertexSubset, coeff: Coeff) -> Result<CohomologyResult> {
    Ok(reduced_cohomology(&k.full_subcomplex(j), coeff)?.shifted(1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Group;
    use crate::simplicial::catalog;

    fn z(k: &str) -> CohomologyResult {
        reduced_cohomology(&catalog(k).unwrap(), Coeff::Z).unwrap()
    }

    #[test]
    fn basic_reduced_cohomology() {
        let two = z("points2");
        assert_eq!(two.get(0), Group::free(1));
        assert_eq!(two.iter().count(), 1);

        let sq = z("gon4");
        assert_eq!(sq.get(1), Group::free(1));
        assert_eq!(sq.iter().count(), 1);

        let empty = reduced_cohomology(&SimplicialComplex::from_facets(2, &[]).unwrap(), Coeff::Z).unwrap();
        assert_eq!(empty.get(-1), Group::free(1));
        assert!(z("simplex3").is_zero());
    }

    #[test]
    fn rp2_torsion() {
        let h = z("rp2_6");
        assert_eq!(h.get(1), Group::free(0));
        assert_eq!(h.get(2), Group::with_torsion(0, &[2]));
        let h2 = reduced_cohomology(&catalog("rp2_6").unwrap(), Coeff::Zp(2)).unwrap();
        assert_eq!(h2.get(1), Group::free(1));
        assert_eq!(h2.get(2), Group::free(1));
        assert!(reduced_cohomology(&catalog("rp2_6").unwrap(), Coeff::Q)
            .unwrap()
            .is_zero());
    }

    #[test]
    fn real_mode_examples() {
        let h = splitting_oracle(&catalog("points2").unwrap(), Coeff::Z, &ShiftMode::Real).unwrap();
        assert_eq!(h.ranks(), vec![1, 1]);
        let h = splitting_oracle(&catalog("boundary3").unwrap(), Coeff::Z, &ShiftMode::Real).unwrap();
        assert_eq!(h.ranks(), vec![1, 0, 1]);
        // real moment-angle complex of the square is a torus
        let h = splitting_oracle(&catalog("gon4").unwrap(), Coeff::Z, &ShiftMode::Real).unwrap();
        assert_eq!(h.ranks(), vec![1, 2, 1]);
    }

    #[test]
    fn sphere_mode_examples() {
        let h = splitting_oracle(&catalog("points2").unwrap(), Coeff::Z, &ShiftMode::Spheres(vec![1, 1])).unwrap();
        assert_eq!(h.ranks(), vec![1, 0, 0, 1]);
        let h = splitting_oracle(
            &catalog("boundary3").unwrap(),
            Coeff::Z,
            &ShiftMode::Spheres(vec![1; 3]),
        )
        .unwrap();
        assert_eq!(h.ranks(), vec![1, 0, 0, 0, 0, 1]);
    }

    #[test]
    fn tensor_mode_matches_sphere_mode() {
        let k = catalog("gon5").unwrap();
        let a = splitting_oracle(&k, Coeff::Z, &ShiftMode::Spheres(vec![1, 2, 1, 3, 1])).unwrap();
        let b = splitting_oracle(
            &k,
            Coeff::Z,
            &ShiftMode::Tensor(vec![vec![1], vec![2], vec![1], vec![3], vec![1]]),
        )
        .unwrap();
        assert_eq!(a, b);
    }
}
