//! Built-in complexes addressed by frozen names.

use super::{full_mask, SimplicialComplex, MAX_VERTICES};
use crate::error::{Error, Result};

/// The complexes every acceptance run is checked against.
pub const ACCEPTANCE_CATALOG: &[&str] = &[
    "simplex3",
    "boundary3",
    "boundary4",
    "boundary5",
    "gon4",
    "gon5",
    "gon6",
    "points2",
    "points3",
    "points4",
    "rp2_6",
];

/// Minimal 6-vertex triangulation of ℝP².
const RP2_6: [[usize; 3]; 10] = [
    [1, 2, 3],
    [1, 3, 4],
    [1, 4, 5],
    [1, 5, 6],
    [1, 2, 6],
    [2, 3, 5],
    [2, 4, 5],
    [2, 4, 6],
    [3, 4, 6],
    [3, 5, 6],
];

/// `simplex{m}` (Δ^{m−1}), `boundary{m}` (∂Δ^{m−1}), `gon{m}`, `points{m}`, `rp2_6`.
pub fn catalog(name: &str) -> Result<SimplicialComplex> {
    if name == "rp2_6" {
        let facets: Vec<Vec<usize>> = RP2_6.iter().map(|f| f.to_vec()).collect();
        return SimplicialComplex::from_facets(6, &facets);
    }
    let unknown = || Error::input(format!("unknown catalog complex {name:?}"));
    let split = name.find(|c: char| c.is_ascii_digit()).ok_or_else(unknown)?;
    let (family, digits) = name.split_at(split);
    let m: usize = digits.parse().map_err(|_| unknown())?;
    if m > MAX_VERTICES {
        return Err(unknown());
    }
    let all = full_mask(m);
    match family {
        "simplex" if m >= 1 => Ok(SimplicialComplex::from_facet_masks(m, &[all])),
        "boundary" if m >= 2 => {
            let facets: Vec<u64> = (0..m).map(|b| all & !(1 << b)).collect();
            Ok(SimplicialComplex::from_facet_masks(m, &facets))
        }
        "gon" if m >= 3 => {
            let facets: Vec<u64> = (0..m).map(|b| 1 << b | 1 << ((b + 1) % m)).collect();
            Ok(SimplicialComplex::from_facet_masks(m, &facets))
        }
        "points" if m >= 1 => {
            let facets: Vec<u64> = (0..m).map(|b| 1 << b).collect();
            Ok(SimplicialComplex::from_facet_masks(m, &facets))
        }
        _ => Err(unknown()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes() {
        assert_eq!(catalog("simplex3").unwrap().len(), 8);
        assert_eq!(catalog("boundary3").unwrap().len(), 7);
        assert_eq!(catalog("gon5").unwrap().f_vector(), vec![1, 5, 5]);
        assert_eq!(catalog("points4").unwrap().f_vector(), vec![1, 4]);
        assert_eq!(catalog("rp2_6").unwrap().f_vector(), vec![1, 6, 15, 10]);
    }

    #[test]
    fn rp2_euler_characteristic_is_one() {
        // reduced χ = χ − 1
        assert_eq!(catalog("rp2_6").unwrap().reduced_euler_characteristic(), 0);
    }

    #[test]
    fn rp2_is_a_closed_pseudomanifold() {
        let k = catalog("rp2_6").unwrap();
        let triangles: Vec<u64> = k.simplices().iter().copied().filter(|s| s.count_ones() == 3).collect();
        for &e in k.simplices().iter().filter(|s| s.count_ones() == 2) {
            assert_eq!(triangles.iter().filter(|&&t| t & e == e).count(), 2);
        }
    }

    #[test]
    fn unknown_names() {
        for n in ["", "gon", "gon2", "cube3", "simplex0", "points99"] {
            assert!(catalog(n).is_err(), "{n}");
        }
    }

    #[test]
    fn acceptance_catalog_resolves() {
        for n in ACCEPTANCE_CATALOG {
            catalog(n).unwrap();
        }
    }
}
