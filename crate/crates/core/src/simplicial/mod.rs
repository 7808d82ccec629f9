//! Simplicial complexes on the vertex set [m] = {1, …, m}, stored as bitmasks.

use std::cmp::Ordering;
use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub mod catalog;
pub mod oracle;

pub use catalog::{catalog, ACCEPTANCE_CATALOG};
pub use oracle::{reduced_cohomology, splitting_oracle, ShiftMode};

/// Largest supported vertex count.
pub const MAX_VERTICES: usize = 63;

/// Vertices of a bitmask, 1-based and increasing.
pub fn mask_vertices(mask: u64) -> Vec<usize> {
    (0..64).filter(|b| mask >> b & 1 == 1).map(|b| b + 1).collect()
}

pub fn vertices_mask(vertices: &[usize]) -> u64 {
    vertices.iter().fold(0, |acc, &v| acc | 1 << (v - 1))
}

/// Cardinality first, then lexicographic on the increasing vertex lists.
pub fn simplex_order(a: u64, b: u64) -> Ordering {
    a.count_ones()
        .cmp(&b.count_ones())
        .then_with(|| mask_vertices(a).cmp(&mask_vertices(b)))
}

/// A subset J ⊆ [m].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexSubset(u64);

impl VertexSubset {
    pub fn new(vertices: &[usize], m: usize) -> Result<Self> {
        for &v in vertices {
            if v == 0 || v > m {
                return Err(Error::input(format!("vertex {v} is outside [1, {m}]")));
            }
        }
        Ok(VertexSubset(vertices_mask(vertices)))
    }

    pub fn from_mask(mask: u64) -> Self {
        VertexSubset(mask)
    }

    pub fn full(m: usize) -> Self {
        VertexSubset(full_mask(m))
    }

    pub fn mask(&self) -> u64 {
        self.0
    }

    pub fn vertices(&self) -> Vec<usize> {
        mask_vertices(self.0)
    }

    pub fn len(&self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }
}

pub fn full_mask(m: usize) -> u64 {
    if m >= 64 {
        u64::MAX
    } else {
        (1u64 << m) - 1
    }
}

#[derive(Clone)]
pub struct SimplicialComplex {
    m: usize,
    simplices: Vec<u64>,
    lookup: HashSet<u64>,
}

impl SimplicialComplex {
    /// Downward closure of the facets; simplices ordered by cardinality then lexicographically.
    pub fn from_facets(m: usize, facets: &[Vec<usize>]) -> Result<Self> {
        if m > MAX_VERTICES {
            return Err(Error::input(format!(
                "at most {MAX_VERTICES} vertices are supported, got {m}"
            )));
        }
        let mut masks = Vec::with_capacity(facets.len());
        for f in facets {
            masks.push(VertexSubset::new(f, m)?.mask());
        }
        Ok(Self::from_facet_masks(m, &masks))
    }

    pub(crate) fn from_facet_masks(m: usize, facets: &[u64]) -> Self {
        let mut lookup = HashSet::new();
        lookup.insert(0u64);
        for &f in facets {
            if lookup.contains(&f) {
                continue;
            }
            // enumerate all submasks of f
            let mut sub = f;
            loop {
                lookup.insert(sub);
                if sub == 0 {
                    break;
                }
                sub = (sub - 1) & f;
            }
        }
        Self::from_simplex_set(m, lookup)
    }

    fn from_simplex_set(m: usize, lookup: HashSet<u64>) -> Self {
        let mut simplices: Vec<u64> = lookup.iter().copied().collect();
        simplices.sort_by(|&a, &b| simplex_order(a, b));
        SimplicialComplex { m, simplices, lookup }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// All simplices including ∅, in (cardinality, lexicographic) order.
    pub fn simplices(&self) -> &[u64] {
        &self.simplices
    }

    pub fn contains(&self, mask: u64) -> bool {
        self.lookup.contains(&mask)
    }

    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.len() <= 1
    }

    /// Maximal simplices, in simplex order.
    pub fn facets(&self) -> Vec<u64> {
        self.simplices
            .iter()
            .copied()
            .filter(|&s| (0..self.m).all(|b| s >> b & 1 == 1 || !self.lookup.contains(&(s | 1 << b))))
            .collect()
    }

    /// Number of simplices of each dimension −1, 0, 1, …
    pub fn f_vector(&self) -> Vec<usize> {
        let top = self.simplices.last().map_or(0, |s| s.count_ones() as usize);
        let mut f = vec![0; top + 1];
        for s in &self.simplices {
            f[s.count_ones() as usize] += 1;
        }
        f
    }

    /// Reduced Euler characteristic Σ (−1)^dim f_dim, counting ∅ in dimension −1.
    pub fn reduced_euler_characteristic(&self) -> i64 {
        self.simplices
            .iter()
            .map(|s| if s.count_ones() % 2 == 1 { 1 } else { -1 })
            .sum()
    }

    /// K_J = {σ ∈ K : σ ⊆ J}, re-indexed over J (the i-th smallest vertex of J becomes i).
    pub fn full_subcomplex(&self, j: VertexSubset) -> SimplicialComplex {
        let verts = j.vertices();
        let mut lookup = HashSet::new();
        for &s in &self.simplices {
            if s & !j.mask() == 0 {
                let mut t = 0u64;
                for (new, &v) in verts.iter().enumerate() {
                    if s >> (v - 1) & 1 == 1 {
                        t |= 1 << new;
                    }
                }
                lookup.insert(t);
            }
        }
        Self::from_simplex_set(verts.len(), lookup)
    }

    /// K_J without re-indexing: the simplices of K contained in J, still on [m].
    pub fn restriction(&self, j: VertexSubset) -> SimplicialComplex {
        let lookup = self.lookup.iter().copied().filter(|&s| s & !j.mask() == 0).collect();
        Self::from_simplex_set(self.m, lookup)
    }

    /// Applies the vertex permutation `perm` (1-based: vertex v goes to perm[v-1]).
    pub fn relabel(&self, perm: &[usize]) -> Result<SimplicialComplex> {
        let mut seen = vec![false; self.m];
        if perm.len() != self.m {
            return Err(Error::input("permutation has the wrong length"));
        }
        for &p in perm {
            if p == 0 || p > self.m || seen[p - 1] {
                return Err(Error::input(format!(
                    "{perm:?} is not a permutation of [1, {}]",
                    self.m
                )));
            }
            seen[p - 1] = true;
        }
        let lookup = self
            .lookup
            .iter()
            .map(|&s| {
                mask_vertices(s)
                    .iter()
                    .fold(0u64, |acc, &v| acc | 1 << (perm[v - 1] - 1))
            })
            .collect();
        Ok(Self::from_simplex_set(self.m, lookup))
    }

    /// True when some vertex lies in every facet (so |K| is contractible) and K ≠ {∅}.
    pub fn is_cone(&self) -> bool {
        let facets = self.facets();
        !facets.is_empty() && facets[0] != 0 && facets.iter().fold(u64::MAX, |acc, &f| acc & f) != 0
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let file: ComplexFile = serde_json::from_str(s)?;
        Self::from_facets(file.m, &file.facets)
    }

    pub fn to_json(&self) -> String {
        let file = ComplexFile {
            m: self.m,
            facets: self.facets().into_iter().map(mask_vertices).collect(),
        };
        serde_json::to_string(&file).expect("serializable")
    }
}

impl PartialEq for SimplicialComplex {
    fn eq(&self, other: &Self) -> bool {
        self.m == other.m && self.simplices == other.simplices
    }
}

impl Eq for SimplicialComplex {}

impl fmt::Debug for SimplicialComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let facets: Vec<Vec<usize>> = self.facets().into_iter().map(mask_vertices).collect();
        write!(f, "SimplicialComplex {{ m: {}, facets: {:?} }}", self.m, facets)
    }
}

/// On-disk complex format: `{"m": 4, "facets": [[1,2],[2,3]]}` with 1-based vertices.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ComplexFile {
    pub m: usize,
    pub facets: Vec<Vec<usize>>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sets(k: &SimplicialComplex) -> Vec<Vec<usize>> {
        k.simplices().iter().map(|&s| mask_vertices(s)).collect()
    }

    #[test]
    fn closure_of_a_path() {
        let k = SimplicialComplex::from_facets(3, &[vec![1, 2], vec![2, 3]]).unwrap();
        assert_eq!(
            sets(&k),
            vec![vec![], vec![1], vec![2], vec![3], vec![1, 2], vec![2, 3]]
        );
    }

    #[test]
    fn full_triangle_and_empty() {
        let k = SimplicialComplex::from_facets(3, &[vec![1, 2, 3]]).unwrap();
        assert_eq!(k.len(), 8);
        let e = SimplicialComplex::from_facets(2, &[]).unwrap();
        assert_eq!(sets(&e), vec![Vec::<usize>::new()]);
    }

    #[test]
    fn out_of_range_vertex() {
        assert!(matches!(
            SimplicialComplex::from_facets(2, &[vec![1, 3]]),
            Err(Error::Input(_))
        ));
        assert!(SimplicialComplex::from_facets(2, &[vec![0]]).is_err());
    }

    #[test]
    fn full_subcomplexes() {
        let tri = catalog("boundary3").unwrap();
        let e = tri.full_subcomplex(VertexSubset::new(&[1, 2], 3).unwrap());
        assert_eq!(sets(&e), vec![vec![], vec![1], vec![2], vec![1, 2]]);

        let square = catalog("gon4").unwrap();
        let pts = square.full_subcomplex(VertexSubset::new(&[1, 3], 4).unwrap());
        assert_eq!(sets(&pts), vec![vec![], vec![1], vec![2]]);

        let empty = square.full_subcomplex(VertexSubset::from_mask(0));
        assert_eq!(sets(&empty), vec![Vec::<usize>::new()]);
        assert_eq!(square.full_subcomplex(VertexSubset::full(4)), square);
    }

    #[test]
    fn json_round_trip() {
        let k = SimplicialComplex::from_json(r#"{"m": 4, "facets": [[1,2],[2,3],[3,4],[1,4]]}"#).unwrap();
        assert_eq!(k, catalog("gon4").unwrap());
        assert_eq!(SimplicialComplex::from_json(&k.to_json()).unwrap(), k);
        let err = SimplicialComplex::from_json("{\"m\": 2,\n \"facets\": [[1,]]}").unwrap_err();
        assert!(err.to_string().contains("line 2"), "{err}");
    }

    #[test]
    fn relabel_and_cone() {
        let k = SimplicialComplex::from_facets(3, &[vec![1, 2]]).unwrap();
        let r = k.relabel(&[3, 1, 2]).unwrap();
        assert!(r.contains(vertices_mask(&[1, 3])));
        assert!(k.relabel(&[1, 1, 2]).is_err());
        assert!(catalog("simplex3").unwrap().is_cone());
        assert!(!catalog("boundary3").unwrap().is_cone());
    }
}
