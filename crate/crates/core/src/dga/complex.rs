use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;
use serde::Serialize;

use super::{Accumulator, Combination};
use crate::error::{Error, Result};
use crate::linalg::{BigradedCohomology, Coeff, CohomologyResult, FiniteCochainComplex, IntegerMatrix};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BasisElement {
    pub label: String,
    /// (deg₁, deg₂) with deg₁ ≤ 0 ≤ deg₂.
    pub bidegree: (i32, i32),
    /// Support as a vertex bitmask.
    pub support: u64,
}

impl BasisElement {
    pub fn new(label: impl Into<String>, bidegree: (i32, i32), support: u64) -> Self {
        BasisElement {
            label: label.into(),
            bidegree,
            support,
        }
    }

    pub fn total_degree(&self) -> i32 {
        self.bidegree.0 + self.bidegree.1
    }
}

/// A cochain complex on an ordered basis with a sparse integer differential.
///
/// When `bigraded` is false the differential is only required to raise total degree
/// (coefficient differentials of a dga break the bigrading).
#[derive(Clone, Debug)]
pub struct MonomialComplex {
    name: String,
    basis: Vec<BasisElement>,
    index: HashMap<String, usize>,
    differential: Vec<Combination>,
    bigraded: bool,
    unit: Option<usize>,
}

/// A connected piece of the differential graph, flattened to a finite cochain complex.
pub(crate) struct Block {
    pub lowest: i32,
    /// Basis indices in each total degree, starting at `lowest`.
    pub by_degree: Vec<Vec<usize>>,
    pub complex: FiniteCochainComplex,
}

impl MonomialComplex {
    pub fn new(
        name: impl Into<String>,
        basis: Vec<BasisElement>,
        differential: Vec<Combination>,
        bigraded: bool,
    ) -> Result<Self> {
        let name = name.into();
        if basis.len() != differential.len() {
            return Err(Error::structural(format!(
                "{name}: {} basis elements but {} differential rows",
                basis.len(),
                differential.len()
            )));
        }
        let mut index = HashMap::with_capacity(basis.len());
        for (i, b) in basis.iter().enumerate() {
            if index.insert(b.label.clone(), i).is_some() {
                return Err(Error::structural(format!("{name}: duplicate basis label {}", b.label)));
            }
        }
        for row in &differential {
            if let Some(&(t, _)) = row.iter().find(|(t, c)| *t >= basis.len() || *c == 0) {
                return Err(Error::structural(format!(
                    "{name}: bad differential term for index {t}"
                )));
            }
        }
        Ok(MonomialComplex {
            name,
            basis,
            index,
            differential,
            bigraded,
            unit: None,
        })
    }

    pub fn with_unit(mut self, unit: usize) -> Self {
        self.unit = Some(unit);
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn basis(&self) -> &[BasisElement] {
        &self.basis
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn element(&self, i: usize) -> &BasisElement {
        &self.basis[i]
    }

    pub fn label(&self, i: usize) -> &str {
        &self.basis[i].label
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    pub fn is_bigraded(&self) -> bool {
        self.bigraded
    }

    pub fn unit(&self) -> Option<usize> {
        self.unit
    }

    /// d of a single basis element.
    pub fn d(&self, i: usize) -> &Combination {
        &self.differential[i]
    }

    pub fn apply_d(&self, c: &[(usize, i64)]) -> Combination {
        let mut acc = Accumulator::new();
        for &(i, v) in c {
            acc.add_all(&self.differential[i], v);
        }
        acc.finish()
    }

    /// Human-readable combination, e.g. `w2y1 - w1y2`.
    pub fn format(&self, c: &[(usize, i64)]) -> String {
        if c.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, &(i, v)) in c.iter().enumerate() {
            let label = &self.basis[i].label;
            let mag = v.unsigned_abs();
            let body = if mag == 1 {
                label.clone()
            } else {
                format!("{mag} {label}")
            };
            match (k, v < 0) {
                (0, false) => out.push_str(&body),
                (0, true) => out.push_str(&format!("-{body}")),
                (_, false) => out.push_str(&format!(" + {body}")),
                (_, true) => out.push_str(&format!(" - {body}")),
            }
        }
        out
    }

    /// A copy with the sign of one differential term flipped.
    pub fn with_flipped_sign(&self, source: usize, term: usize) -> Self {
        let mut out = self.clone();
        out.differential[source][term].1 *= -1;
        out
    }

    /// Number of nonzero differential terms.
    pub fn differential_terms(&self) -> usize {
        self.differential.iter().map(Vec::len).sum()
    }

    /// Connected components of the differential graph, each sorted, ordered by first index.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.basis.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for (s, row) in self.differential.iter().enumerate() {
            for &(t, _) in row {
                let (a, b) = (find(&mut parent, s), find(&mut parent, t));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for i in 0..n {
            let r = find(&mut parent, i);
            groups.entry(r).or_default().push(i);
        }
        groups.into_values().collect()
    }

    /// Basis indices grouped by support.
    pub fn support_blocks(&self) -> BTreeMap<u64, Vec<usize>> {
        let mut out: BTreeMap<u64, Vec<usize>> = BTreeMap::new();
        for (i, b) in self.basis.iter().enumerate() {
            out.entry(b.support).or_default().push(i);
        }
        out
    }

    /// The subcomplex spanned by `indices` (kept in the given order). Errors if d leaves it.
    pub fn subcomplex(&self, name: impl Into<String>, indices: &[usize]) -> Result<MonomialComplex> {
        let name = name.into();
        let position: HashMap<usize, usize> = indices.iter().enumerate().map(|(p, &i)| (i, p)).collect();
        let mut differential = Vec::with_capacity(indices.len());
        for &i in indices {
            let mut row = Vec::with_capacity(self.differential[i].len());
            for &(t, v) in &self.differential[i] {
                let Some(&p) = position.get(&t) else {
                    return Err(Error::structural(format!(
                        "{name}: d({}) leaves the subcomplex through {}",
                        self.basis[i].label, self.basis[t].label
                    )));
                };
                row.push((p, v));
            }
            row.sort_unstable();
            differential.push(row);
        }
        let basis = indices.iter().map(|&i| self.basis[i].clone()).collect();
        let mut sub = MonomialComplex::new(name, basis, differential, self.bigraded)?;
        sub.unit = self.unit.and_then(|u| position.get(&u).copied());
        Ok(sub)
    }

    pub(crate) fn block(&self, indices: &[usize]) -> Result<Block> {
        let degrees: Vec<i32> = indices.iter().map(|&i| self.basis[i].total_degree()).collect();
        let lowest = *degrees.iter().min().expect("nonempty block");
        let highest = *degrees.iter().max().expect("nonempty block");
        let mut by_degree = vec![Vec::new(); (highest - lowest + 1) as usize];
        let mut position = HashMap::with_capacity(indices.len());
        for (&i, &deg) in indices.iter().zip(&degrees) {
            let slot = &mut by_degree[(deg - lowest) as usize];
            position.insert(i, slot.len());
            slot.push(i);
        }
        let mut differentials = Vec::with_capacity(by_degree.len().saturating_sub(1));
        for k in 0..by_degree.len().saturating_sub(1) {
            let mut d = IntegerMatrix::zeros(by_degree[k + 1].len(), by_degree[k].len());
            for (col, &s) in by_degree[k].iter().enumerate() {
                for &(t, v) in &self.differential[s] {
                    if self.basis[t].total_degree() != lowest + k as i32 + 1 {
                        return Err(Error::structural(format!(
                            "{}: d({}) contains {} of the wrong degree",
                            self.name, self.basis[s].label, self.basis[t].label
                        )));
                    }
                    d.add_to(position[&t], col, v);
                }
            }
            differentials.push(d);
        }
        // the top degree must have zero differential as well
        if let Some(top) = by_degree.last() {
            if let Some(&s) = top.iter().find(|&&s| !self.differential[s].is_empty()) {
                return Err(Error::structural(format!(
                    "{}: d({}) contains a term of the wrong degree",
                    self.name, self.basis[s].label
                )));
            }
        }
        let ranks = by_degree.iter().map(Vec::len).collect();
        let complex = FiniteCochainComplex::new(lowest, ranks, differentials)?;
        Ok(Block {
            lowest,
            by_degree,
            complex,
        })
    }

    fn component_cohomology(&self, coeff: Coeff) -> Result<Vec<(Vec<usize>, CohomologyResult)>> {
        self.components()
            .into_par_iter()
            .map(|c| {
                let h = self.block(&c)?.complex.cohomology(coeff)?;
                Ok((c, h))
            })
            .collect()
    }

    /// Cohomology in total degree.
    pub fn cohomology(&self, coeff: Coeff) -> Result<CohomologyResult> {
        let mut total = CohomologyResult::new();
        for (_, h) in self.component_cohomology(coeff)? {
            total.merge(&h);
        }
        Ok(total)
    }

    /// Cohomology per bidegree. Only meaningful when d preserves deg₂.
    pub fn bigraded_cohomology(&self, coeff: Coeff) -> Result<BigradedCohomology> {
        if !self.bigraded {
            return Err(Error::structural(format!("{} is not bigraded", self.name)));
        }
        let mut out = BigradedCohomology::new();
        for (c, h) in self.component_cohomology(coeff)? {
            let q = self.basis[c[0]].bidegree.1;
            out.merge(&h.map_degrees(|n| (n - q, q)));
        }
        Ok(out)
    }

    /// Cohomology of each support block, keyed by the support mask.
    pub fn cohomology_by_support(&self, coeff: Coeff) -> Result<BTreeMap<u64, CohomologyResult>> {
        let mut out: BTreeMap<u64, CohomologyResult> = BTreeMap::new();
        for (c, h) in self.component_cohomology(coeff)? {
            out.entry(self.basis[c[0]].support).or_default().merge(&h);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Group;

    /// a → 2b, c isolated, e → f.
    fn toy() -> MonomialComplex {
        let basis = vec![
            BasisElement::new("a", (-1, 1), 1),
            BasisElement::new("b", (0, 1), 1),
            BasisElement::new("c", (0, 0), 0),
            BasisElement::new("e", (-1, 2), 3),
            BasisElement::new("f", (0, 2), 3),
        ];
        let d = vec![vec![(1, 2)], vec![], vec![], vec![(4, 1)], vec![]];
        MonomialComplex::new("toy", basis, d, true).unwrap().with_unit(2)
    }

    #[test]
    fn components_and_cohomology() {
        let c = toy();
        assert_eq!(c.components(), vec![vec![0, 1], vec![2], vec![3, 4]]);
        let h = c.cohomology(Coeff::Z).unwrap();
        assert_eq!(h.get(0), Group::free(1));
        assert_eq!(h.get(1), Group::with_torsion(0, &[2]));
        assert_eq!(h.get(2), Group::free(0));
        let b = c.bigraded_cohomology(Coeff::Zp(2)).unwrap();
        assert_eq!(b.get((0, 1)), Group::free(1));
        assert_eq!(b.get((-1, 1)), Group::free(1));
        assert_eq!(b.get((0, 0)), Group::free(1));
    }

    #[test]
    fn subcomplex_and_format() {
        let c = toy();
        assert!(c.subcomplex("bad", &[0]).is_err());
        let s = c.subcomplex("ok", &[3, 4]).unwrap();
        assert_eq!(s.d(0), &vec![(1, 1)]);
        assert_eq!(c.format(&[(0, 1), (1, -2), (4, -1)]), "a - 2 b - f");
        assert_eq!(c.with_flipped_sign(3, 0).d(3), &vec![(4, -1)]);
        assert_eq!(c.support_blocks()[&3], vec![3, 4]);
    }

    #[test]
    fn wrong_degree_is_structural() {
        let basis = vec![BasisElement::new("a", (0, 0), 0), BasisElement::new("b", (0, 0), 0)];
        let c = MonomialComplex::new("x", basis, vec![vec![(1, 1)], vec![]], true).unwrap();
        assert!(matches!(c.cohomology(Coeff::Q), Err(Error::Structural(_))));
    }
}
